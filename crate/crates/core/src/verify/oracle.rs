//! Brute-force subplane oracle: close a point set under joins, meets and
//! subline closure of collinear triples, with no use of homographies.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::bruckbose::{self, BruckBoseContext, Pt3};
use crate::error::GeomError;
use crate::gfq::{Elem, FieldTower};
use crate::projgeom;
use crate::splash::Splash;

/// An order-q subplane found by closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPlane {
    /// Sorted points.
    pub points: Vec<Pt3>,
    /// Lines as normalized duals, each with its sorted points.
    pub lines: Vec<(Pt3, Vec<Pt3>)>,
}

impl ClosedPlane {
    pub fn is_exterior(&self) -> bool {
        self.points.iter().all(|p| !p[2].is_zero())
    }

    pub fn contains(&self, p: &Pt3) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Spread indices of the points where the lines meet ℓ∞, sorted.
    pub fn splash_indices(&self, ctx: &BruckBoseContext) -> Vec<usize> {
        let cf = ctx.tower().cubic();
        let mut out: Vec<usize> = self
            .lines
            .iter()
            .map(|(d, _)| {
                // d ∩ [0,0,1] = (d1, -d0, 0)
                let p = projgeom::normalize3(cf, [d[1], cf.neg(d[0]), Elem::ZERO]).expect("line is not ℓ∞");
                ctx.inf_index(&p)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// True when the subplane is exterior with the given splash.
    pub fn has_splash(&self, ctx: &BruckBoseContext, splash: &Splash) -> bool {
        self.is_exterior() && self.splash_indices(ctx) == splash.indices()
    }
}

fn join(t: &FieldTower, a: &Pt3, b: &Pt3) -> Option<Pt3> {
    let cf = t.cubic();
    projgeom::normalize3(cf, projgeom::cross(cf, a, b))
}

/// Close `seed` to the order-q subplane it generates. `None` when the set
/// outgrows `q^2+q+1` points, some line carries a non-subline, or the result
/// fails the axioms of a projective plane of order q.
pub fn close_subplane(t: &FieldTower, seed: &[Pt3]) -> Option<ClosedPlane> {
    let cf = t.cubic();
    let q = t.q() as usize;
    let n = q * q + q + 1;
    let mut pts: Vec<Pt3> = seed.iter().map(|p| projgeom::normalize3(cf, *p).expect("nonzero")).collect();
    pts.sort();
    pts.dedup();
    loop {
        if pts.len() > n {
            return None;
        }
        let mut lines: Vec<(Pt3, Vec<usize>)> = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = join(t, &pts[i], &pts[j])?;
                match lines.iter_mut().find(|l| l.0 == d) {
                    Some(l) => {
                        if !l.1.contains(&i) {
                            l.1.push(i);
                        }
                        if !l.1.contains(&j) {
                            l.1.push(j);
                        }
                    }
                    None => lines.push((d, alloc::vec![i, j])),
                }
            }
        }
        let mut fresh: BTreeSet<Pt3> = BTreeSet::new();
        for (_, on) in &lines {
            if on.len() > q + 1 {
                return None;
            }
            if on.len() >= 3 {
                let sub = bruckbose::subline_closure(t, &pts[on[0]], &pts[on[1]], &pts[on[2]])?;
                if on.iter().any(|&k| sub.binary_search(&pts[k]).is_err()) {
                    return None;
                }
                for p in sub {
                    if pts.binary_search(&p).is_err() {
                        fresh.insert(p);
                    }
                }
            }
        }
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let p = join(t, &lines[i].0, &lines[j].0).expect("distinct lines");
                if pts.binary_search(&p).is_err() {
                    fresh.insert(p);
                }
            }
        }
        if fresh.is_empty() {
            // axioms: n points, n lines, q+1 points on each line
            if pts.len() != n || lines.len() != n || lines.iter().any(|l| l.1.len() != q + 1) {
                return None;
            }
            let mut out: Vec<(Pt3, Vec<Pt3>)> = lines
                .into_iter()
                .map(|(d, on)| {
                    let mut v: Vec<Pt3> = on.iter().map(|&k| pts[k]).collect();
                    v.sort();
                    (d, v)
                })
                .collect();
            out.sort();
            return Some(ClosedPlane { points: pts, lines: out });
        }
        pts.extend(fresh);
        pts.sort();
    }
}

/// Every order-q subplane containing the subline `b` (of at least three
/// listed points on an affine line). Each is the closure of `b` with a point
/// `R` off the line and a point `Y` of the line `R P1`. With a splash, only
/// exterior subplanes with that splash are kept, and `R`, `Y` must join the
/// points already chosen in lines through the splash.
pub fn subplanes_through_subline(
    ctx: &BruckBoseContext,
    b: &[Pt3],
    splash: Option<&Splash>,
    budget: u64,
) -> Result<Vec<ClosedPlane>, GeomError> {
    let t = ctx.tower();
    let cf = t.cubic();
    if b.len() < 3 {
        return Err(GeomError::NotASubline);
    }
    let line = join(t, &b[0], &b[1]).ok_or(GeomError::NotASubline)?;
    let n3 = cf.order() as u64;
    let needed = n3 * n3 * n3;
    if needed > budget {
        return Err(GeomError::BudgetExceeded { needed, budget });
    }
    let in_splash = |a: &Pt3, c: &Pt3| -> bool {
        match splash {
            None => true,
            Some(s) => match join(t, a, c) {
                Some(d) => match projgeom::normalize3(cf, [d[1], cf.neg(d[0]), Elem::ZERO]) {
                    Some(p) => s.bits().contains(ctx.inf_index(&p)),
                    None => false,
                },
                None => true,
            },
        }
    };
    let p1 = b[0];
    let mut found: BTreeSet<Vec<Pt3>> = BTreeSet::new();
    let mut out = Vec::new();
    for x in cf.elements() {
        for y in cf.elements() {
            let r = [x, y, Elem::ONE];
            if projgeom::incident3(cf, &line, &r) || !b.iter().all(|p| in_splash(p, &r)) {
                continue;
            }
            let mut local: Vec<ClosedPlane> = Vec::new();
            for s in cf.nonzero() {
                let v = [
                    cf.add(r[0], cf.mul(s, p1[0])),
                    cf.add(r[1], cf.mul(s, p1[1])),
                    cf.add(r[2], cf.mul(s, p1[2])),
                ];
                let Some(yp) = projgeom::normalize3(cf, v) else { continue };
                if yp == r || local.iter().any(|c| c.contains(&yp)) {
                    continue;
                }
                if splash.is_some() && (yp[2].is_zero() || !b.iter().all(|p| in_splash(p, &yp))) {
                    continue;
                }
                let mut seed = b.to_vec();
                seed.push(r);
                seed.push(yp);
                if let Some(c) = close_subplane(t, &seed) {
                    if splash.is_some_and(|sp| !c.has_splash(ctx, sp)) {
                        continue;
                    }
                    if found.insert(c.points.clone()) {
                        out.push(c.clone());
                    }
                    local.push(c);
                }
            }
        }
    }
    out.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(out)
}

/// Every exterior order-q subplane with the given splash, from the closures
/// of all quadruples of affine points whose six joins meet ℓ∞ in the splash.
pub fn exterior_subplanes_with_splash(ctx: &BruckBoseContext, splash: &Splash, budget: u64) -> Result<Vec<ClosedPlane>, GeomError> {
    let t = ctx.tower();
    let cf = t.cubic();
    let affine: Vec<Pt3> = cf.elements().flat_map(|x| cf.elements().map(move |y| [x, y, Elem::ONE])).collect();
    let n = affine.len() as u64;
    let needed = n * (n - 1) * (n - 2) * (n - 3) / 24;
    if needed > budget {
        return Err(GeomError::BudgetExceeded { needed, budget });
    }
    let m = affine.len();
    // ok[i][j]: the join of i and j meets ℓ∞ in the splash
    let mut ok = alloc::vec![alloc::vec![false; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = join(t, &affine[i], &affine[j]).expect("distinct");
            let p = projgeom::normalize3(cf, [d[1], cf.neg(d[0]), Elem::ZERO]).expect("affine line");
            let hit = splash.bits().contains(ctx.inf_index(&p));
            ok[i][j] = hit;
            ok[j][i] = hit;
        }
    }
    let collinear = |a: &Pt3, b: &Pt3, c: &Pt3| projgeom::incident3(cf, &join(t, a, b).expect("distinct"), c);
    let mut found: BTreeSet<Vec<Pt3>> = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if !ok[i][j] {
                continue;
            }
            for k in j + 1..m {
                if !ok[i][k] || !ok[j][k] || collinear(&affine[i], &affine[j], &affine[k]) {
                    continue;
                }
                for l in k + 1..m {
                    if !ok[i][l] || !ok[j][l] || !ok[k][l] {
                        continue;
                    }
                    let (a, b, c, d) = (&affine[i], &affine[j], &affine[k], &affine[l]);
                    if collinear(a, b, d) || collinear(a, c, d) || collinear(b, c, d) {
                        continue;
                    }
                    let Some(cl) = close_subplane(t, &[*a, *b, *c, *d]) else { continue };
                    if cl.has_splash(ctx, splash) && found.insert(cl.points.clone()) {
                        out.push(cl);
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splash;
    use alloc::sync::Arc;

    #[test]
    fn closure_recovers_canonical_subplane() {
        for q in [2, 3, 4] {
            let ctx = BruckBoseContext::new(Arc::new(FieldTower::for_q(q).unwrap()));
            let (b, s, _) = splash::canonical_subplane(&ctx);
            let quad = splash::quadrangle_in(ctx.tower(), b.points()).unwrap();
            let cl = close_subplane(ctx.tower(), &quad).unwrap();
            assert_eq!(cl.points, b.points());
            assert!(cl.has_splash(&ctx, &s));
        }
    }

    #[test]
    fn collinear_seed_does_not_close() {
        let t = FieldTower::for_q(3).unwrap();
        let b = splash::base_subplane(&t);
        let l = &b.lines()[0];
        assert!(close_subplane(&t, &l.points).is_none());
    }
}
