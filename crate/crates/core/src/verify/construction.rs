//! The two exterior subplanes through a subline with a given splash, built
//! in PG(6,q) from the 3-spaces about cover planes.

use alloc::vec;
use alloc::vec::Vec;

use crate::bruckbose::{self, lift, BruckBoseContext, Pt3};
use crate::curves::{self, RationalCurve};
use crate::error::GeomError;
use crate::gfq::Elem;
use crate::poly::Poly;
use crate::projgeom::{self, ProjPoint, ProjSubspace};
use crate::splash::{Cover, Splash, Subplane};

/// Every intermediate object of the construction.
#[derive(Clone, Debug)]
pub struct ConstructionTrace {
    pub subline: Vec<Pt3>,
    /// The point where the line of the subline meets ℓ∞.
    pub line_point: Pt3,
    /// Images of the subline points in PG(6,q).
    pub images: Vec<ProjPoint>,
    /// `L_ij` for `i <= j`, as points of Σ∞ in PG(6,q).
    pub l_points: Vec<((usize, usize), ProjPoint)>,
    /// Tangent lines `m_i` to the image of the subline.
    pub tangents: Vec<ProjSubspace>,
    /// Cover planes `α_ij` of the first cover and `β_ij` of the second.
    pub alpha: Vec<ProjSubspace>,
    pub beta: Vec<ProjSubspace>,
    /// The 3-spaces `Σ_ij` and `Γ_ij`.
    pub sigma: Vec<ProjSubspace>,
    pub gamma: Vec<ProjSubspace>,
    pub pi1_points: Vec<Pt3>,
    pub pi2_points: Vec<Pt3>,
}

/// The image of the subline as a twisted cubic `θ ↦ [b' + θ a']`.
pub fn subline_curve(ctx: &BruckBoseContext, b: &[Pt3]) -> Result<RationalCurve, GeomError> {
    let t = ctx.tower();
    let (a, c) = bruckbose::subline_basis(t, &b[0], &b[1], &b[2]).ok_or(GeomError::NotASubline)?;
    let g = [0, 1, 2].map(|i| Poly::new(vec![c[i], a[i]]));
    curves::bb_image_of_param(ctx, &g, 1)
}

fn unique_plane<'a>(ctx: &BruckBoseContext, cover: &'a Cover, v: &[Elem]) -> Result<&'a ProjSubspace, GeomError> {
    let f = ctx.tower().base();
    let mut hits = cover.planes.iter().filter(|p| p.contains_vec(f, v));
    let first = hits.next().ok_or(GeomError::CoverPlaneAmbiguous)?;
    if hits.next().is_some() {
        return Err(GeomError::CoverPlaneAmbiguous);
    }
    Ok(first)
}

fn assemble(ctx: &BruckBoseContext, spaces: &[ProjSubspace]) -> Result<Vec<Pt3>, GeomError> {
    let f = ctx.tower().base();
    let mut pts: Vec<Pt3> = Vec::new();
    for (i, a) in spaces.iter().enumerate() {
        for b in &spaces[i + 1..] {
            let m = a.meet(f, b)?;
            if m.rank() != 1 {
                return Err(GeomError::NotASubplane);
            }
            let p = ProjPoint::new(f, &m.basis()[0]).ok_or(GeomError::NotASubplane)?;
            if p.coords()[6].is_zero() {
                return Err(GeomError::NotASubplane);
            }
            pts.push(ctx.eps_inv(&p));
        }
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Build both subplanes containing the exterior subline `b` with splash
/// `splash`, one from each cover: `π1` from `covers[0]`, `π2` from `covers[1]`.
pub fn construct_two_subplanes(
    ctx: &BruckBoseContext,
    splash: &Splash,
    covers: &[Cover; 2],
    b: &[Pt3],
) -> Result<(Subplane, Subplane, ConstructionTrace), GeomError> {
    let t = ctx.tower();
    let f = t.base();
    let cf = t.cubic();
    let q = t.q() as usize;
    if q < 3 {
        return Err(GeomError::QTooSmall);
    }
    let mut sub: Vec<Pt3> = b.iter().map(|p| projgeom::normalize3(cf, *p).ok_or(GeomError::NotASubline)).collect::<Result<_, _>>()?;
    sub.sort();
    sub.dedup();
    if sub.len() != q + 1 || !bruckbose::is_subline(t, &sub) {
        return Err(GeomError::NotASubline);
    }
    if sub.iter().any(|p| p[2].is_zero()) {
        return Err(GeomError::NotASubline);
    }
    let line = projgeom::normalize3(cf, projgeom::cross(cf, &sub[0], &sub[1])).ok_or(GeomError::NotASubline)?;
    let lp = projgeom::normalize3(cf, [line[1], cf.neg(line[0]), Elem::ZERO]).ok_or(GeomError::LineAtInfinity)?;
    if !splash.bits().contains(ctx.inf_index(&lp)) {
        return Err(GeomError::NotASubline);
    }
    let plane_l = ctx.spread_plane(&lp).clone();
    let curve = subline_curve(ctx, &sub)?;
    let images: Vec<ProjPoint> = sub.iter().map(|p| ctx.eps(p)).collect();
    let params: Vec<Option<Elem>> =
        images.iter().map(|p| curve.parameter_of(f, p).ok_or(GeomError::PointNotOnCurve)).collect::<Result<_, _>>()?;

    let mut l_points = Vec::new();
    let mut tangents = Vec::new();
    let (mut alpha, mut beta, mut sigma, mut gamma) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for i in 0..=q {
        let tan = curve.tangent_at_param(f, params[i])?;
        for j in i..=q {
            let l = if i == j {
                let lim = curve.tangent_limit_point(f, params[i])?;
                if !tan.contains(f, &lim) {
                    return Err(GeomError::ClassificationInconsistent);
                }
                lim
            } else {
                let a = images[i].coords();
                let c = images[j].coords();
                let v: Vec<_> = a.iter().zip(c).map(|(&x, &y)| f.sub(f.mul(c[6], x), f.mul(a[6], y))).collect();
                ProjPoint::new(f, &v).ok_or(GeomError::DegenerateConic)?
            };
            let v6 = &l.coords()[..6];
            if !l.coords()[6].is_zero() || !plane_l.contains_vec(f, v6) {
                return Err(GeomError::PointOutsidePlane);
            }
            let a = unique_plane(ctx, &covers[0], v6)?.clone();
            let bt = unique_plane(ctx, &covers[1], v6)?.clone();
            let pi = images[i].coords().to_vec();
            let sa = ProjSubspace::from_rows(f, 6, &[lift(&a.basis()[0]), lift(&a.basis()[1]), lift(&a.basis()[2]), pi.clone()]);
            let sb = ProjSubspace::from_rows(f, 6, &[lift(&bt.basis()[0]), lift(&bt.basis()[1]), lift(&bt.basis()[2]), pi]);
            l_points.push(((i, j), l));
            alpha.push(a);
            beta.push(bt);
            sigma.push(sa);
            gamma.push(sb);
        }
        tangents.push(tan);
    }
    let pi1_points = assemble(ctx, &sigma)?;
    let pi2_points = assemble(ctx, &gamma)?;
    let pi1 = Subplane::from_points(t, &pi1_points)?;
    let pi2 = Subplane::from_points(t, &pi2_points)?;
    let trace = ConstructionTrace {
        subline: sub,
        line_point: lp,
        images,
        l_points,
        tangents,
        alpha,
        beta,
        sigma,
        gamma,
        pi1_points,
        pi2_points,
    };
    Ok((pi1, pi2, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::FieldTower;
    use crate::splash;
    use alloc::sync::Arc;

    #[test]
    fn rebuilds_the_canonical_pair() {
        let ctx = BruckBoseContext::new(Arc::new(FieldTower::for_q(3).unwrap()));
        let (b, s, _) = splash::canonical_subplane(&ctx);
        let comp = splash::companion_subplane(&ctx);
        let covers = splash::covers_of(&ctx, &s).unwrap();
        let common: Vec<Pt3> = b.points().iter().filter(|p| comp.contains(p)).copied().collect();
        let (p1, p2, tr) = construct_two_subplanes(&ctx, &s, &covers, &common).unwrap();
        assert_ne!(p1, p2);
        let mut got = [p1, p2];
        got.sort_by(|a, c| a.points().cmp(c.points()));
        let mut want = [b, comp];
        want.sort_by(|a, c| a.points().cmp(c.points()));
        assert_eq!(got, want);
        assert_eq!(tr.l_points.len(), 4 + 6);
    }
}
