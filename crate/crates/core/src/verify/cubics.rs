//! Twisted cubics in the 3-spaces of PG(6,q) through a plane of Σ∞.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::bruckbose::{lift, BruckBoseContext};
use crate::curves::{self, RationalCurve};
use crate::error::GeomError;
use crate::gfq::{Elem, Field, FieldTower};
use crate::linalg;
use crate::poly::Poly;
use crate::projgeom::{ProjPoint, ProjSubspace};

/// The 3-space spanned by a plane of Σ∞ and an affine point.
#[derive(Clone, Debug)]
pub struct Space3 {
    pub plane: ProjSubspace,
    /// Basis of the plane lifted to PG(6,q), then the affine point.
    pub basis: [Vec<Elem>; 4],
}

impl Space3 {
    pub fn new(plane: &ProjSubspace, apex: &[Elem]) -> Space3 {
        let b = plane.basis();
        Space3 { plane: plane.clone(), basis: [lift(&b[0]), lift(&b[1]), lift(&b[2]), apex.to_vec()] }
    }

    pub fn span(&self, f: &Field) -> ProjSubspace {
        ProjSubspace::from_rows(f, 6, &self.basis)
    }

    /// The curve `θ ↦ Σ local_k(θ) basis_k`.
    pub fn curve(&self, f: &Field, local: &[Poly; 4], deg: usize) -> Result<RationalCurve, GeomError> {
        let polys: Vec<Poly> = (0..7)
            .map(|c| {
                let mut p = Poly::zero();
                for (k, lp) in local.iter().enumerate() {
                    p = p.add(f, &lp.scale(f, self.basis[k][c]));
                }
                p
            })
            .collect();
        RationalCurve::from_polys(f, polys, deg)
    }
}

/// All `q^3` 3-spaces through `plane` not contained in Σ∞, one affine point
/// each from a complement of the plane.
pub fn spaces_about(f: &Field, plane: &ProjSubspace) -> Vec<Space3> {
    let mut rows = plane.basis().clone();
    let mut comp: Vec<Vec<Elem>> = Vec::new();
    for k in 0..6 {
        let mut e = vec![Elem::ZERO; 6];
        e[k] = Elem::ONE;
        rows.push(e.clone());
        if linalg::rank(f, &rows) == 3 + comp.len() + 1 {
            comp.push(e);
        } else {
            rows.pop();
        }
    }
    debug_assert_eq!(comp.len(), 3);
    let mut out = Vec::new();
    for s0 in f.elements() {
        for s1 in f.elements() {
            for s2 in f.elements() {
                let mut v: Vec<Elem> = (0..6)
                    .map(|i| f.add(f.add(f.mul(s0, comp[0][i]), f.mul(s1, comp[1][i])), f.mul(s2, comp[2][i])))
                    .collect();
                v.push(Elem::ONE);
                out.push(Space3::new(plane, &v));
            }
        }
    }
    out
}

/// Rational points together with the points in Σ∞ over GF(q^3): `q+4`
/// points of a twisted cubic, which determine it.
pub fn cubic_key(t: &FieldTower, n: &RationalCurve) -> Vec<ProjPoint> {
    let cn = t.cubic().order();
    let mut key: Vec<ProjPoint> = n.points(t.base()).iter().map(|p| p.extend(cn)).collect();
    key.extend(n.sigma_inf_points_ext(t));
    key.sort();
    key.dedup();
    key
}

/// The minimal polynomial `θ^3 - t2 θ^2 - t1 θ - t0` of τ.
pub fn tau_min_poly(t: &FieldTower) -> Poly {
    let f = t.base();
    let [t0, t1, t2] = t.t();
    Poly::new(vec![f.neg(t0), f.neg(t1), f.neg(t2), Elem::ONE])
}

/// Every twisted cubic of the 3-space whose Σ∞ points lie one on each
/// transversal: `V(θ) = a m(θ) + r(θ)` on the plane and `m(θ)` on the apex,
/// with `V(τ) = λ T` for the transversal point `T` of the plane,
/// `a ∈ GF(q)^3`, `λ ∈ GF(q^3)^*`. Deduplicated by [`cubic_key`].
pub fn x_special_cubics(ctx: &BruckBoseContext, space: &Space3, transversals: &[ProjSubspace; 3]) -> Result<Vec<RationalCurve>, GeomError> {
    let t = ctx.tower();
    let f = t.base();
    let cf = t.cubic();
    let ext = space.plane.extend(cf.order());
    let m = ext.meet(cf, &transversals[0])?;
    if m.rank() != 1 {
        return Err(GeomError::AmbientMismatch);
    }
    let tc = curves::plane_coords(cf, &ext, &m.basis()[0]).ok_or(GeomError::AmbientMismatch)?;
    let mp = tau_min_poly(t);
    let mut seen: BTreeSet<Vec<ProjPoint>> = BTreeSet::new();
    let mut out = Vec::new();
    for lam in cf.nonzero() {
        let r: Vec<Poly> = tc.iter().map(|&x| Poly::new(t.coords_of(cf.mul(lam, x)).to_vec())).collect();
        for a0 in f.elements() {
            for a1 in f.elements() {
                for a2 in f.elements() {
                    let a = [a0, a1, a2];
                    let v: Vec<Poly> = (0..3).map(|i| mp.scale(f, a[i]).add(f, &r[i])).collect();
                    let local = [v[0].clone(), v[1].clone(), v[2].clone(), mp.clone()];
                    let n = space.curve(f, &local, 3)?;
                    if seen.insert(cubic_key(t, &n)) {
                        out.push(n);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All twisted cubics of a 3-space over GF(2): the images of
/// `(1, θ, θ^2, θ^3)` under GL(4,2), deduplicated.
pub fn all_twisted_cubics_q2(t: &FieldTower, space: &Space3) -> Result<Vec<RationalCurve>, GeomError> {
    let f = t.base();
    if f.order() != 2 {
        return Err(GeomError::BudgetExceeded { needed: u64::MAX, budget: 0 });
    }
    let mut seen: BTreeSet<Vec<ProjPoint>> = BTreeSet::new();
    let mut out = Vec::new();
    for bits in 0u32..1 << 16 {
        let m: Vec<Vec<Elem>> = (0..4).map(|i| (0..4).map(|j| Elem((bits >> (4 * i + j)) & 1)).collect()).collect();
        if linalg::rank(f, &m) != 4 {
            continue;
        }
        // local_i(θ) = Σ_j m[i][j] θ^j
        let local = [0, 1, 2, 3].map(|i| Poly::new(m[i].clone()));
        let n = space.curve(f, &local, 3)?;
        if seen.insert(points_over_cubic_field(t, &n)) {
            out.push(n);
        }
    }
    Ok(out)
}

/// All `q^3+1` points over GF(q^3), sorted; these determine any curve.
pub fn points_over_cubic_field(t: &FieldTower, n: &RationalCurve) -> Vec<ProjPoint> {
    let cf = t.cubic();
    let mut v: Vec<ProjPoint> = curves::parameters(cf).into_iter().map(|th| n.point_at_ext(cf, th)).collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splash;
    use alloc::sync::Arc;

    #[test]
    fn generator_gives_special_cubics() {
        let ctx = BruckBoseContext::new(Arc::new(FieldTower::for_q(2).unwrap()));
        let (_, s, _) = splash::canonical_subplane(&ctx);
        let covers = splash::covers_of(&ctx, &s).unwrap();
        let cv = &covers[0];
        let sp = &spaces_about(ctx.tower().base(), &cv.planes[0])[3];
        let cubics = x_special_cubics(&ctx, sp, &cv.transversals).unwrap();
        assert_eq!(cubics.len(), 56);
        for n in &cubics {
            assert_eq!(curves::classify_rational(n), curves::CurveClass::TwistedCubic);
            assert!(curves::is_x_special_cubic(&ctx, n, &cv.planes[0], &cv.transversals).unwrap());
        }
    }
}
