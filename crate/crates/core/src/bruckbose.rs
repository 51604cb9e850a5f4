//! The Bruck-Bose dictionary between PG(2,q^3) and PG(6,q).
//!
//! Points of Σ∞ are handled as points of PG(5,q) (the first six
//! coordinates); affine objects live in PG(6,q) with `z` last. A context
//! may carry a change of coordinates `Φ ∈ GL(6,q)` on Σ∞, in which case
//! `ε(α, β, z) = (Φ([α], [β]), z)`; the default context has `Φ = 1`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::GeomError;
use crate::gfq::{Elem, FieldTower};
use crate::linalg::{self, Matrix};
use crate::projgeom::{self, ProjPoint, ProjSubspace};

/// A point of PG(2,q^3) as a normalized 3-vector.
pub type Pt3 = [Elem; 3];

/// Planes of a regulus of the spread together with its ruling lines.
#[derive(Clone, Debug)]
pub struct Regulus2 {
    /// Indices into the spread.
    pub planes: Vec<usize>,
    pub ruling_lines: Vec<ProjSubspace>,
}

#[derive(Clone, Debug)]
pub struct BruckBoseContext {
    tower: Arc<FieldTower>,
    phi: Matrix,
    phi_inv: Matrix,
    spread: Vec<ProjSubspace>,
    point_spread: Vec<u32>,
    transversals: [ProjSubspace; 3],
    e_vec: [Elem; 3],
}

/// Coordinate-wise `x ↦ x^q` on a vector over GF(q^3).
pub fn conj_vec(t: &FieldTower, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|&x| t.frobenius(x)).collect()
}

/// Conjugate of a subspace of PG(n,q^3).
pub fn conj_subspace(t: &FieldTower, s: &ProjSubspace) -> ProjSubspace {
    let rows: Vec<Vec<Elem>> = s.basis().iter().map(|r| conj_vec(t, r)).collect();
    ProjSubspace::from_rows(t.cubic(), s.ambient_dim(), &rows)
}

/// Lift a Σ∞ vector to PG(6,q) by appending `z = 0`.
pub fn lift(v: &[Elem]) -> Vec<Elem> {
    let mut w = v.to_vec();
    w.push(Elem::ZERO);
    w
}

impl BruckBoseContext {
    pub fn new(tower: Arc<FieldTower>) -> BruckBoseContext {
        Self::with_frame(tower, linalg::identity(6)).expect("identity frame")
    }

    /// Context whose Σ∞ coordinates are changed by `phi`.
    pub fn with_frame(tower: Arc<FieldTower>, phi: Matrix) -> Result<BruckBoseContext, GeomError> {
        let f = tower.base();
        let cf = tower.cubic();
        let q = tower.q() as usize;
        let phi_inv = linalg::inverse(f, &phi).ok_or(GeomError::SingularMatrix)?;
        let n_inf = q * q * q + 1;
        let mut spread = Vec::with_capacity(n_inf);
        let mut point_spread = vec![u32::MAX; projgeom::num_points(5, q as u64) as usize];
        for idx in 0..n_inf {
            let l = inf_point_raw(&tower, idx);
            let mut pts = Vec::new();
            for x in cf.nonzero() {
                let v = raw_pair(&tower, &phi, cf.mul(l[0], x), cf.mul(l[1], x));
                let p = ProjPoint::new(f, &v).expect("nonzero");
                let pi = p.index() as usize;
                if point_spread[pi] == u32::MAX {
                    point_spread[pi] = idx as u32;
                    pts.push(p);
                }
                debug_assert_eq!(point_spread[pi], idx as u32);
            }
            debug_assert_eq!(pts.len(), q * q + q + 1);
            spread.push(ProjSubspace::from_points(f, &pts));
        }
        // column 0 of the inverse of (τ^{i q^j})_{j,i}
        let tau = tower.tau();
        let phi_c: Matrix = (0..3)
            .map(|j| {
                let tj = tower.frobenius_pow(tau, j);
                (0..3).map(|i| cf.pow(tj, i)).collect()
            })
            .collect();
        let inv = linalg::inverse(cf, &phi_c).expect("Vandermonde of distinct conjugates");
        let e_vec = [inv[0][0], inv[1][0], inv[2][0]];
        let mut g_rows = Vec::new();
        for half in 0..2 {
            let mut v = vec![Elem::ZERO; 6];
            v[3 * half..3 * half + 3].copy_from_slice(&e_vec);
            g_rows.push(linalg::mat_vec(cf, &phi, &v));
        }
        let g = ProjSubspace::from_rows(cf, 5, &g_rows);
        let g1 = conj_subspace(&tower, &g);
        let g2 = conj_subspace(&tower, &g1);
        Ok(BruckBoseContext { tower, phi, phi_inv, spread, point_spread, transversals: [g, g1, g2], e_vec })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    /// `e ∈ GF(q^3)^3` with `[x] = Σ_j x^{q^j} e^{q^j}` for every `x`.
    pub fn e_vec(&self) -> [Elem; 3] {
        self.e_vec
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    /// The `q^3 + 1` spread planes, as subspaces of PG(5,q), indexed by
    /// the points of ℓ∞ (see [`BruckBoseContext::inf_index`]).
    pub fn spread(&self) -> &[ProjSubspace] {
        &self.spread
    }

    /// Σ∞ as the hyperplane `z = 0` of PG(6,q).
    pub fn sigma_inf(&self) -> ProjSubspace {
        let mut a = vec![Elem::ZERO; 7];
        a[6] = Elem::ONE;
        ProjSubspace::hyperplane(self.tower.base(), &a)
    }

    pub fn transversals(&self) -> &[ProjSubspace; 3] {
        &self.transversals
    }

    /// Spread index of a point of PG(5,q) given by a normalized 6-vector.
    #[inline]
    pub fn spread_index_of(&self, v: &[Elem]) -> usize {
        self.point_spread[projgeom::point_index(self.q(), v) as usize] as usize
    }

    /// Spread index by point index in PG(5,q).
    #[inline]
    pub fn spread_index_by_point(&self, idx: u64) -> usize {
        self.point_spread[idx as usize] as usize
    }

    /// Index of a point of ℓ∞: `(1, k, 0) ↦ k`, `(0, 1, 0) ↦ q^3`.
    pub fn inf_index(&self, p: &Pt3) -> usize {
        let cf = self.tower.cubic();
        debug_assert!(p[2].is_zero());
        if p[0].is_zero() {
            cf.order() as usize
        } else {
            cf.div(p[1], p[0]).0 as usize
        }
    }

    pub fn inf_point(&self, idx: usize) -> Pt3 {
        inf_point_raw(&self.tower, idx)
    }

    pub fn spread_plane(&self, l: &Pt3) -> &ProjSubspace {
        &self.spread[self.inf_index(l)]
    }

    /// `Φ([α], [β])` as a 6-vector over GF(q).
    pub fn pair(&self, a: Elem, b: Elem) -> Vec<Elem> {
        raw_pair(&self.tower, &self.phi, a, b)
    }

    /// Inverse of [`BruckBoseContext::pair`].
    pub fn unpair(&self, v: &[Elem]) -> (Elem, Elem) {
        let w = linalg::mat_vec(self.tower.base(), &self.phi_inv, v);
        let t = &self.tower;
        let a = t.uncoords([w[0], w[1], w[2]]).expect("base coords");
        let b = t.uncoords([w[3], w[4], w[5]]).expect("base coords");
        (a, b)
    }

    /// `ε(P)` for a point of PG(2,q^3). Affine points map to the point
    /// `(Φ([α],[β]), 1)`; points of ℓ∞ map to the representative
    /// `(Φ([α],[β]), 0)` of their spread plane.
    pub fn eps(&self, p: &Pt3) -> ProjPoint {
        let cf = self.tower.cubic();
        let f = self.tower.base();
        let mut v = if p[2].is_zero() {
            self.pair(p[0], p[1])
        } else {
            let iz = cf.inv(p[2]);
            self.pair(cf.mul(p[0], iz), cf.mul(p[1], iz))
        };
        v.push(if p[2].is_zero() { Elem::ZERO } else { Elem::ONE });
        ProjPoint::new(f, &v).expect("nonzero")
    }

    /// Inverse of [`BruckBoseContext::eps`]; points of Σ∞ go to the ℓ∞
    /// point of the spread plane containing them.
    pub fn eps_inv(&self, p: &ProjPoint) -> Pt3 {
        let f = self.tower.base();
        let c = p.coords();
        if c[6].is_zero() {
            return self.inf_point(self.spread_index_of(&c[..6]));
        }
        let iz = f.inv(c[6]);
        let v: Vec<Elem> = c[..6].iter().map(|&x| f.mul(x, iz)).collect();
        let (a, b) = self.unpair(&v);
        projgeom::normalize3(self.tower.cubic(), [a, b, Elem::ONE]).expect("nonzero")
    }

    /// The 3-space of an affine line `[a, b, c]` of PG(2,q^3): the span of
    /// one of its affine points and the spread plane of its point at infinity.
    pub fn line_to_3space(&self, line: &Pt3) -> Result<ProjSubspace, GeomError> {
        let cf = self.tower.cubic();
        if line[0].is_zero() && line[1].is_zero() {
            return Err(GeomError::LineAtInfinity);
        }
        // point at infinity (b, -a, 0) and an affine point
        let inf = projgeom::normalize3(cf, [line[1], cf.neg(line[0]), Elem::ZERO]).expect("nonzero");
        let aff = if !line[0].is_zero() {
            [cf.neg(cf.div(line[2], line[0])), Elem::ZERO, Elem::ONE]
        } else {
            [Elem::ZERO, cf.neg(cf.div(line[2], line[1])), Elem::ONE]
        };
        let mut rows: Vec<Vec<Elem>> = self.spread_plane(&inf).basis().iter().map(|r| lift(r)).collect();
        rows.push(self.eps(&aff).coords().to_vec());
        Ok(ProjSubspace::from_rows(self.tower.base(), 6, &rows))
    }

    /// Regulus of the spread planes indexed by an order-q subline of ℓ∞.
    pub fn subline_to_regulus(&self, b: &[Pt3]) -> Result<Regulus2, GeomError> {
        let t = &self.tower;
        if b.len() != t.q() as usize + 1 || !is_subline(t, b) {
            return Err(GeomError::NotASubline);
        }
        if b.iter().any(|p| !p[2].is_zero()) {
            return Err(GeomError::NotASubline);
        }
        let planes: Vec<usize> = b.iter().map(|p| self.inf_index(p)).collect();
        let ruling_lines = ruling_lines(t, &self.spread[planes[0]], &self.spread[planes[1]], &self.spread[planes[2]]);
        Ok(Regulus2 { planes, ruling_lines })
    }
}

fn inf_point_raw(t: &FieldTower, idx: usize) -> Pt3 {
    let n = t.cubic().order() as usize;
    if idx == n {
        [Elem::ZERO, Elem::ONE, Elem::ZERO]
    } else {
        [Elem::ONE, Elem(idx as u32), Elem::ZERO]
    }
}

fn raw_pair(t: &FieldTower, phi: &Matrix, a: Elem, b: Elem) -> Vec<Elem> {
    let ca = t.coords_of(a);
    let cb = t.coords_of(b);
    let v = [ca[0], ca[1], ca[2], cb[0], cb[1], cb[2]];
    linalg::mat_vec(t.base(), phi, &v)
}

/// Lines of PG(5,q) meeting three pairwise disjoint planes: through each
/// point `X` of `p1` the unique line meeting `p2` and `p3`.
pub fn ruling_lines(t: &FieldTower, p1: &ProjSubspace, p2: &ProjSubspace, p3: &ProjSubspace) -> Vec<ProjSubspace> {
    let f = t.base();
    projgeom::all_points(f, p1)
        .iter()
        .map(|x| {
            let s = p2.span_point(f, x).expect("same ambient");
            let y = s.meet(f, p3).expect("same ambient");
            debug_assert_eq!(y.rank(), 1);
            let mut rows = y.basis().clone();
            rows.push(x.coords().to_vec());
            ProjSubspace::from_rows(f, 5, &rows)
        })
        .collect()
}

/// Scale `p1`, `p2` (points of a line, as 2-vectors over GF(q^3)) so that
/// `p3 = p1' + p2'`. `None` when the three points are not distinct.
pub fn subline_frame(t: &FieldTower, p1: &[Elem], p2: &[Elem], p3: &[Elem]) -> Option<([Elem; 2], [Elem; 2])> {
    let cf = t.cubic();
    let det = cf.sub(cf.mul(p1[0], p2[1]), cf.mul(p1[1], p2[0]));
    if det.is_zero() {
        return None;
    }
    // p3 = l p1 + m p2
    let l = cf.div(cf.sub(cf.mul(p3[0], p2[1]), cf.mul(p3[1], p2[0])), det);
    let m = cf.div(cf.sub(cf.mul(p1[0], p3[1]), cf.mul(p1[1], p3[0])), det);
    if l.is_zero() || m.is_zero() {
        return None;
    }
    Some(([cf.mul(l, p1[0]), cf.mul(l, p1[1])], [cf.mul(m, p2[0]), cf.mul(m, p2[1])]))
}

/// Points of a line of PG(2,q^3) through distinct `a`, `b`, `c` forming
/// the order-q subline they determine: `λ a' + μ b'` with `(λ, μ) ∈ PG(1,q)`.
pub fn subline_closure(t: &FieldTower, a: &Pt3, b: &Pt3, c: &Pt3) -> Option<Vec<Pt3>> {
    let cf = t.cubic();
    // work in coordinates of a 2-dimensional subspace containing a, b
    let (a1, b1) = subline_basis(t, a, b, c)?;
    let mut out = Vec::with_capacity(t.q() as usize + 1);
    out.push(projgeom::normalize3(cf, a1)?);
    for lam in t.base().elements() {
        let v = [
            cf.add(cf.mul(lam, a1[0]), b1[0]),
            cf.add(cf.mul(lam, a1[1]), b1[1]),
            cf.add(cf.mul(lam, a1[2]), b1[2]),
        ];
        out.push(projgeom::normalize3(cf, v)?);
    }
    out.sort();
    Some(out)
}

/// Multiples `a'`, `b'` of `a`, `b` with `c = a' + b'`, so that the subline
/// through `a`, `b`, `c` is `{λ a' + μ b'}`.
pub fn subline_basis(t: &FieldTower, a: &Pt3, b: &Pt3, c: &Pt3) -> Option<(Pt3, Pt3)> {
    let cf = t.cubic();
    // c = l a + m b, solved on a pair of coordinates where a, b are independent
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let det = cf.sub(cf.mul(a[i], b[j]), cf.mul(a[j], b[i]));
        if det.is_zero() {
            continue;
        }
        let l = cf.div(cf.sub(cf.mul(c[i], b[j]), cf.mul(c[j], b[i])), det);
        let m = cf.div(cf.sub(cf.mul(a[i], c[j]), cf.mul(a[j], c[i])), det);
        let check = (0..3).all(|k| cf.add(cf.mul(l, a[k]), cf.mul(m, b[k])) == c[k]);
        if !check || l.is_zero() || m.is_zero() {
            return None;
        }
        return Some((
            [cf.mul(l, a[0]), cf.mul(l, a[1]), cf.mul(l, a[2])],
            [cf.mul(m, b[0]), cf.mul(m, b[1]), cf.mul(m, b[2])],
        ));
    }
    None
}

/// Frame test for `q + 1` collinear points of PG(2,q^3): they form an
/// order-q subline iff they equal the subline closure of their first three.
pub fn is_subline(t: &FieldTower, pts: &[Pt3]) -> bool {
    if pts.len() != t.q() as usize + 1 {
        return false;
    }
    let Some(closure) = subline_closure(t, &pts[0], &pts[1], &pts[2]) else {
        return false;
    };
    let cf = t.cubic();
    let Some(mut sorted) = pts.iter().map(|p| projgeom::normalize3(cf, *p)).collect::<Option<Vec<Pt3>>>() else {
        return false;
    };
    sorted.sort();
    sorted.dedup();
    sorted == closure
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u32) -> BruckBoseContext {
        BruckBoseContext::new(Arc::new(FieldTower::for_q(q).unwrap()))
    }

    #[test]
    fn spread_partitions_sigma_inf_q2() {
        let c = ctx(2);
        assert_eq!(c.spread().len(), 9);
        assert!(c.point_spread.iter().all(|&i| i != u32::MAX));
        assert_eq!(c.point_spread.len(), 63);
        for s in c.spread() {
            assert_eq!(s.rank(), 3);
        }
    }

    #[test]
    fn eps_examples() {
        let c = ctx(3);
        let t = c.tower();
        let e = |v: [u32; 7]| v.iter().map(|&x| Elem(x)).collect::<Vec<_>>();
        assert_eq!(c.eps(&[Elem(0), Elem(0), Elem(1)]).coords(), &e([0, 0, 0, 0, 0, 0, 1])[..]);
        assert_eq!(c.eps(&[t.tau(), Elem(1), Elem(1)]).coords(), &e([0, 1, 0, 1, 0, 0, 1])[..]);
    }

    #[test]
    fn e_vec_recovers_coordinates() {
        let c = ctx(3);
        let t = c.tower();
        let cf = t.cubic();
        let e = c.e_vec();
        for x in cf.elements() {
            let mut acc = [Elem::ZERO; 3];
            for j in 0..3 {
                let xj = t.frobenius_pow(x, j);
                for i in 0..3 {
                    acc[i] = cf.add(acc[i], cf.mul(xj, t.frobenius_pow(e[i], j)));
                }
            }
            assert_eq!(acc, t.coords_of(x));
        }
    }
}
