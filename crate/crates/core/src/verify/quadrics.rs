//! Quadrics of PG(6,q) through the image of a subplane.

use alloc::vec;
use alloc::vec::Vec;

use crate::bruckbose::{lift, BruckBoseContext};
use crate::error::GeomError;
use crate::gfq::{Elem, Field, FieldTower};
use crate::linalg::{self, Matrix};
use crate::projgeom::{self, ProjPoint, ProjSubspace};
use crate::splash::Subplane;

/// Number of coefficients of a quadratic form in seven variables.
pub const QUADRIC_LEN: usize = 28;

/// A linear system of quadrics: coefficient vectors over GF(q) in the
/// monomial order `x_i x_j`, `i <= j`, lexicographic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricSystem {
    /// Reduced row echelon basis.
    pub basis: Matrix,
    pub dim: usize,
}

/// The 28 monomials `x_i x_j` at a vector.
pub fn quadric_monomials(f: &Field, v: &[Elem]) -> Vec<Elem> {
    let mut out = Vec::with_capacity(QUADRIC_LEN);
    for i in 0..7 {
        for j in i..7 {
            out.push(f.mul(v[i], v[j]));
        }
    }
    out
}

pub fn eval_quadric(f: &Field, quad: &[Elem], v: &[Elem]) -> Elem {
    linalg::dot(f, quad, &quadric_monomials(f, v))
}

fn echelon(f: &Field, ns: Matrix) -> QuadricSystem {
    let mut m = ns;
    let piv = linalg::rref(f, &mut m);
    m.truncate(piv.len());
    QuadricSystem { dim: m.len(), basis: m }
}

/// Quadrics over GF(q) vanishing at every given point of PG(6,q).
pub fn quadric_system_of(f: &Field, points: &[ProjPoint]) -> QuadricSystem {
    let rows: Matrix = points.iter().map(|p| quadric_monomials(f, p.coords())).collect();
    echelon(f, linalg::nullspace(f, &rows, QUADRIC_LEN))
}

/// Whether a quadric with coefficients in GF(q) contains a line of PG(6,F):
/// it does iff it vanishes at three of the line's points.
pub fn check_line_in_quadric(ext: &Field, quad: &[Elem], line: &ProjSubspace) -> bool {
    let b = line.basis();
    if b.len() != 2 {
        return false;
    }
    let v7 = |v: &[Elem]| if v.len() == 6 { lift(v) } else { v.to_vec() };
    let a = v7(&b[0]);
    let c = v7(&b[1]);
    let s = linalg::add_vec(ext, &a, &c);
    [a, c, s].iter().all(|v| eval_quadric(ext, quad, v).is_zero())
}

/// A ternary cubic form as coefficients of the ten monomials `y^e`, indexed
/// by [`cubic_index`].
type Cubic3 = [Elem; 10];

fn cubic_index(e: [usize; 3]) -> usize {
    // e0 + e1 + e2 = 3, listed by (e0 desc, e1 desc)
    let mut k = 0;
    for a in (0..=3).rev() {
        for b in (0..=3 - a).rev() {
            if [a, b, 3 - a - b] == e {
                return k;
            }
            k += 1;
        }
    }
    unreachable!("degree three exponent")
}

fn cubic_product(f: &Field, l: [&[Elem]; 3]) -> Cubic3 {
    let mut out = [Elem::ZERO; 10];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut e = [0usize; 3];
                e[i] += 1;
                e[j] += 1;
                e[k] += 1;
                let c = f.mul(f.mul(l[0][i], l[1][j]), l[2][k]);
                let idx = cubic_index(e);
                out[idx] = f.add(out[idx], c);
            }
        }
    }
    out
}

fn eval_cubic(f: &Field, c: &Cubic3, y: &[Elem]) -> Elem {
    let mut acc = Elem::ZERO;
    let mut k = 0;
    for a in (0..=3u64).rev() {
        for b in (0..=3 - a).rev() {
            let m = f.mul(f.mul(f.pow(y[0], a), f.pow(y[1], b)), f.pow(y[2], 3 - a - b));
            acc = f.add(acc, f.mul(c[k], m));
            k += 1;
        }
    }
    acc
}

/// The seven ternary cubic forms over GF(q) whose values at the points of
/// PG(2,q) are the images in PG(6,q) of the subplane with generator `M`:
/// `([G0 N], [G1 N], G2 N)` with `N = G2^(1) G2^(2)`, where `G_i` are the
/// rows of `M` and `(k)` conjugates coefficients.
pub fn subplane_cubic_forms(ctx: &BruckBoseContext, pi: &Subplane) -> Result<Vec<Cubic3Form>, GeomError> {
    let t = ctx.tower();
    let cf = t.cubic();
    let m = pi.generator().ok_or(GeomError::NoGenerator)?.matrix();
    let g2 = &m[2];
    let g21: Vec<Elem> = g2.iter().map(|&x| t.frobenius(x)).collect();
    let g22: Vec<Elem> = g21.iter().map(|&x| t.frobenius(x)).collect();
    let h: Vec<Cubic3> = (0..3).map(|i| cubic_product(cf, [&m[i], &g21, &g22])).collect();
    // per monomial: Φ([h0], [h1]) and h2
    let mut out = vec![[Elem::ZERO; 10]; 7];
    for k in 0..10 {
        let v = ctx.pair(h[0][k], h[1][k]);
        if !t.is_base(h[2][k]) {
            return Err(GeomError::Field(crate::error::FieldError::WrongLevel));
        }
        for (i, x) in v.iter().enumerate() {
            out[i][k] = *x;
        }
        out[6][k] = h[2][k];
    }
    Ok(out.into_iter().map(Cubic3Form).collect())
}

/// A ternary cubic form with coefficients in GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cubic3Form(Cubic3);

impl Cubic3Form {
    pub fn eval(&self, f: &Field, y: &[Elem]) -> Elem {
        eval_cubic(f, &self.0, y)
    }
}

/// Image of a point of PG(2,q^3) under the cubic forms, `None` at base points.
pub fn surface_point(t: &FieldTower, forms: &[Cubic3Form], y: &[Elem]) -> Option<ProjPoint> {
    let cf = t.cubic();
    let v: Vec<Elem> = forms.iter().map(|c| c.eval(cf, y)).collect();
    ProjPoint::new(cf, &v)
}

/// Quadrics over GF(q) containing the surface swept by the cubic forms over
/// PG(2,q^3); this is the system of the subplane viewed as a variety. The
/// basis is computed over GF(q^3) and must be rational.
pub fn surface_quadric_system(ctx: &BruckBoseContext, pi: &Subplane) -> Result<QuadricSystem, GeomError> {
    let t = ctx.tower();
    let cf = t.cubic();
    let forms = subplane_cubic_forms(ctx, pi)?;
    let rows: Matrix = projgeom::all_points_of_space(cf, 2)
        .iter()
        .filter_map(|y| surface_point(t, &forms, y.coords()))
        .map(|p| quadric_monomials(cf, p.coords()))
        .collect();
    let sys = echelon(cf, linalg::nullspace(cf, &rows, QUADRIC_LEN));
    if sys.basis.iter().flatten().any(|x| !t.is_base(*x)) {
        return Err(GeomError::Field(crate::error::FieldError::WrongLevel));
    }
    Ok(sys)
}

/// Dimension of the subsystem (over GF(q)) of quadrics containing `line`.
pub fn subsystem_containing(t: &FieldTower, sys: &QuadricSystem, line: &ProjSubspace) -> usize {
    let cf = t.cubic();
    let f = t.base();
    let b = line.basis();
    let v7 = |v: &[Elem]| if v.len() == 6 { lift(v) } else { v.to_vec() };
    let a = v7(&b[0]);
    let c = v7(&b[1]);
    let s = linalg::add_vec(cf, &a, &c);
    // Σ_k x_k Q_k(p) = 0 for the three points, split into GF(q) coordinates
    let mut rows: Matrix = Vec::new();
    for p in [a, c, s] {
        let vals: Vec<[Elem; 3]> = sys.basis.iter().map(|qd| t.coords_of(eval_quadric(cf, qd, &p))).collect();
        for j in 0..3 {
            rows.push(vals.iter().map(|v| v[j]).collect());
        }
    }
    linalg::nullspace(f, &rows, sys.dim).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splash;
    use alloc::sync::Arc;

    #[test]
    fn cubic_forms_reproduce_the_image() {
        for q in [2, 3] {
            let ctx = BruckBoseContext::new(Arc::new(FieldTower::for_q(q).unwrap()));
            let t = ctx.tower();
            let (b, _, _) = splash::canonical_subplane(&ctx);
            let forms = subplane_cubic_forms(&ctx, &b).unwrap();
            let mut got: Vec<ProjPoint> = splash::base_points(t)
                .iter()
                .map(|y| {
                    let v: Vec<Elem> = forms.iter().map(|c| c.eval(t.base(), y)).collect();
                    ProjPoint::new(t.base(), &v).unwrap()
                })
                .collect();
            got.sort();
            let mut want: Vec<ProjPoint> = b.points().iter().map(|p| ctx.eps(p)).collect();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn monomial_count() {
        let f = Field::prime(3).unwrap();
        assert_eq!(quadric_monomials(&f, &[Elem::ONE; 7]).len(), QUADRIC_LEN);
    }
}
