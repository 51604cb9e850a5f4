//! Conics of subplanes and the rational curves they become in PG(6,q).
//!
//! A conic is a quadratic form `a x² + b y² + c z² + f yz + g xz + h xy`
//! over GF(q) in the coordinates of the host's generator, together with a
//! parameterization `θ ↦ A (1, θ, θ²)`. The image of a parameterized curve
//! `θ ↦ (G0, G1, G2)` of PG(2,q^3) is `(Φ([H0], [H1]), H2)` with
//! `H_i = G_i G2^q G2^{q^2}`, seven polynomials over GF(q).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::bruckbose::{BruckBoseContext, Pt3};
use crate::error::GeomError;
use crate::gfq::{Elem, Field, FieldTower};
use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::projgeom::{self, Homography, ProjPoint, ProjSubspace};
use crate::splash::{self, FixedFrame, PlaneLine, Subplane};

/// Coefficients `(a, b, c, f, g, h)`.
pub type Form = [Elem; 6];

/// `(x², y², z², yz, xz, xy)`.
pub fn monomials(f: &Field, x: &[Elem]) -> [Elem; 6] {
    [
        f.mul(x[0], x[0]),
        f.mul(x[1], x[1]),
        f.mul(x[2], x[2]),
        f.mul(x[1], x[2]),
        f.mul(x[0], x[2]),
        f.mul(x[0], x[1]),
    ]
}

pub fn eval_form(f: &Field, q: &Form, x: &[Elem]) -> Elem {
    let m = monomials(f, x);
    f.sum((0..6).map(|i| f.mul(q[i], m[i])))
}

/// Polar line of `x`: `(2ax+hy+gz, hx+2by+fz, gx+fy+2cz)`.
pub fn form_gradient(f: &Field, q: &Form, x: &[Elem]) -> [Elem; 3] {
    let [a, b, c, ff, g, h] = *q;
    let two = f.from_int(2);
    let lin = |t: [(Elem, Elem); 3]| f.sum(t.iter().map(|&(u, v)| f.mul(u, v)));
    [
        lin([(f.mul(two, a), x[0]), (h, x[1]), (g, x[2])]),
        lin([(h, x[0]), (f.mul(two, b), x[1]), (ff, x[2])]),
        lin([(g, x[0]), (ff, x[1]), (f.mul(two, c), x[2])]),
    ]
}

/// `4abc + fgh − af² − bg² − ch²`, nonzero iff the conic is nondegenerate
/// in every characteristic.
pub fn form_discriminant(f: &Field, q: &Form) -> Elem {
    let [a, b, c, ff, g, h] = *q;
    let m = |x: Elem, y: Elem, z: Elem| f.mul(f.mul(x, y), z);
    let pos = f.add(f.mul(f.from_int(4), m(a, b, c)), m(ff, g, h));
    let neg = f.sum([m(a, ff, ff), m(b, g, g), m(c, h, h)]);
    f.sub(pos, neg)
}

fn normalize_form(f: &Field, q: Form) -> Option<Form> {
    let lead = *q.iter().find(|x| !x.is_zero())?;
    let inv = f.inv(lead);
    Some(q.map(|x| f.mul(x, inv)))
}

/// A conic of a subplane, carried in the coordinates of its host's generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubplaneConic {
    /// Normalized form over GF(q) in generator coordinates.
    pub form: Form,
    /// `3×3` matrix over GF(q) with `θ ↦ A (1, θ, θ²)` onto the base points.
    pub param: Matrix,
    /// Points in PG(2,q) (generator coordinates), sorted.
    pub base_points: Vec<Pt3>,
    /// Points in PG(2,q^3), sorted.
    pub points: Vec<Pt3>,
    pub host: Homography,
    pub special: bool,
}

fn apply3(t: &FieldTower, m: &Homography, v: &[Elem]) -> Pt3 {
    let w = m.apply_vec(t.cubic(), v);
    projgeom::normalize3(t.cubic(), [w[0], w[1], w[2]]).expect("nonsingular")
}

/// Points of PG(2,q) on a form.
pub fn form_points(t: &FieldTower, q: &Form) -> Vec<Pt3> {
    let f = t.base();
    splash::base_points(t).into_iter().filter(|p| eval_form(f, q, p).is_zero()).collect()
}

/// Parameterization `A` with columns `a X0, b T, c X∞`, where `T` is the meet
/// of the tangents at `X0`, `X∞` and `a X0 + b T + c X∞ = X1`.
pub fn param_of_form(t: &FieldTower, q: &Form) -> Result<Matrix, GeomError> {
    let f = t.base();
    if form_discriminant(f, q).is_zero() {
        return Err(GeomError::DegenerateConic);
    }
    let pts = form_points(t, q);
    if pts.len() < 3 {
        return Err(GeomError::DegenerateConic);
    }
    let (x0, x1, xi) = (pts[0], pts[1], pts[2]);
    let t0 = form_gradient(f, q, &x0);
    let ti = form_gradient(f, q, &xi);
    let tp = projgeom::cross(f, &t0, &ti);
    let cols = vec![x0.to_vec(), tp.to_vec(), xi.to_vec()];
    let m = linalg::transpose(&cols);
    let abc = linalg::solve(f, &m, &x1).ok_or(GeomError::DegenerateConic)?;
    if abc.iter().any(|x| x.is_zero()) {
        return Err(GeomError::DegenerateConic);
    }
    Ok((0..3).map(|i| (0..3).map(|j| f.mul(cols[j][i], abc[j])).collect()).collect())
}

impl SubplaneConic {
    pub fn new(t: &FieldTower, host: &Homography, form: Form, frame_base: Option<&[Pt3; 3]>) -> Result<SubplaneConic, GeomError> {
        let f = t.base();
        let cf = t.cubic();
        let form = normalize_form(f, form).ok_or(GeomError::DegenerateConic)?;
        let param = param_of_form(t, &form)?;
        let mut base_points = form_points(t, &form);
        base_points.sort();
        if base_points.len() != t.q() as usize + 1 {
            return Err(GeomError::DegenerateConic);
        }
        let mut points: Vec<Pt3> = base_points.iter().map(|p| apply3(t, host, p)).collect();
        points.sort();
        let special = frame_base.is_some_and(|fr| fr.iter().all(|e| eval_form(cf, &form, e).is_zero()));
        Ok(SubplaneConic { form, param, base_points, points, host: host.clone(), special })
    }

    /// Image of `θ` (`None` for ∞) in base coordinates.
    pub fn base_point_at(&self, f: &Field, th: Option<Elem>) -> Pt3 {
        let v = match th {
            Some(x) => vec![Elem::ONE, x, f.mul(x, x)],
            None => vec![Elem::ZERO, Elem::ZERO, Elem::ONE],
        };
        let w = linalg::mat_vec(f, &self.param, &v);
        projgeom::normalize3(f, [w[0], w[1], w[2]]).expect("nonsingular")
    }

    /// Host-tangent at a base point.
    pub fn base_tangent(&self, f: &Field, p: &Pt3) -> Pt3 {
        projgeom::normalize3(f, form_gradient(f, &self.form, p)).expect("smooth point")
    }

    /// `G(θ) = M A (1, θ, θ²)` as three polynomials over GF(q^3).
    pub fn param_polys(&self, t: &FieldTower) -> [Poly; 3] {
        let cf = t.cubic();
        let ma = linalg::mat_mul(cf, self.host.matrix(), &self.param);
        [0, 1, 2].map(|i| Poly::new(ma[i].clone()))
    }
}

/// All nondegenerate conics of PG(2,q) as normalized forms.
pub fn all_base_forms(t: &FieldTower) -> Vec<Form> {
    let f = t.base();
    projgeom::all_points_of_space(f, 5)
        .iter()
        .map(|p| {
            let c = p.coords();
            [c[0], c[1], c[2], c[3], c[4], c[5]]
        })
        .filter(|q| !form_discriminant(f, q).is_zero())
        .collect()
}

/// All conics of a subplane with a generator, flagged special or not.
pub fn conics_of(t: &FieldTower, pi: &Subplane, frame: &FixedFrame) -> Result<Vec<SubplaneConic>, GeomError> {
    let m = pi.generator().ok_or(GeomError::NoGenerator)?;
    let fb = splash::frame_in_base(t, pi, frame)?;
    all_base_forms(t).into_iter().map(|q| SubplaneConic::new(t, m, q, Some(&fb))).collect()
}

/// The special conics: forms vanishing at the three frame points. The
/// GF(q)-linear system has rank 3 and its solutions form a PG(2,q).
pub fn special_conics_of(t: &FieldTower, pi: &Subplane, frame: &FixedFrame) -> Result<Vec<SubplaneConic>, GeomError> {
    let m = pi.generator().ok_or(GeomError::NoGenerator)?;
    let fb = splash::frame_in_base(t, pi, frame)?;
    let forms = special_forms(t, &fb)?;
    forms
        .into_iter()
        .map(|q| {
            let c = SubplaneConic::new(t, m, q, Some(&fb))?;
            debug_assert!(c.special);
            Ok(c)
        })
        .collect()
}

/// Normalized forms over GF(q) vanishing at the frame points, which lie in PG(2,q^3).
pub fn special_forms(t: &FieldTower, fb: &[Pt3; 3]) -> Result<Vec<Form>, GeomError> {
    let f = t.base();
    let cf = t.cubic();
    let mut rows: Matrix = Vec::new();
    for e in fb {
        let mons = monomials(cf, e);
        let co: Vec<[Elem; 3]> = mons.iter().map(|&x| t.coords_of(x)).collect();
        for j in 0..3 {
            rows.push((0..6).map(|i| co[i][j]).collect());
        }
    }
    if linalg::rank(f, &rows) != 3 {
        return Err(GeomError::FrameMismatch);
    }
    let ns = linalg::nullspace(f, &rows, 6);
    let space = ProjSubspace::from_rows(f, 5, &ns);
    projgeom::all_points(f, &space)
        .iter()
        .map(|p| {
            let c = p.coords();
            let q = [c[0], c[1], c[2], c[3], c[4], c[5]];
            if form_discriminant(f, &q).is_zero() {
                Err(GeomError::DegenerateConic)
            } else {
                Ok(q)
            }
        })
        .collect()
}

/// Nucleus of a nondegenerate conic over a field of characteristic 2, as
/// the meet of the tangents at two of its points.
pub fn nucleus_of_form(t: &FieldTower, q: &Form) -> Result<Pt3, GeomError> {
    let f = t.base();
    if f.characteristic() != 2 {
        return Err(GeomError::OddCharacteristic);
    }
    if form_discriminant(f, q).is_zero() {
        return Err(GeomError::DegenerateConic);
    }
    let pts = form_points(t, q);
    let t0 = form_gradient(f, q, &pts[0]);
    let t1 = form_gradient(f, q, &pts[1]);
    projgeom::normalize3(f, projgeom::cross(f, &t0, &t1)).ok_or(GeomError::DegenerateConic)
}

/// The polar criterion in characteristic 2: the nucleus is `(f, g, h)`.
pub fn nucleus_polar(f: &Field, q: &Form) -> Option<Pt3> {
    projgeom::normalize3(f, [q[3], q[4], q[5]])
}

/// Nucleus of a conic of a subplane, in PG(2,q^3).
pub fn nucleus(t: &FieldTower, c: &SubplaneConic) -> Result<Pt3, GeomError> {
    let n = nucleus_of_form(t, &c.form)?;
    if nucleus_polar(t.base(), &c.form) != Some(n) {
        return Err(GeomError::DegenerateConic);
    }
    Ok(apply3(t, &c.host, &n))
}

/// The line of `π` containing the nuclei of the special conics through `P`.
pub fn nucleus_line(t: &FieldTower, pi: &Subplane, frame: &FixedFrame, p: &Pt3) -> Result<PlaneLine, GeomError> {
    if t.base().characteristic() != 2 {
        return Err(GeomError::OddCharacteristic);
    }
    let conics = special_conics_of(t, pi, frame)?;
    let mut nuclei: Vec<Pt3> = Vec::new();
    for c in conics.iter().filter(|c| c.points.binary_search(p).is_ok()) {
        nuclei.push(nucleus(t, c)?);
    }
    nuclei.sort();
    nuclei.dedup();
    if nuclei.len() < 2 {
        return Err(GeomError::DegenerateConic);
    }
    pi.line_through(&nuclei[0], &nuclei[1])
        .filter(|l| nuclei.iter().all(|n| l.points.binary_search(n).is_ok()))
        .cloned()
        .ok_or(GeomError::DegenerateConic)
}

/// A curve of PG(6,q) parameterized by seven polynomials over GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCurve {
    pub polys: Vec<Poly>,
    pub order: usize,
    /// Span of the coefficient vectors: the span of the points over any extension.
    pub ambient: ProjSubspace,
    /// Last coordinate before common factors were cleared.
    pub raw_z: Poly,
    /// Homogeneous degree before clearing.
    pub raw_degree: usize,
}

/// Parameters in GF(q) ∪ {∞}, `None` being ∞.
pub fn parameters(f: &Field) -> Vec<Option<Elem>> {
    f.elements().map(Some).chain(core::iter::once(None)).collect()
}

impl RationalCurve {
    /// Clear the common factor of the coordinate polynomials.
    pub fn from_polys(f: &Field, polys: Vec<Poly>, raw_degree: usize) -> Result<RationalCurve, GeomError> {
        let raw_z = polys.last().cloned().unwrap_or_default();
        let mut g = Poly::zero();
        for p in &polys {
            g = g.gcd(f, p);
        }
        if g.is_zero() {
            return Err(GeomError::DegenerateConic);
        }
        let polys: Vec<Poly> = polys.iter().map(|p| p.divrem(f, &g).0).collect();
        let order = polys.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        let n = polys.len();
        let rows: Matrix = (0..=order).map(|k| polys.iter().map(|p| p.coeff(k)).collect()).collect();
        let ambient = ProjSubspace::from_rows(f, n - 1, &rows);
        Ok(RationalCurve { polys, order, ambient, raw_z, raw_degree })
    }

    pub fn is_normal(&self) -> bool {
        self.ambient.rank() == self.order + 1
    }

    fn vec_at(&self, f: &Field, th: Option<Elem>) -> Vec<Elem> {
        match th {
            Some(x) => self.polys.iter().map(|p| p.eval(f, x)).collect(),
            None => self.polys.iter().map(|p| p.coeff(self.order)).collect(),
        }
    }

    /// Point at a parameter of GF(q) ∪ {∞}.
    pub fn point_at(&self, f: &Field, th: Option<Elem>) -> ProjPoint {
        ProjPoint::new(f, &self.vec_at(f, th)).expect("no base points after clearing")
    }

    /// Point at a parameter of an extension field `ext` of GF(q).
    pub fn point_at_ext(&self, ext: &Field, th: Option<Elem>) -> ProjPoint {
        ProjPoint::new(ext, &self.vec_at(ext, th)).expect("no base points after clearing")
    }

    /// The `q+1` rational points, by parameter.
    pub fn points(&self, f: &Field) -> Vec<ProjPoint> {
        parameters(f).into_iter().map(|th| self.point_at(f, th)).collect()
    }

    /// Points over GF(q^3) lying in Σ∞: roots of the last coordinate, and ∞
    /// when its degree is below the order.
    pub fn sigma_inf_points_ext(&self, t: &FieldTower) -> Vec<ProjPoint> {
        let cf = t.cubic();
        let z = self.polys.last().expect("seven coordinates");
        let mut out: Vec<ProjPoint> = z.roots_in(cf, cf.order()).into_iter().map(|r| self.point_at_ext(cf, Some(r))).collect();
        if z.degree().unwrap_or(0) < self.order {
            out.push(self.point_at_ext(cf, None));
        }
        out
    }

    /// Parameter of a rational point of the curve.
    pub fn parameter_of(&self, f: &Field, p: &ProjPoint) -> Option<Option<Elem>> {
        parameters(f).into_iter().find(|&th| self.point_at(f, th) == *p)
    }

    /// Derivative direction at a parameter. At ∞ the reversed polynomials
    /// are used, whose derivative at 0 is the coefficient of `θ^{order-1}`.
    fn derivative_at(&self, f: &Field, th: Option<Elem>) -> Vec<Elem> {
        match th {
            Some(x) => self.polys.iter().map(|p| p.derivative(f).eval(f, x)).collect(),
            None => self.polys.iter().map(|p| p.coeff(self.order.saturating_sub(1))).collect(),
        }
    }

    /// Tangent line at a parameter, from the formal derivative.
    pub fn tangent_at_param(&self, f: &Field, th: Option<Elem>) -> Result<ProjSubspace, GeomError> {
        let n = self.polys.len() - 1;
        let line = ProjSubspace::from_rows(f, n, &[self.vec_at(f, th), self.derivative_at(f, th)]);
        if line.rank() != 2 {
            return Err(GeomError::DegenerateConic);
        }
        Ok(line)
    }

    /// Tangent at a rational point of the curve.
    pub fn tangent_at(&self, f: &Field, p: &ProjPoint) -> Result<ProjSubspace, GeomError> {
        let th = self.parameter_of(f, p).ok_or(GeomError::PointNotOnCurve)?;
        self.tangent_at_param(f, th)
    }

    /// `lim PP_x ∩ Σ∞` as `x → θ0`: divide `z(θ0) P(θ) − z(θ) P(θ0)` by
    /// `θ − θ0` and evaluate at `θ0`; at ∞ the reversed polynomials are used.
    /// Requires an affine point.
    pub fn tangent_limit_point(&self, f: &Field, th: Option<Elem>) -> Result<ProjPoint, GeomError> {
        let (polys, x0) = match th {
            Some(x) => (self.polys.clone(), x),
            None => {
                let d = self.order;
                let rev: Vec<Poly> = self.polys.iter().map(|p| Poly::new((0..=d).rev().map(|k| p.coeff(k)).collect())).collect();
                (rev, Elem::ZERO)
            }
        };
        let z = polys.last().expect("coordinates");
        let z0 = z.eval(f, x0);
        if z0.is_zero() {
            return Err(GeomError::PointNotOnCurve);
        }
        let lin = Poly::new(vec![f.neg(x0), Elem::ONE]);
        let v: Vec<Elem> = polys
            .iter()
            .map(|p| {
                let num = p.scale(f, z0).sub(f, &z.scale(f, p.eval(f, x0)));
                let (qt, r) = num.divrem(f, &lin);
                debug_assert!(r.is_zero());
                qt.eval(f, x0)
            })
            .collect();
        ProjPoint::new(f, &v).ok_or(GeomError::DegenerateConic)
    }
}

/// The image in PG(6,q) of `θ ↦ (G0, G1, G2)`, polynomials over GF(q^3) of
/// homogeneous degree `d`.
pub fn bb_image_of_param(ctx: &BruckBoseContext, g: &[Poly; 3], d: usize) -> Result<RationalCurve, GeomError> {
    let t = ctx.tower();
    let cf = t.cubic();
    let f = t.base();
    let fr1 = g[2].map(|c| t.frobenius(c));
    let fr2 = fr1.map(|c| t.frobenius(c));
    let n2 = fr1.mul(cf, &fr2);
    let h: [Poly; 3] = [g[0].mul(cf, &n2), g[1].mul(cf, &n2), g[2].mul(cf, &n2)];
    let deg = 3 * d;
    let mut cols: Vec<Vec<Elem>> = Vec::with_capacity(deg + 1);
    for k in 0..=deg {
        let mut v = ctx.pair(h[0].coeff(k), h[1].coeff(k));
        let z = h[2].coeff(k);
        if !t.is_base(z) {
            return Err(GeomError::Field(crate::error::FieldError::WrongLevel));
        }
        v.push(z);
        cols.push(v);
    }
    let polys: Vec<Poly> = (0..7).map(|i| Poly::new(cols.iter().map(|c| c[i]).collect())).collect();
    RationalCurve::from_polys(f, polys, deg)
}

pub fn bb_image_of_conic(ctx: &BruckBoseContext, c: &SubplaneConic) -> Result<RationalCurve, GeomError> {
    bb_image_of_param(ctx, &c.param_polys(ctx.tower()), 2)
}

/// Two rational points `u`, `v` of a rational line of PG(2,q), so that the
/// line is `θ ↦ u + θ v` with `v` at ∞.
pub fn line_param(f: &Field, a: &Pt3) -> (Pt3, Pt3) {
    let ns = linalg::nullspace(f, &[a.to_vec()], 3);
    let s = ProjSubspace::from_rows(f, 2, &ns);
    let b = s.basis();
    ([b[0][0], b[0][1], b[0][2]], [b[1][0], b[1][1], b[1][2]])
}

/// `θ ↦ M(u + θ v)` for a line of a subplane.
pub fn line_param_polys(t: &FieldTower, host: &Homography, line: &PlaneLine) -> Result<[Poly; 3], GeomError> {
    let cf = t.cubic();
    let f = t.base();
    let lp = linalg::vec_mat(cf, &line.dual, host.matrix());
    let lp = projgeom::normalize3(cf, [lp[0], lp[1], lp[2]]).ok_or(GeomError::FrameMismatch)?;
    if lp.iter().any(|x| !t.is_base(*x)) {
        return Err(GeomError::FrameMismatch);
    }
    let (u, v) = line_param(f, &lp);
    let mu = host.apply_vec(cf, &u);
    let mv = host.apply_vec(cf, &v);
    Ok([0, 1, 2].map(|i| Poly::new(vec![mu[i], mv[i]])))
}

pub fn bb_image_of_line(ctx: &BruckBoseContext, pi: &Subplane, line: &PlaneLine) -> Result<RationalCurve, GeomError> {
    let m = pi.generator().ok_or(GeomError::NoGenerator)?;
    bb_image_of_param(ctx, &line_param_polys(ctx.tower(), m, line)?, 1)
}

/// Ambient 3-space of an order-3 curve meets Σ∞ in a plane of PG(5,q).
pub fn sigma_plane_of(ctx: &BruckBoseContext, n: &RationalCurve) -> Result<ProjSubspace, GeomError> {
    let f = ctx.tower().base();
    if n.order != 3 || !n.is_normal() {
        return Err(GeomError::AmbientMismatch);
    }
    let m = n.ambient.meet(f, &ctx.sigma_inf())?;
    if m.rank() != 3 {
        return Err(GeomError::AmbientMismatch);
    }
    let rows: Matrix = m.basis().iter().map(|r| r[..6].to_vec()).collect();
    Ok(ProjSubspace::from_rows(f, 5, &rows))
}

/// The Σ∞ plane of the 3-space of a special conic's image.
pub fn special_conic_plane(ctx: &BruckBoseContext, c: &SubplaneConic) -> Result<ProjSubspace, GeomError> {
    sigma_plane_of(ctx, &bb_image_of_conic(ctx, c)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveClass {
    TwistedCubic,
    Nrc6,
    Other,
}

/// Classify a parameterized curve by order and normality.
pub fn classify_rational(n: &RationalCurve) -> CurveClass {
    match (n.order, n.is_normal()) {
        (3, true) => CurveClass::TwistedCubic,
        (6, true) => CurveClass::Nrc6,
        _ => CurveClass::Other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveFit {
    TwistedCubic(RationalCurve),
    Nrc6(RationalCurve),
    Other,
}

fn in_general_position(f: &Field, pts: &[Vec<Elem>], k: usize) -> bool {
    // every k of the points independent
    let n = pts.len();
    if n < k {
        return linalg::rank(f, pts) == n;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let rows: Matrix = idx.iter().map(|&i| pts[i].clone()).collect();
        if linalg::rank(f, &rows) < k {
            return false;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Fit a normal rational curve of degree `n` through points of PG(n,q) in
/// general position: send the first `n+1` to the coordinate points at
/// parameters `λ_i` and the next to the unit point at ∞, so that
/// `x_i = Π_{j≠i} (θ − λ_j)`. Returns the coordinate polynomials.
fn fit_nrc(f: &Field, pts: &[Vec<Elem>], n: usize) -> Option<Vec<Poly>> {
    let k = n + 1;
    if pts.len() < k + 1 {
        return None;
    }
    let frame: Vec<Vec<Elem>> = pts[..k + 1].to_vec();
    let m = Homography::from_frame(f, &frame).ok()?;
    let minv = m.inverse(f);
    let fc: Vec<Vec<Elem>> = pts.iter().map(|p| minv.apply_vec(f, p)).collect();
    let lambdas: Vec<Elem> = if pts.len() >= k + 2 {
        // the next point sits at θ = 0: a_i ∝ 1/λ_i
        let a = &fc[k + 1];
        if a.iter().any(|x| x.is_zero()) {
            return None;
        }
        a.iter().map(|&x| f.inv(x)).collect()
    } else {
        // exactly n+2 points: the λ_i fill GF(q)
        if f.order() as usize != k {
            return None;
        }
        f.elements().collect()
    };
    let mut sorted = lambdas.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != k {
        return None;
    }
    let frame_polys: Vec<Poly> = (0..k)
        .map(|i| {
            let mut p = Poly::constant(Elem::ONE);
            for (j, &l) in lambdas.iter().enumerate() {
                if j != i {
                    p = p.mul(f, &Poly::new(vec![f.neg(l), Elem::ONE]));
                }
            }
            p
        })
        .collect();
    // every remaining point must lie on the curve
    for r in &fc[k + 1..] {
        let hit = f.elements().any(|th| {
            let v: Vec<Elem> = frame_polys.iter().map(|p| p.eval(f, th)).collect();
            ProjPoint::new(f, &v) == ProjPoint::new(f, r)
        });
        if !hit {
            return None;
        }
    }
    // back to the original coordinates
    let mm = m.matrix();
    Some(
        (0..k)
            .map(|i| {
                let mut p = Poly::zero();
                for (j, fp) in frame_polys.iter().enumerate() {
                    p = p.add(f, &fp.scale(f, mm[i][j]));
                }
                p
            })
            .collect(),
    )
}

/// Classify `q+1` points of PG(6,q) from their coordinates alone. Fitting a
/// twisted cubic needs five points in general position in a 3-space (six
/// for uniqueness), and a sextic needs nine.
pub fn classify_curve(f: &Field, points: &[ProjPoint]) -> Result<CurveFit, GeomError> {
    if points.len() < 5 {
        return Err(GeomError::TooFewPoints);
    }
    let span = ProjSubspace::from_points(f, points);
    let n = span.rank() - 1;
    if n != 3 && n != 6 {
        return Ok(CurveFit::Other);
    }
    // coordinates in the echelon basis of the span
    let basis = span.basis();
    let bt = linalg::transpose(basis);
    let local: Vec<Vec<Elem>> = points
        .iter()
        .map(|p| linalg::solve(f, &bt, p.coords()).expect("point in its span"))
        .collect();
    if !in_general_position(f, &local, n + 1) {
        return Ok(CurveFit::Other);
    }
    if n == 6 && local.len() < 9 {
        // any n+2 points in general position lie on a normal curve; the
        // parameterization is not unique and is not reconstructed here
        return Ok(CurveFit::Other);
    }
    let Some(lp) = fit_nrc(f, &local, n) else {
        return Ok(CurveFit::Other);
    };
    // lift back to PG(6,q)
    let polys: Vec<Poly> = (0..7)
        .map(|c| {
            let mut p = Poly::zero();
            for (j, lpj) in lp.iter().enumerate() {
                p = p.add(f, &lpj.scale(f, basis[j][c]));
            }
            p
        })
        .collect();
    let curve = RationalCurve::from_polys(f, polys, n)?;
    let mut want: Vec<ProjPoint> = points.to_vec();
    want.sort();
    let mut got = curve.points(f);
    got.sort();
    if got != want {
        return Ok(CurveFit::Other);
    }
    Ok(if n == 3 { CurveFit::TwistedCubic(curve) } else { CurveFit::Nrc6(curve) })
}

/// True iff the cubic's three extension points in Σ∞ lie one on each of
/// the transversals. The cubic's 3-space must meet Σ∞ in `plane`.
pub fn is_x_special_cubic(
    ctx: &BruckBoseContext,
    n: &RationalCurve,
    plane: &ProjSubspace,
    transversals: &[ProjSubspace; 3],
) -> Result<bool, GeomError> {
    let t = ctx.tower();
    let cf = t.cubic();
    if sigma_plane_of(ctx, n)? != *plane {
        return Err(GeomError::AmbientMismatch);
    }
    let pts = n.sigma_inf_points_ext(t);
    if pts.len() != 3 {
        return Ok(false);
    }
    let mut hit = [false; 3];
    for p in &pts {
        let v = &p.coords()[..6];
        for (i, g) in transversals.iter().enumerate() {
            if g.contains_vec(cf, v) {
                hit[i] = true;
            }
        }
    }
    Ok(hit.iter().all(|&h| h))
}

/// Coordinates of a vector of PG(5, F) in a basis of `plane`.
pub fn plane_coords(f: &Field, plane: &ProjSubspace, v: &[Elem]) -> Option<Vec<Elem>> {
    linalg::solve(f, &linalg::transpose(plane.basis()), v)
}

/// True iff the conic `form` (in coordinates of the basis of a plane of
/// Σ∞) is nondegenerate and its extension passes through the point of
/// each transversal in the extended plane.
pub fn is_x_special_conic(
    t: &FieldTower,
    plane: &ProjSubspace,
    form: &Form,
    transversals: &[ProjSubspace; 3],
) -> Result<bool, GeomError> {
    let cf = t.cubic();
    if form_discriminant(t.base(), form).is_zero() {
        return Ok(false);
    }
    let ext = plane.extend(cf.order());
    for g in transversals {
        let m = ext.meet(cf, g)?;
        if m.rank() != 1 {
            return Err(GeomError::AmbientMismatch);
        }
        let c = plane_coords(cf, &ext, &m.basis()[0]).ok_or(GeomError::AmbientMismatch)?;
        if !eval_form(cf, form, &c).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The special conic of `π` through `P` whose tangent at `P` is `ℓ`.
pub fn special_conic_tangent(t: &FieldTower, pi: &Subplane, frame: &FixedFrame, p: &Pt3, line: &PlaneLine) -> Result<SubplaneConic, GeomError> {
    let cf = t.cubic();
    let f = t.base();
    let m = pi.generator().ok_or(GeomError::NoGenerator)?;
    if line.points.binary_search(p).is_err() {
        return Err(GeomError::PointNotOnCurve);
    }
    let lp = linalg::vec_mat(cf, &line.dual, m.matrix());
    let lp = projgeom::normalize3(cf, [lp[0], lp[1], lp[2]]).ok_or(GeomError::FrameMismatch)?;
    let pb = apply3(t, &m.inverse(cf), p);
    let mut hits = special_conics_of(t, pi, frame)?
        .into_iter()
        .filter(|c| c.base_points.binary_search(&pb).is_ok() && c.base_tangent(f, &pb) == lp);
    let first = hits.next().ok_or(GeomError::PointNotOnCurve)?;
    if hits.next().is_some() {
        return Err(GeomError::CoverPlaneAmbiguous);
    }
    Ok(first)
}

/// A chord of a twisted cubic through a point of its Σ∞ plane, by parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChordLabel {
    /// Two distinct parameters of GF(q) ∪ {∞}.
    Real(Option<Elem>, Option<Elem>),
    /// A parameter of GF(q^2) \ GF(q), the lesser of the conjugate pair.
    Imaginary(Elem),
    Tangent(Option<Elem>),
}

fn sigma_point(f: &Field, a: &[Elem], b: &[Elem]) -> ProjPoint {
    // z(b) a − z(a) b has z = 0
    let za = a[6];
    let zb = b[6];
    let v: Vec<Elem> = a.iter().zip(b).map(|(&x, &y)| f.sub(f.mul(zb, x), f.mul(za, y))).collect();
    ProjPoint::new(f, &v).expect("distinct affine points")
}

/// Every chord of an order-3 curve with its point in Σ∞ (as a point of PG(6,q)).
pub fn chord_labels(t: &FieldTower, n: &RationalCurve) -> Result<BTreeMap<ProjPoint, ChordLabel>, GeomError> {
    let f = t.base();
    let qf = t.quad();
    if n.order != 3 || !n.is_normal() {
        return Err(GeomError::AmbientMismatch);
    }
    let params = parameters(f);
    let pts: Vec<Vec<Elem>> = params.iter().map(|&th| n.point_at(f, th).coords().to_vec()).collect();
    if pts.iter().any(|p| p[6].is_zero()) {
        return Err(GeomError::AmbientMismatch);
    }
    let mut out = BTreeMap::new();
    let mut put = |p: ProjPoint, l: ChordLabel| -> Result<(), GeomError> {
        if out.insert(p, l).is_some() {
            Err(GeomError::CoverPlaneAmbiguous)
        } else {
            Ok(())
        }
    };
    for i in 0..params.len() {
        for j in i + 1..params.len() {
            put(sigma_point(f, &pts[i], &pts[j]), ChordLabel::Real(params[i], params[j]))?;
        }
        put(n.tangent_limit_point(f, params[i])?, ChordLabel::Tangent(params[i]))?;
    }
    for th in qf.elements() {
        let thc = t.quad_conj(th);
        if t.is_base(th) || thc < th {
            continue;
        }
        let a: Vec<Elem> = n.polys.iter().map(|p| p.eval(qf, th)).collect();
        let b: Vec<Elem> = n.polys.iter().map(|p| p.eval(qf, thc)).collect();
        let s = sigma_point(qf, &a, &b);
        if !s.is_over(t.q()) {
            return Err(GeomError::Field(crate::error::FieldError::WrongLevel));
        }
        put(ProjPoint::from_normalized(f, s.coords().to_vec()), ChordLabel::Imaginary(th))?;
    }
    Ok(out)
}

/// The unique chord through a point `R` of the curve's Σ∞ plane.
pub fn chord_label(t: &FieldTower, n: &RationalCurve, r: &ProjPoint) -> Result<ChordLabel, GeomError> {
    chord_labels(t, n)?.get(r).copied().ok_or(GeomError::PointOutsidePlane)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::sync::Arc;

    fn ctx(q: u32) -> BruckBoseContext {
        BruckBoseContext::new(Arc::new(FieldTower::for_q(q).unwrap()))
    }

    #[test]
    fn special_conic_count_and_split() {
        for q in [2, 3] {
            let c = ctx(q);
            let t = c.tower();
            let (b, _, frame) = splash::canonical_subplane(&c);
            let sp = special_conics_of(t, &b, &frame).unwrap();
            assert_eq!(sp.len() as u32, q * q + q + 1);
            for con in conics_of(t, &b, &frame).unwrap() {
                let n = bb_image_of_conic(&c, &con).unwrap();
                let want = if con.special { CurveClass::TwistedCubic } else { CurveClass::Nrc6 };
                assert_eq!(classify_rational(&n), want);
                let mut img: Vec<ProjPoint> = con.points.iter().map(|p| c.eps(p)).collect();
                img.sort();
                let mut got = n.points(t.base());
                got.sort();
                assert_eq!(got, img);
            }
        }
    }

    #[test]
    fn base_pencil_conics_are_special() {
        let t = FieldTower::for_q(3).unwrap();
        let f = t.base();
        let [t0, t1, t2] = t.t();
        let pi0 = splash::base_subplane(&t);
        let fr = splash::fixed_frame(&t, &pi0, &splash::base_exterior_line(&t)).unwrap();
        let fb = splash::frame_in_base(&t, &pi0, &fr).unwrap();
        let forms = special_forms(&t, &fb).unwrap();
        let c0 = normalize_form(f, [Elem::ZERO, Elem::ONE, Elem::ZERO, Elem::ZERO, f.neg(Elem::ONE), Elem::ZERO]).unwrap();
        let ci = normalize_form(f, [f.neg(t0), Elem::ZERO, Elem::ZERO, Elem::ONE, f.neg(t2), f.neg(t1)]).unwrap();
        assert!(forms.contains(&c0));
        assert!(forms.contains(&ci));
    }

    #[test]
    fn lines_give_twisted_cubics_and_fit() {
        let c = ctx(4);
        let t = c.tower();
        let (b, _, _) = splash::canonical_subplane(&c);
        for l in b.lines().iter().take(4) {
            let n = bb_image_of_line(&c, &b, l).unwrap();
            assert_eq!(classify_rational(&n), CurveClass::TwistedCubic);
            let pts: Vec<ProjPoint> = l.points.iter().map(|p| c.eps(p)).collect();
            assert!(matches!(classify_curve(t.base(), &pts).unwrap(), CurveFit::TwistedCubic(_)));
        }
    }

    #[test]
    fn chord_count_is_plane_size() {
        let c = ctx(3);
        let t = c.tower();
        let (b, _, _) = splash::canonical_subplane(&c);
        let n = bb_image_of_line(&c, &b, &b.lines()[0]).unwrap();
        let labels = chord_labels(t, &n).unwrap();
        assert_eq!(labels.len(), 13);
        let plane = sigma_plane_of(&c, &n).unwrap();
        for p in labels.keys() {
            assert!(plane.contains_vec(t.base(), &p.coords()[..6]));
        }
    }
}
