//! Exterior order-q subplanes of PG(2,q^3), their splashes on ℓ∞, and the
//! two covers of a splash in Σ∞.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::bruckbose::{conj_subspace, BruckBoseContext, Pt3};
use crate::curves;
use crate::error::GeomError;
use crate::gfq::{Elem, FieldTower};
use crate::linalg::{self, Matrix};
use crate::projgeom::{self, Homography, ProjPoint, ProjSubspace};

/// The line at infinity `z = 0`.
pub const LINE_AT_INFINITY: Pt3 = [Elem::ZERO, Elem::ZERO, Elem::ONE];

/// A line of a subplane: its dual coordinates over GF(q^3) and its `q+1` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneLine {
    pub dual: Pt3,
    pub points: Vec<Pt3>,
}

#[derive(Clone, Debug)]
pub struct Subplane {
    points: Vec<Pt3>,
    lines: Vec<PlaneLine>,
    generator: Option<Homography>,
}

impl PartialEq for Subplane {
    fn eq(&self, o: &Subplane) -> bool {
        self.points == o.points
    }
}

impl Eq for Subplane {}

/// Rational points of PG(2,q), read as vectors over GF(q^3).
pub fn base_points(t: &FieldTower) -> Vec<Pt3> {
    projgeom::all_points_of_space(t.base(), 2)
        .iter()
        .map(|p| [p.coords()[0], p.coords()[1], p.coords()[2]])
        .collect()
}

fn apply3(t: &FieldTower, m: &Homography, v: &Pt3) -> Pt3 {
    let w = m.apply_vec(t.cubic(), v);
    projgeom::normalize3(t.cubic(), [w[0], w[1], w[2]]).expect("nonsingular")
}

/// Dual coordinates `a M^{-1}` of the image of the line `a` under `M`.
fn apply_dual3(t: &FieldTower, m_inv: &Matrix, a: &Pt3) -> Pt3 {
    let w = linalg::vec_mat(t.cubic(), a, m_inv);
    projgeom::normalize3(t.cubic(), [w[0], w[1], w[2]]).expect("nonzero line")
}

impl Subplane {
    /// The image of PG(2,q) under a homography of PG(2,q^3).
    pub fn from_generator(t: &FieldTower, m: Homography) -> Subplane {
        let cf = t.cubic();
        let base = base_points(t);
        let mut points: Vec<Pt3> = base.iter().map(|p| apply3(t, &m, p)).collect();
        points.sort();
        let m_inv = linalg::inverse(cf, m.matrix()).expect("nonsingular");
        // lines of PG(2,q) are the points of the dual plane
        let mut lines: Vec<PlaneLine> = base
            .iter()
            .map(|a| {
                let mut pts: Vec<Pt3> = base
                    .iter()
                    .filter(|x| projgeom::incident3(cf, a, *x))
                    .map(|x| apply3(t, &m, x))
                    .collect();
                pts.sort();
                PlaneLine { dual: apply_dual3(t, &m_inv, a), points: pts }
            })
            .collect();
        lines.sort_by_key(|a| a.dual);
        Subplane { points, lines, generator: Some(m) }
    }

    /// Recognize an order-q subplane from its points: a quadrangle among them
    /// fixes a homography from PG(2,q), whose image must be the whole set.
    pub fn from_points(t: &FieldTower, pts: &[Pt3]) -> Result<Subplane, GeomError> {
        let cf = t.cubic();
        let q = t.q() as usize;
        let mut sorted = pts.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != q * q + q + 1 {
            return Err(GeomError::NotASubplane);
        }
        let quad = quadrangle_in(t, &sorted).ok_or(GeomError::NotASubplane)?;
        let frame: Vec<Vec<Elem>> = quad.iter().map(|p| p.to_vec()).collect();
        let m = Homography::from_frame(cf, &frame)?;
        let sub = Subplane::from_generator(t, m);
        if sub.points != sorted {
            return Err(GeomError::NotASubplane);
        }
        Ok(sub)
    }

    #[inline]
    pub fn points(&self) -> &[Pt3] {
        &self.points
    }

    #[inline]
    pub fn lines(&self) -> &[PlaneLine] {
        &self.lines
    }

    #[inline]
    pub fn generator(&self) -> Option<&Homography> {
        self.generator.as_ref()
    }

    pub fn contains(&self, p: &Pt3) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// No point on ℓ∞.
    pub fn is_exterior(&self) -> bool {
        self.points.iter().all(|p| !p[2].is_zero())
    }

    pub fn lines_through<'a>(&'a self, p: &'a Pt3) -> impl Iterator<Item = &'a PlaneLine> + 'a {
        self.lines.iter().filter(move |l| l.points.binary_search(p).is_ok())
    }

    /// The line of the subplane through two of its points.
    pub fn line_through(&self, a: &Pt3, b: &Pt3) -> Option<&PlaneLine> {
        self.lines
            .iter()
            .find(|l| l.points.binary_search(a).is_ok() && l.points.binary_search(b).is_ok())
    }
}

/// Four points of `pts`, no three collinear.
pub fn quadrangle_in(t: &FieldTower, pts: &[Pt3]) -> Option<[Pt3; 4]> {
    let cf = t.cubic();
    let p0 = *pts.first()?;
    let p1 = *pts.iter().find(|p| **p != p0)?;
    let l01 = projgeom::cross(cf, &p0, &p1);
    let p2 = *pts.iter().find(|p| !projgeom::incident3(cf, &l01, *p))?;
    let l02 = projgeom::cross(cf, &p0, &p2);
    let l12 = projgeom::cross(cf, &p1, &p2);
    let p3 = *pts.iter().find(|p| {
        !projgeom::incident3(cf, &l01, *p) && !projgeom::incident3(cf, &l02, *p) && !projgeom::incident3(cf, &l12, *p)
    })?;
    Some([p0, p1, p2, p3])
}

/// Fixed lines `(ℓ, m, n)` and fixed points `E1 = ℓ∩m`, `E2 = ℓ∩n`,
/// `E3 = m∩n` of the stabilizer of a subplane and an exterior line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedFrame {
    pub lines: [Pt3; 3],
    pub points: [Pt3; 3],
}

fn conj3(t: &FieldTower, v: &Pt3, k: u32) -> Pt3 {
    [t.frobenius_pow(v[0], k), t.frobenius_pow(v[1], k), t.frobenius_pow(v[2], k)]
}

/// The fixed frame of `(π, ℓ)`, computed in the coordinates of the generator
/// and transported back. Pulled back to PG(2,q) the line is `ℓ'`, and the
/// frame is `E1' = ℓ'∩ℓ'^{q^2}`, `E2' = E1'^q`, `E3' = E1'^{q^2}`.
pub fn fixed_frame(t: &FieldTower, pi: &Subplane, line: &Pt3) -> Result<FixedFrame, GeomError> {
    let cf = t.cubic();
    let m = pi.generator().ok_or(GeomError::NoGenerator)?;
    if pi.points.iter().any(|p| projgeom::incident3(cf, line, p)) {
        return Err(GeomError::LineMeetsSubplane);
    }
    let lp = linalg::vec_mat(cf, line, m.matrix());
    let lp: Pt3 = projgeom::normalize3(cf, [lp[0], lp[1], lp[2]]).expect("nonzero");
    let e1p = projgeom::normalize3(cf, projgeom::cross(cf, &lp, &conj3(t, &lp, 2))).ok_or(GeomError::FrameMismatch)?;
    let pre = [e1p, conj3(t, &e1p, 1), conj3(t, &e1p, 2)];
    let points = [apply3(t, m, &pre[0]), apply3(t, m, &pre[1]), apply3(t, m, &pre[2])];
    let join = |a: &Pt3, b: &Pt3| projgeom::normalize3(cf, projgeom::cross(cf, a, b)).expect("distinct points");
    let l0 = projgeom::normalize3(cf, *line).expect("nonzero");
    let frame = FixedFrame { lines: [l0, join(&points[0], &points[2]), join(&points[1], &points[2])], points };
    if !projgeom::incident3(cf, &frame.lines[0], &frame.points[0]) || !projgeom::incident3(cf, &frame.lines[0], &frame.points[1]) {
        return Err(GeomError::FrameMismatch);
    }
    Ok(frame)
}

/// Pull the frame points back to the coordinates of PG(2,q) under the generator.
pub fn frame_in_base(t: &FieldTower, pi: &Subplane, frame: &FixedFrame) -> Result<[Pt3; 3], GeomError> {
    let cf = t.cubic();
    let m = pi.generator().ok_or(GeomError::NoGenerator)?;
    let inv = m.inverse(cf);
    Ok([apply3(t, &inv, &frame.points[0]), apply3(t, &inv, &frame.points[1]), apply3(t, &inv, &frame.points[2])])
}

/// The `q^2+q+1` points in which the lines of `π` meet the exterior line `ℓ`.
/// Each such point lies on exactly one line of `π`.
pub fn splash_points(t: &FieldTower, pi: &Subplane, line: &Pt3) -> Result<Vec<Pt3>, GeomError> {
    let cf = t.cubic();
    if pi.points.iter().any(|p| projgeom::incident3(cf, line, p)) {
        return Err(GeomError::LineMeetsSubplane);
    }
    let mut out: Vec<Pt3> = pi
        .lines
        .iter()
        .map(|l| projgeom::normalize3(cf, projgeom::cross(cf, &l.dual, line)).expect("distinct lines"))
        .collect();
    out.sort();
    let n = out.len();
    out.dedup();
    debug_assert_eq!(out.len(), n);
    Ok(out)
}

/// An exterior splash on ℓ∞, kept both as points and as spread indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splash {
    points: Vec<Pt3>,
    indices: Vec<usize>,
    bits: BitSet,
    carriers: Option<(Pt3, Pt3)>,
}

impl Splash {
    pub fn from_indices(ctx: &BruckBoseContext, idx: impl IntoIterator<Item = usize>) -> Splash {
        let mut indices: Vec<usize> = idx.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        let mut points: Vec<Pt3> = indices.iter().map(|&i| ctx.inf_point(i)).collect();
        points.sort();
        let bits = BitSet::from_indices(ctx.spread().len(), indices.iter().copied());
        Splash { points, indices, bits, carriers: None }
    }

    pub fn from_points(ctx: &BruckBoseContext, pts: &[Pt3]) -> Splash {
        Self::from_indices(ctx, pts.iter().map(|p| ctx.inf_index(p)))
    }

    pub fn with_carriers(mut self, c: (Pt3, Pt3)) -> Splash {
        self.carriers = Some(c);
        self
    }

    #[inline]
    pub fn points(&self) -> &[Pt3] {
        &self.points
    }

    /// Sorted spread indices.
    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    #[inline]
    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    #[inline]
    pub fn carriers(&self) -> Option<(Pt3, Pt3)> {
        self.carriers
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn planes<'a>(&'a self, ctx: &'a BruckBoseContext) -> impl Iterator<Item = &'a ProjSubspace> + 'a {
        self.indices.iter().map(move |&i| &ctx.spread()[i])
    }

    /// The splash lies in the spread, so its transversals are the spread's.
    pub fn transversals<'a>(&self, ctx: &'a BruckBoseContext) -> &'a [ProjSubspace; 3] {
        ctx.transversals()
    }
}

/// Splash of `π` on ℓ∞, with carriers when `π` has a generator.
pub fn splash_of(ctx: &BruckBoseContext, pi: &Subplane) -> Result<Splash, GeomError> {
    let t = ctx.tower();
    let pts = splash_points(t, pi, &LINE_AT_INFINITY)?;
    let s = Splash::from_points(ctx, &pts);
    match fixed_frame(t, pi, &LINE_AT_INFINITY) {
        Ok(fr) => Ok(s.with_carriers((fr.points[0], fr.points[1]))),
        Err(GeomError::NoGenerator) => Ok(s),
        Err(e) => Err(e),
    }
}

/// The matrix `K` of the canonical subplane.
pub fn canonical_matrix(t: &FieldTower) -> Matrix {
    let cf = t.cubic();
    let tau = t.tau();
    let tq = t.frobenius(tau);
    vec![
        vec![cf.neg(tau), Elem::ONE, Elem::ZERO],
        vec![cf.neg(tq), Elem::ONE, Elem::ZERO],
        vec![cf.mul(tau, tq), cf.neg(cf.add(tau, tq)), Elem::ONE],
    ]
}

/// The matrix `H` swapping the first two coordinates.
pub fn swap_matrix() -> Matrix {
    vec![
        vec![Elem::ZERO, Elem::ONE, Elem::ZERO],
        vec![Elem::ONE, Elem::ZERO, Elem::ZERO],
        vec![Elem::ZERO, Elem::ZERO, Elem::ONE],
    ]
}

/// The line `[−ττ^q, τ^q+τ, −1]` of PG(2,q^3), exterior to PG(2,q).
pub fn base_exterior_line(t: &FieldTower) -> Pt3 {
    let cf = t.cubic();
    let tau = t.tau();
    let tq = t.frobenius(tau);
    projgeom::normalize3(cf, [cf.neg(cf.mul(tau, tq)), cf.add(tq, tau), cf.neg(Elem::ONE)]).expect("nonzero")
}

/// PG(2,q) itself with the identity generator.
pub fn base_subplane(t: &FieldTower) -> Subplane {
    Subplane::from_generator(t, Homography::identity(t.cubic(), 2))
}

/// The canonical subplane `ℬ = K(PG(2,q))`, its splash and its fixed frame.
pub fn canonical_subplane(ctx: &BruckBoseContext) -> (Subplane, Splash, FixedFrame) {
    let t = ctx.tower();
    let k = Homography::new(t.cubic(), canonical_matrix(t)).expect("K is invertible");
    let b = Subplane::from_generator(t, k);
    let frame = fixed_frame(t, &b, &LINE_AT_INFINITY).expect("ℬ is exterior");
    let s = splash_of(ctx, &b).expect("ℬ is exterior");
    (b, s, frame)
}

/// The companion `HK(PG(2,q))` sharing the splash and a subline with `ℬ`.
pub fn companion_subplane(ctx: &BruckBoseContext) -> Subplane {
    let t = ctx.tower();
    let cf = t.cubic();
    let hk = linalg::mat_mul(cf, &swap_matrix(), &canonical_matrix(t));
    Subplane::from_generator(t, Homography::new(cf, hk).expect("HK is invertible"))
}

/// A cover of a splash together with its three transversal lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub planes: Vec<ProjSubspace>,
    pub transversals: [ProjSubspace; 3],
}

impl Cover {
    pub fn contains_plane(&self, p: &ProjSubspace) -> bool {
        self.planes.binary_search(p).is_ok()
    }

    /// The plane of the cover containing a point of Σ∞.
    pub fn plane_through(&self, f: &crate::gfq::Field, v: &[Elem]) -> Option<&ProjSubspace> {
        self.planes.iter().find(|p| p.contains_vec(f, v))
    }
}

/// Which of two covers plays which role relative to a subplane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverRoles {
    pub conic: usize,
    pub tangent: usize,
}

/// Spread indices of the points of a plane of Σ∞, one per point.
pub fn plane_trace(ctx: &BruckBoseContext, plane: &ProjSubspace) -> Vec<usize> {
    let f = ctx.tower().base();
    projgeom::all_points(f, plane).iter().map(|p| ctx.spread_index_of(p.coords())).collect()
}

/// True when `plane` meets every plane of the splash in exactly one point
/// and no other spread plane at all.
pub fn meets_as_cover(ctx: &BruckBoseContext, plane: &ProjSubspace, splash: &Splash) -> bool {
    let f = ctx.tower().base();
    let mut seen = BitSet::new(ctx.spread().len());
    for p in projgeom::all_points(f, plane) {
        let i = ctx.spread_index_of(p.coords());
        if !splash.bits.contains(i) || !seen.insert(i) {
            return false;
        }
    }
    seen.len() == splash.len()
}

fn span3(f: &crate::gfq::Field, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Option<ProjSubspace> {
    let s = ProjSubspace::from_points(f, &[a.clone(), b.clone(), c.clone()]);
    (s.rank() == 3).then_some(s)
}

/// Cover planes found from point triples on three splash planes. A cover
/// plane is missed by a triple `(A, B, C)` only if its points on `A`, `B`, `C`
/// are collinear, so a second pass uses a plane `D` off the subline of `A`,
/// `B`, `C`; no line of a cover plane meets all four.
pub fn cover_planes(ctx: &BruckBoseContext, splash: &Splash) -> Result<Vec<ProjSubspace>, GeomError> {
    let t = ctx.tower();
    let f = t.base();
    let idx = splash.indices();
    let q = t.q() as usize;
    if idx.len() != q * q + q + 1 {
        return Err(GeomError::InvalidCover);
    }
    let pa = ctx.inf_point(idx[0]);
    let pb = ctx.inf_point(idx[1]);
    let pc = ctx.inf_point(idx[2]);
    let sub = crate::bruckbose::subline_closure(t, &pa, &pb, &pc).ok_or(GeomError::NotASubline)?;
    let d = *idx
        .iter()
        .find(|&&i| sub.binary_search(&ctx.inf_point(i)).is_err())
        .ok_or(GeomError::InvalidCover)?;
    let pts = |i: usize| projgeom::all_points(f, &ctx.spread()[i]);
    let (a, b) = (pts(idx[0]), pts(idx[1]));
    let mut found = BTreeSet::new();
    for third in [idx[2], d] {
        let c = pts(third);
        for x in &a {
            for y in &b {
                for z in &c {
                    if let Some(s) = span3(f, x, y, z) {
                        if !found.contains(&s) && meets_as_cover(ctx, &s, splash) {
                            found.insert(s);
                        }
                    }
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Cover planes by scanning every plane of PG(5,q).
pub fn cover_planes_exhaustive(ctx: &BruckBoseContext, splash: &Splash, budget: u64) -> Result<Vec<ProjSubspace>, GeomError> {
    let f = ctx.tower().base();
    let mut out: Vec<ProjSubspace> = projgeom::all_subspaces(f, 5, 2, budget)?
        .filter(|s| meets_as_cover(ctx, s, splash))
        .collect();
    out.sort();
    Ok(out)
}

pub fn planes_disjoint(f: &crate::gfq::Field, a: &ProjSubspace, b: &ProjSubspace) -> bool {
    let mut rows = a.basis().clone();
    rows.extend(b.basis().iter().cloned());
    linalg::rank(f, &rows) == a.rank() + b.rank()
}

/// Dimension of the intersection of two subspaces with the same ambient.
pub fn meet_rank(f: &crate::gfq::Field, a: &ProjSubspace, b: &ProjSubspace) -> usize {
    let mut rows = a.basis().clone();
    rows.extend(b.basis().iter().cloned());
    a.rank() + b.rank() - linalg::rank(f, &rows)
}

/// Split `2(q^2+q+1)` cover planes into the two covers: planes of one cover
/// are pairwise disjoint, planes of different covers meet in a point.
pub fn split_covers(ctx: &BruckBoseContext, planes: &[ProjSubspace]) -> Result<[Vec<ProjSubspace>; 2], GeomError> {
    let f = ctx.tower().base();
    let q = ctx.q() as usize;
    let n = q * q + q + 1;
    if planes.len() != 2 * n {
        return Err(GeomError::InvalidCover);
    }
    let mut sorted = planes.to_vec();
    sorted.sort();
    let first = sorted[0].clone();
    let (mut x, mut y): (Vec<ProjSubspace>, Vec<ProjSubspace>) =
        sorted.into_iter().partition(|p| *p == first || planes_disjoint(f, p, &first));
    x.sort();
    y.sort();
    if x.len() != n || y.len() != n {
        return Err(GeomError::InvalidCover);
    }
    for (i, a) in x.iter().enumerate() {
        for b in &x[i + 1..] {
            if !planes_disjoint(f, a, b) {
                return Err(GeomError::InvalidCover);
            }
        }
        for b in &y {
            if meet_rank(f, a, b) != 1 {
                return Err(GeomError::InvalidCover);
            }
        }
    }
    for (i, a) in y.iter().enumerate() {
        for b in &y[i + 1..] {
            if !planes_disjoint(f, a, b) {
                return Err(GeomError::InvalidCover);
            }
        }
    }
    Ok([x, y])
}

/// The two covers of a splash, each with its transversal lines.
pub fn covers_of(ctx: &BruckBoseContext, splash: &Splash) -> Result<[Cover; 2], GeomError> {
    let planes = cover_planes(ctx, splash)?;
    covers_from_planes(ctx, &planes)
}

pub fn covers_from_planes(ctx: &BruckBoseContext, planes: &[ProjSubspace]) -> Result<[Cover; 2], GeomError> {
    let [x, y] = split_covers(ctx, planes)?;
    let tx = transversals_of(ctx.tower(), &x)?;
    let ty = transversals_of(ctx.tower(), &y)?;
    Ok([Cover { planes: x, transversals: tx }, Cover { planes: y, transversals: ty }])
}

fn extend_all(t: &FieldTower, planes: &[ProjSubspace]) -> Vec<ProjSubspace> {
    let n = t.cubic().order();
    planes.iter().map(|p| p.extend(n)).collect()
}

/// Order three conjugate lines as `(g, g^q, g^{q^2})` with `g` the least.
fn order_conjugates(t: &FieldTower, mut found: Vec<ProjSubspace>) -> Result<[ProjSubspace; 3], GeomError> {
    found.sort();
    found.dedup();
    if found.len() != 3 {
        return Err(GeomError::TransversalSearchFailed);
    }
    let g = found[0].clone();
    let g1 = conj_subspace(t, &g);
    let g2 = conj_subspace(t, &g1);
    if !found.contains(&g1) || !found.contains(&g2) || g1 == g || conj_subspace(t, &g2) != g {
        return Err(GeomError::TransversalSearchFailed);
    }
    Ok([g, g1, g2])
}

/// The transversal `g_C = <A1, A2^q>` of the conic cover of the canonical
/// subplane, with `A = (t1 + t2 τ - τ^2, t2 - τ, -1)`. Returns `A` and the line.
pub fn canonical_conic_transversal(t: &FieldTower) -> ([Elem; 3], ProjSubspace) {
    let cf = t.cubic();
    let [_, t1, t2] = t.t();
    let tau = t.tau();
    let a = [
        cf.sub(cf.add(t1, cf.mul(t2, tau)), cf.mul(tau, tau)),
        cf.sub(t2, tau),
        cf.neg(Elem::ONE),
    ];
    let z = Elem::ZERO;
    let a1 = vec![a[0], a[1], a[2], z, z, z];
    let a2q = vec![z, z, z, t.frobenius(a[0]), t.frobenius(a[1]), t.frobenius(a[2])];
    (a, ProjSubspace::from_rows(cf, 5, &[a1, a2q]))
}

/// Lines of PG(5,q^3) not defined over GF(q) meeting every extended plane.
/// Each candidate through a point `X` of the first plane is the unique line
/// through `X` meeting the second and third, so the sweep is exhaustive.
pub fn transversals_of(t: &FieldTower, planes: &[ProjSubspace]) -> Result<[ProjSubspace; 3], GeomError> {
    let cf = t.cubic();
    if planes.len() < 4 {
        return Err(GeomError::TransversalSearchFailed);
    }
    let ext = extend_all(t, planes);
    let mut found = Vec::new();
    for x in projgeom::all_points(cf, &ext[0]) {
        if x.is_over(t.q()) {
            continue;
        }
        let s = ext[1].span_point(cf, &x)?;
        let y = s.meet(cf, &ext[2])?;
        if y.rank() != 1 {
            continue;
        }
        let mut rows = y.basis().clone();
        rows.push(x.coords().to_vec());
        let line = ProjSubspace::from_rows(cf, 5, &rows);
        if line.is_over(t.q()) {
            continue;
        }
        if ext[3..].iter().all(|p| meet_rank(cf, &line, p) >= 1) {
            found.push(line);
        }
    }
    order_conjugates(t, found)
}

/// Transversals from left eigenvectors. With bases `B1`, `B2` of two planes,
/// every other plane is `{u B1 + u T B2}`; a line `⟨a B1, b B2⟩` meets it iff
/// `b ∝ a T`, so lines meeting four planes come from eigenvectors of
/// `T4 T3^{-1}`. Planes four to skip are tried until the eigenvalues are simple.
pub fn transversals_by_eigenvectors(t: &FieldTower, planes: &[ProjSubspace]) -> Result<[ProjSubspace; 3], GeomError> {
    let f = t.base();
    let cf = t.cubic();
    if planes.len() < 4 {
        return Err(GeomError::TransversalSearchFailed);
    }
    let b1 = planes[0].basis();
    let b2 = planes[1].basis();
    let mut basis = b1.clone();
    basis.extend(b2.iter().cloned());
    let binv = linalg::inverse(f, &basis).ok_or(GeomError::TransversalSearchFailed)?;
    // coordinates of a plane: rows of (basis of plane) * basis^{-1} = [U | W]
    let t_of = |p: &ProjSubspace| -> Option<Matrix> {
        let c = linalg::mat_mul(f, p.basis(), &binv);
        let u: Matrix = c.iter().map(|r| r[..3].to_vec()).collect();
        let w: Matrix = c.iter().map(|r| r[3..].to_vec()).collect();
        Some(linalg::mat_mul(f, &linalg::inverse(f, &u)?, &w))
    };
    let t3 = t_of(&planes[2]).ok_or(GeomError::TransversalSearchFailed)?;
    let t3inv = linalg::inverse(f, &t3).ok_or(GeomError::TransversalSearchFailed)?;
    let ext = extend_all(t, planes);
    for p4 in &planes[3..] {
        let t4 = t_of(p4).ok_or(GeomError::TransversalSearchFailed)?;
        let w = linalg::mat_mul(f, &t4, &t3inv);
        let wt = linalg::transpose(&w);
        let mut found = Vec::new();
        let mut simple = true;
        for c in cf.elements() {
            let mut m = wt.clone();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = cf.sub(row[i], c);
            }
            let ns = linalg::nullspace(cf, &m, 3);
            if ns.is_empty() {
                continue;
            }
            if ns.len() > 1 {
                simple = false;
                break;
            }
            let a = &ns[0];
            let r1 = linalg::vec_mat(cf, a, b1);
            let at = linalg::vec_mat(cf, a, &t3);
            let r2 = linalg::vec_mat(cf, &at, b2);
            let line = ProjSubspace::from_rows(cf, 5, &[r1, r2]);
            if !line.is_over(t.q()) && ext.iter().all(|p| meet_rank(cf, &line, p) >= 1) {
                found.push(line);
            }
        }
        if simple {
            return order_conjugates(t, found);
        }
    }
    Err(GeomError::TransversalSearchFailed)
}

/// Decide the conic cover: the 3-space of the image of any special conic
/// meets Σ∞ in a plane of it. Every special conic must agree.
pub fn classify_covers(
    ctx: &BruckBoseContext,
    pi: &Subplane,
    frame: &FixedFrame,
    covers: &[Cover; 2],
) -> Result<CoverRoles, GeomError> {
    let conics = curves::special_conics_of(ctx.tower(), pi, frame)?;
    let mut role = None;
    for c in &conics {
        let plane = curves::special_conic_plane(ctx, c)?;
        let which = covers.iter().position(|cv| cv.contains_plane(&plane)).ok_or(GeomError::ClassificationInconsistent)?;
        match role {
            None => role = Some(which),
            Some(r) if r != which => return Err(GeomError::ClassificationInconsistent),
            _ => {}
        }
    }
    let conic = role.ok_or(GeomError::ClassificationInconsistent)?;
    Ok(CoverRoles { conic, tangent: 1 - conic })
}

/// A subline of ℓ∞ as sorted spread indices.
pub type Subline = Vec<usize>;

/// Sublines of the splash cut out by the lines of `π` through each point.
pub fn pencil_sublines(ctx: &BruckBoseContext, pi: &Subplane) -> Vec<Subline> {
    let cf = ctx.tower().cubic();
    let mut out: Vec<Subline> = pi
        .points()
        .iter()
        .map(|p| {
            let mut s: Subline = pi
                .lines_through(p)
                .map(|l| {
                    let x = projgeom::normalize3(cf, projgeom::cross(cf, &l.dual, &LINE_AT_INFINITY)).expect("distinct");
                    ctx.inf_index(&x)
                })
                .collect();
            s.sort_unstable();
            s
        })
        .collect();
    out.sort();
    out
}

/// Sublines of the splash met by the lines of one cover plane: each line of
/// the plane meets `q+1` splash planes.
pub fn cover_plane_sublines(ctx: &BruckBoseContext, plane: &ProjSubspace) -> Vec<Subline> {
    let f = ctx.tower().base();
    let mut out: Vec<Subline> = projgeom::subspaces_of(f, plane, 1)
        .iter()
        .map(|l| {
            let mut s = plane_trace(ctx, l);
            s.sort_unstable();
            s
        })
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublineFamilies {
    pub pencil: Vec<Subline>,
    pub dual_conic: Vec<Subline>,
    /// Index of the cover whose plane lines give the pencil family.
    pub pencil_cover: usize,
}

/// The two families of sublines of the splash of `π`. Each cover gives one
/// family through the lines of any of its planes; the pencil family must
/// be one of them.
pub fn subline_families(ctx: &BruckBoseContext, covers: &[Cover; 2], pi: &Subplane) -> Result<SublineFamilies, GeomError> {
    let pencil = pencil_sublines(ctx, pi);
    let fam: [Vec<Subline>; 2] = [cover_plane_sublines(ctx, &covers[0].planes[0]), cover_plane_sublines(ctx, &covers[1].planes[0])];
    let pencil_cover = fam.iter().position(|f| *f == pencil).ok_or(GeomError::ClassificationInconsistent)?;
    Ok(SublineFamilies { dual_conic: fam[1 - pencil_cover].clone(), pencil, pencil_cover })
}

/// The regular spread containing a cover: `Φ` sends `(e,0)^{q^j}`, `(0,e)^{q^j}`
/// to `B1^{q^j}`, `B2^{q^j}` for a basis `B1`, `B2` of the cover's first
/// transversal. `Φ` commutes with the Frobenius map, so it is rational.
pub fn spread_containing_cover(ctx: &BruckBoseContext, cover: &Cover) -> Result<BruckBoseContext, GeomError> {
    let t = ctx.tower();
    let cf = t.cubic();
    let e = ctx.e_vec();
    let g = cover.transversals[0].basis();
    let mut a_cols: Vec<Vec<Elem>> = Vec::new();
    let mut b_cols: Vec<Vec<Elem>> = Vec::new();
    for j in 0..3 {
        for (half, brow) in g.iter().enumerate() {
            let mut v = vec![Elem::ZERO; 6];
            for i in 0..3 {
                v[3 * half + i] = t.frobenius_pow(e[i], j);
            }
            a_cols.push(v);
            b_cols.push(brow.iter().map(|&x| t.frobenius_pow(x, j)).collect());
        }
    }
    let a = linalg::transpose(&a_cols);
    let b = linalg::transpose(&b_cols);
    let ainv = linalg::inverse(cf, &a).ok_or(GeomError::SingularMatrix)?;
    let phi = linalg::mat_mul(cf, &b, &ainv);
    if phi.iter().flatten().any(|x| !t.is_base(*x)) {
        return Err(GeomError::InvalidCover);
    }
    let out = BruckBoseContext::with_frame(ctx.tower_arc().clone(), phi)?;
    if cover.planes.iter().any(|p| !out.spread().contains(p)) {
        return Err(GeomError::InvalidCover);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::sync::Arc;

    fn ctx(q: u32) -> BruckBoseContext {
        BruckBoseContext::new(Arc::new(FieldTower::for_q(q).unwrap()))
    }

    #[test]
    fn canonical_splash_is_norm_one_set() {
        for q in [2, 3, 4] {
            let c = ctx(q);
            let t = c.tower();
            let cf = t.cubic();
            let (b, s, frame) = canonical_subplane(&c);
            assert!(b.is_exterior());
            assert_eq!(b.points().len() as u32, q * q + q + 1);
            let n = (q * q + q + 1) as u64;
            let mut want: Vec<Pt3> = cf
                .nonzero()
                .filter(|&k| cf.pow(k, n) == Elem::ONE)
                .map(|k| projgeom::normalize3(cf, [k, Elem::ONE, Elem::ZERO]).unwrap())
                .collect();
            want.sort();
            assert_eq!(s.points(), &want[..]);
            let mut car = [frame.points[0], frame.points[1]];
            car.sort();
            assert_eq!(car, [[Elem::ZERO, Elem::ONE, Elem::ZERO], [Elem::ONE, Elem::ZERO, Elem::ZERO]]);
        }
    }

    #[test]
    fn base_frame_is_tau_powers() {
        let t = FieldTower::for_q(3).unwrap();
        let cf = t.cubic();
        let pi0 = base_subplane(&t);
        let fr = fixed_frame(&t, &pi0, &base_exterior_line(&t)).unwrap();
        let tau = t.tau();
        assert_eq!(fr.points[0], [Elem::ONE, tau, cf.mul(tau, tau)]);
        assert_eq!(fr.points[1], conj3(&t, &fr.points[0], 1));
    }

    #[test]
    fn companion_shares_splash_not_points() {
        let c = ctx(3);
        let t = c.tower();
        let (b, s, _) = canonical_subplane(&c);
        let pi = companion_subplane(&c);
        assert_eq!(splash_of(&c, &pi).unwrap().indices(), s.indices());
        let shared = b.points().iter().filter(|p| pi.contains(p)).count();
        assert_eq!(shared, 4);
        let k = canonical_matrix(t);
        let w = projgeom::normalize3(t.cubic(), [k[0][0], k[1][0], k[2][0]]).unwrap();
        assert!(b.contains(&w) && !pi.contains(&w));
    }

    #[test]
    fn covers_at_q2_match_exhaustive_scan() {
        let c = ctx(2);
        let (_, s, _) = canonical_subplane(&c);
        let fast = cover_planes(&c, &s).unwrap();
        let slow = cover_planes_exhaustive(&c, &s, 10_000).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(fast.len(), 14);
        let covers = covers_from_planes(&c, &fast).unwrap();
        for cv in &covers {
            assert_eq!(transversals_by_eigenvectors(c.tower(), &cv.planes).unwrap(), cv.transversals);
        }
    }

    #[test]
    fn splash_transversals_are_spread_transversals() {
        for q in [2, 3] {
            let c = ctx(q);
            let (_, s, _) = canonical_subplane(&c);
            let planes: Vec<ProjSubspace> = s.planes(&c).cloned().collect();
            let mut want = c.transversals().to_vec();
            want.sort();
            let mut got = transversals_of(c.tower(), &planes).unwrap().to_vec();
            got.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn subplane_from_points_roundtrip() {
        let c = ctx(3);
        let (b, _, _) = canonical_subplane(&c);
        let again = Subplane::from_points(c.tower(), b.points()).unwrap();
        assert_eq!(again, b);
        let outside = [Elem::ONE, Elem::ONE, Elem::ONE];
        let outside = if b.contains(&outside) { [Elem::ZERO, Elem(5), Elem::ONE] } else { outside };
        assert!(!b.contains(&outside));
        let mut broken = b.points().to_vec();
        broken[0] = outside;
        assert_eq!(Subplane::from_points(c.tower(), &broken), Err(GeomError::NotASubplane));
    }
}
