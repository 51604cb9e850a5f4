//! Checks on special conics, their images in PG(6,q) and the quadrics
//! through the image of a subplane.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::cubics::{self, Space3};
use super::oracle;
use super::quadrics;
use super::{below, sample_indices, Rec, Setup};
use crate::bruckbose::{BruckBoseContext, Pt3};
use crate::curves::{self, CurveClass, CurveFit, Form, RationalCurve, SubplaneConic};
use crate::error::GeomError;
use crate::gfq::{Elem, FieldTower};
use crate::poly::Poly;
use crate::projgeom::{self, ProjPoint, ProjSubspace};
use crate::splash::{self, Cover, FixedFrame, Splash, Subplane, LINE_AT_INFINITY};

pub(crate) fn frame_of(t: &FieldTower, pi: &Subplane) -> Result<FixedFrame, GeomError> {
    splash::fixed_frame(t, pi, &LINE_AT_INFINITY)
}

/// Point sets of the special conics of a subplane, sorted.
pub(crate) fn special_sets(t: &FieldTower, pi: &Subplane) -> Result<Vec<Vec<Pt3>>, GeomError> {
    let fr = frame_of(t, pi)?;
    let mut v: Vec<Vec<Pt3>> = curves::special_conics_of(t, pi, &fr)?.into_iter().map(|c| c.points).collect();
    v.sort();
    Ok(v)
}

/// Images of points of PG(2,q^3), sorted.
pub(crate) fn eps_set(ctx: &BruckBoseContext, pts: &[Pt3]) -> Vec<ProjPoint> {
    let mut v: Vec<ProjPoint> = pts.iter().map(|p| ctx.eps(p)).collect();
    v.sort();
    v
}

/// Rational points of a curve pulled back to PG(2,q^3), sorted.
pub(crate) fn curve_preimage(ctx: &BruckBoseContext, n: &RationalCurve) -> Vec<Pt3> {
    let mut v: Vec<Pt3> = n.points(ctx.tower().base()).iter().map(|p| ctx.eps_inv(p)).collect();
    v.sort();
    v
}

/// The pencil `C_k = C_0 + k C_∞` of special conics of PG(2,q) through
/// `(0,0,1)`, with `None` for `k = ∞`.
pub(crate) fn pencil_forms(t: &FieldTower) -> Vec<(Option<Elem>, Form)> {
    let f = t.base();
    let [t0, t1, t2] = t.t();
    let c0: Form = [Elem::ZERO, Elem::ONE, Elem::ZERO, Elem::ZERO, f.neg(Elem::ONE), Elem::ZERO];
    let ci: Form = [f.neg(t0), Elem::ZERO, Elem::ZERO, Elem::ONE, f.neg(t2), f.neg(t1)];
    let mut out: Vec<(Option<Elem>, Form)> = f
        .elements()
        .map(|k| {
            let mut q = c0;
            for i in 0..6 {
                q[i] = f.add(c0[i], f.mul(k, ci[i]));
            }
            (Some(k), q)
        })
        .collect();
    out.push((None, ci));
    out
}

const P001: Pt3 = [Elem::ZERO, Elem::ZERO, Elem::ONE];

/// Nuclei of special conics and nucleus lines.
pub(crate) fn c3_2(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let t = s.tower();
    let f = t.base();
    let [_, t1, t2] = t.t();
    let m = s.b.generator().ok_or(GeomError::NoGenerator)?;
    let fb = splash::frame_in_base(t, &s.b, &s.frame)?;
    let n_p: Pt3 = projgeom::normalize3(f, [t1, Elem::ZERO, Elem::ONE]).expect("nonzero");
    let mut nuclei = Vec::new();
    for (k, q) in pencil_forms(t) {
        let c = SubplaneConic::new(t, m, q, Some(&fb))?;
        rec.check("pencil_conic_is_special", c.special, || format!("k={:?}", k));
        rec.check("pencil_conic_contains_p", c.base_points.binary_search(&P001).is_ok(), || format!("k={:?}", k));
        let want = match k {
            Some(k) => [k, f.sub(Elem::ONE, f.mul(k, t2)), f.neg(f.mul(k, t1))],
            None => [Elem::ONE, f.neg(t2), f.neg(t1)],
        };
        let want = projgeom::normalize3(f, want).expect("nonzero");
        let got = curves::nucleus_of_form(t, &c.form)?;
        rec.check("pencil_nucleus_formula", got == want, || format!("k={:?}: {:?} vs {:?}", k, got, want));
        rec.check("pencil_nucleus_on_n_p", projgeom::incident3(f, &n_p, &got), || format!("k={:?}", k));
        nuclei.push(got);
    }
    nuclei.sort();
    nuclei.dedup();
    rec.check_eq("pencil_nuclei_distinct", nuclei.len() as u64, t.q() as u64 + 1);
    rec.check("p_not_on_n_p", !projgeom::incident3(f, &n_p, &P001), || "P on n_P".into());

    let mut lines: BTreeSet<Pt3> = BTreeSet::new();
    for p in s.b.points() {
        let l = curves::nucleus_line(t, &s.b, &s.frame, p)?;
        rec.check("nucleus_line_avoids_point", l.points.binary_search(p).is_err(), || format!("{:?}", p));
        rec.check("nucleus_line_is_line_of_subplane", s.b.lines().iter().any(|x| x.dual == l.dual), || format!("{:?}", p));
        lines.insert(l.dual);
    }
    rec.check_eq("nucleus_lines_distinct", lines.len() as u64, s.b.lines().len() as u64);
    let mut nuc: BTreeSet<Pt3> = BTreeSet::new();
    for c in curves::special_conics_of(t, &s.b, &s.frame)? {
        let n = curves::nucleus(t, &c)?;
        rec.check("nucleus_in_subplane", s.b.contains(&n), || format!("{:?}", n));
        nuc.insert(n);
    }
    rec.check_eq("nuclei_of_special_conics_distinct", nuc.len() as u64, s.b.points().len() as u64);
    rec.add("nucleus_lines", lines.len() as u64);
    Ok(())
}

/// The plane `[C1] = {([x],[x^{q^2}],0)}`.
fn c1_plane(ctx: &BruckBoseContext) -> ProjSubspace {
    let t = ctx.tower();
    let f = t.base();
    let rows: Vec<Vec<Elem>> = [Elem::ONE, t.tau(), t.cubic().mul(t.tau(), t.tau())]
        .iter()
        .map(|&x| ctx.pair(x, t.frobenius_pow(x, 2)))
        .collect();
    ProjSubspace::from_rows(f, 5, &rows)
}

/// Special conics have twisted-cubic images about conic-cover planes.
pub(crate) fn c3_3(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let cf = t.cubic();
    for c in curves::special_conics_of(t, &s.b, &s.frame)? {
        let n = curves::bb_image_of_conic(ctx, &c)?;
        rec.check("image_is_twisted_cubic", curves::classify_rational(&n) == CurveClass::TwistedCubic, || format!("{:?}", c.form));
        let mut pts = n.points(f);
        pts.sort();
        rec.check("image_points_match", pts == eps_set(ctx, &c.points), || format!("{:?}", c.form));
        if pts.len() >= 5 {
            let fit = curves::classify_curve(f, &pts)?;
            rec.check("points_fit_a_twisted_cubic", matches!(fit, CurveFit::TwistedCubic(_)), || format!("{:?}", c.form));
        }
        let plane = curves::sigma_plane_of(ctx, &n)?;
        rec.check("plane_in_conic_cover", s.conic_cover().contains_plane(&plane), || format!("{:?}", c.form));
    }
    // the conic y^2 = xz of PG(2,q) and the plane [C1]
    let k = s.b.generator().ok_or(GeomError::NoGenerator)?;
    let fb = splash::frame_in_base(t, &s.b, &s.frame)?;
    let c0 = SubplaneConic::new(t, k, pencil_forms(t)[0].1, Some(&fb))?;
    let plane = curves::special_conic_plane(ctx, &c0)?;
    let c1 = c1_plane(ctx);
    rec.check("c1_plane_of_base_conic", plane == c1, || "plane differs from [C1]".into());
    rec.check("c1_plane_in_conic_cover", s.conic_cover().contains_plane(&c1), || "[C1] not a cover plane".into());
    // G(θ) = -(θ-τ^q)(θ-τ^{q^2}) has coordinates θ^2(-1,0,0) + θ(t2,-1,0) + (t1,t2,-1)
    let [_, t1, t2] = t.t();
    let tq = t.frobenius(t.tau());
    let tq2 = t.frobenius(tq);
    for th in f.elements() {
        let g = cf.neg(cf.mul(cf.sub(th, tq), cf.sub(th, tq2)));
        let th2 = f.mul(th, th);
        let want = [f.add(f.neg(th2), f.add(f.mul(th, t2), t1)), f.add(f.neg(th), t2), f.neg(Elem::ONE)];
        rec.check("g_theta_coordinates", t.coords_of(g) == want, || format!("θ={:?}", th));
    }
    Ok(())
}

/// Distinct special conics lie about distinct conic-cover planes.
pub(crate) fn c3_4(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let mut planes: BTreeSet<ProjSubspace> = BTreeSet::new();
    let conics = curves::special_conics_of(t, &s.b, &s.frame)?;
    for c in &conics {
        let plane = curves::special_conic_plane(ctx, c)?;
        rec.check("plane_in_conic_cover", s.conic_cover().contains_plane(&plane), || format!("{:?}", c.form));
        planes.insert(plane);
    }
    rec.check_eq("special_conics", conics.len() as u64, s.conic_cover().planes.len() as u64);
    rec.check_eq("distinct_planes", planes.len() as u64, s.conic_cover().planes.len() as u64);
    Ok(())
}

/// Images of special conics meet the conic-cover transversals.
pub(crate) fn c3_5(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let cf = t.cubic();
    let cc = s.conic_cover();
    let tc = s.tangent_cover();
    for c in curves::special_conics_of(t, &s.b, &s.frame)? {
        let n = curves::bb_image_of_conic(ctx, &c)?;
        let plane = curves::sigma_plane_of(ctx, &n)?;
        rec.check("meets_conic_cover_transversals", curves::is_x_special_cubic(ctx, &n, &plane, &cc.transversals)?, || format!("{:?}", c.form));
        let pts = n.sigma_inf_points_ext(t);
        let on_t = pts.iter().filter(|p| tc.transversals.iter().any(|g| g.contains_vec(cf, &p.coords()[..6]))).count();
        rec.check_eq("avoids_tangent_cover_transversals", on_t as u64, 0);
    }
    let (_, g) = splash::canonical_conic_transversal(t);
    let tau = t.tau();
    rec.check("explicit_transversal_is_conic_cover_transversal", cc.transversals.contains(&g), || "g_C not found".into());
    // the base conic y^2 = xz: which of its points at τ, τ^q lies on g_C
    let k = s.b.generator().ok_or(GeomError::NoGenerator)?.matrix();
    let polys = [0, 1, 2].map(|i| Poly::new(k[i].clone()));
    let n = curves::bb_image_of_param(ctx, &polys, 2)?;
    let c1 = c1_plane(ctx).extend(cf.order());
    let mut hits = 0;
    for (name, th) in [("tau", tau), ("tau_q", t.frobenius(tau))] {
        let p = n.point_at_ext(cf, Some(th));
        let v = &p.coords()[..6];
        let on = p.coords()[6].is_zero() && g.contains_vec(cf, v);
        rec.set(&format!("point_at_{}_on_g_c", name), u64::from(on));
        if on {
            hits += 1;
            rec.check("point_on_g_c_in_c1", c1.contains_vec(cf, v), || name.into());
        }
    }
    rec.check_eq("one_base_conic_point_on_g_c", hits, 1);
    Ok(())
}

/// Key of the image of a conic.
fn conic_key(ctx: &BruckBoseContext, c: &SubplaneConic) -> Result<Vec<ProjPoint>, GeomError> {
    Ok(cubics::cubic_key(ctx.tower(), &curves::bb_image_of_conic(ctx, c)?))
}

/// What the closure of a cover-special cubic's points is.
struct Recovered {
    points: Vec<Pt3>,
    splash_ok: bool,
    special: bool,
    conic_cover: usize,
}

fn recover_subplane(ctx: &BruckBoseContext, splash_ref: &Splash, covers: &[Cover; 2], pts: &[Pt3]) -> Result<Option<Recovered>, GeomError> {
    let t = ctx.tower();
    let Some(cl) = oracle::close_subplane(t, pts) else { return Ok(None) };
    let pi = match Subplane::from_points(t, &cl.points) {
        Ok(p) => p,
        Err(_) => return Ok(None),
    };
    if !pi.is_exterior() {
        return Ok(None);
    }
    let splash_ok = splash::splash_of(ctx, &pi)?.indices() == splash_ref.indices();
    if !splash_ok {
        return Ok(Some(Recovered { points: cl.points, splash_ok, special: false, conic_cover: 2 }));
    }
    let fr = frame_of(t, &pi)?;
    let special = special_sets(t, &pi)?.binary_search(&pts.to_vec()).is_ok();
    let roles = splash::classify_covers(ctx, &pi, &fr, covers)?;
    Ok(Some(Recovered { points: cl.points, splash_ok, special, conic_cover: roles.conic }))
}

/// Images `λx + t` of a subplane under the maps fixing ℓ∞ pointwise.
fn affine_orbit(t: &FieldTower, pi: &Subplane, out: &mut BTreeSet<Vec<Pt3>>) {
    let cf = t.cubic();
    let aff: Vec<(Elem, Elem)> = pi
        .points()
        .iter()
        .map(|p| {
            let iz = cf.inv(p[2]);
            (cf.mul(p[0], iz), cf.mul(p[1], iz))
        })
        .collect();
    for lam in cf.nonzero() {
        for a in cf.elements() {
            for b in cf.elements() {
                let mut img: Vec<Pt3> = aff
                    .iter()
                    .map(|&(x, y)| projgeom::normalize3(cf, [cf.add(cf.mul(lam, x), a), cf.add(cf.mul(lam, y), b), Elem::ONE]).expect("affine"))
                    .collect();
                img.sort();
                out.insert(img);
            }
        }
    }
}

/// The converse and the count of subplanes with a given splash.
pub(crate) fn c3_6(s: &Setup, rec: &mut Rec, rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let q = t.q() as u64;
    let q3 = q * q * q;
    let n_planes = q * q + q + 1;
    let per_space = q3 * (q3 - 1);
    let want_subplanes = 2 * q3 * q3 * (q3 - 1);
    let want_x = want_subplanes * n_planes;
    let exhaustive_y = q <= 3;
    let mut y_keys: BTreeSet<Vec<ProjPoint>> = BTreeSet::new();
    let mut y = 0u64;
    let mut sample: Vec<(usize, RationalCurve)> = Vec::new();
    if exhaustive_y {
        rec.budget(2 * n_planes * q3 * per_space)?;
    }
    for (ci, cover) in s.covers.iter().enumerate() {
        let planes: Vec<usize> = if exhaustive_y { (0..cover.planes.len()).collect() } else { vec![below(rng, cover.planes.len())] };
        for pi in planes {
            let spaces = cubics::spaces_about(f, &cover.planes[pi]);
            let chosen: Vec<usize> = if exhaustive_y { (0..spaces.len()).collect() } else { vec![below(rng, spaces.len())] };
            for si in chosen {
                let gen = cubics::x_special_cubics(ctx, &spaces[si], &cover.transversals)?;
                rec.check_eq("special_cubics_per_space", gen.len() as u64, per_space);
                y += gen.len() as u64;
                for n in gen {
                    if q == 2 {
                        y_keys.insert(cubics::cubic_key(t, &n));
                    }
                    if (sample.len() < 64 || below(rng, 1000) < 2)
                        && sample.len() < 256 {
                            sample.push((ci, n));
                        }
                }
            }
        }
    }
    if exhaustive_y {
        rec.check_eq("y_special_cubics", y, 2 * n_planes * q3 * per_space);
    }
    rec.set("y", y);

    if q == 2 {
        // every subplane with the splash, by closure, and every special conic
        let found = oracle::exterior_subplanes_with_splash(ctx, &s.splash, rec.limit())?;
        rec.check_eq("subplanes_with_splash", found.len() as u64, want_subplanes);
        let mut x_keys: BTreeSet<Vec<ProjPoint>> = BTreeSet::new();
        let mut x = 0u64;
        for cl in &found {
            let pi = Subplane::from_points(t, &cl.points)?;
            let fr = frame_of(t, &pi)?;
            for c in curves::special_conics_of(t, &pi, &fr)? {
                x += 1;
                x_keys.insert(conic_key(ctx, &c)?);
            }
        }
        rec.check_eq("x_pairs", x, want_x);
        rec.check_eq("x_equals_y", x, y);
        rec.check_eq("special_conic_images_distinct", x_keys.len() as u64, x);
        rec.check("special_conic_images_are_the_special_cubics", x_keys == y_keys, || {
            format!("{} conic images, {} cubics", x_keys.len(), y_keys.len())
        });
        // independent enumeration of the cubics in one 3-space
        let cover = &s.covers[0];
        let space = cubics::spaces_about(f, &cover.planes[0]).swap_remove(0);
        let all = cubics::all_twisted_cubics_q2(t, &space)?;
        rec.check_eq("twisted_cubics_in_space", all.len() as u64, 3360);
        let mut special: BTreeSet<Vec<ProjPoint>> = BTreeSet::new();
        for n in &all {
            if curves::is_x_special_cubic(ctx, n, &cover.planes[0], &cover.transversals)? {
                special.insert(cubics::cubic_key(t, n));
            }
        }
        let gen: BTreeSet<Vec<ProjPoint>> =
            cubics::x_special_cubics(ctx, &space, &cover.transversals)?.iter().map(|n| cubics::cubic_key(t, n)).collect();
        rec.check_eq("special_among_all_cubics", special.len() as u64, per_space);
        rec.check("generator_matches_brute_force", special == gen, || format!("{} vs {}", special.len(), gen.len()));
        return Ok(());
    }

    if q == 3 {
        let mut orb: BTreeSet<Vec<Pt3>> = BTreeSet::new();
        affine_orbit(t, &s.b, &mut orb);
        affine_orbit(t, &splash::companion_subplane(ctx), &mut orb);
        rec.check_eq("subplanes_with_splash", orb.len() as u64, want_subplanes);
        let all: Vec<&Vec<Pt3>> = orb.iter().collect();
        for i in sample_indices(rng, all.len(), 64) {
            let pi = Subplane::from_points(t, all[i])?;
            let ok = pi.is_exterior() && splash::splash_of(ctx, &pi)?.indices() == s.splash.indices();
            rec.check("orbit_member_has_splash", ok, || format!("{:?}", all[i]));
        }
        let x = orb.len() as u64 * n_planes;
        rec.check_eq("x_pairs", x, want_x);
        rec.check_eq("x_equals_y", x, y);
        for (ci, n) in &sample {
            let pts = curve_preimage(ctx, n);
            let r = recover_subplane(ctx, &s.splash, &s.covers, &pts)?;
            let ok = r.as_ref().is_some_and(|r| r.splash_ok && r.special && r.conic_cover == *ci && orb.contains(&r.points));
            rec.check("special_cubic_is_special_conic_of_subplane", ok, || format!("{:?}", pts));
        }
        return Ok(());
    }

    for (ci, n) in &sample {
        let pts = curve_preimage(ctx, n);
        let r = recover_subplane(ctx, &s.splash, &s.covers, &pts)?;
        let ok = r.as_ref().is_some_and(|r| r.splash_ok && r.special && r.conic_cover == *ci);
        rec.check("special_cubic_is_special_conic_of_subplane", ok, || format!("{:?}", pts));
    }
    Ok(())
}

fn conics_in_scope(s: &Setup, rng: &mut ChaCha8Rng) -> Result<Vec<SubplaneConic>, GeomError> {
    let t = s.tower();
    let all = curves::conics_of(t, &s.b, &s.frame)?;
    if t.q() <= 3 {
        return Ok(all);
    }
    let idx = sample_indices(rng, all.len(), 200);
    let mut out: Vec<SubplaneConic> = idx.into_iter().map(|i| all[i].clone()).filter(|c| !c.special).collect();
    out.extend(all.into_iter().filter(|c| c.special));
    Ok(out)
}

/// Conic images have order 3 or 6 and no point at infinity.
pub(crate) fn c3_7(s: &Setup, rec: &mut Rec, rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let conics = conics_in_scope(s, rng)?;
    for c in &conics {
        let n = curves::bb_image_of_conic(ctx, c)?;
        let cls = curves::classify_rational(&n);
        rec.check("order_three_or_six", matches!(cls, CurveClass::TwistedCubic | CurveClass::Nrc6), || format!("{:?}", c.form));
        let pts = n.points(f);
        rec.check("no_point_at_infinity", pts.iter().all(|p| !p.coords()[6].is_zero()), || format!("{:?}", c.form));
        let mut sorted = pts.clone();
        sorted.sort();
        rec.check("image_points_match", sorted == eps_set(ctx, &c.points), || format!("{:?}", c.form));
        // the last coordinate of G(θ) has degree 2 and no root in GF(q)
        let g2 = c.param_polys(t)[2].clone();
        let deg_ok = g2.degree() == Some(2);
        let no_root = f.elements().all(|th| !g2.eval(t.cubic(), th).is_zero());
        rec.check("third_coordinate_quadratic_without_rational_root", deg_ok && no_root, || format!("{:?}", c.form));
    }
    rec.add("conics_examined", conics.len() as u64);
    Ok(())
}

/// Special conics are exactly the conics with order-3 images.
pub(crate) fn c3_8(s: &Setup, rec: &mut Rec, rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let conics = conics_in_scope(s, rng)?;
    let cc = s.conic_cover();
    let mut special = 0u64;
    for c in &conics {
        let n = curves::bb_image_of_conic(ctx, c)?;
        let cls = curves::classify_rational(&n);
        if c.special {
            special += 1;
            let ok = cls == CurveClass::TwistedCubic && {
                let plane = curves::sigma_plane_of(ctx, &n)?;
                cc.contains_plane(&plane) && curves::is_x_special_cubic(ctx, &n, &plane, &cc.transversals)?
            };
            rec.check("special_gives_conic_cover_special_cubic", ok, || format!("{:?}", c.form));
        } else {
            rec.check("non_special_gives_sextic", cls == CurveClass::Nrc6, || format!("{:?}", c.form));
        }
    }
    let q = t.q() as u64;
    rec.check_eq("special_conics", special, q * q + q + 1);
    rec.add("conics_examined", conics.len() as u64);
    Ok(())
}

/// Tangent-cover special cubics are special conics of other subplanes.
pub(crate) fn c3_9(s: &Setup, rec: &mut Rec, rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let q = t.q() as u64;
    let tc = s.tangent_cover();
    let tangent = s.roles.tangent;
    let per_space = q * q * q * (q * q * q - 1);
    let planes: Vec<usize> = if q <= 3 { (0..tc.planes.len()).collect() } else { sample_indices(rng, tc.planes.len(), 2) };
    // at q = 2 three points do not close; look the conic up among all subplanes
    let mut lookup: BTreeMap<Vec<Pt3>, Vec<(Vec<Pt3>, usize)>> = BTreeMap::new();
    if q == 2 {
        for cl in oracle::exterior_subplanes_with_splash(ctx, &s.splash, rec.limit())? {
            let pi = Subplane::from_points(t, &cl.points)?;
            let fr = frame_of(t, &pi)?;
            let roles = splash::classify_covers(ctx, &pi, &fr, &s.covers)?;
            for set in special_sets(t, &pi)? {
                lookup.entry(set).or_default().push((cl.points.clone(), roles.conic));
            }
        }
    }
    let mut cache: BTreeMap<Vec<Pt3>, Option<(bool, Vec<Vec<Pt3>>, usize)>> = BTreeMap::new();
    let mut examined = 0u64;
    let mut found_subplanes: BTreeSet<Vec<Pt3>> = BTreeSet::new();
    for pi in planes {
        let spaces = cubics::spaces_about(f, &tc.planes[pi]);
        let space = &spaces[below(rng, spaces.len())];
        let mut gen = cubics::x_special_cubics(ctx, space, &tc.transversals)?;
        rec.check_eq("special_cubics_per_space", gen.len() as u64, per_space);
        if q > 3 {
            let idx = sample_indices(rng, gen.len(), 64);
            gen = idx.into_iter().map(|i| gen[i].clone()).collect();
        }
        for n in &gen {
            examined += 1;
            let pts = curve_preimage(ctx, n);
            let inb = pts.iter().filter(|p| s.b.contains(p)).count();
            rec.check("at_most_three_points_in_subplane", inb <= 3, || format!("{:?}", pts));
            if q == 2 {
                let hits = lookup.get(&pts).cloned().unwrap_or_default();
                let ok = hits.len() == 1 && hits[0].1 == tangent && hits[0].0 != s.b.points();
                rec.check("unique_subplane_with_tangent_cover_as_conic_cover", ok, || format!("{:?}: {} subplanes", pts, hits.len()));
                if let Some(h) = hits.first() {
                    found_subplanes.insert(h.0.clone());
                }
                continue;
            }
            let t0 = oracle::close_subplane(t, &pts);
            let Some(cl) = t0 else {
                rec.check("points_close_to_subplane", false, || format!("{:?}", pts));
                continue;
            };
            let entry = match cache.get(&cl.points) {
                Some(e) => e.clone(),
                None => {
                    let e = match Subplane::from_points(t, &cl.points) {
                        Ok(p) if p.is_exterior() && splash::splash_of(ctx, &p)?.indices() == s.splash.indices() => {
                            let fr = frame_of(t, &p)?;
                            let roles = splash::classify_covers(ctx, &p, &fr, &s.covers)?;
                            Some((true, special_sets(t, &p)?, roles.conic))
                        }
                        _ => None,
                    };
                    cache.insert(cl.points.clone(), e.clone());
                    e
                }
            };
            let ok = entry.as_ref().is_some_and(|(sp, sets, conic)| *sp && *conic == tangent && sets.binary_search(&pts).is_ok());
            rec.check("special_conic_of_subplane_with_tangent_cover_as_conic_cover", ok, || format!("{:?}", pts));
            found_subplanes.insert(cl.points);
        }
    }
    rec.add("cubics_examined", examined);
    rec.add("subplanes_reached", found_subplanes.len() as u64);
    Ok(())
}

/// Σ∞ point of the tangent at `p` of a curve.
fn tangent_point(ctx: &BruckBoseContext, n: &RationalCurve, p: &ProjPoint) -> Result<ProjPoint, GeomError> {
    let f = ctx.tower().base();
    let th = n.parameter_of(f, p).ok_or(GeomError::PointNotOnCurve)?;
    n.tangent_limit_point(f, th)
}

/// Tangents of line images and special conic images agree.
pub(crate) fn c3_10(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let cf = t.cubic();
    let [_, _, t2] = t.t();
    let m = s.b.generator().ok_or(GeomError::NoGenerator)?;
    let fb = splash::frame_in_base(t, &s.b, &s.frame)?;
    let p = ctx.eps(&P001);
    for (k, q) in pencil_forms(t) {
        let c = SubplaneConic::new(t, m, q, Some(&fb))?;
        let want = match k {
            Some(k) => [f.sub(f.neg(Elem::ONE), f.mul(k, t2)), k, Elem::ZERO],
            None => [f.neg(t2), Elem::ONE, Elem::ZERO],
        };
        let want = projgeom::normalize3(f, want).expect("nonzero");
        rec.check("pencil_tangent_formula", c.base_tangent(f, &P001) == want, || format!("k={:?}", k));
        let Some(k) = k.filter(|k| !k.is_zero()) else { continue };
        // w = (-k t2 - 1)/k and I = w([1],[1],0) + ([τ],[τ^q],0)
        let w = f.div(f.sub(f.neg(f.mul(k, t2)), Elem::ONE), k);
        let tau = t.tau();
        let mut iv = ctx.pair(cf.add(w, tau), cf.add(w, t.frobenius(tau)));
        iv.push(Elem::ZERO);
        let want_i = ProjPoint::new(f, &iv).expect("nonzero");
        let other = m.apply_vec(cf, &[Elem::ONE, f.neg(w), Elem::ZERO]);
        let other = projgeom::normalize3(cf, [other[0], other[1], other[2]]).expect("nonzero");
        let line = s.b.line_through(&P001, &other).ok_or(GeomError::PointNotOnCurve)?;
        let nl = curves::bb_image_of_line(ctx, &s.b, line)?;
        let nc = curves::bb_image_of_conic(ctx, &c)?;
        rec.check("line_tangent_point_formula", tangent_point(ctx, &nl, &p)? == want_i, || format!("k={:?}", k));
        rec.check("conic_tangent_point_formula", tangent_point(ctx, &nc, &p)? == want_i, || format!("k={:?}", k));
    }
    let mut flags = 0u64;
    for pt in s.b.points() {
        let pp = ctx.eps(pt);
        for line in s.b.lines_through(pt) {
            let c = curves::special_conic_tangent(t, &s.b, &s.frame, pt, line)?;
            let nl = curves::bb_image_of_line(ctx, &s.b, line)?;
            let nc = curves::bb_image_of_conic(ctx, &c)?;
            let a = nl.tangent_at(f, &pp)?;
            let b = nc.tangent_at(f, &pp)?;
            rec.check("tangent_lines_equal", a == b, || format!("{:?} on {:?}", pt, line.dual));
            flags += 1;
        }
    }
    let q = t.q() as u64;
    rec.check_eq("flags", flags, (q * q + q + 1) * (q + 1));
    Ok(())
}

/// Quadrics through the image of the canonical subplane.
pub(crate) fn c3_11(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let cf = t.cubic();
    let sys = quadrics::surface_quadric_system(ctx, &s.b)?;
    let pts = eps_set(ctx, s.b.points());
    let psys = quadrics::quadric_system_of(f, &pts);
    rec.set("surface_system_dim", sys.dim as u64);
    rec.set("point_system_dim", psys.dim as u64);
    rec.check_eq("nine_quadrics", sys.dim as u64, 9);
    let q = t.q() as usize;
    rec.check("point_system_at_least_bound", psys.dim + q * q + q + 1 >= quadrics::QUADRIC_LEN, || format!("{}", psys.dim));
    for (i, quad) in sys.basis.iter().enumerate() {
        let on = pts.iter().all(|p| quadrics::eval_quadric(f, quad, p.coords()).is_zero());
        rec.check("quadric_contains_subplane_image", on, || format!("quadric {}", i));
        for (j, g) in ctx.transversals().iter().enumerate() {
            rec.check("quadric_contains_spread_transversal", quadrics::check_line_in_quadric(cf, quad, g), || format!("quadric {}, line {}", i, j));
        }
        for (j, g) in s.conic_cover().transversals.iter().enumerate() {
            rec.check("quadric_contains_conic_cover_transversal", quadrics::check_line_in_quadric(cf, quad, g), || format!("quadric {}, line {}", i, j));
        }
    }
    Ok(())
}

/// Evidence on the tangent-cover transversals; never fails.
pub(crate) fn c3_11x(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let cf = t.cubic();
    let sys = quadrics::surface_quadric_system(ctx, &s.b)?;
    let tc = s.tangent_cover();
    let containing = sys.basis.iter().filter(|qd| tc.transversals.iter().any(|g| quadrics::check_line_in_quadric(cf, qd, g))).count();
    rec.set("system_dim", sys.dim as u64);
    rec.set("basis_quadrics_containing_a_tangent_transversal", containing as u64);
    for (j, g) in tc.transversals.iter().enumerate() {
        rec.set(&format!("subsystem_dim_containing_tangent_transversal_{}", j), quadrics::subsystem_containing(t, &sys, g) as u64);
    }
    Ok(())
}

/// Point sets of PG(2,q^3) read in another Bruck-Bose plane.
fn transport(from: &BruckBoseContext, to: &BruckBoseContext, pts: &[Pt3]) -> Vec<Pt3> {
    let mut v: Vec<Pt3> = pts.iter().map(|p| to.eps_inv(&from.eps(p))).collect();
    v.sort();
    v
}

fn plane_set<'a>(planes: impl Iterator<Item = &'a ProjSubspace>) -> Vec<ProjSubspace> {
    let mut v: Vec<ProjSubspace> = planes.cloned().collect();
    v.sort();
    v
}

/// The subplane read in the spread of its conic cover.
pub(crate) fn c3_12(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let ctx_c = splash::spread_containing_cover(ctx, s.conic_cover())?;
    let cover_planes = plane_set(s.conic_cover().planes.iter());
    let spread_c = plane_set(ctx_c.spread().iter());
    rec.check("conic_cover_in_new_spread", cover_planes.iter().all(|p| spread_c.binary_search(p).is_ok()), || "cover plane not a spread plane".into());
    let pts = transport(ctx, &ctx_c, s.b.points());
    let pi2 = match Subplane::from_points(t, &pts) {
        Ok(p) => p,
        Err(_) => {
            rec.check("image_is_subplane", false, || format!("{:?}", pts));
            return Ok(());
        }
    };
    rec.check("image_is_subplane", true, String::new);
    rec.check("image_is_exterior", pi2.is_exterior(), || format!("{:?}", pts));
    let fr2 = frame_of(t, &pi2)?;
    // lines of π and special conics of π'
    let mut lines_img: Vec<Vec<Pt3>> = s.b.lines().iter().map(|l| transport(ctx, &ctx_c, &l.points)).collect();
    lines_img.sort();
    let sc2 = special_sets(t, &pi2)?;
    rec.check("lines_are_special_conics", lines_img == sc2, || "line images differ from special conics".into());
    let sc1: Vec<Vec<Pt3>> = {
        let mut v: Vec<Vec<Pt3>> = special_sets(t, &s.b)?.iter().map(|c| transport(ctx, &ctx_c, c)).collect();
        v.sort();
        v
    };
    let mut lines2: Vec<Vec<Pt3>> = pi2.lines().iter().map(|l| l.points.clone()).collect();
    lines2.sort();
    rec.check("special_conics_are_lines", sc1 == lines2, || "special conic images differ from lines".into());
    // splash C, conic cover S, tangent cover T
    let sp2 = splash::splash_of(&ctx_c, &pi2)?;
    let sp2_planes = plane_set(sp2.planes(&ctx_c));
    rec.check("splash_is_conic_cover", sp2_planes == cover_planes, || "splash differs".into());
    let covers2 = splash::covers_of(&ctx_c, &sp2)?;
    let roles2 = splash::classify_covers(&ctx_c, &pi2, &fr2, &covers2)?;
    let s_planes = plane_set(s.splash.planes(ctx));
    rec.check("conic_cover_is_splash", plane_set(covers2[roles2.conic].planes.iter()) == s_planes, || "conic cover differs".into());
    rec.check("tangent_cover_is_tangent_cover", plane_set(covers2[roles2.tangent].planes.iter()) == plane_set(s.tangent_cover().planes.iter()), || {
        "tangent cover differs".into()
    });
    Ok(())
}

/// The point set in the spread of the tangent cover is not a subplane.
pub(crate) fn c3_12b(s: &Setup, rec: &mut Rec, rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let tc = s.tangent_cover();
    let ctx_t = splash::spread_containing_cover(ctx, tc)?;
    let pts = transport(ctx, &ctx_t, s.b.points());
    rec.check("image_is_not_subplane", Subplane::from_points(t, &pts).is_err(), || format!("{:?}", pts));
    let img = eps_set(ctx, s.b.points());
    // tangent-cover special cubics through a point of [π] have at most three points in it
    let mut most = 0usize;
    for plane in &tc.planes {
        let p = &img[below(rng, img.len())];
        let space = Space3::new(plane, p.coords());
        for n in cubics::x_special_cubics(&ctx_t, &space, &tc.transversals)? {
            let k = n.points(f).iter().filter(|x| img.binary_search(x).is_ok()).count();
            most = most.max(k);
            rec.check("special_cubic_meets_image_in_at_most_three", k <= 3, || format!("{} points", k));
        }
    }
    rec.set("largest_meet", most as u64);
    Ok(())
}
