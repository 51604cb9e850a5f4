//! Checks on the two subplanes sharing a splash and a subline.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::checks2::{random_affine, random_exterior_subline};
use super::checks3::{frame_of, special_sets};
use super::construction;
use super::cubics;
use super::oracle;
use super::{below, Rec, Setup};
use crate::bruckbose::{BruckBoseContext, Pt3};
use crate::curves::{self, ChordLabel, RationalCurve};
use crate::error::GeomError;
use crate::gfq::Elem;
use crate::linalg;
use crate::projgeom::{self, Homography, ProjPoint, ProjSubspace};
use crate::splash::{self, Subplane};

/// Points shared by ℬ and its companion.
fn common_subline(b: &Subplane, comp: &Subplane) -> Vec<Pt3> {
    b.points().iter().filter(|p| comp.contains(p)).copied().collect()
}

/// The families swap and `H` interchanges ℬ and its companion.
pub(crate) fn c4_1(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let cf = t.cubic();
    let comp = splash::companion_subplane(ctx);
    rec.check("companion_is_exterior", comp.is_exterior(), || "companion meets ℓ∞".into());
    rec.check("same_splash", splash::splash_of(ctx, &comp)?.indices() == s.splash.indices(), || "splashes differ".into());
    let h = Homography::new(cf, splash::swap_matrix())?;
    let mut img: Vec<Pt3> = s.b.points().iter().map(|p| projgeom::normalize3(cf, [p[1], p[0], p[2]]).expect("nonzero")).collect();
    img.sort();
    rec.check("h_maps_b_to_companion", img == comp.points(), || "H(ℬ) differs".into());
    let mut back: Vec<Pt3> = comp
        .points()
        .iter()
        .map(|p| {
            let v = h.apply_vec(cf, p);
            projgeom::normalize3(cf, [v[0], v[1], v[2]]).expect("nonzero")
        })
        .collect();
    back.sort();
    rec.check("h_maps_companion_to_b", back == s.b.points(), || "H(companion) differs".into());
    // {K(0,y,z)}
    let k = s.b.generator().ok_or(GeomError::NoGenerator)?;
    let mut want: Vec<Pt3> = splash::base_points(t)
        .into_iter()
        .filter(|p| p[0].is_zero())
        .map(|p| {
            let v = k.apply_vec(cf, &p);
            projgeom::normalize3(cf, [v[0], v[1], v[2]]).expect("nonzero")
        })
        .collect();
    want.sort();
    let common = common_subline(&s.b, &comp);
    rec.check_eq("common_points", common.len() as u64, t.q() as u64 + 1);
    rec.check("common_subline_is_k0yz", common == want, || format!("{:?}", common));
    let kx = k.apply_vec(cf, &[Elem::ONE, Elem::ZERO, Elem::ZERO]);
    let kx = projgeom::normalize3(cf, [kx[0], kx[1], kx[2]]).expect("nonzero");
    rec.check("k100_in_b_only", s.b.contains(&kx) && !comp.contains(&kx), || format!("{:?}", kx));
    let fb = splash::subline_families(ctx, &s.covers, &s.b)?;
    let fc = splash::subline_families(ctx, &s.covers, &comp)?;
    rec.check("pencil_becomes_dual_conic", fb.pencil == fc.dual_conic, || "families do not swap".into());
    rec.check("dual_conic_becomes_pencil", fb.dual_conic == fc.pencil, || "families do not swap".into());
    rec.check("pencil_covers_differ", fb.pencil_cover != fc.pencil_cover, || "same pencil cover".into());
    let _ = f;
    Ok(())
}

/// The covers swap roles between ℬ and its companion.
pub(crate) fn c4_2(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let comp = splash::companion_subplane(ctx);
    let fr = frame_of(t, &comp)?;
    let roles = splash::classify_covers(ctx, &comp, &fr, &s.covers)?;
    rec.check_eq("companion_conic_cover_is_tangent_cover", roles.conic as u64, s.roles.tangent as u64);
    rec.check_eq("companion_tangent_cover_is_conic_cover", roles.tangent as u64, s.roles.conic as u64);
    Ok(())
}

/// Points of `other` on the extension of a special conic of `pi`.
fn extension_meet(s: &Setup, pi: &Subplane, form: &curves::Form, other: &Subplane) -> Result<Vec<Pt3>, GeomError> {
    let cf = s.tower().cubic();
    let inv = pi.generator().ok_or(GeomError::NoGenerator)?.inverse(cf);
    Ok(other.points().iter().filter(|p| curves::eval_form(cf, form, &inv.apply_vec(cf, *p)).is_zero()).copied().collect())
}

/// Special conics tangent to the common subline extend to special conics of
/// the other subplane.
pub(crate) fn c4_3(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let q = t.q() as u64;
    let comp = splash::companion_subplane(ctx);
    let fr2 = frame_of(t, &comp)?;
    let common = common_subline(&s.b, &comp);
    let pair = [(&s.b, &s.frame, &comp, &fr2), (&comp, &fr2, &s.b, &s.frame)];
    for (dir, (p1, f1, p2, f2)) in pair.iter().enumerate() {
        let l1 = p1.line_through(&common[0], &common[1]).ok_or(GeomError::NotASubline)?;
        let l2 = p2.line_through(&common[0], &common[1]).ok_or(GeomError::NotASubline)?;
        for pt in &common {
            let c1 = curves::special_conic_tangent(t, p1, f1, pt, l1)?;
            let meet = extension_meet(s, p1, &c1.form, p2)?;
            let c2 = curves::special_conic_tangent(t, p2, f2, pt, l2)?;
            rec.check("extension_meets_other_in_tangent_special_conic", meet == c2.points, || format!("direction {}, point {:?}", dir, pt));
        }
    }
    // the special conics of the companion are the images under H
    let s1 = special_sets(t, &s.b)?;
    let s2 = special_sets(t, &comp)?;
    let mut h1: Vec<Vec<Pt3>> = s1.iter().map(|c| swap_set(t, c)).collect();
    h1.sort();
    rec.check("companion_special_conics_are_h_images", h1 == s2, || "H does not carry special conics".into());
    let third = |fr: &splash::FixedFrame| fr.points.iter().find(|p| !p[2].is_zero()).copied();
    rec.set("third_fixed_point_shared", u64::from(third(&s.frame) == third(&fr2)));
    // every conic of PG(2,q^3) through the carriers and P_i touching b at P_i
    let carriers: Vec<Pt3> = s.frame.points.iter().filter(|p| p[2].is_zero()).copied().collect();
    let l1 = s.b.line_through(&common[0], &common[1]).ok_or(GeomError::NotASubline)?;
    for pt in &common {
        let other = l1.points.iter().find(|x| *x != pt).copied().expect("line has q+1 points");
        let found = pencil_special_in_both(s, &carriers, pt, &other, &comp, &s1, &s2);
        rec.check("some_tangent_conic_special_in_both", found > 0, || format!("point {:?}", pt));
    }
    // every pair of special conics sharing an extension
    let mut pairs = 0u64;
    for c in curves::special_conics_of(t, &s.b, &s.frame)? {
        let meet = extension_meet(s, &s.b, &c.form, &comp)?;
        if s2.binary_search(&meet).is_ok() {
            pairs += 1;
        }
    }
    rec.check_eq("conics_special_in_both", pairs, q + 1);
    Ok(())
}

fn swap_set(t: &crate::gfq::FieldTower, c: &[Pt3]) -> Vec<Pt3> {
    let cf = t.cubic();
    let mut v: Vec<Pt3> = c.iter().map(|p| projgeom::normalize3(cf, [p[1], p[0], p[2]]).expect("nonzero")).collect();
    v.sort();
    v
}

/// Conics of PG(2,q^3) through the carriers and `p`, tangent to `pr` at
/// `p`, meeting ℬ and `comp` in special conics of each.
fn pencil_special_in_both(s: &Setup, carriers: &[Pt3], p: &Pt3, r: &Pt3, comp: &Subplane, s1: &[Vec<Pt3>], s2: &[Vec<Pt3>]) -> u64 {
    let cf = s.tower().cubic();
    let mut rows: Vec<Vec<Elem>> = carriers.iter().chain(core::iter::once(p)).map(|x| curves::monomials(cf, x).to_vec()).collect();
    let pr: Vec<Elem> = (0..3).map(|i| cf.add(p[i], r[i])).collect();
    let (a, b, c) = (curves::monomials(cf, &pr), curves::monomials(cf, p), curves::monomials(cf, r));
    rows.push((0..6).map(|i| cf.sub(cf.sub(a[i], b[i]), c[i])).collect());
    let ns = linalg::nullspace(cf, &rows, 6);
    let mut forms: Vec<Vec<Elem>> = Vec::new();
    if ns.len() == 1 {
        forms.push(ns[0].clone());
    } else if ns.len() == 2 {
        forms.push(ns[1].clone());
        for k in cf.elements() {
            forms.push(linalg::lin2(cf, Elem::ONE, &ns[0], k, &ns[1]));
        }
    }
    let mut hits = 0;
    for fm in forms {
        let form: curves::Form = [fm[0], fm[1], fm[2], fm[3], fm[4], fm[5]];
        let on = |pi: &Subplane| -> Vec<Pt3> { pi.points().iter().filter(|x| curves::eval_form(cf, &form, *x).is_zero()).copied().collect() };
        if s1.binary_search(&on(&s.b)).is_ok() && s2.binary_search(&on(comp)).is_ok() {
            hits += 1;
        }
    }
    hits
}

fn run_construction(s: &Setup, rec: &mut Rec, b: &[Pt3], oracle_pair: Option<Vec<Vec<Pt3>>>) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let q = t.q() as usize;
    let (p1, p2, tr) = construction::construct_two_subplanes(ctx, &s.splash, &s.covers, b)?;
    rec.check("subplanes_distinct", p1 != p2, || format!("{:?}", b));
    for (k, p) in [&p1, &p2].iter().enumerate() {
        rec.check("contains_subline", b.iter().all(|x| p.contains(x)), || format!("π{}", k + 1));
        rec.check("exterior", p.is_exterior(), || format!("π{}", k + 1));
        rec.check("has_splash", splash::splash_of(ctx, p)?.indices() == s.splash.indices(), || format!("π{}", k + 1));
        let fr = frame_of(t, p)?;
        let roles = splash::classify_covers(ctx, p, &fr, &s.covers)?;
        rec.check_eq("conic_cover_is_construction_cover", roles.conic as u64, k as u64);
    }
    let want = q + 1 + q * (q + 1) / 2;
    let l: BTreeSet<&ProjPoint> = tr.l_points.iter().map(|(_, p)| p).collect();
    rec.check_eq("l_points_distinct", l.len() as u64, want as u64);
    let sig: BTreeSet<&ProjSubspace> = tr.sigma.iter().collect();
    rec.check_eq("sigma_distinct", sig.len() as u64, want as u64);
    let gam: BTreeSet<&ProjSubspace> = tr.gamma.iter().collect();
    rec.check_eq("gamma_distinct", gam.len() as u64, want as u64);
    let f = t.base();
    for (pi, spaces) in [(&p1, &tr.sigma), (&p2, &tr.gamma)] {
        let sets = special_sets(t, pi)?;
        for (((i, j), _), sp) in tr.l_points.iter().zip(spaces.iter()) {
            let mut meet: Vec<Pt3> = pi.points().iter().filter(|x| sp.contains(f, &ctx.eps(x))).copied().collect();
            meet.sort();
            let on_b = meet.iter().filter(|x| b.contains(x)).count();
            let ok = sets.binary_search(&meet).is_ok() && on_b == if i == j { 1 } else { 2 };
            rec.check("space_meets_subplane_in_special_conic", ok, || format!("({}, {})", i, j));
        }
    }
    if let Some(want) = oracle_pair {
        let mut got = alloc::vec![p1.points().to_vec(), p2.points().to_vec()];
        got.sort();
        rec.check("matches_oracle", got == want, || "construction differs from closure".into());
    }
    Ok(())
}

/// The construction of both subplanes through a subline.
pub(crate) fn c4_4(s: &Setup, rec: &mut Rec, rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let cf = t.cubic();
    let comp = splash::companion_subplane(ctx);
    let common = common_subline(&s.b, &comp);
    let mut want = alloc::vec![s.b.points().to_vec(), comp.points().to_vec()];
    want.sort();
    run_construction(s, rec, &common, Some(want))?;
    let pts = s.splash.points();
    let l = pts[below(rng, pts.len())];
    let a = random_affine(cf, rng);
    let line = projgeom::normalize3(cf, projgeom::cross(cf, &l, &a)).expect("distinct");
    let b = random_exterior_subline(t, &line, rng);
    let oracle_pair = if t.q() == 3 {
        let found = oracle::subplanes_through_subline(ctx, &b, Some(&s.splash), rec.limit())?;
        let mut v: Vec<Vec<Pt3>> = found.into_iter().map(|c| c.points).collect();
        v.sort();
        Some(v)
    } else {
        None
    };
    run_construction(s, rec, &b, oracle_pair)
}

fn label_counts(labels: &alloc::collections::BTreeMap<ProjPoint, ChordLabel>) -> [u64; 3] {
    let mut c = [0u64; 3];
    for l in labels.values() {
        match l {
            ChordLabel::Real(..) => c[0] += 1,
            ChordLabel::Imaginary(_) => c[1] += 1,
            ChordLabel::Tangent(_) => c[2] += 1,
        }
    }
    c
}

/// Labels must cover exactly the points of the plane.
fn partitions(ctx: &BruckBoseContext, labels: &alloc::collections::BTreeMap<ProjPoint, ChordLabel>, plane: &ProjSubspace) -> bool {
    let f = ctx.tower().base();
    let mut pts: Vec<ProjPoint> = projgeom::all_points(f, plane).into_iter().map(|p| {
        let mut v = p.coords().to_vec();
        v.push(Elem::ZERO);
        ProjPoint::new(f, &v).expect("nonzero")
    }).collect();
    pts.sort();
    let keys: Vec<ProjPoint> = labels.keys().cloned().collect();
    keys == pts
}

/// Chord labels of the points of splash and cover planes.
pub(crate) fn c4_5(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let q = t.q() as u64;
    let want = [q * (q + 1) / 2, (q * q - q) / 2, q + 1];
    for c in curves::special_conics_of(t, &s.b, &s.frame)? {
        let n = curves::bb_image_of_conic(ctx, &c)?;
        let plane = curves::sigma_plane_of(ctx, &n)?;
        let labels = curves::chord_labels(t, &n)?;
        rec.check("conic_cover_plane_partitioned", partitions(ctx, &labels, &plane), || format!("{:?}", c.form));
        let got = label_counts(&labels);
        rec.check("conic_cover_label_counts", got == want, || format!("{:?}", got));
        // the tangent chord at P is the tangent of the line of π touching C at P
        for p in &c.points {
            let pp = ctx.eps(p);
            let th = n.parameter_of(f, &pp).ok_or(GeomError::PointNotOnCurve)?;
            let lim = n.tangent_limit_point(f, th)?;
            let line = s.b.lines_through(p).find(|l| l.points.iter().filter(|x| c.points.binary_search(x).is_ok()).count() == 1);
            let ok = match line {
                Some(l) => {
                    let nl = curves::bb_image_of_line(ctx, &s.b, l)?;
                    let tl = nl.parameter_of(f, &pp).ok_or(GeomError::PointNotOnCurve)?;
                    nl.tangent_limit_point(f, tl)? == lim && labels.get(&lim) == Some(&ChordLabel::Tangent(th))
                }
                None => false,
            };
            rec.check("tangent_label_is_line_tangent", ok, || format!("{:?}", p));
        }
    }
    for l in s.b.lines() {
        let n = curves::bb_image_of_line(ctx, &s.b, l)?;
        let plane = curves::sigma_plane_of(ctx, &n)?;
        let labels = curves::chord_labels(t, &n)?;
        rec.check("spread_plane_partitioned", partitions(ctx, &labels, &plane), || format!("{:?}", l.dual));
        rec.check("spread_plane_label_counts", label_counts(&labels) == want, || format!("{:?}", l.dual));
    }
    // one tangent-cover special cubic per tangent-cover plane
    let tc = s.tangent_cover();
    let mut raw = [0u64; 3];
    for plane in &tc.planes {
        let space = cubics::spaces_about(f, plane).swap_remove(0);
        let gen = cubics::x_special_cubics(ctx, &space, &tc.transversals)?;
        let n: &RationalCurve = &gen[0];
        let labels = curves::chord_labels(t, n)?;
        rec.check("tangent_cover_plane_partitioned", partitions(ctx, &labels, plane), || format!("{:?}", plane));
        let c = label_counts(&labels);
        for k in 0..3 {
            raw[k] += c[k];
        }
    }
    rec.add("tangent_cover_real", raw[0]);
    rec.add("tangent_cover_imaginary", raw[1]);
    rec.add("tangent_cover_tangent", raw[2]);
    Ok(())
}
