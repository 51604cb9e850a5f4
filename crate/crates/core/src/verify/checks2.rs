//! Checks on subplanes sharing a splash and on sublines in PG(6,q).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::construction::subline_curve;
use super::cubics::{self, Space3};
use super::oracle;
use super::{below, Rec, Setup};
use crate::bruckbose::{self, Pt3};
use crate::curves::{self, CurveClass};
use crate::error::GeomError;
use crate::gfq::{Elem, Field};
use crate::projgeom::{self, ProjPoint};
use crate::splash;

/// Points of a line of PG(2,q^3), sorted.
pub(crate) fn points_on_line(cf: &Field, line: &Pt3) -> Vec<Pt3> {
    let (u, v) = curves::line_param(cf, line);
    let mut out: Vec<Pt3> = cf
        .elements()
        .map(|s| projgeom::normalize3(cf, [cf.add(u[0], cf.mul(s, v[0])), cf.add(u[1], cf.mul(s, v[1])), cf.add(u[2], cf.mul(s, v[2]))]).expect("independent"))
        .collect();
    out.push(projgeom::normalize3(cf, v).expect("nonzero"));
    out.sort();
    out
}

/// Every subline of a line avoiding ℓ∞, by closing triples of affine points.
pub(crate) fn exterior_sublines_of_line(t: &crate::gfq::FieldTower, line: &Pt3) -> Vec<Vec<Pt3>> {
    let cf = t.cubic();
    let aff: Vec<Pt3> = points_on_line(cf, line).into_iter().filter(|p| !p[2].is_zero()).collect();
    let mut seen: BTreeSet<Vec<Pt3>> = BTreeSet::new();
    for i in 0..aff.len() {
        for j in i + 1..aff.len() {
            for k in j + 1..aff.len() {
                if let Some(s) = bruckbose::subline_closure(t, &aff[i], &aff[j], &aff[k]) {
                    if s.iter().all(|p| !p[2].is_zero()) {
                        seen.insert(s);
                    }
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// A random affine point.
pub(crate) fn random_affine(cf: &Field, rng: &mut ChaCha8Rng) -> Pt3 {
    let n = cf.order() as usize;
    [Elem(below(rng, n) as u32), Elem(below(rng, n) as u32), Elem::ONE]
}

/// A seeded exterior subline on `line`.
pub(crate) fn random_exterior_subline(t: &crate::gfq::FieldTower, line: &Pt3, rng: &mut ChaCha8Rng) -> Vec<Pt3> {
    let cf = t.cubic();
    let aff: Vec<Pt3> = points_on_line(cf, line).into_iter().filter(|p| !p[2].is_zero()).collect();
    loop {
        let a = aff[below(rng, aff.len())];
        let b = aff[below(rng, aff.len())];
        let c = aff[below(rng, aff.len())];
        if a == b || b == c || a == c {
            continue;
        }
        if let Some(s) = bruckbose::subline_closure(t, &a, &b, &c) {
            if s.iter().all(|p| !p[2].is_zero()) {
                return s;
            }
        }
    }
}

fn join3(cf: &Field, a: &Pt3, b: &Pt3) -> Pt3 {
    projgeom::normalize3(cf, projgeom::cross(cf, a, b)).expect("distinct points")
}

/// Two exterior subplanes with the canonical splash through each subline.
pub(crate) fn c2_3(s: &Setup, rec: &mut Rec, rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let cf = t.cubic();
    let q = t.q() as u64;
    let limit = rec.limit();
    let mut examined = 0u64;
    for l in s.splash.points() {
        let (x, all) = if q == 2 { ([Elem::ZERO, Elem::ZERO, Elem::ONE], true) } else { (random_affine(cf, rng), false) };
        let line = join3(cf, l, &x);
        let subs = if all {
            let v = exterior_sublines_of_line(t, &line);
            rec.check_eq("exterior_sublines_per_line", v.len() as u64, q * q * q * (q * q * q - 1));
            v
        } else {
            alloc::vec![random_exterior_subline(t, &line, rng)]
        };
        for b in subs {
            let found = oracle::subplanes_through_subline(ctx, &b, Some(&s.splash), limit)?;
            examined += 1;
            rec.check("two_subplanes", found.len() == 2, || format!("subline {:?}: {} subplanes", b, found.len()));
            for c in &found {
                let ok = splash::Subplane::from_points(t, &c.points)
                    .and_then(|p| splash::splash_of(ctx, &p))
                    .is_ok_and(|sp| sp.indices() == s.splash.indices());
                rec.check("oracle_output_is_subplane_with_splash", ok, || format!("{:?}", c.points));
            }
        }
    }
    let comp = splash::companion_subplane(ctx);
    let common: Vec<Pt3> = s.b.points().iter().filter(|p| comp.contains(p)).copied().collect();
    let found = oracle::subplanes_through_subline(ctx, &common, Some(&s.splash), limit)?;
    let mut want = alloc::vec![s.b.points().to_vec(), comp.points().to_vec()];
    want.sort();
    let got: Vec<Vec<Pt3>> = found.iter().map(|c| c.points.clone()).collect();
    rec.check("canonical_pair_is_the_pair", got == want, || format!("{} subplanes through the common subline", got.len()));
    rec.add("sublines_examined", examined + 1);
    Ok(())
}

/// Sublines of ℓ∞ and 2-reguli of the spread.
pub(crate) fn c2_5a(s: &Setup, rec: &mut Rec, rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let q = t.q() as usize;
    let n = ctx.spread().len();
    let inf: Vec<Pt3> = (0..n).map(|i| ctx.inf_point(i)).collect();
    let triples = (n * (n - 1) * (n - 2) / 6) as u64;
    let exhaustive = q <= 3;
    rec.budget(if exhaustive { triples } else { 0 })?;
    let mut sublines: BTreeSet<Vec<Pt3>> = BTreeSet::new();
    let mut converse = 0u64;
    let visit = |i: usize, j: usize, k: usize, rec: &mut Rec, sublines: &mut BTreeSet<Vec<Pt3>>| {
        let sub = bruckbose::subline_closure(t, &inf[i], &inf[j], &inf[k]).expect("distinct points");
        let want: Vec<usize> = {
            let mut v: Vec<usize> = sub.iter().map(|p| ctx.inf_index(p)).collect();
            v.sort_unstable();
            v
        };
        // spread planes met by one ruling line of the three planes
        let lines = bruckbose::ruling_lines(t, &ctx.spread()[i], &ctx.spread()[j], &ctx.spread()[k]);
        let mut met: Vec<usize> = projgeom::all_points(f, &lines[0]).iter().map(|p| ctx.spread_index_of(p.coords())).collect();
        met.sort_unstable();
        rec.check("regulus_of_three_planes_is_subline", met == want, || format!("planes {},{},{}", i, j, k));
        sublines.insert(sub);
    };
    if exhaustive {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    visit(i, j, k, rec, &mut sublines);
                    converse += 1;
                }
            }
        }
    } else {
        for _ in 0..200 {
            let i = below(rng, n);
            let j = below(rng, n);
            let k = below(rng, n);
            if i != j && j != k && i != k {
                visit(i, j, k, rec, &mut sublines);
                converse += 1;
            }
        }
        // all sublines through the first three points' orbit under closure
        for j in 1..n {
            for k in j + 1..n {
                sublines.insert(bruckbose::subline_closure(t, &inf[0], &inf[j], &inf[k]).expect("distinct"));
            }
        }
    }
    rec.add("plane_triples_examined", converse);
    let qq = q as u64;
    if exhaustive {
        rec.check_eq("sublines_of_line_at_infinity", sublines.len() as u64, qq * qq * qq * (qq.pow(6) - 1) / (qq * (qq * qq - 1)));
    }
    for b in &sublines {
        let reg = ctx.subline_to_regulus(b)?;
        rec.check_eq("ruling_line_count", reg.ruling_lines.len() as u64, (q * q + q + 1) as u64);
        let mut want = reg.planes.clone();
        want.sort_unstable();
        let mut covered: BTreeSet<ProjPoint> = BTreeSet::new();
        for l in &reg.ruling_lines {
            let pts = projgeom::all_points(f, l);
            let mut met: Vec<usize> = pts.iter().map(|p| ctx.spread_index_of(p.coords())).collect();
            met.sort_unstable();
            rec.check("ruling_line_meets_each_plane_once", met == want, || format!("{:?}", met));
            covered.extend(pts);
        }
        rec.check_eq("ruling_lines_partition_the_planes", covered.len() as u64, ((q * q + q + 1) * (q + 1)) as u64);
    }
    rec.add("sublines_examined", sublines.len() as u64);
    Ok(())
}

/// Exterior sublines and spread-special twisted cubics.
pub(crate) fn c2_5b(s: &Setup, rec: &mut Rec, rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let cf = t.cubic();
    let q = t.q() as u64;
    let mut sublines: Vec<Vec<Pt3>> = Vec::new();
    let comp = splash::companion_subplane(ctx);
    for pi in [&s.b, &comp] {
        sublines.extend(pi.lines().iter().map(|l| l.points.clone()));
    }
    for _ in 0..8 {
        let l = ctx.inf_point(below(rng, ctx.spread().len()));
        let line = join3(cf, &l, &random_affine(cf, rng));
        sublines.push(random_exterior_subline(t, &line, rng));
    }
    for b in &sublines {
        let n = subline_curve(ctx, b)?;
        rec.check("image_is_twisted_cubic", curves::classify_rational(&n) == CurveClass::TwistedCubic, || format!("{:?}", b));
        let mut pts = n.points(f);
        pts.sort();
        let mut want: Vec<ProjPoint> = b.iter().map(|p| ctx.eps(p)).collect();
        want.sort();
        rec.check("image_points_match", pts == want, || format!("{:?}", b));
        let plane = curves::sigma_plane_of(ctx, &n)?;
        let line = join3(cf, &b[0], &b[1]);
        let lp = projgeom::normalize3(cf, [line[1], cf.neg(line[0]), Elem::ZERO]).expect("affine line");
        rec.check("plane_is_spread_plane_of_line_point", plane == *ctx.spread_plane(&lp), || format!("{:?}", b));
        rec.check("meets_spread_transversals", curves::is_x_special_cubic(ctx, &n, &plane, ctx.transversals())?, || format!("{:?}", b));
        rec.check("no_point_at_infinity", pts.iter().all(|p| !p.coords()[6].is_zero()), || format!("{:?}", b));
    }
    rec.add("sublines_examined", sublines.len() as u64);

    // converse in one 3-space about a spread plane
    let l = ctx.inf_point(below(rng, ctx.spread().len()));
    let x = random_affine(cf, rng);
    let line = join3(cf, &l, &x);
    let plane = ctx.spread_plane(&l).clone();
    let space = Space3::new(&plane, ctx.eps(&x).coords());
    rec.budget(q.pow(6))?;
    let gen = cubics::x_special_cubics(ctx, &space, ctx.transversals())?;
    rec.check_eq("special_cubics_per_space", gen.len() as u64, q * q * q * (q * q * q - 1));
    let mut gen_keys: BTreeSet<Vec<ProjPoint>> = BTreeSet::new();
    for n in &gen {
        gen_keys.insert(cubics::cubic_key(t, n));
        let pts: Vec<Pt3> = n.points(f).iter().map(|p| ctx.eps_inv(p)).collect();
        let ok = pts.iter().all(|p| !p[2].is_zero() && projgeom::incident3(cf, &line, p)) && bruckbose::is_subline(t, &pts);
        rec.check("special_cubic_is_exterior_subline", ok, || format!("{:?}", pts));
        rec.check("generated_cubic_is_special", curves::is_x_special_cubic(ctx, n, &plane, ctx.transversals())?, || format!("{:?}", pts));
    }
    let mut line_keys: BTreeSet<Vec<ProjPoint>> = BTreeSet::new();
    for b in exterior_sublines_of_line(t, &line) {
        line_keys.insert(cubics::cubic_key(t, &subline_curve(ctx, &b)?));
    }
    rec.check("special_cubics_are_the_sublines_of_the_line", gen_keys == line_keys, || {
        format!("{} generated, {} sublines", gen_keys.len(), line_keys.len())
    });
    Ok(())
}

