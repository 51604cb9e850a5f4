//! Acceptance criteria. Prints one line per criterion; the process fails
//! when the set of red criteria differs from `EXPECTED_RED`.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use extsplash::config::select_checks;
use extsplash_core::bruckbose::{BruckBoseContext, Pt3};
use extsplash_core::curves::{self, CurveClass};
use extsplash_core::projgeom::{self, ProjSubspace};
use extsplash_core::splash::{self, Splash};
use extsplash_core::verify::{self, cubics, oracle, CheckId, CheckReport, RunOptions, DEFAULT_BUDGET};
use extsplash_core::{Elem, FieldSpec, FieldTower};

/// Criteria with known counterexamples: 9 through C-4.3 at odd q, 11
/// through C-5.2 at q=2.
const EXPECTED_RED: [usize; 2] = [9, 11];

const OPTS: RunOptions = RunOptions { seed: 0, budget: DEFAULT_BUDGET };

type Outcome = Result<String, String>;

fn tower(q: u32, index: usize) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(FieldSpec::admissible(q, index).unwrap()).unwrap())
}

fn ctx(q: u32) -> BruckBoseContext {
    BruckBoseContext::new(tower(q, 0))
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn timed<T>(limit: Duration, label: &str, f: impl FnOnce() -> Result<T, String>) -> Result<(T, String), String> {
    let start = Instant::now();
    let out = f();
    let dt = start.elapsed();
    let note = format!("{} {:.2}s/{}s", label, dt.as_secs_f64(), limit.as_secs());
    match out {
        Err(e) => Err(format!("{}: {}", note, e)),
        Ok(_) if dt > limit => Err(format!("{}: over time", note)),
        Ok(v) => Ok((v, note)),
    }
}

fn run(id: CheckId, t: &Arc<FieldTower>) -> Result<CheckReport, String> {
    verify::run_check(id, t.clone(), OPTS).map_err(|e| e.to_string())
}

fn first_failure(r: &CheckReport) -> String {
    match r.witnesses.first() {
        Some(w) => format!("{} q={} {}: {}", r.check.as_str(), r.q, w.assertion, w.detail.chars().take(120).collect::<String>()),
        None => format!("{} q={} failed", r.check.as_str(), r.q),
    }
}

/// Run `ids` at every q, each q under its own limit; all must pass.
fn checks_at(ids: &[CheckId], qs: &[(u32, u64)]) -> Outcome {
    let mut notes = Vec::new();
    let mut fails = Vec::new();
    for &(q, secs) in qs {
        let t = tower(q, 0);
        let res = timed(Duration::from_secs(secs), &format!("q={}", q), || {
            let mut bad = Vec::new();
            for id in ids {
                let r = run(*id, &t)?;
                if !r.passed() {
                    bad.push(first_failure(&r));
                }
            }
            Ok(bad)
        });
        match res {
            Ok((bad, note)) => {
                notes.push(note);
                fails.extend(bad);
            }
            Err(e) => fails.push(e),
        }
    }
    if fails.is_empty() {
        Ok(notes.join(", "))
    } else {
        Err(format!("{} [{}]", fails.join("; "), notes.join(", ")))
    }
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for q in 2..=5u32 {
        let (_, note) = timed(Duration::from_secs(1), &format!("q={}", q), || {
            let c = ctx(q);
            let cf = c.tower().cubic();
            let (b, s, _) = splash::canonical_subplane(&c);
            ensure(b.is_exterior(), || "subplane not exterior".into())?;
            let e = q as u64 * q as u64 + q as u64 + 1;
            let mut want: Vec<Pt3> = cf.nonzero().filter(|&k| cf.pow(k, e) == Elem::ONE).filter_map(|k| projgeom::normalize3(cf, [k, Elem::ONE, Elem::ZERO])).collect();
            want.sort();
            let mut got = s.points().to_vec();
            got.sort();
            ensure(got == want, || "splash differs from {(k,1,0)}".into())?;
            let (c1, c2) = s.carriers().ok_or("no carriers")?;
            let mut cs = [c1, c2];
            cs.sort();
            let (x, y) = ([Elem::ZERO, Elem::ONE, Elem::ZERO], [Elem::ONE, Elem::ZERO, Elem::ZERO]);
            ensure(cs == [x, y], || format!("carriers {:?}", cs))
        })?;
        notes.push(note);
    }
    Ok(notes.join(", "))
}

fn cover_pattern(c: &BruckBoseContext, s: &Splash) -> Result<(), String> {
    let f = c.tower().base();
    let q = c.q() as usize;
    let planes = splash::cover_planes_exhaustive(c, s, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(planes.len() == 2 * (q * q + q + 1), || format!("{} cover planes", planes.len()))?;
    let covers = splash::covers_from_planes(c, &planes).map_err(|e| e.to_string())?;
    for (i, a) in covers.iter().enumerate() {
        ensure(a.planes.len() == q * q + q + 1, || format!("cover {} has {} planes", i, a.planes.len()))?;
        for (j, p) in a.planes.iter().enumerate() {
            for sp in s.planes(c) {
                ensure(splash::meet_rank(f, p, sp) == 1, || "cover plane misses a splash plane".into())?;
            }
            for r in &a.planes[j + 1..] {
                ensure(splash::planes_disjoint(f, p, r), || "cover planes meet".into())?;
            }
            for r in &covers[1 - i].planes {
                ensure(splash::meet_rank(f, p, r) == 1, || "planes of the two covers do not meet in a point".into())?;
            }
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for (q, secs) in [(2u32, 1u64), (3, 60)] {
        let (_, note) = timed(Duration::from_secs(secs), &format!("q={}", q), || {
            let c = ctx(q);
            let (_, s, _) = splash::canonical_subplane(&c);
            cover_pattern(&c, &s)
        })?;
        notes.push(note);
    }
    Ok(notes.join(", "))
}

/// Exterior subplanes with the canonical splash by closure, their special
/// conics, and the conic-cover special cubics of one 3-space by brute force.
fn criterion_5() -> Outcome {
    let (a, note) = timed(Duration::from_secs(600), "q=2", || {
        let c = ctx(2);
        let t = c.tower();
        let (b, s, frame) = splash::canonical_subplane(&c);
        let found = oracle::exterior_subplanes_with_splash(&c, &s, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(found.len() == 896, || format!("{} subplanes", found.len()))?;
        let mut x = 0;
        for cp in &found {
            let pi = splash::Subplane::from_points(t, &cp.points).map_err(|e| e.to_string())?;
            let line = [Elem::ZERO, Elem::ZERO, Elem::ONE];
            let fr = splash::fixed_frame(t, &pi, &line).map_err(|e| e.to_string())?;
            let n = curves::special_conics_of(t, &pi, &fr).map_err(|e| e.to_string())?.len();
            ensure(n == 7, || format!("{} special conics", n))?;
            x += n;
        }
        let covers = splash::covers_of(&c, &s).map_err(|e| e.to_string())?;
        let roles = splash::classify_covers(&c, &b, &frame, &covers).map_err(|e| e.to_string())?;
        let cover = &covers[roles.conic];
        let space = &cubics::spaces_about(t.base(), &cover.planes[0])[0];
        let mut special = 0;
        for n in cubics::all_twisted_cubics_q2(t, space).map_err(|e| e.to_string())? {
            if curves::sigma_plane_of(&c, &n).ok().as_ref() == Some(&cover.planes[0])
                && curves::is_x_special_cubic(&c, &n, &cover.planes[0], &cover.transversals).map_err(|e| e.to_string())?
            {
                special += 1;
            }
        }
        ensure(special == 56, || format!("{} special cubics in one 3-space", special))?;
        let r = run(CheckId::C3_6, c.tower_arc())?;
        ensure(r.passed(), || first_failure(&r))?;
        let y = r.count("y").unwrap_or(0);
        ensure(y == x as u64 && x == 6272, || format!("x={} y={}", x, y))?;
        Ok(String::from("896 subplanes, x=y=6272, 56 cubics/3-space"))
    })?;
    Ok(format!("{}, {}", a, note))
}

fn criterion_7() -> Outcome {
    let base = checks_at(&[CheckId::C3_11], &[(2, 30), (3, 30)])?;
    let mut ev = Vec::new();
    for q in [2, 3] {
        let r = run(CheckId::C3_11x, &tower(q, 0))?;
        let v = r.count("basis_quadrics_containing_a_tangent_transversal").unwrap_or(0);
        ev.push(format!("q={} conjecture {} ({} of dim {})", q, r.verdict.as_str(), v, r.count("system_dim").unwrap_or(0)));
    }
    Ok(format!("{}; {}", base, ev.join(", ")))
}

/// Invariant probes of every module under the default and the alternative
/// spec at each q, and the checks not named by another criterion.
fn criterion_12() -> Outcome {
    let mut notes = Vec::new();
    for q in 2..=5u32 {
        let (_, note) = timed(Duration::from_secs(120), &format!("q={}", q), || {
            for index in [0, 1] {
                let t = tower(q, index);
                let label = t.spec().to_text().unwrap();
                probe(&t).map_err(|e| format!("{}: {}", label, e))?;
                if q <= 3 {
                    for id in [CheckId::C2_3, CheckId::C2_5a, CheckId::C2_5b, CheckId::C3_9, CheckId::C3_12] {
                        let r = run(id, &t)?;
                        ensure(r.passed(), || format!("{}: {}", label, first_failure(&r)))?;
                    }
                }
            }
            Ok(())
        })?;
        notes.push(note);
    }
    Ok(notes.join(", "))
}

fn probe(t: &Arc<FieldTower>) -> Result<(), String> {
    let q = t.q() as u64;
    let (f, cf) = (t.base(), t.cubic());
    let o = q * q + q + 1;
    // gfq
    ensure(cf.elements().all(|x| t.frobenius_pow(x, 3) == x), || "frobenius order".into())?;
    let norms: BTreeSet<Elem> = cf.nonzero().map(|x| t.norm(x)).collect();
    ensure(norms == f.nonzero().collect(), || "norm not onto".into())?;
    ensure(cf.mult_order(t.tau()) == q * q * q - 1, || "tau not primitive".into())?;
    ensure(FieldSpec::parse(&t.spec().to_text().unwrap()).unwrap() == *t.spec(), || "spec text round trip".into())?;
    // projgeom
    ensure(projgeom::all_points_of_space(f, 3).len() as u64 == projgeom::num_points(3, q), || "point count".into())?;
    let lines = projgeom::all_subspaces(f, 3, 1, DEFAULT_BUDGET).map_err(|e| e.to_string())?.count() as u64;
    ensure(lines == projgeom::gaussian_binomial(3, 1, q), || "line count".into())?;
    // bruckbose
    let c = BruckBoseContext::new(t.clone());
    ensure(c.spread().len() as u64 == q * q * q + 1, || "spread size".into())?;
    let covered: u64 = c.spread().iter().map(|p| projgeom::all_points(f, p).len() as u64).sum();
    ensure(covered == projgeom::num_points(5, q), || "spread does not partition".into())?;
    for x in 0..=(q * q * q) as usize {
        let p = c.inf_point(x);
        ensure(c.inf_index(&p) == x, || "inf index round trip".into())?;
    }
    // splash
    let (b, s, frame) = splash::canonical_subplane(&c);
    ensure(s.len() as u64 == o, || "splash size".into())?;
    let covers = splash::covers_of(&c, &s).map_err(|e| e.to_string())?;
    for cv in &covers {
        ensure(cv.planes.len() as u64 == o, || "cover size".into())?;
        for (i, p) in cv.planes.iter().enumerate() {
            ensure(cv.planes[i + 1..].iter().all(|r| splash::planes_disjoint(f, p, r)), || "cover not disjoint".into())?;
            ensure(s.planes(&c).all(|sp| splash::meet_rank(f, p, sp) == 1), || "cover plane meet".into())?;
        }
    }
    let mut tr: Vec<ProjSubspace> = s.transversals(&c).to_vec();
    let mut spread_tr = c.transversals().to_vec();
    tr.sort();
    spread_tr.sort();
    ensure(tr == spread_tr, || "splash transversals".into())?;
    // curves
    let special = curves::special_conics_of(t, &b, &frame).map_err(|e| e.to_string())?;
    ensure(special.len() as u64 == o, || "special conic count".into())?;
    for cn in &special {
        let n = curves::bb_image_of_conic(&c, cn).map_err(|e| e.to_string())?;
        ensure(curves::classify_rational(&n) == CurveClass::TwistedCubic, || "special conic image".into())?;
    }
    // verify and cli
    ensure(select_checks(Some("C-0.0"), t.q()).is_err(), || "unknown id accepted".into())?;
    let a = run(CheckId::C2_5b, t)?;
    ensure(a.passed() && a == run(CheckId::C2_5b, t)?, || "nondeterministic report".into())?;
    Ok(())
}

fn main() {
    let criteria: Vec<(usize, &str, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "canonical configuration", Box::new(criterion_1)),
        (2, "two covers by exhaustive plane enumeration", Box::new(criterion_2)),
        (3, "nucleus lines", Box::new(|| checks_at(&[CheckId::C3_2], &[(2, 10), (4, 10)]))),
        (
            4,
            "special-conic dichotomy",
            Box::new(|| {
                let ids = [CheckId::C3_3, CheckId::C3_4, CheckId::C3_5, CheckId::C3_7, CheckId::C3_8];
                checks_at(&ids, &[(2, 300), (3, 300)])
            }),
        ),
        (5, "converse and counting", Box::new(criterion_5)),
        (6, "tangent coincidence", Box::new(|| checks_at(&[CheckId::C3_10], &[(2, 30), (3, 30), (4, 30)]))),
        (7, "quadric system", Box::new(criterion_7)),
        (8, "duality and the failing point set", Box::new(|| checks_at(&[CheckId::C3_12, CheckId::C3_12b], &[(2, 120), (3, 120)]))),
        (
            9,
            "family interchange, cover swap, shared special conics",
            Box::new(|| checks_at(&[CheckId::C4_1, CheckId::C4_2, CheckId::C4_3], &[(2, 120), (3, 120)])),
        ),
        (10, "construction of the two subplanes", Box::new(|| checks_at(&[CheckId::C4_4, CheckId::C4_5], &[(3, 300), (4, 300)]))),
        (
            11,
            "splash census",
            Box::new(|| {
                let ids = [CheckId::C5_1, CheckId::C5_2, CheckId::C5_3, CheckId::C5_4];
                checks_at(&ids, &[(2, 60), (3, 1800)])
            }),
        ),
        (12, "module invariants under default and alternative fields", Box::new(criterion_12)),
    ];
    let mut red = Vec::new();
    for (n, name, f) in &criteria {
        match f() {
            Ok(note) => println!("criterion {:>2} PASS {}: {}", n, name, note),
            Err(e) => {
                println!("criterion {:>2} FAIL {}: {}", n, name, e);
                red.push(*n);
            }
        }
    }
    println!("red criteria: {:?}; expected {:?}", red, EXPECTED_RED);
    if red != EXPECTED_RED {
        std::process::exit(1);
    }
}
