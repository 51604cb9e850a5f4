mod common;

use extsplash_core::bruckbose::{self, BruckBoseContext, Pt3};
use extsplash_core::projgeom::{self, Homography, ProjSubspace};
use extsplash_core::splash::{self, Cover, Splash};
use extsplash_core::Elem;

struct Canon {
    ctx: BruckBoseContext,
    splash: Splash,
    covers: [Cover; 2],
}

fn canon(ctx: BruckBoseContext) -> Canon {
    let (_, splash, _) = splash::canonical_subplane(&ctx);
    let covers = splash::covers_of(&ctx, &splash).unwrap();
    Canon { ctx, splash, covers }
}

fn points_of(ctx: &BruckBoseContext, idx: &[usize]) -> Vec<Pt3> {
    idx.iter().map(|&i| ctx.inf_point(i)).collect()
}

/// Ruling lines of the reguli of one family, tagged by regulus.
fn family_lines(c: &Canon, fam: usize) -> Vec<(usize, ProjSubspace)> {
    let subs = splash::cover_plane_sublines(&c.ctx, &c.covers[fam].planes[0]);
    let mut out = Vec::new();
    for (k, s) in subs.iter().enumerate() {
        let reg = c.ctx.subline_to_regulus(&points_of(&c.ctx, s)).unwrap();
        out.extend(reg.ruling_lines.into_iter().map(|l| (k, l)));
    }
    out
}

#[test]
fn cover_plane_lines_rule_one_regulus_of_the_splash() {
    for q in [2, 3] {
        for ctx in common::contexts(q) {
            let c = canon(ctx);
            let f = c.ctx.tower().base();
            let q = q as usize;
            for cover in &c.covers {
                assert_eq!(cover.planes.len(), q * q + q + 1);
                for plane in &cover.planes {
                    for line in projgeom::subspaces_of(f, plane, 1) {
                        let mut tr = splash::plane_trace(&c.ctx, &line);
                        tr.sort_unstable();
                        tr.dedup();
                        assert_eq!(tr.len(), q + 1);
                        assert!(tr.iter().all(|i| c.splash.bits().contains(*i)));
                        let pts = points_of(&c.ctx, &tr);
                        assert!(bruckbose::is_subline(c.ctx.tower(), &pts));
                        let reg = c.ctx.subline_to_regulus(&pts).unwrap();
                        assert_eq!(reg.ruling_lines.iter().filter(|l| **l == line).count(), 1);
                    }
                }
            }
        }
    }
}

#[test]
fn ruling_lines_lie_in_one_cover_plane_of_one_cover() {
    for q in [2, 3] {
        for ctx in common::contexts(q) {
            let c = canon(ctx);
            let f = c.ctx.tower().base();
            for fam in 0..2 {
                for s in splash::cover_plane_sublines(&c.ctx, &c.covers[fam].planes[0]) {
                    let reg = c.ctx.subline_to_regulus(&points_of(&c.ctx, &s)).unwrap();
                    let qq = q as usize;
                    assert_eq!(reg.ruling_lines.len(), qq * qq + qq + 1);
                    let mut which = std::collections::BTreeSet::new();
                    for l in &reg.ruling_lines {
                        let hits: Vec<usize> = (0..2)
                            .flat_map(|k| c.covers[k].planes.iter().filter(|p| p.contains_subspace(f, l)).map(move |_| k))
                            .collect();
                        assert_eq!(hits.len(), 1);
                        which.insert(hits[0]);
                    }
                    assert_eq!(which.len(), 1);
                    assert_eq!(which.into_iter().next(), Some(fam));
                }
            }
        }
    }
}

/// Meeting ruling lines of distinct reguli of one family span a cover plane;
/// meeting lines from the two families span a plane outside both covers.
#[test]
fn meeting_ruling_lines_span_cover_planes_within_a_family() {
    for q in [2, 3] {
        for ctx in common::contexts(q) {
            let c = canon(ctx);
            let f = c.ctx.tower().base();
            let lines = [family_lines(&c, 0), family_lines(&c, 1)];
            let is_cover = |p: &ProjSubspace| c.covers.iter().any(|cv| cv.contains_plane(p));
            let step = if q == 2 { 1 } else { 5 };
            let (mut same, mut cross) = (0, 0);
            for a in 0..2 {
                for (i, (ra, la)) in lines[a].iter().enumerate().step_by(step) {
                    for b in a..2 {
                        let start = if a == b { i + 1 } else { 0 };
                        for (rb, lb) in lines[b][start..].iter().step_by(step) {
                            if a == b && ra == rb {
                                continue;
                            }
                            if la.meet(f, lb).unwrap().rank() != 1 {
                                continue;
                            }
                            let span = la.span(f, lb).unwrap();
                            if a == b {
                                assert!(c.covers[a].contains_plane(&span));
                                same += 1;
                            } else {
                                assert!(!is_cover(&span));
                                cross += 1;
                            }
                        }
                    }
                }
            }
            assert!(same > 0 && cross > 0);
            if q == 2 {
                assert_eq!((same, cross), (294, 441));
            }
        }
    }
}

#[test]
fn singer_action_fixes_the_carriers() {
    for q in [2, 3, 4, 5] {
        for ctx in common::contexts(q) {
            let t = ctx.tower();
            let cf = t.cubic();
            let (_, s, _) = splash::canonical_subplane(&ctx);
            let (c1, c2) = s.carriers().unwrap();
            let w = cf.pow(t.tau(), t.q() as u64 - 1);
            let m = Homography::new(
                cf,
                vec![vec![w, Elem::ZERO, Elem::ZERO], vec![Elem::ZERO, Elem::ONE, Elem::ZERO], vec![Elem::ZERO, Elem::ZERO, Elem::ONE]],
            )
            .unwrap();
            let img = |p: &Pt3| {
                let v = m.apply_vec(cf, p);
                projgeom::normalize3(cf, [v[0], v[1], v[2]]).unwrap()
            };
            assert_eq!(img(&c1), c1);
            assert_eq!(img(&c2), c2);
            let mut mapped: Vec<Pt3> = s.points().iter().map(img).collect();
            mapped.sort();
            assert_eq!(mapped, s.points().to_vec());
            // the cyclic group generated acts regularly on the splash
            let mut orbit = vec![s.points()[0]];
            loop {
                let next = img(orbit.last().unwrap());
                if next == orbit[0] {
                    break;
                }
                orbit.push(next);
            }
            let qq = t.q() as usize;
            assert_eq!(orbit.len(), qq * qq + qq + 1);
        }
    }
}

#[test]
fn canonical_splash_formula() {
    for q in [2, 3, 4, 5] {
        for ctx in common::contexts(q) {
            let t = ctx.tower();
            let cf = t.cubic();
            let q = q as u64;
            let (b, s, _) = splash::canonical_subplane(&ctx);
            assert!(b.is_exterior());
            let mut want: Vec<Pt3> = cf
                .nonzero()
                .filter(|&k| cf.pow(k, q * q + q + 1) == Elem::ONE)
                .map(|k| projgeom::normalize3(cf, [k, Elem::ONE, Elem::ZERO]).unwrap())
                .collect();
            want.sort();
            let mut got = s.points().to_vec();
            got.sort();
            assert_eq!(got, want, "{}", common::label(t));
            let one = |i: usize| {
                let mut v = [Elem::ZERO; 3];
                v[i] = Elem::ONE;
                v
            };
            let (c1, c2) = s.carriers().unwrap();
            let mut got = [c1, c2];
            got.sort();
            let mut want = [one(0), one(1)];
            want.sort();
            assert_eq!(got, want);
        }
    }
}
