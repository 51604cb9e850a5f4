//! Checks on sublines, reguli and intersections of exterior splashes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::census::{self, SplashRecord};
use super::{Rec, Setup};
use crate::bitset::BitSet;
use crate::bruckbose::BruckBoseContext;
use crate::curves::{self, Form};
use crate::error::GeomError;
use crate::gfq::Elem;
use crate::linalg;
use crate::projgeom::{self, ProjPoint, ProjSubspace};
use crate::splash::{self, Subline};

fn lines_meet(f: &crate::gfq::Field, a: &ProjSubspace, b: &ProjSubspace) -> bool {
    let mut rows = a.basis().clone();
    rows.extend(b.basis().iter().cloned());
    linalg::rank(f, &rows) == 3
}

/// Reguli of the splash, their ruling lines and the cover planes.
pub(crate) fn c5_1(s: &Setup, rec: &mut Rec) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let q = t.q() as u64;
    let n = q * q + q + 1;
    let fam: [Vec<Subline>; 2] = [0, 1].map(|k| splash::cover_plane_sublines(ctx, &s.covers[k].planes[0]));
    for k in 0..2 {
        rec.check_eq("family_size", fam[k].len() as u64, n);
        for plane in &s.covers[k].planes {
            rec.check("cover_planes_give_one_family", splash::cover_plane_sublines(ctx, plane) == fam[k], || format!("cover {}", k));
        }
    }
    let all: BTreeSet<&Subline> = fam.iter().flatten().collect();
    rec.check_eq("sublines_in_splash", all.len() as u64, 2 * n);
    let mut reguli: BTreeMap<Subline, (usize, Vec<ProjSubspace>)> = BTreeMap::new();
    for (k, sub) in fam.iter().enumerate().flat_map(|(k, v)| v.iter().map(move |x| (k, x))) {
        let pts: Vec<_> = sub.iter().map(|&i| ctx.inf_point(i)).collect();
        let reg = ctx.subline_to_regulus(&pts)?;
        rec.check_eq("ruling_lines", reg.ruling_lines.len() as u64, n);
        let mut covers_hit = BTreeSet::new();
        for line in &reg.ruling_lines {
            let hits: Vec<usize> = (0..2)
                .flat_map(|c| s.covers[c].planes.iter().filter(|p| p.contains_subspace(f, line)).map(move |_| c))
                .collect();
            rec.check_eq("ruling_line_in_one_cover_plane", hits.len() as u64, 1);
            covers_hit.extend(hits);
        }
        rec.check("ruling_lines_in_one_cover", covers_hit.len() == 1, || format!("{:?}", sub));
        rec.check("ruling_lines_in_family_cover", covers_hit.iter().next() == Some(&k), || format!("{:?}", sub));
        let mut lines = reg.ruling_lines;
        lines.sort();
        reguli.insert(sub.clone(), (k, lines));
    }
    for k in 0..2 {
        for plane in &s.covers[k].planes {
            for line in projgeom::subspaces_of(f, plane, 1) {
                let mut tr = splash::plane_trace(ctx, &line);
                tr.sort_unstable();
                let ok = reguli.get(&tr).is_some_and(|(kk, lines)| *kk == k && lines.binary_search(&line).is_ok());
                rec.check("cover_line_is_ruling_line", ok, || format!("cover {}, trace {:?}", k, tr));
            }
        }
    }
    let flat: Vec<(usize, usize, &ProjSubspace)> =
        reguli.values().enumerate().flat_map(|(r, (k, ls))| ls.iter().map(move |l| (r, *k, l))).collect();
    rec.budget((flat.len() * flat.len() / 2) as u64)?;
    let mut meeting = [0u64; 2];
    for (i, (ra, ka, la)) in flat.iter().enumerate() {
        for (rb, kb, lb) in &flat[i + 1..] {
            if ra == rb || !lines_meet(f, la, lb) {
                continue;
            }
            let span = la.span(f, lb)?;
            let cover = s.covers.iter().any(|c| c.contains_plane(&span));
            if ka == kb {
                meeting[0] += 1;
                rec.check("meeting_ruling_lines_span_cover_plane", cover, || format!("{:?}", span));
            } else {
                meeting[1] += 1;
                rec.check("meeting_lines_of_different_families_span_no_cover_plane", !cover, || format!("{:?}", span));
            }
        }
    }
    rec.add("meeting_pairs_same_family", meeting[0]);
    rec.add("meeting_pairs_different_families", meeting[1]);
    Ok(())
}

/// Every splash and the pairs examined: all pairs at q ≤ 3, otherwise the
/// pairs containing the canonical splash.
struct Scope {
    records: Vec<SplashRecord>,
    canon: usize,
    pairs: Vec<(usize, usize, usize)>,
}

fn scope(s: &Setup, rec: &mut Rec) -> Result<Scope, GeomError> {
    let ctx = &s.ctx;
    let q = ctx.q() as u64;
    let records = census::enumerate_splashes(ctx, rec.limit())?;
    let canon = records.iter().position(|r| r.splash.indices() == s.splash.indices()).ok_or(GeomError::ClassificationInconsistent)?;
    let n = records.len();
    let mut pairs = Vec::new();
    if q <= 3 {
        rec.budget((n * (n - 1) / 2) as u64)?;
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j, records[i].splash.bits().intersection_len(records[j].splash.bits())));
            }
        }
    } else {
        for j in (0..n).filter(|&j| j != canon) {
            pairs.push((canon, j, records[canon].splash.bits().intersection_len(records[j].splash.bits())));
        }
    }
    rec.set("splashes", n as u64);
    rec.set("pairs", pairs.len() as u64);
    Ok(Scope { records, canon, pairs })
}

fn meet_len(a: &Subline, b: &Subline) -> usize {
    a.iter().filter(|x| b.binary_search(x).is_ok()).count()
}

/// Two sublines of one family determine the splash.
pub(crate) fn c5_2(s: &Setup, rec: &mut Rec, _rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let sc = scope(s, rec)?;
    let q = s.tower().q() as usize;
    let records: Vec<&SplashRecord> = if q <= 3 { sc.records.iter().collect() } else { alloc::vec![&sc.records[sc.canon]] };
    let mut cross = [0u64; 3];
    for r in records {
        for k in 0..2 {
            let fam = &r.families[k];
            for (i, a) in fam.iter().enumerate() {
                for b in &fam[i + 1..] {
                    rec.check_eq("same_family_meet", meet_len(a, b) as u64, 1);
                }
                for b in &r.families[1 - k] {
                    if k == 0 {
                        let m = meet_len(a, b);
                        rec.check("different_family_meet_at_most_two", m <= 2, || format!("{:?} {:?}", a, b));
                        if m <= 2 {
                            cross[m] += 1;
                        }
                    }
                }
            }
        }
    }
    for (m, c) in cross.iter().enumerate() {
        rec.add(&format!("different_family_meet_{}", m), *c);
    }
    for &(i, j, _) in &sc.pairs {
        for (a, b) in [(i, j), (j, i)] {
            let within = census::sublines_within(&sc.records[a], sc.records[b].splash.bits());
            let per = [0, 1].map(|k| within.iter().filter(|(f, _)| *f == k).count());
            rec.check("at_most_one_subline_per_family", per[0] <= 1 && per[1] <= 1, || format!("splashes {} and {}: {:?}", a, b, per));
        }
    }
    Ok(())
}

/// Maximal intersections are two disjoint sublines, one from each family.
pub(crate) fn c5_3(s: &Setup, rec: &mut Rec, _rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let sc = scope(s, rec)?;
    let q = s.tower().q() as usize;
    let mut spectrum: BTreeMap<usize, u64> = BTreeMap::new();
    for &(_, _, k) in &sc.pairs {
        *spectrum.entry(k).or_default() += 1;
    }
    for (k, c) in &spectrum {
        rec.set(&format!("spectrum_{}", k), *c);
    }
    let max = spectrum.keys().next_back().copied().unwrap_or(0);
    rec.check_eq("maximum_intersection", max as u64, 2 * q as u64 + 2);
    let nbits = s.ctx.spread().len();
    let mut maximal = 0u64;
    for &(i, j, k) in sc.pairs.iter().filter(|p| p.2 == max) {
        maximal += 1;
        let inter = sc.records[i].splash.bits().intersection(sc.records[j].splash.bits());
        for a in [i, j] {
            let within = census::sublines_within(&sc.records[a], &inter);
            rec.add("sublines_in_maximal_intersections", within.len() as u64);
            let ok = within.iter().any(|(fa, x)| {
                within.iter().any(|(fb, y)| {
                    fa < fb && meet_len(x, y) == 0 && BitSet::from_indices(nbits, x.iter().chain(y.iter()).copied()) == inter
                })
            });
            rec.check("two_disjoint_sublines_one_per_family", ok, || format!("splashes {} and {}, size {}", i, j, k));
        }
    }
    rec.add("maximal_pairs", maximal);
    Ok(())
}

/// Points of a plane of Σ∞ lying in the spread planes of `set`.
fn plane_points_in(ctx: &BruckBoseContext, plane: &ProjSubspace, set: &BitSet) -> Vec<ProjPoint> {
    let f = ctx.tower().base();
    projgeom::all_points(f, plane).into_iter().filter(|p| set.contains(ctx.spread_index_of(p.coords()))).collect()
}

/// The conic of a cover plane through `pts` and the transversal points, if it
/// is unique, nondegenerate, special and has exactly `pts` as points.
fn special_conic_through(ctx: &BruckBoseContext, plane: &ProjSubspace, trans: &[ProjSubspace; 3], pts: &[ProjPoint]) -> Result<bool, GeomError> {
    let t = ctx.tower();
    let f = t.base();
    let cf = t.cubic();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for p in pts {
        let c = curves::plane_coords(f, plane, p.coords()).ok_or(GeomError::PointOutsidePlane)?;
        rows.push(curves::monomials(f, &c).to_vec());
    }
    let ext = plane.extend(cf.order());
    let m = ext.meet(cf, &trans[0])?;
    if m.rank() != 1 {
        return Err(GeomError::AmbientMismatch);
    }
    let c = curves::plane_coords(cf, &ext, &m.basis()[0]).ok_or(GeomError::AmbientMismatch)?;
    let mon = curves::monomials(cf, &c).map(|x| t.coords_of(x));
    for k in 0..3 {
        rows.push((0..6).map(|i| mon[i][k]).collect());
    }
    let ns = linalg::nullspace(f, &rows, 6);
    if ns.len() != 1 {
        return Ok(false);
    }
    let form: Form = [ns[0][0], ns[0][1], ns[0][2], ns[0][3], ns[0][4], ns[0][5]];
    if !curves::is_x_special_conic(t, plane, &form, trans)? {
        return Ok(false);
    }
    let mut on: Vec<ProjPoint> = projgeom::all_points(f, plane)
        .into_iter()
        .filter(|p| curves::plane_coords(f, plane, p.coords()).is_some_and(|c| curves::eval_form(f, &form, &c).is_zero()))
        .collect();
    on.sort();
    let mut want = pts.to_vec();
    want.sort();
    Ok(on == want)
}

/// Cover planes meet a maximal intersection in a line and a special conic.
pub(crate) fn c5_4(s: &Setup, rec: &mut Rec, _rng: &mut ChaCha8Rng) -> Result<(), GeomError> {
    let ctx = &s.ctx;
    let t = s.tower();
    let f = t.base();
    let q = t.q() as usize;
    let records = census::enumerate_splashes(ctx, rec.limit())?;
    let canon = records.iter().position(|r| r.splash.indices() == s.splash.indices()).ok_or(GeomError::ClassificationInconsistent)?;
    let cb = records[canon].splash.bits();
    let partners: Vec<usize> = (0..records.len()).filter(|&j| j != canon && cb.intersection_len(records[j].splash.bits()) == 2 * q + 2).collect();
    rec.check("maximal_pair_exists", !partners.is_empty(), || "no splash meets the canonical one in 2q+2".into());
    let mut planes_checked = 0u64;
    for &j in &partners {
        let inter = cb.intersection(records[j].splash.bits());
        for r in [canon, j] {
            for cover in &records[r].covers {
                let trans = splash::transversals_of(t, cover)?;
                for plane in cover {
                    planes_checked += 1;
                    let pts = plane_points_in(ctx, plane, &inter);
                    rec.check_eq("points_in_intersection", pts.len() as u64, 2 * q as u64 + 2);
                    let mut found = false;
                    'lines: for (a, pa) in pts.iter().enumerate() {
                        for pb in &pts[a + 1..] {
                            let line = ProjSubspace::from_points(f, &[pa.clone(), pb.clone()]);
                            let (on, off): (Vec<ProjPoint>, Vec<ProjPoint>) = pts.iter().cloned().partition(|p| line.contains(f, p));
                            if on.len() == q + 1 && special_conic_through(ctx, plane, &trans, &off)? {
                                found = true;
                                break 'lines;
                            }
                        }
                    }
                    rec.check("line_and_special_conic", found, || format!("splash {}, plane {:?}", r, plane.basis()));
                }
            }
        }
    }
    rec.add("maximal_partners_of_canonical", partners.len() as u64);
    rec.add("cover_planes_checked", planes_checked);
    Ok(())
}
