mod common;

use extsplash_core::bruckbose::{self, lift, BruckBoseContext, Pt3};
use extsplash_core::curves;
use extsplash_core::projgeom::{self, ProjSubspace};
use extsplash_core::verify::construction::subline_curve;
use extsplash_core::Elem;

/// Spread indices `i` with `Y` in the 3-space spanned by spread plane `i` and `X`.
fn joining_planes(ctx: &BruckBoseContext, x: &[Elem], y: &[Elem]) -> usize {
    let f = ctx.tower().base();
    ctx.spread()
        .iter()
        .filter(|s| {
            let mut rows: Vec<Vec<Elem>> = s.basis().iter().map(|r| lift(r)).collect();
            rows.push(x.to_vec());
            ProjSubspace::from_rows(f, 6, &rows).contains_vec(f, y)
        })
        .count()
}

fn affine_vectors(ctx: &BruckBoseContext) -> Vec<Vec<Elem>> {
    let f = ctx.tower().base();
    projgeom::all_points_of_space(f, 6).into_iter().filter(|p| !p.coords()[6].is_zero()).map(|p| p.coords().to_vec()).collect()
}

#[test]
fn affine_points_are_joined_by_one_line_space() {
    for q in [2, 3, 4] {
        for ctx in common::contexts(q) {
            let aff = affine_vectors(&ctx);
            let step = if q == 2 { 1 } else { 97 };
            let mut pairs = 0;
            for (i, x) in aff.iter().enumerate().step_by(step) {
                for y in aff[i + 1..].iter().step_by(step) {
                    assert_eq!(joining_planes(&ctx, x, y), 1);
                    // the 3-space of the joining line of PG(2,q^3) holds both
                    let (px, py) = (ctx.eps_inv(&projgeom::ProjPoint::new(ctx.tower().base(), x).unwrap()), ctx.eps_inv(&projgeom::ProjPoint::new(ctx.tower().base(), y).unwrap()));
                    let line = projgeom::cross(ctx.tower().cubic(), &px, &py);
                    let s = ctx.line_to_3space(&line).unwrap();
                    assert!(s.contains_vec(ctx.tower().base(), x) && s.contains_vec(ctx.tower().base(), y));
                    pairs += 1;
                }
            }
            if q == 2 {
                assert_eq!(pairs, 64 * 63 / 2);
            }
        }
    }
}

#[test]
fn eps_is_a_bijection_on_affine_points() {
    for q in [2, 3] {
        for ctx in common::contexts(q) {
            let f = ctx.tower().base();
            for v in affine_vectors(&ctx) {
                let p = projgeom::ProjPoint::new(f, &v).unwrap();
                assert_eq!(ctx.eps(&ctx.eps_inv(&p)), p);
            }
        }
    }
}

#[test]
fn spread_partitions_sigma_infinity() {
    for q in [2, 3, 4] {
        for ctx in common::contexts(q) {
            let f = ctx.tower().base();
            let q = q as usize;
            assert_eq!(ctx.spread().len(), q * q * q + 1);
            let mut seen = std::collections::BTreeSet::new();
            for s in ctx.spread() {
                for p in projgeom::all_points(f, s) {
                    assert!(seen.insert(p));
                }
            }
            assert_eq!(seen.len() as u64, projgeom::num_points(5, q as u64));
        }
    }
}

#[test]
fn spread_transversals_are_conjugate() {
    for q in [2, 3, 4, 5] {
        for ctx in common::contexts(q) {
            let t = ctx.tower();
            let g = ctx.transversals();
            assert_eq!(bruckbose::conj_subspace(t, &g[0]), g[1]);
            assert_eq!(bruckbose::conj_subspace(t, &g[1]), g[2]);
            assert_eq!(bruckbose::conj_subspace(t, &g[2]), g[0]);
            let cf = t.cubic();
            for s in ctx.spread() {
                let e = s.extend(cf.order());
                assert!(g.iter().all(|l| e.meet(cf, l).unwrap().rank() == 1));
            }
        }
    }
}

/// Exterior sublines through `(0,0,1)`, `(c,d,1)` and `(λc,λd,1)`: the
/// subline avoids ℓ∞ exactly when `λ` is outside GF(q).
fn sublines(ctx: &BruckBoseContext, count: usize) -> Vec<Vec<Pt3>> {
    let t = ctx.tower();
    let cf = t.cubic();
    let n = cf.order();
    (0..count)
        .map(|k| {
            let c = Elem(1 + (k as u32 * 7) % (n - 1));
            let d = Elem((k as u32 * 13 + 5) % n);
            let lam = cf.pow(t.tau(), 1 + (k as u64 % 2));
            let a = [Elem::ZERO, Elem::ZERO, Elem::ONE];
            let b = projgeom::normalize3(cf, [c, d, Elem::ONE]).unwrap();
            let third = projgeom::normalize3(cf, [cf.mul(lam, c), cf.mul(lam, d), Elem::ONE]).unwrap();
            bruckbose::subline_closure(t, &a, &b, &third).unwrap()
        })
        .collect()
}

#[test]
fn exterior_sublines_map_to_spread_special_cubics() {
    for q in [2, 3, 4] {
        for ctx in common::contexts(q) {
            for b in sublines(&ctx, 12) {
                assert!(bruckbose::is_subline(ctx.tower(), &b));
                assert!(b.iter().all(|p| !p[2].is_zero()));
                let n = subline_curve(&ctx, &b).unwrap();
                assert_eq!(curves::classify_rational(&n), curves::CurveClass::TwistedCubic);
                let plane = curves::sigma_plane_of(&ctx, &n).unwrap();
                let line = projgeom::cross(ctx.tower().cubic(), &b[0], &b[1]);
                let cf = ctx.tower().cubic();
                let inf = projgeom::normalize3(cf, [line[1], cf.neg(line[0]), Elem::ZERO]).unwrap();
                assert_eq!(&plane, ctx.spread_plane(&inf));
                assert!(curves::is_x_special_cubic(&ctx, &n, &plane, ctx.transversals()).unwrap());
                // the images are the rational points of the cubic
                let mut imgs: Vec<_> = b.iter().map(|p| ctx.eps(p)).collect();
                let mut pts = n.points(ctx.tower().base());
                imgs.sort();
                pts.sort();
                assert_eq!(imgs, pts);
            }
        }
    }
}
