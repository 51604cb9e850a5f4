mod common;

use extsplash_core::bruckbose::BruckBoseContext;
use extsplash_core::curves::{self, CurveClass};
use extsplash_core::splash;
use extsplash_core::verify::construction::subline_curve;

fn no_rational_point_at_infinity(ctx: &BruckBoseContext, n: &curves::RationalCurve) -> bool {
    n.points(ctx.tower().base()).iter().all(|p| !p.coords()[6].is_zero())
}

/// Every conic of the canonical subplane has image of order 3 or 6, order 3
/// exactly for the special conics, and no point in Σ∞.
#[test]
fn conic_images_split_by_speciality() {
    for q in [2, 3, 4] {
        for ctx in common::contexts(q) {
            let t = ctx.tower();
            let (b, s, frame) = splash::canonical_subplane(&ctx);
            let covers = splash::covers_of(&ctx, &s).unwrap();
            let roles = splash::classify_covers(&ctx, &b, &frame, &covers).unwrap();
            let conics = curves::conics_of(t, &b, &frame).unwrap();
            let step = if q == 4 { 17 } else { 1 };
            let mut special = 0;
            for c in conics.iter().step_by(step) {
                let n = curves::bb_image_of_conic(&ctx, c).unwrap();
                assert!(no_rational_point_at_infinity(&ctx, &n));
                assert!(!n.raw_z.is_zero());
                match curves::classify_rational(&n) {
                    CurveClass::TwistedCubic => {
                        assert!(c.special);
                        let plane = curves::sigma_plane_of(&ctx, &n).unwrap();
                        assert!(covers[roles.conic].contains_plane(&plane));
                        assert!(curves::is_x_special_cubic(&ctx, &n, &plane, &covers[roles.conic].transversals).unwrap());
                        special += 1;
                    }
                    CurveClass::Nrc6 => assert!(!c.special),
                    CurveClass::Other => panic!("order {} at q={}", n.order, q),
                }
            }
            if q <= 3 {
                let qq = q as usize;
                assert_eq!(special, qq * qq + qq + 1);
            }
        }
    }
}

#[test]
fn special_cubics_avoid_sigma_infinity() {
    for q in [2, 3, 4, 5] {
        for ctx in common::contexts(q) {
            let (b, _, frame) = splash::canonical_subplane(&ctx);
            for c in curves::special_conics_of(ctx.tower(), &b, &frame).unwrap() {
                assert!(no_rational_point_at_infinity(&ctx, &curves::bb_image_of_conic(&ctx, &c).unwrap()));
            }
            for line in b.lines() {
                let n = subline_curve(&ctx, &line.points).unwrap();
                assert!(no_rational_point_at_infinity(&ctx, &n));
                assert_eq!(n.sigma_inf_points_ext(ctx.tower()).len(), 3);
            }
        }
    }
}
