mod common;


use extsplash_core::bruckbose::Pt3;
use extsplash_core::splash;
use extsplash_core::verify::{self, construct_two_subplanes, oracle, CheckId, RunOptions};

#[test]
fn reports_are_deterministic() {
    let t = common::towers(2).remove(0);
    let opts = RunOptions { seed: 7, budget: verify::DEFAULT_BUDGET };
    for id in [CheckId::C2_3, CheckId::C3_3, CheckId::C5_1] {
        let a = verify::run_check(id, t.clone(), opts).unwrap();
        let b = verify::run_check(id, t.clone(), opts).unwrap();
        assert_eq!(a, b);
    }
}

/// The two constructed subplanes are exactly the exterior subplanes with the
/// canonical splash through the subline, as found by closure.
#[test]
fn construction_matches_closure_oracle() {
    for ctx in common::contexts(3) {
        let (b, s, _) = splash::canonical_subplane(&ctx);
        let covers = splash::covers_of(&ctx, &s).unwrap();
        let comp = splash::companion_subplane(&ctx);
        let shared: Vec<Pt3> = b.points().iter().filter(|p| comp.contains(p)).copied().collect();
        assert_eq!(shared.len(), 4);
        for sub in [shared, b.lines()[0].points.clone()] {
            let (p1, p2, _) = construct_two_subplanes(&ctx, &s, &covers, &sub).unwrap();
            let mut got = vec![p1.points().to_vec(), p2.points().to_vec()];
            got.sort();
            let mut want: Vec<Vec<Pt3>> = oracle::subplanes_through_subline(&ctx, &sub, Some(&s), verify::DEFAULT_BUDGET)
                .unwrap()
                .into_iter()
                .map(|c| c.points)
                .collect();
            want.sort();
            assert_eq!(got, want, "{}", common::label(ctx.tower()));
            assert!(got.contains(&b.points().to_vec()));
        }
    }
}

#[test]
fn construction_needs_q_at_least_three() {
    let ctx = common::contexts(2).remove(0);
    let (b, s, _) = splash::canonical_subplane(&ctx);
    let covers = splash::covers_of(&ctx, &s).unwrap();
    assert!(construct_two_subplanes(&ctx, &s, &covers, &b.lines()[0].points).is_err());
}

#[test]
fn check_registry_is_consistent() {
    for q in [2, 3, 4, 5] {
        let all = verify::applicable_checks(q);
        let def = verify::default_checks(q);
        assert!(def.iter().all(|c| all.contains(c) && !c.is_conjecture()));
        for c in &all {
            assert_eq!(CheckId::parse(c.as_str()).unwrap(), *c);
            assert!(c.precondition(q).is_ok());
        }
    }
    assert!(CheckId::C3_2.precondition(3).is_err());
}
