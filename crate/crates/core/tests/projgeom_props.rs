mod common;

use std::collections::BTreeSet;

use extsplash_core::projgeom::{self, ProjPoint, ProjSubspace};
use extsplash_core::{Elem, FieldTower};
use proptest::prelude::*;

#[test]
fn point_counts() {
    let t2 = FieldTower::for_q(2).unwrap();
    let t3 = FieldTower::for_q(3).unwrap();
    for (f, n) in [(t2.base(), 2), (t2.cubic(), 2), (t3.base(), 5), (t2.base(), 6)] {
        let q = f.order() as u64;
        let pts = projgeom::all_points_of_space(f, n);
        let distinct: BTreeSet<Vec<Elem>> = pts.iter().map(|p| p.coords().to_vec()).collect();
        let want = (q.pow(n as u32 + 1) - 1) / (q - 1);
        assert_eq!(pts.len() as u64, want, "PG({},{})", n, q);
        assert_eq!(distinct.len() as u64, want);
        assert_eq!(projgeom::num_points(n, q), want);
    }
}

#[test]
fn gaussian_binomials_match_subspace_enumeration() {
    let t = FieldTower::for_q(2).unwrap();
    let f = t.base();
    for (n, k) in [(3, 1), (4, 2), (5, 2)] {
        let found: BTreeSet<ProjSubspace> = projgeom::all_subspaces(f, n, k, 1 << 20).unwrap().collect();
        assert_eq!(found.len() as u64, projgeom::gaussian_binomial(n, k, 2));
    }
    assert_eq!(projgeom::gaussian_binomial(5, 2, 2), 1395);
    assert_eq!(extsplash_core::verify::census::plane_count(2), 1395);
}

#[test]
fn dual_incidence_is_the_dot_product() {
    for t in &common::all_towers()[..4] {
        let f = t.cubic();
        let pts = projgeom::all_points_of_space(f, 2);
        let a: [Elem; 3] = pts[5].coords().try_into().unwrap();
        for p in &pts {
            let d = f.sum((0..3).map(|i| f.mul(a[i], p.coords()[i])));
            assert_eq!(projgeom::incident3(f, &a, p.coords()), d.is_zero());
        }
    }
}

fn vec3() -> impl Strategy<Value = (usize, [u32; 3], [u32; 3], [u32; 3])> {
    (0..common::all_towers().len(), any::<[u32; 3]>(), any::<[u32; 3]>(), any::<[u32; 3]>())
}

proptest! {
    #[test]
    fn normalization_is_scale_invariant((i, a, _, _) in vec3()) {
        let t = &common::all_towers()[i];
        let f = t.cubic();
        let v: Vec<Elem> = a.iter().map(|&x| Elem(x % f.order())).collect();
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let p = ProjPoint::new(f, &v).unwrap();
        prop_assert_eq!(ProjPoint::new(f, p.coords()).unwrap(), p.clone());
        for lam in f.nonzero() {
            let w: Vec<Elem> = v.iter().map(|&x| f.mul(lam, x)).collect();
            prop_assert_eq!(ProjPoint::new(f, &w).unwrap(), p.clone());
        }
    }

    #[test]
    fn join_and_meet_are_dual((i, a, b, c) in vec3()) {
        let t = &common::all_towers()[i];
        let f = t.cubic();
        let to = |a: [u32; 3]| projgeom::normalize3(f, a.map(|x| Elem(x % f.order())));
        let (Some(x), Some(y), Some(z)) = (to(a), to(b), to(c)) else { return Ok(()) };
        let xy = projgeom::normalize3(f, projgeom::cross(f, &x, &y));
        let xz = projgeom::normalize3(f, projgeom::cross(f, &x, &z));
        let (Some(xy), Some(xz)) = (xy, xz) else { return Ok(()) };
        prop_assert!(projgeom::incident3(f, &xy, &x) && projgeom::incident3(f, &xy, &y));
        if xy != xz {
            // the two lines through x meet in x again
            prop_assert_eq!(projgeom::normalize3(f, projgeom::cross(f, &xy, &xz)), Some(x));
        }
    }

    #[test]
    fn subspace_text_round_trips((i, a, b, _) in vec3()) {
        let t = &common::all_towers()[i];
        let f = t.base();
        let r1: Vec<Elem> = (0..6).map(|k| Elem(a[k % 3].rotate_left(k as u32) % f.order())).collect();
        let r2: Vec<Elem> = (0..6).map(|k| Elem(b[k % 3].rotate_left(3 * k as u32) % f.order())).collect();
        let s = ProjSubspace::from_rows(f, 5, &[r1, r2]);
        let text = projgeom::format_subspace(f, &s);
        prop_assert_eq!(projgeom::parse_subspace(f, 5, &text).unwrap(), s);
    }
}
