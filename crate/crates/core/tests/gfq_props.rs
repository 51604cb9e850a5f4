mod common;

use std::collections::BTreeSet;

use extsplash_core::{Elem, FieldTower};
use proptest::prelude::*;

fn tower_and_elems() -> impl Strategy<Value = (usize, u32, u32, u32)> {
    (0..common::all_towers().len(), any::<u32>(), any::<u32>(), any::<u32>())
}

fn pick(t: &FieldTower, r: u32) -> Elem {
    Elem(r % t.cubic().order())
}

#[test]
fn frobenius_has_order_three() {
    for t in common::all_towers() {
        for x in t.cubic().elements() {
            assert_eq!(t.frobenius_pow(x, 3), x, "{}", common::label(t));
            assert_eq!(t.frobenius(t.frobenius(t.frobenius(x))), x);
        }
    }
}

#[test]
fn norm_is_onto_base_multiplicative_group() {
    for t in common::all_towers() {
        let cf = t.cubic();
        let image: BTreeSet<Elem> = cf.nonzero().map(|x| t.norm(x)).collect();
        let base: BTreeSet<Elem> = t.base().nonzero().collect();
        assert_eq!(image, base, "{}", common::label(t));
        // each fibre has q^2+q+1 elements
        let q = t.q() as usize;
        for y in &base {
            assert_eq!(cf.nonzero().filter(|&x| t.norm(x) == *y).count(), q * q + q + 1);
        }
    }
}

#[test]
fn q_minus_one_powers_are_the_norm_one_group() {
    for t in common::all_towers() {
        let cf = t.cubic();
        let q = t.q() as u64;
        let image: BTreeSet<Elem> = cf.nonzero().map(|x| cf.pow(x, q - 1)).collect();
        let kernel: BTreeSet<Elem> = cf.nonzero().filter(|&k| cf.pow(k, q * q + q + 1) == Elem::ONE).collect();
        assert_eq!(image.len() as u64, q * q + q + 1);
        assert_eq!(image, kernel, "{}", common::label(t));
    }
}

#[test]
fn tau_is_primitive_by_repeated_multiplication() {
    for t in common::all_towers() {
        let cf = t.cubic();
        let mut x = t.tau();
        let mut n = 1u64;
        while x != Elem::ONE {
            x = cf.mul(x, t.tau());
            n += 1;
        }
        assert_eq!(n, (cf.order() - 1) as u64, "{}", common::label(t));
    }
}

#[test]
fn prime_fields_match_integers_mod_p() {
    for t in common::all_towers().iter().filter(|t| t.spec().e == 1) {
        let f = t.base();
        let p = f.order();
        for a in 0..p {
            for b in 0..p {
                assert_eq!(f.add(Elem(a), Elem(b)), Elem((a + b) % p));
                assert_eq!(f.mul(Elem(a), Elem(b)), Elem(a * b % p));
            }
        }
    }
}

proptest! {
    #[test]
    fn norm_is_multiplicative((i, a, b, _) in tower_and_elems()) {
        let t = &common::all_towers()[i];
        let cf = t.cubic();
        let (x, y) = (pick(t, a), pick(t, b));
        prop_assert_eq!(t.norm(cf.mul(x, y)), t.base().mul(t.norm(x), t.norm(y)));
        prop_assert!(t.is_base(t.norm(x)));
        prop_assert!(t.is_base(t.trace(x)));
    }

    #[test]
    fn coords_are_linear_over_the_base((i, a, b, c) in tower_and_elems()) {
        let t = &common::all_towers()[i];
        let cf = t.cubic();
        let f = t.base();
        let (x, y) = (pick(t, a), pick(t, b));
        let (s, u) = (Elem(c % f.order()), Elem((c / 7) % f.order()));
        let lhs = t.coords(cf.add(cf.mul(s, x), cf.mul(u, y))).unwrap();
        let cx = t.coords(x).unwrap();
        let cy = t.coords(y).unwrap();
        let rhs: Vec<Elem> = (0..3).map(|k| f.add(f.mul(s, cx[k]), f.mul(u, cy[k]))).collect();
        prop_assert_eq!(lhs.to_vec(), rhs);
        prop_assert_eq!(t.uncoords(cx).unwrap(), x);
    }

    #[test]
    fn cubic_field_axioms((i, a, b, c) in tower_and_elems()) {
        let t = &common::all_towers()[i];
        let cf = t.cubic();
        let (x, y, z) = (pick(t, a), pick(t, b), pick(t, c));
        prop_assert_eq!(cf.mul(x, cf.add(y, z)), cf.add(cf.mul(x, y), cf.mul(x, z)));
        prop_assert_eq!(cf.mul(cf.mul(x, y), z), cf.mul(x, cf.mul(y, z)));
        prop_assert_eq!(cf.add(x, cf.neg(x)), Elem::ZERO);
        if !x.is_zero() {
            prop_assert_eq!(cf.mul(x, cf.inv(x)), Elem::ONE);
        }
        // Frobenius is additive and multiplicative
        prop_assert_eq!(t.frobenius(cf.add(x, y)), cf.add(t.frobenius(x), t.frobenius(y)));
        prop_assert_eq!(t.frobenius(cf.mul(x, y)), cf.mul(t.frobenius(x), t.frobenius(y)));
    }
}
