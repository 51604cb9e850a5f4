//! Univariate polynomials over a [`Field`], coefficients lowest degree first.

use alloc::vec;
use alloc::vec::Vec;

use crate::gfq::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(pub Vec<Elem>);

impl Poly {
    pub fn new(mut c: Vec<Elem>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Poly {
        Poly(vec![Elem::ZERO, Elem::ONE])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.0.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn lead(&self) -> Elem {
        self.0.last().copied().unwrap_or(Elem::ZERO)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }

    pub fn add(&self, f: &Field, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, f: &Field, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Poly {
        Poly::new(self.0.iter().map(|&x| f.mul(c, x)).collect())
    }

    pub fn mul(&self, f: &Field, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn eval(&self, f: &Field, x: Elem) -> Elem {
        self.0.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Quotient and remainder; panics when dividing by zero.
    pub fn divrem(&self, f: &Field, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(d.lead());
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], inv);
            if c.is_zero() {
                continue;
            }
            q[k - dd] = c;
            for (i, &dc) in d.0.iter().enumerate() {
                r[k - dd + i] = f.sub(r[k - dd + i], f.mul(c, dc));
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv(self.lead()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, f: &Field, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(f, &b).1;
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Apply a map to every coefficient.
    pub fn map(&self, g: impl Fn(Elem) -> Elem) -> Poly {
        Poly::new(self.0.iter().map(|&c| g(c)).collect())
    }

    /// Roots lying in the first `limit` elements of `f` (pass `f.order()`
    /// for all of them, or a subfield order), with multiplicity ignored.
    pub fn roots_in(&self, f: &Field, limit: u32) -> Vec<Elem> {
        (0..limit).map(Elem).filter(|&x| self.eval(f, x).is_zero()).collect()
    }

    /// Divide out `x^k` for the largest possible `k`.
    pub fn strip_x(&self) -> Poly {
        match self.valuation() {
            Some(v) => Poly::new(self.0[v..].to_vec()),
            None => Poly::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_identity() {
        let f = Field::prime(7).unwrap();
        let a = Poly::new([3, 0, 5, 1, 2].iter().map(|&x| Elem(x)).collect());
        let b = Poly::new([1, 4, 1].iter().map(|&x| Elem(x)).collect());
        let (q, r) = a.divrem(&f, &b);
        assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_of_products() {
        let f = Field::prime(5).unwrap();
        let g = Poly::new(vec![Elem(2), Elem(1)]);
        let a = g.mul(&f, &Poly::new(vec![Elem(1), Elem(0), Elem(1)]));
        let b = g.mul(&f, &Poly::new(vec![Elem(1), Elem(1)]));
        assert_eq!(a.gcd(&f, &b), g.monic(&f));
    }
}
