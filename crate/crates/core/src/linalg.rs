//! Dense linear algebra over a [`Field`]. Matrices are row-major `Vec`s of
//! rows; vectors are slices.

use alloc::vec;
use alloc::vec::Vec;

use crate::gfq::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
        .collect()
}

pub fn transpose(m: &[Vec<Elem>]) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn mat_vec(f: &Field, m: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
    m.iter().map(|r| dot(f, r, v)).collect()
}

/// Row vector times matrix.
pub fn vec_mat(f: &Field, v: &[Elem], m: &[Vec<Elem>]) -> Vec<Elem> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![Elem::ZERO; cols];
    for (&c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

pub fn mat_mul(f: &Field, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Matrix {
    a.iter().map(|r| vec_mat(f, r, b)).collect()
}

pub fn scale(f: &Field, c: Elem, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn add_vec(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn sub_vec(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

/// `a*u + b*v`.
pub fn lin2(f: &Field, a: Elem, u: &[Elem], b: Elem, v: &[Elem]) -> Vec<Elem> {
    u.iter().zip(v).map(|(&x, &y)| f.add(f.mul(a, x), f.mul(b, y))).collect()
}

/// In-place reduced row echelon form. Zero rows are dropped; the returned
/// vector lists the pivot column of each remaining row.
pub fn rref(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let k = row[c];
            if k.is_zero() {
                continue;
            }
            for (x, &p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = f.sub(*x, f.mul(k, p));
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    pivots
}

pub fn rank(f: &Field, m: &[Vec<Elem>]) -> usize {
    let mut w = m.to_vec();
    rref(f, &mut w).len()
}

/// Basis of `{v : m v = 0}` for a matrix with `cols` columns.
pub fn nullspace(f: &Field, m: &[Vec<Elem>], cols: usize) -> Matrix {
    let mut w = m.to_vec();
    let pivots = rref(f, &mut w);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Elem::ZERO; cols];
        v[free] = Elem::ONE;
        for (row, &pc) in w.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

pub fn inverse(f: &Field, m: &[Vec<Elem>]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
            row
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(f: &Field, m: &[Vec<Elem>]) -> Elem {
    let n = m.len();
    let mut w = m.to_vec();
    let mut d = Elem::ONE;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !w[i][c].is_zero()) else {
            return Elem::ZERO;
        };
        if pr != c {
            w.swap(pr, c);
            d = f.neg(d);
        }
        d = f.mul(d, w[c][c]);
        let inv = f.inv(w[c][c]);
        for i in c + 1..n {
            let k = f.mul(w[i][c], inv);
            if k.is_zero() {
                continue;
            }
            for j in c..n {
                let t = f.mul(k, w[c][j]);
                w[i][j] = f.sub(w[i][j], t);
            }
        }
    }
    d
}

/// One solution of `m x = b`, if any.
pub fn solve(f: &Field, m: &[Vec<Elem>], b: &[Elem]) -> Option<Vec<Elem>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(r, &x)| {
            let mut row = r.clone();
            row.push(x);
            row
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Elem::ZERO; cols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[cols];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip_gf5() {
        let f = Field::prime(5).unwrap();
        let m: Matrix = [[1, 2, 3], [0, 1, 4], [2, 0, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| Elem(x)).collect())
            .collect();
        let inv = inverse(&f, &m).expect("invertible");
        assert_eq!(mat_mul(&f, &m, &inv), identity(3));
        assert!(!det(&f, &m).is_zero());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = Field::prime(3).unwrap();
        let m: Matrix = [[1, 1, 0, 2], [0, 1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| Elem(x)).collect())
            .collect();
        let ns = nullspace(&f, &m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&f, &m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn singular_has_no_inverse() {
        let f = Field::prime(2).unwrap();
        let m: Matrix = vec![vec![Elem(1), Elem(1)], vec![Elem(1), Elem(1)]];
        assert!(inverse(&f, &m).is_none());
        assert!(det(&f, &m).is_zero());
    }
}
