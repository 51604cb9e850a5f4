//! Projective spaces PG(n, F) over any level of the tower.
//!
//! Points are normalized so that the first nonzero coordinate is one, and
//! subspaces are stored by the reduced row echelon form of a basis. Both
//! forms are canonical, so equality, ordering and hashing are structural.
//! Every object records the order of the field it lives over; operations
//! take the matching [`Field`] explicitly.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::GeomError;
use crate::gfq::{Elem, Field};
use crate::linalg::{self, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    order: u32,
    coords: Vec<Elem>,
}

impl ProjPoint {
    /// Normalize a nonzero vector; `None` for the zero vector.
    pub fn new(f: &Field, v: &[Elem]) -> Option<ProjPoint> {
        let lead = v.iter().find(|x| !x.is_zero())?;
        let inv = f.inv(*lead);
        Some(ProjPoint { order: f.order(), coords: v.iter().map(|&x| f.mul(x, inv)).collect() })
    }

    /// Wrap a vector already in normalized form.
    pub fn from_normalized(f: &Field, v: Vec<Elem>) -> ProjPoint {
        debug_assert!(v.iter().find(|x| !x.is_zero()) == Some(&Elem::ONE));
        ProjPoint { order: f.order(), coords: v }
    }

    #[inline]
    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    /// Projective dimension of the ambient space.
    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    #[inline]
    pub fn field_order(&self) -> u32 {
        self.order
    }

    /// Reread the point over an extension field of order `order`.
    pub fn extend(&self, order: u32) -> ProjPoint {
        ProjPoint { order, coords: self.coords.clone() }
    }

    /// True when every coordinate lies in the subfield of order `sub`.
    pub fn is_over(&self, sub: u32) -> bool {
        self.coords.iter().all(|c| c.0 < sub)
    }

    /// Rank among the points of PG(n, F) in the order used by [`all_points`].
    pub fn index(&self) -> u64 {
        point_index(self.order, &self.coords)
    }
}

/// Rank of a normalized vector among all points of PG(n, F) with `|F| = order`.
pub fn point_index(order: u32, v: &[Elem]) -> u64 {
    let n = v.len() - 1;
    let q = order as u64;
    let lead = v.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    let mut offset = 0u64;
    for j in 0..lead {
        offset += q.pow((n - j) as u32);
    }
    let mut tail = 0u64;
    for x in &v[lead + 1..] {
        tail = tail * q + x.0 as u64;
    }
    offset + tail
}

/// Inverse of [`point_index`].
pub fn point_from_index(f: &Field, n: usize, mut idx: u64) -> ProjPoint {
    let q = f.order() as u64;
    let mut lead = 0;
    loop {
        let block = q.pow((n - lead) as u32);
        if idx < block {
            break;
        }
        idx -= block;
        lead += 1;
    }
    let mut v = vec![Elem::ZERO; n + 1];
    v[lead] = Elem::ONE;
    for j in (lead + 1..=n).rev() {
        v[j] = Elem((idx % q) as u32);
        idx /= q;
    }
    ProjPoint { order: f.order(), coords: v }
}

/// Number of points of PG(n, q).
pub fn num_points(n: usize, q: u64) -> u64 {
    (0..=n as u32).map(|i| q.pow(i)).sum()
}

/// Number of `k`-dimensional subspaces of PG(n, q), the Gaussian binomial
/// `[n+1 choose k+1]_q`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    let (top, bot) = (n as u32 + 1, k as u32 + 1);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..bot {
        num *= (q as u128).pow(top - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjSubspace {
    order: u32,
    n: usize,
    basis: Matrix,
}

impl ProjSubspace {
    /// Subspace spanned by the given vectors (the empty subspace when they are all zero).
    pub fn from_rows(f: &Field, n: usize, rows: &[Vec<Elem>]) -> ProjSubspace {
        let mut basis = rows.to_vec();
        debug_assert!(basis.iter().all(|r| r.len() == n + 1));
        linalg::rref(f, &mut basis);
        ProjSubspace { order: f.order(), n, basis }
    }

    pub fn from_points(f: &Field, pts: &[ProjPoint]) -> ProjSubspace {
        let n = pts.first().map_or(0, |p| p.dim());
        let rows: Vec<Vec<Elem>> = pts.iter().map(|p| p.coords.clone()).collect();
        Self::from_rows(f, n, &rows)
    }

    pub fn whole(f: &Field, n: usize) -> ProjSubspace {
        ProjSubspace { order: f.order(), n, basis: linalg::identity(n + 1) }
    }

    /// Hyperplane `{x : a . x = 0}`.
    pub fn hyperplane(f: &Field, a: &[Elem]) -> ProjSubspace {
        let n = a.len() - 1;
        let ns = linalg::nullspace(f, &[a.to_vec()], n + 1);
        Self::from_rows(f, n, &ns)
    }

    /// Canonical basis in reduced row echelon form.
    #[inline]
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Projective dimension (-1 for the empty subspace).
    #[inline]
    pub fn dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn field_order(&self) -> u32 {
        self.order
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn check(&self, other_order: u32, other_n: usize) -> Result<(), GeomError> {
        if self.order != other_order || self.n != other_n {
            Err(GeomError::MixedAmbient)
        } else {
            Ok(())
        }
    }

    pub fn contains_vec(&self, f: &Field, v: &[Elem]) -> bool {
        // reduce v against the echelon basis
        let mut w = v.to_vec();
        for row in &self.basis {
            let pc = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let k = w[pc];
            if k.is_zero() {
                continue;
            }
            for (x, &r) in w.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(k, r));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, f: &Field, p: &ProjPoint) -> bool {
        p.order == self.order && p.dim() == self.n && self.contains_vec(f, &p.coords)
    }

    pub fn contains_subspace(&self, f: &Field, other: &ProjSubspace) -> bool {
        other.basis.iter().all(|r| self.contains_vec(f, r))
    }

    pub fn span(&self, f: &Field, other: &ProjSubspace) -> Result<ProjSubspace, GeomError> {
        self.check(other.order, other.n)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Self::from_rows(f, self.n, &rows))
    }

    pub fn span_point(&self, f: &Field, p: &ProjPoint) -> Result<ProjSubspace, GeomError> {
        self.check(p.order, p.dim())?;
        let mut rows = self.basis.clone();
        rows.push(p.coords.clone());
        Ok(Self::from_rows(f, self.n, &rows))
    }

    /// Dual coordinates: a basis of the linear forms vanishing on the subspace.
    pub fn annihilator(&self, f: &Field) -> Matrix {
        linalg::nullspace(f, &self.basis, self.n + 1)
    }

    pub fn meet(&self, f: &Field, other: &ProjSubspace) -> Result<ProjSubspace, GeomError> {
        self.check(other.order, other.n)?;
        let mut eqs = self.annihilator(f);
        eqs.extend(other.annihilator(f));
        let rows = linalg::nullspace(f, &eqs, self.n + 1);
        let out = Self::from_rows(f, self.n, &rows);
        debug_assert_eq!(
            self.span(f, other).map(|s| s.rank() + out.rank()).ok(),
            Some(self.rank() + other.rank())
        );
        Ok(out)
    }

    /// Reread over an extension field; the echelon form is unchanged.
    pub fn extend(&self, order: u32) -> ProjSubspace {
        ProjSubspace { order, n: self.n, basis: self.basis.clone() }
    }

    /// Points of the subspace rational over the subfield of order `sub`,
    /// assuming the subspace is defined over that subfield.
    pub fn rational_points(&self, f: &Field, sub: u32) -> Vec<ProjPoint> {
        let mut out = combos(f, &self.basis, sub);
        for p in out.iter_mut() {
            p.order = self.order;
        }
        out
    }

    /// True when the echelon basis has all entries in the subfield of order `sub`,
    /// which is equivalent to the subspace being defined over it.
    pub fn is_over(&self, sub: u32) -> bool {
        self.basis.iter().flatten().all(|c| c.0 < sub)
    }
}

fn combos(f: &Field, basis: &[Vec<Elem>], sub: u32) -> Vec<ProjPoint> {
    let k = basis.len();
    let n1 = basis.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for lead in 0..k {
        let tail = k - lead - 1;
        let total = (sub as u64).pow(tail as u32);
        for t in 0..total {
            let mut v = basis[lead].clone();
            let mut rest = t;
            for j in (lead + 1..k).rev() {
                let c = Elem((rest % sub as u64) as u32);
                rest /= sub as u64;
                if c.is_zero() {
                    continue;
                }
                for (x, &b) in v.iter_mut().zip(&basis[j]) {
                    *x = f.add(*x, f.mul(c, b));
                }
            }
            debug_assert_eq!(v.len(), n1);
            out.push(ProjPoint { order: f.order(), coords: v });
        }
    }
    out
}

/// All points of a subspace, in the order of its coordinate combinations.
pub fn all_points(f: &Field, s: &ProjSubspace) -> Vec<ProjPoint> {
    combos(f, &s.basis, f.order())
}

/// All points of PG(n, F) in index order.
pub fn all_points_of_space(f: &Field, n: usize) -> Vec<ProjPoint> {
    let total = num_points(n, f.order() as u64);
    (0..total).map(|i| point_from_index(f, n, i)).collect()
}

/// Streaming enumeration of the `k`-dimensional subspaces of PG(n, F), one
/// echelon matrix at a time, ordered by pivot columns and then by the free
/// entries read as a base-|F| number.
pub struct SubspaceIter<'a> {
    f: &'a Field,
    n: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    counter: u64,
    total: u64,
}

impl<'a> SubspaceIter<'a> {
    fn load(&mut self) {
        self.free.clear();
        self.counter = 0;
        if let Some(p) = &self.pivots {
            for (r, &pc) in p.iter().enumerate() {
                for c in pc + 1..=self.n {
                    if !p.contains(&c) {
                        self.free.push((r, c));
                    }
                }
            }
            self.total = (self.f.order() as u64).pow(self.free.len() as u32);
        }
    }

    fn next_pivots(&mut self) {
        let n1 = self.n + 1;
        if let Some(p) = &mut self.pivots {
            let k = p.len();
            let mut i = k;
            while i > 0 {
                i -= 1;
                if p[i] < n1 - k + i {
                    p[i] += 1;
                    for j in i + 1..k {
                        p[j] = p[j - 1] + 1;
                    }
                    self.load();
                    return;
                }
            }
            self.pivots = None;
        }
    }
}

impl<'a> Iterator for SubspaceIter<'a> {
    type Item = ProjSubspace;

    fn next(&mut self) -> Option<ProjSubspace> {
        loop {
            let pivots = self.pivots.as_ref()?;
            if self.counter < self.total {
                let q = self.f.order() as u64;
                let mut basis = vec![vec![Elem::ZERO; self.n + 1]; pivots.len()];
                for (r, &pc) in pivots.iter().enumerate() {
                    basis[r][pc] = Elem::ONE;
                }
                let mut t = self.counter;
                for &(r, c) in self.free.iter().rev() {
                    basis[r][c] = Elem((t % q) as u32);
                    t /= q;
                }
                self.counter += 1;
                return Some(ProjSubspace { order: self.f.order(), n: self.n, basis });
            }
            self.next_pivots();
        }
    }
}

/// Stream every `k`-dimensional subspace of PG(n, F) exactly once.
///
/// Fails with `BudgetExceeded` when their number is larger than `budget`.
pub fn all_subspaces(f: &Field, n: usize, k: usize, budget: u64) -> Result<SubspaceIter<'_>, GeomError> {
    let needed = gaussian_binomial(n, k, f.order() as u64);
    if needed > budget {
        return Err(GeomError::BudgetExceeded { needed, budget });
    }
    let mut it = SubspaceIter {
        f,
        n,
        pivots: (k <= n).then(|| (0..=k).collect()),
        free: Vec::new(),
        counter: 0,
        total: 0,
    };
    it.load();
    Ok(it)
}

/// All `k`-dimensional subspaces of a subspace `s`, as subspaces of the ambient space.
pub fn subspaces_of(f: &Field, s: &ProjSubspace, k: usize) -> Vec<ProjSubspace> {
    let d = s.rank();
    if k + 1 > d {
        return Vec::new();
    }
    let it = all_subspaces(f, d - 1, k, u64::MAX).expect("unbounded budget");
    it.map(|sub| {
        let rows: Vec<Vec<Elem>> = sub.basis.iter().map(|c| linalg::vec_mat(f, c, &s.basis)).collect();
        ProjSubspace::from_rows(f, s.n, &rows)
    })
    .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homography {
    order: u32,
    m: Matrix,
}

impl Homography {
    /// Fails with `SingularMatrix` on a non-invertible matrix. The matrix is
    /// scaled so that its first nonzero entry is one.
    pub fn new(f: &Field, m: Matrix) -> Result<Homography, GeomError> {
        if linalg::det(f, &m).is_zero() {
            return Err(GeomError::SingularMatrix);
        }
        let lead = *m.iter().flatten().find(|x| !x.is_zero()).expect("nonsingular");
        let inv = f.inv(lead);
        let m = m.iter().map(|r| linalg::scale(f, inv, r)).collect();
        Ok(Homography { order: f.order(), m })
    }

    pub fn identity(f: &Field, n: usize) -> Homography {
        Homography { order: f.order(), m: linalg::identity(n + 1) }
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.len() - 1
    }

    pub fn apply_vec(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        linalg::mat_vec(f, &self.m, v)
    }

    pub fn apply(&self, f: &Field, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(f, &self.apply_vec(f, &p.coords)).expect("nonsingular image")
    }

    pub fn apply_subspace(&self, f: &Field, s: &ProjSubspace) -> ProjSubspace {
        let rows: Vec<Vec<Elem>> = s.basis.iter().map(|r| self.apply_vec(f, r)).collect();
        ProjSubspace::from_rows(f, s.n, &rows)
    }

    /// Image of a hyperplane given by dual coordinates `a` (so that
    /// `a . x = 0`): the new coordinates are `a M^{-1}`.
    pub fn apply_dual(&self, f: &Field, a: &[Elem]) -> Vec<Elem> {
        let inv = linalg::inverse(f, &self.m).expect("nonsingular");
        linalg::vec_mat(f, a, &inv)
    }

    /// `self ∘ other`.
    pub fn compose(&self, f: &Field, other: &Homography) -> Homography {
        Homography::new(f, linalg::mat_mul(f, &self.m, &other.m)).expect("product of invertibles")
    }

    pub fn inverse(&self, f: &Field) -> Homography {
        Homography::new(f, linalg::inverse(f, &self.m).expect("nonsingular")).expect("invertible")
    }

    /// The homography sending the standard frame `e_0, ..., e_n, e_0+...+e_n`
    /// to the given `n+2` points in general position.
    pub fn from_frame(f: &Field, frame: &[Vec<Elem>]) -> Result<Homography, GeomError> {
        let n1 = frame.len() - 1;
        let cols = linalg::transpose(&frame[..n1]);
        let lam = linalg::solve(f, &cols, &frame[n1]).ok_or(GeomError::SingularMatrix)?;
        if lam.iter().any(|x| x.is_zero()) {
            return Err(GeomError::SingularMatrix);
        }
        let m: Matrix = (0..n1)
            .map(|i| (0..n1).map(|j| f.mul(frame[j][i], lam[j])).collect())
            .collect();
        Homography::new(f, m)
    }
}

/// Dual coordinates of the line of PG(2, F) through two points.
pub fn cross(f: &Field, a: &[Elem], b: &[Elem]) -> [Elem; 3] {
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

/// Normalize a 3-vector; `None` when it is zero.
pub fn normalize3(f: &Field, v: [Elem; 3]) -> Option<[Elem; 3]> {
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let inv = f.inv(lead);
    Some([f.mul(v[0], inv), f.mul(v[1], inv), f.mul(v[2], inv)])
}

/// `a . x` for a line `a` and point `x` of PG(2, F).
#[inline]
pub fn incident3(f: &Field, a: &[Elem], x: &[Elem]) -> bool {
    linalg::dot(f, a, x).is_zero()
}

/// Text form of a vector: base-p digit strings joined by `,`.
pub fn format_vec(f: &Field, v: &[Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| f.to_digits(x)).collect();
    parts.join(",")
}

pub fn format_point(f: &Field, p: &ProjPoint) -> String {
    format_vec(f, &p.coords)
}

/// Text form of a subspace: the echelon rows joined by `;`.
pub fn format_subspace(f: &Field, s: &ProjSubspace) -> String {
    let rows: Vec<String> = s.basis.iter().map(|r| format_vec(f, r)).collect();
    rows.join(";")
}

pub fn parse_vec(f: &Field, text: &str) -> Result<Vec<Elem>, GeomError> {
    text.split(',').map(|c| f.parse_digits(c.trim()).map_err(GeomError::from)).collect()
}

pub fn parse_point(f: &Field, text: &str) -> Result<ProjPoint, GeomError> {
    let v = parse_vec(f, text)?;
    ProjPoint::new(f, &v).ok_or_else(|| GeomError::Serialization(String::from("zero vector")))
}

pub fn parse_subspace(f: &Field, n: usize, text: &str) -> Result<ProjSubspace, GeomError> {
    let rows = text
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| parse_vec(f, r))
        .collect::<Result<Vec<_>, _>>()?;
    if rows.iter().any(|r| r.len() != n + 1) {
        return Err(GeomError::MixedAmbient);
    }
    Ok(ProjSubspace::from_rows(f, n, &rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(5, 2, 2), 1395);
        assert_eq!(gaussian_binomial(2, 1, 3), 13);
        assert_eq!(gaussian_binomial(5, 2, 3), 33880);
        assert_eq!(gaussian_binomial(6, 0, 2), 127);
    }

    #[test]
    fn point_index_roundtrip() {
        let f = Field::prime(3).unwrap();
        for i in 0..num_points(3, 3) {
            let p = point_from_index(&f, 3, i);
            assert_eq!(p.index(), i);
        }
    }

    #[test]
    fn frame_homography() {
        let f = Field::prime(5).unwrap();
        let frame: Vec<Vec<Elem>> = [[1, 2, 0], [0, 1, 3], [1, 0, 1], [1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| Elem(x)).collect())
            .collect();
        let h = Homography::from_frame(&f, &frame).unwrap();
        let e = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];
        for (src, dst) in e.iter().zip(&frame) {
            let v: Vec<Elem> = src.iter().map(|&x| Elem(x)).collect();
            let img = ProjPoint::new(&f, &h.apply_vec(&f, &v)).unwrap();
            assert_eq!(img, ProjPoint::new(&f, dst).unwrap());
        }
    }
}
