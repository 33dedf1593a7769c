//! Exact linear algebra: sparse incremental echelon forms over any field,
//! dense Gauss–Jordan inverses, fraction-free Bareiss ranks over the
//! integers, and ranks modulo word-size primes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::{Rational, Scalar};

/// Minimal field interface used by the echelon code.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::ZERO
    }
    fn one() -> Self {
        Scalar::ONE
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Integers modulo the prime `P` (`P < 2^31`, `P ≡ 1 mod 4` so that `i` has an image).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }

    /// A square root of −1.
    pub fn sqrt_minus_one() -> Self {
        (2..P).map(|c| Fp::<P>(c).pow((P - 1) / 4)).find(|r| r.0 * r.0 % P == P - 1).expect("P must be 1 mod 4")
    }

    fn from_bigint(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("reduced residue fits"))
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        if let Some((num, den)) = q.as_small() {
            let den = Fp::<P>(den.rem_euclid(P as i64) as u64);
            if den.0 == 0 {
                return None;
            }
            return Some(Fp(num.rem_euclid(P as i64) as u64).mul(&den.inv()));
        }
        let den = Self::from_bigint(&q.denom());
        if den.0 == 0 {
            return None;
        }
        Some(Self::from_bigint(&q.numer()).mul(&den.inv()))
    }

    /// Image of a Gaussian rational, given the chosen image of `i`.
    pub fn from_scalar(s: &Scalar, i: Self) -> Option<Self> {
        let re = Self::from_rational(&s.re)?;
        if s.im.is_zero() {
            return Some(re);
        }
        Some(re.add(&Self::from_rational(&s.im)?.mul(&i)))
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp((self.0 + other.0) % P)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp((self.0 + P - other.0) % P)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(self.0 * other.0 % P)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }
}

/// A sparse vector: `(index, value)` pairs, strictly increasing indices, no zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

/// `x + c·y` for sparse vectors.
pub fn sparse_axpy<F: Field>(x: &[(usize, F)], c: &F, y: &[(usize, F)]) -> SparseVec<F> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let xi = x.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let yj = y.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if xi < yj {
            out.push(x[i].clone());
            i += 1;
        } else if yj < xi {
            out.push((yj, c.mul(&y[j].1)));
            j += 1;
        } else {
            let v = x[i].1.add(&c.mul(&y[j].1));
            if !v.is_zero() {
                out.push((xi, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally built row echelon form. Every stored row is keyed by its
/// leading column and normalised so that the leading entry is one.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pivots: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { pivots: BTreeMap::new() }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `row` against the stored pivots until its leading column is free.
    pub fn reduce(&self, mut row: SparseVec<F>) -> SparseVec<F> {
        let mut start = 0;
        while start < row.len() {
            let (col, val) = (row[start].0, row[start].1.clone());
            match self.pivots.get(&col) {
                Some(p) => {
                    let head: SparseVec<F> = row[..start].to_vec();
                    let tail = sparse_axpy(&row[start..], &val.neg(), p);
                    row = head;
                    row.extend(tail);
                }
                None => start += 1,
            }
        }
        row
    }

    /// Reduces only until the leading entry is not a pivot column.
    fn reduce_leading(&self, mut row: SparseVec<F>) -> SparseVec<F> {
        while let Some((col, val)) = row.first().cloned() {
            match self.pivots.get(&col) {
                Some(p) => row = sparse_axpy(&row, &val.neg(), p),
                None => break,
            }
        }
        row
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: SparseVec<F>) -> bool {
        let row = self.reduce_leading(row);
        match row.first() {
            None => false,
            Some((col, lead)) => {
                let col = *col;
                let inv = lead.inv();
                let row = row.into_iter().map(|(c, v)| (c, v.mul(&inv))).collect();
                self.pivots.insert(col, row);
                true
            }
        }
    }

    /// Whether `row` lies in the span of the inserted rows.
    pub fn contains(&self, row: SparseVec<F>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Converts to reduced row echelon form (no pivot column appears in
    /// another pivot row).
    pub fn into_reduced(mut self) -> ReducedEchelon<F> {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &col in &cols {
            let row = self.pivots.remove(&col).expect("pivot present");
            let head = vec![row[0].clone()];
            let rest = self.reduce(row[1..].to_vec());
            let mut full = head;
            full.extend(rest);
            self.pivots.insert(col, full);
        }
        ReducedEchelon { pivots: self.pivots }
    }
}

/// Reduced row echelon form of a matrix.
#[derive(Clone, Debug)]
pub struct ReducedEchelon<F: Field> {
    pivots: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> ReducedEchelon<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec<F>)> {
        self.pivots.iter().map(|(c, r)| (*c, r))
    }

    /// Basis of the null space of the matrix with `ncols` columns whose row
    /// space this is. One vector per free column, with a one in that column.
    pub fn nullspace(&self, ncols: usize) -> Vec<SparseVec<F>> {
        let mut by_free: BTreeMap<usize, SparseVec<F>> =
            (0..ncols).filter(|c| !self.pivots.contains_key(c)).map(|c| (c, Vec::new())).collect();
        for (&lead, row) in &self.pivots {
            for (c, v) in &row[1..] {
                by_free.get_mut(c).expect("non-pivot column").push((lead, v.neg()));
            }
        }
        by_free
            .into_iter()
            .map(|(free, mut v)| {
                v.push((free, F::one()));
                v.sort_by_key(|e| e.0);
                v
            })
            .collect()
    }
}

/// Rank of a sparse matrix given by rows.
pub fn sparse_rank<F: Field>(rows: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// Null space basis of a sparse matrix given by rows.
pub fn sparse_nullspace<F: Field>(rows: impl IntoIterator<Item = SparseVec<F>>, ncols: usize) -> Vec<SparseVec<F>> {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    ech.into_reduced().nullspace(ncols)
}

/// Some solution of `A x = b`, with `A` given by rows, or `None` if inconsistent.
pub fn sparse_solve<F: Field>(rows: &[SparseVec<F>], rhs: &[F], ncols: usize) -> Option<Vec<F>> {
    // Augment with the right-hand side as an extra column.
    let mut ech = Echelon::new();
    for (row, b) in rows.iter().zip(rhs) {
        let mut r = row.clone();
        if !b.is_zero() {
            r.push((ncols, b.clone()));
        }
        ech.insert(r);
    }
    let red = ech.into_reduced();
    let mut x = vec![F::zero(); ncols];
    for (lead, row) in red.rows() {
        if lead == ncols {
            return None;
        }
        if let Some((c, v)) = row.last() {
            if *c == ncols {
                x[lead] = v.clone();
            }
        }
    }
    Some(x)
}

/// Row-major dense matrix of exact scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, size, |i, j| if i == j { Scalar::ONE } else { Scalar::ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn sparse_rows(&self) -> Vec<SparseVec<Scalar>> {
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect()
            })
            .collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cell = &mut out.data[i * other.cols + j];
                        *cell += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn rank(&self) -> usize {
        sparse_rank(self.sparse_rows())
    }

    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        sparse_nullspace(self.sparse_rows(), self.cols).into_iter().map(|v| densify(&v, self.cols)).collect()
    }

    /// Gauss–Jordan inverse, `None` when singular.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = DenseMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = a.get(col, col).recip();
            a.scale_row(col, &scale);
            inv.scale_row(col, &scale);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                let f = -f;
                a.add_row_multiple(r, col, &f);
                inv.add_row_multiple(r, col, &f);
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = &self.data[r * self.cols + j] * c;
            self.data[r * self.cols + j] = v;
        }
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, c: &Scalar) {
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let v = s * c;
            self.data[target * self.cols + j] += &v;
        }
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows).finish()
    }
}

pub fn densify<F: Field>(v: &[(usize, F)], len: usize) -> Vec<F> {
    let mut out = vec![F::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn sparsify(v: &[Scalar]) -> SparseVec<Scalar> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination. Every
/// division is exact, so entries stay integral and bounded by minors.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Scales each row of a rational matrix by the lcm of its denominators.
/// Only real matrices are accepted.
pub fn integer_rows(rows: &[Vec<Scalar>]) -> Option<Vec<Vec<BigInt>>> {
    rows.iter()
        .map(|row| {
            if row.iter().any(|v| !v.is_real()) {
                return None;
            }
            let lcm = row.iter().fold(BigInt::from(1), |acc, v| acc.lcm(&v.re.denom()));
            Some(row.iter().map(|v| v.re.numer() * (&lcm / v.re.denom())).collect())
        })
        .collect()
}

/// Bareiss rank of a rational matrix (rows are integer-scaled first).
pub fn fraction_free_rank(rows: &[Vec<Scalar>]) -> Option<usize> {
    Some(bareiss_rank(integer_rows(rows)?))
}

const PRIMES: [u64; 3] = [2147483629, 2147483549, 2147483497];

fn rank_mod<const P: u64>(rows: &[SparseVec<Scalar>]) -> Option<usize> {
    let i = Fp::<P>::sqrt_minus_one();
    let mut ech = Echelon::<Fp<P>>::new();
    for row in rows {
        let mut r = Vec::with_capacity(row.len());
        for (c, v) in row {
            let x = Fp::<P>::from_scalar(v, i)?;
            if !x.is_zero() {
                r.push((*c, x));
            }
        }
        ech.insert(r);
    }
    Some(ech.rank())
}

/// Ranks of the matrix reduced modulo several primes. Each is a lower bound
/// for the rank over ℚ(i); entries are `None` when a denominator vanishes.
pub fn modular_ranks(rows: &[SparseVec<Scalar>]) -> Vec<Option<usize>> {
    vec![rank_mod::<{ PRIMES[0] }>(rows), rank_mod::<{ PRIMES[1] }>(rows), rank_mod::<{ PRIMES[2] }>(rows)]
}

/// The common modular rank if every prime agrees.
pub fn agreed_modular_rank(rows: &[SparseVec<Scalar>]) -> Option<usize> {
    let ranks = modular_ranks(rows);
    let first = ranks[0]?;
    ranks.iter().all(|r| *r == Some(first)).then_some(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::int(v)
    }

    #[test]
    fn primes_are_prime_and_one_mod_four() {
        for p in PRIMES {
            assert_eq!(p % 4, 1);
            let mut d = 2;
            while d * d <= p {
                assert_ne!(p % d, 0, "{p} divisible by {d}");
                d += 1;
            }
        }
        let i = Fp::<{ PRIMES[0] }>::sqrt_minus_one();
        assert_eq!(i.mul(&i), Fp(PRIMES[0] - 1));
    }

    #[test]
    fn rank_and_nullspace_small() {
        let a = DenseMatrix::from_fn(3, 4, |i, j| s((i * 4 + j) as i64));
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        let x = DenseMatrix::from_fn(4, 2, |i, j| ns[j][i].clone());
        let prod = a.matmul(&x);
        assert!(prod.data.iter().all(Scalar::is_zero));
    }

    #[test]
    fn inverse_round_trip() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| s(((i + 1) * (j + 2) + i * i) as i64 % 7));
        let inv = a.inverse().expect("invertible");
        assert_eq!(a.matmul(&inv), DenseMatrix::identity(3));
        let sing = DenseMatrix::from_fn(2, 2, |_, _| s(1));
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let rows = vec![vec![(0, s(1)), (1, s(1))], vec![(1, s(2))]];
        let x = sparse_solve(&rows, &[s(3), s(4)], 2).unwrap();
        assert_eq!(x, vec![s(1), s(2)]);
        let rows = vec![vec![(0, s(1))], vec![(0, s(2))]];
        assert!(sparse_solve(&rows, &[s(1), s(3)], 1).is_none());
    }

    #[test]
    fn bareiss_matches_echelon() {
        let dense: Vec<Vec<Scalar>> =
            (0..5).map(|i| (0..6).map(|j| Scalar::ratio(((i * j) % 5) as i64 - 2, (j + 1) as i64)).collect()).collect();
        let ech = sparse_rank(dense.iter().map(|r| sparsify(r)));
        assert_eq!(fraction_free_rank(&dense), Some(ech));
        let sparse: Vec<_> = dense.iter().map(|r| sparsify(r)).collect();
        assert_eq!(agreed_modular_rank(&sparse), Some(ech));
    }

    #[test]
    fn gaussian_entries_reduce_modulo_primes() {
        // [[1, i], [i, -1]] has rank one.
        let rows = vec![vec![(0, s(1)), (1, Scalar::i())], vec![(0, Scalar::i()), (1, s(-1))]];
        assert_eq!(sparse_rank(rows.clone()), 1);
        assert_eq!(agreed_modular_rank(&rows), Some(1));
    }
}
