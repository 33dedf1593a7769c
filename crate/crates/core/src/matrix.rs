//! Block-graded matrices in M(n|m): the diagonal blocks are even, the
//! off-diagonal blocks odd.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: usize) -> Parity {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

/// `(-1)^(a·b)` for two parities.
pub fn koszul(a: Parity, b: Parity) -> bool {
    a.is_odd() && b.is_odd()
}

/// An element of M(n|m) with exact entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedMatrix {
    n: usize,
    m: usize,
    data: Vec<Scalar>,
}

impl GradedMatrix {
    pub fn zero(n: usize, m: usize) -> GradedMatrix {
        GradedMatrix { n, m, data: vec![Scalar::ZERO; (n + m) * (n + m)] }
    }

    pub fn identity(n: usize, m: usize) -> GradedMatrix {
        let mut out = Self::zero(n, m);
        for i in 0..n + m {
            out.set(i, i, Scalar::ONE);
        }
        out
    }

    /// The elementary matrix `e_ij` (0-based indices).
    pub fn unit(n: usize, m: usize, i: usize, j: usize) -> GradedMatrix {
        let mut out = Self::zero(n, m);
        out.set(i, j, Scalar::ONE);
        out
    }

    pub fn from_rows(n: usize, m: usize, rows: Vec<Vec<Scalar>>) -> Result<GradedMatrix> {
        let size = n + m;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::ShapeMismatch(format!("expected {size}x{size} entries for M({n}|{m})")));
        }
        Ok(GradedMatrix { n, m, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(n: usize, m: usize, rows: &[&[i64]]) -> Result<GradedMatrix> {
        Self::from_rows(n, m, rows.iter().map(|r| r.iter().map(|&v| Scalar::int(v)).collect()).collect())
    }

    pub fn diagonal(n: usize, m: usize, diag: &[Scalar]) -> Result<GradedMatrix> {
        if diag.len() != n + m {
            return Err(Error::ShapeMismatch(format!("diagonal of length {}", diag.len())));
        }
        let mut out = Self::zero(n, m);
        for (i, v) in diag.iter().enumerate() {
            out.set(i, i, v.clone());
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.n + self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let s = self.size();
        self.data[i * s + j] = v;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        let s = self.size();
        &mut self.data[i * s + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.data.chunks(self.size()).map(|r| r.to_vec()).collect()
    }

    /// Parity of the matrix-unit position `(i, j)`.
    pub fn position_parity(&self, i: usize, j: usize) -> Parity {
        Parity::from_bit(usize::from(i >= self.n) + usize::from(j >= self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn same_shape(&self, other: &GradedMatrix) -> bool {
        self.n == other.n && self.m == other.m
    }

    fn check_shape(&self, other: &GradedMatrix) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("M({}|{}) vs M({}|{})", self.n, self.m, other.n, other.m)))
        }
    }

    /// Splits into the block-diagonal (even) and block-off-diagonal (odd) parts.
    pub fn parity_decompose(&self) -> (GradedMatrix, GradedMatrix) {
        let mut even = Self::zero(self.n, self.m);
        let mut odd = Self::zero(self.n, self.m);
        let s = self.size();
        for i in 0..s {
            for j in 0..s {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                match self.position_parity(i, j) {
                    Parity::Even => even.set(i, j, v.clone()),
                    Parity::Odd => odd.set(i, j, v.clone()),
                }
            }
        }
        (even, odd)
    }

    pub fn parity_part(&self, parity: Parity) -> GradedMatrix {
        let (even, odd) = self.parity_decompose();
        match parity {
            Parity::Even => even,
            Parity::Odd => odd,
        }
    }

    /// The parity of a homogeneous matrix; `None` for mixed ones. Zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let s = self.size();
        let mut seen = [false, false];
        for i in 0..s {
            for j in 0..s {
                if !self.get(i, j).is_zero() {
                    seen[self.position_parity(i, j).bit()] = true;
                }
            }
        }
        match seen {
            [_, false] => Some(Parity::Even),
            [false, true] => Some(Parity::Odd),
            [true, true] => None,
        }
    }

    pub fn is_homogeneous(&self, parity: Parity) -> bool {
        self.is_zero() || self.parity() == Some(parity)
    }

    pub fn scale(&self, c: &Scalar) -> GradedMatrix {
        if c.is_zero() {
            return Self::zero(self.n, self.m);
        }
        GradedMatrix { n: self.n, m: self.m, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn add_scaled(&mut self, other: &GradedMatrix, c: &Scalar) {
        debug_assert!(self.same_shape(other));
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += &(b * c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &GradedMatrix) {
        debug_assert!(self.same_shape(other));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.size()).map(|i| self.get(i, i).clone()).sum()
    }

    /// `Tr M₁ − Tr M₄`.
    pub fn supertrace(&self) -> Scalar {
        let upper: Scalar = (0..self.n).map(|i| self.get(i, i).clone()).sum();
        let lower: Scalar = (self.n..self.size()).map(|i| self.get(i, i).clone()).sum();
        &upper - &lower
    }

    pub fn transpose(&self) -> GradedMatrix {
        let s = self.size();
        let mut out = Self::zero(self.n, self.m);
        for i in 0..s {
            for j in 0..s {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn matmul(&self, other: &GradedMatrix) -> GradedMatrix {
        debug_assert!(self.same_shape(other));
        let s = self.size();
        let mut out = Self::zero(self.n, self.m);
        for i in 0..s {
            for k in 0..s {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..s {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.entry_mut(i, j) += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Exact inverse by Gauss–Jordan elimination, if one exists.
    pub fn inverse(&self) -> Option<GradedMatrix> {
        let s = self.size();
        let rows = crate::linalg::DenseMatrix::from_fn(s, s, |i, j| self.get(i, j).clone());
        let inv = rows.inverse()?;
        let mut out = Self::zero(self.n, self.m);
        for i in 0..s {
            for j in 0..s {
                out.set(i, j, inv.get(i, j).clone());
            }
        }
        Some(out)
    }

    /// Canonical body map: the larger diagonal block.
    pub fn body(&self) -> Result<BodyMatrix> {
        if self.n == self.m {
            return Err(Error::EqualBlocks(self.n));
        }
        let (offset, size) = if self.n > self.m { (0, self.n) } else { (self.n, self.m) };
        let mut out = BodyMatrix::zero(size);
        for i in 0..size {
            for j in 0..size {
                out.set(i, j, self.get(offset + i, offset + j).clone());
            }
        }
        Ok(out)
    }
}

/// Right inverse of the body map: places `body` in the larger block and
/// `Tr(body)/ñ` times the identity in the smaller one.
pub fn embed_body(body: &BodyMatrix, n: usize, m: usize) -> Result<GradedMatrix> {
    if n == m {
        return Err(Error::EqualBlocks(n));
    }
    let big = n.max(m);
    if body.size() != big {
        return Err(Error::ShapeMismatch(format!("body matrix of size {} for M({n}|{m})", body.size())));
    }
    let (offset, other_offset, small) = if n > m { (0, n, m) } else { (n, 0, n) };
    let fill = &body.trace() / &Scalar::int(big as i64);
    let mut out = GradedMatrix::zero(n, m);
    for i in 0..big {
        for j in 0..big {
            out.set(offset + i, offset + j, body.get(i, j).clone());
        }
    }
    for i in 0..small {
        out.set(other_offset + i, other_offset + i, fill.clone());
    }
    Ok(out)
}

fn bracket(a: &GradedMatrix, b: &GradedMatrix, anti: bool) -> Result<GradedMatrix> {
    a.check_shape(b)?;
    let (a0, a1) = a.parity_decompose();
    let (b0, b1) = b.parity_decompose();
    let mut out = GradedMatrix::zero(a.n, a.m);
    for (x, px) in [(&a0, Parity::Even), (&a1, Parity::Odd)] {
        if x.is_zero() {
            continue;
        }
        for (y, py) in [(&b0, Parity::Even), (&b1, Parity::Odd)] {
            if y.is_zero() {
                continue;
            }
            // MM' ∓ (−1)^{M̄M̄'} M'M
            let minus = koszul(px, py) == anti;
            out.add_assign(&x.matmul(y));
            out.add_scaled(&y.matmul(x), &Scalar::sign(minus));
        }
    }
    Ok(out)
}

/// Graded commutator `MM' − (−1)^{M̄M̄'}M'M`, extended bilinearly.
pub fn graded_commutator(a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
    bracket(a, b, false)
}

/// Graded anticommutator `MM' + (−1)^{M̄M̄'}M'M`, extended bilinearly.
pub fn graded_anticommutator(a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
    bracket(a, b, true)
}

pub fn supertrace(m: &GradedMatrix) -> Scalar {
    m.supertrace()
}

impl<'a> Add<&'a GradedMatrix> for &'a GradedMatrix {
    type Output = GradedMatrix;
    fn add(self, rhs: &GradedMatrix) -> GradedMatrix {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<'a> Sub<&'a GradedMatrix> for &'a GradedMatrix {
    type Output = GradedMatrix;
    fn sub(self, rhs: &GradedMatrix) -> GradedMatrix {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::ONE);
        out
    }
}

impl<'a> Mul<&'a GradedMatrix> for &'a GradedMatrix {
    type Output = GradedMatrix;
    fn mul(self, rhs: &GradedMatrix) -> GradedMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &GradedMatrix {
    type Output = GradedMatrix;
    fn neg(self) -> GradedMatrix {
        self.scale(&-Scalar::ONE)
    }
}

impl fmt::Debug for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({}|{})", self.n, self.m)?;
        f.debug_list().entries(self.rows()).finish()
    }
}

/// A plain square matrix over the body algebra M(ñ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BodyMatrix {
    size: usize,
    data: Vec<Scalar>,
}

impl BodyMatrix {
    pub fn zero(size: usize) -> BodyMatrix {
        BodyMatrix { size, data: vec![Scalar::ZERO; size * size] }
    }

    pub fn identity(size: usize) -> BodyMatrix {
        let mut out = Self::zero(size);
        for i in 0..size {
            out.set(i, i, Scalar::ONE);
        }
        out
    }

    pub fn unit(size: usize, i: usize, j: usize) -> BodyMatrix {
        let mut out = Self::zero(size);
        out.set(i, j, Scalar::ONE);
        out
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.size + j] = v;
    }

    pub fn trace(&self) -> Scalar {
        (0..self.size).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn matmul(&self, other: &BodyMatrix) -> BodyMatrix {
        self.to_graded().matmul(&other.to_graded()).into()
    }

    /// The same matrix viewed in the trivially graded algebra M(ñ|0).
    pub fn to_graded(&self) -> GradedMatrix {
        GradedMatrix { n: self.size, m: 0, data: self.data.clone() }
    }
}

impl From<GradedMatrix> for BodyMatrix {
    /// Forgets the grading of a matrix (all entries kept).
    fn from(g: GradedMatrix) -> BodyMatrix {
        BodyMatrix { size: g.size(), data: g.data }
    }
}

impl fmt::Debug for BodyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self.data.chunks(self.size.max(1)).collect();
        write!(f, "M({})", self.size)?;
        f.debug_list().entries(rows).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> GradedMatrix {
        GradedMatrix::unit(2, 1, i - 1, j - 1)
    }

    #[test]
    fn parity_split_examples() {
        let one = GradedMatrix::identity(2, 1);
        assert_eq!(one.parity_decompose(), (one.clone(), GradedMatrix::zero(2, 1)));
        assert_eq!(e(1, 3).parity_decompose(), (GradedMatrix::zero(2, 1), e(1, 3)));
        let mixed = &e(1, 1) + &e(1, 3);
        assert_eq!(mixed.parity_decompose(), (e(1, 1), e(1, 3)));
        assert_eq!(mixed.parity(), None);
        assert_eq!(e(3, 2).parity(), Some(Parity::Odd));
    }

    #[test]
    fn brackets_on_elementary_matrices() {
        let c = graded_commutator(&e(1, 3), &e(3, 1)).unwrap();
        assert_eq!(c, &e(1, 1) + &e(3, 3));
        let c = graded_commutator(&e(1, 2), &e(2, 1)).unwrap();
        assert_eq!(c, &e(1, 1) - &e(2, 2));
        let a = graded_anticommutator(&e(1, 3), &e(3, 1)).unwrap();
        assert_eq!(a, &e(1, 1) - &e(3, 3));
        let a = graded_anticommutator(&e(1, 2), &e(2, 1)).unwrap();
        assert_eq!(a, &e(1, 1) + &e(2, 2));
        let one = GradedMatrix::identity(2, 1);
        let m = &(&e(1, 2) + &e(3, 1)) + &e(2, 3);
        assert!(graded_commutator(&one, &m).unwrap().is_zero());
        assert_eq!(graded_anticommutator(&one, &e(1, 2)).unwrap(), e(1, 2).scale(&Scalar::int(2)));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = GradedMatrix::identity(2, 1);
        let b = GradedMatrix::identity(1, 2);
        assert!(matches!(graded_commutator(&a, &b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn supertrace_examples() {
        assert_eq!(GradedMatrix::identity(2, 1).supertrace(), Scalar::ONE);
        assert_eq!(e(1, 1).supertrace(), Scalar::ONE);
        assert_eq!(e(3, 3).supertrace(), -Scalar::ONE);
    }

    #[test]
    fn body_and_embedding() {
        let one = GradedMatrix::identity(2, 1);
        assert_eq!(one.body().unwrap(), BodyMatrix::identity(2));
        assert!(e(1, 3).body().unwrap().is_zero());
        let d = GradedMatrix::diagonal(1, 2, &[Scalar::int(5), Scalar::int(7), Scalar::int(11)]).unwrap();
        let b = d.body().unwrap();
        assert_eq!(b.get(0, 0), &Scalar::int(7));
        assert_eq!(b.get(1, 1), &Scalar::int(11));
        assert!(GradedMatrix::identity(2, 2).body().is_err());

        assert_eq!(embed_body(&BodyMatrix::identity(2), 2, 1).unwrap(), one);
        let emb = embed_body(&BodyMatrix::unit(2, 0, 0), 2, 1).unwrap();
        assert_eq!(emb, GradedMatrix::diagonal(2, 1, &[Scalar::ONE, Scalar::ZERO, Scalar::ratio(1, 2)]).unwrap());
        assert!(embed_body(&BodyMatrix::identity(3), 2, 1).is_err());
    }
}
