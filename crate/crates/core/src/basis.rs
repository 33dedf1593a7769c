//! Homogeneous bases of sl(n|m) and their structure constants.
//!
//! Canonical ordering (0-based positions, `n' = n² + m² − 1` even elements
//! first):
//!
//! 1. upper-block off-diagonal units, pairs `i < j` in lexicographic order,
//!    `e_ij` before `e_ji`;
//! 2. upper-block Cartan elements `e_kk − e_{k+1,k+1}`;
//! 3. the supertrace-free central-block element `m·1_n + n·1_m` (only when
//!    both blocks are non-empty);
//! 4. lower-block off-diagonal units and Cartan elements, same pattern;
//! 5. odd units of the upper-right block `e_{i,n+j}`, row-major;
//! 6. odd units of the lower-left block `e_{n+j,i}`, row-major.
//!
//! For M(2|1) this gives `E₁ = e₁₂, E₂ = e₂₁, E₃ = e₁₁ − e₂₂,
//! E₄ = e₁₁ + e₂₂ + 2e₃₃, E₅ = e₁₃, E₆ = e₂₃, E₇ = e₃₁, E₈ = e₃₂`
//! (1-based labels).

use crate::error::{Error, Result};
use crate::linalg::{sparse_rank, sparsify, DenseMatrix, SparseVec};
use crate::matrix::{graded_anticommutator, graded_commutator, GradedMatrix, Parity};
use crate::scalar::Scalar;

/// An ordered homogeneous basis `E_A` of sl(n|m), even elements first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousBasis {
    n: usize,
    m: usize,
    elements: Vec<GradedMatrix>,
}

pub(crate) fn check_geometric(n: usize, m: usize) -> Result<()> {
    if n + m < 2 {
        return Err(Error::TooSmall { n, m });
    }
    if n == m {
        return Err(Error::EqualBlocks(n));
    }
    Ok(())
}

fn block_sl(n: usize, m: usize, offset: usize, size: usize) -> Vec<GradedMatrix> {
    let mut out = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            out.push(GradedMatrix::unit(n, m, offset + i, offset + j));
            out.push(GradedMatrix::unit(n, m, offset + j, offset + i));
        }
    }
    for k in 0..size.saturating_sub(1) {
        let mut h = GradedMatrix::unit(n, m, offset + k, offset + k);
        h.set(offset + k + 1, offset + k + 1, -Scalar::ONE);
        out.push(h);
    }
    out
}

fn central_element(n: usize, m: usize) -> GradedMatrix {
    let mut diag = vec![Scalar::int(m as i64); n];
    diag.extend(vec![Scalar::int(n as i64); m]);
    GradedMatrix::diagonal(n, m, &diag).expect("diagonal length")
}

fn odd_units(n: usize, m: usize) -> Vec<GradedMatrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..m {
            out.push(GradedMatrix::unit(n, m, i, n + j));
        }
    }
    for j in 0..m {
        for i in 0..n {
            out.push(GradedMatrix::unit(n, m, n + j, i));
        }
    }
    out
}

impl HomogeneousBasis {
    /// The canonical basis described in the module documentation.
    pub fn canonical(n: usize, m: usize) -> Result<HomogeneousBasis> {
        check_geometric(n, m)?;
        let mut elements = block_sl(n, m, 0, n);
        if n > 0 && m > 0 {
            elements.push(central_element(n, m));
        }
        elements.extend(block_sl(n, m, n, m));
        elements.extend(odd_units(n, m));
        Ok(HomogeneousBasis { n, m, elements })
    }

    /// Reordering of the canonical basis whose first `ñ² − 1` elements span
    /// the copy of sl(ñ) inside the larger diagonal block.
    pub fn body_adapted(n: usize, m: usize) -> Result<HomogeneousBasis> {
        check_geometric(n, m)?;
        if n > m {
            return Self::canonical(n, m);
        }
        let mut elements = block_sl(n, m, n, m);
        if n > 0 {
            elements.push(central_element(n, m));
        }
        elements.extend(block_sl(n, m, 0, n));
        elements.extend(odd_units(n, m));
        Ok(HomogeneousBasis { n, m, elements })
    }

    /// Validates a user-supplied list: homogeneous, supertrace-free, even
    /// elements first, linearly independent and of the right count.
    pub fn from_elements(n: usize, m: usize, elements: Vec<GradedMatrix>) -> Result<HomogeneousBasis> {
        check_geometric(n, m)?;
        let dim = (n + m) * (n + m) - 1;
        if elements.len() != dim {
            return Err(Error::ShapeMismatch(format!(
                "sl({n}|{m}) needs {dim} basis elements, got {}",
                elements.len()
            )));
        }
        let n_even = n * n + m * m - 1;
        for (a, e) in elements.iter().enumerate() {
            if e.n() != n || e.m() != m {
                return Err(Error::ShapeMismatch(format!("element {} has the wrong shape", a + 1)));
            }
            let want = if a < n_even { Parity::Even } else { Parity::Odd };
            if e.is_zero() || !e.is_homogeneous(want) {
                return Err(Error::ParityMismatch(format!("element {} is not a nonzero {want:?} matrix", a + 1)));
            }
            if !e.supertrace().is_zero() {
                return Err(Error::ShapeMismatch(format!("element {} has nonzero supertrace", a + 1)));
            }
        }
        let rank = sparse_rank(elements.iter().map(|e| sparsify(e.entries())));
        if rank != dim {
            return Err(Error::Singular(format!("basis elements span only {rank} dimensions")));
        }
        Ok(HomogeneousBasis { n, m, elements })
    }

    /// The basis `g E_A g⁻¹` for an even invertible `g`.
    pub fn conjugated(&self, g: &GradedMatrix) -> Result<HomogeneousBasis> {
        if !g.same_shape(&self.elements[0]) {
            return Err(Error::ShapeMismatch("conjugating matrix has the wrong shape".into()));
        }
        if !g.is_homogeneous(Parity::Even) {
            return Err(Error::ParityMismatch("conjugating matrix must be even".into()));
        }
        let inv = g.inverse().ok_or_else(|| Error::Singular("conjugating matrix is not invertible".into()))?;
        let elements = self.elements.iter().map(|e| g.matmul(e).matmul(&inv)).collect();
        Self::from_elements(self.n, self.m, elements)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `n' + m' = (n + m)² − 1`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `n' = n² + m² − 1`.
    pub fn even_count(&self) -> usize {
        self.n * self.n + self.m * self.m - 1
    }

    /// `m' = 2nm`.
    pub fn odd_count(&self) -> usize {
        2 * self.n * self.m
    }

    /// Parity of `E_A` (0-based `a`).
    pub fn parity(&self, a: usize) -> Parity {
        if a < self.even_count() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn parities(&self) -> Vec<Parity> {
        (0..self.len()).map(|a| self.parity(a)).collect()
    }

    pub fn element(&self, a: usize) -> &GradedMatrix {
        &self.elements[a]
    }

    pub fn elements(&self) -> &[GradedMatrix] {
        &self.elements
    }

    /// Whether the first `ñ² − 1` elements live in the body block with
    /// supertrace-free (hence trace-free) body.
    pub fn is_body_adapted(&self) -> bool {
        let big = self.n.max(self.m);
        let offset = if self.n > self.m { 0 } else { self.n };
        let inside = |i: usize| i >= offset && i < offset + big;
        self.elements[..big * big - 1].iter().all(|e| {
            let s = e.size();
            (0..s).all(|i| (0..s).all(|j| e.get(i, j).is_zero() || (inside(i) && inside(j))))
        })
    }
}

/// Exact coordinates of arbitrary matrices in the basis `{E_A} ∪ {1}`.
#[derive(Clone, Debug)]
pub struct Expander {
    /// Row `r` of the inverse basis matrix, as a sparse vector over matrix entries.
    rows: Vec<SparseVec<Scalar>>,
}

impl Expander {
    fn new(basis: &HomogeneousBasis) -> Expander {
        let s = basis.n + basis.m;
        let size = s * s;
        let one = GradedMatrix::identity(basis.n, basis.m);
        let columns: Vec<&GradedMatrix> = basis.elements.iter().chain(std::iter::once(&one)).collect();
        let b = DenseMatrix::from_fn(size, size, |entry, col| columns[col].entries()[entry].clone());
        let inv = b.inverse().expect("basis together with the identity spans M(n|m)");
        let rows = (0..size).map(|r| sparsify(inv.row(r))).collect();
        Expander { rows }
    }

    /// Coordinates `(x_A, x_1)` with `M = Σ x_A E_A + x_1·1`.
    pub fn expand(&self, m: &GradedMatrix) -> (Vec<Scalar>, Scalar) {
        let entries = m.entries();
        let mut coords: Vec<Scalar> = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = Scalar::ZERO;
                for (k, v) in row {
                    let e = &entries[*k];
                    if !e.is_zero() {
                        acc += &(v * e);
                    }
                }
                acc
            })
            .collect();
        let identity = coords.pop().expect("identity coordinate");
        (coords, identity)
    }
}

/// Dense 3-index tensor `t[a][b][c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<Scalar>,
}

impl Tensor3 {
    fn zeros(dim: usize) -> Tensor3 {
        Tensor3 { dim, data: vec![Scalar::ZERO; dim * dim * dim] }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.data[(a * self.dim + b) * self.dim + c]
    }

    fn set(&mut self, a: usize, b: usize, c: usize, v: Scalar) {
        self.data[(a * self.dim + b) * self.dim + c] = v;
    }

    /// Nonzero entries as `(a, b, c, value)`, lexicographic.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let d = self.dim;
        let mut out = Vec::new();
        for (k, v) in self.data.iter().enumerate() {
            if !v.is_zero() {
                out.push((k / (d * d), (k / d) % d, k % d, v.clone()));
            }
        }
        out
    }

    /// Nonzero upper-index entries `c` for fixed lower indices `(a, b)`.
    pub fn fiber(&self, a: usize, b: usize) -> Vec<(usize, Scalar)> {
        let start = (a * self.dim + b) * self.dim;
        sparsify(&self.data[start..start + self.dim])
    }
}

/// Structure constants of a homogeneous basis:
/// `[E_A, E_B]_g = Σ c_AB^C E_C` and `{E_A, E_B}_g = Σ d_AB^C E_C + g_AB·1`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    basis: HomogeneousBasis,
    parities: Vec<Parity>,
    c: Tensor3,
    d: Tensor3,
    c_fibers: Vec<Vec<(usize, Scalar)>>,
    g: DenseMatrix,
    ginv: DenseMatrix,
    killing: DenseMatrix,
    killing_inv: DenseMatrix,
    expander: Expander,
}

impl StructureConstants {
    /// Expands every pairwise graded (anti)commutator exactly.
    pub fn compute(basis: &HomogeneousBasis) -> Result<StructureConstants> {
        let dim = basis.len();
        let expander = Expander::new(basis);
        let mut c = Tensor3::zeros(dim);
        let mut d = Tensor3::zeros(dim);
        let mut g = DenseMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                let ea = basis.element(a);
                let eb = basis.element(b);
                let (cc, ident) = expander.expand(&graded_commutator(ea, eb)?);
                if !ident.is_zero() {
                    return Err(Error::Singular(format!("commutator of E{} and E{} leaves sl(n|m)", a + 1, b + 1)));
                }
                for (k, v) in cc.into_iter().enumerate() {
                    c.set(a, b, k, v);
                }
                let (dd, gg) = expander.expand(&graded_anticommutator(ea, eb)?);
                for (k, v) in dd.into_iter().enumerate() {
                    d.set(a, b, k, v);
                }
                g.set(a, b, gg);
            }
        }
        let ginv = g.inverse().ok_or_else(|| Error::Singular("metric g is degenerate".into()))?;
        let nm = basis.n as i64 - basis.m as i64;
        let factor = Scalar::int(nm * nm);
        let killing = DenseMatrix::from_fn(dim, dim, |a, b| g.get(a, b) * &factor);
        let killing_inv = killing.inverse().ok_or_else(|| Error::Singular("Killing form is degenerate".into()))?;
        let c_fibers = (0..dim * dim).map(|k| c.fiber(k / dim, k % dim)).collect();
        Ok(StructureConstants {
            basis: basis.clone(),
            parities: basis.parities(),
            c,
            d,
            c_fibers,
            g,
            ginv,
            killing,
            killing_inv,
            expander,
        })
    }

    pub fn canonical(n: usize, m: usize) -> Result<StructureConstants> {
        Self::compute(&HomogeneousBasis::canonical(n, m)?)
    }

    pub fn basis(&self) -> &HomogeneousBasis {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn m(&self) -> usize {
        self.basis.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn even_count(&self) -> usize {
        self.basis.even_count()
    }

    pub fn parity(&self, a: usize) -> Parity {
        self.parities[a]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    /// `c_AB^C`.
    pub fn c(&self, a: usize, b: usize, c: usize) -> &Scalar {
        self.c.get(a, b, c)
    }

    /// Nonzero `c_AB^C` for fixed `A, B`.
    pub fn c_fiber(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.c_fibers[a * self.dim() + b]
    }

    /// `d_AB^C`.
    pub fn d(&self, a: usize, b: usize, c: usize) -> &Scalar {
        self.d.get(a, b, c)
    }

    pub fn c_tensor(&self) -> &Tensor3 {
        &self.c
    }

    pub fn d_tensor(&self) -> &Tensor3 {
        &self.d
    }

    pub fn g(&self, a: usize, b: usize) -> &Scalar {
        self.g.get(a, b)
    }

    pub fn g_matrix(&self) -> &DenseMatrix {
        &self.g
    }

    /// `g^AB`, the inverse matrix of `g_AB`.
    pub fn ginv(&self, a: usize, b: usize) -> &Scalar {
        self.ginv.get(a, b)
    }

    pub fn ginv_matrix(&self) -> &DenseMatrix {
        &self.ginv
    }

    /// `K_AB = (n − m)² g_AB`.
    pub fn killing(&self) -> &DenseMatrix {
        &self.killing
    }

    pub fn killing_inv(&self) -> &DenseMatrix {
        &self.killing_inv
    }

    /// `(n − m)²` as a scalar.
    pub fn nm_squared(&self) -> Scalar {
        let nm = self.n() as i64 - self.m() as i64;
        Scalar::int(nm * nm)
    }

    /// Coordinates of `M` in `{E_A} ∪ {1}`.
    pub fn expand(&self, m: &GradedMatrix) -> (Vec<Scalar>, Scalar) {
        self.expander.expand(m)
    }

    /// `Σ x_A E_A`.
    pub fn combine(&self, coords: &[Scalar]) -> GradedMatrix {
        let mut out = GradedMatrix::zero(self.n(), self.m());
        for (x, e) in coords.iter().zip(self.basis.elements()) {
            out.add_scaled(e, x);
        }
        out
    }
}

/// `ad E (M) = [E, M]_g`.
pub fn adjoint_action(e: &GradedMatrix, m: &GradedMatrix) -> Result<GradedMatrix> {
    graded_commutator(e, m)
}

/// Ranks of `E ↦ ad E` on the even and odd parts of the basis, computed
/// from the action on all matrix units. Equal to `(n', m')` exactly when ad
/// is injective on sl(n|m).
pub fn derivation_dimension(basis: &HomogeneousBasis) -> (usize, usize) {
    let (n, m) = (basis.n, basis.m);
    let s = n + m;
    let image = |e: &GradedMatrix| -> SparseVec<Scalar> {
        let mut v = Vec::new();
        for i in 0..s {
            for j in 0..s {
                let ad = graded_commutator(e, &GradedMatrix::unit(n, m, i, j)).expect("same shape");
                v.extend(ad.entries().iter().cloned());
            }
        }
        sparsify(&v)
    };
    let (even, odd): (Vec<_>, Vec<_>) =
        basis.elements().iter().enumerate().partition(|(a, _)| basis.parity(*a) == Parity::Even);
    let even_rank = sparse_rank(even.into_iter().map(|(_, e)| image(e)));
    let odd_rank = sparse_rank(odd.into_iter().map(|(_, e)| image(e)));
    (even_rank, odd_rank)
}

/// Null space of `M ↦ ([E_A, M]_g)_A` over all of M(n|m): the graded center.
pub fn graded_center(basis: &HomogeneousBasis) -> Vec<GradedMatrix> {
    let (n, m) = (basis.n, basis.m);
    let s = n + m;
    let units: Vec<GradedMatrix> = (0..s * s).map(|k| GradedMatrix::unit(n, m, k / s, k % s)).collect();
    let images: Vec<Vec<Scalar>> = units
        .iter()
        .map(|u| {
            basis
                .elements()
                .iter()
                .flat_map(|e| graded_commutator(e, u).expect("same shape").entries().to_vec())
                .collect()
        })
        .collect();
    // Columns are the matrix units, rows the output coordinates.
    let rows = images[0].len();
    let a = DenseMatrix::from_fn(rows, s * s, |r, col| images[col][r].clone());
    a.nullspace()
        .into_iter()
        .map(|v| {
            let mut out = GradedMatrix::zero(n, m);
            for (k, x) in v.into_iter().enumerate() {
                out.set(k / s, k % s, x);
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_two_one_elements() {
        let b = HomogeneousBasis::canonical(2, 1).unwrap();
        let e = |i: usize, j: usize| GradedMatrix::unit(2, 1, i - 1, j - 1);
        assert_eq!(b.len(), 8);
        assert_eq!(b.element(0), &e(1, 2));
        assert_eq!(b.element(1), &e(2, 1));
        assert_eq!(b.element(2), &(&e(1, 1) - &e(2, 2)));
        let e4 = GradedMatrix::diagonal(2, 1, &[Scalar::ONE, Scalar::ONE, Scalar::int(2)]).unwrap();
        assert_eq!(b.element(3), &e4);
        assert_eq!(b.element(4), &e(1, 3));
        assert_eq!(b.element(5), &e(2, 3));
        assert_eq!(b.element(6), &e(3, 1));
        assert_eq!(b.element(7), &e(3, 2));
    }

    #[test]
    fn sizes_and_rejections() {
        for (n, m, ev, od) in [(2, 1, 4, 4), (2, 0, 3, 0), (3, 1, 9, 6), (1, 2, 4, 4), (3, 0, 8, 0)] {
            let b = HomogeneousBasis::canonical(n, m).unwrap();
            assert_eq!((b.even_count(), b.odd_count()), (ev, od));
            assert_eq!(b.len(), ev + od);
            HomogeneousBasis::from_elements(n, m, b.elements().to_vec()).unwrap();
        }
        assert_eq!(HomogeneousBasis::canonical(2, 2), Err(Error::EqualBlocks(2)));
        assert_eq!(HomogeneousBasis::canonical(1, 0), Err(Error::TooSmall { n: 1, m: 0 }));
    }

    #[test]
    fn constants_examples_two_one() {
        let k = StructureConstants::canonical(2, 1).unwrap();
        assert_eq!(k.c(4, 6, 2), &Scalar::ratio(1, 2));
        assert_eq!(k.c(4, 6, 3), &Scalar::ratio(1, 2));
        assert_eq!(k.d(4, 6, 2), &Scalar::ratio(1, 2));
        assert_eq!(k.d(4, 6, 3), &Scalar::ratio(-3, 2));
        assert_eq!(k.g(4, 6), &Scalar::int(2));
        assert_eq!(k.killing().get(4, 6), &Scalar::int(2));
        assert_eq!(k.g_matrix().matmul(k.ginv_matrix()), DenseMatrix::identity(8));
    }

    #[test]
    fn expansions_reproduce_brackets() {
        for (n, m) in [(2, 1), (3, 1), (2, 0), (1, 2)] {
            let k = StructureConstants::canonical(n, m).unwrap();
            let b = k.basis();
            for a in 0..k.dim() {
                for bb in 0..k.dim() {
                    let coords: Vec<Scalar> = (0..k.dim()).map(|c| k.c(a, bb, c).clone()).collect();
                    let lhs = graded_commutator(b.element(a), b.element(bb)).unwrap();
                    assert_eq!(k.combine(&coords), lhs);
                    let coords: Vec<Scalar> = (0..k.dim()).map(|c| k.d(a, bb, c).clone()).collect();
                    let mut rhs = k.combine(&coords);
                    rhs.add_scaled(&GradedMatrix::identity(n, m), k.g(a, bb));
                    let lhs = graded_anticommutator(b.element(a), b.element(bb)).unwrap();
                    assert_eq!(rhs, lhs);
                }
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        let b = HomogeneousBasis::canonical(2, 1).unwrap();
        let one = GradedMatrix::identity(2, 1);
        assert!(adjoint_action(b.element(2), &one).unwrap().is_zero());
        assert_eq!(adjoint_action(b.element(2), b.element(0)).unwrap(), b.element(0).scale(&Scalar::int(2)));
        let expected = GradedMatrix::diagonal(2, 1, &[Scalar::ONE, Scalar::ZERO, Scalar::ONE]).unwrap();
        assert_eq!(adjoint_action(b.element(4), b.element(6)).unwrap(), expected);
    }

    #[test]
    fn derivation_dimensions() {
        for (n, m, want) in [(2, 1, (4, 4)), (2, 0, (3, 0)), (3, 1, (9, 6))] {
            assert_eq!(derivation_dimension(&HomogeneousBasis::canonical(n, m).unwrap()), want);
        }
    }

    #[test]
    fn graded_center_is_the_scalars() {
        for (n, m) in [(2, 1), (3, 1), (2, 0)] {
            let center = graded_center(&HomogeneousBasis::canonical(n, m).unwrap());
            assert_eq!(center.len(), 1);
            let z = &center[0];
            let scale = z.get(0, 0).clone();
            assert_eq!(z, &GradedMatrix::identity(n, m).scale(&scale));
        }
    }

    #[test]
    fn body_adapted_bases() {
        let b = HomogeneousBasis::body_adapted(2, 1).unwrap();
        assert!(b.is_body_adapted());
        for a in 0..3 {
            assert!(!b.element(a).body().unwrap().is_zero());
        }
        let b = HomogeneousBasis::body_adapted(1, 2).unwrap();
        assert!(b.is_body_adapted());
        assert_eq!(b.element(0), &GradedMatrix::unit(1, 2, 1, 2));
        assert!(!HomogeneousBasis::canonical(1, 2).unwrap().is_body_adapted());
    }
}
