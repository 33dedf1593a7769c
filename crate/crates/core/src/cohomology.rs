//! Chain-complex matrices of the graded derivation-based complex, their
//! Betti numbers, a Chevalley–Eilenberg oracle for ordinary Lie algebras,
//! and the body map on forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basis::{HomogeneousBasis, StructureConstants};
use crate::calculus::exterior_derivative;
use crate::error::{Error, Result};
use crate::forms::{DerivationVector, FormCoordinates, GradedForm, MultiIndex};
use crate::linalg::{agreed_modular_rank, fraction_free_rank, Echelon, SparseVec};
use crate::matrix::{embed_body, BodyMatrix, GradedMatrix};
use crate::scalar::Scalar;

pub const DEFAULT_DEGREE_CAP: usize = 4;

/// Weight of each basis element under the diagonal Cartan subalgebra, when
/// every element is a single off-diagonal matrix unit or diagonal.
fn basis_weights(basis: &HomogeneousBasis) -> Option<Vec<Vec<i32>>> {
    let s = basis.n() + basis.m();
    basis
        .elements()
        .iter()
        .map(|e| {
            let mut off = None;
            for i in 0..s {
                for j in 0..s {
                    if i != j && !e.get(i, j).is_zero() {
                        if off.is_some() {
                            return None;
                        }
                        off = Some((i, j));
                    }
                }
            }
            let mut w = vec![0; s];
            if let Some((i, j)) = off {
                if (0..s).any(|d| !e.get(d, d).is_zero()) {
                    return None;
                }
                w[i] += 1;
                w[j] -= 1;
            }
            Some(w)
        })
        .collect()
}

/// Matrix of `d: Ω^p → Ω^{p+1}` in the bases of matrix units times
/// canonical θ-monomials.
#[derive(Clone, Debug)]
pub struct ChainDegreeData {
    pub p: usize,
    pub source: FormCoordinates,
    pub target: FormCoordinates,
    /// Column `j` is `d` of the `j`-th source basis form.
    pub columns: Vec<SparseVec<Scalar>>,
    /// Cartan weight class of each source and target coordinate, if the basis
    /// admits one; `d` never mixes classes.
    source_class: Vec<usize>,
    target_class: Vec<usize>,
}

impl ChainDegreeData {
    pub fn nrows(&self) -> usize {
        self.target.len()
    }

    pub fn ncols(&self) -> usize {
        self.source.len()
    }

    pub fn rows(&self) -> Vec<SparseVec<Scalar>> {
        let mut rows = vec![Vec::new(); self.nrows()];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                rows[*i].push((j, v.clone()));
            }
        }
        rows
    }

    /// Columns split by weight class, with row indices local to the class.
    fn blocks(&self) -> Vec<Vec<SparseVec<Scalar>>> {
        let mut local = vec![0; self.nrows()];
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, c) in self.target_class.iter().enumerate() {
            let n = counts.entry(*c).or_default();
            local[i] = *n;
            *n += 1;
        }
        let mut blocks: BTreeMap<usize, Vec<SparseVec<Scalar>>> = BTreeMap::new();
        for (j, col) in self.columns.iter().enumerate() {
            let v = col.iter().map(|(i, x)| (local[*i], x.clone())).collect();
            blocks.entry(self.source_class[j]).or_default().push(v);
        }
        blocks.into_values().collect()
    }

    /// Whether every column stays inside the weight class of its source.
    pub fn respects_weights(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(j, col)| col.iter().all(|(i, _)| self.target_class[*i] == self.source_class[j]))
    }

    /// Exact rank, computed block by block over ℚ(i).
    pub fn rank(&self) -> usize {
        self.blocks()
            .into_iter()
            .map(|cols| {
                let mut ech = Echelon::new();
                for c in cols {
                    ech.insert(c);
                }
                ech.rank()
            })
            .sum()
    }

    /// Rank reduced modulo several primes; `None` unless all agree.
    pub fn modular_rank(&self) -> Option<usize> {
        self.blocks().iter().map(|b| agreed_modular_rank(b)).sum()
    }

    /// Rank by fraction-free integer elimination on each block. Intended for
    /// small blocks; `None` for non-real entries.
    pub fn bareiss_rank(&self) -> Option<usize> {
        self.blocks()
            .into_iter()
            .map(|cols| {
                let len = cols.iter().flat_map(|c| c.iter().map(|e| e.0 + 1)).max().unwrap_or(0);
                let dense: Vec<Vec<Scalar>> = cols.iter().map(|c| crate::linalg::densify(c, len)).collect();
                fraction_free_rank(&dense)
            })
            .sum()
    }
}

fn coordinate_classes(
    coords: &FormCoordinates,
    weights: Option<&[Vec<i32>]>,
    s: usize,
    ids: &mut BTreeMap<Vec<i32>, usize>,
) -> Vec<usize> {
    let Some(weights) = weights else {
        return vec![0; coords.len()];
    };
    let block = s * s;
    let mut out = Vec::with_capacity(coords.len());
    for idx in coords.indices() {
        let mut base = vec![0; s];
        for &a in idx.entries() {
            for (b, w) in base.iter_mut().zip(&weights[a]) {
                *b -= w;
            }
        }
        for e in 0..block {
            let mut w = base.clone();
            w[e / s] += 1;
            w[e % s] -= 1;
            let next = ids.len();
            out.push(*ids.entry(w).or_insert(next));
        }
    }
    out
}

/// Builds the matrix of `d` on degree-`p` forms. Degrees above `cap` are
/// never materialised.
pub fn differential_matrix(p: usize, k: &StructureConstants, cap: usize) -> Result<ChainDegreeData> {
    if p + 1 > cap {
        return Err(Error::DegreeCapExceeded { requested: p + 1, cap });
    }
    let (n, m) = (k.n(), k.m());
    let source = FormCoordinates::new(n, m, p);
    let target = FormCoordinates::new(n, m, p + 1);
    let mut columns = Vec::with_capacity(source.len());
    for j in 0..source.len() {
        let f = source.basis_form(j);
        columns.push(target.to_vector(&exterior_derivative(&f, k)?));
    }
    let weights = basis_weights(k.basis());
    let mut ids = BTreeMap::new();
    let source_class = coordinate_classes(&source, weights.as_deref(), n + m, &mut ids);
    let target_class = coordinate_classes(&target, weights.as_deref(), n + m, &mut ids);
    Ok(ChainDegreeData { p, source, target, columns, source_class, target_class })
}

/// One row of a cohomology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub p: usize,
    pub dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub betti: usize,
}

/// Dimensions, ranks and Betti numbers for `p = 0..=max_p`.
pub fn cohomology_table(max_p: usize, k: &StructureConstants, cap: usize) -> Result<Vec<DegreeSummary>> {
    if max_p + 1 > cap {
        return Err(Error::DegreeCapExceeded { requested: max_p + 1, cap });
    }
    let mut out = Vec::new();
    let mut prev_rank = 0;
    for p in 0..=max_p {
        let data = differential_matrix(p, k, cap)?;
        let rank = data.rank();
        let dim = data.ncols();
        let kernel_dim = dim - rank;
        out.push(DegreeSummary { p, dim, rank, kernel_dim, betti: kernel_dim - prev_rank });
        prev_rank = rank;
    }
    Ok(out)
}

/// `b_p = dim ker d_p − rank d_{p−1}` for `p = 0..=max_p`.
pub fn betti_numbers(max_p: usize, k: &StructureConstants, cap: usize) -> Result<Vec<usize>> {
    Ok(cohomology_table(max_p, k, cap)?.into_iter().map(|r| r.betti).collect())
}

/// An ordinary Lie algebra given by structure constants `[x_a, x_b] = Σ c_ab^c x_c`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    brackets: Vec<Vec<Vec<(usize, Scalar)>>>,
}

impl LieAlgebra {
    pub fn new(dim: usize, c: impl Fn(usize, usize, usize) -> Scalar) -> LieAlgebra {
        let brackets = (0..dim)
            .map(|a| {
                (0..dim).map(|b| (0..dim).map(|e| (e, c(a, b, e))).filter(|(_, v)| !v.is_zero()).collect()).collect()
            })
            .collect();
        LieAlgebra { dim, brackets }
    }

    pub fn abelian(dim: usize) -> LieAlgebra {
        LieAlgebra::new(dim, |_, _, _| Scalar::ZERO)
    }

    /// sl(n) in the standard basis (requires `n ≥ 2`).
    pub fn sl(n: usize) -> Result<LieAlgebra> {
        let k = StructureConstants::canonical(n, 0)?;
        Ok(LieAlgebra::new(k.dim(), |a, b, c| k.c(a, b, c).clone()))
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let d = self.dim;
        LieAlgebra::new(d + other.dim, |a, b, c| {
            let pick = |l: &LieAlgebra, a: usize, b: usize, c: usize| {
                l.brackets[a][b].iter().find(|(e, _)| *e == c).map(|(_, v)| v.clone()).unwrap_or(Scalar::ZERO)
            };
            match (a < d, b < d, c < d) {
                (true, true, true) => pick(self, a, b, c),
                (false, false, false) => pick(other, a - d, b - d, c - d),
                _ => Scalar::ZERO,
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

fn increasing_tuples(dim: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for a in start..dim {
            cur.push(a);
            rec(a + 1, dim, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, p, &mut Vec::new(), &mut out);
    out
}

/// Sorts a tuple of distinct indices, returning the sign of the sort.
fn sort_alternating(mut t: Vec<usize>) -> Option<(Vec<usize>, bool)> {
    let mut neg = false;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    t.windows(2).all(|w| w[0] < w[1]).then_some((t, neg))
}

/// Betti numbers `p = 0..=max_p` of the Chevalley–Eilenberg complex with
/// trivial coefficients, from dense matrices ranked by Bareiss elimination.
pub fn ce_oracle(g: &LieAlgebra, max_p: usize) -> Vec<usize> {
    let dim = g.dim;
    let mut ranks = Vec::new();
    let mut dims = Vec::new();
    for p in 0..=max_p {
        let src = increasing_tuples(dim, p);
        let tgt = increasing_tuples(dim, p + 1);
        dims.push(src.len());
        let pos: BTreeMap<&Vec<usize>, usize> = src.iter().enumerate().map(|(i, t)| (t, i)).collect();
        // Row J: (df)(x_J) = Σ_{i<j} (−1)^{i+j} f([x_{J_i}, x_{J_j}], …).
        let mut rows = Vec::with_capacity(tgt.len());
        for t in &tgt {
            let mut row = vec![Scalar::ZERO; src.len()];
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    let base = Scalar::sign((i + j) % 2 == 1);
                    for (c, v) in &g.brackets[t[i]][t[j]] {
                        let mut tuple = vec![*c];
                        tuple.extend(t.iter().enumerate().filter(|(l, _)| *l != i && *l != j).map(|(_, x)| *x));
                        if let Some((sorted, neg)) = sort_alternating(tuple) {
                            let col = pos[&sorted];
                            let term = &(&base * v) * &Scalar::sign(neg);
                            row[col] += &term;
                        }
                    }
                }
            }
            rows.push(row);
        }
        let r = if rows.is_empty() || src.is_empty() { 0 } else { fraction_free_rank(&rows).expect("real constants") };
        ranks.push(r);
    }
    (0..=max_p).map(|p| dims[p] - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] }).collect()
}

/// The body map `β` on matrices, derivations and forms for a body-adapted basis.
#[derive(Clone, Debug)]
pub struct BodyMap<'a> {
    k: &'a StructureConstants,
    body: StructureConstants,
    big: usize,
}

impl<'a> BodyMap<'a> {
    pub fn new(k: &'a StructureConstants) -> Result<BodyMap<'a>> {
        if !k.basis().is_body_adapted() {
            return Err(Error::NotAdapted("the first ñ² − 1 elements must lie in the body block".into()));
        }
        let big = k.n().max(k.m());
        let images = k.basis().elements()[..big * big - 1]
            .iter()
            .map(|e| e.body().map(|b| b.to_graded()))
            .collect::<Result<Vec<_>>>()?;
        let body = StructureConstants::compute(&HomogeneousBasis::from_elements(big, 0, images)?)?;
        Ok(BodyMap { k, body, big })
    }

    /// Structure constants of the body `M(ñ)` in the basis `β(E_k)`.
    pub fn body_constants(&self) -> &StructureConstants {
        &self.body
    }

    pub fn body_size(&self) -> usize {
        self.big
    }

    pub fn matrix(&self, mat: &GradedMatrix) -> GradedMatrix {
        mat.body().expect("shape").to_graded()
    }

    /// Keeps the coefficients indexed entirely by the body directions and
    /// applies `β` to them.
    pub fn form(&self, form: &GradedForm) -> Result<GradedForm> {
        if form.n() != self.k.n() || form.m() != self.k.m() {
            return Err(Error::ShapeMismatch("form and body map".into()));
        }
        let body_dim = self.big * self.big - 1;
        let mut out = GradedForm::zero(self.big, 0, form.degree());
        for (idx, x) in form.terms() {
            if idx.entries().iter().all(|&a| a < body_dim) {
                let bidx = MultiIndex::new(idx.entries().to_vec(), body_dim, body_dim)?;
                out.add_term(bidx, &self.matrix(x));
            }
        }
        Ok(out)
    }

    /// `β̂(ad E) = ad β(E)` for even derivations.
    pub fn vector_field(&self, d: &DerivationVector) -> Result<DerivationVector> {
        if d.parity().is_none_or(|p| p.is_odd()) && !d.is_zero() {
            return Err(Error::OddDerivation);
        }
        let e = self.k.combine(d.coords());
        let (coords, _) = self.body.expand(&self.matrix(&e));
        DerivationVector::new(self.big, 0, coords)
    }

    /// `ι̂(ad E̲) = ad ι(E̲)`.
    pub fn embed_vector_field(&self, d: &DerivationVector) -> Result<DerivationVector> {
        if d.dim() != self.body.dim() {
            return Err(Error::ShapeMismatch("derivation of the body expected".into()));
        }
        let e = BodyMatrix::from(self.body.combine(d.coords()));
        let (coords, _) = self.k.expand(&embed_body(&e, self.k.n(), self.k.m())?);
        DerivationVector::new(self.k.n(), self.k.m(), coords)
    }

    /// Rank of `β` on degree-`p` forms, for comparison with the body dimension.
    pub fn rank_on_degree(&self, p: usize) -> usize {
        let src = FormCoordinates::new(self.k.n(), self.k.m(), p);
        let tgt = FormCoordinates::new(self.big, 0, p);
        let mut ech = Echelon::new();
        for j in 0..src.len() {
            ech.insert(tgt.to_vector(&self.form(&src.basis_form(j)).expect("shape")));
        }
        ech.rank()
    }
}

/// Representatives of a basis of `H^p`, as vectors in the coordinates of `Ω^p`.
pub fn cohomology_representatives(p: usize, k: &StructureConstants, cap: usize) -> Result<Vec<SparseVec<Scalar>>> {
    let d_p = differential_matrix(p, k, cap)?;
    let mut ech = Echelon::new();
    if p > 0 {
        for col in differential_matrix(p - 1, k, cap)?.columns {
            ech.insert(col);
        }
    }
    let mut kernel = Echelon::new();
    for row in d_p.rows() {
        kernel.insert(row);
    }
    let mut reps = Vec::new();
    for z in kernel.into_reduced().nullspace(d_p.ncols()) {
        if ech.insert(z.clone()) {
            reps.push(z);
        }
    }
    Ok(reps)
}

/// Whether `β` sends the given `H^p` representatives to linearly independent
/// classes of the body complex.
pub fn body_map_injective_on(p: usize, reps: &[SparseVec<Scalar>], beta: &BodyMap, cap: usize) -> Result<bool> {
    let k = beta.k;
    let src = FormCoordinates::new(k.n(), k.m(), p);
    let body = beta.body_constants();
    let tgt = FormCoordinates::new(beta.big, 0, p);
    let mut ech = Echelon::new();
    if p > 0 {
        for col in differential_matrix(p - 1, body, cap)?.columns {
            ech.insert(col);
        }
    }
    for z in reps {
        let image = beta.form(&src.from_vector(z))?;
        if !ech.insert(tgt.to_vector(&image)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_small_algebras() {
        assert_eq!(ce_oracle(&LieAlgebra::sl(2).unwrap(), 3), vec![1, 0, 0, 1]);
        assert_eq!(ce_oracle(&LieAlgebra::abelian(1), 1), vec![1, 1]);
        let sl2 = LieAlgebra::sl(2).unwrap();
        assert_eq!(ce_oracle(&sl2.direct_sum(&sl2), 3), vec![1, 0, 0, 2]);
    }

    #[test]
    fn degree_zero_matrix_at_two_one() {
        let k = StructureConstants::canonical(2, 1).unwrap();
        let d0 = differential_matrix(0, &k, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!((d0.nrows(), d0.ncols()), (72, 9));
        assert_eq!(d0.ncols() - d0.rank(), 1);
        let d1 = differential_matrix(1, &k, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!((d1.nrows(), d1.ncols()), (288, 72));
        assert!(d1.respects_weights());
        assert_eq!(d1.rank(), d1.modular_rank().unwrap());
        assert_eq!(Some(d1.rank()), d1.bareiss_rank());
    }

    #[test]
    fn cap_is_enforced() {
        let k = StructureConstants::canonical(2, 1).unwrap();
        assert_eq!(
            differential_matrix(4, &k, DEFAULT_DEGREE_CAP).unwrap_err(),
            Error::DegreeCapExceeded { requested: 5, cap: 4 }
        );
    }

    #[test]
    fn body_vector_fields() {
        let k = StructureConstants::compute(&HomogeneousBasis::body_adapted(2, 1).unwrap()).unwrap();
        let beta = BodyMap::new(&k).unwrap();
        let d3 = beta.vector_field(&DerivationVector::basis(2, 1, 2)).unwrap();
        assert_eq!(d3, DerivationVector::basis(2, 0, 2));
        assert!(beta.vector_field(&DerivationVector::basis(2, 1, 3)).unwrap().is_zero());
        assert_eq!(beta.vector_field(&DerivationVector::basis(2, 1, 4)), Err(Error::OddDerivation));
        for a in 0..3 {
            let d = DerivationVector::basis(2, 0, a);
            assert_eq!(beta.vector_field(&beta.embed_vector_field(&d).unwrap()).unwrap(), d);
        }
    }
}
