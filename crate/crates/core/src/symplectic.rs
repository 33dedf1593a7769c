//! Graded symplectic structures, Hamiltonian derivations and the graded
//! Poisson bracket.

use serde::{Deserialize, Serialize};

use crate::basis::StructureConstants;
use crate::calculus::{exterior_derivative, invariant_forms};
use crate::cohomology::BodyMap;
use crate::error::{Error, Result};
use crate::forms::{DerivationVector, FormCoordinates, GradedForm};
use crate::linalg::{sparse_nullspace, sparse_rank, sparse_solve, SparseVec};
use crate::matrix::{graded_commutator, GradedMatrix, Parity};
use crate::scalar::Scalar;

/// An even closed 2-form for which `ω(D, D_M) = D M` has a unique solution
/// `D_M` for every `M`.
#[derive(Clone, Debug)]
pub struct SymplecticForm<'a> {
    form: GradedForm,
    k: &'a StructureConstants,
    /// Row `(A, entry)`: the entry of `ω(∂_A, ∂_B)` as a function of `B`.
    rows: Vec<SparseVec<Scalar>>,
}

fn pairing_rows(form: &GradedForm, k: &StructureConstants) -> Vec<SparseVec<Scalar>> {
    let s2 = (k.n() + k.m()) * (k.n() + k.m());
    let dim = k.dim();
    let mut rows = vec![Vec::new(); dim * s2];
    for a in 0..dim {
        for b in 0..dim {
            let v = form.value_at(&[a, b]);
            for (e, x) in v.entries().iter().enumerate() {
                if !x.is_zero() {
                    rows[a * s2 + e].push((b, x.clone()));
                }
            }
        }
    }
    rows
}

impl<'a> SymplecticForm<'a> {
    /// Validates the form; the error names the first failed condition.
    pub fn new(form: GradedForm, k: &'a StructureConstants) -> Result<SymplecticForm<'a>> {
        if form.degree() != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: form.degree() });
        }
        if form.n() != k.n() || form.m() != k.m() {
            return Err(Error::ShapeMismatch("form and structure constants".into()));
        }
        if form.parity() != Some(Parity::Even) {
            return Err(Error::NotSymplectic("not even".into()));
        }
        if !exterior_derivative(&form, k)?.is_zero() {
            return Err(Error::NotSymplectic("not closed".into()));
        }
        let rows = pairing_rows(&form, k);
        if sparse_rank(rows.clone()) != k.dim() {
            return Err(Error::NotSymplectic("pairing is degenerate".into()));
        }
        let out = SymplecticForm { form, k, rows };
        let s = k.n() + k.m();
        for e in 0..s * s {
            let unit = GradedMatrix::unit(k.n(), k.m(), e / s, e % s);
            out.hamiltonian_field(&unit)?;
        }
        Ok(out)
    }

    pub fn form(&self) -> &GradedForm {
        &self.form
    }

    /// The unique `D_M` with `ω(D, D_M) = D M` for all `D`.
    pub fn hamiltonian_field(&self, mat: &GradedMatrix) -> Result<DerivationVector> {
        let s2 = (self.k.n() + self.k.m()).pow(2);
        let mut rhs = vec![Scalar::ZERO; self.k.dim() * s2];
        for a in 0..self.k.dim() {
            let v = graded_commutator(self.k.basis().element(a), mat)?;
            for (e, x) in v.entries().iter().enumerate() {
                rhs[a * s2 + e] = x.clone();
            }
        }
        let x = sparse_solve(&self.rows, &rhs, self.k.dim())
            .ok_or_else(|| Error::NotSymplectic("no Hamiltonian field for a matrix unit".into()))?;
        DerivationVector::new(self.k.n(), self.k.m(), x)
    }

    /// `{M, M'}_ω = ω(D_M, D_{M'})`.
    pub fn poisson_bracket(&self, a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
        self.form.evaluate(&[self.hamiltonian_field(a)?, self.hamiltonian_field(b)?])
    }
}

pub fn is_symplectic(form: &GradedForm, k: &StructureConstants) -> bool {
    SymplecticForm::new(form.clone(), k).is_ok()
}

pub fn hamiltonian_field(form: &SymplecticForm, mat: &GradedMatrix) -> Result<DerivationVector> {
    form.hamiltonian_field(mat)
}

pub fn poisson_bracket(form: &SymplecticForm, a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
    form.poisson_bracket(a, b)
}

/// Outcome of comparing a symplectic structure with its body image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BodyCompatibility {
    pub hamiltonian_fields_agree: bool,
    pub poisson_brackets_agree: bool,
}

/// Checks `β̂(D^ω(M)) = D^{β(ω)}(β(M))` and `β({M, M'}_ω) = {β(M), β(M')}_{β(ω)}`
/// for even `M, M'`.
pub fn body_compatibility(
    form: &SymplecticForm,
    beta: &BodyMap,
    a: &GradedMatrix,
    b: &GradedMatrix,
) -> Result<BodyCompatibility> {
    for x in [a, b] {
        if !x.is_homogeneous(Parity::Even) {
            return Err(Error::ParityMismatch("body compatibility needs even matrices".into()));
        }
    }
    let body_form = SymplecticForm::new(beta.form(form.form())?, beta.body_constants())?;
    let left = beta.vector_field(&form.hamiltonian_field(a)?)?;
    let right = body_form.hamiltonian_field(&beta.matrix(a))?;
    let bracket = beta.matrix(&form.poisson_bracket(a, b)?);
    let body_bracket = body_form.poisson_bracket(&beta.matrix(a), &beta.matrix(b))?;
    Ok(BodyCompatibility { hamiltonian_fields_agree: left == right, poisson_brackets_agree: bracket == body_bracket })
}

/// Basis of the even, closed 2-forms annihilated by every `L_{∂_A}`. A
/// symplectic form is invariant under its Hamiltonian fields, and these
/// exhaust the derivations, so every symplectic structure lies in this span.
pub fn closed_invariant_two_forms(k: &StructureConstants) -> Result<Vec<GradedForm>> {
    let inv = invariant_forms(k, 2, Some(Parity::Even))?;
    let target = FormCoordinates::new(k.n(), k.m(), 3);
    let images: Vec<SparseVec<Scalar>> =
        inv.iter().map(|f| exterior_derivative(f, k).map(|d| target.to_vector(&d))).collect::<Result<_>>()?;
    let rows = crate::calculus::transpose(&images);
    Ok(sparse_nullspace(rows, inv.len())
        .into_iter()
        .map(|v| {
            let mut acc = GradedForm::zero(k.n(), k.m(), 2);
            for (j, c) in v {
                acc = acc.add(&inv[j].scale(&c)).expect("same degree");
            }
            acc
        })
        .collect())
}

/// Whether `a` is a nonzero scalar multiple of `b`.
pub fn is_multiple_of(a: &GradedForm, b: &GradedForm) -> bool {
    let Some((idx, x)) = b.terms().next() else {
        return a.is_zero();
    };
    let Some((e, v)) = x.entries().iter().enumerate().find(|(_, v)| !v.is_zero()) else {
        return false;
    };
    let s = x.size();
    let c = &a.coefficient(idx).get(e / s, e % s).clone() * &v.recip();
    !c.is_zero() && *a == b.scale(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::canonical_theta;

    #[test]
    fn d_theta_is_symplectic_and_theta_pair_is_not() {
        let k = StructureConstants::canonical(2, 1).unwrap();
        let dt = exterior_derivative(&canonical_theta(&k).unwrap(), &k).unwrap();
        assert!(is_symplectic(&dt, &k));
        assert!(is_symplectic(&dt.scale(&Scalar::int(2)), &k));
        let t12 = GradedForm::theta(2, 1, 0).wedge(&GradedForm::theta(2, 1, 1)).unwrap();
        assert!(!is_symplectic(&t12, &k));
    }

    #[test]
    fn hamiltonian_of_identity_vanishes() {
        let k = StructureConstants::canonical(2, 1).unwrap();
        let dt = exterior_derivative(&canonical_theta(&k).unwrap(), &k).unwrap();
        let w = SymplecticForm::new(dt, &k).unwrap();
        assert!(w.hamiltonian_field(&GradedMatrix::identity(2, 1)).unwrap().is_zero());
        assert_eq!(w.hamiltonian_field(k.basis().element(2)).unwrap(), DerivationVector::basis(2, 1, 2));
    }
}
