//! Cartan calculus on graded forms: exterior derivative (two independent
//! routes), Lie derivative, interior product, and the canonical 1-form Θ.

use std::collections::HashMap;

use crate::basis::{check_geometric, StructureConstants};
use crate::error::{Error, Result};
use crate::forms::{DerivationVector, FormCoordinates, GradedForm, MultiIndex};
use crate::linalg::sparse_rank;
use crate::matrix::{graded_commutator, GradedMatrix, Parity};
use crate::scalar::Scalar;

fn sgn(e: usize) -> Scalar {
    Scalar::sign(e % 2 == 1)
}

fn check_shape(form: &GradedForm, k: &StructureConstants) -> Result<()> {
    if form.n() != k.n() || form.m() != k.m() {
        return Err(Error::ShapeMismatch(format!(
            "form on M({}|{}) with constants of M({}|{})",
            form.n(),
            form.m(),
            k.n(),
            k.m()
        )));
    }
    Ok(())
}

/// `[x, y]^C = Σ x^A y^B c_AB^C` for derivations in the basis `∂_A`.
pub fn derivation_bracket(x: &DerivationVector, y: &DerivationVector, k: &StructureConstants) -> DerivationVector {
    let mut out = vec![Scalar::ZERO; k.dim()];
    for (a, xa) in x.support() {
        for (b, yb) in y.support() {
            let w = xa * yb;
            for (c, v) in k.c_fiber(a, b) {
                out[*c] += &(&w * v);
            }
        }
    }
    DerivationVector::from_parts(k.even_count(), out)
}

/// `D(M)` for `D = Σ x^A ad E_A`.
pub fn apply_derivation(d: &DerivationVector, mat: &GradedMatrix, k: &StructureConstants) -> GradedMatrix {
    let mut out = GradedMatrix::zero(k.n(), k.m());
    for (a, x) in d.support() {
        let br = graded_commutator(k.basis().element(a), mat).expect("same shape");
        out.add_scaled(&br, x);
    }
    out
}

/// Value of the exterior derivative of a homogeneous form of parity `w` on
/// the basis tuple `b`, straight from the Chevalley–Eilenberg-type formula.
fn d_value(form: &GradedForm, w: usize, b: &[usize], k: &StructureConstants) -> GradedMatrix {
    let par: Vec<usize> = b.iter().map(|&x| k.parity(x).bit()).collect();
    let mut out = GradedMatrix::zero(k.n(), k.m());
    let mut rest = Vec::with_capacity(b.len());
    let mut prefix = 0;
    for l in 0..b.len() {
        rest.clear();
        rest.extend(b.iter().enumerate().filter(|(i, _)| *i != l).map(|(_, x)| *x));
        let inner = form.value_at(&rest);
        if !inner.is_zero() {
            let s = sgn(l + par[l] * (w + prefix));
            let br = graded_commutator(k.basis().element(b[l]), &inner).expect("same shape");
            out.add_scaled(&br, &s);
        }
        prefix += par[l];
    }
    for l in 0..b.len() {
        let mut between = 0;
        for lp in l + 1..b.len() {
            let s = sgn(lp + par[lp] * between);
            between += par[lp];
            let fiber = k.c_fiber(b[l], b[lp]);
            if fiber.is_empty() {
                continue;
            }
            for (c, v) in fiber {
                rest.clear();
                for (i, &x) in b.iter().enumerate() {
                    if i == l {
                        rest.push(*c);
                    } else if i != lp {
                        rest.push(x);
                    }
                }
                let val = form.value_at(&rest);
                if !val.is_zero() {
                    out.add_scaled(&val, &(&s * v));
                }
            }
        }
    }
    out
}

/// Exterior derivative evaluated on all canonical basis tuples, then turned
/// back into coefficients.
pub fn exterior_derivative(form: &GradedForm, k: &StructureConstants) -> Result<GradedForm> {
    check_shape(form, k)?;
    let (n, m, p) = (k.n(), k.m(), form.degree());
    let mut out = GradedForm::zero(n, m, p + 1);
    for (w, part) in form.homogeneous_parts() {
        let piece = GradedForm::from_values(n, m, p + 1, |b| d_value(&part, w.bit(), b, k));
        out = out.add(&piece)?;
    }
    Ok(out)
}

/// `dE_A = −Σ c_AB^C E_C ∧ θ^B`.
pub fn d_basis_element(a: usize, k: &StructureConstants) -> GradedForm {
    let mut out = GradedForm::zero(k.n(), k.m(), 1);
    for b in 0..k.dim() {
        for (c, v) in k.c_fiber(a, b) {
            out = out.add(&GradedForm::monomial(&k.basis().element(*c).scale(&-v), &[b])).expect("same shape");
        }
    }
    out
}

/// `dθ^A = ½ Σ c_BC^A θ^C ∧ θ^B`.
pub fn d_theta(a: usize, k: &StructureConstants) -> GradedForm {
    let half = Scalar::ratio(1, 2);
    let one = GradedMatrix::identity(k.n(), k.m());
    let mut out = GradedForm::zero(k.n(), k.m(), 2);
    for b in 0..k.dim() {
        for c in 0..k.dim() {
            let v = k.c(b, c, a);
            if v.is_zero() {
                continue;
            }
            out = out.add(&GradedForm::monomial(&one.scale(&(&half * v)), &[c, b])).expect("same shape");
        }
    }
    out
}

/// Exterior derivative assembled from `dE_A`, `dθ^A` and the Leibniz rule.
#[derive(Debug)]
pub struct GeneratorDifferential<'a> {
    k: &'a StructureConstants,
    d_e: Vec<GradedForm>,
    d_monomials: HashMap<MultiIndex, GradedForm>,
}

impl<'a> GeneratorDifferential<'a> {
    pub fn new(k: &'a StructureConstants) -> Self {
        let d_e = (0..k.dim()).map(|a| d_basis_element(a, k)).collect();
        GeneratorDifferential { k, d_e, d_monomials: HashMap::new() }
    }

    /// `d(θ^{J₁} ∧ … ∧ θ^{J_p})` by `d(θ^{J₁} ∧ R) = dθ^{J₁} ∧ R − θ^{J₁} ∧ dR`.
    fn d_monomial(&mut self, idx: &MultiIndex) -> GradedForm {
        if let Some(f) = self.d_monomials.get(idx) {
            return f.clone();
        }
        let (n, m) = (self.k.n(), self.k.m());
        let e = idx.entries();
        let out = if e.is_empty() {
            GradedForm::zero(n, m, 1)
        } else if e.len() == 1 {
            d_theta(e[0], self.k)
        } else {
            let one = GradedMatrix::identity(n, m);
            let head = GradedForm::theta(n, m, e[0]);
            let rest_idx =
                MultiIndex::new(e[1..].to_vec(), self.k.even_count(), self.k.dim()).expect("tail of a canonical index");
            let rest = GradedForm::monomial(&one, rest_idx.entries());
            let d_rest = self.d_monomial(&rest_idx);
            let a = d_theta(e[0], self.k).wedge(&rest).expect("same shape");
            let b = head.wedge(&d_rest).expect("same shape");
            a.sub(&b).expect("same degree")
        };
        self.d_monomials.insert(idx.clone(), out.clone());
        out
    }

    /// `d(X θ^J) = dX ∧ θ^J + X ∧ dθ^J` with `dX = Σ x^A dE_A`.
    pub fn apply(&mut self, form: &GradedForm) -> Result<GradedForm> {
        check_shape(form, self.k)?;
        let (n, m) = (self.k.n(), self.k.m());
        let one = GradedMatrix::identity(n, m);
        let mut out = GradedForm::zero(n, m, form.degree() + 1);
        for (idx, x) in form.terms() {
            let (coords, _) = self.k.expand(x);
            let mut dx = GradedForm::zero(n, m, 1);
            for (a, v) in coords.iter().enumerate() {
                if !v.is_zero() {
                    dx = dx.add(&self.d_e[a].scale(v))?;
                }
            }
            let theta_j = GradedForm::monomial(&one, idx.entries());
            out = out.add(&dx.wedge(&theta_j)?)?;
            let dj = self.d_monomial(idx);
            out = out.add(&dj.left_mul(x))?;
        }
        Ok(out)
    }
}

/// One-shot version of [`GeneratorDifferential::apply`].
pub fn exterior_derivative_generators(form: &GradedForm, k: &StructureConstants) -> Result<GradedForm> {
    GeneratorDifferential::new(k).apply(form)
}

/// `(L_{∂_A} ω)(∂_B)` for homogeneous `ω` of parity `w`.
fn lie_value(form: &GradedForm, w: usize, a: usize, b: &[usize], k: &StructureConstants) -> GradedMatrix {
    let pa = k.parity(a).bit();
    let inner = form.value_at(b);
    let mut out = graded_commutator(k.basis().element(a), &inner).expect("same shape");
    let mut prefix = 0;
    let mut tuple = b.to_vec();
    for l in 0..b.len() {
        let s = sgn(pa * (w + prefix));
        for (c, v) in k.c_fiber(a, b[l]) {
            tuple[l] = *c;
            let val = form.value_at(&tuple);
            if !val.is_zero() {
                out.add_scaled(&val, &-(&s * v));
            }
        }
        tuple[l] = b[l];
        prefix += k.parity(b[l]).bit();
    }
    out
}

/// Lie derivative `L_D ω`, linear in `D`.
pub fn lie_derivative(d: &DerivationVector, form: &GradedForm, k: &StructureConstants) -> Result<GradedForm> {
    check_shape(form, k)?;
    let (n, m, p) = (k.n(), k.m(), form.degree());
    let parts = form.homogeneous_parts();
    let support: Vec<(usize, Scalar)> = d.support().map(|(a, x)| (a, x.clone())).collect();
    Ok(GradedForm::from_values(n, m, p, |b| {
        let mut out = GradedMatrix::zero(n, m);
        for (w, part) in &parts {
            for (a, x) in &support {
                out.add_scaled(&lie_value(part, w.bit(), *a, b, k), x);
            }
        }
        out
    }))
}

/// Interior product `ι_D ω`, `(ι_D ω)(D₂, …) = ω(D, D₂, …)`.
pub fn interior_product(d: &DerivationVector, form: &GradedForm) -> Result<GradedForm> {
    if form.degree() == 0 {
        return Err(Error::DegreeUnderflow);
    }
    if d.dim() != form.dim() {
        return Err(Error::ShapeMismatch("derivation and form live on different algebras".into()));
    }
    let (n, m, p) = (form.n(), form.m(), form.degree());
    let support: Vec<(usize, Scalar)> = d.support().map(|(a, x)| (a, x.clone())).collect();
    Ok(GradedForm::from_values(n, m, p - 1, |b| {
        let mut out = GradedMatrix::zero(n, m);
        let mut tuple = Vec::with_capacity(p);
        for (a, x) in &support {
            tuple.clear();
            tuple.push(*a);
            tuple.extend_from_slice(b);
            out.add_scaled(&form.value_at(&tuple), x);
        }
        out
    }))
}

/// `Θ = Σ E_A ∧ θ^A`.
pub fn canonical_theta(k: &StructureConstants) -> Result<GradedForm> {
    check_geometric(k.n(), k.m())?;
    let mut out = GradedForm::zero(k.n(), k.m(), 1);
    for a in 0..k.dim() {
        out = out.add(&GradedForm::monomial(k.basis().element(a), &[a]))?;
    }
    Ok(out)
}

/// `[Θ, M] = Θ ∧ M − M ∧ Θ`.
pub fn theta_commutator(theta: &GradedForm, mat: &GradedMatrix) -> GradedForm {
    theta.right_mul(mat).sub(&theta.left_mul(mat)).expect("same degree")
}

/// For each `A`, `4(n−m)² Σ (−1)^{|B||D|} K^{AB} K^{CD} E_C E_B ∧ dE_D`,
/// which should reproduce `θ^A`.
pub fn theta_inversion(k: &StructureConstants) -> Result<Vec<GradedForm>> {
    check_geometric(k.n(), k.m())?;
    let dim = k.dim();
    let kinv = k.killing_inv();
    let d_e: Vec<GradedForm> = (0..dim)
        .map(|d| exterior_derivative(&GradedForm::from_matrix(k.basis().element(d).clone()), k))
        .collect::<Result<_>>()?;
    // S_B = Σ_{C,D} (−1)^{|B||D|} K^{CD} E_C E_B ∧ dE_D, independent of A.
    let mut s_b = Vec::with_capacity(dim);
    for b in 0..dim {
        let mut acc = GradedForm::zero(k.n(), k.m(), 1);
        for c in 0..dim {
            let ecb = k.basis().element(c).matmul(k.basis().element(b));
            for (d, d_form) in d_e.iter().enumerate() {
                let kv = kinv.get(c, d);
                if kv.is_zero() {
                    continue;
                }
                let s = &sgn(k.parity(b).bit() * k.parity(d).bit()) * kv;
                acc = acc.add(&d_form.left_mul(&ecb.scale(&s)))?;
            }
        }
        s_b.push(acc);
    }
    let factor = &Scalar::int(4) * &k.nm_squared();
    let mut out = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut acc = GradedForm::zero(k.n(), k.m(), 1);
        for (b, sb) in s_b.iter().enumerate() {
            let kv = kinv.get(a, b);
            if !kv.is_zero() {
                acc = acc.add(&sb.scale(&(&factor * kv)))?;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Dimension of the span of all `M ∧ dE_A ∧ M'` over matrix units `M, M'`.
pub fn exact_one_form_span(k: &StructureConstants) -> Result<usize> {
    let (n, m) = (k.n(), k.m());
    let s = n + m;
    let coords = FormCoordinates::new(n, m, 1);
    let units: Vec<GradedMatrix> = (0..s * s).map(|e| GradedMatrix::unit(n, m, e / s, e % s)).collect();
    let mut rows = Vec::new();
    for a in 0..k.dim() {
        let de = exterior_derivative(&GradedForm::from_matrix(k.basis().element(a).clone()), k)?;
        for u in &units {
            let left = de.left_mul(u);
            for v in &units {
                rows.push(coords.to_vector(&left.right_mul(v)));
            }
        }
    }
    Ok(sparse_rank(rows))
}

/// Basis of the space of 1-forms annihilated by every `L_{∂_A}`.
pub fn invariant_one_forms(k: &StructureConstants) -> Result<Vec<GradedForm>> {
    invariant_forms(k, 1, None)
}

/// Basis of `{ω ∈ Ω^p : L_{∂_A} ω = 0 ∀A}`, optionally restricted to one parity.
pub fn invariant_forms(k: &StructureConstants, degree: usize, parity: Option<Parity>) -> Result<Vec<GradedForm>> {
    let (n, m) = (k.n(), k.m());
    let coords = FormCoordinates::new(n, m, degree);
    let columns: Vec<usize> = (0..coords.len()).filter(|&pos| parity.is_none_or(|p| coords.parity(pos) == p)).collect();
    let derivations: Vec<DerivationVector> = (0..k.dim()).map(|a| DerivationVector::basis(n, m, a)).collect();
    // Column j of the constraint matrix stacks L_{∂_A} of the j-th basis form.
    let mut entries: Vec<Vec<(usize, Scalar)>> = Vec::new();
    let len = coords.len();
    for &pos in &columns {
        let f = coords.basis_form(pos);
        let mut col = Vec::new();
        for (a, d) in derivations.iter().enumerate() {
            for (r, v) in coords.to_vector(&lie_derivative(d, &f, k)?) {
                col.push((a * len + r, v));
            }
        }
        entries.push(col);
    }
    let null = crate::linalg::sparse_nullspace(transpose(&entries), columns.len());
    Ok(null
        .into_iter()
        .map(|v| {
            let v: Vec<(usize, Scalar)> = v.into_iter().map(|(j, x)| (columns[j], x)).collect();
            coords.from_vector(&v)
        })
        .collect())
}

/// Transposes a column-major sparse matrix into sparse rows.
pub(crate) fn transpose(columns: &[Vec<(usize, Scalar)>]) -> Vec<Vec<(usize, Scalar)>> {
    let mut rows: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = Default::default();
    for (j, col) in columns.iter().enumerate() {
        for (r, v) in col {
            rows.entry(*r).or_default().push((j, v.clone()));
        }
    }
    rows.into_values().collect()
}
