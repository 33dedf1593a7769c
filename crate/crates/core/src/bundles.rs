//! Graded modules over M(n|m), connections on `im P ⊂ V^{p|q}`, curvature,
//! the Bianchi identity and flat connections on `V^{1|0}`.

use serde::{Deserialize, Serialize};

use crate::basis::StructureConstants;
use crate::calculus::{canonical_theta, exterior_derivative};
use crate::error::{Error, Result};
use crate::forms::GradedForm;
use crate::linalg::{sparse_rank, sparsify};
use crate::matrix::{graded_commutator, GradedMatrix, Parity};
use crate::scalar::Scalar;

/// Column-space block sizes `(r, s)` of the module `M(n|m; r|s)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedModuleShape {
    pub r: usize,
    pub s: usize,
}

impl GradedModuleShape {
    pub fn new(r: usize, s: usize) -> Result<GradedModuleShape> {
        if r + s == 0 {
            return Err(Error::TooSmall { n: r, m: s });
        }
        Ok(GradedModuleShape { r, s })
    }

    /// Parity of the `(i, j)` entry of an element of `M(n|m; r|s)`.
    pub fn entry_parity(&self, n: usize, i: usize, j: usize) -> Parity {
        Parity::from_bit(usize::from(i >= n) + usize::from(j >= self.r))
    }
}

/// The free ranks `(p, q)` with `pn + qm = r`, `pm + qn = s`, if the module
/// `M(n|m; r|s)` is graded-free.
pub fn is_graded_free(n: usize, m: usize, r: usize, s: usize) -> Option<(usize, usize)> {
    let (n, m, r, s) = (n as i64, m as i64, r as i64, s as i64);
    let det = n * n - m * m;
    if det == 0 {
        return None;
    }
    let (pn, qn) = (r * n - s * m, s * n - r * m);
    if pn % det != 0 || qn % det != 0 {
        return None;
    }
    let (p, q) = (pn / det, qn / det);
    (p >= 0 && q >= 0 && p + q >= 1).then_some((p as usize, q as usize))
}

/// A `rows × cols` matrix of forms of one degree over M(n|m). Products are
/// `(a ∧ b)_A^B = Σ_C a_A^C ∧ b_C^B`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormMatrix {
    rows: usize,
    cols: usize,
    degree: usize,
    entries: Vec<GradedForm>,
}

impl FormMatrix {
    pub fn zero(n: usize, m: usize, rows: usize, cols: usize, degree: usize) -> FormMatrix {
        FormMatrix { rows, cols, degree, entries: vec![GradedForm::zero(n, m, degree); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GradedForm) -> Result<FormMatrix> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        let degree = entries.first().map_or(0, |e| e.degree());
        if let Some(bad) = entries.iter().find(|e| e.degree() != degree) {
            return Err(Error::DegreeMismatch { expected: degree, found: bad.degree() });
        }
        Ok(FormMatrix { rows, cols, degree, entries })
    }

    pub fn from_matrices(rows: usize, cols: usize, mats: &[GradedMatrix]) -> Result<FormMatrix> {
        if mats.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}×{cols} matrix", mats.len())));
        }
        FormMatrix::from_fn(rows, cols, |i, j| GradedForm::from_matrix(mats[i * cols + j].clone()))
    }

    pub fn identity(n: usize, m: usize, size: usize) -> FormMatrix {
        let mut out = FormMatrix::zero(n, m, size, size, 0);
        for i in 0..size {
            out.entries[i * size + i] = GradedForm::from_matrix(GradedMatrix::identity(n, m));
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedForm {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: GradedForm) {
        assert_eq!(f.degree(), self.degree);
        self.entries[i * self.cols + j] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Number of nonzero entries.
    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    pub fn wedge(&self, other: &FormMatrix) -> Result<FormMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m) = (self.entries[0].n(), self.entries[0].m());
        let mut out = FormMatrix::zero(n, m, self.rows, other.cols, self.degree + other.degree);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GradedForm::zero(n, m, self.degree + other.degree);
                for c in 0..self.cols {
                    let (a, b) = (self.get(i, c), other.get(c, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.wedge(b)?)?;
                    }
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    fn zip(
        &self,
        other: &FormMatrix,
        f: impl Fn(&GradedForm, &GradedForm) -> Result<GradedForm>,
    ) -> Result<FormMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("form matrices of different sizes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(FormMatrix { rows: self.rows, cols: self.cols, degree: self.degree, entries })
    }

    pub fn add(&self, other: &FormMatrix) -> Result<FormMatrix> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &FormMatrix) -> Result<FormMatrix> {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &Scalar) -> FormMatrix {
        FormMatrix { entries: self.entries.iter().map(|e| e.scale(c)).collect(), ..self.clone() }
    }

    /// Entrywise exterior derivative.
    pub fn d(&self, k: &StructureConstants) -> Result<FormMatrix> {
        let entries = self.entries.iter().map(|e| exterior_derivative(e, k)).collect::<Result<_>>()?;
        Ok(FormMatrix { rows: self.rows, cols: self.cols, degree: self.degree + 1, entries })
    }

    /// Whether entry `(A, B)` has parity `|A| + |B| + shift` for the given
    /// generator parities.
    pub fn has_parity(&self, row_parity: &[Parity], col_parity: &[Parity], shift: Parity) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let e = self.get(i, j);
                e.is_zero() || e.parity() == Some(row_parity[i] + col_parity[j] + shift)
            })
        })
    }
}

/// Parities of the generators `ε_A` of `V^{p|q}`.
pub fn generator_parities(p: usize, q: usize) -> Vec<Parity> {
    (0..p + q).map(|a| Parity::from_bit(usize::from(a >= p))).collect()
}

/// Connection `∇ = ∇_{Pd} + α` on `im P ⊂ V^{p|q}`.
#[derive(Clone, Debug)]
pub struct Connection {
    p: usize,
    q: usize,
    projector: FormMatrix,
    alpha: FormMatrix,
}

impl Connection {
    pub fn new(p: usize, q: usize, projector: FormMatrix, alpha: FormMatrix) -> Result<Connection> {
        let size = p + q;
        if size == 0 {
            return Err(Error::InvalidConnection("p + q must be positive".into()));
        }
        for (name, f, deg) in [("P", &projector, 0), ("alpha", &alpha, 1)] {
            if f.rows != size || f.cols != size || f.degree != deg {
                return Err(Error::InvalidConnection(format!("{name} must be a {size}×{size} matrix of {deg}-forms")));
            }
        }
        let par = generator_parities(p, q);
        if !projector.has_parity(&par, &par, Parity::Even) {
            return Err(Error::InvalidConnection("P is not even".into()));
        }
        if !alpha.has_parity(&par, &par, Parity::Even) {
            return Err(Error::InvalidConnection("alpha is not even".into()));
        }
        if projector.wedge(&projector)? != projector {
            return Err(Error::InvalidConnection("P is not idempotent".into()));
        }
        if projector.wedge(&alpha)?.wedge(&projector)? != alpha {
            return Err(Error::InvalidConnection("alpha is not of the form P α P".into()));
        }
        Ok(Connection { p, q, projector, alpha })
    }

    /// Connection on the free module `V^{p|q}` (`P = 1`).
    pub fn free(n: usize, m: usize, p: usize, q: usize, alpha: FormMatrix) -> Result<Connection> {
        Connection::new(p, q, FormMatrix::identity(n, m, p + q), alpha)
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn projector(&self) -> &FormMatrix {
        &self.projector
    }

    pub fn alpha(&self) -> &FormMatrix {
        &self.alpha
    }

    /// Whether `x = P x P`, i.e. `x` is the form matrix of a module map on `im P`.
    pub fn is_corner(&self, x: &FormMatrix) -> Result<bool> {
        Ok(self.projector.wedge(x)?.wedge(&self.projector)? == *x)
    }

    /// Applies the extended connection to a row `Φ = Σ Φ^A ⊗ ε_A` of
    /// `p`-forms with `Φ P = Φ`:
    /// `∇Φ = dΦ·P + (−1)^p Φ ∧ (dP·P + α)`.
    pub fn apply(&self, phi: &FormMatrix, k: &StructureConstants) -> Result<FormMatrix> {
        if phi.rows != 1 || phi.cols != self.p + self.q {
            return Err(Error::ShapeMismatch("expected a row of forms".into()));
        }
        let dp = self.projector.d(k)?;
        let first = phi.d(k)?.wedge(&self.projector)?;
        let twist = dp.wedge(&self.projector)?.add(&self.alpha)?;
        let second = phi.wedge(&twist)?.scale(&Scalar::sign(phi.degree % 2 == 1));
        first.add(&second)
    }

    /// `Φ ↦ Φ P`, projecting a row onto `im P`.
    pub fn project(&self, phi: &FormMatrix) -> Result<FormMatrix> {
        phi.wedge(&self.projector)
    }
}

/// `R = −α∧α + P∧dα∧P − P∧dP∧dP`.
pub fn curvature_forms(conn: &Connection, k: &StructureConstants) -> Result<FormMatrix> {
    let p = &conn.projector;
    let dp = p.d(k)?;
    let aa = conn.alpha.wedge(&conn.alpha)?;
    let pdap = p.wedge(&conn.alpha.d(k)?)?.wedge(p)?;
    let pdpdp = p.wedge(&dp)?.wedge(&dp)?;
    pdap.sub(&aa)?.sub(&pdpdp)
}

/// `P∧dR∧P − (α∧R − R∧α)`, which must vanish.
pub fn bianchi_defect(conn: &Connection, curvature: &FormMatrix, k: &StructureConstants) -> Result<FormMatrix> {
    let p = &conn.projector;
    let pdrp = p.wedge(&curvature.d(k)?)?.wedge(p)?;
    let comm = conn.alpha.wedge(curvature)?.sub(&curvature.wedge(&conn.alpha)?)?;
    pdrp.sub(&comm)
}

pub fn bianchi_check(conn: &Connection, k: &StructureConstants) -> Result<bool> {
    let r = curvature_forms(conn, k)?;
    Ok(bianchi_defect(conn, &r, k)?.is_zero())
}

/// 1×1 form matrix.
pub fn scalar_form_matrix(f: GradedForm) -> FormMatrix {
    FormMatrix { rows: 1, cols: 1, degree: f.degree(), entries: vec![f] }
}

/// Connection on `V^{1|0}` with connection form `α`.
pub fn line_connection(alpha: GradedForm, k: &StructureConstants) -> Result<Connection> {
    Connection::free(k.n(), k.m(), 1, 0, scalar_form_matrix(alpha))
}

/// `α = Θ − Σ ρ_A ∧ θ^A`.
pub fn connection_form_from_rho(rho: &[GradedMatrix], k: &StructureConstants) -> Result<GradedForm> {
    check_rho(rho, k)?;
    let mut alpha = canonical_theta(k)?;
    for (a, r) in rho.iter().enumerate() {
        alpha = alpha.sub(&GradedForm::monomial(r, &[a]))?;
    }
    Ok(alpha)
}

fn check_rho(rho: &[GradedMatrix], k: &StructureConstants) -> Result<()> {
    if rho.len() != k.dim() {
        return Err(Error::ShapeMismatch(format!("{} matrices, expected {}", rho.len(), k.dim())));
    }
    for (a, r) in rho.iter().enumerate() {
        if !r.is_homogeneous(k.parity(a)) {
            return Err(Error::ParityMismatch(format!("rho_{} must have the parity of E_{}", a + 1, a + 1)));
        }
    }
    Ok(())
}

/// `Ω_AB = [ρ_B, ρ_A]_g − Σ_C c_BA^C ρ_C`.
pub fn flat_curvature_coefficients(rho: &[GradedMatrix], k: &StructureConstants) -> Result<Vec<Vec<GradedMatrix>>> {
    check_rho(rho, k)?;
    let dim = k.dim();
    let mut out = vec![vec![GradedMatrix::zero(k.n(), k.m()); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let mut v = graded_commutator(&rho[b], &rho[a])?;
            for (c, x) in k.c_fiber(b, a) {
                v.add_scaled(&rho[*c], &-x);
            }
            out[a][b] = v;
        }
    }
    Ok(out)
}

/// `½ Σ Ω_AB ∧ θ^A ∧ θ^B`.
pub fn curvature_from_coefficients(omega: &[Vec<GradedMatrix>], k: &StructureConstants) -> GradedForm {
    let half = Scalar::ratio(1, 2);
    let mut out = GradedForm::zero(k.n(), k.m(), 2);
    for (a, row) in omega.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            if !x.is_zero() {
                out = out.add(&GradedForm::monomial(&x.scale(&half), &[a, b])).expect("same degree");
            }
        }
    }
    out
}

/// `ρ_A = g E_A g⁻¹`.
pub fn conjugated_rho(g: &GradedMatrix, k: &StructureConstants) -> Result<Vec<GradedMatrix>> {
    if !g.is_homogeneous(Parity::Even) {
        return Err(Error::ParityMismatch("conjugating matrix must be even".into()));
    }
    let ginv = g.inverse().ok_or_else(|| Error::Singular("conjugating matrix".into()))?;
    Ok(k.basis().elements().iter().map(|e| g.matmul(e).matmul(&ginv)).collect())
}

/// Whether `E_A ↦ ρ_A` preserves brackets and is injective.
pub fn is_injective_homomorphism(rho: &[GradedMatrix], k: &StructureConstants) -> Result<bool> {
    let omega = flat_curvature_coefficients(rho, k)?;
    if omega.iter().flatten().any(|x| !x.is_zero()) {
        return Ok(false);
    }
    let rows = rho.iter().map(|r| sparsify(r.entries())).collect::<Vec<_>>();
    Ok(sparse_rank(rows) == k.dim())
}

/// Exact roots `t` of `Ω(tρ) = 0` over the line through `ρ`. Each entry of
/// `Ω(tρ)` is `t²·[ρ_B, ρ_A]_g − t·Σ c ρ_C`, so the roots are `t = 0` and at
/// most one more common root.
pub fn flat_points_on_line(rho: &[GradedMatrix], k: &StructureConstants) -> Result<Vec<Scalar>> {
    check_rho(rho, k)?;
    let dim = k.dim();
    let mut other: Option<Option<Scalar>> = None;
    for a in 0..dim {
        for b in 0..dim {
            let quad = graded_commutator(&rho[b], &rho[a])?;
            let mut lin = GradedMatrix::zero(k.n(), k.m());
            for (c, x) in k.c_fiber(b, a) {
                lin.add_scaled(&rho[*c], &-x);
            }
            for (qv, lv) in quad.entries().iter().zip(lin.entries()) {
                // t·(qv·t + lv) = 0
                let root = match (qv.is_zero(), lv.is_zero()) {
                    (true, true) => continue,
                    (true, false) => None,
                    (false, _) => Some(&-lv * &qv.recip()),
                };
                other = Some(match other {
                    None => root,
                    Some(prev) if prev == root => prev,
                    Some(_) => None,
                });
            }
        }
    }
    let mut roots = vec![Scalar::ZERO];
    match other {
        // every entry vanishes identically: the whole line is flat
        None => roots.push(Scalar::ONE),
        Some(Some(t)) if !t.is_zero() => roots.push(t),
        _ => {}
    }
    Ok(roots)
}

/// Summary of one flat-connection experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub label: String,
    pub flat: bool,
    /// Number of `(A, B)` with `Ω_AB ≠ 0`.
    pub nonzero_coefficients: usize,
}

pub fn flatness_report(label: &str, rho: &[GradedMatrix], k: &StructureConstants) -> Result<FlatnessReport> {
    let omega = flat_curvature_coefficients(rho, k)?;
    let nonzero = omega.iter().flatten().filter(|x| !x.is_zero()).count();
    Ok(FlatnessReport { label: label.into(), flat: nonzero == 0, nonzero_coefficients: nonzero })
}
