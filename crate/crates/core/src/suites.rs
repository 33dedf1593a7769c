//! Verification suites run by `supergeom verify`. Each suite returns a
//! [`VerificationReport`]; sampling is driven by a seeded [`Sampler`].

use crate::basis::StructureConstants;
use crate::bundles::{
    bianchi_check, conjugated_rho, connection_form_from_rho, curvature_forms, generator_parities, is_graded_free,
    line_connection, Connection, FormMatrix,
};
use crate::calculus::{
    canonical_theta, derivation_bracket, exact_one_form_span, exterior_derivative, interior_product,
    invariant_one_forms, lie_derivative, theta_commutator, theta_inversion, GeneratorDifferential,
};
use crate::error::Result;
use crate::forms::{
    commutation_factor, index_set, permutations, wedge_value_by_definition, DerivationVector, FormCoordinates,
    GradedForm,
};
use crate::identities::verify_structure_identities;
use crate::matrix::{graded_commutator, GradedMatrix, Parity};
use crate::random::Sampler;
use crate::report::{CheckEntry, Tally, VerificationReport};
use crate::scalar::Scalar;
use crate::symplectic::{closed_invariant_two_forms, is_multiple_of, SymplecticForm};

/// Options shared by all suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Highest form degree that may be materialised.
    pub degree_cap: usize,
    /// Highest degree of a form that is differentiated by the sampled checks.
    pub max_degree: usize,
    /// Random samples per degree for the sampled checks.
    pub samples: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64, degree_cap: usize) -> SuiteConfig {
        SuiteConfig { seed, degree_cap, max_degree: 3, samples: 20 }
    }

    /// `d` raises the degree by one, so the cap bounds the degree reached.
    fn top_degree(&self) -> usize {
        self.max_degree.min(self.degree_cap.saturating_sub(1))
    }

    /// Whether the cap forces the checks below the requested degree.
    pub fn is_truncated(&self) -> bool {
        self.max_degree + 1 > self.degree_cap
    }
}

fn sgn(odd: bool) -> Scalar {
    Scalar::sign(odd)
}

fn one_based(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", parts.join(","))
}

fn parities_label(p: &[Parity]) -> String {
    p.iter().map(|x| if x.is_odd() { '1' } else { '0' }).collect()
}

/// Oracle for `γ`: bubble-sort the permuted letters back into order and
/// collect `(−1)^{|a||b|}` for every adjacent swap.
fn commutation_factor_by_swaps(sigma: &[usize], degrees: &[Parity]) -> bool {
    let mut letters = sigma.to_vec();
    let mut negative = false;
    for i in 0..letters.len() {
        for j in 0..letters.len() - 1 - i {
            if letters[j] > letters[j + 1] {
                if degrees[letters[j]].is_odd() && degrees[letters[j + 1]].is_odd() {
                    negative = !negative;
                }
                letters.swap(j, j + 1);
            }
        }
    }
    negative
}

/// The commutation factor against its swap oracle, and the wedge product
/// against its permutation-sum definition.
pub fn commutation_suite(k: &StructureConstants, cfg: &SuiteConfig) -> VerificationReport {
    let mut gamma = Tally::new("gamma_factor");
    for p in 0..=4 {
        for bits in 0..(1usize << p) {
            let degrees: Vec<Parity> = (0..p).map(|i| Parity::from_bit((bits >> i) & 1)).collect();
            for sigma in permutations(p) {
                let ok = commutation_factor(&sigma, &degrees) == commutation_factor_by_swaps(&sigma, &degrees);
                gamma.record(ok, || format!("sigma={} degrees={}", one_based(&sigma), parities_label(&degrees)));
            }
        }
    }
    let (n, m) = (k.n(), k.m());
    let ne = k.even_count();
    let mut wedge = Tally::new("wedge_definition_theta");
    for p in 0..=2 {
        for q in 0..=2 {
            if p + q == 0 || p + q > 3 {
                continue;
            }
            let left_idx = index_set(ne, k.dim() - ne, p);
            let right_idx = index_set(ne, k.dim() - ne, q);
            let targets = index_set(ne, k.dim() - ne, p + q);
            for i in &left_idx {
                let x = GradedForm::monomial(&GradedMatrix::identity(n, m), i.entries());
                for j in &right_idx {
                    let y = GradedForm::monomial(&GradedMatrix::identity(n, m), j.entries());
                    let w = x.wedge(&y).expect("same shape");
                    let yp = j.parity(ne);
                    for t in &targets {
                        let ok = w.value_at(t.entries()) == wedge_value_by_definition(&x, &y, yp, t.entries());
                        wedge.record(ok, || {
                            format!(
                                "theta{} ^ theta{} on {}",
                                one_based(i.entries()),
                                one_based(j.entries()),
                                one_based(t.entries())
                            )
                        });
                    }
                }
            }
        }
    }
    let mut sampled = Tally::new("wedge_definition_sampled");
    let mut s = Sampler::new(n, m, cfg.seed).fork("wedge", cfg.seed);
    for _ in 0..cfg.samples {
        let (p, q) = (s.index(3), s.index(2));
        let (xp, yp) = (s.parity(), s.parity());
        let x = s.form(p, xp, 2);
        let y = s.form(q, yp, 2);
        let w = x.wedge(&y).expect("same shape");
        for t in index_set(ne, k.dim() - ne, p + q) {
            let ok = w.value_at(t.entries()) == wedge_value_by_definition(&x, &y, yp, t.entries());
            sampled.record(ok, || format!("degrees ({p},{q}) on {}", one_based(t.entries())));
        }
    }
    VerificationReport::new("commutation_factor", vec![gamma.finish(), wedge.finish(), sampled.finish()])
}

/// `d² = 0`, `d L = L d`, the interior-product relations and the Leibniz rules.
pub fn cartan_suite(k: &StructureConstants, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let (n, m) = (k.n(), k.m());
    let top = cfg.top_degree();
    let dim = k.dim();
    let one = GradedMatrix::identity(n, m);
    let ne = k.even_count();
    let basis_derivations: Vec<DerivationVector> = (0..dim).map(|a| DerivationVector::basis(n, m, a)).collect();

    let mut dd = Tally::new("d_squared");
    let mut dl = Tally::new("d_commutes_with_lie");
    let mut ii = Tally::new("interior_anticommute");
    let mut li = Tally::new("lie_interior_commutator");
    let mut magic = Tally::new("cartan_magic_formula");
    let mut check = |w: &GradedForm,
                     wp: Parity,
                     ds: &[(DerivationVector, Parity)],
                     label: &dyn Fn() -> String|
     -> Result<()> {
        let p = w.degree();
        let dw = exterior_derivative(w, k)?;
        if p + 2 <= cfg.degree_cap {
            dd.record(exterior_derivative(&dw, k)?.is_zero(), label);
        }
        let lws: Vec<GradedForm> = ds.iter().map(|(d, _)| lie_derivative(d, w, k)).collect::<Result<_>>()?;
        let iws: Vec<GradedForm> =
            if p > 0 { ds.iter().map(|(d, _)| interior_product(d, w)).collect::<Result<_>>()? } else { Vec::new() };
        for (i, (d, dp)) in ds.iter().enumerate() {
            let lw = &lws[i];
            dl.record(exterior_derivative(lw, k)? == lie_derivative(d, &dw, k)?, || format!("{} D={:?}", label(), d));
            let f = sgn(dp.is_odd() && wp.is_odd());
            let mut lhs = interior_product(d, &dw)?;
            if p > 0 {
                lhs = lhs.add(&exterior_derivative(&iws[i], k)?)?;
            }
            magic.record(lhs == lw.scale(&f), || format!("{} D={:?}", label(), d));
            if p == 0 {
                continue;
            }
            for (j, (d2, dp2)) in ds.iter().enumerate() {
                let br = derivation_bracket(d, d2, k);
                let left = lie_derivative(d, &iws[j], k)?.sub(&interior_product(d2, lw)?)?;
                li.record(left == interior_product(&br, w)?.scale(&f), || format!("{} D={:?} D'={:?}", label(), d, d2));
                if p >= 2 {
                    let a = interior_product(d, &iws[j])?;
                    let b = interior_product(d2, &iws[i])?;
                    let g = sgn(dp.is_odd() && dp2.is_odd());
                    ii.record(a.add(&b.scale(&g))?.is_zero(), || format!("{} D={:?} D'={:?}", label(), d, d2));
                }
            }
        }
        Ok(())
    };

    let basis_pairs: Vec<(DerivationVector, Parity)> =
        basis_derivations.iter().enumerate().map(|(a, d)| (d.clone(), k.parity(a))).collect();
    for p in 0..=top {
        for idx in index_set(ne, dim - ne, p) {
            let w = GradedForm::monomial(&one, idx.entries());
            check(&w, idx.parity(ne), &basis_pairs, &|| format!("theta{}", one_based(idx.entries())))?;
        }
    }
    let mut s = Sampler::new(n, m, cfg.seed).fork("cartan", cfg.seed);
    for p in 0..=top {
        for i in 0..cfg.samples {
            let wp = s.parity();
            let w = s.form(p, wp, 3);
            let ds: Vec<(DerivationVector, Parity)> = (0..2)
                .map(|_| {
                    let dp = s.parity();
                    (s.derivation(dp), dp)
                })
                .collect();
            check(&w, wp, &ds, &|| format!("sample {i} of degree {p}"))?;
        }
    }

    let mut leib_d = Tally::new("leibniz_d");
    let mut leib_l = Tally::new("leibniz_lie");
    let mut leib_i = Tally::new("leibniz_interior");
    let mut center = Tally::new("center_valued_commute");
    let mut s = Sampler::new(n, m, cfg.seed).fork("leibniz", cfg.seed);
    for i in 0..cfg.samples {
        let p = s.index(top.max(1));
        let q = s.index((top - p).max(1).min(top + 1 - p));
        if p + q > top {
            continue;
        }
        let (wp, vp, dp) = (s.parity(), s.parity(), s.parity());
        let w = s.form(p, wp, 2);
        let v = s.form(q, vp, 2);
        let d = s.derivation(dp);
        let wv = w.wedge(&v)?;
        let pf = sgn(p % 2 == 1);
        let f = sgn(dp.is_odd() && wp.is_odd());
        let rhs = exterior_derivative(&w, k)?.wedge(&v)?.add(&w.wedge(&exterior_derivative(&v, k)?)?.scale(&pf))?;
        leib_d.record(exterior_derivative(&wv, k)? == rhs, || format!("sample {i}"));
        let rhs = lie_derivative(&d, &w, k)?.wedge(&v)?.add(&w.wedge(&lie_derivative(&d, &v, k)?)?.scale(&f))?;
        leib_l.record(lie_derivative(&d, &wv, k)? == rhs, || format!("sample {i}"));
        if p + q >= 1 {
            let mut rhs = GradedForm::zero(n, m, p + q - 1);
            if p >= 1 {
                let fv = sgn(dp.is_odd() && vp.is_odd());
                rhs = rhs.add(&interior_product(&d, &w)?.wedge(&v)?.scale(&fv))?;
            }
            if q >= 1 {
                rhs = rhs.add(&w.wedge(&interior_product(&d, &v)?)?.scale(&pf))?;
            }
            leib_i.record(interior_product(&d, &wv)? == rhs, || format!("sample {i}"));
        }
        // center-valued forms graded-commute with matrices
        let mp = s.parity();
        let mat = s.matrix(mp);
        let zp = s.parity();
        let mut z = GradedForm::zero(n, m, p);
        for idx in index_set(ne, dim - ne, p).into_iter().filter(|x| x.parity(ne) == zp).take(3) {
            z.add_term(idx, &one.scale(&s.small_int()));
        }
        let lhs = GradedForm::from_matrix(mat.clone()).wedge(&z)?;
        let rhs = z.wedge(&GradedForm::from_matrix(mat))?.scale(&sgn(mp.is_odd() && zp.is_odd()));
        center.record(lhs == rhs, || format!("sample {i}"));
    }
    let mut entries = vec![dd.finish(), dl.finish(), ii.finish(), li.finish(), magic.finish()];
    entries.extend([leib_d.finish(), leib_l.finish(), leib_i.finish(), center.finish()]);
    if cfg.is_truncated() {
        entries.push(CheckEntry::pass("degree_coverage", 0).with_note(format!("limited to degree {top} by the cap")));
    }
    Ok(VerificationReport::new("cartan_relations", entries))
}

/// The two constructions of `d` agree on every basis form.
pub fn dual_route_suite(k: &StructureConstants, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut gen = GeneratorDifferential::new(k);
    let mut t = Tally::new("exterior_derivative_routes");
    for p in 0..=cfg.top_degree() {
        let coords = FormCoordinates::new(k.n(), k.m(), p);
        for j in 0..coords.len() {
            let f = coords.basis_form(j);
            let ok = exterior_derivative(&f, k)? == gen.apply(&f)?;
            t.record(ok, || {
                let s = k.n() + k.m();
                let block = s * s;
                let e = j % block;
                format!("e{}{} theta{}", e / s + 1, e % s + 1, one_based(coords.indices()[j / block].entries()))
            });
        }
    }
    Ok(VerificationReport::new("dual_route_differential", vec![t.finish()]))
}

/// Invariance and structure equations of `Θ`, the inversion formula and
/// bimodule generation.
pub fn theta_suite(k: &StructureConstants) -> Result<VerificationReport> {
    let (n, m) = (k.n(), k.m());
    let theta = canonical_theta(k)?;
    let mut inv = Tally::new("theta_invariant");
    for a in 0..k.dim() {
        let ok = lie_derivative(&DerivationVector::basis(n, m, a), &theta, k)?.is_zero();
        inv.record(ok, || format!("A={}", a + 1));
    }
    let mut structure = Tally::new("theta_structure_equation");
    structure.record(exterior_derivative(&theta, k)? == theta.wedge(&theta)?, || "dTheta - Theta^Theta".into());
    let mut de = Tally::new("d_as_theta_commutator");
    for a in 0..k.dim() {
        let e = k.basis().element(a);
        let ok = exterior_derivative(&GradedForm::from_matrix(e.clone()), k)? == theta_commutator(&theta, e);
        de.record(ok, || format!("A={}", a + 1));
    }
    let s = n + m;
    for e in 0..s * s {
        let u = GradedMatrix::unit(n, m, e / s, e % s);
        let ok = exterior_derivative(&GradedForm::from_matrix(u.clone()), k)? == theta_commutator(&theta, &u);
        de.record(ok, || format!("e{}{}", e / s + 1, e % s + 1));
    }
    let sols = invariant_one_forms(k)?;
    let uniq = if sols.len() == 1 && is_multiple_of(&theta, &sols[0]) {
        CheckEntry::pass("invariant_one_forms", 1)
    } else {
        CheckEntry::fail("invariant_one_forms", 1, format!("solution space of dimension {}", sols.len()))
    };
    let mut inversion = Tally::new("theta_inversion");
    for (a, f) in theta_inversion(k)?.iter().enumerate() {
        inversion.record(*f == GradedForm::theta(n, m, a), || format!("A={}", a + 1));
    }
    let span = exact_one_form_span(k)?;
    let full = FormCoordinates::new(n, m, 1).len();
    let bimodule = if span == full {
        CheckEntry::pass("bimodule_generation", 1).with_note(format!("rank {span}"))
    } else {
        CheckEntry::fail("bimodule_generation", 1, format!("rank {span} of {full}"))
    };
    Ok(VerificationReport::new(
        "canonical_theta",
        vec![inv.finish(), structure.finish(), de.finish(), uniq, inversion.finish(), bimodule],
    ))
}

/// `dΘ` as a symplectic structure: Hamiltonian fields, Poisson bracket and uniqueness.
pub fn symplectic_suite(k: &StructureConstants, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let (n, m) = (k.n(), k.m());
    let dt = exterior_derivative(&canonical_theta(k)?, k)?;
    let mut entries = Vec::new();
    let w = match SymplecticForm::new(dt.clone(), k) {
        Ok(w) => {
            entries.push(CheckEntry::pass("d_theta_symplectic", 1));
            w
        }
        Err(e) => {
            entries.push(CheckEntry::fail("d_theta_symplectic", 1, e.to_string()));
            return Ok(VerificationReport::new("symplectic", entries));
        }
    };
    let mut ham = Tally::new("hamiltonian_fields");
    for c in [1, 2, -3] {
        let c = Scalar::int(c);
        let wc = SymplecticForm::new(dt.scale(&c), k)?;
        for a in 0..k.dim() {
            let ok = wc.hamiltonian_field(k.basis().element(a))? == DerivationVector::basis(n, m, a).scale(&c.recip());
            ham.record(ok, || format!("c={c} A={}", a + 1));
        }
    }
    let mut pb = Tally::new("poisson_is_commutator");
    let mut hom = Tally::new("hamiltonian_homomorphism");
    for a in 0..k.dim() {
        for b in 0..k.dim() {
            let (ea, eb) = (k.basis().element(a), k.basis().element(b));
            let br = graded_commutator(ea, eb)?;
            pb.record(w.poisson_bracket(ea, eb)? == br, || format!("A={} B={}", a + 1, b + 1));
            let lhs = w.hamiltonian_field(&br)?;
            let rhs = derivation_bracket(&w.hamiltonian_field(ea)?, &w.hamiltonian_field(eb)?, k);
            hom.record(lhs == rhs, || format!("A={} B={}", a + 1, b + 1));
        }
    }
    let mut kernel = Tally::new("hamiltonian_kernel_is_center");
    kernel.record(w.hamiltonian_field(&GradedMatrix::identity(n, m))?.is_zero(), || "D(1) != 0".into());
    let mut leib = Tally::new("poisson_leibniz");
    let mut s = Sampler::new(n, m, cfg.seed).fork("poisson", cfg.seed);
    for i in 0..cfg.samples {
        let (p, q) = (s.parity(), s.parity());
        let (a, b, c) = (s.matrix(p), s.matrix(q), s.matrix_any());
        let lhs = w.poisson_bracket(&a, &b.matmul(&c))?;
        let rhs = &w.poisson_bracket(&a, &b)?.matmul(&c)
            + &b.matmul(&w.poisson_bracket(&a, &c)?).scale(&sgn(p.is_odd() && q.is_odd()));
        leib.record(lhs == rhs, || format!("sample {i}"));
    }
    entries.extend([ham.finish(), pb.finish(), hom.finish(), kernel.finish(), leib.finish()]);
    let span = closed_invariant_two_forms(k)?;
    entries.push(if span.len() == 1 && is_multiple_of(&span[0], &dt) {
        CheckEntry::pass("symplectic_uniqueness", 1)
    } else {
        CheckEntry::fail(
            "symplectic_uniqueness",
            1,
            format!("closed invariant even 2-forms of dimension {}", span.len()),
        )
    });
    Ok(VerificationReport::new("symplectic", entries))
}

/// `P = S·diag(e₁₁, 1, 0)·S⁻¹` on `V^{2|1}`, `S = 1 + N` with `N` in row 0.
pub fn sheared_projector(y_even: &GradedMatrix, x_odd: &GradedMatrix) -> Result<FormMatrix> {
    let (n, m) = (y_even.n(), y_even.m());
    let z = GradedMatrix::zero(n, m);
    let one = GradedMatrix::identity(n, m);
    let s = FormMatrix::from_matrices(
        3,
        3,
        &[
            one.clone(),
            y_even.clone(),
            x_odd.clone(),
            z.clone(),
            one.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            one.clone(),
        ],
    )?;
    let sinv = FormMatrix::from_matrices(
        3,
        3,
        &[one.clone(), -y_even, -x_odd, z.clone(), one.clone(), z.clone(), z.clone(), z.clone(), one.clone()],
    )?;
    let d = FormMatrix::from_matrices(
        3,
        3,
        &[GradedMatrix::unit(n, m, 0, 0), z.clone(), z.clone(), z.clone(), one, z.clone(), z.clone(), z.clone(), z],
    )?;
    s.wedge(&d)?.wedge(&sinv)
}

/// Flat and curved line connections, Bianchi identities and graded freeness.
pub fn bundle_suite(k: &StructureConstants, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let (n, m) = (k.n(), k.m());
    let theta = canonical_theta(k)?;
    let s_size = n + m;
    let mut flat = Tally::new("flat_connections");
    let mut bianchi = Tally::new("bianchi_identity");
    let theta_conn = line_connection(theta.clone(), k)?;
    flat.record(curvature_forms(&theta_conn, k)?.is_zero(), || "alpha = Theta".into());
    bianchi.record(bianchi_check(&theta_conn, k)?, || "alpha = Theta".into());
    let mut gs = Vec::new();
    let mut diag: Vec<Scalar> = vec![Scalar::ONE; s_size];
    diag[1] = Scalar::int(2);
    gs.push(GradedMatrix::diagonal(n, m, &diag)?);
    let mut s = Sampler::new(n, m, cfg.seed).fork("bundles", cfg.seed);
    gs.push(s.invertible_even());
    gs.push(s.invertible_even());
    for (i, g) in gs.iter().enumerate() {
        let alpha = connection_form_from_rho(&conjugated_rho(g, k)?, k)?;
        let conn = line_connection(alpha, k)?;
        flat.record(curvature_forms(&conn, k)?.is_zero(), || format!("conjugation {}", i + 1));
        bianchi.record(bianchi_check(&conn, k)?, || format!("conjugation {}", i + 1));
    }
    let mut curved = Tally::new("scaled_theta_curved");
    let conn2 = line_connection(theta.scale(&Scalar::int(2)), k)?;
    let r2 = curvature_forms(&conn2, k)?;
    curved.record(!r2.is_zero(), || "alpha = 2 Theta is flat".into());
    curved.record(*r2.get(0, 0) == theta.wedge(&theta)?.scale(&Scalar::int(-2)), || "R != -2 Theta^Theta".into());
    bianchi.record(bianchi_check(&conn2, k)?, || "alpha = 2 Theta".into());
    let par = generator_parities(2, 1);
    for i in 0..3 {
        let p = sheared_projector(&s.matrix(Parity::Even), &s.matrix(Parity::Odd))?;
        let x = FormMatrix::from_fn(3, 3, |a, b| s.form(1, par[a] + par[b], 2))?;
        let alpha = p.wedge(&x)?.wedge(&p)?;
        let conn = Connection::new(2, 1, p, alpha)?;
        bianchi.record(bianchi_check(&conn, k)?, || format!("projector sample {}", i + 1));
        // ∇² computed by applying the connection twice equals v ∧ R
        let r = curvature_forms(&conn, k)?;
        let vp = s.parity();
        let v = conn.project(&FormMatrix::from_fn(1, 3, |_, b| GradedForm::from_matrix(s.matrix(vp + par[b])))?)?;
        let twice = conn.apply(&conn.apply(&v, k)?, k)?;
        bianchi.record(twice == v.wedge(&r)?, || format!("curvature as square, projector sample {}", i + 1));
    }
    let mut free = Tally::new("graded_freeness");
    for r in 0..=10 {
        for sz in 0..=10 {
            let brute = (0..=10usize)
                .flat_map(|p| (0..=10usize).map(move |q| (p, q)))
                .find(|&(p, q)| p + q >= 1 && p * n + q * m == r && p * m + q * n == sz);
            free.record(is_graded_free(n, m, r, sz) == brute, || format!("r={r} s={sz}"));
        }
    }
    Ok(VerificationReport::new("bundles", vec![flat.finish(), curved.finish(), bianchi.finish(), free.finish()]))
}

/// Every suite in a fixed order.
pub fn run_all(k: &StructureConstants, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    Ok(vec![
        verify_structure_identities(k),
        commutation_suite(k, cfg),
        cartan_suite(k, cfg)?,
        dual_route_suite(k, cfg)?,
        theta_suite(k)?,
        symplectic_suite(k, cfg)?,
        bundle_suite(k, cfg)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_oracle_examples() {
        use Parity::{Even, Odd};
        assert!(commutation_factor_by_swaps(&[1, 0], &[Odd, Odd]));
        assert!(!commutation_factor_by_swaps(&[1, 0], &[Odd, Even]));
        assert!(!commutation_factor_by_swaps(&[2, 1, 0], &[Odd, Even, Odd]) ^ true);
    }
}
