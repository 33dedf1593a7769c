use supergeom::calculus::{canonical_theta, derivation_bracket, exterior_derivative};
use supergeom::cohomology::BodyMap;
use supergeom::forms::DerivationVector;
use supergeom::matrix::graded_commutator;
use supergeom::random::Sampler;
use supergeom::symplectic::{
    body_compatibility, closed_invariant_two_forms, is_multiple_of, is_symplectic, SymplecticForm,
};
use supergeom::{GradedMatrix, HomogeneousBasis, Parity, Scalar, StructureConstants};

fn d_theta(k: &StructureConstants) -> supergeom::forms::GradedForm {
    exterior_derivative(&canonical_theta(k).unwrap(), k).unwrap()
}

#[test]
fn hamiltonian_fields_of_scaled_d_theta() {
    let k = StructureConstants::canonical(2, 1).unwrap();
    let dt = d_theta(&k);
    for c in [1, 2, -3] {
        let c = Scalar::int(c);
        let w = SymplecticForm::new(dt.scale(&c), &k).unwrap();
        for a in 0..k.dim() {
            let d = w.hamiltonian_field(k.basis().element(a)).unwrap();
            assert_eq!(d, DerivationVector::basis(2, 1, a).scale(&c.recip()));
        }
    }
}

#[test]
fn poisson_bracket_of_d_theta_is_the_commutator() {
    let k = StructureConstants::canonical(2, 1).unwrap();
    let w = SymplecticForm::new(d_theta(&k), &k).unwrap();
    for a in 0..k.dim() {
        for b in 0..k.dim() {
            let (ea, eb) = (k.basis().element(a), k.basis().element(b));
            assert_eq!(w.poisson_bracket(ea, eb).unwrap(), graded_commutator(ea, eb).unwrap());
            let lhs = w.hamiltonian_field(&graded_commutator(ea, eb).unwrap()).unwrap();
            let rhs = derivation_bracket(&w.hamiltonian_field(ea).unwrap(), &w.hamiltonian_field(eb).unwrap(), &k);
            assert_eq!(lhs, rhs);
        }
    }
    assert!(w.poisson_bracket(&GradedMatrix::identity(2, 1), k.basis().element(4)).unwrap().is_zero());
}

#[test]
fn poisson_leibniz_on_random_triples() {
    let k = StructureConstants::canonical(2, 1).unwrap();
    let w = SymplecticForm::new(d_theta(&k).scale(&Scalar::int(2)), &k).unwrap();
    let mut s = Sampler::new(2, 1, 11);
    for _ in 0..10 {
        let (p, q) = (s.parity(), s.parity());
        let (a, b, c) = (s.matrix(p), s.matrix(q), s.matrix_any());
        let lhs = w.poisson_bracket(&a, &b.matmul(&c)).unwrap();
        let sign = Scalar::sign(p.is_odd() && q.is_odd());
        let rhs = &w.poisson_bracket(&a, &b).unwrap().matmul(&c)
            + &b.matmul(&w.poisson_bracket(&a, &c).unwrap()).scale(&sign);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn hamiltonian_map_has_central_kernel() {
    let k = StructureConstants::canonical(2, 1).unwrap();
    let w = SymplecticForm::new(d_theta(&k), &k).unwrap();
    let rows: Vec<_> = (0..9)
        .map(|e| {
            let d = w.hamiltonian_field(&GradedMatrix::unit(2, 1, e / 3, e % 3)).unwrap();
            supergeom::linalg::sparsify(d.coords())
        })
        .collect();
    assert_eq!(supergeom::linalg::sparse_rank(rows), 8);
}

#[test]
fn d_theta_is_the_only_invariant_closed_two_form() {
    let k = StructureConstants::canonical(2, 1).unwrap();
    let span = closed_invariant_two_forms(&k).unwrap();
    assert_eq!(span.len(), 1);
    assert!(is_multiple_of(&span[0], &d_theta(&k)));
}

#[test]
fn perturbed_d_theta_is_not_symplectic() {
    let k = StructureConstants::canonical(2, 1).unwrap();
    let dt = d_theta(&k);
    let mut s = Sampler::new(2, 1, 5);
    for _ in 0..5 {
        let a = s.form(1, Parity::Even, 2);
        let w = dt.add(&exterior_derivative(&a, &k).unwrap()).unwrap();
        assert!(!is_symplectic(&w, &k));
    }
}

#[test]
fn body_compatibility_for_even_pairs() {
    let k = StructureConstants::compute(&HomogeneousBasis::body_adapted(2, 1).unwrap()).unwrap();
    let beta = BodyMap::new(&k).unwrap();
    let w = SymplecticForm::new(d_theta(&k), &k).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            let r = body_compatibility(&w, &beta, k.basis().element(a), k.basis().element(b)).unwrap();
            assert!(r.hamiltonian_fields_agree && r.poisson_brackets_agree, "E{} E{}", a + 1, b + 1);
        }
    }
    let one = GradedMatrix::identity(2, 1);
    let r = body_compatibility(&w, &beta, &one, k.basis().element(0)).unwrap();
    assert!(r.hamiltonian_fields_agree && r.poisson_brackets_agree);
    assert!(body_compatibility(&w, &beta, k.basis().element(4), &one).is_err());
}
