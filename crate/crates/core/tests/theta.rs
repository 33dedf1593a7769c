use supergeom::calculus::{
    canonical_theta, exact_one_form_span, exterior_derivative, invariant_one_forms, theta_commutator, theta_inversion,
};
use supergeom::forms::GradedForm;
use supergeom::{GradedMatrix, HomogeneousBasis, StructureConstants};

#[test]
fn inversion_reconstructs_every_theta() {
    for (n, m) in [(2, 1), (1, 2), (3, 1)] {
        let k = StructureConstants::canonical(n, m).unwrap();
        for (a, f) in theta_inversion(&k).unwrap().iter().enumerate() {
            assert_eq!(f, &GradedForm::theta(n, m, a), "({n}|{m}) A={}", a + 1);
        }
    }
}

#[test]
fn exact_one_forms_generate_the_bimodule() {
    let k = StructureConstants::canonical(2, 1).unwrap();
    assert_eq!(exact_one_form_span(&k).unwrap(), 72);
}

#[test]
fn invariant_one_forms_are_multiples_of_theta() {
    let k = StructureConstants::canonical(2, 1).unwrap();
    let sols = invariant_one_forms(&k).unwrap();
    assert_eq!(sols.len(), 1);
    let theta = canonical_theta(&k).unwrap();
    let (idx, x) = sols[0].terms().next().unwrap();
    let c = x.get(0, 0).clone();
    let t = theta.coefficient(idx).get(0, 0).clone();
    assert_eq!(sols[0].scale(&t), theta.scale(&c));
}

#[test]
fn theta_on_three_one() {
    let k = StructureConstants::canonical(3, 1).unwrap();
    let theta = canonical_theta(&k).unwrap();
    assert_eq!(exterior_derivative(&theta, &k).unwrap(), theta.wedge(&theta).unwrap());
    let e13 = GradedMatrix::unit(3, 1, 0, 3);
    let d = exterior_derivative(&GradedForm::from_matrix(e13.clone()), &k).unwrap();
    assert_eq!(d, theta_commutator(&theta, &e13));
}

#[test]
fn theta_is_basis_independent() {
    let g = GradedMatrix::from_ints(2, 1, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]]).unwrap();
    let basis = HomogeneousBasis::canonical(2, 1).unwrap().conjugated(&g).unwrap();
    let k = StructureConstants::compute(&basis).unwrap();
    let k0 = StructureConstants::canonical(2, 1).unwrap();
    let theta = canonical_theta(&k).unwrap();
    let theta0 = canonical_theta(&k0).unwrap();
    // Compare as functions on the derivations ∂_A of the canonical basis.
    for a in 0..k0.dim() {
        let mat = k0.basis().element(a);
        let (coords, _) = k.expand(mat);
        let mut v = GradedMatrix::zero(2, 1);
        for (b, c) in coords.iter().enumerate() {
            v.add_scaled(&theta.value_at(&[b]), c);
        }
        assert_eq!(v, theta0.value_at(&[a]));
    }
}
