use supergeom::bundles::{
    bianchi_check, conjugated_rho, connection_form_from_rho, curvature_forms, curvature_from_coefficients,
    flat_curvature_coefficients, flat_points_on_line, generator_parities, is_graded_free, is_injective_homomorphism,
    line_connection, Connection, FormMatrix,
};
use supergeom::calculus::canonical_theta;
use supergeom::forms::GradedForm;
use supergeom::random::Sampler;
use supergeom::{GradedMatrix, Parity, Scalar, StructureConstants};

fn k21() -> StructureConstants {
    StructureConstants::canonical(2, 1).unwrap()
}

/// `P = S D S⁻¹` on `V^{2|1}` with `D = diag(e₁₁, 1, 0)` and `S = 1 + N`,
/// `N` supported in row 0 off the diagonal (so `N² = 0`).
fn nontrivial_projector(s: &mut Sampler) -> FormMatrix {
    let zero = GradedMatrix::zero(2, 1);
    let one = GradedMatrix::identity(2, 1);
    let y = s.matrix(Parity::Even);
    let x = s.matrix(Parity::Odd);
    let sm = FormMatrix::from_matrices(
        3,
        3,
        &[
            one.clone(),
            y.clone(),
            x.clone(),
            zero.clone(),
            one.clone(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            one.clone(),
        ],
    )
    .unwrap();
    let sinv = FormMatrix::from_matrices(
        3,
        3,
        &[one.clone(), -&y, -&x, zero.clone(), one.clone(), zero.clone(), zero.clone(), zero.clone(), one.clone()],
    )
    .unwrap();
    let d = FormMatrix::from_matrices(
        3,
        3,
        &[
            GradedMatrix::unit(2, 1, 0, 0),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            one,
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero,
        ],
    )
    .unwrap();
    sm.wedge(&d).unwrap().wedge(&sinv).unwrap()
}

fn random_form_matrix(s: &mut Sampler, rows: &[Parity], cols: &[Parity], degree: usize, shift: Parity) -> FormMatrix {
    FormMatrix::from_fn(rows.len(), cols.len(), |i, j| s.form(degree, rows[i] + cols[j] + shift, 2)).unwrap()
}

fn nontrivial_connection(seed: u64) -> (Connection, Sampler) {
    let mut s = Sampler::new(2, 1, seed);
    let p = nontrivial_projector(&mut s);
    let par = generator_parities(2, 1);
    let x = random_form_matrix(&mut s, &par, &par, 1, Parity::Even);
    let alpha = p.wedge(&x).unwrap().wedge(&p).unwrap();
    assert!(!p.get(0, 2).is_zero() && !alpha.is_zero());
    assert_ne!(p, FormMatrix::identity(2, 1, 3));
    (Connection::new(2, 1, p, alpha).unwrap(), s)
}

#[test]
fn graded_freeness_matches_brute_force() {
    for r in 0..=10 {
        for s in 0..=10 {
            let brute = (0..=10usize)
                .flat_map(|p| (0..=10usize).map(move |q| (p, q)))
                .find(|&(p, q)| p + q >= 1 && 2 * p + q == r && p + 2 * q == s);
            assert_eq!(is_graded_free(2, 1, r, s), brute, "r={r} s={s}");
        }
    }
}

#[test]
fn flat_and_nonflat_line_connections() {
    let k = k21();
    let theta = canonical_theta(&k).unwrap();
    let gs = [
        GradedMatrix::diagonal(2, 1, &[Scalar::int(1), Scalar::int(2), Scalar::int(1)]).unwrap(),
        GradedMatrix::from_ints(2, 1, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]]).unwrap(),
        GradedMatrix::from_ints(2, 1, &[&[2, 1, 0], &[1, 1, 0], &[0, 0, -1]]).unwrap(),
    ];
    for g in &gs {
        let rho = conjugated_rho(g, &k).unwrap();
        let alpha = connection_form_from_rho(&rho, &k).unwrap();
        let conn = line_connection(alpha, &k).unwrap();
        let r = curvature_forms(&conn, &k).unwrap();
        assert!(r.is_zero());
        assert!(flat_curvature_coefficients(&rho, &k).unwrap().iter().flatten().all(|x| x.is_zero()));
    }
    let conn = line_connection(theta.scale(&Scalar::int(2)), &k).unwrap();
    assert!(!curvature_forms(&conn, &k).unwrap().is_zero());
    assert!(bianchi_check(&conn, &k).unwrap());
    // ∇_d on the free line bundle is flat as well.
    let rho: Vec<GradedMatrix> = k.basis().elements().to_vec();
    assert!(flat_curvature_coefficients(&rho, &k).unwrap().iter().flatten().all(|x| x.is_zero()));
}

#[test]
fn curvature_coefficients_match_the_general_formula() {
    let k = k21();
    let mut s = Sampler::new(2, 1, 4);
    for _ in 0..3 {
        let rho: Vec<GradedMatrix> = (0..k.dim()).map(|a| s.matrix(k.parity(a))).collect();
        let alpha = connection_form_from_rho(&rho, &k).unwrap();
        let conn = line_connection(alpha, &k).unwrap();
        let r = curvature_forms(&conn, &k).unwrap();
        let omega = flat_curvature_coefficients(&rho, &k).unwrap();
        assert_eq!(r.get(0, 0), &curvature_from_coefficients(&omega, &k));
        assert!(bianchi_check(&conn, &k).unwrap());
    }
    let twice: Vec<GradedMatrix> = k.basis().elements().iter().map(|e| e.scale(&Scalar::int(2))).collect();
    assert!(flat_curvature_coefficients(&twice, &k).unwrap().iter().flatten().any(|x| !x.is_zero()));
}

#[test]
fn bianchi_with_nontrivial_projector() {
    let k = k21();
    for seed in 0..3 {
        let (conn, _) = nontrivial_connection(seed);
        let r = curvature_forms(&conn, &k).unwrap();
        assert!(conn.is_corner(&r).unwrap());
        assert!(bianchi_check(&conn, &k).unwrap(), "seed {seed}");
    }
}

#[test]
fn curvature_is_the_square_of_the_extended_connection() {
    let k = k21();
    let (conn, mut s) = nontrivial_connection(9);
    let r = curvature_forms(&conn, &k).unwrap();
    assert!(!r.is_zero());
    let gens = generator_parities(2, 1);
    for _ in 0..3 {
        let sp = s.parity();
        let raw = random_form_matrix(&mut s, &[Parity::Even], &gens, 0, sp);
        let v = conn.project(&raw).unwrap();
        assert!(!v.is_zero());
        let nabla2 = conn.apply(&conn.apply(&v, &k).unwrap(), &k).unwrap();
        assert_eq!(nabla2, v.wedge(&r).unwrap());
        // module linearity
        let m = s.matrix(Parity::Odd);
        let mv = FormMatrix::from_fn(1, 3, |_, j| v.get(0, j).left_mul(&m)).unwrap();
        let lhs = conn.apply(&conn.apply(&mv, &k).unwrap(), &k).unwrap();
        let rhs = FormMatrix::from_fn(1, 3, |_, j| nabla2.get(0, j).left_mul(&m)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn extension_satisfies_leibniz() {
    let k = k21();
    let (conn, mut s) = nontrivial_connection(2);
    let gens = generator_parities(2, 1);
    for (p1, p2) in [(0, 1), (1, 0), (1, 1), (2, 1)] {
        let wp = s.parity();
        let w1 = s.form(p1, wp, 2);
        let sp = s.parity();
        let phi = conn.project(&random_form_matrix(&mut s, &[Parity::Even], &gens, p2, sp)).unwrap();
        let prod = FormMatrix::from_fn(1, 3, |_, j| w1.wedge(phi.get(0, j)).unwrap()).unwrap();
        let lhs = conn.apply(&prod, &k).unwrap();
        let dw = supergeom::calculus::exterior_derivative(&w1, &k).unwrap();
        let nphi = conn.apply(&phi, &k).unwrap();
        let sign = Scalar::sign(p1 % 2 == 1);
        let rhs = FormMatrix::from_fn(1, 3, |_, j| {
            dw.wedge(phi.get(0, j)).unwrap().add(&w1.wedge(nphi.get(0, j)).unwrap().scale(&sign)).unwrap()
        })
        .unwrap();
        assert_eq!(lhs, rhs, "p'={p1} p={p2}");
    }
}

#[test]
fn free_connection_extension_is_d() {
    let k = k21();
    let conn = Connection::free(2, 1, 2, 1, FormMatrix::zero(2, 1, 3, 3, 1)).unwrap();
    let mut s = Sampler::new(2, 1, 1);
    let gens = generator_parities(2, 1);
    let phi = random_form_matrix(&mut s, &[Parity::Even], &gens, 1, Parity::Odd);
    assert_eq!(conn.apply(&phi, &k).unwrap(), phi.d(&k).unwrap());
    assert!(curvature_forms(&conn, &k).unwrap().is_zero());
}

#[test]
fn double_extension_on_a_line_bundle() {
    let k = k21();
    let theta = canonical_theta(&k).unwrap();
    let conn = line_connection(theta.scale(&Scalar::int(2)), &k).unwrap();
    let r = curvature_forms(&conn, &k).unwrap();
    let e3 = k.basis().element(2).clone();
    let v = FormMatrix::from_fn(1, 1, |_, _| GradedForm::from_matrix(e3.clone())).unwrap();
    let n2 = conn.apply(&conn.apply(&v, &k).unwrap(), &k).unwrap();
    assert_eq!(n2.get(0, 0), &r.get(0, 0).left_mul(&e3));
}

#[test]
fn connection_differences_are_corner_matrices() {
    let (c1, mut s) = nontrivial_connection(3);
    let par = generator_parities(2, 1);
    let x = random_form_matrix(&mut s, &par, &par, 1, Parity::Even);
    let p = c1.projector().clone();
    let alpha2 = p.wedge(&x).unwrap().wedge(&p).unwrap();
    let c2 = Connection::new(2, 1, p, alpha2.clone()).unwrap();
    assert!(c1.is_corner(&alpha2.sub(c1.alpha()).unwrap()).unwrap());
    assert!(!c2.is_corner(&x).unwrap() || x == alpha2);
}

#[test]
fn flat_points_on_conjugation_lines() {
    let k = k21();
    let mut s = Sampler::new(2, 1, 20);
    for _ in 0..20 {
        let g = s.invertible_even();
        let rho = conjugated_rho(&g, &k).unwrap();
        let roots = flat_points_on_line(&rho, &k).unwrap();
        assert_eq!(roots, vec![Scalar::ZERO, Scalar::ONE]);
        for t in &roots {
            let scaled: Vec<GradedMatrix> = rho.iter().map(|r| r.scale(t)).collect();
            let omega = flat_curvature_coefficients(&scaled, &k).unwrap();
            assert!(omega.iter().flatten().all(|x| x.is_zero()));
            assert!(t.is_zero() || is_injective_homomorphism(&scaled, &k).unwrap());
        }
    }
}
