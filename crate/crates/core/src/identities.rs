//! Identity catalog for the structure constants `c`, `d`, `g` of a
//! homogeneous sl(n|m) basis, checked exactly.

use crate::basis::StructureConstants;
use crate::matrix::{graded_anticommutator, graded_commutator, GradedMatrix, Parity};
use crate::report::{CheckEntry, Tally, VerificationReport};
use crate::scalar::Scalar;

/// `(−1)^e`.
fn sgn(e: usize) -> Scalar {
    Scalar::sign(e % 2 == 1)
}

fn delta(a: usize, b: usize) -> Scalar {
    if a == b {
        Scalar::ONE
    } else {
        Scalar::ZERO
    }
}

struct Ctx<'a> {
    k: &'a StructureConstants,
    dim: usize,
    p: Vec<usize>,
}

impl Ctx<'_> {
    fn c(&self, a: usize, b: usize, c: usize) -> &Scalar {
        self.k.c(a, b, c)
    }

    fn d(&self, a: usize, b: usize, c: usize) -> &Scalar {
        self.k.d(a, b, c)
    }

    /// Nonzero `t_AB^E` over `E`, for `t ∈ {c, d}`.
    fn fiber(&self, which: Which, a: usize, b: usize) -> Vec<(usize, Scalar)> {
        match which {
            Which::C => self.k.c_fiber(a, b).to_vec(),
            Which::D => self.k.d_tensor().fiber(a, b),
        }
    }

    fn t(&self, which: Which, a: usize, b: usize, c: usize) -> &Scalar {
        match which {
            Which::C => self.c(a, b, c),
            Which::D => self.d(a, b, c),
        }
    }

    /// `t_ABC = Σ_D t_AB^D g_DC`.
    fn lowered(&self, which: Which) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::ZERO; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for (dd, v) in self.fiber(which, a, b) {
                    for c in 0..n {
                        let g = self.k.g(dd, c);
                        if !g.is_zero() {
                            out[(a * n + b) * n + c] += &(&v * g);
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Which {
    C,
    D,
}

fn idx(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", parts.join(","))
}

fn parity_selection(x: &Ctx) -> CheckEntry {
    let mut tally = Tally::new("parity_selection");
    let n = x.dim;
    for a in 0..n {
        for b in 0..n {
            if (x.p[a] + x.p[b]) % 2 == 1 {
                tally.record(x.k.g(a, b).is_zero(), || format!("g{} nonzero", idx(&[a, b])));
            }
            for c in 0..n {
                if (x.p[a] + x.p[b] + x.p[c]) % 2 == 1 {
                    let ok = x.c(a, b, c).is_zero() && x.d(a, b, c).is_zero();
                    tally.record(ok, || format!("c or d nonzero at (A,B,C) = {}", idx(&[a, b, c])));
                }
            }
        }
    }
    tally.finish()
}

fn traced_sums(x: &Ctx) -> CheckEntry {
    let mut tally = Tally::new("traced_sums");
    for which in [Which::C, Which::D] {
        for a in 0..x.dim {
            let s: Scalar = (0..x.dim).map(|b| &sgn(x.p[b]) * x.t(which, a, b, b)).sum();
            tally.record(s.is_zero(), || format!("{which:?} trace at A = {}: {s}", a + 1));
        }
    }
    tally.finish()
}

/// `c_ABC` graded antisymmetric and `d_ABC` graded symmetric under both
/// adjacent transpositions.
fn graded_symmetry(x: &Ctx) -> CheckEntry {
    let mut tally = Tally::new("graded_symmetry");
    let n = x.dim;
    for (which, sym) in [(Which::C, false), (Which::D, true)] {
        let t = x.lowered(which);
        let at = |a: usize, b: usize, c: usize| &t[(a * n + b) * n + c];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = at(a, b, c);
                    // t_BAC = ±(−1)^{ab} t_ABC and t_ACB = ±(−1)^{bc} t_ABC.
                    let s_ab = sgn(x.p[a] * x.p[b] + usize::from(!sym));
                    let s_bc = sgn(x.p[b] * x.p[c] + usize::from(!sym));
                    let ok = at(b, a, c) == &(&s_ab * v) && at(a, c, b) == &(&s_bc * v);
                    tally.record(ok, || format!("{which:?} at (A,B,C) = {}", idx(&[a, b, c])));
                }
            }
        }
    }
    tally.finish()
}

fn jacobi_relations(x: &Ctx) -> Vec<CheckEntry> {
    let n = x.dim;
    let p = &x.p;
    let mut lines =
        [Tally::new("jacobi_relations_1"), Tally::new("jacobi_relations_2"), Tally::new("jacobi_relations_3")];
    let two = Scalar::int(2);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut l1 = vec![Scalar::ZERO; n];
                let mut l2 = vec![Scalar::ZERO; n];
                let mut l3 = vec![Scalar::ZERO; n];
                let s_ac = sgn(p[a] * p[c]);
                let s_ba = sgn(p[b] * p[a]);
                let s_cb = sgn(p[c] * p[b]);
                let s_acbc = sgn(p[a] * p[c] + p[b] * p[c]);
                for (e, v) in x.fiber(Which::C, b, c) {
                    for (dd, w) in x.fiber(Which::C, a, e) {
                        let t = &v * &w;
                        l1[dd] += &(&s_ac * &t);
                        l2[dd] += &t;
                    }
                    for (dd, w) in x.fiber(Which::D, a, e) {
                        l3[dd] -= &(&v * &w);
                    }
                }
                for (e, v) in x.fiber(Which::C, c, a) {
                    for (dd, w) in x.fiber(Which::C, b, e) {
                        l1[dd] += &(&s_ba * &(&v * &w));
                    }
                }
                for (e, v) in x.fiber(Which::C, a, b) {
                    for (dd, w) in x.fiber(Which::C, c, e) {
                        l1[dd] += &(&s_cb * &(&v * &w));
                    }
                }
                for (e, v) in x.fiber(Which::D, a, b) {
                    for (dd, w) in x.fiber(Which::D, e, c) {
                        l2[dd] -= &(&v * &w);
                    }
                    for (dd, w) in x.fiber(Which::C, e, c) {
                        l3[dd] += &(&v * &w);
                    }
                }
                for (e, v) in x.fiber(Which::D, c, a) {
                    for (dd, w) in x.fiber(Which::D, e, b) {
                        l2[dd] += &(&s_acbc * &(&v * &w));
                    }
                }
                for (e, v) in x.fiber(Which::C, a, c) {
                    for (dd, w) in x.fiber(Which::D, e, b) {
                        l3[dd] -= &(&s_cb * &(&v * &w));
                    }
                }
                l2[b] += &(&(&two * &s_acbc) * x.k.g(c, a));
                l2[c] -= &(&two * x.k.g(a, b));
                for (line, vals) in lines.iter_mut().zip([&l1, &l2, &l3]) {
                    for (dd, v) in vals.iter().enumerate() {
                        line.record(v.is_zero(), || format!("(A,B,C,D) = {}: {v}", idx(&[a, b, c, dd])));
                    }
                }
            }
        }
    }
    lines.into_iter().map(Tally::finish).collect()
}

/// The Killing matrix computed three ways from the constants and once
/// directly as `2(n − m) str(E_A E_B)`.
fn killing_expressions(x: &Ctx) -> CheckEntry {
    let n = x.dim;
    let k = x.k;
    let nm2 = k.nm_squared();
    let four = Scalar::int(4);
    let use_dd = nm2 != four;
    let dd_factor = if use_dd { &nm2 / &(&nm2 - &four) } else { Scalar::ZERO };
    let nm = Scalar::int(k.n() as i64 - k.m() as i64);
    let mut tally = Tally::new("killing_expressions");
    for a in 0..n {
        for b in 0..n {
            let stored = k.killing().get(a, b);
            let from_g = &nm2 * k.g(a, b);
            let mut cc = Scalar::ZERO;
            let mut dd = Scalar::ZERO;
            for d in 0..n {
                for (c, v) in x.fiber(Which::C, a, d) {
                    cc += &(&(&sgn(x.p[c]) * &v) * x.c(b, c, d));
                }
                for (c, v) in x.fiber(Which::D, a, d) {
                    dd += &(&(&sgn(x.p[c]) * &v) * x.d(b, c, d));
                }
            }
            let prod = k.basis().element(a).matmul(k.basis().element(b));
            let direct = &(&Scalar::int(2) * &nm) * &prod.supertrace();
            let mut ok = stored == &from_g && stored == &cc && stored == &direct;
            if use_dd {
                ok &= stored == &(&dd_factor * &dd);
            }
            tally.record(ok, || format!("(A,B) = {}", idx(&[a, b])));
        }
    }
    let entry = tally.finish();
    if use_dd {
        entry
    } else {
        entry.with_note("(n-m)^2 = 4: the d.d expression has a vanishing denominator and is skipped")
    }
}

fn metric_contractions(x: &Ctx) -> CheckEntry {
    let n = x.dim;
    let mut tally = Tally::new("metric_contractions");
    for which in [Which::C, Which::D] {
        let mut acc = vec![Scalar::ZERO; n];
        for b in 0..n {
            for c in 0..n {
                let gi = x.k.ginv(b, c);
                if gi.is_zero() {
                    continue;
                }
                for (a, v) in x.fiber(which, b, c) {
                    acc[a] += &(gi * &v);
                }
            }
        }
        for (a, v) in acc.iter().enumerate() {
            tally.record(v.is_zero(), || format!("{which:?} at A = {}: {v}", a + 1));
        }
    }
    tally.finish()
}

/// Nonzero `g^CD` as `(C, D, value)`.
fn ginv_entries(x: &Ctx) -> Vec<(usize, usize, Scalar)> {
    let mut out = Vec::new();
    for c in 0..x.dim {
        for d in 0..x.dim {
            let v = x.k.ginv(c, d);
            if !v.is_zero() {
                out.push((c, d, v.clone()));
            }
        }
    }
    out
}

fn casimir_contractions(x: &Ctx) -> Vec<CheckEntry> {
    let n = x.dim;
    let nm2 = x.k.nm_squared();
    let ginv = ginv_entries(x);
    let cases = [
        ("casimir_contractions_1", Which::C, Which::C, nm2.clone()),
        ("casimir_contractions_2", Which::C, Which::D, Scalar::ZERO),
        ("casimir_contractions_3", Which::D, Which::D, &nm2 - &Scalar::int(4)),
    ];
    let mut out = Vec::new();
    for (name, first, second, factor) in cases {
        let mut tally = Tally::new(name);
        for b in 0..n {
            let mut acc = vec![Scalar::ZERO; n];
            for (c, d, gv) in &ginv {
                for (e, v) in x.fiber(second, *d, b) {
                    let gv_v = gv * &v;
                    for (a, w) in x.fiber(first, *c, e) {
                        acc[a] += &(&gv_v * &w);
                    }
                }
            }
            for (a, v) in acc.iter().enumerate() {
                let want = &factor * &delta(a, b);
                tally.record(v == &want, || format!("(A,B) = {}: {v} != {want}", idx(&[a, b])));
            }
        }
        out.push(tally.finish());
    }
    out
}

fn quartic_contractions(x: &Ctx) -> Vec<CheckEntry> {
    let n = x.dim;
    let nm2 = x.k.nm_squared();
    let half = Scalar::ratio(1, 2);
    let ginv = ginv_entries(x);
    // (first P_EB^F, middle X_AF^G, last W_DG^C, right-hand side factor, rhs tensor)
    let cases = [
        ("quartic_contractions_1", Which::C, Which::C, Which::C, &half * &nm2, Which::C),
        ("quartic_contractions_2", Which::C, Which::C, Which::D, -(&half * &nm2), Which::D),
        ("quartic_contractions_3", Which::C, Which::D, Which::D, -(&half * &(&nm2 - &Scalar::int(4))), Which::C),
        ("quartic_contractions_4", Which::D, Which::D, Which::D, &half * &(&nm2 - &Scalar::int(12)), Which::D),
    ];
    let mut out = Vec::new();
    for (name, first, middle, last, factor, rhs) in cases {
        let mut tally = Tally::new(name);
        for a in 0..n {
            for b in 0..n {
                // u[E][G] = Σ_F P_EB^F X_AF^G
                let mut u = vec![vec![Scalar::ZERO; n]; n];
                for (e, row) in u.iter_mut().enumerate() {
                    for (f, v) in x.fiber(first, e, b) {
                        for (g, w) in x.fiber(middle, a, f) {
                            row[g] += &(&v * &w);
                        }
                    }
                }
                let mut acc = vec![Scalar::ZERO; n];
                for (d, e, gv) in &ginv {
                    // g^{DE} is nonzero only for equal parities of D and E.
                    let s = &sgn(x.p[a] * x.p[*e]) * gv;
                    for (g, ueg) in u[*e].iter().enumerate() {
                        if ueg.is_zero() {
                            continue;
                        }
                        let coef = &s * ueg;
                        for (c, w) in x.fiber(last, *d, g) {
                            acc[c] += &(&coef * &w);
                        }
                    }
                }
                for (c, v) in acc.iter().enumerate() {
                    let want = &factor * x.t(rhs, a, b, c);
                    tally.record(v == &want, || format!("(A,B,C) = {}: {v} != {want}", idx(&[a, b, c])));
                }
            }
        }
        out.push(tally.finish());
    }
    out
}

/// Checks every identity family; one entry per family or per line of a
/// multi-line family.
pub fn verify_structure_identities(k: &StructureConstants) -> VerificationReport {
    let x = Ctx { k, dim: k.dim(), p: k.parities().iter().map(|p| p.bit()).collect() };
    let mut entries = vec![parity_selection(&x), traced_sums(&x), graded_symmetry(&x)];
    entries.extend(jacobi_relations(&x));
    entries.push(killing_expressions(&x));
    entries.push(metric_contractions(&x));
    entries.extend(casimir_contractions(&x));
    entries.extend(quartic_contractions(&x));
    VerificationReport::new("structure_identities", entries)
}

/// The two mixed relations between graded commutator and anticommutator,
/// checked on all triples of basis elements together with the identity.
///
/// The first relation is used in the form
/// `[M,[M',M'']] − {{M,M'},M''} + (−1)^{M̄'M̄''}{{M,M''},M'} = 0`, which is
/// the one whose expansion in structure constants is the second Jacobi-type
/// line checked by [`verify_structure_identities`].
pub fn mixed_bracket_relations(k: &StructureConstants) -> VerificationReport {
    let mut elems: Vec<_> = k.basis().elements().to_vec();
    elems.push(GradedMatrix::identity(k.n(), k.m()));
    let parity = |i: usize| if i < k.dim() { k.parity(i) } else { Parity::Even };
    let mut first = Tally::new("mixed_relation_1");
    let mut second = Tally::new("mixed_relation_2");
    fn br(a: &GradedMatrix, b: &GradedMatrix) -> GradedMatrix {
        graded_commutator(a, b).expect("same shape")
    }
    fn ab(a: &GradedMatrix, b: &GradedMatrix) -> GradedMatrix {
        graded_anticommutator(a, b).expect("same shape")
    }
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            for (l, c) in elems.iter().enumerate() {
                let s = Scalar::sign(parity(j).is_odd() && parity(l).is_odd());
                let mut r1 = br(a, &br(b, c));
                r1 = &r1 - &ab(&ab(a, b), c);
                r1.add_scaled(&ab(&ab(a, c), b), &s);
                first.record(r1.is_zero(), || idx(&[i, j, l]));
                let mut r2 = br(&ab(a, b), c);
                r2 = &r2 - &ab(a, &br(b, c));
                r2.add_scaled(&ab(&br(a, c), b), &-s);
                second.record(r2.is_zero(), || idx(&[i, j, l]));
            }
        }
    }
    VerificationReport::new("mixed_bracket_relations", vec![first.finish(), second.finish()])
}
