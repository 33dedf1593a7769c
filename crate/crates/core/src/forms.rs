//! Graded forms stored by their coefficients over canonical multi-indices.
//!
//! A degree-`p` form is `ω = Σ_I ω_I ∧ θ^{I₁} ∧ … ∧ θ^{I_p}`, the sum running
//! over nondecreasing tuples `I` of 0-based basis positions in which only
//! odd positions (`A ≥ n'`) may repeat. On the sorted tuple itself the
//! monomial `θ^I` evaluates to `(−1)^{p''(p''−1)/2} ∏ N_l! · 1`, where `p''`
//! counts odd entries and `N_l` multiplicities; permuting the arguments
//! picks up `−(−1)^{|a||b|}` per adjacent transposition.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{GradedMatrix, Parity};
use crate::scalar::Scalar;

/// `n' = n² + m² − 1`.
pub fn even_count(n: usize, m: usize) -> usize {
    n * n + m * m - 1
}

/// `n' + m' = (n + m)² − 1`.
pub fn derivation_count(n: usize, m: usize) -> usize {
    (n + m) * (n + m) - 1
}

/// Parity of the basis position `a`.
fn index_parity(a: usize, n_even: usize) -> Parity {
    if a < n_even {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// A canonical multi-index: nondecreasing, repeats only among odd positions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>, n_even: usize, dim: usize) -> Result<MultiIndex> {
        let ok = entries.iter().all(|&a| a < dim)
            && entries.windows(2).all(|w| w[0] < w[1] || (w[0] == w[1] && w[0] >= n_even));
        if ok {
            Ok(MultiIndex(entries))
        } else {
            Err(Error::ShapeMismatch(format!("{entries:?} is not a canonical multi-index")))
        }
    }

    pub fn empty() -> MultiIndex {
        MultiIndex(Vec::new())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `p''`, the number of odd entries.
    pub fn odd_entries(&self, n_even: usize) -> usize {
        self.0.iter().filter(|&&a| a >= n_even).count()
    }

    /// Parity of the monomial `θ^I`.
    pub fn parity(&self, n_even: usize) -> Parity {
        Parity::from_bit(self.odd_entries(n_even))
    }

    /// Value of `θ^I` on `(∂_{I₁}, …, ∂_{I_p})` as a multiple of the identity.
    pub fn norm(&self, n_even: usize) -> Scalar {
        let pp = self.odd_entries(n_even);
        let mut value: i64 = 1;
        let mut run = 1;
        for w in self.0.windows(2) {
            if w[0] == w[1] {
                run += 1;
                value *= run;
            } else {
                run = 1;
            }
        }
        let negative = (pp * pp.saturating_sub(1) / 2) % 2 == 1;
        Scalar::int(if negative { -value } else { value })
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| (a + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Sorts an arbitrary tuple of basis positions into canonical order.
/// Returns the canonical index and whether the sign flipped, or `None` when
/// the monomial vanishes (a repeated even position).
pub fn canonicalize(tuple: &[usize], n_even: usize) -> Option<(MultiIndex, bool)> {
    let mut v = tuple.to_vec();
    let mut negative = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            let both_odd = v[j - 1] >= n_even && v[j] >= n_even;
            if !both_odd {
                negative = !negative;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1] && w[0] < n_even) {
        return None;
    }
    Some((MultiIndex(v), negative))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of size-`k` multisets from `n` symbols.
fn multichoose(n: usize, k: usize) -> u128 {
    if k == 0 {
        1
    } else if n == 0 {
        0
    } else {
        binomial(n + k - 1, k)
    }
}

/// `|I(n'|m')_p| = Σ_{p'} C(n', p') · C(m' + p − p' − 1, p − p')`.
pub fn index_set_size(n_even: usize, n_odd: usize, p: usize) -> u128 {
    (0..=p).map(|pe| binomial(n_even, pe) * multichoose(n_odd, p - pe)).sum()
}

/// All canonical multi-indices of degree `p`, in lexicographic order.
pub fn index_set(n_even: usize, n_odd: usize, p: usize) -> Vec<MultiIndex> {
    let dim = n_even + n_odd;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(cur: &mut Vec<usize>, p: usize, dim: usize, n_even: usize, out: &mut Vec<MultiIndex>) {
        if cur.len() == p {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        let start = match cur.last() {
            None => 0,
            Some(&a) if a >= n_even => a,
            Some(&a) => a + 1,
        };
        for a in start..dim {
            cur.push(a);
            rec(cur, p, dim, n_even, out);
            cur.pop();
        }
    }
    rec(&mut cur, p, dim, n_even, &mut out);
    out
}

/// `γ_p(σ; i₁, …, i_p) = ∏_{r<s, σ⁻¹(r) > σ⁻¹(s)} (−1)^{i_r i_s}`, with
/// `σ` given by its images `sigma[k] = σ(k)` (0-based). Returns `true` for −1.
pub fn commutation_factor(sigma: &[usize], degrees: &[Parity]) -> bool {
    assert_eq!(sigma.len(), degrees.len(), "one degree per letter");
    let mut inv = vec![0; sigma.len()];
    for (k, &s) in sigma.iter().enumerate() {
        inv[s] = k;
    }
    let mut negative = false;
    for r in 0..sigma.len() {
        for s in r + 1..sigma.len() {
            if inv[r] > inv[s] && odd_pair(degrees[r], degrees[s]) {
                negative = !negative;
            }
        }
    }
    negative
}

#[cfg(not(feature = "mutation-sign-flip"))]
fn odd_pair(a: Parity, b: Parity) -> bool {
    a.is_odd() && b.is_odd()
}

// Deliberately wrong: drops the odd/odd contribution so the suites can be
// shown to detect it.
#[cfg(feature = "mutation-sign-flip")]
fn odd_pair(_a: Parity, _b: Parity) -> bool {
    false
}

/// Sign of a permutation given by its images. Returns `true` for odd.
pub fn permutation_sign(sigma: &[usize]) -> bool {
    let mut negative = false;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                negative = !negative;
            }
        }
    }
    negative
}

/// All permutations of `0..p` in lexicographic order.
pub fn permutations(p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..p).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..p).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// A graded derivation `D = Σ x^A ∂_A` given by its coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DerivationVector {
    n_even: usize,
    coords: Vec<Scalar>,
}

impl DerivationVector {
    pub fn new(n: usize, m: usize, coords: Vec<Scalar>) -> Result<DerivationVector> {
        if coords.len() != derivation_count(n, m) {
            return Err(Error::ShapeMismatch(format!(
                "derivation of M({n}|{m}) needs {} coordinates",
                derivation_count(n, m)
            )));
        }
        Ok(DerivationVector { n_even: even_count(n, m), coords })
    }

    pub(crate) fn from_parts(n_even: usize, coords: Vec<Scalar>) -> DerivationVector {
        DerivationVector { n_even, coords }
    }

    pub fn zero(n: usize, m: usize) -> DerivationVector {
        DerivationVector { n_even: even_count(n, m), coords: vec![Scalar::ZERO; derivation_count(n, m)] }
    }

    /// `∂_A` (0-based `a`).
    pub fn basis(n: usize, m: usize, a: usize) -> DerivationVector {
        let mut d = Self::zero(n, m);
        d.coords[a] = Scalar::ONE;
        d
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn n_even(&self) -> usize {
        self.n_even
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// Parity of a homogeneous derivation; zero counts as even, mixed is `None`.
    pub fn parity(&self) -> Option<Parity> {
        let even = self.coords[..self.n_even].iter().any(|x| !x.is_zero());
        let odd = self.coords[self.n_even..].iter().any(|x| !x.is_zero());
        match (even, odd) {
            (_, false) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            (true, true) => None,
        }
    }

    pub fn parity_part(&self, parity: Parity) -> DerivationVector {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(a, x)| if index_parity(a, self.n_even) == parity { x.clone() } else { Scalar::ZERO })
            .collect();
        DerivationVector { n_even: self.n_even, coords }
    }

    pub fn scale(&self, c: &Scalar) -> DerivationVector {
        DerivationVector { n_even: self.n_even, coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &DerivationVector) -> DerivationVector {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        DerivationVector { n_even: self.n_even, coords }
    }

    /// Nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coords.iter().enumerate().filter(|(_, x)| !x.is_zero())
    }
}

impl fmt::Debug for DerivationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

/// A graded `p`-form on M(n|m) with matrix coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedForm {
    n: usize,
    m: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, GradedMatrix>,
}

impl GradedForm {
    pub fn zero(n: usize, m: usize, degree: usize) -> GradedForm {
        GradedForm { n, m, degree, terms: BTreeMap::new() }
    }

    /// A 0-form.
    pub fn from_matrix(mat: GradedMatrix) -> GradedForm {
        let mut f = Self::zero(mat.n(), mat.m(), 0);
        f.add_term(MultiIndex::empty(), &mat);
        f
    }

    /// `θ^A` (0-based `a`).
    pub fn theta(n: usize, m: usize, a: usize) -> GradedForm {
        Self::monomial(&GradedMatrix::identity(n, m), &[a])
    }

    /// `X ∧ θ^{A₁} ∧ … ∧ θ^{A_p}` for an arbitrary tuple.
    pub fn monomial(x: &GradedMatrix, tuple: &[usize]) -> GradedForm {
        let (n, m) = (x.n(), x.m());
        let mut f = Self::zero(n, m, tuple.len());
        if let Some((idx, neg)) = canonicalize(tuple, even_count(n, m)) {
            f.add_term(idx, &x.scale(&Scalar::sign(neg)));
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_even(&self) -> usize {
        even_count(self.n, self.m)
    }

    pub fn dim(&self) -> usize {
        derivation_count(self.n, self.m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GradedMatrix)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> GradedMatrix {
        self.terms.get(idx).cloned().unwrap_or_else(|| GradedMatrix::zero(self.n, self.m))
    }

    /// For 0-forms, the matrix itself.
    pub fn as_matrix(&self) -> Option<GradedMatrix> {
        (self.degree == 0).then(|| self.coefficient(&MultiIndex::empty()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `x` to the coefficient of `idx` (which must be canonical).
    pub fn add_term(&mut self, idx: MultiIndex, x: &GradedMatrix) {
        debug_assert_eq!(idx.degree(), self.degree);
        if x.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(c) => {
                c.add_assign(x);
                if c.is_zero() {
                    self.terms.remove(&idx);
                }
            }
            None => {
                self.terms.insert(idx, x.clone());
            }
        }
    }

    fn check_compatible(&self, other: &GradedForm) -> Result<()> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::ShapeMismatch(format!(
                "forms on M({}|{}) and M({}|{})",
                self.n, self.m, other.n, other.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedForm) -> Result<GradedForm> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedForm) -> Result<GradedForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedForm {
        self.scale(&-Scalar::ONE)
    }

    pub fn scale(&self, c: &Scalar) -> GradedForm {
        let mut out = Self::zero(self.n, self.m, self.degree);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v.scale(c));
        }
        out
    }

    /// Parity of a homogeneous form (zero counts as even); `None` if mixed.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen = [false, false];
        for (idx, x) in &self.terms {
            let ip = idx.parity(self.n_even());
            let (even, odd) = x.parity_decompose();
            if !even.is_zero() {
                seen[ip.bit()] = true;
            }
            if !odd.is_zero() {
                seen[(ip + Parity::Odd).bit()] = true;
            }
        }
        match seen {
            [_, false] => Some(Parity::Even),
            [false, true] => Some(Parity::Odd),
            [true, true] => None,
        }
    }

    /// The component of the given total parity.
    pub fn parity_part(&self, parity: Parity) -> GradedForm {
        let mut out = Self::zero(self.n, self.m, self.degree);
        let ne = self.n_even();
        for (idx, x) in &self.terms {
            let want = parity + idx.parity(ne);
            out.add_term(idx.clone(), &x.parity_part(want));
        }
        out
    }

    /// Even and odd components, skipping zero ones.
    pub fn homogeneous_parts(&self) -> Vec<(Parity, GradedForm)> {
        [Parity::Even, Parity::Odd]
            .into_iter()
            .map(|p| (p, self.parity_part(p)))
            .filter(|(_, f)| !f.is_zero())
            .collect()
    }

    /// Value on a tuple of basis derivations `(∂_{B₁}, …, ∂_{B_p})`.
    pub fn value_at(&self, tuple: &[usize]) -> GradedMatrix {
        debug_assert_eq!(tuple.len(), self.degree);
        let ne = self.n_even();
        match canonicalize(tuple, ne) {
            None => GradedMatrix::zero(self.n, self.m),
            Some((idx, neg)) => match self.terms.get(&idx) {
                None => GradedMatrix::zero(self.n, self.m),
                Some(x) => {
                    let mut s = idx.norm(ne);
                    if neg {
                        s = -s;
                    }
                    x.scale(&s)
                }
            },
        }
    }

    /// `ω(D₁, …, D_p)` for arbitrary derivations, by multilinear expansion.
    pub fn evaluate(&self, args: &[DerivationVector]) -> Result<GradedMatrix> {
        if args.len() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: args.len() });
        }
        if let Some(bad) = args.iter().find(|d| d.dim() != self.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "derivation with {} coordinates, expected {}",
                bad.dim(),
                self.dim()
            )));
        }
        let ne = self.n_even();
        let perms = permutations(self.degree);
        let mut out = GradedMatrix::zero(self.n, self.m);
        for (idx, x) in &self.terms {
            let e = idx.entries();
            let norm = idx.norm(ne);
            let mut seen = std::collections::BTreeSet::new();
            for sigma in &perms {
                let tuple: Vec<usize> = sigma.iter().map(|&k| e[k]).collect();
                if !seen.insert(tuple.clone()) {
                    continue;
                }
                let mut w = Scalar::ONE;
                for (d, &b) in args.iter().zip(&tuple) {
                    w = &w * &d.coords[b];
                    if w.is_zero() {
                        break;
                    }
                }
                if w.is_zero() {
                    continue;
                }
                let (_, neg) = canonicalize(&tuple, ne).expect("permutation of a canonical index");
                let s = &(&w * &norm) * &Scalar::sign(neg);
                out.add_scaled(x, &s);
            }
        }
        Ok(out)
    }

    /// The unique form whose values on canonical basis tuples are given.
    pub fn from_values(n: usize, m: usize, degree: usize, values: impl Fn(&[usize]) -> GradedMatrix) -> GradedForm {
        let ne = even_count(n, m);
        let no = derivation_count(n, m) - ne;
        let mut out = Self::zero(n, m, degree);
        for idx in index_set(ne, no, degree) {
            let v = values(idx.entries());
            if v.is_zero() {
                continue;
            }
            let c = idx.norm(ne).recip();
            out.add_term(idx, &v.scale(&c));
        }
        out
    }

    /// `M ∧ ω`: coefficient-wise left multiplication.
    pub fn left_mul(&self, mat: &GradedMatrix) -> GradedForm {
        let mut out = Self::zero(self.n, self.m, self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &mat.matmul(v));
        }
        out
    }

    /// `ω ∧ M`.
    pub fn right_mul(&self, mat: &GradedMatrix) -> GradedForm {
        self.wedge(&GradedForm::from_matrix(mat.clone())).expect("same shape")
    }

    /// Graded wedge product, computed on monomials by
    /// `(X θ^I) ∧ (Y θ^J) = (−1)^{|Y| |θ^I|} XY θ^I θ^J`.
    pub fn wedge(&self, other: &GradedForm) -> Result<GradedForm> {
        self.check_compatible(other)?;
        let ne = self.n_even();
        let mut out = Self::zero(self.n, self.m, self.degree + other.degree);
        let other_parts: Vec<(MultiIndex, GradedMatrix, GradedMatrix)> = other
            .terms
            .iter()
            .map(|(k, v)| {
                let (e, o) = v.parity_decompose();
                (k.clone(), e, o)
            })
            .collect();
        let mut tuple = Vec::with_capacity(out.degree);
        for (i, x) in &self.terms {
            let i_odd = i.parity(ne).is_odd();
            for (j, y_even, y_odd) in &other_parts {
                tuple.clear();
                tuple.extend_from_slice(i.entries());
                tuple.extend_from_slice(j.entries());
                let Some((idx, neg)) = canonicalize(&tuple, ne) else {
                    continue;
                };
                let mut coef = GradedMatrix::zero(self.n, self.m);
                if !y_even.is_zero() {
                    coef.add_assign(&x.matmul(y_even));
                }
                if !y_odd.is_zero() {
                    coef.add_scaled(&x.matmul(y_odd), &Scalar::sign(i_odd));
                }
                if neg {
                    coef = -&coef;
                }
                out.add_term(idx, &coef);
            }
        }
        Ok(out)
    }

    /// Whether every coefficient is a multiple of the identity.
    pub fn is_center_valued(&self) -> bool {
        let one = GradedMatrix::identity(self.n, self.m);
        self.terms.values().all(|x| x == &one.scale(x.get(0, 0)))
    }
}

impl fmt::Debug for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form<{}>(M({}|{}))", self.degree, self.n, self.m)?;
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// `(ω ∧ ω')(∂_{B₁}, …, ∂_{B_{p+p'}})` summed literally over all
/// permutations, with `ω'` homogeneous of parity `i'`. Independent of
/// [`GradedForm::wedge`]; used to cross-check it.
pub fn wedge_value_by_definition(
    left: &GradedForm,
    right: &GradedForm,
    right_parity: Parity,
    tuple: &[usize],
) -> GradedMatrix {
    let (p, q) = (left.degree(), right.degree());
    assert_eq!(tuple.len(), p + q, "tuple length");
    let ne = left.n_even();
    let degrees: Vec<Parity> = tuple.iter().map(|&b| index_parity(b, ne)).collect();
    let mut out = GradedMatrix::zero(left.n(), left.m());
    let mut a = Vec::with_capacity(p);
    let mut b = Vec::with_capacity(q);
    for sigma in permutations(p + q) {
        a.clear();
        b.clear();
        a.extend(sigma[..p].iter().map(|&l| tuple[l]));
        b.extend(sigma[p..].iter().map(|&l| tuple[l]));
        let x = left.value_at(&a);
        if x.is_zero() {
            continue;
        }
        let y = right.value_at(&b);
        if y.is_zero() {
            continue;
        }
        let shift = right_parity.is_odd() && a.iter().filter(|&&l| index_parity(l, ne).is_odd()).count() % 2 == 1;
        let neg = permutation_sign(&sigma) ^ commutation_factor(&sigma, &degrees) ^ shift;
        out.add_scaled(&x.matmul(&y), &Scalar::sign(neg));
    }
    let norm = Scalar::int((factorial(p) * factorial(q)) as i64).recip();
    out.scale(&norm)
}

fn factorial(p: usize) -> u64 {
    (1..=p as u64).product()
}

/// The value of a form given through a callback (used for round trips).
pub fn coefficients_from_values(
    n: usize,
    m: usize,
    degree: usize,
    values: impl Fn(&[usize]) -> GradedMatrix,
) -> GradedForm {
    GradedForm::from_values(n, m, degree, values)
}

/// Coordinates of degree-`p` forms: position `k·s² + (i·s + j)` holds the
/// `(i, j)` entry of the coefficient at the `k`-th canonical multi-index,
/// `s = n + m`.
#[derive(Clone, Debug)]
pub struct FormCoordinates {
    n: usize,
    m: usize,
    degree: usize,
    indices: Vec<MultiIndex>,
}

impl FormCoordinates {
    pub fn new(n: usize, m: usize, degree: usize) -> FormCoordinates {
        let ne = even_count(n, m);
        let indices = index_set(ne, derivation_count(n, m) - ne, degree);
        FormCoordinates { n, m, degree, indices }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    fn block(&self) -> usize {
        (self.n + self.m) * (self.n + self.m)
    }

    /// Dimension of the space of degree-`p` forms.
    pub fn len(&self) -> usize {
        self.indices.len() * self.block()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn position(&self, idx: &MultiIndex) -> Option<usize> {
        self.indices.binary_search(idx).ok()
    }

    /// The basis form for a coordinate position: a matrix unit times a monomial.
    pub fn basis_form(&self, pos: usize) -> GradedForm {
        let s = self.n + self.m;
        let (k, e) = (pos / self.block(), pos % self.block());
        let mut f = GradedForm::zero(self.n, self.m, self.degree);
        f.add_term(self.indices[k].clone(), &GradedMatrix::unit(self.n, self.m, e / s, e % s));
        f
    }

    /// Total parity of the basis form at a position.
    pub fn parity(&self, pos: usize) -> Parity {
        let s = self.n + self.m;
        let (k, e) = (pos / self.block(), pos % self.block());
        let ne = even_count(self.n, self.m);
        let unit = Parity::from_bit(usize::from(e / s >= self.n) + usize::from(e % s >= self.n));
        unit + self.indices[k].parity(ne)
    }

    pub fn to_vector(&self, f: &GradedForm) -> Vec<(usize, Scalar)> {
        assert_eq!(f.degree(), self.degree, "form degree");
        let mut out = Vec::new();
        for (idx, x) in f.terms() {
            let k = self.position(idx).expect("canonical index");
            for (e, v) in x.entries().iter().enumerate() {
                if !v.is_zero() {
                    out.push((k * self.block() + e, v.clone()));
                }
            }
        }
        out
    }

    pub fn from_vector(&self, v: &[(usize, Scalar)]) -> GradedForm {
        let s = self.n + self.m;
        let mut f = GradedForm::zero(self.n, self.m, self.degree);
        for (pos, val) in v {
            let (k, e) = (pos / self.block(), pos % self.block());
            let mut x = GradedMatrix::zero(self.n, self.m);
            x.set(e / s, e % s, val.clone());
            f.add_term(self.indices[k].clone(), &x);
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_set_counts_two_one() {
        let expected = [1, 8, 32, 88, 192];
        for (p, &want) in expected.iter().enumerate() {
            assert_eq!(index_set(4, 4, p).len(), want);
            assert_eq!(index_set_size(4, 4, p), want as u128);
        }
        assert_eq!(index_set(4, 4, 5).len(), 360);
        assert_eq!(index_set(3, 0, 3).len(), 1);
        assert_eq!(index_set(3, 0, 4).len(), 0);
        assert_eq!(index_set_size(3, 0, 4), 0);
    }

    #[test]
    fn commutation_factor_examples() {
        use Parity::*;
        assert!(!commutation_factor(&[0, 1, 2], &[Odd, Odd, Even]));
        assert!(!commutation_factor(&[1, 0], &[Even, Odd]));
        #[cfg(not(feature = "mutation-sign-flip"))]
        assert!(commutation_factor(&[1, 0], &[Odd, Odd]));
    }

    #[test]
    fn theta_pairs_with_basis() {
        for a in 0..8 {
            let t = GradedForm::theta(2, 1, a);
            for b in 0..8 {
                let v = t.evaluate(&[DerivationVector::basis(2, 1, b)]).unwrap();
                let want = if a == b { GradedMatrix::identity(2, 1) } else { GradedMatrix::zero(2, 1) };
                assert_eq!(v, want);
            }
        }
    }

    #[test]
    fn odd_square_values() {
        let t5 = GradedForm::theta(2, 1, 4);
        let sq = t5.wedge(&t5).unwrap();
        let d5 = DerivationVector::basis(2, 1, 4);
        let one = GradedMatrix::identity(2, 1);
        assert_eq!(sq.evaluate(&[d5.clone(), d5.clone()]).unwrap(), one.scale(&Scalar::int(-2)));
        assert_eq!(wedge_value_by_definition(&t5, &t5, Parity::Odd, &[4, 4]), one.scale(&Scalar::int(-2)));
        let key = MultiIndex::new(vec![4, 4], 4, 8).unwrap();
        assert_eq!(sq.coefficient(&key), one);
        let t6 = GradedForm::theta(2, 1, 5);
        let d6 = DerivationVector::basis(2, 1, 5);
        let mixed = t5.wedge(&t6).unwrap();
        assert_eq!(mixed.evaluate(&[d5, d6]).unwrap(), one.scale(&Scalar::int(-1)));
        assert_eq!(mixed, t6.wedge(&t5).unwrap());
    }

    #[test]
    fn even_thetas_anticommute() {
        let t1 = GradedForm::theta(2, 1, 0);
        let t2 = GradedForm::theta(2, 1, 1);
        assert_eq!(t1.wedge(&t2).unwrap(), t2.wedge(&t1).unwrap().neg());
        assert!(t1.wedge(&t1).unwrap().is_zero());
    }

    #[test]
    fn values_round_trip() {
        let x = GradedMatrix::unit(2, 1, 0, 2);
        let f = GradedForm::monomial(&x, &[1, 4, 4])
            .add(&GradedForm::monomial(&GradedMatrix::identity(2, 1), &[6, 0, 5]))
            .unwrap();
        let g = GradedForm::from_values(2, 1, 3, |t| f.value_at(t));
        assert_eq!(f, g);
    }

    #[test]
    fn permutations_enumerate() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert!(permutation_sign(&[1, 0, 2]));
        assert!(!permutation_sign(&[1, 2, 0]));
    }
}
