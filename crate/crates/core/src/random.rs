//! Seeded samplers for property checks. Entries are small integers so that
//! exact arithmetic stays cheap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{index_set, DerivationVector, GradedForm, MultiIndex};
use crate::matrix::{GradedMatrix, Parity};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    n: usize,
    m: usize,
}

impl Sampler {
    pub fn new(n: usize, m: usize, seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), n, m }
    }

    /// Independent stream for a named sub-check, so adding a check does not
    /// shift the samples of the others.
    pub fn fork(&self, label: &str, seed: u64) -> Sampler {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
        Sampler::new(self.n, self.m, seed ^ h)
    }

    pub fn small_int(&mut self) -> Scalar {
        Scalar::int(self.rng.gen_range(-3..=3))
    }

    pub fn parity(&mut self) -> Parity {
        Parity::from_bit(self.rng.gen_range(0..2))
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn matrix(&mut self, parity: Parity) -> GradedMatrix {
        let mut out = GradedMatrix::zero(self.n, self.m);
        let s = self.n + self.m;
        for i in 0..s {
            for j in 0..s {
                if out.position_parity(i, j) == parity {
                    out.set(i, j, self.small_int());
                }
            }
        }
        out
    }

    pub fn matrix_any(&mut self) -> GradedMatrix {
        let even = self.matrix(Parity::Even);
        let odd = self.matrix(Parity::Odd);
        &even + &odd
    }

    /// Even matrix with nonzero determinant.
    pub fn invertible_even(&mut self) -> GradedMatrix {
        loop {
            let g = self.matrix(Parity::Even);
            if g.inverse().is_some() {
                return g;
            }
        }
    }

    pub fn derivation(&mut self, parity: Parity) -> DerivationVector {
        let dim = (self.n + self.m) * (self.n + self.m) - 1;
        let n_even = self.n * self.n + self.m * self.m - 1;
        let coords = (0..dim)
            .map(|a| if Parity::from_bit((a >= n_even) as usize) == parity { self.small_int() } else { Scalar::ZERO })
            .collect();
        DerivationVector::new(self.n, self.m, coords).expect("right length")
    }

    /// Homogeneous form with at most `terms` monomials.
    pub fn form(&mut self, degree: usize, parity: Parity, terms: usize) -> GradedForm {
        let dim = (self.n + self.m) * (self.n + self.m) - 1;
        let n_even = self.n * self.n + self.m * self.m - 1;
        let indices: Vec<MultiIndex> = index_set(n_even, dim - n_even, degree);
        let mut out = GradedForm::zero(self.n, self.m, degree);
        for _ in 0..terms {
            let idx = indices[self.index(indices.len())].clone();
            let coeff = self.matrix(parity + idx.parity(n_even));
            out.add_term(idx, &coeff);
        }
        out
    }
}
