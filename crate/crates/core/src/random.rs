//! Seeded samplers for ring elements and matrices, used by the property
//! checks and the test suites.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use smallvec::SmallVec;

use crate::supercore::{Mono, Parity, Poly, RatFunc, SuperElem, SuperRingSpec, Terms};
use crate::supermatrix::{Format, SuperMatrix};

#[derive(Clone, Debug)]
pub struct ElemSampler {
    ring: Arc<SuperRingSpec>,
    pub max_terms: usize,
    pub max_coeff: i64,
    pub max_body_degree: u32,
    pub max_even_degree: u32,
    pub max_odd_degree: usize,
    /// Probability of a rational body coefficient `p / (t + c)`.
    pub fraction_rate: f64,
    /// Probability of attaching one inverse of a declared denominator.
    pub denominator_rate: f64,
}

impl ElemSampler {
    pub fn new(ring: &Arc<SuperRingSpec>) -> Self {
        ElemSampler {
            ring: ring.clone(),
            max_terms: 3,
            max_coeff: 3,
            max_body_degree: 2,
            max_even_degree: 1,
            max_odd_degree: 3,
            fraction_rate: 0.0,
            denominator_rate: 0.0,
        }
    }

    pub fn polynomial(mut self) -> Self {
        self.fraction_rate = 0.0;
        self.denominator_rate = 0.0;
        self
    }

    pub fn with_fractions(mut self, rate: f64) -> Self {
        self.fraction_rate = rate;
        self
    }

    pub fn ring(&self) -> &Arc<SuperRingSpec> {
        &self.ring
    }

    fn coeff<R: Rng>(&self, rng: &mut R) -> BigRational {
        loop {
            let n = rng.gen_range(-self.max_coeff..=self.max_coeff);
            if n != 0 {
                let d = rng.gen_range(1..=2i64);
                return BigRational::new(BigInt::from(n), BigInt::from(d));
            }
        }
    }

    fn body_coeff<R: Rng>(&self, rng: &mut R) -> RatFunc {
        let nb = self.ring.num_body();
        if nb == 0 {
            return RatFunc::constant(0, self.coeff(rng));
        }
        let nterms = rng.gen_range(1..=2);
        let mut p = Poly::zero(nb);
        for _ in 0..nterms {
            let mut e = vec![0u32; nb];
            let v = rng.gen_range(0..nb);
            e[v] = rng.gen_range(0..=self.max_body_degree);
            p = p.add(&Poly::from_terms(nb, [(e, self.coeff(rng))]));
        }
        if p.is_zero() {
            p = Poly::one(nb);
        }
        if rng.gen_bool(self.fraction_rate) {
            let v = rng.gen_range(0..nb);
            let shift = BigRational::from_integer(BigInt::from(rng.gen_range(1..=3i64)));
            let den = Poly::var(nb, v).add(&Poly::constant(nb, shift));
            RatFunc::new(p, den)
        } else {
            RatFunc::from_poly(p)
        }
    }

    fn mono<R: Rng>(&self, rng: &mut R, parity: Option<Parity>) -> Mono {
        let r = self.ring.num_odd_slots();
        let mut odd = 0u128;
        let k = rng.gen_range(0..=self.max_odd_degree.min(r));
        for _ in 0..k {
            odd |= 1u128 << rng.gen_range(0..r);
        }
        if let Some(p) = parity {
            if (odd.count_ones() % 2 == 1) != p.is_odd() {
                if r == 0 {
                    return Mono { odd: 0, even: SmallVec::new() };
                }
                let s = rng.gen_range(0..r);
                odd ^= 1u128 << s;
            }
        }
        let mut even = SmallVec::new();
        for g in 0..self.ring.num_even() {
            let e = rng.gen_range(0..=self.max_even_degree);
            if e > 0 && rng.gen_bool(0.5) {
                even.push((g as u16, e));
            }
        }
        Mono { odd, even }
    }

    fn sample<R: Rng>(&self, rng: &mut R, parity: Option<Parity>) -> SuperElem {
        let n = rng.gen_range(1..=self.max_terms);
        let mut terms = Terms::new();
        for _ in 0..n {
            let m = self.mono(rng, parity);
            if parity.is_some_and(|p| m.parity() != p) {
                continue;
            }
            let c = self.body_coeff(rng);
            crate::supercore::terms_add_term(&mut terms, m, c);
        }
        let mut den = vec![0u32; self.ring.num_dens()];
        if !den.is_empty() && rng.gen_bool(self.denominator_rate) {
            let i = rng.gen_range(0..den.len());
            den[i] = 1;
        }
        SuperElem::from_parts(&self.ring, terms, den)
    }

    pub fn any<R: Rng>(&self, rng: &mut R) -> SuperElem {
        self.sample(rng, None)
    }

    /// A homogeneous element of the given parity (possibly zero).
    pub fn homogeneous<R: Rng>(&self, rng: &mut R, parity: Parity) -> SuperElem {
        self.sample(rng, Some(parity))
    }

    /// An even element whose body is a nonzero constant plus body-variable
    /// terms, hence invertible in the body field.
    pub fn even_unit<R: Rng>(&self, rng: &mut R) -> SuperElem {
        loop {
            let e = self.homogeneous(rng, Parity::Even);
            if !e.body().is_zero() && e.body().invert().is_ok() {
                return e;
            }
        }
    }

    /// A matrix of the requested class: entry `(i, j)` has parity
    /// `p_i + p_j + class`.
    pub fn matrix<R: Rng>(&self, rng: &mut R, format: Format, class: Parity) -> SuperMatrix {
        SuperMatrix::from_fn(&self.ring, format, |i, j| {
            if rng.gen_bool(0.25) {
                SuperElem::zero(&self.ring)
            } else {
                self.homogeneous(rng, format.entry_parity(i, j) + class)
            }
        })
    }
}
