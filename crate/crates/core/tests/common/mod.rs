//! Shared generators and small independent oracles for the integration
//! suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superpv::dalgebra::DModule;
use superpv::random::ElemSampler;
use superpv::solver::{scalar_coefficient, SeriesModel};
use superpv::supercore::{Parity, SuperElem};
use superpv::supermatrix::{Format, SuperMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// All `m|n` with `m ≤ max_m`, `n ≤ max_n`, and positive rank.
pub fn formats(max_m: usize, max_n: usize) -> Vec<Format> {
    let mut out = Vec::new();
    for m in 0..=max_m {
        for n in 0..=max_n {
            if m + n > 0 {
                out.push(Format { m, n });
            }
        }
    }
    out
}

/// A consistent module over the model: a random odd `F(delta)` with
/// `F(d)` derived from it, or a random even `F(d)` alone.
pub fn random_module<R: Rng>(model: &SeriesModel, format: Format, sampler: &ElemSampler, rng: &mut R) -> DModule {
    let class = if model.is_delta() { Parity::Odd } else { Parity::Even };
    let f = sampler.matrix(rng, format, class);
    let m = model.module(f).expect("model module");
    assert!(m.is_consistent(), "generated table is inconsistent");
    m
}

/// Small polynomial entries, for the suites that build grid rings.
pub fn sparse_sampler(model: &SeriesModel) -> ElemSampler {
    let mut s = ElemSampler::new(model.ring()).polynomial();
    s.max_terms = 2;
    s.max_body_degree = 1;
    s.max_odd_degree = 1;
    s.max_coeff = 2;
    s
}

/// Rank over ℚ by plain Gaussian elimination.
pub fn rank_q(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        let pivot: Vec<BigRational> = a[r].iter().map(|x| x * &inv).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let k = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &k * y;
                }
            }
        }
        a[r] = pivot;
        r += 1;
    }
    r
}

type MonomialKey = (u128, Vec<(u16, u32)>, Vec<u32>);

/// Rational coordinates of polynomial elements in the monomial basis
/// `θ^I t^k`, one row per element.
pub fn coordinates(elems: &[SuperElem]) -> Vec<Vec<BigRational>> {
    let mut keys: BTreeMap<MonomialKey, usize> = BTreeMap::new();
    let mut sparse = Vec::new();
    for e in elems {
        assert!(!e.has_denominator());
        let mut row = Vec::new();
        for (m, c) in e.terms() {
            assert!(c.is_polynomial() && c.denom().terms().count() == 1);
            let (_, d) = c.denom().terms().next().expect("constant denominator");
            for (exp, x) in c.numer().terms() {
                let key = (m.odd, m.even.to_vec(), exp.to_vec());
                let n = keys.len();
                let idx = *keys.entry(key).or_insert(n);
                row.push((idx, x / d));
            }
        }
        sparse.push(row);
    }
    sparse
        .into_iter()
        .map(|row| {
            let mut dense = vec![BigRational::zero(); keys.len()];
            for (i, x) in row {
                dense[i] += x;
            }
            dense
        })
        .collect()
}

/// Dense coefficient series `[t^0, t^1, ...]` of a matrix over `ℚ[t]`.
pub type QSeries = Vec<Vec<Vec<BigRational>>>;

pub fn to_series(x: &SuperMatrix, n: usize) -> QSeries {
    let k = x.size();
    (0..n)
        .map(|d| {
            (0..k)
                .map(|i| (0..k).map(|j| scalar_coefficient(x.get(i, j), d as u32).expect("scalar entry")).collect())
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let k = a.len();
    (0..k)
        .map(|i| (0..k).map(|j| (0..k).fold(BigRational::zero(), |acc, l| acc + &a[i][l] * &b[l][j])).collect())
        .collect()
}

/// Picard iteration `Y ← I + ∫₀ᵗ A Y` on truncated coefficient series;
/// each pass fixes one more coefficient.
pub fn picard(a: &QSeries, k: usize, n: usize) -> QSeries {
    let zero = vec![vec![BigRational::zero(); k]; k];
    let id: Vec<Vec<BigRational>> =
        (0..k).map(|i| (0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
    let mut y: QSeries = vec![zero.clone(); n];
    y[0] = id.clone();
    for _ in 0..n {
        let mut next = vec![zero.clone(); n];
        next[0] = id.clone();
        for (i, ai) in a.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                let deg = i + j + 1;
                if deg < n {
                    let p = mat_mul(ai, yj);
                    let inv = BigRational::new(BigInt::one(), BigInt::from(deg));
                    for r in 0..k {
                        for c in 0..k {
                            next[deg][r][c] += &p[r][c] * &inv;
                        }
                    }
                }
            }
        }
        y = next;
    }
    y
}
