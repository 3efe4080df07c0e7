use std::collections::BTreeMap;
use std::sync::Arc;

use super::lie::LieSuperSpec;
use super::word::{normal_monomials, seq_parity, Seq};
use crate::error::{Error, Result};
use crate::supercore::{Parity, SuperElem, SuperRingSpec};

/// Terms `(sign, left, right)` of the coproduct of a monomial
/// `g_1⋯g_k`, each `g_i` primitive. A term sends the positions in one
/// subset left and the rest right; the sign counts pairs `i < j` with
/// `g_i` sent right and `g_j` sent left, weighted by `|g_i||g_j|`.
/// Subsequences of a normal monomial are normal, so no rewriting is
/// needed.
pub fn coproduct(spec: &LieSuperSpec, seq: &[usize]) -> Vec<(bool, Seq, Seq)> {
    let k = seq.len();
    assert!(k < 24, "monomial too long for subset expansion");
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        let mut neg = false;
        let mut odd_right = false;
        for (pos, &g) in seq.iter().enumerate() {
            let odd = spec.parity(g).is_odd();
            if mask >> pos & 1 == 1 {
                left.push(g);
                neg ^= odd && odd_right;
            } else {
                right.push(g);
                odd_right ^= odd;
            }
        }
        out.push((neg, left, right));
    }
    out
}

/// A homogeneous ℚ-linear map U(g) → A known on PBW monomials up to a
/// length bound; unlisted monomials map to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    ring: Arc<SuperRingSpec>,
    parity: Parity,
    bound: usize,
    values: BTreeMap<Seq, SuperElem>,
}

impl Functional {
    pub fn new(ring: &Arc<SuperRingSpec>, parity: Parity, bound: usize) -> Self {
        Functional { ring: ring.clone(), parity, bound, values: BTreeMap::new() }
    }

    /// The counit `ε`: `1 ↦ 1`, every nonempty monomial `↦ 0`.
    pub fn counit(ring: &Arc<SuperRingSpec>, bound: usize) -> Self {
        let mut f = Functional::new(ring, Parity::Even, bound);
        f.values.insert(Vec::new(), SuperElem::one(ring));
        f
    }

    /// Sets `f(seq)`; the value must have parity `|f| + |seq|`.
    pub fn set(&mut self, spec: &LieSuperSpec, seq: Seq, value: SuperElem) -> Result<()> {
        if seq.len() > self.bound {
            return Err(Error::Validation(format!("monomial longer than the bound {}", self.bound)));
        }
        let want = self.parity + seq_parity(spec, &seq);
        if !value.has_parity(want) {
            return Err(Error::NotHomogeneous);
        }
        if value.is_zero() {
            self.values.remove(&seq);
        } else {
            self.values.insert(seq, value);
        }
        Ok(())
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn get(&self, seq: &[usize]) -> SuperElem {
        self.values.get(seq).cloned().unwrap_or_else(|| SuperElem::zero(&self.ring))
    }

    pub fn values(&self) -> &BTreeMap<Seq, SuperElem> {
        &self.values
    }
}

/// `(f*g)(d) = (-1)^{|f||d_(2)|} f(d_(1)) g(d_(2))` on every monomial of
/// length up to the smaller bound.
pub fn convolve(spec: &LieSuperSpec, f: &Functional, g: &Functional) -> Functional {
    let bound = f.bound.min(g.bound);
    let mut out = Functional::new(&f.ring, f.parity + g.parity, bound);
    for d in normal_monomials(spec, bound) {
        let mut acc = SuperElem::zero(&f.ring);
        for (neg, left, right) in coproduct(spec, &d) {
            let (a, b) = (f.get(&left), g.get(&right));
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let flip = neg ^ f.parity.koszul(seq_parity(spec, &right));
            let t = &a * &b;
            acc = if flip { &acc - &t } else { &acc + &t };
        }
        if !acc.is_zero() {
            out.values.insert(d, acc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ring() -> Arc<SuperRingSpec> {
        SuperRingSpec::builder().body("t").odd("th").build().unwrap()
    }

    #[test]
    fn coproduct_of_square() {
        let s = LieSuperSpec::even_line("d");
        let terms = coproduct(&s, &[0, 0]);
        let mut mid = 0;
        for (neg, l, r) in &terms {
            assert!(!neg);
            if l.len() == 1 && r.len() == 1 {
                mid += 1;
            }
        }
        assert_eq!(mid, 2);
    }

    #[test]
    fn counit_is_unit() {
        let r = ring();
        let s = LieSuperSpec::delta_model();
        let mut f = Functional::new(&r, Parity::Odd, 2);
        f.set(&s, vec![], SuperElem::parse(&r, "t*th").unwrap()).unwrap();
        f.set(&s, vec![1], SuperElem::parse(&r, "t").unwrap()).unwrap();
        f.set(&s, vec![0, 1], SuperElem::parse(&r, "1").unwrap()).unwrap();
        f.set(&s, vec![0], SuperElem::parse(&r, "th").unwrap()).unwrap();
        let e = Functional::counit(&r, 2);
        assert_eq!(convolve(&s, &e, &f), f);
        assert_eq!(convolve(&s, &f, &e), f);
    }

    #[test]
    fn binomial_coefficients() {
        let r = ring();
        let s = LieSuperSpec::even_line("d");
        let mut f = Functional::new(&r, Parity::Even, 2);
        let mut g = Functional::new(&r, Parity::Even, 2);
        for (seq, a, b) in [(vec![], "1", "1"), (vec![0], "2", "3"), (vec![0, 0], "5", "7")] {
            f.set(&s, seq.clone(), SuperElem::parse(&r, a).unwrap()).unwrap();
            g.set(&s, seq, SuperElem::parse(&r, b).unwrap()).unwrap();
        }
        let h = convolve(&s, &f, &g);
        // d²: 5·1 + 2·(2·3) + 1·7
        assert_eq!(h.get(&[0, 0]).as_rational(), Some(BigRational::from_integer(24.into())));
        assert_eq!(h.get(&[0]).as_rational(), Some(BigRational::from_integer(5.into())));
    }
}
