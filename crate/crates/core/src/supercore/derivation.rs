use std::collections::BTreeMap;
use std::sync::Arc;

use super::elem::{Mono, SuperElem};
use super::ring::{Atom, Parity, SuperRingSpec};
use crate::error::{Error, Result};

/// A homogeneous superderivation determined by its values on generators,
/// extended by the super-Leibniz rule and the quotient rule on the
/// declared denominators. Unlisted generators map to zero.
#[derive(Clone, Debug)]
pub struct Derivation {
    ring: Arc<SuperRingSpec>,
    parity: Parity,
    images: BTreeMap<Atom, SuperElem>,
}

impl Derivation {
    pub fn zero(ring: &Arc<SuperRingSpec>, parity: Parity) -> Self {
        Derivation { ring: ring.clone(), parity, images: BTreeMap::new() }
    }

    /// Builds a derivation from `(generator name, image)` pairs. Each image
    /// must have parity `|d| + |x|`.
    pub fn new<'a>(
        ring: &Arc<SuperRingSpec>,
        parity: Parity,
        table: impl IntoIterator<Item = (&'a str, SuperElem)>,
    ) -> Result<Self> {
        let mut d = Derivation::zero(ring, parity);
        for (name, img) in table {
            let atom = ring.atom(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
            d.set(atom, img)?;
        }
        Ok(d)
    }

    pub fn set(&mut self, atom: Atom, img: SuperElem) -> Result<()> {
        if !SuperRingSpec::same(img.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let want = self.parity + self.ring.atom_parity(atom);
        if !img.has_parity(want) {
            return Err(Error::SpecMismatch(format!(
                "image of `{}` must be {want}, got `{img}`",
                self.ring.atom_name(atom)
            )));
        }
        if img.is_zero() {
            self.images.remove(&atom);
        } else {
            self.images.insert(atom, img);
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<SuperRingSpec> {
        &self.ring
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn image(&self, atom: Atom) -> SuperElem {
        self.images.get(&atom).cloned().unwrap_or_else(|| SuperElem::zero(&self.ring))
    }

    pub fn images(&self) -> impl Iterator<Item = (Atom, &SuperElem)> {
        self.images.iter().map(|(a, e)| (*a, e))
    }

    /// Same derivation re-expressed over `target` (matching names).
    pub fn embed(&self, target: &Arc<SuperRingSpec>) -> Result<Derivation> {
        let mut d = Derivation::zero(target, self.parity);
        for (a, img) in &self.images {
            let name = self.ring.atom_name(*a);
            let ta = target.atom(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
            d.set(ta, img.embed(target)?)?;
        }
        Ok(d)
    }

    fn apply_mono(&self, m: &Mono) -> SuperElem {
        let ring = &self.ring;
        let odd = self.parity.is_odd();
        let slots: Vec<usize> = m.odd_slots().collect();
        let mut out = SuperElem::zero(ring);
        let mut prefix = SuperElem::one(ring);
        for (j, &s) in slots.iter().enumerate() {
            if let Some(img) = self.images.get(&Atom::Odd(s)) {
                let suffix_bits = slots[j + 1..].iter().fold(0u128, |acc, &x| acc | 1u128 << x);
                let suffix = SuperElem::from_mono(ring, Mono { odd: suffix_bits, even: m.even.clone() });
                let mut t = &(&prefix * img) * &suffix;
                if odd && j % 2 == 1 {
                    t = t.neg();
                }
                out = &out + &t;
            }
            prefix = &prefix * &SuperElem::from_atom(ring, Atom::Odd(s));
        }
        let theta = SuperElem::from_mono(ring, Mono { odd: m.odd, even: Default::default() });
        let sign_neg = odd && slots.len() % 2 == 1;
        for (k, &(g, e)) in m.even.iter().enumerate() {
            if let Some(img) = self.images.get(&Atom::Even(g as usize)) {
                let mut rest = m.even.clone();
                if e == 1 {
                    rest.remove(k);
                } else {
                    rest[k].1 = e - 1;
                }
                let r = SuperElem::from_mono(ring, Mono { odd: 0, even: rest }).scale_q(&super::q_int(e as i64));
                let mut t = &(&theta * img) * &r;
                if sign_neg {
                    t = t.neg();
                }
                out = &out + &t;
            }
        }
        out
    }

    fn apply_numerator(&self, a: &SuperElem) -> SuperElem {
        let ring = &self.ring;
        let body_images: Vec<(usize, &SuperElem)> = (0..ring.num_body())
            .filter_map(|j| self.images.get(&Atom::Body(j)).map(|img| (j, img)))
            .collect();
        let mut out = SuperElem::zero(ring);
        for (m, c) in a.terms() {
            let mono = SuperElem::from_mono(ring, m.clone());
            for &(j, img) in &body_images {
                let dc = c.derivative(j);
                if !dc.is_zero() {
                    out = &out + &(&img.scale(&dc) * &mono);
                }
            }
            let dm = self.apply_mono(m);
            if !dm.is_zero() {
                out = &out + &dm.scale(c);
            }
        }
        out
    }

    /// `d(a)`.
    pub fn apply(&self, a: &SuperElem) -> SuperElem {
        assert!(SuperRingSpec::same(a.ring(), &self.ring), "ring mismatch");
        if !a.has_denominator() {
            return self.apply_numerator(a);
        }
        let ring = &self.ring;
        let numer = SuperElem::from_parts(ring, a.terms_map().clone(), vec![0; ring.num_dens()]);
        let unit = SuperElem::from_parts(
            ring,
            super::Terms::from([(Mono::one(), super::RatFunc::one(ring.num_body()))]),
            a.den().to_vec(),
        );
        let mut d_unit = SuperElem::zero(ring);
        for (i, &k) in a.den().iter().enumerate() {
            if k == 0 {
                continue;
            }
            let dd = self.apply_numerator(&SuperElem::denominator(ring, i));
            if dd.is_zero() {
                continue;
            }
            let t = &(&dd * &SuperElem::denominator_inverse(ring, i)) * &unit;
            d_unit = &d_unit - &t.scale_q(&super::q_int(k as i64));
        }
        &(&d_unit * &numer) + &(&unit * &self.apply_numerator(&numer))
    }
}
