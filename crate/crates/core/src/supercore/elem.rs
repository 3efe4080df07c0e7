use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use smallvec::SmallVec;

use super::poly::{Poly, RatFunc};
use super::ring::{Atom, Parity, SuperRingSpec};
use crate::error::{Error, Result};

/// Sparse even exponents: `(generator index, exponent)` sorted by index.
pub type EvenExps = SmallVec<[(u16, u32); 4]>;

/// A monomial `θ^S · x^e`: Grassmann slots as a bit set, written in
/// ascending slot order, followed by commuting even generators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono {
    pub odd: u128,
    pub even: EvenExps,
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.count_ones() % 2 == 1)
    }

    pub fn odd_slots(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.odd;
        (0..128).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn even_exp(&self, idx: usize) -> u32 {
        self.even
            .iter()
            .find(|(g, _)| *g as usize == idx)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Product of two monomials with its Koszul sign (`true` = negate), or
    /// `None` when a Grassmann slot repeats.
    pub fn mul(&self, other: &Mono) -> Option<(Mono, bool)> {
        let neg = odd_merge_sign(self.odd, other.odd)?;
        Some((Mono { odd: self.odd | other.odd, even: merge_even(&self.even, &other.even) }, neg))
    }

    fn even_divides(&self, other: &Mono) -> bool {
        self.even.iter().all(|&(g, e)| other.even_exp(g as usize) >= e)
    }

    fn even_quotient(&self, d: &Mono) -> Mono {
        let even = self
            .even
            .iter()
            .filter_map(|&(g, e)| {
                let r = e - d.even_exp(g as usize);
                (r > 0).then_some((g, r))
            })
            .collect();
        Mono { odd: self.odd, even }
    }
}

/// Sign of `θ^A θ^B → θ^{A∪B}` in ascending order: counts pairs `i∈A`, `j∈B`
/// with `i > j`. `None` if the sets overlap.
pub fn odd_merge_sign(a: u128, b: u128) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 127 { 0 } else { a >> (j + 1) };
        swaps += above.count_ones();
    }
    Some(swaps % 2 == 1)
}

fn merge_even(a: &EvenExps, b: &EvenExps) -> EvenExps {
    let mut out = EvenExps::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// Lex order on even exponents with generator 0 most significant.
fn even_lex_cmp(a: &EvenExps, b: &EvenExps) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(ga, ea)), Some(&(gb, eb))) => {
                if ga < gb {
                    return Ordering::Greater;
                }
                if gb < ga {
                    return Ordering::Less;
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

pub type Terms = BTreeMap<Mono, RatFunc>;

pub(crate) fn terms_add_term(terms: &mut Terms, m: Mono, c: RatFunc) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn terms_mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((m, neg)) = ma.mul(mb) {
                let c = ca.mul(cb);
                terms_add_term(&mut out, m, if neg { c.neg() } else { c });
            }
        }
    }
    out
}

fn terms_scale(a: &Terms, k: &RatFunc) -> Terms {
    if k.is_zero() {
        return Terms::new();
    }
    a.iter().map(|(m, c)| (m.clone(), c.mul(k))).collect()
}

/// Exact division of `num` by a pure-even polynomial `d`, one Grassmann
/// component at a time.
fn terms_div_exact(num: &Terms, d: &Terms) -> Option<Terms> {
    let (dm, dc) = d
        .iter()
        .max_by(|a, b| even_lex_cmp(&a.0.even, &b.0.even))
        .map(|(m, c)| (m.clone(), c.clone()))?;
    let dc_inv = dc.inv()?;
    let mut components: BTreeMap<u128, Terms> = BTreeMap::new();
    for (m, c) in num {
        components.entry(m.odd).or_default().insert(m.clone(), c.clone());
    }
    let mut quot = Terms::new();
    for (_, mut rem) in components {
        while let Some((lm, lc)) = rem
            .iter()
            .max_by(|a, b| even_lex_cmp(&a.0.even, &b.0.even))
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            if !dm.even_divides(&lm) {
                return None;
            }
            let qm = lm.even_quotient(&dm);
            let qc = lc.mul(&dc_inv);
            for (m, c) in d {
                let (pm, _) = qm.mul(m).expect("divisor is purely even");
                terms_add_term(&mut rem, pm, qc.mul(c).neg());
            }
            terms_add_term(&mut quot, qm, qc);
        }
    }
    Some(quot)
}

/// An element of a localized supercommutative ring: `Σ c·θ^S·x^e` divided by
/// `Π D_i^{k_i}` over the ring's declared denominators.
#[derive(Clone)]
pub struct SuperElem {
    ring: Arc<SuperRingSpec>,
    terms: Terms,
    den: Vec<u32>,
}

impl SuperElem {
    pub fn zero(ring: &Arc<SuperRingSpec>) -> Self {
        SuperElem { ring: ring.clone(), terms: Terms::new(), den: vec![0; ring.num_dens()] }
    }

    pub fn one(ring: &Arc<SuperRingSpec>) -> Self {
        Self::scalar(ring, RatFunc::one(ring.num_body()))
    }

    pub fn scalar(ring: &Arc<SuperRingSpec>, c: RatFunc) -> Self {
        let mut e = Self::zero(ring);
        terms_add_term(&mut e.terms, Mono::one(), c);
        e
    }

    pub fn rational(ring: &Arc<SuperRingSpec>, q: BigRational) -> Self {
        Self::scalar(ring, RatFunc::constant(ring.num_body(), q))
    }

    pub fn int(ring: &Arc<SuperRingSpec>, n: i64) -> Self {
        Self::rational(ring, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_atom(ring: &Arc<SuperRingSpec>, atom: Atom) -> Self {
        match atom {
            Atom::Body(i) => Self::scalar(ring, RatFunc::from_poly(Poly::var(ring.num_body(), i))),
            Atom::Odd(slot) => Self::from_mono(ring, Mono { odd: 1u128 << slot, even: EvenExps::new() }),
            Atom::Even(i) => Self::from_mono(ring, Mono { odd: 0, even: smallvec::smallvec![(i as u16, 1)] }),
        }
    }

    pub fn gen(ring: &Arc<SuperRingSpec>, name: &str) -> Result<Self> {
        let atom = ring.atom(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        Ok(Self::from_atom(ring, atom))
    }

    pub fn from_mono(ring: &Arc<SuperRingSpec>, m: Mono) -> Self {
        let mut e = Self::zero(ring);
        e.terms.insert(m, RatFunc::one(ring.num_body()));
        e
    }

    /// The polynomial `D_i` itself (not its inverse).
    pub fn denominator(ring: &Arc<SuperRingSpec>, i: usize) -> Self {
        SuperElem { ring: ring.clone(), terms: ring.denominators()[i].terms.clone(), den: vec![0; ring.num_dens()] }
    }

    /// `1 / D_i`.
    pub fn denominator_inverse(ring: &Arc<SuperRingSpec>, i: usize) -> Self {
        let mut e = Self::one(ring);
        e.den[i] = 1;
        e
    }

    pub fn from_parts(ring: &Arc<SuperRingSpec>, terms: Terms, den: Vec<u32>) -> Self {
        assert_eq!(den.len(), ring.num_dens());
        let mut e = SuperElem { ring: ring.clone(), terms, den };
        e.normalize();
        e
    }

    pub fn ring(&self) -> &Arc<SuperRingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &RatFunc)> {
        self.terms.iter()
    }

    pub(crate) fn terms_map(&self) -> &Terms {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn den(&self) -> &[u32] {
        &self.den
    }

    pub fn has_denominator(&self) -> bool {
        self.den.iter().any(|&k| k > 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        !self.has_denominator()
            && self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// True when every monomial is even (zero counts as even).
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.parity() == Parity::Even)
    }

    /// True when every monomial is odd (zero counts as odd).
    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.parity() == Parity::Odd)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_even() || self.is_odd()
    }

    /// Parity of a homogeneous element; zero reports `Even`, mixed `None`.
    pub fn parity(&self) -> Option<Parity> {
        if self.is_even() {
            Some(Parity::Even)
        } else if self.is_odd() {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        match p {
            Parity::Even => self.is_even(),
            Parity::Odd => self.is_odd(),
        }
    }

    /// Scalar value when the element is a constant of the body field.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        if self.has_denominator() {
            return None;
        }
        match self.terms.len() {
            0 => Some(RatFunc::zero(self.ring.num_body())),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_scalar().and_then(|c| c.constant_value())
    }

    fn check_ring(&self, other: &SuperElem) -> Result<()> {
        if SuperRingSpec::same(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn denominator_power_terms(&self, exps: &[u32]) -> Terms {
        let mut out = Terms::new();
        terms_add_term(&mut out, Mono::one(), RatFunc::one(self.ring.num_body()));
        for (i, &k) in exps.iter().enumerate() {
            for _ in 0..k {
                out = terms_mul(&out, &self.ring.denominators()[i].terms);
            }
        }
        out
    }

    /// Numerator rewritten over the denominator exponents `target`
    /// (componentwise ≥ the current ones).
    fn numerator_at(&self, target: &[u32]) -> Terms {
        let extra: Vec<u32> = target.iter().zip(&self.den).map(|(t, k)| t - k).collect();
        if extra.iter().all(|&k| k == 0) {
            return self.terms.clone();
        }
        terms_mul(&self.terms, &self.denominator_power_terms(&extra))
    }

    fn normalize(&mut self) {
        if self.terms.is_empty() {
            self.den.iter_mut().for_each(|k| *k = 0);
            return;
        }
        for i in 0..self.den.len() {
            while self.den[i] > 0 {
                match terms_div_exact(&self.terms, &self.ring.denominators()[i].terms) {
                    Some(q) => {
                        self.terms = q;
                        self.den[i] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    pub fn try_add(&self, other: &SuperElem) -> Result<SuperElem> {
        self.check_ring(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &SuperElem) -> Result<SuperElem> {
        self.check_ring(other)?;
        Ok(self.add_unchecked(other, true))
    }

    fn add_unchecked(&self, other: &SuperElem, negate: bool) -> SuperElem {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let target: Vec<u32> = self.den.iter().zip(&other.den).map(|(a, b)| *a.max(b)).collect();
        let mut terms = self.numerator_at(&target);
        for (m, c) in other.numerator_at(&target) {
            terms_add_term(&mut terms, m, if negate { c.neg() } else { c });
        }
        let mut e = SuperElem { ring: self.ring.clone(), terms, den: target };
        if e.has_denominator() {
            e.normalize();
        } else if e.terms.is_empty() {
            e.den.iter_mut().for_each(|k| *k = 0);
        }
        e
    }

    pub fn try_mul(&self, other: &SuperElem) -> Result<SuperElem> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &SuperElem) -> SuperElem {
        if self.is_zero() || other.is_zero() {
            return SuperElem::zero(&self.ring);
        }
        let terms = terms_mul(&self.terms, &other.terms);
        let den = self.den.iter().zip(&other.den).map(|(a, b)| a + b).collect();
        let mut e = SuperElem { ring: self.ring.clone(), terms, den };
        if e.has_denominator() {
            e.normalize();
        }
        e
    }

    pub fn neg(&self) -> SuperElem {
        SuperElem {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, k: &RatFunc) -> SuperElem {
        let mut e =
            SuperElem { ring: self.ring.clone(), terms: terms_scale(&self.terms, k), den: self.den.clone() };
        if e.terms.is_empty() {
            e.den.iter_mut().for_each(|k| *k = 0);
        }
        e
    }

    pub fn scale_q(&self, q: &BigRational) -> SuperElem {
        self.scale(&RatFunc::constant(self.ring.num_body(), q.clone()))
    }

    pub fn pow(&self, k: u32) -> SuperElem {
        let mut out = SuperElem::one(&self.ring);
        for _ in 0..k {
            out = out.mul_unchecked(self);
        }
        out
    }

    /// Drops every monomial that contains a Grassmann slot (the projection
    /// `K → K/I_K`).
    pub fn body(&self) -> SuperElem {
        let terms = self.terms.iter().filter(|(m, _)| m.odd == 0).map(|(m, c)| (m.clone(), c.clone())).collect();
        let mut e = SuperElem { ring: self.ring.clone(), terms, den: self.den.clone() };
        e.normalize();
        e
    }

    /// Same as [`body`](Self::body), re-typed into the purely even subring.
    pub fn substitute_odd_zero(&self) -> SuperElem {
        let b = self.body();
        SuperElem { ring: self.ring.even_subring(), terms: b.terms, den: b.den }
    }

    /// Keeps only the monomials of the requested parity.
    pub fn parity_part(&self, p: Parity) -> SuperElem {
        let terms =
            self.terms.iter().filter(|(m, _)| m.parity() == p).map(|(m, c)| (m.clone(), c.clone())).collect();
        let mut e = SuperElem { ring: self.ring.clone(), terms, den: self.den.clone() };
        e.normalize();
        e
    }

    /// `σ` acting by the parity sign: negates the odd monomials.
    pub fn parity_sign(&self) -> SuperElem {
        SuperElem {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.parity().is_odd() { c.neg() } else { c.clone() }))
                .collect(),
            den: self.den.clone(),
        }
    }

    /// `σ^{p}`: identity for even `p`, [`parity_sign`](Self::parity_sign) for odd.
    pub fn parity_sign_pow(&self, p: Parity) -> SuperElem {
        if p.is_odd() {
            self.parity_sign()
        } else {
            self.clone()
        }
    }

    /// Inverse of an even body element, recognizing units of the
    /// localization as body-field scalars times monomials in the declared
    /// denominators.
    fn invert_body(&self) -> Result<SuperElem> {
        let ring = &self.ring;
        let mut rest = self.terms.clone();
        let mut stripped = vec![0u32; ring.num_dens()];
        'outer: loop {
            if rest.len() == 1 && rest.keys().next().unwrap().is_one() {
                break;
            }
            for (i, d) in ring.denominators().iter().enumerate() {
                if let Some(q) = terms_div_exact(&rest, &d.terms) {
                    rest = q;
                    stripped[i] += 1;
                    continue 'outer;
                }
            }
            return Err(Error::BodyNotInvertible);
        }
        let c = rest.values().next().unwrap().inv().ok_or(Error::BodyNotInvertible)?;
        let numer = terms_scale(&self.denominator_power_terms(&self.den), &c);
        Ok(SuperElem::from_parts(ring, numer, stripped))
    }

    /// Inverse of an even element with invertible body: body inverse times a
    /// finite geometric series in the nilpotent soul.
    pub fn invert(&self) -> Result<SuperElem> {
        if !self.is_even() {
            return Err(Error::NotEven);
        }
        if self.is_zero() {
            return Err(Error::BodyNotInvertible);
        }
        let body = self.body();
        if body.is_zero() {
            return Err(Error::BodyNotInvertible);
        }
        let body_inv = body.invert_body()?;
        let soul = self.add_unchecked(&body, true);
        if soul.is_zero() {
            return Ok(body_inv);
        }
        let step = body_inv.mul_unchecked(&soul).neg();
        let mut acc = body_inv.clone();
        let mut power = body_inv;
        for _ in 0..=self.ring.num_odd_slots() {
            power = step.mul_unchecked(&power);
            if power.is_zero() {
                return Ok(acc);
            }
            acc = acc.add_unchecked(&power, false);
        }
        unreachable!("soul of an element is nilpotent")
    }

    /// Ring morphism into `target`: body variables are matched by name and
    /// every odd/even generator goes to `image(atom)`. Denominators map to
    /// the inverses of their images.
    pub fn substitute(
        &self,
        target: &Arc<SuperRingSpec>,
        image: &dyn Fn(Atom) -> Result<SuperElem>,
    ) -> Result<SuperElem> {
        let body_map = body_var_map(&self.ring, target)?;
        let mut gen_cache: BTreeMap<Atom, SuperElem> = BTreeMap::new();
        let mut get = |a: Atom| -> Result<SuperElem> {
            if let Some(e) = gen_cache.get(&a) {
                return Ok(e.clone());
            }
            let e = image(a)?;
            if !SuperRingSpec::same(e.ring(), target) {
                return Err(Error::RingMismatch);
            }
            gen_cache.insert(a, e.clone());
            Ok(e)
        };
        let mut acc = SuperElem::zero(target);
        for (m, c) in &self.terms {
            let mut t = SuperElem::scalar(target, remap_ratfunc(c, &body_map, target.num_body()));
            for slot in m.odd_slots() {
                t = t.mul_unchecked(&get(Atom::Odd(slot))?);
            }
            for &(g, e) in &m.even {
                t = t.mul_unchecked(&get(Atom::Even(g as usize))?.pow(e));
            }
            acc = acc.add_unchecked(&t, false);
        }
        for (i, &k) in self.den.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let d = SuperElem::denominator(&self.ring, i).substitute(target, image)?;
            acc = acc.mul_unchecked(&d.invert()?.pow(k));
        }
        Ok(acc)
    }

    /// Re-expresses the element in another ring by matching every name.
    /// Fails with `UnknownName` when some generator or denominator in use is
    /// not declared in `target`.
    pub fn embed(&self, target: &Arc<SuperRingSpec>) -> Result<SuperElem> {
        if SuperRingSpec::same(&self.ring, target) {
            return Ok(SuperElem { ring: target.clone(), ..self.clone() });
        }
        let body_map = body_var_map_used(self, target)?;
        let src = &self.ring;
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            let mut slots: Vec<usize> = Vec::new();
            for s in m.odd_slots() {
                let name = src.atom_name(Atom::Odd(s));
                match target.atom(name) {
                    Some(Atom::Odd(t)) => slots.push(t),
                    _ => return Err(Error::UnknownName(name.to_string())),
                }
            }
            let mut inversions = 0;
            for i in 0..slots.len() {
                for j in i + 1..slots.len() {
                    if slots[i] > slots[j] {
                        inversions += 1;
                    }
                }
            }
            let mut even: Vec<(u16, u32)> = Vec::new();
            for &(g, e) in &m.even {
                let name = src.atom_name(Atom::Even(g as usize));
                match target.atom(name) {
                    Some(Atom::Even(t)) => even.push((t as u16, e)),
                    _ => return Err(Error::UnknownName(name.to_string())),
                }
            }
            even.sort_unstable();
            let odd = slots.iter().fold(0u128, |acc, &s| acc | 1u128 << s);
            let c = remap_ratfunc(c, &body_map, target.num_body());
            terms_add_term(
                &mut terms,
                Mono { odd, even: even.into_iter().collect() },
                if inversions % 2 == 1 { c.neg() } else { c },
            );
        }
        let mut den = vec![0; target.num_dens()];
        for (i, &k) in self.den.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let name = &src.denominators()[i].name;
            let j = target.denominator_index(name).ok_or_else(|| Error::UnknownName(name.clone()))?;
            den[j] = k;
        }
        Ok(SuperElem::from_parts(target, terms, den))
    }

    /// Largest t-degree occurring in body coefficients for body variable `var`.
    pub fn max_body_degree(&self, var: usize) -> u32 {
        self.terms.values().map(|c| c.numer().degree_in(var)).max().unwrap_or(0)
    }

    /// Drops every term whose body coefficient (a polynomial) has degree
    /// ≥ `order` in `var`. Coefficients must be polynomials.
    pub fn truncate(&self, var: usize, order: u32) -> Result<SuperElem> {
        let nb = self.ring.num_body();
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            if !c.is_polynomial() {
                return Err(Error::NonPolynomial("truncation needs polynomial coefficients".into()));
            }
            let p = Poly::from_terms(
                nb,
                c.numer().terms().filter(|(e, _)| e[var] < order).map(|(e, q)| (e.clone(), q.clone())),
            );
            terms_add_term(&mut terms, m.clone(), RatFunc::from_poly(p));
        }
        Ok(SuperElem::from_parts(&self.ring, terms, self.den.clone()))
    }

    /// The t-adic order of `self` in body variable `var`: minimum over
    /// monomials of the valuation of each coefficient. `None` when some
    /// coefficient has a pole at the origin. Zero returns `u32::MAX`.
    pub fn body_order(&self, var: usize) -> Option<u32> {
        if self.has_denominator() {
            return None;
        }
        let mut best = u32::MAX;
        for c in self.terms.values() {
            best = best.min(c.order_at_zero(var)?);
        }
        Some(best)
    }

    /// Names of every atom and denominator the element actually uses.
    pub fn support_names(&self) -> Vec<String> {
        let ring = &self.ring;
        let mut names = std::collections::BTreeSet::new();
        for (m, c) in &self.terms {
            for s in m.odd_slots() {
                names.insert(ring.atom_name(Atom::Odd(s)).to_string());
            }
            for &(g, _) in &m.even {
                names.insert(ring.atom_name(Atom::Even(g as usize)).to_string());
            }
            for p in [c.numer(), c.denom()] {
                for (e, _) in p.terms() {
                    for (i, &k) in e.iter().enumerate() {
                        if k > 0 {
                            names.insert(ring.body_vars()[i].clone());
                        }
                    }
                }
            }
        }
        for (i, &k) in self.den.iter().enumerate() {
            if k > 0 {
                names.insert(ring.denominators()[i].name.clone());
            }
        }
        names.into_iter().collect()
    }
}

fn body_var_map(src: &SuperRingSpec, target: &SuperRingSpec) -> Result<Vec<usize>> {
    src.body_vars()
        .iter()
        .map(|v| match target.atom(v) {
            Some(Atom::Body(j)) => Ok(j),
            _ => Err(Error::UnknownName(v.clone())),
        })
        .collect()
}

/// Like `body_var_map`, but unused source variables map to `usize::MAX`
/// instead of failing.
fn body_var_map_used(e: &SuperElem, target: &SuperRingSpec) -> Result<Vec<usize>> {
    let src = &e.ring;
    let mut used = vec![false; src.num_body()];
    for c in e.terms.values() {
        for p in [c.numer(), c.denom()] {
            for (ex, _) in p.terms() {
                for (i, &k) in ex.iter().enumerate() {
                    used[i] |= k > 0;
                }
            }
        }
    }
    src.body_vars()
        .iter()
        .enumerate()
        .map(|(i, v)| match target.atom(v) {
            Some(Atom::Body(j)) => Ok(j),
            _ if !used[i] => Ok(usize::MAX),
            _ => Err(Error::UnknownName(v.clone())),
        })
        .collect()
}

fn remap_poly(p: &Poly, map: &[usize], nvars: usize) -> Poly {
    Poly::from_terms(
        nvars,
        p.terms().map(|(e, c)| {
            let mut e2 = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i]] = k;
                }
            }
            (e2, c.clone())
        }),
    )
}

pub(crate) fn remap_ratfunc(c: &RatFunc, map: &[usize], nvars: usize) -> RatFunc {
    if map.len() == nvars && map.iter().enumerate().all(|(i, &j)| i == j) {
        return c.clone();
    }
    RatFunc::new(remap_poly(c.numer(), map, nvars), remap_poly(c.denom(), map, nvars))
}

impl PartialEq for SuperElem {
    fn eq(&self, other: &Self) -> bool {
        if !SuperRingSpec::same(&self.ring, &other.ring) {
            return false;
        }
        if self.den == other.den {
            return self.terms == other.terms;
        }
        let target: Vec<u32> = self.den.iter().zip(&other.den).map(|(a, b)| *a.max(b)).collect();
        self.numerator_at(&target) == other.numerator_at(&target)
    }
}

impl Eq for SuperElem {}

impl fmt::Debug for SuperElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl std::ops::$tr<&SuperElem> for &SuperElem {
            type Output = SuperElem;
            fn $method(self, rhs: &SuperElem) -> SuperElem {
                assert!(SuperRingSpec::same(&self.ring, &rhs.ring), "ring mismatch");
                $body(self, rhs)
            }
        }
        impl std::ops::$tr<SuperElem> for SuperElem {
            type Output = SuperElem;
            fn $method(self, rhs: SuperElem) -> SuperElem {
                std::ops::$tr::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &SuperElem, b: &SuperElem| a.add_unchecked(b, false));
forward_binop!(Sub, sub, |a: &SuperElem, b: &SuperElem| a.add_unchecked(b, true));
forward_binop!(Mul, mul, |a: &SuperElem, b: &SuperElem| a.mul_unchecked(b));

impl std::ops::Neg for &SuperElem {
    type Output = SuperElem;
    fn neg(self) -> SuperElem {
        SuperElem::neg(self)
    }
}

impl std::ops::Neg for SuperElem {
    type Output = SuperElem;
    fn neg(self) -> SuperElem {
        SuperElem::neg(&self)
    }
}

pub(crate) fn q_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// ℚ-coordinates of each element after clearing one common denominator:
/// keys are `(monomial, body exponent vector)`. A ℚ-combination of the
/// inputs vanishes iff the same combination of coordinate maps does.
pub fn rational_coordinates(elems: &[SuperElem]) -> Vec<BTreeMap<(Mono, Vec<u32>), BigRational>> {
    let Some(first) = elems.first() else { return Vec::new() };
    let nd = first.ring.num_dens();
    let nb = first.ring.num_body();
    let mut target = vec![0u32; nd];
    for e in elems {
        for (t, k) in target.iter_mut().zip(&e.den) {
            *t = (*t).max(*k);
        }
    }
    let numerators: Vec<Terms> = elems.iter().map(|e| e.numerator_at(&target)).collect();
    let mut lcm = Poly::one(nb);
    for c in numerators.iter().flat_map(|t| t.values()) {
        if !c.denom().is_one() {
            let g = super::poly::gcd(&lcm, c.denom());
            lcm = lcm.mul(&c.denom().div_exact(&g).expect("gcd divides"));
        }
    }
    numerators
        .iter()
        .map(|terms| {
            let mut out = BTreeMap::new();
            for (m, c) in terms {
                let scaled = c.numer().mul(&lcm.div_exact(c.denom()).expect("denominator divides lcm"));
                for (e, q) in scaled.terms() {
                    out.insert((m.clone(), e.clone()), q.clone());
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<SuperRingSpec> {
        SuperRingSpec::builder().body("t").odd("th1").odd("th2").odd("th3").build().unwrap()
    }

    fn p(r: &Arc<SuperRingSpec>, s: &str) -> SuperElem {
        SuperElem::parse(r, s).unwrap()
    }

    #[test]
    fn merge_sign_matches_transpositions() {
        assert_eq!(odd_merge_sign(0b001, 0b010), Some(false));
        assert_eq!(odd_merge_sign(0b010, 0b001), Some(true));
        assert_eq!(odd_merge_sign(0b110, 0b001), Some(false));
        assert_eq!(odd_merge_sign(0b100, 0b011), Some(false));
        assert_eq!(odd_merge_sign(0b010, 0b101), Some(true));
        assert_eq!(odd_merge_sign(0b011, 0b010), None);
    }

    #[test]
    fn products_and_squares() {
        let r = ring();
        assert_eq!(p(&r, "th2") * p(&r, "th1"), p(&r, "-th1*th2"));
        assert!((p(&r, "th1") * p(&r, "th1")).is_zero());
        assert!((p(&r, "1+th1*th2") * p(&r, "1-th1*th2")).is_one());
    }

    #[test]
    fn inverse_of_even_elements() {
        let r = ring();
        let a = p(&r, "t + th1*th2");
        let inv = a.invert().unwrap();
        assert_eq!(inv, p(&r, "1/t - th1*th2/t^2"));
        assert!((&a * &inv).is_one());
        assert_eq!(p(&r, "th1").invert(), Err(Error::NotEven));
        assert_eq!(p(&r, "th1*th2").invert(), Err(Error::BodyNotInvertible));
    }

    #[test]
    fn body_projection() {
        let r = ring();
        assert_eq!(p(&r, "t + th1*th2").body(), p(&r, "t"));
        assert!(p(&r, "th1").body().is_zero());
        let b = p(&r, "t + t*th1").substitute_odd_zero();
        assert_eq!(b.ring().num_odd_slots(), 0);
        assert_eq!(b.to_string(), "(t)");
    }

    #[test]
    fn denominators_reduce() {
        let r = SuperRingSpec::builder().body("t").odd("th1").poly("x", Parity::Even).build().unwrap();
        let r2 = r.with_denominators([("D".to_string(), p(&r, "x^2 + t"))]).unwrap();
        let x = p(&r2, "(x^2 + t)*th1 / D^2");
        assert_eq!(x.den(), &[1]);
        assert_eq!(x, p(&r2, "th1/D"));
        let inv = p(&r2, "3*D^2").invert().unwrap();
        assert_eq!(inv.den(), &[2]);
        let body_only = p(&r2, "(t^2 + 1)*th1 / (t^2 + 1)");
        assert_eq!(body_only, p(&r2, "th1"));
    }

    #[test]
    fn embedding_reorders_slots() {
        let r = ring();
        let r2 = SuperRingSpec::builder().body("t").odd("th3").odd("th2").odd("th1").build().unwrap();
        let e = p(&r, "th1*th2 + t*th3").embed(&r2).unwrap();
        assert_eq!(e, p(&r2, "th1*th2 + t*th3"));
        let small = SuperRingSpec::builder().body("t").odd("th1").build().unwrap();
        assert!(matches!(p(&r, "th2").embed(&small), Err(Error::UnknownName(_))));
    }
}
