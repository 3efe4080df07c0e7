//! Sparse multivariate polynomials over ℚ and the rational functions built
//! from them. These realize the body field ℚ(t₁..t_k).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector, one entry per body variable. `Vec` ordering is lex with
/// variable 0 most significant, so the last key of a term map is the lex
/// leading monomial.
pub type Exps = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exps, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Smallest exponent of `var` over all terms (the t-adic valuation for
    /// a univariate polynomial). Zero polynomial returns `u32::MAX`.
    pub fn order_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(u32::MAX)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn eval_zero(&self) -> BigRational {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.nvars);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    fn mul_term(&self, e: &[u32], c: &BigRational) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e1, c1)| (e1.iter().zip(e).map(|(a, b)| a + b).collect(), c1 * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Exact quotient by `d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (de, dc) = d.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exps = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let qc = rc / &dc;
            rem = rem.sub(&d.mul_term(&qe, &qc));
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Scales by the inverse of the lex leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Rescales to coprime integer coefficients with positive leading term.
    fn integer_primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut k = BigRational::new(den_lcm, num_gcd);
        if self.leading_coeff().is_negative() {
            k = -k;
        }
        self.scale(&k)
    }

    fn highest_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&x| x > 0))
            .max()
    }

    /// Coefficients with respect to `var`, indexed by degree.
    fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var] as usize;
            e2[var] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    fn content_in(&self, var: usize) -> Poly {
        let mut g = Poly::zero(self.nvars);
        for c in self.coeffs_in(var) {
            if !c.is_zero() {
                g = gcd(&g, &c);
                if g.is_constant() {
                    return Poly::one(self.nvars);
                }
            }
        }
        g
    }

    fn lc_in(&self, var: usize) -> Poly {
        let deg = self.degree_in(var) as usize;
        self.coeffs_in(var).swap_remove(deg)
    }

    fn prem(&self, b: &Poly, var: usize) -> Poly {
        let db = b.degree_in(var);
        let lb = b.lc_in(var);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= db {
            let dr = r.degree_in(var);
            let lr = r.lc_in(var);
            let mut shift = vec![0; self.nvars];
            shift[var] = dr - db;
            r = r.mul(&lb).sub(&lr.mul(&b.mul_term(&shift, &BigRational::one())));
        }
        r
    }

    fn primitive_in(&self, var: usize) -> Poly {
        let c = self.content_in(var);
        let p = if c.is_constant() { self.clone() } else { self.div_exact(&c).expect("content divides") };
        p.integer_primitive()
    }
}

/// Greatest common divisor, normalized to be monic (lex leading coefficient
/// one). `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    let va = a.highest_var();
    let vb = b.highest_var();
    let v = va.max(vb).unwrap();
    if va != Some(v) {
        return gcd(a, &b.content_in(v));
    }
    if vb != Some(v) {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let gc = gcd(&ca, &cb);
    let mut p = a.primitive_in(v);
    let mut q = b.primitive_in(v);
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let gp = loop {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(v) == 0 {
            break Poly::one(a.nvars);
        }
        p = q;
        q = r.primitive_in(v);
    };
    gc.mul(&gp).monic()
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.terms)
    }
}

/// An element of ℚ(t₁..t_k): coprime numerator and monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        RatFunc { num: Poly::zero(nvars), den: Poly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        RatFunc { num: Poly::one(nvars), den: Poly::one(nvars) }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        RatFunc { num: Poly::constant(nvars, c), den: Poly::one(nvars) }
    }

    pub fn from_poly(num: Poly) -> Self {
        let n = num.nvars;
        RatFunc { num, den: Poly::one(n) }
    }

    /// Builds `num/den` and reduces it. Panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator in rational function");
        if num.is_zero() {
            return Self::zero(num.nvars);
        }
        if den.is_constant() {
            let c = den.leading_coeff();
            return RatFunc { num: num.scale(&c.recip()), den: Poly::one(num.nvars) };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.leading_coeff().recip();
        RatFunc { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFunc::from_poly(self.num.add(&o.num));
            }
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let sd = self.den.div_exact(&g).unwrap();
        let od = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&od).add(&o.num.mul(&sd));
        RatFunc::new(num, sd.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.nvars());
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&o.num));
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let den = d1.mul(&d2);
        let lc = den.leading_coeff().recip();
        RatFunc { num: n1.mul(&n2).scale(&lc), den: den.scale(&lc) }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RatFunc { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn derivative(&self, var: usize) -> Self {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative(var));
        }
        let n = self
            .num
            .derivative(var)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(var)));
        RatFunc::new(n, self.den.mul(&self.den))
    }

    /// t-adic valuation in `var` for a function regular at the origin
    /// (`None` if the denominator vanishes at zero). Zero returns `u32::MAX`.
    pub fn order_at_zero(&self, var: usize) -> Option<u32> {
        if self.den.eval_zero().is_zero() {
            return None;
        }
        Some(self.num.order_in(var))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}
