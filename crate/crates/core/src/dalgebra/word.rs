use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::lie::LieSuperSpec;
use crate::supercore::Parity;

/// Generator indices of a monomial of U(g), read left to right.
pub type Seq = Vec<usize>;

/// Element of U(g) in PBW normal form: nondecreasing generator sequences
/// (declaration order) with no repeated odd generator.
#[derive(Clone, PartialEq, Eq)]
pub struct DWord {
    spec: Arc<LieSuperSpec>,
    terms: BTreeMap<Seq, BigRational>,
}

pub fn seq_parity(spec: &LieSuperSpec, seq: &[usize]) -> Parity {
    seq.iter().fold(Parity::Even, |p, &g| p + spec.parity(g))
}

pub fn is_normal(spec: &LieSuperSpec, seq: &[usize]) -> bool {
    seq.windows(2).all(|w| w[0] < w[1] || (w[0] == w[1] && !spec.parity(w[0]).is_odd()))
}

fn add_into(map: &mut BTreeMap<Seq, BigRational>, k: Seq, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Rewrites a generator sequence into PBW normal form using
/// `ab = (-1)^{|a||b|} ba + [a,b]` for `a > b` and `aa = ½[a,a]` for odd `a`.
pub fn normal_form(spec: &LieSuperSpec, seq: &[usize]) -> BTreeMap<Seq, BigRational> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut out = BTreeMap::new();
    let mut work: Vec<(Seq, BigRational)> = vec![(seq.to_vec(), BigRational::one())];
    while let Some((w, c)) = work.pop() {
        let p = w.windows(2).position(|x| x[0] > x[1] || (x[0] == x[1] && spec.parity(x[0]).is_odd()));
        let Some(p) = p else {
            add_into(&mut out, w, c);
            continue;
        };
        let (a, b) = (w[p], w[p + 1]);
        let splice = |z: Option<usize>| -> Seq {
            let mut v = w[..p].to_vec();
            v.extend(z);
            v.extend_from_slice(&w[p + 2..]);
            v
        };
        if a == b {
            for (z, q) in spec.bracket(a, a) {
                work.push((splice(Some(z)), &c * &q * &half));
            }
        } else {
            let mut swapped = w.clone();
            swapped.swap(p, p + 1);
            let sign = if spec.parity(a).koszul(spec.parity(b)) { -c.clone() } else { c.clone() };
            work.push((swapped, sign));
            for (z, q) in spec.bracket(a, b) {
                work.push((splice(Some(z)), &c * &q));
            }
        }
    }
    out
}

impl DWord {
    pub fn zero(spec: &Arc<LieSuperSpec>) -> Self {
        DWord { spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn one(spec: &Arc<LieSuperSpec>) -> Self {
        Self::from_seq(spec, &[])
    }

    pub fn gen(spec: &Arc<LieSuperSpec>, i: usize) -> Self {
        Self::from_seq(spec, &[i])
    }

    /// Normal form of an arbitrary product of generators.
    pub fn from_seq(spec: &Arc<LieSuperSpec>, seq: &[usize]) -> Self {
        DWord { spec: spec.clone(), terms: normal_form(spec, seq) }
    }

    /// Builds a word from monomials that are already normal.
    pub fn from_normal_terms(spec: &Arc<LieSuperSpec>, terms: impl IntoIterator<Item = (Seq, BigRational)>) -> Self {
        let mut w = DWord::zero(spec);
        for (s, c) in terms {
            assert!(is_normal(spec, &s), "monomial is not PBW-normal");
            add_into(&mut w.terms, s, c);
        }
        w
    }

    pub fn spec(&self) -> &Arc<LieSuperSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Seq, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|s| is_normal(&self.spec, s))
    }

    /// Re-normalizes every monomial; the identity on normal forms.
    pub fn normalize(&self) -> Self {
        let mut out = DWord::zero(&self.spec);
        for (s, c) in &self.terms {
            for (t, q) in normal_form(&self.spec, s) {
                add_into(&mut out.terms, t, c * q);
            }
        }
        out
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut ps = self.terms.keys().map(|s| seq_parity(&self.spec, s));
        let first = ps.next().unwrap_or(Parity::Even);
        ps.all(|p| p == first).then_some(first)
    }

    /// Counit: the coefficient of the empty word.
    pub fn counit(&self) -> BigRational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &DWord) -> DWord {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            add_into(&mut out.terms, s.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> DWord {
        let mut out = DWord::zero(&self.spec);
        for (s, c) in &self.terms {
            add_into(&mut out.terms, s.clone(), c * q);
        }
        out
    }

    pub fn mul(&self, other: &DWord) -> DWord {
        let mut out = DWord::zero(&self.spec);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut s = a.clone();
                s.extend_from_slice(b);
                for (t, q) in normal_form(&self.spec, &s) {
                    add_into(&mut out.terms, t, x * y * q);
                }
            }
        }
        out
    }

    pub fn format_seq(spec: &LieSuperSpec, seq: &[usize]) -> String {
        if seq.is_empty() {
            "1".into()
        } else {
            seq.iter().map(|&g| spec.name(g)).collect::<Vec<_>>().join("*")
        }
    }
}

/// All PBW-normal monomials of length ≤ `max_len`, by length then
/// lexicographically.
pub fn normal_monomials(spec: &LieSuperSpec, max_len: usize) -> Vec<Seq> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Seq> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            let start = w.last().copied().unwrap_or(0);
            for g in start..spec.len() {
                if w.last() == Some(&g) && spec.parity(g).is_odd() {
                    continue;
                }
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl fmt::Display for DWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (s, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            f.write_str(&DWord::format_seq(&self.spec, s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
