//! Block-graded square matrices over a supercommutative ring.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::supercore::{Parity, SuperElem, SuperRingSpec};

/// Block format `m|n`: `m` even basis vectors followed by `n` odd ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Format {
    pub m: usize,
    pub n: usize,
}

impl Format {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m + n == 0 {
            return Err(Error::FormatMismatch("format 0|0 is empty".into()));
        }
        Ok(Format { m, n })
    }

    pub fn size(self) -> usize {
        self.m + self.n
    }

    /// Parity of the `i`-th basis vector.
    pub fn parity(self, i: usize) -> Parity {
        Parity::from_bit(i >= self.m)
    }

    /// Parity an entry `(i, j)` must have in an even matrix.
    pub fn entry_parity(self, i: usize, j: usize) -> Parity {
        self.parity(i) + self.parity(j)
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.m, self.n)
    }
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once('|').ok_or_else(|| Error::FormatMismatch(format!("`{s}` is not m|n")))?;
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| Error::FormatMismatch(format!("`{s}` is not m|n")));
        Format::new(parse(a)?, parse(b)?)
    }
}

impl Serialize for Format {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Format {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, PartialEq, Eq)]
pub struct SuperMatrix {
    ring: Arc<SuperRingSpec>,
    format: Format,
    entries: Vec<SuperElem>,
}

impl SuperMatrix {
    pub fn zero(ring: &Arc<SuperRingSpec>, format: Format) -> Self {
        let k = format.size();
        SuperMatrix { ring: ring.clone(), format, entries: vec![SuperElem::zero(ring); k * k] }
    }

    pub fn identity(ring: &Arc<SuperRingSpec>, format: Format) -> Self {
        let mut x = Self::zero(ring, format);
        for i in 0..format.size() {
            x.set(i, i, SuperElem::one(ring));
        }
        x
    }

    pub fn from_fn(ring: &Arc<SuperRingSpec>, format: Format, mut f: impl FnMut(usize, usize) -> SuperElem) -> Self {
        let k = format.size();
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let e = f(i, j);
                assert!(SuperRingSpec::same(e.ring(), ring), "ring mismatch");
                entries.push(e);
            }
        }
        SuperMatrix { ring: ring.clone(), format, entries }
    }

    pub fn from_rows(ring: &Arc<SuperRingSpec>, format: Format, rows: Vec<Vec<SuperElem>>) -> Result<Self> {
        let k = format.size();
        if rows.len() != k || rows.iter().any(|r| r.len() != k) {
            return Err(Error::FormatMismatch(format!("expected a {k}x{k} grid for format {format}")));
        }
        let entries: Vec<SuperElem> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| !SuperRingSpec::same(e.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(SuperMatrix { ring: ring.clone(), format, entries })
    }

    /// Parses a row-major grid of expressions.
    pub fn parse<S: AsRef<str>>(ring: &Arc<SuperRingSpec>, format: Format, rows: &[Vec<S>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| SuperElem::parse(ring, s.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ring, format, rows)
    }

    pub fn ring(&self) -> &Arc<SuperRingSpec> {
        &self.ring
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn size(&self) -> usize {
        self.format.size()
    }

    pub fn get(&self, i: usize, j: usize) -> &SuperElem {
        &self.entries[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: SuperElem) {
        assert!(SuperRingSpec::same(e.ring(), &self.ring), "ring mismatch");
        let k = self.size();
        self.entries[i * k + j] = e;
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &SuperElem)> {
        let k = self.size();
        self.entries.iter().enumerate().map(move |(p, e)| ((p / k, p % k), e))
    }

    pub fn rows(&self) -> Vec<Vec<SuperElem>> {
        self.entries.chunks(self.size()).map(|c| c.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SuperElem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.entries().all(|((i, j), e)| if i == j { e.is_one() } else { e.is_zero() })
    }

    pub fn map(&self, f: impl FnMut(&SuperElem) -> SuperElem) -> Self {
        SuperMatrix { ring: self.ring.clone(), format: self.format, entries: self.entries.iter().map(f).collect() }
    }

    pub fn map_indexed(&self, mut f: impl FnMut(usize, usize, &SuperElem) -> SuperElem) -> Self {
        let k = self.format.size();
        let entries = self.entries.iter().enumerate().map(|(n, e)| f(n / k, n % k, e)).collect();
        SuperMatrix { ring: self.ring.clone(), format: self.format, entries }
    }

    pub fn try_map(&self, f: impl FnMut(&SuperElem) -> Result<SuperElem>) -> Result<Self> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        let ring = entries.first().map(|e| e.ring().clone()).unwrap_or_else(|| self.ring.clone());
        Ok(SuperMatrix { ring, format: self.format, entries })
    }

    /// Entrywise re-expression in another ring.
    pub fn embed(&self, target: &Arc<SuperRingSpec>) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix { ring: target.clone(), format: self.format, entries })
    }

    pub fn classify(&self) -> Class {
        let f = self.format;
        let fits = |shift: Parity| self.entries().all(|((i, j), e)| e.has_parity(f.entry_parity(i, j) + shift));
        if fits(Parity::Even) {
            Class::Even
        } else if fits(Parity::Odd) {
            Class::Odd
        } else {
            Class::Mixed
        }
    }

    pub fn has_class(&self, p: Parity) -> bool {
        let f = self.format;
        self.entries().all(|((i, j), e)| e.has_parity(f.entry_parity(i, j) + p))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.format != other.format {
            return Err(Error::FormatMismatch(format!("{} vs {}", self.format, other.format)));
        }
        if !SuperRingSpec::same(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let k = self.size();
        Ok(SuperMatrix::from_fn(&self.ring, self.format, |i, j| {
            let mut acc = SuperElem::zero(&self.ring);
            for l in 0..k {
                let (a, b) = (self.get(i, l), other.get(l, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    fn zip(&self, other: &Self, f: impl Fn(&SuperElem, &SuperElem) -> SuperElem) -> Self {
        SuperMatrix {
            ring: self.ring.clone(),
            format: self.format,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }

    /// `a·X`, multiplying every entry on the left.
    pub fn scale_left(&self, a: &SuperElem) -> Self {
        self.map(|e| a * e)
    }

    /// `X·v` for a column vector.
    pub fn mul_vec(&self, v: &[SuperElem]) -> Vec<SuperElem> {
        let k = self.size();
        assert_eq!(v.len(), k);
        (0..k)
            .map(|i| {
                (0..k).fold(SuperElem::zero(&self.ring), |acc, j| {
                    let a = self.get(i, j);
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        &acc + &(a * &v[j])
                    }
                })
            })
            .collect()
    }

    /// The grading automorphism applied entrywise: odd parts change sign.
    pub fn sigma(&self) -> Self {
        self.map(SuperElem::parity_sign)
    }

    /// `σ^{p}`: identity for even `p`, [`sigma`](Self::sigma) for odd.
    pub fn sigma_pow(&self, p: Parity) -> Self {
        if p.is_odd() {
            self.sigma()
        } else {
            self.clone()
        }
    }

    pub fn body(&self) -> Self {
        self.map(SuperElem::body)
    }

    fn block(&self, odd: bool) -> Vec<Vec<SuperElem>> {
        let range = if odd { self.format.m..self.size() } else { 0..self.format.m };
        range.clone().map(|i| range.clone().map(|j| self.get(i, j).clone()).collect()).collect()
    }

    /// Product of the determinants of the two diagonal blocks.
    pub fn det0(&self) -> Result<SuperElem> {
        if self.classify() != Class::Even {
            return Err(Error::NotEvenMatrix);
        }
        let a = determinant(&self.ring, &self.block(false));
        let d = determinant(&self.ring, &self.block(true));
        Ok(&a * &d)
    }

    pub fn is_gl(&self) -> bool {
        match self.det0() {
            Ok(d) => d.body().invert().is_ok(),
            Err(_) => false,
        }
    }

    /// Exact inverse of an even matrix whose `det0` has invertible body.
    pub fn invert_even(&self) -> Result<Self> {
        if self.classify() != Class::Even {
            return Err(Error::NotEvenMatrix);
        }
        let ring = &self.ring;
        let m = self.format.m;
        let mut b_inv = SuperMatrix::zero(ring, self.format);
        for odd in [false, true] {
            let blk: Vec<Vec<SuperElem>> =
                self.block(odd).iter().map(|r| r.iter().map(SuperElem::body).collect()).collect();
            if blk.is_empty() {
                continue;
            }
            let inv = adjugate_inverse(ring, &blk)?;
            let off = if odd { m } else { 0 };
            for (i, row) in inv.into_iter().enumerate() {
                for (j, e) in row.into_iter().enumerate() {
                    b_inv.set(off + i, off + j, e);
                }
            }
        }
        let soul = self.zip(&self.body(), |a, b| a - b);
        let step = b_inv.try_mul(&soul)?.neg();
        let mut acc = b_inv.clone();
        let mut power = b_inv;
        for _ in 0..=ring.num_odd_slots() {
            power = step.try_mul(&power)?;
            if power.is_zero() {
                return Ok(acc);
            }
            acc = acc.try_add(&power)?;
        }
        unreachable!("soul part of an even matrix is nilpotent")
    }

    /// Row-major grid of printed entries, tagged with the format.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format": self.format.to_string(),
            "rows": self.rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Division-free determinant of a square matrix with pairwise commuting
/// (even) entries, by dynamic programming over column subsets.
pub fn determinant(ring: &Arc<SuperRingSpec>, a: &[Vec<SuperElem>]) -> SuperElem {
    let k = a.len();
    if k == 0 {
        return SuperElem::one(ring);
    }
    assert!(k < 20, "block too large for subset expansion");
    let mut dp: Vec<Option<SuperElem>> = vec![None; 1 << k];
    dp[0] = Some(SuperElem::one(ring));
    for mask in 0usize..(1 << k) {
        let Some(cur) = dp[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == k {
            return cur;
        }
        for (c, entry) in a[row].iter().enumerate() {
            if mask >> c & 1 == 1 || entry.is_zero() {
                continue;
            }
            let higher = (mask >> (c + 1)).count_ones();
            let mut t = &cur * entry;
            if higher % 2 == 1 {
                t = t.neg();
            }
            let slot = &mut dp[mask | 1 << c];
            *slot = Some(match slot.take() {
                Some(s) => &s + &t,
                None => t,
            });
        }
    }
    SuperElem::zero(ring)
}

fn minor(a: &[Vec<SuperElem>], skip_r: usize, skip_c: usize) -> Vec<Vec<SuperElem>> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_r)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != skip_c).map(|(_, e)| e.clone()).collect())
        .collect()
}

fn adjugate_inverse(ring: &Arc<SuperRingSpec>, a: &[Vec<SuperElem>]) -> Result<Vec<Vec<SuperElem>>> {
    let k = a.len();
    let det_inv = determinant(ring, a).invert().map_err(|_| Error::SingularBody)?;
    if k == 1 {
        return Ok(vec![vec![det_inv]]);
    }
    Ok((0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let c = &determinant(ring, &minor(a, j, i)) * &det_inv;
                    if (i + j) % 2 == 1 {
                        c.neg()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect())
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperMatrix[{}]", self.format)?;
        f.debug_list().entries(self.rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>())).finish()
    }
}

impl fmt::Display for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl std::ops::Mul for &SuperMatrix {
    type Output = SuperMatrix;
    fn mul(self, rhs: &SuperMatrix) -> SuperMatrix {
        self.try_mul(rhs).expect("incompatible matrices")
    }
}

impl std::ops::Add for &SuperMatrix {
    type Output = SuperMatrix;
    fn add(self, rhs: &SuperMatrix) -> SuperMatrix {
        self.try_add(rhs).expect("incompatible matrices")
    }
}

impl std::ops::Sub for &SuperMatrix {
    type Output = SuperMatrix;
    fn sub(self, rhs: &SuperMatrix) -> SuperMatrix {
        self.try_sub(rhs).expect("incompatible matrices")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<SuperRingSpec> {
        SuperRingSpec::builder().body("t").odd("th").odd("th2").build().unwrap()
    }

    fn mat(r: &Arc<SuperRingSpec>, rows: &[&[&str]]) -> SuperMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        SuperMatrix::parse(r, Format { m: 1, n: 1 }, &rows).unwrap()
    }

    #[test]
    fn format_round_trip() {
        let f: Format = "2|1".parse().unwrap();
        assert_eq!(f, Format { m: 2, n: 1 });
        assert_eq!(f.to_string(), "2|1");
        assert!("0|0".parse::<Format>().is_err());
        assert!("2,1".parse::<Format>().is_err());
    }

    #[test]
    fn classification() {
        let r = ring();
        assert_eq!(mat(&r, &[&["t", "0"], &["0", "1"]]).classify(), Class::Even);
        assert_eq!(mat(&r, &[&["th", "0"], &["0", "th"]]).classify(), Class::Odd);
        assert_eq!(mat(&r, &[&["t", "t"], &["0", "1"]]).classify(), Class::Mixed);
    }

    #[test]
    fn det0_examples() {
        let r = ring();
        assert_eq!(mat(&r, &[&["t", "th"], &["th", "1"]]).det0().unwrap(), SuperElem::parse(&r, "t").unwrap());
        assert!(SuperMatrix::identity(&r, Format { m: 4, n: 4 }).det0().unwrap().is_one());
        let f = Format { m: 3, n: 0 };
        let x = SuperMatrix::parse(&r, f, &[vec!["1", "2", "3"], vec!["4", "5", "6"], vec!["7", "8", "10"]]).unwrap();
        assert_eq!(x.det0().unwrap(), SuperElem::int(&r, -3));
        assert_eq!(mat(&r, &[&["th", "0"], &["0", "th"]]).det0(), Err(Error::NotEvenMatrix));
    }

    #[test]
    fn inversion_examples() {
        let r = ring();
        let x = mat(&r, &[&["1", "th"], &["th", "1"]]);
        assert_eq!(x.invert_even().unwrap(), mat(&r, &[&["1", "-th"], &["-th", "1"]]));
        let y = mat(&r, &[&["t + th*th2", "th2"], &["t*th", "t^2 - 1"]]);
        let yi = y.invert_even().unwrap();
        assert!((&y * &yi).is_identity());
        assert!((&yi * &y).is_identity());
        let z = mat(&r, &[&["th*th2", "0"], &["0", "1"]]);
        assert_eq!(z.invert_even(), Err(Error::SingularBody));
        assert!(!z.is_gl());
        assert!(y.is_gl());
    }
}
