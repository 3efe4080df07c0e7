use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::report::Report;
use crate::supercore::Parity;

/// Sparse ℚ-combination of Lie generators.
pub type LieComb = BTreeMap<usize, BigRational>;

/// A Lie superalgebra presented by generators and a bracket table.
/// Pairs missing from the table bracket to zero.
#[derive(Clone, PartialEq, Eq)]
pub struct LieSuperSpec {
    gens: Vec<(String, Parity)>,
    table: BTreeMap<(usize, usize), LieComb>,
}

impl LieSuperSpec {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, Parity)>) -> Result<Self> {
        let gens: Vec<(String, Parity)> = gens.into_iter().map(|(n, p)| (n.into(), p)).collect();
        for (i, (n, _)) in gens.iter().enumerate() {
            if gens[..i].iter().any(|(m, _)| m == n) {
                return Err(Error::InvalidSpec(format!("Lie generator `{n}` declared twice")));
            }
        }
        Ok(LieSuperSpec { gens, table: BTreeMap::new() })
    }

    /// Declares `[x, y] = Σ c·z`. The table is taken as given; consistency
    /// is verified by [`check_lie_spec`].
    pub fn with_bracket(mut self, x: &str, y: &str, value: &[(&str, BigRational)]) -> Result<Self> {
        let i = self.index(x)?;
        let j = self.index(y)?;
        let mut comb = LieComb::new();
        for (z, c) in value {
            let k = self.index(z)?;
            let e = comb.entry(k).or_insert_with(BigRational::zero);
            *e += c;
        }
        comb.retain(|_, c| !c.is_zero());
        self.table.insert((i, j), comb);
        Ok(self)
    }

    /// One even generator `d` with `[d, d] = 0`.
    pub fn even_line(name: &str) -> Arc<Self> {
        Arc::new(LieSuperSpec::new([(name, Parity::Even)]).expect("valid"))
    }

    /// Even `d`, odd `delta` with `[delta, delta] = 2d` and `[d, delta] = 0`.
    pub fn delta_model() -> Arc<Self> {
        let two = BigRational::from_integer(BigInt::from(2));
        Arc::new(
            LieSuperSpec::new([("d", Parity::Even), ("delta", Parity::Odd)])
                .and_then(|s| s.with_bracket("delta", "delta", &[("d", two)]))
                .expect("valid"),
        )
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[(String, Parity)] {
        &self.gens
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].0
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.gens[i].1
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.gens.iter().position(|(n, _)| n == name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn table(&self) -> &BTreeMap<(usize, usize), LieComb> {
        &self.table
    }

    /// `[x_i, x_j]`, using super-antisymmetry for pairs stored in reverse.
    pub fn bracket(&self, i: usize, j: usize) -> LieComb {
        if let Some(c) = self.table.get(&(i, j)) {
            return c.clone();
        }
        if let Some(c) = self.table.get(&(j, i)) {
            let flip = !self.parity(i).koszul(self.parity(j));
            return c.iter().map(|(k, q)| (*k, if flip { -q.clone() } else { q.clone() })).collect();
        }
        LieComb::new()
    }

    /// Bilinear extension of the bracket.
    pub fn bracket_comb(&self, a: &LieComb, b: &LieComb) -> LieComb {
        let mut out = LieComb::new();
        for (i, x) in a {
            for (j, y) in b {
                for (k, z) in self.bracket(*i, *j) {
                    *out.entry(k).or_insert_with(BigRational::zero) += x * y * z;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Sub-spec on the even generators, with the map from new to old
    /// indices. Brackets of even generators stay even.
    pub fn even_part(&self) -> (LieSuperSpec, Vec<usize>) {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !self.parity(i).is_odd()).collect();
        let pos = |old: usize| keep.iter().position(|&k| k == old);
        let gens = keep.iter().map(|&i| self.gens[i].clone()).collect();
        let table = self
            .table
            .iter()
            .filter_map(|(&(i, j), c)| {
                let (a, b) = (pos(i)?, pos(j)?);
                Some(((a, b), c.iter().filter_map(|(k, q)| Some((pos(*k)?, q.clone()))).collect()))
            })
            .collect();
        (LieSuperSpec { gens, table }, keep)
    }

    pub fn format_comb(&self, c: &LieComb) -> String {
        if c.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (k, q)) in c.iter().enumerate() {
            if n > 0 {
                s.push_str(if q.is_negative() { " - " } else { " + " });
            } else if q.is_negative() {
                s.push('-');
            }
            let a = q.abs();
            if a != BigRational::from_integer(1.into()) {
                s.push_str(&format!("{a}*"));
            }
            s.push_str(self.name(*k));
        }
        s
    }
}

impl fmt::Debug for LieSuperSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|(n, p)| format!("{n}:{p}")).collect();
        write!(f, "LieSuperSpec({})", gens.join(", "))?;
        for (&(i, j), c) in &self.table {
            write!(f, " [{},{}]={}", self.name(i), self.name(j), self.format_comb(c))?;
        }
        Ok(())
    }
}

/// Verifies bracket parity, super-antisymmetry and the super Jacobi
/// identity on every generator triple.
pub fn check_lie_spec(spec: &LieSuperSpec) -> Report {
    let mut rep = Report::new("lie_spec");
    let n = spec.len();
    for (&(i, j), c) in &spec.table {
        let want = spec.parity(i) + spec.parity(j);
        let bad = c.keys().find(|&&k| spec.parity(k) != want);
        rep.record(bad.is_none(), || {
            format!("[{},{}] contains {} of the wrong parity", spec.name(i), spec.name(j), spec.name(*bad.unwrap()))
        });
    }
    for i in 0..n {
        for j in i..n {
            let a = spec.bracket(i, j);
            let b = spec.bracket(j, i);
            let flip = !spec.parity(i).koszul(spec.parity(j));
            let ok = a.iter().all(|(k, q)| b.get(k).map(|r| if flip { -r.clone() } else { r.clone() }) == Some(q.clone()))
                && a.len() == b.len();
            rep.record(ok, || format!("antisymmetry fails for ({}, {})", spec.name(i), spec.name(j)));
        }
    }
    let unit = |i: usize| LieComb::from([(i, BigRational::from_integer(1.into()))]);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (pi, pj, pk) = (spec.parity(i), spec.parity(j), spec.parity(k));
                let mut total = LieComb::new();
                let terms = [
                    (pi.koszul(pk), i, spec.bracket_comb(&unit(j), &unit(k))),
                    (pj.koszul(pi), j, spec.bracket_comb(&unit(k), &unit(i))),
                    (pk.koszul(pj), k, spec.bracket_comb(&unit(i), &unit(j))),
                ];
                for (neg, x, inner) in terms {
                    for (z, q) in spec.bracket_comb(&unit(x), &inner) {
                        let e = total.entry(z).or_insert_with(BigRational::zero);
                        if neg {
                            *e -= q;
                        } else {
                            *e += q;
                        }
                    }
                }
                total.retain(|_, c| !c.is_zero());
                rep.record(total.is_empty(), || {
                    format!(
                        "Jacobi fails for ({}, {}, {}): {}",
                        spec.name(i),
                        spec.name(j),
                        spec.name(k),
                        spec.format_comb(&total)
                    )
                });
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn builtin_specs_pass() {
        assert!(check_lie_spec(&LieSuperSpec::even_line("d")).passed);
        assert!(check_lie_spec(&LieSuperSpec::delta_model()).passed);
    }

    #[test]
    fn parity_mismatch_fails() {
        let s = LieSuperSpec::new([("delta", Parity::Odd)])
            .unwrap()
            .with_bracket("delta", "delta", &[("delta", q(1))])
            .unwrap();
        let r = check_lie_spec(&s);
        assert!(!r.passed);
        assert!(r.failure.unwrap().contains("wrong parity"));
    }

    #[test]
    fn jacobi_violation_detected() {
        // [a,b]=c, [b,c]=a, [c,a]=a is not a Lie algebra.
        let s = LieSuperSpec::new([("a", Parity::Even), ("b", Parity::Even), ("c", Parity::Even)])
            .unwrap()
            .with_bracket("a", "b", &[("c", q(1))])
            .unwrap()
            .with_bracket("b", "c", &[("a", q(1))])
            .unwrap()
            .with_bracket("c", "a", &[("a", q(1))])
            .unwrap();
        assert!(!check_lie_spec(&s).passed);
        // sl2 passes.
        let sl2 = LieSuperSpec::new([("e", Parity::Even), ("f", Parity::Even), ("h", Parity::Even)])
            .unwrap()
            .with_bracket("e", "f", &[("h", q(1))])
            .unwrap()
            .with_bracket("h", "e", &[("e", q(2))])
            .unwrap()
            .with_bracket("h", "f", &[("f", q(-2))])
            .unwrap();
        assert!(check_lie_spec(&sl2).passed);
    }

    #[test]
    fn antisymmetry_conflict_detected() {
        let s = LieSuperSpec::new([("a", Parity::Even), ("b", Parity::Even)])
            .unwrap()
            .with_bracket("a", "b", &[("a", q(1))])
            .unwrap()
            .with_bracket("b", "a", &[("a", q(1))])
            .unwrap();
        assert!(!check_lie_spec(&s).passed);
        let even_self = LieSuperSpec::new([("a", Parity::Even)]).unwrap().with_bracket("a", "a", &[("a", q(1))]).unwrap();
        assert!(!check_lie_spec(&even_self).passed);
    }
}
