use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lie::LieSuperSpec;
use super::word::DWord;
use crate::error::{Error, Result};
use crate::linalg;
use crate::random::ElemSampler;
use crate::report::Report;
use crate::supercore::{rational_coordinates, Atom, Derivation, Parity, SuperElem, SuperRingSpec};

/// Anything that lets the generators of a Lie superalgebra act on a ring.
pub trait SuperAction: Send + Sync {
    fn ring(&self) -> &Arc<SuperRingSpec>;
    fn spec(&self) -> &Arc<LieSuperSpec>;
    /// Action of generator `gen` on `a`.
    fn act(&self, gen: usize, a: &SuperElem) -> SuperElem;
}

/// Generators acting as superderivations given on ring generators.
#[derive(Clone, Debug)]
pub struct DAction {
    ring: Arc<SuperRingSpec>,
    spec: Arc<LieSuperSpec>,
    derivations: Vec<Derivation>,
}

impl DAction {
    pub fn new(ring: &Arc<SuperRingSpec>, spec: &Arc<LieSuperSpec>, derivations: Vec<Derivation>) -> Result<Self> {
        if derivations.len() != spec.len() {
            return Err(Error::SpecMismatch(format!(
                "{} derivations for {} Lie generators",
                derivations.len(),
                spec.len()
            )));
        }
        for (i, d) in derivations.iter().enumerate() {
            if !SuperRingSpec::same(d.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            if d.parity() != spec.parity(i) {
                return Err(Error::SpecMismatch(format!("derivation for `{}` has parity {}", spec.name(i), d.parity())));
            }
        }
        Ok(DAction { ring: ring.clone(), spec: spec.clone(), derivations })
    }

    pub fn zero(ring: &Arc<SuperRingSpec>, spec: &Arc<LieSuperSpec>) -> Self {
        let derivations = spec.gens().iter().map(|(_, p)| Derivation::zero(ring, *p)).collect();
        DAction { ring: ring.clone(), spec: spec.clone(), derivations }
    }

    /// Builds an action from `(lie generator, ring generator, image)` rows.
    pub fn from_table<'a>(
        ring: &Arc<SuperRingSpec>,
        spec: &Arc<LieSuperSpec>,
        rows: impl IntoIterator<Item = (&'a str, &'a str, SuperElem)>,
    ) -> Result<Self> {
        let mut a = DAction::zero(ring, spec);
        for (g, x, img) in rows {
            let i = spec.index(g)?;
            let atom = ring.atom(x).ok_or_else(|| Error::UnknownName(x.to_string()))?;
            a.derivations[i].set(atom, img)?;
        }
        Ok(a)
    }

    /// The model `d = ∂/∂t`, `delta·t = θ`, `delta·θ = 1` over `ring`,
    /// with every other generator killed.
    pub fn delta_model(ring: &Arc<SuperRingSpec>, t: &str, theta: &str) -> Result<Self> {
        let one = SuperElem::one(ring);
        let th = SuperElem::gen(ring, theta)?;
        DAction::from_table(
            ring,
            &LieSuperSpec::delta_model(),
            [("d", t, one.clone()), ("delta", t, th), ("delta", theta, one)],
        )
    }

    /// `d = ∂/∂t` alone.
    pub fn derivative(ring: &Arc<SuperRingSpec>, t: &str) -> Result<Self> {
        DAction::from_table(ring, &LieSuperSpec::even_line("d"), [("d", t, SuperElem::one(ring))])
    }

    pub fn derivation(&self, i: usize) -> &Derivation {
        &self.derivations[i]
    }

    pub fn derivations(&self) -> &[Derivation] {
        &self.derivations
    }

    /// Replaces the derivation of one generator.
    pub fn set_derivation(&mut self, i: usize, d: Derivation) -> Result<()> {
        if d.parity() != self.spec.parity(i) || !SuperRingSpec::same(d.ring(), &self.ring) {
            return Err(Error::SpecMismatch(format!("replacement derivation for `{}`", self.spec.name(i))));
        }
        self.derivations[i] = d;
        Ok(())
    }

    /// The same action over a ring that contains this one by name.
    pub fn embed(&self, target: &Arc<SuperRingSpec>) -> Result<Self> {
        let derivations = self.derivations.iter().map(|d| d.embed(target)).collect::<Result<_>>()?;
        Ok(DAction { ring: target.clone(), spec: self.spec.clone(), derivations })
    }
}

impl SuperAction for DAction {
    fn ring(&self) -> &Arc<SuperRingSpec> {
        &self.ring
    }

    fn spec(&self) -> &Arc<LieSuperSpec> {
        &self.spec
    }

    fn act(&self, gen: usize, a: &SuperElem) -> SuperElem {
        self.derivations[gen].apply(a)
    }
}

/// `g_1(g_2(…g_k(a)))` for a raw generator sequence.
pub fn apply_seq(action: &dyn SuperAction, seq: &[usize], a: &SuperElem) -> SuperElem {
    seq.iter().rev().fold(a.clone(), |acc, &g| if acc.is_zero() { acc } else { action.act(g, &acc) })
}

/// Action of an element of U(g) on `a`.
pub fn apply(action: &dyn SuperAction, word: &DWord, a: &SuperElem) -> Result<SuperElem> {
    if **word.spec() != **action.spec() {
        return Err(Error::SpecMismatch("word and action use different Lie specs".into()));
    }
    if !SuperRingSpec::same(a.ring(), action.ring()) {
        return Err(Error::SpecMismatch("element does not live in the acted-on ring".into()));
    }
    let mut out = SuperElem::zero(action.ring());
    for (seq, c) in word.terms() {
        out = &out + &apply_seq(action, seq, a).scale_q(c);
    }
    Ok(out)
}

fn sign(neg: bool, e: SuperElem) -> SuperElem {
    if neg {
        e.neg()
    } else {
        e
    }
}

/// Checks `d(ab) = (da)b + (-1)^{|d||a|} a(db)` on random homogeneous pairs.
pub fn check_superleibniz(action: &dyn SuperAction, samples: usize, seed: u64) -> Report {
    let mut rep = Report::new("superleibniz");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = ElemSampler::new(action.ring()).with_fractions(0.2);
    let spec = action.spec();
    for s in 0..samples {
        let pa = Parity::from_bit(s % 2 == 1);
        let pb = Parity::from_bit(s / 2 % 2 == 1);
        let a = sampler.homogeneous(&mut rng, pa);
        let b = sampler.homogeneous(&mut rng, pb);
        let ab = &a * &b;
        for g in 0..spec.len() {
            let lhs = action.act(g, &ab);
            let rhs = &(&action.act(g, &a) * &b) + &sign(spec.parity(g).koszul(pa), &a * &action.act(g, &b));
            rep.record(lhs == rhs, || format!("{}({a} · {b}): {lhs} vs {rhs}", spec.name(g)));
        }
    }
    rep
}

/// Checks `[d,d']·x = d(d'x) - (-1)^{|d||d'|} d'(dx)` on every ring
/// generator and declared denominator inverse.
pub fn check_bracket_compat(action: &dyn SuperAction) -> Report {
    let mut rep = Report::new("bracket_compat");
    let ring = action.ring();
    let spec = action.spec();
    let mut probes: Vec<SuperElem> = ring.all_atoms().into_iter().map(|a| SuperElem::from_atom(ring, a)).collect();
    probes.extend((0..ring.num_dens()).map(|i| SuperElem::denominator_inverse(ring, i)));
    for i in 0..spec.len() {
        for j in i..spec.len() {
            let neg = spec.parity(i).koszul(spec.parity(j));
            let br = spec.bracket(i, j);
            for x in &probes {
                let lhs = br.iter().fold(SuperElem::zero(ring), |acc, (k, c)| &acc + &action.act(*k, x).scale_q(c));
                let rhs = &action.act(i, &action.act(j, x)) - &sign(neg, action.act(j, &action.act(i, x)));
                rep.record(lhs == rhs, || format!("[{}, {}] on {x}: {lhs} vs {rhs}", spec.name(i), spec.name(j)));
            }
        }
    }
    rep
}

/// Basis over ℚ of the elements of `span` killed by every generator.
pub fn constants(action: &dyn SuperAction, span: &[SuperElem]) -> Vec<SuperElem> {
    let ring = action.ring();
    if span.is_empty() {
        return Vec::new();
    }
    let n = span.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for g in 0..action.spec().len() {
        let images: Vec<SuperElem> = span.iter().map(|x| action.act(g, x)).collect();
        let coords = rational_coordinates(&images);
        let mut keys: BTreeMap<_, Vec<BigRational>> = BTreeMap::new();
        for (col, c) in coords.into_iter().enumerate() {
            for (k, q) in c {
                keys.entry(k).or_insert_with(|| vec![BigRational::from_integer(0.into()); n])[col] = q;
            }
        }
        rows.extend(keys.into_values());
    }
    linalg::kernel(&rows, n)
        .into_iter()
        .map(|v| {
            span.iter().zip(&v).fold(SuperElem::zero(ring), |acc, (x, q)| &acc + &x.scale_q(q))
        })
        .collect()
}

/// Applies `action` to a ring generator named `x`, for table-style output.
pub fn image_of(action: &DAction, gen: usize, x: &str) -> Result<SuperElem> {
    let atom: Atom = action.ring.atom(x).ok_or_else(|| Error::UnknownName(x.to_string()))?;
    Ok(action.derivations[gen].image(atom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<SuperRingSpec> {
        SuperRingSpec::builder().body("t").odd("th").odd("th2").build().unwrap()
    }

    fn p(r: &Arc<SuperRingSpec>, s: &str) -> SuperElem {
        SuperElem::parse(r, s).unwrap()
    }

    #[test]
    fn apply_examples() {
        let r = ring();
        let a = DAction::delta_model(&r, "t", "th").unwrap();
        let s = a.spec().clone();
        assert_eq!(apply(&a, &DWord::gen(&s, 0), &p(&r, "t^2")).unwrap(), p(&r, "2*t"));
        assert_eq!(apply(&a, &DWord::gen(&s, 1), &p(&r, "t*th")).unwrap(), p(&r, "t"));
        let x = p(&r, "t^2*th");
        assert_eq!(apply_seq(&a, &[1, 1], &x), apply_seq(&a, &[0], &x));
    }

    #[test]
    fn model_passes_checks() {
        let r = ring();
        let a = DAction::delta_model(&r, "t", "th").unwrap();
        assert!(check_superleibniz(&a, 40, 7).passed);
        assert!(check_bracket_compat(&a).passed);
        let z = DAction::zero(&r, &LieSuperSpec::delta_model());
        assert!(check_superleibniz(&z, 10, 1).passed);
        assert!(check_bracket_compat(&z).passed);
    }

    #[test]
    fn corrupted_table_fails_bracket_check() {
        let r = ring();
        let a = DAction::from_table(
            &r,
            &LieSuperSpec::delta_model(),
            [("d", "t", p(&r, "1")), ("delta", "t", p(&r, "th")), ("delta", "th", p(&r, "-1"))],
        )
        .unwrap();
        assert!(!check_bracket_compat(&a).passed);
    }

    #[test]
    fn constants_examples() {
        let r = ring();
        let span: Vec<SuperElem> = ["1", "t", "th", "t*th"].iter().map(|s| p(&r, s)).collect();
        let model = DAction::delta_model(&r, "t", "th").unwrap();
        assert_eq!(constants(&model, &span), vec![p(&r, "1")]);
        let zero = DAction::zero(&r, &LieSuperSpec::delta_model());
        assert_eq!(constants(&zero, &span[..2]).len(), 2);
        let d = DAction::derivative(&r, "t").unwrap();
        assert_eq!(constants(&d, &[p(&r, "1"), p(&r, "th")]).len(), 2);
        let c = constants(&model, &[p(&r, "1/(t+1)"), p(&r, "t^2 + 2*t*th"), p(&r, "th2")]);
        assert_eq!(c, vec![p(&r, "th2")]);
    }
}
