use std::sync::Arc;

use super::action::{check_bracket_compat, DAction, SuperAction};
use super::lie::LieSuperSpec;
use super::word::DWord;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::supercore::{SuperElem, SuperRingSpec};
use crate::supermatrix::{Format, SuperMatrix};

/// A free module of rank `m|n` over the acted-on ring, given by one
/// structure matrix per Lie generator: `d v = F(d) v` for the column of
/// basis vectors `v`.
#[derive(Clone, Debug)]
pub struct DModule {
    action: DAction,
    format: Format,
    maps: Vec<SuperMatrix>,
    consistency: Report,
}

impl DModule {
    /// Validates parity classes and records the consistency report.
    pub fn new(action: DAction, format: Format, maps: Vec<SuperMatrix>) -> Result<Self> {
        let spec = action.spec().clone();
        if maps.len() != spec.len() {
            return Err(Error::SpecMismatch(format!("{} structure matrices for {} generators", maps.len(), spec.len())));
        }
        for (i, f) in maps.iter().enumerate() {
            if f.format() != format {
                return Err(Error::FormatMismatch(format!("F({}) has format {}", spec.name(i), f.format())));
            }
            if !SuperRingSpec::same(f.ring(), action.ring()) {
                return Err(Error::RingMismatch);
            }
            if !f.has_class(spec.parity(i)) {
                return Err(Error::SpecMismatch(format!(
                    "F({}) must be an {} matrix",
                    spec.name(i),
                    spec.parity(i)
                )));
            }
        }
        let mut m = DModule { action, format, maps, consistency: Report::new("module_consistency") };
        m.consistency = compute_consistency(&m);
        Ok(m)
    }

    /// Assigns matrices by generator name; unnamed generators get zero.
    pub fn from_named(action: DAction, format: Format, named: Vec<(&str, SuperMatrix)>) -> Result<Self> {
        let spec = action.spec().clone();
        let mut maps = vec![SuperMatrix::zero(action.ring(), format); spec.len()];
        for (name, f) in named {
            maps[spec.index(name)?] = f;
        }
        DModule::new(action, format, maps)
    }

    /// For the `{d, delta: [delta, delta] = 2d}` model: takes the odd
    /// matrix `F(delta)` and sets `F(d) = F(delta·delta)`, which makes the
    /// table consistent whenever the action is.
    pub fn from_delta(action: DAction, f_delta: SuperMatrix) -> Result<Self> {
        let spec = action.spec().clone();
        if *spec != *LieSuperSpec::delta_model() {
            return Err(Error::SpecMismatch("expected the {d, delta} model".into()));
        }
        let format = f_delta.format();
        let partial = DModule {
            action: action.clone(),
            format,
            maps: vec![SuperMatrix::zero(action.ring(), format), f_delta.clone()],
            consistency: Report::new("module_consistency"),
        };
        let f_d = partial.eval_seq(&[1, 1]);
        DModule::new(action, format, vec![f_d, f_delta])
    }

    pub fn action(&self) -> &DAction {
        &self.action
    }

    pub fn spec(&self) -> &Arc<LieSuperSpec> {
        self.action.spec()
    }

    pub fn ring(&self) -> &Arc<SuperRingSpec> {
        self.action.ring()
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn map(&self, gen: usize) -> &SuperMatrix {
        &self.maps[gen]
    }

    pub fn maps(&self) -> &[SuperMatrix] {
        &self.maps
    }

    pub fn is_consistent(&self) -> bool {
        self.consistency.passed
    }

    pub fn consistency(&self) -> &Report {
        &self.consistency
    }

    /// Entrywise action of a generator on a matrix.
    pub fn act_matrix(&self, gen: usize, x: &SuperMatrix) -> SuperMatrix {
        x.map(|e| self.action.act(gen, e))
    }

    /// `F` on a raw generator sequence through
    /// `F(g·w) = g·F(w) + σ^{|g|}(F(w))·F(g)`.
    pub fn eval_seq(&self, seq: &[usize]) -> SuperMatrix {
        let mut f = SuperMatrix::identity(self.ring(), self.format);
        for &g in seq.iter().rev() {
            let p = self.spec().parity(g);
            f = &self.act_matrix(g, &f) + &(&f.sigma_pow(p) * &self.maps[g]);
        }
        f
    }

    /// `F(w)` for an element of U(g).
    pub fn extend_structure_map(&self, word: &DWord) -> Result<SuperMatrix> {
        if !self.is_consistent() {
            return Err(Error::InconsistentModule(self.consistency.failure.clone().unwrap_or_default()));
        }
        if **word.spec() != **self.spec() {
            return Err(Error::SpecMismatch("word uses a different Lie spec".into()));
        }
        let mut out = SuperMatrix::zero(self.ring(), self.format);
        for (seq, c) in word.terms() {
            out = &out + &self.eval_seq(seq).map(|e| e.scale_q(c));
        }
        Ok(out)
    }

    /// Action of a word on a vector `x = Σ x_i v_i`, given by its row of
    /// coordinates: returns the coordinates of `g·x` for a generator.
    pub fn act_vector(&self, gen: usize, x: &[SuperElem]) -> Vec<SuperElem> {
        let k = self.format.size();
        let p = self.spec().parity(gen);
        let f = &self.maps[gen];
        (0..k)
            .map(|j| {
                let mut acc = SuperElem::zero(self.ring());
                for (i, xi) in x.iter().enumerate().take(k) {
                    acc = &acc + &(&xi.parity_sign_pow(p) * f.get(i, j));
                }
                &self.action.act(gen, &x[j]) + &acc
            })
            .collect()
    }

    /// Same module over a larger ring that contains this one by name.
    pub fn embed(&self, action: DAction) -> Result<DModule> {
        let maps = self.maps.iter().map(|f| f.embed(action.ring())).collect::<Result<Vec<_>>>()?;
        DModule::new(action, self.format, maps)
    }
}

fn compute_consistency(m: &DModule) -> Report {
    let spec = m.spec().clone();
    let mut rep = Report::new("module_consistency");
    rep.absorb(check_bracket_compat(&m.action));
    for i in 0..spec.len() {
        for j in i..spec.len() {
            let neg = spec.parity(i).koszul(spec.parity(j));
            if i == j && !neg {
                continue;
            }
            let fij = m.eval_seq(&[i, j]);
            let fji = m.eval_seq(&[j, i]);
            let lhs = if neg { &fij + &fji } else { &fij - &fji };
            let mut rhs = SuperMatrix::zero(m.ring(), m.format);
            for (k, c) in spec.bracket(i, j) {
                rhs = &rhs + &m.maps[k].map(|e| e.scale_q(&c));
            }
            rep.record(lhs == rhs, || {
                format!("relation [{}, {}] fails: {} vs {}", spec.name(i), spec.name(j), lhs, rhs)
            });
        }
    }
    rep
}

/// Public form of the consistency check for an explicit table.
pub fn check_module_consistency(m: &DModule) -> Report {
    m.consistency.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<SuperRingSpec> {
        SuperRingSpec::builder().body("t").odd("th").build().unwrap()
    }

    fn fmt11() -> Format {
        Format { m: 1, n: 1 }
    }

    #[test]
    fn empty_word_gives_identity() {
        let r = ring();
        let a = DAction::derivative(&r, "t").unwrap();
        let f = SuperMatrix::parse(&r, fmt11(), &[vec!["t", "th"], vec!["th", "1"]]).unwrap();
        let m = DModule::from_named(a, fmt11(), vec![("d", f)]).unwrap();
        assert!(m.extend_structure_map(&DWord::one(m.spec())).unwrap().is_identity());
    }

    #[test]
    fn even_square_matches_expansion() {
        let r = ring();
        let a = DAction::derivative(&r, "t").unwrap();
        let f = SuperMatrix::parse(&r, fmt11(), &[vec!["t", "th"], vec!["t*th", "t^2"]]).unwrap();
        let m = DModule::from_named(a, fmt11(), vec![("d", f.clone())]).unwrap();
        let got = m.extend_structure_map(&DWord::from_seq(m.spec(), &[0, 0])).unwrap();
        let want = &m.act_matrix(0, &f) + &(&f * &f);
        assert_eq!(got, want);
    }

    #[test]
    fn constant_odd_swap_squares_to_identity() {
        let r = ring();
        let a = DAction::delta_model(&r, "t", "th").unwrap();
        let f = SuperMatrix::parse(&r, fmt11(), &[vec!["0", "1"], vec!["1", "0"]]).unwrap();
        let m = DModule::from_delta(a, f).unwrap();
        assert!(m.is_consistent());
        assert!(m.map(0).is_identity());
        assert!(m.extend_structure_map(&DWord::from_seq(m.spec(), &[1, 1])).unwrap().is_identity());
    }

    #[test]
    fn perturbed_table_is_inconsistent() {
        let r = ring();
        let a = DAction::delta_model(&r, "t", "th").unwrap();
        let fd = SuperMatrix::parse(&r, fmt11(), &[vec!["0", "1"], vec!["1", "0"]]).unwrap();
        let m = DModule::new(a.clone(), fmt11(), vec![SuperMatrix::zero(&r, fmt11()), fd]).unwrap();
        assert!(!m.is_consistent());
        assert!(matches!(
            m.extend_structure_map(&DWord::one(m.spec())),
            Err(Error::InconsistentModule(_))
        ));
        let z = DModule::from_named(a, fmt11(), vec![]).unwrap();
        assert!(z.is_consistent());
        let bad = SuperMatrix::parse(&r, fmt11(), &[vec!["th", "0"], vec!["0", "0"]]).unwrap();
        assert!(DModule::from_named(
            DAction::derivative(&r, "t").unwrap(),
            fmt11(),
            vec![("d", bad)]
        )
        .is_err());
    }
}
