//! Problem files: a ring, a Lie superalgebra, its action, an optional
//! module, and the tasks to run against them.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bosonize::Side;
use crate::dalgebra::{DAction, DModule, LieSuperSpec, SuperAction};
use crate::error::{Error, Result};
use crate::supercore::{Parity, SuperElem, SuperRingSpec};
use crate::supermatrix::{Format, SuperMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Where `run` writes its JSONL report; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub ring: RingConfig,
    pub lie: LieConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub action: Vec<ActionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskConfig>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub body: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub odd: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub poly: Vec<NamedParity>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub denominators: Vec<NamedValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedParity {
    pub name: String,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiePreset {
    /// `{d}` with `[d, d] = 0`.
    D,
    /// `{d, delta}` with `[delta, delta] = 2d`.
    Delta,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<LiePreset>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<NamedParity>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<BracketEntry>,
}

/// `[left, right] = Σ value[z]·z` with rational coefficients like `"2"`
/// or `"-1/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    #[serde(default)]
    pub value: BTreeMap<String, String>,
}

/// `generator · target = image` for a ring generator `target`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub generator: String,
    pub target: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleConfig {
    pub format: Format,
    /// Fill `F(d)` from `F(delta)` in the `{d, delta}` model.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub from_delta: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub generator: String,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Certificate,
    NotFound,
}

fn default_samples() -> usize {
    200
}

fn default_bound() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskConfig {
    /// Lie table, superleibniz, bracket compatibility, module consistency
    /// and the cocycle identity.
    Check {
        #[serde(default = "default_samples")]
        samples: usize,
        /// 32 bits so every value fits a TOML integer.
        #[serde(default)]
        seed: u32,
    },
    Solve {
        order: u32,
    },
    Splitting {
        order: u32,
    },
    Pvring,
    Zw,
    Hopf,
    Wronskian {
        elements: Vec<String>,
        #[serde(default = "default_bound")]
        bound: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<Expect>,
    },
    Dualize {
        side: Side,
    },
    BosonizeVerify {
        #[serde(default = "default_bound")]
        bound: usize,
    },
    Reduce,
}

impl TaskConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskConfig::Check { .. } => "check",
            TaskConfig::Solve { .. } => "solve",
            TaskConfig::Splitting { .. } => "splitting",
            TaskConfig::Pvring => "pvring",
            TaskConfig::Zw => "zw",
            TaskConfig::Hopf => "hopf",
            TaskConfig::Wronskian { .. } => "wronskian",
            TaskConfig::Dualize { .. } => "dualize",
            TaskConfig::BosonizeVerify { .. } => "bosonize_verify",
            TaskConfig::Reduce => "reduce",
        }
    }

    fn needs_module(&self) -> bool {
        !matches!(self, TaskConfig::Check { .. } | TaskConfig::Wronskian { .. } | TaskConfig::BosonizeVerify { .. })
    }
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl ProblemConfig {
    pub fn from_toml(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(src, s.start));
            Error::Parse { line, column, message: e.message().to_string() }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    /// Canonical serialization used for input hashes.
    pub fn canonical(&self) -> String {
        self.to_toml()
    }
}

/// A config resolved into algebraic objects.
#[derive(Clone, Debug)]
pub struct Problem {
    pub config: ProblemConfig,
    pub ring: Arc<SuperRingSpec>,
    pub spec: Arc<LieSuperSpec>,
    pub action: DAction,
    pub module: Option<DModule>,
    /// Parsed elements of each wronskian task, by task index.
    pub elements: BTreeMap<usize, Vec<SuperElem>>,
}

/// Where an expression sits, for error messages.
struct Locator<'a> {
    src: Option<&'a str>,
}

impl Locator<'_> {
    /// Re-anchors an expression parse error at the expression's position
    /// in the source file, when the source is known.
    fn wrap(&self, field: &str, expr: &str, e: Error) -> Error {
        let quoted = format!("\"{expr}\"");
        let base = self.src.and_then(|s| s.find(&quoted)).map(|off| line_col(self.src.unwrap_or(""), off + 1));
        match e {
            Error::Parse { column, message, .. } => match base {
                Some((line, col)) => Error::Parse { line, column: col + column - 1, message: format!("{field}: {message}") },
                None => Error::Parse { line: 1, column, message: format!("{field}: {message}") },
            },
            Error::UnknownName(n) => {
                let (line, column) = base.unwrap_or((1, 1));
                Error::Parse { line, column, message: format!("{field}: unknown name `{n}`") }
            }
            other => Error::Validation(format!("{field}: {other}")),
        }
    }

    fn elem(&self, ring: &Arc<SuperRingSpec>, field: &str, expr: &str) -> Result<SuperElem> {
        SuperElem::parse(ring, expr).map_err(|e| self.wrap(field, expr, e))
    }
}

impl Problem {
    pub fn build(config: &ProblemConfig) -> Result<Self> {
        Self::build_located(config, None)
    }

    /// Parses and validates a TOML problem file.
    pub fn from_toml(src: &str) -> Result<Self> {
        let config = ProblemConfig::from_toml(src)?;
        Self::build_located(&config, Some(src))
    }

    fn build_located(config: &ProblemConfig, src: Option<&str>) -> Result<Self> {
        let loc = Locator { src };
        let rc = &config.ring;
        let mut b = SuperRingSpec::builder();
        for n in &rc.body {
            b = b.body(n.clone());
        }
        for n in &rc.odd {
            b = b.odd(n.clone());
        }
        for g in &rc.poly {
            b = b.poly(g.name.clone(), g.parity);
        }
        let mut ring = b.build()?;
        if !rc.denominators.is_empty() {
            let dens = rc
                .denominators
                .iter()
                .map(|d| Ok((d.name.clone(), loc.elem(&ring, &format!("ring.denominators.{}", d.name), &d.value)?)))
                .collect::<Result<Vec<_>>>()?;
            ring = ring.with_denominators(dens)?;
        }
        let spec = build_spec(&config.lie)?;
        let mut rows = Vec::with_capacity(config.action.len());
        for a in &config.action {
            spec.index(&a.generator)
                .map_err(|_| Error::Validation(format!("action names undeclared generator `{}`", a.generator)))?;
            if ring.atom(&a.target).is_none() {
                return Err(Error::Validation(format!("action targets undeclared ring generator `{}`", a.target)));
            }
            let img = loc.elem(&ring, &format!("action {}·{}", a.generator, a.target), &a.image)?;
            rows.push((a.generator.as_str(), a.target.as_str(), img));
        }
        let action = DAction::from_table(&ring, &spec, rows)?;
        let module = match &config.module {
            None => None,
            Some(mc) => Some(build_module(&loc, &action, mc)?),
        };
        let mut elements = BTreeMap::new();
        for (i, t) in config.tasks.iter().enumerate() {
            if t.needs_module() && module.is_none() {
                return Err(Error::Validation(format!("task {} ({}) needs a [module] section", i + 1, t.kind())));
            }
            if let TaskConfig::Wronskian { elements: es, .. } = t {
                let parsed = es
                    .iter()
                    .map(|e| loc.elem(&ring, &format!("tasks[{}].elements", i + 1), e))
                    .collect::<Result<Vec<_>>>()?;
                elements.insert(i, parsed);
            }
        }
        Ok(Problem { config: config.clone(), ring, spec, action, module, elements })
    }

    pub fn module(&self) -> Result<&DModule> {
        self.module.as_ref().ok_or_else(|| Error::Validation("no [module] section".into()))
    }
}

fn build_spec(lc: &LieConfig) -> Result<Arc<LieSuperSpec>> {
    match &lc.preset {
        Some(p) => {
            if !lc.generators.is_empty() || !lc.brackets.is_empty() {
                return Err(Error::Validation("a Lie preset cannot be combined with explicit generators".into()));
            }
            Ok(match p {
                LiePreset::D => LieSuperSpec::even_line("d"),
                LiePreset::Delta => LieSuperSpec::delta_model(),
            })
        }
        None => {
            let mut spec = LieSuperSpec::new(lc.generators.iter().map(|g| (g.name.clone(), g.parity)))?;
            for br in &lc.brackets {
                for n in [&br.left, &br.right].into_iter().chain(br.value.keys()) {
                    spec.index(n)
                        .map_err(|_| Error::Validation(format!("bracket names undeclared generator `{n}`")))?;
                }
                let value = br
                    .value
                    .iter()
                    .map(|(z, c)| {
                        BigRational::from_str(c.trim())
                            .map(|q| (z.as_str(), q))
                            .map_err(|_| Error::Validation(format!("bracket coefficient `{c}` is not rational")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                spec = spec.with_bracket(&br.left, &br.right, &value)?;
            }
            Ok(Arc::new(spec))
        }
    }
}

fn build_module(loc: &Locator<'_>, action: &DAction, mc: &ModuleConfig) -> Result<DModule> {
    let ring = action.ring();
    let spec = action.spec();
    let mut named = Vec::with_capacity(mc.maps.len());
    for me in &mc.maps {
        spec.index(&me.generator)
            .map_err(|_| Error::Validation(format!("module map for undeclared generator `{}`", me.generator)))?;
        if me.rows.len() != mc.format.size() || me.rows.iter().any(|r| r.len() != mc.format.size()) {
            return Err(Error::FormatMismatch(format!(
                "F({}) must be {}x{} for format {}",
                me.generator,
                mc.format.size(),
                mc.format.size(),
                mc.format
            )));
        }
        let rows = me
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, e)| loc.elem(ring, &format!("F({})[{},{}]", me.generator, i + 1, j + 1), e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        named.push((me.generator.as_str(), SuperMatrix::from_rows(ring, mc.format, rows)?));
    }
    if mc.from_delta {
        let f = named
            .iter()
            .find(|(n, _)| *n == "delta")
            .map(|(_, f)| f.clone())
            .ok_or_else(|| Error::Validation("from_delta needs a map for `delta`".into()))?;
        if named.len() != 1 {
            return Err(Error::Validation("from_delta takes only the map for `delta`".into()));
        }
        return DModule::from_delta(action.clone(), f);
    }
    DModule::from_named(action.clone(), mc.format, named)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const DELTA: &str = r#"
[ring]
body = ["t"]
odd = ["th1"]

[lie]
preset = "delta"

[[action]]
generator = "d"
target = "t"
image = "1"

[[action]]
generator = "delta"
target = "t"
image = "th1"

[[action]]
generator = "delta"
target = "th1"
image = "1"

[module]
format = "1|1"
from_delta = true

[[module.maps]]
generator = "delta"
rows = [["0", "1"], ["1", "0"]]

[[tasks]]
kind = "solve"
order = 4

[[tasks]]
kind = "wronskian"
elements = ["1", "th1"]
"#;

    #[test]
    fn parse_serialize_parse_is_identity() {
        let a = ProblemConfig::from_toml(DELTA).unwrap();
        let b = ProblemConfig::from_toml(&a.to_toml()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_toml(), b.to_toml());
        let p = Problem::build(&a).unwrap();
        assert!(p.module.unwrap().is_consistent());
    }

    #[test]
    fn toml_errors_carry_position() {
        let bad = DELTA.replace("order = 4", "order = \"four\"");
        match ProblemConfig::from_toml(&bad) {
            Err(Error::Parse { line, .. }) => assert!(line > 30),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn expression_errors_point_into_the_file() {
        let bad = DELTA.replace("image = \"th1\"", "image = \"th1 + )\"");
        match Problem::from_toml(&bad) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 17);
                assert!(column > 9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn undeclared_generator_is_a_validation_error() {
        let bad = DELTA.replace("generator = \"d\"", "generator = \"e\"");
        assert!(matches!(Problem::from_toml(&bad), Err(Error::Validation(m)) if m.contains("`e`")));
    }
}
