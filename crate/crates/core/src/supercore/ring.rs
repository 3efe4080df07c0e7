use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::elem::{SuperElem, Terms};
use crate::error::{Error, Result};

/// ℤ/2 grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u32 {
        self as u32
    }

    /// Koszul sign `(-1)^{|a||b|}` as a boolean "negate".
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.is_odd() != rhs.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Where a declared name lives inside an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// Even variable of the body field ℚ(t₁..t_k).
    Body(usize),
    /// Grassmann slot: odd generators first, then odd-overridden polynomial
    /// generators, in declaration order.
    Odd(usize),
    /// Even polynomial generator.
    Even(usize),
}

#[derive(Clone, Debug)]
pub struct Denominator {
    pub name: String,
    pub(crate) terms: Terms,
}

pub const MAX_ODD_SLOTS: usize = 128;

/// Declaration of a finitely generated supercommutative ring over ℚ(body).
pub struct SuperRingSpec {
    body_vars: Vec<String>,
    odd_gens: Vec<String>,
    poly_gens: Vec<(String, Parity)>,
    denominators: Vec<Denominator>,
    atoms: BTreeMap<String, Atom>,
    odd_names: Vec<String>,
    even_names: Vec<String>,
    even_subring: OnceLock<Arc<SuperRingSpec>>,
}

impl PartialEq for SuperRingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.body_vars == other.body_vars
            && self.odd_gens == other.odd_gens
            && self.poly_gens == other.poly_gens
            && self.denominators.len() == other.denominators.len()
            && self
                .denominators
                .iter()
                .zip(&other.denominators)
                .all(|(a, b)| a.name == b.name && a.terms == b.terms)
    }
}

impl Eq for SuperRingSpec {}

impl fmt::Debug for SuperRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SuperRingSpec")
            .field("body_vars", &self.body_vars)
            .field("odd_gens", &self.odd_gens)
            .field("poly_gens", &self.poly_gens)
            .field("denominators", &self.denominators.iter().map(|d| &d.name).collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Default, Clone, Debug)]
pub struct RingBuilder {
    body_vars: Vec<String>,
    odd_gens: Vec<String>,
    poly_gens: Vec<(String, Parity)>,
}

impl RingBuilder {
    pub fn body(mut self, name: impl Into<String>) -> Self {
        self.body_vars.push(name.into());
        self
    }

    pub fn odd(mut self, name: impl Into<String>) -> Self {
        self.odd_gens.push(name.into());
        self
    }

    pub fn poly(mut self, name: impl Into<String>, parity: Parity) -> Self {
        self.poly_gens.push((name.into(), parity));
        self
    }

    pub fn build(self) -> Result<Arc<SuperRingSpec>> {
        SuperRingSpec::new(self.body_vars, self.odd_gens, self.poly_gens, Vec::new()).map(Arc::new)
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl SuperRingSpec {
    pub fn builder() -> RingBuilder {
        RingBuilder::default()
    }

    fn new(
        body_vars: Vec<String>,
        odd_gens: Vec<String>,
        poly_gens: Vec<(String, Parity)>,
        denominators: Vec<Denominator>,
    ) -> Result<Self> {
        let mut atoms = BTreeMap::new();
        let mut odd_names = Vec::new();
        let mut even_names = Vec::new();
        let mut declare = |name: &String, atom: Atom| -> Result<()> {
            if !valid_name(name) {
                return Err(Error::InvalidSpec(format!("`{name}` is not a valid identifier")));
            }
            if atoms.insert(name.clone(), atom).is_some() {
                return Err(Error::InvalidSpec(format!("generator `{name}` declared twice")));
            }
            Ok(())
        };
        for (i, v) in body_vars.iter().enumerate() {
            declare(v, Atom::Body(i))?;
        }
        for g in &odd_gens {
            declare(g, Atom::Odd(odd_names.len()))?;
            odd_names.push(g.clone());
        }
        for (g, p) in &poly_gens {
            if p.is_odd() {
                declare(g, Atom::Odd(odd_names.len()))?;
                odd_names.push(g.clone());
            }
        }
        for (g, p) in &poly_gens {
            if !p.is_odd() {
                declare(g, Atom::Even(even_names.len()))?;
                even_names.push(g.clone());
            }
        }
        let mut den_names = std::collections::BTreeSet::new();
        for d in &denominators {
            if !valid_name(&d.name) || atoms.contains_key(&d.name) || !den_names.insert(&d.name) {
                return Err(Error::InvalidSpec(format!(
                    "denominator name `{}` is invalid or already used",
                    d.name
                )));
            }
        }
        if odd_names.len() > MAX_ODD_SLOTS {
            return Err(Error::InvalidSpec(format!(
                "{} odd slots exceed the supported {MAX_ODD_SLOTS}",
                odd_names.len()
            )));
        }
        if even_names.len() > u16::MAX as usize {
            return Err(Error::InvalidSpec("too many even generators".into()));
        }
        Ok(SuperRingSpec {
            body_vars,
            odd_gens,
            poly_gens,
            denominators,
            atoms,
            odd_names,
            even_names,
            even_subring: OnceLock::new(),
        })
    }

    /// Returns a copy of this ring localized at the given pure-even
    /// polynomial elements, each addressable by name.
    pub fn with_denominators(
        self: &Arc<Self>,
        dens: impl IntoIterator<Item = (String, SuperElem)>,
    ) -> Result<Arc<SuperRingSpec>> {
        let mut list = self.denominators.clone();
        for (name, e) in dens {
            if !Arc::ptr_eq(e.ring(), self) && **e.ring() != **self {
                return Err(Error::RingMismatch);
            }
            if e.den().iter().any(|&k| k > 0) {
                return Err(Error::InvalidSpec(format!("denominator `{name}` must be a polynomial")));
            }
            if e.is_zero() || e.terms().any(|(m, _)| m.odd != 0) {
                return Err(Error::InvalidSpec(format!(
                    "denominator `{name}` must be a nonzero even polynomial without odd part"
                )));
            }
            list.push(Denominator { name, terms: e.terms_map().clone() });
        }
        SuperRingSpec::new(self.body_vars.clone(), self.odd_gens.clone(), self.poly_gens.clone(), list)
            .map(Arc::new)
    }

    /// Returns a copy with extra polynomial generators appended. Existing
    /// slots and denominators keep their positions.
    pub fn extend(self: &Arc<Self>, poly: impl IntoIterator<Item = (String, Parity)>) -> Result<Arc<SuperRingSpec>> {
        let mut gens = self.poly_gens.clone();
        gens.extend(poly);
        SuperRingSpec::new(self.body_vars.clone(), self.odd_gens.clone(), gens, self.denominators.clone()).map(Arc::new)
    }

    pub fn body_vars(&self) -> &[String] {
        &self.body_vars
    }

    pub fn odd_gens(&self) -> &[String] {
        &self.odd_gens
    }

    pub fn poly_gens(&self) -> &[(String, Parity)] {
        &self.poly_gens
    }

    pub fn denominators(&self) -> &[Denominator] {
        &self.denominators
    }

    pub fn num_body(&self) -> usize {
        self.body_vars.len()
    }

    pub fn num_odd_slots(&self) -> usize {
        self.odd_names.len()
    }

    pub fn num_even(&self) -> usize {
        self.even_names.len()
    }

    pub fn num_dens(&self) -> usize {
        self.denominators.len()
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.atoms.get(name).copied()
    }

    pub fn denominator_index(&self, name: &str) -> Option<usize> {
        self.denominators.iter().position(|d| d.name == name)
    }

    pub fn atom_name(&self, atom: Atom) -> &str {
        match atom {
            Atom::Body(i) => &self.body_vars[i],
            Atom::Odd(i) => &self.odd_names[i],
            Atom::Even(i) => &self.even_names[i],
        }
    }

    pub fn atom_parity(&self, atom: Atom) -> Parity {
        match atom {
            Atom::Odd(_) => Parity::Odd,
            _ => Parity::Even,
        }
    }

    /// All atoms in declaration-stable order: body, odd slots, even.
    pub fn all_atoms(&self) -> Vec<Atom> {
        (0..self.body_vars.len())
            .map(Atom::Body)
            .chain((0..self.odd_names.len()).map(Atom::Odd))
            .chain((0..self.even_names.len()).map(Atom::Even))
            .collect()
    }

    /// The purely even ring obtained by discarding every odd generator and
    /// every odd-overridden polynomial generator.
    pub fn even_subring(&self) -> Arc<SuperRingSpec> {
        self.even_subring
            .get_or_init(|| {
                let poly: Vec<_> =
                    self.poly_gens.iter().filter(|(_, p)| !p.is_odd()).cloned().collect();
                Arc::new(
                    SuperRingSpec::new(
                        self.body_vars.clone(),
                        Vec::new(),
                        poly,
                        self.denominators.clone(),
                    )
                    .expect("subring of a valid ring is valid"),
                )
            })
            .clone()
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}
