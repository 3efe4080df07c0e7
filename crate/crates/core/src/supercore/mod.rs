//! Exact arithmetic in finitely generated supercommutative rings over
//! ℚ(t₁..t_k), localized at named even denominators.

mod derivation;
mod elem;
pub mod expr;
pub mod poly;
mod ring;

pub use derivation::Derivation;
pub use elem::{odd_merge_sign, rational_coordinates, EvenExps, Mono, SuperElem, Terms};
pub(crate) use elem::{q_int, terms_add_term};
pub use poly::{Poly, RatFunc};
pub use ring::{Atom, Denominator, Parity, RingBuilder, SuperRingSpec, MAX_ODD_SLOTS};
