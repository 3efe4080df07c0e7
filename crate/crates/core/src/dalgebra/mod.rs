//! Lie superalgebras, PBW words of their enveloping algebras, actions by
//! superderivations, convolution, and structure maps of free modules.

mod action;
mod convolve;
mod lie;
mod module;
mod word;

pub use action::{
    apply, apply_seq, check_bracket_compat, check_superleibniz, constants, image_of, DAction, SuperAction,
};
pub use convolve::{convolve, coproduct, Functional};
pub use lie::{check_lie_spec, LieComb, LieSuperSpec};
pub use module::{check_module_consistency, DModule};
pub use word::{is_normal, normal_form, normal_monomials, seq_parity, DWord, Seq};
