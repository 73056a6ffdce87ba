//! Exact arithmetic in iterated wreath products and decision procedures for
//! power words, periodic words, knapsack expressions and the ∃∀-SAT reductions.

pub mod error;
pub mod group;
pub mod hardness;
pub mod knapsack;
pub mod par;
pub mod periodic;
pub mod powerword;
pub mod sweep;

pub use error::{Error, Result};
pub use group::{CanonicalKey, Element, GeneratorToken, GroupDescriptor, Letter, Structure, Word};
pub use powerword::PowerWord;
