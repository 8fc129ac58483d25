//! Free products of copies of `Z` and `Z/2Z` presented by an alphabet `[d]`
//! with an involution `*`, their reduced words, and the random walk driven by
//! a probability vector on the generators.
//!
//! Letters are 0-based in the API (`0..d`) and 1-based in every text format.

mod alphabet;
mod anisotropy;
mod error;
pub mod rng;
mod trajectory;
mod word;

pub use alphabet::Alphabet;
pub use anisotropy::AnisotropyVector;
pub use error::GroupError;
pub use trajectory::{sample_trajectory, LetterSampler, Trajectory};
pub use word::ReducedWord;

pub type Result<T> = std::result::Result<T, GroupError>;
