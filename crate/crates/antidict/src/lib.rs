//! Antidictionaries of periodic binary words.
//!
//! A bi-infinite periodic word `W = u^∞` over `{a, b}` is pinned down by its
//! canonical system of forbidden words: the minimal words that do *not* occur
//! in `W` (every proper factor of such a word occurs). This crate computes
//! canonical systems, decides whether an arbitrary forbidden-word list defines
//! a unique periodic word, builds the table of forks (factors extendable on
//! both sides by both letters) with its occurrence statistics, and mirrors the
//! combinatorics on an abstract side: integer recurrence systems whose values
//! majorize the occurrence counts and whose maximum is the Fibonacci number
//! `F(n + 1)`. That yields the sharp bound `|u| ≤ F(n + 1)` on the period
//! length of a word whose canonical system has `n + 1` forbidden words, with
//! an explicit extremal family attaining it.
//!
//! The `antidict` binary exposes the same functionality on the command line,
//! including an exhaustive sweep that checks the bounds on every necklace up
//! to a given period length.

pub mod canonical;
mod error;
pub mod extremal;
pub mod forks;
pub mod sweep;
pub mod systems;
pub mod word;

pub use error::Error;
pub use word::{PeriodicWord, Symbol, Word, fibonacci, is_primitive, primitive_root};
