//! Base-`pq` cellular automata `G_{p,q}` and `F_{p,q}`.
//!
//! Multiplication by `p/q` on base-`pq` expansions is computed digit by digit
//! by `G_{p,q}`; its two-step composite `F_{p,q}` is a reversible automaton
//! whose inverse is `F_{q,p}`. This crate provides exact arithmetic on words
//! and finite configurations, simulation, trace languages and their decoding,
//! interval-set constructions and exhaustive or sampled verification
//! routines.

pub mod arith;
pub mod ca;
pub mod cone;
pub mod error;
pub mod exec;
pub mod intervals;
pub mod trace;
pub mod verify;

pub use arith::{Digit, FiniteConfig, Params, Rat, Word};
pub use error::{Error, Result};
pub use exec::{Exec, Options};
pub use intervals::IntervalSet;
pub use trace::TraceWord;
pub use verify::Report;
