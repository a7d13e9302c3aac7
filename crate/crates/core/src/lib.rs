//! Automatic sequences, generalised polynomials and the machinery that
//! relates them: automaton analysis, rigorous floor evaluation, explicit
//! recurrence constructions and nilmanifold orbits.

pub mod automaton;
pub mod digits;
pub mod error;
pub mod genpoly;
pub mod ip;
pub mod numeric;
pub mod orbit;
pub mod recurrence;
pub mod sparsity;

pub use automaton::{Dfao, ReadingOrder};
pub use digits::DigitWord;
pub use error::{Error, Result};
