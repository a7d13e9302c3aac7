//! Membership predicates `n ↦ [n ∈ E]`.

use crate::automaton::Dfao;
use crate::error::{Error, Result};
use crate::genpoly::IntSequence;

pub trait Membership: Sync {
    fn member(&self, n: u128) -> Result<bool>;

    fn label(&self) -> String;
}

/// Output 1 means membership.
impl Membership for Dfao {
    fn member(&self, n: u128) -> Result<bool> {
        Ok(self.eval_u128(n) == 1)
    }

    fn label(&self) -> String {
        format!("automaton ({} states, base {})", self.num_states(), self.base())
    }
}

/// Nonzero terms of an integer sequence.
pub struct SeqMembership<S: IntSequence>(pub S);

impl<S: IntSequence> Membership for SeqMembership<S> {
    fn member(&self, n: u128) -> Result<bool> {
        let n = u64::try_from(n).map_err(|_| Error::invalid(format!("index {n} exceeds u64")))?;
        Ok(self.0.at(n)? != 0)
    }

    fn label(&self) -> String {
        self.0.label()
    }
}

pub struct FnMembership<F: Fn(u128) -> bool + Sync> {
    label: String,
    f: F,
}

impl<F: Fn(u128) -> bool + Sync> FnMembership<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        FnMembership { label: label.into(), f }
    }
}

impl<F: Fn(u128) -> bool + Sync> Membership for FnMembership<F> {
    fn member(&self, n: u128) -> Result<bool> {
        Ok((self.f)(n))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}
