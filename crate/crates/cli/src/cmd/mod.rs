pub mod automaton;
pub mod demo;
pub mod gp;
pub mod ip;
pub mod orbit;
pub mod recurrence;
pub mod sparsity;
pub mod verify;
