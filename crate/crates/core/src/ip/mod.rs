//! Finite sums, shifted finite sums and finite-depth containment checks.
//!
//! All results are certificates to a stated depth; infinite IP structures are
//! only ever approximated by their first generators.

mod fixture;
mod fs;
mod membership;

pub use fixture::{ips_fixture, ips_fixture_member, pair_obstruction, PairObstruction};
pub use fs::{
    contains_fs, divisibility_obstruction, finite_sums, pigeonhole_multiple, power_generators, shifted_finite_sums,
    FsCheck, IpGenerators, IpsFamily, Obstruction, ShiftedSum, DEFAULT_DEPTH, SUM_BUDGET,
};
pub use membership::{FnMembership, Membership, SeqMembership};

#[cfg(test)]
mod tests;
