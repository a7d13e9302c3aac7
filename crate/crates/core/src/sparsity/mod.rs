//! Structure of `{n : a_n = 1}` for `{0,1}`-valued automatic sequences.

mod classify;
mod graph;
mod growth;
mod ipplus;
mod ips;
mod normal;
mod pattern;

pub use classify::{
    classify, classify_with_budget, very_sparse_decomposition, Classification, ConditionI, DEFAULT_PATH_BUDGET,
};
pub use graph::{promising_states, PromisingGraph};
pub use growth::{count_below_brute, growth_census, power_grid, Counter, GrowthReport, Regime};
pub use ipplus::{factor_report, factor_universality, ip_plus_witness, FactorReport, IpPlusWitness};
pub use ips::{ips_witness, IpsWitness};
pub use normal::{
    normalize_arith_progression, normalize_with_bound, reduction_replay, Branch, NormalForm, ReductionStep,
};
pub use pattern::{window_count, BasicSet, VerySparseDecomposition, WindowCount};
