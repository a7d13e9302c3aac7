//! Generalised polynomials: expressions, rigorous evaluation, indicator
//! constructions and empirical probes.

mod analysis;
mod expr;
mod parse;
mod seq;

pub use analysis::{
    density_estimate, equidistribution_test, kernel_census, set_compare, star_discrepancy, weak_periodicity_search,
    DensityReport, DensitySample, EquidistReport, KernelCensus, SetComparison, WeakPeriodicity, COMPARE_SAMPLE_CAP,
};
pub use expr::{indicator_zero_set, window_indicator, zero_test, CmpOp, GpExpr, GpNode, GpPredicate, GpValue};
pub use parse::{parse_gp, parse_rational};
pub use seq::{
    floor_poly_mod, DfaoSequence, FloorPolyMod, FnSequence, GpSequence, IntSequence, PredicateSequence, ZeroSetTwin,
};

#[cfg(test)]
mod tests;
