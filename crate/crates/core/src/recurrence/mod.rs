//! Generalised-polynomial sets built from linear recurrences.

mod pisot;
mod quadratic;

pub use pisot::{
    best_approximations, cubic_terms, dominant_coefficient, mwzor_checks, nearest_power_set_equiv, pisot_cubic_check,
    pisot_gp_set, rauzy_norm, BestApproxRecord, MwzorCheck, NearestPowerReport, PisotCubicParams, PisotGp,
    PisotSummary, PisotThreshold, TranslationCheck,
};
pub use quadratic::{
    fibonacci_like_set, fibonacci_scan, quadratic_terms, quadratic_terms_below, tail_start, term_checks, FibScan,
    Lawnmower, QuadraticParams, TermCheck,
};

#[cfg(test)]
mod tests;
