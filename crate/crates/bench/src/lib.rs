//! Inputs shared by the benchmarks in `benches/`.

use nilseq_core::genpoly::{parse_gp, GpExpr};
use nilseq_core::numeric::{ExactReal, PrecisionPolicy};
use nilseq_core::Result;

pub fn policy() -> PrecisionPolicy {
    PrecisionPolicy::with_max_bits(1024)
}

pub fn sqrt(n: i64) -> Result<ExactReal> {
    ExactReal::int(n).sqrt()
}

/// `2 + √2⌊√3n² + 1/7⌋² + n⌊n³ + π⌋`.
pub fn mixed_expr() -> Result<GpExpr> {
    parse_gp("(+ 2 (+ (* (sqrt 2) (pow (floor (+ (* (sqrt 3) (pow n 2)) 1/7)) 2)) (* n (floor (+ (pow n 3) pi)))))")
}

/// `⌊√2n⌊√3n⌋⌋`.
pub fn nested_floor() -> Result<GpExpr> {
    parse_gp("(floor (* (sqrt 2) n (floor (* (sqrt 3) n))))")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        assert!(mixed_expr().is_ok());
        assert!(nested_floor().is_ok());
        assert!(sqrt(2).is_ok());
    }
}
