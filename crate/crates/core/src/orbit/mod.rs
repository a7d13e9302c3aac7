//! Orbits on the skew torus and the Heisenberg nilmanifold.

mod density;
mod heisenberg;
mod scan;
mod skew;

pub use density::{banach_density_scan, HeisenbergTarget, OrbitDensity, RotationArc, SkewResidue};
pub use heisenberg::{heisenberg_fracpart, matrix_mul, HeisenbergElem, HeisenbergFrac, Matrix3};
pub use scan::{
    heisenberg_hit, horizontal_character_probe, suffix_hit_scan, EpsilonSchedule, HitCertificate, ProbeReport,
    SuffixScan,
};
pub use skew::{
    compare_orbit, residue_indicator, skew_orbit_point, OrbitComparison, SkewOrbit, TorusSkewSystem, AGREEMENT_BITS,
    ITERATION_LIMIT,
};
