//! Exact tools for comparing spectral sets and translational tiles.
//!
//! The finite layer works in `Z_{n_1} x ... x Z_{n_d}` with exact cyclotomic
//! arithmetic; the lattice and continuum layers lift a finite spectral set to
//! a periodic subset of `Z^n` and to a union of unit cubes in `R^n`.

pub mod continuum;
pub mod cyclotomic;
pub mod group;
pub mod hadamard;
pub mod lattice;
pub mod scan;
pub mod spectra;
pub mod tiling;

pub use continuum::{
    build_omega2, export_geometry, geometry_json, import_geometry, inner_product_is_zero,
    truncated_spectrum, verify_spectrum_truncation, ContinuumError, CubeUnion, ExtendedFrequency,
    FrequencyDifference, PairSelection,
};
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicInt, MAX_CYCLOTOMIC_ORDER};
pub use group::{GroupElement, GroupError, GroupSpec, MAX_EXHAUSTIVE_ORDER};
pub use hadamard::{
    descend, pad_dimension, spectrum_from_butson, standard_h12, standard_h6, verify_butson,
    ButsonMatrix, HadamardError, SpectralPair,
};
pub use lattice::{
    build_lambda1, build_omega1, cell_count_check, density_check, lattice_character_sum,
    pair_vanishes_direct, pair_vanishes_factorized, torus_image, torus_non_tiling,
    verify_ortho_factorized, verify_ortho_lattice, window_count, DensityReport, FrequencySet,
    FrequencyVector, LatticeConfig, LatticeError, LatticeSet, LiftedSet, OrthoCheck, Ratio,
    WindowScan,
};
pub use scan::{
    canonical_translate, classify, fuglede_scan, fuglede_scan_with, scan_sets, ScanError,
    ScanOptions, ScanRecord, ScanReport, ScanSummary, MAX_SCAN_ORDER,
};
pub use spectra::{
    find_spectrum, fourier_zero_set, is_spectrum, NotSpectralReason, SpectrumCheck, SpectrumError,
    SpectrumSearch, SpectrumWitness, DEFAULT_NODE_BUDGET, MAX_SPECTRUM_SET,
};
pub use tiling::{
    divisibility_check, find_tiling, search_tiling_complement, tiling_defect, verify_tiling,
    CoverDefect, DivisibilityObstruction, NonTilingCertificate, TilingError, TilingResult,
    MAX_TILING_ORDER,
};
