//! Continuous wavelet maps of real signals, reconstruction from dual
//! functions, and qubit states built from map coefficients.
//!
//! The pipeline runs [`signal`] → [`transform::forward_cwt`] →
//! [`transform::reconstruct`] / [`qubit::encode_qubit`] →
//! [`relation::relate_product`] and [`relation::classify_bell_condition`].

pub mod error;
pub mod grid;
pub mod map;
pub mod quadrature;
pub mod qubit;
pub mod relation;
pub mod sigfig;
pub mod signal;
pub mod transform;
pub mod wavelet;

pub use error::{EngineError, EngineResult};
pub use grid::{FrequencyGrid, ShiftGrid};
pub use map::{MapMeta, WaveletMap};
pub use qubit::{
    encode_qubit, normalize, qubit_norm, select_peaks, versor_waveform, MapPoint, QubitError,
    Versor, WaveletQubit,
};
pub use relation::{
    classify_bell_condition, entanglement_determinant, is_separated, relate_general,
    relate_product, BellClassification, BellCondition, RelationCoefficients, RelationReport,
    TwoQubitState,
};
pub use signal::{
    load_csv, superpose, synth_burst, BurstSpec, ColumnSpec, SampleGrid, SignalError, TimeSeries,
};
pub use transform::{
    admissibility_constant, delta_kernel, dual_function, dual_function_with, forward_cwt,
    reconstruct, reconstruction_error, AdmissibilityQuadrature, DualBasisFunction,
    ScaleWeighting,
};
pub use wavelet::{AnalyzingWavelet, WaveletKind};
