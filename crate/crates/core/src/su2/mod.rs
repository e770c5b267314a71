//! SU(2) harmonic analysis: Haar quadrature, irreducible representations,
//! the operator-valued Fourier transform, central averages and the
//! end-to-end uncertainty experiment.

pub mod experiment;
pub mod group;
pub mod haar;
pub mod irrep;
pub mod scan;
pub mod transform;

pub use experiment::{uncertainty_experiment, ExperimentParams, ExperimentReport, StepCheck};
pub use group::Su2;
pub use haar::{haar_grid, required_counts, GridShape, HaarGrid};
pub use irrep::{irrep_matrix, CMatrix, IrrepMatrix};
pub use scan::group_scan;
pub use transform::{
    central_average, central_averages, char_expansion, character_traces, fourier_transform,
    fourier_transforms, from_fn, recover_from_translates, synthesize_bandlimited, trace_of_product,
    translated_trace, BandlimitedFunction, FnGroupFunction, GroupFunction, TranslateRecovery,
    Translated,
};
