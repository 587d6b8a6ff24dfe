//! Sudden quenches of the periodic long-range extended transverse Ising chain.
//!
//! The chain maps to free fermions whose dynamics decouple into 4×4 momentum
//! blocks. From the evolved blocks the crate builds Majorana contraction
//! tables, evaluates spin correlators as Pfaffians, assembles two-site
//! reduced density matrices and their total correlation, and classifies the
//! distance dependence of that correlation. Loschmidt rate functions and
//! their cusps are computed from Bogoliubov overlaps. A brute-force
//! exact-diagonalization oracle in [`oracle`] cross-checks small chains.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*F64` aliases below name the double-precision instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod correlators;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod loschmidt;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod pfaffian;
pub mod scalar;

pub use analysis::{
    cgc_verdict, convergence_exponent, fgc_verdict, finite_size_fit, fit_profile, CgcVerdict, DecayModel,
    EtaReference, FgcOutcome, FgcVerdict, FiniteSizeFit, FitOptions, ScalingVerdict,
};
pub use correlators::{
    build_pfaffian_matrix, contraction_table, correlator_set, correlator_sets, magnetization, ContractionTable,
    CorrelatorKind, CorrelatorSet,
};
pub use error::{Error, Result};
pub use evolution::{
    block_hamiltonian, bogoliubov_pair, evolve, expectation, ground_state, BlockHamiltonian, BlockState,
    BogoliubovPair, ManyBodyState,
};
pub use linalg::CMatrix;
pub use loschmidt::{
    critical_grid_modes, critical_momenta, detect_cusps, match_cusps, predicted_cusp_times, rate_function,
    rate_function_at, CriticalMomentumSource, Cusp, CuspDetector, CuspMatch, PredictedCusp, RateFunction,
};
pub use model::{
    coupling, critical_field_lower, critical_field_upper, dispersion, jk_coupling, kac_normalization,
    FieldPhase, ModelParams, MomentumGrid, QuenchProtocol, RangeRegime,
};
pub use observables::{assemble_two_site, mutual_information, tc_profile, ProfilePoint, TwoSiteState};
pub use pfaffian::{pfaffian, PfaffianValue, SkewMatrix};
pub use scalar::Real;

pub type ModelParamsF64 = ModelParams<f64>;
pub type QuenchProtocolF64 = QuenchProtocol<f64>;
pub type ManyBodyStateF64 = ManyBodyState<f64>;
pub type ContractionTableF64 = ContractionTable<f64>;
pub type CorrelatorSetF64 = CorrelatorSet<f64>;
pub type SkewMatrixF64 = SkewMatrix<f64>;
pub type TwoSiteStateF64 = TwoSiteState<f64>;
pub type ScalingVerdictF64 = ScalingVerdict<f64>;
pub type RateFunctionF64 = RateFunction<f64>;
pub type CMatrixF64 = CMatrix<f64>;
