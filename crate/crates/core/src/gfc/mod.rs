//! Gradient frequency combs: `M` thin teeth of thickness `d` spaced by
//! `l0`, tooth `m` detuned by `m δω` (stepwise comb, no internal
//! gradient) or by `βz` inside the tooth (discontinuous comb,
//! `δω = β l0`). Positions are centred on the middle tooth.
//!
//! The medium acts as a linear filter `a(ω) = a_in(ω) e^{−|g|²N F(ω)}`
//! with the Fourier convention `a(ω) ∝ ∫ a(t) e^{iωt} dt`. In the
//! periodic regime the filter expands into an echo train spaced by
//! `T0 = 2π/δω`.

mod echoes;
mod params;
mod transfer;

pub use echoes::{
    discontinuous_crossing, echo_series, eta_first_discontinuous, eta_first_stepwise,
    eta_first_stepwise_zeta, first_five_echoes, optimization_report, thin_echo_amplitudes,
    EchoSeries, OptimizationReport,
};
pub use params::{GfcParams, Variant};
pub use transfer::{propagate_via_transfer, transfer_exponent, transfer_function};
