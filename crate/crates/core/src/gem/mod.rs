//! Exact solutions of the gradient echo memory in the long-pulse regime.
//!
//! Positions are measured from the entrance face, `z ∈ [0, L]`; the
//! detuning at `z` is `β (z − L/2) + ω_m`. The coherence is reported as
//! the polarization `P = g* N S`, the source term of the field equation
//! `∂a/∂z = P`, which depends on the coupling only through `|g|² N`.
//! Storage runs for `t ≤ 0`; at `t = 0` the gradient switches to `β'`
//! and the frequency shift to `ω'_m`.

mod closed;
mod params;
mod retrieval;
mod storage;

pub use closed::{DeltaInput, ExpDecayInput};
pub use params::{GemParams, RetrievalParams};
pub use retrieval::{
    general_field_kernel, retrieval_echo, retrieval_general, retrieval_kernel, RetrievalSolution,
};
pub use storage::{
    coherence_impulse_response, field_impulse_response, storage_evolve, storage_output,
    StorageSolution,
};
