//! Constellation-constrained sum capacity of the two-user Gaussian multiple
//! access channel under constellation power allocation (CPA).
//!
//! The two users alternate instantaneous power scales `√((2−α)P)` and `√(αP)`
//! across odd and even channel uses. The crate provides:
//!
//! * [`constellation`]: PSK/QAM generators, sum constellations, unique decodability.
//! * [`capacity`]: seeded Monte-Carlo sum-capacity estimators (fixed, conditional
//!   and random phase, CPA-averaged).
//! * [`metric`]: the deterministic high-SNR surrogate `Q(ᾱ)` and its variants.
//! * [`optimizer`]: grid searches for `α*`, `α_opt`, `θ*` and SNR sweeps.
//! * [`demap`]: joint and separable maximum-likelihood demapping.
//! * [`partition`]: two-way PAM set partitioning for trellis-coded pairs.

pub mod capacity;
pub mod constellation;
pub mod demap;
mod error;
pub mod math;
pub mod metric;
pub mod optimizer;
pub mod partition;
pub mod seed;

pub use capacity::{
    cc_sum_capacity, cc_sum_capacity_phase, cc_sum_capacity_random_phase, cpa_sum_capacity, sum_capacity,
    CapacityEstimate, ChannelSpec, CpaConfig, McConfig, PhaseModel,
};
pub use constellation::{
    is_uniquely_decodable, load_constellation, make_8qam, make_psk, make_qam, parse_constellation, rotate,
    sum_constellation, ComplexPoint, Constellation, SumConstellation, UD_TOLERANCE,
};
pub use error::{Error, Result};
