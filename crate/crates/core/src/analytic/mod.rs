//! Closed-form diffraction models: the Raman-Nath (thin grating) limit and
//! second-order Bragg diffraction in the weak-coupling limit.

mod bessel;
mod bragg;
mod raman_nath;

pub use bessel::{bessel_j, bessel_j_sequence, MAX_ARGUMENT, MAX_ORDER};
pub use bragg::{
    bragg_apply, design_pi_pulse, effective_two_level, rabi_phase, BraggEffectiveModel, PulseShape,
};
pub use raman_nath::{raman_nath_p_span, raman_nath_state, raman_nath_validity_bound};
