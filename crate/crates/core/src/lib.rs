//! Composite rotations that tolerate systematic rotation-rate errors or
//! suppress weak couplings, and their compilation into two-qubit Ising gates.
//!
//! * [`rotor`]: unit quaternions and a 2×2 unitary cross-check.
//! * [`sequences`]: simple, BB1, NB1 and PB1 builders and the error model.
//! * [`analysis`]: series-cancellation checks, fidelity curves, ε/δ thresholds.
//! * [`ising`]: Ising gate schedules and 4×4 propagators.

pub mod analysis;
pub mod error;
pub mod ising;
pub mod rotor;
pub mod sequences;

pub use analysis::{
    error_expansion, fidelity_curve, threshold_delta, threshold_epsilon, threshold_report, CurvePoint, ExpansionPoint,
    ExpansionReport, Threshold, ThresholdReport, DEFAULT_TOLERANCE,
};
pub use error::{Error, Result};
pub use ising::{
    compile_ising, ising_evolution, y_pulse_propagator, Axis, IsingSchedule, ScheduleItem, TwoQubitPropagator,
};
pub use rotor::{Quaternion, UnitaryOracle};
pub use sequences::{Branch, ErrorModel, Family, PulseElement, PulseSequence};
