use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("target angle {0} rad is outside (0, 2π]")]
    TargetAngle(f64),

    #[error("phase formula argument {0} is outside [-1, 1]")]
    PhaseDomain(f64),

    #[error("expansion point must be 0 or -1, got {0}")]
    ExpansionPoint(f64),

    #[error("derivative order {requested} is not supported (1..={max})")]
    Order { requested: usize, max: usize },

    #[error("invalid curve range [{g_min}, {g_max}] with {samples} samples")]
    CurveRange { g_min: f64, g_max: f64, samples: usize },

    #[error("infidelity tolerance must lie in (0, 1), got {0}")]
    Tolerance(f64),

    #[error("sequence does not implement its target at g = 0 (fidelity {0})")]
    OffTarget(f64),

    #[error("free evolution duration must be positive, got {0}")]
    Duration(f64),

    #[error("spin index {0} is out of range (0 or 1)")]
    Spin(usize),

    #[error("phase {0} rad has no y-pulse representation")]
    PhaseRepresentation(f64),

    #[error("unknown sequence family `{0}`")]
    UnknownFamily(String),
}

pub(crate) fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
