//! Two-qubit Ising gates built from single-qubit composite rotations.
//!
//! Free evolution under `πJ·2IzSz` for a time `τ` acts on spin S as a
//! z-rotation by `±πJτ`, with the sign set by the state of spin I. Time is
//! counted in units of `t = 1/4J`, so one unit is a 45° effective rotation
//! and the naive 90° Ising gate is a `2t` delay. A composite-rotation
//! element `α_φ` becomes a delay of `α/(π/4)` units sandwiched between
//! y-pulses of flip angle `|φ|` on one spin, which tilts the effective
//! rotation axis away from z by `φ`.
//!
//! Spin 0 is the first tensor factor (I), spin 1 the second (S). The basis
//! order is `|00⟩, |01⟩, |10⟩, |11⟩`.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::sequences::{normalize_phase, Family, PulseSequence};

/// Effective rotation angle of one `t = 1/4J` unit of free evolution.
pub const RADIANS_PER_T_UNIT: f64 = FRAC_PI_4;

/// Spin that carries the phase pulses unless told otherwise.
pub const DEFAULT_PHASE_SPIN: usize = 1;

const MERGE_EPS: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitPropagator {
    pub m: [[Complex64; 4]; 4],
}

impl TwoQubitPropagator {
    pub fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Self { m }
    }

    pub fn diagonal(d: [Complex64; 4]) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = d[i];
        }
        Self { m }
    }

    /// `a ⊗ b` for 2×2 blocks.
    pub fn kron(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = a[r / 2][c / 2] * b[r % 2][c % 2];
            }
        }
        Self { m }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.m[r][k] * other.m[k][c]).sum();
            }
        }
        Self { m }
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = self.m[c][r].conj();
            }
        }
        Self { m }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            m: self.m.map(|row| row.map(|z| z * s)),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.m[i][i]).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity()) <= tol
    }

    /// Propagator fidelity `|Tr(V†U)| / 4`, clamped to `[0, 1]`.
    pub fn fidelity(&self, reference: &Self) -> f64 {
        (reference.adjoint().matmul(self).trace().norm() / 4.0).min(1.0)
    }
}

/// Free evolution under `πJ(1+g)·2IzSz` for `duration` units of `t = 1/4J`.
pub fn ising_evolution(duration: f64, g: f64) -> Result<TwoQubitPropagator> {
    finite("free evolution duration", duration)?;
    if duration <= 0.0 {
        return Err(Error::Duration(duration));
    }
    Ok(evolution_unchecked(duration, g))
}

fn evolution_unchecked(duration: f64, g: f64) -> TwoQubitPropagator {
    // 2IzSz has eigenvalues +1/2, −1/2, −1/2, +1/2.
    let half_angle = 0.5 * RADIANS_PER_T_UNIT * duration * (1.0 + g);
    let minus = Complex64::from_polar(1.0, -half_angle);
    let plus = Complex64::from_polar(1.0, half_angle);
    TwoQubitPropagator::diagonal([minus, plus, plus, minus])
}

/// The ideal Ising gate `exp(−iθ·2IzSz)`; `θ = π/2` is the naive `2t` gate.
pub fn ideal_ising_gate(theta: f64) -> TwoQubitPropagator {
    evolution_unchecked(theta / RADIANS_PER_T_UNIT, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "+y")]
    PlusY,
    #[serde(rename = "-y")]
    MinusY,
}

impl Axis {
    pub fn sign(self) -> f64 {
        match self {
            Axis::PlusY => 1.0,
            Axis::MinusY => -1.0,
        }
    }

    fn from_sign(s: f64) -> Self {
        if s < 0.0 {
            Axis::MinusY
        } else {
            Axis::PlusY
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::PlusY => "+y",
            Axis::MinusY => "-y",
        }
    }
}

fn check_spin(spin: usize) -> Result<usize> {
    if spin < 2 {
        Ok(spin)
    } else {
        Err(Error::Spin(spin))
    }
}

/// `exp(−i·s·angle·σy/2)` on `spin`, identity on the other spin.
pub fn y_pulse_propagator(spin: usize, angle: f64, axis: Axis) -> Result<TwoQubitPropagator> {
    check_spin(spin)?;
    finite("pulse angle", angle)?;
    Ok(y_pulse_unchecked(spin, angle, axis))
}

fn y_pulse_unchecked(spin: usize, angle: f64, axis: Axis) -> TwoQubitPropagator {
    let (s, c) = (0.5 * axis.sign() * angle).sin_cos();
    let ry = [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ];
    let id = [[ONE, ZERO], [ZERO, ONE]];
    if spin == 0 {
        TwoQubitPropagator::kron(&ry, &id)
    } else {
        TwoQubitPropagator::kron(&id, &ry)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScheduleItem {
    /// Free evolution for `duration` units of `t = 1/4J`.
    FreeEvolution { duration: f64 },
    /// Hard y-pulse on one spin, angle in `(0, 2π)`.
    YPulse { spin: usize, angle: f64, axis: Axis },
}

impl ScheduleItem {
    fn signed_angle(&self) -> Option<(usize, f64)> {
        match *self {
            ScheduleItem::YPulse { spin, angle, axis } => Some((spin, axis.sign() * angle)),
            ScheduleItem::FreeEvolution { .. } => None,
        }
    }

    /// Propagator of this item with coupling error `g` (pulses are exact).
    pub fn propagator(&self, g: f64) -> TwoQubitPropagator {
        match *self {
            ScheduleItem::FreeEvolution { duration } => evolution_unchecked(duration, g),
            ScheduleItem::YPulse { spin, angle, axis } => y_pulse_unchecked(spin, angle, axis),
        }
    }
}

/// How the clean-up pass treats adjacent y-pulses on the same spin.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PulseMerge {
    /// Remove inverse pairs only; same-sense pulses stay as separate boxes.
    #[default]
    CancelOnly,
    /// Also add same-spin neighbours into a single pulse.
    Combine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsingSchedule {
    pub items: Vec<ScheduleItem>,
    pub family: Family,
    pub target_angle: f64,
    pub phase_spin: usize,
}

impl IsingSchedule {
    pub fn total_duration(&self) -> f64 {
        self.items
            .iter()
            .map(|it| match it {
                ScheduleItem::FreeEvolution { duration } => *duration,
                ScheduleItem::YPulse { .. } => 0.0,
            })
            .sum()
    }

    pub fn pulse_angles(&self) -> Vec<f64> {
        self.items
            .iter()
            .filter_map(|it| match it {
                ScheduleItem::YPulse { angle, .. } => Some(*angle),
                ScheduleItem::FreeEvolution { .. } => None,
            })
            .collect()
    }

    /// Pulse angles that are neither `|φ|` nor `2|φ|` for the given phase.
    pub fn unexpected_pulse_angles(&self, phase: f64, tol: f64) -> Vec<f64> {
        let phi = phase.abs();
        self.pulse_angles()
            .into_iter()
            .filter(|a| (a - phi).abs() > tol && (a - 2.0 * phi).abs() > tol)
            .collect()
    }

    /// Ordered product of the item propagators; `g` scales the couplings only.
    pub fn propagator(&self, g: f64) -> TwoQubitPropagator {
        self.items
            .iter()
            .fold(TwoQubitPropagator::identity(), |acc, it| it.propagator(g).matmul(&acc))
    }

    pub fn ideal_gate(&self) -> TwoQubitPropagator {
        ideal_ising_gate(self.target_angle)
    }

    /// Run the pulse clean-up pass again (a no-op on compiler output).
    pub fn simplified(&self, merge: PulseMerge) -> IsingSchedule {
        IsingSchedule {
            items: simplify(&self.items, merge),
            ..self.clone()
        }
    }

    pub fn export(&self) -> ScheduleExport {
        ScheduleExport {
            family: self.family,
            theta_deg: self.target_angle.to_degrees(),
            total_t_units: self.total_duration(),
            items: self
                .items
                .iter()
                .map(|it| match *it {
                    ScheduleItem::FreeEvolution { duration } => ExportItem::Delay { t_units: duration },
                    ScheduleItem::YPulse { spin, angle, axis } => ExportItem::Pulse {
                        spin,
                        angle_deg: angle.to_degrees(),
                        axis,
                    },
                })
                .collect(),
        }
    }
}

impl fmt::Display for IsingSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .items
            .iter()
            .map(|it| match it {
                ScheduleItem::FreeEvolution { duration } => format!("[{duration}t]"),
                ScheduleItem::YPulse { spin, angle, axis } => {
                    format!("{:.1}{}@{}", angle.to_degrees(), axis.label(), spin)
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Schedule interchange format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleExport {
    pub family: Family,
    pub theta_deg: f64,
    pub total_t_units: f64,
    pub items: Vec<ExportItem>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ExportItem {
    Delay { t_units: f64 },
    Pulse { spin: usize, angle_deg: f64, axis: Axis },
}

/// Compile a composite x-rotation into an Ising gate schedule with the phase
/// pulses on `phase_spin`, removing inverse pulse pairs.
pub fn compile_ising(seq: &PulseSequence, phase_spin: usize) -> Result<IsingSchedule> {
    compile_ising_with(seq, phase_spin, PulseMerge::default())
}

pub fn compile_ising_with(seq: &PulseSequence, phase_spin: usize, merge: PulseMerge) -> Result<IsingSchedule> {
    let spin = check_spin(phase_spin)?;
    let mut raw = Vec::with_capacity(3 * seq.elements().len());
    for e in seq.elements() {
        if e.angle <= 0.0 {
            continue;
        }
        let phase = normalize_phase(e.phase);
        if phase.abs() >= TAU {
            return Err(Error::PhaseRepresentation(e.phase));
        }
        let delay = ScheduleItem::FreeEvolution {
            duration: e.angle / RADIANS_PER_T_UNIT,
        };
        if phase == 0.0 {
            raw.push(delay);
        } else {
            let axis = Axis::from_sign(phase);
            let angle = phase.abs();
            raw.push(ScheduleItem::YPulse { spin, angle, axis });
            raw.push(delay);
            raw.push(ScheduleItem::YPulse {
                spin,
                angle,
                axis: Axis::from_sign(-phase),
            });
        }
    }
    Ok(IsingSchedule {
        items: simplify(&raw, merge),
        family: seq.family(),
        target_angle: seq.target_angle(),
        phase_spin: spin,
    })
}

fn pulse_from_signed(spin: usize, signed: f64) -> Option<ScheduleItem> {
    // Whole turns only change the global phase.
    let a = signed % TAU;
    if a.abs() <= MERGE_EPS || (TAU - a.abs()) <= MERGE_EPS {
        return None;
    }
    Some(ScheduleItem::YPulse {
        spin,
        angle: a.abs(),
        axis: Axis::from_sign(a),
    })
}

fn simplify(items: &[ScheduleItem], merge: PulseMerge) -> Vec<ScheduleItem> {
    let mut out: Vec<ScheduleItem> = Vec::with_capacity(items.len());
    for item in items {
        match (*item, out.last().copied()) {
            (ScheduleItem::FreeEvolution { duration }, Some(ScheduleItem::FreeEvolution { duration: prev })) => {
                out.pop();
                out.push(ScheduleItem::FreeEvolution {
                    duration: prev + duration,
                });
            }
            (ScheduleItem::YPulse { .. }, Some(prev @ ScheduleItem::YPulse { .. })) => {
                let (spin, a) = item.signed_angle().expect("pulse");
                let (prev_spin, b) = prev.signed_angle().expect("pulse");
                if spin != prev_spin {
                    out.push(*item);
                } else if (a + b).abs() <= MERGE_EPS {
                    out.pop();
                    // Removing a pair can leave two delays side by side.
                    if let [.., ScheduleItem::FreeEvolution { duration: d1 }, ScheduleItem::FreeEvolution { duration: d2 }] =
                        out[..]
                    {
                        out.truncate(out.len() - 2);
                        out.push(ScheduleItem::FreeEvolution { duration: d1 + d2 });
                    }
                } else if merge == PulseMerge::Combine {
                    out.pop();
                    if let Some(p) = pulse_from_signed(spin, a + b) {
                        out.push(p);
                    }
                } else {
                    out.push(*item);
                }
            }
            _ => out.push(*item),
        }
    }
    out
}
