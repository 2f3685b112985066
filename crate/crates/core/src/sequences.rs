//! Composite rotation builders and the systematic rotation-rate error model.
//!
//! Every family replaces a simple `θ_x` rotation with `(θ/2)_x C (θ/2)_x`,
//! where the correction block `C` is a product of full turns that does
//! nothing when the rotation rate is exact.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::rotor::{compose, Quaternion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Simple,
    Bb1,
    Nb1,
    Pb1,
    Custom,
}

impl Family {
    /// The four families with closed-form builders.
    pub const BUILT_IN: [Family; 4] = [Family::Simple, Family::Bb1, Family::Nb1, Family::Pb1];

    pub fn name(self) -> &'static str {
        match self {
            Family::Simple => "simple",
            Family::Bb1 => "bb1",
            Family::Nb1 => "nb1",
            Family::Pb1 => "pb1",
            Family::Custom => "custom",
        }
    }

    /// Build this family's sequence for `theta`. `Custom` has no builder.
    pub fn build(self, theta: f64, branch: Branch) -> Result<PulseSequence> {
        match self {
            Family::Simple => PulseSequence::simple(theta),
            Family::Bb1 => PulseSequence::bb1(theta, branch),
            Family::Nb1 => PulseSequence::nb1(theta, branch),
            Family::Pb1 => PulseSequence::pb1(theta, branch),
            Family::Custom => Err(Error::UnknownFamily("custom".into())),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "simple" => Ok(Family::Simple),
            "bb1" => Ok(Family::Bb1),
            "nb1" => Ok(Family::Nb1),
            "pb1" => Ok(Family::Pb1),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// Branch of the `±arccos(…)` phase solution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// One constituent rotation: `angle` about `(cos phase, sin phase, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseElement {
    pub angle: f64,
    pub phase: f64,
}

impl PulseElement {
    pub const fn new(angle: f64, phase: f64) -> Self {
        Self { angle, phase }
    }

    pub fn quaternion(&self) -> Quaternion {
        Quaternion::pulse_unchecked(self.angle, self.phase)
    }
}

/// Fractional error `g` in the rotation rate (or coupling constant).
///
/// `λ = 1 + g` is the realised fraction of the nominal rate; `g = −1` means
/// the rotation (coupling) vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorModel {
    pub g: f64,
}

impl ErrorModel {
    pub const EXACT: ErrorModel = ErrorModel { g: 0.0 };
    pub const VANISHING: ErrorModel = ErrorModel { g: -1.0 };

    pub fn new(g: f64) -> Self {
        Self { g }
    }

    pub fn from_coupling_fraction(lambda: f64) -> Self {
        Self { g: lambda - 1.0 }
    }

    pub fn coupling_fraction(&self) -> f64 {
        1.0 + self.g
    }

    /// Whether `λ ≥ 0`; other values are only meaningful for plots.
    pub fn is_physical(&self) -> bool {
        self.coupling_fraction() >= 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    elements: Vec<PulseElement>,
    family: Family,
    target_angle: f64,
    branch: Branch,
}

fn check_target(theta: f64) -> Result<f64> {
    finite("target angle", theta)?;
    if theta > 0.0 && theta <= TAU {
        Ok(theta)
    } else {
        Err(Error::TargetAngle(theta))
    }
}

fn arccos_phase(arg: f64, branch: Branch) -> Result<f64> {
    if !(-1.0..=1.0).contains(&arg) {
        return Err(Error::PhaseDomain(arg));
    }
    Ok(branch.sign() * arg.acos())
}

/// `φ₁ = ±arccos(−θ/4π)`, shared by BB1 and NB1.
pub fn first_order_phase(theta: f64, branch: Branch) -> Result<f64> {
    arccos_phase(-theta / (4.0 * PI), branch)
}

/// `φ₁ = ±arccos(−θ/8π)` for PB1.
pub fn passband_phase(theta: f64, branch: Branch) -> Result<f64> {
    arccos_phase(-theta / (8.0 * PI), branch)
}

/// Map a phase onto `(−π, π]`.
pub fn normalize_phase(phase: f64) -> f64 {
    let mut p = phase.rem_euclid(TAU);
    if p > PI {
        p -= TAU;
    }
    p
}

impl PulseSequence {
    /// A bare `θ_x` rotation.
    pub fn simple(theta: f64) -> Result<Self> {
        let theta = check_target(theta)?;
        Ok(Self {
            elements: vec![PulseElement::new(theta, 0.0)],
            family: Family::Simple,
            target_angle: theta,
            branch: Branch::Plus,
        })
    }

    /// `(θ/2)_x 180_φ₁ 360_3φ₁ 180_φ₁ (θ/2)_x`.
    pub fn bb1(theta: f64, branch: Branch) -> Result<Self> {
        let theta = check_target(theta)?;
        let phi = first_order_phase(theta, branch)?;
        Ok(Self::wrapped(
            theta,
            Family::Bb1,
            branch,
            [(PI, phi), (TAU, 3.0 * phi), (PI, phi)],
        ))
    }

    /// `(θ/2)_x 180_φ₁ 360_−φ₁ 180_φ₁ (θ/2)_x`.
    pub fn nb1(theta: f64, branch: Branch) -> Result<Self> {
        let theta = check_target(theta)?;
        let phi = first_order_phase(theta, branch)?;
        Ok(Self::wrapped(
            theta,
            Family::Nb1,
            branch,
            [(PI, phi), (TAU, -phi), (PI, phi)],
        ))
    }

    /// `(θ/2)_x 360_φ₁ 720_−φ₁ 360_φ₁ (θ/2)_x`.
    pub fn pb1(theta: f64, branch: Branch) -> Result<Self> {
        let theta = check_target(theta)?;
        let phi = passband_phase(theta, branch)?;
        Ok(Self::wrapped(
            theta,
            Family::Pb1,
            branch,
            [(TAU, phi), (2.0 * TAU, -phi), (TAU, phi)],
        ))
    }

    fn wrapped(theta: f64, family: Family, branch: Branch, correction: [(f64, f64); 3]) -> Self {
        let half = PulseElement::new(0.5 * theta, 0.0);
        let mut elements = Vec::with_capacity(5);
        elements.push(half);
        elements.extend(correction.iter().map(|&(a, p)| PulseElement::new(a, p)));
        elements.push(half);
        Self {
            elements,
            family,
            target_angle: theta,
            branch,
        }
    }

    /// An arbitrary user sequence meant to implement `target_angle` about x.
    pub fn custom(elements: Vec<PulseElement>, target_angle: f64) -> Result<Self> {
        finite("target angle", target_angle)?;
        for e in &elements {
            finite("pulse angle", e.angle)?;
            finite("pulse phase", e.phase)?;
        }
        Ok(Self {
            elements,
            family: Family::Custom,
            target_angle,
            branch: Branch::Plus,
        })
    }

    pub fn elements(&self) -> &[PulseElement] {
        &self.elements
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn target_angle(&self) -> f64 {
        self.target_angle
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// `φ₁` of a built-in composite family (phase of the first correction pulse).
    pub fn first_phase(&self) -> Option<f64> {
        match self.family {
            Family::Bb1 | Family::Nb1 | Family::Pb1 => self.elements.get(1).map(|e| e.phase),
            Family::Simple | Family::Custom => None,
        }
    }

    pub fn total_angle(&self) -> f64 {
        self.elements.iter().map(|e| e.angle).sum()
    }

    /// Whether the element angles read the same forwards and backwards.
    pub fn is_time_symmetric(&self) -> bool {
        let n = self.elements.len();
        (0..n / 2).all(|i| self.elements[i].angle == self.elements[n - 1 - i].angle)
    }

    /// Scale every rotation angle by `1 + g`; phases are untouched.
    pub fn apply_error(&self, g: f64) -> PulseSequence {
        let scale = 1.0 + g;
        PulseSequence {
            elements: self
                .elements
                .iter()
                .map(|e| PulseElement::new(e.angle * scale, e.phase))
                .collect(),
            ..self.clone()
        }
    }

    /// Net rotation of the sequence under rate error `g`.
    pub fn net_quaternion(&self, g: f64) -> Quaternion {
        let scale = 1.0 + g;
        compose(
            self.elements
                .iter()
                .map(|e| Quaternion::pulse_unchecked(e.angle * scale, e.phase)),
        )
    }

    /// The rotation this sequence is meant to implement, `θ_x`.
    pub fn ideal(&self) -> Quaternion {
        Quaternion::pulse_unchecked(self.target_angle, 0.0)
    }
}
