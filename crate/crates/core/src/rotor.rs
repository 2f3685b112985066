//! Unit quaternions for single-qubit rotations, plus a 2×2 unitary oracle.
//!
//! A unit quaternion `{w, (x, y, z)}` stands for the SU(2) element
//! `w·I − i(x·σx + y·σy + z·σz)`. Under that map the Hamilton product
//! `a * b` is the matrix product `Uₐ·U_b`, so `a * b` means "apply `b`,
//! then `a`". Every composition in this crate uses that order: later
//! rotations multiply from the left.
//!
//! Quaternions `q` and `−q` are the same rotation. Comparisons therefore go
//! through [`Quaternion::fidelity`] or [`Quaternion::approx_eq_up_to_sign`].

use std::ops::{Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Result};

/// Tolerance on `|q|² − 1` accepted by [`Quaternion::is_unit`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    /// The null quaternion `{1, (0, 0, 0)}`: the identity operation.
    pub const IDENTITY: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Rotation by `angle` about the in-plane axis `(cos phase, sin phase, 0)`.
    pub fn from_pulse(angle: f64, phase: f64) -> Result<Self> {
        finite("rotation angle", angle)?;
        finite("rotation phase", phase)?;
        Ok(Self::pulse_unchecked(angle, phase))
    }

    pub(crate) fn pulse_unchecked(angle: f64, phase: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self {
            w: c,
            x: s * phase.cos(),
            y: s * phase.sin(),
            z: 0.0,
        }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_unit(&self) -> bool {
        (self.dot(self) - 1.0).abs() <= UNIT_TOLERANCE
    }

    /// Inverse rotation (conjugate, for unit quaternions).
    pub fn conj(&self) -> Self {
        Self {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Quaternion fidelity `|a·b|`, clamped to `[0, 1]`.
    ///
    /// Equal to `|Tr(Uₐ†U_b)| / 2` for the corresponding SU(2) matrices and
    /// blind to the global sign of either argument.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.dot(other).abs().min(1.0)
    }

    /// Component-wise equality after aligning the global sign.
    pub fn approx_eq_up_to_sign(&self, other: &Self, tol: f64) -> bool {
        let aligned = if self.dot(other) < 0.0 { -*other } else { *other };
        self.components()
            .iter()
            .zip(aligned.components())
            .all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Flip the sign if needed so that `self · reference ≥ 0`.
    pub fn aligned_with(&self, reference: &Self) -> Self {
        if self.dot(reference) < 0.0 {
            -*self
        } else {
            *self
        }
    }

    pub fn to_unitary(&self) -> UnitaryOracle {
        UnitaryOracle::from_quaternion(self)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product; `a * b` applies `b` first.
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        }
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Compose rotations listed in time order (first applied first).
pub fn compose<I>(rotations: I) -> Quaternion
where
    I: IntoIterator<Item = Quaternion>,
{
    rotations.into_iter().fold(Quaternion::IDENTITY, |acc, q| q * acc)
}

/// A 2×2 complex matrix used as an independent check on the quaternion
/// algebra. Pulses are built by exponentiating the Hermitian generator
/// numerically rather than through the half-angle formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryOracle {
    pub m: [[Complex64; 2]; 2],
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl UnitaryOracle {
    pub const IDENTITY: UnitaryOracle = UnitaryOracle {
        m: [[ONE, ZERO], [ZERO, ONE]],
    };

    /// `exp(−i·angle·(cos φ·σx + sin φ·σy)/2)` by scaling and squaring.
    pub fn from_pulse(angle: f64, phase: f64) -> Result<Self> {
        finite("rotation angle", angle)?;
        finite("rotation phase", phase)?;
        let half = 0.5 * angle;
        let off = Complex64::new(phase.cos(), -phase.sin());
        // −i·(angle/2)·(cos φ σx + sin φ σy)
        let minus_i = Complex64::new(0.0, -half);
        let generator = [[ZERO, minus_i * off], [minus_i * off.conj(), ZERO]];
        Ok(Self { m: expm(generator) })
    }

    /// `w·I − i(x·σx + y·σy + z·σz)`.
    pub fn from_quaternion(q: &Quaternion) -> Self {
        let i = Complex64::i();
        Self {
            m: [
                [Complex64::new(q.w, 0.0) - i * q.z, -i * q.x - q.y],
                [-i * q.x + q.y, Complex64::new(q.w, 0.0) + i * q.z],
            ],
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = self.m[r][0] * other.m[0][c] + self.m[r][1] * other.m[1][c];
            }
        }
        Self { m: out }
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self {
            m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// `|Tr(U†V)| / 2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.adjoint().matmul(other).trace().norm() / 2.0
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().matmul(self).max_abs_diff(&Self::IDENTITY) <= tol
    }
}

fn expm(a: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mul = |p: &[[Complex64; 2]; 2], q: &[[Complex64; 2]; 2]| {
        let mut out = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = p[r][0] * q[0][c] + p[r][1] * q[1][c];
            }
        }
        out
    };
    let norm = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    let scaled = a.map(|row| row.map(|z| z * scale));

    let mut result = [[ONE, ZERO], [ZERO, ONE]];
    let mut term = result;
    for k in 1..=24 {
        term = mul(&term, &scaled).map(|row| row.map(|z| z / k as f64));
        for r in 0..2 {
            for c in 0..2 {
                result[r][c] += term[r][c];
            }
        }
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    result
}
