//! Error-cancellation checks, fidelity curves and tolerance thresholds.
//!
//! Series coefficients are estimated with central finite differences plus
//! one Richardson step (`h` and `h/2`). The noise floor that decides whether
//! a coefficient "vanishes" is calibrated against the closed-form derivatives
//! of a simple pulse, so it reflects the actual accuracy of the stencils.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rotor::Quaternion;
use crate::sequences::{Family, PulseSequence};

/// Infidelity that a logic gate is assumed to tolerate.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Outward scan step used to bracket the first tolerance crossing.
pub const SCAN_STEP: f64 = 1e-4;
/// Largest `|g|` (or `λ`) searched before a threshold is reported as saturated.
pub const SCAN_LIMIT: f64 = 1.0;
/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Highest derivative order with a stencil.
pub const MAX_ORDER: usize = 4;

const BISECTION_WIDTH: f64 = 1e-13;
const FLOOR_SAFETY: f64 = 10.0;
const FEASIBLE_FLOOR: f64 = 1e-2;

/// Where the error series is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExpansionPoint {
    /// `g = 0`, compared against the ideal `θ_x` rotation.
    Exact,
    /// `g = −1`, compared against the identity.
    Vanishing,
}

impl ExpansionPoint {
    pub fn g(self) -> f64 {
        match self {
            ExpansionPoint::Exact => 0.0,
            ExpansionPoint::Vanishing => -1.0,
        }
    }

    pub fn from_g(g: f64) -> Result<Self> {
        if g == 0.0 {
            Ok(ExpansionPoint::Exact)
        } else if g == -1.0 {
            Ok(ExpansionPoint::Vanishing)
        } else {
            Err(Error::ExpansionPoint(g))
        }
    }
}

/// Derivative estimates of one order for the components `(w, x, y, z)` of
/// the error quaternion `q(g) − q_target`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub order: usize,
    pub derivatives: [f64; 4],
    /// `|R − D(h/2)|` per component, where `R` is the Richardson value.
    pub truncation_error: [f64; 4],
    /// Calibrated level below which a derivative is indistinguishable from zero.
    pub noise_floor: f64,
    /// False when the noise floor is too high for this order to mean anything.
    pub feasible: bool,
}

impl OrderEstimate {
    pub fn max_abs(&self) -> f64 {
        self.derivatives.iter().fold(0.0, |m, d| m.max(d.abs()))
    }

    /// `Some(true)` if every component is below the noise floor, `None` when
    /// the order is not numerically resolvable.
    pub fn vanishes(&self) -> Option<bool> {
        self.feasible.then(|| self.max_abs() <= self.noise_floor)
    }

    pub fn component_vanishes(&self, component: usize) -> Option<bool> {
        self.feasible
            .then(|| self.derivatives[component].abs() <= self.noise_floor)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub point: ExpansionPoint,
    pub step: f64,
    pub target: Quaternion,
    pub orders: Vec<OrderEstimate>,
}

impl ExpansionReport {
    pub fn order(&self, n: usize) -> Option<&OrderEstimate> {
        self.orders.iter().find(|o| o.order == n)
    }
}

impl fmt::Display for ExpansionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# expansion point g = {}, step h = {:e} (Richardson h, h/2)",
            self.point.g(),
            self.step
        )?;
        writeln!(f, "order\tdw\tdx\tdy\tdz\tnoise_floor\tstatus")?;
        for o in &self.orders {
            let status = match o.vanishes() {
                Some(true) => "vanishes",
                Some(false) => "nonzero",
                None => "infeasible",
            };
            write!(f, "{}", o.order)?;
            for d in o.derivatives {
                write!(f, "\t{:+.6e}", d)?;
            }
            writeln!(f, "\t{:.3e}\t{}", o.noise_floor, status)?;
        }
        Ok(())
    }
}

/// Central-difference stencil for the `order`-th derivative: `(offset, weight)`
/// pairs in units of the step, with the `1/hⁿ` factor left out.
fn stencil(order: usize) -> &'static [(f64, f64)] {
    match order {
        1 => &[(-1.0, -0.5), (1.0, 0.5)],
        2 => &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
        3 => &[(-2.0, -0.5), (-1.0, 1.0), (1.0, -1.0), (2.0, 0.5)],
        4 => &[(-2.0, 1.0), (-1.0, -4.0), (0.0, 6.0), (1.0, -4.0), (2.0, 1.0)],
        _ => unreachable!("order checked by caller"),
    }
}

fn central<F: Fn(f64) -> [f64; 4]>(f: &F, x0: f64, h: f64, order: usize) -> [f64; 4] {
    let mut acc = [0.0; 4];
    for &(offset, weight) in stencil(order) {
        let v = f(x0 + offset * h);
        for (a, vi) in acc.iter_mut().zip(v) {
            *a += weight * vi;
        }
    }
    let scale = h.powi(order as i32);
    acc.map(|a| a / scale)
}

/// Richardson-refined derivative and its truncation estimate.
fn richardson<F: Fn(f64) -> [f64; 4]>(f: &F, x0: f64, h: f64, order: usize) -> ([f64; 4], [f64; 4]) {
    let coarse = central(f, x0, h, order);
    let fine = central(f, x0, 0.5 * h, order);
    let mut value = [0.0; 4];
    let mut err = [0.0; 4];
    for i in 0..4 {
        value[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
        err[i] = (value[i] - fine[i]).abs();
    }
    (value, err)
}

/// Worst-case rounding error of the Richardson estimate for O(1) data.
fn roundoff_bound(order: usize, h: f64) -> f64 {
    let weight: f64 = stencil(order).iter().map(|(_, w)| w.abs()).sum();
    let n = order as i32;
    f64::EPSILON * weight * (4.0 / (3.0 * (0.5 * h).powi(n)) + 1.0 / (3.0 * h.powi(n)))
}

/// Per-order noise floors for step `h`, calibrated on a simple `90°_x` pulse
/// whose derivatives are known in closed form at both expansion points.
pub fn calibrate_noise_floor(h: f64) -> [f64; MAX_ORDER] {
    let theta = std::f64::consts::FRAC_PI_2;
    let k = 0.5 * theta;
    let f = |g: f64| {
        let a = k * (1.0 + g);
        [a.cos(), a.sin(), 0.0, 0.0]
    };
    let mut floors = [0.0; MAX_ORDER];
    for (idx, floor) in floors.iter_mut().enumerate() {
        let order = idx + 1;
        let mut worst: f64 = 0.0;
        for g0 in [0.0, -1.0] {
            let (est, _) = richardson(&f, g0, h, order);
            let shift = order as f64 * std::f64::consts::FRAC_PI_2;
            let a = k * (1.0 + g0);
            let exact = [
                k.powi(order as i32) * (a + shift).cos(),
                k.powi(order as i32) * (a + shift).sin(),
            ];
            worst = worst.max((est[0] - exact[0]).abs()).max((est[1] - exact[1]).abs());
        }
        *floor = FLOOR_SAFETY * worst.max(roundoff_bound(order, h));
    }
    floors
}

/// Finite-difference series coefficients of `net_quaternion(g) − target`
/// at `point`, for orders `1..=max_order`. The target is the ideal
/// `ideal_angle` x-rotation at `g = 0` and the identity at `g = −1`.
pub fn error_expansion(
    seq: &PulseSequence,
    ideal_angle: f64,
    point: ExpansionPoint,
    max_order: usize,
) -> Result<ExpansionReport> {
    error_expansion_with_step(seq, ideal_angle, point, max_order, DEFAULT_STEP)
}

pub fn error_expansion_with_step(
    seq: &PulseSequence,
    ideal_angle: f64,
    point: ExpansionPoint,
    max_order: usize,
    step: f64,
) -> Result<ExpansionReport> {
    if max_order == 0 || max_order > MAX_ORDER {
        return Err(Error::Order {
            requested: max_order,
            max: MAX_ORDER,
        });
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::NonFinite {
            what: "finite-difference step",
            value: step,
        });
    }
    let target = match point {
        ExpansionPoint::Exact => Quaternion::from_pulse(ideal_angle, 0.0)?,
        ExpansionPoint::Vanishing => Quaternion::IDENTITY,
    };
    let g0 = point.g();
    // Pick the sign of the net quaternion that sits next to the target.
    let sign = if seq.net_quaternion(g0).dot(&target) < 0.0 {
        -1.0
    } else {
        1.0
    };
    let f = |g: f64| {
        let q = seq.net_quaternion(g);
        [
            sign * q.w - target.w,
            sign * q.x - target.x,
            sign * q.y - target.y,
            sign * q.z - target.z,
        ]
    };
    let floors = calibrate_noise_floor(step);
    let orders = (1..=max_order)
        .map(|order| {
            let (derivatives, truncation_error) = richardson(&f, g0, step, order);
            let noise_floor = floors[order - 1];
            OrderEstimate {
                order,
                derivatives,
                truncation_error,
                noise_floor,
                feasible: noise_floor < FEASIBLE_FLOOR,
            }
        })
        .collect();
    Ok(ExpansionReport {
        point,
        step,
        target,
        orders,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub g: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
}

/// Uniform `samples`-point grid over `[g_min, g_max]`, endpoints included.
pub fn g_grid(g_min: f64, g_max: f64, samples: usize) -> Result<Vec<f64>> {
    if !(g_min.is_finite() && g_max.is_finite() && g_min < g_max && samples >= 2) {
        return Err(Error::CurveRange { g_min, g_max, samples });
    }
    let span = g_max - g_min;
    let last = (samples - 1) as f64;
    Ok((0..samples)
        .map(|i| {
            if i == samples - 1 {
                g_max
            } else {
                g_min + span * (i as f64 / last)
            }
        })
        .collect())
}

/// Fidelity of `seq` against the ideal `ideal_angle` x-rotation, sampled
/// uniformly in `g`. `ideal_angle = 0` measures against the identity.
pub fn fidelity_curve(
    seq: &PulseSequence,
    ideal_angle: f64,
    g_min: f64,
    g_max: f64,
    samples: usize,
) -> Result<Vec<CurvePoint>> {
    let ideal = Quaternion::from_pulse(ideal_angle, 0.0)?;
    Ok(g_grid(g_min, g_max, samples)?
        .into_iter()
        .map(|g| CurvePoint {
            g,
            fidelity: seq.net_quaternion(g).fidelity(&ideal),
        })
        .collect())
}

/// A tolerance threshold, or the sentinel for "no crossing within the
/// search limit".
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    Bounded(f64),
    /// No crossing with `|g| ≤ 1` (or `λ ≤ 1`).
    AtLeast(f64),
}

impl Threshold {
    pub fn value(self) -> f64 {
        match self {
            Threshold::Bounded(v) | Threshold::AtLeast(v) => v,
        }
    }

    pub fn min(self, other: Threshold) -> Threshold {
        if other.value() < self.value() {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Bounded(v) => write!(f, "{v:.6}"),
            Threshold::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threshold::Bounded(v) => s.serialize_f64(*v),
            Threshold::AtLeast(v) => s.serialize_str(&format!(">={v}")),
        }
    }
}

fn check_tolerance(tol: f64) -> Result<f64> {
    if tol > 0.0 && tol < 1.0 {
        Ok(tol)
    } else {
        Err(Error::Tolerance(tol))
    }
}

/// Distance from 0 along `direction` (±1) to the first point where
/// `infidelity` exceeds `tol`: scan outward in steps of [`SCAN_STEP`], then
/// bisect the bracketing step.
pub fn first_crossing<F: Fn(f64) -> f64>(infidelity: F, direction: f64, tol: f64) -> Threshold {
    let steps = (SCAN_LIMIT / SCAN_STEP).round() as usize;
    let mut inside = 0.0;
    for i in 1..=steps {
        let x = if i == steps { SCAN_LIMIT } else { i as f64 * SCAN_STEP };
        if infidelity(direction * x) > tol {
            let (mut lo, mut hi) = (inside, x);
            while hi - lo > BISECTION_WIDTH {
                let mid = 0.5 * (lo + hi);
                if infidelity(direction * mid) > tol {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Threshold::Bounded(lo);
        }
        inside = x;
    }
    Threshold::AtLeast(SCAN_LIMIT)
}

/// ε for an arbitrary fidelity-vs-`g` channel: the smaller of the two
/// one-sided first crossings around `g = 0`.
pub fn epsilon_of<F: Fn(f64) -> f64>(fidelity: F, tol: f64) -> Result<Threshold> {
    let tol = check_tolerance(tol)?;
    let infid = |g: f64| 1.0 - fidelity(g);
    Ok(first_crossing(infid, 1.0, tol).min(first_crossing(infid, -1.0, tol)))
}

/// δ for an arbitrary fidelity-vs-identity channel parameterised by the
/// coupling fraction `λ = 1 + g`, scanning `λ` upward from 0.
pub fn delta_of<F: Fn(f64) -> f64>(fidelity_vs_identity: F, tol: f64) -> Result<Threshold> {
    let tol = check_tolerance(tol)?;
    Ok(first_crossing(
        |lambda: f64| 1.0 - fidelity_vs_identity(lambda - 1.0),
        1.0,
        tol,
    ))
}

/// Largest ε with `1 − F(g) ≤ tol` for every `|g| ≤ ε`, measured against
/// the ideal `target_angle` x-rotation.
pub fn threshold_epsilon(seq: &PulseSequence, target_angle: f64, tol: f64) -> Result<Threshold> {
    let ideal = Quaternion::from_pulse(target_angle, 0.0)?;
    let at_zero = seq.net_quaternion(0.0).fidelity(&ideal);
    if 1.0 - at_zero > 1e-10 {
        return Err(Error::OffTarget(at_zero));
    }
    epsilon_of(|g| seq.net_quaternion(g).fidelity(&ideal), tol)
}

/// Largest δ with `1 − F ≤ tol` against the identity for every coupling
/// fraction `λ ∈ [0, δ]`.
pub fn threshold_delta(seq: &PulseSequence, tol: f64) -> Result<Threshold> {
    delta_of(|g| seq.net_quaternion(g).fidelity(&Quaternion::IDENTITY), tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub family: Family,
    pub theta_deg: f64,
    pub tol: f64,
    pub epsilon: Threshold,
    pub delta: Threshold,
}

pub fn threshold_report(seq: &PulseSequence, tol: f64) -> Result<ThresholdReport> {
    Ok(ThresholdReport {
        family: seq.family(),
        theta_deg: seq.target_angle().to_degrees(),
        tol,
        epsilon: threshold_epsilon(seq, seq.target_angle(), tol)?,
        delta: threshold_delta(seq, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::Branch;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn simple_first_order_matches_closed_form() {
        let theta = FRAC_PI_2;
        let seq = PulseSequence::simple(theta).unwrap();
        let report = error_expansion(&seq, theta, ExpansionPoint::Exact, 1).unwrap();
        let o1 = report.order(1).unwrap();
        // d/dg sin(θ(1+g)/2) at g = 0
        let dx = 0.5 * theta * (0.5 * theta).cos();
        assert!((o1.derivatives[1] - dx).abs() < 1e-9);
        assert!((dx - 0.555).abs() < 1e-3);
        assert_eq!(o1.vanishes(), Some(false));
    }

    #[test]
    fn bb1_cancels_first_and_second_order_but_not_third() {
        let seq = PulseSequence::bb1(FRAC_PI_2, Branch::Plus).unwrap();
        let report = error_expansion(&seq, FRAC_PI_2, ExpansionPoint::Exact, 3).unwrap();
        assert_eq!(report.order(1).unwrap().vanishes(), Some(true));
        assert_eq!(report.order(2).unwrap().vanishes(), Some(true));
        assert_eq!(report.order(3).unwrap().vanishes(), Some(false));
    }

    #[test]
    fn nb1_cancels_first_order_at_vanishing_rate() {
        let seq = PulseSequence::nb1(FRAC_PI_2, Branch::Plus).unwrap();
        let report = error_expansion(&seq, FRAC_PI_2, ExpansionPoint::Vanishing, 2).unwrap();
        let o1 = report.order(1).unwrap();
        assert_eq!(o1.component_vanishes(1), Some(true));
        assert_eq!(o1.component_vanishes(2), Some(true));
        assert_eq!(o1.component_vanishes(3), Some(true));
    }

    #[test]
    fn fourth_order_is_flagged_at_default_step() {
        let seq = PulseSequence::simple(FRAC_PI_2).unwrap();
        let report = error_expansion(&seq, FRAC_PI_2, ExpansionPoint::Exact, 4).unwrap();
        let o4 = report.order(4).unwrap();
        assert!(!o4.feasible);
        assert_eq!(o4.vanishes(), None);
        assert!(report.order(3).unwrap().feasible);
    }

    #[test]
    fn expansion_rejects_bad_requests() {
        let seq = PulseSequence::simple(FRAC_PI_2).unwrap();
        assert!(matches!(
            error_expansion(&seq, FRAC_PI_2, ExpansionPoint::Exact, 5),
            Err(Error::Order { .. })
        ));
        assert!(error_expansion(&seq, FRAC_PI_2, ExpansionPoint::Exact, 0).is_err());
        assert!(matches!(ExpansionPoint::from_g(0.5), Err(Error::ExpansionPoint(_))));
        assert_eq!(ExpansionPoint::from_g(-1.0).unwrap(), ExpansionPoint::Vanishing);
    }

    #[test]
    fn curve_endpoints_and_values() {
        let seq = PulseSequence::simple(FRAC_PI_2).unwrap();
        let curve = fidelity_curve(&seq, 0.0, -2.0, 0.0, 801).unwrap();
        assert_eq!(curve.len(), 801);
        assert_eq!(curve[0].g, -2.0);
        assert_eq!(curve[800].g, 0.0);
        assert_eq!(curve[400].g, -1.0);
        assert_eq!(curve[400].fidelity, 1.0);
        assert!((curve[800].fidelity - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(fidelity_curve(&seq, 0.0, 0.0, 0.0, 10).is_err());
        assert!(fidelity_curve(&seq, 0.0, -1.0, 0.0, 1).is_err());
    }

    #[test]
    fn simple_threshold_closed_form() {
        let theta = FRAC_PI_2;
        let seq = PulseSequence::simple(theta).unwrap();
        let eps = threshold_epsilon(&seq, theta, DEFAULT_TOLERANCE).unwrap();
        let closed = 2.0 / theta * (1.0 - DEFAULT_TOLERANCE).acos();
        assert!((eps.value() - closed).abs() < 1e-6);
        assert!(matches!(eps, Threshold::Bounded(_)));
    }

    #[test]
    fn saturated_threshold_is_reported() {
        // Any curve that never leaves tolerance within the search range.
        assert_eq!(epsilon_of(|_| 1.0, 1e-6).unwrap(), Threshold::AtLeast(1.0));
        assert_eq!(serde_json::to_string(&Threshold::AtLeast(1.0)).unwrap(), "\">=1\"");
    }

    #[test]
    fn off_target_sequence_is_rejected() {
        let seq = PulseSequence::simple(FRAC_PI_2).unwrap();
        assert!(matches!(threshold_epsilon(&seq, 1.0, 1e-6), Err(Error::OffTarget(_))));
        assert!(matches!(threshold_delta(&seq, 0.0), Err(Error::Tolerance(_))));
    }
}
