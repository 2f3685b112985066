//! Subcommand bodies. Each returns the primary output as a string plus an
//! optional summary line for the terminal, so the output is byte-for-byte
//! reproducible for a given config.

use std::fmt::Write as _;

use ising_composite::analysis::{error_expansion, fidelity_curve, g_grid, threshold_report};
use ising_composite::ising::compile_ising_with;
use ising_composite::sequences::normalize_phase;
use ising_composite::{Family, PulseSequence, Quaternion, TwoQubitPropagator};

use crate::config::RunConfig;

/// Points in the `--verify` grid over `[-1.2, 0.3]`.
pub const VERIFY_SAMPLES: usize = 501;
/// Largest fidelity deviation accepted by `--verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

pub struct Output {
    pub body: String,
    pub summary: Option<String>,
    pub verification_failed: bool,
}

impl Output {
    fn plain(body: String) -> Self {
        Self {
            body,
            summary: None,
            verification_failed: false,
        }
    }
}

fn build(cfg: &RunConfig, family: Family) -> Result<PulseSequence, String> {
    family.build(cfg.theta, cfg.branch).map_err(|e| e.to_string())
}

fn sign_label(cfg: &RunConfig) -> &'static str {
    match cfg.branch {
        ising_composite::Branch::Plus => "+",
        ising_composite::Branch::Minus => "-",
    }
}

pub fn cmd_sequence(cfg: &RunConfig) -> Result<Output, String> {
    let seq = build(cfg, cfg.family)?;
    let phi1 = seq
        .first_phase()
        .map(|p| format!("{:.6}", normalize_phase(p).to_degrees()))
        .unwrap_or_else(|| "none".into());
    let mut body = format!(
        "# family={} theta_deg={:.6} phi1_deg={} sign={}\n# angle_deg\tphase_deg\n",
        seq.family(),
        cfg.theta.to_degrees(),
        phi1,
        sign_label(cfg)
    );
    for e in seq.elements() {
        writeln!(
            body,
            "{:.6}\t{:.6}",
            e.angle.to_degrees(),
            normalize_phase(e.phase).to_degrees()
        )
        .unwrap();
    }
    Ok(Output::plain(body))
}

pub fn cmd_curve(cfg: &RunConfig) -> Result<Output, String> {
    let seq = build(cfg, cfg.family)?;
    let curve = fidelity_curve(&seq, cfg.ideal, cfg.g_min, cfg.g_max, cfg.samples).map_err(|e| e.to_string())?;
    let mut body = String::from("g,F\n");
    for p in &curve {
        writeln!(body, "{:.16e},{:.16e}", p.g, p.fidelity).unwrap();
    }
    let (lo, hi) = curve.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.fidelity), hi.max(p.fidelity))
    });
    let summary = format!(
        "curve family={} theta_deg={} ideal_deg={} g=[{}, {}] samples={} F_min={:.9} F_max={:.9}",
        seq.family(),
        cfg.theta.to_degrees(),
        cfg.ideal.to_degrees(),
        cfg.g_min,
        cfg.g_max,
        cfg.samples,
        lo,
        hi
    );
    Ok(Output {
        body,
        summary: Some(summary),
        verification_failed: false,
    })
}

pub fn cmd_thresholds(cfg: &RunConfig) -> Result<Output, String> {
    let reports = Family::BUILT_IN
        .iter()
        .map(|&f| threshold_report(&build(cfg, f)?, cfg.tol).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, String>>()?;
    let mut body = serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())?;
    body.push('\n');
    let summary = reports
        .iter()
        .map(|r| format!("{} ε={} δ={}", r.family, r.epsilon, r.delta))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Output {
        body,
        summary: Some(summary),
        verification_failed: false,
    })
}

/// Largest gap between two-qubit propagator fidelity and single-qubit
/// quaternion fidelity over the verification grid, for both references.
pub fn equivalence_deviation(seq: &PulseSequence, sched: &ising_composite::IsingSchedule) -> f64 {
    let ideal_gate = sched.ideal_gate();
    let identity = TwoQubitPropagator::identity();
    let ideal_q = seq.ideal();
    g_grid(-1.2, 0.3, VERIFY_SAMPLES)
        .expect("fixed grid")
        .into_iter()
        .map(|g| {
            let u = sched.propagator(g);
            let q = seq.net_quaternion(g);
            let a = (u.fidelity(&ideal_gate) - q.fidelity(&ideal_q)).abs();
            let b = (u.fidelity(&identity) - q.fidelity(&Quaternion::IDENTITY)).abs();
            a.max(b)
        })
        .fold(0.0, f64::max)
}

pub fn cmd_compile(cfg: &RunConfig) -> Result<Output, String> {
    let seq = build(cfg, cfg.family)?;
    let sched = compile_ising_with(&seq, cfg.spin, cfg.merge).map_err(|e| e.to_string())?;
    let mut body = serde_json::to_string_pretty(&sched.export()).map_err(|e| e.to_string())?;
    body.push('\n');

    let mut notes = vec![format!(
        "compile family={} total_t_units={} items={}",
        seq.family(),
        sched.total_duration(),
        sched.items.len()
    )];
    if let Some(phi) = seq.first_phase() {
        let odd = sched.unexpected_pulse_angles(normalize_phase(phi), 1e-9);
        if !odd.is_empty() {
            let list: Vec<String> = odd.iter().map(|a| format!("{:.3}", a.to_degrees())).collect();
            notes.push(format!("note: pulse angles outside {{φ1, 2φ1}}: {}", list.join(", ")));
        }
    }
    let mut failed = false;
    if cfg.verify {
        let dev = equivalence_deviation(&seq, &sched);
        failed = dev.is_nan() || dev >= VERIFY_TOLERANCE;
        notes.push(format!(
            "verify: max |F_propagator - F_quaternion| = {dev:.3e} over {VERIFY_SAMPLES} points in [-1.2, 0.3] ({})",
            if failed { "FAIL" } else { "ok" }
        ));
    }
    Ok(Output {
        body,
        summary: Some(notes.join("\n")),
        verification_failed: failed,
    })
}

pub fn cmd_expand(cfg: &RunConfig) -> Result<Output, String> {
    let seq = build(cfg, cfg.family)?;
    let report = error_expansion(&seq, cfg.theta, cfg.point, cfg.order).map_err(|e| e.to_string())?;
    let body = format!(
        "# family={} theta_deg={}\n{}",
        seq.family(),
        cfg.theta.to_degrees(),
        report
    );
    Ok(Output::plain(body))
}
