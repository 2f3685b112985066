//! Command-line arguments and their validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ising_composite::analysis::{ExpansionPoint, MAX_ORDER};
use ising_composite::ising::PulseMerge;
use ising_composite::{Branch, Family};

#[derive(Debug, Parser)]
#[command(name = "cpulse", version, about = "Composite rotations and robust Ising gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump the pulses of a sequence (degrees, tab separated)
    Sequence {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample fidelity against an ideal rotation as CSV `g,F`
    Curve {
        #[command(flatten)]
        seq: SeqArgs,
        /// Ideal rotation angle in degrees (0 = identity); defaults to --theta
        #[arg(long)]
        ideal: Option<f64>,
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        gmin: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gmax: f64,
        #[arg(long, default_value_t = 801)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ε and δ tolerance thresholds for all four families, as JSON
    Thresholds {
        /// Target rotation angle in degrees
        #[arg(long, default_value_t = 90.0)]
        theta: f64,
        /// Tolerated infidelity 1 − F
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = SignArg::Plus, allow_hyphen_values = true)]
        sign: SignArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a sequence into an Ising gate schedule (JSON)
    Compile {
        #[command(flatten)]
        seq: SeqArgs,
        /// Spin that carries the phase pulses
        #[arg(long, default_value_t = 1)]
        spin: usize,
        /// Add same-sense neighbouring pulses into one pulse
        #[arg(long)]
        combine: bool,
        /// Check propagator fidelity against quaternion fidelity on a g grid
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-difference series coefficients of the error quaternion
    Expand {
        #[command(flatten)]
        seq: SeqArgs,
        /// Expansion point: 0 (against θ_x) or -1 (against the identity)
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        point: f64,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Pb1)]
    pub family: FamilyArg,
    /// Target rotation angle in degrees
    #[arg(long, default_value_t = 90.0)]
    pub theta: f64,
    /// Branch of the ± phase solution
    #[arg(long, value_enum, default_value_t = SignArg::Plus, allow_hyphen_values = true)]
    pub sign: SignArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Simple,
    Bb1,
    Nb1,
    Pb1,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Simple => Family::Simple,
            FamilyArg::Bb1 => Family::Bb1,
            FamilyArg::Nb1 => Family::Nb1,
            FamilyArg::Pb1 => Family::Pb1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(name = "+", alias = "plus", alias = "+1")]
    Plus,
    #[value(name = "-", alias = "minus", alias = "-1")]
    Minus,
}

impl From<SignArg> for Branch {
    fn from(s: SignArg) -> Branch {
        match s {
            SignArg::Plus => Branch::Plus,
            SignArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequence,
    Curve,
    Thresholds,
    Compile,
    Expand,
}

/// Validated run parameters. Angles are in radians from here on.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Mode,
    pub family: Family,
    pub theta: f64,
    pub branch: Branch,
    pub ideal: f64,
    pub g_min: f64,
    pub g_max: f64,
    pub samples: usize,
    pub tol: f64,
    pub point: ExpansionPoint,
    pub order: usize,
    pub spin: usize,
    pub merge: PulseMerge,
    pub verify: bool,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            subcommand: Mode::Sequence,
            family: Family::Pb1,
            theta: 90f64.to_radians(),
            branch: Branch::Plus,
            ideal: 90f64.to_radians(),
            g_min: -2.0,
            g_max: 0.0,
            samples: 801,
            tol: 1e-6,
            point: ExpansionPoint::Exact,
            order: 2,
            spin: 1,
            merge: PulseMerge::CancelOnly,
            verify: false,
            out: None,
        }
    }
}

fn theta_rad(deg: f64) -> Result<f64, String> {
    if deg.is_finite() && deg > 0.0 && deg <= 360.0 {
        Ok(deg.to_radians())
    } else {
        Err(format!("--theta must lie in (0, 360] degrees, got {deg}"))
    }
}

impl RunConfig {
    pub fn from_command(cmd: Command) -> Result<RunConfig, String> {
        let base = RunConfig::default();
        let cfg = match cmd {
            Command::Sequence { seq, out } => RunConfig {
                subcommand: Mode::Sequence,
                family: seq.family.into(),
                theta: theta_rad(seq.theta)?,
                branch: seq.sign.into(),
                out,
                ..base
            },
            Command::Curve {
                seq,
                ideal,
                gmin,
                gmax,
                samples,
                out,
            } => {
                let theta = theta_rad(seq.theta)?;
                let ideal = match ideal {
                    Some(d) if d.is_finite() => d.to_radians(),
                    Some(d) => return Err(format!("--ideal must be finite, got {d}")),
                    None => theta,
                };
                if !(gmin.is_finite() && gmax.is_finite() && gmin < gmax) {
                    return Err(format!("--gmin must be below --gmax, got {gmin} and {gmax}"));
                }
                if samples < 2 {
                    return Err(format!("--samples must be at least 2, got {samples}"));
                }
                RunConfig {
                    subcommand: Mode::Curve,
                    family: seq.family.into(),
                    theta,
                    branch: seq.sign.into(),
                    ideal,
                    g_min: gmin,
                    g_max: gmax,
                    samples,
                    out,
                    ..base
                }
            }
            Command::Thresholds { theta, tol, sign, out } => {
                if !(tol > 0.0 && tol < 1.0) {
                    return Err(format!("--tol must lie in (0, 1), got {tol}"));
                }
                RunConfig {
                    subcommand: Mode::Thresholds,
                    theta: theta_rad(theta)?,
                    branch: sign.into(),
                    tol,
                    out,
                    ..base
                }
            }
            Command::Compile {
                seq,
                spin,
                combine,
                verify,
                out,
            } => {
                if spin > 1 {
                    return Err(format!("--spin must be 0 or 1, got {spin}"));
                }
                RunConfig {
                    subcommand: Mode::Compile,
                    family: seq.family.into(),
                    theta: theta_rad(seq.theta)?,
                    branch: seq.sign.into(),
                    spin,
                    merge: if combine {
                        PulseMerge::Combine
                    } else {
                        PulseMerge::CancelOnly
                    },
                    verify,
                    out,
                    ..base
                }
            }
            Command::Expand { seq, point, order, out } => {
                let point = ExpansionPoint::from_g(point).map_err(|e| format!("--point: {e}"))?;
                if order == 0 || order > MAX_ORDER {
                    return Err(format!("--order must lie in 1..={MAX_ORDER}, got {order}"));
                }
                RunConfig {
                    subcommand: Mode::Expand,
                    family: seq.family.into(),
                    theta: theta_rad(seq.theta)?,
                    branch: seq.sign.into(),
                    point,
                    order,
                    out,
                    ..base
                }
            }
        };
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, String> {
        let cli =
            Cli::try_parse_from(std::iter::once("cpulse").chain(args.iter().copied())).map_err(|e| e.to_string())?;
        RunConfig::from_command(cli.command)
    }

    #[test]
    fn curve_defaults() {
        let cfg = parse(&["curve", "--family", "nb1"]).unwrap();
        assert_eq!(cfg.family, Family::Nb1);
        assert_eq!((cfg.g_min, cfg.g_max, cfg.samples), (-2.0, 0.0, 801));
        assert_eq!(cfg.ideal, cfg.theta);
    }

    #[test]
    fn negative_values_parse() {
        let cfg = parse(&["expand", "--family", "nb1", "--point", "-1", "--order", "1"]).unwrap();
        assert_eq!(cfg.point, ExpansionPoint::Vanishing);
        let cfg = parse(&["curve", "--gmin", "-1.5", "--gmax", "-0.5", "--sign", "-"]).unwrap();
        assert_eq!((cfg.g_min, cfg.g_max), (-1.5, -0.5));
        assert_eq!(cfg.branch, Branch::Minus);
    }

    #[test]
    fn invalid_combinations_are_usage_errors() {
        assert!(parse(&["curve", "--gmin", "0", "--gmax", "-1"]).is_err());
        assert!(parse(&["curve", "--samples", "1"]).is_err());
        assert!(parse(&["sequence", "--theta", "0"]).is_err());
        assert!(parse(&["sequence", "--theta", "400"]).is_err());
        assert!(parse(&["thresholds", "--tol", "2"]).is_err());
        assert!(parse(&["expand", "--point", "0.5"]).is_err());
        assert!(parse(&["expand", "--order", "5"]).is_err());
        assert!(parse(&["compile", "--spin", "2"]).is_err());
        assert!(parse(&["compile", "--family", "bb2"]).is_err());
    }
}
