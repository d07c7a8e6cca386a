//! Command-line frontend.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filterbank::{self, l2_norm_residual};
use crate::io;
use crate::linalg;
use crate::masks::{
    detect_sum_rule_vectors, polyphase_assemble, polyphase_split, sum_rule_order, vanishing_moment_order, MaskPair,
    SumRuleVectors,
};
use crate::qmf::{displacement_residual, qmf_residual, uep_residual};
use crate::realization::{
    nilpotency_residual, realize, state_equation_residual, transfer_vs_horner, unitarity_residual,
};
use crate::synthesis::{self, blaschke_product, scalar_projection, BlaschkeFactor, Family, FullRankUnitary, Sign};

pub const DEFAULT_TOL: f64 = 1e-10;
/// Highest moment order probed by `verify` and `synth`.
pub const MAX_ORDER: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "mwforge",
    version,
    about = "Orthogonal (multi)wavelet masks from unitary realizations"
)]
pub struct Cli {
    /// Pass/fail tolerance for residual checks.
    #[arg(long, global = true, help_heading = "Global options", env = "MWFORGE_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Number of seeded disk samples for pointwise checks.
    #[arg(long, global = true, help_heading = "Global options", default_value_t = 64)]
    pub samples: usize,
    /// Seed for every randomized check.
    #[arg(long, global = true, help_heading = "Global options", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named mask family and write its mask JSON.
    Synth(SynthArgs),
    /// Check QMF, realization and moment properties of a mask JSON file.
    Verify(VerifyArgs),
    /// Write the unitary realization of a mask JSON file.
    Realize(InOut),
    /// Multiply scalar Blaschke factors (I − B + Bξ) and a tail unitary.
    Factor(FactorArgs),
    /// Solve for the parameters of d4, d6 or d6-potapov.
    Solve(SolveArgs),
    /// Render φ and ψ with the cascade algorithm as CSV.
    Cascade(CascadeArgs),
    /// Periodic analysis of a signal CSV into subbands CSV.
    Dwt(TransformArgs),
    /// Periodic synthesis of a subbands CSV back into a signal CSV.
    Idwt(TransformArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// haar, d4, d6, d6-potapov, chui-lian, lebrun-vetterli, fullrank-a3, fullrank-a4, scalar or scalar(b,sign).
    pub family: String,
    /// Parameter b (scalar, fullrank-a3).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Sign of the off-diagonal projection entries (scalar).
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    /// First parameter (fullrank-a4).
    #[arg(long)]
    pub b1: Option<f64>,
    /// Second parameter (fullrank-a4).
    #[arg(long)]
    pub b2: Option<f64>,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub mask: PathBuf,
    /// Sum-rule vector as comma-separated reals; repeatable. Detected from p when absent.
    #[arg(long = "v", allow_hyphen_values = true)]
    pub v: Vec<String>,
    /// Print only the machine-readable JSON report.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report to this path.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InOut {
    pub input: PathBuf,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    /// Preset factorization; only d6-potapov is available.
    #[arg(long)]
    pub family: Option<String>,
    /// Factor parameters `b,sign`, applied left to right; repeatable.
    #[arg(long = "factor", allow_hyphen_values = true)]
    pub factors: Vec<String>,
    /// Tail unitary: `balanced` for (√2/2)[[1,1],[1,−1]] or `identity`.
    #[arg(long, default_value = "balanced")]
    pub tail: String,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// d4, d6 or d6-potapov.
    pub problem: String,
}

#[derive(Debug, Args)]
pub struct CascadeArgs {
    pub mask: PathBuf,
    /// Refinement levels (at most 24); the grid step is 2^-levels.
    #[arg(long, default_value_t = 10)]
    pub levels: usize,
    /// Start vector as comma-separated reals; the first detected sum-rule vector when absent.
    #[arg(long = "v", allow_hyphen_values = true)]
    pub v: Option<String>,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    pub input: PathBuf,
    pub mask: PathBuf,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Residuals of every conservative-realization check on one mask pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub m: usize,
    pub n: usize,
    pub qmf_residual: f64,
    pub uep_residual: f64,
    pub abcd_unitarity: f64,
    pub u_unitarity: f64,
    pub nilpotency: f64,
    pub displacement: f64,
    pub state_equation: f64,
    pub transfer_vs_horner: f64,
    pub sum_rule_vectors: usize,
    pub sum_rule_order_achieved: usize,
    pub vanishing_moment_order_achieved: usize,
    pub tol: f64,
    pub pass: bool,
}

impl VerificationReport {
    fn residuals(&self) -> [(&'static str, f64); 8] {
        [
            ("qmf_residual", self.qmf_residual),
            ("uep_residual", self.uep_residual),
            ("abcd_unitarity", self.abcd_unitarity),
            ("u_unitarity", self.u_unitarity),
            ("nilpotency", self.nilpotency),
            ("displacement", self.displacement),
            ("state_equation", self.state_equation),
            ("transfer_vs_horner", self.transfer_vs_horner),
        ]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data always serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("mask: M = {}, n = {}\n", self.m, self.n);
        for (name, r) in self.residuals() {
            let mark = if r < self.tol { "ok" } else { "FAIL" };
            s += &format!("  {name:<20} {r:>12.3e}  {mark}\n");
        }
        s += &format!(
            "  sum rules: order {} ({} vector(s)), vanishing moments: order {}\n",
            self.sum_rule_order_achieved, self.sum_rule_vectors, self.vanishing_moment_order_achieved
        );
        s += &format!("  tol {:e}: {}\n", self.tol, if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

pub fn verify_pair(
    pair: &MaskPair,
    v: Option<&SumRuleVectors>,
    tol: f64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let f = polyphase_assemble(pair);
    let fp = if f.degree() == 0 { f.padded_to(1) } else { f.clone() };
    let r = realize(&f)?;
    let detected;
    let v = match v {
        Some(v) => Some(v),
        None => {
            detected = detect_sum_rule_vectors(pair.p(), tol);
            detected.as_ref()
        }
    };
    let (count, sr, vm) = match v {
        Some(v) => (
            v.count(),
            sum_rule_order(pair.p(), v, tol, MAX_ORDER),
            vanishing_moment_order(pair.q(), v, tol, MAX_ORDER),
        ),
        None => (0, 0, 0),
    };
    let mut report = VerificationReport {
        m: pair.m(),
        n: pair.support_end(),
        qmf_residual: qmf_residual(&f),
        uep_residual: uep_residual(&f),
        abcd_unitarity: unitarity_residual(&r.abcd()),
        u_unitarity: unitarity_residual(r.u()),
        nilpotency: nilpotency_residual(&r),
        displacement: displacement_residual(&fp, samples, seed)?,
        state_equation: state_equation_residual(&r, &fp, samples, seed)?,
        transfer_vs_horner: transfer_vs_horner(&r, &fp, samples, seed)?,
        sum_rule_vectors: count,
        sum_rule_order_achieved: sr,
        vanishing_moment_order_achieved: vm,
        tol,
        pass: false,
    };
    report.pass = report.residuals().iter().all(|(_, x)| *x < tol);
    Ok(report)
}

fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::domain(format!("invalid vector entry {x:?}")))
        })
        .collect()
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Diagnostics go to stdout when the payload goes to a file, to stderr otherwise.
fn note(out: Option<&Path>, msg: &str) {
    if out.is_some() {
        println!("{msg}");
    } else {
        eprintln!("{msg}");
    }
}

fn family_from_args(a: &SynthArgs) -> Result<Family> {
    let mut fam: Family = a.family.parse()?;
    match &mut fam {
        Family::Scalar { b, sign } => {
            if let Some(x) = a.b {
                *b = x;
            }
            if let Some(s) = &a.sign {
                *sign = s.parse()?;
            }
        }
        Family::FullrankA3 { b } => {
            if let Some(x) = a.b {
                *b = x;
            }
        }
        Family::FullrankA4 { b1, b2 } => {
            if let Some(x) = a.b1 {
                *b1 = x;
            }
            if let Some(x) = a.b2 {
                *b2 = x;
            }
        }
        _ => {
            if a.b.is_some() || a.sign.is_some() || a.b1.is_some() || a.b2.is_some() {
                return Err(Error::domain(format!("family {} takes no parameters", fam.name())));
            }
        }
    }
    Ok(fam)
}

fn cmd_synth(cli: &Cli, a: &SynthArgs) -> Result<i32> {
    let fam = family_from_args(a)?;
    let pair = fam.build()?;
    let v = fam.sum_rule_vectors();
    let out = a.out.as_deref();
    emit(out, &io::mask_to_json(&pair))?;
    note(
        out,
        &format!(
            "{fam}: sum rules of order {}, vanishing moments of order {}",
            sum_rule_order(pair.p(), &v, cli.tol, MAX_ORDER),
            vanishing_moment_order(pair.q(), &v, cli.tol, MAX_ORDER)
        ),
    );
    Ok(0)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<i32> {
    let pair = io::parse_mask_json(&read(&a.mask)?)?;
    let v = if a.v.is_empty() {
        None
    } else {
        let vecs = a.v.iter().map(|s| parse_vector(s)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&[f64]> = vecs.iter().map(Vec::as_slice).collect();
        Some(SumRuleVectors::from_real(&refs)?)
    };
    let report = verify_pair(&pair, v.as_ref(), cli.tol, cli.samples, cli.seed)?;
    if a.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(p) = &a.report {
        fs::write(p, report.to_json() + "\n")?;
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_realize(a: &InOut) -> Result<i32> {
    let pair = io::parse_mask_json(&read(&a.input)?)?;
    let r = realize(&polyphase_assemble(&pair))?;
    emit(a.out.as_deref(), &io::realization_to_json(&r))?;
    Ok(0)
}

fn parse_factor(s: &str) -> Result<BlaschkeFactor> {
    let (b, sign) = match s.split_once(',') {
        Some((b, sign)) => (b, sign.parse::<Sign>()?),
        None => (s, Sign::Plus),
    };
    let b = b
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::domain(format!("invalid factor parameter {b:?}")))?;
    Ok(BlaschkeFactor::pure(scalar_projection(b, sign, false)?))
}

fn cmd_factor(a: &FactorArgs) -> Result<i32> {
    let pair = match (&a.family, a.factors.is_empty()) {
        (Some(f), true) if f == "d6-potapov" => synthesis::d6_potapov()?,
        (Some(f), true) => return Err(Error::domain(format!("no factorization preset {f:?}"))),
        (Some(_), false) => return Err(Error::domain("use either --family or --factor")),
        (None, true) => return Err(Error::domain("no factors given")),
        (None, false) => {
            let factors = a.factors.iter().map(|s| parse_factor(s)).collect::<Result<Vec<_>>>()?;
            let tail = match a.tail.as_str() {
                "balanced" => FullRankUnitary::scalar(1.0)?.u().adjoint(),
                "identity" => linalg::identity(2),
                other => return Err(Error::domain(format!("unknown tail {other:?}"))),
            };
            polyphase_split(&blaschke_product(&factors, &tail)?)
        }
    };
    emit(a.out.as_deref(), &io::mask_to_json(&pair))?;
    Ok(0)
}

fn cmd_solve(a: &SolveArgs) -> Result<i32> {
    let value = match a.problem.as_str() {
        "d4" => serde_json::json!({ "b": synthesis::solve_scalar_order2()? }),
        "d6" => serde_json::json!({ "t": synthesis::solve_d6()? }),
        "d6-potapov" => {
            let (b1, b2) = synthesis::solve_blaschke_d6()?;
            serde_json::json!({ "b1": b1, "b2": b2 })
        }
        other => return Err(Error::domain(format!("unknown problem {other:?}"))),
    };
    println!("{value}");
    Ok(0)
}

fn cmd_cascade(cli: &Cli, a: &CascadeArgs) -> Result<i32> {
    let pair = io::parse_mask_json(&read(&a.mask)?)?;
    let v = match &a.v {
        Some(s) => SumRuleVectors::from_real(&[&parse_vector(s)?])?,
        None => {
            let all = detect_sum_rule_vectors(pair.p(), cli.tol)
                .ok_or_else(|| Error::Invariant("mask satisfies no order-1 sum rule".into()))?;
            SumRuleVectors::new(vec![all.vectors()[0].clone()])?
        }
    };
    let r = filterbank::cascade(&pair, &v, a.levels)?;
    let out = a.out.as_deref();
    emit(out, &io::cascade_to_csv(&r))?;
    note(
        out,
        &format!(
            "level {}: last increment {:.3e}, L2 residual {:.3e}",
            r.level(),
            r.increments().last().copied().unwrap_or(0.0),
            l2_norm_residual(&r)
        ),
    );
    Ok(0)
}

fn cmd_dwt(a: &TransformArgs) -> Result<i32> {
    let c = io::parse_signal_csv(&read(&a.input)?)?;
    let pair = io::parse_mask_json(&read(&a.mask)?)?;
    emit(a.out.as_deref(), &io::subbands_to_csv(&filterbank::analyze(&c, &pair)?))?;
    Ok(0)
}

fn cmd_idwt(a: &TransformArgs) -> Result<i32> {
    let s = io::parse_subbands_csv(&read(&a.input)?)?;
    let pair = io::parse_mask_json(&read(&a.mask)?)?;
    emit(
        a.out.as_deref(),
        &io::signal_to_csv(&filterbank::synthesize(&s, &pair)?),
    )?;
    Ok(0)
}

/// Runs a parsed command; the value is the process exit code for successful runs.
pub fn run(cli: &Cli) -> Result<i32> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Error::domain(format!("tolerance {} must be positive", cli.tol)));
    }
    match &cli.command {
        Command::Synth(a) => cmd_synth(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Realize(a) => cmd_realize(a),
        Command::Factor(a) => cmd_factor(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Cascade(a) => cmd_cascade(cli, a),
        Command::Dwt(a) => cmd_dwt(a),
        Command::Idwt(a) => cmd_idwt(a),
    }
}

/// Exit code for any error (unknown family, out-of-domain parameter, malformed file), matching clap's usage errors.
pub const ERROR_EXIT: i32 = 2;
