// SPDX-License-Identifier: Apache-2.0

//! `ucc-lcu`: expand, synthesize, verify and cost LCU circuits for a single
//! factorized UCC operator.
//!
//! The excitation operator is `a†_{a_n}…a†_{a_1} a_{i_1}…a_{i_n}` with the
//! occupied (`i`) and virtual (`a`) lists ascending. Exit status is 0 on
//! success, 1 when verification fails and 2 on usage or input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ucc_lcu::cost::{emit_comparison, model_cnot_count, synth_cascade, RhoPolicy};
use ucc_lcu::lcu::{
    build_postselect, pad_and_synth_oaa, verify_grid, LcuOptions, VerifyMode, DEFAULT_GRID,
};
use ucc_lcu::prepare::{
    lcu_coefficients, prepare_angles, synth_prepare_with, verified_gate_angles, PrepareMode,
    RotationConvention,
};
use ucc_lcu::qasm::to_qasm;
use ucc_lcu::select::{derive_select_plan, paper_fixture_plan, synth_select};
use ucc_lcu::{ucc_factor_expand, Circuit, Execution, UccFactor};

#[derive(Parser, Debug)]
#[command(name = "ucc-lcu", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Pauli expansion of the factor, one "coefficient  string" per line.
    Expand {
        #[command(flatten)]
        factor: FactorArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the published PREPARE angles and the verified gate angles.
    PrepareAngles {
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the SELECT plan, including the code table, as JSON.
    Plan {
        #[command(flatten)]
        factor: FactorArgs,
        /// Use the published rank-2 mask schedule instead of the derived one.
        #[arg(long)]
        fixture: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a circuit as JSON, or as OpenQASM 2.0 with --qasm.
    Synth {
        #[command(flatten)]
        factor: FactorArgs,
        #[arg(long, value_enum)]
        part: Part,
        #[command(flatten)]
        prep: PrepArgs,
        #[arg(long)]
        qasm: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the assembled circuit against the exact exponential over a θ grid.
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        occ: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        virt: Vec<usize>,
        #[arg(long)]
        n_qubits: Option<usize>,
        /// Comma-separated angles in radians; defaults to a fixed grid.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Vec<f64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Postselect)]
        mode: ModeArg,
        #[command(flatten)]
        prep: PrepArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write the CNOT-count comparison CSV for ranks 1..=rank-max.
    Count {
        #[arg(long)]
        rank_max: usize,
        /// Explicit gap list; rank n uses the first 2n − 2 entries.
        #[arg(long, value_delimiter = ',', conflicts_with = "rho_fill")]
        rho: Option<Vec<usize>>,
        /// Every gap set to this value.
        #[arg(long)]
        rho_fill: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct FactorArgs {
    /// Adjacent orbitals 0..2n; mutually exclusive with --occ/--virt.
    #[arg(long, conflicts_with_all = ["occ", "virt"])]
    rank: Option<usize>,
    #[arg(long, value_delimiter = ',', requires = "virt")]
    occ: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', requires = "occ")]
    virt: Option<Vec<usize>>,
    /// Defaults to one past the largest orbital index.
    #[arg(long)]
    n_qubits: Option<usize>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    theta: f64,
}

#[derive(Args, Debug)]
struct PrepArgs {
    #[arg(long, value_enum, default_value_t = PrepareArg::Verified)]
    prepare: PrepareArg,
    #[arg(long, value_enum, default_value_t = ConventionArg::Half)]
    convention: ConventionArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Part {
    Prepare,
    Select,
    W,
    Oaa,
    Cascade,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Postselect,
    Oaa,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PrepareArg {
    Verified,
    PaperLiteral,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConventionArg {
    Half,
    Full,
}

impl PrepArgs {
    fn options(&self) -> LcuOptions {
        LcuOptions {
            prepare: match self.prepare {
                PrepareArg::Verified => PrepareMode::Verified,
                PrepareArg::PaperLiteral => PrepareMode::PaperLiteral,
            },
            convention: match self.convention {
                ConventionArg::Half => RotationConvention::HalfAngle,
                ConventionArg::Full => RotationConvention::FullAngle,
            },
            min_rounds: None,
        }
    }
}

fn build_factor(
    occ: Vec<usize>,
    virt: Vec<usize>,
    n_qubits: Option<usize>,
    theta: f64,
) -> Result<UccFactor> {
    let n = n_qubits.unwrap_or_else(|| occ.iter().chain(&virt).max().map_or(0, |m| m + 1));
    Ok(UccFactor::new(occ, virt, theta, n)?)
}

impl FactorArgs {
    fn factor(&self) -> Result<UccFactor> {
        match (&self.rank, &self.occ, &self.virt) {
            (Some(r), None, None) => {
                let f = UccFactor::adjacent(*r, self.theta)?;
                match self.n_qubits {
                    Some(n) => build_factor(
                        f.occupied().to_vec(),
                        f.virtuals().to_vec(),
                        Some(n),
                        self.theta,
                    ),
                    None => Ok(f),
                }
            }
            (None, Some(o), Some(v)) => {
                build_factor(o.clone(), v.clone(), self.n_qubits, self.theta)
            }
            _ => bail!("give either --rank or both --occ and --virt"),
        }
    }
}

/// Tool, version and arguments, without the program path.
fn provenance() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    format!("ucc-lcu {} {}", env!("CARGO_PKG_VERSION"), args.join(" "))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(mut v: Value) -> String {
    v["provenance"] = Value::String(provenance());
    let mut s = serde_json::to_string_pretty(&v).expect("JSON value serializes");
    s.push('\n');
    s
}

fn expand(f: &UccFactor) -> String {
    let mut out = format!("# {}\n", provenance());
    for (p, z) in ucc_factor_expand(f).sorted_terms() {
        out.push_str(&format!("{:+.16e}{:+.16e}i  {}\n", z.re, z.im, p));
    }
    out
}

fn prepare_angles_json(rank: usize, theta: f64) -> Result<Value> {
    let coeffs = lcu_coefficients(rank, theta)?;
    let published = match prepare_angles(rank, theta) {
        Ok(a) => json!({ "angles": a.angles }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(json!({
        "rank": rank,
        "theta": theta,
        "s": coeffs.s_one_norm,
        "published": published,
        "verified_gate_angles": verified_gate_angles(rank, theta)?,
    }))
}

fn synth(f: &UccFactor, part: Part, opts: &LcuOptions) -> Result<Circuit> {
    Ok(match part {
        Part::Prepare => synth_prepare_with(f.rank(), f.theta(), opts.prepare, opts.convention)?,
        Part::Select => synth_select(f, &derive_select_plan(f)?)?,
        Part::W => build_postselect(f, opts)?.w_circuit,
        Part::Oaa => pad_and_synth_oaa(f, opts)?.oaa_circuit,
        Part::Cascade => synth_cascade(f)?,
    })
}

/// Returns whether every grid point passed, and the report text.
fn verify(
    f: &UccFactor,
    thetas: &[f64],
    mode: VerifyMode,
    opts: &LcuOptions,
    tol: f64,
) -> Result<(bool, String)> {
    if tol.is_nan() || tol <= 0.0 {
        bail!("--tol must be positive");
    }
    let grid = verify_grid(f, thetas, mode, opts, tol, Execution::default())?;
    let pass = grid.iter().all(|r| r.pass);
    let report = json!({
        "command": "verify",
        "params": {
            "occ": f.occupied(),
            "virt": f.virtuals(),
            "n_qubits": f.num_qubits(),
            "mode": mode,
            "prepare": opts.prepare,
            "convention": opts.convention,
            "tol": tol,
        },
        "grid": grid,
        "pass": pass,
    });
    Ok((pass, json_text(report)))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Expand { factor, out } => emit(out.as_ref(), &expand(&factor.factor()?))?,
        Command::PrepareAngles { rank, theta, out } => {
            emit(out.as_ref(), &json_text(prepare_angles_json(rank, theta)?))?
        }
        Command::Plan {
            factor,
            fixture,
            out,
        } => {
            let f = factor.factor()?;
            let plan = if fixture {
                paper_fixture_plan(&f)?
            } else {
                derive_select_plan(&f)?
            };
            emit(out.as_ref(), &json_text(json!({ "plan": plan })))?
        }
        Command::Synth {
            factor,
            part,
            prep,
            qasm,
            out,
        } => {
            let circuit = synth(&factor.factor()?, part, &prep.options())?;
            let text = if qasm {
                to_qasm(&circuit, &[provenance()])
            } else {
                json_text(json!({
                    "circuit": circuit,
                    "model_cnots": model_cnot_count(&circuit),
                }))
            };
            emit(out.as_ref(), &text)?
        }
        Command::Verify {
            occ,
            virt,
            n_qubits,
            theta,
            mode,
            prep,
            tol,
            report,
        } => {
            let thetas = if theta.is_empty() {
                DEFAULT_GRID.to_vec()
            } else {
                theta
            };
            let f = build_factor(occ, virt, n_qubits, thetas[0])?;
            let mode = match mode {
                ModeArg::Postselect => VerifyMode::Postselect,
                ModeArg::Oaa => VerifyMode::Oaa,
            };
            let (pass, text) = verify(&f, &thetas, mode, &prep.options(), tol)?;
            print!("{text}");
            if let Some(path) = report {
                fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            if !pass {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Count {
            rank_max,
            rho,
            rho_fill,
            csv,
        } => {
            let policy = match (rho, rho_fill) {
                (Some(v), _) => RhoPolicy::Explicit(v),
                (None, Some(k)) => RhoPolicy::Uniform(k),
                (None, None) => RhoPolicy::default(),
            };
            let text = format!(
                "# {}\n{}",
                provenance(),
                emit_comparison(rank_max, &policy)?
            );
            emit(csv.as_ref(), &text)?
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
