//! The `quon` command-line tool.

pub mod circuit_text;
pub mod document;
pub mod dot;
pub mod error;
pub mod numbers;
pub mod script;
pub mod simplify;

use clap::{Args, Parser, Subcommand};
use document::{parse_diagram, serialize_diagram, serialize_document, DiagramDocument};
use error::{usage, CliError};
use numbers::{format_complex, parse_complex};
use quon_core::classify::classify;
use quon_core::compile::{circuit_amplitude, compile_circuit};
use quon_core::factory::{evaluate_component, evaluate_component_expanded, replay};
use quon_core::ising::{
    build_ising_quon, dual_coupling, kw_interior_skeleton, kw_rewrite_chain, partition_oracle, self_dual_coupling, skeletons_match, star_skeleton,
    star_triangle_residual, star_triangle_solve, IsingEdge, IsingLattice,
};
use quon_core::quon::{encode_basis, evaluate_closed_quon, evaluate_closed_quon_fast, evaluate_closed_quon_oracle, BasisAssignment, QuonDiagram};
use quon_core::{Complex64, QuonError};
use serde::Deserialize;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "quon", version, about = "Evaluate, rewrite and compile Quon diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value of a closed diagram.
    Eval(EvalArgs),
    /// Amplitude of a diagram with its intervals closed by basis encoders,
    /// or of a circuit between computational basis states.
    Amplitude(AmplitudeArgs),
    /// Remove holes, cancel braid pairs and reduce quarter-turn scatterings.
    Simplify(SimplifyArgs),
    /// Clifford / matchgate classification report.
    Classify(ClassifyArgs),
    /// Compile a text circuit into a diagram document.
    Compile(CompileArgs),
    /// Ising partition function on a square grid.
    Ising(IsingArgs),
    /// Solve the star-to-triangle relation for three star weights.
    StarTriangle(StarTriangleArgs),
    /// Replay a factory move script on a seed diagram.
    Factory(FactoryArgs),
    /// Render a diagram as Graphviz DOT.
    EmitDot(EmitDotArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub file: PathBuf,
    /// Dense Fock-space evaluation (small widths only).
    #[arg(long, conflicts_with = "fast")]
    pub oracle: bool,
    /// Pfaffian evaluation at every width.
    #[arg(long)]
    pub fast: bool,
}

#[derive(Debug, Args)]
pub struct AmplitudeArgs {
    /// Diagram document with open intervals.
    #[arg(required_unless_present = "circuit", conflicts_with = "circuit")]
    pub file: Option<PathBuf>,
    /// Bits per open interval, comma separated (e.g. `0,1,,1`).
    #[arg(long, requires = "file")]
    pub bits: Option<String>,
    /// Text circuit file.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Input basis state for `--circuit`, one bit per qubit.
    #[arg(long = "in", requires = "circuit")]
    pub bits_in: Option<String>,
    /// Output basis state for `--circuit`.
    #[arg(long = "out", requires = "circuit")]
    pub bits_out: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimplifyArgs {
    pub file: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    pub circuit: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IsingArgs {
    #[arg(long, default_value_t = 2)]
    pub rows: usize,
    #[arg(long, default_value_t = 2)]
    pub cols: usize,
    /// Uniform coupling J/kT.
    #[arg(long = "K", default_value_t = 0.5, allow_negative_numbers = true)]
    pub k: f64,
    /// JSON lattice `{rows, cols, k, overrides: [{a, b, k}]}`; overrides the flags.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    /// Also enumerate spin configurations.
    #[arg(long)]
    pub oracle: bool,
    /// Run the Kramers–Wannier rewrite chain and report each step.
    #[arg(long)]
    pub kw: bool,
}

#[derive(Debug, Args)]
pub struct StarTriangleArgs {
    /// Three star weights, comma separated; each may be complex (`a+bi`).
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
}

#[derive(Debug, Args)]
pub struct FactoryArgs {
    pub seed: PathBuf,
    #[arg(long)]
    pub script: PathBuf,
    /// Evaluate one component: bits per open interval, comma separated.
    #[arg(long)]
    pub component: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmitDotArgs {
    pub file: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    rows: usize,
    cols: usize,
    k: f64,
    #[serde(default)]
    overrides: Vec<IsingEdge>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn load(path: &Path) -> Result<QuonDiagram, CliError> {
    parse_diagram(&read(path)?)
}

fn require_closed(q: &QuonDiagram) -> Result<(), CliError> {
    if !q.core.is_closed() || !q.open_intervals.is_empty() {
        return Err(QuonError::NotClosed.into());
    }
    Ok(())
}

fn interval_bits(spec: &str) -> Result<BasisAssignment, CliError> {
    let bits = spec.split(',').map(circuit_text::parse_bits).collect::<Result<_, _>>()?;
    Ok(BasisAssignment { bits })
}

fn lattice(args: &IsingArgs) -> Result<IsingLattice, CliError> {
    let Some(path) = &args.lattice else {
        return Ok(IsingLattice::square(args.rows, args.cols, args.k)?);
    };
    let text = read(path)?;
    let spec: LatticeFile =
        serde_json::from_str(&text).map_err(|e| CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    let mut l = IsingLattice::square(spec.rows, spec.cols, spec.k)?;
    for e in spec.overrides {
        if l.set_coupling(e.a, e.b, e.k).is_err() {
            l.edges.push(e);
        }
    }
    Ok(IsingLattice::new(l.rows, l.cols, l.edges)?)
}

fn run_ising(args: &IsingArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let l = lattice(args)?;
    let q = build_ising_quon(&l)?;
    let z = evaluate_closed_quon(&q)?;
    let mut text = format!("sites: {}\nedges: {}\nZ: {:.15e}\n", l.sites(), l.edges.len(), z.re);
    if args.oracle {
        let exact = partition_oracle(&l)?;
        text += &format!("Z_oracle: {exact:.15e}\nrelative_error: {:.3e}\n", (z.re - exact).abs() / exact.abs());
    }
    if args.kw {
        let chain = kw_rewrite_chain(&l)?;
        for (i, step) in chain.steps.iter().enumerate() {
            let v = evaluate_closed_quon(&step.diagram)?;
            text += &format!("kw_step {i} {:?}: {}\n", step.kind, format_complex(v));
        }
        let last = &chain.steps.last().expect("chain has an initial step").diagram;
        let matches = skeletons_match(&kw_interior_skeleton(&l, last)?, &star_skeleton(&build_ising_quon(&chain.dual_lattice)?), 1e-9);
        text += &format!("dual_lattice: {}x{}\ndual_skeleton_matches: {matches}\n", chain.dual_lattice.rows, chain.dual_lattice.cols);
        let ks: Vec<String> = l.edges.iter().map(|e| dual_coupling(e.k).map(|d| format!("{d:.12}"))).collect::<Result<_, _>>()?;
        text += &format!("dual_couplings: {}\nself_dual_K: {:.15}\n", ks.join(","), self_dual_coupling());
    }
    emit(out, None, &text)
}

fn run_star_triangle(args: &StarTriangleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let u: Vec<Complex64> = args
        .u
        .split(',')
        .map(|w| parse_complex(w).ok_or_else(|| usage(format!("bad weight `{w}`"))))
        .collect::<Result<_, _>>()?;
    let u: [Complex64; 3] = u.try_into().map_err(|_| usage("--u needs exactly three weights"))?;
    let sol = star_triangle_solve(u)?;
    let v: Vec<String> = sol.v.iter().map(|&x| format_complex(x)).collect();
    let text = format!("v: {}\nR: {}\nresidual: {:.3e}\n", v.join(","), format_complex(sol.r), star_triangle_residual(u, &sol));
    emit(out, None, &text)
}

fn run_factory(args: &FactoryArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let seed = load(&args.seed)?;
    let base = args.script.parent().unwrap_or(Path::new("."));
    let moves = script::parse_script(&read(&args.script)?, base)?;
    let (q, ledger) = replay(&seed, &moves)?;
    if let Some(spec) = &args.component {
        let bits = interval_bits(spec)?;
        let direct = evaluate_component(&q, &bits)?;
        let expanded = evaluate_component_expanded(&q, &ledger, &bits)?;
        eprintln!("component: {}", format_complex(direct));
        eprintln!("expanded: {} ({} terms)", format_complex(expanded.value), expanded.terms);
    }
    eprintln!("moves: {}\ntransformed_scatterings: {}", ledger.moves.len(), ledger.n_s());
    emit(out, args.output.as_deref(), &serialize_document(&DiagramDocument::from_quon(&q, Some(ledger))))
}

/// Runs one parsed command, writing results to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Eval(a) => {
            let q = load(&a.file)?;
            require_closed(&q)?;
            let v = if a.oracle {
                evaluate_closed_quon_oracle(&q)?
            } else if a.fast {
                evaluate_closed_quon_fast(&q)?
            } else {
                evaluate_closed_quon(&q)?
            };
            emit(out, None, &format!("{}\n", format_complex(v)))
        }
        Command::Amplitude(a) => {
            let v = match (&a.file, &a.circuit) {
                (Some(file), _) => {
                    let q = load(file)?;
                    let bits = match &a.bits {
                        Some(spec) => interval_bits(spec)?,
                        None => BasisAssignment { bits: vec![] },
                    };
                    evaluate_closed_quon(&encode_basis(&q, &bits)?)?
                }
                (None, Some(path)) => {
                    let c = circuit_text::parse_circuit(&read(path)?)?;
                    let zeros = "0".repeat(c.n_qubits);
                    let bits_in = circuit_text::parse_bits(a.bits_in.as_deref().unwrap_or(&zeros))?;
                    let bits_out = circuit_text::parse_bits(a.bits_out.as_deref().unwrap_or(&zeros))?;
                    circuit_amplitude(&c, &bits_in, &bits_out)?
                }
                (None, None) => return Err(usage("give a diagram file or --circuit")),
            };
            emit(out, None, &format!("{}\n", format_complex(v)))
        }
        Command::Simplify(a) => {
            let q = load(&a.file)?;
            let (s, stats) = simplify::simplify(&q);
            eprintln!(
                "genus_removals: {}\nbraid_cancellations: {}\nscattering_reductions: {}\nelements: {} -> {}",
                stats.genus_removals,
                stats.braid_cancellations,
                stats.scattering_reductions,
                q.core.len(),
                s.core.len()
            );
            if q.core.is_closed() && q.open_intervals.is_empty() {
                let (before, after) = (evaluate_closed_quon(&q)?, evaluate_closed_quon(&s)?);
                let delta = (before - after).norm();
                eprintln!("before: {}\nafter: {}\ndelta: {delta:.3e}", format_complex(before), format_complex(after));
                if delta > 1e-9 * before.norm().max(1.0) {
                    return Err(QuonError::InvalidDiagram(format!("simplification changed the value by {delta:.3e}")).into());
                }
            }
            emit(out, a.output.as_deref(), &serialize_diagram(&s))
        }
        Command::Classify(a) => {
            let q = load(&a.file)?;
            let r = classify(&q);
            let text = if a.json {
                serde_json::to_string_pretty(&r).expect("report serializes") + "\n"
            } else {
                format!(
                    "clifford_form: {}\nmatchgate_form: {}\npunctured_matchgate_form: {}\nhole_count: {}\ngeneric_scattering_count: {}\nboundary_tracking_ok: {}\n",
                    r.clifford_form, r.matchgate_form, r.punctured_matchgate_form, r.hole_count, r.generic_scattering_count, r.boundary_tracking_ok
                )
            };
            emit(out, None, &text)
        }
        Command::Compile(a) => {
            let c = circuit_text::parse_circuit(&read(&a.circuit)?)?;
            let q = compile_circuit(&c)?;
            emit(out, a.output.as_deref(), &serialize_diagram(&q))
        }
        Command::Ising(a) => run_ising(&a, out),
        Command::StarTriangle(a) => run_star_triangle(&a, out),
        Command::Factory(a) => run_factory(&a, out),
        Command::EmitDot(a) => {
            let q = load(&a.file)?;
            emit(out, a.output.as_deref(), &dot::to_dot(&q))
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

