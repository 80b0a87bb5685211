use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shallowq::generators::{gen_qft, gen_random, gen_staircase, random_unitary2, rng_from_seed, RandomFamily};
use shallowq::linalg::complex::{hadamard, mat2_identity, pauli_x, pauli_z, phase_gate};
use shallowq::linalg::{ComplexMatrix, Mat2};
use shallowq::passes::{
    cnot_parallelize, commuting_fanin_parallelize, diag_compress, diag_fanin_parallelize, fanout_parallelize,
    morse_synthesize, permute_no_ancillae, permute_with_ancillae, power_circuit, power_reference, PassResult,
};
use shallowq::sim::{
    full_unitary, gf2_simulate, is_monomial, phase_vector, verify_embedding_gf2, verify_embedding_monomial,
    verify_embedding_seeded, EmbeddingReport, DENSE_MAX_QUBITS, SIM_MAX_QUBITS,
};
use shallowq::{schedule_greedy, Circuit, Gate, Permutation};

use crate::format::{CircuitFile, FormatError};
use crate::report::{Report, Verification};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "shallowq", version, about = "Depth-reducing rewrites for quantum circuits")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for random generators and sampled verification.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for numerical verification.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// Largest total qubit count simulated densely.
    #[arg(long, global = true, default_value_t = SIM_MAX_QUBITS)]
    pub max_sim_qubits: usize,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Input circuit file.
    #[arg(long = "in", global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Output circuit file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a circuit.
    Gen(GenArgs),
    /// Apply a depth-reducing pass.
    Parallelize(ParallelizeArgs),
    /// Check that a candidate circuit embeds the input circuit.
    Verify(VerifyArgs),
    /// Greedy depth of a circuit.
    Depth,
    /// Widths, gate counts by kind and depth.
    Stats,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GenKind {
    Qft,
    Staircase,
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub kind: GenKind,
    #[arg(long)]
    pub n: usize,
    /// One-qubit unitary for staircases: hadamard, x, z, s, t, identity or random.
    #[arg(long, default_value = "hadamard")]
    pub unitary: String,
    /// Random family: cnot, diagonal-2q, controlled-commuting or permutation.
    #[arg(long, default_value = "cnot")]
    pub family: String,
    /// Gate count for random families.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PassName {
    PermuteAnc,
    Permute,
    Fanout,
    DiagFanin,
    CommuteFanin,
    DiagCompress,
    Cnot,
    Morse,
    Power,
}

impl PassName {
    fn as_str(self) -> &'static str {
        match self {
            Self::PermuteAnc => "permute-anc",
            Self::Permute => "permute",
            Self::Fanout => "fanout",
            Self::DiagFanin => "diag-fanin",
            Self::CommuteFanin => "commute-fanin",
            Self::DiagCompress => "diag-compress",
            Self::Cnot => "cnot",
            Self::Morse => "morse",
            Self::Power => "power",
        }
    }
}

#[derive(Debug, Args)]
pub struct ParallelizeArgs {
    #[arg(long, value_enum)]
    pub pass: PassName,
    /// Verify the output against the input and exit 3 on failure.
    #[arg(long)]
    pub verify: bool,
    /// Permutation images for the permutation passes, e.g. "1,2,0".
    #[arg(long)]
    pub perm: Option<String>,
    /// Control register size for the power pass.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Unitary for the power pass when no input file is given.
    #[arg(long)]
    pub unitary: Option<String>,
    /// Use the logarithmic-depth variant of diag-compress.
    #[arg(long)]
    pub log_depth: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodChoice {
    Auto,
    Dense,
    Gf2,
    Monomial,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Candidate circuit whose extra qubits are treated as ancillae.
    #[arg(long, value_name = "PATH")]
    pub candidate: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io(_) | Self::Parse(_) => EXIT_IO,
            Self::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::Parse(m) => write!(f, "parse error: {m}"),
            Self::Precondition(m) => write!(f, "precondition violated: {m}"),
        }
    }
}

impl From<shallowq::Error> for CliError {
    fn from(e: shallowq::Error) -> Self {
        Self::Precondition(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        Self::Parse(e.0)
    }
}

/// What a successful command prints and the exit code it ends with.
#[derive(Debug)]
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    if g.max_sim_qubits == 0 || g.max_sim_qubits > SIM_MAX_QUBITS {
        return Err(CliError::Precondition(format!(
            "--max-sim-qubits must be in 1..={SIM_MAX_QUBITS}"
        )));
    }
    if !(g.tolerance >= 0.0) {
        return Err(CliError::Precondition("--tolerance must be non-negative".into()));
    }
    let start = Instant::now();
    let (mut report, emitted) = match &cli.command {
        Command::Gen(args) => cmd_gen(g, args)?,
        Command::Parallelize(args) => (cmd_parallelize(g, args)?, None),
        Command::Verify(args) => (cmd_verify(g, args)?, None),
        Command::Depth => (cmd_depth(g)?, None),
        Command::Stats => (cmd_stats(g)?, None),
    };
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let code = match &report.verification {
        Some(v) if !v.passed() => EXIT_VERIFY_FAILED,
        _ => EXIT_OK,
    };
    let stdout = match emitted {
        Some(json) if !g.json => json,
        _ if g.json => report.to_json() + "\n",
        _ => report.to_text(),
    };
    Ok(Output { stdout, code })
}

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    CircuitFile::parse(&text)
        .and_then(|f| f.to_circuit())
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, file: &CircuitFile) -> Result<(), CliError> {
    fs::write(path, file.to_json() + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn require_input(g: &GlobalArgs) -> Result<&Path, CliError> {
    g.input
        .as_deref()
        .ok_or_else(|| CliError::Precondition("--in is required".into()))
}

pub fn named_unitary(name: &str, seed: u64) -> Result<Mat2, CliError> {
    Ok(match name {
        "hadamard" | "h" => hadamard(),
        "x" => pauli_x(),
        "z" => pauli_z(),
        "s" => phase_gate(std::f64::consts::FRAC_PI_2),
        "t" => phase_gate(std::f64::consts::FRAC_PI_4),
        "identity" | "i" => mat2_identity(),
        "random" => random_unitary2(&mut rng_from_seed(seed)),
        other => {
            return Err(CliError::Precondition(format!(
                "unknown unitary {other:?} (expected hadamard, x, z, s, t, identity or random)"
            )))
        }
    })
}

fn cmd_gen(g: &GlobalArgs, args: &GenArgs) -> Result<(Report, Option<String>), CliError> {
    let circuit = match args.kind {
        GenKind::Qft => {
            if args.n == 0 {
                return Err(CliError::Precondition("n must be at least 1".into()));
            }
            gen_qft(args.n)
        }
        GenKind::Staircase => gen_staircase(args.n, named_unitary(&args.unitary, g.seed)?)?,
        GenKind::Random => {
            let family: RandomFamily = args.family.parse()?;
            gen_random(family, args.n, args.count, g.seed)?
        }
    };
    let file = CircuitFile::from_circuit(&circuit);
    let mut report = Report::new("gen");
    report.width_data = Some(circuit.width_data);
    report.output_gates = Some(circuit.len());
    report.depth_after = Some(schedule_greedy(&circuit)?.depth());
    match &g.out {
        Some(path) => {
            write_file(path, &file)?;
            report.notes.push(format!("wrote {}", path.display()));
            Ok((report, None))
        }
        None => Ok((report, Some(file.to_json() + "\n"))),
    }
}

fn parse_perm(text: &str) -> Result<Permutation, CliError> {
    let images = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Precondition(format!("bad --perm: {e}")))?;
    Ok(Permutation::new(images)?)
}

fn permutation_of(circuit: &Circuit) -> Result<Permutation, CliError> {
    let m = gf2_simulate(circuit)?;
    Permutation::from_gf2(&m).map_err(|_| {
        CliError::Precondition("input circuit's linear map is not a wire permutation".into())
    })
}

fn is_cnot_only(c: &Circuit) -> bool {
    c.gates.iter().all(|g| matches!(g, Gate::Cnot { .. }))
}

/// Chooses the cheapest exact check available, falling back to dense
/// simulation within the qubit cap.
pub fn verify_pair(
    g: &GlobalArgs,
    reference: &Circuit,
    candidate: &Circuit,
    method: MethodChoice,
) -> Result<EmbeddingReport, CliError> {
    let method = match method {
        MethodChoice::Auto if is_cnot_only(reference) && is_cnot_only(candidate) => MethodChoice::Gf2,
        MethodChoice::Auto
            if reference.gates.iter().chain(&candidate.gates).all(is_monomial) =>
        {
            MethodChoice::Monomial
        }
        MethodChoice::Auto => MethodChoice::Dense,
        m => m,
    };
    let report = match method {
        MethodChoice::Gf2 => verify_embedding_gf2(reference, candidate)?,
        MethodChoice::Monomial => verify_embedding_monomial(reference, candidate, g.tolerance)?,
        _ => {
            let total = candidate.total_width();
            if total > g.max_sim_qubits {
                return Err(CliError::Precondition(format!(
                    "dense verification needs {total} qubits, above --max-sim-qubits {}",
                    g.max_sim_qubits
                )));
            }
            verify_embedding_seeded(reference, candidate, g.tolerance, g.seed)?
        }
    };
    Ok(report)
}

fn cmd_parallelize(g: &GlobalArgs, args: &ParallelizeArgs) -> Result<Report, CliError> {
    let input = match (args.pass, &g.input) {
        (_, Some(path)) => Some(read_circuit(path)?),
        (PassName::Power, None) => None,
        (PassName::Permute | PassName::PermuteAnc, None) if args.perm.is_some() => None,
        _ => return Err(CliError::Precondition("--in is required".into())),
    };
    let (result, reference): (PassResult, Circuit) = match args.pass {
        PassName::PermuteAnc | PassName::Permute => {
            let (p, reference) = match (&args.perm, &input) {
                (Some(text), _) => {
                    let p = parse_perm(text)?;
                    let reference = p.to_swap_circuit();
                    (p, reference)
                }
                (None, Some(c)) => (permutation_of(c)?, c.clone()),
                (None, None) => unreachable!("input checked above"),
            };
            let r = if args.pass == PassName::PermuteAnc {
                permute_with_ancillae(&p)?
            } else {
                permute_no_ancillae(&p)?
            };
            (r, reference)
        }
        PassName::Power => {
            let u = match (&input, &args.unitary) {
                (Some(c), _) => {
                    if c.total_width() > DENSE_MAX_QUBITS {
                        return Err(CliError::Precondition(format!(
                            "power pass input is limited to {DENSE_MAX_QUBITS} qubits"
                        )));
                    }
                    full_unitary(c)?
                }
                (None, name) => ComplexMatrix::from_mat2(&named_unitary(name.as_deref().unwrap_or("random"), g.seed)?),
            };
            (power_circuit(&u, args.k)?, power_reference(&u, args.k)?)
        }
        pass => {
            let c = input.expect("input checked above");
            let r = match pass {
                PassName::Fanout => fanout_parallelize(&c)?,
                PassName::DiagFanin => diag_fanin_parallelize(&c)?,
                PassName::CommuteFanin => commuting_fanin_parallelize(&c)?,
                PassName::DiagCompress => diag_compress(&c, args.log_depth)?,
                PassName::Cnot => cnot_parallelize(&c)?,
                PassName::Morse => {
                    if c.width_ancilla != 0 {
                        return Err(CliError::Precondition("morse input must not declare ancillae".into()));
                    }
                    morse_synthesize(&phase_vector(&c)?)?
                }
                _ => unreachable!("handled above"),
            };
            (r, c)
        }
    };

    let mut report = Report::new("parallelize");
    report.pass = Some(args.pass.as_str().into());
    report.width_data = Some(reference.total_width());
    report.width_ancilla = Some(result.circuit.width_ancilla);
    report.input_gates = Some(reference.len());
    report.output_gates = Some(result.circuit.gate_count());
    report.depth_before = Some(schedule_greedy(&reference)?.depth());
    report.depth_after = Some(result.depth());
    report.ancillae_used = Some(result.ancillae_used);
    report.claimed_depth_bound = Some(result.claimed_depth_bound);
    report.notes = result.notes.clone();
    if let Some(path) = &g.out {
        write_file(path, &CircuitFile::from_layered(&result.circuit))?;
    }
    if args.verify {
        let v = verify_pair(g, &reference, &result.flatten(), MethodChoice::Auto)?;
        report.verification = Some(Verification::from(&v));
    }
    Ok(report)
}

fn cmd_verify(g: &GlobalArgs, args: &VerifyArgs) -> Result<Report, CliError> {
    let reference = read_circuit(require_input(g)?)?;
    let candidate = read_circuit(&args.candidate)?;
    let v = verify_pair(g, &reference, &candidate, args.method)?;
    let mut report = Report::new("verify");
    report.width_data = Some(reference.total_width());
    report.width_ancilla = Some(candidate.total_width().saturating_sub(reference.total_width()));
    report.input_gates = Some(reference.len());
    report.output_gates = Some(candidate.len());
    report.verification = Some(Verification::from(&v));
    Ok(report)
}

fn cmd_depth(g: &GlobalArgs) -> Result<Report, CliError> {
    let c = read_circuit(require_input(g)?)?;
    let mut report = Report::new("depth");
    report.depth_after = Some(schedule_greedy(&c)?.depth());
    Ok(report)
}

fn cmd_stats(g: &GlobalArgs) -> Result<Report, CliError> {
    let c = read_circuit(require_input(g)?)?;
    let mut kinds = BTreeMap::new();
    for gate in &c.gates {
        *kinds.entry(gate.kind_name().to_string()).or_insert(0) += 1;
    }
    let mut report = Report::new("stats");
    report.width_data = Some(c.width_data);
    report.width_ancilla = Some(c.width_ancilla);
    report.input_gates = Some(c.len());
    report.depth_after = Some(schedule_greedy(&c)?.depth());
    report.gate_kinds = Some(kinds);
    if c.gates.iter().all(Gate::is_diagonal) {
        report.notes.push("all gates diagonal".into());
    }
    if is_cnot_only(&c) {
        report.notes.push("all gates are CNOTs".into());
    }
    Ok(report)
}
