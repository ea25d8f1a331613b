//! `tlqc`: compile unitaries into fully controlled gate circuits.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tlqc_core::linalg::{RECONSTRUCTION_TOL, UNITARY_TOL};
use tlqc_core::optimize::column_subcircuits;
use tlqc_core::{
    build_trie, cancel_pass, construct_circuit, gray_code, random_unitary, two_level_decompose, verify, Circuit,
    GateCounts, Matrix, OrderArray, OrderKind,
};

#[derive(Parser)]
#[command(
    name = "tlqc",
    version,
    about = "Two-level decomposition compiler for n-qubit unitaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a unitary matrix file into a circuit file.
    Compile(CompileArgs),
    /// Print gate counts per qubit count as TSV (n, palindromic, conventional, no_canceling).
    Count(CountArgs),
    /// Print an ordering array in the order file format.
    Order(OrderArgs),
    /// Print the Gray code between two basis states, one code per line.
    Gray(GrayArgs),
    /// Dump the palindrome trie of a circuit file or of one column of an ordering.
    Trie(TrieArgs),
    /// Write a seeded random unitary in the matrix file format.
    Random(RandomArgs),
    /// Check a circuit file against a matrix file.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CompileArgs {
    /// Input matrix file.
    #[arg(long)]
    input: PathBuf,
    /// `conventional`, `poa`, or a path to an order file.
    #[arg(long, default_value = "poa")]
    order: String,
    /// Output circuit file.
    #[arg(long)]
    output: PathBuf,
    /// Cancel adjacent identical controlled-X gates.
    #[arg(long)]
    cancel: bool,
    /// Omit subcircuits whose component matrix is the identity.
    #[arg(long)]
    skip_identity: bool,
    /// Simulate the written circuit and print a verification report.
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountMode {
    Formula,
    Enumerate,
    Both,
}

#[derive(Args)]
struct CountArgs {
    /// Single qubit count.
    #[arg(long, conflicts_with = "range", required_unless_present = "range")]
    n: Option<u32>,
    /// Inclusive range `a..b` of qubit counts.
    #[arg(long)]
    range: Option<String>,
    /// Closed-form formulas, structural enumeration, or both (exits 2 on disagreement).
    #[arg(long, value_enum, default_value = "both")]
    mode: CountMode,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderMode {
    Conventional,
    Poa,
}

impl From<OrderMode> for OrderKind {
    fn from(m: OrderMode) -> Self {
        match m {
            OrderMode::Conventional => OrderKind::Conventional,
            OrderMode::Poa => OrderKind::Poa,
        }
    }
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "poa")]
    mode: OrderMode,
}

#[derive(Args)]
struct GrayArgs {
    #[arg(long)]
    n: usize,
    /// Starting basis state.
    #[arg(long)]
    from: usize,
    /// Final basis state.
    #[arg(long)]
    to: usize,
}

#[derive(Args)]
struct TrieArgs {
    /// Uncancelled circuit file.
    #[arg(long, conflicts_with_all = ["n", "order"])]
    input: Option<PathBuf>,
    /// Qubit count, used with `--order` and `--column`.
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    /// `conventional`, `poa`, or a path to an order file.
    #[arg(long, default_value = "poa")]
    order: String,
    /// Restrict to the subcircuits of one column.
    #[arg(long)]
    column: Option<usize>,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output matrix file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Matrix file.
    #[arg(long)]
    input: PathBuf,
    /// Circuit file.
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, default_value_t = RECONSTRUCTION_TOL)]
    tol: f64,
}

/// Exit status for failed verification or formula/enumeration disagreement.
const CHECK_FAILED: u8 = 2;

fn main() -> ExitCode {
    env_logger::init();
    // Usage errors are input errors; clap's own status 2 is reserved for failed checks.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Compile(a) => compile(a),
        Command::Count(a) => count(a),
        Command::Order(a) => order(a),
        Command::Gray(a) => gray(a),
        Command::Trie(a) => trie(a),
        Command::Random(a) => random(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_order(arg: &str, n: usize) -> anyhow::Result<OrderArray> {
    let order = match arg.parse::<OrderKind>() {
        Ok(kind) => kind.build(n)?,
        Err(_) => OrderArray::parse(&read(Path::new(arg))?).with_context(|| format!("loading order file {arg}"))?,
    };
    if order.n() != n {
        bail!("order is for {} qubits, expected {n}", order.n());
    }
    Ok(order)
}

fn load_matrix(path: &Path) -> anyhow::Result<Matrix> {
    let u = Matrix::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    u.check_finite()?;
    u.num_qubits()
        .ok_or_else(|| anyhow!("matrix dimension {} is not a power of two >= 2", u.dim()))?;
    u.check_unitary(UNITARY_TOL)
        .with_context(|| format!("{} is not unitary", path.display()))?;
    Ok(u)
}

fn compile(a: CompileArgs) -> anyhow::Result<ExitCode> {
    let u = load_matrix(&a.input)?;
    let n = u.num_qubits().expect("checked by load_matrix");
    let order = load_order(&a.order, n)?;
    let d = two_level_decompose(&u, &order)?;
    let mut circuit = construct_circuit(&d, a.skip_identity)?;
    if a.cancel {
        circuit = cancel_pass(&circuit);
    }
    let text = circuit.to_text();
    fs::write(&a.output, &text).with_context(|| format!("writing {}", a.output.display()))?;
    if a.verify {
        let reread = Circuit::parse(&read(&a.output)?)?;
        let report = verify(&u, &reread, RECONSTRUCTION_TOL)?;
        println!("{report}");
        if !report.pass {
            return Ok(ExitCode::from(CHECK_FAILED));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_range(s: &str) -> anyhow::Result<(u32, u32)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("expected range `a..b`, found `{s}`"))?;
    let a: u32 = a.trim().parse().with_context(|| format!("bad range start `{a}`"))?;
    let b: u32 = b.trim().parse().with_context(|| format!("bad range end `{b}`"))?;
    if a > b {
        bail!("empty range {s}");
    }
    Ok((a, b))
}

fn count(a: CountArgs) -> anyhow::Result<ExitCode> {
    let (lo, hi) = match (a.n, &a.range) {
        (Some(n), _) => (n, n),
        (None, Some(r)) => parse_range(r)?,
        (None, None) => bail!("one of --n or --range is required"),
    };
    if lo < 2 || hi > 12 {
        bail!("qubit counts must lie in 2..=12");
    }
    let mut consistent = true;
    for n in lo..=hi {
        let row = match a.mode {
            CountMode::Formula => GateCounts::from_formulas(n),
            CountMode::Enumerate => GateCounts::enumerate(n)?,
            CountMode::Both => {
                let formula = GateCounts::from_formulas(n);
                let counted = GateCounts::enumerate(n)?;
                if formula != counted {
                    eprintln!(
                        "mismatch at n={n}: formula {} vs enumeration {}",
                        formula.to_tsv(),
                        counted.to_tsv()
                    );
                    consistent = false;
                }
                formula
            }
        };
        println!("{}", row.to_tsv());
    }
    Ok(if consistent {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CHECK_FAILED)
    })
}

fn order(a: OrderArgs) -> anyhow::Result<ExitCode> {
    let order = OrderKind::from(a.mode).build(a.n)?;
    print!("{}", order.to_text());
    Ok(ExitCode::SUCCESS)
}

fn gray(a: GrayArgs) -> anyhow::Result<ExitCode> {
    for code in gray_code(a.from, a.to, a.n)?.to_strings() {
        println!("{code}");
    }
    Ok(ExitCode::SUCCESS)
}

fn trie(a: TrieArgs) -> anyhow::Result<ExitCode> {
    let mut subs = match (&a.input, a.n) {
        (Some(path), _) => Circuit::parse(&read(path)?)?
            .split_subcircuits()
            .context("trie input must be an uncancelled circuit")?,
        (None, Some(n)) => {
            let order = load_order(&a.order, n)?;
            let mut subs = Vec::new();
            for c in 0..order.columns().len() {
                subs.extend(column_subcircuits(&order, c)?);
            }
            subs
        }
        (None, None) => bail!("one of --input or --n is required"),
    };
    if let Some(c) = a.column {
        subs.retain(|s| s.pair().1 == c);
        if subs.is_empty() {
            bail!("no subcircuits in column {c}");
        }
    }
    let t = build_trie(&subs)?;
    print!("{}", t.dump());
    println!(
        "leaves={} interior={} count={}",
        t.num_leaves(),
        t.num_interior(),
        t.gate_count()
    );
    Ok(ExitCode::SUCCESS)
}

fn random(a: RandomArgs) -> anyhow::Result<ExitCode> {
    let text = random_unitary(a.n, a.seed)?.to_text();
    match a.output {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    let u = load_matrix(&a.input)?;
    let circuit = Circuit::parse(&read(&a.circuit)?)?;
    let report = verify(&u, &circuit, a.tol)?;
    println!("{report}");
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CHECK_FAILED)
    })
}
