//! `gyb`: batch verification and enumeration for the qubit braid-group
//! representations built from the generalized Yang-Baxter matrix `R`.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input,
//! 3 an enumeration hit `--max-elements`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gyb_braid::braidrep::{check_braid_relation, check_far_commutativity, check_gyb, eval_word};
use gyb_braid::gates::{build_r_decomposed, comm_identities_check, not_identities_check};
use gyb_braid::image_group::{
    enumerate_image, operator_distinctness, symbolic_to_matrix, witness_distinctness,
    witness_operators, witness_state_label, witness_words, word_to_symbolic, WitnessKind,
};
use gyb_braid::qlinalg::{basis_index, max_entry_distance};
use gyb_braid::report::{Backend, CheckReport, EnumerationReport};
use gyb_braid::{BraidWord, RepContext, Tolerances};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "gyb", version, about = "Verify and enumerate gYB braid group representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the gYB equation, the gate decomposition of R, the braid
    /// relations and the commutation lemmas.
    Check(Common),
    /// Evaluate a braid word as a matrix and as a normal form.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Whitespace-separated signed generator indices, e.g. "1 2 -1".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        word: String,
    },
    /// Enumerate the image group and compare with m^(n(n-1)/2) * n!.
    Image {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = BackendArg::Both)]
        backend: BackendArg,
    },
    /// Check that the NOT witness words act distinctly on a basis state.
    Witness {
        #[command(flatten)]
        common: Common,
        /// Basis state label on n+1 qubits; defaults to the standard witness state.
        #[arg(long)]
        state: Option<String>,
        /// Append a copy of the first word, which must make the check fail.
        #[arg(long)]
        inject_duplicate: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Number of strands (the representation acts on n+1 qubits).
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Odd integer m >= 3.
    #[arg(long, default_value_t = 3)]
    m: u32,
    /// Equality tolerance for matrix comparisons.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Rounding grid for canonical matrix keys.
    #[arg(long, default_value_t = 1e-6)]
    grid: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_elements: u64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Human,
    Structured,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum BackendArg {
    Matrix,
    Symbolic,
    Both,
}

/// One named section of output.
struct Entry {
    name: String,
    pass: bool,
    truncated: bool,
    human: String,
    structured: Value,
}

impl From<CheckReport> for Entry {
    fn from(r: CheckReport) -> Self {
        Entry {
            name: r.check_name.clone(),
            pass: r.pass,
            truncated: false,
            human: r.to_string(),
            structured: serde_json::to_value(&r).expect("report serializes"),
        }
    }
}

impl From<EnumerationReport> for Entry {
    fn from(r: EnumerationReport) -> Self {
        Entry {
            name: format!("{}.{}", r.check_name, r.backend),
            pass: r.pass,
            truncated: r.truncated,
            human: r.to_string(),
            structured: serde_json::to_value(&r).expect("report serializes"),
        }
    }
}

fn context(c: &Common) -> gyb_braid::Result<RepContext> {
    let tol = Tolerances {
        eq: c.tol,
        grid: c.grid,
        ..Tolerances::default()
    };
    RepContext::with_tolerances(c.n, c.m, tol)
}

fn cmd_check(c: &Common) -> gyb_braid::Result<Vec<Entry>> {
    let ctx = context(c)?;
    let tol = c.tol;
    let mut gyb = check_gyb(ctx.r(), tol)?;
    gyb.m = c.m;

    let mut decomposition = CheckReport::new(ctx.n(), c.m, "r_decomposition");
    decomposition.record(
        || "R vs gate product".into(),
        max_entry_distance(ctx.r(), &build_r_decomposed(c.m)?)?,
        tol,
    );

    let mut reports = vec![
        gyb,
        decomposition,
        check_far_commutativity(&ctx, tol)?,
        check_braid_relation(&ctx, tol)?,
    ];
    reports.extend(comm_identities_check(ctx.params())?);
    reports.extend(not_identities_check(ctx.params())?);
    Ok(reports.into_iter().map(Entry::from).collect())
}

fn cmd_eval(c: &Common, text: &str) -> gyb_braid::Result<Vec<Entry>> {
    let ctx = context(c)?;
    let word = BraidWord::parse(text, c.n)?;
    let matrix = eval_word(&word, &ctx)?;
    let normal = word_to_symbolic(&word, &ctx)?;
    let residual = max_entry_distance(&matrix, &symbolic_to_matrix(&normal, &ctx)?)?;

    let mut cross = CheckReport::new(c.n, c.m, "eval.cross_check");
    cross.record(|| format!("word \"{word}\""), residual, c.tol);
    let export = matrix.to_export_text();
    let entries = vec![
        Entry::from(cross),
        Entry {
            name: "eval.matrix".into(),
            pass: true,
            truncated: false,
            human: format!("matrix: {export}"),
            structured: serde_json::from_str(&export).expect("export text is valid structured text"),
        },
        Entry {
            name: "eval.normal_form".into(),
            pass: true,
            truncated: false,
            human: format!("normal form of \"{word}\": {normal}"),
            structured: normal.to_json(),
        },
    ];
    Ok(entries)
}

fn cmd_image(c: &Common, backend: BackendArg) -> gyb_braid::Result<Vec<Entry>> {
    let ctx = context(c)?;
    let backends: &[Backend] = match backend {
        BackendArg::Matrix => &[Backend::Matrix],
        BackendArg::Symbolic => &[Backend::Symbolic],
        BackendArg::Both => &[Backend::Matrix, Backend::Symbolic],
    };
    backends
        .iter()
        .map(|&b| enumerate_image(&ctx, c.max_elements, b).map(Entry::from))
        .collect()
}

fn cmd_witness(c: &Common, state: Option<&str>, inject_duplicate: bool) -> gyb_braid::Result<Vec<Entry>> {
    let ctx = context(c)?;
    let mut words = witness_words(c.n)?;
    if inject_duplicate {
        words.push(words[0].clone());
    }
    let label = match state {
        Some(s) => s.trim_matches(|ch| ch == '|' || ch == '>' || ch == '⟩').to_string(),
        None => witness_state_label(c.n)?,
    };
    if label.len() != ctx.qubits() {
        return Err(gyb_braid::Error::Parse(format!(
            "state {label:?} must have n+1 = {} qubits",
            ctx.qubits()
        )));
    }
    let index = basis_index(&label)?;

    let mut entries = Vec::new();
    for (kind, name) in [(WitnessKind::PlainNot, "not"), (WitnessKind::GammaNot, "gamma_not")] {
        let ops = witness_operators(&words, kind, &ctx)?;
        let mut on_state = witness_distinctness(&ops, index, c.n, c.m)?;
        on_state.check_name = format!("witness.{name}.state_{label}");
        let mut as_ops = operator_distinctness(&ops, c.grid, c.n, c.m)?;
        as_ops.check_name = format!("witness.{name}.operators");
        entries.push(Entry::from(on_state));
        entries.push(Entry::from(as_ops));
    }
    Ok(entries)
}

fn render(entries: &[Entry], command: &str, format: Format) -> String {
    let pass = entries.iter().all(|e| e.pass);
    match format {
        Format::Human => {
            let mut out = String::new();
            for e in entries {
                out.push_str(&e.human);
                out.push('\n');
            }
            out.push_str(if entries.iter().any(|e| e.truncated) {
                "enumeration stopped at --max-elements\n"
            } else if pass {
                "all checks passed\n"
            } else {
                "some checks FAILED\n"
            });
            out
        }
        Format::Structured => {
            let reports: serde_json::Map<String, Value> =
                entries.iter().map(|e| (e.name.clone(), e.structured.clone())).collect();
            let doc = json!({ "command": command, "pass": pass, "reports": reports });
            let mut text = serde_json::to_string(&doc).expect("report serializes");
            text.push('\n');
            text
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let (common, name) = match &cli.command {
        Command::Check(c) => (c, "check"),
        Command::Eval { common, .. } => (common, "eval"),
        Command::Image { common, .. } => (common, "image"),
        Command::Witness { common, .. } => (common, "witness"),
    };
    if let Some(t) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let result = match &cli.command {
        Command::Check(c) => cmd_check(c),
        Command::Eval { common, word } => cmd_eval(common, word),
        Command::Image { common, backend } => cmd_image(common, *backend),
        Command::Witness {
            common,
            state,
            inject_duplicate,
        } => cmd_witness(common, state.as_deref(), *inject_duplicate),
    };
    let mut entries = result.map_err(|e| e.to_string())?;
    entries.sort_by(|a, b| a.name.cmp(&b.name));

    let text = render(&entries, name, common.format);
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }

    Ok(if entries.iter().any(|e| e.truncated) {
        3
    } else if entries.iter().all(|e| e.pass) {
        0
    } else {
        1
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
