//! Command-line front end for the mortality deciders.
//!
//! Results go to stdout as a single JSON object; diagnostics go to stderr.
//! Exit status: 0 when decided (either way), 2 when undecided, 1 on input or
//! usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mortality::abc::{decide_abc, AbcInstance, AbcOutcome};
use mortality::abcd::{decide_abcd, AbcdInstance, AbcdOutcome};
use mortality::lrs::Lrs;
use mortality::oracle::{brute_mortality, brute_zero_pairs, MortalityInstance, PairsInstance};
use mortality::skolem::{skolem_decide, skolem_zero_set, SkolemOutcome, ZeroSetOutcome};
use mortality::{Error, SearchConfig};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mortality", version, about = "Exact deciders for matrix mortality over exponent triples and quadruples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

/// Overrides for the instance file's `config` block.
#[derive(Args, Default)]
struct Overrides {
    /// Bounded witness search length outside the exact classes [default: 10000]
    #[arg(long, global = true)]
    witness_cap: Option<u64>,
    /// Described zero sets are re-checked by evaluation up to this index [default: 500]
    #[arg(long, global = true)]
    verify_cap: Option<u64>,
    /// Largest absolute value enumerated for S-unit triples [default: 1000000]
    #[arg(long, global = true)]
    sunit_bound: Option<u64>,
    /// Largest common period kept when normalizing semilinear sets [default: 65536]
    #[arg(long, global = true)]
    lcm_cap: Option<u64>,
    /// Exponent cap of the brute-force short-circuit [default: 12]
    #[arg(long, global = true)]
    brute_cap: Option<u64>,
    /// Largest accepted matrix dimension [default: 16]
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Solution-set members re-verified before reporting [default: 100]
    #[arg(long, global = true)]
    sample_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Three-matrix problem: AᵐBⁿCˡ = O
    Abcz {
        #[command(subcommand)]
        action: DecideOnly,
    },
    /// Four 2x2 upper-triangular matrices: AᵏBᵐCⁿDˡ = O
    Abcdz {
        #[command(subcommand)]
        action: DecideOnly,
    },
    /// Zeros of a linear recurrence
    Skolem {
        #[command(subcommand)]
        action: SkolemAction,
    },
    /// Brute-force scans
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Subcommand)]
enum DecideOnly {
    Decide { file: PathBuf },
}

#[derive(Subcommand)]
enum SkolemAction {
    /// Whether the sequence has a zero
    Decide { file: PathBuf },
    /// The full zero set as a semilinear set
    Zeroset { file: PathBuf },
}

#[derive(Subcommand)]
enum OracleAction {
    /// All exponent tuples up to the cap with a zero product
    Mortality {
        file: PathBuf,
        #[arg(long)]
        cap: u64,
    },
    /// All (n, m) up to the caps with uᵀAⁿBᵐv = 0
    Pairs {
        file: PathBuf,
        /// Two caps, `N,M`
        #[arg(long, value_parser = parse_caps)]
        caps: (u64, u64),
    },
}

fn parse_caps(s: &str) -> Result<(u64, u64), String> {
    let (n, m) = s.split_once(',').ok_or("expected N,M")?;
    let n = n.trim().parse().map_err(|e| format!("{e}"))?;
    let m = m.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((n, m))
}

/// `{"kind": …, "config": {…}, "payload": {…}}`, or a bare payload.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    kind: Option<String>,
    #[serde(default)]
    config: Option<SearchConfig>,
    payload: Value,
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::DimensionMismatch(_) | Error::DimensionTooLarge { .. } => "dimension",
            Error::Parse(_) => "parse",
            Error::Overflow(_) => "overflow",
            _ => "invalid_input",
        };
        Failure { kind, message: e.to_string() }
    }
}

fn fail(kind: &'static str, message: impl Into<String>) -> Failure {
    Failure { kind, message: message.into() }
}

impl Overrides {
    fn apply(&self, mut cfg: SearchConfig) -> SearchConfig {
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { cfg.$f = v; })* };
        }
        set!(witness_cap, verify_cap, sunit_bound, lcm_cap, brute_cap, max_dim, sample_cap);
        cfg
    }
}

/// Reads the file, checks its kind, and returns the payload with the merged config.
fn load<T: DeserializeOwned>(path: &Path, kind: &str, overrides: &Overrides) -> Result<(T, SearchConfig), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| fail("parse", format!("malformed JSON: {e}")))?;
    let wrapped = value.as_object().is_some_and(|o| o.contains_key("payload"));
    let (payload, config) = if wrapped {
        let file: InstanceFile = serde_json::from_value(value).map_err(|e| fail("schema", e.to_string()))?;
        if let Some(k) = file.kind.as_deref().filter(|k| *k != kind) {
            return Err(fail("schema", format!("instance kind {k:?} does not match command (expected {kind:?})")));
        }
        (file.payload, file.config.unwrap_or_default())
    } else {
        (value, SearchConfig::default())
    };
    let cfg = overrides.apply(config);
    cfg.validate()?;
    let parsed = serde_json::from_value(payload).map_err(|e| fail("schema", e.to_string()))?;
    Ok((parsed, cfg))
}

/// JSON result and whether the question was decided.
fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let o = &cli.overrides;
    let to_value = |v: &dyn erased::Json| v.json();
    match &cli.command {
        Command::Abcz { action: DecideOnly::Decide { file } } => {
            let (inst, cfg): (AbcInstance, _) = load(file, "abc", o)?;
            let out = decide_abc(&inst, &cfg)?;
            let decided = !matches!(out, AbcOutcome::Undecided { .. });
            Ok((to_value(&out), decided))
        }
        Command::Abcdz { action: DecideOnly::Decide { file } } => {
            let (inst, cfg): (AbcdInstance, _) = load(file, "abcd", o)?;
            let out = decide_abcd(&inst, &cfg)?;
            let decided = !matches!(out, AbcdOutcome::Undecided { .. });
            Ok((to_value(&out), decided))
        }
        Command::Skolem { action: SkolemAction::Decide { file } } => {
            let (seq, cfg): (Lrs, _) = load(file, "lrs", o)?;
            let out = skolem_decide(&seq, &cfg);
            let decided = !matches!(out, SkolemOutcome::Undecided { .. });
            Ok((to_value(&out), decided))
        }
        Command::Skolem { action: SkolemAction::Zeroset { file } } => {
            let (seq, cfg): (Lrs, _) = load(file, "lrs", o)?;
            cfg.check_dim(seq.depth())?;
            let out = skolem_zero_set(&seq, &cfg);
            let decided = !matches!(out, ZeroSetOutcome::Undecided { .. });
            Ok((to_value(&out), decided))
        }
        Command::Oracle { action: OracleAction::Mortality { file, cap } } => {
            let (inst, cfg): (MortalityInstance, _) = load(file, "mortality", o)?;
            if let Some(m) = inst.matrices.first() {
                cfg.check_dim(m.rows())?;
            }
            let report = brute_mortality(&inst.matrices, &vec![*cap; inst.matrices.len()])?;
            eprintln!("oracle scan took {:?}", report.elapsed);
            Ok((to_value(&report), true))
        }
        Command::Oracle { action: OracleAction::Pairs { file, caps } } => {
            let (inst, cfg): (PairsInstance, _) = load(file, "pairs", o)?;
            cfg.check_dim(inst.a.rows())?;
            let pairs = brute_zero_pairs(&inst.u, &inst.a, &inst.b, &inst.v, *caps)?;
            Ok((json!({ "pairs": pairs, "caps": [caps.0, caps.1] }), true))
        }
    }
}

mod erased {
    use serde::Serialize;
    use serde_json::Value;

    pub trait Json {
        fn json(&self) -> Value;
    }

    impl<T: Serialize> Json for T {
        fn json(&self) -> Value {
            serde_json::to_value(self).expect("outcomes serialize")
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            println!("{}", json!({ "status": "error", "kind": "usage", "message": e.kind().to_string() }));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok((value, decided)) => {
            if let Some(status) = value.get("status").and_then(Value::as_str) {
                let detail = value.get("witness").or_else(|| value.get("reason")).map(|d| format!(": {d}")).unwrap_or_default();
                eprintln!("{status}{detail}");
            }
            println!("{value}");
            if decided {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            println!("{}", json!({ "status": "error", "kind": f.kind, "message": f.message }));
            ExitCode::from(1)
        }
    }
}
