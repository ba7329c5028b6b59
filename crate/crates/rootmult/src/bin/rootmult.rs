//! Command-line surface for the rootmult library.
//!
//! Exit-status contract: 0 success (or all checks pass), 1 verification
//! failure, 2 parse/usage error, 3 validation error, 4 internal integrity
//! error. Every error prints a single line `error[<kind>]: <message>` to
//! standard error. Output is deterministic: identical inputs produce
//! byte-identical output regardless of the thread count.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rootmult::appendix::{golden_table, parse_table, verify_appendix, AppendixEntry};
use rootmult::invariants::{
    bouquet_count, kappa, stability_check, theta_shift_comparison, vassiliev_ranks,
};
use rootmult::poset::{is_profinite, ClosedPoset, PosetSpec};
use rootmult::{enumerate, reduced_cohomology_of_complement, Composition, Error, Parity};

/// Degrees above this need --allow-large; matches the verified range of the
/// reference table.
const SOFT_CAP: u64 = 13;

#[derive(Parser)]
#[command(
    name = "rootmult",
    version,
    about = "Exact integer (co)homology of spaces of real monic polynomials \
             with constrained real-root multiplicity patterns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Worker threads (default: the THREADS environment variable, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Permit degrees above the soft cap of 13 (memory grows exponentially).
    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// List the norm-bounded compositions of the parity of d in canonical order.
    Enumerate {
        /// Polynomial degree (norm cap).
        #[arg(long)]
        d: u64,
    },
    /// Materialize a closed poset and report its elements, maximal elements,
    /// and profiniteness verdict.
    Poset {
        /// Polynomial degree (norm cap).
        #[arg(long)]
        d: u64,
        /// Poset spec: gen:a,b;c  |  maxge:k  |  redge:k[,q]  |  free2, with
        /// " | " for unions.
        #[arg(long)]
        theta: String,
    },
    /// Reduced cohomology of the complement of a closed poset.
    Homology {
        /// Polynomial degree.
        #[arg(long)]
        d: u64,
        /// Poset spec for the forbidden patterns.
        #[arg(long)]
        theta: String,
    },
    /// Recompute the reference table of homology spheres and run the
    /// negative control.
    Appendix {
        /// Verify rows up to this degree (default 11; 13 with --stretch).
        #[arg(long)]
        max_d: Option<u64>,
        /// Raise the default degree bound to 13.
        #[arg(long)]
        stretch: bool,
        /// Run the exhaustive negative control up to this degree (default 8).
        #[arg(long)]
        negative_to: Option<u64>,
        /// Verify against a JSON table from this path instead of the
        /// embedded one.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Number of spheres in the bouquet for the reduced-norm-k skeleton
    /// stratum.
    Bouquet {
        /// Polynomial degree.
        #[arg(long)]
        d: u64,
        /// Reduced-norm lower bound (1 <= k < d).
        #[arg(long)]
        k: u64,
        /// Norm lower bound (0, or the parity of d).
        #[arg(long, default_value_t = 0)]
        q: u64,
    },
    /// Compare complement homology at d and d + 2 over the guaranteed range.
    Stability {
        /// Polynomial degree of the smaller cap.
        #[arg(long)]
        d: u64,
        /// Poset spec for the forbidden patterns.
        #[arg(long)]
        theta: String,
        /// Also print the experimental grading-shifted comparison of the
        /// defining complexes themselves (informational; the grading
        /// dictionary is unverified).
        #[arg(long)]
        experimental_shift: bool,
    },
    /// Closed-form rank of the first complement homology of the free-square
    /// stratum.
    Kappa {
        /// Polynomial degree (at least 3).
        #[arg(long)]
        d: u64,
    },
    /// Closed-form degrees and ranks for the complement of the
    /// multiplicity-at-least-k stratum.
    Vassiliev {
        /// Polynomial degree (at least k).
        #[arg(long)]
        d: u64,
        /// Multiplicity bound (at least 3).
        #[arg(long)]
        k: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let threads = match effective_threads(cli.threads) {
        Ok(n) => n,
        Err(message) => return usage_error(&message),
    };
    // The pool is only ever configured once per process; a failure here
    // would mean a second configuration attempt and is a bug.
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .expect("rayon pool configured once");

    if let Some(message) = degree_cap_violation(&cli) {
        return usage_error(&message);
    }

    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let (kind, code, message) = describe(&e);
            eprintln!("error[{kind}]: {message}");
            code
        }
    }
}

fn effective_threads(flag: Option<usize>) -> Result<usize, String> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var("THREADS") {
            Ok(raw) => raw
                .parse::<usize>()
                .map_err(|_| format!("THREADS must be a positive integer; got {raw:?}"))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err("thread count must be at least 1".to_string());
    }
    Ok(n)
}

/// The soft degree cap applies to the user-supplied degree of every command
/// except `appendix`, whose own bound is validated against the table range.
fn degree_cap_violation(cli: &Cli) -> Option<String> {
    let d = match cli.command {
        Command::Enumerate { d }
        | Command::Poset { d, .. }
        | Command::Homology { d, .. }
        | Command::Bouquet { d, .. }
        | Command::Stability { d, .. }
        | Command::Kappa { d }
        | Command::Vassiliev { d, .. } => d,
        Command::Appendix { .. } => return None,
    };
    if d < 2 {
        return Some(format!("--d must be at least 2; got {d}"));
    }
    if d > SOFT_CAP && !cli.allow_large {
        return Some(format!(
            "--d {d} exceeds the soft cap of {SOFT_CAP}; pass --allow-large to proceed \
             (memory grows exponentially with d)"
        ));
    }
    None
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error[usage]: {message}");
    ExitCode::from(2)
}

fn describe(e: &Error) -> (&'static str, ExitCode, &str) {
    match e {
        Error::Parse(m) => ("parse", ExitCode::from(2), m.as_str()),
        Error::InvalidArgument(m) => ("argument", ExitCode::from(3), m.as_str()),
        Error::Validation(m) => ("validation", ExitCode::from(3), m.as_str()),
        Error::Integrity(m) => ("integrity", ExitCode::from(4), m.as_str()),
    }
}

fn run(cli: &Cli) -> rootmult::Result<ExitCode> {
    match &cli.command {
        Command::Enumerate { d } => cmd_enumerate(*d, cli.format),
        Command::Poset { d, theta } => cmd_poset(*d, theta, cli.format),
        Command::Homology { d, theta } => cmd_homology(*d, theta, cli.format),
        Command::Appendix { max_d, stretch, negative_to, expected } => {
            cmd_appendix(*max_d, *stretch, *negative_to, expected.as_deref(), cli.format)
        }
        Command::Bouquet { d, k, q } => cmd_bouquet(*d, *k, *q, cli.format),
        Command::Stability { d, theta, experimental_shift } => {
            cmd_stability(*d, theta, *experimental_shift, cli.format)
        }
        Command::Kappa { d } => cmd_kappa(*d, cli.format),
        Command::Vassiliev { d, k } => cmd_vassiliev(*d, *k, cli.format),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_enumerate(d: u64, format: Format) -> rootmult::Result<ExitCode> {
    let compositions = enumerate(d, Parity::of(d), true);
    match format {
        Format::Json => {
            let names: Vec<String> = compositions.iter().map(Composition::to_string).collect();
            let value = serde_json::json!({
                "d": d,
                "count": names.len(),
                "compositions": names,
            });
            println!("{value}");
        }
        Format::Csv => {
            for w in &compositions {
                println!("{d},{}", csv_field(&w.to_string()));
            }
        }
        Format::Table => {
            println!("{} compositions of parity {d} with norm <= {d}:", compositions.len());
            for w in &compositions {
                println!("  ({w})   norm {}  reduced {}", w.norm(), w.reduced_norm());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_poset(d: u64, theta: &str, format: Format) -> rootmult::Result<ExitCode> {
    let spec: PosetSpec = theta.parse()?;
    let poset = ClosedPoset::from_spec(&spec, d)?;
    let maximal = if poset.is_empty() { Vec::new() } else { poset.maximal_elements()? };
    let complement = poset.complement_basis();
    let verdict = is_profinite(&spec);
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "d": d,
                "theta": spec.to_string(),
                "size": poset.len(),
                "elements": poset.elements().map(Composition::to_string).collect::<Vec<_>>(),
                "maximal": maximal.iter().map(Composition::to_string).collect::<Vec<_>>(),
                "complementSize": complement.len(),
                "profinite": verdict.as_bool(),
                "profiniteNote": verdict.note(),
            });
            println!("{value}");
        }
        Format::Csv => {
            let spec_field = csv_field(&spec.to_string());
            for w in poset.elements() {
                println!(
                    "{d},{spec_field},{},{},{}",
                    csv_field(&w.to_string()),
                    w.reduced_norm(),
                    maximal.contains(w)
                );
            }
        }
        Format::Table => {
            println!("closed poset {} at degree {d}: {} elements", spec, poset.len());
            for w in poset.elements() {
                let mark = if maximal.contains(w) { "  [maximal]" } else { "" };
                println!("  ({w})   reduced {}{mark}", w.reduced_norm());
            }
            println!("complement basis size: {}", complement.len());
            match verdict.as_bool() {
                Some(true) => println!("profinite: yes"),
                _ => println!("profinite: indeterminate ({})", verdict.note().unwrap_or("")),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_homology(d: u64, theta: &str, format: Format) -> rootmult::Result<ExitCode> {
    let spec: PosetSpec = theta.parse()?;
    let poset = ClosedPoset::from_spec(&spec, d)?;
    let table = reduced_cohomology_of_complement(&poset)?;
    match format {
        Format::Json => println!("{}", table.to_json()),
        Format::Csv => {
            for row in table.to_csv_rows() {
                println!("{row}");
            }
        }
        Format::Table => println!("{}", table.to_table_string()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_appendix(
    max_d: Option<u64>,
    stretch: bool,
    negative_to: Option<u64>,
    expected: Option<&std::path::Path>,
    format: Format,
) -> rootmult::Result<ExitCode> {
    let max_d = max_d.unwrap_or(if stretch { 13 } else { 11 });
    if !(4..=13).contains(&max_d) {
        // The reference table covers 4 <= d <= 13 only, so bounds outside it
        // are a usage error rather than a validation failure.
        eprintln!(
            "error[usage]: --max-d must be between 4 and 13 (the table starts at d = 4); got {max_d}"
        );
        return Ok(ExitCode::from(2));
    }
    let negative_to = negative_to.unwrap_or(8);

    let owned: Vec<AppendixEntry>;
    let table: &[AppendixEntry] = match expected {
        Some(path) => {
            let raw = std::fs::read_to_string(path).map_err(|e| {
                Error::Parse(format!("cannot read expected table {}: {e}", path.display()))
            })?;
            owned = parse_table(&raw)?;
            &owned
        }
        None => golden_table(),
    };

    let report = verify_appendix(table, max_d, negative_to)?;
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => {
            for row in report.to_csv_rows() {
                println!("{row}");
            }
        }
        Format::Table => println!("{}", report.to_table_string()),
    }
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_bouquet(d: u64, k: u64, q: u64, format: Format) -> rootmult::Result<ExitCode> {
    let a = bouquet_count(d, k, q)?;
    // Whether q = 0 is admissible at odd d is unsettled; accept but flag it.
    let flagged = q == 0 && d % 2 == 1;
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "d": d,
                "k": k,
                "q": q,
                "A": a,
                "flaggedQZeroOddD": flagged,
            });
            println!("{value}");
        }
        Format::Csv => println!("{d},{k},{q},{a}"),
        Format::Table => {
            println!("A = {a}");
            if flagged {
                println!("note: q = 0 with odd d; admissibility of this combination is unsettled");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stability(
    d: u64,
    theta: &str,
    experimental_shift: bool,
    format: Format,
) -> rootmult::Result<ExitCode> {
    let spec: PosetSpec = theta.parse()?;
    let report = stability_check(&spec, d)?;
    let shift = if experimental_shift { Some(theta_shift_comparison(&spec, d)?) } else { None };
    match format {
        Format::Json => {
            let mut value = report.to_json();
            if let Some(shift) = &shift {
                value["experimentalShift"] = shift.to_json();
            }
            println!("{value}");
        }
        Format::Csv => {
            let (lo, hi) = match (report.verified_range.first(), report.verified_range.last()) {
                (Some(lo), Some(hi)) => (lo.to_string(), hi.to_string()),
                _ => (String::new(), String::new()),
            };
            println!(
                "{d},{},{},{},{},{lo},{hi},{}",
                csv_field(&report.theta),
                report.eta,
                report.psi,
                report.xi,
                report.failures.len()
            );
        }
        Format::Table => {
            println!("{report}");
            if let Some(shift) = &shift {
                println!("{shift}");
            }
        }
    }
    Ok(if report.pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_kappa(d: u64, format: Format) -> rootmult::Result<ExitCode> {
    let value = kappa(d)?;
    match format {
        Format::Json => println!("{}", serde_json::json!({ "d": d, "kappa": value })),
        Format::Csv => println!("{d},{value}"),
        Format::Table => println!("{value}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_vassiliev(d: u64, k: u64, format: Format) -> rootmult::Result<ExitCode> {
    let ranks = vassiliev_ranks(d, k)?;
    match format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = ranks
                .iter()
                .map(|(degree, rank)| serde_json::json!({ "degree": degree, "rank": rank }))
                .collect();
            println!("{}", serde_json::json!({ "d": d, "k": k, "ranks": rows }));
        }
        Format::Csv => {
            for (degree, rank) in &ranks {
                println!("{d},{k},{degree},{rank}");
            }
        }
        Format::Table => {
            for (degree, rank) in &ranks {
                println!("degree {degree}: rank {rank}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
