use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tnz_core::counting::{
    count_generic_orbits_closed_form, count_strata_2d, fixed_point_count,
    fixed_point_count_bruteforce, orbit_partition, oriented_orbit_sizes, GroupKind, OrbitReport,
};
use tnz_core::explorer::{classify_found, explore, SampleConfig, StrataStore, DEFAULT_ENTRY_BOUND};
use tnz_core::matrix::format_rational;
use tnz_core::plane::{
    combinatorial_rep, enumerate_orientation_vectors_2d, enumerate_strata_2d,
    enumerate_strata_2d_with_witnesses, orientation_matrix,
};
use tnz_core::verify::{check_ids, find_check, run_all, CheckResult};
use tnz_core::{canonicalize, sign_vector, RationalMatrix};

#[derive(Parser)]
#[command(
    name = "tnz",
    version,
    about = "Strata of the totally nonzero Grassmannian"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Strata,
    Orbits,
    AntipodalOrbits,
    FixedPoints,
    OrientedOrbits,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    ClosedForm,
    BruteForce,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    Sn,
    Hyper,
}

impl From<Group> for GroupKind {
    fn from(g: Group) -> Self {
        match g {
            Group::Sn => GroupKind::Symmetric,
            Group::Hyper => GroupKind::Hyperoctahedral,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List every stratum of Gr^tnz(2, n).
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Attach an integer witness matrix to each stratum.
        #[arg(long)]
        witness: bool,
        /// Permit n = 10.
        #[arg(long)]
        allow_large: bool,
    },
    /// Closed-form and brute-force counts.
    Count {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: Option<u64>,
        #[arg(long, value_enum, default_value_t = Method::ClosedForm)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        allow_large: bool,
    },
    /// Run the reproduction checks.
    Verify {
        /// `all` or one check id.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Plücker sign vector of a matrix file.
    SignVector {
        #[arg(long)]
        input: PathBuf,
        /// Print the stratum (leading sign made positive).
        #[arg(long)]
        canonical: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Combinatorial representation of a generic 2 x n matrix file.
    Rep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Random witness search; writes a strata store.
    Explore {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ENTRY_BOUND)]
        bound: u32,
        #[arg(long)]
        out: PathBuf,
        /// Start from an existing store.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Orbit partition of the strata in a store.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Result of a command: success, or a verification mismatch (exit 1).
enum Outcome {
    Ok,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("TNZ_THREADS") {
        match threads.parse::<usize>() {
            Ok(t) if t > 0 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()
                    .expect("global pool is set once");
            }
            _ => {
                eprintln!("error: TNZ_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Enumerate {
            n,
            format,
            witness,
            allow_large,
        } => enumerate(n, format, witness, allow_large),
        Command::Count {
            what,
            n,
            i,
            method,
            format,
            allow_large,
        } => count(what, n, i, method, format, allow_large),
        Command::Verify { suite, format } => verify(&suite, format),
        Command::SignVector {
            input,
            canonical,
            format,
        } => sign_vector_cmd(&input, canonical, format),
        Command::Rep { input, format } => rep(&input, format),
        Command::Explore {
            m,
            n,
            samples,
            seed,
            bound,
            out,
            resume,
        } => explore_cmd(
            SampleConfig {
                m,
                n,
                entry_bound: bound,
                samples,
                seed,
            },
            &out,
            resume.as_deref(),
        ),
        Command::Classify {
            input,
            group,
            format,
        } => classify(&input, group.into(), format),
    }
}

fn csv_writer() -> csv::Writer<std::io::Stdout> {
    csv::Writer::from_writer(std::io::stdout())
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json value")
    );
}

fn read_matrix(path: &std::path::Path) -> Result<RationalMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RationalMatrix::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn flat_entries(w: &RationalMatrix) -> String {
    w.rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" ; ")
}

fn enumerate(n: usize, format: Format, witness: bool, allow_large: bool) -> Result<Outcome> {
    if witness {
        let strata = enumerate_strata_2d_with_witnesses(n, allow_large)?;
        match format {
            Format::Text => {
                for (t, w) in &strata {
                    println!("{t}\t{}", w.to_json());
                }
            }
            Format::Json => print_json(&json!({
                "m": 2,
                "n": n,
                "count": strata.len(),
                "strata": strata.iter().map(|(t, w)| json!({
                    "signs": t.to_string(),
                    "witness": serde_json::to_value(w.to_file()).expect("json value"),
                })).collect::<Vec<_>>(),
            })),
            Format::Csv => {
                let mut out = csv_writer();
                out.write_record(["signs", "witness"])?;
                for (t, w) in &strata {
                    out.write_record([t.to_string(), flat_entries(w)])?;
                }
                out.flush()?;
            }
        }
    } else {
        let strata = enumerate_strata_2d(n, allow_large)?;
        match format {
            Format::Text => {
                for t in &strata {
                    println!("{t}");
                }
            }
            Format::Json => print_json(&json!({
                "m": 2,
                "n": n,
                "count": strata.len(),
                "strata": strata.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })),
            Format::Csv => {
                let mut out = csv_writer();
                out.write_record(["signs"])?;
                for t in &strata {
                    out.write_record([t.to_string()])?;
                }
                out.flush()?;
            }
        }
    }
    Ok(Outcome::Ok)
}

fn count(
    what: What,
    n: usize,
    i: Option<u64>,
    method: Method,
    format: Format,
    allow_large: bool,
) -> Result<Outcome> {
    if what != What::FixedPoints && i.is_some() {
        bail!("--i only applies to --what fixed-points");
    }
    let closed = || -> Result<String> {
        Ok(match what {
            What::Strata => count_strata_2d(n)?.to_string(),
            What::Orbits | What::OrientedOrbits => count_generic_orbits_closed_form(n)?.to_string(),
            What::AntipodalOrbits => {
                count_strata_2d(n)?;
                "1".to_string()
            }
            What::FixedPoints => {
                let i = i.context("--what fixed-points needs --i")?;
                fixed_point_count(n, i)?.to_string()
            }
        })
    };
    let brute = || -> Result<String> {
        Ok(match what {
            What::Strata => enumerate_strata_2d(n, allow_large)?.len().to_string(),
            What::Orbits => {
                let strata = enumerate_strata_2d(n, allow_large)?;
                orbit_partition(&strata, GroupKind::Symmetric, n)?
                    .orbit_count
                    .to_string()
            }
            What::AntipodalOrbits => {
                let strata = enumerate_strata_2d(n, allow_large)?;
                orbit_partition(&strata, GroupKind::Hyperoctahedral, n)?
                    .orbit_count
                    .to_string()
            }
            What::OrientedOrbits => {
                let vectors = enumerate_orientation_vectors_2d(n, allow_large)?;
                oriented_orbit_sizes(&vectors)?.len().to_string()
            }
            What::FixedPoints => {
                let i = i.context("--what fixed-points needs --i")?;
                fixed_point_count_bruteforce(n, i, allow_large)?.to_string()
            }
        })
    };
    let (a, b) = match method {
        Method::ClosedForm => (Some(closed()?), None),
        Method::BruteForce => (None, Some(brute()?)),
        Method::Both => (Some(closed()?), Some(brute()?)),
    };
    let verdict = match (&a, &b) {
        (Some(x), Some(y)) => Some(if x == y { "MATCH" } else { "MISMATCH" }),
        _ => None,
    };
    match format {
        Format::Text => {
            for v in a.iter().chain(b.iter()) {
                println!("{v}");
            }
            if let Some(v) = verdict {
                println!("{v}");
            }
        }
        Format::Json => print_json(&json!({
            "n": n,
            "i": i,
            "closed_form": a,
            "brute_force": b,
            "verdict": verdict,
        })),
        Format::Csv => {
            let mut out = csv_writer();
            out.write_record(["n", "closed_form", "brute_force", "verdict"])?;
            out.write_record([
                n.to_string(),
                a.clone().unwrap_or_default(),
                b.clone().unwrap_or_default(),
                verdict.unwrap_or_default().to_string(),
            ])?;
            out.flush()?;
        }
    }
    Ok(if verdict == Some("MISMATCH") {
        Outcome::Mismatch
    } else {
        Outcome::Ok
    })
}

fn verify(suite: &str, format: Format) -> Result<Outcome> {
    let results: Vec<CheckResult> = if suite == "all" {
        run_all()
    } else {
        match find_check(suite) {
            Some(c) => vec![c.run()],
            None => bail!(
                "unknown suite `{suite}`; expected all or one of: {}",
                check_ids().join(", ")
            ),
        }
    };
    match format {
        Format::Text => {
            for r in &results {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                println!("{mark}  {:<18} {}", r.id, r.detail);
            }
        }
        Format::Json => print_json(&json!({
            "passed": results.iter().all(|r| r.passed),
            "checks": serde_json::to_value(&results)?,
        })),
        Format::Csv => {
            let mut out = csv_writer();
            out.write_record(["id", "status", "description", "detail"])?;
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                out.write_record([r.id, status, r.description, &r.detail])?;
            }
            out.flush()?;
        }
    }
    Ok(if results.iter().all(|r| r.passed) {
        Outcome::Ok
    } else {
        Outcome::Mismatch
    })
}

fn sign_vector_cmd(input: &std::path::Path, canonical: bool, format: Format) -> Result<Outcome> {
    let m = read_matrix(input)?;
    let s = sign_vector(&m)?;
    let text = if canonical {
        canonicalize(s).to_string()
    } else {
        s.to_string()
    };
    match format {
        Format::Text => println!("{text}"),
        Format::Json => print_json(&json!({"m": m.m(), "n": m.n(), "signs": text})),
        Format::Csv => {
            let mut out = csv_writer();
            out.write_record(["m", "n", "signs"])?;
            out.write_record([m.m().to_string(), m.n().to_string(), text])?;
            out.flush()?;
        }
    }
    Ok(Outcome::Ok)
}

fn rep(input: &std::path::Path, format: Format) -> Result<Outcome> {
    let m = read_matrix(input)?;
    let rep = combinatorial_rep(&m)?;
    let o = orientation_matrix(&m)?;
    let text = rep.as_signed_perm().to_string();
    match format {
        Format::Text => println!("{text}"),
        Format::Json => print_json(&json!({
            "rep": rep.as_signed_perm().entries(),
            "orientation": o.rows(),
        })),
        Format::Csv => {
            let mut out = csv_writer();
            out.write_record(["rep"])?;
            out.write_record([text])?;
            out.flush()?;
        }
    }
    Ok(Outcome::Ok)
}

fn explore_cmd(
    cfg: SampleConfig,
    out: &std::path::Path,
    resume: Option<&std::path::Path>,
) -> Result<Outcome> {
    let mut store = match resume {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            StrataStore::from_json(&text).with_context(|| format!("loading {}", path.display()))?
        }
        None => StrataStore::new(cfg.m, cfg.n),
    };
    let before = store.len();
    let report = explore(&cfg, &mut store)?;
    fs::write(out, store.to_json()).with_context(|| format!("writing {}", out.display()))?;
    println!("samples   {}", cfg.samples);
    println!("accepted  {}", report.accepted);
    println!("rejected  {}", report.rejected);
    println!("new       {}", report.new);
    println!("seen      {}", report.seen);
    println!("stored    {} (was {before})", store.len());
    if cfg.m >= 3 {
        println!(
            "note      stored strata are a lower bound on the strata of Gr^tnz({}, {})",
            cfg.m, cfg.n
        );
    }
    Ok(Outcome::Ok)
}

fn classify(input: &std::path::Path, group: GroupKind, format: Format) -> Result<Outcome> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let store =
        StrataStore::from_json(&text).with_context(|| format!("loading {}", input.display()))?;
    let report = classify_found(&store, group)?;
    let lower_bound = store.m() >= 3;
    print_report(&report, store.len(), lower_bound, format)?;
    Ok(Outcome::Ok)
}

fn print_report(
    report: &OrbitReport,
    strata: usize,
    lower_bound: bool,
    format: Format,
) -> Result<()> {
    match format {
        Format::Text => {
            println!("group     {}", report.group);
            println!("strata    {strata}");
            println!(
                "orbits    {}{}",
                report.orbit_count,
                if lower_bound { " (lower bound)" } else { "" }
            );
            for ((t, found), full) in report
                .representatives
                .iter()
                .zip(&report.orbit_sizes)
                .zip(&report.closure_sizes)
            {
                println!("{t}\t{found}/{full}");
            }
        }
        Format::Json => print_json(&json!({
            "group": report.group.to_string(),
            "m": report.m,
            "n": report.n,
            "strata": strata,
            "orbit_count": report.orbit_count,
            "lower_bound": lower_bound,
            "orbits": report.representatives.iter().zip(&report.orbit_sizes).zip(&report.closure_sizes)
                .map(|((t, found), full)| json!({
                    "representative": t.to_string(),
                    "found": found,
                    "size": full,
                }))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = csv_writer();
            out.write_record(["representative", "found", "size"])?;
            for ((t, found), full) in report
                .representatives
                .iter()
                .zip(&report.orbit_sizes)
                .zip(&report.closure_sizes)
            {
                out.write_record([t.to_string(), found.to_string(), full.to_string()])?;
            }
            out.flush()?;
        }
    }
    Ok(())
}
