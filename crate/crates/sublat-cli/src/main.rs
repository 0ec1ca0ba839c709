//! Command-line front end: batch counting runs, threshold verification,
//! catalog lookup, and planarity checks on small finite lattices.
//!
//! Exit codes: 0 success/verified, 1 verification found an offender or a
//! scan found a violation, 2 input error, 3 resource bound exceeded.

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use std::cmp::Ordering;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;
use sublat_core::{
    count_sublattices, enumerate_subuniverses, is_planar, kr_member, lattice_from_covers,
    lattice_sigma, parse_lattice_text, parse_script, random_lattice, render_lattice_text,
    run_script, sharpness_witness, summarize_results, AlgebraError, FiniteLattice, JobResult,
    KRName, LatticeError, Planarity, Script, ScriptError,
};

#[derive(Parser)]
#[command(
    name = "sublat",
    version,
    about = "Exact subuniverse counts and planarity checks for small finite lattices"
)]
struct Cli {
    /// Worker threads for job evaluation (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every job in a script and print the report blocks.
    Run {
        input: PathBuf,
        /// Also write the text report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print one JSON record per job instead of the text blocks.
        #[arg(long)]
        json: bool,
        /// Append a wall-clock timing line (stdout only, never the report file).
        #[arg(long)]
        timing: bool,
    },
    /// Run a script and check every sigma against a threshold.
    Verify {
        input: PathBuf,
        /// Exclusion bound: an integer, a fraction p/q, or a decimal.
        #[arg(long, default_value = "83")]
        threshold: String,
    },
    /// Print a catalog member in the lattice text format.
    Kr {
        /// Member name, e.g. "A 0", "B", "dual B", "E 1", "K5", "fence8",
        /// "crown8", "ladder", "H0+".
        #[arg(required = true)]
        name: Vec<String>,
    },
    /// Operations on a lattice given in the text format.
    #[command(subcommand)]
    Lattice(LatticeOp),
    /// Build the n-element lattice meeting the planarity bound exactly.
    Sharpness { n: usize },
    /// Sample random lattices and check that sigma above 83 implies planarity.
    Scan {
        count: usize,
        n_hint: usize,
        #[arg(default_value_t = 0)]
        seed: u64,
        /// Where to serialize a violating lattice (default: scan-violation.txt).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LatticeOp {
    /// Number of nonempty sublattices.
    Count { file: PathBuf },
    /// Exact sigma value.
    Sigma { file: PathBuf },
    /// Planarity verdict with a certificate when non-planar.
    Planar { file: PathBuf },
}

/// Failures that abort a subcommand, each carrying its exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }

    fn from_script(e: ScriptError) -> CliError {
        let code = match &e {
            ScriptError::Parse { .. } => 2,
            ScriptError::JobFailed { source, .. } => match source {
                AlgebraError::UniverseTooLarge { .. } => 3,
                _ => 2,
            },
        };
        CliError { code, message: e.to_string() }
    }

    fn from_lattice(e: LatticeError) -> CliError {
        let code = match &e {
            LatticeError::CatalogIncomplete(_) | LatticeError::TooLarge(_) => 3,
            LatticeError::Algebra(AlgebraError::UniverseTooLarge { .. }) => 3,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }

    fn from_algebra(e: AlgebraError) -> CliError {
        let code = match &e {
            AlgebraError::UniverseTooLarge { .. } => 3,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`sublat ... | head`) like other
    // line-oriented tools instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore a second initialization (tests may run commands in-process).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn dispatch(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Run { input, out, json, timing } => cmd_run(&input, out.as_deref(), json, timing),
        Command::Verify { input, threshold } => cmd_verify(&input, &threshold),
        Command::Kr { name } => cmd_kr(&name),
        Command::Lattice(op) => match op {
            LatticeOp::Count { file } => cmd_lattice_count(&file),
            LatticeOp::Sigma { file } => cmd_lattice_sigma(&file),
            LatticeOp::Planar { file } => cmd_lattice_planar(&file),
        },
        Command::Sharpness { n } => cmd_sharpness(n),
        Command::Scan { count, n_hint, seed, out } => cmd_scan(count, n_hint, seed, out.as_deref()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {}", path.display(), e)))
}

fn load_script(path: &Path) -> Result<(Script, Vec<JobResult>), CliError> {
    let script = parse_script(&read_file(path)?).map_err(CliError::from_script)?;
    let results = run_script(&script).map_err(CliError::from_script)?;
    Ok((script, results))
}

fn cmd_run(input: &Path, out: Option<&Path>, json: bool, timing: bool) -> Result<u8, CliError> {
    let start = Instant::now();
    let (script, results) = load_script(input)?;
    let mut report = String::new();
    for (i, result) in results.iter().enumerate() {
        if i > 0 {
            report.push('\n');
        }
        report.push_str(&result.formatted);
    }
    if json {
        for r in &results {
            let record = serde_json::json!({
                "name": r.job_name,
                "n": r.n,
                "sub_count": r.sub_count,
                "sigma": r.sigma,
            });
            println!("{}", record);
        }
    } else {
        if script.settings.verbose {
            print_verbose_listings(&script)?;
        }
        print!("{}", report);
    }
    if let Some(path) = out {
        std::fs::write(path, &report)
            .map_err(|e| CliError::input(format!("{}: {}", path.display(), e)))?;
    }
    if timing {
        println!("The computation took {:.3} seconds.", start.elapsed().as_secs_f64());
    }
    Ok(0)
}

/// Under `\verbose=true`, list every closed subset of every job before the
/// result blocks. Bounded listing: jobs past the enumeration limit get a
/// note instead of a dump.
fn print_verbose_listings(script: &Script) -> Result<(), CliError> {
    for job in &script.jobs {
        let alg = job.algebra(&script.settings);
        println!("Closed subsets for A={}:", job.name);
        match enumerate_subuniverses(&alg) {
            Ok(masks) => {
                for mask in masks {
                    let labels: String = (0..job.elements.n())
                        .filter(|&i| mask & (1 << i) != 0)
                        .map(|i| job.elements.label(i))
                        .collect();
                    println!("  {{{}}}", labels);
                }
            }
            Err(AlgebraError::UniverseTooLarge { n, bound }) => {
                println!("  (not listed: {} elements exceeds the {}-element listing bound)", n, bound);
            }
            Err(e) => return Err(CliError::from_algebra(e)),
        }
        println!();
    }
    Ok(())
}

/// Threshold syntax: "83", "97/2", or "82.625"; always an exact rational.
fn parse_threshold(text: &str) -> Result<(BigUint, BigUint), CliError> {
    let bad = || CliError::input(format!("bad threshold \"{}\" (expected an integer, p/q, or a decimal)", text));
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigUint = p.trim().parse().map_err(|_| bad())?;
        let den: BigUint = q.trim().parse().map_err(|_| bad())?;
        if den == BigUint::from(0u32) {
            return Err(bad());
        }
        Ok((num, den))
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", int, frac);
        let num: BigUint = digits.parse().map_err(|_| bad())?;
        let den = (0..frac.len()).fold(BigUint::from(1u32), |acc, _| acc * 10u32);
        Ok((num, den))
    } else {
        let num: BigUint = s.parse().map_err(|_| bad())?;
        Ok((num, BigUint::from(1u32)))
    }
}

fn cmd_verify(input: &Path, threshold: &str) -> Result<u8, CliError> {
    let (num, den) = parse_threshold(threshold)?;
    let (_, results) = load_script(input)?;
    let summary = summarize_results(&results, &num, &den);
    let shown = threshold.trim();
    let max = summary
        .max_sigma
        .as_ref()
        .map(|m| format!("; max sigma = {}", m))
        .unwrap_or_default();
    if summary.all_excluded {
        println!("{} jobs, all \u{2264} {}{}", summary.job_count, shown, max);
        Ok(0)
    } else {
        println!(
            "{} jobs, {} offender(s) > {}{}",
            summary.job_count,
            summary.offenders.len(),
            shown,
            max
        );
        for r in &results {
            if r.sigma.cmp_ratio(&num, &den) == Ordering::Greater {
                println!("offender: {} (sigma = {})", r.job_name, r.sigma);
            }
        }
        Ok(1)
    }
}

/// Accepts "A 0", "a0", "dual B", "dual e 1", "K5", "fence8", "crown8",
/// "ladder", "H0+" and the obvious dash/underscore variants.
fn parse_kr_name(words: &[String]) -> Result<KRName, CliError> {
    let joined = words.join(" ");
    let compact: String = joined
        .to_lowercase()
        .chars()
        .filter(|c| !matches!(c, ' ' | '-' | '_' | '^'))
        .collect();
    match compact.as_str() {
        "k5" => return Ok(KRName::K5),
        "fence8" => return Ok(KRName::Fence8),
        "crown8" => return Ok(KRName::Crown8),
        "ladder" | "encapsulatedladder" | "encapsulated2ladder" => {
            return Ok(KRName::EncapsulatedLadder)
        }
        "h0+" | "h0plus" => return Ok(KRName::H0Plus),
        _ => {}
    }
    let unknown = || {
        CliError::input(format!(
            "unrecognized member name \"{}\" (try \"A 0\", \"B\", \"dual C\", \"E 1\", \"K5\", \
             \"fence8\", \"crown8\", \"ladder\", \"H0+\")",
            joined
        ))
    };
    let (dual, rest) = match compact.strip_prefix("dual") {
        Some(r) => (true, r),
        None => (false, compact.as_str()),
    };
    let mut chars = rest.chars();
    let family = chars.next().ok_or_else(unknown)?;
    let tail: String = chars.collect();
    let index: Option<u32> = if tail.is_empty() {
        None
    } else {
        Some(tail.parse().map_err(|_| unknown())?)
    };
    match (family, dual, index) {
        ('a', false, Some(k)) => Ok(KRName::A(k)),
        ('b', false, None) => Ok(KRName::B),
        ('b', true, None) => Ok(KRName::DualB),
        ('c', false, None) => Ok(KRName::C),
        ('c', true, None) => Ok(KRName::DualC),
        ('d', false, None) => Ok(KRName::D),
        ('d', true, None) => Ok(KRName::DualD),
        ('e', false, Some(k)) => Ok(KRName::E(k)),
        ('e', true, Some(k)) => Ok(KRName::DualE(k)),
        ('f', false, Some(k)) => Ok(KRName::F(k)),
        ('g', false, Some(k)) => Ok(KRName::G(k)),
        ('h', false, Some(k)) => Ok(KRName::H(k)),
        _ => Err(unknown()),
    }
}

fn cmd_kr(words: &[String]) -> Result<u8, CliError> {
    let name = parse_kr_name(words)?;
    let entry = kr_member(name).map_err(CliError::from_lattice)?;
    print!("{}", render_lattice_text(entry.poset()));
    Ok(0)
}

fn load_lattice(path: &Path) -> Result<FiniteLattice, CliError> {
    let spec = parse_lattice_text(&read_file(path)?).map_err(CliError::from_lattice)?;
    lattice_from_covers(&spec).map_err(CliError::from_lattice)
}

fn cmd_lattice_count(file: &Path) -> Result<u8, CliError> {
    let lattice = load_lattice(file)?;
    let count = count_sublattices(&lattice).map_err(CliError::from_algebra)?;
    println!("{}", count);
    Ok(0)
}

fn cmd_lattice_sigma(file: &Path) -> Result<u8, CliError> {
    let lattice = load_lattice(file)?;
    let sigma = lattice_sigma(&lattice).map_err(CliError::from_algebra)?;
    println!("{}", sigma);
    Ok(0)
}

fn certificate_line(member: KRName, map: &[usize], target: &FiniteLattice) -> Result<String, CliError> {
    let entry = kr_member(member).map_err(CliError::from_lattice)?;
    let pairs: Vec<String> = map
        .iter()
        .enumerate()
        .map(|(i, &t)| format!("{}->{}", entry.poset().label(i), target.poset().label(t)))
        .collect();
    Ok(pairs.join(" "))
}

fn cmd_lattice_planar(file: &Path) -> Result<u8, CliError> {
    let lattice = load_lattice(file)?;
    match is_planar(&lattice).map_err(CliError::from_lattice)? {
        Planarity::Planar => {
            println!(
                "planar: no Kelly-Rival subposet among members with at most {} elements",
                lattice.n()
            );
        }
        Planarity::NonPlanar { member, embedding } => {
            println!("non-planar: contains {}", member);
            println!("certificate: {}", certificate_line(member, &embedding.map, &lattice)?);
        }
    }
    Ok(0)
}

fn cmd_sharpness(n: usize) -> Result<u8, CliError> {
    let witness = sharpness_witness(n).map_err(CliError::from_lattice)?;
    let count = count_sublattices(&witness).map_err(CliError::from_algebra)?;
    match is_planar(&witness).map_err(CliError::from_lattice)? {
        Planarity::NonPlanar { member, embedding } => {
            println!(
                "|Sub| = {}, that is, {} sublattices, non-planar (contains {})",
                count + 1,
                count,
                member
            );
            println!("certificate: {}", certificate_line(member, &embedding.map, &witness)?);
        }
        Planarity::Planar => {
            println!("|Sub| = {}, that is, {} sublattices, planar", count + 1, count);
        }
    }
    Ok(0)
}

fn cmd_scan(count: usize, n_hint: usize, seed: u64, out: Option<&Path>) -> Result<u8, CliError> {
    if !(1..=16).contains(&n_hint) {
        return Err(CliError::input(format!("size hint must be between 1 and 16, got {}", n_hint)));
    }
    let threshold = (BigUint::from(83u32), BigUint::from(1u32));
    let mut above = 0usize;
    let mut undecided = 0usize;
    let mut uncounted = 0usize;
    for i in 0..count {
        let lattice = random_lattice(n_hint, seed.wrapping_add(i as u64));
        let sigma = match lattice_sigma(&lattice) {
            Ok(s) => s,
            Err(AlgebraError::UniverseTooLarge { .. }) => {
                uncounted += 1;
                continue;
            }
            Err(e) => return Err(CliError::from_algebra(e)),
        };
        if sigma.cmp_ratio(&threshold.0, &threshold.1) != Ordering::Greater {
            continue;
        }
        above += 1;
        match is_planar(&lattice) {
            Ok(Planarity::Planar) => {}
            Ok(Planarity::NonPlanar { member, .. }) => {
                let path = out.unwrap_or_else(|| Path::new("scan-violation.txt"));
                std::fs::write(path, render_lattice_text(lattice.poset()))
                    .map_err(|e| CliError::input(format!("{}: {}", path.display(), e)))?;
                println!(
                    "violation: sample {} ({} elements, sigma = {}) is non-planar (contains {})",
                    i,
                    lattice.n(),
                    sigma,
                    member
                );
                println!("lattice written to {}", path.display());
                return Ok(1);
            }
            Err(LatticeError::CatalogIncomplete(_)) => undecided += 1,
            Err(e) => return Err(CliError::from_lattice(e)),
        }
    }
    println!(
        "{} samples at size hint {} (seed {}): {} with sigma > 83, all confirmed planar \
         ({} undecided past the catalog limit, {} too large to count)",
        count, n_hint, seed, above, undecided, uncounted
    );
    Ok(0)
}
