use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, bail};
use clap::{Parser, Subcommand, ValueEnum};
use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use antidict::canonical::{Definition, ForbiddenSystem, canonical_system, defines};
use antidict::extremal::{DEFAULT_MAX_GENERATION, ExtremalReport, verify_extremal};
use antidict::forks::{Fork, ForkTable, Role, all_forks, classify};
use antidict::sweep::{Check, DEFAULT_MAX_LEN, SweepReport, sweep};
use antidict::systems::{
    System, improve_select_fine, improve_shift_right, improve_swap, random_system,
    verify_theorem_4_15,
};
use antidict::{PeriodicWord, Word};

/// Antidictionaries of periodic binary words: canonical forbidden systems,
/// fork tables, majorizing recurrences and the Fibonacci period bound.
#[derive(Parser)]
#[command(name = "antidict", version)]
struct Cli {
    /// Seed for the randomized parts (`systems --trials`).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical forbidden system of (WORD)^inf.
    Canon { word: String },
    /// Print the classified fork table of (WORD)^inf.
    Forks { word: String },
    /// Decide whether a forbidden system pins down a unique periodic word.
    /// INPUT is a file of words or an inline comma/space-separated list.
    Defines { input: String },
    /// Generate the extremal family and verify it meets the period bound.
    Extremal {
        /// Largest generation to emit.
        #[arg(long = "max-i", default_value_t = DEFAULT_MAX_GENERATION)]
        max_i: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Enumerate all systems of size N and verify max y_n = F(n+1); with
    /// --trials, additionally stress the improvement rewrites.
    Systems {
        #[arg(long)]
        n: usize,
        /// Randomized rewrite applications to run on top of the enumeration.
        #[arg(long, default_value_t = 0)]
        trials: u64,
    },
    /// Check every primitive period up to a length cap, one symmetry class
    /// at a time, and report the longest period per antidictionary size.
    Sweep {
        #[arg(long = "max-len", default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        jobs: Option<usize>,
        /// Report file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Comma-separated check names; defaults to all of them.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Canon { word } => {
            let word = PeriodicWord::parse(&word)?;
            println!("{}", canonical_system(&word));
            Ok(true)
        }
        Command::Forks { word } => {
            let word = PeriodicWord::parse(&word)?;
            let table = classify(&all_forks(&word)?, &word)?;
            print_fork_table(&table);
            Ok(true)
        }
        Command::Defines { input } => {
            let system = parse_system(&input)?;
            match defines(&system)? {
                Definition::Defines(w) => {
                    println!("defines {w}");
                }
                Definition::NoWord => println!("no bi-infinite word avoids the system"),
                Definition::MultipleWords(v, w) => {
                    println!("multiple words avoid the system: {v}, {w}");
                }
            }
            Ok(true)
        }
        Command::Extremal { max_i, format } => {
            let reports: Vec<ExtremalReport> = (1..=max_i).map(verify_extremal).collect();
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    for r in &reports {
                        w.serialize(r)?;
                    }
                    w.flush()?;
                }
            }
            Ok(reports.iter().all(|r| r.passed))
        }
        Command::Systems { n, trials } => {
            let report = verify_theorem_4_15(n)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            let mut ok = report.bound_met;
            if trials > 0 {
                ok &= rewrite_trials(n, trials, cli.seed)?;
            }
            Ok(ok)
        }
        Command::Sweep {
            max_len,
            jobs,
            out,
            format,
            checks,
        } => {
            let checks = match checks {
                None => Check::ALL.to_vec(),
                Some(names) => names
                    .iter()
                    .map(|s| s.parse::<Check>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(anyhow::Error::msg)?,
            };
            if max_len > DEFAULT_MAX_LEN {
                eprintln!(
                    "note: max_len {max_len} doubles the work of {} for every extra letter",
                    DEFAULT_MAX_LEN
                );
            }
            let report = match jobs {
                None => sweep(max_len, &checks)?,
                Some(j) => rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build()
                    .context("building worker pool")?
                    .install(|| sweep(max_len, &checks))?,
            };
            let text = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report)?;
                    s.push('\n');
                    s
                }
                Format::Csv => sweep_csv(&report)?,
            };
            match out {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => print!("{text}"),
            }
            for f in &report.failures {
                eprintln!("FAIL {} on {}: {}", f.check, f.word, f.details);
            }
            Ok(report.clean())
        }
    }
}

fn print_fork_table(table: &ForkTable) {
    println!("period: {}", table.period());
    println!("{:>3} {:>4}  {:<12} fork", "i", "z", "role");
    for (i, fork) in table.entries().iter().enumerate() {
        let role = match table.roles()[i] {
            Role::Boundary => "boundary",
            Role::Ordinary => "ordinary",
            Role::Exceptional => "exceptional",
            Role::Penalty => "penalty",
            Role::Fine => "fine",
        };
        let shown = match fork {
            Fork::Root => "<ROOT>".to_string(),
            Fork::Finite(w) if w.is_empty() => "<EMPTY>".to_string(),
            Fork::Finite(w) => w.to_string(),
        };
        let mut marks = String::new();
        if let Some(j) = table.psi().get(&i) {
            marks.push_str(&format!("  psi -> {j}"));
        }
        if let Some(k) = table.pi().get(&i) {
            marks.push_str(&format!("  pi -> {k}"));
        }
        println!("{i:>3} {:>4}  {role:<12} {shown}{marks}", table.z()[i]);
    }
}

fn parse_system(input: &str) -> anyhow::Result<ForbiddenSystem> {
    let text = if Path::new(input).is_file() {
        fs::read_to_string(input).with_context(|| format!("reading {input}"))?
    } else {
        input.to_string()
    };
    let words: Vec<Word> = text
        .split([',', ' ', '\n', '\t', '\r'])
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Word>())
        .collect::<Result<_, _>>()?;
    if words.is_empty() {
        bail!("empty forbidden system");
    }
    Ok(ForbiddenSystem::new(words))
}

fn sweep_csv(report: &SweepReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "max_period", "witness", "fib", "bound_met"])?;
    for (n, row) in &report.per_n {
        w.write_record([
            n.to_string(),
            row.max_period.to_string(),
            row.witness.clone(),
            row.fib.to_string(),
            row.bound_met.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Applies random improvement rewrites to random systems, checking that the
/// final term never drops. Prints a one-line summary.
fn rewrite_trials(n: usize, trials: u64, seed: u64) -> anyhow::Result<bool> {
    let n = n.clamp(5, 14);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut applied = 0u64;
    let mut attempts = 0u64;
    while applied < trials && attempts < trials * 200 {
        attempts += 1;
        let pairs = [1usize, 2, 3][rng.random_range(0..3)];
        let Some(s) = random_system(&mut rng, n, pairs) else {
            continue;
        };
        let before = s.generate(1, 2).last();
        let rewritten: Option<System> = match rng.random_range(0..3) {
            0 => {
                let exc: Vec<usize> = s.exceptional().iter().copied().collect();
                exc.choose(&mut rng)
                    .and_then(|&r| improve_shift_right(&s, r).ok())
            }
            1 => {
                let exc: Vec<usize> = s.exceptional().iter().copied().collect();
                exc.choose(&mut rng).and_then(|&r| improve_swap(&s, r).ok())
            }
            _ => improve_select_fine(&s).ok().map(|o| o.system().clone()),
        };
        let Some(s2) = rewritten else { continue };
        applied += 1;
        if s2.generate(1, 2).last() < before {
            eprintln!("rewrite decreased the final term on {s:?}");
            return Ok(false);
        }
    }
    println!("rewrite trials: {applied} applications, none decreased y_n");
    Ok(applied >= trials)
}
