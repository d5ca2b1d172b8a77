use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process;

use clap::{Args, Parser, Subcommand};

use tribo_cli::claims::{self, Claim, Status, SuiteConfig};
use tribo_cli::{exit, exit_code, format_real, Table, WordSpec};
use tribo_core::abelian;
use tribo_core::numeration;
use tribo_core::special;
use tribo_core::spectral::{self, SpectralData, PROOF_PLAN};
use tribo_core::word::{format_word, DEFAULT_MAX_BUFFER};
use tribo_core::{Error, ScanConfig, Symbol};

#[derive(Debug, Parser)]
#[command(
    name = "tribo",
    version,
    about = "Abelian complexity and balance of the Tribonacci word"
)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomised checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest word prefix to build, in symbols
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_BUFFER)]
    max_buffer: usize,

    /// Window positions scanned per length before giving up (default: 64n + 4096)
    #[arg(long, global = true)]
    scan_cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a prefix of the fixed point
    Generate {
        word: WordSpec,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        length: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Abelian complexity table `n,rho`
    Rho {
        word: WordSpec,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        from: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        to: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-letter imbalance of the factors of each length up to `max_len`
    Balance {
        word: WordSpec,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shortest pair of windows whose counts of one letter differ by `target`
    Witness {
        word: WordSpec,
        #[arg(long)]
        letter: usize,
        #[arg(long, default_value_t = 3)]
        target: u32,
        #[arg(long)]
        max_len: usize,
        /// Only windows inside the first `scan_len` symbols are compared
        #[arg(long)]
        scan_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deviation of the letter count from its expectation, `N,discrepancy`
    Discrepancy {
        #[arg(value_parser = clap::value_parser!(u64).range(0..=2))]
        letter: u64,
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zeckendorf-Tribonacci digits of N, least significant first
    Zeckendorf { n: u64 },
    /// Spectral constants as `name=value` lines
    Constants,
    /// Right special factors and the rho = 3 characterisation
    Special {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        from: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        to: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the registered claims and report on each
    Verify {
        #[arg(long, default_value = "paper", value_parser = ["paper"])]
        suite: String,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Run only these claims (repeatable)
        #[arg(long = "claim")]
        claims: Vec<String>,
        /// List the registered claim ids and exit
        #[arg(long)]
        list: bool,
    },
}

enum Failure {
    Core(Error),
    Io(io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            process::exit(exit::USAGE);
        }
    }
    let code = match run(cli) {
        Ok(code) => code,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            exit::CLAIM_FAILURE
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            exit::USAGE
        }
    };
    process::exit(code);
}

fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn check_range(from: u64, to: u64) -> Result<(), Failure> {
    if from > to {
        return Err(Failure::Usage(format!("empty range {from}..{to}")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let g = &cli.global;
    let scan = ScanConfig {
        cap: g.scan_cap,
        ..ScanConfig::default()
    };
    match cli.command {
        Command::Generate { word, length, out } => {
            let buffer = word.buffer(length as usize, g.max_buffer)?;
            let mut text = format_word(buffer.slice(0, length as usize)?)?;
            text.push('\n');
            emit(out.as_deref(), &text)?;
        }
        Command::Rho {
            word,
            from,
            to,
            out,
        } => {
            check_range(from, to)?;
            let (from, to) = (from as usize, to as usize);
            let index = word.index(to, g.max_buffer, &scan)?;
            eprintln!("scanning n = {from}..{to} of {word}");
            let profiles = abelian::length_profiles(&index, from..=to, &scan)?;
            let mut table = Table::new(&["n", "rho"]);
            let mut first_seen: Vec<(usize, usize)> = Vec::new();
            for p in &profiles {
                table.row([p.n().to_string(), p.rho().to_string()]);
                if !first_seen.iter().any(|&(rho, _)| rho == p.rho()) {
                    first_seen.push((p.rho(), p.n()));
                }
            }
            emit(out.as_deref(), table.as_str())?;
            first_seen.sort_unstable();
            for (rho, n) in first_seen {
                eprintln!("rho = {rho} first at n = {n}");
            }
        }
        Command::Balance { word, max_len, out } => {
            let max_len = max_len as usize;
            let index = word.index(max_len, g.max_buffer, &scan)?;
            eprintln!("scanning n = 1..{max_len} of {word}");
            let rows = abelian::balance_profile(&index, max_len, &scan)?;
            let m = word.alphabet_size();
            let mut header = vec!["n".to_string(), "rho".to_string()];
            header.extend((0..m).map(|a| format!("max_imbalance_{a}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut table = Table::new(&header);
            let mut global = vec![0u32; m];
            for row in &rows {
                let mut fields = vec![row.n.to_string(), row.rho.to_string()];
                for (a, &d) in row.max_imbalance.iter().enumerate() {
                    global[a] = global[a].max(d);
                    fields.push(d.to_string());
                }
                table.row(fields);
            }
            emit(out.as_deref(), table.as_str())?;
            let overall = global.iter().copied().max().unwrap_or(0);
            eprintln!("per-letter maximum imbalance {global:?}, global maximum {overall}");
        }
        Command::Witness {
            word,
            letter,
            target,
            max_len,
            scan_len,
            out,
        } => {
            let buffer = word.buffer(scan_len.max(1), g.max_buffer)?;
            let symbol = Symbol::new(letter, word.alphabet_size())?;
            let found =
                abelian::imbalance_witness_search(&buffer, symbol, target, max_len, scan_len)?;
            let mut table =
                Table::new(&["letter", "length", "pos_u", "pos_v", "count_u", "count_v"]);
            match found {
                Some(w) => {
                    table.row([
                        w.letter.to_string(),
                        w.length.to_string(),
                        w.pos_u.to_string(),
                        w.pos_v.to_string(),
                        w.count_u.to_string(),
                        w.count_v.to_string(),
                    ]);
                    eprintln!(
                        "letter {letter}: imbalance {} at length {}",
                        w.diff, w.length
                    );
                }
                None => eprintln!("no imbalance of {target} up to length {max_len}"),
            }
            emit(out.as_deref(), table.as_str())?;
        }
        Command::Discrepancy { letter, n_max, out } => {
            let letter = letter as usize;
            let sd = SpectralData::standard()?;
            let buffer = WordSpec::Tribonacci.buffer(n_max.max(1), g.max_buffer)?;
            let mut table = Table::new(&["N", "discrepancy"]);
            let (mut lo, mut hi) = (0.0f64, 0.0f64);
            for n in 0..=n_max {
                let d = spectral::discrepancy_direct(&buffer, n, letter, &sd)?;
                lo = lo.min(d);
                hi = hi.max(d);
                table.row([n.to_string(), format_real(d)]);
            }
            emit(out.as_deref(), table.as_str())?;
            let interval = PROOF_PLAN[letter].interval;
            let inside = interval.contains_interval(lo, hi);
            eprintln!("min {}", format_real(lo));
            eprintln!("max {}", format_real(hi));
            eprintln!(
                "interval ({}, {}) {}",
                interval.lower,
                interval.upper,
                if inside {
                    "contains the observed range"
                } else {
                    "does NOT contain the observed range"
                }
            );
        }
        Command::Zeckendorf { n } => {
            println!("{}", numeration::zeckendorf_encode(n));
        }
        Command::Constants => {
            let sd = SpectralData::standard()?;
            let lines = [
                ("beta", sd.beta),
                ("abs_alpha", sd.abs_alpha()),
                ("abs_a_alpha", sd.abs_a_alpha()),
                ("factor_i0", sd.gap_magnitude(0)),
                ("factor_i1", sd.gap_magnitude(1)),
                ("factor_i2", sd.gap_magnitude(2)),
            ];
            for (name, value) in lines {
                println!("{name}={}", format_real(value));
            }
        }
        Command::Special { from, to, out } => {
            check_range(from, to)?;
            let (from, to) = (from as usize, to as usize);
            let index = WordSpec::Tribonacci.index(to, g.max_buffer, &scan)?;
            let analyses = special::analyze_lengths(&index, from..=to, &scan)?;
            let mut table = Table::new(&[
                "n",
                "right_special_word",
                "i",
                "j",
                "k",
                "bispecial",
                "rho",
                "rho3_closed_form",
            ]);
            for a in &analyses {
                let rs = &a.special;
                table.row([
                    a.n().to_string(),
                    format_word(&rs.word)?,
                    rs.parikh[0].to_string(),
                    rs.parikh[1].to_string(),
                    rs.parikh[2].to_string(),
                    rs.is_bispecial.to_string(),
                    a.rho().to_string(),
                    special::rho3_closed_form(a.n()).to_string(),
                ]);
            }
            emit(out.as_deref(), table.as_str())?;
        }
        Command::Verify {
            suite: _,
            json,
            claims: ids,
            list,
        } => {
            if list {
                for c in &claims::REGISTRY {
                    println!("{}\t{}", c.id, c.description);
                }
                return Ok(exit::OK);
            }
            let selected: Vec<&Claim> = if ids.is_empty() {
                claims::REGISTRY.iter().collect()
            } else {
                ids.iter()
                    .map(|id| {
                        claims::find(id)
                            .ok_or_else(|| Failure::Usage(format!("unknown claim `{id}`")))
                    })
                    .collect::<Result<_, _>>()?
            };
            let config = SuiteConfig {
                seed: g.seed,
                max_buffer: g.max_buffer,
                scan,
            };
            let report = claims::run_suite(config, &selected);
            for c in &report.claims {
                let status = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                };
                println!(
                    "{status} {} ({} ms): observed {}",
                    c.claim_id, c.runtime_ms, c.observed
                );
                if c.status == Status::Fail {
                    println!("     expected {}", c.expected);
                }
            }
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).map_err(io::Error::other)?;
                fs::write(path, text + "\n")?;
            }
            return Ok(if report.all_pass() {
                exit::OK
            } else {
                exit::CLAIM_FAILURE
            });
        }
    }
    Ok(exit::OK)
}
