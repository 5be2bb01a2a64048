//! `sdfkit` command line: search, bounds, constructions, character sums,
//! proof inequality checks, tournament verification, and batch tables.
//!
//! Data goes to stdout, logs to stderr. Usage and domain errors exit 2;
//! budget exhaustion exits 0 with `"exact": false` in the output.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use sdfkit::bounds::{bound_report, proof_inequality_report, BoundReport};
use sdfkit::cache::{CacheRecord, FCache};
use sdfkit::construct::{pigeonhole_witness, product_construct, ramsey_construct};
use sdfkit::modarith::Modulus;
use sdfkit::quadchar::{full_residue_pair_sum, inner_pair_sum, s_d, CharProduct};
use sdfkit::search::{greedy_lower, max_sdf_exact, Budget, SearchResult};
use sdfkit::sdf::{CandidateSet, SetWitness};
use sdfkit::tournament::{paley_tournament, random_digraph, verify_lemma, ProductGraph};

#[derive(Parser)]
#[command(name = "sdfkit", version, about = "Square-difference-free sets in Z_m")]
struct Cli {
    /// TOML config file (flags override config values).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Result cache path (overrides SDFKIT_CACHE and config).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Replace an even modulus by its odd part instead of rejecting it.
    #[arg(long, global = true)]
    drop_even_part: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a maximum (or greedy) valid set for one modulus.
    Search {
        #[arg(long)]
        m: u64,
        /// Exhaustive branch-and-bound search (the default).
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        /// Greedy lower bound only.
        #[arg(long)]
        greedy: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Evaluate every upper bound for one modulus or a range.
    Bounds {
        #[arg(long, conflicts_with = "table")]
        m: Option<u64>,
        /// Inclusive range `A..B` of moduli.
        #[arg(long)]
        table: Option<String>,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
        /// Exponent constant for the combined bound, as `0.2` or `1/5`.
        #[arg(long)]
        c: Option<String>,
    },
    /// Build valid sets from smaller pieces.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Character sum S_D of a set, with the pair-sum factorization cross-check.
    Charsum {
        #[arg(long)]
        m: u64,
        /// Comma-separated 1-based prime indices, e.g. `1,2`.
        #[arg(long = "D")]
        d: String,
        /// Comma-separated elements, e.g. `0,2`.
        #[arg(long)]
        set: String,
    },
    /// Certify the intermediate inequalities of the upper-bound proof.
    VerifyProof {
        /// Comma-separated odd primes, sorted, e.g. `3,5,7`.
        #[arg(long)]
        primes: String,
    },
    /// Covering-family verification in tournament products.
    Tournament {
        #[command(subcommand)]
        kind: TournamentKind,
    },
    /// Batch CSV: modulus, F, every bound, and slack, for odd squarefree m.
    Table {
        #[arg(long, default_value_t = 1000)]
        max: u64,
        #[arg(long)]
        c: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Combine coprime parts from a JSON file (array of {"m":..,"set":[..]}).
    Product {
        #[arg(long)]
        parts: PathBuf,
    },
    /// Monochromatic-clique pivot construction for a prime p = 1 mod 4.
    Ramsey {
        #[arg(long)]
        p: u64,
    },
    /// Collision certificate for the map a + xi*b on a set modulo p.
    Pigeonhole {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        set: String,
        #[arg(long)]
        xi: Option<u64>,
    },
}

#[derive(Subcommand)]
enum TournamentKind {
    /// Verify the covering-family bound on the Paley product for m.
    Verify {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify on a product of k random n-vertex digraphs.
    Random {
        k: usize,
        n: usize,
        seed: u64,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    budget_secs: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    cache: Option<PathBuf>,
    budget_nodes: Option<u64>,
    budget_secs: Option<u64>,
    c: Option<String>,
}

fn load_config(path: &Option<PathBuf>) -> Result<Config> {
    let path = match path {
        Some(p) => p.clone(),
        None => {
            let default = PathBuf::from("sdfkit.toml");
            if !default.exists() {
                return Ok(Config::default());
            }
            default
        }
    };
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

fn cache_path(cli_flag: &Option<PathBuf>, config: &Config) -> PathBuf {
    cli_flag
        .clone()
        .or_else(|| std::env::var_os("SDFKIT_CACHE").map(PathBuf::from))
        .or_else(|| config.cache.clone())
        .unwrap_or_else(|| PathBuf::from("fcache.jsonl"))
}

fn budget(args: &BudgetArgs, config: &Config) -> Budget {
    let default = Budget::default();
    let nodes = args
        .budget_nodes
        .or(config.budget_nodes)
        .unwrap_or(default.max_nodes);
    let secs = args
        .budget_secs
        .or(config.budget_secs)
        .map(Duration::from_secs)
        .unwrap_or(default.max_time);
    Budget::new(nodes, secs)
}

/// Accepts `a/b` or a plain decimal such as `0.2`.
fn parse_c(text: &str) -> Result<(u64, u64)> {
    if let Some((a, b)) = text.split_once('/') {
        return Ok((a.trim().parse()?, b.trim().parse()?));
    }
    match text.split_once('.') {
        None => Ok((text.trim().parse()?, 1)),
        Some((int, frac)) => {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(anyhow!("cannot parse c value {text:?}"));
            }
            let den = 10u64
                .checked_pow(frac.len() as u32)
                .ok_or_else(|| anyhow!("too many decimal places in {text:?}"))?;
            let int: u64 = if int.is_empty() { 0 } else { int.trim().parse()? };
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac.parse::<u64>().unwrap()))
                .ok_or_else(|| anyhow!("c value {text:?} too large"))?;
            Ok((num, den))
        }
    }
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<u64>().map_err(Into::into))
        .collect()
}

fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map_err(Into::into))
        .collect()
}

fn modulus_from(m: u64, drop_even_part: bool) -> Result<Modulus> {
    let mut m = m;
    if drop_even_part {
        while m > 1 && m % 2 == 0 {
            m /= 2;
        }
    }
    Ok(Modulus::new(m)?)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn c_value(flag: &Option<String>, config: &Config) -> Result<(u64, u64)> {
    match flag.as_deref().or(config.c.as_deref()) {
        Some(text) => parse_c(text),
        None => Ok((1, 5)),
    }
}

fn cached_f(cache: &FCache, m: u64) -> Option<(usize, bool)> {
    cache.get(m).map(|r| (r.f, r.exact))
}

fn run_search(
    md: &Modulus,
    budget: &Budget,
    greedy: bool,
    cache: &mut FCache,
) -> Result<SearchResult> {
    let m = md.value();
    if greedy {
        let start = std::time::Instant::now();
        let set = greedy_lower(md, None)?;
        return Ok(SearchResult {
            m,
            size: set.len(),
            best_set: set.elements().to_vec(),
            exact: false,
            nodes_explored: 0,
            wall_time_ms: start.elapsed().as_millis() as u64,
        });
    }
    if let Some(rec) = cache.get(m) {
        if rec.exact {
            eprintln!("cache hit for m={m}");
            return Ok(SearchResult {
                m,
                size: rec.f,
                best_set: rec.witness.clone(),
                exact: true,
                nodes_explored: 0,
                wall_time_ms: 0,
            });
        }
    }
    let result = max_sdf_exact(md, budget)?;
    cache.append(CacheRecord::from_result(&result))?;
    if !result.exact {
        eprintln!(
            "budget exhausted for m={m} after {} nodes; size {} is a lower bound",
            result.nodes_explored, result.size
        );
    }
    Ok(result)
}

fn bound_csv_header() -> &'static str {
    "m,n,F,F_exact,main,sqrt_m,tournament,combined,min_applicable,slack"
}

fn bound_csv_row(rep: &BoundReport) -> String {
    let entry = |name: &str| {
        rep.entries
            .iter()
            .find(|e| e.name == name)
            .filter(|e| e.applicable)
            .map(|e| format!("{:.4}", e.value))
            .unwrap_or_default()
    };
    let f = rep.f_known.map(|f| f.to_string()).unwrap_or_default();
    let f_exact = rep.f_exact.map(|e| e.to_string()).unwrap_or_default();
    let slack = rep
        .f_known
        .map(|f| (rep.min_applicable as i64 - f as i64).to_string())
        .unwrap_or_default();
    format!(
        "{},{},{f},{f_exact},{},{},{},{},{},{slack}",
        rep.m,
        rep.n,
        entry("main"),
        entry("sqrt_m"),
        entry("tournament"),
        entry("combined"),
        rep.min_applicable,
    )
}

fn parse_range(text: &str) -> Result<(u64, u64)> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("range must look like 3..1000"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn paley_product(md: &Modulus) -> Result<ProductGraph> {
    let factors = md
        .primes()
        .iter()
        .map(|&p| paley_tournament(p))
        .collect::<sdfkit::Result<Vec<_>>>()?;
    Ok(ProductGraph::new(factors)?)
}

fn real_main() -> Result<()> {
    let cli = Cli::parse();
    let config = load_config(&cli.config)?;

    match &cli.command {
        Command::Search {
            m,
            greedy,
            budget: budget_args,
            ..
        } => {
            let md = modulus_from(*m, cli.drop_even_part)?;
            let budget = budget(budget_args, &config);
            let mut cache = FCache::open(cache_path(&cli.cache, &config))?;
            let result = run_search(&md, &budget, *greedy, &mut cache)?;
            print_json(&result)?;
        }
        Command::Bounds { m, table, csv, json, c } => {
            let c = c_value(c, &config)?;
            let cache = FCache::open(cache_path(&cli.cache, &config))?;
            match (m, table) {
                (Some(m), None) => {
                    let md = modulus_from(*m, cli.drop_even_part)?;
                    let rep = bound_report(&md, c, cached_f(&cache, md.value()))?;
                    if *csv {
                        println!("{}", bound_csv_header());
                        println!("{}", bound_csv_row(&rep));
                    } else {
                        print_json(&rep)?;
                    }
                }
                (None, Some(range)) => {
                    let (a, b) = parse_range(range)?;
                    let as_json = *json && !*csv;
                    if !as_json {
                        println!("{}", bound_csv_header());
                    }
                    for m in a..=b {
                        let Ok(md) = Modulus::new(m) else { continue };
                        let rep = bound_report(&md, c, cached_f(&cache, m))?;
                        if as_json {
                            print_json(&rep)?;
                        } else {
                            println!("{}", bound_csv_row(&rep));
                        }
                    }
                }
                _ => return Err(anyhow!("bounds needs exactly one of --m or --table")),
            }
        }
        Command::Construct { kind } => match kind {
            ConstructKind::Product { parts } => {
                let text = std::fs::read_to_string(parts)
                    .with_context(|| format!("reading {}", parts.display()))?;
                let witnesses: Vec<SetWitness> = serde_json::from_str(&text)?;
                let sets = witnesses
                    .iter()
                    .map(|w| w.to_candidate())
                    .collect::<sdfkit::Result<Vec<CandidateSet>>>()?;
                let combined = product_construct(&sets)?;
                print_json(&SetWitness::from_candidate(&combined))?;
            }
            ConstructKind::Ramsey { p } => {
                let r = ramsey_construct(*p)?;
                let out = serde_json::json!({
                    "p": p,
                    "witness": SetWitness::from_candidate(&r.set),
                    "clique": r.clique,
                    "color": r.color,
                    "pivot_count": r.pivot_count,
                    "guarantee": r.guarantee,
                });
                print_json(&out)?;
            }
            ConstructKind::Pigeonhole { p, set, xi } => {
                let md = Modulus::new(*p)?;
                let a = CandidateSet::new(md, &parse_u64_list(set)?)?;
                let cert = pigeonhole_witness(&a, *xi)?;
                print_json(&cert)?;
            }
        },
        Command::Charsum { m, d, set } => {
            let md = modulus_from(*m, cli.drop_even_part)?;
            let cp = CharProduct::new(md.clone(), &parse_index_list(d)?)?;
            let a = CandidateSet::new(md.clone(), &parse_u64_list(set)?)?;
            let value = s_d(&a, &cp);
            let primes = cp.primes();
            let mut pairs_checked = 0u64;
            let mut all_match = true;
            for &b1 in a.elements() {
                for &b2 in a.elements() {
                    let direct = full_residue_pair_sum(b1, b2, &cp);
                    let factored: i64 = primes
                        .iter()
                        .map(|&p| inner_pair_sum(b1 % p, b2 % p, p))
                        .product();
                    pairs_checked += 1;
                    all_match &= direct == factored;
                }
            }
            let out = serde_json::json!({
                "m": md.value(),
                "D_primes": primes,
                "set": a.elements(),
                "S_D": value,
                "pair_factorization": {
                    "pairs_checked": pairs_checked,
                    "all_match": all_match,
                },
            });
            print_json(&out)?;
        }
        Command::VerifyProof { primes } => {
            let primes = parse_u64_list(primes)?;
            let rep = proof_inequality_report(&primes)?;
            print_json(&rep)?;
        }
        Command::Tournament { kind } => match kind {
            TournamentKind::Verify { m, seed } => {
                let md = modulus_from(*m, cli.drop_even_part)?;
                let product = paley_product(&md)?;
                let rep = verify_lemma(&product, 20, *seed)?;
                print_json(&rep)?;
            }
            TournamentKind::Random { k, n, seed } => {
                if *k == 0 || *n == 0 {
                    return Err(anyhow!("k and n must be positive"));
                }
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                let factors = (0..*k).map(|_| random_digraph(*n, &mut rng)).collect();
                let product = ProductGraph::new(factors)?;
                let rep = verify_lemma(&product, 20, *seed)?;
                print_json(&rep)?;
            }
        },
        Command::Table { max, c, budget: budget_args } => {
            let c = c_value(c, &config)?;
            let budget = budget(budget_args, &config);
            let mut cache = FCache::open(cache_path(&cli.cache, &config))?;
            println!("{}", bound_csv_header());
            for m in (3..=*max).step_by(2) {
                let Ok(md) = Modulus::new(m) else { continue };
                let f = match cache.get(m) {
                    Some(rec) if rec.exact => (rec.f, true),
                    _ => {
                        let r = max_sdf_exact(&md, &budget)?;
                        cache.append(CacheRecord::from_result(&r))?;
                        (r.size, r.exact)
                    }
                };
                let rep = bound_report(&md, c, Some(f))?;
                println!("{}", bound_csv_row(&rep));
            }
        }
    }
    Ok(())
}

/// Domain errors from the library are usage-class failures (exit 2); real
/// I/O or serialization trouble exits 1.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<sdfkit::Error>() {
        Some(sdfkit::Error::Io(_)) | Some(sdfkit::Error::Json(_)) => 1,
        Some(_) => 2,
        None => {
            // Parse failures of flag values are usage errors too.
            if err.downcast_ref::<std::num::ParseIntError>().is_some()
                || err.downcast_ref::<std::io::Error>().is_none()
            {
                2
            } else {
                1
            }
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
