//! Command-line surface: stability checks, exhaustive enumeration,
//! simulation runs from flat config files, snapshot metric time series, and
//! the motif census with its configuration-model null.
//!
//! Exit codes: 0 success (for `stability`: the network is stable), 1 the
//! stability check found a violation, 2 any error.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analytics::{
    analyze_snapshot, configuration_model, count_motif, load_edge_list, null_model_counts,
    summarize_null, ClassRule, CoreSpec, EdgeListFormat, Motif, Snapshot,
};
use crate::cost::{CostMode, CostParams};
use crate::dynamics::{
    convergence_prediction, run_game, DynRule, DynamicsConfig, Preference, Pricing, Scheduler,
};
use crate::graph::{Network, PlayerClass};
use crate::rat::{parse_rat, zero, Rat};
use crate::stability::{
    is_pairwise_stable, is_pairwise_stable_with_transfers, price_report_with_guard,
    StabilityReport, ENUMERATION_GUARD,
};
use crate::Error;

pub const SEED_ENV: &str = "NETFORM_SEED";

fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

#[derive(Parser, Debug)]
#[command(
    name = "netform",
    version,
    about = "Heterogeneous network-formation games: stability, dynamics, and topology analytics"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Plain,
    Pipe,
}

impl FormatArg {
    fn to_format(self) -> EdgeListFormat {
        match self {
            FormatArg::Plain => EdgeListFormat::PlainPairs,
            FormatArg::Pipe => EdgeListFormat::PipeAsRel,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Bare,
    Reliable,
}

#[derive(Args, Debug, Clone)]
struct CostArgs {
    /// Major weight A (rational "p/q")
    #[arg(long, value_parser = parse_rat, default_value = "2")]
    a: Rat,
    /// Major link cost (rational "p/q")
    #[arg(long = "c-a", value_parser = parse_rat, default_value = "2")]
    c_a: Rat,
    /// Minor link cost (rational "p/q")
    #[arg(long = "c-b", value_parser = parse_rat, default_value = "2")]
    c_b: Rat,
    /// Backup-path discount (rational "p/q")
    #[arg(long, value_parser = parse_rat, default_value = "1")]
    delta: Rat,
    /// Minors require reliable connectivity to other minors
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    tau: bool,
    /// Disconnection penalty per unreachable target (rational "p/q")
    #[arg(long, value_parser = parse_rat)]
    q: Option<Rat>,
    #[arg(long, value_enum, default_value = "bare")]
    mode: ModeArg,
}

impl CostArgs {
    fn to_params(&self, n: usize) -> Result<CostParams, Error> {
        let mode = match self.mode {
            ModeArg::Bare => CostMode::Bare,
            ModeArg::Reliable => CostMode::Reliable,
        };
        let p = CostParams {
            a: self.a,
            c_a: self.c_a,
            c_b: self.c_b,
            delta: self.delta,
            tau: self.tau,
            q: self
                .q
                .unwrap_or_else(|| CostParams::default_q(n, &self.a, &self.c_b)),
            mode,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Edge-list file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "plain")]
    format: FormatArg,
    /// Comma-separated external ids to mark as majors
    #[arg(long)]
    majors: Option<String>,
    /// Mark the m highest-degree nodes as majors
    #[arg(long)]
    top_majors: Option<usize>,
}

impl InputArgs {
    fn load(&self) -> Result<Network, Error> {
        let rule = if let Some(ids) = &self.majors {
            ClassRule::ExplicitMajors(ids.split(',').map(|s| s.trim().to_string()).collect())
        } else if let Some(m) = self.top_majors {
            ClassRule::TopDegreeMajors(m)
        } else {
            ClassRule::AllMinor
        };
        Ok(load_edge_list(&self.input, self.format.to_format(), &rule)?.net)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check pairwise stability of a network; exit 0 stable, 1 unstable
    Stability {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        cost: CostArgs,
        /// Allow side payments in deviations
        #[arg(long)]
        transfers: bool,
    },
    /// Enumerate all graphs on (n_a, n_b) players and report efficiency prices
    Enumerate {
        #[arg(long)]
        n_a: usize,
        #[arg(long)]
        n_b: usize,
        #[command(flatten)]
        cost: CostArgs,
        #[arg(long)]
        transfers: bool,
        /// Override the enumeration size guard
        #[arg(long)]
        force: bool,
    },
    /// Run the formation game from a flat key=value config file
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Metric time series (CSV) over snapshot edge-list files
    Analyze {
        /// Snapshot files, one per label
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "plain")]
        format: FormatArg,
        /// k-core level defining the core
        #[arg(long, default_value_t = 2)]
        core_k: usize,
        /// Comma-separated metric names to emit
        #[arg(
            long,
            default_value = "core-distance,density,disjoint-paths,core-ratio,cycle"
        )]
        metrics: String,
    },
    /// Motif census against a configuration-model null
    Motifs {
        #[command(flatten)]
        input: InputArgs,
        /// double-star or entangled-cycle
        #[arg(long)]
        motif: String,
        /// Degree/size threshold m for double-star
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Cycle length l for entangled-cycle
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Seed (defaults to $NETFORM_SEED, then 0)
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for null sampling
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Draw one configuration-model network with the input's degree sequence
    Nullmodel {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn emit<T: Serialize>(config: serde_json::Value, report: &T) -> Result<(), Error> {
    let doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "report": report,
    });
    println!("{}", serde_json::to_string_pretty(&doc).map_err(io_err)?);
    Ok(())
}

fn io_err(e: serde_json::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn parse_motif(name: &str, m: usize, l: usize) -> Result<Motif, Error> {
    match name {
        "double-star" => Ok(Motif::DoubleStar(m)),
        "entangled-cycle" => Ok(Motif::EntangledCycle(l)),
        other => Err(Error::BadArgument(format!("unknown motif `{other}`"))),
    }
}

// ---------------------------------------------------------------------------
// Simulation config file

fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, Error> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: "expected `key = value`".into(),
            });
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

struct KvConfig {
    map: BTreeMap<String, String>,
}

impl KvConfig {
    fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    fn require(&self, key: &str) -> Result<&str, Error> {
        self.get(key)
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize, Error> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("bad integer for `{key}`: {v}"))),
        }
    }

    fn rat(&self, key: &str, default: Option<Rat>) -> Result<Rat, Error> {
        match self.get(key) {
            Some(v) => parse_rat(v),
            None => default.ok_or_else(|| Error::Config(format!("missing required key `{key}`"))),
        }
    }

    fn bool(&self, key: &str, default: bool) -> Result<bool, Error> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(v) => Err(Error::Config(format!("bad boolean for `{key}`: {v}"))),
        }
    }
}

fn parse_arrivals(s: &str) -> Result<Vec<PlayerClass>, Error> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            'A' | 'a' => Ok(PlayerClass::MajorA),
            'B' | 'b' => Ok(PlayerClass::MinorB),
            other => Err(Error::Config(format!("bad arrival class `{other}`"))),
        })
        .collect()
}

struct SimSpec {
    n_a: usize,
    n_b: usize,
    cfg: DynamicsConfig,
    trace_out: Option<PathBuf>,
}

fn build_sim(kv: &KvConfig) -> Result<SimSpec, Error> {
    let n_a = kv.usize("n_a", usize::MAX)?;
    let n_b = kv.usize("n_b", usize::MAX)?;
    if n_a == usize::MAX || n_b == usize::MAX {
        return Err(Error::Config("n_a and n_b are required".into()));
    }
    let n = n_a + n_b;
    let a = kv.rat("a", None)?;
    let c_b = kv.rat("c_b", None)?;
    let mode = match kv.get("mode").unwrap_or("bare") {
        "bare" => CostMode::Bare,
        "reliable" => CostMode::Reliable,
        other => return Err(Error::Config(format!("bad mode `{other}`"))),
    };
    let params = CostParams {
        a,
        c_a: kv.rat("c_a", None)?,
        c_b,
        delta: kv.rat("delta", Some(crate::rat::one()))?,
        tau: kv.bool("tau", true)?,
        q: kv.rat("q", Some(CostParams::default_q(n, &a, &c_b)))?,
        mode,
    };
    params.validate()?;
    let rule = match kv.get("rule").unwrap_or("2b") {
        "2a" => DynRule::Rule2a,
        "2b" => DynRule::Rule2b,
        other => return Err(Error::Config(format!("bad rule `{other}`"))),
    };
    let preference = match kv.get("preference").unwrap_or("po1") {
        "po1" => Preference::EfficientPo1,
        "po2" => Preference::CheapestEquivalentPo2,
        other => return Err(Error::Config(format!("bad preference `{other}`"))),
    };
    let pricing = match kv.get("pricing").unwrap_or("efficient") {
        "efficient" => Pricing::Efficient,
        "strategic" => Pricing::Strategic,
        other => return Err(Error::Config(format!("bad pricing `{other}`"))),
    };
    let seed = kv
        .get("seed")
        .map(|v| {
            v.parse::<u64>()
                .map_err(|_| Error::Config(format!("bad seed `{v}`")))
        })
        .transpose()?
        .unwrap_or_else(default_seed);
    let scheduler = match kv.get("scheduler").unwrap_or("random") {
        "round-robin" => Scheduler::RoundRobin,
        "random" => Scheduler::UniformRandom { seed },
        "scripted" => {
            let arrivals = parse_arrivals(kv.require("arrivals")?)?;
            let turns = match kv.get("turns") {
                None => Vec::new(),
                Some(list) => list
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Config(format!("bad turn index `{s}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            };
            Scheduler::Scripted { arrivals, turns }
        }
        other => return Err(Error::Config(format!("bad scheduler `{other}`"))),
    };
    let cfg = DynamicsConfig {
        params,
        rule,
        transfers: kv.bool("transfers", false)?,
        preference,
        pricing,
        scheduler,
        max_rounds: kv.usize("max_rounds", 50)?,
    };
    Ok(SimSpec {
        n_a,
        n_b,
        cfg,
        trace_out: kv.get("trace_out").map(PathBuf::from),
    })
}

fn cmd_simulate(config_path: &PathBuf) -> Result<(), Error> {
    let text = std::fs::read_to_string(config_path)?;
    let kv = KvConfig {
        map: parse_kv(&text)?,
    };
    let spec = build_sim(&kv)?;
    let (trace, state) = run_game(&spec.cfg, spec.n_a, spec.n_b)?;
    if let Some(path) = &spec.trace_out {
        let mut f = std::fs::File::create(path)?;
        for turn in &trace.turns {
            writeln!(
                f,
                "{}",
                serde_json::to_string(turn).map_err(io_err)?
            )?;
        }
    }
    let p = &spec.cfg.params;
    let q_dominated = trace.final_social_cost >= p.q && p.q > zero();
    let prediction = convergence_prediction(p, &trace.arrival_order);
    let ledger_total: Rat = state.ledger.values().copied().sum();
    let summary = json!({
        "converged": trace.converged,
        "active_rounds": trace.active_rounds,
        "budget_hit": trace.budget_hit,
        "final_social_cost": crate::rat::fmt_rat(&trace.final_social_cost),
        "final_phase": trace.final_phase,
        "q_dominated": q_dominated,
        "prediction": prediction,
        "edges": state.net.edge_count(),
        "ledger_total": crate::rat::fmt_rat(&ledger_total),
    });
    emit(json!({ "file": config_path, "resolved": kv.map, "config": spec.cfg }), &summary)
}

fn stability_exit(report: &StabilityReport) -> i32 {
    if report.stable {
        0
    } else {
        1
    }
}

fn cmd_analyze(
    files: &[PathBuf],
    format: FormatArg,
    core_k: usize,
    metrics: &str,
) -> Result<(), Error> {
    const KNOWN: [&str; 5] = [
        "core-distance",
        "density",
        "disjoint-paths",
        "core-ratio",
        "cycle",
    ];
    let chosen: Vec<&str> = metrics.split(',').map(|s| s.trim()).collect();
    for m in &chosen {
        if !KNOWN.contains(m) {
            return Err(Error::BadArgument(format!("unknown metric `{m}`")));
        }
    }
    if files.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut w = csv::Writer::from_writer(std::io::stdout());
    let mut header = vec!["label", "nodes", "edges", "core_size"];
    for m in &chosen {
        match *m {
            "core-distance" => header.extend(["mean_core_distance", "unreachable"]),
            "density" => header.push("core_density"),
            "disjoint-paths" => header.push("mean_disjoint_paths"),
            "core-ratio" => header.push("core_ratio"),
            "cycle" => header.extend(["mean_shortest_cycle", "cycle_pairs_skipped"]),
            _ => unreachable!(),
        }
    }
    w.write_record(&header).map_err(csv_err)?;
    for file in files {
        let loaded = load_edge_list(file, format.to_format(), &ClassRule::AllMinor)?;
        let label = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.display().to_string());
        let row = analyze_snapshot(&Snapshot::new(label, loaded.net), &CoreSpec::KLevel(core_k))?;
        let mut rec = vec![
            row.label.clone(),
            row.nodes.to_string(),
            row.edges.to_string(),
            row.core_size.to_string(),
        ];
        for m in &chosen {
            match *m {
                "core-distance" => {
                    rec.push(format!("{}", row.mean_core_distance));
                    rec.push(row.unreachable.to_string());
                }
                "density" => rec.push(format!("{}", row.core_density)),
                "disjoint-paths" => rec.push(format!("{}", row.mean_disjoint_paths)),
                "core-ratio" => rec.push(format!("{}", row.core_ratio)),
                "cycle" => {
                    rec.push(
                        row.mean_shortest_cycle
                            .map(|v| format!("{v}"))
                            .unwrap_or_default(),
                    );
                    rec.push(row.cycle_pairs_skipped.to_string());
                }
                _ => unreachable!(),
            }
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn cmd_motifs(
    input: &InputArgs,
    motif: Motif,
    samples: usize,
    seed: u64,
    jobs: usize,
) -> Result<(), Error> {
    if samples < 2 {
        return Err(Error::BadArgument("need at least two null samples".into()));
    }
    let net = input.load()?;
    let observed = count_motif(&net, motif)?;
    let seq = net.degree_sequence();
    let jobs = jobs.max(1).min(samples);
    // Partition the sample index range; per-sample seeds depend only on the
    // index, so the merged result is independent of the job count.
    let chunk = samples.div_ceil(jobs);
    let mut counts: Vec<(usize, f64)> = Vec::with_capacity(samples);
    if jobs == 1 {
        counts = null_model_counts(&seq, motif, 0..samples, seed)?;
    } else {
        let mut parts: Vec<(usize, Result<Vec<(usize, f64)>, Error>)> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for j in 0..jobs {
                let start = j * chunk;
                let end = ((j + 1) * chunk).min(samples);
                if start >= end {
                    continue;
                }
                let seq = &seq;
                handles.push((
                    start,
                    scope.spawn(move || null_model_counts(seq, motif, start..end, seed)),
                ));
            }
            for (start, h) in handles {
                parts.push((start, h.join().expect("sampler thread panicked")));
            }
        });
        parts.sort_by_key(|(start, _)| *start);
        for (_, part) in parts {
            counts.extend(part?);
        }
    }
    let report = summarize_null(motif, observed, &counts);
    emit(
        json!({
            "input": input.input,
            "motif": motif,
            "samples": samples,
            "seed": seed,
            "jobs": jobs,
        }),
        &report,
    )
}

/// Run the CLI on explicit arguments; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success exits.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Stability {
            input,
            cost,
            transfers,
        } => {
            let net = input.load()?;
            let p = cost.to_params(net.n())?;
            let report = if transfers {
                is_pairwise_stable_with_transfers(&net, &p)?
            } else {
                is_pairwise_stable(&net, &p)?
            };
            emit(
                json!({ "input": input.input, "transfers": transfers, "params": p }),
                &report,
            )?;
            Ok(stability_exit(&report))
        }
        Command::Enumerate {
            n_a,
            n_b,
            cost,
            transfers,
            force,
        } => {
            let p = cost.to_params(n_a + n_b)?;
            let guard = if force { n_a + n_b } else { ENUMERATION_GUARD };
            let report = price_report_with_guard(&p, n_a, n_b, transfers, guard)?;
            emit(
                json!({
                    "n_a": n_a, "n_b": n_b, "transfers": transfers,
                    "force": force, "params": p,
                }),
                &report,
            )?;
            Ok(0)
        }
        Command::Simulate { config } => {
            cmd_simulate(&config)?;
            Ok(0)
        }
        Command::Analyze {
            files,
            format,
            core_k,
            metrics,
        } => {
            cmd_analyze(&files, format, core_k, &metrics)?;
            Ok(0)
        }
        Command::Motifs {
            input,
            motif,
            m,
            l,
            samples,
            seed,
            jobs,
        } => {
            let motif = parse_motif(&motif, m, l)?;
            cmd_motifs(&input, motif, samples, seed.unwrap_or_else(default_seed), jobs)?;
            Ok(0)
        }
        Command::Nullmodel { input, seed } => {
            let net = input.load()?;
            let sample =
                configuration_model(&net.degree_sequence(), seed.unwrap_or_else(default_seed))?;
            let edges: Vec<(usize, usize)> = sample
                .net
                .edges()
                .into_iter()
                .map(|(a, b)| (a.0, b.0))
                .collect();
            emit(
                json!({ "input": input.input, "seed": seed }),
                &json!({
                    "nodes": sample.net.n(),
                    "edges": edges,
                    "erased_stubs": sample.erased_stubs,
                    "total_stubs": sample.total_stubs,
                    "erased_fraction": sample.erased_fraction(),
                }),
            )?;
            Ok(0)
        }
    }
}

