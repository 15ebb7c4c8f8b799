use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use spreadlab::generate::{erdos_renyi, preferential_attachment};
use spreadlab::rng::{derive_seed, Domain};
use spreadlab::selection::{static_greedy_du_over, static_greedy_over};
use spreadlab::{
    assign_probabilities, check_submodularity, conventional_greedy, degree_seeds, parse_edge_list,
    random_seeds, snapshot_spread, write_edge_list, NodeId, ProbabilityModel, SeedSet,
    SelectionResult, SnapshotSet, Storage, WeightedGraph,
};

use crate::args::{
    Algorithm, AuditArgs, BenchArgs, EvaluateArgs, GenArgs, GraphArgs, GraphModel, ProbModel,
    SampleArgs, SelectArgs,
};
use crate::report::{format_real, write_csv, ResultRow};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<spreadlab::Error>() {
            Some(spreadlab::Error::Argument(msg)) => Failure::Usage(msg.clone()),
            _ => Failure::Runtime(e),
        }
    }
}

impl From<spreadlab::Error> for Failure {
    fn from(e: spreadlab::Error) -> Self {
        Failure::from(anyhow::Error::from(e))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
        let seed = nanos as u64;
        eprintln!("seed: {seed}");
        seed
    })
}

fn check_probability(p: Option<f64>) -> Outcome {
    match p {
        Some(p) if !(0.0..=1.0).contains(&p) => usage(format!("--p {p} is outside [0, 1]")),
        _ => Ok(()),
    }
}

/// Reads the graph and settles its probabilities. Returns the graph and the
/// master seed.
fn load_graph(args: &GraphArgs) -> Outcome<(WeightedGraph, u64)> {
    check_probability(args.p)?;
    let model = match (args.prob_model, args.p) {
        (None, _) => None,
        (Some(ProbModel::Uniform), Some(p)) => Some(ProbabilityModel::Uniform(p)),
        (Some(ProbModel::Uniform), None) => return usage("--prob-model uniform needs --p"),
        (Some(ProbModel::Wc), _) => Some(ProbabilityModel::WeightedCascade),
        (Some(ProbModel::Trivalency), _) => Some(ProbabilityModel::trivalency()),
    };
    let seed = resolve_seed(args.seed);

    let path = &args.graph;
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let default_p = if model.is_none() { args.p } else { None };
    let parsed = parse_edge_list(BufReader::new(file), default_p)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Runtime)?;
    if parsed.duplicate_edges > 0 {
        eprintln!("warning: dropped {} duplicate edges", parsed.duplicate_edges);
    }
    let graph = match model {
        Some(m) => assign_probabilities(&parsed.graph, &m, seed)?,
        None => parsed.graph,
    };
    if !graph.probabilities_assigned() {
        return Err(Failure::Runtime(anyhow!(
            "{}: some edges have no probability; pass --p or --prob-model",
            path.display()
        )));
    }
    Ok((graph, seed))
}

fn create(path: &Path) -> Outcome<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

/// Snapshot set `(r, seed)` for `g`, read from `cache` when the file matches
/// and written there otherwise.
fn snapshots<'g>(
    g: &'g WeightedGraph,
    r: usize,
    seed: u64,
    cache: Option<&Path>,
) -> Outcome<(SnapshotSet<'g>, Duration)> {
    let start = Instant::now();
    if let Some(path) = cache.filter(|p| p.exists()) {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        let cached = SnapshotSet::read_from(g, BufReader::new(file), Storage::Full)
            .with_context(|| format!("loading {}", path.display()))
            .map_err(Failure::Runtime)?;
        if cached.len() == r && cached.rng_seed() == seed {
            return Ok((cached, start.elapsed()));
        }
        eprintln!("note: {} holds R={} seed={}; resampling", path.display(), cached.len(), cached.rng_seed());
    }
    let ss = SnapshotSet::sample(g, r, seed, Storage::Full)?;
    let elapsed = start.elapsed();
    if let Some(path) = cache {
        let mut out = create(path)?;
        ss.write_to(&mut out)?;
        out.flush().with_context(|| format!("writing {}", path.display()))?;
    }
    Ok((ss, elapsed))
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn gen(args: GenArgs) -> Outcome {
    check_probability(args.p)?;
    let seed = resolve_seed(args.seed);
    let g = match args.model {
        GraphModel::Er => erdos_renyi(args.n, args.avg_degree, seed)?,
        GraphModel::Pa => preferential_attachment(args.n, args.avg_degree, seed)?,
    };
    let g = match args.p {
        Some(p) => assign_probabilities(&g, &ProbabilityModel::Uniform(p), seed)?,
        None => g,
    };
    match &args.out {
        Some(path) => {
            let mut out = create(path)?;
            write_edge_list(&g, &mut out)?;
            out.flush()?;
        }
        None => write_edge_list(&g, io::stdout().lock())?,
    }
    Ok(())
}

pub fn sample(args: SampleArgs) -> Outcome {
    let (g, seed) = load_graph(&args.graph)?;
    let ss = SnapshotSet::sample(&g, args.r as usize, seed, Storage::MaskOnly)?;
    let mut out = create(&args.out)?;
    ss.write_to(&mut out)?;
    out.flush()?;
    println!("wrote {} snapshots of {} edges to {}", ss.len(), g.edge_count(), args.out.display());
    Ok(())
}

pub fn select(args: SelectArgs) -> Outcome {
    let (g, seed) = load_graph(&args.graph)?;
    let (k, r) = (args.k as usize, args.r as usize);
    let cache = args.snapshots.as_deref();

    let result: SelectionResult = match args.algorithm {
        Algorithm::Static | Algorithm::StaticDu => {
            let (ss, sampling) = snapshots(&g, r, seed, cache)?;
            let mut res = if args.algorithm == Algorithm::Static {
                static_greedy_over(&ss, k)?
            } else {
                static_greedy_du_over(&ss, k)?
            };
            res.elapsed.sampling = sampling;
            res
        }
        Algorithm::Conventional => conventional_greedy(&g, k, r, seed)?,
        Algorithm::Degree | Algorithm::Random => {
            let mut res = if args.algorithm == Algorithm::Degree {
                degree_seeds(&g, k)?
            } else {
                random_seeds(&g, k, seed)?
            };
            let (ss, sampling) = snapshots(&g, r, seed, cache)?;
            res.fill_spread_trace(&ss);
            res.elapsed.sampling = sampling;
            res
        }
    };

    let timing = |d: Duration| args.timing.then(|| ms(d));
    let rows: Vec<ResultRow> = result
        .seeds
        .iter()
        .enumerate()
        .map(|(i, v)| ResultRow {
            algorithm: args.algorithm.name().to_string(),
            n: g.node_count(),
            edge_count: g.edge_count(),
            k,
            r,
            seed,
            iteration: i + 1,
            chosen_node: g.label(v),
            marginal_gain: result.marginal_gains[i],
            cumulative_spread: result.spread_trace[i],
            evaluations: result.evaluations,
            sampling_ms: timing(result.elapsed.sampling),
            selection_ms: timing(result.elapsed.selection),
        })
        .collect();

    match &args.out {
        Some(path) => {
            let mut out = create(path)?;
            write_csv(&rows, &mut out)?;
            out.flush()?;
        }
        None => write_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}

fn seeds_from_csv(path: &Path) -> Outcome<Vec<u64>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("cannot open {}", path.display()))?;
    let column = reader
        .headers()
        .with_context(|| format!("reading {}", path.display()))?
        .iter()
        .position(|h| h == "chosen_node")
        .ok_or_else(|| Failure::Runtime(anyhow!("{}: no chosen_node column", path.display())))?;
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("reading {}", path.display()))?;
        let label = record[column]
            .parse()
            .with_context(|| format!("{}: bad chosen_node '{}'", path.display(), &record[column]))?;
        labels.push(label);
    }
    Ok(labels)
}

pub fn evaluate(args: EvaluateArgs) -> Outcome {
    let (g, seed) = load_graph(&args.graph)?;
    let labels = match &args.from_csv {
        Some(path) => seeds_from_csv(path)?,
        None => args.seeds.clone(),
    };
    let mut seeds = SeedSet::new();
    for label in labels {
        match g.node_of(label) {
            Some(v) => {
                seeds.insert(v);
            }
            None => return usage(format!("node {label} is not in the graph")),
        }
    }
    let eval_seed = derive_seed(seed, Domain::Evaluation, 0);
    let ss = SnapshotSet::sample(&g, args.eval_r as usize, eval_seed, Storage::Full)?;
    let est = snapshot_spread(&ss, &seeds);
    println!("seeds {}", seeds.len());
    println!("eval_R {}", est.samples);
    println!("spread {}", format_real(est.value));
    println!("std_error {}", format_real(est.std_error));
    Ok(())
}

pub fn bench(args: BenchArgs) -> Outcome {
    let (g, seed) = load_graph(&args.graph)?;
    let (k, r) = (args.k as usize, args.r as usize);
    let (ss, sampling) = snapshots(&g, r, seed, None)?;
    let plain = static_greedy_over(&ss, k)?;
    let du = static_greedy_du_over(&ss, k)?;

    println!("algorithm,evaluations,sampling_ms,selection_ms,spread");
    for (name, res) in [("static", &plain), ("static-du", &du)] {
        println!(
            "{name},{},{},{},{}",
            res.evaluations,
            format_real(ms(sampling)),
            format_real(ms(res.elapsed.selection)),
            format_real(res.spread_trace.last().copied().unwrap_or(0.0)),
        );
    }
    let ratio = du.elapsed.selection.as_secs_f64() / plain.elapsed.selection.as_secs_f64().max(f64::MIN_POSITIVE);
    let identical = plain.seeds == du.seeds && plain.marginal_gains == du.marginal_gains;
    println!("# time_ratio {}", format_real(ratio));
    println!("# speedup {}", format_real(1.0 / ratio));
    println!("# identical {identical}");
    if !identical {
        return Err(Failure::Runtime(anyhow!("static-du diverged from static")));
    }
    Ok(())
}

pub fn audit(args: AuditArgs) -> Outcome {
    let (g, seed) = load_graph(&args.graph)?;
    let ss = SnapshotSet::sample(&g, args.r as usize, seed, Storage::Full)?;
    let report = check_submodularity(&ss, args.trials as usize, seed)?;
    println!("trials {}", report.trials);
    println!("R {}", ss.len());
    println!("submodularity_violations {}", report.violations.len());
    println!("monotonicity_violations {}", report.monotonicity_violations.len());
    if let Some((lo, hi)) = report.gain_range {
        println!("gain_range {} {}", format_real(lo), format_real(hi));
    }
    let show = |s: &SeedSet| s.iter().map(|v: NodeId| g.label(v).to_string()).collect::<Vec<_>>().join(" ");
    for v in report.violations.iter().take(10) {
        println!(
            "violation S=[{}] T=[{}] v={} gain_S={} gain_T={}",
            show(&v.s),
            show(&v.t),
            g.label(v.v),
            format_real(v.gain_s),
            format_real(v.gain_t)
        );
    }
    Ok(())
}
