//! Benchmark harness: generates environments, runs the routers with wall-clock
//! timing and aggregates the results.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::Range;
use std::str::FromStr;
use std::time::Instant;

use circframe_core::astar::{route_sequential, AstarParams};
use circframe_core::env::{generate, Environment, GenParams};
use circframe_core::pipeline::route_circular_frame;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::RouteDoc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Cf,
    Astar,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cf => "cf",
            Algorithm::Astar => "astar",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cf" => Ok(Algorithm::Cf),
            "astar" | "as" => Ok(Algorithm::Astar),
            _ => Err(format!("unknown algorithm `{s}` (expected cf or astar)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdDev {
    #[default]
    Population,
    Sample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchParams {
    pub gen: GenParams,
    pub astar: AstarParams,
    pub std_dev: StdDev,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
    /// Keep chords and polylines of every run in its record.
    pub keep_detail: bool,
    /// Seeds a worker takes at once. Within a batch every algorithm runs over
    /// all its environments before the next algorithm starts.
    pub batch: usize,
}

impl Default for BenchParams {
    fn default() -> Self {
        BenchParams {
            gen: GenParams::default(),
            astar: AstarParams::default(),
            std_dev: StdDev::Population,
            jobs: 1,
            keep_detail: false,
            batch: 16,
        }
    }
}

/// Chords as `[net, from node, to node]` and the realized polylines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDetail {
    pub chords: Vec<[usize; 3]>,
    pub routes: Vec<RouteDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub seed: u64,
    pub algorithm: Algorithm,
    pub success: bool,
    pub time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<RunDetail>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenFailure {
    pub seed: u64,
    pub error: String,
}

/// One summary row: `n` runs in scope, of which `n_success` succeeded; time
/// statistics are over the successful runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub algorithm: Algorithm,
    pub scope: String,
    pub n: usize,
    pub n_success: usize,
    pub mean_time_s: f64,
    pub std_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    /// Ordered by seed, then algorithm.
    pub records: Vec<Record>,
    pub generation_failures: Vec<GenFailure>,
    pub aggregates: Vec<Aggregate>,
}

fn run_one(alg: Algorithm, env: &Environment, params: &BenchParams) -> Record {
    let (success, time_s, detail) = match alg {
        Algorithm::Cf => {
            let t = Instant::now();
            let out = route_circular_frame(env, false);
            let time_s = t.elapsed().as_secs_f64();
            let detail = match &out {
                Ok(o) if params.keep_detail => Some(RunDetail {
                    chords: o.routing.frame.chords().iter().map(|c| [c.net, c.from, c.to]).collect(),
                    routes: o.embedding.routes.iter().map(|r| RouteDoc::new(r.net, &r.polyline)).collect(),
                }),
                _ => None,
            };
            (out.is_ok(), time_s, detail)
        }
        Algorithm::Astar => {
            let t = Instant::now();
            let out = route_sequential(env, &params.astar);
            let time_s = t.elapsed().as_secs_f64();
            let detail = params.keep_detail.then(|| RunDetail {
                chords: Vec::new(),
                routes: out.polylines(env).iter().map(|(net, p)| RouteDoc::new(*net, p)).collect(),
            });
            (out.success, time_s, detail)
        }
    };
    Record {
        seed: env.seed,
        algorithm: alg,
        success,
        time_s,
        detail,
    }
}

fn run_batch(seeds: &[u64], algs: &[Algorithm], params: &BenchParams) -> (Vec<Record>, Vec<GenFailure>) {
    let mut envs = Vec::with_capacity(seeds.len());
    let mut failures = Vec::new();
    for &seed in seeds {
        match generate(&params.gen, seed) {
            Ok(e) => envs.push(e),
            Err(e) => failures.push(GenFailure {
                seed,
                error: e.to_string(),
            }),
        }
    }
    let mut records = Vec::with_capacity(envs.len() * algs.len());
    for &alg in algs {
        for env in &envs {
            records.push(run_one(alg, env, params));
        }
    }
    records.sort_by_key(|r| (r.seed, r.algorithm));
    (records, failures)
}

/// Runs every selected algorithm on every seed.
pub fn run_bench(params: &BenchParams, seeds: Range<u64>, algorithms: &BTreeSet<Algorithm>) -> BenchReport {
    let algs: Vec<Algorithm> = algorithms.iter().copied().collect();
    let seeds: Vec<u64> = seeds.collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.jobs)
        .build()
        .expect("thread pool");
    let parts: Vec<(Vec<Record>, Vec<GenFailure>)> = pool.install(|| {
        seeds
            .par_chunks(params.batch.max(1))
            .map(|chunk| run_batch(chunk, &algs, params))
            .collect()
    });
    let mut records = Vec::new();
    let mut generation_failures = Vec::new();
    for (r, f) in parts {
        records.extend(r);
        generation_failures.extend(f);
    }
    let aggregates = aggregate(&records, params.std_dev);
    BenchReport {
        records,
        generation_failures,
        aggregates,
    }
}

/// Mean and standard deviation of `xs`; zero for an empty list, and zero
/// deviation for a single sample.
pub fn mean_std(xs: &[f64], kind: StdDev) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    let div = match kind {
        StdDev::Population => n,
        StdDev::Sample => n - 1.0,
    };
    let std = if div > 0.0 { (ss / div).sqrt() } else { 0.0 };
    (mean, std)
}

fn row<'a>(alg: Algorithm, scope: &str, runs: impl Iterator<Item = &'a Record>, kind: StdDev) -> Aggregate {
    let runs: Vec<&Record> = runs.collect();
    let times: Vec<f64> = runs.iter().filter(|r| r.success).map(|r| r.time_s).collect();
    let (mean_time_s, std_time_s) = mean_std(&times, kind);
    Aggregate {
        algorithm: alg,
        scope: scope.to_string(),
        n: runs.len(),
        n_success: times.len(),
        mean_time_s,
        std_time_s,
    }
}

/// Summary rows from a record stream: A* on its successes, the circular frame
/// on the seeds A* solved, and the circular frame on every seed. Rows whose
/// algorithm is absent are left out.
pub fn aggregate(records: &[Record], kind: StdDev) -> Vec<Aggregate> {
    let of = |alg: Algorithm| records.iter().filter(move |r| r.algorithm == alg);
    let solved: BTreeSet<u64> = of(Algorithm::Astar).filter(|r| r.success).map(|r| r.seed).collect();
    let has = |alg: Algorithm| of(alg).next().is_some();
    let mut out = Vec::new();
    if has(Algorithm::Astar) {
        out.push(row(Algorithm::Astar, "astar-success", of(Algorithm::Astar).filter(|r| r.success), kind));
    }
    if has(Algorithm::Astar) && has(Algorithm::Cf) {
        out.push(row(
            Algorithm::Cf,
            "astar-success",
            of(Algorithm::Cf).filter(|r| solved.contains(&r.seed)),
            kind,
        ));
    }
    if has(Algorithm::Cf) {
        out.push(row(Algorithm::Cf, "all", of(Algorithm::Cf), kind));
    }
    out
}

impl BenchReport {
    /// One JSON object per record.
    pub fn records_jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&serde_json::to_string(r).expect("record serializes"));
            s.push('\n');
        }
        s
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from("algorithm,scope,n,n_success,mean_time_s,std_time_s\n");
        for a in &self.aggregates {
            let _ = writeln!(
                s,
                "{},{},{},{},{:.9},{:.9}",
                a.algorithm.name(),
                a.scope,
                a.n,
                a.n_success,
                a.mean_time_s,
                a.std_time_s
            );
        }
        s
    }

    pub fn success_rate(&self, alg: Algorithm) -> f64 {
        let runs: Vec<&Record> = self.records.iter().filter(|r| r.algorithm == alg).collect();
        if runs.is_empty() {
            return 0.0;
        }
        runs.iter().filter(|r| r.success).count() as f64 / runs.len() as f64
    }
}
