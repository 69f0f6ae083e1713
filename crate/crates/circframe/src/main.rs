use std::collections::BTreeSet;
use std::ops::Range;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use circframe::bench::{run_bench, Algorithm, BenchParams, StdDev};
use circframe::io::{cut_lines, load_env, load_routes, read_file, save_env, save_routes, write_file, RouteDoc, RoutesDoc};
use circframe::render::{render_svg, RenderOptions};
use circframe_core::astar::{route_sequential, AstarParams, DEFAULT_RESOLUTION};
use circframe_core::env::{generate, Bounds, GenParams, StartPlacement};
use circframe_core::pipeline::route_circular_frame;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "circframe", version, about = "Non-crossing path routing in the punctured plane")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random environment.
    Gen {
        /// Number of nets.
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Bounds as x_min,x_max,y_min,y_max.
        #[arg(long, default_value = "-50,50,-50,50", value_parser = parse_bounds, allow_hyphen_values = true)]
        bounds: Bounds,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample the starts inside the bounds instead of pinning them to the right side.
        #[arg(long)]
        interior_starts: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Route every net of an environment.
    Route {
        #[arg(long, default_value = "cf")]
        alg: Algorithm,
        #[arg(long)]
        env: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Print the router's step trace to stderr.
        #[arg(long)]
        trace: bool,
        /// A* lattice spacing in plane units.
        #[arg(long, default_value_t = DEFAULT_RESOLUTION, value_parser = parse_positive)]
        resolution: f64,
        /// A* blocking distance added to each foreign terminal radius; defaults to the radius.
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Run both routers over a range of seeds.
    Bench {
        /// Seed range A..B (B excluded).
        #[arg(long, default_value = "0..5000", value_parser = parse_seeds)]
        seeds: Range<u64>,
        #[arg(long, value_delimiter = ',', default_value = "cf,astar")]
        algs: Vec<Algorithm>,
        /// Directory receiving records.jsonl and summary.csv.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads, 0 for all cores.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Use the sample standard deviation.
        #[arg(long)]
        sample_std: bool,
        /// A* lattice spacing in plane units.
        #[arg(long, default_value_t = DEFAULT_RESOLUTION, value_parser = parse_positive)]
        resolution: f64,
        /// A* blocking distance added to each foreign terminal radius; defaults to the radius.
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Draw an environment and its routes as SVG.
    Render {
        #[arg(long)]
        env: PathBuf,
        #[arg(long)]
        routes: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Draw the cut edges stored in the routes file.
        #[arg(long)]
        cuts: bool,
    },
}

fn parse_bounds(s: &str) -> Result<Bounds, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c, d] => Ok(Bounds::new(a, b, c, d)),
        _ => Err("expected x_min,x_max,y_min,y_max".into()),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be positive and finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_seeds(s: &str) -> Result<Range<u64>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a = a.trim().parse::<u64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<u64>().map_err(|e| e.to_string())?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..b)
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Gen {
            n,
            bounds,
            seed,
            interior_starts,
            out,
        } => {
            let params = GenParams {
                n,
                bounds,
                start_placement: if interior_starts {
                    StartPlacement::RandomInterior
                } else {
                    StartPlacement::RightBoundaryFixed
                },
                ..GenParams::default()
            };
            let env = generate(&params, seed)?;
            write_file(&out, &save_env(&env))?;
        }
        Cmd::Route {
            alg,
            env,
            out,
            trace,
            resolution,
            margin,
        } => {
            let env = load_env(&read_file(&env)?)?;
            let doc = match alg {
                Algorithm::Cf => {
                    let res = route_circular_frame(&env, trace).context("circular-frame routing failed")?;
                    if trace {
                        for ev in &res.routing.trace {
                            eprintln!("{ev}");
                        }
                    }
                    RoutesDoc {
                        algorithm: alg.name().into(),
                        seed: env.seed,
                        success: true,
                        routes: res.embedding.routes.iter().map(|r| RouteDoc::new(r.net, &r.polyline)).collect(),
                        cuts: cut_lines(&res.forest),
                    }
                }
                Algorithm::Astar => {
                    let res = route_sequential(&env, &AstarParams { resolution, margin });
                    if let Some(net) = res.failed_net {
                        eprintln!("net {net} has no free path");
                    }
                    RoutesDoc {
                        algorithm: alg.name().into(),
                        seed: env.seed,
                        success: res.success,
                        routes: res.polylines(&env).iter().map(|(net, p)| RouteDoc::new(*net, p)).collect(),
                        cuts: Vec::new(),
                    }
                }
            };
            write_file(&out, &save_routes(&doc))?;
            println!("{} routes, success {}", doc.routes.len(), doc.success);
        }
        Cmd::Bench {
            seeds,
            algs,
            report,
            jobs,
            sample_std,
            resolution,
            margin,
        } => {
            let params = BenchParams {
                jobs,
                astar: AstarParams { resolution, margin },
                std_dev: if sample_std { StdDev::Sample } else { StdDev::Population },
                ..BenchParams::default()
            };
            let algs: BTreeSet<Algorithm> = algs.into_iter().collect();
            if algs.is_empty() {
                bail!("no algorithm selected");
            }
            let rep = run_bench(&params, seeds, &algs);
            for f in &rep.generation_failures {
                eprintln!("seed {}: {}", f.seed, f.error);
            }
            let csv = rep.summary_csv();
            if let Some(dir) = report {
                std::fs::create_dir_all(&dir).with_context(|| format!("{}", dir.display()))?;
                write_file(&dir.join("records.jsonl"), &rep.records_jsonl())?;
                write_file(&dir.join("summary.csv"), &csv)?;
            }
            print!("{csv}");
        }
        Cmd::Render { env, routes, out, cuts } => {
            let env = load_env(&read_file(&env)?)?;
            let doc = match routes {
                Some(p) => Some(load_routes(&read_file(&p)?)?),
                None => None,
            };
            if cuts && doc.as_ref().is_none_or(|d| d.cuts.is_empty()) {
                eprintln!("no cut edges in the routes file");
            }
            let routes = doc.as_ref().map_or(&[][..], |d| &d.routes[..]);
            let cut_layer = doc.as_ref().filter(|_| cuts).map(|d| &d.cuts[..]);
            write_file(&out, &render_svg(&env, routes, cut_layer, &RenderOptions::default()))?;
        }
    }
    Ok(())
}
