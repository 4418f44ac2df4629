use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use flipchain::chain::{replica_rng, ChainState};
use flipchain::counting::{for_each_boundary, for_each_sphere, GenBound};
use flipchain::counting::{count_boundary, count_sphere};
use flipchain::cycles::{boundary_shield_cycle, find_separating_cycle, region_volume};
use flipchain::exact::{
    build_flip_graph, connectivity_and_diameter, mixing_exact, stationarity_report, DEFAULT_MAX_N,
};
use flipchain::experiments::{
    lowerbound_signal_config, scaling, text_hash, write_lowerbound_csv, ExperimentConfig,
};
use flipchain::exploration::{frontier_init, frontier_statistics, frontier_step};
use flipchain::map::{read_map, write_map};
use flipchain::sampling::{glued_initial, sample_boundary, sample_sphere};
use flipchain::{Error, Triangulation};

#[derive(Parser)]
#[command(name = "flipchain", version, about = "Edge flips on random planar triangulations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    replicas: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Number of rooted triangulations (of the sphere, or with perimeter --p).
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Canonical codes of every triangulation in a class, one per line.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A uniform sample written as a TRI1 map file.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<usize>,
        /// Two uniform halves glued along a loop.
        #[arg(long)]
        glued: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Flip chain step records as CSV.
    Chain {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        steps: u64,
        #[arg(long, value_enum, default_value_t = Start::Glued)]
        start: Start,
        /// Start from this map instead (all replicas).
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Frontier statistics of chains started from the glued map.
    Frontier {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        steps: u64,
        /// CSV of arrivals `replica,j,tau_j,P_j,V_j`.
        #[arg(long)]
        arrivals: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Short separating cycle (or boundary shield with --shield) as JSON.
    Cycles {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Sample a uniform sphere of this size instead of reading a map.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        len_max: usize,
        /// Defaults to ceil(n/4).
        #[arg(long)]
        min_side: Option<usize>,
        #[arg(long)]
        shield: bool,
        #[arg(long)]
        vol_max: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact analysis of the flip graph for small n, as JSON.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Report::Mixing)]
        report: Report,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 500)]
        horizon: usize,
        /// Allows n = 6.
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separating-cycle frequencies after k_n flips against uniform controls.
    LowerboundSignal {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Summary as JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Frontier and peeling exponent fits across sizes, as JSON.
    Scaling {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Comma-separated sizes.
        #[arg(long)]
        sizes: Option<String>,
    },
}

#[derive(Args, Clone)]
struct ExperimentArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Number of flips as an expression in n.
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    ell: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Glued,
    Uniform,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Report {
    Stationarity,
    Mixing,
}

/// Failure with its exit code: 2 for bad input, 3 for a broken invariant.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(2, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(2, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn internal(msg: impl Into<String>) -> Failure {
    Failure(3, msg.into())
}

type Res<T = ()> = std::result::Result<T, Failure>;

fn open_out(path: &Option<PathBuf>) -> Res<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn load_map(path: &Path) -> Res<Triangulation> {
    Ok(read_map(BufReader::new(File::open(path)?))?)
}

fn check(t: &Triangulation) -> Res {
    t.validate()
        .map_err(|v| internal(format!("invalid map produced: {v:?}")))
}

/// Preamble naming the hash of the effective parameters.
fn preamble(params: &str, seed: u64) -> String {
    format!("# config={} seed={seed}", text_hash(params))
}

fn write_json(out: &Option<PathBuf>, v: &serde_json::Value) -> Res {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| internal(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn experiment_config(a: &ExperimentArgs) -> Res<ExperimentConfig> {
    let mut c = match &a.config {
        Some(p) => ExperimentConfig::parse(&std::fs::read_to_string(p)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(n) = a.n {
        c.n = n;
    }
    if let Some(s) = &a.steps {
        c.set("schedule", s)?;
    }
    if let Some(s) = &a.ell {
        c.set("ell", s)?;
    }
    if let Some(s) = a.seed {
        c.seed = s;
    }
    if let Some(r) = a.replicas {
        c.replicas = r;
    }
    Ok(c)
}

fn run(cli: Cli) -> Res {
    match cli.cmd {
        Cmd::Count { n, p } => {
            let c = match p {
                None => count_sphere(n),
                Some(0) => return Err(usage("perimeter must be at least 1")),
                Some(p) => count_boundary(n, p),
            };
            println!("{c}");
        }
        Cmd::Gen { n, p, out } => {
            let mut w = open_out(&out)?;
            let mut codes = Vec::new();
            let bound = GenBound::default();
            match p {
                None => for_each_sphere(n, bound, |t| codes.push(t.canonical_code()))?,
                Some(p) => for_each_boundary(n, p, bound, |t, _| codes.push(t.canonical_code()))?,
            }
            codes.sort();
            codes.dedup();
            for c in codes {
                writeln!(w, "{c}")?;
            }
            w.flush()?;
        }
        Cmd::Sample { n, p, glued, common } => {
            if common.replicas != 1 {
                return Err(usage("sample writes a single map; use --replicas 1"));
            }
            let mut rng = replica_rng(common.seed, 0);
            let t = match (glued, p) {
                (true, None) => glued_initial(n, &mut rng)?.map,
                (true, Some(_)) => return Err(usage("--glued builds a sphere; drop --p")),
                (false, None) => sample_sphere(n, &mut rng)?,
                (false, Some(p)) => sample_boundary(n, p, &mut rng)?,
            };
            check(&t)?;
            let mut w = open_out(&common.out)?;
            write_map(&t, &mut w)?;
            w.flush()?;
        }
        Cmd::Chain {
            n,
            steps,
            start,
            input,
            common,
        } => {
            let fixed = input.as_deref().map(load_map).transpose()?;
            if let Some(t) = &fixed {
                if !t.is_sphere() {
                    return Err(Error::NotSphere.into());
                }
            }
            let n = match (&fixed, n) {
                (Some(t), _) => t.num_vertices(),
                (None, Some(n)) => n,
                (None, None) => return Err(usage("give --n or --input")),
            };
            let runs = (0..common.replicas)
                .into_par_iter()
                .map(|i| -> Res<_> {
                    let mut rng = replica_rng(common.seed, i as u64);
                    let t0 = match (&fixed, start) {
                        (Some(t), _) => t.clone(),
                        (None, Start::Glued) => glued_initial(n, &mut rng)?.map,
                        (None, Start::Uniform) => sample_sphere(n, &mut rng)?,
                    };
                    let mut s = ChainState::new(t0, rng);
                    let recs: Vec<_> = (0..steps).map(|_| s.step()).collect();
                    check(&s.map)?;
                    Ok(recs)
                })
                .collect::<Res<Vec<_>>>()?;
            let params = format!(
                "chain n={n} steps={steps} start={} input={:?} replicas={}",
                if matches!(start, Start::Glued) { "glued" } else { "uniform" },
                input,
                common.replicas
            );
            let mut w = open_out(&common.out)?;
            writeln!(w, "{}", preamble(&params, common.seed))?;
            writeln!(w, "replica,k,edge_id,identity_flag")?;
            for (i, recs) in runs.iter().enumerate() {
                for r in recs {
                    writeln!(w, "{i},{},{},{}", r.k, r.edge, u8::from(r.identity))?;
                }
            }
            w.flush()?;
        }
        Cmd::Frontier {
            n,
            steps,
            arrivals,
            common,
        } => {
            let runs = (0..common.replicas)
                .into_par_iter()
                .map(|i| -> Res<_> {
                    let mut rng = replica_rng(common.seed, i as u64);
                    let g = glued_initial(n, &mut rng)?;
                    let mut s = frontier_init(&g);
                    let init = (s.ptilde(), s.vtilde());
                    let recs: Vec<_> = (0..steps).map(|_| frontier_step(&mut s, &mut rng)).collect();
                    check(s.map())?;
                    Ok((init, recs))
                })
                .collect::<Res<Vec<_>>>()?;
            let params = format!("frontier n={n} steps={steps} replicas={}", common.replicas);
            let pre = preamble(&params, common.seed);
            let mut w = open_out(&common.out)?;
            writeln!(w, "{pre}")?;
            writeln!(w, "replica,k,Ptilde,Vtilde,event")?;
            for (i, (init, recs)) in runs.iter().enumerate() {
                writeln!(w, "{i},0,{},{},start", init.0, init.1)?;
                for r in recs {
                    writeln!(w, "{i},{},{},{},{}", r.k + 1, r.ptilde, r.vtilde, r.event.as_str())?;
                }
            }
            w.flush()?;
            if let Some(path) = arrivals {
                let mut w = open_out(&Some(path))?;
                writeln!(w, "{pre}")?;
                writeln!(w, "replica,j,tau_j,P_j,V_j")?;
                for (i, (init, recs)) in runs.iter().enumerate() {
                    for (j, tau, p, v) in frontier_statistics(*init, recs).arrivals {
                        writeln!(w, "{i},{j},{tau},{p},{v}")?;
                    }
                }
                w.flush()?;
            }
        }
        Cmd::Cycles {
            input,
            n,
            len_max,
            min_side,
            shield,
            vol_max,
            common,
        } => {
            if len_max == 0 {
                return Err(usage("--len-max must be at least 1"));
            }
            let t = match (&input, n) {
                (Some(p), _) => load_map(p)?,
                (None, Some(n)) => sample_sphere(n, &mut replica_rng(common.seed, 0))?,
                (None, None) => return Err(usage("give --input or --n")),
            };
            let nv = t.num_vertices();
            let convention = "side volumes exclude the cycle's vertices";
            let v = if shield {
                let vol_max = vol_max.ok_or_else(|| usage("--shield needs --vol-max"))?;
                let w = boundary_shield_cycle(&t, len_max, vol_max)?;
                let region = w.as_ref().map(|w| region_volume(&t, &w.darts)).transpose()?;
                json!({"n": nv, "len_max": len_max, "vol_max": vol_max, "found": w.is_some(),
                       "region_volume": region, "witness": w, "volume_convention": convention})
            } else {
                if !t.is_sphere() {
                    return Err(Error::NotSphere.into());
                }
                let min_side = min_side.unwrap_or(nv.div_ceil(4));
                let w = find_separating_cycle(&t, len_max, min_side);
                json!({"n": nv, "len_max": len_max, "min_side": min_side, "found": w.is_some(),
                       "witness": w, "volume_convention": convention})
            };
            write_json(&common.out, &v)?;
        }
        Cmd::Exact {
            n,
            report,
            eps,
            horizon,
            allow_large,
            out,
        } => {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(usage("--eps must lie in (0, 1)"));
            }
            let max_n = if allow_large { 6 } else { DEFAULT_MAX_N };
            if n > DEFAULT_MAX_N && allow_large {
                let states = count_sphere(n);
                eprintln!(
                    "building {states} states; dense analysis needs about {} MB",
                    &states * &states * 8u32 / 1_000_000u32
                );
            }
            let g = build_flip_graph(n, max_n)?;
            let st = stationarity_report(&g);
            let (connected, diameter) = connectivity_and_diameter(&g);
            let mut v = json!({
                "n": n,
                "states": g.len(),
                "connected": connected,
                "diameter": diameter,
                "stationarity": st,
            });
            if report == Report::Mixing {
                let m = mixing_exact(&g, eps, horizon);
                v["spectral_gap"] = json!(m.spectral_gap);
                v["absolute_spectral_gap"] = json!(m.absolute_spectral_gap);
                v["eps"] = json!(eps);
                v["t_mix_quarter"] = json!(m.t_mix);
                v["t_mix_eigen"] = json!(m.t_mix_eigen);
                v["tv_curve"] = json!(m.tv_curve);
            }
            write_json(&out, &v)?;
            if !st.all_pass() || !connected {
                return Err(internal("flip graph failed an exact check"));
            }
        }
        Cmd::LowerboundSignal { exp, summary } => {
            let cfg = experiment_config(&exp)?;
            if cfg.replicas == 0 {
                return Err(usage("replicas must be positive"));
            }
            let r = lowerbound_signal_config(&cfg)?;
            let mut w = open_out(&exp.out)?;
            write_lowerbound_csv(&cfg, &r, &mut w)?;
            w.flush()?;
            eprintln!(
                "n={} k={} ell={} min_side={} replicas={}\nchain {:.3}  uniform {:.3}  tv_lower {:.3}",
                r.n, r.steps, r.ell, r.min_side, r.replicas, r.freq_chain, r.freq_uniform, r.tv_lower
            );
            if let Some(p) = summary {
                let mut v = json!(r);
                v.as_object_mut().unwrap().remove("outcomes");
                v["config_hash"] = json!(cfg.hash());
                v["seed"] = json!(cfg.seed);
                write_json(&Some(p), &v)?;
            }
        }
        Cmd::Scaling { exp, sizes } => {
            let mut cfg = experiment_config(&exp)?;
            if let Some(s) = sizes {
                cfg.set("sizes", &s)?;
            }
            if cfg.sizes.is_empty() {
                return Err(usage("--sizes must list at least one n"));
            }
            let r = scaling(&cfg)?;
            let mut v = json!(r);
            v["seed"] = json!(cfg.seed);
            write_json(&exp.out, &v)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure(code, msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
        Err(_) => ExitCode::from(3),
    }
}
