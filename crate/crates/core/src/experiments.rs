//! Seeded, replica-parallel experiments and their configuration.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::chain::replica_rng;
use crate::cycles::find_separating_cycle;
use crate::error::{Error, Result};
use crate::exploration::{frontier_init, frontier_step, peel_explore, LayerPeeling};
use crate::sampling::{glued_initial, sample_sphere};
use crate::stats::{log_log_fit, LinearFit};

/// An expression in `n` such as `n^(5/4)/log(n)` or `floor(n^(1/4))`, floored
/// to an integer when evaluated.
#[derive(Clone, Debug)]
pub struct Schedule {
    text: String,
    expr: meval::Expr,
}

impl Schedule {
    pub fn parse(text: &str) -> Result<Self> {
        let expr = meval::Expr::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad expression {text:?}: {e}")))?;
        let s = Schedule {
            text: text.trim().to_string(),
            expr,
        };
        // Rejects unknown variables and functions up front.
        s.raw(16.0)?;
        Ok(s)
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    fn raw(&self, n: f64) -> Result<f64> {
        let mut ctx = meval::Context::new();
        ctx.func("log", f64::ln);
        self.expr
            .eval_with_context((("n", n), ctx))
            .map_err(|e| Error::InvalidArgument(format!("cannot evaluate {:?}: {e}", self.text)))
    }

    /// The floored value at `n`; negative or non-finite values are errors.
    pub fn eval(&self, n: usize) -> Result<u64> {
        let v = self.raw(n as f64)?;
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{:?} evaluates to {v} at n = {n}",
                self.text
            )));
        }
        // Absorbs rounding in values such as 10000^(1/4).
        Ok((v + 1e-9).floor() as u64)
    }

    pub fn eval_positive(&self, n: usize) -> Result<u64> {
        match self.eval(n)? {
            0 => Err(Error::InvalidArgument(format!(
                "{:?} evaluates to 0 at n = {n}",
                self.text
            ))),
            v => Ok(v),
        }
    }
}

impl PartialEq for Schedule {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn text_hash(text: &str) -> String {
    hex::encode(&Sha256::digest(text.as_bytes())[..8])
}

/// Flat `key = value` configuration shared by the experiment commands.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Sizes for scaling runs.
    pub sizes: Vec<usize>,
    /// Number of flips `k_n`.
    pub schedule: Schedule,
    /// Cycle length bound.
    pub ell: Schedule,
    /// Least volume on each side of a separating cycle.
    pub min_side: Schedule,
    pub replicas: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 10_000,
            sizes: vec![1_000, 10_000],
            schedule: Schedule::parse("n").unwrap(),
            ell: Schedule::parse("floor(n^(1/4))").unwrap(),
            min_side: Schedule::parse("ceil(n/4)").unwrap(),
            replicas: 50,
            seed: 1,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidArgument(format!("bad value for {key}: {v:?}")))
}

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "n" => self.n = parse_num("n", v)?,
            "sizes" => {
                self.sizes = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_num("sizes", s))
                    .collect::<Result<_>>()?
            }
            "schedule" => self.schedule = Schedule::parse(v)?,
            "ell" => self.ell = Schedule::parse(v)?,
            "min_side" => self.min_side = Schedule::parse(v)?,
            "replicas" => self.replicas = parse_num("replicas", v)?,
            "seed" => self.seed = parse_num("seed", v)?,
            k => return Err(Error::InvalidArgument(format!("unknown config key {k:?}"))),
        }
        Ok(())
    }

    /// Parses the file format written by `Display`: one `key = value` per line,
    /// `#` comments and blank lines ignored, unset keys left at their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = ExperimentConfig::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key = value, got {line:?}")))?;
            c.set(k, v)?;
        }
        Ok(c)
    }

    /// Hash of the canonical text form.
    pub fn hash(&self) -> String {
        text_hash(&self.to_string())
    }

    /// The line that opens every emitted CSV file.
    pub fn csv_preamble(&self) -> String {
        format!("# config={} seed={}", self.hash(), self.seed)
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "sizes = {}", sizes.join(","))?;
        writeln!(f, "schedule = {}", self.schedule.as_str())?;
        writeln!(f, "ell = {}", self.ell.as_str())?;
        writeln!(f, "min_side = {}", self.min_side.as_str())?;
        writeln!(f, "replicas = {}", self.replicas)?;
        writeln!(f, "seed = {}", self.seed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ArmOutcome {
    pub replica: usize,
    pub arm: &'static str,
    pub found: bool,
    pub length: Option<usize>,
    pub side_a: Option<usize>,
    pub side_b: Option<usize>,
    /// Largest frontier length along the chain run (chain arm only).
    pub max_ptilde: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub steps: u64,
    pub ell: usize,
    pub min_side: usize,
    pub replicas: usize,
    pub freq_chain: f64,
    pub freq_uniform: f64,
    /// `freq_chain − freq_uniform`, a lower bound on the total variation
    /// distance between the chain at time `steps` and the uniform law.
    pub tv_lower: f64,
    pub outcomes: Vec<ArmOutcome>,
}

fn outcome(replica: usize, arm: &'static str, w: Option<crate::cycles::CycleWitness>, max_ptilde: Option<usize>) -> ArmOutcome {
    ArmOutcome {
        replica,
        arm,
        found: w.is_some(),
        length: w.as_ref().map(|w| w.length),
        side_a: w.as_ref().map(|w| w.side_a),
        side_b: w.as_ref().map(|w| w.side_b),
        max_ptilde,
    }
}

/// Runs `steps` flips from the glued start and looks for a cycle of length at
/// most `ell` with `min_side` vertices on each side; does the same on
/// independent uniform samples. Replica `i` of the chain arm uses stream `2i`
/// of `seed`, the uniform arm stream `2i + 1`.
pub fn lowerbound_signal(
    n: usize,
    steps: u64,
    ell: usize,
    min_side: usize,
    replicas: usize,
    seed: u64,
) -> Result<LowerBoundReport> {
    if replicas == 0 || ell == 0 {
        return Err(Error::InvalidArgument("replicas and ell must be positive".into()));
    }
    let jobs: Vec<(usize, bool)> = (0..replicas).flat_map(|i| [(i, true), (i, false)]).collect();
    let outcomes = jobs
        .into_par_iter()
        .map(|(i, chain)| -> Result<ArmOutcome> {
            if chain {
                let mut rng = replica_rng(seed, 2 * i as u64);
                let g = glued_initial(n, &mut rng)?;
                let mut s = frontier_init(&g);
                let mut max_p = s.ptilde();
                for _ in 0..steps {
                    max_p = max_p.max(frontier_step(&mut s, &mut rng).ptilde);
                }
                let w = find_separating_cycle(s.map(), ell, min_side);
                Ok(outcome(i, "chain", w, Some(max_p)))
            } else {
                let mut rng = replica_rng(seed, 2 * i as u64 + 1);
                let t = sample_sphere(n, &mut rng)?;
                Ok(outcome(i, "uniform", find_separating_cycle(&t, ell, min_side), None))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let freq = |arm: &str| {
        outcomes.iter().filter(|o| o.arm == arm && o.found).count() as f64 / replicas as f64
    };
    let (fc, fu) = (freq("chain"), freq("uniform"));
    Ok(LowerBoundReport {
        n,
        steps,
        ell,
        min_side,
        replicas,
        freq_chain: fc,
        freq_uniform: fu,
        tv_lower: fc - fu,
        outcomes,
    })
}

/// Runs [`lowerbound_signal`] with the values of `cfg` at `cfg.n`.
pub fn lowerbound_signal_config(cfg: &ExperimentConfig) -> Result<LowerBoundReport> {
    let n = cfg.n;
    lowerbound_signal(
        n,
        cfg.schedule.eval(n)?,
        cfg.ell.eval_positive(n)? as usize,
        cfg.min_side.eval(n)? as usize,
        cfg.replicas,
        cfg.seed,
    )
}

pub fn write_lowerbound_csv<W: Write>(cfg: &ExperimentConfig, r: &LowerBoundReport, out: &mut W) -> Result<()> {
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    writeln!(out, "{}", cfg.csv_preamble())?;
    writeln!(out, "replica,arm,found,length,side_a,side_b,max_ptilde")?;
    for o in &r.outcomes {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            o.replica,
            o.arm,
            o.found,
            opt(o.length),
            opt(o.side_a),
            opt(o.side_b),
            opt(o.max_ptilde)
        )?;
    }
    Ok(())
}

/// About `points` integers spread evenly in log scale over `[lo, hi]`.
pub fn log_grid(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    let (a, b) = ((lo.max(1) as f64).ln(), (hi.max(1) as f64).ln());
    let mut g: Vec<usize> = (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1).max(1) as f64).exp().round() as usize)
        .collect();
    g.dedup();
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct FrontierScaling {
    pub n: usize,
    pub steps: u64,
    pub replicas: usize,
    /// Mean over replicas of the largest frontier length up to `steps`.
    pub max_ptilde_mean: f64,
    pub max_ptilde_over_sqrt_n: f64,
    /// Mean running maximum of the frontier length against the step count.
    pub ptilde_fit: LinearFit,
    /// Mean arrival time `τ_j` against `j`, over the arrivals every replica has.
    pub tau_fit: Option<LinearFit>,
    pub arrivals_used: usize,
}

/// Frontier trajectories of `steps` flips from the glued start.
pub fn frontier_scaling(n: usize, steps: u64, replicas: usize, seed: u64) -> Result<FrontierScaling> {
    if replicas == 0 || steps == 0 {
        return Err(Error::InvalidArgument("replicas and steps must be positive".into()));
    }
    let grid: Vec<usize> = log_grid(1, steps as usize, 30);
    let runs = (0..replicas)
        .into_par_iter()
        .map(|i| -> Result<(Vec<f64>, Vec<u64>)> {
            let mut rng = replica_rng(seed, i as u64);
            let g = glued_initial(n, &mut rng)?;
            let mut s = frontier_init(&g);
            let mut running = s.ptilde();
            let mut at = Vec::with_capacity(grid.len());
            let mut next = 0;
            for k in 1..=steps as usize {
                running = running.max(frontier_step(&mut s, &mut rng).ptilde);
                while next < grid.len() && grid[next] == k {
                    at.push(running as f64);
                    next += 1;
                }
            }
            Ok((at, s.tau.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let r = replicas as f64;
    let mean_at: Vec<f64> = (0..grid.len())
        .map(|j| runs.iter().map(|x| x.0[j]).sum::<f64>() / r)
        .collect();
    let xs: Vec<f64> = grid.iter().map(|&k| k as f64).collect();
    let max_mean = *mean_at.last().unwrap();
    let common = runs.iter().map(|x| x.1.len()).min().unwrap();
    let tau_fit = (common >= 4).then(|| {
        let js: Vec<f64> = (1..common).map(|j| j as f64).collect();
        let ts: Vec<f64> = (1..common)
            .map(|j| runs.iter().map(|x| x.1[j] as f64).sum::<f64>() / r)
            .collect();
        log_log_fit(&js, &ts)
    });
    Ok(FrontierScaling {
        n,
        steps,
        replicas,
        max_ptilde_mean: max_mean,
        max_ptilde_over_sqrt_n: max_mean / (n as f64).sqrt(),
        ptilde_fit: log_log_fit(&xs, &mean_at),
        tau_fit,
        arrivals_used: common.saturating_sub(1),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PeelingScaling {
    pub n: usize,
    pub runs: usize,
    pub steps: usize,
    /// Log-log fit of the mean running maximum perimeter against the step.
    pub fit: LinearFit,
    pub curve: Vec<(usize, f64)>,
}

/// Layer peeling of uniform spheres (through the root transform) for
/// `⌊n^{3/4}⌋` steps; the fit uses steps from 10 on.
pub fn peeling_scaling(n: usize, runs: usize, seed: u64) -> Result<PeelingScaling> {
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be positive".into()));
    }
    let steps = ((n as f64).powf(0.75) + 1e-9).floor() as usize;
    let grid = log_grid(10.min(steps), steps, 30);
    let curves = (0..runs)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let mut rng = replica_rng(seed, i as u64);
            let t = sample_sphere(n, &mut rng)?.root_transform()?;
            let e = peel_explore(&t, &mut LayerPeeling::new(&t), steps)?;
            let max = e.max_perimeter();
            // A halted exploration keeps its final running maximum.
            Ok(grid
                .iter()
                .map(|&j| max[j.min(max.len() - 1)] as f64)
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let mean: Vec<f64> = (0..grid.len())
        .map(|j| curves.iter().map(|c| c[j]).sum::<f64>() / runs as f64)
        .collect();
    let xs: Vec<f64> = grid.iter().map(|&j| j as f64).collect();
    Ok(PeelingScaling {
        n,
        runs,
        steps,
        fit: log_log_fit(&xs, &mean),
        curve: grid.into_iter().zip(mean).collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub config_hash: String,
    pub frontier: Vec<FrontierScaling>,
    pub peeling: Vec<PeelingScaling>,
    /// Whether `max P̃ / √n` decreases along the sizes.
    pub normalized_max_decreasing: bool,
}

/// Frontier and peeling fits for each size in `cfg.sizes`.
pub fn scaling(cfg: &ExperimentConfig) -> Result<ScalingReport> {
    if cfg.sizes.is_empty() {
        return Err(Error::InvalidArgument("sizes must list at least one n".into()));
    }
    let mut frontier = Vec::new();
    let mut peeling = Vec::new();
    for &n in &cfg.sizes {
        frontier.push(frontier_scaling(n, cfg.schedule.eval_positive(n)?, cfg.replicas, cfg.seed)?);
        peeling.push(peeling_scaling(n, cfg.replicas, cfg.seed)?);
    }
    let normalized_max_decreasing = frontier
        .windows(2)
        .all(|w| w[1].max_ptilde_over_sqrt_n < w[0].max_ptilde_over_sqrt_n);
    Ok(ScalingReport {
        config_hash: cfg.hash(),
        frontier,
        peeling,
        normalized_max_decreasing,
    })
}
