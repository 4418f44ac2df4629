//! Exact analysis of the flip chain on small state spaces.

mod normalize;

use std::collections::{HashMap, VecDeque};

use nalgebra::{DMatrix, SymmetricEigen};
use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::flip_edge;
use crate::counting::{for_each_sphere, GenBound};
use crate::error::{Error, Result};
use crate::map::{CanonicalCode, Triangulation};

pub use normalize::{is_type3, minimal_loop, normalize_to_type3, Normalization};

/// All rooted triangulations of the sphere with `n` vertices, with the number
/// of edges of each state flipping to each other state. Transition
/// probabilities are `count / denom` with `denom = 3n − 6`.
#[derive(Clone, Debug)]
pub struct FlipGraph {
    pub n: usize,
    pub states: Vec<CanonicalCode>,
    pub maps: Vec<Triangulation>,
    /// `rows[s]`: `(target, count)` sorted by target.
    pub rows: Vec<Vec<(usize, u32)>>,
    pub denom: u32,
}

/// Largest `n` built without opting in; `n = 6` has 4096 states.
pub const DEFAULT_MAX_N: usize = 5;

pub fn build_flip_graph(n: usize, max_n: usize) -> Result<FlipGraph> {
    if n > max_n {
        return Err(Error::BoundExceeded(format!("flip graph for n = {n} exceeds {max_n}")));
    }
    let mut maps = Vec::new();
    for_each_sphere(
        n,
        GenBound {
            max_sphere: max_n,
            ..GenBound::default()
        },
        |t| maps.push(t),
    )?;
    let mut states: Vec<(CanonicalCode, Triangulation)> =
        maps.into_iter().map(|t| (t.canonical_code(), t)).collect();
    states.sort_by(|a, b| a.0.cmp(&b.0));
    states.dedup_by(|a, b| a.0 == b.0);
    let index: HashMap<&CanonicalCode, usize> =
        states.iter().enumerate().map(|(i, (c, _))| (c, i)).collect();
    let rows = states
        .par_iter()
        .map(|(_, t)| {
            let mut counts: HashMap<usize, u32> = HashMap::new();
            for e in 0..t.num_edges() {
                let mut u = t.clone();
                flip_edge(&mut u, e);
                *counts.entry(index[&u.canonical_code()]).or_default() += 1;
            }
            let mut row: Vec<(usize, u32)> = counts.into_iter().collect();
            row.sort_unstable();
            row
        })
        .collect();
    let (states, maps) = states.into_iter().unzip();
    Ok(FlipGraph {
        n,
        states,
        maps,
        rows,
        denom: (3 * n - 6) as u32,
    })
}

impl FlipGraph {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn count(&self, s: usize, t: usize) -> u32 {
        self.rows[s]
            .binary_search_by_key(&t, |&(x, _)| x)
            .map(|i| self.rows[s][i].1)
            .unwrap_or(0)
    }

    pub fn probability(&self, s: usize, t: usize) -> Ratio<u64> {
        Ratio::new(self.count(s, t) as u64, self.denom as u64)
    }

    /// Dense transition matrix in floating point.
    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut p = DMatrix::zeros(n, n);
        for (s, row) in self.rows.iter().enumerate() {
            for &(t, c) in row {
                p[(s, t)] = c as f64 / self.denom as f64;
            }
        }
        p
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StationarityReport {
    pub symmetric: bool,
    pub rows_sum_to_one: bool,
    pub doubly_stochastic: bool,
    pub uniform_stationary: bool,
    pub irreducible: bool,
    pub aperiodic: bool,
    pub period: u64,
    pub states_with_self_loop: usize,
}

impl StationarityReport {
    pub fn all_pass(&self) -> bool {
        self.symmetric
            && self.rows_sum_to_one
            && self.doubly_stochastic
            && self.uniform_stationary
            && self.irreducible
            && self.aperiodic
    }
}

fn reach(n: usize, adj: impl Fn(usize) -> Vec<usize>) -> Vec<Option<u64>> {
    let mut level = vec![None; n];
    if n == 0 {
        return level;
    }
    level[0] = Some(0);
    let mut queue = VecDeque::from([0]);
    while let Some(s) = queue.pop_front() {
        for t in adj(s) {
            if level[t].is_none() {
                level[t] = Some(level[s].unwrap() + 1);
                queue.push_back(t);
            }
        }
    }
    level
}

/// Exact checks of stationarity, reversibility, irreducibility and
/// aperiodicity.
pub fn stationarity_report(g: &FlipGraph) -> StationarityReport {
    let n = g.len();
    let one = Ratio::from_integer(1u64);
    let symmetric = (0..n).all(|s| g.rows[s].iter().all(|&(t, c)| g.count(t, s) == c));
    let rows_sum_to_one = g.rows.iter().all(|row| {
        row.iter()
            .fold(Ratio::from_integer(0u64), |acc, &(_, c)| acc + Ratio::new(c as u64, g.denom as u64))
            == one
    });
    let mut col = vec![Ratio::from_integer(0u64); n];
    for row in &g.rows {
        for &(t, c) in row {
            col[t] += Ratio::new(c as u64, g.denom as u64);
        }
    }
    let doubly_stochastic = col.iter().all(|c| *c == one);
    let uniform = Ratio::new(1u64, n as u64);
    let uniform_stationary = col.iter().all(|c| uniform * c == uniform);

    let forward = reach(n, |s| g.rows[s].iter().map(|&(t, _)| t).collect());
    let mut back_adj = vec![Vec::new(); n];
    for (s, row) in g.rows.iter().enumerate() {
        for &(t, _) in row {
            back_adj[t].push(s);
        }
    }
    let backward = reach(n, |s| back_adj[s].clone());
    let irreducible = forward.iter().all(Option::is_some) && backward.iter().all(Option::is_some);
    let mut period = 0u64;
    for (s, row) in g.rows.iter().enumerate() {
        for &(t, _) in row {
            if let (Some(a), Some(b)) = (forward[s], forward[t]) {
                period = period.gcd(&(a + 1).abs_diff(b));
            }
        }
    }
    let states_with_self_loop = (0..n).filter(|&s| g.count(s, s) > 0).count();
    StationarityReport {
        symmetric,
        rows_sum_to_one,
        doubly_stochastic,
        uniform_stationary,
        irreducible,
        aperiodic: irreducible && period == 1,
        period,
        states_with_self_loop,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub eps: f64,
    /// Least `k` with worst-start total variation at most `eps`.
    pub t_mix: Option<usize>,
    /// The same, from the eigendecomposition.
    pub t_mix_eigen: Option<usize>,
    /// `1 − λ₂`.
    pub spectral_gap: f64,
    /// `1 − max(|λ₂|, |λ_min|)`.
    pub absolute_spectral_gap: f64,
    /// Worst-start total variation for `k = 0, 1, …`.
    pub tv_curve: Vec<f64>,
    /// `tv_curves[s][k]` from start `s`.
    pub tv_curves: Vec<Vec<f64>>,
    /// Largest difference between the two computations of the curves.
    pub eigen_deviation: f64,
    /// Largest entry of `P U − U Λ`.
    pub eigen_residual: f64,
}

fn tv_rows(pk: &DMatrix<f64>) -> Vec<f64> {
    let n = pk.nrows();
    let u = 1.0 / n as f64;
    (0..n)
        .map(|s| 0.5 * (0..n).map(|t| (pk[(s, t)] - u).abs()).sum::<f64>())
        .collect()
}

/// Total-variation curves by exact matrix powers (in floating point) up to the
/// mixing time or `horizon` steps, checked against the eigendecomposition.
pub fn mixing_exact(g: &FlipGraph, eps: f64, horizon: usize) -> MixingReport {
    let n = g.len();
    let p = g.dense();
    let mut pk = DMatrix::<f64>::identity(n, n);
    let mut curves: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut t_mix = None;
    for k in 0..=horizon {
        let tv = tv_rows(&pk);
        let worst = tv.iter().cloned().fold(0.0, f64::max);
        for (c, x) in curves.iter_mut().zip(tv) {
            c.push(x);
        }
        if worst <= eps {
            t_mix = Some(k);
            break;
        }
        let mut next = DMatrix::zeros(n, n);
        for s in 0..n {
            for (u, row) in g.rows.iter().enumerate() {
                let a = pk[(s, u)];
                if a == 0.0 {
                    continue;
                }
                for &(t, c) in row {
                    next[(s, t)] += a * c as f64 / g.denom as f64;
                }
            }
        }
        pk = next;
    }
    let steps = curves[0].len();

    let eig = SymmetricEigen::try_new(p.clone(), 1e-20, 0).expect("symmetric eigendecomposition");
    let lambda = &eig.eigenvalues;
    let vecs = &eig.eigenvectors;
    let residual = (&p * vecs - vecs * DMatrix::from_diagonal(lambda)).amax();
    let mut sorted: Vec<f64> = lambda.iter().cloned().collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let l2 = sorted.get(1).cloned().unwrap_or(0.0);
    let lmin = *sorted.last().unwrap();
    let mut deviation = 0.0f64;
    let mut t_mix_eigen = None;
    for k in 0..steps.max(t_mix.map_or(0, |t| t + 1)) {
        let d = DMatrix::from_diagonal(&lambda.map(|l| l.powi(k as i32)));
        let pk = vecs * d * vecs.transpose();
        let tv = tv_rows(&pk);
        for (s, x) in tv.iter().enumerate() {
            if k < curves[s].len() {
                deviation = deviation.max((x - curves[s][k]).abs());
            }
        }
        if t_mix_eigen.is_none() && tv.iter().cloned().fold(0.0, f64::max) <= eps {
            t_mix_eigen = Some(k);
        }
    }
    let tv_curve = (0..steps)
        .map(|k| curves.iter().map(|c| c[k]).fold(0.0, f64::max))
        .collect();
    MixingReport {
        eps,
        t_mix,
        t_mix_eigen,
        spectral_gap: 1.0 - l2,
        absolute_spectral_gap: 1.0 - l2.abs().max(lmin.abs()),
        tv_curve,
        tv_curves: curves,
        eigen_deviation: deviation,
        eigen_residual: residual,
    }
}

/// Connectedness and diameter of the undirected flip graph (self-loops
/// ignored); the diameter is `None` when disconnected.
pub fn connectivity_and_diameter(g: &FlipGraph) -> (bool, Option<usize>) {
    let n = g.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            let mut v: Vec<usize> = g.rows[s].iter().map(|&(t, _)| t).filter(|&t| t != s).collect();
            for (u, row) in g.rows.iter().enumerate() {
                if u != s && row.binary_search_by_key(&s, |&(x, _)| x).is_ok() {
                    v.push(u);
                }
            }
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let ecc: Vec<Option<usize>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            let mut seen = 1;
            let mut far = 0;
            while let Some(u) = queue.pop_front() {
                for &t in &adj[u] {
                    if dist[t] == usize::MAX {
                        dist[t] = dist[u] + 1;
                        far = far.max(dist[t]);
                        seen += 1;
                        queue.push_back(t);
                    }
                }
            }
            (seen == n).then_some(far)
        })
        .collect();
    if ecc.iter().all(Option::is_some) {
        (true, ecc.into_iter().map(Option::unwrap).max())
    } else {
        (false, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_and_n4_exact() {
        for (n, size) in [(3, 4), (4, 32)] {
            let g = build_flip_graph(n, DEFAULT_MAX_N).unwrap();
            assert_eq!(g.len(), size);
            let r = stationarity_report(&g);
            assert!(r.all_pass(), "{r:?}");
            assert!(r.states_with_self_loop > 0 || n == 3);
            assert!(connectivity_and_diameter(&g).0);
        }
    }

    #[test]
    fn mixing_two_methods_agree() {
        let g = build_flip_graph(4, DEFAULT_MAX_N).unwrap();
        let m = mixing_exact(&g, 0.25, 10_000);
        assert!(m.t_mix.is_some());
        assert_eq!(m.t_mix, m.t_mix_eigen);
        assert!(m.eigen_deviation < 1e-9);
        assert!(m.eigen_residual < 1e-10, "{}", m.eigen_residual);
        assert!((m.tv_curve[0] - (1.0 - 1.0 / 32.0)).abs() < 1e-12);
        assert!(m.tv_curve.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(m.spectral_gap > 0.0);
    }

    #[test]
    fn isolated_state_detected() {
        let mut g = build_flip_graph(4, DEFAULT_MAX_N).unwrap();
        let s = 5;
        for row in g.rows.iter_mut() {
            row.retain(|&(t, _)| t != s);
        }
        g.rows[s] = vec![(s, g.denom)];
        assert_eq!(connectivity_and_diameter(&g), (false, None));
    }

    #[test]
    fn bound_enforced() {
        assert!(matches!(build_flip_graph(6, 5), Err(Error::BoundExceeded(_))));
    }
}
