use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::map::{Dart, Triangulation};

use super::{distances_from_root, Explorer, Reveal};

/// Chooses which hole edge to peel next. Implementations are told about every
/// dart that joins the hole and may keep stale darts, which
/// [`Explorer::is_hole_dart`] filters out.
pub trait PeelingAlgorithm {
    fn added(&mut self, ex: &Explorer, darts: &[Dart]);
    /// A current hole dart, or None when the hole is empty.
    fn next(&mut self, ex: &Explorer) -> Option<Dart>;
}

/// Peels the oldest edge of the hole.
#[derive(Default)]
pub struct FifoPeeling {
    queue: VecDeque<Dart>,
}

impl PeelingAlgorithm for FifoPeeling {
    fn added(&mut self, _: &Explorer, darts: &[Dart]) {
        self.queue.extend(darts);
    }

    fn next(&mut self, ex: &Explorer) -> Option<Dart> {
        while let Some(d) = self.queue.pop_front() {
            if ex.is_hole_dart(d) {
                return Some(d);
            }
        }
        None
    }
}

/// Peeling by layers: always peels a hole edge with an endpoint closest to the
/// boundary of the explored map, oldest first among those, so the explored
/// region grows through the hulls of balls of increasing radius.
pub struct LayerPeeling {
    dist: Vec<u32>,
    heap: BinaryHeap<Reverse<(u32, u64, Dart)>>,
    seq: u64,
}

impl LayerPeeling {
    pub fn new(host: &Triangulation) -> Self {
        LayerPeeling {
            dist: distances_from_root(host),
            heap: BinaryHeap::new(),
            seq: 0,
        }
    }
}

impl PeelingAlgorithm for LayerPeeling {
    fn added(&mut self, ex: &Explorer, darts: &[Dart]) {
        for &d in darts {
            let t = &ex.map;
            let key = self.dist[t.origin(d) as usize].min(self.dist[t.head(d) as usize]);
            self.heap.push(Reverse((key, self.seq, d)));
            self.seq += 1;
        }
    }

    fn next(&mut self, ex: &Explorer) -> Option<Dart> {
        while let Some(Reverse((_, _, d))) = self.heap.pop() {
            if ex.is_hole_dart(d) {
                return Some(d);
            }
        }
        None
    }
}

/// Perimeter and discovered volume after each peeling step.
#[derive(Clone, Debug)]
pub struct Exploration {
    /// `(P(i), V(i))` for `i = 0, 1, …`.
    pub trajectory: Vec<(usize, usize)>,
    /// Step at which the unknown region ran out, if it did.
    pub halted: Option<usize>,
}

impl Exploration {
    /// First step with perimeter exactly `p`.
    pub fn first_hit(&self, p: usize) -> Option<usize> {
        self.trajectory.iter().position(|&(q, _)| q == p)
    }

    pub fn max_perimeter(&self) -> Vec<usize> {
        self.trajectory
            .iter()
            .scan(0, |m, &(p, _)| {
                *m = (*m).max(p);
                Some(*m)
            })
            .collect()
    }
}

fn start(t: &Triangulation) -> Result<Explorer> {
    let p = t.perimeter().ok_or(Error::NotBoundary)?;
    let outer = t.outer_face().unwrap();
    let mut unknown = vec![true; t.num_darts()];
    for &d in &outer {
        unknown[d as usize] = false;
    }
    Ok(Explorer::new(t.clone(), &unknown, p, t.inner_vertices()))
}

/// Runs the filled-in peeling exploration of `t` for at most `steps` steps,
/// stopping early with `stop(P, V)` or when nothing is left to explore.
fn explore(
    t: &Triangulation,
    algo: &mut dyn PeelingAlgorithm,
    steps: usize,
    mut stop: impl FnMut(usize, usize) -> bool,
) -> Result<Exploration> {
    let mut ex = start(t)?;
    let total = t.num_vertices();
    let volume = |ex: &Explorer| total - ex.unknown_inner;
    algo.added(&ex, &t.outer_face().unwrap().iter().map(|&d| t.twin(d)).collect::<Vec<_>>());
    let mut trajectory = vec![(ex.perimeter, volume(&ex))];
    let mut halted = None;
    let mut new_hole = Vec::new();
    if stop(ex.perimeter, volume(&ex)) {
        return Ok(Exploration { trajectory, halted });
    }
    for i in 1..=steps {
        let Some(h) = algo.next(&ex) else {
            halted = Some(i - 1);
            break;
        };
        new_hole.clear();
        let r = ex.reveal(h, &mut new_hole);
        algo.added(&ex, &new_hole);
        trajectory.push((ex.perimeter, volume(&ex)));
        if r == Reveal::Exhausted {
            halted = Some(i);
            break;
        }
        if stop(ex.perimeter, volume(&ex)) {
            break;
        }
    }
    Ok(Exploration { trajectory, halted })
}

/// `steps` steps of filled-in peeling of the triangulation with a boundary `t`.
pub fn peel_explore(
    t: &Triangulation,
    algo: &mut dyn PeelingAlgorithm,
    steps: usize,
) -> Result<Exploration> {
    explore(t, algo, steps, |_, _| false)
}

/// First step at which the perimeter equals `p`; None if the exploration ends
/// before.
pub fn first_perimeter_hit(
    t: &Triangulation,
    algo: &mut dyn PeelingAlgorithm,
    p: usize,
) -> Result<Option<usize>> {
    let e = explore(t, algo, usize::MAX, |q, _| q == p)?;
    Ok(e.first_hit(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_boundary, sample_sphere};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_triangle_halts_at_one() {
        let t = Triangulation::single_triangle();
        let e = peel_explore(&t, &mut FifoPeeling::default(), 10).unwrap();
        assert_eq!(e.halted, Some(1));
        assert_eq!(*e.trajectory.last().unwrap(), (0, 3));
    }

    #[test]
    fn perimeter_grows_by_at_most_one_and_explores_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let t = sample_sphere(400, &mut rng).unwrap().root_transform().unwrap();
            for layers in [false, true] {
                let mut fifo = FifoPeeling::default();
                let mut lay = LayerPeeling::new(&t);
                let algo: &mut dyn PeelingAlgorithm = if layers { &mut lay } else { &mut fifo };
                let e = peel_explore(&t, algo, usize::MAX).unwrap();
                assert!(e.halted.is_some());
                assert_eq!(e.trajectory.last().unwrap().1, t.num_vertices());
                for w in e.trajectory.windows(2) {
                    assert!(w[1].0 <= w[0].0 + 1 || w[1].0 == 0);
                    assert!(w[1].1 >= w[0].1);
                }
            }
        }
    }

    #[test]
    fn first_hit_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let t = sample_boundary(2000, 1, &mut rng).unwrap();
        let e = peel_explore(&t, &mut LayerPeeling::new(&t), usize::MAX).unwrap();
        assert_eq!(e.first_hit(1), Some(0));
        let mut last = 0;
        for p in 1..=6 {
            // Perimeter moves up by one at a time, so first hits are ordered.
            let h = e.first_hit(p).unwrap();
            assert!(h >= last);
            last = h;
            assert_eq!(
                first_perimeter_hit(&t, &mut LayerPeeling::new(&t), p).unwrap(),
                Some(h)
            );
        }
    }
}
