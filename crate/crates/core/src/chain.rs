//! The flip chain: at each step flip a uniformly chosen edge.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::map::{Dart, Triangulation};

/// Generator for replica `i` of a run seeded with `base_seed`: ChaCha8 seeded
/// with `base_seed`, on stream `i`.
pub fn replica_rng(base_seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(i);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepRecord {
    /// Step count after this step.
    pub k: u64,
    pub edge: usize,
    /// The edge was not flippable, so the map did not change.
    pub identity: bool,
}

/// Uniform edge id in `[0, E)`.
pub fn draw_edge<R: Rng + ?Sized>(map: &Triangulation, rng: &mut R) -> usize {
    rng.gen_range(0..map.num_edges())
}

/// Flips edge `edge` of `map` in place, reporting whether it was flippable.
pub(crate) fn flip_edge(map: &mut Triangulation, edge: usize) -> bool {
    let d: Dart = map.edges()[edge];
    map.flip_in_place(d)
}

#[derive(Clone, Debug)]
pub struct ChainState {
    pub map: Triangulation,
    pub k: u64,
    pub rng: ChaCha8Rng,
}

impl ChainState {
    pub fn new(map: Triangulation, rng: ChaCha8Rng) -> Self {
        assert!(map.is_sphere(), "the flip chain runs on sphere triangulations");
        ChainState { map, k: 0, rng }
    }

    pub fn step(&mut self) -> StepRecord {
        let edge = draw_edge(&self.map, &mut self.rng);
        let flipped = flip_edge(&mut self.map, edge);
        self.k += 1;
        StepRecord {
            k: self.k,
            edge,
            identity: !flipped,
        }
    }
}

/// One step of the chain as a pure function.
pub fn chain_step(mut state: ChainState) -> (ChainState, StepRecord) {
    let rec = state.step();
    (state, rec)
}

/// Watches a chain without changing it.
pub trait Observer {
    /// Fires after steps whose count is a multiple of this.
    fn stride(&self) -> u64 {
        1
    }
    fn observe(&mut self, map: &Triangulation, record: &StepRecord);
}

/// Observer that does nothing.
impl Observer for () {
    fn stride(&self) -> u64 {
        u64::MAX
    }
    fn observe(&mut self, _: &Triangulation, _: &StepRecord) {}
}

impl<F: FnMut(&Triangulation, &StepRecord)> Observer for (u64, F) {
    fn stride(&self) -> u64 {
        self.0
    }
    fn observe(&mut self, map: &Triangulation, record: &StepRecord) {
        (self.1)(map, record)
    }
}

/// Runs `steps` steps from `t0`.
pub fn run<O: Observer + ?Sized>(
    t0: Triangulation,
    steps: u64,
    rng: ChaCha8Rng,
    observer: &mut O,
) -> (Triangulation, Vec<StepRecord>) {
    let mut state = ChainState::new(t0, rng);
    let stride = observer.stride().max(1);
    let mut records = Vec::with_capacity(steps.min(1 << 24) as usize);
    for _ in 0..steps {
        let rec = state.step();
        if rec.k % stride == 0 {
            observer.observe(&state.map, &rec);
        }
        records.push(rec);
    }
    (state.map, records)
}

#[derive(Debug)]
pub struct Replica<O> {
    pub index: u64,
    pub map: Triangulation,
    pub records: Vec<StepRecord>,
    pub observer: O,
}

/// Runs `count` independent replicas from `t0` in parallel; replica `i` uses
/// [`replica_rng`]`(base_seed, i)` and the observer `make(i)`. The output is
/// ordered by replica index.
pub fn run_replicas<O, F>(
    t0: &Triangulation,
    steps: u64,
    base_seed: u64,
    count: u64,
    make: F,
) -> Vec<Replica<O>>
where
    O: Observer + Send,
    F: Fn(u64) -> O + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut observer = make(i);
            let (map, records) = run(t0.clone(), steps, replica_rng(base_seed, i), &mut observer);
            Replica {
                index: i,
                map,
                records,
                observer,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_steps_is_identity() {
        let t = Triangulation::double_triangle();
        let (u, recs) = run(t.clone(), 0, replica_rng(1, 0), &mut ());
        assert_eq!(u, t);
        assert!(recs.is_empty());
    }

    #[test]
    fn double_triangle_stays_in_t3() {
        let t = Triangulation::double_triangle();
        let mut codes = std::collections::HashSet::new();
        let mut obs = (1, |m: &Triangulation, _: &StepRecord| {
            assert_eq!(m.validate(), Ok(()));
            codes.insert(m.canonical_code());
        });
        run(t, 2000, replica_rng(3, 0), &mut obs);
        assert!(codes.len() <= 4);
    }

    #[test]
    fn replicas_reproducible() {
        let t = crate::sampling::sample_sphere(30, &mut replica_rng(9, 0)).unwrap();
        let a = run_replicas(&t, 500, 11, 4, |_| ());
        let b = run_replicas(&t, 500, 11, 4, |_| ());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.records, y.records);
            assert_eq!(x.map.canonical_code(), y.map.canonical_code());
        }
        assert_ne!(a[0].records, a[1].records);
    }
}
