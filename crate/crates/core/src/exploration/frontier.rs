use rand::Rng;

use crate::chain::{draw_edge, flip_edge};
use crate::map::{Dart, GluedMap, Triangulation};

use super::{Explorer, KNOWN, UNKNOWN};

/// Where the flipped edge was.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Event {
    InsideKnown,
    InsideUnknown,
    /// On the frontier: the unknown face behind it was revealed first.
    Frontier,
}

impl Event {
    pub fn as_str(self) -> &'static str {
        match self {
            Event::InsideKnown => "inside1",
            Event::InsideUnknown => "inside2",
            Event::Frontier => "frontier",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrontierRecord {
    /// Index of the step (the edge was drawn from the map at time `k`).
    pub k: u64,
    pub edge: usize,
    pub identity: bool,
    pub event: Event,
    /// Frontier length and discovered volume after the step.
    pub ptilde: usize,
    pub vtilde: usize,
}

/// The flipping sphere split into a discovered part T¹ and an unknown disk T²,
/// which stays uniform given what has been discovered.
#[derive(Clone, Debug)]
pub struct FrontierState {
    pub explorer: Explorer,
    pub k: u64,
    initial_unknown: usize,
    /// Boundary hit times, starting with `τ₀ = 0`.
    pub tau: Vec<u64>,
}

impl FrontierState {
    pub fn map(&self) -> &Triangulation {
        &self.explorer.map
    }

    /// `P̃`: the frontier length (0 once T² is used up).
    pub fn ptilde(&self) -> usize {
        self.explorer.perimeter
    }

    /// `Ṽ`: vertices discovered since the start, plus one.
    pub fn vtilde(&self) -> usize {
        self.initial_unknown - self.explorer.unknown_inner + 1
    }

    /// T² rooted at its `i`-th frontier dart (in dart order, modulo the
    /// frontier length).
    pub fn unknown_part(&self, i: usize) -> Option<Triangulation> {
        let holes = self.explorer.hole_darts();
        if holes.is_empty() {
            return None;
        }
        self.explorer.unknown_part(holes[i % holes.len()])
    }
}

/// Starts the exploration of a glued map: T¹ is the first disk, T² the
/// second, the frontier is the gluing cycle.
pub fn frontier_init(glued: &GluedMap) -> FrontierState {
    let t = &glued.map;
    let unknown: Vec<bool> = glued.first_side.iter().map(|&f| !f).collect();
    let mut frontier = 0;
    for d in 0..t.num_darts() as Dart {
        if unknown[d as usize] && !unknown[t.twin(d) as usize] {
            frontier += 1;
        }
    }
    let faces = unknown.iter().filter(|&&u| u).count() / 3;
    let inner = (faces + 2 - frontier) / 2;
    FrontierState {
        explorer: Explorer::new(t.clone(), &unknown, frontier, inner),
        k: 0,
        initial_unknown: inner,
        tau: vec![0],
    }
}

/// One step of the flip chain, tracked. Draws the edge exactly as
/// [`crate::chain::ChainState::step`] does, so both produce the same maps.
pub fn frontier_step<R: Rng + ?Sized>(s: &mut FrontierState, rng: &mut R) -> FrontierRecord {
    let edge = draw_edge(&s.explorer.map, rng);
    let d = s.explorer.map.edges()[edge];
    let t = s.explorer.map.twin(d);
    let (sd, st) = (s.explorer.side[d as usize], s.explorer.side[t as usize]);
    let event = match (sd, st) {
        (KNOWN, KNOWN) => Event::InsideKnown,
        (UNKNOWN, UNKNOWN) => Event::InsideUnknown,
        _ => {
            let h = if sd == UNKNOWN { d } else { t };
            let mut new_hole = Vec::new();
            s.explorer.reveal(h, &mut new_hole);
            Event::Frontier
        }
    };
    let flipped = flip_edge(&mut s.explorer.map, edge);
    let k = s.k;
    s.k += 1;
    if event == Event::Frontier && k > *s.tau.last().unwrap() {
        s.tau.push(k);
    }
    FrontierRecord {
        k,
        edge,
        identity: !flipped,
        event,
        ptilde: s.ptilde(),
        vtilde: s.vtilde(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrontierStatistics {
    /// `(k, P̃(k), Ṽ(k))` for `k = 0, 1, …`.
    pub series: Vec<(u64, usize, usize)>,
    /// `(j, τ_j, P(j), V(j))` with `P(j) = P̃(τ_j + 1)`, `V(j) = Ṽ(τ_j + 1)`.
    pub arrivals: Vec<(usize, u64, usize, usize)>,
}

/// Series of a trajectory started from `(P̃(0), Ṽ(0)) = initial`.
pub fn frontier_statistics(initial: (usize, usize), records: &[FrontierRecord]) -> FrontierStatistics {
    let mut series = vec![(0, initial.0, initial.1)];
    series.extend(records.iter().map(|r| (r.k + 1, r.ptilde, r.vtilde)));
    let mut taus = vec![0u64];
    for r in records {
        if r.event == Event::Frontier && r.k > *taus.last().unwrap() {
            taus.push(r.k);
        }
    }
    let arrivals = taus
        .iter()
        .enumerate()
        .filter_map(|(j, &tau)| {
            records
                .get(tau as usize)
                .map(|r| (j, tau, r.ptilde, r.vtilde))
        })
        .collect();
    FrontierStatistics { series, arrivals }
}
