//! Exploration of a triangulation by revealing faces from a discovered region
//! into an unknown one, with the filled-in rule: whenever a revealed face cuts
//! the unknown region in two, the part with fewer vertices is absorbed.

mod ball;
mod frontier;
mod peeling;

use crate::map::{Dart, Triangulation};

pub use ball::{ball, distances_from_root, hull, RegionSummary};
pub use frontier::{
    frontier_init, frontier_statistics, frontier_step, Event, FrontierRecord, FrontierState,
    FrontierStatistics,
};
pub use peeling::{
    first_perimeter_hit, peel_explore, Exploration, FifoPeeling, LayerPeeling, PeelingAlgorithm,
};

pub(crate) const KNOWN: u8 = 1;
pub(crate) const UNKNOWN: u8 = 2;

/// What a reveal did to the unknown region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reveal {
    /// The third corner was strictly inside the unknown region.
    NewVertex,
    /// The third corner was on the boundary; one part was absorbed.
    Split {
        absorbed_faces: usize,
        absorbed_inner: usize,
    },
    /// The unknown region has no face left.
    Exhausted,
}

/// A map whose faces are split into a discovered part and an unknown disk.
/// `side[d]` is the part of the face on the left of dart `d`.
#[derive(Clone, Debug)]
pub struct Explorer {
    pub map: Triangulation,
    pub side: Vec<u8>,
    /// Boundary length of the unknown region (0 once exhausted).
    pub perimeter: usize,
    /// Vertices strictly inside the unknown region.
    pub unknown_inner: usize,
    pub unknown_faces: usize,
    stamp: Vec<u32>,
    epoch: u32,
}

impl Explorer {
    /// `unknown[d]` marks the darts of the unknown disk, which must have
    /// perimeter `perimeter` and `inner` inner vertices.
    pub(crate) fn new(map: Triangulation, unknown: &[bool], perimeter: usize, inner: usize) -> Self {
        let side: Vec<u8> = unknown.iter().map(|&u| if u { UNKNOWN } else { KNOWN }).collect();
        let faces = side.iter().filter(|&&s| s == UNKNOWN).count() / 3;
        debug_assert_eq!(faces + 2, 2 * inner + perimeter);
        let n = map.num_darts();
        Explorer {
            map,
            side,
            perimeter,
            unknown_inner: inner,
            unknown_faces: faces,
            stamp: vec![0; n],
            epoch: 0,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        self.unknown_faces == 0
    }

    /// `d` lies on the unknown side of the boundary between the two parts.
    pub fn is_hole_dart(&self, d: Dart) -> bool {
        self.side[d as usize] == UNKNOWN && self.side[self.map.twin(d) as usize] == KNOWN
    }

    /// Hole darts in increasing order.
    pub fn hole_darts(&self) -> Vec<Dart> {
        (0..self.map.num_darts() as Dart)
            .filter(|&d| self.is_hole_dart(d))
            .collect()
    }

    fn set_face(&mut self, d: Dart, s: u8) {
        let t = &self.map;
        let (a, b) = (t.fnext(d), t.fnext(t.fnext(d)));
        for e in [d, a, b] {
            self.side[e as usize] = s;
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Reveals the unknown face behind hole dart `h`, pushing the new hole darts
    /// onto `new_hole`.
    pub fn reveal(&mut self, h: Dart, new_hole: &mut Vec<Dart>) -> Reveal {
        debug_assert!(self.is_hole_dart(h));
        let t = &self.map;
        let x = t.fnext(h);
        let y = t.fnext(x);
        let w_known = {
            let mut d = y;
            loop {
                if self.side[d as usize] == KNOWN {
                    break true;
                }
                d = t.vnext(d);
                if d == y {
                    break false;
                }
            }
        };
        let (xt, yt) = (t.twin(x), t.twin(y));
        self.set_face(h, KNOWN);
        self.unknown_faces -= 1;

        if !w_known {
            self.perimeter += 1;
            self.unknown_inner -= 1;
            if self.unknown_faces == 0 {
                // The region was one face around a degree-one vertex.
                self.perimeter = 0;
                return Reveal::Exhausted;
            }
            new_hole.extend([yt, xt]);
            return Reveal::NewVertex;
        }

        let sx = (self.side[xt as usize] == UNKNOWN).then_some(xt);
        let sy = (self.side[yt as usize] == UNKNOWN).then_some(yt);
        let (small_is_x, small) = self.lockstep(sx, sy);
        let (fx, qx, fy, qy);
        let total_faces = self.unknown_faces;
        let q_sum = self.perimeter + 1;
        if small_is_x {
            fx = small.0;
            qx = small.1;
            fy = total_faces - fx;
            qy = q_sum - qx;
        } else {
            fy = small.0;
            qy = small.1;
            fx = total_faces - fy;
            qx = q_sum - qy;
        }
        let mx = (fx + 2 - qx) / 2;
        let my = self.unknown_inner - mx;
        debug_assert_eq!(fy + 2, 2 * my + qy);
        let keep_x = (mx, fx) >= (my, fy);
        let (absorb, faces, inner, kept) = if keep_x {
            (sy, fy, my, (fx, qx, mx, sx))
        } else {
            (sx, fx, mx, (fy, qy, my, sy))
        };
        if let Some(a) = absorb {
            self.absorb(a);
        }
        self.unknown_faces = kept.0;
        self.perimeter = kept.1;
        self.unknown_inner = kept.2;
        if self.unknown_faces == 0 {
            self.perimeter = 0;
            return Reveal::Exhausted;
        }
        new_hole.extend(kept.3);
        Reveal::Split {
            absorbed_faces: faces,
            absorbed_inner: inner,
        }
    }

    /// Explores the unknown faces reachable from `a` and `b` one face at a time
    /// each, until one search runs out. Returns which side finished first
    /// (`true` for `a`) with its face count and boundary length. An absent
    /// side is an empty region of boundary length 2.
    fn lockstep(&mut self, a: Option<Dart>, b: Option<Dart>) -> (bool, (usize, usize)) {
        let (Some(a), Some(b)) = (a, b) else {
            return (a.is_none(), (0, 2));
        };
        let epoch = self.next_epoch();
        let mut qa = vec![a];
        let mut qb = vec![b];
        let mut ra = (0usize, 0usize);
        let mut rb = (0usize, 0usize);
        self.mark_face(a, epoch);
        self.mark_face(b, epoch);
        loop {
            if !self.bfs_step(&mut qa, &mut ra, epoch) {
                return (true, ra);
            }
            if !self.bfs_step(&mut qb, &mut rb, epoch) {
                return (false, rb);
            }
        }
    }

    fn mark_face(&mut self, d: Dart, epoch: u32) {
        let t = &self.map;
        let (e, f) = (t.fnext(d), t.fnext(t.fnext(d)));
        for g in [d, e, f] {
            self.stamp[g as usize] = epoch;
        }
    }

    /// Processes one face of a search; false once the search is exhausted.
    fn bfs_step(&mut self, queue: &mut Vec<Dart>, acc: &mut (usize, usize), epoch: u32) -> bool {
        let Some(d) = queue.pop() else {
            return false;
        };
        acc.0 += 1;
        let mut e = d;
        for _ in 0..3 {
            let o = self.map.twin(e);
            if self.side[o as usize] == KNOWN {
                acc.1 += 1;
            } else if self.stamp[o as usize] != epoch {
                self.mark_face(o, epoch);
                queue.push(o);
            }
            e = self.map.fnext(e);
        }
        true
    }

    /// Marks every unknown face reachable from `d` as known.
    fn absorb(&mut self, d: Dart) {
        let mut stack = vec![d];
        self.set_face(d, KNOWN);
        while let Some(s) = stack.pop() {
            let mut e = s;
            for _ in 0..3 {
                let o = self.map.twin(e);
                if self.side[o as usize] == UNKNOWN {
                    self.set_face(o, KNOWN);
                    stack.push(o);
                }
                e = self.map.fnext(e);
            }
        }
    }

    /// The unknown region as a triangulation with a boundary, rooted at hole
    /// dart `root`. None once exhausted.
    pub fn unknown_part(&self, root: Dart) -> Option<Triangulation> {
        if self.is_exhausted() || !self.is_hole_dart(root) {
            return None;
        }
        let t = &self.map;
        let n = t.num_darts();
        let mut id = vec![u32::MAX; n];
        let mut darts = Vec::new();
        for d in 0..n as Dart {
            if self.side[d as usize] == UNKNOWN {
                id[d as usize] = darts.len() as u32;
                darts.push(d);
            }
        }
        let inner_len = darts.len() as u32;
        let mut outer = vec![u32::MAX; n];
        let mut holes = Vec::new();
        for &d in &darts {
            if self.side[t.twin(d) as usize] == KNOWN {
                outer[d as usize] = inner_len + holes.len() as u32;
                holes.push(d);
            }
        }
        let mut twin = vec![0; darts.len() + holes.len()];
        let mut fnext = vec![0; darts.len() + holes.len()];
        for &d in &darts {
            let i = id[d as usize] as usize;
            let o = t.twin(d);
            twin[i] = if self.side[o as usize] == UNKNOWN {
                id[o as usize]
            } else {
                outer[d as usize]
            };
            fnext[i] = id[t.fnext(d) as usize];
        }
        for &d in &holes {
            let od = outer[d as usize] as usize;
            twin[od] = id[d as usize];
            // The hole dart ending where `d` starts, found by turning around that
            // vertex through known faces.
            let mut g = t.fnext(t.twin(d));
            while self.side[t.twin(g) as usize] == KNOWN {
                g = t.fnext(t.twin(g));
            }
            fnext[od] = outer[t.twin(g) as usize];
        }
        Some(Triangulation::from_tables_unchecked(
            twin,
            fnext,
            id[root as usize],
            crate::map::MapKind::Boundary {
                perimeter: holes.len(),
                outer: outer[root as usize],
            },
        ))
    }
}
