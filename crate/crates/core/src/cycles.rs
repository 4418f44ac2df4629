//! Short separating cycles.
//!
//! A cycle is a closed path of darts through pairwise distinct vertices; loops
//! and pairs of parallel edges are cycles of length 1 and 2. The volume of a
//! side counts the vertices strictly inside it, never those on the cycle.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::{Dart, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    pub length: usize,
    /// Vertices strictly on the left of the first dart.
    pub side_a: usize,
    pub side_b: usize,
    pub darts: Vec<Dart>,
}

/// Checks that `darts` is a closed path through distinct vertices using
/// distinct edges.
pub fn check_cycle(t: &Triangulation, darts: &[Dart]) -> Result<()> {
    if darts.is_empty() {
        return Err(Error::NotSimpleCycle("empty".into()));
    }
    let n = t.num_darts() as Dart;
    if let Some(&d) = darts.iter().find(|&&d| d >= n) {
        return Err(Error::NoSuchDart(d));
    }
    let mut vertices = std::collections::HashSet::new();
    let mut edges = std::collections::HashSet::new();
    for (i, &d) in darts.iter().enumerate() {
        let next = darts[(i + 1) % darts.len()];
        if t.head(d) != t.origin(next) {
            return Err(Error::NotSimpleCycle(format!("dart {d} does not end where {next} starts")));
        }
        if !vertices.insert(t.origin(d)) {
            return Err(Error::NotSimpleCycle(format!("vertex {} repeated", t.origin(d))));
        }
        if !edges.insert(t.edge_of(d)) {
            return Err(Error::NotSimpleCycle(format!("edge of dart {d} repeated")));
        }
    }
    Ok(())
}

/// Reusable marks for cutting a map along cycles.
struct Workspace {
    face: Vec<u32>,
    cut: Vec<u32>,
    vertex: Vec<u32>,
    on_cycle: Vec<u32>,
    epoch: u32,
}

/// Progress of the two searches on either side of a cycle.
#[derive(Clone, Copy, Debug, Default)]
struct Sides {
    volume: [usize; 2],
    has_outer: [bool; 2],
    /// The side whose search finished first.
    done: Option<usize>,
}

impl Workspace {
    fn new(t: &Triangulation) -> Self {
        Workspace {
            face: vec![0; t.num_darts()],
            cut: vec![0; t.num_darts()],
            vertex: vec![0; t.num_vertices()],
            on_cycle: vec![0; t.num_vertices()],
            epoch: 0,
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            for v in [&mut self.face, &mut self.cut, &mut self.vertex, &mut self.on_cycle] {
                v.iter_mut().for_each(|x| *x = 0);
            }
            self.epoch = 1;
        }
        self.epoch
    }

    /// Searches the faces on both sides of `cycle` one face at a time each,
    /// asking `verdict` after every step; returns its first answer. `outer`
    /// marks the darts of the outer face, if any.
    fn cut(
        &mut self,
        t: &Triangulation,
        cycle: &[Dart],
        outer: Option<&[bool]>,
        mut verdict: impl FnMut(&Sides) -> Option<bool>,
    ) -> bool {
        let e = self.next_epoch();
        for &d in cycle {
            self.cut[d as usize] = e;
            self.cut[t.twin(d) as usize] = e;
            self.on_cycle[t.origin(d) as usize] = e;
        }
        let mut queues = [vec![cycle[0]], vec![t.twin(cycle[0])]];
        let mut s = Sides::default();
        for (i, q) in queues.iter().enumerate() {
            self.mark_face(t, q[0], e);
            if let Some(o) = outer {
                s.has_outer[i] |= o[q[0] as usize];
            }
        }
        loop {
            for side in 0..2 {
                let Some(d) = queues[side].pop() else {
                    s.done = Some(side);
                    return verdict(&s).expect("verdict needed once a side is done");
                };
                let mut f = d;
                loop {
                    let v = t.origin(f) as usize;
                    if self.on_cycle[v] != e && self.vertex[v] != e {
                        self.vertex[v] = e;
                        s.volume[side] += 1;
                    }
                    let o = t.twin(f);
                    if self.cut[f as usize] != e && self.face[o as usize] != e {
                        self.mark_face(t, o, e);
                        if let Some(out) = outer {
                            s.has_outer[side] |= out[o as usize];
                        }
                        queues[side].push(o);
                    }
                    f = t.fnext(f);
                    if f == d {
                        break;
                    }
                }
                if let Some(v) = verdict(&s) {
                    return v;
                }
            }
        }
    }

    fn mark_face(&mut self, t: &Triangulation, d: Dart, e: u32) {
        let mut f = d;
        loop {
            self.face[f as usize] = e;
            f = t.fnext(f);
            if f == d {
                break;
            }
        }
    }
}

/// Vertices strictly on each side of a simple cycle: `(left of the first
/// dart, right)`. The two counts and the length add up to the vertex count.
pub fn side_volumes(t: &Triangulation, cycle: &[Dart]) -> Result<(usize, usize)> {
    check_cycle(t, cycle)?;
    Ok(full_sides(t, cycle))
}

fn witness(t: &Triangulation, darts: Vec<Dart>) -> CycleWitness {
    let (a, b) = full_sides(t, &darts);
    CycleWitness {
        length: darts.len(),
        side_a: a,
        side_b: b,
        darts,
    }
}

fn full_sides(t: &Triangulation, cycle: &[Dart]) -> (usize, usize) {
    let mut ws = Workspace::new(t);
    let mut first = None;
    let len = cycle.len();
    let n = t.num_vertices();
    ws.cut(t, cycle, None, |s| {
        let side = s.done?;
        first = Some((side, s.volume[side]));
        Some(true)
    });
    let (side, v) = first.unwrap();
    if side == 0 {
        (v, n - len - v)
    } else {
        (n - len - v, v)
    }
}

/// Adjacency by origin vertex.
struct Graph {
    start: Vec<usize>,
    darts: Vec<Dart>,
}

impl Graph {
    fn new(t: &Triangulation) -> Self {
        let (start, darts) = t.vertex_darts();
        Graph { start, darts }
    }

    fn out(&self, v: usize) -> &[Dart] {
        &self.darts[self.start[v]..self.start[v + 1]]
    }
}

struct Bfs {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    epoch: u32,
    queue: VecDeque<usize>,
    ball: Vec<usize>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs {
            stamp: vec![0; n],
            dist: vec![0; n],
            epoch: 0,
            queue: VecDeque::new(),
            ball: Vec::new(),
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|x| *x = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Vertices within distance `r` of `c`, left in `self.ball` and stamped
    /// with the returned epoch.
    fn ball(&mut self, t: &Triangulation, g: &Graph, c: usize, r: u32) -> u32 {
        let e = self.next_epoch();
        self.ball.clear();
        self.queue.clear();
        self.stamp[c] = e;
        self.dist[c] = 0;
        self.ball.push(c);
        self.queue.push_back(c);
        while let Some(v) = self.queue.pop_front() {
            if self.dist[v] == r {
                continue;
            }
            for &d in g.out(v) {
                let u = t.head(d) as usize;
                if self.stamp[u] != e {
                    self.stamp[u] = e;
                    self.dist[u] = self.dist[v] + 1;
                    self.ball.push(u);
                    self.queue.push_back(u);
                }
            }
        }
        e
    }

    /// Size of the component of `u` avoiding stamped vertices, stopping once
    /// it exceeds `cap`.
    fn component(&mut self, t: &Triangulation, g: &Graph, u: usize, e: u32, cap: usize) -> usize {
        self.queue.clear();
        self.stamp[u] = e;
        self.queue.push_back(u);
        let mut size = 1;
        while let Some(v) = self.queue.pop_front() {
            for &d in g.out(v) {
                let w = t.head(d) as usize;
                if self.stamp[w] != e {
                    self.stamp[w] = e;
                    size += 1;
                    if size > cap {
                        return size;
                    }
                    self.queue.push_back(w);
                }
            }
        }
        size
    }
}

/// Vertices that can lie on a cycle of length at most `len_max` with both
/// sides of volume at least `min_side`. Such a cycle lies within distance
/// `len_max / 2` of each of its vertices, so every component of the rest of
/// the map lies on one side and has at most `n − 1 − min_side` vertices.
fn separating_candidates(t: &Triangulation, g: &Graph, len_max: usize, min_side: usize) -> Vec<bool> {
    let n = t.num_vertices();
    let limit = n - 1 - min_side;
    let r = (len_max / 2) as u32;
    (0..n)
        .into_par_iter()
        .map_init(
            || Bfs::new(n),
            |bfs, c| {
                let e = bfs.ball(t, g, c, r);
                let ball = std::mem::take(&mut bfs.ball);
                let mut ok = true;
                let mut rest = n - ball.len();
                'outer: for &v in &ball {
                    for &d in g.out(v) {
                        if rest <= limit {
                            break 'outer;
                        }
                        let u = t.head(d) as usize;
                        if bfs.stamp[u] != e {
                            let size = bfs.component(t, g, u, e, limit);
                            if size > limit {
                                ok = false;
                                break 'outer;
                            }
                            rest -= size;
                        }
                    }
                }
                bfs.ball = ball;
                ok
            },
        )
        .collect()
}

/// Depth-first search for cycles of length exactly `len` whose smallest vertex
/// is `s`, through candidate vertices only; `accept` decides each one.
struct CycleSearch<'a> {
    t: &'a Triangulation,
    g: &'a Graph,
    candidate: &'a [bool],
    dist: Vec<u32>,
    stamp: Vec<u32>,
    on_path: Vec<bool>,
    path: Vec<Dart>,
    epoch: u32,
}

impl<'a> CycleSearch<'a> {
    fn new(t: &'a Triangulation, g: &'a Graph, candidate: &'a [bool]) -> Self {
        let n = t.num_vertices();
        CycleSearch {
            t,
            g,
            candidate,
            dist: vec![0; n],
            stamp: vec![0; n],
            on_path: vec![false; n],
            path: Vec::new(),
            epoch: 0,
        }
    }

    /// Distances from `s` among candidates above `s`, up to `depth`.
    fn distances(&mut self, s: usize, depth: u32) {
        self.epoch += 1;
        let e = self.epoch;
        let mut queue = VecDeque::from([s]);
        self.stamp[s] = e;
        self.dist[s] = 0;
        while let Some(v) = queue.pop_front() {
            if self.dist[v] == depth {
                continue;
            }
            for &d in self.g.out(v) {
                let u = self.t.head(d) as usize;
                if u > s && self.candidate[u] && self.stamp[u] != e {
                    self.stamp[u] = e;
                    self.dist[u] = self.dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
    }

    fn reachable(&self, u: usize, budget: usize) -> bool {
        self.stamp[u] == self.epoch && self.dist[u] as usize <= budget
    }

    fn run(&mut self, s: usize, len: usize, accept: &mut dyn FnMut(&[Dart]) -> bool) -> Option<Vec<Dart>> {
        self.distances(s, (len / 2) as u32);
        self.path.clear();
        self.on_path[s] = true;
        let found = self.extend(s, s, len, accept);
        self.on_path[s] = false;
        found
    }

    fn extend(
        &mut self,
        s: usize,
        v: usize,
        len: usize,
        accept: &mut dyn FnMut(&[Dart]) -> bool,
    ) -> Option<Vec<Dart>> {
        let used = self.path.len();
        for i in 0..self.g.out(v).len() {
            let d = self.g.out(v)[i];
            let u = self.t.head(d) as usize;
            if used + 1 == len {
                if u != s || (len == 2 && self.t.edge_of(d) == self.t.edge_of(self.path[0])) {
                    continue;
                }
                // Each cycle of length at least 3 is met in both directions;
                // keep one.
                if len >= 3 && self.t.head(self.path[0]) > self.t.origin(d) {
                    continue;
                }
                self.path.push(d);
                if accept(&self.path) {
                    return Some(self.path.clone());
                }
                self.path.pop();
                continue;
            }
            if u == s || self.on_path[u] || !self.reachable(u, len - used - 1) {
                continue;
            }
            self.on_path[u] = true;
            self.path.push(d);
            let r = self.extend(s, u, len, accept);
            self.path.pop();
            self.on_path[u] = false;
            if r.is_some() {
                return r;
            }
        }
        None
    }
}

/// Iterative deepening over lengths, then starting vertices in order; the first
/// accepted cycle wins.
fn search(
    t: &Triangulation,
    g: &Graph,
    candidate: &[bool],
    len_max: usize,
    accept: &(dyn Fn(&mut Workspace, &[Dart]) -> bool + Sync),
) -> Option<Vec<Dart>> {
    let starts: Vec<usize> = (0..t.num_vertices()).filter(|&v| candidate[v]).collect();
    for len in 1..=len_max {
        let found = starts.par_iter().map_init(
            || (CycleSearch::new(t, g, candidate), Workspace::new(t)),
            |(cs, ws), &s| cs.run(s, len, &mut |p: &[Dart]| accept(ws, p)),
        );
        if let Some(c) = found.find_map_first(|x| x) {
            return Some(c);
        }
    }
    None
}

/// A cycle of length at most `len_max` with at least `min_side` vertices
/// strictly on each side, if there is one. The search is exhaustive: shortest
/// first, then by smallest vertex.
pub fn find_separating_cycle(t: &Triangulation, len_max: usize, min_side: usize) -> Option<CycleWitness> {
    let n = t.num_vertices();
    if len_max == 0 || 2 * min_side + 1 > n {
        return None;
    }
    let g = Graph::new(t);
    let candidate = separating_candidates(t, &g, len_max, min_side);
    let accept = |ws: &mut Workspace, c: &[Dart]| {
        let len = c.len();
        ws.cut(t, c, None, |s| match s.done {
            Some(side) => {
                let v = s.volume[side];
                Some(v >= min_side && n - len - v >= min_side)
            }
            None => (s.volume[0] >= min_side && s.volume[1] >= min_side).then_some(true),
        })
    };
    search(t, &g, &candidate, len_max, &accept).map(|c| witness(t, c))
}

/// Vertices on the outer side of a cycle, excluding the cycle itself.
pub fn region_volume(t: &Triangulation, cycle: &[Dart]) -> Result<usize> {
    check_cycle(t, cycle)?;
    let outer = outer_marks(t).ok_or(Error::NotBoundary)?;
    let mut ws = Workspace::new(t);
    let n = t.num_vertices();
    let mut out = 0;
    ws.cut(t, cycle, Some(&outer), |s| {
        let side = s.done?;
        out = if s.has_outer[side] {
            s.volume[side]
        } else {
            n - cycle.len() - s.volume[side]
        };
        Some(true)
    });
    Ok(out)
}

fn outer_marks(t: &Triangulation) -> Option<Vec<bool>> {
    let face = t.outer_face()?;
    let mut marks = vec![false; t.num_darts()];
    for d in face {
        marks[d as usize] = true;
    }
    Some(marks)
}

/// A cycle of length at most `len_max` such that at most `vol_max` vertices lie
/// strictly between it and the boundary of `t` (the boundary itself qualifies
/// when short enough).
pub fn boundary_shield_cycle(t: &Triangulation, len_max: usize, vol_max: usize) -> Result<Option<CycleWitness>> {
    let outer = outer_marks(t).ok_or(Error::NotBoundary)?;
    let n = t.num_vertices();
    let g = Graph::new(t);
    let boundary: Vec<usize> = t
        .outer_face()
        .unwrap()
        .iter()
        .map(|&d| t.origin(d) as usize)
        .collect();
    let r = (len_max / 2) as u32;
    // A cycle through `c` lies in the ball of radius `r` around `c`; boundary
    // vertices outside that ball, and everything joined to them outside it,
    // are between the cycle and the boundary.
    let candidate: Vec<bool> = (0..n)
        .into_par_iter()
        .map_init(
            || Bfs::new(n),
            |bfs, c| {
                let e = bfs.ball(t, &g, c, r);
                let mut seen = 0;
                for &b in &boundary {
                    if bfs.stamp[b] != e {
                        seen += bfs.component(t, &g, b, e, vol_max - seen.min(vol_max));
                        if seen > vol_max {
                            return false;
                        }
                    }
                }
                true
            },
        )
        .collect();
    let accept = |ws: &mut Workspace, c: &[Dart]| {
        let len = c.len();
        ws.cut(t, c, Some(&outer), |s| {
            for side in 0..2 {
                if s.has_outer[side] && s.volume[side] > vol_max {
                    return Some(false);
                }
            }
            let side = s.done?;
            let region = if s.has_outer[side] {
                s.volume[side]
            } else {
                n - len - s.volume[side]
            };
            Some(region <= vol_max)
        })
    };
    Ok(search(t, &g, &candidate, len_max, &accept).map(|c| witness(t, c)))
}

/// Every cycle of length at most `len_max`, each listed once per starting dart
/// and direction. Exponential; for checking the search on small maps.
pub fn all_cycles(t: &Triangulation, len_max: usize) -> Vec<Vec<Dart>> {
    let g = Graph::new(t);
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on = vec![false; t.num_vertices()];
    fn rec(
        t: &Triangulation,
        g: &Graph,
        s: usize,
        v: usize,
        len_max: usize,
        path: &mut Vec<Dart>,
        on: &mut Vec<bool>,
        out: &mut Vec<Vec<Dart>>,
    ) {
        for &d in g.out(v) {
            let u = t.head(d) as usize;
            if u == s {
                path.push(d);
                if check_cycle(t, path).is_ok() {
                    out.push(path.clone());
                }
                path.pop();
            } else if !on[u] && path.len() + 1 < len_max {
                on[u] = true;
                path.push(d);
                rec(t, g, s, u, len_max, path, on, out);
                path.pop();
                on[u] = false;
            }
        }
    }
    for s in 0..t.num_vertices() {
        on[s] = true;
        rec(t, &g, s, s, len_max, &mut path, &mut on, &mut out);
        on[s] = false;
    }
    out
}
