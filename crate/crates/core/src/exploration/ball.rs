use std::collections::VecDeque;

use crate::map::{Dart, Triangulation};

/// Graph distance of every vertex from the origin of the root (sphere) or from
/// the boundary (all outer vertices at distance 0).
pub fn distances_from_root(t: &Triangulation) -> Vec<u32> {
    let (start, darts) = t.vertex_darts();
    let mut dist = vec![u32::MAX; t.num_vertices()];
    let mut queue = VecDeque::new();
    let sources: Vec<Dart> = match t.outer_face() {
        Some(face) => face,
        None => vec![t.root()],
    };
    for d in sources {
        let v = t.origin(d) as usize;
        if dist[v] == u32::MAX {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &d in &darts[start[v]..start[v + 1]] {
            let u = t.head(d) as usize;
            if dist[u] == u32::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// A set of inner faces, as a mark on each dart of those faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSummary {
    pub darts: Vec<bool>,
    pub faces: usize,
    /// Vertices incident to a face of the region.
    pub vertices: usize,
    /// Darts of the region whose twin is outside it.
    pub boundary_darts: usize,
}

fn summarize(t: &Triangulation, darts: Vec<bool>) -> RegionSummary {
    let mut seen = vec![false; t.num_vertices()];
    let mut vertices = 0;
    let mut boundary_darts = 0;
    for d in 0..t.num_darts() {
        if darts[d] {
            let v = t.origin(d as Dart) as usize;
            if !seen[v] {
                seen[v] = true;
                vertices += 1;
            }
            if !darts[t.twin(d as Dart) as usize] {
                boundary_darts += 1;
            }
        }
    }
    RegionSummary {
        faces: darts.iter().filter(|&&x| x).count() / 3,
        darts,
        vertices,
        boundary_darts,
    }
}

fn ball_darts(t: &Triangulation, r: u32, dist: &[u32]) -> Vec<bool> {
    let mut inside = vec![false; t.num_darts()];
    for d in 0..t.num_darts() as Dart {
        if inside[d as usize] || t.on_outer_face(d) {
            continue;
        }
        let face = [d, t.fnext(d), t.fnext(t.fnext(d))];
        if face.iter().any(|&e| dist[t.origin(e) as usize] < r) {
            for e in face {
                inside[e as usize] = true;
            }
        }
    }
    inside
}

/// Inner faces with a vertex at distance at most `r − 1` from the root (or
/// the boundary).
pub fn ball(t: &Triangulation, r: u32) -> RegionSummary {
    let dist = distances_from_root(t);
    summarize(t, ball_darts(t, r, &dist))
}

/// The ball of radius `r` together with every component of its complement
/// except the one with the most vertices (the first found in dart order on
/// ties). Components are joined across edges; their vertex counts exclude the
/// vertices of the ball.
pub fn hull(t: &Triangulation, r: u32) -> RegionSummary {
    let dist = distances_from_root(t);
    let mut inside = ball_darts(t, r, &dist);
    let mut in_ball_vertex = vec![false; t.num_vertices()];
    for d in 0..t.num_darts() {
        if inside[d] {
            in_ball_vertex[t.origin(d as Dart) as usize] = true;
        }
    }
    let n = t.num_darts();
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<(Vec<Dart>, usize)> = Vec::new();
    for d0 in 0..n as Dart {
        if inside[d0 as usize] || comp[d0 as usize] != usize::MAX || t.on_outer_face(d0) {
            continue;
        }
        let id = comps.len();
        let mut darts = Vec::new();
        let mut stack = vec![d0];
        let mut seen_v = std::collections::HashSet::new();
        while let Some(d) = stack.pop() {
            if comp[d as usize] != usize::MAX {
                continue;
            }
            let mut e = d;
            loop {
                comp[e as usize] = id;
                darts.push(e);
                let v = t.origin(e) as usize;
                if !in_ball_vertex[v] {
                    seen_v.insert(v);
                }
                let o = t.twin(e);
                if !inside[o as usize] && !t.on_outer_face(o) && comp[o as usize] == usize::MAX {
                    stack.push(o);
                }
                e = t.fnext(e);
                if e == d {
                    break;
                }
            }
        }
        comps.push((darts, seen_v.len()));
    }
    let largest = comps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.cmp(&b.1 .1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i);
    for (i, (darts, _)) in comps.iter().enumerate() {
        if Some(i) != largest {
            for &d in darts {
                inside[d as usize] = true;
            }
        }
    }
    summarize(t, inside)
}
