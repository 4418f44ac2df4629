use std::collections::HashMap;

use crate::chain::flip_edge;
use crate::error::{Error, Result};
use crate::map::{Dart, Triangulation};

/// No loops and no multiple edges.
pub fn is_type3(t: &Triangulation) -> bool {
    if t.num_loops() > 0 {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    t.edges().iter().all(|&d| {
        let (a, b) = (t.origin(d), t.head(d));
        seen.insert((a.min(b), a.max(b)))
    })
}

/// Faces on the left of `d` when the edge of `d` is cut.
fn side(t: &Triangulation, face: &[u32], nfaces: usize, d: Dart) -> Vec<bool> {
    let mut inside = vec![false; nfaces];
    let cut = (d, t.twin(d));
    let mut stack = vec![d];
    inside[face[d as usize] as usize] = true;
    while let Some(s) = stack.pop() {
        let mut e = s;
        loop {
            if e != cut.0 && e != cut.1 {
                let o = t.twin(e);
                let f = face[o as usize] as usize;
                if !inside[f] {
                    inside[f] = true;
                    stack.push(o);
                }
            }
            e = t.fnext(e);
            if e == s {
                break;
            }
        }
    }
    inside
}

/// A loop dart whose left side contains no other loop, if the map has loops.
///
/// Starts from the first loop on its smaller side and, while that side holds
/// another loop, moves to the side of that loop lying inside it.
pub fn minimal_loop(t: &Triangulation) -> Option<Dart> {
    let first = t.edges().iter().copied().find(|&d| t.is_loop(d))?;
    let (face, nfaces) = t.face_labels();
    let mut d = first;
    let mut s = side(t, &face, nfaces, d);
    if 2 * s.iter().filter(|&&x| x).count() > nfaces {
        d = t.twin(d);
        s = side(t, &face, nfaces, d);
    }
    loop {
        let inner = t.edges().iter().copied().find(|&e| {
            t.is_loop(e)
                && e != d
                && e != t.twin(d)
                && s[face[e as usize] as usize]
                && s[face[t.twin(e) as usize] as usize]
        });
        let Some(e) = inner else {
            return Some(d);
        };
        let outside = face[t.twin(d) as usize] as usize;
        let se = side(t, &face, nfaces, e);
        d = if se[outside] { t.twin(e) } else { e };
        s = side(t, &face, nfaces, d);
    }
}

#[derive(Clone, Debug)]
pub struct Normalization {
    /// Edge ids flipped, in order.
    pub flips: Vec<usize>,
    /// How many of the flips removed loops.
    pub loop_flips: usize,
    pub map: Triangulation,
}

/// Flips minimal loops until none is left, then one edge of every parallel
/// pair until the map is simple. `each` sees every intermediate map.
pub fn normalize_to_type3(
    t: &Triangulation,
    mut each: impl FnMut(&Triangulation),
) -> Result<Normalization> {
    if !t.is_sphere() {
        return Err(Error::NotSphere);
    }
    let mut map = t.clone();
    let mut flips = Vec::new();
    while let Some(d) = minimal_loop(&map) {
        let before = map.num_loops();
        let e = map.edge_of(d);
        if !flip_edge(&mut map, e) || map.num_loops() >= before {
            return Err(Error::InvalidArgument(format!(
                "flipping a minimal loop did not remove it (edge {e})"
            )));
        }
        flips.push(e);
        each(&map);
    }
    let loop_flips = flips.len();
    let mut groups: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (e, &d) in map.edges().iter().enumerate() {
        let (a, b) = (map.origin(d), map.head(d));
        groups.entry((a.min(b), a.max(b))).or_default().push(e);
    }
    let mut parallel: Vec<Vec<usize>> = groups.into_values().filter(|g| g.len() > 1).collect();
    parallel.sort();
    for g in parallel {
        for &e in &g[1..] {
            if !flip_edge(&mut map, e) || map.is_loop(map.edges()[e]) {
                return Err(Error::InvalidArgument(format!(
                    "flipping parallel edge {e} failed"
                )));
            }
            flips.push(e);
            each(&map);
        }
    }
    Ok(Normalization {
        flips,
        loop_flips,
        map,
    })
}
