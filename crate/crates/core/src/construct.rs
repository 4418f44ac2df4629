//! Incremental construction of a triangulation with a boundary by repeatedly
//! revealing the face behind the first edge of an open hole.
//!
//! The generator and the samplers drive the same [`Builder`], so every map is
//! produced by exactly one sequence of [`Choice`]s.

use std::collections::VecDeque;

use crate::map::{ops_compact, Dart, MapKind, Triangulation, NO_DART};

/// What the face behind the first edge `h0` of a hole `(h0, …, h_{q−1})` with
/// `m` inner vertices looks like.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Choice {
    /// Third corner is a new inner vertex; the hole becomes `(m − 1, q + 1)`.
    NewVertex,
    /// Third corner is the origin of `h_j` (`j = q` meaning `h0`'s origin). The
    /// hole splits into one of perimeter `j` holding `n1` inner vertices and one
    /// of perimeter `q − j + 1` holding `m − n1`.
    Split { j: usize, n1: usize },
}

impl Choice {
    /// Holes left after applying the choice to a hole `(m, q)`.
    pub fn parts(self, m: usize, q: usize) -> [(usize, usize); 2] {
        match self {
            Choice::NewVertex => [(m - 1, q + 1), (0, 0)],
            Choice::Split { j, n1 } => [(n1, j), (m - n1, q - j + 1)],
        }
    }

    pub fn is_valid(self, m: usize, q: usize) -> bool {
        match self {
            Choice::NewVertex => m >= 1,
            Choice::Split { j, n1 } => {
                (1..=q).contains(&j) && n1 <= m && !(n1 == 0 && j == 1) && !(n1 == m && j == q)
            }
        }
    }
}

/// Every valid choice for a hole `(m, q)`, in a fixed order.
pub fn choices(m: usize, q: usize) -> impl Iterator<Item = Choice> {
    let nv = (m >= 1).then_some(Choice::NewVertex);
    let splits = (1..=q).flat_map(move |j| (0..=m).map(move |n1| Choice::Split { j, n1 }));
    nv.into_iter()
        .chain(splits)
        .filter(move |c| c.is_valid(m, q))
}

#[derive(Clone, Debug)]
struct Hole {
    darts: VecDeque<Dart>,
    inner: usize,
}

#[derive(Clone, Debug)]
pub struct Builder {
    twin: Vec<Dart>,
    fnext: Vec<Dart>,
    dead: Vec<bool>,
    holes: Vec<Hole>,
    perimeter: usize,
}

impl Builder {
    /// Empty boundary of perimeter `p` around a hole with `n` inner vertices.
    pub fn new(n: usize, p: usize) -> Self {
        assert!(p >= 1 && !(n == 0 && p == 1), "empty class");
        let p32 = p as Dart;
        // Outer darts are 0..p, hole darts p..2p with h_i = twin(o_i).
        let mut twin = Vec::with_capacity(2 * (3 * n + 2 * p));
        let mut fnext = Vec::with_capacity(twin.capacity());
        for i in 0..p32 {
            twin.push(p32 + i);
            fnext.push((i + p32 - 1) % p32);
        }
        for i in 0..p32 {
            twin.push(i);
            fnext.push(NO_DART);
        }
        let mut b = Builder {
            dead: vec![false; 2 * p],
            twin,
            fnext,
            holes: vec![Hole {
                darts: (p32..2 * p32).collect(),
                inner: n,
            }],
            perimeter: p,
        };
        b.settle();
        b
    }

    /// The hole to fill next, as `(inner vertices, perimeter)`.
    pub fn current(&self) -> Option<(usize, usize)> {
        self.holes.last().map(|h| (h.inner, h.darts.len()))
    }

    fn alloc_edge(&mut self) -> (Dart, Dart) {
        let d = self.twin.len() as Dart;
        self.twin.extend([d + 1, d]);
        self.fnext.extend([NO_DART, NO_DART]);
        self.dead.extend([false, false]);
        (d, d + 1)
    }

    /// Glues away empty digons; they stand for a single edge.
    fn settle(&mut self) {
        while let Some(h) = self.holes.last() {
            if h.inner != 0 || h.darts.len() != 2 {
                break;
            }
            let (d1, d2) = (h.darts[0], h.darts[1]);
            self.holes.pop();
            let (e1, e2) = (self.twin[d1 as usize], self.twin[d2 as usize]);
            self.twin[e1 as usize] = e2;
            self.twin[e2 as usize] = e1;
            self.dead[d1 as usize] = true;
            self.dead[d2 as usize] = true;
        }
    }

    /// Reveals the face behind the first edge of the current hole.
    pub fn apply(&mut self, choice: Choice) {
        let mut hole = self.holes.pop().expect("no open hole");
        let (m, q) = (hole.inner, hole.darts.len());
        debug_assert!(choice.is_valid(m, q), "{choice:?} invalid for ({m},{q})");
        let h0 = hole.darts.pop_front().unwrap();
        let (x, xt) = self.alloc_edge();
        let (y, yt) = self.alloc_edge();
        self.fnext[h0 as usize] = x;
        self.fnext[x as usize] = y;
        self.fnext[y as usize] = h0;
        match choice {
            Choice::NewVertex => {
                hole.darts.push_front(xt);
                hole.darts.push_front(yt);
                hole.inner = m - 1;
                self.holes.push(hole);
            }
            Choice::Split { j, n1 } => {
                // hole.darts now holds h_1 .. h_{q−1}.
                let mut b: VecDeque<Dart> = hole.darts.split_off(j - 1);
                let mut a = hole.darts;
                a.push_front(xt);
                b.push_front(yt);
                self.holes.push(Hole {
                    darts: b,
                    inner: m - n1,
                });
                self.holes.push(Hole { darts: a, inner: n1 });
            }
        }
        self.settle();
    }

    /// The finished map, rooted at the first boundary edge with the outer face
    /// on its right.
    pub fn finish(self) -> Triangulation {
        assert!(self.holes.is_empty(), "holes left open");
        let p = self.perimeter as Dart;
        // The root dart only dies when the whole map is a single edge, whose
        // two darts both lie on the outer face.
        let root = if self.dead[p as usize] { 1 } else { p };
        let keep: Vec<bool> = self.dead.iter().map(|&d| !d).collect();
        ops_compact(
            &self.twin,
            &self.fnext,
            &keep,
            root,
            MapKind::Boundary {
                perimeter: self.perimeter,
                outer: 0,
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle() {
        let mut b = Builder::new(0, 3);
        assert_eq!(b.current(), Some((0, 3)));
        let cs: Vec<Choice> = choices(0, 3).collect();
        assert_eq!(cs, vec![Choice::Split { j: 2, n1: 0 }]);
        b.apply(cs[0]);
        assert_eq!(b.current(), None);
        let t = b.finish();
        assert_eq!(t.validate(), Ok(()));
        assert_eq!(t.num_vertices(), 3);
        assert_eq!(
            t.canonical_code(),
            Triangulation::single_triangle().canonical_code()
        );
    }

    #[test]
    fn single_edge() {
        let b = Builder::new(0, 2);
        assert_eq!(b.current(), None);
        let t = b.finish();
        assert_eq!(t.validate(), Ok(()));
        assert_eq!(t.num_darts(), 2);
    }

    #[test]
    fn one_inner_vertex_in_a_loop() {
        let mut b = Builder::new(1, 1);
        let cs: Vec<Choice> = choices(1, 1).collect();
        assert_eq!(cs, vec![Choice::NewVertex]);
        b.apply(Choice::NewVertex);
        assert_eq!(b.current(), None);
        let t = b.finish();
        assert_eq!(t.validate(), Ok(()));
        assert_eq!(t.num_vertices(), 2);
        assert_eq!(t.inner_vertices(), 1);
    }
}
