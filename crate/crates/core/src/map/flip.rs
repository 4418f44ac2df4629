use crate::error::{Error, Result};

use super::canonical::code_with;
use super::{Dart, Triangulation};

/// Outcome of [`Triangulation::flip`]. Edge ids are unchanged by a flip (the
/// flipped edge keeps its id and becomes the new diagonal), so the edge
/// correspondence is the identity on ids.
#[derive(Clone, Debug)]
pub struct FlipResult {
    pub map: Triangulation,
    pub flipped: bool,
    /// Edge id of the flipped edge.
    pub edge: usize,
}

impl Triangulation {
    /// Flips the edge containing dart `d`, returning a new map.
    pub fn flip(&self, d: Dart) -> Result<FlipResult> {
        if d as usize >= self.num_darts() {
            return Err(Error::NoSuchDart(d));
        }
        if !self.is_sphere() {
            return Err(Error::NotSphere);
        }
        let mut map = self.clone();
        let flipped = map.flip_in_place(d);
        Ok(FlipResult {
            edge: self.edge_of(d),
            map,
            flipped,
        })
    }

    /// Flips the edge containing `d` in place; returns false (and leaves the map
    /// untouched) when both sides of the edge lie on the same face.
    ///
    /// With faces `(a, a1, a2)` and `(b, b1, b2)` around the edge `a = u→v`,
    /// `b = v→u`, the quadrilateral `a1 a2 b1 b2` has corners `v w u x`; after the
    /// flip `a = x→w` lies in `(a, a2, b1)` and `b = w→x` in `(b, b2, a1)`.
    pub fn flip_in_place(&mut self, d: Dart) -> bool {
        debug_assert!(self.is_sphere());
        let a = d;
        let b = self.twin(a);
        let a1 = self.fnext(a);
        let a2 = self.fnext(a1);
        if b == a1 || b == a2 {
            return false;
        }
        let b1 = self.fnext(b);
        let b2 = self.fnext(b1);
        debug_assert_eq!(self.fnext(a2), a);
        debug_assert_eq!(self.fnext(b2), b);

        let new_root = if self.root == a || self.root == b {
            Some(self.rooted_diagonal(a, b, a1, a2, b1, b2))
        } else {
            None
        };

        let f = &mut self.fnext;
        f[a as usize] = a2;
        f[a2 as usize] = b1;
        f[b1 as usize] = a;
        f[b as usize] = b2;
        f[b2 as usize] = a1;
        f[a1 as usize] = b;
        self.origin[a as usize] = self.origin[b2 as usize];
        self.origin[b as usize] = self.origin[a2 as usize];
        if let Some(r) = new_root {
            self.root = r;
        }
        true
    }

    /// Orientation of the root after flipping the root edge.
    ///
    /// Let `M°` be the map with the edge removed, and `q0..q3 = a1, a2, b1, b2`
    /// the darts of its quadrilateral face starting at corners `c0..c3`. The
    /// corner `i*` minimising the code of `M°` rooted at `q_i` pairs the corners
    /// `i* ↔ i*+1` and `i*+2 ↔ i*+3`; the new root starts at the partner of the
    /// old root's origin. The rule depends on `M°` only, so flipping the root
    /// edge twice restores the root.
    fn rooted_diagonal(&self, a: Dart, b: Dart, a1: Dart, a2: Dart, b1: Dart, b2: Dart) -> Dart {
        let quad = [a1, a2, b1, b2];
        let reduced_fnext = |d: Dart| {
            if d == a1 {
                a2
            } else if d == a2 {
                b1
            } else if d == b1 {
                b2
            } else if d == b2 {
                a1
            } else {
                self.fnext(d)
            }
        };
        let codes: Vec<Vec<u32>> = quad
            .iter()
            .map(|&q| code_with(self.num_darts(), q, 2, |d| self.twin(d), reduced_fnext))
            .collect();
        let best = (0..4).min_by(|&i, &j| codes[i].cmp(&codes[j])).unwrap();
        let partner = |c: usize| {
            let rel = (c + 4 - best) % 4;
            (best + (rel ^ 1)) % 4
        };
        // Before the flip `a` starts at c2 and `b` at c0; afterwards `a` starts
        // at c3 and `b` at c1.
        let old_origin = if self.root == a { 2 } else { 0 };
        if partner(old_origin) == 3 {
            a
        } else {
            b
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_double_triangle_creates_loop() {
        let t = Triangulation::double_triangle();
        let r = t.flip(0).unwrap();
        assert!(r.flipped);
        assert_eq!(r.map.validate(), Ok(()));
        assert_eq!(r.map.num_vertices(), 3);
        assert_eq!(r.map.num_loops(), 1);
    }

    #[test]
    fn flip_twice_restores_code() {
        let t = Triangulation::double_triangle();
        for d in 0..6 {
            let once = t.flip(d).unwrap().map;
            let twice = once.flip(d).unwrap().map;
            assert_eq!(twice.canonical_code(), t.canonical_code());
        }
    }

    #[test]
    fn bad_dart_rejected() {
        let t = Triangulation::double_triangle();
        assert!(matches!(t.flip(6), Err(Error::NoSuchDart(6))));
        assert!(matches!(
            Triangulation::single_triangle().flip(0),
            Err(Error::NotSphere)
        ));
    }
}
