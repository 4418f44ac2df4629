use crate::error::{Error, Result};

use super::{Dart, MapKind, Triangulation, NO_DART};

/// Keeps the darts with `keep[d]`, renumbering them in increasing order.
pub(crate) fn compact(
    twin: &[Dart],
    fnext: &[Dart],
    keep: &[bool],
    root: Dart,
    kind: MapKind,
) -> Triangulation {
    let mut new_id = vec![NO_DART; twin.len()];
    let mut next = 0;
    for (d, &k) in keep.iter().enumerate() {
        if k {
            new_id[d] = next;
            next += 1;
        }
    }
    let mut t = Vec::with_capacity(next as usize);
    let mut f = Vec::with_capacity(next as usize);
    for d in 0..twin.len() {
        if keep[d] {
            t.push(new_id[twin[d] as usize]);
            f.push(new_id[fnext[d] as usize]);
        }
    }
    let kind = match kind {
        MapKind::Sphere => MapKind::Sphere,
        MapKind::Boundary { perimeter, outer } => MapKind::Boundary {
            perimeter,
            outer: new_id[outer as usize],
        },
    };
    debug_assert!(t.iter().chain(f.iter()).all(|&d| d != NO_DART));
    Triangulation::from_tables_unchecked(t, f, new_id[root as usize], kind)
}

/// A sphere obtained by gluing two disks; `separator` is the dart of the glued
/// boundary that was the root of the first disk (for perimeter 1, the loop).
/// `first_side[d]` tells whether dart `d` came from the first disk.
#[derive(Clone, Debug)]
pub struct GluedMap {
    pub map: Triangulation,
    pub separator: Dart,
    pub first_side: Vec<bool>,
}

impl Triangulation {
    /// Sphere with `n` vertices → disk with perimeter 1 and `n − 1` inner
    /// vertices: the root edge is doubled and a loop drawn inside the digon,
    /// rooted so that the degree-1 outer face is on its right.
    pub fn root_transform(&self) -> Result<Triangulation> {
        if !self.is_sphere() {
            return Err(Error::NotSphere);
        }
        let n = self.num_darts() as Dart;
        let r = self.root;
        let rt = self.twin(r);
        let (a, b, l_in, l_out) = (n, n + 1, n + 2, n + 3);
        let mut twin = self.twin.clone();
        let mut fnext = self.fnext.clone();
        twin[r as usize] = b;
        twin[rt as usize] = a;
        twin.extend([rt, r, l_out, l_in]);
        fnext.extend([b, l_in, a, l_out]);
        Ok(Triangulation::from_tables_unchecked(
            twin,
            fnext,
            l_in,
            MapKind::Boundary {
                perimeter: 1,
                outer: l_out,
            },
        ))
    }

    /// Inverse of [`root_transform`](Self::root_transform).
    pub fn inverse_root_transform(&self) -> Result<Triangulation> {
        if self.perimeter() != Some(1) {
            return Err(Error::InvalidArgument(
                "inverse root transform needs perimeter 1".into(),
            ));
        }
        let l_in = self.root;
        let l_out = self.twin(l_in);
        let a = self.fnext(l_in);
        let b = self.fnext(a);
        if self.twin(a) == b || self.num_vertices() < 3 {
            return Err(Error::InvalidArgument(
                "sphere would have fewer than 3 vertices".into(),
            ));
        }
        let r = self.twin(b);
        let rt = self.twin(a);
        let mut twin = self.twin.clone();
        twin[r as usize] = rt;
        twin[rt as usize] = r;
        let mut keep = vec![true; self.num_darts()];
        for d in [l_in, l_out, a, b] {
            keep[d as usize] = false;
        }
        Ok(compact(&twin, &self.fnext, &keep, r, MapKind::Sphere))
    }

    /// Inner darts along the boundary: `g_k = twin(o_k)` where `o_0` is the twin
    /// of the root and `o_{k+1} = fnext(o_k)`.
    pub(crate) fn boundary_inner_darts(&self) -> Vec<Dart> {
        let mut out = Vec::new();
        let start = self.twin(self.root);
        let mut o = start;
        loop {
            out.push(self.twin(o));
            o = self.fnext(o);
            if o == start {
                break;
            }
        }
        out
    }

    /// Glues two disks of equal perimeter along their boundaries with an
    /// orientation-reversing identification shifted by `offset`. The result is
    /// rooted at the root of `self`.
    pub fn glue(&self, other: &Triangulation, offset: usize) -> Result<GluedMap> {
        let (p1, p2) = match (self.perimeter(), other.perimeter()) {
            (Some(p1), Some(p2)) => (p1, p2),
            _ => return Err(Error::NotBoundary),
        };
        if p1 != p2 {
            return Err(Error::PerimeterMismatch(p1, p2));
        }
        let p = p1;
        if offset >= p {
            return Err(Error::InvalidArgument(format!(
                "offset {offset} out of range for perimeter {p}"
            )));
        }
        if self.num_faces() < 2 || other.num_faces() < 2 {
            return Err(Error::InvalidArgument(
                "cannot glue a disk without inner faces".into(),
            ));
        }
        let shift = self.num_darts() as Dart;
        let mut twin: Vec<Dart> = self.twin.clone();
        twin.extend(other.twin.iter().map(|&d| d + shift));
        let mut fnext: Vec<Dart> = self.fnext.clone();
        fnext.extend(other.fnext.iter().map(|&d| d + shift));
        let g1 = self.boundary_inner_darts();
        let g2: Vec<Dart> = other
            .boundary_inner_darts()
            .into_iter()
            .map(|d| d + shift)
            .collect();
        let mut keep = vec![true; twin.len()];
        for k in 0..p {
            let x = g1[k];
            let y = g2[(offset + p - k) % p];
            keep[twin[x as usize] as usize] = false;
            keep[twin[y as usize] as usize] = false;
            twin[x as usize] = y;
            twin[y as usize] = x;
        }
        let map = compact(&twin, &fnext, &keep, self.root, MapKind::Sphere);
        let first_len = keep[..shift as usize].iter().filter(|&&k| k).count();
        let first_side = (0..map.num_darts()).map(|d| d < first_len).collect();
        Ok(GluedMap {
            separator: map.root,
            map,
            first_side,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glue_two_triangles_gives_double_triangle() {
        let t = Triangulation::single_triangle();
        for offset in 0..3 {
            let g = t.glue(&t, offset).unwrap();
            assert_eq!(g.map.validate(), Ok(()));
            assert_eq!(g.map.num_vertices(), 3);
            assert_eq!(
                g.map.canonical_code(),
                Triangulation::double_triangle().canonical_code()
            );
        }
    }

    #[test]
    fn root_transform_round_trip_double_triangle() {
        let t = Triangulation::double_triangle();
        let b = t.root_transform().unwrap();
        assert_eq!(b.validate(), Ok(()));
        assert_eq!(b.num_vertices(), 3);
        assert_eq!(b.inner_vertices(), 2);
        assert_eq!(b.perimeter(), Some(1));
        let back = b.inverse_root_transform().unwrap();
        assert_eq!(back.validate(), Ok(()));
        assert_eq!(back.canonical_code(), t.canonical_code());
    }

    #[test]
    fn glue_rejects_mismatch() {
        let t = Triangulation::single_triangle();
        let s = Triangulation::double_triangle();
        assert!(matches!(t.glue(&s, 0), Err(Error::NotBoundary)));
        let b = s.root_transform().unwrap();
        assert!(matches!(t.glue(&b, 0), Err(Error::PerimeterMismatch(3, 1))));
    }
}
