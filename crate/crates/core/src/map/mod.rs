//! Rooted type-I triangulations stored as dart tables.
//!
//! A map on `2E` darts is given by two permutations: `twin`, a fixed-point-free
//! involution pairing the two darts of each edge, and `fnext`, the successor of a
//! dart around the face lying on its left. Vertices are the orbits of
//! `fnext ∘ twin`, so loops and multiple edges need no special treatment.
//!
//! A [`Triangulation`] is either a triangulated sphere or a triangulated disk
//! whose single non-triangular face (the outer face) lies on the right of the
//! root dart and is bounded by a simple cycle.

mod canonical;
mod flip;
mod io;
mod ops;

use thiserror::Error;

pub use canonical::CanonicalCode;
pub use flip::FlipResult;
pub use io::{read_map, write_map};
pub use ops::GluedMap;
pub(crate) use ops::compact as ops_compact;

pub type Dart = u32;

pub(crate) const NO_DART: Dart = Dart::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    Sphere,
    /// `outer` is any dart of the outer face.
    Boundary { perimeter: usize, outer: Dart },
}

/// First invariant of [`Triangulation`] found to fail.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("dart tables are empty or of different lengths")]
    BadLength,
    #[error("odd number of darts")]
    OddDarts,
    #[error("root dart out of range")]
    RootOutOfRange,
    #[error("twin not a permutation")]
    TwinNotPermutation,
    #[error("twin not fixed-point-free")]
    TwinFixedPoint,
    #[error("twin not an involution")]
    TwinNotInvolution,
    #[error("fnext not a permutation")]
    FnextNotPermutation,
    #[error("perimeter must be at least 1")]
    ZeroPerimeter,
    #[error("outer face dart out of range")]
    OuterOutOfRange,
    #[error("outer face has size {found}, expected {expected}")]
    OuterFaceSize { expected: usize, found: usize },
    #[error("outer face not on the right of the root")]
    OuterFaceNotRightOfRoot,
    #[error("outer face is not a simple cycle")]
    OuterFaceNotSimple,
    #[error("non-triangular face")]
    NonTriangularFace,
    #[error("map is disconnected")]
    Disconnected,
    #[error("Euler characteristic {0} is not 2")]
    EulerCharacteristic(i64),
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    twin: Vec<Dart>,
    fnext: Vec<Dart>,
    root: Dart,
    kind: MapKind,
    /// Vertex label of the origin of each dart; maintained across flips.
    origin: Vec<u32>,
    n_vertices: usize,
    /// One representative dart per edge, `d < twin(d)`, ascending.
    edges: Vec<Dart>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
            && self.kind == other.kind
            && self.twin == other.twin
            && self.fnext == other.fnext
    }
}

impl Eq for Triangulation {}

/// Labels the orbits of `perm` with consecutive integers; returns the labels and
/// the number of orbits.
fn orbit_labels(n: usize, perm: impl Fn(usize) -> usize) -> (Vec<u32>, usize) {
    let mut label = vec![u32::MAX; n];
    let mut count = 0usize;
    for start in 0..n {
        if label[start] != u32::MAX {
            continue;
        }
        let mut d = start;
        loop {
            label[d] = count as u32;
            d = perm(d);
            if d == start {
                break;
            }
        }
        count += 1;
    }
    (label, count)
}

fn is_permutation(table: &[Dart]) -> bool {
    let mut seen = vec![false; table.len()];
    for &d in table {
        let d = d as usize;
        if d >= table.len() || seen[d] {
            return false;
        }
        seen[d] = true;
    }
    true
}

/// Checks every invariant of [`Triangulation`] on raw tables. Total: never panics.
pub fn validate_tables(
    twin: &[Dart],
    fnext: &[Dart],
    root: Dart,
    kind: MapKind,
) -> Result<(), Violation> {
    let n = twin.len();
    if n == 0 || fnext.len() != n {
        return Err(Violation::BadLength);
    }
    if n % 2 != 0 {
        return Err(Violation::OddDarts);
    }
    if root as usize >= n {
        return Err(Violation::RootOutOfRange);
    }
    if !is_permutation(twin) {
        return Err(Violation::TwinNotPermutation);
    }
    if twin.iter().enumerate().any(|(d, &t)| t as usize == d) {
        return Err(Violation::TwinFixedPoint);
    }
    if twin.iter().any(|&t| twin[t as usize] as usize >= n) {
        return Err(Violation::TwinNotInvolution);
    }
    if (0..n).any(|d| twin[twin[d] as usize] as usize != d) {
        return Err(Violation::TwinNotInvolution);
    }
    if !is_permutation(fnext) {
        return Err(Violation::FnextNotPermutation);
    }

    let (face, n_faces) = orbit_labels(n, |d| fnext[d] as usize);
    let mut face_size = vec![0usize; n_faces];
    for &f in &face {
        face_size[f as usize] += 1;
    }
    let (vertex, n_vertices) = orbit_labels(n, |d| fnext[twin[d] as usize] as usize);

    let outer_face = match kind {
        MapKind::Sphere => None,
        MapKind::Boundary { perimeter, outer } => {
            if perimeter == 0 {
                return Err(Violation::ZeroPerimeter);
            }
            if outer as usize >= n {
                return Err(Violation::OuterOutOfRange);
            }
            let f = face[outer as usize];
            if face_size[f as usize] != perimeter {
                return Err(Violation::OuterFaceSize {
                    expected: perimeter,
                    found: face_size[f as usize],
                });
            }
            if face[twin[root as usize] as usize] != f {
                return Err(Violation::OuterFaceNotRightOfRoot);
            }
            let mut seen = std::collections::HashSet::new();
            let mut d = outer;
            loop {
                if !seen.insert(vertex[d as usize]) {
                    return Err(Violation::OuterFaceNotSimple);
                }
                d = fnext[d as usize];
                if d == outer {
                    break;
                }
            }
            Some(f)
        }
    };
    for (f, &size) in face_size.iter().enumerate() {
        if Some(f as u32) != outer_face && size != 3 {
            return Err(Violation::NonTriangularFace);
        }
    }

    // Connectivity under twin and fnext.
    let mut seen = vec![false; n];
    let mut stack = vec![root as usize];
    seen[root as usize] = true;
    let mut reached = 1;
    while let Some(d) = stack.pop() {
        for e in [twin[d] as usize, fnext[d] as usize] {
            if !seen[e] {
                seen[e] = true;
                reached += 1;
                stack.push(e);
            }
        }
    }
    if reached != n {
        return Err(Violation::Disconnected);
    }

    let euler = n_vertices as i64 - (n / 2) as i64 + n_faces as i64;
    if euler != 2 {
        return Err(Violation::EulerCharacteristic(euler));
    }
    Ok(())
}

impl Triangulation {
    /// Validates the tables and builds the map.
    pub fn from_tables(
        twin: Vec<Dart>,
        fnext: Vec<Dart>,
        root: Dart,
        kind: MapKind,
    ) -> Result<Self, Violation> {
        validate_tables(&twin, &fnext, root, kind)?;
        Ok(Self::from_tables_unchecked(twin, fnext, root, kind))
    }

    pub(crate) fn from_tables_unchecked(
        twin: Vec<Dart>,
        fnext: Vec<Dart>,
        root: Dart,
        kind: MapKind,
    ) -> Self {
        let n = twin.len();
        let (origin, n_vertices) = orbit_labels(n, |d| fnext[twin[d] as usize] as usize);
        let edges = (0..n as Dart).filter(|&d| d < twin[d as usize]).collect();
        Triangulation {
            twin,
            fnext,
            root,
            kind,
            origin,
            n_vertices,
            edges,
        }
    }

    /// The map with three vertices, three edges and two triangular faces
    /// sharing all of their sides.
    pub fn double_triangle() -> Self {
        // Face (0, 2, 4) and face (1, 5, 3); twins 0-1, 2-3, 4-5.
        Self::from_tables_unchecked(
            vec![1, 0, 3, 2, 5, 4],
            vec![2, 5, 4, 1, 0, 3],
            0,
            MapKind::Sphere,
        )
    }

    /// The unique element of 𝒯_{0,3}: one inner triangle and a triangular outer face.
    pub fn single_triangle() -> Self {
        Self::from_tables_unchecked(
            vec![1, 0, 3, 2, 5, 4],
            vec![2, 5, 4, 1, 0, 3],
            0,
            MapKind::Boundary {
                perimeter: 3,
                outer: 1,
            },
        )
    }

    pub fn validate(&self) -> Result<(), Violation> {
        validate_tables(&self.twin, &self.fnext, self.root, self.kind)
    }

    #[inline]
    pub fn num_darts(&self) -> usize {
        self.twin.len()
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn num_faces(&self) -> usize {
        // Euler characteristic 2.
        2 + self.num_edges() - self.n_vertices
    }

    #[inline]
    pub fn twin(&self, d: Dart) -> Dart {
        self.twin[d as usize]
    }

    #[inline]
    pub fn fnext(&self, d: Dart) -> Dart {
        self.fnext[d as usize]
    }

    pub fn fprev(&self, d: Dart) -> Dart {
        let mut e = d;
        loop {
            let next = self.fnext(e);
            if next == d {
                return e;
            }
            e = next;
        }
    }

    /// Next dart around the origin of `d`.
    #[inline]
    pub fn vnext(&self, d: Dart) -> Dart {
        self.fnext(self.twin(d))
    }

    /// Vertex label of the origin of `d`, in `0..num_vertices()`.
    #[inline]
    pub fn origin(&self, d: Dart) -> u32 {
        self.origin[d as usize]
    }

    #[inline]
    pub fn head(&self, d: Dart) -> u32 {
        self.origin(self.twin(d))
    }

    #[inline]
    pub fn root(&self) -> Dart {
        self.root
    }

    #[inline]
    pub fn kind(&self) -> MapKind {
        self.kind
    }

    #[inline]
    pub fn is_sphere(&self) -> bool {
        self.kind == MapKind::Sphere
    }

    pub fn perimeter(&self) -> Option<usize> {
        match self.kind {
            MapKind::Sphere => None,
            MapKind::Boundary { perimeter, .. } => Some(perimeter),
        }
    }

    /// Number of vertices not on the boundary (all vertices for a sphere).
    pub fn inner_vertices(&self) -> usize {
        self.n_vertices - self.perimeter().unwrap_or(0)
    }

    /// Representative darts of the edges, indexed by edge id.
    #[inline]
    pub fn edges(&self) -> &[Dart] {
        &self.edges
    }

    /// Edge id of the edge containing `d`.
    pub fn edge_of(&self, d: Dart) -> usize {
        let rep = d.min(self.twin(d));
        self.edges
            .binary_search(&rep)
            .expect("every dart belongs to an edge")
    }

    pub fn twin_table(&self) -> &[Dart] {
        &self.twin
    }

    pub fn fnext_table(&self) -> &[Dart] {
        &self.fnext
    }

    /// True if the two darts of the edge of `d` lie on the same face.
    pub fn same_face(&self, d: Dart) -> bool {
        let t = self.twin(d);
        let mut e = self.fnext(d);
        while e != d {
            if e == t {
                return true;
            }
            e = self.fnext(e);
        }
        false
    }

    pub fn is_flippable(&self, d: Dart) -> bool {
        self.is_sphere() && !self.same_face(d)
    }

    pub fn num_unflippable_edges(&self) -> usize {
        self.edges.iter().filter(|&&d| self.same_face(d)).count()
    }

    pub fn is_loop(&self, d: Dart) -> bool {
        self.origin(d) == self.head(d)
    }

    pub fn num_loops(&self) -> usize {
        self.edges.iter().filter(|&&d| self.is_loop(d)).count()
    }

    /// Darts of the outer face starting at the twin of the root.
    pub fn outer_face(&self) -> Option<Vec<Dart>> {
        self.perimeter()?;
        Some(self.face_darts(self.twin(self.root)))
    }

    pub fn face_darts(&self, d: Dart) -> Vec<Dart> {
        let mut out = vec![d];
        let mut e = self.fnext(d);
        while e != d {
            out.push(e);
            e = self.fnext(e);
        }
        out
    }

    /// True if `d` lies on the outer face.
    pub fn on_outer_face(&self, d: Dart) -> bool {
        match self.kind {
            MapKind::Sphere => false,
            MapKind::Boundary { outer, .. } => {
                let mut e = outer;
                loop {
                    if e == d {
                        return true;
                    }
                    e = self.fnext(e);
                    if e == outer {
                        return false;
                    }
                }
            }
        }
    }

    /// Face label of every dart and the number of faces.
    pub fn face_labels(&self) -> (Vec<u32>, usize) {
        orbit_labels(self.num_darts(), |d| self.fnext[d] as usize)
    }

    /// Darts grouped by origin vertex: `darts[start[v]..start[v + 1]]`.
    pub fn vertex_darts(&self) -> (Vec<usize>, Vec<Dart>) {
        let mut start = vec![0usize; self.n_vertices + 1];
        for &v in &self.origin {
            start[v as usize + 1] += 1;
        }
        for v in 0..self.n_vertices {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut darts = vec![0; self.num_darts()];
        for (d, &v) in self.origin.iter().enumerate() {
            darts[fill[v as usize]] = d as Dart;
            fill[v as usize] += 1;
        }
        (start, darts)
    }

    /// Relabels darts by `perm` (`new = perm[old]`); used for invariance tests.
    pub fn relabel(&self, perm: &[Dart]) -> Triangulation {
        let n = self.num_darts();
        assert_eq!(perm.len(), n);
        let mut twin = vec![0; n];
        let mut fnext = vec![0; n];
        for d in 0..n {
            twin[perm[d] as usize] = perm[self.twin[d] as usize];
            fnext[perm[d] as usize] = perm[self.fnext[d] as usize];
        }
        let kind = match self.kind {
            MapKind::Sphere => MapKind::Sphere,
            MapKind::Boundary { perimeter, outer } => MapKind::Boundary {
                perimeter,
                outer: perm[outer as usize],
            },
        };
        Triangulation::from_tables_unchecked(twin, fnext, perm[self.root as usize], kind)
    }

    /// Same map rooted at another dart. For boundary maps the new root must have
    /// the outer face on its right.
    pub fn reroot(&self, root: Dart) -> Result<Triangulation, Violation> {
        let mut t = self.clone();
        t.root = root;
        t.validate()?;
        Ok(t)
    }
}
