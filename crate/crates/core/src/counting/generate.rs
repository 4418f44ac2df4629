use std::collections::HashSet;

use crate::construct::{choices, Builder, Choice};
use crate::error::{Error, Result};
use crate::map::{CanonicalCode, Triangulation};

/// Size limits for exhaustive generation.
#[derive(Clone, Copy, Debug)]
pub struct GenBound {
    pub max_sphere: usize,
    /// Largest allowed `n + p` for boundary classes.
    pub max_boundary: usize,
}

impl Default for GenBound {
    fn default() -> Self {
        GenBound {
            max_sphere: 6,
            max_boundary: 8,
        }
    }
}

fn walk(b: Builder, first: Option<Choice>, f: &mut dyn FnMut(Triangulation, Option<Choice>)) {
    let Some((m, q)) = b.current() else {
        f(b.finish(), first);
        return;
    };
    let opts: Vec<Choice> = choices(m, q).collect();
    let last = opts.len() - 1;
    let mut b = Some(b);
    for (i, c) in opts.into_iter().enumerate() {
        let mut next = if i == last { b.take().unwrap() } else { b.clone().unwrap() };
        next.apply(c);
        walk(next, first.or(Some(c)), f);
    }
}

/// Calls `f` on every triangulation with `n` inner vertices and perimeter `p`,
/// together with the first revealed face (`None` only for the single edge).
pub fn for_each_boundary(
    n: usize,
    p: usize,
    bound: GenBound,
    mut f: impl FnMut(Triangulation, Option<Choice>),
) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidArgument("perimeter must be at least 1".into()));
    }
    if n + p > bound.max_boundary {
        return Err(Error::BoundExceeded(format!(
            "n + p = {} exceeds {}",
            n + p,
            bound.max_boundary
        )));
    }
    if n == 0 && p == 1 {
        return Ok(());
    }
    walk(Builder::new(n, p), None, &mut f);
    Ok(())
}

/// Calls `f` on every rooted triangulation of the sphere with `n` vertices.
pub fn for_each_sphere(
    n: usize,
    bound: GenBound,
    mut f: impl FnMut(Triangulation),
) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument("a sphere needs at least 3 vertices".into()));
    }
    if n > bound.max_sphere {
        return Err(Error::BoundExceeded(format!(
            "n = {n} exceeds {}",
            bound.max_sphere
        )));
    }
    let wide = GenBound {
        max_boundary: usize::MAX,
        ..bound
    };
    for_each_boundary(n - 1, 1, wide, |t, _| {
        f(t.inverse_root_transform().expect("perimeter-1 map with n ≥ 3"))
    })
}

fn distinct(mut it: impl FnMut(&mut dyn FnMut(Triangulation)) -> Result<()>) -> Result<Vec<CanonicalCode>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    it(&mut |t| {
        let c = t.canonical_code();
        if seen.insert(c.clone()) {
            out.push(c);
        }
    })?;
    out.sort();
    Ok(out)
}

/// Sorted canonical codes of all triangulations in the class `(n, p)`.
pub fn generate_all(n: usize, p: usize, bound: GenBound) -> Result<Vec<CanonicalCode>> {
    distinct(|f| for_each_boundary(n, p, bound, |t, _| f(t)))
}

/// Sorted canonical codes of all rooted triangulations of the sphere with `n`
/// vertices.
pub fn generate_all_sphere(n: usize, bound: GenBound) -> Result<Vec<CanonicalCode>> {
    distinct(|f| for_each_sphere(n, bound, |t| f(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_boundary;
    use num_bigint::BigUint;

    #[test]
    fn single_triangle_only() {
        let all = generate_all(0, 3, GenBound::default()).unwrap();
        assert_eq!(all, vec![Triangulation::single_triangle().canonical_code()]);
    }

    #[test]
    fn small_spheres() {
        let b = GenBound::default();
        assert_eq!(generate_all_sphere(3, b).unwrap().len(), 4);
        assert_eq!(generate_all_sphere(4, b).unwrap().len(), 32);
    }

    #[test]
    fn boundary_counts_small() {
        for n in 0..=3 {
            for p in 1..=4 {
                let mut k = 0u32;
                for_each_boundary(n, p, GenBound::default(), |t, _| {
                    assert_eq!(t.validate(), Ok(()));
                    assert_eq!(t.inner_vertices(), n);
                    k += 1;
                })
                .unwrap();
                let codes = generate_all(n, p, GenBound::default()).unwrap();
                assert_eq!(BigUint::from(k), count_boundary(n, p), "n={n} p={p}");
                assert_eq!(codes.len() as u32, k, "duplicates at n={n} p={p}");
            }
        }
    }

    #[test]
    fn bound_enforced() {
        assert!(matches!(
            generate_all(5, 4, GenBound::default()),
            Err(Error::BoundExceeded(_))
        ));
        assert!(matches!(
            generate_all_sphere(7, GenBound::default()),
            Err(Error::BoundExceeded(_))
        ));
    }
}
