//! Exact uniform sampling by revealing faces one at a time, each with its exact
//! conditional probability (a ratio of counts).

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::construct::{choices, Builder, Choice};
use crate::counting::CountTable;
use crate::error::{Error, Result};
use crate::map::{GluedMap, Triangulation};

/// Holes with at least this many inner vertices are sampled with
/// floating-point weights.
pub const DEFAULT_SWITCHOVER: usize = 512;

/// One possible face behind the peeled edge, with its exact probability.
#[derive(Clone, Debug, PartialEq)]
pub struct PeelOutcome {
    pub choice: Choice,
    pub weight: BigRational,
}

fn count_parts(table: &CountTable, c: Choice, m: usize, q: usize) -> BigUint {
    match c.parts(m, q) {
        [(a, b), (0, 0)] => (*table.boundary(a, b)).clone(),
        [(a, b), (c, d)] => &*table.boundary(a, b) * &*table.boundary(c, d),
    }
}

/// Law of the face revealed behind the root edge of a uniform element of the
/// class `(n, p)`.
pub fn peel_distribution(n: usize, p: usize) -> Result<Vec<PeelOutcome>> {
    if p == 0 || (n == 0 && p == 1) {
        return Err(Error::EmptyClass {
            inner: n,
            perimeter: p,
        });
    }
    if n == 0 && p == 2 {
        return Err(Error::InvalidArgument(
            "the single edge has no face to reveal".into(),
        ));
    }
    let table = CountTable::global();
    let total = BigRational::from_integer(table.boundary(n, p).as_ref().clone().into());
    Ok(choices(n, p)
        .map(|c| PeelOutcome {
            choice: c,
            weight: BigRational::from_integer(count_parts(table, c, n, p).into()) / &total,
        })
        .collect())
}

/// Every valid choice for a hole `(m, q)`, roughly by decreasing probability:
/// the new vertex first, then splits ordered by the size `s + k` of the smaller
/// part (volume `s`, perimeter `k`).
pub fn scan_order(m: usize, q: usize) -> impl Iterator<Item = Choice> {
    let nv = (m >= 1).then_some(Choice::NewVertex);
    let top = (m + q).div_ceil(2);
    let splits = (1..=top).flat_map(move |d| {
        (1..=d.min(q)).flat_map(move |k| {
            let s = d - k;
            let mut out = [None, None];
            if s <= m {
                let other = (m - s) + (q - k + 1);
                // Small part first: as part A, then as part B.
                if d <= other {
                    out[0] = Some(Choice::Split { j: k, n1: s });
                }
                if d < other {
                    out[1] = Some(Choice::Split {
                        j: q - k + 1,
                        n1: m - s,
                    });
                }
            }
            out.into_iter().flatten()
        })
    });
    nv.into_iter()
        .chain(splits)
        .filter(move |c| c.is_valid(m, q))
}

struct LnCounts {
    ln_fact: Vec<f64>,
}

impl LnCounts {
    fn new(n: usize, p: usize) -> Self {
        let size = 2 * (3 * n + 2 * p) + 8;
        let ln_fact = (0..=size as u64)
            .map(statrs::function::factorial::ln_factorial)
            .collect();
        LnCounts { ln_fact }
    }

    fn ln_double_factorial(&self, k: i64) -> f64 {
        if k <= 0 {
            return 0.0;
        }
        let i = (k as usize).div_ceil(2);
        if k % 2 == 1 {
            self.ln_fact[2 * i] - i as f64 * std::f64::consts::LN_2 - self.ln_fact[i]
        } else {
            let i = k as usize / 2;
            i as f64 * std::f64::consts::LN_2 + self.ln_fact[i]
        }
    }

    fn ln_t(&self, n: usize, p: usize) -> f64 {
        if n == 0 && p == 1 {
            return f64::NEG_INFINITY;
        }
        let (ni, pi) = (n as i64, p as i64);
        (p as f64).ln() + self.ln_fact[2 * p] + n as f64 * 4f64.ln()
            + self.ln_double_factorial(2 * pi + 3 * ni - 5)
            - 2.0 * self.ln_fact[p]
            - 4f64.ln()
            - self.ln_fact[n]
            - self.ln_double_factorial(2 * pi + ni - 1)
    }
}

/// Exact uniform sampler; see [`sample_boundary`].
pub struct Sampler {
    switchover: usize,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler {
            switchover: DEFAULT_SWITCHOVER,
        }
    }
}

impl Sampler {
    pub fn with_switchover(switchover: usize) -> Self {
        Sampler { switchover }
    }

    fn draw_exact<R: Rng + ?Sized>(&self, m: usize, q: usize, rng: &mut R) -> Choice {
        let table = CountTable::global();
        let total = table.boundary(m, q);
        let mut r = rng.gen_biguint_below(&total);
        for c in scan_order(m, q) {
            let w = count_parts(table, c, m, q);
            if r < w {
                return c;
            }
            r -= w;
        }
        unreachable!("weights of ({m},{q}) do not sum to the count")
    }

    fn draw_float<R: Rng + ?Sized>(&self, ln: &LnCounts, m: usize, q: usize, rng: &mut R) -> Choice {
        let base = ln.ln_t(m, q);
        let mut u: f64 = rng.gen();
        let mut last = None;
        for c in scan_order(m, q) {
            let lw = match c.parts(m, q) {
                [(a, b), (0, 0)] => ln.ln_t(a, b),
                [(a, b), (c, d)] => ln.ln_t(a, b) + ln.ln_t(c, d),
            };
            let w = (lw - base).exp();
            if u < w {
                return c;
            }
            u -= w;
            last = Some(c);
        }
        // Only reachable through rounding; the deficit is of order 1e-12.
        last.expect("nonempty class")
    }

    /// Uniform element of the class `(n, p)`.
    pub fn boundary<R: Rng + ?Sized>(&self, n: usize, p: usize, rng: &mut R) -> Result<Triangulation> {
        if p == 0 || (n == 0 && p == 1) {
            return Err(Error::EmptyClass {
                inner: n,
                perimeter: p,
            });
        }
        let ln = (n >= self.switchover).then(|| LnCounts::new(n, p));
        let mut b = Builder::new(n, p);
        while let Some((m, q)) = b.current() {
            let c = match &ln {
                Some(ln) if m >= self.switchover => self.draw_float(ln, m, q, rng),
                _ => self.draw_exact(m, q, rng),
            };
            b.apply(c);
        }
        Ok(b.finish())
    }

    /// Uniform rooted triangulation of the sphere with `n ≥ 3` vertices.
    pub fn sphere<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Triangulation> {
        if n < 3 {
            return Err(Error::InvalidArgument("a sphere needs at least 3 vertices".into()));
        }
        self.boundary(n - 1, 1, rng)?.inverse_root_transform()
    }

    /// Two independent uniform disks of perimeter 1 with `⌊(n−1)/2⌋` and
    /// `⌈(n−1)/2⌉` inner vertices, glued along their boundary loops. The root
    /// lies in the first disk.
    pub fn glued<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<GluedMap> {
        if n < 5 {
            return Err(Error::InvalidArgument("glued start needs n ≥ 5".into()));
        }
        let a = (n - 1) / 2;
        let t1 = self.boundary(a, 1, rng)?;
        let t2 = self.boundary(n - 1 - a, 1, rng)?;
        t1.glue(&t2, 0)
    }
}

/// Uniform element of the class `(n, p)` with the default switchover.
pub fn sample_boundary<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<Triangulation> {
    Sampler::default().boundary(n, p, rng)
}

pub fn sample_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Triangulation> {
    Sampler::default().sphere(n, rng)
}

pub fn glued_initial<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<GluedMap> {
    Sampler::default().glued(n, rng)
}

/// Sum of the weights, which must be exactly 1.
pub fn total_weight(outcomes: &[PeelOutcome]) -> BigRational {
    outcomes
        .iter()
        .fold(BigRational::zero(), |acc, o| acc + &o.weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scan_order_is_a_permutation_of_choices() {
        for m in 0..12 {
            for q in 1..12 {
                if m == 0 && q == 1 {
                    continue;
                }
                let mut a: Vec<Choice> = choices(m, q).collect();
                let mut b: Vec<Choice> = scan_order(m, q).collect();
                a.sort();
                b.sort();
                assert_eq!(a, b, "m={m} q={q}");
            }
        }
    }

    #[test]
    fn weights_normalised() {
        for n in 0..8 {
            for p in 1..=(8 - n) {
                if n == 0 && p <= 2 {
                    assert!(peel_distribution(n, p).is_err());
                    continue;
                }
                assert!(total_weight(&peel_distribution(n, p).unwrap()).is_one());
            }
        }
        assert_eq!(peel_distribution(0, 3).unwrap().len(), 1);
    }

    #[test]
    fn deterministic_and_valid() {
        let s = Sampler::default();
        for n in [3, 4, 10, 60] {
            let a = s.sphere(n, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
            let b = s.sphere(n, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
            assert_eq!(a.validate(), Ok(()));
            assert_eq!(a.num_vertices(), n);
            assert_eq!(a.canonical_code(), b.canonical_code());
        }
    }

    #[test]
    fn float_mode_produces_valid_maps() {
        let s = Sampler::with_switchover(10);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let t = s.boundary(200, 5, &mut rng).unwrap();
            assert_eq!(t.validate(), Ok(()));
            assert_eq!(t.inner_vertices(), 200);
        }
    }

    #[test]
    fn glued_side_volumes() {
        let g = glued_initial(101, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(g.map.validate(), Ok(()));
        assert_eq!(g.map.num_vertices(), 101);
        assert!(g.map.is_loop(g.separator));
    }
}
