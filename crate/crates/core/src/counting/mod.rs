//! Exact and asymptotic counts of rooted triangulations with a boundary.
//!
//! `T(n, p)` is the number of rooted type-I triangulations of a disk with `n`
//! inner vertices and perimeter `p`, the outer face lying on the right of the
//! root. The closed form is
//!
//! ```text
//! T(n, p) = p (2p)! 4^n (2p + 3n − 5)!! / ((p!)^2 4 n! (2p + n − 1)!!)
//! ```
//!
//! with `(−1)!! = 0!! = 1`. The only empty class is `(0, 1)`, where the formula
//! would need `(−3)!!`; it is defined to be 0 here.

mod generate;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::factorial::ln_factorial;

pub use generate::{
    for_each_boundary, for_each_sphere, generate_all, generate_all_sphere, GenBound,
};

/// `λ_c = 1/(12√3)`.
pub const LAMBDA_C: f64 = 0.048_112_522_432_468_816;

fn double_factorial(k: i64) -> BigUint {
    let mut acc = BigUint::one();
    let mut i = k;
    while i > 1 {
        acc *= i as u64;
        i -= 2;
    }
    acc
}

fn factorial(k: u64) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// `T(n, p)`, evaluated from the closed form. Panics if `p == 0`.
pub fn count_boundary(n: usize, p: usize) -> BigUint {
    assert!(p >= 1, "perimeter must be at least 1");
    if n == 0 && p == 1 {
        return BigUint::zero();
    }
    let (n64, p64) = (n as u64, p as u64);
    let num = BigUint::from(p64)
        * factorial(2 * p64)
        * (BigUint::one() << (2 * n))
        * double_factorial(2 * p as i64 + 3 * n as i64 - 5);
    let pf = factorial(p64);
    let den = &pf * &pf * 4u32 * factorial(n64) * double_factorial(2 * p as i64 + n as i64 - 1);
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// Number of rooted triangulations of the sphere with `n` vertices,
/// `2·4^{n−2} (3n−6)!! / ((n−1)! n!!)`; zero for `n < 3`.
pub fn count_sphere(n: usize) -> BigUint {
    if n < 3 {
        return BigUint::zero();
    }
    let num = BigUint::from(2u32) * (BigUint::one() << (2 * (n - 2))) * double_factorial(3 * n as i64 - 6);
    let den = factorial(n as u64 - 1) * double_factorial(n as i64);
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// `T(n, p)` for all `n ≤ n_max` and `p ≤ p_max` from the peeling recursion
///
/// ```text
/// T(n, p) = T(n − 1, p + 1) + Σ_{j=1..p} Σ_{n1=0..n} T(n1, j) T(n − n1, p − j + 1)
/// ```
///
/// with `T(0, 1) = 0` and `T(0, 2) = 1` (the single edge). Indexed `[n][p]`.
pub fn recursive_counts(n_max: usize, p_max: usize) -> Vec<Vec<BigUint>> {
    let width = p_max + n_max + 1;
    let mut t = vec![vec![BigUint::zero(); width + 1]; n_max + 1];
    for n in 0..=n_max {
        let p_top = width - n;
        for p in 1..=p_top {
            if n == 0 && p <= 2 {
                t[0][p] = if p == 2 { BigUint::one() } else { BigUint::zero() };
                continue;
            }
            let mut acc = if n > 0 { t[n - 1][p + 1].clone() } else { BigUint::zero() };
            for j in 1..=p {
                for n1 in 0..=n {
                    let a = &t[n1][j];
                    let b = &t[n - n1][p - j + 1];
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
            }
            t[n][p] = acc;
        }
    }
    for row in &mut t {
        row.truncate(p_max + 1);
    }
    t
}

/// Memoised `T(n, p)`; safe to share between threads.
#[derive(Default)]
pub struct CountTable {
    memo: RwLock<HashMap<(usize, usize), Arc<BigUint>>>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide table.
    pub fn global() -> &'static CountTable {
        static TABLE: OnceLock<CountTable> = OnceLock::new();
        TABLE.get_or_init(CountTable::new)
    }

    pub fn boundary(&self, n: usize, p: usize) -> Arc<BigUint> {
        if let Some(v) = self.memo.read().unwrap().get(&(n, p)) {
            return v.clone();
        }
        let v = Arc::new(count_boundary(n, p));
        self.memo
            .write()
            .unwrap()
            .entry((n, p))
            .or_insert(v)
            .clone()
    }

    pub fn sphere(&self, n: usize) -> Arc<BigUint> {
        if n < 3 {
            return Arc::new(BigUint::zero());
        }
        self.boundary(n - 1, 1)
    }
}

fn ln_double_factorial(k: i64) -> f64 {
    if k <= 0 {
        return 0.0;
    }
    let i = (k as u64).div_ceil(2);
    if k % 2 == 1 {
        ln_factorial(2 * i) - i as f64 * std::f64::consts::LN_2 - ln_factorial(i)
    } else {
        let i = k as u64 / 2;
        i as f64 * std::f64::consts::LN_2 + ln_factorial(i)
    }
}

/// `ln T(n, p)` in floating point; `−∞` for the empty class.
pub fn ln_count_boundary(n: usize, p: usize) -> f64 {
    if n == 0 && p == 1 {
        return f64::NEG_INFINITY;
    }
    let (nf, pf) = (n as u64, p as u64);
    (p as f64).ln() + ln_factorial(2 * pf) + n as f64 * 4f64.ln()
        + ln_double_factorial(2 * p as i64 + 3 * n as i64 - 5)
        - 2.0 * ln_factorial(pf)
        - 4f64.ln()
        - ln_factorial(nf)
        - ln_double_factorial(2 * p as i64 + n as i64 - 1)
}

/// Natural logarithm of a big integer, accurate to double precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `C(p) = 3^{p−2} p (2p)! / (4 √(2π) (p!)^2)`.
pub fn asymptotic_constant(p: usize) -> f64 {
    let pf = p as u64;
    ((p as f64 - 2.0) * 3f64.ln() + (p as f64).ln() + ln_factorial(2 * pf)
        - 4f64.ln()
        - 0.5 * (2.0 * std::f64::consts::PI).ln()
        - 2.0 * ln_factorial(pf))
    .exp()
}

/// `T(n, p) λ_c^n n^{5/2} / C(p)`, which tends to 1 as `n → ∞`.
pub fn asymptotic_ratio(n: usize, p: usize) -> f64 {
    let ln = ln_biguint(&count_boundary(n, p)) + n as f64 * LAMBDA_C.ln() + 2.5 * (n as f64).ln()
        - asymptotic_constant(p).ln();
    ln.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(count_boundary(0, 3), BigUint::from(1u32));
        assert_eq!(count_boundary(1, 1), BigUint::from(1u32));
        assert_eq!(count_boundary(2, 1), BigUint::from(4u32));
        assert_eq!(count_boundary(0, 1), BigUint::zero());
        assert_eq!(count_boundary(0, 2), BigUint::one());
        assert_eq!(count_sphere(3), BigUint::from(4u32));
        assert_eq!(count_sphere(4), BigUint::from(32u32));
        assert_eq!(count_sphere(5), BigUint::from(336u32));
        for n in 3..=8 {
            assert_eq!(count_boundary(n - 1, 1), count_sphere(n));
        }
    }

    #[test]
    fn lambda_c() {
        assert!((LAMBDA_C - 1.0 / (12.0 * 3f64.sqrt())).abs() < 1e-17);
        assert!(LAMBDA_C > 0.0481 && LAMBDA_C < 0.0482);
    }

    #[test]
    fn recursion_matches_closed_form() {
        let t = recursive_counts(12, 8);
        for (n, row) in t.iter().enumerate() {
            for p in 1..row.len() {
                assert_eq!(row[p], count_boundary(n, p), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn ln_count_matches_exact() {
        for (n, p) in [(0, 2), (1, 1), (5, 3), (40, 7), (300, 20)] {
            let exact = ln_biguint(&count_boundary(n, p));
            assert!((ln_count_boundary(n, p) - exact).abs() < 1e-9 * exact.max(1.0));
        }
    }

    #[test]
    fn table_is_memoised() {
        let t = CountTable::new();
        assert_eq!(*t.boundary(10, 4), count_boundary(10, 4));
        assert!(Arc::ptr_eq(&t.boundary(10, 4), &t.boundary(10, 4)));
        assert_eq!(*t.sphere(6), count_sphere(6));
    }
}
