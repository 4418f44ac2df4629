//! Frozen values: counts from the closed form, flip-graph facts from exhaustive
//! construction. Any change here means the mathematics moved.

use num_bigint::BigUint;

use flipchain::counting::{count_boundary, count_sphere, LAMBDA_C};
use flipchain::exact::{build_flip_graph, connectivity_and_diameter, mixing_exact, stationarity_report};

#[test]
fn sphere_counts() {
    let want = [(3, 4u64), (4, 32), (5, 336), (6, 4096)];
    for (n, c) in want {
        assert_eq!(count_sphere(n), BigUint::from(c), "n={n}");
    }
    assert_eq!(count_sphere(2), BigUint::from(0u32));
}

#[test]
fn boundary_counts() {
    let want = [
        ((0, 2), 1u64),
        ((0, 3), 1),
        ((0, 4), 2),
        ((0, 5), 5),
        ((1, 1), 1),
        ((1, 2), 3),
        ((1, 3), 10),
        ((1, 4), 35),
        ((1, 5), 126),
        ((2, 1), 4),
        ((2, 2), 24),
        ((2, 3), 120),
        ((2, 4), 560),
        ((3, 2), 256),
        ((3, 3), 1600),
        ((4, 2), 3168),
    ];
    for ((n, p), c) in want {
        assert_eq!(count_boundary(n, p), BigUint::from(c), "({n},{p})");
    }
    assert_eq!(count_boundary(0, 1), BigUint::from(0u32));
}

#[test]
fn growth_constant() {
    assert!((LAMBDA_C - 1.0 / (12.0 * 3f64.sqrt())).abs() < 1e-15);
}

#[test]
fn flip_graph_facts() {
    let want = [(3, 4, 2), (4, 32, 6), (5, 336, 9)];
    for (n, states, diameter) in want {
        let g = build_flip_graph(n, 5).unwrap();
        assert_eq!(g.len(), states);
        assert_eq!(connectivity_and_diameter(&g), (true, Some(diameter)));
        assert!(stationarity_report(&g).all_pass());
    }
}

#[test]
fn mixing_at_four() {
    let g = build_flip_graph(4, 5).unwrap();
    let m = mixing_exact(&g, 0.25, 200);
    assert_eq!(m.t_mix, Some(13));
    assert_eq!(m.t_mix_eigen, Some(13));
    assert!((m.spectral_gap - 0.069_653_953_711_965_59).abs() < 1e-10);
}
