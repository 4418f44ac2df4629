use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flipchain::chain::{replica_rng, ChainState};
use flipchain::cycles::{all_cycles, find_separating_cycle, side_volumes};
use flipchain::exploration::{frontier_init, frontier_step};
use flipchain::map::{read_map, write_map};
use flipchain::sampling::{glued_initial, sample_boundary, sample_sphere};

fn sphere(n: usize, seed: u64) -> flipchain::Triangulation {
    sample_sphere(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

/// Vertices with only known darts, only unknown darts, or both; frontier
/// edges; unknown faces. Counted from the labels alone.
fn label_census(ex: &flipchain::exploration::Explorer) -> (usize, usize, usize, usize, usize) {
    let t = &ex.map;
    let mut seen = vec![(false, false); t.num_vertices()];
    let mut edges = 0;
    for d in 0..t.num_darts() as u32 {
        let unknown = ex.side[d as usize] == 2;
        let v = &mut seen[t.origin(d) as usize];
        if unknown { v.1 = true } else { v.0 = true }
        if unknown && ex.side[t.twin(d) as usize] != 2 {
            edges += 1;
        }
    }
    let count = |f: fn(&(bool, bool)) -> bool| seen.iter().filter(|v| f(v)).count();
    let faces = ex.side.iter().filter(|&&s| s == 2).count() / 3;
    (count(|v| v.0 && !v.1), count(|v| v.1 && !v.0), count(|v| v.0 && v.1), edges, faces)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flip_is_an_involution(n in 3usize..60, seed: u64, pick: u64) {
        let t = sphere(n, seed);
        let d = (pick % t.num_darts() as u64) as u32;
        let once = t.flip(d).unwrap();
        prop_assert_eq!(once.map.validate(), Ok(()));
        prop_assert_eq!(once.map.num_vertices(), n);
        prop_assert_eq!(once.flipped, t.is_flippable(d));
        let twice = once.map.flip(d).unwrap().map;
        prop_assert_eq!(twice.canonical_code(), t.canonical_code());
    }

    #[test]
    fn map_files_round_trip(n in 3usize..80, p in 1usize..6, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for t in [sample_sphere(n, &mut rng).unwrap(), sample_boundary(n, p, &mut rng).unwrap()] {
            let mut buf = Vec::new();
            write_map(&t, &mut buf).unwrap();
            let back = read_map(&buf[..]).unwrap();
            prop_assert_eq!(back.canonical_code(), t.canonical_code());
            prop_assert_eq!(back.kind(), t.kind());
        }
    }

    #[test]
    fn root_transform_round_trip(n in 3usize..80, seed: u64) {
        let t = sphere(n, seed);
        let b = t.root_transform().unwrap();
        prop_assert_eq!(b.validate(), Ok(()));
        prop_assert_eq!(b.perimeter(), Some(1));
        prop_assert_eq!(b.inverse_root_transform().unwrap().canonical_code(), t.canonical_code());
    }

    #[test]
    fn canonical_code_ignores_labels(n in 3usize..50, seed: u64) {
        let t = sphere(n, seed);
        let mut perm: Vec<u32> = (0..t.num_darts() as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(t.relabel(&perm).canonical_code(), t.canonical_code());
    }

    #[test]
    fn sampled_classes_have_the_requested_size(n in 0usize..120, p in 1usize..8, seed: u64) {
        prop_assume!(!(n == 0 && p == 1));
        let t = sample_boundary(n, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(t.validate(), Ok(()));
        prop_assert_eq!(t.inner_vertices(), n);
        prop_assert_eq!(t.perimeter(), Some(p));
    }

    #[test]
    fn frontier_tracks_the_plain_chain(n in 5usize..60, steps in 0u64..400, seed: u64) {
        let mut rng = replica_rng(seed, 0);
        let g = glued_initial(n, &mut rng).unwrap();
        let mut plain = ChainState::new(g.map.clone(), rng.clone());
        let mut s = frontier_init(&g);
        let mut last_v = s.vtilde();
        for _ in 0..steps {
            let r = frontier_step(&mut s, &mut rng);
            let q = plain.step();
            prop_assert_eq!(r.edge, q.edge);
            prop_assert!(r.vtilde >= last_v);
            last_v = r.vtilde;
            if r.ptilde > 0 {
                let (t1, t2, frontier, edges, faces) = label_census(&s.explorer);
                prop_assert_eq!(t2, s.explorer.unknown_inner);
                prop_assert_eq!(edges, r.ptilde);
                prop_assert_eq!(faces, s.explorer.unknown_faces);
                prop_assert_eq!(t1 + t2 + frontier, n);
                prop_assert_eq!(frontier, edges);
                prop_assert_eq!(r.vtilde, (n - 1 - (n - 1) / 2) - t2 + 1);
            }
        }
        prop_assert_eq!(s.map().canonical_code(), plain.map.canonical_code());
        prop_assert!(s.tau.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cycle_search_is_monotone(n in 6usize..40, seed: u64, len in 1usize..4, min_side in 0usize..8) {
        let t = sphere(n, seed);
        if find_separating_cycle(&t, len, min_side).is_some() {
            prop_assert!(find_separating_cycle(&t, len + 1, min_side).is_some());
            if min_side > 0 {
                prop_assert!(find_separating_cycle(&t, len, min_side - 1).is_some());
            }
        }
    }

    #[test]
    fn side_volumes_sum_rule(n in 4usize..40, seed: u64, pick: usize) {
        let t = sphere(n, seed);
        let cycles = all_cycles(&t, 4);
        prop_assume!(!cycles.is_empty());
        let c = &cycles[pick % cycles.len()];
        let (a, b) = side_volumes(&t, c).unwrap();
        prop_assert_eq!(a + b + c.len(), n);
        let reversed: Vec<u32> = c.iter().rev().map(|&d| t.twin(d)).collect();
        prop_assert_eq!(side_volumes(&t, &reversed).unwrap(), (b, a));
    }
}
