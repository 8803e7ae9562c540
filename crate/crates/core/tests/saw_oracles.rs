//! Walk counts against brute-force oracles and closed forms.

use std::collections::HashMap;

use cubesaw::saw::{count_saw, count_saw_by_endpoint, hamilton_path_count, EnumConfig};
use cubesaw::verify::{check_submultiplicative, closed_form_counts};
use cubesaw::Dim;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

/// Plain DFS over every step, no symmetry reduction: counts by (length, endpoint).
fn dfs_by_endpoint(n: u32, max_steps: usize) -> HashMap<(usize, u64), u64> {
    fn go(n: u32, max: usize, path: &mut Vec<u64>, out: &mut HashMap<(usize, u64), u64>) {
        let here = *path.last().unwrap();
        *out.entry((path.len() - 1, here)).or_default() += 1;
        if path.len() - 1 == max {
            return;
        }
        for i in 0..n {
            let next = here ^ (1 << i);
            if !path.contains(&next) {
                path.push(next);
                go(n, max, path, out);
                path.pop();
            }
        }
    }
    let mut out = HashMap::new();
    go(n, max_steps, &mut vec![0], &mut out);
    out
}

#[test]
fn endpoint_counts_match_unreduced_dfs() {
    for (n, steps) in [(2, 3), (3, 7), (4, 6)] {
        let dim = Dim::new(n).unwrap();
        let oracle = dfs_by_endpoint(n, steps);
        let profile = count_saw_by_endpoint(dim, steps, &EnumConfig::default()).unwrap();
        for len in 0..=steps {
            let c = profile.endpoint_counts(len).unwrap();
            for x in dim.vertices() {
                let want = oracle.get(&(len, x.bits())).copied().unwrap_or(0);
                assert_eq!(*c.get(x), BigInt::from(want), "N = {n}, n = {len}, x = {}", x.bits());
            }
        }
    }
}

/// Orderings of the 8 vertices of Q^3 starting at 0 that are paths.
fn hamilton_brute_force_q3() -> u64 {
    fn permute(rest: &mut Vec<u64>, last: u64, count: &mut u64) {
        if rest.is_empty() {
            *count += 1;
            return;
        }
        for i in 0..rest.len() {
            let v = rest[i];
            if (v ^ last).count_ones() == 1 {
                rest.swap_remove(i);
                permute(rest, v, count);
                rest.push(v);
                let len = rest.len();
                rest.swap(i, len - 1);
            }
        }
    }
    let mut rest: Vec<u64> = (1..8).collect();
    let mut count = 0;
    permute(&mut rest, 0, &mut count);
    count
}

#[test]
fn hamilton_paths_on_q3() {
    let brute = hamilton_brute_force_q3();
    assert_eq!(brute, 18);
    let dim = Dim::new(3).unwrap();
    assert_eq!(hamilton_path_count(dim, &EnumConfig::default()).unwrap(), BigInt::from(brute));
}

#[test]
fn closed_forms_up_to_ten_dimensions() {
    for n in 1..=10 {
        let c = count_saw(Dim::new(n).unwrap(), 4, &EnumConfig::default()).unwrap();
        assert_eq!(c.coefficients()[1..], closed_form_counts(n)[..], "N = {n}");
    }
}

#[test]
fn counts_vanish_beyond_the_volume() {
    for n in 1..=3 {
        let dim = Dim::new(n).unwrap();
        let v = dim.volume() as usize;
        let c = count_saw(dim, v + 3, &EnumConfig::default()).unwrap();
        assert!(c.coefficients()[v..].iter().all(Zero::is_zero));
        assert!(!c.coefficients()[v - 1].is_zero());
    }
}

#[test]
fn submultiplicative_on_full_cubes() {
    for n in 2..=4 {
        let dim = Dim::new(n).unwrap();
        let c = count_saw(dim, dim.volume() as usize - 1, &EnumConfig::default()).unwrap();
        check_submultiplicative(&c).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn endpoint_parity(n in 2u32..=5, steps in 1usize..=7) {
        let dim = Dim::new(n).unwrap();
        let p = count_saw_by_endpoint(dim, steps, &EnumConfig::default()).unwrap();
        for len in 0..=steps {
            for w in 0..=n {
                if (len + w as usize) % 2 == 1 {
                    prop_assert!(p.count(len, w).is_zero());
                }
                if w as usize > len {
                    prop_assert!(p.count(len, w).is_zero());
                }
            }
        }
    }

    #[test]
    fn shorter_runs_are_prefixes(n in 2u32..=6, short in 1usize..=5, extra in 1usize..=3) {
        let dim = Dim::new(n).unwrap();
        let cfg = EnumConfig::default();
        let a = count_saw(dim, short, &cfg).unwrap();
        let b = count_saw(dim, short + extra, &cfg).unwrap();
        prop_assert_eq!(a.coefficients(), &b.coefficients()[..=short]);
    }

    #[test]
    fn split_depth_does_not_change_counts(n in 3u32..=5, depth in 0usize..=6) {
        let dim = Dim::new(n).unwrap();
        let base = count_saw_by_endpoint(dim, 7, &EnumConfig::default()).unwrap();
        let cfg = EnumConfig { split_depth: depth, ..EnumConfig::default() };
        prop_assert_eq!(count_saw_by_endpoint(dim, 7, &cfg).unwrap(), base);
    }
}
