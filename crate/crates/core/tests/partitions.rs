use std::collections::BTreeSet;

use ksep_core::{count_partitions, enumerate_partitions};
use proptest::prelude::*;

type Canonical = BTreeSet<BTreeSet<usize>>;

/// Every labeling in {0..k}^n that uses all k labels, as a set of blocks.
fn brute_force(n: usize, k: usize) -> BTreeSet<Canonical> {
    let mut out = BTreeSet::new();
    for code in 0..k.pow(n as u32) {
        let mut labels = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            labels.push(c % k);
            c /= k;
        }
        let blocks: Canonical = (0..k).map(|b| (0..n).filter(|&i| labels[i] == b).collect::<BTreeSet<_>>()).collect();
        if blocks.iter().all(|b| !b.is_empty()) && blocks.len() == k {
            out.insert(blocks);
        }
    }
    out
}

/// S(n,k) = (1/k!) Σ_j (−1)^j C(k,j) (k−j)^n
fn stirling_explicit(n: usize, k: usize) -> u64 {
    let mut binom = 1i128;
    let mut sum = 0i128;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k as i128 - j as i128 + 1) / j as i128;
        }
        let term = binom * ((k - j) as i128).pow(n as u32);
        sum += if j % 2 == 0 { term } else { -term };
    }
    let factorial: i128 = (1..=k as i128).product();
    (sum / factorial) as u64
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 2..=7 {
        for k in 2..=n {
            let got: Vec<Canonical> = enumerate_partitions(n, k)
                .unwrap()
                .map(|p| p.blocks().iter().map(|b| b.iter().copied().collect()).collect())
                .collect();
            let unique: BTreeSet<Canonical> = got.iter().cloned().collect();
            assert_eq!(unique.len(), got.len(), "duplicates for ({n},{k})");
            assert_eq!(unique, brute_force(n, k), "({n},{k})");
        }
    }
}

#[test]
fn counts_match_enumeration_and_closed_form() {
    for n in 2..=10 {
        for k in 2..=n {
            let count = count_partitions(n, k).unwrap();
            assert_eq!(count, enumerate_partitions(n, k).unwrap().count() as u64, "({n},{k})");
            assert_eq!(count, stirling_explicit(n, k), "({n},{k})");
        }
    }
}

#[test]
fn counts_sum_to_bell_minus_one() {
    const BELL: [u64; 11] = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
    for (n, bell) in BELL.iter().enumerate().skip(2) {
        let total: u64 = (2..=n).map(|k| count_partitions(n, k).unwrap()).sum();
        assert_eq!(total, bell - 1, "n={n}");
    }
}

proptest! {
    #[test]
    fn enumerated_partitions_are_canonical(n in 2usize..9, k_offset in 0usize..8) {
        let k = 2 + k_offset % (n - 1);
        for p in enumerate_partitions(n, k).unwrap() {
            prop_assert_eq!(p.k(), k);
            let mut seen = vec![false; n];
            for block in p.blocks() {
                prop_assert!(!block.is_empty());
                prop_assert!(block.windows(2).all(|w| w[0] < w[1]));
                for &i in block {
                    prop_assert!(!seen[i]);
                    seen[i] = true;
                }
            }
            prop_assert!(seen.iter().all(|&s| s));
            prop_assert!(p.blocks().windows(2).all(|w| w[0][0] < w[1][0]));
            let reparsed: ksep_core::Partition = p.to_string().parse().unwrap();
            prop_assert_eq!(reparsed, p);
        }
    }
}
