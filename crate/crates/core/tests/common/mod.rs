#![allow(dead_code)]

use std::collections::BTreeSet;

use lpm_core::{LatticePath, SkewRegion};
use proptest::prelude::*;

/// Two random paths with the same endpoint, squeezed into pointwise lower
/// and upper envelopes so the pair always forms a region.
pub fn region_strategy(max_len: usize) -> impl Strategy<Value = SkewRegion> {
    (1..=max_len)
        .prop_flat_map(|len| (Just(len), 0..=len))
        .prop_flat_map(|(len, r)| {
            let word = proptest::sample::subsequence((0..len).collect::<Vec<_>>(), r);
            (Just(len), word.clone(), word)
        })
        .prop_map(|(len, a, b)| {
            let pa = LatticePath::from_north_positions(len, &a.iter().map(|i| i + 1).collect::<Vec<_>>());
            let pb = LatticePath::from_north_positions(len, &b.iter().map(|i| i + 1).collect::<Vec<_>>());
            let (ha, hb) = (pa.north_prefixes(), pb.north_prefixes());
            let envelope = |pick: fn(usize, usize) -> usize| {
                let north: Vec<usize> = (1..=len)
                    .filter(|&i| pick(ha[i], hb[i]) > pick(ha[i - 1], hb[i - 1]))
                    .collect();
                LatticePath::from_north_positions(len, &north)
            };
            lpm_core::make_region(envelope(usize::min), envelope(usize::max)).expect("envelopes nest")
        })
}

/// Connected regions only.
pub fn connected_strategy(max_len: usize) -> impl Strategy<Value = SkewRegion> {
    region_strategy(max_len).prop_filter("connected", SkewRegion::is_connected)
}

/// Bases by brute force: every `r`-subset whose partial counts stay between
/// the two paths' counts.
pub fn brute_force_bases(region: &SkewRegion) -> BTreeSet<Vec<usize>> {
    let n = region.size();
    let lo = region.lower().north_prefixes();
    let hi = region.upper().north_prefixes();
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == region.r())
        .filter(|s| {
            (1..=n).all(|i| {
                let c = (s & ((1u32 << i) - 1)).count_ones() as usize;
                lo[i] <= c && c <= hi[i]
            })
        })
        .map(|s| (1..=n).filter(|&i| s >> (i - 1) & 1 == 1).collect())
        .collect()
}

pub fn region(lower: &str, upper: &str) -> SkewRegion {
    SkewRegion::from_words(lower, upper).unwrap()
}
