//! Lower bounds on ASPL and diameter for regular graphs.
//!
//! All bounds share one engine: pack nodes greedily into BFS levels, giving
//! each level its maximum attainable population, and average the resulting
//! distances. Feeding the engine the per-level capacity of a symmetric jump
//! set yields bounds that symmetric topologies can meet exactly; feeding it
//! `delta * (delta - 1)^(l-1)` yields the classic degree-bounded (Moore
//! style) bound valid for any regular graph. Values are exact rationals;
//! convert with [`crate::frac_f64`] for display.

use crate::{frac_f64, Frac};

/// Result of a greedy level packing: the per-level node counts, the deepest
/// fully packed level, and the resulting ASPL lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    /// `profile[i]` is the node count packed at distance `i + 1`; the counts
    /// sum to `n - 1`.
    pub profile: Vec<u128>,
    /// Deepest level filled exactly to capacity; the remainder, if any,
    /// spills into level `k + 1`.
    pub k: usize,
    /// The ASPL lower bound: `sum(l * profile[l-1]) / (n - 1)`.
    pub value: Frac,
}

impl BoundResult {
    /// Number of populated levels; a lower bound on the diameter.
    pub fn depth(&self) -> usize {
        self.profile.len()
    }

    pub fn to_f64(&self) -> f64 {
        frac_f64(self.value)
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Most nodes reachable at shortest-path distance exactly `ell` from any
/// root when an even number `delta` of jumps is applied in both directions:
/// choose `j` of the `delta/2` jump types, a sign for each, and a positive
/// composition of `ell` over them. For `delta = 4` this is `4 * ell`.
pub fn capacity_even(delta: usize, ell: u64) -> u128 {
    assert!(delta >= 2 && delta.is_multiple_of(2), "even capacity needs even delta >= 2");
    assert!(ell >= 1);
    let half = (delta / 2) as u64;
    let t = half.min(ell);
    (1..=t)
        .map(|j| binomial(half, j) * binomial(ell - 1, j - 1) * (1u128 << j))
        .sum()
}

/// Most nodes reachable at shortest-path distance exactly `ell` when an odd
/// number `delta` of jumps is applied forward from one half of a node
/// bipartition: walks alternate `ceil(ell/2)` forward and `floor(ell/2)`
/// backward hops, choosing `i` forward and `j` backward jump types. With no
/// backward hops (`ell = 1`) the backward factor is the empty choice, 1.
/// For `delta = 3` this is `3 * ell`.
pub fn capacity_odd(delta: usize, ell: u64) -> u128 {
    assert!(delta >= 3 && delta % 2 == 1, "odd capacity needs odd delta >= 3");
    assert!(ell >= 1);
    let delta = delta as u64;
    let up = ell.div_ceil(2);
    let down = ell / 2;
    let t = up.min(delta);
    (1..=t)
        .map(|i| {
            let ways_up = binomial(delta, i) * binomial(up - 1, i - 1);
            let w = down.min(delta - i);
            let ways_down: u128 = if down == 0 {
                1
            } else {
                (1..=w)
                    .map(|j| binomial(delta - i, j) * binomial(down - 1, j - 1))
                    .sum()
            };
            ways_up * ways_down
        })
        .sum()
}

/// Packs the `n - 1` non-root nodes into BFS levels, giving every level its
/// capacity until the remainder runs out. The per-level capacities must be
/// positive. This is the exact optimum of the relaxation that ignores all
/// constraints except the per-level capacity, so the resulting average is a
/// valid ASPL lower bound.
pub fn greedy_packing_lb(n: usize, capacity: impl Fn(u64) -> u128) -> BoundResult {
    assert!(n >= 2, "a path-length bound needs at least 2 nodes");
    let mut remaining = (n - 1) as u128;
    let mut profile = Vec::new();
    let mut weighted = 0u128;
    let mut k = 0;
    let mut level = 1u64;
    while remaining > 0 {
        let cap = capacity(level);
        assert!(cap > 0, "level capacity must be positive");
        let take = cap.min(remaining);
        profile.push(take);
        weighted += level as u128 * take;
        if take == cap {
            k = level as usize;
        }
        remaining -= take;
        level += 1;
    }
    BoundResult {
        profile,
        k,
        value: Frac::new(weighted, (n - 1) as u128),
    }
}

/// Largest `k` with `2k(k+1) <= n - 1`, i.e. the deepest level a 4-regular
/// symmetric topology can fill to capacity.
fn full_levels_deg4(n: usize) -> u128 {
    let mut k = (((2 * n - 1) as u128).isqrt().saturating_sub(1)) / 2;
    while 2 * (k + 1) * (k + 2) <= (n - 1) as u128 {
        k += 1;
    }
    while k > 0 && 2 * k * (k + 1) > (n - 1) as u128 {
        k -= 1;
    }
    k
}

/// ASPL lower bound for 4-regular vertex-symmetric topologies on `n` nodes,
/// in closed form. Equal to `greedy_packing_lb(n, capacity_even(4, .))`.
pub fn vs_lb_deg4(n: usize) -> Frac {
    assert!(n >= 2);
    let k = full_levels_deg4(n);
    let n = n as u128;
    // Levels 1..=k hold 4i nodes each; the remaining n - (2k^2 + 2k + 1)
    // nodes sit at level k + 1.
    let sum_sq = k * (k + 1) * (2 * k + 1) / 6;
    let numerator = (k + 1) * (n - 2 * k * k - 2 * k - 1) + 4 * sum_sq;
    Frac::new(numerator, n - 1)
}

/// Largest `k` with `3k(k+1) <= 2(n - 1)`.
fn full_levels_deg3(n: usize) -> u128 {
    let mut k = ((((8 * n - 5) / 3) as u128).isqrt().saturating_sub(1)) / 2;
    while 3 * (k + 1) * (k + 2) <= 2 * (n - 1) as u128 {
        k += 1;
    }
    while k > 0 && 3 * k * (k + 1) > 2 * (n - 1) as u128 {
        k -= 1;
    }
    k
}

/// ASPL lower bound for 3-regular vertex-symmetric topologies on `n` nodes,
/// in closed form. Equal to `greedy_packing_lb(n, capacity_odd(3, .))`.
pub fn vs_lb_deg3(n: usize) -> Frac {
    assert!(n >= 2);
    let k = full_levels_deg3(n);
    let n = n as u128;
    // Levels 1..=k hold 3i nodes each, 3k(k+1)/2 in total; k(k+1) is even.
    let filled = 3 * k * (k + 1) / 2;
    let numerator = (k + 1) * (n - filled - 1) + k * (k + 1) * (2 * k + 1) / 2;
    Frac::new(numerator, n - 1)
}

/// ASPL lower bound for any `delta`-regular graph: pack levels at the
/// degree-bounded capacity `delta * (delta - 1)^(l-1)`, remainder at the
/// first unfilled level.
pub fn moore_lb(n: usize, delta: usize) -> BoundResult {
    assert!(delta >= 3, "degree-bounded packing needs delta >= 3");
    greedy_packing_lb(n, |level| {
        let mut cap = delta as u128;
        for _ in 1..level {
            cap = cap.saturating_mul((delta - 1) as u128);
        }
        cap
    })
}

/// Diameter lower bound for 4-regular vertex-symmetric topologies: the
/// smallest `d` whose cumulative capacity `2d^2 + 2d + 1` covers `n` nodes.
pub fn diameter_lb_vs4(n: usize) -> usize {
    assert!(n >= 2);
    let mut d = full_levels_deg4(n) as usize;
    while 2 * d * (d + 1) < n - 1 {
        d += 1;
    }
    d.max(1)
}

/// Large-`n` limit of the symmetric ASPL bound: `sqrt(2n)/3` for degree 4,
/// `sqrt(8n/3)/3` for degree 3.
pub fn asymptotic_vs_lb(n: usize, delta: usize) -> f64 {
    let n = n as f64;
    match delta {
        4 => (2.0 * n).sqrt() / 3.0,
        3 => (8.0 * n / 3.0).sqrt() / 3.0,
        _ => panic!("asymptotic bound is defined for delta 3 and 4"),
    }
}
