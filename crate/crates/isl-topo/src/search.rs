//! Topology search: exhaustive jump-set sweeps, uniform random regular
//! graph sampling, and simulated annealing over degree-preserving edge
//! swaps, with an optional toroidal link-range constraint throughout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::lattice::{Constellation, Jump};
use crate::symmetric::{build_odd, offset_torus, PartitionRule};
use crate::{frac_f64, Frac};

/// Consecutive rejected draws before the sampler scans for any acceptable
/// pair at all; a failed scan aborts the attempt.
const REJECTION_STREAK: usize = 64;

/// Whole-construction restarts before the sampler gives up.
const SAMPLE_RESTART_CAP: usize = 100;

/// Resampled proposals before a swap draw yields a no-op.
const SWAP_ATTEMPTS: usize = 32;

/// Simulated annealing schedule. Temperatures are on the ASPL scale: an
/// uphill move of `d` hops is accepted with probability `exp(-d / t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealConfig {
    pub initial_temperature: f64,
    /// Multiplies the temperature each epoch; in (0, 1) so the schedule
    /// terminates.
    pub cooling_factor: f64,
    pub steps_per_temperature: usize,
    pub min_temperature: f64,
    pub seed: u64,
    /// Maximum toroidal length for any edge a move may create.
    pub max_range: Option<f64>,
}

impl Default for AnnealConfig {
    fn default() -> AnnealConfig {
        AnnealConfig {
            initial_temperature: 1.0,
            cooling_factor: 0.95,
            steps_per_temperature: 100,
            min_temperature: 1e-4,
            seed: 0,
            max_range: None,
        }
    }
}

impl AnnealConfig {
    /// Schedule sized to the instance: the start temperature is calibrated
    /// so the median uphill move from `initial` has roughly even odds of
    /// acceptance, and each epoch proposes `100 * n` swaps.
    pub fn calibrated(initial: &Topology, seed: u64, max_range: Option<f64>) -> AnnealConfig {
        const PREFIX: usize = 64;
        let c = initial.constellation();
        let admissible = |u: u32, v: u32| match max_range {
            Some(r) => c.toroidal_distance(c.point(u), c.point(v)) <= r,
            None => true,
        };
        let mut cfg = AnnealConfig {
            steps_per_temperature: 100 * initial.n(),
            seed,
            max_range,
            ..AnnealConfig::default()
        };
        let base = match initial.aspl_frac() {
            Ok(a) => frac_f64(a),
            Err(_) => return cfg,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let mut scratch = initial.clone();
        let edges = initial.edges();
        let mut uphill = Vec::new();
        for _ in 0..PREFIX {
            let Some(swap) = propose_double_swap(&scratch, &edges, &mut rng, &admissible) else {
                continue;
            };
            swap.apply(&mut scratch);
            if let Ok(a) = scratch.aspl_frac() {
                let d = frac_f64(a) - base;
                if d > 0.0 {
                    uphill.push(d);
                }
            }
            swap.inverse().apply(&mut scratch);
        }
        if !uphill.is_empty() {
            uphill.sort_by(|a, b| a.total_cmp(b));
            cfg.initial_temperature = uphill[uphill.len() / 2] / std::f64::consts::LN_2;
        }
        cfg
    }
}

/// One accepted point of an annealing run, or one candidate of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub step: usize,
    pub temperature: f64,
    pub current: f64,
    pub best: f64,
}

/// Outcome of a search: the best topology seen, its ASPL recomputed from
/// scratch, the trajectory, and the seed that reproduces the run.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best: Topology,
    pub best_aspl: f64,
    pub trace: Vec<TracePoint>,
    pub seed: u64,
}

fn sweep_result(best: Topology, evals: &[(usize, Frac)]) -> SearchResult {
    let mut trace = Vec::with_capacity(evals.len());
    let mut running = f64::INFINITY;
    for &(step, a) in evals {
        let current = frac_f64(a);
        running = running.min(current);
        trace.push(TracePoint {
            step,
            temperature: 0.0,
            current,
            best: running,
        });
    }
    SearchResult {
        best_aspl: running,
        best,
        trace,
        seed: 0,
    }
}

/// Exhaustive sweep of [`offset_torus`] offsets, minimizing ASPL. Returns
/// the winning offset (smallest on ties) alongside the sweep result.
pub fn offset_search_deg4(c: Constellation) -> Result<(usize, SearchResult)> {
    if c.n_s < 3 {
        return Err(Error::InvalidArgument(format!(
            "offset sweep needs at least 3 rows, got {}",
            c.n_s
        )));
    }
    let mut evals: Vec<(usize, Frac)> = (0..c.n_s)
        .into_par_iter()
        .filter_map(|omega| {
            let g = offset_torus(c, omega).ok()?;
            Some((omega, g.aspl_frac().ok()?))
        })
        .collect();
    evals.sort_unstable_by_key(|&(omega, _)| omega);
    let &(best_omega, _) = evals
        .iter()
        .min_by_key(|&&(omega, a)| (a, omega))
        .ok_or(Error::NoFeasibleOffset {
            n_s: c.n_s,
            n_o: c.n_o,
        })?;
    let best = offset_torus(c, best_omega)?;
    Ok((best_omega, sweep_result(best, &evals)))
}

/// Which jump sets the degree-3 sweep ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deg3Space {
    /// `{(1,0), (a,0), (b,1)}` for every odd `a` in `[3, n_s)` and every
    /// `b` in `[0, n_s)`.
    Wide,
    /// The honeycomb's ring jumps with a swept cross link:
    /// `{(1,0), (n_s-1,0), (b,1)}`.
    HoneycombOffset,
}

/// Exhaustive degree-3 sweep over [`Deg3Space::Wide`].
pub fn offset_search_deg3(c: Constellation) -> Result<(Vec<Jump>, SearchResult)> {
    offset_search_deg3_in(c, Deg3Space::Wide)
}

/// Sweeps jump sets `{(1,0), (a,0), (b,1)}` under the row-parity split,
/// keeping candidates that build as simple 3-regular connected graphs and
/// minimizing ASPL; ties go to the lexicographically smallest `(a, b)`.
pub fn offset_search_deg3_in(
    c: Constellation,
    space: Deg3Space,
) -> Result<(Vec<Jump>, SearchResult)> {
    if c.n_s < 4 || !c.n_s.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "degree-3 sweep needs an even row count of at least 4, got {}",
            c.n_s
        )));
    }
    let a_values: Vec<usize> = match space {
        Deg3Space::Wide => (3..c.n_s).step_by(2).collect(),
        Deg3Space::HoneycombOffset => vec![c.n_s - 1],
    };
    let jumps_for = |a: usize, b: usize| {
        vec![
            Jump::new(1, 0),
            Jump::new(a as i64, 0),
            Jump::new(b as i64, 1),
        ]
    };
    let mut evals: Vec<((usize, usize), Frac)> = a_values
        .into_par_iter()
        .flat_map_iter(|a| (0..c.n_s).map(move |b| (a, b)))
        .filter_map(|(a, b)| {
            let g = build_odd(c, &jumps_for(a, b), PartitionRule::RowParity).ok()?;
            Some(((a, b), g.aspl_frac().ok()?))
        })
        .collect();
    evals.sort_unstable_by_key(|&(ab, _)| ab);
    let &((a, b), _) = evals
        .iter()
        .min_by_key(|&&(ab, aspl)| (aspl, ab))
        .ok_or(Error::NoFeasibleJumpSet {
            n_s: c.n_s,
            n_o: c.n_o,
        })?;
    let jumps = jumps_for(a, b);
    let best = build_odd(c, &jumps, PartitionRule::RowParity)?;
    let indexed: Vec<(usize, Frac)> = evals
        .iter()
        .enumerate()
        .map(|(i, &(_, aspl))| (i, aspl))
        .collect();
    Ok((jumps, sweep_result(best, &indexed)))
}

/// In-flight state of one sampling attempt.
struct PairingState {
    residual: Vec<usize>,
    /// Nodes with residual capacity.
    active: Vec<usize>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl PairingState {
    fn new(k: usize, delta: usize) -> PairingState {
        PairingState {
            residual: vec![delta; k],
            active: (0..k).collect(),
            adj: vec![Vec::with_capacity(delta); k],
            edges: Vec::with_capacity(k * delta / 2),
        }
    }

    /// Consumes one stub each at active positions `i` and `j` (two stubs at
    /// one position when they coincide), retiring saturated nodes.
    fn consume(&mut self, i: usize, j: usize) {
        if i == j {
            let node = self.active[i];
            self.residual[node] -= 2;
            if self.residual[node] == 0 {
                self.active.swap_remove(i);
            }
            return;
        }
        for idx in [i.max(j), i.min(j)] {
            let node = self.active[idx];
            self.residual[node] -= 1;
            if self.residual[node] == 0 {
                self.active.swap_remove(idx);
            }
        }
    }

    fn connect(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.edges.push((u.min(v), u.max(v)));
    }

    /// Any admissible non-adjacent pair left among active nodes?
    fn pair_feasible(&self, admissible: &dyn Fn(usize, usize) -> bool) -> bool {
        self.active.iter().enumerate().any(|(x, &p)| {
            self.active[x + 1..]
                .iter()
                .any(|&q| !self.adj[p].contains(&q) && admissible(p, q))
        })
    }

    /// Finishes leftover stubs once no acceptable pair remains: repeatedly
    /// rewires an existing edge `(a, b)` into `(u, a)` and `(v, b)` for
    /// leftover nodes `u`, `v` (possibly the same node twice). Degrees of
    /// `a` and `b` are unchanged, so each success pairs off two stubs.
    /// Returns false when the try budget runs out.
    fn drain_by_repair(
        &mut self,
        rng: &mut ChaCha8Rng,
        admissible: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        const REPAIR_TRIES: usize = 4096;
        let mut tries = 0;
        while !self.active.is_empty() {
            tries += 1;
            if tries > REPAIR_TRIES || self.edges.is_empty() {
                return false;
            }
            let i = rng.gen_range(0..self.active.len());
            let j = rng.gen_range(0..self.active.len());
            let (u, v) = (self.active[i], self.active[j]);
            if u == v && self.residual[u] < 2 {
                continue;
            }
            let at = rng.gen_range(0..self.edges.len());
            let (mut a, mut b) = self.edges[at];
            if rng.gen_bool(0.5) {
                std::mem::swap(&mut a, &mut b);
            }
            if a == u || a == v || b == u || b == v {
                continue;
            }
            if self.adj[u].contains(&a) || self.adj[v].contains(&b) {
                continue;
            }
            if !admissible(u, a) || !admissible(v, b) {
                continue;
            }
            self.edges.swap_remove(at);
            let off = self.adj[a].iter().position(|&x| x == b).expect("edge listed");
            self.adj[a].swap_remove(off);
            let off = self.adj[b].iter().position(|&x| x == a).expect("edge listed");
            self.adj[b].swap_remove(off);
            self.connect(u, a);
            self.connect(v, b);
            self.consume(i, j);
        }
        true
    }
}

/// One attempt at a simple `delta`-regular graph on `k` labeled vertices:
/// draw uniform vertex pairs among those with residual capacity and accept
/// distinct non-adjacent admissible pairs. Once no acceptable pair remains
/// (under a tight range constraint the last few leftover nodes are usually
/// mutually out of range), leftover stubs are finished by degree-preserving
/// edge rewires; `None` if that fails too.
pub(crate) fn sample_edges_once(
    k: usize,
    delta: usize,
    rng: &mut ChaCha8Rng,
    admissible: &dyn Fn(usize, usize) -> bool,
) -> Option<Vec<(usize, usize)>> {
    let mut s = PairingState::new(k, delta);
    let mut streak = 0;
    while !s.active.is_empty() {
        if s.active.len() == 1 {
            return s.drain_by_repair(rng, admissible).then_some(s.edges);
        }
        let i = rng.gen_range(0..s.active.len());
        let j = rng.gen_range(0..s.active.len());
        let (u, v) = (s.active[i], s.active[j]);
        if u == v || s.adj[u].contains(&v) || !admissible(u, v) {
            streak += 1;
            if streak > REJECTION_STREAK {
                if !s.pair_feasible(admissible) {
                    return s.drain_by_repair(rng, admissible).then_some(s.edges);
                }
                streak = 0;
            }
            continue;
        }
        streak = 0;
        s.connect(u, v);
        s.consume(i, j);
    }
    Some(s.edges)
}

/// Uniform-ish random simple `delta`-regular graph by repeated pair draws
/// with whole-construction restarts on dead ends. Deterministic per seed.
/// With `max_range`, only pairs within that toroidal distance on `c` are
/// admitted, and `c` is required.
pub fn sample_regular(
    n: usize,
    delta: usize,
    seed: u64,
    max_range: Option<f64>,
    c: Option<Constellation>,
) -> Result<Topology> {
    if delta == 0 || delta >= n {
        return Err(Error::InvalidArgument(format!(
            "degree {delta} impossible on {n} nodes"
        )));
    }
    if !(n * delta).is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "no {delta}-regular graph on {n} nodes: odd total degree"
        )));
    }
    let c = match (max_range, c) {
        (Some(_), None) => {
            return Err(Error::InvalidArgument(
                "a range constraint needs a constellation for the metric".into(),
            ))
        }
        (_, Some(c)) if c.n() != n => {
            return Err(Error::InvalidArgument(format!(
                "constellation has {} nodes, sampler asked for {n}",
                c.n()
            )))
        }
        (_, Some(c)) => c,
        (None, None) => Constellation::new(n, 1),
    };
    let admissible = |u: usize, v: usize| match max_range {
        Some(r) => c.toroidal_distance(c.point(u as u32), c.point(v as u32)) <= r,
        None => true,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLE_RESTART_CAP {
        let Some(edges) = sample_edges_once(n, delta, &mut rng, &admissible) else {
            continue;
        };
        let edges = edges.into_iter().map(|(u, v)| (u as u32, v as u32));
        let params = json!({ "n": n, "delta": delta, "seed": seed, "max_range": max_range });
        return Ok(Topology::from_edges(c, delta, edges)
            .expect("sampler only admits distinct non-adjacent pairs")
            .with_provenance("sample", params));
    }
    Err(Error::InfeasibleSample {
        n,
        delta,
        restarts: SAMPLE_RESTART_CAP,
    })
}

/// A degree-preserving two-edge swap: both removed edges exist, both added
/// edges are new, and all four endpoints are distinct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSwap {
    pub remove: [(u32, u32); 2],
    pub add: [(u32, u32); 2],
}

impl EdgeSwap {
    pub fn apply(&self, g: &mut Topology) {
        for (u, v) in self.remove {
            g.remove_edge_unchecked(u, v);
        }
        for (u, v) in self.add {
            g.add_edge_unchecked(u, v);
        }
    }

    /// The swap that undoes this one.
    pub fn inverse(&self) -> EdgeSwap {
        EdgeSwap {
            remove: self.add,
            add: self.remove,
        }
    }
}

/// Draws two distinct edges `(a,b)`, `(c,d)` and proposes replacing them
/// with `(a,c)`, `(b,d)` (endpoint roles flipped at random). Proposals
/// with shared endpoints, preexisting or inadmissible new edges are
/// resampled; after a bounded number of tries the draw is a no-op.
pub fn propose_double_swap(
    g: &Topology,
    edges: &[(u32, u32)],
    rng: &mut ChaCha8Rng,
    admissible: &impl Fn(u32, u32) -> bool,
) -> Option<EdgeSwap> {
    for _ in 0..SWAP_ATTEMPTS {
        let e1 = rng.gen_range(0..edges.len());
        let e2 = rng.gen_range(0..edges.len());
        if e1 == e2 {
            continue;
        }
        let (a, b) = edges[e1];
        let (mut c, mut d) = edges[e2];
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut c, &mut d);
        }
        if a == c || a == d || b == c || b == d {
            continue;
        }
        if g.has_edge(a, c) || g.has_edge(b, d) {
            continue;
        }
        if !admissible(a, c) || !admissible(b, d) {
            continue;
        }
        return Some(EdgeSwap {
            remove: [edges[e1], edges[e2]],
            add: [(a.min(c), a.max(c)), (b.min(d), b.max(d))],
        });
    }
    None
}

/// Simulated annealing on ASPL over edge swaps with Metropolis acceptance.
/// Disconnecting proposals score infinity and are always rejected, so every
/// accepted graph stays simple, regular, connected, and range-feasible.
/// Returns the best topology ever accepted; never worse than `initial`.
pub fn anneal(initial: &Topology, cfg: &AnnealConfig) -> Result<SearchResult> {
    let positive = |x: f64| x.is_finite() && x > 0.0;
    if !positive(cfg.initial_temperature)
        || !positive(cfg.min_temperature)
        || !(cfg.cooling_factor > 0.0 && cfg.cooling_factor < 1.0)
    {
        return Err(Error::InvalidArgument(format!(
            "non-terminating annealing schedule: {cfg:?}"
        )));
    }
    if !initial.validate().is_valid() {
        return Err(Error::InvalidArgument(
            "annealing needs a simple regular connected start".into(),
        ));
    }
    let c = initial.constellation();
    let admissible = |u: u32, v: u32| match cfg.max_range {
        Some(r) => c.toroidal_distance(c.point(u), c.point(v)) <= r,
        None => true,
    };
    let mut edges = initial.edges();
    if let Some(r) = cfg.max_range {
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| c.toroidal_distance(c.point(u), c.point(v)) > r)
        {
            return Err(Error::InvalidArgument(format!(
                "starting edge ({u}, {v}) exceeds the range constraint {r}"
            )));
        }
    }

    let mut current = initial.clone();
    let mut cur = frac_f64(current.aspl_frac()?);
    let mut best = current.clone();
    let mut best_aspl = cur;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trace = vec![TracePoint {
        step: 0,
        temperature: cfg.initial_temperature,
        current: cur,
        best: best_aspl,
    }];
    let mut step = 0;
    let mut t = cfg.initial_temperature;
    while t > cfg.min_temperature {
        for _ in 0..cfg.steps_per_temperature {
            step += 1;
            let Some(swap) = propose_double_swap(&current, &edges, &mut rng, &admissible) else {
                continue;
            };
            swap.apply(&mut current);
            let proposed = match current.aspl_frac() {
                Ok(a) => frac_f64(a),
                Err(Error::DisconnectedGraph { .. }) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            if proposed <= cur || rng.gen::<f64>() < ((cur - proposed) / t).exp() {
                cur = proposed;
                for (slot, added) in swap.remove.iter().zip(swap.add) {
                    let at = edges.iter().position(|e| e == slot).expect("edge tracked");
                    edges[at] = added;
                }
                if cur < best_aspl {
                    best_aspl = cur;
                    best = current.clone();
                }
                trace.push(TracePoint {
                    step,
                    temperature: t,
                    current: cur,
                    best: best_aspl,
                });
            } else {
                swap.inverse().apply(&mut current);
            }
            if cfg!(debug_assertions) && step % 1024 == 0 {
                let report = current.validate();
                debug_assert!(report.is_simple && report.is_regular);
            }
        }
        t *= cfg.cooling_factor;
    }
    let recomputed = frac_f64(best.aspl_frac()?);
    debug_assert_eq!(recomputed, best_aspl);
    Ok(SearchResult {
        best,
        best_aspl: recomputed,
        trace,
        seed: cfg.seed,
    })
}
