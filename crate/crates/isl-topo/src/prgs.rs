//! Partitioned random graph sampling: 4-regular range-feasible topologies
//! on dense square lattices.
//!
//! The unit torus is cut into a `b x b` cell grid with `b` chosen so a
//! cell's diagonal fits the link range; any two nodes sharing a cell can
//! therefore always be linked. Adjacent cells are joined by one short
//! boundary edge per directed cell link, each cell's four connector nodes
//! are tied into a cycle, and the remaining nodes of every cell are wired
//! up by the random regular sampler with the connector cycle abstracted as
//! one degree-4 super-node. The result is simple, 4-regular, connected,
//! and every edge respects the range.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::bounds::moore_lb;
use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::lattice::Constellation;
use crate::search::sample_edges_once;
use crate::frac_f64;

/// Splitting constant for deriving independent per-cell RNG streams.
const SEED_STRIDE: u64 = 0x9E3779B97F4A7C15;

/// Per-cell sampling retries before the whole build restarts.
const CELL_RETRIES: usize = 16;

/// Forgives float dust when asserting edge lengths against the range.
const RANGE_SLACK: f64 = 1e-12;

/// Minimum nodes per cell: 4 connectors plus enough free nodes for a
/// 4-regular subgraph over the free nodes and the super-node.
const MIN_CELL_QUOTA: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrgsConfig {
    /// Link range on the unit torus, in (0, 1).
    pub r: f64,
    pub seed: u64,
    /// Whole-build restarts (reassign boundaries, resample cells) before
    /// giving up.
    pub restart_cap: usize,
}

impl PrgsConfig {
    pub fn new(r: f64, seed: u64) -> PrgsConfig {
        PrgsConfig {
            r,
            seed,
            restart_cap: 32,
        }
    }
}

/// Smallest cell-grid side `b` with `b >= sqrt(2) / r`, so the diagonal of
/// a `1/b` cell is within the link range.
pub fn cell_grid_side(r: f64) -> Result<usize> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "link range must be in (0, 1), got {r}"
        )));
    }
    let mut b = (std::f64::consts::SQRT_2 / r).ceil() as usize;
    while b > 2 && (b - 1) as f64 * r >= std::f64::consts::SQRT_2 {
        b -= 1;
    }
    Ok(b)
}

/// Maps every node to a cell of the `b x b` grid. Nodes whose position
/// lies exactly on a cell edge pick between the two touching cells
/// uniformly at random (independently per axis on corners).
pub fn grid_partition(c: Constellation, cfg: &PrgsConfig) -> Result<Vec<usize>> {
    let b = cell_grid_side(cfg.r)?;
    check_density(c, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(assign_cells(c, b, &mut rng))
}

fn check_density(c: Constellation, b: usize) -> Result<()> {
    if c.n_s != c.n_o {
        return Err(Error::InvalidArgument(format!(
            "cell partitioning needs a square lattice, got {} x {}",
            c.n_s, c.n_o
        )));
    }
    let cells = b * b;
    if !c.n().is_multiple_of(cells) || c.n() / cells < MIN_CELL_QUOTA {
        return Err(Error::IncompatibleDensity(format!(
            "{} nodes over {cells} cells needs a multiple of {cells} with at least {MIN_CELL_QUOTA} per cell",
            c.n()
        )));
    }
    Ok(())
}

fn assign_cells(c: Constellation, b: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    // Axis coordinate i sits at position i/n; it is on a cell edge exactly
    // when i*b is a multiple of n, in which case the cell below (toroidal)
    // is an equally valid home.
    let mut axis_cell = |i: usize, n: usize| {
        let cell = i * b / n;
        if (i * b).is_multiple_of(n) && rng.gen_bool(0.5) {
            (cell + b - 1) % b
        } else {
            cell
        }
    };
    let mut assignment = Vec::with_capacity(c.n());
    for p in c.points() {
        let cr = axis_cell(p.row, c.n_s);
        let cc = axis_cell(p.col, c.n_o);
        assignment.push(cr * b + cc);
    }
    assignment
}

/// Boundary edges and per-cell connector nodes.
#[derive(Debug, Clone)]
pub struct Connectors {
    /// One cross-cell edge per directed cell link (east and south of every
    /// cell), `2 b^2` in total.
    pub links: Vec<(u32, u32)>,
    /// The four connector endpoints inside each cell, in link order: own
    /// east, own south, west neighbor's east, north neighbor's south.
    pub per_cell: Vec<Vec<u32>>,
}

/// Picks, for every east and south link of every cell, the closest
/// cross-cell node pair whose endpoints are not already connectors of
/// their cells; ties break to the smallest indices. Every cell ends with
/// exactly four distinct connectors (on a 2 x 2 cell grid a neighbor pair
/// is linked twice, through two distinct node pairs).
pub fn boundary_connectors(
    c: Constellation,
    assignment: &[usize],
    b: usize,
) -> Result<Connectors> {
    let cells = b * b;
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); cells];
    for (v, &cell) in assignment.iter().enumerate() {
        members[cell].push(v as u32);
    }
    let mut used: Vec<Vec<u32>> = vec![Vec::new(); cells];
    let mut links = Vec::with_capacity(2 * cells);
    for cell in 0..cells {
        let (cr, cc) = (cell / b, cell % b);
        for neighbor in [cr * b + (cc + 1) % b, ((cr + 1) % b) * b + cc] {
            let (u, v) = closest_unused_pair(c, &members[cell], &members[neighbor], &used[cell], &used[neighbor])
                .ok_or(Error::ConnectorExhaustion {
                    cell,
                    available: members[cell].len() - used[cell].len(),
                    needed: 4,
                })?;
            used[cell].push(u);
            used[neighbor].push(v);
            links.push((u.min(v), u.max(v)));
        }
    }
    debug_assert!(used.iter().all(|u| u.len() == 4));
    Ok(Connectors {
        links,
        per_cell: used,
    })
}

fn closest_unused_pair(
    c: Constellation,
    from: &[u32],
    to: &[u32],
    used_from: &[u32],
    used_to: &[u32],
) -> Option<(u32, u32)> {
    let mut best: Option<(f64, u32, u32)> = None;
    for &u in from.iter().filter(|u| !used_from.contains(u)) {
        for &v in to.iter().filter(|v| !used_to.contains(v)) {
            let d = c.toroidal_distance(c.point(u), c.point(v));
            let better = match best {
                None => true,
                Some((bd, bu, bv)) => {
                    d.total_cmp(&bd).then(u.cmp(&bu)).then(v.cmp(&bv)).is_lt()
                }
            };
            if better {
                best = Some((d, u, v));
            }
        }
    }
    best.map(|(_, u, v)| (u, v))
}

/// Builds one range-feasible 4-regular topology. Restarts the whole
/// construction (fresh boundary assignment and samples) on dead ends or a
/// disconnected result, up to the configured cap.
pub fn prgs_build(c: Constellation, cfg: &PrgsConfig) -> Result<Topology> {
    let b = cell_grid_side(cfg.r)?;
    check_density(c, b)?;
    let mut last_err = None;
    for restart in 0..cfg.restart_cap {
        let run_seed = cfg.seed.wrapping_add((restart as u64).wrapping_mul(SEED_STRIDE));
        match prgs_attempt(c, b, run_seed) {
            Ok(Some(g)) => {
                assert_edges_in_range(c, &g, cfg.r)?;
                let params = json!({ "r": cfg.r, "seed": cfg.seed, "b": b });
                return Ok(g.with_provenance("prgs", params));
            }
            Ok(None) => {} // disconnected or a cell dead-ended; try again
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(Error::InfeasibleSample {
        n: c.n(),
        delta: 4,
        restarts: cfg.restart_cap,
    }))
}

fn prgs_attempt(c: Constellation, b: usize, run_seed: u64) -> Result<Option<Topology>> {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    let assignment = assign_cells(c, b, &mut rng);
    let connectors = boundary_connectors(c, &assignment, b)?;

    let cells = b * b;
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); cells];
    for (v, &cell) in assignment.iter().enumerate() {
        members[cell].push(v as u32);
    }
    let cell_edges: Vec<Option<Vec<(u32, u32)>>> = (0..cells)
        .into_par_iter()
        .map(|cell| {
            let seed = run_seed ^ (cell as u64 + 1).wrapping_mul(SEED_STRIDE);
            sample_cell(
                &members[cell],
                &connectors.per_cell[cell],
                &mut ChaCha8Rng::seed_from_u64(seed),
            )
        })
        .collect();
    let mut edges = connectors.links.clone();
    for sampled in cell_edges {
        match sampled {
            Some(mut e) => edges.append(&mut e),
            None => return Ok(None),
        }
    }
    let g = Topology::from_edges(c, 4, edges)
        .expect("cell-disjoint samples and distinct connectors stay simple");
    if !g.validate().is_connected {
        return Ok(None);
    }
    Ok(Some(g))
}

/// Wires one cell: the connector cycle, a 4-regular sample over the free
/// nodes plus a super-node standing in for that cycle, and the expansion
/// of the super-node's edges onto the connectors' free links.
fn sample_cell(
    members: &[u32],
    connectors: &[u32],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<(u32, u32)>> {
    let free: Vec<u32> = members
        .iter()
        .copied()
        .filter(|v| !connectors.contains(v))
        .collect();
    let k = free.len() + 1;
    let super_node = free.len();
    if k <= 4 {
        return None; // boundary randomization drained the cell
    }
    let sampled = (0..CELL_RETRIES)
        .find_map(|_| sample_edges_once(k, 4, rng, &|_, _| true))?;

    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(2 * members.len() + 4);
    for w in connectors.windows(2) {
        edges.push((w[0].min(w[1]), w[0].max(w[1])));
    }
    let (first, last) = (connectors[0], connectors[3]);
    edges.push((first.min(last), first.max(last)));

    let mut slots = [0, 1, 2, 3];
    slots.shuffle(rng);
    let mut next_slot = slots.iter();
    for (a, b) in sampled {
        if a == super_node || b == super_node {
            let other = free[if a == super_node { b } else { a }];
            let connector = connectors[*next_slot.next().expect("degree-4 super-node")];
            edges.push((connector.min(other), connector.max(other)));
        } else {
            let (u, v) = (free[a], free[b]);
            edges.push((u.min(v), u.max(v)));
        }
    }
    Some(edges)
}

fn assert_edges_in_range(c: Constellation, g: &Topology, r: f64) -> Result<()> {
    let budget = r * (1.0 + RANGE_SLACK);
    for (u, v) in g.edges() {
        let length = c.toroidal_distance(c.point(u), c.point(v));
        if length > budget {
            return Err(Error::RangeViolation {
                u,
                v,
                length,
                budget: r,
            });
        }
    }
    Ok(())
}

/// One size's entry in a scaling study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub median_aspl: f64,
    pub moore_lb: f64,
    pub ratio: f64,
}

/// Builds each square size with every seed and reports the median ASPL
/// against the degree-4 general lower bound.
pub fn scaling_report(r: f64, sizes: &[usize], seeds: &[u64]) -> Result<Vec<ScalingRow>> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("no seeds for the scaling run".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let side = (n as f64).sqrt().round() as usize;
        if side * side != n {
            return Err(Error::InvalidArgument(format!(
                "scaling sizes must be perfect squares, got {n}"
            )));
        }
        let c = Constellation::new(side, side);
        let mut aspls = Vec::with_capacity(seeds.len());
        for &seed in seeds {
            let g = prgs_build(c, &PrgsConfig::new(r, seed))?;
            aspls.push(g.aspl()?);
        }
        aspls.sort_by(|a, b| a.total_cmp(b));
        let median = if aspls.len() % 2 == 1 {
            aspls[aspls.len() / 2]
        } else {
            (aspls[aspls.len() / 2 - 1] + aspls[aspls.len() / 2]) / 2.0
        };
        let lb = frac_f64(moore_lb(n, 4).value);
        rows.push(ScalingRow {
            n,
            median_aspl: median,
            moore_lb: lb,
            ratio: median / lb,
        });
    }
    Ok(rows)
}
