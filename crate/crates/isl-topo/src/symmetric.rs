//! Vertex-symmetric topology constructions from jump sets.
//!
//! An even-size jump set applies every jump in both directions from every
//! node. An odd-size jump set instead splits the nodes into two equal halves
//! by a parity rule; nodes in one half apply the jumps forward, nodes in the
//! other backward, and the construction verifies that the result is a simple
//! regular graph, which is exactly the condition for the motif to repeat at
//! every node.

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::lattice::{Constellation, Jump, LatticePoint};

/// Which parity rule splits the nodes into the two equal halves used by
/// odd-degree jump sets. The rule must be consistent under wraparound, so
/// each variant requires the axes it reads to have even length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionRule {
    RowParity,
    ColParity,
    /// Parity of `row + col`, the two-coloring of the lattice.
    Checkerboard,
}

impl PartitionRule {
    fn check_even_split(self, c: Constellation) -> std::result::Result<(), String> {
        let bad = |axis: &str, len: usize| {
            Err(format!(
                "{self:?} needs an even {axis} count, got {len} on a {} x {} lattice",
                c.n_s, c.n_o
            ))
        };
        match self {
            PartitionRule::RowParity if !c.n_s.is_multiple_of(2) => bad("row", c.n_s),
            PartitionRule::ColParity if !c.n_o.is_multiple_of(2) => bad("column", c.n_o),
            PartitionRule::Checkerboard if !c.n_s.is_multiple_of(2) => bad("row", c.n_s),
            PartitionRule::Checkerboard if !c.n_o.is_multiple_of(2) => bad("column", c.n_o),
            _ => Ok(()),
        }
    }

    /// 0 for the forward-applying half, 1 for the backward-applying half.
    pub fn side(self, p: LatticePoint) -> usize {
        match self {
            PartitionRule::RowParity => p.row % 2,
            PartitionRule::ColParity => p.col % 2,
            PartitionRule::Checkerboard => (p.row + p.col) % 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            PartitionRule::RowParity => "row_parity",
            PartitionRule::ColParity => "col_parity",
            PartitionRule::Checkerboard => "checkerboard",
        }
    }
}

fn distinct_nonzero_offsets(c: Constellation, offsets: &[LatticePoint]) -> std::result::Result<(), String> {
    let zero = LatticePoint::new(0, 0);
    if let Some(e) = offsets.iter().find(|&&o| o == zero) {
        return Err(format!(
            "offset {e:?} vanishes modulo the {} x {} lattice",
            c.n_s, c.n_o
        ));
    }
    let mut seen = offsets.to_vec();
    seen.sort_unstable();
    for pair in seen.windows(2) {
        if pair[0] == pair[1] {
            return Err(format!(
                "offsets collide at {:?} modulo the {} x {} lattice",
                pair[0], c.n_s, c.n_o
            ));
        }
    }
    Ok(())
}

/// Builds the topology in which every node is adjacent to `v + e` and
/// `v - e` for each jump `e`. Degree is twice the jump count.
pub fn build_even(c: Constellation, jumps: &[Jump]) -> Result<Topology> {
    if jumps.is_empty() {
        return Err(Error::DegenerateJumpSet("empty jump set".into()));
    }
    let mut offsets = Vec::with_capacity(2 * jumps.len());
    for &e in jumps {
        offsets.push(c.reduce(e));
        offsets.push(c.reduce(e.negated()));
    }
    distinct_nonzero_offsets(c, &offsets).map_err(Error::DegenerateJumpSet)?;

    let delta = offsets.len();
    let mut edges = Vec::with_capacity(c.n() * jumps.len());
    for v in c.points() {
        let a = c.index(v);
        for o in &offsets {
            let b = c.index(c.wrap_add(v, Jump::new(o.row as i64, o.col as i64)));
            if a < b {
                edges.push((a, b));
            }
        }
    }
    let params = json!({ "jumps": jumps.iter().map(|e| [e.d_row, e.d_col]).collect::<Vec<_>>() });
    Ok(Topology::from_edges(c, delta, edges)
        .expect("distinct nonzero offsets generate a simple graph")
        .with_provenance("even_jumps", params))
}

/// Builds the topology in which nodes on the rule's even side are adjacent
/// to `v + e` and nodes on the odd side to `v - e` for each jump `e`. Degree
/// is the (odd) jump count. The construction validates that the generated
/// graph is simple and regular, which fails exactly when a jump that maps a
/// side to itself lacks its negation in the set.
pub fn build_odd(c: Constellation, jumps: &[Jump], rule: PartitionRule) -> Result<Topology> {
    let delta = jumps.len();
    if delta == 0 || delta.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "odd-size jump set required, got {delta} jumps"
        )));
    }
    rule.check_even_split(c).map_err(Error::InvalidPartition)?;
    let offsets: Vec<LatticePoint> = jumps.iter().map(|&e| c.reduce(e)).collect();
    distinct_nonzero_offsets(c, &offsets).map_err(Error::AsymmetricJumpSet)?;

    let mut edges = BTreeSet::new();
    for v in c.points() {
        let a = c.index(v);
        for &e in jumps {
            let u = if rule.side(v) == 0 {
                c.wrap_add(v, e)
            } else {
                c.wrap_sub(v, e)
            };
            let b = c.index(u);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let t = Topology::from_edges(c, delta, edges)
        .expect("deduplicated nonzero-offset edges form a simple graph");
    if let Some(v) = (0..t.n() as u32).find(|&v| t.degree(v) != delta) {
        return Err(Error::AsymmetricJumpSet(format!(
            "node {v} has degree {} instead of {delta}; the motif does not repeat",
            t.degree(v)
        )));
    }
    let params = json!({
        "jumps": jumps.iter().map(|e| [e.d_row, e.d_col]).collect::<Vec<_>>(),
        "partition": rule.name(),
    });
    Ok(t.with_provenance("odd_jumps", params))
}

/// 4-regular grid with wraparound: jumps `(1,0)` and `(0,1)`.
pub fn mesh_grid(c: Constellation) -> Result<Topology> {
    Ok(build_even(c, &[Jump::new(1, 0), Jump::new(0, 1)])?
        .with_provenance("mesh", json!({ "n_s": c.n_s, "n_o": c.n_o })))
}

/// 3-regular honeycomb in brick-wall form: full rings along the `n_s` axis,
/// with each node's single cross-ring link pointing right on one
/// checkerboard color and left on the other. Requires both side counts
/// even. Diameter is `n_s/2 + n_o/2` when `n_s >= n_o`; cross-ring travel
/// on wider lattices pays extra parity hops on top of that.
pub fn honeycomb(c: Constellation) -> Result<Topology> {
    Ok(build_odd(
        c,
        &[Jump::new(1, 0), Jump::new(-1, 0), Jump::new(0, 1)],
        PartitionRule::Checkerboard,
    )?
    .with_provenance("honeycomb", json!({ "n_s": c.n_s, "n_o": c.n_o })))
}

/// 4-regular topology from jumps `(1,0)` and `(omega,1)`: vertical rings
/// plus inter-plane links shifted `omega` rows per column. `omega = 0`
/// recovers the mesh grid.
pub fn offset_torus(c: Constellation, omega: usize) -> Result<Topology> {
    if omega >= c.n_s {
        return Err(Error::InvalidArgument(format!(
            "offset {omega} outside [0, {})",
            c.n_s
        )));
    }
    Ok(build_even(c, &[Jump::new(1, 0), Jump::new(omega as i64, 1)])?
        .with_provenance("offset", json!({ "omega": omega })))
}

/// Offset heuristic `round(sqrt(2 n_s / n_o) - 1)`, clamped to `[0, n_s)`;
/// exact when `n_s / n_o` is half a perfect square. Rounds half up.
pub fn sqrt_offset(c: Constellation) -> Result<usize> {
    if c.n_s < c.n_o {
        return Err(Error::InvalidArgument(format!(
            "offset heuristic needs n_s >= n_o, got {} x {}",
            c.n_s, c.n_o
        )));
    }
    let exact = (2.0 * c.n_s as f64 / c.n_o as f64).sqrt() - 1.0;
    let rounded = (exact + 0.5).floor().max(0.0) as usize;
    Ok(rounded.min(c.n_s.saturating_sub(1)))
}

/// Circulant graph on `Z_n`: node `i` is adjacent to `i +- j` for each jump
/// `j`. Jumps must be distinct in `(0, n)`, and no two jumps (including a
/// jump with itself) may sum to `n`, which would collapse edges.
pub fn circulant(n: usize, jumps: &[usize]) -> Result<Topology> {
    for &j in jumps {
        if j == 0 || j >= n {
            return Err(Error::DegenerateJumpSet(format!(
                "circulant jump {j} outside (0, {n})"
            )));
        }
    }
    for (i, &a) in jumps.iter().enumerate() {
        for &b in &jumps[i..] {
            if (a + b) % n == 0 {
                return Err(Error::DegenerateJumpSet(format!(
                    "circulant jumps {a} and {b} sum to {n}, collapsing edges"
                )));
            }
        }
    }
    let c = Constellation::new(n, 1);
    let js: Vec<Jump> = jumps.iter().map(|&j| Jump::new(j as i64, 0)).collect();
    Ok(build_even(c, &js)?.with_provenance("circulant", json!({ "n": n, "jumps": jumps })))
}

/// Smallest jump width `w` such that consecutive jumps `{w, w+1}` give a
/// bound-meeting circulant on `n` nodes, together with a check that `n`
/// falls inside the width's validity window.
pub fn coprime_width(n: usize) -> Result<usize> {
    let mut w = 1;
    while 2 * (w + 1) * (w + 1) < n {
        w += 1;
    }
    let lo = (4 * w * w + 1) as f64 / 2.0;
    if (n as f64) < lo {
        return Err(Error::WindowViolation {
            n,
            w,
            lo,
            hi: 2 * (w + 1) * (w + 1),
        });
    }
    Ok(w)
}

/// Bound-meeting 4-regular topology for lattices with coprime sides: builds
/// the circulant `C_N(w, w+1)` and relabels node `x` to the lattice node
/// `(x mod n_s, x mod n_o)`, a bijection by the Chinese remainder theorem
/// that maps circulant jumps to lattice jumps.
pub fn coprime_circulant(c: Constellation) -> Result<Topology> {
    if gcd(c.n_s, c.n_o) != 1 {
        return Err(Error::NotCoprime {
            n_s: c.n_s,
            n_o: c.n_o,
        });
    }
    let n = c.n();
    if n <= 6 {
        return Err(Error::InvalidArgument(format!(
            "coprime construction needs more than 6 nodes, got {n}"
        )));
    }
    let w = coprime_width(n)?;
    let ring = circulant(n, &[w, w + 1])?;
    let relabel = |x: u32| -> u32 {
        let x = x as usize;
        ((x % c.n_s) * c.n_o + (x % c.n_o)) as u32
    };
    let edges: Vec<(u32, u32)> = ring
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (relabel(u), relabel(v));
            (a.min(b), a.max(b))
        })
        .collect();
    let params = json!({
        "w": w,
        "jumps": [
            [w % c.n_s, w % c.n_o],
            [(w + 1) % c.n_s, (w + 1) % c.n_o],
        ],
    });
    Ok(Topology::from_edges(c, 4, edges)
        .expect("relabeling by a bijection preserves simplicity")
        .with_provenance("coprime", params))
}

/// Bound-meeting 3-regular topology on a `6k x k` lattice: jump set
/// `{(1,0), (3,0), (5,1)}` applied by row parity.
pub fn deg3_sixfold(n_o: usize) -> Result<Topology> {
    if n_o == 0 {
        return Err(Error::InvalidArgument("need at least one column".into()));
    }
    let c = Constellation::new(6 * n_o, n_o);
    Ok(build_odd(
        c,
        &[Jump::new(1, 0), Jump::new(3, 0), Jump::new(5, 1)],
        PartitionRule::RowParity,
    )?
    .with_provenance("d3_sixfold", json!({ "n_o": n_o })))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
