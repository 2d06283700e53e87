//! Torus lattice model of a constellation.
//!
//! A constellation with `n_o` orbital planes (columns) of `n_s` satellites
//! each (rows) is the lattice `Z_{n_s} x Z_{n_o}` with wraparound in both
//! axes. For geometry the lattice embeds in the unit-area flat torus: node
//! `(i, j)` sits at `(i / n_s, j / n_o)`.

use serde::{Deserialize, Serialize};

/// Lattice dimensions: `n_s` rows (satellites per plane), `n_o` columns
/// (orbital planes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constellation {
    pub n_s: usize,
    pub n_o: usize,
}

/// A node of the lattice, with `0 <= row < n_s` and `0 <= col < n_o`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub row: usize,
    pub col: usize,
}

/// A relative move on the lattice; components may be negative or exceed the
/// lattice dimensions, and are reduced modulo the lattice when applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Jump {
    pub d_row: i64,
    pub d_col: i64,
}

impl Jump {
    pub const fn new(d_row: i64, d_col: i64) -> Self {
        Jump { d_row, d_col }
    }

    pub fn negated(self) -> Self {
        Jump::new(-self.d_row, -self.d_col)
    }
}

impl LatticePoint {
    pub const fn new(row: usize, col: usize) -> Self {
        LatticePoint { row, col }
    }
}

fn wrap(value: i64, modulus: usize) -> usize {
    debug_assert!(modulus > 0);
    value.rem_euclid(modulus as i64) as usize
}

impl Constellation {
    pub const fn new(n_s: usize, n_o: usize) -> Self {
        Constellation { n_s, n_o }
    }

    /// Total node count `n_s * n_o`.
    pub fn n(&self) -> usize {
        self.n_s * self.n_o
    }

    /// Canonical node numbering: `row * n_o + col`.
    pub fn index(&self, p: LatticePoint) -> u32 {
        debug_assert!(p.row < self.n_s && p.col < self.n_o);
        (p.row * self.n_o + p.col) as u32
    }

    /// Inverse of [`Constellation::index`].
    pub fn point(&self, index: u32) -> LatticePoint {
        let i = index as usize;
        debug_assert!(i < self.n());
        LatticePoint::new(i / self.n_o, i % self.n_o)
    }

    /// All lattice points in index order.
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (0..self.n()).map(|i| self.point(i as u32))
    }

    /// `v + e` with both components reduced to nonnegative remainders.
    pub fn wrap_add(&self, v: LatticePoint, e: Jump) -> LatticePoint {
        LatticePoint::new(
            wrap(v.row as i64 + e.d_row, self.n_s),
            wrap(v.col as i64 + e.d_col, self.n_o),
        )
    }

    /// `v - e`; inverse of [`Constellation::wrap_add`] for the same jump.
    pub fn wrap_sub(&self, v: LatticePoint, e: Jump) -> LatticePoint {
        self.wrap_add(v, e.negated())
    }

    /// Reduces a jump to its canonical offset `(d_row mod n_s, d_col mod n_o)`.
    pub fn reduce(&self, e: Jump) -> LatticePoint {
        LatticePoint::new(wrap(e.d_row, self.n_s), wrap(e.d_col, self.n_o))
    }

    /// Euclidean distance between the embeddings of `u` and `v` on the
    /// unit-area flat torus, i.e. with per-axis wraparound.
    pub fn toroidal_distance(&self, u: LatticePoint, v: LatticePoint) -> f64 {
        let dx = axis_distance(u.row, v.row, self.n_s);
        let dy = axis_distance(u.col, v.col, self.n_o);
        (dx * dx + dy * dy).sqrt()
    }
}

fn axis_distance(a: usize, b: usize, len: usize) -> f64 {
    let diff = (a as f64 - b as f64).abs() / len as f64;
    diff.min(1.0 - diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_add_reduces_both_axes() {
        let c = Constellation::new(7, 5);
        let p = c.wrap_add(LatticePoint::new(1, 2), Jump::new(4, 6));
        assert_eq!(p, LatticePoint::new(5, 3));

        let c = Constellation::new(4, 4);
        let p = c.wrap_add(LatticePoint::new(3, 3), Jump::new(1, 1));
        assert_eq!(p, LatticePoint::new(0, 0));
    }

    #[test]
    fn wrap_sub_uses_nonnegative_remainders() {
        let c = Constellation::new(7, 5);
        let p = c.wrap_sub(LatticePoint::new(1, 2), Jump::new(4, 6));
        assert_eq!(p, LatticePoint::new(4, 1));
    }

    #[test]
    fn toroidal_distance_picks_the_short_way_round() {
        let c = Constellation::new(4, 4);
        let d = c.toroidal_distance(LatticePoint::new(0, 0), LatticePoint::new(2, 0));
        assert!((d - 0.5).abs() < 1e-15);

        let c = Constellation::new(10, 10);
        let d = c.toroidal_distance(LatticePoint::new(0, 0), LatticePoint::new(9, 0));
        assert!((d - 0.1).abs() < 1e-15);

        let c = Constellation::new(6, 4);
        let d = c.toroidal_distance(LatticePoint::new(0, 0), LatticePoint::new(3, 2));
        assert!((d - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn index_round_trips() {
        let c = Constellation::new(6, 4);
        for i in 0..c.n() as u32 {
            assert_eq!(c.index(c.point(i)), i);
        }
        assert_eq!(c.index(LatticePoint::new(2, 3)), 11);
    }
}
