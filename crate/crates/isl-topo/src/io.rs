//! Graph file format: JSON with the lattice shape, nominal degree, a
//! normalized edge list, and optional provenance.
//!
//! Loading rejects anything that is not a simple graph on the declared
//! node set; degree defects and disconnection are left to
//! [`Topology::validate`] so irregular graphs can still be inspected.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Provenance, Topology};
use crate::lattice::Constellation;

/// On-disk schema. Edges are `u < v` pairs in sorted order.
#[derive(Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub n_s: usize,
    pub n_o: usize,
    pub delta: usize,
    pub edges: Vec<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl GraphFile {
    pub fn from_topology(g: &Topology) -> GraphFile {
        let c = g.constellation();
        GraphFile {
            n_s: c.n_s,
            n_o: c.n_o,
            delta: g.delta(),
            edges: g.edges(),
            provenance: g.provenance().cloned(),
        }
    }

    pub fn into_topology(self) -> Result<Topology> {
        let c = Constellation::new(self.n_s, self.n_o);
        let g = Topology::from_edges(c, self.delta, self.edges)?;
        Ok(match self.provenance {
            Some(p) => g.with_provenance(&p.kind, p.params),
            None => g,
        })
    }
}

pub fn write_topology(path: impl AsRef<Path>, g: &Topology) -> Result<()> {
    let out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(out, &GraphFile::from_topology(g))?;
    Ok(())
}

pub fn read_topology(path: impl AsRef<Path>) -> Result<Topology> {
    let file: GraphFile = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    file.into_topology()
}
