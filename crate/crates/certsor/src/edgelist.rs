//! Edge-list text ingestion.
//!
//! Each non-blank line that does not start with `#` is `u v` or `u v weight`
//! with nonnegative integer node ids and a nonnegative weight. Duplicate arcs
//! are summed and the dimension is one more than the largest id.

use std::io::BufRead;

use certsor_core::SparseMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted node id; keeps a stray huge id from allocating the world.
pub const MAX_NODE_ID: u64 = u32::MAX as u64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeListOptions {
    /// Store arc `u -> v` at `(v, u)` instead of `(u, v)`.
    pub transpose: bool,
    /// Weight of lines without a third column.
    pub default_weight: f64,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        EdgeListOptions { transpose: false, default_weight: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphIngestSummary {
    pub node_count: usize,
    /// Arc lines read, before duplicates are summed.
    pub arc_count: usize,
    /// Nodes without an arc of positive weight leaving them.
    pub dangling_count: usize,
    pub transposed: bool,
}

fn parse_line(line: &str, lineno: usize, default_weight: f64) -> Result<Option<(u64, u64, f64)>> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let err = |message: String| Error::EdgeList { line: lineno, message };
    let mut fields = line.split_whitespace();
    let mut id = |name: &str| -> Result<u64> {
        let field = fields.next().ok_or_else(|| err(format!("missing {name} node id")))?;
        let id: u64 = field.parse().map_err(|_| err(format!("invalid {name} node id {field:?}")))?;
        if id > MAX_NODE_ID {
            return Err(err(format!("node id {id} exceeds {MAX_NODE_ID}")));
        }
        Ok(id)
    };
    let u = id("source")?;
    let v = id("target")?;
    let weight = match fields.next() {
        None => default_weight,
        Some(field) => {
            let w: f64 = field.parse().map_err(|_| err(format!("invalid weight {field:?}")))?;
            if w.is_nan() || w.is_infinite() {
                return Err(err(format!("weight {field:?} is not finite")));
            }
            if w < 0.0 {
                return Err(err(format!("negative weight {w}")));
            }
            w
        }
    };
    if let Some(extra) = fields.next() {
        return Err(err(format!("unexpected field {extra:?}")));
    }
    Ok(Some((u, v, weight)))
}

/// Reads an edge list into a matrix.
pub fn load_edge_list<R: BufRead>(source: R, opts: EdgeListOptions) -> Result<(SparseMatrix, GraphIngestSummary)> {
    if !(opts.default_weight.is_finite() && opts.default_weight >= 0.0) {
        return Err(Error::Usage(format!("default weight {} must be finite and nonnegative", opts.default_weight)));
    }
    let mut triplets = Vec::new();
    let mut max_id: Option<u64> = None;
    for (index, line) in source.lines().enumerate() {
        let lineno = index + 1;
        let line = line.map_err(|e| Error::EdgeList { line: lineno, message: e.to_string() })?;
        if let Some((u, v, w)) = parse_line(&line, lineno, opts.default_weight)? {
            max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
            let (row, col) = if opts.transpose { (v, u) } else { (u, v) };
            triplets.push((row as usize, col as usize, w));
        }
    }
    let n = max_id.map_or(0, |m| m as usize + 1);
    let arc_count = triplets.len();
    let matrix = SparseMatrix::from_triplets(n, triplets)?;
    let dangling_count = if opts.transpose {
        matrix.col_sums().iter().filter(|&&c| c == 0.0).count()
    } else {
        matrix.null_rows().count()
    };
    Ok((matrix, GraphIngestSummary { node_count: n, arc_count, dangling_count, transposed: opts.transpose }))
}
