//! Net designs induced by an augmented MOLS family.
//!
//! Points are the integers `0..d²`, read as exponent pairs through `point = m·d + n`.
//! Row 0 groups points by `m`, row 1 by `n`, and each square `S` contributes a row whose
//! cell `k` is the graph of row `k` of `S`: `{ j·d + S[k][j] : j }`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::squares::MolsFamily;
use crate::weyl::ExponentPair;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetDesign {
    order: usize,
    /// `rows[r][c]` is the sorted list of points in cell `c` of row `r`.
    rows: Vec<Vec<Vec<usize>>>,
}

impl NetDesign {
    /// Wraps raw rows without checking them; see [`validate_net`].
    pub fn from_rows(order: usize, rows: Vec<Vec<Vec<usize>>>) -> Self {
        Self { order, rows }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[Vec<Vec<usize>>] {
        &self.rows
    }
}

/// The `d` exponent pairs of one cell, in ascending point order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentCell {
    pub order: usize,
    pub pairs: Vec<ExponentPair>,
}

impl ExponentCell {
    pub fn from_points(order: usize, points: &[usize]) -> Self {
        let pairs = points.iter().map(|&pt| decode_point(order, pt)).collect();
        Self { order, pairs }
    }
}

impl fmt::Display for ExponentCell {
    /// The concatenated `mn` rendering, e.g. `00 12 24`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|p| format!("{}{}", p.m, p.n)).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn encode_point(order: usize, pair: &ExponentPair) -> usize {
    pair.m * order + pair.n
}

pub fn decode_point(order: usize, point: usize) -> ExponentPair {
    ExponentPair::new(order, point / order, point % order)
}

/// Builds the `L + 2` rows without validation.
pub fn build_net(family: &MolsFamily) -> NetDesign {
    let d = family.order();
    let mut rows = Vec::with_capacity(family.len() + 2);
    rows.push((0..d).map(|m| (0..d).map(|n| m * d + n).collect()).collect());
    rows.push((0..d).map(|n| (0..d).map(|m| m * d + n).collect()).collect());
    for square in family.squares() {
        rows.push(
            (0..d)
                .map(|k| {
                    let mut cell: Vec<usize> = (0..d).map(|j| j * d + square.get(k, j)).collect();
                    cell.sort_unstable();
                    cell
                })
                .collect(),
        );
    }
    NetDesign { order: d, rows }
}

/// Builds the design and rejects it when the net invariants fail.
pub fn net_from_mols(family: &MolsFamily) -> Result<NetDesign> {
    let design = build_net(family);
    match validate_net(&design).violation {
        None => Ok(design),
        Some(v) => Err(Error::InvalidNet(v.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetViolation {
    TooFewRows(usize),
    CellCount {
        row: usize,
        found: usize,
    },
    CellSize {
        row: usize,
        cell: usize,
        found: usize,
    },
    /// Point outside `0..d²`, or covered twice within a row.
    NotPartition {
        row: usize,
        point: usize,
    },
    /// Cells from different rows meeting in other than exactly one point.
    Intersection {
        row_a: usize,
        cell_a: usize,
        row_b: usize,
        cell_b: usize,
        shared: Vec<usize>,
    },
}

impl fmt::Display for NetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetViolation::TooFewRows(n) => write!(f, "{n} rows, at least 2 required"),
            NetViolation::CellCount { row, found } => write!(f, "row {row} has {found} cells"),
            NetViolation::CellSize { row, cell, found } => write!(f, "row {row} cell {cell} has {found} points"),
            NetViolation::NotPartition { row, point } => {
                write!(f, "row {row} does not partition the points at {point}")
            }
            NetViolation::Intersection { row_a, cell_a, row_b, cell_b, shared } => write!(
                f,
                "row {row_a} cell {cell_a} and row {row_b} cell {cell_b} share {} points {shared:?}",
                shared.len()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetReport {
    pub violation: Option<NetViolation>,
}

impl NetReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that every row partitions `0..d²` into `d` cells of `d` points and that cells
/// of different rows meet in exactly one point.
pub fn validate_net(design: &NetDesign) -> NetReport {
    NetReport { violation: first_violation(design) }
}

fn first_violation(design: &NetDesign) -> Option<NetViolation> {
    let d = design.order;
    if design.rows.len() < 2 {
        return Some(NetViolation::TooFewRows(design.rows.len()));
    }
    // cell index of each point, per row
    let mut owner = vec![vec![usize::MAX; d * d]; design.rows.len()];
    for (r, row) in design.rows.iter().enumerate() {
        if row.len() != d {
            return Some(NetViolation::CellCount { row: r, found: row.len() });
        }
        for (c, cell) in row.iter().enumerate() {
            if cell.len() != d {
                return Some(NetViolation::CellSize { row: r, cell: c, found: cell.len() });
            }
            for &pt in cell {
                if pt >= d * d || owner[r][pt] != usize::MAX {
                    return Some(NetViolation::NotPartition { row: r, point: pt });
                }
                owner[r][pt] = c;
            }
        }
    }
    for ra in 0..design.rows.len() {
        for rb in ra + 1..design.rows.len() {
            for (ca, cell) in design.rows[ra].iter().enumerate() {
                let mut hits = vec![Vec::new(); d];
                for &pt in cell {
                    hits[owner[rb][pt]].push(pt);
                }
                if let Some((cb, shared)) = hits.into_iter().enumerate().find(|(_, s)| s.len() != 1) {
                    return Some(NetViolation::Intersection { row_a: ra, cell_a: ca, row_b: rb, cell_b: cb, shared });
                }
            }
        }
    }
    None
}

/// The cell through point 0 of every row.
pub fn representative_cells(design: &NetDesign) -> Vec<ExponentCell> {
    design
        .rows
        .iter()
        .filter_map(|row| row.iter().find(|cell| cell.contains(&0)))
        .map(|cell| ExponentCell::from_points(design.order, cell))
        .collect()
}
