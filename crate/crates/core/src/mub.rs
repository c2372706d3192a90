//! Unbiasedness checks, MUB extraction and the maximum mutually-unbiased subset.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::net::{build_net, representative_cells, validate_net};
use crate::spectra::{class_seed, common_eigenbasis, joint_eigenbasis, tensor_weyl, weyl_matrix, Basis, ComplexMatrix};
use crate::squares::MolsFamily;
use crate::weyl::{cell_commutes, enumerate_classes, tensor_symplectic, Decomposition, ExponentPair};

pub const UNBIASED_TOL: f64 = 1e-8;
pub const MAX_WS_DIMENSION: usize = 35;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MubOptions {
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for MubOptions {
    fn default() -> Self {
        Self { seed: 0, tolerance: UNBIASED_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unbiasedness {
    pub unbiased: bool,
    /// `max_{i,j} | |⟨a_i|b_j⟩|² - 1/d |`
    pub deviation: f64,
}

pub fn is_unbiased(a: &Basis, b: &Basis, tol: f64) -> Result<Unbiasedness> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let target = 1.0 / a.dim() as f64;
    let overlaps = a.matrix().adjoint().matmul(b.matrix());
    let deviation = overlaps.as_slice().iter().map(|z| (z.norm_sqr() - target).abs()).fold(0.0, f64::max);
    Ok(Unbiasedness { unbiased: deviation <= tol, deviation })
}

/// Symmetric adjacency over labelled vertices, no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnbiasedGraph {
    labels: Vec<String>,
    adjacency: Vec<Vec<bool>>,
}

impl UnbiasedGraph {
    #[allow(clippy::needless_range_loop)]
    pub fn new(labels: Vec<String>, adjacency: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if adjacency.len() != n || adjacency.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("adjacency shape does not match vertex count".into()));
        }
        for i in 0..n {
            if adjacency[i][i] {
                return Err(Error::Invalid(format!("self-loop at vertex {i}")));
            }
            for j in 0..i {
                if adjacency[i][j] != adjacency[j][i] {
                    return Err(Error::Invalid(format!("asymmetric edge {j}-{i}")));
                }
            }
        }
        Ok(Self { labels, adjacency })
    }

    /// Unlabelled graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Invalid(format!("edge {a}-{b} out of range")));
            }
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        Self::new((0..n).map(|i| i.to_string()).collect(), adjacency)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adjacency
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clique {
    pub size: usize,
    pub vertices: Vec<usize>,
}

pub const MAX_CLIQUE_VERTICES: usize = 64;

/// Exact maximum clique by branch and bound with a greedy colouring bound.
pub fn max_clique(graph: &UnbiasedGraph) -> Result<Clique> {
    let n = graph.len();
    if n > MAX_CLIQUE_VERTICES {
        return Err(Error::GraphTooLarge(n));
    }
    let adj: Vec<u64> = graph
        .adjacency
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, &e)| e).fold(0u64, |acc, (j, _)| acc | (1 << j)))
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand(all, &adj, &mut current, &mut best);
    best.sort_unstable();
    Ok(Clique { size: best.len(), vertices: best })
}

fn expand(mut candidates: u64, adj: &[u64], current: &mut Vec<usize>, best: &mut Vec<usize>) {
    let (order, colors) = color_sort(candidates, adj);
    for i in (0..order.len()).rev() {
        if current.len() + colors[i] <= best.len() {
            return;
        }
        let v = order[i];
        current.push(v);
        let next = candidates & adj[v];
        if next == 0 {
            if current.len() > best.len() {
                best.clone_from(current);
            }
        } else {
            expand(next, adj, current, best);
        }
        current.pop();
        candidates &= !(1 << v);
    }
}

/// Greedy sequential colouring; returns vertices in non-decreasing colour order with
/// the colour (1-based) of each.
fn color_sort(candidates: u64, adj: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(candidates.count_ones() as usize);
    let mut colors = Vec::with_capacity(order.capacity());
    let mut uncolored = candidates;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut open = uncolored;
        while open != 0 {
            let v = open.trailing_zeros() as usize;
            open &= !(1 << v) & !adj[v];
            uncolored &= !(1 << v);
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub a: ExponentPair,
    pub b: ExponentPair,
    /// Symplectic value: mod `d` for plain labels, mod `p` for tensor labels.
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowVerdict {
    pub row: usize,
    /// Representative cell in the `mn` rendering.
    pub cell: String,
    pub commutes: bool,
    pub witness: Option<Witness>,
    /// Index into the report's bases, when the row produced one.
    pub basis: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Excluded {
    pub class: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MubReport {
    pub dimension: usize,
    pub n_bases: usize,
    pub bases: Vec<String>,
    pub row_verdicts: Vec<RowVerdict>,
    pub unbiased_matrix: Vec<Vec<bool>>,
    pub worst_deviation: f64,
    pub max_clique: Clique,
    pub excluded: Vec<Excluded>,
    /// Net invariant violation of the design the rows came from, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub net_violation: Option<String>,
    #[serde(skip)]
    pub basis_vectors: Vec<Basis>,
}

impl MubReport {
    fn assemble(dimension: usize, labelled: Vec<(String, Basis)>, tol: f64) -> Result<Self> {
        let n = labelled.len();
        let mut matrix = vec![vec![false; n]; n];
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let u = is_unbiased(&labelled[i].1, &labelled[j].1, tol)?;
                if u.unbiased {
                    matrix[i][j] = true;
                    matrix[j][i] = true;
                    worst = worst.max(u.deviation);
                }
            }
        }
        let (bases, basis_vectors): (Vec<_>, Vec<_>) = labelled.into_iter().unzip();
        let graph = UnbiasedGraph::new(bases.clone(), matrix.clone())?;
        let clique = max_clique(&graph)?;
        for (k, &a) in clique.vertices.iter().enumerate() {
            for &b in &clique.vertices[k + 1..] {
                if !is_unbiased(&basis_vectors[a], &basis_vectors[b], tol)?.unbiased {
                    return Err(Error::Invalid(format!("clique pair {a}-{b} failed re-verification")));
                }
            }
        }
        debug_assert!(clique.size <= dimension + 1);
        Ok(Self {
            dimension,
            n_bases: n,
            bases,
            row_verdicts: Vec::new(),
            unbiased_matrix: matrix,
            worst_deviation: worst,
            max_clique: clique,
            excluded: Vec::new(),
            net_violation: None,
            basis_vectors,
        })
    }

    pub fn graph(&self) -> UnbiasedGraph {
        UnbiasedGraph { labels: self.bases.clone(), adjacency: self.unbiased_matrix.clone() }
    }

    /// The bases of the reported maximum clique, in vertex order.
    pub fn clique_bases(&self) -> Vec<Basis> {
        self.max_clique.vertices.iter().map(|&v| self.basis_vectors[v].clone()).collect()
    }
}

/// Runs the design pipeline: representative cell per net row, commutation verdict, joint
/// eigenbasis for each commuting row, unbiasedness graph and maximum clique.
///
/// With a decomposition, labels are split into tensor digits and tested with the
/// tensor symplectic form.
pub fn design_mubs(
    family: &MolsFamily,
    decomposition: Option<&Decomposition>,
    options: &MubOptions,
) -> Result<MubReport> {
    let d = family.order();
    if let Some(dec) = decomposition {
        if dec.field().order() != d {
            return Err(Error::DimensionMismatch(d, dec.field().order()));
        }
    }
    let design = build_net(family);
    let cells = representative_cells(&design);
    let mut verdicts = Vec::with_capacity(cells.len());
    let mut labelled = Vec::new();
    let mut excluded = Vec::new();
    for (row, cell) in cells.iter().enumerate() {
        let (witness, ops): (Option<Witness>, Vec<ComplexMatrix>) = match decomposition {
            None => {
                let w = cell_commutes(cell).map(|nc| Witness { a: nc.a, b: nc.b, value: nc.value });
                let ops = cell.pairs.iter().filter(|p| !p.is_identity()).map(weyl_matrix).collect();
                (w, ops)
            }
            Some(dec) => {
                let labels = cell.pairs.iter().map(|p| dec.apply(p)).collect::<Result<Vec<_>>>()?;
                let mut w = None;
                'outer: for i in 0..labels.len() {
                    for j in i + 1..labels.len() {
                        let value = tensor_symplectic(&labels[i], &labels[j])?;
                        if value != 0 {
                            w = Some(Witness { a: cell.pairs[i], b: cell.pairs[j], value });
                            break 'outer;
                        }
                    }
                }
                let ops = cell
                    .pairs
                    .iter()
                    .zip(&labels)
                    .filter(|(p, _)| !p.is_identity())
                    .map(|(_, l)| tensor_weyl(l))
                    .collect();
                (w, ops)
            }
        };
        let mut basis_index = None;
        if witness.is_none() {
            match joint_eigenbasis(&ops, class_seed(options.seed, row as u64)) {
                Ok(b) => {
                    basis_index = Some(labelled.len());
                    labelled.push((format!("row {row}"), b));
                }
                Err(e) => excluded.push(Excluded { class: format!("row {row}"), reason: e.to_string() }),
            }
        } else {
            excluded.push(Excluded { class: format!("row {row}"), reason: "operators do not commute".into() });
        }
        verdicts.push(RowVerdict {
            row,
            cell: cell.to_string(),
            commutes: witness.is_none(),
            witness,
            basis: basis_index,
        });
    }
    let mut report = MubReport::assemble(d, labelled, options.tolerance)?;
    report.row_verdicts = verdicts;
    report.excluded = excluded;
    report.net_violation = validate_net(&design).violation.map(|v| v.to_string());
    Ok(report)
}

/// Maximum number of mutually unbiased joint eigenbases over every commuting class of
/// `X^m Z^n` operators in dimension `d`.
pub fn ws_mub_number(d: usize, options: &MubOptions) -> Result<MubReport> {
    if !(2..=MAX_WS_DIMENSION).contains(&d) {
        return Err(Error::OutOfRange(d, "Weyl-Schwinger MUB count supports 2 <= d <= 35"));
    }
    let mut labelled = Vec::new();
    let mut excluded = Vec::new();
    for (idx, class) in enumerate_classes(d)?.iter().enumerate() {
        match common_eigenbasis(class, class_seed(options.seed, idx as u64)) {
            Ok(b) => labelled.push((class.label(), b)),
            Err(e) => excluded.push(Excluded { class: class.label(), reason: e.to_string() }),
        }
    }
    let mut report = MubReport::assemble(d, labelled, options.tolerance)?;
    report.excluded = excluded;
    Ok(report)
}

/// Pairs the i-th basis of each list into `|a⟩ ⊗ |c⟩`; yields `min(N1, N2)` bases.
pub fn tensor_mub(first: &[Basis], second: &[Basis]) -> Result<Vec<Basis>> {
    if first.is_empty() || second.is_empty() {
        return Err(Error::Invalid("tensor construction needs nonempty basis lists".into()));
    }
    for list in [first, second] {
        if let Some(b) = list.iter().find(|b| b.dim() != list[0].dim()) {
            return Err(Error::DimensionMismatch(list[0].dim(), b.dim()));
        }
    }
    Ok(first.iter().zip(second).map(|(a, c)| a.tensor(c)).collect())
}
