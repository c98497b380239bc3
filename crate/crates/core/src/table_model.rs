//! Table shapes, adjacent-minor sets and the combinatorics of the model graph.
//!
//! Cells are addressed with 1-based `(row, col)` coordinates. Internally a
//! table is flattened row-major, so cell `(i, j)` of an `I x J` table sits at
//! index `(i - 1) * J + (j - 1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub rows: usize,
    pub cols: usize,
}

impl Shape {
    pub fn new(rows: usize, cols: usize) -> Self {
        Shape { rows, cols }
    }

    /// Number of cells, `I * J`.
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, cell: Cell) -> bool {
        (1..=self.rows).contains(&cell.row) && (1..=self.cols).contains(&cell.col)
    }

    /// Row-major position of `cell`.
    pub fn index(&self, cell: Cell) -> usize {
        debug_assert!(self.contains(cell));
        (cell.row - 1) * self.cols + (cell.col - 1)
    }

    pub fn cell(&self, index: usize) -> Cell {
        Cell::new(index / self.cols + 1, index % self.cols + 1)
    }

    /// All cells in lexicographic (row-major) order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.len()).map(move |k| self.cell(k))
    }

    pub fn is_border(&self, cell: Cell) -> bool {
        cell.row == 1 || cell.row == self.rows || cell.col == 1 || cell.col == self.cols
    }

    /// Number of adjacent minors, `(I - 1)(J - 1)`.
    pub fn minor_count(&self) -> usize {
        self.rows.saturating_sub(1) * self.cols.saturating_sub(1)
    }

    pub fn anchors(&self) -> impl Iterator<Item = MinorAnchor> + '_ {
        (1..self.rows).flat_map(move |i| (1..self.cols).map(move |j| MinorAnchor::new(i, j)))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// A cell of the table. The derived ordering is lexicographic: row, then column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl From<[usize; 2]> for Cell {
    fn from([row, col]: [usize; 2]) -> Self {
        Cell { row, col }
    }
}

impl From<Cell> for [usize; 2] {
    fn from(c: Cell) -> Self {
        [c.row, c.col]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// The adjacent minor `p[i,j] p[i+1,j+1] - p[i+1,j] p[i,j+1]`, identified by
/// its upper-left cell `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MinorAnchor(pub Cell);

impl MinorAnchor {
    pub const fn new(row: usize, col: usize) -> Self {
        MinorAnchor(Cell::new(row, col))
    }

    pub fn cell(&self) -> Cell {
        self.0
    }

    pub fn in_bounds(&self, shape: Shape) -> bool {
        let Cell { row, col } = self.0;
        row >= 1 && col >= 1 && row < shape.rows && col < shape.cols
    }

    /// Cells of the leading (`+`) monomial: `(i,j)` and `(i+1,j+1)`.
    pub fn positive_cells(&self) -> [Cell; 2] {
        let Cell { row, col } = self.0;
        [Cell::new(row, col), Cell::new(row + 1, col + 1)]
    }

    /// Cells of the trailing (`-`) monomial: `(i,j+1)` and `(i+1,j)`.
    pub fn negative_cells(&self) -> [Cell; 2] {
        let Cell { row, col } = self.0;
        [Cell::new(row, col + 1), Cell::new(row + 1, col)]
    }

    /// The four cells in lexicographic order.
    pub fn cells(&self) -> [Cell; 4] {
        let Cell { row, col } = self.0;
        [Cell::new(row, col), Cell::new(row, col + 1), Cell::new(row + 1, col), Cell::new(row + 1, col + 1)]
    }
}

impl fmt::Display for MinorAnchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A weakened independence model: a table shape and the set of adjacent
/// minors required to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorSet {
    shape: Shape,
    anchors: BTreeSet<MinorAnchor>,
}

impl MinorSet {
    /// Checks bounds and uniqueness of `anchors` and builds the model.
    pub fn validate(shape: Shape, anchors: &[MinorAnchor]) -> Result<Self> {
        if shape.rows == 0 || shape.cols == 0 {
            return Err(Error::ShapeTooSmall { rows: shape.rows, cols: shape.cols });
        }
        if !anchors.is_empty() && (shape.rows < 2 || shape.cols < 2) {
            return Err(Error::ShapeTooSmall { rows: shape.rows, cols: shape.cols });
        }
        let mut set = BTreeSet::new();
        for &a in anchors {
            if !a.in_bounds(shape) {
                return Err(Error::OutOfBounds(a));
            }
            if !set.insert(a) {
                return Err(Error::DuplicateAnchor(a));
            }
        }
        Ok(MinorSet { shape, anchors: set })
    }

    /// The classical independence model: every adjacent minor.
    pub fn full(shape: Shape) -> Result<Self> {
        if shape.rows < 2 || shape.cols < 2 {
            return Err(Error::ShapeTooSmall { rows: shape.rows, cols: shape.cols });
        }
        Ok(MinorSet { shape, anchors: shape.anchors().collect() })
    }

    /// Every adjacent minor except those in `removed`.
    pub fn all_except(shape: Shape, removed: &[MinorAnchor]) -> Result<Self> {
        let removed = MinorSet::validate(shape, removed)?;
        let full = MinorSet::full(shape)?;
        Ok(full.complement_of(&removed.anchors))
    }

    fn complement_of(&self, removed: &BTreeSet<MinorAnchor>) -> MinorSet {
        MinorSet { shape: self.shape, anchors: self.anchors.difference(removed).copied().collect() }
    }

    /// The set of adjacent minors not in this model.
    pub fn complement(&self) -> MinorSet {
        MinorSet {
            shape: self.shape,
            anchors: self.shape.anchors().filter(|a| !self.anchors.contains(a)).collect(),
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    pub fn contains(&self, anchor: MinorAnchor) -> bool {
        self.anchors.contains(&anchor)
    }

    /// Anchors in lexicographic order.
    pub fn anchors(&self) -> impl ExactSizeIterator<Item = MinorAnchor> + '_ {
        self.anchors.iter().copied()
    }

    pub fn graph(&self) -> ModelGraph {
        build_graph(self)
    }
}

/// The graph `G_B` on the cells: each minor contributes the four sides of
/// its square. Edge multiplicities are 0, 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelGraph {
    shape: Shape,
    // (i,j)-(i,j+1), indexed (i-1)*(J-1) + (j-1)
    horizontal: Vec<u8>,
    // (i,j)-(i+1,j), indexed (i-1)*J + (j-1)
    vertical: Vec<u8>,
}

impl ModelGraph {
    fn empty(shape: Shape) -> Self {
        ModelGraph {
            shape,
            horizontal: vec![0; shape.rows * shape.cols.saturating_sub(1)],
            vertical: vec![0; shape.rows.saturating_sub(1) * shape.cols],
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Multiplicity of the edge between `(i,j)` and `(i,j+1)`.
    pub fn right(&self, cell: Cell) -> u8 {
        if cell.col >= self.shape.cols {
            return 0;
        }
        self.horizontal[(cell.row - 1) * (self.shape.cols - 1) + (cell.col - 1)]
    }

    /// Multiplicity of the edge between `(i,j)` and `(i+1,j)`.
    pub fn down(&self, cell: Cell) -> u8 {
        if cell.row >= self.shape.rows {
            return 0;
        }
        self.vertical[(cell.row - 1) * self.shape.cols + (cell.col - 1)]
    }

    /// Multiplicity of the edge joining `a` and `b` (0 if not adjacent).
    pub fn multiplicity(&self, a: Cell, b: Cell) -> u8 {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a.row == b.row && b.col == a.col + 1 {
            self.right(a)
        } else if a.col == b.col && b.row == a.row + 1 {
            self.down(a)
        } else {
            0
        }
    }

    /// Distinct edges as `(a, b, multiplicity)` with `a < b`, in lex order of `a`.
    pub fn edges(&self) -> Vec<(Cell, Cell, u8)> {
        let mut out = Vec::new();
        for c in self.shape.cells() {
            let r = self.right(c);
            if r > 0 {
                out.push((c, Cell::new(c.row, c.col + 1), r));
            }
            let d = self.down(c);
            if d > 0 {
                out.push((c, Cell::new(c.row + 1, c.col), d));
            }
        }
        out
    }

    /// Number of distinct cells adjacent to `cell`.
    pub fn degree(&self, cell: Cell) -> usize {
        let mut deg = 0;
        if self.right(cell) > 0 {
            deg += 1;
        }
        if self.down(cell) > 0 {
            deg += 1;
        }
        if cell.col > 1 && self.right(Cell::new(cell.row, cell.col - 1)) > 0 {
            deg += 1;
        }
        if cell.row > 1 && self.down(Cell::new(cell.row - 1, cell.col)) > 0 {
            deg += 1;
        }
        deg
    }
}

pub fn build_graph(model: &MinorSet) -> ModelGraph {
    let shape = model.shape();
    let mut g = ModelGraph::empty(shape);
    let hw = shape.cols.saturating_sub(1);
    for a in model.anchors() {
        let Cell { row: i, col: j } = a.cell();
        g.horizontal[(i - 1) * hw + (j - 1)] += 1;
        g.horizontal[i * hw + (j - 1)] += 1;
        g.vertical[(i - 1) * shape.cols + (j - 1)] += 1;
        g.vertical[(i - 1) * shape.cols + j] += 1;
    }
    g
}

/// Combinatorial decomposition of a model graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// Maximal connected row components, each a run of cells in one row.
    pub mcrs: Vec<Vec<Cell>>,
    /// Maximal connected column components.
    pub mccs: Vec<Vec<Cell>>,
    pub free_cells: Vec<Cell>,
    /// Connected components of the graph on its non-free cells.
    pub components: Vec<Vec<Cell>>,
    /// Lex-smallest cells of the groups of edge-adjacent missing minors that
    /// avoid the border.
    pub corners: Vec<Cell>,
}

impl Decomposition {
    pub fn r(&self) -> usize {
        self.mcrs.len()
    }

    pub fn c(&self) -> usize {
        self.mccs.len()
    }

    pub fn f(&self) -> usize {
        self.free_cells.len()
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }
}

pub fn decompose(model: &MinorSet) -> Decomposition {
    let shape = model.shape();
    let g = build_graph(model);

    let mut mcrs = Vec::new();
    for i in 1..=shape.rows {
        let mut run = vec![Cell::new(i, 1)];
        for j in 1..=shape.cols {
            let c = Cell::new(i, j);
            if j < shape.cols && g.right(c) > 0 {
                run.push(Cell::new(i, j + 1));
            } else {
                if run.len() > 1 {
                    mcrs.push(std::mem::take(&mut run));
                }
                run = vec![Cell::new(i, j + 1)];
            }
        }
    }

    let mut mccs = Vec::new();
    for j in 1..=shape.cols {
        let mut run = vec![Cell::new(1, j)];
        for i in 1..=shape.rows {
            let c = Cell::new(i, j);
            if i < shape.rows && g.down(c) > 0 {
                run.push(Cell::new(i + 1, j));
            } else {
                if run.len() > 1 {
                    mccs.push(std::mem::take(&mut run));
                }
                run = vec![Cell::new(i + 1, j)];
            }
        }
    }
    // MCCs are listed by their first cell in lex order.
    mccs.sort_by_key(|run| run[0]);

    let free_cells: Vec<Cell> = shape.cells().filter(|&c| g.degree(c) == 0).collect();

    let components = cell_components(shape, model);
    let corners = corners(model);

    Decomposition { mcrs, mccs, free_cells, components, corners }
}

/// Connected components of the cells touched by the minors of `model`, each
/// sorted, ordered by smallest cell.
fn cell_components(shape: Shape, model: &MinorSet) -> Vec<Vec<Cell>> {
    let mut uf = UnionFind::<usize>::new(shape.len());
    let mut touched = vec![false; shape.len()];
    for a in model.anchors() {
        let cells = a.cells();
        let first = shape.index(cells[0]);
        for c in cells {
            let k = shape.index(c);
            touched[k] = true;
            uf.union(first, k);
        }
    }
    let mut groups: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
    for k in (0..shape.len()).filter(|&k| touched[k]) {
        groups.entry(uf.find(k)).or_default().push(shape.cell(k));
    }
    let mut comps: Vec<Vec<Cell>> = groups.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Missing minors are grouped when they share an edge; each group whose
/// cells avoid the border yields its lex-smallest cell, which is always the
/// anchor of a missing minor.
fn corners(model: &MinorSet) -> Vec<Cell> {
    let shape = model.shape();
    let missing: Vec<MinorAnchor> = model.complement().anchors().collect();
    let pos = |a: MinorAnchor| missing.binary_search(&a).ok();
    let mut uf = UnionFind::<usize>::new(missing.len());
    for (k, &a) in missing.iter().enumerate() {
        let c = a.cell();
        for next in [MinorAnchor::new(c.row + 1, c.col), MinorAnchor::new(c.row, c.col + 1)] {
            if let Some(l) = pos(next) {
                uf.union(k, l);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<MinorAnchor>> = BTreeMap::new();
    for (k, &a) in missing.iter().enumerate() {
        groups.entry(uf.find(k)).or_default().push(a);
    }
    let mut out: Vec<Cell> = groups
        .into_values()
        .filter(|g| g.iter().flat_map(|a| a.cells()).all(|c| !shape.is_border(c)))
        .map(|g| g[0].cell())
        .collect();
    out.sort();
    out
}
