//! Sufficient statistic and monomial parametrization of a weakened
//! independence model.
//!
//! The columns of `A_B` are the indicator vectors of the maximal connected
//! row and column components, of the free cells, and of one lower-right
//! quadrant per corner of the complement graph. Together they span the
//! orthogonal complement of the minor log-vectors, so `T(h) = A_Bᵗ h`.

use std::fmt;
use std::ops::Mul;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{IntMatrix, IntVector};
use crate::table_model::{decompose, Cell, Decomposition, MinorSet, Shape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnLabel {
    Mcr {
        cells: Vec<Cell>,
    },
    Mcc {
        cells: Vec<Cell>,
    },
    Free {
        cell: Cell,
    },
    /// Cells `(a, b)` with `a >= corner.row + 1` and `b >= corner.col + 1`.
    Quadrant {
        corner: Cell,
    },
}

impl fmt::Display for ColumnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnLabel::Mcr { cells } => {
                write!(f, "MCR {}..{}", cells[0], cells[cells.len() - 1])
            }
            ColumnLabel::Mcc { cells } => {
                write!(f, "MCC {}..{}", cells[0], cells[cells.len() - 1])
            }
            ColumnLabel::Free { cell } => write!(f, "free {cell}"),
            ColumnLabel::Quadrant { corner } => {
                write!(f, "quadrant >= ({},{})", corner.row + 1, corner.col + 1)
            }
        }
    }
}

/// The 0/1 design matrix `A_B` with one label per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffStatMatrix {
    shape: Shape,
    matrix: IntMatrix,
    labels: Vec<ColumnLabel>,
    rank: usize,
}

impl SuffStatMatrix {
    /// Decomposes `model` and builds its generators.
    pub fn for_model(model: &MinorSet) -> Result<Self> {
        generators(model, &decompose(model))
    }

    /// Wraps an arbitrary 0/1 design matrix, e.g. one loaded from elsewhere.
    pub fn from_matrix(shape: Shape, matrix: IntMatrix, labels: Vec<ColumnLabel>) -> Self {
        assert_eq!(matrix.rows(), shape.len());
        assert_eq!(matrix.cols(), labels.len());
        let rank = matrix.rank();
        SuffStatMatrix { shape, matrix, labels, rank }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[ColumnLabel] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Cells (row-major indices) in the support of column `k`.
    pub fn support(&self, k: usize) -> Vec<usize> {
        let col = self.matrix.column(k);
        (0..col.len()).filter(|&i| col[i] != 0).collect()
    }

    /// The sufficient statistic `T(h) = A_Bᵗ h` of a table of counts.
    pub fn statistic(&self, h: &[u64]) -> Vec<u64> {
        assert_eq!(h.len(), self.shape.len());
        self.matrix
            .columns()
            .iter()
            .map(|c| c.iter().zip(h).filter(|(&a, _)| a != 0).map(|(_, &x)| x).sum())
            .collect()
    }

    /// `A_Bᵗ v` for an integer vector.
    pub fn apply(&self, v: &[i64]) -> IntVector {
        self.matrix.transpose_mul(v)
    }

    pub fn parametrize(&self) -> Parametrization {
        parametrize(self)
    }
}

fn indicator(shape: Shape, cells: impl IntoIterator<Item = Cell>) -> IntVector {
    let mut v = vec![0; shape.len()];
    for c in cells {
        v[shape.index(c)] = 1;
    }
    v
}

/// Builds `A_B` from a decomposition of `model`.
///
/// The generating set may be linearly redundant; the rank is checked against
/// `IJ - |B|` and a mismatch is reported as [`Error::RankDeficient`].
pub fn generators(model: &MinorSet, decomp: &Decomposition) -> Result<SuffStatMatrix> {
    let shape = model.shape();
    let mut columns = Vec::new();
    let mut labels = Vec::new();
    for run in &decomp.mcrs {
        columns.push(indicator(shape, run.iter().copied()));
        labels.push(ColumnLabel::Mcr { cells: run.clone() });
    }
    for run in &decomp.mccs {
        columns.push(indicator(shape, run.iter().copied()));
        labels.push(ColumnLabel::Mcc { cells: run.clone() });
    }
    for &cell in &decomp.free_cells {
        columns.push(indicator(shape, [cell]));
        labels.push(ColumnLabel::Free { cell });
    }
    for &corner in &decomp.corners {
        let quadrant = shape.cells().filter(|c| c.row > corner.row && c.col > corner.col);
        columns.push(indicator(shape, quadrant));
        labels.push(ColumnLabel::Quadrant { corner });
    }
    let matrix = IntMatrix::from_columns(shape.len(), columns);
    let expected = shape.len() - model.len();
    let found = matrix.rank();
    if found != expected {
        return Err(Error::RankDeficient { expected, found });
    }
    Ok(SuffStatMatrix { shape, matrix, labels, rank: found })
}

/// The monomial map `p[i,j] ∝ ∏ ζ_k` over the columns `k` covering each cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parametrization {
    pub shape: Shape,
    pub parameters: usize,
    /// Per cell in row-major order, the 0-based parameter indices.
    pub monomials: Vec<Vec<usize>>,
}

impl Parametrization {
    pub fn monomial(&self, cell: Cell) -> &[usize] {
        &self.monomials[self.shape.index(cell)]
    }

    /// Unnormalized cell values for the parameter vector `zeta`.
    pub fn evaluate<T>(&self, zeta: &[T]) -> Vec<T>
    where
        T: Clone + One + Mul<Output = T>,
    {
        assert_eq!(zeta.len(), self.parameters);
        self.monomials.iter().map(|m| m.iter().fold(T::one(), |acc, &k| acc * zeta[k].clone())).collect()
    }
}

impl fmt::Display for Parametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, mono) in self.monomials.iter().enumerate() {
            let cell = self.shape.cell(idx);
            let factors: Vec<String> = mono.iter().map(|k| format!("z{}", k + 1)).collect();
            let rhs = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
            writeln!(f, "p[{},{}] = {}", cell.row, cell.col, rhs)?;
        }
        Ok(())
    }
}

pub fn parametrize(a: &SuffStatMatrix) -> Parametrization {
    let monomials =
        (0..a.shape.len()).map(|i| (0..a.cols()).filter(|&k| a.matrix.get(i, k) != 0).collect()).collect();
    Parametrization { shape: a.shape, parameters: a.cols(), monomials }
}
