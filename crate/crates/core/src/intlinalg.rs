//! Exact integer linear algebra on small dense matrices.
//!
//! Storage uses `i64`; every elimination runs on `BigInt` so pivots may grow
//! freely. Nothing here touches floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::table_model::{MinorAnchor, Shape};

/// An integer vector indexed by cells in row-major order.
pub type IntVector = Vec<i64>;

/// A dense integer matrix stored by columns. Columns are generators: minor
/// log-vectors for `Z_B`, indicator vectors for `A_B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    columns: Vec<IntVector>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, columns: vec![vec![0; rows]; cols] }
    }

    /// Builds a matrix from its columns. Panics if the lengths disagree.
    pub fn from_columns(rows: usize, columns: Vec<IntVector>) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        IntMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.columns[col][row]
    }

    pub fn column(&self, col: usize) -> &[i64] {
        &self.columns[col]
    }

    pub fn columns(&self) -> &[IntVector] {
        &self.columns
    }

    pub fn row(&self, row: usize) -> IntVector {
        self.columns.iter().map(|c| c[row]).collect()
    }

    /// `selfᵗ v`: one inner product per column.
    pub fn transpose_mul(&self, v: &[i64]) -> IntVector {
        assert_eq!(v.len(), self.rows);
        self.columns.iter().map(|c| dot(c, v)).collect()
    }

    /// Same as [`transpose_mul`](Self::transpose_mul) for real vectors.
    pub fn transpose_mul_f64(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        self.columns.iter().map(|c| c.iter().zip(v).map(|(&a, &b)| a as f64 * b).sum()).collect()
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The exponent difference `a - b` of the minor `p^a - p^b` anchored at `minor`.
pub fn log_vector(minor: MinorAnchor, shape: Shape) -> Result<IntVector> {
    if !minor.in_bounds(shape) {
        return Err(Error::OutOfBounds(minor));
    }
    let mut v = vec![0; shape.len()];
    for c in minor.positive_cells() {
        v[shape.index(c)] = 1;
    }
    for c in minor.negative_cells() {
        v[shape.index(c)] = -1;
    }
    Ok(v)
}

fn to_big(rows: &[IntVector]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rank(m: &IntMatrix) -> usize {
    // Eliminate on the transpose; rank is the same and columns become rows.
    let mut a = to_big(m.columns());
    let nrows = a.len();
    let ncols = m.rows();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Brings the first `width` entries of `rows` into row echelon form with
/// unimodular row operations. The remaining entries ride along.
///
/// Returns the number of pivot rows; they come first, with positive pivots.
fn echelonize(rows: &mut [Vec<BigInt>], width: usize) -> usize {
    let n = rows.len();
    let mut k = 0;
    for c in 0..width {
        if k == n {
            break;
        }
        loop {
            // Smallest nonzero |entry| in this column becomes the pivot.
            let pivot = (k..n)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&x, &y| rows[x][c].abs().cmp(&rows[y][c].abs()));
            let Some(p) = pivot else { break };
            rows.swap(k, p);
            let mut done = true;
            for i in k + 1..n {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[k][c]);
                let (head, tail) = rows.split_at_mut(i);
                let pivot_row = &head[k];
                for (x, y) in tail[0].iter_mut().zip(pivot_row) {
                    *x -= &q * y;
                }
                if !tail[0][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if k < n && !rows[k][c].is_zero() {
            if rows[k][c].is_negative() {
                for x in rows[k].iter_mut() {
                    *x = -&*x;
                }
            }
            k += 1;
        }
    }
    k
}

/// A basis of the lattice `{ v ∈ Zⁿ : mᵗ v = 0 }` where `n = m.rows()`.
///
/// Computed by Hermite reduction of `[m | I]`: rows of `m` are combined
/// unimodularly and the identity block records the combinations, so the
/// combinations that annihilate `m` form a basis of the full (saturated)
/// kernel lattice. The basis is then size-reduced pairwise.
pub fn integer_kernel(m: &IntMatrix) -> Result<Vec<IntVector>> {
    let n = m.rows();
    let s = m.cols();
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigInt> = m.row(i).into_iter().map(BigInt::from).collect();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let rank = echelonize(&mut rows, s);
    let mut basis: Vec<Vec<BigInt>> = rows.drain(rank..).map(|r| r[s..].to_vec()).collect();
    size_reduce(&mut basis);
    basis.into_iter().map(|v| v.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect()).collect()
}

fn norm2(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

/// Repeatedly subtracts rounded projections between basis vectors while the
/// squared norm strictly drops. The lattice is unchanged.
fn size_reduce(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let nj = norm2(&basis[j]);
                if nj.is_zero() {
                    continue;
                }
                let d: BigInt = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
                // round(d / nj)
                let q = (BigInt::from(2) * &d + &nj).div_floor(&(BigInt::from(2) * &nj));
                if q.is_zero() {
                    continue;
                }
                let candidate: Vec<BigInt> =
                    basis[i].iter().zip(&basis[j]).map(|(a, b)| a - &q * b).collect();
                if norm2(&candidate) < norm2(&basis[i]) {
                    basis[i] = candidate;
                    changed = true;
                }
            }
        }
    }
}

/// An integer lattice held as an echelon basis.
#[derive(Clone, Debug)]
pub struct IntLattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl IntLattice {
    /// The lattice spanned by `generators` (which may be dependent).
    pub fn from_generators(dim: usize, generators: &[IntVector]) -> Self {
        assert!(generators.iter().all(|g| g.len() == dim));
        let mut rows = to_big(generators);
        let r = echelonize(&mut rows, dim);
        rows.truncate(r);
        IntLattice { dim, basis: rows }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut rest: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for b in &self.basis {
            let c = b.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero");
            if rest[..c].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, r) = rest[c].div_rem(&b[c]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in rest.iter_mut().zip(b) {
                *x -= &q * y;
            }
        }
        rest.iter().all(Zero::is_zero)
    }
}
