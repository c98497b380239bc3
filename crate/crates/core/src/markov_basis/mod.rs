//! Markov bases of weakened independence models.
//!
//! The moves are the exponent differences of a generating set of the toric
//! ideal `J_B = { p^a - p^b : A_Bᵗ a = A_Bᵗ b }`. It is computed from a basis
//! of the kernel lattice of `A_Bᵗ` by saturating the lattice-basis ideal
//! with respect to every cell variable, then trimmed to a minimal generating
//! set degree by degree.

mod binomial;
pub mod fiber;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use self::binomial::{groebner, saturate, Binomial, Limits, TermOrder};
pub use self::fiber::{
    enumerate_fiber, fiber_connected, fiber_of_table_connected, verify_connectivity, Coverage,
    DEFAULT_NODE_BUDGET,
};
use crate::error::{Error, Result};
use crate::intlinalg::{integer_kernel, IntVector};
use crate::suffstat::SuffStatMatrix;
use crate::table_model::Shape;

/// An integer table `m` with `A_Bᵗ m = 0`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Move {
    pub vector: IntVector,
}

impl Move {
    pub fn new(vector: IntVector) -> Self {
        Move { vector }
    }

    /// Total of the positive part, equal to the total of the negative part for
    /// moves of a homogeneous model.
    pub fn degree(&self) -> u64 {
        self.vector.iter().filter(|&&x| x > 0).map(|&x| x as u64).sum()
    }

    pub fn positive_part(&self) -> Vec<u64> {
        self.vector.iter().map(|&x| x.max(0) as u64).collect()
    }

    pub fn negative_part(&self) -> Vec<u64> {
        self.vector.iter().map(|&x| (-x).max(0) as u64).collect()
    }

    /// Flips the sign so the first nonzero entry is positive.
    pub fn normalized(mut self) -> Self {
        if self.vector.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            for x in self.vector.iter_mut() {
                *x = -*x;
            }
        }
        self
    }

    /// Nonzero entries as `(row, col, value)` with 1-based coordinates.
    pub fn signed_cells(&self, shape: Shape) -> Vec<(usize, usize, i64)> {
        self.vector
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(k, &x)| {
                let c = shape.cell(k);
                (c.row, c.col, x)
            })
            .collect()
    }

    /// The move as an `I x J` grid.
    pub fn grid(&self, shape: Shape) -> Vec<Vec<i64>> {
        self.vector.chunks(shape.cols).map(<[i64]>::to_vec).collect()
    }

    /// `h + sign * m` if it stays nonnegative.
    pub fn apply(&self, h: &[u64], sign: i64) -> Option<Vec<u64>> {
        h.iter().zip(&self.vector).map(|(&x, &d)| u64::try_from(x as i64 + sign * d).ok()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovBasis {
    pub shape: Shape,
    pub moves: Vec<Move>,
}

impl MarkovBasis {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Every move satisfies `A_Bᵗ m = 0`.
    pub fn is_orthogonal_to(&self, a: &SuffStatMatrix) -> bool {
        self.moves.iter().all(|m| a.apply(&m.vector).iter().all(|&x| x == 0))
    }

    /// A copy without the move at `index`.
    pub fn without(&self, index: usize) -> MarkovBasis {
        let mut moves = self.moves.clone();
        moves.remove(index);
        MarkovBasis { shape: self.shape, moves }
    }
}

impl fmt::Display for MarkovBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.moves.iter().enumerate() {
            let terms: Vec<String> =
                m.signed_cells(self.shape).into_iter().map(|(i, j, x)| format!("{x:+}@({i},{j})")).collect();
            writeln!(f, "m{}: {}", k + 1, terms.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisOptions {
    pub limits: Limits,
    /// Node cap for each fiber search in the minimization step.
    pub fiber_budget: usize,
}

impl Default for BasisOptions {
    fn default() -> Self {
        BasisOptions { limits: Limits::default(), fiber_budget: DEFAULT_NODE_BUDGET }
    }
}

/// Computes a minimal Markov basis for the design `a`.
pub fn compute_basis(a: &SuffStatMatrix, options: BasisOptions) -> Result<MarkovBasis> {
    let shape = a.shape();
    let n = shape.len();
    if (0..n).any(|i| a.matrix().row(i).iter().all(|&x| x == 0)) {
        return Err(Error::NotApplicable("some cell is not covered by any column".into()));
    }
    let lattice = integer_kernel(a.matrix())?;
    if lattice.len() + a.rank() != n {
        return Err(Error::NotApplicable("kernel rank does not match the design rank".into()));
    }
    if lattice.iter().any(|v| v.iter().sum::<i64>() != 0) {
        return Err(Error::NotApplicable("the design does not fix the sample size".into()));
    }
    if lattice.is_empty() {
        return Ok(MarkovBasis { shape, moves: Vec::new() });
    }

    let order = TermOrder::with_last(n, n - 1);
    let seeds: Vec<Binomial> = lattice.iter().filter_map(|v| Binomial::from_vector(v, &order)).collect();
    let generators = saturate(seeds, n, options.limits)?;

    let mut candidates: Vec<Move> = generators
        .iter()
        .map(|b| Move::new(b.to_vector()).normalized())
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    candidates.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| y.cmp(x)));

    let moves = minimize(candidates, options.fiber_budget)?;
    Ok(MarkovBasis { shape, moves })
}

/// Keeps a candidate only if its two endpoints are not already joined by the
/// moves kept so far. Candidates must be sorted by degree; the result is a
/// minimal generating set when the candidates generate the ideal.
fn minimize(candidates: Vec<Move>, budget: usize) -> Result<Vec<Move>> {
    let mut kept: Vec<Move> = Vec::new();
    for cand in candidates {
        if !connected_by(&kept, &cand.positive_part(), &cand.negative_part(), budget)? {
            kept.push(cand);
        }
    }
    Ok(kept)
}

/// Breadth-first search from `from` through nonnegative tables.
fn connected_by(moves: &[Move], from: &[u64], to: &[u64], budget: usize) -> Result<bool> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(from.to_vec());
    queue.push_back(from.to_vec());
    while let Some(h) = queue.pop_front() {
        if h == to {
            return Ok(true);
        }
        for m in moves {
            for sign in [1, -1] {
                if let Some(next) = m.apply(&h, sign) {
                    if seen.insert(next.clone()) {
                        if seen.len() > budget {
                            return Err(Error::ResourceLimit(format!(
                                "fiber search exceeded {budget} tables"
                            )));
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(false)
}
