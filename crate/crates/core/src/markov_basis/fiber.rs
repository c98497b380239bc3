//! Brute-force fiber enumeration and connectivity checks.
//!
//! Fibers are enumerated directly from the linear system `A_Bᵗ h' = t`, with
//! no reference to any moves, so these routines serve as an independent
//! oracle for the Markov property.

use std::collections::{HashMap, HashSet};

use petgraph::unionfind::UnionFind;
use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;

use super::Move;
use crate::error::{Error, Result};
use crate::suffstat::SuffStatMatrix;

/// Default cap on the number of enumeration nodes.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// All nonnegative integer tables `h'` with `A_Bᵗ h' = t`, in lex order.
pub fn enumerate_fiber(a: &SuffStatMatrix, t: &[u64], budget: usize) -> Result<Vec<Vec<u64>>> {
    let n = a.shape().len();
    assert_eq!(t.len(), a.cols());
    let mut cover: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut last_cell: Vec<Option<usize>> = vec![None; a.cols()];
    for s in 0..a.cols() {
        for i in a.support(s) {
            cover[i].push(s);
            last_cell[s] = Some(i);
        }
    }
    if cover.iter().any(Vec::is_empty) {
        return Err(Error::NotApplicable("a cell is not covered by any column, fibers are infinite".into()));
    }
    // columns with empty support must carry a zero total
    if (0..a.cols()).any(|s| last_cell[s].is_none() && t[s] != 0) {
        return Ok(Vec::new());
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, cell) in last_cell.iter().enumerate() {
        if let Some(i) = cell {
            closing[*i].push(s);
        }
    }

    struct Search<'a> {
        cover: &'a [Vec<usize>],
        closing: &'a [Vec<usize>],
        rem: Vec<u64>,
        current: Vec<u64>,
        out: Vec<Vec<u64>>,
        nodes: usize,
        budget: usize,
    }

    impl Search<'_> {
        fn run(&mut self, i: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::ResourceLimit(format!(
                    "fiber enumeration exceeded {} nodes",
                    self.budget
                )));
            }
            if i == self.current.len() {
                self.out.push(self.current.clone());
                return Ok(());
            }
            let ub = self.cover[i].iter().map(|&s| self.rem[s]).min().unwrap_or(0);
            for x in 0..=ub {
                for &s in &self.cover[i] {
                    self.rem[s] -= x;
                }
                if self.closing[i].iter().all(|&s| self.rem[s] == 0) {
                    self.current[i] = x;
                    self.run(i + 1)?;
                }
                for &s in &self.cover[i] {
                    self.rem[s] += x;
                }
            }
            self.current[i] = 0;
            Ok(())
        }
    }

    let mut search = Search {
        cover: &cover,
        closing: &closing,
        rem: t.to_vec(),
        current: vec![0; n],
        out: Vec::new(),
        nodes: 0,
        budget,
    };
    search.run(0)?;
    Ok(search.out)
}

/// Whether the signed moves connect every table of `fiber` to every other
/// while staying nonnegative.
pub fn fiber_connected(moves: &[Move], fiber: &[Vec<u64>]) -> bool {
    if fiber.len() <= 1 {
        return true;
    }
    let index: HashMap<&[u64], usize> = fiber.iter().enumerate().map(|(k, h)| (h.as_slice(), k)).collect();
    let mut uf = UnionFind::<usize>::new(fiber.len());
    let mut next = vec![0u64; fiber[0].len()];
    for (k, h) in fiber.iter().enumerate() {
        // applying +m from every table also covers the -m edges
        'moves: for m in moves {
            for ((dst, &x), &d) in next.iter_mut().zip(h).zip(&m.vector) {
                let y = x as i64 + d;
                if y < 0 {
                    continue 'moves;
                }
                *dst = y as u64;
            }
            if let Some(&other) = index.get(next.as_slice()) {
                uf.union(k, other);
            }
        }
    }
    let root = uf.find(0);
    (1..fiber.len()).all(|k| uf.find(k) == root)
}

/// Checks connectivity of the fiber containing `h`.
pub fn fiber_of_table_connected(
    moves: &[Move],
    a: &SuffStatMatrix,
    h: &[u64],
    budget: usize,
) -> Result<bool> {
    let fiber = enumerate_fiber(a, &a.statistic(h), budget)?;
    Ok(fiber_connected(moves, &fiber))
}

/// Which tables seed the fibers that get checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// Every table with total at most `n_max`.
    Exhaustive,
    /// `tables` random tables with totals drawn uniformly from `1..=n_max`.
    Sampled { tables: usize, seed: u64 },
}

/// Oracle for the Markov property: enumerates fibers of tables with total at
/// most `n_max` and checks that `moves` connects each one.
///
/// `budget` bounds both the number of seed tables visited and the nodes of
/// each fiber enumeration.
pub fn verify_connectivity(
    moves: &[Move],
    a: &SuffStatMatrix,
    n_max: u64,
    coverage: Coverage,
    budget: usize,
) -> Result<bool> {
    let cells = a.shape().len();
    let mut stats: HashSet<Vec<u64>> = HashSet::new();
    match coverage {
        Coverage::Exhaustive => {
            let mut visited = 0usize;
            let mut h = vec![0u64; cells];
            for n in 0..=n_max {
                let mut comp = Compositions::new(n, cells);
                while comp.next_into(&mut h) {
                    visited += 1;
                    if visited > budget {
                        return Err(Error::ResourceLimit(format!(
                            "more than {budget} tables with total <= {n_max}"
                        )));
                    }
                    stats.insert(a.statistic(&h));
                }
            }
        }
        Coverage::Sampled { tables, seed } => {
            let mut rng = Pcg64::seed_from_u64(seed);
            for _ in 0..tables {
                let n = rng.random_range(1..=n_max.max(1));
                let mut h = vec![0u64; cells];
                for _ in 0..n {
                    h[rng.random_range(0..cells)] += 1;
                }
                stats.insert(a.statistic(&h));
            }
        }
    }
    let mut stats: Vec<Vec<u64>> = stats.into_iter().collect();
    stats.sort();
    let results: Result<Vec<bool>> =
        stats.par_iter().map(|t| Ok(fiber_connected(moves, &enumerate_fiber(a, t, budget)?))).collect();
    Ok(results?.into_iter().all(|ok| ok))
}

/// Weak compositions of `n` into `parts` parts, in reverse lex order.
struct Compositions {
    state: Vec<u64>,
    started: bool,
    done: bool,
}

impl Compositions {
    fn new(n: u64, parts: usize) -> Self {
        let mut state = vec![0; parts];
        if parts > 0 {
            state[0] = n;
        }
        Compositions { state, started: false, done: parts == 0 && n > 0 }
    }

    fn next_into(&mut self, out: &mut [u64]) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            out.copy_from_slice(&self.state);
            return true;
        }
        let p = self.state.len();
        // rightmost nonzero position before the last part
        let Some(i) = (0..p.saturating_sub(1)).rev().find(|&i| self.state[i] > 0) else {
            self.done = true;
            return false;
        };
        let tail = self.state[p - 1];
        self.state[p - 1] = 0;
        self.state[i] -= 1;
        self.state[i + 1] = tail + 1;
        out.copy_from_slice(&self.state);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table_model::{MinorAnchor, MinorSet, Shape};

    #[test]
    fn compositions_count() {
        let mut c = Compositions::new(3, 3);
        let mut buf = vec![0; 3];
        let mut all = Vec::new();
        while c.next_into(&mut buf) {
            assert_eq!(buf.iter().sum::<u64>(), 3);
            all.push(buf.clone());
        }
        assert_eq!(all.len(), 10);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 10);
    }

    #[test]
    fn independence_2x2_fiber() {
        let a = SuffStatMatrix::for_model(&MinorSet::full(Shape::new(2, 2)).unwrap()).unwrap();
        // row sums (2,2), column sums (2,2)
        let fiber = enumerate_fiber(&a, &a.statistic(&[1, 1, 1, 1]), 1000).unwrap();
        assert_eq!(fiber, vec![vec![0, 2, 2, 0], vec![1, 1, 1, 1], vec![2, 0, 0, 2]]);
        let mv = Move::new(vec![1, -1, -1, 1]);
        assert!(fiber_connected(&[mv], &fiber));
        assert!(!fiber_connected(&[], &fiber));
    }

    #[test]
    fn singleton_fibers_need_no_moves() {
        let m = MinorSet::validate(Shape::new(2, 3), &[]).unwrap();
        let a = SuffStatMatrix::for_model(&m).unwrap();
        assert!(verify_connectivity(&[], &a, 4, Coverage::Exhaustive, DEFAULT_NODE_BUDGET).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let m = MinorSet::validate(Shape::new(2, 2), &[MinorAnchor::new(1, 1)]).unwrap();
        let a = SuffStatMatrix::for_model(&m).unwrap();
        let r = verify_connectivity(&[], &a, 10, Coverage::Exhaustive, 50);
        assert!(matches!(r, Err(Error::ResourceLimit(_))));
    }
}
