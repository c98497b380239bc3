#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::{One, Zero};
use weakind::{MinorAnchor, MinorSet, Move, Shape, SuffStatMatrix};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

/// The model on `shape` keeping the anchors whose bit is set in `mask`,
/// anchors taken in row-major order.
pub fn model_from_mask(shape: Shape, mask: u64) -> MinorSet {
    let anchors: Vec<MinorAnchor> =
        shape.anchors().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, a)| a).collect();
    MinorSet::validate(shape, &anchors).unwrap()
}

pub fn model_from_bits(shape: Shape, bits: &[bool]) -> MinorSet {
    let anchors: Vec<MinorAnchor> = shape.anchors().zip(bits).filter(|(_, &b)| b).map(|(a, _)| a).collect();
    MinorSet::validate(shape, &anchors).unwrap()
}

/// Rank by Gaussian elimination over the rationals.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone() / pivot.clone();
                for j in col..width {
                    let d = f.clone() * m[rank][j].clone();
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn columns(a: &SuffStatMatrix) -> Vec<Vec<i64>> {
    a.matrix().columns().to_vec()
}

pub fn one() -> BigRational {
    BigRational::one()
}

/// All nonnegative tables with the same sufficient statistic as `h`, found by
/// a plain search over tables of the same total.
pub fn brute_fiber(a: &SuffStatMatrix, h: &[u64]) -> HashSet<Vec<u64>> {
    let t = a.statistic(h);
    let n: u64 = h.iter().sum();
    let cells = h.len();
    let mut out = HashSet::new();
    let mut cur = vec![0u64; cells];
    fn rec(
        k: usize,
        left: u64,
        cur: &mut Vec<u64>,
        a: &SuffStatMatrix,
        t: &[u64],
        out: &mut HashSet<Vec<u64>>,
    ) {
        if k + 1 == cur.len() {
            cur[k] = left;
            if a.statistic(cur) == t {
                out.insert(cur.clone());
            }
            return;
        }
        for x in 0..=left {
            cur[k] = x;
            rec(k + 1, left - x, cur, a, t, out);
        }
    }
    rec(0, n, &mut cur, a, &t, &mut out);
    out
}

/// Connected components of `fiber` under `moves`, by breadth-first search.
pub fn components(moves: &[Move], fiber: &HashSet<Vec<u64>>) -> usize {
    let mut label: HashMap<&Vec<u64>, usize> = HashMap::new();
    let mut count = 0;
    for start in fiber {
        if label.contains_key(start) {
            continue;
        }
        count += 1;
        label.insert(start, count);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(h) = queue.pop_front() {
            for m in moves {
                for sign in [1, -1] {
                    if let Some(next) = m.apply(&h, sign) {
                        if let Some(key) = fiber.get(&next) {
                            if !label.contains_key(key) {
                                label.insert(key, count);
                                queue.push_back(next);
                            }
                        }
                    }
                }
            }
        }
    }
    count
}
