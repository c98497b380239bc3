//! Gröbner bases of pure-difference binomial ideals on exponent vectors.
//!
//! A binomial `x^u - x^v` is stored as its two exponent vectors, ordered so
//! that `x^u` is the leading term. S-polynomials and reductions of such
//! binomials stay pure-difference binomials, so no general polynomial type is
//! needed.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// Limits guarding the Buchberger loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest total degree a binomial may reach.
    pub max_degree: u32,
    /// Largest number of elements in an intermediate Gröbner basis.
    pub max_generators: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_degree: 20, max_generators: 20_000 }
    }
}

/// Degree reverse lexicographic order with a chosen variable ranking.
///
/// `vars` lists variables from most to least significant; the last entry is
/// the variable that degrevlex treats as smallest.
#[derive(Clone, Debug)]
pub struct TermOrder {
    vars: Vec<usize>,
}

impl TermOrder {
    /// Degrevlex on `n` variables where `last` is the smallest variable and
    /// the others follow cyclically after it: `last+1, ..., n-1, 0, ..., last`.
    pub fn with_last(n: usize, last: usize) -> Self {
        TermOrder { vars: (1..=n).map(|k| (last + k) % n).collect() }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| {
            for &x in self.vars.iter().rev() {
                match a[x].cmp(&b[x]) {
                    Ordering::Equal => continue,
                    // a smaller exponent in the last differing variable wins
                    ord => return ord.reverse(),
                }
            }
            Ordering::Equal
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binomial {
    pub lead: Exponent,
    pub trail: Exponent,
}

impl Binomial {
    /// Orients `x^a - x^b`; returns `None` when the two terms coincide.
    pub fn new(a: Exponent, b: Exponent, order: &TermOrder) -> Option<Self> {
        match order.cmp(&a, &b) {
            Ordering::Greater => Some(Binomial { lead: a, trail: b }),
            Ordering::Less => Some(Binomial { lead: b, trail: a }),
            Ordering::Equal => None,
        }
    }

    /// Splits an integer vector into positive and negative parts.
    pub fn from_vector(v: &[i64], order: &TermOrder) -> Option<Self> {
        let pos = v.iter().map(|&x| x.max(0) as u32).collect();
        let neg = v.iter().map(|&x| (-x).max(0) as u32).collect();
        Binomial::new(pos, neg, order)
    }

    pub fn degree(&self) -> u32 {
        self.lead.iter().sum::<u32>().max(self.trail.iter().sum())
    }

    pub fn to_vector(&self) -> Vec<i64> {
        self.lead.iter().zip(&self.trail).map(|(&a, &b)| i64::from(a) - i64::from(b)).collect()
    }

    /// Removes the largest power of variable `x` dividing both terms.
    pub fn divide_out(&mut self, x: usize) {
        let k = self.lead[x].min(self.trail[x]);
        self.lead[x] -= k;
        self.trail[x] -= k;
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x == 0 || y == 0)
}

/// Normal form of the monomial `x^m` modulo the binomials in `basis`.
fn normal_form(mut m: Exponent, basis: &[Binomial], skip: Option<usize>) -> Exponent {
    'outer: loop {
        for (k, g) in basis.iter().enumerate() {
            if Some(k) == skip {
                continue;
            }
            if divides(&g.lead, &m) {
                for ((e, &l), &t) in m.iter_mut().zip(&g.lead).zip(&g.trail) {
                    *e = *e - l + t;
                }
                continue 'outer;
            }
        }
        return m;
    }
}

/// Reduces the binomial `x^a - x^b` to `nf(a) - nf(b)`.
fn reduce(a: Exponent, b: Exponent, basis: &[Binomial], order: &TermOrder) -> Option<Binomial> {
    let a = normal_form(a, basis, None);
    let b = normal_form(b, basis, None);
    Binomial::new(a, b, order)
}

struct Pair {
    degree: u32,
    lcm: Exponent,
    i: usize,
    j: usize,
}

impl PartialEq for Pair {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Pair {}
impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Pair {
    // lowest total degree first, then lex on the lcm, then insertion order
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.lcm.cmp(&other.lcm))
            .then_with(|| (self.i, self.j).cmp(&(other.i, other.j)))
    }
}

/// Reduced Gröbner basis of the ideal generated by `generators` under `order`.
pub fn groebner(generators: &[Binomial], order: &TermOrder, limits: Limits) -> Result<Vec<Binomial>> {
    let mut basis: Vec<Binomial> = Vec::new();
    let mut pairs: BinaryHeap<Reverse<Pair>> = BinaryHeap::new();

    let push = |f: Binomial, basis: &mut Vec<Binomial>, pairs: &mut BinaryHeap<Reverse<Pair>>| {
        if f.degree() > limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "binomial degree {} exceeds the cap {}",
                f.degree(),
                limits.max_degree
            )));
        }
        if basis.len() >= limits.max_generators {
            return Err(Error::ResourceLimit(format!(
                "more than {} binomials in an intermediate Gröbner basis",
                limits.max_generators
            )));
        }
        let j = basis.len();
        for (i, g) in basis.iter().enumerate() {
            if coprime(&g.lead, &f.lead) {
                continue;
            }
            let l = lcm(&g.lead, &f.lead);
            pairs.push(Reverse(Pair { degree: l.iter().sum(), lcm: l, i, j }));
        }
        basis.push(f);
        Ok(())
    };

    let mut seeds: Vec<Binomial> =
        generators.iter().filter_map(|g| Binomial::new(g.lead.clone(), g.trail.clone(), order)).collect();
    seeds.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| order.cmp(&x.lead, &y.lead)));
    for g in seeds {
        if let Some(r) = reduce(g.lead, g.trail, &basis, order) {
            push(r, &mut basis, &mut pairs)?;
        }
    }

    while let Some(Reverse(p)) = pairs.pop() {
        let (gi, gj) = (&basis[p.i], &basis[p.j]);
        let s_a = sub_add(&p.lcm, &gi.lead, &gi.trail);
        let s_b = sub_add(&p.lcm, &gj.lead, &gj.trail);
        if let Some(r) = reduce(s_a, s_b, &basis, order) {
            push(r, &mut basis, &mut pairs)?;
        }
    }

    Ok(interreduce(basis, order))
}

/// `l - lead + trail`: the term obtained by rewriting `x^l` with one binomial.
fn sub_add(l: &[u32], lead: &[u32], trail: &[u32]) -> Exponent {
    l.iter().zip(lead).zip(trail).map(|((&a, &b), &c)| a - b + c).collect()
}

/// Minimalizes a Gröbner basis and reduces every trailing term.
fn interreduce(mut basis: Vec<Binomial>, order: &TermOrder) -> Vec<Binomial> {
    basis.sort_by(|x, y| order.cmp(&x.lead, &y.lead));
    let mut minimal: Vec<Binomial> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|m| divides(&m.lead, &g.lead)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    let mut seen = HashSet::new();
    for k in 0..minimal.len() {
        let trail = normal_form(minimal[k].trail.clone(), &minimal, Some(k));
        let b = Binomial { lead: minimal[k].lead.clone(), trail };
        if seen.insert(b.clone()) {
            out.push(b);
        }
    }
    out
}

/// Generators of `I : (x_0 ⋯ x_{n-1})^∞` for the ideal `I` generated by
/// `generators`, saturating one variable at a time.
///
/// For variable `x`, a Gröbner basis under degrevlex with `x` smallest is
/// computed and every element is divided by the largest power of `x` that
/// divides it. This is exact for homogeneous ideals.
pub fn saturate(generators: Vec<Binomial>, n: usize, limits: Limits) -> Result<Vec<Binomial>> {
    let mut current = generators;
    for x in 0..n {
        let order = TermOrder::with_last(n, x);
        let mut gb = groebner(&current, &order, limits)?;
        for g in gb.iter_mut() {
            g.divide_out(x);
        }
        current = gb;
    }
    Ok(current)
}
