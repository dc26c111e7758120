//! Affine Weyl group actions on dimension, stability and deformation vectors.
//!
//! A word `[a, b, c]` denotes the product `s_a s_b s_c`; applied to a vector it
//! acts as `s_a(s_b(s_c(x)))`, so the rightmost letter acts first.
//!
//! The action on dimension vectors is the affine one twisted by Λ₀: for
//! `χ = χ₀` the reflected entry picks up an extra `+1`. Writing `Λ₀ − d` for a
//! level-one weight, `s_χ.d` corresponds to the linear reflection of that
//! weight, which is what makes `wt` an orbit invariant.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex;
use num_rational::Rational64;

use crate::error::{McKayError, Result};
use crate::mckay::RootDatum;

pub type WeylWord = Vec<usize>;

/// Scalars a stability or deformation vector may carry.
pub trait ParamEntry: Clone + PartialEq {
    fn negated(&self) -> Self;
    /// `self + k·other`.
    fn add_scaled(&self, other: &Self, k: i64) -> Self;
}

impl ParamEntry for Rational64 {
    fn negated(&self) -> Self {
        -*self
    }

    fn add_scaled(&self, other: &Self, k: i64) -> Self {
        *self + *other * k
    }
}

impl ParamEntry for Complex<Rational64> {
    fn negated(&self) -> Self {
        -*self
    }

    fn add_scaled(&self, other: &Self, k: i64) -> Self {
        *self + *other * Rational64::from_integer(k)
    }
}

/// `s_χ.d`.
pub fn reflect_dim(r: &RootDatum, chi: usize, d: &[i64]) -> Vec<i64> {
    let mut out = d.to_vec();
    let neighbours: i64 = (0..r.rank()).map(|xi| r.mult(chi, xi) * d[xi]).sum();
    out[chi] = neighbours - d[chi] + i64::from(chi == 0);
    out
}

/// `s_χ.θ`; each edge `χ — ξ` contributes `θ(χ)` once.
pub fn reflect_theta<T: ParamEntry>(r: &RootDatum, chi: usize, theta: &[T]) -> Vec<T> {
    let mut out = theta.to_vec();
    for (xi, slot) in out.iter_mut().enumerate() {
        if xi == chi {
            *slot = theta[chi].negated();
        } else if r.mult(chi, xi) != 0 {
            *slot = theta[xi].add_scaled(&theta[chi], r.mult(chi, xi));
        }
    }
    out
}

/// `s_χ.λ`, the same formula as for stability vectors.
pub fn reflect_lambda<T: ParamEntry>(r: &RootDatum, chi: usize, lambda: &[T]) -> Vec<T> {
    reflect_theta(r, chi, lambda)
}

pub fn apply_word_dim(r: &RootDatum, w: &[usize], d: &[i64]) -> Vec<i64> {
    w.iter().rev().fold(d.to_vec(), |acc, &chi| reflect_dim(r, chi, &acc))
}

pub fn apply_word_param<T: ParamEntry>(r: &RootDatum, w: &[usize], x: &[T]) -> Vec<T> {
    w.iter().rev().fold(x.to_vec(), |acc, &chi| reflect_theta(r, chi, &acc))
}

/// `a = (d_χ − d_{χ₀} δ_χ)_{χ≠χ₀}`, the finite part of `d`.
pub fn finite_part(r: &RootDatum, d: &[i64]) -> Vec<i64> {
    (1..r.rank()).map(|i| d[i] - d[0] * r.delta[i]).collect()
}

/// `aᵀ C b` for the finite Cartan block.
pub fn finite_pairing(r: &RootDatum, a: &[i64], b: &[i64]) -> i64 {
    let c = &r.finite_cartan;
    (0..a.len()).map(|i| a[i] * (0..b.len()).map(|j| c[i][j] * b[j]).sum::<i64>()).sum()
}

/// `wt(d) = d_{χ₀} − ½ aᵀCa`.
pub fn weight(d: &[i64], r: &RootDatum) -> i64 {
    let a = finite_part(r, d);
    let q = finite_pairing(r, &a, &a);
    assert!(q % 2 == 0, "odd norm {q} on a simply-laced root lattice");
    d[0] - q / 2
}

pub fn default_bound(d: &[i64], r: &RootDatum) -> i64 {
    let max_d = d.iter().map(|x| x.abs()).max().unwrap_or(0);
    let max_delta = *r.delta.iter().max().unwrap_or(&1);
    4 * max_d.max(weight(d, r).abs() * max_delta).max(1)
}

/// Shortest word `ω` with `ω.d = wt(d)·δ`, by breadth-first search over the
/// orbit restricted to vectors with all entries of absolute value ≤ `bound`.
/// The search grows from both ends and expands the smaller frontier.
pub fn orbit_witness(d: &[i64], r: &RootDatum, bound: i64) -> Result<WeylWord> {
    let n = r.rank();
    if d.len() != n {
        return Err(McKayError::DimensionMismatch(format!("vector of length {} for rank {n}", d.len())));
    }
    let wt = weight(d, r);
    let target: Vec<i64> = r.delta.iter().map(|x| x * wt).collect();
    if d == target.as_slice() {
        return Ok(Vec::new());
    }
    if d.iter().chain(&target).any(|x| x.abs() > bound) {
        return Err(McKayError::BoundExceeded(bound));
    }
    let mut from_d = Tree::new(d.to_vec());
    let mut from_target = Tree::new(target);
    loop {
        if from_d.frontier.is_empty() || from_target.frontier.is_empty() {
            return Err(McKayError::BoundExceeded(bound));
        }
        let d_side = from_d.frontier.len() <= from_target.frontier.len();
        let (grow, other) = if d_side { (&mut from_d, &from_target) } else { (&mut from_target, &from_d) };
        // Finish the whole level so that the shortest meeting point wins.
        if let Some(meet) = grow.expand(r, bound, other) {
            let mut word = from_target.path_to_root(&meet);
            word.reverse();
            word.extend(from_d.path_to_root(&meet));
            return Ok(word);
        }
    }
}

/// Depth, and the parent with the letter that leads from it.
type SearchNode = (usize, Option<(Vec<i64>, usize)>);

/// One side of the bidirectional search.
struct Tree {
    nodes: HashMap<Vec<i64>, SearchNode>,
    frontier: Vec<Vec<i64>>,
    depth: usize,
}

impl Tree {
    fn new(root: Vec<i64>) -> Self {
        let mut nodes = HashMap::new();
        nodes.insert(root.clone(), (0, None));
        Tree { nodes, frontier: vec![root], depth: 0 }
    }

    fn expand(&mut self, r: &RootDatum, bound: i64, other: &Tree) -> Option<Vec<i64>> {
        let mut next = Vec::new();
        let mut best: Option<(usize, Vec<i64>)> = None;
        for cur in std::mem::take(&mut self.frontier) {
            for chi in 0..r.rank() {
                let v = reflect_dim(r, chi, &cur);
                if v.iter().any(|x| x.abs() > bound) || self.nodes.contains_key(&v) {
                    continue;
                }
                self.nodes.insert(v.clone(), (self.depth + 1, Some((cur.clone(), chi))));
                if let Some((od, _)) = other.nodes.get(&v) {
                    if best.as_ref().is_none_or(|(b, _)| *od < *b) {
                        best = Some((*od, v.clone()));
                    }
                }
                next.push(v);
            }
        }
        self.depth += 1;
        self.frontier = next;
        best.map(|(_, v)| v)
    }

    /// Letters applied when walking from the root to `end`, last-applied first.
    fn path_to_root(&self, end: &[i64]) -> WeylWord {
        let mut word = Vec::new();
        let mut cur = end.to_vec();
        while let Some((_, Some((parent, chi)))) = self.nodes.get(&cur) {
            word.push(*chi);
            cur = parent.clone();
        }
        word
    }
}

fn trace_word(seen: &HashMap<Vec<i64>, Option<(Vec<i64>, usize)>>, end: &[i64]) -> WeylWord {
    // Letters come out last-applied first, which is already word order.
    let mut word = Vec::new();
    let mut cur = end.to_vec();
    while let Some(Some((parent, chi))) = seen.get(&cur) {
        word.push(*chi);
        cur = parent.clone();
    }
    word
}

/// Witness word by repeatedly reflecting at a vertex where the level-one
/// weight `Λ₀ − d` pairs negatively with the simple coroot. The walk ends at
/// the unique dominant element of the orbit, which is `wt(d)·δ`.
pub fn dominant_witness(d: &[i64], r: &RootDatum) -> WeylWord {
    let mut cur = d.to_vec();
    let mut applied = Vec::new();
    loop {
        let ad = r.cartan_apply(&cur);
        match (0..r.rank()).find(|&chi| ad[chi] > i64::from(chi == 0)) {
            Some(chi) => {
                cur = reflect_dim(r, chi, &cur);
                applied.push(chi);
            }
            None => break,
        }
    }
    applied.reverse();
    applied
}

/// Finite root system of the Cartan block, roots written in the simple-root
/// basis indexed by the non-trivial vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRoots {
    /// Sorted lexicographically.
    pub roots: Vec<Vec<i64>>,
    pub positive: Vec<bool>,
    pub highest: Vec<i64>,
}

impl FiniteRoots {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.roots.iter().zip(&self.positive).filter(|(_, p)| **p).map(|(r, _)| r)
    }
}

/// Simple reflection of the finite Weyl group in root coordinates.
pub fn finite_reflect(r: &RootDatum, j: usize, beta: &[i64]) -> Vec<i64> {
    let c = &r.finite_cartan;
    let mut out = beta.to_vec();
    out[j] -= (0..beta.len()).map(|k| c[j][k] * beta[k]).sum::<i64>();
    out
}

pub fn finite_root_system(r: &RootDatum) -> FiniteRoots {
    let k = r.rank() - 1;
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = VecDeque::new();
    for j in 0..k {
        let mut e = vec![0; k];
        e[j] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for j in 0..k {
            let next = finite_reflect(r, j, &beta);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let roots: Vec<Vec<i64>> = seen.into_iter().collect();
    let positive: Vec<bool> = roots.iter().map(|b| b.iter().all(|x| *x >= 0)).collect();
    let highest = roots
        .iter()
        .zip(&positive)
        .filter(|(_, p)| **p)
        .map(|(b, _)| b)
        .max_by_key(|b| b.iter().sum::<i64>())
        .cloned()
        .unwrap_or_default();
    FiniteRoots { roots, positive, highest }
}

/// Word `u` in the finite reflections with `u(τ) = α_i`, where τ is the
/// highest root and `i` a non-trivial vertex (1-based, as in the affine labels).
fn word_to_simple(r: &RootDatum, roots: &FiniteRoots, i: usize) -> WeylWord {
    let k = r.rank() - 1;
    let mut target = vec![0; k];
    target[i - 1] = 1;
    let mut seen: HashMap<Vec<i64>, Option<(Vec<i64>, usize)>> = HashMap::new();
    seen.insert(roots.highest.clone(), None);
    let mut queue = VecDeque::from([roots.highest.clone()]);
    while let Some(cur) = queue.pop_front() {
        if cur == target {
            break;
        }
        for j in 0..k {
            let next = finite_reflect(r, j, &cur);
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), Some((cur.clone(), j + 1)));
                queue.push_back(next);
            }
        }
    }
    trace_word(&seen, &target)
}

/// Word for the translation by the simple root `α_i`: `u s₀ u⁻¹ s_i` with
/// `u(τ) = α_i`. On dimension vectors `t.d ≡ d − α_i` modulo `ℤδ`.
pub fn translation_word(r: &RootDatum, i: usize) -> WeylWord {
    assert!(i >= 1 && i < r.rank(), "translation index must be a non-trivial vertex");
    let roots = finite_root_system(r);
    let u = word_to_simple(r, &roots, i);
    let mut w = u.clone();
    w.push(0);
    w.extend(u.iter().rev());
    w.push(i);
    w
}
