//! Floating-point lab for the representation spaces of the framed McKay
//! quiver and their description through Γ-modules.
//!
//! Matrices act on column vectors. A tensor `A ⊗ B` is laid out with `A` as
//! the slow index, so `e_k ⊗ x_j` sits at position `k·dim B + j`; this is the
//! ordering of `DMatrix::kronecker`.

pub mod jordan;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{McKayError, Result};
use crate::groups::{build_group, GroupData, GroupSpec};
use crate::mckay::{mckay_graph, McKayGraph};

pub type CMat = DMatrix<Complex64>;

/// Relative singular-value cutoff for rank decisions.
pub const RANK_TOL: f64 = 1e-8;
/// Tolerance for the defining relations of the explicit models.
pub const MODEL_TOL: f64 = 1e-10;
/// Frobenius tolerance for exact identities.
pub const EQ_TOL: f64 = 1e-9;
/// Tolerance for identities that pass through a solve or a round trip.
pub const ROUND_TRIP_TOL: f64 = 1e-8;
/// Brackets smaller than this are treated as zero during calibration.
pub const BRACKET_TOL: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn root_of_unity(n: u32, k: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn from_rows(rows: &[&[Complex64]]) -> CMat {
    let ncols = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

pub fn hstack(nrows: usize, parts: &[CMat]) -> CMat {
    let ncols = parts.iter().map(|p| p.ncols()).sum();
    let mut out = CMat::zeros(nrows, ncols);
    let mut at = 0;
    for p in parts {
        out.view_mut((0, at), (nrows, p.ncols())).copy_from(p);
        at += p.ncols();
    }
    out
}

pub fn vstack(ncols: usize, parts: &[CMat]) -> CMat {
    let nrows = parts.iter().map(|p| p.nrows()).sum();
    let mut out = CMat::zeros(nrows, ncols);
    let mut at = 0;
    for p in parts {
        out.view_mut((at, 0), (p.nrows(), ncols)).copy_from(p);
        at += p.nrows();
    }
    out
}

pub fn block_diag(blocks: &[CMat]) -> CMat {
    let r = blocks.iter().map(|b| b.nrows()).sum();
    let cc = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(r, cc);
    let (mut i, mut j) = (0, 0);
    for b in blocks {
        out.view_mut((i, j), (b.nrows(), b.ncols())).copy_from(b);
        i += b.nrows();
        j += b.ncols();
    }
    out
}

/// Orthonormal basis of the column span, as columns.
pub fn orth(m: &CMat) -> CMat {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested u");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| smax > 0.0 && svd.singular_values[i] > RANK_TOL * smax)
        .collect();
    CMat::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

pub fn rank(m: &CMat) -> usize {
    orth(m).ncols()
}

/// Orthonormal basis of the null space, as columns.
pub fn null_space(a: &CMat) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    // Pad so that the SVD returns a full set of right singular vectors.
    let padded = if a.nrows() < n { vstack(n, &[a.clone(), CMat::zeros(n - a.nrows(), n)]) } else { a.clone() };
    let svd = padded.svd(false, true);
    let v = svd.v_t.expect("requested v_t").adjoint();
    let smax = svd.singular_values.max().max(1.0);
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= RANK_TOL * smax).collect();
    CMat::from_fn(n, keep.len(), |i, j| v[(i, keep[j])])
}

fn unvec(v: &[Complex64], nrows: usize, ncols: usize) -> CMat {
    CMat::from_column_slice(nrows, ncols, v)
}

/// Basis of `{F : dst(g)·F = F·src(g) for every generator g}`, orthonormal
/// for the Frobenius inner product.
pub fn equivariant_maps(src: &[CMat], dst: &[CMat]) -> Vec<CMat> {
    let q = src.first().map_or(0, |m| m.nrows());
    let p = dst.first().map_or(0, |m| m.nrows());
    if p == 0 || q == 0 {
        return Vec::new();
    }
    let blocks: Vec<CMat> = src
        .iter()
        .zip(dst)
        .map(|(b, a)| identity(q).kronecker(a) - b.transpose().kronecker(&identity(p)))
        .collect();
    let constraints = vstack(p * q, &blocks);
    let ns = null_space(&constraints);
    (0..ns.ncols()).map(|j| unvec(ns.column(j).as_slice(), p, q)).collect()
}

/// Coordinates of `f` in an orthonormal basis of equivariant maps.
fn coordinates(basis: &[CMat], f: &CMat) -> Vec<Complex64> {
    basis.iter().map(|b| b.dotc(f)).collect()
}

/// Explicit unitary matrices for the irreducible representations.
#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub spec: GroupSpec,
    /// `irreps[χ][k]` is the image of generator `k`, vertices in table order.
    pub irreps: Vec<Vec<CMat>>,
    pub std: Vec<CMat>,
    pub degrees: Vec<usize>,
    /// Word in the generators for each conjugacy class.
    pub class_words: Vec<Vec<usize>>,
}

impl MatrixModel {
    pub fn num_generators(&self) -> usize {
        self.std.len()
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    /// `X_std ⊗ X_χ` on each generator.
    pub fn std_tensor(&self, chi: usize) -> Vec<CMat> {
        self.std.iter().zip(&self.irreps[chi]).map(|(s, r)| s.kronecker(r)).collect()
    }
}

pub fn eval_word(gens: &[CMat], word: &[usize], dim: usize) -> CMat {
    word.iter().fold(identity(dim), |acc, &k| acc * &gens[k])
}

fn bd_candidates(m: u32) -> (Vec<CMat>, Vec<Vec<CMat>>) {
    let two_m = 2 * m;
    let z = |k: i64| root_of_unity(two_m, k);
    let zero = c(0.0);
    let std = vec![from_rows(&[&[z(1), zero], &[zero, z(-1)]]), from_rows(&[&[zero, c(1.0)], &[c(-1.0), zero]])];
    let mut cands = Vec::new();
    let i = Complex64::i();
    let ones: Vec<(Complex64, Complex64)> = if m.is_multiple_of(2) {
        vec![(c(1.0), c(1.0)), (c(1.0), c(-1.0)), (c(-1.0), c(1.0)), (c(-1.0), c(-1.0))]
    } else {
        vec![(c(1.0), c(1.0)), (c(1.0), c(-1.0)), (c(-1.0), i), (c(-1.0), -i)]
    };
    for (s, t) in ones {
        cands.push(vec![CMat::from_element(1, 1, s), CMat::from_element(1, 1, t)]);
    }
    for k in 1..m as i64 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        cands.push(vec![
            from_rows(&[&[z(k), zero], &[zero, z(-k)]]),
            from_rows(&[&[zero, c(sign)], &[c(1.0), zero]]),
        ]);
    }
    (std, cands)
}

/// Builds explicit irreducible representations and matches them to the rows
/// of the character table.
pub fn irrep_matrices(g: &GroupData) -> Result<MatrixModel> {
    let (std, candidates) = match g.spec {
        GroupSpec::Cyclic(l) => {
            // Generator diag(ζ⁻¹, ζ); the character is the same as for its inverse.
            let std = vec![from_rows(&[&[root_of_unity(l, -1), c(0.0)], &[c(0.0), root_of_unity(l, 1)]])];
            let cands = (0..l as i64).map(|j| vec![CMat::from_element(1, 1, root_of_unity(l, j))]).collect();
            (std, cands)
        }
        GroupSpec::BinaryDihedral(m) => bd_candidates(m),
        other => return Err(McKayError::UnsupportedFamily(other.to_string())),
    };
    let class_words: Vec<Vec<usize>> = g
        .classes
        .iter()
        .map(|cl| cl.word.clone().ok_or_else(|| McKayError::UnsupportedFamily(g.spec.to_string())))
        .collect::<Result<_>>()?;
    let character = |gens: &[CMat]| -> Vec<Complex64> {
        let dim = gens[0].nrows();
        class_words.iter().map(|w| eval_word(gens, w, dim).trace()).collect()
    };
    let mut irreps: Vec<Option<Vec<CMat>>> = vec![None; g.num_irreps()];
    for cand in candidates {
        let chi = character(&cand);
        let row = g.table.iter().position(|row| {
            row.iter().zip(&chi).all(|(exact, approx)| (exact.to_complex() - approx).norm() < EQ_TOL)
        });
        match row {
            Some(j) if irreps[j].is_none() => irreps[j] = Some(cand),
            _ => return Err(McKayError::DimensionMismatch(format!("{}: explicit irrep matches no free row", g.spec))),
        }
    }
    let irreps: Vec<Vec<CMat>> = irreps
        .into_iter()
        .enumerate()
        .map(|(j, r)| r.ok_or_else(|| McKayError::DimensionMismatch(format!("{}: no model for row {j}", g.spec))))
        .collect::<Result<_>>()?;
    let std_char = character(&std);
    if std_char.iter().zip(&g.std).any(|(a, e)| (e.to_complex() - a).norm() > EQ_TOL) {
        return Err(McKayError::DimensionMismatch(format!("{}: standard matrices have the wrong character", g.spec)));
    }
    Ok(MatrixModel { spec: g.spec, degrees: g.degrees.iter().map(|d| *d as usize).collect(), irreps, std, class_words })
}

/// Largest residual of the defining relations over all irreducible models.
pub fn relation_residual(model: &MatrixModel) -> f64 {
    let check = |gens: &[CMat]| -> f64 {
        let d = gens[0].nrows();
        let id = identity(d);
        match model.spec {
            GroupSpec::Cyclic(l) => (eval_word(gens, &vec![0; l as usize], d) - id).norm(),
            GroupSpec::BinaryDihedral(m) => {
                let a_m = eval_word(gens, &vec![0; m as usize], d);
                let a_inv = eval_word(gens, &vec![0; 2 * m as usize - 1], d);
                let r1 = (eval_word(gens, &vec![0; 2 * m as usize], d) - &id).norm();
                let r2 = (eval_word(gens, &[1, 1], d) - a_m).norm();
                let b_inv = gens[1].clone().try_inverse().expect("unitary");
                let r3 = (&gens[1] * &gens[0] * b_inv - a_inv).norm();
                r1.max(r2).max(r3)
            }
            _ => f64::INFINITY,
        }
    };
    model.irreps.iter().map(|g| check(g)).fold(check(&model.std), f64::max)
}

/// `Hom_Γ(X_std ⊗ X_χ, X_ξ)`.
pub fn hom_basis(model: &MatrixModel, chi: usize, xi: usize) -> Vec<CMat> {
    equivariant_maps(&model.std_tensor(chi), &model.irreps[xi])
}

/// A directed edge of the doubled McKay quiver.
#[derive(Clone, Debug)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    /// Index of the reversed edge.
    pub reverse: usize,
    pub positive: bool,
    /// `y⁰ : X_std ⊗ X_src → X_dst`.
    pub y0: CMat,
    /// Equivariant section of `y⁰`.
    pub y0_sec: CMat,
    pub scale: Complex64,
}

impl Edge {
    pub fn sign(&self) -> f64 {
        if self.positive {
            1.0
        } else {
            -1.0
        }
    }

    pub fn y(&self) -> CMat {
        &self.y0 * self.scale
    }

    pub fn y_sec(&self) -> CMat {
        &self.y0_sec / self.scale
    }
}

/// `[y]_k`: the restriction of `y` to `e_k ⊗ X_src`.
pub fn y_component(y: &CMat, k: usize) -> CMat {
    let w = y.ncols() / 2;
    y.columns(k * w, w).into_owned()
}

/// `[ỹ]_k`: the `e_k ⊗ X_src` rows of a section.
pub fn sec_component(s: &CMat, k: usize) -> CMat {
    let w = s.nrows() / 2;
    s.rows(k * w, w).into_owned()
}

/// `Tr([y_a]₁[y_b]₂ − [y_a]₂[y_b]₁)`.
pub fn bracket(ya: &CMat, yb: &CMat) -> Complex64 {
    (y_component(ya, 0) * y_component(yb, 1) - y_component(ya, 1) * y_component(yb, 0)).trace()
}

#[derive(Clone, Debug)]
pub struct EdgeMaps {
    pub edges: Vec<Edge>,
    pub degrees: Vec<usize>,
}

impl EdgeMaps {
    pub fn outgoing(&self, chi: usize) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.src == chi)
    }
}

/// One flag per undirected edge: `true` reverses the default direction
/// `min → max` (edges listed by vertex pair, then by multiplicity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation(pub Vec<bool>);

fn undirected_edges(graph: &McKayGraph) -> Vec<(usize, usize)> {
    let n = graph.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..graph.mult[i][j] {
                out.push((i, j));
            }
        }
    }
    out
}

impl Orientation {
    /// Cyclic groups: `χ_j → χ_{j+1}`. Otherwise edges point away from the
    /// trivial vertex, ties broken by vertex index.
    pub fn default_for(graph: &McKayGraph) -> Self {
        let n = graph.len();
        let edges = undirected_edges(graph);
        if let GroupSpec::Cyclic(l) = graph.spec {
            let l = l as usize;
            return Orientation(edges.iter().map(|&(i, j)| (i + 1) % l != j).collect());
        }
        let mut dist = vec![usize::MAX; n];
        dist[0] = 0;
        let mut queue = std::collections::VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if graph.mult[v][w] > 0 && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Orientation(edges.iter().map(|&(i, j)| (dist[j], j) < (dist[i], i)).collect())
    }

    pub fn reversed(&self) -> Self {
        Orientation(self.0.iter().map(|f| !f).collect())
    }
}

/// The maps of the two-element group written out by hand: on the edges
/// `0 → 1` the projections `(a, b) ↦ a` and `(a, b) ↦ b`, on the edges
/// `1 → 0` the maps `(a, b) ⊗ c ↦ ac` and `(a, b) ⊗ c ↦ bc`. The first
/// `0 → 1` edge is paired with `bc`, the second with `ac`.
fn two_element_maps() -> Vec<(CMat, CMat)> {
    let first = from_rows(&[&[c(1.0), c(0.0)]]);
    let second = from_rows(&[&[c(0.0), c(1.0)]]);
    vec![(first.clone(), second.clone()), (second, first)]
}

/// Picks nonzero equivariant maps for every edge and sections satisfying
/// `Σ_{h from χ} ỹ_h y_h = id`.
pub fn choose_y0(model: &MatrixModel, graph: &McKayGraph) -> Result<EdgeMaps> {
    if (0..graph.len()).any(|i| graph.mult[i][i] != 0) {
        return Err(McKayError::UnsupportedFamily(format!("{}: McKay graph has loops", model.spec)));
    }
    let mut edges = Vec::new();
    let pairs = undirected_edges(graph);
    let mut seen_pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let explicit = matches!(model.spec, GroupSpec::Cyclic(2));
    for &(i, j) in &pairs {
        let t = *seen_pairs.entry((i, j)).and_modify(|t| *t += 1).or_insert(0);
        let (fwd, bwd) = if explicit {
            two_element_maps()[t].clone()
        } else {
            let f = hom_basis(model, i, j);
            let b = hom_basis(model, j, i);
            if f.len() != graph.mult[i][j] as usize || b.len() != graph.mult[j][i] as usize {
                return Err(McKayError::DimensionMismatch(format!(
                    "hom spaces between {i} and {j} have dimensions {}, {} but multiplicity {}",
                    f.len(),
                    b.len(),
                    graph.mult[i][j]
                )));
            }
            (f[t].clone(), b[t].clone())
        };
        let k = edges.len();
        let blank = CMat::zeros(0, 0);
        edges.push(Edge { src: i, dst: j, reverse: k + 1, positive: true, y0: fwd, y0_sec: blank.clone(), scale: c(1.0) });
        edges.push(Edge { src: j, dst: i, reverse: k, positive: false, y0: bwd, y0_sec: blank, scale: c(1.0) });
    }
    // Sections: the blocks of the inverse of all outgoing maps stacked.
    for chi in 0..graph.len() {
        let out: Vec<usize> = (0..edges.len()).filter(|&h| edges[h].src == chi).collect();
        let width = 2 * model.degrees[chi];
        let stacked = vstack(width, &out.iter().map(|&h| edges[h].y0.clone()).collect::<Vec<_>>());
        if stacked.nrows() != width {
            return Err(McKayError::DimensionMismatch(format!("outgoing maps at {chi} do not square up")));
        }
        let inv = stacked
            .try_inverse()
            .ok_or_else(|| McKayError::DimensionMismatch(format!("outgoing maps at {chi} are not jointly invertible")))?;
        let mut at = 0;
        for &h in &out {
            let k = edges[h].y0.nrows();
            edges[h].y0_sec = inv.columns(at, k).into_owned();
            at += k;
        }
    }
    Ok(EdgeMaps { edges, degrees: model.degrees.clone() })
}

/// Sets the signs from `orientation` and rescales so that
/// `l_h·l_h̄·Tr([y_h]₁[y_h̄]₂ − [y_h]₂[y_h̄]₁) = ε(h)`, with `l_h = 1` on
/// positive edges.
pub fn calibrate_scalars(maps: &EdgeMaps, orientation: &Orientation) -> Result<EdgeMaps> {
    let mut out = maps.clone();
    if orientation.0.len() * 2 != out.edges.len() {
        return Err(McKayError::DimensionMismatch("orientation length".into()));
    }
    for (u, &flip) in orientation.0.iter().enumerate() {
        let (a, b) = (2 * u, 2 * u + 1);
        let (pos, neg) = if flip { (b, a) } else { (a, b) };
        let br = bracket(&out.edges[pos].y0, &out.edges[neg].y0);
        if br.norm() < BRACKET_TOL {
            return Err(McKayError::DegenerateBracket(pos));
        }
        out.edges[pos].positive = true;
        out.edges[pos].scale = c(1.0);
        out.edges[neg].positive = false;
        out.edges[neg].scale = c(1.0) / br;
    }
    Ok(out)
}

/// Model, graph and calibrated maps for one group.
#[derive(Clone, Debug)]
pub struct Lab {
    pub group: GroupData,
    pub graph: McKayGraph,
    pub model: MatrixModel,
    pub maps: EdgeMaps,
}

impl Lab {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        let group = build_group(spec)?;
        let model = irrep_matrices(&group)?;
        let graph = mckay_graph(&group)?;
        let raw = choose_y0(&model, &graph)?;
        let maps = calibrate_scalars(&raw, &Orientation::default_for(&graph))?;
        Ok(Lab { group, graph, model, maps })
    }
}

/// `max_χ ‖Σ_{h from χ} ỹ_h y_h − id‖` together with `max_h ‖y_h ỹ_h − id‖`.
pub fn sum_works_residual(maps: &EdgeMaps) -> (f64, f64) {
    let mut sum_res: f64 = 0.0;
    let mut sec_res: f64 = 0.0;
    for chi in 0..maps.degrees.len() {
        let w = 2 * maps.degrees[chi];
        let mut acc = CMat::zeros(w, w);
        for (_, e) in maps.outgoing(chi) {
            acc += e.y_sec() * e.y();
            sec_res = sec_res.max((e.y() * e.y_sec() - identity(e.y0.nrows())).norm());
        }
        sum_res = sum_res.max((acc - identity(w)).norm());
    }
    (sum_res, sec_res)
}

/// `max_h |l_h l_h̄ B(h, h̄) − ε(h)|`.
pub fn calibration_residual(maps: &EdgeMaps) -> f64 {
    maps.edges
        .iter()
        .map(|e| (bracket(&e.y(), &maps.edges[e.reverse].y()) - c(e.sign())).norm())
        .fold(0.0, f64::max)
}

/// Largest equivariance residual of the chosen maps and sections.
pub fn edge_equivariance_residual(model: &MatrixModel, maps: &EdgeMaps) -> f64 {
    let mut worst: f64 = 0.0;
    for e in &maps.edges {
        for (k, t) in model.std_tensor(e.src).iter().enumerate() {
            let r = &model.irreps[e.dst][k];
            worst = worst.max((r * e.y() - e.y() * t).norm());
            worst = worst.max((t * e.y_sec() - e.y_sec() * r).norm());
        }
    }
    worst
}

/// Representation of the doubled framed quiver.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverRep {
    pub dims: Vec<usize>,
    pub fdims: Vec<usize>,
    /// One map `V_src → V_dst` per edge, in `EdgeMaps` order.
    pub x: Vec<CMat>,
    pub v1: Vec<CMat>,
    pub v2: Vec<CMat>,
}

impl QuiverRep {
    pub fn zero(maps: &EdgeMaps, dims: &[usize], fdims: &[usize]) -> Self {
        QuiverRep {
            dims: dims.to_vec(),
            fdims: fdims.to_vec(),
            x: maps.edges.iter().map(|e| CMat::zeros(dims[e.dst], dims[e.src])).collect(),
            v1: (0..dims.len()).map(|i| CMat::zeros(dims[i], fdims[i])).collect(),
            v2: (0..dims.len()).map(|i| CMat::zeros(fdims[i], dims[i])).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.x.iter().chain(&self.v1).chain(&self.v2).map(|m| m.iter().map(|z| z.norm()).fold(0.0, f64::max)).fold(0.0, f64::max)
    }
}

/// Γ-module datum `(M, M^f, Δ, Z₁, Z₂)` with explicit actions.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleRep {
    /// Action of each generator on `M`.
    pub rho: Vec<CMat>,
    pub rho_f: Vec<CMat>,
    /// `Δ_{e₁}`, `Δ_{e₂}`.
    pub delta: [CMat; 2],
    pub z1: CMat,
    pub z2: CMat,
}

impl ModuleRep {
    pub fn dim(&self) -> usize {
        self.delta[0].nrows()
    }

    pub fn conjugate(&self, p: &CMat, q: &CMat) -> Result<ModuleRep> {
        let pi = p.clone().try_inverse().ok_or_else(|| McKayError::DimensionMismatch("singular change of basis".into()))?;
        let qi = q.clone().try_inverse().ok_or_else(|| McKayError::DimensionMismatch("singular change of basis".into()))?;
        Ok(ModuleRep {
            rho: self.rho.iter().map(|r| p * r * &pi).collect(),
            rho_f: self.rho_f.iter().map(|r| q * r * &qi).collect(),
            delta: [p * &self.delta[0] * &pi, p * &self.delta[1] * &pi],
            z1: p * &self.z1 * &qi,
            z2: q * &self.z2 * &pi,
        })
    }
}

/// Largest residual of `ρ(g)Δ_{e_k}ρ(g)⁻¹ = Σ_j ρ_std(g)_{jk} Δ_{e_j}` and of
/// the equivariance of `Z₁`, `Z₂`.
pub fn module_equivariance_residual(m: &ModuleRep, std: &[CMat]) -> f64 {
    let mut worst: f64 = 0.0;
    for ((r, rf), s) in m.rho.iter().zip(&m.rho_f).zip(std) {
        let ri = r.clone().try_inverse().expect("group elements are invertible");
        for k in 0..2 {
            let lhs = r * &m.delta[k] * &ri;
            let rhs = &m.delta[0] * s[(0, k)] + &m.delta[1] * s[(1, k)];
            worst = worst.max((lhs - rhs).norm());
        }
        worst = worst.max((r * &m.z1 - &m.z1 * rf).norm());
        worst = worst.max((rf * &m.z2 - &m.z2 * r).norm());
    }
    worst
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut at = 0;
    sizes
        .map(|s| {
            let o = at;
            at += s;
            o
        })
        .collect()
}

/// The functor from quiver representations to Γ-modules.
pub fn functor_f(q: &QuiverRep, maps: &EdgeMaps, model: &MatrixModel) -> Result<ModuleRep> {
    let n = model.len();
    if q.dims.len() != n || q.fdims.len() != n || q.x.len() != maps.edges.len() {
        return Err(McKayError::DimensionMismatch("quiver data does not match the McKay quiver".into()));
    }
    let deg = &model.degrees;
    let off = offsets((0..n).map(|i| q.dims[i] * deg[i]));
    let off_f = offsets((0..n).map(|i| q.fdims[i] * deg[i]));
    let total: usize = (0..n).map(|i| q.dims[i] * deg[i]).sum();
    let total_f: usize = (0..n).map(|i| q.fdims[i] * deg[i]).sum();
    let rho = (0..model.num_generators())
        .map(|k| block_diag(&(0..n).map(|i| identity(q.dims[i]).kronecker(&model.irreps[i][k])).collect::<Vec<_>>()))
        .collect();
    let rho_f = (0..model.num_generators())
        .map(|k| block_diag(&(0..n).map(|i| identity(q.fdims[i]).kronecker(&model.irreps[i][k])).collect::<Vec<_>>()))
        .collect();
    let mut delta = [CMat::zeros(total, total), CMat::zeros(total, total)];
    for (h, e) in maps.edges.iter().enumerate() {
        let x = &q.x[h];
        if x.nrows() != q.dims[e.dst] || x.ncols() != q.dims[e.src] {
            return Err(McKayError::DimensionMismatch(format!("edge {h} map has shape {}x{}", x.nrows(), x.ncols())));
        }
        let y = e.y();
        for (k, dk) in delta.iter_mut().enumerate() {
            let blk = x.kronecker(&y_component(&y, k));
            let mut view = dk.view_mut((off[e.dst], off[e.src]), (blk.nrows(), blk.ncols()));
            view += &blk;
        }
    }
    let mut z1 = CMat::zeros(total, total_f);
    let mut z2 = CMat::zeros(total_f, total);
    for i in 0..n {
        let b1 = q.v1[i].kronecker(&(identity(deg[i]) / c(deg[i] as f64)));
        z1.view_mut((off[i], off_f[i]), (b1.nrows(), b1.ncols())).copy_from(&b1);
        let b2 = q.v2[i].kronecker(&identity(deg[i]));
        z2.view_mut((off_f[i], off[i]), (b2.nrows(), b2.ncols())).copy_from(&b2);
    }
    Ok(ModuleRep { rho, rho_f, delta, z1, z2 })
}

/// Orthonormal bases of `Hom_Γ(X_χ, M)` and `Hom_Γ(X_χ, M^f)`.
#[derive(Clone, Debug)]
pub struct IsotypeBases {
    pub v: Vec<Vec<CMat>>,
    pub vf: Vec<Vec<CMat>>,
}

pub fn isotype_bases(m: &ModuleRep, model: &MatrixModel) -> IsotypeBases {
    let v = (0..model.len()).map(|i| equivariant_maps(&model.irreps[i], &m.rho)).collect();
    let vf = (0..model.len()).map(|i| equivariant_maps(&model.irreps[i], &m.rho_f)).collect();
    IsotypeBases { v, vf }
}

fn coordinate_matrix(basis: &[CMat], images: impl Iterator<Item = CMat>) -> CMat {
    let cols: Vec<Vec<Complex64>> = images.map(|f| coordinates(basis, &f)).collect();
    CMat::from_fn(basis.len(), cols.len(), |i, j| cols[j][i])
}

/// The functor from Γ-modules to quiver representations, in the bases
/// returned alongside.
pub fn functor_g(m: &ModuleRep, maps: &EdgeMaps, model: &MatrixModel) -> Result<(QuiverRep, IsotypeBases)> {
    let b = isotype_bases(m, model);
    let n = model.len();
    let found: usize = (0..n).map(|i| b.v[i].len() * model.degrees[i]).sum();
    if found != m.dim() {
        return Err(McKayError::DimensionMismatch(format!("isotypic parts cover {found} of {} dimensions", m.dim())));
    }
    let x = maps
        .edges
        .iter()
        .map(|e| {
            let sec = e.y_sec();
            coordinate_matrix(
                &b.v[e.dst],
                b.v[e.src].iter().map(|f| {
                    &m.delta[0] * f * sec_component(&sec, 0) + &m.delta[1] * f * sec_component(&sec, 1)
                }),
            )
        })
        .collect();
    let v1 = (0..n)
        .map(|i| coordinate_matrix(&b.v[i], b.vf[i].iter().map(|f| &m.z1 * f * c(model.degrees[i] as f64))))
        .collect();
    let v2 = (0..n).map(|i| coordinate_matrix(&b.vf[i], b.v[i].iter().map(|f| &m.z2 * f))).collect();
    let q = QuiverRep {
        dims: b.v.iter().map(Vec::len).collect(),
        fdims: b.vf.iter().map(Vec::len).collect(),
        x,
        v1,
        v2,
    };
    Ok((q, b))
}

/// `Δ_{e₁}Δ_{e₂} − Δ_{e₂}Δ_{e₁} + Z₁Z₂`.
pub fn moment_map_module(m: &ModuleRep) -> CMat {
    &m.delta[0] * &m.delta[1] - &m.delta[1] * &m.delta[0] + &m.z1 * &m.z2
}

/// Per vertex `Σ_{h into i} ε(h) x_h x_h̄ + v¹_i v²_i`.
pub fn moment_map_quiver(q: &QuiverRep, maps: &EdgeMaps) -> Vec<CMat> {
    (0..q.dims.len())
        .map(|i| {
            let mut acc = &q.v1[i] * &q.v2[i];
            for (h, e) in maps.edges.iter().enumerate() {
                if e.dst == i {
                    acc += &q.x[h] * &q.x[e.reverse] * c(e.sign());
                }
            }
            acc
        })
        .collect()
}

pub fn omega_quiver(a: &QuiverRep, b: &QuiverRep, maps: &EdgeMaps) -> Complex64 {
    let edges: Complex64 =
        maps.edges.iter().enumerate().map(|(h, e)| (&a.x[h] * &b.x[e.reverse]).trace() * e.sign()).sum();
    let framing: Complex64 =
        (0..a.dims.len()).map(|i| (&a.v1[i] * &b.v2[i] - &b.v1[i] * &a.v2[i]).trace()).sum();
    edges + framing
}

pub fn omega_module(a: &ModuleRep, b: &ModuleRep) -> Complex64 {
    (&a.delta[0] * &b.delta[1] - &a.delta[1] * &b.delta[0]).trace() + (&a.z1 * &b.z2 - &b.z1 * &a.z2).trace()
}

/// `⊕_χ μ_χ ⊗ (1/δ_χ) id`.
pub fn scaled_embedding(mu: &[CMat], degrees: &[usize]) -> CMat {
    block_diag(&mu.iter().zip(degrees).map(|(m, d)| m.kronecker(&(identity(*d) / c(*d as f64)))).collect::<Vec<_>>())
}

fn inverse(m: &CMat) -> Result<CMat> {
    m.clone().try_inverse().ok_or_else(|| McKayError::DimensionMismatch("comparison map is singular".into()))
}

/// Residual of `G(F(q)) ≅ q` after conjugating by the unit isomorphism.
pub fn gf_round_trip_residual(q: &QuiverRep, maps: &EdgeMaps, model: &MatrixModel) -> Result<f64> {
    let m = functor_f(q, maps, model)?;
    let (q2, bases) = functor_g(&m, maps, model)?;
    let deg = &model.degrees;
    let n = model.len();
    let off = offsets((0..n).map(|i| q.dims[i] * deg[i]));
    let off_f = offsets((0..n).map(|i| q.fdims[i] * deg[i]));
    let unit = |basis: &[CMat], count: usize, start: usize, size: usize, k: usize| -> CMat {
        coordinate_matrix(
            basis,
            (0..count).map(|a| {
                let mut f = CMat::zeros(size, k);
                f.view_mut((start + a * k, 0), (k, k)).copy_from(&identity(k));
                f
            }),
        )
    };
    let total = m.dim();
    let total_f = m.z1.ncols();
    let h: Vec<CMat> = (0..n).map(|i| unit(&bases.v[i], q.dims[i], off[i], total, deg[i])).collect();
    let hf: Vec<CMat> = (0..n).map(|i| unit(&bases.vf[i], q.fdims[i], off_f[i], total_f, deg[i])).collect();
    let mut worst: f64 = 0.0;
    for (k, e) in maps.edges.iter().enumerate() {
        let back = inverse(&h[e.dst])? * &q2.x[k] * &h[e.src];
        worst = worst.max((back - &q.x[k]).norm());
    }
    for i in 0..n {
        worst = worst.max((inverse(&h[i])? * &q2.v1[i] * &hf[i] - &q.v1[i]).norm());
        worst = worst.max((inverse(&hf[i])? * &q2.v2[i] * &h[i] - &q.v2[i]).norm());
    }
    Ok(worst)
}

/// Residual of `F(G(m)) ≅ m` after conjugating by the counit isomorphism.
pub fn fg_round_trip_residual(m: &ModuleRep, maps: &EdgeMaps, model: &MatrixModel) -> Result<f64> {
    let (q, bases) = functor_g(m, maps, model)?;
    let m2 = functor_f(&q, maps, model)?;
    let counit = |basis: &[Vec<CMat>], rows: usize| -> CMat {
        let cols: Vec<CMat> = basis.iter().flat_map(|b| b.iter().cloned()).collect();
        hstack(rows, &cols)
    };
    let e = counit(&bases.v, m.dim());
    let ef = counit(&bases.vf, m.z1.ncols());
    let ei = inverse(&e)?;
    let efi = if ef.nrows() == 0 { CMat::zeros(0, 0) } else { inverse(&ef)? };
    let mut worst: f64 = 0.0;
    for k in 0..2 {
        worst = worst.max((&e * &m2.delta[k] * &ei - &m.delta[k]).norm());
    }
    for (r2, r) in m2.rho.iter().zip(&m.rho) {
        worst = worst.max((&e * r2 * &ei - r).norm());
    }
    worst = worst.max((&e * &m2.z1 * &efi - &m.z1).norm());
    worst = worst.max((&ef * &m2.z2 * &ei - &m.z2).norm());
    Ok(worst)
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng>(rng: &mut R, r: usize, cc: usize) -> CMat {
    CMat::from_fn(r, cc, |_, _| random_complex(rng))
}

pub fn random_quiver_rep<R: Rng>(rng: &mut R, maps: &EdgeMaps, dims: &[usize], fdims: &[usize]) -> QuiverRep {
    QuiverRep {
        dims: dims.to_vec(),
        fdims: fdims.to_vec(),
        x: maps.edges.iter().map(|e| random_matrix(rng, dims[e.dst], dims[e.src])).collect(),
        v1: (0..dims.len()).map(|i| random_matrix(rng, dims[i], fdims[i])).collect(),
        v2: (0..dims.len()).map(|i| random_matrix(rng, fdims[i], dims[i])).collect(),
    }
}

/// Well-conditioned random change of basis.
pub fn random_basis_change<R: Rng>(rng: &mut R, n: usize) -> CMat {
    identity(n) * c(2.0) + random_matrix(rng, n, n) * c(0.5 / (n.max(1) as f64).sqrt())
}

/// `P·F(q)·P⁻¹` for random `q` and `P`, so the module is not block diagonal.
pub fn random_module_rep<R: Rng>(
    rng: &mut R,
    maps: &EdgeMaps,
    model: &MatrixModel,
    dims: &[usize],
    fdims: &[usize],
) -> Result<ModuleRep> {
    let q = random_quiver_rep(rng, maps, dims, fdims);
    let m = functor_f(&q, maps, model)?;
    let p = random_basis_change(rng, m.dim());
    let pf = random_basis_change(rng, m.z1.ncols());
    m.conjugate(&p, &pf)
}

fn random_dims<R: Rng>(rng: &mut R, n: usize) -> (Vec<usize>, Vec<usize>) {
    let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let mut fdims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
    fdims[0] = 1;
    (dims, fdims)
}

/// Maximum residual per invariant over a seeded randomized suite.
#[derive(Clone, Debug, Serialize)]
pub struct LabReport {
    pub group: String,
    pub seed: u64,
    pub samples: usize,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub passed: bool,
}

impl LabReport {
    pub fn failures(&self) -> Vec<String> {
        self.residuals
            .iter()
            .filter(|(k, v)| !v.is_finite() || **v > self.tolerances[*k])
            .map(|(k, _)| k.clone())
            .collect()
    }
}

/// Per-sample seeds drawn from the master seed, so samples are independent
/// of evaluation order.
pub fn sample_seeds(seed: u64, samples: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| master.next_u64()).collect()
}

pub fn run_lab(spec: GroupSpec, seed: u64, samples: usize) -> Result<LabReport> {
    let lab = Lab::new(spec)?;
    let (model, maps) = (&lab.model, &lab.maps);
    let n = model.len();
    let mut res: BTreeMap<String, f64> = BTreeMap::new();
    let mut tol: BTreeMap<String, f64> = BTreeMap::new();
    let mut record = |name: &str, value: f64, t: f64| {
        let slot = res.entry(name.to_string()).or_insert(0.0);
        *slot = if value.is_nan() { f64::INFINITY } else { slot.max(value) };
        tol.insert(name.to_string(), t);
    };

    record("model_relations", relation_residual(model), MODEL_TOL);
    let (sum_res, sec_res) = sum_works_residual(maps);
    record("sections_sum_to_identity", sum_res, EQ_TOL);
    record("sections_split_maps", sec_res, EQ_TOL);
    record("edge_map_equivariance", edge_equivariance_residual(model, maps), EQ_TOL);
    record("calibration", calibration_residual(maps), EQ_TOL);
    for orientation in [Orientation::default_for(&lab.graph), Orientation::default_for(&lab.graph).reversed()] {
        let other = calibrate_scalars(&choose_y0(model, &lab.graph)?, &orientation)?;
        record("calibration_any_orientation", calibration_residual(&other), EQ_TOL);
    }

    let zero_dims = vec![1; n];
    let zero = functor_f(&QuiverRep::zero(maps, &zero_dims, &zero_dims), maps, model)?;
    let zero_norm = zero.delta[0].norm() + zero.delta[1].norm() + zero.z1.norm() + zero.z2.norm();
    record("zero_maps_to_zero", zero_norm, EQ_TOL);

    for s in sample_seeds(seed, samples) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (dims, fdims) = random_dims(&mut rng, n);
        let a = random_quiver_rep(&mut rng, maps, &dims, &fdims);
        let b = random_quiver_rep(&mut rng, maps, &dims, &fdims);
        let fa = functor_f(&a, maps, model)?;
        let fb = functor_f(&b, maps, model)?;
        record("module_equivariance", module_equivariance_residual(&fa, &model.std), EQ_TOL);
        record("gf_round_trip", gf_round_trip_residual(&a, maps, model)?, ROUND_TRIP_TOL);
        let mu = moment_map_module(&fa);
        let expected = scaled_embedding(&moment_map_quiver(&a, maps), &model.degrees);
        record("moment_map_diagram", (mu.clone() - expected).norm(), ROUND_TRIP_TOL);
        let mut equi: f64 = 0.0;
        for r in &fa.rho {
            equi = equi.max((r * &mu - &mu * r).norm());
        }
        record("moment_map_equivariance", equi, EQ_TOL);
        let lhs = omega_quiver(&a, &b, maps);
        record("symplectic_quiver_to_module", (lhs - omega_module(&fa, &fb)).norm(), ROUND_TRIP_TOL);

        let p = random_basis_change(&mut rng, fa.dim());
        let pf = random_basis_change(&mut rng, fa.z1.ncols());
        let ma = fa.conjugate(&p, &pf)?;
        let mb = fb.conjugate(&p, &pf)?;
        record("fg_round_trip", fg_round_trip_residual(&ma, maps, model)?, ROUND_TRIP_TOL);
        let (ga, _) = functor_g(&ma, maps, model)?;
        let (gb, _) = functor_g(&mb, maps, model)?;
        record(
            "symplectic_module_to_quiver",
            (omega_quiver(&ga, &gb, maps) - omega_module(&ma, &mb)).norm(),
            ROUND_TRIP_TOL,
        );
    }
    let mut report = LabReport {
        group: spec.to_string(),
        seed,
        samples,
        residuals: res,
        tolerances: tol,
        passed: false,
    };
    report.passed = report.failures().is_empty();
    Ok(report)
}
