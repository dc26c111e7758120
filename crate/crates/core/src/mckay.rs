//! McKay graph, affine Cartan matrix, the imaginary root δ and the size statistic.

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{McKayError, Result};
use crate::groups::{build_group, standard_character, GroupData, GroupSpec};

/// Undirected multigraph on the irreducible characters; vertex 0 is trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McKayGraph {
    pub spec: GroupSpec,
    /// `mult[i][j] = ⟨χ_i·χ_std, χ_j⟩`.
    pub mult: Vec<Vec<i64>>,
    /// Degrees `χ(1)` of the characters.
    pub degrees: Vec<i64>,
}

impl McKayGraph {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Graph degree of each vertex, counting edge multiplicity.
    pub fn valencies(&self) -> Vec<i64> {
        self.mult.iter().map(|r| r.iter().sum()).collect()
    }
}

/// Affine Dynkin type of a McKay graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffineType {
    /// Ã_k, with k + 1 vertices.
    A(usize),
    /// D̃_k, with k + 1 vertices.
    D(usize),
    E6,
    E7,
    E8,
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineType::A(k) => write!(f, "A~{k}"),
            AffineType::D(k) => write!(f, "D~{k}"),
            AffineType::E6 => write!(f, "E~6"),
            AffineType::E7 => write!(f, "E~7"),
            AffineType::E8 => write!(f, "E~8"),
        }
    }
}

impl AffineType {
    /// Number of roots of the finite root system.
    pub fn finite_root_count(&self) -> usize {
        match *self {
            AffineType::A(k) => k * (k + 1),
            AffineType::D(k) => 2 * k * (k - 1),
            AffineType::E6 => 72,
            AffineType::E7 => 126,
            AffineType::E8 => 240,
        }
    }
}

/// Everything the Weyl-group and chamber code needs about Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub graph: McKayGraph,
    /// `A = 2·Id − mult`.
    pub cartan: Vec<Vec<i64>>,
    pub delta: Vec<i64>,
    /// `A` with the trivial row and column removed.
    pub finite_cartan: Vec<Vec<i64>>,
    pub affine_type: AffineType,
}

impl RootDatum {
    /// Builds group, graph and root datum in one step.
    pub fn for_spec(spec: GroupSpec) -> Result<Self> {
        affine_cartan(&mckay_graph(&build_group(spec)?)?)
    }

    pub fn rank(&self) -> usize {
        self.delta.len()
    }

    pub fn mult(&self, i: usize, j: usize) -> i64 {
        self.graph.mult[i][j]
    }

    /// `A·d`.
    pub fn cartan_apply(&self, d: &[i64]) -> Vec<i64> {
        self.cartan.iter().map(|row| row.iter().zip(d).map(|(a, x)| a * x).sum()).collect()
    }
}

/// Computes the McKay multiplicities exactly.
pub fn mckay_graph(g: &GroupData) -> Result<McKayGraph> {
    let std = standard_character(g);
    let k = g.num_irreps();
    let twisted: Vec<Vec<_>> =
        g.table.iter().map(|row| row.iter().zip(&std).map(|(a, b)| a * b).collect()).collect();
    let mut mult = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            mult[i][j] =
                g.inner_product(&twisted[i], &g.table[j]).as_integer().ok_or(McKayError::NonIntegralMultiplicity(i, j))?;
        }
    }
    Ok(McKayGraph { spec: g.spec, mult, degrees: g.degrees.clone() })
}

/// Builds the affine Cartan matrix, δ and the detected type.
pub fn affine_cartan(graph: &McKayGraph) -> Result<RootDatum> {
    let n = graph.len();
    if let Some(i) = (0..n).find(|&i| graph.mult[i][i] != 0) {
        return Err(McKayError::NotAffineADE(format!("self-loop at vertex {i}")));
    }
    if (0..n).any(|i| (0..n).any(|j| graph.mult[i][j] != graph.mult[j][i])) {
        return Err(McKayError::NotAffineADE("multiplicity matrix is not symmetric".into()));
    }
    let cartan: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { 0 } - graph.mult[i][j]).collect()).collect();
    let kernel = kernel_basis(&cartan);
    if kernel.len() != 1 {
        return Err(McKayError::NotAffineADE(format!("Cartan kernel has dimension {}", kernel.len())));
    }
    let delta = primitive_integer(&kernel[0]);
    let delta = if delta.iter().any(|x| *x < 0) { delta.iter().map(|x| -x).collect() } else { delta };
    if delta.iter().any(|x| *x <= 0) || delta[0] != 1 {
        return Err(McKayError::NotAffineADE(format!("kernel vector {delta:?} is not strictly positive")));
    }
    if delta != graph.degrees {
        return Err(McKayError::NotAffineADE(format!("δ = {delta:?} differs from degrees {:?}", graph.degrees)));
    }
    let finite_cartan: Vec<Vec<i64>> = cartan[1..].iter().map(|r| r[1..].to_vec()).collect();
    if !leading_minors_positive(&finite_cartan) {
        return Err(McKayError::NotAffineADE("finite Cartan block is not positive definite".into()));
    }
    let affine_type = detect_type(graph, &delta)?;
    Ok(RootDatum { graph: graph.clone(), cartan, delta, finite_cartan, affine_type })
}

fn detect_type(graph: &McKayGraph, delta: &[i64]) -> Result<AffineType> {
    let n = graph.len();
    let mut valency = graph.valencies();
    valency.sort_unstable();
    let max_delta = *delta.iter().max().unwrap_or(&0);
    let count = |v: i64| valency.iter().filter(|&&x| x == v).count();
    let ty = if valency.iter().all(|&v| v == 2) {
        Some(AffineType::A(n - 1))
    } else if max_delta == 2 && n == 5 && count(1) == 4 && count(4) == 1 {
        Some(AffineType::D(4))
    } else if max_delta == 2 && n >= 6 && count(1) == 4 && count(3) == 2 && count(2) == n - 6 {
        Some(AffineType::D(n - 1))
    } else if count(1) == 3 && count(3) == 1 && count(2) == n - 4 {
        match (n, max_delta) {
            (7, 3) => Some(AffineType::E6),
            (8, 4) => Some(AffineType::E7),
            (9, 6) => Some(AffineType::E8),
            _ => None,
        }
    } else {
        None
    };
    ty.ok_or_else(|| McKayError::NotAffineADE(format!("unrecognised valencies {valency:?} with max δ {max_delta}")))
}

/// `Σ_χ δ_χ d_χ`.
pub fn size(d: &[i64], r: &RootDatum) -> i64 {
    d.iter().zip(&r.delta).map(|(a, b)| a * b).sum()
}

/// `{vertices, mult, delta, type}`.
pub fn graph_value(r: &RootDatum) -> serde_json::Value {
    serde_json::json!({
        "group": r.graph.spec.to_string(),
        "vertices": r.graph.degrees.iter().enumerate().map(|(i, d)| serde_json::json!({"index": i, "degree": d})).collect::<Vec<_>>(),
        "mult": r.graph.mult,
        "delta": r.delta,
        "type": r.affine_type.to_string(),
    })
}

/// Deterministic Graphviz rendering; the trivial vertex is drawn bold.
pub fn to_dot(graph: &McKayGraph) -> String {
    let mut out = format!("graph mckay {{\n  label=\"{}\";\n  node [shape=circle];\n", graph.spec);
    for (i, d) in graph.degrees.iter().enumerate() {
        let style = if i == 0 { ", style=bold" } else { "" };
        out.push_str(&format!("  v{i} [label=\"{i}:{d}\"{style}];\n"));
    }
    for i in 0..graph.len() {
        for j in i + 1..graph.len() {
            match graph.mult[i][j] {
                0 => {}
                1 => out.push_str(&format!("  v{i} -- v{j};\n")),
                m => out.push_str(&format!("  v{i} -- v{j} [label=\"{m}\"];\n")),
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Basis of the rational kernel of an integer matrix, by reduced row echelon form.
pub(crate) fn kernel_basis(m: &[Vec<i64>]) -> Vec<Vec<Rational64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Rational64>> = m.iter().map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..cols {
                    let v = a[r][j];
                    a[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational64::zero(); cols];
            v[f] = Rational64::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f];
            }
            v
        })
        .collect()
}

fn primitive_integer(v: &[Rational64]) -> Vec<i64> {
    use num_integer::Integer;
    let lcm = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * Rational64::from_integer(lcm)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g == 0 {
        ints
    } else {
        ints.iter().map(|x| x / g.abs()).collect()
    }
}

/// Sylvester's criterion with fraction-free (Bareiss) elimination.
fn leading_minors_positive(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut prev = 1i128;
    for k in 0..n {
        // Without pivoting, the k-th Bareiss pivot is the k-th leading principal minor.
        if a[k][k] <= 0 {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    true
}
