//! Walls, chambers in the cone F, and the map sending a component index to
//! the GIT chamber of its reflected stability parameter.
//!
//! Stability vectors are exact rationals indexed by vertices. The level-one
//! slice is `θ(δ) = 1`; its coordinates are the values on the non-trivial
//! vertices.

use std::collections::{BTreeMap, HashSet};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{McKayError, Result};
use crate::mckay::{size, RootDatum};
use crate::report::CheckReport;
use crate::weyl::{apply_word_dim, apply_word_param, default_bound, finite_root_system, orbit_witness, reflect_theta, weight, WeylWord};

pub type StabilityVector = Vec<Rational64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WallKind {
    Delta,
    /// `mδ + α` with `α` a finite root.
    Root { m: i64, alpha: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    #[serde(flatten)]
    pub kind: WallKind,
    /// Coefficients of the linear form over the vertices.
    pub form: Vec<i64>,
}

impl Wall {
    pub fn eval(&self, theta: &[Rational64]) -> Rational64 {
        self.form.iter().zip(theta).map(|(f, t)| *t * *f).sum()
    }
}

/// `δ` followed by `mδ + α` for `m = −(n−1)..=n−1` and finite roots `α` in
/// lexicographic order.
pub fn walls(r: &RootDatum, n: i64) -> Result<Vec<Wall>> {
    if n < 1 {
        return Err(McKayError::InvalidParameter(format!("walls need n ≥ 1, got {n}")));
    }
    let roots = finite_root_system(r);
    let mut out = vec![Wall { kind: WallKind::Delta, form: r.delta.clone() }];
    for m in -(n - 1)..=(n - 1) {
        for alpha in &roots.roots {
            let form = (0..r.rank())
                .map(|v| m * r.delta[v] + if v == 0 { 0 } else { alpha[v - 1] })
                .collect();
            out.push(Wall { kind: WallKind::Root { m, alpha: alpha.clone() }, form });
        }
    }
    Ok(out)
}

/// `θ₀(χ) = 1/N` off the trivial vertex with `N = 2Σδ`, and `θ₀(δ) = 1`.
pub fn theta0(r: &RootDatum) -> StabilityVector {
    let total: i64 = r.delta.iter().sum();
    let small = Rational64::new(1, 2 * total);
    let rest: Rational64 = r.delta[1..].iter().map(|d| small * *d).sum();
    let mut out = vec![small; r.rank()];
    out[0] = Rational64::one() - rest;
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ChamberSignature {
    pub n: i64,
    /// One sign per wall, in wall order.
    pub signs: Vec<i8>,
}

pub fn chamber_sign(theta: &[Rational64], ws: &[Wall], n: i64) -> Result<ChamberSignature> {
    let mut signs = Vec::with_capacity(ws.len());
    for w in ws {
        let v = w.eval(theta);
        if v.is_zero() {
            return Err(McKayError::OnWall(describe_wall(w)));
        }
        signs.push(if v.is_positive() { 1 } else { -1 });
    }
    Ok(ChamberSignature { n, signs })
}

pub fn describe_wall(w: &Wall) -> String {
    match &w.kind {
        WallKind::Delta => "δ".to_string(),
        WallKind::Root { m, alpha } => format!("{m}δ+{alpha:?}"),
    }
}

/// Coordinates of `θ` in the level-one slice.
pub fn slice_point(theta: &[Rational64]) -> Vec<Rational64> {
    theta[1..].to_vec()
}

/// Simple reflection acting on slice coordinates directly: linear for the
/// finite vertices, affine for the trivial one.
pub fn reflect_slice(r: &RootDatum, chi: usize, c: &[Rational64]) -> Vec<Rational64> {
    let k = c.len();
    if chi == 0 {
        let tau_c: Rational64 = (0..k).map(|i| c[i] * r.delta[i + 1]).sum();
        let theta_trivial = Rational64::one() - tau_c;
        return (0..k).map(|i| c[i] + theta_trivial * r.mult(0, i + 1)).collect();
    }
    let cc = c[chi - 1];
    (0..k).map(|i| c[i] - cc * r.cartan[chi][i + 1]).collect()
}

fn in_open_cone(theta: &[Rational64]) -> bool {
    theta[1..].iter().all(|t| t.is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub signature: ChamberSignature,
    /// Shortest word found with `witness.θ₀` in this chamber.
    pub witness: WeylWord,
    #[serde(serialize_with = "ser_rationals")]
    pub point: StabilityVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberEnumeration {
    pub n: i64,
    pub bound: usize,
    pub walls: Vec<Wall>,
    /// Sorted by signature.
    pub chambers: Vec<Chamber>,
    /// Number of chambers reached by words of length at most `L`, for `L = 0..=bound`.
    pub counts_by_length: Vec<usize>,
    pub stabilized: bool,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// Breadth-first search over the images of `θ₀` under words of length at
/// most `bound`, keeping the points inside `F` (positive on every
/// non-trivial vertex) and grouping them by signature.
pub fn enumerate_chambers_in_f(r: &RootDatum, n: i64, bound: usize) -> Result<ChamberEnumeration> {
    let ws = walls(r, n)?;
    let start = theta0(r);
    let mut seen: HashSet<StabilityVector> = HashSet::from([start.clone()]);
    let mut found: BTreeMap<ChamberSignature, Chamber> = BTreeMap::new();
    let mut counts = Vec::with_capacity(bound + 1);
    let mut frontier = vec![(start, WeylWord::new())];
    for len in 0..=bound {
        let mut next = Vec::new();
        for (theta, word) in &frontier {
            if in_open_cone(theta) {
                let sig = chamber_sign(theta, &ws, n)?;
                found.entry(sig.clone()).or_insert_with(|| Chamber {
                    signature: sig,
                    witness: word.clone(),
                    point: theta.clone(),
                });
            }
            if len < bound {
                for chi in 0..r.rank() {
                    let image = reflect_theta(r, chi, theta);
                    if seen.insert(image.clone()) {
                        let mut w = vec![chi];
                        w.extend(word);
                        next.push((image, w));
                    }
                }
            }
        }
        counts.push(found.len());
        frontier = next;
    }
    let window = bound.div_ceil(3).max(1);
    let stabilized = counts.len() > window && counts[counts.len() - 1] == counts[counts.len() - 1 - window];
    Ok(ChamberEnumeration {
        n,
        bound,
        walls: ws,
        chambers: found.into_values().collect(),
        counts_by_length: counts,
        stabilized,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BCImage {
    pub d: Vec<i64>,
    pub r: i64,
    /// `word.d = r·δ` and `word.θ₀` lies in `F`.
    pub word: WeylWord,
    #[serde(serialize_with = "ser_rationals")]
    pub theta: StabilityVector,
    pub signature: ChamberSignature,
    /// `r = 0`: the component is a point.
    pub degenerate: bool,
}

/// Image of a component index: reflect `θ₀` by the word carrying `d` to
/// `wt(d)·δ`, move it into `F` with finite reflections (they fix `wt(d)·δ`),
/// and read off the chamber for the walls of size `max(wt(d), 1)`.
pub fn bc_map(d: &[i64], r: &RootDatum) -> Result<BCImage> {
    if d.len() != r.rank() {
        return Err(McKayError::DimensionMismatch(format!("vector of length {} for rank {}", d.len(), r.rank())));
    }
    if d.iter().any(|x| *x < 0) {
        return Err(McKayError::InvalidParameter(format!("{d:?} has negative entries")));
    }
    let wt = weight(d, r);
    if wt < 0 {
        return Err(McKayError::InvalidParameter(format!("{d:?} has negative weight {wt}")));
    }
    let mut word = orbit_witness(d, r, default_bound(d, r))?;
    let mut theta = apply_word_param(r, &word, &theta0(r));
    while let Some(chi) = (1..r.rank()).find(|&chi| theta[chi].is_negative()) {
        theta = reflect_theta(r, chi, &theta);
        word.insert(0, chi);
    }
    let n = wt.max(1);
    let signature = chamber_sign(&theta, &walls(r, n)?, n)?;
    Ok(BCImage { d: d.to_vec(), r: wt, word, theta, signature, degenerate: wt == 0 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectivityEntry {
    pub signature: ChamberSignature,
    pub d: Vec<i64>,
    pub size: i64,
    pub witnessed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub n: i64,
    pub bound: usize,
    pub stabilized: bool,
    pub entries: Vec<SurjectivityEntry>,
    pub all_witnessed: bool,
}

/// For every chamber found in `F`, the index `d = w⁻¹.(nδ)` built from its
/// witness word `w`, and whether `bc_map(d)` lands back in that chamber.
pub fn surjectivity_report(r: &RootDatum, n: i64, bound: usize) -> Result<SurjectivityReport> {
    let en = enumerate_chambers_in_f(r, n, bound)?;
    let target: Vec<i64> = r.delta.iter().map(|x| x * n).collect();
    let mut entries = Vec::new();
    for ch in &en.chambers {
        let inverse: WeylWord = ch.witness.iter().rev().copied().collect();
        let d = apply_word_dim(r, &inverse, &target);
        let witnessed = d.iter().all(|x| *x >= 0)
            && weight(&d, r) == n
            && bc_map(&d, r).map(|b| b.signature == ch.signature).unwrap_or(false);
        entries.push(SurjectivityEntry { signature: ch.signature.clone(), size: size(&d, r), d, witnessed });
    }
    let all_witnessed = entries.iter().all(|e| e.witnessed);
    Ok(SurjectivityReport { n, bound, stabilized: en.stabilized, entries, all_witnessed })
}

/// Restricted to `θ(δ) = 1`, the form of `mδ + α` is the affine function
/// `c ↦ m + α·c`, and the form of `δ` is the nonzero constant 1.
pub fn wall_pullback_check(r: &RootDatum, n: i64) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let mut bad_root = Vec::new();
    let mut delta_ok = true;
    for w in walls(r, n)? {
        // On the slice θ(χ₀) = 1 − Σ δ_χ c_χ, so the form becomes
        // f₀ + Σ (f_χ − f₀δ_χ) c_χ.
        let constant = w.form[0];
        let linear: Vec<i64> = (1..r.rank()).map(|v| w.form[v] - constant * r.delta[v]).collect();
        match &w.kind {
            WallKind::Delta => delta_ok &= constant == 1 && linear.iter().all(|x| *x == 0),
            WallKind::Root { m, alpha } => {
                if constant != *m || &linear != alpha {
                    bad_root.push(describe_wall(&w));
                }
            }
        }
    }
    report.push("delta_wall_misses_slice", delta_ok, "δ restricts to the constant 1");
    report.push("root_walls_are_affine_root_conditions", bad_root.is_empty(), format!("mismatches {bad_root:?}"));

    // The slice action agrees with the action on full vectors.
    let t0 = theta0(r);
    let mut mismatch = Vec::new();
    for chi in 0..r.rank() {
        let full = reflect_theta(r, chi, &t0);
        if slice_point(&full) != reflect_slice(r, chi, &slice_point(&t0)) {
            mismatch.push(chi);
        }
    }
    report.push("slice_reflections_match", mismatch.is_empty(), format!("mismatched vertices {mismatch:?}"));
    Ok(report)
}

pub fn chambers_value(r: &RootDatum, en: &ChamberEnumeration) -> Value {
    json!({
        "group": r.graph.spec.to_string(),
        "type": r.affine_type.to_string(),
        "n": en.n,
        "bound": en.bound,
        "count": en.chambers.len(),
        "counts_by_length": en.counts_by_length,
        "stabilized": en.stabilized,
        "walls": en.walls.iter().map(|w| serde_json::to_value(w).expect("plain data")).collect::<Vec<_>>(),
        "chambers": en.chambers.iter().map(|c| serde_json::to_value(c).expect("plain data")).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::enumerate_components;
    use crate::groups::GroupSpec;

    fn datum(s: &str) -> RootDatum {
        RootDatum::for_spec(s.parse::<GroupSpec>().unwrap()).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn wall_counts() {
        assert_eq!(walls(&datum("cyclic:2"), 1).unwrap().len(), 3);
        assert_eq!(walls(&datum("cyclic:3"), 2).unwrap().len(), 19);
        for (s, n) in [("bd:2", 3), ("2T", 2), ("cyclic:5", 4)] {
            let r = datum(s);
            let roots = r.affine_type.finite_root_count() as i64;
            assert_eq!(walls(&r, n).unwrap().len() as i64, 1 + (2 * n - 1) * roots);
        }
        assert!(walls(&datum("cyclic:2"), 0).is_err());
    }

    #[test]
    fn theta0_is_in_the_fundamental_alcove() {
        assert_eq!(theta0(&datum("cyclic:2")), vec![q(3, 4), q(1, 4)]);
        for s in ["cyclic:2", "cyclic:4", "bd:3", "2T", "2O", "2I"] {
            let r = datum(s);
            let t = theta0(&r);
            let level: Rational64 = t.iter().zip(&r.delta).map(|(a, d)| *a * *d).sum();
            assert_eq!(level, Rational64::one());
            assert!(t.iter().all(|x| x.is_positive()));
            let c = slice_point(&t);
            let highest: Rational64 = c.iter().zip(&r.delta[1..]).map(|(a, d)| *a * *d).sum();
            assert!(highest < Rational64::one());
            let sig = chamber_sign(&t, &walls(&r, 2).unwrap(), 2).unwrap();
            assert_eq!(sig.signs[0], 1);
        }
    }

    #[test]
    fn on_wall_is_rejected() {
        let r = datum("cyclic:3");
        let theta = vec![q(1, 1), q(-1, 2), q(0, 1)];
        assert!(matches!(chamber_sign(&theta, &walls(&r, 1).unwrap(), 1), Err(McKayError::OnWall(_))));
    }

    #[test]
    fn reflected_points_stay_regular() {
        let r = datum("cyclic:3");
        let ws = walls(&r, 3).unwrap();
        let mut theta = theta0(&r);
        for chi in [0, 1, 2, 0, 2, 1, 1, 0, 2, 2, 1, 0] {
            theta = reflect_theta(&r, chi, &theta);
            assert!(chamber_sign(&theta, &ws, 3).is_ok());
        }
    }

    #[test]
    fn five_chambers_for_mu3_at_size_two() {
        let r = datum("cyclic:3");
        let en = enumerate_chambers_in_f(&r, 2, 12).unwrap();
        assert_eq!(en.chambers.len(), 5);
        assert!(en.stabilized);
        assert!(en.counts_by_length.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn bound_monotonicity() {
        let r = datum("bd:2");
        let counts: Vec<usize> =
            (0..=8).map(|b| enumerate_chambers_in_f(&r, 2, b).unwrap().chambers.len()).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    }

    #[test]
    fn multiples_of_delta_map_to_the_positive_chamber() {
        let r = datum("cyclic:3");
        let b = bc_map(&[2, 2, 2], &r).unwrap();
        assert!(b.word.is_empty());
        assert_eq!(b.signature, chamber_sign(&theta0(&r), &walls(&r, 2).unwrap(), 2).unwrap());
        let z = bc_map(&[1, 0, 0], &r).unwrap();
        assert_eq!(z.r, 0);
        assert!(z.degenerate);
    }

    #[test]
    fn mu3_example_is_not_injective() {
        let r = datum("cyclic:3");
        let two_delta = vec![2, 2, 2];
        let w1: WeylWord = vec![0, 2, 1, 2];
        let mut w2 = w1.clone();
        w2.push(0);
        let inv = |w: &WeylWord| w.iter().rev().copied().collect::<Vec<_>>();
        let d1 = apply_word_dim(&r, &inv(&w1), &two_delta);
        let d2 = apply_word_dim(&r, &inv(&w2), &two_delta);
        assert_eq!(d1, vec![3, 4, 4]);
        assert_eq!(d2, vec![6, 4, 4]);
        let (b1, b2) = (bc_map(&d1, &r).unwrap(), bc_map(&d2, &r).unwrap());
        assert_eq!((b1.r, b2.r), (2, 2));
        assert_eq!(b1.signature, b2.signature);
        // both points lie beyond every wall θ(α) = 1 inside F
        for b in [&b1, &b2] {
            assert!(b.theta[1] > Rational64::one() && b.theta[2] > Rational64::one());
        }
    }

    #[test]
    fn surjectivity_on_small_cases() {
        for (s, n, bound) in [("cyclic:3", 2, 12), ("cyclic:2", 1, 8), ("cyclic:2", 3, 10), ("bd:2", 1, 6)] {
            let rep = surjectivity_report(&datum(s), n, bound).unwrap();
            assert!(rep.all_witnessed, "{s} n={n}: {rep:?}");
            assert!(rep.entries.iter().all(|e| e.d.iter().all(|x| *x >= 0)));
        }
    }

    #[test]
    fn images_of_components_are_enumerated() {
        let r = datum("cyclic:3");
        let en = enumerate_chambers_in_f(&r, 2, 12).unwrap();
        let sigs: Vec<_> = en.chambers.iter().map(|c| c.signature.clone()).collect();
        let mut hits = 0;
        for m in 0..=12 {
            for comp in enumerate_components(&r, m).unwrap() {
                if comp.wt == 2 {
                    let b = bc_map(&comp.d, &r).unwrap();
                    assert!(sigs.contains(&b.signature), "{:?}", comp.d);
                    hits += 1;
                }
            }
        }
        assert!(hits > 5);
    }

    #[test]
    fn pullback_identities() {
        for s in ["cyclic:2", "cyclic:3", "bd:2"] {
            for n in 1..=3 {
                let rep = wall_pullback_check(&datum(s), n).unwrap();
                assert!(rep.all_passed(), "{s}: {rep:?}");
            }
        }
    }
}
