//! Finite subgroups of SL₂(ℂ) and their exact character tables.
//!
//! Cyclic and binary dihedral tables come from closed formulas. The three
//! exceptional tables are embedded JSON assets and are re-validated every
//! time they are loaded.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Deserialize;

use crate::cyclotomic::CycNum;
use crate::error::{McKayError, Result};
use crate::report::CheckReport;

/// Which finite subgroup of SL₂(ℂ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    /// Cyclic group of order ℓ generated by diag(ζ_ℓ, ζ_ℓ⁻¹).
    Cyclic(u32),
    /// Binary dihedral group of order 4m.
    BinaryDihedral(u32),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GroupSpec::Cyclic(0) => Err(McKayError::InvalidParameter("cyclic order must be at least 1".into())),
            GroupSpec::BinaryDihedral(m) if m < 2 => {
                Err(McKayError::InvalidParameter("binary dihedral parameter must be at least 2".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn order(&self) -> u64 {
        match *self {
            GroupSpec::Cyclic(l) => l as u64,
            GroupSpec::BinaryDihedral(m) => 4 * m as u64,
            GroupSpec::BinaryTetrahedral => 24,
            GroupSpec::BinaryOctahedral => 48,
            GroupSpec::BinaryIcosahedral => 120,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(l) => write!(f, "cyclic:{l}"),
            GroupSpec::BinaryDihedral(m) => write!(f, "bd:{m}"),
            GroupSpec::BinaryTetrahedral => write!(f, "2T"),
            GroupSpec::BinaryOctahedral => write!(f, "2O"),
            GroupSpec::BinaryIcosahedral => write!(f, "2I"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = McKayError;

    /// Accepts `cyclic:<l>`, `bd:<m>`, `2T`, `2O` and `2I`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || McKayError::InvalidParameter(format!("unrecognised group spec '{s}'"));
        let spec = match s.trim() {
            "2T" => GroupSpec::BinaryTetrahedral,
            "2O" => GroupSpec::BinaryOctahedral,
            "2I" => GroupSpec::BinaryIcosahedral,
            other => {
                let (family, param) = other.split_once(':').ok_or_else(bad)?;
                let p: u32 = param.parse().map_err(|_| bad())?;
                match family {
                    "cyclic" => GroupSpec::Cyclic(p),
                    "bd" => GroupSpec::BinaryDihedral(p),
                    _ => return Err(bad()),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    pub label: String,
    pub size: u64,
    /// Order of the elements in the class.
    pub elem_order: u32,
    /// Index of the class containing the squares of its elements.
    pub square: usize,
    /// A representative as a word in the group generators, when the family
    /// has an explicit presentation (cyclic: `[g]`, binary dihedral: `[a, b]`).
    pub word: Option<Vec<usize>>,
}

/// A group together with its exact character table.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub spec: GroupSpec,
    pub order: u64,
    pub conductor: u32,
    pub classes: Vec<ConjClass>,
    /// Rows are irreducible characters in canonical order, columns are classes.
    pub table: Vec<Vec<CycNum>>,
    /// Trace of the defining 2×2 representation on each class.
    pub std: Vec<CycNum>,
    pub degrees: Vec<i64>,
}

impl GroupData {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_irreps(&self) -> usize {
        self.table.len()
    }

    /// `(1/|G|) Σ_C |C| a(C) conj(b(C))`.
    pub fn inner_product(&self, a: &[CycNum], b: &[CycNum]) -> CycNum {
        let mut acc = CycNum::zero(self.conductor);
        for ((x, y), c) in a.iter().zip(b).zip(&self.classes) {
            acc = acc + (x * &y.conj()).scale(&BigRational::from_integer(BigInt::from(c.size)));
        }
        acc.scale(&BigRational::new(1.into(), BigInt::from(self.order)))
    }
}

/// Builds the group data for a spec.
pub fn build_group(spec: GroupSpec) -> Result<GroupData> {
    spec.validate()?;
    let raw = match spec {
        GroupSpec::Cyclic(l) => cyclic_table(l),
        GroupSpec::BinaryDihedral(m) => binary_dihedral_table(m),
        GroupSpec::BinaryTetrahedral => load_asset(spec, include_str!("assets/binary_tetrahedral.json"))?,
        GroupSpec::BinaryOctahedral => load_asset(spec, include_str!("assets/binary_octahedral.json"))?,
        GroupSpec::BinaryIcosahedral => load_asset(spec, include_str!("assets/binary_icosahedral.json"))?,
    };
    let g = canonicalize(raw)?;
    if matches!(spec, GroupSpec::BinaryTetrahedral | GroupSpec::BinaryOctahedral | GroupSpec::BinaryIcosahedral) {
        let report = verify_character_table(&g);
        let first_bad = report.failures().next().cloned();
        if let Some(bad) = first_bad {
            return Err(McKayError::AssetInvalid(format!("{}: {} ({})", spec, bad.name, bad.detail)));
        }
    }
    Ok(g)
}

/// The character of the defining representation.
/// `{order, classes, table, degrees}`; each table entry is a list of terms
/// `num/den · ζ^exp` over the group conductor.
pub fn group_value(g: &GroupData) -> serde_json::Value {
    use num_traits::ToPrimitive;
    let entry = |x: &CycNum| -> serde_json::Value {
        x.terms()
            .into_iter()
            .map(|(num, den, exp)| {
                serde_json::json!({
                    "num": num.to_i64().expect("small numerator"),
                    "den": den.to_i64().expect("small denominator"),
                    "exp": exp,
                })
            })
            .collect()
    };
    serde_json::json!({
        "group": g.spec.to_string(),
        "order": g.order,
        "conductor": g.conductor,
        "classes": g.classes.iter().map(|c| serde_json::json!({"label": c.label, "size": c.size})).collect::<Vec<_>>(),
        "table": g.table.iter().map(|row| row.iter().map(entry).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "degrees": g.degrees,
    })
}

/// Plain-text table, one row per irreducible character.
pub fn group_text(g: &GroupData) -> String {
    let mut out = format!("{} order {} conductor {}\n", g.spec, g.order, g.conductor);
    let header: Vec<String> = g.classes.iter().map(|c| format!("{}({})", c.label, c.size)).collect();
    out.push_str(&format!("classes: {}\n", header.join(" ")));
    for (i, row) in g.table.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("chi{i}: {}\n", cells.join(" | ")));
    }
    out
}

pub fn standard_character(g: &GroupData) -> Vec<CycNum> {
    g.std.clone()
}

fn cyclic_table(l: u32) -> GroupData {
    let classes = (0..l)
        .map(|k| ConjClass {
            label: match k {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            },
            size: 1,
            elem_order: l / k.gcd(&l),
            square: ((2 * k) % l) as usize,
            word: Some(vec![0; k as usize]),
        })
        .collect();
    let table = (0..l as i64)
        .map(|j| (0..l as i64).map(|k| CycNum::zeta_pow(l, j * k)).collect())
        .collect();
    let std = (0..l as i64).map(|k| CycNum::zeta_pow(l, k) + CycNum::zeta_pow(l, -k)).collect();
    GroupData {
        spec: GroupSpec::Cyclic(l),
        order: l as u64,
        conductor: l,
        classes,
        table,
        std,
        degrees: vec![],
    }
}

fn binary_dihedral_table(m: u32) -> GroupData {
    // Presentation a^(2m) = 1, b² = a^m, b a b⁻¹ = a⁻¹; a ↦ diag(ζ, ζ⁻¹) with ζ = ζ_{2m}.
    let two_m = 2 * m;
    let n = two_m.lcm(&4);
    let zeta = |k: i64| CycNum::zeta_pow(n, k * (n / two_m) as i64);
    let i_unit = CycNum::zeta_pow(n, (n / 4) as i64);
    let int = |k: i64| CycNum::from_int(n, k);

    let mut classes = Vec::new();
    for k in 0..=m {
        let label = match k {
            0 => "1".to_string(),
            1 => "a".to_string(),
            k if k == m => "-1".to_string(),
            _ => format!("a^{k}"),
        };
        let size = if k == 0 || k == m { 1 } else { 2 };
        let sq = (2 * k) % two_m;
        let square = sq.min(two_m - sq) as usize;
        classes.push(ConjClass {
            label,
            size,
            elem_order: two_m / k.gcd(&two_m),
            square,
            word: Some(vec![0; k as usize]),
        });
    }
    for (label, word) in [("b", vec![1]), ("ba", vec![1, 0])] {
        classes.push(ConjClass { label: label.into(), size: m as u64, elem_order: 4, square: m as usize, word: Some(word) });
    }

    let mut table = Vec::new();
    // One-dimensional characters: a ↦ s, b ↦ t with t² = s^m.
    let ts: Vec<(i64, CycNum)> = if m.is_multiple_of(2) {
        vec![(1, int(1)), (1, int(-1)), (-1, int(1)), (-1, int(-1))]
    } else {
        vec![(1, int(1)), (1, int(-1)), (-1, i_unit.clone()), (-1, -&i_unit)]
    };
    for (s, t) in ts {
        let mut row: Vec<CycNum> = (0..=m).map(|k| int(if s == -1 && k % 2 == 1 { -1 } else { 1 })).collect();
        row.push(t.clone());
        row.push(&t * &int(s));
        table.push(row);
    }
    // Two-dimensional characters ρ_k: a ↦ diag(ζ^k, ζ^-k), trace zero off the cyclic part.
    for k in 1..m as i64 {
        let mut row: Vec<CycNum> = (0..=m as i64).map(|j| zeta(j * k) + zeta(-j * k)).collect();
        row.push(int(0));
        row.push(int(0));
        table.push(row);
    }
    let mut std: Vec<CycNum> = (0..=m as i64).map(|j| zeta(j) + zeta(-j)).collect();
    std.push(int(0));
    std.push(int(0));
    GroupData {
        spec: GroupSpec::BinaryDihedral(m),
        order: 4 * m as u64,
        conductor: n,
        classes,
        table,
        std,
        degrees: vec![],
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AssetEntry {
    Int(i64),
    Terms(Vec<(i64, i64, i64)>),
}

#[derive(Deserialize)]
struct AssetClass {
    label: String,
    size: u64,
    order: u32,
    square: usize,
}

#[derive(Deserialize)]
struct Asset {
    version: u32,
    order: u64,
    conductor: u32,
    classes: Vec<AssetClass>,
    std: Vec<AssetEntry>,
    rows: Vec<Vec<AssetEntry>>,
}

fn load_asset(spec: GroupSpec, text: &str) -> Result<GroupData> {
    let asset: Asset = serde_json::from_str(text).map_err(|e| McKayError::AssetInvalid(format!("{spec}: {e}")))?;
    if asset.version != 1 {
        return Err(McKayError::AssetInvalid(format!("{spec}: unsupported asset version {}", asset.version)));
    }
    if asset.order != spec.order() {
        return Err(McKayError::AssetInvalid(format!("{spec}: order {} does not match", asset.order)));
    }
    let n = asset.conductor;
    let value = |e: &AssetEntry| match e {
        AssetEntry::Int(k) => CycNum::from_int(n, *k),
        AssetEntry::Terms(t) => CycNum::from_terms(n, t),
    };
    let width = asset.classes.len();
    if asset.std.len() != width || asset.rows.iter().any(|r| r.len() != width) {
        return Err(McKayError::AssetInvalid(format!("{spec}: ragged table")));
    }
    if asset.classes.iter().any(|c| c.square >= width) {
        return Err(McKayError::AssetInvalid(format!("{spec}: square map out of range")));
    }
    Ok(GroupData {
        spec,
        order: asset.order,
        conductor: n,
        classes: asset
            .classes
            .into_iter()
            .map(|c| ConjClass { label: c.label, size: c.size, elem_order: c.order, square: c.square, word: None })
            .collect(),
        table: asset.rows.iter().map(|r| r.iter().map(value).collect()).collect(),
        std: asset.std.iter().map(value).collect(),
        degrees: vec![],
    })
}

fn cmp_rows(a: &[CycNum], b: &[CycNum]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.canonical_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Puts the trivial character first, then sorts by degree and value sequence.
fn canonicalize(mut g: GroupData) -> Result<GroupData> {
    let one = CycNum::one(g.conductor);
    let trivial = g
        .table
        .iter()
        .position(|row| row.iter().all(|v| *v == one))
        .ok_or_else(|| McKayError::AssetInvalid(format!("{}: no trivial character", g.spec)))?;
    let first = g.table.remove(trivial);
    let mut degrees = Vec::with_capacity(g.table.len() + 1);
    for row in std::iter::once(&first).chain(&g.table) {
        degrees.push(
            row[0]
                .as_integer()
                .filter(|d| *d > 0)
                .ok_or_else(|| McKayError::AssetInvalid(format!("{}: non-integral degree", g.spec)))?,
        );
    }
    let mut rest: Vec<(i64, Vec<CycNum>)> = degrees[1..].iter().copied().zip(g.table).collect();
    rest.sort_by(|(da, ra), (db, rb)| da.cmp(db).then_with(|| cmp_rows(ra, rb)));
    g.table = std::iter::once(first).chain(rest.iter().map(|(_, r)| r.clone())).collect();
    g.degrees = std::iter::once(1).chain(rest.iter().map(|(d, _)| *d)).collect();
    Ok(g)
}

/// Checks every table invariant, reporting exact residuals on failure.
pub fn verify_character_table(g: &GroupData) -> CheckReport {
    let mut report = CheckReport::new();
    let k = g.num_classes();
    let n = g.conductor;
    let one = CycNum::one(n);

    let trivial_ok = g.table.first().is_some_and(|r| r.iter().all(|v| *v == one));
    report.push("trivial_first_row", trivial_ok, if trivial_ok { "" } else { "row 0 is not the trivial character" });

    let class_total: u64 = g.classes.iter().map(|c| c.size).sum();
    report.push(
        "class_sizes",
        class_total == g.order,
        format!("sum of class sizes {class_total}, order {}", g.order),
    );

    let degrees: Vec<Option<i64>> = g.table.iter().map(|r| r[0].as_integer()).collect();
    let sum_sq: i64 = degrees.iter().map(|d| d.unwrap_or(0).pow(2)).sum();
    let degrees_ok = degrees.iter().all(Option::is_some) && sum_sq == g.order as i64;
    report.push("degree_squares", degrees_ok, format!("sum of squared degrees {sum_sq}, order {}", g.order));

    let square = g.table.len() == k && g.table.iter().all(|r| r.len() == k) && g.std.len() == k;
    report.push("square_table", square, format!("{} rows, {} classes", g.table.len(), k));
    if !square {
        return report;
    }

    let mut row_residual = None;
    'rows: for (i, a) in g.table.iter().enumerate() {
        for (j, b) in g.table.iter().enumerate().skip(i) {
            let ip = g.inner_product(a, b);
            let expected = CycNum::from_int(n, (i == j) as i64);
            if ip != expected {
                row_residual = Some(format!("rows {i},{j}: residual {}", ip - expected));
                break 'rows;
            }
        }
    }
    report.push("row_orthogonality", row_residual.is_none(), row_residual.unwrap_or_default());

    let mut col_residual = None;
    'cols: for c in 0..k {
        for d in c..k {
            let mut acc = CycNum::zero(n);
            for row in &g.table {
                acc = acc + &row[c] * &row[d].conj();
            }
            let expected = if c == d { (g.order / g.classes[c].size) as i64 } else { 0 };
            let expected = CycNum::from_int(n, expected);
            if acc != expected {
                col_residual = Some(format!("classes {c},{d}: residual {}", acc - expected));
                break 'cols;
            }
        }
    }
    report.push("column_orthogonality", col_residual.is_none(), col_residual.unwrap_or_default());

    let floats: Vec<Vec<Complex64>> = g.table.iter().map(|r| r.iter().map(CycNum::to_complex).collect()).collect();
    let mut worst = 0.0f64;
    for (i, a) in floats.iter().enumerate() {
        for (j, b) in floats.iter().enumerate() {
            let ip: Complex64 = a
                .iter()
                .zip(b)
                .zip(&g.classes)
                .map(|((x, y), c)| x * y.conj() * c.size as f64)
                .sum::<Complex64>()
                / g.order as f64;
            worst = worst.max((ip - if i == j { 1.0 } else { 0.0 }).norm());
        }
    }
    report.push("float_orthogonality", worst <= 1e-9, format!("max residual {worst:.3e}"));

    let self_dual = g.std.iter().all(|v| *v == v.conj());
    report.push("std_self_dual", self_dual, if self_dual { "" } else { "standard character is not real" });

    let mults: Vec<CycNum> = g.table.iter().map(|row| g.inner_product(&g.std, row)).collect();
    let decomposes = mults.iter().all(|m| m.as_integer().is_some_and(|v| v >= 0))
        && mults.iter().zip(&g.degrees).map(|(m, d)| m.as_integer().unwrap_or(0) * d).sum::<i64>() == 2;
    report.push("std_is_character", decomposes, "standard character is a sum of irreducibles of total degree 2");

    // Λ²χ(g) = (χ(g)² − χ(g²))/2 is the determinant, identically 1 on SL₂.
    let half = BigRational::new(1.into(), 2.into());
    let wedge: Vec<CycNum> = (0..k)
        .map(|c| (&g.std[c] * &g.std[c] - g.std[g.classes[c].square].clone()).scale(&half))
        .collect();
    let det_ok = wedge.iter().all(|v| *v == one) && g.inner_product(&wedge, &g.table[0]) == one;
    report.push("std_exterior_square_trivial", det_ok, "exterior square of the standard character");
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert_eq!("cyclic:3".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic(3));
        assert_eq!("bd:4".parse::<GroupSpec>().unwrap(), GroupSpec::BinaryDihedral(4));
        assert_eq!("2I".parse::<GroupSpec>().unwrap(), GroupSpec::BinaryIcosahedral);
        assert!("cyclic:0".parse::<GroupSpec>().is_err());
        assert!("bd:1".parse::<GroupSpec>().is_err());
        assert!("dihedral:3".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn cyclic_two() {
        let g = build_group(GroupSpec::Cyclic(2)).unwrap();
        assert_eq!(g.classes.len(), 2);
        let ints: Vec<Vec<i64>> = g.table.iter().map(|r| r.iter().map(|v| v.as_integer().unwrap()).collect()).collect();
        assert_eq!(ints, vec![vec![1, 1], vec![1, -1]]);
        let std: Vec<i64> = standard_character(&g).iter().map(|v| v.as_integer().unwrap()).collect();
        assert_eq!(std, vec![2, -2]);
    }

    #[test]
    fn cyclic_rows_follow_exponent() {
        let g = build_group(GroupSpec::Cyclic(5)).unwrap();
        for (j, row) in g.table.iter().enumerate() {
            assert_eq!(row[1], CycNum::zeta_pow(5, j as i64));
        }
        let std: Vec<i64> = build_group(GroupSpec::Cyclic(3)).unwrap().std.iter().map(|v| v.as_integer().unwrap()).collect();
        assert_eq!(std, vec![2, -1, -1]);
    }

    #[test]
    fn binary_dihedral_two() {
        let g = build_group(GroupSpec::BinaryDihedral(2)).unwrap();
        assert_eq!(g.degrees, vec![1, 1, 1, 1, 2]);
        assert!(verify_character_table(&g).all_passed());
    }

    #[test]
    fn every_family_validates() {
        let mut specs: Vec<GroupSpec> = (1..=9).map(GroupSpec::Cyclic).collect();
        specs.extend((2..=7).map(GroupSpec::BinaryDihedral));
        specs.extend([GroupSpec::BinaryTetrahedral, GroupSpec::BinaryOctahedral, GroupSpec::BinaryIcosahedral]);
        for spec in specs {
            let g = build_group(spec).unwrap();
            let report = verify_character_table(&g);
            assert!(report.all_passed(), "{spec}: {:?}", report.failures().collect::<Vec<_>>());
            assert_eq!(g.degrees.iter().map(|d| d * d).sum::<i64>() as u64, spec.order());
        }
    }

    #[test]
    fn icosahedral_degrees() {
        let g = build_group(GroupSpec::BinaryIcosahedral).unwrap();
        assert_eq!(g.degrees, vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn perturbed_table_fails_orthogonality() {
        let mut g = build_group(GroupSpec::BinaryTetrahedral).unwrap();
        g.table[3][2] = &g.table[3][2] + &CycNum::one(g.conductor);
        let report = verify_character_table(&g);
        let item = report.get("row_orthogonality").unwrap();
        assert!(!item.passed);
        assert!(item.detail.contains("residual"));
    }
}
