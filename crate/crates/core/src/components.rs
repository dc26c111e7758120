//! Dimension vectors indexing the irreducible components of the fixed loci:
//! nonnegative `d` with `|d| = n` and `wt(d) ≥ 0`.

use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{McKayError, Result};
use crate::mckay::{size, RootDatum};
use crate::weyl::{dominant_witness, weight, WeylWord};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentIndex {
    pub d: Vec<i64>,
    pub n: i64,
    pub wt: i64,
    /// Dimension of the component, `2·wt`.
    pub dim: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WeylWord>,
}

impl ComponentIndex {
    pub fn new(d: Vec<i64>, r: &RootDatum) -> Self {
        let wt = weight(&d, r);
        ComponentIndex { n: size(&d, r), wt, dim: 2 * wt, d, witness: None }
    }

    pub fn with_witness(mut self, r: &RootDatum) -> Self {
        self.witness = Some(dominant_witness(&self.d, r));
        self
    }
}

pub fn enumerate_components(r: &RootDatum, n: i64) -> Result<Vec<ComponentIndex>> {
    enumerate_components_with_budget(r, n, DEFAULT_BUDGET)
}

/// Depth-first search over coordinates in vertex order, each coordinate
/// ascending, so the output is lexicographic. `budget` caps visited nodes.
pub fn enumerate_components_with_budget(r: &RootDatum, n: i64, budget: u64) -> Result<Vec<ComponentIndex>> {
    if n < 0 {
        return Err(McKayError::InvalidParameter(format!("n = {n} must be nonnegative")));
    }
    let mut out = Vec::new();
    let mut visited = 0u64;
    let mut d = vec![0i64; r.rank()];
    dfs(r, 0, n, &mut d, &mut visited, budget, &mut out)?;
    Ok(out)
}

fn dfs(
    r: &RootDatum,
    pos: usize,
    remaining: i64,
    d: &mut Vec<i64>,
    visited: &mut u64,
    budget: u64,
    out: &mut Vec<ComponentIndex>,
) -> Result<()> {
    *visited += 1;
    if *visited > budget {
        return Err(McKayError::BudgetExceeded(budget));
    }
    let step = r.delta[pos];
    if pos + 1 == d.len() {
        if remaining % step == 0 {
            d[pos] = remaining / step;
            if weight(d, r) >= 0 {
                out.push(ComponentIndex::new(d.clone(), r));
            }
            d[pos] = 0;
        }
        return Ok(());
    }
    for x in 0..=remaining / step {
        d[pos] = x;
        dfs(r, pos + 1, remaining - x * step, d, visited, budget, out)?;
    }
    d[pos] = 0;
    Ok(())
}

pub fn component_count(r: &RootDatum, n: i64) -> Result<usize> {
    Ok(enumerate_components(r, n)?.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = McKayError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(McKayError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// JSON document listing the components for every `n` in `ns`.
pub fn report_value(r: &RootDatum, ns: &[i64], budget: u64) -> Result<Value> {
    let mut blocks = Vec::new();
    for &n in ns {
        let comps = enumerate_components_with_budget(r, n, budget)?;
        blocks.push(json!({
            "n": n,
            "count": comps.len(),
            "components": comps.iter().map(|c| serde_json::to_value(c).expect("plain data")).collect::<Vec<_>>(),
        }));
    }
    Ok(json!({
        "group": r.graph.spec.to_string(),
        "type": r.affine_type.to_string(),
        "delta": r.delta,
        "sizes": blocks,
    }))
}

/// CSV table with one row per component: `n`, the entries `d0..`, `wt`, `dim`.
pub fn report_csv(r: &RootDatum, ns: &[i64], budget: u64) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["n".to_string()];
    header.extend((0..r.rank()).map(|i| format!("d{i}")));
    header.extend(["wt".to_string(), "dim".to_string()]);
    let io = |e: csv::Error| McKayError::UnsupportedFormat(format!("csv: {e}"));
    w.write_record(&header).map_err(io)?;
    for &n in ns {
        for c in enumerate_components_with_budget(r, n, budget)? {
            let mut rec = vec![c.n.to_string()];
            rec.extend(c.d.iter().map(|x| x.to_string()));
            rec.extend([c.wt.to_string(), c.dim.to_string()]);
            w.write_record(&rec).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| McKayError::UnsupportedFormat(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

pub fn report(r: &RootDatum, ns: &[i64], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let v = report_value(r, ns, DEFAULT_BUDGET)?;
            Ok(serde_json::to_string_pretty(&v).expect("plain data") + "\n")
        }
        ReportFormat::Csv => report_csv(r, ns, DEFAULT_BUDGET),
    }
}
