//! Partition and abacus combinatorics for cyclic groups, used as an
//! independent oracle for the component enumeration and the weight.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::components::enumerate_components;
use crate::error::{McKayError, Result};
use crate::groups::GroupSpec;
use crate::mckay::RootDatum;
use crate::report::CheckReport;
use crate::weyl::weight;

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    /// Sorts and strips zero parts.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|p| *p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Cells `(row, column)`, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }
}

/// All partitions of `n`, in reverse lexicographic order (`(n)` first).
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `d_i = #{cells (r, c) : (c − r) mod ℓ = i}`.
pub fn residue_character(lambda: &Partition, l: usize) -> Vec<i64> {
    let mut d = vec![0i64; l];
    for (r, c) in lambda.cells() {
        d[(c as i64 - r as i64).rem_euclid(l as i64) as usize] += 1;
    }
    d
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbacusState {
    /// Bead levels on each runner, increasing.
    pub runners: Vec<Vec<usize>>,
    pub core: Partition,
    pub quotient: Vec<Partition>,
    pub quotient_size: usize,
}

fn beta_numbers(lambda: &Partition, beads: usize) -> Vec<usize> {
    (0..beads).map(|i| lambda.0.get(i).copied().unwrap_or(0) + beads - 1 - i).collect()
}

fn from_beta(mut beta: Vec<usize>) -> Partition {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let k = beta.len();
    Partition::new(beta.iter().enumerate().map(|(i, b)| b + 1 + i - k).collect())
}

/// Runner levels to a partition: each bead contributes its number of gaps below.
fn runner_partition(levels: &[usize]) -> Partition {
    Partition::new(levels.iter().enumerate().map(|(i, lv)| lv - i).collect())
}

pub fn abacus_core_quotient(lambda: &Partition, l: usize) -> Result<AbacusState> {
    if l < 2 {
        return Err(McKayError::InvalidParameter(format!("abacus needs ℓ ≥ 2, got {l}")));
    }
    let beads = lambda.len().div_ceil(l).max(1) * l;
    let mut runners = vec![Vec::new(); l];
    for b in beta_numbers(lambda, beads) {
        runners[b % l].push(b / l);
    }
    for r in runners.iter_mut() {
        r.sort_unstable();
    }
    let quotient: Vec<Partition> = runners.iter().map(|lv| runner_partition(lv)).collect();
    let core_beta: Vec<usize> =
        runners.iter().enumerate().flat_map(|(j, lv)| (0..lv.len()).map(move |t| j + l * t)).collect();
    let core = from_beta(core_beta);
    let quotient_size = quotient.iter().map(Partition::size).sum();
    Ok(AbacusState { runners, core, quotient, quotient_size })
}

pub fn is_core(lambda: &Partition, l: usize) -> Result<bool> {
    Ok(abacus_core_quotient(lambda, l)?.quotient_size == 0)
}

/// `#{ℓ-cores c : |c| ≤ n, |c| ≡ n mod ℓ}`.
pub fn core_count(l: usize, n: usize) -> Result<usize> {
    let mut count = 0;
    for m in (n % l..=n).step_by(l) {
        for p in partitions(m) {
            if is_core(&p, l)? {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Compares the partition oracle with the component enumeration for `μ_ℓ`.
pub fn cross_check(l: usize, n: usize) -> Result<CheckReport> {
    let r = RootDatum::for_spec(GroupSpec::Cyclic(l as u32))?;
    let parts = partitions(n);
    let mut report = CheckReport::new();

    let from_partitions: BTreeSet<Vec<i64>> = parts.iter().map(|p| residue_character(p, l)).collect();
    let comps = enumerate_components(&r, n as i64)?;
    let from_weights: BTreeSet<Vec<i64>> = comps.iter().map(|c| c.d.clone()).collect();
    let missing: Vec<_> = from_weights.difference(&from_partitions).collect();
    let extra: Vec<_> = from_partitions.difference(&from_weights).collect();
    report.push(
        "residue_set_equals_components",
        missing.is_empty() && extra.is_empty(),
        format!("{} vectors; only in enumeration {missing:?}; only from partitions {extra:?}", from_weights.len()),
    );

    let mut bad_weight = Vec::new();
    let mut bad_size = Vec::new();
    for p in &parts {
        let ab = abacus_core_quotient(p, l)?;
        let d = residue_character(p, l);
        if weight(&d, &r) != ab.quotient_size as i64 {
            bad_weight.push((p.clone(), weight(&d, &r), ab.quotient_size));
        }
        if p.size() != ab.core.size() + l * ab.quotient_size || d.iter().sum::<i64>() != p.size() as i64 {
            bad_size.push(p.clone());
        }
    }
    report.push(
        "weight_equals_quotient_size",
        bad_weight.is_empty(),
        format!("{} partitions; mismatches {bad_weight:?}", parts.len()),
    );
    report.push("core_quotient_size_identity", bad_size.is_empty(), format!("failures {bad_size:?}"));

    let cores = core_count(l, n)?;
    report.push(
        "component_count_equals_core_count",
        cores == comps.len(),
        format!("components {}, cores {cores}", comps.len()),
    );
    Ok(report)
}
