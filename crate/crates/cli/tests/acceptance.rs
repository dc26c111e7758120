//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::Command;
use std::time::{Duration, Instant};

use mckay_core::chambers::{bc_map, enumerate_chambers_in_f, surjectivity_report};
use mckay_core::components::{enumerate_components, ComponentIndex};
use mckay_core::cyclic_oracle::{cross_check, partitions, residue_character};
use mckay_core::groups::{build_group, GroupSpec};
use mckay_core::mckay::{size, AffineType, RootDatum};
use mckay_core::repspace::jordan::{
    fixed_point_decompose, hilbert_point, iota, is_semistable_module, is_stable_jordan, rebuilds_exactly,
};
use mckay_core::repspace::{run_lab, Lab, LabReport};
use mckay_core::weyl::{apply_word_dim, default_bound, dominant_witness, orbit_witness, reflect_dim, weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_241_016;
const LAB_SAMPLES: usize = 100;
const JORDAN_TOL: f64 = 1e-9;
const CHAMBER_BOUND: usize = 12;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn datum(s: &str) -> RootDatum {
    RootDatum::for_spec(s.parse::<GroupSpec>().unwrap()).unwrap()
}

fn criterion1() -> Outcome {
    let mut cases: Vec<(GroupSpec, AffineType)> = Vec::new();
    for l in 2..=8 {
        cases.push((GroupSpec::Cyclic(l), AffineType::A(l as usize - 1)));
    }
    for m in 2..=6 {
        cases.push((GroupSpec::BinaryDihedral(m), AffineType::D(m as usize + 2)));
    }
    cases.push((GroupSpec::BinaryTetrahedral, AffineType::E6));
    cases.push((GroupSpec::BinaryOctahedral, AffineType::E7));
    cases.push((GroupSpec::BinaryIcosahedral, AffineType::E8));
    for (spec, expected) in &cases {
        let r = match RootDatum::for_spec(*spec) {
            Ok(r) => r,
            Err(e) => return fail(format!("{spec}: {e}")),
        };
        if r.affine_type != *expected {
            return fail(format!("{spec}: detected {} expected {expected}", r.affine_type));
        }
        if r.cartan_apply(&r.delta).iter().any(|x| *x != 0) {
            return fail(format!("{spec}: A·δ ≠ 0"));
        }
        let g = build_group(*spec).unwrap();
        let dims: Vec<i64> = g.table.iter().map(|row| row[0].as_integer().unwrap()).collect();
        if dims != r.delta {
            return fail(format!("{spec}: δ {:?} vs χ(id) {dims:?}", r.delta));
        }
    }
    pass(format!("{} groups, types and δ confirmed", cases.len()))
}

fn criterion2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for s in ["cyclic:3", "bd:2", "2T"] {
        let r = datum(s);
        for _ in 0..1000 {
            let d: Vec<i64> = (0..r.rank()).map(|_| rng.gen_range(-4..=8)).collect();
            let w = weight(&d, &r);
            for chi in 0..r.rank() {
                if weight(&reflect_dim(&r, chi, &d), &r) != w {
                    return fail(format!("{s}: weight changes under s_{chi} at {d:?}"));
                }
            }
        }
        for k in 0..=5 {
            let d: Vec<i64> = r.delta.iter().map(|x| x * k).collect();
            if weight(&d, &r) != k {
                return fail(format!("{s}: wt({k}δ) = {}", weight(&d, &r)));
            }
        }
    }
    let mut checked = 0;
    for s in ["cyclic:2", "cyclic:3", "bd:2"] {
        let r = datum(s);
        let k = r.rank();
        let mut d = vec![0i64; k];
        'odometer: loop {
            if size(&d, &r) <= 6 {
                let wt = weight(&d, &r);
                let target: Vec<i64> = r.delta.iter().map(|x| x * wt).collect();
                let word = match orbit_witness(&d, &r, default_bound(&d, &r)) {
                    Ok(w) => w,
                    Err(e) => return fail(format!("{s} {d:?}: {e}")),
                };
                if apply_word_dim(&r, &word, &d) != target {
                    return fail(format!("{s} {d:?}: witness misses {target:?}"));
                }
                let greedy = dominant_witness(&d, &r);
                if apply_word_dim(&r, &greedy, &d) != target || greedy.len() != word.len() {
                    return fail(format!("{s} {d:?}: greedy route disagrees"));
                }
                checked += 1;
            }
            for i in (0..k).rev() {
                if d[i] < 6 {
                    d[i] += 1;
                    continue 'odometer;
                }
                d[i] = 0;
            }
            break;
        }
    }
    pass(format!("3000 reflection checks, wt(rδ) = r, {checked} orbit witnesses"))
}

fn criterion3() -> Outcome {
    let mut runs = 0;
    for l in [2, 3, 4] {
        for n in 0..=10 {
            match cross_check(l, n) {
                Ok(rep) if rep.all_passed() => runs += 1,
                Ok(rep) => {
                    let bad: Vec<String> = rep.failures().map(|i| format!("{}: {}", i.name, i.detail)).collect();
                    return fail(format!("ℓ={l} n={n}: {bad:?}"));
                }
                Err(e) => return fail(format!("ℓ={l} n={n}: {e}")),
            }
        }
    }
    pass(format!("{runs} (ℓ, n) pairs agree with the partition oracle"))
}

fn criterion4() -> Outcome {
    let mut seen = 0;
    for (s, max_n) in [("cyclic:2", 10), ("cyclic:3", 10), ("cyclic:4", 10), ("bd:2", 8), ("bd:3", 8), ("2T", 6), ("2O", 4)] {
        let r = datum(s);
        for n in 0..=max_n {
            for c in enumerate_components(&r, n).unwrap() {
                if c.dim != 2 * c.wt {
                    return fail(format!("{s} {:?}: dim {} wt {}", c.d, c.dim, c.wt));
                }
                seen += 1;
            }
        }
    }
    for s in ["cyclic:2", "cyclic:5", "bd:4", "2T", "2O", "2I"] {
        let r = datum(s);
        for n in 0..=5 {
            let d: Vec<i64> = r.delta.iter().map(|x| x * n).collect();
            let c = ComponentIndex::new(d, &r);
            if c.dim != 2 * n {
                return fail(format!("{s}: dim({n}δ) = {}", c.dim));
            }
        }
    }
    for s in ["cyclic:2", "cyclic:3", "bd:2"] {
        let r = datum(s);
        for n in 1..=3 {
            let d: Vec<i64> = r.delta.iter().map(|x| x * n).collect();
            let comps = enumerate_components(&r, size(&d, &r)).unwrap();
            if !comps.iter().any(|c| c.d == d && c.dim == 2 * n) {
                return fail(format!("{s}: {n}δ missing from the enumeration"));
            }
        }
    }
    pass(format!("{seen} emitted indices satisfy dim = 2·wt; nδ has dimension 2n"))
}

fn lab_summary(rep: &LabReport) -> String {
    let worst = rep.residuals.values().cloned().fold(0.0, f64::max);
    format!("{} max residual {worst:.1e}", rep.group)
}

fn criterion5() -> Outcome {
    let two = Lab::new(GroupSpec::Cyclic(2)).unwrap();
    let explicit = [[1.0, 0.0], [0.0, 1.0], [0.0, 1.0], [1.0, 0.0]];
    // edges in order: 0→1 first, 1→0 first, 0→1 second, 1→0 second
    for (h, e) in two.maps.edges.iter().enumerate() {
        let want = explicit[h];
        let got = [e.y0[(0, 0)].re, e.y0[(0, 1)].re];
        if got != want || e.y0.iter().any(|z| z.im != 0.0) {
            return fail(format!("μ₂ edge {h}: {got:?} instead of {want:?}"));
        }
    }
    let mut lines = Vec::new();
    for l in [2, 3] {
        let rep = match run_lab(GroupSpec::Cyclic(l), SEED, LAB_SAMPLES) {
            Ok(r) => r,
            Err(e) => return fail(format!("cyclic:{l}: {e}")),
        };
        if !rep.passed {
            return fail(format!("cyclic:{l}: failing invariants {:?}", rep.failures()));
        }
        lines.push(lab_summary(&rep));
    }
    pass(format!("{LAB_SAMPLES} samples each; {}", lines.join("; ")))
}

fn criterion6() -> Outcome {
    let mut points = 0;
    for l in 1..=4 {
        for n in 0..=6 {
            for lam in partitions(n) {
                let p = hilbert_point(&lam);
                let data = match fixed_point_decompose(&p, l) {
                    Ok(d) => d,
                    Err(e) => return fail(format!("{lam:?} ℓ={l}: {e}")),
                };
                if data.d_sigma != residue_character(&lam, l) {
                    return fail(format!("{lam:?} ℓ={l}: character {:?}", data.d_sigma));
                }
                if !rebuilds_exactly(&p, &data) {
                    return fail(format!("{lam:?} ℓ={l}: rebuild differs"));
                }
                let rebuilt = iota(&data.module);
                let residual = (&rebuilt.alpha - &p.alpha).norm() + (&rebuilt.beta - &p.beta).norm();
                if residual > JORDAN_TOL {
                    return fail(format!("{lam:?} ℓ={l}: residual {residual}"));
                }
                if is_semistable_module(&data.module) != is_stable_jordan(&rebuilt) || !is_stable_jordan(&p) {
                    return fail(format!("{lam:?} ℓ={l}: semistability criteria disagree"));
                }
                points += 1;
            }
        }
    }
    pass(format!("{points} (λ, ℓ) points round-trip with matching characters and stability"))
}

fn inverse(w: &[usize]) -> Vec<usize> {
    w.iter().rev().copied().collect()
}

fn criterion7() -> Outcome {
    let r = datum("cyclic:3");
    let en = enumerate_chambers_in_f(&r, 2, CHAMBER_BOUND).unwrap();
    if en.chambers.len() != 5 {
        return fail(format!("{} chambers in F at bound {CHAMBER_BOUND}", en.chambers.len()));
    }
    let two_delta = vec![2, 2, 2];
    let w1 = vec![0, 2, 1, 2];
    let w2 = vec![0, 2, 1, 2, 0];
    let d1 = apply_word_dim(&r, &inverse(&w1), &two_delta);
    let d2 = apply_word_dim(&r, &inverse(&w2), &two_delta);
    if d1 == d2 {
        return fail("the two component indices coincide");
    }
    let (b1, b2) = match (bc_map(&d1, &r), bc_map(&d2, &r)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return fail(e.to_string()),
    };
    if b1.signature != b2.signature {
        return fail(format!("{d1:?} and {d2:?} land in different chambers"));
    }
    let surj = surjectivity_report(&r, 2, CHAMBER_BOUND).unwrap();
    if !surj.all_witnessed {
        return fail("a chamber has no witnessing component");
    }
    pass(format!(
        "5 chambers (counts by length {:?}); {d1:?} ≠ {d2:?} share a chamber; all chambers witnessed",
        en.counts_by_length
    ))
}

fn criterion8() -> Outcome {
    let commands: Vec<Vec<&str>> = vec![
        vec!["group", "cyclic:5", "--json"],
        vec!["group", "2I"],
        vec!["graph", "bd:3", "--dot"],
        vec!["graph", "2O", "--json"],
        vec!["weight", "bd:2", "-d", "1,0,2,1,1"],
        vec!["components", "cyclic:3", "-n", "4", "--json"],
        vec!["components", "bd:3", "-n", "4", "--all-sizes", "--csv"],
        vec!["chambers", "cyclic:3", "-n", "2", "--surjectivity"],
        vec!["bc", "cyclic:3", "-d", "3,4,4"],
        vec!["verify", "--suite", "cyclic", "-l", "3", "-n", "6"],
        vec!["verify", "--suite", "repspace", "-l", "3", "--seed", "7", "--samples", "20"],
        vec!["verify", "--suite", "repspace", "--group", "bd:3", "--seed", "7", "--samples", "5"],
        vec!["verify", "--suite", "jordan", "-l", "3", "-n", "4"],
        vec!["group", "cyclic:0"],
    ];
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_mckay")).args(args).output().expect("binary runs");
    for args in &commands {
        let (a, b) = (run(args), run(args));
        if a.stdout != b.stdout || a.stderr != b.stderr || a.status.code() != b.status.code() {
            return fail(format!("{args:?} differs between runs"));
        }
    }
    pass(format!("{} commands byte-identical across two runs", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("McKay types and δ", criterion1, Duration::from_secs(1)),
        ("weight invariance and witnesses", criterion2, Duration::from_secs(30)),
        ("cyclic oracle", criterion3, Duration::from_secs(60)),
        ("dimension formula", criterion4, Duration::MAX),
        ("representation-space lab", criterion5, Duration::from_secs(30)),
        ("fixed-point round trip", criterion6, Duration::from_secs(60)),
        ("chambers, non-injectivity, surjectivity", criterion7, Duration::from_secs(120)),
        ("determinism", criterion8, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = f();
        let took = start.elapsed();
        if took > *limit {
            out = Outcome { ok: false, detail: format!("{} (over the {:?} limit)", out.detail, limit) };
        }
        let status = if out.ok { "PASS" } else { "FAIL" };
        println!("criterion {} [{name}]: {status} ({:.2} s) {}", i + 1, took.as_secs_f64(), out.detail);
        failed += usize::from(!out.ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
