//! Jordan quiver data fixed by `μ_ℓ`, and its translation into Γ-modules.
//!
//! The generator acts on `(α, β, v¹, v²)` through a gauge matrix `g` with
//! `gαg⁻¹ = ζ⁻¹α`, `gβg⁻¹ = ζβ`, `gv¹ = v¹`. The Γ-module structure is
//! `σ = g⁻¹`, whose character is the residue character `(c − r) mod ℓ` on
//! monomial ideals.

use rand::Rng;

use super::{c, hstack, identity, orth, rank, vstack, CMat, ModuleRep, EQ_TOL, RANK_TOL, ROUND_TRIP_TOL};
use crate::cyclic_oracle::Partition;
use crate::error::{McKayError, Result};
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct JordanPoint {
    pub alpha: CMat,
    pub beta: CMat,
    /// `n × 1`.
    pub v1: CMat,
    /// `1 × n`.
    pub v2: CMat,
}

impl JordanPoint {
    pub fn dim(&self) -> usize {
        self.alpha.nrows()
    }

    /// `αβ − βα + v¹v²`.
    pub fn moment(&self) -> CMat {
        &self.alpha * &self.beta - &self.beta * &self.alpha + &self.v1 * &self.v2
    }
}

/// Dimension of the smallest subspace containing `start` and stable under `ops`.
pub fn closure_dim(start: &CMat, ops: &[&CMat]) -> usize {
    let n = start.nrows();
    let mut basis = orth(start);
    loop {
        let mut parts = vec![basis.clone()];
        parts.extend(ops.iter().map(|op| *op * &basis));
        let next = orth(&hstack(n, &parts));
        if next.ncols() == basis.ncols() {
            return basis.ncols();
        }
        basis = next;
    }
}

/// `ℂ[α, β]v¹ = ℂⁿ`.
pub fn is_stable_jordan(p: &JordanPoint) -> bool {
    closure_dim(&p.v1, &[&p.alpha, &p.beta]) == p.dim()
}

/// Multiplication by `x` and `y` on `ℂ[x, y]/I_λ`, basis `x^c y^r` for the
/// cells `(r, c)` of `λ` in row-major order.
pub fn hilbert_point(lambda: &Partition) -> JordanPoint {
    let cells: Vec<(usize, usize)> = lambda.cells().collect();
    let n = cells.len();
    let index = |cell: (usize, usize)| cells.iter().position(|x| *x == cell);
    let mut alpha = CMat::zeros(n, n);
    let mut beta = CMat::zeros(n, n);
    for (j, &(r, col)) in cells.iter().enumerate() {
        if let Some(i) = index((r, col + 1)) {
            alpha[(i, j)] = c(1.0);
        }
        if let Some(i) = index((r + 1, col)) {
            beta[(i, j)] = c(1.0);
        }
    }
    let mut v1 = CMat::zeros(n, 1);
    if n > 0 {
        v1[(0, 0)] = c(1.0);
    }
    JordanPoint { alpha, beta, v1, v2: CMat::zeros(1, n) }
}

fn zeta(l: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / l as f64)
}

#[derive(Clone, Debug)]
pub struct FixedPointData {
    /// Gauge matrix of the generator.
    pub generator: CMat,
    /// `σ = g⁻¹`.
    pub sigma: CMat,
    /// Multiplicity of `ζ^j` as an eigenvalue of `σ`.
    pub d_sigma: Vec<i64>,
    pub module: ModuleRep,
}

/// Module with `ρ = g⁻¹`, `Δ_{e₁} = β`, `Δ_{e₂} = −α`, `Z₁ = v¹`, `Z₂ = v²`
/// and trivial one-dimensional framing. No stability check.
pub fn assemble_module(p: &JordanPoint, g: &CMat) -> Result<ModuleRep> {
    let sigma = g.clone().try_inverse().ok_or_else(|| McKayError::NotFixed("gauge matrix is singular".into()))?;
    Ok(ModuleRep {
        rho: vec![sigma],
        rho_f: vec![identity(1)],
        delta: [p.beta.clone(), -p.alpha.clone()],
        z1: p.v1.clone(),
        z2: p.v2.clone(),
    })
}

/// `(−Δ_{e₂}, Δ_{e₁}, Z₁, Z₂)`.
pub fn iota(m: &ModuleRep) -> JordanPoint {
    JordanPoint { alpha: -m.delta[1].clone(), beta: m.delta[0].clone(), v1: m.z1.clone(), v2: m.z2.clone() }
}

/// `d_j = (1/ℓ) Σ_k Tr(σ^k) ζ^{−jk}`.
pub fn character_of(sigma: &CMat, l: usize) -> Result<Vec<i64>> {
    let n = sigma.nrows();
    let z = zeta(l);
    let mut traces = Vec::with_capacity(l);
    let mut power = identity(n);
    for _ in 0..l {
        traces.push(power.trace());
        power = &power * sigma;
    }
    (0..l)
        .map(|j| {
            let sum: Complex64 =
                traces.iter().enumerate().map(|(k, t)| t * z.powi(-((j * k % l) as i32))).sum::<Complex64>() / c(l as f64);
            let rounded = sum.re.round();
            if (sum - c(rounded)).norm() > ROUND_TRIP_TOL {
                Err(McKayError::NotFixed(format!("character value {sum} is not an integer")))
            } else {
                Ok(rounded as i64)
            }
        })
        .collect()
}

/// Recovers the gauge matrix of the generator of `μ_ℓ` from a stable fixed
/// point and builds the associated module.
pub fn fixed_point_decompose(p: &JordanPoint, l: usize) -> Result<FixedPointData> {
    if l == 0 {
        return Err(McKayError::InvalidParameter("ℓ must be positive".into()));
    }
    if !is_stable_jordan(p) {
        return Err(McKayError::NotStable);
    }
    let n = p.dim();
    if n == 0 {
        let module = assemble_module(p, &identity(0))?;
        return Ok(FixedPointData { generator: identity(0), sigma: identity(0), d_sigma: vec![0; l], module });
    }
    let z = zeta(l);
    let id = identity(n);
    // Unknown vec(g); vec(AXB) = (Bᵀ ⊗ A) vec(X).
    let lhs = vstack(
        n * n,
        &[
            p.alpha.transpose().kronecker(&id) - id.kronecker(&p.alpha) * z.inv(),
            p.beta.transpose().kronecker(&id) - id.kronecker(&p.beta) * z,
            p.v1.transpose().kronecker(&id),
            id.kronecker(&p.v2),
        ],
    );
    let mut rhs = CMat::zeros(lhs.nrows(), 1);
    let v1_at = 2 * n * n;
    rhs.view_mut((v1_at, 0), (n, 1)).copy_from(&p.v1);
    rhs.view_mut((v1_at + n, 0), (n, 1)).copy_from(&p.v2.transpose());
    if rank(&lhs) < n * n {
        return Err(McKayError::NotFixed("gauge equations do not determine the generator".into()));
    }
    let x = lhs
        .clone()
        .svd(true, true)
        .solve(&rhs, RANK_TOL)
        .map_err(|e| McKayError::NotFixed(format!("least squares failed: {e}")))?;
    if (&lhs * &x - &rhs).norm() > ROUND_TRIP_TOL {
        return Err(McKayError::NotFixed("no gauge matrix satisfies the equations".into()));
    }
    let g = CMat::from_column_slice(n, n, x.as_slice());
    let module = assemble_module(p, &g)?;
    let sigma = module.rho[0].clone();
    // The generator has order ℓ on a genuine fixed point.
    if (eval_power(&g, l) - identity(n)).norm() > ROUND_TRIP_TOL {
        return Err(McKayError::NotFixed(format!("gauge matrix does not have order dividing {l}")));
    }
    let d_sigma = character_of(&sigma, l)?;
    Ok(FixedPointData { generator: g, sigma, d_sigma, module })
}

fn eval_power(m: &CMat, k: usize) -> CMat {
    (0..k).fold(identity(m.nrows()), |acc, _| acc * m)
}

/// Whether the smallest Δ-stable Γ-submodule containing `Im Z₁` is `M`.
pub fn is_semistable_module(m: &ModuleRep) -> bool {
    let mut ops: Vec<&CMat> = vec![&m.delta[0], &m.delta[1]];
    ops.extend(m.rho.iter());
    closure_dim(&m.z1, &ops) == m.dim()
}

/// Random point fixed by `μ_ℓ` with diagonal gauge `diag(ζ^{k_i})`, not
/// necessarily stable. Returns the point and its gauge matrix.
pub fn random_fixed_point<R: Rng>(rng: &mut R, l: usize, n: usize) -> (JordanPoint, CMat) {
    let grading: Vec<usize> = (0..n).map(|_| rng.gen_range(0..l)).collect();
    let z = zeta(l);
    let g = CMat::from_fn(n, n, |i, j| if i == j { z.powi(grading[i] as i32) } else { c(0.0) });
    let mut entry = |allowed: bool| {
        if allowed && rng.gen_bool(0.6) {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        } else {
            c(0.0)
        }
    };
    let alpha = CMat::from_fn(n, n, |i, j| entry((grading[i] + 1) % l == grading[j]));
    let beta = CMat::from_fn(n, n, |i, j| entry(grading[i] == (grading[j] + 1) % l));
    let v1 = CMat::from_fn(n, 1, |i, _| entry(grading[i] == 0));
    (JordanPoint { alpha, beta, v1, v2: CMat::zeros(1, n) }, g)
}

/// Largest residual of the gauge equations for `g`.
pub fn gauge_residual(p: &JordanPoint, g: &CMat, l: usize) -> f64 {
    let z = zeta(l);
    let r1 = (g * &p.alpha - &p.alpha * g * z.inv()).norm();
    let r2 = (g * &p.beta - &p.beta * g * z).norm();
    let r3 = (g * &p.v1 - &p.v1).norm();
    let r4 = (&p.v2 * g - &p.v2).norm();
    r1.max(r2).max(r3).max(r4)
}

/// `ι(κ(p)) = p` as an exact comparison.
pub fn rebuilds_exactly(p: &JordanPoint, data: &FixedPointData) -> bool {
    iota(&data.module) == *p
}

pub fn equals_within(a: &CMat, b: &CMat, tol: f64) -> bool {
    a.shape() == b.shape() && (a - b).norm() <= tol
}

pub const JORDAN_TOL: f64 = EQ_TOL;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic_oracle::{partitions, residue_character};
    use crate::repspace::{module_equivariance_residual, moment_map_module};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyclic_std(l: usize) -> CMat {
        let z = zeta(l);
        CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => z.inv(),
            (1, 1) => z,
            _ => c(0.0),
        })
    }

    #[test]
    fn tiny_stability_cases() {
        let one = JordanPoint { alpha: CMat::zeros(1, 1), beta: CMat::zeros(1, 1), v1: identity(1), v2: CMat::zeros(1, 1) };
        assert!(is_stable_jordan(&one));
        let mut v1 = CMat::zeros(2, 1);
        v1[(0, 0)] = c(1.0);
        let two = JordanPoint { alpha: CMat::zeros(2, 2), beta: CMat::zeros(2, 2), v1, v2: CMat::zeros(1, 2) };
        assert!(!is_stable_jordan(&two));
        assert!(matches!(fixed_point_decompose(&two, 2), Err(McKayError::NotStable)));
    }

    #[test]
    fn hilbert_points_small() {
        let p1 = hilbert_point(&Partition::new(vec![1]));
        assert_eq!(p1.alpha, CMat::zeros(1, 1));
        assert_eq!(p1.v1, identity(1));
        let p2 = hilbert_point(&Partition::new(vec![2]));
        assert_eq!(p2.alpha, CMat::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)]));
        assert_eq!(p2.beta, CMat::zeros(2, 2));
        for n in 0..=8 {
            for lam in partitions(n) {
                let p = hilbert_point(&lam);
                assert_eq!((&p.alpha * &p.beta - &p.beta * &p.alpha).norm(), 0.0);
                assert!(is_stable_jordan(&p), "{lam:?}");
            }
        }
    }

    #[test]
    fn single_box_for_two_element_group() {
        let data = fixed_point_decompose(&hilbert_point(&Partition::new(vec![1])), 2).unwrap();
        assert_eq!(data.d_sigma, vec![1, 0]);
        assert!(equals_within(&data.sigma, &identity(1), EQ_TOL));
    }

    #[test]
    fn characters_and_rebuild() {
        for l in 1..=4 {
            for n in 0..=6 {
                for lam in partitions(n) {
                    let p = hilbert_point(&lam);
                    let data = fixed_point_decompose(&p, l).unwrap();
                    assert_eq!(data.d_sigma, residue_character(&lam, l), "{lam:?} ℓ={l}");
                    assert!(rebuilds_exactly(&p, &data));
                    assert!(is_semistable_module(&data.module));
                    assert!(gauge_residual(&p, &data.generator, l) < JORDAN_TOL);
                    let moment = moment_map_module(&data.module);
                    assert!(equals_within(&moment, &p.moment(), JORDAN_TOL));
                    assert!(module_equivariance_residual(&data.module, &[cyclic_std(l)]) < JORDAN_TOL);
                }
            }
        }
    }

    #[test]
    fn zero_framing_is_unstable() {
        let p = hilbert_point(&Partition::new(vec![2, 1]));
        let mut m = assemble_module(&p, &identity(3)).unwrap();
        m.z1 = CMat::zeros(3, 1);
        assert!(!is_semistable_module(&m));
    }

    #[test]
    fn unfixed_point_is_rejected() {
        // α with a cycle of length 2 cannot be rescaled by ζ⁻¹ for ℓ = 3
        let mut alpha = CMat::zeros(2, 2);
        alpha[(0, 1)] = c(1.0);
        alpha[(1, 0)] = c(1.0);
        let mut v1 = CMat::zeros(2, 1);
        v1[(0, 0)] = c(1.0);
        let p = JordanPoint { alpha, beta: CMat::zeros(2, 2), v1, v2: CMat::zeros(1, 2) };
        assert!(is_stable_jordan(&p));
        assert!(matches!(fixed_point_decompose(&p, 3), Err(McKayError::NotFixed(_))));
    }

    #[test]
    fn semistability_matches_cyclic_vector_criterion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut stable = 0;
        for i in 0..100 {
            let l = 2 + i % 3;
            let n = 1 + i % 4;
            let (p, g) = random_fixed_point(&mut rng, l, n);
            assert!(gauge_residual(&p, &g, l) < JORDAN_TOL);
            let m = assemble_module(&p, &g).unwrap();
            assert_eq!(is_semistable_module(&m), is_stable_jordan(&iota(&m)));
            stable += is_stable_jordan(&p) as usize;
        }
        assert!(stable > 10 && stable < 90, "{stable}");
    }
}
