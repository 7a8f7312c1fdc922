//! Single-sum estimation with a (δ,ε) accuracy contract.
//!
//! The amplitude κ(a) = Kl_ψ(a,χ)/√N_χ of |a⟩_× in the prepared Kloosterman
//! vector is read off with amplitude estimation. One probability
//! P_{a,ρ} = |1 + ρκ(a)|²/4 is estimated for each of the three cube roots of
//! unity ρ; the complex κ(a) is then recovered exactly from
//! κ = (4/3)(P₁ + ζ²P_ζ + ζP_{ζ²}), and rescaling by √N_χ/√q gives
//! Kl_ψ(a,χ)/√q with absolute error ≤ ε at probability ≥ 1−δ.

pub mod phase;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::characters::{AddChar, MultChar};
use crate::classical;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::qsim::{self, Register, RegisterKind, StateVector};
use crate::C64;

/// ζ = exp(2πi/3). Swapping ζ ↔ ζ² only swaps the roles of two readings.
pub fn zeta() -> C64 {
    C64::new(-0.5, 3f64.sqrt() / 2.0)
}

/// The (δ,ε) contract together with the derived per-run parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationParams {
    pub delta: f64,
    pub epsilon: f64,
    /// Per-reading failure target: d = 1 − (1−δ)^{1/3}.
    pub d: f64,
    /// Per-reading error target: e = ε/(4√q).
    pub e: f64,
    /// Repetition count k = ⌈1 + 1/(2d)⌉.
    pub k: u64,
    /// Phase-estimation points M = ⌈kπ/(√(1+e) − 1)⌉.
    pub m_points: u64,
    pub rng_seed: u64,
}

impl EstimationParams {
    pub fn derive(delta: f64, epsilon: f64, q: u32, rng_seed: u64) -> Result<Self> {
        check_unit_interval("delta", delta)?;
        check_unit_interval("epsilon", epsilon)?;
        let d = 1.0 - (1.0 - delta).cbrt();
        let e = epsilon / (4.0 * (q as f64).sqrt());
        let (k, m_points) = repetition_schedule(d, e)?;
        Ok(EstimationParams {
            delta,
            epsilon,
            d,
            e,
            k,
            m_points,
            rng_seed,
        })
    }
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && 0.0 < value && value < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

/// k = ⌈1 + 1/(2d)⌉ and M = ⌈kπ/(√(1+e) − 1)⌉ for per-run targets (d, e).
pub fn repetition_schedule(d: f64, e: f64) -> Result<(u64, u64)> {
    check_unit_interval("d", d)?;
    check_unit_interval("e", e)?;
    let k = (1.0 + 1.0 / (2.0 * d)).ceil() as u64;
    // √(1+e) − 1 written as e/(√(1+e) + 1) to avoid cancellation
    let denom = e / ((1.0 + e).sqrt() + 1.0);
    let m = (k as f64 * std::f64::consts::PI / denom).ceil() as u64;
    Ok((k, m))
}

/// The oracle value of the amplitude κ(a) = Kl_ψ(a,χ)/√N_χ.
pub fn kappa(field: &FiniteField, psi: &AddChar, a: FieldElement, chi: MultChar) -> Result<C64> {
    let kl = classical::kloosterman(field, psi, a, chi)?;
    Ok(kl / (classical::norm_constant(field, chi) as f64).sqrt())
}

/// One amplitude reading at a fixed ρ.
#[derive(Debug, Clone, Copy)]
pub struct AmplitudeReading {
    pub rho: C64,
    pub p_true: f64,
    pub p_est: f64,
    pub m_used: u64,
}

/// The operator B_{a,ρ} on qubit ⊗ ×-register, held as a dense unitary.
///
/// B = (H ⊗ I) · (|0⟩⟨0| ⊗ S_a + |1⟩⟨1| ⊗ A) · (U_ρ ⊗ I), where U_ρ takes
/// |0⟩ to (|0⟩ + ρ|1⟩)/√2, S_a is a shift permutation taking |1⟩_× to
/// |a⟩_×, and A is a unitary completion of the simulated Kloosterman-vector
/// pipeline's output column A|0⟩ = |Kl_ψ^χ⟩.
#[derive(Debug, Clone)]
pub struct BOperator {
    n: usize,
    mat: Vec<C64>,
    good_index: usize,
}

impl BOperator {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &[C64] {
        &self.mat
    }

    /// Joint index of the marked basis state |0⟩|a⟩_×.
    pub fn good_index(&self) -> usize {
        self.good_index
    }

    /// B|0⟩|0⟩ as a qubit ⊗ ×-register state.
    pub fn state_after_zero(&self, field: &FiniteField) -> StateVector {
        let dim = self.dim();
        let amps: Vec<C64> = (0..dim).map(|i| self.mat[i * dim]).collect();
        StateVector::from_amps(vec![Register::qubit(), Register::mult(field)], amps)
            .expect("B is unitary, so B|00⟩ is a unit vector")
    }

    /// ⟨0, a|B|0, 0⟩, which equals (1 + ρκ(a))/2.
    pub fn good_amplitude(&self) -> C64 {
        self.mat[self.good_index * self.dim()]
    }

    /// P_{a,ρ} = |⟨0, a|B|0, 0⟩|².
    pub fn p_good(&self) -> f64 {
        self.good_amplitude().norm_sqr()
    }
}

/// Builds B_{a,ρ}; ρ must be unimodular and a nonzero.
pub fn build_b(
    field: &FiniteField,
    psi: &AddChar,
    a: FieldElement,
    chi: MultChar,
    rho: C64,
) -> Result<BOperator> {
    if (rho.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnimodularRho(rho.norm()));
    }
    let d_a = field.dlog(a).map_err(|_| Error::ZeroArgument)? as usize;
    let n = field.q() as usize - 1;

    // A|0⟩ from the simulated pipeline
    let prepared = qsim::kloosterman_vector(field, psi, chi)?;
    let kl_column = prepared.extract_register(1, &[chi.exponent() as usize])?;
    debug_assert_eq!(prepared.registers()[1].kind, RegisterKind::Mult);
    let a_mat = complete_unitary(&kl_column)?;

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let dim = 2 * n;
    // (U_ρ ⊗ I): U_ρ columns (1, ρ)/√2 and (1, −ρ)/√2
    let mut left = vec![C64::new(0.0, 0.0); dim * dim];
    for j in 0..n {
        left[j * dim + j] = C64::new(s, 0.0);
        left[j * dim + (n + j)] = C64::new(s, 0.0);
        left[(n + j) * dim + j] = rho * s;
        left[(n + j) * dim + (n + j)] = -rho * s;
    }
    // conditional block: S_a on the 0-block, A on the 1-block
    let mut cond = vec![C64::new(0.0, 0.0); dim * dim];
    for x in 0..n {
        cond[((x + d_a) % n) * dim + x] = C64::new(1.0, 0.0);
    }
    for row in 0..n {
        for col in 0..n {
            cond[(n + row) * dim + (n + col)] = a_mat[row * n + col];
        }
    }
    // (H ⊗ I)
    let mut had = vec![C64::new(0.0, 0.0); dim * dim];
    for j in 0..n {
        had[j * dim + j] = C64::new(s, 0.0);
        had[j * dim + (n + j)] = C64::new(s, 0.0);
        had[(n + j) * dim + j] = C64::new(s, 0.0);
        had[(n + j) * dim + (n + j)] = C64::new(-s, 0.0);
    }
    let mat = matmul(&had, &matmul(&cond, &left, dim), dim);
    Ok(BOperator {
        n,
        mat,
        good_index: d_a,
    })
}

fn matmul(a: &[C64], b: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

/// Unitary (row-major) whose first column is the given unit vector; the rest
/// comes from Gram–Schmidt over the standard basis.
fn complete_unitary(first_col: &[C64]) -> Result<Vec<C64>> {
    let n = first_col.len();
    let norm: f64 = first_col.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(norm));
    }
    let mut cols: Vec<Vec<C64>> = vec![first_col.to_vec()];
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[j] = C64::new(1.0, 0.0);
        // two Gram–Schmidt passes for numerical stability
        for _ in 0..2 {
            for c in &cols {
                let ip: C64 = c.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= ip * ci;
                }
            }
        }
        let vnorm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if vnorm > 1e-6 {
            for x in v.iter_mut() {
                *x /= vnorm;
            }
            cols.push(v);
        }
    }
    if cols.len() != n {
        return Err(Error::DegenerateRotation(0.0));
    }
    let mut mat = vec![C64::new(0.0, 0.0); n * n];
    for (c, col) in cols.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            mat[r * n + c] = v;
        }
    }
    Ok(mat)
}

/// Exact recovery of κ from the three probabilities: κ = (4/3)(P₁ + ζ²P_ζ + ζP_{ζ²}).
pub fn kappa_from_probabilities(p_1: f64, p_zeta: f64, p_zeta2: f64) -> C64 {
    let z = zeta();
    let z2 = z * z;
    (C64::new(p_1, 0.0) + z2 * p_zeta + z * p_zeta2) * (4.0 / 3.0)
}

/// Result of the three-reading κ estimator.
#[derive(Debug, Clone)]
pub struct KappaEstimate {
    pub value: C64,
    pub readings: [AmplitudeReading; 3],
    pub k: u64,
    pub m_points: u64,
    /// Total B applications across the three readings: 3·k·M.
    pub b_applications: u64,
}

/// Estimates κ(a) from three amplitude-estimation readings at ρ ∈ {1, ζ, ζ²};
/// absolute error ≤ 4e with probability ≥ (1−d)³.
pub fn estimate_kappa(
    field: &FiniteField,
    psi: &AddChar,
    a: FieldElement,
    chi: MultChar,
    d: f64,
    e: f64,
    rng: &mut ChaCha8Rng,
) -> Result<KappaEstimate> {
    let (k, m_points) = repetition_schedule(d, e)?;
    let z = zeta();
    let rhos = [C64::new(1.0, 0.0), z, z * z];
    let mut readings = Vec::with_capacity(3);
    for rho in rhos {
        let b = build_b(field, psi, a, chi, rho)?;
        let p_true = b.p_good();
        let p_est = phase::amplitude_estimation(p_true, m_points, k, rng)?;
        readings.push(AmplitudeReading {
            rho,
            p_true,
            p_est,
            m_used: m_points,
        });
    }
    let value = kappa_from_probabilities(readings[0].p_est, readings[1].p_est, readings[2].p_est);
    Ok(KappaEstimate {
        value,
        readings: [readings[0], readings[1], readings[2]],
        k,
        m_points,
        b_applications: 3 * k * m_points,
    })
}

/// Full record of one Kl_ψ(a,χ)/√q estimation run.
#[derive(Debug, Clone)]
pub struct KloostermanEstimate {
    pub params: EstimationParams,
    pub d_a: u32,
    pub m_chi: u32,
    pub estimate: C64,
    pub oracle: C64,
    pub abs_error: f64,
    pub b_applications: u64,
}

/// Estimates Kl_ψ(a,χ)/√q with |error| ≤ ε at probability ≥ 1−δ, spending
/// 3·k·M applications of B (linear in √q/(δε) up to the ceilings).
pub fn estimate_kloosterman(
    field: &FiniteField,
    psi: &AddChar,
    a: FieldElement,
    chi: MultChar,
    delta: f64,
    epsilon: f64,
    seed: u64,
) -> Result<KloostermanEstimate> {
    let params = EstimationParams::derive(delta, epsilon, field.q(), seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kap = estimate_kappa(field, psi, a, chi, params.d, params.e, &mut rng)?;
    let scale = (classical::norm_constant(field, chi) as f64).sqrt() / (field.q() as f64).sqrt();
    let estimate = kap.value * scale;
    let oracle =
        classical::kloosterman(field, psi, a, chi)? / (field.q() as f64).sqrt();
    Ok(KloostermanEstimate {
        params,
        d_a: field.dlog(a)?,
        m_chi: chi.exponent(),
        estimate,
        oracle,
        abs_error: (estimate - oracle).norm(),
        b_applications: kap.b_applications,
    })
}
