//! Amplitude estimation, simulated two ways.
//!
//! The workhorse samples phase-estimation outcomes directly from their
//! closed-form law: for amplitude p with angle θ_p = arcsin(√p), the M-point
//! outcome j follows the equal mixture of the two Fejér-type kernels centred
//! at ±θ_p/π, and the estimate is sin²(π·min(j, M−j)/M). Runs are repeated k
//! times and combined by the median of the angle estimates.
//!
//! A full state-vector mode (index register ⊗ qubit ⊗ ×-register, explicit
//! Grover operator) exists for small instances as a cross-check; the two
//! modes must agree in distribution.

use rand::Rng;

use crate::error::{Error, Result};
use crate::C64;

use super::BOperator;

/// State-vector phase estimation is kept tiny; it builds an
/// M·2(q−1)-dimensional state.
pub const MAX_STATEVECTOR_Q: u64 = 8;
pub const MAX_STATEVECTOR_M: u64 = 16;

fn fejer_kernel(x: f64, m: u64) -> f64 {
    // sin²(Mπx) / (M² sin²(πx)), extended by continuity at integer x
    let frac = x - x.round();
    let denom = (std::f64::consts::PI * frac).sin();
    if denom.abs() < 1e-15 {
        return 1.0;
    }
    let numer = (std::f64::consts::PI * x * m as f64).sin();
    (numer / (m as f64 * denom)).powi(2)
}

/// The exact law of the M-point phase-estimation outcome for amplitude p.
pub fn outcome_distribution(p: f64, m_points: u64) -> Vec<f64> {
    let m = m_points;
    let omega = p.clamp(0.0, 1.0).sqrt().asin() / std::f64::consts::PI;
    let mut probs: Vec<f64> = (0..m)
        .map(|j| {
            let t = j as f64 / m as f64;
            0.5 * (fejer_kernel(omega - t, m) + fejer_kernel(omega + t, m))
        })
        .collect();
    let total: f64 = probs.iter().sum();
    for v in probs.iter_mut() {
        *v /= total;
    }
    probs
}

/// Inverse-transform sampler over a fixed outcome law; build once per
/// (p, M) pair and reuse across trials.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    cdf: Vec<f64>,
    m_points: u64,
}

impl OutcomeSampler {
    pub fn new(p: f64, m_points: u64) -> Self {
        let probs = outcome_distribution(p, m_points);
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|&v| {
                acc += v;
                acc
            })
            .collect();
        OutcomeSampler { cdf, m_points }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> u64 {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c < u) as u64
    }

    /// Angle estimate for an outcome: π·min(j, M−j)/M ∈ [0, π/2].
    pub fn angle_of(&self, j: u64) -> f64 {
        let m = self.m_points;
        std::f64::consts::PI * j.min(m - j) as f64 / m as f64
    }
}

/// Simulated amplitude estimation: k median-combined M-point phase
/// estimation runs. Returns the estimate of p; satisfies |est − p| ≤ e with
/// probability ≥ 1−d when (k, M) come from the schedule for (d, e).
pub fn amplitude_estimation(
    p_true: f64,
    m_points: u64,
    k: u64,
    rng: &mut impl Rng,
) -> Result<f64> {
    if m_points < 1 {
        return Err(Error::InvalidCount {
            name: "M",
            value: m_points,
        });
    }
    if k < 1 {
        return Err(Error::InvalidCount { name: "k", value: k });
    }
    if !(0.0..=1.0 + 1e-12).contains(&p_true) {
        return Err(Error::OutOfRange {
            name: "p_true",
            value: p_true,
        });
    }
    // endpoints are eigenstates: the outcome law degenerates and the
    // estimate is exact
    if p_true <= 0.0 {
        return Ok(0.0);
    }
    if p_true >= 1.0 {
        return Ok(1.0);
    }
    let sampler = OutcomeSampler::new(p_true, m_points);
    let mut angles: Vec<f64> = (0..k)
        .map(|_| sampler.angle_of(sampler.sample(rng)))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = angles.len() / 2;
    let median = if angles.len() % 2 == 1 {
        angles[mid]
    } else {
        0.5 * (angles[mid - 1] + angles[mid])
    };
    Ok(median.sin().powi(2))
}

/// Exact outcome law computed by running the phase-estimation circuit on a
/// dense state vector: index register of dimension M, then the qubit ⊗
/// ×-register pair that B acts on, with the Grover operator
/// Q = −B·S₀·B†·S_good.
pub fn statevector_distribution(b: &BOperator, m_points: u64) -> Result<Vec<f64>> {
    let dim = b.dim();
    if dim as u64 / 2 + 1 > MAX_STATEVECTOR_Q {
        return Err(Error::SimTooLarge {
            q: dim as u64 / 2 + 1,
            limit: MAX_STATEVECTOR_Q,
        });
    }
    if m_points > MAX_STATEVECTOR_M {
        return Err(Error::SimTooLarge {
            q: m_points,
            limit: MAX_STATEVECTOR_M,
        });
    }
    let m = m_points as usize;
    let q_op = grover_operator(b);

    // target starts as B|00⟩
    let t0: Vec<C64> = (0..dim).map(|i| b.matrix()[i * dim]).collect();

    // index register in uniform superposition; block y holds Q^y·t0/√M
    let scale = 1.0 / (m as f64).sqrt();
    let mut blocks: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut cur = t0;
    for _ in 0..m {
        blocks.push(cur.iter().map(|&v| v * scale).collect());
        cur = matvec(&q_op, &cur, dim);
    }

    // inverse Fourier transform on the index register, then the marginal
    let roots = crate::unit_roots(m);
    let inv_scale = 1.0 / (m as f64).sqrt();
    let mut probs = vec![0.0f64; m];
    let mut amp = vec![C64::new(0.0, 0.0); dim];
    for (j, prob) in probs.iter_mut().enumerate() {
        amp.fill(C64::new(0.0, 0.0));
        for (y, block) in blocks.iter().enumerate() {
            let w = roots[(m - (j * y) % m) % m] * inv_scale;
            for (acc, &v) in amp.iter_mut().zip(block) {
                *acc += w * v;
            }
        }
        *prob = amp.iter().map(|v| v.norm_sqr()).sum();
    }
    Ok(probs)
}

fn grover_operator(b: &BOperator) -> Vec<C64> {
    let dim = b.dim();
    let good = b.good_index();
    // −B·S₀·B†·S_good as a dense matrix
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        // S_good
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[col] = if col == good {
            C64::new(-1.0, 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        // B†
        let mut w = vec![C64::new(0.0, 0.0); dim];
        for i in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..dim {
                acc += b.matrix()[r * dim + i].conj() * v[r];
            }
            w[i] = acc;
        }
        // S₀
        w[0] = -w[0];
        // B, then global −1
        for i in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..dim {
                acc += b.matrix()[i * dim + c] * w[c];
            }
            out[i * dim + col] = -acc;
        }
    }
    out
}

fn matvec(mat: &[C64], v: &[C64], dim: usize) -> Vec<C64> {
    (0..dim)
        .map(|i| (0..dim).map(|j| mat[i * dim + j] * v[j]).sum())
        .collect()
}
