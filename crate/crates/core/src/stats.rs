//! Sato–Tate equidistribution checks.
//!
//! Untwisted sums are real, so Kl_ψ(a,𝟙) = 2√q·cos θ_ψ(a) for a unique angle
//! in [0,π]; as q grows these angles equidistribute for (2/π)sin²θ·dθ.
//! Across all twists the normalised sums Kl_ψ(a,χ)/√q fill the radius-2 disc
//! with density (1/2π²)√(4−r²)·dr·dθ, which we check through its two polar
//! marginals. The tests are one-sided Kolmogorov–Smirnov distances against
//! the closed-form CDFs; thresholds are calibration choices, not theorems.

use crate::characters::{AddChar, MultChar};
use crate::classical;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::C64;

/// Below this many nonzero elements a KS distance is mostly noise.
pub const SMALL_SAMPLE_Q: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    pub sample_size: usize,
    pub ks_distance: f64,
    pub threshold: f64,
    pub pass: bool,
    /// Set when the field is too small for the distance to mean much.
    pub small_sample: bool,
}

/// Both marginals of the disc law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U2Report {
    pub radial: KsReport,
    pub angular: KsReport,
}

/// θ_ψ(a) = arccos(Kl_ψ(a,𝟙)/(2√q)) ∈ [0,π]; the argument is clamped so
/// roundoff at the Weil boundary cannot escape the domain.
pub fn angle_su2(field: &FiniteField, psi: &AddChar, a: FieldElement) -> Result<f64> {
    let kl = classical::kloosterman(field, psi, a, MultChar::trivial())?;
    Ok(angle_from_sum(kl.re, field.q()))
}

fn angle_from_sum(kl_real: f64, q: u32) -> f64 {
    let x = kl_real / (2.0 * (q as f64).sqrt());
    x.clamp(-1.0, 1.0).acos()
}

/// The two angles (θ, θ′) with e^{iθ} + e^{iθ′} = Kl/√q and
/// e^{i(θ+θ′)} = χ(−a): the arguments of the roots of
/// t² − (Kl/√q)·t + χ(−a), ordered θ ≤ θ′. Errors if a root's modulus
/// strays from 1 by more than 1e−4, which signals a broken upstream sum.
pub fn angles_u2(
    field: &FiniteField,
    psi: &AddChar,
    a: FieldElement,
    chi: MultChar,
) -> Result<(f64, f64)> {
    let kl = classical::kloosterman(field, psi, a, chi)?;
    let s = kl / (field.q() as f64).sqrt();
    let c = chi.eval(field, field.neg(a))?;
    let disc = s * s - 4.0 * c;
    let sq = disc.sqrt();
    let r1 = (s + sq) / 2.0;
    let r2 = (s - sq) / 2.0;
    for root in [r1, r2] {
        if (root.norm() - 1.0).abs() > 1e-4 {
            return Err(Error::NonUnimodularRoot(root.norm()));
        }
    }
    let (t1, t2) = (r1.arg(), r2.arg());
    Ok(if t1 <= t2 { (t1, t2) } else { (t2, t1) })
}

/// CDF of the SU(2) Sato–Tate angle measure (2/π)sin²θ·dθ on [0,π].
pub fn sato_tate_su2_cdf(theta: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
        });
    }
    Ok((theta - theta.sin() * theta.cos()) / std::f64::consts::PI)
}

/// CDF of the radial marginal (1/π)√(4−r²)·dr on [0,2].
pub fn radial_u2_cdf(r: f64) -> f64 {
    let r = r.clamp(0.0, 2.0);
    (r * (4.0 - r * r).sqrt() / 2.0 + 2.0 * (r / 2.0).asin()) / std::f64::consts::PI
}

/// CDF of the uniform angular marginal on (−π, π].
pub fn angular_u2_cdf(theta: f64) -> f64 {
    (theta.clamp(-std::f64::consts::PI, std::f64::consts::PI) + std::f64::consts::PI)
        / std::f64::consts::TAU
}

/// Kolmogorov–Smirnov sup-distance of a sorted sample against a model CDF.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    sup
}

/// KS test of a sample against a model CDF at a fixed distance threshold.
pub fn ks_test(
    mut samples: Vec<f64>,
    cdf: impl Fn(f64) -> f64,
    threshold: f64,
    small_sample: bool,
) -> Result<KsReport> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks_distance = ks_statistic(&samples, cdf);
    Ok(KsReport {
        sample_size: samples.len(),
        ks_distance,
        threshold,
        pass: ks_distance < threshold,
        small_sample,
    })
}

/// Angles θ_ψ(a) for all nonzero a, unsorted, indexed by d_a.
pub fn su2_angles(field: &FiniteField, psi: &AddChar) -> Result<Vec<f64>> {
    let row = classical::kloosterman_row(field, psi, MultChar::trivial())?;
    Ok(row
        .iter()
        .map(|v| angle_from_sum(v.re, field.q()))
        .collect())
}

/// KS report for the angles {θ_ψ(a)} against the SU(2) Sato–Tate law.
pub fn su2_equidistribution_report(
    field: &FiniteField,
    psi: &AddChar,
    threshold: f64,
) -> Result<KsReport> {
    let samples = su2_angles(field, psi)?;
    ks_test(
        samples,
        |t| sato_tate_su2_cdf(t).unwrap_or(1.0),
        threshold,
        field.q() < SMALL_SAMPLE_Q,
    )
}

/// KS reports for the two polar marginals of {Kl_ψ(a,χ)/√q} over all (a,χ)
/// against the U(2) Sato–Tate disc law.
pub fn u2_equidistribution_report(
    field: &FiniteField,
    psi: &AddChar,
    threshold: f64,
) -> Result<U2Report> {
    let table = classical::kloosterman_table(field, psi)?;
    let sqrt_q = (field.q() as f64).sqrt();
    let mut radial = Vec::with_capacity(table.len() * table.len());
    let mut angular = Vec::with_capacity(table.len() * table.len());
    for row in &table {
        for v in row {
            let z: C64 = v / sqrt_q;
            radial.push(z.norm().min(2.0));
            angular.push(z.arg());
        }
    }
    let small = field.q() < SMALL_SAMPLE_Q;
    Ok(U2Report {
        radial: ks_test(radial, radial_u2_cdf, threshold, small)?,
        angular: ks_test(angular, angular_u2_cdf, threshold, small)?,
    })
}

/// Histogram of samples over [lo, hi) in equal bins; used by the CLI dumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
}

pub fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<HistogramBin> {
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|i| HistogramBin {
            left: lo + i as f64 * width,
            right: lo + (i + 1) as f64 * width,
            count: 0,
        })
        .collect();
    for &x in samples {
        if x < lo || x > hi {
            continue;
        }
        let mut idx = ((x - lo) / width) as usize;
        if idx >= bins {
            idx = bins - 1;
        }
        out[idx].count += 1;
    }
    out
}
