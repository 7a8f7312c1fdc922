//! Brute-force character sums: the ground truth.
//!
//! Every sum here is a direct enumeration over the field — O(q) terms per
//! sum, O(q²) per table row — with each term's phase computed by exact
//! integer arithmetic modulo p or q−1 before a single table lookup of a
//! precomputed root of unity. No transform tricks: the simulator and the
//! estimator are validated against these values, so they must be
//! independently computed.

use rayon::prelude::*;

use crate::characters::{AddChar, MultChar};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::{unit_roots, C64};

/// A function table on F^× (indexed by d_a) or on the character group
/// (indexed by m_χ); either way it has q−1 entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    values: Vec<C64>,
}

impl SpectrumTable {
    pub fn new(field: &FiniteField, values: Vec<C64>) -> Result<Self> {
        let expected = field.q() as usize - 1;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: values.len(),
            });
        }
        Ok(SpectrumTable { values })
    }

    pub fn from_fn(field: &FiniteField, f: impl FnMut(usize) -> C64) -> Self {
        SpectrumTable {
            values: (0..field.q() as usize - 1).map(f).collect(),
        }
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn require_nontrivial(psi: &AddChar) -> Result<()> {
    if psi.is_nontrivial() {
        Ok(())
    } else {
        Err(Error::TrivialAdditiveChar)
    }
}

/// Kl_ψ(a,χ) = Σ_{x≠0} χ(x)·ψ(x + a/x), by direct O(q) enumeration.
pub fn kloosterman(
    field: &FiniteField,
    psi: &AddChar,
    a: FieldElement,
    chi: MultChar,
) -> Result<C64> {
    require_nontrivial(psi)?;
    let d_a = field.dlog(a).map_err(|_| Error::ZeroArgument)?;
    let n = field.q() as u64 - 1;
    let roots_n = unit_roots(n as usize);
    let roots_p = unit_roots(field.p() as usize);
    let psi_idx = psi.phase_table(field);
    let m = chi.exponent() as u64;
    let mut sum = C64::new(0.0, 0.0);
    let mut chi_idx: u64 = 0;
    for t in 0..n {
        let x = field.exp_a1(t);
        let ax_inv = field.exp_a1(d_a as u64 + n - t);
        let arg = field.add(x, ax_inv);
        sum += roots_n[chi_idx as usize] * roots_p[psi_idx[arg.encoding() as usize] as usize];
        chi_idx += m;
        if chi_idx >= n {
            chi_idx -= n;
        }
    }
    Ok(sum)
}

/// Kl_ψ(a,χ) for all a, indexed by d_a.
pub fn kloosterman_row(field: &FiniteField, psi: &AddChar, chi: MultChar) -> Result<Vec<C64>> {
    require_nontrivial(psi)?;
    let n = field.q() as usize - 1;
    let roots_n = unit_roots(n);
    let roots_p = unit_roots(field.p() as usize);
    let psi_idx = psi.phase_table(field);
    let m = chi.exponent() as usize;
    let row: Vec<C64> = (0..n)
        .into_par_iter()
        .map(|d_a| {
            let mut sum = C64::new(0.0, 0.0);
            let mut chi_idx = 0usize;
            for t in 0..n {
                let x = field.exp_a1(t as u64);
                let ax_inv = field.exp_a1((d_a + n - t) as u64);
                let arg = field.add(x, ax_inv);
                sum +=
                    roots_n[chi_idx] * roots_p[psi_idx[arg.encoding() as usize] as usize];
                chi_idx += m;
                if chi_idx >= n {
                    chi_idx -= n;
                }
            }
            sum
        })
        .collect();
    Ok(row)
}

/// Kl_ψ(a,χ) for every pair: result[d_a][m_χ]. Still direct enumeration —
/// for each a the inner loop sums χ(x)ψ(x + a/x) term by term per character.
pub fn kloosterman_table(field: &FiniteField, psi: &AddChar) -> Result<Vec<Vec<C64>>> {
    require_nontrivial(psi)?;
    let n = field.q() as usize - 1;
    let roots_n = unit_roots(n);
    let roots_p = unit_roots(field.p() as usize);
    let psi_idx = psi.phase_table(field);
    let table: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|d_a| {
            // additive phases ψ(x + a/x) as a function of t = d_x
            let g: Vec<C64> = (0..n)
                .map(|t| {
                    let x = field.exp_a1(t as u64);
                    let ax_inv = field.exp_a1((d_a + n - t) as u64);
                    roots_p[psi_idx[field.add(x, ax_inv).encoding() as usize] as usize]
                })
                .collect();
            (0..n)
                .map(|m| {
                    let mut sum = C64::new(0.0, 0.0);
                    let mut idx = 0usize;
                    for &gt in &g {
                        sum += roots_n[idx] * gt;
                        idx += m;
                        if idx >= n {
                            idx -= n;
                        }
                    }
                    sum
                })
                .collect()
        })
        .collect();
    Ok(table)
}

/// Gauss sum G_ψ(χ) = Σ_{a≠0} χ(a)ψ(a).
pub fn gauss_sum(field: &FiniteField, psi: &AddChar, chi: MultChar) -> Result<C64> {
    require_nontrivial(psi)?;
    let n = field.q() as u64 - 1;
    let roots_n = unit_roots(n as usize);
    let roots_p = unit_roots(field.p() as usize);
    let psi_idx = psi.phase_table(field);
    let m = chi.exponent() as u64;
    let mut sum = C64::new(0.0, 0.0);
    let mut idx: u64 = 0;
    for d in 0..n {
        let a = field.exp_a1(d);
        sum += roots_n[idx as usize] * roots_p[psi_idx[a.encoding() as usize] as usize];
        idx += m;
        if idx >= n {
            idx -= n;
        }
    }
    Ok(sum)
}

/// All Gauss sums, indexed by m_χ.
pub fn gauss_row(field: &FiniteField, psi: &AddChar) -> Result<Vec<C64>> {
    require_nontrivial(psi)?;
    let n = field.q() as usize - 1;
    let roots_n = unit_roots(n);
    let roots_p = unit_roots(field.p() as usize);
    let psi_idx = psi.phase_table(field);
    let psi_on_powers: Vec<C64> = (0..n)
        .map(|d| roots_p[psi_idx[field.exp_a1(d as u64).encoding() as usize] as usize])
        .collect();
    Ok((0..n)
        .map(|m| {
            let mut sum = C64::new(0.0, 0.0);
            let mut idx = 0usize;
            for &v in &psi_on_powers {
                sum += roots_n[idx] * v;
                idx += m;
                if idx >= n {
                    idx -= n;
                }
            }
            sum
        })
        .collect())
}

/// Salié's closed form G_ψ(χ₂)·Σ_{y² = 4a} ψ(y); equals Kl_ψ(a,χ₂).
pub fn salie_sum(field: &FiniteField, psi: &AddChar, a: FieldElement) -> Result<C64> {
    require_nontrivial(psi)?;
    if field.q() % 2 == 0 {
        return Err(Error::NoQuadraticChar);
    }
    field.dlog(a).map_err(|_| Error::ZeroArgument)?;
    let chi2 = MultChar::quadratic(field)?;
    let gauss = gauss_sum(field, psi, chi2)?;
    let four = field.element(4 % field.p()).unwrap();
    let four_a = field.mul(four, a);
    let d = field.dlog(four_a).expect("4a nonzero in odd characteristic");
    if d % 2 != 0 {
        return Ok(C64::new(0.0, 0.0)); // 4a is a non-square: empty sum
    }
    let n = field.q() as u64 - 1;
    let y = field.exp_a1(d as u64 / 2);
    let y_neg = field.exp_a1(d as u64 / 2 + n / 2);
    Ok(gauss * (psi.eval(field, y) + psi.eval(field, y_neg)))
}

/// Multiplicative Fourier transform: Mf(χ) = Σ_a χ(a)f(a), indexed by m_χ.
pub fn mult_fourier(field: &FiniteField, f: &SpectrumTable) -> Result<SpectrumTable> {
    let n = field.q() as usize - 1;
    if f.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: f.len(),
        });
    }
    let roots = unit_roots(n);
    let values = (0..n)
        .map(|m| {
            let mut sum = C64::new(0.0, 0.0);
            let mut idx = 0usize;
            for &v in f.values() {
                sum += roots[idx] * v;
                idx += m;
                if idx >= n {
                    idx -= n;
                }
            }
            sum
        })
        .collect();
    SpectrumTable::new(field, values)
}

/// Inverse transform: f(a) = (q−1)⁻¹ Σ_χ χ(a)⁻¹ φ(χ), indexed by d_a.
pub fn mult_fourier_inverse(field: &FiniteField, phi: &SpectrumTable) -> Result<SpectrumTable> {
    let n = field.q() as usize - 1;
    if phi.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: phi.len(),
        });
    }
    let roots = unit_roots(n);
    let scale = 1.0 / n as f64;
    let values = (0..n)
        .map(|d| {
            let mut sum = C64::new(0.0, 0.0);
            let mut idx = 0usize;
            for &v in phi.values() {
                // χ(a)^{-1} = ω^{-md}
                sum += roots[(n - idx) % n] * v;
                idx += d;
                if idx >= n {
                    idx -= n;
                }
            }
            sum * scale
        })
        .collect();
    SpectrumTable::new(field, values)
}

/// Multiplicative convolution (f∗g)(a) = Σ_{xy=a} f(x)g(y), indexed by d_a.
pub fn convolve(field: &FiniteField, f: &SpectrumTable, g: &SpectrumTable) -> Result<SpectrumTable> {
    let n = field.q() as usize - 1;
    if f.len() != n || g.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: f.len().min(g.len()),
        });
    }
    let values = (0..n)
        .map(|e| {
            (0..n)
                .map(|d| f.values()[d] * g.values()[(e + n - d) % n])
                .sum()
        })
        .collect();
    SpectrumTable::new(field, values)
}

/// Γ_ψ^χ(χ′) = G_ψ(χχ′)·G_ψ(χ′), the Fourier transform of a ↦ Kl_ψ(a,χ).
pub fn gamma_fn(
    field: &FiniteField,
    psi: &AddChar,
    chi: MultChar,
    chi_prime: MultChar,
) -> Result<C64> {
    require_nontrivial(psi)?;
    let g1 = gauss_sum(field, psi, chi.mul(chi_prime, field))?;
    let g2 = gauss_sum(field, psi, chi_prime)?;
    Ok(g1 * g2)
}

/// L_χ = |G_ψ(χ)|²: q for non-trivial χ, 1 for the trivial character.
pub fn l_chi(field: &FiniteField, chi: MultChar) -> u64 {
    if chi.is_trivial() {
        1
    } else {
        field.q() as u64
    }
}

/// N_χ = Σ_a |Kl_ψ(a,χ)|² in closed form: q²−q−1 for trivial χ, q²−2q else.
pub fn norm_constant(field: &FiniteField, chi: MultChar) -> u64 {
    let q = field.q() as u64;
    if chi.is_trivial() {
        q * q - q - 1
    } else {
        q * q - 2 * q
    }
}

/// M_χ = q⁻¹·Σ_{χ′≠𝟙} |Γ_ψ^χ(χ′)|²: q²−2q for trivial χ, q²−3q+1 else.
pub fn m_chi(field: &FiniteField, chi: MultChar) -> u64 {
    let q = field.q() as u64;
    if chi.is_trivial() {
        q * q - 2 * q
    } else {
        q * q - 3 * q + 1
    }
}

/// Unit vector with amplitudes Kl_ψ(a,χ)/√N_χ, indexed by d_a.
pub fn kl_state(field: &FiniteField, psi: &AddChar, chi: MultChar) -> Result<Vec<C64>> {
    let row = kloosterman_row(field, psi, chi)?;
    let scale = 1.0 / (norm_constant(field, chi) as f64).sqrt();
    Ok(row.into_iter().map(|v| v * scale).collect())
}

/// Unit vector with amplitudes G_ψ(χ)/(q−1), indexed by m_χ.
pub fn gauss_state(field: &FiniteField, psi: &AddChar) -> Result<Vec<C64>> {
    let row = gauss_row(field, psi)?;
    let scale = 1.0 / (field.q() as f64 - 1.0);
    Ok(row.into_iter().map(|v| v * scale).collect())
}

/// Unit vector with amplitudes Γ_ψ^χ(χ′)/√((q−1)N_χ), indexed by m_χ′.
pub fn gamma_state(field: &FiniteField, psi: &AddChar, chi: MultChar) -> Result<Vec<C64>> {
    require_nontrivial(psi)?;
    let n = field.q() as usize - 1;
    let scale = 1.0 / ((n as f64) * norm_constant(field, chi) as f64).sqrt();
    (0..n)
        .map(|m| {
            gamma_fn(field, psi, chi, MultChar::new(field, m as u64)).map(|v| v * scale)
        })
        .collect()
}

/// Unit vector for the easily-prepared approximation: amplitude Γ(𝟙)/(q−1)
/// on the trivial character and Γ(χ′)/((q−1)√q) elsewhere.
pub fn gamma_tilde_state(field: &FiniteField, psi: &AddChar, chi: MultChar) -> Result<Vec<C64>> {
    require_nontrivial(psi)?;
    let n = field.q() as usize - 1;
    let inv_n = 1.0 / n as f64;
    let inv_nsq = inv_n / (field.q() as f64).sqrt();
    (0..n)
        .map(|m| {
            let scale = if m == 0 { inv_n } else { inv_nsq };
            gamma_fn(field, psi, chi, MultChar::new(field, m as u64)).map(|v| v * scale)
        })
        .collect()
}

/// One Kloosterman datum with its defining invariants checked.
#[derive(Debug, Clone)]
pub struct SumRecord {
    pub a: FieldElement,
    pub chi: MultChar,
    pub value: C64,
    pub q: u32,
}

impl SumRecord {
    /// Computes Kl_ψ(a,χ) and validates the Weil bound and conjugate
    /// symmetry (both within 1e−9) before returning.
    pub fn new(field: &FiniteField, psi: &AddChar, a: FieldElement, chi: MultChar) -> Result<Self> {
        let value = kloosterman(field, psi, a, chi)?;
        let record = SumRecord {
            a,
            chi,
            value,
            q: field.q(),
        };
        record.validate(field)?;
        Ok(record)
    }

    pub fn validate(&self, field: &FiniteField) -> Result<()> {
        let bound = 2.0 * (self.q as f64).sqrt();
        if self.value.norm() > bound + 1e-9 {
            return Err(Error::WeilBoundViolated {
                abs: self.value.norm(),
                bound,
            });
        }
        let chi_neg_a = self.chi.eval(field, field.neg(self.a))?;
        let dev = (self.value - chi_neg_a * self.value.conj()).norm();
        if dev > 1e-9 {
            return Err(Error::ConjugateSymmetryViolated(dev));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64, r: u32) -> FiniteField {
        FiniteField::new(p, r).unwrap()
    }

    fn canonical(field: &FiniteField) -> AddChar {
        AddChar::canonical(field)
    }

    fn random_table(field: &FiniteField, seed: u64) -> SpectrumTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SpectrumTable::from_fn(field, |_| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn kloosterman_frozen_values() {
        // F_2: single term x = y = 1, ψ(0) = 1
        let f2 = f(2, 1);
        let v = kloosterman(&f2, &canonical(&f2), f2.one(), MultChar::trivial()).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);

        // F_5: direct 4-term summation gives 2 + 2cos(4π/5)
        let f5 = f(5, 1);
        let v = kloosterman(&f5, &canonical(&f5), f5.one(), MultChar::trivial()).unwrap();
        let expected = 2.0 + 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos();
        assert!((v - C64::new(expected, 0.0)).norm() < 1e-12);
        assert!((expected - 0.381966).abs() < 1e-6);

        // F_3: ψ(2) + ψ(1) = e^{4πi/3} + e^{2πi/3} = −1
        let f3 = f(3, 1);
        let v = kloosterman(&f3, &canonical(&f3), f3.one(), MultChar::trivial()).unwrap();
        assert!((v - C64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kloosterman_rejects_bad_inputs() {
        let f5 = f(5, 1);
        let psi = canonical(&f5);
        assert_eq!(
            kloosterman(&f5, &psi, f5.zero(), MultChar::trivial()),
            Err(Error::ZeroArgument)
        );
        assert_eq!(
            kloosterman(&f5, &AddChar::trivial(&f5), f5.one(), MultChar::trivial()),
            Err(Error::TrivialAdditiveChar)
        );
    }

    #[test]
    fn gauss_sum_values() {
        for (p, r) in [(2u64, 1u32), (5, 1), (7, 1), (3, 2), (2, 3)] {
            let fd = f(p, r);
            let psi = canonical(&fd);
            let g = gauss_sum(&fd, &psi, MultChar::trivial()).unwrap();
            assert!((g - C64::new(-1.0, 0.0)).norm() < 1e-10, "G(1) = -1");
        }
        let f5 = f(5, 1);
        let g = gauss_sum(&f5, &canonical(&f5), MultChar::quadratic(&f5).unwrap()).unwrap();
        assert!((g - C64::new(5f64.sqrt(), 0.0)).norm() < 1e-10);

        let f7 = f(7, 1);
        for m in 1..6 {
            let g = gauss_sum(&f7, &canonical(&f7), MultChar::new(&f7, m)).unwrap();
            assert!((g.norm() - 7f64.sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn salie_matches_kloosterman() {
        let f5 = f(5, 1);
        let psi = canonical(&f5);
        let chi2 = MultChar::quadratic(&f5).unwrap();

        // a = 1: 4a = 4 = (±2)², so √5·(ψ(2) + ψ(3))
        let v = salie_sum(&f5, &psi, f5.one()).unwrap();
        let expected = C64::new(5f64.sqrt(), 0.0)
            * (psi.eval(&f5, f5.element(2).unwrap()) + psi.eval(&f5, f5.element(3).unwrap()));
        assert!((v - expected).norm() < 1e-12);
        let kl = kloosterman(&f5, &psi, f5.one(), chi2).unwrap();
        assert!((v - kl).norm() < 1e-9);

        // a = 2: 4a = 3 is a non-square mod 5, empty sum
        let v = salie_sum(&f5, &psi, f5.element(2).unwrap()).unwrap();
        assert!(v.norm() < 1e-15);

        // F_3, a = 1
        let f3 = f(3, 1);
        let psi3 = canonical(&f3);
        let v = salie_sum(&f3, &psi3, f3.one()).unwrap();
        let kl = kloosterman(&f3, &psi3, f3.one(), MultChar::quadratic(&f3).unwrap()).unwrap();
        assert!((v - kl).norm() < 1e-9);
    }

    #[test]
    fn salie_rejects_even_q() {
        let f4 = f(2, 2);
        assert_eq!(
            salie_sum(&f4, &canonical(&f4), f4.one()),
            Err(Error::NoQuadraticChar)
        );
    }

    #[test]
    fn fourier_of_point_mass_is_flat() {
        let f7 = f(7, 1);
        let delta = SpectrumTable::from_fn(&f7, |d| {
            if d == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let phi = mult_fourier(&f7, &delta).unwrap();
        for &v in phi.values() {
            assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn fourier_of_psi_is_gauss() {
        for (p, r) in [(5u64, 1u32), (3, 2), (2, 3)] {
            let fd = f(p, r);
            let psi = canonical(&fd);
            let table = SpectrumTable::from_fn(&fd, |d| psi.eval(&fd, fd.exp_a1(d as u64)));
            let phi = mult_fourier(&fd, &table).unwrap();
            for (m, &v) in phi.values().iter().enumerate() {
                let g = gauss_sum(&fd, &psi, MultChar::new(&fd, m as u64)).unwrap();
                assert!((v - g).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn fourier_roundtrip() {
        let f9 = f(3, 2);
        let table = random_table(&f9, 7);
        let back = mult_fourier_inverse(&f9, &mult_fourier(&f9, &table).unwrap()).unwrap();
        for (x, y) in table.values().iter().zip(back.values()) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn convolution_identity_and_theorem() {
        let f7 = f(7, 1);
        let table = random_table(&f7, 11);
        let delta = SpectrumTable::from_fn(&f7, |d| {
            if d == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let conv = convolve(&f7, &table, &delta).unwrap();
        for (x, y) in table.values().iter().zip(conv.values()) {
            assert!((x - y).norm() < 1e-12);
        }

        let g = random_table(&f7, 13);
        let lhs = mult_fourier(&f7, &convolve(&f7, &table, &g).unwrap()).unwrap();
        let mf = mult_fourier(&f7, &table).unwrap();
        let mg = mult_fourier(&f7, &g).unwrap();
        for ((l, x), y) in lhs.values().iter().zip(mf.values()).zip(mg.values()) {
            assert!((l - x * y).norm() < 1e-9);
        }
    }

    #[test]
    fn kloosterman_is_a_convolution() {
        // (ψ|_{F^×}) ∗ (χψ|_{F^×}) at a equals Kl_ψ(a,χ)
        let f5 = f(5, 1);
        let psi = canonical(&f5);
        for m in 0..4u64 {
            let chi = MultChar::new(&f5, m);
            let psi_table = SpectrumTable::from_fn(&f5, |d| psi.eval(&f5, f5.exp_a1(d as u64)));
            let chi_psi = SpectrumTable::from_fn(&f5, |d| {
                let a = f5.exp_a1(d as u64);
                chi.eval(&f5, a).unwrap() * psi.eval(&f5, a)
            });
            let conv = convolve(&f5, &chi_psi, &psi_table).unwrap();
            for d in 0..4usize {
                let kl = kloosterman(&f5, &psi, f5.exp_a1(d as u64), chi).unwrap();
                assert!((conv.values()[d] - kl).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn gamma_frozen_values() {
        let f5 = f(5, 1);
        let psi = canonical(&f5);
        let one = MultChar::trivial();
        let g = gamma_fn(&f5, &psi, one, one).unwrap();
        assert!((g - C64::new(1.0, 0.0)).norm() < 1e-10, "G(1)^2 = 1");
        for m in 1..4 {
            let g = gamma_fn(&f5, &psi, one, MultChar::new(&f5, m)).unwrap();
            assert!((g.norm() - 5.0).abs() < 1e-9, "|Γ| = q for χ = 1, χ' ≠ 1");
        }
    }

    #[test]
    fn gamma_is_fourier_of_kloosterman() {
        // all 4×4 (χ, χ′) pairs on F_5 against the brute-force transform
        let f5 = f(5, 1);
        let psi = canonical(&f5);
        for m in 0..4u64 {
            let chi = MultChar::new(&f5, m);
            let row = SpectrumTable::new(&f5, kloosterman_row(&f5, &psi, chi).unwrap()).unwrap();
            let phi = mult_fourier(&f5, &row).unwrap();
            for m_prime in 0..4u64 {
                let gamma = gamma_fn(&f5, &psi, chi, MultChar::new(&f5, m_prime)).unwrap();
                assert!((phi.values()[m_prime as usize] - gamma).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn norm_constants() {
        let f5 = f(5, 1);
        assert_eq!(norm_constant(&f5, MultChar::trivial()), 19);
        assert_eq!(norm_constant(&f5, MultChar::new(&f5, 1)), 15);
        assert_eq!(l_chi(&f5, MultChar::trivial()), 1);
        assert_eq!(l_chi(&f5, MultChar::new(&f5, 2)), 5);
        assert_eq!(m_chi(&f5, MultChar::trivial()), 15);
        assert_eq!(m_chi(&f5, MultChar::new(&f5, 3)), 11);

        // brute force: Σ_a |Kl(a,1)|² = 19 over the 4 nonzero a
        let psi = canonical(&f5);
        let brute: f64 = kloosterman_row(&f5, &psi, MultChar::trivial())
            .unwrap()
            .iter()
            .map(|v| v.norm_sqr())
            .sum();
        assert!((brute - 19.0).abs() < 1e-9);
    }

    #[test]
    fn state_assemblies_are_unit_vectors() {
        let f9 = f(3, 2);
        let psi = canonical(&f9);
        for m in [0u64, 1, 5] {
            let chi = MultChar::new(&f9, m);
            for state in [
                kl_state(&f9, &psi, chi).unwrap(),
                gamma_state(&f9, &psi, chi).unwrap(),
                gamma_tilde_state(&f9, &psi, chi).unwrap(),
            ] {
                let norm: f64 = state.iter().map(|v| v.norm_sqr()).sum();
                // |Γ̃⟩ is normalised too: L_χ + M_χ = (q−1)²
                assert!((norm - 1.0).abs() < 1e-10, "norm² = {norm}");
            }
        }
        let gs = gauss_state(&f9, &psi).unwrap();
        let norm: f64 = gs.iter().map(|v| v.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-10);
        assert!((gs[0] - C64::new(-1.0 / 8.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sum_record_validates() {
        let f7 = f(7, 1);
        let psi = canonical(&f7);
        for m in 0..6u64 {
            for d in 0..6u64 {
                let rec =
                    SumRecord::new(&f7, &psi, f7.exp_a1(d), MultChar::new(&f7, m)).unwrap();
                assert!(rec.value.norm() <= 2.0 * 7f64.sqrt() + 1e-9);
            }
        }
        let mut rec = SumRecord::new(&f7, &psi, f7.one(), MultChar::trivial()).unwrap();
        rec.value = C64::new(100.0, 0.0);
        assert!(matches!(
            rec.validate(&f7),
            Err(Error::WeilBoundViolated { .. })
        ));
    }

    #[test]
    fn table_agrees_with_single_sums() {
        let f9 = f(3, 2);
        let psi = canonical(&f9);
        let table = kloosterman_table(&f9, &psi).unwrap();
        for d in 0..8usize {
            for m in 0..8u64 {
                let single =
                    kloosterman(&f9, &psi, f9.exp_a1(d as u64), MultChar::new(&f9, m)).unwrap();
                assert!((table[d][m as usize] - single).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn trivial_twist_is_real() {
        let f13 = f(13, 1);
        let psi = canonical(&f13);
        for d in 0..12u64 {
            let v = kloosterman(&f13, &psi, f13.exp_a1(d), MultChar::trivial()).unwrap();
            assert!(v.im.abs() < 1e-9);
        }
    }
}
