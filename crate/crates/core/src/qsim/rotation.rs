//! The rotation R_χ carrying |Γ̃_ψ^χ⟩ to |Γ_ψ^χ⟩.
//!
//! Both states decompose over the same orthogonal pair: the trivial-character
//! coordinate and the normalised rest. The decomposition coefficients are the
//! closed forms α_±^χ = (√L_χ, √M_χ)/(q−1) and β_±^χ = (√L_χ, √(qM_χ))/√((q−1)N_χ),
//! so R_χ is the plane rotation by ρ_χ = θ_χ − ω_χ with sin θ = α₊, sin ω = β₊,
//! acting as the identity on the orthogonal complement. The rotation is
//! synthesised directly from ρ_χ; no Gauss or Kloosterman sums are consulted.

use crate::characters::MultChar;
use crate::classical::{l_chi, m_chi, norm_constant};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::C64;

use super::StateVector;

/// The closed-form decomposition data behind R_χ.
#[derive(Debug, Clone, Copy)]
pub struct RotationData {
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub theta_chi: f64,
    pub omega_chi: f64,
    pub rho_chi: f64,
}

impl RotationData {
    pub fn new(field: &FiniteField, chi: MultChar) -> Self {
        let n = field.q() as f64 - 1.0;
        let q = field.q() as f64;
        let l = l_chi(field, chi) as f64;
        let m = m_chi(field, chi) as f64;
        let nc = norm_constant(field, chi) as f64;
        let alpha_plus = l.sqrt() / n;
        let alpha_minus = m.sqrt() / n;
        let beta_plus = (l / (n * nc)).sqrt();
        let beta_minus = (q * m / (n * nc)).sqrt();
        let theta_chi = alpha_plus.atan2(alpha_minus);
        let omega_chi = beta_plus.atan2(beta_minus);
        RotationData {
            alpha_plus,
            alpha_minus,
            beta_plus,
            beta_minus,
            theta_chi,
            omega_chi,
            rho_chi: theta_chi - omega_chi,
        }
    }

    /// ⟨Γ̃|Γ⟩ = α₊β₊ + α₋β₋ in closed form.
    pub fn overlap(&self) -> f64 {
        self.alpha_plus * self.beta_plus + self.alpha_minus * self.beta_minus
    }
}

/// Applies R_χ to register `t`: a rotation by ρ_χ in the plane spanned by the
/// state's own trivial-character component and its normalised complement,
/// independently on each fiber over the other registers.
pub fn rotation_r(state: &mut StateVector, t: usize, rot: &RotationData) -> Result<()> {
    let (cos_r, sin_r) = (rot.rho_chi.cos(), rot.rho_chi.sin());
    let mut failure: Option<Error> = None;
    state.for_each_fiber_mut(t, |fiber| {
        if failure.is_some() {
            return;
        }
        let total_sq: f64 = fiber.iter().map(|a| a.norm_sqr()).sum();
        if total_sq <= 1e-24 {
            return; // untouched empty fiber
        }
        let total = total_sq.sqrt();
        let n_plus = fiber[0].norm();
        let n_minus = (total_sq - fiber[0].norm_sqr()).max(0.0).sqrt();
        let new_plus = cos_r * n_plus - sin_r * n_minus;
        let new_minus = sin_r * n_plus + cos_r * n_minus;
        let eps = 1e-12 * total;
        if n_plus <= eps {
            // no trivial-character direction to rotate into
            if new_plus.abs() > 1e-8 * total {
                failure = Some(Error::DegenerateRotation(n_plus));
                return;
            }
            fiber[0] = C64::new(0.0, 0.0);
            let scale = if n_minus > 0.0 { new_minus / n_minus } else { 1.0 };
            for a in fiber[1..].iter_mut() {
                *a *= scale;
            }
            return;
        }
        if n_minus <= eps {
            // no complement direction; only a pure phase-free scaling is legal
            if new_minus.abs() > 1e-8 * total {
                failure = Some(Error::DegenerateRotation(n_minus));
                return;
            }
            fiber[0] *= new_plus / n_plus;
            return;
        }
        fiber[0] *= new_plus / n_plus;
        let scale = new_minus / n_minus;
        for a in fiber[1..].iter_mut() {
            *a *= scale;
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::AddChar;
    use crate::classical;
    use crate::field::FiniteField;
    use crate::qsim::Register;

    #[test]
    fn frozen_angles_q5_trivial() {
        // α₊ = 1/4, β₊ = 1/√76
        let f = FiniteField::new(5, 1).unwrap();
        let rot = RotationData::new(&f, MultChar::trivial());
        assert!((rot.alpha_plus - 0.25).abs() < 1e-15);
        assert!((rot.beta_plus - (1.0 / 76f64.sqrt())).abs() < 1e-15);
        assert!((rot.theta_chi - 0.25f64.asin()).abs() < 1e-12);
        assert!((rot.omega_chi - (1.0 / 76f64.sqrt()).asin()).abs() < 1e-12);
    }

    #[test]
    fn decompositions_are_unit() {
        for (p, r) in [(5u64, 1u32), (7, 1), (3, 2), (2, 3), (2, 1)] {
            let f = FiniteField::new(p, r).unwrap();
            for chi in MultChar::all(&f) {
                let rot = RotationData::new(&f, chi);
                assert!((rot.alpha_plus.powi(2) + rot.alpha_minus.powi(2) - 1.0).abs() < 1e-12);
                assert!((rot.beta_plus.powi(2) + rot.beta_minus.powi(2) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn feasibility_inequality_small_fields() {
        for (p, r) in [(5u64, 1u32), (7, 1), (3, 2), (11, 1), (2, 4)] {
            let f = FiniteField::new(p, r).unwrap();
            for chi in MultChar::all(&f) {
                let rot = RotationData::new(&f, chi);
                let lhs = rot.rho_chi.sin().abs();
                let rhs = (2.0 * rot.theta_chi).sin();
                assert!(lhs <= rhs + 1e-12, "|sin ρ| = {lhs} > sin 2θ = {rhs}");
            }
        }
    }

    #[test]
    fn rotation_carries_gamma_tilde_to_gamma() {
        for (p, r) in [(5u64, 1u32), (7, 1), (3, 2), (2, 3)] {
            let f = FiniteField::new(p, r).unwrap();
            let psi = AddChar::canonical(&f);
            for chi in MultChar::all(&f) {
                let tilde = classical::gamma_tilde_state(&f, &psi, chi).unwrap();
                let gamma = classical::gamma_state(&f, &psi, chi).unwrap();
                let mut st =
                    StateVector::from_amps(vec![Register::character(&f)], tilde).unwrap();
                let rot = RotationData::new(&f, chi);
                rotation_r(&mut st, 0, &rot).unwrap();
                let expected =
                    StateVector::from_amps(vec![Register::character(&f)], gamma).unwrap();
                let err = st.max_abs_diff(&expected).unwrap();
                assert!(err < 1e-8, "q={} m={} err={err}", f.q(), chi.exponent());
            }
        }
    }

    #[test]
    fn q2_rotation_is_identity() {
        let f = FiniteField::new(2, 1).unwrap();
        let rot = RotationData::new(&f, MultChar::trivial());
        assert!(rot.rho_chi.abs() < 1e-15);
        let mut st = StateVector::basis(vec![Register::character(&f)], &[0]).unwrap();
        rotation_r(&mut st, 0, &rot).unwrap();
        assert!((st.amp(&[0]) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
