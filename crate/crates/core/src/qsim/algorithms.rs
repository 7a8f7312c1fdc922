//! The four simulated pipelines: the Gauss-sum phase kickback, the
//! Gauss-sum vector state, the Γ̃ state, and Kloosterman-vector preparation.
//!
//! Each function executes its pipeline step by step as linear algebra on the
//! exact-dimension registers. None of them consults the classical oracles;
//! they are what the oracles get compared against.

use crate::characters::{AddChar, MultChar};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::C64;

use super::rotation::{rotation_r, RotationData};
use super::{
    Direction, Register, RegisterKind, StateVector, MAX_SIM_Q_SINGLE_REGISTER,
    MAX_SIM_Q_TWO_REGISTER,
};

fn check_sim_size(field: &FiniteField, limit: u64) -> Result<()> {
    if field.q() as u64 > limit {
        return Err(Error::SimTooLarge {
            q: field.q() as u64,
            limit,
        });
    }
    Ok(())
}

fn require_nontrivial_psi(psi: &AddChar) -> Result<()> {
    if psi.is_nontrivial() {
        Ok(())
    } else {
        Err(Error::TrivialAdditiveChar)
    }
}

/// Phase-kickback computation of a single Gauss sum: starting from
/// |χ⟩_*|1⟩_×, returns the state q^{-1/2}·G_ψ(χ)·|χ⟩_*|1⟩_×. The coefficient
/// has modulus 1. Requires non-trivial χ (the kickback identity degenerates
/// on the trivial character) and non-trivial ψ.
pub fn gauss_phase(field: &FiniteField, psi: &AddChar, chi: MultChar) -> Result<StateVector> {
    check_sim_size(field, MAX_SIM_Q_TWO_REGISTER)?;
    require_nontrivial_psi(psi)?;
    if chi.is_trivial() {
        return Err(Error::TrivialMultChar);
    }
    let m = chi.exponent() as usize;
    let mut st = StateVector::basis(
        vec![Register::character(field), Register::mult(field)],
        &[m, 0],
    )?;
    st.qft_mult(1, Direction::Forward)?; // uniform over |a⟩_×
    st.apply_w(0, 1)?; // χ(a) phases
    st.relabel_exp(1, field)?; // |a⟩_+
    st.qft_additive(1, field, psi)?; // kickback: G_ψ(χ)·χ(y)^{-1} on y ≠ 0
    st.relabel_log(1, field)?;
    st.apply_w(0, 1)?; // cancels χ(y)^{-1}
    st.qft_mult(1, Direction::Adjoint)?; // uniform → |0⟩ = |1⟩_×
    st.validate_norm(1e-10)?;
    Ok(st)
}

/// Prepares the Gauss-sum vector state (q−1)^{-1} Σ_χ G_ψ(χ)|χ⟩_* on a single
/// *-register.
pub fn gauss_vector(field: &FiniteField, psi: &AddChar) -> Result<StateVector> {
    check_sim_size(field, MAX_SIM_Q_SINGLE_REGISTER)?;
    require_nontrivial_psi(psi)?;
    let mut st = StateVector::basis(vec![Register::mult(field)], &[0])?;
    st.qft_mult(0, Direction::Forward)?; // uniform over |a⟩_×
    st.relabel_exp(0, field)?;
    st.apply_u_psi(0, field, psi)?; // ψ(a) phases
    st.relabel_log(0, field)?;
    st.qft_mult(0, Direction::Forward)?; // multiplicative spectrum
    st.reinterpret(0, RegisterKind::Char)?;
    st.validate_norm(1e-10)?;
    Ok(st)
}

/// Prepares |χ⟩_*|Γ̃_ψ^χ⟩: the Gauss-sum vector on an auxiliary register, a
/// character shift |χ′⟩ ↦ |χ^{-1}χ′⟩, then per-basis either a −1 phase (on
/// the trivial character) or the Gauss-sum kickback pipeline (elsewhere).
pub fn gamma_tilde(field: &FiniteField, psi: &AddChar, chi: MultChar) -> Result<StateVector> {
    check_sim_size(field, MAX_SIM_Q_TWO_REGISTER)?;
    require_nontrivial_psi(psi)?;
    let n = field.q() as usize - 1;
    let m = chi.exponent() as usize;

    // the |χ⟩_* control register stays a basis state throughout, so the
    // pipeline is run on the content register and the control is tensored
    // back on at the end
    let mut st = gauss_vector(field, psi)?;

    // |χ′⟩ ↦ |χ^{-1}χ′⟩
    let perm: Vec<usize> = (0..n).map(|j| (j + n - m) % n).collect();
    st.permute_register(0, &perm)?;

    // branch on χ′: −1 phase at the trivial character, kickback elsewhere.
    // The pipeline is block-diagonal over the *-register basis, so the two
    // branches can be carried out on complementary slices of the state.
    let c0 = st.amps[0];
    st.amps[0] = C64::new(0.0, 0.0);
    st.adjoin_register(Register::mult(field));
    st.qft_mult(1, Direction::Forward)?;
    st.apply_w(0, 1)?;
    st.relabel_exp(1, field)?;
    st.qft_additive(1, field, psi)?;
    st.relabel_log(1, field)?;
    st.apply_w(0, 1)?;
    st.qft_mult(1, Direction::Adjoint)?;
    st.project_register_zero(1, 1e-9)?;
    st.amps[0] = -c0;

    let st = st.tensor_basis_front(Register::character(field), m);
    st.validate_norm(1e-9)?;
    Ok(st)
}

/// Prepares |χ⟩_*|Kl_ψ^χ⟩: the Γ̃ pipeline, the rotation R_χ, and the inverse
/// Fourier transform modulo q−1. The second register ends ×-labelled with
/// amplitudes Kl_ψ(a,χ)/√N_χ at |a⟩_×.
pub fn kloosterman_vector(
    field: &FiniteField,
    psi: &AddChar,
    chi: MultChar,
) -> Result<StateVector> {
    let mut st = gamma_tilde(field, psi, chi)?;
    let rot = RotationData::new(field, chi);
    rotation_r(&mut st, 1, &rot)?;
    st.qft_mult(1, Direction::Adjoint)?;
    st.reinterpret(1, RegisterKind::Mult)?;
    st.validate_norm(1e-9)?;
    Ok(st)
}
