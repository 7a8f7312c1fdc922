//! Exact-dimension state-vector simulation.
//!
//! Registers have the exact dimensions of the objects they hold — q−1 for
//! the ×-encoding of F^× and for the character group, q for the additive
//! group, 2 for a qubit — instead of padded qubit registers. Every operator
//! is applied as a dense linear map on the relevant register fiber, so the
//! "extension to the orthogonal complement" question never arises: there is
//! no complement.

mod algorithms;
mod rotation;

pub use algorithms::{gamma_tilde, gauss_phase, gauss_vector, kloosterman_vector};
pub use rotation::{rotation_r, RotationData};

use crate::characters::AddChar;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::{unit_roots, C64};

/// Two-register pipelines build O(q²)-amplitude states.
pub const MAX_SIM_Q_TWO_REGISTER: u64 = 256;
/// Single-register pipelines stay O(q) amplitudes with O(q²) operators.
pub const MAX_SIM_Q_SINGLE_REGISTER: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegisterKind {
    /// F^× in the ×-encoding: basis |a⟩_× labelled by d_a; dimension q−1.
    Mult,
    /// The additive group: basis |x⟩_+ labelled by the element encoding; dimension q.
    Add,
    /// The character group: basis |χ⟩_* labelled by m_χ; dimension q−1.
    Char,
    /// A single qubit.
    Qubit,
}

impl RegisterKind {
    pub fn name(self) -> &'static str {
        match self {
            RegisterKind::Mult => "mult",
            RegisterKind::Add => "add",
            RegisterKind::Char => "char",
            RegisterKind::Qubit => "qubit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Register {
    pub kind: RegisterKind,
    pub dim: usize,
}

impl Register {
    pub fn mult(field: &FiniteField) -> Self {
        Register {
            kind: RegisterKind::Mult,
            dim: field.q() as usize - 1,
        }
    }

    pub fn add(field: &FiniteField) -> Self {
        Register {
            kind: RegisterKind::Add,
            dim: field.q() as usize,
        }
    }

    pub fn character(field: &FiniteField) -> Self {
        Register {
            kind: RegisterKind::Char,
            dim: field.q() as usize - 1,
        }
    }

    pub fn qubit() -> Self {
        Register {
            kind: RegisterKind::Qubit,
            dim: 2,
        }
    }
}

/// Fourier transform direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Adjoint,
}

/// A labelled tensor product of registers with a dense amplitude vector.
/// The last register varies fastest.
#[derive(Debug, Clone)]
pub struct StateVector {
    regs: Vec<Register>,
    amps: Vec<C64>,
}

impl StateVector {
    /// Basis state |i_0⟩|i_1⟩…
    pub fn basis(regs: Vec<Register>, indices: &[usize]) -> Result<Self> {
        assert_eq!(regs.len(), indices.len());
        let total: usize = regs.iter().map(|r| r.dim).product();
        let mut amps = vec![C64::new(0.0, 0.0); total];
        let mut idx = 0usize;
        for (reg, &i) in regs.iter().zip(indices) {
            if i >= reg.dim {
                return Err(Error::NoSuchRegister(i));
            }
            idx = idx * reg.dim + i;
        }
        amps[idx] = C64::new(1.0, 0.0);
        Ok(StateVector { regs, amps })
    }

    /// State from explicit amplitudes; must be unit norm within 1e−10.
    pub fn from_amps(regs: Vec<Register>, amps: Vec<C64>) -> Result<Self> {
        let total: usize = regs.iter().map(|r| r.dim).product();
        if amps.len() != total {
            return Err(Error::LengthMismatch {
                expected: total,
                got: amps.len(),
            });
        }
        let st = StateVector { regs, amps };
        st.validate_norm(1e-10)?;
        Ok(st)
    }

    pub fn registers(&self) -> &[Register] {
        &self.regs
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn validate_norm(&self, tol: f64) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    /// Amplitude at a joint basis index.
    pub fn amp(&self, indices: &[usize]) -> C64 {
        assert_eq!(indices.len(), self.regs.len());
        let mut idx = 0usize;
        for (reg, &i) in self.regs.iter().zip(indices) {
            assert!(i < reg.dim);
            idx = idx * reg.dim + i;
        }
        self.amps[idx]
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                got: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                got: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_register(&self, t: usize) -> Result<()> {
        if t < self.regs.len() {
            Ok(())
        } else {
            Err(Error::NoSuchRegister(t))
        }
    }

    fn expect_kind(&self, t: usize, allowed: &[RegisterKind]) -> Result<()> {
        self.check_register(t)?;
        if allowed.contains(&self.regs[t].kind) {
            Ok(())
        } else {
            Err(Error::WrongRegisterKind {
                index: t,
                expected: allowed[0].name(),
                found: self.regs[t].kind.name(),
            })
        }
    }

    fn fiber_shape(&self, t: usize) -> (usize, usize, usize) {
        let before: usize = self.regs[..t].iter().map(|r| r.dim).product();
        let dim = self.regs[t].dim;
        let after: usize = self.regs[t + 1..].iter().map(|r| r.dim).product();
        (before, dim, after)
    }

    /// Applies a linear map fiber-by-fiber on register t. The map writes the
    /// output fiber (possibly of a different length) from the input fiber.
    fn apply_fiberwise(
        &mut self,
        t: usize,
        new_dim: usize,
        mut map: impl FnMut(&[C64], &mut [C64]),
    ) {
        let (before, dim, after) = self.fiber_shape(t);
        let mut out = vec![C64::new(0.0, 0.0); before * new_dim * after];
        let mut fiber_in = vec![C64::new(0.0, 0.0); dim];
        let mut fiber_out = vec![C64::new(0.0, 0.0); new_dim];
        for b in 0..before {
            for a in 0..after {
                let base_in = b * dim * after + a;
                for j in 0..dim {
                    fiber_in[j] = self.amps[base_in + j * after];
                }
                fiber_out.fill(C64::new(0.0, 0.0));
                map(&fiber_in, &mut fiber_out);
                let base_out = b * new_dim * after + a;
                for j in 0..new_dim {
                    out[base_out + j * after] = fiber_out[j];
                }
            }
        }
        self.amps = out;
        self.regs[t].dim = new_dim;
    }

    /// Gathers each fiber of register t into a contiguous buffer, lets `f`
    /// mutate it in place, and scatters it back.
    pub(crate) fn for_each_fiber_mut(
        &mut self,
        t: usize,
        mut f: impl FnMut(&mut [C64]),
    ) -> Result<()> {
        self.check_register(t)?;
        let (before, dim, after) = self.fiber_shape(t);
        let mut fiber = vec![C64::new(0.0, 0.0); dim];
        for b in 0..before {
            for a in 0..after {
                let base = b * dim * after + a;
                for j in 0..dim {
                    fiber[j] = self.amps[base + j * after];
                }
                f(&mut fiber);
                for j in 0..dim {
                    self.amps[base + j * after] = fiber[j];
                }
            }
        }
        Ok(())
    }

    /// Multiplies the amplitude of each joint basis state by phase(indices).
    fn apply_diagonal(&mut self, mut phase: impl FnMut(&[usize]) -> C64) {
        let dims: Vec<usize> = self.regs.iter().map(|r| r.dim).collect();
        let mut idx = vec![0usize; dims.len()];
        for amp in self.amps.iter_mut() {
            *amp *= phase(&idx);
            for k in (0..dims.len()).rev() {
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Quantum Fourier transform modulo the register dimension (q−1), applied
    /// to a ×- or *-register: F|m⟩ = n^{-1/2} Σ_d exp(2πi·dm/n)|d⟩.
    pub fn qft_mult(&mut self, t: usize, direction: Direction) -> Result<()> {
        self.expect_kind(t, &[RegisterKind::Mult, RegisterKind::Char])?;
        let n = self.regs[t].dim;
        let roots = unit_roots(n);
        let scale = 1.0 / (n as f64).sqrt();
        self.apply_fiberwise(t, n, |fin, fout| {
            for (d, out) in fout.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                let mut idx = 0usize;
                for &x in fin {
                    let w = match direction {
                        Direction::Forward => roots[idx],
                        Direction::Adjoint => roots[(n - idx) % n],
                    };
                    acc += w * x;
                    idx += d;
                    if idx >= n {
                        idx -= n;
                    }
                }
                *out = acc * scale;
            }
        });
        Ok(())
    }

    /// U_ψ: the diagonal phase ψ(x) on an additive register.
    pub fn apply_u_psi(&mut self, t: usize, field: &FiniteField, psi: &AddChar) -> Result<()> {
        self.expect_kind(t, &[RegisterKind::Add])?;
        let roots_p = unit_roots(field.p() as usize);
        let table: Vec<C64> = psi
            .phase_table(field)
            .iter()
            .map(|&k| roots_p[k as usize])
            .collect();
        self.apply_fiberwise(t, table.len(), |fin, fout| {
            for (j, out) in fout.iter_mut().enumerate() {
                *out = fin[j] * table[j];
            }
        });
        Ok(())
    }

    /// The additive Fourier transform F_{F,ψ}: |x⟩_+ ↦ q^{-1/2} Σ_y ψ(xy)|y⟩_+.
    /// Requires non-trivial ψ (the matrix is not unitary otherwise).
    pub fn qft_additive(&mut self, t: usize, field: &FiniteField, psi: &AddChar) -> Result<()> {
        self.expect_kind(t, &[RegisterKind::Add])?;
        if !psi.is_nontrivial() {
            return Err(Error::TrivialAdditiveChar);
        }
        let q = field.q() as usize;
        let n = q - 1;
        let roots_p = unit_roots(field.p() as usize);
        let psi_idx = psi.phase_table(field);
        // ψ(xy) via discrete logs: encoding of a₁^{d_x + d_y} for x, y ≠ 0
        let dlog_of: Vec<Option<u32>> = (0..q as u32)
            .map(|enc| field.dlog(field.element(enc).unwrap()).ok())
            .collect();
        let scale = 1.0 / (q as f64).sqrt();
        self.apply_fiberwise(t, q, |fin, fout| {
            // x = 0 row: ψ(0·y) = 1
            let total: C64 = fin.iter().sum();
            fout[0] = total * scale;
            for (x_enc, out) in fout.iter_mut().enumerate().skip(1) {
                let dx = dlog_of[x_enc].expect("nonzero encoding") as usize;
                let mut acc = fin[0]; // y = 0 term, ψ(0) = 1
                for (y_enc, &amp) in fin.iter().enumerate().skip(1) {
                    let dy = dlog_of[y_enc].expect("nonzero encoding") as usize;
                    let prod_enc = field.exp_a1((dx + dy) as u64 % n as u64).encoding();
                    acc += roots_p[psi_idx[prod_enc as usize] as usize] * amp;
                }
                *out = acc * scale;
            }
        });
        Ok(())
    }

    /// W: the diagonal phase χ(a) = exp(2πi·m·d/(q−1)) on a *-register ⊗ ×-register pair.
    pub fn apply_w(&mut self, char_reg: usize, mult_reg: usize) -> Result<()> {
        self.expect_kind(char_reg, &[RegisterKind::Char])?;
        self.expect_kind(mult_reg, &[RegisterKind::Mult])?;
        let n = self.regs[char_reg].dim;
        if self.regs[mult_reg].dim != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: self.regs[mult_reg].dim,
            });
        }
        let roots = unit_roots(n);
        self.apply_diagonal(|idx| {
            let m = idx[char_reg];
            let d = idx[mult_reg];
            roots[(m * d) % n]
        });
        Ok(())
    }

    /// exp_{a₁}: relabels |d⟩ on a ×-register as |a₁^d⟩_+ on an additive
    /// register (dimension q−1 → q, amplitude 0 on |0⟩_+).
    pub fn relabel_exp(&mut self, t: usize, field: &FiniteField) -> Result<()> {
        self.expect_kind(t, &[RegisterKind::Mult])?;
        let n = field.q() as usize - 1;
        if self.regs[t].dim != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: self.regs[t].dim,
            });
        }
        let targets: Vec<usize> = (0..n)
            .map(|d| field.exp_a1(d as u64).encoding() as usize)
            .collect();
        self.apply_fiberwise(t, n + 1, |fin, fout| {
            for (d, &amp) in fin.iter().enumerate() {
                fout[targets[d]] = amp;
            }
        });
        self.regs[t].kind = RegisterKind::Add;
        Ok(())
    }

    /// log_{a₁}: relabels |a⟩_+ as |d_a⟩ on a ×-register. The amplitude on
    /// |0⟩_+ must vanish within 1e−10; the discrete log of zero is undefined.
    pub fn relabel_log(&mut self, t: usize, field: &FiniteField) -> Result<()> {
        self.expect_kind(t, &[RegisterKind::Add])?;
        let q = field.q() as usize;
        if self.regs[t].dim != q {
            return Err(Error::LengthMismatch {
                expected: q,
                got: self.regs[t].dim,
            });
        }
        let (before, dim, after) = self.fiber_shape(t);
        let mut zero_mass = 0.0f64;
        for b in 0..before {
            for a in 0..after {
                zero_mass += self.amps[b * dim * after + a].norm_sqr();
            }
        }
        let zero_amp = zero_mass.sqrt();
        if zero_amp > 1e-10 {
            return Err(Error::AmplitudeOnZero(zero_amp));
        }
        let dlogs: Vec<usize> = (1..q)
            .map(|enc| field.dlog(field.element(enc as u32).unwrap()).unwrap() as usize)
            .collect();
        self.apply_fiberwise(t, q - 1, |fin, fout| {
            for (enc, &amp) in fin.iter().enumerate().skip(1) {
                fout[dlogs[enc - 1]] = amp;
            }
        });
        self.regs[t].kind = RegisterKind::Mult;
        Ok(())
    }

    /// Reinterprets a (q−1)-dimensional register between the ×- and
    /// *-labelings; the Fourier transform modulo q−1 moves a function to its
    /// spectrum, so the basis labels change meaning while amplitudes stay put.
    pub fn reinterpret(&mut self, t: usize, kind: RegisterKind) -> Result<()> {
        self.expect_kind(t, &[RegisterKind::Mult, RegisterKind::Char])?;
        if !matches!(kind, RegisterKind::Mult | RegisterKind::Char) {
            return Err(Error::WrongRegisterKind {
                index: t,
                expected: "mult or char",
                found: kind.name(),
            });
        }
        self.regs[t].kind = kind;
        Ok(())
    }

    /// Tensors a fresh |0⟩ register at the end.
    pub fn adjoin_register(&mut self, reg: Register) {
        let old = std::mem::take(&mut self.amps);
        let mut amps = vec![C64::new(0.0, 0.0); old.len() * reg.dim];
        for (i, amp) in old.into_iter().enumerate() {
            amps[i * reg.dim] = amp;
        }
        self.amps = amps;
        self.regs.push(reg);
    }

    /// Drops a register that has been returned to |0⟩, erroring if more than
    /// `tol` of the state (in norm) lives outside that slice.
    pub fn project_register_zero(&mut self, t: usize, tol: f64) -> Result<()> {
        self.check_register(t)?;
        let (before, dim, after) = self.fiber_shape(t);
        let mut out = vec![C64::new(0.0, 0.0); before * after];
        let mut residual = 0.0f64;
        for b in 0..before {
            for a in 0..after {
                let base = b * dim * after + a;
                out[b * after + a] = self.amps[base];
                for j in 1..dim {
                    residual += self.amps[base + j * after].norm_sqr();
                }
            }
        }
        if residual.sqrt() > tol {
            return Err(Error::ResidualLeakage(residual.sqrt()));
        }
        self.amps = out;
        self.regs.remove(t);
        Ok(())
    }

    /// Tensors a basis state |i⟩ in front: |i⟩ ⊗ self.
    pub fn tensor_basis_front(self, reg: Register, index: usize) -> StateVector {
        assert!(index < reg.dim);
        let block = self.amps.len();
        let mut amps = vec![C64::new(0.0, 0.0); block * reg.dim];
        amps[index * block..(index + 1) * block].copy_from_slice(&self.amps);
        let mut regs = vec![reg];
        regs.extend(self.regs);
        StateVector { regs, amps }
    }

    /// Extracts register t's amplitudes assuming every other register is in
    /// the given joint basis state; errors if more than 1e−9 of the state
    /// lives elsewhere.
    pub fn extract_register(&self, t: usize, others: &[usize]) -> Result<Vec<C64>> {
        self.check_register(t)?;
        assert_eq!(others.len(), self.regs.len() - 1);
        let mut indices: Vec<usize> = Vec::with_capacity(self.regs.len());
        let mut oi = others.iter();
        for k in 0..self.regs.len() {
            if k == t {
                indices.push(0);
            } else {
                indices.push(*oi.next().unwrap());
            }
        }
        let dim = self.regs[t].dim;
        let mut content = Vec::with_capacity(dim);
        for j in 0..dim {
            indices[t] = j;
            content.push(self.amp(&indices));
        }
        let inside: f64 = content.iter().map(|a| a.norm_sqr()).sum();
        let total: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        let residual = (total - inside).max(0.0).sqrt();
        if residual > 1e-9 {
            return Err(Error::ResidualLeakage(residual));
        }
        Ok(content)
    }

    /// Relabels basis states of register t by a permutation: |j⟩ ↦ |π(j)⟩.
    pub fn permute_register(&mut self, t: usize, perm: &[usize]) -> Result<()> {
        self.check_register(t)?;
        let dim = self.regs[t].dim;
        if perm.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: perm.len(),
            });
        }
        self.apply_fiberwise(t, dim, |fin, fout| {
            for (j, &amp) in fin.iter().enumerate() {
                fout[perm[j]] = amp;
            }
        });
        Ok(())
    }
}
