//! Additive and multiplicative characters of GF(p^r).
//!
//! An additive character ψ is determined by its values on the power basis,
//! each a p-th root of unity; we store the root exponents k_i with
//! ψ(b_i) = exp(2πi·k_i/p), so that evaluation is exact integer arithmetic
//! followed by a single complex exponential. A multiplicative character is
//! χ = χ₁^m for the fixed generator χ₁ normalised by χ₁(a₁) = exp(2πi/(q−1)),
//! so it is just the exponent m and evaluation goes through the discrete log:
//! χ(a) = exp(2πi·m·d_a/(q−1)).

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::C64;

/// Additive character ψ, stored via root exponents of its basis values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddChar {
    p: u32,
    root_exponents: Vec<u32>,
}

impl AddChar {
    /// The trace character ψ(x) = exp(2πi·Tr(x)/p); non-trivial because the
    /// trace is onto F_p.
    pub fn canonical(field: &FiniteField) -> Self {
        let root_exponents = (0..field.r())
            .map(|i| {
                let b = field
                    .from_coeffs(&basis_coeffs(i))
                    .expect("basis element is valid");
                field.trace(b)
            })
            .collect();
        AddChar {
            p: field.p(),
            root_exponents,
        }
    }

    /// ψ from explicit basis values ψ(b_0),…,ψ(b_{r−1}); each must be a p-th
    /// root of unity within 1e−12.
    pub fn from_values(field: &FiniteField, values: &[C64]) -> Result<Self> {
        if values.len() != field.r() as usize {
            return Err(Error::WrongValueCount {
                expected: field.r() as usize,
                got: values.len(),
            });
        }
        let p = field.p();
        let mut root_exponents = Vec::with_capacity(values.len());
        for v in values {
            if (v.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NotRootOfUnity((v.norm() - 1.0).abs()));
            }
            // v = e^{2πi·k_real/p}; v^p = 1 within 1e-12 iff |2 sin(π(k_real - k))| is
            let k_real = v.arg() / TAU * p as f64;
            let k = k_real.round();
            let dev = 2.0 * (std::f64::consts::PI * (k_real - k)).sin().abs();
            if dev > 1e-12 {
                return Err(Error::NotRootOfUnity(dev));
            }
            root_exponents.push((k.rem_euclid(p as f64)) as u32 % p);
        }
        Ok(AddChar { p, root_exponents })
    }

    /// ψ from root exponents k_i, meaning ψ(b_i) = exp(2πi·k_i/p).
    pub fn from_root_exponents(field: &FiniteField, exponents: &[u32]) -> Result<Self> {
        if exponents.len() != field.r() as usize {
            return Err(Error::WrongValueCount {
                expected: field.r() as usize,
                got: exponents.len(),
            });
        }
        Ok(AddChar {
            p: field.p(),
            root_exponents: exponents.iter().map(|&k| k % field.p()).collect(),
        })
    }

    /// The constant character ψ = 1. Constructible, but rejected by every
    /// operation that requires a non-trivial ψ.
    pub fn trivial(field: &FiniteField) -> Self {
        AddChar {
            p: field.p(),
            root_exponents: vec![0; field.r() as usize],
        }
    }

    pub fn is_nontrivial(&self) -> bool {
        self.root_exponents.iter().any(|&k| k != 0)
    }

    /// The basis values ψ(b_0),…,ψ(b_{r−1}).
    pub fn values(&self) -> Vec<C64> {
        self.root_exponents
            .iter()
            .map(|&k| C64::from_polar(1.0, TAU * k as f64 / self.p as f64))
            .collect()
    }

    /// Root exponent of ψ(x): the k in {0,…,p−1} with ψ(x) = exp(2πi·k/p).
    pub fn phase_index(&self, field: &FiniteField, x: FieldElement) -> u32 {
        debug_assert_eq!(field.p(), self.p);
        let p64 = self.p as u64;
        let mut enc = x.encoding() as u64;
        let mut acc: u64 = 0;
        for &k in &self.root_exponents {
            acc += (enc % p64) * k as u64;
            enc /= p64;
        }
        (acc % p64) as u32
    }

    pub fn eval(&self, field: &FiniteField, x: FieldElement) -> C64 {
        let k = self.phase_index(field, x);
        C64::from_polar(1.0, TAU * k as f64 / self.p as f64)
    }

    /// Phase indices of ψ on all q elements, indexed by encoding.
    pub fn phase_table(&self, field: &FiniteField) -> Vec<u32> {
        field
            .elements()
            .map(|x| self.phase_index(field, x))
            .collect()
    }
}

fn basis_coeffs(i: u32) -> Vec<u32> {
    let mut c = vec![0u32; i as usize + 1];
    c[i as usize] = 1;
    c
}

/// Multiplicative character χ = χ₁^m, stored by its exponent m mod q−1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultChar {
    m: u32,
}

impl MultChar {
    pub fn new(field: &FiniteField, m: u64) -> Self {
        MultChar {
            m: (m % (field.q() as u64 - 1)) as u32,
        }
    }

    pub fn trivial() -> Self {
        MultChar { m: 0 }
    }

    /// The order-2 character χ₂; only exists for odd q.
    pub fn quadratic(field: &FiniteField) -> Result<Self> {
        if field.q() % 2 == 0 {
            return Err(Error::NoQuadraticChar);
        }
        Ok(MultChar {
            m: (field.q() - 1) / 2,
        })
    }

    pub fn exponent(self) -> u32 {
        self.m
    }

    pub fn is_trivial(self) -> bool {
        self.m == 0
    }

    pub fn inverse(self, field: &FiniteField) -> Self {
        let n = field.q() - 1;
        MultChar { m: (n - self.m) % n }
    }

    /// Pointwise product χ·χ′ = χ₁^{m+m′}.
    pub fn mul(self, other: MultChar, field: &FiniteField) -> Self {
        MultChar {
            m: ((self.m as u64 + other.m as u64) % (field.q() as u64 - 1)) as u32,
        }
    }

    /// χ(a) = exp(2πi·m·d_a/(q−1)); errors on a = 0.
    pub fn eval(self, field: &FiniteField, a: FieldElement) -> Result<C64> {
        let d = field.dlog(a)?;
        let n = field.q() as u64 - 1;
        let idx = self.m as u64 * d as u64 % n;
        Ok(C64::from_polar(1.0, TAU * idx as f64 / n as f64))
    }

    /// All q−1 characters in exponent order.
    pub fn all(field: &FiniteField) -> impl Iterator<Item = MultChar> {
        (0..field.q() - 1).map(|m| MultChar { m })
    }
}
