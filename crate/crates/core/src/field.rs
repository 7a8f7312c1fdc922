//! Exact arithmetic in GF(p^r).
//!
//! Elements are stored by their base-p digit encoding Σ c_i·p^i, where the
//! c_i are the coordinates with respect to the power basis b_i = x^i of
//! F_p[x]/(f). The reduction polynomial f is the monic irreducible of degree
//! r whose lower-coefficient encoding is smallest, so construction is
//! deterministic. A full discrete-log table with respect to a fixed generator
//! a₁ (the smallest element of multiplicative order q−1) is built once and
//! backs multiplication, inversion and the ×-encoding of nonzero elements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field size. The discrete-log table costs O(q) memory.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const DLOG_NONE: u32 = u32::MAX;

/// An element of GF(p^r), stored as its base-p digit encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    /// The canonical integer encoding Σ c_i·p^i of this element.
    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serializable description of a field: `{p, r, modulus: [c_0..c_{r-1}], a1: [..]}`.
///
/// `modulus` lists the lower coefficients of the monic reduction polynomial
/// x^r + c_{r-1}x^{r-1} + … + c_0; `a1` lists the generator's coordinates.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub p: u32,
    pub r: u32,
    pub modulus: Vec<u32>,
    pub a1: Vec<u32>,
}

/// GF(p^r) with fixed power basis, generator and discrete-log table.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    a1: FieldElement,
    exp: Vec<u32>,
    dlog: Vec<u32>,
    tr_basis: Vec<u32>,
}

impl FiniteField {
    /// Constructs GF(p^r).
    ///
    /// The reduction polynomial is the irreducible monic of degree r with the
    /// smallest lower-coefficient encoding, and the generator is the smallest
    /// element (by encoding) of order q−1, so two calls with the same (p, r)
    /// produce identical tables.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidDegree);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut q: u64 = 1;
        for _ in 0..r {
            q = q.saturating_mul(p);
            if q > MAX_FIELD_SIZE {
                return Err(Error::FieldTooLarge {
                    q,
                    limit: MAX_FIELD_SIZE,
                });
            }
        }
        let p = p as u32;
        let q = q as u32;
        let modulus = find_modulus(p, r);
        let mut field = FiniteField {
            p,
            r,
            q,
            modulus,
            a1: FieldElement(0),
            exp: Vec::new(),
            dlog: Vec::new(),
            tr_basis: Vec::new(),
        };
        field.a1 = field.find_generator();
        field.build_log_tables();
        field.tr_basis = (0..r)
            .map(|i| field.trace_raw(field.basis_element(i)))
            .collect();
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Lower coefficients c_0..c_{r-1} of the monic reduction polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The fixed generator a₁ of the multiplicative group.
    pub fn a1(&self) -> FieldElement {
        self.a1
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            r: self.r,
            modulus: self.modulus.clone(),
            a1: self.coeffs(self.a1),
        }
    }

    /// Element with the given integer encoding.
    pub fn element(&self, encoding: u32) -> Result<FieldElement> {
        if encoding < self.q {
            Ok(FieldElement(encoding))
        } else {
            Err(Error::ForeignElement)
        }
    }

    /// Element from its coordinates with respect to the power basis.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.r as usize {
            return Err(Error::ForeignElement);
        }
        let mut enc: u64 = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.p {
                return Err(Error::CoefficientOutOfRange(c, self.p));
            }
            enc += c as u64 * (self.p as u64).pow(i as u32);
        }
        Ok(FieldElement(enc as u32))
    }

    /// Coordinates c_0..c_{r-1} of an element.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        let mut enc = x.0;
        (0..self.r)
            .map(|_| {
                let c = enc % self.p;
                enc /= self.p;
                c
            })
            .collect()
    }

    /// All q elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Nonzero elements in generator-power order: a₁^0, a₁^1, …, a₁^{q-2}.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.exp.iter().map(|&e| FieldElement(e))
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let p64 = self.p as u64;
        let (mut xe, mut ye) = (x.0 as u64, y.0 as u64);
        let mut enc: u64 = 0;
        let mut scale: u64 = 1;
        for _ in 0..self.r {
            let s = (xe % p64 + ye % p64) % p64;
            enc += s * scale;
            scale *= p64;
            xe /= p64;
            ye /= p64;
        }
        FieldElement(enc as u32)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        let p64 = self.p as u64;
        let mut xe = x.0 as u64;
        let mut enc: u64 = 0;
        let mut scale: u64 = 1;
        for _ in 0..self.r {
            let c = xe % p64;
            enc += if c == 0 { 0 } else { p64 - c } * scale;
            scale *= p64;
            xe /= p64;
        }
        FieldElement(enc as u32)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.is_zero() || y.is_zero() {
            return FieldElement(0);
        }
        let d = (self.dlog[x.0 as usize] as u64 + self.dlog[y.0 as usize] as u64)
            % (self.q as u64 - 1);
        FieldElement(self.exp[d as usize])
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.q as u64 - 1;
        let d = (n - self.dlog[x.0 as usize] as u64) % n;
        Ok(FieldElement(self.exp[d as usize]))
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if x.is_zero() {
            return if e == 0 { self.one() } else { self.zero() };
        }
        let n = self.q as u64 - 1;
        let d = (self.dlog[x.0 as usize] as u64 * (e % n)) % n;
        FieldElement(self.exp[d as usize])
    }

    /// a₁^d for d taken modulo q−1.
    pub fn exp_a1(&self, d: u64) -> FieldElement {
        FieldElement(self.exp[(d % (self.q as u64 - 1)) as usize])
    }

    /// Discrete logarithm: the unique d in {0,…,q−2} with a₁^d = a.
    pub fn dlog(&self, a: FieldElement) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::DlogOfZero);
        }
        Ok(self.dlog[a.0 as usize])
    }

    /// Field trace Tr(x) = Σ_{i<r} x^{p^i}, valued in {0,…,p−1}.
    pub fn trace(&self, x: FieldElement) -> u32 {
        let p64 = self.p as u64;
        let mut enc = x.0 as u64;
        let mut acc: u64 = 0;
        for &t in &self.tr_basis {
            acc += (enc % p64) * t as u64;
            enc /= p64;
        }
        (acc % p64) as u32
    }

    fn basis_element(&self, i: u32) -> FieldElement {
        FieldElement((self.p as u64).pow(i) as u32)
    }

    /// Trace by its definition, via Frobenius powers. Used once per basis
    /// element at construction; `trace` then works by linearity.
    fn trace_raw(&self, x: FieldElement) -> u32 {
        let mut acc = x;
        let mut t = x;
        for _ in 1..self.r {
            t = self.pow_raw(t, self.p as u64);
            acc = self.add(acc, t);
        }
        debug_assert!(acc.0 < self.p, "trace must land in the prime field");
        acc.0
    }

    /// Multiplication by polynomial arithmetic; independent of the log
    /// tables, so it can be used while building them.
    fn mul_raw(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let prod = pmul(
            &enc_to_poly(x.0, self.p, self.r),
            &enc_to_poly(y.0, self.p, self.r),
            self.p,
            &self.modulus,
        );
        FieldElement(poly_to_enc(&prod, self.p))
    }

    fn pow_raw(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> FieldElement {
        let n = self.q as u64 - 1;
        let factors = prime_factors(n);
        for enc in 1..self.q {
            let cand = FieldElement(enc);
            let is_gen = factors
                .iter()
                .all(|&s| self.pow_raw(cand, n / s) != self.one());
            if is_gen {
                return cand;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    fn build_log_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut dlog = vec![DLOG_NONE; self.q as usize];
        let mut cur = self.one();
        for (d, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0;
            debug_assert_eq!(dlog[cur.0 as usize], DLOG_NONE, "generator order too small");
            dlog[cur.0 as usize] = d as u32;
            cur = self.mul_raw(cur, self.a1);
        }
        debug_assert_eq!(cur, self.one());
        self.exp = exp;
        self.dlog = dlog;
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- dense polynomial arithmetic over F_p (little-endian coefficients) ---

fn enc_to_poly(mut enc: u32, p: u32, r: u32) -> Vec<u32> {
    (0..r)
        .map(|_| {
            let c = enc % p;
            enc /= p;
            c
        })
        .collect()
}

fn poly_to_enc(poly: &[u32], p: u32) -> u32 {
    let mut enc: u64 = 0;
    for &c in poly.iter().rev() {
        enc = enc * p as u64 + c as u64;
    }
    enc as u32
}

/// Product of two polynomials of degree < r, reduced modulo x^r + modlow.
fn pmul(a: &[u32], b: &[u32], p: u32, modlow: &[u32]) -> Vec<u32> {
    let r = modlow.len();
    let p64 = p as u64;
    let mut wide = vec![0u64; 2 * r - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            wide[i + j] = (wide[i + j] + ai as u64 * bj as u64) % p64;
        }
    }
    // x^r = -modlow, applied top-down
    for i in (r..2 * r - 1).rev() {
        let c = wide[i];
        if c == 0 {
            continue;
        }
        wide[i] = 0;
        for (j, &mj) in modlow.iter().enumerate() {
            if mj != 0 {
                let sub = c * mj as u64 % p64;
                wide[i - r + j] = (wide[i - r + j] + p64 - sub) % p64;
            }
        }
    }
    wide.truncate(r);
    wide.iter().map(|&c| c as u32).collect()
}

fn padd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + y) % p
        })
        .collect()
}

fn pscale(a: &[u32], s: u32, p: u32) -> Vec<u32> {
    a.iter().map(|&c| (c as u64 * s as u64 % p as u64) as u32).collect()
}

fn pdeg(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of a modulo b (b nonzero), coefficients mod p.
fn prem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = pdeg(b).expect("division by zero polynomial");
    let lead_inv = mod_inverse(b[db], p);
    let mut rem = a.to_vec();
    while let Some(da) = pdeg(&rem) {
        if da < db {
            break;
        }
        let factor = (rem[da] as u64 * lead_inv as u64 % p as u64) as u32;
        for j in 0..=db {
            let sub = factor as u64 * b[j] as u64 % p as u64;
            rem[da - db + j] = ((rem[da - db + j] as u64 + p as u64 - sub) % p as u64) as u32;
        }
    }
    rem
}

fn pgcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while pdeg(&y).is_some() {
        let r = prem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    // p prime, a nonzero: Fermat
    let mut acc: u64 = 1;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// t^e modulo (x^r + modlow), e in binary.
fn poly_powmod(t: &[u32], mut e: u64, p: u32, modlow: &[u32]) -> Vec<u32> {
    let r = modlow.len();
    let mut acc = vec![0u32; r];
    acc[0] = 1;
    let mut base = t.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = pmul(&acc, &base, p, modlow);
        }
        base = pmul(&base, &base, p, modlow);
        e >>= 1;
    }
    acc
}

/// Rabin irreducibility test for the monic polynomial x^r + modlow over F_p.
fn is_irreducible(p: u32, modlow: &[u32]) -> bool {
    let r = modlow.len() as u32;
    if r == 1 {
        return true;
    }
    let x: Vec<u32> = {
        let mut v = vec![0u32; r as usize];
        v[1] = 1;
        v
    };
    // frob[i] = x^{p^{i+1}} mod f
    let mut frob = Vec::with_capacity(r as usize);
    let mut t = poly_powmod(&x, p as u64, p, modlow);
    frob.push(t.clone());
    for _ in 1..r {
        t = poly_powmod(&t, p as u64, p, modlow);
        frob.push(t.clone());
    }
    // x^{p^r} must equal x
    if frob[r as usize - 1] != x {
        return false;
    }
    // gcd(x^{p^{r/s}} - x, f) must be constant for every prime s | r
    let mut full = modlow.to_vec();
    full.push(1);
    for s in prime_factors(r as u64) {
        let k = (r as u64 / s) as usize;
        let diff = padd(&frob[k - 1], &pscale(&x, p - 1, p), p);
        let g = pgcd(&full, &diff, p);
        if pdeg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Smallest (by lower-coefficient encoding) monic irreducible of degree r.
fn find_modulus(p: u32, r: u32) -> Vec<u32> {
    if r == 1 {
        return vec![0]; // f = x, so GF(p) = F_p[x]/(x)
    }
    let count = (p as u64).pow(r);
    for enc in 0..count {
        let modlow = enc_to_poly(enc as u32, p, r);
        if modlow[0] == 0 {
            continue; // divisible by x
        }
        if is_irreducible(p, &modlow) {
            return modlow;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_is_trivial_but_valid() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.modulus(), &[0]); // f = x
        assert_eq!(f.a1(), f.one());
        assert_eq!(f.dlog(f.one()).unwrap(), 0);
    }

    #[test]
    fn f5_generator_is_2() {
        // exhaustive order check: 2 and 3 generate F_5^*, 2 is smaller
        let f = FiniteField::new(5, 1).unwrap();
        assert_eq!(f.a1().encoding(), 2);
        for cand in [2u32, 3] {
            let x = f.element(cand).unwrap();
            let orders: Vec<u32> = (1..=4).map(|e| f.pow(x, e).encoding()).collect();
            assert_eq!(orders.iter().filter(|&&v| v == 1).count(), 1);
        }
    }

    #[test]
    fn f8_modulus_is_x3_x_1() {
        let f = FiniteField::new(2, 3).unwrap();
        // x^3 + x + 1 has lower coefficients (1, 1, 0), encoding 3;
        // the other irreducible cubic x^3 + x^2 + 1 encodes to 5.
        assert_eq!(f.modulus(), &[1, 1, 0]);
    }

    #[test]
    fn f5_mul_2_3_is_1() {
        let f = FiniteField::new(5, 1).unwrap();
        let (two, three) = (f.element(2).unwrap(), f.element(3).unwrap());
        assert_eq!(f.mul(two, three), f.one());
    }

    #[test]
    fn f8_mul_x_by_x2() {
        // (x)(x^2) = x^3 = x + 1 mod x^3 + x + 1
        let f = FiniteField::new(2, 3).unwrap();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        let x2 = f.from_coeffs(&[0, 0, 1]).unwrap();
        assert_eq!(f.mul(x, x2), f.from_coeffs(&[1, 1]).unwrap());
    }

    #[test]
    fn add_neg_is_zero() {
        for (p, r) in [(2u64, 3u32), (3, 2), (7, 1), (5, 2)] {
            let f = FiniteField::new(p, r).unwrap();
            for x in f.elements() {
                assert_eq!(f.add(x, f.neg(x)), f.zero());
            }
        }
    }

    #[test]
    fn dlog_exp_roundtrip() {
        let f = FiniteField::new(5, 1).unwrap();
        assert_eq!(f.exp_a1(0), f.one());
        assert_eq!(f.dlog(f.element(4).unwrap()).unwrap(), 2); // 2^2 = 4
        assert_eq!(f.dlog(f.exp_a1(3)).unwrap(), 3);
        for d in 0..f.q() as u64 - 1 {
            assert_eq!(f.dlog(f.exp_a1(d)).unwrap() as u64, d);
        }
    }

    #[test]
    fn dlog_of_zero_is_an_error() {
        let f = FiniteField::new(3, 1).unwrap();
        assert_eq!(f.dlog(f.zero()), Err(Error::DlogOfZero));
        assert_eq!(f.inv(f.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        for (p, r) in [(7u64, 1u32), (3, 2), (2, 4)] {
            let f = FiniteField::new(p, r).unwrap();
            let n = f.q() as u64 - 1;
            for a in f.nonzero_elements() {
                for b in f.nonzero_elements() {
                    let lhs = f.dlog(f.mul(a, b)).unwrap() as u64;
                    let rhs = (f.dlog(a).unwrap() as u64 + f.dlog(b).unwrap() as u64) % n;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.trace(x), 1); // x + x^2 = x + (x+1) = 1
        assert_eq!(f4.trace(f4.zero()), 0);

        let f7 = FiniteField::new(7, 1).unwrap();
        for c in 0..7 {
            assert_eq!(f7.trace(f7.element(c).unwrap()), c); // identity for r = 1
        }
    }

    #[test]
    fn trace_is_linear_and_onto() {
        for (p, r) in [(2u64, 3u32), (3, 3), (5, 2)] {
            let f = FiniteField::new(p, r).unwrap();
            let mut hit_nonzero = false;
            for x in f.elements() {
                for y in f.elements() {
                    let lhs = f.trace(f.add(x, y));
                    let rhs = (f.trace(x) + f.trace(y)) % f.p();
                    assert_eq!(lhs, rhs);
                }
                if f.trace(x) != 0 {
                    hit_nonzero = true;
                }
            }
            assert!(hit_nonzero, "trace must not vanish identically");
            // trace(c*x) = c*trace(x) for c in the prime field
            for c in 0..f.p() {
                let ce = f.element(c).unwrap();
                for x in f.elements() {
                    assert_eq!(f.trace(f.mul(ce, x)), (c * f.trace(x)) % f.p());
                }
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = FiniteField::new(3, 3).unwrap();
        let b = FiniteField::new(3, 3).unwrap();
        assert_eq!(a.descriptor(), b.descriptor());
        assert_eq!(a.exp, b.exp);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FiniteField::new(1, 1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(FiniteField::new(5, 0).unwrap_err(), Error::InvalidDegree);
        assert!(matches!(
            FiniteField::new(2, 21).unwrap_err(),
            Error::FieldTooLarge { .. }
        ));
    }

    #[test]
    fn field_axioms_hold_on_small_fields() {
        for (p, r) in [(2u64, 2u32), (3, 2), (5, 1), (7, 1)] {
            let f = FiniteField::new(p, r).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    for z in f.elements() {
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    }
                }
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                }
            }
        }
    }

    #[test]
    fn descriptor_json_shape() {
        let f = FiniteField::new(2, 3).unwrap();
        let json = serde_json::to_string(&f.descriptor()).unwrap();
        assert_eq!(json, r#"{"p":2,"r":3,"modulus":[1,1,0],"a1":[0,1,0]}"#);
    }
}
