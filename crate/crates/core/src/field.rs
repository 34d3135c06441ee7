//! Arithmetic in the finite fields GF(p^n).
//!
//! Elements are polynomials of degree < n over GF(p), reduced modulo a fixed
//! monic irreducible. The modulus is the smallest monic irreducible of the
//! requested degree (smallest when coefficient vectors are read as base-p
//! integers, constant term least significant), so a given (p, n) always
//! yields the same field presentation.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// A concrete presentation of GF(p^n): the characteristic, the degree and
/// the monic irreducible modulus (coefficients low-degree first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

/// An element of GF(p^n): n residues mod p, low-degree first.
///
/// Elements only make sense relative to the [`FieldSpec`] that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` divided by the monic polynomial `m`, all mod p.
fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let da = a.len() - 1;
        if lead != 0 {
            for i in 0..=dm {
                let idx = da - dm + i;
                let sub = (lead as u64 * m[i] as u64 % p as u64) as u32;
                a[idx] = (a[idx] + p - sub) % p;
            }
        }
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += (ai as u64) * (bj as u64);
        }
    }
    out.iter().map(|&c| (c % p as u64) as u32).collect()
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl FieldSpec {
    /// Builds GF(p^n) with the canonical modulus for (p, n).
    pub fn new(p: u32, n: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        Ok(Self {
            p,
            n,
            modulus: find_irreducible(p, n),
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Modulus coefficients, low-degree first, length n + 1, leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of field elements, p^n.
    pub fn size(&self) -> usize {
        (self.p as usize).pow(self.n)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.n as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_code(1)
    }

    /// The element with coefficient vector equal to `code` in base p.
    pub fn from_code(&self, code: usize) -> FieldElement {
        let mut c = code;
        let mut coeffs = vec![0u32; self.n as usize];
        for slot in coeffs.iter_mut() {
            *slot = (c % self.p as usize) as u32;
            c /= self.p as usize;
        }
        debug_assert_eq!(c, 0, "code out of range");
        FieldElement { coeffs }
    }

    /// Inverse of [`from_code`](Self::from_code).
    pub fn code(&self, x: &FieldElement) -> usize {
        let mut code = 0usize;
        for &c in x.coeffs.iter().rev() {
            code = code * self.p as usize + c as usize;
        }
        code
    }

    /// All field elements in code order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size()).map(|c| self.from_code(c))
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        debug_assert_eq!(x.coeffs.len(), self.n as usize);
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        let coeffs = x.coeffs.iter().map(|&a| (self.p - a) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let prod = poly_mul(&x.coeffs, &y.coeffs, self.p);
        self.from_poly(prod)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on
    /// polynomials over GF(p).
    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        if x.coeffs.iter().all(|&c| c == 0) {
            return Err(FieldError::ZeroInverse);
        }
        // Invariants: old_r = old_t * x (mod modulus), r = t * x (mod modulus).
        let mut old_r = trim(x.coeffs.clone());
        let mut r = self.modulus.clone();
        let mut old_t = vec![1u32];
        let mut t: Vec<u32> = Vec::new();
        while !r.is_empty() {
            let (q, rem) = poly_divmod(&old_r, &r, self.p);
            old_r = r;
            r = rem;
            let qt = poly_mul(&q, &t, self.p);
            let next_t = poly_sub(&old_t, &qt, self.p);
            old_t = std::mem::replace(&mut t, next_t);
        }
        // old_r is now a nonzero constant gcd; scale old_t by its inverse mod p.
        debug_assert_eq!(old_r.len(), 1);
        let scale = mod_inverse(old_r[0], self.p);
        let scaled: Vec<u32> = old_t.iter().map(|&c| c * scale % self.p).collect();
        Ok(self.from_poly(scaled))
    }

    /// The p-power (Frobenius) map x -> x^p, a field automorphism.
    pub fn frobenius(&self, x: &FieldElement) -> FieldElement {
        self.pow(x, self.p as u64)
    }

    pub fn pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: &FieldElement) -> Result<u64, FieldError> {
        if x.coeffs.iter().all(|&c| c == 0) {
            return Err(FieldError::ZeroInverse);
        }
        let one = self.one();
        let mut acc = x.clone();
        let mut k = 1u64;
        while acc != one {
            acc = self.mul(&acc, x);
            k += 1;
        }
        Ok(k)
    }

    /// Smallest-code generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        let target = (self.size() - 1) as u64;
        for code in 1..self.size() {
            let x = self.from_code(code);
            if self.multiplicative_order(&x).unwrap() == target {
                return x;
            }
        }
        unreachable!("GF(p^n)* is cyclic, so a generator exists")
    }

    fn from_poly(&self, poly: Vec<u32>) -> FieldElement {
        let mut coeffs = poly_rem(poly, &self.modulus, self.p);
        coeffs.resize(self.n as usize, 0);
        FieldElement { coeffs }
    }
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out = vec![0u32; len];
    for (i, slot) in out.iter_mut().enumerate() {
        let ai = a.get(i).copied().unwrap_or(0);
        let bi = b.get(i).copied().unwrap_or(0);
        *slot = (ai + p - bi) % p;
    }
    trim(out)
}

/// Quotient and remainder of `a` by nonzero `b` over GF(p).
fn poly_divmod(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut rem = trim(a.to_vec());
    let lead_inv = mod_inverse(*b.last().unwrap(), p);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut q = vec![0u32; rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let coef = (*rem.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = rem.len() - b.len();
        q[shift] = coef;
        for i in 0..b.len() {
            let sub = (coef as u64 * b[i] as u64 % p as u64) as u32;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        rem = trim(rem);
    }
    (trim(q), rem)
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    // p is prime and a nonzero mod p; Fermat.
    let mut acc = 1u64;
    let mut base = (a % p) as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Smallest monic irreducible of degree n over GF(p), where candidates are
/// ordered by their coefficient vector read as a base-p integer.
fn find_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for code in 0..count {
        let mut c = code;
        let mut poly = Vec::with_capacity(n as usize + 1);
        for _ in 0..n {
            poly.push((c % p as u64) as u32);
            c /= p as u64;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducibles of every degree exist over GF(p)")
}

/// Trial division by all monic polynomials of degree 1..=deg/2.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut c = code;
            let mut div = Vec::with_capacity(d + 1);
            for _ in 0..d {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            let (_, rem) = poly_divmod(poly, &div, p);
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}
