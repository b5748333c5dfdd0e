//! Finite fields `GF(p^f)` of odd characteristic.
//!
//! Elements are stored by their coordinates in the polynomial basis
//! `1, x, ..., x^{f-1}` modulo a fixed irreducible modulus. A [`Scalar`] packs
//! those coordinates into a single integer `sum c_i p^i`; the [`Field`] keeps
//! addition and multiplication caches derived from the polynomial arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{mod_inv, right_kernel};

/// Default cap on `q = p^f`.
pub const DEFAULT_MAX_FIELD_ORDER: u64 = 81;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("characteristic 2 is not supported (the characteristic must be different from 2)")]
    CharacteristicTwo,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be a monic polynomial of degree {expected} with coefficients below p")]
    BadModulus { expected: u32 },
    #[error("modulus is reducible over F_{0}")]
    Reducible(u32),
    #[error("tau of order 2 needs an even extension degree, got f = {0}")]
    OddDegreeTau(u32),
    #[error("tau order must be 1 or 2, got {0}")]
    BadTauOrder(u32),
    #[error("field order {order} exceeds the configured cap {cap}")]
    TooLarge { order: u64, cap: u64 },
    #[error("coefficient vector {0:?} is not a valid field element")]
    BadCoefficients(Vec<u32>),
    #[error("inverse of zero")]
    DivisionByZero,
}

/// Static description of `F_q` together with the order of the automorphism
/// induced by the involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub f: u32,
    /// Coefficients of the monic modulus, lowest degree first (length `f + 1`).
    pub modulus: Vec<u32>,
    pub tau_order: u32,
}

impl FieldSpec {
    pub fn new(p: u32, f: u32, modulus: Vec<u32>, tau_order: u32) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if f == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if modulus.len() != f as usize + 1
            || modulus[f as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::BadModulus { expected: f });
        }
        if !is_irreducible(p, &modulus) {
            return Err(FieldError::Reducible(p));
        }
        match tau_order {
            1 => {}
            2 if f.is_multiple_of(2) => {}
            2 => return Err(FieldError::OddDegreeTau(f)),
            t => return Err(FieldError::BadTauOrder(t)),
        }
        Ok(FieldSpec {
            p,
            f,
            modulus,
            tau_order,
        })
    }

    /// `F_p` with the modulus `x`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        FieldSpec::new(p, 1, vec![0, 1], 1)
    }

    /// `F_{p^f}` with the first monic irreducible modulus in the order of
    /// `sum c_i p^i` over the non-leading coefficients.
    pub fn with_default_modulus(p: u32, f: u32, tau_order: u32) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if f == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let count = (p as u64).pow(f);
        for code in 0..count {
            let mut m = decode(code as u32, p, f as usize);
            m.push(1);
            if is_irreducible(p, &m) {
                return FieldSpec::new(p, f, m, tau_order);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.f)
    }

    /// Size of the subfield fixed by tau.
    pub fn fixed_order(&self) -> u64 {
        (self.p as u64).pow(self.f / self.tau_order)
    }
}

/// Element of `F_q`, packed as `sum c_i p^i` over polynomial-basis coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(pub(crate) u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn packed(self) -> u32 {
        self.0
    }
}

/// A root of unity `exp(2 pi i * exponent / order)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub exponent: u32,
    pub order: u32,
}

impl RootOfUnity {
    pub fn new(exponent: u64, order: u32) -> Self {
        assert!(order > 0);
        RootOfUnity {
            exponent: (exponent % order as u64) as u32,
            order,
        }
    }

    pub fn one() -> Self {
        RootOfUnity {
            exponent: 0,
            order: 1,
        }
    }

    pub fn is_one(self) -> bool {
        self.exponent == 0
    }

    /// The same root written with denominator `order`, which must be a
    /// multiple of the current one.
    pub fn lift(self, order: u32) -> Self {
        assert!(
            order.is_multiple_of(self.order),
            "cannot lift order {} to {}",
            self.order,
            order
        );
        RootOfUnity {
            exponent: self.exponent * (order / self.order),
            order,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        let order = self.order.max(other.order);
        let (a, b) = (self.lift(order), other.lift(order));
        RootOfUnity::new(a.exponent as u64 + b.exponent as u64, order)
    }

    pub fn inv(self) -> Self {
        RootOfUnity::new((self.order - self.exponent) as u64, self.order)
    }

    /// Smallest denominator.
    pub fn reduced(self) -> Self {
        let g = gcd(self.exponent, self.order);
        if self.exponent == 0 {
            return RootOfUnity::one();
        }
        RootOfUnity {
            exponent: self.exponent / g,
            order: self.order / g,
        }
    }
}

impl PartialOrd for RootOfUnity {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootOfUnity {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b) = (self.reduced(), other.reduced());
        (a.order, a.exponent).cmp(&(b.order, b.exponent))
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Arithmetic context for one [`FieldSpec`].
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    tau: Vec<u32>,
    trace: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("spec", &self.spec).finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        Field::with_cap(spec, DEFAULT_MAX_FIELD_ORDER)
    }

    pub fn with_cap(spec: FieldSpec, cap: u64) -> Result<Self, FieldError> {
        let order = spec.order();
        if order > cap {
            return Err(FieldError::TooLarge { order, cap });
        }
        let p = spec.p;
        let f = spec.f as usize;
        let q = order as u32;
        let polys: Vec<Vec<u32>> = (0..q).map(|c| decode(c, p, f)).collect();
        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                let idx = (a * q + b) as usize;
                let pa = &polys[a as usize];
                let pb = &polys[b as usize];
                let sum: Vec<u32> = pa.iter().zip(pb).map(|(x, y)| (x + y) % p).collect();
                add[idx] = encode(&sum, p);
                mul[idx] = encode(&poly_mulmod(pa, pb, &spec.modulus, p), p);
            }
        }
        let neg = polys
            .iter()
            .map(|pa| encode(&pa.iter().map(|&x| (p - x) % p).collect::<Vec<_>>(), p))
            .collect();
        let mut inv = vec![0; q as usize];
        for a in 1..q {
            inv[a as usize] = (1..q)
                .find(|&b| mul[(a * q + b) as usize] == 1)
                .expect("field");
        }
        let mut field = Field {
            spec,
            q,
            add,
            mul,
            neg,
            inv,
            tau: Vec::new(),
            trace: Vec::new(),
        };
        let half = field.spec.f / field.spec.tau_order;
        let frob_power = (p as u64).pow(half);
        field.tau = (0..q)
            .map(|a| {
                if field.spec.tau_order == 1 {
                    a
                } else {
                    field.pow(Scalar(a), frob_power).0
                }
            })
            .collect();
        field.trace = (0..q)
            .map(|a| {
                let mut acc = Scalar::ZERO;
                let mut y = Scalar(a);
                for _ in 0..field.spec.f {
                    acc = field.add(acc, y);
                    y = field.pow(y, p as u64);
                }
                debug_assert!(acc.0 < p, "trace must land in the prime field");
                acc.0
            })
            .collect();
        Ok(field)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> usize {
        self.spec.f as usize
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// `q_sigma`, the size of the tau-fixed subfield.
    pub fn fixed_order(&self) -> u64 {
        self.spec.fixed_order()
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.q).map(Scalar)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.spec.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Scalar, FieldError> {
        if coeffs.len() != self.degree() || coeffs.iter().any(|&c| c >= self.spec.p) {
            return Err(FieldError::BadCoefficients(coeffs.to_vec()));
        }
        Ok(Scalar(encode(coeffs, self.spec.p)))
    }

    pub fn coeffs(&self, x: Scalar) -> Vec<u32> {
        decode(x.0, self.spec.p, self.degree())
    }

    /// The polynomial basis `1, x, ..., x^{f-1}` as field elements.
    pub fn basis(&self) -> Vec<Scalar> {
        (0..self.degree())
            .map(|i| Scalar((self.spec.p).pow(i as u32)))
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.add[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.mul[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Scalar(self.inv[a.0 as usize]))
    }

    pub fn pow(&self, a: Scalar, mut e: u64) -> Scalar {
        let mut acc = Scalar::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// The field automorphism induced by the involution: identity, or
    /// `x -> x^{p^{f/2}}`.
    #[inline]
    pub fn tau(&self, a: Scalar) -> Scalar {
        Scalar(self.tau[a.0 as usize])
    }

    /// Absolute trace `F_q -> F_p`, returned as an integer in `0..p`.
    pub fn trace(&self, a: Scalar) -> u32 {
        self.trace[a.0 as usize]
    }

    /// An `F_p`-basis of the tau-fixed subfield.
    pub fn fixed_subfield_basis(&self) -> Vec<Scalar> {
        let p = self.spec.p;
        let f = self.degree();
        // matrix of tau - id, columns indexed by the polynomial basis
        let mut matrix = vec![vec![0u32; f]; f];
        for (j, b) in self.basis().into_iter().enumerate() {
            let col = self.coeffs(self.sub(self.tau(b), b));
            for i in 0..f {
                matrix[i][j] = col[i];
            }
        }
        let kernel = right_kernel(p, &matrix, f);
        let space = crate::linalg::Rref::span(p, f, kernel);
        space.rows().iter().map(|r| Scalar(encode(r, p))).collect()
    }

    /// Every element of the tau-fixed subfield, in increasing packed order.
    pub fn fixed_subfield(&self) -> Vec<Scalar> {
        self.elements().filter(|&x| self.tau(x) == x).collect()
    }

    /// `xi_a(x) = exp(2 pi i Tr(a x) / p)`.
    pub fn additive_character(&self, a: Scalar, x: Scalar) -> RootOfUnity {
        RootOfUnity::new(self.trace(self.mul(a, x)) as u64, self.spec.p)
    }

    pub fn format(&self, a: Scalar) -> String {
        let c = self.coeffs(a);
        let parts: Vec<String> = c.iter().map(u32::to_string).collect();
        format!("({})", parts.join(","))
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn decode(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for c in out.iter_mut() {
        *c = code % p;
        code /= p;
    }
    out
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let t = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    out.into_iter().map(|x| x as u32).collect()
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let f = m.len() - 1;
    let mut r = poly_rem(&poly_mul(a, b, p), m, p);
    r.resize(f, 0);
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style test: `m` of degree `f` is irreducible iff
/// `gcd(x^{p^k} - x, m) = 1` for every `k <= f/2`.
fn is_irreducible(p: u32, m: &[u32]) -> bool {
    let f = m.len() - 1;
    if f == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=f / 2 {
        // xp <- xp^p mod m
        let mut acc = vec![1];
        for _ in 0..p {
            acc = poly_rem(&poly_mul(&acc, &xp, p), m, p);
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(m, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
