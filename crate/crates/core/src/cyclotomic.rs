//! Exact arithmetic in `Z[zeta_e]` for prime-power `e`.
//!
//! Values are kept in the power basis `1, zeta, ..., zeta^{phi(e)-1}`, which
//! is an integral basis, so every algebraic integer of the field has a unique
//! integer coordinate vector.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::RootOfUnity;

/// `(p, p^{k-1})` for `order = p^k`; `(1, 1)` for order 1.
fn split(order: u32) -> (u32, u32) {
    if order == 1 {
        return (1, 1);
    }
    let p = (2..=order).find(|d| order.is_multiple_of(*d)).unwrap();
    let mut r = order;
    while r.is_multiple_of(p) {
        r /= p;
    }
    assert_eq!(r, 1, "cyclotomic order {order} is not a prime power");
    (p, order / p)
}

fn phi(order: u32) -> usize {
    let (p, pk1) = split(order);
    if order == 1 {
        1
    } else {
        ((p - 1) * pk1) as usize
    }
}

/// An element of `Z[zeta_order]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        Cyclotomic {
            order,
            coeffs: vec![0; phi(order)],
        }
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        let mut z = Cyclotomic::zero(order);
        z.coeffs[0] = n;
        z
    }

    /// `zeta_order^j`.
    pub fn root(order: u32, j: u64) -> Self {
        let mut dense = vec![0i64; order as usize];
        dense[(j % order as u64) as usize] = 1;
        Cyclotomic::from_dense(order, dense)
    }

    pub fn from_root(r: RootOfUnity, order: u32) -> Self {
        let r = r.lift(order);
        Cyclotomic::root(order, r.exponent as u64)
    }

    /// Reduces a vector indexed by `zeta^0 .. zeta^{order-1}`.
    pub fn from_dense(order: u32, mut dense: Vec<i64>) -> Self {
        assert_eq!(dense.len(), order as usize);
        let (p, pk1) = split(order);
        let n = phi(order);
        if order > 1 {
            // zeta^{(p-1)p^{k-1}} = -sum_{i<p-1} zeta^{i p^{k-1}}
            for idx in (n..order as usize).rev() {
                let c = dense[idx];
                if c == 0 {
                    continue;
                }
                dense[idx] = 0;
                let base = idx - n;
                for i in 0..(p - 1) as usize {
                    dense[base + i * pk1 as usize] -= c;
                }
            }
        }
        dense.truncate(n);
        Cyclotomic {
            order,
            coeffs: dense,
        }
    }

    pub fn from_coeffs(order: u32, coeffs: Vec<i64>) -> Option<Self> {
        (coeffs.len() == phi(order)).then_some(Cyclotomic { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn dense(&self) -> Vec<i64> {
        let mut d = self.coeffs.clone();
        d.resize(self.order as usize, 0);
        d
    }

    /// Rewrites the value in `Z[zeta_order]`, a multiple of the current order.
    pub fn lift(&self, order: u32) -> Self {
        if order == self.order {
            return self.clone();
        }
        assert!(
            order.is_multiple_of(self.order),
            "cannot lift {} to {}",
            self.order,
            order
        );
        let step = (order / self.order) as usize;
        let mut dense = vec![0; order as usize];
        for (j, &c) in self.coeffs.iter().enumerate() {
            dense[j * step] = c;
        }
        // power basis positions map to power basis positions
        Cyclotomic {
            order,
            coeffs: Cyclotomic::from_dense(order, dense).coeffs,
        }
    }

    /// Rewrites the value in the smaller ring `Z[zeta_order]` when it lies
    /// there.
    pub fn lower(&self, order: u32) -> Option<Self> {
        if order == self.order {
            return Some(self.clone());
        }
        if !self.order.is_multiple_of(order) {
            return None;
        }
        let step = (self.order / order) as usize;
        let n = phi(order);
        let mut coeffs = vec![0; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if j % step != 0 || j / step >= n {
                return None;
            }
            coeffs[j / step] = c;
        }
        Some(Cyclotomic { order, coeffs })
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let order = self.order.max(other.order);
        (self.lift(order), other.lift(order))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyclotomic {
            order: a.order,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let e = a.order as usize;
        let mut dense = vec![0i64; e];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                dense[(i + j) % e] += x * y;
            }
        }
        Cyclotomic::from_dense(a.order, dense)
    }

    pub fn scale(&self, n: i64) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * n).collect(),
        }
    }

    /// Exact division by an integer; `None` if some coordinate is not
    /// divisible.
    pub fn div_exact(&self, n: i64) -> Option<Self> {
        if self.coeffs.iter().any(|x| x % n != 0) {
            return None;
        }
        Some(Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x / n).collect(),
        })
    }

    /// Complex conjugate, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        let e = self.order as usize;
        let d = self.dense();
        let mut out = vec![0; e];
        for (j, &c) in d.iter().enumerate() {
            out[(e - j) % e] += c;
        }
        Cyclotomic::from_dense(self.order, out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value as an integer, if it is rational.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coeffs[0])
    }

    /// `Some(j)` if `self == n * zeta^j` with `zeta` of the current order.
    pub fn as_scaled_root(&self, n: i64) -> Option<RootOfUnity> {
        (0..self.order as u64)
            .find(|&j| Cyclotomic::root(self.order, j).scale(n) == *self)
            .map(|j| RootOfUnity::new(j, self.order))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but fixed total order: coordinates compared after lifting to a
/// common ring.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.common(other);
        a.coeffs.cmp(&b.coeffs)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match j {
                0 => format!("{c}"),
                _ => format!("{c}*z{}^{j}", self.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_roots_vanishes() {
        for e in [3u32, 5, 9, 25, 27] {
            let mut s = Cyclotomic::zero(e);
            for j in 0..e as u64 {
                s = s.add(&Cyclotomic::root(e, j));
            }
            assert!(s.is_zero(), "order {e}");
        }
    }

    #[test]
    fn roots_multiply_by_adding_exponents() {
        let e = 9;
        for a in 0..9 {
            for b in 0..9 {
                let lhs = Cyclotomic::root(e, a).mul(&Cyclotomic::root(e, b));
                assert_eq!(lhs, Cyclotomic::root(e, a + b));
            }
        }
    }

    #[test]
    fn lift_and_lower() {
        let z3 = Cyclotomic::root(3, 1);
        let lifted = z3.lift(9);
        assert_eq!(lifted, Cyclotomic::root(9, 3));
        assert_eq!(lifted.lower(3).unwrap().coeffs(), z3.coeffs());
        assert!(Cyclotomic::root(9, 1).lower(3).is_none());
        assert_eq!(z3, Cyclotomic::root(9, 3));
    }

    #[test]
    fn norm_of_root_is_one() {
        for j in 0..27 {
            let z = Cyclotomic::root(27, j);
            assert_eq!(z.mul(&z.conj()).as_integer(), Some(1));
        }
    }

    #[test]
    fn gauss_sum_squared() {
        // (sum_x zeta_3^{x^2})^2 = -3 over F_3
        let mut g = Cyclotomic::zero(3);
        for x in 0u64..3 {
            g = g.add(&Cyclotomic::root(3, x * x));
        }
        assert_eq!(g.mul(&g).as_integer(), Some(-3));
    }

    #[test]
    fn scaled_root_detection() {
        let v = Cyclotomic::root(9, 4).scale(3);
        assert_eq!(v.as_scaled_root(3), Some(RootOfUnity::new(4, 9)));
        assert_eq!(Cyclotomic::from_int(9, 2).as_scaled_root(3), None);
    }
}
