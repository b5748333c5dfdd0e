//! Unipotent radicals of classical groups as algebras with involution.
//!
//! `J` is the strictly upper triangular `n x n` matrices with
//! `sigma(a) = K a^T K^{-1}` for an antidiagonal `K = antidiag(k_1..k_n)`,
//! which on matrix units reads
//! `sigma(e_ij) = (k_{n+1-j} / k_{n+1-i}) e_{n+1-j, n+1-i}`.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{AlgebraSpec, StructConst};
use crate::error::{Error, Result};
use crate::field::{is_prime, Field, FieldSpec, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `K` the antidiagonal identity.
    Flip,
    /// `K = antidiag(1, .., 1, -1, .., -1)`; `n` even.
    Symplectic,
    /// Flip composed with the order-2 field automorphism; `q` a square.
    Unitary,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Flip => "un-flip",
            Family::Symplectic => "un-symplectic",
            Family::Unitary => "un-unitary",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "un-flip" | "flip" => Ok(Family::Flip),
            "un-symplectic" | "symplectic" => Ok(Family::Symplectic),
            "un-unitary" | "unitary" => Ok(Family::Unitary),
            _ => Err(format!(
                "unknown family {s:?} (expected un-flip, un-symplectic or un-unitary)"
            )),
        }
    }
}

/// `q = p^f` with `p` an odd prime.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    let p = (2..=q)
        .find(|d| q.is_multiple_of(*d))
        .ok_or_else(|| Error::Domain(format!("q = {q} < 2")))?;
    let mut f = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        f += 1;
    }
    if r != 1 || !is_prime(p as u32) {
        return Err(Error::Domain(format!("q = {q} is not a prime power")));
    }
    if p == 2 {
        return Err(crate::field::FieldError::CharacteristicTwo.into());
    }
    Ok((p as u32, f))
}

fn unit_name(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("e{i}{j}")
    } else {
        format!("e{i}_{j}")
    }
}

pub fn make_example(family: Family, n: usize, q: u64) -> Result<AlgebraSpec> {
    if n < 2 {
        return Err(Error::Domain("n must be at least 2".into()));
    }
    let (p, f) = prime_power(q)?;
    let tau_order = match family {
        Family::Unitary => {
            if f % 2 != 0 {
                return Err(Error::Domain(format!(
                    "unitary family needs a square q, got {q}"
                )));
            }
            2
        }
        Family::Symplectic if !n.is_multiple_of(2) => {
            return Err(Error::Domain("symplectic family needs even n".into()));
        }
        _ => 1,
    };
    let field = Field::with_cap(FieldSpec::with_default_modulus(p, f, tau_order)?, q.max(81))?;
    let k: Vec<Scalar> = (1..=n)
        .map(|r| match family {
            Family::Symplectic if r > n / 2 => field.from_int(-1),
            _ => Scalar::ONE,
        })
        .collect();

    // matrix units ordered by superdiagonal, then by row
    let mut units = Vec::new();
    for s in 1..n {
        for i in 1..=n - s {
            units.push((i, i + s));
        }
    }
    let index = |i: usize, j: usize| units.iter().position(|&u| u == (i, j)).expect("unit");
    let names = units.iter().map(|&(i, j)| unit_name(n, i, j)).collect();
    let mut consts = Vec::new();
    for (a, &(i, j)) in units.iter().enumerate() {
        for (b, &(j2, l)) in units.iter().enumerate() {
            if j == j2 {
                consts.push(StructConst {
                    i: a,
                    j: b,
                    k: index(i, l),
                    coeff: Scalar::ONE,
                });
            }
        }
    }
    let d = units.len();
    let mut involution = vec![vec![Scalar::ZERO; d]; d];
    for (a, &(i, j)) in units.iter().enumerate() {
        let (i2, j2) = (n + 1 - j, n + 1 - i);
        let c = field.mul(k[n - j], field.inv(k[n - i])?);
        involution[a][index(i2, j2)] = c;
    }
    let meta = vec![
        ("family".to_string(), family.name().to_string()),
        ("n".to_string(), n.to_string()),
        ("q".to_string(), q.to_string()),
    ];
    Ok(AlgebraSpec::new(field, names, consts, involution)?.with_metadata(meta))
}

/// `J = F_3 e` with `e^2 = 0` and `sigma(e) = -e`.
pub fn fixture_b() -> AlgebraSpec {
    let field = Field::new(FieldSpec::prime(3).expect("3 is prime")).expect("small field");
    let minus_one = field.from_int(-1);
    AlgebraSpec::new(field, vec!["e".into()], Vec::new(), vec![vec![minus_one]])
        .expect("valid fixture")
        .with_metadata(vec![("family".into(), "fixture-b".into())])
}

/// `J = F_9^d` with zero multiplication and `sigma(x) = -tau(x)`
/// coordinatewise.
pub fn square_zero_unitary(d: usize) -> Result<AlgebraSpec> {
    let field = Field::new(FieldSpec::with_default_modulus(3, 2, 2)?)?;
    let minus_one = field.from_int(-1);
    let names = (1..=d).map(|i| format!("e{i}")).collect();
    let involution = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { minus_one } else { Scalar::ZERO })
                .collect()
        })
        .collect();
    Ok(AlgebraSpec::new(field, names, Vec::new(), involution)?
        .with_metadata(vec![("family".into(), "square-zero".into())]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_parse() {
        for f in [Family::Flip, Family::Symplectic, Family::Unitary] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("orthogonal".parse::<Family>().is_err());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(5).unwrap(), (5, 1));
        assert!(prime_power(6).is_err());
        assert!(prime_power(8).is_err());
    }

    #[test]
    fn fixed_space_dimensions() {
        let cases = [
            (Family::Flip, 3, 3, 1),
            (Family::Flip, 4, 3, 2),
            (Family::Flip, 3, 5, 1),
            (Family::Symplectic, 4, 3, 4),
            (Family::Unitary, 3, 9, 3),
        ];
        for (family, n, q, dim) in cases {
            let s = make_example(family, n, q).unwrap();
            assert!(s.validate().passed());
            let cj = s.minus_fixed_space(&s.full_space()).unwrap();
            assert_eq!(s.dim_fixed(&cj), dim, "{family} n={n} q={q}");
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(make_example(Family::Symplectic, 3, 3).is_err());
        assert!(make_example(Family::Unitary, 3, 3).is_err());
        assert!(make_example(Family::Flip, 1, 3).is_err());
        assert!(make_example(Family::Flip, 3, 4).is_err());
    }
}
