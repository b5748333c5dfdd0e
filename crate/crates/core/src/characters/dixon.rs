//! Character tables by simultaneous diagonalization of class matrices modulo
//! a prime `l = 1 mod e`, followed by exact lifting to `Z[zeta_e]`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{compare_characters, ClassFunction};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::group::GroupData;
use crate::linalg::{mod_inv, mod_pow, mul_mod, right_kernel, Rref};

const MAX_SPLIT_ATTEMPTS: usize = 200;
const PRIME_SEARCH_LIMIT: u64 = 1 << 31;

/// Smallest prime `l` with `l = 1 mod exponent` and `l^2 > 4 |G|`.
pub fn dixon_prime(exponent: u64, order: u64) -> Result<u32> {
    let mut l = exponent + 1;
    while l < PRIME_SEARCH_LIMIT {
        if l * l > 4 * order && is_prime(l as u32) {
            return Ok(l as u32);
        }
        l += exponent;
    }
    Err(Error::Config(format!(
        "no prime = 1 mod {exponent} below {PRIME_SEARCH_LIMIT}"
    )))
}

fn primitive_root(l: u32) -> u32 {
    let n = l - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..l)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, n / q, l) != 1))
        .expect("l is prime")
}

/// Irreducible characters of `group`, sorted by degree and then by values.
///
/// The result does not depend on `seed`, which only drives the random
/// combinations of class matrices.
pub fn character_table(group: &Arc<GroupData>, seed: u64) -> Result<Vec<ClassFunction>> {
    let n = group.order() as u64;
    let k = group.classes().len();
    let e = group.exponent();
    let l = dixon_prime(e, n)?;
    let z = mod_pow(primitive_root(l), (l - 1) / e as u32, l);

    let a = class_structure_constants(group);
    let mats: Vec<Vec<Vec<u32>>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).map(|kk| a[i][j][kk] % l).collect())
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending = vec![Rref::full(l, k)];
    let mut vectors = Vec::new();
    while let Some(space) = pending.pop() {
        if space.dim() == 1 {
            vectors.push(space.rows()[0].clone());
            continue;
        }
        let mut split = None;
        for _ in 0..MAX_SPLIT_ATTEMPTS {
            let coeffs: Vec<u32> = (0..k).map(|_| rng.gen_range(0..l)).collect();
            let parts = eigenspaces(&mats, &coeffs, &space, l)?;
            if parts.len() > 1 {
                split = Some(parts);
                break;
            }
        }
        let parts = split.ok_or_else(|| {
            Error::Config(format!(
                "eigenspace of dimension {} did not split",
                space.dim()
            ))
        })?;
        pending.extend(parts);
    }
    if vectors.len() != k {
        return Err(Error::Consistency(format!(
            "found {} eigenvectors for {k} classes",
            vectors.len()
        )));
    }

    let sizes = group.class_sizes();
    let power_classes: Vec<Vec<usize>> = group
        .classes()
        .iter()
        .enumerate()
        .map(|(c, cl)| {
            (0..cl.element_order)
                .map(|t| group.power_class(c, t))
                .collect()
        })
        .collect();

    let mut table = Vec::with_capacity(k);
    for v in vectors {
        if v[0] == 0 {
            return Err(Error::Consistency(
                "eigenvector vanishes at the identity class".into(),
            ));
        }
        let norm = mod_inv(v[0], l);
        let w: Vec<u32> = v.iter().map(|&x| mul_mod(x, norm, l)).collect();
        // sum_i w_i w_{i*} / |C_i| = |G| / chi(1)^2
        let mut s = 0u32;
        for (i, cl) in group.classes().iter().enumerate() {
            let t = mul_mod(
                mul_mod(w[i], w[cl.inverse], l),
                mod_inv(sizes[i] as u32 % l, l),
                l,
            );
            s = (s + t) % l;
        }
        let d2 = mul_mod(n as u32 % l, mod_inv(s, l), l);
        let degree = (1..=n)
            .take_while(|d| d * d <= n)
            .find(|&d| (d * d) % l as u64 == d2 as u64)
            .ok_or_else(|| Error::Consistency("no degree matches the eigenvector".into()))?;
        let modular: Vec<u32> = (0..k)
            .map(|i| {
                mul_mod(
                    mul_mod(w[i], degree as u32, l),
                    mod_inv(sizes[i] as u32 % l, l),
                    l,
                )
            })
            .collect();
        let mut values = Vec::with_capacity(k);
        for (i, cl) in group.classes().iter().enumerate() {
            let o = cl.element_order;
            let zo = mod_pow(z, (e / o) as u32, l);
            let oinv = mod_inv(o as u32 % l, l);
            let mut value = Cyclotomic::zero(e as u32);
            for j in 0..o {
                // multiplicity of zeta_o^j as an eigenvalue
                let mut m = 0u32;
                for t in 0..o {
                    let root = mod_pow(zo, ((o - (j * t) % o) % o) as u32, l);
                    m = (m + mul_mod(modular[power_classes[i][t as usize]], root, l)) % l;
                }
                let m = mul_mod(m, oinv, l) as u64;
                if m > degree {
                    return Err(Error::Consistency(
                        "eigenvalue multiplicity exceeds degree".into(),
                    ));
                }
                if m > 0 {
                    value = value.add(&Cyclotomic::root(e as u32, j * (e / o)).scale(m as i64));
                }
            }
            values.push(value);
        }
        table.push(ClassFunction::new(group.clone(), values)?);
    }
    table.sort_by(compare_characters);
    let sum_sq: i64 = table.iter().map(|c| c.degree().unwrap_or(0).pow(2)).sum();
    if sum_sq != n as i64 {
        return Err(Error::Consistency(format!(
            "sum of squared degrees {sum_sq} != {n}"
        )));
    }
    Ok(table)
}

/// `a[i][j][k] = #{x in C_i : x^{-1} z_k in C_j}` with `z_k` the class
/// representatives.
fn class_structure_constants(group: &GroupData) -> Vec<Vec<Vec<u32>>> {
    let k = group.classes().len();
    let mut a = vec![vec![vec![0u32; k]; k]; k];
    let n = group.order();
    let inverses: Vec<usize> = (0..n).map(|x| group.inv(x)).collect();
    for (kk, cl) in group.classes().iter().enumerate() {
        let z = cl.representative;
        for x in 0..n {
            let i = group.class_of_index(x);
            let j = group.class_of_index(group.mul(inverses[x], z));
            a[i][j][kk] += 1;
        }
    }
    a
}

/// Eigenspaces of `sum_i c_i M_i` restricted to the invariant subspace.
fn eigenspaces(mats: &[Vec<Vec<u32>>], coeffs: &[u32], space: &Rref, l: u32) -> Result<Vec<Rref>> {
    let k = coeffs.len();
    let mut a = vec![vec![0u32; k]; k];
    for (m, &c) in mats.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (row, mrow) in a.iter_mut().zip(m) {
            for (x, &y) in row.iter_mut().zip(mrow) {
                *x = (*x + mul_mod(c, y, l)) % l;
            }
        }
    }
    let basis = space.rows();
    let r = basis.len();
    // column s of the restriction: coordinates of A b_s
    let mut restricted = vec![vec![0u32; r]; r];
    for (s, b) in basis.iter().enumerate() {
        let image: Vec<u32> = a
            .iter()
            .map(|row| {
                row.iter()
                    .zip(b)
                    .fold(0u32, |acc, (&x, &y)| (acc + mul_mod(x, y, l)) % l)
            })
            .collect();
        let coords = space
            .coordinates(&image)
            .ok_or_else(|| Error::Consistency("class matrix leaves the eigenspace".into()))?;
        for (t, c) in coords.into_iter().enumerate() {
            restricted[t][s] = c;
        }
    }
    let poly = charpoly(&restricted, l);
    let mut parts = Vec::new();
    let mut total = 0;
    for lambda in 0..l {
        if eval(&poly, lambda, l) != 0 {
            continue;
        }
        let mut shifted = restricted.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = (row[i] + l - lambda) % l;
        }
        let kernel = right_kernel(l, &shifted, r);
        total += kernel.len();
        let vecs = kernel.into_iter().map(|x| {
            let mut v = vec![0u32; k];
            for (b, &c) in basis.iter().zip(&x) {
                crate::linalg::axpy(&mut v, c, b, l);
            }
            v
        });
        parts.push(Rref::span(l, k, vecs));
    }
    if total != r {
        // not diagonalizable over F_l with these coefficients; retry
        return Ok(vec![space.clone()]);
    }
    Ok(parts)
}

/// Characteristic polynomial (low degree first) via reduction to upper
/// Hessenberg form.
fn charpoly(m: &[Vec<u32>], l: u32) -> Vec<u32> {
    let n = m.len();
    let mut h: Vec<Vec<u32>> = m.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = mod_inv(h[j + 1][j], l);
        for r in j + 2..n {
            let u = mul_mod(h[r][j], inv, l);
            if u == 0 {
                continue;
            }
            // row_r -= u row_{j+1}; col_{j+1} += u col_r
            for c in 0..n {
                let t = mul_mod(u, h[j + 1][c], l);
                h[r][c] = (h[r][c] + l - t) % l;
            }
            for row in h.iter_mut() {
                let t = mul_mod(u, row[r], l);
                row[j + 1] = (row[j + 1] + t) % l;
            }
        }
    }
    let mut polys: Vec<Vec<u32>> = vec![vec![1]];
    for m in 1..=n {
        // (x - h_{m-1,m-1}) p_{m-1}
        let prev = &polys[m - 1];
        let mut p = vec![0u32; m + 1];
        for (i, &c) in prev.iter().enumerate() {
            p[i + 1] = (p[i + 1] + c) % l;
            p[i] = (p[i] + l - mul_mod(h[m - 1][m - 1], c, l)) % l;
        }
        let mut t = 1u32;
        for i in (1..m).rev() {
            t = mul_mod(t, h[i][i - 1], l);
            let coef = mul_mod(h[i - 1][m - 1], t, l);
            for (d, &c) in polys[i - 1].iter().enumerate() {
                p[d] = (p[d] + l - mul_mod(coef, c, l)) % l;
            }
        }
        polys.push(p);
    }
    polys.pop().expect("nonempty")
}

fn eval(poly: &[u32], x: u32, l: u32) -> u32 {
    poly.iter()
        .rev()
        .fold(0u32, |acc, &c| (mul_mod(acc, x, l) + c) % l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::inner_product;
    use crate::cli::examples::{fixture_b, make_example, Family};
    use num_rational::Ratio;

    fn table_of(spec: crate::algebra::AlgebraSpec, fixed: bool, seed: u64) -> Vec<ClassFunction> {
        let spec = Arc::new(spec);
        let g = if fixed {
            spec.fixed_subgroup(&spec.full_space()).unwrap()
        } else {
            spec.whole_group().unwrap()
        };
        character_table(&Arc::new(GroupData::new(spec, g)), seed).unwrap()
    }

    #[test]
    fn prime_choice() {
        assert_eq!(dixon_prime(3, 27).unwrap(), 13);
        assert_eq!(dixon_prime(1, 1).unwrap(), 3);
        assert_eq!(dixon_prime(5, 25).unwrap(), 11);
    }

    #[test]
    fn charpoly_of_small_matrix() {
        // [[1,2],[3,4]] over F_7: x^2 - 5x - 2
        let p = charpoly(&[vec![1, 2], vec![3, 4]], 7);
        assert_eq!(p, vec![5, 2, 1]);
        let p = charpoly(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]], 7);
        assert_eq!(p, vec![6, 0, 0, 1]);
    }

    #[test]
    fn abelian_table_is_dual_group() {
        let t = table_of(fixture_b(), true, 1);
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|c| c.degree() == Some(1)));
    }

    #[test]
    fn heisenberg_table() {
        let t = table_of(make_example(Family::Flip, 3, 3).unwrap(), false, 7);
        let degrees: Vec<i64> = t.iter().map(|c| c.degree().unwrap()).collect();
        assert_eq!(degrees.iter().filter(|&&d| d == 1).count(), 9);
        assert_eq!(degrees.iter().filter(|&&d| d == 3).count(), 2);
        for (i, a) in t.iter().enumerate() {
            for (j, b) in t.iter().enumerate() {
                let expected = Ratio::from_integer(i64::from(i == j));
                assert_eq!(inner_product(a, b).unwrap(), expected);
            }
        }
    }

    #[test]
    fn table_does_not_depend_on_seed() {
        let spec = make_example(Family::Flip, 3, 3).unwrap();
        let a = table_of(spec, false, 1);
        let b = table_of(make_example(Family::Flip, 3, 3).unwrap(), false, 99);
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(&b).all(|(x, y)| x.values() == y.values()));
    }

    #[test]
    fn trivial_group_table() {
        let spec = Arc::new(fixture_b());
        let t = Arc::new(GroupData::new(spec.clone(), spec.trivial_subgroup()));
        let table = character_table(&t, 0).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table[0].degree(), Some(1));
    }
}
