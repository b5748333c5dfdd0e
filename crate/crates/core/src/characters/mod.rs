//! Exact class functions on enumerated subgroups.
//!
//! Values live in `Z[zeta_e]` with `e` the exponent of the group. Linear
//! characters are exponent vectors against the cyclic factors of the
//! abelianization.

mod dixon;

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::Ratio;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::RootOfUnity;
use crate::group::{GroupData, GroupElement, Subgroup};

pub use dixon::{character_table, dixon_prime};

/// A function on the conjugacy classes of a group.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    group: Arc<GroupData>,
    values: Vec<Cyclotomic>,
}

impl ClassFunction {
    pub fn new(group: Arc<GroupData>, values: Vec<Cyclotomic>) -> Result<Self> {
        if values.len() != group.classes().len() {
            return Err(Error::Shape {
                what: "class values",
                expected: group.classes().len(),
                found: values.len(),
            });
        }
        Ok(ClassFunction { group, values })
    }

    pub fn trivial(group: Arc<GroupData>) -> Self {
        let e = group.exponent() as u32;
        let values = vec![Cyclotomic::from_int(e, 1); group.classes().len()];
        ClassFunction { group, values }
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    pub fn value_at(&self, g: &GroupElement) -> Option<&Cyclotomic> {
        self.group.class_of(g).map(|c| &self.values[c])
    }

    /// Value at the identity, when it is a rational integer.
    pub fn degree(&self) -> Option<i64> {
        self.values[0].as_integer()
    }

    pub fn is_linear(&self) -> bool {
        self.degree() == Some(1)
    }

    /// Pointwise equality on the same group.
    pub fn same_values(&self, other: &ClassFunction) -> bool {
        self.group.group() == other.group.group() && self.values == other.values
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.add(b))
            .collect();
        ClassFunction {
            group: self.group.clone(),
            values,
        }
    }

    pub fn conj(&self) -> ClassFunction {
        let values = self.values.iter().map(Cyclotomic::conj).collect();
        ClassFunction {
            group: self.group.clone(),
            values,
        }
    }
}

/// Canonical order: degree, then values.
pub fn compare_characters(a: &ClassFunction, b: &ClassFunction) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.values.cmp(&b.values))
}

/// A homomorphism `H -> C^x`.
#[derive(Clone, Debug)]
pub struct LinearCharacter {
    group: Arc<GroupData>,
    exponents: Vec<u64>,
}

impl PartialEq for LinearCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.group() == other.group.group() && self.exponents == other.exponents
    }
}

impl Eq for LinearCharacter {}

impl PartialOrd for LinearCharacter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearCharacter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exponents.cmp(&other.exponents)
    }
}

impl LinearCharacter {
    /// `exponents[i]` is taken modulo the order of the `i`-th cyclic factor.
    pub fn new(group: Arc<GroupData>, exponents: Vec<u64>) -> Result<Self> {
        let factors = &group.abelianization().factors;
        if exponents.len() != factors.len() {
            return Err(Error::Shape {
                what: "character exponents",
                expected: factors.len(),
                found: exponents.len(),
            });
        }
        let exponents = exponents
            .iter()
            .zip(factors)
            .map(|(&e, f)| e % f.1)
            .collect();
        Ok(LinearCharacter { group, exponents })
    }

    pub fn trivial(group: Arc<GroupData>) -> Self {
        let n = group.abelianization().factors.len();
        LinearCharacter {
            group,
            exponents: vec![0; n],
        }
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    fn value_by_index(&self, i: usize) -> RootOfUnity {
        let ab = self.group.abelianization();
        let e = ab.exponent();
        let total: u64 = ab.coords[i]
            .iter()
            .zip(&self.exponents)
            .zip(&ab.factors)
            .map(|((&c, &x), f)| c * x % f.1 * (e / f.1))
            .sum();
        RootOfUnity::new(total, e as u32)
    }

    /// `None` if `g` is not in the group.
    pub fn value(&self, g: &GroupElement) -> Option<RootOfUnity> {
        self.group
            .group()
            .index_of(g)
            .map(|i| self.value_by_index(i))
    }

    pub fn mul(&self, other: &LinearCharacter) -> LinearCharacter {
        let factors = &self.group.abelianization().factors;
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .zip(factors)
            .map(|((a, b), f)| (a + b) % f.1)
            .collect();
        LinearCharacter {
            group: self.group.clone(),
            exponents,
        }
    }

    pub fn to_class_function(&self) -> ClassFunction {
        let e = self.group.exponent() as u32;
        let values = self
            .group
            .classes()
            .iter()
            .map(|c| Cyclotomic::from_root(self.value_by_index(c.representative), e))
            .collect();
        ClassFunction {
            group: self.group.clone(),
            values,
        }
    }

    /// The linear character with the given values, if there is one.
    pub fn from_values(
        group: Arc<GroupData>,
        value: impl Fn(&GroupElement) -> RootOfUnity,
    ) -> Result<Self> {
        let ab = group.abelianization();
        let mut exponents = Vec::with_capacity(ab.factors.len());
        for (g, o) in &ab.factors {
            let v = value(g).reduced();
            if o % v.order as u64 != 0 {
                return Err(Error::Domain(
                    "values do not define a linear character".into(),
                ));
            }
            exponents.push(v.lift(*o as u32).exponent as u64);
        }
        let chi = LinearCharacter {
            group: group.clone(),
            exponents,
        };
        for (i, g) in group.elements().iter().enumerate() {
            if chi.value_by_index(i).reduced() != value(g).reduced() {
                return Err(Error::Domain(
                    "values do not define a linear character".into(),
                ));
            }
        }
        Ok(chi)
    }

    /// Reads off a degree-one class function.
    pub fn from_class_function(chi: &ClassFunction) -> Result<Self> {
        if !chi.is_linear() {
            return Err(Error::Domain("class function is not of degree 1".into()));
        }
        let mut roots = Vec::with_capacity(chi.values.len());
        for v in &chi.values {
            roots.push(v.as_scaled_root(1).ok_or_else(|| {
                Error::Domain("class function value is not a root of unity".into())
            })?);
        }
        let group = chi.group.clone();
        let lookup = |g: &GroupElement| roots[group.class_of(g).expect("element of the group")];
        LinearCharacter::from_values(chi.group.clone(), lookup)
    }
}

/// All linear characters, in lexicographic order of their exponents.
pub fn linear_characters(group: &Arc<GroupData>) -> Vec<LinearCharacter> {
    let orders: Vec<u64> = group.abelianization().factors.iter().map(|f| f.1).collect();
    let total: u64 = orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0u64; orders.len()];
    for _ in 0..total {
        out.push(LinearCharacter {
            group: group.clone(),
            exponents: digits.clone(),
        });
        for (d, &o) in digits.iter_mut().zip(&orders).rev() {
            *d += 1;
            if *d < o {
                break;
            }
            *d = 0;
        }
    }
    out
}

/// `Res^G_H chi`.
pub fn restrict(chi: &ClassFunction, h: &Arc<GroupData>) -> Result<ClassFunction> {
    let e = h.exponent() as u32;
    let mut values = Vec::with_capacity(h.classes().len());
    for c in 0..h.classes().len() {
        let v = chi
            .value_at(h.representative(c))
            .ok_or_else(|| Error::Domain("restriction to a non-subgroup".into()))?;
        values.push(v.lower(e).unwrap_or_else(|| v.clone()));
    }
    Ok(ClassFunction {
        group: h.clone(),
        values,
    })
}

/// `Ind_H^G theta`, using
/// `Ind theta(K) = |G| / (|H| |K|) * sum_{D subset K} |D| theta(D)`
/// over the `H`-classes `D`.
pub fn induce(theta: &ClassFunction, g: &Arc<GroupData>) -> Result<ClassFunction> {
    let h = theta.group();
    let e = g.exponent() as u32;
    let mut sums = vec![Cyclotomic::zero(e); g.classes().len()];
    for (d, class) in h.classes().iter().enumerate() {
        let k = g
            .class_of(h.representative(d))
            .ok_or_else(|| Error::Domain("induction from a non-subgroup".into()))?;
        sums[k] = sums[k].add(&theta.values[d].lift(e).scale(class.size() as i64));
    }
    let mut values = Vec::with_capacity(sums.len());
    for (k, s) in sums.into_iter().enumerate() {
        let denom = (h.order() * g.classes()[k].size()) as i64;
        let v = s.scale(g.order() as i64).div_exact(denom).ok_or_else(|| {
            Error::Consistency("induced value is not an algebraic integer".into())
        })?;
        values.push(v);
    }
    Ok(ClassFunction {
        group: g.clone(),
        values,
    })
}

/// `(1/|G|) sum_g a(g) conj(b(g))`; an error if the sum is not rational.
pub fn inner_product(a: &ClassFunction, b: &ClassFunction) -> Result<Ratio<i64>> {
    if a.group.group() != b.group.group() {
        return Err(Error::Domain(
            "inner product of class functions on different groups".into(),
        ));
    }
    let mut sum = Cyclotomic::zero(a.group.exponent() as u32);
    for (c, class) in a.group.classes().iter().enumerate() {
        let term = a.values[c]
            .mul(&b.values[c].conj())
            .scale(class.size() as i64);
        sum = sum.add(&term);
    }
    let n = sum
        .as_integer()
        .ok_or_else(|| Error::Consistency(format!("inner product {sum} is not rational")))?;
    Ok(Ratio::new(n, a.group.order() as i64))
}

/// Values of `xi` on the generators of its group, as a comparison key.
fn generator_values(xi: &LinearCharacter) -> Vec<RootOfUnity> {
    xi.group()
        .group()
        .generator_elements()
        .iter()
        .map(|x| xi.value(x).expect("generator").reduced())
        .collect()
}

/// `xi^g(x) = xi(g x g^{-1})`; `g` must normalize the group of `xi`.
pub fn conjugate_character(xi: &LinearCharacter, g: &GroupElement) -> Result<LinearCharacter> {
    let n = xi.group();
    let spec = n.spec();
    for x in n.group().generator_elements() {
        if !n.group().contains(&spec.conjugate(g, &x)) {
            return Err(Error::Domain(
                "element does not normalize the subgroup".into(),
            ));
        }
    }
    LinearCharacter::from_values(n.clone(), |x| {
        xi.value(&spec.conjugate(g, x)).expect("normalized")
    })
}

/// `{g in G : xi^g = xi}`.
pub fn stabilizer_of_character(xi: &LinearCharacter, g: &GroupData) -> Result<Subgroup> {
    let n = xi.group();
    let spec = g.spec();
    let gens = n.group().generator_elements();
    let base = generator_values(xi);
    let mut stab = Vec::new();
    for x in g.elements() {
        let mut fixed = true;
        for (y, v) in gens.iter().zip(&base) {
            let c = spec.conjugate(x, y);
            let value = xi
                .value(&c)
                .ok_or_else(|| Error::Domain("element does not normalize the subgroup".into()))?;
            if value.reduced() != *v {
                fixed = false;
                break;
            }
        }
        if fixed {
            stab.push(x.clone());
        }
    }
    spec.enumerated_subgroup(stab)
}

/// Linear constituents of `Res_N chi` with their multiplicities.
pub fn spectral_support(
    chi: &ClassFunction,
    n: &Arc<GroupData>,
) -> Result<Vec<(LinearCharacter, u64)>> {
    let res = restrict(chi, n)?;
    let mut out = Vec::new();
    for xi in linear_characters(n) {
        let m = inner_product(&res, &xi.to_class_function())?;
        if !m.is_integer() || *m.numer() < 0 {
            return Err(Error::Consistency(format!(
                "multiplicity {m} is not a natural number"
            )));
        }
        if *m.numer() > 0 {
            out.push((xi, *m.numer() as u64));
        }
    }
    Ok(out)
}

/// The irreducible `chi'` of the stabilizer `t` lying over both `chi` and
/// `xi`; checked to induce back to `chi`.
pub fn clifford_component(
    chi: &ClassFunction,
    xi: &LinearCharacter,
    t: &Arc<GroupData>,
    table_t: &[ClassFunction],
) -> Result<ClassFunction> {
    let res = restrict(chi, t)?;
    let xi_cf = xi.to_class_function();
    let mut found = Vec::new();
    for psi in table_t {
        if *inner_product(&res, psi)?.numer() == 0 {
            continue;
        }
        let over = restrict(psi, xi.group())?;
        if *inner_product(&over, &xi_cf)?.numer() != 0 {
            found.push(psi.clone());
        }
    }
    if found.len() != 1 {
        return Err(Error::Consistency(format!(
            "expected a unique Clifford component, found {}",
            found.len()
        )));
    }
    let psi = found.pop().expect("one component");
    let back = induce(&psi, chi.group())?;
    if !back.same_values(chi) {
        return Err(Error::Consistency(
            "Clifford component does not induce to chi".into(),
        ));
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::examples::{make_example, Family};

    fn heisenberg() -> Arc<GroupData> {
        let s = Arc::new(make_example(Family::Flip, 3, 3).unwrap());
        let g = s.whole_group().unwrap();
        Arc::new(GroupData::new(s, g))
    }

    /// `1 + span{e12, e13}`: abelian, normal, of order 9.
    fn heisenberg_abelian(g: &Arc<GroupData>) -> Arc<GroupData> {
        let s = g.spec().clone();
        let e12 = s.basis_element(0);
        let e13 = s.basis_element(2);
        assert_eq!(s.basis_names()[2], "e13");
        let l = s.span_f([&e12, &e13]);
        Arc::new(GroupData::new(s.clone(), s.algebra_subgroup(&l).unwrap()))
    }

    #[test]
    fn linear_characters_of_small_groups() {
        let g = heisenberg();
        assert_eq!(linear_characters(&g).len(), 9);
        let t = Arc::new(GroupData::new(
            g.spec().clone(),
            g.spec().trivial_subgroup(),
        ));
        let lin = linear_characters(&t);
        assert_eq!(lin.len(), 1);
        assert!(lin[0].is_trivial());
        let a = heisenberg_abelian(&g);
        assert_eq!(linear_characters(&a).len(), 9);
    }

    #[test]
    fn linear_characters_are_multiplicative() {
        let g = heisenberg();
        let els = g.elements();
        for xi in linear_characters(&g) {
            for x in els.iter().step_by(5) {
                for y in els.iter().step_by(7) {
                    let xy = g.spec().group_mul(x, y);
                    let lhs = xi.value(&xy).unwrap().reduced();
                    let rhs = xi.value(x).unwrap().mul(xi.value(y).unwrap()).reduced();
                    assert_eq!(lhs, rhs);
                }
            }
            let cf = xi.to_class_function();
            assert_eq!(LinearCharacter::from_class_function(&cf).unwrap(), xi);
        }
    }

    #[test]
    fn trivial_inner_product() {
        let g = heisenberg();
        let t = ClassFunction::trivial(g);
        assert_eq!(inner_product(&t, &t).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn restriction_and_induction_basics() {
        let g = heisenberg();
        let t = ClassFunction::trivial(g.clone());
        let triv = Arc::new(GroupData::new(
            g.spec().clone(),
            g.spec().trivial_subgroup(),
        ));
        let r = restrict(&t, &triv).unwrap();
        assert_eq!(r.degree(), Some(1));
        let a = heisenberg_abelian(&g);
        let ra = restrict(&t, &a).unwrap();
        assert!(ra.same_values(&ClassFunction::trivial(a.clone())));
        let perm = induce(&ra, &g).unwrap();
        assert_eq!(perm.degree(), Some(3));
        let same = induce(&t, &g).unwrap();
        assert!(same.same_values(&t));
    }

    #[test]
    fn induced_character_from_abelian_subgroup_is_irreducible() {
        let g = heisenberg();
        let a = heisenberg_abelian(&g);
        let spec = g.spec();
        let center = spec.basis_element(2);
        let z = GroupElement::from_algebra(center);
        // any character nontrivial on the center
        let xi = linear_characters(&a)
            .into_iter()
            .find(|xi| !xi.value(&z).unwrap().is_one())
            .unwrap();
        let ind = induce(&xi.to_class_function(), &g).unwrap();
        assert_eq!(ind.degree(), Some(3));
        assert_eq!(inner_product(&ind, &ind).unwrap(), Ratio::from_integer(1));
        let support = spectral_support(&ind, &a).unwrap();
        assert_eq!(support.len(), 3);
        assert!(support.iter().all(|s| s.1 == 1));
        let stab = stabilizer_of_character(&xi, &g).unwrap();
        assert_eq!(stab, *a.group());
        let table_a: Vec<ClassFunction> = linear_characters(&a)
            .iter()
            .map(LinearCharacter::to_class_function)
            .collect();
        let comp = clifford_component(&ind, &xi, &a, &table_a).unwrap();
        assert!(comp.same_values(&xi.to_class_function()));
        // the support is one orbit under conjugation
        let mut orbit: Vec<LinearCharacter> = g
            .elements()
            .iter()
            .map(|x| conjugate_character(&xi, x).unwrap())
            .collect();
        orbit.sort();
        orbit.dedup();
        let mut sup: Vec<LinearCharacter> = support.into_iter().map(|s| s.0).collect();
        sup.sort();
        assert_eq!(orbit, sup);
    }

    #[test]
    fn conjugation_is_a_right_action() {
        let g = heisenberg();
        let a = heisenberg_abelian(&g);
        let spec = g.spec();
        let els = g.elements();
        for xi in linear_characters(&a).iter().step_by(2) {
            for x in els.iter().step_by(4) {
                for y in els.iter().step_by(5) {
                    let lhs = conjugate_character(&conjugate_character(xi, x).unwrap(), y).unwrap();
                    let rhs = conjugate_character(xi, &spec.group_mul(x, y)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            // elements of the abelian subgroup act trivially
            for x in a.elements() {
                assert_eq!(conjugate_character(xi, x).unwrap(), *xi);
            }
        }
    }

    #[test]
    fn conjugation_rejects_non_normalizing_elements() {
        let g = heisenberg();
        let spec = g.spec();
        let e12 = spec.basis_element(0);
        let h = Arc::new(GroupData::new(
            spec.clone(),
            spec.algebra_subgroup(&spec.span_f([&e12])).unwrap(),
        ));
        let xi = linear_characters(&h)[1].clone();
        let x = GroupElement::from_algebra(spec.basis_element(1));
        assert!(matches!(
            conjugate_character(&xi, &x),
            Err(Error::Domain(_))
        ));
    }
}
