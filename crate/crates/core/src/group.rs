//! The algebra group `G = 1 + J`, its sigma-action, and enumerated subgroups.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use crate::algebra::{AlgebraElement, AlgebraSpec, Subspace};
use crate::error::{Error, Result};

/// `1 + a`, stored by `a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub(crate) AlgebraElement);

impl GroupElement {
    pub fn from_algebra(a: AlgebraElement) -> Self {
        GroupElement(a)
    }

    /// The `a` in `1 + a`.
    pub fn offset(&self) -> &AlgebraElement {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_zero()
    }
}

impl AlgebraSpec {
    pub fn identity(&self) -> GroupElement {
        GroupElement(self.zero())
    }

    /// `(1+a)(1+b) = 1 + a + b + ab`.
    pub fn group_mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let ab = self.multiply(&g.0, &h.0);
        GroupElement(self.add(&self.add(&g.0, &h.0), &ab))
    }

    /// `(1+a)^{-1} = 1 - a + a^2 - ...`.
    pub fn group_inv(&self, g: &GroupElement) -> GroupElement {
        let minus = self.neg(&g.0);
        let mut acc = self.zero();
        let mut pow = minus.clone();
        while !pow.is_zero() {
            acc = self.add(&acc, &pow);
            pow = self.multiply(&pow, &minus);
        }
        GroupElement(acc)
    }

    pub fn group_pow(&self, g: &GroupElement, mut k: u64) -> GroupElement {
        let mut acc = self.identity();
        let mut base = g.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.group_mul(&acc, &base);
            }
            base = self.group_mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// `[g, h] = g h g^{-1} h^{-1}`.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let gh = self.group_mul(g, h);
        let hg = self.group_mul(h, g);
        self.group_mul(&gh, &self.group_inv(&hg))
    }

    /// `x g x^{-1}`.
    pub fn conjugate(&self, x: &GroupElement, g: &GroupElement) -> GroupElement {
        self.group_mul(&self.group_mul(x, g), &self.group_inv(x))
    }

    /// The involution on `1 + J`: `1 + a -> 1 + sigma(a)`.
    pub fn sigma(&self, g: &GroupElement) -> GroupElement {
        GroupElement(self.apply_involution(&g.0))
    }

    /// The group automorphism `g -> sigma(g^{-1})`.
    pub fn sigma_act(&self, g: &GroupElement) -> GroupElement {
        self.sigma(&self.group_inv(g))
    }

    pub fn is_sigma_fixed(&self, g: &GroupElement) -> bool {
        self.sigma_act(g) == *g
    }

    /// Order of `g`; always a power of `p`.
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        let p = self.field().p() as u64;
        let mut order = 1;
        let mut x = g.clone();
        while !x.is_identity() {
            x = self.group_pow(&x, p);
            order *= p;
        }
        order
    }

    fn check_size(&self, size: u64) -> Result<()> {
        let limit = self.limits().max_group_order;
        if size > limit {
            return Err(Error::TooLarge { size, limit });
        }
        Ok(())
    }

    // ----- subgroups -----------------------------------------------------

    /// `1 + L` for a subalgebra `L`.
    pub fn algebra_subgroup(&self, l: &Subspace) -> Result<Subgroup> {
        if !self.is_closed_under_multiplication(l) {
            return Err(Error::Domain(
                "subspace is not multiplicatively closed".into(),
            ));
        }
        let elements = self.elements_of(l)?.into_iter().map(GroupElement).collect();
        Ok(Subgroup::build(
            self,
            SubgroupKind::Algebra(l.clone()),
            elements,
        ))
    }

    /// `C_{1+L}(sigma)`, enumerated as the Cayley image of `C_L(sigma)`.
    pub fn fixed_subgroup(&self, l: &Subspace) -> Result<Subgroup> {
        if !self.is_closed_under_multiplication(l) {
            return Err(Error::Domain(
                "subspace is not multiplicatively closed".into(),
            ));
        }
        let cl = self.minus_fixed_space(l)?;
        let elements: Vec<GroupElement> = self
            .elements_of(&cl)?
            .iter()
            .map(|a| self.cayley(a))
            .collect();
        if let Some(bad) = elements.iter().find(|g| !self.is_sigma_fixed(g)) {
            return Err(Error::Consistency(format!(
                "Cayley image {bad:?} is not sigma-fixed"
            )));
        }
        Ok(Subgroup::build(
            self,
            SubgroupKind::FixedPoints(l.clone()),
            elements,
        ))
    }

    /// Cayley image of an `F^sigma`-subspace of some `C_L(sigma)`, which must
    /// be a group.
    pub fn cayley_subgroup(&self, s: &Subspace) -> Result<Subgroup> {
        let elements = self
            .elements_of(s)?
            .iter()
            .map(|a| self.cayley(a))
            .collect();
        self.enumerated_subgroup(elements)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::build(self, SubgroupKind::Enumerated, vec![self.identity()])
    }

    /// Wraps a set that is claimed to be a subgroup; closure is verified.
    pub fn enumerated_subgroup(&self, elements: Vec<GroupElement>) -> Result<Subgroup> {
        let set: HashSet<&GroupElement> = elements.iter().collect();
        if !set.contains(&self.identity()) {
            return Err(Error::Domain("set does not contain the identity".into()));
        }
        for g in &elements {
            if !set.contains(&self.group_inv(g)) {
                return Err(Error::Domain("set is not closed under inverses".into()));
            }
        }
        let sub = Subgroup::build(self, SubgroupKind::Enumerated, elements);
        for &gi in sub.generators() {
            for x in sub.elements() {
                if !sub.contains(&self.group_mul(x, &sub.elements()[gi])) {
                    return Err(Error::Domain("set is not closed under products".into()));
                }
            }
        }
        Ok(sub)
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[GroupElement]) -> Result<Subgroup> {
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.group_mul(&x, g);
                if !seen.contains(&y) {
                    self.check_size(seen.len() as u64 + 1)?;
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup::build(
            self,
            SubgroupKind::Enumerated,
            seen.into_iter().collect(),
        ))
    }

    /// Subgroup generated by all `[x, y]`, `x in X`, `y in Y`.
    pub fn commutator_closure(&self, x: &Subgroup, y: &Subgroup) -> Result<Subgroup> {
        let mut comms: HashSet<GroupElement> = HashSet::new();
        for a in x.elements() {
            for b in y.elements() {
                let c = self.commutator(a, b);
                if !c.is_identity() {
                    comms.insert(c);
                }
            }
        }
        let mut comms: Vec<GroupElement> = comms.into_iter().collect();
        comms.sort();
        self.generate_from_set(&comms)
    }

    /// Like [`generate`](Self::generate), but first discards generators that
    /// are already produced by earlier ones.
    fn generate_from_set(&self, candidates: &[GroupElement]) -> Result<Subgroup> {
        let mut gens: Vec<GroupElement> = Vec::new();
        let mut current = self.trivial_subgroup();
        for c in candidates {
            if !current.contains(c) {
                gens.push(c.clone());
                current = self.generate(&gens)?;
            }
        }
        Ok(current)
    }

    /// The whole group `G = 1 + J`.
    pub fn whole_group(&self) -> Result<Subgroup> {
        self.algebra_subgroup(&self.full_space())
    }

    /// `G_n = 1 + J^n`.
    pub fn filtration_subgroup(&self, n: usize) -> Result<Subgroup> {
        self.algebra_subgroup(&self.ideal_power(n))
    }

    /// `[G, sigma]`, generated by all `g sigma(g)`, together with the checks
    /// that it is a normal complement of `C_G(sigma)`.
    pub fn sigma_twisted_part(&self) -> Result<TwistedPart> {
        let g = self.whole_group()?;
        let c = self.fixed_subgroup(&self.full_space())?;
        let mut cands: Vec<GroupElement> = g
            .elements()
            .iter()
            .map(|x| self.group_mul(x, &self.sigma(x)))
            .filter(|x| !x.is_identity())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        cands.sort();
        let mut set: HashSet<GroupElement> = cands.iter().cloned().collect();
        set.insert(self.identity());
        let products: HashSet<GroupElement> = c
            .elements()
            .iter()
            .flat_map(|x| set.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.group_mul(x, y))
            .collect();
        let set_factorization = c.elements().iter().filter(|x| set.contains(*x)).count() == 1
            && set.len() * c.order() == g.order()
            && products.len() == g.order();
        let set_conjugation_stable = c
            .generator_elements()
            .iter()
            .all(|h| set.iter().all(|x| set.contains(&self.conjugate(h, x))));
        let twisted = self.generate_from_set(&cands)?;
        let trivial_intersection = c.intersect(self, &twisted).order() == 1;
        let product_order = c.order() as u64 * twisted.order() as u64 == g.order() as u64;
        let normal = g.generators().iter().all(|&gi| {
            let h = &g.elements()[gi];
            twisted
                .elements()
                .iter()
                .all(|x| twisted.contains(&self.conjugate(h, x)))
        });
        Ok(TwistedPart {
            subgroup: twisted,
            group_order: g.order(),
            fixed_order: c.order(),
            trivial_intersection,
            product_order,
            normal,
            set_size: set.len(),
            set_factorization,
            set_conjugation_stable,
        })
    }

    /// Compares `[G, G_n] ∩ C_G(sigma)` with `[C_G(sigma), C_{G_n}(sigma)]`.
    pub fn check_comm_lemma(&self, n: usize) -> Result<CommLemmaCheck> {
        if n == 0 {
            return Err(Error::Domain("filtration index must be at least 1".into()));
        }
        let g = self.whole_group()?;
        let gn = self.filtration_subgroup(n)?;
        let c = self.fixed_subgroup(&self.full_space())?;
        let cn = self.fixed_subgroup(&self.ideal_power(n))?;
        let lhs = self.commutator_closure(&g, &gn)?.intersect(self, &c);
        let rhs = self.commutator_closure(&c, &cn)?;
        let witness = lhs
            .elements()
            .iter()
            .find(|x| !rhs.contains(x))
            .or_else(|| rhs.elements().iter().find(|x| !lhs.contains(x)))
            .cloned();
        Ok(CommLemmaCheck {
            n,
            holds: witness.is_none(),
            lhs_order: lhs.order(),
            rhs_order: rhs.order(),
            witness,
        })
    }

    /// `|C_{G_{m-1}}(sigma)| / |C_{G_m}(sigma)| = |C_{J^{m-1}}(sigma)| /
    /// |C_{J^m}(sigma)|`, with `u -> 1 + u` mapping coset representatives
    /// of the spaces to distinct cosets of the groups.
    pub fn check_involution_isom(&self, m: usize) -> Result<bool> {
        if m < 2 {
            return Err(Error::Domain("level must be at least 2".into()));
        }
        let outer = self.minus_fixed_space(&self.ideal_power(m - 1))?;
        let inner = self.minus_fixed_space(&self.ideal_power(m))?;
        let c_outer = self.fixed_subgroup(&self.ideal_power(m - 1))?;
        let c_inner = self.fixed_subgroup(&self.ideal_power(m))?;
        let space_index = self.elements_of(&outer)?.len() / self.elements_of(&inner)?.len();
        let group_index = c_outer.order() / c_inner.order();
        if space_index != group_index {
            return Ok(false);
        }
        // u -> Psi(u) on a complement of inner in outer must hit every coset
        // of C_{G_m}(sigma) exactly once, additively
        let us: Vec<AlgebraElement> = self
            .line_decomposition(&outer, &inner)?
            .into_iter()
            .map(|l| l.u)
            .collect();
        let reps = self.elements_of(&self.span_fixed(&us))?;
        let key = |g: &GroupElement| c_inner.coset_key(self, g);
        let cosets: HashSet<GroupElement> = reps.iter().map(|u| key(&self.cayley(u))).collect();
        if cosets.len() != group_index {
            return Ok(false);
        }
        for u in &us {
            for v in &reps {
                let lhs = key(&self.cayley(&self.add(u, v)));
                let rhs = key(&self.group_mul(&self.cayley(u), &self.cayley(v)));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupKind {
    /// `1 + L` for a subalgebra `L`.
    Algebra(Subspace),
    /// `C_{1+L}(sigma)`.
    FixedPoints(Subspace),
    Enumerated,
}

/// A subgroup of `G`, with its elements sorted canonically.
#[derive(Clone, Debug)]
pub struct Subgroup {
    kind: SubgroupKind,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    generators: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    fn build(spec: &AlgebraSpec, kind: SubgroupKind, mut elements: Vec<GroupElement>) -> Self {
        elements.sort();
        elements.dedup();
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        let mut sub = Subgroup {
            kind,
            elements,
            index,
            generators: Vec::new(),
        };
        sub.generators = sub.greedy_generators(spec);
        sub
    }

    /// First element (in sorted order) outside the subgroup generated so
    /// far, repeatedly.
    fn greedy_generators(&self, spec: &AlgebraSpec) -> Vec<usize> {
        let n = self.elements.len();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut count = 1;
        let mut gens = Vec::new();
        for i in 0..n {
            if inside[i] {
                continue;
            }
            gens.push(i);
            // grow the closure; every new element is hit by BFS from the
            // current members
            let mut queue: VecDeque<usize> = (0..n).filter(|&j| inside[j]).collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = spec.group_mul(&self.elements[x], &self.elements[g]);
                    let yi = self.index[&y];
                    if !inside[yi] {
                        inside[yi] = true;
                        count += 1;
                        queue.push_back(yi);
                    }
                }
            }
            if count == n {
                break;
            }
        }
        gens
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Sorted; the identity comes first.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Indices of a generating set.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_elements(&self) -> Vec<GroupElement> {
        self.generators
            .iter()
            .map(|&i| self.elements[i].clone())
            .collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    /// Intersection, as an enumerated subgroup.
    pub fn intersect(&self, spec: &AlgebraSpec, other: &Subgroup) -> Subgroup {
        let elements = self
            .elements
            .iter()
            .filter(|g| other.contains(g))
            .cloned()
            .collect();
        Subgroup::build(spec, SubgroupKind::Enumerated, elements)
    }

    /// Canonical key for the right coset `self * g`: its smallest element.
    fn coset_key(&self, spec: &AlgebraSpec, g: &GroupElement) -> GroupElement {
        self.elements
            .iter()
            .map(|x| spec.group_mul(x, g))
            .min()
            .expect("nonempty")
    }

    /// Memoization key: the sorted element list.
    pub fn key(&self) -> Vec<GroupElement> {
        self.elements.clone()
    }
}

/// Result of [`AlgebraSpec::sigma_twisted_part`].
#[derive(Clone, Debug)]
pub struct TwistedPart {
    pub subgroup: Subgroup,
    pub group_order: usize,
    pub fixed_order: usize,
    pub trivial_intersection: bool,
    pub product_order: bool,
    pub normal: bool,
    /// The set `{g sigma(g)}` itself, before generating a subgroup.
    pub set_size: usize,
    /// Every element of `G` is uniquely `c s` with `c` fixed and `s` in the set.
    pub set_factorization: bool,
    /// The set is stable under conjugation by `C_G(sigma)`.
    pub set_conjugation_stable: bool,
}

impl TwistedPart {
    /// The decomposition for the generated subgroup.
    pub fn passed(&self) -> bool {
        self.trivial_intersection && self.product_order && self.normal
    }

    /// The decomposition for the set of elements `g sigma(g)`.
    pub fn set_passed(&self) -> bool {
        self.set_factorization && self.set_conjugation_stable
    }
}

/// Result of [`AlgebraSpec::check_comm_lemma`].
#[derive(Clone, Debug)]
pub struct CommLemmaCheck {
    pub n: usize,
    pub holds: bool,
    pub lhs_order: usize,
    pub rhs_order: usize,
    pub witness: Option<GroupElement>,
}

/// A conjugacy class, by indices into the subgroup's element list.
#[derive(Clone, Debug)]
pub struct ConjClass {
    /// Smallest member.
    pub representative: usize,
    pub members: Vec<usize>,
    /// Class of the inverses.
    pub inverse: usize,
    pub element_order: u64,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Cyclic decomposition of `H / [H, H]`.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub derived: Subgroup,
    /// Independent generators and their orders modulo `[H, H]`.
    pub factors: Vec<(GroupElement, u64)>,
    /// Exponent vector of every element of `H`, indexed like its elements.
    pub coords: Vec<Vec<u64>>,
}

impl Abelianization {
    /// Order of `H / [H, H]`.
    pub fn order(&self) -> u64 {
        self.factors.iter().map(|f| f.1).product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().map(|f| f.1).max().unwrap_or(1)
    }
}

/// An enumerated subgroup with conjugacy classes and derived data.
pub struct GroupData {
    spec: Arc<AlgebraSpec>,
    group: Subgroup,
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
    exponent: u64,
    abelianization: OnceLock<Abelianization>,
}

impl std::fmt::Debug for GroupData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupData")
            .field("order", &self.order())
            .field("classes", &self.classes.len())
            .finish()
    }
}

impl GroupData {
    pub fn new(spec: Arc<AlgebraSpec>, group: Subgroup) -> Self {
        let (classes, class_of) = conjugacy_classes(&spec, &group);
        let exponent = classes.iter().map(|c| c.element_order).max().unwrap_or(1);
        GroupData {
            spec,
            group,
            classes,
            class_of,
            exponent,
            abelianization: OnceLock::new(),
        }
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn elements(&self) -> &[GroupElement] {
        self.group.elements()
    }

    /// Identity class first, then by representative.
    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_of_index(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_of(&self, g: &GroupElement) -> Option<usize> {
        self.group.index_of(g).map(|i| self.class_of[i])
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(ConjClass::size).collect()
    }

    pub fn representative(&self, class: usize) -> &GroupElement {
        &self.group.elements()[self.classes[class].representative]
    }

    /// Largest element order.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Class of `g^k` for `g` in class `c`.
    pub fn power_class(&self, c: usize, k: u64) -> usize {
        let g = self.spec.group_pow(self.representative(c), k);
        self.class_of(&g).expect("powers stay in the subgroup")
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let e = self.group.elements();
        self.group
            .index_of(&self.spec.group_mul(&e[a], &e[b]))
            .expect("closed")
    }

    pub fn inv(&self, a: usize) -> usize {
        let e = self.group.elements();
        self.group
            .index_of(&self.spec.group_inv(&e[a]))
            .expect("closed")
    }

    pub fn abelianization(&self) -> &Abelianization {
        self.abelianization
            .get_or_init(|| abelianization(&self.spec, &self.group))
    }
}

/// Conjugacy classes of an enumerated subgroup, ordered by smallest member;
/// the identity class comes first.
pub fn conjugacy_classes(spec: &AlgebraSpec, h: &Subgroup) -> (Vec<ConjClass>, Vec<usize>) {
    let n = h.order();
    let gens = h.generator_elements();
    let gens_inv: Vec<GroupElement> = gens.iter().map(|g| spec.group_inv(g)).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[start] = id;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let xe = &h.elements()[x];
            for (g, gi) in gens.iter().zip(&gens_inv) {
                let y = spec.group_mul(&spec.group_mul(g, xe), gi);
                let yi = h.index_of(&y).expect("conjugate stays in subgroup");
                if class_of[yi] == usize::MAX {
                    class_of[yi] = id;
                    members.push(yi);
                    queue.push_back(yi);
                }
            }
        }
        members.sort_unstable();
        let rep = &h.elements()[start];
        classes.push(ConjClass {
            representative: start,
            members,
            inverse: usize::MAX,
            element_order: spec.element_order(rep),
        });
    }
    for c in 0..classes.len() {
        let inv = spec.group_inv(&h.elements()[classes[c].representative]);
        classes[c].inverse = class_of[h.index_of(&inv).expect("closed")];
    }
    (classes, class_of)
}

/// Cyclic factors of `H / [H, H]` with `p`-power orders.
pub fn abelianization(spec: &AlgebraSpec, h: &Subgroup) -> Abelianization {
    let derived = spec
        .commutator_closure_by_generators(h)
        .expect("derived subgroup is smaller than the group");
    // cosets of the derived subgroup, keyed by their smallest element
    let n = h.order();
    let mut coset = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        if coset[i] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(i);
        for d in derived.elements() {
            let j = h
                .index_of(&spec.group_mul(&h.elements()[i], d))
                .expect("closed");
            coset[j] = id;
        }
    }
    let quotient = Quotient {
        spec,
        h,
        coset: &coset,
        reps: &reps,
    };
    let all: Vec<usize> = (0..reps.len()).collect();
    let basis = quotient.basis(&[0], &all);
    let factors: Vec<(GroupElement, u64)> = basis
        .iter()
        .map(|&(q, o)| (h.elements()[reps[q]].clone(), o))
        .collect();
    // coordinates: enumerate all products of basis powers
    let mut coords_of_coset: Vec<Option<Vec<u64>>> = vec![None; reps.len()];
    let mut digits = vec![0u64; basis.len()];
    let total: u64 = basis.iter().map(|b| b.1).product();
    for _ in 0..total {
        let mut x = 0usize;
        for (&(q, _), &d) in basis.iter().zip(&digits) {
            x = quotient.mul(x, quotient.pow(q, d));
        }
        coords_of_coset[x] = Some(digits.clone());
        for (d, &(_, o)) in digits.iter_mut().zip(&basis).rev() {
            *d += 1;
            if *d < o {
                break;
            }
            *d = 0;
        }
    }
    let coords = (0..n)
        .map(|i| {
            coords_of_coset[coset[i]]
                .clone()
                .expect("basis spans the quotient")
        })
        .collect();
    Abelianization {
        derived,
        factors,
        coords,
    }
}

impl AlgebraSpec {
    /// `[H, H]` as the subgroup generated by `[g_i, h]` for generators `g_i`
    /// and all `h`; that set is closed under conjugation.
    pub fn commutator_closure_by_generators(&self, h: &Subgroup) -> Result<Subgroup> {
        let mut comms: HashSet<GroupElement> = HashSet::new();
        for g in h.generator_elements() {
            for x in h.elements() {
                let c = self.commutator(&g, x);
                if !c.is_identity() {
                    comms.insert(c);
                }
            }
        }
        let mut comms: Vec<GroupElement> = comms.into_iter().collect();
        comms.sort();
        self.generate_from_set(&comms)
    }
}

/// `H / D` with cosets numbered by their smallest member; coset 0 is `D`.
struct Quotient<'a> {
    spec: &'a AlgebraSpec,
    h: &'a Subgroup,
    coset: &'a [usize],
    reps: &'a [usize],
}

impl Quotient<'_> {
    fn mul(&self, a: usize, b: usize) -> usize {
        let e = self.h.elements();
        let prod = self.spec.group_mul(&e[self.reps[a]], &e[self.reps[b]]);
        self.coset[self.h.index_of(&prod).expect("closed")]
    }

    fn pow(&self, a: usize, mut k: u64) -> usize {
        let mut acc = 0;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn inv(&self, a: usize) -> usize {
        let e = self.h.elements();
        self.coset[self
            .h
            .index_of(&self.spec.group_inv(&e[self.reps[a]]))
            .expect("closed")]
    }

    /// Closure of `k` under the quotient product.
    fn closure(&self, k: &[usize], extra: usize) -> Vec<usize> {
        let mut set: HashSet<usize> = k.iter().copied().collect();
        let mut queue: VecDeque<usize> = k.iter().copied().collect();
        if set.insert(extra) {
            queue.push_back(extra);
        }
        while let Some(x) = queue.pop_front() {
            let items: Vec<usize> = set.iter().copied().collect();
            for y in items {
                let z = self.mul(x, y);
                if set.insert(z) {
                    queue.push_back(z);
                }
            }
        }
        let mut v: Vec<usize> = set.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// Order of `a` modulo the subgroup `k`.
    fn order_mod(&self, a: usize, k: &HashSet<usize>) -> u64 {
        let p = self.spec.field().p() as u64;
        let mut o = 1;
        let mut x = a;
        while !k.contains(&x) {
            x = self.pow(x, p);
            o *= p;
        }
        o
    }

    /// Basis of the abelian `p`-group `all / k`: pairs (element, order).
    fn basis(&self, k: &[usize], all: &[usize]) -> Vec<(usize, u64)> {
        if k.len() == all.len() {
            return Vec::new();
        }
        let kset: HashSet<usize> = k.iter().copied().collect();
        // first element of maximal order
        let mut best = (0usize, 0u64);
        for &a in all {
            let o = self.order_mod(a, &kset);
            if o > best.1 {
                best = (a, o);
            }
        }
        let (g, order_g) = best;
        let k1 = self.closure(k, g);
        let rest = self.basis(&k1, all);
        let mut out = vec![(g, order_g)];
        for (h, b) in rest {
            // h^b lies in <k, g>; solve h^b = g^c modulo k, then p^b | c
            let hb = self.pow(h, b);
            let c = (0..order_g)
                .find(|&c| kset.contains(&self.mul(hb, self.inv(self.pow(g, c)))))
                .expect("h^b lies in <K, g>");
            debug_assert_eq!(c % b, 0);
            let fixed = self.mul(h, self.inv(self.pow(g, c / b)));
            out.push((fixed, b));
        }
        out
    }
}
