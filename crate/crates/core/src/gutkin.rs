//! Descent from an irreducible character of `C_G(sigma)` to a linear
//! character of `C_H(sigma)` for a sigma-invariant algebra subgroup `H`,
//! with every intermediate identity checked at run time.
//!
//! One level of the descent, for the current algebra `J` and `C =
//! C_{1+J}(sigma)`:
//!
//! 1. `m` is minimal with `chi` scalar on `C_{G_m}(sigma)`, giving `zeta`.
//! 2. A line `L_s` of `C_{J^{m-1}}(sigma)` over `C_{J^m}(sigma)` pairs
//!    nontrivially with `C` under `zeta` of commutators; `L = F u + J^m`.
//! 3. `S` is the `zeta`-orthogonal of `C_L(sigma)` in `C_J(sigma)`.
//! 4. `xi` extends `zeta` to `C_{1+L}(sigma)` inside the support of `chi`;
//!    its stabilizer is `Psi(S) = C_{1+J_0}(sigma)`.
//! 5. `chi'` is the Clifford component of `chi` over `xi` on `Psi(S)`, and
//!    the descent continues with `(J_0, chi')`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraSpec, Subspace};
use crate::characters::{
    character_table, clifford_component, conjugate_character, induce, inner_product,
    linear_characters, spectral_support, stabilizer_of_character, ClassFunction, LinearCharacter,
};
use crate::error::{Error, Result};
use crate::field::RootOfUnity;
use crate::group::{GroupData, GroupElement, Subgroup};

/// Number of sampled `(alpha, a, b)` triples for the scaling identity.
pub const SCALING_SAMPLES: usize = 128;

/// Minimal level `m` on which the character is scalar, with its central
/// character.
#[derive(Clone, Debug)]
pub struct ScalarLevel {
    pub m: usize,
    /// `C_{G_m}(sigma)`.
    pub group: Arc<GroupData>,
    pub zeta: LinearCharacter,
}

/// The line chosen at one level.
#[derive(Clone, Debug)]
pub struct SelectedLine {
    /// `L = F u + J^m`.
    pub ideal: Subspace,
    pub u: AlgebraElement,
    /// `C_L(sigma) = F^sigma u + C_{J^m}(sigma)`.
    pub fixed: Subspace,
    /// `C_{1+L}(sigma)`.
    pub group: Arc<GroupData>,
    pub index: usize,
    pub count: usize,
}

/// Run-time checks of one level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelChecks {
    pub zeta_invariant: bool,
    pub zeta_nontrivial: bool,
    pub extreme_case_absent: bool,
    pub line_is_fixed_part: bool,
    pub s_is_subspace: bool,
    pub s_contains_cj2: bool,
    pub s_codim_one: bool,
    pub kernel_is_psi_s: bool,
    pub phi_homomorphism: bool,
    pub image_in_annihilator: bool,
    pub image_size: usize,
    pub alpha_isomorphism: bool,
    pub scaling_samples: usize,
    pub scaling_identity: bool,
    pub derived_in_kernel: bool,
    pub fiber_size: usize,
    pub fiber_is_support: bool,
    pub single_orbit: bool,
    pub stabilizers_are_psi_s: bool,
    pub j0_fixed_part_is_s: bool,
    pub component_degree: bool,
    pub component_induces: bool,
}

impl LevelChecks {
    /// Names of the failed checks; `q_sigma` is the size of `F^sigma`.
    pub fn failures(&self, q_sigma: usize) -> Vec<&'static str> {
        let flags = [
            (self.zeta_invariant, "zeta_invariant"),
            (self.zeta_nontrivial, "zeta_nontrivial"),
            (self.extreme_case_absent, "extreme_case_absent"),
            (self.line_is_fixed_part, "line_is_fixed_part"),
            (self.s_is_subspace, "s_is_subspace"),
            (self.s_contains_cj2, "s_contains_cj2"),
            (self.s_codim_one, "s_codim_one"),
            (self.kernel_is_psi_s, "kernel_is_psi_s"),
            (self.phi_homomorphism, "phi_homomorphism"),
            (self.image_in_annihilator, "image_in_annihilator"),
            (self.image_size == q_sigma, "image_size"),
            (self.alpha_isomorphism, "alpha_isomorphism"),
            (
                self.scaling_samples >= 100 && self.scaling_identity,
                "scaling_identity",
            ),
            (self.derived_in_kernel, "derived_in_kernel"),
            (self.fiber_size == q_sigma, "fiber_size"),
            (self.fiber_is_support, "fiber_is_support"),
            (self.single_orbit, "single_orbit"),
            (self.stabilizers_are_psi_s, "stabilizers_are_psi_s"),
            (self.j0_fixed_part_is_s, "j0_fixed_part_is_s"),
            (self.component_degree, "component_degree"),
            (self.component_induces, "component_induces"),
        ];
        flags.iter().filter(|f| !f.0).map(|f| f.1).collect()
    }
}

/// Trace of one descent level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    /// Dimensions over `F` of `J` and `J^2`.
    pub dim_j: usize,
    pub dim_j2: usize,
    pub degree: i64,
    pub m: usize,
    pub line_index: usize,
    pub line_count: usize,
    /// Coordinates of `u`, one polynomial-basis tuple per basis element.
    pub u: Vec<Vec<u32>>,
    /// Dimensions over `F^sigma` of `C_J(sigma)` and `S`.
    pub dim_cj: usize,
    pub dim_s: usize,
    /// Exponents of the chosen extension `xi`.
    pub xi: Vec<u64>,
    pub dim_j0: usize,
    pub checks: LevelChecks,
}

/// `(H, theta)` with `Ind theta = chi`.
#[derive(Clone, Debug)]
pub struct MonomialPair {
    /// The subalgebra `L_H` with `H = 1 + L_H`.
    pub algebra: Subspace,
    pub dim: usize,
    /// `C_H(sigma)`.
    pub group: Arc<GroupData>,
    pub theta: LinearCharacter,
    pub trace: Vec<LevelRecord>,
    /// `Ind theta = chi` exactly.
    pub verified: bool,
}

/// Per-character outcome of [`Engine::verify_theorem`].
#[derive(Clone, Debug)]
pub struct CharacterReport {
    pub index: usize,
    pub degree: i64,
    pub norm_one: bool,
    pub pair: std::result::Result<MonomialPair, String>,
}

impl CharacterReport {
    pub fn matched(&self) -> bool {
        self.norm_one && self.pair.as_ref().map(|p| p.verified).unwrap_or(false)
    }
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub fixed_order: usize,
    pub q_sigma: u64,
    pub dim_cj: usize,
    pub group: Arc<GroupData>,
    pub table: Arc<Vec<ClassFunction>>,
    pub characters: Vec<CharacterReport>,
    /// `sum chi(1)^2 = |C_G(sigma)| = q_sigma^{dim C_J(sigma)}`.
    pub degree_sum: bool,
    pub degrees_are_powers: bool,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.degree_sum && self.degrees_are_powers && self.characters.iter().all(|c| c.matched())
    }
}

type TableCache = HashMap<Vec<GroupElement>, (Arc<GroupData>, Option<Arc<Vec<ClassFunction>>>)>;

/// Runs descents over a fixed algebra, memoizing groups and tables.
pub struct Engine {
    spec: Arc<AlgebraSpec>,
    seed: u64,
    cache: Mutex<TableCache>,
}

impl Engine {
    pub fn new(spec: Arc<AlgebraSpec>, seed: u64) -> Self {
        Engine {
            spec,
            seed,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn q_sigma(&self) -> usize {
        self.spec.field().fixed_order() as usize
    }

    pub fn group_data(&self, sub: Subgroup) -> Arc<GroupData> {
        let key = sub.key();
        let mut cache = self.cache.lock().expect("cache lock");
        cache
            .entry(key)
            .or_insert_with(|| (Arc::new(GroupData::new(self.spec.clone(), sub)), None))
            .0
            .clone()
    }

    pub fn table(&self, group: &Arc<GroupData>) -> Result<Arc<Vec<ClassFunction>>> {
        let key = group.group().key();
        if let Some((_, Some(t))) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(character_table(group, self.seed)?);
        let mut cache = self.cache.lock().expect("cache lock");
        let entry = cache.entry(key).or_insert_with(|| (group.clone(), None));
        entry.1 = Some(t.clone());
        Ok(t)
    }

    /// `C_G(sigma)`.
    pub fn fixed_group(&self) -> Result<Arc<GroupData>> {
        Ok(self.group_data(self.spec.fixed_subgroup(&self.spec.full_space())?))
    }

    /// `C_{1+L}(sigma)`, cached.
    pub fn fixed_of(&self, l: &Subspace) -> Result<Arc<GroupData>> {
        Ok(self.group_data(self.spec.fixed_subgroup(l)?))
    }

    fn zeta_at(&self, zeta: &LinearCharacter, g: &GroupElement) -> Result<RootOfUnity> {
        zeta.value(g)
            .map(RootOfUnity::reduced)
            .ok_or_else(|| Error::Consistency("commutator left C_{G_m}(sigma)".into()))
    }

    /// Smallest `m` with `|chi(g)| = chi(1)` on `C_{G_m}(sigma)`, where `G_m`
    /// is taken in the current algebra `j`.
    pub fn minimal_scalar_level(
        &self,
        j: &Subspace,
        c: &GroupData,
        chi: &ClassFunction,
    ) -> Result<ScalarLevel> {
        let spec = &self.spec;
        if chi.group().group() != c.group() {
            return Err(Error::Domain("chi is not a class function on C".into()));
        }
        let d = chi
            .degree()
            .ok_or_else(|| Error::Domain("chi(1) is not an integer".into()))?;
        if d < 2 {
            return Err(Error::Domain(
                "minimal scalar level needs chi(1) >= 2".into(),
            ));
        }
        let powers = spec.powers_of(j);
        for m in 1..=powers.len() {
            let jm = powers
                .get(m - 1)
                .cloned()
                .unwrap_or_else(|| spec.zero_space());
            let group = self.fixed_of(&jm)?;
            let mut roots = HashMap::new();
            for g in group.elements() {
                let v = chi
                    .value_at(g)
                    .ok_or_else(|| Error::Consistency("C_{G_m}(sigma) not inside C".into()))?;
                match v.as_scaled_root(d) {
                    Some(r) => roots.insert(g.clone(), r),
                    None => break,
                };
            }
            if roots.len() != group.order() {
                continue;
            }
            if m < 2 {
                return Err(Error::Consistency(
                    "chi is scalar on all of C_G(sigma)".into(),
                ));
            }
            let zeta = LinearCharacter::from_values(group.clone(), |g| roots[g])?;
            return Ok(ScalarLevel { m, group, zeta });
        }
        unreachable!("the last power is zero, where every character is scalar")
    }

    /// `zeta(g x g^{-1}) = zeta(x)` for generators `g` of `C` and `x` of
    /// `C_{G_m}(sigma)`.
    fn zeta_is_invariant(&self, c: &GroupData, level: &ScalarLevel) -> Result<bool> {
        let spec = &self.spec;
        for g in c.group().generator_elements() {
            for x in level.group.group().generator_elements() {
                let y = spec.conjugate(&g, &x);
                if self.zeta_at(&level.zeta, &y)? != self.zeta_at(&level.zeta, &x)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// First line `L_s` in echelon order with `zeta([C, Psi(L_s)]) != 1`.
    pub fn select_line(
        &self,
        j: &Subspace,
        c: &GroupData,
        level: &ScalarLevel,
    ) -> Result<SelectedLine> {
        let spec = &self.spec;
        let powers = spec.powers_of(j);
        let get = |k: usize| {
            powers
                .get(k - 1)
                .cloned()
                .unwrap_or_else(|| spec.zero_space())
        };
        let (jm1, jm) = (get(level.m - 1), get(level.m));
        let outer = spec.minus_fixed_space(&jm1)?;
        let inner = spec.minus_fixed_space(&jm)?;
        let lines = spec.line_decomposition(&outer, &inner)?;
        let gens = c.group().generator_elements();
        for (index, line) in lines.iter().enumerate() {
            let mut pairs = false;
            'search: for b in spec.elements_of(&line.space)? {
                let h = spec.cayley(&b);
                for g in &gens {
                    if !self.zeta_at(&level.zeta, &spec.commutator(g, &h))?.is_one() {
                        pairs = true;
                        break 'search;
                    }
                }
            }
            if !pairs {
                continue;
            }
            let ideal = spec.sum(&spec.span_f([&line.u]), &jm);
            let group = self.fixed_of(&ideal)?;
            return Ok(SelectedLine {
                ideal,
                u: line.u.clone(),
                fixed: line.space.clone(),
                group,
                index,
                count: lines.len(),
            });
        }
        Err(Error::Consistency(
            "no line pairs nontrivially with C_G(sigma) under zeta".into(),
        ))
    }

    /// `S = {a in C_J(sigma) : zeta([Psi(a), Psi(b)]) = 1 for all b in
    /// C_L(sigma)}`, by enumeration; `None` if that set is not an
    /// `F^sigma`-subspace.
    pub fn compute_s(
        &self,
        j: &Subspace,
        level: &ScalarLevel,
        line: &SelectedLine,
    ) -> Result<Option<Subspace>> {
        let spec = &self.spec;
        let cj = spec.minus_fixed_space(j)?;
        let bs: Vec<GroupElement> = spec
            .elements_of(&line.fixed)?
            .iter()
            .map(|b| spec.cayley(b))
            .collect();
        let mut members = Vec::new();
        for a in spec.elements_of(&cj)? {
            let g = spec.cayley(&a);
            let mut inside = true;
            for h in &bs {
                if !self.zeta_at(&level.zeta, &spec.commutator(&g, h))?.is_one() {
                    inside = false;
                    break;
                }
            }
            if inside {
                members.push(a);
            }
        }
        let s = spec.span_fixed(&members);
        let closed = spec.elements_of(&s)?.len() == members.len();
        Ok(closed.then_some(s))
    }

    /// `phi(g)` as its values on the generators of `C_N(sigma)`.
    fn phi(
        &self,
        level: &ScalarLevel,
        gens_n: &[GroupElement],
        g: &GroupElement,
    ) -> Result<Vec<RootOfUnity>> {
        gens_n
            .iter()
            .map(|h| self.zeta_at(&level.zeta, &self.spec.commutator(g, h)))
            .collect()
    }

    /// Checks on `phi`: kernel, homomorphism, annihilator, image size and
    /// the parametrization by `F^sigma`.
    fn check_phi(
        &self,
        j: &Subspace,
        c: &GroupData,
        level: &ScalarLevel,
        line: &SelectedLine,
        s: &Subspace,
        psi_s: &Subgroup,
        checks: &mut LevelChecks,
    ) -> Result<()> {
        let spec = &self.spec;
        let gens_n = line.group.group().generator_elements();
        let mut images = BTreeSet::new();
        let mut kernel = Vec::new();
        let mut phis = Vec::with_capacity(c.order());
        for g in c.elements() {
            let v = self.phi(level, &gens_n, g)?;
            if v.iter().all(|r| r.is_one()) {
                kernel.push(g.clone());
            }
            images.insert(v.clone());
            phis.push(v);
        }
        kernel.sort();
        checks.kernel_is_psi_s = kernel == psi_s.elements();
        checks.image_size = images.len();

        // phi(gh) = phi(g) phi(h) for generators g, and phi(g) is a
        // character of C_N(sigma)
        let mul = |a: &[RootOfUnity], b: &[RootOfUnity]| -> Vec<RootOfUnity> {
            a.iter().zip(b).map(|(x, y)| x.mul(*y).reduced()).collect()
        };
        let mut hom = true;
        for &gi in c.group().generators() {
            for (hi, h) in c.elements().iter().enumerate() {
                let gh = c
                    .group()
                    .index_of(&spec.group_mul(&c.elements()[gi], h))
                    .expect("closed");
                if phis[gh] != mul(&phis[gi], &phis[hi]) {
                    hom = false;
                }
            }
            let g = &c.elements()[gi];
            for x in line.group.elements() {
                for y in &gens_n {
                    let lhs =
                        self.zeta_at(&level.zeta, &spec.commutator(g, &spec.group_mul(x, y)))?;
                    let rhs = self
                        .zeta_at(&level.zeta, &spec.commutator(g, x))?
                        .mul(self.zeta_at(&level.zeta, &spec.commutator(g, y))?)
                        .reduced();
                    if lhs != rhs {
                        hom = false;
                    }
                }
            }
        }
        checks.phi_homomorphism = hom;

        // image inside the annihilator of C_M(sigma)
        let gens_m = level.group.group().generator_elements();
        let mut annihilates = true;
        for g in c.group().generator_elements() {
            for x in &gens_m {
                if !self.zeta_at(&level.zeta, &spec.commutator(&g, x))?.is_one() {
                    annihilates = false;
                }
            }
        }
        checks.image_in_annihilator = annihilates;

        // alpha -> phi(Psi(alpha a)) for a fixed a outside S
        let cj = spec.minus_fixed_space(j)?;
        let field = spec.field();
        let fixed = field.fixed_subfield();
        checks.alpha_isomorphism = match spec
            .basis_of(&cj)
            .into_iter()
            .find(|a| !spec.contains(s, a))
        {
            None => false,
            Some(a) => {
                let value = |alpha| self.phi(level, &gens_n, &spec.cayley(&spec.scale(alpha, &a)));
                let mut seen = BTreeSet::new();
                let mut additive = true;
                for &x in &fixed {
                    let vx = value(x)?;
                    seen.insert(vx.clone());
                    for &y in &fixed {
                        if value(field.add(x, y))? != mul(&vx, &value(y)?) {
                            additive = false;
                        }
                    }
                }
                additive && seen.len() == fixed.len() && seen == images
            }
        };
        Ok(())
    }

    /// `zeta([Psi(alpha a), Psi(b)]) = zeta([Psi(a), Psi(alpha b)])` on
    /// random triples.
    fn check_scaling(
        &self,
        j: &Subspace,
        level: &ScalarLevel,
        line: &SelectedLine,
        rng: &mut ChaCha8Rng,
    ) -> Result<bool> {
        let spec = &self.spec;
        let cj = spec.elements_of(&spec.minus_fixed_space(j)?)?;
        let cl = spec.elements_of(&line.fixed)?;
        let fixed = spec.field().fixed_subfield();
        for _ in 0..SCALING_SAMPLES {
            let alpha = fixed[rng.gen_range(0..fixed.len())];
            let a = &cj[rng.gen_range(0..cj.len())];
            let b = &cl[rng.gen_range(0..cl.len())];
            let lhs = spec.commutator(&spec.cayley(&spec.scale(alpha, a)), &spec.cayley(b));
            let rhs = spec.commutator(&spec.cayley(a), &spec.cayley(&spec.scale(alpha, b)));
            if self.zeta_at(&level.zeta, &lhs)? != self.zeta_at(&level.zeta, &rhs)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The extensions of `zeta` to `C_N(sigma)`, checked against the support
    /// of `chi`; returns the first one in exponent order.
    pub fn extend_zeta(
        &self,
        c: &GroupData,
        level: &ScalarLevel,
        line: &SelectedLine,
        chi: &ClassFunction,
        psi_s: &Subgroup,
        checks: &mut LevelChecks,
    ) -> Result<LinearCharacter> {
        let cn = &line.group;
        let derived = &cn.abelianization().derived;
        let mut in_kernel = true;
        for x in derived.elements() {
            if !self.zeta_at(&level.zeta, x)?.is_one() {
                in_kernel = false;
            }
        }
        checks.derived_in_kernel = in_kernel;

        let gens_m = level.group.group().generator_elements();
        let mut fiber = Vec::new();
        for xi in linear_characters(cn) {
            let mut extends = true;
            for x in &gens_m {
                let v = xi.value(x).ok_or_else(|| {
                    Error::Consistency("C_M(sigma) is not inside C_N(sigma)".into())
                })?;
                if v.reduced() != self.zeta_at(&level.zeta, x)? {
                    extends = false;
                    break;
                }
            }
            if extends {
                fiber.push(xi);
            }
        }
        checks.fiber_size = fiber.len();
        let support: Vec<LinearCharacter> = spectral_support(chi, cn)?
            .into_iter()
            .map(|(xi, _)| xi)
            .collect();
        checks.fiber_is_support = support == fiber;
        let xi = fiber
            .iter()
            .find(|xi| support.contains(xi))
            .cloned()
            .ok_or_else(|| Error::Consistency("no extension of zeta lies under chi".into()))?;

        // orbit of xi under C, by generators
        let gens = c.group().generator_elements();
        let mut orbit = vec![xi.clone()];
        let mut queue = VecDeque::from([xi.clone()]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = conjugate_character(&x, g)?;
                if !orbit.contains(&y) {
                    orbit.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        orbit.sort();
        checks.single_orbit = orbit == fiber;
        let mut stabilizers = true;
        for x in &fiber {
            if stabilizer_of_character(x, c)? != *psi_s {
                stabilizers = false;
            }
        }
        checks.stabilizers_are_psi_s = stabilizers;
        Ok(xi)
    }

    /// Descends from `chi` to a monomial pair.
    pub fn decompose(&self, chi: &ClassFunction) -> Result<MonomialPair> {
        let spec = self.spec.clone();
        let top = self.fixed_group()?;
        if chi.group().group() != top.group() {
            return Err(Error::Domain(
                "chi is not a class function on C_G(sigma)".into(),
            ));
        }
        if inner_product(chi, chi)? != 1.into() {
            return Err(Error::Domain("chi is not irreducible".into()));
        }
        let q_sigma = self.q_sigma();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut j = spec.full_space();
        let mut c = top.clone();
        let mut current = chi.clone();
        let mut trace = Vec::new();
        while current.degree() != Some(1) {
            let degree = current.degree().unwrap_or(0);
            let mut checks = LevelChecks::default();
            let powers = spec.powers_of(&j);
            let j2 = powers.get(1).cloned().unwrap_or_else(|| spec.zero_space());
            let (dim_j, dim_j2) = (spec.dim_of(&j), spec.dim_of(&j2));

            let level = self.minimal_scalar_level(&j, &c, &current)?;
            checks.zeta_invariant = self.zeta_is_invariant(&c, &level)?;
            checks.zeta_nontrivial = !level.zeta.is_trivial();
            checks.extreme_case_absent = !(level.m == 2 && dim_j == dim_j2 + 1);

            let line = self.select_line(&j, &c, &level)?;
            checks.line_is_fixed_part = spec.minus_fixed_space(&line.ideal)?.same_as(&line.fixed);

            let cj = spec.minus_fixed_space(&j)?;
            let cj2 = spec.minus_fixed_space(&j2)?;
            let s = self.compute_s(&j, &level, &line)?;
            checks.s_is_subspace = s.is_some();
            let s = s.ok_or_else(|| {
                Error::Consistency(format!("S is not a subspace; trace so far: {trace:?}"))
            })?;
            checks.s_contains_cj2 = cj2.is_subspace_of(&s);
            checks.s_codim_one = spec.dim_fixed(&s) + 1 == spec.dim_fixed(&cj);
            let psi_s = spec.cayley_subgroup(&s)?;
            self.check_phi(&j, &c, &level, &line, &s, &psi_s, &mut checks)?;
            checks.scaling_samples = SCALING_SAMPLES;
            checks.scaling_identity = self.check_scaling(&j, &level, &line, &mut rng)?;

            let xi = self.extend_zeta(&c, &level, &line, &current, &psi_s, &mut checks)?;

            let j0 = spec.build_j0(&j, &s).map_err(|e| {
                Error::Consistency(format!(
                    "level {}: {e}; failed {:?}; trace: {trace:?}",
                    trace.len() + 1,
                    checks.failures(q_sigma)
                ))
            })?;
            let t = self.fixed_of(&j0)?;
            checks.j0_fixed_part_is_s = *t.group() == psi_s;
            let table_t = self.table(&t)?;
            let next = clifford_component(&current, &xi, &t, &table_t)?;
            checks.component_induces = true;
            checks.component_degree =
                next.degree() == Some(degree / q_sigma as i64) && degree % q_sigma as i64 == 0;

            let record = LevelRecord {
                dim_j,
                dim_j2,
                degree,
                m: level.m,
                line_index: line.index,
                line_count: line.count,
                u: line
                    .u
                    .coords()
                    .iter()
                    .map(|&x| spec.field().coeffs(x))
                    .collect(),
                dim_cj: spec.dim_fixed(&cj),
                dim_s: spec.dim_fixed(&s),
                xi: xi.exponents().to_vec(),
                dim_j0: spec.dim_of(&j0),
                checks,
            };
            let failures = record.checks.failures(q_sigma);
            trace.push(record);
            if !failures.is_empty() {
                return Err(Error::Consistency(format!(
                    "level {} failed {failures:?}; trace: {trace:?}",
                    trace.len()
                )));
            }
            j = j0;
            c = t;
            current = next;
        }
        let theta = LinearCharacter::from_class_function(&current)?;
        let verified = induce(&current, &top)?.same_values(chi);
        Ok(MonomialPair {
            dim: spec.dim_of(&j),
            algebra: j,
            group: c,
            theta,
            trace,
            verified,
        })
    }

    /// Decomposes every irreducible character of `C_G(sigma)`.
    pub fn verify_theorem(&self) -> Result<TheoremReport> {
        let group = self.fixed_group()?;
        let table = self.table(&group)?;
        let spec = &self.spec;
        let q_sigma = self.q_sigma() as u64;
        let dim_cj = spec.dim_fixed(&spec.minus_fixed_space(&spec.full_space())?);
        let mut characters = Vec::with_capacity(table.len());
        for (index, chi) in table.iter().enumerate() {
            let norm_one = inner_product(chi, chi)? == 1.into();
            let pair = self.decompose(chi).map_err(|e| e.to_string());
            characters.push(CharacterReport {
                index,
                degree: chi.degree().unwrap_or(0),
                norm_one,
                pair,
            });
        }
        let sum_sq: u64 = characters
            .iter()
            .map(|c| (c.degree * c.degree) as u64)
            .sum();
        let degree_sum =
            sum_sq == group.order() as u64 && q_sigma.checked_pow(dim_cj as u32) == Some(sum_sq);
        let degrees_are_powers = characters
            .iter()
            .all(|c| is_power_of(c.degree as u64, q_sigma));
        Ok(TheoremReport {
            fixed_order: group.order(),
            q_sigma,
            dim_cj,
            group,
            table,
            characters,
            degree_sum,
            degrees_are_powers,
        })
    }
}

pub fn is_power_of(mut n: u64, base: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(base) {
        n /= base;
    }
    n == 1
}

/// Set of elements of a subgroup, for comparisons in tests.
pub fn element_set(sub: &Subgroup) -> HashSet<GroupElement> {
    sub.elements().iter().cloned().collect()
}
