//! Nilpotent associative algebras with involution, given by structure
//! constants over `F_q`.
//!
//! All linear algebra happens over the prime field: an element of `J` is a
//! vector of `d` scalars, flattened to `d * f` prime-field coordinates. A
//! [`Subspace`] records whether it is closed under `F` or only under the
//! tau-fixed subfield `F^sigma`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::linalg::Rref;
use serde::Serialize;

/// Cap on the number of elements any enumeration may produce.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 531_441; // 3^12

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_group_order: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
        }
    }
}

/// One entry `e_i * e_j += coeff * e_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StructConst {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: Scalar,
}

/// Element of `J`, by coordinates in the chosen basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgebraElement(pub(crate) Vec<Scalar>);

impl AlgebraElement {
    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|s| s.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ScalarField {
    /// Closed under `F`.
    Full,
    /// Closed under the fixed subfield `F^sigma`.
    Fixed,
}

/// A subspace of `J`, stored as a reduced echelon basis over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    space: Rref,
    scalars: ScalarField,
}

impl Subspace {
    pub(crate) fn new(space: Rref, scalars: ScalarField) -> Self {
        Subspace { space, scalars }
    }

    pub fn scalars(&self) -> ScalarField {
        self.scalars
    }

    pub fn dim_fp(&self) -> usize {
        self.space.dim()
    }

    /// Same space, equal as sets (the scalar flag is ignored).
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.space == other.space
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.space.is_subspace_of(&other.space)
    }

    pub fn is_zero(&self) -> bool {
        self.space.dim() == 0
    }

    /// Canonical key (the echelon rows), used for memoization.
    pub fn key(&self) -> Vec<u32> {
        self.space.rows().concat()
    }
}

/// Outcome of [`AlgebraSpec::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Basis triples with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub associativity: Vec<(usize, usize, usize)>,
    pub nilpotent: bool,
    /// Pairs with `sigma(e_i e_j) != sigma(e_j) sigma(e_i)`.
    pub anti_multiplicative: Vec<(usize, usize)>,
    /// Basis indices with `sigma(sigma(e_i)) != e_i`.
    pub involutive: Vec<usize>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.associativity.is_empty()
            && self.nilpotent
            && self.anti_multiplicative.is_empty()
            && self.involutive.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.associativity.is_empty() {
            parts.push(format!(
                "associativity fails at (i,j,k) = {:?}",
                self.associativity
            ));
        }
        if !self.nilpotent {
            parts.push("algebra is not nilpotent".to_string());
        }
        if !self.anti_multiplicative.is_empty() {
            parts.push(format!(
                "sigma(e_i e_j) != sigma(e_j) sigma(e_i) at (i,j) = {:?}",
                self.anti_multiplicative
            ));
        }
        if !self.involutive.is_empty() {
            parts.push(format!(
                "sigma^2 != id at basis indices {:?}",
                self.involutive
            ));
        }
        if parts.is_empty() {
            write!(f, "ok")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

/// A nilpotent associative `F_q`-algebra `J` with an involution `sigma`.
///
/// `sigma(sum x_i e_i) = sum tau(x_i) sigma(e_i)`, where row `i` of the
/// involution matrix holds the coordinates of `sigma(e_i)`.
pub struct AlgebraSpec {
    field: Field,
    basis_names: Vec<String>,
    struct_consts: Vec<StructConst>,
    involution: Vec<AlgebraElement>,
    products: Vec<Vec<Vec<(usize, Scalar)>>>,
    nonzero_pairs: Vec<(usize, usize)>,
    limits: Limits,
    metadata: Vec<(String, String)>,
    powers: OnceLock<Vec<Subspace>>,
}

impl fmt::Debug for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraSpec")
            .field("field", self.field.spec())
            .field("basis", &self.basis_names)
            .finish()
    }
}

/// Equal field, basis names, multiplication, involution and metadata.
impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec()
            && self.basis_names == other.basis_names
            && self.products == other.products
            && self.involution == other.involution
            && self.metadata == other.metadata
    }
}

impl AlgebraSpec {
    /// Builds and validates an algebra.
    pub fn new(
        field: Field,
        basis_names: Vec<String>,
        struct_consts: Vec<StructConst>,
        involution: Vec<Vec<Scalar>>,
    ) -> Result<Self, Error> {
        let spec = AlgebraSpec::from_parts(field, basis_names, struct_consts, involution)?;
        let report = spec.validate();
        if !report.passed() {
            return Err(Error::Invalid(report));
        }
        Ok(spec)
    }

    /// Builds the algebra without checking the algebraic axioms; only shapes
    /// and indices are checked.
    pub fn from_parts(
        field: Field,
        basis_names: Vec<String>,
        struct_consts: Vec<StructConst>,
        involution: Vec<Vec<Scalar>>,
    ) -> Result<Self, Error> {
        let dim = basis_names.len();
        if involution.len() != dim {
            return Err(Error::Shape {
                what: "involution rows",
                expected: dim,
                found: involution.len(),
            });
        }
        for row in &involution {
            if row.len() != dim {
                return Err(Error::Shape {
                    what: "involution columns",
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        let q = field.order();
        let mut products = vec![vec![vec![Scalar::ZERO; dim]; dim]; dim];
        for c in &struct_consts {
            if c.i >= dim || c.j >= dim || c.k >= dim {
                return Err(Error::IndexOutOfRange {
                    i: c.i,
                    j: c.j,
                    k: c.k,
                    dim,
                });
            }
            if c.coeff.packed() >= q {
                return Err(Error::Domain(format!(
                    "coefficient {:?} not in F_q",
                    c.coeff
                )));
            }
            let slot = &mut products[c.i][c.j][c.k];
            *slot = field.add(*slot, c.coeff);
        }
        let products: Vec<Vec<Vec<(usize, Scalar)>>> = products
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        v.into_iter()
                            .enumerate()
                            .filter(|(_, s)| !s.is_zero())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let nonzero_pairs = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .filter(|&(i, j)| !products[i][j].is_empty())
            .collect();
        Ok(AlgebraSpec {
            field,
            basis_names,
            struct_consts,
            involution: involution.into_iter().map(AlgebraElement).collect(),
            products,
            nonzero_pairs,
            limits: Limits::default(),
            metadata: Vec::new(),
            powers: OnceLock::new(),
        })
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn with_metadata(mut self, metadata: Vec<(String, String)>) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn struct_consts(&self) -> &[StructConst] {
        &self.struct_consts
    }

    /// Merged structure constants in `(i, j, k)` order, zeros dropped.
    pub fn canonical_struct_consts(&self) -> Vec<StructConst> {
        let mut out = Vec::new();
        for (i, row) in self.products.iter().enumerate() {
            for (j, entries) in row.iter().enumerate() {
                for &(k, coeff) in entries {
                    out.push(StructConst { i, j, k, coeff });
                }
            }
        }
        out
    }

    pub fn involution_rows(&self) -> &[AlgebraElement] {
        &self.involution
    }

    /// Number of prime-field coordinates, `d * f`.
    pub fn dim_fp(&self) -> usize {
        self.dim() * self.field.degree()
    }

    /// `[F^sigma : F_p]`.
    pub fn fixed_degree(&self) -> usize {
        self.field.degree() / self.field.spec().tau_order as usize
    }

    // ----- elements -------------------------------------------------------

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement(vec![Scalar::ZERO; self.dim()])
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut v = self.zero();
        v.0[i] = Scalar::ONE;
        v
    }

    pub fn element(&self, coords: Vec<Scalar>) -> Result<AlgebraElement, Error> {
        if coords.len() != self.dim() {
            return Err(Error::Shape {
                what: "coordinates",
                expected: self.dim(),
                found: coords.len(),
            });
        }
        Ok(AlgebraElement(coords))
    }

    /// Element from small integer coordinates in the prime field.
    pub fn element_from_ints(&self, coords: &[i64]) -> AlgebraElement {
        assert_eq!(coords.len(), self.dim());
        AlgebraElement(coords.iter().map(|&c| self.field.from_int(c)).collect())
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.field.add(x, y))
                .collect(),
        )
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.field.sub(x, y))
                .collect(),
        )
    }

    pub fn neg(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(a.0.iter().map(|&x| self.field.neg(x)).collect())
    }

    pub fn scale(&self, c: Scalar, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(a.0.iter().map(|&x| self.field.mul(c, x)).collect())
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let f = &self.field;
        let mut out = vec![Scalar::ZERO; self.dim()];
        for &(i, j) in &self.nonzero_pairs {
            let (x, y) = (a.0[i], b.0[j]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let xy = f.mul(x, y);
            for &(k, c) in &self.products[i][j] {
                out[k] = f.add(out[k], f.mul(xy, c));
            }
        }
        AlgebraElement(out)
    }

    /// Lie bracket `ab - ba`.
    pub fn bracket(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.sub(&self.multiply(a, b), &self.multiply(b, a))
    }

    pub fn apply_involution(&self, a: &AlgebraElement) -> AlgebraElement {
        let f = &self.field;
        let mut out = vec![Scalar::ZERO; self.dim()];
        for (i, &x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let tx = f.tau(x);
            for (k, &c) in self.involution[i].0.iter().enumerate() {
                out[k] = f.add(out[k], f.mul(tx, c));
            }
        }
        AlgebraElement(out)
    }

    // ----- prime-field coordinates ---------------------------------------

    pub(crate) fn to_fp(&self, a: &AlgebraElement) -> Vec<u32> {
        a.0.iter().flat_map(|&s| self.field.coeffs(s)).collect()
    }

    pub(crate) fn from_fp(&self, v: &[u32]) -> AlgebraElement {
        let f = self.field.degree();
        AlgebraElement(
            v.chunks(f)
                .map(|c| self.field.from_coeffs(c).expect("reduced coordinates"))
                .collect(),
        )
    }

    /// `F_p`-span of the given elements, tagged with `scalars` (not checked).
    pub fn span_fp<'a, I>(&self, elems: I, scalars: ScalarField) -> Subspace
    where
        I: IntoIterator<Item = &'a AlgebraElement>,
    {
        let p = self.field.p();
        Subspace::new(
            Rref::span(p, self.dim_fp(), elems.into_iter().map(|e| self.to_fp(e))),
            scalars,
        )
    }

    /// Closure of the `F_p`-span under multiplication by `scalars`.
    fn span_over<'a, I>(&self, elems: I, multipliers: &[Scalar], flag: ScalarField) -> Subspace
    where
        I: IntoIterator<Item = &'a AlgebraElement>,
    {
        let p = self.field.p();
        let mut space = Rref::zero(p, self.dim_fp());
        for e in elems {
            for &m in multipliers {
                space.insert(&self.to_fp(&self.scale(m, e)));
            }
        }
        Subspace::new(space, flag)
    }

    /// `F`-span of the given elements.
    pub fn span_f<'a, I>(&self, elems: I) -> Subspace
    where
        I: IntoIterator<Item = &'a AlgebraElement>,
    {
        self.span_over(elems, &self.field.basis(), ScalarField::Full)
    }

    /// `F^sigma`-span of the given elements.
    pub fn span_fixed<'a, I>(&self, elems: I) -> Subspace
    where
        I: IntoIterator<Item = &'a AlgebraElement>,
    {
        self.span_over(
            elems,
            &self.field.fixed_subfield_basis(),
            ScalarField::Fixed,
        )
    }

    /// The `F`-span of an `F^sigma`-subspace (the hat operation).
    pub fn f_span(&self, s: &Subspace) -> Subspace {
        let elems = self.basis_of(s);
        self.span_f(&elems)
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::new(Rref::full(self.field.p(), self.dim_fp()), ScalarField::Full)
    }

    pub fn zero_space(&self) -> Subspace {
        Subspace::new(Rref::zero(self.field.p(), self.dim_fp()), ScalarField::Full)
    }

    /// The echelon basis of `s` over `F_p`, as algebra elements.
    pub fn basis_of(&self, s: &Subspace) -> Vec<AlgebraElement> {
        s.space.rows().iter().map(|r| self.from_fp(r)).collect()
    }

    pub fn contains(&self, s: &Subspace, a: &AlgebraElement) -> bool {
        s.space.contains(&self.to_fp(a))
    }

    pub fn sum(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let flag = meet_flags(a.scalars, b.scalars);
        Subspace::new(a.space.sum(&b.space), flag)
    }

    pub fn intersect(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let flag = meet_flags(a.scalars, b.scalars);
        Subspace::new(a.space.intersect(&b.space), flag)
    }

    /// Dimension over the subspace's declared scalar field.
    pub fn dim_of(&self, s: &Subspace) -> usize {
        match s.scalars {
            ScalarField::Full => s.dim_fp() / self.field.degree(),
            ScalarField::Fixed => s.dim_fp() / self.fixed_degree(),
        }
    }

    /// Dimension of an `F^sigma`-closed space over `F^sigma`.
    pub fn dim_fixed(&self, s: &Subspace) -> usize {
        s.dim_fp() / self.fixed_degree()
    }

    /// Every element of `s`, subject to the enumeration limit.
    pub fn elements_of(&self, s: &Subspace) -> Result<Vec<AlgebraElement>, Error> {
        let size = s.space.cardinality().unwrap_or(u64::MAX);
        if size > self.limits.max_group_order {
            return Err(Error::TooLarge {
                size,
                limit: self.limits.max_group_order,
            });
        }
        Ok(s.space.elements().iter().map(|v| self.from_fp(v)).collect())
    }

    pub fn is_closed_under_multiplication(&self, s: &Subspace) -> bool {
        let b = self.basis_of(s);
        b.iter()
            .all(|x| b.iter().all(|y| self.contains(s, &self.multiply(x, y))))
    }

    pub fn is_sigma_invariant(&self, s: &Subspace) -> bool {
        self.basis_of(s)
            .iter()
            .all(|x| self.contains(s, &self.apply_involution(x)))
    }

    pub fn is_f_closed(&self, s: &Subspace) -> bool {
        let fb = self.field.basis();
        self.basis_of(s)
            .iter()
            .all(|x| fb.iter().all(|&c| self.contains(s, &self.scale(c, x))))
    }

    pub fn is_fixed_closed(&self, s: &Subspace) -> bool {
        let fb = self.field.fixed_subfield_basis();
        self.basis_of(s)
            .iter()
            .all(|x| fb.iter().all(|&c| self.contains(s, &self.scale(c, x))))
    }

    // ----- validation ----------------------------------------------------

    /// Checks associativity, nilpotency and the involution axioms on the
    /// basis. Semilinearity holds by construction.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let e: Vec<AlgebraElement> = (0..d).map(|i| self.basis_element(i)).collect();
        let mut report = ValidationReport::default();
        for i in 0..d {
            for j in 0..d {
                let ij = self.multiply(&e[i], &e[j]);
                for k in 0..d {
                    let jk = self.multiply(&e[j], &e[k]);
                    if self.multiply(&ij, &e[k]) != self.multiply(&e[i], &jk) {
                        report.associativity.push((i, j, k));
                    }
                }
                let lhs = self.apply_involution(&ij);
                let rhs =
                    self.multiply(&self.apply_involution(&e[j]), &self.apply_involution(&e[i]));
                if lhs != rhs {
                    report.anti_multiplicative.push((i, j));
                }
            }
            if self.apply_involution(&self.apply_involution(&e[i])) != e[i] {
                report.involutive.push(i);
            }
        }
        // J^{d+1} = 0; computed directly so that validation does not rely on
        // the cached powers
        let full = self.full_space();
        let mut power = full.clone();
        for _ in 0..d {
            power = self.product_space(&power, &full);
            if power.is_zero() {
                break;
            }
        }
        report.nilpotent = power.is_zero();
        report
    }

    // ----- powers and subalgebras -----------------------------------------

    /// `F`-span of all products `xy`, `x in a`, `y in b`.
    pub fn product_space(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let ba = self.basis_of(a);
        let bb = self.basis_of(b);
        let mut space = Rref::zero(self.field.p(), self.dim_fp());
        for x in &ba {
            for y in &bb {
                space.insert(&self.to_fp(&self.multiply(x, y)));
            }
        }
        // products of F_p-bases of F-spaces already span an F-space; close
        // anyway in case a or b is only F^sigma-closed
        let s = Subspace::new(space, ScalarField::Full);
        self.f_span(&s)
    }

    /// Powers `L^1 = L, L^2, ...` of a subalgebra `L`, ending with the first
    /// zero power.
    pub fn powers_of(&self, l: &Subspace) -> Vec<Subspace> {
        let mut out = vec![l.clone()];
        while !out.last().unwrap().is_zero() {
            let next = self.product_space(out.last().unwrap(), l);
            out.push(next);
            if out.len() > self.dim() + 2 {
                break;
            }
        }
        out
    }

    /// `J^m` for `m >= 1`.
    pub fn ideal_power(&self, m: usize) -> Subspace {
        assert!(m >= 1, "powers start at 1");
        let powers = self
            .powers
            .get_or_init(|| self.powers_of(&self.full_space()));
        powers
            .get(m - 1)
            .cloned()
            .unwrap_or_else(|| self.zero_space())
    }

    /// Largest `n` with `J^n != 0` (0 for `J = 0`).
    pub fn nilpotency_class(&self) -> usize {
        self.class_of(&self.full_space())
    }

    pub fn class_of(&self, l: &Subspace) -> usize {
        self.powers_of(l)
            .iter()
            .take_while(|s| !s.is_zero())
            .count()
    }

    /// `C_W(sigma) = {a in W : sigma(a) = -a}` as an `F^sigma`-space.
    pub fn minus_fixed_space(&self, within: &Subspace) -> Result<Subspace, Error> {
        if !self.is_sigma_invariant(within) {
            return Err(Error::Domain("subspace is not sigma-invariant".into()));
        }
        Ok(self.eigenspace(within, false))
    }

    /// `{a in W : sigma(a) = a}`.
    pub fn plus_fixed_space(&self, within: &Subspace) -> Result<Subspace, Error> {
        if !self.is_sigma_invariant(within) {
            return Err(Error::Domain("subspace is not sigma-invariant".into()));
        }
        Ok(self.eigenspace(within, true))
    }

    fn eigenspace(&self, within: &Subspace, plus: bool) -> Subspace {
        let basis = self.basis_of(within);
        let images: Vec<Vec<u32>> = basis
            .iter()
            .map(|b| {
                let s = self.apply_involution(b);
                let v = if plus {
                    self.sub(&s, b)
                } else {
                    self.add(&s, b)
                };
                self.to_fp(&v)
            })
            .collect();
        let p = self.field.p();
        let combos = crate::linalg::nullspace(p, &images);
        let vectors = combos.into_iter().map(|c| {
            let mut v = vec![0; self.dim_fp()];
            for (row, &ci) in within.space.rows().iter().zip(&c) {
                crate::linalg::axpy(&mut v, ci, row, p);
            }
            v
        });
        Subspace::new(Rref::span(p, self.dim_fp(), vectors), ScalarField::Fixed)
    }

    /// `F`-core of an `F_p`-space: the largest `F`-subspace it contains.
    pub fn f_core(&self, s: &Subspace) -> Subspace {
        let mut core = s.space.clone();
        let f = &self.field;
        for c in f.basis().into_iter().skip(1) {
            let cinv = f.inv(c).expect("basis element is nonzero");
            let shifted = Rref::span(
                f.p(),
                self.dim_fp(),
                self.basis_of(s)
                    .iter()
                    .map(|b| self.to_fp(&self.scale(cinv, b))),
            );
            core = core.intersect(&shifted);
        }
        Subspace::new(core, ScalarField::Full)
    }

    // ----- Cayley transform ----------------------------------------------

    /// `sum_{k>=1} c_k a^k` as an element of `J`, stopping at the first zero
    /// power.
    fn power_series(&self, a: &AlgebraElement, coeff: impl Fn(usize) -> Scalar) -> AlgebraElement {
        let mut acc = self.zero();
        let mut pow = a.clone();
        let mut k = 1;
        while !pow.is_zero() {
            acc = self.add(&acc, &self.scale(coeff(k), &pow));
            pow = self.multiply(&pow, a);
            k += 1;
        }
        acc
    }

    /// Cayley transform `(1-a)(1+a)^{-1} = 1 - 2a + 2a^2 - ...`; returns the
    /// group element `1 + x` by its `x`.
    pub fn cayley(&self, a: &AlgebraElement) -> crate::group::GroupElement {
        let f = &self.field;
        let two = f.from_int(2);
        let x = self.power_series(a, |k| if k % 2 == 1 { f.neg(two) } else { two });
        crate::group::GroupElement(x)
    }

    /// Inverse Cayley transform `(1-g)(1+g)^{-1}`. With `g = 1 + x` this is
    /// `-(x/2)(1 + x/2)^{-1} = sum_{k>=1} (-x/2)^k`.
    pub fn cayley_inverse(&self, g: &crate::group::GroupElement) -> AlgebraElement {
        let f = &self.field;
        let minus_half = f.neg(f.inv(f.from_int(2)).expect("odd characteristic"));
        let y = self.scale(minus_half, &g.0);
        self.power_series(&y, |_| Scalar::ONE)
    }

    /// `Phi(Psi(a)) = a` and `Psi(Phi(1 + a)) = 1 + a` for every `a in J`.
    pub fn check_cayley_roundtrip(&self) -> Result<bool, Error> {
        for a in self.elements_of(&self.full_space())? {
            if self.cayley_inverse(&self.cayley(&a)) != a {
                return Ok(false);
            }
            let g = crate::group::GroupElement(a);
            if self.cayley(&self.cayley_inverse(&g)) != g {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `ab - ba in C_J(sigma)` for `a, b in C_J(sigma)`, checked on a basis.
    pub fn check_lie_closure(&self) -> Result<bool, Error> {
        let cj = self.minus_fixed_space(&self.full_space())?;
        let basis = self.basis_of(&cj);
        Ok(basis.iter().all(|a| {
            basis
                .iter()
                .all(|b| self.contains(&cj, &self.bracket(a, b)))
        }))
    }

    // ----- line decomposition and descent ---------------------------------

    /// Splits `outer` over `inner` into lines `L_i = inner + F^sigma u_i`.
    ///
    /// The `u_i` are taken greedily from the echelon basis of `outer`, so
    /// the result is canonical.
    pub fn line_decomposition(
        &self,
        outer: &Subspace,
        inner: &Subspace,
    ) -> Result<Vec<Line>, Error> {
        if !inner.is_subspace_of(outer) {
            return Err(Error::Domain(
                "inner space is not contained in outer".into(),
            ));
        }
        let inner = Subspace::new(inner.space.clone(), ScalarField::Fixed);
        let mut acc = inner.clone();
        let mut lines = Vec::new();
        for v in self.basis_of(outer) {
            if self.contains(&acc, &v) {
                continue;
            }
            let ray = self.span_fixed([&v]);
            acc = self.sum(&acc, &ray);
            lines.push(Line {
                u: v,
                space: self.sum(&inner, &ray),
            });
        }
        if !acc.same_as(outer) {
            return Err(Error::Consistency(
                "lines do not span the outer space".into(),
            ));
        }
        Ok(lines)
    }

    /// The codimension-one `sigma`-invariant ideal `J_0` of the subalgebra
    /// `j` attached to `s`, with `C_{J_0}(sigma) = s`.
    ///
    /// `J_0` is the largest `F`-subspace of `s + {a in j : sigma(a) = a}`. It
    /// always contains `F s + j^2`; the two agree when tau is nontrivial.
    pub fn build_j0(&self, j: &Subspace, s: &Subspace) -> Result<Subspace, Error> {
        let cj = self.minus_fixed_space(j)?;
        let powers = self.powers_of(j);
        let j2 = powers.get(1).cloned().unwrap_or_else(|| self.zero_space());
        let cj2 = self.minus_fixed_space(&j2)?;
        if !s.is_subspace_of(&cj) || !self.is_fixed_closed(s) {
            return Err(Error::Domain(
                "S is not an F^sigma-subspace of C_J(sigma)".into(),
            ));
        }
        if !cj2.is_subspace_of(s) {
            return Err(Error::Domain("S does not contain C_{J^2}(sigma)".into()));
        }
        if self.dim_fixed(&cj) != self.dim_fixed(s) + 1 {
            return Err(Error::Domain(
                "S must have codimension 1 in C_J(sigma)".into(),
            ));
        }
        let plus = self.plus_fixed_space(j)?;
        let j0 = self.f_core(&self.sum(s, &plus));
        let consistency = |what: &str| Err(Error::Consistency(format!("J_0: {what}")));
        if !self.sum(&self.f_span(s), &j2).is_subspace_of(&j0) {
            return consistency("does not contain F S + J^2");
        }
        if self.dim_of(&j0) + 1 != self.dim_of(j) {
            return consistency("codimension is not 1");
        }
        if !self.is_closed_under_multiplication(&j0) {
            return consistency("not multiplicatively closed");
        }
        if !self.is_sigma_invariant(&j0) {
            return consistency("not sigma-invariant");
        }
        if !self.minus_fixed_space(&j0)?.same_as(s) {
            return consistency("C_{J_0}(sigma) != S");
        }
        Ok(j0)
    }
}

fn meet_flags(a: ScalarField, b: ScalarField) -> ScalarField {
    if a == ScalarField::Full && b == ScalarField::Full {
        ScalarField::Full
    } else {
        ScalarField::Fixed
    }
}

/// One summand `L_i = inner + F^sigma u` of a line decomposition.
#[derive(Clone, Debug)]
pub struct Line {
    pub u: AlgebraElement,
    pub space: Subspace,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::examples::{fixture_b, make_example, Family};

    fn u3_flip() -> AlgebraSpec {
        make_example(Family::Flip, 3, 3).unwrap()
    }

    fn u4_symplectic() -> AlgebraSpec {
        make_example(Family::Symplectic, 4, 3).unwrap()
    }

    fn idx(spec: &AlgebraSpec, name: &str) -> usize {
        spec.basis_names().iter().position(|n| n == name).unwrap()
    }

    #[test]
    fn validates_examples() {
        let b = fixture_b();
        assert!(b.validate().passed());
        assert_eq!(b.nilpotency_class(), 1);
        let u3 = u3_flip();
        assert!(u3.validate().passed());
        assert_eq!(u3.nilpotency_class(), 2);
    }

    #[test]
    fn idempotent_is_not_nilpotent() {
        let field = Field::new(crate::field::FieldSpec::prime(3).unwrap()).unwrap();
        let spec = AlgebraSpec::from_parts(
            field,
            vec!["e".into()],
            vec![StructConst {
                i: 0,
                j: 0,
                k: 0,
                coeff: Scalar::ONE,
            }],
            vec![vec![Scalar::ONE]],
        )
        .unwrap();
        let report = spec.validate();
        assert!(!report.nilpotent);
        assert!(!report.passed());
    }

    #[test]
    fn matrix_unit_products() {
        let s = u3_flip();
        let e12 = s.basis_element(idx(&s, "e12"));
        let e23 = s.basis_element(idx(&s, "e23"));
        let e13 = s.basis_element(idx(&s, "e13"));
        assert_eq!(s.multiply(&e12, &e23), e13);
        assert!(s.multiply(&e23, &e12).is_zero());
        let b = fixture_b();
        let e = b.basis_element(0);
        assert!(b.multiply(&e, &e).is_zero());
    }

    #[test]
    fn ideal_powers() {
        let s = u3_flip();
        let e13 = s.basis_element(idx(&s, "e13"));
        assert!(s.ideal_power(2).same_as(&s.span_f([&e13])));
        assert!(s.ideal_power(3).is_zero());
        let u4 = make_example(Family::Flip, 4, 3).unwrap();
        let e14 = u4.basis_element(idx(&u4, "e14"));
        assert!(u4.ideal_power(3).same_as(&u4.span_f([&e14])));
        for m in 1..=4 {
            assert!(u4.is_sigma_invariant(&u4.ideal_power(m)));
            assert!(u4.ideal_power(m + 1).is_subspace_of(&u4.ideal_power(m)));
        }
    }

    #[test]
    fn flip_involution_on_u3() {
        let s = u3_flip();
        let e12 = s.basis_element(idx(&s, "e12"));
        let e23 = s.basis_element(idx(&s, "e23"));
        assert_eq!(s.apply_involution(&e12), e23);
    }

    #[test]
    fn minus_fixed_examples() {
        let b = fixture_b();
        let cj = b.minus_fixed_space(&b.full_space()).unwrap();
        assert_eq!(b.dim_fixed(&cj), 1);
        let s = u3_flip();
        let cj = s.minus_fixed_space(&s.full_space()).unwrap();
        // solving sigma(a) = -a by hand: a23 = -a12, a13 = 0
        let mut v = s.zero();
        v.0[idx(&s, "e12")] = Scalar::ONE;
        v.0[idx(&s, "e23")] = s.field().from_int(-1);
        assert!(cj.same_as(&s.span_fixed([&v])));
        let sp = u4_symplectic();
        let cj = sp.minus_fixed_space(&sp.full_space()).unwrap();
        assert_eq!(sp.dim_fixed(&cj), 4);
    }

    #[test]
    fn minus_fixed_rejects_non_invariant_input() {
        let s = u3_flip();
        let e12 = s.basis_element(idx(&s, "e12"));
        let line = s.span_f([&e12]);
        assert!(matches!(s.minus_fixed_space(&line), Err(Error::Domain(_))));
    }

    #[test]
    fn cayley_of_square_zero_element() {
        let s = u3_flip();
        let e13 = s.basis_element(idx(&s, "e13"));
        let g = s.cayley(&e13);
        assert_eq!(g.0, s.scale(s.field().from_int(-2), &e13));
        assert!(s.cayley(&s.zero()).0.is_zero());
        assert_eq!(s.cayley_inverse(&g), e13);
        assert!(s
            .cayley_inverse(&crate::group::GroupElement(s.zero()))
            .is_zero());
    }

    #[test]
    fn cayley_series_on_u3() {
        // a = e12 - e23: a^2 = -e13, so Psi(a) = 1 - 2a + 2a^2 = 1 - 2a - 2e13
        let s = u3_flip();
        let f = s.field();
        let mut a = s.zero();
        a.0[idx(&s, "e12")] = Scalar::ONE;
        a.0[idx(&s, "e23")] = f.from_int(-1);
        let g = s.cayley(&a);
        let mut expected = s.zero();
        expected.0[idx(&s, "e12")] = f.from_int(-2);
        expected.0[idx(&s, "e23")] = f.from_int(2);
        expected.0[idx(&s, "e13")] = f.from_int(-2);
        assert_eq!(g.0, expected);
        assert_eq!(s.cayley_inverse(&g), a);
    }

    #[test]
    fn cayley_inverse_of_negation() {
        let s = u4_symplectic();
        let g = s.cayley(&s.element_from_ints(&[1, 2, 0, 1, 1, 2]));
        let neg = s.cayley(&s.element_from_ints(&[-1, -2, 0, -1, -1, -2]));
        assert_eq!(s.group_mul(&g, &neg), crate::group::GroupElement(s.zero()));
    }

    #[test]
    fn line_decomposition_cases() {
        let sp = u4_symplectic();
        let cj = sp.minus_fixed_space(&sp.full_space()).unwrap();
        assert!(sp.line_decomposition(&cj, &cj).unwrap().is_empty());
        let cj2 = sp.minus_fixed_space(&sp.ideal_power(2)).unwrap();
        let lines = sp.line_decomposition(&cj, &cj2).unwrap();
        assert_eq!(lines.len(), sp.dim_fixed(&cj) - sp.dim_fixed(&cj2));
        for (i, l) in lines.iter().enumerate() {
            assert_eq!(sp.dim_fixed(&l.space), sp.dim_fixed(&cj2) + 1);
            assert!(cj2.is_subspace_of(&l.space) && l.space.is_subspace_of(&cj));
            for m in &lines[i + 1..] {
                assert!(sp.intersect(&l.space, &m.space).same_as(&cj2));
            }
        }
        let cj3 = sp.minus_fixed_space(&sp.ideal_power(3)).unwrap();
        let single = sp.line_decomposition(&cj2, &cj3).unwrap();
        assert_eq!(single.len(), sp.dim_fixed(&cj2) - sp.dim_fixed(&cj3));
        assert!(matches!(
            sp.line_decomposition(&cj2, &cj),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn line_decomposition_single_line_is_outer() {
        let sp = u4_symplectic();
        let cj3 = sp.minus_fixed_space(&sp.ideal_power(3)).unwrap();
        let zero = sp.zero_space();
        let lines = sp.line_decomposition(&cj3, &zero).unwrap();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].space.same_as(&cj3));
    }

    #[test]
    fn j0_for_square_zero_algebra() {
        // J^2 = 0 over F_9 with tau: J_0 = F S
        let spec = crate::cli::examples::square_zero_unitary(2).unwrap();
        let j = spec.full_space();
        let cj = spec.minus_fixed_space(&j).unwrap();
        let first = spec.basis_of(&cj)[0].clone();
        let s = spec.span_fixed([&first]);
        if spec.dim_fixed(&cj) == 2 {
            let j0 = spec.build_j0(&j, &s).unwrap();
            assert!(j0.same_as(&spec.f_span(&s)));
        }
        assert!(matches!(spec.build_j0(&j, &cj), Err(Error::Domain(_))));
    }
}
