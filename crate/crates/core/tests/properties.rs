use proptest::prelude::*;

use invgroup::algebra::{AlgebraElement, AlgebraSpec};
use invgroup::cli::{emit_algebra, make_example, parse_algebra, Family};
use invgroup::field::DEFAULT_MAX_FIELD_ORDER;
use invgroup::{Cyclotomic, Field, FieldSpec, Limits, Scalar};

fn field(p: u32, f: u32, tau_order: u32) -> Field {
    Field::new(FieldSpec::with_default_modulus(p, f, tau_order).unwrap()).unwrap()
}

fn nth(field: &Field, k: u32) -> Scalar {
    field.elements().nth((k % field.order()) as usize).unwrap()
}

fn element(spec: &AlgebraSpec, seed: &[u32]) -> AlgebraElement {
    let f = spec.field();
    spec.element(
        (0..spec.dim())
            .map(|i| nth(f, seed[i % seed.len()].wrapping_add(i as u32 * 7919)))
            .collect(),
    )
    .unwrap()
}

fn examples() -> Vec<AlgebraSpec> {
    vec![
        make_example(Family::Flip, 4, 5).unwrap(),
        make_example(Family::Symplectic, 4, 3).unwrap(),
        make_example(Family::Unitary, 3, 9).unwrap(),
        make_example(Family::Unitary, 4, 25).unwrap(),
    ]
}

proptest! {
    #[test]
    fn field_axioms(a in any::<u32>(), b in any::<u32>(), c in any::<u32>(), which in 0usize..4) {
        let fields = [field(3, 1, 1), field(3, 2, 2), field(5, 2, 2), field(7, 2, 1)];
        let f = &fields[which];
        let (a, b, c) = (nth(f, a), nth(f, b), nth(f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Scalar::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != Scalar::ZERO {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
        }
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }

    #[test]
    fn tau_is_an_automorphism_of_the_declared_order(a in any::<u32>(), b in any::<u32>(), which in 0usize..2) {
        let fields = [field(3, 2, 2), field(5, 2, 2)];
        let f = &fields[which];
        let (a, b) = (nth(f, a), nth(f, b));
        prop_assert_eq!(f.tau(f.mul(a, b)), f.mul(f.tau(a), f.tau(b)));
        prop_assert_eq!(f.tau(f.add(a, b)), f.add(f.tau(a), f.tau(b)));
        prop_assert_eq!(f.tau(f.tau(a)), a);
        let fixed = f.fixed_subfield();
        prop_assert_eq!(fixed.len() as u64, f.fixed_order());
        prop_assert_eq!(fixed.contains(&a), f.tau(a) == a);
    }

    #[test]
    fn involution_axioms(seed_a in prop::collection::vec(any::<u32>(), 1..12),
                         seed_b in prop::collection::vec(any::<u32>(), 1..12),
                         alpha in any::<u32>(), which in 0usize..4) {
        let spec = &examples()[which];
        let f = spec.field();
        let (a, b) = (element(spec, &seed_a), element(spec, &seed_b));
        let s = |x: &AlgebraElement| spec.apply_involution(x);
        prop_assert_eq!(s(&spec.multiply(&a, &b)), spec.multiply(&s(&b), &s(&a)));
        prop_assert_eq!(s(&s(&a)), a.clone());
        prop_assert_eq!(s(&spec.add(&a, &b)), spec.add(&s(&a), &s(&b)));
        let alpha = nth(f, alpha);
        prop_assert_eq!(s(&spec.scale(alpha, &a)), spec.scale(f.tau(alpha), &s(&a)));
    }

    #[test]
    fn cayley_round_trip(seed in prop::collection::vec(any::<u32>(), 1..12), which in 0usize..4) {
        let spec = &examples()[which];
        let a = element(spec, &seed);
        let g = spec.cayley(&a);
        prop_assert_eq!(spec.cayley_inverse(&g), a.clone());
        // Psi(-a) = Psi(a)^{-1} and sigma(Psi(a)) = Psi(sigma(a))
        let neg = spec.scale(spec.field().from_int(-1), &a);
        prop_assert_eq!(spec.cayley(&neg), spec.group_inv(&g));
        let sa = spec.apply_involution(&a);
        prop_assert_eq!(spec.sigma(&g), spec.cayley(&sa));
    }

    #[test]
    fn fixed_points_correspond_under_cayley(seed in prop::collection::vec(any::<u32>(), 1..12), which in 0usize..4) {
        let spec = &examples()[which];
        let a = element(spec, &seed);
        let anti = spec.sub(&a, &spec.apply_involution(&a));
        let g = spec.cayley(&anti);
        prop_assert!(spec.is_sigma_fixed(&g));
    }

    #[test]
    fn group_axioms(x in prop::collection::vec(any::<u32>(), 1..12),
                    y in prop::collection::vec(any::<u32>(), 1..12),
                    z in prop::collection::vec(any::<u32>(), 1..12), which in 0usize..4) {
        let spec = &examples()[which];
        let g = spec.cayley(&element(spec, &x));
        let h = spec.cayley(&element(spec, &y));
        let k = spec.cayley(&element(spec, &z));
        prop_assert_eq!(spec.group_mul(&spec.group_mul(&g, &h), &k), spec.group_mul(&g, &spec.group_mul(&h, &k)));
        prop_assert!(spec.group_mul(&g, &spec.group_inv(&g)).is_identity());
        // g -> g^sigma is an automorphism
        let gh = spec.group_mul(&g, &h);
        prop_assert_eq!(spec.sigma_act(&gh), spec.group_mul(&spec.sigma_act(&g), &spec.sigma_act(&h)));
    }

    #[test]
    fn text_format_round_trip(family in 0usize..3, n in 2usize..6, q in prop::sample::select(vec![3u64, 5, 7, 9, 25])) {
        let family = [Family::Flip, Family::Symplectic, Family::Unitary][family];
        let Ok(spec) = make_example(family, n, q) else { return Ok(()) };
        let text = emit_algebra(&spec);
        let parsed = parse_algebra(&text, Limits::default(), DEFAULT_MAX_FIELD_ORDER).unwrap();
        prop_assert!(parsed == spec);
        prop_assert_eq!(emit_algebra(&parsed), text);
    }

    #[test]
    fn cyclotomic_ring_axioms(a in prop::collection::vec(-5i64..5, 9),
                              b in prop::collection::vec(-5i64..5, 9),
                              c in prop::collection::vec(-5i64..5, 9)) {
        let (a, b, c) = (Cyclotomic::from_dense(9, a), Cyclotomic::from_dense(9, b), Cyclotomic::from_dense(9, c));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.lift(27).lower(9), Some(a.clone()));
    }
}
