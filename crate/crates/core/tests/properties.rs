//! Invariants as property tests.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use torus_forms::coinvariants::{
    coinvariants_h_with, coinvariants_s_with, presentation_generators, proof_moves, verify_rewrite, Sign, SymTensorModule,
};
use torus_forms::frobenius::{frobenius_oracle, CoveringMap, FrobeniusModule, TheoremBModule};
use torus_forms::laurent::epsilon;
use torus_forms::quadratic::QuotientClass;
use torus_forms::snf::{cokernel, smith_normal_form};
use torus_forms::unitary::{det_is_norm_one, elementary_generators, membership_by_conditions, random_word};
use torus_forms::whitehead::{normalize, phi_omega_defect, RawTerm};
use torus_forms::{BlockMatrix, FormParameter, IntMatrix, LaurentPoly, PolyMatrix, QuadraticModule};

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, -6i64..=6), 0..5).prop_map(LaurentPoly::from_terms)
}

fn vector(len: usize) -> impl Strategy<Value = Vec<LaurentPoly>> {
    prop::collection::vec(laurent(), len)
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn unit() -> impl Strategy<Value = LaurentPoly> {
    (prop::bool::ANY, -4i64..=4).prop_map(|(neg, e)| LaurentPoly::monomial(if neg { -1 } else { 1 }, e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bar_is_a_ring_involution(p in laurent(), q in laurent(), r in laurent()) {
        prop_assert_eq!(p.bar().bar(), p.clone());
        prop_assert_eq!((&p + &q).bar(), &p.bar() + &q.bar());
        prop_assert_eq!((&(&p * &q) * &r).bar(), &(&p.bar() * &q.bar()) * &r.bar());
    }

    #[test]
    fn text_and_json_round_trip(p in laurent()) {
        prop_assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p.clone());
        prop_assert_eq!(LaurentPoly::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn min_parameter_is_closed(n in 3i64..=8, a in laurent(), b in laurent(), u in unit()) {
        let param = FormParameter::min(n);
        let eps = BigInt::from(epsilon(n));
        let x = &a - &a.bar().scale(&eps);
        let y = &b - &b.bar().scale(&eps);
        prop_assert!(param.contains(&x));
        prop_assert!(param.contains(&(&x + &y)));
        prop_assert!(param.contains(&(&(&u * &x) * &u.bar())));
    }

    #[test]
    fn min_membership_is_constructive(n in prop::sample::select(vec![4i64, 5, 6, 8, 9]), a in laurent(), p in laurent()) {
        let param = FormParameter::min(n);
        prop_assert!(param.contains(&param.symmetrize(&a)));
        // Every member is reconstructed from its positive part and half its constant term.
        let candidate = if param.contains(&p) { p } else { param.symmetrize(&p) };
        let mut pre = LaurentPoly::zero();
        for (e, c) in candidate.terms() {
            if e > 0 {
                pre.add_term(e, c.clone());
            }
        }
        if epsilon(n) == -1 {
            pre.add_term(0, candidate.coeff(0) / 2);
        }
        prop_assert_eq!(param.symmetrize(&pre), candidate);
    }

    #[test]
    fn quadratic_axioms_on_hyperbolic(n in 3i64..=6, x in vector(4), y in vector(4)) {
        let q = QuadraticModule::hyperbolic(2, n, FormParameter::min(n));
        let sum: Vec<_> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lxy = q.eval_lambda(&x, &y).unwrap();
        let expected: QuotientClass = &(&q.eval_q(&x).unwrap() + &q.eval_q(&y).unwrap()) + &q.class(&lxy);
        prop_assert_eq!(q.eval_q(&sum).unwrap(), expected);
        prop_assert_eq!(lxy.bar(), q.eval_lambda(&y, &x).unwrap().scale(&BigInt::from(epsilon(n))));
    }

    #[test]
    fn isometries_compose_and_invert(n in 3i64..=6, s1 in 0u64..500, s2 in 0u64..500) {
        let q = QuadraticModule::hyperbolic(2, n, FormParameter::min(n));
        let a = random_word(2, n, 3, s1).unwrap();
        let b = random_word(2, n, 3, s2).unwrap();
        prop_assert!(q.is_isometry(a.mul(&b).unwrap().matrix()).unwrap());
        prop_assert!(q.is_isometry(a.inverse().unwrap().matrix()).unwrap());
    }

    #[test]
    fn unitary_words_are_closed(n in 3i64..=7, g in 2usize..=3, s1 in 0u64..1000, s2 in 0u64..1000) {
        let p = FormParameter::min(n);
        let a = random_word(g, n, 4, s1).unwrap();
        let b = random_word(g, n, 4, s2).unwrap();
        let ab = a.mul(&b).unwrap();
        prop_assert!(membership_by_conditions(&ab, n, p));
        prop_assert!(membership_by_conditions(&a.inverse().unwrap(), n, p));
        prop_assert!(det_is_norm_one(&ab).unwrap());
        let phi = torus_forms::quadratic::hyperbolic_gram(g, n);
        prop_assert_eq!(&(ab.matrix() * &phi) * &ab.matrix().dagger(), phi);
    }

    #[test]
    fn normalize_is_idempotent_and_linear(
        n in 3i64..=7,
        terms in prop::collection::vec((-3i64..=3, (-2i64..=2, 0usize..4), (-2i64..=2, 0usize..4)), 1..6),
        split in 0usize..6,
    ) {
        let raw: Vec<RawTerm> = terms.iter().map(|&(c, a, b)| RawTerm::new(c, a, b)).collect();
        let whole = normalize(n, 2, 0, &raw).unwrap();
        let split = split.min(raw.len());
        let parts = normalize(n, 2, 0, &raw[..split]).unwrap().add(&normalize(n, 2, 0, &raw[split..]).unwrap()).unwrap();
        prop_assert_eq!(&whole, &parts);
        let again: Vec<RawTerm> = whole.terms().iter().map(|(l, c)| RawTerm::new(c.clone(), (l.a, l.i), (0, l.j))).collect();
        prop_assert_eq!(normalize(n, 2, 0, &again).unwrap(), whole);
    }

    #[test]
    fn omega_stabilizer_is_closed(n in 3i64..=7, s1 in 0u64..500, s2 in 0u64..500) {
        let a = random_word(2, n, 3, s1).unwrap();
        let b = random_word(2, n, 3, s2).unwrap();
        prop_assert!(phi_omega_defect(&a, n).unwrap().is_zero());
        prop_assert!(phi_omega_defect(&a.mul(&b).unwrap(), n).unwrap().is_zero());
    }

    #[test]
    fn smith_form_certificate(rows in small_matrix()) {
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.try_mul(&m).unwrap().try_mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn cokernel_ignores_permutations(rows in small_matrix(), seed in any::<u64>()) {
        let m = IntMatrix::from_rows(&rows);
        let mut order: Vec<usize> = (0..rows.len()).collect();
        let mut cols: Vec<usize> = (0..rows[0].len()).collect();
        let rot_r = (seed as usize) % order.len();
        let rot_c = (seed as usize / 7) % cols.len();
        order.rotate_left(rot_r);
        cols.rotate_left(rot_c);
        cols.reverse();
        let permuted: Vec<Vec<i64>> = order.iter().map(|&i| cols.iter().map(|&j| rows[i][j]).collect()).collect();
        prop_assert_eq!(cokernel(&m), cokernel(&IntMatrix::from_rows(&permuted)));
    }

    #[test]
    fn covering_labels_are_bijective(d in 1u64..=6, g in 1usize..=4) {
        prop_assert!(CoveringMap::new(d, g).unwrap().is_label_bijection());
    }

    #[test]
    fn frobenius_is_multiplicative(d in 1u64..=4, e in 1u64..=4, a in 1i64..=12, n in 3i64..=4) {
        let fe = frobenius_oracle(e, a, n, 2).unwrap();
        let composite = match fe.max_exponent() {
            Some(b) if b > 0 => frobenius_oracle(d, b, n, 2).unwrap().scale(&fe.coeff(b)),
            _ => LaurentPoly::zero(),
        };
        prop_assert_eq!(composite, frobenius_oracle(d * e, a, n, 2).unwrap());
    }
}

#[test]
fn lambda_and_phi_kill_relations() {
    for n in 3..=6 {
        let gens = presentation_generators(3, n).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let module = SymTensorModule::new(sign, n, 3, 3).unwrap();
            let (relations, _) = module.relations(&gens);
            for r in &relations {
                assert!(module.lambda_invariant(r).is_zero());
                if sign == Sign::torsion_sign(n) {
                    assert_eq!(module.phi_invariant(r).unwrap(), 0);
                }
            }
        }
    }
}

#[test]
fn rewrite_certifies_the_presentation() {
    for n in 3..=6 {
        for sign in [Sign::Plus, Sign::Minus] {
            let module = SymTensorModule::new(sign, n, 3, 4).unwrap();
            assert!(verify_rewrite(&module, &presentation_generators(3, n).unwrap()).unwrap());
            assert!(verify_rewrite(&module, &proof_moves(3, n, 4).unwrap()).unwrap());
        }
    }
}

#[test]
fn witnesses_are_independent() {
    // The rewrite sends the witness for slot a to the a-th unit vector.
    for n in 3..=6 {
        for sign in [Sign::Plus, Sign::Minus] {
            let module = SymTensorModule::new(sign, n, 3, 4).unwrap();
            for e in 0..=4 {
                let image = module.rewrite(&module.witness(0, e));
                let mut expected = vec![0; 5];
                expected[e as usize] = 1;
                assert_eq!(image, expected, "n = {n}, sign {sign}, e = {e}");
            }
        }
    }
}

#[test]
fn enlarging_the_generators_never_enlarges_the_group() {
    let g = 3;
    for n in [3, 4] {
        let all = presentation_generators(g, n).unwrap();
        let small = elementary_generators(g, n, 0).unwrap();
        let order = |r: &torus_forms::AbelianGroup| (r.free_rank, r.torsion.len());
        for sign in [Sign::Plus, Sign::Minus] {
            let big = coinvariants_s_with(sign, n, g, 3, &all).unwrap().computed;
            let few = coinvariants_s_with(sign, n, g, 3, &small).unwrap().computed;
            let fewer = coinvariants_s_with(sign, n, g, 3, &small[..small.len() / 2]).unwrap().computed;
            assert!(order(&big) <= order(&few), "{big} vs {few}");
            assert!(order(&few) <= order(&fewer), "{few} vs {fewer}");
        }
        let h_all = coinvariants_h_with(g, 2, &all).unwrap().computed;
        let h_few = coinvariants_h_with(g, 2, &small[..small.len() / 3]).unwrap().computed;
        assert!(h_all.free_rank <= h_few.free_rank);
        assert!(h_all.is_trivial());
    }
}

#[test]
fn theorem_b_module_is_not_tame_but_phi_class_is_fixed() {
    for p in [2u64, 3, 5] {
        let m = TheoremBModule::new(p, 6).unwrap();
        let module = m.to_module(&[2, 3, 4, 5, 7]).unwrap();
        assert!(module.is_multiplicative().unwrap());
        assert!(!module.is_tame().unwrap().tame);
    }
    assert!(FrobeniusModule::multiplication(&[2, 3]).is_multiplicative().unwrap());
    for d in 2..=5 {
        assert_eq!(torus_forms::frobenius::frobenius_on_phi_class(d, 4, 2).unwrap(), 1);
    }
}

#[test]
fn identity_and_sigma_are_unitary_for_every_parameter() {
    for n in 3..=7 {
        for p in [FormParameter::min(n), FormParameter::full(n), FormParameter::max(n)] {
            assert!(membership_by_conditions(&BlockMatrix::identity(3), n, p));
            assert!(membership_by_conditions(&torus_forms::unitary::sigma(n), n, p));
        }
    }
    assert!(PolyMatrix::identity(2).det().unwrap().is_one());
}
