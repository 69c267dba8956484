use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use pfister_core::certifier::{
    self, audit_certificate, enumerate_quotient, verify_certificate, Conclusion,
};
use pfister_core::involution::build_involution_algebra;
use pfister_core::oracle::{self, SearchBudget};
use pfister_core::quadform::{
    self, check_isotropy_witness, check_representation_witness, hilbert, pfister_slot_transform,
    PfisterForm, QuadraticForm, SlotRule,
};
use pfister_core::{Element, Field, TriState};

fn nonzero(bound: i64) -> impl Strategy<Value = i64> {
    (-bound..=bound).prop_filter("nonzero", |n| *n != 0)
}

fn rational(bound: i64) -> impl Strategy<Value = BigRational> {
    (nonzero(bound), 1..=bound)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn tower() -> Field {
    Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap()
}

fn tower_class() -> impl Strategy<Value = Element> {
    let classes = tower().enumerate_square_classes().unwrap();
    (0..classes.len()).prop_map(move |i| classes[i].rep.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hilbert_product_formula(a in rational(500), b in rational(500)) {
        let places = hilbert::relevant_places(&[a.clone(), b.clone()]).unwrap();
        let prod: i8 = places.iter().map(|v| quadform::hilbert_symbol(&a, &b, v).unwrap()).product();
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_symbol_is_bilinear(a in rational(60), b in rational(60), c in rational(60), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let v = pfister_core::ValuationRef::PAdicPlace(p);
        let s = |x: &BigRational, y: &BigRational| quadform::hilbert_symbol(x, y, &v).unwrap();
        prop_assert_eq!(s(&a, &b) * s(&a, &c), s(&a, &(&b * &c)));
        prop_assert_eq!(s(&a, &b), s(&b, &a));
        prop_assert_eq!(s(&a, &(-&a)), 1);
    }

    #[test]
    fn rational_decider_matches_oracle(coeffs in prop::collection::vec(rational(12), 1..=3)) {
        let f = Field::rationals();
        let q = QuadraticForm::new(&f, coeffs.iter().map(|c| f.rational(c).unwrap()).collect()).unwrap();
        let verdict = quadform::isotropy(&q).unwrap();
        let zero = oracle::brute_isotropy_rational(&coeffs, &SearchBudget::with_height(150));
        prop_assert_eq!(verdict.is_yes(), zero.is_some());
        if let TriState::Yes { witness } = &verdict {
            prop_assert!(check_isotropy_witness(&f, q.coeffs(), witness).unwrap());
        }
    }

    #[test]
    fn two_squares_agree_with_factoring(n in 1u64..3000) {
        let f = Field::rationals();
        let x = f.int(n as i64);
        let r = quadform::is_sum_of_two_squares(&f, &x).unwrap();
        prop_assert_eq!(r.is_yes(), oracle::two_squares_by_factoring(n));
        if let TriState::Yes { witness } = &r {
            prop_assert!(quadform::check_two_squares_witness(&f, &x, witness).unwrap());
        }
    }

    #[test]
    fn square_reduction(n in nonzero(5000), d in 1i64..200) {
        let f = Field::rationals();
        let x = f.rational(&BigRational::new(BigInt::from(n), BigInt::from(d))).unwrap();
        let (rep, root) = f.reduce_squares(&x).unwrap();
        prop_assert_eq!(f.mul(&rep, &f.square(&root)), x.clone());
        prop_assert_eq!(f.square_class(&x).unwrap(), f.square_class(&rep).unwrap());
    }

    #[test]
    fn slot_rules_preserve_isometry(a in nonzero(30), b in nonzero(30), c in nonzero(30), i in 1usize..3, mix in any::<bool>()) {
        let f = Field::rationals();
        let p = PfisterForm::new(&f, vec![f.int(a), f.int(b), f.int(c)]).unwrap();
        let rule = if mix { SlotRule::MixAdjacent(i) } else { SlotRule::Swap(i) };
        let r = pfister_slot_transform(&p, rule).unwrap();
        let (x, y) = (p.expand().rational_coeffs().unwrap(), r.expand().rational_coeffs().unwrap());
        prop_assert!(quadform::isometric(&x, &y).unwrap());
    }

    #[test]
    fn tower_decider_matches_oracle(xs in prop::collection::vec(tower_class(), 1..=5)) {
        let f = tower();
        let q = QuadraticForm::new(&f, xs.clone()).unwrap();
        let verdict = quadform::isotropy(&q).unwrap();
        prop_assert_eq!(verdict.is_yes(), oracle::tower_isotropic(&f, &xs).unwrap());
        if let TriState::Yes { witness } = &verdict {
            prop_assert!(check_isotropy_witness(&f, q.coeffs(), witness).unwrap());
        }
    }

    #[test]
    fn pfister_values_form_a_group(a in tower_class(), b in tower_class(), x in tower_class(), y in tower_class()) {
        let f = tower();
        let q = PfisterForm::new(&f, vec![a, b]).unwrap().expand();
        let rx = quadform::represents(&q, &x).unwrap();
        let ry = quadform::represents(&q, &y).unwrap();
        prop_assert!(!rx.is_unknown() && !ry.is_unknown());
        let xy = f.mul(&x, &y);
        let rxy = quadform::represents(&q, &xy).unwrap();
        if rx.is_yes() && ry.is_yes() {
            prop_assert!(rxy.is_yes());
            prop_assert!(check_representation_witness(&f, q.coeffs(), &xy, rxy.witness().unwrap()).unwrap());
        }
        if quadform::isotropy(&q).unwrap().is_yes() {
            prop_assert!(rx.is_yes());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quotient_invariants(a in tower_class(), b in tower_class(), c in tower_class()) {
        let f = tower();
        let Ok(alg) = build_involution_algebra(&a, &b, &c, &f) else {
            // only a square -c is rejected
            prop_assert!(f.is_square(&f.neg(&c)).unwrap());
            return Ok(());
        };
        prop_assert_eq!(alg.disc_sigma.clone(), f.square_class(&f.neg(&c)).unwrap());
        let rep = enumerate_quotient(&alg).unwrap();
        prop_assert!(rep.k_independent);
        prop_assert!(rep.h_subset_gplus);
        prop_assert!(rep.quotient_order.is_power_of_two());
        prop_assert!(rep.gplus.contains(&f.one_class().label));
    }

    #[test]
    fn certificates_replay(a in tower_class(), b in tower_class(), c in tower_class()) {
        let f = tower();
        let cert = certifier::certify_witness(&a, &b, &c, &f).unwrap();
        let back = certifier::Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(verify_certificate(&back).unwrap().ok);
        prop_assert!(audit_certificate(&back).unwrap().ok);
        if cert.conclusion == Conclusion::CertifiedNontrivial {
            let alg = build_involution_algebra(&a, &b, &c, &f).unwrap();
            let rep = enumerate_quotient(&alg).unwrap();
            prop_assert!(rep.c_in_gplus_minus_h);
        }
    }
}
