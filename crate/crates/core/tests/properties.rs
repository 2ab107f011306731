use leftorder::action::conj_cone;
use leftorder::amalgam::{amalgam_normal_form, Amalgam};
use leftorder::cone::{
    cone_sign, conjugate_raw, integer_cone, klein_cones, lex_cone, slope_cone, Cone, Sign, Variant,
};
use leftorder::freeprod::{fp_project, kernel_decompose, FreeProduct2};
use leftorder::group::{sol_word, zvec_word, Group};
use leftorder::json::{cone_from_json, cone_to_json, parse_word, word_to_json};
use leftorder::ses::Ses;
use leftorder::word::Word;
use proptest::prelude::*;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, -3i64..=3), 0..max_len).prop_map(Word::from_pairs)
}

fn variant() -> impl Strategy<Value = Variant> {
    prop::sample::select(Variant::ALL.to_vec())
}

fn nonzero_pair(bound: i64) -> impl Strategy<Value = [i64; 2]> {
    (-bound..=bound, -bound..=bound).prop_filter("nonzero", |(a, b)| (*a, *b) != (0, 0)).prop_map(|(a, b)| [a, b])
}

fn sol_lex(a: [i64; 2], v: Variant, s: Sign) -> Cone {
    lex_cone(Ses::sol(), slope_cone(a, v).unwrap(), integer_cone(s)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_laws_hold_in_normal_form(u in word(3, 5), v in word(3, 5), w in word(3, 5)) {
        for g in [Group::sol(), Group::Klein, Group::FreeProduct { factors: vec![Group::zpow(1), Group::zpow(1)] }] {
            let rank = g.rank();
            let keep = |x: &Word| x.map_gens(|i| i % rank);
            let (u, v, w) = (keep(&u), keep(&v), keep(&w));
            let uv_w = g.mul(&g.mul(&u, &v).unwrap(), &w).unwrap();
            let u_vw = g.mul(&u, &g.mul(&v, &w).unwrap()).unwrap();
            prop_assert_eq!(&uv_w, &u_vw);
            prop_assert!(g.mul(&u, &g.inv(&u).unwrap()).unwrap().is_identity());
            let n = g.normalize(&u).unwrap();
            prop_assert_eq!(g.normalize(&n).unwrap(), n);
        }
    }

    #[test]
    fn slope_cones_are_antisymmetric(a in nonzero_pair(6), v in variant(), m in -8i64..=8, n in -8i64..=8) {
        prop_assume!((m, n) != (0, 0));
        let c = slope_cone(a, v).unwrap();
        let s = cone_sign(&c, &zvec_word(&[m, n])).unwrap();
        prop_assert_eq!(cone_sign(&c, &zvec_word(&[-m, -n])).unwrap(), s.flip());
    }

    #[test]
    fn slope_cones_are_closed(a in nonzero_pair(6), v in variant(), p in nonzero_pair(6), q in nonzero_pair(6)) {
        let c = slope_cone(a, v).unwrap();
        let sum = [p[0] + q[0], p[1] + q[1]];
        prop_assume!(sum != [0, 0]);
        let pos = |x: [i64; 2]| cone_sign(&c, &zvec_word(&x)).unwrap() == Sign::Positive;
        if pos(p) && pos(q) {
            prop_assert!(pos(sum));
        }
    }

    #[test]
    fn lex_sign_reads_quotient_then_kernel(a in nonzero_pair(4), v in variant(), w in word(3, 6)) {
        let ses = Ses::sol();
        let g = ses.total();
        let w = g.normalize(&w).unwrap();
        prop_assume!(!w.is_identity());
        let c = sol_lex(a, v, Sign::Negative);
        let (vec, k) = g.sol_coords(&w).unwrap();
        let expected = if k != 0 {
            if k > 0 { Sign::Negative } else { Sign::Positive }
        } else {
            cone_sign(&slope_cone(a, v).unwrap(), &zvec_word(&vec)).unwrap()
        };
        prop_assert_eq!(cone_sign(&c, &w).unwrap(), expected);
    }

    #[test]
    fn conjugation_composes(a in nonzero_pair(3), v in variant(), g in word(3, 3), h in word(3, 3), w in word(3, 5)) {
        let sol = Group::sol();
        let (g, h, w) = (sol.normalize(&g).unwrap(), sol.normalize(&h).unwrap(), sol.normalize(&w).unwrap());
        prop_assume!(!w.is_identity());
        let c = sol_lex(a, v, Sign::Positive);
        let stepwise = conjugate_raw(&conjugate_raw(&c, &g).unwrap(), &h).unwrap();
        let at_once = conj_cone(&c, &sol.mul(&h, &g).unwrap()).unwrap();
        prop_assert_eq!(cone_sign(&stepwise, &w).unwrap(), cone_sign(&at_once, &w).unwrap());
    }

    #[test]
    fn klein_conjugates_are_klein_cones(g in word(2, 4), w in word(2, 5)) {
        let k = Group::Klein;
        let w = k.normalize(&w).unwrap();
        prop_assume!(!w.is_identity());
        for c in klein_cones() {
            let simple = conj_cone(&c, &g).unwrap();
            let closed = matches!(simple, Cone::Klein { .. });
            prop_assert!(closed, "conjugate did not simplify: {:?}", simple);
            let raw = conjugate_raw(&c, &g).unwrap();
            prop_assert_eq!(cone_sign(&simple, &w).unwrap(), cone_sign(&raw, &w).unwrap());
        }
    }

    #[test]
    fn free_product_projection_is_a_homomorphism(u in word(2, 6), v in word(2, 6)) {
        let fp = FreeProduct2::z_star_z();
        let g = fp.group();
        let (pu, pv) = (fp_project(&fp, &u).unwrap(), fp_project(&fp, &v).unwrap());
        let puv = fp_project(&fp, &g.mul(&u, &v).unwrap()).unwrap();
        prop_assert_eq!(puv.0, fp.g.mul(&pu.0, &pv.0).unwrap());
        prop_assert_eq!(puv.1, fp.h.mul(&pu.1, &pv.1).unwrap());
    }

    #[test]
    fn kernel_words_decompose_and_expand_back(u in word(2, 6)) {
        let fp = FreeProduct2::z_star_z();
        let g = fp.group();
        let (pg, ph) = fp_project(&fp, &u).unwrap();
        // u · (g h)⁻¹ lies in the kernel
        let k = g.mul(&u, &g.inv(&fp.lift_g(&pg).concat(&fp.lift_h(&ph))).unwrap()).unwrap();
        let basis = kernel_decompose(&fp, &k).unwrap();
        prop_assert_eq!(basis.expand(&fp).unwrap(), k);
    }

    #[test]
    fn amalgam_forms_are_stable(m in 1i64..=4, n in 1i64..=4, u in word(2, 6)) {
        let am = Amalgam::cyclic(m, n).unwrap();
        let nf = amalgam_normal_form(&am, &u).unwrap();
        prop_assert_eq!(amalgam_normal_form(&am, &nf.to_word(&am)).unwrap(), nf.clone());
        for pair in nf.factors.windows(2) {
            prop_assert_ne!(pair[0].0, pair[1].0);
        }
    }

    #[test]
    fn descriptors_round_trip(a in nonzero_pair(9), v in variant(), s in any::<bool>(), by in word(3, 3)) {
        let sign = if s { Sign::Positive } else { Sign::Negative };
        let c = conjugate_raw(&sol_lex(a, v, sign), &Group::sol().normalize(&by).unwrap()).unwrap();
        let back = cone_from_json(&cone_to_json(&c)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn words_round_trip(m in -5i64..=5, n in -5i64..=5, k in -3i64..=3) {
        let g = Group::sol();
        let w = sol_word([m, n], k);
        let text = word_to_json(&g, &w).to_string();
        prop_assert_eq!(parse_word(&g, &text).unwrap(), w.clone());
        prop_assert_eq!(parse_word(&g, &g.display_word(&w)).unwrap(), w);
    }
}
