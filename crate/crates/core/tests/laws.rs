use affine_trees::examples;
use affine_trees::lyndon::{ancillary_c, LengthFunction, WordLength};
use affine_trees::oag::{HalfElement, OagAutomorphism, OagElement};
use affine_trees::words::{Alphabet, Letter, Word};
use proptest::prelude::*;

fn int3() -> impl Strategy<Value = OagElement> {
    prop::array::uniform3(-50i64..50).prop_map(|c| OagElement::int_lex(&c))
}

fn dyadic() -> impl Strategy<Value = OagElement> {
    (-200i64..200, 0u32..6).prop_map(|(n, k)| OagElement::localized(2, n, 1 << k).unwrap())
}

fn laurent() -> impl Strategy<Value = OagElement> {
    prop::collection::vec((-3i64..4, -9i64..10), 0..4).prop_map(|t| OagElement::laurent(&t))
}

fn word(gens: u16, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>()), 0..max)
        .prop_map(|v| Word::reduce(v.into_iter().map(|(g, i)| Letter::new(g, i))))
}

fn group_laws(x: &OagElement, y: &OagElement, z: &OagElement) {
    let xy = x.try_add(y).unwrap();
    assert_eq!(xy, y.try_add(x).unwrap());
    assert_eq!(
        xy.try_add(z).unwrap(),
        x.try_add(&y.try_add(z).unwrap()).unwrap()
    );
    assert!(x.try_add(&x.neg()).unwrap().is_zero());
    // Translation invariance of the order.
    let lt = x.try_lt(y).unwrap();
    assert_eq!(
        lt,
        x.try_add(z)
            .unwrap()
            .try_lt(&y.try_add(z).unwrap())
            .unwrap()
    );
    assert_eq!(x.try_sub(y).unwrap().is_negative(), lt);
}

fn aut_laws(a: &OagAutomorphism, x: &OagElement, y: &OagElement) {
    let ax = a.apply(x).unwrap();
    let ay = a.apply(y).unwrap();
    assert_eq!(
        a.apply(&x.try_add(y).unwrap()).unwrap(),
        ax.try_add(&ay).unwrap()
    );
    assert_eq!(x.try_lt(y).unwrap(), ax.try_lt(&ay).unwrap());
    assert_eq!(a.inverse().unwrap().apply(&ax).unwrap(), *x);
}

proptest! {
    #[test]
    fn int_lex_group(x in int3(), y in int3(), z in int3()) {
        group_laws(&x, &y, &z);
    }

    #[test]
    fn dyadic_group(x in dyadic(), y in dyadic(), z in dyadic()) {
        group_laws(&x, &y, &z);
        if let Some(h) = x.halve() {
            prop_assert_eq!(h.double(), x);
        }
    }

    #[test]
    fn laurent_group(x in laurent(), y in laurent(), z in laurent()) {
        group_laws(&x, &y, &z);
    }

    #[test]
    fn unipotent_automorphisms(a in -5i64..6, b in -5i64..6, c in -5i64..6, x in int3(), y in int3()) {
        let m = OagAutomorphism::unipotent_i64(&[&[1, a, b], &[0, 1, c], &[0, 0, 1]]).unwrap();
        aut_laws(&m, &x, &y);
        let m2 = m.compose(&m).unwrap();
        prop_assert_eq!(m2.apply(&x).unwrap(), m.apply(&m.apply(&x).unwrap()).unwrap());
    }

    #[test]
    fn scale_and_shift(k in -3i64..4, x in dyadic(), y in dyadic(), p in laurent(), q in laurent()) {
        let s = OagAutomorphism::scale_i64(2, 1 << k.unsigned_abs(), 1).unwrap();
        let s = if k < 0 { s.inverse().unwrap() } else { s };
        aut_laws(&s, &x, &y);
        aut_laws(&OagAutomorphism::shift(k), &p, &q);
    }

    #[test]
    fn free_group_words(u in word(3, 12), v in word(3, 12), w in word(3, 12)) {
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        prop_assert!(u.concat(&u.inverse()).is_empty());
        prop_assert_eq!(u.concat(&v).inverse(), v.inverse().concat(&u.inverse()));
        prop_assert_eq!(u.pow(3), u.concat(&u).concat(&u));
        let a = Alphabet::new(&["x", "y", "z"]).unwrap();
        prop_assert_eq!(Word::parse(&a, &u.display(&a).to_string()).unwrap(), u);
    }

    #[test]
    fn realization_is_a_homomorphism(u in word(2, 6), v in word(2, 6)) {
        let ctx = examples::bs_rational(3, 1).unwrap();
        let guv = ctx.realize(&u.concat(&v)).unwrap();
        let gu_gv = ctx.realize(&u).unwrap().compose(&ctx.realize(&v).unwrap()).unwrap();
        prop_assert!(guv.compose(&gu_gv.inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn twisted_inverse_law(u in word(2, 8)) {
        for ctx in [examples::heisenberg().unwrap(), examples::bs_rational(2, 1).unwrap()] {
            let g = ctx.element(&u).unwrap();
            let gi = ctx.inverse(&g).unwrap();
            let l = ctx.length(&g).unwrap();
            prop_assert_eq!(&l, &ctx.alpha(&g).unwrap().apply(&ctx.length(&gi).unwrap()).unwrap());
            prop_assert!(!l.is_negative());
            prop_assert_eq!(ancillary_c(&ctx, &g, &ctx.identity()).unwrap(), HalfElement::zero(&l.descriptor()));
        }
    }
}
