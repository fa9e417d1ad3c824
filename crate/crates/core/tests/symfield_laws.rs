use proptest::prelude::*;
use thetawh::symfield::SymVal;

fn sym(n: u32) -> impl Strategy<Value = SymVal> {
    (any::<bool>(), -9i64..9, 0i64..4, -7i64..7, 0i64..12, -20i64..20, -2i64..3).prop_map(move |(neg, q, e, g, w, j, ge)| {
        let mut v = SymVal::q_half(n, q).mul(&SymVal::eps_pow(n, e)).mul(&SymVal::omega(n, w)).mul(&SymVal::gauss_pow(n, j, ge));
        if n.is_multiple_of(2) {
            v = v.mul(&SymVal::gamma_pow(n, g).unwrap());
        }
        if neg {
            v = v.mul(&SymVal::minus_one(n));
        }
        v
    })
}

fn triple() -> impl Strategy<Value = (SymVal, SymVal, SymVal)> {
    prop_oneof![Just(2u32), Just(3), Just(4), Just(5), Just(6), Just(8), Just(10), Just(12)]
        .prop_flat_map(|n| (sym(n), sym(n), sym(n)))
}

proptest! {
    #[test]
    fn group_laws((a, b, c) in triple()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inv()).is_one());
        prop_assert_eq!(a.div(&b).mul(&b), a.clone());
        prop_assert_eq!(a.mul(&SymVal::one(a.degree())), a);
    }

    #[test]
    fn powers_add((a, _, _) in triple(), j in -6i64..6, k in -6i64..6) {
        prop_assert_eq!(a.pow(j).mul(&a.pow(k)), a.pow(j + k));
        prop_assert_eq!(a.pow(j).pow(k), a.pow(j * k));
    }

    #[test]
    fn display_parses_back((a, b, _) in triple()) {
        for v in [a.clone(), a.mul(&b), a.inv()] {
            let s = v.to_string();
            prop_assert_eq!(SymVal::parse(v.degree(), &s).unwrap(), v, "{}", s);
        }
    }

    #[test]
    fn modulus_is_multiplicative((a, b, _) in triple()) {
        prop_assert_eq!(a.mul(&b).modulus_q2(), a.modulus_q2() + b.modulus_q2());
    }
}

#[test]
fn documented_display() {
    let v = SymVal::minus_one(8)
        .mul(&SymVal::q_half(8, -3))
        .mul(&SymVal::eps(8))
        .mul(&SymVal::gamma_pow(8, 3).unwrap())
        .mul(&SymVal::gauss_pow(8, 2, -1));
    // gamma^2 = eps^{n/2} = 1 for n = 8, so the canonical form keeps gamma^1
    assert_eq!(v.to_string(), "-1 · q^{-3/2} · eps · gamma · g(2)^-1");
    assert_eq!(SymVal::parse(8, "-1 · q^{-3/2} · eps · gamma^3 · g(2)^-1").unwrap(), v);
    assert_eq!(SymVal::parse(8, &v.to_string()).unwrap(), v);
}
