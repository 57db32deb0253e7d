use equikt::bott_tower::{
    chi_localized, restrict_basis_class, restrict_generators, structure_consts_by_restriction, tower_structure_const,
};
use equikt::{BitWord, CharPoly, FixedPointClass, Generator, TowerSpec};
use proptest::prelude::*;

fn arb_tower(max_n: usize) -> impl Strategy<Value = TowerSpec> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(-3i64..=3, pairs).prop_map(move |vals| {
            let mut entries = Vec::new();
            let mut it = vals.into_iter();
            for i in 1..=n {
                for j in i + 1..=n {
                    entries.push(((i, j), it.next().unwrap()));
                }
            }
            TowerSpec::new(n, entries).unwrap()
        })
    })
}

/// `c_{k,l}(ε)` as a signed sum over chains `k < m_1 < ... < l` whose
/// interior points lie in `π_+(ε)`.
fn c_eps_by_chains(spec: &TowerSpec, eps: &BitWord, k: usize, l: usize) -> i64 {
    fn walk(spec: &TowerSpec, eps: &BitWord, from: usize, l: usize, sign: i64, acc: i64) -> i64 {
        let mut total = -sign * acc * spec.c(from, l);
        for m in from + 1..l {
            if eps.get(m) {
                total += walk(spec, eps, m, l, -sign, acc * spec.c(from, m));
            }
        }
        total
    }
    walk(spec, eps, k, l, 1, 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn c_eps_closed_form(spec in arb_tower(5), mask in 0usize..32) {
        let n = spec.n();
        let eps = BitWord::from_mask(mask % (1 << n), n);
        for l in 2..=n {
            for k in 1..l {
                prop_assert_eq!(spec.c_eps(&eps, k, l).unwrap(), c_eps_by_chains(&spec, &eps, k, l));
            }
        }
    }

    #[test]
    fn basis_class_is_a_product_of_generators(spec in arb_tower(4)) {
        let n = spec.n();
        let lat = spec.lattice().clone();
        for eps in BitWord::all(n) {
            let mut expected = FixedPointClass::from_fn(n, |_| CharPoly::one(&lat));
            for i in 1..=n {
                let which = if eps.get(i) { Generator::F } else { Generator::E };
                expected = expected.mul(&restrict_generators(&spec, which, i).unwrap()).unwrap();
            }
            prop_assert_eq!(restrict_basis_class(&spec, &eps).unwrap(), expected);
        }
    }

    #[test]
    fn generator_restrictions(spec in arb_tower(4)) {
        // E_i + F_i = 1 where ε_i = 1, and every L_i restricts to a unit.
        let n = spec.n();
        let lat = spec.lattice().clone();
        for i in 1..=n {
            let e = restrict_generators(&spec, Generator::E, i).unwrap();
            let f = restrict_generators(&spec, Generator::F, i).unwrap();
            let l = restrict_generators(&spec, Generator::L, i).unwrap();
            for at in BitWord::all(n) {
                if at.get(i) {
                    prop_assert!((e.get(&at) + f.get(&at)).is_one());
                } else {
                    prop_assert!(e.get(&at).is_one() && f.get(&at).is_zero());
                }
                let lv = l.get(&at);
                prop_assert!(lv.as_monomial().is_some());
                let (x, _) = lv.as_monomial().unwrap();
                let inv: Vec<i64> = x.iter().map(|v| -v).collect();
                prop_assert!((lv * &CharPoly::character(&lat, &inv)).is_one());
            }
        }
    }

    #[test]
    fn line_bundle_as_product_of_e(spec in arb_tower(4)) {
        // L_i = e^{-λ_i} Π_{j<i} E_j^{-c_{j,i}} on every fixed point
        let n = spec.n();
        let lat = spec.lattice().clone();
        for i in 1..=n {
            let l = restrict_generators(&spec, Generator::L, i).unwrap();
            let mut base = vec![0i64; n];
            base[i - 1] = -1;
            let mut expected = FixedPointClass::from_fn(n, |_| CharPoly::character(&lat, &base));
            for j in 1..i {
                let e = restrict_generators(&spec, Generator::E, j).unwrap();
                let c = spec.c(j, i);
                let power = FixedPointClass::from_fn(n, |at| {
                    let (x, _) = e.get(at).as_monomial().unwrap();
                    let x: Vec<i64> = x.iter().map(|v| -c * v).collect();
                    CharPoly::character(&lat, &x)
                });
                expected = expected.mul(&power).unwrap();
            }
            prop_assert_eq!(l, expected);
        }
    }

    #[test]
    fn kronecker_delta(spec in arb_tower(4)) {
        let n = spec.n();
        for eps in BitWord::all(n) {
            let cls = restrict_basis_class(&spec, &eps).unwrap();
            for at in BitWord::all(n) {
                let chi = chi_localized(&spec, &at, &cls).unwrap();
                let ok = if eps == at { chi.is_one() } else { chi.is_zero() };
                prop_assert!(ok, "eps={} at={} chi={}", eps, at, chi);
            }
        }
    }

    #[test]
    fn rule_matches_restriction_solve(spec in arb_tower(3)) {
        let n = spec.n();
        for e1 in BitWord::all(n) {
            for e2 in BitWord::all(n) {
                for (e3, r) in structure_consts_by_restriction(&spec, &e1, &e2).unwrap() {
                    let got = tower_structure_const(&spec, &e1, &e2, &e3).unwrap();
                    prop_assert_eq!(&got, &r, "e1={} e2={} e3={}", e1, e2, e3);
                    prop_assert_eq!(&got, &tower_structure_const(&spec, &e2, &e1, &e3).unwrap());
                    if !(e1.leq(&e3) && e2.leq(&e3)) {
                        prop_assert!(got.is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn json_round_trip() {
    let spec = TowerSpec::new(3, [((1, 2), -1), ((1, 3), 2), ((2, 3), 0)]).unwrap();
    let back = TowerSpec::from_json(&spec.to_json()).unwrap();
    assert_eq!(back.to_json(), spec.to_json());
    assert_eq!(back.c(1, 3), 2);
}

#[test]
fn wrong_lengths_are_rejected() {
    let spec = TowerSpec::new(2, [((1, 2), 1)]).unwrap();
    assert!(restrict_basis_class(&spec, &BitWord::parse("101").unwrap()).is_err());
    assert!(spec.c_eps(&BitWord::zeros(2), 2, 1).is_err());
    assert!(restrict_generators(&spec, Generator::L, 3).is_err());
}
