use std::collections::HashSet;

use equikt::root_weyl::DEFAULT_CAP;
use equikt::{CartanMatrix, WeylElt};
use proptest::prelude::*;

const FINITE: [&str; 5] = ["A1", "A2", "A3", "B2", "G2"];

fn arb_word(rank: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=rank, 0..8)
}

/// Every element of the form "product of a subword of `word`".
fn subword_products(c: &CartanMatrix, word: &[usize]) -> HashSet<WeylElt> {
    let mut out = HashSet::new();
    for mask in 0..1usize << word.len() {
        let sub: Vec<usize> = word.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
        out.insert(c.element(&sub).unwrap());
    }
    out
}

fn inverse_matrix_ok(c: &CartanMatrix, w: &WeylElt) -> bool {
    let prod = c.multiply(w, &c.inverse(w));
    prod.is_identity() && prod == c.identity()
}

proptest! {
    #[test]
    fn inverse_and_length(name in prop::sample::select(FINITE.to_vec()), seed in any::<u64>()) {
        let c = CartanMatrix::preset(name).unwrap();
        let word: Vec<usize> = (0..6).map(|k| (seed >> (3 * k)) as usize % c.rank() + 1).collect();
        let w = c.element(&word).unwrap();
        prop_assert!(inverse_matrix_ok(&c, &w));
        prop_assert_eq!(w.length(), c.inversion_set(&w).len());
        prop_assert_eq!(w.length(), w.word().len());
        prop_assert!(c.is_reduced(w.word()).unwrap());
        prop_assert_eq!(c.element(w.word()).unwrap(), w.clone());
        // the Demazure product is idempotent on repeated letters
        let mut doubled = word.clone();
        doubled.extend(&word);
        let d = c.demazure_product(&word).unwrap();
        prop_assert_eq!(c.demazure_product(&doubled).unwrap(), c.demazure_product(&[d.word(), d.word()].concat()).unwrap());
        prop_assert_eq!(c.demazure_product(d.word()).unwrap(), d);
    }

    #[test]
    fn a3_inverse(word in arb_word(3)) {
        let c = CartanMatrix::preset("A3").unwrap();
        let w = c.element(&word).unwrap();
        prop_assert!(inverse_matrix_ok(&c, &w));
        let rs = c.rho_shift(&w);
        let mut sum = vec![0i64; 3];
        for beta in c.inversion_set(&c.inverse(&w)) {
            for (s, b) in sum.iter_mut().zip(beta) {
                *s += b;
            }
        }
        prop_assert_eq!(rs, sum);
    }
}

#[test]
fn braid_relations_hold() {
    for name in FINITE {
        let c = CartanMatrix::preset(name).unwrap();
        for i in 1..=c.rank() {
            assert!(c.element(&[i, i]).unwrap().is_identity());
            for j in i + 1..=c.rank() {
                let m = c.braid_order(i, j).unwrap();
                let a: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
                let b: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { j } else { i }).collect();
                assert_eq!(c.element(&a).unwrap(), c.element(&b).unwrap(), "{name} {i} {j}");
                assert!(c.is_reduced(&a).unwrap());
            }
        }
    }
}

#[test]
fn group_orders() {
    for (name, order) in [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("G2", 12)] {
        let c = CartanMatrix::preset(name).unwrap();
        assert_eq!(c.all_elements(DEFAULT_CAP).unwrap().len(), order);
    }
}

#[test]
fn bruhat_matches_subword_criterion() {
    for name in FINITE {
        let c = CartanMatrix::preset(name).unwrap();
        let all = c.all_elements(DEFAULT_CAP).unwrap();
        for w in &all {
            let below = subword_products(&c, w.word());
            for u in &all {
                assert_eq!(c.bruhat_leq(u, w), below.contains(u), "{name}: {u} <= {w}");
            }
            let mut interval: Vec<WeylElt> = c.enumerate_interval(w, DEFAULT_CAP).unwrap();
            interval.sort_by_key(|x| x.word().to_vec());
            let mut expected: Vec<WeylElt> = below.into_iter().collect();
            expected.sort_by_key(|x| x.word().to_vec());
            assert_eq!(interval, expected);
        }
    }
}

#[test]
fn longest_word_is_independent_of_reduced_word() {
    let c = CartanMatrix::preset("A2").unwrap();
    let a = c.element(&[1, 2, 1]).unwrap();
    let b = c.element(&[2, 1, 2]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.word(), &[1, 2, 1]);
}

#[test]
fn infinite_group_hits_the_cap() {
    let c = CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
    assert!(c.braid_order(1, 2).is_none());
    assert!(c.all_elements(50).is_err());
    let (layers, complete) = c.layers(50);
    assert!(!complete);
    assert!(layers.iter().skip(1).all(|l| l.len() == 2));
}
