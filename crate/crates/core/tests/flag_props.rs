use equikt::flag_kt::{psi_restrict, q_const, q_const_at, q_table};
use equikt::kk_oracle::{demazure_apply, demazure_apply_word, psi_table};
use equikt::root_weyl::DEFAULT_CAP;
use equikt::{BitWord, CartanMatrix, CharPoly, Error, Lattice, WeylElt};

fn preset(name: &str) -> CartanMatrix {
    CartanMatrix::preset(name).unwrap()
}

#[test]
fn every_e3_gives_the_constant_of_its_demazure_product() {
    for (name, top) in [("A2", &[1, 2, 1][..]), ("B2", &[1, 2, 1, 2][..]), ("G2", &[2, 1, 2, 1][..])] {
        let c = preset(name);
        let w = c.element(top).unwrap();
        let interval = c.enumerate_interval(&w, DEFAULT_CAP).unwrap();
        for u in &interval {
            for v in &interval {
                for e3 in BitWord::all(top.len()) {
                    let (w3, q) = q_const_at(&c, u, v, top, &e3).unwrap();
                    assert_eq!(q, q_const(&c, u, v, w3.word()).unwrap(), "{name} u={u} v={v} e3={e3}");
                }
            }
        }
    }
}

#[test]
fn psi_of_identity_is_a_rho_shift() {
    for name in ["A2", "B2", "G2", "A3"] {
        let c = preset(name);
        let lat = Lattice::roots(c.rank());
        for w in c.all_elements(DEFAULT_CAP).unwrap() {
            let want = CharPoly::character(&lat, &c.rho_shift(&w));
            assert_eq!(psi_restrict(&c, &c.identity(), &w).unwrap(), want, "{name} {w}");
            let top = psi_restrict(&c, &w, &w).unwrap();
            assert!(!top.is_zero());
            assert_eq!(top.augment(), (w.is_identity() as i32).into());
        }
    }
}

#[test]
fn demazure_operators_are_idempotent_and_satisfy_braid_relations() {
    for (name, top) in [("A2", &[1, 2, 1][..]), ("B2", &[1, 2, 1, 2][..])] {
        let c = preset(name);
        let w0 = c.element(top).unwrap();
        let t = psi_table(&c, &w0, DEFAULT_CAP).unwrap();
        for u in t.elements() {
            let f = t.row(u);
            for i in 1..=c.rank() {
                let once = demazure_apply(&c, &f, i).unwrap();
                let twice = demazure_apply(&c, &once, i).unwrap();
                assert_eq!(once, twice, "{name} D_{i} on ψ^{u}");
            }
            let m = c.braid_order(1, 2).unwrap();
            let a: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { 1 } else { 2 }).collect();
            let b: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { 2 } else { 1 }).collect();
            let mut g1 = f.clone();
            for &i in a.iter().rev() {
                g1 = demazure_apply(&c, &g1, i).unwrap();
            }
            let mut g2 = f.clone();
            for &i in b.iter().rev() {
                g2 = demazure_apply(&c, &g2, i).unwrap();
            }
            assert_eq!(g1, g2, "{name} braid on ψ^{u}");
            assert_eq!(g1, demazure_apply_word(&c, &f, &w0).unwrap());
        }
    }
}

#[test]
fn infinite_group_needs_a_cap() {
    let c = CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
    let e = c.identity();
    let s1 = c.element(&[1]).unwrap();
    assert!(matches!(q_table(&c, &e, &s1, None), Err(Error::CapExceeded { .. })));
    let t = q_table(&c, &e, &s1, Some(40)).unwrap();
    assert!(!t.complete);
    assert!(t.max_length >= 10);
    assert!(t.entries.iter().all(|(w, _)| w.length() <= t.max_length));
    assert!(t.entries.iter().any(|(w, _)| w == &s1));
    // the products of ψ's still expand over the elements of bounded length
    let q = q_const(&c, &s1, &s1, &[1, 2, 1]).unwrap();
    assert!(!q.is_zero());
}

#[test]
fn non_reduced_words_are_rejected() {
    let c = preset("A2");
    let e = c.identity();
    assert!(matches!(q_const(&c, &e, &e, &[1, 1]), Err(Error::NotReduced(..))));
    assert!(q_const(&c, &e, &e, &[3]).is_err());
}

#[test]
fn products_with_the_identity_class() {
    let c = preset("B2");
    let e = c.identity();
    let t = q_table(&c, &e, &e, None).unwrap();
    assert!(t.complete);
    let first: &WeylElt = &t.entries[0].0;
    assert!(first.is_identity());
    assert!(t.entries[0].1.is_one());
}
