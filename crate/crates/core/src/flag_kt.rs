//! Bott-Samelson varieties and structure constants of flag varieties in the
//! Kostant-Kumar basis.
//!
//! A reduced word `μ_1 ... μ_N` of `w` gives a Bott-Samelson variety whose
//! fixed points are the subwords `ε`. The class `ψ̂^u` pulls back to the sum
//! of `*μ̂_ε` over subwords whose 0-Hecke product is `u`, and the constant
//! `q_{u,v}^w` is read off from the rule operator `R_M`.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::bott_tower::{BitWord, TowerSpec};
use crate::char_ring::{CharPoly, Lattice};
use crate::error::{Error, Result};
use crate::root_weyl::{CartanMatrix, RootVec, WeylElt, DEFAULT_CAP};
use crate::rule_engine::{self, LMonomials, RulePoly};

/// A word of simple-root indices over a Cartan matrix, with its tower data
/// `c_{j,k} = a_{μ_j μ_k}` and monomials `M_i`.
#[derive(Debug, Clone)]
pub struct WordSpec {
    cartan: CartanMatrix,
    word: Vec<usize>,
    tower: TowerSpec,
    m: LMonomials,
}

impl WordSpec {
    pub fn new(cartan: &CartanMatrix, word: &[usize]) -> Result<Self> {
        let m = rule_engine::build_m(cartan, word)?;
        let n = word.len();
        let mut entries = Vec::new();
        for j in 1..=n {
            for k in j + 1..=n {
                entries.push(((j, k), cartan.entry(word[j - 1], word[k - 1])));
            }
        }
        Ok(WordSpec { cartan: cartan.clone(), word: word.to_vec(), tower: TowerSpec::new(n, entries)?, m })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The Bott tower this Bott-Samelson variety is isomorphic to.
    pub fn tower(&self) -> &TowerSpec {
        &self.tower
    }

    pub fn m(&self) -> &LMonomials {
        &self.m
    }

    pub fn lattice(&self) -> &std::sync::Arc<Lattice> {
        self.m.lattice()
    }

    fn check_eps(&self, eps: &BitWord) -> Result<()> {
        if eps.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: eps.len() });
        }
        Ok(())
    }

    /// `α_i(ε) = v_i(ε) μ_i` where `v_i(ε)` is the product of the `s_{μ_k}`
    /// with `k ≤ i` and `ε_k = 1`.
    pub fn subword_roots(&self, eps: &BitWord) -> Result<Vec<RootVec>> {
        self.check_eps(eps)?;
        let plus = eps.plus();
        (1..=self.len())
            .map(|i| {
                let mut x = self.cartan.simple_root(self.word[i - 1]);
                for &k in plus.iter().rev().filter(|&&k| k <= i) {
                    x = self.cartan.reflect(self.word[k - 1], &x)?;
                }
                Ok(x)
            })
            .collect()
    }

    /// `μ_ε^T(ε')`.
    pub fn bs_restrict(&self, eps: &BitWord, at: &BitWord) -> Result<CharPoly> {
        self.check_eps(eps)?;
        let roots = self.subword_roots(at)?;
        Ok(restriction_from_roots(self.lattice(), &roots, eps, at))
    }

    /// The 0-Hecke product of every subword, indexed by mask.
    pub fn subword_products(&self) -> Vec<WeylElt> {
        let n = self.len();
        let mut out: Vec<WeylElt> = Vec::with_capacity(1 << n);
        out.push(self.cartan.identity());
        for mask in 1usize..1 << n {
            let top = usize::BITS - 1 - mask.leading_zeros();
            let prev = &out[mask ^ (1 << top)];
            let letter = self.word[top as usize];
            let next = if prev.right_descent(letter) { prev.clone() } else { self.cartan.mul_right(prev, letter) };
            out.push(next);
        }
        out
    }

    /// All `ε` whose 0-Hecke product is `u`, in increasing mask order.
    pub fn subwords_by_demazure(&self, u: &WeylElt) -> Vec<BitWord> {
        let n = self.len();
        self.subword_products()
            .iter()
            .enumerate()
            .filter(|(_, p)| *p == u)
            .map(|(m, _)| BitWord::from_mask(m, n))
            .collect()
    }

    /// `Σ S_ε` over the given subwords.
    fn s_sum(&self, subwords: &[BitWord], lattice: &std::sync::Arc<Lattice>) -> Result<RulePoly> {
        let mut p = RulePoly::zero(self.len(), lattice);
        for e in subwords {
            p = p.add(&rule_engine::build_s(e, lattice))?;
        }
        Ok(p)
    }

    /// `χ(Γ̄_{e3}, μ̂_{e1} μ̂_{e2}) = R_M^{e3}(S_{e1} S_{e2})`.
    pub fn bs_structure_const(&self, e1: &BitWord, e2: &BitWord, e3: &BitWord) -> Result<CharPoly> {
        for e in [e1, e2, e3] {
            self.check_eps(e)?;
        }
        let p = rule_engine::build_s(e1, self.lattice()).mul(&rule_engine::build_s(e2, self.lattice()))?;
        rule_engine::r_op(&self.m, e3, &p)
    }

    /// `(Σ_{v(ε)=u} S_ε)(Σ_{v(ε')=v} S_ε')` over `lattice`.
    fn product_poly(&self, products: &[WeylElt], u: &WeylElt, v: &WeylElt, lattice: &std::sync::Arc<Lattice>) -> Result<RulePoly> {
        let n = self.len();
        let pick = |x: &WeylElt| -> Vec<BitWord> {
            products.iter().enumerate().filter(|(_, p)| *p == x).map(|(m, _)| BitWord::from_mask(m, n)).collect()
        };
        let a = self.s_sum(&pick(u), lattice)?;
        if a.is_zero() {
            return Ok(a);
        }
        let b = if u == v { a.clone() } else { self.s_sum(&pick(v), lattice)? };
        a.mul(&b)
    }
}

fn restriction_from_roots(lattice: &std::sync::Arc<Lattice>, roots: &[RootVec], eps: &BitWord, at: &BitWord) -> CharPoly {
    if !eps.leq(at) {
        return CharPoly::zero(lattice);
    }
    let mut unit = vec![0i64; lattice.dim()];
    for i in at.plus() {
        for (u, x) in unit.iter_mut().zip(&roots[i - 1]) {
            *u += x;
        }
    }
    let mut value = CharPoly::character(lattice, &unit);
    for i in eps.plus() {
        let neg: Vec<i64> = roots[i - 1].iter().map(|x| -x).collect();
        value = &value * &(CharPoly::character(lattice, &neg) - CharPoly::one(lattice));
    }
    value
}

fn identity_constant(cartan: &CartanMatrix, u: &WeylElt, v: &WeylElt) -> CharPoly {
    let lat = Lattice::roots(cartan.rank());
    if u.is_identity() && v.is_identity() {
        CharPoly::one(&lat)
    } else {
        CharPoly::zero(&lat)
    }
}

/// The structure constant `q_{u,v}^w` for `w` given by a reduced word.
pub fn q_const(cartan: &CartanMatrix, u: &WeylElt, v: &WeylElt, w_word: &[usize]) -> Result<CharPoly> {
    cartan.reduced_element(w_word)?;
    if w_word.is_empty() {
        return Ok(identity_constant(cartan, u, v));
    }
    let ws = WordSpec::new(cartan, w_word)?;
    let products = ws.subword_products();
    let p = ws.product_poly(&products, u, v, ws.lattice())?;
    Ok(rule_engine::r_op(ws.m(), &BitWord::ones(ws.len()), &p)?.star())
}

/// The coefficient at an arbitrary `e3` of the same expansion. It equals
/// `q_{u,v}^{w'}` where `w'` is the 0-Hecke product of `e3`, which is
/// returned alongside.
pub fn q_const_at(cartan: &CartanMatrix, u: &WeylElt, v: &WeylElt, w_word: &[usize], e3: &BitWord) -> Result<(WeylElt, CharPoly)> {
    cartan.reduced_element(w_word)?;
    if e3.len() != w_word.len() {
        return Err(Error::LengthMismatch { expected: w_word.len(), got: e3.len() });
    }
    if w_word.is_empty() {
        return Ok((cartan.identity(), identity_constant(cartan, u, v)));
    }
    let ws = WordSpec::new(cartan, w_word)?;
    let products = ws.subword_products();
    let p = ws.product_poly(&products, u, v, ws.lattice())?;
    let value = rule_engine::r_op(ws.m(), e3, &p)?.star();
    Ok((products[e3.mask()].clone(), value))
}

/// The integer structure constant `t_{u,v}^w` of ordinary K-theory.
///
/// It is computed twice: as the augmentation of `q_{u,v}^w`, and directly
/// with the character-free monomials `m_i`. A disagreement is reported as a
/// consistency error.
pub fn t_const(cartan: &CartanMatrix, u: &WeylElt, v: &WeylElt, w_word: &[usize]) -> Result<BigInt> {
    let via_augment = q_const(cartan, u, v, w_word)?.augment();
    if w_word.is_empty() {
        return Ok(via_augment);
    }
    let ws = WordSpec::new(cartan, w_word)?;
    let m = rule_engine::build_m_ordinary(cartan, w_word)?;
    let products = ws.subword_products();
    let p = ws.product_poly(&products, u, v, m.lattice())?;
    let direct = rule_engine::r_op(&m, &BitWord::ones(ws.len()), &p)?.augment();
    if direct != via_augment {
        return Err(Error::Consistency(format!(
            "ordinary constant by augmentation is {via_augment} but the direct computation gives {direct}"
        )));
    }
    Ok(direct)
}

/// The decomposition `ψ̂^u ψ̂^v = Σ_w q_{u,v}^w ψ̂^w`, nonzero entries only.
#[derive(Debug, Clone)]
pub struct QTable {
    pub entries: Vec<(WeylElt, CharPoly)>,
    /// False when an explicit cap cut the enumeration of an infinite group
    /// short; the entries then cover every `w` up to `max_length`.
    pub complete: bool,
    pub max_length: usize,
}

/// Computes every `q_{u,v}^w`.
///
/// Candidates `w` are taken breadth first through the group, sorted by
/// length and canonical word, and only `w ≥ u, v` are evaluated. Without a
/// cap the group has to be finite (at most the default cap); with a cap the
/// table is truncated to the longest complete length layer that fits.
pub fn q_table(cartan: &CartanMatrix, u: &WeylElt, v: &WeylElt, cap: Option<usize>) -> Result<QTable> {
    let (layers, complete) = cartan.layers(cap.unwrap_or(DEFAULT_CAP));
    if !complete && cap.is_none() {
        return Err(Error::CapExceeded { cap: DEFAULT_CAP });
    }
    let max_length = layers.len() - 1;
    let candidates: Vec<WeylElt> = layers
        .into_iter()
        .flatten()
        .filter(|w| cartan.bruhat_leq(u, w) && cartan.bruhat_leq(v, w))
        .collect();
    let values: Vec<Result<CharPoly>> = candidates.par_iter().map(|w| q_const(cartan, u, v, w.word())).collect();
    let mut entries = Vec::new();
    for (w, q) in candidates.into_iter().zip(values) {
        let q = q?;
        if !q.is_zero() {
            entries.push((w, q));
        }
    }
    Ok(QTable { entries, complete, max_length })
}

/// All restrictions `ψ^u(w)` for fixed `w`, keyed by `u`; absent keys are
/// zero.
pub fn psi_column(cartan: &CartanMatrix, w: &WeylElt) -> Result<HashMap<WeylElt, CharPoly>> {
    let mut out = HashMap::new();
    if w.is_identity() {
        out.insert(cartan.identity(), CharPoly::one(&Lattice::roots(cartan.rank())));
        return Ok(out);
    }
    let ws = WordSpec::new(cartan, w.word())?;
    let ones = BitWord::ones(ws.len());
    let roots = ws.subword_roots(&ones)?;
    for (mask, u) in ws.subword_products().into_iter().enumerate() {
        let eps = BitWord::from_mask(mask, ws.len());
        let value = restriction_from_roots(ws.lattice(), &roots, &eps, &ones).star();
        out.entry(u)
            .and_modify(|acc: &mut CharPoly| *acc += &value)
            .or_insert(value);
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `ψ^u(w) = Σ_{v(ε)=u} *μ_ε^T((1))` along the canonical word of `w`.
pub fn psi_restrict(cartan: &CartanMatrix, u: &WeylElt, w: &WeylElt) -> Result<CharPoly> {
    Ok(psi_column(cartan, w)?
        .remove(u)
        .unwrap_or_else(|| CharPoly::zero(&Lattice::roots(cartan.rank()))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> CartanMatrix {
        CartanMatrix::preset("A2").unwrap()
    }

    fn bw(s: &str) -> BitWord {
        BitWord::parse(s).unwrap()
    }

    fn r2(s: &str) -> CharPoly {
        CharPoly::parse(s, &Lattice::roots(2)).unwrap()
    }

    #[test]
    fn word_tower_data() {
        let ws = WordSpec::new(&a2(), &[1, 2, 1]).unwrap();
        assert_eq!(ws.tower().c(1, 2), -1);
        assert_eq!(ws.tower().c(1, 3), 2);
        assert_eq!(ws.tower().c(2, 3), -1);
    }

    #[test]
    fn roots_of_subwords() {
        let ws = WordSpec::new(&a2(), &[1, 2, 1]).unwrap();
        assert_eq!(ws.subword_roots(&bw("000")).unwrap(), vec![vec![1, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(ws.subword_roots(&bw("111")).unwrap(), vec![vec![-1, 0], vec![-1, -1], vec![0, -1]]);
    }

    #[test]
    fn restriction_on_a1() {
        let c = CartanMatrix::preset("A1").unwrap();
        let ws = WordSpec::new(&c, &[1]).unwrap();
        let e = CharPoly::parse("e^{-a1}", ws.lattice()).unwrap();
        assert_eq!(ws.bs_restrict(&bw("0"), &bw("1")).unwrap(), e);
        assert!(ws.bs_restrict(&bw("1"), &bw("0")).unwrap().is_zero());
    }

    #[test]
    fn demazure_subwords() {
        let c = a2();
        let ws = WordSpec::new(&c, &[1, 2, 1]).unwrap();
        let el = |w: &[usize]| c.element(w).unwrap();
        let names = |v: Vec<BitWord>| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        assert_eq!(names(ws.subwords_by_demazure(&el(&[]))), ["000"]);
        assert_eq!(names(ws.subwords_by_demazure(&el(&[1]))), ["100", "001", "101"]);
        assert_eq!(names(ws.subwords_by_demazure(&el(&[2]))), ["010"]);
        assert_eq!(names(ws.subwords_by_demazure(&el(&[1, 2]))), ["110"]);
        assert_eq!(names(ws.subwords_by_demazure(&el(&[2, 1]))), ["011"]);
        assert_eq!(names(ws.subwords_by_demazure(&el(&[1, 2, 1]))), ["111"]);
    }

    #[test]
    fn bott_samelson_example() {
        let ws = WordSpec::new(&a2(), &[1, 2, 1]).unwrap();
        let r = ws.bs_structure_const(&bw("100"), &bw("001"), &bw("111")).unwrap();
        // Localization over the eight fixed points gives the same value.
        assert_eq!(r, r2("-e^{-a1-a2}-e^{-2*a1-2*a2}"));
        assert!(ws.bs_structure_const(&bw("100"), &bw("001"), &bw("011")).unwrap().is_zero());
        assert!(ws.bs_structure_const(&bw("000"), &bw("000"), &bw("000")).unwrap().is_one());
    }

    #[test]
    fn a2_constants() {
        let c = a2();
        let e = c.identity();
        let s1 = c.element(&[1]).unwrap();
        let s2 = c.element(&[2]).unwrap();
        assert_eq!(q_const(&c, &e, &e, &[1]).unwrap(), r2("-e^{a1}"));
        assert_eq!(q_const(&c, &e, &e, &[1, 2]).unwrap(), r2("e^{a1+a2}+e^{2*a1+a2}"));
        assert_eq!(q_const(&c, &e, &e, &[1, 2, 1]).unwrap(), r2("-e^{2*a1+2*a2}"));
        assert_eq!(q_const(&c, &s1, &s2, &[1, 2]).unwrap(), r2("e^{2*a1+a2}"));
        assert!(q_const(&c, &e, &e, &[]).unwrap().is_one());
        assert!(matches!(q_const(&c, &e, &e, &[1, 1]), Err(Error::NotReduced(_))));
    }

    #[test]
    fn constant_at_a_face() {
        let c = a2();
        let e = c.identity();
        let (w, q) = q_const_at(&c, &e, &e, &[1, 2, 1], &bw("100")).unwrap();
        assert_eq!(w, c.element(&[1]).unwrap());
        assert_eq!(q, r2("-e^{a1}"));
        let (w1, q1) = q_const_at(&c, &e, &e, &[1, 2, 1], &bw("001")).unwrap();
        assert_eq!((w1, q1), (w, q));
    }

    #[test]
    fn ordinary_constants() {
        let c = a2();
        let e = c.identity();
        assert_eq!(t_const(&c, &e, &e, &[1]).unwrap(), BigInt::from(-1));
        let w = c.element(&[1, 2]).unwrap();
        assert_eq!(t_const(&c, &w, &w, &[1, 2]).unwrap(), BigInt::from(0));
    }

    #[test]
    fn restrictions() {
        let c = a2();
        let e = c.identity();
        let s1 = c.element(&[1]).unwrap();
        let s2 = c.element(&[2]).unwrap();
        assert_eq!(psi_restrict(&c, &e, &s1).unwrap(), r2("e^{a1}"));
        assert_eq!(psi_restrict(&c, &s1, &s1).unwrap(), r2("1-e^{a1}"));
        assert!(psi_restrict(&c, &s2, &s1).unwrap().is_zero());
        assert!(psi_restrict(&c, &e, &e).unwrap().is_one());
    }

    #[test]
    fn table_for_s1_s2() {
        let c = a2();
        let s1 = c.element(&[1]).unwrap();
        let s2 = c.element(&[2]).unwrap();
        let t = q_table(&c, &s1, &s2, None).unwrap();
        assert!(t.complete);
        let got: Vec<(String, String)> = t.entries.iter().map(|(w, q)| (w.to_string(), q.to_string())).collect();
        assert_eq!(
            got,
            [
                ("s1s2".to_string(), "e^{2*a1+a2}".to_string()),
                ("s2s1".to_string(), "e^{a1+2*a2}".to_string()),
                ("s1s2s1".to_string(), "-e^{2*a1+2*a2}".to_string()),
            ]
        );
    }
}
