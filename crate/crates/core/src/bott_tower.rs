//! Bott towers: the integers `c_{k,l}(ε)`, the fixed-point weights
//! `λ_i(ε)`, restrictions of the generators and of the basis classes to
//! fixed points, and Euler characteristics by localization.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::Value;

use crate::char_ring::{CharPoly, Lattice};
use crate::error::{Error, Result};
use crate::rule_engine;

/// A 0/1 word `ε`. Position `i` (1-based) is `ε_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn new(bits: Vec<bool>) -> Self {
        BitWord { bits }
    }

    pub fn zeros(n: usize) -> Self {
        BitWord { bits: vec![false; n] }
    }

    pub fn ones(n: usize) -> Self {
        BitWord { bits: vec![true; n] }
    }

    /// Bit `k - 1` of `mask` becomes `ε_k`.
    pub fn from_mask(mask: usize, n: usize) -> Self {
        BitWord { bits: (0..n).map(|k| mask >> k & 1 == 1).collect() }
    }

    pub fn mask(&self) -> usize {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| 1usize << k).sum()
    }

    /// Parses a digit string such as `"101"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bit word {text:?} may only contain 0 and 1"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(BitWord { bits })
    }

    /// All words of length `n`, in increasing mask order.
    pub fn all(n: usize) -> impl Iterator<Item = BitWord> {
        (0..1usize << n).map(move |m| BitWord::from_mask(m, n))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `ε_i`, 1-based.
    pub fn get(&self, i: usize) -> bool {
        self.bits[i - 1]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `π_+(ε)`, 1-based and increasing.
    pub fn plus(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.get(i)).collect()
    }

    /// `π_-(ε)`, 1-based and increasing.
    pub fn minus(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| !self.get(i)).collect()
    }

    /// `l(ε) = |π_+(ε)|`.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `ε ≤ ε'` iff `π_+(ε) ⊂ π_+(ε')`.
    pub fn leq(&self, other: &BitWord) -> bool {
        self.len() == other.len() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The integer data `C = {c_{i,j}}` of a Bott tower of height `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerSpec {
    n: usize,
    c: Vec<Vec<i64>>,
    lattice: Arc<Lattice>,
}

impl TowerSpec {
    /// Builds a tower from entries `((i, j), c_{i,j})` with `1 ≤ i < j ≤ n`;
    /// missing entries are zero.
    pub fn new(n: usize, entries: impl IntoIterator<Item = ((usize, usize), i64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("a tower needs at least one stage".into()));
        }
        let mut c = vec![vec![0; n + 1]; n + 1];
        for ((i, j), v) in entries {
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::InvalidInput(format!("entry c_{{{i},{j}}} needs 1 <= i < j <= {n}")));
            }
            c[i][j] = v;
        }
        Ok(TowerSpec { n, c, lattice: Lattice::tower(n) })
    }

    /// Parses `{"n": 2, "c": {"1,2": -1}}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: String| Error::Parse(format!("tower JSON: {msg}"));
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing positive integer \"n\"".into()))? as usize;
        let mut entries = Vec::new();
        if let Some(c) = value.get("c") {
            let map = c.as_object().ok_or_else(|| bad("\"c\" must be an object".into()))?;
            for (key, v) in map {
                let (a, b) = key.split_once(',').ok_or_else(|| bad(format!("key {key:?} must look like \"i,j\"")))?;
                let i: usize = a.trim().parse().map_err(|_| bad(format!("bad index in {key:?}")))?;
                let j: usize = b.trim().parse().map_err(|_| bad(format!("bad index in {key:?}")))?;
                let v = v.as_i64().ok_or_else(|| bad(format!("value of {key:?} must be an integer")))?;
                entries.push(((i, j), v));
            }
        }
        Self::new(n, entries)
    }

    pub fn to_json(&self) -> Value {
        let mut c = serde_json::Map::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                if self.c[i][j] != 0 {
                    c.insert(format!("{i},{j}"), Value::from(self.c[i][j]));
                }
            }
        }
        serde_json::json!({"n": self.n, "c": c})
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// `c_{i,j}` for `i < j`, 1-based.
    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.c[i][j]
    }

    fn check_eps(&self, eps: &BitWord) -> Result<()> {
        if eps.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: eps.len() });
        }
        Ok(())
    }

    /// Full table `t[k][l] = c_{k,l}(ε)` for `1 ≤ k < l ≤ n`.
    pub fn c_table(&self, eps: &BitWord) -> Vec<Vec<i64>> {
        let n = self.n;
        let mut t = vec![vec![0; n + 1]; n + 1];
        for l in 2..=n {
            for k in 1..l {
                let mut v = -self.c[k][l];
                for m in k + 1..l {
                    if eps.get(m) {
                        v -= self.c[m][l] * t[k][m];
                    }
                }
                t[k][l] = v;
            }
        }
        t
    }

    pub fn c_eps(&self, eps: &BitWord, k: usize, l: usize) -> Result<i64> {
        self.check_eps(eps)?;
        if !(1 <= k && k < l && l <= self.n) {
            return Err(Error::InvalidInput(format!("c_{{k,l}}(ε) needs 1 <= k < l <= {}, got k={k}, l={l}", self.n)));
        }
        Ok(self.c_table(eps)[k][l])
    }

    fn weights_from_table(&self, eps: &BitWord, t: &[Vec<i64>]) -> Vec<Vec<i64>> {
        (1..=self.n)
            .map(|i| {
                let mut v = vec![0; self.n];
                v[i - 1] = 1;
                for j in 1..i {
                    if eps.get(j) {
                        v[j - 1] += t[j][i];
                    }
                }
                if !eps.get(i) {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                v
            })
            .collect()
    }

    /// All weights `λ_1(ε), ..., λ_n(ε)` as exponent vectors.
    pub fn weights(&self, eps: &BitWord) -> Result<Vec<Vec<i64>>> {
        self.check_eps(eps)?;
        Ok(self.weights_from_table(eps, &self.c_table(eps)))
    }

    pub fn lambda_eps(&self, eps: &BitWord, i: usize) -> Result<Vec<i64>> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, bound: self.n });
        }
        Ok(self.weights(eps)?.swap_remove(i - 1))
    }
}

/// The three families of generators of the K-theory of a tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    E,
    F,
    L,
}

/// A function from the fixed points `{0,1}^n` to a representation ring,
/// stored densely by mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointClass {
    n: usize,
    values: Vec<CharPoly>,
}

impl FixedPointClass {
    pub fn from_fn(n: usize, mut f: impl FnMut(&BitWord) -> CharPoly) -> Self {
        FixedPointClass { n, values: BitWord::all(n).map(|e| f(&e)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, eps: &BitWord) -> &CharPoly {
        &self.values[eps.mask()]
    }

    pub fn set(&mut self, eps: &BitWord, value: CharPoly) {
        self.values[eps.mask()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (BitWord, &CharPoly)> {
        self.values.iter().enumerate().map(move |(m, v)| (BitWord::from_mask(m, self.n), v))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &FixedPointClass) -> Result<FixedPointClass> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, got: other.n });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.checked_mul(b)).collect::<Result<_>>()?;
        Ok(FixedPointClass { n: self.n, values })
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.iter().map(|(e, v)| (e.to_string(), v.canonical_string())).collect()
    }
}

/// `i^*(E_i)`, `i^*(F_i)` or `i^*(L_i)` on every fixed point.
pub fn restrict_generators(spec: &TowerSpec, which: Generator, i: usize) -> Result<FixedPointClass> {
    if i == 0 || i > spec.n {
        return Err(Error::IndexOutOfRange { index: i, bound: spec.n });
    }
    let lat = spec.lattice.clone();
    Ok(FixedPointClass::from_fn(spec.n, |eps| {
        let t = spec.c_table(eps);
        let w = spec.weights_from_table(eps, &t);
        let neg_li: Vec<i64> = w[i - 1].iter().map(|x| -x).collect();
        match which {
            Generator::E if eps.get(i) => CharPoly::character(&lat, &neg_li),
            Generator::E => CharPoly::one(&lat),
            Generator::F if eps.get(i) => CharPoly::one(&lat) - CharPoly::character(&lat, &neg_li),
            Generator::F => CharPoly::zero(&lat),
            Generator::L => {
                let mut e = vec![0; spec.n];
                e[i - 1] = -1;
                for j in 1..i {
                    if eps.get(j) {
                        e[j - 1] -= t[j][i];
                    }
                }
                CharPoly::character(&lat, &e)
            }
        }
    }))
}

fn basis_value(spec: &TowerSpec, eps: &BitWord, at: &BitWord) -> CharPoly {
    let lat = &spec.lattice;
    if !eps.leq(at) {
        return CharPoly::zero(lat);
    }
    let w = spec.weights(at).expect("length checked");
    let mut unit = vec![0i64; spec.n];
    for i in at.plus() {
        for (u, x) in unit.iter_mut().zip(&w[i - 1]) {
            *u -= x;
        }
    }
    let mut value = CharPoly::character(lat, &unit);
    for i in eps.plus() {
        value = &value * &(CharPoly::character(lat, &w[i - 1]) - CharPoly::one(lat));
    }
    value
}

/// Fixed-point restriction of the basis class `μ̂_ε`.
pub fn restrict_basis_class(spec: &TowerSpec, eps: &BitWord) -> Result<FixedPointClass> {
    spec.check_eps(eps)?;
    Ok(FixedPointClass::from_fn(spec.n, |at| basis_value(spec, eps, at)))
}

/// `χ(Ȳ_ε, cls) = Σ_{ε' ≤ ε} cls(ε') / Π_{i ∈ π_+(ε)} (1 - e^{-λ_i(ε')})`.
///
/// The sum is taken over the least common multiple of the denominators.
/// Each factor is first written as a unit times `1 - e^ν` with `ν` the
/// lexicographically positive one of `±λ_i(ε')`, which makes equal factors
/// syntactically equal.
pub fn chi_localized(spec: &TowerSpec, eps: &BitWord, cls: &FixedPointClass) -> Result<CharPoly> {
    spec.check_eps(eps)?;
    if cls.n != spec.n {
        return Err(Error::LengthMismatch { expected: spec.n, got: cls.n });
    }
    let lat = &spec.lattice;
    let plus = eps.plus();

    struct Term<'a> {
        value: &'a CharPoly,
        unit_inv: Vec<i64>,
        sign: bool,
        factors: Vec<Vec<i64>>,
    }
    let mut terms = Vec::new();
    let mut lcd: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for at in BitWord::all(spec.n).filter(|at| at.leq(eps)) {
        let value = cls.get(&at);
        if value.is_zero() {
            continue;
        }
        let w = spec.weights(&at)?;
        let mut unit_inv = vec![0i64; spec.n];
        let mut sign = false;
        let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for &i in &plus {
            let mu: Vec<i64> = w[i - 1].iter().map(|x| -x).collect();
            let positive = mu.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
            let nu = if positive {
                mu
            } else {
                // 1 - e^{mu} = -e^{mu} (1 - e^{-mu})
                sign = !sign;
                for (u, x) in unit_inv.iter_mut().zip(&mu) {
                    *u -= x;
                }
                mu.iter().map(|x| -x).collect()
            };
            *counts.entry(nu).or_default() += 1;
        }
        for (nu, k) in &counts {
            let slot = lcd.entry(nu.clone()).or_default();
            *slot = (*slot).max(*k);
        }
        terms.push(Term { value, unit_inv, sign, factors: counts.into_iter().flat_map(|(nu, k)| std::iter::repeat_n(nu, k)).collect() });
    }
    if terms.is_empty() {
        return Ok(CharPoly::zero(lat));
    }
    let factor = |nu: &[i64]| CharPoly::one(lat) - CharPoly::character(lat, nu);
    let mut numerator = CharPoly::zero(lat);
    for t in &terms {
        let mut missing = lcd.clone();
        for nu in &t.factors {
            *missing.get_mut(nu).expect("present") -= 1;
        }
        let coeff = if t.sign { BigInt::from(-1) } else { BigInt::from(1) };
        let mut piece = t.value.mul_term(&t.unit_inv, &coeff);
        for (nu, k) in &missing {
            for _ in 0..*k {
                piece = &piece * &factor(nu);
            }
        }
        numerator += piece;
    }
    let mut denominator = CharPoly::one(lat);
    for (nu, k) in &lcd {
        for _ in 0..*k {
            denominator = &denominator * &factor(nu);
        }
    }
    numerator.exact_div(&denominator)
}

/// The structure constant `r_{ε,ε'}^{ε''}` of the tower.
pub fn tower_structure_const(spec: &TowerSpec, e1: &BitWord, e2: &BitWord, e3: &BitWord) -> Result<CharPoly> {
    for e in [e1, e2, e3] {
        spec.check_eps(e)?;
    }
    let l = rule_engine::build_l(spec);
    let p = rule_engine::build_s(e1, &spec.lattice).mul(&rule_engine::build_s(e2, &spec.lattice))?;
    rule_engine::r_op(&l, e3, &p)
}

/// All `r_{e1,e2}^{ε}` at once, by solving
/// `μ̂_{e1}(a) μ̂_{e2}(a) = Σ_{ε ≤ a} r^ε μ̂_ε(a)` upward through the fixed
/// points. Independent of the rule engine; used to cross-check it.
pub fn structure_consts_by_restriction(spec: &TowerSpec, e1: &BitWord, e2: &BitWord) -> Result<BTreeMap<BitWord, CharPoly>> {
    let product = restrict_basis_class(spec, e1)?.mul(&restrict_basis_class(spec, e2)?)?;
    let mut order: Vec<BitWord> = BitWord::all(spec.n).collect();
    order.sort_by_key(|e| (e.weight(), e.mask()));
    let mut solved: BTreeMap<BitWord, CharPoly> = BTreeMap::new();
    for at in order {
        let mut rest = product.get(&at).clone();
        for (e, r) in &solved {
            if !r.is_zero() && e.leq(&at) {
                rest -= &(r * &basis_value(spec, e, &at));
            }
        }
        let value = rest.exact_div(&basis_value(spec, &at, &at))?;
        solved.insert(at, value);
    }
    Ok(solved)
}
