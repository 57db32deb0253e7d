//! Representation rings of tori.
//!
//! A [`CharPoly`] is a finite integer combination of characters `e^α` where
//! `α` runs over a fixed exponent [`Lattice`]. This is the ring `R[T]` of a
//! torus: a Laurent polynomial ring with integer coefficients. Coefficients are
//! arbitrary precision.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exponent lattice of a torus, with one label per basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    labels: Vec<String>,
}

impl Lattice {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidLattice("a lattice needs at least one basis label".into()));
        }
        for (k, label) in labels.iter().enumerate() {
            let valid = label
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidLattice(format!("bad label {label:?}")));
            }
            if labels[..k].contains(label) {
                return Err(Error::InvalidLattice(format!("duplicate label {label:?}")));
            }
        }
        Ok(Arc::new(Lattice { labels }))
    }

    /// Root lattice of rank `r`, labelled `a1..ar`.
    pub fn roots(rank: usize) -> Arc<Self> {
        Self::new((1..=rank).map(|i| format!("a{i}"))).expect("rank must be positive")
    }

    /// Character lattice of a Bott tower torus, labelled `l1..ln`.
    pub fn tower(n: usize) -> Arc<Self> {
        Self::new((1..=n).map(|i| format!("l{i}"))).expect("dimension must be positive")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Sparse Laurent polynomial `Σ c_α e^α` with integer coefficients.
#[derive(Debug, Clone)]
pub struct CharPoly {
    lattice: Arc<Lattice>,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl PartialEq for CharPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
            && (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice)
    }
}

impl Eq for CharPoly {}

impl CharPoly {
    pub fn zero(lattice: &Arc<Lattice>) -> Self {
        CharPoly { lattice: lattice.clone(), terms: BTreeMap::new() }
    }

    pub fn one(lattice: &Arc<Lattice>) -> Self {
        Self::constant(lattice, 1)
    }

    pub fn constant(lattice: &Arc<Lattice>, c: impl Into<BigInt>) -> Self {
        Self::monomial(lattice, vec![0; lattice.dim()], c)
    }

    /// The character `e^α`.
    pub fn character(lattice: &Arc<Lattice>, exponent: &[i64]) -> Self {
        Self::monomial(lattice, exponent.to_vec(), 1)
    }

    pub fn monomial(lattice: &Arc<Lattice>, exponent: Vec<i64>, c: impl Into<BigInt>) -> Self {
        assert_eq!(exponent.len(), lattice.dim(), "exponent length must match the lattice");
        let mut p = Self::zero(lattice);
        p.add_term(exponent, c.into());
        p
    }

    /// Builds a polynomial from `(coefficient, exponent)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(lattice: &Arc<Lattice>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, Vec<i64>)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(lattice);
        for (c, exp) in terms {
            if exp.len() != lattice.dim() {
                return Err(Error::LengthMismatch { expected: lattice.dim(), got: exp.len() });
            }
            p.add_term(exp, c.into());
        }
        Ok(p)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| c.is_one() && e.iter().all(|&k| k == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exponent: &[i64]) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    /// Coefficient of `e^0`.
    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.lattice.dim()])
    }

    /// The single term of a monomial, or `None`.
    pub fn as_monomial(&self) -> Option<(&[i64], &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (e.as_slice(), c))
        } else {
            None
        }
    }

    pub(crate) fn add_term(&mut self, exponent: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_lattice(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_lattice(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_lattice(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_lattice(other)?;
        let mut out = Self::zero(&self.lattice);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.lattice);
        }
        CharPoly {
            lattice: self.lattice.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Multiplies by `c·e^shift`.
    pub fn mul_term(&self, shift: &[i64], c: &BigInt) -> Self {
        debug_assert_eq!(shift.len(), self.lattice.dim());
        if c.is_zero() {
            return Self::zero(&self.lattice);
        }
        CharPoly {
            lattice: self.lattice.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), k * c))
                .collect(),
        }
    }

    /// Multiplies by the character `e^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        CharPoly {
            lattice: self.lattice.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), k.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.lattice);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// The duality involution `e^α ↦ e^{-α}`.
    pub fn star(&self) -> Self {
        CharPoly {
            lattice: self.lattice.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|k| -k).collect(), c.clone()))
                .collect(),
        }
    }

    /// Augmentation `R[T] → Z`, evaluating every character at 1.
    pub fn augment(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact quotient `self / divisor` in the Laurent ring.
    ///
    /// Cancels the lex-leading term of the remainder against the lex-leading
    /// term of the divisor. Degrees in each variable are additive, so every
    /// exponent of a true quotient lies in the box
    /// `[min(self) - min(divisor), max(self) - max(divisor)]` taken
    /// coordinatewise; a quotient term outside that box means the division is
    /// not exact. The leading exponent strictly decreases, so this terminates.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_lattice(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut quotient = Self::zero(&self.lattice);
        if self.is_zero() {
            return Ok(quotient);
        }
        let (d_lead, d_lead_c) = divisor.terms.iter().next_back().expect("nonzero");
        let (f_lo, f_hi) = self.exponent_box();
        let (d_lo, d_hi) = divisor.exponent_box();
        let lo: Vec<i64> = f_lo.iter().zip(&d_lo).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = f_hi.iter().zip(&d_hi).map(|(a, b)| a - b).collect();

        let mut rem = self.clone();
        while let Some((r_lead, r_c)) = rem.terms.iter().next_back() {
            let q_exp: Vec<i64> = r_lead.iter().zip(d_lead).map(|(a, b)| a - b).collect();
            let inside = q_exp.iter().zip(lo.iter().zip(&hi)).all(|(q, (l, h))| l <= q && q <= h);
            if !inside {
                return Err(Error::InexactDivision(format!(
                    "({}) is not divisible by ({})",
                    self, divisor
                )));
            }
            let (q_c, r) = r_c.div_rem(d_lead_c);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!(
                    "coefficient {r_c} is not divisible by {d_lead_c}"
                )));
            }
            let neg = -&q_c;
            for (e, c) in &divisor.terms {
                let ex: Vec<i64> = e.iter().zip(&q_exp).map(|(a, b)| a + b).collect();
                rem.add_term(ex, c * &neg);
            }
            quotient.add_term(q_exp, q_c);
        }
        Ok(quotient)
    }

    /// Coordinatewise minimum and maximum of the exponents of a nonzero
    /// polynomial.
    fn exponent_box(&self) -> (Vec<i64>, Vec<i64>) {
        let dim = self.lattice.dim();
        let mut lo = vec![i64::MAX; dim];
        let mut hi = vec![i64::MIN; dim];
        for e in self.terms.keys() {
            for k in 0..dim {
                lo[k] = lo[k].min(e[k]);
                hi[k] = hi[k].max(e[k]);
            }
        }
        (lo, hi)
    }

    /// Applies the linear map sending basis vector `k` of this lattice to
    /// `images[k]` in `target`.
    pub fn map_lattice(&self, target: &Arc<Lattice>, images: &[Vec<i64>]) -> Result<Self> {
        if images.len() != self.lattice.dim() {
            return Err(Error::LengthMismatch { expected: self.lattice.dim(), got: images.len() });
        }
        if let Some(bad) = images.iter().find(|v| v.len() != target.dim()) {
            return Err(Error::LengthMismatch { expected: target.dim(), got: bad.len() });
        }
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut img = vec![0i64; target.dim()];
            for (k, &ek) in e.iter().enumerate() {
                for (slot, v) in img.iter_mut().zip(&images[k]) {
                    *slot += ek * v;
                }
            }
            out.add_term(img, c.clone());
        }
        Ok(out)
    }

    /// Terms in canonical order: total degree descending, then exponent
    /// vector lexicographically descending.
    pub fn canonical_terms(&self) -> Vec<(&[i64], &BigInt)> {
        let mut v: Vec<(&[i64], &BigInt)> = self.terms().collect();
        v.sort_by(|(a, _), (b, _)| canonical_cmp(a, b));
        v
    }

    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.canonical_terms().into_iter().enumerate() {
            let is_const = e.iter().all(|&x| x == 0);
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            if is_const {
                out.push_str(&abs.to_string());
                continue;
            }
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push('*');
            }
            out.push_str("e^{");
            out.push_str(&render_exponent(e, self.lattice.labels()));
            out.push('}');
        }
        out
    }

    /// Parses the text form. Terms may appear in any order, repeated
    /// exponents are combined and `e^{0}` is accepted for the constant
    /// character.
    pub fn parse(text: &str, lattice: &Arc<Lattice>) -> Result<Self> {
        Parser::new(text, lattice).parse_poly()
    }

    /// JSON form: a list of `[coefficient, [exponents...]]` pairs in
    /// canonical order. Coefficients that do not fit in an `i64` are written
    /// as decimal strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.canonical_terms()
                .into_iter()
                .map(|(e, c)| {
                    let coeff = match c.to_i64() {
                        Some(k) => Value::from(k),
                        None => Value::from(c.to_string()),
                    };
                    Value::Array(vec![coeff, Value::from(e.to_vec())])
                })
                .collect(),
        )
    }

    pub fn from_json(value: &Value, lattice: &Arc<Lattice>) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("CharPoly JSON: {msg}"));
        let items = value.as_array().ok_or_else(|| bad("expected a list of terms"))?;
        let mut p = Self::zero(lattice);
        for item in items {
            let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term must be a pair"))?;
            let c: BigInt = match &pair[0] {
                Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| bad("coefficient must be an integer"))?,
                Value::String(s) => s.parse().map_err(|_| bad("bad coefficient string"))?,
                _ => return Err(bad("coefficient must be a number or string")),
            };
            let exp = pair[1]
                .as_array()
                .ok_or_else(|| bad("exponent must be a list"))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("exponent entries must be integers")))
                .collect::<Result<Vec<i64>>>()?;
            if exp.len() != lattice.dim() {
                return Err(Error::LengthMismatch { expected: lattice.dim(), got: exp.len() });
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }
}

fn canonical_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

fn render_exponent(e: &[i64], labels: &[String]) -> String {
    let mut s = String::new();
    for (k, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if x < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if x.abs() != 1 {
            s.push_str(&x.abs().to_string());
            s.push('*');
        }
        s.push_str(&labels[k]);
    }
    s
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    lattice: &'a Arc<Lattice>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, lattice: &'a Arc<Lattice>) -> Self {
        Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, lattice }
    }

    fn err(&self, msg: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at offset {} in {text:?}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn number(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    fn label(&mut self) -> Option<String> {
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            return None;
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    fn parse_poly(&mut self) -> Result<CharPoly> {
        let mut p = CharPoly::zero(self.lattice);
        if self.chars.is_empty() {
            return Err(self.err("empty input"));
        }
        let mut first = true;
        while self.pos < self.chars.len() {
            let neg = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else {
                return Err(self.err("expected '+' or '-'"));
            };
            first = false;
            let (exp, c) = self.parse_term()?;
            p.add_term(exp, if neg { -c } else { c });
        }
        Ok(p)
    }

    fn parse_term(&mut self) -> Result<(Vec<i64>, BigInt)> {
        let dim = self.lattice.dim();
        let coeff = self.number();
        let has_char = match coeff {
            Some(_) => self.eat('*'),
            None => true,
        };
        if !has_char {
            return Ok((vec![0; dim], coeff.expect("checked")));
        }
        if !(self.eat('e') && self.eat('^')) {
            return Err(self.err("expected e^{...}"));
        }
        self.expect('{')?;
        let mut exp = vec![0i64; dim];
        if self.eat('0') {
            self.expect('}')?;
            return Ok((exp, coeff.unwrap_or_else(BigInt::one)));
        }
        let mut first = true;
        while !self.eat('}') {
            let neg = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else {
                return Err(self.err("expected '+', '-' or '}'"));
            };
            first = false;
            let k = match self.number() {
                Some(k) => {
                    self.expect('*')?;
                    k.to_i64().ok_or_else(|| self.err("exponent too large"))?
                }
                None => 1,
            };
            let label = self.label().ok_or_else(|| self.err("expected a lattice label"))?;
            let idx = self.lattice.index_of(&label).ok_or_else(|| self.err(&format!("unknown label {label:?}")))?;
            exp[idx] += if neg { -k } else { k };
        }
        Ok((exp, coeff.unwrap_or_else(BigInt::one)))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, 'b> $tr<&'b CharPoly> for &'a CharPoly {
            type Output = CharPoly;
            fn $method(self, rhs: &'b CharPoly) -> CharPoly {
                self.$checked(rhs).expect("CharPoly operands over different lattices")
            }
        }
        impl $tr<CharPoly> for CharPoly {
            type Output = CharPoly;
            fn $method(self, rhs: CharPoly) -> CharPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b CharPoly> for CharPoly {
            type Output = CharPoly;
            fn $method(self, rhs: &'b CharPoly) -> CharPoly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<CharPoly> for &'a CharPoly {
            type Output = CharPoly;
            fn $method(self, rhs: CharPoly) -> CharPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl AddAssign<&CharPoly> for CharPoly {
    fn add_assign(&mut self, rhs: &CharPoly) {
        self.check_lattice(rhs).expect("CharPoly operands over different lattices");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl AddAssign<CharPoly> for CharPoly {
    fn add_assign(&mut self, rhs: CharPoly) {
        self.check_lattice(&rhs).expect("CharPoly operands over different lattices");
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl SubAssign<&CharPoly> for CharPoly {
    fn sub_assign(&mut self, rhs: &CharPoly) {
        self.check_lattice(rhs).expect("CharPoly operands over different lattices");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c);
        }
    }
}

impl Neg for &CharPoly {
    type Output = CharPoly;
    fn neg(self) -> CharPoly {
        CharPoly {
            lattice: self.lattice.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for CharPoly {
    type Output = CharPoly;
    fn neg(mut self) -> CharPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat2() -> Arc<Lattice> {
        Lattice::roots(2)
    }

    fn p(s: &str) -> CharPoly {
        CharPoly::parse(s, &lat2()).unwrap()
    }

    #[test]
    fn products_expand() {
        assert_eq!(p("1-e^{a1}") * p("1+e^{a1}"), p("1-e^{2*a1}"));
        assert_eq!(p("e^{a1+a2}") * p("1+e^{a1}"), p("e^{a1+a2}+e^{2*a1+a2}"));
        let f = p("3*e^{a1}-e^{-a2}+7");
        assert!((&f + &(-&f)).is_zero());
        assert_eq!((&f + &(-&f)).num_terms(), 0);
    }

    #[test]
    fn star_examples() {
        assert_eq!(p("1").star(), p("1"));
        assert_eq!(p("-e^{2*a1+2*a2}").star(), p("-e^{-2*a1-2*a2}"));
        let lhs = (p("e^{-a1-a2}") * p("1+e^{-a1}")).star();
        assert_eq!(lhs, p("e^{a1+a2}") * p("1+e^{a1}"));
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("1-e^{2*a1}").exact_div(&p("1-e^{a1}")).unwrap(), p("1+e^{a1}"));
        assert!(matches!(
            p("1-e^{a1}").exact_div(&p("1-e^{a2}")),
            Err(Error::InexactDivision(_))
        ));
        assert_eq!(p("1").exact_div(&CharPoly::zero(&lat2())), Err(Error::DivisionByZero));
        assert!(p("0").exact_div(&p("e^{a1}-1")).unwrap().is_zero());
        // Laurent units divide everything.
        assert_eq!(p("e^{a1}+2").exact_div(&p("-e^{-a2}")).unwrap(), p("-e^{a1+a2}-2*e^{a2}"));
        assert!(p("3*e^{a1}").exact_div(&p("2")).is_err());
        assert!(p("1").exact_div(&p("1-e^{a1}")).is_err());
    }

    #[test]
    fn augmentation() {
        assert_eq!(p("1").augment(), BigInt::from(1));
        assert_eq!((p("e^{a1+a2}") * p("1+e^{a1}")).augment(), BigInt::from(2));
        assert_eq!(p("1-e^{a1}").augment(), BigInt::from(0));
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(CharPoly::zero(&lat2()).canonical_string(), "0");
        assert_eq!(p("-e^{2*a1+2*a2}").canonical_string(), "-e^{2*a1+2*a2}");
        assert_eq!(p("e^{a1+a2}+e^{2*a1+a2}").canonical_string(), "e^{2*a1+a2}+e^{a1+a2}");
        assert_eq!(p("-1+e^{-a1}+3*e^{a2-2*a1}").canonical_string(), "-1+e^{-a1}+3*e^{-2*a1+a2}");
        assert_eq!(p("e^{0}-2").canonical_string(), "-1");
        assert_eq!(p("e^{a1} - e^{a1}").canonical_string(), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "e^{a3}", "e^{a1", "2e^{a1}", "1++", "e^a1", "x"] {
            assert!(CharPoly::parse(bad, &lat2()).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn json_form() {
        let f = p("e^{a1+a2}+e^{2*a1+a2}-4");
        let j = f.to_json();
        assert_eq!(j.to_string(), "[[1,[2,1]],[1,[1,1]],[-4,[0,0]]]");
        assert_eq!(CharPoly::from_json(&j, &lat2()).unwrap(), f);
        let big = p("123456789012345678901234567890*e^{a1}");
        assert_eq!(CharPoly::from_json(&big.to_json(), &lat2()).unwrap(), big);
    }

    #[test]
    fn lattice_mismatch_is_an_error() {
        let a = CharPoly::one(&Lattice::roots(2));
        let b = CharPoly::one(&Lattice::tower(2));
        assert_eq!(a.checked_mul(&b), Err(Error::LatticeMismatch));
        assert_eq!(a.checked_add(&b), Err(Error::LatticeMismatch));
        assert_eq!(CharPoly::one(&Lattice::roots(3)).checked_add(&a), Err(Error::LatticeMismatch));
    }

    #[test]
    fn lattice_labels_validated() {
        assert!(Lattice::new(["a", "a"]).is_err());
        assert!(Lattice::new(Vec::<String>::new()).is_err());
        assert!(Lattice::new(["1x"]).is_err());
        assert_eq!(Lattice::tower(3).labels(), ["l1", "l2", "l3"]);
    }

    #[test]
    fn map_lattice_substitutes() {
        let t = Lattice::tower(2);
        let f = CharPoly::parse("e^{l1-l2}+2", &t).unwrap();
        let g = f.map_lattice(&lat2(), &[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(g, p("e^{-a2}+2"));
    }
}
