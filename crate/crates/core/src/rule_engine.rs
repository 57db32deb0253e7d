//! The algebra `R[X_1^{±1}, ..., X_N^{±1}, Z_1, ..., Z_N]` over a
//! representation ring, the monomials `L_i`, the recursive operator `R^ε`
//! and the basis expansion it computes.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bott_tower::{BitWord, TowerSpec};
use crate::char_ring::{CharPoly, Lattice};
use crate::error::{Error, Result};
use crate::root_weyl::CartanMatrix;

type Key = (Vec<i64>, Vec<u32>);

/// A polynomial in invertible `X_i` and polynomial `Z_i` with
/// [`CharPoly`] coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RulePoly {
    n: usize,
    lattice: Arc<Lattice>,
    terms: BTreeMap<Key, CharPoly>,
}

fn add_into(map: &mut HashMap<Key, CharPoly>, key: Key, c: CharPoly) {
    if c.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl RulePoly {
    pub fn zero(n: usize, lattice: &Arc<Lattice>) -> Self {
        RulePoly { n, lattice: lattice.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: CharPoly) -> Self {
        let lattice = c.lattice().clone();
        let mut p = Self::zero(n, &lattice);
        p.add_term((vec![0; n], vec![0; n]), c);
        p
    }

    pub fn one(n: usize, lattice: &Arc<Lattice>) -> Self {
        Self::constant(n, CharPoly::one(lattice))
    }

    /// `c · X^x · Z^z`.
    pub fn monomial(x: Vec<i64>, z: Vec<u32>, c: CharPoly) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch { expected: x.len(), got: z.len() });
        }
        let mut p = Self::zero(x.len(), c.lattice());
        p.add_term((x, z), c);
        Ok(p)
    }

    /// The variable `X_i`, 1-based.
    pub fn x(n: usize, i: usize, lattice: &Arc<Lattice>) -> Self {
        let mut x = vec![0; n];
        x[i - 1] = 1;
        let mut p = Self::zero(n, lattice);
        p.add_term((x, vec![0; n]), CharPoly::one(lattice));
        p
    }

    /// The variable `Z_i`, 1-based.
    pub fn z(n: usize, i: usize, lattice: &Arc<Lattice>) -> Self {
        let mut z = vec![0; n];
        z[i - 1] = 1;
        let mut p = Self::zero(n, lattice);
        p.add_term((vec![0; n], z), CharPoly::one(lattice));
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(x exponents, z exponents, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &[u32], &CharPoly)> {
        self.terms.iter().map(|((x, z), c)| (x.as_slice(), z.as_slice(), c))
    }

    fn add_term(&mut self, key: Key, c: CharPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, got: other.n });
        }
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc: HashMap<Key, CharPoly> = HashMap::new();
        for ((x1, z1), c1) in &self.terms {
            for ((x2, z2), c2) in &other.terms {
                let x = x1.iter().zip(x2).map(|(a, b)| a + b).collect();
                let z = z1.iter().zip(z2).map(|(a, b)| a + b).collect();
                add_into(&mut acc, (x, z), c1 * c2);
            }
        }
        Ok(self.with_terms(acc))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &CharPoly) -> Result<Self> {
        if c.lattice() != &self.lattice {
            return Err(Error::LatticeMismatch);
        }
        let mut out = Self::zero(self.n, &self.lattice);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        Ok(out)
    }

    fn with_terms(&self, acc: HashMap<Key, CharPoly>) -> Self {
        RulePoly { n: self.n, lattice: self.lattice.clone(), terms: acc.into_iter().collect() }
    }
}

/// The monomials `L_i = e^{u_i} Π_{j<i} X_j^{x_{i,j}}`, one per index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LMonomials {
    lattice: Arc<Lattice>,
    units: Vec<Vec<i64>>,
    xexps: Vec<Vec<i64>>,
}

impl LMonomials {
    /// Builds the monomials from their character exponents and their
    /// `X` exponents; `xexps[i]` may only involve indices below `i`.
    pub fn new(lattice: &Arc<Lattice>, units: Vec<Vec<i64>>, xexps: Vec<Vec<i64>>) -> Result<Self> {
        let n = units.len();
        if xexps.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: xexps.len() });
        }
        for (i, (u, x)) in units.iter().zip(&xexps).enumerate() {
            if u.len() != lattice.dim() {
                return Err(Error::LengthMismatch { expected: lattice.dim(), got: u.len() });
            }
            if x.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: x.len() });
            }
            if x[i..].iter().any(|&k| k != 0) {
                return Err(Error::InvalidInput(format!("L_{} may only involve X_j with j < {}", i + 1, i + 1)));
            }
        }
        Ok(LMonomials { lattice: lattice.clone(), units, xexps })
    }

    pub fn n(&self) -> usize {
        self.units.len()
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Character exponent of `L_i`, 1-based.
    pub fn unit(&self, i: usize) -> &[i64] {
        &self.units[i - 1]
    }

    /// `X` exponents of `L_i`, 1-based.
    pub fn xexp(&self, i: usize) -> &[i64] {
        &self.xexps[i - 1]
    }

    /// True when every character exponent is zero, as for the monomials of
    /// ordinary K-theory.
    pub fn is_ordinary(&self) -> bool {
        self.units.iter().all(|u| u.iter().all(Zero::is_zero))
    }

    pub fn to_rule_poly(&self, i: usize) -> RulePoly {
        let n = self.n();
        RulePoly::monomial(self.xexps[i - 1].clone(), vec![0; n], CharPoly::character(&self.lattice, &self.units[i - 1]))
            .expect("lengths agree")
    }
}

/// `L_i = e^{-λ_i} Π_{j<i} X_j^{-c_{j,i}}` for a tower.
pub fn build_l(spec: &TowerSpec) -> LMonomials {
    let n = spec.n();
    let units = (1..=n)
        .map(|i| {
            let mut u = vec![0; n];
            u[i - 1] = -1;
            u
        })
        .collect();
    let xexps = (1..=n).map(|i| (1..=n).map(|j| if j < i { -spec.c(j, i) } else { 0 }).collect()).collect();
    LMonomials::new(spec.lattice(), units, xexps).expect("well formed")
}

fn word_xexps(cartan: &CartanMatrix, word: &[usize]) -> Vec<Vec<i64>> {
    let n = word.len();
    (0..n)
        .map(|i| (0..n).map(|j| if j < i { -cartan.entry(word[j], word[i]) } else { 0 }).collect())
        .collect()
}

fn check_word(cartan: &CartanMatrix, word: &[usize]) -> Result<()> {
    if word.is_empty() {
        return Err(Error::InvalidInput("word must be nonempty".into()));
    }
    for &i in word {
        if i == 0 || i > cartan.rank() {
            return Err(Error::IndexOutOfRange { index: i, bound: cartan.rank() });
        }
    }
    Ok(())
}

/// `M_i = e^{-μ_i} Π_{j<i} X_j^{-b_{j,i}}` with `b_{j,i} = a_{μ_j μ_i}`,
/// over the root lattice.
pub fn build_m(cartan: &CartanMatrix, word: &[usize]) -> Result<LMonomials> {
    check_word(cartan, word)?;
    let lattice = Lattice::roots(cartan.rank());
    let units = word.iter().map(|&mu| cartan.simple_root(mu).iter().map(|x| -x).collect()).collect();
    LMonomials::new(&lattice, units, word_xexps(cartan, word))
}

/// The monomials `m_i` of ordinary K-theory: `M_i` without the character
/// factor. They still live over the root lattice, so every value of `R^ε`
/// is a constant.
pub fn build_m_ordinary(cartan: &CartanMatrix, word: &[usize]) -> Result<LMonomials> {
    check_word(cartan, word)?;
    let lattice = Lattice::roots(cartan.rank());
    let units = vec![vec![0; cartan.rank()]; word.len()];
    LMonomials::new(&lattice, units, word_xexps(cartan, word))
}

/// `S_ε = Π_{i∈π_-(ε)} X_i Π_{j∈π_+(ε)} Z_j`.
pub fn build_s(eps: &BitWord, lattice: &Arc<Lattice>) -> RulePoly {
    let x = eps.bits().iter().map(|&b| if b { 0 } else { 1 }).collect();
    let z = eps.bits().iter().map(|&b| u32::from(b)).collect();
    RulePoly::monomial(x, z, CharPoly::one(lattice)).expect("lengths agree")
}

/// `Q_ε = Π_{i∈π_-(ε)} X_i Π_{j∈π_+(ε)} (1 - X_j)`, free of `Z`.
pub fn build_q(eps: &BitWord, lattice: &Arc<Lattice>) -> RulePoly {
    let n = eps.len();
    let mut p = RulePoly::one(n, lattice);
    for i in 1..=n {
        let f = if eps.get(i) {
            RulePoly::one(n, lattice).sub(&RulePoly::x(n, i, lattice)).expect("same shape")
        } else {
            RulePoly::x(n, i, lattice)
        };
        p = p.mul(&f).expect("same shape");
    }
    p
}

fn check_shapes(l: &LMonomials, eps: Option<&BitWord>, p: &RulePoly) -> Result<()> {
    if p.n != l.n() {
        return Err(Error::LengthMismatch { expected: l.n(), got: p.n });
    }
    if let Some(eps) = eps {
        if eps.len() != l.n() {
            return Err(Error::LengthMismatch { expected: l.n(), got: eps.len() });
        }
    }
    if p.lattice != l.lattice {
        return Err(Error::LatticeMismatch);
    }
    Ok(())
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut b = BigInt::one();
    for t in 0..k {
        b = b * (n - t) / (t + 1);
    }
    b
}

/// Adds `coeff · L_p^k` times the monomial `(x, z)` with coefficient `c`.
fn emit(out: &mut HashMap<Key, CharPoly>, l: &LMonomials, p: usize, x: &[i64], z: &[u32], c: &CharPoly, k: i64, coeff: &BigInt) {
    let unit: Vec<i64> = l.unit(p).iter().map(|u| u * k).collect();
    let xs: Vec<i64> = x.iter().zip(l.xexp(p)).map(|(a, b)| a + k * b).collect();
    add_into(out, (xs, z.to_vec()), c.mul_term(&unit, coeff));
}

/// The operator `R^ε`.
///
/// Indices of `π_+(ε)` are processed from the largest down. A monomial
/// `S X_p^r Z_p^s` becomes `S (1 - L_p)^{s-1} L_p^r` when `s > 0`; when
/// `s = 0` it becomes `S` for `r = 0`, vanishes for `r = 1`, becomes
/// `-S (L_p + ... + L_p^{r-1})` for `r > 1` and `S (L_p^r + ... + L_p^0)`
/// for `r < 0`. What remains is evaluated at `X = 1`, `Z = 0`.
pub fn r_op(l: &LMonomials, eps: &BitWord, p: &RulePoly) -> Result<CharPoly> {
    check_shapes(l, Some(eps), p)?;
    let plus = eps.plus();
    let survives = |z: &[u32]| z.iter().enumerate().all(|(k, &s)| s == 0 || eps.get(k + 1));
    let mut work: HashMap<Key, CharPoly> = HashMap::new();
    for (k, c) in &p.terms {
        if survives(&k.1) {
            add_into(&mut work, k.clone(), c.clone());
        }
    }
    let one = BigInt::one();
    let minus_one = -BigInt::one();
    for &idx in plus.iter().rev() {
        let mut next: HashMap<Key, CharPoly> = HashMap::with_capacity(work.len());
        for ((mut x, mut z), c) in work {
            let r = x[idx - 1];
            let s = z[idx - 1];
            x[idx - 1] = 0;
            z[idx - 1] = 0;
            if s > 0 {
                for j in 0..s {
                    let mut b = binomial(s - 1, j);
                    if j % 2 == 1 {
                        b = -b;
                    }
                    emit(&mut next, l, idx, &x, &z, &c, r + i64::from(j), &b);
                }
            } else if r == 0 {
                emit(&mut next, l, idx, &x, &z, &c, 0, &one);
            } else if r > 1 {
                for k in 1..r {
                    emit(&mut next, l, idx, &x, &z, &c, k, &minus_one);
                }
            } else if r < 0 {
                for k in r..=0 {
                    emit(&mut next, l, idx, &x, &z, &c, k, &one);
                }
            }
        }
        work = next;
    }
    let mut total = CharPoly::zero(&l.lattice);
    for c in work.into_values() {
        total += c;
    }
    Ok(total)
}

/// Coefficients of `P` in the basis `{Q_ε}` of the quotient by the
/// relations `X_i^2 - X_i + (1 - X_i) L_i`, after substituting
/// `Z_i = 1 - X_i`. Every `ε` of length `N` appears in the result.
pub fn expand_in_basis(l: &LMonomials, p: &RulePoly) -> Result<BTreeMap<BitWord, CharPoly>> {
    check_shapes(l, None, p)?;
    let n = l.n();
    let mut work: HashMap<Vec<i64>, CharPoly> = HashMap::new();
    for ((x, z), c) in &p.terms {
        // Π (1 - X_i)^{z_i}, expanded one index at a time.
        let mut parts: Vec<(Vec<i64>, BigInt)> = vec![(x.clone(), BigInt::one())];
        for (i, &zi) in z.iter().enumerate() {
            if zi == 0 {
                continue;
            }
            let mut grown = Vec::with_capacity(parts.len() * (zi as usize + 1));
            for (xs, b) in &parts {
                for k in 0..=zi {
                    let mut bk = binomial(zi, k) * b;
                    if k % 2 == 1 {
                        bk = -bk;
                    }
                    let mut xk = xs.clone();
                    xk[i] += i64::from(k);
                    grown.push((xk, bk));
                }
            }
            parts = grown;
        }
        for (xs, b) in parts {
            let zero = vec![0; l.lattice.dim()];
            let piece = c.mul_term(&zero, &b);
            if piece.is_zero() {
                continue;
            }
            match work.entry(xs) {
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(piece);
                }
                std::collections::hash_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += piece;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
    }

    let one = BigInt::one();
    let minus_one = -BigInt::one();
    for idx in (1..=n).rev() {
        let mut next: HashMap<Key, CharPoly> = HashMap::with_capacity(work.len());
        let zs = vec![0u32; n];
        for (mut x, c) in work {
            let e = x[idx - 1];
            x[idx - 1] = 0;
            let mut x1 = x.clone();
            x1[idx - 1] = 1;
            match e {
                0 => emit(&mut next, l, idx, &x, &zs, &c, 0, &one),
                1 => emit(&mut next, l, idx, &x1, &zs, &c, 0, &one),
                e if e > 1 => {
                    for k in 1..e {
                        emit(&mut next, l, idx, &x, &zs, &c, k, &minus_one);
                    }
                    for k in 0..e {
                        emit(&mut next, l, idx, &x1, &zs, &c, k, &one);
                    }
                }
                e => {
                    for k in e..=0 {
                        emit(&mut next, l, idx, &x, &zs, &c, k, &one);
                    }
                    for k in e..0 {
                        emit(&mut next, l, idx, &x1, &zs, &c, k, &minus_one);
                    }
                }
            }
        }
        work = next.into_iter().map(|((x, _), c)| (x, c)).collect();
    }

    // work is now multilinear: coefficient c_S of Π_{i∈S} X_i.
    let mut by_mask = vec![CharPoly::zero(&l.lattice); 1usize << n];
    for (x, c) in work {
        let mask = x.iter().enumerate().filter(|(_, &k)| k == 1).map(|(k, _)| 1usize << k).sum::<usize>();
        by_mask[mask] += c;
    }
    // Π_{i∈S} X_i = Σ_{ε : π_-(ε) ⊇ S} Q_ε, so the Q_ε coefficient is a sum
    // over subsets of π_-(ε).
    for bit in 0..n {
        for mask in 0..1usize << n {
            if mask >> bit & 1 == 1 {
                let lower = by_mask[mask ^ (1 << bit)].clone();
                by_mask[mask] += lower;
            }
        }
    }
    let full = (1usize << n) - 1;
    Ok(BitWord::all(n).map(|eps| {
        let minus_mask = full ^ eps.mask();
        let v = std::mem::replace(&mut by_mask[minus_mask], CharPoly::zero(&l.lattice));
        (eps, v)
    }).collect())
}
