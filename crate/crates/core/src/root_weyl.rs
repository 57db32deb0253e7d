//! Generalized Cartan matrices, Weyl groups, Bruhat order and the 0-Hecke
//! monoid.
//!
//! Simple roots are the standard basis of the root lattice `Z^r`. The Cartan
//! entry `a_ij` is the pairing `α_j(h_i)`, so the simple reflection acts by
//! `s_i(α_j) = α_j - a_ij α_i`. Indices in words and in public methods are
//! 1-based.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Coordinates of a root-lattice vector in the basis of simple roots.
pub type RootVec = Vec<i64>;

/// Default cap on the size of enumerated Bruhat intervals and group layers.
pub const DEFAULT_CAP: usize = 10_000;

/// Row-major square integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Mat {
    n: usize,
    data: Vec<i64>,
}

impl Mat {
    fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Mat { n, data }
    }

    fn at(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    fn mul(&self, other: &Mat) -> Mat {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.at(k, j);
                }
            }
        }
        Mat { n, data }
    }

    fn apply(&self, v: &[i64]) -> RootVec {
        (0..self.n).map(|i| (0..self.n).map(|j| self.at(i, j) * v[j]).sum()).collect()
    }

    /// Sign of column `j`, which is the image of a simple root and so is a
    /// real root: either all entries are `>= 0` or all are `<= 0`.
    fn column_negative(&self, j: usize) -> bool {
        (0..self.n).any(|i| self.at(i, j) < 0)
    }
}

/// A validated generalized Cartan matrix together with its simple
/// reflections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    rank: usize,
    entries: Vec<Vec<i64>>,
    gens: Vec<Mat>,
}

#[derive(Deserialize)]
struct CartanJson {
    rank: usize,
    matrix: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Validates a generalized Cartan matrix.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let r = entries.len();
        if r == 0 {
            return Err(Error::InvalidCartan("matrix is empty".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidCartan(format!("row {} has length {}, expected {r}", i + 1, row.len())));
            }
        }
        for i in 0..r {
            if entries[i][i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry a_{0}{0} is {1}, expected 2", i + 1, entries[i][i])));
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                if entries[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!("positive off-diagonal entry a_{}{} = {}", i + 1, j + 1, entries[i][j])));
                }
                if (entries[i][j] == 0) != (entries[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("a_{0}{1} and a_{1}{0} must vanish together", i + 1, j + 1)));
                }
            }
        }
        let gens = (0..r)
            .map(|i| {
                let mut m = Mat::identity(r);
                for j in 0..r {
                    m.data[i * r + j] -= entries[i][j];
                }
                m
            })
            .collect();
        Ok(CartanMatrix { rank: r, entries, gens })
    }

    /// One of the presets `A1`, `A2`, `A3`, `B2`, `G2`.
    pub fn preset(name: &str) -> Result<Self> {
        let m: Vec<Vec<i64>> = match name.to_ascii_uppercase().as_str() {
            "A1" => vec![vec![2]],
            "A2" => vec![vec![2, -1], vec![-1, 2]],
            "A3" => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            "B2" => vec![vec![2, -2], vec![-1, 2]],
            "G2" => vec![vec![2, -1], vec![-3, 2]],
            _ => return Err(Error::InvalidCartan(format!("unknown preset {name:?}"))),
        };
        Self::new(m)
    }

    /// Parses `{"rank": r, "matrix": [[...], ...]}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let parsed: CartanJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("Cartan matrix JSON: {e}")))?;
        if parsed.rank != parsed.matrix.len() {
            return Err(Error::InvalidCartan(format!(
                "rank {} does not match a matrix with {} rows",
                parsed.rank,
                parsed.matrix.len()
            )));
        }
        Self::new(parsed.matrix)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The entry `a_ij = α_j(h_i)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i - 1][j - 1]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            Err(Error::IndexOutOfRange { index: i, bound: self.rank })
        } else {
            Ok(())
        }
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        word.iter().try_for_each(|&i| self.check_index(i))
    }

    /// The simple root `α_i`.
    pub fn simple_root(&self, i: usize) -> RootVec {
        let mut v = vec![0; self.rank];
        v[i - 1] = 1;
        v
    }

    /// `s_i(v) = v - ⟨v, α_i^∨⟩ α_i`.
    pub fn reflect(&self, i: usize, v: &[i64]) -> Result<RootVec> {
        self.check_index(i)?;
        if v.len() != self.rank {
            return Err(Error::LengthMismatch { expected: self.rank, got: v.len() });
        }
        Ok(self.gens[i - 1].apply(v))
    }

    pub fn identity(&self) -> WeylElt {
        WeylElt { word: Vec::new(), action: Mat::identity(self.rank), inverse: Mat::identity(self.rank) }
    }

    pub fn generator(&self, i: usize) -> Result<WeylElt> {
        self.check_index(i)?;
        Ok(WeylElt { word: vec![i], action: self.gens[i - 1].clone(), inverse: self.gens[i - 1].clone() })
    }

    /// The group element `s_{w_1} ··· s_{w_k}` of an arbitrary word.
    pub fn element(&self, word: &[usize]) -> Result<WeylElt> {
        self.check_word(word)?;
        let mut action = Mat::identity(self.rank);
        let mut inverse = Mat::identity(self.rank);
        for &i in word {
            action = action.mul(&self.gens[i - 1]);
            inverse = self.gens[i - 1].mul(&inverse);
        }
        Ok(self.normalize(action, inverse))
    }

    /// Like [`element`](Self::element) but rejects non-reduced words.
    pub fn reduced_element(&self, word: &[usize]) -> Result<WeylElt> {
        let w = self.element(word)?;
        if w.length() != word.len() {
            return Err(Error::NotReduced(format_word(word)));
        }
        Ok(w)
    }

    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        Ok(self.element(word)?.length() == word.len())
    }

    /// Attaches the lexicographically smallest reduced word by repeatedly
    /// stripping the smallest left descent.
    fn normalize(&self, action: Mat, inverse: Mat) -> WeylElt {
        let mut word = Vec::new();
        let mut a = action.clone();
        let mut inv = inverse.clone();
        'outer: loop {
            for i in 0..self.rank {
                if inv.column_negative(i) {
                    word.push(i + 1);
                    a = self.gens[i].mul(&a);
                    inv = inv.mul(&self.gens[i]);
                    continue 'outer;
                }
            }
            break;
        }
        WeylElt { word, action, inverse }
    }

    pub fn multiply(&self, u: &WeylElt, v: &WeylElt) -> WeylElt {
        self.normalize(u.action.mul(&v.action), v.inverse.mul(&u.inverse))
    }

    pub fn inverse(&self, w: &WeylElt) -> WeylElt {
        self.normalize(w.inverse.clone(), w.action.clone())
    }

    /// `w·s_i`.
    pub fn mul_right(&self, w: &WeylElt, i: usize) -> WeylElt {
        self.normalize(w.action.mul(&self.gens[i - 1]), self.gens[i - 1].mul(&w.inverse))
    }

    /// `s_i·w`.
    pub fn mul_left(&self, i: usize, w: &WeylElt) -> WeylElt {
        self.normalize(self.gens[i - 1].mul(&w.action), w.inverse.mul(&self.gens[i - 1]))
    }

    pub fn descent(&self, w: &WeylElt, i: usize, side: Side) -> Result<bool> {
        self.check_index(i)?;
        Ok(match side {
            Side::Right => w.right_descent(i),
            Side::Left => w.left_descent(i),
        })
    }

    /// The 0-Hecke product of a word: `s_i` is appended only when it
    /// increases the length.
    pub fn demazure_product(&self, word: &[usize]) -> Result<WeylElt> {
        self.check_word(word)?;
        let mut action = Mat::identity(self.rank);
        let mut inverse = Mat::identity(self.rank);
        for &i in word {
            if !action.column_negative(i - 1) {
                action = action.mul(&self.gens[i - 1]);
                inverse = self.gens[i - 1].mul(&inverse);
            }
        }
        Ok(self.normalize(action, inverse))
    }

    /// Bruhat order, decided with the lifting property: for `s` with
    /// `sv < v`, `u ≤ v` iff `su ≤ sv` when `su < u`, and iff `u ≤ sv`
    /// otherwise.
    pub fn bruhat_leq(&self, u: &WeylElt, v: &WeylElt) -> bool {
        let mut u = u.clone();
        let mut v = v.clone();
        loop {
            if u.length() > v.length() {
                return false;
            }
            if u.is_identity() {
                return true;
            }
            if u.length() == v.length() {
                return u == v;
            }
            let s = v.word[0];
            if u.left_descent(s) {
                u = self.mul_left(s, &u);
            }
            v = self.mul_left(s, &v);
        }
    }

    /// `Δ(w) = Δ_+ ∩ w^{-1}Δ_-`, listed along the canonical word of `w^{-1}`.
    pub fn inversion_set(&self, w: &WeylElt) -> Vec<RootVec> {
        let winv = self.inverse(w);
        let mut prefix = Mat::identity(self.rank);
        let mut roots = Vec::with_capacity(winv.length());
        for &j in &winv.word {
            roots.push(prefix.apply(&self.simple_root(j)));
            prefix = prefix.mul(&self.gens[j - 1]);
        }
        roots
    }

    /// `ρ - wρ`, the sum of `Δ(w^{-1})`.
    pub fn rho_shift(&self, w: &WeylElt) -> RootVec {
        let winv = self.inverse(w);
        let mut total = vec![0; self.rank];
        for beta in self.inversion_set(&winv) {
            for (t, b) in total.iter_mut().zip(beta) {
                *t += b;
            }
        }
        total
    }

    /// All `u ≤ w`, sorted by length and then by canonical word.
    pub fn enumerate_interval(&self, w: &WeylElt, cap: usize) -> Result<Vec<WeylElt>> {
        let mut seen: HashSet<WeylElt> = HashSet::new();
        seen.insert(self.identity());
        if seen.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        for &i in &w.word {
            let new: Vec<WeylElt> = seen.iter().map(|u| self.mul_right(u, i)).filter(|x| !seen.contains(x)).collect();
            seen.extend(new);
            if seen.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
        }
        let mut out: Vec<WeylElt> = seen.into_iter().collect();
        sort_elements(&mut out);
        Ok(out)
    }

    /// Elements grouped by length, breadth first, as long as the running
    /// total stays within `cap`. The flag is true when the whole group was
    /// exhausted, which happens exactly when it is finite.
    pub fn layers(&self, cap: usize) -> (Vec<Vec<WeylElt>>, bool) {
        let mut layers = vec![vec![self.identity()]];
        let mut total = 1;
        loop {
            let last = layers.last().expect("nonempty");
            let mut next: Vec<WeylElt> = Vec::new();
            let mut seen = HashSet::new();
            for u in last {
                for i in 1..=self.rank {
                    if !u.right_descent(i) {
                        let x = self.mul_right(u, i);
                        if seen.insert(x.clone()) {
                            next.push(x);
                        }
                    }
                }
            }
            if next.is_empty() {
                return (layers, true);
            }
            if total + next.len() > cap {
                return (layers, false);
            }
            total += next.len();
            sort_elements(&mut next);
            layers.push(next);
        }
    }

    /// The whole group, if it is finite with at most `cap` elements.
    pub fn all_elements(&self, cap: usize) -> Result<Vec<WeylElt>> {
        let (layers, complete) = self.layers(cap);
        if !complete {
            return Err(Error::CapExceeded { cap });
        }
        Ok(layers.into_iter().flatten().collect())
    }

    /// Order `m_ij` of `s_i s_j`, or `None` when it is infinite.
    pub fn braid_order(&self, i: usize, j: usize) -> Option<usize> {
        if i == j {
            return Some(1);
        }
        match self.entry(i, j) * self.entry(j, i) {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }
}

fn sort_elements(v: &mut [WeylElt]) {
    v.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| a.word.cmp(&b.word)));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A Weyl group element: its canonical reduced word together with the
/// matrices of `w` and `w^{-1}` acting on the root lattice.
///
/// Equality and hashing only look at the action matrix.
#[derive(Debug, Clone)]
pub struct WeylElt {
    word: Vec<usize>,
    action: Mat,
    inverse: Mat,
}

impl PartialEq for WeylElt {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action
    }
}

impl Eq for WeylElt {}

impl Hash for WeylElt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.action.hash(state);
    }
}

impl WeylElt {
    /// The lexicographically smallest reduced word.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.action.n
    }

    /// `w(v)`.
    pub fn apply(&self, v: &[i64]) -> RootVec {
        self.action.apply(v)
    }

    /// `w^{-1}(v)`.
    pub fn apply_inverse(&self, v: &[i64]) -> RootVec {
        self.inverse.apply(v)
    }

    /// `w(α_i)`.
    pub fn image_of_simple(&self, i: usize) -> RootVec {
        (0..self.action.n).map(|k| self.action.at(k, i - 1)).collect()
    }

    /// The action matrix as rows; column `j` is `w(α_j)`.
    pub fn action_rows(&self) -> Vec<Vec<i64>> {
        self.action.data.chunks(self.action.n).map(<[i64]>::to_vec).collect()
    }

    /// `l(w s_i) < l(w)`, i.e. `w(α_i) < 0`.
    pub fn right_descent(&self, i: usize) -> bool {
        self.action.column_negative(i - 1)
    }

    /// `l(s_i w) < l(w)`, i.e. `w^{-1}(α_i) < 0`.
    pub fn left_descent(&self, i: usize) -> bool {
        self.inverse.column_negative(i - 1)
    }
}

impl fmt::Display for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("e");
        }
        for i in &self.word {
            write!(f, "s{i}")?;
        }
        Ok(())
    }
}

/// Renders a word as space-separated indices.
pub fn format_word(word: &[usize]) -> String {
    word.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Parses space- or comma-separated 1-based indices. The empty string and
/// `e` both denote the empty word.
pub fn parse_word(text: &str) -> Result<Vec<usize>> {
    if text.trim() == "e" {
        return Ok(Vec::new());
    }
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad word letter {t:?}"))))
        .collect()
}

/// Position of each element in a list.
pub fn index_by_element(elements: &[WeylElt]) -> HashMap<WeylElt, usize> {
    elements.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> CartanMatrix {
        CartanMatrix::preset("A2").unwrap()
    }

    #[test]
    fn validation() {
        assert!(CartanMatrix::new(vec![vec![2, -1], vec![-1, 2]]).is_ok());
        assert!(CartanMatrix::new(vec![vec![2, -2], vec![-1, 2]]).is_ok());
        assert!(CartanMatrix::new(vec![vec![2, 1], vec![1, 2]]).is_err());
        assert!(CartanMatrix::new(vec![vec![2, -1], vec![0, 2]]).is_err());
        assert!(CartanMatrix::new(vec![vec![1, -1], vec![-1, 2]]).is_err());
        assert!(CartanMatrix::new(vec![vec![2, -1]]).is_err());
        assert!(CartanMatrix::new(vec![]).is_err());
        assert!(CartanMatrix::preset("E9").is_err());
        let j: Value = serde_json::json!({"rank": 2, "matrix": [[2, -1], [-3, 2]]});
        assert_eq!(CartanMatrix::from_json(&j).unwrap(), CartanMatrix::preset("G2").unwrap());
        let j: Value = serde_json::json!({"rank": 3, "matrix": [[2, -1], [-3, 2]]});
        assert!(CartanMatrix::from_json(&j).is_err());
    }

    #[test]
    fn reflections() {
        let c = a2();
        assert_eq!(c.reflect(1, &[1, 0]).unwrap(), vec![-1, 0]);
        assert_eq!(c.reflect(1, &[0, 1]).unwrap(), vec![1, 1]);
        let g2 = CartanMatrix::preset("G2").unwrap();
        assert_eq!(g2.reflect(2, &[1, 0]).unwrap(), vec![1, 3]);
        assert!(matches!(c.reflect(3, &[1, 0]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn products() {
        let c = a2();
        let s1 = c.element(&[1]).unwrap();
        assert_eq!(c.multiply(&c.identity(), &s1), s1);
        assert!(c.multiply(&s1, &s1).is_identity());
        let s12 = c.element(&[1, 2]).unwrap();
        let p = c.multiply(&s12, &s12);
        assert_eq!(p.word(), &[2, 1]);
        assert_eq!(c.element(&[2, 1, 2]).unwrap().word(), &[1, 2, 1]);
        assert!(c.reduced_element(&[1, 1]).is_err());
        assert!(c.reduced_element(&[1, 2, 1]).is_ok());
    }

    #[test]
    fn descents() {
        let c = a2();
        let w = c.element(&[1, 2]).unwrap();
        assert!(!c.descent(&c.identity(), 1, Side::Right).unwrap());
        assert!(c.descent(&w, 2, Side::Right).unwrap());
        assert!(!c.descent(&w, 1, Side::Right).unwrap());
        assert!(c.descent(&w, 1, Side::Left).unwrap());
        assert!(!c.descent(&w, 2, Side::Left).unwrap());
    }

    #[test]
    fn demazure_products() {
        let c = a2();
        assert!(c.demazure_product(&[]).unwrap().is_identity());
        assert_eq!(c.demazure_product(&[1, 1]).unwrap().word(), &[1]);
        assert_eq!(c.demazure_product(&[1, 2, 1, 2]).unwrap().word(), &[1, 2, 1]);
    }

    #[test]
    fn bruhat() {
        let c = a2();
        let e = |w: &[usize]| c.element(w).unwrap();
        assert!(c.bruhat_leq(&e(&[]), &e(&[1, 2, 1])));
        assert!(c.bruhat_leq(&e(&[1]), &e(&[2, 1])));
        assert!(!c.bruhat_leq(&e(&[1, 2]), &e(&[2, 1])));
        assert!(!c.bruhat_leq(&e(&[2]), &e(&[1])));
    }

    #[test]
    fn inversions() {
        let c = a2();
        assert!(c.inversion_set(&c.identity()).is_empty());
        assert_eq!(c.inversion_set(&c.element(&[1]).unwrap()), vec![vec![1, 0]]);
        let mut d = c.inversion_set(&c.element(&[1, 2, 1]).unwrap());
        d.sort();
        assert_eq!(d, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(c.rho_shift(&c.element(&[1, 2, 1]).unwrap()), vec![2, 2]);
    }

    #[test]
    fn intervals() {
        let c = a2();
        let words = |v: Vec<WeylElt>| v.iter().map(|w| w.word().to_vec()).collect::<Vec<_>>();
        assert_eq!(words(c.enumerate_interval(&c.identity(), DEFAULT_CAP).unwrap()), vec![Vec::<usize>::new()]);
        assert_eq!(
            words(c.enumerate_interval(&c.element(&[1, 2]).unwrap(), DEFAULT_CAP).unwrap()),
            vec![vec![], vec![1], vec![2], vec![1, 2]]
        );
        assert_eq!(c.enumerate_interval(&c.element(&[1, 2, 1]).unwrap(), DEFAULT_CAP).unwrap().len(), 6);
        assert!(matches!(
            c.enumerate_interval(&c.element(&[1, 2, 1]).unwrap(), 3),
            Err(Error::CapExceeded { cap: 3 })
        ));
    }

    #[test]
    fn group_sizes() {
        for (name, order) in [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("G2", 12)] {
            let c = CartanMatrix::preset(name).unwrap();
            assert_eq!(c.all_elements(DEFAULT_CAP).unwrap().len(), order, "{name}");
        }
        let affine = CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert!(matches!(affine.all_elements(50), Err(Error::CapExceeded { cap: 50 })));
        let (layers, complete) = affine.layers(50);
        assert!(!complete);
        assert!(layers.iter().all(|l| l.len() <= 2));
    }

    #[test]
    fn parse_words() {
        assert_eq!(parse_word("1 2 1").unwrap(), vec![1, 2, 1]);
        assert_eq!(parse_word("").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_word(" 2,1 ").unwrap(), vec![2, 1]);
        assert!(parse_word("1 x").is_err());
        assert_eq!(format_word(&[1, 2]), "1 2");
    }
}
