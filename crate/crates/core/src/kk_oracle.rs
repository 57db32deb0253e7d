//! An independent route to the flag-variety constants: Demazure operators on
//! tables of restrictions, the duality `D_v(ψ^w)(1) = δ_{v,w}`, and an
//! exact triangular solve for `q_{u,v}^w` from pointwise products.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::char_ring::{CharPoly, Lattice};
use crate::error::{Error, Result};
use crate::flag_kt;
use crate::root_weyl::{index_by_element, CartanMatrix, WeylElt};

/// A function on a finite, downward closed set of Weyl group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylFunction {
    support: Vec<WeylElt>,
    index: HashMap<WeylElt, usize>,
    values: Vec<CharPoly>,
}

impl WeylFunction {
    pub fn new(support: Vec<WeylElt>, values: Vec<CharPoly>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::LengthMismatch { expected: support.len(), got: values.len() });
        }
        let index = index_by_element(&support);
        Ok(WeylFunction { support, index, values })
    }

    pub fn constant(support: Vec<WeylElt>, value: &CharPoly) -> Self {
        let values = vec![value.clone(); support.len()];
        Self::new(support, values).expect("same length")
    }

    pub fn support(&self) -> &[WeylElt] {
        &self.support
    }

    pub fn get(&self, w: &WeylElt) -> Option<&CharPoly> {
        self.index.get(w).map(|&k| &self.values[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WeylElt, &CharPoly)> {
        self.support.iter().zip(&self.values)
    }
}

/// `(D_i f)(v) = (f(v) - f(v s_i) e^{-v α_i}) / (1 - e^{-v α_i})`.
///
/// The result is defined on the `v` of the support with `v s_i` also in the
/// support. Each division must be exact.
pub fn demazure_apply(cartan: &CartanMatrix, f: &WeylFunction, i: usize) -> Result<WeylFunction> {
    if i == 0 || i > cartan.rank() {
        return Err(Error::IndexOutOfRange { index: i, bound: cartan.rank() });
    }
    let lat = Lattice::roots(cartan.rank());
    let mut support = Vec::new();
    let mut values = Vec::new();
    for (v, fv) in f.iter() {
        let vs = cartan.mul_right(v, i);
        let Some(fvs) = f.get(&vs) else { continue };
        let neg: Vec<i64> = v.image_of_simple(i).iter().map(|x| -x).collect();
        let e = CharPoly::character(&lat, &neg);
        let numerator = fv - &(fvs * &e);
        let denominator = CharPoly::one(&lat) - e;
        values.push(numerator.exact_div(&denominator)?);
        support.push(v.clone());
    }
    WeylFunction::new(support, values)
}

/// Applies `D_v = D_{i_1} ··· D_{i_l}` for the canonical word `i_1 ... i_l`
/// of `v`; the last letter acts first.
pub fn demazure_apply_word(cartan: &CartanMatrix, f: &WeylFunction, v: &WeylElt) -> Result<WeylFunction> {
    let mut g = f.clone();
    for &i in v.word().iter().rev() {
        g = demazure_apply(cartan, &g, i)?;
    }
    Ok(g)
}

/// The restrictions `ψ^u(x)` for all `x` in the interval below `top`.
#[derive(Debug, Clone)]
pub struct PsiTable {
    elements: Vec<WeylElt>,
    index: HashMap<WeylElt, usize>,
    columns: Vec<HashMap<WeylElt, CharPoly>>,
    lattice: std::sync::Arc<Lattice>,
}

impl PsiTable {
    pub fn elements(&self) -> &[WeylElt] {
        &self.elements
    }

    /// `ψ^u(x)`; zero outside the stored support.
    pub fn get(&self, u: &WeylElt, x: &WeylElt) -> CharPoly {
        self.index
            .get(x)
            .and_then(|&k| self.columns[k].get(u))
            .cloned()
            .unwrap_or_else(|| CharPoly::zero(&self.lattice))
    }

    /// Overwrites one entry; used to build negative controls.
    pub fn set(&mut self, u: &WeylElt, x: &WeylElt, value: CharPoly) -> Result<()> {
        let k = *self
            .index
            .get(x)
            .ok_or_else(|| Error::InvalidInput(format!("{x} is not in the table")))?;
        if value.is_zero() {
            self.columns[k].remove(u);
        } else {
            self.columns[k].insert(u.clone(), value);
        }
        Ok(())
    }

    /// The row `x ↦ ψ^u(x)`.
    pub fn row(&self, u: &WeylElt) -> WeylFunction {
        let values = self.elements.iter().map(|x| self.get(u, x)).collect();
        WeylFunction::new(self.elements.clone(), values).expect("same length")
    }
}

/// Builds the table on `[e, top]` from the subword formula and checks that
/// it is upper triangular for the Bruhat order.
pub fn psi_table(cartan: &CartanMatrix, top: &WeylElt, cap: usize) -> Result<PsiTable> {
    let elements = cartan.enumerate_interval(top, cap)?;
    let columns = elements
        .par_iter()
        .map(|x| flag_kt::psi_column(cartan, x))
        .collect::<Result<Vec<_>>>()?;
    for (x, col) in elements.iter().zip(&columns) {
        for u in col.keys() {
            if !cartan.bruhat_leq(u, x) {
                return Err(Error::Consistency(format!("ψ^{u}({x}) is nonzero although {u} is not below {x}")));
            }
        }
    }
    let index = index_by_element(&elements);
    Ok(PsiTable { elements, index, columns, lattice: Lattice::roots(cartan.rank()) })
}

/// `q_{u,v}^x` for every `x` of the table, solving
/// `Σ_y q^y ψ^y(x) = ψ^u(x) ψ^v(x)` upward through the interval.
pub fn oracle_q_table(table: &PsiTable, u: &WeylElt, v: &WeylElt) -> Result<Vec<(WeylElt, CharPoly)>> {
    let mut solved: Vec<(WeylElt, CharPoly)> = Vec::with_capacity(table.elements.len());
    for x in &table.elements {
        let mut rest = &table.get(u, x) * &table.get(v, x);
        for (y, qy) in &solved {
            if qy.is_zero() {
                continue;
            }
            let p = table.get(y, x);
            if !p.is_zero() {
                rest -= &(qy * &p);
            }
        }
        let q = rest.exact_div(&table.get(x, x))?;
        solved.push((x.clone(), q));
    }
    Ok(solved)
}

/// `q_{u,v}^w` by the triangular solve on `[e, w]`.
pub fn oracle_q_const(cartan: &CartanMatrix, u: &WeylElt, v: &WeylElt, w: &WeylElt, cap: usize) -> Result<CharPoly> {
    let table = psi_table(cartan, w, cap)?;
    let solved = oracle_q_table(&table, u, v)?;
    Ok(solved.into_iter().find(|(x, _)| x == w).map(|(_, q)| q).expect("w is the top of its interval"))
}

/// Outcome of one duality check `D_v(ψ^w)(1) = δ_{v,w}`.
#[derive(Debug, Clone)]
pub struct DualityCheck {
    pub v: WeylElt,
    pub w: WeylElt,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct DualityReport {
    pub checks: Vec<DualityCheck>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DualityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for DualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bad = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), bad)
    }
}

/// Checks `D_v(ψ^w)(1) = δ_{v,w}` for all `v, w` of the table.
pub fn verify_duality_table(cartan: &CartanMatrix, table: &PsiTable) -> DualityReport {
    let id = cartan.identity();
    let pairs: Vec<(&WeylElt, &WeylElt)> =
        table.elements.iter().flat_map(|v| table.elements.iter().map(move |w| (v, w))).collect();
    let checks = pairs
        .par_iter()
        .map(|&(v, w)| {
            let outcome = demazure_apply_word(cartan, &table.row(w), v).and_then(|g| {
                g.get(&id).cloned().ok_or_else(|| Error::Consistency("identity fell out of the support".into()))
            });
            let (passed, detail) = match outcome {
                Ok(value) => {
                    let ok = if v == w { value.is_one() } else { value.is_zero() };
                    (ok, (!ok).then(|| format!("got {value}")))
                }
                Err(e) => (false, Some(e.to_string())),
            };
            DualityCheck { v: v.clone(), w: w.clone(), passed, detail }
        })
        .collect();
    DualityReport { checks }
}

pub fn verify_duality(cartan: &CartanMatrix, top: &WeylElt, cap: usize) -> Result<DualityReport> {
    let table = psi_table(cartan, top, cap)?;
    Ok(verify_duality_table(cartan, &table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_weyl::DEFAULT_CAP;

    fn a2() -> CartanMatrix {
        CartanMatrix::preset("A2").unwrap()
    }

    fn r2(s: &str) -> CharPoly {
        CharPoly::parse(s, &Lattice::roots(2)).unwrap()
    }

    #[test]
    fn constants_are_fixed() {
        let c = a2();
        let w0 = c.element(&[1, 2, 1]).unwrap();
        let support = c.enumerate_interval(&w0, DEFAULT_CAP).unwrap();
        let f = WeylFunction::constant(support, &r2("3-e^{a1}"));
        let g = demazure_apply(&c, &f, 2).unwrap();
        assert_eq!(g.support().len(), 6);
        assert!(g.iter().all(|(_, v)| v == &r2("3-e^{a1}")));
    }

    #[test]
    fn demazure_on_psi_rows() {
        let c = a2();
        let w0 = c.element(&[1, 2, 1]).unwrap();
        let t = psi_table(&c, &w0, DEFAULT_CAP).unwrap();
        let s1 = c.element(&[1]).unwrap();
        let s2 = c.element(&[2]).unwrap();
        let e = c.identity();
        let d = demazure_apply(&c, &t.row(&s1), 1).unwrap();
        for x in t.elements() {
            assert_eq!(d.get(x).unwrap(), &(t.get(&s1, x) + t.get(&e, x)));
        }
        let d = demazure_apply(&c, &t.row(&s2), 1).unwrap();
        assert!(d.iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn oracle_values() {
        let c = a2();
        let e = c.identity();
        let s1 = c.element(&[1]).unwrap();
        let s2 = c.element(&[2]).unwrap();
        let s12 = c.element(&[1, 2]).unwrap();
        assert_eq!(oracle_q_const(&c, &s1, &s2, &s12, DEFAULT_CAP).unwrap(), r2("e^{2*a1+a2}"));
        assert!(oracle_q_const(&c, &e, &e, &e, DEFAULT_CAP).unwrap().is_one());
    }

    #[test]
    fn duality_small() {
        let c = CartanMatrix::preset("A1").unwrap();
        let s1 = c.element(&[1]).unwrap();
        let r = verify_duality(&c, &s1, DEFAULT_CAP).unwrap();
        assert_eq!(r.checks.len(), 4);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn perturbed_table_fails() {
        let c = a2();
        let w0 = c.element(&[1, 2, 1]).unwrap();
        let mut t = psi_table(&c, &w0, DEFAULT_CAP).unwrap();
        assert!(verify_duality_table(&c, &t).passed());
        let s1 = c.element(&[1]).unwrap();
        let flipped = -t.get(&s1, &w0);
        t.set(&s1, &w0, flipped).unwrap();
        let r = verify_duality_table(&c, &t);
        assert!(!r.passed());
        assert!(r.failures().count() >= 1);
    }
}
