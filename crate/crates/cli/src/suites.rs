//! Verification suites run by `equikt verify`.

use std::sync::Arc;

use anyhow::Result;
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use equikt::bott_tower::{chi_localized, restrict_basis_class, structure_consts_by_restriction, tower_structure_const};
use equikt::flag_kt::{q_const, q_table, t_const};
use equikt::kk_oracle::{oracle_q_table, psi_table, verify_duality_table};
use equikt::root_weyl::DEFAULT_CAP;
use equikt::rule_engine::{build_l, build_m, expand_in_basis, r_op, LMonomials, RulePoly};
use equikt::{BitWord, CartanMatrix, CharPoly, Lattice, TowerSpec, WeylElt};

use crate::Rendered;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Every A2 product, oracle equivalence on all triples, and duality.
    A2Full,
    /// B2 golden values, oracle equivalence and duality.
    B2,
    /// G2 golden values and oracle equivalence on a length-4 interval.
    G2,
    /// Random towers: Kronecker delta and rule engine against restriction.
    Towers,
    /// Random rule polynomials: basis expansion against the operator.
    Rules,
    /// All of the above.
    All,
}

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Default)]
struct Report {
    checks: Vec<Check>,
}

impl Report {
    fn record(&mut self, name: impl Into<String>, outcome: Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(Check { name: name.into(), passed, detail });
    }
}

type Outcome = Result<String, String>;

fn err(e: equikt::Error) -> String {
    e.to_string()
}

fn poly(lat: &Arc<Lattice>, factors: &[&str]) -> CharPoly {
    factors
        .iter()
        .fold(CharPoly::one(lat), |acc, f| &acc * &CharPoly::parse(f, lat).expect("valid literal"))
}

type Expansion = (&'static [usize], &'static [(&'static [usize], &'static [&'static str])]);

/// Products `ψ^u ψ^v` of the A2 flag variety up to the diagram symmetry,
/// as `(u, (v, [(w, factors of q_{u,v}^w)]))`.
#[rustfmt::skip]
const A2_PRODUCTS: &[(&[usize], Expansion)] = &[
    (&[], (&[], &[
        (&[], &["1"]), (&[1], &["-e^{a1}"]), (&[2], &["-e^{a2}"]),
        (&[1, 2], &["e^{a1+a2}", "1+e^{a1}"]), (&[2, 1], &["e^{a1+a2}", "1+e^{a2}"]),
        (&[1, 2, 1], &["-e^{2*a1+2*a2}"]),
    ])),
    (&[], (&[1], &[
        (&[1], &["e^{a1}"]), (&[1, 2], &["-e^{2*a1+a2}"]),
        (&[2, 1], &["-e^{a1+a2}", "1+e^{a2}"]), (&[1, 2, 1], &["e^{2*a1+2*a2}"]),
    ])),
    (&[1], (&[1], &[
        (&[1], &["1-e^{a1}"]), (&[1, 2], &["-e^{a1+a2}", "1-e^{a1}"]),
        (&[2, 1], &["-e^{a2}", "1-e^{a1}-e^{a1+a2}"]), (&[1, 2, 1], &["-e^{2*a1+2*a2}"]),
    ])),
    (&[1], (&[2], &[
        (&[1, 2], &["e^{2*a1+a2}"]), (&[2, 1], &["e^{a1+2*a2}"]), (&[1, 2, 1], &["-e^{2*a1+2*a2}"]),
    ])),
    (&[], (&[1, 2, 1], &[(&[1, 2, 1], &["e^{2*a1+2*a2}"])])),
    (&[1], (&[1, 2, 1], &[(&[1, 2, 1], &["e^{a1+a2}", "1-e^{a1+a2}"])])),
    (&[1, 2], (&[1, 2, 1], &[(&[1, 2, 1], &["e^{a2}", "1-e^{a1}", "1-e^{a1+a2}"])])),
    (&[1, 2, 1], (&[1, 2, 1], &[(&[1, 2, 1], &["1-e^{a1}", "1-e^{a2}", "1-e^{a1+a2}"])])),
    (&[1, 2], (&[1, 2], &[
        (&[1, 2], &["1-e^{a1}", "1-e^{a1+a2}"]), (&[1, 2, 1], &["-e^{a2}", "1-e^{a1}", "1-e^{a1+a2}"]),
    ])),
    (&[1], (&[2, 1], &[
        (&[2, 1], &["e^{a2}", "1-e^{a1+a2}"]), (&[1, 2, 1], &["-e^{a1+a2}", "1-e^{a1+a2}"]),
    ])),
    (&[1], (&[1, 2], &[
        (&[1, 2], &["e^{a1+a2}", "1-e^{a1}"]), (&[1, 2, 1], &["e^{2*a1+2*a2}"]),
    ])),
    (&[], (&[1, 2], &[
        (&[1, 2], &["e^{2*a1+a2}"]), (&[1, 2, 1], &["-e^{2*a1+2*a2}"]),
    ])),
    (&[1, 2], (&[2, 1], &[(&[1, 2, 1], &["e^{a1+a2}", "1-e^{a1+a2}"])])),
];

fn swap_word(w: &[usize]) -> Vec<usize> {
    w.iter().map(|&i| 3 - i).collect()
}

fn a2_products(report: &mut Report) {
    let c = CartanMatrix::preset("A2").expect("preset");
    let lat = Lattice::roots(2);
    let swap = [vec![0, 1], vec![1, 0]];
    let mut seen = std::collections::HashSet::new();
    for &(u, (v, expansion)) in A2_PRODUCTS {
        for swapped in [false, true] {
            let (uu, vv) = if swapped { (swap_word(u), swap_word(v)) } else { (u.to_vec(), v.to_vec()) };
            let ue = c.element(&uu).expect("word");
            let ve = c.element(&vv).expect("word");
            let mut key = [ue.word().to_vec(), ve.word().to_vec()];
            key.sort();
            if !seen.insert(key) {
                continue;
            }
            let mut expected: Vec<(WeylElt, CharPoly)> = expansion
                .iter()
                .map(|&(w, fs)| {
                    let p = poly(&lat, fs);
                    if swapped {
                        (c.element(&swap_word(w)).expect("word"), p.map_lattice(&lat, &swap).expect("rank 2"))
                    } else {
                        (c.element(w).expect("word"), p)
                    }
                })
                .collect();
            expected.sort_by(|a, b| (a.0.length(), a.0.word()).cmp(&(b.0.length(), b.0.word())));
            let outcome = q_table(&c, &ue, &ve, None).map_err(err).and_then(|t| {
                if t.entries == expected {
                    Ok(format!("{} terms", expected.len()))
                } else {
                    let got: Vec<String> = t.entries.iter().map(|(w, q)| format!("{w}: {q}")).collect();
                    Err(format!("got [{}]", got.join(", ")))
                }
            });
            report.record(format!("A2 product psi^{ue} psi^{ve}"), outcome);
        }
    }
}

fn golden(c: &CartanMatrix, u: &[usize], v: &[usize], w: &[usize], factors: &[&str]) -> Outcome {
    let want = poly(&Lattice::roots(c.rank()), factors);
    let u = c.element(u).map_err(err)?;
    let v = c.element(v).map_err(err)?;
    let got = q_const(c, &u, &v, w).map_err(err)?;
    if got == want {
        Ok(got.to_string())
    } else {
        Err(format!("expected {want}, got {got}"))
    }
}

fn oracle_equivalence(c: &CartanMatrix, top: &[usize]) -> Outcome {
    let top = c.element(top).map_err(err)?;
    let table = psi_table(c, &top, DEFAULT_CAP).map_err(err)?;
    let mut count = 0;
    for u in table.elements() {
        for v in table.elements() {
            for (w, want) in oracle_q_table(&table, u, v).map_err(err)? {
                let got = q_const(c, u, v, w.word()).map_err(err)?;
                if got != want {
                    return Err(format!("q_{{{u},{v}}}^{w}: rule {got}, oracle {want}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} triples"))
}

fn duality(c: &CartanMatrix, top: &[usize]) -> Outcome {
    let top = c.element(top).map_err(err)?;
    let table = psi_table(c, &top, DEFAULT_CAP).map_err(err)?;
    let r = verify_duality_table(c, &table);
    let outcome = match r.failures().next() {
        None => Ok(r.to_string()),
        Some(f) => Err(format!("D_{} psi^{}: {}", f.v, f.w, f.detail.clone().unwrap_or_default())),
    };
    outcome
}

fn random_tower(rng: &mut ChaCha8Rng, n: usize) -> TowerSpec {
    let mut entries = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            entries.push(((i, j), rng.gen_range(-3..=3)));
        }
    }
    TowerSpec::new(n, entries).expect("valid tower")
}

fn towers(report: &mut Report, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..20 {
        let n = rng.gen_range(1..=4);
        let spec = random_tower(&mut rng, n);
        let outcome = (|| -> Outcome {
            for eps in BitWord::all(n) {
                let cls = restrict_basis_class(&spec, &eps).map_err(err)?;
                for at in BitWord::all(n) {
                    let chi = chi_localized(&spec, &at, &cls).map_err(err)?;
                    if !(if eps == at { chi.is_one() } else { chi.is_zero() }) {
                        return Err(format!("chi at {at} of class {eps} is {chi}"));
                    }
                }
            }
            for e1 in BitWord::all(n) {
                for e2 in BitWord::all(n) {
                    for (e3, want) in structure_consts_by_restriction(&spec, &e1, &e2).map_err(err)? {
                        let got = tower_structure_const(&spec, &e1, &e2, &e3).map_err(err)?;
                        if got != want {
                            return Err(format!("r_{{{e1},{e2}}}^{e3}: rule {got}, restriction {want}"));
                        }
                    }
                }
            }
            Ok(format!("n = {n}"))
        })();
        report.record(format!("tower {k} {}", spec.to_json()), outcome);
    }
}

fn random_rule_poly(rng: &mut ChaCha8Rng, n: usize, lat: &Arc<Lattice>) -> RulePoly {
    let mut p = RulePoly::zero(n, lat);
    for _ in 0..rng.gen_range(1..=4) {
        let x = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let z = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let terms: Vec<(i64, Vec<i64>)> = (0..rng.gen_range(1..=2))
            .map(|_| (rng.gen_range(-3..=3), (0..lat.dim()).map(|_| rng.gen_range(-1..=1)).collect()))
            .collect();
        let coeff = CharPoly::from_terms(lat, terms).expect("dimensions match");
        p = p.add(&RulePoly::monomial(x, z, coeff).expect("lengths match")).expect("same ring");
    }
    p
}

fn rules(report: &mut Report, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut count = 0;
    for k in 0..200 {
        let n = rng.gen_range(1..=4);
        let l: LMonomials = if k % 2 == 0 {
            build_l(&random_tower(&mut rng, n))
        } else {
            let c = CartanMatrix::preset(["A2", "B2", "G2"][rng.gen_range(0..3)]).expect("preset");
            let word: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
            build_m(&c, &word).expect("valid word")
        };
        let p = random_rule_poly(&mut rng, n, l.lattice());
        match expand_in_basis(&l, &p) {
            Ok(beta) => {
                for (eps, b) in &beta {
                    match r_op(&l, eps, &p) {
                        Ok(r) if &r == b => count += 1,
                        Ok(r) => failures.push(format!("input {k} at {eps}: expansion {b}, operator {r}")),
                        Err(e) => failures.push(format!("input {k} at {eps}: {e}")),
                    }
                }
            }
            Err(e) => failures.push(format!("input {k}: {e}")),
        }
    }
    let outcome = if failures.is_empty() { Ok(format!("200 inputs, {count} coefficients")) } else { Err(failures.join("; ")) };
    report.record("basis expansion equals rule operator", outcome);
}

fn b2(report: &mut Report) {
    let c = CartanMatrix::preset("B2").expect("preset");
    report.record("B2 q_{1,s1}^{s2s1s2}", golden(&c, &[], &[1], &[2, 1, 2], &["e^{3*a1+2*a2}", "1+e^{a2}"]));
    report.record("B2 q_{1,s1}^{s2s1s2s1}", golden(&c, &[], &[1], &[2, 1, 2, 1], &["-e^{4*a1+3*a2}"]));
    report.record(
        "B2 q_{s1s2,s1s2}^{s2s1s2s1}",
        golden(&c, &[1, 2], &[1, 2], &[2, 1, 2, 1], &["-e^{2*a1+2*a2}", "1-e^{2*a1+a2}"]),
    );
    report.record("B2 oracle equivalence", oracle_equivalence(&c, &[1, 2, 1, 2]));
    report.record("B2 duality", duality(&c, &[1, 2, 1, 2]));
}

fn g2(report: &mut Report) {
    let c = CartanMatrix::preset("G2").expect("preset");
    report.record(
        "G2 q_{s2,s2s1}^{s1s2s1s2}",
        golden(&c, &[2], &[2, 1], &[1, 2, 1, 2], &["-e^{3*a1+6*a2}", "1+e^{a1}+e^{2*a1}"]),
    );
    let e = c.identity();
    let t = t_const(&c, &e, &e, &[2, 1, 2, 1, 2]).map_err(err).and_then(|t| {
        if t == (-13).into() {
            Ok(t.to_string())
        } else {
            Err(format!("expected -13, got {t}"))
        }
    });
    report.record("G2 t_{1,1}^{s2s1s2s1s2}", t);
    report.record("G2 oracle equivalence", oracle_equivalence(&c, &[1, 2, 1, 2]));
}

pub fn run(suite: Suite, seed: u64) -> Result<Rendered> {
    let mut report = Report::default();
    let all = suite == Suite::All;
    if all || suite == Suite::A2Full {
        a2_products(&mut report);
        let c = CartanMatrix::preset("A2")?;
        report.record("A2 oracle equivalence", oracle_equivalence(&c, &[1, 2, 1]));
        report.record("A2 duality", duality(&c, &[1, 2, 1]));
    }
    if all || suite == Suite::B2 {
        b2(&mut report);
    }
    if all || suite == Suite::G2 {
        g2(&mut report);
    }
    if all || suite == Suite::Towers {
        towers(&mut report, seed);
    }
    if all || suite == Suite::Rules {
        rules(&mut report, seed);
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    let total = report.checks.len();
    let mut text = String::new();
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!("{tag}  {}: {}\n", c.name, c.detail));
    }
    text.push_str(&format!("{passed}/{total} checks passed"));
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
        .collect();
    let suite_name = suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let json = json!({
        "command": "verify",
        "suite": suite_name,
        "seed": seed,
        "passed": passed == total,
        "checks": checks,
    });
    Ok(Rendered { text, json, status: if passed == total { 0 } else { 3 } })
}
