//! Seeded property suites, one per module, run by `qmt selftest`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::cartesian::{check_qel, interpret, phi_translate, phi_tuple, prime_theory, simulate_qel_in_monoidal};
use crate::certify::{
    check, check_with, from_json, parse_certificate, path_string, prove_matrix_order, prove_tv_general, render_certificate,
    rule_conclusion, strengthen, to_json, CertifyError, Certificate, CheckOptions,
};
use crate::diagram::{parse, print, Term};
use crate::distance::{
    entrywise_leq, law_checks, split, tv, tvmax, SeqWitness, TvMethod, COUPLING_LIMIT,
};
use crate::quantale::{
    check_laws, BooleanQuantale, Extended, HemimetricSpace, LawvereQuantale, ProductMode, QuantaleKind, QuantaleValue,
};
use crate::rational::Rational;
use crate::sample;
use crate::semantics::realize::{canonical_form, stochastic_term};
use crate::semantics::{eval_ca, eval_ha, Distribution, Matrix, Semiring};
use crate::theory::{builtin_by_name, scalar_grid, QuantEq, QuantTheory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Quantale,
    Semantics,
    Distance,
    Certify,
    Cartesian,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Quantale, Suite::Semantics, Suite::Distance, Suite::Certify, Suite::Cartesian];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Quantale => "quantale",
            Suite::Semantics => "semantics",
            Suite::Distance => "distance",
            Suite::Certify => "certify",
            Suite::Cartesian => "cartesian",
        }
    }

    /// A suite name, or `all`.
    pub fn parse_scope(s: &str) -> Result<Vec<Suite>, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(Suite::ALL.to_vec());
        }
        s.parse().map(|x| vec![x])
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown suite `{s}`; expected one of quantale, semantics, distance, certify, cartesian, all"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub millis: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type Outcome = Result<String, String>;

struct Runner {
    checks: Vec<CheckOutcome>,
}

impl Runner {
    fn run(&mut self, name: &str, f: impl FnOnce() -> Outcome) {
        let (passed, detail) = match f() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        log::debug!("{name}: {passed} ({detail})");
        self.checks.push(CheckOutcome { name: name.to_string(), passed, detail });
    }
}

fn fail_on<T: fmt::Display>(e: T) -> String {
    e.to_string()
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut runner = Runner { checks: Vec::new() };
    let mut rng = sample::rng(seed ^ (suite as u64).wrapping_mul(0x9e37_79b9));
    match suite {
        Suite::Quantale => quantale_suite(&mut runner, &mut rng),
        Suite::Semantics => semantics_suite(&mut runner, &mut rng),
        Suite::Distance => distance_suite(&mut runner, &mut rng),
        Suite::Certify => certify_suite(&mut runner, &mut rng),
        Suite::Cartesian => cartesian_suite(&mut runner, &mut rng),
    }
    SuiteReport { suite, seed, checks: runner.checks, millis: start.elapsed().as_millis() }
}

pub fn run(suites: &[Suite], seed: u64) -> Vec<SuiteReport> {
    suites.iter().map(|&s| run_suite(s, seed)).collect()
}

type Rng8 = rand_chacha::ChaCha8Rng;

fn extended(v: QuantaleValue) -> Extended {
    match v {
        QuantaleValue::Lawvere(e) => e,
        QuantaleValue::Boolean(_) => unreachable!("sampled from the Lawvere quantale"),
    }
}

fn boolean(v: QuantaleValue) -> bool {
    match v {
        QuantaleValue::Boolean(b) => b,
        QuantaleValue::Lawvere(_) => unreachable!("sampled from the Boolean quantale"),
    }
}

fn quantale_suite(r: &mut Runner, rng: &mut Rng8) {
    const SAMPLES: usize = 200;
    for kind in [QuantaleKind::Boolean, QuantaleKind::Lawvere] {
        r.run(&format!("{kind} laws on {SAMPLES} triples"), || {
            for _ in 0..SAMPLES {
                let vals: Vec<QuantaleValue> = (0..3).map(|_| sample::quantale_value(rng, kind)).collect();
                let family: Vec<QuantaleValue> = (0..rng.gen_range(0..=5)).map(|_| sample::quantale_value(rng, kind)).collect();
                let bad = match kind {
                    QuantaleKind::Boolean => {
                        let v: Vec<bool> = vals.iter().cloned().map(boolean).collect();
                        let f: Vec<bool> = family.iter().cloned().map(boolean).collect();
                        check_laws(&BooleanQuantale, &v[0], &v[1], &v[2], &f).into_iter().map(|x| x.law).collect::<Vec<_>>()
                    }
                    QuantaleKind::Lawvere => {
                        let v: Vec<Extended> = vals.iter().cloned().map(extended).collect();
                        let f: Vec<Extended> = family.iter().cloned().map(extended).collect();
                        check_laws(&LawvereQuantale, &v[0], &v[1], &v[2], &f).into_iter().map(|x| x.law).collect()
                    }
                };
                if !bad.is_empty() {
                    return Err(format!("{bad:?} fail at {vals:?}"));
                }
            }
            Ok(format!("{SAMPLES} triples"))
        });
        r.run(&format!("{kind} integrality on every sampled pair"), || {
            let vals: Vec<QuantaleValue> = (0..20).map(|_| sample::quantale_value(rng, kind)).collect();
            for a in &vals {
                for b in &vals {
                    if !a.integrality_check(b).map_err(fail_on)? {
                        return Err(format!("{a} ⊕ {b} is not below {a} ⊓ {b}"));
                    }
                }
            }
            Ok(format!("{} pairs", vals.len() * vals.len()))
        });
        r.run(&format!("{kind} infinite join distributivity on samples"), || {
            if kind.ijd_sample_check() {
                Ok("holds".into())
            } else {
                Err("fails".into())
            }
        });
        r.run(&format!("{kind} sum and max products stay hemimetric"), || {
            let mut count = 0;
            for (n, m) in [(1, 1), (1, 5), (2, 2), (5, 1), (1, 3), (2, 1)] {
                for _ in 0..5 {
                    let x = sample::line_space(rng, kind, n);
                    let y = sample::line_space(rng, kind, m);
                    for mode in [ProductMode::Sum, ProductMode::Max] {
                        let p: HemimetricSpace = x.product(&y, mode).map_err(fail_on)?;
                        if let Some(v) = p.violation() {
                            return Err(format!("{mode:?}: {v}"));
                        }
                        count += 1;
                    }
                }
            }
            Ok(format!("{count} products"))
        });
    }
}

fn semantics_suite(r: &mut Runner, rng: &mut Rng8) {
    for name in ["ha_bool", "ha_nonneg", "preord_bool", "preord_nonneg", "ca", "ba"] {
        r.run(&format!("{name} axioms hold on the scalar grid"), || {
            let t = builtin_by_name(name).map_err(fail_on)?;
            let report = t.soundness_report(&scalar_grid()).map_err(fail_on)?;
            match report.iter().find(|c| !c.holds) {
                Some(c) => Err(format!("{}{:?}: {}", c.label, c.args, c.detail)),
                None => Ok(format!("{} instances", report.len())),
            }
        });
    }
    r.run("monoidal axioms hold in both models", || {
        let mut count = 0;
        while count < 300 {
            let atoms = sample::ha_atoms(rng, Semiring::NonNegative);
            for inst in sample::smc_instances(rng, &atoms) {
                let (a, b) = (eval_ha(&inst.lhs, Semiring::NonNegative), eval_ha(&inst.rhs, Semiring::NonNegative));
                if a.map_err(fail_on)? != b.map_err(fail_on)? {
                    return Err(format!("{}: {} vs {}", inst.axiom, inst.lhs, inst.rhs));
                }
                count += 1;
            }
            let atoms = sample::ca_atoms(rng);
            for inst in sample::smc_instances(rng, &atoms) {
                if eval_ca(&inst.lhs).map_err(fail_on)? != eval_ca(&inst.rhs).map_err(fail_on)? {
                    return Err(format!("{}: {} vs {}", inst.axiom, inst.lhs, inst.rhs));
                }
                count += 1;
            }
        }
        Ok(format!("{count} instances"))
    });
    r.run("printing and parsing round-trip", || {
        let ha = builtin_by_name("ha_nonneg").map_err(fail_on)?;
        let ca = builtin_by_name("ca").map_err(fail_on)?;
        for i in 0..200 {
            let (t, sig) = if i % 2 == 0 {
                let n = rng.gen_range(0..=3);
                (sample::ha_term(rng, Semiring::NonNegative, n, 3), &ha.signature)
            } else {
                let n = rng.gen_range(1..=3);
                (sample::ca_term(rng, n, 3), &ca.signature)
            };
            let back = parse(&print(&t), sig).map_err(fail_on)?;
            if back != t {
                return Err(format!("{t} reparses as {back}"));
            }
        }
        Ok("200 terms".into())
    });
    r.run("realized matrices evaluate back", || {
        for _ in 0..100 {
            let (rows, cols) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
            let m = sample::semiring_matrix(rng, Semiring::NonNegative, rows, cols);
            if eval_ha(&canonical_form(&m).term, Semiring::NonNegative).map_err(fail_on)? != m {
                return Err(format!("canonical form of {m:?}"));
            }
            let rows = rows.max(1);
            let s = sample::stochastic(rng, rows, cols);
            if eval_ca(&stochastic_term(&s).map_err(fail_on)?).map_err(fail_on)? != s {
                return Err(format!("column form of {s:?}"));
            }
        }
        Ok("100 matrices each".into())
    });
}

fn distance_suite(r: &mut Runner, rng: &mut Rng8) {
    r.run("tv formulations agree", || {
        for _ in 0..300 {
            let m = rng.gen_range(1..=COUPLING_LIMIT);
            let (mu, nu) = (sample::distribution(rng, m), sample::distribution(rng, m));
            let values: Vec<Rational> = TvMethod::ALL.iter().map(|&k| tv(&mu, &nu, k)).collect::<Result<_, _>>().map_err(fail_on)?;
            if values.iter().any(|v| v != &values[0]) {
                return Err(format!("{mu:?} vs {nu:?}: {values:?}"));
            }
        }
        Ok("300 pairs".into())
    });
    r.run("tv is a pseudometric and convex", || {
        for _ in 0..200 {
            let m = rng.gen_range(1..=6);
            let [a, b, c] = [0; 3].map(|_| sample::distribution(rng, m));
            let d = |x: &Distribution, y: &Distribution| tv(x, y, TvMethod::Sum).map_err(fail_on);
            if d(&a, &b)? != d(&b, &a)? || d(&a, &c)? > d(&a, &b)? + d(&b, &c)? {
                return Err(format!("{a:?} {b:?} {c:?}"));
            }
            let p = sample::unit_rational(rng, 8);
            let lhs = d(&a.mix(&p, &b).map_err(fail_on)?, &c.mix(&p, &b).map_err(fail_on)?)?;
            let rhs = &p * &d(&a, &c)? + (Rational::one() - &p) * d(&b, &b)?;
            if lhs > rhs {
                return Err(format!("convexity: {lhs} > {rhs}"));
            }
        }
        Ok("200 triples".into())
    });
    r.run("split recombines exactly", || {
        for i in 0..300 {
            let m = rng.gen_range(1..=6);
            let mu = sample::distribution(rng, m);
            let nu = match i % 10 {
                0 => mu.clone(),
                1 => Distribution::point(m, 0),
                _ => sample::distribution(rng, m),
            };
            let mu = if i % 10 == 1 && m > 1 { Distribution::point(m, m - 1) } else { mu };
            let s = split(&mu, &nu).map_err(fail_on)?;
            if s.recombine() != (mu.clone(), nu.clone()) || s.lambda != tv(&mu, &nu, TvMethod::Sum).map_err(fail_on)? {
                return Err(format!("{mu:?} vs {nu:?}"));
            }
        }
        Ok("300 pairs".into())
    });
    r.run("enrichment laws on 200 quadruples", || {
        let report = law_checks(rng, 200).map_err(fail_on)?;
        if !report.sequential.is_empty() || !report.direct_sum.is_empty() {
            return Err(format!("{} sequential, {} direct-sum failures", report.sequential.len(), report.direct_sum.len()));
        }
        Ok(format!("{} samples", report.samples))
    });
    r.run("a quadruple breaks the meet bound for `;`", || {
        let [c, c2, a, b] = crate::distance::meet_witness_corrected();
        let w = SeqWitness::compute(&c, &c2, &a, &b).map_err(fail_on)?;
        if w.violates_meet_bound() && w.within_sum_bound() {
            Ok(format!("{} > max({}, {})", w.composite, w.first, w.second))
        } else {
            Err(format!("{w:?}"))
        }
    });
    r.run("entrywise order is a preorder respected by ; and ⊕", || {
        for s in [Semiring::Boolean, Semiring::NonNegative] {
            for _ in 0..100 {
                let (n, k, m) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
                let a = sample::semiring_matrix(rng, s, k, n);
                let a2 = sample::above(rng, s, &a);
                let a3 = sample::above(rng, s, &a2);
                let b = sample::semiring_matrix(rng, s, m, k);
                let b2 = sample::above(rng, s, &b);
                let leq = |x: &Matrix, y: &Matrix| entrywise_leq(x, y).map_err(fail_on);
                let ok = leq(&a, &a)?
                    && leq(&a, &a3)?
                    && leq(&a.then(&b, s).map_err(fail_on)?, &a2.then(&b2, s).map_err(fail_on)?)?
                    && leq(&a.dsum(&b), &a2.dsum(&b2))?;
                if !ok {
                    return Err(format!("{s}: {a:?} ≤ {a2:?}, {b:?} ≤ {b2:?}"));
                }
            }
        }
        Ok("100 pairs per semiring".into())
    });
}

/// The model distance between the sides of a judgment dominates its bound.
fn sound(cert: &Certificate, theory: &QuantTheory) -> Result<bool, CertifyError> {
    Ok(theory.truth_check(&QuantEq { lhs: cert.lhs.clone(), rhs: cert.rhs.clone(), eps: cert.eps.clone() })?)
}

/// Strengthens one node's bound beyond what its rule concludes; `None`
/// when the chosen node concludes `⊤`.
pub fn mutate<R: Rng + ?Sized>(rng: &mut R, cert: &Certificate, theory: &QuantTheory) -> Option<(Certificate, Vec<usize>)> {
    let paths = cert.paths();
    let path = paths[rng.gen_range(0..paths.len())].clone();
    let node = cert.node(&path)?;
    let stronger = strengthen(&rule_conclusion(node, theory).ok()?)?;
    let mut out = cert.clone();
    out.node_mut(&path)?.eps = stronger;
    Some((out, path))
}

fn certify_suite(r: &mut Runner, rng: &mut Rng8) {
    let Ok(preord) = builtin_by_name("preord_bool") else { return };
    let Ok(preord_nn) = builtin_by_name("preord_nonneg") else { return };
    let Ok(ba) = builtin_by_name("ba") else { return };
    let mut produced: Vec<(Certificate, &QuantTheory)> = Vec::new();
    r.run("matrix order: certificate iff entrywise ≤ (Boolean, up to 2×2 exhaustive)", || {
        let mut count = 0;
        for rows in 0..=2usize {
            for cols in 0..=2usize {
                let all: Vec<Matrix> = (0..1u32 << (rows * cols))
                    .map(|bits| {
                        let data = (0..rows * cols).map(|i| Rational::from_integer(i64::from((bits >> i) & 1))).collect();
                        Matrix::new(rows, cols, data).expect("sizes agree")
                    })
                    .collect();
                for a in &all {
                    for b in &all {
                        let (f, g) = (canonical_form(a).term, canonical_form(b).term);
                        let leq = entrywise_leq(a, b).map_err(fail_on)?;
                        match prove_matrix_order(&preord, &f, &g) {
                            Ok(c) if leq => {
                                check(&c, &preord).map_err(fail_on)?;
                                if count % 7 == 0 {
                                    produced.push((c, &preord));
                                }
                            }
                            Err(CertifyError::NotDerivable { .. }) if !leq => {}
                            Ok(_) => return Err(format!("proved {a:?} ≤ {b:?}")),
                            Err(e) => return Err(format!("{a:?} ≤ {b:?}: {e}")),
                        }
                        count += 1;
                    }
                }
            }
        }
        Ok(format!("{count} pairs"))
    });
    r.run("matrix order over [0, ∞): 200 random pairs", || {
        for i in 0..200 {
            let (rows, cols) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let a = sample::semiring_matrix(rng, Semiring::NonNegative, rows, cols);
            let b = if i % 3 == 0 {
                sample::semiring_matrix(rng, Semiring::NonNegative, rows, cols)
            } else {
                sample::above(rng, Semiring::NonNegative, &a)
            };
            let leq = entrywise_leq(&a, &b).map_err(fail_on)?;
            match prove_matrix_order(&preord_nn, &canonical_form(&a).term, &canonical_form(&b).term) {
                Ok(c) if leq => {
                    check(&c, &preord_nn).map_err(fail_on)?;
                    produced.push((c, &preord_nn));
                }
                Err(CertifyError::NotDerivable { .. }) if !leq => {}
                other => return Err(format!("{a:?} vs {b:?}: {:?}", other.map(|c| c.eps))),
            }
        }
        Ok("200 pairs".into())
    });
    r.run("tv certificates reach tvmax", || {
        for _ in 0..200 {
            let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let (a, b) = (sample::stochastic(rng, m, n), sample::stochastic(rng, m, n));
            let (f, g) = (stochastic_term(&a).map_err(fail_on)?, stochastic_term(&b).map_err(fail_on)?);
            let c = prove_tv_general(&ba, &f, &g).map_err(fail_on)?;
            let eps = check(&c, &ba).map_err(fail_on)?;
            let d = tvmax(&a, &b).map_err(fail_on)?;
            if eps != QuantaleValue::lawvere(d.clone()).map_err(fail_on)? {
                return Err(format!("root {eps}, tvmax {d}"));
            }
            produced.push((c, &ba));
        }
        Ok("200 pairs".into())
    });
    r.run("strengthened bounds are rejected", || {
        let mut done = 0;
        let mut tries = 0;
        while done < 100 && tries < 10_000 {
            tries += 1;
            let (cert, theory) = &produced[rng.gen_range(0..produced.len())];
            let Some((bad, path)) = mutate(rng, cert, theory) else { continue };
            match check(&bad, theory) {
                Err(CertifyError::Rejected { path: p, .. }) if p == path_string(&path) => done += 1,
                other => return Err(format!("mutation at {} gave {other:?}", path_string(&path))),
            }
        }
        if done < 100 {
            return Err(format!("only {done} mutations applicable"));
        }
        Ok("100 mutations".into())
    });
    r.run("random certificates are accepted and sound", || {
        for i in 0..200 {
            let theory = [&preord, &preord_nn, &ba][i % 3];
            let depth = rng.gen_range(0..=4);
            let c = sample::certificate(rng, theory, depth);
            if check(&c, theory).map_err(fail_on)? != c.eps {
                return Err("root bound differs".into());
            }
            produced.push((c, theory));
        }
        for (c, theory) in &produced {
            if !sound(c, theory).map_err(fail_on)? {
                return Err(format!("unsound: {} =_{} {}", c.lhs, c.eps, c.rhs));
            }
        }
        Ok(format!("{} certificates", produced.len()))
    });
    r.run("weakening an accepted root stays accepted", || {
        for (c, theory) in produced.iter().take(50) {
            let weaker = theory.quantale.bottom();
            let w = c.clone().mon(weaker.clone()).map_err(fail_on)?;
            if check(&w, theory).map_err(fail_on)? != weaker {
                return Err("MON root".into());
            }
        }
        Ok("50 certificates".into())
    });
    r.run("text and JSON forms round-trip", || {
        for (c, theory) in produced.iter().step_by(7) {
            let text = render_certificate(c, Some(&theory.name));
            if &parse_certificate(&text, theory).map_err(fail_on)? != c || &from_json(&to_json(c), theory).map_err(fail_on)? != c {
                return Err(text);
            }
        }
        Ok("sampled certificates".into())
    });
}

fn cartesian_suite(r: &mut Runner, rng: &mut Rng8) {
    let theory = sample::two_op_theory();
    r.run("QEL derivations replay with the same bound", || {
        let prime = prime_theory(&theory).map_err(fail_on)?;
        let (mut subq, mut nexp) = (0, 0);
        for i in 0..50 {
            let ctx = 1 + i % 3;
            let depth = rng.gen_range(1..=4);
            let q = sample::qel_certificate(rng, &theory, ctx, depth);
            let eps = check_qel(&q, &theory).map_err(fail_on)?.eps;
            let mono = simulate_qel_in_monoidal(&q, &theory).map_err(fail_on)?;
            let got = check_with(&mono, &prime, CheckOptions::default()).map_err(fail_on)?.eps;
            if got != eps {
                return Err(format!("QEL {eps}, monoidal {got}"));
            }
            subq += q.count("SUBQ");
            nexp += q.count("NEXP");
        }
        Ok(format!("50 derivations, {subq} SUBQ and {nexp} NEXP nodes"))
    });
    r.run("Φ turns substitution into composition", || {
        for _ in 0..100 {
            let (k, k2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let t = sample::cart_term(rng, &theory, k2, 3);
            let sigma: Vec<_> = (0..k2).map(|_| sample::cart_term(rng, &theory, k, 2)).collect();
            let direct = phi_translate(&crate::cartesian::substitute(&t, &sigma).map_err(fail_on)?, k).map_err(fail_on)?;
            let composed: Term = phi_tuple(&sigma, k).map_err(fail_on)?.seq(&phi_translate(&t, k2).map_err(fail_on)?).map_err(fail_on)?;
            if direct.ty() != (k, 1) || interpret(&direct).map_err(fail_on)? != interpret(&composed).map_err(fail_on)? {
                return Err(format!("{t} under {sigma:?}"));
            }
        }
        Ok("100 substitutions".into())
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantale_suite_passes() {
        let report = run_suite(Suite::Quantale, 1);
        assert!(report.passed(), "{:?}", report.checks);
        assert_eq!(Suite::parse_scope("all").unwrap().len(), 5);
        assert!(Suite::parse_scope("nope").is_err());
    }
}
