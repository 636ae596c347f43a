//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every criterion reports even when
//! an earlier one fails. All comparisons are exact (tolerance zero); the
//! only pinned tolerances are the runtime caps below. The process exits
//! non-zero on any failure not listed in `KNOWN_FAILURES`, and also when a
//! listed failure starts passing, so the list cannot go stale.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qmt::cartesian::{check_qel, phi_translate, prime_theory, simulate_qel_in_monoidal, QelCertificate, QelRule};
use qmt::certify::{check, prove_matrix_order, prove_tv_general, CertifyError, Certificate};
use qmt::diagram::{Term, TermKind};
use qmt::distance::{law_checks, meet_witness_stated, split, tv, tvmax, TvMethod};
use qmt::quantale::{
    check_laws, integrality_holds, BooleanQuantale, Extended, LawvereQuantale, QuantaleKind, QuantaleValue,
};
use qmt::sample;
use qmt::selftest::mutate;
use qmt::semantics::realize::{canonical_form, stochastic_term};
use qmt::semantics::{Distribution, Matrix, Semiring, StochMatrix};
use qmt::theory::{builtin_by_name, EquationEntry, QuantTheory};
use qmt::{q, Rational};
use rand::Rng;

const SOUNDNESS_CAP: Duration = Duration::from_secs(5);
const TV_AGREEMENT_CAP: Duration = Duration::from_secs(30);
const ORDER_COMPLETENESS_CAP: Duration = Duration::from_secs(60);

/// Criterion 4 asks for `tvmax(C;A, C′;B) = 3/4` on a quadruple whose
/// composites are `[1, 0]ᵀ` and `[3/4, 1/4]ᵀ`, at distance 1/4.
const KNOWN_FAILURES: &[usize] = &[4];

/// Oracle semantics, written independently of the library's evaluator.
mod oracle {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    pub struct Mat {
        pub rows: usize,
        pub cols: usize,
        pub e: Vec<Rational>,
    }

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub enum Model {
        Bool,
        NonNeg,
        Convex,
    }

    impl Model {
        pub fn of(t: &QuantTheory) -> Model {
            match t.semiring {
                Some(Semiring::Boolean) => Model::Bool,
                Some(_) => Model::NonNeg,
                None => Model::Convex,
            }
        }

        fn add(self, a: &Rational, b: &Rational) -> Rational {
            match self {
                Model::Bool => a.clone().max(b.clone()),
                _ => a + b,
            }
        }

        fn mul(self, a: &Rational, b: &Rational) -> Rational {
            match self {
                Model::Bool => a.clone().min(b.clone()),
                _ => a * b,
            }
        }
    }

    impl Mat {
        pub fn new(rows: usize, cols: usize, e: Vec<Rational>) -> Mat {
            assert_eq!(e.len(), rows * cols);
            Mat { rows, cols, e }
        }

        pub fn from(m: &Matrix) -> Mat {
            Mat::new(m.rows(), m.cols(), m.entries().to_vec())
        }

        pub fn at(&self, i: usize, j: usize) -> &Rational {
            &self.e[i * self.cols + j]
        }

        fn identity(n: usize) -> Mat {
            let e = (0..n * n).map(|k| if k / n == k % n { Rational::one() } else { Rational::zero() }).collect();
            Mat::new(n, n, e)
        }

        pub fn column(&self, j: usize) -> Vec<Rational> {
            (0..self.rows).map(|i| self.at(i, j).clone()).collect()
        }
    }

    /// `f ; g`, i.e. the product `G·F`.
    pub fn then(f: &Mat, g: &Mat, model: Model) -> Mat {
        assert_eq!(f.rows, g.cols);
        let mut e = Vec::with_capacity(g.rows * f.cols);
        for i in 0..g.rows {
            for j in 0..f.cols {
                let mut acc = Rational::zero();
                for k in 0..f.rows {
                    acc = model.add(&acc, &model.mul(g.at(i, k), f.at(k, j)));
                }
                e.push(acc);
            }
        }
        Mat::new(g.rows, f.cols, e)
    }

    pub fn dsum(a: &Mat, b: &Mat) -> Mat {
        let (rows, cols) = (a.rows + b.rows, a.cols + b.cols);
        let mut e = vec![Rational::zero(); rows * cols];
        for i in 0..a.rows {
            for j in 0..a.cols {
                e[i * cols + j] = a.at(i, j).clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                e[(a.rows + i) * cols + a.cols + j] = b.at(i, j).clone();
            }
        }
        Mat::new(rows, cols, e)
    }

    pub fn eval(t: &Term, model: Model) -> Mat {
        let o = || Rational::one();
        match t.kind() {
            TermKind::Id => Mat::identity(1),
            TermKind::Empty => Mat::identity(0),
            TermKind::Sym => Mat::new(2, 2, vec![Rational::zero(), o(), o(), Rational::zero()]),
            TermKind::Seq(a, b) => then(&eval(a, model), &eval(b, model), model),
            TermKind::Par(a, b) => dsum(&eval(a, model), &eval(b, model)),
            TermKind::Gen(g) => match (model, &*g.name, &g.scalar) {
                (Model::Convex, "del", None) => Mat::new(1, 0, vec![]),
                (Model::Convex, "cop", None) => Mat::new(1, 2, vec![o(), o()]),
                (Model::Convex, "cc", Some(l)) => Mat::new(2, 1, vec![l.clone(), o() - l]),
                (_, "copy", None) => Mat::new(2, 1, vec![o(), o()]),
                (_, "add", None) => Mat::new(1, 2, vec![o(), o()]),
                (_, "del", None) => Mat::new(0, 1, vec![]),
                (_, "zero", None) => Mat::new(1, 0, vec![]),
                (_, "scalar", Some(k)) => Mat::new(1, 1, vec![k.clone()]),
                _ => panic!("oracle has no meaning for {g:?}"),
            },
        }
    }

    /// `½ Σ |μ(x) − ν(x)|`.
    pub fn tv(mu: &[Rational], nu: &[Rational]) -> Rational {
        assert_eq!(mu.len(), nu.len());
        let total: Rational = mu.iter().zip(nu).map(|(a, b)| (a - b).abs()).sum();
        total / Rational::from_integer(2)
    }

    pub fn tvmax(a: &Mat, b: &Mat) -> Rational {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        (0..a.cols).map(|j| tv(&a.column(j), &b.column(j))).max().unwrap_or_else(Rational::zero)
    }

    pub fn leq(a: &Mat, b: &Mat) -> bool {
        (a.rows, a.cols) == (b.rows, b.cols) && a.e.iter().zip(&b.e).all(|(x, y)| x <= y)
    }

    /// Whether `eps ⊑ d(lhs, rhs)` in the theory's model.
    pub fn sound(eps: &QuantaleValue, lhs: &Term, rhs: &Term, theory: &QuantTheory) -> bool {
        let model = Model::of(theory);
        let (a, b) = (eval(lhs, model), eval(rhs, model));
        match eps {
            QuantaleValue::Boolean(false) => true,
            QuantaleValue::Boolean(true) if theory.closure.symm => a == b,
            QuantaleValue::Boolean(true) => leq(&a, &b),
            QuantaleValue::Lawvere(Extended::Infinity) => true,
            QuantaleValue::Lawvere(Extended::Finite(e)) => *e >= tvmax(&a, &b),
        }
    }
}

use oracle::{Mat, Model};

type Outcome = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut Vec<(Certificate, &'static str)>) -> Outcome>;

fn theory(name: &str) -> QuantTheory {
    builtin_by_name(name).expect("builtin theory")
}

fn lawvere(r: Rational) -> QuantaleValue {
    QuantaleValue::Lawvere(Extended::Finite(r))
}

fn within(cap: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took <= cap {
        Ok(format!("{detail}; {took:.2?} (cap {cap:?})"))
    } else {
        Err(format!("{detail}; took {took:.2?}, over the {cap:?} cap"))
    }
}

fn c1_theory_soundness() -> Outcome {
    let start = Instant::now();
    let grid: Vec<Rational> = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1)].iter().map(|&(a, b)| q(a, b)).collect();
    let mut count = 0;
    let mut degenerate = 0;
    for name in ["ha_bool", "ha_nonneg", "ca"] {
        let t = theory(name);
        let model = Model::of(&t);
        for entry in &t.equations {
            let instances: Vec<(String, Term, Term)> = match entry {
                EquationEntry::Concrete(eq) => vec![(eq.label.clone(), eq.lhs.clone(), eq.rhs.clone())],
                EquationEntry::Schema(id) => id
                    .grid_args(&grid, t.semiring)
                    .into_iter()
                    .map(|args| {
                        let qe = t.instantiate_schema(*id, &args).expect("grid instance");
                        if args.len() == 2 && args.iter().all(Rational::is_one) {
                            degenerate += 1;
                        }
                        (format!("{id}{args:?}"), qe.lhs, qe.rhs)
                    })
                    .collect(),
            };
            for (label, l, r) in instances {
                let (a, b) = (oracle::eval(&l, model), oracle::eval(&r, model));
                if a != b {
                    return Err(format!("{name}: {label} gives {a:?} vs {b:?}"));
                }
                if Mat::from(&t.eval(&l).map_err(|e| e.to_string())?) != a {
                    return Err(format!("{name}: library and oracle disagree on {l}"));
                }
                count += 1;
            }
        }
        let report = t.soundness_report(&grid).map_err(|e| e.to_string())?;
        if let Some(bad) = report.iter().find(|c| !c.holds) {
            return Err(format!("{name}: soundness report flags {}", bad.label));
        }
    }
    if degenerate == 0 {
        return Err("no instance with λ = μ = 1 was generated".into());
    }
    within(SOUNDNESS_CAP, start, format!("{count} instances, {degenerate} with λμ = 1"))
}

fn c2_smc_axioms() -> Outcome {
    let mut rng = sample::rng(2);
    let mut per_model = [0usize; 2];
    for (slot, convex) in [(0, false), (1, true)] {
        while per_model[slot] < 300 {
            let (atoms, semiring, model) = if convex {
                (sample::ca_atoms(&mut rng), None, Model::Convex)
            } else if rng.gen_bool(0.5) {
                (sample::ha_atoms(&mut rng, Semiring::Boolean), Some(Semiring::Boolean), Model::Bool)
            } else {
                (sample::ha_atoms(&mut rng, Semiring::NonNegative), Some(Semiring::NonNegative), Model::NonNeg)
            };
            for inst in sample::smc_instances(&mut rng, &atoms) {
                let (a, b) = (oracle::eval(&inst.lhs, model), oracle::eval(&inst.rhs, model));
                if a != b {
                    return Err(format!("{}: {} vs {}", inst.axiom, inst.lhs, inst.rhs));
                }
                let lib = match semiring {
                    Some(s) => qmt::semantics::eval_ha(&inst.lhs, s).map(|m| Mat::from(&m)),
                    None => qmt::semantics::eval_ca(&inst.lhs).map(|m| Mat::from(m.matrix())),
                };
                if lib.map_err(|e| e.to_string())? != a {
                    return Err(format!("library disagrees with the oracle on {}", inst.lhs));
                }
                per_model[slot] += 1;
            }
        }
    }
    Ok(format!("{} matrix and {} stochastic instances", per_model[0], per_model[1]))
}

fn c3_tv_agreement() -> Outcome {
    let start = Instant::now();
    let mut rng = sample::rng(3);
    for _ in 0..300 {
        let m = rng.gen_range(1..=6);
        let (mu, nu) = (sample::distribution(&mut rng, m), sample::distribution(&mut rng, m));
        let expected = oracle::tv(mu.weights(), nu.weights());
        for method in TvMethod::ALL {
            let got = tv(&mu, &nu, method).map_err(|e| e.to_string())?;
            if got != expected {
                return Err(format!("{} gives {got}, oracle {expected} on {mu:?} vs {nu:?}", method.name()));
            }
        }
    }
    within(TV_AGREEMENT_CAP, start, "300 pairs, sum = sup = coupling = oracle".into())
}

fn c4_constants() -> Outcome {
    let [c, c2, a, b] = meet_witness_stated();
    let o = |s: &StochMatrix| Mat::from(s.matrix());
    let first = tvmax(&c, &c2).map_err(|e| e.to_string())?;
    let second = tvmax(&a, &b).map_err(|e| e.to_string())?;
    let composite = tvmax(&c.then(&a).map_err(|e| e.to_string())?, &c2.then(&b).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let composite_oracle =
        oracle::tvmax(&oracle::then(&o(&c), &o(&a), Model::Convex), &oracle::then(&o(&c2), &o(&b), Model::Convex));
    let mut notes = Vec::new();
    let mut ok = true;
    let mut expect = |what: &str, got: &Rational, want: Rational| {
        if *got == want {
            notes.push(format!("{what} = {got}"));
        } else {
            ok = false;
            notes.push(format!("{what} = {got}, expected {want}"));
        }
    };
    expect("tvmax(C, C′)", &first, q(1, 2));
    expect("tvmax(C;A, C′;B)", &composite, q(3, 4));
    if composite != composite_oracle {
        return Err(format!("library {composite} and oracle {composite_oracle} disagree"));
    }
    let bound = first.clone().max(second.clone());
    if composite > bound {
        notes.push(format!("meet bound broken: {composite} > {bound}"));
    } else {
        ok = false;
        notes.push(format!("meet bound not broken: {composite} ≤ {bound}"));
    }
    for l in [q(0, 1), q(1, 4), q(1, 2), q(1, 1)] {
        let one = Rational::one();
        let mu = Distribution::new(vec![l.clone(), &one - &l, Rational::zero()]).map_err(|e| e.to_string())?;
        let nu = Distribution::new(vec![Rational::zero(), &one - &l, l.clone()]).map_err(|e| e.to_string())?;
        let d = tv(&mu, &nu, TvMethod::Sum).map_err(|e| e.to_string())?;
        if d != l || oracle::tv(mu.weights(), nu.weights()) != l {
            ok = false;
            notes.push(format!("[λ,1−λ,0] vs [0,1−λ,λ] at λ = {l} gives {d}"));
        }
    }
    notes.push("[λ,1−λ,0] vs [0,1−λ,λ] at distance λ for λ ∈ {0, 1/4, 1/2, 1}".into());
    if ok {
        Ok(notes.join("; "))
    } else {
        Err(notes.join("; "))
    }
}

fn c5_enrichment() -> Outcome {
    let mut rng = sample::rng(5);
    for _ in 0..200 {
        let (n, k, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let [a, b] = [0; 2].map(|_| sample::stochastic(&mut rng, k, n));
        let [a2, b2] = [0; 2].map(|_| sample::stochastic(&mut rng, m, k));
        let o = |s: &StochMatrix| Mat::from(s.matrix());
        let lhs = oracle::tvmax(&oracle::then(&o(&a), &o(&a2), Model::Convex), &oracle::then(&o(&b), &o(&b2), Model::Convex));
        let (d1, d2) = (oracle::tvmax(&o(&a), &o(&b)), oracle::tvmax(&o(&a2), &o(&b2)));
        if lhs > &d1 + &d2 {
            return Err(format!("sequential: {lhs} > {d1} + {d2}"));
        }
        let lib = tvmax(&a.then(&a2).map_err(|e| e.to_string())?, &b.then(&b2).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        if lib != lhs {
            return Err(format!("library {lib} vs oracle {lhs}"));
        }
        let sum = oracle::tvmax(&oracle::dsum(&o(&a), &o(&a2)), &oracle::dsum(&o(&b), &o(&b2)));
        if sum != d1.clone().max(d2.clone()) || tvmax(&a.dsum(&a2), &b.dsum(&b2)).map_err(|e| e.to_string())? != sum {
            return Err(format!("direct sum: {sum} vs max({d1}, {d2})"));
        }
    }
    let report = law_checks(&mut rng, 200).map_err(|e| e.to_string())?;
    if !report.sequential.is_empty() || !report.direct_sum.is_empty() {
        return Err("law_checks reports failures".into());
    }
    Ok("200 oracle quadruples and 200 library quadruples, zero failures".into())
}

fn c6_split() -> Outcome {
    let mut rng = sample::rng(6);
    let (mut zeros, mut ones) = (0, 0);
    for i in 0..300 {
        let m = rng.gen_range(2..=6);
        let mu = sample::distribution(&mut rng, m);
        let (mu, nu) = match i % 10 {
            0 => (mu.clone(), mu),
            // Disjoint supports.
            1 => (Distribution::point(m, 0), Distribution::point(m, m - 1)),
            _ => (mu, sample::distribution(&mut rng, m)),
        };
        let s = split(&mu, &nu).map_err(|e| e.to_string())?;
        let lambda = oracle::tv(mu.weights(), nu.weights());
        if s.lambda != lambda {
            return Err(format!("λ = {} but tv = {lambda}", s.lambda));
        }
        let mix = |x: &Distribution, t: &Distribution| -> Vec<Rational> {
            x.weights().iter().zip(t.weights()).map(|(a, b)| &lambda * a + (Rational::one() - &lambda) * b).collect()
        };
        if mix(&s.mu_prime, &s.tau) != mu.weights() || mix(&s.nu_prime, &s.tau) != nu.weights() {
            return Err(format!("recombination fails for {mu:?} vs {nu:?}"));
        }
        if lambda.is_zero() {
            zeros += 1;
        }
        if lambda.is_one() {
            ones += 1;
        }
    }
    if zeros == 0 || ones == 0 {
        return Err(format!("edge cases missing: {zeros} with λ = 0, {ones} with λ = 1"));
    }
    Ok(format!("300 pairs, {zeros} with λ = 0 and {ones} with λ = 1"))
}

fn bool_matrix(rows: usize, cols: usize, bits: u32) -> Matrix {
    let e = (0..rows * cols).map(|i| Rational::from_integer(i64::from((bits >> i) & 1))).collect();
    Matrix::new(rows, cols, e).expect("sizes agree")
}

fn c7_order_completeness(store: &mut Vec<(Certificate, &'static str)>) -> Outcome {
    let start = Instant::now();
    let t = theory("preord_bool");
    let mut accepted = 0usize;
    let mut refused = 0usize;
    for rows in 0..=3usize {
        for cols in 0..=3usize {
            let count = 1u32 << (rows * cols);
            let terms: Vec<Term> = (0..count).map(|b| canonical_form(&bool_matrix(rows, cols, b)).term).collect();
            for (x, f) in terms.iter().enumerate() {
                for (y, g) in terms.iter().enumerate() {
                    let leq = (x as u32) & !(y as u32) == 0;
                    match prove_matrix_order(&t, f, g) {
                        Ok(c) if leq => {
                            let eps = check(&c, &t).map_err(|e| format!("rejected {f} ≤ {g}: {e}"))?;
                            if eps != QuantaleValue::Boolean(true) || (&c.lhs, &c.rhs) != (f, g) {
                                return Err(format!("wrong judgment for {f} ≤ {g}"));
                            }
                            accepted += 1;
                            store.push((c, "preord_bool"));
                        }
                        Err(CertifyError::NotDerivable { .. }) if !leq => refused += 1,
                        Ok(_) => return Err(format!("certified {f} ≤ {g}, which fails entrywise")),
                        Err(e) => return Err(format!("{f} ≤ {g}: {e}")),
                    }
                }
            }
        }
    }
    let t = theory("preord_nonneg");
    let mut rng = sample::rng(7);
    for i in 0..200 {
        let (rows, cols) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = sample::semiring_matrix(&mut rng, Semiring::NonNegative, rows, cols);
        let b = if i % 2 == 0 {
            sample::above(&mut rng, Semiring::NonNegative, &a)
        } else {
            sample::semiring_matrix(&mut rng, Semiring::NonNegative, rows, cols)
        };
        let leq = oracle::leq(&Mat::from(&a), &Mat::from(&b));
        let (f, g) = (canonical_form(&a).term, canonical_form(&b).term);
        match prove_matrix_order(&t, &f, &g) {
            Ok(c) if leq => {
                if check(&c, &t).map_err(|e| format!("rejected {f} ≤ {g}: {e}"))? != QuantaleValue::Boolean(true) {
                    return Err(format!("wrong bound for {f} ≤ {g}"));
                }
                accepted += 1;
                store.push((c, "preord_nonneg"));
            }
            Err(CertifyError::NotDerivable { .. }) if !leq => refused += 1,
            Ok(_) => return Err(format!("certified {f} ≤ {g}, which fails entrywise")),
            Err(e) => return Err(format!("{f} ≤ {g}: {e}")),
        }
    }
    within(ORDER_COMPLETENESS_CAP, start, format!("{accepted} certified, {refused} refused"))
}

fn c8_tv_completeness(store: &mut Vec<(Certificate, &'static str)>) -> Outcome {
    let t = theory("ba");
    let mut rng = sample::rng(8);
    let mut certs = Vec::new();
    for _ in 0..200 {
        let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (a, b) = (sample::stochastic(&mut rng, m, n), sample::stochastic(&mut rng, m, n));
        let f = stochastic_term(&a).map_err(|e| e.to_string())?;
        let g = stochastic_term(&b).map_err(|e| e.to_string())?;
        let c = prove_tv_general(&t, &f, &g).map_err(|e| e.to_string())?;
        let eps = check(&c, &t).map_err(|e| e.to_string())?;
        let want = oracle::tvmax(&oracle::eval(&f, Model::Convex), &oracle::eval(&g, Model::Convex));
        if eps != lawvere(want.clone()) {
            return Err(format!("root {eps}, tvmax {want}"));
        }
        certs.push(c);
    }
    let mut mutated = 0;
    let mut tries = 0;
    while mutated < 100 {
        tries += 1;
        if tries > 100_000 {
            return Err(format!("only {mutated} mutations applicable"));
        }
        let c = &certs[rng.gen_range(0..certs.len())];
        let Some((bad, path)) = mutate(&mut rng, c, &t) else { continue };
        if check(&bad, &t).is_ok() {
            return Err(format!("mutation at {path:?} was accepted"));
        }
        mutated += 1;
    }
    store.extend(certs.into_iter().map(|c| (c, "ba")));
    Ok("200 roots equal tvmax; 100 of 100 mutations rejected".into())
}

fn c9_soundness(store: &[(Certificate, &'static str)]) -> Outcome {
    let theories: Vec<QuantTheory> = ["preord_bool", "preord_nonneg", "ba"].map(theory).to_vec();
    let by_name = |n: &str| theories.iter().find(|t| t.name == n).expect("known theory");
    for (c, name) in store {
        if !oracle::sound(&c.eps, &c.lhs, &c.rhs, by_name(name)) {
            return Err(format!("{name}: {} =_{} {} is unsound", c.lhs, c.eps, c.rhs));
        }
    }
    let mut rng = sample::rng(9);
    for i in 0..200 {
        let t = &theories[i % 3];
        let depth = rng.gen_range(0..=4);
        let c = sample::certificate(&mut rng, t, depth);
        let eps = check(&c, t).map_err(|e| format!("sampled certificate rejected: {e}"))?;
        if !oracle::sound(&eps, &c.lhs, &c.rhs, t) {
            return Err(format!("{}: {} =_{eps} {} is unsound", t.name, c.lhs, c.rhs));
        }
    }
    Ok(format!("{} certificates from criteria 7 and 8, 200 sampled", store.len()))
}

fn nested(c: &QelCertificate, under: Option<&'static str>) -> bool {
    let tag = match c.rule {
        QelRule::SubQ { .. } => Some("SUBQ"),
        QelRule::NExp { .. } => Some("NEXP"),
        _ => None,
    };
    if under.is_some() && tag.is_some() {
        return true;
    }
    c.children.iter().any(|k| nested(k, tag.or(under)))
}

fn c10_simulation() -> Outcome {
    let theory = sample::two_op_theory();
    let prime = prime_theory(&theory).map_err(|e| e.to_string())?;
    let mut rng = sample::rng(10);
    let (mut subq, mut nexp, mut nests) = (0, 0, 0);
    for i in 0..50 {
        let ctx = 1 + i % 3;
        let depth = rng.gen_range(2..=4);
        let qel = sample::qel_certificate(&mut rng, &theory, ctx, depth);
        let eps = check_qel(&qel, &theory).map_err(|e| e.to_string())?.eps;
        let mono = simulate_qel_in_monoidal(&qel, &theory).map_err(|e| e.to_string())?;
        let got = check(&mono, &prime).map_err(|e| format!("simulated certificate rejected: {e}"))?;
        if got != eps || got != qel.eps {
            return Err(format!("QEL root {eps}, monoidal root {got}"));
        }
        if mono.lhs != phi_translate(&qel.lhs, ctx).map_err(|e| e.to_string())?
            || mono.rhs != phi_translate(&qel.rhs, ctx).map_err(|e| e.to_string())?
        {
            return Err("simulated sides are not the translated sides".into());
        }
        subq += qel.count("SUBQ");
        nexp += qel.count("NEXP");
        nests += usize::from(nested(&qel, None));
    }
    if subq == 0 || nexp == 0 || nests == 0 {
        return Err(format!("corpus lacks nesting: {subq} SUBQ, {nexp} NEXP, {nests} nested"));
    }
    Ok(format!("50 derivations; {subq} SUBQ, {nexp} NEXP, {nests} with nested SubQ/NExp"))
}

fn c11_quantales() -> Outcome {
    let mut rng = sample::rng(11);
    let mut pairs = 0;
    for kind in [QuantaleKind::Boolean, QuantaleKind::Lawvere] {
        let values: Vec<QuantaleValue> = (0..200).map(|_| sample::quantale_value(&mut rng, kind)).collect();
        for i in 0..values.len() {
            let (a, b, c) = (&values[i], &values[(i + 1) % 200], &values[(i + 7) % 200]);
            let family: Vec<QuantaleValue> = (0..rng.gen_range(0..=4)).map(|j| values[(i + 13 * j + 3) % 200].clone()).collect();
            let bad = match kind {
                QuantaleKind::Boolean => {
                    let v = |x: &QuantaleValue| matches!(x, QuantaleValue::Boolean(true));
                    let f: Vec<bool> = family.iter().map(v).collect();
                    check_laws(&BooleanQuantale, &v(a), &v(b), &v(c), &f).into_iter().map(|x| x.law).collect::<Vec<_>>()
                }
                QuantaleKind::Lawvere => {
                    let v = |x: &QuantaleValue| match x {
                        QuantaleValue::Lawvere(e) => e.clone(),
                        QuantaleValue::Boolean(_) => unreachable!(),
                    };
                    let f: Vec<Extended> = family.iter().map(v).collect();
                    check_laws(&LawvereQuantale, &v(a), &v(b), &v(c), &f).into_iter().map(|x| x.law).collect()
                }
            };
            if !bad.is_empty() {
                return Err(format!("{kind}: {bad:?} at {a}, {b}, {c}"));
            }
        }
        for a in &values {
            for b in &values {
                // Oracle: ⊗ below ⊓ in the quantale order.
                let holds = match (a, b) {
                    (QuantaleValue::Boolean(x), QuantaleValue::Boolean(y)) => integrality_holds(&BooleanQuantale, x, y),
                    (QuantaleValue::Lawvere(x), QuantaleValue::Lawvere(y)) => {
                        let sum_at_least_max = match (x, y) {
                            (Extended::Finite(p), Extended::Finite(r)) => p + r >= p.clone().max(r.clone()),
                            _ => true,
                        };
                        sum_at_least_max && integrality_holds(&LawvereQuantale, x, y)
                    }
                    _ => false,
                };
                if !holds || !a.integrality_check(b).map_err(|e| e.to_string())? {
                    return Err(format!("integrality fails at {a}, {b}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("200 samples per quantale, integrality on {pairs} pairs"))
}

fn main() -> ExitCode {
    let mut store = Vec::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("theory soundness on the scalar grid", Box::new(|_| c1_theory_soundness())),
        ("monoidal axioms in both models", Box::new(|_| c2_smc_axioms())),
        ("tv formulations agree", Box::new(|_| c3_tv_agreement())),
        ("non-enrichment constants and point-mass distances", Box::new(|_| c4_constants())),
        ("enrichment laws", Box::new(|_| c5_enrichment())),
        ("splitting recombines exactly", Box::new(|_| c6_split())),
        ("matrix-order completeness", Box::new(c7_order_completeness)),
        ("total-variation completeness and mutations", Box::new(c8_tv_completeness)),
        ("certificate soundness", Box::new(|s: &mut Vec<_>| c9_soundness(s))),
        ("QEL simulation", Box::new(|_| c10_simulation())),
        ("quantale laws", Box::new(|_| c11_quantales())),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let outcome = run(&mut store);
        let took = start.elapsed();
        let known = KNOWN_FAILURES.contains(&n);
        match &outcome {
            Ok(d) => println!("criterion {n:>2} PASS {name}: {d} [{took:.2?}]"),
            Err(d) if known => println!("criterion {n:>2} FAIL (known) {name}: {d} [{took:.2?}]"),
            Err(d) => println!("criterion {n:>2} FAIL {name}: {d} [{took:.2?}]"),
        }
        if outcome.is_ok() == known {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria as expected (known failures: {KNOWN_FAILURES:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
