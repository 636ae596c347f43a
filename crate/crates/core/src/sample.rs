//! Seeded samplers for property tests and self-tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartesian::{substitute, CartSignature, CartTerm, CartTheory, QelCertificate, QelRule};
use crate::certify::Certificate;
use crate::diagram::build::{ca, copy_tree, ha, id_n, sym_mn};
use crate::diagram::Term;
use crate::quantale::{HemimetricSpace, QuantaleKind, QuantaleValue};
use crate::rational::Rational;
use crate::semantics::realize::{canonical_form, distribution_term, stochastic_term};
use crate::semantics::{Distribution, Matrix, Semiring, StochMatrix};
use crate::theory::{Model, QuantTheory, SchemaId};

/// Widest intermediate wire count of sampled diagrams.
pub const WIDTH_CAP: usize = 4;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[0, 1]` with denominator at most `max_den`.
pub fn unit_rational<R: Rng + ?Sized>(rng: &mut R, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den.max(1));
    Rational::new(rng.gen_range(0..=d), d)
}

/// A distribution on `m ≥ 1` points with small-integer weights, sometimes
/// sparse.
pub fn distribution<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Distribution {
    assert!(m > 0, "distributions need a point");
    let sparse = rng.gen_bool(0.3);
    let mut w: Vec<i64> = (0..m).map(|_| if sparse && rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..=9) }).collect();
    if w.iter().all(|&x| x == 0) {
        w[rng.gen_range(0..m)] = 1;
    }
    let total: i64 = w.iter().sum();
    Distribution::new(w.into_iter().map(|x| Rational::new(x, total)).collect()).expect("weights sum to one")
}

/// A `rows × cols` stochastic matrix; `rows = 0` forces `cols = 0`.
pub fn stochastic<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> StochMatrix {
    assert!(rows > 0 || cols == 0, "a column needs at least one row");
    let columns: Vec<Distribution> = (0..cols).map(|_| distribution(rng, rows)).collect();
    StochMatrix::from_columns(&columns, rows).expect("columns are distributions")
}

/// A scalar of the semiring: 0/1 for Booleans, small non-negative
/// rationals otherwise.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R, semiring: Semiring) -> Rational {
    match semiring {
        Semiring::Boolean => Rational::from_integer(rng.gen_range(0..=1)),
        Semiring::NonNegative => Rational::new(rng.gen_range(0..=6), rng.gen_range(1..=3)),
        Semiring::Rationals => Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=3)),
    }
}

pub fn semiring_matrix<R: Rng + ?Sized>(rng: &mut R, semiring: Semiring, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| scalar(rng, semiring)).collect();
    Matrix::new(rows, cols, data).expect("sizes agree")
}

/// A matrix entrywise above `m`: each entry is kept or raised.
pub fn above<R: Rng + ?Sized>(rng: &mut R, semiring: Semiring, m: &Matrix) -> Matrix {
    let data = m
        .entries()
        .iter()
        .map(|x| match semiring {
            Semiring::Boolean => {
                if rng.gen_bool(0.5) {
                    Rational::one()
                } else {
                    x.clone()
                }
            }
            _ => x + &Rational::new(rng.gen_range(0..=2), rng.gen_range(1..=2)),
        })
        .collect();
    Matrix::new(m.rows(), m.cols(), data).expect("same shape")
}

/// Atomic diagrams of the bialgebra signature, structural ones included.
pub fn ha_atoms<R: Rng + ?Sized>(rng: &mut R, semiring: Semiring) -> Vec<Term> {
    vec![
        ha::copy(),
        ha::del(),
        ha::add(),
        ha::zero(),
        ha::scalar(scalar(rng, semiring)),
        ha::scalar(scalar(rng, semiring)),
        Term::id(),
        Term::sym(),
    ]
}

/// Atomic diagrams of the convex-algebra signature.
pub fn ca_atoms<R: Rng + ?Sized>(rng: &mut R) -> Vec<Term> {
    vec![ca::del(), ca::cop(), ca::cc(unit_rational(rng, 6)), ca::cc(unit_rational(rng, 6)), Term::id(), Term::sym()]
}

/// One layer `a₁ * … * a_k` consuming exactly `width` wires, with output
/// width at most [`WIDTH_CAP`].
fn layer<R: Rng + ?Sized>(rng: &mut R, atoms: &[Term], width: usize) -> Term {
    let mut parts: Vec<Term> = Vec::new();
    let mut remaining = width;
    let mut out = 0;
    loop {
        let fits = |t: &&Term| t.arity() <= remaining && out + t.coarity() + remaining.saturating_sub(t.arity()) <= WIDTH_CAP.max(width);
        let candidates: Vec<&Term> = atoms
            .iter()
            .filter(fits)
            .filter(|t| t.arity() > 0 || (remaining == 0 && parts.is_empty()) || rng.gen_bool(0.1))
            .collect();
        if remaining == 0 && (!parts.is_empty() || candidates.is_empty()) {
            break;
        }
        let pick = match candidates.choose(rng) {
            Some(t) => (*t).clone(),
            None => Term::id(),
        };
        remaining -= pick.arity();
        out += pick.coarity();
        parts.push(pick);
        if remaining == 0 {
            break;
        }
    }
    if parts.is_empty() {
        return Term::empty();
    }
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = acc.par(p);
    }
    acc
}

/// A random well-typed diagram with the given arity, built from `layers`
/// layers of atoms. Plain `;` and `*` nodes are used throughout.
pub fn layered_term<R: Rng + ?Sized>(rng: &mut R, atoms: &[Term], arity: usize, layers: usize) -> Term {
    let mut acc = id_n(arity);
    for i in 0..layers.max(1) {
        let l = layer(rng, atoms, acc.coarity());
        acc = if i == 0 { l } else { acc.seq(&l).expect("layer matches width") };
    }
    acc
}

pub fn ha_term<R: Rng + ?Sized>(rng: &mut R, semiring: Semiring, arity: usize, layers: usize) -> Term {
    let atoms = ha_atoms(rng, semiring);
    layered_term(rng, &atoms, arity, layers)
}

/// A random convex-algebra diagram. Convex diagrams never lose all wires,
/// so `arity ≥ 1` gives a non-zero coarity.
pub fn ca_term<R: Rng + ?Sized>(rng: &mut R, arity: usize, layers: usize) -> Term {
    let atoms = ca_atoms(rng);
    layered_term(rng, &atoms, arity, layers)
}

/// An instance of one of the symmetric strict monoidal axioms, named.
#[derive(Debug, Clone)]
pub struct SmcInstance {
    pub axiom: &'static str,
    pub lhs: Term,
    pub rhs: Term,
}

pub const SMC_AXIOMS: [&str; 9] = [
    "seq-assoc",
    "par-assoc",
    "interchange",
    "par-unit-left",
    "par-unit-right",
    "seq-unit-left",
    "seq-unit-right",
    "sym-natural",
    "sym-iso",
];

/// A random instance of each axiom over the given atoms.
pub fn smc_instances<R: Rng + ?Sized>(rng: &mut R, atoms: &[Term]) -> Vec<SmcInstance> {
    let term = |rng: &mut R, arity: usize| {
        let layers = rng.gen_range(1..=2);
        layered_term(rng, atoms, arity, layers)
    };
    let small = |rng: &mut R| rng.gen_range(0..=2usize);
    let mut out = Vec::new();
    let mut push = |axiom, lhs: Term, rhs: Term| {
        assert_eq!(lhs.ty(), rhs.ty(), "{axiom}");
        out.push(SmcInstance { axiom, lhs, rhs })
    };

    let n = rng.gen_range(1..=2);
    let a = term(rng, n);
    let b = term(rng, a.coarity());
    let c = term(rng, b.coarity());
    push("seq-assoc", a.seq(&b).and_then(|ab| ab.seq(&c)).unwrap(), a.seq(&b.seq(&c).unwrap()).unwrap());

    let (i, j, k) = (small(rng), small(rng), small(rng));
    let (x, y, z) = (term(rng, i), term(rng, j), term(rng, k));
    push("par-assoc", x.par(&y).par(&z), x.par(&y.par(&z)));

    let (i, j) = (rng.gen_range(1..=2), rng.gen_range(0..=2));
    let (p, r) = (term(rng, i), term(rng, j));
    let (p2, r2) = (term(rng, p.coarity()), term(rng, r.coarity()));
    push(
        "interchange",
        p.seq(&p2).unwrap().par(&r.seq(&r2).unwrap()),
        p.par(&r).seq(&p2.par(&r2)).unwrap(),
    );

    let i = rng.gen_range(1..=2);
    let u = term(rng, i);
    push("par-unit-left", Term::empty().par(&u), u.clone());
    push("par-unit-right", u.par(&Term::empty()), u.clone());
    push("seq-unit-left", id_n(u.arity()).seq(&u).unwrap(), u.clone());
    push("seq-unit-right", u.seq(&id_n(u.coarity())).unwrap(), u.clone());

    let (i, j) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let (f, g) = (term(rng, i), term(rng, j));
    push(
        "sym-natural",
        f.par(&g).seq(&sym_mn(f.coarity(), g.coarity())).unwrap(),
        sym_mn(f.arity(), g.arity()).seq(&g.par(&f)).unwrap(),
    );
    push("sym-iso", Term::sym().seq(&Term::sym()).unwrap(), id_n(2));
    out
}

/// A value of the quantale; Lawvere values are small rationals or, rarely,
/// `∞`.
pub fn quantale_value<R: Rng + ?Sized>(rng: &mut R, kind: QuantaleKind) -> QuantaleValue {
    match kind {
        QuantaleKind::Boolean => QuantaleValue::Boolean(rng.gen_bool(0.5)),
        QuantaleKind::Lawvere if rng.gen_bool(0.1) => QuantaleValue::infinity(),
        QuantaleKind::Lawvere => {
            QuantaleValue::lawvere(Rational::new(rng.gen_range(0..=12), rng.gen_range(1..=4))).expect("non-negative")
        }
    }
}

/// A space of `n` points on the rational line: `|x − y|` in Lawvere,
/// `x ≤ y` in the Boolean quantale (a preorder, so not symmetric).
pub fn line_space<R: Rng + ?Sized>(rng: &mut R, kind: QuantaleKind, n: usize) -> HemimetricSpace {
    let xs: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(0..=8), rng.gen_range(1..=3))).collect();
    let dist = xs
        .iter()
        .map(|x| {
            xs.iter()
                .map(|y| match kind {
                    QuantaleKind::Boolean => QuantaleValue::Boolean(x <= y),
                    QuantaleKind::Lawvere => QuantaleValue::lawvere((x - y).abs()).expect("non-negative"),
                })
                .collect()
        })
        .collect();
    let points = (0..n).map(|i| format!("p{i}")).collect();
    HemimetricSpace::new(kind, points, dist, kind == QuantaleKind::Lawvere).expect("line distances are hemimetrics")
}

/// `ε` weakened: `⊥` in the Boolean quantale, `ε + 1/4` in Lawvere.
fn weaker(eps: &QuantaleValue) -> QuantaleValue {
    match eps {
        QuantaleValue::Boolean(_) => QuantaleValue::Boolean(false),
        QuantaleValue::Lawvere(_) => eps.tensor(&QuantaleValue::lawvere(Rational::new(1, 4)).expect("positive")).expect("same kind"),
    }
}

/// `id ; t`: equal to `t` in every theory, but syntactically different.
fn padded(t: &Term) -> Term {
    id_n(t.arity()).seq(t).expect("identity has the right width")
}

/// A `1 → n` diagram, used as a left factor.
fn fan(theory: &QuantTheory, n: usize) -> Term {
    match theory.model {
        Model::StochasticTv => distribution_term(&Distribution::uniform(n.max(1))),
        _ => copy_tree(n),
    }
}

fn cert_leaf<R: Rng + ?Sized>(rng: &mut R, theory: &QuantTheory) -> Certificate {
    let kind = theory.quantale;
    let semiring = theory.semiring.unwrap_or(Semiring::Boolean);
    let tv = theory.model == Model::StochasticTv;
    match rng.gen_range(0..10) {
        0..=4 => {
            if tv {
                Certificate::axiom(theory, SchemaId::Tv.name(), &[unit_rational(rng, 6)]).expect("λ in [0,1]")
            } else {
                let (a, b) = (scalar(rng, semiring), scalar(rng, semiring));
                let (k1, k2) = if a <= b { (a, b) } else { (b, a) };
                Certificate::axiom(theory, SchemaId::OrderScalars.name(), &[k1, k2]).expect("ordered scalars")
            }
        }
        5..=8 => {
            let n = rng.gen_range(1..=2);
            let t = if tv { ca_term(rng, n, 2) } else { ha_term(rng, semiring, n, 2) };
            Certificate::refl(kind, t.clone(), padded(&t))
        }
        _ => {
            let n = rng.gen_range(1..=2);
            let (t, u) = if tv {
                let t = ca_term(rng, n, 2);
                let m = stochastic(rng, t.coarity(), n);
                (t, stochastic_term(&m).expect("columns exist"))
            } else {
                let t = ha_term(rng, semiring, n, 2);
                let m = semiring_matrix(rng, semiring, t.coarity(), n);
                (t, canonical_form(&m).term)
            };
            Certificate::bot(kind, t, u)
        }
    }
}

/// A random certificate accepted by the checker over a preorder theory or
/// the total-variation theory, built from axiom, `REFL` and `BOT` leaves
/// with every structural rule the closure allows.
pub fn certificate<R: Rng + ?Sized>(rng: &mut R, theory: &QuantTheory, depth: usize) -> Certificate {
    let kind = theory.quantale;
    let closure = theory.closure;
    let tv = theory.model == Model::StochasticTv;
    let semiring = theory.semiring.unwrap_or(Semiring::Boolean);
    if depth == 0 {
        return cert_leaf(rng, theory);
    }
    let c = certificate(rng, theory, depth - 1);
    match rng.gen_range(0..8) {
        0 => {
            let atoms = if tv { ca_atoms(rng) } else { ha_atoms(rng, semiring) };
            let s = layered_term(rng, &atoms, c.rhs.coarity(), 1);
            c.seq(Certificate::refl(kind, s.clone(), s), closure.seq).expect("suffix fits")
        }
        1 => {
            let p = fan(theory, c.lhs.arity());
            Certificate::refl(kind, p.clone(), p).seq(c, closure.seq).expect("prefix fits")
        }
        2 => {
            let d = certificate(rng, theory, depth - 1);
            if c.lhs.arity() + d.lhs.arity() <= WIDTH_CAP && c.lhs.coarity() + d.lhs.coarity() <= WIDTH_CAP {
                c.par(d, closure.par).expect("parallel composition")
            } else {
                c
            }
        }
        3 => {
            let right = Certificate::refl(kind, c.rhs.clone(), padded(&c.rhs));
            c.triang(right).expect("chains")
        }
        4 => {
            let eps = weaker(&c.eps);
            c.mon(eps).expect("weaker bound")
        }
        5 => {
            let w = c.clone().mon(weaker(&c.eps)).expect("weaker bound");
            Certificate::join(kind, vec![c, w]).expect("one judgment")
        }
        6 if closure.symm => c.symm(),
        _ if closure.symm => {
            let back = c.clone().symm();
            c.triang(back).expect("chains")
        }
        _ => {
            let left = Certificate::refl(kind, padded(&c.lhs), c.lhs.clone());
            left.triang(c).expect("chains")
        }
    }
}

/// `f : 2`, `g : 1` with `g(x1) =_{1/4} x1` and `f(x1, x2) =_{1/2}
/// f(x2, x1)` over the Lawvere quantale.
pub fn two_op_theory() -> CartTheory {
    let sig = CartSignature::new().with("f", 2).expect("free name").with("g", 1).expect("free name");
    CartTheory::new("two_op", QuantaleKind::Lawvere, sig)
        .axiom("shrink", "g(x1)", "1/4", "x1")
        .and_then(|t| t.axiom("swap", "f(x1, x2)", "1/2", "f(x2, x1)"))
        .expect("axioms parse")
}

/// A random term over the theory's operations with variables below `ctx`.
pub fn cart_term<R: Rng + ?Sized>(rng: &mut R, theory: &CartTheory, ctx: usize, depth: usize) -> CartTerm {
    let ops: Vec<(&str, usize)> = theory.signature.ops().collect();
    let constants = ops.iter().any(|&(_, n)| n == 0);
    if ctx > 0 && (depth == 0 || rng.gen_bool(0.3)) || ops.is_empty() {
        return CartTerm::var(rng.gen_range(0..ctx.max(1)));
    }
    let usable: Vec<&(&str, usize)> = ops.iter().filter(|(_, n)| depth > 0 || *n == 0).collect();
    let &(op, n) = match usable.choose(rng) {
        Some(o) => *o,
        None if constants || ctx > 0 => return CartTerm::var(0),
        None => panic!("no closed terms over an empty context"),
    };
    let args = (0..n).map(|_| cart_term(rng, theory, ctx, depth.saturating_sub(1))).collect();
    CartTerm::op(op, args)
}

fn qel_leaf<R: Rng + ?Sized>(rng: &mut R, theory: &CartTheory, ctx: usize) -> QelCertificate {
    let fitting: Vec<_> = theory.axioms.iter().filter(|a| a.ctx <= ctx).collect();
    match fitting.choose(rng) {
        Some(ax) if rng.gen_bool(0.7) => QelCertificate {
            rule: QelRule::Axiom { name: ax.label.clone() },
            ctx,
            lhs: ax.lhs.clone(),
            rhs: ax.rhs.clone(),
            eps: ax.eps.clone(),
            children: vec![],
        },
        _ => {
            let t = cart_term(rng, theory, ctx, 2);
            QelCertificate { rule: QelRule::Refl { chain: vec![] }, ctx, lhs: t.clone(), rhs: t, eps: theory.quantale.top(), children: vec![] }
        }
    }
}

/// A random valid derivation in context `ctx ≥ 1`, using every rule.
pub fn qel_certificate<R: Rng + ?Sized>(rng: &mut R, theory: &CartTheory, ctx: usize, depth: usize) -> QelCertificate {
    if depth == 0 {
        return qel_leaf(rng, theory, ctx);
    }
    let node = |rule, lhs, rhs, eps, children| QelCertificate { rule, ctx, lhs, rhs, eps, children };
    match rng.gen_range(0..8) {
        0 | 1 => {
            let inner = rng.gen_range(1..=2);
            let c = qel_certificate(rng, theory, inner, depth - 1);
            let sigma: Vec<CartTerm> = (0..inner).map(|_| cart_term(rng, theory, ctx, 1)).collect();
            let lhs = substitute(&c.lhs, &sigma).expect("σ covers the premise context");
            let rhs = substitute(&c.rhs, &sigma).expect("σ covers the premise context");
            let eps = c.eps.clone();
            node(QelRule::SubQ { sigma }, lhs, rhs, eps, vec![c])
        }
        2 | 3 => {
            let ops: Vec<(String, usize)> = theory.signature.ops().map(|(o, n)| (o.to_string(), n)).collect();
            let (op, n) = ops.choose(rng).expect("theory has operations").clone();
            let children: Vec<QelCertificate> = (0..n).map(|_| qel_certificate(rng, theory, ctx, depth - 1)).collect();
            let lhs = CartTerm::op(&op, children.iter().map(|c| c.lhs.clone()).collect());
            let rhs = CartTerm::op(&op, children.iter().map(|c| c.rhs.clone()).collect());
            let eps = children.iter().fold(theory.quantale.top(), |acc, c| acc.meet(&c.eps).expect("same kind"));
            node(QelRule::NExp { op }, lhs, rhs, eps, children)
        }
        4 => {
            let c = qel_certificate(rng, theory, ctx, depth - 1);
            let back = node(QelRule::Symm, c.rhs.clone(), c.lhs.clone(), c.eps.clone(), vec![c.clone()]);
            let eps = c.eps.tensor(&back.eps).expect("same kind");
            node(QelRule::Triang, c.lhs.clone(), c.lhs.clone(), eps, vec![c, back])
        }
        5 => {
            let c = qel_certificate(rng, theory, ctx, depth - 1);
            node(QelRule::Symm, c.rhs.clone(), c.lhs.clone(), c.eps.clone(), vec![c])
        }
        6 => {
            let c = qel_certificate(rng, theory, ctx, depth - 1);
            node(QelRule::Mon, c.lhs.clone(), c.rhs.clone(), weaker(&c.eps), vec![c])
        }
        _ => {
            let c = qel_certificate(rng, theory, ctx, depth - 1);
            let w = node(QelRule::Mon, c.lhs.clone(), c.rhs.clone(), weaker(&c.eps), vec![c.clone()]);
            let eps = c.eps.join(&w.eps).expect("same kind");
            node(QelRule::Cont, c.lhs.clone(), c.rhs.clone(), eps, vec![c, w])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_ca, eval_ha};

    #[test]
    fn samplers_are_well_formed() {
        let mut r = rng(3);
        for _ in 0..50 {
            let n = r.gen_range(0..=3);
            let t = ha_term(&mut r, Semiring::NonNegative, n, 3);
            assert!(eval_ha(&t, Semiring::NonNegative).is_ok(), "{t}");
            let n = r.gen_range(1..=3);
            let c = ca_term(&mut r, n, 3);
            assert!(c.coarity() > 0);
            assert!(eval_ca(&c).is_ok(), "{c}");
            let s = stochastic(&mut r, 3, 2);
            assert_eq!((s.rows(), s.cols()), (3, 2));
        }
    }

    #[test]
    fn sampled_certificates_check() {
        use crate::cartesian::check_qel;
        use crate::certify::check;
        use crate::theory::builtin_by_name;
        let mut r = rng(5);
        for name in ["ba", "preord_bool", "preord_nonneg"] {
            let t = builtin_by_name(name).unwrap();
            for _ in 0..20 {
                let depth = r.gen_range(0..=3);
                let c = certificate(&mut r, &t, depth);
                assert_eq!(check(&c, &t).unwrap(), c.eps, "{name}: {c:?}");
            }
        }
        let cart = two_op_theory();
        for _ in 0..20 {
            let depth = r.gen_range(0..=3);
            let c = qel_certificate(&mut r, &cart, 2, depth);
            assert_eq!(check_qel(&c, &cart).unwrap().eps, c.eps);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let a: Vec<Distribution> = (0..5).map(|_| distribution(&mut rng(9), 4)).collect();
        let b: Vec<Distribution> = (0..5).map(|_| distribution(&mut rng(9), 4)).collect();
        assert_eq!(a, b);
    }
}
