//! Worked examples through the public API.

use qmt::cartesian::{
    check_qel, parse_cart, parse_qel, phi_translate, prime_theory, simulate_qel_in_monoidal, substitute, CartSignature,
    CartTheory,
};
use qmt::certify::{check, prove_matrix_order, prove_tv_column, prove_tv_general, Certificate};
use qmt::diagram::build::{canonical_wires, sym_mn};
use qmt::diagram::{parse, Term};
use qmt::distance::{entrywise_leq, split, tv, tvmax, TvMethod};
use qmt::quantale::{QuantaleKind, QuantaleValue};
use qmt::semantics::{eval_ca, eval_ha, Distribution, Matrix, Semiring, StochMatrix};
use qmt::theory::{builtin_by_name, load_theory, QuantEq, QuantTheory, SchemaId};
use qmt::{q, Rational};

fn lv(s: &str) -> QuantaleValue {
    QuantaleKind::Lawvere.parse_value(s).unwrap()
}

fn mat(s: &str) -> Matrix {
    Matrix::parse(s).unwrap()
}

fn stoch(s: &str) -> StochMatrix {
    StochMatrix::new(mat(s)).unwrap()
}

fn dist(ws: &[(i64, i64)]) -> Distribution {
    Distribution::new(ws.iter().map(|&(a, b)| q(a, b)).collect()).unwrap()
}

fn term(t: &QuantTheory, s: &str) -> Term {
    parse(s, &t.signature).unwrap()
}

#[test]
fn quantale_operations() {
    assert_eq!(lv("3/10").tensor(&lv("4/10")).unwrap(), lv("7/10"));
    assert_eq!(lv("∞").tensor(&lv("1/2")).unwrap(), lv("∞"));
    let top = QuantaleValue::Boolean(true);
    assert_eq!(top.tensor(&top).unwrap(), top);
    assert!(lv("3/10").integrality_check(&lv("4/10")).unwrap());
    assert!(QuantaleValue::Boolean(false).integrality_check(&top).unwrap());
    assert!(lv("3/10").tensor(&top).is_err());
}

#[test]
fn structural_diagrams_evaluate() {
    assert_eq!(eval_ha(&sym_mn(2, 1), Semiring::Boolean).unwrap(), mat("[[0,0,1],[1,0,0],[0,1,0]]"));
    let (b, w) = canonical_wires(2, 2);
    assert_eq!(eval_ha(&w, Semiring::Boolean).unwrap(), mat("[[1,0,1,0],[0,1,0,1]]"));
    assert_eq!(eval_ha(&b, Semiring::Boolean).unwrap(), mat("[[1,0],[1,0],[0,1],[0,1]]"));
    assert_eq!(eval_ha(&Term::empty(), Semiring::Boolean).unwrap(), Matrix::zeros(0, 0));
}

#[test]
fn parsing_examples() {
    let ha = builtin_by_name("ha_bool").unwrap();
    let ca = builtin_by_name("ca").unwrap();
    assert_eq!(term(&ha, "copy ; (id * del)").ty(), (1, 1));
    assert_eq!(term(&ca, "cc(1/2) * del").ty(), (1, 3));
    assert!(parse("copy ; add ; add", &ha.signature).is_err());
}

#[test]
fn evaluation_examples() {
    let ha = builtin_by_name("ha_nonneg").unwrap();
    let ca = builtin_by_name("ca").unwrap();
    assert_eq!(ha.eval(&term(&ha, "copy")).unwrap(), mat("[[1],[1]]"));
    // [[a,b],[c,d]] as copies feeding scalars feeding additions.
    let worked = "copy * copy ; id * sym * id ; scalar(1) * scalar(2) * scalar(3) * scalar(4) ; add * add";
    assert_eq!(ha.eval(&term(&ha, worked)).unwrap(), mat("[[1,2],[3,4]]"));
    for l in [q(0, 1), q(3, 10), q(1, 1)] {
        let one = Rational::one();
        let left = eval_ca(&term(&ca, &format!("cc({l}) * del"))).unwrap();
        assert_eq!(left.matrix(), &Matrix::new(3, 1, vec![l.clone(), &one - &l, Rational::zero()]).unwrap());
        let right = eval_ca(&term(&ca, &format!("del * cc({})", &one - &l))).unwrap();
        assert_eq!(right.matrix(), &Matrix::new(3, 1, vec![Rational::zero(), &one - &l, l.clone()]).unwrap());
    }
    assert_eq!(eval_ca(&term(&ca, "cop")).unwrap().matrix(), &mat("[[1, 1]]"));
    assert!(ca.equal_in_theory(&term(&ca, "cc(1/2) ; sym"), &term(&ca, "cc(1/2)")).unwrap());
    assert!(!ca.equal_in_theory(&term(&ca, "cc(1/2)"), &term(&ca, "cc(1/3)")).unwrap());
    assert!(ha.equal_in_theory(&term(&ha, "copy ; sym"), &term(&ha, "copy")).unwrap());
}

#[test]
fn matrix_operations() {
    let c = stoch("[[1],[0]]");
    let a = stoch("[[1, 1/2], [0, 1/2]]");
    assert_eq!(c.then(&a).unwrap(), c);
    assert_eq!(stoch("[[1/2],[1/2]]").dsum(&stoch("[[1]]")).matrix(), &mat("[[1/2,0],[1/2,0],[0,1]]"));
    assert!(entrywise_leq(&mat("[[0,1],[0,0]]"), &mat("[[1,1],[0,1]]")).unwrap());
    assert!(!entrywise_leq(&mat("[[1,0]]"), &mat("[[0,1]]")).unwrap());
}

#[test]
fn total_variation_examples() {
    let l = q(3, 10);
    for m in TvMethod::ALL {
        assert_eq!(tv(&dist(&[(3, 10), (7, 10), (0, 1)]), &dist(&[(0, 1), (7, 10), (3, 10)]), m).unwrap(), l);
        assert_eq!(tv(&dist(&[(1, 1), (0, 1)]), &dist(&[(0, 1), (1, 1)]), m).unwrap(), q(1, 1));
    }
    let a = stoch("[[1, 1/2], [0, 1/2]]");
    assert_eq!(tvmax(&a, &a).unwrap(), Rational::zero());
    assert_eq!(tvmax(&stoch("[[1],[0]]"), &stoch("[[1/2],[1/2]]")).unwrap(), q(1, 2));
    // The composite pair (C;A, C′;B) with B = A lands at [1, 0] and [3/4, 1/4].
    let c2 = stoch("[[1/2],[1/2]]");
    assert_eq!(c2.then(&a).unwrap(), stoch("[[3/4],[1/4]]"));
    assert_eq!(tvmax(&stoch("[[1],[0]]").then(&a).unwrap(), &c2.then(&a).unwrap()).unwrap(), q(1, 4));
}

#[test]
fn split_edge_cases() {
    let mu = dist(&[(1, 3), (2, 3)]);
    let s = split(&mu, &mu).unwrap();
    assert_eq!((s.lambda.clone(), s.tau.clone()), (Rational::zero(), mu.clone()));
    let (a, b) = (dist(&[(1, 1), (0, 1)]), dist(&[(0, 1), (1, 1)]));
    let s = split(&a, &b).unwrap();
    assert_eq!((s.lambda, s.mu_prime, s.nu_prime), (q(1, 1), a, b));
}

#[test]
fn schema_instances() {
    let preord = builtin_by_name("preord_bool").unwrap();
    let ba = builtin_by_name("ba").unwrap();
    let e1 = preord.instantiate_schema(SchemaId::OrderScalars, &[q(0, 1), q(1, 1)]).unwrap();
    assert_eq!((e1.lhs.to_string(), e1.rhs.to_string(), e1.eps.clone()), ("scalar(0)".into(), "scalar(1)".into(), QuantaleValue::Boolean(true)));
    assert!(preord.truth_check(&e1).unwrap());
    assert!(preord.instantiate_schema(SchemaId::OrderScalars, &[q(1, 1), q(0, 1)]).is_err());
    let half = ba.instantiate_schema(SchemaId::Tv, &[q(1, 2)]).unwrap();
    assert_eq!((half.lhs.to_string(), half.rhs.to_string()), ("cc(1/2) * del".into(), "del * cc(1/2)".into()));
    assert!(ba.truth_check(&half).unwrap());
    assert_eq!(ba.instantiate_schema(SchemaId::Tv, &[q(0, 1)]).unwrap().eps, ba.quantale.top());
    assert_eq!(ba.instantiate_schema(SchemaId::Tv, &[q(3, 10)]).unwrap().eps, lv("3/10"));
    // An overclaimed bound is false in the model.
    let over = QuantEq::new(half.lhs.clone(), half.rhs.clone(), lv("1/4")).unwrap();
    assert!(!ba.truth_check(&over).unwrap());
}

#[test]
fn checker_examples() {
    let preord = builtin_by_name("preord_nonneg").unwrap();
    let refl = Certificate::refl(preord.quantale, term(&preord, "copy ; sym"), term(&preord, "copy"));
    assert_eq!(check(&refl, &preord).unwrap(), QuantaleValue::Boolean(true));
    let ba = builtin_by_name("ba").unwrap();
    let ax = Certificate::axiom(&ba, "tv", &[q(3, 10)]).unwrap();
    assert_eq!(check(&ax, &ba).unwrap(), lv("3/10"));
    let quarter = Certificate::axiom(&ba, "tv", &[q(1, 4)]).unwrap();
    let back = quarter.clone().symm();
    assert_eq!(check(&quarter.triang(back).unwrap(), &ba).unwrap(), lv("1/2"));
}

#[test]
fn prover_examples() {
    let preord = builtin_by_name("preord_bool").unwrap();
    let c = prove_matrix_order(&preord, &term(&preord, "scalar(0)"), &term(&preord, "scalar(1)")).unwrap();
    assert_eq!((c.height(), c.count("AXIOM")), (1, 1));
    let f = term(&preord, "copy");
    assert_eq!(prove_matrix_order(&preord, &f, &f).unwrap().rule.tag(), "REFL");
    let (a, b) = (mat("[[0,1],[0,0]]"), mat("[[1,1],[0,1]]"));
    let (fa, fb) = (qmt::semantics::realize::canonical_form(&a).term, qmt::semantics::realize::canonical_form(&b).term);
    let c = prove_matrix_order(&preord, &fa, &fb).unwrap();
    assert_eq!(check(&c, &preord).unwrap(), QuantaleValue::Boolean(true));
    assert_eq!(c.count("AXIOM"), 4);

    let ba = builtin_by_name("ba").unwrap();
    let col = |d: &Distribution| qmt::semantics::realize::distribution_term(d);
    let c = prove_tv_column(&ba, &col(&dist(&[(1, 2), (1, 2)])), &col(&dist(&[(4, 5), (1, 5)]))).unwrap();
    assert_eq!(check(&c, &ba).unwrap(), lv("3/10"));
    let c = prove_tv_column(&ba, &term(&ba, "cc(1/2) * del"), &term(&ba, "del * cc(1/2)")).unwrap();
    assert_eq!(check(&c, &ba).unwrap(), lv("1/2"));
    let same = term(&ba, "cc(1/3)");
    assert_eq!(check(&prove_tv_column(&ba, &same, &same).unwrap(), &ba).unwrap(), lv("0"));
    let c = prove_tv_general(&ba, &term(&ba, "cc(1)"), &term(&ba, "cc(1/2)")).unwrap();
    assert_eq!(check(&c, &ba).unwrap(), lv("1/2"));
    let (f, g) = (term(&ba, "cc(1/3) * cc(1/5) ; id * sym * id ; cop * cop"), term(&ba, "cc(1/2) * cc(1) ; id * sym * id ; cop * cop"));
    let d = tvmax(&eval_ca(&f).unwrap(), &eval_ca(&g).unwrap()).unwrap();
    assert_eq!(check(&prove_tv_general(&ba, &f, &g).unwrap(), &ba).unwrap(), QuantaleValue::lawvere(d).unwrap());
}

#[test]
fn shipped_fixtures_match_builtins() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../theories");
    for name in ["ha_bool", "ha_nonneg", "preord_bool", "preord_nonneg", "ca", "ba"] {
        let loaded = load_theory(dir.join(format!("{name}.thy"))).unwrap();
        assert_eq!(loaded, builtin_by_name(name).unwrap(), "{name}");
    }
}

fn cart_theory() -> CartTheory {
    let sig = CartSignature::new().with("f", 2).unwrap().with("g", 1).unwrap();
    CartTheory::new("fg", QuantaleKind::Lawvere, sig)
        .axiom("near", "g(x1)", "1/4", "x1")
        .unwrap()
        .axiom("far", "f(x1, x2)", "1/2", "x1")
        .unwrap()
}

#[test]
fn cartesian_examples() {
    let t = cart_theory();
    let p = |s: &str| parse_cart(s, &t.signature).unwrap();
    assert_eq!(substitute(&p("x1"), &[p("f(x2, x2)")]).unwrap(), p("f(x2, x2)"));
    assert_eq!(substitute(&p("f(x1, x1)"), &[p("g(x2)")]).unwrap(), p("f(g(x2), g(x2))"));
    assert_eq!(phi_translate(&p("x1"), 1).unwrap().to_string(), "id");
    assert_eq!(phi_translate(&p("x1"), 2).unwrap().to_string(), "id * del");
    assert_eq!(phi_translate(&p("f(x1, x1)"), 1).unwrap().to_string(), "copy ; f");
}

#[test]
fn qel_examples() {
    let t = cart_theory();
    let prime = prime_theory(&t).unwrap();
    let nexp = parse_qel(
        r#"(NEXP@2 1/2 "f(g(x1), f(x1, x2))" "f(x1, x1)" {"f"}
             (AXIOM@2 1/4 "g(x1)" "x1" {"near"})
             (AXIOM@2 1/2 "f(x1, x2)" "x1" {"far"}))"#,
        &t,
    )
    .unwrap();
    assert_eq!(check_qel(&nexp, &t).unwrap().eps, lv("1/2"));
    let mono = simulate_qel_in_monoidal(&nexp, &t).unwrap();
    assert_eq!(check(&mono, &prime).unwrap(), lv("1/2"));

    let triang = parse_qel(
        r#"(TRIANG@1 1/2 "g(g(x1))" "x1"
             (SUBQ@1 1/4 "g(g(x1))" "g(x1)" {"g(x1)"} (AXIOM@1 1/4 "g(x1)" "x1" {"near"}))
             (AXIOM@1 1/4 "g(x1)" "x1" {"near"}))"#,
        &t,
    )
    .unwrap();
    assert_eq!(check_qel(&triang, &t).unwrap().eps, lv("1/2"));
    let mono = simulate_qel_in_monoidal(&triang, &t).unwrap();
    assert_eq!(check(&mono, &prime).unwrap(), lv("1/2"));
    // SubQ becomes a sequential step with a REFL left factor.
    let subq = &mono.children[0];
    assert!(subq.count("SEQ_SUM") >= 1 && subq.count("REFL") >= 1);

    let ax = parse_qel(r#"(AXIOM@1 1/4 "g(x1)" "x1" {"near"})"#, &t).unwrap();
    let mono = simulate_qel_in_monoidal(&ax, &t).unwrap();
    assert_eq!((mono.rule.tag(), mono.size()), ("AXIOM", 1));
}
