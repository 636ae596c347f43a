use crate::diagram::build::{copy_tree, ha, id_n, par_all, par_smart, seq_smart, transpose_wires};
use crate::diagram::{Generator, Signature, Term};
use crate::theory::{ClosureConfig, Combine, Equation, EquationEntry, Model, QuantAxiom, QuantEntry, QuantEq, QuantTheory};

use super::{CartTerm, CartTheory, CartesianError};

fn op_generator(name: &str, arity: usize) -> Term {
    Term::gen(Generator::new(name, arity, 1))
}

fn dels(k: usize) -> Term {
    par_all(&vec![ha::del(); k])
}

/// `k → k·n`: copies each of `k` wires `n` times and regroups them into `n`
/// blocks holding the whole context. With `n = 0` it discards everything.
pub fn copy_bundle(k: usize, n: usize) -> Term {
    let trees = par_all(&vec![copy_tree(n); k]);
    seq_smart(&trees, &transpose_wires(k, n)).expect("bundle widths agree")
}

/// `k → k0`, keeping the first `k0` wires and discarding the rest.
pub fn projection(k: usize, k0: usize) -> Term {
    assert!(k0 <= k, "cannot project {k} wires onto {k0}");
    par_smart(&id_n(k0), &dels(k - k0))
}

/// `Φ(t) : ctx → 1`.
pub fn phi_translate(t: &CartTerm, ctx: usize) -> Result<Term, CartesianError> {
    if let Some(v) = t.max_var() {
        if v >= ctx {
            return Err(CartesianError::ContextTooSmall { needed: v + 1, ctx });
        }
    }
    Ok(phi(t, ctx))
}

fn phi(t: &CartTerm, ctx: usize) -> Term {
    match t {
        CartTerm::Var(i) => par_smart(&par_smart(&dels(*i), &Term::id()), &dels(ctx - i - 1)),
        CartTerm::Op(o, args) => {
            let inner: Vec<Term> = args.iter().map(|a| phi(a, ctx)).collect();
            let body = seq_smart(&copy_bundle(ctx, args.len()), &par_all(&inner)).expect("bundle feeds arguments");
            seq_smart(&body, &op_generator(o, args.len())).expect("arguments feed the operation")
        }
    }
}

/// `Φ⟨t₁, …, t_m⟩ : ctx → m`.
pub fn phi_tuple(ts: &[CartTerm], ctx: usize) -> Result<Term, CartesianError> {
    let parts: Vec<Term> = ts.iter().map(|t| phi_translate(t, ctx)).collect::<Result<_, _>>()?;
    Ok(seq_smart(&copy_bundle(ctx, ts.len()), &par_all(&parts)).expect("bundle feeds components"))
}

/// The monoidal theory `U′`: operations plus `copy`/`del`, the comonoid
/// equations, naturality of the comonoid in every operation, and the
/// translations of the equations and quantitative axioms. Closed under
/// `seq=sum par=meet symm=true`.
pub fn prime_theory(cart: &CartTheory) -> Result<QuantTheory, CartesianError> {
    let theory_err = |e: crate::theory::TheoryError| CartesianError::Theory(e.to_string());
    let mut sig = Signature::new().with("copy", 1, 2, None).with("del", 1, 0, None);
    for (o, n) in cart.signature.ops() {
        sig = sig.with(o, n, 1, None);
    }
    let copy = ha::copy();
    let del = ha::del();
    let id = Term::id();
    let seq = |a: &Term, b: &Term| a.seq(b).expect("well typed by construction");
    let eq = |label: &str, lhs: Term, rhs: Term| EquationEntry::Concrete(Equation { label: label.to_string(), lhs, rhs });
    let mut equations = vec![
        eq("copassoc", seq(&copy, &copy.par(&id)), seq(&copy, &id.par(&copy))),
        eq("copcomm", seq(&copy, &Term::sym()), copy.clone()),
        eq("copunit", seq(&copy, &del.par(&id)), id.clone()),
    ];
    for (o, n) in cart.signature.ops() {
        let g = op_generator(o, n);
        equations.push(eq(&format!("copy_nat_{o}"), seq(&g, &copy), seq(&copy_bundle(n, 2), &g.par(&g))));
        equations.push(eq(&format!("del_nat_{o}"), seq(&g, &del), dels(n)));
    }
    for e in &cart.equations {
        equations.push(eq(&e.label, phi_translate(&e.lhs, e.ctx)?, phi_translate(&e.rhs, e.ctx)?));
    }
    let mut quantitative = Vec::new();
    for a in &cart.axioms {
        let qe = QuantEq::new(phi_translate(&a.lhs, a.ctx)?, phi_translate(&a.rhs, a.ctx)?, a.eps.clone()).map_err(theory_err)?;
        quantitative.push(QuantEntry::Concrete(QuantAxiom { label: a.label.clone(), eq: qe }));
    }
    QuantTheory::new(
        format!("{}_prime", cart.name),
        cart.quantale,
        None,
        sig,
        equations,
        quantitative,
        ClosureConfig { seq: Combine::Sum, par: Combine::Meet, symm: true },
        Model::Cartesian { exact: cart.equations.is_empty() },
    )
    .map_err(theory_err)
}
