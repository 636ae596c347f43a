//! Certificate generators for the preorder and total-variation theories.

use crate::diagram::build::{fritz_merge, par_all};
use crate::diagram::Term;
use crate::distance::split;
use crate::rational::Rational;
use crate::semantics::realize::{canonical_form, distribution_term, scalar_layer};
use crate::semantics::{Distribution, StochMatrix};
use crate::theory::{Combine, Model, QuantTheory, SchemaId};

use super::{Certificate, CertifyError};

fn require(theory: &QuantTheory, model: Model, schema: SchemaId) -> Result<(), CertifyError> {
    if theory.model != model || !theory.has_schema(schema) {
        return Err(CertifyError::Unsupported(format!(
            "{} needs the {} model and the `{schema}` axioms",
            theory.name,
            model.name()
        )));
    }
    Ok(())
}

fn bare_scalar(t: &Term) -> Option<Rational> {
    t.as_generator().filter(|g| &*g.name == "scalar").and_then(|g| g.scalar.clone())
}

/// Derives `lhs ≤ rhs` in a preorder theory when `F(lhs) ≤ F(rhs)`
/// entrywise. Both sides are rewritten to the scalar canonical form, whose
/// scalar layers are related entry by entry with `order_scalars`.
pub fn prove_matrix_order(theory: &QuantTheory, lhs: &Term, rhs: &Term) -> Result<Certificate, CertifyError> {
    require(theory, Model::MatrixOrder, SchemaId::OrderScalars)?;
    let kind = theory.quantale;
    let (a, b) = (theory.eval(lhs)?, theory.eval(rhs)?);
    if let Some((row, col)) = a.first_violation(&b)? {
        return Err(CertifyError::NotDerivable { row, col, left: Box::new(a.get(row, col).clone()), right: Box::new(b.get(row, col).clone()) });
    }
    if a == b {
        return Ok(Certificate::refl(kind, lhs.clone(), rhs.clone()));
    }
    if let (Some(k1), Some(k2)) = (bare_scalar(lhs), bare_scalar(rhs)) {
        return Certificate::axiom(theory, SchemaId::OrderScalars.name(), &[k1, k2]);
    }
    let entries = scalar_layer(&a).into_iter().zip(scalar_layer(&b));
    let mut layer: Option<Certificate> = None;
    for (s, t) in entries {
        let (k1, k2) = (bare_scalar(&s).expect("scalar layer"), bare_scalar(&t).expect("scalar layer"));
        let step = Certificate::axiom(theory, SchemaId::OrderScalars.name(), &[k1, k2])?;
        layer = Some(match layer {
            None => step,
            Some(acc) => acc.par(step, theory.closure.par)?,
        });
    }
    let layer = layer.expect("unequal matrices have entries");
    let form = canonical_form(&a);
    let cert = Certificate::refl(kind, form.b.clone(), form.b)
        .seq(layer, theory.closure.seq)?
        .seq(Certificate::refl(kind, form.w.clone(), form.w), theory.closure.seq)?;
    cert.bridge(kind, lhs, rhs)
}

fn require_tv(theory: &QuantTheory) -> Result<(), CertifyError> {
    require(theory, Model::StochasticTv, SchemaId::Tv)?;
    if theory.closure.seq != Combine::Sum {
        return Err(CertifyError::Unsupported(format!("{} does not close `;` under sums", theory.name)));
    }
    Ok(())
}

fn stochastic(theory: &QuantTheory, t: &Term) -> Result<StochMatrix, CertifyError> {
    Ok(StochMatrix::new(theory.eval(t)?)?)
}

/// Derives `f =_λ g` for `1 → m` diagrams with `λ = tv(F f, F g)`: one `tv`
/// axiom, followed by the diagram recombining the three parts of the split.
pub fn prove_tv_column(theory: &QuantTheory, f: &Term, g: &Term) -> Result<Certificate, CertifyError> {
    require_tv(theory)?;
    let kind = theory.quantale;
    let (a, b) = (stochastic(theory, f)?, stochastic(theory, g)?);
    if a.cols() != 1 || b.cols() != 1 {
        return Err(CertifyError::Unsupported(format!("{f} is not a 1 → m diagram")));
    }
    if a == b {
        return Ok(Certificate::refl(kind, f.clone(), g.clone()));
    }
    let parts = split(&a.column(0), &b.column(0))?;
    let h = par_all(&[distribution_term(&parts.mu_prime), distribution_term(&parts.tau), distribution_term(&parts.nu_prime)])
        .seq(&fritz_merge(3, a.rows())?)?;
    let cert = Certificate::axiom(theory, SchemaId::Tv.name(), &[parts.lambda])?
        .seq(Certificate::refl(kind, h.clone(), h), Combine::Sum)?;
    cert.bridge(kind, f, g)
}

/// Derives `f =_d g` for `n → m` diagrams with `d = tvmax(F f, F g)`,
/// column by column.
pub fn prove_tv_general(theory: &QuantTheory, f: &Term, g: &Term) -> Result<Certificate, CertifyError> {
    require_tv(theory)?;
    let kind = theory.quantale;
    let (a, b) = (stochastic(theory, f)?, stochastic(theory, g)?);
    if a == b {
        return Ok(Certificate::refl(kind, f.clone(), g.clone()));
    }
    if a.cols() == 1 {
        return prove_tv_column(theory, f, g);
    }
    let column = |d: Distribution| distribution_term(&d);
    let mut layer: Option<Certificate> = None;
    for (x, y) in a.columns().into_iter().zip(b.columns()) {
        let step = prove_tv_column(theory, &column(x), &column(y))?;
        layer = Some(match layer {
            None => step,
            Some(acc) => acc.par(step, theory.closure.par)?,
        });
    }
    let layer = layer.expect("unequal matrices have columns");
    let p = fritz_merge(a.cols(), a.rows())?;
    let cert = layer.seq(Certificate::refl(kind, p.clone(), p), Combine::Sum)?;
    cert.bridge(kind, f, g)
}
