//! Replays a quantitative equational derivation as a monoidal certificate
//! over the translated theory `U′`.

use crate::certify::{Certificate, CertifyError};
use crate::diagram::{Generator, Term};
use crate::theory::{Combine, QuantTheory};

use super::{check_qel, copy_bundle, phi_translate, phi_tuple, prime_theory, projection, CartTheory, QelCertificate, QelRule};

/// Translates a valid derivation of `k ⊢ t =_ε s` into a certificate for
/// `Φ_k(t) =_ε Φ_k(s)` in `prime_theory(theory)`. `REFL` leaves for
/// non-trivial equations of `E` can only be checked with `assume_refl`.
pub fn simulate_qel_in_monoidal(cert: &QelCertificate, theory: &CartTheory) -> Result<Certificate, CertifyError> {
    check_qel(cert, theory)?;
    let prime = prime_theory(theory)?;
    Simulator { cart: theory, prime: &prime }.node(cert)
}

struct Simulator<'a> {
    cart: &'a CartTheory,
    prime: &'a QuantTheory,
}

impl Simulator<'_> {
    fn refl(&self, t: &Term) -> Certificate {
        Certificate::refl(self.prime.quantale, t.clone(), t.clone())
    }

    fn node(&self, cert: &QelCertificate) -> Result<Certificate, CertifyError> {
        let kind = self.prime.quantale;
        let k = cert.ctx;
        let lhs = phi_translate(&cert.lhs, k)?;
        let rhs = phi_translate(&cert.rhs, k)?;
        let children = || cert.children.iter().map(|c| self.node(c)).collect::<Result<Vec<_>, _>>();
        Ok(match &cert.rule {
            QelRule::Bot => Certificate::bot(kind, lhs, rhs),
            QelRule::Refl { .. } => Certificate::refl(kind, lhs, rhs),
            QelRule::Mon => self.node(&cert.children[0])?.mon(cert.eps.clone())?,
            QelRule::Cont => Certificate::join(kind, children()?)?,
            QelRule::Symm => self.node(&cert.children[0])?.symm(),
            QelRule::Triang => {
                let mut cs = children()?.into_iter();
                let (a, b) = (cs.next().expect("two premises"), cs.next().expect("two premises"));
                a.triang(b)?
            }
            QelRule::Axiom { name } => {
                let k0 = self.cart.find_axiom(name).expect("checked").ctx;
                let ax = Certificate::axiom(self.prime, name, &[])?;
                if k == k0 {
                    ax
                } else {
                    self.refl(&projection(k, k0)).seq(ax, Combine::Sum)?.bridge(kind, &lhs, &rhs)?
                }
            }
            QelRule::SubQ { sigma } => {
                let tau = phi_tuple(sigma, k)?;
                let premise = self.node(&cert.children[0])?;
                self.refl(&tau).seq(premise, Combine::Sum)?.bridge(kind, &lhs, &rhs)?
            }
            QelRule::NExp { op } => {
                let n = cert.children.len();
                if n == 0 {
                    return Ok(Certificate::refl(kind, lhs, rhs));
                }
                let mut parts = children()?.into_iter();
                let first = parts.next().expect("n ≥ 1");
                let layer = parts.try_fold(first, |acc, c| acc.par(c, Combine::Meet))?;
                let op = Term::gen(Generator::new(op, n, 1));
                self.refl(&copy_bundle(k, n))
                    .seq(layer, Combine::Sum)?
                    .seq(self.refl(&op), Combine::Sum)?
                    .bridge(kind, &lhs, &rhs)?
            }
        })
    }
}
