use serde::Serialize;

use super::{buchberger, member, Coefficient, Exponent, MonomialOrder, Poly, DEFAULT_MAX_PAIRS};
use crate::error::{Error, Result};
use crate::ideal::Monomial;
use crate::sv_rank::RadicalCertificate;

/// Largest power `u^N` tried per generator by default.
pub const DEFAULT_POWER_CAP: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadicalVerification {
    /// True when every generator of the target has a power in the certificate ideal.
    pub verified: bool,
    /// Smallest certifying power found per generator.
    pub powers: Vec<(Monomial, u32)>,
    /// Generators with no power up to the cap in the certificate ideal. This
    /// is inconclusive, not a proof of non-membership.
    pub failures: Vec<Monomial>,
}

/// Checks `√(cert.polys) = √I` for the target monomial ideal `I`.
///
/// Containment `(polys) ⊆ I` is checked term-wise, valid because `I` is a
/// monomial ideal. The reverse inclusion of radicals is witnessed by finding,
/// for each generator `u`, some `N <= cap` with `u^N` in `(polys)`.
pub fn verify_radical_cert<C: Coefficient>(
    cert: &RadicalCertificate<C>,
    cap: u32,
) -> Result<RadicalVerification> {
    let target = &cert.target;
    let n = target.n();
    for (k, poly) in cert.polys.iter().enumerate() {
        if poly.nvars() != n {
            return Err(Error::MalformedCertificate(format!(
                "polynomial {k} lives in {} variables, target in {n}",
                poly.nvars()
            )));
        }
        if let Some((e, _)) = poly.terms().iter().find(|(e, _)| !target.contains(e.support())) {
            return Err(Error::MalformedCertificate(format!(
                "term {e} of polynomial {k} is not in the target ideal"
            )));
        }
    }
    let order = MonomialOrder::DegRevLex;
    let basis = if cert.polys.iter().all(|p| p.is_zero()) {
        Vec::new()
    } else {
        buchberger(&cert.polys, order, DEFAULT_MAX_PAIRS)?
    };
    let mut powers = Vec::new();
    let mut failures = Vec::new();
    for &u in target.gens() {
        let found = (1..=cap).find(|&power| {
            let up = Poly::term(order, Exponent::from_squarefree(u, n, power), C::one());
            !basis.is_empty() && member(&up, &basis)
        });
        match found {
            Some(power) => powers.push((u, power)),
            None => failures.push(u),
        }
    }
    Ok(RadicalVerification { verified: failures.is_empty(), powers, failures })
}
