use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::graph::Colour;
use crate::rational::{int, ratio, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerClause {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Whether the desk override may waive this clause.
    pub relaxable: bool,
    /// Failed, but waived by the override.
    pub overridden: bool,
}

/// The parameters `nu, mu, d, eps` and `n` with every clause of the
/// hierarchy evaluated exactly.
///
/// The ordering clauses (`mu < nu/20`, `d <= mu/r`, `eps < d`, `nu < 1`)
/// are always enforced. The absolute ceilings, the `eps` ceilings in terms of
/// `mu` and `d`, and the `n` floor can only be met far beyond desk scale;
/// with `desk_override` they are evaluated, reported and waived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterLedger {
    #[serde(with = "crate::rational::text")]
    pub nu: Rational,
    #[serde(with = "crate::rational::text")]
    pub mu: Rational,
    #[serde(with = "crate::rational::text")]
    pub d: Rational,
    #[serde(with = "crate::rational::text")]
    pub eps: Rational,
    pub r: Colour,
    pub n: usize,
    pub desk_override: bool,
    pub clauses: Vec<LedgerClause>,
}

impl ParameterLedger {
    pub fn new(
        nu: Rational,
        mu: Rational,
        d: Rational,
        eps: Rational,
        r: Colour,
        n: usize,
        desk_override: bool,
    ) -> Result<Self, PipelineError> {
        if r == 0 || n == 0 {
            return Err(PipelineError::Ledger("r and n must be positive".into()));
        }
        if eps <= int(0) {
            return Err(PipelineError::Ledger("eps must be positive".into()));
        }
        let rr = int(r as usize);
        let r6 = rr * rr * rr * rr * rr * rr;
        let twenty4 = int(160_000);
        let mut clauses = Vec::new();
        let mut add = |name: &str, lhs: Rational, rhs: Rational, holds: bool, relaxable: bool| {
            clauses.push(LedgerClause {
                name: name.into(),
                lhs: to_f64(&lhs),
                rhs: to_f64(&rhs),
                holds,
                relaxable,
                overridden: !holds && relaxable && desk_override,
            });
        };
        add("nu < 1", nu, int(1), nu < int(1), false);
        add("nu < 1/1000", nu, ratio(1, 1000), nu < ratio(1, 1000), true);
        add("mu < 1/700000", mu, ratio(1, 700_000), mu < ratio(1, 700_000), true);
        add("mu < nu/20", mu, nu / int(20), mu < nu / int(20), false);
        add("d <= mu/r", d, mu / rr, d <= mu / rr, false);
        let abs = int(1) / (int(10_000_000_000_000) * r6);
        add("eps < 1/(10^13 r^6)", eps, abs, eps < abs, true);
        let m4 = mu * mu * mu * mu / twenty4;
        add("eps < mu^4/20^4", eps, m4, eps < m4, true);
        let d2 = d * d / int(4000);
        add("eps < d^2/4000", eps, d2, eps < d2, true);
        add("eps < d", eps, d, eps < d, false);
        let floor = int(4) / eps;
        add("n > 4/eps", int(n), floor, int(n) > floor, true);
        if let Some(c) = clauses.iter().find(|c| !c.holds && !c.overridden) {
            return Err(PipelineError::Ledger(format!(
                "clause {} fails ({} vs {}){}",
                c.name,
                c.lhs,
                c.rhs,
                if c.relaxable {
                    "; the desk override would waive it"
                } else {
                    ""
                }
            )));
        }
        Ok(Self {
            nu,
            mu,
            d,
            eps,
            r,
            n,
            desk_override,
            clauses,
        })
    }

    pub fn overridden(&self) -> Vec<&str> {
        self.clauses
            .iter()
            .filter(|c| c.overridden)
            .map(|c| c.name.as_str())
            .collect()
    }

    /// `(1/mu + 200) r^2`.
    pub fn robust_bound(&self) -> f64 {
        let r = self.r as f64;
        (1.0 / to_f64(&self.mu) + 200.0) * r * r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_always_enforced() {
        let e = ParameterLedger::new(ratio(1, 100), ratio(1, 10), ratio(1, 40), ratio(1, 50), 2, 100, true);
        assert!(matches!(e, Err(PipelineError::Ledger(_))));
    }

    #[test]
    fn desk_override_waives_ceilings_only() {
        let args = (ratio(1, 1200), ratio(1, 25_000), ratio(1, 50_000), ratio(1, 100_000));
        assert!(ParameterLedger::new(args.0, args.1, args.2, args.3, 2, 2000, false).is_err());
        let l = ParameterLedger::new(args.0, args.1, args.2, args.3, 2, 2000, true).unwrap();
        let waived = l.overridden();
        assert!(waived.contains(&"mu < 1/700000"));
        assert!(waived.contains(&"n > 4/eps"));
        assert!(!waived.contains(&"nu < 1/1000"));
        assert!(l.clauses.iter().filter(|c| !c.relaxable).all(|c| c.holds));
    }
}
