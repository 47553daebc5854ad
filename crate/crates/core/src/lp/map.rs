use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::{CheckedDiv, CheckedMul, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kronecker::parse_fraction;
use crate::transformations::{check_bijection, exact_total, CycleTable};

/// A bijection of finitely many atoms together with their masses; the map
/// need not preserve them.
#[derive(Debug, Clone, PartialEq)]
pub struct NonsingularMapSpec {
    perm: Vec<usize>,
    masses: Vec<Rational64>,
    /// `ω(i) = m(τ(i)) / m(i)`.
    omega: Vec<Rational64>,
}

impl NonsingularMapSpec {
    pub fn new(perm: Vec<usize>, masses: Vec<Rational64>) -> Result<Self> {
        check_bijection(&perm)?;
        if masses.len() != perm.len() {
            return Err(Error::DimensionMismatch { expected: perm.len(), found: masses.len() });
        }
        if masses.iter().any(|m| *m <= Rational64::zero()) {
            return Err(Error::invalid("atom masses must be positive"));
        }
        if exact_total(&masses)? != Rational64::one() {
            return Err(Error::invalid("atom masses must sum to 1"));
        }
        let omega = perm
            .iter()
            .enumerate()
            .map(|(i, &t)| masses[t].checked_div(&masses[i]).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(NonsingularMapSpec { perm, masses, omega })
    }

    /// Masses proportional to positive integer weights.
    pub fn from_integer_weights(perm: Vec<usize>, weights: &[i64]) -> Result<Self> {
        let total: i64 = weights.iter().try_fold(0i64, |acc, w| acc.checked_add(*w)).ok_or(Error::Overflow)?;
        if total <= 0 {
            return Err(Error::invalid("weights must be positive"));
        }
        Self::new(perm, weights.iter().map(|&w| Rational64::new(w, total)).collect())
    }

    pub fn atom_count(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn masses(&self) -> &[Rational64] {
        &self.masses
    }

    pub fn masses_f64(&self) -> Vec<f64> {
        self.masses.iter().map(|m| m.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn omega(&self) -> &[Rational64] {
        &self.omega
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        CycleTable::new(&self.perm).cycles().to_vec()
    }

    /// `Π ω` over every cycle, each of which must be exactly 1.
    pub fn cycle_products_are_one(&self) -> Result<bool> {
        for cycle in self.cycles() {
            let mut acc = Rational64::one();
            for &i in &cycle {
                acc = acc.checked_mul(&self.omega[i]).ok_or(Error::Overflow)?;
            }
            if acc != Rational64::one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Text form `K; (a b c)(d e); m_0 m_1 …` with fixed points omitted.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}; ", self.atom_count());
        for cycle in self.cycles() {
            if cycle.len() > 1 {
                out.push('(');
                for (k, i) in cycle.iter().enumerate() {
                    if k > 0 {
                        out.push(' ');
                    }
                    write!(out, "{i}").expect("string write");
                }
                out.push(')');
            }
        }
        out.push(';');
        for m in &self.masses {
            write!(out, " {}/{}", m.numer(), m.denom()).expect("string write");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |message: &str| Error::Parse { line: 1, message: message.to_string() };
        let parts: Vec<&str> = text.trim().split(';').collect();
        let [k, cycles, masses] = parts.as_slice() else {
            return Err(err("expected `K; cycles; masses`"));
        };
        let k: usize = k.trim().parse().map_err(|_| err("bad atom count"))?;
        let mut perm: Vec<usize> = (0..k).collect();
        let mut seen = vec![false; k];
        let mut rest = cycles.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| err("cycle must start with `(`"))?;
            let close = body.find(')').ok_or_else(|| err("unclosed cycle"))?;
            let items = body[..close]
                .split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|_| err("bad atom index")))
                .collect::<Result<Vec<_>>>()?;
            for (pos, &i) in items.iter().enumerate() {
                if i >= k || seen[i] {
                    return Err(err("atom repeated or out of range in cycles"));
                }
                seen[i] = true;
                perm[i] = items[(pos + 1) % items.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        let masses = masses
            .split_whitespace()
            .map(|s| parse_fraction(s).map_err(|m| err(&m)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(perm, masses)
    }
}
