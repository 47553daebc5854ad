use crate::error::{Error, Result};

/// Continued-fraction convergent denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfDenominators {
    /// Strictly increasing `q_k`; the duplicate `q_0 = q_1 = 1` appears once.
    pub denominators: Vec<u64>,
    pub partial_quotients: Vec<u64>,
    /// The expansion ended before `count` denominators were produced.
    pub terminated: bool,
}

/// Remainders below this are treated as an exact end of the expansion.
const TERMINATION_EPS: f64 = 1e-9;

/// Denominators of the convergents of `alpha ∈ (0, 1)`, at most `count` of
/// them. Rational inputs end with `terminated = true`.
pub fn cf_denominators(alpha: f64, count: usize) -> Result<CfDenominators> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("continued fraction input must lie in (0, 1)"));
    }
    let mut out = CfDenominators { denominators: vec![1], partial_quotients: Vec::new(), terminated: false };
    let (mut q_prev, mut q) = (0u64, 1u64);
    let mut x = alpha;
    while out.denominators.len() < count {
        if x < TERMINATION_EPS {
            out.terminated = true;
            break;
        }
        let inv = 1.0 / x;
        let mut a = inv.floor();
        let mut frac = inv - a;
        if 1.0 - frac < TERMINATION_EPS {
            a += 1.0;
            frac = 0.0;
        }
        let a = a as u64;
        out.partial_quotients.push(a);
        let next = a
            .checked_mul(q)
            .and_then(|v| v.checked_add(q_prev))
            .ok_or(Error::Overflow)?;
        q_prev = q;
        q = next;
        if next > *out.denominators.last().expect("nonempty") {
            out.denominators.push(next);
        }
        x = frac;
    }
    if !out.terminated && x < TERMINATION_EPS {
        out.terminated = true;
    }
    out.denominators.truncate(count);
    Ok(out)
}

/// Exact version for `num/den` in lowest or non-lowest terms.
pub fn cf_denominators_rational(num: u64, den: u64) -> Result<CfDenominators> {
    if num == 0 || num >= den {
        return Err(Error::invalid("rational input must lie in (0, 1)"));
    }
    let mut out = CfDenominators { denominators: vec![1], partial_quotients: Vec::new(), terminated: true };
    let (mut q_prev, mut q) = (0u64, 1u64);
    let (mut a_num, mut a_den) = (den, num);
    while a_den != 0 {
        let a = a_num / a_den;
        out.partial_quotients.push(a);
        let next = a * q + q_prev;
        q_prev = q;
        q = next;
        if next > *out.denominators.last().expect("nonempty") {
            out.denominators.push(next);
        }
        let r = a_num % a_den;
        a_num = a_den;
        a_den = r;
    }
    Ok(out)
}
