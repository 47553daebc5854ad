use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::transformations::exact_total;
use crate::C64;

/// Two angles closer than this are the same atom.
const ANGLE_MERGE_TOL: f64 = 1e-12;

/// Angle of an atom in turns, kept exact when given as a fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Exact(Rational64),
    Real(f64),
}

impl Angle {
    pub fn turns(&self) -> f64 {
        match self {
            Angle::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Angle::Real(x) => *x,
        }
    }

    fn reduced(self) -> Result<Self> {
        match self {
            Angle::Exact(r) => {
                let floor = r.floor();
                Ok(Angle::Exact(r - floor))
            }
            Angle::Real(x) if x.is_finite() => Ok(Angle::Real(x.rem_euclid(1.0))),
            Angle::Real(_) => Err(Error::invalid("angle must be finite")),
        }
    }

    /// Angle of the complex conjugate point.
    pub fn conjugate(&self) -> Self {
        match self {
            Angle::Exact(r) if r.is_zero() => *self,
            Angle::Exact(r) => Angle::Exact(Rational64::one() - r),
            Angle::Real(x) => Angle::Real((1.0 - x).rem_euclid(1.0)),
        }
    }

    /// `n·θ mod 1`, exact for fractional angles.
    pub fn times(&self, n: i64) -> f64 {
        match self {
            Angle::Exact(r) => {
                let (p, q) = (*r.numer() as i128, *r.denom() as i128);
                ((p * n as i128).rem_euclid(q) as f64) / q as f64
            }
            Angle::Real(x) => (x * n as f64).rem_euclid(1.0),
        }
    }

    /// `z^n` for `z = e^{2πiθ}`.
    pub fn power(&self, n: i64) -> C64 {
        C64::from_polar(1.0, std::f64::consts::TAU * self.times(n))
    }

    fn same_point(&self, other: &Angle) -> bool {
        match (self, other) {
            (Angle::Exact(a), Angle::Exact(b)) => a == b,
            _ => {
                let d = (self.turns() - other.turns()).rem_euclid(1.0);
                d.min(1.0 - d) <= ANGLE_MERGE_TOL
            }
        }
    }
}

/// Outcome of a rational-dependence scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceCertificate {
    pub bound: i64,
    /// A relation `Σ c_i θ_i ∈ ℤ` with `max |c_i| ≤ bound`, if one was found.
    pub relation: Option<Vec<i64>>,
}

impl IndependenceCertificate {
    pub fn passed(&self) -> bool {
        self.relation.is_none()
    }
}

/// Finitely many weighted atoms on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicSpectralMeasure {
    angles: Vec<Angle>,
    weights: Vec<Rational64>,
    independence: Option<IndependenceCertificate>,
}

/// Largest number of coefficient vectors the independence scan will try.
pub const INDEPENDENCE_SCAN_LIMIT: u64 = 20_000_000;

impl AtomicSpectralMeasure {
    pub fn new(angles: Vec<Angle>, weights: Vec<Rational64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::invalid("a measure needs at least one atom"));
        }
        if angles.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: angles.len(), found: weights.len() });
        }
        if weights.iter().any(|w| *w <= Rational64::zero()) {
            return Err(Error::invalid("atom weights must be positive"));
        }
        if exact_total(&weights)? != Rational64::one() {
            return Err(Error::invalid("atom weights must sum to 1"));
        }
        let angles = angles.into_iter().map(Angle::reduced).collect::<Result<Vec<_>>>()?;
        Ok(AtomicSpectralMeasure { angles, weights, independence: None })
    }

    /// Equal weights on the given real angles.
    pub fn uniform(angles: &[f64]) -> Result<Self> {
        let k = angles.len() as i64;
        Self::new(angles.iter().map(|&a| Angle::Real(a)).collect(), vec![Rational64::new(1, k.max(1)); angles.len()])
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn weights(&self) -> &[Rational64] {
        &self.weights
    }

    pub fn weight_f64(&self, i: usize) -> f64 {
        self.weights[i].to_f64().unwrap_or(f64::NAN)
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight_f64(i)).collect()
    }

    pub fn points(&self) -> Vec<C64> {
        self.angles.iter().map(|a| a.power(1)).collect()
    }

    pub fn total_mass(&self) -> Result<Rational64> {
        exact_total(&self.weights)
    }

    pub fn independence(&self) -> Option<&IndependenceCertificate> {
        self.independence.as_ref()
    }

    /// Searches integer vectors `c ≠ 0` with `max |c_i| ≤ bound` for
    /// `dist(Σ c_i θ_i, ℤ) ≤ tol` and records the result on the measure.
    pub fn certify_independence(mut self, bound: i64, tol: f64) -> Result<Self> {
        if bound < 1 {
            return Err(Error::invalid("independence bound must be positive"));
        }
        let side = (2 * bound + 1) as u64;
        let count = side.checked_pow(self.len() as u32).filter(|c| *c <= INDEPENDENCE_SCAN_LIMIT);
        if count.is_none() {
            return Err(Error::invalid("independence scan too large for this bound and atom count"));
        }
        let k = self.len();
        let theta: Vec<f64> = self.angles.iter().map(|a| a.turns()).collect();
        let mut c = vec![-bound; k];
        let mut relation = None;
        'scan: loop {
            if c.iter().any(|&x| x != 0) {
                let s: f64 = c.iter().zip(&theta).map(|(ci, t)| *ci as f64 * t).sum();
                let d = (s - s.round()).abs();
                if d <= tol {
                    relation = Some(c.clone());
                    break 'scan;
                }
            }
            let mut i = 0;
            loop {
                if i == k {
                    break 'scan;
                }
                if c[i] < bound {
                    c[i] += 1;
                    break;
                }
                c[i] = -bound;
                i += 1;
            }
        }
        self.independence = Some(IndependenceCertificate { bound, relation });
        Ok(self)
    }

    /// Text form, one atom per line: `theta weight`, fractions as `p/q`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (a, w) in self.angles.iter().zip(&self.weights) {
            match a {
                Angle::Exact(r) => write!(out, "{}/{}", r.numer(), r.denom()),
                Angle::Real(x) => write!(out, "{x:?}"),
            }
            .expect("string write");
            writeln!(out, " {}/{}", w.numer(), w.denom()).expect("string write");
        }
        out
    }

    /// Parses [`AtomicSpectralMeasure::to_text`]. Blank lines and `#`
    /// comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut angles = Vec::new();
        let mut weights = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: lineno + 1, message };
            let mut parts = line.split_whitespace();
            let (Some(t), Some(w), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err("expected `theta weight`".into()));
            };
            let angle = if t.contains('/') {
                Angle::Exact(parse_fraction(t).map_err(parse_err)?)
            } else {
                Angle::Real(t.parse::<f64>().map_err(|e| parse_err(format!("bad angle `{t}`: {e}")))?)
            };
            angles.push(angle);
            weights.push(parse_fraction(w).map_err(parse_err)?);
        }
        Self::new(angles, weights)
    }
}

pub fn parse_fraction(s: &str) -> std::result::Result<Rational64, String> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
    let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
    if q == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational64::new(p, q))
}

/// Conjugation-symmetric measure `ν(A) = ½(μ(A) + μ(Ā))`.
///
/// Existing atoms keep their order; conjugates without a partner are
/// appended.
pub fn symmetrize_measure(measure: &AtomicSpectralMeasure) -> AtomicSpectralMeasure {
    let n = measure.len();
    let half = Rational64::new(1, 2);
    let mut partner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let c = measure.angles[i].conjugate();
        partner[i] = (0..n).find(|&j| measure.angles[j].same_point(&c));
    }
    let mut angles = measure.angles.clone();
    let mut weights = measure.weights.clone();
    for i in 0..n {
        match partner[i] {
            Some(j) => weights[i] = half * (measure.weights[i] + measure.weights[j]),
            None => {
                weights[i] = half * measure.weights[i];
                angles.push(measure.angles[i].conjugate());
                weights.push(half * measure.weights[i]);
            }
        }
    }
    AtomicSpectralMeasure { angles, weights, independence: None }
}
