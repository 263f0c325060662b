//! The law μ of the random parameter Θ.
//!
//! Laws are finite mixtures of point masses and uniform intervals on [0, 1].
//! That family is closed enough to express every case of interest while
//! keeping `E log g(Θ)` exact for the affine integrands `g` used by the
//! stability analysis.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::simplex::{Theta, TWO_THIRDS};

const WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Component {
    Atom { weight: f64, value: f64 },
    Uniform { weight: f64, a: f64, b: f64 },
}

impl Component {
    pub fn weight(&self) -> f64 {
        match *self {
            Component::Atom { weight, .. } | Component::Uniform { weight, .. } => weight,
        }
    }

    fn with_weight(self, w: f64) -> Component {
        match self {
            Component::Atom { value, .. } => Component::Atom { weight: w, value },
            Component::Uniform { a, b, .. } => Component::Uniform { weight: w, a, b },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaDistribution {
    components: Vec<Component>,
    cumulative: Vec<f64>,
}

impl ThetaDistribution {
    pub fn from_components(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDistribution("no components".into()));
        }
        let mut total = 0.0;
        for c in &components {
            let w = c.weight();
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidDistribution(format!("weight {w} is not positive")));
            }
            total += w;
            match *c {
                Component::Atom { value, .. } => {
                    if !(0.0..=1.0).contains(&value) {
                        return Err(Error::InvalidDistribution(format!("atom {value} outside [0, 1]")));
                    }
                }
                Component::Uniform { a, b, .. } => {
                    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a >= b {
                        return Err(Error::InvalidDistribution(format!(
                            "interval [{a}, {b}] is not a nondegenerate subinterval of [0, 1]"
                        )));
                    }
                }
            }
        }
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        let cumulative = components
            .iter()
            .scan(0.0, |acc, c| {
                *acc += c.weight();
                Some(*acc)
            })
            .collect();
        Ok(ThetaDistribution { components, cumulative })
    }

    pub fn dirac(value: f64) -> Result<Self> {
        Self::from_components(vec![Component::Atom { weight: 1.0, value }])
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::from_components(vec![Component::Uniform { weight: 1.0, a, b }])
    }

    /// Weighted mixture of laws; components are flattened.
    pub fn mixture(parts: &[(f64, ThetaDistribution)]) -> Result<Self> {
        let comps =
            parts.iter().flat_map(|(w, d)| d.components.iter().map(move |c| c.with_weight(w * c.weight()))).collect();
        Self::from_components(comps)
    }

    /// `½δ_{θ-offset} + ½δ_{θ+offset}`.
    pub fn two_point(center: f64, offset: f64) -> Result<Self> {
        Self::from_components(vec![
            Component::Atom { weight: 0.5, value: center - offset },
            Component::Atom { weight: 0.5, value: center + offset },
        ])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// True when all mass sits at θ = 2/3, where every map is the identity.
    pub fn is_identity_law(&self) -> bool {
        self.components
            .iter()
            .all(|c| matches!(*c, Component::Atom { value, .. } if Theta::new(value).is_ok_and(Theta::is_identity)))
    }

    pub fn mean(&self) -> f64 {
        self.components
            .iter()
            .map(|c| match *c {
                Component::Atom { weight, value } => weight * value,
                Component::Uniform { weight, a, b } => weight * 0.5 * (a + b),
            })
            .sum()
    }

    pub fn sampler(&self, seed: SeedSpec) -> ThetaSampler<'_> {
        ThetaSampler { dist: self, rng: seed.rng() }
    }
}

/// Parse errors carry the offending input.
fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::ParseDistribution { input: input.to_string(), reason: reason.into() }
}

fn parse_number(s: &str, whole: &str) -> Result<f64> {
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.parse().map_err(|_| parse_err(whole, format!("bad numerator {n:?}")))?;
            let d: f64 = d.parse().map_err(|_| parse_err(whole, format!("bad denominator {d:?}")))?;
            if d == 0.0 {
                return Err(parse_err(whole, "zero denominator"));
            }
            n / d
        }
        None => s.parse().map_err(|_| parse_err(whole, format!("bad number {s:?}")))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(whole, format!("non-finite number {s:?}")))
    }
}

fn parse_base(s: &str, weight: f64, whole: &str) -> Result<Component> {
    if let Some(v) = s.strip_prefix("dirac:") {
        Ok(Component::Atom { weight, value: parse_number(v, whole)? })
    } else if let Some(r) = s.strip_prefix("uniform:") {
        let (a, b) = r.split_once(',').ok_or_else(|| parse_err(whole, "uniform needs two endpoints a,b"))?;
        Ok(Component::Uniform { weight, a: parse_number(a, whole)?, b: parse_number(b, whole)? })
    } else {
        Err(parse_err(whole, format!("unknown component {s:?}")))
    }
}

/// Splits on `+` except inside exponents such as `1e+3`.
fn split_terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'+' && i > 0 && !matches!(bytes[i - 1], b'e' | b'E') {
            out.push(&s[start..i]);
            start = i + 1;
        }
    }
    out.push(&s[start..]);
    out
}

/// Grammar: `dirac:v`, `uniform:a,b`, or `mix:w*dirac:v+w*uniform:a,b+…`.
/// Numbers are decimal literals or fractions `p/q`; no whitespace.
impl FromStr for ThetaDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.chars().any(char::is_whitespace) {
            return Err(parse_err(s, "whitespace is not allowed"));
        }
        let components = if let Some(rest) = s.strip_prefix("mix:") {
            split_terms(rest)
                .into_iter()
                .map(|term| {
                    let (w, base) = term
                        .split_once('*')
                        .ok_or_else(|| parse_err(s, format!("mixture term {term:?} lacks a weight")))?;
                    parse_base(base, parse_number(w, s)?, s)
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            vec![parse_base(s, 1.0, s)?]
        };
        ThetaDistribution::from_components(components).map_err(|e| parse_err(s, e.to_string()))
    }
}

impl fmt::Display for ThetaDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn base(c: &Component) -> String {
            match *c {
                Component::Atom { value, .. } => format!("dirac:{value}"),
                Component::Uniform { a, b, .. } => format!("uniform:{a},{b}"),
            }
        }
        if let [only] = self.components.as_slice() {
            return f.write_str(&base(only));
        }
        f.write_str("mix:")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{}*{}", c.weight(), base(c))?;
        }
        Ok(())
    }
}

/// Identifies one independent parameter sequence: all streams of a run share
/// the master seed and differ in `stream_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SeedSpec { master_seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.master_seed, self.stream_index)
    }
}

/// Draws i.i.d. parameters from one stream.
pub struct ThetaSampler<'a> {
    dist: &'a ThetaDistribution,
    rng: ChaCha8Rng,
}

impl ThetaSampler<'_> {
    #[inline]
    pub fn next_theta(&mut self) -> f64 {
        let comps = &self.dist.components;
        let c = if comps.len() == 1 {
            &comps[0]
        } else {
            let u: f64 = self.rng.random();
            let i = self.dist.cumulative.iter().position(|&c| u < c).unwrap_or(comps.len() - 1);
            &comps[i]
        };
        match *c {
            Component::Atom { value, .. } => value,
            Component::Uniform { a, b, .. } => a + (b - a) * self.rng.random::<f64>(),
        }
    }
}

impl Iterator for ThetaSampler<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_theta())
    }
}

pub fn sample(dist: &ThetaDistribution, seed: SeedSpec, n: usize) -> Result<Vec<Theta>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    // draws lie in [0, 1] by construction
    Ok(dist.sampler(seed).take(n).map(|v| Theta::new(v).expect("draw in [0, 1]")).collect())
}

/// The four affine functions of θ whose logarithms are the Lyapunov
/// exponents at the vertices of `G1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogIntegrand {
    /// `3(1-θ)`, at `e1`
    E1,
    /// `(3/2)θ`, at the edge midpoint along `(1,-1,0)`
    SaddleIn,
    /// `2-(3/2)θ`, at the edge midpoint along `(1,1,-2)`
    SaddleOut,
    /// `1/3+θ`, at the center
    Center,
}

impl LogIntegrand {
    pub const ALL: [LogIntegrand; 4] =
        [LogIntegrand::E1, LogIntegrand::SaddleIn, LogIntegrand::SaddleOut, LogIntegrand::Center];

    /// The argument `g(θ)` of the logarithm.
    #[inline]
    pub fn eval(self, theta: f64) -> f64 {
        match self {
            LogIntegrand::E1 => 3.0 * (1.0 - theta),
            LogIntegrand::SaddleIn => 1.5 * theta,
            LogIntegrand::SaddleOut => 2.0 - 1.5 * theta,
            LogIntegrand::Center => 1.0 / 3.0 + theta,
        }
    }

    fn slope(self) -> f64 {
        match self {
            LogIntegrand::E1 => -3.0,
            LogIntegrand::SaddleIn => 1.5,
            LogIntegrand::SaddleOut => -1.5,
            LogIntegrand::Center => 1.0,
        }
    }
}

/// `u log u - u`, extended continuously by 0 at u = 0.
fn log_antiderivative(u: f64) -> f64 {
    if u < 1e-300 {
        0.0
    } else {
        u * u.ln() - u
    }
}

/// Mean of `log u` for `u` uniform between `lo` and `hi` (0 ≤ lo < hi).
fn mean_log_uniform(lo: f64, hi: f64) -> f64 {
    let m = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    if h <= 0.1 * m {
        // log m - Σ r^{2k} / (2k(2k+1)); the closed form cancels badly here
        let r2 = (h / m) * (h / m);
        let mut term = 1.0;
        let mut corr = 0.0;
        for k in 1..=12 {
            term *= r2;
            let kk = 2.0 * k as f64;
            corr += term / (kk * (kk + 1.0));
        }
        m.ln() - corr
    } else {
        (log_antiderivative(hi) - log_antiderivative(lo)) / (hi - lo)
    }
}

/// Exact `E log g(Θ)`. Returns `-∞` when an atom sits on a zero of `g`.
pub fn expect_log(dist: &ThetaDistribution, integrand: LogIntegrand) -> f64 {
    dist.components
        .iter()
        .map(|c| match *c {
            Component::Atom { weight, value } => weight * integrand.eval(value).ln(),
            Component::Uniform { weight, a, b } => {
                let (ga, gb) = (integrand.eval(a), integrand.eval(b));
                debug_assert!(integrand.slope() != 0.0);
                weight * mean_log_uniform(ga.min(gb).max(0.0), ga.max(gb))
            }
        })
        .sum()
}

pub fn mean(dist: &ThetaDistribution) -> f64 {
    dist.mean()
}

/// True for the excluded law δ_{2/3}.
pub fn is_excluded(dist: &ThetaDistribution) -> bool {
    dist.is_identity_law()
}

/// Whether some atom or interval reaches strictly below (resp. above) 2/3.
pub fn support_below_two_thirds(dist: &ThetaDistribution) -> bool {
    dist.components.iter().any(|c| match *c {
        Component::Atom { value, .. } => value < TWO_THIRDS,
        Component::Uniform { a, .. } => a < TWO_THIRDS,
    })
}

pub fn support_above_two_thirds(dist: &ThetaDistribution) -> bool {
    dist.components.iter().any(|c| match *c {
        Component::Atom { value, .. } => value > TWO_THIRDS,
        Component::Uniform { b, .. } => b > TWO_THIRDS,
    })
}
