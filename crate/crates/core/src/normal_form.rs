//! Local analysis around the center `C = (1/3, 1/3, 1/3)`.
//!
//! In the chart `x = x1 - 1/3`, `y = x2 - 1/3` the operator becomes a planar
//! map `F_θ` with `DF_θ(0) = λ_θ I`, `λ_θ = 1/3 + θ`, and quadratic part
//! `P_θ = (2/3 - θ) Π` for the fixed monomial pattern
//! `Π(x, y) = (-x² + 2xy + 2y², 2x² + 2xy - y²)`. The near-identity change
//! `H_θ = id + U_θ` with `U_θ = -P_θ / (λ_θ - λ_θ²)` removes that quadratic
//! part; applied to a different parameter ν it leaves a quadratic part whose
//! sign controls how radial lines `y = kx` rotate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::simplex::{apply_operator, SimplexPoint, Theta};

const THIRD: f64 = 1.0 / 3.0;

/// All normal-form operations are local: points must satisfy `‖p‖ ≤ 0.1`.
pub const VALIDITY_RADIUS: f64 = 0.1;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_RESIDUAL: f64 = 1e-13;

/// Monomial coefficients of `Π`, rows per component, columns `x², xy, y²`.
pub const QUADRATIC_PATTERN: [[f64; 3]; 2] = [[-1.0, 2.0, 2.0], [2.0, 2.0, -1.0]];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPoint {
    pub x: f64,
    pub y: f64,
}

impl ReducedPoint {
    pub fn new(x: f64, y: f64) -> Self {
        ReducedPoint { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// `(x + 1/3, y + 1/3, 1/3 - x - y)`.
    pub fn lift(&self) -> Result<SimplexPoint> {
        let bound = 2.0 / 3.0 + 1e-12;
        if !(self.x.abs() <= bound && self.y.abs() <= bound) {
            return Err(Error::ChartViolation(self.x, self.y));
        }
        SimplexPoint::new(self.x + THIRD, self.y + THIRD, THIRD - self.x - self.y)
            .map_err(|_| Error::ChartViolation(self.x, self.y))
    }

    pub fn chart(p: &SimplexPoint) -> Self {
        ReducedPoint { x: p.x1() - THIRD, y: p.x2() - THIRD }
    }
}

fn pattern(x: f64, y: f64) -> [f64; 2] {
    [-x * x + 2.0 * x * y + 2.0 * y * y, 2.0 * x * x + 2.0 * x * y - y * y]
}

fn pattern_derivative(x: f64, y: f64) -> [[f64; 2]; 2] {
    [[-2.0 * x + 2.0 * y, 2.0 * x + 4.0 * y], [4.0 * x + 2.0 * y, 2.0 * x - 2.0 * y]]
}

/// `F_θ` in local coordinates. Expanding the two-variable formula obtained
/// by substituting `x3 = 1 - x1 - x2` gives the exact cubic
/// `F_θ(p) = λ_θ p + κ Π(p) + 6κ (x² + xy + y²) p` with `κ = (2 - 3θ)/3`,
/// which is evaluated directly so that small `p` keep full relative
/// precision.
pub fn reduced_map(theta: Theta, p: &ReducedPoint) -> Result<ReducedPoint> {
    p.lift()?;
    let t = theta.value();
    let lambda = THIRD + t;
    let kappa = THIRD * (2.0 - 3.0 * t);
    let q = pattern(p.x, p.y);
    let r = 6.0 * kappa * (p.x * p.x + p.x * p.y + p.y * p.y);
    Ok(ReducedPoint { x: lambda * p.x + kappa * q[0] + r * p.x, y: lambda * p.y + kappa * q[1] + r * p.y })
}

/// A planar map `λ p + (quadratic terms)` truncated at second order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticMapCoefficients {
    pub linear: f64,
    /// Per component, coefficients of `x²`, `xy`, `y²`.
    pub quad: [[f64; 3]; 2],
}

impl QuadraticMapCoefficients {
    fn from_factor(linear: f64, factor: f64) -> Self {
        QuadraticMapCoefficients { linear, quad: QUADRATIC_PATTERN.map(|row| row.map(|c| factor * c)) }
    }

    pub fn eval(&self, p: &ReducedPoint) -> ReducedPoint {
        let m = [p.x * p.x, p.x * p.y, p.y * p.y];
        let q = |row: &[f64; 3]| row[0] * m[0] + row[1] * m[1] + row[2] * m[2];
        ReducedPoint { x: self.linear * p.x + q(&self.quad[0]), y: self.linear * p.y + q(&self.quad[1]) }
    }

    pub fn max_quad_abs(&self) -> f64 {
        self.quad.iter().flatten().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Second-order Taylor polynomial `T_θ` of `F_θ` at the origin.
pub fn taylor_map(theta: Theta) -> QuadraticMapCoefficients {
    let t = theta.value();
    QuadraticMapCoefficients::from_factor(THIRD + t, THIRD * (2.0 - 3.0 * t))
}

fn check_ball(p: &ReducedPoint) -> Result<()> {
    if p.norm() <= VALIDITY_RADIUS {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("({}, {}) outside the validity ball", p.x, p.y)))
    }
}

/// `1 / λ_θ`, the scale of `U_θ`: since `P_θ = (1 - λ_θ) Π`, the quotient
/// `P_θ / (λ_θ - λ_θ²)` equals `Π / λ_θ` whenever it is defined.
fn conjugacy_scale(theta: Theta) -> Result<f64> {
    if theta.is_identity() {
        return Err(Error::SingularConjugacy);
    }
    Ok(1.0 / (THIRD + theta.value()))
}

/// `H_θ(p) = p + U_θ(p)`.
pub fn conjugacy(theta: Theta, p: &ReducedPoint) -> Result<ReducedPoint> {
    check_ball(p)?;
    let s = conjugacy_scale(theta)?;
    let q = pattern(p.x, p.y);
    Ok(ReducedPoint { x: p.x - s * q[0], y: p.y - s * q[1] })
}

/// Solves `H_θ(p) = q` by damped Newton iteration from `p = q`.
pub fn conjugacy_inverse(theta: Theta, q: &ReducedPoint) -> Result<ReducedPoint> {
    check_ball(q)?;
    let s = conjugacy_scale(theta)?;
    let residual = |p: &ReducedPoint| {
        let m = pattern(p.x, p.y);
        [p.x - s * m[0] - q.x, p.y - s * m[1] - q.y]
    };
    let mut p = *q;
    let mut r = residual(&p);
    for _ in 0..NEWTON_MAX_ITER {
        let rn = r[0].hypot(r[1]);
        if rn == 0.0 {
            break;
        }
        let dm = pattern_derivative(p.x, p.y);
        let j = [[1.0 - s * dm[0][0], -s * dm[0][1]], [-s * dm[1][0], 1.0 - s * dm[1][1]]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return Err(Error::InverseNotConverged(rn));
        }
        let delta = [(j[1][1] * r[0] - j[0][1] * r[1]) / det, (j[0][0] * r[1] - j[1][0] * r[0]) / det];
        let mut step = 1.0;
        let mut accepted = false;
        while step > 1e-4 {
            let cand = ReducedPoint { x: p.x - step * delta[0], y: p.y - step * delta[1] };
            let rc = residual(&cand);
            if rc[0].hypot(rc[1]) < rn {
                p = cand;
                r = rc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        // no decrease at any step size: converged to rounding level
        if !accepted {
            break;
        }
    }
    let rn = r[0].hypot(r[1]);
    if rn <= NEWTON_RESIDUAL {
        Ok(p)
    } else {
        Err(Error::InverseNotConverged(rn))
    }
}

/// `Q_ν = H_θ⁻¹ ∘ F_ν ∘ H_θ`, evaluated exactly (no truncation).
pub fn composed_map(theta: Theta, nu: Theta, p: &ReducedPoint) -> Result<ReducedPoint> {
    let h = conjugacy(theta, p)?;
    let f = reduced_map(nu, &h)?;
    conjugacy_inverse(theta, &f)
}

/// Analytic second-order part of `Q_ν`: linear part `1/3 + ν`, quadratic
/// factor `(1/3)(2 - 3ν)(θ - ν)/(1/3 + θ)` times the pattern.
pub fn composed_quadratic(theta: Theta, nu: Theta) -> Result<QuadraticMapCoefficients> {
    conjugacy_scale(theta)?;
    let (t, n) = (theta.value(), nu.value());
    Ok(QuadraticMapCoefficients::from_factor(THIRD + n, THIRD * (2.0 - 3.0 * n) * (t - n) / (THIRD + t)))
}

/// Slope `v/u` of the image `(u, v) = Q_ν(x, kx)`, computed exactly.
pub fn slope_drift(theta: Theta, nu: Theta, k: f64, x: f64) -> Result<f64> {
    if !(-0.5..=1.0).contains(&k) {
        return Err(Error::InvalidArgument(format!("slope {k} outside [-1/2, 1]")));
    }
    if !(x > 0.0 && x <= 1e-2) {
        return Err(Error::InvalidArgument(format!("abscissa {x} outside (0, 1e-2]")));
    }
    let img = composed_map(theta, nu, &ReducedPoint::new(x, k * x))?;
    if img.x == 0.0 {
        return Err(Error::VerticalImage);
    }
    Ok(img.y / img.x)
}

/// First-order prediction
/// `k - x (1/3)(2-3ν)(θ-ν)/((1/3+ν)(1/3+θ)) (k-1)(2k+1)(k+2)`.
pub fn slope_drift_prediction(theta: Theta, nu: Theta, k: f64, x: f64) -> f64 {
    let (t, n) = (theta.value(), nu.value());
    let rate = THIRD * (2.0 - 3.0 * n) * (t - n) / ((THIRD + n) * (THIRD + t));
    k - x * rate * (k - 1.0) * (2.0 * k + 1.0) * (k + 2.0)
}

/// `(u1, u2) = (x1 - x2, 1 - x1 - x2)`, vanishing at `c = (1/2, 1/2, 0)`.
pub fn saddle_coordinates(x: &SimplexPoint) -> (f64, f64) {
    (x.x1() - x.x2(), 1.0 - x.x1() - x.x2())
}

/// Inverse of [`saddle_coordinates`]: `x3 = u2`, `x1,2 = (1 - u2 ± u1)/2`.
pub fn from_saddle_coordinates(u1: f64, u2: f64) -> Result<SimplexPoint> {
    SimplexPoint::new(0.5 * (1.0 - u2 + u1), 0.5 * (1.0 - u2 - u1), u2)
}

/// Closed-form images of `(u1, u2)` under `V_θ`:
/// `u1' = γ1 u1 (1 - u1² - 3u2²) + u1 (u1² + 3u2²)`,
/// `u2' = γ2 u2 (1 - 4u2 + u1² + 3u2²) + u2 (4u2 - u1² - 3u2²)`,
/// with `γ1 = (3/2)θ`, `γ2 = 2 - (3/2)θ`.
pub fn saddle_recursion(theta: Theta, u1: f64, u2: f64) -> (f64, f64) {
    let t = theta.value();
    let (g1, g2) = (1.5 * t, 2.0 - 1.5 * t);
    let a = u1 * u1 + 3.0 * u2 * u2;
    let b = 4.0 * u2 - u1 * u1 - 3.0 * u2 * u2;
    (g1 * u1 * (1.0 - a) + u1 * a, g2 * u2 * (1.0 - b) + u2 * b)
}

/// Correction factors `s_i = u_i(V_θ(x)) / (γ_i u_i(x))`, computed by
/// applying the operator directly.
pub fn saddle_correction_factors(theta: Theta, x: &SimplexPoint) -> (f64, f64) {
    let t = theta.value();
    let (u1, u2) = saddle_coordinates(x);
    let (v1, v2) = saddle_coordinates(&apply_operator(theta, x));
    (v1 / (1.5 * t * u1), v2 / ((2.0 - 1.5 * t) * u2))
}

/// Second-order coefficients of a planar map at the origin extracted by
/// central differences and Richardson extrapolation.
pub fn extract_quadratic<F>(f: F, h: f64) -> Result<QuadraticMapCoefficients>
where
    F: Fn(&ReducedPoint) -> Result<ReducedPoint>,
{
    let g = |x: f64, y: f64| f(&ReducedPoint::new(x, y)).map(|p| [p.x, p.y]);
    let origin = g(0.0, 0.0)?;
    let raw = |h: f64| -> Result<([f64; 2], [[f64; 3]; 2])> {
        let (px, mx) = (g(h, 0.0)?, g(-h, 0.0)?);
        let (py, my) = (g(0.0, h)?, g(0.0, -h)?);
        let (pp, pm, mp, mm) = (g(h, h)?, g(h, -h)?, g(-h, h)?, g(-h, -h)?);
        let h2 = h * h;
        let mut quad = [[0.0; 3]; 2];
        for c in 0..2 {
            quad[c][0] = 0.5 * (px[c] - 2.0 * origin[c] + mx[c]) / h2;
            quad[c][1] = (pp[c] - pm[c] - mp[c] + mm[c]) / (4.0 * h2);
            quad[c][2] = 0.5 * (py[c] - 2.0 * origin[c] + my[c]) / h2;
        }
        // ∂f1/∂x and ∂f2/∂y
        let lin = [(px[0] - mx[0]) / (2.0 * h), (py[1] - my[1]) / (2.0 * h)];
        Ok((lin, quad))
    };
    let (l1, q1) = raw(h)?;
    let (l2, q2) = raw(0.5 * h)?;
    let (l3, q3) = raw(0.25 * h)?;
    // two Richardson levels cancel the h² and h⁴ error terms
    let rich = |a: f64, b: f64, c: f64| {
        let (r1, r2) = ((4.0 * b - a) / 3.0, (4.0 * c - b) / 3.0);
        (16.0 * r2 - r1) / 15.0
    };
    let linear = 0.5 * (rich(l1[0], l2[0], l3[0]) + rich(l1[1], l2[1], l3[1]));
    let mut quad = [[0.0; 3]; 2];
    for c in 0..2 {
        for m in 0..3 {
            quad[c][m] = rich(q1[c][m], q2[c][m], q3[c][m]);
        }
    }
    Ok(QuadraticMapCoefficients { linear, quad })
}

/// Step used for finite-difference extraction at the origin.
pub const FD_STEP: f64 = 2e-3;

/// One line of the normal-form self-check table.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub check: &'static str,
    pub params: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    pub const CSV_HEADER: &'static str = "check,params,value,tolerance,status";

    pub fn csv_row(&self) -> String {
        let status = if self.pass { "pass" } else { "fail" };
        format!("{},{},{:e},{:e},{status}", self.check, self.params, self.value, self.tolerance)
    }
}

fn theta(v: f64) -> Theta {
    Theta::new(v).expect("checked parameter in [0, 1]")
}

/// Least-squares slope of `log |f(r)|` against `log r`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|(r, v)| (r.ln(), v.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Evaluates every normal-form invariant; `seed` drives the random
/// parameter pairs and sample points.
pub fn run_checks(seed: u64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // chart conjugacy on interior samples
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t = theta(rng.random());
        let p = ReducedPoint::new(rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1));
        let via_chart = reduced_map(t, &p)?;
        let direct = ReducedPoint::chart(&apply_operator(t, &p.lift()?));
        worst = worst.max((via_chart.x - direct.x).abs().max((via_chart.y - direct.y).abs()));
    }
    rows.push(CheckRow {
        check: "chart_conjugacy",
        params: "1000 samples".into(),
        value: worst,
        tolerance: 1e-14,
        pass: worst <= 1e-14,
    });

    // Taylor map against finite differences of F
    for t in [0.0, 0.5, 0.9] {
        let fd = extract_quadratic(|p| reduced_map(theta(t), p), FD_STEP)?;
        let an = taylor_map(theta(t));
        let err = coefficient_error(&an, &fd);
        rows.push(CheckRow {
            check: "taylor_map",
            params: format!("theta={t}"),
            value: err,
            tolerance: 1e-6,
            pass: err <= 1e-6,
        });
    }

    // H^{-1} F_θ H has no quadratic part
    for t in [0.0, 0.3, 0.9, 1.0] {
        let fd = extract_quadratic(|p| composed_map(theta(t), theta(t), p), FD_STEP)?;
        let m = fd.max_quad_abs();
        rows.push(CheckRow {
            check: "conjugated_quadratic_vanishes",
            params: format!("theta={t}"),
            value: m,
            tolerance: 1e-6,
            pass: m <= 1e-6,
        });
    }

    // analytic vs numeric Q_ν
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    while pairs < 20 {
        let (t, n) = (theta(rng.random()), theta(rng.random()));
        if t.is_identity() {
            continue;
        }
        let fd = extract_quadratic(|p| composed_map(t, n, p), FD_STEP)?;
        worst = worst.max(coefficient_error(&composed_quadratic(t, n)?, &fd));
        pairs += 1;
    }
    rows.push(CheckRow {
        check: "composed_quadratic",
        params: "20 random pairs".into(),
        value: worst,
        tolerance: 1e-6,
        pass: worst <= 1e-6,
    });

    // monotone slope drift with θ above and ν below 2/3
    let (t, n) = (theta(0.8), theta(0.4));
    let mut min_gain = f64::INFINITY;
    for k in [-0.4, -0.2, 0.0, 0.2, 0.5, 0.8, 0.99] {
        for x in [1e-4, 1e-3] {
            min_gain = min_gain.min(slope_drift(t, n, k, x)? - k);
        }
    }
    rows.push(CheckRow {
        check: "slope_drift_positive",
        params: "theta=0.8 nu=0.4".into(),
        value: min_gain,
        tolerance: 0.0,
        pass: min_gain > 0.0,
    });
    let mut worst: f64 = 0.0;
    for k in [-0.5, 1.0] {
        for x in [1e-4, 1e-3] {
            worst = worst.max((slope_drift(t, n, k, x)? - k).abs());
        }
    }
    rows.push(CheckRow {
        check: "slope_invariant_lines",
        params: "k=-1/2;1".into(),
        value: worst,
        tolerance: 1e-12,
        pass: worst <= 1e-12,
    });

    // u-recursions against the operator
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t = theta(rng.random());
        let x = random_g1_point(&mut rng);
        let (u1, u2) = saddle_coordinates(&x);
        let (r1, r2) = saddle_recursion(t, u1, u2);
        let (d1, d2) = saddle_coordinates(&apply_operator(t, &x));
        worst = worst.max((r1 - d1).abs().max((r2 - d2).abs()));
    }
    rows.push(CheckRow {
        check: "saddle_recursion",
        params: "1000 samples".into(),
        value: worst,
        tolerance: 1e-12,
        pass: worst <= 1e-12,
    });

    // correction factors near c: s1 - 1 is quadratic, s2 - 1 is linear in u2
    let t = theta(0.3);
    let radii = [1e-2, 5e-3, 2e-3, 1e-3];
    let s1: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| (r, saddle_correction_factors(t, &from_saddle_coordinates(r, r).expect("near c")).0 - 1.0))
        .collect();
    let slope = log_log_slope(&s1);
    rows.push(CheckRow {
        check: "s1_quadratic_envelope",
        params: "theta=0.3".into(),
        value: slope,
        tolerance: 1.9,
        pass: slope >= 1.9,
    });
    let s2: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| (r, saddle_correction_factors(t, &from_saddle_coordinates(r, r).expect("near c")).1 - 1.0))
        .collect();
    let slope = log_log_slope(&s2);
    rows.push(CheckRow {
        check: "s2_linear_envelope",
        params: "theta=0.3".into(),
        value: slope,
        tolerance: 0.1,
        pass: (slope - 1.0).abs() <= 0.1,
    });

    Ok(rows)
}

fn coefficient_error(a: &QuadraticMapCoefficients, b: &QuadraticMapCoefficients) -> f64 {
    let mut e = (a.linear - b.linear).abs();
    for c in 0..2 {
        for m in 0..3 {
            e = e.max((a.quad[c][m] - b.quad[c][m]).abs());
        }
    }
    e
}

/// Uniform point of `G1`, by sorting a uniform simplex sample.
fn random_g1_point(rng: &mut ChaCha8Rng) -> SimplexPoint {
    let (a, b): (f64, f64) = (rng.random(), rng.random());
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut x = [lo, hi - lo, 1.0 - hi];
    x.sort_by(|p, q| q.total_cmp(p));
    SimplexPoint::from_array(x).expect("sorted simplex sample")
}
