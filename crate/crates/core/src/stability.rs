//! Linear stability of the common fixed points and the attractor classifier.
//!
//! The Lyapunov exponents at `e1`, `c = (1/2, 1/2, 0)` and the center are
//! `E log` of affine functions of Θ, so signs are decided from exact
//! expectations, never from Monte-Carlo estimates.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;

use crate::distribution::{expect_log, LogIntegrand, SeedSpec, ThetaDistribution};
use crate::error::{Error, Result};
use crate::simplex::{cubic_image, FixedPointLabel, SimplexPoint, Theta};

/// `DV_θ(x)` as a row-major 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianMatrix(pub [[f64; 3]; 3]);

impl JacobianMatrix {
    pub fn apply(&self, v: &[f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// `1ᵀ J`. Since `∑ V_θ(x)_i = (∑ x_i)³`, this is `3·1ᵀ` on Δ²; in
    /// particular the tangent plane `{∑ v_i = 0}` is mapped into itself.
    pub fn column_sums(&self) -> [f64; 3] {
        let m = &self.0;
        [0, 1, 2].map(|j| m[0][j] + m[1][j] + m[2][j])
    }

    /// Matrix of the restriction to the tangent plane in the orthonormal
    /// basis `(1,-1,0)/√2`, `(1,1,-2)/√6`.
    pub fn tangent_restriction(&self) -> [[f64; 2]; 2] {
        let basis = tangent_basis();
        let images = basis.map(|b| self.apply(&b));
        let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        [
            [dot(&basis[0], &images[0]), dot(&basis[0], &images[1])],
            [dot(&basis[1], &images[0]), dot(&basis[1], &images[1])],
        ]
    }

    /// Real eigenvalues of the tangent restriction, ascending; `None` if
    /// they form a complex pair.
    pub fn tangent_eigenvalues(&self) -> Option<[f64; 2]> {
        let m = self.tangent_restriction();
        let half_tr = 0.5 * (m[0][0] + m[1][1]);
        let half_diff = 0.5 * (m[0][0] - m[1][1]);
        // equals tr²/4 - det without the cancellation at double eigenvalues
        let disc = half_diff * half_diff + m[0][1] * m[1][0];
        let scale = 1.0 + half_tr * half_tr;
        if disc < -1e-12 * scale {
            return None;
        }
        let r = disc.max(0.0).sqrt();
        Some([half_tr - r, half_tr + r])
    }
}

fn tangent_basis() -> [[f64; 3]; 2] {
    let s6 = 1.0 / 6f64.sqrt();
    [[FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0], [s6, s6, -2.0 * s6]]
}

/// Analytic derivative of `V_θ`. Component `i` is `x_i W(x_i; x_j, x_k)`
/// with `(i, j, k)` a cyclic shift of `(1, 2, 3)` and
/// `W(a; b, c) = a² + 3θa(b+c) + 3(1-θ)(b²+c²) + 2bc`.
pub fn jacobian(theta: Theta, x: &SimplexPoint) -> JacobianMatrix {
    jacobian_raw(theta.value(), &x.coords())
}

#[inline]
pub(crate) fn jacobian_raw(t: f64, x: &[f64; 3]) -> JacobianMatrix {
    let p = 3.0 * t;
    let q = 3.0 * (1.0 - t);
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let (a, b, c) = (x[i], x[j], x[k]);
        let w = a * a + p * a * (b + c) + q * (b * b + c * c) + 2.0 * b * c;
        m[i][i] = w + a * (2.0 * a + p * (b + c));
        m[i][j] = a * (p * a + 2.0 * q * b + 2.0 * c);
        m[i][k] = a * (p * a + 2.0 * q * c + 2.0 * b);
    }
    JacobianMatrix(m)
}

/// Tangent-space eigenvalues at the vertices of `G1`, ascending.
pub fn vertex_eigenvalues(theta: Theta, vertex: FixedPointLabel) -> Result<[f64; 2]> {
    let t = theta.value();
    let pair = match vertex {
        FixedPointLabel::Center => [1.0 / 3.0 + t; 2],
        FixedPointLabel::E1 => [3.0 * (1.0 - t); 2],
        FixedPointLabel::C12 => [1.5 * t, 2.0 - 1.5 * t],
        other => return Err(Error::UnsupportedLabel(other)),
    };
    Ok(if pair[0] <= pair[1] { pair } else { [pair[1], pair[0]] })
}

/// The four exponents, each possibly `-∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    /// `E log 3(1-Θ)`
    pub e1: f64,
    /// `E log(1/3+Θ)`
    pub center: f64,
    /// `E log (3/2)Θ`, along `(1,-1,0)` at `c`
    pub saddle_in: f64,
    /// `E log(2-(3/2)Θ)`, along `(1,1,-2)` at `c`
    pub saddle_out: f64,
}

pub fn exact_exponents(dist: &ThetaDistribution) -> Exponents {
    Exponents {
        e1: expect_log(dist, LogIntegrand::E1),
        center: expect_log(dist, LogIntegrand::Center),
        saddle_in: expect_log(dist, LogIntegrand::SaddleIn),
        saddle_out: expect_log(dist, LogIntegrand::SaddleOut),
    }
}

/// Membership needs strict negativity; `-∞` counts as negative and an
/// exponent of exactly zero does not.
fn negative(v: f64) -> bool {
    v < 0.0
}

/// The sets `A(x)` for `x` in the interior and on each edge of `G1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegionSets {
    pub int_g1: BTreeSet<FixedPointLabel>,
    /// `M12` minus its endpoints
    pub m12: BTreeSet<FixedPointLabel>,
    /// `M23` minus its endpoints
    pub m23: BTreeSet<FixedPointLabel>,
    /// `Γ12` minus its endpoints
    pub gamma12: BTreeSet<FixedPointLabel>,
}

impl RegionSets {
    pub fn from_exponents(e: &Exponents) -> Self {
        use FixedPointLabel::{Center, C12, E1};
        let pick = |items: &[(FixedPointLabel, bool)]| -> BTreeSet<FixedPointLabel> {
            items.iter().filter(|(_, keep)| *keep).map(|(l, _)| *l).collect()
        };
        let e1 = negative(e.e1);
        let center = negative(e.center);
        let saddle_in = negative(e.saddle_in);
        let saddle_out = negative(e.saddle_out);
        RegionSets {
            int_g1: pick(&[(E1, e1), (C12, saddle_in && saddle_out), (Center, center)]),
            m12: pick(&[(C12, saddle_out), (Center, center)]),
            m23: pick(&[(E1, e1), (Center, center)]),
            gamma12: pick(&[(E1, e1), (C12, saddle_in)]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub exponents: Exponents,
    pub region_sets: RegionSets,
}

pub fn classify_attractors(dist: &ThetaDistribution) -> Result<StabilityReport> {
    if dist.is_identity_law() {
        return Err(Error::ExcludedCase);
    }
    let exponents = exact_exponents(dist);
    Ok(StabilityReport { exponents, region_sets: RegionSets::from_exponents(&exponents) })
}

/// `E1;C12;Center`-style rendering used in CSV output.
pub fn format_set(set: &BTreeSet<FixedPointLabel>) -> String {
    set.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(";")
}

/// Steps between renormalizations of the carried tangent vector. Tangent
/// eigenvalues lie in [0, 3], so 16 steps cannot overflow.
const RENORM_INTERVAL: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentEstimate {
    pub exponent: f64,
    /// Largest distance of the orbit from its starting point.
    pub max_excursion: f64,
    pub final_state: SimplexPoint,
}

/// Growth rate `(1/n) log ‖Dφ_n(x0) v‖` along one random orbit, for a
/// random unit tangent vector `v`.
pub fn empirical_exponent(dist: &ThetaDistribution, x0: &SimplexPoint, seed: SeedSpec, n_steps: usize) -> Result<f64> {
    empirical_exponent_traced(dist, x0, seed, n_steps).map(|e| e.exponent)
}

pub fn empirical_exponent_traced(
    dist: &ThetaDistribution,
    x0: &SimplexPoint,
    seed: SeedSpec,
    n_steps: usize,
) -> Result<ExponentEstimate> {
    if n_steps < 1000 {
        return Err(Error::InvalidArgument(format!("n_steps {n_steps} < 1000")));
    }
    // the tangent direction comes from a sibling generator so the parameter
    // stream matches `iterate` for the same seed
    let angle = 2.0 * PI * SeedSpec::new(!seed.master_seed, seed.stream_index).rng().random::<f64>();
    let [b1, b2] = tangent_basis();
    let (s, c) = angle.sin_cos();
    let mut v = [c * b1[0] + s * b2[0], c * b1[1] + s * b2[1], c * b1[2] + s * b2[2]];

    let start = x0.coords();
    let mut x = start;
    let mut sampler = dist.sampler(seed);
    let mut log_growth = 0.0;
    let mut max_excursion: f64 = 0.0;
    for step in 1..=n_steps {
        let t = sampler.next_theta();
        v = jacobian_raw(t, &x).apply(&v);
        // the off-simplex direction is expanded by 3 each step, so rounding
        // noise there has to be removed immediately
        let mean = (v[0] + v[1] + v[2]) / 3.0;
        v = [v[0] - mean, v[1] - mean, v[2] - mean];
        let y = cubic_image(t, &x);
        let sum = y[0] + y[1] + y[2];
        x = [y[0] / sum, y[1] / sum, y[2] / sum];
        if !x.iter().all(|c| *c >= 0.0) {
            return Err(Error::SimplexViolation { step, coords: x });
        }
        let d = [x[0] - start[0], x[1] - start[1], x[2] - start[2]];
        max_excursion = max_excursion.max((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt());
        if step % RENORM_INTERVAL == 0 || step == n_steps {
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            log_growth += norm.ln();
            if norm == 0.0 {
                break;
            }
            v = [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
    Ok(ExponentEstimate {
        exponent: log_growth / n_steps as f64,
        max_excursion,
        final_state: SimplexPoint::renormalized(x),
    })
}

/// One row of the exponent scan over the two-point family
/// `½δ_{θ-offset} + ½δ_{θ+offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub theta: f64,
    pub exponents: Exponents,
    pub int_g1: BTreeSet<FixedPointLabel>,
}

impl ScanRow {
    pub const CSV_HEADER: &'static str = "theta,exp_e1,exp_center,exp_saddle_in,exp_saddle_out,set_intG1";

    pub fn csv_row(&self) -> String {
        let e = &self.exponents;
        format!("{},{},{},{},{},{}", self.theta, e.e1, e.center, e.saddle_in, e.saddle_out, format_set(&self.int_g1))
    }
}

/// Exponents and interior attractor set on the grid
/// `from, from + step, …, to` of two-point laws.
pub fn two_point_scan(from: f64, to: f64, step: f64, offset: f64) -> Result<Vec<ScanRow>> {
    if !(step > 0.0 && from <= to && offset > 0.0) {
        return Err(Error::InvalidArgument(format!("bad scan range {from}..{to} step {step} offset {offset}")));
    }
    if from - offset < 0.0 || to + offset > 1.0 {
        return Err(Error::InvalidArgument(format!("scan range [{from}, {to}] ± {offset} leaves [0, 1]")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| {
            let theta = from + i as f64 * step;
            let report = classify_attractors(&ThetaDistribution::two_point(theta, offset)?)?;
            Ok(ScanRow { theta, exponents: report.exponents, int_g1: report.region_sets.int_g1 })
        })
        .collect()
}
