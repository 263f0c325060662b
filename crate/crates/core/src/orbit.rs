//! Forward random orbits `φ_n(x, ω) = V_{Θ_n} ∘ … ∘ V_{Θ_1}(x)`.
//!
//! Every trajectory draws its parameters from its own stream
//! `(master_seed, stream_index)`, so aggregate results are a pure function of
//! the inputs no matter how trajectories are scheduled across threads.

use std::fmt::Write as _;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::distribution::{SeedSpec, ThetaDistribution};
use crate::error::{Error, Result};
use crate::simplex::{cubic_image, fixed_point_distance, label_within, FixedPointLabel, SimplexPoint};

/// Upper bound on stored history points per trajectory.
pub const HISTORY_CAPACITY: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitParams {
    pub max_steps: usize,
    /// Radius of the ball a verdict requires the orbit to stay in.
    pub eps_conv: f64,
    /// Consecutive steps inside the ball needed for a verdict.
    pub dwell: usize,
    pub keep_history: bool,
}

impl Default for OrbitParams {
    fn default() -> Self {
        OrbitParams { max_steps: 100_000, eps_conv: 1e-6, dwell: 20, keep_history: false }
    }
}

impl OrbitParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
        }
        if !(self.eps_conv > 0.0 && self.eps_conv <= 0.05) {
            return Err(Error::InvalidArgument(format!("eps_conv {} outside (0, 0.05]", self.eps_conv)));
        }
        if self.dwell == 0 {
            return Err(Error::InvalidArgument("dwell must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryPoint {
    pub step: usize,
    pub state: SimplexPoint,
}

/// Keeps every `stride`-th state, doubling the stride whenever the buffer
/// overflows, so at most [`HISTORY_CAPACITY`] points survive.
struct History {
    stride: usize,
    points: Vec<HistoryPoint>,
}

impl History {
    fn new() -> Self {
        History { stride: 1, points: Vec::with_capacity(HISTORY_CAPACITY + 1) }
    }

    fn push(&mut self, step: usize, x: &[f64; 3]) {
        if !step.is_multiple_of(self.stride) {
            return;
        }
        self.points.push(HistoryPoint { step, state: SimplexPoint::renormalized(*x) });
        if self.points.len() > HISTORY_CAPACITY {
            self.stride *= 2;
            let stride = self.stride;
            self.points.retain(|p| p.step % stride == 0);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub initial: SimplexPoint,
    pub seed: SeedSpec,
    pub steps_taken: usize,
    pub final_state: SimplexPoint,
    pub verdict: FixedPointLabel,
    pub history: Option<Vec<HistoryPoint>>,
}

impl TrajectoryRecord {
    pub const CSV_HEADER: &'static str = "x0_1,x0_2,x0_3,seed,steps,final_1,final_2,final_3,verdict";

    pub fn csv_row(&self) -> String {
        let [a, b, c] = self.initial.coords();
        let [d, e, f] = self.final_state.coords();
        format!("{a},{b},{c},{},{},{d},{e},{f},{}", self.seed, self.steps_taken, self.verdict)
    }
}

/// One orbit step: apply the cubic map and divide by the coordinate sum.
#[inline]
fn step_state(theta: f64, x: &[f64; 3], step: usize) -> Result<[f64; 3]> {
    let y = cubic_image(theta, x);
    let s = y[0] + y[1] + y[2];
    let z = [y[0] / s, y[1] / s, y[2] / s];
    // NaN fails every comparison, so this also catches non-finite states
    if z.iter().all(|v| *v >= 0.0) {
        Ok(z)
    } else {
        Err(Error::SimplexViolation { step, coords: z })
    }
}

/// Runs one trajectory until it dwells near a fixed point or `max_steps`
/// is exhausted.
pub fn iterate(
    dist: &ThetaDistribution,
    x0: &SimplexPoint,
    seed: SeedSpec,
    params: &OrbitParams,
) -> Result<TrajectoryRecord> {
    params.validate()?;
    let mut sampler = dist.sampler(seed);
    let mut x = x0.coords();
    let mut history = params.keep_history.then(History::new);
    if let Some(h) = history.as_mut() {
        h.push(0, &x);
    }
    let mut current = FixedPointLabel::Undecided;
    let mut streak = 0usize;
    let mut verdict = FixedPointLabel::Undecided;
    let mut steps = 0;
    while steps < params.max_steps {
        steps += 1;
        x = step_state(sampler.next_theta(), &x, steps)?;
        if let Some(h) = history.as_mut() {
            h.push(steps, &x);
        }
        let label = label_within(&x, params.eps_conv);
        if label == FixedPointLabel::Undecided {
            streak = 0;
        } else if label == current {
            streak += 1;
        } else {
            streak = 1;
        }
        current = label;
        if streak >= params.dwell {
            verdict = label;
            break;
        }
    }
    Ok(TrajectoryRecord {
        initial: *x0,
        seed,
        steps_taken: steps,
        final_state: SimplexPoint::renormalized(x),
        verdict,
        history: history.map(|h| h.points),
    })
}

/// Verdict counts for repeated trajectories from one initial point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasinEstimate {
    pub initial: SimplexPoint,
    pub trials: usize,
    /// Indexed like [`FixedPointLabel::OUTCOMES`].
    pub counts: [usize; 8],
}

impl BasinEstimate {
    fn from_verdicts(initial: SimplexPoint, verdicts: &[FixedPointLabel]) -> Self {
        let mut counts = [0; 8];
        for v in verdicts {
            counts[outcome_index(*v)] += 1;
        }
        BasinEstimate { initial, trials: verdicts.len(), counts }
    }

    pub fn count(&self, label: FixedPointLabel) -> usize {
        self.counts[outcome_index(label)]
    }

    pub fn probability(&self, label: FixedPointLabel) -> f64 {
        self.count(label) as f64 / self.trials as f64
    }

    /// Labels observed at least `min_count` times.
    pub fn observed(&self, min_count: usize) -> Vec<FixedPointLabel> {
        FixedPointLabel::OUTCOMES.into_iter().filter(|l| self.count(*l) >= min_count.max(1)).collect()
    }

    pub fn csv_header() -> String {
        let mut h = String::from("x1,x2,x3,trials");
        for l in FixedPointLabel::OUTCOMES {
            let _ = write!(h, ",p_{l}");
        }
        h
    }

    pub fn csv_row(&self) -> String {
        let [a, b, c] = self.initial.coords();
        let mut row = format!("{a},{b},{c},{}", self.trials);
        for l in FixedPointLabel::OUTCOMES {
            let _ = write!(row, ",{}", self.probability(l));
        }
        row
    }
}

fn outcome_index(label: FixedPointLabel) -> usize {
    label as usize
}

/// Maps `f` over `0..n` preserving order, in parallel when enabled.
fn ordered_map<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// `trials` independent trajectories from `x0` using streams
/// `first_stream .. first_stream + trials`.
pub fn estimate_basin_from_stream(
    dist: &ThetaDistribution,
    x0: &SimplexPoint,
    trials: usize,
    master_seed: u64,
    first_stream: u64,
    params: &OrbitParams,
) -> Result<BasinEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    params.validate()?;
    let params = OrbitParams { keep_history: false, ..*params };
    let verdicts = ordered_map(trials, |i| {
        iterate(dist, x0, SeedSpec::new(master_seed, first_stream + i as u64), &params).map(|r| r.verdict)
    })?;
    Ok(BasinEstimate::from_verdicts(*x0, &verdicts))
}

pub fn estimate_basin(
    dist: &ThetaDistribution,
    x0: &SimplexPoint,
    trials: usize,
    master_seed: u64,
    params: &OrbitParams,
) -> Result<BasinEstimate> {
    estimate_basin_from_stream(dist, x0, trials, master_seed, 0, params)
}

/// Barycentric lattice strictly inside `G1` with vertices `e1`, `c`, `C`:
/// points `((n-i-j) e1 + i c + j C) / n` for `i, j ≥ 1`, `i + j ≤ n - 1`.
pub fn g1_grid(resolution: usize) -> Result<Vec<SimplexPoint>> {
    if resolution < 3 {
        return Err(Error::InvalidArgument(format!("grid resolution {resolution} must be at least 3")));
    }
    let n = resolution as f64;
    let mut pts = Vec::new();
    for i in 1..resolution {
        for j in 1..(resolution - i) {
            let (wi, wj) = (i as f64 / n, j as f64 / n);
            let we = 1.0 - wi - wj;
            let third = 1.0 / 3.0;
            pts.push(SimplexPoint::from_array([we + 0.5 * wi + third * wj, 0.5 * wi + third * wj, third * wj])?);
        }
    }
    Ok(pts)
}

/// Basin estimates at every point of [`g1_grid`]. Point `p` uses streams
/// `p * trials .. (p + 1) * trials`.
pub fn basin_grid(
    dist: &ThetaDistribution,
    resolution: usize,
    trials: usize,
    master_seed: u64,
    params: &OrbitParams,
) -> Result<Vec<BasinEstimate>> {
    let points = g1_grid(resolution)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    params.validate()?;
    let params = OrbitParams { keep_history: false, ..*params };
    let jobs = points.len() * trials;
    let verdicts = ordered_map(jobs, |k| {
        let p = &points[k / trials];
        iterate(dist, p, SeedSpec::new(master_seed, k as u64), &params).map(|r| r.verdict)
    })?;
    Ok(points.iter().zip(verdicts.chunks(trials)).map(|(p, v)| BasinEstimate::from_verdicts(*p, v)).collect())
}

const G1_BARYCENTER: [f64; 3] = [11.0 / 18.0, 5.0 / 18.0, 2.0 / 18.0];

/// Point at Euclidean distance `distance` from `target`, on the segment
/// towards the barycenter of `G1` (hence inside `int G1`).
pub fn escape_start_point(target: FixedPointLabel, distance: f64) -> Result<SimplexPoint> {
    let p = match target {
        FixedPointLabel::E1 | FixedPointLabel::C12 | FixedPointLabel::Center => target.coords().expect("fixed point"),
        other => return Err(Error::UnsupportedLabel(other)),
    };
    let d = [G1_BARYCENTER[0] - p[0], G1_BARYCENTER[1] - p[1], G1_BARYCENTER[2] - p[2]];
    let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    let s = distance / norm;
    // the small coordinates are formed directly so they keep full precision
    let x = [p[0] + s * d[0], p[1] + s * d[1], p[2] + s * d[2]];
    SimplexPoint::from_array(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EscapeReport {
    pub target: FixedPointLabel,
    pub trials: usize,
    /// First step at which each trajectory left the ball, if it did.
    pub escape_times: Vec<Option<usize>>,
}

impl EscapeReport {
    pub fn escaped(&self) -> usize {
        self.escape_times.iter().flatten().count()
    }

    pub fn fraction(&self) -> f64 {
        self.escaped() as f64 / self.trials as f64
    }

    /// Median over escaping trajectories only.
    pub fn median_escape_time(&self) -> Option<f64> {
        let mut t: Vec<usize> = self.escape_times.iter().flatten().copied().collect();
        if t.is_empty() {
            return None;
        }
        t.sort_unstable();
        let m = t.len() / 2;
        Some(if t.len() % 2 == 1 { t[m] as f64 } else { 0.5 * (t[m - 1] + t[m]) as f64 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeParams {
    pub start_distance: f64,
    pub eps: f64,
    pub trials: usize,
    pub max_steps: usize,
    pub master_seed: u64,
}

/// Fraction of trajectories started `start_distance` from `target` that
/// leave the `eps`-ball around it within `max_steps`.
pub fn escape_experiment(
    dist: &ThetaDistribution,
    target: FixedPointLabel,
    params: &EscapeParams,
) -> Result<EscapeReport> {
    let &EscapeParams { start_distance, eps, trials, max_steps, master_seed } = params;
    if !(start_distance > 0.0 && start_distance < eps && eps <= 0.05) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < start_distance ({start_distance}) < eps ({eps}) <= 0.05"
        )));
    }
    if trials == 0 || max_steps == 0 {
        return Err(Error::InvalidArgument("trials and max_steps must be at least 1".into()));
    }
    let x0 = escape_start_point(target, start_distance)?.coords();
    let idx = target as usize;
    let escape_times = ordered_map(trials, |i| {
        let mut sampler = dist.sampler(SeedSpec::new(master_seed, i as u64));
        let mut x = x0;
        for step in 1..=max_steps {
            x = step_state(sampler.next_theta(), &x, step)?;
            if fixed_point_distance(&x, idx) > eps {
                return Ok(Some(step));
            }
        }
        Ok(None)
    })?;
    Ok(EscapeReport { target, trials, escape_times })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{classify_region, Sector};

    fn pt(a: f64, b: f64, c: f64) -> SimplexPoint {
        SimplexPoint::new(a, b, c).unwrap()
    }

    fn d(s: &str) -> ThetaDistribution {
        s.parse().unwrap()
    }

    #[test]
    fn identity_never_moves() {
        let x0 = pt(0.5, 0.3, 0.2);
        let p = OrbitParams { max_steps: 100, eps_conv: 1e-3, dwell: 10, keep_history: false };
        let r = iterate(&d("dirac:2/3"), &x0, SeedSpec::new(1, 0), &p).unwrap();
        assert_eq!(r.verdict, FixedPointLabel::Undecided);
        assert_eq!(r.steps_taken, 100);
        for (a, b) in r.final_state.coords().iter().zip(x0.coords()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn deterministic_limits() {
        let p = OrbitParams { max_steps: 10_000, eps_conv: 1e-6, dwell: 20, keep_history: false };
        let x0 = pt(0.5, 0.3, 0.2);
        let r = iterate(&d("dirac:0.9"), &x0, SeedSpec::new(1, 0), &p).unwrap();
        assert_eq!(r.verdict, FixedPointLabel::E1);
        assert!(r.final_state.distance_to(FixedPointLabel::E1).unwrap() < 1e-6);
        let r = iterate(&d("dirac:0.4"), &x0, SeedSpec::new(1, 0), &p).unwrap();
        assert_eq!(r.verdict, FixedPointLabel::Center);
        assert!(r.steps_taken <= 10_000);
    }

    #[test]
    fn rejects_bad_params() {
        let x0 = pt(0.5, 0.3, 0.2);
        let dist = d("dirac:0.9");
        for p in [
            OrbitParams { max_steps: 0, ..Default::default() },
            OrbitParams { eps_conv: 0.06, ..Default::default() },
            OrbitParams { eps_conv: 0.0, ..Default::default() },
            OrbitParams { dwell: 0, ..Default::default() },
        ] {
            assert!(iterate(&dist, &x0, SeedSpec::new(0, 0), &p).is_err());
        }
    }

    #[test]
    fn history_is_bounded_and_log_spaced() {
        let p = OrbitParams { max_steps: 5000, eps_conv: 1e-6, dwell: 20, keep_history: true };
        let r = iterate(&d("dirac:2/3"), &pt(0.5, 0.3, 0.2), SeedSpec::new(1, 0), &p).unwrap();
        let h = r.history.unwrap();
        assert!(h.len() <= HISTORY_CAPACITY);
        assert_eq!(h[0].step, 0);
        let stride = h[1].step - h[0].step;
        assert!(stride.is_power_of_two());
        assert!(h.windows(2).all(|w| w[1].step - w[0].step == stride));
        assert!(h.last().unwrap().step + stride > 5000);
    }

    #[test]
    fn dirac_basin_is_certain() {
        let p = OrbitParams { max_steps: 10_000, ..Default::default() };
        let b = estimate_basin(&d("dirac:0.9"), &pt(0.5, 0.3, 0.2), 100, 3, &p).unwrap();
        assert_eq!(b.count(FixedPointLabel::E1), 100);
        assert_eq!(b.probability(FixedPointLabel::E1), 1.0);
        assert_eq!(b.counts.iter().sum::<usize>(), b.trials);
    }

    #[test]
    fn grid_lies_in_interior_of_g1() {
        assert!(g1_grid(2).is_err());
        assert_eq!(g1_grid(3).unwrap().len(), 1);
        let g = g1_grid(7).unwrap();
        assert_eq!(g.len(), 15);
        for p in g {
            assert!(classify_region(&p).is_interior_of(Sector::G1), "{p}");
        }
    }

    #[test]
    fn escape_start_points() {
        for t in [FixedPointLabel::E1, FixedPointLabel::C12, FixedPointLabel::Center] {
            for r in [1e-8, 1e-4, 1e-2] {
                let p = escape_start_point(t, r).unwrap();
                assert!(classify_region(&p).is_interior_of(Sector::G1));
                let dist = p.distance_to(t).unwrap();
                assert!((dist / r - 1.0).abs() < 1e-6, "{t} {r} {dist}");
            }
        }
        assert!(escape_start_point(FixedPointLabel::E2, 1e-3).is_err());
    }

    #[test]
    fn deterministic_repulsion() {
        let p = EscapeParams { start_distance: 1e-3, eps: 1e-2, trials: 100, max_steps: 10_000, master_seed: 9 };
        let r = escape_experiment(&d("dirac:0.4"), FixedPointLabel::E1, &p).unwrap();
        assert_eq!(r.fraction(), 1.0);
        let r = escape_experiment(&d("dirac:0.9"), FixedPointLabel::Center, &p).unwrap();
        assert_eq!(r.fraction(), 1.0);
        assert!(r.median_escape_time().unwrap() > 1.0);
        let bad = EscapeParams { start_distance: 0.02, ..p };
        assert!(escape_experiment(&d("dirac:0.4"), FixedPointLabel::E1, &bad).is_err());
    }

    #[test]
    fn csv_rows() {
        let p = OrbitParams { max_steps: 10, ..Default::default() };
        let r = iterate(&d("dirac:2/3"), &pt(0.5, 0.3, 0.2), SeedSpec::new(7, 2), &p).unwrap();
        assert_eq!(r.csv_row(), "0.5,0.3,0.2,7:2,10,0.5,0.3,0.2,Undecided");
        assert_eq!(TrajectoryRecord::CSV_HEADER.split(',').count(), r.csv_row().split(',').count());
        assert_eq!(BasinEstimate::csv_header().split(',').count(), 12);
    }
}
