//! Geometry of the 2-simplex and the operator `V_θ`.
//!
//! Points are stored as full probability triples so that the symmetric
//! three-component formula applies verbatim. The reduced two-variable chart
//! lives in [`crate::normal_form`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parameter at which `V_θ` is the identity map.
pub const TWO_THIRDS: f64 = 2.0 / 3.0;

/// Largest violation of the simplex constraints that construction repairs
/// silently (clamp + renormalize). Anything larger is rejected.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// Tolerance used when deciding whether a point lies on a sector boundary.
pub const EDGE_TOLERANCE: f64 = 1e-9;

/// A probability vector `(x1, x2, x3)` on Δ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexPoint([f64; 3]);

impl SimplexPoint {
    pub const CENTER: SimplexPoint = SimplexPoint([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);

    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        Self::from_array([x1, x2, x3])
    }

    /// Validates and repairs a candidate point. Coordinates may be negative
    /// by at most [`SIMPLEX_TOLERANCE`] and the sum may be off by the same
    /// amount; such points are clamped at zero and rescaled.
    pub fn from_array(x: [f64; 3]) -> Result<Self> {
        if x.iter().any(|c| !c.is_finite() || *c < -SIMPLEX_TOLERANCE) {
            return Err(Error::NotOnSimplex(x));
        }
        let sum: f64 = x.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::NotOnSimplex(x));
        }
        Ok(Self::renormalized(x))
    }

    /// Clamps at zero and divides by the coordinate sum. The caller
    /// guarantees the input is a small perturbation of a simplex point.
    pub(crate) fn renormalized(x: [f64; 3]) -> Self {
        let c = [x[0].max(0.0), x[1].max(0.0), x[2].max(0.0)];
        let s = c[0] + c[1] + c[2];
        SimplexPoint([c[0] / s, c[1] / s, c[2] / s])
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn x1(&self) -> f64 {
        self.0[0]
    }

    pub fn x2(&self) -> f64 {
        self.0[1]
    }

    pub fn x3(&self) -> f64 {
        self.0[2]
    }

    pub fn distance(&self, other: &SimplexPoint) -> f64 {
        euclid(&self.0, &other.0)
    }

    /// Distance to the fixed point carrying `label`; `None` for `Undecided`.
    pub fn distance_to(&self, label: FixedPointLabel) -> Option<f64> {
        label.index().map(|i| fixed_point_distance(&self.0, i))
    }
}

// coordinates are always finite, so equality is reflexive
impl Eq for SimplexPoint {}

impl fmt::Display for SimplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

fn euclid(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// The parameter θ ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Theta(f64);

impl Theta {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Theta(value))
        } else {
            Err(Error::ThetaOutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// θ = 2/3 exactly (to within one rounding of the literal).
    pub fn is_identity(self) -> bool {
        (self.0 - TWO_THIRDS).abs() <= f64::EPSILON
    }
}

impl From<Theta> for f64 {
    fn from(t: Theta) -> f64 {
        t.0
    }
}

/// Raw cubic image of `x` under `V_θ`, without renormalization.
#[inline]
pub fn cubic_image(theta: f64, x: &[f64; 3]) -> [f64; 3] {
    let [x1, x2, x3] = *x;
    let a = 3.0 * theta;
    let b = 3.0 * (1.0 - theta);
    [
        x1 * (x1 * x1 + a * x1 * (x2 + x3) + b * (x2 * x2 + x3 * x3) + 2.0 * x2 * x3),
        x2 * (x2 * x2 + a * x2 * (x3 + x1) + b * (x3 * x3 + x1 * x1) + 2.0 * x3 * x1),
        x3 * (x3 * x3 + a * x3 * (x1 + x2) + b * (x1 * x1 + x2 * x2) + 2.0 * x1 * x2),
    ]
}

/// `V_θ(x)` from the closed three-component formula, renormalized onto Δ².
pub fn apply_operator(theta: Theta, x: &SimplexPoint) -> SimplexPoint {
    SimplexPoint::renormalized(cubic_image(theta.0, &x.0))
}

/// The coefficients of heredity `p[i][j][k][l]` of a cubic stochastic
/// operator on three types (zero-based indices).
#[derive(Debug, Clone, PartialEq)]
pub struct HeredityTensor {
    p: [[[[f64; 3]; 3]; 3]; 3],
}

const TENSOR_TOLERANCE: f64 = 1e-12;

impl HeredityTensor {
    /// Checks unit row sums, the Volterra zero pattern and symmetry in the
    /// three parent indices.
    #[allow(clippy::needless_range_loop)]
    pub fn new(p: [[[[f64; 3]; 3]; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let row = &p[i][j][k];
                    if row.iter().any(|v| !(0.0..=1.0).contains(v)) {
                        return Err(Error::InvalidTensor(format!("entry outside [0, 1] at ({i}, {j}, {k})")));
                    }
                    let sum: f64 = row.iter().sum();
                    if (sum - 1.0).abs() > TENSOR_TOLERANCE {
                        return Err(Error::InvalidTensor(format!("row ({i}, {j}, {k}) sums to {sum}")));
                    }
                    for (l, v) in row.iter().enumerate() {
                        if *v != 0.0 && l != i && l != j && l != k {
                            return Err(Error::InvalidTensor(format!("type {l} produced by parents ({i}, {j}, {k})")));
                        }
                    }
                    for q in [&p[i][k][j], &p[j][i][k], &p[j][k][i], &p[k][i][j], &p[k][j][i]] {
                        if q.iter().zip(row).any(|(a, b)| (a - b).abs() > TENSOR_TOLERANCE) {
                            return Err(Error::InvalidTensor(format!("not symmetric at ({i}, {j}, {k})")));
                        }
                    }
                }
            }
        }
        Ok(HeredityTensor { p })
    }

    /// Entry `p_{ijk,l}` with zero-based indices.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.p[i][j][k][l]
    }
}

fn kronecker(a: usize, b: usize) -> u8 {
    u8::from(a == b)
}

/// The tensor whose operator is `V_θ`.
pub fn build_tensor(theta: Theta) -> HeredityTensor {
    let t = theta.0;
    let mut p = [[[[0.0; 3]; 3]; 3]; 3];
    for (i, pi) in p.iter_mut().enumerate() {
        for (j, pij) in pi.iter_mut().enumerate() {
            for (k, row) in pij.iter_mut().enumerate() {
                let pairs = kronecker(i, j) + kronecker(i, k) + kronecker(j, k);
                for (l, entry) in row.iter_mut().enumerate() {
                    let hits = kronecker(i, l) + kronecker(j, l) + kronecker(k, l);
                    *entry = match (hits, pairs) {
                        (3, _) => 1.0,
                        (2, 1) => t,
                        (1, 1) => 1.0 - t,
                        (1, 0) => 1.0 / 3.0,
                        _ => 0.0,
                    };
                }
            }
        }
    }
    HeredityTensor { p }
}

/// The 27-term sums `∑ p_{ijk,l} x_i x_j x_k`, unnormalized.
pub fn tensor_image(p: &HeredityTensor, x: &SimplexPoint) -> [f64; 3] {
    let x = x.0;
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let m = x[i] * x[j] * x[k];
                for (l, o) in out.iter_mut().enumerate() {
                    *o += p.p[i][j][k][l] * m;
                }
            }
        }
    }
    out
}

/// The operator of a heredity tensor applied to `x`.
pub fn tensor_apply(p: &HeredityTensor, x: &SimplexPoint) -> Result<SimplexPoint> {
    SimplexPoint::from_array(tensor_image(p, x))
}

/// A permutation of the three coordinates: `apply(x)[i] = x[map[i]]`
/// (zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation([usize; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2]);

    pub fn new(map: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &m in &map {
            if m > 2 || seen[m] {
                return Err(Error::InvalidPermutation(map));
            }
            seen[m] = true;
        }
        Ok(Permutation(map))
    }

    /// `(x1, x2, x3) ↦ (x2, x3, x1)`.
    pub fn cycle() -> Self {
        Permutation([1, 2, 0])
    }

    pub fn all() -> [Permutation; 6] {
        [
            Permutation([0, 1, 2]),
            Permutation([0, 2, 1]),
            Permutation([1, 0, 2]),
            Permutation([1, 2, 0]),
            Permutation([2, 0, 1]),
            Permutation([2, 1, 0]),
        ]
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0; 3];
        for (i, &m) in self.0.iter().enumerate() {
            inv[m] = i;
        }
        Permutation(inv)
    }

    pub fn apply_array(self, x: &[f64; 3]) -> [f64; 3] {
        [x[self.0[0]], x[self.0[1]], x[self.0[2]]]
    }

    pub fn apply(self, x: &SimplexPoint) -> SimplexPoint {
        SimplexPoint(self.apply_array(&x.0))
    }
}

pub fn permute(x: &SimplexPoint, sigma: Permutation) -> SimplexPoint {
    sigma.apply(x)
}

/// Maps `x` into `G1` by sorting coordinates in decreasing order. Returns
/// the image and the permutation used.
pub fn to_g1(x: &SimplexPoint) -> (SimplexPoint, Permutation) {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| x.0[b].total_cmp(&x.0[a]));
    let sigma = Permutation(idx);
    (sigma.apply(x), sigma)
}

/// The six invariant sectors. `G1 = {x1 ≥ x2 ≥ x3}`; the others follow
/// counter-clockwise around the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sector {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
}

impl Sector {
    pub const ALL: [Sector; 6] = [Sector::G1, Sector::G2, Sector::G3, Sector::G4, Sector::G5, Sector::G6];

    /// Coordinate indices in decreasing order of size on this sector.
    pub fn ordering(self) -> [usize; 3] {
        match self {
            Sector::G1 => [0, 1, 2],
            Sector::G2 => [0, 2, 1],
            Sector::G3 => [2, 0, 1],
            Sector::G4 => [2, 1, 0],
            Sector::G5 => [1, 2, 0],
            Sector::G6 => [1, 0, 2],
        }
    }

    fn contains(self, x: &[f64; 3], tol: f64) -> bool {
        let [a, b, c] = self.ordering();
        x[a] >= x[b] - tol && x[b] >= x[c] - tol
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", *self as usize + 1)
    }
}

/// Which sectors contain a point, plus the boundary pieces of `G1` it lies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionLabel {
    pub sectors: Vec<Sector>,
    /// Inside exactly one sector and off the boundary of Δ².
    pub interior: bool,
    /// `x1 = x2 ≥ x3`
    pub m12: bool,
    /// `x1 ≥ x2 = x3`
    pub m23: bool,
    /// `x3 = 0, x1 ≥ x2`
    pub gamma12: bool,
    /// Set when the point is one of the seven fixed points.
    pub vertex: Option<FixedPointLabel>,
}

impl RegionLabel {
    pub fn in_sector(&self, s: Sector) -> bool {
        self.sectors.contains(&s)
    }

    pub fn is_interior_of(&self, s: Sector) -> bool {
        self.interior && self.in_sector(s)
    }
}

pub fn classify_region(x: &SimplexPoint) -> RegionLabel {
    let c = &x.0;
    let tol = EDGE_TOLERANCE;
    let sectors: Vec<Sector> = Sector::ALL.into_iter().filter(|s| s.contains(c, tol)).collect();
    let interior = sectors.len() == 1 && c.iter().all(|v| *v > tol);
    let m12 = (c[0] - c[1]).abs() <= tol && c[1] >= c[2] - tol;
    let m23 = (c[1] - c[2]).abs() <= tol && c[0] >= c[1] - tol;
    let gamma12 = c[2] <= tol && c[0] >= c[1] - tol;
    let vertex = FixedPointLabel::ALL
        .into_iter()
        .find(|l| l.coords().is_some_and(|p| p.iter().zip(c).all(|(a, b)| (a - b).abs() <= tol)));
    RegionLabel { sectors, interior, m12, m23, gamma12, vertex }
}

/// The seven points fixed by every `V_θ`, plus an explicit undecided outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FixedPointLabel {
    E1,
    E2,
    E3,
    C12,
    C13,
    C23,
    Center,
    Undecided,
}

const FIXED_POINTS: [[f64; 3]; 7] = [
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
    [0.5, 0.5, 0.0],
    [0.5, 0.0, 0.5],
    [0.0, 0.5, 0.5],
    [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
];

impl FixedPointLabel {
    /// The seven fixed points (excludes `Undecided`).
    pub const ALL: [FixedPointLabel; 7] = [
        FixedPointLabel::E1,
        FixedPointLabel::E2,
        FixedPointLabel::E3,
        FixedPointLabel::C12,
        FixedPointLabel::C13,
        FixedPointLabel::C23,
        FixedPointLabel::Center,
    ];

    /// All eight outcomes, in CSV column order.
    pub const OUTCOMES: [FixedPointLabel; 8] = [
        FixedPointLabel::E1,
        FixedPointLabel::E2,
        FixedPointLabel::E3,
        FixedPointLabel::C12,
        FixedPointLabel::C13,
        FixedPointLabel::C23,
        FixedPointLabel::Center,
        FixedPointLabel::Undecided,
    ];

    pub(crate) fn index(self) -> Option<usize> {
        match self {
            FixedPointLabel::Undecided => None,
            l => Some(l as usize),
        }
    }

    pub fn coords(self) -> Option<[f64; 3]> {
        self.index().map(|i| FIXED_POINTS[i])
    }

    pub fn point(self) -> Option<SimplexPoint> {
        self.coords().map(SimplexPoint)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FixedPointLabel::E1 => "E1",
            FixedPointLabel::E2 => "E2",
            FixedPointLabel::E3 => "E3",
            FixedPointLabel::C12 => "C12",
            FixedPointLabel::C13 => "C13",
            FixedPointLabel::C23 => "C23",
            FixedPointLabel::Center => "Center",
            FixedPointLabel::Undecided => "Undecided",
        }
    }

    /// Label of the image of this fixed point under a coordinate permutation.
    pub fn permuted(self, sigma: Permutation) -> FixedPointLabel {
        match self.coords() {
            None => FixedPointLabel::Undecided,
            Some(p) => {
                let q = sigma.apply_array(&p);
                let i = FIXED_POINTS.iter().position(|f| *f == q).expect("fixed set is S3-invariant");
                FixedPointLabel::ALL[i]
            }
        }
    }
}

impl fmt::Display for FixedPointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixedPointLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixedPointLabel::OUTCOMES
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown fixed point label {s:?}")))
    }
}

/// Distance from `x` to fixed point `i`. Vertex distances are computed from
/// the small coordinates so they stay accurate far below machine epsilon.
#[inline]
pub(crate) fn fixed_point_distance(x: &[f64; 3], i: usize) -> f64 {
    match i {
        0..=2 => {
            let (a, b) = match i {
                0 => (x[1], x[2]),
                1 => (x[0], x[2]),
                _ => (x[0], x[1]),
            };
            let s = a + b;
            (s * s + a * a + b * b).sqrt()
        }
        _ => euclid(x, &FIXED_POINTS[i]),
    }
}

/// Upper bound on the labelling radius: half the smallest pairwise distance
/// in the fixed set is about 0.204.
pub const MAX_LABEL_RADIUS: f64 = 0.1;

/// The unique fixed point within `eps` of `x`, or `Undecided`.
pub fn nearest_fixed_point(x: &SimplexPoint, eps: f64) -> Result<FixedPointLabel> {
    if !(eps > 0.0 && eps < MAX_LABEL_RADIUS) {
        return Err(Error::InvalidArgument(format!("labelling radius {eps} must lie in (0, {MAX_LABEL_RADIUS})")));
    }
    Ok(label_within(&x.0, eps))
}

#[inline]
pub(crate) fn label_within(x: &[f64; 3], eps: f64) -> FixedPointLabel {
    (0..7).find(|&i| fixed_point_distance(x, i) < eps).map_or(FixedPointLabel::Undecided, |i| FixedPointLabel::ALL[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: f64, b: f64, c: f64) -> SimplexPoint {
        SimplexPoint::new(a, b, c).unwrap()
    }

    fn th(v: f64) -> Theta {
        Theta::new(v).unwrap()
    }

    #[test]
    fn construction_repairs_small_violations_only() {
        let p = SimplexPoint::new(0.5, 0.5 + 5e-10, -1e-10).unwrap();
        assert_eq!(p.x3(), 0.0);
        assert!((p.coords().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(SimplexPoint::new(0.5, 0.6, -0.1).is_err());
        assert!(SimplexPoint::new(0.5, 0.5, 0.1).is_err());
        assert!(SimplexPoint::new(f64::NAN, 0.5, 0.5).is_err());
    }

    #[test]
    fn theta_range() {
        assert!(Theta::new(-0.01).is_err());
        assert!(Theta::new(1.01).is_err());
        assert!(Theta::new(TWO_THIRDS).unwrap().is_identity());
    }

    #[test]
    fn identity_at_two_thirds() {
        let x = pt(0.2, 0.3, 0.5);
        let y = apply_operator(th(TWO_THIRDS), &x);
        for (a, b) in x.coords().iter().zip(y.coords()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn vertex_is_fixed() {
        assert_eq!(apply_operator(th(0.1), &pt(1.0, 0.0, 0.0)), pt(1.0, 0.0, 0.0));
    }

    #[test]
    fn tensor_entries_by_case() {
        for t in [0.0, 0.4, 0.9] {
            let p = build_tensor(th(t));
            assert_eq!(p.get(0, 0, 0, 0), 1.0);
            assert_eq!(p.get(0, 1, 2, 1), 1.0 / 3.0);
            assert_eq!(p.get(0, 0, 1, 0), t);
            assert_eq!(p.get(0, 0, 1, 1), 1.0 - t);
            assert_eq!(p.get(0, 0, 1, 2), 0.0);
        }
        assert_eq!(build_tensor(th(0.4)).get(0, 0, 1, 0), 0.4);
        // the built tensor satisfies its own invariants
        assert!(HeredityTensor::new(build_tensor(th(0.3)).p).is_ok());
    }

    #[test]
    fn tensor_validation_rejects_bad_tensors() {
        let mut p = build_tensor(th(0.3)).p;
        p[0][0][0] = [0.5, 0.5, 0.0];
        assert!(matches!(HeredityTensor::new(p), Err(Error::InvalidTensor(_))));

        let mut p = build_tensor(th(0.3)).p;
        p[0][0][1] = [0.3, 0.6, 0.1];
        assert!(HeredityTensor::new(p).is_err());

        let mut p = build_tensor(th(0.3)).p;
        p[0][0][1] = [0.5, 0.5, 0.0];
        assert!(HeredityTensor::new(p).is_err(), "asymmetry must be caught");
    }

    #[test]
    fn tensor_at_vertex() {
        let p = build_tensor(th(0.77));
        assert_eq!(tensor_apply(&p, &pt(1.0, 0.0, 0.0)).unwrap(), pt(1.0, 0.0, 0.0));
    }

    #[test]
    fn tensor_matches_closed_form() {
        let x = pt(0.5, 0.3, 0.2);
        let a = apply_operator(th(0.9), &x).coords();
        let b = tensor_apply(&build_tensor(th(0.9)), &x).unwrap().coords();
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn permutations() {
        assert_eq!(permute(&pt(0.5, 0.3, 0.2), Permutation::cycle()), pt(0.3, 0.2, 0.5));
        for s in Permutation::all() {
            assert_eq!(permute(&SimplexPoint::CENTER, s), SimplexPoint::CENTER);
            assert_eq!(s.inverse().apply(&s.apply(&pt(0.6, 0.3, 0.1))), pt(0.6, 0.3, 0.1));
        }
        assert!(Permutation::new([0, 0, 1]).is_err());
        assert!(Permutation::new([0, 1, 3]).is_err());
        assert_eq!(FixedPointLabel::E1.permuted(Permutation::cycle()), FixedPointLabel::E3);
        assert_eq!(FixedPointLabel::C12.permuted(Permutation::cycle()), FixedPointLabel::C13);
        assert_eq!(FixedPointLabel::Center.permuted(Permutation::cycle()), FixedPointLabel::Center);
    }

    #[test]
    fn sorting_into_g1() {
        let (y, s) = to_g1(&pt(0.2, 0.5, 0.3));
        assert_eq!(y, pt(0.5, 0.3, 0.2));
        assert_eq!(s.apply(&pt(0.2, 0.5, 0.3)), y);
    }

    #[test]
    fn region_labels() {
        let r = classify_region(&pt(0.5, 0.3, 0.2));
        assert_eq!(r.sectors, vec![Sector::G1]);
        assert!(r.interior && !r.m12 && !r.m23 && !r.gamma12 && r.vertex.is_none());

        let r = classify_region(&pt(0.4, 0.4, 0.2));
        assert!(r.m12 && r.in_sector(Sector::G1) && r.in_sector(Sector::G6) && !r.interior);

        let r = classify_region(&pt(0.6, 0.2, 0.2));
        assert!(r.m23 && r.in_sector(Sector::G1) && r.in_sector(Sector::G2));

        let r = classify_region(&pt(0.7, 0.3, 0.0));
        assert!(r.gamma12 && r.sectors == vec![Sector::G1] && !r.interior);

        let r = classify_region(&SimplexPoint::CENTER);
        assert_eq!(r.sectors.len(), 6);
        assert_eq!(r.vertex, Some(FixedPointLabel::Center));

        // each sector in turn
        let probes = [
            (pt(0.5, 0.3, 0.2), Sector::G1),
            (pt(0.5, 0.2, 0.3), Sector::G2),
            (pt(0.3, 0.2, 0.5), Sector::G3),
            (pt(0.2, 0.3, 0.5), Sector::G4),
            (pt(0.2, 0.5, 0.3), Sector::G5),
            (pt(0.3, 0.5, 0.2), Sector::G6),
        ];
        for (p, s) in probes {
            assert_eq!(classify_region(&p).sectors, vec![s]);
        }
    }

    #[test]
    fn nearest_labels() {
        assert_eq!(nearest_fixed_point(&pt(0.999, 0.0005, 0.0005), 0.01).unwrap(), FixedPointLabel::E1);
        assert_eq!(nearest_fixed_point(&pt(0.5, 0.3, 0.2), 0.01).unwrap(), FixedPointLabel::Undecided);
        let c = pt(1.0 / 3.0 + 1e-4, 1.0 / 3.0, 1.0 / 3.0 - 1e-4);
        assert_eq!(nearest_fixed_point(&c, 0.01).unwrap(), FixedPointLabel::Center);
        assert!(nearest_fixed_point(&c, 0.1).is_err());
        assert!(nearest_fixed_point(&c, 0.0).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn fixed_set_is_well_separated() {
        let mut min = f64::INFINITY;
        for i in 0..7 {
            for j in 0..i {
                min = min.min(euclid(&FIXED_POINTS[i], &FIXED_POINTS[j]));
            }
        }
        assert!(min > 2.0 * MAX_LABEL_RADIUS);
    }

    #[test]
    fn vertex_distance_is_accurate_near_vertex() {
        // 1 - x1 rounds to zero, so the naive formula loses the first component
        let x = [1.0, 1e-150, 2e-150];
        assert!((euclid(&x, &FIXED_POINTS[0]) / 1e-150 - 5f64.sqrt()).abs() < 1e-12);
        assert!((fixed_point_distance(&x, 0) / 1e-150 - 14f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn label_round_trip() {
        for l in FixedPointLabel::OUTCOMES {
            assert_eq!(l.as_str().parse::<FixedPointLabel>().unwrap(), l);
        }
        assert_eq!("center".parse::<FixedPointLabel>().unwrap(), FixedPointLabel::Center);
    }
}
