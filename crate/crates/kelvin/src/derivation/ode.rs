//! Angular ODE solves on (0, pi) with regularity enforced at both poles.
//!
//! Each stress profile tau(theta) of the rho^-2 ansatz satisfies a linear
//! second-order ODE whose coefficients are singular at theta = 0 and
//! theta = pi. The bounded solution branch is selected by starting the
//! integration at theta = EPS with the indicial series of that branch and
//! shooting each half toward the midline theta = pi/2, where the two
//! halves are matched. The log- or pole-divergent branch is screened out
//! by [`pole_boundedness`].
//!
//! Inhomogeneous solves return the particular solution anchored at the
//! midline (zero value and slope at pi/2 in the component where the
//! bounded homogeneous solution is nonzero), which is the same member the
//! variation-of-parameters construction produces, plus the bounded
//! homogeneous solution as the free-constant basis.

use crate::error::{KelvinError, Result};
use crate::numerics::{integrate_rk4, StepControl};
use std::f64::consts::{FRAC_PI_2, PI};

/// Distance from the poles at which the indicial series start is placed.
pub const POLE_OFFSET: f64 = 1e-6;

/// A sampled angular profile tau(theta) on (0, pi), with slopes stored for
/// cubic Hermite interpolation between nodes.
#[derive(Debug, Clone)]
pub struct AngularProfile {
    theta: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    /// Even under the signed-angle reflection theta -> -theta (all
    /// profiles of the reduced representation are).
    pub parity_even: bool,
}

impl AngularProfile {
    fn from_nodes(mut nodes: Vec<(f64, f64, f64)>) -> Self {
        nodes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        nodes.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14);
        Self {
            theta: nodes.iter().map(|n| n.0).collect(),
            values: nodes.iter().map(|n| n.1).collect(),
            slopes: nodes.iter().map(|n| n.2).collect(),
            parity_even: true,
        }
    }

    pub fn theta_grid(&self) -> &[f64] {
        &self.theta
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.theta[0], *self.theta.last().unwrap())
    }

    fn bracket(&self, t: f64) -> usize {
        let idx = self.theta.partition_point(|&x| x <= t);
        idx.clamp(1, self.theta.len() - 1)
    }

    /// Cubic Hermite interpolation of the profile value.
    pub fn value_at(&self, t: f64) -> f64 {
        let i = self.bracket(t);
        let (t0, t1) = (self.theta[i - 1], self.theta[i]);
        let h = t1 - t0;
        let s = ((t - t0) / h).clamp(0.0, 1.0);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        let (m0, m1) = (self.slopes[i - 1], self.slopes[i]);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * v0
            + (s3 - 2.0 * s2 + s) * h * m0
            + (-2.0 * s3 + 3.0 * s2) * v1
            + (s3 - s2) * h * m1
    }

    /// Interpolated slope d tau / d theta.
    pub fn slope_at(&self, t: f64) -> f64 {
        let i = self.bracket(t);
        let (t0, t1) = (self.theta[i - 1], self.theta[i]);
        let h = t1 - t0;
        let s = ((t - t0) / h).clamp(0.0, 1.0);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        let (m0, m1) = (self.slopes[i - 1], self.slopes[i]);
        let s2 = s * s;
        (6.0 * s2 - 6.0 * s) * v0 / h
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * v1 / h
            + (3.0 * s2 - 2.0 * s) * m1
    }

    /// Largest |tau| over the middle half of the domain; the reference
    /// scale used by the boundedness filter.
    pub fn midline_scale(&self) -> f64 {
        self.theta
            .iter()
            .zip(&self.values)
            .filter(|(&t, _)| (PI / 4.0..=3.0 * PI / 4.0).contains(&t))
            .map(|(_, v)| v.abs())
            .fold(0.0_f64, f64::max)
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0_f64, f64::max)
    }
}

/// Verdict of the pole-boundedness filter.
#[derive(Debug, Clone, Copy)]
pub struct BoundednessReport {
    /// Reference scale (max |tau| over the middle half of the domain).
    pub midline_scale: f64,
    /// max(|tau(eps)|, |tau(pi - eps)|) / scale; a strongly divergent
    /// branch (like 1/theta) blows this up.
    pub pole_magnitude_ratio: f64,
    /// max near-pole indicial indicator theta |tau'(theta)| / scale; any
    /// branch with a finite pole limit and bounded slope drives this to
    /// zero, while a log-divergent branch keeps it O(1).
    pub pole_slope_indicator: f64,
    pub bounded: bool,
}

/// Magnitude threshold: reject when the pole value exceeds 1e3 times the
/// midline scale.
const MAGNITUDE_THRESHOLD: f64 = 1e3;
/// Indicial threshold on theta |tau'|: the bounded branch gives O(theta)
/// or O(theta^2) here, the log branch O(1).
const SLOPE_INDICATOR_THRESHOLD: f64 = 1e-3;

/// Classify a profile as pole-bounded or pole-singular.
pub fn pole_boundedness(profile: &AngularProfile) -> BoundednessReport {
    let scale = profile.midline_scale().max(1e-300);
    let n = profile.theta.len();
    let (t_first, t_last) = profile.domain();
    let magnitude = profile.values[0].abs().max(profile.values[n - 1].abs()) / scale;
    let slope_ind = (t_first * profile.slopes[0].abs())
        .max((PI - t_last) * profile.slopes[n - 1].abs())
        / scale;
    BoundednessReport {
        midline_scale: scale,
        pole_magnitude_ratio: magnitude,
        pole_slope_indicator: slope_ind,
        bounded: magnitude <= MAGNITUDE_THRESHOLD && slope_ind <= SLOPE_INDICATOR_THRESHOLD,
    }
}

fn cot(theta: f64) -> f64 {
    theta.cos() / theta.sin()
}

/// tau'' + cot(theta) tau' + 2 tau = 0 (the trace equation; also the
/// homogeneous part of the tau1 equation).
fn rhs_trace(theta: f64, y: [f64; 2]) -> [f64; 2] {
    [y[1], -cot(theta) * y[1] - 2.0 * y[0]]
}

/// tau1'' + cot tau1' + 2 tau1 + 3 a0 cos(theta) (2 cos^2 - 3 sin^2) = 0.
fn rhs_tau1(alpha0: f64) -> impl Fn(f64, [f64; 2]) -> [f64; 2] {
    move |theta: f64, y: [f64; 2]| {
        let c = theta.cos();
        let s = theta.sin();
        let forcing = 3.0 * alpha0 * c * (2.0 * c * c - 3.0 * s * s);
        [y[1], -cot(theta) * y[1] - 2.0 * y[0] - forcing]
    }
}

/// tau4'' + cot tau4' + (1 - cot^2) tau4 + 3 a0 sin(theta) (4 cos^2 - sin^2) = 0.
fn rhs_tau4(alpha0: f64) -> impl Fn(f64, [f64; 2]) -> [f64; 2] {
    move |theta: f64, y: [f64; 2]| {
        let c = theta.cos();
        let s = theta.sin();
        let ct = c / s;
        let forcing = 3.0 * alpha0 * s * (4.0 * c * c - s * s);
        [y[1], -ct * y[1] - (1.0 - ct * ct) * y[0] - forcing]
    }
}

fn step_control() -> StepControl {
    StepControl {
        max_step: 5e-4,
        pole_fraction: 5e-3,
    }
}

/// Integrate from the left pole offset to the midline.
fn shoot_left<F: Fn(f64, [f64; 2]) -> [f64; 2]>(rhs: &F, y0: [f64; 2]) -> Vec<(f64, [f64; 2])> {
    integrate_rk4(rhs, POLE_OFFSET, FRAC_PI_2, y0, &step_control())
}

/// Integrate from the right pole offset back to the midline.
fn shoot_right<F: Fn(f64, [f64; 2]) -> [f64; 2]>(rhs: &F, y0: [f64; 2]) -> Vec<(f64, [f64; 2])> {
    integrate_rk4(rhs, PI - POLE_OFFSET, FRAC_PI_2, y0, &step_control())
}

fn end_state(path: &[(f64, [f64; 2])]) -> [f64; 2] {
    path.last().unwrap().1
}

/// Merge a left half (ascending) and a right half (descending, scaled by
/// `right_scale`, optionally shifted by `right_base` paths) into one
/// profile.
fn merge_halves(
    left: &[(f64, [f64; 2])],
    right: &[(f64, [f64; 2])],
    combine_left: impl Fn([f64; 2]) -> (f64, f64),
    combine_right: impl Fn([f64; 2]) -> (f64, f64),
) -> AngularProfile {
    let mut nodes: Vec<(f64, f64, f64)> = left
        .iter()
        .map(|&(t, y)| {
            let (v, s) = combine_left(y);
            (t, v, s)
        })
        .collect();
    for &(t, y) in right.iter() {
        if t > FRAC_PI_2 + 1e-14 {
            let (v, s) = combine_right(y);
            nodes.push((t, v, s));
        }
    }
    AngularProfile::from_nodes(nodes)
}

/// Result of the trace-equation solve.
#[derive(Debug, Clone)]
pub struct TraceSolution {
    /// Bounded branch, normalized to value 1 at the left pole; numerically
    /// indistinguishable from cos(theta).
    pub profile: AngularProfile,
    /// Midline matching defect between the two half-integrations.
    pub defect: f64,
    pub boundedness: BoundednessReport,
}

/// Solve the trace equation tau'' + cot tau' + 2 tau = 0 on
/// (EPS, pi - EPS), keeping only the branch bounded at both poles.
///
/// The regular branch has tau'(0) = 0 with the indicial balance
/// 2 tau''(0) + 2 tau(0) = 0, so the series start at EPS is
/// (1 - EPS^2/2, -EPS) for unit pole value.
pub fn solve_trace_ode() -> Result<TraceSolution> {
    let e = POLE_OFFSET;
    let left = shoot_left(&rhs_trace, [1.0 - 0.5 * e * e, -e]);
    // Unit pole value at theta = pi; d/d theta flips sign there.
    let right = shoot_right(&rhs_trace, [1.0 - 0.5 * e * e, e]);

    let yl = end_state(&left);
    let yr = end_state(&right);
    // Match on the dominant component of the right half at the midline.
    let a = if yr[0].abs() >= yr[1].abs() {
        yl[0] / yr[0]
    } else {
        yl[1] / yr[1]
    };
    let scale = yl[0].abs().max(yl[1].abs()).max(1e-300);
    let defect = ((yl[0] - a * yr[0]).abs()).max((yl[1] - a * yr[1]).abs()) / scale;
    if defect.is_nan() || defect >= 1e-6 {
        return Err(KelvinError::NonConvergence {
            step: "trace ODE midline match",
            defect,
        });
    }

    let profile = merge_halves(&left, &right, |y| (y[0], y[1]), |y| (a * y[0], a * y[1]));
    let boundedness = pole_boundedness(&profile);
    if !boundedness.bounded {
        return Err(KelvinError::NonConvergence {
            step: "trace ODE pole regularity",
            defect: boundedness.pole_slope_indicator,
        });
    }
    Ok(TraceSolution {
        profile,
        defect,
        boundedness,
    })
}

/// The second, pole-singular solution of the trace equation, grown from
/// the midline with the initial data orthogonal to the bounded branch.
/// Used to exercise the boundedness filter; it diverges logarithmically at
/// both poles.
pub fn singular_trace_candidate() -> AngularProfile {
    let ctrl = step_control();
    let y_mid = [-1.0, 0.0];
    let to_left = integrate_rk4(&rhs_trace, FRAC_PI_2, POLE_OFFSET, y_mid, &ctrl);
    let to_right = integrate_rk4(&rhs_trace, FRAC_PI_2, PI - POLE_OFFSET, y_mid, &ctrl);
    let mut nodes: Vec<(f64, f64, f64)> = to_left.iter().map(|&(t, y)| (t, y[0], y[1])).collect();
    nodes.extend(to_right.iter().skip(1).map(|&(t, y)| (t, y[0], y[1])));
    AngularProfile::from_nodes(nodes)
}

/// Result of an inhomogeneous angular solve: the midline-anchored
/// particular solution and the bounded homogeneous basis carrying the free
/// constant.
#[derive(Debug, Clone)]
pub struct InhomogeneousSolution {
    pub particular: AngularProfile,
    pub homogeneous: AngularProfile,
    pub defect: f64,
}

impl InhomogeneousSolution {
    /// Sample the general solution particular + c * homogeneous.
    pub fn general_at(&self, theta: f64, c: f64) -> f64 {
        self.particular.value_at(theta) + c * self.homogeneous.value_at(theta)
    }
}

/// Solve the tau1 equation for a given trace amplitude alpha0.
///
/// Particular-branch indicial start (no bounded-homogeneous component,
/// i.e. zero pole value): the forcing tends to 6 alpha0 at theta = 0, so
/// 4 a2 + 6 alpha0 = 0 gives tau ~ -(3/2) alpha0 theta^2; the forcing is
/// odd about the midline, flipping the sign of the series at the right
/// pole. The canonical member is pinned by zero slope at pi/2, where the
/// homogeneous branch (cos-like) has slope -1.
pub fn solve_tau1_ode(alpha0: f64) -> Result<InhomogeneousSolution> {
    let e = POLE_OFFSET;
    let rhs = rhs_tau1(alpha0);

    let hom_left = shoot_left(&rhs_trace, [1.0 - 0.5 * e * e, -e]);
    let hom_right = shoot_right(&rhs_trace, [1.0 - 0.5 * e * e, e]);
    let part_left = shoot_left(&rhs, [-1.5 * alpha0 * e * e, -3.0 * alpha0 * e]);
    let part_right = shoot_right(&rhs, [1.5 * alpha0 * e * e, -3.0 * alpha0 * e]);

    assemble_inhomogeneous(
        "tau1 ODE",
        &hom_left,
        &hom_right,
        &part_left,
        &part_right,
        PinComponent::Slope,
        alpha0,
    )
}

/// Solve the tau4 equation for a given trace amplitude alpha0.
///
/// The homogeneous bounded branch has indicial exponent s = 1 (sin-like),
/// series theta - theta^3/6; the singular branch goes like 1/theta. The
/// particular start with no bounded-homogeneous component is
/// tau ~ -(3/2) alpha0 theta^3 (the forcing is even about the midline).
/// The canonical member is pinned by zero value at pi/2, where the
/// homogeneous branch has value 1.
pub fn solve_tau4_ode(alpha0: f64) -> Result<InhomogeneousSolution> {
    let e = POLE_OFFSET;
    let rhs = rhs_tau4(alpha0);

    let hom_left = shoot_left(&rhs_tau4(0.0), [e - e * e * e / 6.0, 1.0 - 0.5 * e * e]);
    let hom_right = shoot_right(&rhs_tau4(0.0), [e - e * e * e / 6.0, -(1.0 - 0.5 * e * e)]);
    let part_left = shoot_left(&rhs, [-1.5 * alpha0 * e * e * e, -4.5 * alpha0 * e * e]);
    let part_right = shoot_right(&rhs, [-1.5 * alpha0 * e * e * e, 4.5 * alpha0 * e * e]);

    assemble_inhomogeneous(
        "tau4 ODE",
        &hom_left,
        &hom_right,
        &part_left,
        &part_right,
        PinComponent::Value,
        alpha0,
    )
}

enum PinComponent {
    Value,
    Slope,
}

#[allow(clippy::too_many_arguments)]
fn assemble_inhomogeneous(
    step: &'static str,
    hom_left: &[(f64, [f64; 2])],
    hom_right: &[(f64, [f64; 2])],
    part_left: &[(f64, [f64; 2])],
    part_right: &[(f64, [f64; 2])],
    pin: PinComponent,
    alpha0: f64,
) -> Result<InhomogeneousSolution> {
    let hl = end_state(hom_left);
    let hr = end_state(hom_right);
    let pl = end_state(part_left);
    let pr = end_state(part_right);

    // Scale the right homogeneous half onto the left one.
    let hom_scale = if hr[0].abs() >= hr[1].abs() {
        hl[0] / hr[0]
    } else {
        hl[1] / hr[1]
    };

    // Pin the canonical particular member on each half.
    let (al, ar) = match pin {
        PinComponent::Slope => (-pl[1] / hl[1], -pr[1] / hr[1]),
        PinComponent::Value => (-pl[0] / hl[0], -pr[0] / hr[0]),
    };

    // Midline continuity of the pinned member.
    let vl = [pl[0] + al * hl[0], pl[1] + al * hl[1]];
    let vr = [pr[0] + ar * hr[0], pr[1] + ar * hr[1]];
    let scale = alpha0.abs().max(1e-300);
    let defect = ((vl[0] - vr[0]).abs()).max((vl[1] - vr[1]).abs()) / scale;
    if defect.is_nan() || defect >= 1e-6 {
        return Err(KelvinError::NonConvergence { step, defect });
    }

    // The pinned particular combines the particular and homogeneous paths
    // node by node (both halves share the same step sequence).
    let mut nodes: Vec<(f64, f64, f64)> = part_left
        .iter()
        .zip(hom_left.iter())
        .map(|(&(t, py), &(_, hy))| (t, py[0] + al * hy[0], py[1] + al * hy[1]))
        .collect();
    for (&(t, py), &(_, hy)) in part_right.iter().zip(hom_right.iter()) {
        if t > FRAC_PI_2 + 1e-14 {
            nodes.push((t, py[0] + ar * hy[0], py[1] + ar * hy[1]));
        }
    }
    let particular = AngularProfile::from_nodes(nodes);

    let homogeneous = merge_halves(
        hom_left,
        hom_right,
        |y| (y[0], y[1]),
        |y| (hom_scale * y[0], hom_scale * y[1]),
    );

    for profile in [&particular, &homogeneous] {
        let report = pole_boundedness(profile);
        // A zero profile (alpha0 = 0 particular) is trivially bounded.
        if profile.max_abs_value() > 1e-300 * scale && !report.bounded {
            return Err(KelvinError::NonConvergence {
                step,
                defect: report.pole_slope_indicator,
            });
        }
    }

    Ok(InhomogeneousSolution {
        particular,
        homogeneous,
        defect,
    })
}
