//! Strain nuclei by superposition: force doublets and the center of
//! dilatation, built from finite-difference limits of the point-force
//! displacement kernel.

use nalgebra::Vector3;

use crate::error::{KelvinError, Result};
use crate::fields::green_displacement;
use crate::material::IsotropicElastic;

/// A pair of opposite forces of magnitude `strength` along
/// `force_direction`, separated by `arm_length` along `arm_direction`.
///
/// Parallel force and arm give a moment-free doublet; perpendicular ones
/// carry a moment.
#[derive(Debug, Clone, Copy)]
pub struct DoubletSpec {
    pub force_direction: Vector3<f64>,
    pub arm_direction: Vector3<f64>,
    pub arm_length: f64,
    pub strength: f64,
}

impl DoubletSpec {
    pub fn new(
        force_direction: Vector3<f64>,
        arm_direction: Vector3<f64>,
        arm_length: f64,
        strength: f64,
    ) -> Self {
        assert!(arm_length > 0.0, "doublet arm must be positive");
        Self {
            force_direction: force_direction.normalize(),
            arm_direction: arm_direction.normalize(),
            arm_length,
            strength,
        }
    }

    /// True when the forces exert no moment (force parallel to arm).
    pub fn is_moment_free(&self) -> bool {
        self.force_direction.cross(&self.arm_direction).norm() < 1e-12
    }
}

/// Displacement of a force doublet centered at the origin:
///
/// ```text
/// u(x) = [ u(x; +f d at +eps a / 2) + u(x; -f d at -eps a / 2) ] / eps
/// ```
///
/// which converges, as eps -> 0, to the directional derivative of the
/// point-force field along the arm. The symmetric difference makes the
/// eps-error second order (Richardson-checkable).
pub fn doublet_displacement(
    spec: &DoubletSpec,
    point: Vector3<f64>,
    m: &IsotropicElastic,
) -> Result<Vector3<f64>> {
    let distance = point.norm();
    if distance < 10.0 * spec.arm_length {
        return Err(KelvinError::NucleusTooClose {
            distance,
            arm: spec.arm_length,
        });
    }
    let offset = spec.arm_direction * (0.5 * spec.arm_length);
    let force = spec.force_direction * spec.strength;
    let plus = green_displacement(point - offset, force, m)?;
    let minus = green_displacement(point + offset, -force, m)?;
    Ok((plus + minus) / spec.arm_length)
}

/// Displacement of a center of dilatation at the origin: the sum of three
/// orthogonal moment-free doublets of equal strength.
///
/// The resulting far field is purely radial with magnitude proportional to
/// rho^-2. The default arm is 1e-4 times the field-point distance.
pub fn dilatation_center(
    point: Vector3<f64>,
    strength: f64,
    m: &IsotropicElastic,
) -> Result<Vector3<f64>> {
    dilatation_center_with_arm(point, strength, m, 1e-4 * point.norm())
}

/// Center of dilatation with an explicit doublet arm, for convergence
/// studies.
pub fn dilatation_center_with_arm(
    point: Vector3<f64>,
    strength: f64,
    m: &IsotropicElastic,
    arm_length: f64,
) -> Result<Vector3<f64>> {
    if strength == 0.0 {
        return Ok(Vector3::zeros());
    }
    let mut total = Vector3::zeros();
    for axis in [Vector3::x(), Vector3::y(), Vector3::z()] {
        let spec = DoubletSpec::new(axis, axis, arm_length, strength);
        total += doublet_displacement(&spec, point, m)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{kelvin_displacement, PointLoad};

    fn demo() -> IsotropicElastic {
        IsotropicElastic::demo()
    }

    #[test]
    fn axial_doublet_matches_derivative_of_point_force_field() {
        // Independent oracle: central finite difference of the meridian
        // displacement with its own (much larger) step.
        let m = demo();
        let load = PointLoad::along_x1(1.0);
        let spec = DoubletSpec::new(Vector3::x(), Vector3::x(), 1e-4, 1.0);
        let got = doublet_displacement(&spec, Vector3::new(1.0, 0.0, 0.0), &m).unwrap();

        let h = 1e-6;
        let up = kelvin_displacement(1.0 - h, 0.0, &load, &m).unwrap().u_z;
        let um = kelvin_displacement(1.0 + h, 0.0, &load, &m).unwrap().u_z;
        let expected = (up - um) / (2.0 * h); // -d/dz u_z on the axis
        assert!(
            (got.x - expected).abs() < 1e-6 * expected.abs().max(1.0),
            "doublet {} vs derivative {expected}",
            got.x
        );
        assert!(got.y.abs() < 1e-12 && got.z.abs() < 1e-12);
    }

    #[test]
    fn doublet_difference_is_second_order_in_arm() {
        let m = demo();
        let p = Vector3::new(0.8, 0.5, -0.3);
        let at = |eps: f64| {
            let spec = DoubletSpec::new(Vector3::x(), Vector3::x(), eps, 1.0);
            doublet_displacement(&spec, p, &m).unwrap()
        };
        let reference = at(1e-6);
        let d1 = (at(4e-3) - reference).norm();
        let d2 = (at(2e-3) - reference).norm();
        let ratio = d1 / d2;
        assert!(
            (3.0..5.0).contains(&ratio),
            "halving the arm should shrink the error ~4x, got {ratio}"
        );
    }

    #[test]
    fn doublet_is_linear_in_strength() {
        let m = demo();
        let p = Vector3::new(1.0, 0.4, 0.2);
        let one = doublet_displacement(
            &DoubletSpec::new(Vector3::y(), Vector3::x(), 1e-4, 1.0),
            p,
            &m,
        )
        .unwrap();
        let two = doublet_displacement(
            &DoubletSpec::new(Vector3::y(), Vector3::x(), 1e-4, 2.0),
            p,
            &m,
        )
        .unwrap();
        assert!((two - one * 2.0).norm() <= 1e-12 * one.norm());
        let zero = doublet_displacement(
            &DoubletSpec::new(Vector3::y(), Vector3::x(), 1e-4, 0.0),
            p,
            &m,
        )
        .unwrap();
        assert_eq!(zero, Vector3::zeros());
    }

    #[test]
    fn doublet_rejects_points_near_origin() {
        let m = demo();
        let spec = DoubletSpec::new(Vector3::x(), Vector3::x(), 1e-2, 1.0);
        let err = doublet_displacement(&spec, Vector3::new(0.05, 0.0, 0.0), &m);
        assert!(matches!(err, Err(KelvinError::NucleusTooClose { .. })));
    }

    #[test]
    fn dilatation_center_is_radial() {
        let m = demo();
        for dir in [
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.3, -0.7, 0.64),
            Vector3::new(-0.2, 0.9, 0.4),
        ] {
            let x = dir.normalize() * 1.3;
            let u = dilatation_center(x, 1.0, &m).unwrap();
            let angle = u.normalize().cross(&x.normalize()).norm();
            assert!(angle < 1e-6, "angle from radial {angle}");
        }
    }

    #[test]
    fn dilatation_center_inverse_square_law() {
        let m = demo();
        let dir = Vector3::new(0.48, 0.6, -0.64).normalize();
        let near = dilatation_center(dir * 1.0, 1.0, &m).unwrap().norm();
        let far = dilatation_center(dir * 2.0, 1.0, &m).unwrap().norm();
        let ratio = near / far;
        assert!((ratio - 4.0).abs() < 1e-4 * 4.0, "rho^-2 law ratio {ratio}");

        // Across a full decade.
        let ten = dilatation_center(dir * 10.0, 1.0, &m).unwrap().norm();
        assert!((near / ten - 100.0).abs() < 1e-4 * 100.0);
    }

    #[test]
    fn dilatation_center_axis_permutation_invariance() {
        // Summing the three doublets in any axis order gives the same
        // field; spot-check against an explicitly permuted sum.
        let m = demo();
        let p = Vector3::new(0.9, -0.8, 0.55);
        let arm = 1e-4 * p.norm();
        let mut permuted = Vector3::zeros();
        for axis in [Vector3::z(), Vector3::x(), Vector3::y()] {
            let spec = DoubletSpec::new(axis, axis, arm, 1.0);
            permuted += doublet_displacement(&spec, p, &m).unwrap();
        }
        let direct = dilatation_center(p, 1.0, &m).unwrap();
        assert!((direct - permuted).norm() <= 1e-10 * direct.norm());
    }

    #[test]
    fn dilatation_center_pressure_free_far_field() {
        // tr E ~ div u vanishes relative to the strain scale.
        let m = demo();
        let x = Vector3::new(1.1, 0.6, -0.4);
        let h = 1e-5 * x.norm();
        let u = |p: Vector3<f64>| dilatation_center(p, 1.0, &m).unwrap();
        let mut div = 0.0;
        let mut grad_norm2 = 0.0;
        for j in 0..3 {
            let mut ej = Vector3::zeros();
            ej[j] = h;
            let dj = (u(x + ej) - u(x - ej)) / (2.0 * h);
            div += dj[j];
            grad_norm2 += dj.norm_squared();
        }
        assert!(div.abs() < 1e-6 * grad_norm2.sqrt(), "div {div}");
    }

    #[test]
    fn zero_strength_gives_zero_field() {
        let m = demo();
        let u = dilatation_center(Vector3::new(1.0, 2.0, 3.0), 0.0, &m).unwrap();
        assert_eq!(u, Vector3::zeros());
    }

    #[test]
    fn moment_flag() {
        assert!(DoubletSpec::new(Vector3::x(), Vector3::x(), 1e-3, 1.0).is_moment_free());
        assert!(!DoubletSpec::new(Vector3::x(), Vector3::y(), 1e-3, 1.0).is_moment_free());
    }
}
