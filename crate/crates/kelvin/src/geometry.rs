//! Coordinate systems, frame bases, and tensor-component transformations.
//!
//! The problem has a distinguished direction (the load axis, written e1)
//! and is axisymmetric about it. Two coordinate systems are used:
//!
//! * cylindrical (z, r, phi): z signed along the axis, r >= 0 radial,
//!   phi in [0, 2*pi) azimuthal;
//! * spherical (rho, theta, phi): rho > 0 distance from the load point,
//!   theta = atan2(r, z) in [0, pi] polar angle.
//!
//! Storing theta in [0, pi] makes the parity statements of the reduced
//! stress representation automatic: z = rho*cos(theta), r = rho*sin(theta)
//! with sin(theta) >= 0.

use nalgebra::{Matrix3, Vector3};

use crate::error::{KelvinError, Result};
use crate::fields::CylindricalStress;

/// A point in 3D Cartesian coordinates, with the load axis conventionally
/// along x1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl CartesianPoint {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x1, self.x2, self.x3)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }
}

/// Cylindrical coordinates about the load axis: signed z, radius r >= 0,
/// azimuth phi in [0, 2*pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalTriple {
    pub z: f64,
    pub r: f64,
    pub phi: f64,
}

/// Spherical coordinates about the load point: rho > 0, polar angle
/// theta in [0, pi], azimuth phi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalTriple {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Orthonormal right-handed triad {e1, h, h_prime}: load axis, radial
/// direction at some azimuth, and the azimuthal direction e1 x h.
#[derive(Debug, Clone, Copy)]
pub struct FrameBasis {
    pub e1: Vector3<f64>,
    pub h: Vector3<f64>,
    pub h_prime: Vector3<f64>,
}

impl FrameBasis {
    /// The frame aligned with the global axes: e1 = x1, h = x2, h' = x3.
    pub fn standard() -> Self {
        Self {
            e1: Vector3::x(),
            h: Vector3::y(),
            h_prime: Vector3::z(),
        }
    }

    /// Build a frame whose e1 is the given axis. The phi = 0 radial
    /// reference is chosen deterministically by projecting the global
    /// axis least aligned with e1.
    pub fn from_axis(axis: Vector3<f64>) -> Self {
        let e1 = axis.normalize();
        let trial = if e1.x.abs() <= e1.y.abs() && e1.x.abs() <= e1.z.abs() {
            Vector3::x()
        } else if e1.y.abs() <= e1.z.abs() {
            Vector3::y()
        } else {
            Vector3::z()
        };
        let h = (trial - e1 * trial.dot(&e1)).normalize();
        let h_prime = e1.cross(&h);
        Self { e1, h, h_prime }
    }

    /// Radial unit vector at azimuth phi.
    pub fn h_at(&self, phi: f64) -> Vector3<f64> {
        self.h * phi.cos() + self.h_prime * phi.sin()
    }

    /// Azimuthal unit vector at azimuth phi.
    pub fn h_prime_at(&self, phi: f64) -> Vector3<f64> {
        self.h_prime * phi.cos() - self.h * phi.sin()
    }

    /// The triad rotated by phi about e1.
    pub fn at_azimuth(&self, phi: f64) -> Self {
        Self {
            e1: self.e1,
            h: self.h_at(phi),
            h_prime: self.h_prime_at(phi),
        }
    }
}

/// Cylindrical coordinates of `p`, measured relative to the frame anchor.
///
/// Points on the axis map to r = 0 with phi = 0 by convention; there is
/// no error case.
pub fn cart_to_cyl(p: CartesianPoint, frame: &FrameBasis) -> CylindricalTriple {
    let v = p.to_vector();
    let z = v.dot(&frame.e1);
    let radial = v - frame.e1 * z;
    let r = radial.norm();
    let phi = if r == 0.0 {
        0.0
    } else {
        let raw = radial.dot(&frame.h_prime).atan2(radial.dot(&frame.h));
        if raw < 0.0 {
            raw + 2.0 * std::f64::consts::PI
        } else {
            raw
        }
    };
    CylindricalTriple { z, r, phi }
}

/// Inverse of [`cart_to_cyl`].
pub fn cyl_to_cart(c: CylindricalTriple, frame: &FrameBasis) -> CartesianPoint {
    let v = frame.e1 * c.z + frame.h_at(c.phi) * c.r;
    CartesianPoint::from_vector(v)
}

/// Spherical coordinates from cylindrical ones.
///
/// Fails at (z, r) = (0, 0), the load application point.
pub fn cyl_to_sph(c: CylindricalTriple) -> Result<SphericalTriple> {
    let rho = c.z.hypot(c.r);
    if rho == 0.0 {
        return Err(KelvinError::SingularPoint { rho });
    }
    Ok(SphericalTriple {
        rho,
        theta: c.r.atan2(c.z),
        phi: c.phi,
    })
}

/// Cylindrical coordinates from spherical ones: z = rho cos(theta),
/// r = rho sin(theta) (sin >= 0 for theta in [0, pi]).
pub fn sph_to_cyl(s: SphericalTriple) -> CylindricalTriple {
    CylindricalTriple {
        z: s.rho * s.theta.cos(),
        r: s.rho * s.theta.sin(),
        phi: s.phi,
    }
}

/// Outer normal of a sphere centered at the load point:
/// n = cos(theta) e1 + sin(theta) h(phi).
pub fn sphere_normal(theta: f64, phi: f64, frame: &FrameBasis) -> Vector3<f64> {
    frame.e1 * theta.cos() + frame.h_at(phi) * theta.sin()
}

/// Full symmetric stress tensor (Cartesian components) from the reduced
/// cylindrical representation at azimuth phi:
///
/// S = s1 e1(x)e1 + s2 h(x)h + s3 h'(x)h' + s4 (e1(x)h + h(x)e1).
///
/// The assembly is symmetric by construction; the (phi,r) and (phi,z)
/// components are structural zeros of the representation.
pub fn cyl_stress_to_tensor(s: &CylindricalStress, phi: f64, frame: &FrameBasis) -> Matrix3<f64> {
    let e1 = frame.e1;
    let h = frame.h_at(phi);
    let hp = frame.h_prime_at(phi);
    let mut t = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            // Dyads grouped so the (i, j) and (j, i) entries evaluate to
            // bit-identical floating-point values.
            t[(i, j)] = s.sigma1 * (e1[i] * e1[j])
                + s.sigma2 * (h[i] * h[j])
                + s.sigma3 * (hp[i] * hp[j])
                + s.sigma4 * (e1[i] * h[j] + h[i] * e1[j]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn cart_to_cyl_axis_point() {
        let c = cart_to_cyl(CartesianPoint::new(1.0, 0.0, 0.0), &FrameBasis::standard());
        assert_eq!((c.z, c.r, c.phi), (1.0, 0.0, 0.0));
    }

    #[test]
    fn cart_to_cyl_equatorial_point() {
        let c = cart_to_cyl(CartesianPoint::new(0.0, 1.0, 0.0), &FrameBasis::standard());
        assert_eq!((c.z, c.r, c.phi), (0.0, 1.0, 0.0));
    }

    #[test]
    fn cart_to_cyl_diagonal_point() {
        let c = cart_to_cyl(CartesianPoint::new(1.0, 1.0, 0.0), &FrameBasis::standard());
        assert_eq!((c.z, c.r, c.phi), (1.0, 1.0, 0.0));
    }

    #[test]
    fn cyl_to_sph_axis_equator_diagonal() {
        let s = cyl_to_sph(CylindricalTriple {
            z: 1.0,
            r: 0.0,
            phi: 0.0,
        })
        .unwrap();
        assert_eq!((s.rho, s.theta), (1.0, 0.0));

        let s = cyl_to_sph(CylindricalTriple {
            z: 0.0,
            r: 2.0,
            phi: 0.0,
        })
        .unwrap();
        assert_eq!(s.rho, 2.0);
        assert_close(s.theta, FRAC_PI_2, 1e-15);

        // Hand evaluation of rho^2 = z^2 + r^2 at (1, 1).
        let s = cyl_to_sph(CylindricalTriple {
            z: 1.0,
            r: 1.0,
            phi: 0.3,
        })
        .unwrap();
        assert_close(s.rho, 2.0_f64.sqrt(), 1e-15);
        assert_close(s.theta, FRAC_PI_4, 1e-15);
    }

    #[test]
    fn cyl_to_sph_rejects_origin() {
        let err = cyl_to_sph(CylindricalTriple {
            z: 0.0,
            r: 0.0,
            phi: 0.0,
        });
        assert!(matches!(err, Err(KelvinError::SingularPoint { .. })));
    }

    #[test]
    fn sphere_normal_poles_and_equator() {
        let frame = FrameBasis::standard();
        assert!((sphere_normal(0.0, 0.0, &frame) - frame.e1).norm() < 1e-15);
        assert!((sphere_normal(FRAC_PI_2, 0.0, &frame) - frame.h).norm() < 1e-15);
        assert!((sphere_normal(PI, 0.7, &frame) + frame.e1).norm() < 1e-12);
    }

    #[test]
    fn stress_tensor_single_components() {
        let frame = FrameBasis::standard();
        let axial = CylindricalStress {
            sigma1: 1.0,
            sigma2: 0.0,
            sigma3: 0.0,
            sigma4: 0.0,
        };
        let t = cyl_stress_to_tensor(&axial, 1.234, &frame);
        assert_eq!(t[(0, 0)], 1.0);
        assert!(t.iter().map(|v| v.abs()).sum::<f64>() - 1.0 < 1e-15);

        let hoop = CylindricalStress {
            sigma1: 0.0,
            sigma2: 1.0,
            sigma3: 0.0,
            sigma4: 0.0,
        };
        let t = cyl_stress_to_tensor(&hoop, 0.0, &frame);
        assert_eq!(t[(1, 1)], 1.0);
        assert_eq!(t[(0, 0)], 0.0);
    }

    #[test]
    fn stress_tensor_isotropic_case() {
        let frame = FrameBasis::standard();
        let iso = CylindricalStress {
            sigma1: 1.0,
            sigma2: 1.0,
            sigma3: 1.0,
            sigma4: 0.0,
        };
        for phi in [0.0, 0.9, 2.5, 5.1] {
            let t = cyl_stress_to_tensor(&iso, phi, &frame);
            let trace = t[(0, 0)] + t[(1, 1)] + t[(2, 2)];
            assert_close(trace, 3.0, 1e-14);
            assert!((t - Matrix3::identity()).norm() < 1e-14);
        }
    }

    #[test]
    fn stress_tensor_exact_symmetry() {
        let frame = FrameBasis::from_axis(Vector3::new(0.3, -0.8, 0.52));
        let s = CylindricalStress {
            sigma1: 0.7,
            sigma2: -1.3,
            sigma3: 0.21,
            sigma4: 0.55,
        };
        let t = cyl_stress_to_tensor(&s, 1.9, &frame);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t[(i, j)], t[(j, i)], "exact symmetry at ({i},{j})");
            }
        }
    }

    #[test]
    fn frame_from_axis_is_orthonormal_right_handed() {
        for axis in [
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 0.0, -1.0),
            Vector3::new(0.3, 0.4, 0.5),
            Vector3::new(-2.0, 1.0, 0.1),
        ] {
            let f = FrameBasis::from_axis(axis);
            assert_close(f.e1.norm(), 1.0, 1e-15);
            assert_close(f.h.norm(), 1.0, 1e-15);
            assert_close(f.h_prime.norm(), 1.0, 1e-15);
            assert_close(f.e1.dot(&f.h), 0.0, 1e-15);
            assert_close(f.e1.dot(&f.h_prime), 0.0, 1e-15);
            assert_close(f.h.dot(&f.h_prime), 0.0, 1e-15);
            assert!((f.e1.cross(&f.h) - f.h_prime).norm() < 1e-15);
        }
    }

    #[test]
    fn round_trip_cart_cyl_sph() {
        // Deterministic pseudo-random sweep over five decades of radius.
        let frame = FrameBasis::from_axis(Vector3::new(0.2, 0.9, -0.4));
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let rho = 10f64.powf(-3.0 + 6.0 * next());
            let theta = PI * next();
            let phi = 2.0 * PI * next();
            let sph = SphericalTriple { rho, theta, phi };
            let cyl = sph_to_cyl(sph);
            let cart = cyl_to_cart(cyl, &frame);
            let cyl2 = cart_to_cyl(cart, &frame);
            let sph2 = cyl_to_sph(cyl2).unwrap();
            assert_close(cyl2.z, cyl.z, 1e-12 * rho);
            assert_close(cyl2.r, cyl.r, 1e-12 * rho);
            assert_close(sph2.rho, rho, 1e-12 * rho);
            assert_close(sph2.theta, theta, 1e-11);
            if cyl.r > 1e-9 * rho {
                let dphi = (sph2.phi - phi).rem_euclid(2.0 * PI);
                assert!(
                    dphi < 1e-9 || (2.0 * PI - dphi) < 1e-9,
                    "phi mismatch {dphi}"
                );
            }
        }
    }

    #[test]
    fn tensor_frame_covariance() {
        // Rotating the evaluation azimuth equals evaluating in the rotated
        // frame at azimuth zero.
        let frame = FrameBasis::from_axis(Vector3::new(0.1, 0.5, 0.6));
        let s = CylindricalStress {
            sigma1: 0.4,
            sigma2: 1.1,
            sigma3: -0.6,
            sigma4: 0.9,
        };
        for phi in [0.3, 1.7, 4.4] {
            let a = cyl_stress_to_tensor(&s, phi, &frame);
            let b = cyl_stress_to_tensor(&s, 0.0, &frame.at_azimuth(phi));
            assert!((a - b).norm() < 1e-12);
        }
    }
}
