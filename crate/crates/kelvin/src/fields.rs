//! Closed-form evaluation of the Kelvin elastic state: stress, strain,
//! displacement, the harmonic trace potential, the classical displacement
//! formula of Love's account, and the Helmholtz potential pair.
//!
//! All fields live on the punctured space around the load application
//! point; evaluation exactly at the load point is an error, with no
//! mollification.
//!
//! Meridian components are functions of (z, r) only, where z is the signed
//! coordinate along the load axis and r the distance from it. With
//! k = f / (8 pi (1 - nu)) the stress components are
//!
//! ```text
//! sigma1 = -k (3 z^3 / rho^5 + (1 - 2 nu) z / rho^3)    (= S_zz)
//! sigma2 = -k (3 z r^2 / rho^5 - (1 - 2 nu) z / rho^3)  (= S_rr)
//! sigma3 = +k (1 - 2 nu) z / rho^3                      (= S_phiphi)
//! sigma4 = -k (3 z^2 r / rho^5 + (1 - 2 nu) r / rho^3)  (= S_zr)
//! ```
//!
//! This sign layout is the one fixed by the balance and traction checks in
//! [`crate::verify`]; an alternative layout for the (1 - 2 nu) terms that
//! circulates in some printed accounts is kept behind
//! [`StressSigns::PrintedVariant`] so the residual suite can demonstrate
//! that it violates equilibrium.

use nalgebra::Vector3;

use crate::error::{KelvinError, Result};
use crate::geometry::{cart_to_cyl, CartesianPoint, CylindricalTriple, FrameBasis};
use crate::material::IsotropicElastic;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;
const EIGHT_PI: f64 = 8.0 * std::f64::consts::PI;
const SIXTEEN_PI: f64 = 16.0 * std::f64::consts::PI;

/// A concentrated force: signed magnitude, unit axis, application point.
#[derive(Debug, Clone, Copy)]
pub struct PointLoad {
    pub magnitude: f64,
    pub axis: Vector3<f64>,
    pub origin: Vector3<f64>,
}

impl PointLoad {
    /// A load along `axis` (normalized internally) applied at `origin`.
    pub fn new(magnitude: f64, axis: Vector3<f64>, origin: Vector3<f64>) -> Self {
        Self {
            magnitude,
            axis: axis.normalize(),
            origin,
        }
    }

    /// A load of magnitude `f` along the global x1 axis at the global origin.
    pub fn along_x1(magnitude: f64) -> Self {
        Self::new(magnitude, Vector3::x(), Vector3::zeros())
    }

    /// Deterministic frame with e1 along the load axis.
    pub fn frame(&self) -> FrameBasis {
        FrameBasis::from_axis(self.axis)
    }

    /// Cylindrical coordinates of a Cartesian point, relative to the load.
    pub fn cylindrical_of(&self, p: CartesianPoint) -> CylindricalTriple {
        let rel = CartesianPoint::from_vector(p.to_vector() - self.origin);
        cart_to_cyl(rel, &self.frame())
    }
}

/// The four parameter functions of the reduced stress representation at a
/// point. The (phi, r) and (phi, z) components are identically zero by the
/// problem's symmetry and are not stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalStress {
    /// S_zz
    pub sigma1: f64,
    /// S_rr
    pub sigma2: f64,
    /// S_phiphi
    pub sigma3: f64,
    /// S_zr
    pub sigma4: f64,
}

impl CylindricalStress {
    pub const ZERO: Self = Self {
        sigma1: 0.0,
        sigma2: 0.0,
        sigma3: 0.0,
        sigma4: 0.0,
    };

    pub fn trace(&self) -> f64 {
        self.sigma1 + self.sigma2 + self.sigma3
    }

    /// Frobenius norm of the full tensor (the shear pair counts twice).
    pub fn norm(&self) -> f64 {
        (self.sigma1 * self.sigma1
            + self.sigma2 * self.sigma2
            + self.sigma3 * self.sigma3
            + 2.0 * self.sigma4 * self.sigma4)
            .sqrt()
    }
}

/// Meridian strain components at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainComponents {
    pub e_zz: f64,
    pub e_rr: f64,
    pub e_phiphi: f64,
    pub e_zr: f64,
}

impl StrainComponents {
    pub fn norm(&self) -> f64 {
        (self.e_zz * self.e_zz
            + self.e_rr * self.e_rr
            + self.e_phiphi * self.e_phiphi
            + 2.0 * self.e_zr * self.e_zr)
            .sqrt()
    }
}

/// Meridian displacement components; u_phi is a structural zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement {
    pub u_z: f64,
    pub u_r: f64,
}

/// Helmholtz potential pair evaluated at a point: u = grad(phi) + curl(w)
/// with div(w) = 0.
///
/// The pair is normalized so the reconstruction holds exactly: the scalar
/// potential carries the divisor (lambda + 2 mu) and the vector potential
/// the divisor mu, as required by the split equilibrium equations the pair
/// solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzPotentials {
    pub phi_pot: f64,
    pub w_pot: Vector3<f64>,
}

/// Sign layout of the (1 - 2 nu) stress terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StressSigns {
    /// The layout under which the field is divergence-free, balances the
    /// load on every sphere, and is the constitutive image of the strain
    /// field. This is the default everywhere.
    Balanced,
    /// An alternative layout found in some printed accounts of the
    /// solution (signs of the (1 - 2 nu) terms in components 1, 2, 4, and
    /// z in place of r in component 4). It fails the divergence residual;
    /// kept so the verification suite can discriminate.
    PrintedVariant,
}

fn radius(z: f64, r: f64) -> Result<f64> {
    let rho = z.hypot(r);
    if rho == 0.0 {
        return Err(KelvinError::SingularPoint { rho });
    }
    Ok(rho)
}

/// The harmonic trace potential alpha = tr S / (1 + nu) = alpha0 z / rho^3
/// with alpha0 = -f / (4 pi (1 - nu)).
pub fn trace_potential(z: f64, r: f64, load: &PointLoad, m: &IsotropicElastic) -> Result<f64> {
    let rho = radius(z, r)?;
    let alpha0 = -load.magnitude / (FOUR_PI * (1.0 - m.poisson_ratio()));
    Ok(alpha0 * z / rho.powi(3))
}

/// Kelvin stress in the reduced cylindrical representation (balanced signs).
pub fn kelvin_stress(
    z: f64,
    r: f64,
    load: &PointLoad,
    m: &IsotropicElastic,
) -> Result<CylindricalStress> {
    kelvin_stress_with_signs(z, r, load, m, StressSigns::Balanced)
}

/// Kelvin stress with an explicit sign-layout choice.
pub fn kelvin_stress_with_signs(
    z: f64,
    r: f64,
    load: &PointLoad,
    m: &IsotropicElastic,
    signs: StressSigns,
) -> Result<CylindricalStress> {
    let rho = radius(z, r)?;
    let nu = m.poisson_ratio();
    let k = load.magnitude / (EIGHT_PI * (1.0 - nu));
    let omt = 1.0 - 2.0 * nu;
    let rho3 = rho.powi(3);
    let rho5 = rho.powi(5);
    Ok(match signs {
        StressSigns::Balanced => CylindricalStress {
            sigma1: -k * (3.0 * z.powi(3) / rho5 + omt * z / rho3),
            sigma2: -k * (3.0 * z * r * r / rho5 - omt * z / rho3),
            sigma3: k * omt * z / rho3,
            sigma4: -k * (3.0 * z * z * r / rho5 + omt * r / rho3),
        },
        StressSigns::PrintedVariant => CylindricalStress {
            sigma1: -k * (3.0 * z.powi(3) / rho5 - omt * z / rho3),
            sigma2: -k * (3.0 * z * r * r / rho5 + omt * z / rho3),
            sigma3: k * omt * z / rho3,
            sigma4: -k * (3.0 * z * z * r / rho5 - omt * z / rho3),
        },
    })
}

/// Kelvin strain in meridian components, with C = f / (16 pi G (1 - nu)):
///
/// ```text
/// E_zz     = -C (4 (1 - nu) z^3 + (1 - 4 nu) z r^2) / rho^5
/// E_rr     =  C (z^3 - 2 z r^2) / rho^5
/// E_phiphi =  C z / rho^3
/// E_zr     = -C (2 (2 - nu) z^2 r + (1 - 2 nu) r^3) / rho^5
/// ```
pub fn kelvin_strain(
    z: f64,
    r: f64,
    load: &PointLoad,
    m: &IsotropicElastic,
) -> Result<StrainComponents> {
    let rho = radius(z, r)?;
    let nu = m.poisson_ratio();
    let c = load.magnitude / (SIXTEEN_PI * m.shear_modulus() * (1.0 - nu));
    let rho3 = rho.powi(3);
    let rho5 = rho.powi(5);
    Ok(StrainComponents {
        e_zz: -c * (4.0 * (1.0 - nu) * z.powi(3) + (1.0 - 4.0 * nu) * z * r * r) / rho5,
        e_rr: c * (z.powi(3) - 2.0 * z * r * r) / rho5,
        e_phiphi: c * z / rho3,
        e_zr: -c * (2.0 * (2.0 - nu) * z * z * r + (1.0 - 2.0 * nu) * r.powi(3)) / rho5,
    })
}

/// Kelvin displacement in meridian components:
///
/// ```text
/// u_z = C ((3 - 4 nu) / rho + z^2 / rho^3)
/// u_r = C z r / rho^3
/// ```
///
/// The arbitrary rigid translation along the axis is fixed to zero.
pub fn kelvin_displacement(
    z: f64,
    r: f64,
    load: &PointLoad,
    m: &IsotropicElastic,
) -> Result<Displacement> {
    let rho = radius(z, r)?;
    let nu = m.poisson_ratio();
    let c = load.magnitude / (SIXTEEN_PI * m.shear_modulus() * (1.0 - nu));
    Ok(Displacement {
        u_z: c * ((3.0 - 4.0 * nu) / rho + z * z / rho.powi(3)),
        u_r: c * z * r / rho.powi(3),
    })
}

/// The classical displacement formula, evaluated in the load frame and
/// returned in global Cartesian components:
///
/// ```text
/// u1 = C ((3 - 4 nu) / rho + x1^2 / rho^3)
/// u2 = C x1 x2 / rho^3
/// u3 = C x1 x3 / rho^3
/// ```
///
/// where (x1, x2, x3) are the coordinates of the field point relative to
/// the load in its frame. Serves as the independent oracle for the
/// meridian displacement.
pub fn love_displacement(
    p: CartesianPoint,
    load: &PointLoad,
    m: &IsotropicElastic,
) -> Result<Vector3<f64>> {
    let frame = load.frame();
    let d = p.to_vector() - load.origin;
    let x1 = d.dot(&frame.e1);
    let x2 = d.dot(&frame.h);
    let x3 = d.dot(&frame.h_prime);
    let rho = radius(x1, x2.hypot(x3))?;
    let nu = m.poisson_ratio();
    let c = load.magnitude / (SIXTEEN_PI * m.shear_modulus() * (1.0 - nu));
    let rho3 = rho.powi(3);
    let u1 = c * ((3.0 - 4.0 * nu) / rho + x1 * x1 / rho3);
    let u2 = c * x1 * x2 / rho3;
    let u3 = c * x1 * x3 / rho3;
    Ok(frame.e1 * u1 + frame.h * u2 + frame.h_prime * u3)
}

/// Helmholtz potential pair at a point:
///
/// ```text
/// phi = (f . grad rho) / (8 pi (lambda + 2 mu))
/// w   = (f x grad rho) / (8 pi mu)
/// ```
///
/// With these divisors, grad(phi) + curl(w) equals the displacement field
/// exactly, and div(w) = 0.
pub fn helmholtz_potentials(
    p: CartesianPoint,
    load: &PointLoad,
    m: &IsotropicElastic,
) -> Result<HelmholtzPotentials> {
    let d = p.to_vector() - load.origin;
    let rho = d.norm();
    if rho == 0.0 {
        return Err(KelvinError::SingularPoint { rho });
    }
    let (lambda, mu) = m.lame_constants();
    let grad_rho = d / rho;
    let force = load.axis * load.magnitude;
    Ok(HelmholtzPotentials {
        phi_pot: force.dot(&grad_rho) / (EIGHT_PI * (lambda + 2.0 * mu)),
        w_pot: force.cross(&grad_rho) / (EIGHT_PI * mu),
    })
}

/// Displacement of a concentrated force `force` (magnitude times
/// direction) applied at the origin of the relative coordinate `x`:
///
/// ```text
/// u_i = ((3 - 4 nu) f_i / rho + (x . f) x_i / rho^3) / (16 pi G (1 - nu))
/// ```
///
/// Linear in the force; reduces to [`love_displacement`] for an
/// axis-aligned force. This is the superposition kernel used by the strain
/// nuclei.
pub fn green_displacement(
    x: Vector3<f64>,
    force: Vector3<f64>,
    m: &IsotropicElastic,
) -> Result<Vector3<f64>> {
    let rho = x.norm();
    if rho == 0.0 {
        return Err(KelvinError::SingularPoint { rho });
    }
    let nu = m.poisson_ratio();
    let c = 1.0 / (SIXTEEN_PI * m.shear_modulus() * (1.0 - nu));
    Ok((force * ((3.0 - 4.0 * nu) / rho) + x * (x.dot(&force) / rho.powi(3))) * c)
}
