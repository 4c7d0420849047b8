//! Isotropic linear-elastic material parameters and the constitutive maps
//! between stress and strain.

use nalgebra::Matrix3;

use crate::error::{KelvinError, Result};
use crate::fields::{CylindricalStress, StrainComponents};

/// Isotropic elastic material given by shear modulus G and Poisson ratio nu.
///
/// The admissible range is G > 0 and -1 < nu < 1/2, both strict: at
/// nu = 1/2 the factor (1 - 2 nu) that divides the Lame constant lambda
/// (and enters the derivation constants) vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicElastic {
    shear: f64,
    poisson: f64,
}

impl IsotropicElastic {
    pub fn new(shear: f64, poisson: f64) -> Result<Self> {
        if !shear.is_finite() || shear <= 0.0 {
            return Err(KelvinError::InvalidMaterial(format!(
                "shear modulus G = {shear} violates G > 0"
            )));
        }
        if !poisson.is_finite() || poisson <= -1.0 {
            return Err(KelvinError::InvalidMaterial(format!(
                "Poisson ratio nu = {poisson} violates nu > -1"
            )));
        }
        if poisson >= 0.5 {
            return Err(KelvinError::InvalidMaterial(format!(
                "Poisson ratio nu = {poisson} violates nu < 1/2 (incompressible limit excluded)"
            )));
        }
        Ok(Self { shear, poisson })
    }

    /// Default demonstration material (G = 1, nu = 1/4).
    pub fn demo() -> Self {
        Self::new(1.0, 0.25).expect("demo material is in range")
    }

    pub fn shear_modulus(&self) -> f64 {
        self.shear
    }

    pub fn poisson_ratio(&self) -> f64 {
        self.poisson
    }

    /// Lame constants (lambda, mu): lambda = 2 G nu / (1 - 2 nu), mu = G.
    pub fn lame_constants(&self) -> (f64, f64) {
        let lambda = 2.0 * self.shear * self.poisson / (1.0 - 2.0 * self.poisson);
        (lambda, self.shear)
    }

    /// Inverse constitutive law on the reduced cylindrical representation:
    /// E = (1/2G) (S - nu/(1+nu) tr(S) I). The shear pair maps to
    /// E_zr = sigma4 / (2G).
    pub fn strain_from_stress(&self, s: &CylindricalStress) -> StrainComponents {
        let trace = s.sigma1 + s.sigma2 + s.sigma3;
        let iso = self.poisson / (1.0 + self.poisson) * trace;
        let inv2g = 1.0 / (2.0 * self.shear);
        StrainComponents {
            e_zz: inv2g * (s.sigma1 - iso),
            e_rr: inv2g * (s.sigma2 - iso),
            e_phiphi: inv2g * (s.sigma3 - iso),
            e_zr: inv2g * s.sigma4,
        }
    }

    /// Inverse constitutive law on a full Cartesian stress tensor.
    pub fn strain_from_stress_tensor(&self, s: &Matrix3<f64>) -> Matrix3<f64> {
        let iso = self.poisson / (1.0 + self.poisson) * s.trace();
        (s - Matrix3::identity() * iso) / (2.0 * self.shear)
    }

    /// Forward isotropic law S = 2 G E + lambda tr(E) I.
    pub fn stress_from_strain_tensor(&self, e: &Matrix3<f64>) -> Matrix3<f64> {
        let (lambda, mu) = self.lame_constants();
        e * (2.0 * mu) + Matrix3::identity() * (lambda * e.trace())
    }
}
