//! Verification suites wired to the library's residual operators, with
//! the tolerances pinned per check.

use kelvin::fields::{
    helmholtz_potentials, kelvin_displacement, kelvin_strain, kelvin_stress_with_signs,
    love_displacement, PointLoad, StressSigns,
};
use kelvin::geometry::CartesianPoint;
use kelvin::material::IsotropicElastic;
use kelvin::verify::{
    beltrami_residual, divergence_residual, navier_residual, signorini_check,
    strain_displacement_check, traction_resultant, FiniteDifferenceSpec, QuadratureSpec,
    ResidualReport,
};
use nalgebra::Vector3;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::config::RunConfig;

/// Seeded meridian points with rho in [0.5, 5], axis cone excluded.
fn meridian_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let rho = rng.random_range(0.5..5.0);
        let theta = rng.random_range(0.0..PI);
        let (z, r) = (rho * theta.cos(), rho * theta.sin());
        if r >= 0.05 * rho {
            pts.push((z, r));
        }
    }
    pts
}

fn cartesian_points(n: usize, seed: u64) -> Vec<Vector3<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let x = Vector3::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
        );
        if x.norm() > 0.3 {
            pts.push(x);
        }
    }
    pts
}

pub struct SuiteContext {
    load: PointLoad,
    material: IsotropicElastic,
    signs: StressSigns,
    config: RunConfig,
}

impl SuiteContext {
    pub fn new(config: &RunConfig) -> Result<Self, String> {
        let material = IsotropicElastic::new(config.shear, config.nu).map_err(|e| e.to_string())?;
        Ok(Self {
            load: PointLoad::along_x1(config.f),
            material,
            signs: if config.use_paper_printed_signs {
                StressSigns::PrintedVariant
            } else {
                StressSigns::Balanced
            },
            config: config.clone(),
        })
    }

    fn stress(&self) -> impl Fn(f64, f64) -> kelvin::CylindricalStress + '_ {
        move |z, r| kelvin_stress_with_signs(z, r, &self.load, &self.material, self.signs).unwrap()
    }

    /// Run one named suite.
    pub fn run(&self, suite: &str) -> Vec<ResidualReport> {
        match suite {
            "balance" => self.balance(),
            "compatibility" => self.compatibility(),
            "traction" => self.traction(),
            "signorini" => self.signorini(),
            "strain-displacement" => self.strain_displacement(),
            "navier" => self.navier(),
            "love-equivalence" => self.love_equivalence(),
            "helmholtz" => self.helmholtz(),
            "scaling" => self.scaling(),
            other => unreachable!("suite names validated earlier: {other}"),
        }
    }

    fn balance(&self) -> Vec<ResidualReport> {
        let pts = meridian_points(500, self.config.seed ^ 0x01);
        divergence_residual(
            &self.stress(),
            &pts,
            &FiniteDifferenceSpec::new(self.config.fd_step),
            1e-6,
        )
    }

    fn compatibility(&self) -> Vec<ResidualReport> {
        let pts = meridian_points(500, self.config.seed ^ 0x02);
        // Second derivatives need a wider step than the first-order checks.
        beltrami_residual(
            &self.stress(),
            &self.material,
            &pts,
            &FiniteDifferenceSpec::new(1e-4),
            1e-5,
        )
    }

    fn traction(&self) -> Vec<ResidualReport> {
        let q = QuadratureSpec::new(self.config.angular_order, self.config.radial_panels);
        let expected = Vector3::new(-self.config.f, 0.0, 0.0);
        let tol = 1e-10 * self.config.f.abs();
        self.config
            .radii
            .iter()
            .map(|&rho| match traction_resultant(&self.stress(), rho, &q) {
                Ok(resultant) => {
                    let err: Vec<f64> =
                        (0..3).map(|i| (resultant[i] - expected[i]).abs()).collect();
                    ResidualReport::from_samples(format!("traction.rho={rho}"), &err, tol)
                }
                Err(e) => ResidualReport::from_samples(
                    format!("traction.rho={rho} ({e})"),
                    &[f64::INFINITY],
                    tol,
                ),
            })
            .collect()
    }

    fn signorini(&self) -> Vec<ResidualReport> {
        let q = QuadratureSpec::new(self.config.angular_order, self.config.radial_panels);
        let scale = self.config.f.abs().max(1e-300);
        let mut out = Vec::new();
        for rho in [1.0, 2.0] {
            match signorini_check(&self.stress(), rho, &q, &self.material, 0.0) {
                Ok(identity) => {
                    let samples = [
                        identity.volume_integral.abs() / scale,
                        identity.surface_integral.abs() / scale,
                    ];
                    out.push(ResidualReport::from_samples(
                        format!("signorini.clean.rho={rho}"),
                        &samples,
                        1e-10,
                    ));
                }
                Err(e) => out.push(ResidualReport::from_samples(
                    format!("signorini.clean.rho={rho} ({e})"),
                    &[f64::INFINITY],
                    1e-10,
                )),
            }
        }
        // A trace contaminant alpha1/rho makes the volume side grow like
        // rho^2 while the surface side stays small: the mismatch rejects it.
        let c1 = signorini_check(&self.stress(), 1.0, &q, &self.material, 1.0);
        let c2 = signorini_check(&self.stress(), 2.0, &q, &self.material, 1.0);
        match (c1, c2) {
            (Ok(a), Ok(b)) => {
                let growth = b.volume_integral / a.volume_integral;
                let samples = [
                    (growth - 4.0).abs(),
                    (a.surface_integral / a.volume_integral).abs(),
                ];
                out.push(ResidualReport::from_samples(
                    "signorini.alpha1-rejection",
                    &samples,
                    1e-6,
                ));
            }
            _ => out.push(ResidualReport::from_samples(
                "signorini.alpha1-rejection (quadrature failure)",
                &[f64::INFINITY],
                1e-6,
            )),
        }
        out
    }

    fn strain_displacement(&self) -> Vec<ResidualReport> {
        let pts = meridian_points(500, self.config.seed ^ 0x03);
        let disp = |z: f64, r: f64| kelvin_displacement(z, r, &self.load, &self.material).unwrap();
        let strain = |z: f64, r: f64| kelvin_strain(z, r, &self.load, &self.material).unwrap();
        strain_displacement_check(
            &disp,
            &strain,
            &pts,
            &FiniteDifferenceSpec::new(self.config.fd_step),
            1e-5,
            1e-4,
        )
    }

    fn navier(&self) -> Vec<ResidualReport> {
        let pts = cartesian_points(200, self.config.seed ^ 0x04);
        let u = |x: Vector3<f64>| {
            love_displacement(CartesianPoint::from_vector(x), &self.load, &self.material).unwrap()
        };
        vec![navier_residual(
            &u,
            &self.material,
            &pts,
            &FiniteDifferenceSpec::new(1e-4),
            1e-4,
        )]
    }

    fn love_equivalence(&self) -> Vec<ResidualReport> {
        let pts = cartesian_points(1000, self.config.seed ^ 0x05);
        let frame = self.load.frame();
        let samples: Vec<f64> = pts
            .iter()
            .map(|&x| {
                let p = CartesianPoint::from_vector(x);
                let cyl = self.load.cylindrical_of(p);
                let love = love_displacement(p, &self.load, &self.material).unwrap();
                let merid = kelvin_displacement(cyl.z, cyl.r, &self.load, &self.material).unwrap();
                let rebuilt = frame.e1 * merid.u_z + frame.h_at(cyl.phi) * merid.u_r;
                (love - rebuilt).norm() / love.norm().max(1e-300)
            })
            .collect();
        vec![ResidualReport::from_samples(
            "love-equivalence.displacement",
            &samples,
            1e-12,
        )]
    }

    fn helmholtz(&self) -> Vec<ResidualReport> {
        let phi = |x: Vector3<f64>| {
            helmholtz_potentials(CartesianPoint::from_vector(x), &self.load, &self.material)
                .unwrap()
                .phi_pot
        };
        let w = |x: Vector3<f64>| {
            helmholtz_potentials(CartesianPoint::from_vector(x), &self.load, &self.material)
                .unwrap()
                .w_pot
        };

        let pts = cartesian_points(100, self.config.seed ^ 0x06);
        let mut reconstruction = Vec::with_capacity(pts.len());
        for &x in &pts {
            let h = self.config.fd_step * x.norm();
            let mut grad_phi = Vector3::zeros();
            for j in 0..3 {
                let mut ej = Vector3::zeros();
                ej[j] = h;
                grad_phi[j] = (phi(x + ej) - phi(x - ej)) / (2.0 * h);
            }
            let dw = |j: usize, k: usize| {
                let mut ek = Vector3::zeros();
                ek[k] = h;
                (w(x + ek)[j] - w(x - ek)[j]) / (2.0 * h)
            };
            let curl_w = Vector3::new(
                dw(2, 1) - dw(1, 2),
                dw(0, 2) - dw(2, 0),
                dw(1, 0) - dw(0, 1),
            );
            let love =
                love_displacement(CartesianPoint::from_vector(x), &self.load, &self.material)
                    .unwrap();
            reconstruction.push((grad_phi + curl_w - love).norm() / love.norm().max(1e-300));
        }

        let div_pts = cartesian_points(20, self.config.seed ^ 0x07);
        let mut divergence = Vec::with_capacity(div_pts.len());
        for &x in &div_pts {
            let h = self.config.fd_step * x.norm();
            let mut div = 0.0;
            for j in 0..3 {
                let mut ej = Vector3::zeros();
                ej[j] = h;
                div += (w(x + ej)[j] - w(x - ej)[j]) / (2.0 * h);
            }
            let scale = w(x).norm().max(1e-300) / x.norm();
            divergence.push(div.abs() / scale);
        }

        vec![
            ResidualReport::from_samples("helmholtz.reconstruction", &reconstruction, 1e-5),
            ResidualReport::from_samples("helmholtz.divergence-free", &divergence, 1e-6),
        ]
    }

    fn scaling(&self) -> Vec<ResidualReport> {
        let pts = meridian_points(200, self.config.seed ^ 0x08);
        let mut homogeneity = Vec::new();
        for &(z, r) in &pts {
            let s = kelvin_stress_with_signs(z, r, &self.load, &self.material, self.signs).unwrap();
            let u = kelvin_displacement(z, r, &self.load, &self.material).unwrap();
            for lambda in [0.5, 2.0, 10.0] {
                let s2 = kelvin_stress_with_signs(
                    lambda * z,
                    lambda * r,
                    &self.load,
                    &self.material,
                    self.signs,
                )
                .unwrap();
                let u2 = kelvin_displacement(lambda * z, lambda * r, &self.load, &self.material)
                    .unwrap();
                let l2 = lambda * lambda;
                let s_scale = s.norm().max(1e-300);
                let u_scale = (u.u_z.abs() + u.u_r.abs()).max(1e-300);
                homogeneity.push((s2.sigma1 - s.sigma1 / l2).abs() / s_scale);
                homogeneity.push((s2.sigma2 - s.sigma2 / l2).abs() / s_scale);
                homogeneity.push((s2.sigma3 - s.sigma3 / l2).abs() / s_scale);
                homogeneity.push((s2.sigma4 - s.sigma4 / l2).abs() / s_scale);
                homogeneity.push((u2.u_z - u.u_z / lambda).abs() / u_scale);
                homogeneity.push((u2.u_r - u.u_r / lambda).abs() / u_scale);
            }
        }

        // u_r(z, r -> 0+) -> 0: the decay dominates 1e-(k-2) |f/G|.
        let decay_scale = (self.config.f / self.config.shear).abs().max(1e-300);
        let mut axis = Vec::new();
        for k in 3..=8 {
            let r = 10f64.powi(-k);
            let u = kelvin_displacement(1.0, r, &self.load, &self.material).unwrap();
            axis.push(u.u_r.abs() / (10f64.powi(-(k - 2)) * decay_scale));
        }

        vec![
            ResidualReport::from_samples("scaling.homogeneity", &homogeneity, 1e-12),
            ResidualReport::from_samples("scaling.axis-decay", &axis, 1.0),
        ]
    }
}
