//! Residual operators and integral identities that certify a candidate
//! elastic state.
//!
//! Every check reports residuals relative to a local field scale (the
//! stress or displacement norm at the evaluation point), because the
//! fields decay like rho^-2 and absolute numbers are meaningless across
//! scales. Derivative checks carry the extra rho or rho^2 factor needed to
//! make the comparison dimensionless.
//!
//! The suite is deliberately sensitive enough to discriminate between the
//! balanced sign layout of [`crate::fields::kelvin_stress`] and the
//! [`crate::fields::StressSigns::PrintedVariant`] layout: the latter fails
//! the divergence residual by orders of magnitude.

use nalgebra::{Matrix3, Vector3};

use crate::error::{KelvinError, Result};
use crate::fields::{CylindricalStress, Displacement, StrainComponents};
use crate::geometry::{cyl_stress_to_tensor, FrameBasis};
use crate::material::IsotropicElastic;
use crate::numerics::{self, GaussLegendre};

/// Central second-order finite differencing, with the step scaled by the
/// distance rho of the evaluation point from the load.
#[derive(Debug, Clone, Copy)]
pub struct FiniteDifferenceSpec {
    pub step_relative: f64,
}

impl Default for FiniteDifferenceSpec {
    fn default() -> Self {
        Self {
            step_relative: 1e-5,
        }
    }
}

impl FiniteDifferenceSpec {
    pub fn new(step_relative: f64) -> Self {
        // A relative step of 1/2 or more would difference across the
        // singularity at the load point.
        assert!(
            step_relative > 0.0 && step_relative < 0.5,
            "finite-difference step must lie in (0, 0.5), got {step_relative}"
        );
        Self { step_relative }
    }

    pub fn step_at(&self, z: f64, r: f64) -> f64 {
        self.step_relative * z.hypot(r)
    }
}

/// Quadrature orders for the integral identities.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Gauss-Legendre node count for angular integrals.
    pub angular_order: usize,
    /// Gauss-Legendre node count for the radial direction of volume
    /// integrals.
    pub radial_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            angular_order: 32,
            radial_panels: 64,
        }
    }
}

impl QuadratureSpec {
    pub fn new(angular_order: usize, radial_panels: usize) -> Self {
        assert!(
            angular_order >= 4 && radial_panels >= 4,
            "quadrature orders must be >= 4"
        );
        Self {
            angular_order,
            radial_panels,
        }
    }
}

/// Outcome of one residual check over a set of evaluation points.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub name: String,
    pub points: usize,
    pub max_residual: f64,
    pub rms_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn from_samples(name: impl Into<String>, samples: &[f64], tolerance: f64) -> Self {
        let max = samples.iter().cloned().fold(0.0_f64, f64::max);
        let rms = if samples.is_empty() {
            0.0
        } else {
            (samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64).sqrt()
        };
        Self {
            name: name.into(),
            points: samples.len(),
            max_residual: max,
            rms_residual: rms,
            tolerance,
            pass: max <= tolerance,
        }
    }
}

/// Balance residuals of a meridian stress field, by central differences.
///
/// Reports three normalized residuals: the two meridian balance equations
///
/// ```text
/// r sigma1,z + (r sigma4),r = 0
/// r sigma4,z + (r sigma2),r - sigma3 = 0
/// ```
///
/// each divided by the local stress norm, and the Cartesian Div S
/// (multiplied by rho to make it dimensionless against the stress norm).
/// The Cartesian form also covers axis points; the meridian forms expect
/// r > 0 sampling.
pub fn divergence_residual<F>(
    field: &F,
    points: &[(f64, f64)],
    fd: &FiniteDifferenceSpec,
    tolerance: f64,
) -> Vec<ResidualReport>
where
    F: Fn(f64, f64) -> CylindricalStress,
{
    let s1 = |z: f64, r: f64| field(z, r).sigma1;
    let s3 = |z: f64, r: f64| field(z, r).sigma3;
    let s4 = |z: f64, r: f64| field(z, r).sigma4;
    let rs2 = |z: f64, r: f64| r * field(z, r).sigma2;
    let rs4 = |z: f64, r: f64| r * field(z, r).sigma4;

    let mut axial = Vec::with_capacity(points.len());
    let mut radial = Vec::with_capacity(points.len());
    let mut cartesian = Vec::with_capacity(points.len());
    let frame = FrameBasis::standard();

    for (i, &(z, r)) in points.iter().enumerate() {
        let rho = z.hypot(r);
        let h = fd.step_at(z, r);
        let scale = field(z, r).norm().max(1e-300);

        let res_axial = r * numerics::d_z(&s1, z, r, h) + numerics::d_r(&rs4, z, r, h);
        let res_radial = r * numerics::d_z(&s4, z, r, h) + numerics::d_r(&rs2, z, r, h) - s3(z, r);
        axial.push(res_axial.abs() / scale);
        radial.push(res_radial.abs() / scale);

        // Cartesian divergence at a deterministic azimuth per point.
        let phi = 2.399963229728653 * i as f64; // golden-angle sweep
        let x = Vector3::new(z, r * phi.cos(), r * phi.sin());
        let tensor = |p: Vector3<f64>| -> Matrix3<f64> {
            let zz = p.x;
            let rr = p.y.hypot(p.z);
            let az = p.z.atan2(p.y);
            cyl_stress_to_tensor(&field(zz, rr), az, &frame)
        };
        let mut div: Vector3<f64> = Vector3::zeros();
        for j in 0..3 {
            let mut ej = Vector3::zeros();
            ej[j] = h;
            let tp = tensor(x + ej);
            let tm = tensor(x - ej);
            for row in 0..3 {
                div[row] += (tp[(row, j)] - tm[(row, j)]) / (2.0 * h);
            }
        }
        cartesian.push(div.norm() * rho / scale);
    }

    vec![
        ResidualReport::from_samples("balance.meridian-axial", &axial, tolerance),
        ResidualReport::from_samples("balance.meridian-radial", &radial, tolerance),
        ResidualReport::from_samples("balance.cartesian-div", &cartesian, tolerance),
    ]
}

/// Compatibility residuals: the four scalar equations
///
/// ```text
/// Lap sigma1 + alpha,zz                            = 0
/// Lap sigma2 - 2 (sigma2 - sigma3)/r^2 + alpha,rr  = 0
/// Lap sigma3 + 2 (sigma2 - sigma3)/r^2 + alpha,r/r = 0
/// Lap sigma4 - sigma4/r^2 + alpha,zr               = 0
/// ```
///
/// with alpha = tr(S)/(1 + nu), plus harmonicity of the trace itself. All
/// residuals are normalized by the local stress norm divided by rho^2 (the
/// natural second-derivative scale).
pub fn beltrami_residual<F>(
    field: &F,
    m: &IsotropicElastic,
    points: &[(f64, f64)],
    fd: &FiniteDifferenceSpec,
    tolerance: f64,
) -> Vec<ResidualReport>
where
    F: Fn(f64, f64) -> CylindricalStress,
{
    let s1 = |z: f64, r: f64| field(z, r).sigma1;
    let s2 = |z: f64, r: f64| field(z, r).sigma2;
    let s3 = |z: f64, r: f64| field(z, r).sigma3;
    let s4 = |z: f64, r: f64| field(z, r).sigma4;
    let alpha = |z: f64, r: f64| field(z, r).trace() / (1.0 + m.poisson_ratio());
    let trace = |z: f64, r: f64| field(z, r).trace();

    let mut res: Vec<Vec<f64>> = (0..5).map(|_| Vec::with_capacity(points.len())).collect();
    for &(z, r) in points {
        let rho2 = z * z + r * r;
        let h = fd.step_at(z, r);
        let s = field(z, r);
        let scale = s.norm().max(1e-300) / rho2;

        let c1 = numerics::laplacian_meridian(&s1, z, r, h) + numerics::d_zz(&alpha, z, r, h);
        let c2 = numerics::laplacian_meridian(&s2, z, r, h) - 2.0 * (s.sigma2 - s.sigma3) / (r * r)
            + numerics::d_rr(&alpha, z, r, h);
        let c3 = numerics::laplacian_meridian(&s3, z, r, h)
            + 2.0 * (s.sigma2 - s.sigma3) / (r * r)
            + numerics::d_r(&alpha, z, r, h) / r;
        let c4 = numerics::laplacian_meridian(&s4, z, r, h) - s.sigma4 / (r * r)
            + numerics::d_zr(&alpha, z, r, h);
        let harm = numerics::laplacian_meridian(&trace, z, r, h);

        res[0].push(c1.abs() / scale);
        res[1].push(c2.abs() / scale);
        res[2].push(c3.abs() / scale);
        res[3].push(c4.abs() / scale);
        res[4].push(harm.abs() / scale);
    }

    vec![
        ResidualReport::from_samples("compatibility.zz", &res[0], tolerance),
        ResidualReport::from_samples("compatibility.rr", &res[1], tolerance),
        ResidualReport::from_samples("compatibility.phiphi", &res[2], tolerance),
        ResidualReport::from_samples("compatibility.zr", &res[3], tolerance),
        ResidualReport::from_samples("compatibility.trace-harmonic", &res[4], tolerance),
    ]
}

/// Resultant of the tractions S n over the sphere of radius `rho` centered
/// at the load point, in global Cartesian components (load axis = x1).
///
/// For the Kelvin state this equals -f e1 for every radius.
pub fn traction_resultant<F>(field: &F, rho: f64, q: &QuadratureSpec) -> Result<Vector3<f64>>
where
    F: Fn(f64, f64) -> CylindricalStress,
{
    assert!(rho > 0.0, "sphere radius must be positive");
    let frame = FrameBasis::standard();
    let gl = GaussLegendre::new(q.angular_order);
    let n_phi = (2 * q.angular_order).max(8);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;

    let integrand = |theta: f64| -> Vec<f64> {
        let z = rho * theta.cos();
        let r = rho * theta.sin();
        let s = field(z, r);
        let t_e1 = theta.cos() * s.sigma1 + theta.sin() * s.sigma4;
        let t_h = theta.sin() * s.sigma2 + theta.cos() * s.sigma4;
        // Uniform nodes on the periodic azimuth are spectrally accurate.
        let mut acc = Vector3::zeros();
        for kphi in 0..n_phi {
            let phi = dphi * kphi as f64;
            acc += (frame.e1 * t_e1 + frame.h_at(phi) * t_h) * dphi;
        }
        acc *= rho * rho * theta.sin();
        vec![acc.x, acc.y, acc.z]
    };

    let v = gl.integrate_vec(0.0, std::f64::consts::PI, 3, integrand);
    let out = Vector3::new(v[0], v[1], v[2]);
    if !out.iter().all(|c| c.is_finite()) {
        return Err(KelvinError::QuadratureFailure {
            context: "traction resultant",
        });
    }
    Ok(out)
}

/// Two sides of the trace identity over the ball of radius rho:
///
/// ```text
/// integral_B tr(S) dv = integral_dB rho n . S n da
/// ```
///
/// (the trace of the moment identity for balanced stress fields, with
/// w = x).
#[derive(Debug, Clone, Copy)]
pub struct TraceIdentity {
    pub volume_integral: f64,
    pub surface_integral: f64,
    pub difference: f64,
}

/// Evaluate both sides of the trace identity.
///
/// `alpha1` optionally contaminates the trace in the volume integrand with
/// the harmonic candidate term (1 + nu) alpha1 / s. For the true state
/// both sides vanish by parity; a nonzero contaminant makes the volume
/// side grow like rho^2 while the surface side stays O(rho), which is
/// exactly the argument that rejects that term from the trace ansatz.
///
/// The radial integrand is s^2 tr(S), so the rho^-2 singularity of the
/// trace is cancelled analytically and plain Gauss-Legendre suffices.
pub fn signorini_check<F>(
    field: &F,
    rho: f64,
    q: &QuadratureSpec,
    m: &IsotropicElastic,
    alpha1: f64,
) -> Result<TraceIdentity>
where
    F: Fn(f64, f64) -> CylindricalStress,
{
    assert!(rho > 0.0, "ball radius must be positive");
    let gl_theta = GaussLegendre::new(q.angular_order);
    let gl_s = GaussLegendre::new(q.radial_panels);
    let two_pi = 2.0 * std::f64::consts::PI;
    let one_plus_nu = 1.0 + m.poisson_ratio();

    let volume = two_pi
        * gl_s.integrate(0.0, rho, |s| {
            gl_theta.integrate(0.0, std::f64::consts::PI, |theta| {
                let tr = field(s * theta.cos(), s * theta.sin()).trace() + one_plus_nu * alpha1 / s;
                s * s * tr * theta.sin()
            })
        });

    let surface = two_pi
        * rho.powi(3)
        * gl_theta.integrate(0.0, std::f64::consts::PI, |theta| {
            let s = field(rho * theta.cos(), rho * theta.sin());
            let (c, sn) = (theta.cos(), theta.sin());
            let n_dot_sn = c * c * s.sigma1 + sn * sn * s.sigma2 + 2.0 * sn * c * s.sigma4;
            n_dot_sn * sn
        });

    if !(volume.is_finite() && surface.is_finite()) {
        return Err(KelvinError::QuadratureFailure {
            context: "trace identity",
        });
    }
    Ok(TraceIdentity {
        volume_integral: volume,
        surface_integral: surface,
        difference: volume - surface,
    })
}

/// Check that a strain field is the symmetric gradient of a displacement
/// field, component by component, plus the hoop consistency relation
/// E_rr = (r E_phiphi),r and the zz component of curl curl E.
pub fn strain_displacement_check<D, E>(
    displacement: &D,
    strain: &E,
    points: &[(f64, f64)],
    fd: &FiniteDifferenceSpec,
    tolerance_first: f64,
    tolerance_second: f64,
) -> Vec<ResidualReport>
where
    D: Fn(f64, f64) -> Displacement,
    E: Fn(f64, f64) -> StrainComponents,
{
    let uz = |z: f64, r: f64| displacement(z, r).u_z;
    let ur = |z: f64, r: f64| displacement(z, r).u_r;
    let e_phiphi = |z: f64, r: f64| strain(z, r).e_phiphi;
    let e_rr = |z: f64, r: f64| strain(z, r).e_rr;
    let r_e_phiphi = |z: f64, r: f64| r * strain(z, r).e_phiphi;

    let mut res: Vec<Vec<f64>> = (0..6).map(|_| Vec::with_capacity(points.len())).collect();
    for &(z, r) in points {
        let rho2 = z * z + r * r;
        let h = fd.step_at(z, r);
        let e = strain(z, r);
        let u = displacement(z, r);
        let scale = e.norm().max(1e-300);

        res[0].push((numerics::d_z(&uz, z, r, h) - e.e_zz).abs() / scale);
        res[1].push((numerics::d_r(&ur, z, r, h) - e.e_rr).abs() / scale);
        res[2].push((u.u_r / r - e.e_phiphi).abs() / scale);
        let shear = 0.5 * (numerics::d_r(&uz, z, r, h) + numerics::d_z(&ur, z, r, h));
        res[3].push((shear - e.e_zr).abs() / scale);
        res[4].push((numerics::d_r(&r_e_phiphi, z, r, h) - e.e_rr).abs() / scale);

        // (curl curl E)_zz = E_rr,r / r - E_phiphi,rr - 2 E_phiphi,r / r.
        let curlcurl = numerics::d_r(&e_rr, z, r, h) / r
            - numerics::d_rr(&e_phiphi, z, r, h)
            - 2.0 * numerics::d_r(&e_phiphi, z, r, h) / r;
        res[5].push(curlcurl.abs() / (scale / rho2));
    }

    vec![
        ResidualReport::from_samples("strain-displacement.zz", &res[0], tolerance_first),
        ResidualReport::from_samples("strain-displacement.rr", &res[1], tolerance_first),
        ResidualReport::from_samples("strain-displacement.phiphi", &res[2], tolerance_first),
        ResidualReport::from_samples("strain-displacement.zr", &res[3], tolerance_first),
        ResidualReport::from_samples(
            "strain-displacement.hoop-consistency",
            &res[4],
            tolerance_first,
        ),
        ResidualReport::from_samples("strain-displacement.curlcurl-zz", &res[5], tolerance_second),
    ]
}

/// Residual of the displacement-form equilibrium equations
/// (lambda + mu) grad(div u) + mu Lap(u) = 0 away from the load point,
/// for a Cartesian displacement field, by nested central differences.
pub fn navier_residual<U>(
    displacement: &U,
    m: &IsotropicElastic,
    points: &[Vector3<f64>],
    fd: &FiniteDifferenceSpec,
    tolerance: f64,
) -> ResidualReport
where
    U: Fn(Vector3<f64>) -> Vector3<f64>,
{
    let (lambda, mu) = m.lame_constants();
    let div_u = |x: Vector3<f64>, h: f64| -> f64 {
        let mut d = 0.0;
        for j in 0..3 {
            let mut ej = Vector3::zeros();
            ej[j] = h;
            d += (displacement(x + ej)[j] - displacement(x - ej)[j]) / (2.0 * h);
        }
        d
    };

    let mut samples = Vec::with_capacity(points.len());
    for &x in points {
        let rho = x.norm();
        let h = fd.step_relative * rho;
        let u0 = displacement(x);
        let scale = u0.norm().max(1e-300) * mu / (rho * rho);

        let mut lap = Vector3::zeros();
        let mut grad_div = Vector3::zeros();
        for j in 0..3 {
            let mut ej = Vector3::zeros();
            ej[j] = h;
            lap += (displacement(x + ej) - u0 * 2.0 + displacement(x - ej)) / (h * h);
            grad_div[j] = (div_u(x + ej, h) - div_u(x - ej, h)) / (2.0 * h);
        }
        let residual = grad_div * (lambda + mu) + lap * mu;
        samples.push(residual.norm() / scale);
    }
    ResidualReport::from_samples("navier.displacement-equilibrium", &samples, tolerance)
}

/// Measured order of convergence of a step-dependent residual: runs the
/// residual at `h` and `h/2` and returns log2 of the ratio. A clean
/// second-order scheme measures close to 2.
pub fn convergence_order<R: Fn(f64) -> f64>(residual_at: R, h: f64) -> f64 {
    let r1 = residual_at(h);
    let r2 = residual_at(0.5 * h);
    (r1 / r2).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{
        kelvin_displacement, kelvin_strain, kelvin_stress, kelvin_stress_with_signs,
        love_displacement, PointLoad, StressSigns,
    };
    use crate::geometry::CartesianPoint;
    use std::f64::consts::PI;

    fn demo() -> (PointLoad, IsotropicElastic) {
        (PointLoad::along_x1(1.0), IsotropicElastic::demo())
    }

    /// Deterministic meridian sample points with rho in [0.5, 5] and the
    /// axis cone r < 0.05 rho excluded.
    fn meridian_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
        let mut state = seed;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut pts = Vec::with_capacity(n);
        while pts.len() < n {
            let rho = 0.5 + 4.5 * next();
            let theta = PI * next();
            let (z, r) = (rho * theta.cos(), rho * theta.sin());
            if r >= 0.05 * rho {
                pts.push((z, r));
            }
        }
        pts
    }

    #[test]
    fn divergence_residual_passes_on_balanced_field() {
        let (load, m) = demo();
        let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
        let pts = meridian_points(500, 42);
        let reports = divergence_residual(&field, &pts, &FiniteDifferenceSpec::default(), 1e-6);
        for rep in &reports {
            assert!(rep.pass, "{} max {}", rep.name, rep.max_residual);
        }
    }

    #[test]
    fn divergence_residual_zero_for_uniform_field() {
        let uniform = |_z: f64, _r: f64| CylindricalStress {
            sigma1: 2.0,
            sigma2: 2.0,
            sigma3: 2.0,
            sigma4: 0.0,
        };
        let pts = meridian_points(50, 7);
        let reports = divergence_residual(&uniform, &pts, &FiniteDifferenceSpec::default(), 1e-10);
        // The radial equation keeps (r sigma2),r - sigma3 = sigma2 - sigma3 = 0;
        // only differencing roundoff remains.
        for rep in &reports {
            assert!(
                rep.max_residual < 1e-10,
                "{} = {}",
                rep.name,
                rep.max_residual
            );
        }
    }

    #[test]
    fn divergence_residual_fails_on_printed_variant() {
        let (load, m) = demo();
        let field = |z: f64, r: f64| {
            kelvin_stress_with_signs(z, r, &load, &m, StressSigns::PrintedVariant).unwrap()
        };
        let pts = meridian_points(500, 42);
        let reports = divergence_residual(&field, &pts, &FiniteDifferenceSpec::default(), 1e-6);
        let worst = reports
            .iter()
            .map(|r| r.max_residual)
            .fold(0.0_f64, f64::max);
        assert!(worst > 1e-2, "printed variant should fail, worst {worst}");
        assert!(reports.iter().any(|r| !r.pass));
    }

    #[test]
    fn beltrami_residual_passes_on_kelvin_field() {
        let (load, m) = demo();
        let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
        let pts = meridian_points(500, 11);
        let reports = beltrami_residual(&field, &m, &pts, &FiniteDifferenceSpec::new(1e-4), 1e-5);
        for rep in &reports {
            assert!(rep.pass, "{} max {}", rep.name, rep.max_residual);
        }
    }

    #[test]
    fn beltrami_distinguishes_pure_gauge_contamination() {
        // Adding +c/r^2 to sigma2 and -c/r^2 to sigma3 preserves the sum
        // constraint but breaks compatibility.
        let (load, m) = demo();
        let field = |z: f64, r: f64| {
            let mut s = kelvin_stress(z, r, &load, &m).unwrap();
            s.sigma2 += 0.05 / (r * r);
            s.sigma3 -= 0.05 / (r * r);
            s
        };
        let pts = meridian_points(100, 13);
        let reports = beltrami_residual(&field, &m, &pts, &FiniteDifferenceSpec::new(1e-4), 1e-5);
        assert!(reports.iter().any(|r| !r.pass));
    }

    #[test]
    fn trace_harmonicity_of_known_harmonic() {
        let f = |z: f64, r: f64| -0.3 * z / (z * z + r * r).powf(1.5);
        for &(z, r) in meridian_points(100, 3).iter() {
            let lap = numerics::laplacian_meridian(&f, z, r, 1e-4 * z.hypot(r));
            assert!(lap.abs() < 1e-6);
        }
    }

    #[test]
    fn traction_resultant_balances_load() {
        let (load, m) = demo();
        let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
        let q = QuadratureSpec::default();
        for rho in [0.5, 1.0, 2.0, 10.0] {
            let res = traction_resultant(&field, rho, &q).unwrap();
            assert!((res.x + 1.0).abs() < 1e-10, "axial at rho {rho}: {}", res.x);
            assert!(
                res.y.abs() < 1e-12 && res.z.abs() < 1e-12,
                "transverse at rho {rho}"
            );
        }
    }

    #[test]
    fn traction_resultant_radius_spread() {
        let (load, m) = demo();
        let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
        let q = QuadratureSpec::default();
        let values: Vec<f64> = [0.1, 1.0, 10.0]
            .iter()
            .map(|&rho| traction_resultant(&field, rho, &q).unwrap().x)
            .collect();
        let spread = values.iter().cloned().fold(f64::MIN, f64::max)
            - values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-10, "spread {spread}");
    }

    #[test]
    fn traction_quadrature_converged_beyond_order_16() {
        let (load, m) = demo();
        let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
        let at = |order: usize| {
            traction_resultant(&field, 1.0, &QuadratureSpec::new(order, 8))
                .unwrap()
                .x
        };
        assert!((at(16) - at(32)).abs() < 1e-12);
        assert!((at(32) - at(64)).abs() < 1e-12);
    }

    #[test]
    fn signorini_both_sides_vanish_for_kelvin() {
        let (load, m) = demo();
        let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
        let check = signorini_check(&field, 1.0, &QuadratureSpec::default(), &m, 0.0).unwrap();
        assert!(
            check.volume_integral.abs() < 1e-10,
            "volume {}",
            check.volume_integral
        );
        assert!(
            check.surface_integral.abs() < 1e-10,
            "surface {}",
            check.surface_integral
        );
    }

    #[test]
    fn signorini_rejects_trace_contaminant() {
        let (load, m) = demo();
        let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
        let q = QuadratureSpec::default();
        for rho in [1.0, 2.0] {
            let check = signorini_check(&field, rho, &q, &m, 1.0).unwrap();
            // Volume side = 2 pi (1 + nu) rho^2 for alpha1 = 1.
            let expected = 2.0 * PI * (1.0 + m.poisson_ratio()) * rho * rho;
            assert!(
                (check.volume_integral - expected).abs() < 1e-8 * expected,
                "volume {} vs {expected}",
                check.volume_integral
            );
            assert!(check.surface_integral.abs() < 1e-9);
            assert!(check.difference.abs() > 1.0, "mismatch must be detected");
        }
    }

    #[test]
    fn signorini_zero_field() {
        let m = IsotropicElastic::demo();
        let zero = |_z: f64, _r: f64| CylindricalStress::ZERO;
        let check = signorini_check(&zero, 1.0, &QuadratureSpec::default(), &m, 0.0).unwrap();
        assert_eq!(check.volume_integral, 0.0);
        assert_eq!(check.surface_integral, 0.0);
        assert_eq!(check.difference, 0.0);
    }

    #[test]
    fn strain_displacement_consistency_of_kelvin_fields() {
        let (load, m) = demo();
        let disp = |z: f64, r: f64| kelvin_displacement(z, r, &load, &m).unwrap();
        let strain = |z: f64, r: f64| kelvin_strain(z, r, &load, &m).unwrap();
        let pts = meridian_points(500, 21);
        let reports = strain_displacement_check(
            &disp,
            &strain,
            &pts,
            &FiniteDifferenceSpec::default(),
            1e-5,
            1e-4,
        );
        for rep in &reports {
            assert!(rep.pass, "{} max {}", rep.name, rep.max_residual);
        }
    }

    #[test]
    fn strain_displacement_gauge_invariance() {
        // A rigid translation along the axis leaves the strain checks
        // untouched.
        let (load, m) = demo();
        let disp = |z: f64, r: f64| {
            let mut u = kelvin_displacement(z, r, &load, &m).unwrap();
            u.u_z += 17.0;
            u
        };
        let strain = |z: f64, r: f64| kelvin_strain(z, r, &load, &m).unwrap();
        let pts = meridian_points(100, 23);
        let reports = strain_displacement_check(
            &disp,
            &strain,
            &pts,
            &FiniteDifferenceSpec::default(),
            1e-5,
            1e-4,
        );
        for rep in &reports {
            assert!(rep.pass, "{} max {}", rep.name, rep.max_residual);
        }
    }

    #[test]
    fn navier_residual_of_kelvin_displacement() {
        let (load, m) = demo();
        let u =
            |x: Vector3<f64>| love_displacement(CartesianPoint::from_vector(x), &load, &m).unwrap();
        let mut pts = Vec::new();
        for (z, r) in meridian_points(200, 31) {
            pts.push(Vector3::new(z, r, 0.1 * z));
        }
        let report = navier_residual(&u, &m, &pts, &FiniteDifferenceSpec::new(1e-4), 1e-4);
        assert!(report.pass, "max {}", report.max_residual);
    }

    #[test]
    fn navier_residual_zero_for_linear_field() {
        let m = IsotropicElastic::demo();
        let u = |x: Vector3<f64>| Vector3::new(0.3 * x.y, -0.1 * x.x + 0.2 * x.z, 0.7 * x.x);
        let pts = vec![Vector3::new(1.0, 0.5, -0.2), Vector3::new(-0.4, 1.1, 0.9)];
        // A wide step keeps second-difference roundoff below the threshold;
        // the truncation error is zero for a linear field at any step.
        let report = navier_residual(&u, &m, &pts, &FiniteDifferenceSpec::new(1e-3), 1e-9);
        assert!(report.pass, "max {}", report.max_residual);
    }

    #[test]
    fn navier_residual_zero_for_gradient_of_inverse_distance() {
        // u = grad(1/rho) is harmonic and divergence-free, so both terms
        // vanish identically.
        let m = IsotropicElastic::new(2.0, 0.3).unwrap();
        let u = |x: Vector3<f64>| -x / x.norm().powi(3);
        let pts = vec![
            Vector3::new(1.0, 0.3, -0.5),
            Vector3::new(-0.8, 1.4, 0.2),
            Vector3::new(0.5, -0.5, 1.5),
        ];
        let report = navier_residual(&u, &m, &pts, &FiniteDifferenceSpec::new(1e-4), 1e-6);
        assert!(report.pass, "max {}", report.max_residual);
    }

    #[test]
    fn fd_convergence_order_is_two() {
        let (load, m) = demo();
        let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
        let pts = meridian_points(100, 77);
        let residual_at = |h: f64| {
            divergence_residual(&field, &pts, &FiniteDifferenceSpec::new(h), 1.0)
                .iter()
                .map(|r| r.max_residual)
                .fold(0.0_f64, f64::max)
        };
        let order = convergence_order(residual_at, 1e-2);
        assert!(order >= 1.9, "measured order {order}");
    }
}
