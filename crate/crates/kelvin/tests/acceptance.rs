//! Acceptance suite: one test (and one printed pass/fail line) per
//! criterion, each pinned to its stated tolerance.
//!
//! Run with `cargo test -p kelvin --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use kelvin::derivation::{
    load_balance_constant, path_integral_sigma4, recover_sigma4, solve_tau1_ode, solve_tau4_ode,
    solve_trace_ode, symmetry_closure, DerivationConstants, PathSpec,
};
use kelvin::fields::{
    helmholtz_potentials, kelvin_displacement, kelvin_strain, kelvin_stress,
    kelvin_stress_with_signs, love_displacement, trace_potential, PointLoad, StressSigns,
};
use kelvin::geometry::CartesianPoint;
use kelvin::material::IsotropicElastic;
use kelvin::nuclei::dilatation_center;
use kelvin::verify::{
    beltrami_residual, convergence_order, divergence_residual, signorini_check, traction_resultant,
    FiniteDifferenceSpec, QuadratureSpec,
};
use nalgebra::Vector3;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn demo() -> (PointLoad, IsotropicElastic) {
    (PointLoad::along_x1(1.0), IsotropicElastic::demo())
}

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion} ({name}): {detail}");
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

/// Seeded meridian points with rho in [0.5, 5] and the axis cone excluded.
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

#[test]
fn criterion_1_derivation_constants() {
    // The pipeline reproduces alpha0 = -f/(4 pi (1-nu)) and
    // beta0 = -f (1-2nu)/(8 pi (1-nu)) to 1e-8 relative across the
    // Poisson range.
    let tau1 = solve_tau1_ode(1.0).unwrap();
    let tau4 = solve_tau4_ode(1.0).unwrap();
    let relation = load_balance_constant(&tau1, &tau4, 32).unwrap();
    let f = 1.0;
    let mut worst = 0.0_f64;
    for &nu in &[-0.5, 0.0, 0.2, 0.25, 0.3, 0.49] {
        let got = symmetry_closure(f, nu, &relation).unwrap();
        let want = DerivationConstants::closed_form(f, nu);
        let ea = (got.alpha0 - want.alpha0).abs() / want.alpha0.abs();
        let scale_b = want.beta0.abs().max(want.alpha0.abs());
        let eb = (got.beta0 - want.beta0).abs() / scale_b;
        worst = worst.max(ea).max(eb);
    }
    report(
        1,
        "derivation constants",
        worst < 1e-8,
        &format!("max relative error {worst:.3e} (tolerance 1e-8) over nu sweep"),
    );
}

#[test]
fn criterion_2_traction_balance() {
    let (load, m) = demo();
    let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
    let q = QuadratureSpec::default();
    let mut worst = 0.0_f64;
    for rho in [0.5, 1.0, 2.0, 10.0] {
        let resultant = traction_resultant(&field, rho, &q).unwrap();
        let expected = Vector3::new(-1.0, 0.0, 0.0);
        for i in 0..3 {
            worst = worst.max((resultant[i] - expected[i]).abs());
        }
    }
    report(
        2,
        "traction balance",
        worst < 1e-10,
        &format!(
            "max component error {worst:.3e} over spheres rho = 0.5, 1, 2, 10 (tolerance 1e-10)"
        ),
    );
}

#[test]
fn criterion_3_balance_residual_and_fd_order() {
    let (load, m) = demo();
    let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
    let pts = meridian_points(500, 303);
    let reports = divergence_residual(&field, &pts, &FiniteDifferenceSpec::new(1e-5), 1e-6);
    let worst = reports
        .iter()
        .map(|r| r.max_residual)
        .fold(0.0_f64, f64::max);

    let order_pts = meridian_points(100, 304);
    let residual_at = |h: f64| {
        divergence_residual(&field, &order_pts, &FiniteDifferenceSpec::new(h), 1.0)
            .iter()
            .map(|r| r.max_residual)
            .fold(0.0_f64, f64::max)
    };
    let order = convergence_order(residual_at, 1e-2);

    report(
        3,
        "balance residual",
        worst < 1e-6 && order >= 1.9,
        &format!("max residual {worst:.3e} (tolerance 1e-6), measured FD order {order:.3}"),
    );
}

#[test]
fn criterion_4_compatibility_residuals() {
    let (load, m) = demo();
    let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
    let pts = meridian_points(500, 404);
    let reports = beltrami_residual(&field, &m, &pts, &FiniteDifferenceSpec::new(1e-4), 1e-5);
    let worst = reports
        .iter()
        .map(|r| r.max_residual)
        .fold(0.0_f64, f64::max);
    let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    report(
        4,
        "compatibility",
        worst < 1e-5,
        &format!(
            "max residual {worst:.3e} over {} (tolerance 1e-5)",
            names.join(", ")
        ),
    );
}

#[test]
fn criterion_5_oracle_equivalence() {
    let (load, m) = demo();
    let frame = load.frame();
    let mut rng = ChaCha8Rng::seed_from_u64(505);

    // Stress-first displacement vs the classical formula, 1000 points.
    let mut love_err = 0.0_f64;
    let mut count = 0;
    while count < 1000 {
        let p = CartesianPoint::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
        );
        if p.to_vector().norm() < 0.05 {
            continue;
        }
        count += 1;
        let cyl = load.cylindrical_of(p);
        let love = love_displacement(p, &load, &m).unwrap();
        let merid = kelvin_displacement(cyl.z, cyl.r, &load, &m).unwrap();
        let rebuilt = frame.e1 * merid.u_z + frame.h_at(cyl.phi) * merid.u_r;
        love_err = love_err.max((love - rebuilt).norm() / love.norm().max(1e-300));
    }

    // Helmholtz reconstruction grad(phi) + curl(w) by finite differences.
    let phi = |x: Vector3<f64>| {
        helmholtz_potentials(CartesianPoint::from_vector(x), &load, &m)
            .unwrap()
            .phi_pot
    };
    let w = |x: Vector3<f64>| {
        helmholtz_potentials(CartesianPoint::from_vector(x), &load, &m)
            .unwrap()
            .w_pot
    };
    let mut helm_err = 0.0_f64;
    let mut count = 0;
    while count < 100 {
        let x = Vector3::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        );
        if x.norm() < 0.3 {
            continue;
        }
        count += 1;
        let h = 1e-5 * x.norm();
        let mut grad_phi = Vector3::zeros();
        let mut curl_w = Vector3::zeros();
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
        curl_w[0] = dw(2, 1) - dw(1, 2);
        curl_w[1] = dw(0, 2) - dw(2, 0);
        curl_w[2] = dw(1, 0) - dw(0, 1);
        let rebuilt = grad_phi + curl_w;
        let love = love_displacement(CartesianPoint::from_vector(x), &load, &m).unwrap();
        helm_err = helm_err.max((rebuilt - love).norm() / love.norm().max(1e-300));
    }

    report(
        5,
        "oracle equivalence",
        love_err < 1e-12 && helm_err < 1e-5,
        &format!(
            "classical-formula mismatch {love_err:.3e} (tolerance 1e-12), Helmholtz reconstruction {helm_err:.3e} (tolerance 1e-5)"
        ),
    );
}

#[test]
fn criterion_6_ode_rederivation_and_path_integral() {
    let alpha0 = -1.0 / (3.0 * PI); // closed-form amplitude at f = 1, nu = 1/4
    let trace = solve_trace_ode().unwrap();
    let tau1 = solve_tau1_ode(alpha0).unwrap();
    let tau4 = solve_tau4_ode(alpha0).unwrap();

    let mut profile_err = 0.0_f64;
    for i in 0..1000 {
        let t = 1e-4 + (PI - 2e-4) * i as f64 / 999.0;
        profile_err = profile_err.max((trace.profile.value_at(t) - t.cos()).abs());
        profile_err =
            profile_err.max((tau1.particular.value_at(t) - 1.5 * alpha0 * t.cos().powi(3)).abs());
        profile_err = profile_err
            .max((tau4.particular.value_at(t) - 1.5 * alpha0 * t.cos().powi(2) * t.sin()).abs());
        profile_err = profile_err.max((tau1.homogeneous.value_at(t) - t.cos()).abs());
        profile_err = profile_err.max((tau4.homogeneous.value_at(t) - t.sin()).abs());
    }

    // Path-integral recovery of the shear from the other components.
    let (load, m) = demo();
    let s1 = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap().sigma1;
    let s2 = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap().sigma2;
    let s3 = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap().sigma3;
    let mut path_err = 0.0_f64;
    for &(z, r) in &[(1.0, 1.0), (0.7, 0.4), (-1.1, 0.9)] {
        let got = recover_sigma4(z, r, &s1, &s2, &s3, 1e-5, 1e-12, 1e-6).unwrap();
        let want = kelvin_stress(z, r, &load, &m).unwrap().sigma4;
        path_err = path_err.max((got - want).abs() / want.abs());
    }
    let direct = recover_sigma4(1.0, 1.0, &s1, &s2, &s3, 1e-5, 1e-12, 1e-6).unwrap();
    let detour = PathSpec::new(vec![(1e-6, 0.0), (2.5, 0.0), (2.5, 1.0), (1.0, 1.0)]);
    let via = path_integral_sigma4(&detour, &s1, &s2, &s3, 1e-5, 1e-12).unwrap();
    let independence = (direct - via).abs() / direct.abs();

    report(
        6,
        "ODE re-derivation and path integral",
        profile_err < 1e-8 && path_err < 1e-6 && independence < 1e-6,
        &format!(
            "profile max error {profile_err:.3e} (tolerance 1e-8), sigma4 recovery error {path_err:.3e} and path spread {independence:.3e} (tolerance 1e-6)"
        ),
    );
}

#[test]
fn criterion_7_sign_discrimination() {
    let (load, m) = demo();
    let pts = meridian_points(500, 707);
    let fd = FiniteDifferenceSpec::new(1e-5);

    let printed = |z: f64, r: f64| {
        kelvin_stress_with_signs(z, r, &load, &m, StressSigns::PrintedVariant).unwrap()
    };
    let printed_worst = divergence_residual(&printed, &pts, &fd, 1e-6)
        .iter()
        .map(|r| r.max_residual)
        .fold(0.0_f64, f64::max);

    let balanced = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
    let balanced_worst = divergence_residual(&balanced, &pts, &fd, 1e-6)
        .iter()
        .map(|r| r.max_residual)
        .fold(0.0_f64, f64::max);

    report(
        7,
        "sign discrimination",
        printed_worst > 1e-2 && balanced_worst < 1e-6,
        &format!(
            "printed-variant residual {printed_worst:.3e} (must exceed 1e-2), balanced residual {balanced_worst:.3e} (must stay below 1e-6)"
        ),
    );
}

#[test]
fn criterion_8_scaling_symmetry_and_trace_identity() {
    let (load, m) = demo();
    let mut rng = ChaCha8Rng::seed_from_u64(808);

    // Homogeneity to 1e-12 for lambda in {0.5, 2, 10}.
    let mut scale_err = 0.0_f64;
    for _ in 0..200 {
        let rho = rng.random_range(0.2..2.0);
        let theta = rng.random_range(0.05..PI - 0.05);
        let (z, r) = (rho * theta.cos(), rho * theta.sin());
        let s = kelvin_stress(z, r, &load, &m).unwrap();
        let u = kelvin_displacement(z, r, &load, &m).unwrap();
        for lambda in [0.5, 2.0, 10.0] {
            let s2 = kelvin_stress(lambda * z, lambda * r, &load, &m).unwrap();
            let u2 = kelvin_displacement(lambda * z, lambda * r, &load, &m).unwrap();
            scale_err = scale_err
                .max((s2.sigma1 - s.sigma1 / (lambda * lambda)).abs() / s.norm())
                .max((s2.sigma4 - s.sigma4 / (lambda * lambda)).abs() / s.norm())
                .max((u2.u_z - u.u_z / lambda).abs() / u.u_z.abs())
                .max((u2.u_r - u.u_r / lambda).abs() / u.u_z.abs());
        }
    }

    // Axis condition u_r -> 0.
    let mut axis_ok = true;
    for k in 3..=8 {
        let r = 10f64.powi(-k);
        let u = kelvin_displacement(1.0, r, &load, &m).unwrap();
        axis_ok &= u.u_r.abs() < 10f64.powi(-(k - 2));
    }

    // Two-sided trace identity and the contaminant rejection.
    let field = |z: f64, r: f64| kelvin_stress(z, r, &load, &m).unwrap();
    let q = QuadratureSpec::default();
    let clean = signorini_check(&field, 1.0, &q, &m, 0.0).unwrap();
    let contaminated_1 = signorini_check(&field, 1.0, &q, &m, 1.0).unwrap();
    let contaminated_2 = signorini_check(&field, 2.0, &q, &m, 1.0).unwrap();
    let clean_ok = clean.volume_integral.abs() < 1e-10 && clean.surface_integral.abs() < 1e-10;
    // Volume side grows like rho^2 while the surface side stays near zero.
    let growth = contaminated_2.volume_integral / contaminated_1.volume_integral;
    let reject_ok = contaminated_1.difference.abs() > 1.0 && (growth - 4.0).abs() < 1e-6;

    report(
        8,
        "scaling, symmetry, trace identity",
        scale_err < 1e-12 && axis_ok && clean_ok && reject_ok,
        &format!(
            "homogeneity error {scale_err:.3e} (tolerance 1e-12), axis decay {axis_ok}, clean identity {clean_ok}, contaminant volume growth {growth:.6} (want 4)"
        ),
    );
}

#[test]
fn criterion_9_dilatation_center() {
    let m = IsotropicElastic::demo();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut angle_worst = 0.0_f64;
    let mut law_worst = 0.0_f64;
    for _ in 0..20 {
        let dir = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
        .normalize();
        let near = dilatation_center(dir * 1.0, 1.0, &m).unwrap();
        let far = dilatation_center(dir * 10.0, 1.0, &m).unwrap();
        angle_worst = angle_worst.max(near.normalize().cross(&dir).norm());
        law_worst = law_worst.max((near.norm() / far.norm() / 100.0 - 1.0).abs());
    }
    report(
        9,
        "dilatation center",
        angle_worst < 1e-6 && law_worst < 1e-4,
        &format!(
            "radial deviation {angle_worst:.3e} rad (tolerance 1e-6), inverse-square law deviation {law_worst:.3e} over one decade (tolerance 1e-4)"
        ),
    );
}
