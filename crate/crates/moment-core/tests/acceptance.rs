//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with its measured quantities.
//!
//! Three criteria contain clauses that transcribe source displays which do
//! not replay (they are misprints; the analysis lives in the check notes
//! and the failing checks' residuals). Those clauses are split into
//! dedicated `*_as_printed` tests so they fail visibly without masking the
//! criteria that do hold.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use proptest::test_runner::{Config, TestError, TestRunner};

use common::{apply_mutation, arb_ratio, failing_ids, mutation_sites};
use moment_core::derivation::{Context, ContextKind, Dir};
use moment_core::geomnum::{
    default_patch, discrete_variation_residual, energy, euler_curve_residual, first_variation,
    residual_grid, shoot_rotational, stationarity_residual, NumConfig,
    Perturbation, PolarCurve, Shape, SurfaceSpec,
};
use moment_core::proofscript::{run_script, run_theorem, CheckStatus, Script};
use moment_core::symkernel::{ratio_eq, solve_linear_2x2, Ratio, VarId};

fn criterion(name: &str, ok: bool, detail: &str) {
    println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

fn check_status(outcome: &moment_core::proofscript::TheoremOutcome, id: &str) -> CheckStatus {
    outcome
        .reports
        .iter()
        .find(|r| r.id == id)
        .unwrap_or_else(|| panic!("check `{id}` missing"))
        .status
}

/// Checks whose transcriptions are known not to replay; their notes and
/// residuals document the defects.
const T1_NONZERO_MISPRINTS: [&str; 2] = ["pe2_display", "E2"];
const T22_MISPRINTS: [&str; 2] = ["final2", "m4_display"];

#[test]
fn acceptance_1_symbolic_replay_k_nonzero() {
    let started = Instant::now();
    let outcome = run_theorem("t1-nonzero", None).unwrap();
    let elapsed = started.elapsed();

    for id in [
        "d7_e11",
        "d7_e12",
        "d7_e22",
        "pe1",
        "det",
        "case1_final10",
        "case1_deg10_coeffs",
        "final8",
        "final8_coeffs",
    ] {
        assert_eq!(
            check_status(&outcome, id),
            CheckStatus::Pass,
            "mandated check `{id}` must pass"
        );
    }
    let failing = failing_ids(&outcome);
    let expected_failing: BTreeSet<String> = T1_NONZERO_MISPRINTS
        .iter()
        .map(|s| s.to_string())
        .collect();
    criterion(
        "criterion 1 (K != 0 replay: closures, first identity, determinant, final polynomials)",
        failing == expected_failing && elapsed.as_secs() < 60,
        &format!(
            "{} checks, failing set {failing:?} (exactly the documented misprints), {} ms",
            outcome.reports.len(),
            elapsed.as_millis()
        ),
    );
}

#[test]
fn acceptance_1_t1_nonzero_as_printed() {
    let outcome = run_theorem("t1-nonzero", None).unwrap();
    let failing = failing_ids(&outcome);
    criterion(
        "criterion 1 strict (every check passes as printed)",
        failing.is_empty(),
        &format!(
            "the displayed second identity and the displayed solution fail to replay: {failing:?}. \
             The printed (P2, Q2, R2) are inconsistent with the e1 derivative of the first \
             identity even modulo that identity (row-space test fails on the constant term), \
             and the printed solved value of e1(k1)^2 carries a spurious factor K in its \
             denominator; see the pe2_display and E2/E2_k_factor notes in the script"
        ),
    );
}

#[test]
fn acceptance_2_symbolic_replay_flat_and_cpc() {
    let started = Instant::now();
    let zero = run_theorem("t1-zero", None).unwrap();
    let t22 = run_theorem("t22", None).unwrap();
    let elapsed = started.elapsed();

    assert!(zero.all_passed(), "t1-zero must pass entirely");
    let contradiction = zero
        .reports
        .iter()
        .find(|r| r.id == "contradiction")
        .unwrap();
    assert!(
        contradiction.message.contains("-2*k"),
        "the flat contradiction must record the residual -2 k1/|x|^2"
    );
    for id in ["E3", "E4", "t22_w", "final2_machine", "final2_machine_coeffs", "m4_machine"] {
        assert_eq!(check_status(&t22, id), CheckStatus::Pass, "`{id}` must pass");
    }
    let failing = failing_ids(&t22);
    let expected_failing: BTreeSet<String> =
        T22_MISPRINTS.iter().map(|s| s.to_string()).collect();
    criterion(
        "criterion 2 (flat and constant-principal-curvature replay)",
        failing == expected_failing && elapsed.as_secs() < 10,
        &format!(
            "t1-zero {} checks all pass; t22 failing set {failing:?} (exactly the documented \
             misprints), {} ms",
            zero.reports.len(),
            elapsed.as_millis()
        ),
    );
}

#[test]
fn acceptance_2_t22_alpha4_and_final_quadratic_as_printed() {
    let t22 = run_theorem("t22", None).unwrap();
    let failing = failing_ids(&t22);
    criterion(
        "criterion 2 strict (a = -4 branch concludes k1 - c + 1 = 0; final quadratic as printed)",
        failing.is_empty(),
        &format!(
            "the printed conclusions do not replay: {failing:?}. The a = -4 branch derivation \
             yields 8c(c-1)/((k1-c)((1-2c)k1+c)^2), forcing c(c-1) = 0 rather than \
             k1 - c + 1 = 0; and the final condition is linear in k1 \
             (k1(c(3a+8)-2) = c(a+2)(2c+1)), not the printed quadratic, whose k1^2 \
             coefficients cancel identically in T M3' - 4 M3. The machine-derived conclusions \
             pass as final2_machine and m4_machine"
        ),
    );
}

#[test]
fn acceptance_3_symbolic_replay_cmc() {
    let started = Instant::now();
    let outcome = run_theorem("t3", None).unwrap();
    let elapsed = started.elapsed();
    criterion(
        "criterion 3 (constant-mean-curvature replay)",
        outcome.all_passed() && elapsed.as_secs() < 1,
        &format!(
            "both directional derivatives reproduced exactly in {} ms",
            elapsed.as_millis()
        ),
    );
}

#[test]
fn acceptance_4_mutation_robustness() {
    let mut tested = 0;
    let mut flipped = 0;
    let mut silent: Vec<String> = Vec::new();
    for name in ["t1-zero", "t3", "t22", "t1-nonzero"] {
        let text = moment_core::proofscript::scripts::embedded(name).unwrap();
        let script: Script = serde_json::from_str(text).unwrap();
        let baseline = failing_ids(&run_script(&script));
        let sites = mutation_sites(&script, &baseline);
        // sample evenly: six sites per script
        let stride = (sites.len() / 6).max(1);
        for site in sites.iter().step_by(stride).take(6) {
            let mutated = apply_mutation(&script, site);
            let outcome = run_script(&mutated);
            let now_failing = failing_ids(&outcome);
            tested += 1;
            if now_failing.difference(&baseline).next().is_some() {
                flipped += 1;
            } else {
                silent.push(format!(
                    "{name}:{}:{}:{:?}",
                    site.check_id, site.key, site.byte_range
                ));
            }
        }
    }
    criterion(
        "criterion 4 (mutation robustness)",
        tested >= 20 && flipped == tested,
        &format!("{flipped}/{tested} single-coefficient mutations caught; silent: {silent:?}"),
    );
}

#[test]
fn acceptance_5_numeric_stationarity_classification() {
    let started = Instant::now();
    let cfg = NumConfig::default();
    let mut detail = String::new();

    let plane = SurfaceSpec::new(Shape::Plane {
        normal: [0.0, 0.0, 1.0],
        offset: 0.0,
    })
    .unwrap();
    for alpha in [-4.0, -2.0, 0.0, 1.0, 3.0] {
        let scan = residual_grid(&plane, alpha, 64, &default_patch(&plane), &cfg).unwrap();
        assert!(
            scan.max_abs_residual <= 1e-10,
            "plane at alpha {alpha}: {}",
            scan.max_abs_residual
        );
    }
    detail.push_str("plane <= 1e-10 for alpha in {-4,-2,0,1,3}; ");

    let sphere = SurfaceSpec::new(Shape::Sphere {
        center: [0.0; 3],
        radius: 1.0,
    })
    .unwrap();
    let scan = residual_grid(&sphere, -2.0, 64, &default_patch(&sphere), &cfg).unwrap();
    assert!(scan.max_abs_residual <= 1e-10, "centered sphere: {}", scan.max_abs_residual);
    detail.push_str(&format!("centered sphere {:.1e}; ", scan.max_abs_residual));

    let through = SurfaceSpec::new(Shape::Sphere {
        center: [0.0, 0.0, 1.0],
        radius: 1.0,
    })
    .unwrap();
    let scan = residual_grid(&through, -4.0, 64, &default_patch(&through), &cfg).unwrap();
    assert!(
        scan.max_abs_residual <= 1e-10,
        "origin sphere: {}",
        scan.max_abs_residual
    );
    detail.push_str(&format!("origin sphere {:.1e}; ", scan.max_abs_residual));

    // Circular cylinders are never stationary: for each exponent the grid
    // residual (max norm) stays well away from zero. The pointwise minimum
    // is not informative here because the residual changes sign across
    // |z| = sqrt(-1 - alpha) for alpha < -1.
    let cylinder = SurfaceSpec::new(Shape::Cylinder {
        axis_point: [0.0; 3],
        axis_dir: [0.0, 0.0, 1.0],
        radius: 1.0,
    })
    .unwrap();
    let mut min_over_alpha = f64::INFINITY;
    for alpha in [-4.0, -2.0, 0.0, 2.0] {
        let scan = residual_grid(&cylinder, alpha, 64, &default_patch(&cylinder), &cfg).unwrap();
        min_over_alpha = min_over_alpha.min(scan.max_abs_residual);
    }
    assert!(min_over_alpha >= 0.1, "cylinder grid residual {min_over_alpha}");
    detail.push_str(&format!("cylinder grid residual >= {min_over_alpha:.2}"));

    let elapsed = started.elapsed();
    criterion(
        "criterion 5 (numeric stationarity classification, 64x64 grids)",
        elapsed.as_secs() < 5,
        &format!("{detail}; {} ms", elapsed.as_millis()),
    );
}

#[test]
fn acceptance_6_energy_and_first_variation() {
    let cfg = NumConfig::default();
    let sphere = SurfaceSpec::new(Shape::Sphere {
        center: [0.0; 3],
        radius: 1.0,
    })
    .unwrap();
    let patch = default_patch(&sphere);
    let four_pi = 4.0 * std::f64::consts::PI;
    let mut worst_energy = 0.0_f64;
    for alpha in [-4.0, -2.0, 0.0, 1.0, 2.0] {
        let e = energy(&sphere, alpha, &patch, 32, &cfg).unwrap();
        worst_energy = worst_energy.max((e - four_pi).abs());
    }
    assert!(worst_energy <= 1e-8, "sphere energy deviation {worst_energy}");

    let mut worst_fv = 0.0_f64;
    for seed in 0..10u64 {
        let pert = Perturbation::random_smooth(seed);
        let fv = first_variation(&sphere, -2.0, &pert, 1e-4, &patch, 32, &cfg).unwrap();
        worst_fv = worst_fv.max(fv.abs());
    }
    assert!(worst_fv <= 1e-5, "critical sphere variation {worst_fv}");

    let dilation = first_variation(
        &sphere,
        -1.0,
        &Perturbation::constant(1.0),
        1e-4,
        &patch,
        32,
        &cfg,
    )
    .unwrap();
    assert!(
        (dilation - four_pi).abs() <= 1e-4,
        "dilation variation {dilation}"
    );

    criterion(
        "criterion 6 (energy quadrature and first variation)",
        true,
        &format!(
            "energy within {worst_energy:.1e} of 4 pi; 10 random variations within {worst_fv:.1e}; \
             dilation within {:.1e} of 4 pi",
            (dilation - four_pi).abs()
        ),
    );
}

#[test]
fn acceptance_7_profile_shooting() {
    let arclen = std::f64::consts::PI - 0.1;
    let deviation = |step: f64| -> f64 {
        let profile = shoot_rotational(-2.0, (0.0, -1.0, 0.0), arclen, step).unwrap();
        profile
            .samples()
            .iter()
            .map(|p| {
                let df = p.f - p.s.sin();
                let dz = p.z + p.s.cos();
                (df * df + dz * dz).sqrt()
            })
            .fold(0.0, f64::max)
    };
    let fine = deviation(1e-4);
    assert!(fine <= 1e-6, "pole-start deviation {fine}");
    // fourth order: measured in the truncation-dominated step range
    let coarse2 = deviation(2e-2);
    let coarse1 = deviation(1e-2);
    let ratio = coarse2 / coarse1;
    assert!(ratio >= 8.0, "convergence ratio {ratio}");

    // re-evaluated as a rotational surface the profile is stationary
    let cfg = NumConfig::default();
    let profile = shoot_rotational(-2.0, (0.0, -1.0, 0.0), arclen, 1e-3).unwrap();
    let (s0, s1) = profile.s_range();
    let surface = SurfaceSpec::new(Shape::Rotational { profile }).unwrap();
    let mut worst = 0.0_f64;
    for i in 1..40 {
        let s = s0 + (s1 - s0) * i as f64 / 40.0;
        let r = stationarity_residual(&surface, -2.0, s, 0.37, &cfg).unwrap();
        worst = worst.max(r.abs());
    }
    assert!(worst <= 1e-5, "re-evaluated profile residual {worst}");

    criterion(
        "criterion 7 (rotational shooting)",
        true,
        &format!(
            "circle deviation {fine:.1e} at step 1e-4; halving 2e-2 -> 1e-2 cuts the error \
             {ratio:.1}x; re-evaluated residual {worst:.1e}"
        ),
    );
}

#[test]
fn acceptance_8_planar_extremals() {
    // the residual formula is validated against the discrete oracle first
    let circle_arc = PolarCurve::new((0.0, 1.0), |_| 1.0, |_| 0.0, |_| 0.0);
    let mut worst_oracle = 0.0_f64;
    for (alpha, curve) in [
        (2.0, &circle_arc),
        (0.5, &PolarCurve::sec_power(2.0)),
        (2.0, &PolarCurve::sec_power(3.0)),
    ] {
        let margin = 0.05 * (curve.theta_range.1 - curve.theta_range.0);
        for (theta, oracle) in discrete_variation_residual(alpha, curve, 200, margin) {
            let formula = euler_curve_residual(alpha, curve, theta).unwrap();
            worst_oracle = worst_oracle.max((formula - oracle).abs() / formula.abs().max(1.0));
        }
    }
    assert!(worst_oracle <= 1e-4, "oracle deviation {worst_oracle}");

    let pointwise_max = |alpha: f64, curve: &PolarCurve, bound: f64| -> f64 {
        let mut max_abs = 0.0_f64;
        for i in 0..=200 {
            let theta = -bound + 2.0 * bound * i as f64 / 200.0;
            max_abs = max_abs.max(euler_curve_residual(alpha, curve, theta).unwrap().abs());
        }
        max_abs
    };
    let sec3 = pointwise_max(
        2.0,
        &PolarCurve::sec_power(3.0),
        std::f64::consts::FRAC_PI_6 - 0.05,
    );
    assert!(sec3 <= 1e-8, "sec3 residual {sec3}");
    // the rectangular hyperbola r^2 cos(2 theta) = 1 is stationary at
    // exponent 1 (see the strict test for the printed exponent 1/2)
    let hyperbola_at_one = pointwise_max(
        1.0,
        &PolarCurve::sec_power(2.0),
        std::f64::consts::FRAC_PI_4 - 0.05,
    );
    assert!(hyperbola_at_one <= 1e-8, "hyperbola residual {hyperbola_at_one}");

    criterion(
        "criterion 8 (planar extremals, oracle-validated residual)",
        true,
        &format!(
            "oracle agreement {worst_oracle:.1e}; sec3 residual {sec3:.1e} at exponent 2; \
             hyperbola residual {hyperbola_at_one:.1e} at exponent 1"
        ),
    );
}

#[test]
fn acceptance_8_hyperbola_at_printed_exponent() {
    let bound = std::f64::consts::FRAC_PI_4 - 0.05;
    let hyperbola = PolarCurve::sec_power(2.0);
    let mut max_abs = 0.0_f64;
    for i in 0..=200 {
        let theta = -bound + 2.0 * bound * i as f64 / 200.0;
        max_abs = max_abs.max(euler_curve_residual(0.5, &hyperbola, theta).unwrap().abs());
    }
    criterion(
        "criterion 8 strict (hyperbola at the printed exponent 1/2)",
        max_abs <= 1e-8,
        &format!(
            "the oracle-validated residual of r^2 cos(2 theta) = 1 at exponent 1/2 is \
             {max_abs:.3e}, far above 1e-8; the conserved quantity r^(a+1) cos((a+1) theta) \
             shows that curve is the extremal of exponent 1, not 1/2 (at 1 the residual \
             vanishes to 1e-8, see the main criterion-8 test)"
        ),
    );
}

#[test]
fn acceptance_9_algebra_property_suite() {
    const VARS: [VarId; 3] = [VarId::KAPPA1, VarId::GAUSS, VarId::PHI_SQ];
    const CMC_VARS: [VarId; 2] = [VarId::PHI_SQ, VarId::N_PHI];
    let cases = 1000;
    let config = Config {
        cases,
        max_shrink_iters: 0,
        ..Config::default()
    };
    let mut failures: Vec<String> = Vec::new();
    fn record<T: std::fmt::Debug>(
        failures: &mut Vec<String>,
        name: &str,
        result: Result<(), TestError<T>>,
    ) {
        if let Err(e) = result {
            failures.push(format!("{name}: {e}"));
        }
    }

    // field axioms under cross-multiplication equality
    let triple = (arb_ratio(&VARS), arb_ratio(&VARS), arb_ratio(&VARS));
    record(
        &mut failures,
        "field axioms",
        TestRunner::new(config.clone()).run(&triple, |(x, y, z)| {
            let eq = |a: &Ratio, b: &Ratio| ratio_eq(a, b).unwrap();
            assert!(eq(&x.add(&y).unwrap(), &y.add(&x).unwrap()));
            assert!(eq(&x.mul(&y).unwrap(), &y.mul(&x).unwrap()));
            assert!(eq(
                &x.add(&y).unwrap().add(&z).unwrap(),
                &x.add(&y.add(&z).unwrap()).unwrap()
            ));
            assert!(eq(
                &x.mul(&y).unwrap().mul(&z).unwrap(),
                &x.mul(&y.mul(&z).unwrap()).unwrap()
            ));
            assert!(eq(
                &x.mul(&y.add(&z).unwrap()).unwrap(),
                &x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
            ));
            if !y.is_zero() {
                assert!(eq(&x.div(&y).unwrap().mul(&y).unwrap(), &x));
            }
            Ok(())
        }),
    );

    // Leibniz and quotient rules for the context derivations
    let pair = (arb_ratio(&CMC_VARS), arb_ratio(&CMC_VARS));
    record(
        &mut failures,
        "Leibniz and quotient rules",
        TestRunner::new(config.clone()).run(&pair, |(x, y)| {
            let ctx = Context::shared(ContextKind::Cmc);
            for dir in [Dir::E1, Dir::E2] {
                let product = ctx.derive(dir, &x.mul(&y).unwrap()).unwrap();
                let leibniz = ctx
                    .derive(dir, &x)
                    .unwrap()
                    .mul(&y)
                    .unwrap()
                    .add(&x.mul(&ctx.derive(dir, &y).unwrap()).unwrap())
                    .unwrap();
                assert!(ratio_eq(&product, &leibniz).unwrap());
                if !y.is_zero() {
                    let quotient = ctx.derive(dir, &x.div(&y).unwrap()).unwrap();
                    let rule = ctx
                        .derive(dir, &x)
                        .unwrap()
                        .mul(&y)
                        .unwrap()
                        .sub(&x.mul(&ctx.derive(dir, &y).unwrap()).unwrap())
                        .unwrap()
                        .div(&y.mul(&y).unwrap())
                        .unwrap();
                    assert!(ratio_eq(&quotient, &rule).unwrap());
                }
            }
            Ok(())
        }),
    );

    // collecting coefficients reconstructs the polynomial
    record(
        &mut failures,
        "collect-reconstruct",
        TestRunner::new(config.clone()).run(&common::arb_poly(&VARS), |p| {
            let coeffs = p.collect_coefficients(VarId::KAPPA1);
            let mut acc = moment_core::symkernel::Poly::zero();
            for (i, c) in coeffs.iter().enumerate() {
                let power = moment_core::symkernel::Poly::var(VarId::KAPPA1)
                    .pow(i as u32)
                    .unwrap();
                acc = acc.add(&c.mul(&power).unwrap()).unwrap();
                if i + 1 == coeffs.len() {
                    assert!(!c.is_zero(), "leading coefficient must be non-zero");
                }
            }
            assert_eq!(acc, p);
            Ok(())
        }),
    );

    // 2x2 solutions back-substitute to zero
    let six = (
        (arb_ratio(&VARS), arb_ratio(&VARS), arb_ratio(&VARS)),
        (arb_ratio(&VARS), arb_ratio(&VARS), arb_ratio(&VARS)),
    );
    record(
        &mut failures,
        "solve back-substitution",
        TestRunner::new(config).run(&six, |((p1, q1, r1), (p2, q2, r2))| {
            match solve_linear_2x2(&p1, &q1, &r1, &p2, &q2, &r2) {
                Ok((x, y)) => {
                    for (p, q, r) in [(&p1, &q1, &r1), (&p2, &q2, &r2)] {
                        let back = p
                            .mul(&x)
                            .unwrap()
                            .add(&q.mul(&y).unwrap())
                            .unwrap()
                            .add(r)
                            .unwrap();
                        assert!(ratio_eq(&back, &Ratio::zero()).unwrap());
                    }
                }
                Err(moment_core::symkernel::SymError::SingularSystem) => {}
                Err(other) => panic!("unexpected error {other}"),
            }
            Ok(())
        }),
    );

    criterion(
        "criterion 9 (algebra property suite, 1000 cases each)",
        failures.is_empty(),
        &format!("4 suites x {cases} cases; failures: {failures:?}"),
    );
}
