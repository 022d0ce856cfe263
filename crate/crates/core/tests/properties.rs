mod support;

use proptest::prelude::*;
use trio_formation::analysis::residuals::{
    back_substitution_coefficients_d, coefficients_equilibrium, coefficients_moving, difference_residual,
    evaluate_eq18_gap, iso_equilibrium_residuals, iso_moving_residuals, quadratic_branch_y_d,
    vector_equation_residual, Branch,
};
use trio_formation::analysis::{cubic_f_roots, gain_certificate, solve_reduced_cubic_positive, threshold_distance};
use trio_formation::control::{link_velocity, team_velocity};
use trio_formation::geometry::{errors, links, signed_area, signed_area_det, TeamConfiguration};
use trio_formation::{FormationSpec, Gains, Vec2};

use support::*;

fn point() -> impl Strategy<Value = Vec2> {
    (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

fn config() -> impl Strategy<Value = TeamConfiguration> {
    (point(), point(), point())
        .prop_map(|(a, b, c)| TeamConfiguration::new(a, b, c))
        .prop_filter("separated", |p| p.min_pairwise_distance() > 0.5)
}

fn spec() -> impl Strategy<Value = FormationSpec> {
    (1.0..20.0f64, 1.0..20.0f64, 1.0..179.0f64).prop_map(|(a, b, t)| FormationSpec::from_degrees(a, b, t).unwrap())
}

fn gains() -> impl Strategy<Value = Gains> {
    (0.1..10.0f64, 0.5..100.0f64, 0.05..20.0f64).prop_map(|(kd, kb, ka)| Gains::new(kd, kb, ka).unwrap())
}

/// Rest configuration with `d12 = x ℓ12`, `d13 = y ℓ13` and R1 at `origin`.
fn rest_config(x: f64, y: f64, s: &FormationSpec, origin: Vec2) -> TeamConfiguration {
    TeamConfiguration::new(
        origin,
        origin + s.g12_star() * (x * s.d12_star()),
        origin + s.g13_star() * (y * s.d13_star()),
    )
}

/// Flipped configuration: `g12 = -g13*`, `g13 = -g12*`.
fn flipped_config(x: f64, y: f64, s: &FormationSpec) -> TeamConfiguration {
    TeamConfiguration::new(
        Vec2::ZERO,
        -s.g13_star() * (x * s.d12_star()),
        -s.g12_star() * (y * s.d13_star()),
    )
}

/// `(sin θ* V_x - cos θ* V_y, V_y)`.
fn project(v: Vec2, theta: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [s * v.x - c * v.y, v.y]
}

fn close(a: f64, b: f64, rtol: f64, scale: f64) -> bool {
    (a - b).abs() <= rtol * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn signed_area_forms_agree(p in config()) {
        let a = signed_area(&p);
        let b = signed_area_det(&p);
        prop_assert!(close(a, b, 1e-12, a.abs()));
        let z = links(&p);
        prop_assert!(close(z.signed_area(), a, 1e-12, a.abs()));
    }

    #[test]
    fn links_close_the_loop(p in config()) {
        let z = links(&p);
        prop_assert!((z.z12 + z.z23 - z.z13).norm() <= 1e-12 * z.z13.norm().max(1.0));
    }

    #[test]
    fn velocities_are_translation_invariant(p in config(), s in spec(), g in gains(), v in point()) {
        let a = team_velocity(&p, &s, &g).unwrap();
        let b = team_velocity(&p.translated(v), &s, &g).unwrap();
        for i in 0..3 {
            prop_assert!((a[i] - b[i]).norm() <= 1e-9 * a[i].norm().max(1.0));
        }
        let ea = errors(&p, &s).unwrap().norm();
        let eb = errors(&p.translated(v), &s).unwrap().norm();
        prop_assert!(close(ea, eb, 1e-9, ea));
    }

    #[test]
    fn link_dynamics_match_team_dynamics(p in config(), s in spec(), g in gains()) {
        let v = team_velocity(&p, &s, &g).unwrap();
        let zd = link_velocity(&links(&p), &s, &g).unwrap();
        let scale = v.iter().map(|w| w.norm()).fold(1.0, f64::max);
        prop_assert!((zd.z12 - (v[1] - v[0])).norm() <= 1e-12 * scale);
        prop_assert!((zd.z13 - (v[2] - v[0])).norm() <= 1e-12 * scale);
        prop_assert!((zd.z23 - (v[2] - v[1])).norm() <= 1e-12 * scale);
    }

    #[test]
    fn r1_descends_its_potential(p in config(), s in spec(), g in gains()) {
        let v1 = team_velocity(&p, &s, &g).unwrap()[0];
        let grad = fd_gradient(|q| r1_potential(q, p.p[1], p.p[2], &s, &g), p.p[0]);
        prop_assert!(rel_err(-grad, v1) <= 1e-5, "fd {:?} vs {:?}", -grad, v1);
    }

    #[test]
    fn the_target_triangle_is_at_rest(s in spec(), g in gains(), o in point()) {
        let p = rest_config(1.0, 1.0, &s, o);
        let v = team_velocity(&p, &s, &g).unwrap();
        let scale = s.d12_star().max(s.d13_star()).powi(3);
        for w in v {
            prop_assert!(w.norm() <= 1e-9 * scale);
        }
        prop_assert!(errors(&p, &s).unwrap().norm() <= 1e-9 * scale);
    }

    #[test]
    fn rest_coefficients_match_the_closed_loop(x in 0.05..4.0f64, y in 0.05..4.0f64, s in spec(), g in gains()) {
        let p = rest_config(x, y, &s, Vec2::ZERO);
        let v = team_velocity(&p, &s, &g).unwrap();
        prop_assert!(v[1].norm() <= 1e-9 && v[2].norm() <= 1e-9);
        let oracle = project(v[0] / g.kd(), s.theta_star());
        let res = vector_equation_residual(&coefficients_equilibrium(x, y, &s, &g), s.theta_star());
        let scale = (x.max(y) * s.d12_star().max(s.d13_star())).powi(3) * (1.0 + g.r_ad());
        for i in 0..2 {
            prop_assert!(close(res[i], oracle[i], 1e-10, scale), "{res:?} vs {oracle:?}");
        }
    }

    #[test]
    fn moving_coefficients_match_the_closed_loop(x in 0.05..4.0f64, y in 0.05..4.0f64, s in spec(), g in gains()) {
        let p = flipped_config(x, y, &s);
        let v = team_velocity(&p, &s, &g).unwrap();
        let w = (s.g12_star() + s.g13_star()) * g.kb();
        prop_assert!((v[1] - w).norm() <= 1e-9 * g.kb() && (v[2] - w).norm() <= 1e-9 * g.kb());
        let oracle = project((w - v[0]) / g.kd(), s.theta_star());
        let res = vector_equation_residual(&coefficients_moving(x, y, &s, &g), s.theta_star());
        let scale = (x.max(y) * s.d12_star().max(s.d13_star())).powi(3) * (1.0 + g.r_ad()) + g.r_bd();
        for i in 0..2 {
            prop_assert!(close(res[i], oracle[i], 1e-10, scale), "{res:?} vs {oracle:?}");
        }
    }

    #[test]
    fn isosceles_residuals_are_scaled_vector_residuals(
        x in 0.05..4.0f64, y in 0.05..4.0f64, ell in 1.0..20.0f64, th in 1.0..179.0f64, g in gains()
    ) {
        let s = FormationSpec::isosceles_deg(ell, th).unwrap();
        let t = s.theta_star();
        let k = ell.powi(3) * t.sin();
        let scale = (x.max(y) * ell).powi(3) * (1.0 + g.r_ad()) + g.r_bd();

        let vec_eq = vector_equation_residual(&coefficients_equilibrium(x, y, &s, &g), t);
        let iso_eq = iso_equilibrium_residuals(x, y, g.r_ad(), t);
        prop_assert!(close(vec_eq[0], k * iso_eq[0], 1e-10, scale));
        prop_assert!(close(vec_eq[1], k * iso_eq[1], 1e-10, scale));

        // the flipped frame swaps the roles of the two legs
        let vec_mv = vector_equation_residual(&coefficients_moving(x, y, &s, &g), t);
        let iso_mv = iso_moving_residuals(x, y, ell, g.r_bd(), g.r_ad(), t);
        prop_assert!(close(vec_mv[0], t.sin() * iso_mv[1], 1e-10, scale));
        prop_assert!(close(vec_mv[1], t.sin() * iso_mv[0], 1e-10, scale));
    }

    #[test]
    fn isosceles_residuals_swap_with_the_legs(x in 0.05..4.0f64, y in 0.05..4.0f64, r in 0.01..50.0f64, th in 1.0..179.0f64) {
        let t = th.to_radians();
        let a = iso_equilibrium_residuals(x, y, r, t);
        let b = iso_equilibrium_residuals(y, x, r, t);
        prop_assert!(close(a[0], b[1], 1e-12, a[0].abs()) && close(a[1], b[0], 1e-12, a[1].abs()));
        let a = iso_moving_residuals(x, y, 7.0, 16.0, r, t);
        let b = iso_moving_residuals(y, x, 7.0, 16.0, r, t);
        prop_assert!(close(a[0], b[1], 1e-12, a[0].abs()) && close(a[1], b[0], 1e-12, a[1].abs()));
    }

    #[test]
    fn difference_residual_is_the_divided_difference(
        x in 0.05..4.0f64, y in 0.05..4.0f64, r in 0.01..50.0f64, th in 1.0..179.0f64, ell in 1.0..20.0f64
    ) {
        prop_assume!((x - y).abs() > 1e-3);
        let t = th.to_radians();
        let e = iso_equilibrium_residuals(x, y, r, t);
        let want = (e[0] - e[1]) / (x - y);
        let got = difference_residual(x, y, r, t, Branch::Equilibrium);
        let scale = (x.max(y).powi(2) + 1.0) * (1.0 + r) / (x - y).abs();
        prop_assert!(close(got, want, 1e-10, scale));

        let m = iso_moving_residuals(x, y, ell, 16.0, r, t);
        let want = (m[0] - m[1]) / (ell.powi(3) * (x - y));
        let got = difference_residual(x, y, r, t, Branch::Moving);
        prop_assert!(close(got, want, 1e-10, scale));
    }

    #[test]
    fn branch_roots_solve_the_difference_equation(x in 0.05..10.0f64, dd in 0.01..100.0f64) {
        let t = 1.0f64;
        let r_ad = 2.0 * dd / (1.0 + t.cos());
        for branch in [Branch::Equilibrium, Branch::Moving] {
            if let Some(roots) = quadratic_branch_y_d(x, dd, branch).unwrap() {
                for y in [roots.y_minus, roots.y_plus] {
                    let v = difference_residual(x, y, r_ad, t, branch);
                    prop_assert!(v.abs() <= 1e-9 * (1.0 + dd) * (1.0 + x * x + y * y), "{branch:?} {v}");
                }
            }
        }
    }

    #[test]
    fn back_substitution_reproduces_the_first_residual(x in 1.01..30.0f64, dd in 0.01..200.0f64, th in 1.0..179.0f64) {
        let t = th.to_radians();
        let one_c = 1.0 + t.cos();
        let r_ad = 2.0 * dd / one_c;
        if let Some(roots) = quadratic_branch_y_d(x, dd, Branch::Equilibrium).unwrap() {
            let cubic = back_substitution_coefficients_d(x, dd, t, Branch::Equilibrium).unwrap().eval(x);
            let direct = iso_equilibrium_residuals(x, roots.y_minus, r_ad, t)[0];
            let scale = (1.0 + dd) * x.powi(3) * (1.0 + roots.y_minus.abs());
            prop_assert!(close(cubic, one_c * direct, 1e-9, scale), "{cubic} vs {direct}");
        }
        if let Some(roots) = quadratic_branch_y_d(x, dd, Branch::Moving).unwrap() {
            let cubic = back_substitution_coefficients_d(x, dd, t, Branch::Moving).unwrap().eval(x);
            // R_bd enters both residuals identically and drops out at ℓ = 1
            let direct = iso_moving_residuals(x, roots.y_plus, 1.0, 0.0, r_ad, t)[0];
            let scale = (1.0 + dd) * x.powi(3) * (1.0 + roots.y_plus.abs());
            prop_assert!(close(cubic, one_c * direct, 1e-9, scale), "{cubic} vs {direct}");
        }
    }

    #[test]
    fn feasible_gaps_equal_the_direct_residual(x in 1.01..30.0f64, dd in 3.01..1000.0f64, th in 1.0..89.0f64) {
        let t = th.to_radians();
        if let Ok(g) = evaluate_eq18_gap(x, dd, t) {
            let direct = iso_equilibrium_residuals(g.x_bar, g.y_bar, 2.0 * dd / (1.0 + t.cos()), t)[0];
            prop_assert!(close(g.gap, direct, 1e-9, dd * x.powi(3)));
            prop_assert!(g.gap > 0.0);
        }
    }

    #[test]
    fn cubic_roots_match_bisection(c in -1e3..-1e-2f64, frac in 1e-4..0.9999f64) {
        let d = frac * (-4.0 * c.powi(3) / 27.0).sqrt();
        let roots = solve_reduced_cubic_positive(c, d).unwrap();
        let (lo, hi) = cubic_positive_roots_by_bisection(c, d);
        let scale = (-c).sqrt();
        prop_assert!((roots.y_p1 - lo).abs() <= 1e-9 * scale.max(1.0));
        prop_assert!((roots.y_p2 - hi).abs() <= 1e-9 * scale.max(1.0));
        prop_assert!(roots.y_p1 <= roots.y_p2);
        prop_assert!(roots.phi_v > std::f64::consts::FRAC_PI_2 && roots.phi_v <= std::f64::consts::PI);
    }

    #[test]
    fn cubic_rejects_negative_discriminant(c in -1e3..-1e-2f64, frac in 1.001..10.0f64) {
        let d = frac * (-4.0 * c.powi(3) / 27.0).sqrt();
        prop_assert!(solve_reduced_cubic_positive(c, d).is_err());
    }

    #[test]
    fn distance_roots_bracket_the_inflection(ell in 0.1..200.0f64, r_bd in 0.01..1e3f64) {
        let d_hat = threshold_distance(r_bd).unwrap();
        match cubic_f_roots(ell, r_bd).unwrap() {
            None => prop_assert!(ell < d_hat * (1.0 + 1e-9)),
            Some(f) => {
                prop_assert!(ell >= d_hat * (1.0 - 1e-9));
                let m = 1.0 / 3f64.sqrt();
                prop_assert!(0.0 < f.r1 && f.r1 <= m + 1e-9 && m - 1e-9 <= f.r2 && f.r2 < 1.0);
                for r in [f.r1, f.r2] {
                    let z = r * ell;
                    prop_assert!((z.powi(3) - ell * ell * z + r_bd).abs() <= 1e-9 * ell.powi(3).max(r_bd));
                }
            }
        }
    }

    #[test]
    fn long_leg_certificates_are_monotone_in_the_ratio(ell in 3.5..100.0f64, th in 1.0..179.0f64, r in 0.01..50.0f64) {
        let s = FormationSpec::isosceles_deg(ell, th).unwrap();
        let lo = gain_certificate(&s, &Gains::with_area_ratio(3.0, 48.0, r).unwrap()).unwrap();
        let hi = gain_certificate(&s, &Gains::with_area_ratio(3.0, 48.0, 2.0 * r).unwrap()).unwrap();
        prop_assert!(!lo.ell_le_dhat);
        prop_assert!(!lo.satisfied || hi.satisfied);
        prop_assert_eq!(lo.satisfied, r >= lo.required_rad_lower.unwrap() * (1.0 - 1e-12));
    }

    #[test]
    fn short_leg_certificates_hold_for_any_ratio(ell in 0.1..3.46f64, th in 1.0..179.0f64, r in 0.01..100.0f64) {
        let s = FormationSpec::isosceles_deg(ell, th).unwrap();
        let c = gain_certificate(&s, &Gains::with_area_ratio(3.0, 48.0, r).unwrap()).unwrap();
        prop_assert!(c.ell_le_dhat && c.satisfied);
    }
    #[test]
    fn moving_difference_has_no_zero_inside_the_unit_square(x in 1e-3..1.0f64, y in 1e-3..1.0f64, dd in 1.0..100.0f64) {
        let t = 1.2f64;
        let r_ad = 2.0 * dd / (1.0 + t.cos());
        prop_assert!(difference_residual(x, y, r_ad, t, Branch::Moving) < 0.0);
    }

    #[test]
    fn moving_back_substitution_is_positive_for_large_d(x in 1.0..30.0f64, dd in 3.0..200.0f64, th in 1.0..179.0f64) {
        let k = back_substitution_coefficients_d(x, dd, th.to_radians(), Branch::Moving).unwrap();
        prop_assert!(k.k > 0.0 && k.l > 0.0 && k.m > 0.0 && k.n > 0.0, "{k:?}");
        prop_assert!(k.eval(x) > 0.0);
    }

    #[test]
    fn side_length_cos_theta_is_never_at_rest(th in 1.0..89.0f64, r in 0.01..50.0f64) {
        let t = th.to_radians();
        let res = iso_equilibrium_residuals(1.0, t.cos(), r, t);
        prop_assert!(res[1].abs() > 1e-12, "{res:?}");
    }
}
