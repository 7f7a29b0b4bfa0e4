mod common;

use resp_dde::scan::{critical_curve_family, max_real_part_table, stability_surface, Axis, Sweep};
use resp_dde::spectrum::{characteristic_roots, max_real_part, Branch};
use resp_dde::Execution;

use common::{DEFAULT_MAX_RE, EQUILIBRIA, MAX_RE_CELLS};

#[test]
fn default_table_rows() {
    for &(tau, v) in &DEFAULT_MAX_RE {
        let got = max_real_part(0.5, 0.8, tau).unwrap();
        assert!((got - v).abs() < 1e-5, "tau {tau}: {got} vs {v}");
    }
}

#[test]
fn every_block_cell_and_certification() {
    let mut taus: Vec<f64> = MAX_RE_CELLS.iter().map(|c| c.2).collect();
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let t = max_real_part_table(
        &[0.3, 0.6, 0.9],
        &[0.3, 0.6, 0.9],
        &taus,
        Execution::Parallel,
    )
    .unwrap();
    assert!(t.failures.is_empty());
    for &(a, b, tau, v) in &MAX_RE_CELLS {
        let got = t.get(a, b, tau).unwrap();
        assert!((got - v).abs() < 1e-5, "({a},{b},{tau}): {got} vs {v}");
    }
    assert!(t.rows.iter().all(|r| r.certified));
}

#[test]
fn rightmost_root_is_the_hopf_pair_near_criticality() {
    let res = characteristic_roots(0.5, 0.8, 31.0, 6).unwrap();
    assert!(res.rightmost().im.abs() > 0.05 && res.rightmost().im.abs() < 0.08);
    // a real root near -0.042 is closest to the origin, the Hopf pair follows
    let smallest = res.smallest_modulus(3);
    assert_eq!(smallest[0].im, 0.0);
    assert!(smallest[0].re < 0.0);
    assert_eq!(smallest[1], smallest[2].conj());
    assert_eq!(smallest[1], res.rightmost());
}

#[test]
fn surface_and_curves_agree_with_table_delays() {
    let surface = stability_surface(
        Axis::new(0.3, 0.9, 3),
        Axis::new(0.3, 0.9, 3),
        Execution::Parallel,
    )
    .unwrap();
    for &(a, b, _, _, tau) in &EQUILIBRIA {
        let p = surface.get(a, b).unwrap();
        assert!((p.tau_star - tau).abs() < 2e-2);
        assert!(p.residual < 1e-9);
    }
    assert!(surface.decreasing_in_alpha());
    let fine = stability_surface(
        Axis::new(0.1, 1.0, 10),
        Axis::new(0.1, 1.0, 10),
        Execution::Parallel,
    )
    .unwrap();
    assert!(fine.failures.is_empty() && fine.decreasing_in_alpha());

    let curves = critical_curve_family(
        Sweep::Alpha(0.5),
        Axis::new(0.1, 1.0, 10),
        2,
        Execution::Parallel,
    )
    .unwrap();
    for p in curves
        .points
        .iter()
        .filter(|p| p.branch == Branch::Plus && p.n == 0)
    {
        let s = stability_surface(
            Axis::new(0.5, 0.6, 2),
            Axis::new(p.param, p.param + 0.1, 2),
            Execution::Sequential,
        )
        .unwrap();
        assert!((s.get(0.5, p.param).unwrap().tau_star - p.tau).abs() < 1e-12);
    }
    assert!(curves.ordering_violations.is_empty());
}
