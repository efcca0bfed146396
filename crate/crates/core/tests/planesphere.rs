use casimir_core::materials::DielectricModel;
use casimir_core::pfa::pfa_plane_sphere;
use casimir_core::planesphere::{
    analytic_l1_perf, free_energy_only_ps, free_energy_ps, translation_round_trip, PlaneSphereSpec,
};
use casimir_core::ThermalSpec;

fn perfect(l: f64, r: f64, th: ThermalSpec) -> PlaneSphereSpec {
    PlaneSphereSpec::symmetric(l, r, DielectricModel::PerfectMirror, th)
}

#[test]
fn every_m_block_lowers_the_energy() {
    for model in [DielectricModel::PerfectMirror, DielectricModel::plasma(9.0).unwrap(), DielectricModel::drude(9.0, 0.035).unwrap()] {
        let s = PlaneSphereSpec::symmetric(200.0, 1000.0, model, ThermalSpec::zero()).with_ell_max(20);
        for m in [0, 1, 2, 5, 10, 20] {
            for xi in [1e-3, 0.05, 0.5, 2.0] {
                let v = translation_round_trip(m, xi, &s).unwrap().ln_det().unwrap();
                assert!(v <= 0.0, "m = {m}, ξ = {xi}: {v}");
            }
        }
    }
}

#[test]
fn truncation_error_shrinks_with_ell_max() {
    let base = perfect(500.0, 1000.0, ThermalSpec::zero());
    let e = |l: usize| free_energy_only_ps(&base.clone().with_ell_max(l)).unwrap();
    let values: Vec<f64> = (1..=6).map(|i| e(5 * i)).collect();
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for w in diffs.windows(2) {
        assert!(w[1] < w[0], "{diffs:?}");
    }
    // more multipoles, more attraction
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn required_ell_max_scales_like_inverse_distance() {
    let needed = |x: f64| {
        let base = perfect(x * 1000.0, 1000.0, ThermalSpec::zero());
        let reference = free_energy_only_ps(&base.clone().with_ell_max((24.0 / x) as usize)).unwrap();
        (2..)
            .map(|i| 2 * i)
            .find(|&l| {
                let v = free_energy_only_ps(&base.clone().with_ell_max(l)).unwrap();
                (v / reference - 1.0).abs() < 1e-3
            })
            .unwrap()
    };
    let (l1, l2) = (needed(1.0), needed(0.5));
    let l3 = needed(0.25);
    assert!(l2 as f64 <= 2.0 * l1 as f64 + 4.0, "{l1} {l2}");
    assert!(l3 as f64 <= 2.0 * l2 as f64 + 4.0, "{l2} {l3}");
    assert!(l3 > l1);
}

#[test]
fn force_and_gradient_are_derivatives() {
    let th = ThermalSpec::new(300.0).unwrap();
    let base = perfect(500.0, 1000.0, th).with_ell_max(30);
    let l = base.length;
    let h = 1e-4 * l;
    let at = |x: f64| free_energy_ps(&base.with_length(x)).unwrap();
    let (lo, mid, hi) = (at(l - h), at(l), at(l + h));
    let fd_force = -(hi.free_energy - lo.free_energy) / (2.0 * h);
    let fd_grad = -(hi.force - lo.force) / (2.0 * h);
    assert!((fd_force / mid.force - 1.0).abs() < 1e-5, "{fd_force} vs {}", mid.force);
    assert!((fd_grad / mid.gradient - 1.0).abs() < 1e-5, "{fd_grad} vs {}", mid.gradient);
}

#[test]
fn pfa_overestimates_for_perfect_mirrors() {
    let th = ThermalSpec::zero();
    for x in [0.15, 0.3, 0.6, 1.0] {
        let s = perfect(x * 1000.0, 1000.0, th);
        let r = free_energy_ps(&s).unwrap();
        let p = pfa_plane_sphere(s.length, s.radius, &s.plate, &s.sphere, &th).unwrap();
        for (name, a, b) in [("E", r.free_energy, p.energy), ("F", r.force, p.force), ("G", r.gradient, p.gradient)] {
            let rho = a / b;
            assert!(rho > 0.0 && rho < 1.0, "x = {x}: ρ_{name} = {rho}");
        }
    }
}

#[test]
fn dipole_limit_at_large_distance() {
    let th = ThermalSpec::new(300.0).unwrap();
    for x in [10.0, 20.0] {
        let s = perfect(x * 100.0, 100.0, th).with_ell_max(10);
        let full = free_energy_ps(&s).unwrap().free_energy;
        let dipole = analytic_l1_perf(s.center_distance(), 100.0, 300.0);
        assert!((full / dipole - 1.0).abs() < 0.02, "L/R = {x}: {}", full / dipole);
    }
}

#[test]
fn plasma_drude_force_ratio_stays_below_three_halves() {
    let th = ThermalSpec::new(300.0).unwrap();
    let pl = DielectricModel::plasma(9.0).unwrap();
    let dr = DielectricModel::drude(9.0, 0.035).unwrap();
    let mut last = 0.0;
    for (l, r) in [(200.0, 100.0), (1000.0, 100.0), (3000.0, 100.0)] {
        let a = free_energy_ps(&PlaneSphereSpec::symmetric(l, r, pl.clone(), th)).unwrap().force;
        let b = free_energy_ps(&PlaneSphereSpec::symmetric(l, r, dr.clone(), th)).unwrap().force;
        let ratio = a / b;
        assert!(ratio > 1.0 && ratio <= 1.5, "L = {l}: {ratio}");
        assert!(ratio > last);
        last = ratio;
    }
}

#[test]
fn thermal_pfa_ratio_exceeds_one() {
    let m = DielectricModel::PerfectMirror;
    for l in [100.0, 1000.0, 5000.0] {
        let hot = pfa_plane_sphere(l, 1e4, &m, &m, &ThermalSpec::new(300.0).unwrap()).unwrap().force;
        let cold = pfa_plane_sphere(l, 1e4, &m, &m, &ThermalSpec::zero()).unwrap().force;
        assert!(hot / cold > 1.0);
    }
}

#[test]
fn transparent_sphere_feels_nothing() {
    let v = DielectricModel::vacuum();
    for th in [ThermalSpec::zero(), ThermalSpec::new(300.0).unwrap()] {
        let r = free_energy_ps(&PlaneSphereSpec::symmetric(100.0, 200.0, v.clone(), th)).unwrap();
        assert_eq!((r.free_energy, r.force, r.gradient), (0.0, 0.0, 0.0));
    }
}
