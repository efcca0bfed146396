use casimir_core::materials::DielectricModel;
use casimir_core::planeplane::{energy_pp_t0, per_area, PlanePlaneSpec, Quantity};
use casimir_core::ThermalSpec;
use proptest::prelude::*;

fn force(l: f64, model: &DielectricModel, th: ThermalSpec) -> f64 {
    per_area(&PlanePlaneSpec::symmetric(l, model.clone(), th), Quantity::Force).unwrap().0
}

fn energy(l: f64, model: &DielectricModel, th: ThermalSpec) -> f64 {
    per_area(&PlanePlaneSpec::symmetric(l, model.clone(), th), Quantity::FreeEnergy).unwrap().0
}

fn any_model() -> impl Strategy<Value = DielectricModel> {
    prop_oneof![
        Just(DielectricModel::PerfectMirror),
        (1.0f64..15.0).prop_map(|w| DielectricModel::plasma(w).unwrap()),
        (1.0f64..15.0, 1e-3f64..0.5).prop_map(|(w, g)| DielectricModel::drude(w, g).unwrap()),
        Just(DielectricModel::silicon()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identical_mirrors_attract(m in any_model(), l in 10.0f64..1e4, t in prop_oneof![Just(0.0), 1.0f64..600.0]) {
        let th = if t == 0.0 { ThermalSpec::zero() } else { ThermalSpec::new(t).unwrap() };
        prop_assert!(force(l, &m, th) < 0.0);
    }

    #[test]
    fn force_magnitude_decreases_with_distance(m in any_model(), t in prop_oneof![Just(0.0), Just(300.0)]) {
        let th = if t == 0.0 { ThermalSpec::zero() } else { ThermalSpec::new(t).unwrap() };
        let mut prev = f64::INFINITY;
        for i in 0..8 {
            let l = 50.0 * 2f64.powi(i);
            let f = force(l, &m, th).abs();
            prop_assert!(f < prev, "L = {l}");
            prev = f;
        }
    }
}

#[test]
fn matsubara_sum_matches_zero_temperature_integral() {
    let m = DielectricModel::plasma(9.0).unwrap();
    let cold = energy(100.0, &m, ThermalSpec::new(1e-2).unwrap());
    let zero = energy_pp_t0(&PlanePlaneSpec::symmetric(100.0, m, ThermalSpec::zero())).unwrap();
    assert!(((cold - zero) / zero).abs() < 1e-4, "{cold} vs {zero}");
}

#[test]
fn plasma_tends_to_perfect_mirror() {
    // leading corrections are 4δ/L (energy) and 16δ/(3L) (force), δ = λ_P/2π,
    // so 10⁻³ agreement needs λ_P ≲ L/1000
    for &l in &[500.0, 2000.0] {
        let m = DielectricModel::plasma_from_wavelength(l / 1000.0).unwrap();
        for th in [ThermalSpec::zero(), ThermalSpec::new(300.0).unwrap()] {
            let p = energy(l, &m, th);
            let perfect = energy(l, &DielectricModel::PerfectMirror, th);
            assert!((p / perfect - 1.0).abs() < 1e-3, "L = {l}: {}", p / perfect);
        }
        let delta = l / 1e4 / (2.0 * std::f64::consts::PI) / l;
        let m = DielectricModel::plasma_from_wavelength(l / 1e4).unwrap();
        let th = ThermalSpec::zero();
        let de = 1.0 - energy(l, &m, th) / energy(l, &DielectricModel::PerfectMirror, th);
        let df = 1.0 - force(l, &m, th) / force(l, &DielectricModel::PerfectMirror, th);
        assert!((de / delta / 4.0 - 1.0).abs() < 1e-3, "{}", de / delta);
        assert!((df / delta / (16.0 / 3.0) - 1.0).abs() < 1e-3, "{}", df / delta);
    }
}

#[test]
fn drude_does_not_tend_to_plasma() {
    let th = ThermalSpec::new(300.0).unwrap();
    let plasma = energy(5000.0, &DielectricModel::plasma(9.0).unwrap(), th);
    let mut prev_gap = 0.0;
    for &l in &[5000.0, 10000.0] {
        let drude = energy(l, &DielectricModel::drude(9.0, 1e-6).unwrap(), th);
        let plasma_l = if l == 5000.0 { plasma } else { energy(l, &DielectricModel::plasma(9.0).unwrap(), th) };
        let gap = 1.0 - drude / plasma_l;
        assert!(gap > 0.1, "L = {l}: gap {gap}");
        assert!(gap > prev_gap);
        prev_gap = gap;
    }
}
