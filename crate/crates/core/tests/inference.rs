use jelsurvey_core::designs::{
    generate_population, inclusion_probabilities, seeded_rng, srswor_draw, FinitePopulation,
    SurveySample, WeightMode,
};
use jelsurvey_core::inference::{
    design_effect, greg_estimate, normal_ci, profile_ci, DeffMode, JelProblem, Method,
};
use jelsurvey_core::simharness::draw_replicate;
use jelsurvey_core::ustat::{jackknife_pseudo_values, Kernel};

fn population() -> FinitePopulation {
    generate_population(1000, 1.0, 1.0, 0.5, 1.0, 2024).unwrap()
}

#[test]
fn ratio_grows_away_from_the_point_estimate() {
    let pop = population();
    let pi = inclusion_probabilities(&pop.x, 60).unwrap();
    for seed in 0..5 {
        let (s, pv) = draw_replicate(&pop, &pi, &Kernel::pwm(), seed).unwrap();
        for m in [Method::Jel, Method::JelD, Method::JelW] {
            let prob = JelProblem::new(&s, &pv, m, Some(pop.x_bar)).unwrap();
            let (lo, hi) = prob.hull();
            let p = prob.point();
            for (edge, label) in [(hi, "right"), (lo, "left")] {
                let mut last = 0.0;
                for k in 1..40 {
                    let theta = p + (edge - p) * k as f64 / 40.0;
                    let r = prob.ratio(theta).unwrap().value;
                    assert!(r >= last - 1e-9, "{m} {label} flank decreases at {theta}");
                    last = r;
                }
            }
        }
    }
}

#[test]
fn greg_ignores_a_shift_of_x() {
    let pop = population();
    let pi = inclusion_probabilities(&pop.x, 80).unwrap();
    let (s, pv) = draw_replicate(&pop, &pi, &Kernel::variance(), 3).unwrap();
    let base = greg_estimate(&s, &pv, pop.x_bar).unwrap();
    for c in [-0.5, 3.0, 250.0] {
        let mut shifted = s.clone();
        shifted.x.iter_mut().for_each(|x| *x += c);
        let fit = greg_estimate(&shifted, &pv, pop.x_bar + c).unwrap();
        assert!((fit.estimate - base.estimate).abs() <= 1e-9);
        assert!((fit.b[0] - base.b[0]).abs() <= 1e-9 * base.b[0].abs().max(1.0));
    }
}

#[test]
fn srs_design_effect_is_near_one() {
    let pop = population();
    let mut rng = seeded_rng(8);
    let p = 100.0 / 1000.0;
    for _ in 0..20 {
        let idx = srswor_draw(1000, 100, &mut rng).unwrap();
        let s = SurveySample::from_population(&pop, &vec![p; 1000], idx).unwrap();
        let pv = jackknife_pseudo_values(&s.y, &Kernel::variance()).unwrap();
        let d = design_effect(&s, &pv, DeffMode::Hajek, WeightMode::Design, None).unwrap();
        assert!((0.5..=2.0).contains(&d.deff), "deff {}", d.deff);
    }
}

#[test]
fn calibration_weights_equal_to_design_weights_give_the_jel_interval() {
    let pop = population();
    let pi = inclusion_probabilities(&pop.x, 50).unwrap();
    let (s, pv) = draw_replicate(&pop, &pi, &Kernel::pwm(), 4).unwrap();
    let same = s.clone().with_calibration_weights(s.d.clone()).unwrap();
    let a = profile_ci(&same, &pv, Method::Jel, 0.95, None).unwrap();
    let b = profile_ci(&same, &pv, Method::JelW, 0.95, None).unwrap();
    assert!((a.lower - b.lower).abs() <= 1e-9 && (a.upper - b.upper).abs() <= 1e-9);
}

#[test]
fn intervals_nest_by_level() {
    let pop = population();
    let pi = inclusion_probabilities(&pop.x, 100).unwrap();
    let (s, pv) = draw_replicate(&pop, &pi, &Kernel::variance(), 6).unwrap();
    for m in [Method::Jel, Method::JelD, Method::JelW] {
        let narrow = profile_ci(&s, &pv, m, 0.80, Some(pop.x_bar)).unwrap();
        let wide = profile_ci(&s, &pv, m, 0.99, Some(pop.x_bar)).unwrap();
        assert!(wide.lower < narrow.lower && narrow.upper < wide.upper);
        assert!(narrow.contains(narrow.point));
    }
    let na = normal_ci(&s, &pv, 0.95, WeightMode::Design).unwrap();
    assert!(((na.lower + na.upper) / 2.0 - na.point).abs() < 1e-12);
}

#[test]
fn degenerate_sample_gives_a_point_interval() {
    let s = SurveySample::from_design_weights(
        vec![2.0; 5],
        vec![1.0, 2.0, 3.0, 4.0, 5.0],
        vec![3.0; 5],
    )
    .unwrap();
    let pv = jackknife_pseudo_values(&s.y, &Kernel::variance()).unwrap();
    let ci = profile_ci(&s, &pv, Method::Jel, 0.95, None).unwrap();
    assert!(ci.diagnostics.degenerate);
    assert_eq!((ci.lower, ci.upper), (0.0, 0.0));
}
