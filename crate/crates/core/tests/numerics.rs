use std::f64::consts::PI;

use proptest::prelude::*;
use qfluct_core::numgrid::differentiate;
use qfluct_core::observables::estimator_set;
use qfluct_core::states::{closed_form_card, natural_grid, sample, GridSize};
use qfluct_core::{Complex64, ComplexField, Grid, Operator, StateSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn catalog() -> Vec<StateSpec> {
    vec![
        StateSpec::Azimuthal { m: -3 },
        StateSpec::Phase { n: 4 },
        StateSpec::Qtp { n: 5, inertia: 1.0, omega: 1.0 },
        StateSpec::Qtp { n: 2, inertia: 3.0, omega: 0.5 },
        StateSpec::Rotor { l: 3, c: vec![c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.5), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -0.5)] },
        StateSpec::Gaussian { x0: 1.0, sigma: 0.5, k: 3.0 },
        StateSpec::Box2d { a: 1.0, b: 2.0 },
    ]
}

#[test]
fn catalog_states_are_normalized() {
    let size = GridSize { line: 1024, ..GridSize::default() };
    for spec in catalog() {
        let grid = natural_grid(&spec, &size, 1.0).unwrap();
        let psi = sample(&spec, &grid, 1.0).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-8, "{spec}: {}", psi.norm_sqr());
    }
}

#[test]
fn repeated_first_derivative_matches_second() {
    for spec in [StateSpec::Qtp { n: 3, inertia: 1.0, omega: 1.0 }, StateSpec::Gaussian { x0: 0.0, sigma: 1.0, k: 2.0 }] {
        let grid = natural_grid(&spec, &GridSize::default(), 1.0).unwrap();
        let psi = sample(&spec, &grid, 1.0).unwrap();
        let twice = differentiate(&differentiate(&psi, 0, 1).unwrap(), 0, 1).unwrap();
        let direct = differentiate(&psi, 0, 2).unwrap();
        let scale = direct.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let worst = twice.values().iter().zip(direct.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(worst < 1e-3 * scale, "{spec}: {worst} vs {scale}");
    }
}

#[test]
fn derivative_error_shrinks_with_refinement() {
    let error = |n: usize| {
        let grid = Grid::circle(n).unwrap();
        let f = ComplexField::from_fn(grid, |p| Complex64::from_polar(1.0, 5.0 * p[0])).unwrap();
        let d = differentiate(&f, 0, 1).unwrap();
        d.values()
            .iter()
            .enumerate()
            .map(|(i, v)| (v - c(0.0, 5.0) * f.values()[i]).norm())
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (error(32), error(64));
    assert!(coarse / fine >= 3.0, "{coarse} -> {fine}");
}

#[test]
fn single_m_rotor_matches_azimuthal_values() {
    for l in 0..=3u32 {
        for m in -(l as i64)..=(l as i64) {
            let mut coeffs = vec![c(0.0, 0.0); 2 * l as usize + 1];
            coeffs[(m + l as i64) as usize] = c(0.0, 1.0);
            let spec = StateSpec::Rotor { l, c: coeffs };
            let grid = natural_grid(&spec, &GridSize::default(), 1.0).unwrap();
            let psi = sample(&spec, &grid, 1.0).unwrap();
            let est = estimator_set(&[Operator::Lz, Operator::Phi], &psi, 1.0).unwrap();
            assert!((est.means[0] - c(m as f64, 0.0)).norm() < 1e-10, "l={l} m={m}");
            assert!(est.deltas[0] < 1e-10, "l={l} m={m}: {}", est.deltas[0]);
            assert!((est.deltas[1] - PI / 3f64.sqrt()).abs() < 1e-4, "l={l} m={m}: {}", est.deltas[1]);
        }
    }
}

#[test]
fn grid_values_match_closed_forms() {
    let cases = [
        (StateSpec::Azimuthal { m: 2 }, &[Operator::Lz, Operator::Phi][..]),
        (StateSpec::Phase { n: 3 }, &[Operator::Number, Operator::Phase][..]),
        (StateSpec::Qtp { n: 2, inertia: 1.0, omega: 1.0 }, &[Operator::HQtp { inertia: 1.0, omega: 1.0 }][..]),
        (StateSpec::Gaussian { x0: 0.5, sigma: 1.0, k: 1.0 }, &[Operator::X, Operator::P][..]),
        (StateSpec::Box2d { a: 1.0, b: 2.0 }, &[Operator::Px, Operator::Py][..]),
    ];
    for (spec, ops) in cases {
        let card = closed_form_card(&spec, 1.0).unwrap();
        let grid = natural_grid(&spec, &GridSize::default(), 1.0).unwrap();
        let psi = sample(&spec, &grid, 1.0).unwrap();
        let est = estimator_set(ops, &psi, 1.0).unwrap();
        let mut compared = 0;
        for op in ops {
            let name = op.name();
            for (label, value) in [
                (format!("mean({name})"), est.mean(name).unwrap()),
                (format!("delta({name})"), c(est.delta(name).unwrap(), 0.0)),
            ] {
                if let Some(want) = card.value(&label) {
                    compared += 1;
                    assert!((value - want).norm() <= 1e-3 * want.norm().max(1.0), "{spec} {label}: {value} vs {want}");
                }
            }
        }
        if let [a, b] = ops {
            if let Some(want) = card.value(&format!("|C({},{})|", a.name(), b.name())) {
                compared += 1;
                let got = est.correlation(a.name(), b.name()).unwrap().norm();
                assert!((got - want.re).abs() <= 1e-3 * want.re, "{spec}: |C| {got} vs {want}");
            }
        }
        assert!(compared > 0, "{spec}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spec_text_round_trips_through_sampling(m in -6i64..=6, n in 0u32..6) {
        for spec in [StateSpec::Azimuthal { m }, StateSpec::Phase { n }] {
            let parsed: StateSpec = spec.to_string().parse().unwrap();
            prop_assert_eq!(&parsed, &spec);
            let grid = natural_grid(&parsed, &GridSize::with_line(256), 1.0).unwrap();
            prop_assert!((sample(&parsed, &grid, 1.0).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hbar_scales_angular_momentum(hbar in 0.1f64..5.0, m in -4i64..=4) {
        let spec = StateSpec::Qtp { n: 1, inertia: 1.0, omega: 1.0 };
        let grid = natural_grid(&spec, &GridSize::with_line(1024), hbar).unwrap();
        let psi = sample(&spec, &grid, hbar).unwrap();
        let est = estimator_set(&[Operator::Lz, Operator::Phi], &psi, hbar).unwrap();
        // Product of spreads is ħ(N + ½) for every ħ.
        prop_assert!((est.deltas[0] * est.deltas[1] - 1.5 * hbar).abs() < 1e-6 * hbar);

        let spec = StateSpec::Azimuthal { m };
        let grid = natural_grid(&spec, &GridSize::with_line(512), hbar).unwrap();
        let psi = sample(&spec, &grid, hbar).unwrap();
        let est = estimator_set(&[Operator::Lz], &psi, hbar).unwrap();
        prop_assert!((est.means[0].re - hbar * m as f64).abs() < 1e-9 * hbar.max(1.0));
    }
}
