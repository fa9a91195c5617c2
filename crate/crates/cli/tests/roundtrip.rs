use casimir_cli::{Command, Grid, RawSpec, RunSpec, Spacing};
use casimir_core::{Formalism, ImpedanceKind};
use proptest::prelude::*;

fn positive() -> impl Strategy<Value = f64> {
    (1e-9f64..1.0).prop_map(|x| x * 1e-2)
}

fn grid() -> impl Strategy<Value = Grid> {
    (positive(), 1.0001f64..1e3, 2usize..500, any::<bool>()).prop_map(|(min, ratio, count, log)| {
        let spacing = if log { Spacing::Log } else { Spacing::Linear };
        Grid::new(min, min * ratio, count, spacing).unwrap()
    })
}

prop_compose! {
    fn run_spec()(
        command in prop::sample::select(Command::ALL.to_vec()),
        model in prop::sample::select(ImpedanceKind::ALL.to_vec()),
        lifshitz in any::<bool>(),
        material in prop::option::of(prop::sample::select(vec!["Al", "aluminium", "/tmp/metal.txt"])),
        temperature in prop_oneof![Just(0.0), 1e-3f64..1e4],
        a in positive(),
        grid in grid(),
        use_grid in any::<bool>(),
        radius in prop::option::of(positive()),
        rel_tol in prop::option::of(1e-14f64..1e-3),
        max_subdivisions in prop::option::of(10usize..100_000),
        out in prop::option::of("[a-z][a-z0-9_]{0,8}\\.csv"),
    ) -> RunSpec {
        let zero_t = matches!(command, Command::Figure1 | Command::Figure2 | Command::Coefficients);
        let needs_material = model != ImpedanceKind::IdealMetal || zero_t;
        let (separation, grid) = match command {
            Command::Point => (Some(a), None),
            Command::Scan | Command::Figure1 | Command::Figure2 => (None, Some(grid)),
            Command::ThermalRatio if use_grid => (None, Some(grid)),
            Command::ThermalRatio => (Some(a), None),
            Command::Coefficients => (None, use_grid.then_some(grid)),
        };
        RunSpec {
            command,
            material: material
                .or(needs_material.then_some("Al"))
                .map(str::to_string),
            model,
            formalism: if lifshitz { Formalism::Lifshitz } else { Formalism::Impedance },
            temperature: if zero_t { 0.0 } else { temperature },
            separation,
            grid,
            sphere_radius: radius.filter(|_| matches!(command, Command::Point | Command::Scan)),
            rel_tol,
            max_subdivisions,
            out: out.map(Into::into),
        }
    }
}

proptest! {
    #[test]
    fn serialized_spec_reparses_identically(spec in run_spec()) {
        let text = spec.to_config();
        let reparsed = RunSpec::from_raw(&RawSpec::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(reparsed, spec);
    }

    #[test]
    fn grid_text_round_trips(g in grid()) {
        let back: Grid = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
        let points = g.points();
        prop_assert_eq!(points.len(), g.count);
        prop_assert_eq!(points[0], g.min);
        prop_assert_eq!(*points.last().unwrap(), g.max);
        prop_assert!(points.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn unknown_keys_are_rejected_by_name(key in "[a-z]{3,10}") {
        prop_assume!(!casimir_cli::spec::KEYS.contains(&key.as_str()));
        let err = RawSpec::parse(&format!("{key}=1")).unwrap_err();
        prop_assert!(err.to_string().starts_with(&key));
    }
}
