use viscoshear::{parse_config, ConfigError, Formats};

#[test]
fn smoke_parse_fills_defaults() {
    let c = parse_config("gamma0 = 0.15\ngamma1 = 0.06\ngamma2 = 0.45\nnu = 1e-3").unwrap();
    assert_eq!((c.scenario.gamma1, c.scenario.gamma2), (0.06, 0.45));
    assert_eq!(c.scenario.m, None);
    assert_eq!(c.scenario.grid.n_points % 2, 1);
    assert_eq!(c.formats, Formats::default());
}

#[test]
fn gamma2_out_of_range() {
    let e = parse_config("gamma2 = 1.5").unwrap_err();
    assert!(matches!(&e, ConfigError::Validation(m) if m.contains("gamma2 must lie in (0,1)")), "{e}");
}

#[test]
fn even_point_count() {
    let e = parse_config("n_points = 4096").unwrap_err();
    assert!(matches!(&e, ConfigError::Validation(m) if m.contains("n_points must be odd")), "{e}");
}

#[test]
fn parse_errors_carry_line_numbers() {
    let e = parse_config("nu = 1e-3\n\n# x\ntolerance = 3").unwrap_err();
    assert!(matches!(&e, ConfigError::Parse { line: 4, message } if message.contains("tolerance")), "{e}");
    let e = parse_config("nu 1e-3").unwrap_err();
    assert!(matches!(e, ConfigError::Parse { line: 1, .. }));
    let e = parse_config("nu = fast").unwrap_err();
    assert!(matches!(e, ConfigError::Parse { line: 1, .. }));
    let e = parse_config("nu = 1e-3\nnu = 2e-3").unwrap_err();
    assert!(matches!(e, ConfigError::Parse { line: 2, .. }));
    let e = parse_config("formats = csv, xml").unwrap_err();
    assert!(e.to_string().contains("xml"));
}

#[test]
fn explicit_amplitude_and_outputs() {
    let c = parse_config("M = 0\nout_dir = results\nformats = svg").unwrap();
    assert_eq!(c.scenario.m, Some(0.0));
    assert_eq!(c.out_dir, std::path::PathBuf::from("results"));
    assert_eq!(c.formats, Formats { csv: false, json: false, svg: true });
    assert!(parse_config("M = -1").is_err());
}
