use std::path::Path;

use scmag::config::{load_config, parse_config, BiasSpec, WireModel};
use scmag::geometry::Vec2;
use scmag::physics::{GAUSS, MU0};
use scmag::Error;

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 8);
}

#[test]
fn normalised_bias_in_tesla() {
    let c = parse_config(
        "[wire]\nmodel = \"meissner-thin\"\nhalf_width = \"1 mm\"\ncurrent = \"1 A\"\n[bias]\nx = \"-2.5 unit\"\nz = \"0.5 G\"\n",
    )
    .unwrap();
    let unit = MU0 * 1.0 / (2.0 * std::f64::consts::PI.powi(2) * 1e-3);
    match c.bias {
        BiasSpec::Fixed(b) => {
            assert!((b - Vec2::new(-2.5 * unit, 0.5 * GAUSS)).norm() < 1e-18);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(c.wire.model, WireModel::MeissnerThin);
}

#[test]
fn material_file_is_loaded_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("extra.toml"),
        "[NbN]\ntc_K = 16.0\nbc1_T = 0.02\nbc2_T = 20.0\njc_A_per_m2 = 1e11\n",
    )
    .unwrap();
    let cfg = dir.path().join("scenario.toml");
    std::fs::write(
        &cfg,
        "[wire]\nmodel = \"meissner-thin\"\nhalf_width = \"5 um\"\nthickness = \"200 nm\"\ncurrent = \"10 mA\"\n\
         [material]\nfile = \"extra.toml\"\nname = \"NbN\"\n",
    )
    .unwrap();
    let c = load_config(&cfg).unwrap();
    assert_eq!(c.material.unwrap().tc, 16.0);
    assert!(c.materials.lookup("NbN").is_ok());
    assert!(c.materials.lookup("YBCO").is_ok());
}

#[test]
fn unknown_material_and_sections() {
    let base = "[wire]\nmodel = \"meissner-thin\"\nhalf_width = 1\ncurrent = 1\n";
    assert!(matches!(
        parse_config(&format!("{base}[material]\nname = \"Unobtainium\"\n")),
        Err(Error::UnknownMaterial { .. })
    ));
    assert!(matches!(parse_config(&format!("{base}[plot]\ncolour = 1\n")), Err(Error::Config { line: 5, .. })));
    assert!(matches!(parse_config("[wire]\nhalf_width = 1\n"), Err(Error::Config { .. })));
}
