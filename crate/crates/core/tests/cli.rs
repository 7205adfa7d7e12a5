use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scmag"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs").join(name)
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> std::process::Output {
    let mut c = bin();
    c.args(args);
    for (k, v) in envs {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

#[test]
fn reruns_are_byte_identical() {
    let cases = [
        ("field-map", "strip_meissner.toml", "field_map.csv"),
        ("trap", "strip_normal.toml", "trap.csv"),
        ("trap-scan", "window_nb.toml", "trap_scan.csv"),
        ("bean-profile", "bean.toml", "bean_profile.csv"),
        ("remnant", "bean.toml", "remnant_field.csv"),
        ("cylinder", "cylinder.toml", "cylinder.csv"),
        ("bem", "strip_bem.toml", "bem_surface.csv"),
        ("materials", "window_ybco.toml", "materials.csv"),
    ];
    for (cmd, cfg, file) in cases {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let cfg = config(cfg);
        let cfg = cfg.to_str().unwrap();
        let first = run(&[cmd, "--config", cfg, "--out", a.path().to_str().unwrap()], &[("SCMAG_THREADS", "1")]);
        assert!(first.status.success(), "{cmd}: {}", String::from_utf8_lossy(&first.stderr));
        let second = run(&[cmd, "--config", cfg, "--out", b.path().to_str().unwrap()], &[("SCMAG_THREADS", "3")]);
        assert!(second.status.success());
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{cmd} output differs between runs");
    }
}

#[test]
fn field_map_header_and_units() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["field-map", "--config", config("strip_meissner.toml").to_str().unwrap(), "--out", dir.path().to_str().unwrap()],
        &[],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("field_map.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# units: x=m, z=m, Bx=T, Bz=T, Bmod=T"));
    assert!(lines.next().unwrap().starts_with("x,z,Bx,Bz,Bmod"));
    let table = scmag::table::CsvTable::parse(&text).unwrap();
    assert_eq!(table.rows.len(), 81 * 40);
    assert_eq!(table.render(), text);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let write = |name: &str, body: &str| {
        let p = d.join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    let code = |args: &[&str]| run(args, &[]).status.code().unwrap();
    let out = d.join("out");
    let out = out.to_str().unwrap();

    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["trap"]), 2);

    let typo = write("typo.toml", "[wire]\nmodel = \"meissner-thin\"\nhalfwidth = 1\ncurrent = 1\n");
    let o = run(&["trap", "--config", typo.to_str().unwrap(), "--out", out], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let unit = write("unit.toml", "[wire]\nmodel = \"meissner-thin\"\nhalf_width = \"1 furlong\"\ncurrent = 1\n");
    assert_eq!(code(&["trap", "--config", unit.to_str().unwrap(), "--out", out]), 3);

    assert_eq!(code(&["trap", "--config", d.join("missing.toml").to_str().unwrap()]), 4);

    let bean = write(
        "bean.toml",
        "[wire]\nmodel = \"bean\"\nhalf_width = \"5 um\"\nthickness = \"1 um\"\ncurrent = \"2 A\"\njc = \"1e11 A/m2\"\n",
    );
    assert_eq!(code(&["trap", "--config", bean.to_str().unwrap(), "--out", out]), 5);

    let no_bias = write("nobias.toml", "[wire]\nmodel = \"meissner-thin\"\nhalf_width = \"1 mm\"\ncurrent = 1\n");
    assert_eq!(code(&["trap", "--config", no_bias.to_str().unwrap(), "--out", out]), 7);

    let threads = run(&["materials", "--out", out], &[("SCMAG_THREADS", "zero")]);
    assert_eq!(threads.status.code(), Some(2));
    assert_eq!(code(&["materials", "--out", out]), 0);
}
