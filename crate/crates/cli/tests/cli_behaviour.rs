//! End-to-end behaviour of the `nslit` binary.

use std::path::Path;
use std::process::{Command, Output};

fn nslit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nslit"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("nslit runs")
}

fn report_value(stdout: &[u8], key: &str) -> f64 {
    let text = String::from_utf8_lossy(stdout);
    let line = text
        .lines()
        .find(|l| l.trim_start().starts_with(key))
        .unwrap_or_else(|| panic!("{key} in {text}"));
    line[line.find(key).unwrap() + key.len()..]
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

const REFERENCE: &str = "[beam]\nmass = \"neutron\"\nwavelength = 5e-9\n[grating]\nn_slits = 4\nperiod = 5e-8\nsigma = 5e-9\n";

#[test]
fn params_report() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ref.toml"), REFERENCE).unwrap();
    let out = nslit(dir.path(), &["params", "--config", "ref.toml"]);
    assert!(out.status.success());
    let e = report_value(&out.stdout, "energy E");
    assert!((e / 5.25e-24 - 1.0).abs() < 0.01);
    assert!((report_value(&out.stdout, "temperature T") / 0.38 - 1.0).abs() < 0.03);
    assert_eq!(report_value(&out.stdout, "Talbot z_T"), 1e-6);

    std::fs::write(
        dir.path().join("long.toml"),
        REFERENCE.replace("5e-9\n[grating]", "1e-8\n[grating]"),
    )
    .unwrap();
    let long = nslit(dir.path(), &["params", "--config", "long.toml"]);
    let quarter = report_value(&long.stdout, "energy E") / e;
    assert!((quarter - 0.25).abs() < 1e-9, "{quarter}");
}

#[test]
fn report_saved_with_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = nslit(
        dir.path(),
        &["params", "--recipe", "fig10", "--out", "params.txt"],
    );
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(dir.path().join("params.txt")).unwrap(),
        out.stdout
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(nslit(p, &["params"]).status.code(), Some(2));
    assert_eq!(nslit(p, &["bogus"]).status.code(), Some(2));
    assert_eq!(
        nslit(p, &["params", "--recipe", "fig99"]).status.code(),
        Some(2)
    );
    std::fs::write(p.join("bad.toml"), "[beam]\nmass = \"neutron\"\n").unwrap();
    let bad = nslit(p, &["params", "--config", "bad.toml"]);
    assert_eq!(bad.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&bad.stderr);
    assert!(
        msg.contains("beam.wavelength") && msg.contains("grating.sigma"),
        "{msg}"
    );
    assert_eq!(
        nslit(p, &["params", "--config", "missing.toml"])
            .status
            .code(),
        Some(5)
    );
    assert_eq!(
        nslit(p, &["revival", "--recipe", "fig5"]).status.code(),
        Some(4)
    );
    let unwritable = nslit(
        p,
        &["farfield", "--recipe", "fig5", "--out", "no/such/dir/f.csv"],
    );
    assert_eq!(unwritable.status.code(), Some(5));
}

#[test]
fn carpet_image_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = nslit(
        dir.path(),
        &[
            "carpet", "--recipe", "fig10", "--grid", "40x30", "--out", "c.pgm",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let img = std::fs::read(dir.path().join("c.pgm")).unwrap();
    let header = b"P5\n30 40\n255\n";
    assert!(img.starts_with(header));
    assert_eq!(img.len(), header.len() + 30 * 40);
}

#[test]
fn farfield_warns_in_near_field() {
    let dir = tempfile::tempdir().unwrap();
    let near = nslit(dir.path(), &["farfield", "--recipe", "fig5", "--z", "2e-6"]);
    assert!(near.status.success());
    assert!(String::from_utf8_lossy(&near.stderr).contains("warning"));
    let far = nslit(dir.path(), &["farfield", "--recipe", "fig5"]);
    assert!(!String::from_utf8_lossy(&far.stderr).contains("warning"));
    let csv = std::fs::read_to_string(dir.path().join("farfield.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,simulated,analytic"));
    assert_eq!(csv.lines().count(), 4097);
}

#[test]
fn axis_trajectory_keeps_x() {
    let dir = tempfile::tempdir().unwrap();
    // three slits with one seed each at the slit centre; the middle one is on the axis
    std::fs::write(
        dir.path().join("three.toml"),
        REFERENCE.replace("n_slits = 4", "n_slits = 3"),
    )
    .unwrap();
    let out = nslit(
        dir.path(),
        &[
            "trajectories",
            "--config",
            "three.toml",
            "--trajectories",
            "1",
            "--stations",
            "50",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("trajectories.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 3 * 51);
    assert!(rows.iter().all(|r| r[3] == "complete"));
    let axis: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] == "1")
        .map(|r| r[5].parse().unwrap())
        .collect();
    assert_eq!(axis.len(), 51);
    assert!(axis.iter().all(|&x| x == 0.0), "{axis:?}");
}
