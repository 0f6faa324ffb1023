use std::fs;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_photon-fidelity"));
    cmd.env_remove("PHOTON_FIDELITY_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn momentum_curve_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fm.csv");
    let out = run(&[
        "curve", "--measure", "m", "--n-photons", "1", "--a-min", "0", "--a-max", "1", "--steps", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text, "a_over_l,fidelity\n0,1\n1,0.616850275\n");
}

#[test]
fn position_curve_is_decreasing() {
    let out = run(&["curve", "--measure", "p", "--a-min", "0", "--a-max", "5", "--steps", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 11);
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    assert!(text.contains("\n1,0.25\n"));
}

#[test]
fn phase_sweep_ends_at_e_minus_four() {
    let out = run(&["curve", "--measure", "c", "--phase-sweep", "--n-photons", "1", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("phi,fidelity\n0,1\n"));
    assert!(text.ends_with("3.14159265,0.0183156389\n"), "{text}");
}

#[test]
fn extension_table() {
    let out = run(&["extension", "--measure", "c", "--n-photons", "1,3,10,30", "--threshold", "0.15"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (n, s) = l.split_once(',').unwrap();
            (n.parse().unwrap(), s.parse().unwrap())
        })
        .collect();
    assert_eq!(text.lines().next(), Some("n_photons,extension_over_l"));
    let expected = [29.886243570826835, 1.3801863137966441, 0.5837968405244292, 0.3170395510414107];
    for ((_, s), e) in rows.iter().zip(expected) {
        assert!((s - e).abs() < 1e-5 * e, "{s} vs {e}");
    }
}

#[test]
fn theta_boost() {
    let out = run(&["theta", "--transform", "boost-y", "--param", "0.5", "--theta", "0.785398163397", "--phi", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[0], "boost-y");
    assert_eq!(cols[4], "0.463647609");
    assert_eq!(cols[5], "0.463647609");
}

#[test]
fn theta_rotation_negative_angles() {
    let out = run(&["theta", "--transform", "rotation-y", "--param", "-0.7", "--theta", "1.2", "--phi", "-2.0"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    let cols: Vec<f64> = text.lines().nth(1).unwrap().split(',').skip(4).map(|c| c.parse().unwrap()).collect();
    assert!((cols[0] - cols[1]).abs() < 1e-8);
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        &["curve", "--measure", "x", "--steps", "3"][..],
        &["curve", "--measure", "m", "--steps", "1"],
        &["curve", "--measure", "m", "--a-min", "2", "--a-max", "1"],
        &["curve", "--measure", "m", "--phase-sweep"],
        &["extension", "--n-photons", "1", "--threshold", "1.5"],
        &["theta", "--transform", "boost-y", "--param", "1.0", "--theta", "1", "--phi", "0"],
        &["theta", "--transform", "twist", "--param", "1.0", "--theta", "1", "--phi", "0"],
        &["verify", "--suite", "everything"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {out:?}");
    }
}

#[test]
fn non_convergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tight.cfg");
    fs::write(&cfg, "max_refinements = 0\n").unwrap();
    let out = run(&["curve", "--measure", "m", "--steps", "2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");

    let out = run(&["extension", "--measure", "m", "--n-photons", "1", "--bracket-max", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# defaults\na_max = 2\nsteps = 3\nthreads = 1\n").unwrap();
    let out = run(&["curve", "--measure", "m", "--config", cfg.to_str().unwrap()]);
    assert_eq!(stdout(&out).lines().map(|l| l.split(',').next().unwrap()).collect::<Vec<_>>(), [
        "a_over_l", "0", "1", "2"
    ]);
    let out = run(&["curve", "--measure", "m", "--a-max", "4", "--config", cfg.to_str().unwrap()]);
    assert!(stdout(&out).ends_with("\n4,0.10986203\n"), "{out:?}");
    assert_eq!(stdout(&out).lines().count(), 4);

    fs::write(&cfg, "colour = blue\n").unwrap();
    let out = run(&["curve", "--measure", "m", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_cap_from_environment() {
    let out = bin()
        .env("PHOTON_FIDELITY_THREADS", "2")
        .args(["curve", "--measure", "m", "--steps", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .env("PHOTON_FIDELITY_THREADS", "0")
        .args(["curve", "--measure", "m", "--steps", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["curve", "--measure", "m", "--steps", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_norms_passes() {
    let out = run(&["verify", "--suite", "norms"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
}
