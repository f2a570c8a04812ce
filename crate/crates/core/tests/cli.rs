use std::process::Command;

fn rectkernel(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rectkernel")).args(args).output().unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = rectkernel(&["sweep", "--figure", "5", "--output", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 1 + 37 * 40);
    assert!(text.starts_with("mode,U,Delta,x,xp,time,value_re,value_im,error_estimate,warnings,status\n"));
}

#[test]
fn config_file_with_cli_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# thermal kernel in a well\nmode = density\nU = -30\nDelta = 0\nx = -2\nxp = -2 # diagonal\nbeta = 10\n").unwrap();
    let base = rectkernel(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(base.status.code(), Some(0));
    let over = rectkernel(&["--config", cfg.to_str().unwrap(), "--U", "10"]);
    assert_eq!(over.status.code(), Some(0));
    let row = |o: &std::process::Output| String::from_utf8_lossy(&o.stdout).lines().nth(1).unwrap().to_string();
    assert!(row(&base).starts_with("density,-3.0000000000000000e1,"));
    assert!(row(&over).starts_with("density,1.0000000000000000e1,"));
}

#[test]
fn configuration_errors_exit_one_and_name_the_field() {
    let out = rectkernel(&["density", "--x", "-2", "--xp", "-2", "--beta", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`beta`"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "mode = density\ntemperature = 3\n").unwrap();
    let out = rectkernel(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`temperature`"));

    let out = rectkernel(&["sweep", "--figure", "9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn point_failures_exit_two_with_status_column() {
    // The second energy sits exactly on the barrier top, where the amplitudes are singular.
    let out = rectkernel(&["amplitudes", "--U", "10", "--lo", "5", "--hi", "10", "--samples", "2"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert_eq!(out.status.code(), Some(2), "{text}");
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].ends_with(",ok"));
    assert!(!rows[2].ends_with(",ok"));
}
