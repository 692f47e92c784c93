use std::path::Path;
use std::process::{Command, Output};

fn horizon(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_horizon"));
    cmd.args(args).env_remove("HORIZON_WORKERS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn scenario(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn curves_to_stdout() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = scenario(
        tmp.path(),
        "fig.toml",
        "model = \"entangled\"\nk = 10\nn = 100\next = \"chi0\"\n",
    );
    let out = horizon(&["curves", "--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with(
        "r,c_ref_B,c_ref_Rext,c_ref_Bext,c_ref_R,sum_ab_residual,sum_cd_residual\n0,10,"
    ));
    assert!(String::from_utf8(out.stderr).unwrap().contains("elapsed"));
}

#[test]
fn reruns_are_byte_identical_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = scenario(
        tmp.path(),
        "mc.toml",
        "model = \"entangled\"\nk = 1\nn = 3\next = { uniform = 2 }\npath = \"montecarlo\"\nsamples = 300\nseed = 17\n",
    );
    let runs = [
        (tmp.path().join("a"), vec!["--workers", "1"], vec![]),
        (tmp.path().join("b"), vec![], vec![("HORIZON_WORKERS", "3")]),
        (
            tmp.path().join("c"),
            vec!["--workers", "2"],
            vec![("HORIZON_WORKERS", "1")],
        ),
    ];
    for cmd in ["curves", "verify", "sample"] {
        let mut outputs = Vec::new();
        for (dir, flags, envs) in &runs {
            let dir_s = dir.to_str().unwrap();
            let mut args = vec![cmd, "--config", cfg.as_str(), "--out", dir_s];
            args.extend(flags.iter().copied());
            let out = horizon(&args, envs);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push((
                read(dir, &format!("{cmd}.csv")),
                read(dir, &format!("{cmd}.json")),
            ));
        }
        assert!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "{cmd} output depends on the run"
        );
    }
}

#[test]
fn seed_flag_changes_montecarlo_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = scenario(
        tmp.path(),
        "mc.toml",
        "model = \"pure\"\nk = 1\nn = 3\npath = \"montecarlo\"\nsamples = 50\n",
    );
    let a = horizon(&["curves", "--config", &cfg, "--seed", "1"], &[]);
    let b = horizon(&["curves", "--config", &cfg, "--seed", "2"], &[]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = scenario(tmp.path(), "bad.toml", "model = \"pure\"\nn = 3\nc = -1\n");
    let out = horizon(&["thresholds", "--config", &bad], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("`c`"));

    let out = horizon(&["thresholds"], &[]);
    assert_eq!(out.status.code(), Some(1));

    let big = scenario(tmp.path(), "big.toml", "model = \"pure\"\nk = 4\nn = 10\n");
    let out = horizon(&["curves", "--config", &big, "--path", "montecarlo"], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("analytic"));
    let out = horizon(&["curves", "--config", &big], &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unproven_levels_warn_without_failing() {
    // ref and R share a Bell pair, so only step 1 applies.
    let tmp = tempfile::tempdir().unwrap();
    let cfg = scenario(
        tmp.path(),
        "odd.toml",
        "model = \"pure\"\nk = 1\nn = 2\nsamples = 20\n[[verify.roles]]\nname = \"odd\"\nx = [\"ref\"]\ny2 = [\"B\"]\nz = [\"R\"]\n",
    );
    let out = horizon(
        &[
            "verify",
            "--config",
            &cfg,
            "--out",
            tmp.path().join("o").to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let json = read(&tmp.path().join("o"), "verify.json");
    assert!(json.contains("\"hypothesis_failed\""));
}

#[test]
fn thresholds_warn_with_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = scenario(
        tmp.path(),
        "u.toml",
        "model = \"uniform\"\nlog2e = 100\nn = 100\nc = 5\n",
    );
    let dir = tmp.path().join("t");
    let out = horizon(
        &[
            "thresholds",
            "--config",
            &cfg,
            "--out",
            dir.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&read(&dir, "thresholds.json")).unwrap();
    let codes: Vec<&str> = json["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["code"].as_str().unwrap())
        .collect();
    assert!(codes.contains(&"persists_to_planck_scale"));
    assert!(codes.contains(&"threshold_clamped"));
    assert_eq!(json["thresholds"]["record"]["ext_transfer"]["raw"], 105.0);
    assert!(read(&dir, "thresholds.csv").starts_with("name,raw,value,clamped\n"));
}
