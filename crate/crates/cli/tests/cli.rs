use std::process::Command;

fn burstcode() -> Command {
    Command::new(env!("CARGO_BIN_EXE_burstcode"))
}

fn stdout_of(cmd: &mut Command) -> String {
    let output = cmd.output().expect("binary runs");
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).unwrap()
}

#[test]
fn ball_lists_members() {
    let out = stdout_of(burstcode().args(["ball", "--q", "2", "--t", "1", "--b", "1", "011"]));
    let members: Vec<&str> = out.lines().collect();
    assert_eq!(members, vec!["01", "11"]);
}

#[test]
fn confusable_exit_codes() {
    let yes = burstcode()
        .args(["confusable", "--q", "2", "--t", "1", "--b", "1", "01", "10"])
        .output()
        .unwrap();
    assert_eq!(yes.status.code(), Some(0));
    let no = burstcode()
        .args([
            "confusable",
            "--q",
            "2",
            "--t",
            "2",
            "--b",
            "1",
            "000111",
            "111000",
        ])
        .output()
        .unwrap();
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn bounds_json_is_byte_identical() {
    let a = stdout_of(burstcode().args(["bounds", "--q", "2", "--n", "30", "--b", "2"]));
    let b = stdout_of(burstcode().args(["bounds", "--q", "2", "--n", "30", "--b", "2"]));
    assert_eq!(a, b);
    let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed["lower_bound_size"], "354");
}

#[test]
fn c1_build_verify_decode_pipeline() {
    let build = stdout_of(burstcode().args([
        "c1",
        "build",
        "--q",
        "2",
        "--n",
        "8",
        "--b",
        "2",
        "--d",
        "2",
        "--emit-members",
    ]));
    let parsed: serde_json::Value = serde_json::from_str(&build).unwrap();
    assert_eq!(parsed["version"], 1);
    let target = parsed["best_class_id"].as_str().unwrap().to_string();
    let member = parsed["members"][0].as_str().unwrap().to_string();

    let verify = burstcode()
        .args([
            "c1",
            "verify",
            "--q",
            "2",
            "--n",
            "8",
            "--b",
            "2",
            "--d",
            "2",
            "--target",
            &target,
            "--negatives",
        ])
        .output()
        .unwrap();
    assert_eq!(verify.status.code(), Some(0), "verify must pass");

    // corrupt the first member with one two-burst pattern and decode it back
    let corrupted: String = member
        .chars()
        .enumerate()
        .filter(|(i, _)| ![0usize, 1, 4, 5].contains(i))
        .map(|(_, c)| c)
        .collect();
    let decode = stdout_of(burstcode().args([
        "c1", "decode", "--q", "2", "--n", "8", "--b", "2", "--d", "2", "--target", &target,
        &corrupted,
    ]));
    assert!(decode.starts_with(&member), "got {decode}");
}

#[test]
fn c2_sampled_verify_records_seed() {
    let out = stdout_of(burstcode().args([
        "c2", "verify", "--q", "3", "--n", "8", "--d", "3/2", "--sample", "5", "--seed", "42",
    ]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed[0]["decoder"]["seed"], 42);
    assert!(parsed[0]["decoder"]["failures"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn sweep_runs_config() {
    let dir = std::env::temp_dir().join(format!("burstcode-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("sweep.toml");
    std::fs::write(
        &config,
        format!(
            "out_dir = \"{}\"\n\n[[c1]]\nq = 2\nn = 8\nb = 2\nd = \"2\"\n\n[[c2]]\nq = 3\nn = 8\nd = \"3/2\"\n",
            dir.join("artifacts").display()
        ),
    )
    .unwrap();
    let status = burstcode()
        .args(["sweep", "--config", config.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.join("artifacts").join("c1_q2_n8_b2_d2.json").exists());
    assert!(dir.join("artifacts").join("c2_q3_n8_d3-2.json").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn report_emits_table() {
    let out =
        stdout_of(burstcode().args(["report", "--q", "2", "--b", "2", "--d", "2", "--ns", "8,10"]));
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = burstcode()
        .args(["bounds", "--nope", "1"])
        .output()
        .unwrap();
    assert_ne!(out.status.code(), Some(0));
}
