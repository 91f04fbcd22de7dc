use std::process::Command;

fn ringqec() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ringqec"))
}

#[test]
fn verify_reports_success_and_rejects_unknown_codes() {
    let out = ringqec().args(["verify", "laflamme5"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("4 of 4 circuits pass"));
    assert!(!ringqec().args(["verify", "steane"]).output().unwrap().status.success());
}

#[test]
fn run_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"code": "rep3", "shots": 20, "cycles": {"from": 1, "to": 3}, "p2": [0.001, 0.01], "seed": 5}"#,
    )
    .unwrap();
    let mut csvs = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("out{k}.csv"));
        let svg = dir.path().join(format!("out{k}.svg"));
        let status = ringqec()
            .args(["run", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&path)
            .arg("--svg")
            .arg(&svg)
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
        csvs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    let text = String::from_utf8(csvs.remove(0)).unwrap();
    assert_eq!(text.lines().next().unwrap(), "cycles,p2,fid_raw,fid_raw_err,fid_corr,fid_corr_err,shots,seed");
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn bad_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"shots": 0}"#).unwrap();
    let out = ringqec().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn preset_config_dump_is_valid_json() {
    let out = ringqec().args(["preset", "fig12", "--out", "unused.csv", "--dump-config"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["code"], "laflamme5");
    assert_eq!(v["p2"].as_array().unwrap().len(), 4);
}

#[test]
fn decode_emits_corrections() {
    let dir = tempfile::tempdir().unwrap();
    let syn = dir.path().join("s.csv");
    // X on qubit 0 before the first step: ZZI and ZIZ both flip from then on
    std::fs::write(&syn, "shot,t,generator,bit\n0,1,0,1\n0,2,1,0\n0,3,1,1\n0,4,0,0\n1,1,0,0\n1,2,1,0\n").unwrap();
    let out = ringqec().args(["decode", "--syndromes"]).arg(&syn).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "shot,qubit,pauli\n0,0,X\n");
    std::fs::write(&syn, "shot,t,generator,bit\n0,1,1,0\n").unwrap();
    assert!(!ringqec().args(["decode", "--syndromes"]).arg(&syn).output().unwrap().status.success());
}
