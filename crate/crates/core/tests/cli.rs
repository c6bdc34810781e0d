use std::process::{Command, Output};

fn isvariant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isvariant"))
        .args(args)
        .env_remove("ISVARIANT_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_json_is_deterministic() {
    let args = ["verify", "--theorem", "prop1", "--n", "3", "--A", "1,2", "--json"];
    let a = isvariant(&args);
    let b = isvariant(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v[0]["status"], "pass");
    assert_eq!(v[0]["theorem_id"], "prop1");
    assert_eq!(v[0]["A"], serde_json::json!([1, 2]));
    assert!(v[0].get("wall_ms").is_none());
}

#[test]
fn verify_all_csv_has_one_row_per_check() {
    let o = isvariant(&["verify", "--all", "--n", "2", "--A", "1", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("theorem_id,"));
    assert_eq!(lines.count(), 13);
}

#[test]
fn errors_exit_nonzero() {
    let o = isvariant(&["verify", "--theorem", "no-such", "--n", "2", "--A", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = isvariant(&["verify", "--theorem", "prop-galois", "--n", "4", "--A", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("refused"));
    let o = isvariant(&["classify", "--kind", "isolated", "--n", "3", "--A", "1,2,3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bound_override_warns() {
    let o = isvariant(&["verify", "--theorem", "prop1", "--n", "2", "--A", "1", "--max-n", "6"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: --max-n"));
}

#[test]
fn classify_json_lists_names_and_sizes() {
    let o = isvariant(&["classify", "--kind", "isolated", "--n", "3", "--A", "1,2", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let got: Vec<(String, u64)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["name"].as_str().unwrap().to_string(), s["size"].as_u64().unwrap()))
        .collect();
    let want = [("full", 34), ("C_A", 4), ("complement", 30), ("G(1)", 5), ("G(2)", 5)];
    assert_eq!(got.len(), want.len());
    for ((name, size), (wn, ws)) in got.iter().zip(want) {
        assert_eq!((name.as_str(), *size), (wn, ws));
    }
    assert_eq!(v[1]["members"].as_array().unwrap().len(), 4);
}

#[test]
fn nilpotent_max_dot_and_json() {
    let o = isvariant(&["nilpotent", "max", "--n", "2", "--A", "1", "--k", "3", "--dot"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert_eq!(dot.matches("label=").count(), 3);
    assert_eq!(dot.matches(" -> ").count(), 2);

    let o = isvariant(&["nilpotent", "max", "--n", "2", "--A", "1", "--k", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(
        v[0]["partition"]["blocks"],
        serde_json::json!([["IN-2"], ["A-1"], ["OUT-2"]])
    );
    assert_eq!(v[0]["type"], serde_json::json!([1, 1, 1]));
}
