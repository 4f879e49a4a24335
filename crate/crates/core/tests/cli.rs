use std::process::Command;

fn sumfree(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sumfree")).args(args).output().expect("spawn");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn result(stdout: &str) -> serde_json::Value {
    let rec: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(rec["schema_version"], 1);
    rec["result"].clone()
}

#[test]
fn partitions_pinned() {
    let (code, out, _) = sumfree(&["partitions", "--k", "8", "--ell", "3", "--format", "records"]);
    assert_eq!(code, 0);
    assert_eq!(result(&out)["count"], "2");
    let (_, out, _) = sumfree(&["partitions", "--k", "3", "--format", "records"]);
    assert_eq!(result(&out)["count"], "3");
}

#[test]
fn count_table_has_one_row() {
    let (code, out, _) = sumfree(&["count", "--n", "20", "--m", "7", "--format", "table"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3, "{out}");
    assert!(lines[0].starts_with("n "));
}

#[test]
fn small_counts_by_size() {
    let (_, out, _) = sumfree(&["count", "--n", "4", "--format", "records"]);
    let r = result(&out);
    assert_eq!(r["count"], "9");
    let sizes: Vec<&str> = r["rows"].as_array().unwrap().iter().map(|x| x["count"].as_str().unwrap()).collect();
    assert_eq!(sizes, ["1", "4", "4"]);
}

#[test]
fn conventions_differ() {
    let (_, eq, _) = sumfree(&["count", "--n", "6", "--m", "2", "--format", "records"]);
    let (_, di, _) = sumfree(&["count", "--n", "6", "--m", "2", "--convention", "distinct", "--format", "records"]);
    let (a, b) = (result(&eq)["count"].clone(), result(&di)["count"].clone());
    // {x, 2x} is allowed only when equal summands are ignored
    assert_eq!(a, "12");
    assert_eq!(b, "15");
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["count", "--n", "26", "--m", "6", "--cache", d, "--format", "records"];
    let (c1, first, _) = sumfree(&args);
    let (c2, second, _) = sumfree(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(first, second);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let (code, out, _) = sumfree(&["count", "--n", "5", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("m,count\n0,1\n1,5\n"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(sumfree(&["nonsense"]).0, 2);
    assert_eq!(sumfree(&["count", "--n", "5", "--m", "9"]).0, 2);
    assert_eq!(sumfree(&["bounds", "--formula", "nope"]).0, 2);
    let (code, _, err) = sumfree(&["count", "--n", "80", "--budget", "5000"]);
    assert_eq!(code, 3);
    assert!(err.contains("budget"));
    assert_eq!(sumfree(&["enumerate", "--n", "30", "--stream-budget", "10"]).0, 3);
}

#[test]
fn config_file_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sumfree.conf");
    std::fs::write(&path, "format = records\nconvention = distinct\n").unwrap();
    let (code, out, _) = sumfree(&["count", "--n", "6", "--m", "2", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(result(&out)["count"], "15");
}

#[test]
fn sampling_is_reproducible() {
    let args = ["sample", "--n", "24", "--m", "4", "--count", "300", "--seed", "7", "--threads", "2", "--format", "records"];
    let (_, a, _) = sumfree(&args);
    let (_, b, _) = sumfree(&args);
    assert_eq!(result(&a)["rows"], result(&b)["rows"]);
}

#[test]
fn verify_subset() {
    let (code, out, _) = sumfree(&["verify", "--suite", "small", "--only", "1,2", "--format", "records"]);
    assert_eq!(code, 0);
    let r = result(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn set_tools() {
    let (_, out, _) = sumfree(&["sumset", "--set", "1,2,4,8,16", "--format", "records"]);
    let r = result(&out);
    assert_eq!(r["size"], 15);
    assert_eq!(r["doubling"], "3");
    let (_, out, _) = sumfree(&["freiman", "--set", "3,5,7,9", "--format", "records"]);
    let r = result(&out);
    assert_eq!((r["first"].clone(), r["difference"].clone(), r["length"].clone()), (3.into(), 2.into(), 4.into()));
    let (_, out, _) = sumfree(&["bset", "--set", "1,2,3", "--format", "records"]);
    assert_eq!(result(&out)["b_set"], "1 2 3");
}
