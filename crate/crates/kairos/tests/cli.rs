use std::ffi::OsString;
use std::fs;
use std::path::Path;

use kairos::cli::run;

fn kairos(args: &[&str]) -> i32 {
    let mut argv: Vec<OsString> = vec!["kairos".into()];
    argv.extend(args.iter().map(OsString::from));
    run(argv)
}

fn s(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn synth(dir: &Path, preset: &str, extra: &[&str]) -> String {
    let out = s(&dir.join(preset));
    let mut args = vec!["synth", "--preset", preset, "--seed", "1", "--out", &out];
    args.extend_from_slice(extra);
    assert_eq!(kairos(&args), 0);
    out
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kairos(&[]), 2);
    assert_eq!(kairos(&["frobnicate"]), 2);
    assert_eq!(kairos(&["evaluate", "--folds", "many"]), 2);
    assert_eq!(kairos(&["--help"]), 0);
}

#[test]
fn missing_corpus_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let nowhere = s(&dir.path().join("nowhere"));
    let out = s(&dir.path().join("out"));
    assert_eq!(kairos(&["stats", "--corpus", &nowhere, "--out", &out]), 1);
}

#[test]
fn synth_writes_corpus_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let c = synth(dir.path(), "ideology", &["--n-debates", "60", "--n-users", "30"]);
    for f in ["catalog.json", "users.json", "debates.json", "trees.json", "meta.json", "manifest.json"] {
        assert!(Path::new(&c).join(f).is_file(), "{f}");
    }
    let meta: serde_json::Value = serde_json::from_slice(&fs::read(Path::new(&c).join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["p_match"], 0.75);
}

#[test]
fn every_corpus_command_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let c = synth(dir.path(), "ideology", &["--n-debates", "120", "--n-users", "40"]);
    let runs: [&[&str]; 6] = [
        &["stats"],
        &["labels"],
        &["graph", "--top", "3"],
        &["featurize", "--task", "task2", "--features", "user"],
        &["ablate", "--task", "task2", "--features", "user;user+linguistic", "--folds", "3"],
        &["ingest"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let out = s(&dir.path().join(format!("run{i}")));
        let mut argv = args.to_vec();
        argv.extend(["--corpus", c.as_str(), "--out", out.as_str()]);
        assert_eq!(kairos(&argv), 0, "{args:?}");
        for f in ["report.txt", "report.csv", "manifest.json"] {
            assert!(Path::new(&out).join(f).is_file(), "{args:?} {f}");
        }
    }
    let graph = dir.path().join("run2");
    assert!(graph.join("voters.tsv").is_file());
    let features = fs::read_to_string(dir.path().join("run3/features.csv")).unwrap();
    assert!(features.lines().next().unwrap().contains("user:political_ideology_match"));
    let ingested = dir.path().join("run5/corpus/debates.json");
    assert!(ingested.is_file());
}

#[test]
fn evaluate_is_independent_of_job_count() {
    let dir = tempfile::tempdir().unwrap();
    let c = synth(dir.path(), "ideology", &["--n-debates", "150", "--n-users", "40"]);
    let mut reports = Vec::new();
    for jobs in ["1", "3"] {
        let out = s(&dir.path().join(format!("jobs{jobs}")));
        let args = [
            "ablate", "--corpus", &c, "--task", "task2", "--features", "user;tfidf", "--jobs", jobs, "--out", &out,
        ];
        assert_eq!(kairos(&args), 0);
        reports.push(fs::read(Path::new(&out).join("report.csv")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let text = String::from_utf8(reports.pop().unwrap()).unwrap();
    assert!(text.contains("results,row,majority"));
}

#[test]
fn config_file_supplies_options_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let c = synth(dir.path(), "ideology", &["--n-debates", "80", "--n-users", "30"]);
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# defaults\ntask = task2\nfeatures = user\nseed = 4\nclass_weighted = true\n").unwrap();
    let out = s(&dir.path().join("a"));
    let code = kairos(&["evaluate", "--corpus", &c, "--config", &s(&conf), "--seed", "9", "--out", &out]);
    assert_eq!(code, 0);
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(Path::new(&out).join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["config"]["features"], "user");
    assert_eq!(manifest["config"]["class_weighted"], true);

    fs::write(&conf, "unknown_key = 1\n").unwrap();
    assert_eq!(kairos(&["evaluate", "--corpus", &c, "--config", &s(&conf), "--out", &out]), 2);
    fs::write(&conf, "task = task2\ntask = task1\n").unwrap();
    assert_eq!(kairos(&["evaluate", "--corpus", &c, "--config", &s(&conf), "--out", &out]), 2);
}

#[test]
fn strict_mode_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let c = synth(dir.path(), "ideology", &["--n-debates", "40", "--n-users", "20"]);
    let users = Path::new(&c).join("users.json");
    let mut value: serde_json::Value = serde_json::from_slice(&fs::read(&users).unwrap()).unwrap();
    value[0]["shoe_size"] = 44.into();
    fs::write(&users, serde_json::to_vec(&value).unwrap()).unwrap();

    let out = s(&dir.path().join("lenient"));
    assert_eq!(kairos(&["stats", "--corpus", &c, "--out", &out]), 0);
    let report = fs::read_to_string(Path::new(&out).join("report.txt")).unwrap();
    assert!(report.contains("shoe_size"));
    let out = s(&dir.path().join("strict"));
    assert_eq!(kairos(&["stats", "--corpus", &c, "--strict", "--out", &out]), 1);
}

#[test]
fn train_saves_a_reloadable_model() {
    let dir = tempfile::tempdir().unwrap();
    let c = synth(dir.path(), "ideology", &["--n-debates", "80", "--n-users", "30"]);
    let out = s(&dir.path().join("t"));
    assert_eq!(kairos(&["train", "--corpus", &c, "--task", "task2", "--features", "user", "--out", &out]), 0);
    let model: serde_json::Value = serde_json::from_slice(&fs::read(Path::new(&out).join("model.json")).unwrap()).unwrap();
    assert_eq!(model["schema_version"], 1);
    assert!(model["features"].as_array().is_some_and(|f| !f.is_empty()));
}

#[test]
fn impact_and_report_merge() {
    let dir = tempfile::tempdir().unwrap();
    let c = synth(dir.path(), "trees", &["--n-trees", "40"]);
    let out = s(&dir.path().join("imp"));
    let args = [
        "impact", "--corpus", &c, "--compositions", "CLAIM_ONLY,FLAT(2)", "--epochs", "2", "--svm", "--out", &out,
    ];
    assert_eq!(kairos(&args), 0);
    let csv = fs::read_to_string(Path::new(&out).join("report.csv")).unwrap();
    for row in ["majority", "svm_rbf", "CLAIM_ONLY", "FLAT(2)"] {
        assert!(csv.contains(&format!("results,row,{row},")), "{row}");
    }
    assert!(Path::new(&out).join("predictions/flat_2.csv").is_file());

    let merged = s(&dir.path().join("merged"));
    assert_eq!(kairos(&["report", "--runs", &out, "--out", &merged]), 0);
    assert_eq!(kairos(&["report", "--runs", &c, "--out", &merged]), 0);
    let missing = s(&dir.path().join("never_ran"));
    assert_eq!(kairos(&["report", "--runs", &missing, "--out", &merged]), 1);
}
