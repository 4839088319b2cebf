//! End-to-end checks of the command-line interface.

use std::fs;
use std::path::Path;
use std::process::Command;

fn egomotif() -> Command {
    Command::new(env!("CARGO_BIN_EXE_egomotif"))
}

fn write_spec(dir: &Path) -> std::path::PathBuf {
    let spec = r#"{
        "background": {
            "n_videos": 40,
            "n_regular_users": 50,
            "comments_per_user": { "min": 2, "max": 3 },
            "vocabulary": 2000,
            "popularity_exponent": 0.4,
            "tokens_per_comment": { "min": 6, "max": 9 }
        },
        "campaigns": [
            {
                "strategy": "many_users_few_videos",
                "n_users": 8,
                "videos_per_user": 2,
                "text_similarity": 0.95,
                "mark_spam_fraction": 0.6
            }
        ]
    }"#;
    let path = dir.join("spec.json");
    fs::write(&path, spec).unwrap();
    path
}

#[test]
fn synth_run_select_bench_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path());
    let comments = dir.path().join("comments.jsonl");
    let truth = dir.path().join("truth.csv");

    let status = egomotif()
        .args(["synth", "--spec"])
        .arg(&spec)
        .args(["--seed", "7", "--windows", "2", "--out"])
        .arg(&comments)
        .arg("--truth")
        .arg(&truth)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(comments.exists() && truth.exists());

    let out = dir.path().join("out");
    let output = egomotif()
        .args(["run", "--input"])
        .arg(&comments)
        .args(["--out-dir"])
        .arg(&out)
        .args([
            "--windows",
            "2",
            "--window-start",
            "0",
            "--window-hours",
            "6",
            "--threads",
            "2",
        ])
        .args(["--truth"])
        .arg(&truth)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "run failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    for window in ["window_00", "window_01"] {
        for name in ["network.txt", "counts.csv", "nrp.csv", "spatialization.csv"] {
            assert!(out.join(window).join(name).exists(), "{window}/{name}");
        }
    }
    assert!(out.join("report.json").exists());

    // Build labels from the network node table and rank motifs.
    let spatial = fs::read_to_string(out.join("window_00/spatialization.csv")).unwrap();
    let mut labels = String::from("user_id,label\n");
    for line in spatial.lines().skip(1) {
        let mut fields = line.split(',');
        let ego = fields.next().unwrap();
        let spam = fields.nth(2).unwrap();
        labels.push_str(&format!("{ego},{spam}\n"));
    }
    let labels_path = dir.path().join("labels.csv");
    fs::write(&labels_path, labels).unwrap();

    let ranking = dir.path().join("ranking.csv");
    let selected = dir.path().join("selected.txt");
    let output = egomotif()
        .args(["select", "--profiles"])
        .arg(out.join("window_00/nrp.csv"))
        .arg("--labels")
        .arg(&labels_path)
        .args(["--ratio", "2:1", "--seed", "1", "--top-k", "5", "--out-ranking"])
        .arg(&ranking)
        .arg("--out-selected")
        .arg(&selected)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "select failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let selected_text = fs::read_to_string(&selected).unwrap();
    assert_eq!(selected_text.lines().count(), 5);

    // Benchmark the selected subset on one window.
    let output = egomotif()
        .args(["bench", "--input"])
        .arg(&comments)
        .args([
            "--windows",
            "1",
            "--window-start",
            "0",
            "--window-hours",
            "6",
            "--runs",
            "2",
            "--threads",
            "2",
        ])
        .arg("--filter")
        .arg(&selected)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "bench failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("counts verified"), "stdout: {stdout}");
}

#[test]
fn ingest_strict_rejects_bad_record_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.jsonl");
    fs::write(
        &input,
        concat!(
            r#"{"comment_id":"a","user_id":"u","video_id":"v","timestamp":1,"text":"x","spam_hint":false}"#,
            "\n",
            r#"{"comment_id":"b","user_id":"u","timestamp":2,"text":"y","spam_hint":false}"#,
            "\n"
        ),
    )
    .unwrap();
    let output = egomotif().args(["ingest", "--input"]).arg(&input).output().unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
    assert!(stderr.contains("video_id"), "stderr: {stderr}");

    // The lenient flag downgrades the failure to a warning.
    let output = egomotif()
        .args(["ingest", "--lenient", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(output.status.success());
}

#[test]
fn netgen_exports_edge_list_and_graphml() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.jsonl");
    let mut lines = String::new();
    for (i, (user, video, text)) in [
        ("u1", "v1", "identical campaign text body here"),
        ("u2", "v2", "identical campaign text body here"),
        ("u2", "v1", "another comment long enough to pass"),
    ]
    .iter()
    .enumerate()
    {
        lines.push_str(&format!(
            "{{\"comment_id\":\"c{i}\",\"user_id\":\"{user}\",\"video_id\":\"{video}\",\"timestamp\":{i},\"text\":\"{text}\",\"spam_hint\":false}}\n",
        ));
    }
    fs::write(&input, lines).unwrap();
    let net_path = dir.path().join("network.txt");
    let graphml_path = dir.path().join("network.graphml");
    let output = egomotif()
        .args(["netgen", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&net_path)
        .arg("--graphml")
        .arg(&graphml_path)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "netgen failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = fs::read_to_string(&net_path).unwrap();
    assert!(text.contains("u:u1 user"));
    assert!(text.contains(" uu 1"));
    let xml = fs::read_to_string(&graphml_path).unwrap();
    assert!(xml.contains("<graphml"));
}
