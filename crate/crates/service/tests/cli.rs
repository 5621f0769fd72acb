mod common;

use nadea_service::cli::{run, OK, REJECTED, USAGE};

fn nadea(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nadea").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("sample.proof");
    std::fs::write(&proof, common::SAMPLE_PROOF).unwrap();
    let isar = dir.path().join("sample.thy");
    let again = dir.path().join("again.proof");
    let (code, out, _) = nadea(&[
        "check",
        proof.to_str().unwrap(),
        "--export-isar",
        isar.to_str().unwrap(),
        "--export-proof",
        again.to_str().unwrap(),
    ]);
    assert_eq!((code, out.as_str()), (OK, "ok\n"));
    assert_eq!(std::fs::read_to_string(&isar).unwrap(), common::SAMPLE_THEORY);
    assert_eq!(std::fs::read_to_string(&again).unwrap(), common::SAMPLE_PROOF);

    let (code, out, _) = nadea(&["export-isar", proof.to_str().unwrap()]);
    assert_eq!(code, OK);
    assert_eq!(out, common::SAMPLE_THEORY);
    let (code, _, err) = nadea(&["export-isar", "--scratch", proof.to_str().unwrap()]);
    assert_eq!(code, REJECTED);
    assert!(err.contains("universal"), "{err}");

    std::fs::write(&proof, common::SAMPLE_PROOF.replacen("Fun ''c\\''' []\n    Exi_I", "Fun ''d'' []\n    Exi_I", 1))
        .unwrap();
    let (code, _, err) = nadea(&["check", proof.to_str().unwrap()]);
    assert_eq!(code, REJECTED);
    assert!(err.contains("rejected at premise path 1"), "{err}");

    let (code, _, _) = nadea(&["check", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(code, USAGE);
}

#[test]
fn prove_and_countermodel() {
    assert_eq!(nadea(&["prove", common::SAMPLE_GOAL]).0, OK);
    assert_eq!(nadea(&["prove", "Q", "--assume", "P", "--assume", "P ---> Q"]).0, OK);
    let (code, out, _) = nadea(&["prove", "P ---> Q", "--max-depth", "2"]);
    assert_eq!(code, REJECTED);
    assert!(out.contains("depth_exhausted"));
    let (code, out, _) = nadea(&["countermodel", "(exists x. P(x)) ---> forall x. P(x)"]);
    assert_eq!(code, OK);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["model"]["size"], 2);
    assert_eq!(nadea(&["countermodel", common::SAMPLE_GOAL, "--max-size", "2"]).0, REJECTED);
    assert_eq!(nadea(&["prove", "A(x)"]).0, USAGE);
    assert_eq!(nadea(&["frobnicate"]).0, USAGE);
    assert_eq!(nadea(&["--help"]).0, OK);
}

#[tokio::test]
async fn prune_by_age() {
    let dir = tempfile::tempdir().unwrap();
    let (store, _) = nadea_service::Store::open(dir.path()).unwrap();
    let config = nadea_service::Config { data_dir: Some(dir.path().to_owned()), ..Default::default() };
    let server = common::spawn_with(store, config).await;
    let (id, _) = server.create("P ---> P").await;
    let dir_arg = dir.path().to_str().unwrap().to_string();
    let (code, out, _) = tokio::task::spawn_blocking({
        let d = dir_arg.clone();
        move || nadea(&["prune", "--data-dir", &d, "--older-than", "1"])
    })
    .await
    .unwrap();
    assert_eq!((code, out.as_str()), (OK, ""));
    // Backdate the journal by rewriting its timestamps.
    let journal = dir.path().join(format!("{id}.jsonl"));
    let text = std::fs::read_to_string(&journal).unwrap();
    let old: String = text
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            v["at"] = "2020-01-01T00:00:00Z".into();
            format!("{v}\n")
        })
        .collect();
    std::fs::write(&journal, old).unwrap();
    let (code, out, _) = nadea(&["prune", "--data-dir", &dir_arg, "--older-than", "1", "--dry-run"]);
    assert_eq!((code, out.trim()), (OK, id.as_str()));
    assert!(journal.exists());
    let (code, _, _) = nadea(&["prune", "--data-dir", &dir_arg, "--older-than", "1"]);
    assert_eq!(code, OK);
    assert!(!journal.exists());
}
