use gk_genus::cli::{self, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("gk-genus").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn spectrum_in_every_format() {
    let (code, out, _) = run(&["spectrum", "--q", "4", "--n", "5", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["genera"].as_array().unwrap().iter().any(|g| g == 72));

    let (code, out, _) = run(&["spectrum", "--q", "4", "--n", "5", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().count() > 1);

    let (code, out, _) = run(&["spectrum", "--q", "4", "--n", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.is_empty());
}

#[test]
fn bad_input_is_a_usage_error() {
    for args in [
        &["spectrum", "--q", "7", "--n", "3"][..],
        &["spectrum", "--q", "6", "--n", "3"],
        &["spectrum", "--q", "4", "--n", "4"],
        &["spectrum", "--q", "4", "--n", "5", "--bogus"],
        &["verify", "--q", "29"],
        &["nonsense"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("spectrum"));
}

#[test]
fn verify_and_classify_pass() {
    let (code, out, _) = run(&["verify", "--q", "4"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, out, _) = run(&["classify", "--q", "5", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total"], (125 - 5) * 6 - 1);
}

#[test]
fn catalog_lists_instances() {
    let (code, out, _) = run(&["catalog", "--q", "5", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("family,params,order,tame,s"));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("gk-genus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.json");
    let (code, out, _) = run(&["spectrum", "--q", "5", "--n", "3", "--format", "json", "-o", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(serde_json::from_str::<serde_json::Value>(&text).is_ok());
    std::fs::remove_dir_all(&dir).unwrap();
}
