use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fuzzmark(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzmark"))
        .args(args)
        .env_remove("FUZZMARK_SEED")
        .output()
        .expect("spawn fuzzmark")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn class_one_roster() -> PathBuf {
    let path = scratch("class1.csv");
    let mut text = String::from("student,score\n");
    for i in 0..10 {
        text.push_str(&format!("c{i},{}\n", 50 + i));
    }
    for i in 0..50 {
        text.push_str(&format!("a{i},{}\n", 85 + i % 15));
    }
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn analyze_rect_class_one() {
    let o = fuzzmark(&["analyze", "--model", "rect", "--dist", "10,0,50"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("x=13/6"), "{text}");
    assert!(text.contains("y=13/36"), "{text}");
}

#[test]
fn analyze_trap_fractions() {
    let o = fuzzmark(&["analyze", "--model", "trap", "--dist", "1/6,0,5/6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("X=5/3"), "{text}");
    assert!(text.contains("Y=13/42"), "{text}");
}

#[test]
fn fraction_and_decimal_inputs_match() {
    let a = fuzzmark(&[
        "analyze",
        "--model",
        "trap10",
        "--dist",
        "1/4,1/4,1/2",
        "--json",
    ]);
    let b = fuzzmark(&[
        "analyze",
        "--model",
        "trap10",
        "--dist",
        "0.25,0.25,0.5",
        "--json",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_json_carries_schema() {
    let o = fuzzmark(&["analyze", "--model", "rect", "--dist", "0,20,40", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["cohorts"][0]["centroid"]["y"]["rational"], "5/18");
}

#[test]
fn analyze_csv_row() {
    let o = fuzzmark(&[
        "analyze", "--model", "rect", "--dist", "1,1,1", "--csv", "--label", "flat",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("cohort,model,levels,x,y,threshold"));
    assert_eq!(lines.next(), Some("flat,rect,3,1.5,0.166666666667,1.5"));
}

#[test]
fn analyze_roster_matches_counts() {
    let roster = class_one_roster();
    let from_roster = fuzzmark(&[
        "analyze",
        "--model",
        "trap",
        "--roster",
        roster.to_str().unwrap(),
        "--json",
    ]);
    let from_dist = fuzzmark(&["analyze", "--model", "trap", "--dist", "10,0,50", "--json"]);
    assert_eq!(
        from_roster.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&from_roster.stderr)
    );
    assert_eq!(from_roster.stdout, from_dist.stdout);
}

#[test]
fn analyze_writes_svg() {
    let path = scratch("analyze.svg");
    let o = fuzzmark(&[
        "analyze",
        "--model",
        "trap",
        "--dist",
        "10,0,50",
        "--svg",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("(5/3, 13/42)"));
}

#[test]
fn compare_ranks_class_one_first() {
    for model in ["rect", "trap", "trap10"] {
        let o = fuzzmark(&[
            "compare",
            "--model",
            model,
            "--cohort",
            "Class II=0,20,40",
            "--cohort",
            "Class I=10,0,50",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert!(
            text.contains("Class I > Class II  HIGHER_Y_ABOVE_MID"),
            "{model}: {text}"
        );
    }
}

#[test]
fn compare_json_ranking() {
    let o = fuzzmark(&[
        "compare",
        "--model",
        "rect",
        "--cohort",
        "low=5,1,0",
        "--cohort",
        "high=0,1,5",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ranking"]["order"][0]["label"], "high");
    assert_eq!(v["ranking"]["verdicts"][0]["rule"], "HIGHER_X");
}

#[test]
fn profiles_mixed_example() {
    let o = fuzzmark(&[
        "profiles",
        "--state1",
        "1,0,0,0,1",
        "--state2",
        "0,0,2,0,0",
        "--state3",
        "0,0,2,0,0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("(a,c,c) 1/2"), "{text}");
    assert!(text.contains("(e,c,c) 1/2"), "{text}");
    assert!(text.contains("sum of degrees 1"), "{text}");
}

#[test]
fn profiles_uniform() {
    let o = fuzzmark(&[
        "profiles",
        "--state1",
        "1,1,1,1,1",
        "--state2",
        "1,1,1,1,1",
        "--state3",
        "1,1,1,1,1",
        "--top",
        "1",
    ]);
    let text = stdout(&o);
    assert!(text.contains("(a,a,a) 1/125"), "{text}");
}

#[test]
fn verify_default_passes_and_is_deterministic() {
    let a = fuzzmark(&["verify", "--samples", "200"]);
    let b = fuzzmark(&["verify", "--samples", "200"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains(": ok"));
}

#[test]
fn verify_seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fuzzmark"))
        .args(["verify", "--samples", "10"])
        .env("FUZZMARK_SEED", "7")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("seed 7"));
}

#[test]
fn verify_zero_tolerance_reports_sample() {
    let o = fuzzmark(&[
        "verify",
        "--samples",
        "1",
        "--seed",
        "0",
        "--tolerance",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("weights ["));
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["analyze", "--model", "hex", "--dist", "1,2"],
        &["analyze", "--model", "rect"],
        &["compare", "--model", "rect", "--cohort", "a=1,2"],
        &[
            "compare", "--model", "rect", "--cohort", "a=1,2", "--cohort", "a=2,1",
        ],
        &[
            "compare", "--model", "rect", "--cohort", "nameless", "--cohort", "b=1,2",
        ],
        &[
            "profiles", "--state1", "1,2", "--state2", "1,2", "--state3", "1,2",
        ],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(fuzzmark(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn data_errors_exit_one() {
    let bad_roster = scratch("bad.csv");
    fs::write(&bad_roster, "student,score\nann,101\n").unwrap();
    let dup_roster = scratch("dup.csv");
    fs::write(&dup_roster, "student,score\nann,50\nann,60\n").unwrap();
    let bad_scheme = scratch("bad.scheme");
    fs::write(&bad_scheme, "level C = 0-60\nlevel A = 70-100\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["analyze", "--model", "rect", "--dist", "1,-1,2"],
        vec!["analyze", "--model", "rect", "--dist", "0,0,0"],
        vec!["analyze", "--model", "rect", "--dist", "1,x"],
        vec![
            "analyze",
            "--model",
            "rect",
            "--roster",
            bad_roster.to_str().unwrap(),
        ],
        vec![
            "analyze",
            "--model",
            "rect",
            "--roster",
            dup_roster.to_str().unwrap(),
        ],
        vec![
            "analyze",
            "--model",
            "rect",
            "--roster",
            "/does/not/exist.csv",
        ],
        vec![
            "analyze",
            "--model",
            "rect",
            "--roster",
            dup_roster.to_str().unwrap(),
            "--scheme",
            bad_scheme.to_str().unwrap(),
        ],
        vec![
            "compare", "--model", "rect", "--cohort", "a=1,2", "--cohort", "b=1,2,3",
        ],
        vec![
            "profiles",
            "--state1",
            "1,0,0,0,0",
            "--state2",
            "2,0,0,0,0",
            "--state3",
            "1,0,0,0,0",
        ],
    ];
    for args in &cases {
        let o = fuzzmark(args);
        assert_eq!(
            o.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
    }
}

#[test]
fn custom_scheme_with_five_levels() {
    let scheme = scratch("five.scheme");
    fs::write(
        &scheme,
        "# five bands\nlevel F = 0-49\nlevel D = 50-59\nlevel C = 60-69\nlevel B = 70-79\nlevel A = 80-100\ncrossover = 1\n",
    )
    .unwrap();
    let roster = scratch("five.csv");
    fs::write(&roster, "student,score\na,30\nb,55\nc,65\nd,75\ne,95\n").unwrap();
    let o = fuzzmark(&[
        "analyze",
        "--model",
        "rect",
        "--roster",
        roster.to_str().unwrap(),
        "--scheme",
        scheme.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(text.contains("F=1/5 D=1/5 C=1/5 B=1/5 A=1/5"), "{text}");
    assert!(text.contains("x=5/2"), "{text}");
}
