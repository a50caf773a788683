use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures");
const RULES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/rules");

fn fixture(name: &str) -> PathBuf {
    Path::new(FIXTURES).join(name)
}

fn tajwid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tajwid")).args(args).env_remove("TAJWID_RULES_DIR").output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn files_round_trip_through_both_commands() {
    let tmp = TempDir::new().unwrap();
    let (verses, morph) = (fixture("verses.pipe"), fixture("morphology.tsv"));
    let plain = tmp.path().join("plain");
    let back = tmp.path().join("back");
    let o = tajwid(&["detajwid", "--input", s(&verses), "--morph", s(&morph), "--out", s(&plain)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = tajwid(&["tajwid", "--input", s(&plain.join("verses.pipe")), "--morph", s(&morph), "--out", s(&back)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(back.join("verses.pipe")).unwrap(), fs::read(&verses).unwrap());
    let trace = fs::read_to_string(plain.join("trace.jsonl")).unwrap();
    assert_eq!(trace.lines().count(), 314);
}

#[test]
fn plain_format_uses_the_index_sidecar() {
    let tmp = TempDir::new().unwrap();
    let c = tajwid_core::corpus::load_pipe(&fs::read_to_string(fixture("verses.pipe")).unwrap()).unwrap();
    let (text, index) = c.to_plain();
    let input = tmp.path().join("q.txt");
    fs::write(&input, &text).unwrap();
    fs::write(tmp.path().join("q.txt.idx"), &index).unwrap();
    let out = tmp.path().join("out");
    let morph = fixture("morphology.tsv");
    let o = tajwid(&["detajwid", "--input", s(&input), "--format", "plain", "--morph", s(&morph), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out.join("q.txt.idx")).unwrap(), index);
    let o = tajwid(&["tajwid", "--input", s(&out.join("q.txt")), "--format", "plain", "--morph", s(&morph)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), text);

    fs::remove_file(tmp.path().join("q.txt.idx")).unwrap();
    let o = tajwid(&["detajwid", "--input", s(&input), "--format", "plain", "--morph", s(&morph)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_input_gives_empty_output() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("empty.pipe");
    fs::write(&input, "").unwrap();
    for cmd in ["detajwid", "tajwid", "roundtrip"] {
        let o = tajwid(&[cmd, "--input", s(&input)]);
        assert!(o.status.success(), "{cmd}: {}", stderr(&o));
        if cmd != "roundtrip" {
            assert!(o.stdout.is_empty());
        }
    }
}

#[test]
fn missing_morphology_names_the_rule() {
    let o = tajwid(&["detajwid", "--input", s(&fixture("verses.pipe"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("SHAMS"));
}

#[test]
fn tajwid_refuses_marked_input() {
    let o = tajwid(&["tajwid", "--input", s(&fixture("verses.pipe")), "--morph", s(&fixture("morphology.tsv"))]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("TANWIN_OPEN_K"));
    assert!(o.stdout.is_empty());
}

#[test]
fn roundtrip_passes_and_reports() {
    let tmp = TempDir::new().unwrap();
    let (verses, morph) = (fixture("verses.pipe"), fixture("morphology.tsv"));
    let o = tajwid(&[
        "roundtrip",
        "--input",
        s(&verses),
        "--morph",
        s(&morph),
        "--out",
        s(tmp.path()),
        "--emit",
        "text",
        "--emit",
        "json",
        "--emit",
        "html",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(tmp.path().join("report.txt")).unwrap();
    assert!(text.starts_with("round trip: PASS"));
    let first = fs::read_to_string(tmp.path().join("report.jsonl")).unwrap();
    let summary: serde_json::Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    assert_eq!(summary["roundtrip_ok"], true);
    assert!(tmp.path().join("report.html").exists());
}

#[test]
fn fault_injection_fails_with_highlighted_words() {
    let tmp = TempDir::new().unwrap();
    let o = tajwid(&[
        "roundtrip",
        "--input",
        s(&fixture("verses.pipe")),
        "--morph",
        s(&fixture("morphology.tsv")),
        "--disable",
        "MTJNS-qk",
        "--out",
        s(tmp.path()),
        "--emit",
        "html",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let html = fs::read_to_string(tmp.path().join("report.html")).unwrap();
    assert!(html.contains("<tr id=\"Q77:20:2\" class=\"mismatch\">"));
    assert_eq!(html.matches("class=\"mismatch\"").count(), 1);
}

#[test]
fn census_matches_the_manifest() {
    let o = tajwid(&[
        "census",
        "--input",
        s(&fixture("verses.pipe")),
        "--morph",
        s(&fixture("morphology.tsv")),
        "--emit",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let census: std::collections::BTreeMap<String, usize> = serde_json::from_slice(&o.stdout).unwrap();
    let manifest = fs::read_to_string(fixture("manifest.tsv")).unwrap();
    let mut expected = std::collections::BTreeMap::new();
    for line in manifest.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        *expected.entry(line.split('\t').nth(1).unwrap().to_string()).or_insert(0) += 1;
    }
    assert_eq!(census, expected);
}

#[test]
fn rules_directory_from_env_and_bad_packs() {
    let tmp = TempDir::new().unwrap();
    let verses = fixture("verses.pipe");
    let morph = fixture("morphology.tsv");
    let o = Command::new(env!("CARGO_BIN_EXE_tajwid"))
        .args(["census", "--input", s(&verses), "--morph", s(&morph)])
        .env("TAJWID_RULES_DIR", RULES)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8(o.stdout).unwrap().ends_with("total 314\n"));

    fs::create_dir(tmp.path().join("lexicon")).unwrap();
    fs::write(tmp.path().join("pack.toml"), fs::read_to_string(Path::new(RULES).join("pack.toml")).unwrap()).unwrap();
    let o = tajwid(&["census", "--input", s(&verses), "--morph", s(&morph), "--rules", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("is missing"));
}
