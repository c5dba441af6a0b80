use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const EXAMPLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/campus.toml");

const SMALL: &str = r#"
[alphabet]
events = ["a", "b"]
controllable = ["a", "b"]
observable = ["a", "b"]

[edit]
observable = ["a", "b"]
editable = ["a", "b"]
bound = 1

[intruder]
observable = ["a", "b"]

[plant]
states = ["0", "1", "2"]
initial = "0"
marked = ["0", "1", "2"]
secret = ["1"]
transitions = [
    ["0", "a", "1"],
    ["0", "b", "2"],
    ["1", "a", "1"],
    ["1", "b", "1"],
    ["2", "a", "2"],
    ["2", "b", "2"],
]
"#;

fn cosynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosynth")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synthesize(instance: &str, dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["synthesize", instance, "-o", s(dir)];
    args.extend_from_slice(extra);
    cosynth(&args)
}

fn verify(instance: &str, dir: &Path, edit: &Path) -> Output {
    let sup = dir.join("supervisor.aut");
    cosynth(&["verify", instance, "--supervisor", s(&sup), "--edit", s(edit)])
}

#[test]
fn supervisor_first_on_the_example_writes_both_agents() {
    let dir = tempfile::tempdir().unwrap();
    let out = synthesize(EXAMPLE, dir.path(), &["--procedure", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["supervisor.aut", "edit.aut", "report.toml"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("status = \"ok\""));

    let ok = verify(EXAMPLE, dir.path(), &dir.path().join("edit.aut"));
    assert_eq!(ok.status.code(), Some(0));

    let sim = |seed: &str| {
        let d = dir.path();
        cosynth(&[
            "simulate",
            EXAMPLE,
            "--supervisor",
            s(&d.join("supervisor.aut")),
            "--edit",
            s(&d.join("edit.aut")),
            "--seed",
            seed,
            "--steps",
            "20",
        ])
    };
    let (one, two) = (sim("7"), sim("7"));
    assert_eq!(one.status.code(), Some(0));
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, two.stdout);
}

fn transition_lines(text: &str) -> Vec<usize> {
    let start = text.lines().position(|l| l.starts_with("transitions")).unwrap();
    (start + 1..text.lines().count()).filter(|&i| text.lines().nth(i).unwrap().trim_start().starts_with('[')).collect()
}

fn redirect(text: &str, line: usize, target: &str) -> String {
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let l = &lines[line];
    let cut = l.rfind(", \"").unwrap();
    lines[line] = format!("{}, \"{target}\"],", &l[..cut]);
    lines.join("\n") + "\n"
}

#[test]
fn tampered_edit_function_fails_verification_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("small.toml");
    fs::write(&inst, SMALL).unwrap();
    let out = synthesize(s(&inst), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let edit_text = fs::read_to_string(dir.path().join("edit.aut")).unwrap();
    let edit = cosynth::io::parse_automaton_file(&edit_text).unwrap();
    let tampered: PathBuf = dir.path().join("tampered.aut");
    let mut failed = None;
    'search: for line in transition_lines(&edit_text) {
        for target in edit.state_names() {
            let text = redirect(&edit_text, line, target);
            if text == edit_text || cosynth::io::parse_automaton_file(&text).is_err() {
                continue;
            }
            fs::write(&tampered, &text).unwrap();
            let out = verify(s(&inst), dir.path(), &tampered);
            if out.status.code() != Some(0) {
                failed = Some(out);
                break 'search;
            }
        }
    }
    let out = failed.expect("some single redirection breaks the pair");
    assert_eq!(out.status.code(), Some(1));
    let report = String::from_utf8_lossy(&out.stdout);
    assert!(report.contains("false (witness: "), "{report}");
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let empty = synthesize(EXAMPLE, dir.path(), &["--strict-first-nonblocking"]);
    assert_eq!(empty.status.code(), Some(2));
    assert!(!dir.path().join("supervisor.aut").exists());
    assert!(dir.path().join("report.toml").exists());

    let missing = cosynth(&["build", "no-such-file.toml"]);
    assert_eq!(missing.status.code(), Some(3));

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, SMALL.replace("editable = [\"a\", \"b\"]", "editable = [\"a\", \"z\"]")).unwrap();
    let out = cosynth(&["build", s(&bad), "-o", s(dir.path())]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`z`"));
}

#[test]
fn build_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = cosynth(&["build", EXAMPLE, "--no-delete", "-o", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    for f in ["ec", "sc", "ce", "intruder"] {
        assert!(dir.path().join(format!("{f}.aut")).is_file());
    }
    let ec = dir.path().join("ec.aut");
    let dot = cosynth(&["export", s(&ec), "--name", "EC"]);
    assert_eq!(dot.status.code(), Some(0));
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph \"EC\" {"));
    assert_eq!(text, String::from_utf8(cosynth(&["export", s(&ec), "--name", "EC"]).stdout).unwrap());
}
