use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn char2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_char2"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("CHAR2_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn gamma_prints_six_generators() {
    let o = char2(&["gamma"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("vars: w,v2,v1,y,u2,u1"));
    let gens: Vec<&str> = lines.collect();
    assert_eq!(gens.len(), 6);
    assert!(gens.contains(&"y^2*u1 + v1^2"));

    let o = char2(&["gamma", "--extra-vars", "2", "--json"]);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["generators"].as_array().unwrap().len(), 6);
}

#[test]
fn classify_cubic_sample() {
    let o = char2(&["classify", "--input", "data/cusp.txt", "--n", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["hessian_rank"], 2);
    for k in ["typeA", "typeC", "typeR"] {
        assert_eq!(v[k], true, "{k}");
    }
    assert_eq!(v["oracle_dim_c"], 4);

    let o = char2(&["classify", "--input", "data/cusp.txt", "--n", "6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn chern_on_the_plane() {
    let o = char2(&["chern", "--n", "2", "--integrals", "data/p2.json", "--lambda", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("degree: 36"), "{text}");
    assert!(text.contains("divisible: true"), "{text}");

    let v = json(&char2(&["chern", "--n", "2", "--integrals", "data/p2.json", "--lambda", "5", "--json"]));
    assert_eq!(v["degree"]["degree"], 72);
    assert_eq!(v["divisibility"]["value"], 12);
}

#[test]
fn pfaffian_of_a_generic_four_by_four() {
    let o = char2(&["pfaffian", "--input", "data/pfaffian4.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "a*f + b*e + c*d");

    let f = temp_file("vars: x\n1, 0, 0\n0, 0\n1\n");
    let v = json(&char2(&["pfaffian", "--input", f.path().to_str().unwrap(), "--json"]));
    assert_eq!(v["pfaffian"], "1");
    assert_eq!(v["rank"], 4);
}

#[test]
fn groebner_output_is_a_fixed_point() {
    let o = char2(&["groebner", "--input", "data/twisted_cubic.txt", "--order", "lex", "--priority", "w,z,y,x"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o);
    let f = temp_file(&first);
    let again = char2(&["groebner", "--input", f.path().to_str().unwrap(), "--order", "lex", "--priority", "w,z,y,x"]);
    assert_eq!(stdout(&again), first);
}

#[test]
fn input_errors_exit_two_with_a_position() {
    let f = temp_file("vars: x, y\nx + *y\n");
    let o = char2(&["groebner", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2, column 5"), "{err}");

    let o = char2(&["groebner", "--input", "data/twisted_cubic.txt", "--priority", "x,y,q,w"]);
    assert_eq!(o.status.code(), Some(2));

    let o = char2(&["section", "--input", "data/missing.json"]);
    assert_eq!(o.status.code(), Some(2));

    let o = char2(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn section_is_seeded() {
    let args = ["section", "--input", "data/section.json", "--trials", "3", "--seed", "5", "--json"];
    let a = char2(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, char2(&args).stdout);
    let v = json(&a);
    assert_eq!(v["passed"], true);
    assert_eq!(v["trials"].as_array().unwrap().len(), 3);
    assert_eq!(v["trials"][0]["cusp"], true);

    let other = Command::new(env!("CARGO_BIN_EXE_char2"))
        .args(["section", "--input", "data/section.json", "--trials", "3", "--seed", "9", "--json"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env("CHAR2_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(other.stdout, a.stdout);
}

#[test]
fn selftest_is_deterministic() {
    let args = ["selftest", "--seed", "11", "--trials", "3", "--json"];
    let a = char2(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, char2(&args).stdout);
    let v = json(&a);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["suites"].as_array().unwrap().len(), 12);
}

#[test]
fn injected_gamma_fault_fails_the_gamma_suite() {
    let o = char2(&["selftest", "--trials", "3", "--inject-fault", "gamma", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["passed"], false);
    let failed: Vec<&str> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["passed"] == false)
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["gamma"]);
    assert!(String::from_utf8(o.stderr).unwrap().contains("gamma"));
}
