use serde_json::Value;
use vanilla_cli::run;

fn vanilla(args: &[&str]) -> vanilla_cli::Outcome {
    run(std::iter::once("vanilla").chain(args.iter().copied()), "")
}

fn trace_schema() -> jsonschema::JSONSchema {
    let src = include_str!("../../../docs/trace.schema.json");
    let schema: Value = serde_json::from_str(src).unwrap();
    jsonschema::JSONSchema::compile(&schema).unwrap()
}

#[test]
fn omega_stuck_diverges() {
    let out = vanilla(&[
        "reduce",
        "--calculus",
        "vsc",
        "--fuel",
        "20",
        "--trace",
        "json",
        r"(\x. \y. y y) (z w) (\y. y y)",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["status"], "fuel-exhausted");
    let rules: Vec<&str> = v["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["rule"].as_str().unwrap())
        .collect();
    assert_eq!(rules.len(), 20);
    assert_eq!(&rules[..4], ["dB", "dB", "vs", "dB"]);
}

#[test]
fn typecheck_subtraction() {
    let out = vanilla(&[
        "typecheck",
        "--calculus",
        "vanilla",
        "--ctx",
        "y:X->X, z:X",
        "let x = y @ z in x",
        "--type",
        "X",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = vanilla(&[
        "typecheck",
        "--calculus",
        "vanilla",
        "--ctx",
        "y:X->X, z:X",
        "let x = y @ z in x",
        "--type",
        "Y",
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("type error"));
}

#[test]
fn derivations_print() {
    let out = vanilla(&[
        "typecheck",
        "--ctx",
        "y:X",
        "--type",
        "X",
        "--derivation",
        "json",
        r"(\x. x) y",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str::<Value>(&out.stdout).unwrap();
}

#[test]
fn translate_application() {
    let out = vanilla(&["translate", "--direction", "nd-to-sc", "x y"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "let a = x in let b = a @ y in b\n");
    let back = vanilla(&[
        "translate",
        "--direction",
        "sc-to-nd",
        "let a = x in let b = a @ y in b",
    ]);
    assert_eq!(back.stdout, "let a = x in let b = a y in b\n");
}

#[test]
fn infer_fills_placeholders() {
    let out = vanilla(&["infer", "--ctx", "f:?, x:?", "f x"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("f x : "));
    assert!(out.stdout.contains("  f : "));
}

#[test]
fn parse_errors_exit_two_with_location() {
    let out = vanilla(&["parse", "let x = in"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("1:9"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(vanilla(&["reduce", "--bogus", "x"]).code, 2);
    assert_eq!(vanilla(&["reduce", "--calculus", "lazy", "x"]).code, 2);
    assert_eq!(vanilla(&["frobnicate"]).code, 2);
    assert_eq!(vanilla(&[]).code, 2);
}

#[test]
fn help_goes_to_stdout() {
    let out = vanilla(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("reduce"));
}

#[test]
fn stdin_and_files() {
    let out = run(
        ["vanilla", "parse", "--calculus", "vanilla"],
        "let x = y @ z in x\n",
    );
    assert_eq!(out.stdout, "let x = y @ z in x\n");
    let path = std::env::temp_dir().join("vanilla-cli-test-term.txt");
    std::fs::write(&path, r"\x. x x").unwrap();
    let out = vanilla(&["parse", "--file", path.to_str().unwrap()]);
    assert_eq!(out.stdout, "\\x. x x\n");
    assert_eq!(vanilla(&["parse", "--file", "/nonexistent/term"]).code, 2);
}

#[test]
fn json_traces_match_schema() {
    let schema = trace_schema();
    let cases = [
        ("sc", r"(\x. \y. y y) (z w) (\y. y y)"),
        ("vsc", r"(\x. x) ((\y. y) z)"),
        ("plotkin-weak", r"(\x. x) (\y. y)"),
        ("plotkin-strong", r"\w. (\x. x) w"),
        ("vanilla", r"let x = (\y. y) in let z = x @ w in z"),
    ];
    for (calc, term) in cases {
        for strategy in ["lo", "ri"] {
            let out = vanilla(&[
                "reduce",
                "--calculus",
                calc,
                "--strategy",
                strategy,
                "--fuel",
                "6",
                "--trace",
                "json",
                term,
            ]);
            assert_eq!(out.code, 0, "{calc}: {}", out.stderr);
            let v: Value = serde_json::from_str(&out.stdout).unwrap();
            assert!(schema.is_valid(&v), "{calc} {term}: {}", out.stdout);
        }
    }
}

#[test]
fn simulate_reports_shapes() {
    let out = vanilla(&[
        "simulate",
        "--direction",
        "vsc-to-vanilla",
        "--json",
        r"(\x. x) y",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v[0]["shape"], "cut;cut");
    assert_eq!(v[0]["matched"], true);

    let out = vanilla(&[
        "simulate",
        "--direction",
        "vanilla-to-vsc",
        r"let x = (\y. y) in let z = x @ w in z",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("vs;dB"), "{}", out.stdout);
}

#[test]
fn equiv_verdicts() {
    let t = "let x = a in let y = b in let z = x @ y in z";
    let u = "let y = b in let x = a in let z = x @ y in z";
    let out = vanilla(&["equiv", "--budget", "2", t, u]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.starts_with("equivalent in 1 moves"));
    assert_eq!(
        vanilla(&["equiv", "--budget", "2", "--probe", t, u]).code,
        0
    );
    assert_eq!(vanilla(&["equiv", "--budget", "3", "x", "y"]).code, 1);
}

#[test]
fn sn_probe_verdicts() {
    assert_eq!(
        vanilla(&["sn-probe", "--calculus", "vanilla", "let x = y @ z in x"]).code,
        0
    );
    let omega = r"let x = (\y. let z = y @ y in z) in let w = x @ x in w";
    assert_eq!(
        vanilla(&["sn-probe", "--calculus", "vanilla", "--cap", "500", omega]).code,
        1
    );
}

#[test]
fn gen_is_seeded() {
    let args = [
        "gen",
        "--kind",
        "typed",
        "--calculus",
        "natural",
        "--seed",
        "7",
        "--count",
        "5",
    ];
    let a = vanilla(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a, vanilla(&args));
    assert!(a
        .stdout
        .starts_with("# seed=7 max_size=10 atoms=X,Y pool=3\n"));
    assert_eq!(a.stdout.lines().count(), 6);
    for kind in ["cut-free", "untyped", "values"] {
        assert_eq!(vanilla(&["gen", "--kind", kind, "--count", "3"]).code, 0);
    }
    assert_eq!(vanilla(&["gen", "--atoms", "", "--count", "1"]).code, 2);
}
