use std::path::PathBuf;
use std::process::{Command, Output};

fn tlimm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlimm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = tlimm(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .trim_end()
        .to_string()
}

fn code(args: &[&str]) -> i32 {
    tlimm(args).status.code().unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tlimm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn coefficient_examples() {
    assert_eq!(
        stdout(&["coeff", "2143", "4321", "--method", "both"]),
        "2 2 OK"
    );
    assert_eq!(stdout(&["coeff", "2143", "2143"]), "1");
    assert_eq!(stdout(&["coeff", "2143", "2134"]), "0");
    assert_eq!(
        stdout(&["coeff", "231564", "654321", "--method", "formula"]),
        "-3"
    );
}

#[test]
fn object_examples() {
    assert_eq!(stdout(&["ncm", "2341"]), "1-3' 2-4' 3-4 1'-2'");
    assert_eq!(
        stdout(&["hull", "2143"]),
        r#"{"lambda":[4,4,4,3],"mu":[1,0,0,0]}"#
    );
    assert_eq!(stdout(&["decompose", "24153"]), r#"{"kind":"none"}"#);
    assert_eq!(
        stdout(&["classify", "24153"]),
        r#"{"variant":"case2","a":1,"e":1,"b":1,"c":1,"f":0,"d":1}"#
    );
    assert_eq!(
        stdout(&["decompose", "2143"]),
        r#"{"kind":"two","sign":1,"shapes":[{"lambda":[4,4,4,3],"mu":[1,0,0,0]},{"lambda":[4,4,4,3],"mu":[3,1,1,0]}]}"#
    );
}

#[test]
fn expansions() {
    assert_eq!(
        stdout(&["expand", "2143"]),
        r#"{"kind":"cm","sign":1,"terms":[{"sign":1,"rows":[],"cols":[]},{"sign":-1,"rows":[1],"cols":[1]},{"sign":-1,"rows":[4],"cols":[4]},{"sign":1,"rows":[1,4],"cols":[1,4]}]}"#
    );
    let rect = stdout(&["expand", "3142"]);
    assert!(
        rect.contains(r#""terms":[{"rows":[2,4],"cols":[1,2]},{"rows":[3,4],"cols":[1,2]}]"#),
        "{rect}"
    );
    assert_eq!(code(&["expand", "1324"]), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["coeff", "21x", "12"]), 2);
    assert_eq!(code(&["coeff", "2143", "123"]), 3);
    assert_eq!(code(&["coeff", "321", "123"]), 3);
    assert_eq!(code(&["classify", "2413"]), 3);
    assert_eq!(code(&["decompose", "321"]), 3);
    assert_eq!(code(&["verify", "--suite", "A11"]), 2);
    assert_eq!(code(&["verify", "--suite", "A1", "--n", "40"]), 3);
    assert_eq!(code(&["nonsense"]), 2);
}

#[test]
fn verify_examples() {
    let a1 = stdout(&["verify", "--suite", "A1", "--n", "5"]);
    assert!(
        a1.starts_with("PASS A1") && a1.contains(" 0 failures"),
        "{a1}"
    );
    let a6 = stdout(&["verify", "--suite", "A6", "--n", "7"]);
    assert!(a6.contains("n=7: (429, 429)"), "{a6}");
    let a3 = stdout(&["verify", "--suite", "A3", "--n", "4"]);
    assert!(a3.contains(" 0 failures"), "{a3}");
    let json = stdout(&["verify", "--suite", "A4", "--n", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["suite"], "A4");
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--suite", "A2", "--n", "5", "--jobs", "1"][..],
        &["immanant", "2143"],
        &["classes", "4"],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
    assert_eq!(
        stdout(&["verify", "--suite", "A2", "--n", "5", "--jobs", "1"]),
        stdout(&["verify", "--suite", "A2", "--n", "5", "--jobs", "4"])
    );
}

#[test]
fn immanant_json_round_trips_through_eval() {
    let imm = stdout(&["immanant", "2143"]);
    let f: tlimm::immanant::Immanant = serde_json::from_str(&imm).unwrap();
    assert_eq!(
        f,
        tlimm::immanant::tl_immanant(&"2143".parse().unwrap()).unwrap()
    );
    let imm_path = scratch("imm.json", &imm);
    let id = scratch("id.json", "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]");
    let anti = scratch("anti.json", "[[0,0,0,1],[0,0,1,0],[0,1,0,0],[1,0,0,0]]");
    // x_id and x_4321 are the only monomials that survive
    assert_eq!(
        stdout(&["eval", imm_path.to_str().unwrap(), id.to_str().unwrap()]),
        "0"
    );
    assert_eq!(
        stdout(&["eval", imm_path.to_str().unwrap(), anti.to_str().unwrap()]),
        "2"
    );
    let half = scratch("half.json", r#"[["1/2",0],[0,"1/3"]]"#);
    let det = scratch("det.json", &stdout(&["immanant", "12"]));
    assert_eq!(
        stdout(&["eval", det.to_str().unwrap(), half.to_str().unwrap()]),
        "1/6"
    );
    assert_eq!(
        code(&["eval", "/nonexistent/imm.json", id.to_str().unwrap()]),
        2
    );
}

#[test]
fn decomposition_json_round_trips() {
    let s = stdout(&["decompose", "2143"]);
    let d: tlimm::classify::Decomposition = serde_json::from_str(&s).unwrap();
    assert_eq!(serde_json::to_string(&d).unwrap(), s);
    let c = stdout(&["classify", "231564"]);
    let p: tlimm::classify::CaseParams = serde_json::from_str(&c).unwrap();
    assert_eq!(p.build().unwrap().to_string(), "231564");
}

#[test]
fn rendering() {
    let ascii = stdout(&["render", "ncm", "2341"]);
    assert!(
        ascii.lines().count() == 5 && ascii.ends_with("1-3' 2-4' 3-4 1'-2'"),
        "{ascii}"
    );
    let svg = stdout(&["render", "ncm", "2341", "--format", "svg"]);
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>"));
    assert_eq!(svg.matches("<path").count(), 4);
    assert_eq!(
        stdout(&["render", "hull", "2143"]),
        ". # # #\n# # # #\n# # # #\n# # # ."
    );
    let svg = stdout(&["render", "decompose", "2143", "--format", "svg"]);
    assert_eq!(svg.matches("<rect").count(), 32);
    assert!(stdout(&["render", "decompose", "24153"]).contains("not a combination"));
}
