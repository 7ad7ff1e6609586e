//! Golden-file regression. Set `UPDATE_GOLDEN=1` to rewrite the files.

use std::path::PathBuf;
use std::process::Command;

use torus_forms::unitary::random_word;
use torus_forms::BlockMatrix;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs from the golden file");
}

#[test]
fn random_word_seed_42() {
    let word = random_word(2, 3, 5, 42).unwrap();
    let json = word.to_json();
    check_golden("random_word_g2_n3_len5_seed42.json", &json);
    assert_eq!(BlockMatrix::from_json(&json).unwrap(), word);
}

#[test]
fn cli_reports() {
    let cases: [(&str, &[&str]); 3] = [
        ("unitary_check_n3_g2_seed42.json", &["unitary-check", "--n", "3", "--g", "2", "--seed", "42"]),
        ("coinv_plus_n3_g3_w4.json", &["coinv", "--sign", "+", "--n", "3", "--g", "3", "--window", "4", "--json"]),
        ("report_theorem_b_n7_p3.json", &["report", "theorem-b", "--n", "7", "--p", "3"]),
    ];
    for (name, args) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_torus-forms")).args(args).env_remove("TORUS_FORMS_SEED").output().unwrap();
        assert!(out.status.success(), "{args:?}");
        check_golden(name, &String::from_utf8(out.stdout).unwrap());
    }
}
