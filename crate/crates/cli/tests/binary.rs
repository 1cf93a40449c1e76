use std::path::PathBuf;
use std::process::{Command, Output};

fn avgtime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avgtime")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("avgtime-binary-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes_follow_row_verdicts() {
    assert_eq!(avgtime(&["tab-oclass", "--n", "3,4"]).status.code(), Some(0));
    assert_eq!(avgtime(&["tab-oclass", "--n", "1"]).status.code(), Some(1));
    assert_eq!(avgtime(&["tab-oclass", "--n", "1", "--audit"]).status.code(), Some(0));
    assert_eq!(avgtime(&["tab-oclass", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# sampling run\nseed = 5\nsamples = 500\naudit = true\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = avgtime(&["--config", cfg, "montecarlo"]);
    let explicit = avgtime(&["montecarlo", "--seed", "5", "--samples", "500"]);
    assert_eq!(from_file.stdout, explicit.stdout);
    let overridden = avgtime(&["--config", cfg, "montecarlo", "--seed", "6"]);
    let explicit6 = avgtime(&["montecarlo", "--seed", "6", "--samples", "500"]);
    assert_eq!(overridden.stdout, explicit6.stdout);
    assert_ne!(overridden.stdout, from_file.stdout);
    assert_eq!(avgtime(&["--config", cfg, "tab-oclass", "--n", "1"]).status.code(), Some(0));
}

#[test]
fn unknown_config_keys_are_errors() {
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "sed = 5\n").unwrap();
    let out = avgtime(&["--config", cfg.to_str().unwrap(), "counting"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown config key"));
}

#[test]
fn custom_connective_table() {
    let path = scratch("nand.txt");
    std::fs::write(&path, "↑ 2 1110\n").unwrap();
    let out = avgtime(&["--table", path.to_str().unwrap(), "sat-oclass", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("sat,1,")));
    assert!(csv.lines().any(|l| l.starts_with("co_problem,1,")));
}

#[test]
fn header_is_the_bound_schema() {
    let out = avgtime(&["markov-tail", "--factor", "100"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "report,n,lhs_num,lhs_den,rhs_num,rhs_den,lhs_float,rhs_float,pass"
    );
}
