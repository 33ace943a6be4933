use std::fs;
use std::process::Command;

use polybase::search::{Order, Search, SearchSpec, Step};
use polybase::{DigitConstraint, Natural};
use polybase_cli::checkpoint;

use crate::support::{column, ok, run};

pub const SEARCH_82000: &[&str] = &["search", "--gen", "4:0,1", "--filter", "3:0,1", "--filter", "5:0,1", "--below", "4^25"];

#[test]
fn search_example() {
    let r = ok(SEARCH_82000);
    assert_eq!(r.out, "0\n1\n82000\n");
    assert!(r.err.contains("members 3"));
}

#[test]
fn search_csv_and_count() {
    let mut args = SEARCH_82000.to_vec();
    args.extend(["--format", "csv"]);
    let r = ok(&args);
    assert_eq!(r.out.lines().next(), Some("value,base4,base3,base5"));
    assert!(r.out.contains("82000,110001100,11011111001,10111000"));

    let mut args = SEARCH_82000.to_vec();
    args.push("--count-only");
    assert_eq!(ok(&args).out, "3\n");

    let mut args = SEARCH_82000.to_vec();
    args.push("--largest");
    assert_eq!(ok(&args).out, "82000\n");
}

#[test]
fn search_without_generator_picks_one() {
    let r = ok(&["search", "--filter", "3:0,1", "--filter", "4:0,1", "--filter", "5:0,1", "--below", "4^25"]);
    assert_eq!(r.out, "0\n1\n82000\n");
}

#[test]
fn sequence_s_first_terms() {
    let r = ok(&["sequence-s", "--max-n", "10"]);
    let s = column(&r.out, "s_value");
    assert_eq!(&s[..10], ["2", "1", "0", "3", "6", "3", "0", "5", "12", "11"]);
    assert_eq!(column(&r.out, "n")[0], "0");
    assert_eq!(r.out.lines().next(), Some("n,s_value,exponent,slope,slope_class"));
    // Undefined exponents stay empty.
    assert_eq!(column(&r.out, "exponent")[2], "");
    assert_eq!(column(&r.out, "slope")[2], "1.7777777777777777778");
}

#[test]
fn slopes_depth_zero() {
    let r = ok(&["slopes", "--depth", "0"]);
    let expected = "lo_num,lo_den,hi_num,hi_den,lo_decimal,hi_decimal\n\
                    3,2,9,4,1.5000000000000000000,2.2500000000000000000\n\
                    9,2,27,4,4.5000000000000000000,6.7500000000000000000\n";
    assert_eq!(r.out, expected);
    let lower: f64 = r
        .err
        .lines()
        .find_map(|l| l.strip_prefix("measure_lower: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((lower - 2.25f64.ln() / 9f64.ln()).abs() < 1e-12);
}

#[test]
fn slopes_classify_summary() {
    let r = ok(&["slopes", "--classify-upto", "40"]);
    assert!(r.err.contains("InWindow 15, Outside 25, Undecided 0"), "{}", r.err);
}

#[test]
fn budget_tables() {
    let r = ok(&["budget", "--term", "4:2", "--term", "5:2"]);
    let sum = r.out.lines().find(|l| l.starts_with("sum,")).unwrap();
    assert!(sum.ends_with("0.93067655807339305067"), "{sum}");

    let r = ok(&["budget", "--egrs", "5,7,2,3"]);
    assert_eq!(r.out.lines().nth(1), Some("5,7,2,3,1,1.0000000000000000000,0,0,true"));

    let r = ok(&["budget", "--constant", "4"]);
    assert_eq!(r.out.lines().count(), 5);

    let r = ok(&["budget", "--deficit", "26"]);
    assert!(r.err.contains("first exceeds 1 at k = 26"), "{}", r.err);
}

#[test]
fn graham_and_special() {
    let r = ok(&["graham", "--primes", "3,5,7,11", "--n", "10^7", "--members"]);
    assert_eq!(column(&r.out, "value"), ["0", "1", "3160"]);

    let r = ok(&["graham", "--n", "100", "--n", "10^4"]);
    assert_eq!(r.out.lines().next(), Some("N,count,exponent"));

    let r = ok(&["special", "--horizon", "1000", "--mode", "both"]);
    assert_eq!(column(&r.out, "mode"), ["strict", "exhaustive"]);

    let r = ok(&["special", "--audit", "2000", "--witnesses", "3"]);
    assert_eq!(column(&r.out, "exhaustive_only"), ["0"]);
}

#[test]
fn digits_table() {
    let r = ok(&["digits", "--value", "3160", "--base", "3,5,7,11"]);
    assert_eq!(column(&r.out, "expansion"), ["11100001", "100120", "12133", "2413"]);
}

#[test]
fn identical_across_threads_and_runs() {
    let cases: &[&[&str]] = &[
        SEARCH_82000,
        &["search", "--gen", "4:0,1", "--filter", "5:0,1,2", "--below", "4^12", "--format", "csv"],
        &["sequence-s", "--max-n", "30"],
        &["special", "--horizon", "3000000", "--horizon", "10^5", "--mode", "both"],
        &["graham", "--n", "10^6", "--n", "5^9"],
        &["slopes", "--depth", "2", "--classify-upto", "200"],
    ];
    for args in cases {
        let base = ok(&[&["--threads", "1"], *args].concat());
        for t in ["1", "4", "8"] {
            let r = ok(&[&["--threads", t], *args].concat());
            assert_eq!(r.out, base.out, "{args:?} with {t} threads");
            assert_eq!(r.err, base.err, "{args:?} with {t} threads");
        }
    }
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "threads = 2\n[search]\ngen = 4:0,1\nbelow = 4^8\n[sequence-s]\nmax-n = 3\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let r = ok(&["--config", cfg, "search", "--filter", "3:0,1", "--filter", "5:0,1"]);
    assert_eq!(r.out, "0\n1\n");
    // The command line wins over the file.
    let r = ok(&["--config", cfg, "search", "--filter", "3:0,1", "--filter", "5:0,1", "--below", "4^25"]);
    assert_eq!(r.out, "0\n1\n82000\n");
    let r = ok(&["--config", cfg, "sequence-s"]);
    assert_eq!(column(&r.out, "s_value"), ["2", "1", "0", "3"]);

    assert_eq!(run(&["--config", "/nonexistent/x.cfg", "slopes"]).code, 1);
}

#[test]
fn dry_run_every_subcommand() {
    let cases: &[&[&str]] = &[
        &["digits", "--value", "10", "--base", "3"],
        SEARCH_82000,
        &["sequence-s", "--max-n", "200"],
        &["slopes", "--depth", "3"],
        &["graham", "--n", "4^40"],
        &["special", "--horizon", "10^12"],
        &["budget", "--constant", "26"],
        &["checkpoint-inspect", "--checkpoint", "/nonexistent.json"],
    ];
    for args in cases {
        let r = ok(&[&["--dry-run"], *args].concat());
        assert!(r.out.is_empty(), "{args:?}");
        assert!(r.err.starts_with("dry run:"), "{args:?}: {}", r.err);
    }
    // Validation still happens.
    assert_eq!(run(&["--dry-run", "search", "--gen", "4:0,7", "--below", "9"]).code, 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["search", "--bogus"]).code, 1);
    assert_eq!(run(&["frobnicate"]).code, 1);
    let r = run(&["search", "--gen", "4:0,1", "--below", "1^5"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("at least 2"), "{}", r.err);
    assert_eq!(run(&["search", "--gen", "4:0,1", "--from", "9", "--below", "9"]).code, 1);
    assert_eq!(run(&["graham", "--primes", "3,9", "--n", "10"]).code, 1);
    assert_eq!(run(&["budget", "--canonical", "5,7,2"]).code, 1);
    assert_eq!(run(&["--threads", "0", "slopes"]).code, 1);
    let r = run(&["-o", "/nonexistent/dir/out.csv", "slopes"]);
    assert_eq!(r.code, 2, "{}", r.err);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let r = ok(&["-o", path.to_str().unwrap(), "sequence-s", "--max-n", "4"]);
    assert!(r.out.is_empty());
    assert_eq!(column(&fs::read_to_string(&path).unwrap(), "s_value"), ["2", "1", "0", "3", "6"]);
}

const MANY: &[&str] = &["search", "--gen", "4:0,1", "--filter", "5:0,1,2", "--below", "4^12"];

fn many_spec() -> SearchSpec {
    SearchSpec::new(
        DigitConstraint::binary(4).unwrap(),
        vec![DigitConstraint::bounded(5, 2).unwrap().into()],
        Natural::from(0u32),
        Natural::from(4u32).pow(12),
    )
    .unwrap()
}

#[test]
fn checkpoint_resume_finishes_the_listing() {
    let full = ok(MANY).out;
    let all: Vec<&str> = full.lines().collect();
    assert!(all.len() > 20);

    // Stop a run part way, as if interrupted, and save its position.
    let spec = many_spec();
    let mut s = Search::new(&spec, Order::Ascending);
    let mut head = Vec::new();
    while head.len() < 10 {
        match s.step(u64::MAX) {
            Step::Member(v) => head.push(v.to_string()),
            _ => unreachable!(),
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.json");
    checkpoint::write(&path, &s.checkpoint()).unwrap();
    let ck = path.to_str().unwrap();

    let r = ok(&[MANY, &["--checkpoint", ck, "--resume", "--checkpoint-every", "7"]].concat());
    let mut joined = head.clone();
    joined.extend(r.out.lines().map(String::from));
    assert_eq!(joined, all);

    let file = checkpoint::read(&path).unwrap();
    assert!(file.is_exhausted());
    assert_eq!(file.members_found, all.len() as u64);
    assert_eq!(file.largest_found.as_deref(), all.last().copied());

    let r = ok(&["checkpoint-inspect", "--checkpoint", ck, "--gen", "4:0,1", "--filter", "5:0,1,2", "--below", "4^12"]);
    assert!(r.out.contains("exhausted: true"));
    assert!(r.out.contains("digest_match: true"));
}

#[test]
fn checkpointed_run_from_scratch_matches() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.json");
    let ck = path.to_str().unwrap();
    let r = ok(&[MANY, &["--checkpoint", ck, "--checkpoint-every", "5"]].concat());
    assert_eq!(r.out, ok(MANY).out);
    let r = ok(&[MANY, &["--checkpoint", ck, "--resume", "--count-only"]].concat());
    assert_eq!(r.out.trim(), checkpoint::read(&path).unwrap().members_found.to_string());
}

#[test]
fn checkpoint_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.json");
    let ck = path.to_str().unwrap();
    ok(&[MANY, &["--checkpoint", ck]].concat());

    let other = ["search", "--gen", "4:0,1", "--filter", "5:0,1,2", "--below", "4^11", "--checkpoint", ck, "--resume"];
    let r = run(&other);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("checkpoint mismatch"), "{}", r.err);

    let r = run(&["checkpoint-inspect", "--checkpoint", ck, "--gen", "4:0,1", "--below", "4^12"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("checkpoint mismatch"));

    fs::write(&path, "{not json").unwrap();
    assert_eq!(run(&[MANY, &["--checkpoint", ck, "--resume"]].concat()).code, 1);
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polybase"))
}

#[test]
fn thread_count_from_environment() {
    let out = binary().env("POLYBASE_THREADS", "0").arg("slopes").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = binary()
        .env("POLYBASE_THREADS", "3")
        .args(["--dry-run", "slopes"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("threads 3"));
    // The flag overrides the variable.
    let out = binary()
        .env("POLYBASE_THREADS", "3")
        .args(["--threads", "2", "--dry-run", "slopes"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("threads 2"));
}

#[test]
fn binary_exit_statuses() {
    let out = binary().args(SEARCH_82000).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0\n1\n82000\n");
    assert_eq!(binary().args(["search", "--nope"]).output().unwrap().status.code(), Some(1));
    assert_eq!(
        binary().args(["-o", "/nonexistent/d/x", "slopes"]).output().unwrap().status.code(),
        Some(2)
    );
}
