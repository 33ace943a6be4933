//! Helpers shared by the acceptance checks.

use std::io::Write;

pub struct Run {
    pub code: i32,
    pub out: String,
    pub err: String,
}

/// Runs the command line in-process; `args` excludes the program name.
pub fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("polybase").chain(args.iter().copied());
    let code = polybase_cli::run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

pub fn ok(args: &[&str]) -> Run {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?} failed: {}", r.err);
    r
}

pub fn column(csv_text: &str, name: &str) -> Vec<String> {
    let mut rd = csv::Reader::from_reader(csv_text.as_bytes());
    let idx = rd.headers().unwrap().iter().position(|h| h == name).unwrap();
    rd.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

/// Value after `key: ` on a stderr report line.
pub fn field(text: &str, key: &str) -> String {
    let prefix = format!("{key}: ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

/// Prints past the test harness capture so the report shows in plain `cargo test`.
pub fn say(line: &str) {
    let mut out = std::io::stdout().lock();
    out.write_all(format!("{line}\n").as_bytes()).unwrap();
    out.flush().unwrap();
}

pub fn all_digits_at_most(mut n: u128, b: u128, max: u128) -> bool {
    while n > 0 {
        if n % b > max {
            return false;
        }
        n /= b;
    }
    true
}
