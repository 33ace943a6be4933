//! Acceptance checks: one PASS/FAIL line per criterion, then the end-to-end
//! command-line tests.

mod cli;
mod support;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use polybase::cantor::SlopeWindows;
use polybase::graham::{self, CoprimalitySpec};
use polybase::numeral::carry_count;
use polybase::sequence::{self, SlopeClass, SlopeClassifier};
use polybase::Natural;

use support::{all_digits_at_most, column, field, ok, say};

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn ms(d: Duration) -> String {
    format!("{:.0} ms", d.as_secs_f64() * 1e3)
}

/// Block counts by direct scan of `[4^n, 4^(n+1))` (block 0 is `[0, 4)`).
fn s_scan(n: u32) -> u64 {
    let lo = if n == 0 { 0 } else { 4u128.pow(n) };
    (lo..4u128.pow(n + 1))
        .filter(|&k| all_digits_at_most(k, 4, 1) && all_digits_at_most(k, 3, 1))
        .count() as u64
}

fn criterion_1() -> Outcome {
    let (r, t) = timed(|| ok(&["sequence-s", "--max-n", "10"]));
    let got: Vec<u64> = column(&r.out, "s_value").iter().map(|s| s.parse().unwrap()).collect();
    let expected = [2, 1, 0, 3, 6, 3, 0, 5, 12, 11];
    let oracle: Vec<u64> = (0..10).map(s_scan).collect();
    let pass = got[..10] == expected && oracle == expected && t < Duration::from_secs(1);
    Outcome {
        pass,
        detail: format!("s_value {:?}, scan oracle {:?}, {}", &got[..10], oracle, ms(t)),
    }
}

fn members_of(args: &[&str]) -> Vec<String> {
    ok(args).out.lines().map(String::from).collect()
}

fn criterion_2() -> Outcome {
    let (below_25, t) = timed(|| members_of(cli::SEARCH_82000));
    // Independent oracle: walk base-5 {0,1} numbers below 4^25 and test bases 3 and 4.
    let limit = 4u128.pow(25);
    let mut oracle = Vec::new();
    let pow5: Vec<u128> = (0..22).map(|i| 5u128.pow(i)).collect();
    for mask in 0u32..1 << 22 {
        let v: u128 = (0..22).filter(|i| mask >> i & 1 == 1).map(|i| pow5[i]).sum();
        if v < limit && all_digits_at_most(v, 3, 1) && all_digits_at_most(v, 4, 1) {
            oracle.push(v.to_string());
        }
    }
    oracle.sort_by_key(|s| s.parse::<u128>().unwrap());
    let below_30 = members_of(&["search", "--gen", "4:0,1", "--filter", "3:0,1", "--filter", "5:0,1", "--below", "4^30"]);
    let below_30_gen5 =
        members_of(&["search", "--gen", "5:0,1", "--filter", "3:0,1", "--filter", "4:0,1", "--below", "4^30"]);
    let expected = ["0", "1", "82000"];
    let pass = below_25 == expected && oracle == expected && below_30 == expected && below_30_gen5 == expected;
    Outcome {
        pass,
        detail: format!(
            "below 4^25 {{{}}} ({}), base-5 oracle {{{}}}, below 4^30 {{{}}}",
            below_25.join(", "),
            ms(t),
            oracle.join(", "),
            below_30.join(", ")
        ),
    }
}

fn criterion_3() -> Outcome {
    let (r, t) = timed(|| ok(&["slopes", "--depth", "0"]));
    let rows: Vec<String> = r.out.lines().skip(1).map(String::from).collect();
    let exact = rows
        == [
            "3,2,9,4,1.5000000000000000000,2.2500000000000000000",
            "9,2,27,4,4.5000000000000000000,6.7500000000000000000",
        ];
    let lo: f64 = field(&r.err, "measure_lower").parse().unwrap();
    let hi: f64 = field(&r.err, "measure_upper").parse().unwrap();
    let target = 2.25f64.ln() / 9f64.ln();
    let pass = exact && lo <= hi && (lo - target).abs() < 1e-5 && (hi - target).abs() < 1e-5 && t < Duration::from_secs(1);
    Outcome {
        pass,
        detail: format!(
            "windows (3/2, 9/4) u (9/2, 27/4): {exact}; measure [{lo:.9}, {hi:.9}] vs {target:.9}; {}",
            ms(t)
        ),
    }
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut classifier = SlopeClassifier::new(SlopeWindows::block_depth_zero(), 4096);
    let mut violations = Vec::new();
    let mut converse = Vec::new();
    let mut in_window = 0;
    for n in 1..=40 {
        let class = classifier.classify(n);
        let s = sequence::s_value(n);
        // Exact rational slope as an independent classification check.
        let exact = SlopeWindows::block_depth_zero().contains(&sequence::exact_slope(n));
        if (class == SlopeClass::InWindow) != exact || class == SlopeClass::Undecided {
            violations.push(n);
        }
        if class == SlopeClass::InWindow {
            in_window += 1;
            if s != 0 {
                violations.push(n);
            }
        }
        if class == SlopeClass::Outside && s == 0 {
            converse.push(n);
        }
    }
    let t = t.elapsed();
    // The smallest witness is confirmed by direct scan.
    let witness_ok = converse.first().is_some_and(|&n| s_scan(n as u32) == 0);
    let pass = violations.is_empty() && witness_ok && t < Duration::from_secs(600);
    Outcome {
        pass,
        detail: format!(
            "n <= 40: {in_window} InWindow, violations {violations:?}; S = 0 while Outside at {converse:?}; {}",
            ms(t)
        ),
    }
}

fn criterion_5() -> Outcome {
    let (base, _) = timed(|| ok(&["slopes", "--depth", "0"]));
    let (r, t) = timed(|| ok(&["slopes", "--depth-x", "1", "--depth-y", "0"]));
    let base: f64 = field(&base.err, "measure_lower").parse().unwrap();
    let lo: f64 = field(&r.err, "measure_lower").parse().unwrap();
    let gain = lo - base;
    let pass = lo >= 0.3805 - 0.003 && (gain - 0.0115).abs() <= 0.003 && t < Duration::from_secs(60);
    Outcome {
        pass,
        detail: format!("depth (1, 0) certified measure >= {lo:.7} (gain {gain:.7} over depth 0); {}", ms(t)),
    }
}

fn legendre(mut m: u64, p: u64) -> u64 {
    let mut v = 0;
    while m > 0 {
        m /= p;
        v += m;
    }
    v
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let mut mismatches = 0;
    for p in [3u32, 5, 7, 11, 13] {
        for n in 0..=2000u64 {
            let oracle = legendre(2 * n, p as u64) - 2 * legendre(n, p as u64);
            if carry_count(&Natural::from(n), p).unwrap() != oracle {
                mismatches += 1;
            }
        }
    }
    // Brute force: C(2n, n) built exactly, tested for divisibility by 3, 5 and 7.
    let spec = CoprimalitySpec::new([3, 5, 7]).unwrap();
    let mut c = BigUint::from(1u32);
    let mut record_mismatches = 0;
    let mut brute_count = 0u64;
    for n in 0..=10_000u64 {
        if n > 0 {
            c = c * BigUint::from(2 * (2 * n - 1)) / BigUint::from(n);
        }
        let coprime = [3u32, 5, 7].iter().all(|&p| (&c % p) != BigUint::from(0u32));
        if coprime != graham::is_coprime_record(&Natural::from(n), &spec) {
            record_mismatches += 1;
        }
        brute_count += (n >= 1 && coprime) as u64;
    }
    let g = graham::g_count(&Natural::from(10_000u32), &spec);
    let t = t.elapsed();
    let pass = mismatches == 0 && record_mismatches == 0 && g == brute_count && t < Duration::from_secs(60);
    Outcome {
        pass,
        detail: format!(
            "carry/valuation mismatches {mismatches}, record mismatches {record_mismatches}, G(10^4) = {g} (brute {brute_count}); {}",
            ms(t)
        ),
    }
}

fn criterion_7() -> Outcome {
    let (r, t) = timed(|| ok(&["graham", "--primes", "3,5,7,11", "--n", "10^7", "--members"]));
    let members = column(&r.out, "value");
    let positive: Vec<&str> = members.iter().map(String::as_str).filter(|&m| m != "0").collect();
    let oracle: Vec<String> = (1..=10_000_000u128)
        .filter(|&n| [3u128, 5, 7, 11].iter().all(|&p| all_digits_at_most(n, p, (p - 1) / 2)))
        .map(|n| n.to_string())
        .collect();
    let pass = positive == ["1", "3160"] && members.first().map(String::as_str) == Some("0") && oracle == positive
        && t < Duration::from_secs(60);
    Outcome {
        pass,
        detail: format!(
            "members in [1, 10^7] {{{}}} (0 listed separately: {}), scan oracle {{{}}}; {}",
            positive.join(", "),
            members.first().map(String::as_str) == Some("0"),
            oracle.join(", "),
            ms(t)
        ),
    }
}

fn budget_sum(terms: &[&str]) -> (f64, f64, f64) {
    let mut args = vec!["budget"];
    for t in terms {
        args.extend(["--term", t]);
    }
    let r = ok(&args);
    let get = |item: &str| -> (f64, f64) {
        let line = r.out.lines().find(|l| l.starts_with(&format!("{item},"))).unwrap();
        let f: Vec<&str> = line.split(',').collect();
        (f[3].parse().unwrap(), f[4].parse().unwrap())
    };
    let (slo, shi) = get("sum");
    let (klo, khi) = get("slack");
    (0.5 * (slo + shi), shi, 0.5 * (klo + khi))
}

fn last_partial(flag: &str) -> (f64, Option<usize>) {
    let r = ok(&["budget", flag, "26"]);
    let lower: f64 = column(&r.out, "sum_lower").last().unwrap().parse().unwrap();
    let crossing = column(&r.out, "crossing").last().unwrap().parse().ok();
    (lower, crossing)
}

/// The first 26 bases 3, 4, 5, 7, ..., 101 computed independently.
fn bases_26() -> Vec<f64> {
    let mut v = vec![3.0, 4.0];
    let mut n = 5u64;
    while v.len() < 26 {
        if (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d)) {
            v.push(n as f64);
        }
        n += 2;
    }
    v
}

fn criterion_8() -> (Outcome, Outcome) {
    let t = Instant::now();
    let (s45, _, _) = budget_sum(&["4:2", "5:2"]);
    let (_, _, k7) = budget_sum(&["3:2", "5:3", "7:4"]);
    let (_, _, k13) = budget_sum(&["3:2", "5:3", "13:7"]);
    let (_, four_hi, _) = budget_sum(&["3:2", "5:3", "7:4", "11:6"]);
    let (constant, constant_crossing) = last_partial("--constant");
    let (deficit, deficit_crossing) = last_partial("--deficit");
    let t = t.elapsed();

    let bases = bases_26();
    let oracle_constant: f64 = bases.iter().map(|p| 1.0 / (p * p.ln())).sum();
    let oracle_deficit: f64 = bases.iter().map(|p| 1.0 - (p - 1.0).ln() / p.ln()).sum();
    let oracle_s45 = 2f64.ln() / 4f64.ln() + 2f64.ln() / 5f64.ln();

    let budgets = (s45 - 0.930677).abs() <= 1e-6
        && (s45 - oracle_s45).abs() < 1e-12
        && (k7 - 0.0259).abs() <= 1e-4
        && (k13 - 0.0722).abs() <= 1e-4
        && four_hi < 3.0
        && t < Duration::from_secs(1);
    let literal = constant >= 1.00112 && constant_crossing == Some(26);
    let deficit_ok = deficit >= 1.00112 && (deficit - 1.00112).abs() < 1e-5 && deficit_crossing == Some(26);
    (
        Outcome {
            pass: budgets && literal,
            detail: format!(
                "budgets {s45:.7}, {k7:.5}, {k13:.5}, four-term < 3: {} ({}); \
                 sum of 1/(p ln p) over 3, 4, 5, ..., 101 = {constant:.6} (oracle {oracle_constant:.6}), \
                 crossing {constant_crossing:?}, needs >= 1.00112 at 26",
                four_hi < 3.0,
                ms(t)
            ),
        },
        Outcome {
            pass: budgets && deficit_ok,
            detail: format!(
                "sum of 1 - ln(p-1)/ln p over the same 26 bases = {deficit:.6} (oracle {oracle_deficit:.6}), crossing {deficit_crossing:?}"
            ),
        },
    )
}

fn criterion_9() -> Outcome {
    let (r, t) = timed(|| ok(&["search", "--gen", "7:0,1", "--filter", "3:0,1", "--below", "7^44", "--largest"]));
    let v: u128 = r.out.trim().parse().unwrap();
    let in_range = 7u128.pow(43) <= v && v < 7u128.pow(44);
    let digits_ok = all_digits_at_most(v, 3, 1) && all_digits_at_most(v, 7, 1);
    Outcome {
        pass: in_range && digits_ok,
        detail: format!("largest base-3&7 member below 7^44 = {v}, in [7^43, 7^44): {in_range}; {}", ms(t)),
    }
}

fn criterion_10() -> Outcome {
    let cases: &[&[&str]] = &[
        &["sequence-s", "--max-n", "40"],
        cli::SEARCH_82000,
        &["search", "--gen", "4:0,1", "--filter", "3:0,1", "--filter", "5:0,1", "--below", "4^30", "--count-only"],
        &["slopes", "--depth", "0", "--classify-upto", "40"],
        &["slopes", "--depth-x", "1", "--depth-y", "0"],
        &["graham", "--n", "10^4", "--n", "10^6"],
        &["graham", "--primes", "3,5,7,11", "--n", "10^7", "--members"],
        &["special", "--horizon", "10^6", "--mode", "both"],
        &["budget", "--term", "3:2", "--term", "5:3", "--term", "7:4"],
        &["budget", "--constant", "26"],
    ];
    let mut differing = Vec::new();
    for args in cases {
        let runs: Vec<(String, String)> = ["1", "4", "8"]
            .iter()
            .map(|t| {
                let r = ok(&[&["--threads", t], *args].concat());
                (r.out, r.err)
            })
            .collect();
        if runs.iter().any(|r| r != &runs[0]) {
            differing.push(args[0]);
        }
    }
    Outcome {
        pass: differing.is_empty(),
        detail: format!("{} commands at 1, 4 and 8 threads; differing: {differing:?}", cases.len()),
    }
}

fn line(label: &str, o: &Outcome) -> bool {
    say(&format!("criterion {label} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail));
    o.pass
}

#[test]
fn criteria() {
    let (c8, c8_deficit) = criterion_8();
    let results = [
        line("1", &criterion_1()),
        line("2", &criterion_2()),
        line("3", &criterion_3()),
        line("4", &criterion_4()),
        line("5", &criterion_5()),
        line("6", &criterion_6()),
        line("7", &criterion_7()),
        line("8", &c8),
        line("9", &criterion_9()),
        line("10", &criterion_10()),
    ];
    say(&format!(
        "note 8 {}: the 1.00112 crossing at 26 is met by the dimension-deficit series: {}",
        if c8_deficit.pass { "PASS" } else { "FAIL" },
        c8_deficit.detail
    ));
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}

/// The zero fraction of S(n) over 1 <= n <= 118; about ten minutes optimized.
#[test]
#[ignore]
fn criterion_4_extended_zero_fraction() {
    let t = Instant::now();
    let mut classifier = SlopeClassifier::new(SlopeWindows::block_depth_zero(), 4096);
    let mut zeros = 0;
    let mut converse = Vec::new();
    for n in 1..=118u64 {
        let s = sequence::s_value(n);
        if s == 0 {
            zeros += 1;
            if classifier.classify(n) == SlopeClass::Outside {
                converse.push(n);
            }
        }
    }
    let pass = zeros == 54 && !converse.is_empty();
    say(&format!(
        "criterion 4 (extended) {}: {zeros}/118 = {:.7} blocks vanish (target 0.4576271); S = 0 while Outside at {converse:?}; {:.0} s",
        if pass { "PASS" } else { "FAIL" },
        zeros as f64 / 118.0,
        t.elapsed().as_secs_f64()
    ));
    assert!(pass);
}
