use polybase::certified::Interval;
use polybase::constants::{self, BudgetTerm, PartialSum};

use super::dry_run;
use crate::args::BudgetArgs;
use crate::error::{CliError, CliResult};
use crate::report::{self, dec, lower, rational, upper};
use crate::Ctx;

fn term(text: &str) -> CliResult<BudgetTerm> {
    let bad = || CliError::invalid(format!("--term {text:?}: expected base:allowed_size"));
    let (b, s) = text.split_once(':').ok_or_else(bad)?;
    let b = b.trim().parse().map_err(|_| bad())?;
    let s = s.trim().parse().map_err(|_| bad())?;
    Ok(BudgetTerm::new(b, s)?)
}

fn bounds(i: &Interval) -> [String; 2] {
    [lower(i), upper(i)]
}

fn quad(flag: &str, v: &Option<Vec<u64>>) -> CliResult<Option<[u64; 4]>> {
    match v {
        None => Ok(None),
        Some(v) => v
            .as_slice()
            .try_into()
            .map(Some)
            .map_err(|_| CliError::invalid(format!("--{flag} takes exactly four values p,q,A,B"))),
    }
}

fn check_precision(bits: u32) -> CliResult<()> {
    if !(16..=1 << 16).contains(&bits) {
        return Err(CliError::invalid(format!("precision {bits} outside [16, 65536] bits")));
    }
    Ok(())
}

/// One table per mode:
/// - `--term`: item, base, allowed_size, lower, upper (rows per term, then sum and slack)
/// - `--egrs`: p, q, A, B, value, value_decimal, margin, margin_decimal, holds
/// - `--canonical`: p, q, A, B, sum_lower, sum_upper, margin_lower, margin_upper, verdict, exact
/// - `--constant` / `--deficit`: k, base, sum_lower, sum_upper, crossing
/// - `--heuristic`: x, partial, tail, total
pub fn budget(ctx: &mut Ctx<'_>, a: &BudgetArgs) -> CliResult<()> {
    check_precision(a.precision)?;
    check_precision(a.precision_cap)?;
    let terms = a.terms.iter().map(|t| term(t)).collect::<CliResult<Vec<_>>>()?;
    let egrs = quad("egrs", &a.egrs)?;
    let canonical = quad("canonical", &a.canonical)?;
    if dry_run(ctx, || "budget".to_string())? {
        return Ok(());
    }
    let prec = a.precision;
    let mut out = csv::Writer::from_writer(&mut *ctx.out);

    if !terms.is_empty() {
        let b = constants::dimension_budget(&terms, prec)?;
        out.write_record(["item", "base", "allowed_size", "lower", "upper"])?;
        for t in &b.terms {
            let [lo, hi] = bounds(&t.dimension(prec));
            out.write_record(["term".into(), t.base.to_string(), t.allowed_size.to_string(), lo, hi])?;
        }
        let [lo, hi] = bounds(&b.sum);
        out.write_record(["sum".into(), String::new(), String::new(), lo, hi])?;
        let [lo, hi] = bounds(&b.slack);
        out.write_record(["slack".into(), String::new(), String::new(), lo, hi])?;
        out.flush()?;
        drop(out);
        let verdict = match b.below_threshold() {
            Some(true) => "below k - 1",
            Some(false) => "at or above k - 1",
            None => "undecided",
        };
        writeln!(ctx.err, "sum of dimensions is {verdict} (k = {})", b.terms.len())?;
        return Ok(());
    }

    if let Some([p, q, x, y]) = egrs {
        let e = constants::egrs_condition(p, q, x, y)?;
        out.write_record(["p", "q", "A", "B", "value", "value_decimal", "margin", "margin_decimal", "holds"])?;
        out.write_record([
            p.to_string(),
            q.to_string(),
            x.to_string(),
            y.to_string(),
            rational(&e.value),
            dec(&e.value),
            rational(&e.margin),
            dec(&e.margin),
            e.holds.to_string(),
        ])?;
    } else if let Some([p, q, x, y]) = canonical {
        let c = constants::canonical_condition(p, q, x, y, a.precision_cap)?;
        out.write_record([
            "p",
            "q",
            "A",
            "B",
            "sum_lower",
            "sum_upper",
            "margin_lower",
            "margin_upper",
            "verdict",
            "exact",
        ])?;
        let [sl, su] = bounds(&c.sum);
        let [ml, mu] = bounds(&c.margin);
        out.write_record([
            p.to_string(),
            q.to_string(),
            x.to_string(),
            y.to_string(),
            sl,
            su,
            ml,
            mu,
            c.verdict.as_str().to_string(),
            c.exact.to_string(),
        ])?;
    } else if let Some(k) = a.constant.or(a.deficit) {
        if k == 0 || k > 10_000 {
            return Err(CliError::invalid(format!("k = {k} outside [1, 10000]")));
        }
        let partial: fn(usize, u32) -> polybase::Result<PartialSum> = if a.constant.is_some() {
            constants::special_constant_partial
        } else {
            constants::dimension_deficit_partial
        };
        let last = partial(k, prec)?;
        out.write_record(["k", "base", "sum_lower", "sum_upper", "crossing"])?;
        // Prefix rows reuse the final crossing index only once it is reached.
        for i in 1..=k {
            let s = if i == k { last.clone() } else { partial(i, prec)? };
            let crossing = last.crossing.filter(|&c| c <= i).map(|c| c.to_string()).unwrap_or_default();
            let [lo, hi] = bounds(&s.sum);
            out.write_record([i.to_string(), s.last_base.to_string(), lo, hi, crossing])?;
        }
        out.flush()?;
        drop(out);
        match last.crossing {
            Some(c) => writeln!(ctx.err, "partial sum first exceeds 1 at k = {c}")?,
            None => writeln!(ctx.err, "partial sum does not exceed 1 by k = {k}")?,
        }
        return Ok(());
    } else if let Some(x) = a.heuristic {
        if x < 3 {
            return Err(CliError::invalid("--heuristic needs X >= 3"));
        }
        let h = constants::special_constant_heuristic(x);
        out.write_record(["x", "partial", "tail", "total"])?;
        out.write_record([
            x.to_string(),
            report::dec_f64(h.partial),
            report::dec_f64(h.tail),
            report::dec_f64(h.total),
        ])?;
    }
    out.flush()?;
    Ok(())
}
