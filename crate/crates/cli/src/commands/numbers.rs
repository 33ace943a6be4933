use num_traits::ToPrimitive;
use polybase::graham::{self, CoprimalitySpec};
use polybase::numeral::to_digits;
use polybase::special::{self, ChecklistMode};
use polybase::Natural;
use rayon::prelude::*;

use super::{dry_run, natural};
use crate::args::{DigitsArgs, GrahamArgs, ModeArg, SpecialArgs};
use crate::error::{CliError, CliResult};
use crate::report;
use crate::Ctx;

fn join(ds: &[u32]) -> String {
    ds.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// Columns: base, expansion, length, missing_digits.
pub fn digits(ctx: &mut Ctx<'_>, a: &DigitsArgs) -> CliResult<()> {
    let n = natural("value", &a.value)?;
    let expansions = a
        .bases
        .iter()
        .map(|&b| to_digits(&n, b))
        .collect::<Result<Vec<_>, _>>()?;
    if dry_run(ctx, || format!("digits of {n} in {} bases", a.bases.len()))? {
        return Ok(());
    }
    let mut out = csv::Writer::from_writer(&mut *ctx.out);
    out.write_record(["base", "expansion", "length", "missing_digits"])?;
    for d in &expansions {
        out.write_record([
            d.base().to_string(),
            d.to_string(),
            d.len().to_string(),
            join(&d.missing_digits()),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Columns: N, count, exponent; with `--members`: N, value.
pub fn graham(ctx: &mut Ctx<'_>, a: &GrahamArgs) -> CliResult<()> {
    let spec = CoprimalitySpec::new(a.primes.iter().copied())?;
    let horizons = a
        .horizons
        .iter()
        .map(|h| natural("n", h))
        .collect::<CliResult<Vec<Natural>>>()?;
    if dry_run(ctx, || format!("graham primes {:?}, {} horizons", spec.primes(), horizons.len()))? {
        return Ok(());
    }
    let mut out = csv::Writer::from_writer(&mut *ctx.out);
    if a.members {
        out.write_record(["N", "value"])?;
        for h in &horizons {
            for m in graham::members(h, &spec) {
                out.write_record([h.to_string(), m.to_string()])?;
            }
        }
    } else {
        let counts: Vec<u64> = ctx
            .pool
            .install(|| horizons.par_iter().map(|h| graham::g_count(h, &spec)).collect());
        out.write_record(["N", "count", "exponent"])?;
        for (h, c) in horizons.iter().zip(counts) {
            out.write_record([h.to_string(), c.to_string(), report::dec_opt(graham::exponent(h, c))])?;
        }
    }
    out.flush()?;
    Ok(())
}

const CHUNK: u64 = 1 << 20;

/// `Real(N)`; below the scan limit the range is split into fixed chunks so the
/// sum is independent of the thread count.
fn real_count(ctx: &Ctx<'_>, n: &Natural, mode: ChecklistMode) -> u64 {
    match n.to_u64() {
        Some(0) => 0,
        Some(v) if v <= special::SCAN_LIMIT => ctx.pool.install(|| {
            (0..v.div_ceil(CHUNK))
                .into_par_iter()
                .map(|i| special::real_count_scan_range(i * CHUNK + 1, ((i + 1) * CHUNK).min(v), mode))
                .sum()
        }),
        _ => special::real_count(n, mode),
    }
}

/// Columns: horizon, real_count, est_value, r_exponent, g_exponent, mode.
/// `--audit` instead prints one row comparing the two checklist modes.
pub fn special(ctx: &mut Ctx<'_>, a: &SpecialArgs) -> CliResult<()> {
    let horizons = a
        .horizons
        .iter()
        .map(|h| natural("horizon", h))
        .collect::<CliResult<Vec<Natural>>>()?;
    let modes = match a.mode {
        ModeArg::Strict => vec![ChecklistMode::Strict],
        ModeArg::Exhaustive => vec![ChecklistMode::Exhaustive],
        ModeArg::Both => vec![ChecklistMode::Strict, ChecklistMode::Exhaustive],
    };
    if a.audit == Some(0) {
        return Err(CliError::invalid("--audit must be positive"));
    }
    if dry_run(ctx, || format!("special {} horizons, mode {:?}", horizons.len(), a.mode))? {
        return Ok(());
    }

    if let Some(n) = a.audit {
        let audit = special::audit_modes(n, a.witnesses);
        let mut out = csv::Writer::from_writer(&mut *ctx.out);
        out.write_record([
            "horizon",
            "strict_count",
            "exhaustive_count",
            "strict_only",
            "exhaustive_only",
            "witnesses",
        ])?;
        let witnesses: Vec<String> = audit.witnesses.iter().map(u64::to_string).collect();
        out.write_record([
            audit.horizon.to_string(),
            audit.strict_count.to_string(),
            audit.exhaustive_count.to_string(),
            audit.strict_only.to_string(),
            audit.exhaustive_only.to_string(),
            witnesses.join(" "),
        ])?;
        out.flush()?;
        return Ok(());
    }

    let mut rows = Vec::new();
    for h in &horizons {
        for &mode in &modes {
            rows.push((special::census_row(h, real_count(ctx, h, mode)), mode));
        }
    }
    let mut out = csv::Writer::from_writer(&mut *ctx.out);
    out.write_record(["horizon", "real_count", "est_value", "r_exponent", "g_exponent", "mode"])?;
    for (r, mode) in &rows {
        out.write_record([
            r.horizon.to_string(),
            r.real_count.to_string(),
            report::dec_f64(r.est_value),
            report::dec_opt(r.r_exponent),
            report::dec_opt(r.g_exponent),
            mode.as_str().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
