use num_rational::BigRational;
use polybase::cantor::{self, SlopeWindows};
use polybase::certified::DEFAULT_PRECISION;
use polybase::sequence::{self, SlopeClass, SlopeClassifier};
use rayon::prelude::*;

use super::dry_run;
use crate::args::{SequenceArgs, SlopesArgs};
use crate::error::{CliError, CliResult};
use crate::report;
use crate::Ctx;

fn windows(depth_x: u32, depth_y: u32) -> CliResult<SlopeWindows> {
    if depth_x == 0 && depth_y == 0 {
        return Ok(SlopeWindows::block_depth_zero());
    }
    Ok(cantor::refine_to_depth(depth_x, depth_y, &cantor::block_slope_range())?.windows)
}

fn check_depths(x: u32, y: u32) -> CliResult<()> {
    // Covers have 2^(depth + fixed digits) components.
    if x > 16 || y > 16 {
        return Err(CliError::invalid(format!("depths ({x}, {y}) too large; at most 16 each")));
    }
    Ok(())
}

struct Row {
    n: u64,
    s: u64,
    exponent: Option<f64>,
    slope: String,
    class: SlopeClass,
}

/// Columns: n, s_value, exponent, slope, slope_class.
pub fn sequence_s(ctx: &mut Ctx<'_>, a: &SequenceArgs) -> CliResult<()> {
    if a.min_n > a.max_n {
        return Err(CliError::invalid(format!("--min-n {} exceeds --max-n {}", a.min_n, a.max_n)));
    }
    check_depths(a.depth_x, a.depth_y)?;
    if dry_run(ctx, || format!("sequence-s n = {}..={}", a.min_n, a.max_n))? {
        return Ok(());
    }
    let w = windows(a.depth_x, a.depth_y)?;
    let cap = a.precision_cap;
    // Descending order starts the expensive large blocks first.
    let ns: Vec<u64> = (a.min_n..=a.max_n).rev().collect();
    let mut rows: Vec<Row> = ctx.pool.install(|| {
        ns.par_iter()
            .map_init(
                || SlopeClassifier::new(w.clone(), cap),
                |c, &n| {
                    let s = sequence::s_value(n);
                    Row {
                        n,
                        s,
                        exponent: sequence::exponent_of(n, s),
                        slope: c.slope(n).to_decimal(report::SIG),
                        class: c.classify(n),
                    }
                },
            )
            .collect()
    });
    rows.reverse();

    let mut out = csv::Writer::from_writer(&mut *ctx.out);
    out.write_record(["n", "s_value", "exponent", "slope", "slope_class"])?;
    for r in &rows {
        out.write_record([
            r.n.to_string(),
            r.s.to_string(),
            report::dec_opt(r.exponent),
            r.slope.clone(),
            r.class.as_str().to_string(),
        ])?;
    }
    out.flush()?;
    drop(out);

    let counted: Vec<&Row> = rows.iter().filter(|r| r.n >= 1).collect();
    let zeros = counted.iter().filter(|r| r.s == 0).count();
    let violations = counted.iter().filter(|r| r.class == SlopeClass::InWindow && r.s != 0).count();
    let converse = counted.iter().filter(|r| r.class == SlopeClass::Outside && r.s == 0).count();
    if !counted.is_empty() {
        writeln!(
            ctx.err,
            "zero blocks among n >= 1: {zeros}/{} = {}",
            counted.len(),
            report::dec(&BigRational::new(zeros.into(), counted.len().into()))
        )?;
    }
    writeln!(ctx.err, "InWindow with S != 0: {violations}; Outside with S = 0: {converse}")?;
    Ok(())
}

/// Columns: lo_num, lo_den, hi_num, hi_den, lo_decimal, hi_decimal. The
/// certified log-9 measure goes to stderr.
pub fn slopes(ctx: &mut Ctx<'_>, a: &SlopesArgs) -> CliResult<()> {
    let dx = a.depth_x.unwrap_or(a.depth);
    let dy = a.depth_y.unwrap_or(a.depth);
    check_depths(dx, dy)?;
    if dry_run(ctx, || format!("slopes depth ({dx}, {dy})"))? {
        return Ok(());
    }
    let w = windows(dx, dy)?;
    let measure = cantor::window_log_measure(&w, 9, DEFAULT_PRECISION)?;

    let mut out = csv::Writer::from_writer(&mut *ctx.out);
    out.write_record(["lo_num", "lo_den", "hi_num", "hi_den", "lo_decimal", "hi_decimal"])?;
    for (lo, hi) in w.components() {
        let (ln, ld) = cantor::rational_parts(lo);
        let (hn, hd) = cantor::rational_parts(hi);
        out.write_record([ln, ld, hn, hd, report::dec(lo), report::dec(hi)])?;
    }
    out.flush()?;
    drop(out);

    writeln!(ctx.err, "depth ({dx}, {dy}): {} windows", w.len())?;
    writeln!(ctx.err, "measure_lower: {}", report::lower(&measure))?;
    writeln!(ctx.err, "measure_upper: {}", report::upper(&measure))?;

    if let Some(n) = a.classify_upto {
        if n == 0 {
            return Err(CliError::invalid("--classify-upto must be positive"));
        }
        let cap = a.precision_cap;
        let classes: Vec<SlopeClass> = ctx.pool.install(|| {
            (1..=n)
                .into_par_iter()
                .map_init(|| SlopeClassifier::new(w.clone(), cap), |c, i| c.classify(i))
                .collect()
        });
        let count = |k: SlopeClass| classes.iter().filter(|&&c| c == k).count();
        let inside = count(SlopeClass::InWindow);
        writeln!(
            ctx.err,
            "n in [1, {n}]: InWindow {inside}, Outside {}, Undecided {}, fraction {}",
            count(SlopeClass::Outside),
            count(SlopeClass::Undecided),
            report::dec(&BigRational::new(inside.into(), n.into()))
        )?;
    }
    Ok(())
}
