use std::io::Write;
use std::path::Path;

use polybase::numeral::to_digits;
use polybase::search::{self, Order, Search, SearchSpec, Step};
use polybase::Natural;
use rayon::prelude::*;

use super::{build_spec, dry_run};
use crate::args::{InspectArgs, MemberFormat, SearchArgs};
use crate::checkpoint;
use crate::error::{CliError, CliResult};
use crate::Ctx;

/// Subtrees handed to the pool. Fixed so that the work split, and therefore
/// every count, does not depend on the thread count.
const TARGET_PARTS: usize = 64;

fn bases(spec: &SearchSpec) -> Vec<u32> {
    std::iter::once(spec.generator().base())
        .chain(spec.filters().iter().map(|f| f.base()))
        .collect()
}

fn partition(spec: &SearchSpec) -> Vec<Vec<u32>> {
    let mut depth = 0;
    loop {
        let parts = spec.partition(depth);
        if parts.len() >= TARGET_PARTS || depth >= spec.width() {
            return parts;
        }
        depth += 1;
    }
}

struct Members<'w> {
    out: csv::Writer<&'w mut dyn Write>,
    format: MemberFormat,
    bases: Vec<u32>,
}

impl<'w> Members<'w> {
    fn new(out: &'w mut dyn Write, format: MemberFormat, bases: Vec<u32>, header: bool) -> CliResult<Self> {
        let mut out = csv::WriterBuilder::new().flexible(true).from_writer(out);
        if header && format == MemberFormat::Csv {
            let mut row = vec!["value".to_string()];
            row.extend(bases.iter().map(|b| format!("base{b}")));
            out.write_record(&row)?;
        }
        Ok(Members { out, format, bases })
    }

    fn emit(&mut self, v: &Natural) -> CliResult<()> {
        let mut row = vec![v.to_string()];
        if self.format == MemberFormat::Csv {
            for &b in &self.bases {
                row.push(to_digits(v, b)?.to_string());
            }
        }
        self.out.write_record(&row)?;
        Ok(())
    }

    fn finish(mut self) -> CliResult<()> {
        self.out.flush()?;
        Ok(())
    }
}

pub fn search(ctx: &mut Ctx<'_>, a: &SearchArgs) -> CliResult<()> {
    let spec = build_spec(&a.spec)?;
    if a.checkpoint_every == 0 {
        return Err(CliError::invalid("--checkpoint-every must be positive"));
    }
    if dry_run(ctx, || format!("search {}", spec.canonical_text()))? {
        return Ok(());
    }
    if a.largest {
        match search::largest_member_below(&spec) {
            Some(v) => Members::new(&mut *ctx.out, a.format, bases(&spec), true)?.emit(&v)?,
            None => writeln!(ctx.err, "no members")?,
        }
        return Ok(());
    }
    if let Some(path) = &a.checkpoint {
        return checkpointed(ctx, a, &spec, path);
    }

    let parts = partition(&spec);
    if a.count_only {
        let (members, nodes) = ctx.pool.install(|| {
            parts
                .par_iter()
                .map(|p| {
                    let mut s = Search::within(&spec, p, Order::Ascending);
                    let n = s.by_ref().count() as u64;
                    (n, s.nodes_visited())
                })
                .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1))
        });
        writeln!(ctx.out, "{members}")?;
        writeln!(ctx.err, "members {members}, nodes {nodes}")?;
        return Ok(());
    }
    let found: Vec<(Vec<Natural>, u64)> = ctx.pool.install(|| {
        parts
            .par_iter()
            .map(|p| {
                let mut s = Search::within(&spec, p, Order::Ascending);
                let v: Vec<Natural> = s.by_ref().collect();
                (v, s.nodes_visited())
            })
            .collect()
    });
    let mut w = Members::new(&mut *ctx.out, a.format, bases(&spec), true)?;
    let (mut members, mut nodes) = (0u64, 0u64);
    for (vs, n) in &found {
        for v in vs {
            w.emit(v)?;
        }
        members += vs.len() as u64;
        nodes += n;
    }
    w.finish()?;
    writeln!(ctx.err, "members {members}, nodes {nodes}")?;
    Ok(())
}

/// Single-threaded run that saves its position every `checkpoint_every` nodes.
fn checkpointed(ctx: &mut Ctx<'_>, a: &SearchArgs, spec: &SearchSpec, path: &Path) -> CliResult<()> {
    let mut s = if a.resume {
        let ck = checkpoint::read(path)?.to_checkpoint()?;
        mismatch(&ck.spec_digest, &spec.digest())?;
        Search::resume(spec, &ck)?
    } else {
        Search::new(spec, Order::Ascending)
    };
    let start = s.members_found();
    let mut w = Members::new(&mut *ctx.out, a.format, bases(spec), !a.count_only && start == 0)?;
    let mut saved = s.nodes_visited();
    loop {
        match s.step(a.checkpoint_every - (s.nodes_visited() - saved)) {
            Step::Member(v) => {
                if !a.count_only {
                    w.emit(&v)?;
                }
            }
            Step::Paused => {}
            Step::Exhausted => break,
        }
        if s.nodes_visited() - saved >= a.checkpoint_every {
            w.out.flush()?;
            checkpoint::write(path, &s.checkpoint())?;
            saved = s.nodes_visited();
        }
    }
    w.finish()?;
    checkpoint::write(path, &s.checkpoint())?;
    if a.count_only {
        writeln!(ctx.out, "{}", s.members_found())?;
    }
    writeln!(
        ctx.err,
        "members {} ({} this run), nodes {}",
        s.members_found(),
        s.members_found() - start,
        s.nodes_visited()
    )?;
    Ok(())
}

fn mismatch(found: &str, expected: &str) -> CliResult<()> {
    if found == expected {
        return Ok(());
    }
    Err(CliError::invalid(format!(
        "checkpoint mismatch: file was written for spec digest {found}, the given flags have digest {expected}"
    )))
}

pub fn inspect(ctx: &mut Ctx<'_>, a: &InspectArgs) -> CliResult<()> {
    let spec = match a.spec.below {
        Some(_) => Some(build_spec(&a.spec)?),
        None => None,
    };
    if dry_run(ctx, || format!("inspect {}", a.checkpoint.display()))? {
        return Ok(());
    }
    let file = checkpoint::read(&a.checkpoint)?;
    let stack: Vec<String> = file.prefix_stack.iter().map(|(p, d)| format!("{p}:{d}")).collect();
    writeln!(ctx.out, "spec_digest: {}", file.spec_digest)?;
    writeln!(ctx.out, "prefix_stack: [{}]", stack.join(" "))?;
    writeln!(ctx.out, "members_found: {}", file.members_found)?;
    writeln!(ctx.out, "largest_found: {}", file.largest_found.as_deref().unwrap_or("null"))?;
    writeln!(ctx.out, "elapsed_nodes: {}", file.elapsed_nodes)?;
    writeln!(ctx.out, "exhausted: {}", file.is_exhausted())?;
    if let Some(spec) = spec {
        ctx.out.flush()?;
        mismatch(&file.spec_digest, &spec.digest())?;
        writeln!(ctx.out, "digest_match: true")?;
    }
    Ok(())
}
