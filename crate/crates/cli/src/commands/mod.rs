pub mod budget;
pub mod numbers;
pub mod search;
pub mod sequence;

use polybase::search::{parse_natural, Filter, SearchSpec};
use polybase::{ConstraintSystem, DigitConstraint, Natural};

use crate::args::SpecArgs;
use crate::error::{CliError, CliResult};
use crate::Ctx;

pub fn natural(flag: &str, text: &str) -> CliResult<Natural> {
    parse_natural(text).map_err(|e| CliError::invalid(format!("--{flag}: {e}")))
}

fn constraint(flag: &str, text: &str) -> CliResult<DigitConstraint> {
    text.parse().map_err(|e| CliError::invalid(format!("--{flag}: {e}")))
}

/// Builds the search spec; without `--gen` the generator is picked from the
/// constraint system.
pub fn build_spec(a: &SpecArgs) -> CliResult<SearchSpec> {
    let below = a
        .below
        .as_deref()
        .ok_or_else(|| CliError::invalid("--below is required"))?;
    let hi = natural("below", below)?;
    let lo = natural("from", &a.from)?;
    if lo >= hi {
        return Err(CliError::invalid(format!("range [{lo}, {hi}) is empty")));
    }
    let filters = a
        .filters
        .iter()
        .map(|f| constraint("filter", f))
        .collect::<CliResult<Vec<_>>>()?;
    let spec = match &a.generator {
        Some(g) => SearchSpec::new(constraint("gen", g)?, filters.into_iter().map(Filter::from).collect(), lo, hi)?,
        None if filters.is_empty() => return Err(CliError::invalid("give --gen or at least one --filter")),
        None => SearchSpec::from_system(&ConstraintSystem::new(filters)?, lo, hi)?,
    };
    Ok(spec)
}

/// Reports a validated dry run; returns true when the caller should stop.
pub fn dry_run(ctx: &mut Ctx<'_>, what: impl FnOnce() -> String) -> CliResult<bool> {
    if ctx.dry_run {
        writeln!(ctx.err, "dry run: {} (threads {})", what(), ctx.threads)?;
    }
    Ok(ctx.dry_run)
}
