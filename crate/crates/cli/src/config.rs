//! `key = value` config files merged into the argument list.
//!
//! Keys are long flag names without the dashes. Keys before any header apply
//! to every subcommand; keys under `[name]` apply only to subcommand `name`.
//! A key is skipped when the command line already sets that flag, so flags
//! always win. `true` turns a switch on; `false` leaves it off.

use std::ffi::OsString;
use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub section: Option<String>,
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut section = None;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = Some(name.trim().to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::invalid(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = key.trim();
        if key.is_empty() || key.starts_with('-') {
            return Err(CliError::invalid(format!("config line {}: bad key {key:?}", i + 1)));
        }
        out.push(Entry {
            section: section.clone(),
            key: key.to_string(),
            value: value.trim().trim_matches('"').to_string(),
            line: i + 1,
        });
    }
    Ok(out)
}

/// The `--config` path in `args`, if any.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn subcommand(args: &[OsString]) -> Option<String> {
    // The first bare word after the program name; global flags taking values
    // are skipped together with their value.
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if matches!(s.as_ref(), "--threads" | "--config" | "--output" | "-o") {
            it.next();
            continue;
        }
        if !s.starts_with('-') {
            return Some(s.into_owned());
        }
    }
    None
}

fn mentions(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&prefix)
    })
}

/// Appends config entries that the command line does not already set.
pub fn merge(args: Vec<OsString>, entries: &[Entry]) -> Vec<OsString> {
    let sub = subcommand(&args);
    let mut out = args.clone();
    for e in entries {
        if e.section.is_some() && e.section != sub {
            continue;
        }
        if e.key == "config" || mentions(&args, &e.key) {
            continue;
        }
        match e.value.as_str() {
            "true" => out.push(format!("--{}", e.key).into()),
            "false" => {}
            v => {
                out.push(format!("--{}", e.key).into());
                out.push(v.into());
            }
        }
    }
    out
}

pub fn load_and_merge(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse(&text)?;
    Ok(merge(args, &entries))
}
