//! `key=value` config files merged into argv before clap sees it.
//!
//! Keys are long flag names (`tau-from` or `tau_from`). A key is injected only
//! when the chosen subcommand accepts it and the flag is absent from argv, so
//! command-line flags always win.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;
use crate::error::CliError;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Validation(format!("config line {}: expected key=value", i + 1))
        })?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Validation(format!(
                "config line {}: empty key",
                i + 1
            )));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
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

fn has_flag(argv: &[OsString], long: &str) -> bool {
    let flag = format!("--{long}");
    let with_value = format!("--{long}=");
    argv.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag.as_str() || s.starts_with(&with_value)
    })
}

/// argv with the config file's values appended for flags not given explicitly.
pub fn merge(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|e| {
        CliError::Validation(format!(
            "cannot read config {}: {e}",
            path.to_string_lossy()
        ))
    })?;
    let entries = parse(&text)?;

    let cmd = Cli::command();
    let sub = argv
        .iter()
        .skip(1)
        .find_map(|a| cmd.find_subcommand(a.to_string_lossy().as_ref()));
    let known_anywhere = |key: &str| {
        cmd.get_arguments().any(|a| a.get_long() == Some(key))
            || cmd
                .get_subcommands()
                .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key)))
    };

    let mut merged = argv.clone();
    for (key, value) in entries {
        if key == "config" || !known_anywhere(&key) {
            return Err(CliError::Validation(format!("unknown config key `{key}`")));
        }
        let arg = sub
            .and_then(|s| {
                s.get_arguments()
                    .find(|a| a.get_long() == Some(key.as_str()))
            })
            .or_else(|| {
                cmd.get_arguments()
                    .find(|a| a.get_long() == Some(key.as_str()))
            });
        let Some(arg) = arg else {
            // belongs to a different subcommand
            continue;
        };
        if has_flag(&argv, &key) {
            continue;
        }
        if matches!(arg.get_action(), clap::ArgAction::SetTrue) {
            match value.as_str() {
                "true" | "1" | "yes" => merged.push(format!("--{key}").into()),
                "false" | "0" | "no" => {}
                other => {
                    return Err(CliError::Validation(format!(
                        "config key `{key}` expects true/false, got `{other}`"
                    )))
                }
            }
        } else {
            merged.push(format!("--{key}").into());
            merged.push(value.into());
        }
    }
    Ok(merged)
}
