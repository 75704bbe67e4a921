//! `key = value` run files. Keys are long flag names without the dashes;
//! flags given on the command line win over the file.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// One `key = value` pair and the line it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse_config(text: &str, origin: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return Err(ConfigError(format!(
                "{origin}:{line}: expected `key = value`, found `{}`",
                raw.trim()
            )));
        };
        let (key, value) = (k.trim(), v.trim());
        if key.is_empty() || value.is_empty() || key.contains(char::is_whitespace) {
            return Err(ConfigError(format!(
                "{origin}:{line}: malformed entry `{}`",
                raw.trim()
            )));
        }
        if let Some(prev) = entries.iter().find(|e| e.key == key) {
            return Err(ConfigError(format!(
                "{origin}:{line}: `{key}` already set on line {}",
                prev.line
            )));
        }
        entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    Ok(entries)
}

pub fn load_config(path: &Path) -> Result<Vec<Entry>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config(&text, &path.display().to_string())
}

/// Pull `--config PATH` (or `--config=PATH`) out of `argv`.
pub fn take_config_flag(argv: &mut Vec<String>) -> Result<Option<String>, ConfigError> {
    let Some(i) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(None);
    };
    let arg = argv.remove(i);
    if let Some(v) = arg.strip_prefix("--config=") {
        return Ok(Some(v.to_string()));
    }
    if i < argv.len() {
        Ok(Some(argv.remove(i)))
    } else {
        Err(ConfigError("--config needs a path".into()))
    }
}

/// Splice file entries into `argv` after the subcommand, skipping keys the
/// command line already sets. `flags_of` lists the long flags a subcommand
/// accepts; a `command` key supplies the subcommand when `argv` has none.
pub fn merge_into_argv(
    argv: &mut Vec<String>,
    entries: &[Entry],
    subcommands: &[&str],
    flags_of: impl Fn(&str) -> Vec<String>,
    origin: &str,
) -> Result<(), ConfigError> {
    let mut pos = argv
        .iter()
        .skip(1)
        .position(|a| subcommands.contains(&a.as_str()))
        .map(|p| p + 1);
    if pos.is_none() {
        if let Some(e) = entries.iter().find(|e| e.key == "command") {
            if !subcommands.contains(&e.value.as_str()) {
                return Err(ConfigError(format!(
                    "{origin}:{}: unknown command `{}` (expected one of {})",
                    e.line,
                    e.value,
                    subcommands.join(", ")
                )));
            }
            argv.insert(1.min(argv.len()), e.value.clone());
            pos = Some(1);
        }
    }
    let Some(pos) = pos else {
        return Ok(());
    };
    let command = argv[pos].clone();
    let given: BTreeSet<String> = argv
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    let known = flags_of(&command);
    let mut extra = Vec::new();
    for e in entries {
        if e.key == "command" {
            if e.value != command {
                return Err(ConfigError(format!(
                    "{origin}:{}: file is for `{}` but the command line runs `{command}`",
                    e.line, e.value
                )));
            }
            continue;
        }
        if !known.contains(&e.key) {
            return Err(ConfigError(format!(
                "{origin}:{}: `{}` is not an option of `{command}`",
                e.line, e.key
            )));
        }
        if !given.contains(&e.key) {
            extra.push(format!("--{}={}", e.key, e.value));
        }
    }
    argv.splice(pos + 1..pos + 1, extra);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn flags(_: &str) -> Vec<String> {
        vec!["n".into(), "alpha".into(), "out".into()]
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let e = parse_config("# run\n\nn = 3  # dimension\nalpha=0.5\n", "f").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].key.as_str(), e[0].value.as_str(), e[0].line), ("n", "3", 3));
    }

    #[test]
    fn malformed_line_is_named() {
        let err = parse_config("n = 3\nalpha 0.5\n", "run.cfg").unwrap_err();
        assert!(err.0.starts_with("run.cfg:2:"), "{err}");
        let dup = parse_config("n = 3\nn = 4\n", "run.cfg").unwrap_err();
        assert!(dup.0.contains(":2:") && dup.0.contains("line 1"), "{dup}");
    }

    #[test]
    fn flags_override_the_file() {
        let entries = parse_config("n = 3\nalpha = 0.5\n", "f").unwrap();
        let mut a = argv("hypmax mean --n 2");
        merge_into_argv(&mut a, &entries, &["mean"], flags, "f").unwrap();
        assert_eq!(a, argv("hypmax mean --alpha=0.5 --n 2"));
    }

    #[test]
    fn empty_file_leaves_flags_alone() {
        let mut a = argv("hypmax mean --n 2 --alpha 1");
        merge_into_argv(&mut a, &[], &["mean"], flags, "f").unwrap();
        assert_eq!(a, argv("hypmax mean --n 2 --alpha 1"));
    }

    #[test]
    fn file_can_name_the_command() {
        let entries = parse_config("command = mean\nn = 3\n", "f").unwrap();
        let mut a = argv("hypmax");
        merge_into_argv(&mut a, &entries, &["mean"], flags, "f").unwrap();
        assert_eq!(a, argv("hypmax mean --n=3"));
        let bad = parse_config("n = 3\nwidth = 2\n", "f").unwrap();
        let err = merge_into_argv(&mut argv("hypmax mean"), &bad, &["mean"], flags, "f").unwrap_err();
        assert!(err.0.starts_with("f:2:"), "{err}");
    }

    #[test]
    fn config_flag_is_extracted() {
        let mut a = argv("hypmax --config run.cfg mean --n 2");
        assert_eq!(take_config_flag(&mut a).unwrap().as_deref(), Some("run.cfg"));
        assert_eq!(a, argv("hypmax mean --n 2"));
        let mut b = argv("hypmax mean --config=x");
        assert_eq!(take_config_flag(&mut b).unwrap().as_deref(), Some("x"));
    }
}
