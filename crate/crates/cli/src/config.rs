//! Flat `key = value` configuration files.
//!
//! Keys are long flag names without the leading dashes; `_` and `-` are
//! interchangeable. `#` starts a comment. Boolean flags take `true` or
//! `false`.

use clap::ArgAction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Split config text into entries, collecting one message per bad line.
pub fn parse_config(text: &str) -> Result<Vec<Entry>, Vec<String>> {
    let mut entries: Vec<Entry> = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            errors.push(format!("config line {line}: expected key = value, got {content:?}"));
            continue;
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value)
            .to_string();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            errors.push(format!("config line {line}: invalid key {key:?}"));
            continue;
        }
        if let Some(prev) = entries.iter().find(|e| e.key == key) {
            errors.push(format!(
                "config line {line}: key {key:?} already set on line {}",
                prev.line
            ));
            continue;
        }
        entries.push(Entry { line, key, value });
    }
    if errors.is_empty() {
        Ok(entries)
    } else {
        Err(errors)
    }
}

/// Turn entries into flag tokens for `sub`, checking every key against its
/// arguments and every value against the argument's parser.
pub fn to_flags(sub: &clap::Command, entries: &[Entry]) -> Result<Vec<String>, Vec<String>> {
    let mut flags = Vec::new();
    let mut errors = Vec::new();
    for e in entries {
        if e.key == "config" {
            errors.push(format!(
                "config line {}: a config file cannot name another config file",
                e.line
            ));
            continue;
        }
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(e.key.as_str())) else {
            errors.push(format!(
                "config line {}: unknown key {:?} for {}",
                e.line,
                e.key,
                sub.get_name()
            ));
            continue;
        };
        let tokens = if matches!(arg.get_action(), ArgAction::SetTrue) {
            match e.value.as_str() {
                "true" => vec![format!("--{}", e.key)],
                "false" => vec![],
                v => {
                    errors.push(format!(
                        "config line {}: {} expects true or false, got {v:?}",
                        e.line, e.key
                    ));
                    continue;
                }
            }
        } else {
            vec![format!("--{}", e.key), e.value.clone()]
        };
        // Parse this flag on its own so that every bad value is reported.
        let probe = std::iter::once(sub.get_name().to_string()).chain(tokens.iter().cloned());
        if let Err(err) = sub.clone().try_get_matches_from(probe) {
            let msg = err.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            errors.push(format!("config line {}: {first}", e.line));
            continue;
        }
        flags.extend(tokens);
    }
    if errors.is_empty() {
        Ok(flags)
    } else {
        Err(errors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries_and_comments() {
        let text = "# header\nbeta = 0.5\n\nq_e=0.9  # trailing\nout = \"dir with space\"\n";
        let e = parse_config(text).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!((e[0].key.as_str(), e[0].value.as_str(), e[0].line), ("beta", "0.5", 2));
        assert_eq!(e[1].key, "q-e");
        assert_eq!(e[2].value, "dir with space");
    }

    #[test]
    fn collects_every_bad_line() {
        let errs = parse_config("beta\n= 3\nbeta = 1\nbeta = 2\nfoo bar = 1\n").unwrap_err();
        assert_eq!(errs.len(), 4, "{errs:?}");
        assert!(errs[0].contains("line 1"));
        assert!(errs[2].contains("already set"));
    }
}
