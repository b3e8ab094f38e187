//! Flat `key = value` config files. Keys are long flag names of the chosen
//! subcommand; values on the command line win.

use clap::Command;

use crate::error::{Error, Result};

pub fn parse_config(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Config {
                line: i + 1,
                reason: "expected key = value".into(),
            });
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Error::Config {
                line: i + 1,
                reason: "empty key".into(),
            });
        }
        if out.iter().any(|(_, seen, _)| *seen == key) {
            return Err(Error::Config {
                line: i + 1,
                reason: format!("`{key}` set twice"),
            });
        }
        out.push((i + 1, key, v.trim().to_string()));
    }
    Ok(out)
}

/// Turns config entries into flags for `sub`. Boolean switches take
/// `true`/`false`.
pub fn config_args(cmd: &Command, sub: &str, entries: &[(usize, String, String)]) -> Result<Vec<String>> {
    let sub_cmd = cmd.find_subcommand(sub).ok_or_else(|| Error::Config {
        line: 0,
        reason: format!("unknown subcommand `{sub}`"),
    })?;
    let mut args = Vec::new();
    for (line, key, value) in entries {
        if key == "config" {
            return Err(Error::Config {
                line: *line,
                reason: "config files cannot include other config files".into(),
            });
        }
        let arg = sub_cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| Error::Config {
                line: *line,
                reason: format!("`{key}` is not an option of `{sub}`"),
            })?;
        if arg.get_action().takes_values() {
            args.push(format!("--{key}"));
            args.push(value.clone());
        } else {
            match value.as_str() {
                "true" => args.push(format!("--{key}")),
                "false" => {}
                _ => {
                    return Err(Error::Config {
                        line: *line,
                        reason: format!("`{key}` takes true or false"),
                    })
                }
            }
        }
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_spacing() {
        let c = parse_config("# run\nseed = 7\n\nfeatures=user,linguistic\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0], (2, "seed".into(), "7".into()));
        assert_eq!(c[1].2, "user,linguistic");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_config("seed 7"), Err(Error::Config { line: 1, .. })));
        assert!(matches!(parse_config("seed=1\nseed=2"), Err(Error::Config { line: 2, .. })));
    }
}
