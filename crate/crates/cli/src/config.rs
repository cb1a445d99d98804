//! `--config FILE` support: `key = value` lines become flags placed right
//! after the subcommand, so explicit flags (parsed later) override them.

use std::ffi::OsString;
use std::fs;

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`", i + 1))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key `{}`", i + 1, key));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

fn to_flags(entries: Vec<(String, String)>) -> Vec<OsString> {
    let mut out = Vec::new();
    for (key, value) in entries {
        match value.as_str() {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    out
}

/// Removes `--config PATH` from `args` and splices the file's entries in
/// after the subcommand name.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = Some(it.next().ok_or("--config needs a path")?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.into());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let flags = to_flags(parse_config(&text)?);
    let at = rest.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map_or(rest.len(), |i| i + 2);
    rest.splice(at..at, flags);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_booleans() {
        let cfg = parse_config("# run\nn = 3\np=0.8 # inline\nno_timestamp = true\nquiet = false\n").unwrap();
        assert_eq!(cfg[0], ("n".into(), "3".into()));
        assert_eq!(cfg[2], ("no-timestamp".into(), "true".into()));
        let flags = to_flags(cfg);
        assert_eq!(flags, ["--n", "3", "--p", "0.8", "--no-timestamp"].map(OsString::from));
        assert!(parse_config("just words").is_err());
    }

    #[test]
    fn splices_after_subcommand() {
        let dir = std::env::temp_dir().join(format!("cyclespace-cfg-{}", std::process::id()));
        fs::write(&dir, "n = 2\n").unwrap();
        let args: Vec<OsString> =
            ["cyclespace", "dl-experiment", "--config", dir.to_str().unwrap(), "--n", "3"].map(Into::into).into();
        let merged = merge_config(args).unwrap();
        assert_eq!(merged, ["cyclespace", "dl-experiment", "--n", "2", "--n", "3"].map(OsString::from));
        fs::remove_file(dir).unwrap();
    }
}
