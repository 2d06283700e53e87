//! Plain key=value configuration files and the size-list syntax used by
//! experiment sweeps.

use std::collections::BTreeMap;
use std::path::Path;

/// One `key = value` pair per line; `#` starts a comment.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key=value in {raw:?}", lineno + 1));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

pub fn load(path: &Path) -> Result<BTreeMap<String, String>, crate::Failure> {
    let text = std::fs::read_to_string(path).map_err(crate::Failure::Io)?;
    parse(&text).map_err(crate::Failure::Usage)
}

/// Size lists: `10..160` (inclusive), `8..48:2` (with step), or `12,16,20`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    let parse_one = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad size {s:?} in {text:?}"))
    };
    if let Some((lo, rest)) = text.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (parse_one(hi)?, parse_one(step)?),
            None => (parse_one(rest)?, 1),
        };
        if step == 0 {
            return Err(format!("zero step in {text:?}"));
        }
        return Ok((parse_one(lo)?..=hi).step_by(step).collect());
    }
    text.split(',').map(parse_one).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_comments_and_blanks() {
        let cfg = parse("a = 1\n# note\n\nns = 8..12:2 # trailing\n").unwrap();
        assert_eq!(cfg["a"], "1");
        assert_eq!(cfg["ns"], "8..12:2");
        assert_eq!(cfg.len(), 2);
        assert!(parse("just words").is_err());
    }

    #[test]
    fn parses_all_three_size_syntaxes() {
        assert_eq!(parse_sizes("10..13").unwrap(), vec![10, 11, 12, 13]);
        assert_eq!(parse_sizes("8..14:3").unwrap(), vec![8, 11, 14]);
        assert_eq!(parse_sizes("12, 16,20").unwrap(), vec![12, 16, 20]);
        assert!(parse_sizes("8..x").is_err());
        assert!(parse_sizes("8..16:0").is_err());
    }
}
