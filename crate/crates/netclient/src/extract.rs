use regex::Regex;

use crate::NetError;

/// Characters accepted as digit-group separators inside a count.
const SEPARATORS: [char; 8] = [',', '.', ' ', '_', '\'', '\u{a0}', '\u{202f}', '\u{2019}'];

/// Compiled count pattern with exactly one capture group.
#[derive(Debug, Clone)]
pub struct CountPattern(Regex);

impl CountPattern {
    pub fn new(pattern: &str) -> Result<Self, NetError> {
        let re = Regex::new(pattern).map_err(|e| NetError::Config(format!("count_pattern: {e}")))?;
        if re.captures_len() != 2 {
            return Err(NetError::Config(format!(
                "count_pattern must have exactly one capture group, found {}",
                re.captures_len() - 1
            )));
        }
        Ok(Self(re))
    }

    /// The first match's group with separators stripped, as an integer.
    pub fn extract(&self, body: &str) -> Result<u64, NetError> {
        let caps = self
            .0
            .captures(body)
            .ok_or_else(|| NetError::Parse(format!("count pattern {:?} did not match", self.0.as_str())))?;
        let raw = caps.get(1).map_or("", |m| m.as_str());
        let digits: String = raw.chars().filter(|c| !SEPARATORS.contains(c)).collect();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(NetError::Parse(format!("captured {raw:?} is not a digit-grouped integer")));
        }
        digits.parse().map_err(|_| NetError::Parse(format!("count {raw:?} overflows")))
    }
}

pub fn extract_count(body: &str, count_pattern: &str) -> Result<u64, NetError> {
    CountPattern::new(count_pattern)?.extract(body)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ABOUT: &str = r"About ([0-9][0-9,]*)";

    #[test]
    fn grouped_digits() {
        assert_eq!(extract_count("About 1,234 results", ABOUT).unwrap(), 1234);
        assert_eq!(extract_count("About 0 results", ABOUT).unwrap(), 0);
        assert_eq!(extract_count("x About 7 y About 9", ABOUT).unwrap(), 7);
        assert_eq!(extract_count("Ungefähr 1.234.567 Ergebnisse", r"([0-9][0-9.]*) Ergebnisse").unwrap(), 1_234_567);
    }

    #[test]
    fn no_match_is_an_error_not_zero() {
        assert!(matches!(extract_count("no results found", ABOUT), Err(NetError::Parse(_))));
    }

    #[test]
    fn overflow_and_garbage() {
        assert!(matches!(
            extract_count("About 99,999,999,999,999,999,999 results", ABOUT),
            Err(NetError::Parse(_))
        ));
        assert!(matches!(extract_count("About , results", ABOUT), Err(NetError::Parse(_))));
        assert!(matches!(extract_count("n=12a", r"n=(\w+)"), Err(NetError::Parse(_))));
    }
}
