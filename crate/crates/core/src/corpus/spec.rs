//! Generation parameters for a Zipf + typo + injection reservoir, and their
//! flat `key=value` file form.

use std::fmt::Write as _;
use std::str::FromStr;

use super::CorpusError;
use crate::alphabet::Alphabet;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub vocab_size: usize,
    pub zipf_exponent: f64,
    pub total_tokens: usize,
    pub doc_count: usize,
    /// Inclusive `(min, max)` length of vocabulary words and injected strings.
    pub word_length_range: (usize, usize),
    pub typo_prob: f64,
    pub inject_prob: f64,
    pub seed: u64,
    pub alphabet: Alphabet,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            vocab_size: 10_000,
            zipf_exponent: 1.0,
            total_tokens: 1_000_000,
            doc_count: 100_000,
            word_length_range: (2, 8),
            typo_prob: 0.05,
            inject_prob: 0.01,
            seed: 0,
            alphabet: Alphabet::default(),
        }
    }
}

pub const SPEC_KEYS: [&str; 9] = [
    "vocab_size",
    "zipf_exponent",
    "total_tokens",
    "doc_count",
    "word_length_range",
    "typo_prob",
    "inject_prob",
    "seed",
    "alphabet",
];

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let fail = |msg: String| Err(CorpusError::InvalidSpec(msg));
        if self.vocab_size == 0 {
            return fail("vocab_size must be at least 1".into());
        }
        if !(self.zipf_exponent.is_finite() && self.zipf_exponent >= 0.0) {
            return fail(format!("zipf_exponent must be nonnegative, got {}", self.zipf_exponent));
        }
        if self.doc_count == 0 {
            return fail("doc_count must be at least 1".into());
        }
        let (lo, hi) = self.word_length_range;
        if lo == 0 || lo > hi {
            return fail(format!("word_length_range must satisfy 1 <= min <= max, got {lo},{hi}"));
        }
        for (name, p) in [("typo_prob", self.typo_prob), ("inject_prob", self.inject_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        Ok(())
    }

    /// Sets one field from its textual form. Keys are the field names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CorpusError> {
        let value = value.trim();
        match key {
            "vocab_size" => self.vocab_size = parse(key, value)?,
            "zipf_exponent" => self.zipf_exponent = parse(key, value)?,
            "total_tokens" => self.total_tokens = parse_count(key, value)?,
            "doc_count" => self.doc_count = parse_count(key, value)?,
            "word_length_range" => {
                let (lo, hi) = value.split_once(',').ok_or_else(|| {
                    CorpusError::InvalidSpec(format!("word_length_range must be `min,max`, got {value:?}"))
                })?;
                self.word_length_range = (parse(key, lo.trim())?, parse(key, hi.trim())?);
            }
            "typo_prob" => self.typo_prob = parse(key, value)?,
            "inject_prob" => self.inject_prob = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "alphabet" => {
                self.alphabet = Alphabet::new(value)
                    .map_err(|e| CorpusError::InvalidSpec(format!("alphabet: {e}")))?
            }
            other => return Err(CorpusError::InvalidSpec(format!("unknown spec key {other:?}"))),
        }
        Ok(())
    }

    /// Parses a spec file. Unlisted keys keep their defaults; `#` starts a
    /// comment line.
    pub fn parse_file(text: &str) -> Result<Self, CorpusError> {
        let mut spec = Self::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CorpusError::Parse {
                line: no + 1,
                message: format!("expected key=value, got {line:?}"),
            })?;
            spec.set(key.trim(), value).map_err(|e| CorpusError::Parse {
                line: no + 1,
                message: e.to_string(),
            })?;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_file(&self) -> String {
        let mut out = String::new();
        let (lo, hi) = self.word_length_range;
        let _ = writeln!(out, "vocab_size={}", self.vocab_size);
        let _ = writeln!(out, "zipf_exponent={}", self.zipf_exponent);
        let _ = writeln!(out, "total_tokens={}", self.total_tokens);
        let _ = writeln!(out, "doc_count={}", self.doc_count);
        let _ = writeln!(out, "word_length_range={lo},{hi}");
        let _ = writeln!(out, "typo_prob={}", self.typo_prob);
        let _ = writeln!(out, "inject_prob={}", self.inject_prob);
        let _ = writeln!(out, "seed={}", self.seed);
        let _ = writeln!(out, "alphabet={}", self.alphabet.as_string());
        out
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CorpusError> {
    value
        .parse()
        .map_err(|_| CorpusError::InvalidSpec(format!("{key}: cannot parse {value:?}")))
}

/// Integer counts may be written as `1e6` or `26^3` in addition to plain digits.
pub fn parse_count(key: &str, value: &str) -> Result<usize, CorpusError> {
    let bad = || CorpusError::InvalidSpec(format!("{key}: cannot parse count {value:?}"));
    if let Ok(n) = value.parse::<usize>() {
        return Ok(n);
    }
    if let Some((base, exp)) = value.split_once('^') {
        let base: usize = base.trim().parse().map_err(|_| bad())?;
        let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
        return base.checked_pow(exp).ok_or_else(bad);
    }
    let x: f64 = value.parse().map_err(|_| bad())?;
    if x >= 0.0 && x.fract() == 0.0 && x < 1e18 {
        Ok(x as usize)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip() {
        let spec = CorpusSpec {
            vocab_size: 12,
            zipf_exponent: 1.25,
            total_tokens: 77,
            doc_count: 5,
            word_length_range: (3, 4),
            typo_prob: 0.125,
            inject_prob: 0.5,
            seed: u64::MAX,
            alphabet: Alphabet::new("xyz").unwrap(),
        };
        assert_eq!(CorpusSpec::parse_file(&spec.to_file()).unwrap(), spec);
    }

    #[test]
    fn keys_match_field_names() {
        let text = CorpusSpec::default().to_file();
        let keys: Vec<&str> = text.lines().map(|l| l.split_once('=').unwrap().0).collect();
        assert_eq!(keys, SPEC_KEYS);
    }

    #[test]
    fn count_notations() {
        assert_eq!(parse_count("t", "17576").unwrap(), 17576);
        assert_eq!(parse_count("t", "26^3").unwrap(), 17576);
        assert_eq!(parse_count("t", "1e6").unwrap(), 1_000_000);
        assert!(parse_count("t", "1.5").is_err());
        assert!(parse_count("t", "-3").is_err());
    }

    #[test]
    fn invalid_specs() {
        let cases = [
            "vocab_size=0",
            "doc_count=0",
            "word_length_range=0,3",
            "word_length_range=4,3",
            "typo_prob=1.5",
            "inject_prob=-0.1",
            "zipf_exponent=-1",
        ];
        for text in cases {
            assert!(CorpusSpec::parse_file(text).is_err(), "{text}");
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = CorpusSpec::parse_file("seed=1\n\nbogus=3\n").unwrap_err();
        assert!(matches!(err, CorpusError::Parse { line: 3, .. }), "{err:?}");
    }
}
