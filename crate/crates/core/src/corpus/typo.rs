//! Single-edit typo channel.

use std::fmt;

use rand::Rng;

use super::CorpusError;
use crate::alphabet::Alphabet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypoKind {
    Substitution,
    Deletion,
    Insertion,
    /// Swap of the characters at `position` and `position + 1`.
    Transposition,
}

impl TypoKind {
    pub const ALL: [TypoKind; 4] = [
        TypoKind::Substitution,
        TypoKind::Deletion,
        TypoKind::Insertion,
        TypoKind::Transposition,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TypoOp {
    pub kind: TypoKind,
    pub position: usize,
    /// New character for substitutions and insertions.
    pub replacement: Option<char>,
}

impl TypoOp {
    pub fn substitution(position: usize, replacement: char) -> Self {
        Self { kind: TypoKind::Substitution, position, replacement: Some(replacement) }
    }

    pub fn deletion(position: usize) -> Self {
        Self { kind: TypoKind::Deletion, position, replacement: None }
    }

    pub fn insertion(position: usize, replacement: char) -> Self {
        Self { kind: TypoKind::Insertion, position, replacement: Some(replacement) }
    }

    pub fn transposition(position: usize) -> Self {
        Self { kind: TypoKind::Transposition, position, replacement: None }
    }
}

impl fmt::Display for TypoOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.kind, self.position)?;
        if let Some(c) = self.replacement {
            write!(f, "={c}")?;
        }
        Ok(())
    }
}

/// Applies exactly one edit to `word`.
///
/// Edits that would leave the word unchanged (substituting a character with
/// itself, swapping two equal neighbours) are rejected along with
/// out-of-range positions and deletions that would empty the token.
pub fn apply_typo_op(word: &str, op: TypoOp) -> Result<String, CorpusError> {
    let mut chars: Vec<char> = word.chars().collect();
    let len = chars.len();
    let invalid = |why: &str| Err(CorpusError::InvalidOp(format!("{op} on {word:?}: {why}")));
    match op.kind {
        TypoKind::Substitution => {
            let Some(c) = op.replacement else { return invalid("missing replacement") };
            if op.position >= len {
                return invalid("position out of range");
            }
            if chars[op.position] == c {
                return invalid("replacement equals the original character");
            }
            chars[op.position] = c;
        }
        TypoKind::Deletion => {
            if op.position >= len {
                return invalid("position out of range");
            }
            if len == 1 {
                return invalid("would produce an empty token");
            }
            chars.remove(op.position);
        }
        TypoKind::Insertion => {
            let Some(c) = op.replacement else { return invalid("missing replacement") };
            if op.position > len {
                return invalid("position out of range");
            }
            chars.insert(op.position, c);
        }
        TypoKind::Transposition => {
            if op.position + 1 >= len {
                return invalid("position out of range");
            }
            if chars[op.position] == chars[op.position + 1] {
                return invalid("swapped characters are equal");
            }
            chars.swap(op.position, op.position + 1);
        }
    }
    Ok(chars.into_iter().collect())
}

/// Draws one valid edit for `word`: the kind uniformly among kinds that have
/// at least one valid position, then a uniform valid position and
/// replacement.
pub fn random_typo<R: Rng + ?Sized>(word: &str, alphabet: &Alphabet, rng: &mut R) -> TypoOp {
    let bytes = word.as_bytes();
    let len = bytes.len();
    let swappable: Vec<usize> = (0..len.saturating_sub(1)).filter(|&i| bytes[i] != bytes[i + 1]).collect();

    let mut kinds = Vec::with_capacity(4);
    if alphabet.len() >= 2 && len >= 1 {
        kinds.push(TypoKind::Substitution);
    }
    if len >= 2 {
        kinds.push(TypoKind::Deletion);
    }
    kinds.push(TypoKind::Insertion);
    if !swappable.is_empty() {
        kinds.push(TypoKind::Transposition);
    }

    match kinds[rng.random_range(0..kinds.len())] {
        TypoKind::Substitution => {
            let position = rng.random_range(0..len);
            let original = bytes[position];
            // Uniform over the other A-1 symbols.
            let mut pick = rng.random_range(0..alphabet.len() - 1);
            let symbols = alphabet.symbols();
            if symbols[pick] == original {
                pick = alphabet.len() - 1;
            }
            TypoOp::substitution(position, symbols[pick] as char)
        }
        TypoKind::Deletion => TypoOp::deletion(rng.random_range(0..len)),
        TypoKind::Insertion => {
            let position = rng.random_range(0..=len);
            TypoOp::insertion(position, alphabet.sample(rng) as char)
        }
        TypoKind::Transposition => {
            TypoOp::transposition(swappable[rng.random_range(0..swappable.len())])
        }
    }
}
