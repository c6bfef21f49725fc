use std::fmt;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet is empty")]
    Empty,
    #[error("alphabet symbol {0:?} is not a printable ASCII character")]
    BadSymbol(char),
    #[error("alphabet symbol {0:?} appears more than once")]
    Duplicate(char),
    #[error("alphabet size {0} exceeds the 26 lowercase Latin letters")]
    TooLarge(usize),
}

/// An ordered set of single-byte symbols that tokens are built from.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<u8>,
    member: [bool; 128],
}

impl Alphabet {
    /// The first `size` lowercase Latin letters.
    pub fn lowercase(size: usize) -> Result<Self, AlphabetError> {
        if size > 26 {
            return Err(AlphabetError::TooLarge(size));
        }
        Self::new(&(b'a'..b'a' + size as u8).map(char::from).collect::<String>())
    }

    pub fn new(symbols: &str) -> Result<Self, AlphabetError> {
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        let mut member = [false; 128];
        let mut out = Vec::with_capacity(symbols.len());
        for c in symbols.chars() {
            if !c.is_ascii_graphic() {
                return Err(AlphabetError::BadSymbol(c));
            }
            let b = c as u8;
            if member[b as usize] {
                return Err(AlphabetError::Duplicate(c));
            }
            member[b as usize] = true;
            out.push(b);
        }
        Ok(Self { symbols: out, member })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn as_string(&self) -> String {
        self.symbols.iter().map(|&b| b as char).collect()
    }

    pub fn contains(&self, c: char) -> bool {
        c.is_ascii() && self.member[c as usize]
    }

    /// First character of `token` that is not in the alphabet, if any.
    pub fn first_foreign(&self, token: &str) -> Option<char> {
        token.chars().find(|&c| !self.contains(c))
    }

    pub fn accepts(&self, token: &str) -> bool {
        !token.is_empty() && self.first_foreign(token).is_none()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u8 {
        self.symbols[rng.random_range(0..self.symbols.len())]
    }

    /// A string of `len` i.i.d. uniform symbols.
    pub fn random_string<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> String {
        (0..len).map(|_| self.sample(rng) as char).collect()
    }

    /// `len^n` as a float, the number of distinct strings of length `n`.
    pub fn space_size(&self, n: usize) -> f64 {
        (self.len() as f64).powi(n as i32)
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::lowercase(26).expect("26 letters")
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", self.as_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_26_lowercase() {
        let a = Alphabet::default();
        assert_eq!(a.len(), 26);
        assert!(a.accepts("hello"));
        assert!(!a.accepts("Hello"));
        assert!(!a.accepts(""));
        assert_eq!(a.first_foreign("a$b"), Some('$'));
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert_eq!(Alphabet::new(""), Err(AlphabetError::Empty));
        assert_eq!(Alphabet::new("aba"), Err(AlphabetError::Duplicate('a')));
        assert_eq!(Alphabet::new("a b"), Err(AlphabetError::BadSymbol(' ')));
        assert_eq!(Alphabet::new("aé"), Err(AlphabetError::BadSymbol('é')));
        assert_eq!(Alphabet::lowercase(27), Err(AlphabetError::TooLarge(27)));
    }

    #[test]
    fn non_ascii_is_never_contained() {
        assert!(!Alphabet::default().contains('ß'));
    }
}
