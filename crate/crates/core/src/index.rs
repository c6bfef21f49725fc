//! Exact-match token index: the local stand-in for a search engine.
//!
//! The result count `E` of a query is its document frequency, the number of
//! documents that contain the query as a whole token.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::corpus::Corpus;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("query {query:?} contains {symbol:?}, which is outside the alphabet")]
    InvalidQuery { query: String, symbol: char },
    #[error("empty query")]
    EmptyQuery,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Posting {
    pub doc_freq: u64,
    /// Total occurrences; diagnostics only.
    pub occ_count: u64,
}

#[derive(Debug, Clone)]
pub struct Index {
    alphabet: Alphabet,
    table: HashMap<Box<str>, Posting>,
    census: BTreeMap<usize, u64>,
    doc_count: usize,
}

impl Index {
    pub fn build(corpus: &Corpus) -> Self {
        let mut table: HashMap<Box<str>, Posting> = HashMap::new();
        let mut scratch: Vec<&str> = Vec::new();
        for doc in corpus.documents() {
            scratch.clear();
            scratch.extend(doc.tokens());
            scratch.sort_unstable();
            for group in scratch.chunk_by(|a, b| a == b) {
                let posting = match table.get_mut(group[0]) {
                    Some(p) => p,
                    None => table.entry(group[0].into()).or_default(),
                };
                posting.doc_freq += 1;
                posting.occ_count += group.len() as u64;
            }
        }
        let mut census = BTreeMap::new();
        for token in table.keys() {
            *census.entry(token.len()).or_insert(0) += 1;
        }
        Self { alphabet: corpus.alphabet().clone(), table, census, doc_count: corpus.doc_count() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn distinct_tokens(&self) -> usize {
        self.table.len()
    }

    pub fn posting(&self, token: &str) -> Option<Posting> {
        self.table.get(token).copied()
    }

    /// Result count `E` for `query`: its document frequency, 0 when absent.
    pub fn lookup(&self, query: &str) -> Result<u64, IndexError> {
        if query.is_empty() {
            return Err(IndexError::EmptyQuery);
        }
        if let Some(symbol) = self.alphabet.first_foreign(query) {
            return Err(IndexError::InvalidQuery { query: query.to_owned(), symbol });
        }
        Ok(self.table.get(query).map_or(0, |p| p.doc_freq))
    }

    /// Number of distinct token types of length `n`.
    pub fn distinct_by_length(&self, n: usize) -> u64 {
        self.census.get(&n).copied().unwrap_or(0)
    }

    /// Exact order parameter `D_N / A^N`: the probability that a uniform
    /// random length-`n` query has a nonzero result count.
    pub fn exact_order_parameter(&self, n: usize) -> f64 {
        self.distinct_by_length(n) as f64 / self.alphabet.space_size(n)
    }

    pub fn length_census(&self) -> &BTreeMap<usize, u64> {
        &self.census
    }

    /// Iterates `(token, posting)` in lexicographic token order.
    pub fn sorted_entries(&self) -> Vec<(&str, Posting)> {
        let mut entries: Vec<(&str, Posting)> = self.table.iter().map(|(k, v)| (&**k, *v)).collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(b.0));
        entries
    }

    /// Snapshot file: header `A=<size> docs=<count>`, then
    /// `token doc_freq occ_count` lines in lexicographic order.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "A={} docs={}", self.alphabet.len(), self.doc_count)?;
        for (token, p) in self.sorted_entries() {
            writeln!(out, "{token} {} {}", p.doc_freq, p.occ_count)?;
        }
        out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Index {
        let corpus = Corpus::from_documents(
            Alphabet::default(),
            [vec!["ab", "cd", "ab"], vec!["ab"], vec!["ef"]],
        )
        .unwrap();
        Index::build(&corpus)
    }

    #[test]
    fn postings() {
        let index = example();
        assert_eq!(index.posting("ab"), Some(Posting { doc_freq: 2, occ_count: 3 }));
        assert_eq!(index.lookup("ab"), Ok(2));
        assert_eq!(index.lookup("zz"), Ok(0));
        assert_eq!(index.doc_count(), 3);
    }

    #[test]
    fn census() {
        let index = example();
        assert_eq!(index.distinct_by_length(2), 3);
        assert_eq!(index.distinct_by_length(5), 0);
        assert!((index.exact_order_parameter(2) - 3.0 / 676.0).abs() < 1e-15);
    }

    #[test]
    fn empty_corpus() {
        let index = Index::build(&Corpus::empty(Alphabet::default()));
        assert_eq!(index.distinct_tokens(), 0);
        assert!((1..10).all(|n| index.distinct_by_length(n) == 0));
    }

    #[test]
    fn rejects_foreign_queries() {
        let index = example();
        assert_eq!(
            index.lookup("aB"),
            Err(IndexError::InvalidQuery { query: "aB".into(), symbol: 'B' })
        );
        assert_eq!(index.lookup(""), Err(IndexError::EmptyQuery));
    }

    #[test]
    fn snapshot_golden() {
        let mut out = Vec::new();
        example().write_snapshot(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "A=26 docs=3\nab 2 3\ncd 1 1\nef 1 1\n");
    }
}
