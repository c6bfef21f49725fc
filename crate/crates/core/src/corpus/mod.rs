//! Synthetic text reservoirs.
//!
//! A reservoir is generated token by token. Token `i` draws from its own
//! counter-based stream, so the output is a pure function of the
//! [`CorpusSpec`] no matter how generation is scheduled. Tokens are dealt to
//! documents round-robin: token `i` lands in document `i mod D`.

mod io;
mod spec;
mod typo;
mod zipf;

use std::collections::BTreeMap;
use std::ops::{Range, RangeInclusive};

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::rng::{stream, Domain};

pub use io::{read_corpus, write_corpus};
pub use spec::{parse_count, CorpusSpec, SPEC_KEYS};
pub use typo::{apply_typo_op, random_typo, TypoKind, TypoOp};
pub use zipf::{zipf_probabilities, ZipfSampler};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid typo op: {0}")]
    InvalidOp(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An immutable ordered collection of documents, each an ordered list of
/// tokens over one alphabet.
///
/// Tokens live in a single arena; documents are ranges into it.
#[derive(Clone, PartialEq, Eq)]
pub struct Corpus {
    alphabet: Alphabet,
    text: String,
    token_ends: Vec<usize>,
    doc_ends: Vec<usize>,
}

#[derive(Clone)]
pub struct Document<'a> {
    corpus: &'a Corpus,
    tokens: Range<usize>,
}

impl<'a> Document<'a> {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> impl ExactSizeIterator<Item = &'a str> + 'a {
        let corpus = self.corpus;
        self.tokens.clone().map(move |i| corpus.token(i))
    }
}

impl Corpus {
    /// A corpus with no documents.
    pub fn empty(alphabet: Alphabet) -> Self {
        Self { alphabet, text: String::new(), token_ends: Vec::new(), doc_ends: Vec::new() }
    }

    /// Builds a corpus from explicit documents, validating every token.
    pub fn from_documents<D, T>(alphabet: Alphabet, documents: D) -> Result<Self, CorpusError>
    where
        D: IntoIterator,
        D::Item: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut corpus = Self::empty(alphabet);
        for (d, doc) in documents.into_iter().enumerate() {
            for token in doc {
                let token = token.as_ref();
                if let Some(c) = corpus.alphabet.first_foreign(token) {
                    return Err(CorpusError::InvalidSpec(format!(
                        "document {d}: token {token:?} has character {c:?} outside the alphabet"
                    )));
                }
                if token.is_empty() {
                    return Err(CorpusError::InvalidSpec(format!("document {d}: empty token")));
                }
                corpus.push_token(token);
            }
            corpus.end_document();
        }
        Ok(corpus)
    }

    fn push_token(&mut self, token: &str) {
        self.text.push_str(token);
        self.token_ends.push(self.text.len());
    }

    fn end_document(&mut self) {
        self.doc_ends.push(self.token_ends.len());
    }

    /// Deals `tokens` (in generation order) to `docs` documents round-robin.
    fn round_robin(alphabet: Alphabet, tokens: &[String], docs: usize) -> Self {
        let mut corpus = Self::empty(alphabet);
        corpus.text.reserve(tokens.iter().map(String::len).sum());
        corpus.token_ends.reserve(tokens.len());
        for d in 0..docs {
            for token in tokens.iter().skip(d).step_by(docs) {
                corpus.push_token(token);
            }
            corpus.end_document();
        }
        corpus
    }

    /// Concatenates the `d`-th document of every part into document `d`.
    /// Parts must share the alphabet; shorter parts contribute nothing to
    /// trailing documents.
    pub fn merge_documentwise(parts: &[Corpus]) -> Result<Self, CorpusError> {
        let Some(first) = parts.first() else {
            return Err(CorpusError::InvalidSpec("nothing to merge".into()));
        };
        if parts.iter().any(|p| p.alphabet != first.alphabet) {
            return Err(CorpusError::InvalidSpec("merged corpora must share an alphabet".into()));
        }
        let docs = parts.iter().map(Corpus::doc_count).max().unwrap_or(0);
        let mut out = Self::empty(first.alphabet.clone());
        for d in 0..docs {
            for part in parts.iter().filter(|p| d < p.doc_count()) {
                for token in part.document(d).tokens() {
                    out.push_token(token);
                }
            }
            out.end_document();
        }
        Ok(out)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ends.len()
    }

    pub fn token_count(&self) -> usize {
        self.token_ends.len()
    }

    fn token(&self, i: usize) -> &str {
        let start = if i == 0 { 0 } else { self.token_ends[i - 1] };
        &self.text[start..self.token_ends[i]]
    }

    pub fn document(&self, d: usize) -> Document<'_> {
        let start = if d == 0 { 0 } else { self.doc_ends[d - 1] };
        Document { corpus: self, tokens: start..self.doc_ends[d] }
    }

    pub fn documents(&self) -> impl ExactSizeIterator<Item = Document<'_>> + '_ {
        (0..self.doc_count()).map(move |d| self.document(d))
    }

    /// All tokens in document order.
    pub fn tokens(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        (0..self.token_count()).map(move |i| self.token(i))
    }

    pub fn to_vecs(&self) -> Vec<Vec<String>> {
        self.documents().map(|d| d.tokens().map(str::to_owned).collect()).collect()
    }

    /// Token occurrences per token length.
    pub fn length_counts(&self) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for token in self.tokens() {
            *out.entry(token.len()).or_insert(0) += 1;
        }
        out
    }
}

impl std::fmt::Debug for Corpus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Corpus")
            .field("alphabet", &self.alphabet)
            .field("documents", &self.doc_count())
            .field("tokens", &self.token_count())
            .finish()
    }
}

/// Where a generated token came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenOrigin {
    Injected,
    /// Vocabulary word of the given 1-based rank, emitted unchanged.
    Word { rank: usize },
    /// Vocabulary word passed through one typo edit.
    Typo { rank: usize, source: String, op: TypoOp },
}

/// The vocabulary for `spec`: word `k` (rank `k + 1`) is a uniform random
/// string with uniform length in `word_length_range`.
pub fn vocabulary(spec: &CorpusSpec) -> Vec<String> {
    let (lo, hi) = spec.word_length_range;
    (0..spec.vocab_size)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(spec.seed, Domain::Vocabulary, k as u64, 0);
            let len = rng.random_range(lo..=hi);
            spec.alphabet.random_string(len, &mut rng)
        })
        .collect()
}

struct Generator<'a> {
    spec: &'a CorpusSpec,
    vocab: Vec<String>,
    sampler: ZipfSampler,
}

impl<'a> Generator<'a> {
    fn new(spec: &'a CorpusSpec) -> Result<Self, CorpusError> {
        spec.validate()?;
        let probabilities = zipf_probabilities(spec.vocab_size, spec.zipf_exponent)?;
        Ok(Self { spec, vocab: vocabulary(spec), sampler: ZipfSampler::new(&probabilities) })
    }

    fn token(&self, i: usize) -> (String, TokenOrigin) {
        let spec = self.spec;
        let mut rng = stream(spec.seed, Domain::Token, i as u64, 0);
        if rng.random::<f64>() < spec.inject_prob {
            let (lo, hi) = spec.word_length_range;
            let len = rng.random_range(lo..=hi);
            return (spec.alphabet.random_string(len, &mut rng), TokenOrigin::Injected);
        }
        let k = self.sampler.sample(&mut rng);
        let word = &self.vocab[k];
        if rng.random::<f64>() < spec.typo_prob {
            let op = random_typo(word, &spec.alphabet, &mut rng);
            let typo = apply_typo_op(word, op).expect("random_typo yields valid edits");
            (typo, TokenOrigin::Typo { rank: k + 1, source: word.clone(), op })
        } else {
            (word.clone(), TokenOrigin::Word { rank: k + 1 })
        }
    }
}

/// Generates the Zipf + typo + injection reservoir described by `spec`.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Corpus, CorpusError> {
    let generator = Generator::new(spec)?;
    let tokens: Vec<String> =
        (0..spec.total_tokens).into_par_iter().map(|i| generator.token(i).0).collect();
    Ok(Corpus::round_robin(spec.alphabet.clone(), &tokens, spec.doc_count))
}

/// Like [`generate_corpus`], additionally returning the origin of every
/// token in generation order (token `i` is in document `i mod D`).
pub fn generate_corpus_traced(spec: &CorpusSpec) -> Result<(Corpus, Vec<TokenOrigin>), CorpusError> {
    let generator = Generator::new(spec)?;
    let (tokens, origins): (Vec<String>, Vec<TokenOrigin>) =
        (0..spec.total_tokens).into_par_iter().map(|i| generator.token(i)).unzip();
    Ok((Corpus::round_robin(spec.alphabet.clone(), &tokens, spec.doc_count), origins))
}

/// `tokens` i.i.d. uniform strings of fixed `length`, dealt round-robin over
/// `docs` documents.
pub fn generate_uniform_corpus(
    alphabet: &Alphabet,
    length: usize,
    tokens: usize,
    docs: usize,
    seed: u64,
) -> Result<Corpus, CorpusError> {
    if length == 0 {
        return Err(CorpusError::InvalidSpec("uniform token length must be at least 1".into()));
    }
    if docs == 0 {
        return Err(CorpusError::InvalidSpec("doc_count must be at least 1".into()));
    }
    let strings: Vec<String> = (0..tokens)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, Domain::Uniform, length as u64, i as u64);
            alphabet.random_string(length, &mut rng)
        })
        .collect();
    Ok(Corpus::round_robin(alphabet.clone(), &strings, docs))
}

/// The null-model reservoir: for every length in `lengths`,
/// `tokens_per_length` i.i.d. uniform strings of that length, merged
/// document-wise.
pub fn generate_uniform_reservoir(
    alphabet: &Alphabet,
    lengths: RangeInclusive<usize>,
    tokens_per_length: usize,
    docs: usize,
    seed: u64,
) -> Result<Corpus, CorpusError> {
    if lengths.is_empty() {
        return Err(CorpusError::InvalidSpec("empty length range".into()));
    }
    let parts = lengths
        .map(|n| generate_uniform_corpus(alphabet, n, tokens_per_length, docs, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Corpus::merge_documentwise(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> CorpusSpec {
        CorpusSpec {
            vocab_size: 50,
            total_tokens: 2000,
            doc_count: 7,
            typo_prob: 0.3,
            inject_prob: 0.1,
            seed: 42,
            ..CorpusSpec::default()
        }
    }

    #[test]
    fn zero_tokens_gives_empty_documents() {
        let spec = CorpusSpec { total_tokens: 0, doc_count: 4, ..small_spec() };
        let corpus = generate_corpus(&spec).unwrap();
        assert_eq!(corpus.doc_count(), 4);
        assert!(corpus.documents().all(|d| d.is_empty()));
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = generate_corpus(&small_spec()).unwrap();
        let b = generate_corpus(&small_spec()).unwrap();
        assert_eq!(a, b);
        let c = generate_corpus(&CorpusSpec { seed: 43, ..small_spec() }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| generate_corpus(&small_spec()).unwrap());
        let b = four.install(|| generate_corpus(&small_spec()).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn round_robin_sizes_and_alphabet_closure() {
        let corpus = generate_corpus(&small_spec()).unwrap();
        assert_eq!(corpus.token_count(), 2000);
        let sizes: Vec<usize> = corpus.documents().map(|d| d.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 2000);
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        assert!(corpus.tokens().all(|t| corpus.alphabet().accepts(t)));
    }

    #[test]
    fn traced_typos_are_single_edits() {
        let (corpus, origins) = generate_corpus_traced(&small_spec()).unwrap();
        assert_eq!(corpus, generate_corpus(&small_spec()).unwrap());
        let mut typos = 0;
        for origin in &origins {
            if let TokenOrigin::Typo { source, op, .. } = origin {
                assert_ne!(&apply_typo_op(source, *op).unwrap(), source);
                typos += 1;
            }
        }
        assert!(typos > 0);
    }

    #[test]
    fn uniform_single_letter() {
        let a = Alphabet::lowercase(1).unwrap();
        let corpus = generate_uniform_corpus(&a, 2, 3, 1, 0).unwrap();
        assert_eq!(corpus.to_vecs(), vec![vec!["aa", "aa", "aa"]]);
        let empty = generate_uniform_corpus(&a, 2, 0, 3, 0).unwrap();
        assert_eq!(empty.doc_count(), 3);
        assert_eq!(empty.token_count(), 0);
        assert!(generate_uniform_corpus(&a, 0, 3, 1, 0).is_err());
    }

    #[test]
    fn uniform_reservoir_has_every_length() {
        let a = Alphabet::default();
        let corpus = generate_uniform_reservoir(&a, 1..=4, 100, 10, 5).unwrap();
        assert_eq!(corpus.doc_count(), 10);
        let counts = corpus.length_counts();
        assert_eq!(counts.into_iter().collect::<Vec<_>>(), vec![(1, 100), (2, 100), (3, 100), (4, 100)]);
    }

    #[test]
    fn from_documents_validates() {
        let a = Alphabet::default();
        assert!(Corpus::from_documents(a.clone(), [["ab", "c$"]]).is_err());
        assert!(Corpus::from_documents(a.clone(), [["ab", ""]]).is_err());
        let c = Corpus::from_documents(a, vec![vec!["ab", "cd"], vec![], vec!["ef"]]).unwrap();
        assert_eq!(c.doc_count(), 3);
        assert_eq!(c.document(1).len(), 0);
        assert_eq!(c.document(2).tokens().collect::<Vec<_>>(), ["ef"]);
    }
}
