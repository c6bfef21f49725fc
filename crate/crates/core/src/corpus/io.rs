//! Reservoir file format: one document per line, tokens separated by single
//! spaces, every line LF-terminated. An empty document is an empty line.

use std::io::{BufRead, Write};

use super::{Corpus, CorpusError};
use crate::alphabet::Alphabet;

pub fn write_corpus<W: Write>(corpus: &Corpus, mut out: W) -> Result<(), CorpusError> {
    for doc in corpus.documents() {
        for (j, token) in doc.tokens().enumerate() {
            if j > 0 {
                out.write_all(b" ")?;
            }
            out.write_all(token.as_bytes())?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_corpus<R: BufRead>(mut input: R, alphabet: Alphabet) -> Result<Corpus, CorpusError> {
    let mut corpus = Corpus::empty(alphabet);
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if input.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let parse_err = |message: String| CorpusError::Parse { line: line_no, message };
        let line = buf.strip_suffix(b"\n").unwrap_or(&buf);
        let line = std::str::from_utf8(line).map_err(|_| parse_err("invalid UTF-8".into()))?;
        if !line.is_empty() {
            for token in line.split(' ') {
                if token.is_empty() {
                    return Err(parse_err("empty token (tokens are separated by single spaces)".into()));
                }
                if let Some(c) = corpus.alphabet.first_foreign(token) {
                    return Err(parse_err(format!("character {c:?} in {token:?} is outside the alphabet")));
                }
                corpus.push_token(token);
            }
        }
        corpus.end_document();
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn write_to_string(c: &Corpus) -> String {
        let mut out = Vec::new();
        write_corpus(c, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn empty_corpus_is_empty_file() {
        let c = Corpus::empty(Alphabet::default());
        let text = write_to_string(&c);
        assert_eq!(text, "");
        assert_eq!(read_corpus(text.as_bytes(), Alphabet::default()).unwrap(), c);
    }

    #[test]
    fn format_definition() {
        let c = Corpus::from_documents(Alphabet::default(), [vec!["ab", "cd"], vec!["ef"]]).unwrap();
        let text = write_to_string(&c);
        assert_eq!(text, "ab cd\nef\n");
        assert_eq!(read_corpus(text.as_bytes(), Alphabet::default()).unwrap(), c);
    }

    #[test]
    fn alphabet_violation_reports_line() {
        let err = read_corpus("a$b".as_bytes(), Alphabet::default()).unwrap_err();
        assert!(matches!(err, CorpusError::Parse { line: 1, .. }), "{err:?}");
        let err = read_corpus("ab\ncd\r\n".as_bytes(), Alphabet::default()).unwrap_err();
        assert!(matches!(err, CorpusError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn doubled_space_is_rejected() {
        let err = read_corpus("ab  cd\n".as_bytes(), Alphabet::default()).unwrap_err();
        assert!(matches!(err, CorpusError::Parse { line: 1, .. }));
        assert!(read_corpus(" ab\n".as_bytes(), Alphabet::default()).is_err());
        assert!(read_corpus("ab \n".as_bytes(), Alphabet::default()).is_err());
    }

    #[test]
    fn missing_final_newline_is_tolerated() {
        let c = read_corpus("ab cd\nef".as_bytes(), Alphabet::default()).unwrap();
        assert_eq!(c.to_vecs(), vec![vec!["ab", "cd"], vec!["ef"]]);
    }

    proptest! {
        #[test]
        fn round_trip(docs in prop::collection::vec(prop::collection::vec("[a-e]{1,6}", 0..6), 0..8)) {
            let alphabet = Alphabet::lowercase(5).unwrap();
            let corpus = Corpus::from_documents(alphabet.clone(), &docs).unwrap();
            let text = write_to_string(&corpus);
            prop_assert_eq!(read_corpus(text.as_bytes(), alphabet).unwrap(), corpus);
        }
    }
}
