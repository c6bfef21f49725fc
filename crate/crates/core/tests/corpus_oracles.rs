use std::collections::{HashMap, HashSet};

use crossover_core::corpus::{
    generate_corpus, generate_corpus_traced, generate_uniform_corpus, CorpusSpec, TokenOrigin,
};
use crossover_core::probe::random_string;
use crossover_core::rng::{stream, Domain};
use crossover_core::Alphabet;

/// Optimal-string-alignment distance (adjacent transposition costs 1).
fn osa_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut best = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                best = best.min(d[i - 2][j - 2] + 1);
            }
            d[i][j] = best;
        }
    }
    d[a.len()][b.len()]
}

#[test]
fn rank_one_frequency_is_binomial() {
    let spec = CorpusSpec {
        vocab_size: 1000,
        zipf_exponent: 1.0,
        total_tokens: 100_000,
        doc_count: 1000,
        typo_prob: 0.0,
        inject_prob: 0.0,
        seed: 11,
        ..CorpusSpec::default()
    };
    let (_, origins) = generate_corpus_traced(&spec).unwrap();
    let harmonic: f64 = (1..=1000).map(|k| 1.0 / k as f64).sum();
    let p1 = 1.0 / harmonic;
    let t = spec.total_tokens as f64;
    let count = origins.iter().filter(|o| **o == TokenOrigin::Word { rank: 1 }).count() as f64;
    let sd = (t * p1 * (1.0 - p1)).sqrt();
    assert!((count - p1 * t).abs() <= 3.0 * sd, "count {count}, expected {} ± {}", p1 * t, 3.0 * sd);
}

#[test]
fn typo_outputs_are_one_edit_from_source() {
    let spec = CorpusSpec {
        vocab_size: 300,
        total_tokens: 20_000,
        doc_count: 50,
        typo_prob: 0.5,
        inject_prob: 0.05,
        seed: 5,
        ..CorpusSpec::default()
    };
    let (corpus, origins) = generate_corpus_traced(&spec).unwrap();
    let d = spec.doc_count;
    let by_doc = corpus.to_vecs();
    let mut typos = 0;
    for (i, origin) in origins.iter().enumerate() {
        let token = &by_doc[i % d][i / d];
        match origin {
            TokenOrigin::Typo { source, .. } => {
                assert_eq!(osa_distance(source, token), 1, "{source} -> {token}");
                typos += 1;
            }
            TokenOrigin::Injected => {
                let (lo, hi) = spec.word_length_range;
                assert!((lo..=hi).contains(&token.len()));
            }
            TokenOrigin::Word { .. } => {}
        }
        assert!(corpus.alphabet().accepts(token));
    }
    let rate = typos as f64 / origins.len() as f64;
    assert!((rate - 0.5 * 0.95).abs() < 0.02, "typo rate {rate}");
}

#[test]
fn same_spec_same_bytes() {
    let spec = CorpusSpec { total_tokens: 5000, doc_count: 13, vocab_size: 200, seed: 99, ..CorpusSpec::default() };
    let write = |c| {
        let mut buf = Vec::new();
        crossover_core::corpus::write_corpus(&c, &mut buf).unwrap();
        buf
    };
    assert_eq!(write(generate_corpus(&spec).unwrap()), write(generate_corpus(&spec).unwrap()));
}

#[test]
fn uniform_distinct_count_matches_occupancy_formula() {
    let alphabet = Alphabet::default();
    let (n0, t) = (3usize, 17_576usize);
    let distinct = |seed: u64| {
        let c = generate_uniform_corpus(&alphabet, n0, t, 10, seed).unwrap();
        c.tokens().collect::<HashSet<_>>().len() as f64
    };
    // Brute-force variance over 50 independent replications.
    let reps: Vec<f64> = (1000..1050).map(distinct).collect();
    let mean = reps.iter().sum::<f64>() / reps.len() as f64;
    let var = reps.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps.len() - 1) as f64;

    let m = 26f64.powi(3);
    let expected = m * (1.0 - (1.0 - 1.0 / m).powf(t as f64));
    assert!((expected - 11_110.33).abs() < 0.01, "{expected}");
    let realized = distinct(7);
    assert!((realized - expected).abs() <= 3.0 * var.sqrt(), "{realized} vs {expected} ± {}", 3.0 * var.sqrt());
}

#[test]
fn single_letters_are_uniform() {
    // Chi-square with 25 degrees of freedom; 0.01 critical value 44.314.
    let alphabet = Alphabet::default();
    let mut counts: HashMap<String, u64> = HashMap::new();
    for i in 0..26_000u64 {
        let mut rng = stream(3, Domain::Query, 1, i);
        *counts.entry(random_string(1, &alphabet, &mut rng).unwrap()).or_default() += 1;
    }
    assert_eq!(counts.len(), 26);
    let chi2: f64 = counts.values().map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0).sum();
    assert!(chi2 < 44.314, "chi2 = {chi2}");
}
