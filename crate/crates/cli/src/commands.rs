//! The five subcommands. Each writes its files into the configured output
//! directory and reports whether the results are partial.

use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::Path;

use crossover_core::corpus::{generate_corpus, generate_uniform_reservoir, read_corpus, write_corpus};
use crossover_core::fmt::sig6;
use crossover_core::stats::{
    analytic_crossing, analytic_null_p, default_cutoff, estimate_nc, fss_fit, p_curve, tail_exponent,
    write_histogram_csv, write_summary_csv, CrossoverFit,
};
use crossover_core::{
    run_campaign, Campaign, CampaignRun, CampaignSummary, Corpus, Index, NullModel, QueryBackend, RunStatus,
    StatsError,
};
use crossover_net::RemoteBackend;

use crate::config::{CorpusSource, ExperimentConfig, FssMode};
use crate::plot::{Chart, Point, Series};
use crate::CliError;

/// Result of a command that ran to the end.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    /// Lengths whose campaign stopped early on a backend failure.
    pub aborted: Vec<String>,
}

impl Outcome {
    pub fn is_partial(&self) -> bool {
        !self.aborted.is_empty()
    }

    fn from_run(run: &CampaignRun) -> Self {
        let aborted = run
            .sizes
            .iter()
            .filter_map(|s| match &s.status {
                RunStatus::Aborted { sequence_no, error } => {
                    Some(format!("N={} stopped at query {sequence_no}: {error}", s.n))
                }
                _ => None,
            })
            .collect();
        Self { aborted }
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(CliError::io(path))
}

fn prepare_out(cfg: &ExperimentConfig) -> Result<&Path, CliError> {
    fs::create_dir_all(&cfg.out_dir).map_err(CliError::io(&cfg.out_dir))?;
    Ok(&cfg.out_dir)
}

fn pool(cfg: &ExperimentConfig) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))
}

/// Builds the configured corpus. Uniform reservoirs default to the campaign
/// length range; `seed_offset` shifts generator seeds for size sweeps.
pub fn build_corpus(cfg: &ExperimentConfig, source: &CorpusSource, seed_offset: u64) -> Result<Corpus, CliError> {
    match source {
        CorpusSource::Zipf(spec) => {
            let mut spec = spec.clone();
            spec.seed = spec.seed.wrapping_add(seed_offset);
            Ok(generate_corpus(&spec)?)
        }
        CorpusSource::Uniform { alphabet, tokens_per_length, lengths, doc_count, seed } => {
            let (lo, hi) = lengths.unwrap_or((cfg.n_lo, cfg.n_hi));
            Ok(generate_uniform_reservoir(
                alphabet,
                lo..=hi,
                *tokens_per_length,
                *doc_count,
                seed.wrapping_add(seed_offset),
            )?)
        }
        CorpusSource::File { path, alphabet } => {
            let file = fs::File::open(path).map_err(CliError::io(path))?;
            Ok(read_corpus(BufReader::new(file), alphabet.clone())?)
        }
    }
}

fn require_corpus(cfg: &ExperimentConfig) -> Result<&CorpusSource, CliError> {
    cfg.corpus.as_ref().ok_or_else(|| CliError::Config("no corpus source: set corpus.kind".into()))
}

fn campaign(cfg: &ExperimentConfig, backend_id: &str, seed_offset: u64) -> Campaign {
    Campaign {
        n_lo: cfg.n_lo,
        n_hi: cfg.n_hi,
        queries_per_n: cfg.queries_per_n,
        seed: cfg.campaign_seed.wrapping_add(seed_offset),
        dedup: cfg.dedup,
        backend_id: backend_id.into(),
        alphabet: cfg.alphabet(),
    }
}

fn remote_backend(cfg: &ExperimentConfig) -> Result<RemoteBackend, CliError> {
    let remote = cfg
        .remote
        .clone()
        .ok_or_else(|| CliError::Config("remote backend selected but no remote.* keys set".into()))?;
    Ok(RemoteBackend::new(remote)?)
}

/// Tail exponent per length: `n,e_min,alpha,alpha_se,n_tail`. Lengths whose
/// tail is too thin are left out.
fn tail_csv(run: &CampaignRun, cutoff: Option<u64>) -> String {
    let mut out = String::from("n,e_min,alpha,alpha_se,n_tail\n");
    for size in &run.sizes {
        let e = size.e_values();
        let Some(e_min) = cutoff.or_else(|| default_cutoff(&e)) else { continue };
        if let Ok(fit) = tail_exponent(&e, e_min) {
            let _ = writeln!(out, "{},{e_min},{},{},{}", size.n, sig6(fit.alpha), sig6(fit.stderr), fit.n_tail);
        }
    }
    out
}

fn render_plots(dir: &Path, summaries: &[CampaignSummary]) -> Result<(), CliError> {
    let points = |f: &dyn Fn(&CampaignSummary) -> Point| summaries.iter().map(f).collect::<Vec<_>>();
    let p_chart = Chart {
        title: "Order parameter".into(),
        x_label: "N (letters)".into(),
        y_label: "P".into(),
        series: vec![Series {
            label: "P(N)".into(),
            points: points(&|s| Point { x: s.n as f64, y: s.p, err: Some(s.p_stderr) }),
            lines: true,
        }],
        ..Chart::default()
    };
    let r_chart = Chart {
        title: "Susceptibility".into(),
        x_label: "N (letters)".into(),
        y_label: "R".into(),
        series: vec![Series { label: "R(N)".into(), points: points(&|s| Point::new(s.n as f64, s.r)), lines: true }],
        ..Chart::default()
    };
    let h_chart = Chart {
        title: "Result-count histogram".into(),
        x_label: "E".into(),
        y_label: "queries".into(),
        log_x: true,
        log_y: true,
        series: summaries
            .iter()
            .filter(|s| s.histogram.counts.iter().any(|&c| c > 0))
            .map(|s| Series {
                label: format!("N={}", s.n),
                points: s
                    .histogram
                    .bins()
                    .filter(|b| b.count > 0)
                    .map(|b| Point::new((b.lower as f64 * b.upper as f64).sqrt(), b.count as f64))
                    .collect(),
                lines: true,
            })
            .collect(),
    };
    write_file(dir, "p_vs_n.svg", p_chart.render().as_bytes())?;
    write_file(dir, "r_vs_n.svg", r_chart.render().as_bytes())?;
    write_file(dir, "histogram.svg", h_chart.render().as_bytes())
}

fn write_scan_outputs(cfg: &ExperimentConfig, run: &CampaignRun) -> Result<Vec<CampaignSummary>, CliError> {
    let dir = prepare_out(cfg)?;
    let summaries = CampaignSummary::from_run(run);
    let fit: Option<CrossoverFit> = estimate_nc(&p_curve(&summaries), cfg.threshold).ok();

    let mut buf = Vec::new();
    run.write_csv(&mut buf).map_err(CliError::io(dir.join("records.csv")))?;
    write_file(dir, "records.csv", &buf)?;
    buf.clear();
    write_summary_csv(&summaries, fit.as_ref(), &mut buf).map_err(CliError::io(dir.join("summary.csv")))?;
    write_file(dir, "summary.csv", &buf)?;
    buf.clear();
    write_histogram_csv(&summaries, &mut buf).map_err(CliError::io(dir.join("histogram.csv")))?;
    write_file(dir, "histogram.csv", &buf)?;
    write_file(dir, "tail.csv", tail_csv(run, cfg.tail_cutoff).as_bytes())?;
    if cfg.plot {
        render_plots(dir, &summaries)?;
    }
    Ok(summaries)
}

fn scan_with<B: QueryBackend + ?Sized>(cfg: &ExperimentConfig, backend: &B, id: &str) -> Result<Outcome, CliError> {
    let run = pool(cfg)?.install(|| run_campaign(&campaign(cfg, id, 0), backend))?;
    write_scan_outputs(cfg, &run)?;
    Ok(Outcome::from_run(&run))
}

/// `scan`: probe the configured backend over `[n_lo, n_hi]` and write
/// `records.csv`, `summary.csv`, `histogram.csv`, `tail.csv` and plots.
pub fn cmd_scan(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    if cfg.use_remote {
        return cmd_probe_remote(cfg);
    }
    let corpus = pool(cfg)?.install(|| build_corpus(cfg, require_corpus(cfg)?, 0))?;
    scan_with(cfg, &Index::build(&corpus), "local")
}

/// `probe-remote`: `scan` against the remote count backend.
pub fn cmd_probe_remote(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let backend = remote_backend(cfg)?;
    scan_with(cfg, &backend, "remote")
}

/// `gen-corpus`: write the reservoir (and its spec or index snapshot).
pub fn cmd_gen_corpus(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let source = require_corpus(cfg)?;
    let corpus = pool(cfg)?.install(|| build_corpus(cfg, source, 0))?;
    let dir = prepare_out(cfg)?;
    let mut buf = Vec::new();
    write_corpus(&corpus, &mut buf)?;
    write_file(dir, "reservoir.txt", &buf)?;
    if let CorpusSource::Zipf(spec) = source {
        write_file(dir, "corpus.spec", spec.to_file().as_bytes())?;
    }
    if cfg.write_snapshot {
        buf.clear();
        Index::build(&corpus)
            .write_snapshot(&mut buf)
            .map_err(CliError::io(dir.join("index.snapshot")))?;
        write_file(dir, "index.snapshot", &buf)?;
    }
    Ok(Outcome::default())
}

/// Measured-versus-exact deviation in binomial standard errors. A zero
/// standard error gives 0 on agreement and an infinite deviation otherwise.
pub fn deviation_sigma(p_measured: f64, p_exact: f64, q: usize) -> f64 {
    let sd = (p_exact * (1.0 - p_exact) / q as f64).sqrt();
    let diff = p_measured - p_exact;
    if sd > 0.0 {
        diff / sd
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

fn sig6_or_inf(x: f64) -> String {
    match x {
        f64::INFINITY => "inf".into(),
        f64::NEG_INFINITY => "-inf".into(),
        x => sig6(x),
    }
}

/// `compare-null`: `compare_null.csv` with one row per length comparing the
/// measured P with the exact index value and the analytic null model.
pub fn cmd_compare_null(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    if cfg.use_remote {
        return Err(CliError::Config("compare-null needs the local backend".into()));
    }
    let pool = pool(cfg)?;
    let corpus = pool.install(|| build_corpus(cfg, require_corpus(cfg)?, 0))?;
    let index = Index::build(&corpus);
    let run = pool.install(|| run_campaign(&campaign(cfg, "local", 0), &index))?;
    let model = NullModel::per_length(corpus.alphabet().len() as u64, corpus.length_counts());

    let mut out = String::from("n,p_measured,p_exact,p_analytic,deviation_sigma,flag\n");
    for s in CampaignSummary::from_run(&run) {
        let exact = index.exact_order_parameter(s.n);
        let dev = deviation_sigma(s.p, exact, s.q);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            s.n,
            sig6(s.p),
            sig6(exact),
            sig6(analytic_null_p(&model, s.n)),
            sig6_or_inf(dev),
            u8::from(dev.abs() > 4.0)
        );
    }
    write_file(prepare_out(cfg)?, "compare_null.csv", out.as_bytes())?;
    Ok(Outcome::from_run(&run))
}

/// `fss`: crossing length per reservoir size and a least-squares fit of
/// `n_c` against `log_A(T)`, written to `fss.csv`.
///
/// Rows are `size` (crossing found), `no_crossing`, and a final `fit` row.
pub fn cmd_fss(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    if cfg.fss_sizes.len() < 2 {
        return Err(StatsError::InsufficientData(format!(
            "finite-size analysis needs at least 2 sizes, got {}",
            cfg.fss_sizes.len()
        ))
        .into());
    }
    let alphabet_size = cfg.alphabet().len() as u64;
    let mut rows = String::from("kind,t_n,n_c,slope,intercept\n");
    let mut points = Vec::new();
    let mut outcome = Outcome::default();
    for (k, &t) in cfg.fss_sizes.iter().enumerate() {
        let n_c = match cfg.fss_mode {
            FssMode::Analytic => analytic_crossing(alphabet_size, t, cfg.threshold),
            FssMode::Simulate => {
                let source = match require_corpus(cfg)? {
                    CorpusSource::Zipf(spec) => {
                        CorpusSource::Zipf(crossover_core::CorpusSpec { total_tokens: t as usize, ..spec.clone() })
                    }
                    CorpusSource::Uniform { alphabet, lengths, doc_count, seed, .. } => CorpusSource::Uniform {
                        alphabet: alphabet.clone(),
                        tokens_per_length: t as usize,
                        lengths: *lengths,
                        doc_count: *doc_count,
                        seed: *seed,
                    },
                    CorpusSource::File { .. } => {
                        return Err(CliError::Config("fss needs a generated corpus (zipf or uniform)".into()))
                    }
                };
                let pool = pool(cfg)?;
                let corpus = pool.install(|| build_corpus(cfg, &source, k as u64))?;
                let index = Index::build(&corpus);
                let run = pool.install(|| run_campaign(&campaign(cfg, "local", k as u64), &index))?;
                outcome.aborted.extend(Outcome::from_run(&run).aborted);
                estimate_nc(&p_curve(&CampaignSummary::from_run(&run)), cfg.threshold).ok().map(|f| f.n_c)
            }
        };
        match n_c {
            Some(n_c) => {
                let _ = writeln!(rows, "size,{t},{},,", sig6(n_c));
                points.push((t as f64, n_c));
            }
            None => {
                let _ = writeln!(rows, "no_crossing,{t},,,");
            }
        }
    }
    let dir = prepare_out(cfg)?;
    let fit = fss_fit(&points, alphabet_size);
    if let Ok(fit) = &fit {
        let _ = writeln!(rows, "fit,,,{},{}", sig6(fit.slope), sig6(fit.intercept));
    }
    write_file(dir, "fss.csv", rows.as_bytes())?;
    fit?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deviation_handles_degenerate_variance() {
        assert_eq!(deviation_sigma(1.0, 1.0, 10), 0.0);
        assert_eq!(deviation_sigma(0.9, 1.0, 10), f64::NEG_INFINITY);
        assert!((deviation_sigma(0.6, 0.5, 100) - 2.0).abs() < 1e-12);
    }
}
