use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use chrono::{DateTime, SecondsFormat, Utc};
use poxverifi_core::checkworthiness::{heuristic_score, HeuristicScorer, RemoteScorer, Scorer, ScorerEndpoint};
use poxverifi_core::classifier::{
    cross_validate_with, load_model, save_model, train, Classifier, CvReport, LogisticTrainer,
    MajorityTrainer, TrainConfig,
};
use poxverifi_core::corpus::{
    corpus_stats, ingest_articles, ingest_factcheck_feed, parse_articles, ClaimSource, Corpus,
    CorpusStats, LabelAliases, ProvenanceEntry, Rejected,
};
use poxverifi_core::headline::{extract_headline, fetch_page, FetchLimits};
use poxverifi_core::similarity::get_similar_claims;
use poxverifi_server::{shutdown_signal, Server, ServerConfig};
use serde_json::{json, Value};

use crate::{Cli, Command, Hyper, ScorerKind};

/// Prints either one JSON line or a human-readable block.
struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, value: Value, human: impl FnOnce() -> String) {
        if self.json {
            println!("{value}");
        } else {
            println!("{}", human());
        }
    }
}

/// Current time, or `SOURCE_DATE_EPOCH` when set, for reproducible outputs.
fn now() -> Result<DateTime<Utc>> {
    match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(raw) => {
            let secs: i64 = raw.trim().parse().context("SOURCE_DATE_EPOCH must be an integer")?;
            DateTime::from_timestamp(secs, 0).context("SOURCE_DATE_EPOCH out of range")
        }
        Err(_) => Ok(Utc::now()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_corpus(path: &Path) -> Result<Corpus> {
    Corpus::load(path).with_context(|| format!("loading corpus {}", path.display()))
}

fn write_rejects(path: &Path, rejected: &[Rejected]) -> Result<()> {
    let mut out = String::new();
    for r in rejected {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

fn stats_table(stats: &CorpusStats) -> String {
    let mut s = format!("total claims   {}\n", stats.total);
    for (k, v) in &stats.by_verdict {
        s.push_str(&format!("  verdict {k:<8} {v}\n"));
    }
    for (k, v) in &stats.by_source {
        s.push_str(&format!("  source  {k:<22} {v}\n"));
    }
    for (k, v) in &stats.by_label {
        s.push_str(&format!("  label   {k:<15} {v}\n"));
    }
    s.trim_end().to_string()
}

fn train_config(h: &Hyper) -> TrainConfig {
    let mut cfg = TrainConfig::default().with_seed(h.seed);
    if let Some(e) = h.epochs {
        cfg.epochs = e;
    }
    if let Some(lr) = h.lr {
        cfg.learning_rate = lr;
    }
    if let Some(l2) = h.l2 {
        cfg.l2 = l2;
    }
    cfg
}

fn runtime() -> Result<tokio::runtime::Runtime> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .context("starting async runtime")
}

pub fn run(cli: Cli) -> Result<()> {
    let out = Out { json: cli.json };
    match cli.command {
        Command::IngestFeed {
            input,
            output,
            reject_report,
        } => {
            let raw = read(&input)?;
            let ingested = ingest_factcheck_feed(&raw, &LabelAliases::default())
                .with_context(|| format!("ingesting {}", input.display()))?;
            let mut corpus = Corpus::from_claims(ingested.claims)?;
            corpus.provenance.push(ProvenanceEntry::for_bytes(
                input.display().to_string(),
                raw.as_bytes(),
                ClaimSource::FactCheckFeed,
                corpus.len(),
                now()?,
            ));
            corpus.save(&output)?;
            if let Some(path) = &reject_report {
                write_rejects(path, &ingested.rejected)?;
            }
            let stats = corpus_stats(&corpus);
            out.emit(
                json!({
                    "command": "ingest-feed",
                    "output": output,
                    "ingested": corpus.len(),
                    "rejected": ingested.rejected.len(),
                    "skipped_language": ingested.skipped_language,
                    "duplicates": ingested.duplicates,
                    "stats": stats,
                }),
                || {
                    format!(
                        "ingested {} claims into {} ({} rejected, {} non-English skipped, {} duplicates)\n{}",
                        corpus.len(),
                        output.display(),
                        ingested.rejected.len(),
                        ingested.skipped_language,
                        ingested.duplicates,
                        stats_table(&stats)
                    )
                },
            );
        }

        Command::IngestArticles {
            input,
            output,
            threshold,
            scorer,
            scorer_url,
            reject_report,
        } => {
            let raw = read(&input)?;
            let (articles, rejected) = parse_articles(&raw);
            let scorer: Box<dyn Scorer> = match scorer {
                ScorerKind::Local => Box::new(HeuristicScorer),
                ScorerKind::Remote => {
                    let Some(url) = scorer_url else {
                        bail!("--scorer remote needs --scorer-url or SCORER_URL");
                    };
                    Box::new(RemoteScorer::new(ScorerEndpoint::new(url))?)
                }
            };
            let ingested = ingest_articles(&articles, scorer.as_ref(), threshold)
                .with_context(|| format!("ingesting {}", input.display()))?;
            let mut corpus = if output.exists() {
                load_corpus(&output)?
            } else {
                Corpus::new()
            };
            let added = corpus.extend(ingested.claims)?;
            corpus.provenance.push(ProvenanceEntry::for_bytes(
                input.display().to_string(),
                raw.as_bytes(),
                ClaimSource::AuthoritativeArticle,
                added,
                now()?,
            ));
            corpus.save(&output)?;
            if let Some(path) = &reject_report {
                write_rejects(path, &rejected)?;
            }
            let stats = corpus_stats(&corpus);
            out.emit(
                json!({
                    "command": "ingest-articles",
                    "output": output,
                    "articles": articles.len(),
                    "added": added,
                    "rejected": rejected.len(),
                    "threshold": threshold,
                    "stats": stats,
                }),
                || {
                    format!(
                        "{} articles -> {added} new claims in {} ({} malformed lines)\n{}",
                        articles.len(),
                        output.display(),
                        rejected.len(),
                        stats_table(&stats)
                    )
                },
            );
        }

        Command::Train { corpus, model, hyper } => {
            let claims = load_corpus(&corpus)?;
            let cfg = train_config(&hyper);
            let mut artifact = train(claims.claims(), &cfg).context("training")?;
            if std::env::var_os("SOURCE_DATE_EPOCH").is_some() {
                artifact.metadata.trained_at = Some(now()?.to_rfc3339_opts(SecondsFormat::Secs, true));
            }
            save_model(&artifact, &model)?;
            let correct = claims
                .iter()
                .filter(|c| artifact.predict(&c.text).verdict == c.verdict)
                .count();
            let train_accuracy = correct as f64 / claims.len() as f64;
            let meta = &artifact.metadata;
            out.emit(
                json!({
                    "command": "train",
                    "model": model,
                    "examples": meta.examples,
                    "true_examples": meta.true_examples,
                    "false_examples": meta.false_examples,
                    "vocabulary": artifact.vocabulary.len(),
                    "train_accuracy": train_accuracy,
                    "hyperparameters": artifact.hyperparameters,
                }),
                || {
                    format!(
                        "trained on {} claims ({} true / {} false), vocabulary {}\ntraining accuracy {:.4}\nmodel written to {}",
                        meta.examples,
                        meta.true_examples,
                        meta.false_examples,
                        artifact.vocabulary.len(),
                        train_accuracy,
                        model.display()
                    )
                },
            );
        }

        Command::Crossval {
            corpus,
            k,
            majority_dummy,
            hyper,
        } => {
            let claims = load_corpus(&corpus)?;
            let cfg = train_config(&hyper);
            let report: CvReport = if majority_dummy {
                cross_validate_with(claims.claims(), k, cfg.seed, &MajorityTrainer)
            } else {
                cross_validate_with(claims.claims(), k, cfg.seed, &LogisticTrainer(cfg))
            }
            .context("cross-validation")?;
            let model = if majority_dummy { "majority" } else { "logistic" };
            if out.json {
                for f in &report.folds {
                    println!(
                        "{}",
                        json!({
                            "fold": f.fold,
                            "size": f.test_indices.len(),
                            "accuracy": f.accuracy,
                            "confusion": f.confusion,
                        })
                    );
                }
                println!(
                    "{}",
                    json!({"command": "crossval", "model": model, "k": report.k, "seed": report.seed, "mean_accuracy": report.mean_accuracy})
                );
            } else {
                println!("fold  size  accuracy");
                for f in &report.folds {
                    println!("{:>4}  {:>4}  {:.4}", f.fold, f.test_indices.len(), f.accuracy);
                }
                println!("{model} mean accuracy over {} folds: {:.4}", report.k, report.mean_accuracy);
            }
        }

        Command::Classify { model, headline } => {
            let artifact = load_model(&model).with_context(|| format!("loading model {}", model.display()))?;
            let p = artifact.predict(&headline);
            let score = heuristic_score(&headline).value();
            out.emit(
                json!({
                    "headline": headline,
                    "checkworthiness": score,
                    "verdict": p.verdict,
                    "probability": p.probability,
                }),
                || {
                    format!(
                        "verdict {} ({}), probability {:.4}, check-worthiness {:.2}",
                        p.verdict.as_u8(),
                        p.verdict,
                        p.probability,
                        score
                    )
                },
            );
        }

        Command::Similar {
            corpus,
            headline,
            threshold,
            page,
            page_size,
        } => {
            if threshold > 100 {
                bail!("--threshold must be in 0..=100");
            }
            let claims = load_corpus(&corpus)?;
            let result = get_similar_claims(&headline, &claims, threshold, page, page_size);
            if out.json {
                for m in &result.items {
                    println!(
                        "{}",
                        json!({
                            "score": m.score,
                            "claim_text": m.claim.text,
                            "original_label": m.claim.original_label.phrase(),
                            "verdict": m.claim.verdict,
                            "source_url": m.claim.source_url,
                        })
                    );
                }
                println!(
                    "{}",
                    json!({"page": result.page_index, "page_size": result.page_size, "total_matches": result.total_matches})
                );
            } else {
                let stdout = std::io::stdout();
                let mut w = stdout.lock();
                for m in &result.items {
                    writeln!(
                        w,
                        "{:>3}  {:<13}  {}",
                        m.score.value(),
                        m.claim.original_label.phrase(),
                        m.claim.text
                    )?;
                }
                writeln!(
                    w,
                    "page {} ({} per page), {} matches above {threshold}",
                    result.page_index, result.page_size, result.total_matches
                )?;
            }
        }

        Command::ExtractHeadline { url } => {
            let page = runtime()?.block_on(fetch_page(&url, &FetchLimits::default()))?;
            let headline = extract_headline(&page.body)?;
            out.emit(
                json!({"url": page.final_url, "headline": headline.text, "author": headline.author}),
                || match &headline.author {
                    Some(a) => format!("{}\nby {a}", headline.text),
                    None => headline.text.clone(),
                },
            );
        }

        Command::Serve { config } => {
            let config = ServerConfig::load(config.as_deref())?;
            runtime()?.block_on(async move {
                let server = Server::bind(config).await?;
                let addr = server.local_addr()?;
                out.emit(json!({"listening": format!("http://{addr}")}), || {
                    format!("listening on http://{addr}")
                });
                server.run(shutdown_signal()).await?;
                anyhow::Ok(())
            })?;
        }
    }
    Ok(())
}
