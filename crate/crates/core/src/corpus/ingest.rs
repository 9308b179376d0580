use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::warn;

use super::{Corpus, CorpusError, IngestConfig, Publication};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

/// Result of reading a JSONL corpus. No author-count filtering is applied.
#[derive(Debug, Clone)]
pub struct LoadOutcome {
    pub corpus: Corpus,
    pub lines_read: usize,
    pub skipped: Vec<SkippedLine>,
}

pub fn load_corpus(path: &Path, config: &IngestConfig) -> Result<LoadOutcome, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_corpus_from_reader(BufReader::new(file), config)
}

/// Streams one publication per line. Blank lines are ignored. Invalid lines
/// are skipped and recorded unless `config.strict` is set.
pub fn load_corpus_from_reader<R: BufRead>(
    reader: R,
    config: &IngestConfig,
) -> Result<LoadOutcome, CorpusError> {
    let mut publications: BTreeMap<String, Publication> = BTreeMap::new();
    let mut skipped = Vec::new();
    let mut lines_read = 0;

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: format!("<line {line_no}>"),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        lines_read += 1;
        let parsed = serde_json::from_str::<Publication>(&line)
            .map_err(|e| e.to_string())
            .and_then(|p| p.validate().map(|_| p).map_err(|e| e.to_string()))
            .and_then(|p| {
                if publications.contains_key(&p.paper_id) {
                    Err(format!("duplicate paper_id {}", p.paper_id))
                } else {
                    Ok(p)
                }
            });
        match parsed {
            Ok(p) => {
                publications.insert(p.paper_id.clone(), p);
            }
            Err(reason) if config.strict => {
                return Err(CorpusError::Schema {
                    line: line_no,
                    reason,
                })
            }
            Err(reason) => {
                warn!("skipping line {line_no}: {reason}");
                skipped.push(SkippedLine {
                    line: line_no,
                    reason,
                });
            }
        }
    }

    Ok(LoadOutcome {
        corpus: Corpus::index(publications),
        lines_read,
        skipped,
    })
}

/// Writes one publication per line in paper-id order.
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut writer: W) -> std::io::Result<()> {
    for p in corpus.publications() {
        serde_json::to_writer(&mut writer, p)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}
