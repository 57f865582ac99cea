//! Minimal FASTA ingestion for the clustering pipeline.

use std::path::Path;

use thiserror::Error;

/// One FASTA record. The id is the first whitespace-delimited token of the
/// header; residues are uppercased with all whitespace removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceRecord {
    pub id: String,
    pub description: String,
    pub residues: Vec<u8>,
}

#[derive(Debug, Error)]
pub enum FastaError {
    #[error("malformed FASTA, line {0}: sequence data before the first '>' header")]
    DataBeforeHeader(usize),
    #[error("malformed FASTA, line {0}: header with an empty identifier")]
    EmptyIdentifier(usize),
    #[error("malformed FASTA: record {0:?} has no residues")]
    EmptyRecord(String),
    #[error("malformed FASTA: duplicate identifier {0:?}")]
    DuplicateId(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn read_fasta(path: impl AsRef<Path>) -> Result<Vec<SequenceRecord>, FastaError> {
    parse_fasta_str(&std::fs::read_to_string(path)?)
}

pub fn parse_fasta_str(text: &str) -> Result<Vec<SequenceRecord>, FastaError> {
    let mut records: Vec<SequenceRecord> = Vec::new();
    let mut current: Option<SequenceRecord> = None;
    let mut seen = std::collections::BTreeSet::new();

    let flush = |record: Option<SequenceRecord>,
                 records: &mut Vec<SequenceRecord>|
     -> Result<(), FastaError> {
        if let Some(r) = record {
            if r.residues.is_empty() {
                return Err(FastaError::EmptyRecord(r.id));
            }
            records.push(r);
        }
        Ok(())
    };

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if let Some(header) = line.strip_prefix('>') {
            flush(current.take(), &mut records)?;
            let mut parts = header.trim().splitn(2, char::is_whitespace);
            let id = parts.next().unwrap_or("").to_string();
            if id.is_empty() {
                return Err(FastaError::EmptyIdentifier(line_no));
            }
            if !seen.insert(id.clone()) {
                return Err(FastaError::DuplicateId(id));
            }
            current = Some(SequenceRecord {
                id,
                description: parts.next().unwrap_or("").trim().to_string(),
                residues: Vec::new(),
            });
        } else if !line.trim().is_empty() {
            match current.as_mut() {
                Some(record) => record.residues.extend(
                    line.bytes()
                        .filter(|b| !b.is_ascii_whitespace())
                        .map(|b| b.to_ascii_uppercase()),
                ),
                None => return Err(FastaError::DataBeforeHeader(line_no)),
            }
        }
    }
    flush(current.take(), &mut records)?;
    Ok(records)
}
