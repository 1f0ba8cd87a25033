//! Sequence-file ingestion.
//!
//! Sequence files hold ASCII `0`/`1` with arbitrary whitespace, or the
//! single token `^` for the empty sequence. Anything else is rejected
//! with its byte offset.

use std::fmt;
use std::path::Path;

use unipred_core::bits::{Bit, FiniteString};

#[derive(Debug)]
pub enum IngestError {
    Io(std::io::Error),
    IllegalByte { offset: usize, byte: u8 },
    /// `^` mixed with bits.
    MisplacedEmptyToken { offset: usize },
}

impl fmt::Display for IngestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IngestError::Io(e) => write!(f, "cannot read sequence file: {e}"),
            IngestError::IllegalByte { offset, byte } => {
                write!(f, "illegal byte 0x{byte:02x} at offset {offset} (expected '0' or '1')")
            }
            IngestError::MisplacedEmptyToken { offset } => {
                write!(f, "'^' at offset {offset} must be the only content")
            }
        }
    }
}

impl std::error::Error for IngestError {}

pub fn parse_sequence_bytes(bytes: &[u8]) -> Result<FiniteString, IngestError> {
    let mut bits = FiniteString::empty();
    let mut caret: Option<usize> = None;
    for (offset, &byte) in bytes.iter().enumerate() {
        match byte {
            b'0' | b'1' => {
                if let Some(at) = caret {
                    return Err(IngestError::MisplacedEmptyToken { offset: at });
                }
                bits.push(Bit::from(byte == b'1'));
            }
            b'^' => {
                if caret.is_some() || !bits.is_empty() {
                    return Err(IngestError::MisplacedEmptyToken { offset });
                }
                caret = Some(offset);
            }
            b' ' | b'\t' | b'\r' | b'\n' => {}
            _ => return Err(IngestError::IllegalByte { offset, byte }),
        }
    }
    Ok(bits)
}

pub fn ingest_sequence(path: &Path) -> Result<FiniteString, IngestError> {
    let bytes = std::fs::read(path).map_err(IngestError::Io)?;
    parse_sequence_bytes(&bytes)
}

/// Inverse of ingestion: the text form a sequence file round-trips through.
pub fn emit_sequence(x: &FiniteString) -> String {
    format!("{x}\n")
}
