//! Comment ingestion: JSONL parsing, text normalization and window selection.
//!
//! Normalization follows the obfuscation-resistant cleanup applied before
//! network construction: whitespace tokenization, punctuation stripping,
//! rejection of tokens containing non-Latin letters, stopword removal,
//! lowercasing, and a minimum length on the concatenated result.

use std::collections::BTreeSet;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Minimum accepted length (in characters) of the normalized text.
pub const DEFAULT_MIN_LENGTH: usize = 25;

/// Default English stopword list shipped with the crate.
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

/// One user-to-video comment event as it appears in the input log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComment {
    pub comment_id: String,
    pub user_id: String,
    pub video_id: String,
    /// UTC seconds; never negative in a valid record.
    pub timestamp: i64,
    pub text: String,
    /// Unreliable prior-marking flag carried in the comment metadata.
    pub spam_hint: bool,
}

/// A comment whose text survived normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanComment {
    pub user_id: String,
    pub video_id: String,
    pub timestamp: i64,
    pub tokens: Vec<String>,
    /// Concatenation of `tokens`, no separators.
    pub norm_text: String,
    pub spam_hint: bool,
}

/// Normalization settings.
#[derive(Debug, Clone)]
pub struct IngestConfig {
    pub min_length: usize,
    /// Stored pre-normalized (lowercased, punctuation stripped).
    pub stopwords: BTreeSet<String>,
    pub latin_only: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            min_length: DEFAULT_MIN_LENGTH,
            stopwords: parse_stopwords(DEFAULT_STOPWORDS),
            latin_only: true,
        }
    }
}

impl IngestConfig {
    /// Replace the stopword list with one parsed from `text` (one word per
    /// line; the same per-token normalization is applied so that entries
    /// like `don't` match the stripped token `dont`).
    pub fn with_stopwords(mut self, text: &str) -> Self {
        self.stopwords = parse_stopwords(text);
        self
    }
}

/// Parse a newline-delimited stopword list, normalizing each entry.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .filter_map(|line| {
            let token = strip_token(line.trim());
            if token.is_empty() {
                None
            } else {
                Some(token)
            }
        })
        .collect()
}

/// Supported input encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// One JSON object per line.
    Jsonl,
}

/// Error attached to a single input record.
#[derive(Debug, Error)]
pub enum RecordError {
    #[error("line {line}: malformed record: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: missing or invalid field `{field}`")]
    Field { line: usize, field: &'static str },
    #[error("line {line}: duplicate comment_id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: negative timestamp {value}")]
    NegativeTimestamp { line: usize, value: i64 },
    #[error("line {line}: read failed: {msg}")]
    Io { line: usize, msg: String },
}

impl RecordError {
    pub fn line(&self) -> usize {
        match self {
            RecordError::Malformed { line, .. }
            | RecordError::Field { line, .. }
            | RecordError::DuplicateId { line, .. }
            | RecordError::NegativeTimestamp { line, .. }
            | RecordError::Io { line, .. } => *line,
        }
    }
}

/// Streaming parser over newline-delimited records. Yields one result per
/// non-blank line, in file order.
pub struct CommentParser<R> {
    reader: R,
    line: usize,
    seen_ids: BTreeSet<String>,
    buf: String,
}

impl<R: BufRead> Iterator for CommentParser<R> {
    type Item = Result<RawComment, RecordError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            self.line += 1;
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    return Some(Err(RecordError::Io {
                        line: self.line,
                        msg: e.to_string(),
                    }))
                }
            }
            if self.buf.trim().is_empty() {
                continue;
            }
            return Some(parse_record(&self.buf, self.line, &mut self.seen_ids));
        }
    }
}

fn parse_record(
    text: &str,
    line: usize,
    seen_ids: &mut BTreeSet<String>,
) -> Result<RawComment, RecordError> {
    let value: Value = serde_json::from_str(text.trim()).map_err(|e| RecordError::Malformed {
        line,
        msg: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| RecordError::Malformed {
        line,
        msg: "record is not a JSON object".into(),
    })?;
    let str_field = |field: &'static str| -> Result<String, RecordError> {
        obj.get(field)
            .and_then(Value::as_str)
            .map(str::to_owned)
            .ok_or(RecordError::Field { line, field })
    };
    // Ids end up in whitespace- and comma-delimited text formats, so they
    // must stay free of separators and control characters.
    let id_field = |field: &'static str| -> Result<String, RecordError> {
        let id = str_field(field)?;
        if id.is_empty() || id.chars().any(|c| c.is_whitespace() || c == ',' || c.is_control()) {
            return Err(RecordError::Field { line, field });
        }
        Ok(id)
    };
    let comment_id = id_field("comment_id")?;
    let user_id = id_field("user_id")?;
    let video_id = id_field("video_id")?;
    let timestamp = obj
        .get("timestamp")
        .and_then(Value::as_i64)
        .ok_or(RecordError::Field {
            line,
            field: "timestamp",
        })?;
    let text = str_field("text")?;
    let spam_hint = obj
        .get("spam_hint")
        .and_then(Value::as_bool)
        .ok_or(RecordError::Field {
            line,
            field: "spam_hint",
        })?;
    if timestamp < 0 {
        return Err(RecordError::NegativeTimestamp {
            line,
            value: timestamp,
        });
    }
    if !seen_ids.insert(comment_id.clone()) {
        return Err(RecordError::DuplicateId {
            line,
            id: comment_id,
        });
    }
    Ok(RawComment {
        comment_id,
        user_id,
        video_id,
        timestamp,
        text,
        spam_hint,
    })
}

/// Parse comment records from a byte stream, yielding per-record results.
pub fn parse_comments<R: BufRead>(reader: R, format: InputFormat) -> CommentParser<R> {
    let InputFormat::Jsonl = format;
    CommentParser {
        reader,
        line: 0,
        seen_ids: BTreeSet::new(),
        buf: String::new(),
    }
}

/// Parse the whole stream, failing on the first bad record.
pub fn parse_comments_strict<R: BufRead>(
    reader: R,
    format: InputFormat,
) -> Result<Vec<RawComment>, RecordError> {
    parse_comments(reader, format).collect()
}

/// Parse the whole stream, collecting bad records on the side.
pub fn parse_comments_lenient<R: BufRead>(
    reader: R,
    format: InputFormat,
) -> (Vec<RawComment>, Vec<RecordError>) {
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for item in parse_comments(reader, format) {
        match item {
            Ok(c) => ok.push(c),
            Err(e) => errors.push(e),
        }
    }
    (ok, errors)
}

/// Letters in the Latin Unicode blocks (Basic Latin, Latin-1 Supplement,
/// Latin Extended-A/B).
fn is_latin_letter(c: char) -> bool {
    c.is_alphabetic() && (c as u32) <= 0x024F
}

/// Strip a single token down to lowercase letters and ASCII digits.
fn strip_token(word: &str) -> String {
    word.chars()
        .flat_map(char::to_lowercase)
        .filter(|&c| (c.is_alphabetic() && c.is_lowercase()) || c.is_ascii_digit())
        .collect()
}

/// Apply the normalization pipeline to a raw comment. Returns `None` when
/// the normalized text falls short of `cfg.min_length` characters.
pub fn normalize(raw: &RawComment, cfg: &IngestConfig) -> Option<CleanComment> {
    let mut tokens: Vec<String> = Vec::new();
    for word in raw.text.split_whitespace() {
        if cfg.latin_only && word.chars().any(|c| c.is_alphabetic() && !is_latin_letter(c)) {
            continue;
        }
        let token = strip_token(word);
        if token.is_empty() || cfg.stopwords.contains(&token) {
            continue;
        }
        tokens.push(token);
    }
    let norm_text: String = tokens.concat();
    if norm_text.chars().count() < cfg.min_length {
        return None;
    }
    Some(CleanComment {
        user_id: raw.user_id.clone(),
        video_id: raw.video_id.clone(),
        timestamp: raw.timestamp,
        tokens,
        norm_text,
        spam_hint: raw.spam_hint,
    })
}

/// Select the comments falling in the half-open interval
/// `[start, start + duration)`, preserving input order.
pub fn select_window(comments: &[CleanComment], start: i64, duration: i64) -> Vec<CleanComment> {
    assert!(duration > 0, "window duration must be positive");
    comments
        .iter()
        .filter(|c| c.timestamp >= start && c.timestamp < start + duration)
        .cloned()
        .collect()
}
