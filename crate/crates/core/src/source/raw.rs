//! Physical and logical line counting.
//!
//! Lines are stripped and fed to the tokenizer one at a time; when a line
//! leaves a string or bracket open (or produces an error token) the next
//! line is appended and the buffer re-tokenized. Each complete buffer is then
//! classified as a lone comment, a lone string (docstring) or code.

use serde::{Deserialize, Serialize};

use super::lexer::{scan_buffer, Completion, RawKind, RawToken};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawCounts {
    /// Physical lines.
    pub loc: usize,
    /// Lines holding code (a trailing comment does not change that).
    pub sloc: usize,
    /// Comment-only lines plus lines of standalone multi-line strings.
    pub comment_lines: usize,
    /// Whitespace-only lines.
    pub blank: usize,
    /// Logical lines; `if x: y` counts twice.
    pub lloc: usize,
    /// Every comment token, including ones trailing code.
    pub comment_tokens: usize,
    /// Lines belonging to standalone multi-line strings.
    pub multi: usize,
    /// Comment-only lines and one-line standalone strings.
    pub single_comments: usize,
    /// False when the text ended inside an unterminated construct; the
    /// remaining lines were then counted as plain code/blank lines.
    pub complete: bool,
}

impl RawCounts {
    /// Comment density used by the maintainability formula: all comment
    /// tokens plus docstring lines, as a percentage of `sloc`. Can exceed 100.
    pub fn comment_percent(&self) -> f64 {
        if self.sloc == 0 {
            0.0
        } else {
            (self.comment_tokens + self.multi) as f64 / self.sloc as f64 * 100.0
        }
    }
}

/// Line boundaries recognised by `str.splitlines`.
fn is_line_break(c: char) -> bool {
    matches!(
        c,
        '\n' | '\r' | '\x0b' | '\x0c' | '\x1c' | '\x1d' | '\x1e' | '\u{85}' | '\u{2028}' | '\u{2029}'
    )
}

/// Whitespace as `str.strip` sees it.
fn is_py_space(c: char) -> bool {
    c.is_whitespace() || matches!(c, '\x1c'..='\x1f')
}

pub(crate) fn split_lines(text: &str) -> Vec<&str> {
    let mut lines = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if is_line_break(c) {
            lines.push(&text[start..i]);
            let mut next = i + c.len_utf8();
            if c == '\r' {
                if let Some(&(j, '\n')) = chars.peek() {
                    chars.next();
                    next = j + 1;
                }
            }
            start = next;
        }
    }
    if start < text.len() {
        lines.push(&text[start..]);
    }
    lines
}

fn is_single_token(kind: RawKind, tokens: &[RawToken]) -> bool {
    tokens[0].kind == kind
        && tokens[1..]
            .iter()
            .all(|t| matches!(t.kind, RawKind::EndMarker | RawKind::Nl | RawKind::Newline))
}

fn logical_lines(tokens: &[RawToken], buffer: &str) -> usize {
    let mut total = 0;
    let mut part: Vec<&RawToken> = Vec::new();
    let mut flush = |part: &mut Vec<&RawToken>| {
        let kept: Vec<&&RawToken> = part
            .iter()
            .filter(|t| !matches!(t.kind, RawKind::Comment | RawKind::Nl | RawKind::Newline))
            .collect();
        let colon = kept
            .iter()
            .rposition(|t| t.kind == RawKind::Op && t.text(buffer) == ":");
        total += match colon {
            Some(pos) if kept.len() >= 2 && pos == kept.len() - 2 => 1,
            Some(_) => 2,
            None if kept.iter().all(|t| t.kind == RawKind::EndMarker) => 0,
            None => 1,
        };
        part.clear();
    };
    for t in tokens {
        if t.kind == RawKind::Op && t.text(buffer) == ";" {
            flush(&mut part);
        } else {
            part.push(t);
        }
    }
    flush(&mut part);
    total
}

pub fn count(text: &str) -> RawCounts {
    let lines: Vec<&str> = split_lines(text)
        .into_iter()
        .map(|l| l.trim_matches(is_py_space))
        .collect();
    let mut c = RawCounts {
        complete: true,
        ..RawCounts::default()
    };
    let mut i = 0;
    while i < lines.len() {
        let first = i;
        let mut buffer = lines[i].to_string();
        i += 1;
        let scan = loop {
            let scan = scan_buffer(&buffer);
            if scan.completion == Completion::Complete && !scan.has_error() {
                break Some(scan);
            }
            if i == lines.len() {
                break None;
            }
            buffer.push('\n');
            buffer.push_str(lines[i]);
            i += 1;
        };
        let used = &lines[first..i];
        let Some(scan) = scan else {
            c.complete = false;
            for line in used {
                if line.is_empty() {
                    c.blank += 1;
                } else {
                    c.sloc += 1;
                }
            }
            break;
        };
        let tokens = &scan.tokens;
        c.comment_tokens += tokens.iter().filter(|t| t.kind == RawKind::Comment).count();
        if is_single_token(RawKind::Comment, tokens) {
            c.single_comments += 1;
        } else if is_single_token(RawKind::String, tokens) {
            if tokens[0].line == tokens[0].end_line {
                c.single_comments += 1;
            } else {
                c.multi += used.iter().filter(|l| !l.is_empty()).count();
                c.blank += used.iter().filter(|l| l.is_empty()).count();
            }
        } else {
            for line in used {
                if line.is_empty() {
                    c.blank += 1;
                } else {
                    c.sloc += 1;
                }
            }
        }
        c.lloc += logical_lines(tokens, &buffer);
    }
    c.loc = c.sloc + c.blank + c.multi + c.single_comments;
    c.comment_lines = c.single_comments + c.multi;
    c
}
