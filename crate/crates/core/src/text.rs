//! Line-oriented text format for presentations, plus profile exports.
//!
//! ```text
//! # a kinked unknot
//! cup 0
//! cup 1
//! x+ 1
//! cap 1
//! cap 0
//! ```
//!
//! One event per non-empty line, bottom to top. `#` starts a comment.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::morse::{EventKind, GapClass, LevelProfile, MorseEvent, MorsePresentation, ValidationError};

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: syntax error: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: {source}")]
    Semantic {
        span: SourceSpan,
        #[source]
        source: ValidationError,
    },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. } | ParseError::Semantic { span, .. } => *span,
        }
    }
}

fn kind_of(token: &str) -> Option<EventKind> {
    match token {
        "cup" => Some(EventKind::Cup),
        "cap" => Some(EventKind::Cap),
        "x+" => Some(EventKind::CrossPos),
        "x-" => Some(EventKind::CrossNeg),
        _ => None,
    }
}

/// Tokens of a line with their 1-based columns, comment stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &code[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &code[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (code[..byte].chars().count() + 1, tok))
        .collect()
}

pub fn parse(text: &str) -> Result<MorsePresentation, ParseError> {
    let mut events = Vec::new();
    let mut spans = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let (col, word) = toks[0];
        let syntax = |column: usize, message: String| ParseError::Syntax {
            span: SourceSpan { line: line_no, column },
            message,
        };
        let kind = kind_of(word)
            .ok_or_else(|| syntax(col, format!("unknown event `{word}` (expected cup, cap, x+ or x-)")))?;
        let Some(&(pcol, ptok)) = toks.get(1) else {
            return Err(syntax(col + word.chars().count(), format!("`{word}` needs a position")));
        };
        let position: usize = ptok
            .parse()
            .map_err(|_| syntax(pcol, format!("position `{ptok}` is not a non-negative integer")))?;
        if let Some(&(xcol, extra)) = toks.get(2) {
            return Err(syntax(xcol, format!("unexpected token `{extra}`")));
        }
        events.push(MorseEvent::new(kind, position));
        spans.push(SourceSpan {
            line: line_no,
            column: col,
        });
    }
    MorsePresentation::new(events).map_err(|source| ParseError::Semantic {
        span: spans[source.event()],
        source,
    })
}

/// Canonical text: lowercase tokens, one event per line, newline-terminated.
pub fn serialize(pres: &MorsePresentation) -> String {
    let mut out = String::with_capacity(pres.len() * 6);
    for event in pres.events() {
        out.push_str(&event.to_string());
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct GapExport {
    count: usize,
    class: GapClass,
}

#[derive(Serialize)]
struct ProfileExport<'a> {
    gaps: Vec<GapExport>,
    width: usize,
    ladder: &'a [usize],
}

/// `{"gaps":[{"count":..,"class":"thin|thick|neither"}],"width":..,"ladder":[..]}`
pub fn profile_json(profile: &LevelProfile) -> String {
    let export = ProfileExport {
        gaps: profile
            .gaps
            .iter()
            .map(|g| GapExport {
                count: g.count,
                class: g.class,
            })
            .collect(),
        width: profile.width,
        ladder: profile.ladder.values(),
    };
    serde_json::to_string(&export).expect("profile export serializes")
}

/// `gap_index,count,class` rows with a header line.
pub fn profile_csv(profile: &LevelProfile) -> String {
    let mut out = String::from("gap_index,count,class\n");
    for (i, g) in profile.gaps.iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", g.count, g.class.as_str()));
    }
    out
}
