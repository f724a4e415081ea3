//! Plain-text grid files: one word per line, `{0,1,X}` for contents and
//! `{0,1}` for queries. Blank lines are ignored.

use crate::cell::{SearchBit, TernaryBit};
use crate::error::{Result, TcamError};

fn parse_lines<T>(text: &str, what: &str, parse: impl Fn(char) -> Option<T>) -> Result<Vec<Vec<T>>> {
    let mut out: Vec<Vec<T>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .chars()
            .enumerate()
            .map(|(col, c)| {
                parse(c).ok_or_else(|| TcamError::Format {
                    line: i + 1,
                    msg: format!("invalid {what} character {c:?} at column {}", col + 1),
                })
            })
            .collect::<Result<Vec<T>>>()?;
        if let Some(first) = out.first() {
            if first.len() != row.len() {
                return Err(TcamError::Format {
                    line: i + 1,
                    msg: format!("width {} differs from first row width {}", row.len(), first.len()),
                });
            }
        }
        out.push(row);
    }
    Ok(out)
}

pub fn parse_grid(text: &str) -> Result<Vec<Vec<TernaryBit>>> {
    parse_lines(text, "cell", TernaryBit::from_char)
}

pub fn parse_queries(text: &str) -> Result<Vec<Vec<SearchBit>>> {
    parse_lines(text, "query", SearchBit::from_char)
}

pub fn write_grid(words: &[Vec<TernaryBit>]) -> String {
    let mut s = String::new();
    for w in words {
        s.extend(w.iter().map(|b| b.to_char()));
        s.push('\n');
    }
    s
}

pub fn write_queries(queries: &[Vec<SearchBit>]) -> String {
    let mut s = String::new();
    for q in queries {
        s.extend(q.iter().map(|b| b.to_char()));
        s.push('\n');
    }
    s
}
