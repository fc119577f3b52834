//! ASCII surface syntax for words: `a`–`z` are the first 26 generators,
//! `A`–`Z` their inverses, and `[k]` / `[-k]` spell generator `k` for any
//! rank. The identity is written `1`.

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

pub fn format_letter(x: Letter, out: &mut String) {
    let i = x.unsigned_abs();
    if i <= 26 {
        let base = if x > 0 { b'a' } else { b'A' };
        out.push((base + (i - 1) as u8) as char);
    } else {
        out.push_str(&format!("[{x}]"));
    }
}

pub fn format_letters(letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    let mut s = String::with_capacity(letters.len());
    for &x in letters {
        format_letter(x, &mut s);
    }
    s
}

fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: message.into(),
    }
}

/// Parses a raw letter sequence without reducing it.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let t = s.trim();
    if t.is_empty() || t == "1" || t == "ε" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        match c {
            'a'..='z' => out.push((c as u8 - b'a' + 1) as Letter),
            'A'..='Z' => out.push(-((c as u8 - b'A' + 1) as Letter)),
            '[' => {
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some((_, ']')) => break,
                        Some((_, d)) => body.push(d),
                        None => return Err(parse_error(pos + 1, "unterminated '['")),
                    }
                }
                let x: Letter = body
                    .trim()
                    .parse()
                    .map_err(|_| parse_error(pos + 1, format!("bad generator index '{body}'")))?;
                if x == 0 {
                    return Err(parse_error(pos + 1, "generator index 0"));
                }
                out.push(x);
            }
            c if c.is_whitespace() || c == '.' || c == '·' => {}
            _ => return Err(parse_error(pos + 1, format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

/// Parses and reduces a word of the given rank.
pub fn parse_word(s: &str, rank: usize) -> Result<Word> {
    Word::reduce(parse_letters(s)?, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_small_and_large_ranks() {
        let w = parse_word("abA", 2).unwrap();
        assert_eq!(w.letters(), &[1, 2, -1]);
        assert_eq!(w.to_string(), "abA");
        let big = Word::reduce([27, -30, 1], 30).unwrap();
        assert_eq!(big.to_string(), "[27][-30]a");
        assert_eq!(parse_word(&big.to_string(), 30).unwrap(), big);
        assert_eq!(Word::identity(2).to_string(), "1");
        assert!(parse_word("1", 2).unwrap().is_empty());
    }

    #[test]
    fn parse_errors_carry_column() {
        match parse_letters("ab?") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_letters("a[0]").is_err());
        assert!(parse_letters("a[12").is_err());
        assert!(matches!(
            parse_word("c", 2),
            Err(Error::MalformedLetter { letter: 3, rank: 2 })
        ));
    }
}
