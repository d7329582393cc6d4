//! The line-oriented germ file format.
//!
//! ```text
//! garside-germ v1
//! object x
//! simple s : x -> x
//! simple st : x -> x len 2
//! product s t = st
//! delta x = D
//! ```
//!
//! Names must be declared before they are used.

use std::fmt::{self, Write as _};

use super::{GarsideGerm, GermTable, ObjectId, SimpleId, TableError};

pub const HEADER: &str = "garside-germ v1";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("missing header `{HEADER}`")]
    MissingHeader,
    #[error("unknown directive {0:?}")]
    UnknownDirective(String),
    #[error("expected {expected}, found {found}")]
    Expected { expected: &'static str, found: String },
    #[error("unexpected trailing token {0:?}")]
    Trailing(String),
    #[error("invalid length {0:?}")]
    BadLength(String),
    #[error(transparent)]
    Table(#[from] TableError),
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    end_column: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
}

impl<'a> Line<'a> {
    fn new(number: usize, raw: &'a str) -> Self {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in content.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..i],
                        column: s + 1,
                    });
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push(Token {
                text: &content[s..],
                column: s + 1,
            });
        }
        Line {
            number,
            end_column: content.trim_end().len() + 1,
            tokens,
            pos: 0,
        }
    }

    fn error_at(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.number,
            column,
            kind,
        }
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn next(&mut self, expected: &'static str) -> Result<&'a str, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.text)
            }
            None => Err(self.error_at(
                self.end_column,
                ParseErrorKind::Expected {
                    expected,
                    found: "end of line".into(),
                },
            )),
        }
    }

    fn keyword(&mut self, word: &'static str) -> Result<(), ParseError> {
        let column = self.column();
        let found = self.next(word)?;
        if found != word {
            return Err(self.error_at(
                column,
                ParseErrorKind::Expected {
                    expected: word,
                    found: format!("{found:?}"),
                },
            ));
        }
        Ok(())
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => Err(self.error_at(t.column, ParseErrorKind::Trailing(t.text.into()))),
            None => Ok(()),
        }
    }

    fn object(&mut self, table: &GermTable) -> Result<ObjectId, ParseError> {
        let column = self.column();
        let name = self.next("object name")?;
        table
            .object_by_name(name)
            .ok_or_else(|| self.error_at(column, TableError::UnknownObject(name.into()).into()))
    }

    fn simple(&mut self, table: &GermTable) -> Result<SimpleId, ParseError> {
        let column = self.column();
        let name = self.next("simple name")?;
        table
            .simple_by_name(name)
            .ok_or_else(|| self.error_at(column, TableError::UnknownSimple(name.into()).into()))
    }
}

/// Parses a germ file into a [`GermTable`].
pub fn parse_germ(text: &str) -> Result<GermTable, ParseError> {
    let mut table = GermTable::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let mut line = Line::new(i + 1, raw);
        if line.tokens.is_empty() {
            continue;
        }
        if !seen_header {
            let words: Vec<_> = line.tokens.iter().map(|t| t.text).collect();
            if words.join(" ") != HEADER {
                return Err(line.error_at(1, ParseErrorKind::MissingHeader));
            }
            seen_header = true;
            continue;
        }
        let column = line.column();
        let directive = line.next("directive")?;
        let at_start = |line: &Line, e: TableError| line.error_at(column, e.into());
        match directive {
            "object" => {
                let name_col = line.column();
                let name = line.next("object name")?;
                line.finish()?;
                table.add_object(name).map_err(|e| line.error_at(name_col, e.into()))?;
            }
            "simple" => {
                let name_col = line.column();
                let name = line.next("simple name")?;
                line.keyword(":")?;
                let src = line.object(&table)?;
                line.keyword("->")?;
                let tgt = line.object(&table)?;
                let mut length = 1;
                if line.pos < line.tokens.len() {
                    line.keyword("len")?;
                    let len_col = line.column();
                    let raw = line.next("length")?;
                    length = raw
                        .parse::<u32>()
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| line.error_at(len_col, ParseErrorKind::BadLength(raw.into())))?;
                }
                line.finish()?;
                table
                    .add_simple(name, src, tgt, length)
                    .map_err(|e| line.error_at(name_col, e.into()))?;
            }
            "product" => {
                let a = line.simple(&table)?;
                let b = line.simple(&table)?;
                line.keyword("=")?;
                let c = line.simple(&table)?;
                line.finish()?;
                table.add_product(a, b, c).map_err(|e| at_start(&line, e))?;
            }
            "delta" => {
                let x = line.object(&table)?;
                line.keyword("=")?;
                let d = line.simple(&table)?;
                line.finish()?;
                table.set_delta(x, d).map_err(|e| at_start(&line, e))?;
            }
            other => {
                return Err(line.error_at(column, ParseErrorKind::UnknownDirective(other.into())));
            }
        }
    }
    if !seen_header {
        return Err(ParseError {
            line: 1,
            column: 1,
            kind: ParseErrorKind::MissingHeader,
        });
    }
    Ok(table)
}

fn write_table(table: &GermTable, delta: impl Fn(ObjectId) -> Option<SimpleId>, out: &mut String) -> fmt::Result {
    writeln!(out, "{HEADER}")?;
    for o in table.objects() {
        writeln!(out, "object {}", o.name)?;
    }
    for s in table.simples().iter().filter(|s| s.length > 0) {
        write!(
            out,
            "simple {} : {} -> {}",
            s.name,
            table.object_name(s.source),
            table.object_name(s.target)
        )?;
        if s.length != 1 {
            write!(out, " len {}", s.length)?;
        }
        writeln!(out)?;
    }
    for (a, b, c) in table.explicit_products() {
        writeln!(out, "product {} {} = {}", table.name(a), table.name(b), table.name(c))?;
    }
    for x in table.object_ids() {
        if let Some(d) = delta(x) {
            writeln!(out, "delta {} = {}", table.object_name(x), table.name(d))?;
        }
    }
    Ok(())
}

impl GermTable {
    /// Serializes the table, including only declared deltas.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_table(self, |x| self.declared_delta(x), &mut out).expect("writing to a String");
        out
    }
}

impl GarsideGerm {
    /// Serializes the germ with the Garside map of every object declared.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_table(&self.table, |x| Some(self.delta(x)), &mut out).expect("writing to a String");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = "garside-germ v1
object x
simple s : x -> x
simple t : x -> x
simple st : x -> x len 2
simple ts : x -> x len 2
simple D : x -> x len 3
product s t = st
product t s = ts
product s ts = D
product st s = D
product t st = D
product ts t = D
delta x = D
";

    #[test]
    fn parses_hexagon() {
        let t = parse_germ(A2).unwrap();
        assert_eq!(t.object_count(), 1);
        assert_eq!(t.simple_count(), 6);
        let s = t.simple_by_name("s").unwrap();
        let tt = t.simple_by_name("t").unwrap();
        assert_eq!(t.product(s, tt), t.simple_by_name("st"));
        assert_eq!(t.name(t.identity(ObjectId(0))), "id@x");
    }

    #[test]
    fn only_an_object() {
        let t = parse_germ("garside-germ v1\nobject x\n").unwrap();
        assert_eq!((t.object_count(), t.simple_count()), (1, 1));
    }

    #[test]
    fn endpoint_mismatch() {
        let text = "garside-germ v1\nobject x\nobject y\nsimple s : x -> y\nsimple t : x -> y\n\
                    simple u : x -> y len 2\nproduct s t = u\n";
        let err = parse_germ(text).unwrap_err();
        assert_eq!(err.line, 7);
        assert!(matches!(
            err.kind,
            ParseErrorKind::Table(TableError::NotComposable { .. })
        ));
    }

    #[test]
    fn non_additive_length() {
        let text = "garside-germ v1\nobject x\nsimple s : x -> x\nsimple u : x -> x len 3\nproduct s s = u\n";
        let err = parse_germ(text).unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::Table(TableError::NonAdditive { .. })
        ));
    }

    #[test]
    fn syntax_errors_report_positions() {
        let err = parse_germ("object x\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingHeader);
        let err = parse_germ("garside-germ v1\nobject x\nsimple s x -> x\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 10));
        let err = parse_germ("garside-germ v1\nobject x\nsimple s : x -> x len 0\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadLength("0".into()));
        let err = parse_germ("garside-germ v1\nobject x\nobject x\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Table(TableError::DuplicateObject("x".into())));
        let err = parse_germ("garside-germ v1\nobject len\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Table(TableError::ReservedName("len".into())));
        let err = parse_germ("garside-germ v1\nobject x\nsimple id@x : x -> x\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Table(_)));
        let err = parse_germ("garside-germ v1\nfrobnicate\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownDirective("frobnicate".into()));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# leading comment\n\ngarside-germ v1 # trailing\nobject x # the only one\n";
        assert_eq!(parse_germ(text).unwrap().object_count(), 1);
    }

    #[test]
    fn round_trip() {
        let t = parse_germ(A2).unwrap();
        let again = parse_germ(&t.to_text()).unwrap();
        assert_eq!(t.to_text(), again.to_text());
        assert_eq!(again.explicit_products().len(), 6);
    }
}
