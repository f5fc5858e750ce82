//! Tokenizer for `.mml` source.

use crate::diag::{codes, Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Int(i64),
    Float(f64),
    Str(String),
    Ident(String),
    /// A backtick-quoted name; may contain spaces.
    Quoted(String),
    // keywords
    Let,
    LetBang,
    Rec,
    In,
    Fun,
    If,
    Then,
    Else,
    For,
    Do,
    Try,
    With,
    Return,
    Async,
    Type,
    True,
    False,
    Unbox,
    // punctuation
    LParen,
    RParen,
    LBracket,
    RBracket,
    LArray,
    RArray,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    Arrow,
    LeftArrow,
    Pipe,
    OrOr,
    AndAnd,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    ColonColon,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    PlusDot,
    MinusDot,
    StarDot,
    SlashDot,
    Caret,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(i) => format!("integer {i}"),
            Tok::Float(x) => format!("float {x:?}"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Ident(n) => format!("identifier `{n}`"),
            Tok::Quoted(n) => format!("quoted name ``{n}``"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Let => "let",
            Tok::LetBang => "let!",
            Tok::Rec => "rec",
            Tok::In => "in",
            Tok::Fun => "fun",
            Tok::If => "if",
            Tok::Then => "then",
            Tok::Else => "else",
            Tok::For => "for",
            Tok::Do => "do",
            Tok::Try => "try",
            Tok::With => "with",
            Tok::Return => "return",
            Tok::Async => "async",
            Tok::Type => "type",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Unbox => "unbox",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LArray => "[|",
            Tok::RArray => "|]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Arrow => "->",
            Tok::LeftArrow => "<-",
            Tok::Pipe => "|>",
            Tok::OrOr => "||",
            Tok::AndAnd => "&&",
            Tok::Eq => "=",
            Tok::Ne => "<>",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::ColonColon => "::",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Percent => "%",
            Tok::PlusDot => "+.",
            Tok::MinusDot => "-.",
            Tok::StarDot => "*.",
            Tok::SlashDot => "/.",
            Tok::Caret => "^",
            _ => "?",
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "let", "rec", "in", "fun", "if", "then", "else", "for", "do", "try", "with", "return", "async", "type", "true",
    "false", "unbox",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// True when `s` can be written without backticks.
pub fn is_plain_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') && !is_keyword(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
    /// Whitespace or a comment precedes this token.
    pub spaced: bool,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    Lexer {
        src,
        bytes: src.as_bytes(),
        pos: 0,
    }
    .run()
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek_at(&self, off: usize) -> u8 {
        self.bytes.get(self.pos + off).copied().unwrap_or(0)
    }

    fn run(mut self) -> Result<Vec<Token>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            let spaced = self.skip_trivia() || out.is_empty();
            let start = self.pos;
            if self.pos >= self.bytes.len() {
                out.push(Token {
                    tok: Tok::Eof,
                    span: SourceSpan::new(start, start),
                    spaced,
                });
                return Ok(out);
            }
            let tok = self.next_tok()?;
            out.push(Token {
                tok,
                span: SourceSpan::new(start, self.pos),
                spaced,
            });
        }
    }

    fn skip_trivia(&mut self) -> bool {
        let start = self.pos;
        loop {
            let c = self.peek_at(0);
            if c == b' ' || c == b'\t' || c == b'\n' || c == b'\r' {
                self.pos += 1;
            } else if c == b'/' && self.peek_at(1) == b'/' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
        self.pos > start
    }

    fn err(&self, code: &'static str, start: usize, msg: impl Into<String>) -> Diagnostic {
        let end = self.pos.max(start + 1).min(self.bytes.len()).max(start);
        Diagnostic::error(code, SourceSpan::new(start, end), msg)
    }

    fn next_tok(&mut self) -> Result<Tok, Diagnostic> {
        let start = self.pos;
        let c = self.bytes[self.pos];
        if c.is_ascii_digit() {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.peek_at(0).is_ascii_alphanumeric() || self.peek_at(0) == b'_' || self.peek_at(0) == b'\'' {
                self.pos += 1;
            }
            let word = &self.src[start..self.pos];
            if word == "let" && self.peek_at(0) == b'!' {
                self.pos += 1;
                return Ok(Tok::LetBang);
            }
            return Ok(match word {
                "let" => Tok::Let,
                "rec" => Tok::Rec,
                "in" => Tok::In,
                "fun" => Tok::Fun,
                "if" => Tok::If,
                "then" => Tok::Then,
                "else" => Tok::Else,
                "for" => Tok::For,
                "do" => Tok::Do,
                "try" => Tok::Try,
                "with" => Tok::With,
                "return" => Tok::Return,
                "async" => Tok::Async,
                "type" => Tok::Type,
                "true" => Tok::True,
                "false" => Tok::False,
                "unbox" => Tok::Unbox,
                _ => Tok::Ident(word.to_string()),
            });
        }
        match c {
            b'"' => return self.string(),
            b'`' => {
                self.pos += 1;
                let body_start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'`' && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                if self.peek_at(0) != b'`' {
                    return Err(self.err(codes::PARSE_UNTERMINATED_STRING, start, "unterminated backtick name"));
                }
                let name = self.src[body_start..self.pos].to_string();
                self.pos += 1;
                if name.is_empty() {
                    return Err(self.err(codes::PARSE_INVALID_CHAR, start, "empty backtick name"));
                }
                return Ok(Tok::Quoted(name));
            }
            _ => {}
        }
        let two = [c, self.peek_at(1)];
        let tok2 = match &two {
            b"[|" => Some(Tok::LArray),
            b"|]" => Some(Tok::RArray),
            b"->" => Some(Tok::Arrow),
            b"<-" => Some(Tok::LeftArrow),
            b"|>" => Some(Tok::Pipe),
            b"||" => Some(Tok::OrOr),
            b"&&" => Some(Tok::AndAnd),
            b"<>" => Some(Tok::Ne),
            b"<=" => Some(Tok::Le),
            b">=" => Some(Tok::Ge),
            b"::" => Some(Tok::ColonColon),
            b"+." => Some(Tok::PlusDot),
            b"-." => Some(Tok::MinusDot),
            b"*." => Some(Tok::StarDot),
            b"/." => Some(Tok::SlashDot),
            _ => None,
        };
        if let Some(t) = tok2 {
            self.pos += 2;
            return Ok(t);
        }
        let tok1 = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b';' => Tok::Semi,
            b'.' => Tok::Dot,
            b'=' => Tok::Eq,
            b'<' => Tok::Lt,
            b'>' => Tok::Gt,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'%' => Tok::Percent,
            b'^' => Tok::Caret,
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                self.pos += ch.len_utf8();
                return Err(self.err(codes::PARSE_INVALID_CHAR, start, format!("unexpected character {ch:?}")));
            }
        };
        self.pos += 1;
        Ok(tok1)
    }

    fn number(&mut self) -> Result<Tok, Diagnostic> {
        let start = self.pos;
        while self.peek_at(0).is_ascii_digit() {
            self.pos += 1;
        }
        let mut is_float = false;
        if self.peek_at(0) == b'.' && self.peek_at(1).is_ascii_digit() {
            is_float = true;
            self.pos += 1;
            while self.peek_at(0).is_ascii_digit() {
                self.pos += 1;
            }
        }
        if matches!(self.peek_at(0), b'e' | b'E') {
            let sign = usize::from(matches!(self.peek_at(1), b'+' | b'-'));
            if self.peek_at(1 + sign).is_ascii_digit() {
                is_float = true;
                self.pos += 1 + sign;
                while self.peek_at(0).is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = &self.src[start..self.pos];
        if is_float {
            text.parse::<f64>()
                .map(Tok::Float)
                .map_err(|_| self.err(codes::PARSE_INVALID_NUMBER, start, "invalid float literal"))
        } else {
            text.parse::<i64>()
                .map(Tok::Int)
                .map_err(|_| self.err(codes::PARSE_INVALID_NUMBER, start, "integer literal out of range"))
        }
    }

    fn string(&mut self) -> Result<Tok, Diagnostic> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            let Some(ch) = self.src[self.pos..].chars().next() else {
                return Err(Diagnostic::error(
                    codes::PARSE_UNTERMINATED_STRING,
                    SourceSpan::new(start, self.src.len()),
                    "unterminated string literal",
                ));
            };
            self.pos += ch.len_utf8();
            match ch {
                '"' => return Ok(Tok::Str(out)),
                '\\' => {
                    let esc = self.src[self.pos..].chars().next();
                    self.pos += esc.map_or(0, char::len_utf8);
                    match esc {
                        Some('n') => out.push('\n'),
                        Some('t') => out.push('\t'),
                        Some('r') => out.push('\r'),
                        Some('\\') => out.push('\\'),
                        Some('"') => out.push('"'),
                        Some('u') if self.peek_at(0) == b'{' => {
                            let close = self.src[self.pos..].find('}');
                            let code = close
                                .and_then(|c| u32::from_str_radix(&self.src[self.pos + 1..self.pos + c], 16).ok())
                                .and_then(char::from_u32);
                            match (close, code) {
                                (Some(c), Some(ch)) => {
                                    out.push(ch);
                                    self.pos += c + 1;
                                }
                                _ => return Err(self.err(codes::PARSE_INVALID_CHAR, start, "invalid unicode escape")),
                            }
                        }
                        None => {
                            return Err(Diagnostic::error(
                                codes::PARSE_UNTERMINATED_STRING,
                                SourceSpan::new(start, self.src.len()),
                                "unterminated string literal",
                            ))
                        }
                        Some(other) => {
                            return Err(self.err(codes::PARSE_INVALID_CHAR, start, format!("unknown escape \\{other}")))
                        }
                    }
                }
                _ => out.push(ch),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers() {
        assert_eq!(
            toks("1 2.5 1e3 3.foo"),
            vec![
                Tok::Int(1),
                Tok::Float(2.5),
                Tok::Float(1000.0),
                Tok::Int(3),
                Tok::Dot,
                Tok::Ident("foo".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn let_bang_and_quoted() {
        assert_eq!(
            toks("let! x = d.`Czech Republic`"),
            vec![
                Tok::LetBang,
                Tok::Ident("x".into()),
                Tok::Eq,
                Tok::Ident("d".into()),
                Tok::Dot,
                Tok::Quoted("Czech Republic".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn spacing_is_tracked() {
        let t = tokenize("f(x) g (y)").unwrap();
        assert!(!t[1].spaced);
        assert!(t[5].spaced);
    }

    #[test]
    fn unterminated_string_spans_to_end() {
        let d = tokenize("let s = \"abc").unwrap_err();
        assert_eq!(d.code, codes::PARSE_UNTERMINATED_STRING);
        assert_eq!(d.span, SourceSpan::new(8, 12));
    }

    #[test]
    fn escapes() {
        assert_eq!(toks(r#""a\n\"\u{41}""#)[0], Tok::Str("a\n\"A".into()));
    }
}
