use std::fmt;

use super::ParseError;

/// Reserved words. Matched case-insensitively; everything else that looks
/// like an identifier (including model and type names) is an identifier.
pub const KEYWORDS: &[&str] = &[
    "AND", "AS", "ASC", "BY", "CREATE", "DELETE", "DESC", "DISTINCT", "FALSE", "FOREIGN", "FROM", "IN",
    "INIT", "INSERT", "INTO", "JOIN", "LEFT", "LIST", "MATCH", "MULTIVAL", "NOT", "NULL", "OF", "OM", "OR",
    "ORDER", "PATH", "PRIMARY", "RIGHT", "RULE", "SELECT", "SET", "TRANSFER", "TRUE", "UPDATE", "VIEW",
    "WHERE", "WITH", "XOR",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Ident,
    IntLit,
    StrLit,
    Punct,
    ArrowRight,
    ArrowLeft,
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Keywords are uppercased, string literals unescaped, punctuation and
    /// arrows in their ASCII spelling.
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == kw
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == p
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::Eof => f.write_str("end of input"),
            TokenKind::StrLit => write!(f, "string \"{}\"", self.text),
            TokenKind::Ident => write!(f, "identifier {}", self.text),
            TokenKind::IntLit => write!(f, "integer {}", self.text),
            _ => write!(f, "'{}'", self.text),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Lexer<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }
}

/// Splits source text into tokens, always ending with an `Eof` token.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        let (line, column) = (lx.line, lx.column);
        let Some(c) = lx.peek() else {
            out.push(Token {
                kind: TokenKind::Eof,
                text: String::new(),
                line,
                column,
            });
            return Ok(out);
        };
        let tok = |kind, text: &str| Token {
            kind,
            text: text.to_string(),
            line,
            column,
        };
        match c {
            c if c.is_whitespace() => {
                lx.bump();
            }
            '-' if lx.peek2() == Some('-') => {
                while let Some(c) = lx.peek() {
                    if c == '\n' {
                        break;
                    }
                    lx.bump();
                }
            }
            '/' if lx.peek2() == Some('*') => {
                lx.bump();
                lx.bump();
                let mut closed = false;
                while let Some(c) = lx.bump() {
                    if c == '*' && lx.peek() == Some('/') {
                        lx.bump();
                        closed = true;
                        break;
                    }
                }
                if !closed {
                    return Err(ParseError::lex(line, column, "unterminated block comment"));
                }
            }
            '-' if lx.peek2() == Some('>') => {
                lx.bump();
                lx.bump();
                out.push(tok(TokenKind::ArrowRight, "->"));
            }
            '<' if lx.peek2() == Some('-') => {
                lx.bump();
                lx.bump();
                out.push(tok(TokenKind::ArrowLeft, "<-"));
            }
            '→' => {
                lx.bump();
                out.push(tok(TokenKind::ArrowRight, "->"));
            }
            '←' => {
                lx.bump();
                out.push(tok(TokenKind::ArrowLeft, "<-"));
            }
            '≤' => {
                lx.bump();
                out.push(tok(TokenKind::Punct, "<="));
            }
            '≥' => {
                lx.bump();
                out.push(tok(TokenKind::Punct, ">="));
            }
            '<' | '>' => {
                lx.bump();
                if lx.peek() == Some('=') {
                    lx.bump();
                    out.push(tok(TokenKind::Punct, if c == '<' { "<=" } else { ">=" }));
                } else {
                    out.push(tok(TokenKind::Punct, &c.to_string()));
                }
            }
            '(' | ')' | '{' | '}' | '[' | ']' | ',' | ';' | ':' | '.' | '=' | '&' => {
                lx.bump();
                out.push(tok(TokenKind::Punct, &c.to_string()));
            }
            '"' | '“' => {
                lx.bump();
                let close = if c == '"' { '"' } else { '”' };
                let mut s = String::new();
                loop {
                    match lx.bump() {
                        None => return Err(ParseError::lex(line, column, "unterminated string")),
                        Some('\\') => match lx.bump() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some(e @ ('"' | '\\' | '”')) => s.push(e),
                            Some(other) => {
                                return Err(ParseError::lex(
                                    lx.line,
                                    lx.column - 1,
                                    format!("unknown escape \\{other}"),
                                ))
                            }
                            None => return Err(ParseError::lex(line, column, "unterminated string")),
                        },
                        Some(ch) if ch == close => break,
                        Some(ch) => s.push(ch),
                    }
                }
                out.push(tok(TokenKind::StrLit, &s));
            }
            c if c.is_ascii_digit() || (c == '-' && lx.peek2().is_some_and(|d| d.is_ascii_digit())) => {
                let mut s = String::new();
                if c == '-' {
                    s.push('-');
                    lx.bump();
                }
                while let Some(d) = lx.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    lx.bump();
                }
                let n: i64 = s.parse().map_err(|_| {
                    ParseError::lex(line, column, format!("integer literal {s} out of range"))
                })?;
                out.push(tok(TokenKind::IntLit, &n.to_string()));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(d) = lx.peek().filter(|d| d.is_ascii_alphanumeric() || *d == '_') {
                    s.push(d);
                    lx.bump();
                }
                if is_keyword(&s) {
                    out.push(tok(TokenKind::Keyword, &s.to_ascii_uppercase()));
                } else {
                    out.push(tok(TokenKind::Ident, &s));
                }
            }
            other => {
                return Err(ParseError::lex(
                    line,
                    column,
                    format!("illegal character '{other}'"),
                ))
            }
        }
    }
}
