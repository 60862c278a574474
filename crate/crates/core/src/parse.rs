//! Reader for the theory DSL.
//!
//! ```text
//! theory   := "signature" ":" sigdecl* "equations" ":" eqdecl*
//! sigdecl  := IDENT "/" NAT
//! eqdecl   := term "=" term
//! term     := IDENT | IDENT "(" [term ("," term)*] ")"
//! ```
//!
//! `#` starts a line comment. An identifier followed by `(` must be a
//! declared symbol; a bare identifier is always a variable, so constants
//! are written `e()`.

use thiserror::Error;

use crate::term::{name, Equation, Signature, Term, Theory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: symbol `{symbol}` has arity {expected} but is applied to {found} arguments")]
    ArityMismatch {
        line: usize,
        col: usize,
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("{line}:{col}: duplicate symbol `{symbol}`")]
    DuplicateSymbol {
        line: usize,
        col: usize,
        symbol: String,
    },
    #[error("{line}:{col}: `{symbol}` is applied but not declared")]
    UndeclaredSymbol {
        line: usize,
        col: usize,
        symbol: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Colon,
    Slash,
    LParen,
    RParen,
    Comma,
    Eq,
    Semi,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, cl) = (line, col);
        let single = |tok| Token { tok, line: l, col: cl };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
                continue;
            }
            ':' => out.push(single(Tok::Colon)),
            '/' => out.push(single(Tok::Slash)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            ',' => out.push(single(Tok::Comma)),
            '=' => out.push(single(Tok::Eq)),
            ';' => out.push(single(Tok::Semi)),
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(s),
                    line: l,
                    col: cl,
                });
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut n: usize = 0;
                while let Some(&c) = chars.peek() {
                    if let Some(d) = c.to_digit(10) {
                        n = n.checked_mul(10).and_then(|n| n.checked_add(d as usize)).ok_or(
                            ParseError::Syntax {
                                line: l,
                                col: cl,
                                message: "number too large".into(),
                            },
                        )?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Nat(n),
                    line: l,
                    col: cl,
                });
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        chars.next();
        col += 1;
    }
    Ok(out)
}

struct Parser<'s> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'s Signature,
    end: (usize, usize),
}

impl<'s> Parser<'s> {
    fn new(text: &str, sig: &'s Signature) -> Result<Self, ParseError> {
        let toks = lex(text)?;
        let lines = text.split('\n').count();
        let last_col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Ok(Parser {
            toks,
            pos: 0,
            sig,
            end: (lines, last_col),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_tok(&self, ahead: usize) -> Option<&Tok> {
        self.toks.get(self.pos + ahead).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.col))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected {what}, found {:?}", t.tok))),
            None => Err(self.error(format!("expected {what}, found end of input"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let tok = self.peek().cloned().ok_or_else(|| self.error("expected a term"))?;
        let Tok::Ident(id) = tok.tok else {
            return Err(self.error(format!("expected an identifier, found {:?}", tok.tok)));
        };
        self.pos += 1;
        if self.peek_tok(0) != Some(&Tok::LParen) {
            return Ok(Term::Var(name(&id)));
        }
        self.pos += 1;
        let sym = self.sig.lookup(&id).ok_or(ParseError::UndeclaredSymbol {
            line: tok.line,
            col: tok.col,
            symbol: id.clone(),
        })?;
        let mut args = Vec::new();
        if self.peek_tok(0) == Some(&Tok::RParen) {
            self.pos += 1;
        } else {
            loop {
                args.push(self.term()?);
                match self.peek_tok(0) {
                    Some(Tok::Comma) => self.pos += 1,
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        let expected = self.sig.arity(sym);
        if expected != args.len() {
            return Err(ParseError::ArityMismatch {
                line: tok.line,
                col: tok.col,
                symbol: id,
                expected,
                found: args.len(),
            });
        }
        Ok(Term::App(sym, args))
    }

    fn equation(&mut self) -> Result<Equation, ParseError> {
        let lhs = self.term()?;
        self.expect(Tok::Eq, "`=`")?;
        let rhs = self.term()?;
        Ok(Equation::new(lhs, rhs))
    }
}

fn keyword(p: &Parser<'_>, word: &str) -> bool {
    matches!(p.peek_tok(0), Some(Tok::Ident(s)) if s == word) && p.peek_tok(1) == Some(&Tok::Colon)
}

/// Parses a whole theory file.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let empty = Signature::new();
    let mut p = Parser::new(text, &empty)?;
    if !keyword(&p, "signature") {
        return Err(p.error("expected `signature:`"));
    }
    p.pos += 2;

    let mut sig = Signature::new();
    while !keyword(&p, "equations") {
        let tok = p
            .peek()
            .cloned()
            .ok_or_else(|| p.error("expected a symbol declaration or `equations:`"))?;
        let Tok::Ident(id) = tok.tok else {
            return Err(p.error("expected a symbol declaration or `equations:`"));
        };
        p.pos += 1;
        p.expect(Tok::Slash, "`/`")?;
        let arity = match p.peek_tok(0) {
            Some(Tok::Nat(n)) => *n,
            _ => return Err(p.error("expected an arity")),
        };
        p.pos += 1;
        if sig.add(&id, arity).is_err() {
            return Err(ParseError::DuplicateSymbol {
                line: tok.line,
                col: tok.col,
                symbol: id,
            });
        }
    }
    p.pos += 2;

    let toks = std::mem::take(&mut p.toks);
    let pos = p.pos;
    let end = p.end;
    let mut p = Parser {
        toks,
        pos,
        sig: &sig,
        end,
    };
    let mut equations = Vec::new();
    while !p.at_end() {
        equations.push(p.equation()?);
    }
    Ok(Theory::new(sig, equations).expect("parser checks arities"))
}

/// Parses a single term over `sig`.
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.error("trailing input after term"));
    }
    Ok(t)
}

/// Parses `lhs = rhs` over `sig`.
pub fn parse_equation(sig: &Signature, text: &str) -> Result<Equation, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let eq = p.equation()?;
    if !p.at_end() {
        return Err(p.error("trailing input after equation"));
    }
    Ok(eq)
}

/// Parses a `;`-separated list of terms (used for chains on the command line).
pub fn parse_term_list(sig: &Signature, text: &str) -> Result<Vec<Term>, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let mut out = vec![p.term()?];
    while !p.at_end() {
        p.expect(Tok::Semi, "`;`")?;
        out.push(p.term()?);
    }
    Ok(out)
}
