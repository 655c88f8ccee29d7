//! Tokenizer and Pratt parser for curve expressions.
//!
//! Precedence, loosest first: `+ -`, `* /`, unary minus, `^`. `^` is
//! right-associative and its right operand may start with a unary minus,
//! so `-u^2` is `-(u^2)` and `2^-u` is `2^(-u)`. Juxtaposition is not
//! multiplication.

use std::fmt;

use super::ast::{BinOp, CurveAst, Expr, Func};

/// Variable names a curve may be written in. One expression uses at most one.
pub const VARIABLES: [&str; 5] = ["u", "v", "w", "t", "x"];

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    /// A character that cannot start any token.
    Lexical(char),
    /// A malformed numeric literal.
    BadNumber(String),
    /// A token the grammar does not allow here. `found` is a description.
    Unexpected { found: String, expected: &'static str },
    UnknownIdentifier(String),
    /// Two different variable names in one expression.
    MixedVariables(String, String),
    Empty,
}

/// Parse failure with the 0-based character offset where it was detected.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Lexical(c) => {
                write!(f, "lexical error at position {}: unexpected character {c:?}", self.pos)
            }
            ParseErrorKind::BadNumber(s) => {
                write!(f, "lexical error at position {}: malformed number {s:?}", self.pos)
            }
            ParseErrorKind::Unexpected { found, expected } => write!(
                f,
                "syntax error at position {}: found {found}, expected {expected}",
                self.pos
            ),
            ParseErrorKind::UnknownIdentifier(name) => {
                write!(f, "unknown identifier {name:?} at position {}", self.pos)
            }
            ParseErrorKind::MixedVariables(a, b) => write!(
                f,
                "expression mixes variables {a:?} and {b:?} (position {})",
                self.pos
            ),
            ParseErrorKind::Empty => write!(f, "syntax error at position 0: empty expression"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, start));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                } else {
                    let text: String = chars[start..j.min(chars.len())].iter().collect();
                    return Err(ParseError {
                        kind: ParseErrorKind::BadNumber(text),
                        pos: start,
                    });
                }
            }
            let text: String = chars[start..i].iter().collect();
            match text.parse::<f64>() {
                Ok(x) => out.push((Tok::Num(x), start)),
                Err(_) => {
                    return Err(ParseError {
                        kind: ParseErrorKind::BadNumber(text),
                        pos: start,
                    })
                }
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::Lexical(c),
                pos: start,
            });
        }
    }
    out.push((Tok::Eof, chars.len()));
    Ok(out)
}

const BP_ADD: (u8, u8) = (10, 11);
const BP_MUL: (u8, u8) = (20, 21);
const BP_NEG: u8 = 30;
const BP_POW: (u8, u8) = (41, 40);

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    var: Option<(String, usize)>,
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let (tok, pos) = self.peek();
        ParseError {
            kind: ParseErrorKind::Unexpected {
                found: tok.describe(),
                expected,
            },
            pos: *pos,
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.peek().0 == Tok::RParen {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected("')'"))
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.prefix()?;
        loop {
            let (op, (lbp, rbp)) = match self.peek().0 {
                Tok::Plus => (BinOp::Add, BP_ADD),
                Tok::Minus => (BinOp::Sub, BP_ADD),
                Tok::Star => (BinOp::Mul, BP_MUL),
                Tok::Slash => (BinOp::Div, BP_MUL),
                Tok::Caret => (BinOp::Pow, BP_POW),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.next();
            let rhs = self.expr(rbp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.peek().clone();
        match tok {
            Tok::Num(x) => {
                self.next();
                Ok(Expr::Num(x))
            }
            Tok::Minus => {
                self.next();
                Ok(Expr::Neg(Box::new(self.expr(BP_NEG)?)))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr(0)?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.next();
                if self.peek().0 == Tok::LParen {
                    let f = Func::from_name(&name).ok_or(ParseError {
                        kind: ParseErrorKind::UnknownIdentifier(name.clone()),
                        pos,
                    })?;
                    self.next();
                    let arg = self.expr(0)?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                if name == "pi" {
                    return Ok(Expr::Pi);
                }
                if VARIABLES.contains(&name.as_str()) {
                    match &self.var {
                        None => self.var = Some((name, pos)),
                        Some((prev, _)) if *prev != name => {
                            return Err(ParseError {
                                kind: ParseErrorKind::MixedVariables(prev.clone(), name),
                                pos,
                            })
                        }
                        Some(_) => {}
                    }
                    return Ok(Expr::Var);
                }
                Err(ParseError {
                    kind: ParseErrorKind::UnknownIdentifier(name),
                    pos,
                })
            }
            _ => Err(self.unexpected("an operand")),
        }
    }
}

/// Parses a one-variable curve expression. An expression without any
/// variable is accepted and treated as a function of `u`.
pub fn parse(src: &str) -> Result<CurveAst, ParseError> {
    let toks = tokenize(src)?;
    if toks.len() == 1 {
        return Err(ParseError {
            kind: ParseErrorKind::Empty,
            pos: 0,
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        var: None,
    };
    let root = p.expr(0)?;
    if p.peek().0 != Tok::Eof {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(CurveAst {
        root,
        var: p.var.map(|(v, _)| v).unwrap_or_else(|| "u".to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sx(s: &str) -> String {
        parse(s).unwrap().sexpr()
    }

    #[test]
    fn precedence() {
        assert_eq!(sx("-u^2"), "(neg (^ u 2))");
        assert_eq!(sx("2^-u"), "(^ 2 (neg u))");
        assert_eq!(sx("a^b^c".replace('a', "u").replace('b', "2").replace('c', "3").as_str()), "(^ u (^ 2 3))");
        assert_eq!(sx("1-u-2"), "(- (- 1 u) 2)");
        assert_eq!(sx("u/2/3"), "(/ (/ u 2) 3)");
        assert_eq!(sx("1+2*u"), "(+ 1 (× 2 u))");
        assert_eq!(sx("-u*2"), "(× (neg u) 2)");
        assert_eq!(sx("2*-u"), "(× 2 (neg u))");
    }

    #[test]
    fn spec_style_examples() {
        let ast = parse("-(1/2)*lnabs(cos(2*u))").unwrap();
        assert_eq!(ast.var, "u");
        assert_eq!(ast.sexpr(), "(× (neg (/ 1 2)) (lnabs (cos (× 2 u))))");
        let v = ast.eval(0.3).unwrap();
        assert!((v - (-0.5 * (0.6f64).cos().abs().ln())).abs() < 1e-15);
    }

    #[test]
    fn numbers() {
        assert_eq!(sx("1.5e-3"), "0.0015");
        assert_eq!(sx(".5"), "0.5");
        assert_eq!(sx("2E+2"), "200");
        assert!(matches!(parse("1e").unwrap_err().kind, ParseErrorKind::BadNumber(_)));
        assert!(matches!(parse("1.2.3").unwrap_err().kind, ParseErrorKind::BadNumber(_)));
    }

    #[test]
    fn error_positions() {
        let e = parse("sqrt(").unwrap_err();
        assert_eq!(e.pos, 5);
        assert!(e.to_string().starts_with("syntax error at position 5"));

        let e = parse("2u").unwrap_err();
        assert_eq!(e.pos, 1);

        let e = parse("u + y").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("y".into()));
        assert_eq!(e.pos, 4);

        let e = parse("foo(u)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("foo".into()));

        let e = parse("u + v").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MixedVariables("u".into(), "v".into()));
        assert_eq!(e.pos, 4);

        let e = parse("u $ 1").unwrap_err();
        assert_eq!((e.kind, e.pos), (ParseErrorKind::Lexical('$'), 2));

        assert_eq!(parse("   ").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse("(u").unwrap_err().pos, 2);
        assert_eq!(parse("u)").unwrap_err().pos, 1);
        assert_eq!(parse("*u").unwrap_err().pos, 0);
    }

    #[test]
    fn variable_name_kept() {
        let ast = parse("exp(w)*w").unwrap();
        assert_eq!(ast.var, "w");
        assert_eq!(ast.to_string(), "exp(w)*w");
        assert_eq!(parse("pi/2").unwrap().var, "u");
    }

    #[test]
    fn printing_minimal_parens() {
        for (src, want) in [
            ("(u+1)*(u-1)", "(u+1)*(u-1)"),
            ("u-(u-1)", "u-(u-1)"),
            ("(u-1)-u", "u-1-u"),
            ("(-u)^2", "(-u)^2"),
            ("-(u^2)", "-u^2"),
            ("(u^2)^3", "(u^2)^3"),
            ("u^(2^3)", "u^2^3"),
            ("2^(-u)", "2^-u"),
            ("u/(2*u)", "u/(2*u)"),
            ("-(u*2)", "-(u*2)"),
        ] {
            let ast = parse(src).unwrap();
            let printed = ast.to_string();
            assert_eq!(printed, want, "printing {src}");
            assert_eq!(parse(&printed).unwrap(), ast, "reparse {src}");
        }
    }
}
