//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! iff     := imp ( "<->" imp )?
//! imp     := disj ( "->" imp )?
//! disj    := conj ( "|" conj )*
//! conj    := unary ( "&" unary )*
//! unary   := "~" unary | "D" unary | "K" "{" agent "}" unary | "[" iff "]" unary | primary
//! primary := "bot" | "top" | atom | "#" rational | "V" "(" iff ")" rel rational | "(" iff ")"
//! rel     := "=" | ">" | "!=" | "<=" | ">=" | "<"
//! ```

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use super::{is_atom_name, AgentId, Formula};
use crate::algebra::TruthValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{col}: constant `{literal}` lies outside [0,1]")]
    ConstantOutOfRange {
        line: usize,
        col: usize,
        literal: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Hash,
    Slash,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Word(w) => return write!(f, "`{w}`"),
            Tok::Hash => "`#`",
            Tok::Slash => "`/`",
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::Bar => "`|`",
            Tok::Arrow => "`->`",
            Tok::DoubleArrow => "`<->`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Eq => "`=`",
            Tok::Ne => "`!=`",
            Tok::Lt => "`<`",
            Tok::Le => "`<=`",
            Tok::Gt => "`>`",
            Tok::Ge => "`>=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start_col = col;
        let two = |n: char| chars.get(i + 1) == Some(&n);
        let (tok, len) = if c.is_ascii_alphanumeric() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (Tok::Word(chars[i..j].iter().collect()), j - i)
        } else {
            match c {
                '#' => (Tok::Hash, 1),
                '/' => (Tok::Slash, 1),
                '~' => (Tok::Tilde, 1),
                '&' => (Tok::Amp, 1),
                '|' => (Tok::Bar, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '[' => (Tok::LBracket, 1),
                ']' => (Tok::RBracket, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                '=' => (Tok::Eq, 1),
                '-' if two('>') => (Tok::Arrow, 2),
                '!' if two('=') => (Tok::Ne, 2),
                '>' if two('=') => (Tok::Ge, 2),
                '>' => (Tok::Gt, 1),
                '<' if two('-') && chars.get(i + 2) == Some(&'>') => (Tok::DoubleArrow, 3),
                '<' if two('=') => (Tok::Le, 2),
                '<' => (Tok::Lt, 1),
                other => {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        expected: vec!["a token".into()],
                        found: format!("character `{other}`"),
                    })
                }
            }
        };
        out.push(Spanned {
            tok,
            line,
            col: start_col,
        });
        i += len;
        col += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

/// Parses a formula, expanding all sugar into core connectives.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.iff()?;
    p.expect(Tok::Eof, &["end of input"])?;
    Ok(f)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError::Syntax {
            line: s.line,
            col: s.col,
            expected: expected.iter().map(|e| e.to_string()).collect(),
            found: s.tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.imp()?;
        if *self.peek() == Tok::DoubleArrow {
            self.bump();
            let right = self.imp()?;
            if *self.peek() == Tok::DoubleArrow {
                // `<->` is non-associative
                return Err(self.error(&["`)`", "`]`", "end of input"]));
            }
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let right = self.conj()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Word(w) if w == "D" => {
                self.bump();
                Ok(Formula::delta(self.unary()?))
            }
            Tok::Word(w) if w == "K" => {
                self.bump();
                self.expect(Tok::LBrace, &["`{`"])?;
                let agent = match self.peek().clone() {
                    Tok::Word(name) => {
                        self.bump();
                        AgentId::new(name).expect("lexer words are valid agent names")
                    }
                    _ => return Err(self.error(&["agent name"])),
                };
                self.expect(Tok::RBrace, &["`}`"])?;
                Ok(Formula::know(agent, self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                let ann = self.iff()?;
                self.expect(Tok::RBracket, &["`]`"])?;
                Ok(Formula::announce(ann, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        const EXPECTED: &[&str] = &[
            "proposition",
            "`bot`",
            "`top`",
            "`#`",
            "`V`",
            "`(`",
            "`~`",
            "`D`",
            "`K`",
            "`[`",
        ];
        match self.peek().clone() {
            Tok::Word(w) if w == "bot" => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Word(w) if w == "top" => {
                self.bump();
                Ok(Formula::top())
            }
            Tok::Word(w) if w == "V" => {
                self.bump();
                self.expect(Tok::LParen, &["`(`"])?;
                let subject = self.iff()?;
                self.expect(Tok::RParen, &["`)`"])?;
                let rel = self.bump();
                if !matches!(
                    rel,
                    Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge
                ) {
                    self.pos -= 1;
                    return Err(self.error(&["`=`", "`>`", "`!=`", "`<=`", "`>=`", "`<`"]));
                }
                let c = self.rational()?;
                let eq = || Formula::val_eq(subject.clone(), c.clone());
                let gt = || Formula::val_gt(subject.clone(), c.clone());
                Ok(match rel {
                    Tok::Eq => eq(),
                    Tok::Gt => gt(),
                    Tok::Ne => Formula::not(eq()),
                    Tok::Le => Formula::not(gt()),
                    Tok::Ge => Formula::or(eq(), gt()),
                    Tok::Lt => Formula::not(Formula::or(eq(), gt())),
                    _ => unreachable!(),
                })
            }
            Tok::Word(w) if is_atom_name(&w) => {
                self.bump();
                Ok(Formula::Atom(w))
            }
            Tok::Hash => {
                self.bump();
                Ok(Formula::constant(self.rational()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen, &["`)`"])?;
                Ok(f)
            }
            _ => Err(self.error(EXPECTED)),
        }
    }

    fn rational(&mut self) -> Result<TruthValue, ParseError> {
        let start = self.pos;
        let digits = |t: &Tok| match t {
            Tok::Word(w) if w.bytes().all(|b| b.is_ascii_digit()) => Some(w.clone()),
            _ => None,
        };
        let num = digits(self.peek()).ok_or_else(|| self.error(&["rational literal"]))?;
        self.bump();
        let mut den = "1".to_string();
        if *self.peek() == Tok::Slash {
            self.bump();
            den = digits(self.peek()).ok_or_else(|| self.error(&["denominator"]))?;
            self.bump();
        }
        let (n, d): (BigUint, BigUint) = (num.parse().unwrap(), den.parse().unwrap());
        let at = &self.toks[start];
        if d.is_zero() || n > d {
            return Err(ParseError::ConstantOutOfRange {
                line: at.line,
                col: at.col,
                literal: format!("{num}/{den}"),
            });
        }
        Ok(TruthValue::from_big(n, d).expect("range checked"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn half() -> TruthValue {
        TruthValue::new(1, 2).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("p -> p & p").unwrap(),
            Formula::implies(p(), Formula::and(p(), p()))
        );
        assert_eq!(parse("~p").unwrap(), Formula::implies(p(), Formula::Bottom));
        assert_eq!(
            parse("V(p)!=1/2").unwrap(),
            Formula::implies(Formula::val_eq(p(), half()), Formula::Bottom)
        );
        assert_eq!(
            parse("[V(p)>1/2] K{a} q").unwrap(),
            Formula::announce(
                Formula::val_gt(p(), half()),
                Formula::know(AgentId::new("a").unwrap(), Formula::atom("q"))
            )
        );
        assert_eq!(parse("#0").unwrap(), Formula::Bottom);
        assert_eq!(parse("#1").unwrap(), Formula::top());
        assert_eq!(parse("#2/4").unwrap(), Formula::Constant(half()));
    }

    #[test]
    fn precedence_and_associativity() {
        let (a, b, c) = (Formula::atom("a"), Formula::atom("b"), Formula::atom("c"));
        assert_eq!(
            parse("a -> b -> c").unwrap(),
            Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone()))
        );
        assert_eq!(
            parse("a & b | c").unwrap(),
            Formula::or(Formula::and(a.clone(), b.clone()), c.clone())
        );
        assert_eq!(
            parse("a | b -> c").unwrap(),
            Formula::implies(Formula::or(a.clone(), b.clone()), c.clone())
        );
        assert_eq!(
            parse("a -> b <-> c").unwrap(),
            Formula::iff(Formula::implies(a.clone(), b.clone()), c.clone())
        );
        assert_eq!(
            parse("~a & b").unwrap(),
            Formula::and(Formula::not(a.clone()), b.clone())
        );
        assert_eq!(
            parse("D a -> b").unwrap(),
            Formula::implies(Formula::delta(a.clone()), b.clone())
        );
        assert_eq!(parse("(a & b) & c").unwrap(), parse("a & b & c").unwrap());
        assert!(parse("a <-> b <-> c").is_err());
    }

    #[test]
    fn value_relations() {
        let eq = Formula::val_eq(p(), half());
        let gt = Formula::val_gt(p(), half());
        assert_eq!(parse("V(p)<=1/2").unwrap(), Formula::not(gt.clone()));
        assert_eq!(
            parse("V(p)>=1/2").unwrap(),
            Formula::or(eq.clone(), gt.clone())
        );
        assert_eq!(
            parse("V(p)<1/2").unwrap(),
            Formula::not(Formula::or(eq, gt))
        );
        assert_eq!(
            parse("V(p -> q)=0").unwrap(),
            Formula::val_eq(parse("p -> q").unwrap(), TruthValue::ZERO)
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse("p &\n  & q") {
            Err(ParseError::Syntax {
                line,
                col,
                expected,
                ..
            }) => {
                assert_eq!((line, col), (2, 3));
                assert!(expected.contains(&"proposition".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse("V(p)=3/2") {
            Err(ParseError::ConstantOutOfRange {
                line: 1,
                col: 6,
                literal,
            }) => {
                assert_eq!(literal, "3/2")
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("#1/0"),
            Err(ParseError::ConstantOutOfRange { .. })
        ));
        assert!(parse("p q").is_err());
        assert!(parse("P").is_err());
        assert!(parse("K{} p").is_err());
        assert!(parse("V(p) 1/2").is_err());
        assert!(parse("p $ q").is_err());
        assert!(parse("").is_err());
    }
}
