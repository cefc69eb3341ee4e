//! Expression front-end: a small LL(1) grammar for elements and generator
//! words.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ('-')? INT)?
//! atom   := INT | 'q' | 's' | 'f0'
//!         | 'z' '[' INT ',' INT ']' | 'zs' '[' INT ',' INT ']'
//!         | '(' expr ')'
//! ```
//!
//! `*` is the noncommutative product (left associative); `/` divides by a
//! scalar subexpression. Letter indices are range-checked against the shape
//! at parse time. Generator words are whitespace-separated tokens `E<k>`,
//! `F<k>`, `K<k>`, `Ki<k>`, with `n` accepted for the distinguished node.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::action::{Action, QGen};
use crate::algebra::{Element, Letter, NormalMonomial, Shape, ZIndex};
use crate::scalar::{Rational, Scalar, ScalarError};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor is not a scalar: {0}")]
    DivisorNotScalar(String),
    #[error("negative power of a non-scalar: {0}")]
    NegativePowerOfNonScalar(String),
}

impl From<ScalarError> for EvalError {
    fn from(e: ScalarError) -> EvalError {
        match e {
            ScalarError::DivisionByZero => EvalError::DivisionByZero,
            other => EvalError::DivisorNotScalar(other.to_string()),
        }
    }
}

/// Parsed expression tree. Letters are validated for the shape; generator
/// applications are attached by the `act` command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Int(BigInt),
    Q,
    S,
    Letter(Letter),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, i64),
    Apply(QGen, Box<ExprAst>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokKind {
    Int(BigInt),
    Ident(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

impl fmt::Display for TokKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokKind::Int(v) => write!(f, "{v}"),
            TokKind::Ident(s) => write!(f, "{s}"),
            TokKind::LBracket => write!(f, "["),
            TokKind::RBracket => write!(f, "]"),
            TokKind::LParen => write!(f, "("),
            TokKind::RParen => write!(f, ")"),
            TokKind::Comma => write!(f, ","),
            TokKind::Plus => write!(f, "+"),
            TokKind::Minus => write!(f, "-"),
            TokKind::Star => write!(f, "*"),
            TokKind::Slash => write!(f, "/"),
            TokKind::Caret => write!(f, "^"),
        }
    }
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        let kind = match c {
            '[' => {
                advance(&mut chars);
                TokKind::LBracket
            }
            ']' => {
                advance(&mut chars);
                TokKind::RBracket
            }
            '(' => {
                advance(&mut chars);
                TokKind::LParen
            }
            ')' => {
                advance(&mut chars);
                TokKind::RParen
            }
            ',' => {
                advance(&mut chars);
                TokKind::Comma
            }
            '+' => {
                advance(&mut chars);
                TokKind::Plus
            }
            '-' => {
                advance(&mut chars);
                TokKind::Minus
            }
            '*' => {
                advance(&mut chars);
                TokKind::Star
            }
            '/' => {
                advance(&mut chars);
                TokKind::Slash
            }
            '^' => {
                advance(&mut chars);
                TokKind::Caret
            }
            d if d.is_ascii_digit() => {
                let mut digits = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    digits.push(advance(&mut chars));
                }
                TokKind::Int(digits.parse().expect("digit run parses as integer"))
            }
            a if a.is_ascii_alphabetic() => {
                let mut ident = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    ident.push(advance(&mut chars));
                }
                TokKind::Ident(ident)
            }
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        toks.push(Tok {
            kind,
            line: tline,
            col: tcol,
        });
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    shape: Shape,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.peek()
            .map(|t| (t.line, t.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn expect(&mut self, kind: &TokKind) -> Result<Tok, ParseError> {
        match self.peek() {
            Some(t) if t.kind == *kind => Ok(self.next().unwrap()),
            Some(t) => Err(ParseError {
                line: t.line,
                col: t.col,
                message: format!("expected '{kind}', found '{}'", t.kind),
            }),
            None => Err(self.error(format!("expected '{kind}', found end of input"))),
        }
    }

    fn expect_small_int(&mut self) -> Result<(u8, Tok), ParseError> {
        match self.next() {
            Some(t) => match &t.kind {
                TokKind::Int(v) => {
                    let small: u8 = v.try_into().map_err(|_| ParseError {
                        line: t.line,
                        col: t.col,
                        message: format!("index {v} is out of range"),
                    })?;
                    Ok((small, t.clone()))
                }
                other => Err(ParseError {
                    line: t.line,
                    col: t.col,
                    message: format!("expected an index, found '{other}'"),
                }),
            },
            None => Err(self.error("expected an index, found end of input")),
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().map(|t| t.kind.clone()) {
                Some(TokKind::Plus) => {
                    self.next();
                    acc = ExprAst::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(TokKind::Minus) => {
                    self.next();
                    acc = ExprAst::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().map(|t| t.kind.clone()) {
                Some(TokKind::Star) => {
                    self.next();
                    acc = ExprAst::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                Some(TokKind::Slash) => {
                    self.next();
                    acc = ExprAst::Div(Box::new(acc), Box::new(self.unary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Minus)) {
            self.next();
            return Ok(ExprAst::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Caret)) {
            self.next();
            let neg = if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Minus)) {
                self.next();
                true
            } else {
                false
            };
            match self.next() {
                Some(Tok {
                    kind: TokKind::Int(v),
                    line,
                    col,
                }) => {
                    let exp: i64 = (&v).try_into().map_err(|_| ParseError {
                        line,
                        col,
                        message: format!("exponent {v} is out of range"),
                    })?;
                    return Ok(ExprAst::Pow(Box::new(base), if neg { -exp } else { exp }));
                }
                Some(t) => {
                    return Err(ParseError {
                        line: t.line,
                        col: t.col,
                        message: format!("expected an integer exponent, found '{}'", t.kind),
                    })
                }
                None => return Err(self.error("expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn letter(&mut self, starred: bool, at: &Tok) -> Result<ExprAst, ParseError> {
        self.expect(&TokKind::LBracket)?;
        let (a, ta) = self.expect_small_int()?;
        self.expect(&TokKind::Comma)?;
        let (alpha, _) = self.expect_small_int()?;
        self.expect(&TokKind::RBracket)?;
        let idx = ZIndex::new(a, alpha);
        if !self.shape.contains(idx) {
            return Err(ParseError {
                line: ta.line,
                col: ta.col,
                message: format!(
                    "index ({a},{alpha}) out of range for shape m={}, n={}",
                    self.shape.m(),
                    self.shape.n()
                ),
            });
        }
        let _ = at;
        Ok(ExprAst::Letter(if starred {
            Letter::ZStar(idx)
        } else {
            Letter::Z(idx)
        }))
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        match self.next() {
            Some(t) => match &t.kind {
                TokKind::Int(v) => Ok(ExprAst::Int(v.clone())),
                TokKind::LParen => {
                    let inner = self.expr()?;
                    self.expect(&TokKind::RParen)?;
                    Ok(inner)
                }
                TokKind::Ident(name) => match name.as_str() {
                    "q" => Ok(ExprAst::Q),
                    "s" => Ok(ExprAst::S),
                    "f0" => Ok(ExprAst::Letter(Letter::F0)),
                    "z" => self.letter(false, &t),
                    "zs" => self.letter(true, &t),
                    other => Err(ParseError {
                        line: t.line,
                        col: t.col,
                        message: format!("unknown symbol '{other}'"),
                    }),
                },
                other => Err(ParseError {
                    line: t.line,
                    col: t.col,
                    message: format!("expected a value, found '{other}'"),
                }),
            },
            None => Err(self.error("expected a value, found end of input")),
        }
    }
}

fn end_position(input: &str) -> (usize, usize) {
    let line = input.lines().count().max(1);
    let col = input.lines().last().map_or(1, |l| l.chars().count() + 1);
    (line, col)
}

/// Parse an element expression, range-checking letter indices.
pub fn parse_element(input: &str, shape: Shape) -> Result<ExprAst, ParseError> {
    let toks = lex(input)?;
    let (end_line, end_col) = end_position(input);
    let mut p = Parser {
        toks,
        pos: 0,
        shape,
        end_line,
        end_col,
    };
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    let ast = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ParseError {
            line: t.line,
            col: t.col,
            message: format!("unexpected trailing '{}'", t.kind),
        });
    }
    Ok(ast)
}

/// Parse a whitespace-separated generator word like `E1 F2 Ki1`, applied
/// left to right. `n` names the distinguished node, e.g. `En`.
pub fn parse_generator_word(input: &str, shape: Shape) -> Result<Vec<QGen>, ParseError> {
    let toks = lex(input)?;
    let mut gens = Vec::new();
    for t in toks {
        let TokKind::Ident(name) = &t.kind else {
            return Err(ParseError {
                line: t.line,
                col: t.col,
                message: format!("expected a generator token, found '{}'", t.kind),
            });
        };
        let (kind, rest) = if let Some(rest) = name.strip_prefix("Ki") {
            ("Ki", rest)
        } else if let Some(rest) = name.strip_prefix('K') {
            ("K", rest)
        } else if let Some(rest) = name.strip_prefix('E') {
            ("E", rest)
        } else if let Some(rest) = name.strip_prefix('F') {
            ("F", rest)
        } else {
            return Err(ParseError {
                line: t.line,
                col: t.col,
                message: format!("unknown generator '{name}'"),
            });
        };
        let k: u8 = if rest == "n" {
            shape.n()
        } else {
            rest.parse().map_err(|_| ParseError {
                line: t.line,
                col: t.col,
                message: format!("bad generator index in '{name}'"),
            })?
        };
        if k == 0 || k >= shape.size() {
            return Err(ParseError {
                line: t.line,
                col: t.col,
                message: format!(
                    "generator index {k} out of range 1..{} for shape m={}, n={}",
                    shape.size() - 1,
                    shape.m(),
                    shape.n()
                ),
            });
        }
        gens.push(match kind {
            "E" => QGen::e(k),
            "F" => QGen::f(k),
            "K" => QGen::k_plus(k),
            _ => QGen::k_minus(k),
        });
    }
    Ok(gens)
}

/// Parse a rational like `1/2` or `3`.
pub fn parse_rational(input: &str) -> Result<Rational, ParseError> {
    input.trim().parse::<Rational>().map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: format!("bad rational '{input}': {e}"),
    })
}

/// The scalar value of an element concentrated on the empty monomial.
pub fn as_scalar(e: &Element) -> Option<Scalar> {
    if e.is_zero() {
        return Some(Scalar::zero());
    }
    if e.num_terms() == 1 {
        let (mono, c) = e.terms().next().unwrap();
        if mono.is_one() {
            return Some(c.clone());
        }
    }
    None
}

/// Evaluate a parsed expression to a normal-ordered element.
pub fn eval(ast: &ExprAst, action: &Action) -> Result<Element, EvalError> {
    let alg = action.algebra();
    Ok(match ast {
        ExprAst::Int(v) => {
            Element::scalar(Scalar::from_rational(Rational::from_integer(v.clone())))
        }
        ExprAst::Q => Element::scalar(Scalar::q()),
        ExprAst::S => Element::scalar(Scalar::s_pow(1)),
        ExprAst::Letter(Letter::F0) => Element::from_monomial(NormalMonomial::f0(), Scalar::one()),
        ExprAst::Letter(Letter::Z(i)) => {
            Element::from_monomial(NormalMonomial::single_z(*i), Scalar::one())
        }
        ExprAst::Letter(Letter::ZStar(i)) => {
            Element::from_monomial(NormalMonomial::single_zstar(*i), Scalar::one())
        }
        ExprAst::Neg(x) => eval(x, action)?.scale(&-&Scalar::one()),
        ExprAst::Add(x, y) => eval(x, action)?.add(&eval(y, action)?),
        ExprAst::Sub(x, y) => eval(x, action)?.sub(&eval(y, action)?),
        ExprAst::Mul(x, y) => alg.multiply(&eval(x, action)?, &eval(y, action)?),
        ExprAst::Div(x, y) => {
            let num = eval(x, action)?;
            let den = eval(y, action)?;
            let c = as_scalar(&den).ok_or_else(|| EvalError::DivisorNotScalar(den.to_string()))?;
            let inv = Scalar::one().checked_div(&c)?;
            num.scale(&inv)
        }
        ExprAst::Pow(x, k) => {
            let base = eval(x, action)?;
            if let Some(c) = as_scalar(&base) {
                Element::scalar(c.pow_checked(*k)?)
            } else if *k >= 0 {
                let mut acc = Element::one();
                for _ in 0..*k {
                    acc = alg.multiply(&acc, &base);
                }
                acc
            } else {
                return Err(EvalError::NegativePowerOfNonScalar(base.to_string()));
            }
        }
        ExprAst::Apply(g, x) => action.act(*g, &eval(x, action)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;

    fn setup(m: u8, n: u8) -> Action {
        Action::standard(&Algebra::new(Shape::new(m, n).unwrap()))
    }

    fn eval_str(input: &str, action: &Action) -> Element {
        let ast = parse_element(input, action.shape()).unwrap();
        eval(&ast, action).unwrap()
    }

    #[test]
    fn parses_products_of_letters() {
        let action = setup(1, 1);
        let e = eval_str("z[1,1] * f0 * zs[1,1]", &action);
        assert_eq!(e.num_terms(), 1);
        let (mono, c) = e.terms().next().unwrap();
        assert_eq!(mono.bidegree(), (1, 1, true));
        assert!(c.is_one());
    }

    #[test]
    fn parses_scalar_weighted_sums() {
        let action = setup(1, 2);
        let e = eval_str("(1 - q^2) * f0 + z[2,1]*f0", &action);
        assert_eq!(e.num_terms(), 2);
        assert_eq!(
            e.coeff(&NormalMonomial::f0()),
            &Scalar::one() - &Scalar::q_pow(2)
        );
    }

    #[test]
    fn index_range_is_checked() {
        let shape = Shape::new(1, 2).unwrap();
        let err = parse_element("z[3,1]", shape).unwrap_err();
        assert!(err.message.contains("out of range"), "{err}");
        assert_eq!((err.line, err.col), (1, 3));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let shape = Shape::new(1, 1).unwrap();
        let err = parse_element("z[1,1] +", shape).unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 9);
        let err = parse_element("q^x", shape).unwrap_err();
        assert!(err.message.contains("exponent"));
        let err = parse_element("w[1,1]", shape).unwrap_err();
        assert!(err.message.contains("unknown symbol"));
    }

    #[test]
    fn division_by_scalar_only() {
        let action = setup(1, 1);
        let ast = parse_element("f0 / z[1,1]", action.shape()).unwrap();
        assert!(matches!(
            eval(&ast, &action),
            Err(EvalError::DivisorNotScalar(_))
        ));
        let ast = parse_element("q / 0", action.shape()).unwrap();
        assert!(matches!(
            eval(&ast, &action),
            Err(EvalError::DivisionByZero)
        ));
        let e = eval_str("s*s / q", &action);
        assert_eq!(as_scalar(&e).unwrap(), Scalar::one());
    }

    #[test]
    fn q_caret_negative() {
        let action = setup(1, 1);
        let e = eval_str("q^-2 - 1", &action);
        assert_eq!(as_scalar(&e).unwrap(), &Scalar::q_pow(-2) - &Scalar::one());
    }

    #[test]
    fn nonneg_powers_of_elements() {
        let action = setup(1, 1);
        let e = eval_str("z[1,1]^2", &action);
        let alg = action.algebra();
        let z = Element::from_monomial(NormalMonomial::single_z(ZIndex::new(1, 1)), Scalar::one());
        assert_eq!(e, alg.multiply(&z, &z));
    }

    #[test]
    fn generator_words() {
        let shape = Shape::new(1, 2).unwrap();
        assert_eq!(
            parse_generator_word("E1 Fn Ki2 K1", shape).unwrap(),
            vec![QGen::e(1), QGen::f(2), QGen::k_minus(2), QGen::k_plus(1)]
        );
        assert!(parse_generator_word("E3", shape).is_err());
        assert!(parse_generator_word("G1", shape).is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let action = setup(2, 2);
        let alg = action.algebra();
        let samples = [
            "zs[2,2]*z[1,1]*z[2,1]",
            "(q - q^-1) * z[1,2]*f0 + 3/2 * f0*zs[2,1]",
            "s * z[1,1] - q^2 * z[2,2]*zs[1,2]",
            "0",
            "(1 - q^2) * f0",
            "-q^2/(1 - q^2) * z[1,1]*f0*zs[2,1] + s/(1 - q^2) * f0",
        ];
        for src in samples {
            let e1 = eval_str(src, &action);
            let printed = e1.to_string();
            let e2 = eval_str(&printed, &action);
            assert_eq!(e1, e2, "round trip through '{printed}'");
        }
        let _ = alg;
    }
}
