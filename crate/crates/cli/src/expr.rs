//! Expression syntax.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ['^' natural]
//! atom   := number | 'pi' | ident '(' expr ')' | '(' expr ')'
//! number := digits ['.' digits]
//! ```
//!
//! `^` binds tighter than unary minus, so `-2^2` is `-(2^2)`. Exponents are
//! natural literals and chain to the right: `2^3^2` is `2^9`. A fraction
//! such as `1/57` is an ordinary division of two literals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Arctan,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "arctan" => Some(Func::Arctan),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Arctan => "arctan",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// A parsed expression. `pos` is the byte offset of the node in the source,
/// used to locate evaluation errors.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// The exact value of a decimal literal.
    Num { value: BigRational, pos: usize },
    Pi { pos: usize },
    Neg { arg: Box<Expr>, pos: usize },
    Bin { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr>, pos: usize },
    Pow { base: Box<Expr>, exp: u64, pos: usize },
    Call { func: Func, arg: Box<Expr>, pos: usize },
}

impl Expr {
    pub fn pos(&self) -> usize {
        match self {
            Expr::Num { pos, .. }
            | Expr::Pi { pos }
            | Expr::Neg { pos, .. }
            | Expr::Bin { pos, .. }
            | Expr::Pow { pos, .. }
            | Expr::Call { pos, .. } => *pos,
        }
    }

    /// Offset of the leftmost token of the node.
    pub fn start(&self) -> usize {
        match self {
            Expr::Bin { lhs, .. } => lhs.start(),
            Expr::Pow { base, .. } => base.start(),
            other => other.pos(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin { op: BinOp::Add | BinOp::Sub, .. } => 1,
            Expr::Bin { .. } => 2,
            Expr::Neg { .. } => 3,
            Expr::Pow { .. } => 4,
            _ => 5,
        }
    }
}

/// Writes a canonical form with minimal parentheses; parsing it back gives
/// the same tree up to positions.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |f: &mut fmt::Formatter<'_>, e: &Expr, tight: bool| {
            if tight {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num { value, .. } => write_decimal(f, value),
            Expr::Pi { .. } => f.write_str("pi"),
            Expr::Neg { arg, .. } => {
                f.write_str("-")?;
                paren(f, arg, arg.precedence() < 3)
            }
            Expr::Bin { op, lhs, rhs, .. } => {
                let p = self.precedence();
                paren(f, lhs, lhs.precedence() < p)?;
                write!(f, "{}", op.symbol())?;
                paren(f, rhs, rhs.precedence() <= p)
            }
            Expr::Pow { base, exp, .. } => {
                paren(f, base, base.precedence() < 5)?;
                write!(f, "^{exp}")
            }
            Expr::Call { func, arg, .. } => write!(f, "{}({arg})", func.name()),
        }
    }
}

/// Literals are terminating decimals, so the denominator is `2^a·5^b`.
fn write_decimal(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    let ten = BigInt::from(10);
    let mut places = 0usize;
    let mut scale = BigInt::one();
    while !(&scale % q.denom()).is_zero() {
        scale *= &ten;
        places += 1;
    }
    let n = q.numer() * (&scale / q.denom());
    let digits = n.to_string();
    if places == 0 {
        return f.write_str(&digits);
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    write!(f, "{int}.{frac}")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected {found} at position {pos}, expected {expected}")]
    Unexpected { found: String, expected: &'static str, pos: usize },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdent { name: String, pos: usize },

    #[error("exponent at position {pos} is too large")]
    ExponentTooLarge { pos: usize },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Unexpected { pos, .. }
            | ParseError::UnknownIdent { pos, .. }
            | ParseError::ExponentTooLarge { pos } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) => write!(f, "number `{s}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let frac = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == frac {
                    return Err(ParseError::Unexpected {
                        found: describe_at(src, i),
                        expected: "digits after `.`",
                        pos: i,
                    });
                }
            }
            out.push((Tok::Num(src[start..i].to_string()), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if b"+-*/^()".contains(&c) {
            out.push((Tok::Sym(c as char), start));
            i += 1;
        } else {
            return Err(ParseError::Unexpected {
                found: describe_at(src, i),
                expected: "an expression",
                pos: i,
            });
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

fn describe_at(src: &str, i: usize) -> String {
    match src[i..].chars().next() {
        Some(c) => format!("`{c}`"),
        None => "end of input".to_string(),
    }
}

fn decimal_value(text: &str) -> BigRational {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let n: BigInt = format!("{int}{frac}").parse().expect("lexer yields digits");
    BigRational::new(n, BigInt::from(10).pow(frac.len() as u32))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &'static str) -> ParseError {
        ParseError::Unexpected { found: self.peek().to_string(), expected, pos: self.pos() }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(match c {
                ')' => "`)`",
                _ => "`(`",
            }))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Tok::Sym(c @ ('+' | '-')) = *self.peek() {
            let pos = self.bump().1;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs), pos };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Tok::Sym(c @ ('*' | '/')) = *self.peek() {
            let pos = self.bump().1;
            let rhs = self.factor()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs), pos };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            let pos = self.bump().1;
            let arg = self.factor()?;
            return Ok(Expr::Neg { arg: Box::new(arg), pos });
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        let pos = self.bump().1;
        let exp = self.exponent()?;
        Ok(Expr::Pow { base: Box::new(base), exp, pos })
    }

    /// A natural literal, possibly followed by `^ natural` chains.
    fn exponent(&mut self) -> Result<u64, ParseError> {
        let (tok, pos) = self.bump();
        let n = match tok {
            Tok::Num(s) if !s.contains('.') => {
                s.parse::<u64>().map_err(|_| ParseError::ExponentTooLarge { pos })?
            }
            other => {
                return Err(ParseError::Unexpected {
                    found: other.to_string(),
                    expected: "a natural exponent",
                    pos,
                })
            }
        };
        if *self.peek() != Tok::Sym('^') {
            return Ok(n);
        }
        self.bump();
        let m = self.exponent()?;
        u32::try_from(m)
            .ok()
            .and_then(|m| n.checked_pow(m))
            .ok_or(ParseError::ExponentTooLarge { pos })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(s) => Ok(Expr::Num { value: decimal_value(&s), pos }),
            Tok::Ident(name) if name == "pi" => Ok(Expr::Pi { pos }),
            Tok::Ident(name) => {
                let func = Func::from_name(&name).ok_or(ParseError::UnknownIdent { name, pos })?;
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Call { func, arg: Box::new(arg), pos })
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            other => Err(ParseError::Unexpected { found: other.to_string(), expected: "an expression", pos }),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(n: i64) -> Expr {
        Expr::Num { value: BigRational::from_integer(n.into()), pos: 0 }
    }

    /// Zeroes positions so trees can be compared structurally.
    fn strip(e: Expr) -> Expr {
        match e {
            Expr::Num { value, .. } => Expr::Num { value, pos: 0 },
            Expr::Pi { .. } => Expr::Pi { pos: 0 },
            Expr::Neg { arg, .. } => Expr::Neg { arg: Box::new(strip(*arg)), pos: 0 },
            Expr::Bin { op, lhs, rhs, .. } => {
                Expr::Bin { op, lhs: Box::new(strip(*lhs)), rhs: Box::new(strip(*rhs)), pos: 0 }
            }
            Expr::Pow { base, exp, .. } => Expr::Pow { base: Box::new(strip(*base)), exp, pos: 0 },
            Expr::Call { func, arg, .. } => Expr::Call { func, arg: Box::new(strip(*arg)), pos: 0 },
        }
    }

    fn p(src: &str) -> Expr {
        strip(parse(src).unwrap())
    }

    fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Bin { op, lhs: Box::new(l), rhs: Box::new(r), pos: 0 }
    }

    fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call { func, arg: Box::new(arg), pos: 0 }
    }

    #[test]
    fn precedence() {
        assert_eq!(p("1+2*3"), bin(BinOp::Add, num(1), bin(BinOp::Mul, num(2), num(3))));
        assert_eq!(p("1-2-3"), bin(BinOp::Sub, bin(BinOp::Sub, num(1), num(2)), num(3)));
        assert_eq!(p("8/4/2"), bin(BinOp::Div, bin(BinOp::Div, num(8), num(4)), num(2)));
        let neg_pow = Expr::Neg {
            arg: Box::new(Expr::Pow { base: Box::new(num(2)), exp: 2, pos: 0 }),
            pos: 0,
        };
        assert_eq!(p("-2^2"), neg_pow);
        assert_eq!(p("2^3^2"), Expr::Pow { base: Box::new(num(2)), exp: 9, pos: 0 });
        assert_eq!(p("2*-3"), bin(BinOp::Mul, num(2), Expr::Neg { arg: Box::new(num(3)), pos: 0 }));
    }

    #[test]
    fn nested_calls() {
        let half = bin(BinOp::Div, num(1), num(2));
        let tower = call(Func::Exp, call(Func::Exp, call(Func::Exp, half)));
        assert_eq!(p("exp(exp(exp(1/2)))"), tower);
        let machin = bin(BinOp::Mul, num(176), call(Func::Arctan, bin(BinOp::Div, num(1), num(57))));
        assert_eq!(p("176*arctan(1/57)"), machin);
    }

    #[test]
    fn decimals_are_exact() {
        let e = parse("0.1").unwrap();
        assert!(matches!(e, Expr::Num { ref value, .. } if *value == BigRational::new(1.into(), 10.into())));
        let e = parse("12.50").unwrap();
        assert!(matches!(e, Expr::Num { ref value, .. } if *value == BigRational::new(25.into(), 2.into())));
    }

    #[test]
    fn positions() {
        let e = parse("1 + sqrt(2)").unwrap();
        let Expr::Bin { pos, rhs, .. } = e else { panic!() };
        assert_eq!((pos, rhs.pos()), (2, 4));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("foo(1)"), Err(ParseError::UnknownIdent { name: "foo".into(), pos: 0 }));
        assert_eq!(parse("1 + e").unwrap_err().pos(), 4);
        assert_eq!(parse("(1+2").unwrap_err().pos(), 4);
        assert_eq!(parse("1 2").unwrap_err().pos(), 2);
        assert_eq!(parse("2^1.5").unwrap_err().pos(), 2);
        assert_eq!(parse("2^x").unwrap_err().pos(), 2);
        assert_eq!(parse("3 $ 4").unwrap_err().pos(), 2);
        assert_eq!(parse("1.").unwrap_err().pos(), 2);
        assert_eq!(parse("").unwrap_err().pos(), 0);
        assert_eq!(parse("exp 1").unwrap_err().pos(), 4);
        assert!(matches!(parse("2^99999999999999999999"), Err(ParseError::ExponentTooLarge { .. })));
        assert!(matches!(parse("2^2^2^2^2^2"), Err(ParseError::ExponentTooLarge { .. })));
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "exp(exp(exp(1/2)))",
            "exp(pi)-pi",
            "1-(2-3)",
            "-(1+2)*3",
            "(-2)^2",
            "-2^2",
            "2/(3*4)",
            "0.125+12.5-0.0001",
            "sqrt(pi)^3",
            "--1",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(e.to_string(), src, "{src}");
            assert_eq!(strip(parse(&e.to_string()).unwrap()), strip(e));
        }
        assert_eq!(parse("( 1 + 2 ) * 3").unwrap().to_string(), "(1+2)*3");
    }
}
