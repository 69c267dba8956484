//! Element literal grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | identifier | '(' expr ')'
//! exponent := '-'? integer | '(' '-'? integer ')'
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
    text: String,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|x| x.1).collect();
            let n: BigInt = text
                .parse()
                .map_err(|_| Error::parse(pos, &text, "bad integer"))?;
            out.push(Token {
                tok: Tok::Int(n),
                pos,
                text,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push(Token {
                tok: Tok::Ident(text.clone()),
                pos,
                text,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Token {
                tok: Tok::Op(c),
                pos,
                text: c.to_string(),
            });
            i += 1;
        } else if c == '\u{2212}' {
            // typographic minus sign
            out.push(Token {
                tok: Tok::Op('-'),
                pos,
                text: c.to_string(),
            });
            i += 1;
        } else {
            return Err(Error::parse(pos, c.to_string(), "unexpected character"));
        }
    }
    Ok(out)
}

/// Target algebra for literal evaluation.
pub trait LitAlgebra {
    type V: Clone;
    fn int(&self, n: &BigInt) -> Self::V;
    fn ident(&self, name: &str, pos: usize) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V, pos: usize) -> Result<Self::V>;
    fn pow(&self, a: &Self::V, e: i64, pos: usize) -> Result<Self::V>;
}

struct Parser<'a, A: LitAlgebra> {
    toks: Vec<Token>,
    i: usize,
    alg: &'a A,
    len: usize,
}

impl<A: LitAlgebra> Parser<'_, A> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.i)
    }

    fn peek_op(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Op(o), .. }) if *o == c)
    }

    fn err_here(&self, msg: &str) -> Error {
        match self.peek() {
            Some(t) => Error::parse(t.pos, &t.text, msg),
            None => Error::parse(self.len, "<end>", msg),
        }
    }

    fn expr(&mut self) -> Result<A::V> {
        let mut acc = self.term()?;
        loop {
            if self.peek_op('+') {
                self.i += 1;
                let t = self.term()?;
                acc = self.alg.add(&acc, &t);
            } else if self.peek_op('-') {
                self.i += 1;
                let t = self.term()?;
                acc = self.alg.add(&acc, &self.alg.neg(&t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<A::V> {
        let mut acc = self.unary()?;
        loop {
            if self.peek_op('*') {
                self.i += 1;
                let t = self.unary()?;
                acc = self.alg.mul(&acc, &t);
            } else if self.peek_op('/') {
                let pos = self.peek().map(|t| t.pos).unwrap_or(0);
                self.i += 1;
                let t = self.unary()?;
                acc = self.alg.div(&acc, &t, pos)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<A::V> {
        if self.peek_op('-') {
            self.i += 1;
            let v = self.unary()?;
            return Ok(self.alg.neg(&v));
        }
        if self.peek_op('+') {
            self.i += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<A::V> {
        let base = self.atom()?;
        if self.peek_op('^') {
            let pos = self.peek().map(|t| t.pos).unwrap_or(0);
            self.i += 1;
            let e = self.exponent()?;
            return self.alg.pow(&base, e, pos);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek_op('(');
        if paren {
            self.i += 1;
        }
        let neg = self.peek_op('-');
        if neg {
            self.i += 1;
        }
        let e = match self.peek() {
            Some(Token {
                tok: Tok::Int(n), ..
            }) => {
                let v: i64 = n
                    .try_into()
                    .map_err(|_| self.err_here("exponent too large"))?;
                self.i += 1;
                v
            }
            _ => return Err(self.err_here("expected integer exponent")),
        };
        if paren {
            if !self.peek_op(')') {
                return Err(self.err_here("expected `)`"));
            }
            self.i += 1;
        }
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<A::V> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err_here("unexpected end of input"))?;
        match tok.tok {
            Tok::Int(n) => {
                self.i += 1;
                Ok(self.alg.int(&n))
            }
            Tok::Ident(name) => {
                self.i += 1;
                self.alg.ident(&name, tok.pos)
            }
            Tok::Op('(') => {
                self.i += 1;
                let v = self.expr()?;
                if !self.peek_op(')') {
                    return Err(self.err_here("expected `)`"));
                }
                self.i += 1;
                Ok(v)
            }
            Tok::Op(_) => Err(Error::parse(tok.pos, tok.text, "unexpected operator")),
        }
    }
}

/// Parses `src` and evaluates it in `alg`.
pub fn eval<A: LitAlgebra>(src: &str, alg: &A) -> Result<A::V> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::parse(0, "<empty>", "empty literal"));
    }
    let mut p = Parser {
        toks,
        i: 0,
        alg,
        len: src.len(),
    };
    let v = p.expr()?;
    if p.i != p.toks.len() {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    struct Q;
    impl LitAlgebra for Q {
        type V = BigRational;
        fn int(&self, n: &BigInt) -> BigRational {
            BigRational::from_integer(n.clone())
        }
        fn ident(&self, name: &str, pos: usize) -> Result<BigRational> {
            Err(Error::parse(pos, name, "no variables"))
        }
        fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
            a + b
        }
        fn neg(&self, a: &BigRational) -> BigRational {
            -a
        }
        fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
            a * b
        }
        fn div(&self, a: &BigRational, b: &BigRational, pos: usize) -> Result<BigRational> {
            if b.is_zero() {
                return Err(Error::parse(pos, "/", "division by zero"));
            }
            Ok(a / b)
        }
        fn pow(&self, a: &BigRational, e: i64, _pos: usize) -> Result<BigRational> {
            let mut r = BigRational::one();
            for _ in 0..e.unsigned_abs() {
                r *= a;
            }
            Ok(if e < 0 { r.recip() } else { r })
        }
    }

    #[test]
    fn arithmetic_and_precedence() {
        let v = eval("-3*2^2 + 1/2", &Q).unwrap();
        assert_eq!(v, BigRational::new((-23).into(), 2.into()));
        assert_eq!(
            eval("2^(-1)", &Q).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            eval("-(1-3)", &Q).unwrap(),
            BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn errors_carry_position() {
        match eval("1 + x", &Q) {
            Err(Error::Parse { pos, token, .. }) => {
                assert_eq!(pos, 4);
                assert_eq!(token, "x");
            }
            other => panic!("{other:?}"),
        }
        match eval("2 +", &Q) {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "<end>"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(eval("1/0", &Q), Err(Error::Parse { .. })));
        assert!(matches!(eval("3 $", &Q), Err(Error::Parse { pos: 2, .. })));
    }
}
