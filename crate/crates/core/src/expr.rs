//! Parser for the expression grammar over `q` and `x`, evaluating directly
//! into Q(q)(x). The canonical printers in `poly`/`frac` emit the same
//! grammar, so print -> parse round-trips.

use thiserror::Error;

use crate::cyclotomic::{q_field, x_field, RatFun};
use crate::field::{FieldCtx, Prec};

#[derive(Error, Clone, Debug, PartialEq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero in subexpression ending at position {pos}")]
    DivisionByZero { pos: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Q,
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((start, Tok::Int(text[start..i].to_string())));
                continue;
            }
            'q' => Tok::Q,
            'x' => Tok::X,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        };
        toks.push((i, tok));
        i += 1;
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: text.len(),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
}

struct Parser {
    lex: Lexer,
    xf: crate::cyclotomic::XField,
}

impl Parser {
    fn expr(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.lex.peek() {
                Some(Tok::Plus) => {
                    self.lex.bump();
                    let rhs = self.term()?;
                    acc = self.xf.add(&acc, &rhs);
                }
                Some(Tok::Minus) => {
                    self.lex.bump();
                    let rhs = self.term()?;
                    acc = self.xf.sub(&acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.lex.peek() {
                Some(Tok::Star) => {
                    self.lex.bump();
                    let rhs = self.unary()?;
                    acc = self.xf.mul(&acc, &rhs);
                }
                Some(Tok::Slash) => {
                    self.lex.bump();
                    let rhs = self.unary()?;
                    let pos = self.lex.here();
                    let inv = self
                        .xf
                        .inv(&rhs)
                        .ok_or(ParseError::DivisionByZero { pos })?;
                    acc = self.xf.mul(&acc, &inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun, ParseError> {
        if let Some(Tok::Minus) = self.lex.peek() {
            self.lex.bump();
            let inner = self.unary()?;
            return Ok(self.xf.neg(&inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFun, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.lex.peek() {
            self.lex.bump();
            let pos = self.lex.here();
            match self.lex.bump() {
                Some(Tok::Int(digits)) => {
                    let e: i64 = digits.parse().map_err(|_| ParseError::Syntax {
                        pos,
                        msg: "exponent too large".to_string(),
                    })?;
                    // exponents are nonnegative, so inversion cannot fail on
                    // nonzero bases; 0^0 = 1 by the empty product
                    return self.xf.pow(&base, e).ok_or(ParseError::Syntax {
                        pos,
                        msg: "cannot raise zero to this power".to_string(),
                    });
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: "expected a nonnegative integer exponent".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFun, ParseError> {
        let pos = self.lex.here();
        match self.lex.bump() {
            Some(Tok::Int(digits)) => {
                let mut acc = self.xf.zero();
                let ten = self.xf.from_int(10);
                for d in digits.bytes() {
                    let digit = self.xf.from_int((d - b'0') as i64);
                    acc = self.xf.add(&self.xf.mul(&acc, &ten), &digit);
                }
                Ok(acc)
            }
            Some(Tok::Q) => {
                let q = q_field().var_elem();
                Ok(self.xf.constant(q))
            }
            Some(Tok::X) => Ok(self.xf.var_elem()),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let pos = self.lex.here();
                match self.lex.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::Syntax {
                        pos,
                        msg: "expected ')'".to_string(),
                    }),
                }
            }
            other => Err(ParseError::Syntax {
                pos,
                msg: match other {
                    Some(t) => format!("unexpected token {t:?}"),
                    None => "unexpected end of input".to_string(),
                },
            }),
        }
    }
}

/// Parse an expression in `q` and `x` into a normalized element of Q(q)(x).
pub fn parse_ratfun(text: &str) -> Result<RatFun, ParseError> {
    let lex = lex(text)?;
    let mut p = Parser {
        lex,
        xf: x_field(),
    };
    let value = p.expr()?;
    if p.lex.peek().is_some() {
        return Err(ParseError::Syntax {
            pos: p.lex.here(),
            msg: "trailing input".to_string(),
        });
    }
    Ok(value)
}

/// Canonical printing in the same grammar; `parse_ratfun(print_ratfun(f))`
/// returns `f`.
pub fn print_ratfun(f: &RatFun) -> String {
    x_field().print(f, Prec::Add)
}

/// sigma_q^t: substitute x -> q^t * x.
pub fn sigma_q(f: &RatFun, t: i64) -> RatFun {
    let qf = q_field();
    let qt = qf.pow(&qf.var_elem(), t).unwrap();
    x_field().scale_var(f, &qt)
}

/// The logarithmic-scale derivation x * d/dx.
pub fn dlog_derive(f: &RatFun) -> RatFun {
    let xf = x_field();
    let x = xf.var_elem();
    xf.mul(&x, &xf.derivative(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;

    #[test]
    fn literal_readback() {
        let f = parse_ratfun("q*x - 1").unwrap();
        assert_eq!(print_ratfun(&f), "q*x - 1");
    }

    #[test]
    fn gcd_cancellation() {
        assert_eq!(
            parse_ratfun("(x^2-1)/(x-1)").unwrap(),
            parse_ratfun("x+1").unwrap()
        );
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert!(matches!(
            parse_ratfun("1/(q-q)"),
            Err(ParseError::DivisionByZero { .. })
        ));
    }

    #[test]
    fn syntax_error_is_positioned() {
        match parse_ratfun("x + $") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_ratfun("1 + 2*x^2").unwrap(),
            parse_ratfun("(2*(x^2)) + 1").unwrap()
        );
        // unary minus binds below ^
        assert_eq!(parse_ratfun("-x^2").unwrap(), parse_ratfun("0-x^2").unwrap());
    }

    #[test]
    fn sigma_q_substitutes() {
        let f = parse_ratfun("x/(x-1)").unwrap();
        assert_eq!(sigma_q(&f, 1), parse_ratfun("q*x/(q*x-1)").unwrap());
        assert_eq!(sigma_q(&f, 0), f);
        assert_eq!(
            sigma_q(&parse_ratfun("x^2").unwrap(), -1),
            parse_ratfun("x^2/q^2").unwrap()
        );
    }

    #[test]
    fn dlog_derive_examples() {
        assert_eq!(
            dlog_derive(&parse_ratfun("x^2").unwrap()),
            parse_ratfun("2*x^2").unwrap()
        );
        let c = parse_ratfun("(q^2+1)/(q-3)").unwrap();
        assert!(x_field().is_zero(&dlog_derive(&c)));
        assert_eq!(
            dlog_derive(&parse_ratfun("1/x").unwrap()),
            parse_ratfun("-1/x").unwrap()
        );
    }

    #[test]
    fn sigma_commutes_with_dlog_on_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let xf = x_field();
        for _ in 0..40 {
            let f = crate::testutil::random_ratfun(&mut rng, 3, 5);
            let lhs = sigma_q(&dlog_derive(&f), 1);
            let rhs = dlog_derive(&sigma_q(&f, 1));
            assert_eq!(lhs, rhs, "sigma/dlog commutation failed");
            let _ = rng.gen::<u8>();
            let _ = &xf;
        }
    }

    #[test]
    fn parse_print_roundtrip_on_samples() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..60 {
            let f = crate::testutil::random_ratfun(&mut rng, 3, 5);
            let printed = print_ratfun(&f);
            let back = parse_ratfun(&printed)
                .unwrap_or_else(|e| panic!("reparse of {printed:?} failed: {e}"));
            assert_eq!(back, f, "round trip failed for {printed}");
        }
    }

    #[test]
    fn division_and_normalization_idempotent() {
        use rand::SeedableRng;
        let xf = x_field();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for _ in 0..40 {
            let f = crate::testutil::random_ratfun(&mut rng, 3, 5);
            let g = crate::testutil::random_ratfun(&mut rng, 3, 5);
            if xf.is_zero(&g) {
                continue;
            }
            let prod = xf.mul(&f, &g);
            assert_eq!(xf.mul(&prod, &xf.inv(&g).unwrap()), f);
        }
        let _ = rat_int(0);
    }
}
