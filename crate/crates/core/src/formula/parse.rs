//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := iff
//! iff     := impl ("<->" impl)*
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | modal | "(" formula ")" | "true" | "false" | ident
//! ```
//!
//! Sugar is expanded while parsing: `<>f` becomes `~[]~f`, `<n>f` becomes
//! `#{1*(f) > n}` and `[n]f` becomes `~<n>~f`.

use num_bigint::BigInt;

use super::{CountAtom, CountRel, Formula, LikelihoodAtom, ModalOp};
use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::logic::{Family, Logic};

pub fn parse(text: &str, logic: &Logic) -> Result<Formula> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        logic,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    logic: &'a Logic,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<u8> {
        self.src.get(self.pos + offset).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{tok}`")))
        }
    }

    fn require(&self, family: Family, op: &str) -> Result<()> {
        if self.logic.family() == family {
            Ok(())
        } else {
            Err(Error::LogicMismatch {
                op: op.to_string(),
                logic: self.logic.to_string(),
            })
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while self.eat("<->") {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat("|") {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat("&") {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        match c {
            b'~' => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            b'[' if self.peek_at(1) == Some(b']') => {
                self.require(Family::Kripke, "[]")?;
                self.pos += 2;
                Ok(Formula::boxed(self.unary()?))
            }
            b'<' if self.peek_at(1) == Some(b'>') => {
                self.require(Family::Kripke, "<>")?;
                self.pos += 2;
                let arg = self.unary()?;
                Ok(Formula::not(Formula::boxed(Formula::not(arg))))
            }
            b'<' | b'[' => {
                let close = if c == b'<' { ">" } else { "]" };
                let spelled = if c == b'<' { "<n>" } else { "[n]" };
                self.require(Family::Counting, spelled)?;
                self.pos += 1;
                let n = self.nat()?;
                self.expect(close)?;
                let arg = self.unary()?;
                let bound = i64::try_from(n).map_err(|_| self.error("grade too large"))?;
                let diamond = |arg| {
                    Formula::modal(
                        ModalOp::Count(CountAtom {
                            coeffs: vec![1],
                            rel: CountRel::Gt,
                            bound,
                        }),
                        vec![arg],
                    )
                };
                Ok(if c == b'<' {
                    diamond(arg)
                } else {
                    Formula::not(diamond(Formula::not(arg)))
                })
            }
            b'#' => {
                self.require(Family::Counting, "#{...}")?;
                self.pos += 1;
                if self.peek_at(0) != Some(b'{') {
                    return Err(self.error("expected `{` after `#`"));
                }
                self.pos += 1;
                self.count_atom()
            }
            b'L' if self.peek_at(1) == Some(b'{') => {
                self.require(Family::Probability, "L{...}")?;
                self.pos += 2;
                self.likelihood_atom()
            }
            b'E' | b'C' => {
                let op = if c == b'E' {
                    ModalOp::Effect
                } else {
                    ModalOp::Capable
                };
                self.require(Family::Agency, op.spelling())?;
                self.pos += 1;
                Ok(Formula::modal(op, vec![self.unary()?]))
            }
            b'(' => {
                self.pos += 1;
                let inner = self.formula()?;
                if self.eat("=>") {
                    self.require(Family::Conditional, "=>")?;
                    let consequent = self.formula()?;
                    self.expect(")")?;
                    return Ok(Formula::modal(ModalOp::Cond, vec![inner, consequent]));
                }
                self.expect(")")?;
                Ok(inner)
            }
            b'a'..=b'z' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && matches!(self.src[self.pos], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(match word {
                    "true" => Formula::True,
                    "false" => Formula::False,
                    _ => Formula::var(word),
                })
            }
            _ => Err(self.error(format!("unexpected character `{}`", c as char))),
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn nat(&mut self) -> Result<u64> {
        let d = self.digits()?;
        d.parse().map_err(|_| self.error("number out of range"))
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let d = self.digits()?;
        let v: i64 = d.parse().map_err(|_| self.error("number out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn rat(&mut self) -> Result<Rat> {
        let neg = self.eat("-");
        let num: BigInt = self.digits()?.parse().unwrap();
        let num = if neg { -num } else { num };
        if self.eat("/") {
            let den: BigInt = self.digits()?.parse().unwrap();
            if den == BigInt::from(0) {
                return Err(self.error("zero denominator"));
            }
            return Ok(Rat::new(num, den));
        }
        Ok(Rat::from_integer(num))
    }

    /// `coeff "*" "(" formula ")"` joined by `+`/`-`.
    fn linear<T>(
        &mut self,
        mut coeff: impl FnMut(&mut Self) -> Result<T>,
        negate: impl Fn(T) -> T,
    ) -> Result<(Vec<T>, Vec<Formula>)> {
        let mut coeffs = Vec::new();
        let mut args = Vec::new();
        let mut first = true;
        loop {
            let negated = if first || self.eat("+") {
                false
            } else if self.peek() == Some(b'-') && self.peek_at(1) != Some(b'>') {
                self.pos += 1;
                true
            } else {
                break;
            };
            first = false;
            let c = coeff(self)?;
            coeffs.push(if negated { negate(c) } else { c });
            self.expect("*")?;
            self.expect("(")?;
            args.push(self.formula()?);
            self.expect(")")?;
        }
        Ok((coeffs, args))
    }

    fn count_atom(&mut self) -> Result<Formula> {
        let (coeffs, args) = self.linear(Self::int, |c: i64| -c)?;
        let rel = if self.eat("mod") {
            let modulus = self.nat()?;
            self.expect("=")?;
            let residue = self.nat()?;
            if modulus == 0 || residue >= modulus {
                return Err(self.error("congruence needs modulus >= 1 and residue < modulus"));
            }
            CountRel::Mod { modulus, residue }
        } else if self.eat(">") {
            CountRel::Gt
        } else if self.eat("<") {
            CountRel::Lt
        } else if self.eat("=") {
            CountRel::Eq
        } else {
            return Err(self.error("expected `>`, `<`, `=` or `mod`"));
        };
        let bound = match rel {
            CountRel::Mod { .. } => 0,
            _ => self.int()?,
        };
        self.expect("}")?;
        Ok(Formula::modal(
            ModalOp::Count(CountAtom { coeffs, rel, bound }),
            args,
        ))
    }

    fn likelihood_atom(&mut self) -> Result<Formula> {
        let (coeffs, args) = self.linear(Self::rat, |c: Rat| -c)?;
        self.expect(">=")?;
        let bound = self.rat()?;
        self.expect("}")?;
        Ok(Formula::modal(
            ModalOp::Likelihood(LikelihoodAtom { coeffs, bound }),
            args,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_and_negation() {
        let f = parse("[]p & ~p", &Logic::K).unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::boxed(Formula::var("p")),
                Formula::not(Formula::var("p"))
            )
        );
    }

    #[test]
    fn presburger_atom() {
        let f = parse("#{2*(p) - 1*(q) > 3}", &Logic::Presburger).unwrap();
        assert_eq!(
            f,
            Formula::modal(
                ModalOp::Count(CountAtom {
                    coeffs: vec![2, -1],
                    rel: CountRel::Gt,
                    bound: 3
                }),
                vec![Formula::var("p"), Formula::var("q")]
            )
        );
    }

    #[test]
    fn conditional_under_t_is_a_mismatch() {
        let err = parse("(p => q)", &Logic::T).unwrap_err();
        assert!(matches!(err, Error::LogicMismatch { .. }), "{err}");
        assert!(matches!(
            parse("[]p", &Logic::Ck).unwrap_err(),
            Error::LogicMismatch { .. }
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("p & ", &Logic::K).unwrap_err() {
            Error::Syntax { pos, .. } => assert_eq!(pos, 4),
            e => panic!("{e}"),
        }
        assert!(parse("p q", &Logic::K).is_err());
        assert!(parse("#{1*(p) mod 0=0}", &Logic::Presburger).is_err());
        assert!(parse("#{1*(p) mod 2=2}", &Logic::Presburger).is_err());
    }

    #[test]
    fn sugar_expands() {
        let k = Logic::K;
        assert_eq!(
            parse("<>p", &k).unwrap(),
            parse("~[]~p", &k).unwrap()
        );
        let pb = Logic::Presburger;
        assert_eq!(
            parse("<2>p", &pb).unwrap(),
            parse("#{1*(p) > 2}", &pb).unwrap()
        );
        assert_eq!(
            parse("[0]p", &pb).unwrap(),
            parse("~#{1*(~p) > 0}", &pb).unwrap()
        );
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse("p -> q -> r", &Logic::K).unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::var("p"),
                Formula::implies(Formula::var("q"), Formula::var("r"))
            )
        );
    }

    #[test]
    fn likelihood_with_rational_coefficients() {
        let f = parse("L{1/2*(p) - 1*(q) >= -1/3}", &Logic::Prob).unwrap();
        let Formula::Modal(ModalOp::Likelihood(l), args) = f else {
            panic!()
        };
        assert_eq!(l.coeffs, vec![Rat::new(1.into(), 2.into()), Rat::from_integer((-1).into())]);
        assert_eq!(l.bound, Rat::new((-1).into(), 3.into()));
        assert_eq!(args.len(), 2);
    }

    #[test]
    fn agency_operators() {
        let f = parse("E p -> C p", &Logic::Agency).unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::modal(ModalOp::Effect, vec![Formula::var("p")]),
                Formula::modal(ModalOp::Capable, vec![Formula::var("p")])
            )
        );
    }
}
