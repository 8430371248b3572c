//! Canonical, whitespace-free rendering. The output is the memoization key
//! for recursive satisfiability calls, so it must be injective on ASTs.

use std::fmt::Write;

use super::{CountRel, Formula, ModalOp};
use crate::arith::Rat;

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_prec(f, 0, &mut out);
    out
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write_prec(f: &Formula, min: u8, out: &mut String) {
    let wrap = level(f) < min;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Var(v) => out.push_str(v),
        Formula::Not(c) => {
            out.push('~');
            write_prec(c, UNARY, out);
        }
        Formula::Iff(l, r) => infix(l, "<->", r, IFF, IFF + 1, out),
        Formula::Implies(l, r) => infix(l, "->", r, IMPLIES + 1, IMPLIES, out),
        Formula::Or(l, r) => infix(l, "|", r, OR, OR + 1, out),
        Formula::And(l, r) => infix(l, "&", r, AND, AND + 1, out),
        Formula::Modal(op, args) => write_modal(op, args, out),
    }
    if wrap {
        out.push(')');
    }
}

fn infix(l: &Formula, op: &str, r: &Formula, lmin: u8, rmin: u8, out: &mut String) {
    write_prec(l, lmin, out);
    out.push_str(op);
    write_prec(r, rmin, out);
}

fn write_modal(op: &ModalOp, args: &[Formula], out: &mut String) {
    match op {
        ModalOp::Box => {
            out.push_str("[]");
            write_prec(&args[0], UNARY, out);
        }
        ModalOp::Effect | ModalOp::Capable => {
            out.push_str(op.spelling());
            write_prec(&args[0], UNARY, out);
        }
        ModalOp::Cond => {
            out.push('(');
            write_prec(&args[0], 0, out);
            out.push_str("=>");
            write_prec(&args[1], 0, out);
            out.push(')');
        }
        ModalOp::Count(c) => {
            out.push_str("#{");
            let terms: Vec<(bool, String)> =
                c.coeffs.iter().map(|&a| (a < 0, a.unsigned_abs().to_string())).collect();
            write_terms(&terms, args, out);
            match c.rel {
                CountRel::Lt => write!(out, "<{}", c.bound).unwrap(),
                CountRel::Gt => write!(out, ">{}", c.bound).unwrap(),
                CountRel::Eq => write!(out, "={}", c.bound).unwrap(),
                CountRel::Mod { modulus, residue } => {
                    write!(out, " mod {modulus}={residue}").unwrap()
                }
            }
            out.push('}');
        }
        ModalOp::Likelihood(l) => {
            out.push_str("L{");
            let zero = Rat::from_integer(0.into());
            let terms: Vec<(bool, String)> = l
                .coeffs
                .iter()
                .map(|a| (*a < zero, if *a < zero { -a } else { a.clone() }.to_string()))
                .collect();
            write_terms(&terms, args, out);
            write!(out, ">={}", l.bound).unwrap();
            out.push('}');
        }
    }
}

fn write_terms(terms: &[(bool, String)], args: &[Formula], out: &mut String) {
    for (i, ((neg, mag), arg)) in terms.iter().zip(args).enumerate() {
        if *neg {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        out.push_str(mag);
        out.push_str("*(");
        write_prec(arg, 0, out);
        out.push(')');
    }
}
