//! Canonical printing. A binary connective is parenthesized under a different
//! binary connective and on the right of its own, so left-nested `&` and `|`
//! chains print flat and `->` never nests bare. `~K[i]~` and `~Gt[i]~` print
//! as `Khat[i]` and `GtDia[i]`. A prefix operator is separated from its operand by one space unless the
//! operand is parenthesized.

use std::fmt;

use super::Formula;
use Formula::*;

const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Implies(..) => 1,
        Or(..) => OR,
        And(..) => AND,
        _ => UNARY,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        write_node(f, out);
        out.push(')');
    } else {
        write_node(f, out);
    }
}

fn operand(f: &Formula, out: &mut String) {
    let mut s = String::new();
    write_at(f, UNARY, &mut s);
    if !s.starts_with('(') {
        out.push(' ');
    }
    out.push_str(&s);
}

fn write_node(f: &Formula, out: &mut String) {
    match f {
        Atom(p) => out.push_str(p),
        Top => out.push_str("true"),
        Bot => out.push_str("false"),
        Not(inner) => match inner.as_ref() {
            Know(i, body) if matches!(body.as_ref(), Not(_)) => {
                let Not(x) = body.as_ref() else { unreachable!() };
                out.push_str(&format!("Khat[{i}]"));
                operand(x, out);
            }
            GtBox(i, body) if matches!(body.as_ref(), Not(_)) => {
                let Not(x) = body.as_ref() else { unreachable!() };
                out.push_str(&format!("GtDia[{i}]"));
                operand(x, out);
            }
            _ => {
                out.push('~');
                write_at(inner, UNARY, out);
            }
        },
        And(a, b) => {
            write_at(a, if matches!(**a, And(..)) { AND } else { UNARY }, out);
            out.push_str(" & ");
            write_at(b, UNARY, out);
        }
        Or(a, b) => {
            write_at(a, if matches!(**a, Or(..)) { OR } else { UNARY }, out);
            out.push_str(" | ");
            write_at(b, UNARY, out);
        }
        Implies(a, b) => {
            write_at(a, UNARY, out);
            out.push_str(" -> ");
            write_at(b, UNARY, out);
        }
        Know(i, x) => {
            out.push_str(&format!("K[{i}]"));
            operand(x, out);
        }
        CondBelief(i, c, x) => {
            out.push_str(&format!("B[{i} | "));
            write_node(c, out);
            out.push(']');
            operand(x, out);
        }
        SafeBelief(i, x) => {
            out.push_str(&format!("Bplus[{i}]"));
            operand(x, out);
        }
        GtBox(i, x) => {
            out.push_str(&format!("Gt[{i}]"));
            operand(x, out);
        }
        Announce(p, x) => {
            out.push_str("[! ");
            write_node(p, out);
            out.push(']');
            operand(x, out);
        }
        Upgrade(p, x) => {
            out.push_str("[up ");
            write_node(p, out);
            out.push(']');
            operand(x, out);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_node(self, &mut s);
        f.write_str(&s)
    }
}
