use std::fmt::{self, Write as _};

use crate::encode::{LogicProgram, MlnModel, MlnWeight};
use crate::logic::{
    format_rational, is_bare_constant, Atom, Domain, Formula, Term, WeightedTheory,
};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write_constant(f, c),
        }
    }
}

fn write_constant(f: &mut impl fmt::Write, c: &str) -> fmt::Result {
    if is_bare_constant(c) {
        f.write_str(c)
    } else {
        write!(f, "'{c}'")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.pred().name())?;
        if !self.args().is_empty() {
            f.write_char('(')?;
            for (i, t) in self.args().iter().enumerate() {
                if i > 0 {
                    f.write_char(',')?;
                }
                write!(f, "{t}")?;
            }
            f.write_char(')')?;
        }
        Ok(())
    }
}

/// Binding strength of a binary connective; higher binds tighter.
fn precedence(f: &Formula) -> Option<u8> {
    match f {
        Formula::Iff(..) => Some(1),
        Formula::Implies(..) => Some(2),
        Formula::Or(..) => Some(3),
        Formula::And(..) => Some(4),
        _ => None,
    }
}

fn write_formula(out: &mut impl fmt::Write, f: &Formula) -> fmt::Result {
    match f {
        Formula::True => out.write_str("true"),
        Formula::False => out.write_str("false"),
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Not(inner) => {
            out.write_char('~')?;
            write_operand(out, inner, |_| true)
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let p = precedence(f).expect("binary connective");
            let op = match p {
                1 => " <-> ",
                2 => " -> ",
                3 => " | ",
                _ => " & ",
            };
            write_operand(out, a, |q| q <= p)?;
            out.write_str(op)?;
            write_operand(out, b, |q| q < p)
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let q = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            write!(out, "{q} {v} ")?;
            if precedence(body).is_some() {
                out.write_char('(')?;
                write_formula(out, body)?;
                out.write_char(')')
            } else {
                write_formula(out, body)
            }
        }
    }
}

/// Writes an operand, parenthesised when it is a quantifier or a binary
/// connective for which `needs_parens` holds.
fn write_operand(
    out: &mut impl fmt::Write,
    f: &Formula,
    needs_parens: impl Fn(u8) -> bool,
) -> fmt::Result {
    let wrap = f.as_quantifier().is_some() || precedence(f).is_some_and(needs_parens);
    if wrap {
        out.write_char('(')?;
        write_formula(out, f)?;
        out.write_char(')')
    } else {
        write_formula(out, f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

/// Prints a theory in the syntax [`parse_theory`](super::parse_theory) reads.
pub fn print_theory(t: &WeightedTheory, domain: Option<&Domain>) -> String {
    let mut out = String::new();
    for (pred, w) in t.weights.iter() {
        let _ = writeln!(
            out,
            "weight {} {} {} {}",
            pred.name(),
            pred.arity(),
            w.pos,
            w.neg
        );
    }
    if let Some(d) = domain {
        out.push_str("domain ");
        for (i, c) in d.constants().iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write_constant(&mut out, c);
        }
        out.push('\n');
    }
    for s in &t.scale {
        let _ = writeln!(out, "scale {} {}", s.weight, s.arity);
    }
    for s in &t.sentences {
        let _ = writeln!(out, "{s}");
    }
    out
}

pub fn print_mln(m: &MlnModel) -> String {
    let mut out = String::new();
    for entry in &m.formulas {
        let w = match &entry.weight {
            MlnWeight::Soft(w) => format_rational(w),
            MlnWeight::Hard => "inf".to_string(),
        };
        let _ = writeln!(out, "{w} {}", entry.formula);
    }
    out
}

pub fn print_problog(p: &LogicProgram) -> String {
    let mut out = String::new();
    for fact in &p.facts {
        let _ = writeln!(out, "{} :: {}.", format_rational(&fact.prob), fact.atom);
    }
    for rule in &p.rules {
        let _ = write!(out, "{}", rule.head);
        for (i, lit) in rule.body.iter().enumerate() {
            out.push_str(if i == 0 { " :- " } else { ", " });
            if !lit.positive {
                out.push_str("\\+ ");
            }
            let _ = write!(out, "{}", lit.atom);
        }
        out.push_str(".\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_mln, parse_problog, parse_theory};

    fn roundtrip(src: &str) -> String {
        let f = parse_formula(src).unwrap();
        let printed = f.to_string();
        assert_eq!(parse_formula(&printed).unwrap(), f, "{printed}");
        printed
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(
            roundtrip("forall x forall y (Sk0(x) | ~WorksFor(x,y))"),
            "forall x forall y (Sk0(x) | ~WorksFor(x,y))"
        );
        assert_eq!(roundtrip("(P | Q) | R"), "(P | Q) | R");
        assert_eq!(roundtrip("P | Q | R"), "P | Q | R");
        assert_eq!(roundtrip("(P -> Q) & R"), "(P -> Q) & R");
        assert_eq!(roundtrip("~(P & Q)"), "~(P & Q)");
        assert_eq!(roundtrip("(forall x P(x)) & Q"), "(forall x P(x)) & Q");
        assert_eq!(roundtrip("~exists x P(x)"), "~(exists x P(x))");
        assert_eq!(roundtrip("P('a b', C)"), "P('a b',C)");
    }

    #[test]
    fn theory_layout() {
        let src =
            "weight Sk0 1 1 -1\ndomain A, 'b'\nscale exp(2) 1\nforall x (Sk0(x) | ~Boss(x))\n";
        let parsed = parse_theory(src).unwrap();
        let printed = print_theory(&parsed.theory, parsed.domain.as_ref());
        assert_eq!(printed, src);
    }

    #[test]
    fn program_and_mln_layout() {
        let src = "0.1 :: attends(x).\nseries :- attends(x), \\+ toseries(x).\nq.\n";
        assert_eq!(print_problog(&parse_problog(src).unwrap()), src);
        let src = "1.3 exists y (WorksFor(x,y) | Boss(x))\ninf Smokes(A)\n";
        assert_eq!(print_mln(&parse_mln(src).unwrap()), src);
    }
}
