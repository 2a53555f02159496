use std::fmt;

use super::ops::{infix_op, prefix_op, Assoc};

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Var(String),
    Atom(String),
    Int(i64),
    Float(f64),
    Str(String),
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn atom(s: &str) -> Term {
        Term::Atom(s.to_string())
    }

    pub fn compound(name: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Atom(name.to_string())
        } else {
            Term::Compound(name.to_string(), args)
        }
    }

    /// Name and arity of a callable term.
    pub fn functor(&self) -> Option<(&str, usize)> {
        match self {
            Term::Atom(a) => Some((a, 0)),
            Term::Compound(f, args) => Some((f, args.len())),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(_, args) => args,
            _ => &[],
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Variable names in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::Compound(n, args) => Term::Compound(n.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
            other => other.clone(),
        }
    }

    pub fn list(items: Vec<Term>, tail: Term) -> Term {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, t| Term::Compound(".".to_string(), vec![t, acc]))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, 1200))
    }
}

/// Renders a term so that parsing the text gives the term back.
pub fn render(t: &Term, max: u32) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::Int(i) => i.to_string(),
        Term::Float(x) => format!("{x:?}"),
        Term::Str(s) => quote(s, '"'),
        Term::Atom(a) => {
            if infix_op(a).is_some() || prefix_op(a).is_some() {
                format!("({})", atom_text(a))
            } else {
                atom_text(a)
            }
        }
        Term::Compound(name, args) => render_compound(name, args, max),
    }
}

fn render_compound(name: &str, args: &[Term], max: u32) -> String {
    if name == "." && args.len() == 2 {
        return render_list(args);
    }
    if name == "{}" && args.len() == 1 {
        return format!("{{{}}}", render(&args[0], 1200));
    }
    if args.len() == 2 {
        if let Some((p, assoc)) = infix_op(name) {
            let (lmax, rmax) = match assoc {
                Assoc::Xfx => (p - 1, p - 1),
                Assoc::Xfy => (p - 1, p),
                Assoc::Yfx => (p, p - 1),
                _ => unreachable!(),
            };
            let op = if name == "," { ", ".to_string() } else { format!(" {} ", atom_text(name)) };
            let s = format!("{}{}{}", render(&args[0], lmax), op, render(&args[1], rmax));
            return if p > max { format!("({s})") } else { s };
        }
    }
    if args.len() == 1 {
        if let Some((p, assoc)) = prefix_op(name) {
            let amax = if assoc == Assoc::Fy { p } else { p - 1 };
            let inner = render(&args[0], amax);
            let s = format!("{} {}", atom_text(name), inner);
            return if p > max { format!("({s})") } else { s };
        }
    }
    let parts: Vec<String> = args.iter().map(|a| render(a, 999)).collect();
    format!("{}({})", atom_text(name), parts.join(", "))
}

fn render_list(args: &[Term]) -> String {
    let mut items = vec![render(&args[0], 999)];
    let mut tail = &args[1];
    loop {
        match tail {
            Term::Compound(n, a) if n == "." && a.len() == 2 => {
                items.push(render(&a[0], 999));
                tail = &a[1];
            }
            Term::Atom(a) if a == "[]" => return format!("[{}]", items.join(", ")),
            other => return format!("[{}|{}]", items.join(", "), render(other, 999)),
        }
    }
}

const SYMBOL_CHARS: &str = "+-*/\\^<>=~:.?@#&$";

pub(crate) fn is_symbol_char(c: char) -> bool {
    SYMBOL_CHARS.contains(c)
}

fn atom_text(a: &str) -> String {
    let mut chars = a.chars();
    let plain = match chars.next() {
        Some(c) if c.is_ascii_lowercase() => a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some(c) if is_symbol_char(c) => a.chars().all(is_symbol_char),
        _ => matches!(a, "[]" | "{}" | "!" | ";"),
    };
    if plain {
        a.to_string()
    } else {
        quote(a, '\'')
    }
}

fn quote(s: &str, q: char) -> String {
    let mut out = String::new();
    out.push(q);
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if c == q => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
    out.push(q);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::Var(n.to_string())
    }

    #[test]
    fn renders_operators_and_lists() {
        let t = Term::compound(":-", vec![
            Term::compound("app", vec![Term::list(vec![v("X")], v("Xs")), v("Y"), Term::list(vec![v("X")], v("Zs"))]),
            Term::compound("app", vec![v("Xs"), v("Y"), v("Zs")]),
        ]);
        assert_eq!(t.to_string(), "app([X|Xs], Y, [X|Zs]) :- app(Xs, Y, Zs)");
        let e = Term::compound("is", vec![v("X"), Term::compound("-", vec![Term::compound("+", vec![v("A"), Term::Int(1)]), Term::Int(-2)])]);
        assert_eq!(e.to_string(), "X is A + 1 - -2");
        let r = Term::compound("-", vec![v("A"), Term::compound("-", vec![v("B"), v("C")])]);
        assert_eq!(r.to_string(), "A - (B - C)");
    }

    #[test]
    fn quotes_when_needed() {
        assert_eq!(Term::atom("hello world").to_string(), "'hello world'");
        assert_eq!(Term::atom("[]").to_string(), "[]");
        assert_eq!(Term::atom("it's").to_string(), "'it\\'s'");
        assert_eq!(Term::atom("-").to_string(), "(-)");
        assert_eq!(Term::compound(",", vec![Term::atom("a"), Term::atom("b")]).to_string(), "a, b");
    }
}
