//! Flattening of source clauses into definite clauses whose heads and
//! user-predicate calls have distinct variable arguments.

use std::collections::{HashMap, HashSet};
use std::fmt;

use super::builtins::is_builtin;
use super::parser::{SourceClause, SourceProgram};
use super::term::Term;

#[derive(Clone, Debug, PartialEq)]
pub enum Goal {
    /// `X = t`.
    Unify(String, Term),
    /// A call to a predicate of the program.
    Call(String, Vec<String>),
    /// A call whose answers are discarded, as under `\+` or `findall/3`.
    Probe(String, Vec<String>),
    Builtin(Term),
    Fail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormClause {
    pub pred: String,
    pub head: Vec<String>,
    pub body: Vec<Goal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredDecl {
    pub name: String,
    pub arity: usize,
    /// Introduced by normalization rather than written in the source.
    pub aux: bool,
}

#[derive(Clone, Debug, Default)]
pub struct NormProgram {
    pub preds: Vec<PredDecl>,
    pub clauses: Vec<NormClause>,
    pub warnings: Vec<String>,
}

impl NormProgram {
    pub fn pred(&self, name: &str, arity: usize) -> Option<&PredDecl> {
        self.preds.iter().find(|p| p.name == name && p.arity == arity)
    }
}

impl fmt::Display for NormClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = Term::compound(&self.pred, self.head.iter().map(|v| Term::Var(v.clone())).collect());
        write!(f, "{head}")?;
        for (i, g) in self.body.iter().enumerate() {
            f.write_str(if i == 0 { " :- " } else { ", " })?;
            match g {
                Goal::Unify(v, t) => write!(f, "{v} = {}", super::term::render(t, 699))?,
                Goal::Call(p, args) | Goal::Probe(p, args) => {
                    if matches!(g, Goal::Probe(..)) {
                        f.write_str("\\+ \\+ ")?;
                    }
                    let t = Term::compound(p, args.iter().map(|v| Term::Var(v.clone())).collect());
                    write!(f, "{}", super::term::render(&t, 999))?
                }
                Goal::Builtin(t) => write!(f, "{}", super::term::render(t, 999))?,
                Goal::Fail => f.write_str("fail")?,
            }
        }
        f.write_str(".")
    }
}

/// Key of a predicate: `name/arity`.
pub fn pred_key(name: &str, arity: usize) -> String {
    format!("{name}/{arity}")
}

pub fn normalize(sp: &SourceProgram) -> NormProgram {
    let mut defined: Vec<PredDecl> = Vec::new();
    let mut seen: HashSet<(String, usize)> = HashSet::new();
    for c in &sp.clauses {
        let (n, a) = c.head.functor().expect("heads are callable");
        if seen.insert((n.to_string(), a)) {
            defined.push(PredDecl { name: n.to_string(), arity: a, aux: false });
        }
    }
    let mut n = Normalizer {
        defined: seen,
        preds: defined,
        aux_count: HashMap::new(),
        warnings: Vec::new(),
        warned: HashSet::new(),
    };
    let mut queue: std::collections::VecDeque<SourceClause> = sp.clauses.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some(c) = queue.pop_front() {
        let (clause, extra) = n.clause(&c);
        out.push(clause);
        queue.extend(extra);
    }
    NormProgram { preds: n.preds, clauses: out, warnings: n.warnings }
}

struct Normalizer {
    defined: HashSet<(String, usize)>,
    preds: Vec<PredDecl>,
    aux_count: HashMap<String, usize>,
    warnings: Vec<String>,
    warned: HashSet<String>,
}

struct ClauseState {
    names: HashMap<String, String>,
    next: usize,
    body: Vec<Goal>,
}

impl ClauseState {
    fn fresh(&mut self) -> String {
        let k = self.next;
        self.next += 1;
        let letter = (b'A' + (k % 26) as u8) as char;
        if k < 26 {
            letter.to_string()
        } else {
            format!("{letter}{}", k / 26)
        }
    }

    fn rename(&mut self, t: &Term) -> Term {
        t.map_vars(&mut |v| {
            if let Some(n) = self.names.get(v) {
                return Term::Var(n.clone());
            }
            let n = self.fresh();
            self.names.insert(v.to_string(), n.clone());
            Term::Var(n)
        })
    }

    fn var_of(&mut self, t: &Term) -> Option<String> {
        match self.rename(t) {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Structural unification of renamed terms.
    fn unify(&mut self, a: Term, b: Term) {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => self.body.push(Goal::Unify(x, t)),
            (Term::Compound(f, xs), Term::Compound(g, ys)) if f == g && xs.len() == ys.len() => {
                for (x, y) in xs.into_iter().zip(ys) {
                    self.unify(x, y);
                }
            }
            (a, b) if a == b => {}
            _ => self.body.push(Goal::Fail),
        }
    }
}

fn conjuncts(t: &Term, out: &mut Vec<Term>) {
    match t {
        Term::Compound(n, a) if n == "," && a.len() == 2 => {
            conjuncts(&a[0], out);
            conjuncts(&a[1], out);
        }
        other => out.push(other.clone()),
    }
}

fn strip_carets(t: &Term) -> &Term {
    match t {
        Term::Compound(n, a) if n == "^" && a.len() == 2 => strip_carets(&a[1]),
        other => other,
    }
}

fn add_args(g: &Term, extra: &[Term]) -> Option<Term> {
    match g {
        Term::Atom(a) => Some(Term::compound(a, extra.to_vec())),
        Term::Compound(n, args) => {
            let mut all = args.clone();
            all.extend_from_slice(extra);
            Some(Term::Compound(n.clone(), all))
        }
        _ => None,
    }
}

impl Normalizer {
    fn clause(&mut self, c: &SourceClause) -> (NormClause, Vec<SourceClause>) {
        let (pred, arity) = c.head.functor().unwrap();
        let mut st = ClauseState { names: HashMap::new(), next: 0, body: Vec::new() };
        let head: Vec<String> = (0..arity).map(|_| st.fresh()).collect();
        for (v, arg) in head.iter().zip(c.head.args()) {
            let t = st.rename(arg);
            st.unify(Term::Var(v.clone()), t);
        }
        let mut goals = Vec::new();
        if let Some(b) = &c.body {
            conjuncts(b, &mut goals);
        }
        let mut extra = Vec::new();
        for i in 0..goals.len() {
            let mut outside: Vec<String> = c.head.vars();
            for (j, g) in goals.iter().enumerate() {
                if j != i {
                    g.collect_vars(&mut outside);
                }
            }
            self.goal(&mut st, &goals[i], &outside, pred, c.line, &mut extra);
        }
        (NormClause { pred: pred.to_string(), head, body: st.body }, extra)
    }

    fn new_aux(&mut self, owner: &str, arity: usize) -> String {
        let k = self.aux_count.entry(owner.to_string()).or_insert(0);
        *k += 1;
        let mut name = format!("{owner}__{k}");
        while self.defined.contains(&(name.clone(), arity)) {
            *k += 1;
            name = format!("{owner}__{k}");
        }
        self.defined.insert((name.clone(), arity));
        self.preds.push(PredDecl { name: name.clone(), arity, aux: true });
        name
    }

    /// Auxiliary predicate whose clauses are the given bodies, over the
    /// variables they share with the rest of the clause.
    fn aux_for(
        &mut self,
        owner: &str,
        branches: Vec<Term>,
        outside: &[String],
        line: usize,
        extra: &mut Vec<SourceClause>,
    ) -> (String, Vec<String>) {
        let mut vars = Vec::new();
        for b in &branches {
            b.collect_vars(&mut vars);
        }
        vars.retain(|v| outside.contains(v));
        let name = self.new_aux(owner, vars.len());
        let head = Term::compound(&name, vars.iter().map(|v| Term::Var(v.clone())).collect());
        for b in branches {
            extra.push(SourceClause { head: head.clone(), body: Some(b), line });
        }
        (name, vars)
    }

    fn goal(
        &mut self,
        st: &mut ClauseState,
        g: &Term,
        outside: &[String],
        owner: &str,
        line: usize,
        extra: &mut Vec<SourceClause>,
    ) {
        let Some((name, arity)) = g.functor() else {
            // a variable goal or a number: no information
            return;
        };
        let args = g.args();
        match (name, arity) {
            ("!" | "true" | "otherwise" | "nl" | "halt" | "listing", 0) => {}
            ("fail" | "false", 0) => st.body.push(Goal::Fail),
            (",", 2) => {
                let mut inner = Vec::new();
                conjuncts(g, &mut inner);
                let mut outside = outside.to_vec();
                for t in &inner {
                    t.collect_vars(&mut outside);
                }
                for t in &inner {
                    self.goal(st, t, &outside, owner, line, extra);
                }
            }
            (";", 2) => {
                let mut branches = Vec::new();
                let mut cur = g.clone();
                loop {
                    match cur {
                        Term::Compound(ref n, ref a) if n == ";" && a.len() == 2 => {
                            branches.push(a[0].clone());
                            cur = a[1].clone();
                        }
                        other => {
                            branches.push(other);
                            break;
                        }
                    }
                }
                let branches = branches
                    .into_iter()
                    .map(|b| match b {
                        Term::Compound(n, a) if (n == "->" || n == "*->") && a.len() == 2 => {
                            Term::Compound(",".into(), a)
                        }
                        other => other,
                    })
                    .collect();
                let (aux, vars) = self.aux_for(owner, branches, outside, line, extra);
                let vars = vars.iter().map(|v| st.var_of(&Term::Var(v.clone())).unwrap()).collect();
                st.body.push(Goal::Call(aux, vars));
            }
            ("->" | "*->", 2) => {
                let conj = Term::Compound(",".into(), args.to_vec());
                self.goal(st, &conj, outside, owner, line, extra);
            }
            ("call" | "once", 1) => self.goal(st, &args[0], outside, owner, line, extra),
            ("call", _) => {
                if let Some(t) = add_args(&args[0], &args[1..]) {
                    self.goal(st, &t, outside, owner, line, extra);
                }
            }
            ("ignore", 1) => {
                let t = Term::compound(";", vec![args[0].clone(), Term::atom("true")]);
                self.goal(st, &t, outside, owner, line, extra);
            }
            ("\\+" | "not", 1) => self.probe(st, vec![args[0].clone()], outside, owner, line, extra),
            ("findall", 3 | 4) | ("bagof" | "setof" | "aggregate_all", 3) => {
                let inner = strip_carets(&args[1]).clone();
                self.probe(st, vec![inner], outside, owner, line, extra)
            }
            ("forall", 2) => {
                let conj = Term::Compound(",".into(), args.to_vec());
                self.probe(st, vec![conj], outside, owner, line, extra)
            }
            ("catch", 3) => self.probe(st, vec![args[0].clone()], outside, owner, line, extra),
            ("=", 2) => {
                let (a, b) = (st.rename(&args[0]), st.rename(&args[1]));
                st.unify(a, b);
            }
            _ if self.defined.contains(&(name.to_string(), arity)) => {
                let mut vars = Vec::with_capacity(arity);
                let mut pending = Vec::new();
                for a in args {
                    match st.rename(a) {
                        Term::Var(v) => vars.push(v),
                        t => {
                            let v = st.fresh();
                            pending.push(Goal::Unify(v.clone(), t));
                            vars.push(v);
                        }
                    }
                }
                st.body.extend(pending);
                st.body.push(Goal::Call(name.to_string(), vars));
            }
            _ => {
                if !is_builtin(name, arity) {
                    let key = pred_key(name, arity);
                    if self.warned.insert(key.clone()) {
                        self.warnings.push(format!("unknown predicate {key} treated as true"));
                    }
                }
                let t = st.rename(g);
                st.body.push(Goal::Builtin(t));
            }
        }
    }

    fn probe(
        &mut self,
        st: &mut ClauseState,
        branches: Vec<Term>,
        outside: &[String],
        owner: &str,
        line: usize,
        extra: &mut Vec<SourceClause>,
    ) {
        let (aux, vars) = self.aux_for(owner, branches, outside, line, extra);
        let vars = vars.iter().map(|v| st.var_of(&Term::Var(v.clone())).unwrap()).collect();
        st.body.push(Goal::Probe(aux, vars));
    }
}
