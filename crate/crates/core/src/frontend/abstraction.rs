//! Abstract programs: clause bodies of predicate calls and Boolean
//! constraints over clause-local variable numbers.

use std::collections::HashMap;
use std::fmt;

use super::builtins::{builtin_effect, Effect};
use super::normalize::{Goal, NormProgram};
use super::term::Term;

pub type PredId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredInfo {
    pub name: String,
    pub arity: usize,
    pub aux: bool,
}

impl PredInfo {
    pub fn key(&self) -> String {
        format!("{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Call { pred: PredId, args: Vec<u32> },
    /// The call is made but its answers are not used.
    Probe { pred: PredId, args: Vec<u32> },
    /// `x ↔ ∧vars`; `x` is ground when `vars` is empty.
    Iff { x: u32, vars: Vec<u32> },
    Ground(Vec<u32>),
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractClause {
    pub pred: PredId,
    pub nvars: u32,
    pub head: Vec<u32>,
    pub body: Vec<Item>,
}

impl AbstractClause {
    /// Positions of the body items that call predicates.
    pub fn call_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.body
            .iter()
            .enumerate()
            .filter(|(_, it)| matches!(it, Item::Call { .. } | Item::Probe { .. }))
            .map(|(i, _)| i)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbstractProgram {
    pub preds: Vec<PredInfo>,
    pub clauses: Vec<AbstractClause>,
    /// Clause indices per predicate, in source order.
    pub by_pred: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

impl AbstractProgram {
    pub fn find(&self, name: &str, arity: usize) -> Option<PredId> {
        self.preds.iter().position(|p| p.name == name && p.arity == arity)
    }

    /// Number of abstract clauses.
    pub fn size(&self) -> usize {
        self.clauses.len()
    }

    pub fn max_clause_vars(&self) -> u32 {
        self.clauses.iter().map(|c| c.nvars).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AbstractOptions {
    /// Treat CLP(R) constraint blocks as grounding their variables.
    pub assume_clpr_ground: bool,
}

pub fn abstract_program(np: &NormProgram, opts: AbstractOptions) -> AbstractProgram {
    let preds: Vec<PredInfo> = np
        .preds
        .iter()
        .map(|d| PredInfo { name: d.name.clone(), arity: d.arity, aux: d.aux })
        .collect();
    let index: HashMap<(String, usize), PredId> =
        preds.iter().enumerate().map(|(i, p)| ((p.name.clone(), p.arity), i)).collect();
    let mut by_pred = vec![Vec::new(); preds.len()];
    let mut clauses = Vec::with_capacity(np.clauses.len());
    for c in &np.clauses {
        let pred = index[&(c.pred.clone(), c.head.len())];
        let mut vars: HashMap<String, u32> = HashMap::new();
        let mut num = |v: &str| -> u32 {
            let n = vars.len() as u32;
            *vars.entry(v.to_string()).or_insert(n)
        };
        let head: Vec<u32> = c.head.iter().map(|v| num(v)).collect();
        let mut body = Vec::new();
        for g in &c.body {
            match g {
                Goal::Unify(x, t) => {
                    let x = num(x);
                    let ys: Vec<u32> = t.vars().iter().map(|v| num(v)).collect();
                    body.push(Item::Iff { x, vars: ys });
                }
                Goal::Call(p, args) => {
                    let pred = index[&(p.clone(), args.len())];
                    body.push(Item::Call { pred, args: args.iter().map(|v| num(v)).collect() });
                }
                Goal::Probe(p, args) => {
                    let pred = index[&(p.clone(), args.len())];
                    body.push(Item::Probe { pred, args: args.iter().map(|v| num(v)).collect() });
                }
                Goal::Fail => body.push(Item::Fail),
                Goal::Builtin(t) => {
                    if let Some(item) = builtin_item(t, opts, &mut num) {
                        body.push(item);
                    }
                }
            }
        }
        by_pred[pred].push(clauses.len());
        clauses.push(AbstractClause { pred, nvars: vars.len() as u32, head, body });
    }
    AbstractProgram { preds, clauses, by_pred, warnings: np.warnings.clone() }
}

fn builtin_item(t: &Term, opts: AbstractOptions, num: &mut impl FnMut(&str) -> u32) -> Option<Item> {
    let (name, arity) = t.functor()?;
    let effect = builtin_effect(name, arity).unwrap_or(Effect::True);
    let grounded: Vec<String> = match effect {
        Effect::True => return None,
        Effect::GroundAll => t.vars(),
        Effect::GroundArgs(pos) => {
            let mut out = Vec::new();
            for &p in pos {
                t.args()[p].collect_vars(&mut out);
            }
            out
        }
        Effect::Constraint if opts.assume_clpr_ground => t.vars(),
        Effect::Constraint => return None,
    };
    if grounded.is_empty() {
        return None;
    }
    Some(Item::Ground(grounded.iter().map(|v| num(v)).collect()))
}

impl fmt::Display for AbstractProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |x: &u32| format!("V{x}");
        for c in &self.clauses {
            let p = &self.preds[c.pred];
            let head: Vec<String> = c.head.iter().map(v).collect();
            write!(f, "{}({})", p.name, head.join(","))?;
            for (i, it) in c.body.iter().enumerate() {
                f.write_str(if i == 0 { " :- " } else { ", " })?;
                match it {
                    Item::Call { pred, args } | Item::Probe { pred, args } => {
                        let a: Vec<String> = args.iter().map(v).collect();
                        let mark = if matches!(it, Item::Probe { .. }) { "?" } else { "" };
                        write!(f, "{mark}{}({})", self.preds[*pred].name, a.join(","))?;
                    }
                    Item::Iff { x, vars } => {
                        let a: Vec<String> = vars.iter().map(v).collect();
                        if a.is_empty() {
                            write!(f, "{}", v(x))?;
                        } else {
                            write!(f, "{} <-> {}", v(x), a.join("&"))?;
                        }
                    }
                    Item::Ground(vs) => {
                        let a: Vec<String> = vs.iter().map(v).collect();
                        write!(f, "{}", a.join("&"))?;
                    }
                    Item::Fail => f.write_str("false")?,
                }
            }
            writeln!(f, ".")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{normalize::normalize, parser::parse};

    fn abs(src: &str, opts: AbstractOptions) -> AbstractProgram {
        abstract_program(&normalize(&parse(src).unwrap()), opts)
    }

    #[test]
    fn unification_rules() {
        let p = abs("p(A, C, X, Y) :- A = [], C = [X|Xs], X is Y + 1, q(Xs).\nq(_).", AbstractOptions::default());
        let c = &p.clauses[0];
        assert!(c.body.iter().any(|it| matches!(it, Item::Iff { vars, .. } if vars.is_empty())));
        assert!(c.body.iter().any(|it| matches!(it, Item::Iff { vars, .. } if vars.len() == 2)));
        assert!(c.body.iter().any(|it| matches!(it, Item::Ground(vs) if vs.len() == 2)));
        assert_eq!(p.size(), 2);
    }

    #[test]
    fn constraint_blocks_follow_the_flag() {
        let src = "p(X, Y) :- {X = Y + 1}.";
        let off = abs(src, AbstractOptions::default());
        assert!(!off.clauses[0].body.iter().any(|it| matches!(it, Item::Ground(_))));
        let on = abs(src, AbstractOptions { assume_clpr_ground: true });
        assert!(on.clauses[0].body.iter().any(|it| matches!(it, Item::Ground(vs) if vs.len() == 2)));
    }

    #[test]
    fn rendering() {
        let p = abs("app([],Y,Y).", AbstractOptions::default());
        assert_eq!(p.to_string(), "app(V0,V1,V2) :- V0, V1 <-> V3, V2 <-> V3.\n");
    }
}
