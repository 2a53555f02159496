//! Groundness abstraction of builtin predicates.
//!
//! Each entry describes what a successful call guarantees: nothing, or
//! groundness of some of its arguments.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Effect {
    /// No groundness information.
    True,
    /// Every variable of every argument is ground on success.
    GroundAll,
    /// Every variable of the listed argument positions is ground.
    GroundArgs(&'static [usize]),
    /// CLP(R) constraint block: ground under the assumption flag only.
    Constraint,
}

pub fn builtin_effect(name: &str, arity: usize) -> Option<Effect> {
    use Effect::*;
    Some(match (name, arity) {
        ("is" | "=:=" | "=\\=" | "<" | ">" | "=<" | ">=", 2) => GroundAll,
        ("succ" | "plus", _) | ("between", 3) => GroundAll,
        ("atom" | "atomic" | "number" | "integer" | "float" | "ground" | "callable" | "is_alpha", 1) => GroundAll,
        ("atom_codes" | "atom_chars" | "atom_length" | "number_codes" | "number_chars" | "char_code"
        | "atom_number" | "name" | "atom_string" | "term_to_atom", 2) => GroundAll,
        ("atom_concat", 3) | ("sub_atom", 5) => GroundAll,
        ("length", 2) => GroundArgs(&[1]),
        ("compare", 3) => GroundArgs(&[0]),
        ("tab" | "put" | "put_char", 1) => GroundAll,
        ("==" | "\\==" | "@<" | "@>" | "@=<" | "@>=" | "\\=", 2) => True,
        ("var" | "nonvar" | "is_list" | "write" | "print" | "writeq" | "write_canonical" | "display"
        | "read" | "assert" | "asserta" | "assertz" | "retract" | "retractall" | "abolish" | "throw"
        | "format" | "erase" | "garbage_collect" | "statistics", _) => True,
        ("functor", 3) | ("arg", 3) | ("=..", 2) | ("copy_term", 2) => True,
        ("sort" | "msort" | "keysort" | "numbervars" | "nb_getval" | "b_getval" | "nb_setval"
        | "b_setval" | "recorda" | "recordz" | "recorded" | "flag", _) => True,
        ("{}", 1) => Constraint,
        _ => return None,
    })
}

pub fn is_builtin(name: &str, arity: usize) -> bool {
    builtin_effect(name, arity).is_some()
}
