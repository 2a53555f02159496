//! The fixed operator table.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assoc {
    Xfx,
    Xfy,
    Yfx,
    Fy,
    Fx,
}

pub fn infix_op(name: &str) -> Option<(u32, Assoc)> {
    use Assoc::*;
    Some(match name {
        ":-" | "-->" => (1200, Xfx),
        ";" | "|" => (1100, Xfy),
        "->" | "*->" => (1050, Xfy),
        "," => (1000, Xfy),
        "=" | "\\=" | "==" | "\\==" | "@<" | "@>" | "@=<" | "@>=" | "=.." | "is" | "=:=" | "=\\=" | "<"
        | ">" | "=<" | ">=" => (700, Xfx),
        ":" => (200, Xfy),
        "+" | "-" | "/\\" | "\\/" | "xor" => (500, Yfx),
        "*" | "/" | "//" | "rem" | "mod" | "div" | "<<" | ">>" => (400, Yfx),
        "**" => (200, Xfx),
        "^" => (200, Xfy),
        _ => return None,
    })
}

pub fn prefix_op(name: &str) -> Option<(u32, Assoc)> {
    use Assoc::*;
    Some(match name {
        ":-" | "?-" => (1200, Fx),
        "dynamic" | "discontiguous" | "initialization" | "multifile" | "module_transparent"
        | "meta_predicate" | "public" | "mode" | "table" => (1150, Fx),
        "\\+" => (900, Fy),
        "-" | "+" | "\\" => (200, Fy),
        _ => return None,
    })
}
