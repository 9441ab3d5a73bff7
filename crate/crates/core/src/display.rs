//! Text rendering shared by the element, symbol and tower printers.

use crate::ff::{Fe, FiniteField};

/// Constant-field element written as a polynomial in the generator `g`.
pub fn fe_to_string(f: &FiniteField, c: Fe) -> String {
    if f.degree() == 1 {
        return c.to_string();
    }
    let cs = f.coefficients(c);
    let mut parts = Vec::new();
    for (k, &x) in cs.iter().enumerate().rev() {
        if x == 0 {
            continue;
        }
        let part = match (k, x) {
            (0, _) => x.to_string(),
            (1, 1) => "g".to_string(),
            (1, _) => format!("{x}*g"),
            (_, 1) => format!("g^{k}"),
            _ => format!("{x}*g^{k}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Wraps in parentheses unless the text is a single atom.
pub fn paren(s: &str) -> String {
    if s.chars()
        .all(|c| c.is_alphanumeric() || c == '_' || c == '^')
    {
        s.to_string()
    } else {
        format!("({s})")
    }
}
