//! Identifier conventions shared by every module.

use alloc::string::String;

/// Pseudo-class conditioning every unconditional BCT. Also the name of the
/// compiled tree's root node.
pub const ROOT: &str = "root_class";

/// Prefix of negative exclusion classes (`no_doppler`).
pub const NEGATIVE_PREFIX: &str = "no_";

/// Prefix of residual exclusion classes (`other_ultrasound`).
pub const RESIDUAL_PREFIX: &str = "other_";

/// Normalizes a raw class or tree name to lowercase snake case.
///
/// A leading minus (the negative-class notation `-D`) becomes `no_`, `&`
/// becomes `_and_`, and every other character outside `[a-z0-9_()/]` is
/// treated as a word separator. Runs of separators collapse to one `_`.
pub fn normalize(raw: &str) -> String {
    let trimmed = raw.trim();
    let (negated, body) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed),
    };
    let mut out = String::with_capacity(body.len() + 3);
    if negated {
        out.push_str(NEGATIVE_PREFIX);
    }
    let start = out.len();
    let mut pending_sep = false;
    for ch in body.chars().flat_map(char::to_lowercase) {
        match ch {
            'a'..='z' | '0'..='9' | '(' | ')' | '/' => {
                if pending_sep && out.len() > start {
                    out.push('_');
                }
                pending_sep = false;
                out.push(ch);
            }
            '&' => {
                if out.len() > start {
                    out.push_str("_and");
                    pending_sep = true;
                } else {
                    out.push_str("and");
                    pending_sep = true;
                }
            }
            _ => pending_sep = true,
        }
    }
    out
}

/// Whether `name` is already in normalized form and uses only the
/// identifier alphabet `[a-z0-9_()/-]`.
pub fn is_identifier(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_' | b'(' | b')' | b'/' | b'-'))
}

/// Name of the negative class paired with `class` in a binary BCT.
pub fn negative_of(class: &str) -> String {
    let mut s = String::from(NEGATIVE_PREFIX);
    s.push_str(class);
    s
}

/// Name of the residual class added under `parent`.
pub fn residual_of(parent: &str) -> String {
    let mut s = String::from(RESIDUAL_PREFIX);
    s.push_str(parent);
    s
}
