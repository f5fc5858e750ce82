//! The runtime shim interface: the symbols `mmlrt.js` exports, and
//! `{i}` template handling shared by the backends.

/// Every symbol the JavaScript runtime exports. Emitted code may reference
/// only these (as `MMLRT.<symbol>`).
pub const SHIM_SYMBOLS: &[&str] = &[
    "cons",
    "nil",
    "list_map",
    "seq_map",
    "array_ofSeq",
    "async_bind",
    "async_return",
    "async_delay",
    "async_for",
    "async_startImmediate",
    "async_catch",
    "GetCountries",
    "GetCountry",
    "GetIndicator",
    "GetIndicatorOpt",
    "AsyncGetIndicator",
    "unbox_check",
];

pub fn is_shim_symbol(s: &str) -> bool {
    SHIM_SYMBOLS.contains(&s)
}

/// A piece of a `{i}` template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplatePart<'a> {
    Text(&'a str),
    Hole(usize),
}

/// Splits a template into text and `{digits}` holes. Braces not enclosing
/// digits are literal text.
pub fn template_parts(text: &str) -> Vec<TemplatePart<'_>> {
    let mut parts = Vec::new();
    let bytes = text.as_bytes();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'{' {
            let mut j = i + 1;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > i + 1 && j < bytes.len() && bytes[j] == b'}' {
                if start < i {
                    parts.push(TemplatePart::Text(&text[start..i]));
                }
                parts.push(TemplatePart::Hole(text[i + 1..j].parse().unwrap_or(usize::MAX)));
                i = j + 1;
                start = i;
                continue;
            }
        }
        i += 1;
    }
    if start < text.len() {
        parts.push(TemplatePart::Text(&text[start..]));
    }
    parts
}

/// Holes `{0}..{n-1}` each appear at most once and `n` is the argument count.
pub fn template_is_well_formed(text: &str, argc: usize) -> bool {
    let mut seen = vec![false; argc];
    for p in template_parts(text) {
        if let TemplatePart::Hole(i) = p {
            if i >= argc || seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

/// The expression a template denotes: a `return e;` body is unwrapped.
pub fn template_expression(text: &str) -> &str {
    let t = text.trim();
    match t.strip_prefix("return ") {
        Some(rest) => rest.trim_end().trim_end_matches(';').trim_end(),
        None => t,
    }
}

/// Substitutes emitted argument text into the template expression.
pub fn splice(text: &str, args: &[String]) -> String {
    template_parts(template_expression(text))
        .into_iter()
        .map(|p| match p {
            TemplatePart::Text(t) => t.to_string(),
            TemplatePart::Hole(i) => args.get(i).cloned().unwrap_or_else(|| "undefined".into()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holes_and_literal_braces() {
        assert_eq!(
            template_parts("{a: {0}, b: {1}}"),
            vec![
                TemplatePart::Text("{a: "),
                TemplatePart::Hole(0),
                TemplatePart::Text(", b: "),
                TemplatePart::Hole(1),
                TemplatePart::Text("}"),
            ]
        );
        assert!(template_is_well_formed("{}", 0));
        assert!(template_is_well_formed("return {0}*1.0;", 1));
        assert!(!template_is_well_formed("{0}+{0}", 1));
        assert!(!template_is_well_formed("{0}", 2));
    }

    #[test]
    fn splicing() {
        assert_eq!(splice("return {0}*1.0;", &["x".into()]), "x*1.0");
        assert_eq!(splice("{0}", &["q".into()]), "q");
    }
}
