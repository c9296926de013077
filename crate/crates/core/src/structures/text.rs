//! Plain-text structure files.
//!
//! ```text
//! # comment
//! structure K2
//! domain 2
//! relation E/2
//! 0 1
//! 1 0
//! end
//! ```

use std::fmt::Write;

use super::{is_identifier, Element, Structure, Symbol};
use crate::error::{Error, Result};

pub fn parse_structure(text: &str) -> Result<Structure> {
    parse_structure_named(text).map(|(_, s)| s)
}

/// Parses a structure file, returning the declared name (`S` when absent).
pub fn parse_structure_named(text: &str) -> Result<(String, Structure)> {
    let mut name: Option<String> = None;
    let mut domain: Option<usize> = None;
    let mut relations: Vec<(Symbol, Vec<Vec<Element>>)> = Vec::new();
    let mut open: Option<(Symbol, Vec<Vec<Element>>, usize)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let indent = raw.len() - raw.trim_start().len();
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let col = indent + 1;
        if let Some((symbol, tuples, _)) = open.as_mut() {
            if line == "end" {
                let (symbol, tuples, _) = open.take().unwrap();
                relations.push((symbol, tuples));
                continue;
            }
            let n = domain.expect("domain precedes relations");
            let mut tuple = Vec::with_capacity(symbol.arity);
            let mut offset = 0;
            for tok in line.split_whitespace() {
                let tok_col = col + line[offset..].find(tok).unwrap() + offset;
                offset = tok_col - col + tok.len();
                let e: Element = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, tok_col, format!("expected an element, found `{tok}`")))?;
                if e >= n {
                    return Err(Error::parse(
                        line_no,
                        tok_col,
                        format!("element {e} outside domain of size {n}"),
                    ));
                }
                tuple.push(e);
            }
            if tuple.len() != symbol.arity {
                return Err(Error::parse(
                    line_no,
                    col,
                    format!(
                        "`{}` has arity {}, tuple has {} entries",
                        symbol.name,
                        symbol.arity,
                        tuple.len()
                    ),
                ));
            }
            tuples.push(tuple);
            continue;
        }

        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        let arg_col = col + line.len() - rest.len();
        match keyword {
            "structure" => {
                if name.is_some() || domain.is_some() {
                    return Err(Error::parse(line_no, col, "`structure` must come first and only once"));
                }
                if !is_identifier(rest) {
                    return Err(Error::parse(line_no, arg_col, format!("invalid structure name `{rest}`")));
                }
                name = Some(rest.to_string());
            }
            "domain" => {
                if domain.is_some() {
                    return Err(Error::parse(line_no, col, "duplicate `domain` line"));
                }
                let n: usize = rest
                    .parse()
                    .map_err(|_| Error::parse(line_no, arg_col, format!("invalid domain size `{rest}`")))?;
                if n == 0 {
                    return Err(Error::parse(line_no, arg_col, "the domain must be nonempty"));
                }
                domain = Some(n);
            }
            "relation" => {
                if domain.is_none() {
                    return Err(Error::parse(line_no, col, "`domain` must precede relations"));
                }
                let (rname, arity) = rest
                    .split_once('/')
                    .ok_or_else(|| Error::parse(line_no, arg_col, "expected `Name/arity`"))?;
                let rname = rname.trim();
                if !is_identifier(rname) {
                    return Err(Error::parse(line_no, arg_col, format!("invalid relation name `{rname}`")));
                }
                let arity: usize = arity
                    .trim()
                    .parse()
                    .ok()
                    .filter(|&a| a > 0)
                    .ok_or_else(|| Error::parse(line_no, arg_col, format!("invalid arity in `{rest}`")))?;
                if relations.iter().any(|(s, _)| s.name == rname) {
                    return Err(Error::parse(line_no, arg_col, format!("relation `{rname}` declared twice")));
                }
                let cells = (domain.unwrap() as f64).powi(arity as i32);
                if cells > super::MAX_RELATION_CELLS as f64 {
                    return Err(Error::parse(line_no, arg_col, "relation space too large"));
                }
                open = Some((Symbol::new(rname, arity), Vec::new(), line_no));
            }
            other => {
                return Err(Error::parse(line_no, col, format!("unexpected `{other}`")));
            }
        }
    }
    if let Some((symbol, _, line)) = open {
        return Err(Error::parse(
            line,
            1,
            format!("relation `{}` is missing `end`", symbol.name),
        ));
    }
    let n = domain.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `domain` line"))?;
    let s = Structure::from_relations(n, relations.into_iter().map(|(s, t)| (s.name, s.arity, t)))?;
    Ok((name.unwrap_or_else(|| "S".to_string()), s))
}

pub fn render_structure(s: &Structure) -> String {
    render_structure_named("S", s)
}

/// Canonical text: symbols by name, tuples in lexicographic order.
pub fn render_structure_named(name: &str, s: &Structure) -> String {
    let mut out = String::new();
    writeln!(out, "structure {name}").unwrap();
    writeln!(out, "domain {}", s.size()).unwrap();
    for (sym, rel) in s.signature().symbols().iter().zip(s.relations()) {
        writeln!(out, "relation {}/{}", sym.name, sym.arity).unwrap();
        for t in rel.tuples() {
            let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", parts.join(" ")).unwrap();
        }
        writeln!(out, "end").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const K2: &str = "# the edge\nstructure K2\ndomain 2\nrelation E/2\n0 1\n1 0\nend\n";

    #[test]
    fn parses_k2() {
        let (name, s) = parse_structure_named(K2).unwrap();
        assert_eq!(name, "K2");
        assert_eq!(s.size(), 2);
        assert!(s.holds("E", &[1, 0]));
        assert!(!s.holds("E", &[0, 0]));
    }

    #[test]
    fn render_round_trip() {
        let text = "structure T\ndomain 3\nrelation Q/1\n2\nend\nrelation E/2\n2 0\n0 1\nend\n";
        let (name, s) = parse_structure_named(text).unwrap();
        let rendered = render_structure_named(&name, &s);
        assert_eq!(
            rendered,
            "structure T\ndomain 3\nrelation E/2\n0 1\n2 0\nend\nrelation Q/1\n2\nend\n"
        );
        assert_eq!(parse_structure(&rendered).unwrap(), s);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_structure("domain 2\nrelation E/2\n0 5\nend\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                column: 3,
                message: "element 5 outside domain of size 2".into()
            }
        );
        assert!(matches!(
            parse_structure("domain 2\nrelation E/2\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_structure("relation E/2\nend\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_structure("domain 2\nrelation E/0\nend\n").is_err());
        assert!(parse_structure("domain 2\nrelation E/2\n0\nend\n").is_err());
        assert!(parse_structure("").is_err());
        assert!(parse_structure("domain 100000\nrelation E/4\nend\n").is_err());
    }
}
