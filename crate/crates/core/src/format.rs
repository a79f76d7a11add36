//! Line-oriented text format for tiling instances.
//!
//! ```text
//! # comment
//! dimension 2
//! translate
//!   basis 2 0
//!   basis 0 1
//!   offset 1 0
//! end
//! ```
//!
//! Each `basis` line is one generator; any number of generators spanning a
//! full-rank lattice is accepted and canonicalised. Integers are decimal and
//! unbounded. [`emit_instance`] writes translates sorted by determinant,
//! canonical basis and offset, with the canonical basis columns as generators.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeTranslate};
use crate::tiling::TilingInstance;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_ints(line: usize, field: &str, words: &[&str], dim: usize) -> Result<Vec<BigInt>> {
    if words.len() != dim {
        return Err(parse_err(line, format!("{field}: expected {dim} integers, found {}", words.len())));
    }
    words
        .iter()
        .map(|w| w.parse::<BigInt>().map_err(|_| parse_err(line, format!("{field}: '{w}' is not an integer"))))
        .collect()
}

struct Block {
    start: usize,
    generators: Vec<Vec<BigInt>>,
    offset: Option<Vec<BigInt>>,
}

pub fn parse_instance(text: &str) -> Result<TilingInstance> {
    let mut dim: Option<usize> = None;
    let mut block: Option<Block> = None;
    let mut translates = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some((&key, rest)) = words.split_first() else { continue };
        match key {
            "dimension" => {
                if dim.is_some() {
                    return Err(parse_err(line, "dimension given twice"));
                }
                let [w] = rest else { return Err(parse_err(line, "dimension: expected one integer")) };
                let d: usize = w.parse().map_err(|_| parse_err(line, format!("dimension: '{w}' is not a positive integer")))?;
                if d == 0 {
                    return Err(parse_err(line, "dimension must be positive"));
                }
                dim = Some(d);
            }
            "translate" => {
                if dim.is_none() {
                    return Err(parse_err(line, "translate before dimension"));
                }
                if block.is_some() {
                    return Err(parse_err(line, "translate inside an open translate block"));
                }
                if !rest.is_empty() {
                    return Err(parse_err(line, "translate takes no arguments"));
                }
                block = Some(Block { start: line, generators: Vec::new(), offset: None });
            }
            "basis" | "offset" => {
                let d = dim.expect("blocks open only after dimension");
                let b = block.as_mut().ok_or_else(|| parse_err(line, format!("{key} outside a translate block")))?;
                let v = parse_ints(line, key, rest, d)?;
                if key == "basis" {
                    b.generators.push(v);
                } else if b.offset.replace(v).is_some() {
                    return Err(parse_err(line, "offset given twice"));
                }
            }
            "end" => {
                let d = dim.expect("blocks open only after dimension");
                let b = block.take().ok_or_else(|| parse_err(line, "end without translate"))?;
                if !rest.is_empty() {
                    return Err(parse_err(line, "end takes no arguments"));
                }
                let l = Lattice::from_generators(d, &b.generators)
                    .map_err(|e| parse_err(b.start, format!("basis: {e}")))?;
                let off = b.offset.ok_or_else(|| parse_err(b.start, "translate has no offset"))?;
                translates.push((b.start, LatticeTranslate::new(l, &off)?));
            }
            other => return Err(parse_err(line, format!("unknown keyword '{other}'"))),
        }
    }
    if let Some(b) = block {
        return Err(parse_err(b.start, "translate block not closed by end"));
    }
    if dim.is_none() {
        return Err(parse_err(last.max(1), "missing dimension"));
    }
    let lines: Vec<usize> = translates.iter().map(|(l, _)| *l).collect();
    TilingInstance::new(translates.into_iter().map(|(_, t)| t).collect()).map_err(|e| match e {
        Error::DuplicateTranslate { first, second } => parse_err(
            lines[second],
            format!("translate repeats the one starting on line {}", lines[first]),
        ),
        Error::EmptyInstance => parse_err(last.max(1), "no translates"),
        e => e,
    })
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Canonical text; parsing it gives `t.sorted()`.
pub fn emit_instance(t: &TilingInstance) -> String {
    let mut out = format!("dimension {}\n", t.dim());
    for tr in t.sorted().translates() {
        out.push_str("translate\n");
        for c in tr.lattice().basis().columns() {
            out.push_str(&format!("  basis {}\n", join(&c)));
        }
        out.push_str(&format!("  offset {}\n", join(tr.offset())));
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::fixtures::four_lattice;

    const FOUR: &str = "\
# three-dimensional example
dimension 3
translate
  basis 2 0 0
  basis 0 2 0
  basis 0 0 1
  offset 1 0 0
end
translate
  basis 2 0 0
  basis 0 1 0
  basis 0 0 2
  offset 0 0 1
end
translate
  basis 1 0 0
  basis 0 2 0
  basis 0 0 2
  offset 0 1 0
end
translate   # redundant generators
  basis 2 0 0
  basis 0 2 0
  basis 0 0 2
  basis 1 1 1
  offset 2 2 2
end
";

    #[test]
    fn parses_example() {
        assert_eq!(parse_instance(FOUR).unwrap(), four_lattice());
    }

    #[test]
    fn round_trip() {
        let t = four_lattice();
        let text = emit_instance(&t);
        assert_eq!(parse_instance(&text).unwrap(), t.sorted());
        assert_eq!(emit_instance(&parse_instance(&text).unwrap()), text);
    }

    fn line_of(text: &str) -> usize {
        match parse_instance(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics_carry_lines() {
        assert_eq!(line_of("dimension 2\ntranslate\n  basis 1 x\n"), 3);
        assert_eq!(line_of("dimension 2\ntranslate\n  basis 1 0 0\n"), 3);
        assert_eq!(line_of("dimension 1\ntranslate\n  basis 2\nend\n"), 2);
        assert_eq!(line_of("dimension 1\ntranslate\n  basis 2\n  offset 0\n"), 2);
        assert_eq!(line_of("translate\n"), 1);
        assert_eq!(line_of("dimension 1\nfoo\n"), 2);
        assert_eq!(line_of("dimension 1\n"), 1);
        assert_eq!(
            line_of("dimension 1\ntranslate\nbasis 2\noffset 0\nend\ntranslate\nbasis 2\noffset 2\nend\n"),
            6
        );
        assert_eq!(line_of("dimension 2\ntranslate\nbasis 1 1\noffset 0 0\nend\n"), 2);
    }
}
