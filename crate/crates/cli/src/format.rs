//! The `gammaring v1` instance text format.
//!
//! ```text
//! # name: dual-numbers-2        (optional comment metadata)
//! gammaring v1
//! M: 2 2
//! G: 2
//! T 0 0 0 : 1 0
//! ```
//!
//! `M:`/`G:` list cyclic moduli; each `T i j k : x_1 ... x_r` line gives one
//! nonzero structure-tensor entry (generator i of M, j of Gamma, k of M).
//! Omitted entries are zero. `#` starts a comment. Emission is canonical:
//! entries sorted by (i, j, k), coordinates reduced, one space between
//! tokens, so parse/emit round-trips byte-exactly.

use gammaring_core::{Element, Error, FinAbGroup, GammaRing, Result};

pub const HEADER: &str = "gammaring v1";

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_moduli(line_no: usize, rest: &str) -> Result<Vec<u64>> {
    rest.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| parse_err(line_no, format!("bad modulus token `{tok}`")))
        })
        .collect()
}

/// Parses the text format into a built, well-definedness-checked instance.
/// Associativity is validated lazily by callers (`--skip-assoc` skips it).
pub fn parse_instance(text: &str) -> Result<GammaRing> {
    let mut name: Option<String> = None;
    let mut header_seen = false;
    let mut m: Option<FinAbGroup> = None;
    let mut g: Option<FinAbGroup> = None;
    let mut entries: Vec<(usize, usize, usize, Vec<u64>, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if let Some(comment) = raw.trim_start().strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("name:") {
                name = Some(n.trim().to_string());
            }
            continue;
        }
        let line = match raw.find('#') {
            Some(pos) => raw[..pos].trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            if line != HEADER {
                return Err(parse_err(line_no, format!("expected header `{HEADER}`")));
            }
            header_seen = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("M:") {
            if m.is_some() {
                return Err(parse_err(line_no, "duplicate M: line"));
            }
            m = Some(FinAbGroup::new(parse_moduli(line_no, rest)?).map_err(|e| {
                parse_err(line_no, format!("invalid M moduli: {e}"))
            })?);
        } else if let Some(rest) = line.strip_prefix("G:") {
            if g.is_some() {
                return Err(parse_err(line_no, "duplicate G: line"));
            }
            g = Some(FinAbGroup::new(parse_moduli(line_no, rest)?).map_err(|e| {
                parse_err(line_no, format!("invalid G moduli: {e}"))
            })?);
        } else if let Some(rest) = line.strip_prefix('T') {
            let (head, tail) = rest
                .split_once(':')
                .ok_or_else(|| parse_err(line_no, "T line missing `:`"))?;
            let idxs: Vec<usize> = head
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| parse_err(line_no, format!("bad index token `{tok}`")))
                })
                .collect::<Result<_>>()?;
            if idxs.len() != 3 {
                return Err(parse_err(line_no, "T line needs exactly 3 indices"));
            }
            let coords = parse_moduli(line_no, tail)?;
            entries.push((idxs[0], idxs[1], idxs[2], coords, line_no));
        } else {
            return Err(parse_err(line_no, format!("unrecognized line `{line}`")));
        }
    }

    if !header_seen {
        return Err(parse_err(0, format!("missing header `{HEADER}`")));
    }
    let m = m.ok_or_else(|| parse_err(0, "missing M: line"))?;
    let g = g.ok_or_else(|| parse_err(0, "missing G: line"))?;

    let km = m.rank();
    let kg = g.rank();
    let mut tensor = vec![vec![vec![m.zero(); km]; kg]; km];
    let mut seen = std::collections::BTreeSet::new();
    for (i, j, k, coords, line_no) in entries {
        if i >= km || j >= kg || k >= km {
            return Err(parse_err(line_no, "tensor index out of range"));
        }
        if !seen.insert((i, j, k)) {
            return Err(parse_err(line_no, format!("duplicate tensor entry ({i},{j},{k})")));
        }
        if coords.len() != km {
            return Err(parse_err(
                line_no,
                format!("entry needs {km} coordinates, got {}", coords.len()),
            ));
        }
        for (c, &d) in coords.iter().zip(m.moduli()) {
            if *c >= d {
                return Err(parse_err(line_no, format!("coordinate {c} not reduced mod {d}")));
            }
        }
        tensor[i][j][k] = Element::new(coords);
    }

    GammaRing::build(m, g, tensor, name)
}

fn fmt_nums<I: IntoIterator<Item = u64>>(nums: I) -> String {
    nums.into_iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Emits the canonical form: optional name comment, header, moduli lines,
/// then the nonzero tensor entries sorted by (i, j, k).
pub fn emit_instance(gr: &GammaRing) -> String {
    let m = gr.m_group();
    let g = gr.g_group();
    let mut out = String::new();
    if let Some(name) = gr.name() {
        out.push_str(&format!("# name: {name}\n"));
    }
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("M: {}\n", fmt_nums(m.moduli().iter().copied())));
    out.push_str(&format!("G: {}\n", fmt_nums(g.moduli().iter().copied())));
    for i in 0..m.rank() {
        for j in 0..g.rank() {
            for k in 0..m.rank() {
                let entry = gr.tensor_entry(i, j, k);
                if !m.is_zero(entry) {
                    out.push_str(&format!(
                        "T {i} {j} {k} : {}\n",
                        fmt_nums(entry.coords.iter().copied())
                    ));
                }
            }
        }
    }
    out
}
