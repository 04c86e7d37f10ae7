//! Text formats for groups: the `SPEC` mini-language and table files.
//!
//! ```text
//! cyclic:N | dihedral:N | elemab:P^K | product(SPEC,SPEC) | table:PATH
//! ```
//!
//! A table file holds the order on its first line followed by one
//! whitespace-separated row of the multiplication table per line.

use super::{direct_product, FiniteGroup};
use crate::{Error, Result};

fn parse_number(text: &str, what: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected {what}, found `{text}`")))
}

/// Parses a group specification such as `product(dihedral:3,cyclic:2)`.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("cyclic:") {
        let n = parse_number(rest, "a cyclic order")?;
        if n == 0 {
            return Err(Error::Parse("cyclic order must be positive".into()));
        }
        return Ok(FiniteGroup::cyclic(n));
    }
    if let Some(rest) = spec.strip_prefix("dihedral:") {
        let n = parse_number(rest, "a dihedral degree")?;
        if n < 2 {
            return Err(Error::Parse("dihedral degree must be at least 2".into()));
        }
        return Ok(FiniteGroup::dihedral(n));
    }
    if let Some(rest) = spec.strip_prefix("elemab:") {
        let (p, k) = rest
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("expected P^K, found `{rest}`")))?;
        let p = parse_number(p, "a prime")?;
        let k = parse_number(k, "an exponent")?;
        return FiniteGroup::elementary_abelian(p, k as u32)
            .map_err(|e| Error::Parse(e.to_string()));
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let text = std::fs::read_to_string(path.trim())?;
        return parse_table_text(&text, &format!("table:{}", path.trim()));
    }
    if let Some(inner) = spec.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
        let mut depth = 0usize;
        let split = inner.char_indices().find_map(|(i, c)| {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => return Some(i),
                _ => {}
            }
            None
        });
        let i = split.ok_or_else(|| Error::Parse(format!("expected two factors in `{spec}`")))?;
        let left = parse_group_spec(&inner[..i])?;
        let right = parse_group_spec(&inner[i + 1..])?;
        return Ok(direct_product(&left, &right));
    }
    Err(Error::Parse(format!("unrecognised group spec `{spec}`")))
}

/// Parses the table file format.
pub fn parse_table_text(text: &str, label: &str) -> Result<FiniteGroup> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let order = parse_number(
        lines.next().ok_or_else(|| Error::Parse("empty table file".into()))?,
        "the group order",
    )?;
    let mut table = Vec::with_capacity(order);
    for line in lines {
        let row = line
            .split_whitespace()
            .map(|t| parse_number(t, "an element id"))
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    if table.len() != order {
        return Err(Error::Parse(format!(
            "expected {order} table rows, found {}",
            table.len()
        )));
    }
    FiniteGroup::from_table(&table, label)
}

/// Serializes a group in the table file format.
pub fn table_to_text(g: &FiniteGroup) -> String {
    let mut out = format!("{}\n", g.order());
    for row in g.table() {
        let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
