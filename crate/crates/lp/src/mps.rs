//! Fixed-format MPS writer and reader.
//!
//! Layout of a data line (1-based columns):
//!
//! | field | columns | content |
//! |-------|---------|---------|
//! | 1     | 2-3     | row type or bound type |
//! | 2     | 5-12    | name |
//! | 3     | 15-22   | name |
//! | 4     | 25-36   | number |
//!
//! One coefficient is written per line. Names longer than eight characters are cut to eight
//! and, on collision, replaced by a prefix plus `~` and a base-36 counter, assigned in order
//! of appearance so the output is deterministic. Whitespace inside names becomes `_`.
//! Numbers use the shortest text that parses back to the same `f64`; the rare value that
//! needs more than twelve characters extends past column 36 rather than losing precision.
//!
//! The objective row is `COST` (type `N`) and the problem is always a minimisation. Variables
//! with the default bounds `[0, +inf)` produce no `BOUNDS` entries, and the section is omitted
//! when no variable needs one. The reader splits lines on whitespace, so it also accepts
//! free-format files that use the same sections. `RANGES` and integer markers are rejected.
use crate::error::LpError;
use crate::problem::{Sense, StandardFormLP, VarId};
use std::collections::{HashMap, HashSet};
use std::fmt::Write;

const FIELD: usize = 8;
const OBJ_ROW: &str = "COST";

fn base36(mut k: usize) -> String {
    const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";
    let mut out = Vec::new();
    loop {
        out.push(DIGITS[k % 36]);
        k /= 36;
        if k == 0 {
            break;
        }
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Assigns unique names of at most eight characters.
struct Namer {
    used: HashSet<String>,
}

impl Namer {
    fn new(reserved: &[&str]) -> Self {
        Self {
            used: reserved.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn assign(&mut self, raw: &str) -> String {
        let clean: String = raw
            .chars()
            .map(|c| if c.is_ascii_graphic() { c } else { '_' })
            .collect();
        let clean = if clean.is_empty() { "_".to_string() } else { clean };
        if clean.len() <= FIELD && !self.used.contains(&clean) {
            self.used.insert(clean.clone());
            return clean;
        }
        let mut k = 0;
        loop {
            let suffix = format!("~{}", base36(k));
            let keep = FIELD - suffix.len();
            let candidate = format!("{}{}", &clean[..clean.len().min(keep)], suffix);
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
            k += 1;
        }
    }
}

/// Shortest text that round-trips to the same value.
fn num(v: f64) -> String {
    let plain = format!("{v}");
    let exp = format!("{v:e}");
    if exp.len() < plain.len() {
        exp
    } else {
        plain
    }
}

fn line(out: &mut String, kind: &str, a: &str, b: &str, value: Option<f64>) {
    let mut s = format!(" {kind:<2} {a:<8}");
    if !b.is_empty() || value.is_some() {
        let _ = write!(s, "  {b:<8}");
    }
    if let Some(v) = value {
        let _ = write!(s, "  {:>12}", num(v));
    }
    out.push_str(s.trim_end());
    out.push('\n');
}

pub fn export_mps(lp: &StandardFormLP, name: &str) -> Result<String, LpError> {
    lp.validate()?;
    let mut rows = Namer::new(&[OBJ_ROW]);
    let row_names: Vec<String> = lp.rows.iter().map(|r| rows.assign(&r.name)).collect();
    let mut cols = Namer::new(&[]);
    let col_names: Vec<String> = lp.vars.iter().map(|v| cols.assign(&v.name)).collect();

    // Column-major entries.
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lp.num_vars()];
    for (i, r) in lp.rows.iter().enumerate() {
        for &(v, a) in &r.coeffs {
            by_col[v.0].push((i, a));
        }
    }

    let mut out = String::new();
    let title: String = name.chars().map(|c| if c.is_whitespace() { '_' } else { c }).collect();
    let _ = writeln!(out, "NAME          {title}");
    out.push_str("ROWS\n");
    line(&mut out, "N", OBJ_ROW, "", None);
    for (r, rn) in lp.rows.iter().zip(&row_names) {
        let t = match r.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        line(&mut out, t, rn, "", None);
    }
    out.push_str("COLUMNS\n");
    for (j, v) in lp.vars.iter().enumerate() {
        let cn = &col_names[j];
        if v.cost != 0.0 || by_col[j].is_empty() {
            line(&mut out, "", cn, OBJ_ROW, Some(v.cost));
        }
        for &(i, a) in &by_col[j] {
            line(&mut out, "", cn, &row_names[i], Some(a));
        }
    }
    out.push_str("RHS\n");
    for (r, rn) in lp.rows.iter().zip(&row_names) {
        if r.rhs != 0.0 {
            line(&mut out, "", "RHS", rn, Some(r.rhs));
        }
    }
    let mut bounds = String::new();
    for (v, cn) in lp.vars.iter().zip(&col_names) {
        let (lo, hi) = (v.lower, v.upper);
        if lo == hi {
            line(&mut bounds, "FX", "BND", cn, Some(lo));
            continue;
        }
        match (lo.is_finite(), hi.is_finite()) {
            (false, false) => line(&mut bounds, "FR", "BND", cn, None),
            (false, true) => {
                line(&mut bounds, "MI", "BND", cn, None);
                line(&mut bounds, "UP", "BND", cn, Some(hi));
            }
            (true, fin_hi) => {
                // Signed zero matters for bit-exact round trips.
                if lo != 0.0 || lo.is_sign_negative() {
                    line(&mut bounds, "LO", "BND", cn, Some(lo));
                }
                if fin_hi {
                    line(&mut bounds, "UP", "BND", cn, Some(hi));
                }
            }
        }
    }
    if !bounds.is_empty() {
        out.push_str("BOUNDS\n");
        out.push_str(&bounds);
    }
    out.push_str("ENDATA\n");
    Ok(out)
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Bounds,
    End,
}

pub fn parse_mps(text: &str) -> Result<StandardFormLP, LpError> {
    let mut lp = StandardFormLP::new("");
    let mut section = Section::None;
    let mut obj_row: Option<String> = None;
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut row_coeffs: Vec<Vec<(VarId, f64)>> = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let err = |msg: String| LpError::Mps { line: ln, msg };
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            section = match toks[0] {
                "NAME" => {
                    lp.name = toks.get(1).map(|s| s.to_string()).unwrap_or_default();
                    Section::None
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                other => return Err(err(format!("unsupported section {other}"))),
            };
            continue;
        }
        let parse_num = |s: &str| -> Result<f64, LpError> {
            s.parse::<f64>()
                .map_err(|_| err(format!("bad number {s:?}")))
        };
        match section {
            Section::Rows => {
                let [kind, name] = toks[..] else {
                    return Err(err("expected row type and name".into()));
                };
                let sense = match kind {
                    "N" => {
                        if obj_row.is_none() {
                            obj_row = Some(name.to_string());
                        }
                        continue;
                    }
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    other => return Err(err(format!("unknown row type {other}"))),
                };
                if row_index.insert(name.to_string(), lp.rows.len()).is_some() {
                    return Err(err(format!("duplicate row {name}")));
                }
                lp.add_row(name, [], sense, 0.0);
                row_coeffs.push(Vec::new());
            }
            Section::Columns => {
                if toks.len() < 3 || toks.len() % 2 == 0 {
                    return Err(err("expected column name and (row, value) pairs".into()));
                }
                if toks.contains(&"'MARKER'") {
                    return Err(err("integer markers are not supported".into()));
                }
                let col = toks[0];
                let j = match col_index.get(col) {
                    Some(&j) => j,
                    None => {
                        let v = lp.add_var(col, 0.0, 0.0, f64::INFINITY);
                        col_index.insert(col.to_string(), v.0);
                        v.0
                    }
                };
                for pair in toks[1..].chunks(2) {
                    let value = parse_num(pair[1])?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        lp.vars[j].cost = value;
                    } else if let Some(&i) = row_index.get(pair[0]) {
                        if value != 0.0 {
                            row_coeffs[i].push((VarId(j), value));
                        }
                    } else {
                        return Err(err(format!("unknown row {}", pair[0])));
                    }
                }
            }
            Section::Rhs => {
                // The RHS set name is optional in free files; pairs follow it.
                let pairs = if toks.len() % 2 == 1 { &toks[1..] } else { &toks[..] };
                for pair in pairs.chunks(2) {
                    let value = parse_num(pair[1])?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        continue;
                    }
                    let &i = row_index
                        .get(pair[0])
                        .ok_or_else(|| err(format!("unknown row {}", pair[0])))?;
                    lp.rows[i].rhs = value;
                }
            }
            Section::Bounds => {
                if toks.len() < 3 {
                    return Err(err("expected bound type, set name and column".into()));
                }
                let &j = col_index
                    .get(toks[2])
                    .ok_or_else(|| err(format!("unknown column {}", toks[2])))?;
                let value = || -> Result<f64, LpError> {
                    let s = toks.get(3).ok_or_else(|| err("missing bound value".into()))?;
                    parse_num(s)
                };
                let v = &mut lp.vars[j];
                match toks[0] {
                    "UP" => v.upper = value()?,
                    "LO" => v.lower = value()?,
                    "FX" => {
                        let b = value()?;
                        v.lower = b;
                        v.upper = b;
                    }
                    "FR" => {
                        v.lower = f64::NEG_INFINITY;
                        v.upper = f64::INFINITY;
                    }
                    "MI" => v.lower = f64::NEG_INFINITY,
                    "PL" => v.upper = f64::INFINITY,
                    other => return Err(err(format!("unsupported bound type {other}"))),
                }
            }
            Section::None | Section::End => {
                return Err(err("data line outside a section".into()));
            }
        }
    }
    if section != Section::End {
        return Err(LpError::Mps {
            line: text.lines().count(),
            msg: "missing ENDATA".into(),
        });
    }
    for (row, coeffs) in lp.rows.iter_mut().zip(row_coeffs) {
        row.coeffs = coeffs;
    }
    // Re-normalise through add_row's merge rules.
    let rows = std::mem::take(&mut lp.rows);
    for r in rows {
        lp.add_row(r.name, r.coeffs, r.sense, r.rhs);
    }
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn long_names_are_truncated_uniquely() {
        let mut n = Namer::new(&[]);
        let a = n.assign("solar_build_county_01");
        let b = n.assign("solar_build_county_02");
        let c = n.assign("short");
        assert_eq!(a, "solar_~0");
        assert_eq!(b, "solar_~1");
        assert_eq!(c, "short");
        assert!(a.len() <= 8 && b.len() <= 8);
    }

    #[test]
    fn reserved_objective_name_is_not_reused() {
        let mut n = Namer::new(&[OBJ_ROW]);
        assert_ne!(n.assign("COST"), "COST");
    }

    #[test]
    fn numbers_round_trip_exactly() {
        for v in [0.1, 1e-300, 123456789.125, -3.0000000000000004, 2.5e17, f64::MIN_POSITIVE] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(1e-7), "1e-7");
        assert_eq!(num(12.5), "12.5");
    }

    #[test]
    fn fixed_columns_line_up() {
        let mut s = String::new();
        line(&mut s, "UP", "BND", "x1", Some(4.0));
        assert_eq!(s, " UP BND       x1                   4\n");
        assert_eq!(&s[24..36], "           4");
    }

    #[test]
    fn default_bounds_emit_no_bounds_section() {
        let mut lp = StandardFormLP::new("t");
        let x = lp.add_var("x", 1.0, 0.0, f64::INFINITY);
        lp.add_row("r", [(x, 1.0)], Sense::Ge, 1.0);
        let text = export_mps(&lp, "t").unwrap();
        assert!(!text.contains("BOUNDS"));
        assert_eq!(parse_mps(&text).unwrap().vars, lp.vars);
    }

    #[test]
    fn rejects_ranges() {
        let text = "NAME x\nROWS\n N COST\nRANGES\nENDATA\n";
        assert!(matches!(parse_mps(text), Err(LpError::Mps { line: 4, .. })));
    }
}
