//! MPS writer and parser.
//!
//! The writer emits column-aligned MPS with NAME / ROWS / COLUMNS (with
//! INTORG/INTEND markers) / RHS / RANGES / BOUNDS / ENDATA, one
//! coefficient per line, values in shortest-round-trip decimal so a
//! parse loses nothing. Names must be whitespace-free and at most 255
//! characters. A nonzero objective offset is carried as an RHS entry on
//! the objective row (negated), the convention industrial readers use.
//!
//! The parser accepts the writer's output plus the common extras:
//! two-coefficient COLUMNS lines, FR/BV/MI/PL bounds, and RANGES entries
//! (a ranged row parses into the original row plus a `<name>.rng`
//! companion closing the other side).

use super::SolverError;
use crate::formulation::{LinearProgram, LpBuilder, Sense};
use std::fmt::Write as _;

const OBJ_ROW: &str = "COST";

fn check_name(name: &str) -> Result<(), SolverError> {
    if name.is_empty() || name.len() > 255 || name.chars().any(char::is_whitespace) {
        return Err(SolverError::Mps(format!(
            "name `{name}` not representable in MPS (empty, too long, or contains whitespace)"
        )));
    }
    Ok(())
}

/// Serialize an LP as MPS text.
pub fn export_mps(lp: &LinearProgram) -> Result<String, SolverError> {
    let mut seen = std::collections::HashSet::new();
    for v in &lp.variables {
        check_name(&v.name)?;
        if !seen.insert(v.name.as_str()) {
            return Err(SolverError::Mps(format!("duplicate variable name `{}`", v.name)));
        }
    }
    seen.clear();
    for c in &lp.constraints {
        check_name(&c.name)?;
        if c.name == OBJ_ROW {
            return Err(SolverError::Mps(format!("row name `{OBJ_ROW}` is reserved for the objective")));
        }
        if !seen.insert(c.name.as_str()) {
            return Err(SolverError::Mps(format!("duplicate constraint name `{}`", c.name)));
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "NAME          {}", if lp.name.is_empty() { "LP" } else { &lp.name });
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N  {OBJ_ROW}");
    for c in &lp.constraints {
        let code = match c.sense {
            Sense::Le => 'L',
            Sense::Ge => 'G',
            Sense::Eq => 'E',
        };
        let _ = writeln!(out, " {code}  {}", c.name);
    }

    // objective coefficients per variable
    let mut obj = vec![0.0; lp.num_vars()];
    for &(j, c) in &lp.objective {
        obj[j] += c;
    }
    // constraint coefficients grouped by column
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lp.num_vars()];
    for (i, c) in lp.constraints.iter().enumerate() {
        for &(j, a) in &c.terms {
            by_col[j].push((i, a));
        }
    }

    out.push_str("COLUMNS\n");
    let mut in_int_block = false;
    let mut marker = 0usize;
    for (j, v) in lp.variables.iter().enumerate() {
        if v.is_integer != in_int_block {
            let kind = if v.is_integer { "'INTORG'" } else { "'INTEND'" };
            let _ = writeln!(out, "    MARKER{marker:04}                 'MARKER'                 {kind}");
            marker += 1;
            in_int_block = v.is_integer;
        }
        // every column appears at least once so the parser learns it
        if obj[j] != 0.0 || by_col[j].is_empty() {
            let _ = writeln!(out, "    {:<10}{:<10}{}", v.name, OBJ_ROW, fmt_val(obj[j]));
        }
        for &(i, a) in &by_col[j] {
            let _ = writeln!(out, "    {:<10}{:<10}{}", v.name, lp.constraints[i].name, fmt_val(a));
        }
    }
    if in_int_block {
        let _ = writeln!(out, "    MARKER{marker:04}                 'MARKER'                 'INTEND'");
    }

    out.push_str("RHS\n");
    if lp.objective_offset != 0.0 {
        let _ = writeln!(out, "    RHS       {:<10}{}", OBJ_ROW, fmt_val(-lp.objective_offset));
    }
    for c in &lp.constraints {
        if c.rhs != 0.0 {
            let _ = writeln!(out, "    RHS       {:<10}{}", c.name, fmt_val(c.rhs));
        }
    }
    out.push_str("RANGES\n");
    out.push_str("BOUNDS\n");
    for v in &lp.variables {
        let (lo, up) = (v.lower, v.upper);
        if lo == up {
            let _ = writeln!(out, " FX BND       {:<10}{}", v.name, fmt_val(lo));
            continue;
        }
        if lo.is_infinite() && up.is_infinite() {
            let _ = writeln!(out, " FR BND       {}", v.name);
            continue;
        }
        if lo.is_infinite() {
            let _ = writeln!(out, " MI BND       {}", v.name);
        } else if lo != 0.0 {
            let _ = writeln!(out, " LO BND       {:<10}{}", v.name, fmt_val(lo));
        }
        if up.is_finite() {
            let _ = writeln!(out, " UP BND       {:<10}{}", v.name, fmt_val(up));
        }
    }
    out.push_str("ENDATA\n");
    Ok(out)
}

fn fmt_val(v: f64) -> String {
    // shortest round-trip; tokens like `0.35` or `1e300` re-parse exactly
    format!("{v}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Section {
    Start,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    Done,
}

/// Parse MPS text into a [`LinearProgram`].
pub fn parse_mps(text: &str) -> Result<LinearProgram, SolverError> {
    use std::collections::HashMap;

    let err = |line_no: usize, msg: &str| SolverError::Mps(format!("line {}: {msg}", line_no + 1));

    let mut name = String::from("LP");
    let mut section = Section::Start;
    let mut obj_row: Option<String> = None;
    // name -> (sense, rhs, range, terms)
    let mut row_order: Vec<String> = Vec::new();
    let mut rows: HashMap<String, (Sense, f64, Option<f64>, Vec<(usize, f64)>)> = HashMap::new();
    let mut var_order: Vec<String> = Vec::new();
    let mut vars: HashMap<String, usize> = HashMap::new();
    // lower, upper, integer, explicit-lower flag
    let mut bounds: Vec<(f64, f64, bool, bool)> = Vec::new();
    let mut objective: Vec<(usize, f64)> = Vec::new();
    let mut objective_offset = 0.0;
    let mut in_int_block = false;

    for (line_no, raw) in text.lines().enumerate() {
        if raw.starts_with('*') || raw.trim().is_empty() {
            continue;
        }
        let is_header = !raw.starts_with(' ') && !raw.starts_with('\t');
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if is_header {
            section = match tokens[0] {
                "NAME" => {
                    if tokens.len() > 1 {
                        name = tokens[1].to_string();
                    }
                    Section::Start
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::Done,
                "OBJSENSE" => Section::Start, // minimisation assumed; tolerated
                other => return Err(err(line_no, &format!("unknown section `{other}`"))),
            };
            continue;
        }
        match section {
            Section::Start | Section::Done => continue,
            Section::Rows => {
                if tokens.len() != 2 {
                    return Err(err(line_no, "ROWS lines are `<type> <name>`"));
                }
                let rname = tokens[1].to_string();
                match tokens[0] {
                    "N" => {
                        if obj_row.is_none() {
                            obj_row = Some(rname);
                        }
                    }
                    t => {
                        let sense = match t {
                            "L" => Sense::Le,
                            "G" => Sense::Ge,
                            "E" => Sense::Eq,
                            _ => return Err(err(line_no, "row type must be N/L/G/E")),
                        };
                        if rows.insert(rname.clone(), (sense, 0.0, None, Vec::new())).is_some() {
                            return Err(err(line_no, "duplicate row"));
                        }
                        row_order.push(rname);
                    }
                }
            }
            Section::Columns => {
                if tokens.len() >= 3 && tokens[1] == "'MARKER'" {
                    match *tokens.last().unwrap() {
                        "'INTORG'" => in_int_block = true,
                        "'INTEND'" => in_int_block = false,
                        _ => return Err(err(line_no, "unknown marker")),
                    }
                    continue;
                }
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(err(line_no, "COLUMNS lines carry 1 or 2 (row, value) pairs"));
                }
                let vname = tokens[0];
                let j = *vars.entry(vname.to_string()).or_insert_with(|| {
                    var_order.push(vname.to_string());
                    bounds.push((0.0, f64::INFINITY, in_int_block, false));
                    var_order.len() - 1
                });
                for pair in tokens[1..].chunks(2) {
                    let value: f64 = pair[1].parse().map_err(|_| err(line_no, "bad numeric value"))?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        objective.push((j, value));
                    } else {
                        let row = rows
                            .get_mut(pair[0])
                            .ok_or_else(|| err(line_no, &format!("unknown row `{}`", pair[0])))?;
                        row.3.push((j, value));
                    }
                }
            }
            Section::Rhs => {
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(err(line_no, "RHS lines carry 1 or 2 (row, value) pairs"));
                }
                for pair in tokens[1..].chunks(2) {
                    let value: f64 = pair[1].parse().map_err(|_| err(line_no, "bad numeric value"))?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        objective_offset = -value;
                    } else {
                        let row = rows
                            .get_mut(pair[0])
                            .ok_or_else(|| err(line_no, &format!("unknown row `{}`", pair[0])))?;
                        row.1 = value;
                    }
                }
            }
            Section::Ranges => {
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(err(line_no, "RANGES lines carry 1 or 2 (row, value) pairs"));
                }
                for pair in tokens[1..].chunks(2) {
                    let value: f64 = pair[1].parse().map_err(|_| err(line_no, "bad numeric value"))?;
                    let row = rows
                        .get_mut(pair[0])
                        .ok_or_else(|| err(line_no, &format!("unknown row `{}`", pair[0])))?;
                    row.2 = Some(value);
                }
            }
            Section::Bounds => {
                let kind = tokens[0];
                if !matches!(kind, "UP" | "LO" | "FX" | "BV" | "MI" | "PL" | "FR") {
                    return Err(err(line_no, &format!("unsupported bound type `{kind}`")));
                }
                let (vname, value) = match tokens.len() {
                    3 => (tokens[2], None),
                    4 => (tokens[2], Some(tokens[3].parse::<f64>().map_err(|_| err(line_no, "bad bound value"))?)),
                    _ => return Err(err(line_no, "BOUNDS lines are `<type> <set> <var> [value]`")),
                };
                let &j = vars
                    .get(vname)
                    .ok_or_else(|| err(line_no, &format!("bound on unknown variable `{vname}`")))?;
                let b = &mut bounds[j];
                match (kind, value) {
                    ("UP", Some(v)) => {
                        b.1 = v;
                        // historic quirk: a negative upper with no explicit
                        // lower frees the lower bound
                        if v < 0.0 && !b.3 {
                            b.0 = f64::NEG_INFINITY;
                        }
                    }
                    ("LO", Some(v)) => {
                        b.0 = v;
                        b.3 = true;
                    }
                    ("FX", Some(v)) => {
                        b.0 = v;
                        b.1 = v;
                        b.3 = true;
                    }
                    ("MI", _) => {
                        b.0 = f64::NEG_INFINITY;
                        b.3 = true;
                    }
                    ("PL", _) => b.1 = f64::INFINITY,
                    ("BV", _) => {
                        b.0 = 0.0;
                        b.1 = 1.0;
                        b.2 = true;
                        b.3 = true;
                    }
                    ("FR", _) => {
                        b.0 = f64::NEG_INFINITY;
                        b.1 = f64::INFINITY;
                        b.3 = true;
                    }
                    _ => return Err(err(line_no, &format!("bound `{kind}` needs a value"))),
                }
            }
        }
    }

    if section != Section::Done {
        return Err(SolverError::Mps("missing ENDATA".into()));
    }

    let mut b = LpBuilder::new(name);
    for (j, vname) in var_order.iter().enumerate() {
        let (lo, up, int, _) = bounds[j];
        b.add_var(vname.clone(), lo, up, int)
            .map_err(|e| SolverError::Mps(e.to_string()))?;
    }
    for rname in &row_order {
        let (sense, rhs, range, terms) = rows.remove(rname).expect("collected above");
        b.add_constraint(rname.clone(), &terms, sense, rhs)
            .map_err(|e| SolverError::Mps(e.to_string()))?;
        if let Some(r) = range {
            // RANGES closes the other side of the row
            let (s2, rhs2) = match sense {
                Sense::Le => (Sense::Ge, rhs - r.abs()),
                Sense::Ge => (Sense::Le, rhs + r.abs()),
                Sense::Eq => {
                    if r >= 0.0 {
                        (Sense::Le, rhs + r)
                    } else {
                        (Sense::Ge, rhs + r)
                    }
                }
            };
            b.add_constraint(format!("{rname}.rng"), &terms, s2, rhs2)
                .map_err(|e| SolverError::Mps(e.to_string()))?;
        }
    }
    for (j, c) in objective {
        b.add_objective_term(j, c);
    }
    b.add_objective_offset(objective_offset);
    Ok(b.finish())
}
