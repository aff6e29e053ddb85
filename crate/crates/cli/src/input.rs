//! Input file format: a small declarative description of the presentation
//! matrix or the generators.
//!
//! ```text
//! # comment lines start with '#'
//! vars: x y z
//! tvars: a b c d        (optional; defaults to T1..T{d+1})
//! matrix:
//! x, 0, 0
//! y, x, 0
//! z, y, x^2
//! 0, z, z^2
//! ```
//!
//! or `gens:` followed by d+1 polynomials, one per line. Matrix entries are
//! separated by commas (or plain whitespace when no entry contains spaces).

use reesb_core::corepoly::{parse_poly, Poly, Ring};
use reesb_core::rees::ReesInput;

#[derive(Debug)]
pub struct InputError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "input line {}: {}", self.line, self.msg)
    }
}

fn err(line: usize, msg: impl Into<String>) -> InputError {
    InputError {
        line,
        msg: msg.into(),
    }
}

fn parse_entry(text: &str, ring: &Ring, line: usize) -> Result<Poly, InputError> {
    let t = text.trim();
    if t == "0" {
        return Ok(Poly::zero(ring));
    }
    parse_poly(t, ring).map_err(|e| err(line, format!("in `{t}`: {e}")))
}

pub fn parse_input_file(text: &str) -> Result<ReesInput, InputError> {
    let mut xnames: Option<Vec<String>> = None;
    let mut tnames: Option<Vec<String>> = None;
    let mut matrix_rows: Vec<(usize, String)> = Vec::new();
    let mut gen_lines: Vec<(usize, String)> = Vec::new();
    let mut mode = 0u8; // 0 header, 1 matrix, 2 gens

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars:") {
            xnames = Some(rest.split_whitespace().map(|s| s.to_string()).collect());
            continue;
        }
        if let Some(rest) = line.strip_prefix("tvars:") {
            tnames = Some(rest.split_whitespace().map(|s| s.to_string()).collect());
            continue;
        }
        if line == "matrix:" {
            mode = 1;
            continue;
        }
        if line == "gens:" {
            mode = 2;
            continue;
        }
        match mode {
            1 => matrix_rows.push((lineno, line.to_string())),
            2 => gen_lines.push((lineno, line.to_string())),
            _ => return Err(err(lineno, format!("unexpected line `{line}`"))),
        }
    }

    let xnames = xnames.ok_or_else(|| err(0, "missing `vars:` line"))?;
    if xnames.is_empty() {
        return Err(err(0, "`vars:` names no variables"));
    }
    let refs: Vec<&str> = xnames.iter().map(|s| s.as_str()).collect();
    let xring = Ring::poly_ring(&refs);
    let d = xnames.len();

    if !matrix_rows.is_empty() && !gen_lines.is_empty() {
        return Err(err(0, "give either `matrix:` or `gens:`, not both"));
    }

    if !matrix_rows.is_empty() {
        let mut rows: Vec<Vec<Poly>> = Vec::new();
        for (lineno, row) in &matrix_rows {
            let parts: Vec<&str> = if row.contains(',') {
                row.split(',').collect()
            } else {
                row.split_whitespace().collect()
            };
            let mut out = Vec::with_capacity(parts.len());
            for p in parts {
                out.push(parse_entry(p, &xring, *lineno)?);
            }
            rows.push(out);
        }
        let nrows = rows.len();
        let tnames = tnames.unwrap_or_else(|| default_tnames(nrows));
        if tnames.len() != nrows {
            return Err(err(
                0,
                format!("{} tvars for {} matrix rows", tnames.len(), nrows),
            ));
        }
        return ReesInput::from_matrix(&xring, &tnames, rows)
            .map_err(|e| err(matrix_rows[0].0, e.to_string()));
    }

    if !gen_lines.is_empty() {
        if gen_lines.len() != d + 1 {
            return Err(err(
                gen_lines[0].0,
                format!("expected d+1 = {} generators, found {}", d + 1, gen_lines.len()),
            ));
        }
        let mut gens = Vec::with_capacity(gen_lines.len());
        for (lineno, g) in &gen_lines {
            gens.push(parse_entry(g, &xring, *lineno)?);
        }
        let tnames = tnames.unwrap_or_else(|| default_tnames(gens.len()));
        return ReesInput::from_gens(&xring, &tnames, gens)
            .map_err(|e| err(gen_lines[0].0, e.to_string()));
    }

    Err(err(0, "missing `matrix:` or `gens:` block"))
}

fn default_tnames(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("T{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_matrix_file() {
        let text = "\
# example file
vars: x y z
tvars: a b c d
matrix:
x, 0, 0
y, x, 0
z, y, x^2
0, z, z^2
";
        let input = parse_input_file(text).unwrap();
        assert_eq!(input.d(), 3);
        assert_eq!(input.nu().unwrap(), 4);
    }

    #[test]
    fn parses_whitespace_rows_and_default_tnames() {
        let text = "vars: x y z\nmatrix:\nx 0 0\ny x 0\nz y x^2\n0 z z^2\n";
        let input = parse_input_file(text).unwrap();
        assert_eq!(input.tnames(), &["T1", "T2", "T3", "T4"]);
    }

    #[test]
    fn reports_line_of_bad_entry() {
        let text = "vars: x y z\nmatrix:\nx, 0, 0\ny, x, 0\nz, y, x^2\n0, z, w^2\n";
        let e = parse_input_file(text).unwrap_err();
        assert_eq!(e.line, 6);
    }

    #[test]
    fn gens_file() {
        let text = "\
vars: x y z
gens:
x^4
x^2*z^2
-x^3*z + x*y*z^2
-x^2*y*z + y^2*z^2 - x*z^3
";
        let input = parse_input_file(text).unwrap();
        assert_eq!(input.nu().unwrap(), 4);
        assert_eq!(input.phi().rows, 4);
        assert_eq!(input.phi().cols, 3);
    }
}
