//! Canonical text formats for modules and morphisms.
//!
//! ```text
//! laddermod-module v1
//! field rational
//! start 0
//! dims 1 2
//! map 0 [1; 0]
//! ```
//!
//! A morphism file inlines both modules and the components of
//! `Φ: V -> W(shift)`, optionally followed by a candidate inverse
//! `Ψ: W -> V(shift)` and a declared δ. Blank lines and lines starting
//! with `#` are ignored; printing always produces the canonical form.

use std::fmt::Write;

use laddermod::algebra::{Field, Matrix};
use laddermod::morphism::{validate_ladder, LadderModule};
use laddermod::persistence::PersistenceModule;
use thiserror::Error;

pub const MODULE_HEADER: &str = "laddermod-module v1";
pub const MORPHISM_HEADER: &str = "laddermod-morphism v1";

/// Longest accepted index range of a module.
pub const MAX_SPAN: usize = 4096;
/// Largest accepted dimension at one index.
pub const MAX_DIM: usize = 256;
/// Largest accepted magnitude of indices and shifts.
pub const MAX_INDEX: i64 = 1 << 40;
/// Longest accepted scalar token.
pub const MAX_TOKEN: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    /// 1-based; 0 means end of input.
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

/// A parsed morphism file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFile {
    pub field: Field,
    pub domain: PersistenceModule,
    pub codomain: PersistenceModule,
    /// `Φ: V -> W(forward_shift)`.
    pub forward_shift: i64,
    pub forward: LadderModule,
    /// `Ψ: W -> V(shift)`.
    pub inverse: Option<(i64, LadderModule)>,
    pub delta: Option<i64>,
}

pub fn parse_field(text: &str) -> Result<Field, String> {
    let t = text.trim();
    if t == "rational" {
        return Ok(Field::Rational);
    }
    let p = t
        .strip_prefix("prime")
        .map(|r| r.trim_start_matches([':', ' ']))
        .ok_or_else(|| format!("unknown field {t:?}; expected `rational` or `prime P`"))?;
    let p: u64 = p.parse().map_err(|_| format!("bad prime {p:?}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

pub fn field_line(field: Field) -> String {
    match field {
        Field::Rational => "field rational".into(),
        Field::Prime(p) => format!("field prime {p}"),
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate().peekable(),
        }
    }

    fn skip_blank(&mut self) {
        while let Some((_, l)) = self.inner.peek() {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                self.inner.next();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<(usize, &'a str)> {
        self.skip_blank();
        self.inner.peek().map(|&(n, l)| (n + 1, l.trim()))
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.skip_blank();
        self.inner.next().map(|(n, l)| (n + 1, l.trim()))
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        self.next().map_or_else(
            || err(0, format!("unexpected end of input, expected {what}")),
            Ok,
        )
    }
}

fn parse_index(line: usize, token: &str) -> Result<i64, FormatError> {
    match token.parse::<i64>() {
        Ok(n) if n.abs() <= MAX_INDEX => Ok(n),
        Ok(_) => err(line, format!("index {token} out of range")),
        Err(_) => err(line, format!("expected an integer, found {token:?}")),
    }
}

/// `key a b c` with an exact key; returns the remaining text.
fn keyed<'a>(line: usize, text: &'a str, key: &str) -> Result<&'a str, FormatError> {
    match text.split_once(char::is_whitespace) {
        Some((k, rest)) if k == key => Ok(rest.trim()),
        None if text == key => Ok(""),
        _ => err(line, format!("expected `{key}`, found {text:?}")),
    }
}

fn parse_matrix(
    line: usize,
    field: Field,
    text: &str,
    rows: usize,
    cols: usize,
) -> Result<Matrix, FormatError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .map_or_else(|| err(line, "matrix must be written as [a b; c d]"), Ok)?;
    if rows == 0 || cols == 0 {
        if !inner.trim().is_empty() {
            return err(
                line,
                format!("expected an empty matrix for shape {rows}x{cols}"),
            );
        }
        return Ok(Matrix::zeros(field, rows, cols));
    }
    let row_texts: Vec<&str> = inner.split(';').collect();
    if row_texts.len() != rows {
        return err(
            line,
            format!("expected {rows} rows, found {}", row_texts.len()),
        );
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (r, row) in row_texts.iter().enumerate() {
        let tokens: Vec<&str> = row.split_whitespace().collect();
        if tokens.len() != cols {
            return err(
                line,
                format!(
                    "row {}: expected {cols} entries, found {}",
                    r + 1,
                    tokens.len()
                ),
            );
        }
        for tok in tokens {
            if tok.len() > MAX_TOKEN {
                return err(line, "scalar token too long");
            }
            entries.push(field.parse_scalar(tok).map_err(|e| FormatError {
                line,
                message: e.to_string(),
            })?);
        }
    }
    Matrix::from_entries(field, rows, cols, entries).map_err(|e| FormatError {
        line,
        message: e.to_string(),
    })
}

pub fn matrix_text(m: &Matrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        "[]".into()
    } else {
        m.to_string()
    }
}

fn parse_header(lines: &mut Lines, header: &str) -> Result<(), FormatError> {
    let (n, l) = lines.expect("a header")?;
    if l != header {
        return err(n, format!("expected header `{header}`"));
    }
    Ok(())
}

fn parse_field_line(lines: &mut Lines, default: Option<Field>) -> Result<Field, FormatError> {
    match lines.peek() {
        Some((n, l)) if l.starts_with("field") => {
            lines.next();
            let rest = keyed(n, l, "field")?;
            parse_field(rest).map_err(|m| FormatError {
                line: n,
                message: m,
            })
        }
        Some((n, _)) => {
            default.map_or_else(|| err(n, "missing `field` line and no default field"), Ok)
        }
        None => default.map_or_else(|| err(0, "missing `field` line and no default field"), Ok),
    }
}

fn parse_module_body(lines: &mut Lines, field: Field) -> Result<PersistenceModule, FormatError> {
    let (n, l) = lines.expect("`start`")?;
    let start = parse_index(n, keyed(n, l, "start")?)?;
    let (n, l) = lines.expect("`dims`")?;
    let dims_text = keyed(n, l, "dims")?;
    let mut dims = Vec::new();
    for tok in dims_text.split_whitespace() {
        let d: usize = tok
            .parse()
            .map_or_else(|_| err(n, format!("bad dimension {tok:?}")), Ok)?;
        if d > MAX_DIM {
            return err(n, format!("dimension {d} exceeds {MAX_DIM}"));
        }
        dims.push(d);
        if dims.len() > MAX_SPAN {
            return err(n, format!("more than {MAX_SPAN} indices"));
        }
    }
    if (start + dims.len() as i64).abs() > MAX_INDEX {
        return err(n, "index range out of bounds");
    }
    let mut maps = Vec::new();
    for k in 1..dims.len() {
        let t = start + k as i64 - 1;
        let (n, l) = lines.expect("`map`")?;
        let rest = keyed(n, l, "map")?;
        let (idx, mat) = rest
            .split_once(char::is_whitespace)
            .map_or_else(|| err(n, "expected `map t [..]`"), Ok)?;
        if parse_index(n, idx)? != t {
            return err(n, format!("expected the map from index {t}"));
        }
        maps.push(parse_matrix(n, field, mat.trim(), dims[k], dims[k - 1])?);
    }
    PersistenceModule::new(field, start, dims, maps).map_err(|e| FormatError {
        line: n,
        message: e.to_string(),
    })
}

fn expect_end(lines: &mut Lines) -> Result<(), FormatError> {
    let (n, l) = lines.expect("`end`")?;
    if l != "end" {
        return err(n, format!("expected `end`, found {l:?}"));
    }
    Ok(())
}

fn expect_eof(lines: &mut Lines) -> Result<(), FormatError> {
    match lines.next() {
        Some((n, l)) => err(n, format!("unexpected trailing line {l:?}")),
        None => Ok(()),
    }
}

pub fn parse_module(
    text: &str,
    default_field: Option<Field>,
) -> Result<PersistenceModule, FormatError> {
    let mut lines = Lines::new(text);
    parse_header(&mut lines, MODULE_HEADER)?;
    let field = parse_field_line(&mut lines, default_field)?;
    let m = parse_module_body(&mut lines, field)?;
    expect_eof(&mut lines)?;
    Ok(m)
}

fn write_module_body(out: &mut String, m: &PersistenceModule) {
    let dims: Vec<String> = m.dims().iter().map(usize::to_string).collect();
    writeln!(out, "start {}", m.start()).unwrap();
    if dims.is_empty() {
        writeln!(out, "dims").unwrap();
    } else {
        writeln!(out, "dims {}", dims.join(" ")).unwrap();
    }
    for (k, a) in m.maps().iter().enumerate() {
        writeln!(out, "map {} {}", m.start() + k as i64, matrix_text(a)).unwrap();
    }
}

pub fn print_module(m: &PersistenceModule) -> String {
    let mut out = format!("{MODULE_HEADER}\n{}\n", field_line(m.field()));
    write_module_body(&mut out, m);
    out
}

/// `keyword shift s start t`, then one `comp` line per stored component.
fn parse_components(
    lines: &mut Lines,
    keyword: &str,
    field: Field,
    dom: &PersistenceModule,
    cod_base: &PersistenceModule,
) -> Result<(i64, LadderModule), FormatError> {
    let (n, l) = lines.expect(&format!("`{keyword}`"))?;
    let rest = keyed(n, l, keyword)?;
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    let [k1, shift, k2, start] = tokens[..] else {
        return err(n, format!("expected `{keyword} shift S start T`"));
    };
    if k1 != "shift" || k2 != "start" {
        return err(n, format!("expected `{keyword} shift S start T`"));
    }
    let shift = parse_index(n, shift)?;
    let start = parse_index(n, start)?;
    let cod = cod_base.shift(shift);
    let mut comps = Vec::new();
    while let Some((m, l)) = lines.peek() {
        if l == "end" {
            break;
        }
        lines.next();
        let rest = keyed(m, l, "comp")?;
        let (idx, mat) = rest
            .split_once(char::is_whitespace)
            .map_or_else(|| err(m, "expected `comp t [..]`"), Ok)?;
        let t = start + comps.len() as i64;
        if parse_index(m, idx)? != t {
            return err(m, format!("expected the component at index {t}"));
        }
        if comps.len() >= MAX_SPAN {
            return err(m, format!("more than {MAX_SPAN} components"));
        }
        comps.push(parse_matrix(m, field, mat.trim(), cod.dim(t), dom.dim(t))?);
    }
    expect_end(lines)?;
    let map = LadderModule::new(dom.clone(), cod, start, comps).map_err(|e| FormatError {
        line: n,
        message: e.to_string(),
    })?;
    validate_ladder(&map).map_err(|e| FormatError {
        line: n,
        message: e.to_string(),
    })?;
    Ok((shift, map))
}

pub fn parse_morphism(
    text: &str,
    default_field: Option<Field>,
) -> Result<MorphismFile, FormatError> {
    let mut lines = Lines::new(text);
    parse_header(&mut lines, MORPHISM_HEADER)?;
    let field = parse_field_line(&mut lines, default_field)?;
    let section = |lines: &mut Lines, name: &str| -> Result<PersistenceModule, FormatError> {
        let (n, l) = lines.expect(&format!("`{name}`"))?;
        if l != name {
            return err(n, format!("expected `{name}`"));
        }
        let m = parse_module_body(lines, field)?;
        expect_end(lines)?;
        Ok(m)
    };
    let domain = section(&mut lines, "domain")?;
    let codomain = section(&mut lines, "codomain")?;
    let (forward_shift, forward) =
        parse_components(&mut lines, "forward", field, &domain, &codomain)?;
    let mut inverse = None;
    if matches!(lines.peek(), Some((_, l)) if l.starts_with("inverse")) {
        inverse = Some(parse_components(
            &mut lines, "inverse", field, &codomain, &domain,
        )?);
    }
    let mut delta = None;
    if let Some((n, l)) = lines.peek() {
        if l.starts_with("delta") {
            lines.next();
            let d = parse_index(n, keyed(n, l, "delta")?)?;
            if d < 0 {
                return err(n, "delta must be non-negative");
            }
            delta = Some(d);
        }
    }
    expect_eof(&mut lines)?;
    Ok(MorphismFile {
        field,
        domain,
        codomain,
        forward_shift,
        forward,
        inverse,
        delta,
    })
}

fn write_components(out: &mut String, keyword: &str, shift: i64, m: &LadderModule) {
    writeln!(out, "{keyword} shift {shift} start {}", m.start()).unwrap();
    for (k, c) in m.comps().iter().enumerate() {
        writeln!(out, "comp {} {}", m.start() + k as i64, matrix_text(c)).unwrap();
    }
    writeln!(out, "end").unwrap();
}

pub fn print_morphism(f: &MorphismFile) -> String {
    let mut out = format!("{MORPHISM_HEADER}\n{}\n", field_line(f.field));
    out.push_str("domain\n");
    write_module_body(&mut out, &f.domain);
    out.push_str("end\ncodomain\n");
    write_module_body(&mut out, &f.codomain);
    out.push_str("end\n");
    write_components(&mut out, "forward", f.forward_shift, &f.forward);
    if let Some((s, psi)) = &f.inverse {
        write_components(&mut out, "inverse", *s, psi);
    }
    if let Some(d) = f.delta {
        writeln!(out, "delta {d}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use laddermod::fixtures::{running_phi, running_psi, running_v, running_w};

    #[test]
    fn module_round_trip() {
        let text = print_module(&running_v());
        let m = parse_module(&text, None).unwrap();
        assert_eq!(m, running_v());
        assert_eq!(print_module(&m), text);
        let zero = print_module(&PersistenceModule::zero(Field::Rational));
        assert_eq!(zero, "laddermod-module v1\nfield rational\nstart 0\ndims\n");
        assert_eq!(print_module(&parse_module(&zero, None).unwrap()), zero);
    }

    #[test]
    fn morphism_round_trip() {
        let f = MorphismFile {
            field: Field::Rational,
            domain: running_v(),
            codomain: running_w(),
            forward_shift: 1,
            forward: running_phi(),
            inverse: Some((1, running_psi())),
            delta: Some(1),
        };
        let text = print_morphism(&f);
        let g = parse_morphism(&text, None).unwrap();
        assert_eq!(g, f);
        assert_eq!(print_morphism(&g), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "laddermod-module v1\nfield rational\nstart 0\ndims 1 1\nmap 0 [1 2]\n";
        assert_eq!(parse_module(bad, None).unwrap_err().line, 5);
        let no_field = "laddermod-module v1\nstart 0\ndims 1\n";
        assert!(parse_module(no_field, None).is_err());
        let m = parse_module(no_field, Some(Field::Prime(5))).unwrap();
        assert_eq!(m.field(), Field::Prime(5));
        assert_eq!(parse_field("prime 7").unwrap(), Field::Prime(7));
        assert_eq!(parse_field("prime:7").unwrap(), Field::Prime(7));
        assert!(parse_field("prime 8").is_err());
    }
}
