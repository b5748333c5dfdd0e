//! Line-oriented text format for algebras with involution.
//!
//! ```text
//! # comment
//! field p=3 f=2 modulus=1,0,1 tau_order=2
//! dim 3
//! basis e12 e23 e13
//! struct 0 1 2 (1,0)
//! involution 0 (0,0) (1,0) (0,0)
//! involution 1 (1,0) (0,0) (0,0)
//! involution 2 (0,0) (0,0) (1,0)
//! meta family un-unitary
//! ```
//!
//! `struct i j k c` adds `c e_k` to `e_i e_j`. `involution i` lists the
//! coordinates of `sigma(e_i)`. Scalars are polynomial-basis tuples
//! `(c_0,..,c_{f-1})`; a bare integer stands for an element of the prime
//! field. `modulus` (low degree first, monic) and `tau_order` are optional.

use std::fmt;
use std::path::Path;

use crate::algebra::{AlgebraSpec, Limits, StructConst};
use crate::error::Error;
use crate::field::{Field, FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    Io(String),
    /// `line` is 1-based; 0 refers to the file as a whole.
    Parse {
        line: usize,
        message: String,
    },
    Invalid(Error),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(m) => write!(f, "cannot read input: {m}"),
            InputError::Parse { line: 0, message } => write!(f, "{message}"),
            InputError::Parse { line, message } => write!(f, "line {line}: {message}"),
            InputError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for InputError {}

fn err(line: usize, message: impl Into<String>) -> InputError {
    InputError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, what: &str, s: &str) -> Result<T, InputError> {
    s.parse()
        .map_err(|_| err(line, format!("invalid {what} {s:?}")))
}

fn parse_scalar(field: &Field, line: usize, tok: &str) -> Result<Scalar, InputError> {
    if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let coeffs: Vec<u32> = inner
            .split(',')
            .map(|c| parse_num(line, "coefficient", c.trim()))
            .collect::<Result<_, _>>()?;
        if coeffs.len() != field.degree() {
            return Err(err(
                line,
                format!(
                    "scalar {tok} has {} coordinates, expected {}",
                    coeffs.len(),
                    field.degree()
                ),
            ));
        }
        return field
            .from_coeffs(&coeffs)
            .map_err(|e| err(line, e.to_string()));
    }
    let n: i64 = parse_num(line, "scalar", tok)?;
    Ok(field.from_int(n))
}

struct Header {
    field: Option<(Field, usize)>,
    dim: Option<(usize, usize)>,
}

/// Parses and validates an algebra description.
pub fn parse_algebra(
    text: &str,
    limits: Limits,
    field_cap: u64,
) -> Result<AlgebraSpec, InputError> {
    let mut header = Header {
        field: None,
        dim: None,
    };
    let mut basis: Option<Vec<String>> = None;
    let mut consts: Vec<(usize, StructConst)> = Vec::new();
    let mut rows: Vec<Option<Vec<Scalar>>> = Vec::new();
    let mut meta = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let key = toks.next().expect("nonempty line");
        let rest: Vec<&str> = toks.collect();
        match key {
            "field" => {
                if header.field.is_some() {
                    return Err(err(line, "duplicate field line"));
                }
                let (mut p, mut f, mut modulus, mut tau) = (None, 1u32, None, 1u32);
                for kv in &rest {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| err(line, format!("expected key=value, got {kv:?}")))?;
                    match k {
                        "p" => p = Some(parse_num::<u32>(line, "p", v)?),
                        "f" => f = parse_num(line, "f", v)?,
                        "tau_order" => tau = parse_num(line, "tau_order", v)?,
                        "modulus" => {
                            modulus = Some(
                                v.split(',')
                                    .map(|c| parse_num::<u32>(line, "modulus coefficient", c))
                                    .collect::<Result<Vec<_>, _>>()?,
                            )
                        }
                        _ => return Err(err(line, format!("unknown field key {k:?}"))),
                    }
                }
                let p = p.ok_or_else(|| err(line, "field line needs p=<prime>"))?;
                let spec = match modulus {
                    Some(m) => FieldSpec::new(p, f, m, tau),
                    None => FieldSpec::with_default_modulus(p, f, tau),
                }
                .map_err(|e| err(line, e.to_string()))?;
                let field =
                    Field::with_cap(spec, field_cap).map_err(|e| err(line, e.to_string()))?;
                header.field = Some((field, line));
            }
            "dim" => {
                if header.dim.is_some() {
                    return Err(err(line, "duplicate dim line"));
                }
                if rest.len() != 1 {
                    return Err(err(line, "dim takes one value"));
                }
                let d: usize = parse_num(line, "dimension", rest[0])?;
                rows = vec![None; d];
                header.dim = Some((d, line));
            }
            "basis" => {
                let (d, _) = header.dim.ok_or_else(|| err(line, "basis before dim"))?;
                if rest.len() != d {
                    return Err(err(
                        line,
                        format!("basis lists {} names, expected {d}", rest.len()),
                    ));
                }
                basis = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            "struct" => {
                let (field, _) = header
                    .field
                    .as_ref()
                    .ok_or_else(|| err(line, "struct before field"))?;
                let (d, _) = header.dim.ok_or_else(|| err(line, "struct before dim"))?;
                if rest.len() != 4 {
                    return Err(err(line, "struct takes i j k coefficient"));
                }
                let idx: Vec<usize> = rest[..3]
                    .iter()
                    .map(|t| parse_num(line, "basis index", t))
                    .collect::<Result<_, _>>()?;
                if idx.iter().any(|&x| x >= d) {
                    return Err(err(line, format!("basis index out of range 0..{d}")));
                }
                let coeff = parse_scalar(field, line, rest[3])?;
                consts.push((
                    line,
                    StructConst {
                        i: idx[0],
                        j: idx[1],
                        k: idx[2],
                        coeff,
                    },
                ));
            }
            "involution" => {
                let (field, _) = header
                    .field
                    .as_ref()
                    .ok_or_else(|| err(line, "involution before field"))?;
                let (d, _) = header
                    .dim
                    .ok_or_else(|| err(line, "involution before dim"))?;
                if rest.len() != d + 1 {
                    return Err(err(
                        line,
                        format!("involution row needs an index and {d} scalars"),
                    ));
                }
                let i: usize = parse_num(line, "row index", rest[0])?;
                if i >= d {
                    return Err(err(line, format!("row index {i} out of range 0..{d}")));
                }
                if rows[i].is_some() {
                    return Err(err(line, format!("duplicate involution row {i}")));
                }
                let row = rest[1..]
                    .iter()
                    .map(|t| parse_scalar(field, line, t))
                    .collect::<Result<_, _>>()?;
                rows[i] = Some(row);
            }
            "meta" => {
                if rest.is_empty() {
                    return Err(err(line, "meta needs a key"));
                }
                meta.push((rest[0].to_string(), rest[1..].join(" ")));
            }
            other => return Err(err(line, format!("unknown keyword {other:?}"))),
        }
    }

    let (field, _) = header.field.ok_or_else(|| err(0, "missing field line"))?;
    let (d, _) = header.dim.ok_or_else(|| err(0, "missing dim line"))?;
    let basis = basis.unwrap_or_else(|| (0..d).map(|i| format!("e{i}")).collect());
    let mut involution = Vec::with_capacity(d);
    for (i, r) in rows.into_iter().enumerate() {
        involution.push(r.ok_or_else(|| err(0, format!("missing involution row {i}")))?);
    }
    let consts = consts.into_iter().map(|c| c.1).collect();
    let spec = AlgebraSpec::new(field, basis, consts, involution)
        .map_err(InputError::Invalid)?
        .with_limits(limits)
        .with_metadata(meta);
    Ok(spec)
}

pub fn parse_algebra_file(
    path: &Path,
    limits: Limits,
    field_cap: u64,
) -> Result<AlgebraSpec, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::Io(format!("{}: {e}", path.display())))?;
    parse_algebra(&text, limits, field_cap)
}

/// Canonical text form: merged structure constants in `(i, j, k)` order,
/// zero entries dropped, explicit modulus.
pub fn emit_algebra(spec: &AlgebraSpec) -> String {
    let field = spec.field();
    let fs = field.spec();
    let modulus: Vec<String> = fs.modulus.iter().map(u32::to_string).collect();
    let mut out = String::new();
    out.push_str(&format!(
        "field p={} f={} modulus={} tau_order={}\n",
        fs.p,
        fs.f,
        modulus.join(","),
        fs.tau_order
    ));
    out.push_str(&format!("dim {}\n", spec.dim()));
    if spec.dim() > 0 {
        out.push_str(&format!("basis {}\n", spec.basis_names().join(" ")));
    }
    for c in spec.canonical_struct_consts() {
        out.push_str(&format!(
            "struct {} {} {} {}\n",
            c.i,
            c.j,
            c.k,
            field.format(c.coeff)
        ));
    }
    for (i, row) in spec.involution_rows().iter().enumerate() {
        let cells: Vec<String> = row.coords().iter().map(|&x| field.format(x)).collect();
        out.push_str(&format!("involution {i} {}\n", cells.join(" ")));
    }
    for (k, v) in spec.metadata() {
        if v.is_empty() {
            out.push_str(&format!("meta {k}\n"));
        } else {
            out.push_str(&format!("meta {k} {v}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::examples::{fixture_b, make_example, Family};
    use crate::field::DEFAULT_MAX_FIELD_ORDER;

    fn parse(text: &str) -> Result<AlgebraSpec, InputError> {
        parse_algebra(text, Limits::default(), DEFAULT_MAX_FIELD_ORDER)
    }

    #[test]
    fn parses_fixture_b() {
        let s = parse("field p=3\ndim 1\nbasis e\ninvolution 0 2\n").unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s, fixture_b().with_metadata(vec![]));
    }

    #[test]
    fn rejects_characteristic_two() {
        let e = parse("field p=2\ndim 1\ninvolution 0 1\n").unwrap_err();
        assert!(e.to_string().contains("characteristic 2"), "{e}");
        assert!(matches!(e, InputError::Parse { line: 1, .. }));
    }

    #[test]
    fn rejects_non_anti_multiplicative_involution() {
        // sigma = identity on u_3 is multiplicative, not anti-multiplicative
        let text = "field p=3\ndim 3\nbasis e12 e23 e13\nstruct 0 1 2 1\n\
                    involution 0 1 0 0\ninvolution 1 0 1 0\ninvolution 2 0 0 1\n";
        match parse(text).unwrap_err() {
            InputError::Invalid(Error::Invalid(report)) => {
                assert!(report.anti_multiplicative.contains(&(0, 1)));
                assert!(report.to_string().contains("(0, 1)"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let e = parse("field p=3\ndim 2\n\nstruct 0 1 5 1\n").unwrap_err();
        assert!(matches!(e, InputError::Parse { line: 4, .. }));
        let e = parse("field p=3\ndim 1\nfrobnicate\n").unwrap_err();
        assert!(matches!(e, InputError::Parse { line: 3, .. }));
        let e = parse("dim 1\n").unwrap_err();
        assert_eq!(e.to_string(), "missing field line");
        let e = parse("field p=3\ndim 1\ninvolution 0 (1,2)\n").unwrap_err();
        assert!(matches!(e, InputError::Parse { line: 3, .. }));
    }

    #[test]
    fn round_trips_examples() {
        for (family, n, q) in [
            (Family::Flip, 3, 3),
            (Family::Symplectic, 4, 3),
            (Family::Unitary, 3, 9),
        ] {
            let spec = make_example(family, n, q).unwrap();
            let text = emit_algebra(&spec);
            let back = parse(&text).unwrap();
            assert_eq!(back, spec);
            assert_eq!(emit_algebra(&back), text);
        }
    }
}
