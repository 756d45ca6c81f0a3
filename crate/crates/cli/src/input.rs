//! Parsing of systems, domains, functions, grids and point literals from
//! flags, files and inline JSON.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use chebconv::domain::{Domain, Interval};
use chebconv::error::{Error, Result};
use chebconv::function::FunctionSpec;
use chebconv::scalar::{parse_rational, Rational, Scalar};
use chebconv::system::ChebyshevSystem;
use chebconv::systems::{catalog_entry, CATALOG_IDS};
use serde::{Deserialize, Serialize};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| invalid(format!("bad {what} JSON: {e}")))
}

fn looks_inline_json(s: &str) -> bool {
    let t = s.trim_start();
    t.starts_with('{') || t.starts_with('[')
}

/// A point literal: an exact number (`3`, `-1/2`, `0.25`) or a multiple of
/// pi (`pi`, `-pi/2`, `3pi/4`, `0.5*pi`), the latter as a float.
pub fn parse_point(s: &str) -> Result<Scalar> {
    let s = s.trim();
    if let Some(r) = parse_rational(s) {
        return Ok(Scalar::Exact(r));
    }
    let lower = s.to_ascii_lowercase();
    let Some(at) = lower.find("pi") else {
        return Err(invalid(format!("not a point literal: {s:?}")));
    };
    let coef = lower[..at].trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => parse_rational(c).map(|r| Scalar::Exact(r).to_f64()).ok_or_else(|| invalid(format!("bad pi coefficient in {s:?}")))?,
    };
    let tail = lower[at + 2..].trim();
    let div = match tail.strip_prefix('/') {
        None if tail.is_empty() => 1.0,
        Some(d) => parse_rational(d)
            .map(|r| Scalar::Exact(r).to_f64())
            .filter(|d| *d != 0.0)
            .ok_or_else(|| invalid(format!("bad pi divisor in {s:?}")))?,
        None => return Err(invalid(format!("not a point literal: {s:?}"))),
    };
    Ok(Scalar::Float(coef * PI / div))
}

pub fn parse_point_list(s: &str) -> Result<Vec<Scalar>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_point).collect()
}

/// `"lo,hi"` (open), `"[lo,hi]"` (closed), a half-open mix such as
/// `"[lo,hi)"`, or a JSON domain. `inf` / `-inf` leave a side unbounded.
pub fn parse_domain(s: &str) -> Result<Domain> {
    if s.trim_start().starts_with('{') {
        let d: Domain = from_json(s, "domain")?;
        d.validate()?;
        return Ok(d);
    }
    let t = s.trim();
    let lo_closed = t.starts_with('[');
    let hi_closed = t.ends_with(']');
    let inner = t.trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    let (lo, hi) = inner.split_once(',').ok_or_else(|| invalid(format!("domain must be \"lo,hi\": {s:?}")))?;
    let end = |v: &str, neg: bool| -> Result<Option<Scalar>> {
        match v.trim() {
            "inf" | "+inf" if !neg => Ok(None),
            "-inf" if neg => Ok(None),
            v => parse_point(v).map(Some),
        }
    };
    let iv = Interval { lo: end(lo, true)?, hi: end(hi, false)?, lo_closed, hi_closed };
    if let (Some(a), Some(b)) = (&iv.lo, &iv.hi) {
        if a.to_f64() >= b.to_f64() {
            return Err(invalid(format!("empty domain {s:?}")));
        }
    }
    Ok(Domain::Interval(iv))
}

/// What the system flag resolved to, echoed into reports.
#[derive(Debug, Clone, Serialize)]
pub struct SystemInfo {
    pub source: String,
    pub dimension: usize,
    pub domain: Domain,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefix_positive_upto: Option<usize>,
    pub domain_overridden: bool,
}

/// `id`, `id:n`, a JSON file, or inline JSON.
pub fn load_system(spec: &str, domain: Option<Domain>, allow_unsafe: bool) -> Result<(ChebyshevSystem, SystemInfo)> {
    let (id, n) = match spec.split_once(':') {
        Some((id, n)) => (id, Some(n)),
        None => (spec, None),
    };
    if CATALOG_IDS.contains(&id) {
        let n = n
            .map(|v| v.trim().parse::<usize>().map_err(|_| invalid(format!("bad size in system {spec:?}"))))
            .transpose()?;
        let entry = catalog_entry(id, n, domain, allow_unsafe)?;
        let info = SystemInfo {
            source: spec.to_string(),
            dimension: entry.system.dimension(),
            domain: entry.system.domain.clone(),
            prefix_positive_upto: Some(entry.prefix_positive_upto),
            domain_overridden: entry.domain_overridden,
        };
        return Ok((entry.system, info));
    }
    let text = if looks_inline_json(spec) {
        spec.to_string()
    } else if Path::new(spec).exists() {
        read_file(Path::new(spec))?
    } else {
        return Err(invalid(format!("unknown system {spec:?}; expected one of {CATALOG_IDS:?}, a path, or JSON")));
    };
    let parsed: ChebyshevSystem = from_json(&text, "system")?;
    let overridden = domain.is_some();
    let system = ChebyshevSystem::new(parsed.basis, domain.unwrap_or(parsed.domain))?.with_claimed_sign(parsed.claimed_sign);
    let source = if looks_inline_json(spec) { "inline".to_string() } else { spec.to_string() };
    let info = SystemInfo {
        source,
        dimension: system.dimension(),
        domain: system.domain.clone(),
        prefix_positive_upto: None,
        domain_overridden: overridden,
    };
    Ok((system, info))
}

/// Builtin tokens joined by `+`, each optionally negated and scaled:
/// `power:3`, `exp`, `cos`, `sin:2`, `const:1/2`, `-2*power:1`.
pub fn parse_builtin(s: &str) -> Result<FunctionSpec> {
    let mut terms = Vec::new();
    for raw in s.split('+') {
        let t = raw.trim();
        if t.is_empty() {
            return Err(invalid(format!("empty term in function {s:?}")));
        }
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        let (coef, body) = match t.split_once('*') {
            Some((c, b)) => (parse_point(c)?, b.trim()),
            None => (Scalar::int(1), t),
        };
        let coef = if neg { negate(coef) } else { coef };
        terms.push((coef, parse_atom(body)?));
    }
    if terms.len() == 1 && terms[0].0 == Scalar::int(1) {
        return Ok(terms.pop().expect("one term").1);
    }
    Ok(FunctionSpec::affine(terms))
}

fn negate(s: Scalar) -> Scalar {
    match s {
        Scalar::Exact(r) => Scalar::Exact(-r),
        Scalar::Float(v) => Scalar::Float(-v),
    }
}

fn parse_atom(t: &str) -> Result<FunctionSpec> {
    let (name, arg) = match t.split_once(':') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let int = |a: Option<&str>, default: i64| -> Result<i64> {
        match a {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| invalid(format!("bad integer argument in {t:?}"))),
        }
    };
    Ok(match name {
        "power" | "p" => {
            let k = int(arg, 1)?;
            FunctionSpec::power(u32::try_from(k).map_err(|_| invalid(format!("negative power in {t:?}")))?)
        }
        "exp" if arg.is_none() => FunctionSpec::Exp,
        "cos" => FunctionSpec::Cos { freq: int(arg, 1)? as i32 },
        "sin" => FunctionSpec::Sin { freq: int(arg, 1)? as i32 },
        "const" => FunctionSpec::constant(parse_point(arg.ok_or_else(|| invalid("const needs a value"))?)?),
        "neg_cot_half" => FunctionSpec::NegCotHalf { x1: parse_point(arg.ok_or_else(|| invalid("neg_cot_half needs x1"))?)? },
        _ => return Err(invalid(format!("unknown builtin function {t:?}"))),
    })
}

/// Two-column `point,value` table with an optional header row.
pub fn parse_csv_table(text: &str) -> Result<FunctionSpec> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let (mut points, mut values) = (Vec::new(), Vec::new());
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| invalid(format!("bad CSV: {e}")))?;
        if rec.len() != 2 {
            return Err(invalid(format!("CSV row {} has {} columns, expected 2", row + 1, rec.len())));
        }
        match (parse_point(&rec[0]), parse_point(&rec[1])) {
            (Ok(p), Ok(v)) => {
                points.push(p);
                values.push(v);
            }
            _ if row == 0 => continue,
            _ => return Err(invalid(format!("CSV row {} is not numeric", row + 1))),
        }
    }
    if points.is_empty() {
        return Err(invalid("CSV table has no rows"));
    }
    FunctionSpec::sampled(points, values)
}

/// A `.csv` table, a JSON file, inline JSON, or builtin tokens.
pub fn load_function(spec: &str) -> Result<FunctionSpec> {
    let f = if looks_inline_json(spec) {
        from_json(spec, "function")?
    } else if Path::new(spec).is_file() {
        let text = read_file(Path::new(spec))?;
        if spec.to_ascii_lowercase().ends_with(".csv") {
            parse_csv_table(&text)?
        } else {
            from_json(&text, "function")?
        }
    } else {
        parse_builtin(spec)?
    };
    f.validate()?;
    Ok(f)
}

/// `uniform:a,b,m` (m points including both ends), `interior:a,b,m` (m
/// points strictly inside), a comma list, or a file (JSON array or one
/// number per line).
pub fn load_grid(spec: &str) -> Result<Vec<Scalar>> {
    if let Some(rest) = spec.strip_prefix("uniform:") {
        return spaced(rest, true);
    }
    if let Some(rest) = spec.strip_prefix("interior:") {
        return spaced(rest, false);
    }
    if looks_inline_json(spec) {
        return from_json(spec, "grid");
    }
    let path = Path::new(spec);
    if path.is_file() {
        let text = read_file(path)?;
        if looks_inline_json(&text) {
            return from_json(&text, "grid");
        }
        let pts: Vec<Scalar> = text
            .lines()
            .map(|l| l.split(',').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(parse_point)
            .collect::<Result<_>>()?;
        return Ok(pts);
    }
    parse_point_list(spec)
}

fn spaced(rest: &str, closed: bool) -> Result<Vec<Scalar>> {
    let parts: Vec<&str> = rest.split(',').collect();
    if parts.len() != 3 {
        return Err(invalid(format!("grid spec needs a,b,m: {rest:?}")));
    }
    let (a, b) = (parse_point(parts[0])?, parse_point(parts[1])?);
    let m: usize = parts[2].trim().parse().map_err(|_| invalid(format!("bad grid size {:?}", parts[2])))?;
    if m == 0 || (closed && m < 2) {
        return Err(invalid("grid size too small"));
    }
    if a.to_f64() >= b.to_f64() {
        return Err(invalid(format!("grid needs a < b, got {a} and {b}")));
    }
    let (denom, offset) = if closed { (m - 1, 0) } else { (m + 1, 1) };
    let at = |i: usize| -> Scalar {
        let t = i + offset;
        match (&a, &b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => {
                Scalar::Exact(x + (y - x) * Rational::new((t as i64).into(), (denom as i64).into()))
            }
            _ => {
                let (x, y) = (a.to_f64(), b.to_f64());
                Scalar::Float(x + (y - x) * t as f64 / denom as f64)
            }
        }
    };
    Ok((0..m).map(at).collect())
}

/// Two anchor tuples, from a file or inline JSON `{"a": [..], "b": [..]}`.
#[derive(Debug, Clone, Deserialize)]
pub struct Anchors {
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
}

pub fn load_anchors(spec: &str) -> Result<Anchors> {
    let text = if looks_inline_json(spec) { spec.to_string() } else { read_file(Path::new(spec))? };
    from_json(&text, "anchors")
}
