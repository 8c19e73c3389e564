//! JSON and CSV documents for matrices, weighted permutations, factor
//! bundles and check reports. Indices are 0-based throughout.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lsu::LsuFactors;
use crate::matrix::DMatrix;
use crate::ring::{BigInt, Frac, Scalar, TextCodec};
use crate::wperm::WPerm;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing field '{key}'")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| perr(format!("field '{key}' must be a non-negative integer")))
}

fn check_ring<R: Scalar>(v: &Value) -> Result<()> {
    let ring = field(v, "ring")?.as_str().ok_or_else(|| perr("field 'ring' must be a string"))?;
    if ring != R::RING.name() {
        return Err(perr(format!("document ring '{ring}' where '{}' was expected", R::RING)));
    }
    Ok(())
}

/// Reads the `"ring"` field of a document.
pub fn ring_of(v: &Value) -> Result<crate::ring::RingKind> {
    field(v, "ring")?.as_str().ok_or_else(|| perr("field 'ring' must be a string"))?.parse()
}

fn dense_with<T>(rows: usize, m: &DMatrix<T>, enc: impl Fn(&T) -> Value) -> Value
where
    T: crate::ring::Ring,
{
    let data: Vec<Value> = (0..rows).map(|i| Value::Array(m.row(i).iter().map(&enc).collect())).collect();
    Value::Array(data)
}

fn parse_data<T: crate::ring::Ring>(v: &Value, dec: impl Fn(&Value) -> Result<T>) -> Result<DMatrix<T>> {
    let rows = usize_field(v, "rows")?;
    let cols = usize_field(v, "cols")?;
    let data = field(v, "data")?.as_array().ok_or_else(|| perr("field 'data' must be an array"))?;
    if data.len() != rows {
        return Err(perr(format!("'data' has {} rows, header says {rows}", data.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for row in data {
        let row = row.as_array().ok_or_else(|| perr("matrix rows must be arrays"))?;
        if row.len() != cols {
            return Err(perr(format!("row of length {}, header says {cols}", row.len())));
        }
        out.push(row.iter().map(&dec).collect::<Result<Vec<_>>>()?);
    }
    if rows == 0 {
        return Ok(DMatrix::zeros(0, cols));
    }
    DMatrix::from_rows(out)
}

pub fn matrix_to_json<R: Scalar>(m: &DMatrix<R>) -> Value {
    json!({
        "ring": R::RING.name(),
        "rows": m.rows(),
        "cols": m.cols(),
        "data": dense_with(m.rows(), m, TextCodec::to_json),
    })
}

pub fn matrix_from_json<R: Scalar>(v: &Value) -> Result<DMatrix<R>> {
    check_ring::<R>(v)?;
    parse_data(v, R::from_json)
}

/// A matrix over the quotient field of `R`; the ring field names `R`.
pub fn frac_matrix_to_json<R: Scalar>(m: &DMatrix<Frac<R>>) -> Value {
    json!({
        "ring": R::RING.name(),
        "field": true,
        "rows": m.rows(),
        "cols": m.cols(),
        "data": dense_with(m.rows(), m, Frac::to_json),
    })
}

pub fn frac_matrix_from_json<R: Scalar>(v: &Value) -> Result<DMatrix<Frac<R>>> {
    check_ring::<R>(v)?;
    parse_data(v, Frac::from_json)
}

/// Integer matrix from comma-separated rows. Blank lines and lines starting
/// with `#` are skipped.
pub fn matrix_from_csv(text: &str) -> Result<DMatrix<BigInt>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(|_| perr(format!("line {}: bad integer '{t}'", lineno + 1))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    DMatrix::from_rows(rows).map_err(|_| perr("CSV rows differ in length"))
}

pub fn matrix_to_csv(m: &DMatrix<BigInt>) -> String {
    let mut s = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn wperm_to_json<R: Scalar>(w: &WPerm<Frac<R>>) -> Value {
    let pivots: Vec<Value> =
        w.pivots().map(|(r, c, v)| json!({ "row": r, "col": c, "value": v.to_json() })).collect();
    json!({ "n": w.n(), "pivots": pivots })
}

pub fn wperm_from_json<R: Scalar>(v: &Value) -> Result<WPerm<Frac<R>>> {
    let n = usize_field(v, "n")?;
    let pivots = field(v, "pivots")?.as_array().ok_or_else(|| perr("field 'pivots' must be an array"))?;
    let mut triples = Vec::with_capacity(pivots.len());
    for p in pivots {
        let value = Frac::<R>::from_json(field(p, "value")?)?;
        if crate::ring::Ring::is_zero(&value) {
            return Err(perr("weighted permutation pivot with zero value"));
        }
        triples.push((usize_field(p, "row")?, usize_field(p, "col")?, value));
    }
    WPerm::from_pivots(n, triples).map_err(|e| perr(e.to_string()))
}

/// Dense rendering of a weighted permutation, for `--dense-s` output.
pub fn wperm_to_dense_json<R: Scalar>(w: &WPerm<Frac<R>>) -> Value {
    let m = w.to_dense();
    json!({ "n": w.n(), "data": dense_with(m.rows(), &m, Frac::to_json) })
}

/// Accepts either the sparse or the dense rendering.
pub fn wperm_from_any_json<R: Scalar>(v: &Value) -> Result<WPerm<Frac<R>>> {
    if v.get("pivots").is_some() {
        return wperm_from_json(v);
    }
    let n = usize_field(v, "n")?;
    let mut doc = v.clone();
    if let Some(obj) = doc.as_object_mut() {
        obj.insert("rows".into(), json!(n));
        obj.insert("cols".into(), json!(n));
    }
    let dense = parse_data(&doc, Frac::<R>::from_json)?;
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !crate::ring::Ring::is_zero(&dense[(i, j)]) {
                triples.push((i, j, dense[(i, j)].clone()));
            }
        }
    }
    WPerm::from_pivots(n, triples).map_err(|e| perr(e.to_string()))
}

/// Serialized factor bundle. Carries `α·M` and `α·W` under `M` and `W`
/// along with `alpha`, which makes them `M` and `W` for top-level bundles.
pub fn bundle_to_json<R: Scalar>(f: &LsuFactors<R>, original_dims: (usize, usize), dense_s: bool) -> Value {
    let perm = |w: &WPerm<Frac<R>>| if dense_s { wperm_to_dense_json(w) } else { wperm_to_json(w) };
    let mut obj = Map::new();
    obj.insert("ring".into(), json!(R::RING.name()));
    obj.insert("n".into(), json!(f.n()));
    obj.insert("original_rows".into(), json!(original_dims.0));
    obj.insert("original_cols".into(), json!(original_dims.1));
    obj.insert("alpha".into(), f.alpha.to_json());
    obj.insert("alpha_r".into(), f.alpha_r.to_json());
    obj.insert("rank".into(), json!(f.rank));
    obj.insert("pivot_order".into(), json!(f.pivot_order.iter().map(|&(r, c)| json!([r, c])).collect::<Vec<_>>()));
    obj.insert("L".into(), matrix_to_json(&f.l));
    obj.insert("U".into(), matrix_to_json(&f.u));
    obj.insert("M".into(), matrix_to_json(&f.m_scaled));
    obj.insert("W".into(), matrix_to_json(&f.w_scaled));
    obj.insert("S".into(), perm(&f.s));
    obj.insert("Shat".into(), perm(&f.shat));
    Value::Object(obj)
}

pub fn bundle_from_json<R: Scalar>(v: &Value) -> Result<(LsuFactors<R>, (usize, usize))> {
    check_ring::<R>(v)?;
    let n = usize_field(v, "n")?;
    let dims = (usize_field(v, "original_rows")?, usize_field(v, "original_cols")?);
    let order = field(v, "pivot_order")?.as_array().ok_or_else(|| perr("'pivot_order' must be an array"))?;
    let pivot_order = order
        .iter()
        .map(|p| match p.as_array().map(|a| a.as_slice()) {
            Some([r, c]) => match (r.as_u64(), c.as_u64()) {
                (Some(r), Some(c)) => Ok((r as usize, c as usize)),
                _ => Err(perr("pivot_order entries must be [row, col]")),
            },
            _ => Err(perr("pivot_order entries must be [row, col]")),
        })
        .collect::<Result<Vec<_>>>()?;
    let alpha = R::from_json(field(v, "alpha")?)?;
    let f = LsuFactors {
        l: matrix_from_json(field(v, "L")?)?,
        u: matrix_from_json(field(v, "U")?)?,
        s: wperm_from_any_json(field(v, "S")?)?,
        shat: wperm_from_any_json(field(v, "Shat")?)?,
        m_scaled: matrix_from_json(field(v, "M")?)?,
        w_scaled: matrix_from_json(field(v, "W")?)?,
        alpha_r: R::from_json(field(v, "alpha_r")?)?,
        rank: usize_field(v, "rank")?,
        pivot_order,
        alpha,
    };
    if crate::ring::Ring::is_zero(&f.alpha) {
        return Err(perr("alpha must be nonzero"));
    }
    if f.l.rows() != n {
        return Err(perr(format!("bundle size {n} disagrees with L")));
    }
    Ok((f, dims))
}
