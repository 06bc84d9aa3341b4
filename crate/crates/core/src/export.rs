//! Serialization: CSV and JSON traces, fixed-width tables, DOT graphs.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::accelerated::{AcceleratedTrace, TraceRow};
use crate::classical::ClassicalTrajectory;
use crate::error::{Error, Result};
use crate::natural::{collatz_step, odd_part, Natural};

pub const ACCELERATED_CSV_HEADER: &str = "w,x,y,z,u,eta,v_sq";
pub const CLASSICAL_CSV_HEADER: &str = "k,value,delta";
pub const DEFAULT_GRAPH_LIMIT: u64 = 100_000;

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    let raw = record
        .get(i)
        .ok_or_else(|| Error::Parse(format!("missing column {name}")))?;
    raw.parse()
        .map_err(|_| Error::Parse(format!("bad {name} value {raw:?}")))
}

fn writer(out: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Never)
        .from_writer(out)
}

fn reader<'a>(data: &'a [u8], header: &str) -> Result<csv::Reader<&'a [u8]>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(data);
    let found = r.headers().map_err(csv_err)?.iter().collect::<Vec<_>>().join(",");
    if found != header {
        return Err(Error::Parse(format!("expected header {header:?}, got {found:?}")));
    }
    Ok(r)
}

pub fn accelerated_to_csv(t: &AcceleratedTrace) -> Vec<u8> {
    let mut out = format!("{ACCELERATED_CSV_HEADER}\n").into_bytes();
    {
        let mut w = writer(&mut out);
        for r in &t.rows {
            let v = r.v_sq.as_ref().map(ToString::to_string).unwrap_or_default();
            w.write_record([
                r.w.to_string(),
                r.x.to_string(),
                r.y.to_string(),
                r.z().to_string(),
                r.u.to_string(),
                r.eta.to_string(),
                v,
            ])
            .expect("writing to memory");
        }
        w.flush().expect("writing to memory");
    }
    out
}

pub fn accelerated_from_csv(data: &[u8]) -> Result<AcceleratedTrace> {
    let mut rows = Vec::new();
    for record in reader(data, ACCELERATED_CSV_HEADER)?.records() {
        let record = record.map_err(csv_err)?;
        let x: Natural = field(&record, 1, "x")?;
        let u: u64 = field(&record, 4, "u")?;
        let z: Natural = field(&record, 3, "z")?;
        if z.valuation() != u || !odd_part(&z).is_one() {
            return Err(Error::Parse(format!("z = {z} is not 2^{u}")));
        }
        let v_sq = match record.get(6) {
            Some("") | None => None,
            Some(_) => Some(field::<BigUint>(&record, 6, "v_sq")?),
        };
        rows.push(TraceRow {
            w: field(&record, 0, "w")?,
            x,
            y: field(&record, 2, "y")?,
            u,
            eta: field::<BigInt>(&record, 5, "eta")?,
            v_sq,
        });
    }
    AcceleratedTrace::from_rows(rows)
}

pub fn classical_to_csv(t: &ClassicalTrajectory) -> Vec<u8> {
    let mut out = format!("{CLASSICAL_CSV_HEADER}\n").into_bytes();
    {
        let mut w = writer(&mut out);
        for (k, value) in t.values.iter().enumerate() {
            let delta = t.deltas.get(k).map(ToString::to_string).unwrap_or_default();
            w.write_record([k.to_string(), value.to_string(), delta])
                .expect("writing to memory");
        }
        w.flush().expect("writing to memory");
    }
    out
}

pub fn classical_from_csv(data: &[u8]) -> Result<ClassicalTrajectory> {
    let mut values = Vec::new();
    let mut deltas = Vec::new();
    for record in reader(data, CLASSICAL_CSV_HEADER)?.records() {
        let record = record.map_err(csv_err)?;
        let k: usize = field(&record, 0, "k")?;
        if k != values.len() {
            return Err(Error::Parse(format!("row index {k} out of sequence")));
        }
        values.push(field::<Natural>(&record, 1, "value")?);
        match record.get(2) {
            Some("") | None => {}
            Some(_) => deltas.push(field::<BigInt>(&record, 2, "delta")?),
        }
    }
    let t = ClassicalTrajectory::from_values(values)?;
    if t.deltas != deltas {
        return Err(Error::Parse("delta column disagrees with values".into()));
    }
    Ok(t)
}

pub fn accelerated_to_json(t: &AcceleratedTrace) -> String {
    serde_json::to_string_pretty(t).expect("trace serializes")
}

pub fn accelerated_from_json(s: &str) -> Result<AcceleratedTrace> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("json: {e}")))
}

pub fn classical_to_json(t: &ClassicalTrajectory) -> String {
    serde_json::to_string_pretty(t).expect("trajectory serializes")
}

pub fn classical_from_json(s: &str) -> Result<ClassicalTrajectory> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("json: {e}")))
}

/// `sqrt(v_sq)` truncated (not rounded) to one decimal place. Zero renders
/// as a bare `0`.
pub fn truncated_distance(v_sq: &BigUint) -> String {
    if v_sq.is_zero() {
        return "0".to_string();
    }
    let tenths = (v_sq * 100u32).sqrt();
    let whole = &tenths / 10u32;
    let frac = &tenths % 10u32;
    format!("{whole}.{frac}")
}

/// Right-aligns each column to its widest cell, two spaces between columns.
fn render_columns(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Renders the trace with columns `w x y z u eta v`; `z` is shown as
/// `2^u` and `v` as the truncated distance. The last row of a terminated
/// trace sits on the fixed point, whose distance is 0.
pub fn accelerated_table(t: &AcceleratedTrace) -> String {
    let mut rows = vec![["w", "x", "y", "z", "u", "eta", "v"].map(String::from).to_vec()];
    let last = t.rows.len() - 1;
    for (i, r) in t.rows.iter().enumerate() {
        let v = match &r.v_sq {
            Some(v) => truncated_distance(v),
            None if i == last && t.terminated => "0".to_string(),
            None => "-".to_string(),
        };
        rows.push(vec![
            r.w.to_string(),
            r.x.to_string(),
            r.y.to_string(),
            format!("2^{}", r.u),
            r.u.to_string(),
            r.eta.to_string(),
            v,
        ]);
    }
    render_columns(&rows)
}

/// Horizontal layout: a row of `k`, a row of `C^k(n)` and a row of
/// `Delta_k`.
pub fn classical_table(t: &ClassicalTrajectory) -> String {
    let mut k = vec!["k".to_string()];
    let mut values = vec!["C^k(n)".to_string()];
    let mut deltas = vec!["Delta_k".to_string()];
    for (i, v) in t.values.iter().enumerate() {
        k.push(i.to_string());
        values.push(v.to_string());
        deltas.push(t.deltas.get(i).map(ToString::to_string).unwrap_or_default());
    }
    render_columns(&[k, values, deltas])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphMap {
    /// `n -> C(n)` for every `1 <= n <= N`.
    Classical,
    /// `y -> O(C(y))` for every odd `y <= N`.
    Accelerated,
}

pub fn graph_dot(max_node: u64, map: GraphMap, limit: u64) -> Result<String> {
    if max_node == 0 || max_node > limit {
        return Err(Error::InvalidRange {
            lo: 1,
            hi: max_node,
        });
    }
    let (name, first, stride) = match map {
        GraphMap::Classical => ("collatz", 1, 1),
        GraphMap::Accelerated => ("collatz_odd", 1, 2),
    };
    let mut out = format!("digraph {name} {{\n");
    for n in (first..=max_node).step_by(stride) {
        let node = Natural::from_u64(n)?;
        let next = collatz_step(&node);
        let target = match map {
            GraphMap::Classical => next,
            GraphMap::Accelerated => odd_part(&next),
        };
        writeln!(out, "  {n} -> {target};").expect("writing to string");
    }
    out.push_str("}\n");
    Ok(out)
}
