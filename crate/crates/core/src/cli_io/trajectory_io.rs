//! Trajectory persistence in CSV or JSON.
//!
//! CSV layout: one metadata comment line, then the header
//! `step,t,f_00..f_{n-1,n-1},g_00..g_{n-1,n-1},pi_01..pi_{n-2,n-1},energy,casimir_1..,newton_iters,residual,correction`.
//! Empty f/g cells mean the record holds no such matrix. Floats are written
//! with 17 significant digits.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{Method, OutputFormat, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::integrators::{Trajectory, TrajectoryRecord};
use crate::lagrangians::Side;
use crate::lie_core::{algebra_dim, GroupElement, Momentum};

const CSV_MAGIC: &str = "# discrete-ep trajectory";

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_header(n: usize) -> Vec<String> {
    let mut h = vec!["step".to_string(), "t".to_string()];
    for prefix in ["f", "g"] {
        for i in 0..n {
            for j in 0..n {
                h.push(format!("{prefix}_{i}{j}"));
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            h.push(format!("pi_{i}{j}"));
        }
    }
    h.push("energy".into());
    for m in 1..=n / 2 {
        h.push(format!("casimir_{m}"));
    }
    h.extend(["newton_iters", "residual", "correction"].map(String::from));
    h
}

pub fn trajectory_to_csv(traj: &Trajectory) -> Result<String> {
    let n = traj.n;
    let mut buf = Vec::new();
    writeln!(
        buf,
        "{CSV_MAGIC} schema_version={SCHEMA_VERSION} n={n} method={} side={} h={}",
        traj.method,
        side_name(traj.side),
        fmt_f64(traj.h)
    )?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(csv_header(n)).map_err(csv_error)?;
        let empty = vec![String::new(); n * n];
        for r in &traj.records {
            let mut row = vec![r.step.to_string(), fmt_f64(r.time)];
            for m in [&r.f, &r.g] {
                match m {
                    Some(g) => row.extend(g.to_row_vec().into_iter().map(fmt_f64)),
                    None => row.extend(empty.iter().cloned()),
                }
            }
            row.extend(r.pi.coords().into_iter().map(fmt_f64));
            row.push(fmt_f64(r.energy));
            row.extend(r.casimirs.iter().copied().map(fmt_f64));
            row.push(r.newton_iters.to_string());
            row.push(fmt_f64(r.residual));
            row.push(fmt_f64(r.correction));
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush()?;
    }
    String::from_utf8(buf).map_err(|e| Error::Validation(e.to_string()))
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::SchemaMismatch(format!("{other:?}")),
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn parse_num<T: std::str::FromStr>(cell: &str, what: &str, line: usize) -> Result<T> {
    cell.trim().parse().map_err(|_| Error::Parse {
        line,
        column: 0,
        message: format!("{what}: cannot parse {cell:?}"),
    })
}

fn parse_meta(line: &str) -> Result<(usize, Method, Side, f64)> {
    let rest = line
        .strip_prefix(CSV_MAGIC)
        .ok_or_else(|| Error::SchemaMismatch("missing trajectory metadata line".into()))?;
    let mut schema = None;
    let mut n = None;
    let mut method = None;
    let mut side = None;
    let mut h = None;
    for kv in rest.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::SchemaMismatch(format!("bad metadata entry {kv:?}")))?;
        match k {
            "schema_version" => schema = Some(parse_num::<u32>(v, k, 1)?),
            "n" => n = Some(parse_num::<usize>(v, k, 1)?),
            "method" => method = Some(v.parse::<Method>().map_err(|e| Error::SchemaMismatch(e.to_string()))?),
            "side" => {
                side = Some(match v {
                    "left" => Side::Left,
                    "right" => Side::Right,
                    _ => return Err(Error::SchemaMismatch(format!("unknown side {v:?}"))),
                })
            }
            "h" => h = Some(parse_num::<f64>(v, k, 1)?),
            _ => return Err(Error::SchemaMismatch(format!("unknown metadata key {k:?}"))),
        }
    }
    if schema != Some(SCHEMA_VERSION) {
        return Err(Error::SchemaMismatch(format!("unsupported schema_version {schema:?}")));
    }
    match (n, method, side, h) {
        (Some(n), Some(m), Some(s), Some(h)) => Ok((n, m, s, h)),
        _ => Err(Error::SchemaMismatch("incomplete metadata line".into())),
    }
}

fn group_from_cells(n: usize, cells: &[&str], line: usize) -> Result<Option<GroupElement>> {
    if cells.iter().all(|c| c.is_empty()) {
        return Ok(None);
    }
    let vals = cells
        .iter()
        .map(|c| parse_num::<f64>(c, "matrix entry", line))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(GroupElement::from_row_slice(n, &vals)?))
}

pub fn trajectory_from_csv(text: &str) -> Result<Trajectory> {
    let (meta, body) = text
        .split_once('\n')
        .ok_or_else(|| Error::SchemaMismatch("empty trajectory file".into()))?;
    let (n, method, side, h) = parse_meta(meta.trim_end())?;
    let expected = csv_header(n);
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
    let header: Vec<String> = reader.headers().map_err(csv_error)?.iter().map(String::from).collect();
    if header != expected {
        return Err(Error::SchemaMismatch(format!(
            "header does not match the n = {n} layout: {}",
            header.join(",")
        )));
    }
    let nn = n * n;
    let d = algebra_dim(n);
    let m = n / 2;
    let mut records = Vec::new();
    for (k, row) in reader.records().enumerate() {
        let row = row.map_err(csv_error)?;
        let line = k + 3;
        let cells: Vec<&str> = row.iter().collect();
        if cells.len() != expected.len() {
            return Err(Error::SchemaMismatch(format!("line {line}: {} cells", cells.len())));
        }
        let mut at = 2;
        let f = group_from_cells(n, &cells[at..at + nn], line)?;
        at += nn;
        let g = group_from_cells(n, &cells[at..at + nn], line)?;
        at += nn;
        let pi_coords = cells[at..at + d]
            .iter()
            .map(|c| parse_num::<f64>(c, "pi", line))
            .collect::<Result<Vec<_>>>()?;
        at += d;
        let energy = parse_num(cells[at], "energy", line)?;
        at += 1;
        let casimirs = cells[at..at + m]
            .iter()
            .map(|c| parse_num::<f64>(c, "casimir", line))
            .collect::<Result<Vec<_>>>()?;
        at += m;
        records.push(TrajectoryRecord {
            step: parse_num(cells[0], "step", line)?,
            time: parse_num(cells[1], "t", line)?,
            f,
            g,
            pi: Momentum::from_coords(n, &pi_coords)?,
            energy,
            casimirs,
            newton_iters: parse_num(cells[at], "newton_iters", line)?,
            residual: parse_num(cells[at + 1], "residual", line)?,
            correction: parse_num(cells[at + 2], "correction", line)?,
        });
    }
    check_records(n, &records)?;
    Ok(Trajectory {
        n,
        method,
        side,
        h,
        records,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordRow {
    step: usize,
    t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<Vec<f64>>,
    pi: Vec<f64>,
    energy: f64,
    casimirs: Vec<f64>,
    newton_iters: usize,
    residual: f64,
    correction: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryFile {
    schema_version: u32,
    n: usize,
    method: Method,
    side: Side,
    h: f64,
    records: Vec<RecordRow>,
}

pub fn trajectory_to_json(traj: &Trajectory) -> Result<String> {
    let file = TrajectoryFile {
        schema_version: SCHEMA_VERSION,
        n: traj.n,
        method: traj.method,
        side: traj.side,
        h: traj.h,
        records: traj
            .records
            .iter()
            .map(|r| RecordRow {
                step: r.step,
                t: r.time,
                f: r.f.as_ref().map(|g| g.to_row_vec()),
                g: r.g.as_ref().map(|g| g.to_row_vec()),
                pi: r.pi.coords(),
                energy: r.energy,
                casimirs: r.casimirs.clone(),
                newton_iters: r.newton_iters,
                residual: r.residual,
                correction: r.correction,
            })
            .collect(),
    };
    serde_json::to_string(&file).map_err(|e| Error::Validation(e.to_string()))
}

pub fn trajectory_from_json(text: &str) -> Result<Trajectory> {
    let file: TrajectoryFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::SchemaMismatch(format!(
            "unsupported schema_version {}",
            file.schema_version
        )));
    }
    let n = file.n;
    let d = algebra_dim(n);
    let records = file
        .records
        .into_iter()
        .map(|r| {
            if r.pi.len() != d || r.casimirs.len() != n / 2 {
                return Err(Error::SchemaMismatch(format!("record {} has the wrong shape for n = {n}", r.step)));
            }
            let to_group = |v: Option<Vec<f64>>| v.map(|v| GroupElement::from_row_slice(n, &v)).transpose();
            Ok(TrajectoryRecord {
                step: r.step,
                time: r.t,
                f: to_group(r.f)?,
                g: to_group(r.g)?,
                pi: Momentum::from_coords(n, &r.pi)?,
                energy: r.energy,
                casimirs: r.casimirs,
                newton_iters: r.newton_iters,
                residual: r.residual,
                correction: r.correction,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    check_records(n, &records)?;
    Ok(Trajectory {
        n,
        method: file.method,
        side: file.side,
        h: file.h,
        records,
    })
}

fn check_records(n: usize, records: &[TrajectoryRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::SchemaMismatch("trajectory holds no records".into()));
    }
    if n < 2 {
        return Err(Error::SchemaMismatch(format!("n = {n}")));
    }
    Ok(())
}

pub fn trajectory_to_string(traj: &Trajectory, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => trajectory_to_csv(traj),
        OutputFormat::Json => trajectory_to_json(traj),
    }
}

pub fn write_trajectory(traj: &Trajectory, path: impl AsRef<Path>, format: OutputFormat) -> Result<()> {
    std::fs::write(path, trajectory_to_string(traj, format)?)?;
    Ok(())
}

/// Reads either format; JSON is recognized by a leading `{`.
pub fn read_trajectory(path: impl AsRef<Path>) -> Result<Trajectory> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        trajectory_from_json(&text)
    } else {
        trajectory_from_csv(&text)
    }
}
