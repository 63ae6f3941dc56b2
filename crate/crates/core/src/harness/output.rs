//! Long-format result rows and their CSV form.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{data, Error, Result};
use crate::metrics::Measure;
use crate::scenarios::ScenarioKind;
use crate::strategies::StrategyKind;

pub const RESULT_HEADER: [&str; 8] = [
    "scenario",
    "strategy",
    "population",
    "repetition",
    "timestep",
    "measure",
    "value",
    "ci",
];

/// A repetition index, or the cross-repetition aggregate (`agg`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Repetition {
    Run(usize),
    Aggregate,
}

impl fmt::Display for Repetition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Repetition::Run(k) => write!(f, "{k}"),
            Repetition::Aggregate => f.write_str("agg"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub scenario: ScenarioKind,
    pub strategy: StrategyKind,
    pub population: usize,
    pub repetition: Repetition,
    /// 1-based.
    pub timestep: usize,
    pub measure: Measure,
    /// Per-run value, or the mean across repetitions for aggregate rows.
    pub value: f64,
    /// 95% half-width; aggregate rows only.
    pub ci: Option<f64>,
}

fn write_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.to_path_buf(),
        source: match e.into_kind() {
            csv::ErrorKind::Io(io) => io,
            other => std::io::Error::other(format!("{other:?}")),
        },
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[ResultRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_HEADER)?;
    for r in rows {
        w.write_record([
            r.scenario.name().to_owned(),
            r.strategy.name().to_owned(),
            r.population.to_string(),
            r.repetition.to_string(),
            r.timestep.to_string(),
            r.measure.name().to_owned(),
            r.value.to_string(),
            r.ci.map(|c| c.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Write `rows` as CSV to `path`, header first.
pub fn write_results(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_rows(BufWriter::new(file), rows).map_err(write_err(path))
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| data(1, e.to_string()))?
        .clone();
    if headers.iter().ne(RESULT_HEADER) {
        return Err(data(1, format!("unexpected header `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            data(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |what: &str| data(line, format!("invalid {what}"));
        let num = |i: usize, what: &str| rec[i].parse::<usize>().map_err(|_| bad(what));
        rows.push(ResultRow {
            scenario: rec[0].parse().map_err(|_| bad("scenario"))?,
            strategy: rec[1].parse().map_err(|_| bad("strategy"))?,
            population: num(2, "population")?,
            repetition: match &rec[3] {
                "agg" => Repetition::Aggregate,
                _ => Repetition::Run(num(3, "repetition")?),
            },
            timestep: num(4, "timestep")?,
            measure: rec[5].parse().map_err(|_| bad("measure"))?,
            value: rec[6].parse().map_err(|_| bad("value"))?,
            ci: match &rec[7] {
                "" => None,
                s => Some(s.parse().map_err(|_| bad("ci"))?),
            },
        });
    }
    Ok(rows)
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_rows(file)
}
