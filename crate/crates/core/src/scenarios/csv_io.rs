//! CSV ingestion and export of trace and grid data.
//!
//! Traces: `vehicle_id,timestep,speed,trip_position`, timesteps strictly
//! increasing per vehicle. Grid: `timestep,household_id,production,baseline`,
//! timesteps non-decreasing through the file and the same household set at
//! every timestep. Both are comma separated UTF-8 with a header line.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::grid::GridRecord;
use super::sensing::TraceRecord;
use crate::error::{data, Error, Result};

pub const TRACE_COLUMNS: [&str; 4] = ["vehicle_id", "timestep", "speed", "trip_position"];
pub const GRID_COLUMNS: [&str; 4] = ["timestep", "household_id", "production", "baseline"];

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line() as usize);
    data(line, err.to_string())
}

/// Column index of every expected name, or a data error on line 1.
fn locate(headers: &csv::StringRecord, expected: &[&str]) -> Result<Vec<usize>> {
    expected
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h.trim() == *name)
                .ok_or_else(|| data(1, format!("missing column `{name}`")))
        })
        .collect()
}

struct Row<'a> {
    record: &'a csv::StringRecord,
    line: usize,
}

impl Row<'_> {
    fn field(&self, col: usize, name: &str) -> Result<&str> {
        self.record
            .get(col)
            .map(str::trim)
            .ok_or_else(|| data(self.line, format!("missing field `{name}`")))
    }

    fn number(&self, col: usize, name: &str) -> Result<f64> {
        let raw = self.field(col, name)?;
        let v: f64 = raw
            .parse()
            .map_err(|_| data(self.line, format!("`{name}` is not a number: `{raw}`")))?;
        if !v.is_finite() {
            return Err(data(self.line, format!("`{name}` is not finite")));
        }
        Ok(v)
    }

    fn non_negative(&self, col: usize, name: &str) -> Result<f64> {
        let v = self.number(col, name)?;
        if v < 0.0 {
            return Err(data(self.line, format!("`{name}` is negative: {v}")));
        }
        Ok(v)
    }

    fn timestep(&self, col: usize) -> Result<u64> {
        let raw = self.field(col, "timestep")?;
        raw.parse()
            .map_err(|_| data(self.line, format!("`timestep` is not a non-negative integer: `{raw}`")))
    }
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input)
}

/// Parse traces, sorted by (timestep, vehicle_id).
pub fn read_traces<R: Read>(input: R) -> Result<Vec<TraceRecord>> {
    let mut rdr = reader(input);
    let cols = locate(rdr.headers().map_err(csv_err)?, &TRACE_COLUMNS)?;
    let mut last_seen: HashMap<String, u64> = HashMap::new();
    let mut out = Vec::new();
    let mut record = csv::StringRecord::new();
    while rdr.read_record(&mut record).map_err(csv_err)? {
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = Row { record: &record, line };
        let vehicle_id = row.field(cols[0], "vehicle_id")?.to_owned();
        if vehicle_id.is_empty() {
            return Err(data(line, "empty `vehicle_id`"));
        }
        let timestep = row.timestep(cols[1])?;
        let speed = row.non_negative(cols[2], "speed")?;
        let trip_position = row.number(cols[3], "trip_position")?;
        if !(0.0..=1.0).contains(&trip_position) {
            return Err(data(line, format!("`trip_position` outside [0, 1]: {trip_position}")));
        }
        if let Some(prev) = last_seen.insert(vehicle_id.clone(), timestep) {
            if timestep <= prev {
                return Err(data(
                    line,
                    format!("non-monotone timestep {timestep} for vehicle {vehicle_id} (previous {prev})"),
                ));
            }
        }
        out.push(TraceRecord {
            vehicle_id,
            timestep,
            speed,
            trip_position,
        });
    }
    out.sort_by(|a, b| a.timestep.cmp(&b.timestep).then_with(|| a.vehicle_id.cmp(&b.vehicle_id)));
    Ok(out)
}

/// Parse grid rows into one record per timestep, households in ascending id
/// order.
pub fn read_grid<R: Read>(input: R) -> Result<Vec<GridRecord>> {
    let mut rdr = reader(input);
    let cols = locate(rdr.headers().map_err(csv_err)?, &GRID_COLUMNS)?;
    // timestep -> (first line, household -> (production, baseline))
    let mut steps: BTreeMap<u64, (usize, BTreeMap<String, (f64, f64)>)> = BTreeMap::new();
    let mut last_step: Option<u64> = None;
    let mut record = csv::StringRecord::new();
    while rdr.read_record(&mut record).map_err(csv_err)? {
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = Row { record: &record, line };
        let timestep = row.timestep(cols[0])?;
        let household = row.field(cols[1], "household_id")?.to_owned();
        if household.is_empty() {
            return Err(data(line, "empty `household_id`"));
        }
        let production = row.non_negative(cols[2], "production")?;
        let baseline = row.non_negative(cols[3], "baseline")?;
        if last_step.is_some_and(|prev| timestep < prev) {
            return Err(data(
                line,
                format!("non-monotone timestep {timestep} after {}", last_step.unwrap_or(0)),
            ));
        }
        last_step = Some(timestep);
        let entry = steps.entry(timestep).or_insert_with(|| (line, BTreeMap::new()));
        if entry.1.insert(household.clone(), (production, baseline)).is_some() {
            return Err(data(
                line,
                format!("duplicate household {household} at timestep {timestep}"),
            ));
        }
    }

    let mut expected: Option<BTreeSet<String>> = None;
    let mut out = Vec::with_capacity(steps.len());
    for (timestep, (line, households)) in steps {
        let ids: BTreeSet<String> = households.keys().cloned().collect();
        match &expected {
            None => expected = Some(ids),
            Some(want) if *want != ids => {
                return Err(data(
                    line,
                    format!("timestep {timestep} lists a different household set"),
                ));
            }
            Some(_) => {}
        }
        let (household_ids, (production, baseline)): (Vec<String>, (Vec<f64>, Vec<f64>)) =
            households.into_iter().unzip();
        out.push(GridRecord {
            timestep,
            household_ids,
            production,
            baseline,
        });
    }
    Ok(out)
}

pub fn write_traces<W: Write>(out: W, records: &[TraceRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_COLUMNS).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.vehicle_id.clone(),
            r.timestep.to_string(),
            r.speed.to_string(),
            r.trip_position.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| data(0, e.to_string()))
}

pub fn write_grid<W: Write>(out: W, records: &[GridRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GRID_COLUMNS).map_err(csv_err)?;
    for r in records {
        for (i, id) in r.household_ids.iter().enumerate() {
            w.write_record([
                r.timestep.to_string(),
                id.clone(),
                r.production[i].to_string(),
                r.baseline[i].to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| data(0, e.to_string()))
}

pub fn ingest_trace_csv(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>> {
    let path = path.as_ref();
    read_traces(File::open(path).map_err(io_err(path))?)
}

pub fn ingest_grid_csv(path: impl AsRef<Path>) -> Result<Vec<GridRecord>> {
    let path = path.as_ref();
    read_grid(File::open(path).map_err(io_err(path))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(err: Error) -> usize {
        match err {
            Error::Data { line, .. } => line,
            other => panic!("expected a data error, got {other}"),
        }
    }

    #[test]
    fn empty_data_section() {
        assert!(read_traces("vehicle_id,timestep,speed,trip_position\n".as_bytes())
            .unwrap()
            .is_empty());
        assert!(read_grid("timestep,household_id,production,baseline\n".as_bytes())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn negative_speed_reports_line() {
        let csv = "vehicle_id,timestep,speed,trip_position\na,0,3,0\na,1,-2,0.5\n";
        assert_eq!(line_of(read_traces(csv.as_bytes()).unwrap_err()), 3);
    }

    #[test]
    fn missing_column() {
        let csv = "vehicle_id,timestep,speed\na,0,3\n";
        assert_eq!(line_of(read_traces(csv.as_bytes()).unwrap_err()), 1);
    }

    #[test]
    fn non_numeric_field() {
        let csv = "timestep,household_id,production,baseline\n0,h1,abc,1\n";
        assert_eq!(line_of(read_grid(csv.as_bytes()).unwrap_err()), 2);
    }

    #[test]
    fn non_monotone_timesteps() {
        let csv = "vehicle_id,timestep,speed,trip_position\na,5,3,0\nb,1,3,0\na,5,1,1\n";
        assert_eq!(line_of(read_traces(csv.as_bytes()).unwrap_err()), 4);
        let csv = "timestep,household_id,production,baseline\n1,h1,1,1\n0,h1,1,1\n";
        assert_eq!(line_of(read_grid(csv.as_bytes()).unwrap_err()), 3);
    }

    #[test]
    fn traces_are_sorted() {
        let csv = "vehicle_id,timestep,speed,trip_position\nb,0,1,0\nb,1,2,1\na,1,3,0.5\n";
        let recs = read_traces(csv.as_bytes()).unwrap();
        let keys: Vec<_> = recs.iter().map(|r| (r.timestep, r.vehicle_id.as_str())).collect();
        assert_eq!(keys, vec![(0, "b"), (1, "a"), (1, "b")]);
    }

    #[test]
    fn grid_groups_by_timestep() {
        let csv = "timestep,household_id,production,baseline\n0,h2,5,1\n0,h1,2,1\n1,h1,3,2\n1,h2,0,1\n";
        let recs = read_grid(csv.as_bytes()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].household_ids, vec!["h1", "h2"]);
        assert_eq!(recs[0].production, vec![2.0, 5.0]);
        assert_eq!(recs[0].surplus(), 5.0);
    }

    #[test]
    fn grid_household_sets_must_match() {
        let csv = "timestep,household_id,production,baseline\n0,h1,1,1\n0,h2,1,1\n1,h1,1,1\n";
        assert_eq!(line_of(read_grid(csv.as_bytes()).unwrap_err()), 4);
        let dup = "timestep,household_id,production,baseline\n0,h1,1,1\n0,h1,1,1\n";
        assert_eq!(line_of(read_grid(dup.as_bytes()).unwrap_err()), 3);
    }

    #[test]
    fn missing_file_names_path() {
        let err = ingest_trace_csv("/nonexistent/traces.csv").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/traces.csv"));
    }
}
