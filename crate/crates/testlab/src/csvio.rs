//! CSV formats for instances, event logs, results and statistics.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use testlab_core::analysis::Stats;
use testlab_core::{Instance, Job, Schedule};
use thiserror::Error;

pub const INSTANCE_HEADER: [&str; 4] = ["id", "u", "t", "p"];
pub const EVENT_HEADER: [&str; 6] = ["event_index", "job_id", "kind", "start", "end", "share_set"];
pub const RESULT_HEADER: [&str; 6] = ["alg", "instance", "n", "alg_value", "opt_value", "ratio"];
pub const STATS_HEADER: [&str; 10] = ["alg", "family", "n", "trials", "mean", "std", "ci_lo", "ci_hi", "min", "max"];

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: u64, reason: String },
}

impl From<io::Error> for CsvError {
    fn from(source: io::Error) -> Self {
        CsvError::Io { path: "<stream>".into(), source }
    }
}

/// Formats `x` with 12 significant digits, trailing zeros trimmed.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).clamp(0, 40) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn read_instance(path: &Path) -> Result<Instance, CsvError> {
    let file = File::open(path).map_err(|source| CsvError::Io { path: path.display().to_string(), source })?;
    read_instance_from(file)
}

/// Reads `id,u,t,p` rows. Rows may come in any order; ids must be exactly
/// `0..n`.
pub fn read_instance_from(reader: impl Read) -> Result<Instance, CsvError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != INSTANCE_HEADER {
        return Err(CsvError::Malformed {
            line: 1,
            reason: format!("expected header id,u,t,p, got {}", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut jobs = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<&str, CsvError> {
            record
                .get(i)
                .ok_or_else(|| CsvError::Malformed { line, reason: format!("missing column {}", INSTANCE_HEADER[i]) })
        };
        let id: usize = field(0)?
            .parse()
            .map_err(|_| CsvError::Malformed { line, reason: format!("bad id {:?}", record.get(0).unwrap_or("")) })?;
        let num = |i: usize| -> Result<f64, CsvError> {
            let raw = field(i)?;
            raw.parse::<f64>()
                .map_err(|_| CsvError::Malformed { line, reason: format!("bad {} {raw:?}", INSTANCE_HEADER[i]) })
        };
        let job = Job::new(id, num(1)?, num(2)?, num(3)?);
        if !job.is_valid() {
            return Err(CsvError::Malformed { line, reason: format!("job {id} violates 0 <= p <= u, t >= 0") });
        }
        jobs.push(job);
    }
    jobs.sort_by_key(|j| j.id);
    if let Some((pos, j)) = jobs.iter().enumerate().find(|(pos, j)| j.id != *pos) {
        return Err(CsvError::Malformed {
            line: 0,
            reason: format!("ids must be 0..{}; found {} at position {pos}", jobs.len(), j.id),
        });
    }
    Ok(Instance { jobs })
}

/// Writes `id,u,t,p` with shortest round-trip formatting.
pub fn write_instance(w: impl Write, instance: &Instance) -> Result<(), CsvError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(INSTANCE_HEADER)?;
    for j in &instance.jobs {
        wtr.write_record([j.id.to_string(), j.u.to_string(), j.t.to_string(), j.p.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_events(w: impl Write, schedule: &Schedule) -> Result<(), CsvError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(EVENT_HEADER)?;
    for (i, e) in schedule.events.iter().enumerate() {
        let share = e
            .share_set
            .as_ref()
            .map(|s| s.iter().map(|id| id.to_string()).collect::<Vec<_>>().join(";"))
            .unwrap_or_default();
        wtr.write_record([
            i.to_string(),
            e.job_id.to_string(),
            e.kind.name().to_string(),
            e.start.to_string(),
            e.end.to_string(),
            share,
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub alg: String,
    pub instance: String,
    pub n: usize,
    pub alg_value: f64,
    pub opt_value: f64,
    pub ratio: f64,
}

impl ResultRow {
    fn fields(&self) -> [String; 6] {
        [
            self.alg.clone(),
            self.instance.clone(),
            self.n.to_string(),
            sig12(self.alg_value),
            sig12(self.opt_value),
            sig12(self.ratio),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatsRow {
    pub alg: String,
    pub family: String,
    pub n: usize,
    pub stats: Stats,
}

impl StatsRow {
    fn fields(&self) -> [String; 10] {
        let s = &self.stats;
        [
            self.alg.clone(),
            self.family.clone(),
            self.n.to_string(),
            s.trials.to_string(),
            sig12(s.mean),
            sig12(s.std),
            sig12(s.ci_lo),
            sig12(s.ci_hi),
            sig12(s.min),
            sig12(s.max),
        ]
    }
}

pub fn write_results(w: impl Write, rows: &[ResultRow]) -> Result<(), CsvError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(RESULT_HEADER)?;
    for row in rows {
        wtr.write_record(row.fields())?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_stats(w: impl Write, rows: &[StatsRow]) -> Result<(), CsvError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(STATS_HEADER)?;
    for row in rows {
        wtr.write_record(row.fields())?;
    }
    wtr.flush()?;
    Ok(())
}

/// Parses a results CSV back; used by tests and downstream tooling.
pub fn read_results_from(reader: impl Read) -> Result<Vec<ResultRow>, CsvError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |what: &str| CsvError::Malformed { line, reason: format!("bad {what}") };
        let get = |i: usize| record.get(i).ok_or_else(|| bad(RESULT_HEADER[i]));
        let num = |i: usize| get(i)?.parse::<f64>().map_err(|_| bad(RESULT_HEADER[i]));
        rows.push(ResultRow {
            alg: get(0)?.to_string(),
            instance: get(1)?.to_string(),
            n: get(2)?.parse().map_err(|_| bad("n"))?,
            alg_value: num(3)?,
            opt_value: num(4)?,
            ratio: num(5)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds_and_trims() {
        assert_eq!(sig12(4.0), "4");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(2.970_297_029_702_970_3), "2.9702970297");
        assert_eq!(sig12(161_803_398.874_989_5), "161803398.875");
        assert_eq!(sig12(f64::INFINITY), "inf");
        assert_eq!(sig12(0.0), "0");
    }

    #[test]
    fn instance_round_trip() {
        let inst = Instance::from_triples([(1.0 / 3.0, 0.1, 0.2), (2.0, 1.0, 0.0)]);
        let mut buf = Vec::new();
        write_instance(&mut buf, &inst).unwrap();
        assert_eq!(read_instance_from(buf.as_slice()).unwrap(), inst);
    }

    #[test]
    fn rows_may_be_shuffled() {
        let text = "id,u,t,p\n1,2,1,0\n0,1,1,1\n";
        let inst = read_instance_from(text.as_bytes()).unwrap();
        assert_eq!(inst, Instance::from_triples([(1.0, 1.0, 1.0), (2.0, 1.0, 0.0)]));
    }

    #[test]
    fn rejects_malformed_input() {
        for text in [
            "id,u,t\n0,1,1\n",
            "id,u,t,p\n0,1,1\n",
            "id,u,t,p\n0,1,x,1\n",
            "id,u,t,p\n0,1,1,2\n",
            "id,u,t,p\n1,1,1,1\n",
            "id,u,t,p\n0,1,1,1\n0,1,1,1\n",
        ] {
            assert!(read_instance_from(text.as_bytes()).is_err(), "{text:?}");
        }
    }
}
