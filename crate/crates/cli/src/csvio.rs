//! CSV schemas. Field order is fixed; floats use six significant digits.
//!
//! * `scores_<family>.csv`: `shard,sample,true,pred,method,m,A,P,R,FPR`
//! * `aggregate_<family>.csv`: `shard,sample,true,pred,method,members,A_avg,A_best,P_avg,P_best,R_avg,R_best`
//! * `summary_<family>.csv`: `method,samples` then `<X>_<avg|best>_<mean|std>` for X in A, P, R
//! * `scatter.csv`: `variant,method,P_stat,R_stat,std_P,std_R`
//! * `roc_<family>.csv`: `method,m,FPR,R`

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use cellbench::scoring::{
    FamilyKind, MethodSummary, Metrics, RocCurve, SampleAggregate, SampleKey, ScoreRecord,
};

use crate::error::{CliError, Result};

pub const DETAIL_HEADER: [&str; 10] = ["shard", "sample", "true", "pred", "method", "m", "A", "P", "R", "FPR"];
pub const AGGREGATE_HEADER: [&str; 12] = [
    "shard", "sample", "true", "pred", "method", "members", "A_avg", "A_best", "P_avg", "P_best", "R_avg", "R_best",
];
pub const SUMMARY_HEADER: [&str; 14] = [
    "method",
    "samples",
    "A_avg_mean",
    "A_avg_std",
    "P_avg_mean",
    "P_avg_std",
    "R_avg_mean",
    "R_avg_std",
    "A_best_mean",
    "A_best_std",
    "P_best_mean",
    "P_best_std",
    "R_best_mean",
    "R_best_std",
];
pub const SCATTER_HEADER: [&str; 6] = ["variant", "method", "P_stat", "R_stat", "std_P", "std_R"];
pub const ROC_HEADER: [&str; 4] = ["method", "m", "FPR", "R"];

pub fn detail_name(kind: FamilyKind) -> String {
    format!("scores_{kind}.csv")
}

pub fn aggregate_name(kind: FamilyKind) -> String {
    format!("aggregate_{kind}.csv")
}

pub fn summary_name(kind: FamilyKind) -> String {
    format!("summary_{kind}.csv")
}

pub fn roc_name(kind: FamilyKind) -> String {
    format!("roc_{kind}.csv")
}

/// `%g`-style formatting with six significant digits.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (5 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to what the CSV stores, so in-memory results equal re-read ones.
pub fn quantize(x: f64) -> f64 {
    fmt_g(x).parse().expect("formatted float")
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

fn finish(mut w: csv::Writer<BufWriter<File>>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| CliError::io(path, e))
}

fn key_fields(k: &SampleKey) -> [String; 5] {
    [
        k.shard.to_string(),
        k.sample.to_string(),
        k.true_class.to_string(),
        k.predicted_class.to_string(),
        k.method.clone(),
    ]
}

pub fn write_detail(path: &Path, records: &[ScoreRecord<f64>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(DETAIL_HEADER)?;
    for r in records {
        let mut row: Vec<String> = key_fields(&r.key).into();
        row.push(r.m.to_string());
        let m = &r.metrics;
        row.extend([m.accuracy, m.precision, m.recall, m.fpr].map(fmt_g));
        w.write_record(&row)?;
    }
    finish(w, path)
}

pub fn read_detail(path: &Path) -> Result<Vec<ScoreRecord<f64>>> {
    let f = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::Missing(path.display().to_string()),
        _ => CliError::io(path, e),
    })?;
    let mut r = csv::Reader::from_reader(std::io::BufReader::new(f));
    let bad = |line: usize, what: &str| CliError::Data(format!("{}: line {line}: {what}", path.display()));
    if r.headers()?.iter().ne(DETAIL_HEADER) {
        return Err(bad(1, "unexpected header"));
    }
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let int = |c: usize| row[c].parse::<usize>().map_err(|_| bad(line, DETAIL_HEADER[c]));
        let class = |c: usize| row[c].parse::<u8>().ok().filter(|&v| v < 10).ok_or_else(|| bad(line, DETAIL_HEADER[c]));
        let metric = |c: usize| {
            row[c]
                .parse::<f64>()
                .ok()
                .filter(|v| (0.0..=1.0).contains(v))
                .ok_or_else(|| bad(line, DETAIL_HEADER[c]))
        };
        out.push(ScoreRecord {
            key: SampleKey {
                method: row[4].to_string(),
                shard: int(0)?,
                sample: int(1)?,
                true_class: class(2)?,
                predicted_class: class(3)?,
            },
            m: int(5)?,
            metrics: Metrics {
                accuracy: metric(6)?,
                precision: metric(7)?,
                recall: metric(8)?,
                fpr: metric(9)?,
            },
        });
    }
    Ok(out)
}

pub fn write_aggregate(path: &Path, samples: &[SampleAggregate<f64>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(AGGREGATE_HEADER)?;
    for s in samples {
        let mut row: Vec<String> = key_fields(&s.key).into();
        row.push(s.members.to_string());
        row.extend(
            [
                s.avg.accuracy,
                s.best.accuracy,
                s.avg.precision,
                s.best.precision,
                s.avg.recall,
                s.best.recall,
            ]
            .map(fmt_g),
        );
        w.write_record(&row)?;
    }
    finish(w, path)
}

pub fn write_summary(path: &Path, methods: &[MethodSummary<f64>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(SUMMARY_HEADER)?;
    for m in methods {
        let mut row = vec![m.method.clone(), m.samples.to_string()];
        for t in [&m.avg, &m.best] {
            for s in [&t.accuracy, &t.precision, &t.recall] {
                row.push(fmt_g(s.mean));
                row.push(fmt_g(s.std));
            }
        }
        w.write_record(&row)?;
    }
    finish(w, path)
}

pub struct ScatterRow {
    pub variant: &'static str,
    pub method: String,
    pub precision: f64,
    pub recall: f64,
    pub std_precision: f64,
    pub std_recall: f64,
}

pub fn write_scatter(path: &Path, rows: &[ScatterRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(SCATTER_HEADER)?;
    for r in rows {
        let nums = [r.precision, r.recall, r.std_precision, r.std_recall].map(fmt_g);
        w.write_record([r.variant.to_string(), r.method.clone()].iter().chain(&nums))?;
    }
    finish(w, path)
}

pub fn write_roc(path: &Path, curves: &[RocCurve<f64>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(ROC_HEADER)?;
    for (method, points) in curves {
        for p in points {
            w.write_record([method.clone(), p.m.to_string(), fmt_g(p.fpr), fmt_g(p.recall)])?;
        }
    }
    finish(w, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(0.5), "0.5");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333");
        assert_eq!(fmt_g(2.0 / 3.0), "0.666667");
        assert_eq!(fmt_g(0.99999949), "0.999999");
        assert_eq!(fmt_g(0.9999996), "1");
        assert_eq!(fmt_g(123456.7), "123457");
        assert_eq!(fmt_g(1234567.0), "1.23457e+06");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(0.00001234), "1.234e-05");
        assert_eq!(fmt_g(-0.25), "-0.25");
    }

    #[test]
    fn quantize_is_idempotent() {
        for x in [0.123456789, 1e-9, 0.999999999, 0.5] {
            let q = quantize(x);
            assert_eq!(quantize(q), q);
        }
    }

    #[test]
    fn detail_round_trip() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("d.csv");
        let rec = ScoreRecord {
            key: SampleKey { method: "mock:lattice:16:0.5".into(), shard: 3, sample: 17, true_class: 6, predicted_class: 2 },
            m: 12,
            metrics: Metrics { accuracy: 0.25, precision: quantize(1.0 / 3.0), recall: 1.0, fpr: 0.0 },
        };
        write_detail(&path, std::slice::from_ref(&rec)).unwrap();
        assert_eq!(read_detail(&path).unwrap(), vec![rec]);
    }

    #[test]
    fn detail_rejects_bad_rows() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("d.csv");
        std::fs::write(&path, "shard,sample,true,pred,method,m,A,P,R,FPR\n0,0,3,3,x,0,0.5,1.5,0,0\n").unwrap();
        assert!(matches!(read_detail(&path), Err(CliError::Data(_))));
        std::fs::write(&path, "a,b\n").unwrap();
        assert!(matches!(read_detail(&path), Err(CliError::Data(_))));
        assert!(matches!(read_detail(&tmp.path().join("none.csv")), Err(CliError::Missing(_))));
    }
}
