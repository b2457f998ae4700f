//! Plot-ready tables from `results.csv` and `temporal.csv`.
//!
//! `report/contrast.csv` columns, one row per stimulus with results:
//! `family,subtype,contrast_index,ct,ct_unit,n,rt_n,rt_mean_ms,rt_sem_ms,si_n,si_mean,si_sem`.
//! Reaction times skip excluded and outlier scanpaths. `report/temporal.csv`
//! repeats the evaluation's temporal series. `report/report.txt` renders both
//! as text tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::eval::{FLAG_EXCLUDED, FLAG_LOC_OUTLIER, RESULTS_FILE, TEMPORAL_FILE, TEMPORAL_HEADER};
use crate::io::{cell, csv_err, write_atomic};
use crate::manifest::Manifest;
use crate::{Error, Result};

pub const REPORT_DIR: &str = "report";
pub const CONTRAST_HEADER: [&str; 12] = [
    "family", "subtype", "contrast_index", "ct", "ct_unit", "n", "rt_n", "rt_mean_ms", "rt_sem_ms", "si_n", "si_mean",
    "si_sem",
];

#[derive(Debug, Deserialize)]
struct ResultRecord {
    stimulus: String,
    #[allow(dead_code)]
    participant: String,
    si: Option<f64>,
    rt_loc_ms: Option<f64>,
    flags: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContrastLine {
    pub family: u8,
    pub subtype: String,
    pub contrast_index: usize,
    pub ct: f64,
    pub ct_unit: String,
    pub n: usize,
    pub rt: Vec<f64>,
    pub si: Vec<f64>,
}

/// Mean and standard error; the error needs two samples.
pub fn mean_sem(v: &[f64]) -> (Option<f64>, Option<f64>) {
    if v.is_empty() {
        return (None, None);
    }
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (Some(m), None);
    }
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (Some(m), Some((var / n).sqrt()))
}

fn read_results(path: &Path) -> Result<Vec<ResultRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::format(path, e))?;
    rdr.deserialize()
        .map(|r| {
            r.map_err(|e| Error::Parse {
                path: path.into(),
                line: e.position().map_or(0, |p| p.line() as usize),
                msg: e.to_string(),
            })
        })
        .collect()
}

pub fn contrast_lines(dir: &Path) -> Result<Vec<ContrastLine>> {
    let manifest = Manifest::load(dir)?;
    let mut lines: BTreeMap<(u8, String, usize), ContrastLine> = BTreeMap::new();
    for r in read_results(&dir.join(RESULTS_FILE))? {
        let Some(e) = manifest.get(&r.stimulus) else { continue };
        let line = lines.entry((e.family, e.subtype.clone(), e.contrast_index)).or_insert_with(|| ContrastLine {
            family: e.family,
            subtype: e.subtype.clone(),
            contrast_index: e.contrast_index,
            ct: e.ct,
            ct_unit: e.ct_unit.clone(),
            n: 0,
            rt: Vec::new(),
            si: Vec::new(),
        });
        line.n += 1;
        let dropped = r.flags.split(';').any(|f| f == FLAG_EXCLUDED || f == FLAG_LOC_OUTLIER);
        if let Some(v) = r.rt_loc_ms.filter(|_| !dropped) {
            line.rt.push(v);
        }
        if let Some(v) = r.si {
            line.si.push(v);
        }
    }
    Ok(lines.into_values().collect())
}

fn contrast_csv(lines: &[ContrastLine]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CONTRAST_HEADER).map_err(csv_err)?;
    for l in lines {
        let (rm, rs) = mean_sem(&l.rt);
        let (sm, ss) = mean_sem(&l.si);
        w.write_record([
            l.family.to_string(),
            l.subtype.clone(),
            l.contrast_index.to_string(),
            l.ct.to_string(),
            l.ct_unit.clone(),
            l.n.to_string(),
            l.rt.len().to_string(),
            cell(rm),
            cell(rs),
            l.si.len().to_string(),
            cell(sm),
            cell(ss),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Invalid(e.to_string()))
}

fn fmt_opt(v: Option<f64>, prec: usize) -> String {
    v.map_or("-".into(), |v| format!("{v:.prec$}"))
}

fn text_report(lines: &[ContrastLine], temporal: &[Vec<String>]) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "Reaction time and saliency index by contrast");
    let _ = writeln!(t);
    let _ = writeln!(
        t,
        "{:>3}  {:<20} {:>2} {:>10} {:<8} {:>4} {:>16} {:>16}",
        "fam", "subtype", "x", "ct", "unit", "n", "rt ms", "si"
    );
    for l in lines {
        let (rm, rs) = mean_sem(&l.rt);
        let (sm, ss) = mean_sem(&l.si);
        let _ = writeln!(
            t,
            "{:>3}  {:<20} {:>2} {:>10.3} {:<8} {:>4} {:>16} {:>16}",
            l.family,
            l.subtype,
            l.contrast_index,
            l.ct,
            l.ct_unit,
            l.n,
            format!("{} ± {}", fmt_opt(rm, 0), fmt_opt(rs, 0)),
            format!("{} ± {}", fmt_opt(sm, 3), fmt_opt(ss, 3)),
        );
    }
    let _ = writeln!(t);
    let _ = writeln!(t, "Metrics by fixation number");
    let _ = writeln!(t);
    let _ = writeln!(
        t,
        "{:<14} {:>3} {:>9} {:>9} {:>9} {:>9}",
        "task", "k", "si", "fd ms", "sa deg", "dc deg"
    );
    for r in temporal {
        let num = |i: usize, p: usize| fmt_opt(r.get(i).and_then(|s| s.parse().ok()), p);
        let _ = writeln!(
            t,
            "{:<14} {:>3} {:>9} {:>9} {:>9} {:>9}",
            r[0],
            r[1],
            num(2, 3),
            num(5, 0),
            num(6, 2),
            num(7, 2)
        );
    }
    t
}

/// Write the report directory. Missing or empty inputs give header-only
/// tables.
pub fn run(dir: &Path) -> Result<Vec<ContrastLine>> {
    let lines = contrast_lines(dir)?;
    let tpath = dir.join(TEMPORAL_FILE);
    let mut temporal = Vec::new();
    if tpath.exists() {
        let mut rdr = csv::Reader::from_path(&tpath).map_err(|e| Error::format(&tpath, e))?;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::format(&tpath, e))?;
            if rec.len() != TEMPORAL_HEADER.len() {
                return Err(Error::format(&tpath, "unexpected column count"));
            }
            temporal.push(rec.iter().map(str::to_string).collect::<Vec<_>>());
        }
    }
    let mut tw = csv::Writer::from_writer(Vec::new());
    tw.write_record(TEMPORAL_HEADER).map_err(csv_err)?;
    for r in &temporal {
        tw.write_record(r).map_err(csv_err)?;
    }
    let out = dir.join(REPORT_DIR);
    write_atomic(&out.join("contrast.csv"), &contrast_csv(&lines)?)?;
    write_atomic(&out.join("temporal.csv"), &tw.into_inner().map_err(|e| Error::Invalid(e.to_string()))?)?;
    write_atomic(&out.join("report.txt"), text_report(&lines, &temporal).as_bytes())?;
    Ok(lines)
}
