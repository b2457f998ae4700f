//! Per-scanpath metrics, outlier flags, and the summary tables.

use std::collections::BTreeMap;
use std::path::Path;

use popout_core::gaze::{
    evaluate_scanpath, group_scanpaths, rt_outlier_limit, saccade_amplitudes, temporal_series, EvalResult,
    MaskIndex, Scanpath, SeriesMode, Si, StimulusGaze, TemporalPoint,
};
use popout_core::geometry::Point;
use popout_core::raster::AoiMask;
use popout_core::scene::{Family, Task};
use popout_core::stats::{kruskal_wallis, median, spearman, wilcoxon_signed_rank, CorrelationResult, GroupTestResult};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::io::{cell, csv_err, load_fixations, read_mask_png, write_atomic, write_json};
use crate::manifest::{Manifest, ManifestEntry};
use crate::{with_jobs, Error, Result};

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const TEMPORAL_FILE: &str = "temporal.csv";
pub const REJECTS_FILE: &str = "rejects.csv";

pub const RESULTS_HEADER: [&str; 8] =
    ["stimulus", "participant", "si", "rt_loc_ms", "rt_id_ms", "rt_return_ms", "dc_deg", "flags"];
pub const TEMPORAL_HEADER: [&str; 8] =
    ["task", "k", "si", "n_stimuli", "n_fixations", "mean_fd_ms", "mean_sa_deg", "mean_dc_deg"];

/// Result flags.
pub const FLAG_EXCLUDED: &str = "first-fixation-near-aoi";
pub const FLAG_LOC_OUTLIER: &str = "rt-loc-outlier";
pub const FLAG_ID_OUTLIER: &str = "rt-id-outlier";
pub const FLAG_ALL_INSIDE: &str = "si-all-inside";
pub const FLAG_NO_AOI: &str = "no-aoi";

/// One evaluated scanpath.
#[derive(Debug, Clone)]
pub struct Row {
    pub stimulus: String,
    pub participant: String,
    pub family: Family,
    pub subtype: String,
    pub contrast_index: usize,
    pub levels: usize,
    pub ct: f64,
    pub has_aoi: bool,
    pub result: EvalResult,
    pub fixation_count: usize,
    /// Fixations up to and including the first one in the AOI.
    pub fixations_to_target: usize,
    pub durations: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub loc_outlier: bool,
    pub id_outlier: bool,
}

impl Row {
    pub fn si(&self) -> Option<f64> {
        self.result.si.and_then(Si::value)
    }

    /// Localization time used in analyses: measured, not excluded, not an
    /// outlier.
    pub fn rt_loc(&self) -> Option<f64> {
        let l = &self.result.localization;
        l.rt.filter(|_| !l.excluded && !self.loc_outlier)
    }

    pub fn rt_id(&self) -> Option<f64> {
        self.result.rt_identification.filter(|_| !self.id_outlier)
    }

    /// Position of the contrast level in `[0, 1]`, comparable across families.
    pub fn level(&self) -> f64 {
        if self.levels > 1 {
            (self.contrast_index - 1) as f64 / (self.levels - 1) as f64
        } else {
            0.0
        }
    }

    pub fn flags(&self) -> Vec<&'static str> {
        let mut f = Vec::new();
        if !self.has_aoi {
            f.push(FLAG_NO_AOI);
        }
        if self.result.localization.excluded {
            f.push(FLAG_EXCLUDED);
        }
        if self.loc_outlier {
            f.push(FLAG_LOC_OUTLIER);
        }
        if self.id_outlier {
            f.push(FLAG_ID_OUTLIER);
        }
        if self.result.si == Some(Si::AllInside) {
            f.push(FLAG_ALL_INSIDE);
        }
        f
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reject {
    pub stimulus: String,
    pub participant: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub family: u8,
    pub name: String,
    pub task: String,
    pub n_scanpaths: usize,
    pub n_stimuli: usize,
    pub mean_si: Option<f64>,
    pub median_si: Option<f64>,
    pub median_rt_loc_ms: Option<f64>,
    pub median_rt_id_ms: Option<f64>,
    pub median_rt_return_ms: Option<f64>,
    pub median_dc_deg: Option<f64>,
    pub n_excluded: usize,
    pub n_rt_outliers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StimulusSummary {
    pub id: String,
    pub ct: f64,
    pub n_scanpaths: usize,
    pub median_si: Option<f64>,
    pub median_rt_loc_ms: Option<f64>,
    pub mean_dc_deg: Option<f64>,
}

/// Contrast against reaction time and saliency index for one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastRow {
    pub family: u8,
    pub name: String,
    pub ct_unit: String,
    pub rt: Option<CorrelationResult>,
    pub si: Option<CorrelationResult>,
}

/// Feature contrast against mean center distance per stimulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterRow {
    pub family: u8,
    pub name: String,
    pub fc_dc: Option<CorrelationResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalCorrelations {
    pub rt_si: Option<CorrelationResult>,
    /// Contrast level against localization time, pooled over families.
    pub ct_rt: Option<CorrelationResult>,
    pub ct_si: Option<CorrelationResult>,
    /// Per fixation: center distance against duration and incoming amplitude.
    pub dc_fd: Option<CorrelationResult>,
    pub dc_sa: Option<CorrelationResult>,
}

/// Easy (upper contrast levels) against hard (lower levels) targets, paired
/// per participant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyRow {
    pub task: String,
    pub measure: String,
    pub test: Option<GroupTestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRow {
    pub task: String,
    pub fc_dc: Option<CorrelationResult>,
    /// Localization time across families.
    pub rt_by_family: Option<GroupTestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n_scanpaths: usize,
    pub n_rejected: usize,
    pub n_stimuli: usize,
    pub density_sigma_px: f64,
    pub temporal_mode: SeriesMode,
    pub baseline_center_px: [f64; 2],
    pub mean_si: Option<f64>,
    pub median_si: Option<f64>,
    pub median_rt_loc_ms: Option<f64>,
    pub median_rt_id_ms: Option<f64>,
    pub families: Vec<FamilySummary>,
    /// Keyed `family/subtype/contrast_index`.
    pub stimuli: BTreeMap<String, StimulusSummary>,
    pub contrast_table: Vec<ContrastRow>,
    pub center_table: Vec<CenterRow>,
    pub global: GlobalCorrelations,
    pub tasks: Vec<TaskRow>,
    pub difficulty: Vec<DifficultyRow>,
}

pub struct Evaluation {
    pub rows: Vec<Row>,
    pub rejects: Vec<Reject>,
    pub summary: Summary,
    pub temporal: Vec<(String, TemporalPoint)>,
}

struct Stim<'a> {
    entry: &'a ManifestEntry,
    family: Family,
    mask: AoiMask,
    index: MaskIndex,
}

/// Evaluate `fixations` against the manifest in `cfg.out` and write results,
/// summary, temporal series and rejects there.
pub fn run(cfg: &Config, fixations: &Path) -> Result<Evaluation> {
    let records = load_fixations(fixations)?;
    let ev = evaluate(cfg, group_scanpaths(&records))?;
    write_outputs(&cfg.out, &ev)?;
    Ok(ev)
}

pub fn evaluate(cfg: &Config, scanpaths: Vec<Scanpath>) -> Result<Evaluation> {
    cfg.validate()?;
    let dir = cfg.out.as_path();
    let manifest = Manifest::load(dir)?;
    let ids: BTreeMap<&str, &ManifestEntry> = manifest.stimuli.iter().map(|e| (e.id.as_str(), e)).collect();

    let mut rejects = Vec::new();
    let mut accepted = Vec::new();
    for sp in scanpaths {
        if ids.contains_key(sp.stimulus.as_str()) {
            accepted.push(sp);
        } else {
            rejects.push(Reject {
                stimulus: sp.stimulus.clone(),
                participant: sp.participant.clone(),
                reason: "unknown stimulus".into(),
            });
        }
    }

    let used: Vec<&ManifestEntry> = {
        let mut seen: Vec<&str> = accepted.iter().map(|s| s.stimulus.as_str()).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.iter().map(|id| ids[id]).collect()
    };
    let sigma = cfg.density_sigma_px;
    let center = baseline_center(&accepted, &manifest);
    let (stims, rows) = with_jobs(cfg.jobs, || -> Result<_> {
        let stims: BTreeMap<String, Stim> = used
            .par_iter()
            .map(|&e| {
                let mask = read_mask_png(&dir.join(&e.mask))?;
                if (mask.width, mask.height) != (manifest.width_px, manifest.height_px) {
                    return Err(Error::format(dir.join(&e.mask), "mask size differs from the manifest canvas"));
                }
                let index = MaskIndex::new(&mask);
                Ok((e.id.clone(), Stim { entry: e, family: e.family()?, mask, index }))
            })
            .collect::<Result<_>>()?;

        let mut rows: Vec<Row> = accepted
            .par_iter()
            .map(|sp| {
                let s = &stims[&sp.stimulus];
                let result = evaluate_scanpath(sp, &s.mask, &s.index, s.family.task(), center, sigma);
                let first_in = sp.fixations.iter().position(|f| s.index.contains_px(f.pos()));
                Row {
                    stimulus: sp.stimulus.clone(),
                    participant: sp.participant.clone(),
                    family: s.family,
                    subtype: s.entry.subtype.clone(),
                    contrast_index: s.entry.contrast_index,
                    levels: s.family.levels(),
                    ct: s.entry.ct,
                    has_aoi: s.index.inside_count() > 0,
                    result,
                    fixation_count: sp.fixations.len(),
                    fixations_to_target: first_in.map_or(sp.fixations.len(), |i| i + 1),
                    durations: sp.fixations.iter().map(|f| f.duration_ms).collect(),
                    amplitudes: saccade_amplitudes(sp),
                    loc_outlier: false,
                    id_outlier: false,
                }
            })
            .collect();
        flag_outliers(&mut rows);
        Ok((stims, rows))
    })??;

    let temporal = temporal_rows(&stims, &accepted, center, sigma, cfg.temporal_mode);
    let summary = summarize(&rows, &manifest, rejects.len(), center, cfg);
    Ok(Evaluation { rows, rejects, summary, temporal })
}

/// Centroid of all first fixations; the canvas center when there are none.
fn baseline_center(scanpaths: &[Scanpath], manifest: &Manifest) -> Point {
    let firsts: Vec<Point> = scanpaths.iter().filter_map(|s| s.fixations.first()).map(|f| f.pos()).collect();
    if firsts.is_empty() {
        return Point::new(manifest.width_px as f64 / 2.0, manifest.height_px as f64 / 2.0);
    }
    let n = firsts.len() as f64;
    Point::new(firsts.iter().map(|p| p.x).sum::<f64>() / n, firsts.iter().map(|p| p.y).sum::<f64>() / n)
}

/// Mark reaction times above `mean + 2 sd` within each family.
fn flag_outliers(rows: &mut [Row]) {
    let mut by_family: BTreeMap<Family, Vec<usize>> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        by_family.entry(r.family).or_default().push(i);
    }
    for idx in by_family.values() {
        let loc: Vec<f64> = idx.iter().filter_map(|&i| rows[i].rt_loc()).collect();
        let id: Vec<f64> = idx.iter().filter_map(|&i| rows[i].rt_id()).collect();
        let (loc_limit, id_limit) = (rt_outlier_limit(&loc), rt_outlier_limit(&id));
        for &i in idx {
            let r = &mut rows[i];
            r.loc_outlier = matches!((r.rt_loc(), loc_limit), (Some(v), Some(l)) if v > l);
            r.id_outlier = matches!((r.rt_id(), id_limit), (Some(v), Some(l)) if v > l);
        }
    }
}

fn temporal_rows(
    stims: &BTreeMap<String, Stim>,
    scanpaths: &[Scanpath],
    center: Point,
    sigma: f64,
    mode: SeriesMode,
) -> Vec<(String, TemporalPoint)> {
    let mut grouped: BTreeMap<&str, Vec<Scanpath>> = BTreeMap::new();
    for sp in scanpaths {
        grouped.entry(sp.stimulus.as_str()).or_default().push(sp.clone());
    }
    let mut out = Vec::new();
    for (label, task) in [("all", None), ("free-viewing", Some(Task::FreeViewing)), ("visual-search", Some(Task::VisualSearch))] {
        let gaze: Vec<StimulusGaze> = grouped
            .iter()
            .filter(|(id, _)| task.is_none_or(|t| stims[**id].family.task() == t))
            .map(|(id, sps)| StimulusGaze { mask: &stims[*id].index, scanpaths: sps })
            .collect();
        out.extend(temporal_series(&gaze, center, sigma, mode).into_iter().map(|p| (label.to_string(), p)));
    }
    out
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn corr(pairs: &[(f64, f64)]) -> Option<CorrelationResult> {
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
    spearman(&x, &y).ok()
}

fn summarize(rows: &[Row], manifest: &Manifest, n_rejected: usize, center: Point, cfg: &Config) -> Summary {
    let si: Vec<f64> = rows.iter().filter_map(Row::si).collect();
    let loc: Vec<f64> = rows.iter().filter_map(Row::rt_loc).collect();
    let id: Vec<f64> = rows.iter().filter_map(Row::rt_id).collect();

    let mut families = Vec::new();
    let mut contrast_table = Vec::new();
    let mut center_table = Vec::new();
    for f in Family::ALL {
        let fr: Vec<&Row> = rows.iter().filter(|r| r.family == f).collect();
        if fr.is_empty() {
            continue;
        }
        let fsi: Vec<f64> = fr.iter().filter_map(|r| r.si()).collect();
        let floc: Vec<f64> = fr.iter().filter_map(|r| r.rt_loc()).collect();
        let fid: Vec<f64> = fr.iter().filter_map(|r| r.rt_id()).collect();
        let fret: Vec<f64> = fr.iter().filter_map(|r| r.result.rt_return).collect();
        let fdc: Vec<f64> = fr.iter().filter_map(|r| r.result.dc_mean).collect();
        let mut stim_ids: Vec<&str> = fr.iter().map(|r| r.stimulus.as_str()).collect();
        stim_ids.sort_unstable();
        stim_ids.dedup();
        families.push(FamilySummary {
            family: f.number(),
            name: f.name().into(),
            task: f.task().as_str().into(),
            n_scanpaths: fr.len(),
            n_stimuli: stim_ids.len(),
            mean_si: mean(&fsi),
            median_si: median(&fsi),
            median_rt_loc_ms: median(&floc),
            median_rt_id_ms: median(&fid),
            median_rt_return_ms: median(&fret),
            median_dc_deg: median(&fdc),
            n_excluded: fr.iter().filter(|r| r.result.localization.excluded).count(),
            n_rt_outliers: fr.iter().filter(|r| r.loc_outlier).count(),
        });
        let ct_unit = manifest
            .stimuli
            .iter()
            .find(|e| e.family == f.number())
            .map_or(String::new(), |e| e.ct_unit.clone());
        contrast_table.push(ContrastRow {
            family: f.number(),
            name: f.name().into(),
            ct_unit,
            rt: corr(&fr.iter().filter_map(|r| r.rt_loc().map(|v| (r.ct, v))).collect::<Vec<_>>()),
            si: corr(&fr.iter().filter_map(|r| r.si().map(|v| (r.ct, v))).collect::<Vec<_>>()),
        });
        let per_stim: Vec<(f64, f64)> = stim_ids
            .iter()
            .filter_map(|sid| {
                let sr: Vec<&&Row> = fr.iter().filter(|r| r.stimulus == *sid && r.has_aoi).collect();
                let dc: Vec<f64> = sr.iter().filter_map(|r| r.result.dc_mean).collect();
                Some((sr.first()?.ct, mean(&dc)?))
            })
            .collect();
        center_table.push(CenterRow { family: f.number(), name: f.name().into(), fc_dc: corr(&per_stim) });
    }

    let mut stimuli = BTreeMap::new();
    let mut keyed: BTreeMap<&str, Vec<&Row>> = BTreeMap::new();
    for r in rows {
        keyed.entry(r.stimulus.as_str()).or_default().push(r);
    }
    for (sid, sr) in &keyed {
        let r0 = sr[0];
        let key = format!("{:02}/{}/{:02}", r0.family.number(), r0.subtype, r0.contrast_index);
        let s: Vec<f64> = sr.iter().filter_map(|r| r.si()).collect();
        let l: Vec<f64> = sr.iter().filter_map(|r| r.rt_loc()).collect();
        let d: Vec<f64> = sr.iter().filter_map(|r| r.result.dc_mean).collect();
        stimuli.insert(
            key,
            StimulusSummary {
                id: sid.to_string(),
                ct: r0.ct,
                n_scanpaths: sr.len(),
                median_si: median(&s),
                median_rt_loc_ms: median(&l),
                mean_dc_deg: mean(&d),
            },
        );
    }

    let mut dc_fd = Vec::new();
    let mut dc_sa = Vec::new();
    for r in rows {
        for (k, p) in r.result.series.iter().enumerate() {
            dc_fd.push((p.dc, r.durations[k]));
            if k >= 1 {
                dc_sa.push((p.dc, r.amplitudes[k - 1]));
            }
        }
    }
    let global = GlobalCorrelations {
        rt_si: corr(&rows.iter().filter_map(|r| Some((r.rt_loc()?, r.si()?))).collect::<Vec<_>>()),
        ct_rt: corr(&rows.iter().filter_map(|r| Some((r.level(), r.rt_loc()?))).collect::<Vec<_>>()),
        ct_si: corr(&rows.iter().filter_map(|r| Some((r.level(), r.si()?))).collect::<Vec<_>>()),
        dc_fd: corr(&dc_fd),
        dc_sa: corr(&dc_sa),
    };

    let mut tasks = Vec::new();
    let mut difficulty = Vec::new();
    for task in [Task::FreeViewing, Task::VisualSearch] {
        let tr: Vec<&Row> = rows.iter().filter(|r| r.family.task() == task).collect();
        let per_stim: Vec<(f64, f64)> = keyed
            .values()
            .filter(|sr| sr[0].family.task() == task && sr[0].has_aoi)
            .filter_map(|sr| {
                let d: Vec<f64> = sr.iter().filter_map(|r| r.result.dc_mean).collect();
                Some((sr[0].level(), mean(&d)?))
            })
            .collect();
        let groups: Vec<Vec<f64>> = Family::ALL
            .iter()
            .map(|f| tr.iter().filter(|r| r.family == *f).filter_map(|r| r.rt_loc()).collect::<Vec<_>>())
            .filter(|g| !g.is_empty())
            .collect();
        tasks.push(TaskRow {
            task: task.as_str().into(),
            fc_dc: corr(&per_stim),
            rt_by_family: kruskal_wallis(&groups).ok(),
        });
        let fc = |r: &Row| Some(r.fixations_to_target as f64);
        let fd = |r: &Row| median(&r.durations);
        difficulty.push(DifficultyRow { task: task.as_str().into(), measure: "fixation_count".into(), test: easy_vs_hard(&tr, fc) });
        difficulty.push(DifficultyRow { task: task.as_str().into(), measure: "fd_ms".into(), test: easy_vs_hard(&tr, fd) });
    }

    Summary {
        n_scanpaths: rows.len(),
        n_rejected,
        n_stimuli: keyed.len(),
        density_sigma_px: cfg.density_sigma_px,
        temporal_mode: cfg.temporal_mode,
        baseline_center_px: [center.x, center.y],
        mean_si: mean(&si),
        median_si: median(&si),
        median_rt_loc_ms: median(&loc),
        median_rt_id_ms: median(&id),
        families,
        stimuli,
        contrast_table,
        center_table,
        global,
        tasks,
        difficulty,
    }
}

/// Wilcoxon test of per-participant medians on easy against hard targets.
/// Hard is the lower half of the contrast levels, easy the upper half; an odd
/// middle level is left out.
fn easy_vs_hard(rows: &[&Row], measure: impl Fn(&Row) -> Option<f64>) -> Option<GroupTestResult> {
    let mut by_part: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.has_aoi) {
        let Some(v) = measure(r) else { continue };
        let e = by_part.entry(r.participant.as_str()).or_default();
        if r.contrast_index <= r.levels / 2 {
            e.1.push(v);
        } else if r.contrast_index > r.levels.div_ceil(2) {
            e.0.push(v);
        }
    }
    let (easy, hard): (Vec<f64>, Vec<f64>) =
        by_part.values().filter_map(|(e, h)| Some((median(e)?, median(h)?))).unzip();
    wilcoxon_signed_rank(&easy, &hard).ok().map(Into::into)
}

pub fn results_csv(rows: &[Row]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.stimulus.clone(),
            r.participant.clone(),
            cell(r.si()),
            cell(r.result.localization.rt),
            cell(r.result.rt_identification),
            cell(r.result.rt_return),
            cell(r.result.dc_mean),
            r.flags().join(";"),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Invalid(e.to_string()))
}

pub fn temporal_csv(points: &[(String, TemporalPoint)]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TEMPORAL_HEADER).map_err(csv_err)?;
    for (task, p) in points {
        w.write_record([
            task.clone(),
            p.k.to_string(),
            cell(p.si),
            p.n_stimuli.to_string(),
            p.n_fixations.to_string(),
            cell(p.mean_fd),
            cell(p.mean_sa),
            cell(p.mean_dc),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Invalid(e.to_string()))
}

fn rejects_csv(rejects: &[Reject]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["stimulus", "participant", "reason"]).map_err(csv_err)?;
    for r in rejects {
        w.serialize(r).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Invalid(e.to_string()))
}

fn write_outputs(dir: &Path, ev: &Evaluation) -> Result<()> {
    write_atomic(&dir.join(RESULTS_FILE), &results_csv(&ev.rows)?)?;
    write_atomic(&dir.join(TEMPORAL_FILE), &temporal_csv(&ev.temporal)?)?;
    write_atomic(&dir.join(REJECTS_FILE), &rejects_csv(&ev.rejects)?)?;
    write_json(&dir.join(SUMMARY_FILE), &ev.summary)
}
