use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::rt::{
    distance_from_center, rt_identification, rt_localization, rt_return, Localization, DWELL_MS,
};
use super::saliency::{energies, MaskIndex, Si};
use super::Scanpath;
use crate::geometry::{Point, PX_PER_DEG};
use crate::raster::AoiMask;
use crate::scene::Task;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    /// 1-based fixation number.
    pub k: usize,
    /// Saliency index of the first `k` fixations.
    pub si: Option<Si>,
    /// Distance of fixation `k` from the baseline center, degrees.
    pub dc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub si: Option<Si>,
    pub localization: Localization,
    pub rt_identification: Option<f64>,
    pub rt_return: Option<f64>,
    pub dc_mean: Option<f64>,
    pub series: Vec<SeriesPoint>,
}

fn si_from(inside: f64, total: f64, mask: &MaskIndex) -> Option<Si> {
    let n = mask.width * mask.height;
    let nin = mask.inside_count();
    if total <= 0.0 || nin == 0 || nin == n {
        return None;
    }
    let st = inside / nin as f64;
    let sb = (total - inside) / (n - nin) as f64;
    Some(if sb == 0.0 { Si::AllInside } else { Si::Value((st - sb) / sb) })
}

/// Per-fixation kernel energies (inside, total); zero for off-canvas points.
fn fixation_energies(points: &[Point], mask: &MaskIndex, sigma_px: f64) -> Vec<(f64, f64)> {
    points
        .iter()
        .map(|&p| energies(&[p], mask, sigma_px).unwrap_or((0.0, 0.0)))
        .collect()
}

/// All metrics for one scanpath on one stimulus.
pub fn evaluate_scanpath(
    scanpath: &Scanpath,
    mask: &AoiMask,
    index: &MaskIndex,
    task: Task,
    center: Point,
    sigma_px: f64,
) -> EvalResult {
    let points = scanpath.points();
    let e = fixation_energies(&points, index, sigma_px);
    let dc = distance_from_center(&points, center);
    let mut series = Vec::with_capacity(points.len());
    let (mut ins, mut tot) = (0.0, 0.0);
    for (k, &(i, t)) in e.iter().enumerate() {
        ins += i;
        tot += t;
        series.push(SeriesPoint {
            k: k + 1,
            si: si_from(ins, tot, index),
            dc: dc.per_fixation[k],
        });
    }
    EvalResult {
        si: si_from(ins, tot, index),
        localization: rt_localization(scanpath, mask, task),
        rt_identification: rt_identification(scanpath, mask, DWELL_MS),
        rt_return: rt_return(scanpath, mask),
        dc_mean: dc.mean,
        series,
    }
}

/// How the per-index saliency index combines stimuli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesMode {
    /// Index per stimulus, then the mean over stimuli.
    #[default]
    PerStimulus,
    /// One index from inside/outside means pooled over all stimuli.
    Pooled,
}

/// The scanpaths recorded on one stimulus.
#[derive(Debug, Clone, Copy)]
pub struct StimulusGaze<'a> {
    pub mask: &'a MaskIndex,
    pub scanpaths: &'a [Scanpath],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemporalPoint {
    pub k: usize,
    pub si: Option<f64>,
    /// Stimuli contributing a finite index at `k`.
    pub n_stimuli: usize,
    pub n_fixations: usize,
    pub mean_fd: Option<f64>,
    /// Amplitude of the saccade landing on fixation `k`.
    pub mean_sa: Option<f64>,
    pub mean_dc: Option<f64>,
}

fn mean(sum: f64, n: usize) -> Option<f64> {
    (n > 0).then(|| sum / n as f64)
}

/// Metrics by fixation number: the saliency index of the density built from
/// all `k`-th fixations, and pooled means of duration, amplitude and center
/// distance.
pub fn temporal_series(
    stimuli: &[StimulusGaze<'_>],
    center: Point,
    sigma_px: f64,
    mode: SeriesMode,
) -> Vec<TemporalPoint> {
    let kmax = stimuli
        .iter()
        .flat_map(|s| s.scanpaths.iter().map(|p| p.fixations.len()))
        .max()
        .unwrap_or(0);
    let mut out = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let (mut fd, mut sa, mut dc) = (0.0, 0.0, 0.0);
        let (mut nf, mut nsa) = (0usize, 0usize);
        let (mut si_sum, mut n_si) = (0.0, 0usize);
        let (mut pool_in, mut pool_out, mut pool_nin, mut pool_nout) = (0.0, 0.0, 0usize, 0usize);
        for s in stimuli {
            let mut pts = Vec::new();
            for sp in s.scanpaths {
                let Some(f) = sp.fixations.get(k - 1) else {
                    continue;
                };
                pts.push(f.pos());
                fd += f.duration_ms;
                dc += f.pos().distance(center) / PX_PER_DEG;
                nf += 1;
                if k >= 2 {
                    sa += sp.fixations[k - 2].pos().distance(f.pos()) / PX_PER_DEG;
                    nsa += 1;
                }
            }
            if pts.is_empty() {
                continue;
            }
            let n = s.mask.width * s.mask.height;
            let nin = s.mask.inside_count();
            if nin == 0 || nin == n {
                continue;
            }
            let Ok((inside, total)) = energies(&pts, s.mask, sigma_px) else {
                continue;
            };
            match mode {
                SeriesMode::PerStimulus => {
                    if let Some(Si::Value(v)) = si_from(inside, total, s.mask) {
                        si_sum += v;
                        n_si += 1;
                    }
                }
                SeriesMode::Pooled => {
                    pool_in += inside / total;
                    pool_out += (total - inside) / total;
                    pool_nin += nin;
                    pool_nout += n - nin;
                    n_si += 1;
                }
            }
        }
        let si = match mode {
            SeriesMode::PerStimulus => mean(si_sum, n_si),
            SeriesMode::Pooled => {
                let st = mean(pool_in, pool_nin);
                let sb = mean(pool_out, pool_nout);
                match (st, sb) {
                    (Some(st), Some(sb)) if sb > 0.0 => Some((st - sb) / sb),
                    _ => None,
                }
            }
        };
        out.push(TemporalPoint {
            k,
            si,
            n_stimuli: n_si,
            n_fixations: nf,
            mean_fd: mean(fd, nf),
            mean_sa: mean(sa, nsa),
            mean_dc: mean(dc, nf),
        });
    }
    out
}
