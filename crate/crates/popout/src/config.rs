//! Plain-text `key = value` configuration. Command-line flags override it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use popout_core::gaze::{SeriesMode, DENSITY_SIGMA_PX};
use popout_core::scene::{Family, StimulusSpec, Subtype};
use popout_core::sim::ObserverParams;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub out: PathBuf,
    /// Families to generate; all by default.
    pub families: Vec<Family>,
    /// Worker threads, 0 for one per core.
    pub jobs: usize,
    /// Contrast levels generated per subtype, indices `1..=count`.
    pub enumeration: BTreeMap<Family, Vec<(Subtype, usize)>>,
    pub participants: usize,
    pub observer: ObserverParams,
    /// Observer seed; the master seed when unset.
    pub sim_seed: Option<u64>,
    pub density_sigma_px: f64,
    pub temporal_mode: SeriesMode,
}

impl Default for Config {
    fn default() -> Self {
        let enumeration = Family::ALL
            .iter()
            .map(|&f| (f, f.subtypes().iter().map(|&s| (s, f.levels())).collect()))
            .collect();
        Config {
            seed: 0,
            out: PathBuf::from("out"),
            families: Family::ALL.to_vec(),
            jobs: 0,
            enumeration,
            participants: 34,
            observer: ObserverParams::default(),
            sim_seed: None,
            density_sigma_px: DENSITY_SIGMA_PX,
            temporal_mode: SeriesMode::PerStimulus,
        }
    }
}

fn mode_str(m: SeriesMode) -> &'static str {
    match m {
        SeriesMode::PerStimulus => "per-stimulus",
        SeriesMode::Pooled => "pooled",
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Config::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Config> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { path: path.into(), line: i + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            cfg.set(key.trim(), value.trim()).map_err(err)?;
        }
        Ok(cfg)
    }

    /// Set one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("bad value {v:?} for {key}"))
        }
        match key {
            "seed" => self.seed = num(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "families" => self.families = parse_families(value)?,
            "jobs" => self.jobs = num(key, value)?,
            "participants" => self.participants = num(key, value)?,
            "fixations" => self.observer.n_fixations = num(key, value)?,
            "aoi_bias" => self.observer.aoi_bias = num(key, value)?,
            "center_sigma_deg" => self.observer.center_sigma = num(key, value)?,
            "fd_median_ms" => self.observer.fd_median = num(key, value)?,
            "fd_dispersion" => self.observer.fd_dispersion = num(key, value)?,
            "sim_seed" => {
                self.sim_seed = if value == "master" { None } else { Some(num(key, value)?) }
            }
            "density_sigma_px" => self.density_sigma_px = num(key, value)?,
            "temporal_mode" => {
                self.temporal_mode = match value {
                    "per-stimulus" => SeriesMode::PerStimulus,
                    "pooled" => SeriesMode::Pooled,
                    _ => return Err(format!("temporal_mode must be per-stimulus or pooled, got {value:?}")),
                }
            }
            _ => {
                let Some(n) = key.strip_prefix("enumeration.") else {
                    return Err(format!("unknown key {key:?}"));
                };
                let family = num::<u8>(key, n).and_then(|n| Family::from_number(n).map_err(|e| e.to_string()))?;
                self.enumeration.insert(family, parse_allocation(family, value)?);
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.observer.validate()?;
        if self.participants == 0 {
            return Err(Error::Invalid("participants must be at least 1".into()));
        }
        if !(self.density_sigma_px > 0.0 && self.density_sigma_px.is_finite()) {
            return Err(Error::Invalid("density_sigma_px must be positive".into()));
        }
        Ok(())
    }

    pub fn observer_params(&self) -> ObserverParams {
        ObserverParams { seed: self.sim_seed.unwrap_or(self.seed), ..self.observer }
    }

    /// Stimuli selected by `families` and `enumeration`, in dataset order.
    pub fn stimuli(&self) -> Vec<StimulusSpec> {
        let mut out = Vec::new();
        for f in Family::ALL {
            if !self.families.contains(&f) {
                continue;
            }
            for &(s, count) in self.enumeration.get(&f).map(Vec::as_slice).unwrap_or(&[]) {
                out.extend((1..=count).map(|x| StimulusSpec::with_master_seed(f, s, x, self.seed)));
            }
        }
        out
    }

    /// Configuration file text that reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut t = String::new();
        let o = &self.observer;
        let fams = if self.families == Family::ALL {
            "all".to_string()
        } else {
            self.families.iter().map(|f| f.number().to_string()).collect::<Vec<_>>().join(",")
        };
        let sim_seed = self.sim_seed.map_or("master".to_string(), |s| s.to_string());
        let _ = writeln!(t, "# popout configuration");
        let _ = writeln!(t);
        let _ = writeln!(t, "seed = {}", self.seed);
        let _ = writeln!(t, "out = {}", self.out.display());
        let _ = writeln!(t, "families = {fams}");
        let _ = writeln!(t, "jobs = {}", self.jobs);
        let _ = writeln!(t);
        let _ = writeln!(t, "# simulated observers");
        let _ = writeln!(t, "participants = {}", self.participants);
        let _ = writeln!(t, "fixations = {}", o.n_fixations);
        let _ = writeln!(t, "aoi_bias = {}", o.aoi_bias);
        let _ = writeln!(t, "center_sigma_deg = {}", o.center_sigma);
        let _ = writeln!(t, "fd_median_ms = {}", o.fd_median);
        let _ = writeln!(t, "fd_dispersion = {}", o.fd_dispersion);
        let _ = writeln!(t, "sim_seed = {sim_seed}");
        let _ = writeln!(t);
        let _ = writeln!(t, "# evaluation");
        let _ = writeln!(t, "density_sigma_px = {}", self.density_sigma_px);
        let _ = writeln!(t, "temporal_mode = {}", mode_str(self.temporal_mode));
        let _ = writeln!(t);
        let _ = writeln!(t, "# Contrast levels per subtype. The published tables give per-family");
        let _ = writeln!(t, "# totals only; this split is ours and sums to {} stimuli.", self.total());
        for (f, alloc) in &self.enumeration {
            let total: usize = alloc.iter().map(|a| a.1).sum();
            let list = alloc.iter().map(|(s, n)| format!("{}:{n}", s.slug())).collect::<Vec<_>>().join(" ");
            let _ = writeln!(t, "# {} ({total})", f.name());
            let _ = writeln!(t, "enumeration.{:02} = {list}", f.number());
        }
        t
    }

    fn total(&self) -> usize {
        self.enumeration.values().flatten().map(|a| a.1).sum()
    }
}

fn parse_families(v: &str) -> std::result::Result<Vec<Family>, String> {
    if v == "all" {
        return Ok(Family::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in v.split(',') {
        let n: u8 = part.trim().parse().map_err(|_| format!("bad family {part:?}"))?;
        let f = Family::from_number(n).map_err(|e| e.to_string())?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

fn parse_allocation(family: Family, v: &str) -> std::result::Result<Vec<(Subtype, usize)>, String> {
    let mut out = Vec::new();
    for item in v.split_whitespace() {
        let (slug, n) = item.split_once(':').ok_or_else(|| format!("expected subtype:count, got {item:?}"))?;
        let s = Subtype::from_slug(slug).map_err(|e| e.to_string())?;
        if !family.subtypes().contains(&s) {
            return Err(format!("subtype {slug} does not belong to family {}", family.number()));
        }
        let n: usize = n.parse().map_err(|_| format!("bad count in {item:?}"))?;
        if n > family.levels() {
            return Err(format!("{slug}: {n} levels requested, family has {}", family.levels()));
        }
        out.push((s, n));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_text_round_trips() {
        let c = Config::default();
        assert_eq!(c.stimuli().len(), 230);
        let back = Config::parse(&c.to_text(), Path::new("x")).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn bad_lines_report_line_numbers() {
        let e = Config::parse("seed = 1\n\nnope\n", Path::new("c.txt")).unwrap_err();
        assert_eq!(e.to_string(), "c.txt:3: expected key = value, got \"nope\"");
        assert!(Config::parse("colour = red", Path::new("c")).is_err());
        assert!(Config::parse("enumeration.12 = red-grey:7", Path::new("c")).is_err());
        assert!(Config::parse("enumeration.12 = plain:8", Path::new("c")).is_err());
    }

    #[test]
    fn families_and_allocation() {
        let c = Config::parse("families = 12, 9\nenumeration.12 = plain:3", Path::new("c")).unwrap();
        assert_eq!(c.families, vec![Family::ColorContrast, Family::OrientationContrast]);
        assert_eq!(c.stimuli().len(), 28 + 3);
    }
}
