use std::fs;
use std::path::Path;
use std::process::Command;

use popout::config::Config;
use popout::io::{fixations_csv, load_fixations, read_mask_png, write_atomic, write_mask_png};
use popout_core::gaze::FixationRecord;
use popout_core::raster::AoiMask;
use popout_core::scene::Family;
use tempfile::TempDir;

const HEADER: &str = "participant,stimulus,index,x_px,y_px,onset_ms,duration_ms\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_popout"))
}

fn run_ok(args: &[&str]) -> (String, String) {
    let out = bin().args(args).output().unwrap();
    let (so, se) = (String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into());
    assert!(out.status.success(), "{args:?} failed: {se}");
    (so, se)
}

fn gen_family(dir: &Path, family: &str) {
    run_ok(&["gen", "--out", dir.to_str().unwrap(), "--family", family, "--seed", "3"]);
}

fn cfg_for(dir: &Path, families: &[Family]) -> Config {
    Config { out: dir.to_path_buf(), families: families.to_vec(), seed: 3, ..Config::default() }
}

fn rec(p: &str, s: &str, i: u32, onset: f64) -> FixationRecord {
    FixationRecord {
        participant: p.into(),
        stimulus: s.into(),
        index: i,
        x: 10.5,
        y: 20.25,
        onset_ms: onset,
        duration_ms: 150.0,
    }
}

#[test]
fn fixation_csv_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("f.csv");
    let records = vec![rec("a", "s1", 1, 0.0)];
    write_atomic(&path, &fixations_csv(&records).unwrap()).unwrap();
    assert_eq!(load_fixations(&path).unwrap(), records);
    fs::write(&path, "").unwrap();
    assert!(load_fixations(&path).unwrap().is_empty());
    fs::write(&path, HEADER).unwrap();
    assert!(load_fixations(&path).unwrap().is_empty());
}

#[test]
fn fixation_csv_errors() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("f.csv");
    fs::write(&path, format!("{HEADER}a,s,1,1,1,0,100\na,s,1,2,2,500,100\n")).unwrap();
    assert!(load_fixations(&path).unwrap_err().to_string().contains("duplicate"));
    fs::write(&path, "who,what\nx,y\n").unwrap();
    let e = load_fixations(&path).unwrap_err().to_string();
    assert!(e.contains("f.csv:1:"), "{e}");
    fs::write(&path, format!("{HEADER}a,s,1,1,1,0,100\na,s,two,2,2,500,100\n")).unwrap();
    let e = load_fixations(&path).unwrap_err().to_string();
    assert!(e.contains("f.csv:3:"), "{e}");
    fs::write(&path, format!("{HEADER}a,s,1,1,1,0,50\n")).unwrap();
    assert!(load_fixations(&path).is_err());
}

#[test]
fn atomic_write_and_mask_png() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sub/m.png");
    let mut m = AoiMask::new(7, 5);
    m.set(2, 3, true);
    m.set(6, 0, true);
    write_mask_png(&path, &m).unwrap();
    assert_eq!(read_mask_png(&path).unwrap(), m);
    let names: Vec<String> = fs::read_dir(dir.path().join("sub"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names, vec!["m.png"]);
}

#[test]
fn shipped_config_matches_default() {
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config/default.conf");
    let text = fs::read_to_string(&shipped).unwrap();
    assert_eq!(text, Config::default().to_text());
    let cfg = Config::load(&shipped).unwrap();
    assert_eq!(cfg.stimuli().len(), 230);
    let (printed, _) = run_ok(&["config"]);
    assert_eq!(printed, text);
}

#[test]
fn gen_single_family_and_verify() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    gen_family(&out, "12");
    let m = popout::manifest::Manifest::load(&out).unwrap();
    assert_eq!(m.stimuli.len(), 7);
    for e in &m.stimuli {
        assert!(out.join(&e.image).is_file());
        assert!(out.join(&e.mask).is_file());
        assert!(out.join(&e.layout).is_file());
        assert_eq!(e.task, "visual-search");
        assert!(e.target_deg.is_some());
    }
    let (so, _) = run_ok(&["verify", "--out", out.to_str().unwrap()]);
    assert_eq!(so.trim(), "ok");
    fs::remove_file(out.join(&m.stimuli[3].image)).unwrap();
    let r = bin().args(["verify", "--out", out.to_str().unwrap()]).output().unwrap();
    assert!(!r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains(&m.stimuli[3].id));
}

#[test]
fn gen_into_unwritable_dir_fails() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("plain-file");
    fs::write(&file, "x").unwrap();
    let out = bin()
        .args(["gen", "--family", "12", "--out", file.join("o").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn simulate_is_deterministic_and_complete() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    gen_family(&out, "12");
    let o = out.to_str().unwrap();
    run_ok(&["simulate", "--out", o, "--seed", "3", "--fixations", dir.path().join("a.csv").to_str().unwrap()]);
    run_ok(&["simulate", "--out", o, "--seed", "3", "--fixations", dir.path().join("b.csv").to_str().unwrap()]);
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    let recs = load_fixations(&dir.path().join("a.csv")).unwrap();
    let paths = popout_core::gaze::group_scanpaths(&recs);
    assert_eq!(paths.len(), 34 * 7);
}

#[test]
fn full_bias_observers_give_positive_si() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    gen_family(&out, "9,12");
    let mut cfg = cfg_for(&out, &[Family::ColorContrast, Family::OrientationContrast]);
    cfg.participants = 5;
    cfg.observer.aoi_bias = 1.0;
    let fx = out.join("fixations.csv");
    popout::simulate::run(&cfg, &fx).unwrap();
    let ev = popout::eval::run(&cfg, &fx).unwrap();
    assert_eq!(ev.rows.len(), 5 * 35);
    assert_eq!(ev.summary.families.len(), 2);
    for f in &ev.summary.families {
        assert!(f.median_si.unwrap() > 0.0);
    }
    // Localization at the first fixation on every scanpath.
    assert!(ev.rows.iter().all(|r| r.result.localization.rt == Some(0.0)));
}

#[test]
fn higher_bias_cohort_scores_higher() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    gen_family(&out, "11");
    let mut means = Vec::new();
    for bias in [0.1, 0.6] {
        let mut cfg = cfg_for(&out, &[Family::SizeContrast]);
        cfg.participants = 10;
        cfg.observer.aoi_bias = bias;
        let fx = out.join("fixations.csv");
        popout::simulate::run(&cfg, &fx).unwrap();
        means.push(popout::eval::run(&cfg, &fx).unwrap().summary.mean_si.unwrap());
    }
    assert!(means[1] > means[0], "{means:?}");
}

#[test]
fn empty_fixations_give_empty_results() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    gen_family(&out, "12");
    let fx = dir.path().join("empty.csv");
    fs::write(&fx, "").unwrap();
    let o = out.to_str().unwrap();
    let (_, err) = run_ok(&["eval", "--out", o, "--fixations", fx.to_str().unwrap()]);
    assert!(err.contains("warning"));
    let results = fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(results, "stimulus,participant,si,rt_loc_ms,rt_id_ms,rt_return_ms,dc_deg,flags\n");
    run_ok(&["report", "--out", o]);
    let contrast = fs::read_to_string(out.join("report/contrast.csv")).unwrap();
    assert_eq!(contrast.lines().count(), 1);
    let temporal = fs::read_to_string(out.join("report/temporal.csv")).unwrap();
    assert_eq!(temporal.lines().count(), 1);
}

#[test]
fn unknown_stimuli_are_rejected_not_fatal() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    gen_family(&out, "12");
    let m = popout::manifest::Manifest::load(&out).unwrap();
    let fx = dir.path().join("f.csv");
    let records = vec![rec("a", &m.stimuli[0].id, 1, 0.0), rec("a", "99_nothing_01_1", 1, 0.0)];
    write_atomic(&fx, &fixations_csv(&records).unwrap()).unwrap();
    let (_, err) = run_ok(&["eval", "--out", out.to_str().unwrap(), "--fixations", fx.to_str().unwrap()]);
    assert!(err.contains("unknown"));
    let rejects = fs::read_to_string(out.join("rejects.csv")).unwrap();
    assert_eq!(rejects, "stimulus,participant,reason\n99_nothing_01_1,a,unknown stimulus\n");
    let results = fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 2);
}

#[test]
fn report_follows_monotone_input() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    gen_family(&out, "12");
    let m = popout::manifest::Manifest::load(&out).unwrap();
    let mut csv = String::from("stimulus,participant,si,rt_loc_ms,rt_id_ms,rt_return_ms,dc_deg,flags\n");
    for e in &m.stimuli {
        for p in 0..3 {
            let x = e.contrast_index as f64;
            csv += &format!("{},p{p},{},{},,,1.0,\n", e.id, x + p as f64 * 0.1, 2000.0 - 100.0 * x + p as f64);
        }
    }
    // Flagged rows stay out of the reaction-time columns.
    csv += &format!("{},p9,1.0,99999,,,1.0,rt-loc-outlier\n", m.stimuli[0].id);
    fs::write(out.join("results.csv"), csv).unwrap();
    let lines = popout::report::run(&out).unwrap();
    assert_eq!(lines.len(), 7);
    let rt: Vec<f64> = lines.iter().map(|l| popout::report::mean_sem(&l.rt).0.unwrap()).collect();
    let si: Vec<f64> = lines.iter().map(|l| popout::report::mean_sem(&l.si).0.unwrap()).collect();
    assert!(rt.windows(2).all(|w| w[1] < w[0]), "{rt:?}");
    assert!(si.windows(2).all(|w| w[1] > w[0]), "{si:?}");
    assert_eq!(lines[0].n, 4);
    assert_eq!(lines[0].rt.len(), 3);
    let text = fs::read_to_string(out.join("report/contrast.csv")).unwrap();
    assert!(text.starts_with("family,subtype,contrast_index,ct,ct_unit,n,rt_n,rt_mean_ms,rt_sem_ms,si_n,si_mean,si_sem\n"));
}

#[test]
fn config_file_and_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("c.conf");
    fs::write(&cfg, "seed = 9\nfamilies = 11\njobs = 1\n").unwrap();
    let (text, _) = run_ok(&["config", "--config", cfg.to_str().unwrap(), "--seed", "4", "--family", "12"]);
    assert!(text.contains("seed = 4\n"));
    assert!(text.contains("families = 12\n"));
    assert!(text.contains("jobs = 1\n"));
    fs::write(&cfg, "seed = nine\n").unwrap();
    let out = bin().args(["config", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("c.conf:1:"));
}
