use popout_core::gaze::{distance_from_center, saliency_index_fixations, MaskIndex, DENSITY_SIGMA_PX};
use popout_core::geometry::Point;
use popout_core::raster::AoiMask;
use popout_core::sim::*;

fn mask() -> (AoiMask, MaskIndex) {
    let mut m = AoiMask::new(1280, 1080);
    for y in 200..260 {
        for x in 900..980 {
            m.set(x, y, true);
        }
    }
    let idx = MaskIndex::new(&m);
    (m, idx)
}

#[test]
fn deterministic_per_seed() {
    let (_, idx) = mask();
    let p = ObserverParams { seed: 5, ..Default::default() };
    let a = simulate("01_plain_01_1", "sim01", &idx, &p).unwrap();
    let b = simulate("01_plain_01_1", "sim01", &idx, &p).unwrap();
    assert_eq!(a, b);
    let c = simulate("01_plain_01_1", "sim02", &idx, &p).unwrap();
    assert_ne!(a, c);
    let d = simulate("01_plain_01_1", "sim01", &idx, &ObserverParams { seed: 6, ..p }).unwrap();
    assert_ne!(a, d);
}

#[test]
fn full_bias_stays_inside() {
    let (m, idx) = mask();
    let p = ObserverParams { aoi_bias: 1.0, n_fixations: 25, ..Default::default() };
    let sp = simulate("s", "sim01", &idx, &p).unwrap();
    assert_eq!(sp.fixations.len(), 25);
    assert!(sp.fixations.iter().all(|f| m.contains_px(f.x, f.y)));
    let si = saliency_index_fixations(&sp.points(), &idx, DENSITY_SIGMA_PX).unwrap();
    assert!(si.value().unwrap() > 0.0);
}

#[test]
fn zero_spread_sits_at_center() {
    let (_, idx) = mask();
    let p = ObserverParams { aoi_bias: 0.0, center_sigma: 0.0, ..Default::default() };
    let sp = simulate("s", "sim03", &idx, &p).unwrap();
    let dc = distance_from_center(&sp.points(), Point::new(640.0, 540.0));
    assert_eq!(dc.mean, Some(0.0));
}

#[test]
fn timing_structure() {
    let (_, idx) = mask();
    let sp = simulate("s", "sim01", &idx, &ObserverParams::default()).unwrap();
    assert_eq!(sp.fixations[0].onset_ms, 0.0);
    for w in sp.fixations.windows(2) {
        assert_eq!(w[1].onset_ms, w[0].onset_ms + w[0].duration_ms + SACCADE_GAP_MS);
        assert_eq!(w[1].index, w[0].index + 1);
    }
    assert!(sp.fixations.iter().all(|f| f.duration_ms >= 80.0));
}

#[test]
fn duration_median_near_target() {
    let (_, idx) = mask();
    let p = ObserverParams { n_fixations: 10_000, ..Default::default() };
    let sp = simulate("s", "sim01", &idx, &p).unwrap();
    let mut d: Vec<f64> = sp.fixations.iter().map(|f| f.duration_ms).collect();
    d.sort_by(f64::total_cmp);
    let med = d[d.len() / 2];
    assert!((med - 200.0).abs() < 10.0, "median {med}");
}

#[test]
fn invalid_params() {
    let (_, idx) = mask();
    let empty = MaskIndex::new(&AoiMask::new(1280, 1080));
    assert!(simulate("s", "p", &empty, &ObserverParams::default()).is_err());
    assert!(simulate("s", "p", &empty, &ObserverParams { aoi_bias: 0.0, ..Default::default() }).is_ok());
    for bad in [
        ObserverParams { aoi_bias: 1.5, ..Default::default() },
        ObserverParams { n_fixations: 0, ..Default::default() },
        ObserverParams { fd_median: -1.0, ..Default::default() },
        ObserverParams { center_sigma: f64::NAN, ..Default::default() },
    ] {
        assert!(simulate("s", "p", &idx, &bad).is_err());
    }
    assert_eq!(participant_id(0), "sim01");
}

#[test]
fn mean_si_nondecreasing_in_bias() {
    let (_, idx) = mask();
    let mut last = f64::NEG_INFINITY;
    for bias in [0.0, 0.1, 0.25, 0.5, 0.75, 1.0] {
        let mut total = 0.0;
        for seed in 0..100 {
            let p = ObserverParams { aoi_bias: bias, seed, ..Default::default() };
            let sp = simulate("s", "sim01", &idx, &p).unwrap();
            total += saliency_index_fixations(&sp.points(), &idx, DENSITY_SIGMA_PX).unwrap().value().unwrap();
        }
        let mean = total / 100.0;
        assert!(mean >= last, "bias {bias}: {mean} < {last}");
        last = mean;
    }
}
