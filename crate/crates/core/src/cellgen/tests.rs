use std::f64::consts::{FRAC_PI_2, PI};

use super::mask::{connected_components, rotate_mask, Connectivity};
use super::*;
use crate::grid::{Grid, Mask};
use crate::seed::rng_from;

const DIMS: (usize, usize) = (96, 96);

fn ball(p: &CellParams) -> CellBody<f64> {
    build_basic_ball_body(p, DIMS).unwrap()
}

#[test]
fn noise_free_border_is_the_closed_annulus() {
    let p = CellParams::circle((48.0, 48.0), 20.0, 3.0);
    let body = ball(&p);
    for i in 0..DIMS.0 {
        for j in 0..DIMS.1 {
            let d2 = (i as i64 - 48).pow(2) + (j as i64 - 48).pow(2);
            assert_eq!(*body.border.get(i, j), (289..=400).contains(&d2), "({i},{j})");
            assert_eq!(*body.inner.get(i, j), d2 < 289, "({i},{j})");
        }
    }
}

fn extent(mask: &Mask) -> (usize, usize) {
    let (mut rows, mut cols) = (Vec::new(), Vec::new());
    for i in 0..mask.height() {
        for j in 0..mask.width() {
            if *mask.get(i, j) {
                rows.push(i);
                cols.push(j);
            }
        }
    }
    let span = |v: &[usize]| v.iter().max().unwrap() - v.iter().min().unwrap() + 1;
    (span(&rows), span(&cols))
}

#[test]
fn ellipse_factor_stretches_vertically() {
    let mut p = CellParams::circle((48.0, 48.0), 20.0, 3.0);
    p.ellipse = 2.0;
    p.center = (48.0, 40.0);
    let err = build_basic_ball_body::<f64>(&p, (160, 96)).err();
    assert!(matches!(err, Some(GeometryError::DoesNotFit { .. })));
    p.center = (48.0, 80.0);
    let body = build_basic_ball_body::<f64>(&p, (160, 96)).unwrap();
    let (v, h) = extent(&body.inner);
    let ratio = v as f64 / h as f64;
    assert!((ratio - 2.0).abs() < 0.1, "vertical {v} horizontal {h}");
}

#[test]
fn noisy_ball_is_deterministic_in_seed() {
    let mut p = CellParams::circle((48.0, 48.0), 20.0, 3.0);
    p.noise = 0.8;
    p.noise_seed = 99;
    let a = ball(&p);
    let b = ball(&p);
    assert_eq!(a, b);
    p.noise_seed = 100;
    assert_ne!(a.border, ball(&p).border);
}

#[test]
fn invalid_parameters_are_rejected() {
    let p = CellParams::circle((48.0, 48.0), 3.0, 3.0);
    assert!(matches!(
        build_basic_ball_body::<f64>(&p, DIMS),
        Err(GeometryError::InvalidParams(_))
    ));
    let p = CellParams::circle((10.0, 48.0), 20.0, 3.0);
    assert!(matches!(
        build_basic_ball_body::<f64>(&p, DIMS),
        Err(GeometryError::DoesNotFit { .. })
    ));
}

fn skeleton_params() -> CellParams {
    let mut p = CellParams::circle((48.0, 48.0), 20.5, 3.0);
    p.bar = Some(5.0);
    p.pole = Some(5.0);
    p
}

#[test]
fn minus_skeleton_is_a_horizontal_bar() {
    let p = skeleton_params();
    let body = build_ccell_body::<f64>(&p, DIMS, SkeletonVariant::Minus).unwrap();
    let sk = body.skeleton.unwrap();
    let oracle = Grid::from_fn(DIMS.0, DIMS.1, |i, j| {
        (i as f64 - 48.0).abs() <= 2.5 && (j as f64 - 48.0).abs() <= 20.5
    });
    assert_eq!(sk, oracle);
    let (height, _) = extent(&sk);
    assert_eq!(height, 5);
}

#[test]
fn plus_skeleton_counts_overlap_once() {
    let mut p = skeleton_params();
    p.stretch = 0.9;
    p.pole = Some(3.0);
    let body = build_ccell_body::<f64>(&p, DIMS, SkeletonVariant::Plus).unwrap();
    let sk = body.skeleton.unwrap();
    // brute-force enumeration of the two boxes
    let (mut bar, mut pole, mut both) = (0, 0, 0);
    for i in 0..DIMS.0 {
        for j in 0..DIMS.1 {
            let (x, y) = (j as f64 - 48.0, i as f64 - 48.0);
            let in_bar = x.abs() <= 20.5 && y.abs() <= 2.5;
            let in_pole = y.abs() <= 20.5 * 0.9 && x.abs() <= 1.5;
            bar += usize::from(in_bar);
            pole += usize::from(in_pole);
            both += usize::from(in_bar && in_pole);
        }
    }
    assert_eq!(sk.count(), bar + pole - both);
    assert_eq!((bar, pole, both), (41 * 5, 37 * 3, 15));
}

#[test]
fn symmetric_plus_is_invariant_under_quarter_turn() {
    let p = skeleton_params();
    let mut q = p.clone();
    q.rotation = FRAC_PI_2;
    let a = build_ccell_body::<f64>(&p, DIMS, SkeletonVariant::Plus).unwrap();
    let b = build_ccell_body::<f64>(&q, DIMS, SkeletonVariant::Plus).unwrap();
    assert_eq!(a.skeleton, b.skeleton);
}

#[test]
fn skeleton_requires_thicknesses() {
    let mut p = skeleton_params();
    p.pole = None;
    assert!(build_ccell_body::<f64>(&p, DIMS, SkeletonVariant::Minus).is_ok());
    assert!(build_ccell_body::<f64>(&p, DIMS, SkeletonVariant::Plus).is_err());
    p.bar = None;
    assert!(build_ccell_body::<f64>(&p, DIMS, SkeletonVariant::Minus).is_err());
}

fn rect_params() -> CellParams {
    let mut p = CellParams::circle((48.0, 48.0), 20.0, 3.0);
    p.aspect = 0.6;
    p.colors = CellColors::rect_red();
    p
}

#[test]
fn axis_aligned_rectangle_is_a_ring() {
    let p = rect_params();
    let body = build_rect_cell::<f64>(&p, DIMS, ColorVariant::Red).unwrap();
    for i in 0..DIMS.0 {
        for j in 0..DIMS.1 {
            let (x, y) = ((j as f64 - 48.0).abs(), (i as f64 - 48.0).abs());
            let outer = x <= 20.0 && y <= 12.0;
            let hole = x < 17.0 && y < 9.0;
            assert_eq!(*body.border.get(i, j), outer && !hole);
            assert_eq!(*body.inner.get(i, j), hole);
        }
    }
}

#[test]
fn rect_color_variants_permute_channels_only() {
    let mut p = rect_params();
    p.rotation = 0.7;
    p.noise = 0.5;
    p.noise_seed = 5;
    let red = build_rect_cell::<f64>(&p, DIMS, ColorVariant::Red).unwrap();
    let green = build_rect_cell::<f64>(&p, DIMS, ColorVariant::Green).unwrap();
    let blue = build_rect_cell::<f64>(&p, DIMS, ColorVariant::Blue).unwrap();
    assert_eq!(red.border, green.border);
    assert_eq!(red.inner, blue.inner);
    for ((r, g), b) in red.ball.iter().zip(green.ball.iter()).zip(blue.ball.iter()) {
        assert_eq!(*g, [r[1], r[0], r[2]]);
        assert_eq!(*b, [r[2], r[1], r[0]]);
    }
}

#[test]
fn generated_red_rect_border_color() {
    let config = GeneratorConfig::default();
    for seed in 0..20 {
        let mut rng = rng_from(seed);
        let p = draw_params(CellClass::RCell, &config, &mut rng).unwrap().unwrap();
        let body = build_rect_cell::<f64>(&p, (224, 224), ColorVariant::Red).unwrap();
        let mut mean = [0.0; 3];
        let n = body.border.count() as f64;
        for (px, &on) in body.ball.iter().zip(body.border.iter()) {
            if on {
                for c in 0..3 {
                    mean[c] += px[c] / n;
                }
            }
        }
        for (m, want) in mean.iter().zip([0.8, 0.1, 0.1]) {
            assert!((m - want).abs() <= 0.05, "seed {seed}: {mean:?}");
        }
    }
}

fn tailed_params(n: usize) -> CellParams {
    let mut p = CellParams::circle((80.0, 80.0), 20.0, 3.0);
    p.noise = 0.5;
    p.noise_seed = 17;
    p.tail_length = 30.0;
    p.tail_angles = (0..n).map(|k| 0.3 + k as f64 * 2.0 * PI / n as f64).collect();
    p
}

#[test]
fn tails_are_separate_components_outside_the_body() {
    for n in [1, 3, 8] {
        let body = build_tailed_cell::<f64>(&tailed_params(n), (160, 160), n).unwrap();
        let tails = body.tails.as_ref().unwrap();
        assert_eq!(connected_components(tails, Connectivity::Eight).1, n);
        assert!(!tails.and(&body.inner).any());
        assert!(!tails.and(&body.border).any());
    }
}

#[test]
fn tail_count_must_match() {
    let p = tailed_params(3);
    assert!(build_tailed_cell::<f64>(&p, (160, 160), 8).is_err());
    assert!(build_tailed_cell::<f64>(&p, (160, 160), 2).is_err());
}

#[test]
fn circle_ground_truth_border_feature_inner_localization() {
    let p = CellParams::circle((48.0, 48.0), 20.0, 3.0);
    let body = ball(&p);
    let gt = explain_body(&body, &Assignment::default_for(CellClass::CCell), 0.05, 0.05);
    for ((&g, &b), &inner) in gt.iter().zip(body.border.iter()).zip(body.inner.iter()) {
        let want = if b { 0.9 } else if inner { 0.4 } else { 0.0 };
        assert_eq!(g, want);
    }
}

#[test]
fn rect_ground_truth_border_is_the_feature() {
    let config = GeneratorConfig::default();
    for (class, seed) in [(CellClass::RCell, 1), (CellClass::RCellB, 2), (CellClass::RCellC, 3)] {
        let s = compose_sample::<f64>(class, BackgroundType::Dark, seed, &config).unwrap();
        let p = s.params.as_ref().unwrap();
        let body = render_body::<f64>(class, p, s.dims()).unwrap();
        let feature = s.ground_truth.map(|&v| v == 0.9);
        assert_eq!(feature, body.border);
    }
}

#[test]
fn empty_class_has_zero_ground_truth() {
    let config = GeneratorConfig::with_size(64);
    let s = compose_sample::<f32>(CellClass::Empty, BackgroundType::Speckle, 4, &config).unwrap();
    assert!(s.ground_truth.iter().all(|&v| v == 0.0));
    assert!(s.params.is_none());
}

#[test]
fn compose_is_deterministic() {
    let config = GeneratorConfig::default();
    for class in CellClass::ALL {
        let a = compose_sample::<f32>(class, BackgroundType::Gradient, 42, &config).unwrap();
        let b = compose_sample::<f32>(class, BackgroundType::Gradient, 42, &config).unwrap();
        assert_eq!(a, b, "{class}");
    }
}

#[test]
fn ground_truth_covers_every_cell_pixel() {
    let config = GeneratorConfig::default();
    for (k, class) in CellClass::ALL[..9].iter().enumerate() {
        let s = compose_sample::<f64>(*class, BackgroundType::ALL[k % 3], k as u64, &config).unwrap();
        let body = render_body::<f64>(*class, s.params.as_ref().unwrap(), s.dims()).unwrap();
        for (&on, &g) in body.footprint().iter().zip(s.ground_truth.iter()) {
            if on {
                assert!(g > 0.0, "{class}");
            }
        }
        for px in s.image.iter() {
            assert!(px.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}

fn rotation_cases() -> Vec<(CellClass, CellParams)> {
    let mut plus = CellParams::circle((64.37, 63.71), 30.0, 4.0);
    plus.ellipse = 1.2;
    plus.bar = Some(8.0);
    plus.pole = Some(6.0);
    plus.stretch = 1.1;
    let mut rect = CellParams::circle((64.37, 63.71), 30.0, 4.0);
    rect.aspect = 0.6;
    vec![(CellClass::CCellP, plus), (CellClass::RCell, rect)]
}

#[test]
fn rotation_round_trip_preserves_area_masks() {
    for (class, mut p) in rotation_cases() {
        let base = render_body::<f64>(class, &p, (128, 128)).unwrap();
        for theta in [0.3, 1.1, 2.5, 4.0] {
            p.rotation = theta;
            let rotated = render_body::<f64>(class, &p, (128, 128)).unwrap();
            for (a, b) in [(base.footprint(), rotated.footprint()), (base.inner.clone(), rotated.inner)] {
                let back = rotate_mask(&b, -theta, p.center);
                let diff = a.count().abs_diff(back.count()) as f64;
                assert!(diff <= 0.01 * a.count() as f64, "{class} θ={theta}: {} vs {}", a.count(), back.count());
            }
        }
        p.rotation = 0.0;
    }
}

#[test]
fn rotation_round_trip_thin_bands_within_rasterization() {
    // bands a few pixels wide gain or lose edge pixels when resampled, so 2% here
    for (class, mut p) in rotation_cases() {
        let base = render_body::<f64>(class, &p, (128, 128)).unwrap();
        for theta in [0.3, 1.1, 2.5, 4.0] {
            p.rotation = theta;
            let rotated = render_body::<f64>(class, &p, (128, 128)).unwrap();
            let mut pairs = vec![(base.border.clone(), rotated.border)];
            if let (Some(a), Some(b)) = (&base.skeleton, rotated.skeleton) {
                pairs.push((a.clone(), b));
            }
            for (a, b) in pairs {
                let back = rotate_mask(&b, -theta, p.center);
                let diff = a.count().abs_diff(back.count()) as f64;
                assert!(diff <= 0.02 * a.count() as f64, "{class} θ={theta}: {} vs {}", a.count(), back.count());
            }
        }
        p.rotation = 0.0;
    }
}

#[test]
fn small_images_always_compose() {
    for size in [32, 40, 48, 64] {
        let config = GeneratorConfig::with_size(size);
        for class in CellClass::ALL {
            for seed in 0..40 {
                let s = compose_sample::<f32>(class, BackgroundType::Dark, seed, &config);
                assert!(s.is_ok(), "size {size} {class} seed {seed}: {:?}", s.err());
            }
        }
    }
}
