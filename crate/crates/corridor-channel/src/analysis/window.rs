//! Fast-fading removal by frequency-domain averaging.
//!
//! The narrowband recipe of averaging |H| over 20-40 wavelengths of traveled
//! distance maps, for a frequency sweep, onto a moving average over a window
//! whose span covers M wavelengths of electrical distance change at the
//! given Tx-Rx separation. Shorter links need wider windows.

use crate::grid::FrequencyGrid;
use crate::synthesis::CtfDataset;

/// Window-size rule variant.
///
/// `Derived` follows the electrical-distance derivation,
/// `L = ceil(M·d_max/d) + 1`. `LiteralEq11` keeps the ceiling around the
/// distance ratio only, `L = M·ceil(d_max/d) + 1`, which quantizes much more
/// coarsely at long range (81 instead of 45 samples at 27.6 m with M = 40).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowForm {
    Derived,
    LiteralEq11,
}

/// Averaging window length, in samples, for a Tx-Rx distance `d_m`.
///
/// Always odd (centered window) and never larger than the grid. `lee_m` is
/// the wavelength count of the averaging criterion, between 20 and 40.
pub fn window_size(d_m: f64, grid: &FrequencyGrid, lee_m: u32, form: WindowForm) -> usize {
    assert!(d_m > 0.0, "distance must be positive");
    assert!((20..=40).contains(&lee_m), "averaging constant must be in [20, 40]");
    let d_max = grid.max_observation_distance_m();
    let count = grid.count();
    let base = match form {
        WindowForm::Derived => (lee_m as f64 * d_max / d_m).ceil() + 1.0,
        WindowForm::LiteralEq11 => lee_m as f64 * (d_max / d_m).ceil() + 1.0,
    };
    if !(base < count as f64) {
        // Window covers the whole band; keep it odd when the grid allows.
        return if count % 2 == 0 { count - 1 } else { count };
    }
    let mut len = base as usize;
    if len % 2 == 0 {
        len += 1;
    }
    len.min(count)
}

/// Windowed magnitude response |H_w|: per distance, a centered moving average
/// of |H| over `window_size` samples. At the band edges the window truncates
/// to the available samples and renormalizes by the actual count.
///
/// Returns a row-major (distance x frequency) matrix.
pub fn remove_fast_fading(ctf: &CtfDataset, lee_m: u32, form: WindowForm) -> Vec<f64> {
    let grid = ctf.grid();
    let n = grid.count();
    let mut out = Vec::with_capacity(ctf.n_distances() * n);
    for (di, &d) in ctf.distances_m().iter().enumerate() {
        let len = window_size(d, grid, lee_m, form);
        let row = ctf.row(di);
        // Prefix sums of |H| make each output sample O(1).
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        for v in row {
            prefix.push(prefix.last().unwrap() + v.norm());
        }
        if len >= n {
            // Window spans the whole band wherever it is centered.
            let mean = prefix[n] / n as f64;
            out.extend(std::iter::repeat(mean).take(n));
            continue;
        }
        let half = (len - 1) / 2;
        for i in 0..n {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            out.push((prefix[hi + 1] - prefix[lo]) / (hi + 1 - lo) as f64);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::Provenance;
    use num_complex::Complex64;

    fn hband() -> FrequencyGrid {
        FrequencyGrid::new(250e9, 10e6, 8001).unwrap()
    }

    #[test]
    fn window_size_pins() {
        let g = hband();
        assert_eq!(window_size(27.6, &g, 40, WindowForm::Derived), 45);
        assert_eq!(window_size(0.6, &g, 40, WindowForm::Derived), 2001);
        // Distance equal to the observation limit with M = 20.
        let d_max = g.max_observation_distance_m();
        assert_eq!(window_size(d_max, &g, 20, WindowForm::Derived), 21);
        // The literal rule quantizes coarsely at long range.
        assert_eq!(window_size(27.6, &g, 40, WindowForm::LiteralEq11), 81);
    }

    #[test]
    fn window_is_odd_and_capped() {
        let g = hband();
        for i in 1..=2000 {
            let d = i as f64 * 0.015;
            let l = window_size(d, &g, 40, WindowForm::Derived);
            assert!(l % 2 == 1, "even window at d={d}");
            assert!(l <= g.count());
        }
        // Very short distance saturates at the grid size.
        assert_eq!(window_size(1e-4, &g, 40, WindowForm::Derived), 8001);
    }

    #[test]
    fn window_size_monotone_non_increasing() {
        let g = hband();
        for form in [WindowForm::Derived, WindowForm::LiteralEq11] {
            let mut prev = usize::MAX;
            for i in 1..=1000 {
                let d = 0.05 + (i as f64 / 1000.0) * 29.9;
                let l = window_size(d, &g, 40, form);
                assert!(l <= prev, "window grew from {prev} to {l} at d={d}");
                prev = l;
            }
        }
    }

    fn dataset_from_rows(grid: FrequencyGrid, rows: Vec<(f64, Vec<Complex64>)>) -> CtfDataset {
        let distances = rows.iter().map(|(d, _)| *d).collect();
        let values = rows.into_iter().flat_map(|(_, r)| r).collect();
        CtfDataset::new(grid, distances, values, Provenance::Measured, String::new()).unwrap()
    }

    #[test]
    fn constant_magnitude_passes_through() {
        let g = FrequencyGrid::new(250e9, 10e6, 501).unwrap();
        let row: Vec<Complex64> =
            (0..501).map(|k| Complex64::from_polar(0.125, k as f64)).collect();
        let ds = dataset_from_rows(g, vec![(3.0, row)]);
        for v in remove_fast_fading(&ds, 40, WindowForm::Derived) {
            assert!((v - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn ripple_is_attenuated_an_order_of_magnitude() {
        // Two-ray ripple much faster than the window span.
        let g = FrequencyGrid::new(250e9, 10e6, 2001).unwrap();
        let delta_r = 3.0; // ripple period c/Δr ≈ 0.1 GHz << window span
        let rho = 0.4;
        let row: Vec<Complex64> = g
            .frequencies()
            .map(|f| {
                let phase = -2.0 * std::f64::consts::PI * delta_r * f / crate::units::SPEED_OF_LIGHT;
                Complex64::new(1.0, 0.0) + rho * Complex64::from_polar(1.0, phase)
            })
            .collect();
        let ds = dataset_from_rows(g, vec![(3.0, row.clone())]);
        let smoothed = remove_fast_fading(&ds, 40, WindowForm::Derived);

        let central = 500..1500;
        let in_ripple = row[central.clone()]
            .iter()
            .map(|v| v.norm())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let out_ripple = smoothed[central]
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let attenuation = (in_ripple.1 - in_ripple.0) / (out_ripple.1 - out_ripple.0);
        assert!(attenuation >= 10.0, "ripple only attenuated {attenuation:.1}x");
    }

    #[test]
    fn full_band_window_yields_band_mean() {
        let g = FrequencyGrid::new(250e9, 10e6, 11).unwrap();
        let row: Vec<Complex64> =
            (0..11).map(|k| Complex64::new(k as f64 + 1.0, 0.0)).collect();
        let mean = row.iter().map(|v| v.norm()).sum::<f64>() / 11.0;
        // Tiny distance forces the window to the whole grid.
        let ds = dataset_from_rows(g, vec![(1e-6, row)]);
        for v in remove_fast_fading(&ds, 40, WindowForm::Derived) {
            assert!((v - mean).abs() < 1e-12);
        }
    }
}
