//! Power delay profile: Hann-windowed inverse DFT of a CTF row, squared.
//!
//! `P[n] = |(1/N)·Σ_k W[k]·H[k]·exp(+j2πkn/N)|²` with `W` a Hann window over
//! the sweep, applied to tame the sinc sidelobes in the delay domain. Delay
//! bin `n` maps to `τ_n = n·Δτ` and traveled distance `c·τ_n`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::FrequencyGrid;
use crate::units::SPEED_OF_LIGHT;
use crate::{Error, Result};

/// A power delay profile over `N` delay bins.
#[derive(Debug, Clone)]
pub struct Pdp {
    power: Vec<f64>,
    delay_step_s: f64,
}

impl Pdp {
    pub fn power(&self) -> &[f64] {
        &self.power
    }

    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    /// Delay of bin `n`.
    pub fn delay_s(&self, n: usize) -> f64 {
        n as f64 * self.delay_step_s
    }

    pub fn delay_step_s(&self) -> f64 {
        self.delay_step_s
    }

    /// Traveled-distance equivalent of one delay bin.
    pub fn delay_distance_step_m(&self) -> f64 {
        self.delay_step_s * SPEED_OF_LIGHT
    }
}

/// Symmetric Hann window of length `n`.
pub fn hann_window(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|k| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / (n - 1) as f64).cos()))
        .collect()
}

/// Reusable PDP pipeline: one FFT plan and window shared across rows.
pub struct PdpComputer {
    fft: Arc<dyn Fft<f64>>,
    window: Vec<f64>,
    delay_step_s: f64,
}

impl PdpComputer {
    pub fn new(grid: &FrequencyGrid) -> Self {
        let n = grid.count();
        Self {
            fft: FftPlanner::new().plan_fft_inverse(n),
            window: hann_window(n),
            delay_step_s: grid.delay_resolution_s(),
        }
    }

    pub fn compute(&self, row: &[Complex64]) -> Pdp {
        assert_eq!(row.len(), self.window.len(), "row length must match the sweep");
        let n = row.len();
        let mut buf: Vec<Complex64> =
            row.iter().zip(&self.window).map(|(h, w)| h * w).collect();
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()];
        self.fft.process_with_scratch(&mut buf, &mut scratch);
        let scale = 1.0 / (n as f64);
        Pdp {
            power: buf.iter().map(|v| (v * scale).norm_sqr()).collect(),
            delay_step_s: self.delay_step_s,
        }
    }
}

/// Computes the PDP of one CTF row.
pub fn compute_pdp(row: &[Complex64], grid: &FrequencyGrid) -> Pdp {
    assert_eq!(row.len(), grid.count(), "row length must match the sweep");
    PdpComputer::new(grid).compute(row)
}

/// Re-plots aliased bins past the observation limit, doubling the delay axis.
///
/// Any component observed at a delay distance short of the line-of-sight
/// position must be an alias of a path longer than the observation limit, so
/// bins below the LoS bin move up by one IDFT period (`N` bins). The output
/// covers `2N` bins, i.e. delay distances `[0, 2·d_max)`; the LoS bin itself
/// never moves.
pub fn unwrap_pdp(pdp: &Pdp, d_m: f64) -> Result<Vec<f64>> {
    let n = pdp.len();
    let step_m = pdp.delay_distance_step_m();
    let d_max = (n - 1) as f64 * step_m;
    if !(d_m > 0.0 && d_m < d_max) {
        return Err(Error::InvalidArgument(format!(
            "LoS distance {d_m} m must lie inside the observation span (0, {d_max} m)"
        )));
    }
    let los_bin = (d_m / step_m).round() as usize;
    let mut out = vec![0.0; 2 * n];
    for (i, &p) in pdp.power.iter().enumerate() {
        if i < los_bin {
            out[i + n] = p;
        } else {
            out[i] = p;
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::Pdp;

    /// Direct PDP construction for estimator tests.
    pub(crate) fn pdp_from_power(power: Vec<f64>, delay_step_s: f64) -> Pdp {
        Pdp { power, delay_step_s }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid(count: usize) -> FrequencyGrid {
        FrequencyGrid::new(250e9, 10e6, count).unwrap()
    }

    #[test]
    fn flat_row_concentrates_at_zero_delay() {
        let g = grid(512);
        let row = vec![Complex64::new(1.0, 0.0); 512];
        let pdp = compute_pdp(&row, &g);
        let total: f64 = pdp.power().iter().sum();
        // Hann main lobe: the peak bin plus its immediate neighbors.
        let main: f64 =
            pdp.power()[..3].iter().sum::<f64>() + pdp.power()[510..].iter().sum::<f64>();
        let peak = pdp.power().iter().skip(1).cloned().fold(0.0, f64::max);
        assert!(pdp.power()[0] >= peak);
        assert!(main / total > 0.99, "main lobe fraction {}", main / total);
    }

    #[test]
    fn shift_theorem_places_the_peak() {
        let g = grid(256);
        let n0 = 37;
        let row: Vec<Complex64> = (0..256)
            .map(|k| {
                Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * n0) as f64 / 256.0)
            })
            .collect();
        let pdp = compute_pdp(&row, &g);
        let peak = pdp
            .power()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert_eq!(peak, n0);
    }

    #[test]
    fn matches_direct_dft_oracle() {
        let g = grid(256);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let row: Vec<Complex64> = (0..256)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let pdp = compute_pdp(&row, &g);

        // Brute-force O(N²) inverse DFT.
        let n = row.len();
        let w = hann_window(n);
        for out_bin in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, h) in row.iter().enumerate() {
                let phase = 2.0 * std::f64::consts::PI * (k * out_bin) as f64 / n as f64;
                acc += w[k] * h * Complex64::from_polar(1.0, phase);
            }
            let expected = (acc / n as f64).norm_sqr();
            let got = pdp.power()[out_bin];
            let denom = expected.max(1e-300);
            assert!(
                (got - expected).abs() / denom < 1e-9,
                "bin {out_bin}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn windowed_energy_is_conserved_through_the_idft() {
        let g = grid(257);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let row: Vec<Complex64> = (0..257)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let pdp = compute_pdp(&row, &g);
        let pdp_energy: f64 = pdp.power().iter().sum();
        let w = hann_window(257);
        let windowed: f64 =
            row.iter().zip(&w).map(|(h, w)| (h * w).norm_sqr()).sum::<f64>() / 257.0;
        assert!((pdp_energy - windowed).abs() / windowed < 1e-9);
    }

    #[test]
    fn unwrap_moves_only_bins_below_the_los() {
        let g = grid(1001);
        let step = g.delay_distance_resolution_m();
        let n = 1001;
        // Craft a PDP directly: LoS at 9 m, alias of a 35 m path one IDFT
        // period down.
        let mut power = vec![0.0; n];
        let los_bin = (9.0 / step).round() as usize;
        let true_bin = (35.0 / step).round() as usize;
        let alias_bin = true_bin - n;
        power[los_bin] = 1.0;
        power[alias_bin] = 0.25;
        let pdp = Pdp { power, delay_step_s: g.delay_resolution_s() };

        let unwrapped = unwrap_pdp(&pdp, 9.0).unwrap();
        assert_eq!(unwrapped.len(), 2 * n);
        assert_eq!(unwrapped[los_bin], 1.0);
        assert_eq!(unwrapped[alias_bin + n], 0.25);
        assert_eq!(unwrapped[alias_bin], 0.0);
        // The alias lands back at the true traveled distance.
        let recovered_m = (alias_bin + n) as f64 * step;
        assert!((recovered_m - 35.0).abs() <= step);
    }

    #[test]
    fn unwrap_without_aliases_zero_pads() {
        let g = grid(101);
        let mut power = vec![0.0; 101];
        power[60] = 1.0;
        power[80] = 0.5;
        let pdp = Pdp { power: power.clone(), delay_step_s: g.delay_resolution_s() };
        let d = 55.0 * g.delay_distance_resolution_m();
        let unwrapped = unwrap_pdp(&pdp, d).unwrap();
        assert_eq!(&unwrapped[..101], &power[..]);
        assert!(unwrapped[101..].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn unwrap_never_moves_the_los_bin() {
        let g = grid(101);
        let step = g.delay_distance_resolution_m();
        let mut power = vec![0.0; 101];
        power[40] = 1.0;
        let pdp = Pdp { power, delay_step_s: g.delay_resolution_s() };
        let unwrapped = unwrap_pdp(&pdp, 40.0 * step).unwrap();
        assert_eq!(unwrapped[40], 1.0);
    }

    #[test]
    fn unwrap_rejects_out_of_span_distances() {
        let g = grid(101);
        let pdp = Pdp { power: vec![0.0; 101], delay_step_s: g.delay_resolution_s() };
        let d_max = 100.0 * g.delay_distance_resolution_m();
        assert!(unwrap_pdp(&pdp, d_max * 1.01).is_err());
        assert!(unwrap_pdp(&pdp, 0.0).is_err());
    }
}
