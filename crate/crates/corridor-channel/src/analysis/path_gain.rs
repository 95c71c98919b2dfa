//! Path-gain estimation: windowed magnitude with boresight antenna gains
//! divided out.

use crate::antenna::AntennaModel;
use crate::grid::FrequencyGrid;
use crate::synthesis::CtfDataset;
use crate::Result;

use super::window::{remove_fast_fading, WindowForm};

/// Amplitude path gain PG(f, d) on a (distance x frequency) grid.
#[derive(Debug, Clone)]
pub struct PathGainSurface {
    grid: FrequencyGrid,
    distances_m: Vec<f64>,
    /// Row-major linear amplitude gain, `pg[di * grid.count() + k]`.
    pg: Vec<f64>,
    window_m: u32,
}

impl PathGainSurface {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn distances_m(&self) -> &[f64] {
        &self.distances_m
    }

    pub fn window_m(&self) -> u32 {
        self.window_m
    }

    pub fn values(&self) -> &[f64] {
        &self.pg
    }

    pub fn row(&self, di: usize) -> &[f64] {
        let n = self.grid.count();
        &self.pg[di * n..(di + 1) * n]
    }

    pub fn value(&self, di: usize, k: usize) -> f64 {
        self.pg[di * self.grid.count() + k]
    }
}

/// Estimates the path gain surface of a CTF dataset: removes fast fading
/// with an `lee_m`-wavelength window, then divides out the boresight gains
/// of both horns at each frequency.
pub fn estimate_path_gain(
    ctf: &CtfDataset,
    antenna: &AntennaModel,
    lee_m: u32,
    form: WindowForm,
) -> Result<PathGainSurface> {
    let grid = *ctf.grid();
    let gains: Vec<f64> = grid
        .frequencies()
        .map(|f| antenna.boresight_gain_amplitude(f).map(|g| g * g))
        .collect::<Result<_>>()?;
    let mut pg = remove_fast_fading(ctf, lee_m, form);
    for row in pg.chunks_mut(grid.count()) {
        for (v, g) in row.iter_mut().zip(&gains) {
            *v /= g;
        }
    }
    Ok(PathGainSurface { grid, distances_m: ctf.distances_m().to_vec(), pg, window_m: lee_m })
}
