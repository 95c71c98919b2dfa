//! Built-in oracle suite behind the `selftest` subcommand.
//!
//! Each check re-derives a result through an independent route (unfolded
//! images, brute-force DFT, a known-K channel generator, free-space theory)
//! and compares it with the production path. All randomness is seeded.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    analyze, compute_pdp, hann_window, k_factor_mom, AnalysisConfig,
};
use crate::geometry::{bounce_spacing, path_length, Branch, CorridorCrossSection, PlaneAxis};
use crate::grid::FrequencyGrid;
use crate::materials::{fresnel_te, fresnel_tm, Material, SurfaceAssignment};
use crate::scenario;
use crate::synthesis::{convergence_check, synthesize};
use crate::units::db_to_power;

#[derive(Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs every check with the given seed.
pub fn run(seed: u64) -> SelftestReport {
    let checks = vec![
        geometry_image_oracle(seed),
        materials_fresnel(),
        pdp_dft_oracle(seed),
        rician_mom(seed),
        free_space_fit(),
        bounce_convergence(),
    ];
    SelftestReport { checks }
}

fn geometry_image_oracle(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = 10_000;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let d = 0.1 + 49.9 * rng.random::<f64>();
        let extent = 0.5 + 4.5 * rng.random::<f64>();
        let offset = (rng.random::<f64>() - 0.5) * 0.998 * extent;
        let bounces = 1 + (rng.random::<u64>() % 6) as u32;
        let branch = if rng.random::<f64>() < 0.5 { Branch::Plus } else { Branch::Minus };
        let cross = CorridorCrossSection::new(extent, offset, PlaneAxis::Horizontal)
            .expect("sampled offset stays inside the corridor");

        // Unfolded-image route.
        let toward = if offset >= 0.0 { 1i64 } else { -1i64 };
        let k = match branch {
            Branch::Plus => toward * bounces as i64,
            Branch::Minus => -toward * bounces as i64,
        };
        let image = k as f64 * extent + if k % 2 == 0 { offset } else { -offset };
        let dy = (image - offset).abs();
        let oracle_spacing = d * extent / dy;
        let oracle_length = (d * d + dy * dy).sqrt();

        let spacing = bounce_spacing(d, bounces, &cross, branch).expect("valid geometry");
        let length = path_length(d, spacing, &cross);
        worst = worst
            .max((spacing - oracle_spacing).abs() / oracle_spacing)
            .max((length - oracle_length).abs() / oracle_length);
    }
    CheckResult {
        name: "geometry-image-oracle",
        passed: worst < 1e-12,
        detail: format!("{cases} cases, worst relative error {worst:.2e}"),
    }
}

fn materials_fresnel() -> CheckResult {
    materials_fresnel_with(&[Material::plasterboard(), Material::concrete(), Material::ceiling_board()])
}

fn materials_fresnel_with(materials: &[Material]) -> CheckResult {
    let mut detail = String::new();
    let mut passed = true;
    for m in materials {
        if m.rel_permittivity() < 1.0 {
            passed = false;
            detail = format!("{} has rel_permittivity {} < 1", m.name(), m.rel_permittivity());
            break;
        }
        let brewster = m.rel_permittivity().sqrt().atan();
        let null = fresnel_tm(brewster, m).abs();
        if null >= 1e-12 {
            passed = false;
            detail = format!("{} Brewster residual {null:.2e}", m.name());
            break;
        }
        // Energy balance |R|² + T = 1 at a spread of angles.
        for i in 1..30 {
            let theta = i as f64 / 30.0 * (std::f64::consts::FRAC_PI_2 - 1e-6);
            let sqrt_er = m.rel_permittivity().sqrt();
            let alpha = (theta.sin() / sqrt_er).asin();
            let (ct, ca) = (theta.cos(), alpha.cos());
            let r_te = fresnel_te(theta, m);
            let t_te = 2.0 * ct / (ct + sqrt_er * ca);
            let bal_te = r_te * r_te + sqrt_er * ca / ct * t_te * t_te;
            let r_tm = fresnel_tm(theta, m);
            let t_tm = 2.0 * ct / (ca + sqrt_er * ct);
            let bal_tm = r_tm * r_tm + sqrt_er * ca / ct * t_tm * t_tm;
            if (bal_te - 1.0).abs() > 1e-11 || (bal_tm - 1.0).abs() > 1e-11 {
                passed = false;
                detail = format!("{} energy balance broken at θ={theta:.3}", m.name());
                break;
            }
        }
        if !passed {
            break;
        }
    }
    if passed {
        detail = format!("{} materials: Brewster nulls < 1e-12, energy balanced", materials.len());
    }
    CheckResult { name: "fresnel-materials", passed, detail }
}

fn pdp_dft_oracle(seed: u64) -> CheckResult {
    let n = 256;
    let grid = FrequencyGrid::new(250e9, 10e6, n).expect("valid grid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let row: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let pdp = compute_pdp(&row, &grid);
    let w = hann_window(n);
    let mut worst = 0.0f64;
    for out_bin in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, h) in row.iter().enumerate() {
            let phase = 2.0 * std::f64::consts::PI * (k * out_bin) as f64 / n as f64;
            acc += w[k] * h * Complex64::from_polar(1.0, phase);
        }
        let expected = (acc / n as f64).norm_sqr();
        worst = worst.max((pdp.power()[out_bin] - expected).abs() / expected.max(1e-300));
    }
    CheckResult {
        name: "pdp-dft-oracle",
        passed: worst < 1e-9,
        detail: format!("N={n}, worst relative error {worst:.2e}"),
    }
}

fn rician_mom(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5851f42d4c957f2d);
    let mut worst_bias = 0.0f64;
    for k_db in [0.0, 5.0, 10.0, 15.0] {
        let k_linear = db_to_power(k_db);
        let sigma = (1.0 / (2.0 * k_linear)).sqrt();
        let trials = 100;
        let mut sum = 0.0;
        for _ in 0..trials {
            let row: Vec<Complex64> = (0..8001)
                .map(|_| {
                    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
                    let u2: f64 = rng.random();
                    let r = (-2.0 * u1.ln()).sqrt();
                    let a = 2.0 * std::f64::consts::PI * u2;
                    Complex64::new(1.0 + sigma * r * a.cos(), sigma * r * a.sin())
                })
                .collect();
            match k_factor_mom(&row).db() {
                Some(est) => sum += est,
                None => {
                    return CheckResult {
                        name: "rician-mom",
                        passed: false,
                        detail: format!("estimator degenerate at K={k_db} dB"),
                    }
                }
            }
        }
        worst_bias = worst_bias.max((sum / trials as f64 - k_db).abs());
    }
    CheckResult {
        name: "rician-mom",
        passed: worst_bias < 1.0,
        detail: format!("K in 0..15 dB, worst mean bias {worst_bias:.3} dB"),
    }
}

fn free_space_fit() -> CheckResult {
    let (mut s, _) = scenario::citic();
    let air = Material::new("air", 1.0).expect("air permittivity");
    s.surfaces = SurfaceAssignment { walls: air.clone(), floor: air.clone(), ceiling: air };
    s.distances_m = (5..=28).map(|i| 0.6 * i as f64).collect();
    let grid = FrequencyGrid::new(250e9, 10e6, 801).expect("valid grid");
    let ds = match synthesize(&s, &grid) {
        Ok(ds) => ds,
        Err(e) => {
            return CheckResult {
                name: "free-space-fit",
                passed: false,
                detail: format!("synthesis failed: {e}"),
            }
        }
    };
    let report = match analyze(&ds, &s.antenna, &AnalysisConfig::default()) {
        Ok(r) => r,
        Err(e) => {
            return CheckResult {
                name: "free-space-fit",
                passed: false,
                detail: format!("analysis failed: {e}"),
            }
        }
    };
    let mean_n: f64 =
        report.fits.iter().map(|f| f.exponent).sum::<f64>() / report.fits.len() as f64;
    let worst =
        report.fits.iter().map(|f| (f.exponent + 2.0).abs()).fold(0.0, f64::max);
    CheckResult {
        name: "free-space-fit",
        passed: worst < 0.01,
        detail: format!("n = {mean_n:.4} mean, worst |n+2| = {worst:.4}"),
    }
}

fn bounce_convergence() -> CheckResult {
    let (mut s, _) = scenario::citic();
    s.distances_m = vec![4.2, 9.0, 16.2];
    let grid = FrequencyGrid::new(250e9, 200e6, 401).expect("valid grid");
    match convergence_check(&s, &grid, 5, 6) {
        Ok(delta) => CheckResult {
            name: "bounce-convergence",
            passed: delta <= 1e-5,
            detail: format!("max |H6 - H5| = {delta:.2e} linear"),
        },
        Err(e) => CheckResult {
            name: "bounce-convergence",
            passed: false,
            detail: format!("{e}"),
        },
    }
}

/// Verification hook used by tests: run the materials check against an
/// arbitrary table, e.g. a corrupted preset.
#[doc(hidden)]
pub fn materials_check_for(materials: &[Material]) -> bool {
    materials_fresnel_with(materials).passed
}
