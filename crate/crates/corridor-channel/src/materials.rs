//! Surface materials and Fresnel reflection coefficients.
//!
//! Surfaces are characterized by a real relative permittivity εr ≥ 1; the
//! incident medium is air (εr = 1 exactly). Coefficients are therefore real,
//! with reflection phase carried by the sign. Conductivity and loss tangent
//! are not modeled.

use crate::{Error, Result};

/// A surface material with real relative permittivity.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    name: String,
    rel_permittivity: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, rel_permittivity: f64) -> Result<Self> {
        if !(rel_permittivity.is_finite() && rel_permittivity >= 1.0) {
            return Err(Error::Material(format!(
                "relative permittivity must be >= 1, got {rel_permittivity}"
            )));
        }
        Ok(Self { name: name.into(), rel_permittivity })
    }

    /// Plasterboard, εr = 2.56 (ITU-R P.2040 class value).
    pub fn plasterboard() -> Self {
        Self::new("plasterboard", 2.56).unwrap()
    }

    /// Concrete, εr = 5.17.
    pub fn concrete() -> Self {
        Self::new("concrete", 5.17).unwrap()
    }

    /// Ceiling board, εr = 1.52.
    pub fn ceiling_board() -> Self {
        Self::new("ceiling_board", 1.52).unwrap()
    }

    /// Looks up a built-in material by name.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "plasterboard" => Some(Self::plasterboard()),
            "concrete" => Some(Self::concrete()),
            "ceiling_board" => Some(Self::ceiling_board()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rel_permittivity(&self) -> f64 {
        self.rel_permittivity
    }
}

/// Materials of the three corridor surface pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceAssignment {
    pub walls: Material,
    pub floor: Material,
    pub ceiling: Material,
}

impl SurfaceAssignment {
    /// Plasterboard walls, concrete floor, ceiling-board ceiling.
    pub fn indoor_default() -> Self {
        Self {
            walls: Material::plasterboard(),
            floor: Material::concrete(),
            ceiling: Material::ceiling_board(),
        }
    }
}

/// Polarization of the incident wave relative to the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Te,
    Tm,
}

/// Refraction angle via Snell's law, `asin(sin θ / √εr)`.
///
/// Always in `[0, θ]` since the refracted medium is denser than air.
pub fn refraction_angle(theta_rad: f64, material: &Material) -> f64 {
    debug_assert!((0.0..std::f64::consts::FRAC_PI_2).contains(&theta_rad));
    if material.rel_permittivity == 1.0 {
        // Identity medium: keep α = θ exact rather than round-tripping
        // through asin(sin θ), so the reflection coefficient vanishes
        // exactly.
        return theta_rad;
    }
    (theta_rad.sin() / material.rel_permittivity.sqrt()).asin()
}

/// Reflection coefficient for a transverse-electric incident wave.
///
/// In `(-1, 0]` for εr > 1; tends to -1 at grazing incidence.
pub fn fresnel_te(theta_rad: f64, material: &Material) -> f64 {
    let alpha = refraction_angle(theta_rad, material);
    let sqrt_er = material.rel_permittivity.sqrt();
    let (ct, ca) = (theta_rad.cos(), alpha.cos());
    (ct - sqrt_er * ca) / (ct + sqrt_er * ca)
}

/// Reflection coefficient for a transverse-magnetic incident wave.
///
/// Zero exactly at the Brewster angle `atan(√εr)`. The sign convention
/// follows the TM field definition with R(0) = (1 - √εr)/(1 + √εr), matching
/// the TE coefficient at normal incidence.
pub fn fresnel_tm(theta_rad: f64, material: &Material) -> f64 {
    let alpha = refraction_angle(theta_rad, material);
    let sqrt_er = material.rel_permittivity.sqrt();
    let (ct, ca) = (theta_rad.cos(), alpha.cos());
    (ca - sqrt_er * ct) / (ca + sqrt_er * ct)
}

/// Cumulative reflection factor of an `n`-bounce ray off one material:
/// the n-th power of the single-bounce coefficient.
pub fn reflection_factor(
    theta_rad: f64,
    material: &Material,
    bounces: u32,
    polarization: Polarization,
) -> f64 {
    assert!(bounces >= 1, "reflection factor needs at least one bounce");
    let r = match polarization {
        Polarization::Te => fresnel_te(theta_rad, material),
        Polarization::Tm => fresnel_tm(theta_rad, material),
    };
    r.powi(bounces as i32)
}
