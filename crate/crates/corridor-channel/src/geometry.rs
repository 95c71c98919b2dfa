//! Specular ray enumeration for an ideal rectangular corridor.
//!
//! Transmitter and receiver sit on a line parallel to the corridor axis, a
//! distance `d` apart, each displaced from the axis by the same transverse
//! offset. Reflections are handled per cross-section plane: the horizontal
//! plane (wall pair, extent = corridor width) and the vertical plane
//! (floor/ceiling pair, extent = corridor height). For each bounce count `n`
//! a plane contributes two rays, one per wall of the pair, distinguished by
//! which wall receives the first bounce.
//!
//! With `δ_n` the axial distance between consecutive bounces, the ray
//! geometry follows from
//!
//! ```text
//! d/δ_n = n ± [(-1)^n - 1]·|offset|/extent     (branch sign)
//! d_n   = d·sqrt(1 + (extent/δ_n)²)            (path length)
//! θ_n   = atan(δ_n/extent)                     (angle from surface normal)
//! ```
//!
//! For even `n` the offset term vanishes and both branches coincide.

use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

/// Cross-section plane of the corridor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneAxis {
    /// Wall pair; transverse extent is the corridor width.
    Horizontal,
    /// Floor/ceiling pair; transverse extent is the corridor height.
    Vertical,
}

/// Which wall of the pair receives the first bounce.
///
/// `Plus` is the wall toward which the transverse offset points (ties broken
/// toward the positive side of the axis when the offset is zero). For even
/// bounce counts the two branches have identical spacing and differ only in
/// bounce order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// One corridor cross-section: transverse extent of the surface pair plus the
/// common Tx/Rx offset from the central axis.
#[derive(Debug, Clone, Copy)]
pub struct CorridorCrossSection {
    extent_m: f64,
    offset_m: f64,
    plane: PlaneAxis,
}

impl CorridorCrossSection {
    /// `offset_m` is signed; positive points toward the `Plus` wall.
    pub fn new(extent_m: f64, offset_m: f64, plane: PlaneAxis) -> Result<Self> {
        if !(extent_m.is_finite() && extent_m > 0.0) {
            return Err(Error::Geometry(format!("extent must be positive, got {extent_m}")));
        }
        if !offset_m.is_finite() || offset_m.abs() >= extent_m / 2.0 {
            return Err(Error::Geometry(format!(
                "offset {offset_m} m must satisfy |offset| < extent/2 = {} m",
                extent_m / 2.0
            )));
        }
        Ok(Self { extent_m, offset_m, plane })
    }

    pub fn extent_m(&self) -> f64 {
        self.extent_m
    }

    pub fn offset_m(&self) -> f64 {
        self.offset_m
    }

    pub fn plane(&self) -> PlaneAxis {
        self.plane
    }
}

/// Reflection parameters of a ray; absent for the line-of-sight path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RayKind {
    LineOfSight,
    Reflected {
        plane: PlaneAxis,
        bounces: u32,
        branch: Branch,
        /// Axial spacing between consecutive bounces, m.
        spacing_m: f64,
        /// Incidence angle measured from the surface normal, in (0, π/2).
        reflection_angle_rad: f64,
        /// Whether the first bounce lands on the wall on the positive side
        /// of the axis (the ceiling, for the vertical plane).
        first_bounce_positive_side: bool,
    },
}

/// One enumerated multipath component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPath {
    /// Total distance traveled along the path, m. Equals the Tx-Rx distance
    /// for the line-of-sight ray and exceeds it for every reflected ray.
    pub path_length_m: f64,
    /// Angle between the ray and the corridor axis at departure, rad.
    pub departure_offboresight_rad: f64,
    pub kind: RayKind,
}

impl RayPath {
    pub fn is_los(&self) -> bool {
        matches!(self.kind, RayKind::LineOfSight)
    }
}

/// Axial spacing `δ_n` between consecutive bounces of an `n`-bounce ray.
pub fn bounce_spacing(
    d_m: f64,
    bounces: u32,
    cross: &CorridorCrossSection,
    branch: Branch,
) -> Result<f64> {
    if !(d_m.is_finite() && d_m > 0.0) {
        return Err(Error::Geometry(format!("Tx-Rx distance must be positive, got {d_m}")));
    }
    if bounces == 0 {
        return Err(Error::Geometry("bounce count must be at least 1".into()));
    }
    // [(-1)^n - 1] is -2 for odd n and 0 for even n.
    let parity_term = if bounces % 2 == 1 { -2.0 } else { 0.0 };
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    let denom = bounces as f64 + sign * parity_term * cross.offset_m.abs() / cross.extent_m;
    if denom <= 0.0 {
        return Err(Error::Geometry(format!(
            "offset {} m too large relative to extent {} m for {} bounce(s)",
            cross.offset_m, cross.extent_m, bounces
        )));
    }
    Ok(d_m / denom)
}

/// Total path length of a ray with bounce spacing `spacing_m`.
pub fn path_length(d_m: f64, spacing_m: f64, cross: &CorridorCrossSection) -> f64 {
    assert!(spacing_m > 0.0, "bounce spacing must be positive");
    d_m * (1.0 + (cross.extent_m / spacing_m).powi(2)).sqrt()
}

/// Incidence angle from the surface normal for a given bounce spacing.
pub fn reflection_angle(spacing_m: f64, cross: &CorridorCrossSection) -> f64 {
    assert!(spacing_m > 0.0, "bounce spacing must be positive");
    (spacing_m / cross.extent_m).atan()
}

/// Enumerates the line-of-sight ray plus all reflected rays with up to
/// `max_bounces` bounces: `1 + 4·max_bounces` paths in total (two branches per
/// plane per bounce count).
///
/// Output order is deterministic: LoS first, then ascending bounce count with
/// horizontal before vertical and `Plus` before `Minus`.
pub fn enumerate_rays(
    d_m: f64,
    horizontal: &CorridorCrossSection,
    vertical: &CorridorCrossSection,
    max_bounces: u32,
) -> Result<Vec<RayPath>> {
    if !(d_m.is_finite() && d_m > 0.0) {
        return Err(Error::Geometry(format!("Tx-Rx distance must be positive, got {d_m}")));
    }
    if max_bounces == 0 {
        return Err(Error::Geometry("max_bounces must be at least 1".into()));
    }

    let mut rays = Vec::with_capacity(1 + 4 * max_bounces as usize);
    rays.push(RayPath {
        path_length_m: d_m,
        departure_offboresight_rad: 0.0,
        kind: RayKind::LineOfSight,
    });

    for bounces in 1..=max_bounces {
        for cross in [horizontal, vertical] {
            for branch in [Branch::Plus, Branch::Minus] {
                let spacing_m = bounce_spacing(d_m, bounces, cross, branch)?;
                let reflection_angle_rad = reflection_angle(spacing_m, cross);
                let toward_positive = cross.offset_m >= 0.0;
                rays.push(RayPath {
                    path_length_m: path_length(d_m, spacing_m, cross),
                    departure_offboresight_rad: FRAC_PI_2 - reflection_angle_rad,
                    kind: RayKind::Reflected {
                        plane: cross.plane,
                        bounces,
                        branch,
                        spacing_m,
                        reflection_angle_rad,
                        first_bounce_positive_side: match branch {
                            Branch::Plus => toward_positive,
                            Branch::Minus => !toward_positive,
                        },
                    },
                });
            }
        }
    }
    Ok(rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn cross(extent: f64, offset: f64) -> CorridorCrossSection {
        CorridorCrossSection::new(extent, offset, PlaneAxis::Horizontal).unwrap()
    }

    /// Image-method oracle: mirror the receiver across the surface pair,
    /// connect with a straight line and read the geometry off the unfolded
    /// picture. Independent of the closed-form route used by the module.
    ///
    /// Wall images of a point at transverse position `y` are `k·e + (-1)^k·y`
    /// for integer `k`; a ray to image `k` makes `|k|` bounces and its first
    /// bounce is on the wall whose side matches the sign of `k`.
    fn image_oracle(
        d: f64,
        extent: f64,
        offset: f64,
        bounces: u32,
        branch: Branch,
    ) -> (f64, f64, f64) {
        let toward = if offset >= 0.0 { 1i64 } else { -1i64 };
        let k = match branch {
            Branch::Plus => toward * bounces as i64,
            Branch::Minus => -toward * bounces as i64,
        };
        let image = k as f64 * extent + if k % 2 == 0 { offset } else { -offset };
        let dy = (image - offset).abs();
        let spacing = d * extent / dy;
        let length = (d * d + dy * dy).sqrt();
        let theta = (d / dy).atan();
        (spacing, length, theta)
    }

    #[test]
    fn even_bounce_count_is_branch_symmetric() {
        let c = cross(2.0, 0.08);
        let plus = bounce_spacing(9.0, 2, &c, Branch::Plus).unwrap();
        let minus = bounce_spacing(9.0, 2, &c, Branch::Minus).unwrap();
        assert_eq!(plus, minus);
        assert_eq!(plus, 4.5);
    }

    #[test]
    fn zero_offset_reduces_to_d_over_n() {
        let c = cross(2.0, 0.0);
        assert_eq!(bounce_spacing(9.0, 3, &c, Branch::Plus).unwrap(), 3.0);
        assert_eq!(bounce_spacing(9.0, 3, &c, Branch::Minus).unwrap(), 3.0);
    }

    #[test]
    fn odd_bounce_spacing_matches_image_oracle() {
        let c = cross(2.0, 0.08);
        let plus = bounce_spacing(9.0, 3, &c, Branch::Plus).unwrap();
        // Frozen from the oracle: 9·2/(3·2 - 2·0.08).
        assert!((plus - 3.082_191_780_821_918).abs() < 1e-14);
        let (oracle_spacing, _, _) = image_oracle(9.0, 2.0, 0.08, 3, Branch::Plus);
        assert!((plus - oracle_spacing).abs() / oracle_spacing < 1e-15);
    }

    #[test]
    fn path_length_at_45_degrees() {
        let c = cross(2.0, 0.0);
        let len = path_length(9.0, 2.0, &c);
        assert!((len - 9.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn path_length_single_bounce_frozen() {
        let c = cross(2.0, 0.0);
        let spacing = bounce_spacing(9.0, 1, &c, Branch::Plus).unwrap();
        assert_eq!(spacing, 9.0);
        let len = path_length(9.0, spacing, &c);
        // Frozen from the image oracle: sqrt(9² + 2²).
        assert!((len - 9.219_544_457_292_887).abs() < 1e-12);
    }

    #[test]
    fn excess_length_vanishes_asymptotically() {
        // d_n - d -> extent²·n²/(2d) as d grows with n fixed.
        let c = cross(2.0, 0.0);
        for n in [1u32, 3, 6] {
            let d = 1e4;
            let spacing = bounce_spacing(d, n, &c, Branch::Plus).unwrap();
            let excess = path_length(d, spacing, &c) - d;
            let predicted = (2.0 * n as f64).powi(2) / (2.0 * d);
            assert!(
                (excess - predicted).abs() / predicted < 1e-6,
                "n={n}: excess={excess}, predicted={predicted}"
            );
        }
    }

    #[test]
    fn reflection_angle_pins() {
        let c = cross(2.0, 0.0);
        assert!((reflection_angle(2.0, &c) - FRAC_PI_4).abs() < 1e-15);
        assert!(reflection_angle(1e12, &c) > FRAC_PI_2 - 1e-11);
        // d=9, n=3, zero offset: atan(3/2).
        let spacing = bounce_spacing(9.0, 3, &c, Branch::Plus).unwrap();
        let theta = reflection_angle(spacing, &c);
        assert!((theta - 0.982_793_723_247_329).abs() < 1e-12);
        let (_, _, oracle_theta) = image_oracle(9.0, 2.0, 0.0, 3, Branch::Plus);
        assert!((theta - oracle_theta).abs() < 1e-15);
    }

    #[test]
    fn enumerate_counts_and_ordering() {
        let h = cross(2.0, 0.08);
        let v = CorridorCrossSection::new(2.65, -0.7, PlaneAxis::Vertical).unwrap();
        let rays = enumerate_rays(9.0, &h, &v, 6).unwrap();
        assert_eq!(rays.len(), 25);
        assert!(rays[0].is_los());
        // Every reflected path is strictly longer than the LoS path, so the
        // LoS ray stays first under any sort by path length.
        for ray in &rays[1..] {
            assert!(ray.path_length_m > 9.0);
        }
    }

    #[test]
    fn one_bounce_centered_pairs_up() {
        let h = cross(2.0, 0.0);
        let v = CorridorCrossSection::new(2.65, 0.0, PlaneAxis::Vertical).unwrap();
        let rays = enumerate_rays(9.0, &h, &v, 1).unwrap();
        assert_eq!(rays.len(), 5);
        let mut lengths: Vec<f64> = rays[1..].iter().map(|r| r.path_length_m).collect();
        lengths.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Wall pair and floor/ceiling pair each collapse to one length.
        assert_eq!(lengths[0], lengths[1]);
        assert_eq!(lengths[2], lengths[3]);
        assert!(lengths[1] < lengths[2]);
    }

    #[test]
    fn departure_offboresight_complements_reflection_angle() {
        let h = cross(2.0, 0.08);
        let v = CorridorCrossSection::new(2.65, -0.7, PlaneAxis::Vertical).unwrap();
        for ray in enumerate_rays(9.0, &h, &v, 4).unwrap() {
            match ray.kind {
                RayKind::LineOfSight => assert_eq!(ray.departure_offboresight_rad, 0.0),
                RayKind::Reflected { reflection_angle_rad, .. } => {
                    assert!(
                        (ray.departure_offboresight_rad + reflection_angle_rad - FRAC_PI_2).abs()
                            < 1e-15
                    );
                }
            }
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(CorridorCrossSection::new(0.0, 0.0, PlaneAxis::Horizontal).is_err());
        assert!(CorridorCrossSection::new(2.0, 1.0, PlaneAxis::Horizontal).is_err());
        assert!(CorridorCrossSection::new(2.0, -1.2, PlaneAxis::Horizontal).is_err());
        let c = cross(2.0, 0.08);
        assert!(bounce_spacing(0.0, 1, &c, Branch::Plus).is_err());
        assert!(bounce_spacing(-3.0, 1, &c, Branch::Plus).is_err());
        assert!(bounce_spacing(9.0, 0, &c, Branch::Plus).is_err());
        assert!(enumerate_rays(9.0, &c, &c, 0).is_err());
    }

    proptest! {
        /// Closed-form spacing, length and angle agree with the unfolded
        /// image construction to high relative accuracy.
        #[test]
        fn image_method_equivalence(
            d in 0.1f64..50.0,
            extent in 0.5f64..5.0,
            offset_frac in -0.99f64..0.99,
            bounces in 1u32..=6,
            plus in proptest::bool::ANY,
        ) {
            let offset = offset_frac * extent / 2.0;
            let c = cross(extent, offset);
            let branch = if plus { Branch::Plus } else { Branch::Minus };
            let spacing = bounce_spacing(d, bounces, &c, branch).unwrap();
            let length = path_length(d, spacing, &c);
            let theta = reflection_angle(spacing, &c);
            let (os, ol, ot) = image_oracle(d, extent, offset, bounces, branch);
            prop_assert!((spacing - os).abs() / os < 1e-12);
            prop_assert!((length - ol).abs() / ol < 1e-12);
            prop_assert!((theta - ot).abs() < 1e-12);
        }

        /// Spacing decreases with bounce count; the reflection angle
        /// increases with spacing; path length never dips below d.
        #[test]
        fn monotonicity_and_lower_bound(
            d in 0.1f64..50.0,
            extent in 0.5f64..5.0,
            offset_frac in -0.99f64..0.99,
            plus in proptest::bool::ANY,
        ) {
            let offset = offset_frac * extent / 2.0;
            let c = cross(extent, offset);
            let branch = if plus { Branch::Plus } else { Branch::Minus };
            let mut prev_spacing = f64::INFINITY;
            for n in 1..=6 {
                let spacing = bounce_spacing(d, n, &c, branch).unwrap();
                prop_assert!(spacing < prev_spacing);
                prop_assert!(path_length(d, spacing, &c) > d);
                prop_assert!(
                    reflection_angle(spacing, &c) < reflection_angle(prev_spacing.min(1e12), &c)
                );
                prev_spacing = spacing;
            }
        }
    }
}
