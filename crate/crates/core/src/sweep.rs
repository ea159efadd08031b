//! Observables along a one-parameter family of states and analysis of the
//! resulting discord curves.

use alloc::vec::Vec;

use crate::correlations::{concurrence, discord_b, mutual_information, DiscordOptions};
use crate::steering::{contains_origin, ellipsoid_size, steering_ellipsoid};
use crate::{Result, Side, TwoQubitState};

/// Discord at `p = 1` is evaluated here instead: the family usually jumps to
/// a product state exactly at the endpoint.
pub const P_ONE_SUBSTITUTE: f64 = 1.0 - 1e-9;

/// Default threshold for "discord has started to rise" in [`analyze_curve`].
pub const RISE_TOL: f64 = 1e-5;

/// Tolerance for the origin test on `E_B`.
pub const ORIGIN_TOL: f64 = 1e-12;

pub fn discord_probe_p(p: f64) -> f64 {
    if p >= 1.0 {
        P_ONE_SUBSTITUTE
    } else {
        p
    }
}

/// Observables at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub p: f64,
    pub discord: f64,
    pub concurrence: f64,
    pub mutual_info: f64,
    /// Longest-axis lengths `2 s₁` of `E_A` and `E_B`.
    pub l_a: f64,
    pub l_b: f64,
    pub vol_a: f64,
    pub vol_b: f64,
    pub origin_b: bool,
}

/// Row for `family(p)`, with discord taken from `family(discord_probe_p(p))`.
pub fn observe<F>(family: F, p: f64, opts: &DiscordOptions) -> Result<ScanRow>
where
    F: Fn(f64) -> Result<TwoQubitState>,
{
    let state = family(p)?;
    let probe = discord_probe_p(p);
    let discord = if probe == p {
        discord_b(&state, opts).discord
    } else {
        discord_b(&family(probe)?, opts).discord
    };
    let e_a = steering_ellipsoid(&state, Side::A);
    let e_b = steering_ellipsoid(&state, Side::B);
    let (size_a, size_b) = (ellipsoid_size(&e_a), ellipsoid_size(&e_b));
    Ok(ScanRow {
        p,
        discord,
        concurrence: concurrence(&state),
        mutual_info: mutual_information(&state),
        l_a: size_a.length,
        l_b: size_b.length,
        vol_a: size_a.volume,
        vol_b: size_b.volume,
        origin_b: contains_origin(&e_b, ORIGIN_TOL),
    })
}

/// `steps` evenly spaced points from `start` to `end`, endpoints included.
pub fn linear_grid(start: f64, end: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => alloc::vec![start],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    end
                } else {
                    start + (end - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Landmarks of a discord curve `D(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSummary {
    /// Discord at the first grid point.
    pub d0: f64,
    /// Largest discord before `p = 1`.
    pub dm: f64,
    /// Valley after the start to the following peak.
    pub delta_d: f64,
    /// First grid `p` where discord exceeds its running minimum by the tolerance.
    pub p_rise: Option<f64>,
    /// Grid `p` of `dm`.
    pub p_peak: f64,
}

/// Summarises a sampled curve. Points with `p ≥ 1` are ignored for the
/// valley and peak (unless nothing else is left).
///
/// The valley is the running minimum at the first point where the curve
/// climbs more than `rise_tol` above it; the peak is the maximum from the
/// valley onward. A curve that never climbs has `delta_d = 0`.
pub fn analyze_curve(ps: &[f64], ds: &[f64], rise_tol: f64) -> CurveSummary {
    assert_eq!(ps.len(), ds.len(), "one discord value per grid point");
    assert!(!ps.is_empty(), "empty curve");
    let mut n = ps.iter().take_while(|&&p| p < 1.0).count();
    if n == 0 {
        n = ps.len();
    }
    let (ps, ds) = (&ps[..n], &ds[..n]);

    let (peak_idx, dm) = argmax(ds, 0);
    let mut valley_idx = 0;
    let mut rise = None;
    for k in 1..n {
        if ds[k] > ds[valley_idx] + rise_tol {
            rise = Some(k);
            break;
        }
        if ds[k] < ds[valley_idx] {
            valley_idx = k;
        }
    }
    let delta_d = match rise {
        Some(_) => argmax(ds, valley_idx).1 - ds[valley_idx],
        None => 0.0,
    };
    CurveSummary {
        d0: ds[0],
        dm,
        delta_d,
        p_rise: rise.map(|k| ps[k]),
        p_peak: ps[peak_idx],
    }
}

fn argmax(xs: &[f64], from: usize) -> (usize, f64) {
    xs.iter()
        .enumerate()
        .skip(from)
        .fold((from, f64::NEG_INFINITY), |best, (i, &x)| {
            if x > best.1 {
                (i, x)
            } else {
                best
            }
        })
}
