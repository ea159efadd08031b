//! Parameter sweeps of a state under a one-parameter channel family on B.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qse_core::channels::{self, apply_local_b, QubitChannel};
use qse_core::correlations::DiscordOptions;
use qse_core::families::is_physical_bell_diagonal;
use qse_core::sweep::{analyze_curve, linear_grid, observe, CurveSummary, ScanRow, RISE_TOL};
use qse_core::TwoQubitState;

use crate::error::{Result, ToolkitError};
use crate::formats::StateSpec;

pub const CSV_VERSION_LINE: &str =
    "# qse-toolkit v1, columns: p,discord,concurrence,mutual_info,l_a,l_b,vol_a,vol_b,origin_b";
pub const C3_CSV_VERSION_LINE: &str =
    "# qse-toolkit v1, columns: c3,d0,dm,delta_d,p_rise,p_peak,note";

/// Channel families parametrised by `p ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ChannelFamily {
    /// Amplitude damping toward |0⟩.
    Ad,
    Identity,
    Depolarizing,
    Dephasing,
}

impl ChannelFamily {
    pub fn at(self, p: f64) -> Result<QubitChannel> {
        Ok(match self {
            Self::Ad => channels::amplitude_damping(p)?,
            Self::Identity => QubitChannel::identity(),
            Self::Depolarizing => channels::depolarizing(p)?,
            Self::Dephasing => channels::dephasing(p)?,
        })
    }
}

/// Either an explicit `p` grid, or evolution times mapped by `p = 1 − e^{−γt}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PGrid {
    Linear { start: f64, end: f64, steps: usize },
    Time { gamma: f64, t_start: f64, t_end: f64, steps: usize },
}

impl Default for PGrid {
    fn default() -> Self {
        Self::Linear {
            start: 0.0,
            end: 1.0,
            steps: 201,
        }
    }
}

impl PGrid {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Linear { start, end, steps } => {
                (0.0..=1.0).contains(&start) && (0.0..=1.0).contains(&end) && start <= end && steps >= 2
            }
            Self::Time { gamma, t_start, t_end, steps } => {
                gamma >= 0.0 && gamma.is_finite() && t_start >= 0.0 && t_start <= t_end && steps >= 2
            }
        };
        if ok {
            Ok(())
        } else {
            Err(ToolkitError::Usage(format!(
                "grid {self:?} needs 0 <= start <= end <= 1 (or gamma, t >= 0) and at least 2 steps"
            )))
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match *self {
            Self::Linear { start, end, steps } => linear_grid(start, end, steps),
            Self::Time { gamma, t_start, t_end, steps } => linear_grid(t_start, t_end, steps)
                .into_iter()
                .map(|t| -(-gamma * t).exp_m1())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub state: StateSpec,
    pub channel: ChannelFamily,
    #[serde(default)]
    pub grid: PGrid,
    /// Seeds the discord minimiser's restarts.
    #[serde(default)]
    pub seed: u64,
}

impl ScanConfig {
    pub fn discord_options(&self) -> DiscordOptions {
        DiscordOptions {
            seed: self.seed,
            ..DiscordOptions::default()
        }
    }
}

/// Evaluates every grid point (in parallel); rows come back in grid order.
pub fn run_p_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    cfg.grid.validate()?;
    let state = cfg.state.build()?;
    let opts = cfg.discord_options();
    let family = |p: f64| -> qse_core::Result<TwoQubitState> {
        let ch = cfg.channel.at(p).map_err(|e| match e {
            ToolkitError::Core(e) => e,
            other => qse_core::Error::DomainError(other.to_string()),
        })?;
        Ok(apply_local_b(&state, &ch))
    };
    cfg.grid
        .points()
        .par_iter()
        .map(|&p| observe(family, p, &opts).map_err(ToolkitError::from))
        .collect()
}

pub fn write_rows<W: Write>(rows: &[ScanRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}").map_err(|e| ToolkitError::io("<csv>", e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "discord", "concurrence", "mutual_info", "l_a", "l_b", "vol_a", "vol_b", "origin_b"])?;
    for r in rows {
        w.write_record([
            r.p.to_string(),
            r.discord.to_string(),
            r.concurrence.to_string(),
            r.mutual_info.to_string(),
            r.l_a.to_string(),
            r.l_b.to_string(),
            r.vol_a.to_string(),
            r.vol_b.to_string(),
            r.origin_b.to_string(),
        ])?;
    }
    w.flush().map_err(|e| ToolkitError::io("<csv>", e))?;
    Ok(())
}

/// One line of a `c₃` sweep: either the curve landmarks or the reason the
/// triple was skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct C3Row {
    pub c3: f64,
    pub summary: std::result::Result<CurveSummary, String>,
}

/// Sweeps `c₃` for fixed `c₁, c₂`, running a `p` scan (under `channel`) for
/// each physical Bell-diagonal triple.
pub fn run_c3_scan(
    c1: f64,
    c2: f64,
    c3_grid: &[f64],
    channel: ChannelFamily,
    grid: &PGrid,
    seed: u64,
) -> Result<Vec<C3Row>> {
    grid.validate()?;
    let ps = grid.points();
    c3_grid
        .par_iter()
        .map(|&c3| {
            let c = [c1, c2, c3];
            if !is_physical_bell_diagonal(c) {
                return Ok(C3Row {
                    c3,
                    summary: Err(format!("skipped: c = {c:?} is not a valid state")),
                });
            }
            let cfg = ScanConfig {
                state: StateSpec::BellDiag { c },
                channel,
                grid: *grid,
                seed,
            };
            let ds: Vec<f64> = run_p_scan(&cfg)?.iter().map(|r| r.discord).collect();
            Ok(C3Row {
                c3,
                summary: Ok(analyze_curve(&ps, &ds, RISE_TOL)),
            })
        })
        .collect()
}

pub fn write_c3_rows<W: Write>(rows: &[C3Row], mut out: W) -> Result<()> {
    writeln!(out, "{C3_CSV_VERSION_LINE}").map_err(|e| ToolkitError::io("<csv>", e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["c3", "d0", "dm", "delta_d", "p_rise", "p_peak", "note"])?;
    for row in rows {
        match &row.summary {
            Ok(s) => w.write_record([
                row.c3.to_string(),
                s.d0.to_string(),
                s.dm.to_string(),
                s.delta_d.to_string(),
                s.p_rise.map(|p| p.to_string()).unwrap_or_default(),
                s.p_peak.to_string(),
                String::new(),
            ])?,
            Err(note) => w.write_record([
                row.c3.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                note.clone(),
            ])?,
        }
    }
    w.flush().map_err(|e| ToolkitError::io("<csv>", e))?;
    Ok(())
}

/// The grid `c₃` with the largest valley-to-peak increase, if any row was valid.
pub fn argmax_delta_d(rows: &[C3Row]) -> Option<(f64, CurveSummary)> {
    rows.iter()
        .filter_map(|r| r.summary.as_ref().ok().map(|s| (r.c3, *s)))
        .max_by(|a, b| a.1.delta_d.total_cmp(&b.1.delta_d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_grid_maps_to_probabilities() {
        let g = PGrid::Time {
            gamma: 2.0,
            t_start: 0.0,
            t_end: 1.0,
            steps: 3,
        };
        let ps = g.points();
        assert_eq!(ps[0], 0.0);
        assert!((ps[1] - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((ps[2] - (1.0 - (-2.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn invalid_grids_are_usage_errors() {
        for g in [
            PGrid::Linear { start: 0.5, end: 0.2, steps: 10 },
            PGrid::Linear { start: 0.0, end: 1.5, steps: 10 },
            PGrid::Linear { start: 0.0, end: 1.0, steps: 1 },
        ] {
            assert!(matches!(g.validate(), Err(ToolkitError::Usage(_))));
        }
    }

    #[test]
    fn identity_sweep_rows_are_identical() {
        let cfg = ScanConfig {
            state: StateSpec::BellDiag { c: [0.6, -0.3, 0.2] },
            channel: ChannelFamily::Identity,
            grid: PGrid::Linear { start: 0.0, end: 0.9, steps: 5 },
            seed: 1,
        };
        let rows = run_p_scan(&cfg).unwrap();
        for r in &rows[1..] {
            assert_eq!(
                (r.discord, r.concurrence, r.mutual_info, r.l_a, r.l_b, r.vol_a, r.vol_b, r.origin_b),
                (rows[0].discord, rows[0].concurrence, rows[0].mutual_info, rows[0].l_a, rows[0].l_b, rows[0].vol_a, rows[0].vol_b, rows[0].origin_b)
            );
        }
    }

    #[test]
    fn non_physical_triples_are_skipped() {
        let grid = PGrid::Linear { start: 0.0, end: 1.0, steps: 5 };
        let rows = run_c3_scan(0.9, -0.1, &[0.5], ChannelFamily::Ad, &grid, 0).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].summary.is_err());
        let rows = run_c3_scan(0.9, -0.1, &[0.05], ChannelFamily::Ad, &grid, 0).unwrap();
        assert!(rows[0].summary.is_ok());
    }
}
