//! Monthly demand adjustment for the three-line layout.
//!
//! The middle line always runs mixed models; the two side lines are
//! reassigned between fuel and pure-electric vehicles from the monthly
//! recycling volumes. Small month-over-month drifts keep the current
//! assignment and only re-derive the takt time and re-balance
//! ([`stage1_replan`]); larger shifts force a fresh assignment via
//! [`assign_line_models`].

use thiserror::Error;

use crate::analytics::ParetoArchive;
use crate::codec::VisitLedger;
use crate::evolve::{ConfigError, EvoConfig, Insga3};
use crate::model::{Instance, ModelError, VehicleModel};

#[derive(Debug, Error)]
pub enum DynamicsError {
    /// No units are demanded, so a cycle length cannot be derived.
    #[error("zero units demanded; takt time is undefined")]
    ZeroDemand,
    /// Both vehicle types exceed twice the single-line capacity, so no
    /// split across two side lines can absorb either type.
    #[error(
        "volumes overload the layout: fuel {fuel} and pure-electric {pure_electric} \
         both reach twice the single-line capacity {single_line_cap}"
    )]
    Overload {
        fuel: u64,
        pure_electric: u64,
        single_line_cap: u64,
    },
    /// A forecast drifted more than 25% from the current volume for at
    /// least one vehicle type; the incremental replan does not apply.
    #[error(
        "forecast drifts beyond 25% of current volumes \
         (fuel {current_fuel} -> {forecast_fuel}, \
         pure-electric {current_pev} -> {forecast_pev})"
    )]
    FluctuationTooLarge {
        current_fuel: u64,
        forecast_fuel: u64,
        current_pev: u64,
        forecast_pev: u64,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One month of demand: units of each vehicle type to disassemble and
/// the number of units a single line can absorb in the same period.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecyclingVolumes {
    pub fuel: u64,
    pub pure_electric: u64,
    /// Monthly capacity of one line, used as the threshold for
    /// deciding how the two side lines split the vehicle types.
    pub single_line_cap: u64,
}

impl RecyclingVolumes {
    pub fn new(fuel: u64, pure_electric: u64, single_line_cap: u64) -> Self {
        Self {
            fuel,
            pure_electric,
            single_line_cap,
        }
    }

    pub fn total(&self) -> u64 {
        self.fuel + self.pure_electric
    }
}

/// How far a monthly adjustment had to reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// The side-line assignment was kept; only the takt time and the
    /// task balance move.
    Replan,
    /// The side lines themselves were (re)assigned.
    Reassign,
}

impl Stage {
    /// Numeric label used in reports: 1 for a takt-only replan, 2 for
    /// a reassignment.
    pub fn as_u8(self) -> u8 {
        match self {
            Stage::Replan => 1,
            Stage::Reassign => 2,
        }
    }
}

/// Vehicle types assigned to the two side lines. The middle line is
/// always mixed and is not recorded here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineAssignment {
    pub side1: VehicleModel,
    pub side3: VehicleModel,
    /// Whether this assignment changed anything beyond the takt.
    pub stage: Stage,
}

impl LineAssignment {
    pub fn sides(&self) -> (VehicleModel, VehicleModel) {
        (self.side1, self.side3)
    }
}

/// Cycle length that lets `units` finish within `available_s` seconds,
/// rounded down to whole seconds.
pub fn takt_time(available_s: u64, units: u64) -> Result<u64, DynamicsError> {
    if units == 0 {
        return Err(DynamicsError::ZeroDemand);
    }
    Ok(available_s / units)
}

/// Assign vehicle types to the two side lines from monthly volumes.
///
/// If the smaller type fits on one line (at most the single-line
/// capacity), its units ride along the mixed middle line and both side
/// lines take the larger type; equal volumes split one type per side.
/// If both types exceed one line's capacity but stay under two lines'
/// worth, each side line takes one type. If both types need two or
/// more lines the layout cannot absorb the month and the call fails.
///
/// The returned stage is [`Stage::Replan`] when the sides match
/// `current`, otherwise [`Stage::Reassign`].
pub fn assign_line_models(
    volumes: &RecyclingVolumes,
    current: Option<&LineAssignment>,
) -> Result<LineAssignment, DynamicsError> {
    let cap = volumes.single_line_cap;
    let smaller = volumes.fuel.min(volumes.pure_electric);
    if smaller >= cap.saturating_mul(2) {
        return Err(DynamicsError::Overload {
            fuel: volumes.fuel,
            pure_electric: volumes.pure_electric,
            single_line_cap: cap,
        });
    }
    let sides = if smaller > cap || volumes.fuel == volumes.pure_electric {
        (VehicleModel::Fuel, VehicleModel::PureElectric)
    } else if volumes.fuel < volumes.pure_electric {
        (VehicleModel::PureElectric, VehicleModel::PureElectric)
    } else {
        (VehicleModel::Fuel, VehicleModel::Fuel)
    };
    let stage = match current {
        Some(prev) if prev.sides() == sides => Stage::Replan,
        _ => Stage::Reassign,
    };
    Ok(LineAssignment {
        side1: sides.0,
        side3: sides.1,
        stage,
    })
}

/// True when every requested vehicle type can run on at least one of
/// the given line models. A mixed line covers every type.
pub fn models_cover(line_models: &[VehicleModel], types: &[VehicleModel]) -> bool {
    types.iter().all(|t| {
        line_models
            .iter()
            .any(|m| m == t || *m == VehicleModel::Mixed)
    })
}

/// True when the two side lines plus the mixed middle line cover all
/// requested vehicle types.
pub fn vehicle_type_cover(assignment: &LineAssignment, types: &[VehicleModel]) -> bool {
    models_cover(
        &[assignment.side1, VehicleModel::Mixed, assignment.side3],
        types,
    )
}

/// True when both per-type forecasts stay within 25% (inclusive) of
/// the current volumes. Evaluated exactly in integers: a change of
/// `delta` against a base of `cur` passes iff `4 * delta <= cur`.
pub fn within_fluctuation_band(current: &RecyclingVolumes, forecast: &RecyclingVolumes) -> bool {
    let ok = |cur: u64, fc: u64| 4 * cur.abs_diff(fc) <= cur;
    ok(current.fuel, forecast.fuel) && ok(current.pure_electric, forecast.pure_electric)
}

/// Result of an incremental monthly replan.
#[derive(Clone, Debug)]
pub struct ReplanOutcome {
    /// Takt derived from the forecast, in whole seconds.
    pub takt_s: u64,
    pub archive: ParetoArchive,
    /// Visit ledger after the run, for warm-starting the next month.
    pub ledger: VisitLedger,
}

/// Re-derive the takt from a demand forecast and re-balance the line
/// without touching the side assignment.
///
/// Fails with [`DynamicsError::FluctuationTooLarge`] when either
/// vehicle type drifts more than 25% from `current`. Otherwise the
/// forecast total is spread evenly over the three lines, the takt is
/// `available_s` divided by one line's share (rounded down), and the
/// balancing solver runs on the re-validated instance, warm-started
/// from `ledger` when one is passed in.
pub fn stage1_replan(
    inst: &Instance,
    current: &RecyclingVolumes,
    forecast: &RecyclingVolumes,
    available_s: u64,
    cfg: &EvoConfig,
    ledger: Option<VisitLedger>,
) -> Result<ReplanOutcome, DynamicsError> {
    if !within_fluctuation_band(current, forecast) {
        return Err(DynamicsError::FluctuationTooLarge {
            current_fuel: current.fuel,
            forecast_fuel: forecast.fuel,
            current_pev: current.pure_electric,
            forecast_pev: forecast.pure_electric,
        });
    }
    let units_per_line = forecast.total() / 3;
    let takt_s = takt_time(available_s, units_per_line)?;
    let inst = inst.with_takt(takt_s as f64)?;
    let ledger = ledger.unwrap_or_else(|| VisitLedger::new(&inst));
    let mut solver = Insga3::with_ledger(&inst, cfg, ledger)?;
    solver.run();
    Ok(ReplanOutcome {
        takt_s,
        archive: solver.archive().clone(),
        ledger: solver.into_ledger(),
    })
}
