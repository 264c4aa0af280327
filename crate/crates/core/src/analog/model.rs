// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dsl::GateKind;
use crate::netlist::{AliasMap, Netlist};

use super::{AnalogError, CalibrationPoint, CalibrationReadings, DriveState};

/// Minimum spread of drive voltages for a slope to be fitted.
const MIN_DRIVE_SPREAD: f64 = 0.1;
const MAX_SLOPE: f64 = 1.2;

/// Transfer model of one gate kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateModel {
    /// Slope of the high output against drive voltage.
    pub alpha: f64,
    pub beta: f64,
    /// Output level when the gate is logically low.
    pub v_low: f64,
}

impl GateModel {
    pub fn high(&self, drive: f64) -> f64 {
        self.alpha * drive + self.beta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateModelSet {
    pub models: BTreeMap<GateKind, GateModel>,
    /// Lowest input voltage a gate recognises as logic 1.
    pub v_in_hi: f64,
    pub v_cc: f64,
}

impl GateModelSet {
    pub const DEFAULT_V_IN_HI: f64 = 0.7;
    pub const DEFAULT_V_CC: f64 = 5.0;

    pub fn model(&self, kind: GateKind) -> &GateModel {
        &self.models[&kind]
    }

    /// Models fitted to the shipped bench table on the reference circuit.
    pub fn reference() -> Self {
        let points = CalibrationReadings::table1()
            .to_points(&crate::reference::netlist(), &AliasMap::reference(), Self::DEFAULT_V_IN_HI)
            .expect("reference calibration resolves");
        fit_gate_models(&points).expect("reference calibration fits")
    }

    /// Fits from readings taken on `netlist`.
    pub fn fit(readings: &CalibrationReadings, netlist: &Netlist, aliases: &AliasMap) -> Result<Self, AnalogError> {
        fit_gate_models(&readings.to_points(netlist, aliases, Self::DEFAULT_V_IN_HI)?)
    }

    pub fn check(&self) -> Result<(), AnalogError> {
        for (kind, m) in &self.models {
            let bad = |detail: String| AnalogError::InsufficientData { kind: *kind, detail };
            if !(0.0..self.v_in_hi).contains(&m.v_low) {
                return Err(bad(format!("low level {:.4} V is not below the input threshold", m.v_low)));
            }
            if !(0.0..=MAX_SLOPE).contains(&m.alpha) {
                return Err(bad(format!("slope {:.4} outside [0, {MAX_SLOPE}]", m.alpha)));
            }
        }
        if self.v_in_hi >= self.v_cc {
            return Err(AnalogError::Calibration("input threshold must be below supply".into()));
        }
        Ok(())
    }
}

/// Least-squares fit of each kind's high output against its drive voltage,
/// with the low level taken as the mean of low readings.
pub fn fit_gate_models(points: &[CalibrationPoint]) -> Result<GateModelSet, AnalogError> {
    let mut models = BTreeMap::new();
    for kind in GateKind::ALL {
        let mut highs = Vec::new();
        let mut lows = Vec::new();
        for p in points.iter().filter(|p| p.kind == kind) {
            match p.state {
                DriveState::High { drive } => highs.push((drive, p.volts)),
                DriveState::Low => lows.push(p.volts),
            }
        }
        let missing = |what: &str| AnalogError::InsufficientData { kind, detail: format!("no {what} readings") };
        if highs.is_empty() {
            return Err(missing("high-state"));
        }
        if lows.is_empty() {
            return Err(missing("low-state"));
        }
        let (alpha, beta) = fit_line(&highs);
        let v_low = lows.iter().sum::<f64>() / lows.len() as f64;
        models.insert(kind, GateModel { alpha, beta, v_low });
    }
    let set = GateModelSet { models, v_in_hi: GateModelSet::DEFAULT_V_IN_HI, v_cc: GateModelSet::DEFAULT_V_CC };
    set.check()?;
    Ok(set)
}

fn fit_line(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    if hi - lo < MIN_DRIVE_SPREAD {
        return (0.0, mean_y);
    }
    let sxy: f64 = points.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let alpha = sxy / sxx;
    (alpha, mean_y - alpha * mean_x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn high(kind: GateKind, drive: f64, volts: f64) -> CalibrationPoint {
        CalibrationPoint { kind, state: DriveState::High { drive }, volts }
    }

    fn low(kind: GateKind, volts: f64) -> CalibrationPoint {
        CalibrationPoint { kind, state: DriveState::Low, volts }
    }

    fn filler() -> Vec<CalibrationPoint> {
        vec![
            high(GateKind::And, 5.0, 4.02),
            low(GateKind::And, 0.2),
            high(GateKind::Not, 5.0, 4.88),
            high(GateKind::Not, 5.0, 4.91),
            high(GateKind::Not, 5.0, 4.89),
            low(GateKind::Not, 0.2),
            low(GateKind::Or, 0.12),
        ]
    }

    #[test]
    fn two_point_or_line() {
        let mut pts = filler();
        pts.push(high(GateKind::Or, 4.02, 3.23));
        pts.push(high(GateKind::Or, 5.0, 3.98));
        let m = fit_gate_models(&pts).unwrap();
        let or = m.model(GateKind::Or);
        // slope = 0.75 / 0.98
        assert!((or.alpha - 0.7653).abs() < 1e-3, "{}", or.alpha);
        assert!((or.beta - 0.1535).abs() < 1e-3, "{}", or.beta);
        let not = m.model(GateKind::Not);
        assert_eq!(not.alpha, 0.0);
        assert!((not.beta - 4.8933).abs() < 1e-3);
    }

    #[test]
    fn missing_kind_is_an_error() {
        let pts: Vec<_> = filler().into_iter().filter(|p| p.kind != GateKind::And).collect();
        let err = fit_gate_models(&pts).unwrap_err();
        assert!(matches!(err, AnalogError::InsufficientData { kind: GateKind::And, .. }));
    }

    #[test]
    fn reference_fit_values() {
        let m = GateModelSet::reference();
        let or = m.model(GateKind::Or);
        assert!((or.alpha - 0.77041).abs() < 1e-4, "{or:?}");
        assert!((or.beta - 0.13295).abs() < 1e-4, "{or:?}");
        let and = m.model(GateKind::And);
        assert_eq!(and.alpha, 0.0);
        assert!((and.beta - 4.02).abs() < 1e-9);
        assert!((m.model(GateKind::Not).v_low - 0.19868).abs() < 1e-4);
        assert!((or.v_low - 0.1236).abs() < 1e-9);
    }
}
