// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::netlist::ActiveCircuit;

use super::{propagate, quantize, AnalogError, Fault, GateModelSet, VoltageState, DEFAULT_THRESHOLD};

/// Losses between the bench circuit and the worn garment.
///
/// A closed textile sensor passes only part of the supply to its input net,
/// and the LED indicator loads the output. Both are fixed ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GarmentStage {
    /// Fraction of the supply seen on an input net through a closed sensor.
    pub sensor_transfer: f64,
    /// Output voltage ratio with the LED connected.
    pub led_load: f64,
}

impl Default for GarmentStage {
    fn default() -> Self {
        Self { sensor_transfer: 0.7, led_load: 0.87 }
    }
}

impl GarmentStage {
    /// A lossless stage, equal to the bench setup.
    pub const IDEAL: GarmentStage = GarmentStage { sensor_transfer: 1.0, led_load: 1.0 };

    /// Supply-side voltages for two sensor closure bits.
    pub fn supply_inputs(models: &GateModelSet, a: bool, b: bool) -> (f64, f64) {
        let v = |bit: bool| if bit { models.v_cc } else { 0.0 };
        (v(a), v(b))
    }

    /// Propagates supply-side sensor voltages through the worn circuit.
    pub fn propagate(
        &self,
        circuit: &ActiveCircuit<'_>,
        models: &GateModelSet,
        inputs: (f64, f64),
        faults: &[Fault],
    ) -> Result<VoltageState, AnalogError> {
        let scaled = (inputs.0 * self.sensor_transfer, inputs.1 * self.sensor_transfer);
        let mut state = propagate(circuit, models, scaled, faults)?;
        state.output_volts *= self.led_load;
        state.output_bit = quantize(state.output_volts, DEFAULT_THRESHOLD);
        Ok(state)
    }
}
