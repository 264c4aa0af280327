// SPDX-License-Identifier: Apache-2.0

//! Movement trace to scored session: sensors, selection, analog output and
//! the session state machine, sample by sample.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::analog::{AnalogError, Fault, FaultSubject, GarmentStage, GateModelSet};
use crate::defaults::Defaults;
use crate::kinematics::{
    derive_control_selection, derive_exercise_inputs, evaluate_sensors, validate_pose, KinematicsError, RomSpec,
    Selection, SensorSpecs, SensorStates,
};
use crate::netlist::{ActiveCircuit, AliasMap, Netlist, NetlistError};
use crate::session::{finish, ExerciseProgram, Observation, PainAnnotations, SessionError, SessionState};
use crate::trace::{MovementTrace, RepAnalysis, SessionMeta, SessionReport, REPORT_SCHEMA_ID};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Analog(#[from] AnalogError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("fault subject '{0}' does not exist in the circuit")]
    UnknownFaultSubject(String),
}

/// A circuit ready to be driven by movement traces.
pub struct Simulator<'n> {
    netlist: &'n Netlist,
    circuits: BTreeMap<Selection, ActiveCircuit<'n>>,
    pub models: GateModelSet,
    pub garment: GarmentStage,
    pub specs: SensorSpecs,
    pub rom: RomSpec,
    pub threshold: f64,
    pub aliases: AliasMap,
    faults: Vec<Fault>,
}

impl<'n> Simulator<'n> {
    /// Activates both circuits of `netlist`.
    pub fn new(netlist: &'n Netlist, defaults: &Defaults, models: GateModelSet) -> Result<Self, PipelineError> {
        let mut circuits = BTreeMap::new();
        for sel in [Selection::Circuit1, Selection::Circuit2] {
            let id = sel.config_id().expect("circuit selections name a config");
            circuits.insert(sel, netlist.activate_config(id)?);
        }
        Ok(Self {
            netlist,
            circuits,
            models,
            garment: defaults.garment,
            specs: defaults.sensors.clone(),
            rom: defaults.rom.clone(),
            threshold: defaults.threshold,
            aliases: defaults.aliases.clone(),
            faults: Vec::new(),
        })
    }

    /// Injects faults for every later run. Each subject must exist somewhere in
    /// the netlist; it only takes effect while its circuit is selected.
    pub fn with_faults(mut self, faults: Vec<Fault>) -> Result<Self, PipelineError> {
        for f in &faults {
            let known = match &f.subject {
                FaultSubject::Net(n) => self.netlist.nets.contains_key(n),
                FaultSubject::GateOutput(g) => self.netlist.gates.contains_key(g),
            };
            if !known {
                return Err(PipelineError::UnknownFaultSubject(f.subject.to_string()));
            }
        }
        self.faults = faults;
        Ok(self)
    }

    pub fn faults(&self) -> &[Fault] {
        &self.faults
    }

    pub fn circuit(&self, sel: Selection) -> Option<&ActiveCircuit<'n>> {
        self.circuits.get(&sel)
    }

    /// Output volts for a selection and input pattern. No circuit, no output.
    pub fn output_volts(&self, sel: Selection, inputs: (bool, bool)) -> Result<f64, PipelineError> {
        let Some(c) = self.circuits.get(&sel) else { return Ok(0.0) };
        let active: Vec<Fault> = self.faults.iter().filter(|f| f.applies_to(c)).cloned().collect();
        let supply = GarmentStage::supply_inputs(&self.models, inputs.0, inputs.1);
        Ok(self.garment.propagate(c, &self.models, supply, &active)?.output_volts)
    }

    /// Sensor settings in force for the block the session is on.
    fn specs_for(&self, program: &ExerciseProgram, block: Option<usize>) -> SensorSpecs {
        let mut specs = self.specs.clone();
        if let Some(b) = block.and_then(|i| program.blocks.get(i)) {
            for (joint, theta) in &b.thresholds {
                specs = specs.with_threshold(*joint, *theta);
            }
        }
        specs
    }

    /// Runs `program` over `trace`. A trace that ends before the program
    /// finishes aborts the session; samples after completion are ignored.
    pub fn run(&self, program: &ExerciseProgram, trace: &MovementTrace) -> Result<SessionState, PipelineError> {
        let mut state = SessionState::new(program.clone(), self.threshold)?;
        let mut sensors = SensorStates::default();
        let mut cached: Option<(Option<usize>, SensorSpecs)> = None;
        for pose in &trace.samples {
            if state.phase.is_final() {
                break;
            }
            let block = state.current_block();
            if cached.as_ref().map(|c| c.0) != Some(block) {
                cached = Some((block, self.specs_for(program, block)));
            }
            let specs = &cached.as_ref().expect("set above").1;
            sensors = evaluate_sensors(pose, &sensors, specs)?;
            let selection = derive_control_selection(&sensors);
            let (inputs, clusters) = match self.circuits.get(&selection) {
                Some(c) => {
                    (derive_exercise_inputs(&sensors, selection)?, c.config().clusters.iter().copied().collect())
                }
                None => ((false, false), Vec::new()),
            };
            let obs = Observation {
                t_ms: pose.t_ms,
                selection,
                clusters,
                inputs,
                output_volts: self.output_volts(selection, inputs)?,
                rom_violations: validate_pose(pose, &self.rom),
            };
            state.step(&obs)?;
        }
        state.abort();
        Ok(state)
    }

    /// Report for a finished run.
    pub fn report(
        &self,
        state: &SessionState,
        trace: &MovementTrace,
        pain: Option<&PainAnnotations>,
        accel: Option<RepAnalysis>,
    ) -> Result<SessionReport, PipelineError> {
        let fm = finish(state, pain)?;
        Ok(SessionReport {
            schema: REPORT_SCHEMA_ID,
            session: SessionMeta {
                circuit: self.netlist.name.clone(),
                program: fm.program,
                phase: fm.phase,
                threshold: fm.threshold,
                samples: trace.samples.len(),
                duration_ms: trace.duration_ms(),
                garment: self.garment,
            },
            exercises: fm.exercises,
            events: state.events.clone(),
            voltage_log: state.voltage_log.clone(),
            faults: self.faults.clone(),
            gate_aliases: self.aliases.clone(),
            accel,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::JointPose;
    use crate::reference;
    use crate::session::{BlockStatus, EventKind};
    use crate::trace::synth::{program_traces, wrist_program, SynthConfig};

    fn sim(n: &Netlist) -> Simulator<'_> {
        Simulator::new(n, &Defaults::default(), GateModelSet::reference()).unwrap()
    }

    fn run(program: &ExerciseProgram, faults: Vec<Fault>) -> SessionState {
        let n = reference::netlist();
        let s = sim(&n).with_faults(faults).unwrap();
        let t = program_traces(program, &s.specs, &s.rom, &SynthConfig::default());
        s.run(program, &t.movement).unwrap()
    }

    #[test]
    fn no_selection_means_no_output() {
        let n = reference::netlist();
        let s = sim(&n);
        for inputs in [(false, false), (true, false), (false, true), (true, true)] {
            assert_eq!(s.output_volts(Selection::None, inputs).unwrap(), 0.0);
            assert_eq!(s.output_volts(Selection::InvalidBoth, inputs).unwrap(), 0.0);
        }
    }

    #[test]
    fn four_block_program_completes() {
        let st = run(&ExerciseProgram::four_block(), vec![]);
        assert_eq!(st.phase.name(), "Complete");
        for b in &st.blocks {
            assert_eq!((b.status, b.reps.len()), (BlockStatus::Complete, 10));
        }
        assert!(!st.events.iter().any(|e| matches!(e.kind, EventKind::RomViolation { .. })));
    }

    #[test]
    fn faulted_finger_block_scores_one() {
        let f: Fault = "degraded:net_B_c2:0.79".parse().unwrap();
        let st = run(&ExerciseProgram::four_block(), vec![f]);
        let r = finish(&st, None).unwrap();
        let finger = r.exercise("finger_flexion").unwrap();
        assert_eq!(finger.motion_score, 1);
        assert!((finger.voltage.unwrap().min - 1.97).abs() < 0.05);
        assert_eq!(r.exercise("wrist_flexion").unwrap().motion_score, 2);
    }

    #[test]
    fn unknown_fault_subject() {
        let n = reference::netlist();
        let err = sim(&n).with_faults(vec!["open:nowhere".parse().unwrap()]).err().unwrap();
        assert!(matches!(err, PipelineError::UnknownFaultSubject(_)));
    }

    #[test]
    fn short_trace_aborts() {
        let n = reference::netlist();
        let s = sim(&n);
        let trace = MovementTrace { samples: vec![JointPose::rest(0), JointPose::rest(10)] };
        let st = s.run(&wrist_program(10), &trace).unwrap();
        assert_eq!(st.phase.name(), "Aborted");
        assert!(finish(&st, None).unwrap().exercises.is_empty());
    }
}
