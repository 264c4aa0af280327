// SPDX-License-Identifier: Apache-2.0

//! Scripted movement and accelerometer traces for a given exercise program.

use std::f64::consts::PI;

use crate::kinematics::{Joint, JointPose, RomSpec, Selection, SensorSpecs};
use crate::session::{ExerciseBlock, ExerciseProgram, ExerciseSensor};

use super::{AccelSample, AccelTrace, MovementTrace};

/// Timing of one flexion cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleShape {
    pub rise_ms: u64,
    pub hold_ms: u64,
    pub fall_ms: u64,
    pub rest_ms: u64,
}

impl CycleShape {
    pub fn period_ms(&self) -> u64 {
        self.rise_ms + self.hold_ms + self.fall_ms + self.rest_ms
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub sample_ms: u64,
    /// Rest before the first and after the last movement.
    pub settle_ms: u64,
    /// Duration of a control-arm raise or release, followed by an equal hold.
    pub ramp_ms: u64,
    pub cycle: CycleShape,
    /// Degrees past the closing threshold reached at the top of each cycle.
    pub overshoot_deg: f64,
    /// Degrees past the closing threshold the control arm is held at.
    pub control_margin_deg: f64,
    /// Peak of the half-sine burst on the y axis during each rise, in g.
    pub burst_g: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            sample_ms: 10,
            settle_ms: 1000,
            ramp_ms: 500,
            cycle: CycleShape { rise_ms: 600, hold_ms: 400, fall_ms: 600, rest_ms: 400 },
            overshoot_deg: 8.0,
            control_margin_deg: 10.0,
            burst_g: 0.5,
        }
    }
}

/// Movement trace and the accelerometer trace recorded alongside it.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedTraces {
    pub movement: MovementTrace,
    pub accel: AccelTrace,
}

/// Four decimals keep fixture files short and still parse back exactly.
fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4 + 0.0
}

struct Builder<'a> {
    cfg: &'a SynthConfig,
    t: u64,
    ctrl: [f64; 2],
    movement: Vec<JointPose>,
    accel: Vec<AccelSample>,
}

const CTRL: [Joint; 2] = [Joint::CtrlWrist, Joint::CtrlElbow];

impl<'a> Builder<'a> {
    fn new(cfg: &'a SynthConfig) -> Self {
        Self { cfg, t: 0, ctrl: [0.0; 2], movement: Vec::new(), accel: Vec::new() }
    }

    fn steps(&self, ms: u64) -> u64 {
        ms / self.cfg.sample_ms
    }

    fn push(&mut self, exercise: &[(Joint, f64)], palm: bool, ay: f64) {
        let mut pose = JointPose::rest(self.t);
        for (j, a) in CTRL.iter().zip(self.ctrl) {
            pose = pose.with_angle(*j, round4(a));
        }
        for (j, a) in exercise {
            pose = pose.with_angle(*j, round4(*a));
        }
        pose.palm_contact = palm;
        self.movement.push(pose);
        self.accel.push(AccelSample { t_ms: self.t, a: [0.0, round4(ay), 1.0] });
        self.t += self.cfg.sample_ms;
    }

    fn rest(&mut self, ms: u64) {
        for _ in 0..self.steps(ms) {
            self.push(&[], false, 0.0);
        }
    }

    fn ramp_control(&mut self, k: usize, to: f64) {
        let from = self.ctrl[k];
        let n = self.steps(self.cfg.ramp_ms);
        for i in 1..=n {
            self.ctrl[k] = from + (to - from) * (1.0 - (PI * i as f64 / n as f64).cos()) / 2.0;
            self.push(&[], false, 0.0);
        }
        self.ctrl[k] = to;
        self.rest(self.cfg.ramp_ms);
    }

    /// One cycle: raised-cosine rise, hold, fall, rest.
    fn cycle(&mut self, joints: &[(Joint, f64)], palm: bool) {
        let c = self.cfg.cycle;
        let segments = [(c.rise_ms, 0), (c.hold_ms, 1), (c.fall_ms, 2), (c.rest_ms, 3)];
        for (ms, seg) in segments {
            let n = self.steps(ms);
            for i in 0..n {
                let u = i as f64 / n as f64;
                let (level, ay) = match seg {
                    0 => ((1.0 - (PI * u).cos()) / 2.0, self.cfg.burst_g * (PI * u).sin()),
                    1 => (1.0, 0.0),
                    2 => ((1.0 + (PI * u).cos()) / 2.0, 0.0),
                    _ => (0.0, 0.0),
                };
                let angles: Vec<(Joint, f64)> = joints.iter().map(|(j, peak)| (*j, peak * level)).collect();
                self.push(&angles, palm && level >= 0.5, ay);
            }
        }
    }
}

fn threshold(block: &ExerciseBlock, specs: &SensorSpecs, joint: Joint) -> f64 {
    block.thresholds.get(&joint).copied().or_else(|| specs.specs.get(&joint).map(|s| s.theta_on)).unwrap_or(0.0)
}

fn flexion_limit(rom: &RomSpec, joint: Joint) -> f64 {
    rom.limits.get(&joint.anatomy()).map_or(f64::INFINITY, |l| l.flexion)
}

/// Traces that walk through `program`: a calibration rest, the control arm
/// raised for each circuit, `reps` cycles of the block's driving sensors,
/// and a final release. Angles stay inside `rom`.
pub fn program_traces(
    program: &ExerciseProgram,
    specs: &SensorSpecs,
    rom: &RomSpec,
    cfg: &SynthConfig,
) -> PairedTraces {
    let mut b = Builder::new(cfg);
    b.rest(cfg.settle_ms);
    let mut held: Option<usize> = None;
    for block in &program.blocks {
        let k = if block.selection == Selection::Circuit1 { 0 } else { 1 };
        if held != Some(k) {
            if let Some(prev) = held {
                b.ramp_control(prev, 0.0);
            }
            let theta = threshold(block, specs, CTRL[k]);
            let hold = (theta + cfg.control_margin_deg).min(flexion_limit(rom, CTRL[k]) - 1.0);
            b.ramp_control(k, hold);
            held = Some(k);
        }
        let mut joints = Vec::new();
        let mut palm = false;
        for driver in block.drivers() {
            match driver {
                ExerciseSensor::Palm => palm = true,
                ExerciseSensor::Joint(j) => {
                    let peak = (threshold(block, specs, j) + cfg.overshoot_deg).min(flexion_limit(rom, j));
                    joints.push((j, peak));
                }
            }
        }
        for _ in 0..block.reps {
            b.cycle(&joints, palm);
        }
    }
    if let Some(prev) = held {
        b.ramp_control(prev, 0.0);
    }
    b.rest(cfg.settle_ms);
    PairedTraces { movement: MovementTrace { samples: b.movement }, accel: AccelTrace { samples: b.accel } }
}

/// `n` accelerometer bursts, one per cycle, with rest before and after.
pub fn accel_bursts(n: usize, cfg: &SynthConfig) -> AccelTrace {
    let mut b = Builder::new(cfg);
    b.rest(cfg.settle_ms);
    for _ in 0..n {
        b.cycle(&[], false);
    }
    b.rest(cfg.settle_ms);
    AccelTrace { samples: b.accel }
}

/// Single wrist-flexion block with `reps` cycles.
pub fn wrist_program(reps: u32) -> ExerciseProgram {
    let mut block = ExerciseBlock::new("wrist_flexion", Selection::Circuit1, (true, false));
    block.reps = reps;
    ExerciseProgram { name: format!("wrist{reps}"), blocks: vec![block] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::validate_pose;

    fn excursions(trace: &MovementTrace, joint: Joint, level: f64) -> usize {
        let above: Vec<bool> = trace.samples.iter().map(|p| p.angle(joint) > level).collect();
        above.windows(2).filter(|w| !w[0] && w[1]).count()
    }

    #[test]
    fn wrist_program_has_ten_excursions() {
        let cfg = SynthConfig::default();
        let t = program_traces(&wrist_program(10), &SensorSpecs::default(), &RomSpec::default(), &cfg);
        assert_eq!(excursions(&t.movement, Joint::ExWrist, 52.0), 10);
        assert_eq!(excursions(&t.movement, Joint::CtrlWrist, 55.0), 1);
        assert_eq!(t.movement.samples.len(), t.accel.samples.len());
        let steps: Vec<u64> = t.movement.samples.windows(2).map(|w| w[1].t_ms - w[0].t_ms).collect();
        assert!(steps.iter().all(|d| *d == 10));
    }

    #[test]
    fn four_block_program_stays_in_range() {
        let rom = RomSpec::default();
        let t = program_traces(&ExerciseProgram::four_block(), &SensorSpecs::default(), &rom, &SynthConfig::default());
        assert!(t.movement.samples.iter().all(|p| validate_pose(p, &rom).is_empty()));
        for (joint, level) in
            [(Joint::ExWrist, 52.0), (Joint::ExElbow, 107.0), (Joint::ExFinger, 88.0), (Joint::ExThumb, 69.0)]
        {
            assert_eq!(excursions(&t.movement, joint, level), 10, "{joint}");
        }
        // Control arms are never raised together.
        assert!(t
            .movement
            .samples
            .iter()
            .all(|p| p.angle(Joint::CtrlWrist) == 0.0 || p.angle(Joint::CtrlElbow) == 0.0));
    }

    #[test]
    fn bursts_sample_count() {
        let cfg = SynthConfig::default();
        let a = accel_bursts(10, &cfg);
        assert_eq!(a.samples.len() as u64, (2 * cfg.settle_ms + 10 * cfg.cycle.period_ms()) / cfg.sample_ms);
    }
}
