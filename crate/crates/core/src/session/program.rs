// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::kinematics::{Joint, Selection};

use super::SessionError;

pub const DEFAULT_REPS: u32 = 10;
pub const DEFAULT_WINDOW_S: (f64, f64) = (100.0, 150.0);

/// Exercise-arm sensor that carries a block's input pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExerciseSensor {
    Joint(Joint),
    Palm,
}

impl fmt::Display for ExerciseSensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExerciseSensor::Joint(j) => f.write_str(j.id()),
            ExerciseSensor::Palm => f.write_str("palm"),
        }
    }
}

impl FromStr for ExerciseSensor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "palm" => Ok(ExerciseSensor::Palm),
            _ => Joint::from_id(s).map(ExerciseSensor::Joint).ok_or_else(|| format!("unknown sensor '{s}'")),
        }
    }
}

impl Serialize for ExerciseSensor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExerciseSensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One exercise set within a program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExerciseBlock {
    pub exercise: String,
    pub selection: Selection,
    /// Input pattern (A, B) that the exercise produces.
    #[serde(with = "bit_pair")]
    pub target: (bool, bool),
    /// Sensor moved to produce input A on circuit2 when both thumb and palm
    /// could; defaults to the thumb.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensor: Option<ExerciseSensor>,
    #[serde(default = "default_reps")]
    pub reps: u32,
    #[serde(default = "default_window")]
    pub window_s: (f64, f64),
    /// Sensor threshold overrides (degrees) while this block runs.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub thresholds: BTreeMap<Joint, f64>,
}

fn default_reps() -> u32 {
    DEFAULT_REPS
}

fn default_window() -> (f64, f64) {
    DEFAULT_WINDOW_S
}

mod bit_pair {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &(bool, bool), s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([v.0 as u8, v.1 as u8])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(bool, bool), D::Error> {
        let [a, b] = <[u8; 2]>::deserialize(d)?;
        if a > 1 || b > 1 {
            return Err(serde::de::Error::custom("target bits must be 0 or 1"));
        }
        Ok((a == 1, b == 1))
    }
}

impl ExerciseBlock {
    pub fn new(exercise: &str, selection: Selection, target: (bool, bool)) -> Self {
        Self {
            exercise: exercise.to_string(),
            selection,
            target,
            sensor: None,
            reps: DEFAULT_REPS,
            window_s: DEFAULT_WINDOW_S,
            thresholds: BTreeMap::new(),
        }
    }

    /// Sensors that must close to produce the target pattern.
    pub fn drivers(&self) -> Vec<ExerciseSensor> {
        let (a_sensor, b_sensor) = match self.selection {
            Selection::Circuit1 => (ExerciseSensor::Joint(Joint::ExWrist), ExerciseSensor::Joint(Joint::ExElbow)),
            _ => (self.sensor.unwrap_or(ExerciseSensor::Joint(Joint::ExThumb)), ExerciseSensor::Joint(Joint::ExFinger)),
        };
        let mut out = Vec::new();
        if self.target.0 {
            out.push(a_sensor);
        }
        if self.target.1 {
            out.push(b_sensor);
        }
        out
    }

    fn check(&self, index: usize) -> Result<(), SessionError> {
        let bad = |msg: String| Err(SessionError::InvalidProgram(format!("block {index} ({}): {msg}", self.exercise)));
        if self.selection.config_id().is_none() {
            return bad(format!("selection must be circuit1 or circuit2, not {}", self.selection));
        }
        if self.target == (false, false) {
            return bad("target pattern (0,0) cannot light the LED".into());
        }
        if self.reps == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if !(self.window_s.0 >= 0.0 && self.window_s.0 < self.window_s.1) {
            return bad(format!("window {:?} must satisfy 0 <= start < end", self.window_s));
        }
        let expected = match self.exercise.as_str() {
            "wrist_flexion" => Some((Selection::Circuit1, (true, false))),
            "elbow_flexion" => Some((Selection::Circuit1, (false, true))),
            "thumb_flexion" => Some((Selection::Circuit2, (true, false))),
            "finger_flexion" => Some((Selection::Circuit2, (false, true))),
            _ => None,
        };
        if let Some((sel, target)) = expected {
            if sel != self.selection || target != self.target {
                return bad(format!("exercise runs on {sel} with input ({}, {})", target.0 as u8, target.1 as u8));
            }
        }
        match self.sensor {
            Some(ExerciseSensor::Palm | ExerciseSensor::Joint(Joint::ExThumb))
                if self.selection == Selection::Circuit2 => {}
            Some(s) => return bad(format!("sensor '{s}' cannot select input A here")),
            None => {}
        }
        if let Some((j, t)) = self.thresholds.iter().find(|(_, t)| !(**t > 0.0 && t.is_finite())) {
            return bad(format!("threshold {t} for '{j}' must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExerciseProgram {
    pub name: String,
    pub blocks: Vec<ExerciseBlock>,
}

impl ExerciseProgram {
    pub fn new(name: &str, blocks: Vec<ExerciseBlock>) -> Result<Self, SessionError> {
        let p = Self { name: name.to_string(), blocks };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<(), SessionError> {
        if self.blocks.is_empty() {
            return Err(SessionError::EmptyProgram);
        }
        self.blocks.iter().enumerate().try_for_each(|(i, b)| b.check(i))
    }

    /// Wrist and elbow flexion on circuit1, then finger and thumb flexion on
    /// circuit2, ten repetitions each.
    pub fn four_block() -> Self {
        Self {
            name: "paper_s4".into(),
            blocks: vec![
                ExerciseBlock::new("wrist_flexion", Selection::Circuit1, (true, false)),
                ExerciseBlock::new("elbow_flexion", Selection::Circuit1, (false, true)),
                ExerciseBlock::new("finger_flexion", Selection::Circuit2, (false, true)),
                ExerciseBlock::new("thumb_flexion", Selection::Circuit2, (true, false)),
            ],
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, SessionError> {
        let p: Self = toml::from_str(text).map_err(|e| SessionError::InvalidProgram(e.to_string()))?;
        p.check()?;
        Ok(p)
    }

    /// A built-in program or task scenario by name.
    pub fn preset(name: &str) -> Result<Self, SessionError> {
        match name {
            "paper_s4" => Ok(Self::four_block()),
            _ => load_task_scenario(name),
        }
    }
}

/// Control-arm posture a task needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlRequirement {
    pub joint: Joint,
    pub min_deg: f64,
    pub max_deg: Option<f64>,
}

/// An everyday task mapped onto one exercise block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskScenario {
    pub name: &'static str,
    pub control: ControlRequirement,
    pub block: ExerciseBlock,
    /// Exercise-arm angles expected while performing the task.
    pub expected_deg: Option<(f64, f64)>,
}

pub const TASK_NAMES: [&str; 4] = ["lift_bag", "lift_bottle", "hold_towel", "lift_can"];

impl TaskScenario {
    pub fn named(name: &str) -> Result<Self, SessionError> {
        let elbow_band = ControlRequirement { joint: Joint::CtrlElbow, min_deg: 78.0, max_deg: Some(98.0) };
        let wrist = ControlRequirement { joint: Joint::CtrlWrist, min_deg: 55.0, max_deg: None };
        let task = match name {
            "lift_bag" => TaskScenario {
                name: "lift_bag",
                control: elbow_band,
                block: ExerciseBlock::new("lift_bag", Selection::Circuit2, (false, true)),
                expected_deg: None,
            },
            "lift_bottle" => TaskScenario {
                name: "lift_bottle",
                control: elbow_band,
                block: ExerciseBlock {
                    sensor: Some(ExerciseSensor::Palm),
                    ..ExerciseBlock::new("lift_bottle", Selection::Circuit2, (true, false))
                },
                expected_deg: None,
            },
            "hold_towel" => TaskScenario {
                name: "hold_towel",
                control: wrist,
                block: ExerciseBlock {
                    thresholds: [(Joint::ExWrist, 49.0)].into_iter().collect(),
                    ..ExerciseBlock::new("hold_towel", Selection::Circuit1, (true, false))
                },
                expected_deg: Some((49.0, 58.0)),
            },
            "lift_can" => TaskScenario {
                name: "lift_can",
                control: wrist,
                block: ExerciseBlock {
                    thresholds: [(Joint::ExElbow, 88.0)].into_iter().collect(),
                    ..ExerciseBlock::new("lift_can", Selection::Circuit1, (false, true))
                },
                expected_deg: Some((88.0, 88.0)),
            },
            other => return Err(SessionError::UnknownTask(other.to_string())),
        };
        Ok(task)
    }

    pub fn program(&self) -> ExerciseProgram {
        let mut block = self.block.clone();
        block.thresholds.entry(self.control.joint).or_insert(self.control.min_deg);
        ExerciseProgram { name: self.name.to_string(), blocks: vec![block] }
    }
}

pub fn load_task_scenario(name: &str) -> Result<ExerciseProgram, SessionError> {
    Ok(TaskScenario::named(name)?.program())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_block_program_is_valid() {
        let p = ExerciseProgram::four_block();
        p.check().unwrap();
        assert_eq!(p.blocks.len(), 4);
        assert!(p.blocks.iter().all(|b| b.reps == 10));
    }

    #[test]
    fn empty_program_rejected() {
        assert_eq!(ExerciseProgram::new("x", vec![]).unwrap_err(), SessionError::EmptyProgram);
    }

    #[test]
    fn exercise_must_match_circuit() {
        let b = ExerciseBlock::new("wrist_flexion", Selection::Circuit2, (true, false));
        assert!(ExerciseProgram::new("x", vec![b]).is_err());
    }

    #[test]
    fn task_presets() {
        let bag = load_task_scenario("lift_bag").unwrap();
        assert_eq!(bag.blocks[0].selection, Selection::Circuit2);
        assert_eq!(bag.blocks[0].target, (false, true));
        assert_eq!(bag.blocks[0].thresholds[&Joint::CtrlElbow], 78.0);
        let towel = TaskScenario::named("hold_towel").unwrap();
        assert_eq!(towel.control.joint, Joint::CtrlWrist);
        assert_eq!(towel.control.min_deg, 55.0);
        assert_eq!(towel.program().blocks[0].thresholds[&Joint::ExWrist], 49.0);
        let can = load_task_scenario("lift_can").unwrap();
        assert_eq!(can.blocks[0].thresholds[&Joint::ExElbow], 88.0);
        let bottle = load_task_scenario("lift_bottle").unwrap();
        assert_eq!(bottle.blocks[0].drivers(), vec![ExerciseSensor::Palm]);
        assert!(matches!(load_task_scenario("juggle"), Err(SessionError::UnknownTask(_))));
        for t in TASK_NAMES {
            load_task_scenario(t).unwrap().check().unwrap();
        }
    }

    #[test]
    fn toml_round_trip() {
        let p = load_task_scenario("hold_towel").unwrap();
        let text = toml::to_string(&p).unwrap();
        assert_eq!(ExerciseProgram::from_toml(&text).unwrap(), p);
    }

    #[test]
    fn toml_defaults_fill_in() {
        let p = ExerciseProgram::from_toml(
            "name = \"mine\"\n[[blocks]]\nexercise = \"elbow_flexion\"\nselection = \"circuit1\"\ntarget = [0, 1]\nreps = 3\n",
        )
        .unwrap();
        assert_eq!(p.blocks[0].reps, 3);
        assert_eq!(p.blocks[0].window_s, DEFAULT_WINDOW_S);
        assert!(ExerciseProgram::from_toml("name = \"x\"\nblocks = []\n").is_err());
    }
}
