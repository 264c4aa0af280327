// SPDX-License-Identifier: Apache-2.0

//! Joint angles to momentary-sensor closures, circuit selection and inputs.
//!
//! Angles are in degrees, positive for flexion and negative for extension.
//! The right (control) arm picks the active circuit; the left (exercise) arm
//! drives logic inputs A and B.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Joint {
    CtrlWrist,
    CtrlElbow,
    ExWrist,
    ExElbow,
    ExFinger,
    ExThumb,
}

/// Anatomical joint type, which sets the range of motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anatomy {
    Elbow,
    Wrist,
    Finger,
    Thumb,
}

impl Joint {
    /// Column order of movement traces.
    pub const ALL: [Joint; 6] =
        [Joint::CtrlWrist, Joint::CtrlElbow, Joint::ExWrist, Joint::ExElbow, Joint::ExFinger, Joint::ExThumb];

    pub fn id(self) -> &'static str {
        match self {
            Joint::CtrlWrist => "ctrl_wrist",
            Joint::CtrlElbow => "ctrl_elbow",
            Joint::ExWrist => "ex_wrist",
            Joint::ExElbow => "ex_elbow",
            Joint::ExFinger => "ex_finger",
            Joint::ExThumb => "ex_thumb",
        }
    }

    pub fn from_id(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|j| j.id() == s)
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn anatomy(self) -> Anatomy {
        match self {
            Joint::CtrlWrist | Joint::ExWrist => Anatomy::Wrist,
            Joint::CtrlElbow | Joint::ExElbow => Anatomy::Elbow,
            Joint::ExFinger => Anatomy::Finger,
            Joint::ExThumb => Anatomy::Thumb,
        }
    }
}

impl fmt::Display for Joint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("no sensor spec for joint '{0}'")]
    MissingSpec(Joint),
    #[error("angle for '{joint}' is not finite")]
    NonFinite { joint: Joint },
    #[error("exercise inputs need circuit1 or circuit2 selected, got {0}")]
    NoCircuit(Selection),
    #[error("sensor '{joint}' threshold {theta_on} is outside (0, {limit}]")]
    BadThreshold { joint: Joint, theta_on: f64, limit: f64 },
}

/// Joint angles at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPose {
    pub t_ms: u64,
    angles: [f64; 6],
    pub palm_contact: bool,
}

impl JointPose {
    pub fn new(t_ms: u64, angles: [f64; 6], palm_contact: bool) -> Result<Self, KinematicsError> {
        if let Some(j) = Joint::ALL.into_iter().find(|j| !angles[j.index()].is_finite()) {
            return Err(KinematicsError::NonFinite { joint: j });
        }
        Ok(Self { t_ms, angles, palm_contact })
    }

    /// Arms straight down, no contact.
    pub fn rest(t_ms: u64) -> Self {
        Self { t_ms, angles: [0.0; 6], palm_contact: false }
    }

    pub fn angle(&self, joint: Joint) -> f64 {
        self.angles[joint.index()]
    }

    pub fn angles(&self) -> [f64; 6] {
        self.angles
    }

    pub fn with_angle(mut self, joint: Joint, degrees: f64) -> Self {
        self.angles[joint.index()] = degrees;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RomLimit {
    pub flexion: f64,
    /// `None` when no extension limit is known.
    #[serde(default)]
    pub extension: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RomSpec {
    pub limits: BTreeMap<Anatomy, RomLimit>,
}

impl Default for RomSpec {
    fn default() -> Self {
        let limits = [
            (Anatomy::Elbow, RomLimit { flexion: 150.0, extension: None }),
            (Anatomy::Wrist, RomLimit { flexion: 60.0, extension: Some(60.0) }),
            (Anatomy::Finger, RomLimit { flexion: 120.0, extension: Some(120.0) }),
            (Anatomy::Thumb, RomLimit { flexion: 80.0, extension: Some(90.0) }),
        ];
        Self { limits: limits.into_iter().collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Motion {
    Flexion,
    Extension,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RomViolation {
    pub joint: Joint,
    pub motion: Motion,
    pub angle: f64,
    pub limit: f64,
}

/// Joints whose angle exceeds the range of motion. Empty means the pose is ok.
pub fn validate_pose(pose: &JointPose, rom: &RomSpec) -> Vec<RomViolation> {
    let mut out = Vec::new();
    for joint in Joint::ALL {
        let Some(limit) = rom.limits.get(&joint.anatomy()) else { continue };
        let angle = pose.angle(joint);
        if angle > limit.flexion {
            out.push(RomViolation { joint, motion: Motion::Flexion, angle, limit: limit.flexion });
        }
        if let Some(ext) = limit.extension {
            if angle < -ext {
                out.push(RomViolation { joint, motion: Motion::Extension, angle, limit: ext });
            }
        }
    }
    out
}

/// Activation rule of one momentary sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSpec {
    /// Closing angle in degrees.
    pub theta_on: f64,
    /// The sensor opens again below `theta_on - hysteresis`.
    #[serde(default = "SensorSpec::default_hysteresis")]
    pub hysteresis: f64,
}

impl SensorSpec {
    pub const DEFAULT_HYSTERESIS: f64 = 5.0;

    fn default_hysteresis() -> f64 {
        Self::DEFAULT_HYSTERESIS
    }

    pub fn new(theta_on: f64) -> Self {
        Self { theta_on, hysteresis: Self::DEFAULT_HYSTERESIS }
    }

    fn next(&self, angle: f64, was_closed: bool) -> bool {
        if was_closed {
            angle >= self.theta_on - self.hysteresis
        } else {
            angle >= self.theta_on
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SensorSpecs {
    pub specs: BTreeMap<Joint, SensorSpec>,
}

impl Default for SensorSpecs {
    fn default() -> Self {
        let specs = [
            (Joint::CtrlWrist, 55.0),
            (Joint::CtrlElbow, 78.0),
            (Joint::ExWrist, 52.0),
            (Joint::ExElbow, 107.0),
            (Joint::ExFinger, 88.0),
            (Joint::ExThumb, 69.0),
        ];
        Self { specs: specs.into_iter().map(|(j, t)| (j, SensorSpec::new(t))).collect() }
    }
}

impl SensorSpecs {
    pub fn get(&self, joint: Joint) -> Result<&SensorSpec, KinematicsError> {
        self.specs.get(&joint).ok_or(KinematicsError::MissingSpec(joint))
    }

    pub fn with_threshold(mut self, joint: Joint, theta_on: f64) -> Self {
        let hysteresis = self.specs.get(&joint).map_or(SensorSpec::DEFAULT_HYSTERESIS, |s| s.hysteresis);
        self.specs.insert(joint, SensorSpec { theta_on, hysteresis });
        self
    }

    /// Every joint has a spec whose threshold lies within its flexion range.
    pub fn check(&self, rom: &RomSpec) -> Result<(), KinematicsError> {
        for joint in Joint::ALL {
            let spec = self.get(joint)?;
            let limit = rom.limits.get(&joint.anatomy()).map_or(f64::INFINITY, |l| l.flexion);
            if !(spec.theta_on > 0.0 && spec.theta_on <= limit) || spec.hysteresis < 0.0 {
                return Err(KinematicsError::BadThreshold { joint, theta_on: spec.theta_on, limit });
            }
        }
        Ok(())
    }
}

/// Closure state of the six joint sensors and the palm contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct SensorStates {
    closed: [bool; 6],
    pub palm: bool,
}

impl SensorStates {
    pub fn is_closed(&self, joint: Joint) -> bool {
        self.closed[joint.index()]
    }

    pub fn with_closed(mut self, joint: Joint, closed: bool) -> Self {
        self.closed[joint.index()] = closed;
        self
    }
}

pub fn evaluate_sensors(
    pose: &JointPose,
    prev: &SensorStates,
    specs: &SensorSpecs,
) -> Result<SensorStates, KinematicsError> {
    let mut next = SensorStates { closed: [false; 6], palm: pose.palm_contact };
    for joint in Joint::ALL {
        let spec = specs.get(joint)?;
        next.closed[joint.index()] = spec.next(pose.angle(joint), prev.is_closed(joint));
    }
    Ok(next)
}

/// Circuit picked by the control arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    None,
    Circuit1,
    Circuit2,
    InvalidBoth,
}

impl Selection {
    pub fn id(self) -> &'static str {
        match self {
            Selection::None => "none",
            Selection::Circuit1 => "circuit1",
            Selection::Circuit2 => "circuit2",
            Selection::InvalidBoth => "invalid_both",
        }
    }

    pub fn from_id(s: &str) -> Option<Self> {
        [Selection::None, Selection::Circuit1, Selection::Circuit2, Selection::InvalidBoth]
            .into_iter()
            .find(|x| x.id() == s)
    }

    /// Config enabled by this selection.
    pub fn config_id(self) -> Option<&'static str> {
        match self {
            Selection::Circuit1 => Some("circuit1"),
            Selection::Circuit2 => Some("circuit2"),
            _ => None,
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

pub fn derive_control_selection(s: &SensorStates) -> Selection {
    match (s.is_closed(Joint::CtrlWrist), s.is_closed(Joint::CtrlElbow)) {
        (false, false) => Selection::None,
        (true, false) => Selection::Circuit1,
        (false, true) => Selection::Circuit2,
        (true, true) => Selection::InvalidBoth,
    }
}

/// Logic inputs (A, B) for the selected circuit.
pub fn derive_exercise_inputs(s: &SensorStates, sel: Selection) -> Result<(bool, bool), KinematicsError> {
    match sel {
        Selection::Circuit1 => Ok((s.is_closed(Joint::ExWrist), s.is_closed(Joint::ExElbow))),
        Selection::Circuit2 => Ok((s.is_closed(Joint::ExThumb) || s.palm, s.is_closed(Joint::ExFinger))),
        other => Err(KinematicsError::NoCircuit(other)),
    }
}
