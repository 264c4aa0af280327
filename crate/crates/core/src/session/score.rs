// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::kinematics::Selection;

use super::{Attempt, BlockStatus, Rep, SessionError, SessionState};

/// Operator-assessed pain score for one exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PainScore {
    One,
    Two,
    NotAssessed,
}

impl Serialize for PainScore {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PainScore::One => s.serialize_u8(1),
            PainScore::Two => s.serialize_u8(2),
            PainScore::NotAssessed => s.serialize_str("not_assessed"),
        }
    }
}

/// Pain scores keyed by exercise name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PainAnnotations {
    pub scores: BTreeMap<String, PainScore>,
}

impl PainAnnotations {
    /// Reads `name = 1|2` pairs, either at top level or under a `[pain]` table.
    pub fn from_toml(text: &str) -> Result<Self, SessionError> {
        let value: toml::Table = text.parse().map_err(|e: toml::de::Error| SessionError::Pain(e.to_string()))?;
        let table = match value.get("pain") {
            Some(toml::Value::Table(t)) => t.clone(),
            Some(_) => return Err(SessionError::Pain("'pain' must be a table".into())),
            None => value,
        };
        let mut scores = BTreeMap::new();
        for (name, v) in table {
            let score = match v.as_integer() {
                Some(1) => PainScore::One,
                Some(2) => PainScore::Two,
                _ => return Err(SessionError::Pain(format!("score for '{name}' must be 1 or 2, got {v}"))),
            };
            scores.insert(name, score);
        }
        Ok(Self { scores })
    }

    pub fn get(&self, exercise: &str) -> PainScore {
        self.scores.get(exercise).copied().unwrap_or(PainScore::NotAssessed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VoltageRange {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExerciseScore {
    pub block: usize,
    pub exercise: String,
    pub selection: Selection,
    pub target: [u8; 2],
    pub status: BlockStatus,
    pub target_reps: u32,
    /// Completed LED rise/fall pairs.
    pub rep_count: usize,
    pub attempts: usize,
    pub led_on_fraction: f64,
    /// Range of per-attempt peak output voltages.
    pub voltage: Option<VoltageRange>,
    pub motion_score: u8,
    pub pain_score: PainScore,
    pub window_overrun: bool,
    pub reps: Vec<Rep>,
    pub attempt_log: Vec<Attempt>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FmReport {
    pub program: String,
    pub phase: String,
    pub threshold: f64,
    /// Blocks that were entered, in program order.
    pub exercises: Vec<ExerciseScore>,
}

impl FmReport {
    pub fn exercise(&self, name: &str) -> Option<&ExerciseScore> {
        self.exercises.iter().find(|e| e.exercise == name)
    }

    /// Applies new pain annotations to an existing report.
    pub fn with_pain(mut self, pain: &PainAnnotations) -> Self {
        for e in &mut self.exercises {
            e.pain_score = pain.get(&e.exercise);
        }
        self
    }
}

/// Minimum motion scores, written `all=2` or `wrist_flexion=2,finger_flexion=1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScoreExpectation {
    pub all: Option<u8>,
    pub by_exercise: BTreeMap<String, u8>,
}

impl std::str::FromStr for ScoreExpectation {
    type Err = SessionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| SessionError::InvalidExpectation(msg);
        let mut out = ScoreExpectation::default();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (name, score) = item.split_once('=').ok_or_else(|| bad(format!("'{item}' is not name=score")))?;
            let score = match score.trim() {
                "0" => 0,
                "1" => 1,
                "2" => 2,
                other => return Err(bad(format!("score '{other}' must be 0, 1 or 2"))),
            };
            match name.trim() {
                "all" => out.all = Some(score),
                n => {
                    out.by_exercise.insert(n.to_string(), score);
                }
            }
        }
        if out.all.is_none() && out.by_exercise.is_empty() {
            return Err(bad("no expectations given".into()));
        }
        Ok(out)
    }
}

impl ScoreExpectation {
    /// Exercises scoring below expectation, as readable messages.
    /// An exercise named explicitly but absent from `scores` also falls short.
    pub fn shortfalls(&self, scores: &[(String, u8)]) -> Vec<String> {
        let mut out = Vec::new();
        for (name, got) in scores {
            let want = self.by_exercise.get(name).copied().or(self.all);
            if let Some(want) = want.filter(|w| got < w) {
                out.push(format!("{name}: motion score {got} < expected {want}"));
            }
        }
        for name in self.by_exercise.keys() {
            if !scores.iter().any(|(n, _)| n == name) {
                out.push(format!("{name}: not performed"));
            }
        }
        out
    }
}

/// Scores a finished session. Motion is 2 only when the block reached its
/// target LED repetitions and every attempt lit the LED.
pub fn finish(state: &SessionState, pain: Option<&PainAnnotations>) -> Result<FmReport, SessionError> {
    if !state.phase.is_final() {
        return Err(SessionError::NotFinished(state.phase));
    }
    let exercises = state
        .blocks
        .iter()
        .zip(&state.program.blocks)
        .enumerate()
        .filter(|(_, (ledger, _))| ledger.entered())
        .map(|(i, (ledger, block))| {
            let attempts = ledger.attempts.len();
            let lit = ledger.attempts.iter().filter(|a| a.led_on).count();
            let led_on_fraction = if attempts == 0 { 0.0 } else { lit as f64 / attempts as f64 };
            let voltage =
                ledger.attempts.iter().map(|a| a.peak_volts).fold(None, |acc: Option<VoltageRange>, v| {
                    Some(acc.map_or(VoltageRange { min: v, max: v }, |r| VoltageRange {
                        min: r.min.min(v),
                        max: r.max.max(v),
                    }))
                });
            let full = ledger.reps.len() >= block.reps as usize && attempts > 0 && lit == attempts;
            ExerciseScore {
                block: i,
                exercise: block.exercise.clone(),
                selection: block.selection,
                target: [block.target.0 as u8, block.target.1 as u8],
                status: ledger.status,
                target_reps: block.reps,
                rep_count: ledger.reps.len(),
                attempts,
                led_on_fraction,
                voltage,
                motion_score: if full { 2 } else { 1 },
                pain_score: pain.map_or(PainScore::NotAssessed, |p| p.get(&block.exercise)),
                window_overrun: ledger.window_overrun,
                reps: ledger.reps.clone(),
                attempt_log: ledger.attempts.clone(),
            }
        })
        .collect();
    Ok(FmReport {
        program: state.program.name.clone(),
        phase: state.phase.name().to_string(),
        threshold: state.threshold,
        exercises,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::{begin_session, ExerciseProgram, Observation};

    fn step(s: &mut SessionState, t: u64, sel: Selection, inputs: (bool, bool), v: f64) {
        let o =
            Observation { t_ms: t, selection: sel, clusters: vec![], inputs, output_volts: v, rom_violations: vec![] };
        s.step(&o).unwrap();
    }

    fn wrist_session(peaks: &[f64]) -> SessionState {
        let mut s = begin_session(ExerciseProgram::four_block()).unwrap();
        let c1 = Selection::Circuit1;
        step(&mut s, 0, Selection::None, (false, false), 0.0);
        for (k, v) in peaks.iter().enumerate() {
            let t = 100 + k as u64 * 1000;
            step(&mut s, t, c1, (true, false), *v);
            step(&mut s, t + 500, c1, (false, false), 0.1);
        }
        s
    }

    #[test]
    fn finish_requires_final_phase() {
        let s = wrist_session(&[]);
        assert!(matches!(finish(&s, None), Err(SessionError::NotFinished(_))));
    }

    #[test]
    fn full_wrist_block_scores_two() {
        let peaks: Vec<f64> = (0..10).map(|k| 2.8 + 0.011 * k as f64).collect();
        let mut s = wrist_session(&peaks);
        s.abort();
        let r = finish(&s, None).unwrap();
        assert_eq!(r.phase, "Aborted");
        assert_eq!(r.exercises.len(), 1);
        let w = &r.exercises[0];
        assert_eq!((w.rep_count, w.motion_score), (10, 2));
        assert_eq!(w.pain_score, PainScore::NotAssessed);
        let v = w.voltage.unwrap();
        assert!((v.min - 2.8).abs() < 1e-9 && (v.max - 2.899).abs() < 1e-9);
    }

    #[test]
    fn one_sub_threshold_rep_scores_one() {
        let mut peaks = vec![2.4; 10];
        peaks[3] = 1.97;
        let mut s = wrist_session(&peaks);
        s.abort();
        let r = finish(&s, None).unwrap();
        let w = &r.exercises[0];
        assert_eq!(w.motion_score, 1);
        assert_eq!(w.rep_count, 9);
        assert!((w.led_on_fraction - 0.9).abs() < 1e-12);
    }

    #[test]
    fn aborted_at_calibration_has_no_exercises() {
        let mut s = begin_session(ExerciseProgram::four_block()).unwrap();
        s.abort();
        let r = finish(&s, None).unwrap();
        assert!(r.exercises.is_empty());
    }

    #[test]
    fn expectations() {
        let e: ScoreExpectation = "all=2, finger_flexion=1".parse().unwrap();
        let scores = vec![("wrist_flexion".to_string(), 2), ("finger_flexion".to_string(), 1)];
        assert!(e.shortfalls(&scores).is_empty());
        let strict: ScoreExpectation = "all=2".parse().unwrap();
        assert_eq!(strict.shortfalls(&scores).len(), 1);
        let missing: ScoreExpectation = "thumb_flexion=1".parse().unwrap();
        assert_eq!(missing.shortfalls(&scores), vec!["thumb_flexion: not performed".to_string()]);
        assert!("all=3".parse::<ScoreExpectation>().is_err());
        assert!("".parse::<ScoreExpectation>().is_err());
    }

    #[test]
    fn pain_annotations() {
        let p = PainAnnotations::from_toml("[pain]\nwrist_flexion = 2\nfinger_flexion = 1\n").unwrap();
        assert_eq!(p.get("wrist_flexion"), PainScore::Two);
        assert_eq!(p.get("thumb_flexion"), PainScore::NotAssessed);
        assert!(PainAnnotations::from_toml("wrist_flexion = 3").is_err());
        assert_eq!(serde_json::to_string(&PainScore::NotAssessed).unwrap(), "\"not_assessed\"");
        assert_eq!(serde_json::to_string(&PainScore::One).unwrap(), "1");
    }
}
