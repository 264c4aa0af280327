// SPDX-License-Identifier: Apache-2.0

use std::io::{Read, Write};

use crate::kinematics::{Joint, JointPose};

use super::{cell, column_map, csv_error, parse_f64, parse_t, reader, TraceError};

pub const MOVEMENT_HEADER: [&str; 8] =
    ["t_ms", "ctrl_wrist", "ctrl_elbow", "ex_wrist", "ex_elbow", "ex_finger", "ex_thumb", "palm"];

/// Joint poses in strictly increasing time order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MovementTrace {
    pub samples: Vec<JointPose>,
}

impl MovementTrace {
    pub fn duration_ms(&self) -> u64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t_ms - a.t_ms,
            _ => 0,
        }
    }
}

pub fn parse_movement_csv(input: impl Read) -> Result<MovementTrace, TraceError> {
    let mut rdr = reader(input);
    let cols = column_map(&mut rdr, &MOVEMENT_HEADER)?;
    let mut samples: Vec<JointPose> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let t = parse_t(&rec, cols[0], line, samples.last().map(|p| p.t_ms))?;
        let mut angles = [0.0; 6];
        for (k, joint) in Joint::ALL.iter().enumerate() {
            angles[k] = parse_f64(&rec, cols[k + 1], joint.id(), line)?;
        }
        let palm = match cell(&rec, cols[7]) {
            "0" => false,
            "1" => true,
            other => return Err(TraceError::Invalid { line, message: format!("palm must be 0 or 1, got '{other}'") }),
        };
        let pose = JointPose::new(t, angles, palm).map_err(|e| TraceError::Invalid { line, message: e.to_string() })?;
        samples.push(pose);
    }
    if samples.is_empty() {
        return Err(TraceError::NoSamples);
    }
    Ok(MovementTrace { samples })
}

pub fn write_movement_csv(trace: &MovementTrace, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{}", MOVEMENT_HEADER.join(","))?;
    for p in &trace.samples {
        write!(out, "{}", p.t_ms)?;
        for a in p.angles() {
            write!(out, ",{a}")?;
        }
        writeln!(out, ",{}", p.palm_contact as u8)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "t_ms,ctrl_wrist,ctrl_elbow,ex_wrist,ex_elbow,ex_finger,ex_thumb,palm\n";

    #[test]
    fn two_rows() {
        let t = parse_movement_csv(format!("{HEAD}0,0,0,0,0,0,0,0\n10,60,0,52.5,0,0,0,1\n").as_bytes()).unwrap();
        assert_eq!(t.samples.len(), 2);
        assert_eq!(t.samples[1].angle(Joint::ExWrist), 52.5);
        assert!(t.samples[1].palm_contact);
    }

    #[test]
    fn comments_are_skipped() {
        let t = parse_movement_csv(format!("# recorded at rest\n{HEAD}# first\n0,0,0,0,0,0,0,0\n").as_bytes()).unwrap();
        assert_eq!(t.samples.len(), 1);
    }

    #[test]
    fn duplicate_timestamp_names_line() {
        let err = parse_movement_csv(format!("{HEAD}0,0,0,0,0,0,0,0\n0,0,0,0,0,0,0,0\n").as_bytes()).unwrap_err();
        assert_eq!(err, TraceError::NonMonotonic { line: 3, t_ms: 0, prev_ms: 0 });
    }

    #[test]
    fn missing_and_bad_cells() {
        let err = parse_movement_csv("t_ms,ctrl_wrist\n0,0\n".as_bytes()).unwrap_err();
        assert_eq!(err, TraceError::MissingColumn("ctrl_elbow".into()));
        let err = parse_movement_csv(format!("{HEAD}0,0,0,x,0,0,0,0\n").as_bytes()).unwrap_err();
        assert!(matches!(err, TraceError::NonNumeric { line: 2, ref column, .. } if column == "ex_wrist"));
        assert_eq!(parse_movement_csv(HEAD.as_bytes()).unwrap_err(), TraceError::NoSamples);
        assert!(parse_movement_csv(format!("{HEAD}0,0,0,0,0,0,0,2\n").as_bytes()).is_err());
    }

    #[test]
    fn writes_what_it_reads() {
        let src = format!("{HEAD}0,0,0,0,0,0,0,0\n10,65.5,0,-3.25,0,0,0,1\n");
        let t = parse_movement_csv(src.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_movement_csv(&t, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), src);
    }
}
