// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::Serialize;

use super::{column_map, csv_error, parse_f64, parse_t, reader, TraceError};

pub const ACCEL_HEADER: [&str; 4] = ["t_ms", "ax", "ay", "az"];

/// Deviations smaller than this (in g) count as rest in the octant summary.
pub const REST_G: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccelSample {
    pub t_ms: u64,
    /// Acceleration in g, per axis.
    pub a: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AccelTrace {
    pub samples: Vec<AccelSample>,
}

pub fn parse_accel_csv(input: impl Read) -> Result<AccelTrace, TraceError> {
    let mut rdr = reader(input);
    let cols = column_map(&mut rdr, &ACCEL_HEADER)?;
    let mut samples: Vec<AccelSample> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let t_ms = parse_t(&rec, cols[0], line, samples.last().map(|s| s.t_ms))?;
        let mut a = [0.0; 3];
        for k in 0..3 {
            a[k] = parse_f64(&rec, cols[k + 1], ACCEL_HEADER[k + 1], line)?;
        }
        samples.push(AccelSample { t_ms, a });
    }
    if samples.is_empty() {
        return Err(TraceError::NoSamples);
    }
    Ok(AccelTrace { samples })
}

pub fn write_accel_csv(trace: &AccelTrace, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{}", ACCEL_HEADER.join(","))?;
    for s in &trace.samples {
        writeln!(out, "{},{},{},{}", s.t_ms, s.a[0], s.a[1], s.a[2])?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepAnalysis {
    pub reps: usize,
    pub min_prominence: f64,
    pub refractory_ms: u64,
    /// Per-axis median, subtracted before taking the magnitude.
    pub baseline: [f64; 3],
    pub ax: AxisStats,
    pub ay: AxisStats,
    pub az: AxisStats,
    pub peak_times_ms: Vec<u64>,
    pub peak_heights: Vec<f64>,
    /// Sample counts per sign octant of the deviation, plus `rest`.
    pub octants: BTreeMap<String, usize>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn axis_stats(xs: impl Iterator<Item = f64> + Clone) -> AxisStats {
    let n = xs.clone().count() as f64;
    AxisStats {
        mean: xs.clone().sum::<f64>() / n,
        min: xs.clone().fold(f64::INFINITY, f64::min),
        max: xs.fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Magnitude from sorted squares, so axis permutations and sign flips give
/// bit-identical results.
fn magnitude(d: [f64; 3]) -> f64 {
    let mut sq = d.map(|x| x * x);
    sq.sort_by(f64::total_cmp);
    (sq[0] + sq[1] + sq[2]).sqrt()
}

/// Strict local maxima; a flat top counts once, at its middle sample.
/// The first and last samples are never peaks.
fn local_maxima(m: &[f64]) -> Vec<usize> {
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < m.len() {
        if m[i - 1] < m[i] {
            let mut j = i;
            while j + 1 < m.len() && m[j + 1] == m[i] {
                j += 1;
            }
            if j + 1 < m.len() && m[j + 1] < m[i] {
                peaks.push((i + j) / 2);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

/// Topographic prominence: height above the higher of the two lowest points
/// reached before climbing to higher ground on each side.
fn prominence(m: &[f64], p: usize) -> f64 {
    let h = m[p];
    let mut left = h;
    for &v in m[..p].iter().rev() {
        if v > h {
            break;
        }
        left = left.min(v);
    }
    let mut right = h;
    for &v in &m[p + 1..] {
        if v > h {
            break;
        }
        right = right.min(v);
    }
    h - left.max(right)
}

fn octant_key(d: [f64; 3]) -> String {
    if magnitude(d) < REST_G {
        return "rest".into();
    }
    ["x", "y", "z"].iter().zip(d).map(|(axis, v)| format!("{axis}{}", if v < 0.0 { '-' } else { '+' })).collect()
}

/// Counts repetitions as prominent peaks of the deviation magnitude from the
/// per-axis median. Taller peaks win when two fall within `refractory_ms`.
pub fn count_reps_accel(trace: &AccelTrace, min_prominence: f64, refractory_ms: u64) -> RepAnalysis {
    let s = &trace.samples;
    let baseline: [f64; 3] =
        std::array::from_fn(|k| if s.is_empty() { 0.0 } else { median(s.iter().map(|x| x.a[k]).collect()) });
    let dev: Vec<[f64; 3]> = s.iter().map(|x| std::array::from_fn(|k| x.a[k] - baseline[k])).collect();
    let mag: Vec<f64> = dev.iter().map(|d| magnitude(*d)).collect();

    let mut candidates: Vec<usize> =
        local_maxima(&mag).into_iter().filter(|&p| prominence(&mag, p) >= min_prominence).collect();
    candidates.sort_by(|a, b| mag[*b].total_cmp(&mag[*a]).then(a.cmp(b)));
    let mut kept: Vec<usize> = Vec::new();
    for p in candidates {
        let t = s[p].t_ms;
        if kept.iter().all(|&q| s[q].t_ms.abs_diff(t) >= refractory_ms) {
            kept.push(p);
        }
    }
    kept.sort_unstable();

    let mut octants: BTreeMap<String, usize> = BTreeMap::new();
    for x in ['+', '-'] {
        for y in ['+', '-'] {
            for z in ['+', '-'] {
                octants.insert(format!("x{x}y{y}z{z}"), 0);
            }
        }
    }
    octants.insert("rest".into(), 0);
    for d in &dev {
        *octants.entry(octant_key(*d)).or_default() += 1;
    }

    let (ax, ay, az) = if s.is_empty() {
        let z = AxisStats { mean: 0.0, min: 0.0, max: 0.0 };
        (z, z, z)
    } else {
        (
            axis_stats(s.iter().map(|x| x.a[0])),
            axis_stats(s.iter().map(|x| x.a[1])),
            axis_stats(s.iter().map(|x| x.a[2])),
        )
    };
    RepAnalysis {
        reps: kept.len(),
        min_prominence,
        refractory_ms,
        baseline,
        ax,
        ay,
        az,
        peak_times_ms: kept.iter().map(|&p| s[p].t_ms).collect(),
        peak_heights: kept.iter().map(|&p| mag[p]).collect(),
        octants,
    }
}
