// SPDX-License-Identifier: Apache-2.0

use stitchsim_core::trace::{count_reps_accel, parse_accel_csv};

use crate::error::{CliError, CliResult};
use crate::output::{print_json, Table};
use crate::{load, AccelArgs};

pub fn run(args: &AccelArgs) -> CliResult {
    let defaults = load::defaults()?;
    let min_prominence = args.min_prominence.unwrap_or(defaults.accel.min_prominence);
    if !(min_prominence > 0.0 && min_prominence.is_finite()) {
        return Err(CliError::Usage(format!("--min-prominence {min_prominence} must be positive")));
    }
    let refractory = args.refractory_ms.unwrap_or(defaults.accel.refractory_ms);
    let trace = parse_accel_csv(load::open(&args.accel)?)
        .map_err(|e| CliError::Domain(format!("{}: {e}", args.accel.display())))?;
    let r = count_reps_accel(&trace, min_prominence, refractory);

    if args.out.json {
        print_json(&r);
        return Ok(());
    }
    println!(
        "{} samples, {} repetitions (prominence {min_prominence} g, refractory {refractory} ms)",
        trace.samples.len(),
        r.reps
    );
    let times: Vec<String> = r.peak_times_ms.iter().map(u64::to_string).collect();
    println!("peaks at ms: {}", if times.is_empty() { "-".into() } else { times.join(" ") });
    let mut t = Table::new(&["axis", "mean", "min", "max", "baseline"]);
    for (name, s, base) in [("x", r.ax, r.baseline[0]), ("y", r.ay, r.baseline[1]), ("z", r.az, r.baseline[2])] {
        t.row(vec![
            name.into(),
            format!("{:.4}", s.mean),
            format!("{:.4}", s.min),
            format!("{:.4}", s.max),
            format!("{base:.4}"),
        ]);
    }
    print!("{}", t.render());
    let oct: Vec<String> = r.octants.iter().filter(|(_, n)| **n > 0).map(|(k, n)| format!("{k}={n}")).collect();
    println!("octants: {}", oct.join(" "));
    Ok(())
}
