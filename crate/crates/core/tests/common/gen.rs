// SPDX-License-Identifier: Apache-2.0

//! Seeded generator of semantically valid circuits.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stitchsim_core::dsl::*;

fn ident(s: &str) -> Ident {
    Spanned::synthetic(s.to_string())
}

fn pin(patch: &str, pin: &str) -> Endpoint {
    Endpoint::Pin { patch: ident(patch), pin: ident(pin) }
}

/// A random circuit that satisfies every semantic check.
pub fn random_circuit(seed: u64) -> CircuitAst {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name_chars: Vec<char> = "abc xyz_019-\"\\".chars().collect();
    let name: String = (0..rng.gen_range(0..12)).map(|_| *name_chars.choose(&mut rng).unwrap()).collect();

    let buses: Vec<BusDecl> = (0..rng.gen_range(0..3))
        .map(|i| BusDecl {
            name: ident(&format!("BUS{i}")),
            volts: if rng.gen_bool(0.8) { Some(rng.gen_range(0..40) as f64 / 4.0) } else { None },
        })
        .collect();

    let roles = [SensorRole::Control, SensorRole::Exercise, SensorRole::Contact];
    let mut sensors = Vec::new();
    for id in ["A", "B"] {
        if rng.gen_bool(0.8) {
            sensors.push(SensorDecl { id: ident(id), role: SensorRole::Exercise });
        }
    }
    for i in 0..rng.gen_range(0..3) {
        sensors.push(SensorDecl { id: ident(&format!("s{i}")), role: *roles.choose(&mut rng).unwrap() });
    }
    sensors.shuffle(&mut rng);

    let patches: Vec<PatchDecl> = (0..rng.gen_range(1..6))
        .map(|i| PatchDecl { id: ident(&format!("P{i}")), kind: *GateKind::ALL.choose(&mut rng).unwrap() })
        .collect();

    let outputs = ["LED", "OUT2"];
    let n_configs = rng.gen_range(0..3);
    let mut drivers: Vec<Endpoint> = buses.iter().map(|b| Endpoint::Name(b.name.clone())).collect();
    drivers
        .extend(sensors.iter().filter(|s| s.id.node == "A" || s.id.node == "B").map(|s| Endpoint::Name(s.id.clone())));
    drivers.extend(patches.iter().map(|p| pin(&p.id.node, "out")));
    let mut sinks: Vec<Endpoint> = buses.iter().map(|b| Endpoint::Name(b.name.clone())).collect();
    for p in &patches {
        for pn in p.kind.input_pins().iter().chain(&[Pin::Vcc, Pin::Gnd]) {
            sinks.push(pin(&p.id.node, pn.name()));
        }
    }
    let output_names: Vec<&str> = outputs[..n_configs.min(2)].to_vec();
    sinks.extend(output_names.iter().map(|o| Endpoint::Name(ident(o))));

    let mut nets = Vec::new();
    let mut tags = Vec::new();
    for i in 0..rng.gen_range(1..8) {
        let cluster = if i == 0 || rng.gen_bool(0.6) { Some(rng.gen_range(1..=MAX_CLUSTER)) } else { None };
        if let Some(c) = cluster {
            tags.push(c);
        }
        let k = rng.gen_range(1..=3.min(sinks.len()));
        nets.push(NetDecl {
            id: ident(&format!("n{i}")),
            cluster: cluster.map(Spanned::synthetic),
            driver: drivers.choose(&mut rng).unwrap().clone(),
            sinks: sinks.choose_multiple(&mut rng, k).cloned().collect(),
        });
    }
    tags.sort_unstable();
    tags.dedup();

    let configs = (0..n_configs)
        .map(|i| {
            let k = rng.gen_range(1..=tags.len());
            let clusters = tags.choose_multiple(&mut rng, k).map(|c| Spanned::synthetic(*c)).collect();
            // The first configs introduce the named outputs used as sinks.
            let output = if i < output_names.len() || rng.gen_bool(0.7) {
                Endpoint::Name(ident(output_names[i % output_names.len()]))
            } else {
                pin(&patches.choose(&mut rng).unwrap().id.node, "out")
            };
            let mut truth: Vec<RowDecl> = [(false, false), (false, true), (true, false), (true, true)]
                .iter()
                .map(|&(a, b)| RowDecl { a, b, out: rng.gen() })
                .collect();
            truth.shuffle(&mut rng);
            ConfigDecl { id: ident(&format!("cfg{i}")), clusters, output, truth }
        })
        .collect();

    CircuitAst { name, buses, patches, sensors, nets, configs }
}
