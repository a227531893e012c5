use anyhow::Context;

use crate::args::{Cli, Command};
use crate::manifest::{absolute, CommandManifest, RunManifest, SolverManifest, MANIFEST_FILE};
use crate::output::{ensure_dir, write_atomic};
use crate::Outcome;

pub mod select;
pub mod solve;
pub mod synth;
pub mod trace;

pub fn dispatch(cli: Cli) -> anyhow::Result<Outcome> {
    let manifest = match cli.command {
        Command::Solve(a) => RunManifest::new(
            absolute(&a.out.out_dir)?,
            0,
            CommandManifest::Solve {
                m: absolute(&a.m)?,
                b: absolute(&a.b)?,
                p: a.p,
                solver: SolverManifest::from(&a.solver),
            },
        ),
        Command::Select(a) => {
            let bias = a.include_bias();
            RunManifest::new(
                absolute(&a.out.out_dir)?,
                a.seed,
                CommandManifest::Select {
                    data: absolute(&a.data)?,
                    label_column: a.label_column,
                    p: a.p,
                    k: a.k,
                    gamma: a.gamma,
                    bias,
                    test_fraction: a.test_fraction,
                    true_support: a.true_support,
                    population_std: a.population_std,
                    solver: SolverManifest::from(&a.solver),
                },
            )
        }
        Command::TracePlotData(a) => {
            let inputs = a
                .inputs
                .iter()
                .map(|s| trace::parse_input(s))
                .collect::<anyhow::Result<_>>()?;
            RunManifest::new(absolute(&a.out.out_dir)?, 0, CommandManifest::TracePlotData { inputs })
        }
        Command::Synth(a) => RunManifest::new(
            absolute(&a.out.out_dir)?,
            a.seed,
            CommandManifest::Synth {
                samples: a.samples,
                features: a.features,
                classes: a.classes,
                informative: a.informative,
                separation: a.separation,
            },
        ),
        Command::Rerun(a) => {
            let mut m = RunManifest::load(&a.manifest)?;
            if let Some(dir) = a.out_dir {
                m.out_dir = absolute(&dir)?;
            }
            m
        }
    };
    execute(&manifest)
}

/// Runs the command recorded in `manifest` and writes the manifest next to
/// its outputs.
pub fn execute(manifest: &RunManifest) -> anyhow::Result<Outcome> {
    let dir = &manifest.out_dir;
    ensure_dir(dir)?;
    let outcome = match &manifest.command {
        CommandManifest::Solve { m, b, p, solver } => solve::run(dir, m, b, *p, solver),
        CommandManifest::Select { .. } => select::run(manifest),
        CommandManifest::TracePlotData { inputs } => trace::run(dir, inputs),
        CommandManifest::Synth { .. } => synth::run(manifest),
    }?;
    write_atomic(dir, MANIFEST_FILE, manifest.to_json().as_bytes()).context("writing the run manifest")?;
    Ok(outcome)
}
