use anyhow::bail;
use l2p_core::data::{to_csv_string, CsvSchema};
use l2p_core::synthetic::planted_classification;

use crate::manifest::{CommandManifest, RunManifest};
use crate::output::write_atomic;
use crate::Outcome;

pub fn run(manifest: &RunManifest) -> anyhow::Result<Outcome> {
    let CommandManifest::Synth {
        samples,
        features,
        classes,
        informative,
        separation,
    } = manifest.command
    else {
        unreachable!("dispatched on the command tag")
    };
    if classes == 0 || samples < classes || informative > features || features == 0 {
        bail!("need 1 <= classes <= samples and informative <= features (features >= 1)");
    }
    let planted = planted_classification(samples, features, classes, informative, separation, manifest.seed);
    let csv = to_csv_string(&planted.dataset, &CsvSchema::default())?;
    write_atomic(&manifest.out_dir, "data.csv", csv.as_bytes())?;
    let support: Vec<String> = planted.support.iter().map(usize::to_string).collect();
    write_atomic(
        &manifest.out_dir,
        "support.txt",
        format!("{}\n", support.join(",")).as_bytes(),
    )?;
    Ok(Outcome::Done)
}
