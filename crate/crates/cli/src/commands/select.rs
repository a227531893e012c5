use anyhow::{bail, Context};
use l2p_core::data::{
    apply_standardization, load_csv, standardize, to_design_matrices, CsvSchema, Dataset, LabelColumn, StdDenominator,
};
use l2p_core::selection::{nearest_centroid_error, rank_features, select_top_k, support_recovery_rate};
use l2p_core::synthetic::rng;
use l2p_core::{
    solve_regression, Error, Exponent, FeatureRanking, RegressionProblem, RegressionSolution, SolverConfig,
};
use rand::seq::SliceRandom;

use crate::manifest::{CommandManifest, RunManifest};
use crate::output::{fmt_f64, p_tag, write_atomic};
use crate::Outcome;

use super::solve::trace_csv;

pub const SUMMARY_FILE: &str = "summary.csv";

/// Per class, holds out `round(fraction · count)` shuffled samples, keeping
/// at least one for training.
pub fn stratified_split(labels: &[usize], classes: usize, fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = rng(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for class in 0..classes {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        let held = ((fraction * members.len() as f64).round() as usize).min(members.len().saturating_sub(1));
        test.extend_from_slice(&members[..held]);
        train.extend_from_slice(&members[held..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

struct Cell {
    p: f64,
    solution: RegressionSolution,
    ranking: FeatureRanking,
}

pub fn run(manifest: &RunManifest) -> anyhow::Result<Outcome> {
    let CommandManifest::Select {
        data,
        label_column,
        p,
        k,
        gamma,
        bias,
        test_fraction,
        true_support,
        population_std,
        solver,
    } = &manifest.command
    else {
        unreachable!("dispatched on the command tag")
    };
    let dir = &manifest.out_dir;
    let config = solver.to_config()?;
    if p.is_empty() || k.is_empty() {
        bail!("need at least one p and one k");
    }
    if !(0.0..1.0).contains(test_fraction) {
        bail!("test fraction must lie in [0, 1), got {test_fraction}");
    }
    let schema = CsvSchema {
        label_column: LabelColumn::parse(label_column),
        ..CsvSchema::default()
    };
    let dataset = load_csv(data, &schema).with_context(|| format!("loading {}", data.display()))?;
    let d = dataset.feature_count();
    for &kk in k {
        if kk == 0 || kk > d {
            return Err(Error::SelectionRange { k: kk, available: d }.into());
        }
    }
    if let Some(support) = true_support {
        if support.is_empty() {
            bail!("--true-support is empty");
        }
        if let Some(&j) = support.iter().find(|&&j| j >= d) {
            bail!("true support index {j} outside 0..{d}");
        }
    }

    let (train_idx, test_idx) = stratified_split(&dataset.labels, dataset.class_count, *test_fraction, manifest.seed);
    let denominator = if *population_std {
        StdDenominator::Population
    } else {
        StdDenominator::Sample
    };
    let train = standardize(&dataset.subset(&train_idx)?, denominator)?;
    let params = train.standardization.clone().expect("set by standardize");
    let test = if test_idx.is_empty() {
        None
    } else {
        Some(apply_standardization(&dataset.subset(&test_idx)?, &params)?)
    };
    let names: Vec<String> = (0..d).map(|j| dataset.feature_name(j)).collect();
    write_atomic(dir, "standardization.txt", params.to_key_value(&names).as_bytes())?;

    let (a, b) = to_design_matrices(&train, *bias);
    let cells = std::thread::scope(|scope| {
        let handles: Vec<_> = p
            .iter()
            .map(|&pv| {
                let (a, b, config) = (&a, &b, &config);
                scope.spawn(move || solve_cell(a, b, *gamma, pv, *bias, config))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut summary = String::from("p,k,iterations,converged,objective,selected,support_recovery,test_error\n");
    let mut all_converged = true;
    for cell in &cells {
        let tag = p_tag(cell.p);
        write_atomic(
            dir,
            &format!("ranking_{tag}.csv"),
            ranking_csv(&cell.ranking, &names).as_bytes(),
        )?;
        let trace = cell.solution.solution.trace.as_ref().expect("trace recording is on");
        let alpha = gamma.powf(cell.p);
        write_atomic(dir, &format!("trace_{tag}.csv"), trace_csv(trace, alpha).as_bytes())?;
        all_converged &= cell.solution.solution.converged;
        for &kk in k {
            let selected = select_top_k(&cell.ranking, kk)?;
            let recovery = true_support
                .as_ref()
                .map(|s| fmt_f64(support_recovery_rate(&selected, s)));
            let error = test.as_ref().map(|t| fmt_f64(test_error(&train, t, &selected)));
            let joined: Vec<String> = selected.iter().map(usize::to_string).collect();
            summary.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                cell.p,
                kk,
                cell.solution.solution.iterations,
                cell.solution.solution.converged,
                fmt_f64(cell.solution.objective),
                joined.join(" "),
                recovery.unwrap_or_default(),
                error.unwrap_or_default()
            ));
        }
    }
    write_atomic(dir, SUMMARY_FILE, summary.as_bytes())?;
    Ok(if all_converged {
        Outcome::Done
    } else {
        Outcome::NotConverged
    })
}

fn solve_cell(
    a: &l2p_core::DenseMatrix,
    b: &l2p_core::DenseMatrix,
    gamma: f64,
    p: f64,
    bias: bool,
    config: &SolverConfig,
) -> l2p_core::Result<Cell> {
    let rp = RegressionProblem::new(a.clone(), b.clone(), gamma, Exponent::new(p)?, bias)?;
    let solution = solve_regression(&rp, config)?;
    let ranking = rank_features(&solution.x, rp.bias_row());
    Ok(Cell { p, solution, ranking })
}

fn ranking_csv(ranking: &FeatureRanking, names: &[String]) -> String {
    let mut s = String::from("rank,feature,name,score\n");
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for (r, &(j, score)) in ranking.entries().iter().enumerate() {
        w.write_record([(r + 1).to_string(), j.to_string(), names[j].clone(), fmt_f64(score)])
            .expect("in-memory write");
    }
    s.push_str(std::str::from_utf8(&w.into_inner().expect("in-memory write")).expect("utf-8"));
    s
}

fn test_error(train: &Dataset, test: &Dataset, selected: &[usize]) -> f64 {
    nearest_centroid_error(&train.features, &train.labels, &test.features, &test.labels, selected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_stratified_and_seeded() {
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let (train, test) = stratified_split(&labels, 3, 0.2, 5);
        assert_eq!(test.len(), 6);
        assert_eq!(train.len() + test.len(), 30);
        for c in 0..3 {
            assert_eq!(test.iter().filter(|&&i| labels[i] == c).count(), 2);
        }
        assert_eq!(stratified_split(&labels, 3, 0.2, 5), (train, test));
        let (train, test) = stratified_split(&[0, 1], 2, 0.9, 1);
        assert_eq!((train.len(), test.len()), (2, 0));
    }
}
