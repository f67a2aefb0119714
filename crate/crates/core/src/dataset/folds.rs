use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::manifest::{DatasetManifest, Source};
use crate::error::{Error, Result};

/// Assignment of every real image to one of `fold_count` folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSplit {
    pub fold_count: usize,
    pub seed: u64,
    pub assignments: BTreeMap<String, usize>,
}

impl FoldSplit {
    pub fn fold(&self, index: usize) -> Vec<String> {
        self.assignments
            .iter()
            .filter(|(_, &f)| f == index)
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.fold_count];
        for &f in self.assignments.values() {
            sizes[f] += 1;
        }
        sizes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingRound {
    pub test_fold: usize,
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// The `splits.json` document: folds plus every derived training round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitsDocument {
    #[serde(flatten)]
    pub split: FoldSplit,
    pub synthetic_count: Option<usize>,
    pub rounds: Vec<TrainingRound>,
}

impl SplitsDocument {
    pub fn build(
        manifest: &DatasetManifest,
        split: FoldSplit,
        synthetic_count: Option<usize>,
    ) -> Result<Self> {
        let rounds = (0..split.fold_count)
            .map(|i| build_training_round(&split, manifest, i, synthetic_count))
            .collect::<Result<_>>()?;
        Ok(SplitsDocument {
            split,
            synthetic_count,
            rounds,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Error::json(path, e))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Sorts the real images, shuffles them with `seed` and deals them round-robin.
pub fn make_folds(manifest: &DatasetManifest, k: usize, seed: u64) -> Result<FoldSplit> {
    if k < 2 {
        return Err(Error::Config(format!(
            "fold count must be at least 2, got {k}"
        )));
    }
    let mut real: Vec<&str> = manifest.paths_of(Source::Real);
    if real.len() < k {
        return Err(Error::Config(format!(
            "{} real images cannot fill {k} folds",
            real.len()
        )));
    }
    real.sort_unstable();
    real.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let assignments = real
        .iter()
        .enumerate()
        .map(|(i, p)| (p.to_string(), i % k))
        .collect();
    Ok(FoldSplit {
        fold_count: k,
        seed,
        assignments,
    })
}

/// Train = real images outside `test_fold` plus the first `synthetic_count`
/// synthetic images in path order (all of them when `None`).
pub fn build_training_round(
    split: &FoldSplit,
    manifest: &DatasetManifest,
    test_fold: usize,
    synthetic_count: Option<usize>,
) -> Result<TrainingRound> {
    if test_fold >= split.fold_count {
        return Err(Error::Config(format!(
            "test fold {test_fold} out of range for {} folds",
            split.fold_count
        )));
    }
    let known: BTreeSet<&str> = manifest.paths_of(Source::Real).into_iter().collect();
    if let Some(missing) = split
        .assignments
        .keys()
        .find(|p| !known.contains(p.as_str()))
    {
        return Err(Error::Config(format!(
            "split references unknown real image {missing}"
        )));
    }
    let test = split.fold(test_fold);
    let mut train: Vec<String> = split
        .assignments
        .iter()
        .filter(|(_, &f)| f != test_fold)
        .map(|(p, _)| p.clone())
        .collect();
    let mut synthetic = manifest.paths_of(Source::Synthetic);
    synthetic.sort_unstable();
    let take = synthetic_count.unwrap_or(synthetic.len());
    if take > synthetic.len() {
        return Err(Error::Config(format!(
            "requested {take} synthetic images, manifest has {}",
            synthetic.len()
        )));
    }
    train.extend(synthetic[..take].iter().map(|s| s.to_string()));
    Ok(TrainingRound {
        test_fold,
        train,
        test,
    })
}
