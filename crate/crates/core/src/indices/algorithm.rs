//! Indices over the predicted-meritorious set of each repetition.
//!
//! Every run splits, trains and predicts as in [`crate::classify`]; the
//! test complaints predicted meritorious form `d_m`, their input-output
//! pairs are ordered by input, and each requested index contributes one
//! `(n, value)` point for the run.

use std::collections::HashMap;

use crate::classify::{run_repeated, Dataset, ModelConfig, ModelKind, PredictedSet, RunOutcome, SplitSpec};
use crate::error::{Error, Result};
use crate::featurize::Featurization;
use crate::lexicon::SentimentLexicon;
use crate::quantify::{make_io_pairs, IoPair, NarrativeQuantities};

use crate::seed::substream;

use super::{concomitants, concomitants_jittered, IndexKind, IndexPoint, IndexRow};

/// Index points for one run, or `None` when the subset has fewer than two
/// usable pairs or all concomitants are equal.
///
/// With `jitter = Some(seed)` tied inputs are broken by seeded noise drawn
/// from `substream(seed, run)` instead of by position.
pub fn indices_for_subset(
    run: usize,
    pairs: &[IoPair],
    kinds: &[IndexKind],
    jitter: Option<u64>,
) -> Result<Option<Vec<IndexPoint>>> {
    if pairs.len() < 2 {
        return Ok(None);
    }
    let c = match jitter {
        Some(seed) => concomitants_jittered(pairs, substream(seed, run as u64))?,
        None => concomitants(pairs)?,
    };
    let mut points = Vec::with_capacity(kinds.len());
    for kind in kinds {
        match kind.evaluate(&c) {
            Ok(value) => points.push(IndexPoint {
                run,
                n: c.len(),
                value,
                kind: *kind,
            }),
            Err(Error::DegenerateSequence(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(points))
}

fn subset_pairs(
    ids: &[String],
    by_id: &HashMap<&str, &NarrativeQuantities>,
    featurization: Featurization,
) -> Result<Vec<IoPair>> {
    let qs: Vec<NarrativeQuantities> = ids
        .iter()
        .map(|id| {
            by_id
                .get(id.as_str())
                .map(|q| (*q).clone())
                .ok_or_else(|| Error::Parse(format!("no quantities for id `{id}`")))
        })
        .collect::<Result<_>>()?;
    Ok(make_io_pairs(&qs, featurization).pairs)
}

fn quantity_index(quantities: &[NarrativeQuantities]) -> Result<HashMap<&str, &NarrativeQuantities>> {
    let positions = crate::ingest::index_by_id(quantities.iter().map(|q| q.id.as_str()))?;
    Ok(positions.into_iter().map(|(id, i)| (id, &quantities[i])).collect())
}

/// Index rows from stored predictions, plus the number of skipped runs.
pub fn points_from_predictions(
    sets: &[PredictedSet],
    quantities: &[NarrativeQuantities],
    kinds: &[IndexKind],
    jitter: Option<u64>,
) -> Result<(Vec<IndexRow>, usize)> {
    let by_id = quantity_index(quantities)?;
    let mut rows = Vec::new();
    let mut skipped = 0;
    for set in sets {
        let pairs = subset_pairs(&set.ids, &by_id, set.featurization)?;
        match indices_for_subset(set.run, &pairs, kinds, jitter)? {
            Some(points) => rows.extend(points.into_iter().map(|point| IndexRow {
                model: set.model,
                featurization: set.featurization,
                point,
            })),
            None => skipped += 1,
        }
    }
    Ok((rows, skipped))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Algorithm1Output {
    pub points: Vec<IndexPoint>,
    /// Runs whose subset was too small or degenerate.
    pub skipped: usize,
    pub outcomes: Vec<RunOutcome>,
}

/// `quantities` must cover every id in `dataset`.
#[allow(clippy::too_many_arguments)]
pub fn run_algorithm1(
    kind: ModelKind,
    featurization: Featurization,
    dataset: &Dataset,
    quantities: &[NarrativeQuantities],
    lexicon: &SentimentLexicon,
    spec: &SplitSpec,
    config: &ModelConfig,
    kinds: &[IndexKind],
    jitter: Option<u64>,
) -> Result<Algorithm1Output> {
    let outcomes = run_repeated(kind, featurization, dataset, lexicon, spec, config)?;
    let by_id = quantity_index(quantities)?;
    let mut points = Vec::new();
    let mut skipped = 0;
    for o in &outcomes {
        let pairs = subset_pairs(&o.predicted_meritorious, &by_id, featurization)?;
        match indices_for_subset(o.run, &pairs, kinds, jitter)? {
            Some(p) => points.extend(p),
            None => skipped += 1,
        }
    }
    Ok(Algorithm1Output {
        points,
        skipped,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(x: f64, y: f64) -> IoPair {
        IoPair {
            id: String::new(),
            x,
            y,
            featurization: Featurization::Ti,
        }
    }

    #[test]
    fn small_or_flat_subsets_are_skipped() {
        let kinds = [IndexKind::I, IndexKind::S];
        assert_eq!(indices_for_subset(0, &[pair(0.1, 1.0)], &kinds, None).unwrap(), None);
        assert_eq!(
            indices_for_subset(0, &[pair(0.1, 1.0), pair(0.2, 1.0)], &kinds, None).unwrap(),
            None
        );
        let pts = indices_for_subset(4, &[pair(0.1, 1.0), pair(0.3, 2.0), pair(0.2, 4.0)], &kinds, None)
            .unwrap()
            .unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].n, 3);
        assert_eq!(pts[0].run, 4);
        assert_eq!(pts[1].value, 5.0);
    }
}
