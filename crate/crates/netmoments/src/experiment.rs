//! The KS-error experiment harness: for a grid of host sizes, sample a
//! host graph from a graphon, subsample it, and measure the KS distance
//! between the rescaled subsampling distribution and the reference
//! distribution obtained by sampling size-b graphs from the model.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{Graphon, GraphonModel, RhoSchedule};
use crate::motif::{CountMode, Motif};
use crate::rng;
use crate::subsample::{
    ks_distance, reference_sample, rescale, run_subsampling, EmpiricalJointCdf, RescaledSample,
    SubsampleConfig,
};

/// How the subsample size is derived from the host size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BRule {
    /// b = ceil(n^(2/3)).
    N23,
    /// b = ceil(2 sqrt(n)).
    Sqrt2,
}

impl BRule {
    pub fn apply(&self, n: usize) -> usize {
        match self {
            BRule::N23 => (n as f64).powf(2.0 / 3.0).ceil() as usize,
            BRule::Sqrt2 => (2.0 * (n as f64).sqrt()).ceil() as usize,
        }
    }
}

impl std::str::FromStr for BRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "n23" => Ok(BRule::N23),
            "sqrt2" => Ok(BRule::Sqrt2),
            other => Err(format!("unknown b rule {other:?}; use n23 or sqrt2")),
        }
    }
}

impl std::fmt::Display for BRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BRule::N23 => write!(f, "n23"),
            BRule::Sqrt2 => write!(f, "sqrt2"),
        }
    }
}

/// One KS-error experiment configuration.
#[derive(Clone, Debug)]
pub struct ExperimentGrid {
    pub graphon: Graphon,
    /// Host sizes, strictly increasing.
    pub n_values: Vec<usize>,
    pub b_rule: BRule,
    pub rho: RhoSchedule,
    /// Motif sets to evaluate: singletons give marginal CDFs, larger
    /// sets joint CDFs.
    pub motif_sets: Vec<Vec<Motif>>,
    pub mode: CountMode,
    /// Replicates of Algorithm 1 per host.
    pub n_sub: usize,
    /// Independent hosts per n.
    pub replicates: usize,
    /// Draw count for the reference CDF and its centering pool.
    pub reference_pool: usize,
    pub seed: u64,
}

/// One output row of the experiment table.
#[derive(Clone, Debug, Serialize)]
pub struct KsErrorRow {
    pub graphon: String,
    pub n: usize,
    pub b: usize,
    pub rho: f64,
    pub motif_set: String,
    pub mean_ks: f64,
    pub se_ks: f64,
    pub runtime_s: f64,
}

fn motif_set_label(set: &[Motif]) -> String {
    set.iter().map(Motif::name).collect::<Vec<_>>().join("+")
}

/// Motifs of all sets, deduplicated, in first-appearance order.
fn union_motifs(sets: &[Vec<Motif>]) -> Vec<Motif> {
    let mut out: Vec<Motif> = Vec::new();
    for set in sets {
        for m in set {
            if !out.iter().any(|x| x.canonical_key() == m.canonical_key()) {
                out.push(m.clone());
            }
        }
    }
    out
}

fn column_indices(all: &[Motif], set: &[Motif]) -> Vec<usize> {
    set.iter()
        .map(|m| all.iter().position(|x| x.canonical_key() == m.canonical_key()).unwrap())
        .collect()
}

fn select(sample: &RescaledSample, columns: &[usize]) -> crate::subsample::SampleMatrix {
    sample.z.select_columns(columns)
}

/// Runs the grid; rows are ordered by (n, motif_set). Deterministic
/// given the master seed (runtimes aside).
pub fn ks_error_experiment(grid: &ExperimentGrid) -> Result<Vec<KsErrorRow>> {
    if grid.n_values.windows(2).any(|w| w[0] >= w[1]) || grid.n_values.is_empty() {
        return Err(Error::InvalidGrid("n values must be strictly increasing".into()));
    }
    if grid.motif_sets.is_empty() || grid.replicates == 0 {
        return Err(Error::InvalidGrid("need at least one motif set and one replicate".into()));
    }
    let motifs = union_motifs(&grid.motif_sets);
    let max_r = motifs.iter().map(Motif::node_count).max().unwrap();
    let mut rows = Vec::new();

    for (n_index, &n) in grid.n_values.iter().enumerate() {
        let started = Instant::now();
        let b = grid.b_rule.apply(n);
        if b < max_r {
            return Err(Error::InvalidGrid(format!(
                "b = {b} at n = {n} is below the largest motif size {max_r}"
            )));
        }
        let rho_n = grid.rho.eval(n);
        let rho_b = grid.rho.eval(b);
        let cell_seed = rng::derive(grid.seed, n_index as u64);

        // Reference distribution: one pool per n, shared by replicates.
        let reference_model = GraphonModel::new(grid.graphon.clone(), rho_b);
        let reference_config = SubsampleConfig {
            b,
            n_sub: grid.reference_pool,
            motifs: motifs.clone(),
            mode: grid.mode,
            seed: rng::derive(cell_seed, 0),
        };
        let reference =
            reference_sample(&reference_model, &reference_config, n, grid.reference_pool)?;

        // Subsampling distributions: one host per replicate.
        let host_model = GraphonModel::new(grid.graphon.clone(), rho_n);
        let mut per_set_ks: Vec<Vec<f64>> = vec![Vec::new(); grid.motif_sets.len()];
        for rep in 0..grid.replicates {
            let rep_seed = rng::derive(cell_seed, 1 + rep as u64);
            let host = host_model.sample_graph(n, rng::derive(rep_seed, 0));
            let config = SubsampleConfig {
                b,
                n_sub: grid.n_sub,
                motifs: motifs.clone(),
                mode: grid.mode,
                seed: rng::derive(rep_seed, 1),
            };
            let subsampled = rescale(&run_subsampling(&host, &config)?)?;
            for (set_index, set) in grid.motif_sets.iter().enumerate() {
                let columns = column_indices(&motifs, set);
                let ks = ks_distance(
                    &EmpiricalJointCdf::new(select(&subsampled, &columns))?,
                    &EmpiricalJointCdf::new(select(&reference, &columns))?,
                )?;
                per_set_ks[set_index].push(ks);
            }
        }

        let runtime_s = started.elapsed().as_secs_f64();
        for (set_index, set) in grid.motif_sets.iter().enumerate() {
            let values = &per_set_ks[set_index];
            let k = values.len() as f64;
            let mean = values.iter().sum::<f64>() / k;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / (k - 1.0).max(1.0);
            rows.push(KsErrorRow {
                graphon: grid.graphon.name().to_string(),
                n,
                b,
                rho: rho_n,
                motif_set: motif_set_label(set),
                mean_ks: mean,
                se_ks: (var / k).sqrt(),
                runtime_s,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn motif(name: &str) -> Motif {
        Motif::by_name(name).unwrap()
    }

    #[test]
    fn b_rules() {
        assert_eq!(BRule::N23.apply(2000), 159);
        assert_eq!(BRule::Sqrt2.apply(2000), 90);
        assert_eq!(BRule::N23.apply(500), 63);
        assert!("n23".parse::<BRule>().is_ok());
        assert!("bogus".parse::<BRule>().is_err());
    }

    #[test]
    fn grid_validation() {
        let grid = ExperimentGrid {
            graphon: Graphon::constant(),
            n_values: vec![200, 100],
            b_rule: BRule::N23,
            rho: RhoSchedule::constant(0.3),
            motif_sets: vec![vec![motif("edge")]],
            mode: CountMode::NonInduced,
            n_sub: 10,
            replicates: 1,
            reference_pool: 10,
            seed: 0,
        };
        assert!(ks_error_experiment(&grid).is_err());
    }

    #[test]
    fn pipeline_produces_sane_rows() {
        let grid = ExperimentGrid {
            graphon: Graphon::builtin("graphon1").unwrap(),
            n_values: vec![300, 500],
            b_rule: BRule::N23,
            rho: RhoSchedule::parse("0.25*n^-0.1").unwrap(),
            motif_sets: vec![vec![motif("twostar")], vec![motif("twostar"), motif("triangle")]],
            mode: CountMode::NonInduced,
            n_sub: 300,
            replicates: 2,
            reference_pool: 300,
            seed: 12,
        };
        let rows = ks_error_experiment(&grid).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert!((0.0..=1.0).contains(&row.mean_ks), "{}: {}", row.motif_set, row.mean_ks);
            // At these sizes the approximation is already informative.
            assert!(row.mean_ks < 0.5, "{}: {}", row.motif_set, row.mean_ks);
            assert!(row.runtime_s >= 0.0);
        }
        assert_eq!(rows[0].b, BRule::N23.apply(300));
        assert_eq!(rows[0].n, 300);
        assert_eq!(rows[2].n, 500);
    }

    #[test]
    fn rows_deterministic_given_seed() {
        let grid = ExperimentGrid {
            graphon: Graphon::constant(),
            n_values: vec![120],
            b_rule: BRule::Sqrt2,
            rho: RhoSchedule::constant(0.4),
            motif_sets: vec![vec![motif("edge")]],
            mode: CountMode::NonInduced,
            n_sub: 50,
            replicates: 2,
            reference_pool: 50,
            seed: 9,
        };
        let a = ks_error_experiment(&grid).unwrap();
        let b = ks_error_experiment(&grid).unwrap();
        assert_eq!(a[0].mean_ks, b[0].mean_ks);
        assert_eq!(a[0].se_ks, b[0].se_ks);
    }
}
