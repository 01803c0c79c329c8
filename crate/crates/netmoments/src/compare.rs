//! Unmatchable-network comparison workflows.
//!
//! Case 1 handles highly imbalanced sizes: subsample the large network
//! at the small network's size and locate the small network's observed
//! moment vector inside the subsampling cloud. Case 2 handles
//! comparable sizes: subsample both networks at a common small b and
//! compare the two moment clouds by KS distances. Conditional slices
//! carve a window around a target value of one moment and summarize
//! the others inside it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::{self, CountMode, Motif};
use crate::rng;
use crate::subsample::{
    empirical_quantile, ks_distance, run_subsampling, EmpiricalJointCdf, MomentSample,
    SampleMatrix, SubsampleConfig,
};

/// Rows of a sample matrix whose conditioning coordinate lies within
/// +-bandwidth of the target.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionalSlice {
    pub cond_index: usize,
    pub target: f64,
    pub bandwidth: f64,
    /// Indices of the selected rows, in row order.
    pub rows: Vec<usize>,
    pub count: usize,
    /// Quantile summaries of every non-conditioning column.
    pub columns: Vec<SliceColumnSummary>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SliceColumnSummary {
    pub column: usize,
    pub motif: String,
    pub quantiles: Vec<(f64, f64)>,
}

const SLICE_QUANTILES: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// Selects the rows of `y` with |y[row, cond_index] - target| <= bandwidth.
pub fn conditional_slice(
    y: &SampleMatrix,
    motif_names: &[String],
    cond_index: usize,
    target: f64,
    bandwidth: f64,
) -> Result<ConditionalSlice> {
    assert!(bandwidth > 0.0, "bandwidth must be positive");
    let rows: Vec<usize> = (0..y.rows())
        .filter(|&i| (y.row(i)[cond_index] - target).abs() <= bandwidth)
        .collect();
    if rows.is_empty() {
        return Err(Error::EmptySlice { bandwidth });
    }
    let columns = (0..y.cols())
        .filter(|&j| j != cond_index)
        .map(|j| {
            let values: Vec<f64> = rows.iter().map(|&i| y.row(i)[j]).collect();
            SliceColumnSummary {
                column: j,
                motif: motif_names[j].clone(),
                quantiles: SLICE_QUANTILES
                    .iter()
                    .map(|&p| (p, empirical_quantile(&values, p)))
                    .collect(),
            }
        })
        .collect();
    Ok(ConditionalSlice {
        cond_index,
        target,
        bandwidth,
        count: rows.len(),
        rows,
        columns,
    })
}

/// Rule-of-thumb slice bandwidth: half the robust sigma (IQR/1.349)
/// shrunk by N^(-1/5).
pub fn default_bandwidth(column: &[f64]) -> f64 {
    let iqr = empirical_quantile(column, 0.75) - empirical_quantile(column, 0.25);
    let n = column.len() as f64;
    let width = 0.5 * iqr / 1.349 * n.powf(-0.2);
    if width > 0.0 {
        width
    } else {
        // Degenerate column; fall back to a tiny absolute window.
        1e-12
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Case1Marginal {
    pub motif: String,
    pub observed: f64,
    /// Fraction of subsample replicates with column value <= observed.
    pub percentile: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Case1Report {
    pub marginals: Vec<Case1Marginal>,
    /// Fraction of replicate rows coordinatewise <= the observed vector.
    pub joint_fraction_below: f64,
    /// Fraction of replicate rows coordinatewise >= the observed vector.
    pub joint_fraction_above: f64,
    /// Slice of the cloud around the observed value of the first motif.
    pub conditional: Option<ConditionalSlice>,
    pub host_rho_hat: f64,
    pub host_moments: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Case2Marginal {
    pub motif: String,
    pub ks: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Case2Report {
    pub marginals: Vec<Case2Marginal>,
    pub joint_ks: f64,
    pub rho_hat_a: f64,
    pub rho_hat_b: f64,
}

/// Versioned comparison output; the JSON schema the CLI writes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub mode: String,
    pub count_mode: CountMode,
    pub motifs: Vec<String>,
    pub n_sub: usize,
    pub b: usize,
    pub seed: u64,
    pub sizes: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case1: Option<Case1Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case2: Option<Case2Report>,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Case 1 output bundle: the report plus the raw cloud for export.
pub struct Case1Outcome {
    pub report: ComparisonReport,
    pub cloud: MomentSample,
}

/// Subsamples the large network at b = n_small and reports where the
/// small network's observed moments sit inside the cloud.
pub fn case1_compare(
    g_large: &Graph,
    g_small: &Graph,
    motifs: &[Motif],
    n_sub: usize,
    mode: CountMode,
    seed: u64,
    slice_bandwidth: Option<f64>,
) -> Result<Case1Outcome> {
    let max_r = motifs.iter().map(Motif::node_count).max().unwrap_or(0);
    if g_large.node_count() <= g_small.node_count() || g_small.node_count() < max_r {
        return Err(Error::ComparisonSizes);
    }
    let config = SubsampleConfig {
        b: g_small.node_count(),
        n_sub,
        motifs: motifs.to_vec(),
        mode,
        seed,
    };
    let cloud = run_subsampling(g_large, &config)?;
    let observed: Vec<f64> =
        motifs.iter().map(|m| motif::network_moment(g_small, m, mode)).collect::<Result<_>>()?;

    let marginals: Vec<Case1Marginal> = motifs
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let column = cloud.y.column(j);
            let below = column.iter().filter(|&&v| v <= observed[j]).count();
            Case1Marginal {
                motif: m.name().to_string(),
                observed: observed[j],
                percentile: below as f64 / column.len() as f64,
            }
        })
        .collect();

    let rows = cloud.y.rows();
    let below = cloud
        .y
        .iter_rows()
        .filter(|row| row.iter().zip(&observed) .all(|(v, o)| v <= o))
        .count();
    let above = cloud
        .y
        .iter_rows()
        .filter(|row| row.iter().zip(&observed).all(|(v, o)| v >= o))
        .count();

    let motif_names: Vec<String> = motifs.iter().map(|m| m.name().to_string()).collect();
    let conditional = if motifs.len() >= 2 {
        let bandwidth =
            slice_bandwidth.unwrap_or_else(|| default_bandwidth(&cloud.y.column(0)));
        conditional_slice(&cloud.y, &motif_names, 0, observed[0], bandwidth).ok()
    } else {
        None
    };

    let report = ComparisonReport {
        schema_version: REPORT_SCHEMA_VERSION,
        mode: "case1".to_string(),
        count_mode: mode,
        motifs: motif_names,
        n_sub,
        b: config.b,
        seed,
        sizes: (g_large.node_count(), g_small.node_count()),
        case1: Some(Case1Report {
            marginals,
            joint_fraction_below: below as f64 / rows as f64,
            joint_fraction_above: above as f64 / rows as f64,
            conditional,
            host_rho_hat: cloud.rho_hat,
            host_moments: cloud.host_moments.clone(),
        }),
        case2: None,
    };
    Ok(Case1Outcome { report, cloud })
}

/// Case 2 output bundle: the report plus both clouds.
pub struct Case2Outcome {
    pub report: ComparisonReport,
    pub cloud_a: MomentSample,
    pub cloud_b: MomentSample,
}

/// Subsamples both networks at the same b and compares the raw moment
/// clouds by marginal and joint KS distances.
pub fn case2_compare(
    g_a: &Graph,
    g_b: &Graph,
    b: usize,
    motifs: &[Motif],
    n_sub: usize,
    mode: CountMode,
    seed: u64,
) -> Result<Case2Outcome> {
    let max_r = motifs.iter().map(Motif::node_count).max().unwrap_or(0);
    if b < max_r || b > g_a.node_count().min(g_b.node_count()) {
        return Err(Error::SubsampleSize {
            b,
            min: max_r,
            max: g_a.node_count().min(g_b.node_count()),
        });
    }
    let base = SubsampleConfig { b, n_sub, motifs: motifs.to_vec(), mode, seed: 0 };
    let cloud_a = run_subsampling(
        g_a,
        &SubsampleConfig { seed: rng::derive(seed, 1), ..base.clone() },
    )?;
    let cloud_b = run_subsampling(
        g_b,
        &SubsampleConfig { seed: rng::derive(seed, 2), ..base.clone() },
    )?;

    let marginals: Vec<Case2Marginal> = motifs
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let a = EmpiricalJointCdf::new(cloud_a.y.select_columns(&[j]))?;
            let bb = EmpiricalJointCdf::new(cloud_b.y.select_columns(&[j]))?;
            Ok(Case2Marginal { motif: m.name().to_string(), ks: ks_distance(&a, &bb)? })
        })
        .collect::<Result<_>>()?;
    let joint_ks = ks_distance(
        &EmpiricalJointCdf::new(cloud_a.y.clone())?,
        &EmpiricalJointCdf::new(cloud_b.y.clone())?,
    )?;

    let report = ComparisonReport {
        schema_version: REPORT_SCHEMA_VERSION,
        mode: "case2".to_string(),
        count_mode: mode,
        motifs: motifs.iter().map(|m| m.name().to_string()).collect(),
        n_sub,
        b,
        seed,
        sizes: (g_a.node_count(), g_b.node_count()),
        case1: None,
        case2: Some(Case2Report {
            marginals,
            joint_ks,
            rho_hat_a: cloud_a.rho_hat,
            rho_hat_b: cloud_b.rho_hat,
        }),
    };
    Ok(Case2Outcome { report, cloud_a, cloud_b })
}
