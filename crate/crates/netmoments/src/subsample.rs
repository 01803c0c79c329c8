//! Uniform node subsampling for multivariate network moments, the
//! rescaled subsampling statistics, empirical joint CDFs, and
//! Kolmogorov-Smirnov distances.

use rand::seq::index;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::graphon::GraphonModel;
use crate::motif::{self, CountMode, Motif};
use crate::rng;

/// Row-major sample matrix: one replicate per row, one motif per column.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl SampleMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> SampleMatrix {
        assert_eq!(rows * cols, data.len());
        SampleMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> SampleMatrix {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        SampleMatrix::new(nrows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> SampleMatrix {
        let data = self
            .iter_rows()
            .flat_map(|row| columns.iter().map(move |&c| row[c]))
            .collect();
        SampleMatrix::new(self.rows, columns.len(), data)
    }

    pub fn column_mean(&self, j: usize) -> f64 {
        self.column(j).iter().sum::<f64>() / self.rows as f64
    }

    pub fn column_covariance(&self, a: usize, b: usize) -> f64 {
        let xs = self.column(a);
        let ys = self.column(b);
        let k = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / k;
        let my = ys.iter().sum::<f64>() / k;
        xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / k
    }
}

/// Configuration for one subsampling run.
#[derive(Clone, Debug)]
pub struct SubsampleConfig {
    /// Subsample size b.
    pub b: usize,
    /// Replication count N_sub.
    pub n_sub: usize,
    /// Ordered motif list; columns follow this order.
    pub motifs: Vec<Motif>,
    pub mode: CountMode,
    /// Master seed; replicate i draws from stream (seed, i).
    pub seed: u64,
}

impl SubsampleConfig {
    fn validate(&self, n: usize) -> Result<()> {
        let max_r = self.motifs.iter().map(Motif::node_count).max().unwrap_or(0);
        if self.motifs.is_empty() || self.n_sub == 0 {
            return Err(Error::EmptySample);
        }
        if self.b < max_r || self.b > n {
            return Err(Error::SubsampleSize { b: self.b, min: max_r, max: n });
        }
        Ok(())
    }
}

/// Raw output of the subsampling algorithm.
#[derive(Clone, Debug)]
pub struct MomentSample {
    /// N_sub x m raw moments of the induced subgraphs.
    pub y: SampleMatrix,
    /// Edge density of the host graph.
    pub rho_hat: f64,
    /// U_R(G) for each motif, same order as the columns.
    pub host_moments: Vec<f64>,
    pub config: SubsampleConfig,
}

/// Rescaled rows: sqrt(b) [rho^-r U(sub) - rho^-r U(host)] per motif.
#[derive(Clone, Debug)]
pub struct RescaledSample {
    pub z: SampleMatrix,
    pub motif_names: Vec<String>,
}

/// Draws uniform b-subsets, induces subgraphs, and computes all motif
/// moments per replicate. Deterministic given the master seed; the
/// replicate order is stable regardless of worker count.
pub fn run_subsampling(g: &Graph, config: &SubsampleConfig) -> Result<MomentSample> {
    let n = g.node_count();
    config.validate(n)?;
    let host_moments: Vec<f64> = config
        .motifs
        .iter()
        .map(|m| motif::network_moment(g, m, config.mode))
        .collect::<Result<_>>()?;
    let rho_hat = g.edge_density()?;

    let rows: Vec<Vec<f64>> = (0..config.n_sub)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream_rng(config.seed, i as u64);
            let picked = index::sample(&mut rng, n, config.b).into_vec();
            let nodes = NodeSet::from_unsorted(picked);
            let sub = g.induced_subgraph(&nodes)?;
            config
                .motifs
                .iter()
                .map(|m| motif::network_moment(&sub, m, config.mode))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    Ok(MomentSample { y: SampleMatrix::from_rows(rows), rho_hat, host_moments, config: config.clone() })
}

/// rho^-r u with the convention that a zero count under a degenerate
/// density contributes zero rather than NaN.
fn rescaled_moment(rho: f64, edge_count: usize, u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u / rho.powi(edge_count as i32)
    }
}

/// Applies the subsampling-CDF rescaling to a raw moment sample.
pub fn rescale(sample: &MomentSample) -> Result<RescaledSample> {
    if sample.rho_hat <= 0.0 {
        return Err(Error::DegenerateHost);
    }
    let b = sample.config.b as f64;
    let efraks: Vec<usize> = sample.config.motifs.iter().map(Motif::edge_count).collect();
    let centers: Vec<f64> = sample
        .host_moments
        .iter()
        .zip(&efraks)
        .map(|(&u, &e)| u / sample.rho_hat.powi(e as i32))
        .collect();
    let data = sample
        .y
        .iter_rows()
        .flat_map(|row| {
            row.iter().enumerate().map(|(j, &u)| {
                b.sqrt() * (u / sample.rho_hat.powi(efraks[j] as i32) - centers[j])
            })
        })
        .collect();
    Ok(RescaledSample {
        z: SampleMatrix::new(sample.y.rows(), sample.y.cols(), data),
        motif_names: sample.config.motifs.iter().map(|m| m.name().to_string()).collect(),
    })
}

/// Draws N_sub independent size-b graphs from the model and builds the
/// reference (graphon sampling) distribution sample:
/// sqrt(b (1 - b/n_host)) [rho_hat^-r U(draw) - mu], with mu the
/// rescaled expected moment estimated from an auxiliary pool of
/// `mu_pool` draws on its own stream.
pub fn reference_sample(
    model: &GraphonModel,
    config: &SubsampleConfig,
    n_host: usize,
    mu_pool: usize,
) -> Result<RescaledSample> {
    config.validate(config.b)?;
    let b = config.b;
    let efraks: Vec<usize> = config.motifs.iter().map(Motif::edge_count).collect();
    let pool_seed = rng::derive(config.seed, 1);
    let draw_seed = rng::derive(config.seed, 2);

    let moments_of = |graph_seed: u64| -> Result<Vec<f64>> {
        let g = model.sample_graph(b, graph_seed);
        config.motifs.iter().map(|m| motif::network_moment(&g, m, config.mode)).collect()
    };

    // mu_j = rho_b^-r_j E[U_j] with the model's true rho.
    let pool: Vec<Vec<f64>> = (0..mu_pool)
        .into_par_iter()
        .map(|k| moments_of(rng::derive(pool_seed, k as u64)))
        .collect::<Result<_>>()?;
    let mu: Vec<f64> = (0..config.motifs.len())
        .map(|j| {
            let mean = pool.iter().map(|row| row[j]).sum::<f64>() / mu_pool as f64;
            rescaled_moment(model.rho, efraks[j], mean)
        })
        .collect();

    let scale = (b as f64 * (1.0 - b as f64 / n_host as f64)).sqrt();
    let rows: Vec<Vec<f64>> = (0..config.n_sub)
        .into_par_iter()
        .map(|i| {
            let g = model.sample_graph(b, rng::derive(draw_seed, i as u64));
            let rho_hat = g.edge_density()?;
            config
                .motifs
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let u = motif::network_moment(&g, m, config.mode)?;
                    Ok(scale * (rescaled_moment(rho_hat, efraks[j], u) - mu[j]))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    Ok(RescaledSample {
        z: SampleMatrix::from_rows(rows),
        motif_names: config.motifs.iter().map(|m| m.name().to_string()).collect(),
    })
}

/// An empirical joint CDF over sample rows: evaluation returns the
/// fraction of rows coordinatewise <= the query point.
#[derive(Clone, Debug)]
pub struct EmpiricalJointCdf {
    points: SampleMatrix,
}

impl EmpiricalJointCdf {
    pub fn new(points: SampleMatrix) -> Result<EmpiricalJointCdf> {
        if points.rows() == 0 {
            return Err(Error::EmptySample);
        }
        Ok(EmpiricalJointCdf { points })
    }

    pub fn dimension(&self) -> usize {
        self.points.cols()
    }

    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.rows() == 0
    }

    pub fn evaluate(&self, query: &[f64]) -> f64 {
        assert_eq!(query.len(), self.points.cols());
        let hits = self
            .points
            .iter_rows()
            .filter(|row| row.iter().zip(query).all(|(x, q)| x <= q))
            .count();
        hits as f64 / self.points.rows() as f64
    }

    pub fn points(&self) -> &SampleMatrix {
        &self.points
    }
}

/// Linear-interpolation empirical quantile (R type 7).
pub fn empirical_quantile(values: &[f64], p: f64) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = p.clamp(0.0, 1.0) * (sorted.len() as f64 - 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Kolmogorov-Smirnov distance between two empirical joint CDFs:
/// the sup of |A - B| over the pooled sample points of both. Exact in
/// one dimension; the standard computable surrogate above it.
pub fn ks_distance(a: &EmpiricalJointCdf, b: &EmpiricalJointCdf) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch { left: a.dimension(), right: b.dimension() });
    }
    let pooled: Vec<&[f64]> = a.points.iter_rows().chain(b.points.iter_rows()).collect();
    let sup = pooled
        .par_iter()
        .map(|t| (a.evaluate(t) - b.evaluate(t)).abs())
        .reduce(|| 0.0, f64::max);
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::Graphon;
    use crate::oracle;

    fn motifs(names: &[&str]) -> Vec<Motif> {
        names.iter().map(|n| Motif::by_name(n).unwrap()).collect()
    }

    fn config(b: usize, n_sub: usize, names: &[&str], seed: u64) -> SubsampleConfig {
        SubsampleConfig { b, n_sub, motifs: motifs(names), mode: CountMode::NonInduced, seed }
    }

    #[test]
    fn b_equals_n_reproduces_host_moments() {
        let g = oracle::er_graph(8, 0.5, 1);
        let sample = run_subsampling(&g, &config(8, 10, &["edge", "triangle"], 5)).unwrap();
        for row in sample.y.iter_rows() {
            assert_eq!(row, sample.host_moments.as_slice());
        }
        // And the rescaled matrix is identically zero.
        let z = rescale(&sample).unwrap();
        assert!(z.z.iter_rows().all(|row| row.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn p4_column_means_match_enumeration() {
        let g = Graph::path(4);
        let sample = run_subsampling(&g, &config(3, 40_000, &["edge", "twostar"], 9)).unwrap();
        // Exact means from the 4 subsets are 0.5 and 0.5; the edge
        // column has variance 1/36, the twostar column 1/4.
        for (j, exact_var) in [(0, 1.0 / 36.0), (1, 0.25)] {
            let mean = sample.y.column_mean(j);
            let se = (exact_var / 40_000f64).sqrt();
            assert!((mean - 0.5).abs() < 3.0 * se, "col {j}: {mean}");
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let g = oracle::er_graph(30, 0.3, 2);
        let cfg = config(10, 50, &["edge", "twostar", "triangle"], 77);
        let a = run_subsampling(&g, &cfg).unwrap();
        let b = run_subsampling(&g, &cfg).unwrap();
        assert_eq!(a.y, b.y);
    }

    #[test]
    fn config_validation() {
        let g = oracle::er_graph(6, 0.5, 3);
        assert!(run_subsampling(&g, &config(7, 5, &["edge"], 0)).is_err());
        assert!(run_subsampling(&g, &config(2, 5, &["triangle"], 0)).is_err());
        assert!(run_subsampling(&g, &config(0, 5, &["edge"], 0)).is_err());
    }

    #[test]
    fn rescale_complete_host_is_zero() {
        let g = Graph::complete(10);
        let sample = run_subsampling(&g, &config(4, 25, &["edge", "triangle"], 3)).unwrap();
        let z = rescale(&sample).unwrap();
        assert!(z.z.iter_rows().all(|row| row.iter().all(|&v| v.abs() < 1e-12)));
    }

    #[test]
    fn rescale_rejects_empty_host() {
        let g = Graph::empty(6);
        let sample = run_subsampling(&g, &config(3, 5, &["edge"], 3)).unwrap();
        match rescale(&sample) {
            Err(Error::DegenerateHost) => {}
            other => panic!("expected degenerate host, got {other:?}"),
        }
    }

    #[test]
    fn rescale_single_replicate_formula() {
        // One replicate with y = U + delta for the edge motif gives
        // z = sqrt(b) delta / rho.
        let g = oracle::er_graph(12, 0.5, 8);
        let sample = run_subsampling(&g, &config(5, 1, &["edge"], 21)).unwrap();
        let z = rescale(&sample).unwrap();
        let delta = sample.y.row(0)[0] - sample.host_moments[0];
        let expected = (5.0f64).sqrt() * delta / sample.rho_hat;
        assert!((z.z.row(0)[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn column_means_converge_at_exact_covariance_rate() {
        // Monte Carlo column means are within 4 z of the exact mean,
        // with the exact subsample variance setting the scale.
        let g = oracle::er_graph(9, 0.5, 14);
        let names = ["edge", "twostar", "triangle"];
        let cfg = config(5, 100_000, &names, 15);
        let sample = run_subsampling(&g, &cfg).unwrap();
        for (j, name) in names.iter().enumerate() {
            let m = Motif::by_name(name).unwrap();
            let exact_mean = crate::algebra::subsample_expectation(&g, &m, 5).unwrap();
            let exact_var = crate::algebra::subsample_covariance(&g, &m, &m, 5).unwrap();
            let z = (sample.y.column_mean(j) - exact_mean) / (exact_var / 100_000f64).sqrt();
            assert!(z.abs() < 4.0, "{name}: z = {z}");
        }
    }

    #[test]
    fn column_covariances_match_exact_formula() {
        let g = oracle::er_graph(9, 0.5, 14);
        let names = ["edge", "twostar"];
        let sample = run_subsampling(&g, &config(5, 100_000, &names, 16)).unwrap();
        for a in 0..2 {
            for b in a..2 {
                let ma = Motif::by_name(names[a]).unwrap();
                let mb = Motif::by_name(names[b]).unwrap();
                let exact = crate::algebra::subsample_covariance(&g, &ma, &mb, 5).unwrap();
                let mc = sample.y.column_covariance(a, b);
                // Crude moment-based scale for the error of a sample
                // covariance at this replication count.
                let scale = (exact.abs() + 1e-3) / (100_000f64).sqrt() * 10.0;
                assert!((mc - exact).abs() < 4.0 * scale, "{a},{b}: {mc} vs {exact}");
            }
        }
    }

    #[test]
    fn reference_sample_constant_full_density_is_zero() {
        let model = GraphonModel::new(Graphon::constant(), 1.0);
        let cfg = config(5, 20, &["edge", "triangle"], 33);
        let sample = reference_sample(&model, &cfg, 50, 100).unwrap();
        assert!(sample.z.iter_rows().all(|row| row.iter().all(|&v| v.abs() < 1e-12)));
    }

    #[test]
    fn reference_sample_scaling_contract() {
        let model = GraphonModel::new(Graphon::builtin("graphon1").unwrap(), 0.3);
        let cfg = config(20, 30, &["edge", "twostar"], 4);
        let a = reference_sample(&model, &cfg, 40, 200).unwrap();
        let b = reference_sample(&model, &cfg, 4_000_000, 200).unwrap();
        let expected = ((1.0 - 20.0 / 40.0) / (1.0 - 20.0 / 4_000_000.0f64)).sqrt();
        for (ra, rb) in a.z.iter_rows().zip(b.z.iter_rows()) {
            for (x, y) in ra.iter().zip(rb) {
                if y.abs() > 1e-12 {
                    assert!((x / y - expected).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn reference_sample_centering() {
        let rho = 0.25 * 2000f64.powf(-0.1);
        let model = GraphonModel::new(Graphon::builtin("graphon1").unwrap(), rho);
        let cfg = config(159, 400, &["edge", "twostar"], 6);
        let sample = reference_sample(&model, &cfg, 2000, 2000).unwrap();
        for j in 0..2 {
            let col = sample.z.column(j);
            let mean = col.iter().sum::<f64>() / col.len() as f64;
            let var = col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
                / (col.len() - 1) as f64;
            let se = (var / col.len() as f64).sqrt();
            // The mu pool contributes comparable noise; allow both.
            assert!(mean.abs() < 4.0 * se + 0.05, "col {j}: mean {mean}, se {se}");
        }
    }

    #[test]
    fn cdf_evaluation_basics() {
        let m = SampleMatrix::from_rows(vec![vec![1.0], vec![2.0], vec![3.0]]);
        let cdf = EmpiricalJointCdf::new(m).unwrap();
        assert_eq!(cdf.evaluate(&[2.0]), 2.0 / 3.0);
        assert_eq!(cdf.evaluate(&[3.0]), 1.0);
        assert_eq!(cdf.evaluate(&[0.5]), 0.0);
    }

    #[test]
    fn cdf_monotone_in_each_coordinate() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![rng::node_uniform(3, i), rng::node_uniform(4, i)])
            .collect();
        let cdf = EmpiricalJointCdf::new(SampleMatrix::from_rows(rows)).unwrap();
        for i in 0..20 {
            let q = [rng::node_uniform(5, i), rng::node_uniform(6, i)];
            let base = cdf.evaluate(&q);
            assert!(cdf.evaluate(&[q[0] + 0.1, q[1]]) >= base);
            assert!(cdf.evaluate(&[q[0], q[1] + 0.1]) >= base);
        }
    }

    #[test]
    fn ks_distance_examples() {
        let a = EmpiricalJointCdf::new(SampleMatrix::from_rows(vec![
            vec![1.0],
            vec![2.0],
            vec![3.0],
        ]))
        .unwrap();
        let same = EmpiricalJointCdf::new(a.points().clone()).unwrap();
        assert_eq!(ks_distance(&a, &same).unwrap(), 0.0);

        let b = EmpiricalJointCdf::new(SampleMatrix::from_rows(vec![
            vec![2.0],
            vec![3.0],
            vec![4.0],
        ]))
        .unwrap();
        assert!((ks_distance(&a, &b).unwrap() - 1.0 / 3.0).abs() < 1e-15);

        let lo = EmpiricalJointCdf::new(SampleMatrix::from_rows(vec![vec![0.0], vec![1.0]]))
            .unwrap();
        let hi = EmpiricalJointCdf::new(SampleMatrix::from_rows(vec![vec![10.0], vec![11.0]]))
            .unwrap();
        assert_eq!(ks_distance(&lo, &hi).unwrap(), 1.0);

        let two_dim =
            EmpiricalJointCdf::new(SampleMatrix::from_rows(vec![vec![0.0, 0.0]])).unwrap();
        assert!(ks_distance(&a, &two_dim).is_err());
    }

    #[test]
    fn ks_distance_symmetric_and_bounded() {
        let rows_a: Vec<Vec<f64>> =
            (0..30).map(|i| vec![rng::node_uniform(7, i), rng::node_uniform(8, i)]).collect();
        let rows_b: Vec<Vec<f64>> = (0..50)
            .map(|i| vec![rng::node_uniform(9, i) * 2.0, rng::node_uniform(10, i)])
            .collect();
        let a = EmpiricalJointCdf::new(SampleMatrix::from_rows(rows_a)).unwrap();
        let b = EmpiricalJointCdf::new(SampleMatrix::from_rows(rows_b)).unwrap();
        let d_ab = ks_distance(&a, &b).unwrap();
        let d_ba = ks_distance(&b, &a).unwrap();
        assert_eq!(d_ab, d_ba);
        assert!((0.0..=1.0).contains(&d_ab));
    }

    #[test]
    fn same_generator_ks_is_small() {
        // Two runs of the algorithm on the same host draw from the
        // same distribution: the two-sample KS distance sits within
        // the 2/sqrt(N) two-sample scale, and identical seeds give 0.
        let g = oracle::er_graph(300, 0.25, 19);
        let base = config(45, 400, &["twostar", "triangle"], 0);
        let a = rescale(
            &run_subsampling(&g, &SubsampleConfig { seed: 1, ..base.clone() }).unwrap(),
        )
        .unwrap();
        let b = rescale(
            &run_subsampling(&g, &SubsampleConfig { seed: 2, ..base.clone() }).unwrap(),
        )
        .unwrap();
        for cols in [vec![0usize], vec![1], vec![0, 1]] {
            let ka = EmpiricalJointCdf::new(a.z.select_columns(&cols)).unwrap();
            let kb = EmpiricalJointCdf::new(b.z.select_columns(&cols)).unwrap();
            let d = ks_distance(&ka, &kb).unwrap();
            assert!(d <= 2.0 / (400f64).sqrt(), "cols {cols:?}: {d}");
        }
        let again = rescale(
            &run_subsampling(&g, &SubsampleConfig { seed: 1, ..base.clone() }).unwrap(),
        )
        .unwrap();
        let ka = EmpiricalJointCdf::new(a.z.clone()).unwrap();
        let kb = EmpiricalJointCdf::new(again.z.clone()).unwrap();
        assert_eq!(ks_distance(&ka, &kb).unwrap(), 0.0);
    }

    #[test]
    fn unbiasedness_against_exhaustive_enumeration() {
        let g = oracle::er_graph(7, 0.5, 41);
        for name in ["edge", "twostar", "triangle"] {
            let m = Motif::by_name(name).unwrap();
            for b in m.node_count()..=7 {
                let mean = oracle::enumerated_subsample_mean(&g, &m, b);
                let exact = crate::algebra::subsample_expectation(&g, &m, b).unwrap();
                assert!((mean - exact).abs() < 1e-12, "{name} b={b}");
            }
        }
    }
}
