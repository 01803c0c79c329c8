//! Sparse graphon models: the two built-in kernels, normalized so the
//! kernel integrates to one, graph sampling, population moment
//! integrals P_w(R), and the limiting covariance of rescaled moments.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::{self, Motif};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Constant,
    Smooth,
    Nonsmooth,
}

/// A normalized graphon kernel w with int int w = 1.
#[derive(Clone, Debug)]
pub struct Graphon {
    kind: Kind,
    normalization: f64,
    normalization_error: f64,
}

const NORMALIZATION_POINTS: u64 = 10_000_000;

fn raw_kernel(kind: Kind, u: f64, v: f64) -> f64 {
    match kind {
        Kind::Constant => 1.0,
        Kind::Smooth => (-25.0 * (u - v) * (u - v) / 2.0).exp(),
        Kind::Nonsmooth => {
            let du = u - 0.5;
            let dv = v - 0.5;
            0.5 * (0.1 * (du * du + dv * dv) + 0.01).cos() * u.max(v).powf(2.0 / 3.0) + 0.4
        }
    }
}

/// Radical-inverse (van der Corput) value of index i in the given base.
fn radical_inverse(base: u64, mut i: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut factor = inv;
    let mut value = 0.0;
    while i > 0 {
        value += factor * (i % base) as f64;
        i /= base;
        factor *= inv;
    }
    value
}

/// Quasi-random estimate of int int f over the unit square using a
/// 2-D Halton sequence, with a halving-based error proxy.
fn halton_integral_2d(f: impl Fn(f64, f64) -> f64 + Sync) -> (f64, f64) {
    let batch: u64 = 100_000;
    let batches = NORMALIZATION_POINTS / batch;
    let sums: Vec<f64> = (0..batches)
        .into_par_iter()
        .map(|bi| {
            let mut acc = 0.0;
            for k in 0..batch {
                let i = bi * batch + k + 1;
                acc += f(radical_inverse(2, i), radical_inverse(3, i));
            }
            acc
        })
        .collect();
    let total: f64 = sums.iter().sum();
    let half: f64 = sums[..sums.len() / 2].iter().sum();
    let estimate = total / (batches * batch) as f64;
    let half_estimate = half / (batches / 2 * batch) as f64;
    (estimate, 2.0 * (estimate - half_estimate).abs())
}

fn cached_normalization(kind: Kind) -> (f64, f64) {
    static SMOOTH: OnceLock<(f64, f64)> = OnceLock::new();
    static NONSMOOTH: OnceLock<(f64, f64)> = OnceLock::new();
    match kind {
        Kind::Constant => (1.0, 0.0),
        Kind::Smooth => {
            *SMOOTH.get_or_init(|| halton_integral_2d(|u, v| raw_kernel(Kind::Smooth, u, v)))
        }
        Kind::Nonsmooth => *NONSMOOTH
            .get_or_init(|| halton_integral_2d(|u, v| raw_kernel(Kind::Nonsmooth, u, v))),
    }
}

impl Graphon {
    /// The named kernels: "graphon1" (smooth Gaussian ridge) and
    /// "graphon2" (nonsmooth cosine/max kernel).
    pub fn builtin(name: &str) -> Result<Graphon> {
        let kind = match name {
            "graphon1" | "1" => Kind::Smooth,
            "graphon2" | "2" => Kind::Nonsmooth,
            _ => return Err(Error::UnknownGraphon(name.to_string())),
        };
        let (normalization, normalization_error) = cached_normalization(kind);
        Ok(Graphon { kind, normalization, normalization_error })
    }

    /// w identically one.
    pub fn constant() -> Graphon {
        Graphon { kind: Kind::Constant, normalization: 1.0, normalization_error: 0.0 }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::Constant => "constant",
            Kind::Smooth => "graphon1",
            Kind::Nonsmooth => "graphon2",
        }
    }

    /// Normalized kernel value.
    #[inline]
    pub fn value(&self, u: f64, v: f64) -> f64 {
        raw_kernel(self.kind, u, v) / self.normalization
    }

    /// The numerically computed constant dividing the raw kernel, and
    /// the error proxy recorded alongside it.
    pub fn normalization(&self) -> (f64, f64) {
        (self.normalization, self.normalization_error)
    }
}

/// A graphon instantiated at a concrete sparsity value.
#[derive(Clone, Debug)]
pub struct GraphonModel {
    pub graphon: Graphon,
    pub rho: f64,
}

impl GraphonModel {
    pub fn new(graphon: Graphon, rho: f64) -> GraphonModel {
        GraphonModel { graphon, rho }
    }

    /// The clipped kernel h(u, v) = rho w(u, v) 1{rho w(u, v) <= 1}.
    #[inline]
    pub fn h(&self, u: f64, v: f64) -> f64 {
        let x = self.rho * self.graphon.value(u, v);
        if x <= 1.0 {
            x
        } else {
            0.0
        }
    }

    /// Draws a graph: latent uniforms per node, one independent
    /// Bernoulli per pair, all from counter-based streams, so the
    /// result is seed-deterministic and order-invariant.
    pub fn sample_graph(&self, n: usize, seed: u64) -> Graph {
        let xi: Vec<f64> = (0..n).map(|i| rng::node_uniform(seed, i)).collect();
        let rows: Vec<Vec<(usize, usize)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::new();
                for j in i + 1..n {
                    if rng::pair_uniform(seed, i, j) < self.h(xi[i], xi[j]) {
                        row.push((i, j));
                    }
                }
                row
            })
            .collect();
        let edges: Vec<(usize, usize)> = rows.into_iter().flatten().collect();
        Graph::from_edges(n, &edges)
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug)]
pub struct PopulationMoment {
    pub value: f64,
    pub std_error: f64,
    pub n_draws: u64,
}

pub const DEFAULT_MOMENT_DRAWS: u64 = 2_000_000;

/// Monte Carlo estimate of P_w(S): the expectation over i.i.d. uniform
/// latent positions of the product of w over the edges of S. Handles
/// disconnected patterns by the same product integral.
pub fn population_moment_pattern(
    graphon: &Graphon,
    pattern: &Graph,
    n_draws: u64,
    seed: u64,
) -> PopulationMoment {
    let edges = pattern.edges();
    let r = pattern.node_count();
    let batch: u64 = 1 << 14;
    let batches = n_draws.div_ceil(batch);
    let partials: Vec<(f64, f64, u64)> = (0..batches)
        .into_par_iter()
        .map(|bi| {
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            let count = batch.min(n_draws - bi * batch);
            for k in 0..count {
                let draw_seed = rng::derive(seed, bi * batch + k);
                let mut xi = [0.0f64; motif::MAX_PATTERN_NODES];
                for (slot, value) in xi.iter_mut().enumerate().take(r) {
                    *value = rng::node_uniform(draw_seed, slot);
                }
                let product: f64 =
                    edges.iter().map(|&(a, b)| graphon.value(xi[a], xi[b])).product();
                sum += product;
                sumsq += product * product;
            }
            (sum, sumsq, count)
        })
        .collect();
    let (sum, sumsq, total) = partials
        .iter()
        .fold((0.0, 0.0, 0u64), |(s, q, c), &(bs, bq, bc)| (s + bs, q + bq, c + bc));
    let mean = sum / total as f64;
    let variance = (sumsq / total as f64 - mean * mean).max(0.0);
    PopulationMoment { value: mean, std_error: (variance / total as f64).sqrt(), n_draws: total }
}

/// P_w(R) for a motif.
pub fn population_moment(
    graphon: &Graphon,
    motif: &Motif,
    n_draws: u64,
    seed: u64,
) -> PopulationMoment {
    population_moment_pattern(graphon, motif.template(), n_draws, seed)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// r!/|Aut(R)| P_w(R): the limit of the rescaled expected moment.
pub fn theoretical_mean(
    graphon: &Graphon,
    motif: &Motif,
    n_draws: u64,
    seed: u64,
) -> PopulationMoment {
    let scale = factorial(motif.node_count()) / motif.aut_count() as f64;
    let base = population_moment(graphon, motif, n_draws, seed);
    PopulationMoment {
        value: scale * base.value,
        std_error: scale * base.std_error,
        n_draws: base.n_draws,
    }
}

/// Limit of cov[sqrt(n) rho^-r U_R, sqrt(n) rho^-r' U_R'] under the
/// sparse graphon model: the q=1 merge terms minus the q=0 terms,
/// each weighted by c_S r! r'! (r r' for q=0) / |Aut(S)| P_w(S).
pub fn limiting_covariance(
    graphon: &Graphon,
    left: &Motif,
    right: &Motif,
    n_draws: u64,
    seed: u64,
) -> Result<PopulationMoment> {
    let table = crate::algebra::merge_table(left, right)?;
    let r = left.node_count();
    let rp = right.node_count();
    let base = factorial(r) * factorial(rp);
    let mut value = 0.0;
    let mut error_sq = 0.0;
    let mut total_draws = 0;
    for (index, entry) in table.entries.iter().enumerate() {
        let coef = match entry.q {
            1 => entry.multiplicity as f64 * base / entry.aut_count as f64,
            0 => -(entry.multiplicity as f64) * base * (r * rp) as f64 / entry.aut_count as f64,
            _ => continue,
        };
        let pw = population_moment_pattern(
            graphon,
            &entry.merged,
            n_draws,
            rng::derive(seed, index as u64),
        );
        value += coef * pw.value;
        error_sq += (coef * pw.std_error).powi(2);
        total_draws += pw.n_draws;
    }
    Ok(PopulationMoment { value, std_error: error_sq.sqrt(), n_draws: total_draws })
}

/// A sparsity schedule: a product of constants and powers of n, parsed
/// from expressions like "0.25*n^-0.1" or "0.15".
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RhoSchedule {
    source: String,
    factors: Vec<Factor>,
}

#[derive(Clone, Copy, Debug)]
enum Factor {
    Constant(f64),
    PowerOfN(f64),
}

impl RhoSchedule {
    pub fn parse(input: &str) -> Result<RhoSchedule> {
        let bad = |reason: &str| Error::ScheduleParse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut factors = Vec::new();
        for raw in input.split('*') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(bad("empty factor"));
            }
            let (base, exponent) = match term.split_once('^') {
                Some((b, e)) => {
                    let exp: f64 =
                        e.trim().parse().map_err(|_| bad("exponent is not a number"))?;
                    (b.trim(), Some(exp))
                }
                None => (term, None),
            };
            if base == "n" {
                factors.push(Factor::PowerOfN(exponent.unwrap_or(1.0)));
            } else {
                let value: f64 = base.parse().map_err(|_| bad("factor is not a number or n"))?;
                factors.push(Factor::Constant(value.powf(exponent.unwrap_or(1.0))));
            }
        }
        Ok(RhoSchedule { source: input.to_string(), factors })
    }

    /// Constant schedule.
    pub fn constant(value: f64) -> RhoSchedule {
        RhoSchedule { source: format!("{value}"), factors: vec![Factor::Constant(value)] }
    }

    pub fn eval(&self, n: usize) -> f64 {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Constant(c) => *c,
                Factor::PowerOfN(p) => (n as f64).powf(*p),
            })
            .product()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl std::fmt::Display for RhoSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.source)
    }
}

impl TryFrom<String> for RhoSchedule {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        RhoSchedule::parse(&value)
    }
}

impl From<RhoSchedule> for String {
    fn from(s: RhoSchedule) -> String {
        s.source
    }
}

impl std::str::FromStr for RhoSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RhoSchedule::parse(s)
    }
}
