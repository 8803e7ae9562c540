//! Exact enumeration of self-avoiding walks on `Q^N` and the observables
//! built from the counts.
//!
//! Walks are enumerated in canonical form: coordinates are introduced in the
//! order `0, 1, 2, ...`, so a canonical walk that uses `δ` distinct
//! coordinates stands for `N (N-1) ... (N-δ+1)` actual walks, all with the
//! same endpoint weight. This contains the usual "first step along the first
//! coordinate" reduction and shrinks the search tree by up to `N!`.
//!
//! The search is split at a fixed prefix depth into independent subtrees that
//! run on the rayon pool; the per-subtree tables are summed in prefix order so
//! the result does not depend on the number of threads.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::cube::{CubeFn, Dim};
use crate::error::{Error, Result};
use crate::poly;

/// Dimensions up to which the visited set is a dense bitset.
const BITSET_MAX_DIM: u32 = 25;
const BUDGET_FLUSH: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    /// Maximum number of search-tree nodes before giving up.
    pub budget: u64,
    /// Depth of the canonical prefixes handed out as parallel tasks.
    pub split_depth: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            budget: 20_000_000_000,
            split_depth: 8,
        }
    }
}

impl EnumConfig {
    pub fn with_budget(budget: u64) -> Self {
        EnumConfig {
            budget,
            ..Default::default()
        }
    }
}

/// How many steps to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Steps(usize),
    /// All steps up to `V - 1`; beyond that every count vanishes.
    Full,
}

impl Truncation {
    pub fn max_steps(self, dim: Dim) -> Result<usize> {
        match self {
            Truncation::Steps(n) => Ok(n),
            Truncation::Full => usize::try_from(dim.volume() - 1)
                .ok()
                .filter(|_| dim.n() <= 16)
                .ok_or_else(|| Error::domain(format!("full enumeration of Q^{} is out of reach", dim.n()))),
        }
    }
}

/// `c_n^{(N)}(x)` for every `n <= max_steps`, stored once per Hamming weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SawProfile {
    dim: Dim,
    counts: Vec<Vec<BigInt>>,
}

/// The counts `c_0, ..., c_{n_max}` (totals over all endpoints).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SawSeries {
    dim: Dim,
    coefficients: Vec<BigInt>,
}

impl SawProfile {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn max_steps(&self) -> usize {
        self.counts.len() - 1
    }

    /// Number of `n`-step walks from the origin to one fixed point of weight `w`.
    pub fn count(&self, n: usize, w: u32) -> &BigInt {
        &self.counts[n][w as usize]
    }

    /// Rows indexed by step count, columns by weight.
    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.counts
    }

    /// `c_n(·)` as a dense function.
    pub fn endpoint_counts(&self, n: usize) -> Result<CubeFn<BigInt>> {
        CubeFn::from_weights(self.dim, &self.counts[n])
    }

    /// Collapse to totals `c_n = Σ_w binom(N, w) c_n(w)`.
    pub fn series(&self) -> SawSeries {
        let n_dim = self.dim.n() as u64;
        let coefficients = self
            .counts
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(w, c)| c * poly::binomial(n_dim, w as u64))
                    .sum()
            })
            .collect();
        SawSeries {
            dim: self.dim,
            coefficients,
        }
    }

    pub fn is_full(&self) -> bool {
        self.max_steps() as u64 >= self.dim.volume() - 1
    }

    /// Two-point function `G_z(w) = Σ_n c_n(w) z^n`, one value per weight.
    pub fn two_point_weights(&self, z: &BigRational) -> Vec<BigRational> {
        (0..=self.dim.n() as usize)
            .map(|w| {
                let column: Vec<BigInt> = self.counts.iter().map(|row| row[w].clone()).collect();
                poly::eval_rational(&column, z)
            })
            .collect()
    }
}

impl SawSeries {
    pub fn from_coefficients(dim: Dim, coefficients: Vec<BigInt>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::domain("a susceptibility needs at least c_0"));
        }
        Ok(SawSeries { dim, coefficients })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn max_steps(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// True when every nonzero count is present.
    pub fn is_full(&self) -> bool {
        self.max_steps() as u64 >= self.dim.volume() - 1
    }

    /// `χ_N(z) = Σ_{n <= n_max} c_n z^n`.
    pub fn susceptibility(&self, z: &BigRational) -> BigRational {
        poly::eval_rational(&self.coefficients, z)
    }

    pub fn susceptibility_f64(&self, z: f64) -> f64 {
        poly::eval_f64(&self.coefficients, z)
    }

    /// `χ_N'(z)`.
    pub fn derivative(&self, z: &BigRational) -> BigRational {
        poly::eval_rational(&poly::derivative(&self.coefficients), z)
    }

    pub fn derivative_f64(&self, z: f64) -> f64 {
        poly::eval_f64(&poly::derivative(&self.coefficients), z)
    }

    /// `∂_z [z χ_N(z)] = Σ (n + 1) c_n z^n`.
    pub fn z_chi_derivative(&self, z: &BigRational) -> BigRational {
        poly::eval_rational(&poly::z_derivative_shifted(&self.coefficients), z)
    }

    /// Expected number of vertices `E_z L = χ^{-1} ∂_z[z χ]`.
    pub fn expected_length(&self, z: &BigRational) -> Result<BigRational> {
        check_nonnegative(z)?;
        Ok(self.z_chi_derivative(z) / self.susceptibility(z))
    }
}

fn check_nonnegative(z: &BigRational) -> Result<()> {
    if z.is_negative() {
        return Err(Error::domain(format!("activity z = {z} must be nonnegative")));
    }
    Ok(())
}

enum Visited {
    Bits(Vec<u64>),
    Set(HashSet<u64>),
}

impl Visited {
    fn new(dims: u32) -> Self {
        if dims <= BITSET_MAX_DIM {
            Visited::Bits(vec![0; (1usize << dims).div_ceil(64)])
        } else {
            Visited::Set(HashSet::new())
        }
    }

    #[inline]
    fn contains(&self, v: u64) -> bool {
        match self {
            Visited::Bits(b) => b[(v >> 6) as usize] >> (v & 63) & 1 == 1,
            Visited::Set(s) => s.contains(&v),
        }
    }

    #[inline]
    fn insert(&mut self, v: u64) {
        match self {
            Visited::Bits(b) => b[(v >> 6) as usize] |= 1 << (v & 63),
            Visited::Set(s) => {
                s.insert(v);
            }
        }
    }

    #[inline]
    fn remove(&mut self, v: u64) {
        match self {
            Visited::Bits(b) => b[(v >> 6) as usize] &= !(1 << (v & 63)),
            Visited::Set(s) => {
                s.remove(&v);
            }
        }
    }
}

/// Reduced counts `r[n][δ][w]` of canonical walks.
#[derive(Clone)]
struct Tally {
    max_steps: usize,
    dims: usize,
    cells: Vec<u64>,
}

impl Tally {
    fn new(max_steps: usize, dims: usize) -> Self {
        Tally {
            max_steps,
            dims,
            cells: vec![0; (max_steps + 1) * (dims + 1) * (dims + 1)],
        }
    }

    #[inline]
    fn index(&self, n: usize, delta: usize, w: usize) -> usize {
        (n * (self.dims + 1) + delta) * (self.dims + 1) + w
    }

    #[inline]
    fn bump(&mut self, n: usize, delta: usize, w: usize) {
        let i = self.index(n, delta, w);
        self.cells[i] += 1;
    }

    fn absorb(&mut self, other: &Tally) {
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            *a += b;
        }
    }
}

struct Search<'a> {
    n_dim: u32,
    max_steps: usize,
    visited: Visited,
    tally: Tally,
    local_nodes: u64,
    nodes: &'a AtomicU64,
    abort: &'a AtomicBool,
    budget: u64,
}

impl Search<'_> {
    /// Counts one node; false once the shared budget is exhausted.
    #[inline]
    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes == BUDGET_FLUSH {
            self.flush();
        }
        !self.abort.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        let total = self.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
        self.local_nodes = 0;
        if total > self.budget {
            self.abort.store(true, Ordering::Relaxed);
        }
    }

    fn dfs(&mut self, pos: u64, delta: u32, depth: usize) {
        self.tally
            .bump(depth, delta as usize, pos.count_ones() as usize);
        if depth == self.max_steps || !self.tick() {
            return;
        }
        for c in 0..delta {
            let next = pos ^ (1u64 << c);
            if !self.visited.contains(next) {
                self.visited.insert(next);
                self.dfs(next, delta, depth + 1);
                self.visited.remove(next);
            }
        }
        if delta < self.n_dim {
            // a fresh coordinate always leads to an unvisited point
            let next = pos ^ (1u64 << delta);
            self.visited.insert(next);
            self.dfs(next, delta + 1, depth + 1);
            self.visited.remove(next);
        }
    }
}

/// Canonical prefix: visited points in order, plus the number of coordinates used.
struct Prefix {
    path: Vec<u64>,
    delta: u32,
}

fn collect_prefixes(
    n_dim: u32,
    depth: usize,
    path: &mut Vec<u64>,
    delta: u32,
    tally: &mut Tally,
    out: &mut Vec<Prefix>,
) {
    let pos = *path.last().unwrap();
    let steps = path.len() - 1;
    if steps == depth {
        out.push(Prefix {
            path: path.clone(),
            delta,
        });
        return;
    }
    tally.bump(steps, delta as usize, pos.count_ones() as usize);
    if steps == tally.max_steps {
        return;
    }
    for c in 0..=delta.min(n_dim - 1) {
        let next = pos ^ (1u64 << c);
        if path.contains(&next) {
            continue;
        }
        path.push(next);
        collect_prefixes(n_dim, depth, path, delta.max(c + 1), tally, out);
        path.pop();
    }
}

fn enumerate_reduced(dim: Dim, max_steps: usize, config: &EnumConfig) -> Result<Tally> {
    let n_dim = dim.n();
    let dims = (n_dim as usize).min(max_steps);
    let split = config.split_depth.min(max_steps + 1);

    let mut tally = Tally::new(max_steps, dims);
    let mut prefixes = Vec::new();
    collect_prefixes(n_dim, split, &mut vec![0], 0, &mut tally, &mut prefixes);

    let nodes = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let partials: Vec<Tally> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut search = Search {
                n_dim,
                max_steps,
                visited: Visited::new(dims as u32),
                tally: Tally::new(max_steps, dims),
                local_nodes: 0,
                nodes: &nodes,
                abort: &abort,
                budget: config.budget,
            };
            for &p in &prefix.path {
                search.visited.insert(p);
            }
            search.dfs(*prefix.path.last().unwrap(), prefix.delta, prefix.path.len() - 1);
            search.flush();
            search.tally
        })
        .collect();
    if abort.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            budget: config.budget,
        });
    }
    for partial in &partials {
        tally.absorb(partial);
    }
    Ok(tally)
}

/// Per-weight counts `c_n(x)` for `n <= max_steps`.
pub fn count_saw_by_endpoint(dim: Dim, max_steps: usize, config: &EnumConfig) -> Result<SawProfile> {
    let tally = enumerate_reduced(dim, max_steps, config)?;
    let n_dim = dim.n() as usize;
    let mut counts = vec![vec![BigInt::zero(); n_dim + 1]; max_steps + 1];
    for (n, row) in counts.iter_mut().enumerate() {
        for (w, slot) in row.iter_mut().enumerate().take(tally.dims + 1) {
            let mut total = BigInt::zero();
            for delta in w..=tally.dims {
                let r = tally.cells[tally.index(n, delta, w)];
                if r != 0 {
                    total += poly::falling_factorial(n_dim as u64, delta as u32) * BigInt::from(r);
                }
            }
            // total over the binom(N, w) endpoints of weight w, all equal by symmetry
            let classes = poly::binomial(n_dim as u64, w as u64);
            if !(&total % &classes).is_zero() {
                return Err(Error::Invariant(format!(
                    "{total} walks of length {n} to weight {w} do not split evenly over {classes} endpoints"
                )));
            }
            *slot = total / classes;
        }
    }
    Ok(SawProfile { dim, counts })
}

/// Exact counts `c_0, ..., c_{max_steps}` of self-avoiding walks from the origin.
pub fn count_saw(dim: Dim, max_steps: usize, config: &EnumConfig) -> Result<SawSeries> {
    Ok(count_saw_by_endpoint(dim, max_steps, config)?.series())
}

/// `χ_N(z)` at the given truncation.
pub fn susceptibility(dim: Dim, z: &BigRational, truncation: Truncation, config: &EnumConfig) -> Result<BigRational> {
    check_nonnegative(z)?;
    let n_max = truncation.max_steps(dim)?;
    Ok(count_saw(dim, n_max, config)?.susceptibility(z))
}

/// `G_z(x) = Σ_n c_n(x) z^n` as a dense function.
pub fn two_point(profile: &SawProfile, z: &BigRational) -> Result<CubeFn<BigRational>> {
    check_nonnegative(z)?;
    CubeFn::from_weights(profile.dim, &profile.two_point_weights(z))
}

/// Bubble diagram `B(z) = Σ_x G_z(x)^2`.
pub fn bubble(profile: &SawProfile, z: &BigRational) -> Result<BigRational> {
    check_nonnegative(z)?;
    let n_dim = profile.dim.n() as u64;
    Ok(profile
        .two_point_weights(z)
        .into_iter()
        .enumerate()
        .map(|(w, g)| &g * &g * BigRational::from_integer(poly::binomial(n_dim, w as u64)))
        .sum())
}

/// `E_z L = χ_N(z)^{-1} ∂_z[z χ_N(z)]`, counting vertices rather than steps.
pub fn expected_length(series: &SawSeries, z: &BigRational) -> Result<BigRational> {
    series.expected_length(z)
}

/// Number of Hamilton paths of `Q^N` starting at the origin, `c_{V-1}`.
pub fn hamilton_path_count(dim: Dim, config: &EnumConfig) -> Result<BigInt> {
    let n_max = Truncation::Full.max_steps(dim)?;
    Ok(count_saw(dim, n_max, config)?.coefficients[n_max].clone())
}
