//! The lace-expansion coefficients `π_m^{(M)}(x)` on `Q^N`, the recursion they
//! satisfy, and the `N`-free counts `π_{k,δ}^{(M)}`.
//!
//! A walk is reduced to its coincidence pattern: bit `(s, t)` is set when
//! `ω(s) = ω(t)`. A lace `L` contributes to the walk when all its bits are set
//! and no bit of a compatible edge is. Since `Q^N` is bipartite only pairs with
//! `t - s` even can coincide, so laces with an odd edge are dropped up front.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::graph::{all_laces, compatible_edges, EdgeST, Lace};
use crate::cube::{convolve, CubeFn, Dim, Vertex};
use crate::error::{Error, Result};
use crate::poly;
use crate::saw::{count_saw_by_endpoint, EnumConfig, SawProfile};
use crate::series::NPoly;

/// Longest walk for which the coincidence pattern fits in a `u128`.
pub const MAX_PI_STEPS: u32 = 15;
/// Largest coincidence set the connected-subset oracle will expand.
pub const MAX_ORACLE_PAIRS: usize = 20;

#[inline]
fn pair_bit(s: u32, t: u32) -> u128 {
    1u128 << (t * (t - 1) / 2 + s)
}

fn edge_mask<'a>(edges: impl IntoIterator<Item = &'a EdgeST>) -> u128 {
    edges.into_iter().fold(0, |m, e| m | pair_bit(e.s, e.t))
}

/// Coincidence pattern of the walk visiting `points`.
#[inline]
fn coincidences(points: &[u64]) -> u128 {
    let mut mask = 0;
    for t in 2..points.len() {
        for s in (t % 2..t - 1).step_by(2) {
            if points[s] == points[t] {
                mask |= pair_bit(s as u32, t as u32);
            }
        }
    }
    mask
}

/// `(lace, compatible)` masks on `[0, m]`, grouped by the number of edges.
struct LaceMasks {
    by_size: Vec<Vec<(u128, u128)>>,
}

impl LaceMasks {
    fn build(m: u32) -> Self {
        let mut by_size = vec![Vec::new(); m as usize + 1];
        for lace in all_laces(m) {
            if lace.edges().iter().any(|e| e.len() % 2 == 1) {
                continue;
            }
            let compat = compatible_edges(&lace);
            by_size[lace.size()].push((edge_mask(lace.edges()), edge_mask(&compat)));
        }
        LaceMasks { by_size }
    }

    /// Adds to `out[M]` the number of `M`-edge laces the pattern realises.
    #[inline]
    fn tally(&self, pattern: u128, out: &mut [u64]) {
        for (size, laces) in self.by_size.iter().enumerate() {
            for &(lace, compat) in laces {
                if pattern & lace == lace && pattern & compat == 0 {
                    out[size] += 1;
                }
            }
        }
    }
}

fn lace_masks(m: u32) -> Arc<LaceMasks> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<LaceMasks>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&m) {
        return hit.clone();
    }
    let built = Arc::new(LaceMasks::build(m));
    cache.lock().unwrap().entry(m).or_insert(built).clone()
}

fn check_steps(m: u32) -> Result<()> {
    if m > MAX_PI_STEPS {
        return Err(Error::domain(format!("walks of {m} steps exceed the limit of {MAX_PI_STEPS}")));
    }
    Ok(())
}

/// A function of `x` that depends only on `|x|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiProfile {
    #[serde(skip)]
    pub dim: Dim,
    pub steps: u32,
    /// Value at any `x` of weight `w`, indexed by `w`.
    #[serde(serialize_with = "crate::json::bigints")]
    pub by_weight: Vec<BigInt>,
}

impl PiProfile {
    fn zero(dim: Dim, steps: u32) -> Self {
        PiProfile {
            dim,
            steps,
            by_weight: vec![BigInt::zero(); dim.n() as usize + 1],
        }
    }

    /// `Σ_x π(x)`.
    pub fn total(&self) -> BigInt {
        let n = self.dim.n() as u64;
        self.by_weight
            .iter()
            .enumerate()
            .map(|(w, v)| v * poly::binomial(n, w as u64))
            .sum()
    }

    pub fn to_cube_fn(&self) -> Result<CubeFn<BigInt>> {
        CubeFn::from_weights(self.dim, &self.by_weight)
    }

    fn from_vertices(dim: Dim, steps: u32, values: &[BigInt]) -> Result<Self> {
        let mut by_weight: Vec<Option<BigInt>> = vec![None; dim.n() as usize + 1];
        for (x, v) in values.iter().enumerate() {
            let w = (x as u64).count_ones() as usize;
            match &by_weight[w] {
                None => by_weight[w] = Some(v.clone()),
                Some(prev) if prev != v => {
                    return Err(Error::Invariant(format!(
                        "π_{steps} is not symmetric: {prev} and {v} at weight {w}"
                    )))
                }
                _ => {}
            }
        }
        Ok(PiProfile {
            dim,
            steps,
            by_weight: by_weight.into_iter().map(|v| v.unwrap_or_default()).collect(),
        })
    }
}

/// Every `m`-step walk from 0, as the list of visited points, fed to `visit`.
fn for_each_walk<A: Send>(
    dim: Dim,
    m: u32,
    config: &EnumConfig,
    init: impl Fn() -> A + Sync + Send,
    visit: impl Fn(&mut A, &[u64]) + Sync + Send,
    merge: impl Fn(A, A) -> A + Sync + Send,
) -> Result<A> {
    let n = dim.n() as u64;
    let total = (n as u128).pow(m);
    if total > config.budget as u128 {
        return Err(Error::BudgetExceeded { budget: config.budget });
    }
    let total = total as u64;
    let chunk = 1024.min(total.max(1));
    let result = (0..total.div_ceil(chunk))
        .into_par_iter()
        .fold(&init, |mut acc, c| {
            let mut points = vec![0u64; m as usize + 1];
            for idx in c * chunk..((c + 1) * chunk).min(total) {
                let mut rest = idx;
                for i in 0..m as usize {
                    points[i + 1] = points[i] ^ (1 << (rest % n));
                    rest /= n;
                }
                visit(&mut acc, &points);
            }
            acc
        })
        .reduce(&init, &merge);
    Ok(result)
}

/// `π_m^{(M)}` for every `M`, as `result[M]` (index 0 is empty).
pub fn pi_by_lace_size(dim: Dim, m: u32, config: &EnumConfig) -> Result<Vec<PiProfile>> {
    check_steps(m)?;
    let v = dim.dense_len()?;
    let masks = lace_masks(m);
    let sizes = m as usize + 1;
    let counts = for_each_walk(
        dim,
        m,
        config,
        || vec![0u64; sizes * v],
        |acc, points| {
            let pattern = coincidences(points);
            if pattern == 0 {
                return;
            }
            let x = points[m as usize] as usize;
            let mut hits = vec![0u64; sizes];
            masks.tally(pattern, &mut hits);
            for (size, h) in hits.into_iter().enumerate() {
                acc[size * v + x] += h;
            }
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )?;
    (0..sizes)
        .map(|size| {
            let values: Vec<BigInt> = counts[size * v..(size + 1) * v].iter().map(|&c| BigInt::from(c)).collect();
            PiProfile::from_vertices(dim, m, &values)
        })
        .collect()
}

/// `π_m^{(M)}(x)`: walks and `M`-edge laces with the lace coincidences and
/// none of the compatible ones.
#[allow(non_snake_case)]
pub fn pi_m_M(dim: Dim, m: u32, big_m: usize, config: &EnumConfig) -> Result<PiProfile> {
    let mut all = pi_by_lace_size(dim, m, config)?;
    if big_m >= all.len() {
        return Ok(PiProfile::zero(dim, m));
    }
    Ok(all.swap_remove(big_m))
}

/// `π_m(x) = Σ_M (-1)^M π_m^{(M)}(x)`.
pub fn pi_alternating(dim: Dim, m: u32, config: &EnumConfig) -> Result<PiProfile> {
    let all = pi_by_lace_size(dim, m, config)?;
    let mut out = PiProfile::zero(dim, m);
    for (size, p) in all.iter().enumerate().skip(1) {
        for (o, v) in out.by_weight.iter_mut().zip(&p.by_weight) {
            if size % 2 == 1 {
                *o -= v;
            } else {
                *o += v;
            }
        }
    }
    Ok(out)
}

/// `π_m(x)` summed over connected graphs: each walk contributes
/// `Σ (-1)^{|Γ|}` over connected `Γ` inside its coincidence set.
pub fn pi_direct_oracle(dim: Dim, m: u32, config: &EnumConfig) -> Result<PiProfile> {
    check_steps(m)?;
    let v = dim.dense_len()?;
    let full_cover = if m == 0 { 0 } else { u64::MAX >> (64 - (2 * m - 1)) };
    let too_many = std::sync::atomic::AtomicBool::new(false);
    let sums = for_each_walk(
        dim,
        m,
        config,
        || vec![0i64; v],
        |acc, points| {
            let mut pairs = Vec::new();
            for t in 1..points.len() {
                for s in 0..t {
                    if points[s] == points[t] {
                        pairs.push((s as u32, t as u32));
                    }
                }
            }
            if pairs.is_empty() {
                return;
            }
            if pairs.len() > MAX_ORACLE_PAIRS {
                too_many.store(true, std::sync::atomic::Ordering::Relaxed);
                return;
            }
            // bit 62 marks an edge at 0, bit 63 an edge at m
            let words: Vec<u64> = pairs
                .iter()
                .map(|&(s, t)| {
                    let cover = (u64::MAX >> (64 - (2 * (t - s) - 1))) << (2 * s);
                    cover | (u64::from(s == 0) << 62) | (u64::from(t == m) << 63)
                })
                .collect();
            let target = full_cover | 3 << 62;
            let mut union = vec![0u64; 1 << pairs.len()];
            let mut total = 0i64;
            for subset in 1usize..union.len() {
                let low = subset.trailing_zeros() as usize;
                union[subset] = union[subset & (subset - 1)] | words[low];
                if union[subset] == target {
                    total += if subset.count_ones() % 2 == 1 { -1 } else { 1 };
                }
            }
            acc[points[m as usize] as usize] += total;
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )?;
    if too_many.into_inner() {
        return Err(Error::domain(format!(
            "a walk has more than {MAX_ORACLE_PAIRS} coincidences; the subset oracle is out of range"
        )));
    }
    let values: Vec<BigInt> = sums.into_iter().map(BigInt::from).collect();
    PiProfile::from_vertices(dim, m, &values)
}

/// Outcome of checking `c_n(x) = N (D * c_{n-1})(x) + Σ_{m=2}^n (π_m * c_{n-m})(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecursionReport {
    pub n_dim: u32,
    pub max_steps: u32,
    /// Number of `(n, x)` pairs compared.
    pub checked: u64,
    /// First mismatch as `(n, x, lhs, rhs)`.
    pub violation: Option<(u32, u64, String, String)>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn verify_recursion(dim: Dim, n_max: u32, config: &EnumConfig) -> Result<RecursionReport> {
    check_steps(n_max)?;
    let profile = count_saw_by_endpoint(dim, n_max as usize, config)?;
    let c: Vec<CubeFn<BigInt>> = (0..=n_max as usize)
        .map(|n| profile.endpoint_counts(n))
        .collect::<Result<_>>()?;
    let pi: Vec<CubeFn<BigInt>> = (2..=n_max)
        .map(|m| pi_alternating(dim, m, config)?.to_cube_fn())
        .collect::<Result<_>>()?;
    let mut report = RecursionReport {
        n_dim: dim.n(),
        max_steps: n_max,
        checked: 0,
        violation: None,
    };
    for n in 1..=n_max as usize {
        let mut rhs = CubeFn::from_fn(dim, |x| {
            (0..dim.n())
                .map(|i| c[n - 1].get(x + Vertex::unit(i)).clone())
                .sum::<BigInt>()
        })?;
        for m in 2..=n {
            rhs = rhs.add(&convolve(&pi[m - 2], &c[n - m])?)?;
        }
        for x in dim.vertices() {
            report.checked += 1;
            if c[n].get(x) != rhs.get(x) {
                report.violation = Some((n as u32, x.bits(), c[n].get(x).to_string(), rhs.get(x).to_string()));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// `π_m^{(2)}(x) <= Σ_{m_1+m_2+m_3=m, m_i>=1} c_{m_1}(x) c_{m_2}(x) c_{m_3}(x)` for every `x`.
pub fn check_pi2_bound(dim: Dim, m: u32, config: &EnumConfig) -> Result<()> {
    let pi2 = pi_m_M(dim, m, 2, config)?;
    let c = count_saw_by_endpoint(dim, m as usize, config)?;
    for w in 0..=dim.n() {
        let mut bound = BigInt::zero();
        for m1 in 1..m {
            for m2 in 1..m - m1 {
                let m3 = m - m1 - m2;
                bound += c.count(m1 as usize, w) * c.count(m2 as usize, w) * c.count(m3 as usize, w);
            }
        }
        let value = &pi2.by_weight[w as usize];
        if value > &bound {
            return Err(Error::Invariant(format!(
                "π_{m}^(2) = {value} exceeds the three-walk bound {bound} at weight {w}"
            )));
        }
    }
    Ok(())
}

/// `(1 - zN - Π̂_z(0)) χ(z) = 1 + O(z^{n_max+1})` with `Π̂` truncated at `n_max`.
pub fn check_truncated_identity(dim: Dim, n_max: u32, config: &EnumConfig) -> Result<()> {
    let chi = count_saw_by_endpoint(dim, n_max as usize, config)?.series();
    let mut f = vec![BigInt::one(), -BigInt::from(dim.n())];
    for m in 2..=n_max {
        f.push(-pi_alternating(dim, m, config)?.total());
    }
    let prod = poly::mul_truncated(&f, chi.coefficients(), n_max as usize);
    for (j, c) in prod.iter().enumerate() {
        let expected = if j == 0 { BigInt::one() } else { BigInt::zero() };
        if *c != expected {
            return Err(Error::Invariant(format!(
                "coefficient of z^{j} in (1 - zN - Π̂) χ is {c}, expected {expected}"
            )));
        }
    }
    Ok(())
}

/// `π_m^{(1)}` is supported at 0 where it counts self-avoiding returns,
/// `π_m^{(1)}(0) = N c_{m-1}(e_1)`.
pub fn check_pi1_returns(dim: Dim, m: u32, config: &EnumConfig) -> Result<()> {
    let pi1 = pi_m_M(dim, m, 1, config)?;
    let c: SawProfile = count_saw_by_endpoint(dim, m as usize - 1, config)?;
    let returns = c.count(m as usize - 1, 1) * BigInt::from(dim.n());
    if pi1.by_weight[0] != returns || pi1.by_weight[1..].iter().any(|v| !v.is_zero()) {
        return Err(Error::Invariant(format!(
            "π_{m}^(1) = {:?} is not the self-avoiding return count {returns} at 0",
            pi1.by_weight
        )));
    }
    Ok(())
}

/// `π_{k,δ}^{(M)}` for all `δ >= min_delta` and all `M`, as `counts[δ][M]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalTable {
    pub k: u32,
    pub min_delta: u32,
    pub counts: Vec<Vec<u64>>,
}

impl UniversalTable {
    pub fn get(&self, delta: u32, big_m: usize) -> Option<u64> {
        if delta < self.min_delta {
            return None;
        }
        Some(
            self.counts
                .get(delta as usize)
                .and_then(|row| row.get(big_m))
                .copied()
                .unwrap_or(0),
        )
    }
}

struct Canonical<'a> {
    k: usize,
    min_delta: u32,
    masks: &'a LaceMasks,
    points: Vec<u64>,
    uses: Vec<u32>,
    singles: u32,
    delta: u32,
    counts: Vec<Vec<u64>>,
}

impl Canonical<'_> {
    // In a connected lace graph every step lies inside a closed loop, so every
    // coordinate is flipped at least twice.
    fn viable(&self, depth: usize) -> bool {
        let remaining = (self.k - depth) as u32;
        self.singles <= remaining && self.delta + (remaining - self.singles) / 2 >= self.min_delta
    }

    fn step(&mut self, depth: usize, c: u32) {
        let fresh = c == self.delta;
        if fresh {
            self.delta += 1;
        }
        self.uses[c as usize] += 1;
        match self.uses[c as usize] {
            1 => self.singles += 1,
            2 => self.singles -= 1,
            _ => {}
        }
        self.points[depth + 1] = self.points[depth] ^ (1 << c);
        self.search(depth + 1);
        match self.uses[c as usize] {
            1 => self.singles -= 1,
            2 => self.singles += 1,
            _ => {}
        }
        self.uses[c as usize] -= 1;
        if fresh {
            self.delta -= 1;
        }
    }

    fn search(&mut self, depth: usize) {
        if !self.viable(depth) {
            return;
        }
        if depth == self.k {
            let pattern = coincidences(&self.points);
            let row = &mut self.counts[self.delta as usize];
            self.masks.tally(pattern, row);
            return;
        }
        let max_c = (self.delta + 1).min(self.k as u32 / 2);
        for c in 0..max_c {
            self.step(depth, c);
        }
    }
}

/// Canonical prefixes (coordinate choices) of length `depth`.
fn canonical_prefixes(depth: usize, limit: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..depth {
        out = out
            .into_iter()
            .flat_map(|p| {
                let used = p.iter().map(|&c| c + 1).max().unwrap_or(0);
                (0..(used + 1).min(limit)).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

fn compute_table(k: u32, min_delta: u32) -> UniversalTable {
    let masks = lace_masks(k);
    let sizes = k as usize + 1;
    let delta_cap = (k / 2).max(1) as usize;
    let empty = || vec![vec![0u64; sizes]; delta_cap + 1];
    let split = (k as usize).min(5);
    let counts = canonical_prefixes(split, delta_cap as u32)
        .into_par_iter()
        .map(|prefix| {
            let mut walker = Canonical {
                k: k as usize,
                min_delta,
                masks: &masks,
                points: vec![0; k as usize + 1],
                uses: vec![0; delta_cap + 1],
                singles: 0,
                delta: 0,
                counts: empty(),
            };
            replay(&mut walker, &prefix, 0);
            walker.counts
        })
        .reduce(empty, |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(b) {
                ra.iter_mut().zip(rb).for_each(|(x, y)| *x += y);
            }
            a
        });
    UniversalTable { k, min_delta, counts }
}

/// Walks the fixed prefix, then searches below it.
fn replay(w: &mut Canonical<'_>, prefix: &[u32], depth: usize) {
    if depth == prefix.len() {
        w.search(depth);
        return;
    }
    let c = prefix[depth];
    // the prefix is canonical by construction; mirror `step` without recursing into `search`
    let fresh = c == w.delta;
    if fresh {
        w.delta += 1;
    }
    w.uses[c as usize] += 1;
    match w.uses[c as usize] {
        1 => w.singles += 1,
        2 => w.singles -= 1,
        _ => {}
    }
    w.points[depth + 1] = w.points[depth] ^ (1 << c);
    if w.viable(depth + 1) {
        replay(w, prefix, depth + 1);
    }
}

/// `π_{k,δ}^{(M)}` for `δ >= min_delta`, cached per `k`.
pub fn universal_table(k: u32, min_delta: u32) -> Result<Arc<UniversalTable>> {
    check_steps(k)?;
    if k < 2 {
        return Err(Error::domain("lace graphs need at least two steps"));
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<UniversalTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let min_delta = min_delta.max(1);
    if let Some(hit) = cache.lock().unwrap().get(&k) {
        if hit.min_delta <= min_delta {
            return Ok(hit.clone());
        }
    }
    let table = Arc::new(compute_table(k, min_delta));
    let mut guard = cache.lock().unwrap();
    let keep = match guard.get(&k) {
        Some(existing) if existing.min_delta <= min_delta => existing.clone(),
        _ => {
            guard.insert(k, table.clone());
            table
        }
    };
    Ok(keep)
}

/// The `N`-free count `π_{k,δ}^{(M)}` of canonical lace graphs on `Q^δ`.
pub fn pi_k_delta(k: u32, delta: u32, big_m: usize) -> Result<BigInt> {
    if delta == 0 || delta >= k {
        return Err(Error::domain(format!("need 1 <= δ <= k - 1, got k = {k}, δ = {delta}")));
    }
    let table = universal_table(k, delta)?;
    Ok(BigInt::from(table.get(delta, big_m).unwrap_or(0)))
}

/// `π_k^{(M)}(N) = Σ_δ π_{k,δ}^{(M)} N (N-1) ... (N-δ+1)`.
pub fn pi_as_n_polynomial(k: u32, big_m: usize) -> Result<NPoly> {
    let table = universal_table(k, 1)?;
    let mut out = NPoly::zero();
    for delta in 1..k {
        let c = table.get(delta, big_m).unwrap_or(0);
        if c != 0 {
            out = out.add(&NPoly::falling_factorial(delta).scale(&BigInt::from(c)));
        }
    }
    Ok(out)
}

/// Laces on `[0, m]` that can be realised on a bipartite graph.
pub fn realisable_laces(m: u32) -> Vec<Lace> {
    all_laces(m)
        .into_iter()
        .filter(|l| l.edges().iter().all(|e| e.len() % 2 == 0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dim {
        Dim::new(n).unwrap()
    }

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    #[test]
    fn two_step_coefficients() {
        for n in 1..=5 {
            let p = pi_m_M(dim(n), 2, 1, &cfg()).unwrap();
            assert_eq!(p.total(), BigInt::from(n));
            let alt = pi_alternating(dim(n), 2, &cfg()).unwrap();
            assert_eq!(alt.by_weight[0], BigInt::from(-(n as i64)));
            assert_eq!(pi_direct_oracle(dim(n), 2, &cfg()).unwrap(), alt);
        }
    }

    #[test]
    fn small_lace_counts_on_cubes() {
        let p = pi_m_M(dim(3), 3, 2, &cfg()).unwrap();
        assert_eq!(p.total(), BigInt::from(3));
        assert_eq!(p.by_weight, vec![0.into(), 1.into(), 0.into(), 0.into()]);
        let p = pi_m_M(dim(4), 4, 1, &cfg()).unwrap();
        assert_eq!(p.total(), BigInt::from(12));
        assert_eq!(p.by_weight[0], BigInt::from(12));
        assert!(pi_m_M(dim(3), 4, 4, &cfg()).unwrap().total().is_zero());
    }

    #[test]
    fn oracle_agrees_small() {
        for (n, m) in [(2, 3), (2, 4), (3, 4), (2, 5)] {
            assert_eq!(
                pi_alternating(dim(n), m, &cfg()).unwrap(),
                pi_direct_oracle(dim(n), m, &cfg()).unwrap(),
                "N = {n}, m = {m}"
            );
        }
    }

    #[test]
    fn recursion_small() {
        assert!(verify_recursion(dim(2), 5, &cfg()).unwrap().passed());
        assert!(verify_recursion(dim(3), 6, &cfg()).unwrap().passed());
    }

    #[test]
    fn universal_small_values() {
        assert_eq!(pi_k_delta(2, 1, 1).unwrap(), BigInt::from(1));
        assert_eq!(pi_k_delta(3, 1, 2).unwrap(), BigInt::from(1));
        assert_eq!(pi_k_delta(4, 2, 1).unwrap(), BigInt::from(1));
        assert_eq!(pi_k_delta(4, 1, 1).unwrap(), BigInt::zero());
        assert_eq!(pi_as_n_polynomial(3, 2).unwrap(), NPoly::from_i64(&[0, 1]));
        assert_eq!(pi_as_n_polynomial(4, 1).unwrap(), NPoly::from_i64(&[0, -1, 1]));
        assert!(pi_k_delta(4, 4, 1).is_err());
    }

    #[test]
    fn polynomial_matches_cube_enumeration() {
        for k in 2..=6 {
            for big_m in 1..k as usize {
                let poly = pi_as_n_polynomial(k, big_m).unwrap();
                for n in 2..=3 {
                    let direct = pi_m_M(dim(n), k, big_m, &cfg()).unwrap().total();
                    assert_eq!(poly.eval(n as i64), direct, "k = {k}, M = {big_m}, N = {n}");
                }
            }
        }
    }

    #[test]
    fn table_of_small_coefficients() {
        // (k, δ, M, value); every other entry with k <= 8, k - δ <= 4, M <= 4 vanishes
        let known = [
            (2, 1, 1, 1),
            (4, 2, 1, 1),
            (6, 3, 1, 4),
            (8, 4, 1, 27),
            (3, 1, 2, 1),
            (5, 2, 2, 3),
            (7, 3, 2, 15),
            (4, 1, 3, 1),
            (6, 2, 3, 5),
            (5, 1, 4, 1),
        ];
        for k in 2..=8u32 {
            for delta in k.saturating_sub(4).max(1)..k {
                for big_m in 1..=4usize {
                    let expected = known
                        .iter()
                        .find(|e| (e.0, e.1, e.2) == (k, delta, big_m))
                        .map_or(0, |e| e.3);
                    assert_eq!(pi_k_delta(k, delta, big_m).unwrap(), BigInt::from(expected), "k = {k}, δ = {delta}, M = {big_m}");
                }
            }
        }
    }

    #[test]
    fn budget_guard() {
        let err = pi_m_M(dim(4), 8, 1, &EnumConfig::with_budget(100)).unwrap_err();
        assert_eq!(err.kind(), "budget_exceeded");
        assert!(pi_m_M(dim(2), 16, 1, &cfg()).is_err());
    }
}
