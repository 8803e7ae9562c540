//! Graphs on integer intervals, laces and compatible edges.
//!
//! A graph on `[a, b]` is a set of edges `st` with `a <= s < t <= b`. It is
//! connected when `a` and `b` are edge endpoints and every real `c ∈ (a, b)`
//! lies in some open interval `(s, t)`. Only half-integers and integers need
//! checking, so coverage is a bitmask over the points `h/2`, `2a < h < 2b`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Longest interval for which coverage fits in a `u64`.
pub const MAX_INTERVAL: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeST {
    pub s: u32,
    pub t: u32,
}

impl EdgeST {
    pub fn new(s: u32, t: u32) -> Result<Self> {
        if s >= t {
            return Err(Error::domain(format!("edge needs s < t, got ({s}, {t})")));
        }
        Ok(EdgeST { s, t })
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> u32 {
        self.t - self.s
    }

    /// Half-points strictly inside `(s, t)`, relative to `a`.
    fn coverage(self, a: u32) -> u64 {
        let lo = 2 * (self.s - a) + 1;
        let hi = 2 * (self.t - a) - 1;
        (u64::MAX >> (63 - (hi - lo))) << (lo - 1)
    }
}

impl fmt::Display for EdgeST {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}

fn full_coverage(a: u32, b: u32) -> u64 {
    let n = 2 * (b - a) - 1;
    u64::MAX >> (64 - n)
}

fn check_interval(a: u32, b: u32) -> Result<()> {
    if a >= b || b - a > MAX_INTERVAL {
        return Err(Error::domain(format!(
            "interval [{a}, {b}] must satisfy a < b and b - a <= {MAX_INTERVAL}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalGraph {
    a: u32,
    b: u32,
    edges: BTreeSet<EdgeST>,
}

impl IntervalGraph {
    pub fn new(a: u32, b: u32, edges: impl IntoIterator<Item = EdgeST>) -> Result<Self> {
        check_interval(a, b)?;
        let edges: BTreeSet<EdgeST> = edges.into_iter().collect();
        if let Some(e) = edges.iter().find(|e| e.s < a || e.t > b) {
            return Err(Error::domain(format!("edge {e} leaves [{a}, {b}]")));
        }
        Ok(IntervalGraph { a, b, edges })
    }

    pub fn from_pairs(a: u32, b: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(s, t)| EdgeST::new(s, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(a, b, edges)
    }

    pub fn interval(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn edges(&self) -> &BTreeSet<EdgeST> {
        &self.edges
    }

    pub fn contains(&self, e: EdgeST) -> bool {
        self.edges.contains(&e)
    }

    pub fn with_edge(&self, e: EdgeST) -> Result<Self> {
        let mut g = self.clone();
        if e.s < self.a || e.t > self.b {
            return Err(Error::domain(format!("edge {e} leaves [{}, {}]", self.a, self.b)));
        }
        g.edges.insert(e);
        Ok(g)
    }
}

/// Connectivity in the interval-covering sense.
pub fn is_connected_graph(g: &IntervalGraph) -> bool {
    is_connected_edges(g.a, g.b, g.edges.iter().copied())
}

pub(crate) fn is_connected_edges(a: u32, b: u32, edges: impl Iterator<Item = EdgeST>) -> bool {
    let (mut cover, mut has_a, mut has_b) = (0u64, false, false);
    for e in edges {
        cover |= e.coverage(a);
        has_a |= e.s == a;
        has_b |= e.t == b;
    }
    has_a && has_b && cover == full_coverage(a, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lace {
    a: u32,
    b: u32,
    /// `s_1 t_1, ..., s_M t_M` in prescription order.
    edges: Vec<EdgeST>,
}

impl Lace {
    /// Builds a lace from its ordered edges, checking the ordering conditions.
    pub fn new(a: u32, b: u32, edges: Vec<EdgeST>) -> Result<Self> {
        check_interval(a, b)?;
        let lace = Lace { a, b, edges };
        if !lace.satisfies_ordering() {
            return Err(Error::domain(format!("{lace} violates the lace ordering on [{a}, {b}]")));
        }
        Ok(lace)
    }

    pub fn interval(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn edges(&self) -> &[EdgeST] {
        &self.edges
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn to_graph(&self) -> IntervalGraph {
        IntervalGraph {
            a: self.a,
            b: self.b,
            edges: self.edges.iter().copied().collect(),
        }
    }

    /// `a = s_1 < s_2`, `s_{l+1} < t_l <= s_{l+2}`, `s_M < t_{M-1} < t_M = b`.
    fn satisfies_ordering(&self) -> bool {
        let e = &self.edges;
        let m = e.len();
        if m == 0 || e[0].s != self.a || e[m - 1].t != self.b {
            return false;
        }
        if e.iter().any(|x| x.s >= x.t) {
            return false;
        }
        if m == 1 {
            return true;
        }
        if e[0].s >= e[1].s || e[m - 1].s >= e[m - 2].t || e[m - 2].t >= e[m - 1].t {
            return false;
        }
        (0..m - 2).all(|l| e[l + 1].s < e[l].t && e[l].t <= e[l + 2].s)
    }

    /// The `2M - 1` closed subintervals `[s_1, s_2], [s_2, t_1], [t_1, s_3], ...`.
    pub fn subintervals(&self) -> Vec<(u32, u32)> {
        let e = &self.edges;
        if e.len() == 1 {
            return vec![(self.a, self.b)];
        }
        let mut cuts = vec![e[0].s];
        for l in 1..e.len() {
            cuts.push(e[l].s);
            cuts.push(e[l - 1].t);
        }
        cuts.push(e[e.len() - 1].t);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

impl fmt::Display for Lace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Lace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[u32; 2]> = self.edges.iter().map(|e| [e.s, e.t]).collect();
        pairs.serialize(serializer)
    }
}

/// The lace `L_Γ ⊆ Γ` selected by the max/min prescription.
pub fn lace_prescription(g: &IntervalGraph) -> Result<Lace> {
    if !is_connected_graph(g) {
        return Err(Error::domain("lace prescription needs a connected graph"));
    }
    Ok(prescribe(g.a, g.b, &g.edges))
}

fn prescribe(a: u32, b: u32, edges: &BTreeSet<EdgeST>) -> Lace {
    let t1 = edges.iter().filter(|e| e.s == a).map(|e| e.t).max().unwrap();
    let mut out = vec![EdgeST { s: a, t: t1 }];
    let mut t = t1;
    while t != b {
        let next = edges.iter().filter(|e| e.s < t).map(|e| e.t).max().unwrap();
        let s = edges.iter().filter(|e| e.t == next).map(|e| e.s).min().unwrap();
        out.push(EdgeST { s, t: next });
        t = next;
    }
    Lace { a, b, edges: out }
}

fn all_edges(a: u32, b: u32) -> impl Iterator<Item = EdgeST> {
    (a..b).flat_map(move |s| (s + 1..=b).map(move |t| EdgeST { s, t }))
}

/// `C(L)`: edges `st ∉ L` with `L_{L ∪ {st}} = L`, found by running the prescription.
pub fn compatible_edges(l: &Lace) -> BTreeSet<EdgeST> {
    let base: BTreeSet<EdgeST> = l.edges.iter().copied().collect();
    all_edges(l.a, l.b)
        .filter(|e| !base.contains(e))
        .filter(|&e| {
            let mut g = base.clone();
            g.insert(e);
            prescribe(l.a, l.b, &g) == *l
        })
        .collect()
}

/// `C(L)` from the step-by-step conditions under which an extra edge `st`
/// changes the prescription:
///
/// * it raises some `t_{i+1}`: `s < t_i` and `t > t_{i+1}` (with `t_0 = a + 1`);
/// * it lowers some `s_{i+1}`: `t = t_{i+1}` and `s < s_{i+1}`.
pub fn compatible_edges_stepwise(l: &Lace) -> BTreeSet<EdgeST> {
    let e = &l.edges;
    let m = e.len();
    let t_prev = |i: usize| if i == 0 { l.a + 1 } else { e[i - 1].t };
    all_edges(l.a, l.b)
        .filter(|x| !e.contains(x))
        .filter(|x| {
            let raises = (0..m).any(|i| x.s < t_prev(i) && x.t > e[i].t);
            let lowers = (1..m).any(|i| x.t == e[i].t && x.s < e[i].s);
            !raises && !lowers
        })
        .collect()
}

/// All laces on `[0, m]` with `big_m` edges, built from the ordering conditions.
pub fn enumerate_laces(m: u32, big_m: usize) -> Vec<Lace> {
    if m == 0 || m > MAX_INTERVAL || big_m == 0 {
        return Vec::new();
    }
    if big_m == 1 {
        return vec![Lace {
            a: 0,
            b: m,
            edges: vec![EdgeST { s: 0, t: m }],
        }];
    }
    // the interleaved sequence s_2, t_1, s_3, t_2, ..., s_M, t_{M-1}
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(2 * big_m);
    fn extend(m: u32, big_m: usize, seq: &mut Vec<u32>, out: &mut Vec<Lace>) {
        let len = seq.len();
        if len == 2 * (big_m - 1) {
            let mut edges = Vec::with_capacity(big_m);
            for l in 0..big_m {
                let s = if l == 0 { 0 } else { seq[2 * (l - 1)] };
                let t = if l == big_m - 1 { m } else { seq[2 * l + 1] };
                edges.push(EdgeST { s, t });
            }
            out.push(Lace { a: 0, b: m, edges });
            return;
        }
        // even positions are s_{l+2}, odd positions t_{l+1}
        let lo = match len {
            0 => 1,
            _ if len % 2 == 1 => seq[len - 1] + 1,
            _ => seq[len - 1],
        };
        for v in lo..m {
            seq.push(v);
            extend(m, big_m, seq, out);
            seq.pop();
        }
    }
    extend(m, big_m, &mut seq, &mut out);
    out
}

/// Laces of every size on `[0, m]`.
pub fn all_laces(m: u32) -> Vec<Lace> {
    (1..=m as usize).flat_map(|big_m| enumerate_laces(m, big_m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(b: u32, pairs: &[(u32, u32)]) -> IntervalGraph {
        IntervalGraph::from_pairs(0, b, pairs).unwrap()
    }

    fn lace(b: u32, pairs: &[(u32, u32)]) -> Lace {
        Lace::new(0, b, pairs.iter().map(|&(s, t)| EdgeST::new(s, t).unwrap()).collect()).unwrap()
    }

    /// Every graph on `[0, m]`, as edge sets.
    fn all_graphs(m: u32) -> Vec<BTreeSet<EdgeST>> {
        let edges: Vec<EdgeST> = all_edges(0, m).collect();
        (0u64..1 << edges.len())
            .map(|mask| {
                edges
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, e)| *e)
                    .collect()
            })
            .collect()
    }

    fn minimally_connected(m: u32, g: &BTreeSet<EdgeST>) -> bool {
        is_connected_edges(0, m, g.iter().copied())
            && g.iter()
                .all(|e| !is_connected_edges(0, m, g.iter().copied().filter(|x| x != e)))
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected_graph(&graph(5, &[(0, 5)])));
        assert!(!is_connected_graph(&graph(3, &[(0, 1), (2, 3)])));
        assert!(is_connected_graph(&graph(3, &[(0, 2), (1, 3)])));
        // touching at an integer point leaves that point uncovered
        assert!(!is_connected_graph(&graph(4, &[(0, 2), (2, 4)])));
        assert!(!is_connected_graph(&graph(4, &[(1, 4)])));
        assert!(!is_connected_graph(&graph(4, &[])));
    }

    #[test]
    fn prescription_examples() {
        let all = graph(2, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(lace_prescription(&all).unwrap(), lace(2, &[(0, 2)]));
        let l = lace(6, &[(0, 3), (2, 5), (4, 6)]);
        assert_eq!(lace_prescription(&l.to_graph()).unwrap(), l);
        assert!(lace_prescription(&graph(3, &[(0, 1)])).is_err());
    }

    #[test]
    fn prescription_over_all_connected_graphs() {
        for m in 1..=5 {
            let expected: BTreeSet<Lace> = all_laces(m).into_iter().collect();
            let mut image = BTreeSet::new();
            for g in all_graphs(m) {
                let g = IntervalGraph { a: 0, b: m, edges: g };
                if !is_connected_graph(&g) {
                    continue;
                }
                let l = lace_prescription(&g).unwrap();
                assert!(l.satisfies_ordering());
                assert!(l.edges.iter().all(|e| g.contains(*e)));
                assert_eq!(lace_prescription(&l.to_graph()).unwrap(), l);
                image.insert(l);
            }
            assert_eq!(image, expected, "m = {m}");
        }
    }

    #[test]
    fn enumeration_matches_minimal_connectivity() {
        for m in 1..=6 {
            for big_m in 1..=m as usize {
                let mut brute: Vec<BTreeSet<EdgeST>> = all_graphs(m)
                    .into_iter()
                    .filter(|g| g.len() == big_m && minimally_connected(m, g))
                    .collect();
                let mut listed: Vec<BTreeSet<EdgeST>> = enumerate_laces(m, big_m)
                    .into_iter()
                    .map(|l| l.edges.into_iter().collect())
                    .collect();
                brute.sort();
                listed.sort();
                assert_eq!(listed, brute, "m = {m}, M = {big_m}");
            }
        }
        assert_eq!(enumerate_laces(2, 1), vec![lace(2, &[(0, 2)])]);
        assert!(enumerate_laces(2, 3).is_empty());
    }

    #[test]
    fn compatible_routes_agree() {
        for m in 1..=7 {
            for l in all_laces(m) {
                assert_eq!(compatible_edges(&l), compatible_edges_stepwise(&l), "{l}");
            }
        }
    }

    #[test]
    fn single_edge_lace_is_compatible_with_everything_else() {
        for m in 2..=6 {
            let l = lace(m, &[(0, m)]);
            let c = compatible_edges(&l);
            assert_eq!(c.len(), (m * (m + 1) / 2 - 1) as usize);
        }
    }

    #[test]
    fn edges_inside_one_subinterval_are_compatible() {
        for m in 2..=8 {
            for l in all_laces(m) {
                let c = compatible_edges(&l);
                for (lo, hi) in l.subintervals() {
                    for e in all_edges(lo, hi.max(lo + 1)).filter(|e| e.t <= hi) {
                        if !l.edges.contains(&e) {
                            assert!(c.contains(&e), "{e} should be compatible with {l}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lace_validation() {
        assert!(Lace::new(0, 4, vec![EdgeST::new(0, 2).unwrap(), EdgeST::new(2, 4).unwrap()]).is_err());
        assert!(EdgeST::new(3, 3).is_err());
        assert_eq!(lace(6, &[(0, 3), (2, 5), (4, 6)]).subintervals(), vec![(0, 2), (2, 3), (3, 4), (4, 5), (5, 6)]);
    }
}
