//! Combinatorial ground truth for characteristic polynomial coefficients.
//!
//! A clow ("closed walk") on vertices `1..=n` is a walk `(w_1, ..., w_l)`
//! returning to `w_1`, where the head `w_1` is the smallest vertex and is
//! visited exactly once. A clow sequence is a list of clows with strictly
//! increasing heads. Summing `sign * weight` over all clow sequences of
//! length `k` gives the coefficient `p_(n-k)` of `det(xI - A)`; the
//! sequences that are not cycle covers cancel in pairs under
//! [`involution`].
//!
//! Everything here is brute force and capped: an enumeration whose exact
//! size exceeds the cap is refused up front, never truncated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{RingElement, RingSpec};

/// Default limit on the number of objects any single enumeration produces.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// A closed walk whose head is its unique minimum vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clow {
    vertices: Vec<usize>,
}

impl Clow {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        let Some(&head) = vertices.first() else {
            return Err(Error::Empty("a clow needs at least one vertex"));
        };
        if head == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                bound: usize::MAX,
            });
        }
        if vertices[1..].iter().any(|&v| v <= head) {
            return Err(Error::Unsupported(
                "clow head must be the unique minimum vertex",
            ));
        }
        Ok(Clow { vertices })
    }

    pub fn head(&self) -> usize {
        self.vertices[0]
    }

    /// Number of edges, which equals the number of listed vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Edges `(w_1,w_2), ..., (w_l,w_1)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let l = self.vertices.len();
        (0..l).map(move |i| (self.vertices[i], self.vertices[(i + 1) % l]))
    }

    /// No vertex repeats.
    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<_> = self.vertices.iter().collect();
        set.len() == self.vertices.len()
    }

    /// Rotate a simple cycle so its minimum comes first.
    fn from_cycle(mut cycle: Vec<usize>) -> Self {
        let pos = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map(|(i, _)| i)
            .expect("nonempty cycle");
        cycle.rotate_left(pos);
        Clow { vertices: cycle }
    }
}

impl fmt::Display for Clow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Clows ordered by strictly increasing head.
///
/// The derived ordering compares clow by clow, each clow head first and
/// then along its walk; this is the canonical enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClowSequence {
    clows: Vec<Clow>,
}

impl ClowSequence {
    pub fn new(clows: Vec<Clow>) -> Result<Self> {
        if clows.windows(2).any(|w| w[0].head() >= w[1].head()) {
            return Err(Error::UnsortedIndices);
        }
        Ok(ClowSequence { clows })
    }

    pub fn empty() -> Self {
        ClowSequence::default()
    }

    /// Parse the display form, e.g. `(1,2),(3)`; `()` is the empty sequence.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Unsupported("malformed clow sequence literal");
        let text = text.trim();
        if text == "()" || text.is_empty() {
            return Ok(Self::empty());
        }
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let clows = inner
            .split("),(")
            .map(|part| {
                let vs = part
                    .split(',')
                    .map(|v| v.trim().parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                Clow::new(vs)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(clows)
    }

    pub fn clows(&self) -> &[Clow] {
        &self.clows
    }

    pub fn num_clows(&self) -> usize {
        self.clows.len()
    }

    /// Total number of edges, with multiplicity.
    pub fn length(&self) -> usize {
        self.clows.iter().map(Clow::len).sum()
    }

    /// `(-1)^(number of clows)` as a ring element.
    pub fn sign(&self, spec: RingSpec) -> RingElement {
        spec.one().signed(self.sign_is_negative())
    }

    pub fn sign_is_negative(&self) -> bool {
        self.clows.len() % 2 == 1
    }

    /// Product of `a_ij` over all edges, with multiplicity; one when empty.
    pub fn weight(&self, a: &Matrix) -> RingElement {
        let mut w = a.spec().one();
        for (i, j) in self.clows.iter().flat_map(Clow::edges) {
            w = &w * a.get(i, j).expect("vertex within matrix bounds");
        }
        w
    }

    /// `sign * weight`.
    pub fn signed_weight(&self, a: &Matrix) -> RingElement {
        self.weight(a).signed(self.sign_is_negative())
    }

    /// Symbolic weight, e.g. `a[1,2]*a[2,3]^2*a[3,1]`.
    pub fn monomial(&self) -> String {
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in self.clows.iter().flat_map(Clow::edges) {
            *counts.entry(e).or_default() += 1;
        }
        if counts.is_empty() {
            return "1".to_string();
        }
        counts
            .iter()
            .map(|(&(i, j), &c)| {
                if c == 1 {
                    format!("a[{i},{j}]")
                } else {
                    format!("a[{i},{j}]^{c}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Every clow is a simple cycle and no vertex is shared between clows.
    pub fn is_cycle_cover(&self) -> bool {
        disjoint_simple(&self.clows)
    }

    fn largest_vertex(&self) -> usize {
        self.clows
            .iter()
            .flat_map(|c| c.vertices.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for ClowSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clows.is_empty() {
            return write!(f, "()");
        }
        for (i, c) in self.clows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn disjoint_simple(clows: &[Clow]) -> bool {
    let mut seen = BTreeSet::new();
    clows
        .iter()
        .flat_map(|c| c.vertices.iter())
        .all(|v| seen.insert(*v))
}

fn check_cap(estimated: u128, cap: u64) -> Result<()> {
    if estimated > cap as u128 {
        Err(Error::EnumerationTooLarge { estimated, cap })
    } else {
        Ok(())
    }
}

/// Exact number of clow sequences of length `k` on `n` vertices, saturating.
pub fn count_clow_sequences(n: usize, k: usize) -> u128 {
    // ways[h][r]: sequences of total length r whose heads are all >= h
    let mut ways = vec![vec![0u128; k + 1]; n + 2];
    for row in ways.iter_mut() {
        row[0] = 1;
    }
    for h in (1..=n).rev() {
        let others = (n - h) as u128;
        for r in 1..=k {
            // head h unused
            let mut total = ways[h + 1][r];
            // a clow at head h of length l uses (n-h)^(l-1) walks
            let mut walks: u128 = 1;
            for l in 1..=r {
                total = total.saturating_add(walks.saturating_mul(ways[h + 1][r - l]));
                walks = walks.saturating_mul(others);
            }
            ways[h][r] = total;
        }
    }
    ways[1][k]
}

/// All clow sequences of total length `k` on vertices `1..=n`, sorted.
pub fn enumerate_clow_sequences(n: usize, k: usize, cap: u64) -> Result<Vec<ClowSequence>> {
    if n == 0 {
        return Err(Error::Empty("clow sequences need at least one vertex"));
    }
    check_cap(count_clow_sequences(n, k), cap)?;
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_sequences(n, 1, k, &mut current, &mut out);
    out.sort();
    Ok(out)
}

fn extend_sequences(
    n: usize,
    min_head: usize,
    remaining: usize,
    current: &mut Vec<Clow>,
    out: &mut Vec<ClowSequence>,
) {
    if remaining == 0 {
        out.push(ClowSequence {
            clows: current.clone(),
        });
        return;
    }
    for head in min_head..=n {
        for l in 1..=remaining {
            for walk in walks_from(n, head, l) {
                current.push(Clow { vertices: walk });
                extend_sequences(n, head + 1, remaining - l, current, out);
                current.pop();
            }
        }
    }
}

/// All walks `(head, w_2, ..., w_l)` with every `w_i` in `head+1..=n`.
fn walks_from(n: usize, head: usize, l: usize) -> Vec<Vec<usize>> {
    let mut walks = vec![vec![head]];
    for _ in 1..l {
        walks = walks
            .into_iter()
            .flat_map(|w| {
                (head + 1..=n).map(move |v| {
                    let mut next = w.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    walks
}

/// Sum of signed weights over a list of sequences.
pub fn signed_sum<'a>(
    sequences: impl IntoIterator<Item = &'a ClowSequence>,
    a: &Matrix,
) -> RingElement {
    sequences
        .into_iter()
        .fold(a.spec().zero(), |acc, cs| &acc + &cs.signed_weight(a))
}

/// `sum sign(C) w(C)` over all clow sequences of length `k`; equals
/// `p_(n-k)`.
pub fn clow_sum_coefficient(a: &Matrix, k: usize, cap: u64) -> Result<RingElement> {
    let n = a.require_square()?;
    let seqs = enumerate_clow_sequences(n, k, cap)?;
    Ok(signed_sum(&seqs, a))
}

/// All coefficients `(p_n, ..., p_0)` from clow sums.
pub fn clow_sum_coefficients(a: &Matrix, cap: u64) -> Result<Vec<RingElement>> {
    let n = a.require_square()?;
    (0..=n).map(|k| clow_sum_coefficient(a, k, cap)).collect()
}

/// The sign-reversing, weight-preserving pairing on clow sequences.
///
/// Cycle covers (and the empty sequence) are fixed. Otherwise let `C_i` be
/// the last clow such that `C_(i+1), ..., C_j` are pairwise disjoint
/// simple cycles. Walk `C_i` from its head; at each vertex `v`:
/// if `v` lies on some later clow `C_p`, splice `C_p` into `C_i` at `v`;
/// else if `v` repeats an earlier vertex of `C_i`, cut the closed loop
/// ending at `v` out as a separate clow.
pub fn involution(cs: &ClowSequence) -> ClowSequence {
    let clows = &cs.clows;
    let mut start = clows.len();
    let mut used = BTreeSet::new();
    while start > 0 {
        let c = &clows[start - 1];
        if !c.is_simple() || c.vertices.iter().any(|v| used.contains(v)) {
            break;
        }
        used.extend(c.vertices.iter().copied());
        start -= 1;
    }
    if start == 0 {
        return cs.clone();
    }
    let target = start - 1;
    let walk = &clows[target].vertices;
    let suffix = &clows[start..];

    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (pos, &v) in walk.iter().enumerate().skip(1) {
        if let Some(p) = suffix.iter().position(|c| c.vertices.contains(&v)) {
            let other = &suffix[p].vertices;
            let at = other.iter().position(|&u| u == v).expect("contains v");
            let mut merged = walk[..pos].to_vec();
            merged.extend(other[at..].iter().chain(&other[..at]));
            merged.extend(&walk[pos..]);
            let mut out: Vec<Clow> = clows.clone();
            out[target] = Clow { vertices: merged };
            out.remove(start + p);
            return ClowSequence { clows: out };
        }
        if let Some(&first) = seen.get(&v) {
            let cycle = walk[first..pos].to_vec();
            let mut rest = walk[..first].to_vec();
            rest.extend(&walk[pos..]);
            let mut out: Vec<Clow> = clows.clone();
            out[target] = Clow { vertices: rest };
            out.push(Clow::from_cycle(cycle));
            out.sort_by_key(Clow::head);
            return ClowSequence { clows: out };
        }
        seen.insert(v, pos);
    }
    unreachable!("a clow that is not a disjoint simple cycle must hit one of the two cases")
}

/// How the involution partitions the sequences of one length.
#[derive(Debug, Clone, Default)]
pub struct InvolutionAnalysis {
    pub sequences: usize,
    pub fixed_points: Vec<ClowSequence>,
    /// Unordered pairs, each stored with the smaller sequence first.
    pub pairs: Vec<(ClowSequence, ClowSequence)>,
    /// Sequences on which a law failed, with the law's name.
    pub violations: Vec<(ClowSequence, &'static str)>,
}

/// Apply the involution to every sequence of length `k` on `n` vertices and
/// check its laws, optionally also checking weight preservation on `a`.
pub fn analyze_involution(
    n: usize,
    k: usize,
    a: Option<&Matrix>,
    cap: u64,
) -> Result<InvolutionAnalysis> {
    let seqs = enumerate_clow_sequences(n, k, cap)?;
    let mut report = InvolutionAnalysis {
        sequences: seqs.len(),
        ..Default::default()
    };
    let mut fail = |cs: &ClowSequence, law| report_violation(&mut report.violations, cs, law);
    let mut fixed = Vec::new();
    let mut pairs = Vec::new();
    for cs in &seqs {
        let image = involution(cs);
        if image == *cs {
            if !cs.is_cycle_cover() {
                fail(cs, "fixed point is not a cycle cover");
            }
            fixed.push(cs.clone());
            continue;
        }
        if cs.is_cycle_cover() {
            fail(cs, "cycle cover is moved");
        }
        if image.is_cycle_cover() {
            fail(cs, "image is a cycle cover");
        }
        if involution(&image) != *cs {
            fail(cs, "not self-inverse");
        }
        if image.length() != cs.length() {
            fail(cs, "length changed");
        }
        if image.sign_is_negative() == cs.sign_is_negative() {
            fail(cs, "sign not flipped");
        }
        if image.largest_vertex() > n || ClowSequence::new(image.clows.clone()).is_err() {
            fail(cs, "image is not a clow sequence");
        }
        if let Some(a) = a {
            if image.weight(a) != cs.weight(a) {
                fail(cs, "weight changed");
            }
        }
        if *cs < image {
            pairs.push((cs.clone(), image));
        }
    }
    report.fixed_points = fixed;
    report.pairs = pairs;
    Ok(report)
}

fn report_violation(
    out: &mut Vec<(ClowSequence, &'static str)>,
    cs: &ClowSequence,
    law: &'static str,
) {
    out.push((cs.clone(), law));
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).fold(1u128, |acc, i| acc.saturating_mul(i))
}

/// Every increasing `k`-subset of `1..=n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if n - v + 1 < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every permutation of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(k, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// All cycle covers whose support is some `k`-subset of `1..=n`, sorted.
///
/// Each permutation `sigma` of the support contributes the digraph with
/// edges `(i, sigma(i))`, split into cycles headed by their minima.
pub fn enumerate_cycle_covers(n: usize, k: usize, cap: u64) -> Result<Vec<ClowSequence>> {
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, bound: n });
    }
    check_cap(binomial(n, k).saturating_mul(factorial(k)), cap)?;
    let perms = permutations(k);
    let mut out = Vec::new();
    for support in subsets(n, k) {
        for perm in &perms {
            let mut visited = vec![false; k];
            let mut clows = Vec::new();
            for s in 0..k {
                if visited[s] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut cur = s;
                while !visited[cur] {
                    visited[cur] = true;
                    cycle.push(support[cur]);
                    cur = perm[cur];
                }
                clows.push(Clow { vertices: cycle });
            }
            out.push(ClowSequence { clows });
        }
    }
    out.sort();
    Ok(out)
}

/// Determinant by full permutation expansion.
pub fn leibniz_determinant(a: &Matrix) -> Result<RingElement> {
    let n = a.require_square()?;
    let spec = a.spec();
    Ok(permutations(n).iter().fold(spec.zero(), |acc, perm| {
        let term = perm
            .iter()
            .enumerate()
            .fold(spec.one(), |t, (r, &c)| &t * a.at(r, c));
        &acc + &term.signed(permutation_is_odd(perm))
    }))
}

/// `(-1)^k` times the sum of all principal `k x k` minors; equals
/// `p_(n-k)`.
pub fn minor_sum_coefficient(a: &Matrix, k: usize, cap: u64) -> Result<RingElement> {
    let n = a.require_square()?;
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, bound: n });
    }
    check_cap(binomial(n, k).saturating_mul(factorial(k)), cap)?;
    let spec = a.spec();
    let mut total = spec.zero();
    for keep in subsets(n, k) {
        total = &total + &leibniz_determinant(&a.principal_submatrix(&keep))?;
    }
    Ok(total.signed(k % 2 == 1))
}

/// All coefficients `(p_n, ..., p_0)` from principal minor sums.
pub fn minor_sum_coefficients(a: &Matrix, cap: u64) -> Result<Vec<RingElement>> {
    let n = a.require_square()?;
    (0..=n).map(|k| minor_sum_coefficient(a, k, cap)).collect()
}

/// Sum of weights of the single clows of length `l >= 2` headed at vertex 1.
///
/// Equals `R M^(l-2) S` for the first block split of `a`.
pub fn anchored_clow_sum(a: &Matrix, l: usize) -> Result<RingElement> {
    let n = a.require_square()?;
    if n < 2 || l < 2 {
        return Err(Error::Unsupported(
            "anchored clow sums need n >= 2 and l >= 2",
        ));
    }
    let cap = (n as u128 - 1).saturating_pow(l as u32 - 1);
    check_cap(cap, u64::MAX)?;
    Ok(walks_from(n, 1, l)
        .into_iter()
        .fold(a.spec().zero(), |acc, w| {
            &acc + &ClowSequence {
                clows: vec![Clow { vertices: w }],
            }
            .weight(a)
        }))
}
