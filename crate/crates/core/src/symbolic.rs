//! Symbolic dynamics of the Bowen–Series map.
//!
//! On `D_j` the map acts as the generator of letter `j`. A periodic point of
//! period `n` is coded by a cyclically admissible word `w_1..w_n` (no letter
//! followed by its inverse, also across the wrap-around) and is the repelling
//! fixed point of `g_{w_n} ∘ … ∘ g_{w_1}` inside `D_{w_1}`.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;
use crate::scalar::{length_from_trace, Real};
use crate::schottky::SchottkyGroup;

/// Default cap on the number of stored orbits.
pub const DEFAULT_ENTRY_CAP: u128 = 100_000_000;
/// Largest admissible `|trace|` before enumeration aborts.
pub const TRACE_OVERFLOW: f64 = 1e120;
/// Traces at or below `2 + DEGENERATE_SLACK` are not hyperbolic.
pub const DEGENERATE_SLACK: f64 = 1e-12;

/// Word over the letters `0..2r` (letter `j + r` is the inverse of `j`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_admissible(&self, rank: usize) -> bool {
        is_admissible(&self.0, rank)
    }

    pub fn is_cyclically_admissible(&self, rank: usize) -> bool {
        is_cyclically_admissible(&self.0, rank)
    }

    /// Cyclic shift moving letter `k` to the front.
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        let n = v.len();
        if n > 0 {
            v.rotate_left(k % n);
        }
        Word(v)
    }

    /// Word of the inverse element: reversed with each letter inverted.
    pub fn inverse(&self, rank: usize) -> Word {
        let r = rank as u8;
        let m = 2 * r;
        Word(self.0.iter().rev().map(|&l| (l + r) % m).collect())
    }

    pub fn is_primitive(&self) -> bool {
        is_primitive(&self.0)
    }

    pub fn is_canonical_rotation(&self) -> bool {
        is_min_rotation(&self.0)
    }
}

impl fmt::Display for Word {
    /// One-based letters joined by dots, e.g. `1.2.3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", l + 1)?;
        }
        Ok(())
    }
}

pub(crate) fn is_admissible(w: &[u8], rank: usize) -> bool {
    let r = rank as u8;
    let m = 2 * r;
    w.iter().all(|&l| l < m) && w.windows(2).all(|p| p[1] != (p[0] + r) % m)
}

pub(crate) fn is_cyclically_admissible(w: &[u8], rank: usize) -> bool {
    let r = rank as u8;
    !w.is_empty()
        && is_admissible(w, rank)
        && w[0] != (w[w.len() - 1] + r) % (2 * r)
}

/// Not a proper power of a shorter word.
pub(crate) fn is_primitive(w: &[u8]) -> bool {
    let n = w.len();
    (1..n).filter(|p| n % p == 0).all(|p| (p..n).any(|i| w[i] != w[i - p]))
}

/// Lexicographically smallest among its rotations.
pub(crate) fn is_min_rotation(w: &[u8]) -> bool {
    let n = w.len();
    (1..n).all(|k| {
        for i in 0..n {
            let a = w[i];
            let b = w[(i + k) % n];
            if a != b {
                return a < b;
            }
        }
        true
    })
}

/// Data of one periodic orbit of the Bowen–Series map.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit<T> {
    pub word: Word,
    /// `|tr|` of the composite.
    pub trace: T,
    /// Geodesic length `2·arccosh(|tr|/2)`.
    pub length: T,
    /// `e^{length}`, the derivative of `B^n` at the fixed point.
    pub multiplier: T,
    /// Repelling fixed point of the composite, inside `D_{w_1}`.
    pub fixed_point: T,
}

/// Composite matrix `g_{w_n} ⋯ g_{w_1}`.
pub fn composite<T: Real>(g: &SchottkyGroup<T>, w: &[u8]) -> MoebiusTransform<T> {
    let mut m = MoebiusTransform::identity();
    for &l in w {
        m = g.generator(l as usize).mul_raw(&m);
    }
    m
}

/// Picks the fixed point of `m` inside (or nearest to) the disk of `first`.
fn repelling_fixed_point<T: Real>(g: &SchottkyGroup<T>, m: &MoebiusTransform<T>, first: usize) -> Option<T> {
    let (p, q) = m.fixed_points()?;
    let disk = g.disks()[first];
    let dist = |x: Option<T>| x.map(|x| (x - disk.center).abs()).unwrap_or(T::infinity());
    if dist(p) <= dist(q) { p } else { q }
}

/// Orbit data for a cyclically admissible word.
pub fn orbit_data<T: Real>(g: &SchottkyGroup<T>, w: &Word) -> Result<PeriodicOrbit<T>> {
    if !w.is_cyclically_admissible(g.rank()) {
        return Err(Error::Domain(format!("word {w} is not cyclically admissible")));
    }
    let m = composite(g, w.letters());
    orbit_from_composite(g, w.letters(), &m).map(|(trace, length, fixed_point)| PeriodicOrbit {
        word: w.clone(),
        trace,
        length,
        multiplier: length.exp(),
        fixed_point,
    })
}

fn orbit_from_composite<T: Real>(
    g: &SchottkyGroup<T>,
    w: &[u8],
    m: &MoebiusTransform<T>,
) -> Result<(T, T, T)> {
    let trace = m.trace().abs();
    if trace.to_f64_lossy() > TRACE_OVERFLOW || !trace.is_finite() {
        return Err(Error::TraceOverflow { length: w.len(), trace: trace.to_f64_lossy() });
    }
    if trace <= T::lit(2.0 + DEGENERATE_SLACK) {
        return Err(Error::Degenerate {
            word: Word::new(w.to_vec()).to_string(),
            trace: trace.to_f64_lossy(),
        });
    }
    let fp = repelling_fixed_point(g, m, w[0] as usize).ok_or_else(|| Error::Degenerate {
        word: Word::new(w.to_vec()).to_string(),
        trace: trace.to_f64_lossy(),
    })?;
    Ok((trace, length_from_trace(trace), fp))
}

/// `|γ^{-1}(z) - z|` at the stored fixed point; the inverse is contracting
/// there, so this is numerically stable even for long words.
pub fn fixed_point_residual<T: Real>(g: &SchottkyGroup<T>, orbit: &PeriodicOrbit<T>) -> T {
    let m = composite(g, orbit.word.letters());
    let z = Complex::new(orbit.fixed_point, T::zero());
    match m.inverse().apply(z) {
        Some(w) => (w - z).norm(),
        None => T::infinity(),
    }
}

/// All orbits of one word length, stored column-wise.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LengthBlock {
    pub n: usize,
    /// Concatenated words, `n` letters each.
    pub letters: Vec<u8>,
    pub traces: Vec<f64>,
    pub lengths: Vec<f64>,
    pub fixed_points: Vec<f64>,
}

impl LengthBlock {
    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.letters[i * self.n..(i + 1) * self.n]
    }

    pub fn orbit(&self, i: usize) -> PeriodicOrbit<f64> {
        PeriodicOrbit {
            word: Word::new(self.word(i).to_vec()),
            trace: self.traces[i],
            length: self.lengths[i],
            multiplier: self.lengths[i].exp(),
            fixed_point: self.fixed_points[i],
        }
    }

    fn push(&mut self, w: &[u8], trace: f64, length: f64, fp: f64) {
        self.letters.extend_from_slice(w);
        self.traces.push(trace);
        self.lengths.push(length);
        self.fixed_points.push(fp);
    }

    fn append(&mut self, other: LengthBlock) {
        self.letters.extend(other.letters);
        self.traces.extend(other.traces);
        self.lengths.extend(other.lengths);
        self.fixed_points.extend(other.fixed_points);
    }
}

/// Every cyclically admissible word up to `max_length`, with orbit data.
///
/// Rotations are separate entries; order is lexicographic within each length.
#[derive(Debug, Clone, PartialEq)]
pub struct WordTable {
    pub group_hash: u64,
    pub rank: usize,
    pub blocks: Vec<LengthBlock>,
}

impl WordTable {
    /// Table with no orbits (the determinant of the identity).
    pub fn empty(rank: usize) -> Self {
        WordTable { group_hash: 0, rank, blocks: Vec::new() }
    }

    pub fn max_length(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, n: usize) -> Option<&LengthBlock> {
        n.checked_sub(1).and_then(|i| self.blocks.get(i))
    }

    /// Number of words per length `1..=N`.
    pub fn counts(&self) -> Vec<usize> {
        self.blocks.iter().map(LengthBlock::len).collect()
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().map(LengthBlock::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn orbits(&self) -> impl Iterator<Item = PeriodicOrbit<f64>> + '_ {
        self.blocks.iter().flat_map(|b| (0..b.len()).map(move |i| b.orbit(i)))
    }

    /// `(word, length)` of primitive orbits, one per cyclic class.
    pub fn primitive_classes(&self) -> impl Iterator<Item = (&[u8], f64)> + '_ {
        self.blocks.iter().flat_map(|b| {
            (0..b.len()).filter_map(move |i| {
                let w = b.word(i);
                (is_min_rotation(w) && is_primitive(w)).then_some((w, b.lengths[i]))
            })
        })
    }

    /// Copy restricted to lengths `1..=n`.
    pub fn truncated(&self, n: usize) -> WordTable {
        WordTable {
            group_hash: self.group_hash,
            rank: self.rank,
            blocks: self.blocks.iter().take(n).cloned().collect(),
        }
    }

    /// Enumerates the missing lengths up to `n`, keeping existing blocks.
    pub fn extend_to(&mut self, g: &SchottkyGroup<f64>, n: usize, cap: u128) -> Result<()> {
        if g.hash() != self.group_hash {
            return Err(Error::Domain("word table belongs to a different group".into()));
        }
        let start = self.max_length() + 1;
        check_projection(g.rank(), n, cap)?;
        for len in start..=n {
            self.blocks.push(enumerate_length(g, len)?);
        }
        Ok(())
    }
}

/// Exact number of cyclically admissible words of length `n` for rank `r`:
/// `tr(A^n) = (2r-1)^n + 1 + (r-1)(1 + (-1)^n)`.
pub fn cyclic_word_count(rank: usize, n: usize) -> u128 {
    let q = (2 * rank - 1) as u128;
    let parity = if n % 2 == 0 { 2 } else { 0 };
    q.pow(n as u32) + 1 + (rank as u128 - 1) * parity
}

fn check_projection(rank: usize, n: usize, cap: u128) -> Result<()> {
    let mut projected: u128 = 0;
    for k in 1..=n {
        projected = projected.saturating_add(cyclic_word_count(rank, k));
    }
    if projected > cap {
        return Err(Error::Resource { projected, cap });
    }
    Ok(())
}

fn enumerate_length(g: &SchottkyGroup<f64>, n: usize) -> Result<LengthBlock> {
    let letters = g.letters();
    let parts: Vec<Result<LengthBlock>> = (0..letters)
        .into_par_iter()
        .map(|first| {
            let mut block = LengthBlock { n, ..Default::default() };
            let mut word = vec![0u8; n];
            word[0] = first as u8;
            let start = *g.generator(first);
            descend(g, &mut word, 1, start, &mut block)?;
            Ok(block)
        })
        .collect();
    let mut out = LengthBlock { n, ..Default::default() };
    for p in parts {
        out.append(p?);
    }
    Ok(out)
}

fn descend(
    g: &SchottkyGroup<f64>,
    word: &mut [u8],
    depth: usize,
    prefix: MoebiusTransform<f64>,
    block: &mut LengthBlock,
) -> Result<()> {
    let n = word.len();
    if depth == n {
        let first = word[0] as usize;
        if g.inverse_letter(word[n - 1] as usize) == first {
            return Ok(());
        }
        let (trace, length, fp) = orbit_from_composite(g, word, &prefix)?;
        block.push(word, trace, length, fp);
        return Ok(());
    }
    let prev_inv = g.inverse_letter(word[depth - 1] as usize);
    for l in 0..g.letters() {
        if l == prev_inv {
            continue;
        }
        word[depth] = l as u8;
        let next = g.generator(l).mul_raw(&prefix);
        descend(g, word, depth + 1, next, block)?;
    }
    Ok(())
}

/// Enumerates all cyclically admissible words of length `1..=n`.
pub fn enumerate_periodic_words(g: &SchottkyGroup<f64>, n: usize) -> Result<WordTable> {
    enumerate_periodic_words_capped(g, n, DEFAULT_ENTRY_CAP)
}

pub fn enumerate_periodic_words_capped(g: &SchottkyGroup<f64>, n: usize, cap: u128) -> Result<WordTable> {
    if n == 0 {
        return Err(Error::Domain("maximal word length must be at least 1".into()));
    }
    let mut table = WordTable { group_hash: g.hash(), rank: g.rank(), blocks: Vec::new() };
    table.extend_to(g, n, cap)?;
    Ok(table)
}

/// `max log B'(z)` over the stored fixed points, with `B = g_{w_1}` on `D_{w_1}`.
pub fn estimate_lambda_max(table: &WordTable, g: &SchottkyGroup<f64>) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for b in &table.blocks {
        for i in 0..b.len() {
            let gen = g.generator(b.word(i)[0] as usize);
            let z = b.fixed_points[i];
            let v = -2.0 * (gen.c() * z + gen.d()).abs().ln();
            if v > best {
                best = v;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::{cylinder, three_funnel};

    fn brute_force_count(rank: usize, n: usize) -> usize {
        let m = 2 * rank;
        let mut count = 0;
        let total = m.pow(n as u32);
        let mut w = vec![0u8; n];
        for code in 0..total {
            let mut c = code;
            for slot in w.iter_mut() {
                *slot = (c % m) as u8;
                c /= m;
            }
            if is_cyclically_admissible(&w, rank) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn counts_match_brute_force() {
        for rank in 1..=3 {
            for n in 1..=6 {
                assert_eq!(cyclic_word_count(rank, n) as usize, brute_force_count(rank, n), "r={rank} n={n}");
            }
        }
        // exhaustive filters over 16 pairs and 64 triples
        assert_eq!(brute_force_count(2, 2), 12);
        assert_eq!(brute_force_count(2, 3), 28);
    }

    #[test]
    fn cylinder_words_are_powers() {
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 3).unwrap();
        assert_eq!(t.counts(), vec![2, 2, 2]);
        let words: Vec<String> = t.orbits().map(|o| o.word.to_string()).collect();
        assert_eq!(words, ["1", "2", "1.1", "2.2", "1.1.1", "2.2.2"]);
    }

    #[test]
    fn rank_two_counts() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t = enumerate_periodic_words(&g, 6).unwrap();
        let expected: Vec<usize> = (1..=6).map(|n| brute_force_count(2, n)).collect();
        assert_eq!(t.counts(), expected);
        assert_eq!(&t.counts()[..3], &[4, 12, 28]);
        // every word exactly once
        for b in &t.blocks {
            let mut ws: Vec<&[u8]> = (0..b.len()).map(|i| b.word(i)).collect();
            ws.sort();
            ws.dedup();
            assert_eq!(ws.len(), b.len());
        }
    }

    #[test]
    fn cylinder_orbit_data() {
        let g = cylinder(2.0f64).unwrap();
        let o = orbit_data(&g, &Word::new(vec![0])).unwrap();
        assert!((o.length - 2.0).abs() < 1e-12);
        assert!((o.multiplier - 2f64.exp().powi(1)).abs() < 1e-10);
        let o2 = orbit_data(&g, &Word::new(vec![0, 0])).unwrap();
        assert!((o2.length - 4.0).abs() < 1e-12);
        assert!(matches!(orbit_data(&g, &Word::new(vec![0, 1])), Err(Error::Domain(_))));
    }

    #[test]
    fn x777_product_word_has_length_l3() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let o = orbit_data(&g, &Word::new(vec![0, 1])).unwrap();
        assert!((o.length - 7.0).abs() < 1e-9);
    }

    #[test]
    fn identity_generator_is_degenerate() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let mut gens = g.generators().to_vec();
        gens[0] = MoebiusTransform::identity();
        gens[2] = MoebiusTransform::identity();
        let bad = SchottkyGroup::from_parts(gens, g.disks().to_vec(), crate::schottky::Moduli::Custom);
        assert!(matches!(orbit_data(&bad, &Word::new(vec![0])), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn orbit_invariants() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t = enumerate_periodic_words(&g, 6).unwrap();
        for o in t.orbits() {
            assert!(o.multiplier > 1.0);
            assert!((o.length - o.multiplier.ln()).abs() < 1e-10);
            let disk = g.disks()[o.word.letters()[0] as usize];
            assert!(disk.contains(Complex::new(o.fixed_point, 0.0)), "{}", o.word);
            let res = fixed_point_residual(&g, &o);
            assert!(res < 1e-9 * (1.0 + o.fixed_point.abs()), "{} {res}", o.word);
            for k in 1..o.word.len() {
                let rot = orbit_data(&g, &o.word.rotate(k)).unwrap();
                assert!((rot.trace - o.trace).abs() <= 1e-10 * o.trace);
                assert!((rot.length - o.length).abs() < 1e-10);
            }
            let inv = orbit_data(&g, &o.word.inverse(2)).unwrap();
            assert!((inv.length - o.length).abs() < 1e-10);
        }
    }

    #[test]
    fn orbit_sums_are_order_independent() {
        let g = three_funnel(6.0f64, 7.0, 8.0).unwrap();
        let t = enumerate_periodic_words(&g, 5).unwrap();
        for b in &t.blocks {
            let mut a: Vec<f64> = b.lengths.iter().map(|l| (-0.3 * l).exp()).collect();
            let mut r = a.clone();
            r.reverse();
            a.sort_by(f64::total_cmp);
            r.sort_by(f64::total_cmp);
            let s1: f64 = a.iter().sum();
            let s2: f64 = r.iter().sum();
            assert_eq!(s1.to_bits(), s2.to_bits());
        }
    }

    #[test]
    fn lambda_max_examples() {
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 4).unwrap();
        assert!((estimate_lambda_max(&t, &g) - 2.0).abs() < 1e-10);

        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t4 = enumerate_periodic_words(&g, 4).unwrap();
        let t8 = enumerate_periodic_words(&g, 8).unwrap();
        let l4 = estimate_lambda_max(&t4, &g);
        assert!(l4 >= 7.0 - 1e-9);
        assert!(estimate_lambda_max(&t8, &g) >= l4);
    }

    #[test]
    fn resource_cap() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        assert!(matches!(
            enumerate_periodic_words_capped(&g, 10, 1000),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn extension_keeps_lower_lengths() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let mut t = enumerate_periodic_words(&g, 3).unwrap();
        t.extend_to(&g, 5, DEFAULT_ENTRY_CAP).unwrap();
        assert_eq!(t, enumerate_periodic_words(&g, 5).unwrap());
        assert_eq!(t.truncated(3), enumerate_periodic_words(&g, 3).unwrap());
    }

    #[test]
    fn primitive_classes_filter() {
        assert!(is_primitive(&[0, 1]));
        assert!(!is_primitive(&[0, 1, 0, 1]));
        assert!(is_min_rotation(&[0, 1, 1]));
        assert!(!is_min_rotation(&[1, 0, 1]));
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 5).unwrap();
        let prim: Vec<_> = t.primitive_classes().map(|(w, _)| w.to_vec()).collect();
        assert_eq!(prim, vec![vec![0], vec![1]]);
    }
}
