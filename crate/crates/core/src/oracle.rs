//! Brute-force check of the orbit machinery: the Coxeter group of a star
//! with finite legs, realized by exact integer matrices and enumerated by
//! length.
//!
//! Coordinates are `a_v`, then `a_{1..=M+1}` for every leg, then `a_v'`.
//! Leg node `i` swaps `a_i` and `a_{i+1}`, so a leg with `M` nodes needs
//! `M + 1` chain coordinates.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, Side, VertexId};
use crate::orbit::{bfs_truncated, OrbitError, OrbitState};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("a star needs at least 3 legs, got {0}")]
    TooFewLegs(usize),
    #[error("legs need at least one node")]
    EmptyLegs,
    #[error("more than {0} group elements")]
    ResourceCap(usize),
    #[error("matrix entry overflow at length {0}")]
    Overflow(usize),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// A star with `n` legs of `m` nodes each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedStar {
    pub n: usize,
    pub m: usize,
}

/// Generator index: 0 is `s_v`, then leg nodes leg by leg.
pub type Gen = u16;

/// A group element with one reduced word for it.
#[derive(Debug, Clone)]
pub struct Element {
    pub matrix: Vec<i32>,
    pub word: Vec<Gen>,
}

impl TruncatedStar {
    pub fn new(n: usize, m: usize) -> Result<TruncatedStar, OracleError> {
        if n < 3 {
            return Err(OracleError::TooFewLegs(n));
        }
        if m == 0 {
            return Err(OracleError::EmptyLegs);
        }
        Ok(TruncatedStar { n, m })
    }

    pub fn dim(&self) -> usize {
        2 + self.n * (self.m + 1)
    }

    pub fn generators(&self) -> usize {
        1 + self.n * self.m
    }

    fn prime(&self) -> usize {
        self.dim() - 1
    }

    /// Coordinate of `a_{i,k}`, `i` in `1..=m+1`, `k` in `0..n`.
    fn leg(&self, i: usize, k: usize) -> usize {
        1 + k * (self.m + 1) + (i - 1)
    }

    /// `(i, k)` of a leg generator.
    fn leg_of(&self, g: Gen) -> (usize, usize) {
        let j = g as usize - 1;
        (j % self.m + 1, j / self.m)
    }

    pub fn generator_name(&self, g: Gen) -> String {
        if g == 0 {
            "s_v".into()
        } else {
            let (i, k) = self.leg_of(g);
            format!("s_{{{i},{}}}", k + 1)
        }
    }

    /// Coroot pairing of `s_v` on a vector.
    fn central_pairing(&self, x: &[i64]) -> i64 {
        let mut p = x[self.prime()] + (2 - self.n as i64) * x[0];
        for k in 0..self.n {
            p += x[self.leg(1, k)];
        }
        p
    }

    /// The simple root of `g` as a vector.
    fn root(&self, g: Gen) -> Vec<i64> {
        let mut r = vec![0; self.dim()];
        if g == 0 {
            r[0] = 1;
            for k in 0..self.n {
                r[self.leg(1, k)] = 1;
            }
        } else {
            let (i, k) = self.leg_of(g);
            r[self.leg(i + 1, k)] = 1;
            r[self.leg(i, k)] = -1;
        }
        r
    }

    /// Applies the reflection `g` to a vector.
    pub fn reflect(&self, g: Gen, x: &mut [i64]) {
        if g == 0 {
            let p = self.central_pairing(x);
            x[0] -= p;
            for k in 0..self.n {
                x[self.leg(1, k)] -= p;
            }
        } else {
            let (i, k) = self.leg_of(g);
            x.swap(self.leg(i, k), self.leg(i + 1, k));
        }
    }

    /// Coefficients in the simple roots, ordered like the generators, or
    /// `None` if the vector is not in the root lattice.
    pub fn simple_coefficients(&self, x: &[i64]) -> Option<Vec<i64>> {
        if x[self.prime()] != 0 {
            return None;
        }
        let mut c = vec![0; self.generators()];
        c[0] = x[0];
        for k in 0..self.n {
            let mut prev = x[0];
            for i in 1..=self.m {
                prev -= x[self.leg(i, k)];
                c[1 + k * self.m + (i - 1)] = prev;
            }
            if prev != x[self.leg(self.m + 1, k)] {
                return None;
            }
        }
        Some(c)
    }

    /// `Some(true)` for a positive root combination, `Some(false)` for a
    /// negative one, `None` for mixed signs or zero.
    pub fn sign_of(&self, x: &[i64]) -> Option<bool> {
        let c = self.simple_coefficients(x)?;
        if c.iter().all(|&a| a >= 0) && c.iter().any(|&a| a > 0) {
            Some(true)
        } else if c.iter().all(|&a| a <= 0) && c.iter().any(|&a| a < 0) {
            Some(false)
        } else {
            None
        }
    }

    fn identity(&self) -> Vec<i32> {
        let d = self.dim();
        let mut m = vec![0; d * d];
        for i in 0..d {
            m[i * d + i] = 1;
        }
        m
    }

    /// `w · s_g`, or `None` on overflow.
    fn times(&self, w: &[i32], g: Gen) -> Option<Vec<i32>> {
        let d = self.dim();
        let mut out = w.to_vec();
        if g == 0 {
            // W s_v = W − (Wα) pᵀ
            let mut wa = vec![0i32; d];
            for (r, wa_r) in wa.iter_mut().enumerate() {
                let row = &w[r * d..(r + 1) * d];
                let mut s = row[0];
                for k in 0..self.n {
                    s = s.checked_add(row[self.leg(1, k)])?;
                }
                *wa_r = s;
            }
            let mut p = vec![0i32; d];
            p[0] = 2 - self.n as i32;
            for k in 0..self.n {
                p[self.leg(1, k)] = 1;
            }
            p[self.prime()] = 1;
            for r in 0..d {
                for c in 0..d {
                    if p[c] != 0 {
                        let delta = wa[r].checked_mul(p[c])?;
                        out[r * d + c] = out[r * d + c].checked_sub(delta)?;
                    }
                }
            }
        } else {
            let (i, k) = self.leg_of(g);
            let (a, b) = (self.leg(i, k), self.leg(i + 1, k));
            for r in 0..d {
                out.swap(r * d + a, r * d + b);
            }
        }
        Some(out)
    }

    fn column(&self, w: &[i32], c: usize) -> Vec<i64> {
        let d = self.dim();
        (0..d).map(|r| w[r * d + c] as i64).collect()
    }

    /// `Wᵀ G W = G` on every coordinate except `a_v'`, with
    /// `G = diag(−(N−2), 1, …, 1)`.
    pub fn preserves_form(&self, w: &[i32]) -> bool {
        let d = self.dim();
        let e = d - 1;
        let g = |i: usize| if i == 0 { 2 - self.n as i64 } else { 1 };
        for a in 0..e {
            for b in a..e {
                let mut s = 0i64;
                for r in 0..e {
                    s += g(r) * w[r * d + a] as i64 * w[r * d + b] as i64;
                }
                let want = if a == b { g(a) } else { 0 };
                if s != want {
                    return false;
                }
            }
        }
        true
    }

    /// True iff every leg simple root is sent to a positive root. The
    /// second component lists vectors that were not roots at all.
    pub fn is_xreduced(&self, w: &[i32]) -> (bool, usize) {
        let mut ok = true;
        let mut broken = 0;
        for k in 0..self.n {
            for i in 1..=self.m {
                let x: Vec<i64> = self
                    .column(w, self.leg(i + 1, k))
                    .iter()
                    .zip(self.column(w, self.leg(i, k)))
                    .map(|(a, b)| a - b)
                    .collect();
                match self.sign_of(&x) {
                    Some(true) => {}
                    Some(false) => ok = false,
                    None => {
                        ok = false;
                        broken += 1;
                    }
                }
            }
        }
        (ok, broken)
    }

    /// Identity on `a_v` and `a_v'`, a permutation within each leg.
    fn is_leg_permutation(&self, w: &[i32]) -> bool {
        let d = self.dim();
        let block = |r: usize| {
            if r == 0 || r == self.prime() {
                None
            } else {
                Some((r - 1) / (self.m + 1))
            }
        };
        for r in 0..d {
            let mut ones = 0;
            for c in 0..d {
                match w[r * d + c] {
                    0 => {}
                    1 => {
                        ones += 1;
                        let fixed = r == 0 || r == self.prime();
                        if (fixed && c != r) || block(r) != block(c) {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
            if ones != 1 {
                return false;
            }
        }
        true
    }

    /// `β_k = s_{i_m} ⋯ s_{i_{k+1}}(α_{i_k})` for the word `s_{i_1} ⋯ s_{i_m}`.
    pub fn inversion_roots(&self, word: &[Gen]) -> Vec<Vec<i64>> {
        (0..word.len())
            .map(|k| {
                let mut x = self.root(word[k]);
                for &g in &word[k + 1..] {
                    self.reflect(g, &mut x);
                }
                x
            })
            .collect()
    }

    /// Converts `a_v, a_{·,k}` into an orbit state of the matching star
    /// graph, legs placed in the graph's slot order.
    pub fn to_state(&self, graph: &Graph, x: &[i64]) -> OrbitState {
        let v = VertexId::new("v");
        let slots = graph
            .slots_at(&v)
            .expect("star vertex")
            .iter()
            .map(|s| {
                let k: usize = s.edge.0.parse::<usize>().expect("numbered legs") - 1;
                (1..=self.m + 1).map(|i| x[self.leg(i, k)]).collect()
            })
            .collect();
        OrbitState::new("v", x[0], slots)
    }
}

/// Counts and violations gathered during one enumeration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub n: usize,
    pub m: usize,
    pub max_len: usize,
    pub elements: Vec<usize>,
    pub xreduced: Vec<usize>,
    pub stabilizer: Vec<usize>,
    pub stabilizer_expected: Vec<usize>,
    /// Orbit states per level `1..=max_len+1`; filled by
    /// [`compare_with_orbit`].
    pub orbit_states: Vec<usize>,
    pub gram_violations: usize,
    pub not_a_root: usize,
    pub parity_violations: usize,
    pub image_collisions: usize,
    pub not_ending_in_s_v: usize,
    pub first_root_violations: usize,
    pub support_violations: usize,
    pub same_level_edges: usize,
    pub missing_neighbours: usize,
    pub stabilizer_violations: usize,
    /// Entries of `w(ε_{i,k})` with positive `a_v`. Informational only.
    pub positive_leg_images: usize,
    pub mismatches: Vec<String>,
    pub elapsed: Duration,
}

impl OracleReport {
    /// No violations of any kind.
    pub fn holds(&self) -> bool {
        self.violations() == 0 && self.mismatches.is_empty()
    }

    pub fn violations(&self) -> usize {
        self.gram_violations
            + self.not_a_root
            + self.parity_violations
            + self.image_collisions
            + self.not_ending_in_s_v
            + self.first_root_violations
            + self.support_violations
            + self.same_level_edges
            + self.missing_neighbours
            + self.stabilizer_violations
            + usize::from(self.stabilizer != self.stabilizer_expected)
    }

    /// Everything but the timing, which goes to a diagnostics stream.
    pub fn to_json(&self) -> Value {
        json!({
            "legs": self.n,
            "leg_length": self.m,
            "max_len": self.max_len,
            "elements_per_length": self.elements,
            "xreduced_per_length": self.xreduced,
            "orbit_states_per_level": self.orbit_states,
            "stabilizer_per_length": self.stabilizer,
            "stabilizer_expected": self.stabilizer_expected,
            "violations": {
                "gram": self.gram_violations,
                "not_a_root": self.not_a_root,
                "parity": self.parity_violations,
                "image_collisions": self.image_collisions,
                "not_ending_in_s_v": self.not_ending_in_s_v,
                "first_inversion_root": self.first_root_violations,
                "inversion_root_support": self.support_violations,
                "same_level_edges": self.same_level_edges,
                "missing_neighbours": self.missing_neighbours,
                "stabilizer": self.stabilizer_violations,
            },
            "positive_leg_images": self.positive_leg_images,
            "mismatches": self.mismatches,
            "holds": self.holds(),
        })
    }
}

/// Images `w(ε_v)` of X-reduced elements, grouped by length.
pub type Images = Vec<Vec<Vec<i64>>>;

/// Element counts by length of `S_{m+1}^n`, the leg subgroup.
pub fn mahonian(n: usize, m: usize, max_len: usize) -> Vec<usize> {
    let mut one = vec![1usize];
    for j in 1..=m + 1 {
        let mut next = vec![0usize; one.len() + j - 1];
        for (a, &c) in one.iter().enumerate() {
            for b in 0..j {
                next[a + b] += c;
            }
        }
        one = next;
    }
    let mut all = vec![1usize];
    for _ in 0..n {
        let mut next = vec![0usize; all.len() + one.len() - 1];
        for (a, &x) in all.iter().enumerate() {
            for (b, &y) in one.iter().enumerate() {
                next[a + b] += x * y;
            }
        }
        all = next;
    }
    all.resize(max_len + 1, 0);
    all
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub counts: Vec<usize>,
    /// Products `w s` found at the length of `w`.
    pub parity_violations: usize,
}

/// Breadth-first enumeration of all elements of length `≤ max_len`,
/// deduplicated by matrix. Only two layers are kept in memory; each
/// element is handed to `visit` together with its length.
pub fn enumerate(
    t: &TruncatedStar,
    max_len: usize,
    cap: usize,
    mut visit: impl FnMut(usize, &Element),
) -> Result<Enumeration, OracleError> {
    let mut counts = vec![1];
    let id = Element {
        matrix: t.identity(),
        word: Vec::new(),
    };
    visit(0, &id);
    let mut prev: HashSet<Vec<i32>> = HashSet::new();
    let mut cur = vec![id];
    let mut here: HashSet<Vec<i32>> = HashSet::from([t.identity()]);
    let mut total = 1;
    let mut parity_violations = 0;
    for len in 1..=max_len {
        let mut seen: HashSet<Vec<i32>> = HashSet::new();
        let mut next = Vec::new();
        for w in &cur {
            for g in 0..t.generators() as Gen {
                let m = t.times(&w.matrix, g).ok_or(OracleError::Overflow(len))?;
                if here.contains(&m) {
                    // w s never has the length of w
                    parity_violations += 1;
                    continue;
                }
                if prev.contains(&m) || seen.contains(&m) {
                    continue;
                }
                seen.insert(m.clone());
                let mut word = w.word.clone();
                word.push(g);
                next.push(Element { matrix: m, word });
                total += 1;
                if total > cap {
                    return Err(OracleError::ResourceCap(cap));
                }
            }
        }
        for e in &next {
            visit(len, e);
        }
        counts.push(next.len());
        prev = std::mem::replace(&mut here, seen);
        cur = next;
    }
    Ok(Enumeration {
        counts,
        parity_violations,
    })
}

/// Enumerates and runs every oracle-side check: the invariant form,
/// parity of lengths, X-reduced filtering, the stabilizer of `ε_v`, both
/// inversion-root statements and the absence of same-level edges among
/// the images `w(ε_v)`.
pub fn survey(t: &TruncatedStar, max_len: usize, cap: usize) -> Result<(OracleReport, Images), OracleError> {
    let start = Instant::now();
    let mut r = OracleReport {
        n: t.n,
        m: t.m,
        max_len,
        xreduced: vec![0; max_len + 1],
        stabilizer: vec![0; max_len + 1],
        stabilizer_expected: mahonian(t.n, t.m, max_len),
        ..OracleReport::default()
    };
    let mut images: Images = vec![Vec::new(); max_len + 1];
    let mut lengths: HashMap<Vec<i64>, usize> = HashMap::new();
    let en = enumerate(t, max_len, cap, |len, e| {
        if !t.preserves_form(&e.matrix) {
            r.gram_violations += 1;
        }
        for k in 0..t.n {
            for i in 1..=t.m + 1 {
                if t.column(&e.matrix, t.leg(i, k))[0] > 0 {
                    r.positive_leg_images += 1;
                }
            }
        }
        let image = t.column(&e.matrix, 0);
        let fixes = image.iter().enumerate().all(|(i, &x)| x == i64::from(i == 0));
        if fixes {
            r.stabilizer[len] += 1;
            if !t.is_leg_permutation(&e.matrix) {
                r.stabilizer_violations += 1;
            }
        }
        let (xred, broken) = t.is_xreduced(&e.matrix);
        r.not_a_root += broken;
        if !xred {
            return;
        }
        r.xreduced[len] += 1;
        if len > 0 {
            if *e.word.last().expect("nonempty word") != 0 {
                r.not_ending_in_s_v += 1;
            }
            let roots = t.inversion_roots(&e.word);
            for (j, beta) in roots.iter().enumerate() {
                let c = match t.simple_coefficients(beta) {
                    Some(c) if c.iter().all(|&a| a >= 0) => c,
                    _ => {
                        r.not_a_root += 1;
                        continue;
                    }
                };
                if c[0] <= 0 {
                    r.support_violations += 1;
                    if j == 0 {
                        r.first_root_violations += 1;
                    }
                }
            }
        }
        if lengths.insert(image.clone(), len).is_some() {
            r.image_collisions += 1;
        }
        images[len].push(image);
    })?;
    r.elements = en.counts;
    r.parity_violations = en.parity_violations;
    for (len, layer) in images.iter().enumerate() {
        for x in layer {
            for g in 0..t.generators() as Gen {
                let mut y = x.clone();
                t.reflect(g, &mut y);
                if &y == x {
                    continue;
                }
                match lengths.get(&y) {
                    Some(&l) if l == len => r.same_level_edges += 1,
                    Some(&l) if l + 1 == len || l == len + 1 => {}
                    Some(_) => r.missing_neighbours += 1,
                    None if len < max_len => r.missing_neighbours += 1,
                    None => {}
                }
            }
        }
    }
    r.elapsed = start.elapsed();
    Ok((r, images))
}

/// Runs [`survey`] and compares the images `w(ε_v)` of X-reduced elements
/// of length `ℓ` with the orbit states of level `ℓ + 1` found by BFS with
/// leg reflections restricted to the same truncation.
pub fn compare_with_orbit(t: &TruncatedStar, max_len: usize, cap: usize) -> Result<OracleReport, OracleError> {
    let start = Instant::now();
    let (mut r, images) = survey(t, max_len, cap)?;
    let graph = Graph::star(t.n, Side::Target);
    let sg = bfs_truncated(&graph, &VertexId::new("v"), max_len + 1, t.m)?;
    let by_level = sg.by_level();
    r.orbit_states = by_level.iter().map(Vec::len).collect();
    for (len, layer) in images.iter().enumerate() {
        let from_oracle: HashSet<OrbitState> = layer.iter().map(|x| t.to_state(&graph, x)).collect();
        let from_bfs: HashSet<OrbitState> = by_level
            .get(len)
            .map(|l| l.iter().map(|s| (*s).clone()).collect())
            .unwrap_or_default();
        if from_oracle.len() != layer.len() {
            r.mismatches.push(format!("length {len}: images are not distinct"));
        }
        let mut extra: Vec<String> = from_oracle.difference(&from_bfs).map(ToString::to_string).collect();
        let mut missing: Vec<String> = from_bfs.difference(&from_oracle).map(ToString::to_string).collect();
        extra.sort();
        missing.sort();
        for s in extra {
            r.mismatches.push(format!("length {len}: {s} is not an orbit state of level {}", len + 1));
        }
        for s in missing {
            r.mismatches.push(format!("level {}: {s} is not hit by the oracle", len + 1));
        }
    }
    r.elapsed = start.elapsed();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = 1_000_000;

    fn counts(n: usize, m: usize, len: usize) -> Vec<usize> {
        enumerate(&TruncatedStar::new(n, m).unwrap(), len, CAP, |_, _| {}).unwrap().counts
    }

    #[test]
    fn identity_only() {
        assert_eq!(counts(3, 1, 0), vec![1]);
        let r = compare_with_orbit(&TruncatedStar::new(3, 1).unwrap(), 0, CAP).unwrap();
        assert!(r.holds());
        assert_eq!(r.xreduced, vec![1]);
    }

    #[test]
    fn element_counts() {
        assert_eq!(counts(3, 1, 4), vec![1, 4, 9, 16, 23]);
        assert_eq!(counts(3, 2, 6), vec![1, 7, 27, 77, 183, 385, 740]);
        assert_eq!(counts(3, 3, 6), vec![1, 10, 54, 210, 661, 1795, 4376]);
        assert_eq!(counts(4, 3, 5), vec![1, 13, 90, 444, 1761, 6006]);
    }

    #[test]
    fn generators_and_filter() {
        let t = TruncatedStar::new(3, 2).unwrap();
        let id = t.identity();
        assert!(t.is_xreduced(&id).0);
        assert!(t.is_xreduced(&t.times(&id, 0).unwrap()).0);
        for g in 1..t.generators() as Gen {
            let s = t.times(&id, g).unwrap();
            assert!(!t.is_xreduced(&s).0, "{}", t.generator_name(g));
            assert!(t.preserves_form(&s));
            assert_eq!(t.times(&s, g).unwrap(), id);
        }
        assert_eq!(t.generator_name(3), "s_{1,2}");
        assert_eq!(t.generator_name(4), "s_{2,2}");
    }

    #[test]
    fn reflections_agree_with_matrices() {
        let t = TruncatedStar::new(4, 2).unwrap();
        let x: Vec<i64> = (0..t.dim() as i64).map(|i| i * i - 5).collect();
        for g in 0..t.generators() as Gen {
            let m = t.times(&t.identity(), g).unwrap();
            let d = t.dim();
            let by_matrix: Vec<i64> = (0..d)
                .map(|r| (0..d).map(|c| m[r * d + c] as i64 * x[c]).sum())
                .collect();
            let mut y = x.clone();
            t.reflect(g, &mut y);
            assert_eq!(y, by_matrix);
        }
    }

    #[test]
    fn mahonian_numbers() {
        assert_eq!(mahonian(1, 2, 4), vec![1, 2, 2, 1, 0]);
        assert_eq!(mahonian(3, 1, 3), vec![1, 3, 3, 1]);
    }

    #[test]
    fn small_stars_match_the_orbit() {
        for (n, m, len) in [(3, 3, 6), (4, 2, 5), (5, 1, 4)] {
            let r = compare_with_orbit(&TruncatedStar::new(n, m).unwrap(), len, CAP).unwrap();
            assert!(r.holds(), "{}", r.to_json());
            assert_eq!(r.xreduced, r.orbit_states);
            assert_eq!(r.positive_leg_images, 0);
        }
    }

    #[test]
    fn star_n3_m3() {
        let r = compare_with_orbit(&TruncatedStar::new(3, 3).unwrap(), 6, CAP).unwrap();
        assert_eq!(r.xreduced, vec![1, 1, 3, 6, 13, 22, 42]);
    }

    #[test]
    fn resource_cap() {
        let t = TruncatedStar::new(3, 2).unwrap();
        assert!(matches!(
            enumerate(&t, 6, 100, |_, _| {}),
            Err(OracleError::ResourceCap(100))
        ));
        assert!(TruncatedStar::new(2, 3).is_err());
    }
}
