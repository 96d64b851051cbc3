//! t-wise independent sample spaces over finite fields: vector sets with no
//! small dependent subset, the dual family of linear functionals, and an
//! exhaustive uniformity check.

pub mod array_file;
mod field;

use std::fmt;

use rand::seq::SliceRandom;

pub use array_file::{format_array, parse_array, read_array, write_array};
pub use field::Field;

use crate::error::{Error, Result};
use crate::kernel::binomial;
use crate::sampling::rng_from_seed;

/// A vector in `F_q^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqVector {
    pub q: u32,
    pub entries: Vec<u32>,
}

impl fmt::Display for FqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &e in &self.entries {
            match std::char::from_digit(e, 36) {
                Some(c) => write!(f, "{c}")?,
                None => write!(f, "[{e}]")?,
            }
        }
        Ok(())
    }
}

/// Multiset of rows in `{0..q-1}^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolArray {
    pub q: u32,
    pub d: usize,
    pub rows: Vec<Vec<u32>>,
}

impl SymbolArray {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Largest ambient space the greedy search will enumerate.
const MAX_SPACE: u64 = 1 << 22;

/// Big-endian base-`q` digits of `index`.
fn decode(index: u64, q: u32, r: usize) -> Vec<u32> {
    let mut out = vec![0u32; r];
    let mut x = index;
    for slot in out.iter_mut().rev() {
        *slot = (x % q as u64) as u32;
        x /= q as u64;
    }
    out
}

fn encode(v: &[u32], q: u32) -> u64 {
    v.iter().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
}

fn space_size(q: u32, r: u32) -> Option<u64> {
    (q as u64).checked_pow(r).filter(|&n| n <= MAX_SPACE)
}

/// Greedy set `S` in `F_q^r` in which every subset of size at most `t` is
/// linearly independent.
///
/// Nonzero vectors are visited in a seeded random order; `v` is kept when it
/// is not a combination of at most `t-1` vectors already kept. The layered
/// sets `L_j` (combinations of at most `j` kept vectors) make that test a
/// lookup.
pub fn independent_vector_set(q: u32, r: u32, t: u32, seed: u64) -> Result<Vec<FqVector>> {
    let field = Field::new(q)?;
    let size = space_size(q, r).ok_or(Error::GiveUp { q, d: 0, max_r: r })?;
    let r = r as usize;
    let mut order: Vec<u64> = (1..size).collect();
    order.shuffle(&mut rng_from_seed(seed));

    let depth = t.saturating_sub(1) as usize;
    // layers[j][x]: x is a combination of at most j kept vectors
    let mut layers = vec![vec![false; size as usize]; depth + 1];
    for layer in &mut layers {
        layer[0] = true;
    }
    let mut kept = Vec::new();
    for idx in order {
        if layers[depth][idx as usize] {
            continue;
        }
        let v = decode(idx, q, r);
        for j in (1..=depth).rev() {
            let below: Vec<u64> = layers[j - 1]
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(x, _)| x as u64)
                .collect();
            for u in below {
                let uv = decode(u, q, r);
                for c in 1..q {
                    let w: Vec<u32> = uv
                        .iter()
                        .zip(&v)
                        .map(|(&a, &b)| field.add(a, field.mul(c, b)))
                        .collect();
                    layers[j][encode(&w, q) as usize] = true;
                }
            }
        }
        kept.push(FqVector { q, entries: v });
    }
    Ok(kept)
}

/// Rows `phi_x = (<x, s>)_{s in S}` for every `x in F_q^r`, `x` in big-endian
/// index order.
pub fn dual_family(s: &[FqVector], q: u32, r: u32) -> Result<SymbolArray> {
    let field = Field::new(q)?;
    let size = space_size(q, r).ok_or(Error::GiveUp {
        q,
        d: s.len(),
        max_r: r,
    })?;
    let rows = (0..size)
        .map(|i| {
            let x = decode(i, q, r as usize);
            s.iter().map(|v| field.dot(&x, &v.entries)).collect()
        })
        .collect();
    Ok(SymbolArray {
        q,
        d: s.len(),
        rows,
    })
}

/// Upper end of the `r` search: `8 (t-1) log_q(8 q d)`.
pub fn max_dual_rank(q: u32, d: usize, t: u32) -> u32 {
    let v =
        8.0 * (t.saturating_sub(1)) as f64 * ((8 * q as usize * d) as f64).ln() / (q as f64).ln();
    v.floor().max(1.0) as u32
}

/// A t-wise independent array in `{0..q-1}^d` with `q^r` rows, `r` least.
pub fn twise_construct(q: u32, d: usize, t: u32, seed: u64) -> Result<SymbolArray> {
    Field::new(q)?;
    let max_r = max_dual_rank(q, d, t);
    for r in 1..=max_r {
        if space_size(q, r).is_none() {
            break;
        }
        let mut s = independent_vector_set(q, r, t, seed)?;
        if s.len() >= d {
            s.truncate(d);
            return dual_family(&s, q, r);
        }
    }
    Err(Error::GiveUp { q, d, max_r })
}

/// Result of [`twise_verify`].
#[derive(Clone, Debug, PartialEq)]
pub enum TwiseOutcome {
    Pass,
    /// `indices` are 0-based columns; `count` is how often `pattern` occurs.
    Counterexample {
        indices: Vec<usize>,
        pattern: Vec<u32>,
        count: usize,
        expected: f64,
    },
}

impl TwiseOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, TwiseOutcome::Pass)
    }
}

impl fmt::Display for TwiseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwiseOutcome::Pass => write!(f, "pass"),
            TwiseOutcome::Counterexample {
                indices,
                pattern,
                count,
                expected,
            } => {
                let idx: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
                let pat = FqVector {
                    q: 0,
                    entries: pattern.clone(),
                };
                write!(
                    f,
                    "fail: I={{{}}} pattern {pat} occurs {count} times (expected {expected})",
                    idx.join(",")
                )
            }
        }
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Checks that every projection onto at most `t` columns is uniform.
///
/// Subsets are visited by size, then lexicographically. A failure reports the
/// least frequent pattern on the first bad subset, ties going to the
/// lexicographically greatest pattern.
pub fn twise_verify(x: &SymbolArray, t: u32) -> TwiseOutcome {
    let n = x.rows.len();
    for k in 1..=(t as usize).min(x.d) {
        let cells = match (x.q as usize).checked_pow(k as u32) {
            Some(c) if c <= 1 << 24 => c,
            _ => usize::MAX,
        };
        let expected = n as f64 / (x.q as f64).powi(k as i32);
        for idx in subsets(x.d, k) {
            if cells == usize::MAX {
                // more patterns than rows can fill
                return TwiseOutcome::Counterexample {
                    pattern: vec![x.q - 1; k],
                    indices: idx,
                    count: 0,
                    expected,
                };
            }
            let mut counts = vec![0usize; cells];
            for row in &x.rows {
                let cell = idx
                    .iter()
                    .fold(0usize, |acc, &i| acc * x.q as usize + row[i] as usize);
                counts[cell] += 1;
            }
            let uniform = n.is_multiple_of(cells) && counts.iter().all(|&c| c == n / cells);
            if !uniform {
                let (cell, &count) = counts
                    .iter()
                    .enumerate()
                    .rev()
                    .min_by_key(|(_, &c)| c)
                    .expect("at least one cell");
                let pattern = decode(cell as u64, x.q, k);
                return TwiseOutcome::Counterexample {
                    indices: idx,
                    pattern,
                    count,
                    expected,
                };
            }
        }
    }
    TwiseOutcome::Pass
}

/// Largest `s` with `binom(s, t/2) <= q^r`: a ceiling on any set of vectors
/// in `F_q^r` whose `t`-subsets are independent.
pub fn independent_set_upper_bound(q: u32, r: u32, t: u32) -> Result<u128> {
    if t % 2 == 1 || t < 2 {
        return Err(Error::OddT(t));
    }
    let k = (t / 2) as u64;
    let cap = (q as u128).checked_pow(r).unwrap_or(u128::MAX);
    let fits = |s: u64| binomial_capped(s, k, cap) <= cap;
    let (mut lo, mut hi) = (k.saturating_sub(1), k.max(1));
    while fits(hi) {
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo as u128)
}

/// `binom(n, k)`, or something above `cap` when it would exceed `cap`.
fn binomial_capped(n: u64, k: u64, cap: u128) -> u128 {
    if k > n {
        return 0;
    }
    if n < 128 {
        return binomial(n, k);
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return cap.saturating_add(1),
        };
        if acc > cap {
            return acc;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn as_set(rows: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
        rows.iter().cloned().collect()
    }

    fn v(q: u32, e: &[u32]) -> FqVector {
        FqVector {
            q,
            entries: e.to_vec(),
        }
    }

    #[test]
    fn binary_plane_pairwise() {
        let s = independent_vector_set(2, 2, 2, 0).unwrap();
        let got: BTreeSet<_> = s.iter().map(|x| x.entries.clone()).collect();
        assert_eq!(got, as_set(&[vec![0, 1], vec![1, 0], vec![1, 1]]));
    }

    #[test]
    fn ternary_plane_projective_points() {
        for seed in 0..5 {
            let s = independent_vector_set(3, 2, 2, seed).unwrap();
            assert_eq!(s.len(), 4);
            let f = Field::new(3).unwrap();
            for a in 0..4 {
                for b in a + 1..4 {
                    assert_eq!(f.rank(&[s[a].entries.clone(), s[b].entries.clone()]), 2);
                }
            }
        }
    }

    #[test]
    fn small_binary_strength_three() {
        assert!(!independent_vector_set(2, 3, 3, 9).unwrap().is_empty());
    }

    #[test]
    fn dual_family_examples() {
        let s = [v(2, &[0, 1]), v(2, &[1, 0]), v(2, &[1, 1])];
        let a = dual_family(&s, 2, 2).unwrap();
        assert_eq!(
            a.rows,
            vec![vec![0, 0, 0], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]]
        );

        let a = dual_family(&[v(3, &[1, 0])], 3, 2).unwrap();
        let mut counts = [0; 3];
        for row in &a.rows {
            counts[row[0] as usize] += 1;
        }
        assert_eq!(counts, [3, 3, 3]);

        let a = dual_family(&[v(2, &[0, 1]), v(2, &[1, 0])], 2, 2).unwrap();
        assert_eq!(
            as_set(&a.rows),
            as_set(&[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]])
        );
    }

    #[test]
    fn construct_examples() {
        let a = twise_construct(2, 3, 2, 0).unwrap();
        assert_eq!(
            as_set(&a.rows),
            as_set(&[vec![0, 0, 0], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]])
        );
        let a = twise_construct(2, 3, 3, 0).unwrap();
        assert_eq!(a.len(), 8);
        assert_eq!(as_set(&a.rows).len(), 8);
        let a = twise_construct(3, 4, 2, 0).unwrap();
        assert_eq!(a.len(), 9);
        assert!(twise_verify(&a, 2).passed());
    }

    #[test]
    fn verify_examples() {
        let even = SymbolArray {
            q: 2,
            d: 3,
            rows: vec![vec![0, 0, 0], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]],
        };
        assert!(twise_verify(&even, 2).passed());
        let out = twise_verify(&even, 3);
        assert_eq!(
            out,
            TwiseOutcome::Counterexample {
                indices: vec![0, 1, 2],
                pattern: vec![1, 1, 1],
                count: 0,
                expected: 0.5,
            }
        );
        assert!(out
            .to_string()
            .starts_with("fail: I={1,2,3} pattern 111 occurs 0 times"));
        let lopsided = SymbolArray {
            q: 2,
            d: 2,
            rows: vec![vec![1, 1]],
        };
        assert!(twise_verify(&lopsided, 0).passed());
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(independent_set_upper_bound(2, 4, 4).unwrap(), 6);
        assert_eq!(independent_set_upper_bound(2, 1, 2).unwrap(), 2);
        assert_eq!(independent_set_upper_bound(3, 2, 2).unwrap(), 9);
        assert_eq!(independent_set_upper_bound(2, 3, 3), Err(Error::OddT(3)));
    }

    #[test]
    fn upper_bound_dominates_greedy() {
        for (q, r, t) in [(2, 4, 2), (2, 6, 4), (3, 3, 2), (3, 4, 4), (5, 3, 2)] {
            let s = independent_vector_set(q, r, t, 1).unwrap();
            assert!(s.len() as u128 <= independent_set_upper_bound(q, r, t).unwrap());
        }
    }

    #[test]
    fn lexicographic_subsets() {
        assert_eq!(
            subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn every_t_subset_has_full_rank() {
        for (q, r, t) in [
            (2, 5, 3),
            (3, 3, 3),
            (4, 3, 2),
            (5, 3, 3),
            (9, 2, 2),
            (2, 6, 4),
        ] {
            let f = Field::new(q).unwrap();
            let s = independent_vector_set(q, r, t, 3).unwrap();
            let k = (t as usize).min(s.len());
            if binomial(s.len() as u64, k as u64) > 100_000 {
                continue;
            }
            for idx in subsets(s.len(), k) {
                let vs: Vec<Vec<u32>> = idx.iter().map(|&i| s[i].entries.clone()).collect();
                assert_eq!(f.rank(&vs), k, "q={q} r={r} t={t}");
            }
        }
    }

    #[test]
    fn greedy_meets_size_floor() {
        for (q, r, t) in [(2, 6, 2), (2, 8, 3), (3, 4, 3), (5, 4, 3), (7, 3, 2)] {
            let s = independent_vector_set(q, r, t, 5).unwrap();
            let floor = ((q as f64).powf(r as f64 / (t - 1) as f64 - 1.0) / 8.0).floor();
            if floor >= 1.0 {
                assert!(s.len() as f64 >= floor);
            }
        }
    }

    #[test]
    fn dual_family_is_a_linear_code() {
        for (q, r) in [(2, 3), (3, 2), (4, 2)] {
            let f = Field::new(q).unwrap();
            let s = independent_vector_set(q, r, 2, 0).unwrap();
            let a = dual_family(&s, q, r).unwrap();
            let rows = as_set(&a.rows);
            for x in &a.rows {
                for y in &a.rows {
                    let z: Vec<u32> = x.iter().zip(y).map(|(&p, &q)| f.add(p, q)).collect();
                    assert!(rows.contains(&z));
                }
            }
        }
    }

    #[test]
    fn desk_scale_constructions_verify() {
        for q in [2, 3, 4, 5] {
            for d in 1..=8usize {
                for t in 2..=3u32 {
                    let a = twise_construct(q, d, t, 7).unwrap();
                    assert!(twise_verify(&a, t).passed(), "q={q} d={d} t={t}");
                    let budget = ((8 * q as usize * d) as f64).powi(t as i32 - 1);
                    assert!(a.len() as f64 <= budget);
                }
            }
        }
    }

    #[test]
    fn unsupported_field_is_reported() {
        assert_eq!(twise_construct(6, 3, 2, 0), Err(Error::FieldUnsupported(6)));
    }
}
