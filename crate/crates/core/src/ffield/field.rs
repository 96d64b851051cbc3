//! Arithmetic in `GF(q)`: primes directly, small prime powers through
//! multiplication tables of `F_p[x]/(f)`.

use crate::error::{Error, Result};

/// Monic irreducible `f` for each supported prime power, as
/// `(q, p, low coefficients of f)`: `x^m + c_{m-1} x^{m-1} + ... + c_0`.
const IRREDUCIBLES: &[(u32, u32, &[u32])] = &[
    (4, 2, &[1, 1]),        // x^2 + x + 1
    (8, 2, &[1, 1, 0]),     // x^3 + x + 1
    (9, 3, &[2, 2]),        // x^2 + 2x + 2
    (16, 2, &[1, 1, 0, 0]), // x^4 + x + 1
    (25, 5, &[2, 4]),       // x^2 + 4x + 2
    (27, 3, &[1, 2, 0]),    // x^3 + 2x + 1
];

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n as u64 {
        if (n as u64).is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Prime,
    /// Elements `sum_i c_i x^i` encoded as `sum_i c_i p^i`.
    Extension {
        add: Vec<u32>,
        mul: Vec<u32>,
    },
}

/// The finite field with `q` elements, elements are `0..q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    q: u32,
    p: u32,
    repr: Repr,
    inv: Vec<u32>,
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        if is_prime(q) {
            let mut f = Field {
                q,
                p: q,
                repr: Repr::Prime,
                inv: Vec::new(),
            };
            if q <= 1 << 16 {
                f.inv = (0..q).map(|a| f.inv_slow(a)).collect();
            }
            return Ok(f);
        }
        let &(_, p, low) = IRREDUCIBLES
            .iter()
            .find(|(qq, _, _)| *qq == q)
            .ok_or(Error::FieldUnsupported(q))?;
        let m = low.len();
        let digits = |mut a: u32| -> Vec<u32> {
            (0..m)
                .map(|_| {
                    let c = a % p;
                    a /= p;
                    c
                })
                .collect()
        };
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &x| acc * p + x) };
        let n = q as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * n + b as usize] = encode(&s);

                let mut prod = vec![0u32; 2 * m - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // x^m = -(c_{m-1} x^{m-1} + ... + c_0)
                for k in (m..2 * m - 1).rev() {
                    let top = prod[k];
                    if top == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, c) in low.iter().enumerate() {
                        let sub = top * c % p;
                        prod[k - m + i] = (prod[k - m + i] + p - sub) % p;
                    }
                }
                mul[a as usize * n + b as usize] = encode(&prod[..m]);
            }
        }
        let mut f = Field {
            q,
            p,
            repr: Repr::Extension { add, mul },
            inv: Vec::new(),
        };
        f.inv = (0..q).map(|a| f.inv_slow(a)).collect();
        Ok(f)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.repr {
            Repr::Prime => ((a as u64 + b as u64) % self.q as u64) as u32,
            Repr::Extension { add, .. } => add[(a * self.q + b) as usize],
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.repr {
            Repr::Prime => ((a as u64 * b as u64) % self.q as u64) as u32,
            Repr::Extension { mul, .. } => mul[(a * self.q + b) as usize],
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match &self.repr {
            Repr::Prime => (self.q - a) % self.q,
            Repr::Extension { .. } => (0..self.q).find(|&b| self.add(a, b) == 0).unwrap(),
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if let Some(&x) = self.inv.get(a as usize) {
            return Some(x);
        }
        Some(self.inv_slow(a))
    }

    fn inv_slow(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        match self.repr {
            // a^(p-2) by square and multiply
            Repr::Prime => {
                let (mut base, mut e, mut acc) = (a as u64, self.q as u64 - 2, 1u64);
                let q = self.q as u64;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % q;
                    }
                    base = base * base % q;
                    e >>= 1;
                }
                acc as u32
            }
            Repr::Extension { .. } => (1..self.q).find(|&b| self.mul(a, b) == 1).unwrap(),
        }
    }

    /// `<x, y>` over the field.
    pub fn dot(&self, x: &[u32], y: &[u32]) -> u32 {
        x.iter()
            .zip(y)
            .fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    /// Rank of the given vectors (Gaussian elimination).
    pub fn rank(&self, vectors: &[Vec<u32>]) -> usize {
        let mut rows: Vec<Vec<u32>> = vectors.to_vec();
        let cols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][c]).unwrap();
            let pivot_row: Vec<u32> = rows[rank].iter().map(|&x| self.mul(x, inv)).collect();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == rank || row[c] == 0 {
                    continue;
                }
                let f = row[c];
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x = self.sub(*x, self.mul(f, pv));
                }
            }
            rows[rank] = pivot_row;
            rank += 1;
        }
        rank
    }
}
