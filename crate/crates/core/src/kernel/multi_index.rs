use std::fmt;

/// Exponent vector `alpha` of the monomial `x^alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0; d])
    }

    /// `k * e_i` in dimension `d`.
    pub fn axis(d: usize, i: usize, k: u32) -> Self {
        let mut e = vec![0; d];
        e[i] = k;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn has_odd(&self) -> bool {
        self.0.iter().any(|e| e % 2 == 1)
    }

    pub fn is_even(&self) -> bool {
        !self.has_odd()
    }

    /// Monomial notation, e.g. `x1^4*x3`; `1` for the constant.
    pub fn monomial(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// All `alpha` in `N_0^d` with `|alpha| <= max_deg`, in lexicographic order.
pub fn enumerate_multi_indices(d: usize, max_deg: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    fill(&mut current, 0, max_deg, &mut out, None);
    out
}

/// All `alpha` in `N_0^d` with `|alpha| == deg`, in lexicographic order.
pub fn multi_indices_of_degree(d: usize, deg: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    fill(&mut current, 0, deg, &mut out, Some(deg));
    out
}

fn fill(
    current: &mut Vec<u32>,
    pos: usize,
    budget: u32,
    out: &mut Vec<MultiIndex>,
    exact: Option<u32>,
) {
    if pos == current.len() {
        if exact.is_none() || budget == 0 {
            out.push(MultiIndex(current.clone()));
        }
        return;
    }
    if pos + 1 == current.len() && exact.is_some() {
        current[pos] = budget;
        out.push(MultiIndex(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in 0..=budget {
        current[pos] = e;
        fill(current, pos + 1, budget - e, out, exact);
    }
    current[pos] = 0;
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn one_variable() {
        assert_eq!(
            enumerate_multi_indices(1, 2),
            vec![mi(&[0]), mi(&[1]), mi(&[2])]
        );
    }

    #[test]
    fn two_variables_degree_one() {
        assert_eq!(
            enumerate_multi_indices(2, 1),
            vec![mi(&[0, 0]), mi(&[0, 1]), mi(&[1, 0])]
        );
    }

    #[test]
    fn stars_and_bars_count() {
        assert_eq!(enumerate_multi_indices(3, 4).len(), 35);
        for d in 1..=6usize {
            for m in 0..=8u32 {
                let all = enumerate_multi_indices(d, m);
                assert_eq!(all.len() as u128, binomial((d as u64) + m as u64, m as u64));
                assert!(all.windows(2).all(|w| w[0] < w[1]), "lex order, no dups");
                assert!(all.iter().all(|a| a.degree() <= m));
                let exact: usize = (0..=m).map(|k| multi_indices_of_degree(d, k).len()).sum();
                assert_eq!(exact, all.len());
            }
        }
    }

    #[test]
    fn monomial_notation() {
        assert_eq!(mi(&[4, 0, 1]).monomial(), "x1^4*x3");
        assert_eq!(mi(&[0, 0]).monomial(), "1");
        assert_eq!(mi(&[4, 0, 1]).to_string(), "(4,0,1)");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 4), 35);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
