//! Finitely supported exponent vectors.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector `α` with finite support, stored sparsely as
/// `(variable, exponent)` pairs with strictly increasing variables and
/// positive exponents. The empty list is `α = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<(u32, u32)>);

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex(Vec::new())
    }

    /// The unit vector `e_var` raised to `exp`.
    pub fn var_pow(var: u32, exp: u32) -> Self {
        if exp == 0 {
            Self::zero()
        } else {
            MultiIndex(vec![(var, exp)])
        }
    }

    pub fn var(var: u32) -> Self {
        Self::var_pow(var, 1)
    }

    /// Builds from arbitrary pairs; zero exponents are dropped and
    /// duplicated variables rejected.
    pub fn new(mut entries: Vec<(u32, u32)>) -> Result<Self> {
        entries.retain(|&(_, e)| e != 0);
        entries.sort_by_key(|&(v, _)| v);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Precondition(format!(
                "duplicate variable in multi-index {entries:?}"
            )));
        }
        Ok(MultiIndex(entries))
    }

    pub fn from_dense(exponents: &[u32]) -> Self {
        MultiIndex(
            exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(v, &e)| (v as u32, e))
                .collect(),
        )
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for &(v, e) in &self.0 {
            if (v as usize) < len {
                out[v as usize] = e;
            }
        }
        out
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.0
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    /// Largest variable index in the support.
    pub fn max_var(&self) -> Option<u32> {
        self.0.last().map(|&(v, _)| v)
    }

    /// `α + β`.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        MultiIndex(out)
    }

    /// `α - e_var`, or `None` when `α_var = 0`.
    pub fn lower(&self, var: u32) -> Option<MultiIndex> {
        let k = self.0.binary_search_by_key(&var, |&(v, _)| v).ok()?;
        let mut out = self.0.clone();
        if out[k].1 == 1 {
            out.remove(k);
        } else {
            out[k].1 -= 1;
        }
        Some(MultiIndex(out))
    }

    /// True when `β ≤ α` componentwise.
    pub fn divides(&self, alpha: &MultiIndex) -> bool {
        self.0.iter().all(|&(v, e)| alpha.exponent(v) >= e)
    }

    /// `α - β`, assuming `β ≤ α`.
    pub fn saturating_sub(&self, beta: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let r = e.saturating_sub(beta.exponent(v));
                    (r > 0).then_some((v, r))
                })
                .collect(),
        )
    }

    /// Applies a variable renaming; entries mapping to the same target
    /// are merged.
    pub fn remap(&self, map: impl Fn(u32) -> u32) -> MultiIndex {
        let mut out = MultiIndex::zero();
        for &(v, e) in &self.0 {
            out = out.add(&MultiIndex::var_pow(map(v), e));
        }
        out
    }

    /// `α!`
    pub fn factorial(&self) -> u128 {
        self.0
            .iter()
            .map(|&(_, e)| (1..=e as u128).product::<u128>())
            .product()
    }
}

/// Graded lexicographic order: lower total degree first; within a degree,
/// the index with the larger exponent on the earliest differing variable
/// comes first (so `x0^2 < x0 x1 < x1^2`).
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Less;
                    }
                    if vb < va {
                        return Ordering::Greater;
                    }
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.0.iter().map(|(v, e)| format!("{v}:{e}")).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of multi-indices over `num_vars` variables with `|α| ≤ max_degree`,
/// i.e. `C(num_vars + max_degree, num_vars)`, or `None` on overflow.
pub fn count_multiindices(num_vars: usize, max_degree: u32) -> Option<usize> {
    let n = num_vars as u128;
    let d = max_degree as u128;
    let k = n.min(d);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul(n + d + 1 - i)? / i;
    }
    usize::try_from(acc).ok()
}

/// All multi-indices over variables `0..num_vars` with total degree at most
/// `max_degree`, in graded-lex order.
pub fn enumerate_multiindices(num_vars: usize, max_degree: u32) -> Result<Vec<MultiIndex>> {
    let count = count_multiindices(num_vars, max_degree)
        .filter(|&c| c < isize::MAX as usize / 64)
        .ok_or(Error::SizeOverflow { num_vars, max_degree })?;
    let mut out = Vec::with_capacity(count);
    let mut scratch = Vec::new();
    for d in 0..=max_degree {
        compositions(num_vars, 0, d, &mut scratch, &mut out);
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

fn compositions(
    num_vars: usize,
    var: usize,
    remaining: u32,
    scratch: &mut Vec<(u32, u32)>,
    out: &mut Vec<MultiIndex>,
) {
    if remaining == 0 {
        out.push(MultiIndex(scratch.clone()));
        return;
    }
    if var >= num_vars {
        return;
    }
    if var + 1 == num_vars {
        scratch.push((var as u32, remaining));
        out.push(MultiIndex(scratch.clone()));
        scratch.pop();
        return;
    }
    for e in (0..=remaining).rev() {
        if e > 0 {
            scratch.push((var as u32, e));
        }
        compositions(num_vars, var + 1, remaining - e, scratch, out);
        if e > 0 {
            scratch.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomials() {
        assert_eq!(enumerate_multiindices(2, 2).unwrap().len(), 6);
        assert_eq!(enumerate_multiindices(3, 4).unwrap().len(), 35);
        assert_eq!(enumerate_multiindices(3, 0).unwrap(), vec![MultiIndex::zero()]);
    }

    #[test]
    fn univariate_order() {
        let got = enumerate_multiindices(1, 3).unwrap();
        let want: Vec<_> = (0..=3).map(|e| MultiIndex::var_pow(0, e)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let got = enumerate_multiindices(4, 5).unwrap();
        assert!(got.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(
            enumerate_multiindices(1_000_000, 1_000),
            Err(Error::SizeOverflow { .. })
        ));
    }

    #[test]
    fn add_and_lower() {
        let a = MultiIndex::from_dense(&[2, 0, 1]);
        let b = MultiIndex::from_dense(&[0, 1, 1]);
        assert_eq!(a.add(&b), MultiIndex::from_dense(&[2, 1, 2]));
        assert_eq!(a.lower(0), Some(MultiIndex::from_dense(&[1, 0, 1])));
        assert_eq!(a.lower(1), None);
        assert!(MultiIndex::var(2).divides(&a));
    }

    #[test]
    fn rejects_duplicates() {
        assert!(MultiIndex::new(vec![(1, 1), (1, 2)]).is_err());
        assert_eq!(MultiIndex::new(vec![(3, 0)]).unwrap(), MultiIndex::zero());
    }
}
