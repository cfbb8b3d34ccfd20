use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::rational::{factorial, Rational};

/// Exponent vector `I = (i_1, ..., i_n)`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// vectors lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// The unit vector `e_i`.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &e| acc * factorial(e))
    }

    pub fn factorial_q(&self) -> Rational {
        Rational::from_integer(self.factorial())
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.nvars(), other.nvars());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when `other <= self` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Sub-vector `[from, to)`.
    pub fn slice(&self, from: usize, to: usize) -> MultiIndex {
        MultiIndex(self.0[from..to].to_vec())
    }

    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// Product of binomials `Π C(i_m, j_m)`.
    pub fn binomial(&self, lower: &MultiIndex) -> BigInt {
        self.0
            .iter()
            .zip(&lower.0)
            .fold(BigInt::one(), |acc, (&n, &k)| acc * super::rational::binomial(n, k))
    }

    /// All `J` with `J <= self` componentwise.
    pub fn divisors(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.nvars())];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for prefix in &out {
                for j in 0..=e {
                    let mut p = prefix.clone();
                    p.push(j);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All multi-indices in `nvars` variables with total degree `<= max_degree`,
    /// in graded-lexicographic order.
    pub fn all_up_to(nvars: usize, max_degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            out.extend(Self::all_of_degree(nvars, d));
        }
        out.sort();
        out
    }

    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<MultiIndex> {
        fn rec(nvars: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == nvars {
                prefix.push(remaining);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=remaining {
                prefix.push(e);
                rec(nvars, remaining - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(nvars, degree, &mut Vec::new(), &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl serde::Serialize for MultiIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// `I!` for a multi-index.
pub fn multiindex_factorial(index: &MultiIndex) -> Rational {
    index.factorial_q()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn factorial_examples() {
        assert_eq!(multiindex_factorial(&MultiIndex::new(vec![0, 0])), int(1));
        assert_eq!(multiindex_factorial(&MultiIndex::new(vec![2, 1])), int(2));
        assert_eq!(multiindex_factorial(&MultiIndex::new(vec![3, 3])), int(36));
    }

    #[test]
    fn factorial_matches_brute_force_up_to_degree_8() {
        for nvars in 1..=3 {
            for idx in MultiIndex::all_up_to(nvars, 8) {
                let brute: i64 = idx
                    .exponents()
                    .iter()
                    .map(|&e| (1..=e as i64).product::<i64>())
                    .product();
                assert_eq!(multiindex_factorial(&idx), int(brute), "{idx}");
            }
        }
    }

    #[test]
    fn graded_order() {
        let a = MultiIndex::new(vec![0, 2]);
        let b = MultiIndex::new(vec![1, 0]);
        assert!(b < a);
        assert!(MultiIndex::new(vec![0, 1]) < MultiIndex::new(vec![1, 0]));
    }

    #[test]
    fn enumeration_counts() {
        // C(n + d, d) multi-indices of degree <= d
        assert_eq!(MultiIndex::all_up_to(2, 3).len(), 10);
        assert_eq!(MultiIndex::all_up_to(0, 3).len(), 1);
        assert_eq!(MultiIndex::new(vec![2, 1]).divisors().len(), 6);
    }
}
