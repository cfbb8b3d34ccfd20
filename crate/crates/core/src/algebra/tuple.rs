use std::fmt;

use super::rational::Rational;
use crate::error::{Error, Result};

/// Strictly increasing tuple of 1-based indices, an element of `Λ_n^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedTuple(Vec<usize>);

impl OrderedTuple {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.iter().any(|&i| i == 0) {
            return Err(Error::InvalidArgument("tuple indices are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "tuple {indices:?} is not strictly increasing"
            )));
        }
        Ok(OrderedTuple(indices))
    }

    pub fn empty() -> Self {
        OrderedTuple(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        OrderedTuple((1..=n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn last_index(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    /// Indices in `1..=n` not in the tuple.
    pub fn complement(&self, n: usize) -> OrderedTuple {
        OrderedTuple((1..=n).filter(|&i| !self.contains(i)).collect())
    }

    pub fn insert(&self, i: usize) -> Option<OrderedTuple> {
        match self.0.binary_search(&i) {
            Ok(_) => None,
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, i);
                Some(OrderedTuple(v))
            }
        }
    }

    pub fn remove_at(&self, pos: usize) -> OrderedTuple {
        let mut v = self.0.clone();
        v.remove(pos);
        OrderedTuple(v)
    }

    /// Number of entries strictly below `i`.
    pub fn count_below(&self, i: usize) -> usize {
        self.0.iter().filter(|&&a| a < i).count()
    }

    /// Entries in `[lo, hi]` shifted down by `lo - 1`.
    pub fn window(&self, lo: usize, hi: usize) -> OrderedTuple {
        OrderedTuple(
            self.0
                .iter()
                .filter(|&&a| a >= lo && a <= hi)
                .map(|&a| a + 1 - lo)
                .collect(),
        )
    }

    /// `Λ_n^r` in lexicographic order.
    pub fn all(n: usize, r: usize) -> Vec<OrderedTuple> {
        fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<OrderedTuple>) {
            if cur.len() == r {
                out.push(OrderedTuple(cur.clone()));
                return;
            }
            for i in start..=n {
                if n - i + 1 < r - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, n, r, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if r <= n {
            rec(1, n, r, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for OrderedTuple {
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

impl serde::Serialize for OrderedTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Sign of the permutation sorting `seq`, together with the sorted tuple.
/// `None` if an index repeats.
pub fn sort_sign(seq: &[usize]) -> Option<(i8, OrderedTuple)> {
    let mut v = seq.to_vec();
    let mut sign = 1i8;
    // insertion sort counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((sign, OrderedTuple(v)))
}

/// The constant `ε` with `dz_A ∧ dz_B = ε · dz_1 ∧ ... ∧ dz_n`: zero when the
/// tuples overlap or do not cover `{1..n}`, otherwise the parity of the
/// permutation sorting the concatenation.
pub fn wedge_sign(a: &OrderedTuple, b: &OrderedTuple, n: usize) -> Rational {
    sign_q(wedge_sign_i8(a, b, n))
}

pub(crate) fn wedge_sign_i8(a: &OrderedTuple, b: &OrderedTuple, n: usize) -> i8 {
    if a.len() + b.len() != n || a.last_index() > n || b.last_index() > n {
        return 0;
    }
    let seq: Vec<usize> = a.0.iter().chain(&b.0).copied().collect();
    match sort_sign(&seq) {
        Some((s, _)) => s,
        None => 0,
    }
}

pub(crate) fn sign_q(s: i8) -> Rational {
    super::rational::int(s as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn t(v: &[usize]) -> OrderedTuple {
        OrderedTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn wedge_sign_examples() {
        assert_eq!(wedge_sign(&t(&[1]), &t(&[2]), 2), int(1));
        assert_eq!(wedge_sign(&t(&[2]), &t(&[1]), 2), int(-1));
        assert_eq!(wedge_sign(&t(&[1]), &t(&[1]), 2), int(0));
        assert_eq!(wedge_sign(&t(&[1]), &t(&[]), 2), int(0));
    }

    #[test]
    fn wedge_sign_graded_symmetry() {
        for n in 0..=5 {
            for r in 0..=n {
                for a in OrderedTuple::all(n, r) {
                    let b = a.complement(n);
                    let ab = wedge_sign(&a, &b, n);
                    let ba = wedge_sign(&b, &a, n);
                    let expect = if (a.len() * b.len()) % 2 == 0 { int(1) } else { int(-1) };
                    assert_eq!(ab * ba, expect);
                }
            }
        }
    }

    #[test]
    fn rejects_unsorted() {
        assert!(OrderedTuple::new(vec![2, 1]).is_err());
        assert!(OrderedTuple::new(vec![0]).is_err());
    }

    #[test]
    fn enumeration() {
        assert_eq!(OrderedTuple::all(4, 2).len(), 6);
        assert!(OrderedTuple::all(2, 3).is_empty());
        assert_eq!(OrderedTuple::all(3, 0), vec![OrderedTuple::empty()]);
    }

    #[test]
    fn sort_sign_detects_repeats() {
        assert!(sort_sign(&[1, 3, 1]).is_none());
        assert_eq!(sort_sign(&[3, 1, 2]).unwrap().0, 1);
        assert_eq!(sort_sign(&[2, 1, 3]).unwrap().0, -1);
    }
}
