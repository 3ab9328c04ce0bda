//! Permutations of `{1..n}` with exact composition, parity, and cycle-notation I/O.
//!
//! The product convention throughout the crate is left-to-right: `p.compose(q)`
//! applies `p` first, then `q`. This matches the way routes concatenate when
//! open 2-graphs are spliced, and it is the convention every other module
//! inherits.

use std::fmt;

use crate::error::{Error, Result};

/// Parity of a permutation or an integer: 0 for even, 1 for odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_integer(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl std::ops::BitXor for Parity {
    type Output = Parity;
    fn bitxor(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// An element of the symmetric group on `{1..n}`, stored as the image table
/// of `0..n` (zero-based internally; cycle notation is one-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    image: Box<[u8]>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        assert!(n >= 1 && n <= u8::MAX as usize, "degree out of range");
        Perm {
            image: (0..n as u8).collect(),
        }
    }

    /// Builds a permutation from zero-based images; rejects non-bijections.
    pub fn from_images(images: &[usize]) -> Result<Perm> {
        let n = images.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::BadPerm(format!("degree {n} out of range")));
        }
        let mut seen = vec![false; n];
        for &j in images {
            if j >= n || seen[j] {
                return Err(Error::BadPerm(format!(
                    "images {images:?} are not a bijection on 0..{n}"
                )));
            }
            seen[j] = true;
        }
        Ok(Perm {
            image: images.iter().map(|&j| j as u8).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// Image of `i` (zero-based).
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.image.iter().map(|&j| j as usize)
    }

    /// Left-to-right product: the result maps `i` to `q(p(i))`.
    pub fn compose(&self, q: &Perm) -> Result<Perm> {
        if self.degree() != q.degree() {
            return Err(Error::DegreeMismatch(self.degree(), q.degree()));
        }
        Ok(self.mul(q))
    }

    #[inline]
    pub(crate) fn mul(&self, q: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), q.degree());
        Perm {
            image: self.image.iter().map(|&j| q.image[j as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut image = vec![0u8; self.degree()].into_boxed_slice();
        for (i, &j) in self.image.iter().enumerate() {
            image[j as usize] = i as u8;
        }
        Perm { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Cycle count including fixed points, so that a permutation is even
    /// exactly when its size and its degree have the same integer parity.
    pub fn size(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
            }
        }
        count
    }

    pub fn parity(&self) -> Parity {
        Parity::of_integer(self.degree() - self.size())
    }

    /// True iff the permutation is a single cycle with no fixed points
    /// (equivalently, its size is 1).
    pub fn is_cyclic(&self) -> bool {
        self.size() == 1
    }

    /// Cycles in canonical order: each cycle starts at its smallest element,
    /// cycles sorted by smallest element, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted multiset of cycle lengths (the cycle type).
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        lens.sort_unstable();
        lens
    }

    /// Parses cycle notation. `"I"` and `"()"` both denote the identity.
    pub fn parse(text: &str, n: usize) -> Result<Perm> {
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::Parse(format!("degree {n} out of range")));
        }
        let trimmed = text.trim();
        if trimmed == "I" || trimmed == "()" {
            return Ok(Perm::identity(n));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let mut rest = trimmed;
        let mut any = false;
        while !rest.is_empty() {
            let Some(stripped) = rest.strip_prefix('(') else {
                return Err(Error::Parse(format!("expected '(' in {trimmed:?}")));
            };
            let Some(close) = stripped.find(')') else {
                return Err(Error::Parse(format!("unclosed cycle in {trimmed:?}")));
            };
            let body = &stripped[..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad symbol {tok:?} in {trimmed:?}")))?;
                if v < 1 || v > n {
                    return Err(Error::Parse(format!("symbol {v} out of range 1..={n}")));
                }
                if used[v - 1] {
                    return Err(Error::Parse(format!("repeated symbol {v} in {trimmed:?}")));
                }
                used[v - 1] = true;
                cycle.push(v - 1);
            }
            if cycle.len() < 2 {
                return Err(Error::Parse(format!(
                    "cycle needs at least two symbols in {trimmed:?}"
                )));
            }
            for k in 0..cycle.len() {
                images[cycle[k]] = cycle[(k + 1) % cycle.len()];
            }
            any = true;
            rest = stripped[close + 1..].trim_start();
        }
        if !any {
            return Err(Error::Parse(format!("no cycles in {trimmed:?}")));
        }
        Perm::from_images(&images)
    }
}

impl fmt::Display for Perm {
    /// Canonical cycle text: smallest element first in each cycle, cycles
    /// ordered by smallest element, fixed points omitted, identity as `I`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<Vec<usize>> =
            self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "I");
        }
        for cycle in nontrivial {
            write!(f, "(")?;
            for (k, v) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", v + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[n={}]", self, self.degree())
    }
}

/// All of S_n in lexicographic order of image tables. Factorial-sized; the
/// intended scale is n <= 12.
pub fn symmetric_group(n: usize) -> Vec<Perm> {
    assert!(n >= 1, "degree must be positive");
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(Perm::from_images(&current).expect("valid by construction"));
        // next_permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, n: usize) -> Perm {
        Perm::parse(text, n).unwrap()
    }

    #[test]
    fn identity_laws() {
        let id = Perm::identity(4);
        let q = p("(1 2 3)", 4);
        assert_eq!(id.compose(&q).unwrap(), q);
        assert_eq!(q.compose(&id).unwrap(), q);
    }

    #[test]
    fn inverse_pair_composes_to_identity() {
        let a = p("(1 2 3)", 3);
        let b = p("(1 3 2)", 3);
        assert!(a.compose(&b).unwrap().is_identity());
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn left_to_right_convention() {
        // Hand trace: i -> (1 2 3)(i) -> (1 2 3 4)(that).
        let a = p("(1 2 3)", 4);
        let b = p("(1 2 3 4)", 4);
        assert_eq!(a.compose(&b).unwrap(), p("(1 3 2 4)", 4));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = Perm::identity(3);
        let b = Perm::identity(4);
        assert!(matches!(
            a.compose(&b),
            Err(Error::DegreeMismatch(3, 4))
        ));
    }

    #[test]
    fn inverse_of_involution() {
        let a = p("(1 2)(3 4)", 4);
        assert_eq!(a.inverse(), a);
        assert_eq!(Perm::identity(5).inverse(), Perm::identity(5));
        assert_eq!(p("(1 2 3)", 3).inverse(), p("(1 3 2)", 3));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Perm::identity(4).parity(), Parity::Even);
        assert_eq!(p("(1 2)", 2).parity(), Parity::Odd);
        assert_eq!(p("(1 2 3 4)", 4).parity(), Parity::Odd);
    }

    #[test]
    fn size_counts_fixed_points() {
        assert_eq!(Perm::identity(5).size(), 5);
        assert_eq!(p("(1 2)(3 4)", 5).size(), 3);
        assert_eq!(p("(1 2 3 4 5)", 5).size(), 1);
    }

    #[test]
    fn cyclic_test() {
        assert!(p("(1 2 3 4)", 4).is_cyclic());
        assert!(!Perm::identity(3).is_cyclic());
        assert!(!p("(1 2)(3 4)", 4).is_cyclic());
    }

    #[test]
    fn parse_and_format() {
        let q = p("(1 4 3)", 4);
        assert_eq!(q.apply(0), 3);
        assert_eq!(q.apply(3), 2);
        assert_eq!(q.apply(2), 0);
        assert_eq!(Perm::parse("I", 5).unwrap(), Perm::identity(5));
        assert_eq!(Perm::parse("()", 5).unwrap(), Perm::identity(5));
        assert_eq!(p("(1 4)(2 3)", 4).to_string(), "(1 4)(2 3)");
        assert_eq!(p("(4 1)(3 2)", 4).to_string(), "(1 4)(2 3)");
        assert_eq!(p("(1,4) (2,3)", 4).to_string(), "(1 4)(2 3)");
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(Perm::parse("(1 5)", 4).is_err());
        assert!(Perm::parse("(1 1)", 4).is_err());
        assert!(Perm::parse("(1 2)(2 3)", 4).is_err());
        assert!(Perm::parse("(1 2", 4).is_err());
        assert!(Perm::parse("(1)", 4).is_err());
        assert!(Perm::parse("", 4).is_err());
        assert!(Perm::parse("1 2", 4).is_err());
    }

    #[test]
    fn symmetric_group_sizes() {
        assert_eq!(symmetric_group(1).len(), 1);
        assert_eq!(symmetric_group(4).len(), 24);
        assert_eq!(symmetric_group(6).len(), 720);
    }

    /// |C_n| = (n-1)!, parity constant on C_n and opposite to the parity of n.
    #[test]
    fn cyclic_class_size_and_parity() {
        for n in 1..=7usize {
            let cyclic: Vec<Perm> = symmetric_group(n)
                .into_iter()
                .filter(|q| q.is_cyclic())
                .collect();
            let fact: usize = (1..n).product();
            assert_eq!(cyclic.len(), fact.max(1));
            let expect = Parity::of_integer(n - 1);
            assert!(cyclic.iter().all(|q| q.parity() == expect));
            assert_ne!(expect, Parity::of_integer(n));
        }
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(&v).unwrap())
    }

    proptest! {
        #[test]
        fn parity_is_multiplicative((a, b) in (2usize..7).prop_flat_map(|n| (arb_perm(n), arb_perm(n)))) {
            let ab = a.compose(&b).unwrap();
            prop_assert_eq!(ab.parity(), a.parity() ^ b.parity());
        }

        #[test]
        fn parity_matches_size_identity(a in (1usize..8).prop_flat_map(arb_perm)) {
            let even = a.parity() == Parity::Even;
            prop_assert_eq!(even, Parity::of_integer(a.degree()) == Parity::of_integer(a.size()));
        }

        #[test]
        fn format_parse_round_trip(a in (1usize..9).prop_flat_map(arb_perm)) {
            let text = a.to_string();
            prop_assert_eq!(Perm::parse(&text, a.degree()).unwrap(), a);
        }

        /// Rotating a product of permutations preserves the cycle type.
        #[test]
        fn rotated_products_are_conjugate(
            (factors, cut) in (2usize..6).prop_flat_map(|n| {
                proptest::collection::vec(arb_perm(n), 2..6)
            }).prop_flat_map(|fs| {
                let len = fs.len();
                (Just(fs), 1..len)
            })
        ) {
            let n = factors[0].degree();
            let product = |seq: &[Perm]| {
                seq.iter().fold(Perm::identity(n), |acc, f| acc.compose(f).unwrap())
            };
            let full = product(&factors);
            let mut rotated = factors[cut..].to_vec();
            rotated.extend_from_slice(&factors[..cut]);
            prop_assert_eq!(full.cycle_lengths(), product(&rotated).cycle_lengths());
        }

        #[test]
        fn conjugation_preserves_cycle_type((a, x) in (2usize..7).prop_flat_map(|n| (arb_perm(n), arb_perm(n)))) {
            let conj = x.inverse().compose(&a).unwrap().compose(&x).unwrap();
            prop_assert_eq!(conj.cycle_lengths(), a.cycle_lengths());
        }
    }
}
