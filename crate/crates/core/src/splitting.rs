//! Splitting types of vector bundles on the projective line.
//!
//! A bundle `O(a_1) ⊕ … ⊕ O(a_r)` is stored as its degree sequence in
//! non-increasing order. All constructors canonicalize, so two types are
//! equal exactly when they describe isomorphic bundles.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_list, int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingType {
    degrees: Vec<i64>,
}

impl SplittingType {
    /// Builds a type from degrees in any order.
    pub fn new(mut degrees: Vec<i64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::EmptyType);
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { degrees })
    }

    /// `O(d)^rank`.
    pub fn balanced_constant(rank: usize, d: i64) -> Result<Self> {
        Self::new(vec![d; rank])
    }

    /// The unique type of the given rank and degree whose entries differ by
    /// at most one.
    pub fn most_balanced(rank: usize, degree: i64) -> Result<Self> {
        if rank == 0 {
            return Err(Error::EmptyType);
        }
        let r = rank as i64;
        let base = degree.div_euclid(r);
        let extra = degree.rem_euclid(r) as usize;
        let degrees = (0..rank)
            .map(|i| if i < extra { base + 1 } else { base })
            .collect();
        Self::new(degrees)
    }

    /// Degrees, non-increasing.
    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn total_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn max_degree(&self) -> i64 {
        self.degrees[0]
    }

    pub fn min_degree(&self) -> i64 {
        *self.degrees.last().unwrap()
    }

    /// Degree divided by rank.
    pub fn slope(&self) -> Rational {
        rat(self.total_degree(), self.rank() as i64)
    }

    /// `(a_1/μ, …, a_r/μ)` in the stored order.
    ///
    /// For negative slope the entries keep the order of the degrees, so the
    /// panel is then non-decreasing.
    pub fn slope_panel(&self) -> Result<SlopePanel> {
        let mu = self.slope();
        if mu.is_zero() {
            return Err(Error::ZeroSlope);
        }
        let entries = self.degrees.iter().map(|&a| int(a) / &mu).collect();
        Ok(SlopePanel { entries })
    }

    /// Smallest slope panel entry `a_r / μ`; requires positive slope.
    pub fn minimal_slope_ratio(&self) -> Result<Rational> {
        let mu = self.slope();
        if mu.is_zero() {
            return Err(Error::ZeroSlope);
        }
        if mu.is_negative() {
            return Err(Error::NegativeSlope);
        }
        Ok(int(self.min_degree()) / mu)
    }

    /// Sums of the `k` smallest entries for `k = 1..=r`.
    pub fn tail_sums(&self) -> Vec<i64> {
        self.degrees
            .iter()
            .rev()
            .scan(0i64, |acc, &a| {
                *acc += a;
                Some(*acc)
            })
            .collect()
    }

    /// Whether a bundle of this type can specialize to `special`: for every
    /// `k` the `k` smallest degrees of `self` sum to at least those of
    /// `special`.
    pub fn specializes_to(&self, special: &SplittingType) -> Result<bool> {
        if self.rank() != special.rank() || self.total_degree() != special.total_degree() {
            return Err(Error::ShapeMismatch {
                rank_a: self.rank(),
                degree_a: self.total_degree(),
                rank_b: special.rank(),
                degree_b: special.total_degree(),
            });
        }
        Ok(self
            .tail_sums()
            .iter()
            .zip(special.tail_sums())
            .all(|(g, s)| *g >= s))
    }

    /// `a_1 - a_r`; the type is `k`-balanced for `k` equal to this width.
    pub fn balance_width(&self) -> u64 {
        (self.max_degree() - self.min_degree()) as u64
    }

    pub fn is_0_balanced(&self) -> bool {
        self.balance_width() == 0
    }

    /// Consecutive degrees differ by at most one.
    pub fn is_sequential(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] - w[1] <= 1)
    }

    /// Tensor product: all pairwise sums.
    pub fn tensor(&self, other: &SplittingType) -> SplittingType {
        let degrees = self
            .degrees
            .iter()
            .flat_map(|a| other.degrees.iter().map(move |b| a + b))
            .collect();
        Self::new(degrees).expect("nonempty")
    }

    pub fn dual(&self) -> SplittingType {
        Self::new(self.degrees.iter().map(|a| -a).collect()).expect("nonempty")
    }

    pub fn direct_sum(&self, other: &SplittingType) -> SplittingType {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        Self::new(degrees).expect("nonempty")
    }

    /// Twist by `O(c)`.
    pub fn twist(&self, c: i64) -> SplittingType {
        Self {
            degrees: self.degrees.iter().map(|a| a + c).collect(),
        }
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.degrees.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for SplittingType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let degrees = s
            .split(',')
            .map(|tok| {
                tok.trim().parse::<i64>().map_err(|_| Error::Parse {
                    what: "splitting type",
                    detail: format!("bad entry {tok:?} in {s:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(degrees)
    }
}

/// Entries `a_i / μ` of a splitting type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopePanel {
    entries: Vec<Rational>,
}

impl SlopePanel {
    pub fn from_entries(entries: Vec<Rational>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn minimum(&self) -> Rational {
        self.entries.iter().min().cloned().expect("nonempty panel")
    }

    pub fn sum(&self) -> Rational {
        self.entries.iter().sum()
    }
}

impl fmt::Display for SlopePanel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_list(&self.entries))
    }
}

/// Every non-increasing sequence of length `rank` with entries in
/// `lo..=hi`, in lexicographically descending order.
pub fn enumerate_types(rank: usize, lo: i64, hi: i64) -> Vec<SplittingType> {
    fn go(rank: usize, lo: i64, cap: i64, prefix: &mut Vec<i64>, out: &mut Vec<SplittingType>) {
        if prefix.len() == rank {
            out.push(SplittingType {
                degrees: prefix.clone(),
            });
            return;
        }
        for a in (lo..=cap).rev() {
            prefix.push(a);
            go(rank, lo, a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if rank > 0 && lo <= hi {
        go(rank, lo, hi, &mut Vec::with_capacity(rank), &mut out);
    }
    out
}

/// Sequential types of the given rank and degree, lexicographically
/// descending. The set is finite since entries of a sequential type of
/// degree `d` lie within `rank` of `d / rank`.
pub fn sequential_types(rank: usize, degree: i64) -> Vec<SplittingType> {
    if rank == 0 {
        return Vec::new();
    }
    let r = rank as i64;
    let center = degree.div_euclid(r);
    enumerate_types(rank, center - r, center + r)
        .into_iter()
        .filter(|t| t.total_degree() == degree && t.is_sequential())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> SplittingType {
        s.parse().unwrap()
    }

    #[test]
    fn slope_examples() {
        assert_eq!(t("2,1,1,0").slope(), int(1));
        assert_eq!(t("3,2,2,1").slope(), int(2));
        assert_eq!(t("0,0,0").slope(), int(0));
    }

    #[test]
    fn panel_examples() {
        let p = t("4,3,3,2").slope_panel().unwrap();
        assert_eq!(p.entries(), &[rat(4, 3), int(1), int(1), rat(2, 3)]);
        assert_eq!(p.to_string(), "4/3,1,1,2/3");
        assert_eq!(t("1,1").slope_panel().unwrap().entries(), &[int(1), int(1)]);
        assert_eq!(t("1,0,-1").slope_panel(), Err(Error::ZeroSlope));
    }

    #[test]
    fn negative_slope_panel_keeps_degree_order() {
        let p = t("0,-1,-2").slope_panel().unwrap();
        assert_eq!(p.entries(), &[int(0), int(1), int(2)]);
        assert_eq!(
            t("0,-1,-2").minimal_slope_ratio(),
            Err(Error::NegativeSlope)
        );
    }

    #[test]
    fn minimal_ratio_examples() {
        assert_eq!(t("4,3,3,2").minimal_slope_ratio().unwrap(), rat(2, 3));
        assert_eq!(t("1,1,1").minimal_slope_ratio().unwrap(), int(1));
        assert_eq!(t("3,0").minimal_slope_ratio().unwrap(), int(0));
        assert_eq!(t("1,-1").minimal_slope_ratio(), Err(Error::ZeroSlope));
    }

    #[test]
    fn specialization_examples() {
        assert!(t("1,1").specializes_to(&t("2,0")).unwrap());
        assert!(t("2,0").specializes_to(&t("2,0")).unwrap());
        assert!(!t("2,0").specializes_to(&t("1,1")).unwrap());
        assert!(matches!(
            t("1,0").specializes_to(&t("1,1")),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            t("1").specializes_to(&t("1,0")),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn width_and_sequential() {
        assert_eq!(t("2,1,0").balance_width(), 2);
        assert_eq!(t("5,5,5").balance_width(), 0);
        assert_eq!(t("2,2,1").balance_width(), 1);
        assert!(t("3,2,2,1").is_sequential());
        assert!(!t("3,1").is_sequential());
        assert!(t("7").is_sequential());
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(t("1,0").tensor(&t("1,0")), t("2,1,1,0"));
        assert_eq!(t("0").tensor(&t("4,-1,2")), t("4,2,-1"));
        assert_eq!(t("3").tensor(&t("-5")), t("-2"));
        assert_eq!(t("2,0,-3").dual(), t("3,0,-2"));
        assert_eq!(t("2,0").direct_sum(&t("1")), t("2,1,0"));
    }

    #[test]
    fn parsing_canonicalizes() {
        assert_eq!(t("0, 3,-1").degrees(), &[3, 0, -1]);
        assert!("".parse::<SplittingType>().is_err());
        assert!("1,,2".parse::<SplittingType>().is_err());
        assert_eq!(SplittingType::new(vec![]), Err(Error::EmptyType));
    }

    #[test]
    fn most_balanced_shape() {
        assert_eq!(SplittingType::most_balanced(4, 6).unwrap(), t("2,2,1,1"));
        assert_eq!(SplittingType::most_balanced(3, -4).unwrap(), t("-1,-1,-2"));
        assert_eq!(SplittingType::most_balanced(2, 0).unwrap(), t("0,0"));
    }

    #[test]
    fn sequential_enumeration_rank5_slope0() {
        let got: Vec<String> = sequential_types(5, 0)
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(
            got,
            vec!["2,1,0,-1,-2", "1,1,0,-1,-1", "1,0,0,0,-1", "0,0,0,0,0"]
        );
    }

    #[test]
    fn enumerate_types_counts() {
        // non-increasing 2-sequences over 3 values: C(4,2) = 6
        assert_eq!(enumerate_types(2, 0, 2).len(), 6);
        assert_eq!(enumerate_types(3, -1, 1).first().unwrap(), &t("1,1,1"));
    }
}
