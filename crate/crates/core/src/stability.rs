//! Glue-and-smooth balancing of sequential splitting types, plus the
//! Harder–Narasimhan restriction bounds.
//!
//! [`balance_step`] glues two copies of a curve along the dual alignment and
//! replaces the type by an admissible sequential smoothing. Under the
//! default [`Policy::Worst`] the engine always takes the least balanced
//! candidate, so convergence under that policy holds for every smoothing the
//! degree bounds allow.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::nodal::{admissible_smoothings, glue, Alignment};
use crate::rational::{int, rat, Rational};
use crate::splitting::SplittingType;

/// Largest rank the balancing engine accepts.
pub const MAX_BALANCE_RANK: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// Largest width; ties go to the lexicographically largest type.
    #[default]
    Worst,
    /// Smallest width; ties go to the lexicographically smallest type.
    Best,
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "worst" => Ok(Policy::Worst),
            "best" => Ok(Policy::Best),
            other => Err(Error::Parse {
                what: "policy",
                detail: format!("expected worst or best, got {other:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalanceOptions {
    pub policy: Policy,
    /// Keep only sequential smoothings.
    pub sequential: bool,
}

impl Default for BalanceOptions {
    fn default() -> Self {
        Self {
            policy: Policy::Worst,
            sequential: true,
        }
    }
}

/// Number of glued copies needed before the slope becomes an integer:
/// `rank / gcd(degree, rank)`.
pub fn integer_slope_copy_factor(t: &SplittingType) -> u64 {
    let r = t.rank() as i64;
    (r / t.total_degree().gcd(&r)) as u64
}

fn check_balance_input(t: &SplittingType) -> Result<()> {
    if t.rank() > MAX_BALANCE_RANK {
        return Err(Error::RankTooLarge(t.rank()));
    }
    if t.total_degree() % t.rank() as i64 != 0 {
        return Err(Error::NonIntegerSlope {
            degree: t.total_degree(),
            rank: t.rank(),
            copy_factor: integer_slope_copy_factor(t),
        });
    }
    if !t.is_sequential() {
        return Err(Error::NotSequential(t.to_string()));
    }
    Ok(())
}

/// One glue-and-smooth step with the default options.
///
/// A 0-balanced type is already as good as it gets and is returned
/// unchanged; no gluing is performed for it.
pub fn balance_step(t: &SplittingType) -> Result<SplittingType> {
    balance_step_with(t, BalanceOptions::default())
}

pub fn balance_step_with(t: &SplittingType, opts: BalanceOptions) -> Result<SplittingType> {
    check_balance_input(t)?;
    if t.is_0_balanced() {
        return Ok(t.clone());
    }
    let z = glue(t, t, &Alignment::dual(t.rank()))?;
    let candidates = admissible_smoothings(&z, opts.sequential);
    let chosen = match opts.policy {
        Policy::Worst => candidates
            .into_iter()
            .max_by(|a, b| (a.balance_width(), a.degrees()).cmp(&(b.balance_width(), b.degrees()))),
        Policy::Best => candidates
            .into_iter()
            .min_by(|a, b| (a.balance_width(), a.degrees()).cmp(&(b.balance_width(), b.degrees()))),
    };
    // The most balanced type of the right degree always meets the bounds of
    // a dual-aligned gluing, so the candidate set is never empty here.
    Ok(chosen.expect("balanced type is always admissible"))
}

/// Orbit of a type under repeated balancing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceTrace {
    pub states: Vec<SplittingType>,
    pub steps: usize,
    /// Whether the last state is 0-balanced. `false` means the step cap was
    /// hit first.
    pub converged: bool,
}

impl BalanceTrace {
    pub fn initial(&self) -> &SplittingType {
        &self.states[0]
    }

    pub fn last(&self) -> &SplittingType {
        self.states.last().unwrap()
    }

    /// `2^steps` glued copies of the starting curve.
    pub fn copies(&self) -> BigUint {
        BigUint::one() << self.steps
    }
}

impl fmt::Display for BalanceTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.states.iter().enumerate() {
            writeln!(f, "step {i}: {s}  width {}", s.balance_width())?;
        }
        writeln!(
            f,
            "steps: {}  copies: {}  converged: {}",
            self.steps,
            self.copies(),
            if self.converged { "yes" } else { "no" }
        )
    }
}

pub fn balance(t: &SplittingType, max_steps: usize) -> Result<BalanceTrace> {
    balance_with(t, max_steps, BalanceOptions::default())
}

/// Iterates [`balance_step_with`] until the type is 0-balanced or
/// `max_steps` steps were taken.
pub fn balance_with(
    t: &SplittingType,
    max_steps: usize,
    opts: BalanceOptions,
) -> Result<BalanceTrace> {
    check_balance_input(t)?;
    let mut states = vec![t.clone()];
    let mut steps = 0;
    while !states[steps].is_0_balanced() && steps < max_steps {
        let next = balance_step_with(&states[steps], opts)?;
        states.push(next);
        steps += 1;
    }
    let converged = states[steps].is_0_balanced();
    Ok(BalanceTrace {
        states,
        steps,
        converged,
    })
}

/// Harder–Narasimhan data: `(rank, slope)` of each graded piece, slopes
/// strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationData {
    pieces: Vec<(usize, Rational)>,
}

impl FiltrationData {
    pub fn new(pieces: Vec<(usize, Rational)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidFiltration("no pieces".into()));
        }
        if pieces.iter().any(|(r, _)| *r == 0) {
            return Err(Error::InvalidFiltration("piece of rank 0".into()));
        }
        if pieces.windows(2).any(|w| w[0].1 <= w[1].1) {
            return Err(Error::InvalidFiltration(
                "slopes must be strictly decreasing".into(),
            ));
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[(usize, Rational)] {
        &self.pieces
    }

    pub fn rank(&self) -> usize {
        self.pieces.iter().map(|p| p.0).sum()
    }

    /// Each slope repeated by its rank.
    pub fn expected_degrees(&self) -> Vec<Rational> {
        self.pieces
            .iter()
            .flat_map(|(r, s)| std::iter::repeat_n(s.clone(), *r))
            .collect()
    }

    /// Half the largest piece rank.
    pub fn deviation_bound(&self) -> Rational {
        let max_rank = self.pieces.iter().map(|p| p.0).max().unwrap();
        rat(max_rank as i64, 2)
    }
}

/// Expected restricted degrees and the strict sup-distance bound a general
/// curve's splitting type must satisfy against them.
pub fn hn_restriction_bounds(f: &FiltrationData) -> (Vec<Rational>, Rational) {
    (f.expected_degrees(), f.deviation_bound())
}

/// Whether `t` is within the HN restriction bound of `f`.
pub fn sp_feasible(t: &SplittingType, f: &FiltrationData) -> Result<bool> {
    if t.rank() != f.rank() {
        return Err(Error::RankMismatch {
            left: t.rank(),
            right: f.rank(),
        });
    }
    let (expected, bound) = hn_restriction_bounds(f);
    Ok(t.degrees()
        .iter()
        .zip(&expected)
        .all(|(&a, v)| (int(a) - v).abs() < bound))
}

/// `1 - n^2 / (2 deg)`: lower bound for the minimal slope ratio of a
/// general curve of anticanonical degree `deg` when the tangent bundle is
/// semistable.
pub fn minimal_slope_ratio_lower_bound(n: u64, deg: u64) -> Result<Rational> {
    if deg == 0 {
        return Err(Error::ZeroDegree);
    }
    let n = n as i64;
    Ok(Rational::one() - rat(n * n, 2 * deg as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> SplittingType {
        s.parse().unwrap()
    }

    #[test]
    fn step_examples() {
        assert_eq!(balance_step(&t("2,1,0")).unwrap(), t("2,2,2"));
        assert_eq!(balance_step(&t("1,1")).unwrap(), t("1,1"));
        assert_eq!(balance_step(&t("2,1,0,-1,-2")).unwrap(), t("1,1,0,-1,-1"));
    }

    #[test]
    fn step_rank5_candidates() {
        let z = glue(&t("2,1,0,-1,-2"), &t("2,1,0,-1,-2"), &Alignment::dual(5)).unwrap();
        let cands = admissible_smoothings(&z, true);
        assert_eq!(
            cands,
            vec![t("1,1,0,-1,-1"), t("1,0,0,0,-1"), t("0,0,0,0,0")]
        );
        let best = BalanceOptions {
            policy: Policy::Best,
            sequential: true,
        };
        assert_eq!(
            balance_step_with(&t("2,1,0,-1,-2"), best).unwrap(),
            t("0,0,0,0,0")
        );
    }

    #[test]
    fn step_errors() {
        assert_eq!(
            balance_step(&t("1,0")),
            Err(Error::NonIntegerSlope {
                degree: 1,
                rank: 2,
                copy_factor: 2
            })
        );
        assert_eq!(balance_step(&t("1,1,1,1,1,1")), Err(Error::RankTooLarge(6)));
        assert!(matches!(
            balance_step(&t("2,0")),
            Err(Error::NotSequential(_))
        ));
    }

    #[test]
    fn trace_examples() {
        let tr = balance(&t("2,1,0"), 10).unwrap();
        assert_eq!(tr.steps, 1);
        assert_eq!(tr.copies(), BigUint::from(2u32));
        assert_eq!(tr.last(), &t("2,2,2"));
        assert!(tr.converged);

        let tr = balance(&t("1,1,1,1,1"), 10).unwrap();
        assert_eq!(tr.steps, 0);
        assert_eq!(tr.copies(), BigUint::from(1u32));

        let tr = balance(&t("2,1,0,-1,-2"), 10).unwrap();
        assert_eq!(tr.steps, 2);
        assert_eq!(tr.copies(), BigUint::from(4u32));
        assert_eq!(tr.last(), &t("0,0,0,0,0"));
    }

    #[test]
    fn trace_reports_cap() {
        let tr = balance(&t("2,1,0,-1,-2"), 1).unwrap();
        assert_eq!(tr.steps, 1);
        assert!(!tr.converged);
        assert!(tr
            .to_string()
            .ends_with("steps: 1  copies: 2  converged: no\n"));
    }

    #[test]
    fn copy_factor() {
        assert_eq!(integer_slope_copy_factor(&t("1,0,0")), 3);
        assert_eq!(integer_slope_copy_factor(&t("1,1,0,0")), 2);
        assert_eq!(integer_slope_copy_factor(&t("3,1")), 1);
    }

    #[test]
    fn hn_examples() {
        let mu = rat(7, 3);
        let f = FiltrationData::new(vec![(4, mu.clone())]).unwrap();
        let (v, bound) = hn_restriction_bounds(&f);
        assert_eq!(v, vec![mu.clone(); 4]);
        assert_eq!(bound, int(2));

        let f = FiltrationData::new(vec![(2, int(3)), (3, rat(4, 3))]).unwrap();
        let (v, bound) = hn_restriction_bounds(&f);
        assert_eq!(v, vec![int(3), int(3), rat(4, 3), rat(4, 3), rat(4, 3)]);
        assert_eq!(bound, rat(3, 2));

        assert!(FiltrationData::new(vec![(2, int(1)), (1, int(1))]).is_err());
        assert!(FiltrationData::new(vec![]).is_err());
        assert!(FiltrationData::new(vec![(0, int(1))]).is_err());
    }

    #[test]
    fn sp_feasibility() {
        let f = FiltrationData::new(vec![(2, int(3)), (3, rat(4, 3))]).unwrap();
        assert!(sp_feasible(&t("3,3,2,1,1"), &f).unwrap());
        // 3 - 4/3 = 5/3 is not below 3/2
        assert!(!sp_feasible(&t("3,3,3,1,0"), &f).unwrap());
        assert!(sp_feasible(&t("1,1"), &f).is_err());
    }

    #[test]
    fn ratio_lower_bound() {
        assert_eq!(minimal_slope_ratio_lower_bound(3, 9).unwrap(), rat(1, 2));
        assert_eq!(minimal_slope_ratio_lower_bound(5, 25).unwrap(), rat(1, 2));
        let mut prev = minimal_slope_ratio_lower_bound(3, 1).unwrap();
        for deg in 2..200 {
            let cur = minimal_slope_ratio_lower_bound(3, deg).unwrap();
            assert!(cur > prev && cur < int(1));
            prev = cur;
        }
        assert!(minimal_slope_ratio_lower_bound(3, 0).is_err());
    }
}
