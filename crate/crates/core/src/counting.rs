//! Lattice-point counting in the nef cone: the geometric Manin counting
//! function `N(q, d)` and its liberated restriction `N^{ℓ>ε}(q, d)`.
//!
//! Each nef class `α` with `0 < -K·α ≤ d·r_min` contributes
//! `ξ(α) q^{-K·α}`, where `ξ(α)` is `br` when `α - β` is nef and
//! `outside_xi` otherwise. The liberated count keeps only classes whose
//! certified minimal-slope-ratio bound exceeds `ε(d)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedral::{bounding_box, box_points, vertices};
use crate::rational::{int, pow, Rational};
use crate::variety::{liberated_lower_bound, VarietyModel};

/// Largest lattice rank handled by slice enumeration.
pub const MAX_SLICE_RANK: usize = 4;

/// The threshold `ε(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpsSchedule {
    /// Step function: the value of the largest key `≤ d`, or of the first
    /// key when `d` is below all keys. Keys strictly increasing.
    Table(Vec<(u64, Rational)>),
    /// `c · d^(-p_num/p_den)`.
    Power { c: Rational, p_num: u64, p_den: u64 },
}

impl EpsSchedule {
    pub fn validate(&self) -> Result<()> {
        match self {
            EpsSchedule::Table(rows) => {
                if rows.is_empty() {
                    return Err(Error::InvalidConfig("empty eps table".into()));
                }
                for w in rows.windows(2) {
                    if w[0].0 >= w[1].0 {
                        return Err(Error::InvalidConfig(
                            "eps table keys must be strictly increasing".into(),
                        ));
                    }
                    if w[0].1 < w[1].1 {
                        return Err(Error::InvalidConfig(
                            "eps table must be non-increasing".into(),
                        ));
                    }
                }
                Ok(())
            }
            EpsSchedule::Power { c, p_num, p_den } => {
                if !c.is_positive() {
                    return Err(Error::InvalidConfig(
                        "eps coefficient must be positive".into(),
                    ));
                }
                if *p_num == 0 || *p_den == 0 {
                    return Err(Error::InvalidConfig("eps exponent must be positive".into()));
                }
                Ok(())
            }
        }
    }

    /// `ε(d)` when it is rational (always for tables, for power schedules
    /// only when `d^(p)` is).
    pub fn value(&self, d: u64) -> Option<Rational> {
        match self {
            EpsSchedule::Table(rows) => Some(Self::table_value(rows, d).clone()),
            EpsSchedule::Power { c, p_num, p_den } => {
                let g = p_num.gcd(p_den);
                let (pn, pd) = (p_num / g, p_den / g);
                let root = integer_root(d, pd)?;
                let denom = pow(&Rational::from_integer(BigInt::from(root)), pn);
                Some(c / denom)
            }
        }
    }

    fn table_value(rows: &[(u64, Rational)], d: u64) -> &Rational {
        rows.iter()
            .rev()
            .find(|(k, _)| *k <= d)
            .map(|(_, v)| v)
            .unwrap_or(&rows[0].1)
    }

    /// Whether `bound > ε(d)`, decided exactly.
    pub fn is_exceeded_by(&self, bound: &Rational, d: u64) -> bool {
        match self {
            EpsSchedule::Table(rows) => bound > Self::table_value(rows, d),
            EpsSchedule::Power { c, p_num, p_den } => {
                // c > 0 so ε(d) > 0; for positive bound compare
                // bound^p_den · d^p_num with c^p_den.
                if !bound.is_positive() {
                    return false;
                }
                let lhs =
                    pow(bound, *p_den) * pow(&Rational::from_integer(BigInt::from(d)), *p_num);
                lhs > pow(c, *p_den)
            }
        }
    }
}

impl fmt::Display for EpsSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsSchedule::Table(rows) => {
                write!(f, "table")?;
                for (d, v) in rows {
                    write!(f, " {d}:{v}")?;
                }
                Ok(())
            }
            EpsSchedule::Power { c, p_num, p_den } => write!(f, "{c}*d^(-{p_num}/{p_den})"),
        }
    }
}

fn integer_root(d: u64, k: u64) -> Option<u64> {
    if k == 1 {
        return Some(d);
    }
    let guess = (d as f64).powf(1.0 / k as f64).round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|r| r.checked_pow(k as u32) == Some(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingConfig {
    pub q: Rational,
    pub br: u64,
    pub m_cap: u64,
    pub beta: Vec<i64>,
    pub outside_xi: u64,
    pub eps: EpsSchedule,
    pub delta: Rational,
}

impl CountingConfig {
    pub fn new(
        q: Rational,
        br: u64,
        m_cap: u64,
        beta: Vec<i64>,
        outside_xi: u64,
        eps: EpsSchedule,
        delta: Rational,
    ) -> Result<Self> {
        let cfg = Self {
            q,
            br,
            m_cap,
            beta,
            outside_xi,
            eps,
            delta,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q <= Rational::one() {
            return Err(Error::InvalidConfig(format!(
                "q must exceed 1, got {}",
                self.q
            )));
        }
        if self.m_cap == 0 {
            return Err(Error::InvalidConfig("M must be positive".into()));
        }
        if self.outside_xi > self.m_cap {
            return Err(Error::InvalidConfig(format!(
                "outside_xi {} exceeds M = {}",
                self.outside_xi, self.m_cap
            )));
        }
        if !self.delta.is_positive() || self.delta >= Rational::one() {
            return Err(Error::InvalidConfig(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        self.eps.validate()
    }

    /// Default-shaped configuration for quick runs: `br = M = 1`,
    /// `ξ ≡ 1`, `β = 0`, `ε(d) = d^(-1/2)`, `δ = 1/10`.
    pub fn simple(q: Rational, rho: usize) -> Result<Self> {
        Self::new(
            q,
            1,
            1,
            vec![0; rho],
            1,
            EpsSchedule::Power {
                c: int(1),
                p_num: 1,
                p_den: 2,
            },
            Rational::new(BigInt::from(1), BigInt::from(10)),
        )
    }

    /// `ξ(α)`.
    pub fn xi(&self, model: &VarietyModel, alpha: &[i64]) -> u64 {
        let shifted: Vec<i64> = alpha.iter().zip(&self.beta).map(|(a, b)| a - b).collect();
        if model.is_nef(&shifted) {
            self.br
        } else {
            self.outside_xi
        }
    }
}

/// Minimal positive value of `-K` on the curve lattice.
pub fn r_min(model: &VarietyModel) -> Result<u64> {
    let g = model.minus_k.iter().fold(0i64, |g, c| g.gcd(c));
    if g == 0 {
        Err(Error::ZeroFunctional)
    } else {
        Ok(g as u64)
    }
}

/// All nef lattice classes with `0 < -K·α ≤ bound`, lexicographically
/// sorted.
pub fn lattice_slice(model: &VarietyModel, bound: i64) -> Result<Vec<Vec<i64>>> {
    if model.rho > MAX_SLICE_RANK {
        return Err(Error::DimensionTooLarge(model.rho));
    }
    let rays = model.nef_rays()?;
    if rays.iter().any(|r| model.degree(r) <= 0) {
        return Err(Error::UnboundedSlice);
    }
    if bound <= 0 {
        return Ok(Vec::new());
    }
    let mut rows = model.nef_facets.clone();
    let mut rhs = vec![0; rows.len()];
    rows.push(model.minus_k.iter().map(|c| -c).collect());
    rhs.push(-bound);
    let verts = vertices(&rows, &rhs, model.rho);
    let bbox = bounding_box(&verts, model.rho);
    Ok(box_points(&bbox)
        .into_iter()
        .filter(|p| model.is_nef(p) && (1..=bound).contains(&model.degree(p)))
        .collect())
}

fn check_beta(model: &VarietyModel, cfg: &CountingConfig) -> Result<()> {
    if cfg.beta.len() != model.rho {
        return Err(Error::DimensionMismatch {
            expected: model.rho,
            got: cfg.beta.len(),
        });
    }
    Ok(())
}

fn term(model: &VarietyModel, cfg: &CountingConfig, alpha: &[i64]) -> Rational {
    let xi = cfg.xi(model, alpha);
    if xi == 0 {
        return Rational::zero();
    }
    int(xi as i64) * pow(&cfg.q, model.degree(alpha) as u64)
}

/// `N(q, d)`.
pub fn count_n(model: &VarietyModel, cfg: &CountingConfig, d: u64) -> Result<Rational> {
    check_beta(model, cfg)?;
    let bound = d as i64 * r_min(model)? as i64;
    Ok(lattice_slice(model, bound)?
        .iter()
        .map(|a| term(model, cfg, a))
        .sum())
}

/// `N^{ℓ>ε}(q, d)`: the terms of [`count_n`] whose certified bound exceeds
/// `ε(d)`.
pub fn count_n_liberated(model: &VarietyModel, cfg: &CountingConfig, d: u64) -> Result<Rational> {
    check_beta(model, cfg)?;
    let bound = d as i64 * r_min(model)? as i64;
    let mut total = Rational::zero();
    for a in lattice_slice(model, bound)? {
        if cfg
            .eps
            .is_exceeded_by(&liberated_lower_bound(model, &a)?, d)
        {
            total += term(model, cfg, &a);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub d: u64,
    pub points: usize,
    pub liberated: usize,
    pub n: Rational,
    pub n_lib: Rational,
    /// `N_lib / N`; undefined when `N = 0`.
    pub ratio: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub rows: Vec<CountRow>,
    pub delta: Rational,
    pub d0: Option<u64>,
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# terms weighted q^(-K.alpha); a dim-based exponent rescales N and N_lib by q^(dim-3) and leaves ratios unchanged"
        )?;
        writeln!(f, "d\tpoints\tliberated\tN\tN_lib\tratio")?;
        for r in &self.rows {
            let ratio = r
                .ratio
                .as_ref()
                .map_or_else(|| "undefined".to_string(), |x| x.to_string());
            writeln!(
                f,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.d, r.points, r.liberated, r.n, r.n_lib, ratio
            )?;
        }
        match self.d0 {
            Some(d0) => writeln!(f, "# d0 for delta {}: {d0}", self.delta),
            None => writeln!(f, "# d0 for delta {}: none", self.delta),
        }
    }
}

/// Rows of `N` and `N^{ℓ>ε}` for each `d` in the range, plus the smallest
/// `d₀` in range such that every tested `d ≥ d₀` has ratio `> 1 - δ`.
/// An undefined ratio (`N = 0`) counts as failing.
pub fn ratio_check(
    model: &VarietyModel,
    cfg: &CountingConfig,
    d_range: RangeInclusive<u64>,
) -> Result<CountReport> {
    check_beta(model, cfg)?;
    let step = r_min(model)? as i64;
    let d_max = *d_range.end();
    let slice = lattice_slice(model, d_max as i64 * step)?;

    struct Class {
        degree: i64,
        term: Rational,
        bound: Rational,
    }
    let mut classes: Vec<Class> = Vec::with_capacity(slice.len());
    let mut powers: BTreeMap<i64, Rational> = BTreeMap::new();
    for a in &slice {
        let degree = model.degree(a);
        let qpow = powers
            .entry(degree)
            .or_insert_with(|| pow(&cfg.q, degree as u64))
            .clone();
        classes.push(Class {
            degree,
            term: int(cfg.xi(model, a) as i64) * qpow,
            bound: liberated_lower_bound(model, a)?,
        });
    }

    let threshold = Rational::one() - &cfg.delta;
    let mut rows = Vec::new();
    for d in d_range {
        let cap = d as i64 * step;
        let mut row = CountRow {
            d,
            points: 0,
            liberated: 0,
            n: Rational::zero(),
            n_lib: Rational::zero(),
            ratio: None,
        };
        for c in classes.iter().filter(|c| c.degree <= cap) {
            row.points += 1;
            row.n += &c.term;
            if cfg.eps.is_exceeded_by(&c.bound, d) {
                row.liberated += 1;
                row.n_lib += &c.term;
            }
        }
        if !row.n.is_zero() {
            row.ratio = Some(&row.n_lib / &row.n);
        }
        rows.push(row);
    }

    let mut d0 = None;
    for r in rows.iter().rev() {
        match &r.ratio {
            Some(x) if *x > threshold => d0 = Some(r.d),
            _ => break,
        }
    }
    Ok(CountReport {
        rows,
        delta: cfg.delta.clone(),
        d0,
    })
}
