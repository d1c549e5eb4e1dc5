//! Finite presentation of the curve lattice of a Fano variety: the
//! anticanonical functional, the nef cone of curves, and a decomposition of
//! the nef cone into chambers on which the Harder–Narasimhan filtration of
//! the tangent bundle is constant.
//!
//! Inside a chamber each graded piece has a slope that is a linear function
//! of the curve class. The expected slope panel of a class is read off by
//! evaluating those functionals.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedral::{self, dot, extreme_rays, in_cone};
use crate::rational::{int, rat, Rational};
use crate::splitting::SlopePanel;
use crate::stability::FiltrationData;

/// A rational linear functional `⟨num, α⟩ / den` on the curve lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeFunctional {
    pub num: Vec<i64>,
    pub den: i64,
}

impl SlopeFunctional {
    pub fn new(num: Vec<i64>, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidModel(format!(
                "slope denominator must be positive, got {den}"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn integral(num: Vec<i64>) -> Self {
        Self { num, den: 1 }
    }

    pub fn eval(&self, alpha: &[i64]) -> Rational {
        rat(dot(&self.num, alpha), self.den)
    }

    /// Coefficients as rationals.
    pub fn coefficients(&self) -> Vec<Rational> {
        self.num.iter().map(|&c| rat(c, self.den)).collect()
    }
}

/// One graded piece `F_k / F_{k-1}` of the filtration on a chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationPiece {
    pub rank: usize,
    pub slope: SlopeFunctional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    /// Extra inequalities `⟨f, α⟩ ≥ 0` cutting the chamber out of the nef
    /// cone.
    pub facets: Vec<Vec<i64>>,
    /// Pieces in filtration order (decreasing slope on the interior).
    pub filtration: Vec<FiltrationPiece>,
}

impl Chamber {
    /// Degree of each piece at `alpha`, repeated by rank, in filtration
    /// order.
    pub fn expanded_slopes(&self, alpha: &[i64]) -> Vec<Rational> {
        self.filtration
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.slope.eval(alpha), p.rank))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyModel {
    pub dim: usize,
    pub rho: usize,
    pub minus_k: Vec<i64>,
    pub nef_facets: Vec<Vec<i64>>,
    pub nef_generators: Option<Vec<Vec<i64>>>,
    pub chambers: Vec<Chamber>,
}

impl VarietyModel {
    /// Checks shapes only (vector lengths, positive ranks and denominators).
    /// Geometric invariants are reported by [`validate`].
    pub fn new(
        dim: usize,
        rho: usize,
        minus_k: Vec<i64>,
        nef_facets: Vec<Vec<i64>>,
        nef_generators: Option<Vec<Vec<i64>>>,
        chambers: Vec<Chamber>,
    ) -> Result<Self> {
        let shape = |what: &str, len: usize| {
            if len == rho {
                Ok(())
            } else {
                Err(Error::InvalidModel(format!(
                    "{what} has length {len}, expected rho = {rho}"
                )))
            }
        };
        if dim == 0 || rho == 0 {
            return Err(Error::InvalidModel("dim and rho must be positive".into()));
        }
        shape("minusK", minus_k.len())?;
        for f in &nef_facets {
            shape("nef facet", f.len())?;
        }
        for g in nef_generators.iter().flatten() {
            shape("nef generator", g.len())?;
        }
        for ch in &chambers {
            for f in &ch.facets {
                shape("chamber facet", f.len())?;
            }
            if ch.filtration.is_empty() {
                return Err(Error::InvalidModel("chamber with empty filtration".into()));
            }
            for p in &ch.filtration {
                if p.rank == 0 {
                    return Err(Error::InvalidModel("filtration piece of rank 0".into()));
                }
                if p.slope.den <= 0 {
                    return Err(Error::InvalidModel(
                        "slope denominator must be positive".into(),
                    ));
                }
                shape("slope functional", p.slope.num.len())?;
            }
        }
        Ok(Self {
            dim,
            rho,
            minus_k,
            nef_facets,
            nef_generators,
            chambers,
        })
    }

    pub fn degree(&self, alpha: &[i64]) -> i64 {
        dot(&self.minus_k, alpha)
    }

    pub fn is_nef(&self, alpha: &[i64]) -> bool {
        in_cone(&self.nef_facets, alpha)
    }

    /// Indices of chambers containing `alpha` (which must be nef).
    pub fn chambers_containing(&self, alpha: &[i64]) -> Vec<usize> {
        self.chambers
            .iter()
            .enumerate()
            .filter(|(_, ch)| in_cone(&ch.facets, alpha))
            .map(|(i, _)| i)
            .collect()
    }

    fn check_class(&self, alpha: &[i64]) -> Result<i64> {
        if alpha.len() != self.rho {
            return Err(Error::DimensionMismatch {
                expected: self.rho,
                got: alpha.len(),
            });
        }
        if !self.is_nef(alpha) {
            return Err(Error::NotInNefCone);
        }
        let deg = self.degree(alpha);
        if deg <= 0 {
            return Err(Error::ZeroDegree);
        }
        Ok(deg)
    }

    /// Extreme rays of the nef cone, or `UnboundedSlice` when the cone
    /// contains a line.
    pub fn nef_rays(&self) -> Result<Vec<Vec<i64>>> {
        extreme_rays(&self.nef_facets, self.rho).ok_or(Error::UnboundedSlice)
    }

    /// Harder–Narasimhan slopes at `alpha`, with pieces of equal slope (on a
    /// chamber wall) merged.
    pub fn filtration_at(&self, alpha: &[i64]) -> Result<FiltrationData> {
        self.check_class(alpha)?;
        let idx = *self
            .chambers_containing(alpha)
            .first()
            .ok_or(Error::NoChamber)?;
        let mut pieces: Vec<(usize, Rational)> = Vec::new();
        for p in &self.chambers[idx].filtration {
            let s = p.slope.eval(alpha);
            match pieces.last_mut() {
                Some(last) if last.1 == s => last.0 += p.rank,
                _ => pieces.push((p.rank, s)),
            }
        }
        FiltrationData::new(pieces)
    }
}

/// Expected slope panel of the class `alpha`: each piece's slope repeated
/// by its rank, divided by `⟨-K, α⟩ / dim`, listed non-increasing.
///
/// When `alpha` lies in several chambers all of them are evaluated and must
/// agree; the first listed chamber's panel is returned.
pub fn esp(model: &VarietyModel, alpha: &[i64]) -> Result<SlopePanel> {
    let deg = model.check_class(alpha)?;
    let containing = model.chambers_containing(alpha);
    if containing.is_empty() {
        return Err(Error::NoChamber);
    }
    let mu = rat(deg, model.dim as i64);
    let mut panels = containing.iter().map(|&i| {
        let mut entries: Vec<Rational> = model.chambers[i]
            .expanded_slopes(alpha)
            .into_iter()
            .map(|b| b / &mu)
            .collect();
        entries.sort_unstable_by(|a, b| b.cmp(a));
        entries
    });
    let first = panels.next().unwrap();
    if panels.any(|p| p != first) {
        return Err(Error::BoundaryMismatch);
    }
    Ok(SlopePanel::from_entries(first))
}

/// `min ESP(α) - dim² / (2 ⟨-K, α⟩)`: a certified lower bound on the
/// minimal slope ratio of a general curve of class `alpha`.
pub fn liberated_lower_bound(model: &VarietyModel, alpha: &[i64]) -> Result<Rational> {
    let panel = esp(model, alpha)?;
    let deg = model.degree(alpha);
    let n = model.dim as i64;
    Ok(panel.minimum() - rat(n * n, 2 * deg))
}

/// A failed model invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The nef cone contains a line.
    NefNotPointed,
    /// A listed generator violates a nef facet.
    GeneratorOutsideCone(Vec<i64>),
    /// An extreme ray computed from the facets is not among the generators.
    MissingGenerator(Vec<i64>),
    /// `-K` is not positive on a nef ray.
    NotFanoPositive(Vec<i64>),
    RankSum {
        chamber: usize,
        sum: usize,
    },
    /// `Σ rank · slope ≠ -K` as functionals.
    Inconsistent {
        chamber: usize,
    },
    ChamberNotPointed {
        chamber: usize,
    },
    NotFullDimensional {
        chamber: usize,
    },
    NegativeSlope {
        chamber: usize,
        piece: usize,
        ray: Vec<i64>,
    },
    SlopesIncreasing {
        chamber: usize,
        piece: usize,
        ray: Vec<i64>,
    },
    /// A sampled nef lattice point lies in no chamber.
    Uncovered(Vec<i64>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NefNotPointed => write!(f, "nef cone contains a line"),
            Violation::GeneratorOutsideCone(g) => {
                write!(f, "generator {g:?} violates a nef facet")
            }
            Violation::MissingGenerator(r) => {
                write!(f, "extreme ray {r:?} is not among the listed generators")
            }
            Violation::NotFanoPositive(r) => write!(f, "minusK is not positive on nef ray {r:?}"),
            Violation::RankSum { chamber, sum } => {
                write!(f, "chamber {chamber}: piece ranks sum to {sum}, not dim")
            }
            Violation::Inconsistent { chamber } => write!(
                f,
                "chamber {chamber}: rank-weighted slopes do not add up to minusK"
            ),
            Violation::ChamberNotPointed { chamber } => {
                write!(f, "chamber {chamber}: cone contains a line")
            }
            Violation::NotFullDimensional { chamber } => {
                write!(f, "chamber {chamber}: not full-dimensional")
            }
            Violation::NegativeSlope { chamber, piece, ray } => write!(
                f,
                "chamber {chamber}: piece {piece} has negative slope on ray {ray:?}"
            ),
            Violation::SlopesIncreasing { chamber, piece, ray } => write!(
                f,
                "chamber {chamber}: slope of piece {piece} exceeds the previous piece on ray {ray:?}"
            ),
            Violation::Uncovered(p) => write!(f, "nef class {p:?} lies in no chamber"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

/// Degree bound used for the coverage sample in [`validate`].
const COVERAGE_SAMPLE_FACTOR: i64 = 3;

/// Checks every model invariant and lists the failures.
///
/// Linear conditions (positivity, ordering of slopes) are checked on the
/// extreme rays of each chamber, which is exact. Coverage of the nef cone by
/// the chambers is checked on all nef lattice points up to a modest degree.
pub fn validate(model: &VarietyModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = &mut report.violations;

    let Some(rays) = extreme_rays(&model.nef_facets, model.rho) else {
        v.push(Violation::NefNotPointed);
        return report;
    };
    if let Some(gens) = &model.nef_generators {
        let prim: Vec<Vec<i64>> = gens.iter().map(|g| polyhedral::primitive(g)).collect();
        for g in gens {
            if !model.is_nef(g) {
                v.push(Violation::GeneratorOutsideCone(g.clone()));
            }
        }
        for r in &rays {
            if !prim.contains(r) {
                v.push(Violation::MissingGenerator(r.clone()));
            }
        }
        for g in gens {
            if model.degree(g) <= 0 && !v.contains(&Violation::NotFanoPositive(g.clone())) {
                v.push(Violation::NotFanoPositive(g.clone()));
            }
        }
    }
    for r in &rays {
        if model.degree(r) <= 0 {
            v.push(Violation::NotFanoPositive(r.clone()));
        }
    }

    let minus_k: Vec<Rational> = model.minus_k.iter().map(|&c| int(c)).collect();
    for (ci, ch) in model.chambers.iter().enumerate() {
        let sum: usize = ch.filtration.iter().map(|p| p.rank).sum();
        if sum != model.dim {
            v.push(Violation::RankSum { chamber: ci, sum });
        }
        let mut weighted = vec![Rational::zero(); model.rho];
        for p in &ch.filtration {
            for (w, c) in weighted.iter_mut().zip(p.slope.coefficients()) {
                *w += c * int(p.rank as i64);
            }
        }
        if weighted != minus_k {
            v.push(Violation::Inconsistent { chamber: ci });
        }

        let mut facets = model.nef_facets.clone();
        facets.extend(ch.facets.iter().cloned());
        let Some(ch_rays) = extreme_rays(&facets, model.rho) else {
            v.push(Violation::ChamberNotPointed { chamber: ci });
            continue;
        };
        if polyhedral::rank(&ch_rays, model.rho) < model.rho {
            v.push(Violation::NotFullDimensional { chamber: ci });
        }
        for r in &ch_rays {
            let slopes: Vec<Rational> = ch.filtration.iter().map(|p| p.slope.eval(r)).collect();
            for (k, s) in slopes.iter().enumerate() {
                if s.is_negative() {
                    v.push(Violation::NegativeSlope {
                        chamber: ci,
                        piece: k,
                        ray: r.clone(),
                    });
                }
                if k > 0 && slopes[k - 1] < *s {
                    v.push(Violation::SlopesIncreasing {
                        chamber: ci,
                        piece: k,
                        ray: r.clone(),
                    });
                }
            }
        }
    }

    if !rays.is_empty() && rays.iter().all(|r| model.degree(r) > 0) && model.rho <= 4 {
        let max_ray = rays.iter().map(|r| model.degree(r)).max().unwrap();
        let bound = COVERAGE_SAMPLE_FACTOR * max_ray * model.rho as i64;
        if let Ok(points) = crate::counting::lattice_slice(model, bound) {
            for p in points {
                if model.chambers_containing(&p).is_empty() {
                    v.push(Violation::Uncovered(p));
                }
            }
        }
    }
    report
}

/// Projective bundle `P(O(a_0) ⊕ … ⊕ O(a_m))` over `P^n0`, with `a_0` the
/// largest twist and `d = Σ a_i ≤ n0`.
///
/// Coordinates are `(x, y)` for the class `xβ + yℓ`, where `ℓ` is a line in
/// a fiber and `β = α + (a_0 - d)ℓ` with `α = ξ^m H^{n0-1}`; the nef cone is
/// the positive quadrant. The relative tangent bundle (rank `m`) restricts
/// with degree `x(m a_0 + a_0 - d) + y(m + 1)` and the pullback of
/// `T_{P^n0}` (rank `n0`) with degree `x(n0 + 1)`. Only parameters for which
/// the relative piece has the larger slope on the whole nef cone are
/// accepted, so the model has a single chamber.
pub fn pbundle(n0: i64, twists: &[i64]) -> Result<VarietyModel> {
    if n0 < 1 || twists.len() < 2 {
        return Err(Error::InvalidModel(
            "need n0 >= 1 and at least two twists".into(),
        ));
    }
    if twists.windows(2).any(|w| w[0] < w[1]) || twists.iter().any(|&a| a < 0) {
        return Err(Error::InvalidModel(
            "twists must be non-negative and non-increasing".into(),
        ));
    }
    let m = twists.len() as i64 - 1;
    let a0 = twists[0];
    let d: i64 = twists.iter().sum();
    if d > n0 {
        return Err(Error::InvalidModel(format!(
            "twist sum {d} exceeds n0 = {n0}; the bundle is not Fano"
        )));
    }
    let rel = SlopeFunctional::new(vec![m * a0 + a0 - d, m + 1], m)?;
    let base = SlopeFunctional::new(vec![n0 + 1, 0], n0)?;
    for ray in [[1, 0], [0, 1]] {
        if rel.eval(&ray) < base.eval(&ray) {
            return Err(Error::InvalidModel(
                "relative slope drops below the base slope on the nef cone".into(),
            ));
        }
    }
    let quadrant = vec![vec![1, 0], vec![0, 1]];
    VarietyModel::new(
        (n0 + m) as usize,
        2,
        vec![m * a0 + a0 - d + n0 + 1, m + 1],
        quadrant.clone(),
        Some(vec![vec![1, 0], vec![0, 1]]),
        vec![Chamber {
            facets: vec![],
            filtration: vec![
                FiltrationPiece {
                    rank: m as usize,
                    slope: rel,
                },
                FiltrationPiece {
                    rank: n0 as usize,
                    slope: base,
                },
            ],
        }],
    )
}

/// Picard rank one, `-K · (generator) = c`, semistable tangent bundle.
pub fn toy_rho1(dim: usize, c: i64) -> Result<VarietyModel> {
    VarietyModel::new(
        dim,
        1,
        vec![c],
        vec![vec![1]],
        Some(vec![vec![1]]),
        vec![Chamber {
            facets: vec![],
            filtration: vec![FiltrationPiece {
                rank: dim,
                slope: SlopeFunctional::new(vec![c], dim as i64)?,
            }],
        }],
    )
}

/// Positive quadrant in rank two with a semistable tangent bundle.
pub fn toy_quadrant(dim: usize, minus_k: [i64; 2]) -> Result<VarietyModel> {
    VarietyModel::new(
        dim,
        2,
        minus_k.to_vec(),
        vec![vec![1, 0], vec![0, 1]],
        Some(vec![vec![1, 0], vec![0, 1]]),
        vec![Chamber {
            facets: vec![],
            filtration: vec![FiltrationPiece {
                rank: dim,
                slope: SlopeFunctional::new(minus_k.to_vec(), dim as i64)?,
            }],
        }],
    )
}

/// Surface-like rank-two model with two chambers split by the diagonal.
///
/// `-K = (3, 3)`; on `x ≥ y` the destabilizing line subbundle has slope
/// `2x + y` and the quotient `x + 2y`, mirrored on `y ≥ x`. Both slopes are
/// positive on the whole nef cone minus the origin, and the minimal ESP
/// entry is at least `2/3`.
pub fn toy_rho2() -> VarietyModel {
    let piece = |num: Vec<i64>| FiltrationPiece {
        rank: 1,
        slope: SlopeFunctional::integral(num),
    };
    VarietyModel::new(
        2,
        2,
        vec![3, 3],
        vec![vec![1, 0], vec![0, 1]],
        Some(vec![vec![1, 0], vec![0, 1]]),
        vec![
            Chamber {
                facets: vec![vec![1, -1]],
                filtration: vec![piece(vec![2, 1]), piece(vec![1, 2])],
            },
            Chamber {
                facets: vec![vec![-1, 1]],
                filtration: vec![piece(vec![1, 2]), piece(vec![2, 1])],
            },
        ],
    )
    .expect("well-formed")
}
