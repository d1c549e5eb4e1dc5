//! Bundles on the nodal curve `Z = Z1 ∪ Z2` and the degree bound for
//! quotients on a general smoothing.
//!
//! A locally free sheaf on `Z` splits as a sum of `O_Z(a, b)`, the line
//! bundle of degree `a` on `Z1` and `b` on `Z2`. [`degbd`] bounds the degree
//! of any rank-`m` quotient of the restriction to a general smoothing, and
//! [`admissible_smoothings`] lists the splitting types compatible with those
//! bounds for every `m`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::splitting::SplittingType;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodalType {
    pairs: Vec<(i64, i64)>,
}

impl NodalType {
    /// Canonical order: descending by total degree `a + b`, then by `a`.
    pub fn new(mut pairs: Vec<(i64, i64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyType);
        }
        pairs.sort_unstable_by_key(|&(a, b)| std::cmp::Reverse((a + b, a)));
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn total_degree(&self) -> i64 {
        self.pairs.iter().map(|(a, b)| a + b).sum()
    }

    pub fn restrict_z1(&self) -> SplittingType {
        SplittingType::new(self.pairs.iter().map(|p| p.0).collect()).expect("nonempty")
    }

    pub fn restrict_z2(&self) -> SplittingType {
        SplittingType::new(self.pairs.iter().map(|p| p.1).collect()).expect("nonempty")
    }

    /// Exchanges the roles of the two components.
    pub fn swap_components(&self) -> NodalType {
        Self::new(self.pairs.iter().map(|&(a, b)| (b, a)).collect()).expect("nonempty")
    }
}

impl fmt::Display for NodalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}/{b}")?;
        }
        Ok(())
    }
}

impl FromStr for NodalType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |tok: &str| Error::Parse {
            what: "nodal type",
            detail: format!("bad pair {tok:?} in {s:?}, expected a/b"),
        };
        let pairs = s
            .split(',')
            .map(|tok| {
                let (a, b) = tok.split_once('/').ok_or_else(|| bad(tok))?;
                let a = a.trim().parse::<i64>().map_err(|_| bad(tok))?;
                let b = b.trim().parse::<i64>().map_err(|_| bad(tok))?;
                Ok((a, b))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }
}

/// A torsion-free sheaf on `Z`: a locally free part `G` plus sheaves `H1`,
/// `H2` supported on a single component.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TorsionFreeType {
    pub g_part: Vec<(i64, i64)>,
    pub h1_part: Vec<i64>,
    pub h2_part: Vec<i64>,
}

impl TorsionFreeType {
    pub fn new(g_part: Vec<(i64, i64)>, h1_part: Vec<i64>, h2_part: Vec<i64>) -> Result<Self> {
        if g_part.is_empty() && h1_part.is_empty() && h2_part.is_empty() {
            return Err(Error::EmptyType);
        }
        Ok(Self {
            g_part,
            h1_part,
            h2_part,
        })
    }

    /// Rank of the locally free part.
    pub fn s(&self) -> usize {
        self.g_part.len()
    }

    /// Rank on `Z1`, which is `s + t1`.
    pub fn rank_on_z1(&self) -> usize {
        self.g_part.len() + self.h1_part.len()
    }

    pub fn rank_on_z2(&self) -> usize {
        self.g_part.len() + self.h2_part.len()
    }

    pub fn euler_char(&self) -> i64 {
        let g: i64 = self.g_part.iter().map(|(a, b)| a + b + 1).sum();
        let h1: i64 = self.h1_part.iter().map(|a| a + 1).sum();
        let h2: i64 = self.h2_part.iter().map(|b| b + 1).sum();
        g + h1 + h2
    }
}

pub fn euler_char(f: &TorsionFreeType) -> i64 {
    f.euler_char()
}

/// Matching of summands at the node: summand `i` of the first curve meets
/// summand `perm[i]` of the second (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    perm: Vec<usize>,
}

impl Alignment {
    /// From a 0-based permutation.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidAlignment(format!(
                    "{perm:?} is not a permutation of 0..{}",
                    perm.len()
                )));
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(rank: usize) -> Self {
        Self {
            perm: (0..rank).collect(),
        }
    }

    /// Largest summand of the first curve against the smallest of the
    /// second, and so on.
    pub fn dual(rank: usize) -> Self {
        Self {
            perm: (0..rank).rev().collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }
}

impl fmt::Display for Alignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("perm:")?;
        for (i, p) in self.perm.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        Ok(())
    }
}

/// Text form used on the command line: `dual`, `identity`, or
/// `perm:i1,i2,...` with 1-based indices. The first two need the rank, so
/// parsing yields a spec resolved later by [`AlignmentSpec::resolve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlignmentSpec {
    Dual,
    Identity,
    Explicit(Alignment),
}

impl AlignmentSpec {
    pub fn resolve(&self, rank: usize) -> Result<Alignment> {
        match self {
            AlignmentSpec::Dual => Ok(Alignment::dual(rank)),
            AlignmentSpec::Identity => Ok(Alignment::identity(rank)),
            AlignmentSpec::Explicit(a) if a.rank() == rank => Ok(a.clone()),
            AlignmentSpec::Explicit(a) => Err(Error::RankMismatch {
                left: rank,
                right: a.rank(),
            }),
        }
    }
}

impl FromStr for AlignmentSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dual" => Ok(AlignmentSpec::Dual),
            "identity" => Ok(AlignmentSpec::Identity),
            other => {
                let list = other.strip_prefix("perm:").ok_or_else(|| Error::Parse {
                    what: "alignment",
                    detail: format!("expected dual, identity or perm:i1,i2,..., got {other:?}"),
                })?;
                let perm = list
                    .split(',')
                    .map(|tok| match tok.trim().parse::<usize>() {
                        Ok(i) if i >= 1 => Ok(i - 1),
                        _ => Err(Error::Parse {
                            what: "alignment",
                            detail: format!("bad index {tok:?}"),
                        }),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AlignmentSpec::Explicit(Alignment::new(perm)?))
            }
        }
    }
}

/// Glues two curves at a node, pairing summand `i` of `first` with summand
/// `align.perm()[i]` of `second` (both in canonical descending order).
pub fn glue(first: &SplittingType, second: &SplittingType, align: &Alignment) -> Result<NodalType> {
    if first.rank() != second.rank() {
        return Err(Error::RankMismatch {
            left: first.rank(),
            right: second.rank(),
        });
    }
    if align.rank() != first.rank() {
        return Err(Error::RankMismatch {
            left: first.rank(),
            right: align.rank(),
        });
    }
    let a = first.degrees();
    let b = second.degrees();
    NodalType::new(
        align
            .perm()
            .iter()
            .enumerate()
            .map(|(i, &j)| (a[i], b[j]))
            .collect(),
    )
}

/// How a summand enters an optimal labeling for the degree bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Unused,
    /// Line bundle quotient on all of `Z`: contributes `a + b`.
    Both,
    /// Quotient supported on `Z1`: contributes `a + 1`.
    First,
    /// Quotient supported on `Z2`: contributes `b + 1`.
    Second,
}

const ROLES: [Role; 4] = [Role::Unused, Role::Both, Role::First, Role::Second];

impl Role {
    fn cost(self, (a, b): (i64, i64)) -> i64 {
        match self {
            Role::Unused => 0,
            Role::Both => a + b,
            Role::First => a + 1,
            Role::Second => b + 1,
        }
    }

    fn counts(self) -> (usize, usize) {
        match self {
            Role::Unused => (0, 0),
            Role::Both => (1, 1),
            Role::First => (1, 0),
            Role::Second => (0, 1),
        }
    }
}

/// Minimum-cost table: `table[i][p][q]` is the least cost of labeling
/// summands `i..r` so that they add `p` to `|J| + |K1|` and `q` to
/// `|J| + |K2|`.
struct DegbdTable {
    m: usize,
    table: Vec<Vec<Vec<Option<i64>>>>,
}

impl DegbdTable {
    fn build(z: &NodalType, m: usize) -> Self {
        let r = z.rank();
        let mut table = vec![vec![vec![None; m + 1]; m + 1]; r + 1];
        table[r][0][0] = Some(0);
        for i in (0..r).rev() {
            for p in 0..=m {
                for q in 0..=m {
                    let best = ROLES
                        .iter()
                        .filter_map(|role| {
                            let (dp, dq) = role.counts();
                            if dp > p || dq > q {
                                return None;
                            }
                            table[i + 1][p - dp][q - dq].map(|rest| rest + role.cost(z.pairs[i]))
                        })
                        .min();
                    table[i][p][q] = best;
                }
            }
        }
        Self { m, table }
    }

    fn optimum(&self) -> i64 {
        self.table[0][self.m][self.m].expect("m <= rank is always feasible")
    }

    /// One optimal labeling, preferring roles in `ROLES` order.
    fn labeling(&self, z: &NodalType) -> Vec<Role> {
        let mut roles = Vec::with_capacity(z.rank());
        let (mut p, mut q) = (self.m, self.m);
        for i in 0..z.rank() {
            let here = self.table[i][p][q].unwrap();
            let role = ROLES
                .iter()
                .copied()
                .find(|role| {
                    let (dp, dq) = role.counts();
                    dp <= p
                        && dq <= q
                        && self.table[i + 1][p - dp][q - dq]
                            .is_some_and(|rest| rest + role.cost(z.pairs[i]) == here)
                })
                .unwrap();
            let (dp, dq) = role.counts();
            p -= dp;
            q -= dq;
            roles.push(role);
        }
        roles
    }
}

fn check_m(z: &NodalType, m: usize) -> Result<()> {
    if m == 0 || m > z.rank() {
        return Err(Error::OutOfRange { m, rank: z.rank() });
    }
    Ok(())
}

/// Lower bound on the degree of a rank-`m` quotient on a general smoothing:
/// the minimum over disjoint `J, K1, K2` with `|J| + |K1| = |J| + |K2| = m`
/// of `Σ_J (a+b) + Σ_K1 (a+1) + Σ_K2 (b+1)`.
///
/// Computed exactly by dynamic programming over the summands, so there is
/// no rank limit.
pub fn degbd(z: &NodalType, m: usize) -> Result<i64> {
    check_m(z, m)?;
    Ok(DegbdTable::build(z, m).optimum())
}

/// `degbd(z, 1)` as `min(min(a_i + b_i), min a_i + min b_j + 2)`.
///
/// The second term does not need distinct indices: when both minima sit on
/// one summand it exceeds that summand's `a + b`.
pub fn degbd_m1_closed_form(z: &NodalType) -> i64 {
    let pairs = z.pairs();
    let singles = pairs.iter().map(|(a, b)| a + b).min().unwrap();
    let min_a = pairs.iter().map(|p| p.0).min().unwrap();
    let min_b = pairs.iter().map(|p| p.1).min().unwrap();
    singles.min(min_a + min_b + 2)
}

/// Splitting types `t` of the same rank and degree as `z` whose `m`
/// smallest entries sum to at least `degbd(z, m)` for every `m`, optionally
/// restricted to sequential types. Lexicographically descending.
///
/// These are necessary conditions only: the result contains every type a
/// general smoothing can have, and possibly more. An empty result is a
/// legitimate outcome for inputs that do not come from geometry.
pub fn admissible_smoothings(z: &NodalType, require_sequential: bool) -> Vec<SplittingType> {
    let r = z.rank();
    let total = z.total_degree();
    let bounds: Vec<i64> = (1..=r).map(|m| degbd(z, m).expect("m in range")).collect();
    let mut out = Vec::new();
    // Build from the smallest entry upward; `tail` holds c_r, c_{r-1}, ...
    let mut tail = Vec::with_capacity(r);
    extend_tail(r, total, &bounds, bounds[0], 0, &mut tail, &mut out);
    if require_sequential {
        out.retain(|t| t.is_sequential());
    }
    out.sort_unstable_by(|a, b| b.degrees().cmp(a.degrees()));
    out
}

fn extend_tail(
    r: usize,
    total: i64,
    bounds: &[i64],
    floor: i64,
    sum: i64,
    tail: &mut Vec<i64>,
    out: &mut Vec<SplittingType>,
) {
    let k = tail.len();
    if k == r {
        if sum == total {
            out.push(SplittingType::new(tail.clone()).expect("nonempty"));
        }
        return;
    }
    let remaining = (r - k) as i64;
    if k + 1 == r {
        let c = total - sum;
        if c >= floor && sum + c >= bounds[k] {
            tail.push(c);
            extend_tail(r, total, bounds, c, sum + c, tail, out);
            tail.pop();
        }
        return;
    }
    // Every later entry is at least c, so c can be at most the average of
    // what is left.
    let cap = (total - sum).div_euclid(remaining);
    for c in floor..=cap {
        if sum + c < bounds[k] {
            continue;
        }
        tail.push(c);
        extend_tail(r, total, bounds, c, sum + c, tail, out);
        tail.pop();
    }
}

/// A block of an optimal labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessBlock {
    /// Summand `index` maps onto a line bundle quotient on `Z`,
    /// contributing `a + b`.
    Single { index: usize, value: i64 },
    /// Summand `first` contributes its `Z1` part and `second` its `Z2` part;
    /// together they form a rank-2 piece contributing `a_first + b_second + 2`.
    /// `certified` records whether `a_second >= a_first + 2` and
    /// `b_first >= b_second + 2`, the inequalities under which such a rank-2
    /// bundle with the required quotient exists.
    Pair {
        first: usize,
        second: usize,
        value: i64,
        certified: bool,
    },
}

impl WitnessBlock {
    pub fn value(&self) -> i64 {
        match self {
            WitnessBlock::Single { value, .. } | WitnessBlock::Pair { value, .. } => *value,
        }
    }
}

/// Index sets realizing `degbd(z, m)` split into certified blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpnessWitness {
    pub m: usize,
    pub blocks: Vec<WitnessBlock>,
    pub total: i64,
}

impl SharpnessWitness {
    /// Whether every paired block satisfies its rank-2 inequalities.
    pub fn is_certified(&self) -> bool {
        self.blocks.iter().all(|b| match b {
            WitnessBlock::Single { .. } => true,
            WitnessBlock::Pair { certified, .. } => *certified,
        })
    }
}

impl fmt::Display for SharpnessWitness {
    /// One block per line (1-based indices into the canonical order), then
    /// the total. Uncertified pairs carry a trailing `uncertified` marker.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            match block {
                WitnessBlock::Single { index, value } => {
                    writeln!(f, "single {} -> {value}", index + 1)?
                }
                WitnessBlock::Pair {
                    first,
                    second,
                    value,
                    certified,
                } => {
                    write!(f, "pair {} {} -> {value}", first + 1, second + 1)?;
                    if !certified {
                        f.write_str(" uncertified")?;
                    }
                    writeln!(f)?;
                }
            }
        }
        writeln!(f, "total -> {}", self.total)
    }
}

/// Decomposes an optimal labeling for `degbd(z, m)` into single summands
/// and rank-2 pairs.
///
/// In an optimal labeling every pairing of a `K1` index with a `K2` index
/// satisfies the rank-2 inequalities: if one failed, moving one summand of
/// the pair into `J` would strictly lower the cost. The `certified` flags
/// are still checked rather than assumed.
pub fn sharpness_witness(z: &NodalType, m: usize) -> Result<SharpnessWitness> {
    check_m(z, m)?;
    let table = DegbdTable::build(z, m);
    let roles = table.labeling(z);
    let pairs = z.pairs();

    let mut blocks = Vec::new();
    let mut firsts = Vec::new();
    let mut seconds = Vec::new();
    for (i, role) in roles.iter().enumerate() {
        match role {
            Role::Both => blocks.push(WitnessBlock::Single {
                index: i,
                value: pairs[i].0 + pairs[i].1,
            }),
            Role::First => firsts.push(i),
            Role::Second => seconds.push(i),
            Role::Unused => {}
        }
    }
    debug_assert_eq!(firsts.len(), seconds.len());
    for (&i, &j) in firsts.iter().zip(&seconds) {
        let (a_i, b_i) = pairs[i];
        let (a_j, b_j) = pairs[j];
        blocks.push(WitnessBlock::Pair {
            first: i,
            second: j,
            value: a_i + b_j + 2,
            certified: a_j >= a_i + 2 && b_i >= b_j + 2,
        });
    }
    let total = blocks.iter().map(WitnessBlock::value).sum();
    debug_assert_eq!(total, table.optimum());
    Ok(SharpnessWitness { m, blocks, total })
}

impl SharpnessWitness {
    /// The torsion-free quotient on `Z` described by the witness: singles
    /// give the locally free part, pairs give one sheaf on each component.
    pub fn quotient_on_z(&self, z: &NodalType) -> TorsionFreeType {
        let mut q = TorsionFreeType::default();
        for block in &self.blocks {
            match *block {
                WitnessBlock::Single { index, .. } => q.g_part.push(z.pairs()[index]),
                WitnessBlock::Pair { first, second, .. } => {
                    q.h1_part.push(z.pairs()[first].0);
                    q.h2_part.push(z.pairs()[second].1);
                }
            }
        }
        q
    }
}
