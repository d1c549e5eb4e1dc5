//! JSON model files: a [`VarietyModel`] plus an optional counting block.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::counting::{CountingConfig, EpsSchedule};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::variety::{Chamber, FiltrationPiece, SlopeFunctional, VarietyModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    dim: usize,
    rho: usize,
    #[serde(rename = "minusK")]
    minus_k: Vec<i64>,
    nef: RawNef,
    chambers: Vec<RawChamber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    counting: Option<RawCounting>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNef {
    facets: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChamber {
    facets: Vec<Vec<i64>>,
    filtration: Vec<RawPiece>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiece {
    rank: usize,
    slope_num: Vec<i64>,
    slope_den: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCounting {
    q_num: i64,
    q_den: i64,
    br: u64,
    #[serde(rename = "M")]
    m_cap: u64,
    beta: Vec<i64>,
    outside_xi: u64,
    eps: RawEps,
    delta_num: i64,
    delta_den: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawEps {
    Power(RawPower),
    Table(RawTable),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPower {
    c_num: i64,
    c_den: i64,
    p_num: u64,
    p_den: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    table: Vec<[i64; 3]>,
}

/// Contents of a model file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub model: VarietyModel,
    pub counting: Option<CountingConfig>,
}

fn ratio(num: i64, den: i64, what: &str) -> Result<Rational> {
    if den == 0 {
        return Err(Error::InvalidModel(format!("{what}: zero denominator")));
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

fn split_ratio(r: &Rational) -> Result<(i64, i64)> {
    let num =
        i64::try_from(r.numer()).map_err(|_| Error::InvalidModel("numerator overflow".into()))?;
    let den =
        i64::try_from(r.denom()).map_err(|_| Error::InvalidModel("denominator overflow".into()))?;
    Ok((num, den))
}

impl RawCounting {
    fn into_config(self) -> Result<CountingConfig> {
        let eps = match self.eps {
            RawEps::Power(p) => EpsSchedule::Power {
                c: ratio(p.c_num, p.c_den, "eps coefficient")?,
                p_num: p.p_num,
                p_den: p.p_den,
            },
            RawEps::Table(t) => {
                let mut rows = Vec::with_capacity(t.table.len());
                for [d, num, den] in t.table {
                    let d = u64::try_from(d)
                        .map_err(|_| Error::InvalidConfig(format!("negative eps key {d}")))?;
                    rows.push((d, ratio(num, den, "eps table entry")?));
                }
                EpsSchedule::Table(rows)
            }
        };
        CountingConfig::new(
            ratio(self.q_num, self.q_den, "q")?,
            self.br,
            self.m_cap,
            self.beta,
            self.outside_xi,
            eps,
            ratio(self.delta_num, self.delta_den, "delta")?,
        )
    }

    fn from_config(cfg: &CountingConfig) -> Result<Self> {
        let (q_num, q_den) = split_ratio(&cfg.q)?;
        let (delta_num, delta_den) = split_ratio(&cfg.delta)?;
        let eps = match &cfg.eps {
            EpsSchedule::Power { c, p_num, p_den } => {
                let (c_num, c_den) = split_ratio(c)?;
                RawEps::Power(RawPower {
                    c_num,
                    c_den,
                    p_num: *p_num,
                    p_den: *p_den,
                })
            }
            EpsSchedule::Table(rows) => RawEps::Table(RawTable {
                table: rows
                    .iter()
                    .map(|(d, v)| {
                        let (n, m) = split_ratio(v)?;
                        Ok([*d as i64, n, m])
                    })
                    .collect::<Result<_>>()?,
            }),
        };
        Ok(Self {
            q_num,
            q_den,
            br: cfg.br,
            m_cap: cfg.m_cap,
            beta: cfg.beta.clone(),
            outside_xi: cfg.outside_xi,
            eps,
            delta_num,
            delta_den,
        })
    }
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawModel =
            serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
        let mut chambers = Vec::with_capacity(raw.chambers.len());
        for ch in raw.chambers {
            let mut filtration = Vec::with_capacity(ch.filtration.len());
            for p in ch.filtration {
                filtration.push(FiltrationPiece {
                    rank: p.rank,
                    slope: SlopeFunctional::new(p.slope_num, p.slope_den)?,
                });
            }
            chambers.push(Chamber {
                facets: ch.facets,
                filtration,
            });
        }
        let model = VarietyModel::new(
            raw.dim,
            raw.rho,
            raw.minus_k,
            raw.nef.facets,
            raw.nef.generators,
            chambers,
        )?;
        let counting = raw.counting.map(RawCounting::into_config).transpose()?;
        Ok(Self { model, counting })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidModel(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Pretty-printed JSON that [`ModelFile::from_json`] reads back.
    pub fn to_json(&self) -> Result<String> {
        let m = &self.model;
        let raw = RawModel {
            dim: m.dim,
            rho: m.rho,
            minus_k: m.minus_k.clone(),
            nef: RawNef {
                facets: m.nef_facets.clone(),
                generators: m.nef_generators.clone(),
            },
            chambers: m
                .chambers
                .iter()
                .map(|ch| RawChamber {
                    facets: ch.facets.clone(),
                    filtration: ch
                        .filtration
                        .iter()
                        .map(|p| RawPiece {
                            rank: p.rank,
                            slope_num: p.slope.num.clone(),
                            slope_den: p.slope.den,
                        })
                        .collect(),
                })
                .collect(),
            counting: self
                .counting
                .as_ref()
                .map(RawCounting::from_config)
                .transpose()?,
        };
        let mut s =
            serde_json::to_string_pretty(&raw).map_err(|e| Error::InvalidModel(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}
