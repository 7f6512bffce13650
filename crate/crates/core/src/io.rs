//! JSON schemas for posets and subdivision maps. Point sets, cones and
//! lattice maps deserialize directly.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::poset::{FinitePoset, SubdivisionMap};

/// `{"elements": [...], "covers": [[a, b], ...], "rank": {...}}`, elements
/// referenced by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<BTreeMap<String, i64>>,
}

fn index(labels: &[String]) -> Result<HashMap<&str, usize>> {
    let mut ix = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if ix.insert(l.as_str(), i).is_some() {
            return Err(Error::precondition(format!("duplicate element {l:?}")));
        }
    }
    Ok(ix)
}

fn lookup(ix: &HashMap<&str, usize>, l: &str) -> Result<usize> {
    ix.get(l).copied().ok_or_else(|| Error::precondition(format!("unknown element {l:?}")))
}

impl PosetJson {
    pub fn build(&self) -> Result<FinitePoset> {
        let ix = index(&self.elements)?;
        let covers: Vec<(usize, usize)> =
            self.covers.iter().map(|(a, b)| Ok((lookup(&ix, a)?, lookup(&ix, b)?))).collect::<Result<_>>()?;
        let ranks = match &self.rank {
            None => None,
            Some(r) => {
                for k in r.keys() {
                    lookup(&ix, k)?;
                }
                Some(
                    self.elements
                        .iter()
                        .map(|l| r.get(l).copied().ok_or_else(|| Error::precondition(format!("no rank for {l:?}"))))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
        };
        FinitePoset::from_covers(self.elements.clone(), &covers, ranks)
    }

    /// Canonical form: elements in index order, covers sorted.
    pub fn from_poset(p: &FinitePoset) -> PosetJson {
        let labels = p.labels().to_vec();
        let mut covers: Vec<(usize, usize)> = p.cover_pairs();
        covers.sort();
        PosetJson {
            covers: covers.into_iter().map(|(a, b)| (labels[a].clone(), labels[b].clone())).collect(),
            rank: p.ranks().map(|r| labels.iter().cloned().zip(r.iter().copied()).collect()),
            elements: labels,
        }
    }
}

/// Source poset fields plus `"target"`, `"sigma"` and `"boundary"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionJson {
    #[serde(flatten)]
    pub source: PosetJson,
    pub target: PosetJson,
    pub sigma: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<String>>,
}

impl SubdivisionJson {
    pub fn build(&self) -> Result<SubdivisionMap> {
        let source = self.source.build()?;
        let target = self.target.build()?;
        let six = index(&self.source.elements)?;
        let tix = index(&self.target.elements)?;
        for k in self.sigma.keys() {
            lookup(&six, k)?;
        }
        let sigma = self
            .source
            .elements
            .iter()
            .map(|l| match self.sigma.get(l) {
                Some(t) => lookup(&tix, t),
                None => Err(Error::precondition(format!("sigma has no image for {l:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let boundary = match &self.boundary {
            None => None,
            Some(b) => {
                let mut set = BitSet::new();
                for l in b {
                    set.insert(lookup(&six, l)?);
                }
                Some(set)
            }
        };
        SubdivisionMap::new(source, target, sigma, boundary)
    }

    pub fn from_map(m: &SubdivisionMap) -> SubdivisionJson {
        let s = m.source();
        let t = m.target();
        SubdivisionJson {
            source: PosetJson::from_poset(s),
            target: PosetJson::from_poset(t),
            sigma: (0..s.len()).map(|y| (s.label(y).to_string(), t.label(m.sigma()[y]).to_string())).collect(),
            boundary: m.boundary().map(|b| b.iter().map(|y| s.label(y).to_string()).collect()),
        }
    }
}
