//! Ext groups between nef line bundles and an exceptional-sequence checker.
//!
//! `Ext^i(O(P), O(Q)) = H^i(O(Q - P))`, so every check reduces to a cohomology table of
//! the virtual polyhedron `(Q, P)`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology_table_with, default_degree_box, DegreeBox, EngineOptions};
use crate::divisor::VirtualPolyhedron;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::MVec;
use crate::polyhedron::{Compatibility, LatticePolyhedron};

/// Compact polytopes, all compatible with one complete fan.
#[derive(Clone, Debug)]
pub struct NefSequence {
    polytopes: Vec<LatticePolyhedron>,
    fan: Arc<Fan>,
}

impl NefSequence {
    pub fn new(polytopes: Vec<LatticePolyhedron>, fan: Arc<Fan>) -> Result<Self> {
        for p in &polytopes {
            if !p.is_compact() {
                return Err(Error::InvalidInput(
                    "exceptional sequences need compact polytopes".into(),
                ));
            }
            if let Compatibility::Incompatible { witness } = p.is_compatible(&fan) {
                return Err(Error::NotCompatible { witness });
            }
        }
        Ok(Self { polytopes, fan })
    }

    pub fn polytopes(&self) -> &[LatticePolyhedron] {
        &self.polytopes
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn len(&self) -> usize {
        self.polytopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polytopes.is_empty()
    }

    /// Every polytope translated by `m`.
    pub fn shift(&self, m: &MVec) -> Self {
        Self {
            polytopes: self.polytopes.iter().map(|p| p.translate(m)).collect(),
            fan: self.fan.clone(),
        }
    }
}

/// `Σ_m dim Ext^i(O(P), O(Q))_m`, i.e. total cohomology of `(Q, P)`. Without a box, the
/// default box of `(Q, P)` is used.
pub fn ext_dims(
    p: &LatticePolyhedron,
    q: &LatticePolyhedron,
    fan: &Arc<Fan>,
    degree_box: Option<&DegreeBox>,
) -> Result<Vec<usize>> {
    let l = VirtualPolyhedron::new(q.clone(), p.clone(), fan.clone())?;
    let b = match degree_box {
        Some(b) => b.clone(),
        None => default_degree_box(&l).ok_or(Error::UnboundedBox)?,
    };
    Ok(cohomology_table_with(&l, &b, &EngineOptions::default())?.totals())
}

/// Which of the two Ext directions must vanish for `i < j`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `Ext^*(L_i, L_j) = 0`, i.e. `H^*(O(P_j - P_i)) = 0`.
    PaperConvention,
    /// `Ext^*(L_j, L_i) = 0`, i.e. `H^*(O(P_i - P_j)) = 0`.
    ReverseConvention,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::PaperConvention => "forward",
            Direction::ReverseConvention => "reverse",
        })
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Direction::PaperConvention),
            "reverse" => Ok(Direction::ReverseConvention),
            _ => Err(Error::InvalidInput(format!("unknown direction {s:?}"))),
        }
    }
}

/// A nonzero `Ext^i(L_from, L_to)_m` that should vanish. For self-Ext failures
/// `from == to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtViolation {
    pub from: usize,
    pub to: usize,
    pub degree: MVec,
    pub i: usize,
    pub dim: usize,
}

impl fmt::Display for ExtViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Ext^{}(L{}, L{}) has dimension {} in degree {}",
            self.i, self.from, self.to, self.dim, self.degree
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalReport {
    pub direction: Direction,
    pub violations: Vec<ExtViolation>,
}

impl ExceptionalReport {
    pub fn is_exceptional(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `Ext^*(L_k, L_k) = k` for every entry and the vanishing of the Ext groups
/// selected by `direction` for every ordered pair.
pub fn is_exceptional_sequence(
    seq: &NefSequence,
    direction: Direction,
    degree_box: Option<&DegreeBox>,
) -> Result<ExceptionalReport> {
    let n = seq.len();
    let mut jobs: Vec<(usize, usize)> = (0..n).map(|k| (k, k)).collect();
    for i in 0..n {
        for j in i + 1..n {
            jobs.push(match direction {
                Direction::PaperConvention => (i, j),
                Direction::ReverseConvention => (j, i),
            });
        }
    }
    let found = jobs
        .into_par_iter()
        .map(|(from, to)| ext_violations(seq, from, to, degree_box))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExceptionalReport {
        direction,
        violations: found.into_iter().flatten().collect(),
    })
}

fn ext_violations(
    seq: &NefSequence,
    from: usize,
    to: usize,
    degree_box: Option<&DegreeBox>,
) -> Result<Vec<ExtViolation>> {
    let p = &seq.polytopes[from];
    let q = &seq.polytopes[to];
    let l = VirtualPolyhedron::new(q.clone(), p.clone(), seq.fan.clone())?;
    let b = match degree_box {
        Some(b) => b.clone(),
        None => default_degree_box(&l).ok_or(Error::UnboundedBox)?,
    };
    let table = cohomology_table_with(&l, &b, &EngineOptions::default())?;
    let zero = MVec::zero(l.dim());
    let mut out = Vec::new();
    for (m, h) in table.entries() {
        for (i, &dim) in h.iter().enumerate() {
            // a line bundle has exactly the constants as endomorphisms
            let allowed = usize::from(from == to && i == 0 && *m == zero);
            if dim != allowed {
                out.push(ExtViolation {
                    from,
                    to,
                    degree: m.clone(),
                    i,
                    dim,
                });
            }
        }
    }
    if from == to && !table.entries().contains_key(&zero) {
        out.push(ExtViolation {
            from,
            to,
            degree: zero,
            i: 0,
            dim: 0,
        });
    }
    Ok(out)
}
