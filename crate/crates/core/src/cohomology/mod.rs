//! Degree-wise Čech cohomology of `O(Δ⁺ - Δ⁻)`.
//!
//! For a cone `τ` of the fan, the degree-`m` part of `O(Δ⁺ - Δ⁻)(U_τ)` is one-dimensional
//! iff `v_τ⁻ - v_τ⁺ + m ∈ τ^∨`, and zero otherwise. The Čech complex of a cover by affine
//! charts therefore has one coordinate per subset of the cover whose intersection passes
//! this test, with restriction maps `±1`.

mod classical;
mod good_cover;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divisor::VirtualPolyhedron;
use crate::error::{Error, Result};
use crate::fan::RaySet;
use crate::lattice::MVec;
use crate::linalg::{cohomology_dims, ChainComplexDims, Field, IntegerMatrix};

pub use classical::{classical_cohomology, classical_cohomology_over, h0_containment};
pub use good_cover::{
    good_cover_report, ConeFlags, GoodCoverOptions, GoodCoverReport, SampleCheck, DEFAULT_SAMPLES,
    DEFAULT_SEED,
};

/// Covers larger than this are refused; the complex has `2^k - 1` generators.
pub const MAX_COVER: usize = 20;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMode {
    #[default]
    MaximalCones,
    AllCones,
}

impl fmt::Display for CoverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverMode::MaximalCones => "max",
            CoverMode::AllCones => "all",
        })
    }
}

impl FromStr for CoverMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" | "maximal" => Ok(CoverMode::MaximalCones),
            "all" => Ok(CoverMode::AllCones),
            _ => Err(Error::InvalidInput(format!("unknown cover mode {s:?}"))),
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineOptions {
    pub field: Field,
    pub cover: CoverMode,
}

/// `v_τ⁻ - v_τ⁺ + m ∈ τ^∨`.
pub fn local_sections_nonzero(l: &VirtualPolyhedron, tau: RaySet, m: &MVec) -> Result<bool> {
    m.check_dim(l.dim())?;
    if !l.fan().is_cone(tau) {
        return Err(Error::ConeNotInFan(tau));
    }
    Ok(sections_present(l, tau, m))
}

fn sections_present(l: &VirtualPolyhedron, tau: RaySet, m: &MVec) -> bool {
    let (plus, minus) = l.vertex_pair(tau).expect("cone of the fan");
    let w = &(minus - plus) + m;
    tau.iter().all(|i| w.pair(l.fan().ray(i)) >= 0)
}

pub fn cover_cones(l: &VirtualPolyhedron, cover: CoverMode) -> Vec<RaySet> {
    match cover {
        CoverMode::MaximalCones => l.fan().max_cones().to_vec(),
        CoverMode::AllCones => l.fan().all_cones().to_vec(),
    }
}

pub fn cech_complex(l: &VirtualPolyhedron, m: &MVec, cover: CoverMode) -> Result<ChainComplexDims> {
    cech_complex_over(l, m, &cover_cones(l, cover))
}

/// The Čech complex for an explicitly ordered list of cones of the fan.
pub fn cech_complex_over(
    l: &VirtualPolyhedron,
    m: &MVec,
    cones: &[RaySet],
) -> Result<ChainComplexDims> {
    m.check_dim(l.dim())?;
    if let Some(&bad) = cones.iter().find(|&&c| !l.fan().is_cone(c)) {
        return Err(Error::ConeNotInFan(bad));
    }
    build_cech(cones, |tau| sections_present(l, tau, m))
}

/// Čech complex on the subsets of `cones`, keeping exactly those whose intersection
/// satisfies `present`. `present` must be inherited by faces.
pub(crate) fn build_cech(
    cones: &[RaySet],
    present: impl Fn(RaySet) -> bool,
) -> Result<ChainComplexDims> {
    let k = cones.len();
    if k == 0 {
        return Err(Error::InvalidInput("empty cover".into()));
    }
    if k > MAX_COVER {
        return Err(Error::InvalidInput(format!(
            "cover of {k} cones exceeds the limit of {MAX_COVER}"
        )));
    }
    let total = 1usize << k;
    let mut inter = vec![RaySet::empty(); total];
    let mut index = vec![usize::MAX; total];
    let mut dims = vec![0usize; k];
    let mut seen: BTreeMap<RaySet, bool> = BTreeMap::new();
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        inter[mask] = if rest == 0 {
            cones[low]
        } else {
            inter[rest].intersection(cones[low])
        };
        let tau = inter[mask];
        if *seen.entry(tau).or_insert_with(|| present(tau)) {
            let p = mask.count_ones() as usize - 1;
            index[mask] = dims[p];
            dims[p] += 1;
        }
    }
    let mut boundaries: Vec<IntegerMatrix> = (0..k - 1)
        .map(|p| IntegerMatrix::zeros(dims[p + 1], dims[p]))
        .collect();
    for mask in 1..total {
        let size = mask.count_ones() as usize;
        if size < 2 || index[mask] == usize::MAX {
            continue;
        }
        let d = &mut boundaries[size - 2];
        let mut bits = mask;
        let mut position = 0;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            bits ^= b;
            let face = mask ^ b;
            if index[face] != usize::MAX {
                let sign = if position % 2 == 0 { 1 } else { -1 };
                d.set(index[mask], index[face], sign);
            }
            position += 1;
        }
    }
    Ok(ChainComplexDims::new(dims, boundaries)?)
}

/// `dim H^i(O(Δ⁺ - Δ⁻))(m)` for `i = 0..=d`, over `Q` with the maximal-cone cover.
pub fn cohomology_at(l: &VirtualPolyhedron, m: &MVec) -> Result<Vec<usize>> {
    cohomology_at_with(l, m, &EngineOptions::default())
}

pub fn cohomology_at_with(
    l: &VirtualPolyhedron,
    m: &MVec,
    options: &EngineOptions,
) -> Result<Vec<usize>> {
    let complex = cech_complex(l, m, options.cover)?;
    Ok(truncate(cohomology_dims(&complex, options.field)?, l.dim()))
}

/// Cut or pad a cohomology vector to `d + 1` entries.
pub(crate) fn truncate(mut h: Vec<usize>, d: usize) -> Vec<usize> {
    debug_assert!(
        h.iter().skip(d + 1).all(|&x| x == 0),
        "cohomology above the dimension: {h:?}"
    );
    h.resize(d + 1, 0);
    h
}

/// Inclusive integer box of degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BoxWire", into = "BoxWire")]
pub struct DegreeBox {
    lo: MVec,
    hi: MVec,
}

#[derive(Clone, Serialize, Deserialize)]
struct BoxWire {
    lo: MVec,
    hi: MVec,
}

impl TryFrom<BoxWire> for DegreeBox {
    type Error = Error;
    fn try_from(w: BoxWire) -> Result<Self> {
        DegreeBox::new(w.lo, w.hi)
    }
}

impl From<DegreeBox> for BoxWire {
    fn from(b: DegreeBox) -> Self {
        BoxWire { lo: b.lo, hi: b.hi }
    }
}

impl DegreeBox {
    pub fn new(lo: MVec, hi: MVec) -> Result<Self> {
        hi.check_dim(lo.dim())?;
        if lo.coords().iter().zip(hi.coords()).any(|(a, b)| a > b) {
            return Err(Error::InvalidInput(format!("empty degree box {lo}:{hi}")));
        }
        Ok(Self { lo, hi })
    }

    /// `[lo, hi]^dim`
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Result<Self> {
        Self::new(MVec::new(vec![lo; dim]), MVec::new(vec![hi; dim]))
    }

    pub fn point(m: MVec) -> Self {
        Self {
            lo: m.clone(),
            hi: m,
        }
    }

    pub fn lo(&self) -> &MVec {
        &self.lo
    }

    pub fn hi(&self) -> &MVec {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn len(&self) -> usize {
        self.lo
            .coords()
            .iter()
            .zip(self.hi.coords())
            .map(|(a, b)| (b - a + 1) as usize)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: &MVec) -> bool {
        m.dim() == self.dim()
            && m.coords()
                .iter()
                .zip(self.lo.coords().iter().zip(self.hi.coords()))
                .all(|(x, (a, b))| a <= x && x <= b)
    }

    /// Grown by `k` in every direction.
    pub fn inflate(&self, k: i64) -> Self {
        Self {
            lo: MVec::new(self.lo.coords().iter().map(|x| x - k).collect()),
            hi: MVec::new(self.hi.coords().iter().map(|x| x + k).collect()),
        }
    }

    /// `{-m : m ∈ self}`
    pub fn negate(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    /// The smallest box containing both.
    pub fn hull(&self, other: &Self) -> Self {
        let pick = |a: &MVec, b: &MVec, f: fn(i64, i64) -> i64| {
            MVec::new(
                a.coords()
                    .iter()
                    .zip(b.coords())
                    .map(|(x, y)| f(*x, *y))
                    .collect(),
            )
        };
        Self {
            lo: pick(&self.lo, &other.lo, i64::min),
            hi: pick(&self.hi, &other.hi, i64::max),
        }
    }

    /// All degrees in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = MVec> + '_ {
        let d = self.dim();
        let mut cur = Some(self.lo.coords().to_vec());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            let mut k = d;
            cur = loop {
                if k == 0 {
                    break None;
                }
                k -= 1;
                if next[k] < self.hi.coords()[k] {
                    next[k] += 1;
                    break Some(next);
                }
                next[k] = self.lo.coords()[k];
            };
            Some(MVec::new(out))
        })
    }
}

impl fmt::Display for DegreeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &MVec| {
            v.coords()
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}:{}", join(&self.lo), join(&self.hi))
    }
}

/// `lo1,lo2:hi1,hi2`
impl FromStr for DegreeBox {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse degree box {s:?}"));
        let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
        let parse = |part: &str| -> Result<MVec> {
            part.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(MVec::new)
        };
        Self::new(parse(lo)?, parse(hi)?)
    }
}

/// Bounding box of `{p - q}` over generators `p` of `Δ⁺` and `q` of `Δ⁻`, or `None` when
/// the tail cone is non-trivial. Outside it `Δ⁺ - m` misses `Δ⁻`, so all cohomology
/// vanishes there.
pub fn default_degree_box(l: &VirtualPolyhedron) -> Option<DegreeBox> {
    if !l.plus().is_compact() {
        return None;
    }
    let d = l.dim();
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for p in l.plus().points() {
        for q in l.minus().points() {
            for (k, x) in (p - q).coords().iter().enumerate() {
                lo[k] = lo[k].min(*x);
                hi[k] = hi[k].max(*x);
            }
        }
    }
    Some(DegreeBox {
        lo: MVec::new(lo),
        hi: MVec::new(hi),
    })
}

/// Nonzero rows `m -> [h⁰, .., h^d]` over a finite degree box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableWire", into = "TableWire")]
pub struct CohomologyTable {
    degree_box: DegreeBox,
    dim: usize,
    entries: BTreeMap<MVec, Vec<usize>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct TableWire {
    #[serde(rename = "box")]
    degree_box: DegreeBox,
    dim: usize,
    rows: Vec<RowWire>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RowWire {
    m: MVec,
    h: Vec<usize>,
}

impl TryFrom<TableWire> for CohomologyTable {
    type Error = Error;
    fn try_from(w: TableWire) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for row in w.rows {
            if !w.degree_box.contains(&row.m) {
                return Err(Error::InvalidInput(format!(
                    "degree {} outside the box",
                    row.m
                )));
            }
            if row.h.len() != w.dim + 1 || row.h.iter().all(|&x| x == 0) {
                return Err(Error::InvalidInput(format!("bad row at {}", row.m)));
            }
            entries.insert(row.m, row.h);
        }
        Ok(Self {
            degree_box: w.degree_box,
            dim: w.dim,
            entries,
        })
    }
}

impl From<CohomologyTable> for TableWire {
    fn from(t: CohomologyTable) -> Self {
        TableWire {
            degree_box: t.degree_box,
            dim: t.dim,
            rows: t
                .entries
                .into_iter()
                .map(|(m, h)| RowWire { m, h })
                .collect(),
        }
    }
}

impl CohomologyTable {
    pub fn degree_box(&self) -> &DegreeBox {
        &self.degree_box
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &BTreeMap<MVec, Vec<usize>> {
        &self.entries
    }

    /// Dimensions at `m`, zero when no row is stored.
    pub fn get(&self, m: &MVec) -> Vec<usize> {
        self.entries
            .get(m)
            .cloned()
            .unwrap_or_else(|| vec![0; self.dim + 1])
    }

    /// `Σ_m dim H^i(m)` for each `i`.
    pub fn totals(&self) -> Vec<usize> {
        let mut t = vec![0; self.dim + 1];
        for h in self.entries.values() {
            for (a, b) in t.iter_mut().zip(h) {
                *a += b;
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn cohomology_table(l: &VirtualPolyhedron, degree_box: &DegreeBox) -> Result<CohomologyTable> {
    cohomology_table_with(l, degree_box, &EngineOptions::default())
}

pub fn cohomology_table_with(
    l: &VirtualPolyhedron,
    degree_box: &DegreeBox,
    options: &EngineOptions,
) -> Result<CohomologyTable> {
    if degree_box.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            got: degree_box.dim(),
        });
    }
    let degrees: Vec<MVec> = degree_box.iter().collect();
    let rows = degrees
        .into_par_iter()
        .map(|m| cohomology_at_with(l, &m, options).map(|h| (m, h)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyTable {
        degree_box: degree_box.clone(),
        dim: l.dim(),
        entries: rows
            .into_iter()
            .filter(|(_, h)| h.iter().any(|&x| x > 0))
            .collect(),
    })
}

/// Table over the default box; fails with [`Error::UnboundedBox`] for a non-trivial tail.
pub fn default_table(l: &VirtualPolyhedron, options: &EngineOptions) -> Result<CohomologyTable> {
    let b = default_degree_box(l).ok_or(Error::UnboundedBox)?;
    cohomology_table_with(l, &b, options)
}
