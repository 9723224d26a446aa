//! Fans stored as a global ray list plus maximal cones given by ray-index sets.
//!
//! Cones of the fan are always addressed by their [`RaySet`]. The intersection of two
//! cones of a fan is a common face, hence generated by the shared rays, so intersections
//! are plain set intersections.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::{rank_of, Cone};
use crate::error::{Error, Result};
use crate::lattice::{MVec, NVec, M, N};
use crate::linalg::LinearSystem;

/// A set of ray indices, at most [`RaySet::CAPACITY`] of them.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RaySet(u64);

impl RaySet {
    pub const CAPACITY: usize = 64;

    pub const fn empty() -> Self {
        RaySet(0)
    }

    /// `{0, .., k-1}`
    pub fn full(k: usize) -> Self {
        assert!(k <= Self::CAPACITY);
        if k == 64 {
            RaySet(u64::MAX)
        } else {
            RaySet((1u64 << k) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = RaySet::empty();
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < Self::CAPACITY, "ray index {i} out of range");
        self.0 |= 1 << i;
    }

    pub fn contains(self, i: usize) -> bool {
        i < Self::CAPACITY && self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: Self) -> Self {
        RaySet(self.0 & other.0)
    }

    pub fn union(self, other: Self) -> Self {
        RaySet(self.0 | other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..Self::CAPACITY).filter(move |&i| self.contains(i))
    }

    /// All subsets, in increasing order of their bit pattern.
    pub fn subsets(self) -> impl Iterator<Item = RaySet> {
        // enumerate submasks from 0 upward
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(RaySet(cur))
        })
    }
}

impl fmt::Display for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RaySet {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for RaySet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(bad) = v.iter().find(|&&i| i >= RaySet::CAPACITY) {
            return Err(serde::de::Error::custom(format!(
                "ray index {bad} out of range"
            )));
        }
        Ok(RaySet::from_indices(v))
    }
}

#[derive(Clone, Debug)]
pub struct Fan {
    dim: usize,
    rays: Vec<NVec>,
    max_cones: Vec<RaySet>,
    all_cones: OnceLock<Vec<RaySet>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

impl Fan {
    /// Structural checks only: coordinates, primitivity, index ranges. Geometric fan axioms
    /// are checked by [`Fan::validate`].
    pub fn new(dim: usize, rays: Vec<NVec>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if rays.len() > RaySet::CAPACITY {
            return Err(Error::InvalidInput(format!(
                "at most {} rays are supported",
                RaySet::CAPACITY
            )));
        }
        for (i, r) in rays.iter().enumerate() {
            r.check_dim(dim)?;
            if !r.is_primitive() {
                return Err(Error::InvalidInput(format!(
                    "ray {i} = {r} is not primitive"
                )));
            }
            if rays[..i].contains(r) {
                return Err(Error::InvalidInput(format!("ray {i} = {r} is repeated")));
            }
        }
        if max_cones.is_empty() {
            return Err(Error::InvalidInput("fan has no cones".into()));
        }
        let mut sets = Vec::with_capacity(max_cones.len());
        for (c, idx) in max_cones.iter().enumerate() {
            if let Some(&bad) = idx.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidInput(format!(
                    "cone {c} refers to missing ray {bad}"
                )));
            }
            let s = RaySet::from_indices(idx.iter().copied());
            if sets.contains(&s) {
                return Err(Error::InvalidInput(format!("cone {c} is repeated")));
            }
            sets.push(s);
        }
        Ok(Self {
            dim,
            rays,
            max_cones: sets,
            all_cones: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[NVec] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &NVec {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[RaySet] {
        &self.max_cones
    }

    /// The cone generated by the given rays.
    pub fn cone(&self, s: RaySet) -> Cone<N> {
        Cone::with_index(
            self.dim,
            s.iter().map(|i| self.rays[i].clone()).collect(),
            s,
        )
    }

    /// Every cone of the fan: all faces of all maximal cones, deduplicated. Maximal cones
    /// come first in their given order, then the rest by decreasing size.
    pub fn all_cones(&self) -> &[RaySet] {
        self.all_cones.get_or_init(|| {
            let mut seen: BTreeSet<RaySet> = self.max_cones.iter().copied().collect();
            let mut rest = Vec::new();
            for &s in &self.max_cones {
                let members: Vec<usize> = s.iter().collect();
                for local in self.cone(s).faces() {
                    let global = RaySet::from_indices(local.iter().map(|k| members[k]));
                    if seen.insert(global) {
                        rest.push(global);
                    }
                }
            }
            rest.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
            let mut out = self.max_cones.clone();
            out.extend(rest);
            out
        })
    }

    pub fn is_cone(&self, s: RaySet) -> bool {
        self.all_cones().contains(&s)
    }

    /// Least-index maximal cone containing `tau`.
    pub fn containing_max_cone(&self, tau: RaySet) -> Option<usize> {
        self.max_cones.iter().position(|&s| tau.is_subset(s))
    }

    /// `σ ∩ τ` for cones of the fan.
    pub fn intersect_cones(&self, a: RaySet, b: RaySet) -> Result<RaySet> {
        for s in [a, b] {
            if !self.is_cone(s) {
                return Err(Error::ConeNotInFan(s));
            }
        }
        Ok(a.intersection(b))
    }

    pub fn is_simplicial(&self) -> bool {
        self.first_non_simplicial().is_none()
    }

    pub fn first_non_simplicial(&self) -> Option<RaySet> {
        self.max_cones.iter().copied().find(|&s| {
            rank_of(&s.iter().map(|i| self.rays[i].clone()).collect::<Vec<_>>()) != s.len()
        })
    }

    /// Same cones regardless of how rays and cones are numbered.
    pub fn same_fan(&self, other: &Fan) -> bool {
        let key = |f: &Fan| -> BTreeSet<BTreeSet<Vec<i64>>> {
            f.max_cones
                .iter()
                .map(|s| s.iter().map(|i| f.rays[i].coords().to_vec()).collect())
                .collect()
        };
        self.dim == other.dim && key(self) == key(other)
    }

    /// Checks the fan axioms against the support `δ^∨` for the given tail cone `δ ⊂ M`.
    ///
    /// Support completeness is verified by facet counting: every codimension-one cone must
    /// lie in exactly two maximal cones, or in exactly one when it lies in the boundary of
    /// `δ^∨`. This is sound for pure full-dimensional fans.
    pub fn validate(&self, tail: &Cone<M>) -> ValidationReport {
        let mut violations = Vec::new();
        if tail.dim() != self.dim {
            violations.push(Violation::TailDimension {
                expected: self.dim,
                got: tail.dim(),
            });
            return ValidationReport { violations };
        }
        if !tail.is_pointed() {
            violations.push(Violation::TailNotPointed);
        }
        let max_cones: Vec<Cone<N>> = self.max_cones.iter().map(|&s| self.cone(s)).collect();

        // (a) pointed, and pure of full dimension
        for (i, c) in max_cones.iter().enumerate() {
            if !c.is_pointed() {
                violations.push(Violation::NotPointed { cone: i });
            } else if !c.is_full_dimensional() {
                violations.push(Violation::NotFullDimensional { cone: i });
            }
        }
        if !violations.is_empty() {
            return ValidationReport { violations };
        }

        // (b) separation: σ ∩ τ is cut out of both by one hyperplane
        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                if !self.separated(self.max_cones[i], self.max_cones[j]) {
                    violations.push(Violation::BadIntersection {
                        first: i,
                        second: j,
                    });
                }
            }
        }

        // (c) facet counting
        let mut facets: BTreeMap<RaySet, Vec<usize>> = BTreeMap::new();
        for (i, &s) in self.max_cones.iter().enumerate() {
            let members: Vec<usize> = s.iter().collect();
            for local in max_cones[i].faces() {
                let global = RaySet::from_indices(local.iter().map(|k| members[k]));
                let rays: Vec<NVec> = global.iter().map(|k| self.rays[k].clone()).collect();
                if rank_of(&rays) + 1 == self.dim {
                    facets.entry(global).or_default().push(i);
                }
            }
        }
        for (facet, cones) in facets {
            let on_boundary = tail
                .rays()
                .iter()
                .any(|t| facet.iter().all(|k| t.pair(&self.rays[k]) == 0));
            let ok = cones.len() == 2 || (cones.len() == 1 && on_boundary);
            if !ok {
                violations.push(Violation::FacetCount {
                    facet,
                    cones,
                    on_boundary,
                });
            }
        }

        // (d) every maximal cone inside δ^∨
        for (i, c) in max_cones.iter().enumerate() {
            for t in tail.rays() {
                if !c.dual_contains(t) {
                    violations.push(Violation::OutsideSupport {
                        cone: i,
                        tail_ray: t.clone(),
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Exists `m` vanishing on the shared rays, positive on the rest of `a`, negative on
    /// the rest of `b`.
    fn separated(&self, a: RaySet, b: RaySet) -> bool {
        let shared = a.intersection(b);
        let mut sys = LinearSystem::new(self.dim);
        for k in shared.iter() {
            sys.eq(self.rays[k].coords(), 0);
        }
        for k in a.iter().filter(|&k| !shared.contains(k)) {
            sys.ge(self.rays[k].coords(), 1);
        }
        for k in b.iter().filter(|&k| !shared.contains(k)) {
            sys.le(self.rays[k].coords(), -1);
        }
        sys.is_feasible()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TailDimension {
        expected: usize,
        got: usize,
    },
    TailNotPointed,
    NotPointed {
        cone: usize,
    },
    NotFullDimensional {
        cone: usize,
    },
    BadIntersection {
        first: usize,
        second: usize,
    },
    FacetCount {
        facet: RaySet,
        cones: Vec<usize>,
        on_boundary: bool,
    },
    OutsideSupport {
        cone: usize,
        tail_ray: MVec,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TailDimension { expected, got } => {
                write!(f, "tail cone lives in dimension {got}, fan in {expected}")
            }
            Violation::TailNotPointed => write!(f, "tail cone is not pointed"),
            Violation::NotPointed { cone } => write!(f, "cone {cone} is not pointed"),
            Violation::NotFullDimensional { cone } => {
                write!(f, "cone {cone} is not full-dimensional")
            }
            Violation::BadIntersection { first, second } => {
                write!(f, "cones {first} and {second} do not meet in a common face")
            }
            Violation::FacetCount {
                facet,
                cones,
                on_boundary,
            } => write!(
                f,
                "facet {facet} lies in {} maximal cone(s) {cones:?}{} (support completeness)",
                cones.len(),
                if *on_boundary {
                    " on the support boundary"
                } else {
                    ""
                }
            ),
            Violation::OutsideSupport { cone, tail_ray } => write!(
                f,
                "cone {cone} leaves the dual of the tail cone (tail ray {tail_ray})"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "fan is valid (support checked by facet counting)");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn ray_set_basics() {
        let s = RaySet::from_indices([0, 2, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.to_string(), "{0,2,5}");
        assert_eq!(s.subsets().count(), 8);
        assert!(s.subsets().all(|t| t.is_subset(s)));
        assert_eq!(RaySet::full(64).len(), 64);
    }

    #[test]
    fn intersections_of_f1_cones() {
        let fan = catalog::hirzebruch1();
        let c = |a, b| RaySet::from_indices([a, b]);
        // rays (0,1),(1,0),(0,-1),(-1,1)
        assert_eq!(
            fan.intersect_cones(c(0, 1), c(1, 2)).unwrap(),
            RaySet::from_indices([1])
        );
        assert_eq!(
            fan.intersect_cones(c(0, 1), c(2, 3)).unwrap(),
            RaySet::empty()
        );
        assert_eq!(fan.intersect_cones(c(0, 1), c(0, 1)).unwrap(), c(0, 1));
        assert_eq!(
            fan.intersect_cones(c(0, 2), c(0, 1)),
            Err(Error::ConeNotInFan(c(0, 2)))
        );
    }

    #[test]
    fn catalog_fans_validate() {
        assert!(catalog::hirzebruch1().validate(&Cone::origin(2)).is_valid());
        assert!(catalog::projective_plane()
            .validate(&Cone::origin(2))
            .is_valid());
        assert!(catalog::p1xp1().validate(&Cone::origin(2)).is_valid());
        assert!(catalog::projective_line()
            .validate(&Cone::origin(1))
            .is_valid());
        let (fan, tail) = catalog::blown_up_plane();
        assert!(fan.validate(&tail).is_valid());
    }

    #[test]
    fn blown_up_plane_needs_its_tail() {
        let (fan, _) = catalog::blown_up_plane();
        let report = fan.validate(&Cone::origin(2));
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, Violation::FacetCount { .. })));
    }

    #[test]
    fn deleting_a_cone_exposes_two_facets() {
        let f1 = catalog::hirzebruch1();
        let rays = f1.rays().to_vec();
        let fan = Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let report = fan.validate(&Cone::origin(2));
        let exposed: Vec<RaySet> = report
            .violations
            .iter()
            .filter_map(|v| match v {
                Violation::FacetCount { facet, cones, .. } if cones.len() == 1 => Some(*facet),
                _ => None,
            })
            .collect();
        assert_eq!(
            exposed,
            vec![RaySet::from_indices([0]), RaySet::from_indices([3])]
        );
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        let rays = vec![
            NVec::from([1, 0]),
            NVec::from([0, 1]),
            NVec::from([1, 1]),
            NVec::from([-1, 0]),
            NVec::from([0, -1]),
        ];
        let fan = Fan::new(
            2,
            rays,
            vec![vec![0, 1], vec![2, 3], vec![3, 4], vec![4, 0]],
        )
        .unwrap();
        let report = fan.validate(&Cone::origin(2));
        assert!(report.violations.contains(&Violation::BadIntersection {
            first: 0,
            second: 1
        }));
    }

    #[test]
    fn non_pointed_cone() {
        let rays = vec![NVec::from([1, 0]), NVec::from([-1, 0])];
        let fan = Fan::new(2, rays, vec![vec![0, 1]]).unwrap();
        let report = fan.validate(&Cone::origin(2));
        assert_eq!(report.violations, vec![Violation::NotPointed { cone: 0 }]);
    }

    #[test]
    fn structural_errors() {
        assert!(Fan::new(2, vec![NVec::from([2, 0])], vec![vec![0]]).is_err());
        assert!(Fan::new(2, vec![NVec::from([1, 0])], vec![vec![1]]).is_err());
        assert!(Fan::new(2, vec![NVec::from([1, 0, 0])], vec![vec![0]]).is_err());
    }

    #[test]
    fn all_cones_of_f1() {
        let fan = catalog::hirzebruch1();
        // 4 maximal, 4 rays, origin
        assert_eq!(fan.all_cones().len(), 9);
        assert_eq!(&fan.all_cones()[..4], fan.max_cones());
        assert_eq!(*fan.all_cones().last().unwrap(), RaySet::empty());
    }

    #[test]
    fn separated_fan_in_dimension_three() {
        // fan over the faces of the octahedron (P1 x P1 x P1)
        let mut rays = Vec::new();
        for i in 0..3 {
            for s in [1, -1] {
                let mut v = vec![0; 3];
                v[i] = s;
                rays.push(NVec::new(v));
            }
        }
        let mut cones = Vec::new();
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    cones.push(vec![a, b, c]);
                }
            }
        }
        let fan = Fan::new(3, rays, cones).unwrap();
        assert!(fan.validate(&Cone::origin(3)).is_valid());
        assert_eq!(fan.all_cones().len(), 8 + 12 + 6 + 1);
    }
}
