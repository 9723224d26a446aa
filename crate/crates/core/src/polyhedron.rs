//! Lattice polyhedra `conv(points) + δ` with a fixed tail cone `δ`.
//!
//! Generator points may be redundant; nothing here ever needs a convex hull, because all
//! consumers go through support minima.

use std::collections::BTreeSet;

use crate::cone::{rank_of, Cone};
use crate::error::{Error, Result};
use crate::fan::{Fan, RaySet};
use crate::lattice::{MVec, NVec, M};
use crate::linalg::{Rational, RationalMatrix, Solution};
use num_traits::{One, Signed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolyhedron {
    dim: usize,
    points: Vec<MVec>,
    tail: Cone<M>,
}

/// Outcome of [`LatticePolyhedron::is_compatible`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compatibility {
    Compatible,
    /// The support function is not linear on this cone (or not even finite on it).
    Incompatible {
        witness: RaySet,
    },
}

impl Compatibility {
    pub fn is_compatible(self) -> bool {
        self == Compatibility::Compatible
    }
}

impl LatticePolyhedron {
    pub fn new(points: Vec<MVec>, tail_rays: Vec<MVec>) -> Result<Self> {
        let dim = points
            .first()
            .ok_or_else(|| Error::InvalidInput("polyhedron needs at least one point".into()))?
            .dim();
        let tail = Cone::new(dim, tail_rays)?;
        Self::with_tail(points, tail)
    }

    pub fn with_tail(points: Vec<MVec>, tail: Cone<M>) -> Result<Self> {
        let dim = tail.dim();
        if points.is_empty() {
            return Err(Error::InvalidInput(
                "polyhedron needs at least one point".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            p.check_dim(dim)?;
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        Ok(Self {
            dim,
            points: out,
            tail,
        })
    }

    /// A compact lattice polytope.
    pub fn polytope(points: Vec<MVec>) -> Result<Self> {
        Self::new(points, Vec::new())
    }

    /// The neutral element `δ`: the tail cone placed at the origin.
    pub fn neutral(tail: &Cone<M>) -> Self {
        Self {
            dim: tail.dim(),
            points: vec![MVec::zero(tail.dim())],
            tail: tail.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[MVec] {
        &self.points
    }

    pub fn tail(&self) -> &Cone<M> {
        &self.tail
    }

    pub fn is_compact(&self) -> bool {
        self.tail.rays().is_empty()
    }

    pub fn same_tail(&self, other: &Self) -> bool {
        self.tail.rays() == other.tail.rays() || self.tail.same_cone(&other.tail)
    }

    /// `min <Δ, n>`; unbounded unless `n ∈ δ^∨`.
    pub fn support_min(&self, n: &NVec) -> Result<i64> {
        n.check_dim(self.dim)?;
        if !self.tail.dual_contains(n) {
            return Err(Error::UnboundedBelow {
                direction: n.coords().to_vec(),
            });
        }
        Ok(self
            .points
            .iter()
            .map(|p| p.pair(n))
            .min()
            .expect("non-empty"))
    }

    /// A generator point realising the support minimum on every ray of `sigma`. For a
    /// full-dimensional cone this is the vertex `v_σ`.
    pub fn vertex_v_sigma(&self, sigma: &Cone<crate::lattice::N>) -> Result<MVec> {
        let witness = sigma.index().unwrap_or_default();
        let mins = sigma
            .rays()
            .iter()
            .map(|r| self.support_min(r))
            .collect::<Result<Vec<i64>>>()
            .map_err(|_| Error::NotCompatible { witness })?;
        self.points
            .iter()
            .find(|p| sigma.rays().iter().zip(&mins).all(|(r, &m)| p.pair(r) == m))
            .cloned()
            .ok_or(Error::NotCompatible { witness })
    }

    /// `v_σ` for every maximal cone of the fan, in fan order.
    pub fn vertices_on(&self, fan: &Fan) -> Result<Vec<MVec>> {
        fan.max_cones()
            .iter()
            .map(|&s| self.vertex_v_sigma(&fan.cone(s)))
            .collect()
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if !self.same_tail(other) {
            return Err(Error::TailMismatch);
        }
        let points = self
            .points
            .iter()
            .flat_map(|p| other.points.iter().map(move |q| p + q))
            .collect();
        Self::with_tail(points, self.tail.clone())
    }

    pub fn translate(&self, by: &MVec) -> Self {
        Self {
            dim: self.dim,
            points: self.points.iter().map(|p| p + by).collect(),
            tail: self.tail.clone(),
        }
    }

    /// `k·Δ`; `k = 0` gives the neutral element.
    pub fn dilate(&self, k: u32) -> Self {
        if k == 0 {
            return Self::neutral(&self.tail);
        }
        Self {
            dim: self.dim,
            points: self.points.iter().map(|p| p.scale(i64::from(k))).collect(),
            tail: self.tail.clone(),
        }
    }

    /// Exact membership. `(x, 1)` must be a nonnegative combination of the homogenized
    /// generators `(p, 1)`, `(t, 0)`, and by Carathéodory it suffices to try each basis of
    /// their span.
    pub fn contains(&self, x: &MVec) -> bool {
        if x.dim() != self.dim {
            return false;
        }
        let generators: Vec<Vec<i64>> = self
            .points
            .iter()
            .map(|p| (p.coords().to_vec(), 1))
            .chain(self.tail.rays().iter().map(|t| (t.coords().to_vec(), 0)))
            .map(|(mut c, h)| {
                c.push(h);
                c
            })
            .collect();
        let mut target: Vec<Rational> = x
            .coords()
            .iter()
            .map(|&c| Rational::from_integer(c.into()))
            .collect();
        target.push(Rational::one());
        let rank = RationalMatrix::from_integer_rows(&generators)
            .expect("rectangular")
            .rank();
        let mut chosen = Vec::with_capacity(rank);
        any_subset(generators.len(), rank, &mut chosen, &mut |subset| {
            let rows: Vec<Vec<i64>> = (0..=self.dim)
                .map(|c| subset.iter().map(|&k| generators[k][c]).collect())
                .collect();
            let a = RationalMatrix::from_integer_rows(&rows).expect("rectangular");
            matches!(a.solve(&target), Solution::Unique(l) if l.iter().all(|v| !v.is_negative()))
        })
    }

    /// Equality as point sets, ignoring redundant generators.
    pub fn same_set(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.same_tail(other)
            && self.points.iter().all(|p| other.contains(p))
            && other.points.iter().all(|p| self.contains(p))
    }

    /// The support function is finite on `|Σ|` and linear on every maximal cone.
    pub fn is_compatible(&self, fan: &Fan) -> Compatibility {
        if fan.dim() != self.dim {
            return Compatibility::Incompatible {
                witness: RaySet::empty(),
            };
        }
        for &s in fan.max_cones() {
            if self.vertex_v_sigma(&fan.cone(s)).is_err() {
                return Compatibility::Incompatible { witness: s };
            }
        }
        Compatibility::Compatible
    }

    /// The coarsest fan compatible with this full-dimensional polyhedron, computed by
    /// enumerating facet normals (dimension at most 3).
    pub fn normal_fan(&self) -> Result<Fan> {
        let d = self.dim;
        if d > 3 {
            return Err(Error::UnsupportedDimension(d));
        }
        let base = &self.points[0];
        let mut spanning: Vec<MVec> = self.points.iter().map(|p| p - base).collect();
        spanning.extend(self.tail.rays().iter().cloned());
        if rank_of(&spanning) != d {
            return Err(Error::NotFullDimensional);
        }

        // directions lying in facet hyperplanes
        let mut dirs: BTreeSet<MVec> = BTreeSet::new();
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                if let Some(w) = (q - p).primitive() {
                    dirs.insert(w);
                }
            }
        }
        dirs.extend(self.tail.rays().iter().cloned());
        let dirs: Vec<MVec> = dirs.into_iter().collect();

        let mut candidates: BTreeSet<NVec> = BTreeSet::new();
        let mut push = |n: NVec| {
            if let Some(p) = n.primitive() {
                candidates.insert(-&p);
                candidates.insert(p);
            }
        };
        match d {
            0 => {}
            1 => push(NVec::from([1])),
            2 => {
                for w in &dirs {
                    let c = w.coords();
                    push(NVec::from([-c[1], c[0]]));
                }
            }
            _ => {
                for (i, a) in dirs.iter().enumerate() {
                    for b in &dirs[i + 1..] {
                        let (a, b) = (a.coords(), b.coords());
                        push(NVec::from([
                            a[1] * b[2] - a[2] * b[1],
                            a[2] * b[0] - a[0] * b[2],
                            a[0] * b[1] - a[1] * b[0],
                        ]));
                    }
                }
            }
        }

        let mut normals: Vec<NVec> = Vec::new();
        for n in candidates {
            let Ok(min) = self.support_min(&n) else {
                continue;
            };
            let face_points: Vec<&MVec> =
                self.points.iter().filter(|p| p.pair(&n) == min).collect();
            let mut span: Vec<MVec> = face_points.iter().map(|p| *p - face_points[0]).collect();
            span.extend(self.tail.rays().iter().filter(|t| t.pair(&n) == 0).cloned());
            if rank_of(&span) + 1 == d {
                normals.push(n);
            }
        }
        normals.sort();

        let mins: Vec<i64> = normals
            .iter()
            .map(|n| {
                self.support_min(n)
                    .expect("normals lie in the dual of the tail")
            })
            .collect();
        let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
        for p in &self.points {
            let active: Vec<usize> = (0..normals.len())
                .filter(|&k| p.pair(&normals[k]) == mins[k])
                .collect();
            let rays: Vec<NVec> = active.iter().map(|&k| normals[k].clone()).collect();
            if rank_of(&rays) == d {
                cones.insert(active);
            }
        }
        Fan::new(d, normals, cones.into_iter().collect())
    }
}

/// Whether `test` holds for some `k`-subset of `0..n`, in lexicographic order.
fn any_subset(
    n: usize,
    k: usize,
    chosen: &mut Vec<usize>,
    test: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if chosen.len() == k {
        return test(chosen);
    }
    let from = chosen.last().map_or(0, |&i| i + 1);
    for i in from..=n - (k - chosen.len()) {
        chosen.push(i);
        let hit = any_subset(n, k, chosen, test);
        chosen.pop();
        if hit {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn pt(c: [i64; 2]) -> MVec {
        MVec::from(c)
    }

    #[test]
    fn support_minima() {
        let origin = LatticePolyhedron::polytope(vec![pt([0, 0])]).unwrap();
        assert_eq!(origin.support_min(&NVec::from([3, -2])).unwrap(), 0);
        let ab = catalog::f1_a().minkowski_sum(&catalog::f1_b()).unwrap();
        assert_eq!(ab.support_min(&NVec::from([0, -1])).unwrap(), -1);
        let minus_e = catalog::minus_e();
        assert_eq!(minus_e.support_min(&NVec::from([1, 1])).unwrap(), 1);
        assert!(matches!(
            minus_e.support_min(&NVec::from([-1, 0])),
            Err(Error::UnboundedBelow { .. })
        ));
    }

    #[test]
    fn vertices_of_a_plus_b() {
        let fan = catalog::hirzebruch1();
        let ab = catalog::f1_a().minkowski_sum(&catalog::f1_b()).unwrap();
        let c = |a, b| fan.cone(RaySet::from_indices([a, b]));
        // cone{(1,0),(0,1)}
        assert_eq!(ab.vertex_v_sigma(&c(0, 1)).unwrap(), pt([0, 0]));
        // cone{(1,0),(0,-1)}
        assert_eq!(ab.vertex_v_sigma(&c(1, 2)).unwrap(), pt([0, 1]));
        let origin = LatticePolyhedron::polytope(vec![pt([0, 0])]).unwrap();
        for &s in fan.max_cones() {
            assert_eq!(origin.vertex_v_sigma(&fan.cone(s)).unwrap(), pt([0, 0]));
        }
    }

    #[test]
    fn minkowski_sums() {
        let ab = catalog::f1_a().minkowski_sum(&catalog::f1_b()).unwrap();
        for p in [[0, 0], [1, 0], [0, 1], [1, 1], [2, 1]] {
            assert!(ab.points().contains(&pt(p)));
        }
        let fan = catalog::hirzebruch1();
        for r in fan.rays() {
            assert_eq!(
                ab.support_min(r).unwrap(),
                catalog::f1_a().support_min(r).unwrap() + catalog::f1_b().support_min(r).unwrap()
            );
        }
        let origin = LatticePolyhedron::polytope(vec![pt([0, 0])]).unwrap();
        assert_eq!(
            catalog::f1_a().minkowski_sum(&origin).unwrap(),
            catalog::f1_a()
        );
        let two_a = catalog::f1_a().minkowski_sum(&catalog::f1_a()).unwrap();
        assert_eq!(two_a.points(), &[pt([0, 0]), pt([1, 0]), pt([2, 0])]);
        assert!(two_a.same_set(&catalog::f1_a().dilate(2)));
        assert!(!two_a.same_set(&catalog::f1_a()));
        assert!(two_a.contains(&pt([1, 0])) && !two_a.contains(&pt([1, 1])));
        assert!(catalog::minus_e().contains(&pt([3, 7])));
        assert!(!catalog::minus_e().contains(&pt([0, 0])));
        assert_eq!(
            catalog::f1_a().minkowski_sum(&catalog::minus_e()),
            Err(Error::TailMismatch)
        );
    }

    #[test]
    fn compatibility_on_f1() {
        let fan = catalog::hirzebruch1();
        assert!(catalog::f1_a().is_compatible(&fan).is_compatible());
        assert!(catalog::f1_b().is_compatible(&fan).is_compatible());
        let vertical = LatticePolyhedron::polytope(vec![pt([0, 0]), pt([0, 1])]).unwrap();
        assert_eq!(
            vertical.is_compatible(&fan),
            Compatibility::Incompatible {
                witness: RaySet::from_indices([2, 3])
            }
        );
    }

    #[test]
    fn normal_fans() {
        let ab = catalog::f1_a().minkowski_sum(&catalog::f1_b()).unwrap();
        assert!(ab.normal_fan().unwrap().same_fan(&catalog::hirzebruch1()));
        let square =
            LatticePolyhedron::polytope(vec![pt([0, 0]), pt([1, 0]), pt([0, 1]), pt([1, 1])])
                .unwrap();
        assert!(square.normal_fan().unwrap().same_fan(&catalog::p1xp1()));
        let (blowup, tail) = catalog::blown_up_plane();
        let nf = catalog::minus_e().normal_fan().unwrap();
        assert!(nf.same_fan(&blowup));
        assert!(nf.validate(&tail).is_valid());
        assert_eq!(catalog::f1_a().normal_fan(), Err(Error::NotFullDimensional));
    }

    #[test]
    fn normal_fan_in_dimension_three() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(MVec::from([x, y, z]));
                }
            }
        }
        let cube = LatticePolyhedron::polytope(pts).unwrap();
        let nf = cube.normal_fan().unwrap();
        assert_eq!(nf.rays().len(), 6);
        assert_eq!(nf.max_cones().len(), 8);
        assert!(nf.validate(&Cone::origin(3)).is_valid());
        assert!(cube.is_compatible(&nf).is_compatible());

        // square pyramid: non-simplicial apex cone
        let pyramid = LatticePolyhedron::polytope(vec![
            MVec::from([0, 0, 0]),
            MVec::from([2, 0, 0]),
            MVec::from([0, 2, 0]),
            MVec::from([2, 2, 0]),
            MVec::from([1, 1, 1]),
        ])
        .unwrap();
        let nf = pyramid.normal_fan().unwrap();
        assert_eq!(nf.rays().len(), 5);
        assert_eq!(nf.max_cones().len(), 5);
        assert!(!nf.is_simplicial());
        assert!(nf.validate(&Cone::origin(3)).is_valid());
    }

    #[test]
    fn four_dimensional_normal_fan_unsupported() {
        let p = LatticePolyhedron::polytope(vec![MVec::zero(4)]).unwrap();
        assert_eq!(p.normal_fan(), Err(Error::UnsupportedDimension(4)));
    }
}
