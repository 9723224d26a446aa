//! Standard small toric varieties and their nef polytopes.

use crate::cone::Cone;
use crate::fan::Fan;
use crate::lattice::{MVec, NVec, M};
use crate::polyhedron::LatticePolyhedron;

fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    Fan::new(
        dim,
        rays.iter().map(|r| NVec::new(r.to_vec())).collect(),
        cones.iter().map(|c| c.to_vec()).collect(),
    )
    .expect("catalog fans are well formed")
}

fn polytope(points: &[&[i64]]) -> LatticePolyhedron {
    LatticePolyhedron::polytope(points.iter().map(|p| MVec::new(p.to_vec())).collect())
        .expect("catalog polytopes are well formed")
}

/// Rays `1, -1`.
pub fn projective_line() -> Fan {
    fan(1, &[&[1], &[-1]], &[&[0], &[1]])
}

/// Rays `(1,0), (0,1), (-1,-1)`.
pub fn projective_plane() -> Fan {
    fan(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1]],
        &[&[0, 1], &[1, 2], &[2, 0]],
    )
}

/// Rays `(1,0), (0,1), (-1,0), (0,-1)`.
pub fn p1xp1() -> Fan {
    fan(
        2,
        &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
}

/// The first Hirzebruch surface, rays `(0,1), (1,0), (0,-1), (-1,1)`.
pub fn hirzebruch1() -> Fan {
    fan(
        2,
        &[&[0, 1], &[1, 0], &[0, -1], &[-1, 1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
}

/// The blow-up of the affine plane in the origin, rays `(1,0), (1,1), (0,1)`, together with
/// the tail cone (first quadrant of `M`) whose dual is its support.
pub fn blown_up_plane() -> (Fan, Cone<M>) {
    let f = fan(2, &[&[1, 0], &[1, 1], &[0, 1]], &[&[0, 1], &[1, 2]]);
    (f, first_quadrant())
}

pub fn first_quadrant() -> Cone<M> {
    Cone::new(2, vec![MVec::from([1, 0]), MVec::from([0, 1])]).expect("well formed")
}

/// `A = conv{(0,0), (1,0)}` on the first Hirzebruch surface.
pub fn f1_a() -> LatticePolyhedron {
    polytope(&[&[0, 0], &[1, 0]])
}

/// `B = conv{(0,0), (0,1), (1,1)}` on the first Hirzebruch surface.
pub fn f1_b() -> LatticePolyhedron {
    polytope(&[&[0, 0], &[0, 1], &[1, 1]])
}

/// The polyhedron of `-E` on the blown-up plane: `conv{(0,1), (1,0)} + quadrant`.
pub fn minus_e() -> LatticePolyhedron {
    LatticePolyhedron::with_tail(
        vec![MVec::from([0, 1]), MVec::from([1, 0])],
        first_quadrant(),
    )
    .expect("well formed")
}

/// The unit simplex, ample generator on the projective plane.
pub fn plane_simplex() -> LatticePolyhedron {
    polytope(&[&[0, 0], &[1, 0], &[0, 1]])
}

/// A named smooth complete toric variety with generators of its nef cone and an ample
/// polytope whose normal fan is the fan itself.
#[derive(Clone, Debug)]
pub struct NefModel {
    pub name: &'static str,
    pub fan: Fan,
    pub generators: Vec<LatticePolyhedron>,
    pub ample: LatticePolyhedron,
}

pub fn nef_models() -> Vec<NefModel> {
    let p1_gen = polytope(&[&[0], &[1]]);
    let e1 = polytope(&[&[0, 0], &[1, 0]]);
    let e2 = polytope(&[&[0, 0], &[0, 1]]);
    let square = e1.minkowski_sum(&e2).expect("same tail");
    let ab = f1_a().minkowski_sum(&f1_b()).expect("same tail");
    vec![
        NefModel {
            name: "P1",
            fan: projective_line(),
            generators: vec![p1_gen.clone()],
            ample: p1_gen,
        },
        NefModel {
            name: "P2",
            fan: projective_plane(),
            generators: vec![plane_simplex()],
            ample: plane_simplex(),
        },
        NefModel {
            name: "P1xP1",
            fan: p1xp1(),
            generators: vec![e1, e2],
            ample: square,
        },
        NefModel {
            name: "F1",
            fan: hirzebruch1(),
            generators: vec![f1_a(), f1_b()],
            ample: ab,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_compatible_and_ample_polytopes_span_their_fans() {
        for model in nef_models() {
            assert!(model
                .fan
                .validate(&Cone::origin(model.fan.dim()))
                .is_valid());
            for g in &model.generators {
                assert!(
                    g.is_compatible(&model.fan).is_compatible(),
                    "{}",
                    model.name
                );
            }
            assert!(
                model.ample.normal_fan().unwrap().same_fan(&model.fan),
                "{}",
                model.name
            );
        }
    }
}
