//! Rational polyhedral fans supporting toric test configurations on
//! `P^n x P^1`: the ambient fan, normal-fan subdivisions of the positive
//! orthant, pulling triangulations, walls, and refinement checks.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::geom::cone_rays;
use crate::linalg;
use crate::rat::{q, Q};
use crate::Error;

/// A complete simplicial fan: primitive rays and maximal cones given by
/// sorted ray-index sets of full dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<Vec<BigInt>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn ray_index(&self, ray: &[BigInt]) -> Option<usize> {
        self.rays.iter().position(|r| r == ray)
    }

    fn ray_q(&self, i: usize) -> Vec<Q> {
        self.rays[i].iter().map(|x| Q::from_integer(x.clone())).collect()
    }

    /// Barycentric coordinates of `point` on the simplicial cone `cone`,
    /// when the point lies in it.
    pub fn cone_coordinates(&self, cone: &[usize], point: &[Q]) -> Option<Vec<Q>> {
        let d = self.dim;
        debug_assert_eq!(cone.len(), d);
        // columns are the cone's rays
        let mat: Vec<Vec<Q>> = (0..d)
            .map(|r| cone.iter().map(|&i| Q::from_integer(self.rays[i][r].clone())).collect())
            .collect();
        let c = linalg::solve_square(&mat, point)?;
        if c.iter().all(|x| !x.is_negative()) {
            Some(c)
        } else {
            None
        }
    }

    /// The maximal cone containing `point`, with its coordinates.
    pub fn locate(&self, point: &[Q]) -> Option<(usize, Vec<Q>)> {
        for (i, cone) in self.max_cones.iter().enumerate() {
            if let Some(c) = self.cone_coordinates(cone, point) {
                return Some((i, c));
            }
        }
        None
    }

    /// All faces of the given dimension, as sorted ray-index sets. For a
    /// simplicial fan these are the size-`k` subsets of maximal cones.
    pub fn faces(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for cone in &self.max_cones {
            for s in subsets_of_size(cone.len(), k) {
                let face: Vec<usize> = s.iter().map(|&i| cone[i]).collect();
                if !out.contains(&face) {
                    out.push(face);
                }
            }
        }
        out.sort();
        out
    }

    /// Walls: codimension-one faces, with the two maximal cones they bound.
    pub fn walls(&self) -> Vec<(Vec<usize>, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                let common: Vec<usize> = self.max_cones[i]
                    .iter()
                    .filter(|r| self.max_cones[j].contains(r))
                    .copied()
                    .collect();
                if common.len() == self.dim - 1 {
                    let rows: Vec<Vec<Q>> = common.iter().map(|&r| self.ray_q(r)).collect();
                    if linalg::rank(&rows) == self.dim - 1 {
                        out.push((common, i, j));
                    }
                }
            }
        }
        out
    }

    /// Every maximal cone of `self` sits inside a maximal cone of `coarse`.
    pub fn refines(&self, coarse: &Fan) -> bool {
        self.max_cones.iter().all(|cone| {
            coarse.max_cones.iter().any(|big| {
                cone.iter().all(|&r| {
                    let p = self.ray_q(r);
                    coarse.cone_coordinates(big, &p).is_some()
                })
            })
        })
    }

    /// Stellar subdivision at a new ray lying in the fan's support.
    pub fn stellar_subdivide(&self, new_ray: Vec<BigInt>) -> Result<Fan, Error> {
        let p: Vec<Q> = new_ray.iter().map(|x| Q::from_integer(x.clone())).collect();
        let mut fan = self.clone();
        if fan.ray_index(&new_ray).is_some() {
            return Ok(fan);
        }
        fan.rays.push(new_ray);
        let new_idx = fan.rays.len() - 1;
        let mut cones = Vec::new();
        let mut hit = false;
        for cone in &self.max_cones {
            match self.cone_coordinates(cone, &p) {
                Some(c) => {
                    hit = true;
                    for (k, ck) in c.iter().enumerate() {
                        if ck.is_zero() {
                            continue;
                        }
                        let mut replaced: Vec<usize> = cone
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != k)
                            .map(|(_, &r)| r)
                            .collect();
                        replaced.push(new_idx);
                        replaced.sort();
                        cones.push(replaced);
                    }
                }
                None => cones.push(cone.clone()),
            }
        }
        if !hit {
            return Err(Error::Invalid("ray outside the fan support".into()));
        }
        cones.sort();
        cones.dedup();
        fan.max_cones = cones;
        Ok(fan)
    }
}

/// The fan of `P^n x P^1` in `Z^{n+1}`: the last coordinate is the `P^1`
/// factor. Rays: `e_1..e_n`, `-(e_1+..+e_n)`, `e_{n+1}`, `-e_{n+1}`.
pub fn ambient_fan(n: usize) -> Fan {
    let d = n + 1;
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); d];
        e[i] = BigInt::one();
        rays.push(e);
    }
    let mut neg = vec![-BigInt::one(); d];
    neg[n] = BigInt::zero();
    rays.push(neg); // index n
    let mut up = vec![BigInt::zero(); d];
    up[n] = BigInt::one();
    rays.push(up); // index n+1
    let mut down = vec![BigInt::zero(); d];
    down[n] = -BigInt::one();
    rays.push(down); // index n+2
    let mut max_cones = Vec::new();
    // P^n max cones: drop one of the n+1 horizontal rays
    for drop in 0..=n {
        let horiz: Vec<usize> = (0..=n).filter(|&i| i != drop).collect();
        for vert in [n + 1, n + 2] {
            let mut cone = horiz.clone();
            cone.push(vert);
            cone.sort();
            max_cones.push(cone);
        }
    }
    max_cones.sort();
    Fan { dim: d, rays, max_cones }
}

/// Maximal cones of the normal fan of `conv(points) + R^d_{>=0}`
/// intersected with the positive orthant: one cone per vertex of the
/// polyhedron, returned as primitive ray lists.
pub fn orthant_subdivision(d: usize, points: &[Vec<i64>]) -> Vec<Vec<Vec<BigInt>>> {
    let facets = crate::valuation::facets_of_exponents(d, points);
    let vertices: Vec<&Vec<i64>> = points
        .iter()
        .filter(|p| {
            let tight: Vec<Vec<Q>> = facets
                .iter()
                .filter(|f| {
                    f.normal
                        .iter()
                        .zip(p.iter())
                        .map(|(n, &x)| n * BigInt::from(x))
                        .sum::<BigInt>()
                        == f.support
                })
                .map(|f| f.normal.iter().map(|x| Q::from_integer(x.clone())).collect())
                .collect();
            linalg::rank(&tight) == d
        })
        .collect();
    let mut cones = Vec::new();
    for v in vertices {
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for i in 0..d {
            let mut e = vec![Q::zero(); d];
            e[i] = Q::one();
            rows.push(e);
        }
        for p in points {
            if p != v {
                rows.push(p.iter().zip(v.iter()).map(|(&a, &b)| q(a - b)).collect());
            }
        }
        let rays = cone_rays(d, &rows);
        if !rays.is_empty() && linalg::rank(&rays.iter().map(|r| linalg::to_q_vec(r)).collect::<Vec<_>>()) == d {
            cones.push(rays);
        }
    }
    cones
}

/// Subsets of the rays of a (possibly non-simplicial) pointed cone that
/// form its facets.
fn cone_facet_subsets(rays: &[Vec<Q>]) -> Vec<Vec<usize>> {
    let k = linalg::rank(rays);
    let d = rays[0].len();
    debug_assert!(k >= 1);
    if k == 1 {
        return vec![vec![]];
    }
    // coordinates inside the span, over a greedy independent basis
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for r in rays {
        let mut test = basis.clone();
        test.push(r.clone());
        if linalg::rank(&test) > basis.len() {
            basis.push(r.clone());
        }
    }
    let coords: Vec<Vec<Q>> = rays
        .iter()
        .map(|r| {
            // solve basis^T c = r
            let mat: Vec<Vec<Q>> = (0..d).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
            linalg::solve_any(&mat, r).expect("ray lies in the span")
        })
        .collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in subsets_of_size(rays.len(), k - 1) {
        let rows: Vec<Vec<Q>> = s.iter().map(|&i| coords[i].clone()).collect();
        let kernel = linalg::kernel_basis(&rows, k);
        if kernel.len() != 1 {
            continue;
        }
        for sign in [Q::one(), -Q::one()] {
            let normal: Vec<Q> = kernel[0].iter().map(|x| x * &sign).collect();
            let values: Vec<Q> = coords.iter().map(|c| linalg::dot(&normal, c)).collect();
            if values.iter().any(|v| v.is_negative()) {
                continue;
            }
            let tight: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_zero()).collect();
            let tight_rows: Vec<Vec<Q>> = tight.iter().map(|&i| coords[i].clone()).collect();
            if linalg::rank(&tight_rows) == k - 1 && !out.contains(&tight) {
                out.push(tight);
            }
        }
    }
    out
}

/// Triangulates a pointed cone by pulling its first ray: no new rays are
/// introduced, and cones already simplicial are kept.
pub fn triangulate_cone(rays: &[Vec<Q>]) -> Vec<Vec<usize>> {
    fn rec(idx: &[usize], rays: &[Vec<Q>]) -> Vec<Vec<usize>> {
        let sub: Vec<Vec<Q>> = idx.iter().map(|&i| rays[i].clone()).collect();
        let k = linalg::rank(&sub);
        if idx.len() == k {
            return vec![idx.to_vec()];
        }
        let pulled = *idx.iter().min().unwrap();
        let mut out = Vec::new();
        for facet in cone_facet_subsets(&sub) {
            let mut facet_idx: Vec<usize> = facet.iter().map(|&i| idx[i]).collect();
            facet_idx.sort();
            if facet_idx.contains(&pulled) {
                continue;
            }
            for mut simplex in rec(&facet_idx, rays) {
                simplex.push(pulled);
                simplex.sort();
                out.push(simplex);
            }
        }
        out
    }
    let idx: Vec<usize> = (0..rays.len()).collect();
    let mut cones = rec(&idx, rays);
    cones.sort();
    cones.dedup();
    cones
}

/// The fan of a toric model dominating `P^n x P^1`: the ambient fan with
/// the positive orthant replaced by the given subdivision cones (each a
/// primitive ray list covering the orthant), triangulated by pulling.
pub fn model_fan(n: usize, subdivision: &[Vec<Vec<BigInt>>]) -> Fan {
    let mut fan = ambient_fan(n);
    let orthant: Vec<usize> = (0..n).chain([n + 1]).collect();
    fan.max_cones.retain(|c| *c != orthant);
    for cone_rays in subdivision {
        let mut idx = Vec::new();
        for r in cone_rays {
            let i = match fan.ray_index(r) {
                Some(i) => i,
                None => {
                    fan.rays.push(r.clone());
                    fan.rays.len() - 1
                }
            };
            idx.push(i);
        }
        // a globally consistent pulling order keeps adjacent pieces
        // face-to-face
        idx.sort();
        let rays_q: Vec<Vec<Q>> = idx.iter().map(|&i| linalg::to_q_vec(&fan.rays[i])).collect();
        for simplex in triangulate_cone(&rays_q) {
            let mut cone: Vec<usize> = simplex.iter().map(|&i| idx[i]).collect();
            cone.sort();
            if !fan.max_cones.contains(&cone) {
                fan.max_cones.push(cone);
            }
        }
    }
    // A subdivision ray on the boundary of the orthant breaks the
    // face-to-face property with the untouched ambient cones: split every
    // cone that contains some other ray of the fan in its interior or in
    // the interior of one of its faces.
    loop {
        let mut split: Option<(usize, usize, Vec<usize>)> = None;
        'scan: for ri in 0..fan.rays.len() {
            let p = linalg::to_q_vec(&fan.rays[ri]);
            for (ci, cone) in fan.max_cones.iter().enumerate() {
                if cone.contains(&ri) {
                    continue;
                }
                if let Some(c) = fan.cone_coordinates(cone, &p) {
                    let nz: Vec<usize> = c
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(k, _)| k)
                        .collect();
                    if nz.len() >= 2 {
                        split = Some((ri, ci, nz));
                        break 'scan;
                    }
                }
            }
        }
        match split {
            Some((ri, ci, nz)) => {
                let cone = fan.max_cones.remove(ci);
                for k in nz {
                    let mut nc: Vec<usize> = cone
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != k)
                        .map(|(_, &r)| r)
                        .collect();
                    nc.push(ri);
                    nc.sort();
                    if !fan.max_cones.contains(&nc) {
                        fan.max_cones.push(nc);
                    }
                }
            }
            None => break,
        }
    }
    fan.max_cones.sort();
    fan
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;

    fn bz(v: Vec<i64>) -> Vec<BigInt> {
        v.into_iter().map(BigInt::from).collect()
    }

    #[test]
    fn ambient_structure() {
        let f = ambient_fan(1);
        assert_eq!(f.rays.len(), 4);
        assert_eq!(f.max_cones.len(), 4);
        let f2 = ambient_fan(2);
        assert_eq!(f2.rays.len(), 5);
        assert_eq!(f2.max_cones.len(), 6);
        // completeness spot check: random-ish points all land in a cone
        for p in [vec![q(3), q(-2), q(5)], vec![q(-1), q(-1), q(-1)], vec![q(0), q(7), q(0)]] {
            assert!(f2.locate(&p).is_some());
        }
        assert_eq!(f2.walls().len(), 9);
    }

    #[test]
    fn orthant_subdivision_p1() {
        // exponents of (z) + (1)t on P^1: vertices (1,0) and (0,1)
        let cones = orthant_subdivision(2, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(cones.len(), 2);
        let fan = model_fan(1, &cones);
        assert_eq!(fan.max_cones.len(), 5);
        assert!(fan.ray_index(&bz(vec![1, 1])).is_some());
        assert!(fan.refines(&ambient_fan(1)));
        assert!(!ambient_fan(1).refines(&fan));
    }

    #[test]
    fn pulling_triangulation() {
        // cone over a square splits in two without new rays
        let rays = vec![
            vec![q(1), q(0), q(1)],
            vec![q(0), q(1), q(1)],
            vec![q(1), q(1), q(1)],
            vec![q(0), q(0), q(1)],
        ];
        let tri = triangulate_cone(&rays);
        assert_eq!(tri.len(), 2);
        for c in &tri {
            assert_eq!(c.len(), 3);
        }
        // a simplicial cone is untouched
        let simp = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        assert_eq!(triangulate_cone(&simp), vec![vec![0, 1]]);
    }

    #[test]
    fn stellar_and_refinement() {
        let f = ambient_fan(2);
        let g = f.stellar_subdivide(bz(vec![1, 1, 1])).unwrap();
        assert!(g.refines(&f));
        assert_eq!(g.max_cones.len(), f.max_cones.len() + 2);
        assert!(g
            .locate(&[frac(1, 2), frac(1, 3), frac(1, 5)])
            .is_some());
        assert!(f.stellar_subdivide(bz(vec![1, 1, 1])).unwrap().rays.len() == 6);
    }
}
