//! Exact rational polytopes: facet/vertex enumeration, volumes by
//! recursive triangulation, Minkowski sums, and mixed volumes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg;
use crate::rat::{primitive_of_rational, Q};
use crate::Error;

/// A bounded rational polytope, stored as a spanning point set (extreme
/// points plus possibly redundant ones).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    pub dim: usize,
    pub points: Vec<Vec<Q>>,
}

/// A supporting facet `{ x : <normal, x> >= support }` with a primitive
/// integer normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub support: Q,
}

impl Polytope {
    pub fn new(dim: usize, points: Vec<Vec<Q>>) -> Result<Self, Error> {
        if points.is_empty() || points.iter().any(|p| p.len() != dim) {
            return Err(Error::ChartMismatch);
        }
        let mut points = points;
        points.sort();
        points.dedup();
        Ok(Polytope { dim, points })
    }

    pub fn from_integer_points(dim: usize, points: Vec<Vec<i64>>) -> Result<Self, Error> {
        Polytope::new(
            dim,
            points
                .into_iter()
                .map(|p| p.into_iter().map(crate::rat::q).collect())
                .collect(),
        )
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        linalg::affine_rank(&self.points)
    }

    pub fn facets(&self) -> Vec<Facet> {
        polytope_facets(self.dim, &self.points)
    }

    /// Extreme points: points not expressible inside the rest, detected as
    /// the points tight on a full-rank set of facets.
    pub fn vertices(&self) -> Vec<Vec<Q>> {
        if self.points.len() <= 1 {
            return self.points.clone();
        }
        let facets = self.facets();
        if facets.is_empty() {
            // lower-dimensional hull; fall back to all points
            return self.points.clone();
        }
        self.points
            .iter()
            .filter(|p| {
                let tight: Vec<Vec<Q>> = facets
                    .iter()
                    .filter(|f| {
                        linalg::dot_iq(&f.normal, p) == f.support
                    })
                    .map(|f| f.normal.iter().map(|x| Q::from_integer(x.clone())).collect())
                    .collect();
                linalg::rank(&tight) == self.dim
            })
            .cloned()
            .collect()
    }

    pub fn minkowski_sum(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut points = Vec::new();
        for a in &self.points {
            for b in &other.points {
                points.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Polytope::new(self.dim, points).expect("sum of nonempty polytopes")
    }

    /// Euclidean volume, exact.
    pub fn volume(&self) -> Q {
        if self.affine_dim() < self.dim {
            return Q::zero();
        }
        let mut total = Q::zero();
        let d = self.dim;
        let mut factorial = Q::one();
        for k in 1..=d {
            factorial *= Q::from_integer(BigInt::from(k));
        }
        for simplex in triangulate(d, &self.points) {
            let rows: Vec<Vec<Q>> = simplex[1..]
                .iter()
                .map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| a - b).collect())
                .collect();
            total += linalg::det(&rows).abs();
        }
        total / factorial
    }
}

/// Facets of `conv(points)` for a full-dimensional point set.
fn polytope_facets(dim: usize, points: &[Vec<Q>]) -> Vec<Facet> {
    let d = dim;
    let mut facets: Vec<Facet> = Vec::new();
    if d == 0 {
        return facets;
    }
    for s in subsets_of_size(points.len(), d) {
        let rows: Vec<Vec<Q>> = s[1..]
            .iter()
            .map(|&i| {
                points[i]
                    .iter()
                    .zip(&points[s[0]])
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        let kernel = linalg::kernel_basis(&rows, d);
        if kernel.len() != 1 {
            continue;
        }
        let base = primitive_of_rational(&kernel[0]);
        for normal in [base.clone(), base.iter().map(|x| -x).collect::<Vec<_>>()] {
            let values: Vec<Q> = points.iter().map(|p| linalg::dot_iq(&normal, p)).collect();
            let c = values.iter().min().unwrap().clone();
            if values[s[0]] != c {
                continue;
            }
            let tight: Vec<Vec<Q>> = points
                .iter()
                .enumerate()
                .filter(|(i, _)| values[*i] == c)
                .map(|(_, p)| p.clone())
                .collect();
            if d > 1 && linalg::affine_rank(&tight) != d - 1 {
                continue;
            }
            let f = Facet { normal: normal.clone(), support: c };
            if !facets.contains(&f) {
                facets.push(f);
            }
        }
    }
    facets.sort_by(|a, b| (&a.normal, &a.support).partial_cmp(&(&b.normal, &b.support)).unwrap());
    facets
}

/// Triangulates a full-dimensional point set by coning the lexicographically
/// least vertex over the facets avoiding it; facets are triangulated after a
/// bijective coordinate projection.
fn triangulate(d: usize, points: &[Vec<Q>]) -> Vec<Vec<Vec<Q>>> {
    if d == 1 {
        let lo = points.iter().min().unwrap().clone();
        let hi = points.iter().max().unwrap().clone();
        return vec![vec![lo, hi]];
    }
    let v0 = points.iter().min().unwrap().clone();
    let mut out = Vec::new();
    for f in polytope_facets(d, points) {
        if linalg::dot_iq(&f.normal, &v0) == f.support {
            continue;
        }
        let tight: Vec<Vec<Q>> = points
            .iter()
            .filter(|p| linalg::dot_iq(&f.normal, p) == f.support)
            .cloned()
            .collect();
        // drop a coordinate where the normal is nonzero: a bijection on the
        // facet hyperplane preserving triangulations
        let j = f.normal.iter().position(|x| !x.is_zero()).unwrap();
        let project = |p: &Vec<Q>| -> Vec<Q> {
            p.iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, x)| x.clone())
                .collect()
        };
        let projected: Vec<Vec<Q>> = tight.iter().map(project).collect();
        for simplex in triangulate(d - 1, &projected) {
            let lifted: Vec<Vec<Q>> = simplex
                .iter()
                .map(|sp| {
                    tight
                        .iter()
                        .find(|p| project(p) == *sp)
                        .expect("projection is a bijection on the facet")
                        .clone()
                })
                .collect();
            let mut cone = vec![v0.clone()];
            cone.extend(lifted);
            out.push(cone);
        }
    }
    out
}

/// Euclidean volume of `{ x : <n_i, x> >= s_i }` via the divergence theorem,
/// given a point set spanning the polytope.  Supplying the facet normals up
/// front avoids hull enumeration entirely: each facet is projected along a
/// nonvanishing normal coordinate and measured recursively with the induced
/// inequalities.
pub fn volume_from_hrep(dim: usize, rows: &[(Vec<Q>, Q)], points: &[Vec<Q>]) -> Q {
    if points.is_empty() || dim == 0 {
        return Q::zero();
    }
    if dim == 1 {
        let lo = points.iter().map(|p| &p[0]).min().unwrap();
        let hi = points.iter().map(|p| &p[0]).max().unwrap();
        return hi - lo;
    }
    if linalg::affine_rank(points) < dim {
        return Q::zero();
    }
    // dedup rows defining one and the same halfspace so no facet is counted
    // twice; parallel but slack copies are removed by the rank test below
    let mut seen: Vec<(Vec<BigInt>, Q)> = Vec::new();
    let mut total = Q::zero();
    for (normal, support) in rows {
        if normal.iter().all(|x| x.is_zero()) {
            continue;
        }
        let prim = primitive_of_rational(normal);
        let scale = normal
            .iter()
            .zip(&prim)
            .find(|(x, _)| !x.is_zero())
            .map(|(x, p)| x / Q::from_integer(p.clone()))
            .unwrap();
        let key = (prim, support / &scale);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let tight: Vec<Vec<Q>> = points
            .iter()
            .filter(|p| &linalg::dot(normal, p) == support)
            .cloned()
            .collect();
        if tight.len() < dim || linalg::affine_rank(&tight) != dim - 1 {
            continue;
        }
        let j = normal.iter().position(|x| !x.is_zero()).unwrap();
        let child_points: Vec<Vec<Q>> = tight
            .iter()
            .map(|p| drop_coord(p, j))
            .collect();
        let child_rows: Vec<(Vec<Q>, Q)> = rows
            .iter()
            .map(|(m, t)| {
                let f = &m[j] / &normal[j];
                let cn: Vec<Q> = (0..dim)
                    .filter(|l| *l != j)
                    .map(|l| &m[l] - &f * &normal[l])
                    .collect();
                (cn, t - &f * support)
            })
            .collect();
        let face = volume_from_hrep(dim - 1, &child_rows, &child_points);
        total += -support / normal[j].abs() * face;
    }
    total / Q::from_integer(BigInt::from(dim))
}

fn drop_coord(p: &[Q], j: usize) -> Vec<Q> {
    p.iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, x)| x.clone())
        .collect()
}

/// Vertices of `{ x : <a_i, x> >= b_i }`, assumed bounded.
pub fn vertices_from_hrep(dim: usize, rows: &[(Vec<Q>, Q)]) -> Vec<Vec<Q>> {
    let mut verts: Vec<Vec<Q>> = Vec::new();
    for s in subsets_of_size(rows.len(), dim) {
        let mat: Vec<Vec<Q>> = s.iter().map(|&i| rows[i].0.clone()).collect();
        let rhs: Vec<Q> = s.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = linalg::solve_square(&mat, &rhs) else {
            continue;
        };
        if rows.iter().all(|(a, b)| linalg::dot(a, &x) >= *b) && !verts.contains(&x) {
            verts.push(x);
        }
    }
    verts.sort();
    verts
}

/// Extreme rays of the pointed cone `{ x : <a_i, x> >= 0 }`, as primitive
/// integer vectors.
pub fn cone_rays(dim: usize, rows: &[Vec<Q>]) -> Vec<Vec<BigInt>> {
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    if dim == 1 {
        for cand in [vec![BigInt::one()], vec![-BigInt::one()]] {
            let v: Vec<Q> = cand.iter().map(|x| Q::from_integer(x.clone())).collect();
            if rows.iter().all(|a| !linalg::dot(a, &v).is_negative()) {
                rays.push(cand);
            }
        }
        return rays;
    }
    for s in subsets_of_size(rows.len(), dim - 1) {
        let mat: Vec<Vec<Q>> = s.iter().map(|&i| rows[i].clone()).collect();
        let kernel = linalg::kernel_basis(&mat, dim);
        if kernel.len() != 1 {
            continue;
        }
        let base = primitive_of_rational(&kernel[0]);
        for cand in [base.clone(), base.iter().map(|x| -x).collect::<Vec<_>>()] {
            let v: Vec<Q> = cand.iter().map(|x| Q::from_integer(x.clone())).collect();
            if rows.iter().any(|a| linalg::dot(a, &v).is_negative()) {
                continue;
            }
            // extremality: the tight inequalities must cut a 1-dimensional face
            let tight: Vec<Vec<Q>> = rows
                .iter()
                .filter(|a| linalg::dot(a, &v).is_zero())
                .cloned()
                .collect();
            if linalg::rank(&tight) != dim - 1 {
                continue;
            }
            if !rays.contains(&cand) {
                rays.push(cand);
            }
        }
    }
    rays.sort();
    rays
}

/// Mixed volume of `dim` polytopes, normalized so that
/// `mixed_volume(P, ..., P) = dim! vol(P)`; on lattice polytopes this is the
/// Bernstein count.
pub fn mixed_volume(polytopes: &[Polytope]) -> Result<Q, Error> {
    if polytopes.is_empty() {
        return Err(Error::Invalid("mixed volume of an empty list".into()));
    }
    let d = polytopes[0].dim;
    if polytopes.len() != d || polytopes.iter().any(|p| p.dim != d) {
        return Err(Error::ChartMismatch);
    }
    let mut total = Q::zero();
    for mask in 1u32..(1 << d) {
        let mut sum: Option<Polytope> = None;
        let mut size = 0usize;
        for (i, p) in polytopes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                size += 1;
                sum = Some(match sum {
                    None => p.clone(),
                    Some(acc) => acc.minkowski_sum(p),
                });
            }
        }
        let vol = sum.unwrap().volume();
        if (d - size) % 2 == 0 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    Ok(total)
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
    use crate::rat::{frac, q};

    fn simplex(d: usize) -> Polytope {
        let mut pts = vec![vec![0i64; d]];
        for i in 0..d {
            let mut e = vec![0i64; d];
            e[i] = 1;
            pts.push(e);
        }
        Polytope::from_integer_points(d, pts).unwrap()
    }

    fn cube(d: usize) -> Polytope {
        let mut pts = Vec::new();
        for mask in 0u32..(1 << d) {
            pts.push((0..d).map(|i| ((mask >> i) & 1) as i64).collect());
        }
        Polytope::from_integer_points(d, pts).unwrap()
    }

    #[test]
    fn volumes() {
        assert_eq!(cube(2).volume(), q(1));
        assert_eq!(cube(3).volume(), q(1));
        assert_eq!(simplex(2).volume(), frac(1, 2));
        assert_eq!(simplex(3).volume(), frac(1, 6));
        // degenerate: a segment in the plane
        let seg =
            Polytope::from_integer_points(2, vec![vec![0, 0], vec![2, 2]]).unwrap();
        assert_eq!(seg.volume(), q(0));
        // interior points do not change the hull
        let mut pts = vec![vec![q(0), q(0)], vec![q(2), q(0)], vec![q(0), q(2)]];
        pts.push(vec![frac(1, 2), frac(1, 2)]);
        let p = Polytope::new(2, pts).unwrap();
        assert_eq!(p.volume(), q(2));
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn hrep_vertices_and_rays() {
        // unit square from inequalities
        let rows = vec![
            (vec![q(1), q(0)], q(0)),
            (vec![q(0), q(1)], q(0)),
            (vec![q(-1), q(0)], q(-1)),
            (vec![q(0), q(-1)], q(-1)),
        ];
        let v = vertices_from_hrep(2, &rows);
        assert_eq!(v.len(), 4);
        assert!(v.contains(&vec![q(1), q(1)]));
        // positive quadrant rays
        let rays = cone_rays(2, &[vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert_eq!(rays.len(), 2);
        // cone over the square: 4 extreme rays, none spurious
        let rays = cone_rays(
            3,
            &[
                vec![q(1), q(0), q(0)],
                vec![q(0), q(1), q(0)],
                vec![q(-1), q(0), q(1)],
                vec![q(0), q(-1), q(1)],
            ],
        );
        assert_eq!(rays.len(), 4);
    }

    #[test]
    fn mixed_volumes() {
        let d2 = vec![simplex(2), simplex(2)];
        assert_eq!(mixed_volume(&d2).unwrap(), q(1));
        let d3 = vec![simplex(3), simplex(3), simplex(3)];
        assert_eq!(mixed_volume(&d3).unwrap(), q(1));
        // square and segment: mixed area 1 each way
        let seg_x =
            Polytope::from_integer_points(2, vec![vec![0, 0], vec![1, 0]]).unwrap();
        let seg_y =
            Polytope::from_integer_points(2, vec![vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(mixed_volume(&[seg_x.clone(), seg_y.clone()]).unwrap(), q(1));
        assert_eq!(mixed_volume(&[seg_x.clone(), seg_x.clone()]).unwrap(), q(0));
        assert_eq!(mixed_volume(&[cube(2), cube(2)]).unwrap(), q(2));
        // symmetry and multilinearity on a random-ish pair
        let p = Polytope::from_integer_points(2, vec![vec![0, 0], vec![2, 1], vec![1, 3]])
            .unwrap();
        let a = mixed_volume(&[p.clone(), cube(2)]).unwrap();
        let b = mixed_volume(&[cube(2), p.clone()]).unwrap();
        assert_eq!(a, b);
        let pp = p.minkowski_sum(&cube(2));
        let lhs = mixed_volume(&[pp.clone(), seg_x.clone()]).unwrap();
        let rhs = mixed_volume(&[p.clone(), seg_x.clone()]).unwrap()
            + mixed_volume(&[cube(2), seg_x]).unwrap();
        assert_eq!(lhs, rhs);
    }
}
