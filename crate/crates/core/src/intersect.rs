//! Exact intersection numbers on complete simplicial toric models, with
//! two independent engines: a tropical Minkowski-weight recursion and a
//! nef-decomposition into mixed volumes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::fan::Fan;
use crate::flag::PLFunction;
use crate::geom::{mixed_volume, Polytope};
use crate::linalg;
use crate::rat::Q;
use crate::testconfig::{pl_to_divisor, ToricTestConfig, VerticalDivisor};
use crate::Error;

/// A class in the rational Picard group of a toric model, recorded by the
/// values `h(u_rho)` of its support function on the fan's rays (min
/// convention: nef classes are the concave ones).
#[derive(Clone, Debug, PartialEq)]
pub struct ToricClass {
    pub values: Vec<Q>,
}

impl ToricClass {
    pub fn zero(fan: &Fan) -> Self {
        ToricClass {
            values: vec![Q::zero(); fan.rays.len()],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        ToricClass {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, t: &Q) -> Self {
        ToricClass {
            values: self.values.iter().map(|x| x * t).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }
}

/// Pullback of `a` hyperplanes from the `P^n` factor:
/// `h(u) = a min(0, u_1, .., u_n)`.
pub fn hyperplane_class(fan: &Fan, a: &Q) -> ToricClass {
    let n = fan.dim - 1;
    ToricClass {
        values: fan
            .rays
            .iter()
            .map(|r| {
                let m = r[..n]
                    .iter()
                    .min()
                    .cloned()
                    .unwrap_or_else(BigInt::zero)
                    .min(BigInt::zero());
                a * Q::from_integer(m)
            })
            .collect(),
    }
}

/// Pullback of a point from the `P^1` factor: `h(u) = -max(0, u_t)`; its
/// divisor is the central fiber with multiplicities.
pub fn fiber_class(fan: &Fan) -> ToricClass {
    ToricClass {
        values: fan
            .rays
            .iter()
            .map(|r| {
                let t = r.last().unwrap().clone().max(BigInt::zero());
                -Q::from_integer(t)
            })
            .collect(),
    }
}

/// The class of `coeff * D_rho` for a single ray.
pub fn ray_divisor_class(fan: &Fan, ray: usize, coeff: &Q) -> ToricClass {
    let mut c = ToricClass::zero(fan);
    c.values[ray] = -coeff.clone();
    c
}

/// The class of a vertical divisor on a test configuration.
pub fn divisor_class(tc: &ToricTestConfig, div: &VerticalDivisor) -> ToricClass {
    let mut c = ToricClass::zero(&tc.fan);
    for (v, coeff) in tc.vertical.iter().zip(&div.coeffs) {
        c.values[v.ray] = -coeff.clone();
    }
    c
}

/// The divisor class of a PL function on a model where it is linear.
pub fn pl_class(tc: &ToricTestConfig, f: &PLFunction) -> Result<ToricClass, Error> {
    Ok(divisor_class(tc, &pl_to_divisor(tc, f)?))
}

/// Two classes are equal in the Picard group when their difference is the
/// restriction of a single linear function.
pub fn classes_equal(fan: &Fan, a: &ToricClass, b: &ToricClass) -> bool {
    let mat: Vec<Vec<Q>> = fan.rays.iter().map(|r| linalg::to_q_vec(r)).collect();
    let rhs: Vec<Q> = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x - y)
        .collect();
    linalg::solve_any(&mat, &rhs).is_some()
}

struct Wall {
    sigma1: Vec<usize>,
    coeffs: Vec<Q>,
    opposite: usize,
    has_vertical: bool,
}

fn wall_data(fan: &Fan) -> Result<Vec<Wall>, Error> {
    let d = fan.dim;
    fan.walls()
        .into_iter()
        .map(|(common, i, j)| {
            let c1 = fan.max_cones[i].clone();
            let opposite = *fan.max_cones[j]
                .iter()
                .find(|r| !common.contains(r))
                .unwrap();
            let mat: Vec<Vec<Q>> = (0..d)
                .map(|row| {
                    c1.iter()
                        .map(|&r| Q::from_integer(fan.rays[r][row].clone()))
                        .collect()
                })
                .collect();
            let rhs = linalg::to_q_vec(&fan.rays[opposite]);
            let coeffs = linalg::solve_square(&mat, &rhs)
                .ok_or_else(|| Error::Invalid("degenerate wall".into()))?;
            let has_vertical = common
                .iter()
                .any(|&r| !fan.rays[r].last().unwrap().is_zero());
            Ok(Wall {
                sigma1: c1,
                coeffs,
                opposite,
                has_vertical,
            })
        })
        .collect()
}

fn bend(c: &ToricClass, w: &Wall) -> Q {
    let ext: Q = w
        .sigma1
        .iter()
        .zip(&w.coeffs)
        .map(|(&r, co)| co * &c.values[r])
        .sum();
    ext - &c.values[w.opposite]
}

/// Nef: the support function is concave across every wall.
pub fn is_nef(fan: &Fan, c: &ToricClass) -> Result<bool, Error> {
    Ok(wall_data(fan)?.iter().all(|w| !bend(c, w).is_negative()))
}

/// Relatively nef over `P^1`: concave across the walls whose curves sit
/// inside a fiber (those containing a ray with nonzero last coordinate).
pub fn is_relatively_nef(fan: &Fan, c: &ToricClass) -> Result<bool, Error> {
    Ok(wall_data(fan)?
        .iter()
        .filter(|w| w.has_vertical)
        .all(|w| !bend(c, w).is_negative()))
}

/// A strictly concave support function on the fan, found by exact linear
/// programming: an ample class of the model.
pub fn ample_class(fan: &Fan) -> Result<ToricClass, Error> {
    let walls = wall_data(fan)?;
    if walls.is_empty() {
        return Ok(ToricClass::zero(fan));
    }
    let cons: Vec<Vec<Q>> = walls
        .iter()
        .map(|w| {
            let mut row = vec![Q::zero(); fan.rays.len()];
            for (&r, co) in w.sigma1.iter().zip(&w.coeffs) {
                row[r] += co;
            }
            row[w.opposite] -= Q::one();
            row
        })
        .collect();
    let rhs = vec![Q::one(); walls.len()];
    let values = linalg::feasible_point(&cons, &rhs)
        .ok_or_else(|| Error::Invalid("fan admits no strictly concave support function".into()))?;
    Ok(ToricClass { values })
}

/// Engine selection for intersection numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Tropical,
    MixedVolume,
    /// run both engines and fail loudly when they disagree
    CrossCheck,
}

/// The intersection number of `dim` classes on the model.
pub fn intersection_number(
    fan: &Fan,
    classes: &[ToricClass],
    engine: Engine,
) -> Result<Q, Error> {
    if classes.len() != fan.dim || classes.iter().any(|c| c.values.len() != fan.rays.len()) {
        return Err(Error::ChartMismatch);
    }
    match engine {
        Engine::Tropical => tropical_intersection(fan, classes),
        Engine::MixedVolume => mv_intersection(fan, classes),
        Engine::CrossCheck => {
            let a = tropical_intersection(fan, classes)?;
            let b = mv_intersection(fan, classes)?;
            if a == b {
                Ok(a)
            } else {
                Err(Error::CrossCheck(format!(
                    "tropical engine gives {a}, mixed-volume engine gives {b}"
                )))
            }
        }
    }
}

/// Minkowski-weight recursion: start from weight one on maximal cones and
/// cut down by each class in turn, landing on the weight of the origin.
fn tropical_intersection(fan: &Fan, classes: &[ToricClass]) -> Result<Q, Error> {
    let d = fan.dim;
    let mut weights: HashMap<Vec<usize>, Q> = fan
        .max_cones
        .iter()
        .map(|c| (c.clone(), Q::one()))
        .collect();
    for (step, class) in classes.iter().enumerate() {
        // phi = -h makes the final weight the intersection number
        let phi: Vec<Q> = class.values.iter().map(|x| -x.clone()).collect();
        let k = d - step;
        let mut phi_sum: HashMap<Vec<usize>, Q> = HashMap::new();
        let mut vec_sum: HashMap<Vec<usize>, Vec<Q>> = HashMap::new();
        for (sigma, omega) in &weights {
            if omega.is_zero() {
                continue;
            }
            let sigma_rays: Vec<Vec<BigInt>> =
                sigma.iter().map(|&r| fan.rays[r].clone()).collect();
            for drop in 0..k {
                let tau: Vec<usize> = sigma
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, &r)| r)
                    .collect();
                let tau_rays: Vec<Vec<BigInt>> =
                    tau.iter().map(|&r| fan.rays[r].clone()).collect();
                let (rep, _) =
                    linalg::primitive_quotient_rep(&tau_rays, &sigma_rays[drop], d);
                let rep_q = linalg::to_q_vec(&rep);
                // value of sigma's linear piece at the representative
                let mat: Vec<Vec<Q>> = (0..d)
                    .map(|row| {
                        sigma
                            .iter()
                            .map(|&r| Q::from_integer(fan.rays[r][row].clone()))
                            .collect()
                    })
                    .collect();
                let coords = linalg::solve_any(&mat, &rep_q)
                    .ok_or_else(|| Error::Invalid("representative outside the cone span".into()))?;
                let value: Q = sigma
                    .iter()
                    .zip(&coords)
                    .map(|(&r, c)| c * &phi[r])
                    .sum();
                *phi_sum.entry(tau.clone()).or_insert_with(Q::zero) += omega * value;
                let acc = vec_sum
                    .entry(tau)
                    .or_insert_with(|| vec![Q::zero(); d]);
                for (a, b) in acc.iter_mut().zip(&rep_q) {
                    *a += omega * b;
                }
            }
        }
        let mut next: HashMap<Vec<usize>, Q> = HashMap::new();
        for (tau, s) in phi_sum {
            let v = &vec_sum[&tau];
            let correction = if tau.is_empty() {
                debug_assert!(v.iter().all(|x| x.is_zero()));
                Q::zero()
            } else {
                let mat: Vec<Vec<Q>> = (0..d)
                    .map(|row| {
                        tau.iter()
                            .map(|&r| Q::from_integer(fan.rays[r][row].clone()))
                            .collect()
                    })
                    .collect();
                let coords = linalg::solve_any(&mat, v)
                    .ok_or_else(|| Error::Invalid("balancing failure at a face".into()))?;
                tau.iter().zip(&coords).map(|(&r, c)| c * &phi[r]).sum()
            };
            let w = s - correction;
            if !w.is_zero() {
                next.insert(tau, w);
            }
        }
        weights = next;
    }
    Ok(weights.remove(&vec![]).unwrap_or_else(Q::zero))
}

/// The polytope `{ m : <m, u_rho> >= h(u_rho) }` of a nef class, built
/// from one vertex candidate per maximal cone.
fn nef_polytope(fan: &Fan, c: &ToricClass) -> Result<Polytope, Error> {
    let d = fan.dim;
    let mut points = Vec::new();
    for cone in &fan.max_cones {
        let mat: Vec<Vec<Q>> = cone.iter().map(|&r| linalg::to_q_vec(&fan.rays[r])).collect();
        let rhs: Vec<Q> = cone.iter().map(|&r| c.values[r].clone()).collect();
        let m = linalg::solve_square(&mat, &rhs)
            .ok_or_else(|| Error::Invalid("degenerate maximal cone".into()))?;
        points.push(m);
    }
    // sanity: a nef support function's cone solutions satisfy every facet
    for p in &points {
        for (i, r) in fan.rays.iter().enumerate() {
            if linalg::dot_iq(r, p) < c.values[i] {
                return Err(Error::Precondition(
                    "class is not nef: support function is not concave".into(),
                ));
            }
        }
    }
    Polytope::new(d, points)
}

/// Volume of the polytope of a nef class, measured from the known facet
/// description `{ m : <m, u_r> >= a_r }` so no hull enumeration is needed.
fn nef_volume(fan: &Fan, c: &ToricClass) -> Result<Q, Error> {
    let p = nef_polytope(fan, c)?;
    let rows: Vec<(Vec<Q>, Q)> = fan
        .rays
        .iter()
        .zip(&c.values)
        .map(|(r, a)| (linalg::to_q_vec(r), a.clone()))
        .collect();
    Ok(crate::geom::volume_from_hrep(fan.dim, &rows, &p.points))
}

/// Nef decomposition plus multilinear expansion into mixed volumes.
fn mv_intersection(fan: &Fan, classes: &[ToricClass]) -> Result<Q, Error> {
    let d = fan.dim;
    let ample = ample_class(fan)?;
    let walls = wall_data(fan)?;
    // write each class as (c + lambda A) - (lambda A), both nef, with the
    // smallest lambda restoring concavity across every wall; a class that
    // is already nef keeps a zero correction
    let zero = ToricClass::zero(fan);
    let mut pairs: Vec<(ToricClass, ToricClass)> = Vec::new();
    for c in classes {
        let mut lam = Q::zero();
        for w in &walls {
            let bc = bend(c, w);
            if bc.is_negative() {
                let need = -bc / bend(&ample, w);
                if need > lam {
                    lam = need;
                }
            }
        }
        if lam.is_zero() {
            pairs.push((c.clone(), zero.clone()));
        } else {
            let shift = ample.scale(&lam);
            pairs.push((c.add(&shift), shift));
        }
    }
    // deduplicated pool of nef classes; Minkowski sums of their polytopes
    // are the polytopes of summed support functions, since every class is
    // concave on the same fan
    let mut pool: Vec<ToricClass> = Vec::new();
    let mut slot_ids: Vec<(usize, usize)> = Vec::new();
    for (p, n) in &pairs {
        let mut id_of = |class: &ToricClass| -> usize {
            match pool.iter().position(|x| x == class) {
                Some(i) => i,
                None => {
                    pool.push(class.clone());
                    pool.len() - 1
                }
            }
        };
        let pi = id_of(p);
        let ni = id_of(n);
        slot_ids.push((pi, ni));
    }
    let mut vol_cache: HashMap<Vec<usize>, Q> = HashMap::new();
    let mut mv_of = |ids: Vec<usize>| -> Result<Q, Error> {
        // inclusion-exclusion over nonempty subsets of the d slots
        let mut total = Q::zero();
        for mask in 1u32..(1 << d) {
            let mut subset: Vec<usize> = (0..d)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| ids[i])
                .collect();
            let size = subset.len();
            subset.sort();
            let vol = match vol_cache.get(&subset) {
                Some(v) => v.clone(),
                None => {
                    let mut sum = ToricClass::zero(fan);
                    for &i in &subset {
                        sum = sum.add(&pool[i]);
                    }
                    let v = nef_volume(fan, &sum)?;
                    vol_cache.insert(subset.clone(), v.clone());
                    v
                }
            };
            if (d - size) % 2 == 0 {
                total += vol;
            } else {
                total -= vol;
            }
        }
        Ok(total)
    };
    // expand multilinearity: choose the positive or negative part per slot;
    // a slot holding the zero class contributes nothing (a point factor)
    let zero_id = pool.iter().position(|c| *c == zero);
    let mut total = Q::zero();
    for mask in 0u32..(1 << d) {
        let ids: Vec<usize> = (0..d)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    slot_ids[i].1
                } else {
                    slot_ids[i].0
                }
            })
            .collect();
        if zero_id.map_or(false, |z| ids.contains(&z)) {
            continue;
        }
        let term = mv_of(ids)?;
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Mixed volume of polytopes as a public operation, on the geometry layer.
pub fn polytope_mixed_volume(polytopes: &[Polytope]) -> Result<Q, Error> {
    mixed_volume(polytopes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::ambient_fan;
    use crate::flag::{phi_of_flag, FlagIdeal};
    use crate::rat::{frac, q};
    use crate::testconfig::build_testconfig;
    use crate::valuation::MonomialIdeal;

    fn mono(vars: usize, gens: Vec<Vec<i64>>) -> MonomialIdeal {
        MonomialIdeal::new(vars, gens).unwrap()
    }

    fn both(fan: &Fan, classes: &[ToricClass]) -> Q {
        intersection_number(fan, classes, Engine::CrossCheck).unwrap()
    }

    #[test]
    fn ambient_products() {
        let f1 = ambient_fan(1);
        let h = hyperplane_class(&f1, &q(1));
        let f = fiber_class(&f1);
        assert_eq!(both(&f1, &[h.clone(), f.clone()]), q(1));
        assert_eq!(both(&f1, &[h.clone(), h.clone()]), q(0));
        assert_eq!(both(&f1, &[f.clone(), f.clone()]), q(0));
        let f2 = ambient_fan(2);
        let h2 = hyperplane_class(&f2, &q(1));
        let fib2 = fiber_class(&f2);
        assert_eq!(both(&f2, &[h2.clone(), h2.clone(), fib2.clone()]), q(1));
        assert_eq!(both(&f2, &[h2.clone(), h2.clone(), h2.clone()]), q(0));
        // degree scales
        let h3 = hyperplane_class(&f2, &q(3));
        assert_eq!(both(&f2, &[h3.clone(), h3.clone(), fib2]), q(9));
    }

    #[test]
    fn blowup_surface() {
        // model of (z) + (1)t on P^1: a blow-up of P^1 x P^1
        let a = FlagIdeal::from_pairs(1, vec![(0, mono(1, vec![vec![1]]))], 1).unwrap();
        let tc = build_testconfig(&a).unwrap();
        let fan = &tc.fan;
        let e_ray = fan
            .ray_index(&[BigInt::from(1), BigInt::from(1)])
            .unwrap();
        let x_ray = fan
            .ray_index(&[BigInt::from(0), BigInt::from(1)])
            .unwrap();
        let e = ray_divisor_class(fan, e_ray, &q(1));
        let xt = ray_divisor_class(fan, x_ray, &q(1));
        let h = hyperplane_class(fan, &q(1));
        let f = fiber_class(fan);
        assert_eq!(both(fan, &[e.clone(), e.clone()]), q(-1));
        assert_eq!(both(fan, &[e.clone(), xt.clone()]), q(1));
        assert_eq!(both(fan, &[xt.clone(), xt.clone()]), q(-1));
        assert_eq!(both(fan, &[h.clone(), e.clone()]), q(0));
        assert_eq!(both(fan, &[h.clone(), xt.clone()]), q(1));
        // the fiber decomposes as E + strict transform
        assert_eq!(both(fan, &[f.clone(), e.clone()]), q(0));
        assert!(classes_equal(fan, &f, &e.add(&xt)));
        // the PL divisor of phi_a is -E
        let d = pl_class(&tc, &phi_of_flag(&a).unwrap()).unwrap();
        assert_eq!(both(fan, &[d.clone(), d.clone()]), q(-1));
        assert!(classes_equal(fan, &d, &e.neg()));
    }

    #[test]
    fn singular_model() {
        // (z^2) + (1)t: the exceptional ray (1,2) has b = 2 and E^2 = -1/2
        let a = FlagIdeal::from_pairs(1, vec![(0, mono(1, vec![vec![2]]))], 1).unwrap();
        let tc = build_testconfig(&a).unwrap();
        let e_ray = tc
            .fan
            .ray_index(&[BigInt::from(1), BigInt::from(2)])
            .unwrap();
        let e = ray_divisor_class(&tc.fan, e_ray, &q(1));
        assert_eq!(both(&tc.fan, &[e.clone(), e.clone()]), frac(-1, 2));
    }

    #[test]
    fn nef_tests() {
        let a = FlagIdeal::from_pairs(1, vec![(0, mono(1, vec![vec![1]]))], 1).unwrap();
        let tc = build_testconfig(&a).unwrap();
        let fan = &tc.fan;
        let e_ray = fan
            .ray_index(&[BigInt::from(1), BigInt::from(1)])
            .unwrap();
        let h = hyperplane_class(fan, &q(1));
        let e = ray_divisor_class(fan, e_ray, &q(1));
        assert!(is_nef(fan, &h).unwrap());
        assert!(!is_nef(fan, &h.neg()).unwrap());
        // alpha - E is relatively nef, alpha - 2E is not
        let a1 = h.add(&e.neg());
        let a2 = h.add(&e.scale(&q(2)).neg());
        assert!(is_relatively_nef(fan, &a1).unwrap());
        assert!(!is_relatively_nef(fan, &a2).unwrap());
        // the LP certificate really is ample
        let amp = ample_class(fan).unwrap();
        assert!(is_nef(fan, &amp).unwrap());
        let p = nef_polytope(fan, &amp).unwrap();
        assert!(p.volume() > q(0));
    }

    #[test]
    fn p2_model_products() {
        // blow-up of P^2 x P^1 along the origin section
        let a = FlagIdeal::from_pairs(
            2,
            vec![(0, mono(2, vec![vec![1, 0], vec![0, 1]]))],
            1,
        )
        .unwrap();
        let tc = build_testconfig(&a).unwrap();
        let fan = &tc.fan;
        let e_ray = fan
            .ray_index(&[BigInt::from(1), BigInt::from(1), BigInt::from(1)])
            .unwrap();
        let e = ray_divisor_class(fan, e_ray, &q(1));
        let h = hyperplane_class(fan, &q(1));
        let f = fiber_class(fan);
        assert_eq!(both(fan, &[h.clone(), h.clone(), f.clone()]), q(1));
        assert_eq!(both(fan, &[e.clone(), e.clone(), e.clone()]), q(1));
        assert_eq!(both(fan, &[h.clone(), e.clone(), e.clone()]), q(0));
        assert_eq!(both(fan, &[h.clone(), h.clone(), e.clone()]), q(0));
    }
}
