//! Toric test configurations attached to flag ideals: the model fan over
//! `P^n x P^1`, vertical divisors, dual complexes with their retractions,
//! and the dictionary between PL functions and vertical divisors.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::fan::{ambient_fan, model_fan, orthant_subdivision, Fan};
use crate::flag::{phi_of_flag, FlagIdeal, GaussValuation, PLFunction};
use crate::linalg;
use crate::rat::{denom_lcm, q, q_str, Q};
use crate::valuation::Weight;
use crate::Error;

/// A vertical ray of the model: a fan ray with positive last coordinate,
/// its multiplicity `b` (the last coordinate), and the induced Gauss
/// valuation with base weight `u / b`.
#[derive(Clone, Debug)]
pub struct VerticalRay {
    pub ray: usize,
    pub b: BigInt,
    pub valuation: GaussValuation,
}

/// The toric test configuration determined by a flag ideal: the normal fan
/// of its exponent polyhedron glued into the ambient fan of `P^n x P^1`.
#[derive(Clone, Debug)]
pub struct ToricTestConfig {
    pub n: usize,
    pub flag: FlagIdeal,
    pub fan: Fan,
    pub vertical: Vec<VerticalRay>,
}

impl ToricTestConfig {
    /// Rays lying in the positive orthant.
    pub fn orthant_rays(&self) -> Vec<usize> {
        (0..self.fan.rays.len())
            .filter(|&i| self.fan.rays[i].iter().all(|x| !x.is_negative()))
            .collect()
    }

    /// Maximal cones all of whose rays lie in the positive orthant.
    pub fn orthant_cones(&self) -> Vec<Vec<usize>> {
        let orth = self.orthant_rays();
        self.fan
            .max_cones
            .iter()
            .filter(|c| c.iter().all(|r| orth.contains(r)))
            .cloned()
            .collect()
    }

    pub fn vertical_index(&self, ray: usize) -> Option<usize> {
        self.vertical.iter().position(|v| v.ray == ray)
    }
}

/// Builds the test configuration of a flag ideal. Requires nonnegative
/// `t`-degrees so the flag defines an ideal on `P^n x A^1`.
pub fn build_testconfig(flag: &FlagIdeal) -> Result<ToricTestConfig, Error> {
    let n = flag.vars();
    let exps = flag.exponents();
    if exps.iter().any(|e| *e.last().unwrap() < 0) {
        return Err(Error::Invalid(
            "flag ideal has negative t-degrees, no model over A^1".into(),
        ));
    }
    let subdivision = orthant_subdivision(n + 1, &exps);
    let fan = if subdivision.is_empty() {
        ambient_fan(n)
    } else {
        model_fan(n, &subdivision)
    };
    let mut vertical = Vec::new();
    for (i, r) in fan.rays.iter().enumerate() {
        let b = r.last().unwrap().clone();
        if b.is_positive() {
            let w: Vec<Q> = r[..n].iter().map(|x| Q::new(x.clone(), b.clone())).collect();
            vertical.push(VerticalRay {
                ray: i,
                b,
                valuation: GaussValuation {
                    base: Weight::finite(n, w)?,
                },
            });
        }
    }
    vertical.sort_by_key(|v| v.ray);
    Ok(ToricTestConfig {
        n,
        flag: flag.clone(),
        fan,
        vertical,
    })
}

/// A finer model of the same flag ideal: the stellar subdivision of the
/// fan at a new primitive ray, with the vertical list recomputed.
pub fn refine_testconfig(
    tc: &ToricTestConfig,
    new_ray: Vec<BigInt>,
) -> Result<ToricTestConfig, Error> {
    let n = tc.n;
    let fan = tc.fan.stellar_subdivide(new_ray)?;
    let mut vertical = Vec::new();
    for (i, r) in fan.rays.iter().enumerate() {
        let b = r.last().unwrap().clone();
        if b.is_positive() {
            let w: Vec<Q> = r[..n].iter().map(|x| Q::new(x.clone(), b.clone())).collect();
            vertical.push(VerticalRay {
                ray: i,
                b,
                valuation: GaussValuation {
                    base: Weight::finite(n, w)?,
                },
            });
        }
    }
    vertical.sort_by_key(|v| v.ray);
    Ok(ToricTestConfig {
        n,
        flag: tc.flag.clone(),
        fan,
        vertical,
    })
}

/// The dual complex of the central fiber, serialized with exact rational
/// coordinates.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DualComplex {
    pub vertices: Vec<DualVertex>,
    /// faces as sorted vertex-index sets, every dimension, vertices included
    pub faces: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DualVertex {
    pub ray: Vec<String>,
    pub b: String,
    pub weight: Vec<String>,
}

pub fn dual_complex(tc: &ToricTestConfig) -> DualComplex {
    let vertices: Vec<DualVertex> = tc
        .vertical
        .iter()
        .map(|v| DualVertex {
            ray: tc.fan.rays[v.ray].iter().map(|x| x.to_string()).collect(),
            b: v.b.to_string(),
            weight: v
                .valuation
                .base
                .finite_entries()
                .unwrap()
                .iter()
                .map(q_str)
                .collect(),
        })
        .collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for cone in &tc.fan.max_cones {
        let verts: Vec<usize> = cone
            .iter()
            .filter_map(|&r| tc.vertical_index(r))
            .collect();
        for mask in 1u32..(1 << verts.len()) {
            let face: Vec<usize> = verts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            if !faces.contains(&face) {
                faces.push(face);
            }
        }
    }
    faces.sort_by_key(|f| (f.len(), f.clone()));
    DualComplex { vertices, faces }
}

/// A point of the dual complex: barycentric masses on vertical vertices
/// (summing to one) together with the monomial valuation it represents.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint {
    pub masses: Vec<(usize, Q)>,
    pub valuation: GaussValuation,
}

/// The retraction of a finite weight onto the dual complex: locate
/// `(w, 1)` in the fan and keep the vertical part of its cone coordinates.
pub fn retraction(tc: &ToricTestConfig, w: &Weight) -> Result<ComplexPoint, Error> {
    let mut u = w
        .finite_entries()
        .ok_or_else(|| Error::Invalid("retraction needs a finite weight".into()))?;
    u.push(Q::one());
    let (cone_idx, coords) = tc
        .fan
        .locate(&u)
        .ok_or_else(|| Error::Invalid("weight outside the fan support".into()))?;
    let cone = &tc.fan.max_cones[cone_idx];
    let mut masses = Vec::new();
    let mut weight = vec![Q::zero(); tc.n];
    for (&ray, c) in cone.iter().zip(&coords) {
        if let Some(vi) = tc.vertical_index(ray) {
            if !c.is_zero() {
                masses.push((vi, c * Q::from_integer(tc.vertical[vi].b.clone())));
            }
            for (k, x) in tc.fan.rays[ray][..tc.n].iter().enumerate() {
                weight[k] += c * Q::from_integer(x.clone());
            }
        }
    }
    masses.sort_by_key(|(i, _)| *i);
    debug_assert_eq!(
        masses.iter().map(|(_, m)| m.clone()).sum::<Q>(),
        Q::one()
    );
    Ok(ComplexPoint {
        masses,
        valuation: GaussValuation {
            base: Weight::finite(tc.n, weight)?,
        },
    })
}

/// The simplicial map between dual complexes induced by a refinement:
/// every vertex of the finer complex is retracted onto the coarser one.
pub fn complex_morphism(
    fine: &ToricTestConfig,
    coarse: &ToricTestConfig,
) -> Result<Vec<ComplexPoint>, Error> {
    if !fine.fan.refines(&coarse.fan) {
        return Err(Error::NotRefinement);
    }
    fine.vertical
        .iter()
        .map(|v| retraction(coarse, &v.valuation.base))
        .collect()
}

/// A vertical divisor on the model, as rational coefficients aligned with
/// `tc.vertical`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerticalDivisor {
    pub coeffs: Vec<Q>,
}

/// Reads off the divisor of a PL function linear on the cones of the
/// model: the coefficient on `E_rho` is `b_rho * f(v_rho)`.
pub fn pl_to_divisor(tc: &ToricTestConfig, f: &PLFunction) -> Result<VerticalDivisor, Error> {
    if f.vars() != tc.n {
        return Err(Error::ChartMismatch);
    }
    // linearity of both flag parts on every orthant cone: one generator
    // must attain the minimum at all rays of the cone
    for (flag, _) in [f.plus_part(), f.minus_part()] {
        let exps = flag.exponents();
        for cone in tc.orthant_cones() {
            let attains = |a: &Vec<i64>, ray: &Vec<BigInt>| -> bool {
                let val: BigInt = a
                    .iter()
                    .zip(ray)
                    .map(|(&e, x)| BigInt::from(e) * x)
                    .sum();
                let min = exps
                    .iter()
                    .map(|g| {
                        g.iter()
                            .zip(ray)
                            .map(|(&e, x)| BigInt::from(e) * x)
                            .sum::<BigInt>()
                    })
                    .min()
                    .unwrap();
                val == min
            };
            if !exps
                .iter()
                .any(|a| cone.iter().all(|&r| attains(a, &tc.fan.rays[r])))
            {
                return Err(Error::CoarseFan(
                    "the PL function is not linear on the cones of this model".into(),
                ));
            }
        }
    }
    let coeffs = tc
        .vertical
        .iter()
        .map(|v| Ok(Q::from_integer(v.b.clone()) * f.eval(&v.valuation)?))
        .collect::<Result<Vec<Q>, Error>>()?;
    Ok(VerticalDivisor { coeffs })
}

/// Reconstructs a PL function with the given vertical divisor, as a
/// difference of flag-ideal terms over a common denominator. The two
/// concave parts are produced with a strictly convexity certificate found
/// by exact linear programming over the model's interior walls.
pub fn divisor_to_pl(tc: &ToricTestConfig, div: &VerticalDivisor) -> Result<PLFunction, Error> {
    if div.coeffs.len() != tc.vertical.len() {
        return Err(Error::ChartMismatch);
    }
    let d = tc.n + 1;
    let orth = tc.orthant_rays();
    let cones = tc.orthant_cones();
    // homogeneous target values per orthant ray: divisor coefficients on
    // vertical rays, zero on horizontal ones
    let value_of = |vals: &[Q], ray: usize| -> Q {
        let pos = orth.iter().position(|&r| r == ray).unwrap();
        vals[pos].clone()
    };
    let f_vals: Vec<Q> = orth
        .iter()
        .map(|&r| match tc.vertical_index(r) {
            Some(vi) => div.coeffs[vi].clone(),
            None => Q::zero(),
        })
        .collect();
    // interior walls of the orthant subdivision, with the linear-extension
    // coefficients of the opposite ray
    struct Wall {
        sigma1: Vec<usize>,
        coeffs: Vec<Q>,
        opposite: usize,
    }
    let mut walls = Vec::new();
    for (common, i, j) in tc.fan.walls() {
        let c1 = &tc.fan.max_cones[i];
        let c2 = &tc.fan.max_cones[j];
        if !c1.iter().all(|r| orth.contains(r)) || !c2.iter().all(|r| orth.contains(r)) {
            continue;
        }
        let opposite = *c2.iter().find(|r| !common.contains(r)).unwrap();
        let mat: Vec<Vec<Q>> = (0..d)
            .map(|row| {
                c1.iter()
                    .map(|&r| Q::from_integer(tc.fan.rays[r][row].clone()))
                    .collect()
            })
            .collect();
        let rhs: Vec<Q> = tc.fan.rays[opposite]
            .iter()
            .map(|x| Q::from_integer(x.clone()))
            .collect();
        let coeffs = linalg::solve_square(&mat, &rhs)
            .ok_or_else(|| Error::Invalid("degenerate wall".into()))?;
        walls.push(Wall {
            sigma1: c1.clone(),
            coeffs,
            opposite,
        });
    }
    // strictly concave certificate: bend at least one across every wall
    let s_vals: Vec<Q> = if walls.is_empty() {
        vec![Q::zero(); orth.len()]
    } else {
        let cons: Vec<Vec<Q>> = walls
            .iter()
            .map(|w| {
                let mut row = vec![Q::zero(); orth.len()];
                for (&r, c) in w.sigma1.iter().zip(&w.coeffs) {
                    row[orth.iter().position(|&x| x == r).unwrap()] += c;
                }
                row[orth.iter().position(|&x| x == w.opposite).unwrap()] -= Q::one();
                row
            })
            .collect();
        let rhs = vec![Q::one(); walls.len()];
        linalg::feasible_point(&cons, &rhs)
            .ok_or_else(|| Error::Invalid("no convexity certificate for this fan".into()))?
    };
    let bend = |vals: &[Q], w: &Wall| -> Q {
        let ext: Q = w
            .sigma1
            .iter()
            .zip(&w.coeffs)
            .map(|(&r, c)| c * value_of(vals, r))
            .sum();
        ext - value_of(vals, w.opposite)
    };
    // scale the certificate until both parts are concave on every wall
    let mut k = Q::one();
    let concave = |vals: &[Q]| walls.iter().all(|w| !bend(vals, w).is_negative());
    let minus_vals = loop {
        let g: Vec<Q> = f_vals
            .iter()
            .zip(&s_vals)
            .map(|(f, s)| -f + s * &k)
            .collect();
        if concave(&g) {
            break g;
        }
        k *= q(2);
    };
    let plus_vals: Vec<Q> = s_vals.iter().map(|s| s * &k).collect();
    // linear pieces per orthant cone
    let pieces = |vals: &[Q]| -> Vec<Vec<Q>> {
        cones
            .iter()
            .map(|cone| {
                let mat: Vec<Vec<Q>> = cone
                    .iter()
                    .map(|&r| linalg::to_q_vec(&tc.fan.rays[r]))
                    .collect();
                let rhs: Vec<Q> = cone.iter().map(|&r| value_of(vals, r)).collect();
                linalg::solve_square(&mat, &rhs).expect("maximal cones are simplicial")
            })
            .collect()
    };
    let mut all_pieces: Vec<Vec<Q>> = pieces(&plus_vals);
    all_pieces.extend(pieces(&minus_vals));
    let flat: Vec<Q> = all_pieces.iter().flatten().cloned().collect();
    let m_big = denom_lcm(&flat);
    let m: u32 = m_big
        .to_u32_digits()
        .1
        .first()
        .copied()
        .ok_or_else(|| Error::Invalid("denominator overflow".into()))?;
    if m_big.to_u32_digits().1.len() > 1 {
        return Err(Error::Invalid("denominator overflow".into()));
    }
    let scale = Q::from_integer(m_big);
    let int_pieces = |vals: &[Q]| -> Vec<Vec<BigInt>> {
        pieces(vals)
            .iter()
            .map(|p| p.iter().map(|x| (x * &scale).to_integer()).collect())
            .collect()
    };
    let plus_pieces = int_pieces(&plus_vals);
    let minus_pieces = int_pieces(&minus_vals);
    // a common shift making all exponents nonnegative; it cancels in the
    // difference
    let mut shift = vec![BigInt::zero(); d];
    for p in plus_pieces.iter().chain(&minus_pieces) {
        for (i, x) in p.iter().enumerate() {
            if (-x.clone()) > shift[i] {
                shift[i] = -x.clone();
            }
        }
    }
    let shifted = |ps: &[Vec<BigInt>]| -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = ps
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&shift)
                    .map(|(x, s)| i64::try_from(x + s).expect("exponent fits in i64"))
                    .collect()
            })
            .collect();
        out.sort();
        out.dedup();
        out
    };
    let a_plus = shifted(&plus_pieces);
    let a_minus = shifted(&minus_pieces);
    // unit stabilizer (0, k): high enough that no value on a vertical ray
    // changes; on the horizontal boundary both parts drop equally
    let mut stab: i64 = 1;
    for a in a_plus.iter().chain(&a_minus) {
        stab = stab.max(*a.last().unwrap());
    }
    for v in &tc.vertical {
        let u = &tc.fan.rays[v.ray];
        for vals in [&plus_vals, &minus_vals] {
            let c: Q = (value_of(vals, v.ray) * &scale
                + linalg::dot_iq(&shift, &linalg::to_q_vec(u)))
                / Q::from_integer(v.b.clone());
            stab = stab.max(i64::try_from(c.ceil().to_integer()).unwrap());
        }
    }
    let mk_flag = |a: &[Vec<i64>]| -> Result<FlagIdeal, Error> {
        let mut lambdas: Vec<i64> = a.iter().map(|e| *e.last().unwrap()).collect();
        lambdas.sort();
        lambdas.dedup();
        let mut pairs = Vec::new();
        for &lam in &lambdas {
            if lam >= stab {
                continue;
            }
            let gens: Vec<Vec<i64>> = a
                .iter()
                .filter(|e| *e.last().unwrap() <= lam)
                .map(|e| e[..d - 1].to_vec())
                .collect();
            pairs.push((lam, crate::valuation::MonomialIdeal::new(d - 1, gens)?));
        }
        FlagIdeal::from_pairs(d - 1, pairs, stab)
    };
    let flag_plus = mk_flag(&a_minus)?;
    let flag_minus = mk_flag(&a_plus)?;
    let inv_m = Q::new(BigInt::one(), BigInt::from(m));
    let f = phi_of_flag(&flag_plus)?
        .scale(&inv_m)?
        .sub(&phi_of_flag(&flag_minus)?.scale(&inv_m)?);
    // the construction is exact; verify the round trip
    let back = pl_to_divisor(tc, &f)?;
    if back != *div {
        return Err(Error::Invalid(
            "internal: reconstructed function has a different divisor".into(),
        ));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;
    use crate::valuation::MonomialIdeal;

    fn mono(vars: usize, gens: Vec<Vec<i64>>) -> MonomialIdeal {
        MonomialIdeal::new(vars, gens).unwrap()
    }

    fn deformation_p1() -> FlagIdeal {
        FlagIdeal::from_pairs(1, vec![(0, mono(1, vec![vec![1]]))], 1).unwrap()
    }

    #[test]
    fn model_p1() {
        let tc = build_testconfig(&deformation_p1()).unwrap();
        assert_eq!(tc.fan.rays.len(), 5);
        assert_eq!(tc.vertical.len(), 2);
        let dc = dual_complex(&tc);
        assert_eq!(dc.vertices.len(), 2);
        // two vertices and the edge between them
        assert_eq!(dc.faces, vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(dc.vertices[0].b, "1");
        // trivial flag gives the ambient model and a point complex
        let triv = build_testconfig(&FlagIdeal::unit(1)).unwrap();
        assert_eq!(dual_complex(&triv).vertices.len(), 1);
        assert_eq!(dual_complex(&triv).faces, vec![vec![0]]);
    }

    #[test]
    fn retraction_examples() {
        let tc = build_testconfig(&deformation_p1()).unwrap();
        let mid = retraction(&tc, &Weight::finite(1, vec![frac(1, 2)]).unwrap()).unwrap();
        assert_eq!(mid.masses.len(), 2);
        assert!(mid.masses.iter().all(|(_, m)| *m == frac(1, 2)));
        assert_eq!(
            mid.valuation.base.finite_entries().unwrap(),
            vec![frac(1, 2)]
        );
        // beyond the complex the retraction lands on the extreme vertex
        let far = retraction(&tc, &Weight::finite(1, vec![q(3)]).unwrap()).unwrap();
        assert_eq!(far.masses.len(), 1);
        assert_eq!(far.masses[0].1, q(1));
        assert_eq!(far.valuation.base.finite_entries().unwrap(), vec![q(1)]);
        // the retraction fixes the complex pointwise
        let v = retraction(&tc, &Weight::finite(1, vec![q(1)]).unwrap()).unwrap();
        assert_eq!(v.valuation.base.finite_entries().unwrap(), vec![q(1)]);
    }

    #[test]
    fn morphism_examples() {
        let a = deformation_p1();
        let b = FlagIdeal::from_pairs(1, vec![(0, mono(1, vec![vec![2]]))], 1).unwrap();
        let fine = build_testconfig(&a.product(&b)).unwrap();
        let coarse = build_testconfig(&a).unwrap();
        assert!(fine.fan.refines(&coarse.fan));
        let images = complex_morphism(&fine, &coarse).unwrap();
        assert_eq!(images.len(), fine.vertical.len());
        // the vertex at weight 1/2 maps to the midpoint of the coarse edge
        let vi = fine
            .vertical
            .iter()
            .position(|v| v.valuation.base.finite_entries().unwrap() == vec![frac(1, 2)])
            .unwrap();
        assert!(images[vi].masses.iter().all(|(_, m)| *m == frac(1, 2)));
        // domination fails the other way
        assert!(matches!(
            complex_morphism(&coarse, &fine),
            Err(Error::NotRefinement)
        ));
    }

    #[test]
    fn pl_divisor_dictionary() {
        let a = deformation_p1();
        let tc = build_testconfig(&a).unwrap();
        let f = phi_of_flag(&a).unwrap();
        let div = pl_to_divisor(&tc, &f).unwrap();
        // exceptional coefficient -1, strict transform of the fiber 0
        let by_weight: Vec<(Vec<Q>, Q)> = tc
            .vertical
            .iter()
            .zip(&div.coeffs)
            .map(|(v, c)| (v.valuation.base.finite_entries().unwrap(), c.clone()))
            .collect();
        assert!(by_weight.contains(&(vec![q(0)], q(0))));
        assert!(by_weight.contains(&(vec![q(1)], q(-1))));
        // a function not linear on this fan is rejected
        let b = FlagIdeal::from_pairs(1, vec![(0, mono(1, vec![vec![2]]))], 1).unwrap();
        assert!(matches!(
            pl_to_divisor(&tc, &phi_of_flag(&b).unwrap()),
            Err(Error::CoarseFan(_))
        ));
    }

    #[test]
    fn divisor_round_trips() {
        let tc = build_testconfig(&deformation_p1()).unwrap();
        for coeffs in [
            vec![q(0), q(-1)],
            vec![q(1), q(2)],
            vec![frac(-3, 2), frac(5, 3)],
            vec![q(0), q(0)],
        ] {
            let div = VerticalDivisor { coeffs };
            let f = divisor_to_pl(&tc, &div).unwrap();
            assert_eq!(pl_to_divisor(&tc, &f).unwrap(), div);
        }
        // P^2 with a non-simplicial subdivision exercise
        let a2 = FlagIdeal::from_pairs(
            2,
            vec![(0, mono(2, vec![vec![1, 0], vec![0, 1]]))],
            1,
        )
        .unwrap();
        let tc2 = build_testconfig(&a2).unwrap();
        let k = tc2.vertical.len();
        let div = VerticalDivisor {
            coeffs: (0..k).map(|i| q(i as i64) - frac(1, 2)).collect(),
        };
        let f = divisor_to_pl(&tc2, &div).unwrap();
        assert_eq!(pl_to_divisor(&tc2, &f).unwrap(), div);
    }
}
