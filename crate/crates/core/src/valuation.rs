//! Monomial and quasi-monomial valuations on a torus-fixed chart of
//! projective space: evaluation, Newton polyhedra, integral closure and
//! Rees valuations.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg;
use crate::rat::{primitive_of_rational, Q};
use crate::tropical::TropicalValue;
use crate::Error;

/// A torus-fixed-point chart of `P^n` (`n <= 3`). Ideals and weights are
/// chart-local; operations mixing different charts are rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    pub n: usize,
    pub index: usize,
}

impl Chart {
    pub fn standard(n: usize) -> Self {
        Chart { n, index: 0 }
    }
}

/// A quasi-monomial (semi)valuation: nonnegative rational weights against
/// the chart coordinates, `+inf` entries encoding nontrivial support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub chart: Chart,
    pub w: Vec<TropicalValue>,
}

impl Weight {
    pub fn new(chart: Chart, w: Vec<TropicalValue>) -> Result<Self, Error> {
        if w.len() != chart.n {
            return Err(Error::ChartMismatch);
        }
        for e in &w {
            if let TropicalValue::Finite(x) = e {
                if x.is_negative() {
                    return Err(Error::Invalid("weights must be nonnegative".into()));
                }
            }
        }
        Ok(Weight { chart, w })
    }

    pub fn finite(n: usize, w: Vec<Q>) -> Result<Self, Error> {
        Weight::new(
            Chart::standard(n),
            w.into_iter().map(TropicalValue::Finite).collect(),
        )
    }

    pub fn trivial(n: usize) -> Self {
        Weight::finite(n, vec![Q::zero(); n]).unwrap()
    }

    pub fn is_finite(&self) -> bool {
        self.w.iter().all(|e| e.finite().is_some())
    }

    pub fn is_trivial(&self) -> bool {
        self.w
            .iter()
            .all(|e| e.finite().map(|x| x.is_zero()).unwrap_or(false))
    }

    pub fn finite_entries(&self) -> Option<Vec<Q>> {
        self.w.iter().map(|e| e.finite().cloned()).collect()
    }
}

/// A monomial ideal given by its minimal generating exponents. The empty
/// set is the zero ideal; the single exponent `0` is the unit ideal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    vars: usize,
    gens: Vec<Vec<i64>>,
}

fn divides(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    gens.sort();
    gens.dedup();
    let keep: Vec<Vec<i64>> = gens
        .iter()
        .filter(|g| !gens.iter().any(|h| h != *g && divides(h, g)))
        .cloned()
        .collect();
    keep
}

impl MonomialIdeal {
    pub fn new(vars: usize, gens: Vec<Vec<i64>>) -> Result<Self, Error> {
        for g in &gens {
            if g.len() != vars {
                return Err(Error::ChartMismatch);
            }
            if g.iter().any(|&e| e < 0) {
                return Err(Error::Invalid("negative exponent".into()));
            }
        }
        Ok(MonomialIdeal {
            vars,
            gens: minimalize(gens),
        })
    }

    pub fn zero(vars: usize) -> Self {
        MonomialIdeal { vars, gens: vec![] }
    }

    pub fn unit(vars: usize) -> Self {
        MonomialIdeal {
            vars,
            gens: vec![vec![0; vars]],
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&e| e == 0))
    }

    pub fn contains_monomial(&self, exp: &[i64]) -> bool {
        self.gens.iter().any(|g| divides(g, exp))
    }

    /// Ideal sum (tropical addition).
    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        MonomialIdeal {
            vars: self.vars,
            gens: minimalize(gens),
        }
    }

    /// Ideal product (tropical multiplication).
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        MonomialIdeal {
            vars: self.vars,
            gens: minimalize(gens),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MonomialIdeal::unit(self.vars);
        for _ in 0..k {
            acc = acc.product(self);
        }
        acc
    }

    /// Containment `self` in `other` as ideals.
    pub fn subset_of(&self, other: &Self) -> bool {
        self.gens.iter().all(|g| other.contains_monomial(g))
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialIdeal{:?}", self.gens)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "(0)");
        }
        let terms: Vec<String> = self
            .gens
            .iter()
            .map(|g| {
                let s: Vec<String> = g
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("z{i}")
                        } else {
                            format!("z{i}^{e}")
                        }
                    })
                    .collect();
                if s.is_empty() {
                    "1".to_string()
                } else {
                    s.join("*")
                }
            })
            .collect();
        write!(f, "({})", terms.join(", "))
    }
}

/// A polynomial with exact rational coefficients, sparse over exponents.
pub type Poly = std::collections::BTreeMap<Vec<i64>, Q>;

/// Finitely many nonzero polynomial generators; used for recentering.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyIdeal {
    pub vars: usize,
    pub generators: Vec<Poly>,
}

impl PolyIdeal {
    pub fn new(vars: usize, generators: Vec<Poly>) -> Result<Self, Error> {
        for g in &generators {
            if g.is_empty() || g.values().any(|c| c.is_zero()) {
                return Err(Error::Invalid("zero polynomial generator".into()));
            }
            if g.keys().any(|e| e.len() != vars || e.iter().any(|&x| x < 0)) {
                return Err(Error::Invalid("bad exponent".into()));
            }
        }
        Ok(PolyIdeal { vars, generators })
    }
}

fn weighted_degree(exp: &[i64], w: &[TropicalValue]) -> TropicalValue {
    let mut acc = Q::zero();
    for (e, wi) in exp.iter().zip(w) {
        if *e == 0 {
            continue;
        }
        match wi {
            TropicalValue::Infinity => return TropicalValue::Infinity,
            TropicalValue::Finite(x) => acc += x * Q::from_integer(BigInt::from(*e)),
        }
    }
    TropicalValue::Finite(acc)
}

/// `min over generator exponents of <alpha, w>`; `+inf` on the zero ideal.
pub fn eval_valuation(v: &Weight, ideal: &MonomialIdeal) -> Result<TropicalValue, Error> {
    if v.chart.n != ideal.vars {
        return Err(Error::ChartMismatch);
    }
    let mut out = TropicalValue::Infinity;
    for g in &ideal.gens {
        out = out.trop_add(&weighted_degree(g, &v.w));
    }
    Ok(out)
}

/// Valuation of a polynomial ideal: min over all monomials of all generators.
pub fn eval_valuation_poly(v: &Weight, ideal: &PolyIdeal) -> Result<TropicalValue, Error> {
    if v.chart.n != ideal.vars {
        return Err(Error::ChartMismatch);
    }
    let mut out = TropicalValue::Infinity;
    for g in &ideal.generators {
        for exp in g.keys() {
            out = out.trop_add(&weighted_degree(exp, &v.w));
        }
    }
    Ok(out)
}

fn binomial(n: i64, k: i64) -> Q {
    let mut acc = Q::from_integer(BigInt::from(1));
    for j in 0..k {
        acc = acc * Q::from_integer(BigInt::from(n - j)) / Q::from_integer(BigInt::from(j + 1));
    }
    acc
}

/// Re-expands the generators about the point `q`, which must lie on the
/// stratum cut out by the positive-weight coordinates of `v`.
pub fn recenter(f: &PolyIdeal, v: &Weight, point: &[Q]) -> Result<PolyIdeal, Error> {
    if point.len() != f.vars || v.chart.n != f.vars {
        return Err(Error::ChartMismatch);
    }
    for (i, wi) in v.w.iter().enumerate() {
        let positive = match wi {
            TropicalValue::Infinity => true,
            TropicalValue::Finite(x) => x.is_positive(),
        };
        if positive && !point[i].is_zero() {
            return Err(Error::OffStratum(i));
        }
    }
    let mut out = Vec::new();
    for g in &f.generators {
        let mut expanded: Poly = Poly::new();
        for (exp, coef) in g {
            // expand prod_i (q_i + z_i)^{e_i} one coordinate at a time
            let mut terms: Vec<(Vec<i64>, Q)> = vec![(vec![], coef.clone())];
            for (i, &e) in exp.iter().enumerate() {
                let mut next = Vec::new();
                for (pref, c) in &terms {
                    if point[i].is_zero() {
                        let mut p = pref.clone();
                        p.push(e);
                        next.push((p, c.clone()));
                        continue;
                    }
                    for k in 0..=e {
                        let mut p = pref.clone();
                        p.push(k);
                        let mut qpow = Q::from_integer(BigInt::from(1));
                        for _ in 0..(e - k) {
                            qpow = qpow * &point[i];
                        }
                        next.push((p, c * binomial(e, k) * qpow));
                    }
                }
                terms = next;
            }
            for (e2, c2) in terms {
                let entry = expanded.entry(e2).or_insert_with(Q::zero);
                *entry = &*entry + &c2;
            }
        }
        expanded.retain(|_, c| !c.is_zero());
        if expanded.is_empty() {
            return Err(Error::Invalid("generator vanished after recentering".into()));
        }
        out.push(expanded);
    }
    PolyIdeal::new(f.vars, out)
}

/// A facet of a Newton polyhedron: primitive inner normal, support value,
/// and compactness (all normal entries strictly positive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NPFacet {
    pub normal: Vec<BigInt>,
    pub support: BigInt,
    pub compact: bool,
}

/// `conv(exponents) + R^n_{>=0}` of a nonzero monomial ideal.
#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    pub vars: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<NPFacet>,
}

fn np_facets(vars: usize, points: &[Vec<i64>]) -> Vec<NPFacet> {
    let d = vars;
    let pts_q: Vec<Vec<Q>> = points
        .iter()
        .map(|p| p.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut facets: Vec<NPFacet> = Vec::new();
    // candidate supporting hyperplanes are spanned by vertex differences
    // together with recession directions e_i
    let point_subsets = subsets_up_to(points.len(), d);
    for s in &point_subsets {
        if s.is_empty() {
            continue;
        }
        let coord_subsets = subsets_of_size(d, d - s.len());
        for t in &coord_subsets {
            let mut rows: Vec<Vec<Q>> = Vec::new();
            for &i in &s[1..] {
                rows.push(
                    pts_q[i]
                        .iter()
                        .zip(&pts_q[s[0]])
                        .map(|(a, b)| a - b)
                        .collect(),
                );
            }
            for &i in t {
                let mut e = vec![Q::zero(); d];
                e[i] = Q::from_integer(BigInt::from(1));
                rows.push(e);
            }
            let kernel = linalg::kernel_basis(&rows, d);
            if kernel.len() != 1 {
                continue;
            }
            let mut normal = primitive_of_rational(&kernel[0]);
            // orient inward: nonnegative entries, supporting from below
            if normal.iter().any(|x| x.is_negative()) {
                for x in normal.iter_mut() {
                    *x = -x.clone();
                }
            }
            if normal.iter().any(|x| x.is_negative()) {
                continue;
            }
            let values: Vec<BigInt> = points
                .iter()
                .map(|p| {
                    normal
                        .iter()
                        .zip(p)
                        .map(|(n, &x)| n * BigInt::from(x))
                        .sum()
                })
                .collect();
            let c = values.iter().min().unwrap().clone();
            if values[s[0]] != c {
                continue;
            }
            // facet dimension check: tight vertices plus recession rays with
            // zero normal entry must span d-1 affine dimensions
            let mut tight: Vec<Vec<Q>> = points
                .iter()
                .enumerate()
                .filter(|(i, _)| values[*i] == c)
                .map(|(i, _)| pts_q[i].clone())
                .collect();
            let base = tight[0].clone();
            for (i, n) in normal.iter().enumerate() {
                if n.is_zero() {
                    let mut p = base.clone();
                    p[i] += Q::from_integer(BigInt::from(1));
                    tight.push(p);
                }
            }
            if linalg::affine_rank(&tight) != d - 1 && d > 1 {
                continue;
            }
            let compact = normal.iter().all(|x| x.is_positive());
            let f = NPFacet {
                normal,
                support: c,
                compact,
            };
            if !facets.contains(&f) {
                facets.push(f);
            }
        }
    }
    facets.sort_by(|a, b| (&a.normal, &a.support).cmp(&(&b.normal, &b.support)));
    facets
}

/// Minimal elements of an exponent set under componentwise divisibility.
pub(crate) fn minimalize_exponents(pts: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    minimalize(pts)
}

/// Facets of `conv(points) + R^dim_{>=0}` for an arbitrary exponent set.
pub(crate) fn facets_of_exponents(dim: usize, points: &[Vec<i64>]) -> Vec<NPFacet> {
    np_facets(dim, points)
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

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=k.min(n) {
        out.extend(subsets_of_size(n, size));
    }
    out
}

/// Newton polyhedron of a nonzero monomial ideal.
pub fn newton_polyhedron(ideal: &MonomialIdeal) -> Result<NewtonPolyhedron, Error> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let d = ideal.vars;
    let facets = np_facets(d, &ideal.gens);
    let vertices: Vec<Vec<i64>> = ideal
        .gens
        .iter()
        .filter(|g| {
            let tight: Vec<Vec<Q>> = facets
                .iter()
                .filter(|f| {
                    let v: BigInt = f
                        .normal
                        .iter()
                        .zip(*g)
                        .map(|(n, &x)| n * BigInt::from(x))
                        .sum();
                    v == f.support
                })
                .map(|f| linalg::to_q_vec(&f.normal))
                .collect();
            d == 1 || linalg::rank(&tight) == d
        })
        .cloned()
        .collect();
    Ok(NewtonPolyhedron {
        vars: d,
        vertices,
        facets,
    })
}

/// Integral closure: the monomial ideal of all lattice points of the
/// Newton polyhedron.
pub fn integral_closure(ideal: &MonomialIdeal) -> Result<MonomialIdeal, Error> {
    let np = newton_polyhedron(ideal)?;
    let d = ideal.vars;
    let bounds: Vec<i64> = (0..d)
        .map(|i| ideal.gens.iter().map(|g| g[i]).max().unwrap_or(0))
        .collect();
    let mut gens = Vec::new();
    let mut cur = vec![0i64; d];
    loop {
        let inside = np.facets.iter().all(|f| {
            let v: BigInt = f
                .normal
                .iter()
                .zip(&cur)
                .map(|(n, &x)| n * BigInt::from(x))
                .sum();
            v >= f.support
        });
        if inside {
            gens.push(cur.clone());
        }
        // increment the mixed-radix counter over the bounding box
        let mut i = 0;
        loop {
            if i == d {
                return MonomialIdeal::new(d, gens);
            }
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Rees valuations: the primitive inner normals of the compact facets of
/// the Newton polyhedron. When no compact facet exists (principal-type
/// ideals) the coordinate normals with positive support value are returned.
pub fn rees_valuations(ideal: &MonomialIdeal) -> Result<Vec<Weight>, Error> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Ok(vec![]);
    }
    let np = newton_polyhedron(ideal)?;
    let d = ideal.vars;
    let mut out: Vec<Weight> = np
        .facets
        .iter()
        .filter(|f| f.compact)
        .map(|f| Weight::finite(d, linalg::to_q_vec(&f.normal)).unwrap())
        .collect();
    if out.is_empty() {
        for i in 0..d {
            let mut w = vec![Q::zero(); d];
            w[i] = Q::from_integer(BigInt::from(1));
            let weight = Weight::finite(d, w).unwrap();
            if let TropicalValue::Finite(x) = eval_valuation(&weight, ideal)? {
                if x.is_positive() {
                    out.push(weight);
                }
            }
        }
    }
    Ok(out)
}

/// Center and support index sets of a weight: coordinates with positive
/// and infinite entries respectively (0-based).
pub fn center_support(v: &Weight) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut center = BTreeSet::new();
    let mut support = BTreeSet::new();
    for (i, e) in v.w.iter().enumerate() {
        match e {
            TropicalValue::Infinity => {
                center.insert(i);
                support.insert(i);
            }
            TropicalValue::Finite(x) => {
                if x.is_positive() {
                    center.insert(i);
                }
            }
        }
    }
    (center, support)
}

/// Lelong–Kiselman number via the slope at infinity of the max-plus convex
/// function `t -> max_gens -<alpha, t w>`; agrees with `eval_valuation`.
pub fn lelong_kiselman(v: &Weight, ideal: &MonomialIdeal) -> Result<Q, Error> {
    if !v.is_finite() {
        return Err(Error::Invalid("weight must be finite".into()));
    }
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let w = v.finite_entries().unwrap();
    let chi = |t: &Q| -> Q {
        ideal
            .gens
            .iter()
            .map(|g| {
                -(g.iter()
                    .zip(&w)
                    .map(|(&e, wi)| wi * Q::from_integer(BigInt::from(e)))
                    .sum::<Q>()
                    * t)
            })
            .max()
            .unwrap()
    };
    // the crossings of the max-plus pieces all sit at t = 0, so the slope at
    // infinity is already exact between any two positive samples
    let slope = chi(&crate::rat::q(2)) - chi(&crate::rat::q(1));
    Ok(-slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, q};
    use proptest::prelude::*;

    fn ideal(gens: Vec<Vec<i64>>) -> MonomialIdeal {
        MonomialIdeal::new(gens[0].len(), gens).unwrap()
    }

    #[test]
    fn eval_examples() {
        let w = Weight::finite(2, vec![q(1), q(2)]).unwrap();
        let i = ideal(vec![vec![2, 0], vec![1, 1], vec![0, 3]]);
        assert_eq!(eval_valuation(&w, &i).unwrap(), TropicalValue::Finite(q(2)));
        let triv = Weight::trivial(2);
        assert_eq!(
            eval_valuation(&triv, &i).unwrap(),
            TropicalValue::Finite(q(0))
        );
        let one = Weight::finite(2, vec![q(1), q(1)]).unwrap();
        assert_eq!(
            eval_valuation(&one, &MonomialIdeal::zero(2)).unwrap(),
            TropicalValue::Infinity
        );
        let bad = Weight::finite(3, vec![q(1), q(1), q(1)]).unwrap();
        assert!(matches!(eval_valuation(&bad, &i), Err(Error::ChartMismatch)));
    }

    #[test]
    fn newton_polyhedron_vertices() {
        let np = newton_polyhedron(&ideal(vec![vec![3, 0], vec![0, 2]])).unwrap();
        assert_eq!(np.vertices, vec![vec![0, 2], vec![3, 0]]);
        let np = newton_polyhedron(&ideal(vec![vec![2, 0], vec![1, 1], vec![0, 2]])).unwrap();
        assert_eq!(np.vertices, vec![vec![0, 2], vec![2, 0]]);
        let np = newton_polyhedron(&MonomialIdeal::unit(2)).unwrap();
        assert_eq!(np.vertices, vec![vec![0, 0]]);
        assert!(newton_polyhedron(&MonomialIdeal::zero(2)).is_err());
    }

    #[test]
    fn integral_closure_examples() {
        let i = ideal(vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(
            integral_closure(&i).unwrap(),
            ideal(vec![vec![2, 0], vec![1, 1], vec![0, 2]])
        );
        let p = ideal(vec![vec![3, 4]]);
        assert_eq!(integral_closure(&p).unwrap(), p);
        let i = ideal(vec![vec![3, 0], vec![0, 2]]);
        assert_eq!(
            integral_closure(&i).unwrap(),
            ideal(vec![vec![3, 0], vec![2, 1], vec![0, 2]])
        );
    }

    #[test]
    fn rees_examples() {
        let rees = |gens: Vec<Vec<i64>>| -> Vec<Vec<Q>> {
            rees_valuations(&ideal(gens))
                .unwrap()
                .into_iter()
                .map(|w| w.finite_entries().unwrap())
                .collect()
        };
        assert_eq!(rees(vec![vec![1, 0], vec![0, 1]]), vec![vec![q(1), q(1)]]);
        assert_eq!(rees(vec![vec![3, 0], vec![0, 2]]), vec![vec![q(2), q(3)]]);
        assert_eq!(rees(vec![vec![2, 0]]), vec![vec![q(1), q(0)]]);
        assert!(rees_valuations(&MonomialIdeal::unit(2))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn center_support_patterns() {
        let (c, s) = center_support(&Weight::trivial(3));
        assert!(c.is_empty() && s.is_empty());
        let (c, s) = center_support(&Weight::finite(3, vec![q(1), q(0), q(2)]).unwrap());
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![0, 2]);
        assert!(s.is_empty());
        let w = Weight::new(
            Chart::standard(2),
            vec![TropicalValue::Infinity, TropicalValue::Finite(q(1))],
        )
        .unwrap();
        let (c, s) = center_support(&w);
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn lelong_kiselman_bridge() {
        let w = Weight::finite(2, vec![q(1), q(1)]).unwrap();
        assert_eq!(
            lelong_kiselman(&w, &ideal(vec![vec![1, 0], vec![0, 1]])).unwrap(),
            q(1)
        );
        let w = Weight::finite(2, vec![q(1), q(2)]).unwrap();
        let i = ideal(vec![vec![2, 0], vec![1, 1], vec![0, 3]]);
        assert_eq!(lelong_kiselman(&w, &i).unwrap(), q(2));
        assert_eq!(
            lelong_kiselman(&Weight::trivial(2), &i).unwrap(),
            q(0)
        );
    }

    #[test]
    fn recenter_examples() {
        // f = y - c with weight (1,0): unit after shifting to (0,c)
        let mut f: Poly = Poly::new();
        f.insert(vec![0, 1], q(1));
        f.insert(vec![0, 0], q(-5));
        let pi = PolyIdeal::new(2, vec![f]).unwrap();
        let w = Weight::finite(2, vec![q(1), q(0)]).unwrap();
        let shifted = recenter(&pi, &w, &[q(0), q(5)]).unwrap();
        assert_eq!(
            eval_valuation_poly(&w, &shifted).unwrap(),
            eval_valuation_poly(&w, &pi).unwrap()
        );
        // f = x^2 + x y, shift q = (0,1): value stays 1
        let mut f: Poly = Poly::new();
        f.insert(vec![2, 0], q(1));
        f.insert(vec![1, 1], q(1));
        let pi = PolyIdeal::new(2, vec![f]).unwrap();
        let shifted = recenter(&pi, &w, &[q(0), q(1)]).unwrap();
        assert_eq!(
            eval_valuation_poly(&w, &shifted).unwrap(),
            TropicalValue::Finite(q(1))
        );
        // off-stratum point rejected
        assert!(matches!(
            recenter(&pi, &w, &[frac(1, 2), q(0)]),
            Err(Error::OffStratum(0))
        ));
    }

    proptest! {
        #[test]
        fn valuation_laws(
            ga in proptest::collection::vec(proptest::collection::vec(0i64..4, 2), 1..4),
            gb in proptest::collection::vec(proptest::collection::vec(0i64..4, 2), 1..4),
            wn in proptest::collection::vec(0i64..5, 2),
        ) {
            let a = MonomialIdeal::new(2, ga).unwrap();
            let b = MonomialIdeal::new(2, gb).unwrap();
            let w = Weight::finite(2, wn.iter().map(|&x| q(x)).collect()).unwrap();
            let va = eval_valuation(&w, &a).unwrap();
            let vb = eval_valuation(&w, &b).unwrap();
            prop_assert_eq!(eval_valuation(&w, &a.product(&b)).unwrap(), va.trop_mul(&vb));
            prop_assert_eq!(eval_valuation(&w, &a.sum(&b)).unwrap(), va.trop_add(&vb));
            // monotone: a subset a+b, so eval(a) >= eval(a+b)
            prop_assert!(crate::tropical::natural_leq(&eval_valuation(&w, &a.sum(&b)).unwrap(), &va));
        }

        #[test]
        fn closure_invariance(
            gens in proptest::collection::vec(proptest::collection::vec(0i64..5, 2), 1..4),
            wn in proptest::collection::vec(0i64..4, 2),
            wd in 1i64..3,
        ) {
            let i = MonomialIdeal::new(2, gens).unwrap();
            prop_assume!(!i.is_zero());
            let closure = integral_closure(&i).unwrap();
            prop_assert!(i.subset_of(&closure));
            prop_assert_eq!(integral_closure(&closure).unwrap(), closure.clone());
            let w = Weight::finite(2, wn.iter().map(|&x| frac(x, wd)).collect()).unwrap();
            prop_assert_eq!(
                eval_valuation(&w, &i).unwrap(),
                eval_valuation(&w, &closure).unwrap()
            );
        }

        #[test]
        fn rees_normals_attain(
            gens in proptest::collection::vec(proptest::collection::vec(0i64..5, 2), 1..4),
        ) {
            let i = MonomialIdeal::new(2, gens).unwrap();
            prop_assume!(!i.is_zero() && !i.is_unit());
            let np = newton_polyhedron(&i).unwrap();
            for w in rees_valuations(&i).unwrap() {
                let value = eval_valuation(&w, &i).unwrap();
                // the valuation value is the support value of its facet
                let entries = w.finite_entries().unwrap();
                let expected = np.facets.iter().find(|f| {
                    linalg::to_q_vec(&f.normal) == entries
                }).map(|f| Q::from_integer(f.support.clone()));
                if let Some(c) = expected {
                    prop_assert_eq!(value, TropicalValue::Finite(c));
                }
            }
        }
    }
}
