//! Flag ideals on `X x P^1`, the Gauss extension/restriction, and the
//! PL-function calculus they generate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{q, Q};
use crate::tropical::TropicalValue;
use crate::valuation::{eval_valuation, MonomialIdeal, Weight};
use crate::Error;

/// A flag ideal `sum of a_lambda t^lambda`: an increasing family of
/// monomial-ideal slices, equal to the unit ideal from `lambda_max` on.
/// Slices are stored sparsely at their breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagIdeal {
    vars: usize,
    // breakpoint -> slice; the slice holds from its key up to the next key
    terms: BTreeMap<i64, MonomialIdeal>,
    lambda_max: i64,
}

impl FlagIdeal {
    /// Builds a flag ideal from `(lambda, slice)` pairs. The unit slice at
    /// `lambda_max` is implied and need not be listed.
    pub fn from_pairs(
        vars: usize,
        pairs: Vec<(i64, MonomialIdeal)>,
        lambda_max: i64,
    ) -> Result<Self, Error> {
        let mut terms: BTreeMap<i64, MonomialIdeal> = BTreeMap::new();
        for (lambda, ideal) in pairs {
            if ideal.vars() != vars {
                return Err(Error::ChartMismatch);
            }
            if lambda >= lambda_max && !ideal.is_unit() {
                return Err(Error::Invalid(
                    "slice at or beyond lambda_max must be the unit ideal".into(),
                ));
            }
            if lambda < lambda_max {
                terms.insert(lambda, ideal);
            }
        }
        terms.insert(lambda_max, MonomialIdeal::unit(vars));
        // increasing along lambda
        let slices: Vec<&MonomialIdeal> = terms.values().collect();
        for pair in slices.windows(2) {
            if !pair[0].subset_of(pair[1]) {
                return Err(Error::Invalid("flag-ideal slices must be increasing".into()));
            }
        }
        // drop slices equal to their predecessor
        let keys: Vec<i64> = terms.keys().copied().collect();
        for pair in keys.windows(2) {
            if terms[&pair[0]] == terms[&pair[1]] {
                terms.remove(&pair[1]);
            }
        }
        Ok(FlagIdeal {
            vars,
            terms,
            lambda_max,
        })
    }

    /// The unit flag ideal (trivial test configuration).
    pub fn unit(vars: usize) -> Self {
        FlagIdeal::from_pairs(vars, vec![], 0).unwrap()
    }

    /// `(1) t^k`: the constant shift by `-k`.
    pub fn t_power(vars: usize, k: i64) -> Self {
        FlagIdeal::from_pairs(vars, vec![], k).unwrap()
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn lambda_max(&self) -> i64 {
        self.lambda_max
    }

    pub fn slices(&self) -> impl Iterator<Item = (&i64, &MonomialIdeal)> {
        self.terms.iter()
    }

    /// The slice `a_lambda`.
    pub fn slice(&self, lambda: i64) -> MonomialIdeal {
        if lambda >= self.lambda_max {
            return MonomialIdeal::unit(self.vars);
        }
        match self.terms.range(..=lambda).next_back() {
            Some((_, ideal)) => ideal.clone(),
            None => MonomialIdeal::zero(self.vars),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.exponents()
            .iter()
            .any(|e| e.iter().all(|&x| x == 0))
    }

    /// Minimal generating exponents in `N^{n+1}`, the last coordinate being
    /// the `t`-degree. Breakpoint slices generate the whole ideal.
    pub fn exponents(&self) -> Vec<Vec<i64>> {
        let mut pts = Vec::new();
        for (&lambda, ideal) in &self.terms {
            for g in ideal.generators() {
                let mut e = g.clone();
                e.push(lambda);
                pts.push(e);
            }
        }
        crate::valuation::minimalize_exponents(pts)
    }

    /// Product of flag ideals: slicewise convolution, realized on exponents.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut pairs: BTreeMap<i64, MonomialIdeal> = BTreeMap::new();
        for (&la, ia) in &self.terms {
            for (&lb, ib) in &other.terms {
                let lam = la + lb;
                let prod = ia.product(ib);
                pairs
                    .entry(lam)
                    .and_modify(|acc| *acc = acc.sum(&prod))
                    .or_insert(prod);
            }
        }
        // accumulate: a slice also contains every lower breakpoint's content
        let mut acc = MonomialIdeal::zero(self.vars);
        let mut out = Vec::new();
        for (lam, ideal) in pairs {
            acc = acc.sum(&ideal);
            out.push((lam, acc.clone()));
        }
        let lambda_max = self.lambda_max + other.lambda_max;
        FlagIdeal::from_pairs(
            self.vars,
            out.into_iter().filter(|(l, _)| *l < lambda_max).collect(),
            lambda_max,
        )
        .expect("product of valid flag ideals is valid")
    }

    /// Sum of flag ideals: slicewise ideal sum.
    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut keys: Vec<i64> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        let lambda_max = self.lambda_max.min(other.lambda_max);
        let pairs: Vec<(i64, MonomialIdeal)> = keys
            .into_iter()
            .filter(|&l| l < lambda_max)
            .map(|l| (l, self.slice(l).sum(&other.slice(l))))
            .collect();
        FlagIdeal::from_pairs(self.vars, pairs, lambda_max)
            .expect("sum of valid flag ideals is valid")
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = FlagIdeal::unit(self.vars);
        for _ in 0..k {
            acc = acc.product(self);
        }
        acc
    }

    /// Shift by `t^s`: replaces every breakpoint `lambda` by `lambda + s`.
    pub fn t_shift(&self, s: i64) -> Self {
        let pairs = self
            .terms
            .iter()
            .filter(|(&l, _)| l < self.lambda_max)
            .map(|(&l, i)| (l + s, i.clone()))
            .collect();
        FlagIdeal::from_pairs(self.vars, pairs, self.lambda_max + s).unwrap()
    }
}

impl fmt::Display for FlagIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, i)| format!("{i}t^{l}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The Gauss extension of a finite weight: the `C*`-invariant valuation
/// with `v(t) = 1` restricting to the weight on `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussValuation {
    pub base: Weight,
}

impl GaussValuation {
    /// `sigma(v)(a) = min_lambda { v(a_lambda) + lambda }`.
    pub fn eval_flag(&self, a: &FlagIdeal) -> Result<TropicalValue, Error> {
        let mut out = TropicalValue::Infinity;
        for (&lambda, ideal) in &a.terms {
            let v = eval_valuation(&self.base, ideal)?;
            out = out.trop_add(&v.trop_mul(&TropicalValue::Finite(q(lambda))));
        }
        Ok(out)
    }

    /// The extended weight vector `(w, 1)` on the chart of `X x A^1`.
    pub fn extended_weight(&self) -> Option<Vec<Q>> {
        let mut w = self.base.finite_entries()?;
        w.push(Q::one());
        Some(w)
    }
}

/// Canonical lift of a finite weight to `X x P^1`.
pub fn gauss_extend(v: &Weight) -> Result<GaussValuation, Error> {
    if !v.is_finite() {
        return Err(Error::Invalid("Gauss extension needs a finite weight".into()));
    }
    Ok(GaussValuation { base: v.clone() })
}

/// Restriction to `X`: the value on `I . O_{X x P^1}`, which is `v(I)`.
pub fn restrict(v: &GaussValuation, ideal: &MonomialIdeal) -> Result<TropicalValue, Error> {
    eval_valuation(&v.base, ideal)
}

/// A PL function `(1/m1) phi_{a1} - (1/m2) phi_{a2} + c`, where
/// `phi_a(v) = -sigma(v)(a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PLFunction {
    vars: usize,
    plus: (FlagIdeal, u32),
    minus: (FlagIdeal, u32),
    constant: Q,
}

impl PLFunction {
    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn zero(vars: usize) -> Self {
        PLFunction {
            vars,
            plus: (FlagIdeal::unit(vars), 1),
            minus: (FlagIdeal::unit(vars), 1),
            constant: Q::zero(),
        }
    }

    pub fn constant(vars: usize, c: Q) -> Self {
        let mut f = PLFunction::zero(vars);
        f.constant = c;
        f
    }

    pub fn plus_part(&self) -> (&FlagIdeal, u32) {
        (&self.plus.0, self.plus.1)
    }

    pub fn minus_part(&self) -> (&FlagIdeal, u32) {
        (&self.minus.0, self.minus.1)
    }

    pub fn constant_part(&self) -> &Q {
        &self.constant
    }

    pub fn is_plus_cone(&self) -> bool {
        self.minus.0.is_unit()
    }

    /// Evaluation at a Gauss valuation.
    pub fn eval(&self, v: &GaussValuation) -> Result<Q, Error> {
        let a = v.eval_flag(&self.plus.0)?;
        let b = v.eval_flag(&self.minus.0)?;
        match (a.finite(), b.finite()) {
            (Some(a), Some(b)) => Ok(-a / q(self.plus.1 as i64) + b / q(self.minus.1 as i64)
                + self.constant.clone()),
            _ => Err(Error::Invalid("PL function infinite at this valuation".into())),
        }
    }

    /// Evaluation at a finite weight through its Gauss extension.
    pub fn eval_weight(&self, w: &Weight) -> Result<Q, Error> {
        self.eval(&gauss_extend(w)?)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let plus = combine_parts(&self.plus, &other.plus);
        let minus = combine_parts(&self.minus, &other.minus);
        PLFunction {
            vars: self.vars,
            plus,
            minus,
            constant: &self.constant + &other.constant,
        }
    }

    pub fn neg(&self) -> Self {
        PLFunction {
            vars: self.vars,
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            constant: -self.constant.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Value scaling by a positive rational, realized on powers and
    /// denominators.
    pub fn scale(&self, t: &Q) -> Result<Self, Error> {
        if !t.is_positive() {
            return Err(Error::Invalid("scale factor must be positive".into()));
        }
        let p = t.numer().to_u32_digits().1;
        let qd = t.denom().to_u32_digits().1;
        if p.len() > 1 || qd.len() > 1 {
            return Err(Error::Invalid("scale factor too large".into()));
        }
        let p = p.first().copied().unwrap_or(0);
        let qd = qd.first().copied().unwrap_or(1);
        let scale_part = |(a, m): &(FlagIdeal, u32)| -> (FlagIdeal, u32) {
            (a.pow(p), m.checked_mul(qd).expect("denominator overflow"))
        };
        Ok(PLFunction {
            vars: self.vars,
            plus: scale_part(&self.plus),
            minus: scale_part(&self.minus),
            constant: &self.constant * t,
        })
    }
}

fn combine_parts(a: &(FlagIdeal, u32), b: &(FlagIdeal, u32)) -> (FlagIdeal, u32) {
    let m = (a.1 as u64).lcm(&(b.1 as u64)) as u32;
    let fa = a.0.pow(m / a.1);
    let fb = b.0.pow(m / b.1);
    (fa.product(&fb), m)
}

/// `phi_a`: evaluation `v -> -sigma(v)(a)`.
pub fn phi_of_flag(a: &FlagIdeal) -> Result<PLFunction, Error> {
    Ok(PLFunction {
        vars: a.vars(),
        plus: (a.clone(), 1),
        minus: (FlagIdeal::unit(a.vars()), 1),
        constant: Q::zero(),
    })
}

/// Pointwise max on the PL-plus cone, realized by the flag-ideal sum.
pub fn pl_max(f: &PLFunction, g: &PLFunction) -> Result<PLFunction, Error> {
    if !f.is_plus_cone() || !g.is_plus_cone() {
        return Err(Error::MixedSignPL);
    }
    // normalize to a common denominator absorbing the constants, which must
    // become integral t-shifts
    let m = (f.plus.1 as u64).lcm(&(g.plus.1 as u64));
    let cf = &f.constant * q(m as i64);
    let cg = &g.constant * q(m as i64);
    if !cf.denom().is_one() || !cg.denom().is_one() {
        let extra = cf.denom().lcm(cg.denom());
        let extra: u64 = extra.to_u64_digits().1.first().copied().unwrap_or(1);
        return pl_max_denominator(f, g, m * extra);
    }
    pl_max_denominator(f, g, m)
}

fn pl_max_denominator(f: &PLFunction, g: &PLFunction, m: u64) -> Result<PLFunction, Error> {
    let lift = |h: &PLFunction| -> FlagIdeal {
        let power = h.plus.0.pow((m / h.plus.1 as u64) as u32);
        let shift = &h.constant * q(m as i64);
        debug_assert!(shift.denom().is_one());
        let s: i64 = shift.numer().try_into().expect("shift fits in i64");
        power.t_shift(-s)
    };
    let sum = lift(f).sum(&lift(g));
    phi_of_flag(&sum)?.scale(&Q::new(BigInt::one(), BigInt::from(m)))
}

/// Sum and scaling are the flag-ideal product and power laws.
pub fn pl_add(f: &PLFunction, g: &PLFunction) -> PLFunction {
    f.add(g)
}

pub fn pl_scale(f: &PLFunction, t: &Q) -> Result<PLFunction, Error> {
    f.scale(t)
}

/// The scaling action on functions: `(t . f)(v) = t f(t^{-1} v)`.
pub fn r_action(t: &Q, f: &PLFunction, v: &Weight) -> Result<Q, Error> {
    if !t.is_positive() {
        return Err(Error::Invalid("action parameter must be positive".into()));
    }
    let entries = v
        .finite_entries()
        .ok_or_else(|| Error::Invalid("action needs a finite weight".into()))?;
    let scaled = Weight::finite(v.chart.n, entries.into_iter().map(|x| x / t).collect())?;
    Ok(t * f.eval_weight(&scaled)?)
}

/// Rees valuations of a flag ideal: facet normals of its Newton polyhedron
/// in exponent space with positive `t`-component, normalized to `v(t) = 1`.
pub fn rees_valuations_flag(a: &FlagIdeal) -> Result<Vec<(GaussValuation, BigInt)>, Error> {
    if a.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let pts = a.exponents();
    if pts.iter().any(|e| *e.last().unwrap() < 0) {
        return Err(Error::Invalid("negative t-degrees have no blow-up model".into()));
    }
    let d = a.vars() + 1;
    let facets = crate::valuation::facets_of_exponents(d, &pts);
    let mut out = Vec::new();
    for f in facets {
        let b = f.normal.last().unwrap().clone();
        if !b.is_positive() {
            continue;
        }
        let w: Vec<Q> = f.normal[..d - 1]
            .iter()
            .map(|x| Q::new(x.clone(), b.clone()))
            .collect();
        out.push((
            GaussValuation {
                base: Weight::finite(a.vars(), w)?,
            },
            b,
        ));
    }
    if out.is_empty() {
        // degenerate polyhedra still meet the central fiber along t = 0
        out.push((
            GaussValuation {
                base: Weight::trivial(a.vars()),
            },
            BigInt::one(),
        ));
    }
    Ok(out)
}

/// `sup over X^beth of (1/m) phi_b - phi_a`, computed over the Rees
/// valuations of `a`, with the maximizer returned.
pub fn sup_formula(
    b: &FlagIdeal,
    m: u32,
    a: &FlagIdeal,
) -> Result<(Q, GaussValuation), Error> {
    if a.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let diff = phi_of_flag(b)?
        .scale(&Q::new(BigInt::one(), BigInt::from(m)))?
        .sub(&phi_of_flag(a)?);
    let mut best: Option<(Q, GaussValuation)> = None;
    for (v, _) in rees_valuations_flag(a)? {
        let value = diff.eval(&v)?;
        if best.as_ref().map_or(true, |(cur, _)| value > *cur) {
            best = Some((value, v));
        }
    }
    best.ok_or_else(|| Error::Invalid("no Rees valuations".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;

    fn mono(vars: usize, gens: Vec<Vec<i64>>) -> MonomialIdeal {
        MonomialIdeal::new(vars, gens).unwrap()
    }

    /// `(z) + (1)t` on the standard chart of `P^1`.
    pub(crate) fn deformation_p1() -> FlagIdeal {
        FlagIdeal::from_pairs(1, vec![(0, mono(1, vec![vec![1]]))], 1).unwrap()
    }

    fn ord0() -> GaussValuation {
        gauss_extend(&Weight::finite(1, vec![q(1)]).unwrap()).unwrap()
    }

    #[test]
    fn gauss_examples() {
        // (z^2) + (z)t + (1)t^2 at ord_0: min(2, 2, 2) = 2
        let a = FlagIdeal::from_pairs(
            1,
            vec![(0, mono(1, vec![vec![2]])), (1, mono(1, vec![vec![1]]))],
            2,
        )
        .unwrap();
        assert_eq!(ord0().eval_flag(&a).unwrap(), TropicalValue::Finite(q(2)));
        let triv = gauss_extend(&Weight::trivial(1)).unwrap();
        assert_eq!(
            triv.eval_flag(&deformation_p1()).unwrap(),
            TropicalValue::Finite(q(0))
        );
        let a2 = FlagIdeal::from_pairs(2, vec![(0, mono(2, vec![vec![1, 0], vec![0, 1]]))], 1)
            .unwrap();
        let v = gauss_extend(&Weight::finite(2, vec![q(1), q(1)]).unwrap()).unwrap();
        assert_eq!(v.eval_flag(&a2).unwrap(), TropicalValue::Finite(q(1)));
    }

    #[test]
    fn restriction_round_trip() {
        let i = mono(1, vec![vec![3]]);
        assert_eq!(
            restrict(&ord0(), &i).unwrap(),
            TropicalValue::Finite(q(3))
        );
        let triv = gauss_extend(&Weight::trivial(1)).unwrap();
        assert_eq!(restrict(&triv, &i).unwrap(), TropicalValue::Finite(q(0)));
        let v = gauss_extend(&Weight::finite(2, vec![q(2), q(3)]).unwrap()).unwrap();
        assert_eq!(
            restrict(&v, &mono(2, vec![vec![3, 0], vec![0, 2]])).unwrap(),
            TropicalValue::Finite(q(6))
        );
    }

    #[test]
    fn phi_examples() {
        let phi = phi_of_flag(&deformation_p1()).unwrap();
        let triv = gauss_extend(&Weight::trivial(1)).unwrap();
        assert_eq!(phi.eval(&triv).unwrap(), q(0));
        assert_eq!(phi.eval(&ord0()).unwrap(), q(-1));
        // (1)t^k is the constant -k
        let shift = phi_of_flag(&FlagIdeal::t_power(1, 3)).unwrap();
        assert_eq!(shift.eval(&triv).unwrap(), q(-3));
        assert_eq!(shift.eval(&ord0()).unwrap(), q(-3));
        let unit = phi_of_flag(&FlagIdeal::unit(1)).unwrap();
        assert_eq!(unit.eval(&ord0()).unwrap(), q(0));
    }

    #[test]
    fn max_and_calculus() {
        let ax = FlagIdeal::from_pairs(2, vec![(0, mono(2, vec![vec![1, 0]]))], 1).unwrap();
        let ay = FlagIdeal::from_pairs(2, vec![(0, mono(2, vec![vec![0, 1]]))], 1).unwrap();
        let axy =
            FlagIdeal::from_pairs(2, vec![(0, mono(2, vec![vec![1, 0], vec![0, 1]]))], 1).unwrap();
        let fmax = pl_max(&phi_of_flag(&ax).unwrap(), &phi_of_flag(&ay).unwrap()).unwrap();
        let expected = phi_of_flag(&axy).unwrap();
        for wx in 0..4 {
            for wy in 0..4 {
                let w = Weight::finite(2, vec![q(wx), q(wy)]).unwrap();
                assert_eq!(
                    fmax.eval_weight(&w).unwrap(),
                    expected.eval_weight(&w).unwrap()
                );
            }
        }
        // idempotence and the constant absorption law
        let f = phi_of_flag(&deformation_p1()).unwrap();
        let ff = pl_max(&f, &f).unwrap();
        let fc = pl_max(&f, &PLFunction::constant(1, q(-2))).unwrap();
        let absorbed =
            phi_of_flag(&deformation_p1().sum(&FlagIdeal::t_power(1, 2))).unwrap();
        for i in 0..8 {
            let w = Weight::finite(1, vec![frac(i, 2)]).unwrap();
            assert_eq!(ff.eval_weight(&w).unwrap(), f.eval_weight(&w).unwrap());
            assert_eq!(
                fc.eval_weight(&w).unwrap(),
                absorbed.eval_weight(&w).unwrap()
            );
        }
        assert!(pl_max(&f, &f.neg()).is_err());
        // product/power laws
        let a = deformation_p1();
        let sum = pl_add(&phi_of_flag(&a).unwrap(), &phi_of_flag(&a).unwrap());
        let prod = phi_of_flag(&a.product(&a)).unwrap();
        let double = pl_scale(&phi_of_flag(&a).unwrap(), &q(2)).unwrap();
        let half = pl_scale(&phi_of_flag(&a.pow(2)).unwrap(), &frac(1, 2)).unwrap();
        for i in 0..6 {
            let w = Weight::finite(1, vec![frac(i, 3)]).unwrap();
            let base = phi_of_flag(&a).unwrap().eval_weight(&w).unwrap();
            assert_eq!(sum.eval_weight(&w).unwrap(), &base * q(2));
            assert_eq!(prod.eval_weight(&w).unwrap(), &base * q(2));
            assert_eq!(double.eval_weight(&w).unwrap(), &base * q(2));
            assert_eq!(half.eval_weight(&w).unwrap(), base);
        }
    }

    #[test]
    fn action_examples() {
        // phi of an ideal pulled back from X is fixed by the action
        let xonly = FlagIdeal::from_pairs(
            1,
            vec![(0, mono(1, vec![vec![1]])), (3, mono(1, vec![vec![0]]))],
            3,
        )
        .unwrap();
        let f = phi_of_flag(&xonly).unwrap();
        let w = Weight::finite(1, vec![q(1)]).unwrap();
        // at w=1 the x-term dominates for both t=1 and t=2
        assert_eq!(r_action(&q(1), &f, &w).unwrap(), f.eval_weight(&w).unwrap());
        let c = PLFunction::constant(1, q(-1));
        assert_eq!(r_action(&q(2), &c, &w).unwrap(), q(-2));
    }

    #[test]
    fn sup_formula_examples() {
        let a = deformation_p1();
        let (sup, _) = sup_formula(&a, 1, &a).unwrap();
        assert_eq!(sup, q(0));
        let (sup, _) = sup_formula(&a.pow(2), 2, &a).unwrap();
        assert_eq!(sup, q(0));
        // P^2: b = (x)+(1)t against a = (x,y)+(1)t, sup 0 at the (1,1,1) ray
        let a2 =
            FlagIdeal::from_pairs(2, vec![(0, mono(2, vec![vec![1, 0], vec![0, 1]]))], 1).unwrap();
        let b2 = FlagIdeal::from_pairs(2, vec![(0, mono(2, vec![vec![1, 0]]))], 1).unwrap();
        let (sup, arg) = sup_formula(&b2, 1, &a2).unwrap();
        assert_eq!(sup, q(0));
        // the maximizer attains the sup, and (1,1) is among the Rees points
        let diff = phi_of_flag(&b2)
            .unwrap()
            .sub(&phi_of_flag(&a2).unwrap());
        assert_eq!(diff.eval(&arg).unwrap(), sup);
        assert!(rees_valuations_flag(&a2)
            .unwrap()
            .iter()
            .any(|(v, _)| v.base.finite_entries().unwrap() == vec![q(1), q(1)]));
        // grid points never exceed the Rees max
        for wx in 0..4 {
            for wy in 0..4 {
                let w = Weight::finite(2, vec![q(wx), q(wy)]).unwrap();
                assert!(diff.eval_weight(&w).unwrap() <= sup);
            }
        }
        assert!(matches!(
            sup_formula(&a, 1, &FlagIdeal::unit(1)),
            Err(Error::UnitIdeal)
        ));
    }
}
