//! Energy, entropy and the Mabuchi functional for PL metrics on
//! `(P^n, a H)`, together with Monge-Ampere measures, the Zariski-type
//! negativity check, and the coercivity scanner.

use num_traits::{One, Signed, Zero};

use crate::flag::{FlagIdeal, GaussValuation, PLFunction};
use crate::intersect::{
    divisor_class, hyperplane_class, intersection_number, Engine, ToricClass,
};
use crate::rat::{q, Q};
use crate::testconfig::{build_testconfig, pl_to_divisor, ToricTestConfig};
use crate::Error;

/// The ambient polarization `alpha = a H` on `P^n`, with the engine used
/// for every intersection number.
#[derive(Clone, Debug)]
pub struct KahlerSetup {
    pub n: usize,
    pub a: Q,
    pub engine: Engine,
}

impl KahlerSetup {
    pub fn new(n: usize, a: Q) -> Result<Self, Error> {
        if n == 0 || n > 3 {
            return Err(Error::Invalid("only P^1, P^2 and P^3 are supported".into()));
        }
        if !a.is_positive() {
            return Err(Error::Invalid("the polarization degree must be positive".into()));
        }
        Ok(KahlerSetup {
            n,
            a,
            engine: Engine::Tropical,
        })
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    /// `V = alpha^n = a^n`.
    pub fn volume(&self) -> Q {
        let mut v = Q::one();
        for _ in 0..self.n {
            v *= &self.a;
        }
        v
    }

    /// Mean scalar curvature `n(n+1)/a` of the Fano polarization.
    pub fn sbar(&self) -> Q {
        q((self.n * (self.n + 1)) as i64) / &self.a
    }
}

/// A model on which all the given functions are linear: the test
/// configuration of the product of every flag involved.
pub fn model_for(funcs: &[&PLFunction]) -> Result<ToricTestConfig, Error> {
    let vars = funcs
        .first()
        .ok_or_else(|| Error::Invalid("no functions given".into()))?
        .vars();
    let mut prod = FlagIdeal::unit(vars);
    let mut seen: Vec<&FlagIdeal> = Vec::new();
    for f in funcs {
        if f.vars() != vars {
            return Err(Error::ChartMismatch);
        }
        for part in [f.plus_part().0, f.minus_part().0] {
            if part.is_unit() || seen.contains(&part) {
                continue;
            }
            seen.push(part);
            prod = prod.product(part);
        }
    }
    build_testconfig(&prod)
}

fn alpha_class(setup: &KahlerSetup, tc: &ToricTestConfig) -> ToricClass {
    hyperplane_class(&tc.fan, &setup.a)
}

fn metric_class(
    setup: &KahlerSetup,
    tc: &ToricTestConfig,
    f: &PLFunction,
) -> Result<ToricClass, Error> {
    Ok(alpha_class(setup, tc).add(&divisor_class(tc, &pl_to_divisor(tc, f)?)))
}

fn slot_class(
    tc: &ToricTestConfig,
    beta: &Q,
    f: &PLFunction,
) -> Result<ToricClass, Error> {
    Ok(hyperplane_class(&tc.fan, beta).add(&divisor_class(tc, &pl_to_divisor(tc, f)?)))
}

/// The general energy pairing `(beta_0, phi_0) ... (beta_n, phi_n)` on a
/// common model, where each class is the given rational multiple of `H`.
pub fn pairing(setup: &KahlerSetup, slots: &[(Q, &PLFunction)]) -> Result<Q, Error> {
    if slots.len() != setup.n + 1 {
        return Err(Error::Invalid(format!(
            "the energy pairing takes {} slots",
            setup.n + 1
        )));
    }
    let funcs: Vec<&PLFunction> = slots.iter().map(|(_, f)| *f).collect();
    let tc = model_for(&funcs)?;
    let classes = slots
        .iter()
        .map(|(b, f)| slot_class(&tc, b, f))
        .collect::<Result<Vec<_>, _>>()?;
    intersection_number(&tc.fan, &classes, setup.engine)
}

/// The intersection pairing `(alpha, phi_0) ... (alpha, phi_n)` on a
/// common model: the basic multilinear energy pairing.
pub fn energy_pairing(setup: &KahlerSetup, funcs: &[&PLFunction]) -> Result<Q, Error> {
    let slots: Vec<(Q, &PLFunction)> =
        funcs.iter().map(|f| (setup.a.clone(), *f)).collect();
    pairing(setup, &slots)
}

/// Monge-Ampere energy `E(phi) = (alpha,phi)^{n+1} / ((n+1) V)`.
pub fn energy(setup: &KahlerSetup, f: &PLFunction) -> Result<Q, Error> {
    let funcs: Vec<&PLFunction> = std::iter::repeat(f).take(setup.n + 1).collect();
    Ok(energy_pairing(setup, &funcs)? / (q((setup.n + 1) as i64) * setup.volume()))
}

/// Twisted energy against `zeta = -(n+1) H`:
/// `E^zeta(phi) = zeta . (alpha,phi)^n / V`.
pub fn twisted_energy(setup: &KahlerSetup, f: &PLFunction) -> Result<Q, Error> {
    let tc = model_for(&[f])?;
    let m = metric_class(setup, &tc, f)?;
    let zeta = hyperplane_class(&tc.fan, &-q((setup.n + 1) as i64));
    let mut classes = vec![zeta];
    classes.extend(std::iter::repeat(m).take(setup.n));
    Ok(intersection_number(&tc.fan, &classes, setup.engine)? / setup.volume())
}

/// The Monge-Ampere measure of a PL metric: an atomic measure on the
/// Gauss-type valuations of the model's vertical rays, of total mass one.
#[derive(Clone, Debug, PartialEq)]
pub struct MAMeasure {
    pub atoms: Vec<(GaussValuation, Q)>,
}

impl MAMeasure {
    pub fn total_mass(&self) -> Q {
        self.atoms.iter().map(|(_, m)| m.clone()).sum()
    }

    pub fn integrate(&self, f: &PLFunction) -> Result<Q, Error> {
        let mut out = Q::zero();
        for (v, m) in &self.atoms {
            out += m * f.eval(v)?;
        }
        Ok(out)
    }
}

/// `MA(phi) = V^{-1} sum_E b_E ((alpha,phi)^n . E) delta_{v_E}`.
pub fn ma_measure(setup: &KahlerSetup, f: &PLFunction) -> Result<MAMeasure, Error> {
    let tc = model_for(&[f])?;
    let m = metric_class(setup, &tc, f)?;
    let v = setup.volume();
    let mut atoms = Vec::new();
    for vert in &tc.vertical {
        let e = crate::intersect::ray_divisor_class(&tc.fan, vert.ray, &Q::one());
        let mut classes = vec![e];
        classes.extend(std::iter::repeat(m.clone()).take(setup.n));
        let mass = Q::from_integer(vert.b.clone())
            * intersection_number(&tc.fan, &classes, setup.engine)?
            / &v;
        atoms.push((vert.valuation.clone(), mass));
    }
    Ok(MAMeasure { atoms })
}

/// `J(phi, psi) = E(phi) - E(psi) + int (psi - phi) MA(phi)`.
pub fn j_functional(setup: &KahlerSetup, f: &PLFunction, g: &PLFunction) -> Result<Q, Error> {
    let ma_f = ma_measure(setup, f)?;
    Ok(energy(setup, f)? - energy(setup, g)? + ma_f.integrate(g)? - ma_f.integrate(f)?)
}

/// `I(phi, psi) = int (phi - psi) (MA(psi) - MA(phi))`.
pub fn i_functional(setup: &KahlerSetup, f: &PLFunction, g: &PLFunction) -> Result<Q, Error> {
    let ma_f = ma_measure(setup, f)?;
    let ma_g = ma_measure(setup, g)?;
    Ok(ma_g.integrate(f)? - ma_g.integrate(g)? - ma_f.integrate(f)? + ma_f.integrate(g)?)
}

/// The squared seminorm `|psi|_Gamma^2 = -(0,psi)^2 . Gamma`, where
/// `Gamma` is the product of `n - 1` slots `(beta_i, phi_i)`.
pub fn seminorm_sq(
    setup: &KahlerSetup,
    psi: &PLFunction,
    gamma: &[(Q, &PLFunction)],
) -> Result<Q, Error> {
    if gamma.len() != setup.n - 1 {
        return Err(Error::Invalid(format!(
            "the seminorm takes {} background slots",
            setup.n - 1
        )));
    }
    let mut all = vec![psi];
    all.extend(gamma.iter().map(|(_, f)| *f));
    let tc = model_for(&all)?;
    let d = divisor_class(&tc, &pl_to_divisor(&tc, psi)?);
    let mut classes = vec![d.clone(), d];
    for (b, g) in gamma {
        classes.push(slot_class(&tc, b, g)?);
    }
    Ok(-intersection_number(&tc.fan, &classes, setup.engine)?)
}

/// Log discrepancy of a Gauss-type valuation on `X x P^1`:
/// `A(sigma(w)) = 1 + sum w_i`.
pub fn log_discrepancy(v: &GaussValuation) -> Result<Q, Error> {
    let w = v
        .base
        .finite_entries()
        .ok_or_else(|| Error::Invalid("log discrepancy needs a finite weight".into()))?;
    Ok(Q::one() + w.into_iter().sum::<Q>())
}

/// Entropy `H(phi) = int A dMA(phi)`.
pub fn entropy(setup: &KahlerSetup, f: &PLFunction) -> Result<Q, Error> {
    let ma = ma_measure(setup, f)?;
    let mut out = Q::zero();
    for (v, m) in &ma.atoms {
        out += m * log_discrepancy(v)?;
    }
    Ok(out)
}

/// Mabuchi functional `M = sbar E + E^zeta + H`.
pub fn mabuchi(setup: &KahlerSetup, f: &PLFunction) -> Result<Q, Error> {
    Ok(setup.sbar() * energy(setup, f)? + twisted_energy(setup, f)? + entropy(setup, f)?)
}

/// Gram matrix `G_ij = (0, psi_i)(0, psi_j) . Gamma` of a basis of PL
/// functions against `n - 1` background slots, together with its exact
/// negative-semi-definiteness verdict (the Zariski-type lemma).
pub fn zariski_gram(
    setup: &KahlerSetup,
    basis: &[&PLFunction],
    gamma: &[(Q, &PLFunction)],
) -> Result<(Vec<Vec<Q>>, bool), Error> {
    if gamma.len() != setup.n - 1 {
        return Err(Error::Invalid(format!(
            "the Gram pairing takes {} background slots",
            setup.n - 1
        )));
    }
    let mut all: Vec<&PLFunction> = basis.to_vec();
    all.extend(gamma.iter().map(|(_, f)| *f));
    let tc = model_for(&all)?;
    let ds = basis
        .iter()
        .map(|f| Ok(divisor_class(&tc, &pl_to_divisor(&tc, f)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let gs = gamma
        .iter()
        .map(|(b, g)| slot_class(&tc, b, g))
        .collect::<Result<Vec<_>, _>>()?;
    let k = basis.len();
    let mut gram = vec![vec![Q::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let mut classes = vec![ds[i].clone(), ds[j].clone()];
            classes.extend(gs.iter().cloned());
            let x = intersection_number(&tc.fan, &classes, setup.engine)?;
            gram[i][j] = x.clone();
            gram[j][i] = x;
        }
    }
    let verdict = is_nsd(&gram);
    Ok((gram, verdict))
}

/// Gram matrix of the vertical components `E_i . E_j . (alpha,phi)^{n-1}`
/// on the model of `phi`, with the multiplicities `b_i` (a strictly
/// positive kernel vector, since the central fiber is numerically a fiber).
pub fn vertical_gram(
    setup: &KahlerSetup,
    f: &PLFunction,
) -> Result<(Vec<Vec<Q>>, Vec<Q>, ToricTestConfig), Error> {
    let tc = model_for(&[f])?;
    let m = metric_class(setup, &tc, f)?;
    let k = tc.vertical.len();
    let mut gram = vec![vec![Q::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let ei = crate::intersect::ray_divisor_class(&tc.fan, tc.vertical[i].ray, &Q::one());
            let ej = crate::intersect::ray_divisor_class(&tc.fan, tc.vertical[j].ray, &Q::one());
            let mut classes = vec![ei, ej];
            classes.extend(std::iter::repeat(m.clone()).take(setup.n - 1));
            let x = intersection_number(&tc.fan, &classes, setup.engine)?;
            gram[i][j] = x.clone();
            gram[j][i] = x;
        }
    }
    let bs = tc
        .vertical
        .iter()
        .map(|v| Q::from_integer(v.b.clone()))
        .collect();
    Ok((gram, bs, tc))
}

/// Negative semi-definiteness by exact symmetric Gaussian elimination.
pub fn is_nsd(mat: &[Vec<Q>]) -> bool {
    let n = mat.len();
    let mut m: Vec<Vec<Q>> = mat.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&k) = active.first() {
        let d = m[k][k].clone();
        if d.is_positive() {
            return false;
        }
        if d.is_zero() {
            // a zero diagonal needs a zero row on the active block
            if active.iter().any(|&j| !m[k][j].is_zero()) {
                return false;
            }
            active.remove(0);
            continue;
        }
        for &i in &active[1..] {
            let f = &m[i][k] / &d;
            for &j in &active[1..] {
                let delta = &f * &m[k][j];
                m[i][j] = &m[i][j] - delta;
            }
        }
        active.remove(0);
    }
    true
}

/// Independent negativity verdict through the characteristic polynomial
/// of `-B` (Faddeev-LeVerrier): `B` is NSD exactly when every elementary
/// symmetric function of the eigenvalues of `-B` is nonnegative. The
/// hypotheses of the connectedness lemma (symmetric, nonnegative off the
/// diagonal, annihilating a strictly positive vector) are checked first
/// and named on failure; under them the verdict is always `true`.
pub fn bilinear_nsd_check(mat: &[Vec<Q>], kernel_vector: &[Q]) -> Result<bool, Error> {
    let n = mat.len();
    if mat.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition("the bilinear form is not square".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if mat[i][j] != mat[j][i] {
                return Err(Error::Precondition(
                    "the bilinear form is not symmetric".into(),
                ));
            }
            if i != j && mat[i][j].is_negative() {
                return Err(Error::Precondition(
                    "an off-diagonal entry is negative".into(),
                ));
            }
        }
    }
    if kernel_vector.len() != n {
        return Err(Error::Precondition(
            "the kernel vector has the wrong length".into(),
        ));
    }
    if kernel_vector.iter().any(|x| !x.is_positive()) {
        return Err(Error::Precondition(
            "the kernel vector is not strictly positive".into(),
        ));
    }
    for row in mat {
        let s: Q = row.iter().zip(kernel_vector).map(|(a, b)| a * b).sum();
        if !s.is_zero() {
            return Err(Error::Precondition(
                "the kernel vector is not annihilated by the form".into(),
            ));
        }
    }
    // Faddeev-LeVerrier on B' = -B: char(t) = t^n + c_1 t^{n-1} + .. + c_n,
    // and B' is PSD iff (-1)^k c_k ... with our sign bookkeeping: all the
    // auxiliary coefficients of det(tI - B') alternate; equivalently every
    // elementary symmetric function of the eigenvalues of B' is >= 0.
    let b: Vec<Vec<Q>> = mat
        .iter()
        .map(|r| r.iter().map(|x| -x.clone()).collect())
        .collect();
    let ident = |n: usize| -> Vec<Vec<Q>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect()
    };
    let matmul = |a: &Vec<Vec<Q>>, c: &Vec<Vec<Q>>| -> Vec<Vec<Q>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &a[i][k] * &c[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    let trace = |a: &Vec<Vec<Q>>| -> Q { (0..n).map(|i| a[i][i].clone()).sum() };
    let mut m = ident(n);
    let mut coeffs: Vec<Q> = Vec::new(); // c_k with det(tI - B') = sum c_k t^{n-k}
    for k in 1..=n {
        let am = matmul(&b, &m);
        let c = -trace(&am) / q(k as i64);
        // m_{k} = A m_{k-1} + c_k I
        m = am;
        for i in 0..n {
            m[i][i] += &c;
        }
        coeffs.push(c);
    }
    // e_k = (-1)^k c_k must be nonnegative for PSD
    Ok(coeffs.iter().enumerate().all(|(i, c)| {
        let e = if (i + 1) % 2 == 0 { c.clone() } else { -c.clone() };
        !e.is_negative()
    }))
}

/// One row of the scanner report.
#[derive(Clone, Debug)]
pub struct ScanEntry {
    pub index: usize,
    pub mabuchi: Q,
    pub j: Q,
    pub ratio: Option<Q>,
}

/// Result of a coercivity scan: the minimal Mabuchi-to-J ratio over the
/// family and its witness, skipping (with a warning) members with
/// vanishing J.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub entries: Vec<ScanEntry>,
    pub delta: Q,
    pub witness: usize,
    pub skipped: Vec<usize>,
    pub verdict: String,
}

pub fn coercivity_scan(setup: &KahlerSetup, family: &[PLFunction]) -> Result<ScanReport, Error> {
    if family.is_empty() {
        return Err(Error::Invalid("coercivity scan over an empty family".into()));
    }
    let zero = PLFunction::zero(family[0].vars());
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    let mut best: Option<(usize, Q)> = None;
    for (index, f) in family.iter().enumerate() {
        let m = mabuchi(setup, f)?;
        let jval = j_functional(setup, f, &zero)?;
        let ratio = if jval.is_zero() {
            skipped.push(index);
            None
        } else {
            let r = &m / &jval;
            if best.as_ref().map_or(true, |(_, b)| r < *b) {
                best = Some((index, r.clone()));
            }
            Some(r)
        };
        entries.push(ScanEntry {
            index,
            mabuchi: m,
            j: jval,
            ratio,
        });
    }
    let (witness, delta) = best.ok_or_else(|| {
        Error::Invalid("every member of the family has vanishing J".into())
    })?;
    let verdict = if delta.is_positive() {
        "no destabilizer found in family".to_string()
    } else {
        format!("destabilizer at index {witness}")
    };
    Ok(ScanReport {
        entries,
        delta,
        witness,
        skipped,
        verdict,
    })
}

/// All the functionals of a single metric in one report, with both
/// entropy normalizations.
#[derive(Clone, Debug)]
pub struct EnergyReport {
    pub energy: Q,
    pub twisted_energy: Q,
    pub j: Q,
    pub i: Q,
    pub entropy: Q,
    /// entropy against `A - 1`, vanishing on the trivial metric
    pub entropy_relative: Q,
    pub mabuchi: Q,
    pub mj_ratio: Option<Q>,
}

pub fn energy_report(setup: &KahlerSetup, f: &PLFunction) -> Result<EnergyReport, Error> {
    let zero = PLFunction::zero(f.vars());
    let e = energy(setup, f)?;
    let tw = twisted_energy(setup, f)?;
    let jv = j_functional(setup, f, &zero)?;
    let iv = i_functional(setup, f, &zero)?;
    let h = entropy(setup, f)?;
    let m = setup.sbar() * &e + &tw + &h;
    let ratio = if jv.is_zero() { None } else { Some(&m / &jv) };
    Ok(EnergyReport {
        energy: e,
        twisted_energy: tw,
        j: jv,
        i: iv,
        entropy: h.clone(),
        entropy_relative: h - Q::one(),
        mabuchi: m,
        mj_ratio: ratio,
    })
}

/// Energies along a sequence of metrics, for monotonicity experiments.
pub fn energy_sequence(setup: &KahlerSetup, funcs: &[PLFunction]) -> Result<Vec<Q>, Error> {
    funcs.iter().map(|f| energy(setup, f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{phi_of_flag, pl_max};
    use crate::rat::frac;
    use crate::valuation::{MonomialIdeal, Weight};

    fn mono(vars: usize, gens: Vec<Vec<i64>>) -> MonomialIdeal {
        MonomialIdeal::new(vars, gens).unwrap()
    }

    fn phi_p1() -> PLFunction {
        phi_of_flag(&FlagIdeal::from_pairs(1, vec![(0, mono(1, vec![vec![1]]))], 1).unwrap())
            .unwrap()
    }

    fn phi_p2() -> PLFunction {
        phi_of_flag(
            &FlagIdeal::from_pairs(2, vec![(0, mono(2, vec![vec![1, 0], vec![0, 1]]))], 1)
                .unwrap(),
        )
        .unwrap()
    }

    fn setup(n: usize) -> KahlerSetup {
        KahlerSetup::new(n, q(1)).unwrap().with_engine(Engine::CrossCheck)
    }

    #[test]
    fn p1_golden_values() {
        let s = setup(1);
        let f = phi_p1();
        let ma = ma_measure(&s, &f).unwrap();
        assert_eq!(ma.total_mass(), q(1));
        for (v, m) in &ma.atoms {
            let w = v.base.finite_entries().unwrap();
            if w == vec![q(1)] {
                assert_eq!(*m, q(1));
            } else {
                assert_eq!(*m, q(0));
            }
        }
        assert_eq!(energy(&s, &f).unwrap(), frac(-1, 2));
        assert_eq!(twisted_energy(&s, &f).unwrap(), q(0));
        let zero = PLFunction::zero(1);
        assert_eq!(j_functional(&s, &f, &zero).unwrap(), frac(1, 2));
        assert_eq!(i_functional(&s, &f, &zero).unwrap(), q(1));
        assert_eq!(seminorm_sq(&s, &f, &[]).unwrap(), q(1));
        assert_eq!(entropy(&s, &f).unwrap(), q(2));
        assert_eq!(s.sbar(), q(2));
        assert_eq!(mabuchi(&s, &f).unwrap(), q(1));
        let rep = energy_report(&s, &f).unwrap();
        assert_eq!(rep.mj_ratio, Some(q(2)));
        assert_eq!(rep.entropy_relative, q(1));
    }

    #[test]
    fn p2_golden_values() {
        let s = setup(2);
        let f = phi_p2();
        assert_eq!(energy(&s, &f).unwrap(), frac(-1, 3));
        let zero = PLFunction::zero(2);
        assert_eq!(j_functional(&s, &f, &zero).unwrap(), frac(2, 3));
        assert_eq!(entropy(&s, &f).unwrap(), q(3));
        assert_eq!(s.sbar(), q(6));
        assert_eq!(mabuchi(&s, &f).unwrap(), q(1));
        assert_eq!(energy_report(&s, &f).unwrap().mj_ratio, Some(frac(3, 2)));
    }

    #[test]
    fn normalization_and_trivial_measure() {
        let s = setup(1);
        // MA(0) is the Dirac mass at the trivial valuation
        let zero = PLFunction::zero(1);
        let ma0 = ma_measure(&s, &zero).unwrap();
        assert_eq!(ma0.atoms.len(), 1);
        assert!(ma0.atoms[0].0.base.is_trivial());
        assert_eq!(ma0.atoms[0].1, q(1));
        assert_eq!(energy(&s, &zero).unwrap(), q(0));
        // E(phi + c) = E(phi) + c
        let f = phi_p1();
        let c = PLFunction::constant(1, frac(3, 4));
        assert_eq!(
            energy(&s, &f.add(&c)).unwrap(),
            energy(&s, &f).unwrap() + frac(3, 4)
        );
        assert_eq!(energy(&s, &c).unwrap(), frac(3, 4));
        // the J and I functionals kill constants
        assert_eq!(j_functional(&s, &f.add(&c), &zero).unwrap(), frac(1, 2));
        assert_eq!(i_functional(&s, &f.add(&c), &zero).unwrap(), q(1));
    }

    #[test]
    fn energy_monotone_along_maxes() {
        let s = setup(1);
        let f = phi_p1();
        // max(phi, -t) decreases to phi as t grows
        let seq: Vec<PLFunction> = [q(0), frac(1, 2), q(1)]
            .iter()
            .map(|t| pl_max(&f, &PLFunction::constant(1, -t.clone())).unwrap())
            .collect();
        let es = energy_sequence(&s, &seq).unwrap();
        assert!(es[0] >= es[1] && es[1] >= es[2]);
        assert_eq!(es[2], energy(&s, &f).unwrap());
        assert_eq!(es[0], q(0));
    }

    #[test]
    fn zariski_negativity() {
        let s = setup(1);
        let f = phi_p1();
        // Gram of the vertical components on the blow-up of a product
        // surface: [[-1, 1], [1, -1]] with kernel (1, 1)
        let (vgram, bs, tc) = vertical_gram(&s, &f).unwrap();
        assert_eq!(vgram.len(), tc.vertical.len());
        let mut sorted: Vec<Q> = vgram.iter().flatten().cloned().collect();
        sorted.sort();
        assert_eq!(sorted, vec![q(-1), q(-1), q(1), q(1)]);
        assert!(is_nsd(&vgram));
        assert!(bilinear_nsd_check(&vgram, &bs).unwrap());
        // PL-function bases: {phi} gives [-1], a constant gives [0]
        let (g1, nsd1) = zariski_gram(&s, &[&f], &[]).unwrap();
        assert_eq!(g1, vec![vec![q(-1)]]);
        assert!(nsd1);
        let one = PLFunction::constant(1, q(1));
        let (g0, nsd0) = zariski_gram(&s, &[&one], &[]).unwrap();
        assert_eq!(g0, vec![vec![q(0)]]);
        assert!(nsd0);
        // direct NSD test paths
        assert!(bilinear_nsd_check(
            &vec![
                vec![q(-2), q(1), q(1)],
                vec![q(1), q(-2), q(1)],
                vec![q(1), q(1), q(-2)],
            ],
            &[q(1), q(1), q(1)],
        )
        .unwrap());
        assert!(!is_nsd(&vec![vec![q(1), q(0)], vec![q(0), q(-1)]]));
        // hypothesis failures are named
        assert!(matches!(
            bilinear_nsd_check(&vec![vec![q(1)]], &[q(1)]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            bilinear_nsd_check(&vec![vec![q(0), q(1)], vec![q(2), q(0)]], &[q(1), q(1)]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            bilinear_nsd_check(&vgram, &[q(1), q(-1)]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn scanning() {
        let s = setup(1);
        let family = vec![
            phi_p1(),
            PLFunction::constant(1, q(1)),
            phi_of_flag(&FlagIdeal::from_pairs(1, vec![(0, mono(1, vec![vec![2]]))], 1).unwrap())
                .unwrap(),
        ];
        let report = coercivity_scan(&s, &family).unwrap();
        assert_eq!(report.skipped, vec![1]);
        // index 0: M = 1, J = 1/2; index 2: M = 0, J = 1
        assert_eq!(report.entries[0].ratio, Some(q(2)));
        assert_eq!(report.entries[2].mabuchi, q(0));
        assert_eq!(report.entries[2].j, q(1));
        assert_eq!((report.witness, report.delta), (2, q(0)));
        assert_eq!(report.verdict, "destabilizer at index 2");
        assert!(coercivity_scan(&s, &[]).is_err());
        // log discrepancies on the blow-up model
        let v = GaussValuation {
            base: Weight::finite(1, vec![q(1)]).unwrap(),
        };
        assert_eq!(log_discrepancy(&v).unwrap(), q(2));
    }
}
