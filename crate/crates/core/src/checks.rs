//! Seeded property suites: every randomized invariant of the library in
//! one deterministic, reportable run.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::flag::{
    gauss_extend, phi_of_flag, pl_add, pl_scale, rees_valuations_flag, restrict, sup_formula,
    FlagIdeal, GaussValuation, PLFunction,
};
use crate::functionals::{
    bilinear_nsd_check, is_nsd, log_discrepancy, ma_measure, pairing, vertical_gram,
    zariski_gram, KahlerSetup,
};
use crate::intersect::{
    divisor_class, hyperplane_class, intersection_number, is_relatively_nef, Engine, ToricClass,
};
use crate::linalg::solve_square;
use crate::rat::{frac, q, Q};
use crate::testconfig::{
    build_testconfig, divisor_to_pl, pl_to_divisor, refine_testconfig, retraction,
    ToricTestConfig, VerticalDivisor,
};
use crate::valuation::{eval_valuation, integral_closure, MonomialIdeal, Weight};
use crate::Error;

/// Outcome of one property suite.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn rand_exponent(rng: &mut ChaCha8Rng, max: i64) -> i64 {
    rng.gen_range(0..=max)
}

/// A nonzero monomial ideal with no constant generator.
fn rand_proper_ideal(rng: &mut ChaCha8Rng, vars: usize, max: i64) -> MonomialIdeal {
    loop {
        let gens: Vec<Vec<i64>> = (0..rng.gen_range(1..=3))
            .map(|_| (0..vars).map(|_| rand_exponent(rng, max)).collect())
            .collect();
        if gens.iter().all(|g| g.iter().any(|e| *e > 0)) {
            return MonomialIdeal::new(vars, gens).unwrap();
        }
    }
}

fn rand_ideal(rng: &mut ChaCha8Rng, vars: usize, max: i64) -> MonomialIdeal {
    let gens: Vec<Vec<i64>> = (0..rng.gen_range(1..=3))
        .map(|_| (0..vars).map(|_| rand_exponent(rng, max)).collect())
        .collect();
    MonomialIdeal::new(vars, gens).unwrap()
}

fn rand_weight(rng: &mut ChaCha8Rng, n: usize) -> Weight {
    let entries = (0..n)
        .map(|_| frac(rng.gen_range(0..=4), rng.gen_range(1..=2)))
        .collect();
    Weight::finite(n, entries).unwrap()
}

/// A flag ideal with two breakpoints: `(a b) + (a) t + (1) t^2`.
fn rand_flag(rng: &mut ChaCha8Rng, vars: usize, max: i64) -> FlagIdeal {
    let a = rand_proper_ideal(rng, vars, max);
    let b = rand_proper_ideal(rng, vars, max);
    FlagIdeal::from_pairs(vars, vec![(0, a.product(&b)), (1, a)], 2).unwrap()
}

/// A psh PL function together with a polarization degree making its
/// metric class relatively nef on its own model, found by doubling.
fn rand_nef_pl(
    rng: &mut ChaCha8Rng,
    vars: usize,
    max: i64,
) -> Result<(PLFunction, Q, ToricTestConfig), Error> {
    let f = phi_of_flag(&rand_flag(rng, vars, max))?;
    let tc = build_testconfig(f.plus_part().0)?;
    let d = divisor_class(&tc, &pl_to_divisor(&tc, &f)?);
    let mut a = q(1);
    for _ in 0..12 {
        let c = hyperplane_class(&tc.fan, &a).add(&d);
        if is_relatively_nef(&tc.fan, &c)? {
            return Ok((f, a, tc));
        }
        a *= q(2);
    }
    Err(Error::Invalid("no relatively nef polarization found".into()))
}

fn run_check(name: &str, body: impl FnOnce() -> Result<String, String>) -> CheckResult {
    match body() {
        Ok(detail) => CheckResult {
            name: name.into(),
            pass: true,
            detail,
        },
        Err(detail) => CheckResult {
            name: name.into(),
            pass: false,
            detail,
        },
    }
}

fn err_str(e: Error) -> String {
    e.to_string()
}

/// Monge-Ampere measures of psh PL metrics are probability measures.
pub fn check_probability_measure(seed: u64) -> CheckResult {
    run_check("probability-measure", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
        let mut count = 0;
        for n in [1usize, 2] {
            for _ in 0..25 {
                let (f, a, _) = rand_nef_pl(&mut rng, n, 2).map_err(err_str)?;
                let setup = KahlerSetup::new(n, a).map_err(err_str)?;
                let ma = ma_measure(&setup, &f).map_err(err_str)?;
                if ma.total_mass() != q(1) {
                    return Err(format!("total mass {} for n = {}", ma.total_mass(), n));
                }
                if ma.atoms.iter().any(|(_, m)| m.is_negative()) {
                    return Err(format!("negative atom for n = {}", n));
                }
                count += 1;
            }
        }
        Ok(format!("{count} random psh PL measures sum to 1"))
    })
}

/// Gram matrices of vertical classes and of PL bases are exactly NSD,
/// cross-validated by the kernel-vector criterion when it applies.
pub fn check_zariski_nsd(seed: u64) -> CheckResult {
    run_check("zariski-nsd", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
        let mut cross = 0;
        for round in 0..25 {
            let n = 1 + (round % 2);
            let (f, a, _) = rand_nef_pl(&mut rng, n, 2).map_err(err_str)?;
            let setup = KahlerSetup::new(n, a.clone()).map_err(err_str)?;
            let (vgram, bs, _) = vertical_gram(&setup, &f).map_err(err_str)?;
            if !is_nsd(&vgram) {
                return Err(format!("vertical Gram not NSD at round {round}"));
            }
            let offdiag_ok = (0..vgram.len())
                .all(|i| (0..vgram.len()).all(|j| i == j || !vgram[i][j].is_negative()));
            if offdiag_ok {
                if !bilinear_nsd_check(&vgram, &bs).map_err(err_str)? {
                    return Err(format!("kernel-vector check failed at round {round}"));
                }
                cross += 1;
            }
            let g = phi_of_flag(&rand_flag(&mut rng, n, 2)).map_err(err_str)?;
            let gamma: Vec<(Q, &PLFunction)> =
                std::iter::repeat((a.clone(), &f)).take(n - 1).collect();
            let (_, verdict) = zariski_gram(&setup, &[&f, &g], &gamma).map_err(err_str)?;
            if !verdict {
                return Err(format!("PL-basis Gram not NSD at round {round}"));
            }
        }
        Ok(format!("25 Gram matrices NSD, {cross} cross-validated"))
    })
}

/// Gauss extension laws and the round trip `r(sigma(v)) = v`.
pub fn check_gauss_round_trip(seed: u64) -> CheckResult {
    run_check("gauss-round-trip", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x03);
        for round in 0..100 {
            let n = 1 + (round % 3);
            let w = rand_weight(&mut rng, n);
            let sigma = gauss_extend(&w).map_err(err_str)?;
            let ideal = rand_ideal(&mut rng, n, 3);
            // r(sigma(v)) = v as a function on ideals
            let restricted = restrict(&sigma, &ideal).map_err(err_str)?;
            if restricted != eval_valuation(&w, &ideal).map_err(err_str)? {
                return Err(format!("round trip failed at round {round}"));
            }
            // sigma(v) is a valuation on flag ideals
            let a = rand_flag(&mut rng, n, 2);
            let b = rand_flag(&mut rng, n, 2);
            let va = sigma.eval_flag(&a).map_err(err_str)?;
            let vb = sigma.eval_flag(&b).map_err(err_str)?;
            let prod = sigma.eval_flag(&a.product(&b)).map_err(err_str)?;
            if prod != va.trop_mul(&vb) {
                return Err(format!("multiplicativity failed at round {round}"));
            }
            let sum = sigma.eval_flag(&a.sum(&b)).map_err(err_str)?;
            if sum != va.trop_add(&vb) {
                return Err(format!("min law failed at round {round}"));
            }
        }
        Ok("100 weight/flag-ideal pairs".into())
    })
}

/// Valuations cannot see the difference between an ideal and its
/// integral closure, and the closure is idempotent.
pub fn check_closure_invariance(seed: u64) -> CheckResult {
    run_check("closure-invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
        for round in 0..100 {
            let n = 1 + (round % 3);
            let ideal = rand_proper_ideal(&mut rng, n, 3);
            let closed = integral_closure(&ideal).map_err(err_str)?;
            let w = rand_weight(&mut rng, n);
            let lhs = eval_valuation(&w, &ideal).map_err(err_str)?;
            let rhs = eval_valuation(&w, &closed).map_err(err_str)?;
            if lhs != rhs {
                return Err(format!("closure changed a valuation at round {round}"));
            }
            if integral_closure(&closed).map_err(err_str)? != closed {
                return Err(format!("closure not idempotent at round {round}"));
            }
        }
        Ok("100 valuation/ideal pairs".into())
    })
}

/// The sup of `(1/m) phi_b - phi_a` is attained at a Rees valuation of
/// `a` and dominates a grid of Gauss points.
pub fn check_sup_over_rees(seed: u64) -> CheckResult {
    run_check("sup-over-rees", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05);
        for round in 0..25 {
            let n = 1 + (round % 2);
            let a = rand_flag(&mut rng, n, 2);
            let b = rand_flag(&mut rng, n, 2);
            let m = rng.gen_range(1..=3u32);
            let (sup, maximizer) = sup_formula(&b, m, &a).map_err(err_str)?;
            let diff = pl_add(
                &pl_scale(&phi_of_flag(&b).map_err(err_str)?, &frac(1, m as i64))
                    .map_err(err_str)?,
                &phi_of_flag(&a).map_err(err_str)?.neg(),
            );
            if diff.eval(&maximizer).map_err(err_str)? != sup {
                return Err(format!("maximizer does not attain the sup at round {round}"));
            }
            let rees: Vec<GaussValuation> = rees_valuations_flag(&a)
                .map_err(err_str)?
                .into_iter()
                .map(|(v, _)| v)
                .collect();
            if !rees.iter().any(|v| v.base == maximizer.base) {
                return Err(format!("maximizer is not a Rees point at round {round}"));
            }
            // grid of normalized Gauss points (w, w_t) in {0..4}^{n+1}
            let mut grid = vec![vec![]];
            for _ in 0..n {
                grid = grid
                    .into_iter()
                    .flat_map(|p: Vec<i64>| {
                        (0..=4).map(move |x| {
                            let mut p = p.clone();
                            p.push(x);
                            p
                        })
                    })
                    .collect();
            }
            for wt in 1..=4i64 {
                for p in &grid {
                    let w = Weight::finite(n, p.iter().map(|x| frac(*x, wt)).collect())
                        .map_err(err_str)?;
                    let v = gauss_extend(&w).map_err(err_str)?;
                    if diff.eval(&v).map_err(err_str)? > sup {
                        return Err(format!("grid point above the sup at round {round}"));
                    }
                }
            }
        }
        Ok("25 flag-ideal pairs against the {0..4} grid".into())
    })
}

/// Builds the scaling-action image of `phi_a`: `t . phi_a = phi` of the
/// flag ideal with breakpoints stretched by `t`.
fn action_scale_flag(a: &FlagIdeal, t: i64) -> FlagIdeal {
    let pairs = a
        .slices()
        .map(|(l, i)| (l * t, i.clone()))
        .collect();
    FlagIdeal::from_pairs(a.vars(), pairs, a.lambda_max() * t).unwrap()
}

/// Symmetry, multilinearity and the basic identities of the pairing.
pub fn check_pairing_algebra(seed: u64) -> CheckResult {
    run_check("energy-pairing-algebra", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x06);
        for round in 0..10 {
            let n = 1 + (round % 2);
            let setup = KahlerSetup::new(n, q(4)).map_err(err_str)?;
            let flags: Vec<FlagIdeal> = (0..=n).map(|_| rand_flag(&mut rng, n, 2)).collect();
            let funcs: Vec<PLFunction> = flags
                .iter()
                .map(|a| phi_of_flag(a))
                .collect::<Result<_, _>>()
                .map_err(err_str)?;
            let betas: Vec<Q> = (0..=n).map(|_| q(rng.gen_range(1..=4))).collect();
            // a single common model carries every identity but (iii)
            let refs: Vec<&PLFunction> = funcs.iter().collect();
            let tc = crate::functionals::model_for(&refs).map_err(err_str)?;
            let ds: Vec<ToricClass> = funcs
                .iter()
                .map(|f| Ok(divisor_class(&tc, &pl_to_divisor(&tc, f)?)))
                .collect::<Result<_, Error>>()
                .map_err(err_str)?;
            let hs: Vec<ToricClass> = betas
                .iter()
                .map(|b| hyperplane_class(&tc.fan, b))
                .collect();
            let slots: Vec<ToricClass> = hs
                .iter()
                .zip(&ds)
                .map(|(h, d)| h.add(d))
                .collect();
            let pair = |classes: &[ToricClass]| -> Result<Q, String> {
                intersection_number(&tc.fan, classes, Engine::Tropical).map_err(err_str)
            };
            let base = pair(&slots)?;
            // symmetry: swap two slots
            let mut swapped = slots.clone();
            swapped.swap(0, n);
            if pair(&swapped)? != base {
                return Err(format!("not symmetric at round {round}"));
            }
            // (i): the slot (0, constant 1) computes the base product
            let one = divisor_class(
                &tc,
                &pl_to_divisor(&tc, &PLFunction::constant(n, q(1))).map_err(err_str)?,
            );
            let mut slots_i = slots.clone();
            slots_i[0] = one;
            let expect: Q = betas[1..].iter().product();
            if pair(&slots_i)? != expect {
                return Err(format!("identity (i) failed at round {round}"));
            }
            // (ii): all functions zero
            if !pair(&hs)?.is_zero() {
                return Err(format!("identity (ii) failed at round {round}"));
            }
            // (iv): (0, psi) . (alpha, phi)^n = V int psi dMA(phi)
            let psi = &funcs[0];
            let phi = &funcs[n % funcs.len()];
            let alpha = hyperplane_class(&tc.fan, &setup.a);
            let mut slots_iv = vec![ds[0].clone()];
            slots_iv.extend(std::iter::repeat(alpha.add(&ds[n % ds.len()])).take(n));
            let ma = ma_measure(&setup, phi).map_err(err_str)?;
            let expect_iv = setup.volume() * ma.integrate(psi).map_err(err_str)?;
            if pair(&slots_iv)? != expect_iv {
                return Err(format!("identity (iv) failed at round {round}"));
            }
            // multilinearity in a slot
            let mut slots_a = slots.clone();
            slots_a[0] = slots[0].add(&ds[1]);
            let mut slots_c = slots.clone();
            slots_c[0] = ds[1].clone();
            if pair(&slots_a)? != &base + pair(&slots_c)? {
                return Err(format!("multilinearity failed at round {round}"));
            }
            // (iii): the scaling action is degree one, on its own model
            let t = rng.gen_range(2..=3i64);
            let scaled_flags: Vec<FlagIdeal> =
                flags.iter().map(|a| action_scale_flag(a, t)).collect();
            let scaled: Vec<PLFunction> = scaled_flags
                .iter()
                .map(|a| phi_of_flag(a))
                .collect::<Result<_, _>>()
                .map_err(err_str)?;
            let slots_iii: Vec<(Q, &PLFunction)> =
                betas.iter().cloned().zip(scaled.iter()).collect();
            if pairing(&setup, &slots_iii).map_err(err_str)? != q(t) * &base {
                return Err(format!("identity (iii) failed at round {round}"));
            }
        }
        Ok("10 rounds of pairing identities".into())
    })
}

/// The energy along segments is a polynomial whose derivative at zero is
/// `int (psi - phi) dMA(phi)`, concave when the endpoints are psh.
pub fn check_derivative_concavity(seed: u64) -> CheckResult {
    run_check("derivative-concavity", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x07);
        for round in 0..8 {
            let n = 1 + (round % 2);
            let (f, af, _) = rand_nef_pl(&mut rng, n, 2).map_err(err_str)?;
            let (g, ag, _) = rand_nef_pl(&mut rng, n, 2).map_err(err_str)?;
            let a = if af > ag { af } else { ag };
            let setup = KahlerSetup::new(n, a).map_err(err_str)?;
            let deg = n + 1;
            let samples: Vec<Q> = (0..=deg as i64).map(|k| frac(k, deg as i64 + 1)).collect();
            // energies along the segment, all on one common model
            let tc = crate::functionals::model_for(&[&f, &g]).map_err(err_str)?;
            let df = divisor_class(&tc, &pl_to_divisor(&tc, &f).map_err(err_str)?);
            let dg = divisor_class(&tc, &pl_to_divisor(&tc, &g).map_err(err_str)?);
            let vol = setup.volume() * q(deg as i64);
            let mut values = Vec::new();
            for s in &samples {
                let d = df.scale(&(q(1) - s)).add(&dg.scale(s));
                let c = hyperplane_class(&tc.fan, &setup.a).add(&d);
                let classes = vec![c; deg];
                values.push(
                    intersection_number(&tc.fan, &classes, Engine::Tropical)
                        .map_err(err_str)?
                        / &vol,
                );
            }
            // exact polynomial fit through the samples
            let rows: Vec<Vec<Q>> = samples
                .iter()
                .map(|s| {
                    let mut pw = Q::one();
                    (0..=deg)
                        .map(|_| {
                            let v = pw.clone();
                            pw *= s;
                            v
                        })
                        .collect()
                })
                .collect();
            let coeffs = solve_square(&rows, &values)
                .ok_or_else(|| format!("polynomial fit failed at round {round}"))?;
            let ma_f = ma_measure(&setup, &f).map_err(err_str)?;
            let expect = ma_f.integrate(&g).map_err(err_str)? - ma_f.integrate(&f).map_err(err_str)?;
            if coeffs[1] != expect {
                return Err(format!("derivative mismatch at round {round}"));
            }
            for s in [q(0), frac(1, 2), q(1)] {
                let mut second = Q::zero();
                let mut pw = Q::one();
                for (k, c) in coeffs.iter().enumerate().skip(2) {
                    second += q((k * (k - 1)) as i64) * c * &pw;
                    pw *= &s;
                }
                if second.is_positive() {
                    return Err(format!("not concave at round {round}"));
                }
            }
        }
        Ok("8 segments, exact polynomial fits".into())
    })
}

/// Log discrepancies of Gauss extensions and their behavior under
/// retraction to coarser models.
pub fn check_log_discrepancy(seed: u64) -> CheckResult {
    run_check("log-discrepancy", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x08);
        let triv = gauss_extend(&Weight::trivial(2)).map_err(err_str)?;
        if log_discrepancy(&triv).map_err(err_str)? != q(1) {
            return Err("A(sigma(v_triv)) != 1".into());
        }
        for round in 0..20 {
            let n = 1 + (round % 3);
            // coordinate divisor ord_{z_i}: A_X = 1, A(sigma) = 2
            let i = rng.gen_range(0..n);
            let mut e = vec![q(0); n];
            e[i] = q(1);
            let ord = gauss_extend(&Weight::finite(n, e).unwrap()).map_err(err_str)?;
            if log_discrepancy(&ord).map_err(err_str)? != q(2) {
                return Err(format!("coordinate divisor at round {round}"));
            }
            let w = rand_weight(&mut rng, n);
            let sigma = gauss_extend(&w).map_err(err_str)?;
            let total: Q = w.finite_entries().unwrap().into_iter().sum();
            if log_discrepancy(&sigma).map_err(err_str)? != q(1) + &total {
                return Err(format!("monomial weight at round {round}"));
            }
        }
        // A(p(v)) grows as the model is refined, bounded by A(v)
        for round in 0..8 {
            let n = 1 + (round % 2);
            let a = rand_flag(&mut rng, n, 2);
            let coarse = build_testconfig(&a).map_err(err_str)?;
            // refine at the barycenter of an orthant cone with a vertical ray
            let cone = coarse
                .orthant_cones()
                .into_iter()
                .find(|c| c.iter().any(|&r| coarse.vertical_index(r).is_some()))
                .ok_or_else(|| format!("no vertical cone at round {round}"))?;
            let mut bary = vec![num_bigint::BigInt::zero(); n + 1];
            for &r in &cone {
                for (k, v) in coarse.fan.rays[r].iter().enumerate() {
                    bary[k] += v;
                }
            }
            let fine = refine_testconfig(&coarse, crate::rat::primitive(&bary)).map_err(err_str)?;
            if !fine.fan.refines(&coarse.fan) {
                return Err(format!("stellar model does not refine at round {round}"));
            }
            let w = rand_weight(&mut rng, n);
            let pc = retraction(&coarse, &w).map_err(err_str)?;
            let pf = retraction(&fine, &w).map_err(err_str)?;
            let ac = log_discrepancy(&pc.valuation).map_err(err_str)?;
            let af = log_discrepancy(&pf.valuation).map_err(err_str)?;
            let full = log_discrepancy(&gauss_extend(&w).map_err(err_str)?).map_err(err_str)?;
            if ac > af || af > full {
                return Err(format!("A not monotone under refinement at round {round}"));
            }
        }
        Ok("20 Gauss points and 8 refinement steps".into())
    })
}

/// Both intersection engines agree on random nef tuples, and the
/// tropical engine is invariant under stellar subdivision.
pub fn check_engine_equivalence(seed: u64) -> CheckResult {
    run_check("engine-equivalence", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x09);
        let mut tuples = 0;
        // (n, models, tuples per model, tuples carrying the non-nef
        // metric class)
        for (n, models, per_model, with_metric) in
            [(1usize, 4, 8, 3), (2, 2, 8, 2), (3, 1, 4, 1)]
        {
            for m in 0..models {
                let (f, a, tc) = rand_nef_pl(&mut rng, n, if n == 3 { 1 } else { 2 })
                    .map_err(err_str)?;
                let metric = hyperplane_class(&tc.fan, &a)
                    .add(&divisor_class(&tc, &pl_to_divisor(&tc, &f).map_err(err_str)?));
                let ample = crate::intersect::ample_class(&tc.fan).map_err(err_str)?;
                let fiber = crate::intersect::fiber_class(&tc.fan);
                for t in 0..per_model {
                    let classes: Vec<ToricClass> = (0..=n)
                        .map(|slot| {
                            if t < with_metric && slot == 0 {
                                metric.clone()
                            } else {
                                match rng.gen_range(0..3) {
                                    0 => hyperplane_class(&tc.fan, &q(rng.gen_range(1..=3))),
                                    1 => fiber.clone(),
                                    _ => ample.scale(&q(rng.gen_range(1..=2))),
                                }
                            }
                        })
                        .collect();
                    let x = intersection_number(&tc.fan, &classes, Engine::CrossCheck)
                        .map_err(|e| format!("engines disagree at n={n} model {m}: {e}"))?;
                    tuples += 1;
                    if t == 0 {
                        // stellar subdivision leaves the number unchanged
                        let cone = &tc.fan.max_cones[0];
                        let mut bary = vec![BigInt::zero(); n + 1];
                        for &r in cone {
                            for (k, v) in tc.fan.rays[r].iter().enumerate() {
                                bary[k] += v;
                            }
                        }
                        let sub = tc.fan.stellar_subdivide(bary.clone()).map_err(err_str)?;
                        let bq: Vec<Q> =
                            bary.iter().map(|v| Q::from_integer(v.clone())).collect();
                        let (ci, coords) = tc
                            .fan
                            .locate(&bq)
                            .ok_or_else(|| "barycenter outside fan".to_string())?;
                        let sub_classes: Vec<ToricClass> = classes
                            .iter()
                            .map(|c| {
                                let mut vals = c.values.clone();
                                let new_val: Q = tc.fan.max_cones[ci]
                                    .iter()
                                    .zip(&coords)
                                    .map(|(&r, x)| x * &c.values[r])
                                    .sum();
                                vals.push(new_val);
                                ToricClass { values: vals }
                            })
                            .collect();
                        let y = intersection_number(&sub, &sub_classes, Engine::Tropical)
                            .map_err(err_str)?;
                        if y != x {
                            return Err(format!(
                                "subdivision changed the number at n={n} model {m}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(format!("{tuples} nef tuples cross-checked"))
    })
}

/// Retraction fixes the dual complex pointwise, and the PL/divisor
/// dictionary round-trips exactly.
pub fn check_retraction_dictionary(seed: u64) -> CheckResult {
    run_check("retraction-dictionary", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0a);
        for round in 0..25 {
            let n = 1 + (round % 2);
            let tc = build_testconfig(&rand_flag(&mut rng, n, 2)).map_err(err_str)?;
            // a rational point of the dual complex: a convex combination
            // of the vertices of a face
            let faces: Vec<Vec<usize>> = tc
                .fan
                .max_cones
                .iter()
                .map(|c| {
                    c.iter()
                        .copied()
                        .filter(|&r| tc.vertical_index(r).is_some())
                        .collect::<Vec<usize>>()
                })
                .filter(|f| !f.is_empty())
                .collect();
            let face = &faces[rng.gen_range(0..faces.len())];
            let mut masses: Vec<Q> = face.iter().map(|_| q(rng.gen_range(1..=3))).collect();
            let total: Q = masses.iter().sum();
            for m in &mut masses {
                *m /= &total;
            }
            let mut w = vec![Q::zero(); n];
            for (&r, m) in face.iter().zip(&masses) {
                let vi = tc.vertical_index(r).unwrap();
                let vw = tc.vertical[vi].valuation.base.finite_entries().unwrap();
                for k in 0..n {
                    w[k] += m * &vw[k];
                }
            }
            let weight = Weight::finite(n, w).map_err(err_str)?;
            let p = retraction(&tc, &weight).map_err(err_str)?;
            if p.valuation.base != weight {
                return Err(format!("retraction moved a complex point at round {round}"));
            }
            // divisor -> PL -> divisor
            let div = VerticalDivisor {
                coeffs: tc
                    .vertical
                    .iter()
                    .map(|_| frac(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
                    .collect(),
            };
            let g = divisor_to_pl(&tc, &div).map_err(err_str)?;
            if pl_to_divisor(&tc, &g).map_err(err_str)? != div {
                return Err(format!("divisor round trip failed at round {round}"));
            }
            // PL -> divisor -> PL agree on the dual complex
            let f = phi_of_flag(&rand_flag(&mut rng, n, 2)).map_err(err_str)?;
            if let Ok(d2) = pl_to_divisor(&tc, &f) {
                let back = divisor_to_pl(&tc, &d2).map_err(err_str)?;
                for v in &tc.vertical {
                    if back.eval(&v.valuation).map_err(err_str)?
                        != f.eval(&v.valuation).map_err(err_str)?
                    {
                        return Err(format!("PL round trip failed at round {round}"));
                    }
                }
            }
        }
        Ok("25 complex points and dictionary round trips".into())
    })
}

/// Runs every property suite with the given seed.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        check_probability_measure(seed),
        check_zariski_nsd(seed),
        check_gauss_round_trip(seed),
        check_closure_invariance(seed),
        check_sup_over_rees(seed),
        check_pairing_algebra(seed),
        check_derivative_concavity(seed),
        check_log_discrepancy(seed),
        check_engine_equivalence(seed),
        check_retraction_dictionary(seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for r in run_all(7) {
            assert!(r.pass, "{}: {}", r.name, r.detail);
        }
    }
}
