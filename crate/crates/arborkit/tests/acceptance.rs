//! Acceptance gate: one test per criterion, each printing a pass/fail line.

use arborkit::disjoint::{DisjointnessVerdict, MapPointSystem, Orientation};
use arborkit::dynamics::{self, DepressedCubic, UnicriticalMap};
use arborkit::factor;
use arborkit::galois::{self, Dichotomy, RankProvenance, StabilityVerdict};
use arborkit::heights;
use arborkit::places::{self, Place};
use arborkit::poly::{Poly, Var};
use arborkit::polyx::PolyX;
use arborkit::rational::{rat, rat_frac, Rational};
use arborkit::ratfunc::RatFunc;
use arborkit::specialize;
use arborkit::wreath;
use num_bigint::{BigInt, BigUint};
use std::time::Instant;

fn check(n: u32, label: &str, ok: bool, detail: &str) {
    println!(
        "criterion {n} ({label}): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} ({label}) failed: {detail}");
}

fn t() -> RatFunc {
    RatFunc::t()
}

fn map_t() -> UnicriticalMap {
    UnicriticalMap::over_qt(2, t()).unwrap()
}

/// Small deterministic pseudo-random rationals.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % ((hi - lo + 1) as u64)) as i64
    }

    fn rational(&mut self) -> Rational {
        Rational::new(BigInt::from(self.int(-6, 6)), BigInt::from(self.int(1, 4)))
    }

    fn nonzero_ratfunc(&mut self) -> RatFunc {
        loop {
            let num = Poly::new(Var::T, (0..self.int(1, 4)).map(|_| self.rational()).collect());
            let den = Poly::new(Var::T, (0..self.int(1, 4)).map(|_| self.rational()).collect());
            if !num.is_zero() && !den.is_zero() {
                return RatFunc::new(num, den).unwrap();
            }
        }
    }
}

#[test]
fn criterion_01_layer_certification() {
    let start = Instant::now();
    let report = galois::analyze(&map_t(), &RatFunc::one(), 3).unwrap();
    let profile = report.profile.expect("profile present");
    let all_certified = profile
        .ranks
        .iter()
        .all(|(_, p)| *p == RankProvenance::Certified);
    let bound = report.index_bound_at_n.expect("bound present");
    let oracle = galois::kummer_rank_level2_oracle(&map_t(), &RatFunc::one()).unwrap();
    let ok = all_certified
        && bound.index_upper == BigUint::from(1u32)
        && bound.group_lower == BigUint::from(128u32)
        && oracle == (1, 2)
        && start.elapsed().as_secs() < 10;
    check(
        1,
        "layer certification",
        ok,
        &format!("certified={all_certified} bound={bound:?} oracle={oracle:?}"),
    );
}

#[test]
fn criterion_02_dichotomy() {
    let postcritical = galois::analyze(&map_t(), &t(), 3).unwrap().dichotomy;
    let periodic = galois::analyze(
        &UnicriticalMap::over_qt(2, t().sub(&t().pow(2))).unwrap(),
        &t(),
        3,
    )
    .unwrap()
    .dichotomy;
    let generic = galois::analyze(&map_t(), &RatFunc::one(), 3).unwrap().dichotomy;
    let ok = postcritical
        == Dichotomy::ConditionBViolated {
            postcritical_level: 1,
        }
        && periodic == Dichotomy::ConditionPeriodic
        && generic == Dichotomy::FiniteIndexEvidence;
    check(
        2,
        "dichotomy",
        ok,
        &format!("{postcritical:?} / {periodic:?} / {generic:?}"),
    );
}

#[test]
fn criterion_03_eventual_stability() {
    let certified = galois::eventual_stability(&map_t(), &RatFunc::zero(), 5).unwrap();
    let certified_ok = matches!(
        &certified,
        StabilityVerdict::CertifiedStable { place, levels: 5 }
            if *place == Place::finite(Poly::var_poly(Var::T)).unwrap()
    );
    let beta = RatFunc::from_poly(Poly::new(Var::T, vec![rat(0), rat(1), rat(1)]));
    let observed = galois::eventual_stability(&map_t(), &beta, 3).unwrap();
    let counts_ok = matches!(
        &observed,
        StabilityVerdict::ObservedStable { levels: 3, counts } if counts == &vec![1, 2, 2, 2]
    );
    // level-3 factorization: (x^2 + t)^2 * (x^4 + 2t x^2 + t^2 + 2t)
    let level3 = galois::level_polynomial(&map_t(), &beta, 3);
    let fac = factor::factor_over_function_field(&level3).unwrap();
    let x2t = PolyX::new(vec![t(), RatFunc::zero(), RatFunc::one()]);
    let quartic = PolyX::new(vec![
        RatFunc::from_poly(Poly::new(Var::T, vec![rat(0), rat(2), rat(1)])),
        RatFunc::zero(),
        t().scale(&rat(2)),
        RatFunc::zero(),
        RatFunc::one(),
    ]);
    let factor_ok = fac.factors == vec![(x2t, 2), (quartic, 1)];
    check(
        3,
        "eventual stability",
        certified_ok && counts_ok && factor_ok,
        &format!("certified_ok={certified_ok} counts_ok={counts_ok} factor_ok={factor_ok} fac={fac:?}"),
    );
}

#[test]
fn criterion_04_heights() {
    let exact = heights::canonical_height_fn(&map_t(), &RatFunc::zero()).unwrap();
    let exact_ok = exact == rat_frac(1, 2);

    let mut rng = Rng(0xabcdef);
    let mut functorial_ok = true;
    for _ in 0..100 {
        let z = rng.nonzero_ratfunc();
        let h = heights::canonical_height_fn(&map_t(), &z).unwrap();
        let hf = heights::canonical_height_fn(&map_t(), &map_t().evaluate(&z)).unwrap();
        if hf != h * rat(2) {
            functorial_ok = false;
            break;
        }
    }

    let f = UnicriticalMap::over_q(2, rat(1)).unwrap();
    let numeric = heights::canonical_height_num(&f, &rat(0), 1e-3).unwrap();
    let numeric_ok = (0.4063..=0.4083).contains(&numeric);

    check(
        4,
        "heights",
        exact_ok && functorial_ok && numeric_ok,
        &format!("exact_ok={exact_ok} functorial_ok={functorial_ok} numeric={numeric} (expected in [0.4063, 0.4083])"),
    );
}

#[test]
fn criterion_05_product_formula() {
    let mut rng = Rng(0x5eed5eed);
    let mut ok = true;
    for _ in 0..100 {
        let z = rng.nonzero_ratfunc();
        if places::product_formula_check(&z) != Ok(0) {
            ok = false;
            break;
        }
    }
    check(5, "product formula", ok, "sum deg(v) v(z) != 0");
}

#[test]
fn criterion_06_wreath_orders() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for (d, n) in [(2usize, 1u32), (2, 2), (2, 3), (3, 1), (3, 2)] {
        for cyclic in [true, false] {
            let gens = if cyclic {
                wreath::cyclic_generators(d, n)
            } else {
                wreath::aut_generators(d, n)
            };
            let chain = wreath::group_order(&gens).unwrap();
            let formula = wreath::iterated_wreath_order(d, n, cyclic);
            if chain != formula {
                ok = false;
                detail = format!("(d={d}, n={n}, cyclic={cyclic}): {chain} != {formula}");
            }
        }
    }
    ok = ok && start.elapsed().as_secs() < 5;
    check(6, "wreath orders", ok, &detail);
}

#[test]
fn criterion_07_disjointness() {
    let f = map_t();
    let violating = MapPointSystem::new(vec![
        (f.clone(), RatFunc::one()),
        (f.clone(), t().add(&RatFunc::one())),
    ])
    .unwrap();
    let verdict = arborkit::disjoint::disjointness_hypothesis(&violating).unwrap();
    let witness_ok = match &verdict {
        DisjointnessVerdict::Violation(w) => {
            let structural =
                w.zeta == rat(1) && w.n == 1 && w.orientation == Orientation::Forward;
            // re-verify by evaluation: alpha_j = zeta * f_i^n(alpha_i)
            let entries = violating.entries();
            let (fi, ai) = &entries[w.i];
            let (_, aj) = &entries[w.j];
            let image = fi.orbit(ai, w.n).unwrap().last().unwrap().scale(&w.zeta);
            structural && &image == aj
        }
        _ => false,
    };
    let clean = MapPointSystem::new(vec![
        (f.clone(), RatFunc::zero()),
        (f, RatFunc::one()),
    ])
    .unwrap();
    let clean_ok = arborkit::disjoint::disjointness_hypothesis(&clean).unwrap()
        == DisjointnessVerdict::Ok;
    check(
        7,
        "disjointness",
        witness_ok && clean_ok,
        &format!("witness_ok={witness_ok} clean_ok={clean_ok}"),
    );
}

#[test]
fn criterion_08_specialization_convergence() {
    let start = Instant::now();
    let points: Vec<Rational> = [10u32, 20, 30, 40]
        .iter()
        .map(|&k| Rational::from_integer(BigInt::from(2u8).pow(k)))
        .collect();
    let report =
        specialize::convergence_experiment(&map_t(), &RatFunc::zero(), &points).unwrap();
    let errs: Vec<f64> = report.rows.iter().map(|r| (r.ratio - 0.5).abs()).collect();
    let last_ok = errs[3] < 0.05 * 0.5;
    let monotone = errs.windows(2).all(|w| w[1] <= w[0]);
    let ok = last_ok && monotone && start.elapsed().as_secs() < 30;
    check(
        8,
        "specialization convergence",
        ok,
        &format!("errors={errs:?}"),
    );
}

#[test]
fn criterion_09_orbit_hits() {
    let f = UnicriticalMap::over_q(2, rat(1)).unwrap();
    let report = specialize::find_orbit_hits(&f, &rat(0), &t(), 4).unwrap();
    let gammas: Vec<Rational> = report.hits.iter().map(|h| h.gamma.clone()).collect();
    let gammas_ok = gammas == vec![rat(1), rat(2), rat(5), rat(26), rat(677)];
    let shape_ok = report
        .hits
        .iter()
        .filter(|h| h.n >= 2)
        .all(|h| (h.height / 2f64.powi(h.n as i32) - 0.4073).abs() < 0.05);
    check(
        9,
        "orbit hits",
        gammas_ok && shape_ok,
        &format!("gammas={gammas:?}"),
    );
}

#[test]
fn criterion_10_factor_round_trip() {
    let mut rng = Rng(0xfeedbeef);
    // 50 univariate products over Q
    for case in 0..50 {
        let mut product = Poly::constant(Var::X, rat(rng.int(-3, 3)));
        while product.is_zero() {
            product = Poly::constant(Var::X, rat(rng.int(-3, 3)));
        }
        for _ in 0..rng.int(1, 3) {
            let mut p = Poly::new(
                Var::X,
                (0..rng.int(2, 4)).map(|_| rat(rng.int(-4, 4))).collect(),
            );
            while p.degree().map_or(true, |d| d == 0) {
                p = Poly::new(
                    Var::X,
                    (0..rng.int(2, 4)).map(|_| rat(rng.int(-4, 4))).collect(),
                );
            }
            product = product.mul(&p);
        }
        let fac = factor::factor_over_q(&product).unwrap();
        assert_eq!(fac.product(), product, "univariate case {case}");
    }
    // 50 products over Q(t) with x-degree <= 6
    for case in 0..50 {
        let mut build = |deg: i64| {
            let mut cs: Vec<RatFunc> = (0..deg)
                .map(|_| {
                    RatFunc::from_poly(Poly::new(
                        Var::T,
                        vec![rat(rng.int(-2, 2)), rat(rng.int(-2, 2))],
                    ))
                })
                .collect();
            cs.push(RatFunc::one());
            PolyX::new(cs)
        };
        let product = build(3).mul(&build(3));
        let fac = factor::factor_over_function_field(&product).unwrap();
        let mut re = PolyX::constant(fac.content.clone());
        for (g, m) in &fac.factors {
            for _ in 0..*m {
                re = re.mul(g);
            }
        }
        assert_eq!(re, product, "function-field case {case}");
    }
    check(10, "factor round-trip", true, "");
}

#[test]
fn criterion_11_cubic_orbit_separation() {
    let f = DepressedCubic::new(rat(113), rat(-3));
    let r = dynamics::orbit_separation(&f, &rat(-1), &rat(1), 6).unwrap();
    let ok = r.coincidence.is_none() && r.first_always_greater;
    check(11, "cubic orbit separation", ok, &format!("{r:?}"));
}
