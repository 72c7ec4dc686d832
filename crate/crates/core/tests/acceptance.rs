//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use bornmeas::cli::{builtin_morphism, grid_uniform, Region};
use bornmeas::em_algebra::{
    barycenter, check_algebra_laws, derived_add, derived_combination, derived_smul, free_algebra,
    integrate, pointwise_combination, real_algebra, vector_algebra,
};
use bornmeas::gen::{self, case_seed, rng_from};
use bornmeas::monad::{
    check_monad_laws, check_monad_laws_with, check_monad_morphism, dirac, evaluation_morphism,
    kappa, lift_real, KappaFn,
};
use bornmeas::pettis::{pettis_algebra, pettis_integral, sup_norm, verify_pettis, Functional};
use bornmeas::signed_measure::integrate_real;
use bornmeas::spaces::table_morphism;
use bornmeas::{q, qi, BoundedSet, LawReport, Point, Rational, SignedMeasure, Space};
use rand::Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            passed,
            detail: detail.into(),
        }
    }
}

/// Tallies exact per-case checks and keeps the first few failures.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    fn verdict(self, expected_cases: usize, extra: &str) -> Verdict {
        let passed = self.failures.is_empty() && self.cases == expected_cases;
        let mut detail = format!("{} cases, {} failures", self.cases, self.failures.len());
        if !extra.is_empty() {
            detail.push_str(", ");
            detail.push_str(extra);
        }
        for f in self.failures.iter().take(3) {
            detail.push_str("\n      ");
            detail.push_str(f);
        }
        Verdict::new(passed, detail)
    }
}

fn labels(n: usize) -> Space {
    Space::finite_labeled((0..n).map(|i| format!("l{i}"))).unwrap()
}

fn plane() -> Space {
    Space::rational_vector(2).unwrap()
}

fn carriers() -> [Space; 3] {
    [labels(6), Space::integer_line(), plane()]
}

fn report_summary(r: &LawReport) -> String {
    format!("{} {} checks", r.suite, r.checks)
}

fn monad_laws() -> Verdict {
    let start = Instant::now();
    let reports: Vec<LawReport> = carriers()
        .iter()
        .map(|s| check_monad_laws(s, 0x4d4f_4e41, 1000))
        .collect();
    let elapsed = start.elapsed();
    let all_pass = reports.iter().all(|r| r.passed() && r.checks == 3000);
    let mut detail = format!(
        "{}; {:.2?} (limit 60s)",
        reports.iter().map(report_summary).collect::<Vec<_>>().join("; "),
        elapsed
    );
    for r in reports.iter().filter(|r| !r.passed()) {
        detail.push_str(&format!("\n{r}"));
    }
    Verdict::new(all_pass && elapsed <= Duration::from_secs(60), detail)
}

fn contraction() -> Verdict {
    let modular: Vec<_> = (1..=5)
        .map(|k| builtin_morphism(&format!("mod:{k}"), &Space::integer_line()).unwrap())
        .collect();
    let planar: Vec<_> = ["proj:0", "proj:1", "affine:0;1,1", "affine:1/2;1,-1"]
        .iter()
        .map(|descriptor| builtin_morphism(descriptor, &plane()).unwrap())
        .collect();
    let mut tally = Tally::default();
    let mut strict = 0;
    for case in 0..1000 {
        let mut rng = rng_from(case_seed(2, case));
        let (f, mu) = match case % 3 {
            0 => {
                let target = carriers()[rng.gen_range(0..3)].clone();
                let f = gen::random_table_morphism(&mut rng, &target);
                let mu = gen::random_measure(&mut rng, f.domain());
                (f, mu)
            }
            1 => {
                let f = modular[rng.gen_range(0..modular.len())].clone();
                (f, gen::random_measure(&mut rng, &Space::integer_line()))
            }
            _ => {
                let f = planar[rng.gen_range(0..planar.len())].clone();
                (f, gen::random_measure(&mut rng, &plane()))
            }
        };
        let image = mu.pushforward(&f).unwrap();
        let (a, b) = (image.total_variation(), mu.total_variation());
        if a < b {
            strict += 1;
        }
        tally.record(a <= b, || format!("case {case}: |M{}(mu)| = {a} > {b} = |mu| for mu = {mu}", f.name()));
    }
    tally.verdict(1000, &format!("{strict} strict"))
}

fn restriction_isometry() -> Verdict {
    let mut tally = Tally::default();
    for case in 0..1000 {
        let mut rng = rng_from(case_seed(3, case));
        let space = carriers()[case % 3].clone();
        let mu = gen::random_measure(&mut rng, &space);
        let b = if rng.gen_bool(0.5) {
            space.cover(mu.support()).unwrap()
        } else {
            let extra = gen::random_point(&mut rng, &space);
            BoundedSet::finite(space.clone(), mu.support().cloned().chain([extra])).unwrap()
        };
        let restricted = mu.restrict(&b).unwrap();
        let ok = restricted.total_variation() == mu.total_variation()
            && restricted.extend().unwrap() == mu;
        tally.record(ok, || format!("case {case}: mu = {mu}, B = {b}"));
    }
    tally.verdict(1000, "")
}

fn kappa_bound() -> Verdict {
    let mut tally = Tally::default();
    let mut on_boundary = 0;
    for case in 0..500 {
        let mut rng = rng_from(case_seed(4, case));
        let b = match case % 3 {
            0 => {
                let x = labels(6);
                if rng.gen_bool(0.3) {
                    BoundedSet::whole(x).unwrap()
                } else {
                    let k = rng.gen_range(1..=6);
                    BoundedSet::finite(x.clone(), (0..k).map(|_| gen::random_point(&mut rng, &x))).unwrap()
                }
            }
            1 => BoundedSet::interval(rng.gen_range(0..=8)),
            _ => BoundedSet::cube(2, gen::positive_small_rational(&mut rng)).unwrap(),
        };
        let gamma = gen::positive_small_rational(&mut rng);
        let delta = gen::positive_small_rational(&mut rng);
        let inner = BoundedSet::measure_class(b.clone(), gamma.clone()).unwrap();
        let outer = BoundedSet::measure_class(inner, delta.clone()).unwrap();
        let mm = outer.sample_point(&mut rng).unwrap();
        let member = outer.is_bounded_member(&mm).unwrap();
        let flat = kappa(mm.as_measure().unwrap()).unwrap();
        let bound = &gamma * &delta;
        if flat.total_variation() == bound {
            on_boundary += 1;
        }
        let ok = member && flat.supported_by(&b).unwrap() && flat.total_variation() <= bound;
        tally.record(ok, || format!("case {case}: kappa = {flat}, B = {b}, bound {bound}"));
    }
    tally.verdict(500, &format!("{on_boundary} at the bound"))
}

fn lift_identity() -> Verdict {
    let embed = builtin_morphism("embed", &Space::integer_line()).unwrap();
    let projections = [
        builtin_morphism("proj:0", &plane()).unwrap(),
        builtin_morphism("proj:1", &plane()).unwrap(),
    ];
    let mut tally = Tally::default();
    for case in 0..500 {
        let mut rng = rng_from(case_seed(5, case));
        let f = match case % 3 {
            0 => {
                let x = labels(rng.gen_range(1..=6));
                let table = gen::random_table_on(&mut rng, &x, &Space::real_line());
                table_morphism("f", x, Space::real_line(), table).unwrap()
            }
            1 => embed.clone(),
            _ => projections[rng.gen_range(0..2)].clone(),
        };
        let mm = gen::random_measure(&mut rng, &Space::measures(f.domain().clone()));
        let lhs = integrate_real(&lift_real(&f).unwrap(), &mm).unwrap();
        let rhs = integrate_real(&f, &kappa(&mm).unwrap()).unwrap();
        tally.record(lhs == rhs, || format!("case {case}: {lhs} != {rhs} for {mm}"));
    }
    tally.verdict(500, "")
}

fn reals_are_free_on_one_point() -> Verdict {
    let one = Space::one_point();
    let star = Point::label("*");
    let ev = evaluation_morphism(&one, &BTreeSet::from([star.clone()])).unwrap();
    let c = real_algebra();
    let mut round_trips = Tally::default();
    let mut squares = Tally::default();
    for case in 0..500 {
        let mut rng = rng_from(case_seed(6, case));
        let alpha = gen::small_rational(&mut rng);
        let m = dirac(&one, star.clone()).unwrap().scale(&alpha);
        let back = ev.apply(&Point::Measure(m.clone())).unwrap();
        let mu = gen::random_measure(&mut rng, &one);
        let value = ev.apply(&Point::Measure(mu.clone())).unwrap();
        let again = dirac(&one, star.clone()).unwrap().scale(value.as_scalar().unwrap());
        round_trips.record(back == Point::scalar(alpha.clone()) && again == mu, || {
            format!("case {case}: alpha = {alpha}, mu = {mu}")
        });

        let mm = gen::random_measure(&mut rng, &Space::measures(one.clone()));
        let lhs = ev.apply(&Point::Measure(kappa(&mm).unwrap())).unwrap();
        let rhs = c.structure_map(&mm.pushforward(&ev).unwrap()).unwrap();
        squares.record(lhs == rhs, || format!("case {case}: {lhs} != {rhs} for {mm}"));
    }
    let passed = round_trips.failures.is_empty()
        && squares.failures.is_empty()
        && round_trips.cases == 500
        && squares.cases == 500;
    let mut detail = format!(
        "{} round trips, {} squares, {} failures",
        round_trips.cases,
        squares.cases,
        round_trips.failures.len() + squares.failures.len()
    );
    for f in round_trips.failures.iter().chain(&squares.failures).take(3) {
        detail.push_str("\n      ");
        detail.push_str(f);
    }
    Verdict::new(passed, detail)
}

fn integral_linearity() -> Verdict {
    let alg = vector_algebra(3).unwrap();
    let target = alg.carrier().clone();
    let mut tally = Tally::default();
    for case in 0..500 {
        let mut rng = rng_from(case_seed(7, case));
        let t = gen::random_index_space(&mut rng);
        let f = table_morphism("f", t.clone(), target.clone(), gen::random_table_on(&mut rng, &t, &target)).unwrap();
        let g = table_morphism("g", t.clone(), target.clone(), gen::random_table_on(&mut rng, &t, &target)).unwrap();
        let (a, b) = (gen::small_rational(&mut rng), gen::small_rational(&mut rng));
        let mu = gen::random_measure(&mut rng, &t);
        let combined = pointwise_combination(&alg, &a, &f, &b, &g).unwrap();
        let lhs = integrate(&alg, &combined, &mu).unwrap();
        let rhs = derived_combination(
            &alg,
            &a,
            &integrate(&alg, &f, &mu).unwrap(),
            &b,
            &integrate(&alg, &g, &mu).unwrap(),
        )
        .unwrap();
        tally.record(lhs == rhs, || format!("case {case}: {lhs} != {rhs}, a = {a}, b = {b}, mu = {mu}"));
    }
    tally.verdict(500, "")
}

fn native_add(x: &Point, y: &Point) -> Point {
    Point::vector(x.as_vector().unwrap().iter().zip(y.as_vector().unwrap()).map(|(a, b)| a + b))
}

fn native_smul(a: &Rational, x: &Point) -> Point {
    Point::vector(x.as_vector().unwrap().iter().map(|c| a * c))
}

fn derived_structure() -> Verdict {
    let free_base = labels(4);
    let free = free_algebra(&free_base);
    let real = real_algebra();
    let mut tally = Tally::default();
    for case in 0..500 {
        let mut rng = rng_from(case_seed(8, case));
        let a = gen::small_rational(&mut rng);
        let n = rng.gen_range(1..=4);
        let vectors = vector_algebra(n).unwrap();
        for alg in [&real, &vectors] {
            let x = gen::random_point(&mut rng, alg.carrier());
            let y = gen::random_point(&mut rng, alg.carrier());
            let ok = derived_add(alg, &x, &y).unwrap() == native_add(&x, &y)
                && derived_smul(alg, &a, &x).unwrap() == native_smul(&a, &x);
            tally.record(ok, || format!("case {case} on {}: x = {x}, y = {y}, a = {a}", alg.name()));
        }
        let mu = gen::random_measure(&mut rng, &free_base);
        let nu = gen::random_measure(&mut rng, &free_base);
        let sum = derived_add(&free, &Point::Measure(mu.clone()), &Point::Measure(nu.clone())).unwrap();
        let scaled = derived_smul(&free, &a, &Point::Measure(mu.clone())).unwrap();
        let ok = sum == Point::Measure(mu.add(&nu).unwrap()) && scaled == Point::Measure(mu.scale(&a));
        tally.record(ok, || format!("case {case} on free algebra: mu = {mu}, nu = {nu}, a = {a}"));
    }
    tally.verdict(1500, "real, Q^n and free algebras")
}

fn delta_monad_morphism() -> Verdict {
    let reports = [
        check_monad_morphism(&labels(3), 9, 500),
        check_monad_morphism(&Space::integer_line(), 10, 500),
    ];
    let passed = reports.iter().all(|r| r.passed() && r.cases == 500);
    let mut detail = reports.iter().map(report_summary).collect::<Vec<_>>().join("; ");
    for r in reports.iter().filter(|r| !r.passed()) {
        detail.push_str(&format!("\n{r}"));
    }
    Verdict::new(passed, detail)
}

fn pettis_identity() -> Verdict {
    let mut tally = Tally::default();
    let mut separating = 0;
    for case in 0..500 {
        let mut rng = rng_from(case_seed(11, case));
        let n = 1 + case % 4;
        let target = Space::rational_vector(n).unwrap();
        let f = gen::random_table_morphism(&mut rng, &target);
        let mu = gen::random_measure(&mut rng, f.domain());
        let family: Vec<Functional> = (0..8).map(|_| Functional::random(&mut rng, n)).collect();
        if bornmeas::pettis::separates_points(&family, n) {
            separating += 1;
        }
        let x = pettis_integral(n, &f, &mu).unwrap();
        let r = verify_pettis(&x, &f, &mu, &family);
        tally.record(r.passed() && r.checks == 8, || format!("case {case}: {r}"));
    }
    let mut laws: Vec<LawReport> = Vec::new();
    for n in 1..=4 {
        laws.push(check_algebra_laws(&pettis_algebra(n).unwrap(), 12 + n as u64, 1000));
    }
    let laws_pass = laws.iter().all(|r| r.passed() && r.cases == 1000);
    let mut v = tally.verdict(500, &format!("{separating} separating families"));
    v.detail.push_str(&format!(
        "; algebra laws: {}",
        laws.iter().map(report_summary).collect::<Vec<_>>().join("; ")
    ));
    for r in laws.iter().filter(|r| !r.passed()) {
        v.detail.push_str(&format!("\n{r}"));
    }
    v.passed &= laws_pass;
    v
}

fn geometric_centre() -> Verdict {
    let alg = vector_algebra(2).unwrap();
    let mut slowest = Duration::ZERO;
    let mut demo = |region: &Region, k: u32| {
        let start = Instant::now();
        let c = barycenter(&alg, &grid_uniform(region, k).unwrap()).unwrap();
        slowest = slowest.max(start.elapsed());
        c
    };
    let half = Point::vector([q(1, 2), q(1, 2)]);
    let mut square_failures = Vec::new();
    let resolutions: Vec<u32> = (1..=16).chain([31, 32, 64, 100, 128, 256]).collect();
    for &k in &resolutions {
        let c = demo(&Region::UnitSquare, k);
        if c != half {
            square_failures.push(format!("k = {k}: {c}"));
        }
    }
    let triangle: Region = "triangle:0,0;1,0;0,1".parse().unwrap();
    let third = [q(1, 3), q(1, 3)];
    let mut distances = Vec::new();
    for k in [64, 128, 256] {
        let c = demo(&triangle, k);
        let diff: Vec<Rational> = c.as_vector().unwrap().iter().zip(&third).map(|(a, b)| a - b).collect();
        distances.push((k, sup_norm(&diff)));
    }
    let final_distance = &distances.last().unwrap().1;
    let monotone = distances.windows(2).all(|w| w[1].1 <= w[0].1);
    let passed = square_failures.is_empty()
        && *final_distance <= q(1, 50)
        && slowest <= Duration::from_secs(5);
    let mut detail = format!(
        "square exact at {} resolutions; triangle sup-distance {} (limit 1/50, k = 64, 128, 256: {}, monotone: {monotone}); slowest run {:.2?} (limit 5s)",
        resolutions.len() - square_failures.len(),
        final_distance,
        distances
            .iter()
            .map(|(_, d)| format!("{:.5}", rational_f64(d)))
            .collect::<Vec<_>>()
            .join(", "),
        slowest
    );
    for f in &square_failures {
        detail.push_str("\n      square ");
        detail.push_str(f);
    }
    Verdict::new(passed, detail)
}

fn rational_f64(x: &Rational) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn mutation_sensitivity() -> Verdict {
    let dropped_term: KappaFn = Arc::new(|mm: &SignedMeasure| {
        let mut atoms = mm.atoms().to_vec();
        atoms.pop();
        let trimmed = SignedMeasure::from_atoms(mm.space().clone(), atoms).unwrap();
        kappa(&trimmed).unwrap()
    });
    let corrupted_kappa = check_monad_laws_with(&labels(3), 42, 1000, dropped_term);

    let real = real_algebra();
    let off_by_one = real.with_structure("R with off-by-one", |mu: &SignedMeasure| {
        let mut sum = Rational::from_integer(0.into());
        for (i, (p, w)) in mu.atoms().iter().enumerate() {
            let x = p.as_scalar().unwrap();
            sum += if i == 0 { (x + qi(1)) * w } else { x * w };
        }
        Point::scalar(sum)
    });
    let corrupted_structure = check_algebra_laws(&off_by_one, 42, 1000);

    let witness = |r: &LawReport| {
        r.failures
            .first()
            .map(|f| format!("first at case {} (seed {}, law {})", f.case, f.case_seed, f.law))
            .unwrap_or_else(|| "no failing case".into())
    };
    let passed = !corrupted_kappa.passed() && !corrupted_structure.passed();
    Verdict::new(
        passed,
        format!(
            "dropped-term kappa: {} failures, {}; off-by-one structure map: {} failures, {}",
            corrupted_kappa.failures.len(),
            witness(&corrupted_kappa),
            corrupted_structure.failures.len(),
            witness(&corrupted_structure)
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("monad laws on labels, Z and Q^2", monad_laws),
        ("direct images contract total variation", contraction),
        ("restriction preserves total variation", restriction_isometry),
        ("kappa respects the measure-class bound", kappa_bound),
        ("lift identity", lift_identity),
        ("R is the free algebra on one point", reals_are_free_on_one_point),
        ("integration is linear in the integrand", integral_linearity),
        ("derived vector structure", derived_structure),
        ("Delta is a monad morphism", delta_monad_morphism),
        ("Pettis identity and Pettis algebra laws", pettis_identity),
        ("geometric centre of grid measures", geometric_centre),
        ("mutation sensitivity", mutation_sensitivity),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = criterion();
        if !v.passed {
            failed += 1;
        }
        println!(
            "{} [{:>2}] {name}: {} ({:.2?})",
            if v.passed { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            start.elapsed()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
