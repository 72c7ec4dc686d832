//! Eilenberg-Moore algebras of the measure monad.
//!
//! An [`Algebra`] is a carrier together with a structure map `c: MX → X`
//! sending each measure to its integral of the identity. Its laws are data
//! checked by [`check_algebra_laws`], not guarantees of construction.
//! Every algebra integrates: `∫ f dμ = c(Mf(μ))`, and inherits a vector
//! structure `x ⊕ y = c(δ_x + δ_y)`, `a ⊙ x = c(a·δ_x)`.
//!
//! Structure maps must be pure functions of the measure.

use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gen::{self, case_seed, rng_from};
use crate::monad::{dirac, kappa, kappa_morphism};
use crate::report::LawReport;
use crate::signed_measure::SignedMeasure;
use crate::spaces::{Bound, BoundMap, BoundedSet, Morphism, Point, Space};
use crate::{qi, Rational};

pub type StructureFn = Arc<dyn Fn(&SignedMeasure) -> Point + Send + Sync>;

#[derive(Clone)]
pub struct Algebra {
    name: String,
    carrier: Space,
    structure: StructureFn,
    bound: BoundMap,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.name)
            .field("carrier", &self.carrier)
            .finish_non_exhaustive()
    }
}

impl Algebra {
    /// `bound` must send each basis set `M(B, X, γ)` of `MX` to a bounded
    /// set of the carrier containing its image under `structure`.
    pub fn new<C, B>(name: impl Into<String>, carrier: Space, structure: C, bound: B) -> Self
    where
        C: Fn(&SignedMeasure) -> Point + Send + Sync + 'static,
        B: Fn(&BoundedSet) -> BoundedSet + Send + Sync + 'static,
    {
        Algebra {
            name: name.into(),
            carrier,
            structure: Arc::new(structure),
            bound: Arc::new(bound),
        }
    }

    /// The same carrier and bounds with another structure map.
    pub fn with_structure<C>(&self, name: impl Into<String>, structure: C) -> Self
    where
        C: Fn(&SignedMeasure) -> Point + Send + Sync + 'static,
    {
        Algebra {
            name: name.into(),
            carrier: self.carrier.clone(),
            structure: Arc::new(structure),
            bound: self.bound.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &Space {
        &self.carrier
    }

    /// `c(μ)`.
    pub fn structure_map(&self, mu: &SignedMeasure) -> Result<Point> {
        if mu.space() != &self.carrier {
            return Err(Error::spaces(mu.space(), &self.carrier));
        }
        let x = (self.structure)(mu);
        self.carrier.check_point(&x)?;
        Ok(x)
    }

    /// `c: MX → X` as a morphism.
    pub fn structure_morphism(&self) -> Morphism {
        let c = self.structure.clone();
        let bound = self.bound.clone();
        Morphism::trusted(
            format!("c_{}", self.name),
            Space::measures(self.carrier.clone()),
            self.carrier.clone(),
            move |p| c(p.as_measure().expect("point of MX")),
            move |b| bound(b),
        )
    }

    /// `c(0)`, the zero of the derived vector structure.
    pub fn zero(&self) -> Result<Point> {
        self.structure_map(&SignedMeasure::zero(self.carrier.clone()))
    }
}

fn weighted_vector_sum(dim: usize, mu: &SignedMeasure) -> Point {
    let mut acc = vec![Rational::zero(); dim];
    for (p, w) in mu.atoms() {
        let v = p.as_vector().expect("point of Q^n");
        for (a, c) in acc.iter_mut().zip(v) {
            *a += c * w;
        }
    }
    Point::Vector(acc)
}

/// `c(M(B, ℚⁿ, γ)) ⊆ [−γr, γr]ⁿ` when `B ⊆ [−r, r]ⁿ`.
fn vector_bound(dim: usize) -> impl Fn(&BoundedSet) -> BoundedSet + Send + Sync + 'static {
    move |b| match b.bound() {
        Bound::MeasureClass { support, gamma } => {
            let r = support
                .sup_radius()
                .expect("bounded sets of Q^n have a radius");
            BoundedSet::cube(dim, r * gamma).expect("radius is nonnegative")
        }
        _ => unreachable!("basis sets of MX are measure classes"),
    }
}

/// `ℝ ≅ M1` as an algebra on the rational line: `c(μ) = Σ x·μ{x}`.
pub fn real_algebra() -> Algebra {
    Algebra::new(
        "R",
        Space::real_line(),
        |mu| weighted_vector_sum(1, mu),
        vector_bound(1),
    )
}

/// `ℚⁿ` with the coordinatewise integral.
pub fn vector_algebra(n: usize) -> Result<Algebra> {
    let carrier = Space::rational_vector(n)?;
    Ok(Algebra::new(
        format!("Q^{n}"),
        carrier,
        move |mu| weighted_vector_sum(n, mu),
        vector_bound(n),
    ))
}

/// The free algebra `(MX, κ_X)`.
pub fn free_algebra(base: &Space) -> Algebra {
    let km = kappa_morphism(base);
    let bound_km = km.clone();
    Algebra::new(
        format!("M({base})"),
        Space::measures(base.clone()),
        move |mm| km.apply_unchecked(&Point::Measure(mm.clone())),
        move |b| bound_km.bound_image(b).expect("basis set of MMX"),
    )
}

/// `Ω_μ(f) = c(Mf(μ))`.
pub fn integrate(alg: &Algebra, f: &Morphism, mu: &SignedMeasure) -> Result<Point> {
    if f.codomain() != alg.carrier() {
        return Err(Error::spaces(f.codomain(), alg.carrier()));
    }
    alg.structure_map(&mu.pushforward(f)?)
}

/// The lift `f♯ = c∘Mf: MT → X`.
pub fn lift(alg: &Algebra, f: &Morphism) -> Result<Morphism> {
    if f.codomain() != alg.carrier() {
        return Err(Error::spaces(f.codomain(), alg.carrier()));
    }
    alg.structure_morphism()
        .after(&crate::monad::measure_functor(f))
}

/// `x ⊕ y = c(δ_x + δ_y)`.
pub fn derived_add(alg: &Algebra, x: &Point, y: &Point) -> Result<Point> {
    let s = dirac(alg.carrier(), x.clone())?.add(&dirac(alg.carrier(), y.clone())?)?;
    alg.structure_map(&s)
}

/// `a ⊙ x = c(a·δ_x)`.
pub fn derived_smul(alg: &Algebra, a: &Rational, x: &Point) -> Result<Point> {
    alg.structure_map(&dirac(alg.carrier(), x.clone())?.scale(a))
}

/// `a ⊙ x ⊕ b ⊙ y`.
pub fn derived_combination(
    alg: &Algebra,
    a: &Rational,
    x: &Point,
    b: &Rational,
    y: &Point,
) -> Result<Point> {
    derived_add(alg, &derived_smul(alg, a, x)?, &derived_smul(alg, b, y)?)
}

/// The pointwise combination `t ↦ a ⊙ f(t) ⊕ b ⊙ g(t)`.
///
/// Bounds are exact images on enumerable bounded sets; on `ℚⁿ` carriers
/// basis boxes scale as `|a|·r_f + |b|·r_g`.
pub fn pointwise_combination(
    alg: &Algebra,
    a: &Rational,
    f: &Morphism,
    b: &Rational,
    g: &Morphism,
) -> Result<Morphism> {
    if f.domain() != g.domain() {
        return Err(Error::spaces(f.domain(), g.domain()));
    }
    for h in [f, g] {
        if h.codomain() != alg.carrier() {
            return Err(Error::spaces(h.codomain(), alg.carrier()));
        }
    }
    let (alg_m, a_m, b_m, f_m, g_m) = (alg.clone(), a.clone(), b.clone(), f.clone(), g.clone());
    let map = move |t: &Point| {
        derived_combination(&alg_m, &a_m, &f_m.apply_unchecked(t), &b_m, &g_m.apply_unchecked(t))
            .expect("values lie in the carrier")
    };
    let map_b = map.clone();
    let (a_b, b_b, f_b, g_b) = (a.clone(), b.clone(), f.clone(), g.clone());
    let carrier = alg.carrier().clone();
    Ok(Morphism::trusted(
        format!("{a}{} + {b}{}", f.name(), g.name()),
        f.domain().clone(),
        alg.carrier().clone(),
        map,
        move |set| {
            if let Some(points) = set.enumerate(1 << 16) {
                let image: Vec<Point> = points.iter().map(&map_b).collect();
                return carrier.cover(&image).expect("images lie in the carrier");
            }
            let rf = f_b.bound_image(set).ok().and_then(|s| s.sup_radius());
            let rg = g_b.bound_image(set).ok().and_then(|s| s.sup_radius());
            match (rf, rg, carrier.dimension()) {
                (Some(rf), Some(rg), Some(n)) => {
                    BoundedSet::cube(n, a_b.abs() * rf + b_b.abs() * rg).expect("radius")
                }
                _ => panic!("no bound for a combination on {carrier}"),
            }
        },
    ))
}

/// Seeded check of `c∘δ = id` and `c∘Mc = c∘κ`.
pub fn check_algebra_laws(alg: &Algebra, seed: u64, cases: usize) -> LawReport {
    let mut report = LawReport::new(format!("algebra laws of {}", alg.name()), seed, cases);
    let carrier = alg.carrier();
    let mcarrier = Space::measures(carrier.clone());
    let c = alg.structure_morphism();
    for case in 0..cases {
        let cs = case_seed(seed, case);
        let mut rng = rng_from(cs);
        let x = gen::random_point(&mut rng, carrier);
        let mm = gen::random_measure(&mut rng, &mcarrier);

        match dirac(carrier, x.clone()).and_then(|d| alg.structure_map(&d)) {
            Ok(lhs) => report.check("c.delta = id", case, cs, || vec![x.to_string()], &lhs, &x),
            Err(e) => report.error("c.delta = id", case, cs, e),
        }

        let lhs = mm.pushforward(&c).and_then(|m| alg.structure_map(&m));
        let rhs = kappa(&mm).and_then(|m| alg.structure_map(&m));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.check("c.M(c) = c.kappa", case, cs, || vec![mm.to_string()], &l, &r),
            (Err(e), _) | (_, Err(e)) => report.error("c.M(c) = c.kappa", case, cs, e),
        }
    }
    report
}

/// Seeded check that `phi: A → B` is a homomorphism, in both equivalent
/// forms: `φ∘c_A = c_B∘Mφ`, and `φ(∫ f dμ) = ∫ φ∘f dμ` for random
/// `f: T → A`.
pub fn check_homomorphism(
    phi: &Morphism,
    a: &Algebra,
    b: &Algebra,
    seed: u64,
    cases: usize,
) -> LawReport {
    let mut report = LawReport::new(
        format!("homomorphism {}: {} -> {}", phi.name(), a.name(), b.name()),
        seed,
        cases,
    );
    if phi.domain() != a.carrier() || phi.codomain() != b.carrier() {
        report.error(
            "carriers",
            0,
            seed,
            Error::spaces(
                format!("{} -> {}", phi.domain(), phi.codomain()),
                format!("{} -> {}", a.carrier(), b.carrier()),
            ),
        );
        return report;
    }
    for case in 0..cases {
        let cs = case_seed(seed, case);
        let mut rng = rng_from(cs);
        let mu = gen::random_measure(&mut rng, a.carrier());
        let lhs = a.structure_map(&mu).and_then(|x| phi.apply(&x));
        let rhs = mu.pushforward(phi).and_then(|m| b.structure_map(&m));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.check("phi.c_A = c_B.M(phi)", case, cs, || vec![mu.to_string()], &l, &r),
            (Err(e), _) | (_, Err(e)) => report.error("phi.c_A = c_B.M(phi)", case, cs, e),
        }

        let f = gen::random_table_morphism(&mut rng, a.carrier());
        let nu = gen::random_measure(&mut rng, f.domain());
        let lhs = integrate(a, &f, &nu).and_then(|x| phi.apply(&x));
        let rhs = phi.after(&f).and_then(|pf| integrate(b, &pf, &nu));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.check(
                "phi(int f) = int phi.f",
                case,
                cs,
                || vec![nu.to_string()],
                &l,
                &r,
            ),
            (Err(e), _) | (_, Err(e)) => report.error("phi(int f) = int phi.f", case, cs, e),
        }
    }
    report
}

/// Seeded convexity check of `c(P(B, X))` for a bounded `B` of the
/// carrier, where `P(B, X)` are the probability measures supported by `B`:
/// mixtures of probabilities integrate to the matching derived convex
/// combination, and every `x ∈ B` equals `c(δ_x)`.
pub fn check_convexity(alg: &Algebra, set: &BoundedSet, seed: u64, cases: usize) -> LawReport {
    let mut report = LawReport::new(
        format!("convexity of c(P(B)) in {} for B = {set}", alg.name()),
        seed,
        cases,
    );
    if set.space() != alg.carrier() {
        report.error("carrier", 0, seed, Error::spaces(set.space(), alg.carrier()));
        return report;
    }
    let carrier = alg.carrier();
    for case in 0..cases {
        let cs = case_seed(seed, case);
        let mut rng = rng_from(cs);
        let pool = set.probe_points(&mut rng, 16);
        if pool.is_empty() {
            report.note("B is empty; convexity holds vacuously");
            break;
        }
        let mu1 = gen::random_probability(&mut rng, carrier, &pool);
        let mu2 = gen::random_probability(&mut rng, carrier, &pool);
        let t = gen::unit_rational(&mut rng);
        let s = Rational::one() - &t;
        let mix = mu1.scale(&t).add(&mu2.scale(&s));
        let lhs = mix.and_then(|m| alg.structure_map(&m));
        let rhs = alg
            .structure_map(&mu1)
            .and_then(|x1| alg.structure_map(&mu2).map(|x2| (x1, x2)))
            .and_then(|(x1, x2)| derived_combination(alg, &t, &x1, &s, &x2));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.check(
                "c(t mu1 + (1-t) mu2) = t c(mu1) + (1-t) c(mu2)",
                case,
                cs,
                || vec![mu1.to_string(), mu2.to_string(), t.to_string()],
                &l,
                &r,
            ),
            (Err(e), _) | (_, Err(e)) => report.error("mixture", case, cs, e),
        }

        let x = &pool[case % pool.len()];
        match dirac(carrier, x.clone()).and_then(|d| alg.structure_map(&d)) {
            Ok(cx) => report.check("B in c(P(B))", case, cs, || vec![x.to_string()], &cx, x),
            Err(e) => report.error("B in c(P(B))", case, cs, e),
        }
    }
    report
}

/// The centre of mass `c(μ)` of a probability measure.
pub fn barycenter(alg: &Algebra, mu: &SignedMeasure) -> Result<Point> {
    if let Some((p, w)) = mu.atoms().iter().find(|(_, w)| w.is_negative()) {
        return Err(Error::NotAProbabilityMeasure(format!(
            "negative weight {w} at {p}"
        )));
    }
    let mass = mu.mass();
    if mass != qi(1) {
        return Err(Error::NotAProbabilityMeasure(format!("total mass is {mass}")));
    }
    alg.structure_map(mu)
}
