//! The measure monad `𝕄 = (M, δ, κ)`.
//!
//! `M` sends a space to its finitely-supported signed measures and a
//! morphism to its direct image. The unit is the Dirac embedding
//! `x ↦ δ_x`; the multiplication `κ` flattens a measure on measures into
//! the weighted sum of its atom measures, which on finite supports is the
//! same measure as `E ↦ ∫ Ev_E d𝔐`.
//!
//! The free vector space monad `𝕃` is represented by [`FormalLinComb`];
//! [`delta_embed`] is the monad morphism `Δ: L → M`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gen::{self, case_seed, rng_from};
use crate::report::LawReport;
use crate::signed_measure::{canonical_terms, integrate_real, SignedMeasure};
use crate::spaces::{characteristic_morphism, Bound, BoundedSet, Morphism, Point, Space};
use crate::{qi, Rational};

/// The Dirac measure `δ_x`.
pub fn dirac(space: &Space, x: Point) -> Result<SignedMeasure> {
    SignedMeasure::from_atoms(space.clone(), [(x, qi(1))])
}

fn measure_base(space: &Space) -> Result<Arc<Space>> {
    match space {
        Space::MeasureSpace(base) => Ok(base.clone()),
        other => Err(Error::kind("a measure space M(X)", other)),
    }
}

fn formal_base(space: &Space) -> Result<Arc<Space>> {
    match space {
        Space::FormalSpace(base) => Ok(base.clone()),
        other => Err(Error::kind("a formal space L(X)", other)),
    }
}

/// `κ_X(𝔐) = Σⱼ Wⱼ·μⱼ` over the atoms `(μⱼ, Wⱼ)` of `𝔐 ∈ MMX`.
pub fn kappa(mm: &SignedMeasure) -> Result<SignedMeasure> {
    let base = measure_base(mm.space())?;
    Ok(kappa_on(&base, mm))
}

fn kappa_on(base: &Arc<Space>, mm: &SignedMeasure) -> SignedMeasure {
    SignedMeasure::from_trusted_atoms(
        base.clone(),
        mm.atoms().iter().flat_map(|(p, outer)| {
            p.as_measure()
                .expect("atoms of a measure on MX are measures")
                .atoms()
                .iter()
                .map(move |(x, w)| (x.clone(), w * outer))
        }),
    )
}

/// A flattening `MMY → MY`, usable at any level `Y`.
pub type KappaFn = Arc<dyn Fn(&SignedMeasure) -> SignedMeasure + Send + Sync>;

/// The multiplication `κ` as a [`KappaFn`].
pub fn standard_kappa() -> KappaFn {
    Arc::new(|mm| kappa(mm).expect("κ applied to a measure on measures"))
}

/// The functor action of `M` on a morphism, applied to one measure.
pub fn map_measure(f: &Morphism, mu: &SignedMeasure) -> Result<SignedMeasure> {
    mu.pushforward(f)
}

/// `δ_X: X → MX` with bounds `B ↦ M(B, X, 1)`.
pub fn dirac_morphism(space: &Space) -> Morphism {
    let base = Arc::new(space.clone());
    let target = Space::MeasureSpace(base.clone());
    Morphism::trusted(
        "delta",
        space.clone(),
        target,
        move |p| Point::Measure(SignedMeasure::from_canonical(base.clone(), vec![(p.clone(), qi(1))])),
        |b| BoundedSet::measure_class(b.clone(), qi(1)).expect("γ = 1 is positive"),
    )
}

/// `κ_X: MMX → MX` with bounds `M(M(B, X, γ), MX, δ) ↦ M(B, X, γδ)`.
pub fn kappa_morphism(space: &Space) -> Morphism {
    kappa_morphism_with(space, standard_kappa())
}

/// Like [`kappa_morphism`] with a replacement flattening, for mutation
/// tests of the law suites.
pub fn kappa_morphism_with(space: &Space, kappa_impl: KappaFn) -> Morphism {
    let mx = Space::measures(space.clone());
    let mmx = Space::measures(mx.clone());
    Morphism::trusted(
        "kappa",
        mmx,
        mx,
        move |p| Point::Measure(kappa_impl(p.as_measure().expect("point of MMX"))),
        |b| match b.bound() {
            Bound::MeasureClass { support, gamma } => {
                let inner = support.to_basis().expect("support lives in MX");
                match inner.bound() {
                    Bound::MeasureClass {
                        support: base_support,
                        gamma: inner_gamma,
                    } => BoundedSet::measure_class((**base_support).clone(), inner_gamma * gamma)
                        .expect("product of positive radii"),
                    _ => unreachable!("basis sets of MX are measure classes"),
                }
            }
            _ => unreachable!("basis sets of MMX are measure classes"),
        },
    )
}

/// `Mf: MX → MY` as a morphism, with bounds `M(B, X, γ) ↦ M(f(B), Y, γ)`.
pub fn measure_functor(f: &Morphism) -> Morphism {
    let map_f = f.clone();
    let bound_f = f.clone();
    Morphism::trusted(
        format!("M({})", f.name()),
        Space::measures(f.domain().clone()),
        Space::measures(f.codomain().clone()),
        move |p| {
            Point::Measure(
                p.as_measure()
                    .expect("point of MX")
                    .pushforward(&map_f)
                    .expect("domain matches"),
            )
        },
        move |b| match b.bound() {
            Bound::MeasureClass { support, gamma } => BoundedSet::measure_class(
                bound_f.bound_image(support).expect("support lives in the domain"),
                gamma.clone(),
            )
            .expect("γ unchanged"),
            _ => unreachable!("basis sets of MX are measure classes"),
        },
    )
}

/// `Ev_E: MX → ℚ¹`, `μ ↦ μ(E)`, with bounds `M(B, X, γ) ↦ [−γ, γ]`.
pub fn evaluation_morphism(space: &Space, set: &BTreeSet<Point>) -> Result<Morphism> {
    for p in set {
        space.check_point(p)?;
    }
    let set = set.clone();
    Ok(Morphism::trusted(
        "Ev_E",
        Space::measures(space.clone()),
        Space::real_line(),
        move |p| Point::scalar(p.as_measure().expect("point of MX").eval(&set)),
        |b| match b.bound() {
            Bound::MeasureClass { gamma, .. } => {
                BoundedSet::cube(1, gamma.clone()).expect("γ > 0")
            }
            _ => unreachable!("basis sets of MX are measure classes"),
        },
    ))
}

/// The lift `f♯: MX → ℚ¹`, `μ ↦ ∫ f dμ`, of a real-valued morphism.
///
/// Bounds: if `|f| ≤ β` on `B` then `|f♯| ≤ βγ` on `M(B, X, γ)`.
pub fn lift_real(f: &Morphism) -> Result<Morphism> {
    if f.codomain() != &Space::real_line() {
        return Err(Error::kind(Space::real_line(), f.codomain()));
    }
    let map_f = f.clone();
    let bound_f = f.clone();
    Ok(Morphism::trusted(
        format!("{}#", f.name()),
        Space::measures(f.domain().clone()),
        Space::real_line(),
        move |p| {
            Point::scalar(
                integrate_real(&map_f, p.as_measure().expect("point of MX"))
                    .expect("domain matches"),
            )
        },
        move |b| match b.bound() {
            Bound::MeasureClass { support, gamma } => {
                let beta = bound_f
                    .bound_image(support)
                    .ok()
                    .and_then(|img| img.sup_radius())
                    .expect("images of bounded sets in Q^1 have a radius");
                BoundedSet::cube(1, beta * gamma).expect("radius is nonnegative")
            }
            _ => unreachable!("basis sets of MX are measure classes"),
        },
    ))
}

/// An element `Σ aᵢ xᵢ` of the free vector space `LX`.
///
/// Canonical like [`SignedMeasure`]: sorted, merged, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalLinComb {
    terms: Vec<(Point, Rational)>,
    space: Arc<Space>,
}

impl FormalLinComb {
    pub fn zero(space: Space) -> Self {
        FormalLinComb {
            terms: Vec::new(),
            space: Arc::new(space),
        }
    }

    pub fn from_terms<I>(space: Space, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Rational)>,
    {
        let pairs: Vec<_> = pairs.into_iter().collect();
        for (p, _) in &pairs {
            space.check_point(p)?;
        }
        Ok(FormalLinComb {
            terms: canonical_terms(pairs),
            space: Arc::new(space),
        })
    }

    /// The generator `ς(x) = 1·x`.
    pub fn generator(space: &Space, x: Point) -> Result<Self> {
        Self::from_terms(space.clone(), [(x, qi(1))])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn terms(&self) -> &[(Point, Rational)] {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> + '_ {
        self.terms.iter().map(|(p, _)| p)
    }

    pub fn coefficient(&self, p: &Point) -> Rational {
        self.terms
            .iter()
            .find(|(x, _)| x == p)
            .map(|(_, a)| a.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn l1_norm(&self) -> Rational {
        self.terms.iter().map(|(_, a)| a.abs()).sum()
    }

    pub fn add(&self, other: &FormalLinComb) -> Result<FormalLinComb> {
        if self.space != other.space {
            return Err(Error::spaces(self.space(), other.space()));
        }
        Ok(FormalLinComb {
            terms: canonical_terms(self.terms.iter().chain(&other.terms).cloned()),
            space: self.space.clone(),
        })
    }

    pub fn scale(&self, a: &Rational) -> FormalLinComb {
        FormalLinComb {
            terms: canonical_terms(self.terms.iter().map(|(p, c)| (p.clone(), c * a))),
            space: self.space.clone(),
        }
    }

    /// The functor action `Lf`.
    pub fn map(&self, f: &Morphism) -> Result<FormalLinComb> {
        if f.domain() != self.space() {
            return Err(Error::spaces(f.domain(), self.space()));
        }
        let mut moved = Vec::with_capacity(self.terms.len());
        for (p, a) in &self.terms {
            let y = f.apply_unchecked(p);
            f.codomain().check_point(&y)?;
            moved.push((y, a.clone()));
        }
        FormalLinComb::from_terms(f.codomain().clone(), moved)
    }
}

impl fmt::Display for FormalLinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{{")?;
        for (i, (p, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}: {a}")?;
        }
        write!(f, "}}")
    }
}

/// `Δ_X(Σ aᵢ xᵢ) = Σ aᵢ δ_{xᵢ}`.
pub fn delta_embed(l: &FormalLinComb) -> SignedMeasure {
    SignedMeasure::from_canonical(l.space.clone(), l.terms.clone())
}

/// The multiplication `τ` of `𝕃`: `Σ aⱼ ℓⱼ ↦ Σⱼ aⱼ·ℓⱼ`.
pub fn flatten_formal(ll: &FormalLinComb) -> Result<FormalLinComb> {
    let base = formal_base(ll.space())?;
    let terms = canonical_terms(ll.terms.iter().flat_map(|(p, outer)| {
        p.as_formal()
            .expect("atoms of a combination on LX are combinations")
            .terms
            .iter()
            .map(move |(x, a)| (x.clone(), a * outer))
    }));
    Ok(FormalLinComb { terms, space: base })
}

/// `Δ_X: LX → MX` as a morphism.
pub fn delta_morphism(space: &Space) -> Morphism {
    let support_space = space.clone();
    Morphism::trusted(
        "Delta",
        Space::formal(space.clone()),
        Space::measures(space.clone()),
        |p| Point::Measure(delta_embed(p.as_formal().expect("point of LX"))),
        move |b| match b.bound() {
            Bound::MeasureClass { support, gamma } => {
                debug_assert_eq!(support.space(), &support_space);
                BoundedSet::measure_class((**support).clone(), gamma.clone())
                    .expect("same class on MX")
            }
            _ => unreachable!("basis sets of LX are ℓ¹ classes"),
        },
    )
}

/// `ς_X: X → LX`.
pub fn formal_unit_morphism(space: &Space) -> Morphism {
    let base = Arc::new(space.clone());
    Morphism::trusted(
        "varsigma",
        space.clone(),
        Space::FormalSpace(base.clone()),
        move |p| {
            Point::Formal(FormalLinComb {
                terms: vec![(p.clone(), qi(1))],
                space: base.clone(),
            })
        },
        |b| BoundedSet::formal_class(b.clone(), qi(1)).expect("γ = 1"),
    )
}

/// Seeded check of the unit and associativity laws of `𝕄` on `base`.
pub fn check_monad_laws(base: &Space, seed: u64, cases: usize) -> LawReport {
    check_monad_laws_with(base, seed, cases, standard_kappa())
}

/// [`check_monad_laws`] with a replacement for `κ` at every level.
pub fn check_monad_laws_with(
    base: &Space,
    seed: u64,
    cases: usize,
    kappa_impl: KappaFn,
) -> LawReport {
    let mut report = LawReport::new(format!("monad laws on {base}"), seed, cases);
    let mx = Space::measures(base.clone());
    let mmx = Space::measures(mx.clone());
    let delta_x = dirac_morphism(base);
    let delta_mx = dirac_morphism(&mx);
    let kappa_x = kappa_morphism_with(base, kappa_impl.clone());
    for case in 0..cases {
        let cs = case_seed(seed, case);
        let mut rng = rng_from(cs);
        let mu = gen::random_measure(&mut rng, base);
        let m3 = gen::random_measure(&mut rng, &mmx);

        let dm = delta_mx.apply_unchecked(&Point::Measure(mu.clone()));
        let lhs = kappa_impl(dm.as_measure().expect("δ gives a measure"));
        report.check("kappa.delta_M = 1", case, cs, || vec![mu.to_string()], &lhs, &mu);

        match mu.pushforward(&delta_x) {
            Ok(m_delta) => {
                let lhs = kappa_impl(&m_delta);
                report.check("kappa.M(delta) = 1", case, cs, || vec![mu.to_string()], &lhs, &mu);
            }
            Err(e) => report.error("kappa.M(delta) = 1", case, cs, e),
        }

        let via_m_kappa = m3.pushforward(&kappa_x).map(|m| kappa_impl(&m));
        let via_kappa_m = kappa_impl(&m3);
        match via_m_kappa {
            Ok(lhs) => {
                let rhs = kappa_impl(&via_kappa_m);
                report.check(
                    "kappa.M(kappa) = kappa.kappa_M",
                    case,
                    cs,
                    || vec![m3.to_string()],
                    &lhs,
                    &rhs,
                );
            }
            Err(e) => report.error("kappa.M(kappa) = kappa.kappa_M", case, cs, e),
        }
    }
    report
}

/// Seeded check that `δ` and `κ` are natural: for random `f: T → target`,
/// `Mf(δ_t) = δ_{f t}` and `Mf(κ𝔐) = κ(MMf 𝔐)`.
pub fn check_naturality(target: &Space, seed: u64, cases: usize) -> LawReport {
    let mut report = LawReport::new(format!("naturality into {target}"), seed, cases);
    for case in 0..cases {
        let cs = case_seed(seed, case);
        let mut rng = rng_from(cs);
        let f = gen::random_table_morphism(&mut rng, target);
        let t_space = f.domain().clone();
        let t = gen::random_point(&mut rng, &t_space);
        let mm = gen::random_measure(&mut rng, &Space::measures(t_space.clone()));

        let lhs = dirac(&t_space, t.clone()).and_then(|d| d.pushforward(&f));
        let rhs = dirac(target, f.apply_unchecked(&t));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.check("M(f).delta = delta.f", case, cs, || vec![t.to_string()], &l, &r),
            (Err(e), _) | (_, Err(e)) => report.error("M(f).delta = delta.f", case, cs, e),
        }

        let lhs = kappa(&mm).and_then(|k| k.pushforward(&f));
        let rhs = mm
            .pushforward(&measure_functor(&f))
            .and_then(|m| kappa(&m));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.check("M(f).kappa = kappa.MM(f)", case, cs, || vec![mm.to_string()], &l, &r),
            (Err(e), _) | (_, Err(e)) => report.error("M(f).kappa = kappa.MM(f)", case, cs, e),
        }
    }
    report
}

/// Seeded check that `Δ` is a monad morphism `𝕃 → 𝕄` on `base`:
/// `Δ∘ς = δ` and `Δ∘τ = κ∘MΔ∘Δ_L`. The second square is also checked in
/// its other form `κ∘Δ_M∘LΔ`.
pub fn check_monad_morphism(base: &Space, seed: u64, cases: usize) -> LawReport {
    let mut report = LawReport::new(format!("monad morphism Delta on {base}"), seed, cases);
    let lx = Space::formal(base.clone());
    let delta_x = delta_morphism(base);
    for case in 0..cases {
        let cs = case_seed(seed, case);
        let mut rng = rng_from(cs);
        let x = gen::random_point(&mut rng, base);
        let ll = gen::random_formal(&mut rng, &lx);

        let unit = FormalLinComb::generator(base, x.clone()).map(|g| delta_embed(&g));
        match (unit, dirac(base, x.clone())) {
            (Ok(l), Ok(r)) => report.check("Delta.varsigma = delta", case, cs, || vec![x.to_string()], &l, &r),
            (Err(e), _) | (_, Err(e)) => report.error("Delta.varsigma = delta", case, cs, e),
        }

        let lhs = flatten_formal(&ll).map(|l| delta_embed(&l));
        let rhs = delta_embed(&ll)
            .pushforward(&delta_x)
            .and_then(|m| kappa(&m));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                report.check("Delta.tau = kappa.M(Delta).Delta_L", case, cs, || vec![ll.to_string()], &l, &r)
            }
            (Err(e), _) | (_, Err(e)) => report.error("Delta.tau = kappa.M(Delta).Delta_L", case, cs, e),
        }

        let other = ll
            .map(&delta_x)
            .map(|l_mx| delta_embed(&l_mx))
            .and_then(|m| kappa(&m));
        let lhs = flatten_formal(&ll).map(|l| delta_embed(&l));
        match (lhs, other) {
            (Ok(l), Ok(r)) => {
                report.check("Delta.tau = kappa.Delta_M.L(Delta)", case, cs, || vec![ll.to_string()], &l, &r)
            }
            (Err(e), _) | (_, Err(e)) => report.error("Delta.tau = kappa.Delta_M.L(Delta)", case, cs, e),
        }
    }
    report
}

/// `Ev_E = [E]♯` as a convenience for callers that need both routes.
pub fn evaluation_as_lift(space: &Space, set: &BTreeSet<Point>) -> Result<Morphism> {
    lift_real(&characteristic_morphism(space, set)?)
}
