//! Pettis integrals with values in `ℚⁿ`.
//!
//! In finite dimension the weak σ-algebra is the discrete one already in
//! use, the standard coordinate functionals separate points, and the
//! coordinatewise integral is the unique vector `x` with
//! `φ(x) = ∫ φ∘f dμ` for every functional `φ`.

use num::{Signed, Zero};
use rand::Rng;

use crate::em_algebra::{vector_algebra, Algebra};
use crate::error::{Error, Result};
use crate::gen::{self, case_seed, rng_from};
use crate::report::LawReport;
use crate::signed_measure::SignedMeasure;
use crate::spaces::{inclusion, Bound, BoundedSet, Morphism, Point, Space};
use crate::{qi, Rational};

/// A linear functional `x ↦ Σ aᵢ xᵢ` on `ℚⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Functional {
    coefficients: Vec<Rational>,
}

impl Functional {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        Functional { coefficients }
    }

    /// The `i`-th coordinate functional on `ℚⁿ`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        Functional {
            coefficients: (0..n).map(|j| qi(i64::from(i == j))).collect(),
        }
    }

    pub fn standard_basis(n: usize) -> Vec<Functional> {
        (0..n).map(|i| Functional::coordinate(n, i)).collect()
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        Functional {
            coefficients: (0..n).map(|_| gen::small_rational(rng)).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn apply(&self, x: &[Rational]) -> Rational {
        self.coefficients.iter().zip(x).map(|(a, c)| a * c).sum()
    }
}

/// Whether the family spans the dual of `ℚⁿ`, i.e. separates points.
pub fn separates_points(family: &[Functional], n: usize) -> bool {
    rank(family.iter().map(|f| f.coefficients.clone()).collect()) == n
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &rows[r][c];
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn sup_norm(x: &[Rational]) -> Rational {
    x.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
}

fn vector_value(f: &Morphism, t: &Point) -> Vec<Rational> {
    f.apply_unchecked(t)
        .as_vector()
        .expect("morphism into Q^n")
        .to_vec()
}

/// The coordinatewise integral `x` with `xᵢ = ∫ πᵢ∘f dμ`.
pub fn pettis_integral(n: usize, f: &Morphism, mu: &SignedMeasure) -> Result<Vec<Rational>> {
    if f.domain() != mu.space() {
        return Err(Error::spaces(f.domain(), mu.space()));
    }
    let target = Space::rational_vector(n)?;
    if f.codomain() != &target {
        return Err(Error::kind(target, f.codomain()));
    }
    let mut x = vec![Rational::zero(); n];
    for (t, w) in mu.atoms() {
        for (xi, c) in x.iter_mut().zip(vector_value(f, t)) {
            *xi += c * w;
        }
    }
    Ok(x)
}

/// Checks `φ(x) = ∫ φ∘f dμ` for every supplied `φ`.
///
/// An empty or non-separating family passes vacuously or only weakly; both
/// are flagged in the report notes.
pub fn verify_pettis(
    x: &[Rational],
    f: &Morphism,
    mu: &SignedMeasure,
    functionals: &[Functional],
) -> LawReport {
    let mut report = LawReport::new("pettis identity", 0, functionals.len());
    let n = x.len();
    if functionals.is_empty() {
        report.note("empty functional family: vacuous pass, does not separate points");
    } else if !separates_points(functionals, n) {
        report.note("functional family does not separate points");
    }
    for (i, phi) in functionals.iter().enumerate() {
        if phi.dimension() != n {
            report.error("phi(x) = int phi.f dmu", i, 0, Error::kind(format!("functional on Q^{n}"), format!("functional on Q^{}", phi.dimension())));
            continue;
        }
        let lhs = phi.apply(x);
        let rhs: Rational = mu
            .atoms()
            .iter()
            .map(|(t, w)| phi.apply(&vector_value(f, t)) * w)
            .sum();
        report.check(
            "phi(x) = int phi.f dmu",
            i,
            0,
            || vec![format!("phi = {:?}", phi.coefficients.iter().map(ToString::to_string).collect::<Vec<_>>())],
            &lhs,
            &rhs,
        );
    }
    report
}

fn absorb_verification(
    report: &mut LawReport,
    law: &str,
    case: usize,
    cs: u64,
    verification: LawReport,
) {
    report.checks += verification.checks;
    for failure in verification.failures {
        report.failures.push(crate::report::LawFailure {
            law: law.to_string(),
            case,
            case_seed: cs,
            ..failure
        });
    }
}

/// Seeded constructive check of the routes between the equivalent forms of
/// "has enough Pettis integrals" on `ℚⁿ`:
///
/// - from nonnegative measures to signed ones via the Jordan split;
/// - from inclusions of bounded sets to the identity via restriction;
/// - from the identity to arbitrary bounded `f` via the direct image.
///
/// Every constructed vector is re-verified against the standard basis plus
/// three random functionals.
pub fn enough_pettis_equivalence_check(n: usize, seed: u64, cases: usize) -> LawReport {
    let mut report = LawReport::new(format!("enough Pettis integrals on Q^{n}"), seed, cases);
    let Ok(target) = Space::rational_vector(n) else {
        report.error("dimension", 0, seed, Error::ZeroDimension);
        return report;
    };
    let id = Morphism::identity(target.clone());
    for case in 0..cases {
        let cs = case_seed(seed, case);
        let mut rng = rng_from(cs);
        let mut family = Functional::standard_basis(n);
        family.extend((0..3).map(|_| Functional::random(&mut rng, n)));

        let f = gen::random_table_morphism(&mut rng, &target);
        let mu = gen::random_measure(&mut rng, f.domain());
        let direct = match pettis_integral(n, &f, &mu) {
            Ok(x) => x,
            Err(e) => {
                report.error("direct", case, cs, e);
                continue;
            }
        };
        absorb_verification(&mut report, "direct integral", case, cs, verify_pettis(&direct, &f, &mu, &family));

        // signed from nonnegative: ∫ f dμ⁺ − ∫ f dμ⁻
        let jordan = mu.jordan_hahn();
        let split = pettis_integral(n, &f, &jordan.positive_part).and_then(|p| {
            pettis_integral(n, &f, &jordan.negative_part)
                .map(|m| p.iter().zip(m).map(|(a, b)| a - b).collect::<Vec<_>>())
        });
        match split {
            Ok(x) => {
                absorb_verification(&mut report, "jordan route", case, cs, verify_pettis(&x, &f, &mu, &family));
                report.check("jordan route = direct", case, cs, || vec![mu.to_string()], &Point::Vector(x), &Point::Vector(direct.clone()));
            }
            Err(e) => report.error("jordan route", case, cs, e),
        }

        // nonnegative measures: the split is trivial and both routes agree
        let abs = jordan.variation_measure();
        let abs_direct = pettis_integral(n, &f, &abs);
        let abs_split = pettis_integral(n, &f, &abs.jordan_hahn().positive_part);
        match (abs_direct, abs_split) {
            (Ok(a), Ok(b)) => report.check("nonnegative: jordan route = direct", case, cs, || vec![abs.to_string()], &Point::Vector(a), &Point::Vector(b)),
            (Err(e), _) | (_, Err(e)) => report.error("nonnegative", case, cs, e),
        }

        // identity from inclusions: restrict ν to its support B, integrate ι_B
        let nu = gen::random_measure(&mut rng, &target);
        let restricted = BoundedSet::finite(target.clone(), nu.support().cloned())
            .and_then(|b| nu.restrict(&b))
            .and_then(|nu_b| {
                let iota = inclusion(nu_b.space())?;
                pettis_integral(n, &iota, &nu_b)
            });
        match restricted {
            Ok(x) => {
                absorb_verification(&mut report, "restriction route", case, cs, verify_pettis(&x, &id, &nu, &family));
            }
            Err(e) => report.error("restriction route", case, cs, e),
        }

        // arbitrary f from the identity: ∫ id d(Mf μ)
        match mu.pushforward(&f).and_then(|image| pettis_integral(n, &id, &image)) {
            Ok(x) => {
                absorb_verification(&mut report, "direct-image route", case, cs, verify_pettis(&x, &f, &mu, &family));
            }
            Err(e) => report.error("direct-image route", case, cs, e),
        }
    }
    report
}

/// `ℚⁿ` as an algebra with `c(μ) = ∫ id dμ` taken as a Pettis integral.
pub fn pettis_algebra(n: usize) -> Result<Algebra> {
    let carrier = Space::rational_vector(n)?;
    let id = Morphism::identity(carrier.clone());
    let bounds = vector_algebra(n)?;
    Ok(bounds.with_structure(format!("Pettis Q^{n}"), move |mu| {
        Point::Vector(pettis_integral(n, &id, mu).expect("measure on the carrier"))
    }))
}

/// `‖c(μ)‖_∞ ≤ γ·r` for `μ ∈ M(B, ℚⁿ, γ)` with `B ⊆ [−r, r]ⁿ`.
pub fn respects_sup_bound(x: &[Rational], class: &BoundedSet) -> bool {
    match class.bound() {
        Bound::MeasureClass { support, gamma } => support
            .sup_radius()
            .is_some_and(|r| sup_norm(x) <= r * gamma),
        _ => false,
    }
}
