//! Seeded random instances for the law suites.
//!
//! Atom counts are uniform in `0..=4`; weights are uniform among `p/q` with
//! `|p| ≤ 8` and `1 ≤ q ≤ 8`; integer points come from the window
//! `[−8, 8]`. Every case of a suite draws from its own generator seeded by
//! [`case_seed`], so any failing case can be replayed alone.

use std::collections::BTreeMap;

use num::{BigInt, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::monad::FormalLinComb;
use crate::signed_measure::SignedMeasure;
use crate::spaces::{table_morphism, Morphism, Point, Space};
use crate::Rational;

pub const INTEGER_WINDOW: i64 = 8;
pub const MAX_ATOMS: usize = 4;
const NUMER_BOUND: i64 = 8;
const DENOM_BOUND: i64 = 8;

/// Seed of case `case` in a suite started from `master` (SplitMix64).
pub fn case_seed(master: u64, case: usize) -> u64 {
    let mut z = master.wrapping_add((case as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atom_count<R: Rng + ?Sized>(rng: &mut R) -> usize {
    rng.gen_range(0..=MAX_ATOMS)
}

pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let p = rng.gen_range(-NUMER_BOUND..=NUMER_BOUND);
    let q = rng.gen_range(1..=DENOM_BOUND);
    crate::q(p, q)
}

pub fn nonzero_small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn positive_small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    nonzero_small_rational(rng).abs()
}

/// A rational in `[0, 1]` with denominator at most 8.
pub fn unit_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let q = rng.gen_range(1..=DENOM_BOUND);
    crate::q(rng.gen_range(0..=q), q)
}

/// A rational in `[−r, r]` with denominator at most 8.
pub fn rational_within<R: Rng + ?Sized>(rng: &mut R, r: &Rational) -> Rational {
    let q = rng.gen_range(1..=DENOM_BOUND);
    let scaled = (r * Rational::from_integer(BigInt::from(q))).floor();
    let m = scaled.to_integer().to_i64().unwrap_or(i64::MAX / 4);
    crate::q(rng.gen_range(-m..=m), q)
}

/// A random point of `space`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, space: &Space) -> Point {
    match space {
        Space::FiniteLabeled(labels) => {
            Point::Label(labels.iter().nth(rng.gen_range(0..labels.len())).unwrap().clone())
        }
        Space::IntegerLine => Point::Int(rng.gen_range(-INTEGER_WINDOW..=INTEGER_WINDOW)),
        Space::RationalVector(n) => Point::Vector((0..*n).map(|_| small_rational(rng)).collect()),
        Space::MeasureSpace(base) => Point::Measure(random_measure(rng, base)),
        Space::FormalSpace(base) => Point::Formal(random_formal(rng, base)),
        Space::Product(factors) => {
            Point::Tuple(factors.iter().map(|f| random_point(rng, f)).collect())
        }
        Space::Subspace { bound, .. } => bound
            .sample_point(rng)
            .expect("subspaces used by the generators are non-empty"),
    }
}

pub fn random_measure<R: Rng + ?Sized>(rng: &mut R, space: &Space) -> SignedMeasure {
    let n = atom_count(rng);
    let pairs: Vec<_> = (0..n)
        .map(|_| (random_point(rng, space), small_rational(rng)))
        .collect();
    SignedMeasure::from_atoms(space.clone(), pairs).expect("generated points are kind-correct")
}

pub fn random_formal<R: Rng + ?Sized>(rng: &mut R, space: &Space) -> FormalLinComb {
    let n = atom_count(rng);
    let pairs: Vec<_> = (0..n)
        .map(|_| (random_point(rng, space), small_rational(rng)))
        .collect();
    FormalLinComb::from_terms(space.clone(), pairs).expect("generated points are kind-correct")
}

/// A probability measure with 1 to 4 atoms drawn from `points`.
pub fn random_probability<R: Rng + ?Sized>(
    rng: &mut R,
    space: &Space,
    points: &[Point],
) -> SignedMeasure {
    assert!(!points.is_empty(), "need at least one candidate atom");
    let n = rng.gen_range(1..=MAX_ATOMS);
    let raw: Vec<(Point, Rational)> = (0..n)
        .map(|_| {
            (
                points[rng.gen_range(0..points.len())].clone(),
                positive_small_rational(rng),
            )
        })
        .collect();
    let mass: Rational = raw.iter().map(|(_, w)| w.clone()).sum();
    SignedMeasure::from_atoms(
        space.clone(),
        raw.into_iter().map(|(p, w)| (p, w / &mass)),
    )
    .expect("candidate atoms lie in the space")
}

/// A random finite labeled space `{t0, …, t(k−1)}` with `1 ≤ k ≤ 4`.
pub fn random_index_space<R: Rng + ?Sized>(rng: &mut R) -> Space {
    let k = rng.gen_range(1..=MAX_ATOMS);
    Space::finite_labeled((0..k).map(|i| format!("t{i}"))).unwrap()
}

/// A morphism `T → codomain` out of a random small index space, with
/// random values.
pub fn random_table_morphism<R: Rng + ?Sized>(rng: &mut R, codomain: &Space) -> Morphism {
    let domain = random_index_space(rng);
    let table = index_points(&domain)
        .into_iter()
        .map(|t| (t, random_point(rng, codomain)))
        .collect::<BTreeMap<_, _>>();
    table_morphism("table", domain, codomain.clone(), table).expect("table is total")
}

/// A random table with the given index space.
pub fn random_table_on<R: Rng + ?Sized>(
    rng: &mut R,
    domain: &Space,
    codomain: &Space,
) -> BTreeMap<Point, Point> {
    index_points(domain)
        .into_iter()
        .map(|t| (t, random_point(rng, codomain)))
        .collect()
}

fn index_points(domain: &Space) -> Vec<Point> {
    match domain {
        Space::FiniteLabeled(labels) => labels.iter().cloned().map(Point::Label).collect(),
        _ => Vec::new(),
    }
}
