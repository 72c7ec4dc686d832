//! Measurable bornological spaces in representable form.
//!
//! A [`Space`] describes a carrier set together with a basis for its
//! bornology. σ-algebras are always discrete on representable carriers: a
//! finitely-supported measure only ever looks at its integrand on its atoms,
//! so measurability never has to be checked. Boundedness does, and is
//! carried by [`BoundedSet`] descriptors and by the bound transformer every
//! [`Morphism`] declares.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gen;
use crate::monad::FormalLinComb;
use crate::signed_measure::SignedMeasure;
use crate::{qi, Rational};

/// A point of some carrier.
///
/// The derived order is the canonical one: integers by value, labels
/// lexicographically, vectors and tuples componentwise-lexicographically and
/// measure-points by their canonical atom lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Int(i64),
    Label(String),
    Vector(Vec<Rational>),
    Measure(SignedMeasure),
    Formal(FormalLinComb),
    Tuple(Vec<Point>),
}

impl Point {
    pub fn label(s: impl Into<String>) -> Self {
        Point::Label(s.into())
    }

    /// A point of the rational line `ℚ¹`.
    pub fn scalar(value: Rational) -> Self {
        Point::Vector(vec![value])
    }

    pub fn vector<I: IntoIterator<Item = Rational>>(coords: I) -> Self {
        Point::Vector(coords.into_iter().collect())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Point::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[Rational]> {
        match self {
            Point::Vector(v) => Some(v),
            _ => None,
        }
    }

    /// The value of a point of the rational line.
    pub fn as_scalar(&self) -> Option<&Rational> {
        match self {
            Point::Vector(v) if v.len() == 1 => Some(&v[0]),
            _ => None,
        }
    }

    pub fn as_measure(&self) -> Option<&SignedMeasure> {
        match self {
            Point::Measure(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_formal(&self) -> Option<&FormalLinComb> {
        match self {
            Point::Formal(l) => Some(l),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Point]> {
        match self {
            Point::Tuple(t) => Some(t),
            _ => None,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Point::Int(_) => "integer",
            Point::Label(_) => "label",
            Point::Vector(_) => "vector",
            Point::Measure(_) => "measure",
            Point::Formal(_) => "formal combination",
            Point::Tuple(_) => "tuple",
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Int(n) => write!(f, "{n}"),
            Point::Label(s) => write!(f, "{s}"),
            Point::Vector(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Point::Measure(m) => write!(f, "{m}"),
            Point::Formal(l) => write!(f, "{l}"),
            Point::Tuple(t) => {
                write!(f, "<")?;
                for (i, p) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ">")
            }
        }
    }
}

/// Descriptor of a measurable bornological set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    /// A finite set of labels; every subset is bounded.
    FiniteLabeled(BTreeSet<String>),
    /// `ℤ` with basis `{[−n, n]}`.
    IntegerLine,
    /// `ℚⁿ` with basis of boxes `[−r, r]ⁿ`.
    RationalVector(usize),
    /// `MX`, the finitely-supported signed measures on `X`, with basis
    /// `M(B, X, γ)`.
    MeasureSpace(Arc<Space>),
    /// `LX`, formal linear combinations of points of `X`, bounded like `MX`
    /// (support in a bounded set, coefficient ℓ¹-norm at most γ).
    FormalSpace(Arc<Space>),
    /// Product with the initial bornology.
    Product(Vec<Space>),
    /// A bounded subset of `ambient`, every subset of which is bounded.
    Subspace {
        ambient: Arc<Space>,
        bound: Arc<BoundedSet>,
    },
}

impl Space {
    pub fn finite_labeled<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: BTreeSet<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        Ok(Space::FiniteLabeled(labels))
    }

    pub fn integer_line() -> Self {
        Space::IntegerLine
    }

    pub fn rational_vector(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Space::RationalVector(dimension))
    }

    /// The rational line `ℚ¹`, codomain of every real-valued morphism.
    pub fn real_line() -> Self {
        Space::RationalVector(1)
    }

    /// The one-point space `1`.
    pub fn one_point() -> Self {
        Space::FiniteLabeled(BTreeSet::from(["*".to_string()]))
    }

    pub fn measures(base: Space) -> Self {
        Space::MeasureSpace(Arc::new(base))
    }

    pub fn formal(base: Space) -> Self {
        Space::FormalSpace(Arc::new(base))
    }

    pub fn product(factors: Vec<Space>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument(
                "a product needs at least one factor".into(),
            ));
        }
        Ok(Space::Product(factors))
    }

    /// The subspace carried by a bounded set.
    pub fn subspace(bound: BoundedSet) -> Self {
        Space::Subspace {
            ambient: Arc::new(bound.space.clone()),
            bound: Arc::new(bound),
        }
    }

    /// Base space of `MX` or `LX`.
    pub fn base(&self) -> Option<&Space> {
        match self {
            Space::MeasureSpace(b) | Space::FormalSpace(b) => Some(b),
            _ => None,
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            Space::RationalVector(n) => Some(*n),
            _ => None,
        }
    }

    /// Checks that `p` is a point of this carrier.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        let ok = match (self, p) {
            (Space::FiniteLabeled(labels), Point::Label(l)) => {
                if !labels.contains(l) {
                    return Err(Error::kind(self, format!("unknown label `{l}`")));
                }
                true
            }
            (Space::IntegerLine, Point::Int(_)) => true,
            (Space::RationalVector(n), Point::Vector(v)) => v.len() == *n,
            (Space::MeasureSpace(base), Point::Measure(m)) => m.space() == &**base,
            (Space::FormalSpace(base), Point::Formal(l)) => l.space() == &**base,
            (Space::Product(factors), Point::Tuple(t)) => {
                if factors.len() != t.len() {
                    false
                } else {
                    for (s, c) in factors.iter().zip(t) {
                        s.check_point(c)?;
                    }
                    true
                }
            }
            (Space::Subspace { ambient, bound }, p) => {
                ambient.check_point(p)?;
                if !bound.contains_unchecked(p) {
                    return Err(Error::kind(self, format!("{p} outside the subspace")));
                }
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::kind(self, format!("{} {p}", p.kind_name())))
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.check_point(p).is_ok()
    }

    /// A basis set containing every point in `points`.
    ///
    /// This is the covering half of the bornology axioms: every point, and
    /// every finite set of points, lies in some basis set.
    pub fn cover<'a, I>(&self, points: I) -> Result<BoundedSet>
    where
        I: IntoIterator<Item = &'a Point>,
    {
        let points: Vec<&Point> = points.into_iter().collect();
        for p in &points {
            self.check_point(p)?;
        }
        let bound = match self {
            Space::FiniteLabeled(_) | Space::Subspace { .. } => Bound::Whole,
            Space::IntegerLine => Bound::Interval(
                points
                    .iter()
                    .map(|p| p.as_int().unwrap_or(0).unsigned_abs())
                    .max()
                    .unwrap_or(0),
            ),
            Space::RationalVector(_) => Bound::Cube(
                points
                    .iter()
                    .flat_map(|p| p.as_vector().unwrap_or(&[]).iter())
                    .map(|c| c.abs())
                    .max()
                    .unwrap_or_else(Rational::zero),
            ),
            Space::MeasureSpace(base) => {
                let measures: Vec<&SignedMeasure> =
                    points.iter().filter_map(|p| p.as_measure()).collect();
                let support: BTreeSet<Point> = measures
                    .iter()
                    .flat_map(|m| m.support().cloned())
                    .collect();
                let gamma = measures
                    .iter()
                    .map(|m| m.total_variation())
                    .max()
                    .unwrap_or_else(Rational::zero);
                Bound::MeasureClass {
                    support: Box::new(base.cover(&support)?),
                    gamma: positive_or_one(gamma),
                }
            }
            Space::FormalSpace(base) => {
                let combos: Vec<&FormalLinComb> =
                    points.iter().filter_map(|p| p.as_formal()).collect();
                let support: BTreeSet<Point> =
                    combos.iter().flat_map(|l| l.support().cloned()).collect();
                let gamma = combos
                    .iter()
                    .map(|l| l.l1_norm())
                    .max()
                    .unwrap_or_else(Rational::zero);
                Bound::MeasureClass {
                    support: Box::new(base.cover(&support)?),
                    gamma: positive_or_one(gamma),
                }
            }
            Space::Product(factors) => {
                let mut parts = Vec::with_capacity(factors.len());
                for (i, f) in factors.iter().enumerate() {
                    let coords: Vec<&Point> =
                        points.iter().filter_map(|p| p.as_tuple().map(|t| &t[i])).collect();
                    parts.push(f.cover(coords)?);
                }
                Bound::Product(parts)
            }
        };
        Ok(BoundedSet {
            space: self.clone(),
            bound,
        })
    }

    /// A fixed family of basis sets used for spot checks.
    pub fn probe_basis(&self) -> Vec<BoundedSet> {
        let bounds: Vec<Bound> = match self {
            Space::FiniteLabeled(_) | Space::Subspace { .. } => vec![Bound::Whole],
            Space::IntegerLine => (0..=8)
                .chain([64, 4096])
                .map(Bound::Interval)
                .collect(),
            Space::RationalVector(_) => [crate::q(1, 2), qi(1), qi(2), qi(8), qi(100)]
                .into_iter()
                .map(Bound::Cube)
                .collect(),
            Space::MeasureSpace(base) | Space::FormalSpace(base) => {
                let mut out = Vec::new();
                for b in base.probe_basis().into_iter().take(3) {
                    for gamma in [qi(1), crate::q(5, 2)] {
                        out.push(Bound::MeasureClass {
                            support: Box::new(b.clone()),
                            gamma,
                        });
                    }
                }
                out
            }
            Space::Product(factors) => {
                let probes: Vec<Vec<BoundedSet>> =
                    factors.iter().map(Space::probe_basis).collect();
                let rounds = probes.iter().map(Vec::len).max().unwrap_or(0);
                (0..rounds)
                    .map(|i| {
                        Bound::Product(
                            probes
                                .iter()
                                .map(|p| p[i.min(p.len() - 1)].clone())
                                .collect(),
                        )
                    })
                    .collect()
            }
        };
        bounds
            .into_iter()
            .map(|bound| BoundedSet {
                space: self.clone(),
                bound,
            })
            .collect()
    }
}

fn positive_or_one(r: Rational) -> Rational {
    if r.is_positive() {
        r
    } else {
        qi(1)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::FiniteLabeled(labels) => {
                write!(f, "{{")?;
                for (i, l) in labels.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, "}}")
            }
            Space::IntegerLine => write!(f, "Z"),
            Space::RationalVector(n) => write!(f, "Q^{n}"),
            Space::MeasureSpace(b) => write!(f, "M({b})"),
            Space::FormalSpace(b) => write!(f, "L({b})"),
            Space::Product(fs) => {
                for (i, s) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
            Space::Subspace { bound, .. } => write!(f, "sub({bound})"),
        }
    }
}

/// One element of a space's bornology basis, or an explicit finite set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    /// The whole carrier (finite labeled spaces and subspaces).
    Whole,
    /// `[−n, n]` on the integer line.
    Interval(u64),
    /// `[−r, r]ⁿ` on `ℚⁿ`.
    Cube(Rational),
    /// `M(B, X, γ)` on `MX` (or its analogue on `LX`).
    MeasureClass {
        support: Box<BoundedSet>,
        gamma: Rational,
    },
    /// Product of factor bounded sets.
    Product(Vec<BoundedSet>),
    /// A finite explicit point set; always bounded.
    Finite(BTreeSet<Point>),
}

/// A bounded subset of a [`Space`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundedSet {
    space: Space,
    bound: Bound,
}

impl BoundedSet {
    /// Validates that `bound` is a descriptor of the right shape for `space`.
    pub fn new(space: Space, bound: Bound) -> Result<Self> {
        let ok = match (&space, &bound) {
            (Space::FiniteLabeled(_) | Space::Subspace { .. }, Bound::Whole) => true,
            (Space::IntegerLine, Bound::Interval(_)) => true,
            (Space::RationalVector(_), Bound::Cube(r)) => !r.is_negative(),
            (
                Space::MeasureSpace(base) | Space::FormalSpace(base),
                Bound::MeasureClass { support, gamma },
            ) => gamma.is_positive() && support.space == **base,
            (Space::Product(factors), Bound::Product(parts)) => {
                factors.len() == parts.len()
                    && factors.iter().zip(parts).all(|(f, p)| &p.space == f)
            }
            (_, Bound::Finite(points)) => {
                for p in points {
                    space.check_point(p)?;
                }
                true
            }
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidBound(format!(
                "{} is not a bounded set of {space}",
                BoundedSet {
                    space: space.clone(),
                    bound
                }
            )));
        }
        Ok(BoundedSet { space, bound })
    }

    pub fn finite<I: IntoIterator<Item = Point>>(space: Space, points: I) -> Result<Self> {
        Self::new(space, Bound::Finite(points.into_iter().collect()))
    }

    pub fn interval(n: u64) -> Self {
        BoundedSet {
            space: Space::IntegerLine,
            bound: Bound::Interval(n),
        }
    }

    pub fn cube(dimension: usize, radius: Rational) -> Result<Self> {
        Self::new(Space::rational_vector(dimension)?, Bound::Cube(radius))
    }

    pub fn whole(space: Space) -> Result<Self> {
        Self::new(space, Bound::Whole)
    }

    /// `M(B, X, γ)`: measures supported by `support` with total variation at
    /// most `gamma`.
    pub fn measure_class(support: BoundedSet, gamma: Rational) -> Result<Self> {
        let space = Space::measures(support.space.clone());
        Self::new(
            space,
            Bound::MeasureClass {
                support: Box::new(support),
                gamma,
            },
        )
    }

    /// Formal combinations supported by `support` with ℓ¹-norm at most
    /// `gamma`.
    pub fn formal_class(support: BoundedSet, gamma: Rational) -> Result<Self> {
        let space = Space::formal(support.space.clone());
        Self::new(
            space,
            Bound::MeasureClass {
                support: Box::new(support),
                gamma,
            },
        )
    }

    pub fn product(parts: Vec<BoundedSet>) -> Result<Self> {
        let space = Space::product(parts.iter().map(|p| p.space.clone()).collect())?;
        Self::new(space, Bound::Product(parts))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn bound(&self) -> &Bound {
        &self.bound
    }

    pub fn as_finite(&self) -> Option<&BTreeSet<Point>> {
        match &self.bound {
            Bound::Finite(s) => Some(s),
            _ => None,
        }
    }

    /// Membership test; errors if `p` is not a point of the space.
    pub fn is_bounded_member(&self, p: &Point) -> Result<bool> {
        self.space.check_point(p)?;
        Ok(self.contains_unchecked(p))
    }

    /// Membership for points already known to be kind-correct.
    pub(crate) fn contains_unchecked(&self, p: &Point) -> bool {
        match (&self.bound, p) {
            (Bound::Whole, _) => true,
            (Bound::Interval(n), Point::Int(v)) => v.unsigned_abs() <= *n,
            (Bound::Cube(r), Point::Vector(v)) => v.iter().all(|c| c.abs() <= *r),
            (Bound::MeasureClass { support, gamma }, Point::Measure(m)) => {
                m.support().all(|x| support.contains_unchecked(x))
                    && m.total_variation() <= *gamma
            }
            (Bound::MeasureClass { support, gamma }, Point::Formal(l)) => {
                l.support().all(|x| support.contains_unchecked(x)) && l.l1_norm() <= *gamma
            }
            (Bound::Product(parts), Point::Tuple(t)) => {
                parts.len() == t.len()
                    && parts.iter().zip(t).all(|(b, c)| b.contains_unchecked(c))
            }
            (Bound::Finite(s), p) => s.contains(p),
            _ => false,
        }
    }

    /// A basis set containing both `self` and `other`.
    pub fn join(&self, other: &BoundedSet) -> Result<BoundedSet> {
        if self.space != other.space {
            return Err(Error::spaces(&self.space, &other.space));
        }
        if let (Bound::Finite(a), Bound::Finite(b)) = (&self.bound, &other.bound) {
            return Ok(BoundedSet {
                space: self.space.clone(),
                bound: Bound::Finite(a.union(b).cloned().collect()),
            });
        }
        let a = self.to_basis()?;
        let b = other.to_basis()?;
        let bound = match (&a.bound, &b.bound) {
            (Bound::Whole, Bound::Whole) => Bound::Whole,
            (Bound::Interval(m), Bound::Interval(n)) => Bound::Interval(*m.max(n)),
            (Bound::Cube(r), Bound::Cube(s)) => Bound::Cube(r.max(s).clone()),
            (
                Bound::MeasureClass { support: s1, gamma: g1 },
                Bound::MeasureClass { support: s2, gamma: g2 },
            ) => Bound::MeasureClass {
                support: Box::new(s1.join(s2)?),
                gamma: g1.max(g2).clone(),
            },
            (Bound::Product(p1), Bound::Product(p2)) => Bound::Product(
                p1.iter()
                    .zip(p2)
                    .map(|(x, y)| x.join(y))
                    .collect::<Result<_>>()?,
            ),
            _ => unreachable!("basis descriptors of one space share a shape"),
        };
        Ok(BoundedSet {
            space: self.space.clone(),
            bound,
        })
    }

    /// The smallest basis descriptor containing this set. Basis sets are
    /// returned unchanged; finite sets are covered.
    pub fn to_basis(&self) -> Result<BoundedSet> {
        match &self.bound {
            Bound::Finite(points) => self.space.cover(points),
            _ => Ok(self.clone()),
        }
    }

    /// Radius `r` with every point inside `[−r, r]ⁿ`, for bounded sets of
    /// `ℚⁿ`.
    pub fn sup_radius(&self) -> Option<Rational> {
        match (&self.space, &self.bound) {
            (Space::RationalVector(_), Bound::Cube(r)) => Some(r.clone()),
            (Space::RationalVector(_), Bound::Finite(_)) => match self.to_basis().ok()?.bound {
                Bound::Cube(r) => Some(r),
                _ => None,
            },
            _ => None,
        }
    }

    /// All members, in a fixed order, if the set is finite and has at most
    /// `limit` of them. Integer intervals enumerate as `0, 1, −1, 2, −2, …`.
    pub fn enumerate(&self, limit: usize) -> Option<Vec<Point>> {
        let points: Vec<Point> = match (&self.space, &self.bound) {
            (_, Bound::Finite(s)) => s.iter().cloned().collect(),
            (Space::FiniteLabeled(labels), Bound::Whole) => {
                labels.iter().cloned().map(Point::Label).collect()
            }
            (Space::Subspace { bound, .. }, Bound::Whole) => return bound.enumerate(limit),
            (_, Bound::Interval(n)) => {
                let n = i64::try_from(*n).ok()?;
                if usize::try_from(2 * n + 1).ok()? > limit {
                    return None;
                }
                std::iter::once(0)
                    .chain((1..=n).flat_map(|k| [k, -k]))
                    .map(Point::Int)
                    .collect()
            }
            (_, Bound::Product(parts)) => {
                let mut acc: Vec<Vec<Point>> = vec![Vec::new()];
                for part in parts {
                    let items = part.enumerate(limit)?;
                    if acc.len().saturating_mul(items.len()) > limit {
                        return None;
                    }
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            items.iter().map(move |x| {
                                let mut next = prefix.clone();
                                next.push(x.clone());
                                next
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(Point::Tuple).collect()
            }
            _ => return None,
        };
        (points.len() <= limit).then_some(points)
    }

    /// A random member, or `None` for an empty finite set.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Point> {
        match (&self.space, &self.bound) {
            (_, Bound::Finite(s)) => {
                if s.is_empty() {
                    None
                } else {
                    s.iter().nth(rng.gen_range(0..s.len())).cloned()
                }
            }
            (Space::FiniteLabeled(labels), Bound::Whole) => labels
                .iter()
                .nth(rng.gen_range(0..labels.len()))
                .cloned()
                .map(Point::Label),
            (Space::Subspace { bound, .. }, Bound::Whole) => bound.sample_point(rng),
            (_, Bound::Interval(n)) => {
                let n = i64::try_from(*n).unwrap_or(i64::MAX / 2);
                Some(Point::Int(rng.gen_range(-n..=n)))
            }
            (Space::RationalVector(d), Bound::Cube(r)) => Some(Point::Vector(
                (0..*d).map(|_| gen::rational_within(rng, r)).collect(),
            )),
            (Space::MeasureSpace(base), Bound::MeasureClass { support, gamma }) => {
                let pairs = sample_weighted_atoms(rng, support);
                let m = SignedMeasure::from_atoms((**base).clone(), pairs).ok()?;
                let tv = m.total_variation();
                Some(Point::Measure(if tv > *gamma {
                    m.scale(&(gamma / tv))
                } else {
                    m
                }))
            }
            (Space::FormalSpace(base), Bound::MeasureClass { support, gamma }) => {
                let pairs = sample_weighted_atoms(rng, support);
                let l = FormalLinComb::from_terms((**base).clone(), pairs).ok()?;
                let norm = l.l1_norm();
                Some(Point::Formal(if norm > *gamma {
                    l.scale(&(gamma / norm))
                } else {
                    l
                }))
            }
            (_, Bound::Product(parts)) => parts
                .iter()
                .map(|p| p.sample_point(rng))
                .collect::<Option<Vec<_>>>()
                .map(Point::Tuple),
            _ => None,
        }
    }

    /// The full member list when it is small, otherwise `limit` samples.
    pub fn probe_points<R: Rng + ?Sized>(&self, rng: &mut R, limit: usize) -> Vec<Point> {
        if let Some(all) = self.enumerate(limit) {
            return all;
        }
        (0..limit).filter_map(|_| self.sample_point(rng)).collect()
    }
}

fn sample_weighted_atoms<R: Rng + ?Sized>(
    rng: &mut R,
    support: &BoundedSet,
) -> Vec<(Point, Rational)> {
    let count = gen::atom_count(rng);
    (0..count)
        .filter_map(|_| {
            support
                .sample_point(rng)
                .map(|p| (p, gen::small_rational(rng)))
        })
        .collect()
}

impl fmt::Display for BoundedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.bound {
            Bound::Whole => write!(f, "all of {}", self.space),
            Bound::Interval(n) => write!(f, "[-{n}, {n}]"),
            Bound::Cube(r) => match self.space.dimension() {
                Some(d) => write!(f, "[-{r}, {r}]^{d}"),
                None => write!(f, "[-{r}, {r}]"),
            },
            Bound::MeasureClass { support, gamma } => write!(f, "M({support}, {gamma})"),
            Bound::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            Bound::Finite(s) => {
                write!(f, "{{")?;
                for (i, p) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// A total map on points.
pub type PointMap = Arc<dyn Fn(&Point) -> Point + Send + Sync>;
/// A total map on bounded sets, certifying where bounded sets land.
pub type BoundMap = Arc<dyn Fn(&BoundedSet) -> BoundedSet + Send + Sync>;

/// How [`make_morphism`] spot-checks a declared bound transformer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismCheck {
    pub seed: u64,
    /// Points drawn per probed basis set.
    pub samples: usize,
}

impl Default for MorphismCheck {
    fn default() -> Self {
        MorphismCheck {
            seed: 0x5eed_b0b1,
            samples: 256,
        }
    }
}

/// A measurable, bornological map between spaces.
#[derive(Clone)]
pub struct Morphism {
    name: String,
    domain: Space,
    codomain: Space,
    map: PointMap,
    bound: BoundMap,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .finish_non_exhaustive()
    }
}

/// Builds a morphism after spot-checking its bound transformer with the
/// default [`MorphismCheck`].
pub fn make_morphism<F, B>(
    name: impl Into<String>,
    domain: Space,
    codomain: Space,
    map: F,
    bound: B,
) -> Result<Morphism>
where
    F: Fn(&Point) -> Point + Send + Sync + 'static,
    B: Fn(&BoundedSet) -> BoundedSet + Send + Sync + 'static,
{
    Morphism::checked(name, domain, codomain, map, bound, MorphismCheck::default())
}

impl Morphism {
    /// Builds a morphism, probing every basis set of
    /// [`Space::probe_basis`] with `check.samples` points. The first point
    /// whose image escapes the declared bound is reported.
    pub fn checked<F, B>(
        name: impl Into<String>,
        domain: Space,
        codomain: Space,
        map: F,
        bound: B,
        check: MorphismCheck,
    ) -> Result<Morphism>
    where
        F: Fn(&Point) -> Point + Send + Sync + 'static,
        B: Fn(&BoundedSet) -> BoundedSet + Send + Sync + 'static,
    {
        let m = Morphism::trusted(name, domain, codomain, map, bound);
        let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
        for basis in m.domain.probe_basis() {
            let image = m.bound_image(&basis)?;
            for p in basis.probe_points(&mut rng, check.samples) {
                let y = (m.map)(&p);
                m.codomain.check_point(&y)?;
                if !image.contains_unchecked(&y) {
                    return Err(Error::NotBornological {
                        morphism: m.name.clone(),
                        point: Box::new(p),
                        image: Box::new(y),
                        bound: image.to_string(),
                    });
                }
            }
        }
        Ok(m)
    }

    /// Builds a morphism without spot checks. Used for the structural maps
    /// of the crate (units, multiplications, evaluations, projections) whose
    /// bounds hold by construction.
    pub fn trusted<F, B>(
        name: impl Into<String>,
        domain: Space,
        codomain: Space,
        map: F,
        bound: B,
    ) -> Morphism
    where
        F: Fn(&Point) -> Point + Send + Sync + 'static,
        B: Fn(&BoundedSet) -> BoundedSet + Send + Sync + 'static,
    {
        Morphism {
            name: name.into(),
            domain,
            codomain,
            map: Arc::new(map),
            bound: Arc::new(bound),
        }
    }

    pub fn identity(space: Space) -> Morphism {
        Morphism::trusted("id", space.clone(), space, Point::clone, BoundedSet::clone)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    /// Applies the map, checking that `p` is in the domain and the image in
    /// the codomain.
    pub fn apply(&self, p: &Point) -> Result<Point> {
        self.domain.check_point(p)?;
        let y = (self.map)(p);
        self.codomain.check_point(&y)?;
        Ok(y)
    }

    /// Applies the map to a point already known to lie in the domain.
    pub(crate) fn apply_unchecked(&self, p: &Point) -> Point {
        (self.map)(p)
    }

    /// A bounded set of the codomain containing the image of `b`.
    ///
    /// Finite sets map to their exact finite image; basis sets go through
    /// the declared bound transformer.
    pub fn bound_image(&self, b: &BoundedSet) -> Result<BoundedSet> {
        if b.space != self.domain {
            return Err(Error::spaces(&b.space, &self.domain));
        }
        if let Bound::Finite(points) = &b.bound {
            return Ok(BoundedSet {
                space: self.codomain.clone(),
                bound: Bound::Finite(points.iter().map(|p| (self.map)(p)).collect()),
            });
        }
        let image = (self.bound)(b);
        if image.space != self.codomain {
            return Err(Error::InvalidBound(format!(
                "bound transformer of `{}` left the codomain {}",
                self.name, self.codomain
            )));
        }
        Ok(image)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Morphism) -> Result<Morphism> {
        if inner.codomain != self.domain {
            return Err(Error::spaces(&inner.codomain, &self.domain));
        }
        let (f, g) = (inner.clone(), self.clone());
        let (fb, gb) = (inner.clone(), self.clone());
        Ok(Morphism::trusted(
            format!("{} . {}", self.name, inner.name),
            inner.domain.clone(),
            self.codomain.clone(),
            move |p| (g.map)(&(f.map)(p)),
            move |b| {
                let mid = fb.bound_image(b).expect("domain checked on composition");
                gb.bound_image(&mid).expect("domain checked on composition")
            },
        ))
    }
}

/// The product space with its projections.
pub fn product_space(factors: Vec<Space>) -> Result<(Space, Vec<Morphism>)> {
    let space = Space::product(factors)?;
    let projections = (0..space_factors(&space).len())
        .map(|i| projection(&space, i))
        .collect::<Result<_>>()?;
    Ok((space, projections))
}

fn space_factors(space: &Space) -> &[Space] {
    match space {
        Space::Product(f) => f,
        _ => &[],
    }
}

/// The `i`-th projection out of a product space.
pub fn projection(product: &Space, i: usize) -> Result<Morphism> {
    let factor = space_factors(product)
        .get(i)
        .cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("no factor {i} in {product}")))?;
    let fallback = factor.clone();
    Ok(Morphism::trusted(
        format!("pi_{i}"),
        product.clone(),
        factor,
        move |p| p.as_tuple().expect("product point")[i].clone(),
        move |b| match b.bound() {
            Bound::Product(parts) => parts[i].clone(),
            _ => BoundedSet {
                space: fallback.clone(),
                bound: Bound::Finite(BTreeSet::new()),
            },
        },
    ))
}

/// The characteristic function `[E]: X → ℚ¹` of a finite set `E`.
pub fn characteristic_morphism(space: &Space, set: &BTreeSet<Point>) -> Result<Morphism> {
    for p in set {
        space.check_point(p)?;
    }
    let set = set.clone();
    let zero_one = BoundedSet {
        space: Space::real_line(),
        bound: Bound::Finite([Point::scalar(qi(0)), Point::scalar(qi(1))].into()),
    };
    Ok(Morphism::trusted(
        "[E]",
        space.clone(),
        Space::real_line(),
        move |p| Point::scalar(qi(i64::from(set.contains(p)))),
        move |_| zero_one.clone(),
    ))
}

/// The inclusion of a subspace into its ambient space.
pub fn inclusion(subspace: &Space) -> Result<Morphism> {
    let Space::Subspace { ambient, bound } = subspace else {
        return Err(Error::kind("a subspace", subspace));
    };
    let whole_image = (**bound).clone();
    Ok(Morphism::trusted(
        "incl",
        subspace.clone(),
        (**ambient).clone(),
        Point::clone,
        move |_| whole_image.clone(),
    ))
}

/// A morphism out of a finite labeled space given by its value table.
pub fn table_morphism(
    name: impl Into<String>,
    domain: Space,
    codomain: Space,
    table: BTreeMap<Point, Point>,
) -> Result<Morphism> {
    let Space::FiniteLabeled(labels) = &domain else {
        return Err(Error::kind("a finite labeled space", &domain));
    };
    for l in labels {
        let key = Point::Label(l.clone());
        let value = table
            .get(&key)
            .ok_or_else(|| Error::InvalidArgument(format!("table has no entry for {key}")))?;
        codomain.check_point(value)?;
    }
    let image = codomain.cover(table.values())?;
    Ok(Morphism::trusted(
        name,
        domain,
        codomain,
        move |p| table[p].clone(),
        move |_| image.clone(),
    ))
}
