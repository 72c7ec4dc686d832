//! Finitely-supported signed measures with exact rational weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::spaces::{inclusion, BoundedSet, Morphism, Point, Space};
use crate::Rational;

/// Sums weights per key, drops zeros and sorts by key.
pub(crate) fn canonical_terms<K, I>(pairs: I) -> Vec<(K, Rational)>
where
    K: Ord,
    I: IntoIterator<Item = (K, Rational)>,
{
    let mut acc: BTreeMap<K, Rational> = BTreeMap::new();
    for (k, w) in pairs {
        *acc.entry(k).or_insert_with(Rational::zero) += w;
    }
    acc.into_iter().filter(|(_, w)| !w.is_zero()).collect()
}

/// A signed measure on a [`Space`] with finitely many atoms.
///
/// Atoms are kept strictly increasing in the canonical point order with no
/// zero weights, so two measures are equal exactly when their canonical
/// forms are. The derived order compares atom lists first; this is the
/// order measure-points carry inside `MX`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedMeasure {
    atoms: Vec<(Point, Rational)>,
    space: Arc<Space>,
}

/// `μ = μ⁺ − μ⁻` together with the Hahn split of the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanDecomposition {
    pub positive_part: SignedMeasure,
    pub negative_part: SignedMeasure,
    pub hahn_positive_set: BTreeSet<Point>,
    pub hahn_negative_set: BTreeSet<Point>,
}

impl JordanDecomposition {
    /// `|μ| = μ⁺ + μ⁻`.
    pub fn variation_measure(&self) -> SignedMeasure {
        self.positive_part
            .add(&self.negative_part)
            .expect("parts share a space")
    }
}

impl SignedMeasure {
    pub fn zero(space: Space) -> Self {
        SignedMeasure {
            atoms: Vec::new(),
            space: Arc::new(space),
        }
    }

    /// Canonicalizes a list of weighted points: duplicates merge by adding
    /// weights, zero weights vanish, atoms sort canonically.
    pub fn from_atoms<I>(space: Space, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Rational)>,
    {
        let pairs: Vec<_> = pairs.into_iter().collect();
        for (p, _) in &pairs {
            space.check_point(p)?;
        }
        Ok(SignedMeasure {
            atoms: canonical_terms(pairs),
            space: Arc::new(space),
        })
    }

    pub(crate) fn from_canonical(space: Arc<Space>, atoms: Vec<(Point, Rational)>) -> Self {
        debug_assert!(atoms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(atoms.iter().all(|(_, w)| !w.is_zero()));
        SignedMeasure { atoms, space }
    }

    /// `Σ wᵢ·xᵢ` on `space` from points assumed kind-correct.
    pub(crate) fn from_trusted_atoms<I>(space: Arc<Space>, pairs: I) -> Self
    where
        I: IntoIterator<Item = (Point, Rational)>,
    {
        SignedMeasure {
            atoms: canonical_terms(pairs),
            space,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    #[cfg(test)]
    pub(crate) fn space_arc(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn atoms(&self) -> &[(Point, Rational)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> + '_ {
        self.atoms.iter().map(|(p, _)| p)
    }

    pub fn support_set(&self) -> BTreeSet<Point> {
        self.support().cloned().collect()
    }

    pub fn weight(&self, p: &Point) -> Rational {
        self.atoms
            .binary_search_by(|(x, _)| x.cmp(p))
            .map(|i| self.atoms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `μ(E)` for a finite set `E`.
    pub fn eval(&self, set: &BTreeSet<Point>) -> Rational {
        self.atoms
            .iter()
            .filter(|(p, _)| set.contains(p))
            .map(|(_, w)| w.clone())
            .sum()
    }

    /// `μ(X)`.
    pub fn mass(&self) -> Rational {
        self.atoms.iter().map(|(_, w)| w.clone()).sum()
    }

    /// Hahn split `P = {w > 0}`, `N = {w < 0}` and the matching Jordan
    /// parts.
    pub fn jordan_hahn(&self) -> JordanDecomposition {
        let (pos, neg): (Vec<_>, Vec<_>) = self
            .atoms
            .iter()
            .cloned()
            .partition(|(_, w)| w.is_positive());
        let negated: Vec<_> = neg.into_iter().map(|(p, w)| (p, -w)).collect();
        JordanDecomposition {
            hahn_positive_set: pos.iter().map(|(p, _)| p.clone()).collect(),
            hahn_negative_set: negated.iter().map(|(p, _)| p.clone()).collect(),
            positive_part: SignedMeasure::from_canonical(self.space.clone(), pos),
            negative_part: SignedMeasure::from_canonical(self.space.clone(), negated),
        }
    }

    /// `‖μ‖ = Σ |wᵢ|`.
    pub fn total_variation(&self) -> Rational {
        self.atoms.iter().map(|(_, w)| w.abs()).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.atoms.iter().all(|(_, w)| w.is_positive())
    }

    /// Nonnegative with mass exactly one.
    pub fn is_probability(&self) -> bool {
        self.is_nonnegative() && self.mass().is_one()
    }

    /// Whether every atom lies in `b`.
    pub fn supported_by(&self, b: &BoundedSet) -> Result<bool> {
        if b.space() != self.space() {
            return Err(Error::spaces(b.space(), self.space()));
        }
        Ok(self.support().all(|p| b.contains_unchecked(p)))
    }

    /// Direct image `Mf(μ)`: atoms move along `f`, collisions merge.
    pub fn pushforward(&self, f: &Morphism) -> Result<SignedMeasure> {
        if f.domain() != self.space() {
            return Err(Error::spaces(f.domain(), self.space()));
        }
        let codomain = f.codomain();
        let mut moved = Vec::with_capacity(self.atoms.len());
        for (p, w) in &self.atoms {
            let y = f.apply_unchecked(p);
            codomain.check_point(&y)?;
            moved.push((y, w.clone()));
        }
        Ok(SignedMeasure::from_trusted_atoms(
            Arc::new(codomain.clone()),
            moved,
        ))
    }

    /// `μ_A`, the same atoms viewed on the subspace `A`.
    ///
    /// Fails with [`Error::SupportViolation`] naming the first atom outside
    /// `A`.
    pub fn restrict(&self, a: &BoundedSet) -> Result<SignedMeasure> {
        if a.space() != self.space() {
            return Err(Error::spaces(a.space(), self.space()));
        }
        if let Some(p) = self.support().find(|p| !a.contains_unchecked(p)) {
            return Err(Error::SupportViolation(Box::new(p.clone())));
        }
        Ok(SignedMeasure::from_canonical(
            Arc::new(Space::subspace(a.clone())),
            self.atoms.clone(),
        ))
    }

    /// Direct image along the inclusion of a subspace; inverse of
    /// [`restrict`](Self::restrict).
    pub fn extend(&self) -> Result<SignedMeasure> {
        self.pushforward(&inclusion(self.space())?)
    }

    pub fn add(&self, other: &SignedMeasure) -> Result<SignedMeasure> {
        if self.space != other.space {
            return Err(Error::spaces(self.space(), other.space()));
        }
        Ok(SignedMeasure::from_trusted_atoms(
            self.space.clone(),
            self.atoms.iter().chain(&other.atoms).cloned(),
        ))
    }

    pub fn sub(&self, other: &SignedMeasure) -> Result<SignedMeasure> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SignedMeasure {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, a: &Rational) -> SignedMeasure {
        if a.is_zero() {
            return SignedMeasure::zero((*self.space).clone());
        }
        SignedMeasure::from_canonical(
            self.space.clone(),
            self.atoms.iter().map(|(p, w)| (p.clone(), w * a)).collect(),
        )
    }
}

impl fmt::Display for SignedMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, w)) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}: {w}")?;
        }
        write!(f, "}}")
    }
}

fn real_value(f: &Morphism, p: &Point) -> Rational {
    f.apply_unchecked(p)
        .as_scalar()
        .cloned()
        .expect("real-valued morphism returned a non-scalar")
}

fn check_real(f: &Morphism, space: &Space) -> Result<()> {
    if f.domain() != space {
        return Err(Error::spaces(f.domain(), space));
    }
    if f.codomain() != &Space::real_line() {
        return Err(Error::kind(Space::real_line(), f.codomain()));
    }
    Ok(())
}

/// `∫ f dμ = Σ f(x)·μ{x}` for a morphism into the rational line.
pub fn integrate_real(f: &Morphism, mu: &SignedMeasure) -> Result<Rational> {
    check_real(f, mu.space())?;
    Ok(mu
        .atoms()
        .iter()
        .map(|(p, w)| real_value(f, p) * w)
        .sum())
}

/// A signed simple function: finitely many disjoint level sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleFunction {
    pub levels: Vec<(BTreeSet<Point>, Rational)>,
}

impl SimpleFunction {
    pub fn value(&self, p: &Point) -> Rational {
        self.levels
            .iter()
            .find(|(s, _)| s.contains(p))
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `∫ θ dμ = Σ level·μ(set)`.
    pub fn integrate(&self, mu: &SignedMeasure) -> Rational {
        self.levels.iter().map(|(s, v)| v * mu.eval(s)).sum()
    }
}

/// `min(⌊2ⁱ v⌋ / 2ⁱ, i)` for `v ≥ 0`.
fn dyadic_below(v: &Rational, i: u32) -> Rational {
    let scale = Rational::from_integer(BigInt::one() << i);
    let level = (v * &scale).floor() / scale;
    let cap = Rational::from_integer(BigInt::from(i));
    level.min(cap)
}

/// The `i`-th dyadic approximant `θᵢ = φᵢ − ψᵢ` of `f` on the finite set
/// `points`, where `φᵢ`, `ψᵢ` approximate `f⁺`, `f⁻` from below on the grid
/// `k/2ⁱ` capped at `i`.
pub fn simple_approximation(
    f: &Morphism,
    points: &BTreeSet<Point>,
    i: u32,
) -> Result<SimpleFunction> {
    let domain = f.domain().clone();
    check_real(f, &domain)?;
    let mut by_level: BTreeMap<Rational, BTreeSet<Point>> = BTreeMap::new();
    for p in points {
        domain.check_point(p)?;
        let v = real_value(f, p);
        let theta = if v.is_negative() {
            -dyadic_below(&-v, i)
        } else {
            dyadic_below(&v, i)
        };
        if !theta.is_zero() {
            by_level.entry(theta).or_default().insert(p.clone());
        }
    }
    Ok(SimpleFunction {
        levels: by_level.into_iter().map(|(v, s)| (s, v)).collect(),
    })
}

/// Smallest `i` with `|f| ≤ i` on `points`, from which the dyadic error is
/// at most `2⁻ⁱ` per point.
pub fn dyadic_depth_for(f: &Morphism, points: &BTreeSet<Point>) -> Result<u32> {
    check_real(f, f.domain())?;
    let max = points
        .iter()
        .map(|p| real_value(f, p).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(max.ceil().to_integer().to_u32().unwrap_or(u32::MAX).max(1))
}
