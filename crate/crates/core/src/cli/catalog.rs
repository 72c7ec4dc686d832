//! Named built-in morphisms for the command line.
//!
//! | name | domain | codomain |
//! |------|--------|----------|
//! | `id` | any | same |
//! | `mod:K` | `Z` | labels `0`..`K-1` |
//! | `embed` | `Z` | `Q^1` |
//! | `affine:a;b1,..,bn` | `Z` (integer `a`, `b`) or `Q^n` | same |
//! | `proj:i` | `Q^n` | `Q^1`, 0-based `i` |
//! | `indicator:e1,e2,..` | labels or `Z` | `Q^1` |

use std::collections::BTreeSet;
use std::str::FromStr;

use num::{Integer, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::spaces::{characteristic_morphism, make_morphism, Bound, BoundedSet, Morphism, Point, Space};
use crate::{qi, Rational};

/// Largest `K` for `mod:K`; the codomain carries one label per residue.
pub const MAX_MODULUS: i64 = 4096;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| invalid(format!("malformed rational `{s}`")))
}

fn integer(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| invalid(format!("malformed integer `{s}`")))
}

fn interval_radius(b: &BoundedSet) -> u64 {
    match b.bound() {
        Bound::Interval(n) => *n,
        _ => unreachable!("basis sets of Z are intervals"),
    }
}

fn cube_radius(b: &BoundedSet) -> Rational {
    b.sup_radius().expect("basis sets of Q^n are boxes")
}

pub fn builtin_morphism(descriptor: &str, domain: &Space) -> Result<Morphism> {
    let (name, args) = descriptor.split_once(':').unwrap_or((descriptor, ""));
    match (name, domain) {
        ("id", _) => Ok(Morphism::identity(domain.clone())),
        ("mod", Space::IntegerLine) => modulo(integer(args)?),
        ("embed", Space::IntegerLine) => make_morphism(
            "embed",
            Space::integer_line(),
            Space::real_line(),
            |p| Point::scalar(qi(p.as_int().expect("integer point"))),
            |b| BoundedSet::cube(1, qi(interval_radius(b) as i64)).expect("nonnegative radius"),
        ),
        ("affine", Space::IntegerLine) => {
            let (a, b) = args
                .split_once(';')
                .ok_or_else(|| invalid("affine expects `a;b`"))?;
            integer_affine(integer(a)?, integer(b)?)
        }
        ("affine", Space::RationalVector(n)) => {
            let (a, b) = args
                .split_once(';')
                .ok_or_else(|| invalid("affine expects `a;b1,..,bn`"))?;
            let shift = b.split(',').map(rational).collect::<Result<Vec<_>>>()?;
            if shift.len() != *n {
                return Err(invalid(format!("affine shift needs {n} coordinates")));
            }
            vector_affine(rational(a)?, shift)
        }
        ("proj", Space::RationalVector(n)) => {
            let i: usize = integer(args)?
                .try_into()
                .map_err(|_| invalid("projection index must be nonnegative"))?;
            if i >= *n {
                return Err(invalid(format!("projection index {i} out of range for Q^{n}")));
            }
            make_morphism(
                format!("proj:{i}"),
                domain.clone(),
                Space::real_line(),
                move |p| Point::scalar(p.as_vector().expect("vector point")[i].clone()),
                |b| BoundedSet::cube(1, cube_radius(b)).expect("nonnegative radius"),
            )
        }
        ("indicator", Space::FiniteLabeled(_) | Space::IntegerLine) => {
            let set = args
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| match domain {
                    Space::IntegerLine => integer(s).map(Point::Int),
                    _ => Ok(Point::label(s.trim())),
                })
                .collect::<Result<BTreeSet<_>>>()?;
            characteristic_morphism(domain, &set)
        }
        _ => Err(invalid(format!("no built-in morphism `{descriptor}` on {domain}"))),
    }
}

/// Checks that `descriptor` can be applied to every point in `points`
/// without leaving the representable range; only integer affine maps can
/// fail.
pub fn check_applicable<'a>(
    descriptor: &str,
    domain: &Space,
    points: impl IntoIterator<Item = &'a Point>,
) -> Result<()> {
    let (name, args) = descriptor.split_once(':').unwrap_or((descriptor, ""));
    if let ("affine", Space::IntegerLine, Some((a, b))) = (name, domain, args.split_once(';')) {
        let (a, b) = (i128::from(integer(a)?), i128::from(integer(b)?));
        for p in points {
            let x = i128::from(p.as_int().expect("integer point"));
            if i64::try_from(a * x + b).is_err() {
                return Err(invalid(format!("{descriptor} sends {x} outside the 64-bit integer range")));
            }
        }
    }
    Ok(())
}

fn modulo(k: i64) -> Result<Morphism> {
    if !(1..=MAX_MODULUS).contains(&k) {
        return Err(invalid(format!("mod needs a modulus between 1 and {MAX_MODULUS}")));
    }
    let codomain = Space::finite_labeled((0..k).map(|r| r.to_string()))?;
    let whole = BoundedSet::whole(codomain.clone())?;
    make_morphism(
        format!("mod:{k}"),
        Space::integer_line(),
        codomain,
        move |p| Point::label(p.as_int().expect("integer point").mod_floor(&k).to_string()),
        move |_| whole.clone(),
    )
}

fn integer_affine(a: i64, b: i64) -> Result<Morphism> {
    make_morphism(
        format!("affine:{a};{b}"),
        Space::integer_line(),
        Space::integer_line(),
        move |p| Point::Int(a * p.as_int().expect("integer point") + b),
        move |s| {
            let r = interval_radius(s) as u128 * a.unsigned_abs() as u128 + b.unsigned_abs() as u128;
            BoundedSet::interval(r.to_u64().unwrap_or(u64::MAX))
        },
    )
}

fn vector_affine(a: Rational, shift: Vec<Rational>) -> Result<Morphism> {
    let n = shift.len();
    let name = format!(
        "affine:{a};{}",
        shift.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    );
    let shift_norm = shift.iter().map(Rational::abs).max().expect("n >= 1");
    let (a_map, a_bound) = (a.clone(), a.abs());
    make_morphism(
        name,
        Space::rational_vector(n)?,
        Space::rational_vector(n)?,
        move |p| {
            Point::vector(
                p.as_vector()
                    .expect("vector point")
                    .iter()
                    .zip(&shift)
                    .map(|(x, b)| &a_map * x + b),
            )
        },
        move |s| BoundedSet::cube(n, &a_bound * cube_radius(s) + &shift_norm).expect("nonnegative radius"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn catalog_maps() {
        let z = Space::integer_line();
        let m = builtin_morphism("mod:3", &z).unwrap();
        assert_eq!(m.apply(&Point::Int(-1)).unwrap(), Point::label("2"));
        let aff = builtin_morphism("affine:-2;5", &z).unwrap();
        assert_eq!(aff.apply(&Point::Int(3)).unwrap(), Point::Int(-1));
        let e = builtin_morphism("embed", &z).unwrap();
        assert_eq!(e.apply(&Point::Int(-4)).unwrap(), Point::scalar(qi(-4)));

        let plane = Space::rational_vector(2).unwrap();
        let v = Point::vector([q(1, 2), qi(3)]);
        let aff = builtin_morphism("affine:2/3;1,-1", &plane).unwrap();
        assert_eq!(aff.apply(&v).unwrap(), Point::vector([q(4, 3), qi(1)]));
        let p = builtin_morphism("proj:1", &plane).unwrap();
        assert_eq!(p.apply(&v).unwrap(), Point::scalar(qi(3)));

        let labels = Space::finite_labeled(["a", "b", "c"]).unwrap();
        let ind = builtin_morphism("indicator:a,c", &labels).unwrap();
        assert_eq!(ind.apply(&Point::label("b")).unwrap(), Point::scalar(qi(0)));
        assert_eq!(ind.apply(&Point::label("c")).unwrap(), Point::scalar(qi(1)));
    }

    #[test]
    fn catalog_rejects_bad_names() {
        let plane = Space::rational_vector(2).unwrap();
        assert!(builtin_morphism("mod:3", &plane).is_err());
        assert!(builtin_morphism("mod:0", &Space::integer_line()).is_err());
        assert!(builtin_morphism("mod:4097", &Space::integer_line()).is_err());
        assert!(builtin_morphism("proj:2", &plane).is_err());
        assert!(builtin_morphism("affine:1;1", &plane).is_err());
        assert!(builtin_morphism("sqrt", &plane).is_err());
        let labels = Space::finite_labeled(["a"]).unwrap();
        assert!(builtin_morphism("indicator:z", &labels).is_err());
        let z = Space::integer_line();
        let big = [Point::Int(i64::MAX / 2)];
        assert!(check_applicable("affine:2;0", &z, &big).is_ok());
        assert!(check_applicable("affine:3;0", &z, &big).is_err());
        assert!(check_applicable("affine:2;0", &plane, &[]).is_ok());
    }
}
