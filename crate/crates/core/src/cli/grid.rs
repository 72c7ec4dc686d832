//! Uniform grid measures on planar regions.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::signed_measure::SignedMeasure;
use crate::spaces::{Point, Space};
use crate::{q, qi, Rational};

type Vertex = [Rational; 2];

struct EdgeForm {
    c: BigInt,
    cu: BigInt,
    cv: BigInt,
    step_v: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    UnitSquare,
    Triangle([Vertex; 3]),
    Box { lo: Vertex, hi: Vertex },
}

fn vertex(s: &str) -> Result<Vertex> {
    let coords: Vec<&str> = s.split(',').collect();
    let [x, y] = coords.as_slice() else {
        return Err(Error::InvalidArgument(format!("vertex `{s}` needs two coordinates")));
    };
    let parse = |c: &str| {
        Rational::from_str(c.trim())
            .map_err(|_| Error::InvalidArgument(format!("malformed rational `{c}`")))
    };
    Ok([parse(x)?, parse(y)?])
}

impl FromStr for Region {
    type Err = Error;

    /// `unit-square`, `triangle:x,y;x,y;x,y` or `box:x,y;x,y`; the argument
    /// list may also be written in parentheses, as in `box(0,0;2,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once(':') {
            Some(split) => split,
            None => match s.strip_suffix(')').and_then(|t| t.split_once('(')) {
                Some(split) => split,
                None => (s, ""),
            },
        };
        let vertices = || {
            args.split(';')
                .filter(|v| !v.trim().is_empty())
                .map(vertex)
                .collect::<Result<Vec<_>>>()
        };
        match name {
            "unit-square" => Ok(Region::UnitSquare),
            "triangle" => {
                let v: [Vertex; 3] = vertices()?
                    .try_into()
                    .map_err(|_| Error::InvalidArgument("triangle needs three vertices".into()))?;
                Ok(Region::Triangle(v))
            }
            "box" => {
                let [lo, hi]: [Vertex; 2] = vertices()?
                    .try_into()
                    .map_err(|_| Error::InvalidArgument("box needs two corners".into()))?;
                if lo[0] > hi[0] || lo[1] > hi[1] {
                    return Err(Error::InvalidArgument("box corners must be ordered lo, hi".into()));
                }
                Ok(Region::Box { lo, hi })
            }
            _ => Err(Error::InvalidArgument(format!("unknown region `{s}`"))),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |p: &Vertex| format!("{},{}", p[0], p[1]);
        match self {
            Region::UnitSquare => write!(f, "unit-square"),
            Region::Triangle([a, b, c]) => write!(f, "triangle:{};{};{}", v(a), v(b), v(c)),
            Region::Box { lo, hi } => write!(f, "box:{};{}", v(lo), v(hi)),
        }
    }
}

fn cross(o: &Vertex, a: &Vertex, p: (&Rational, &Rational)) -> Rational {
    (&a[0] - &o[0]) * (p.1 - &o[1]) - (&a[1] - &o[1]) * (p.0 - &o[0])
}

impl Region {
    fn bounding_box(&self) -> (Vertex, Vertex) {
        match self {
            Region::UnitSquare => ([qi(0), qi(0)], [qi(1), qi(1)]),
            Region::Box { lo, hi } => (lo.clone(), hi.clone()),
            Region::Triangle(v) => {
                let lo = [0, 1].map(|i| v.iter().map(|p| p[i].clone()).min().expect("three vertices"));
                let hi = [0, 1].map(|i| v.iter().map(|p| p[i].clone()).max().expect("three vertices"));
                (lo, hi)
            }
        }
    }

    /// Closed-region membership.
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        match self {
            Region::UnitSquare | Region::Box { .. } => {
                let (lo, hi) = self.bounding_box();
                &lo[0] <= x && x <= &hi[0] && &lo[1] <= y && y <= &hi[1]
            }
            Region::Triangle([a, b, c]) => {
                let d = [cross(a, b, (x, y)), cross(b, c, (x, y)), cross(c, a, (x, y))];
                let neg = d.iter().any(Signed::is_negative);
                let pos = d.iter().any(Signed::is_positive);
                !(neg && pos)
            }
        }
    }

    /// For a triangle, its three edge orientation tests at the cell centre
    /// with odd indices `(u, v)`, as integer affine forms `c + cu·u + cv·v`
    /// of the same sign. Boxes need no test.
    fn edge_forms(&self, lo: &Vertex, hi: &Vertex, k: i64) -> Vec<EdgeForm> {
        let Region::Triangle([a, b, c]) = self else {
            return Vec::new();
        };
        let half_cell = q(1, 2 * k);
        let w = [&hi[0] - &lo[0], &hi[1] - &lo[1]];
        [(a, b), (b, c), (c, a)]
            .into_iter()
            .map(|(o, e)| {
                let dx = &e[0] - &o[0];
                let dy = &e[1] - &o[1];
                let terms = [
                    &dx * (&lo[1] - &o[1]) - &dy * (&lo[0] - &o[0]),
                    -&dy * &w[0] * &half_cell,
                    &dx * &w[1] * &half_cell,
                ];
                let scale = terms.iter().fold(BigInt::one(), |l, t| l.lcm(t.denom()));
                let [c, cu, cv] = terms.map(|t| (t * Rational::from_integer(scale.clone())).to_integer());
                EdgeForm {
                    step_v: &cv * BigInt::from(2),
                    c,
                    cu,
                    cv,
                }
            })
            .collect()
    }

    fn is_degenerate(&self) -> bool {
        match self {
            Region::Triangle([a, b, c]) => cross(a, b, (&c[0], &c[1])).is_zero(),
            _ => false,
        }
    }
}

/// The uniform probability measure on the centres of the `k × k` grid
/// cells of the region's bounding box that lie in the region.
pub fn grid_uniform(region: &Region, k: u32) -> Result<SignedMeasure> {
    if k == 0 {
        return Err(Error::InvalidArgument("resolution must be at least 1".into()));
    }
    if region.is_degenerate() {
        return Err(Error::InvalidArgument(format!("degenerate region {region}")));
    }
    let (lo, hi) = region.bounding_box();
    let k = i64::from(k);
    let centre = |axis: usize, i: i64| &lo[axis] + (&hi[axis] - &lo[axis]) * q(2 * i + 1, 2 * k);
    let xs: Vec<Rational> = (0..k).map(|i| centre(0, i)).collect();
    let ys: Vec<Rational> = (0..k).map(|j| centre(1, j)).collect();
    let edges = region.edge_forms(&lo, &hi, k);
    let mut inside = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let u = BigInt::from(2 * i + 1);
        let mut values: Vec<BigInt> = edges.iter().map(|e| &e.c + &e.cu * &u + &e.cv).collect();
        for y in &ys {
            let neg = values.iter().any(Signed::is_negative);
            let pos = values.iter().any(Signed::is_positive);
            if !(neg && pos) {
                inside.push(Point::vector([x.clone(), y.clone()]));
            }
            for (v, e) in values.iter_mut().zip(&edges) {
                *v += &e.step_v;
            }
        }
    }
    if inside.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let w = q(1, inside.len() as i64);
    SignedMeasure::from_atoms(
        Space::rational_vector(2)?,
        inside.into_iter().map(|p| (p, w.clone())),
    )
}
