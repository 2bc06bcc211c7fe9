//! Exact arithmetic carriers.
//!
//! Every cost in this crate is an unbounded integer or rational; floating
//! point never appears. Point coordinates are signed square roots
//! `sign * sqrt(radicand)` so that squared Euclidean distances stay rational
//! as long as each matrix column sticks to a single radicand.
//!
//! ```
//! use plslab::exact::{rat, PointMatrix, SqrtCoord};
//!
//! let rows = vec![
//!     vec![SqrtCoord::sqrt(rat(2, 1)).unwrap()],
//!     vec![SqrtCoord::neg_sqrt(rat(2, 1)).unwrap()],
//! ];
//! let m = PointMatrix::new(rows).unwrap();
//! assert_eq!(m.squared_distance(0, 1).unwrap(), rat(8, 1));
//! ```

use crate::error::{Error, Result};
use num::{BigInt, BigRational, Signed, Zero};
use std::str::FromStr;

/// Unbounded integer.
pub type Int = BigInt;
/// Rational number, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn parse_int(s: &str) -> Result<Int> {
    Int::from_str(s).map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

/// Parses "a/b" or a plain integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    match s.split_once('/') {
        None => Ok(rat_int(&parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
    }
}

/// Prints "num/den" with den always present, e.g. "3/1", "-5/2".
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Smallest integer t with t >= r.
pub fn ceil_rat(r: &Rat) -> Int {
    r.ceil().to_integer()
}

/// A coordinate of the form sign * sqrt(radicand) with radicand >= 0.
/// The invariant sign == 0 iff radicand == 0 is enforced at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtCoord {
    sign: i8,
    radicand: Rat,
}

impl SqrtCoord {
    pub fn zero() -> Self {
        SqrtCoord { sign: 0, radicand: Rat::zero() }
    }

    pub fn new(sign: i8, radicand: Rat) -> Result<Self> {
        if !matches!(sign, -1 | 0 | 1) {
            return Err(Error::InvalidMatrix(format!("sign must be -1, 0 or 1, got {sign}")));
        }
        if radicand.is_negative() {
            return Err(Error::InvalidMatrix("negative radicand".into()));
        }
        if (sign == 0) != radicand.is_zero() {
            return Err(Error::InvalidMatrix(
                "sign must be 0 exactly when the radicand is 0".into(),
            ));
        }
        Ok(SqrtCoord { sign, radicand })
    }

    /// +sqrt(radicand), collapsing to the zero coordinate when radicand == 0.
    pub fn sqrt(radicand: Rat) -> Result<Self> {
        let sign = if radicand.is_zero() { 0 } else { 1 };
        Self::new(sign, radicand)
    }

    pub fn neg_sqrt(radicand: Rat) -> Result<Self> {
        let sign = if radicand.is_zero() { 0 } else { -1 };
        Self::new(sign, radicand)
    }

    /// Coordinate equal to the integer t, represented as sign(t) * sqrt(t^2).
    pub fn from_int(t: &Int) -> Self {
        let sign = match t.sign() {
            num::bigint::Sign::Minus => -1,
            num::bigint::Sign::NoSign => 0,
            num::bigint::Sign::Plus => 1,
        };
        SqrtCoord { sign, radicand: rat_int(&(t * t)) }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &Rat {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The exact square of the coordinate.
    pub fn square(&self) -> Rat {
        self.radicand.clone()
    }
}

/// A list of points, one row per point. All nonzero entries of a column must
/// share one radicand; this column alignment is what keeps every pairwise
/// squared distance rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMatrix {
    rows: Vec<Vec<SqrtCoord>>,
    cols: usize,
}

impl PointMatrix {
    pub fn new(rows: Vec<Vec<SqrtCoord>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} columns, expected {cols}",
                    row.len()
                )));
            }
        }
        for c in 0..cols {
            let mut seen: Option<&Rat> = None;
            for row in &rows {
                let e = &row[c];
                if e.is_zero() {
                    continue;
                }
                match seen {
                    None => seen = Some(e.radicand()),
                    Some(r) if r == e.radicand() => {}
                    Some(r) => {
                        return Err(Error::InvalidMatrix(format!(
                            "column {c} mixes radicands {} and {}",
                            r,
                            e.radicand()
                        )))
                    }
                }
            }
        }
        Ok(PointMatrix { rows, cols })
    }

    pub fn num_points(&self) -> usize {
        self.rows.len()
    }

    pub fn num_columns(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<SqrtCoord>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[SqrtCoord] {
        &self.rows[i]
    }

    /// Exact squared Euclidean distance between points i and j.
    pub fn squared_distance(&self, i: usize, j: usize) -> Result<Rat> {
        let n = self.rows.len();
        if i >= n || j >= n {
            return Err(Error::Dimension(format!("point index out of range ({i}, {j}) with {n} points")));
        }
        let mut acc = Rat::zero();
        for c in 0..self.cols {
            let a = &self.rows[i][c];
            let b = &self.rows[j][c];
            if a.sign == b.sign {
                continue;
            }
            let rad = if a.is_zero() { b.radicand() } else { a.radicand() };
            let diff = i64::from(a.sign - b.sign);
            acc += rat(diff * diff, 1) * rad;
        }
        Ok(acc)
    }

    /// Exact squared norm of point i.
    pub fn row_norm_sq(&self, i: usize) -> Rat {
        self.rows[i].iter().map(SqrtCoord::square).sum()
    }

    /// Some pair of entrywise-identical rows, if any. Coincident points are
    /// legal; this predicate lets callers that care check for them.
    pub fn coincident_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if self.rows[i] == self.rows[j] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_injective(&self) -> bool {
        self.coincident_pair().is_none()
    }
}
