//! Exact non-negative vertex assignments (weights and costs).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or an integer.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// A map from vertices to non-negative rationals, with a cached total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexAssignment {
    values: Vec<Rational>,
    total: Rational,
}

impl VertexAssignment {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().position(|x| x.is_negative()) {
            return Err(Error::param(format!("negative value at vertex {v}")));
        }
        let total = values.iter().fold(Rational::zero(), |acc, x| acc + x);
        Ok(VertexAssignment { values, total })
    }

    pub fn uniform(n: usize, value: Rational) -> Self {
        VertexAssignment::new(vec![value; n]).expect("uniform value must be non-negative")
    }

    pub fn ones(n: usize) -> Self {
        Self::uniform(n, Rational::one())
    }

    pub fn from_integers(values: &[u64]) -> Self {
        VertexAssignment::new(values.iter().map(|&x| int(x)).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> &Rational {
        &self.values[v]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn sum<I: IntoIterator<Item = usize>>(&self, vertices: I) -> Rational {
        vertices
            .into_iter()
            .fold(Rational::zero(), |acc, v| acc + &self.values[v])
    }

    /// Assignment on `vertices`, re-indexed to `0..vertices.len()`.
    pub fn restrict(&self, vertices: &[usize]) -> Self {
        VertexAssignment::new(vertices.iter().map(|&v| self.values[v].clone()).collect()).unwrap()
    }

    /// One value per line, in `p/q` form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for x in &self.values {
            if x.is_integer() {
                out.push_str(&x.numer().to_string());
            } else {
                out.push_str(&format_rational(x));
            }
            out.push('\n');
        }
        out
    }

    /// Parses `n` lines, one value each. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(n);
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let x = parse_rational(line).ok_or_else(|| Error::parse(idx + 1, format!("not a rational: {line:?}")))?;
            if x.is_negative() {
                return Err(Error::parse(idx + 1, "negative value"));
            }
            values.push(x);
        }
        if values.len() != n {
            return Err(Error::parse(0, format!("expected {n} values, found {}", values.len())));
        }
        VertexAssignment::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_total() {
        let a = VertexAssignment::parse("1/2\n3\n# note\n0\n", 3).unwrap();
        assert_eq!(a.total(), &rat(7, 2));
        assert_eq!(a.sum([0, 2]), rat(1, 2));
        assert_eq!(a.to_text(), "1/2\n3\n0\n");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(VertexAssignment::parse("1\n-2\n", 2).is_err());
        assert!(VertexAssignment::parse("1\n", 2).is_err());
        assert!(VertexAssignment::parse("1/0\n", 1).is_err());
        assert!(VertexAssignment::new(vec![rat(-1, 3)]).is_err());
    }

    #[test]
    fn rational_format() {
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(parse_rational(" 6/4 "), Some(rat(3, 2)));
    }
}
