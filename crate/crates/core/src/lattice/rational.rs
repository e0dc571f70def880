use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Exact rational value of a finite float.
pub fn rat_from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(|| panic!("non-finite value {x}"))
}

pub fn rat_from_i64(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rats_from_f64(xs: &[f64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat_from_f64(x)).collect()
}

pub fn rats_to_f64(xs: &[Rational]) -> Vec<f64> {
    xs.iter().map(rat_to_f64).collect()
}

/// Parses `p/q`, a plain integer, or a finite decimal such as `-0.25`.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = int_part.trim_start_matches(['-', '+']);
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let whole: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().ok()?
        };
        let frac: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().ok()?
        };
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let mag = Rational::new(whole * &scale + frac, scale);
        return Some(if negative { -mag } else { mag });
    }
    t.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// Nearest integer, ties away from zero.
pub fn round_rational(r: &Rational) -> BigInt {
    r.round().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sq_norm(a: &[Rational]) -> Rational {
    dot(a, a)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_token_forms() {
        assert_eq!(
            parse_rational("3/4").unwrap(),
            Rational::new(3.into(), 4.into())
        );
        assert_eq!(parse_rational("-7").unwrap(), rat_from_i64(-7));
        assert_eq!(
            parse_rational("-0.25").unwrap(),
            Rational::new((-1).into(), 4.into())
        );
        assert_eq!(
            parse_rational("1.5").unwrap(),
            Rational::new(3.into(), 2.into())
        );
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn frac_is_in_unit_interval() {
        let r = parse_rational("-7/3").unwrap();
        assert_eq!(frac(&r), Rational::new(2.into(), 3.into()));
    }
}
