//! Exact rational arithmetic.
//!
//! Every payoff and every probability in this crate is a [`Rational`].
//! There is no floating point anywhere in the solver pipeline, so set
//! comparisons, argmax ties, and LP pivots are all exact and outputs are
//! canonical.

use num_bigint::BigInt;

/// Arbitrary-precision rational number, always kept in canonical form
/// (reduced, positive denominator).
pub type Rational = num_rational::BigRational;

/// Shorthand for `num / den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` with optional leading sign. Rejects zero
/// denominators and any extra characters.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Formats a rational as `"p/q"`, or just `"p"` when the denominator is 1.
/// Inverse of [`parse_rational`] on canonical values.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for text in ["0", "5", "-3", "1/2", "-7/3", "22/7"] {
            let value = parse_rational(text).unwrap();
            assert_eq!(format_rational(&value), text);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for text in ["", "1/0", "a", "1.5", "1/2/3", "1 /2", "--1"] {
            assert!(parse_rational(text).is_none(), "accepted {text:?}");
        }
    }
}
