//! Vertex-count thresholds in exact rational arithmetic.

use num_rational::Ratio;

pub type Rational = Ratio<i64>;

/// `(2 + γ/2)k + 2(4−γ)/(γ−2)² − 3 + γ`, for 2 < γ ≤ 3.
pub fn lemma_vertex_bound(gamma: Rational, k: usize) -> Rational {
    let two = Rational::from_integer(2);
    let k = Rational::from_integer(k as i64);
    let slack = gamma - two;
    (two + gamma / two) * k + two * (Rational::from_integer(4) - gamma) / (slack * slack) - Rational::from_integer(3)
        + gamma
}

/// `(3 + ε)k + ε⁻²`.
pub fn theorem2_vertex_bound(epsilon: Rational, k: usize) -> Rational {
    (Rational::from_integer(3) + epsilon) * Rational::from_integer(k as i64) + (epsilon * epsilon).recip()
}

/// Parses `p/q` or an integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{s}` is not a fraction p/q"));
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse(q)?;
            if q == 0 {
                return Err(format!("`{s}` has a zero denominator"));
            }
            Ok(Rational::new(parse(p)?, q))
        }
        None => Ok(Rational::from_integer(parse(s)?)),
    }
}
