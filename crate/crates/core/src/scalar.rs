//! Numeric scalar abstraction for formula evaluation.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::Float;

/// Floating-point types formulas can be evaluated in.
pub trait Scalar: Float + FromStr + Debug + Display + Send + Sync + 'static {
    /// Parses a literal's lexical form; `None` if it is not a number.
    fn parse_lexical(lexical: &str) -> Option<Self> {
        let s = lexical.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("nan") || s.to_ascii_lowercase().contains("inf") {
            return None;
        }
        s.parse().ok()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
