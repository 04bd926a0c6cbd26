use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Convex piecewise-linear function
/// `f(z) = constant + slope * z + sum_k weight_k * max(0, z - position_k)`
/// with every weight nonnegative, i.e. slope changes `weight_k` at `position_k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConvexPwl {
    pub constant: Rational,
    pub slope: Rational,
    pub hinges: Vec<(Rational, Rational)>,
}

impl ConvexPwl {
    pub fn new(constant: Rational, slope: Rational) -> Self {
        ConvexPwl { constant, slope, hinges: Vec::new() }
    }

    pub fn add_hinge(&mut self, position: Rational, weight: Rational) {
        debug_assert!(!weight.is_negative());
        self.hinges.push((position, weight));
    }

    /// Adds `weight * max(0, position - z)`, the cost of cutting something
    /// longer than `z` down to `z`.
    pub fn add_excess_above(&mut self, position: Rational, weight: Rational) {
        // max(0, p - z) = max(0, z - p) - (z - p)
        self.constant += &weight * &position;
        self.slope -= &weight;
        self.add_hinge(position, weight);
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        let mut value = &self.constant + &self.slope * z;
        for (p, w) in &self.hinges {
            if z > p {
                value += w * (z - p);
            }
        }
        value
    }
}

/// Leftmost minimizer of a convex piecewise-linear function on `[lo, hi]`
/// and the exact minimum, by a sorted scan of the breakpoints.
pub fn minimize_pwl_convex(f: &ConvexPwl, lo: &Rational, hi: &Rational) -> Result<(Rational, Rational)> {
    if lo > hi {
        return Err(Error::EmptyInterval { lo: lo.to_string(), hi: hi.to_string() });
    }
    if f.hinges.iter().any(|(_, w)| w.is_negative()) {
        return Err(Error::Internal("negative slope change; function is not convex".into()));
    }
    let mut hinges: Vec<&(Rational, Rational)> = f.hinges.iter().collect();
    hinges.sort_by(|x, y| x.0.cmp(&y.0));
    // right derivative at lo
    let mut slope = f.slope.clone();
    let mut rest = hinges.into_iter().peekable();
    while let Some((p, w)) = rest.peek() {
        if p > lo {
            break;
        }
        slope += w;
        rest.next();
    }
    let mut z = lo.clone();
    if slope.is_negative() {
        z = hi.clone();
        for (p, w) in rest {
            if p >= hi {
                break;
            }
            slope += w;
            if !slope.is_negative() {
                z = p.clone();
                break;
            }
        }
    }
    let value = f.eval(&z);
    Ok((z, value))
}
