//! Small special functions with series branches near their removable or
//! polar points.

/// Below this magnitude the series branches are used. Both branches agree to
/// better than 1e-15 relative at the crossover.
const SERIES_CROSSOVER: f64 = 1e-3;

/// Hyperbolic cotangent. Uses `1/x + x/3 − x³/45` for small `|x|`.
pub fn coth(x: f64) -> f64 {
    if x.abs() < SERIES_CROSSOVER {
        let x2 = x * x;
        1.0 / x + x * (1.0 / 3.0 - x2 / 45.0)
    } else {
        1.0 / x.tanh()
    }
}

/// `x·coth(x)`, equal to 1 at `x = 0`.
pub fn x_coth(x: f64) -> f64 {
    if x.abs() < SERIES_CROSSOVER {
        let x2 = x * x;
        1.0 + x2 * (1.0 / 3.0 - x2 / 45.0)
    } else {
        x / x.tanh()
    }
}

/// `sin(x)/x`, equal to 1 at `x = 0`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SERIES_CROSSOVER {
        let x2 = x * x;
        1.0 - x2 * (1.0 / 6.0 - x2 / 120.0)
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn branches_agree_at_crossover() {
        let below = SERIES_CROSSOVER * (1.0 - 1e-12);
        let above = SERIES_CROSSOVER * (1.0 + 1e-12);
        assert!(rel(coth(below), coth(above)) < 1e-11);
        assert!(rel(x_coth(below), x_coth(above)) < 1e-15);
        assert!(rel(sinc(below), sinc(above)) < 1e-15);
        // direct formula at the crossover itself
        let x = SERIES_CROSSOVER;
        assert!(rel(1.0 + x * x / 3.0 - x.powi(4) / 45.0, x / x.tanh()) < 1e-15);
    }

    #[test]
    fn limits_and_symmetry() {
        assert_eq!(x_coth(0.0), 1.0);
        assert_eq!(sinc(0.0), 1.0);
        assert!(coth(0.0).is_infinite());
        assert_eq!(coth(-0.5), -coth(0.5));
        assert!((coth(40.0) - 1.0).abs() < 1e-15);
        // coth(1/600) from the T = 300, ω = 1 mode
        let x = 1.0 / 600.0;
        assert!(rel(coth(x), 1.0 / x + x / 3.0 - x.powi(3) / 45.0) < 1e-15);
    }
}
