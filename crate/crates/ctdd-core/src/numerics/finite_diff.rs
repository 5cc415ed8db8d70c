//! Central finite-difference derivatives.
//!
//! Reference derivatives for cross-checking jet propagation. These touch
//! none of the jet machinery, so agreement between the two routes is a real
//! consistency check rather than a tautology.

/// `order`-th derivative of `f` at `x` by fourth-order central stencils
/// (second-order for `order == 3`'s outermost correction term is avoided by
/// using the wide 6-point stencil). Supports orders 1 through 3.
pub fn central_derivative(mut f: impl FnMut(f64) -> f64, x: f64, order: usize, h: f64) -> f64 {
    match order {
        1 => (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h),
        2 => {
            (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
                / (12.0 * h * h)
        }
        3 => {
            (-f(x + 3.0 * h) + 8.0 * f(x + 2.0 * h) - 13.0 * f(x + h) + 13.0 * f(x - h)
                - 8.0 * f(x - 2.0 * h)
                + f(x - 3.0 * h))
                / (8.0 * h * h * h)
        }
        _ => panic!("central_derivative supports orders 1..=3, got {order}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn derivatives_of_exp() {
        let x = 0.8;
        for order in 1..=3 {
            let d = central_derivative(|t| t.exp(), x, order, 1e-2);
            assert_relative_eq!(d, x.exp(), max_relative = 1e-7);
        }
    }

    #[test]
    fn derivatives_of_rational() {
        // f = 1/(1+x^2); f' = -2x/(1+x^2)^2
        let x = 0.5;
        let d1 = central_derivative(|t| 1.0 / (1.0 + t * t), x, 1, 1e-3);
        let want = -2.0 * x / (1.0 + x * x).powi(2);
        assert_relative_eq!(d1, want, max_relative = 1e-9);
    }

    #[test]
    fn third_derivative_of_cubic_is_exact() {
        let d3 = central_derivative(|t| t * t * t, 1.7, 3, 1e-2);
        assert_relative_eq!(d3, 6.0, max_relative = 1e-8);
    }
}
