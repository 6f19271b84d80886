//! Aberth-Ehrlich simultaneous iteration.

use std::f64::consts::TAU;

use num_complex::Complex64;

pub(crate) const MAX_ITERATIONS: usize = 500;
const START_ROTATION: f64 = 0.4;

pub(crate) struct AberthOutcome {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

/// `(p(z), p'(z))` by Horner for descending monic `coeffs`.
pub(crate) fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = coeffs[0];
    let mut dp = Complex64::new(0.0, 0.0);
    for c in &coeffs[1..] {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `sum |c_i| |z|^(D-i)`, the scale of rounding errors in `p(z)`.
fn magnitude(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm())
}

pub(crate) fn iterate(coeffs: &[Complex64]) -> AberthOutcome {
    let d = coeffs.len() - 1;
    let radius = (1.0 + coeffs[1..].iter().map(|c| c.norm()).sum::<f64>()).powf(1.0 / d as f64);
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(radius, TAU * i as f64 / d as f64 + START_ROTATION))
        .collect();
    let mut done = vec![false; d];
    let eps = f64::EPSILON;

    for iteration in 1..=MAX_ITERATIONS {
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p.norm() <= 4.0 * eps * magnitude(coeffs, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                // nudge off a coincident iterate
                let nudge = Complex64::new(eps.sqrt(), eps.sqrt()) * (1.0 + z[i].norm());
                z[i] += nudge;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 2.0 * eps * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&x| x) {
            return AberthOutcome {
                roots: z,
                iterations: iteration,
                converged: true,
            };
        }
    }
    AberthOutcome {
        roots: z,
        iterations: MAX_ITERATIONS,
        converged: false,
    }
}
