//! Nelder–Mead minimizer with dimension-adapted coefficients.

pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` from a regular simplex of edge `scale` around `x0`.
///
/// Stops after `max_evals` evaluations, when the simplex collapses below
/// `1e−12` or as soon as a value at or below `target` is seen.
pub(crate) fn minimize(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    scale: f64,
    max_evals: usize,
    target: f64,
) -> Outcome {
    let d = x0.len();
    let dim = d.max(1) as f64;
    let (alpha, gamma) = (1.0, 1.0 + 2.0 / dim);
    let (rho, sigma) = (0.75 - 1.0 / (2.0 * dim), 1.0 - 1.0 / dim);

    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        if *evaluations >= max_evals {
            return f64::INFINITY;
        }
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let v0 = eval(x0, &mut evaluations);
    simplex.push((x0.to_vec(), v0));
    for i in 0..d {
        if evaluations >= max_evals || v0 <= target {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += scale;
        let v = eval(&x, &mut evaluations);
        simplex.push((x, v));
        if v <= target {
            break;
        }
    }
    let best_of = |s: &[(Vec<f64>, f64)]| {
        s.iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(x, v)| (x.clone(), *v))
            .expect("simplex is nonempty")
    };
    if simplex.len() < d + 1 {
        let (x, value) = best_of(&simplex);
        return Outcome { x, value, evaluations };
    }

    while evaluations < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 <= target {
            break;
        }
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < 1e-12 {
            break;
        }
        let worst = simplex[d].clone();
        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect()
        };
        let xr = along(alpha);
        let fr = eval(&xr, &mut evaluations);
        if fr < simplex[0].1 {
            let xe = along(gamma);
            let fe = eval(&xe, &mut evaluations);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let x = along(alpha * rho);
            let v = eval(&x, &mut evaluations);
            (x, v)
        } else {
            let x = along(-rho);
            let v = eval(&x, &mut evaluations);
            (x, v)
        };
        if fc < worst.1.min(fr) {
            simplex[d] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if evaluations >= max_evals {
                break;
            }
            let x: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, v)| b + sigma * (v - b)).collect();
            let v = eval(&x, &mut evaluations);
            *vertex = (x, v);
        }
    }
    let (x, value) = best_of(&simplex);
    Outcome { x, value, evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_a_quadratic() {
        let out = minimize(
            |x| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2) + x[2].powi(2),
            &[0.0, 0.0, 0.0],
            1.0,
            2000,
            f64::NEG_INFINITY,
        );
        assert!(out.value < 1e-12, "{}", out.value);
        assert!((out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] + 2.0).abs() < 1e-5);
        assert!(out.evaluations <= 2000);
    }

    #[test]
    fn rosenbrock() {
        let out = minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            0.5,
            5000,
            f64::NEG_INFINITY,
        );
        assert!(out.value < 1e-10, "{}", out.value);
    }

    #[test]
    fn respects_budget_and_target() {
        let mut calls = 0;
        let out = minimize(
            |x| {
                calls += 1;
                x[0].abs()
            },
            &[5.0],
            1.0,
            7,
            f64::NEG_INFINITY,
        );
        assert_eq!(out.evaluations, 7);
        assert_eq!(calls, 7);
        let out = minimize(|x| x[0], &[0.0, 0.0], 1.0, 100, 0.5);
        assert_eq!(out.evaluations, 1);
    }
}
