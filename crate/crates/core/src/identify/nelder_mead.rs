use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Settings of the Nelder-Mead simplex search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NelderMeadOptions {
    /// Initial simplex edge relative to each coordinate of `x0`
    /// (`zero_step` is used for zero coordinates).
    pub relative_step: f64,
    pub zero_step: f64,
    /// Explicit initial edge per coordinate, overriding the relative rule.
    pub steps: Option<Vec<f64>>,
    /// Stop when every vertex is within `xtol` of the best one (max norm).
    pub xtol: f64,
    /// Also stop when all vertex values are within `ftol` of the best one.
    pub ftol: f64,
    pub max_evals: usize,
    /// Evaluate the initial simplex and shrink steps in parallel.
    pub parallel: bool,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            relative_step: 0.05,
            zero_step: 0.00025,
            steps: None,
            xtol: 1e-8,
            ftol: 0.0,
            max_evals: 2000,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
    pub converged: bool,
}

fn eval_all<F: Fn(&[f64]) -> f64 + Sync>(f: &F, xs: &[Vec<f64>], parallel: bool) -> Vec<f64> {
    let g = |x: &Vec<f64>| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if parallel {
        xs.par_iter().map(g).collect()
    } else {
        xs.iter().map(g).collect()
    }
}

/// Minimises `f` from `x0` with the standard reflection (1), expansion (2),
/// contraction (½) and shrink (½) coefficients. Non-finite values reject a
/// vertex. Vertices with equal values keep their age order, so the result
/// is deterministic and never worse than `x0`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64 + Sync>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult {
    let n = x0.len();
    let f0 = f(x0);
    let mut evals = 1;
    if n == 0 || !f0.is_finite() {
        return NelderMeadResult { x: x0.to_vec(), fx: f0, evals, converged: n == 0 };
    }
    let mut others: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut x = x0.to_vec();
            let step = match &opts.steps {
                Some(s) => s[i],
                None if x0[i] != 0.0 => opts.relative_step * x0[i],
                None => opts.zero_step,
            };
            x[i] += step;
            x
        })
        .collect();
    let fo = eval_all(&f, &others, opts.parallel);
    evals += n;
    // (value, age, point); age breaks ties in favour of older vertices
    let mut simplex: Vec<(f64, usize, Vec<f64>)> = vec![(f0, 0, x0.to_vec())];
    for (i, (x, v)) in others.drain(..).zip(fo).enumerate() {
        simplex.push((v, i + 1, x));
    }
    let mut age = n + 1;
    let sort = |s: &mut Vec<(f64, usize, Vec<f64>)>| {
        s.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)))
    };
    sort(&mut simplex);

    let converged = |s: &Vec<(f64, usize, Vec<f64>)>| {
        let best = &s[0];
        let dx = s[1..]
            .iter()
            .flat_map(|v| v.2.iter().zip(&best.2).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let df = s[1..].iter().map(|v| (v.0 - best.0).abs()).fold(0.0, f64::max);
        dx <= opts.xtol || (opts.ftol > 0.0 && df <= opts.ftol)
    };

    while evals < opts.max_evals {
        if converged(&simplex) {
            let (fx, _, x) = simplex.swap_remove(0);
            return NelderMeadResult { x, fx, evals, converged: true };
        }
        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|v| v.2[j]).sum::<f64>() / n as f64).collect();
        let worst = &simplex[n];
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.2).map(|(c, w)| c + t * (c - w)).collect() };
        let eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let xr = along(1.0);
        let fr = eval(&xr);
        evals += 1;
        let (f_best, f_second) = (simplex[0].0, simplex[n - 1].0);
        let mut replacement = None;
        if fr < f_best {
            let xe = along(2.0);
            let fe = eval(&xe);
            evals += 1;
            replacement = Some(if fe < fr { (fe, xe) } else { (fr, xr) });
        } else if fr < f_second {
            replacement = Some((fr, xr));
        } else {
            let outside = fr < worst.0;
            let xc = if outside { along(0.5) } else { along(-0.5) };
            let fc = eval(&xc);
            evals += 1;
            if (outside && fc <= fr) || (!outside && fc < worst.0) {
                replacement = Some((fc, xc));
            }
        }
        match replacement {
            Some((v, x)) => {
                simplex[n] = (v, age, x);
                age += 1;
            }
            None => {
                let best = simplex[0].2.clone();
                let shrunk: Vec<Vec<f64>> = simplex[1..]
                    .iter()
                    .map(|v| best.iter().zip(&v.2).map(|(b, x)| b + 0.5 * (x - b)).collect())
                    .collect();
                let vals = eval_all(&f, &shrunk, opts.parallel);
                evals += n;
                for (k, (x, v)) in shrunk.into_iter().zip(vals).enumerate() {
                    simplex[k + 1] = (v, age, x);
                    age += 1;
                }
            }
        }
        sort(&mut simplex);
    }
    let done = converged(&simplex);
    let (fx, _, x) = simplex.swap_remove(0);
    NelderMeadResult { x, fx, evals, converged: done }
}
