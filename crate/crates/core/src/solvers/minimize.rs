//! Unconstrained minimizers: BFGS with a strong-Wolfe line search, and
//! Nelder–Mead.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Bfgs,
    NelderMead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIterations,
    /// No step along the search direction lowered the objective.
    LineSearchFailed,
}

#[derive(Debug, Clone)]
pub struct MinimizeOptions {
    pub method: Method,
    /// Gradient ∞-norm (BFGS) or simplex spread (Nelder–Mead).
    pub tol: f64,
    pub max_iter: usize,
    /// Central-difference step when no analytic gradient is supplied.
    pub fd_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { method: Method::Bfgs, tol: 1e-6, max_iter: 1000, fd_step: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub f: f64,
    /// Every objective evaluation, finite-difference probes included.
    pub n_evals: usize,
    /// Analytic gradient calls.
    pub n_grad_evals: usize,
    pub n_iter: usize,
    pub status: Status,
}

impl MinimizeResult {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// Objective with an optional analytic gradient.
pub trait Objective {
    fn value(&mut self, x: &[f64]) -> f64;

    /// `None` selects central finite differences.
    fn gradient(&mut self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

impl<F: FnMut(&[f64]) -> f64> Objective for F {
    fn value(&mut self, x: &[f64]) -> f64 {
        self(x)
    }
}

struct Counted<'a, O: Objective + ?Sized> {
    inner: &'a mut O,
    fd_step: f64,
    n_evals: usize,
    n_grad_evals: usize,
}

impl<O: Objective + ?Sized> Counted<'_, O> {
    fn value(&mut self, x: &[f64]) -> Result<f64> {
        self.n_evals += 1;
        let v = self.inner.value(x);
        if !v.is_finite() {
            return Err(Error::Numerical(format!("objective returned {v} at {x:?}")));
        }
        Ok(v)
    }

    fn gradient(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        if let Some(g) = self.inner.gradient(x) {
            self.n_grad_evals += 1;
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::Numerical("non-finite gradient".into()));
            }
            return Ok(g);
        }
        let h = self.fd_step;
        let mut probe = x.to_vec();
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() {
            probe[i] = x[i] + h;
            let up = self.value(&probe)?;
            probe[i] = x[i] - h;
            let down = self.value(&probe)?;
            probe[i] = x[i];
            g[i] = (up - down) / (2.0 * h);
        }
        Ok(g)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn axpy(x: &[f64], a: f64, p: &[f64]) -> Vec<f64> {
    x.iter().zip(p).map(|(xi, pi)| xi + a * pi).collect()
}

/// Minimizes `objective` from `x0`.
pub fn minimize<O: Objective + ?Sized>(
    objective: &mut O,
    x0: &[f64],
    opts: &MinimizeOptions,
) -> Result<MinimizeResult> {
    let mut f = Counted { inner: objective, fd_step: opts.fd_step, n_evals: 0, n_grad_evals: 0 };
    let (x, fx, n_iter, status) = match opts.method {
        Method::Bfgs => bfgs(&mut f, x0, opts)?,
        Method::NelderMead => nelder_mead(&mut f, x0, opts)?,
    };
    Ok(MinimizeResult {
        x,
        f: fx,
        n_evals: f.n_evals,
        n_grad_evals: f.n_grad_evals,
        n_iter,
        status,
    })
}

type Outcome = (Vec<f64>, f64, usize, Status);

fn bfgs<O: Objective + ?Sized>(
    f: &mut Counted<'_, O>,
    x0: &[f64],
    opts: &MinimizeOptions,
) -> Result<Outcome> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f.value(&x)?;
    if n == 0 {
        return Ok((x, fx, 0, Status::Converged));
    }
    let mut g = f.gradient(&x)?;
    // Inverse Hessian approximation, row-major.
    let identity = |n: usize| {
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = 1.0;
        }
        m
    };
    let mut hinv = identity(n);
    let mut fresh = true;

    for iter in 0..opts.max_iter {
        if inf_norm(&g) < opts.tol {
            return Ok((x, fx, iter, Status::Converged));
        }
        let mut p: Vec<f64> = (0..n).map(|i| -dot(&hinv[i * n..(i + 1) * n], &g)).collect();
        if dot(&p, &g) >= 0.0 {
            hinv = identity(n);
            fresh = true;
            p = g.iter().map(|v| -v).collect();
        }
        let alpha0 = if fresh { (1.0 / inf_norm(&g)).min(1.0) } else { 1.0 };
        let Some((mut alpha, mut f_new, mut g_new)) = line_search(f, &x, fx, &g, &p, alpha0)?
        else {
            if fresh {
                return Ok((x, fx, iter, Status::LineSearchFailed));
            }
            hinv = identity(n);
            fresh = true;
            continue;
        };
        // Refine an accepted but visibly inexact step with the secant
        // minimizer along p; exact on quadratics, where it restores
        // finite termination.
        let (d0, da) = (dot(&g, &p), dot(&g_new, &p));
        if da.abs() > SECANT_TRIGGER * d0.abs() {
            let a_sec = alpha * d0 / (d0 - da);
            if a_sec.is_finite() && a_sec > 0.0 {
                let xs = axpy(&x, a_sec, &p);
                let fs = f.value(&xs)?;
                if fs < f_new {
                    let gs = f.gradient(&xs)?;
                    (alpha, f_new, g_new) = (a_sec, fs, gs);
                }
            }
        }
        let s: Vec<f64> = p.iter().map(|v| alpha * v).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        x = axpy(&x, 1.0, &s);
        fx = f_new;
        g = g_new;

        let sy = dot(&s, &y);
        if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if fresh {
                let scale = sy / dot(&y, &y);
                hinv.iter_mut().for_each(|v| *v *= scale);
            }
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..n).map(|i| dot(&hinv[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            // H ← (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ, expanded.
            for i in 0..n {
                for j in 0..n {
                    hinv[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
            fresh = false;
        }
    }
    let status = if inf_norm(&g) < opts.tol { Status::Converged } else { Status::MaxIterations };
    Ok((x, fx, opts.max_iter, status))
}

const C1: f64 = 1e-4;
const C2: f64 = 0.9;
const SECANT_TRIGGER: f64 = 1e-3;

/// Strong-Wolfe line search (bracketing then zoom). Returns the accepted
/// step, value and gradient, or `None` if no decrease was found.
fn line_search<O: Objective + ?Sized>(
    f: &mut Counted<'_, O>,
    x: &[f64],
    f0: f64,
    g0: &[f64],
    p: &[f64],
    alpha0: f64,
) -> Result<Option<(f64, f64, Vec<f64>)>> {
    let d0 = dot(g0, p);
    let (mut a_prev, mut f_prev, mut d_prev) = (0.0, f0, d0);
    let mut a = alpha0;
    for i in 0..40 {
        let xa = axpy(x, a, p);
        let fa = f.value(&xa)?;
        if fa > f0 + C1 * a * d0 || (i > 0 && fa >= f_prev) {
            return zoom(f, x, f0, d0, p, (a_prev, f_prev, d_prev), (a, fa));
        }
        let ga = f.gradient(&xa)?;
        let da = dot(&ga, p);
        if da.abs() <= -C2 * d0 {
            return Ok(Some((a, fa, ga)));
        }
        if da >= 0.0 {
            return zoom(f, x, f0, d0, p, (a, fa, da), (a_prev, f_prev));
        }
        (a_prev, f_prev, d_prev) = (a, fa, da);
        a *= 2.0;
    }
    Ok(None)
}

fn zoom<O: Objective + ?Sized>(
    f: &mut Counted<'_, O>,
    x: &[f64],
    f0: f64,
    d0: f64,
    p: &[f64],
    lo: (f64, f64, f64),
    hi: (f64, f64),
) -> Result<Option<(f64, f64, Vec<f64>)>> {
    let (mut a_lo, mut f_lo, mut d_lo) = lo;
    let (mut a_hi, mut f_hi) = hi;
    for _ in 0..50 {
        let width = a_hi - a_lo;
        // Quadratic through (a_lo, f_lo, d_lo) and (a_hi, f_hi), safeguarded.
        let denom = 2.0 * (f_hi - f_lo - d_lo * width);
        let mut a = if denom != 0.0 { a_lo - d_lo * width * width / denom } else { f64::NAN };
        let (lo_b, hi_b) = (a_lo.min(a_hi), a_lo.max(a_hi));
        let margin = 0.1 * (hi_b - lo_b);
        if !a.is_finite() || a < lo_b + margin || a > hi_b - margin {
            a = 0.5 * (a_lo + a_hi);
        }
        let xa = axpy(x, a, p);
        let fa = f.value(&xa)?;
        if fa > f0 + C1 * a * d0 || fa >= f_lo {
            (a_hi, f_hi) = (a, fa);
        } else {
            let ga = f.gradient(&xa)?;
            let da = dot(&ga, p);
            if da.abs() <= -C2 * d0 {
                return Ok(Some((a, fa, ga)));
            }
            if da * (a_hi - a_lo) >= 0.0 {
                (a_hi, f_hi) = (a_lo, f_lo);
            }
            (a_lo, f_lo, d_lo) = (a, fa, da);
        }
        if (a_hi - a_lo).abs() < 1e-14 * a_lo.abs().max(1e-10) {
            break;
        }
    }
    // Interval collapsed: accept the best point if it made progress.
    if a_lo > 0.0 && f_lo < f0 {
        let xa = axpy(x, a_lo, p);
        let ga = f.gradient(&xa)?;
        return Ok(Some((a_lo, f_lo, ga)));
    }
    Ok(None)
}

fn nelder_mead<O: Objective + ?Sized>(
    f: &mut Counted<'_, O>,
    x0: &[f64],
    opts: &MinimizeOptions,
) -> Result<Outcome> {
    let n = x0.len();
    let f0 = f.value(x0)?;
    if n == 0 {
        return Ok((x0.to_vec(), f0, 0, Status::Converged));
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] = if v[i] != 0.0 { 1.05 * v[i] } else { 0.00025 };
        let fv = f.value(&v)?;
        simplex.push((v, fv));
    }

    for iter in 0..opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0];
        let f_spread = simplex.iter().map(|s| (s.1 - best.1).abs()).fold(0.0, f64::max);
        let x_spread = simplex
            .iter()
            .flat_map(|s| s.0.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= opts.tol && x_spread <= opts.tol {
            let (x, fx) = simplex.swap_remove(0);
            return Ok((x, fx, iter, Status::Converged));
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|s| s.0[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let toward = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect()
        };

        let xr = toward(1.0);
        let fr = f.value(&xr)?;
        if fr < simplex[0].1 {
            let xe = toward(2.0);
            let fe = f.value(&xe)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = toward(0.5);
            let fc = f.value(&xc)?;
            (xc, fc)
        } else {
            let xc = toward(-0.5);
            let fc = f.value(&xc)?;
            (xc, fc)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for s in simplex.iter_mut().skip(1) {
            let v: Vec<f64> = x_best.iter().zip(&s.0).map(|(b, x)| b + 0.5 * (x - b)).collect();
            let fv = f.value(&v)?;
            *s = (v, fv);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    Ok((x, fx, opts.max_iter, Status::MaxIterations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn parabola_bfgs() {
        let mut f = |x: &[f64]| (x[0] - 3.0).powi(2);
        let r = minimize(&mut f, &[0.0], &MinimizeOptions::default()).unwrap();
        assert!(r.converged());
        assert!((r.x[0] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock_bfgs() {
        let mut f = rosenbrock;
        let opts = MinimizeOptions { tol: 1e-8, ..Default::default() };
        let r = minimize(&mut f, &[-1.2, 1.0], &opts).unwrap();
        assert!(r.converged(), "{:?}", r.status);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5, "{:?}", r.x);
    }

    #[test]
    fn rosenbrock_nelder_mead() {
        let mut f = rosenbrock;
        let opts = MinimizeOptions {
            method: Method::NelderMead,
            tol: 1e-10,
            max_iter: 5000,
            ..Default::default()
        };
        let r = minimize(&mut f, &[-1.2, 1.0], &opts).unwrap();
        assert!(r.converged());
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5, "{:?}", r.x);
    }

    struct Quadratic {
        a: [[f64; 3]; 3],
        b: [f64; 3],
    }

    impl Objective for Quadratic {
        fn value(&mut self, x: &[f64]) -> f64 {
            let mut v = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    v += 0.5 * x[i] * self.a[i][j] * x[j];
                }
                v -= self.b[i] * x[i];
            }
            v
        }

        fn gradient(&mut self, x: &[f64]) -> Option<Vec<f64>> {
            Some((0..3).map(|i| dot(&self.a[i], x) - self.b[i]).collect())
        }
    }

    #[test]
    fn quadratic_converges_in_few_iterations() {
        let mut q = Quadratic {
            a: [[4.0, 1.0, 0.0], [1.0, 3.0, 0.5], [0.0, 0.5, 2.0]],
            b: [1.0, -2.0, 0.5],
        };
        let opts = MinimizeOptions { tol: 1e-9, ..Default::default() };
        let r = minimize(&mut q, &[0.0; 3], &opts).unwrap();
        assert!(r.converged());
        // A x = b at the minimizer.
        for i in 0..3 {
            assert!((dot(&q.a[i], &r.x) - q.b[i]).abs() < 1e-8);
        }
        assert!(r.n_iter <= 4, "took {} iterations", r.n_iter);
    }

    #[test]
    fn finite_differences_counted() {
        let mut f = |x: &[f64]| x[0] * x[0] + x[1] * x[1];
        let r = minimize(&mut f, &[1.0, -1.0], &MinimizeOptions::default()).unwrap();
        assert!(r.converged());
        assert_eq!(r.n_grad_evals, 0);
        // One initial value plus one four-probe gradient at minimum.
        assert!(r.n_evals >= 5);
    }

    #[test]
    fn non_finite_objective_errors() {
        let mut f = |x: &[f64]| if x[0] > 0.5 { f64::NAN } else { -x[0] };
        assert!(minimize(&mut f, &[0.0], &MinimizeOptions::default()).is_err());
    }

    #[test]
    fn max_iterations_reported() {
        let mut f = rosenbrock;
        let opts = MinimizeOptions { max_iter: 2, ..Default::default() };
        let r = minimize(&mut f, &[-1.2, 1.0], &opts).unwrap();
        assert_eq!(r.status, Status::MaxIterations);
    }
}
