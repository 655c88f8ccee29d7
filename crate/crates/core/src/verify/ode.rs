use crate::families::FamilySpec;
use crate::{Error, Result};

/// `y' = rhs(t, y)` on `[t0, t1]` with a fixed number of steps.
pub struct OdeProblem<F> {
    pub rhs: F,
    pub y0: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.y.last().expect("trajectory has at least the initial state")
    }
}

fn axpy(y: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Classical fixed-step Runge-Kutta. A non-finite or wrongly sized
/// right-hand side aborts with the stage time.
pub fn integrate_rk4<F>(p: &OdeProblem<F>) -> Result<Trajectory>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    if p.steps == 0 {
        return Err(Error::Config("integration needs at least one step".into()));
    }
    let n = p.y0.len();
    let eval = |t: f64, y: &[f64]| -> Result<Vec<f64>> {
        let k = (p.rhs)(t, y);
        if k.len() != n {
            return Err(Error::Ode {
                t,
                message: format!("right-hand side has length {}, state has {n}", k.len()),
            });
        }
        if k.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Ode {
                t,
                message: "non-finite value".into(),
            });
        }
        Ok(k)
    };
    let h = (p.t1 - p.t0) / p.steps as f64;
    let mut t = Vec::with_capacity(p.steps + 1);
    let mut ys = Vec::with_capacity(p.steps + 1);
    let mut y = p.y0.clone();
    t.push(p.t0);
    ys.push(y.clone());
    for i in 0..p.steps {
        let ti = p.t0 + h * i as f64;
        let k1 = eval(ti, &y)?;
        let k2 = eval(ti + h / 2.0, &axpy(&y, h / 2.0, &k1))?;
        let k3 = eval(ti + h / 2.0, &axpy(&y, h / 2.0, &k2))?;
        let k4 = eval(ti + h, &axpy(&y, h, &k3))?;
        for j in 0..n {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        t.push(if i + 1 == p.steps { p.t1 } else { ti + h });
        ys.push(y.clone());
    }
    Ok(Trajectory { t, y: ys })
}

type Accel = Box<dyn Fn(f64) -> f64>;

/// The separation equation `name` solved for the second derivative of the
/// curve it constrains: `(slot, y'' = F(y'))`.
pub fn separation_ode(name: &str, params: &std::collections::BTreeMap<String, f64>) -> Result<(usize, Accel)> {
    let c = |k: &str| -> Result<f64> {
        params
            .get(k)
            .copied()
            .ok_or_else(|| Error::Config(format!("equation {name} needs the constant {k}")))
    };
    let quad = |h1: f64, p: f64| 2.0 * h1 * h1 - 10.0 * p * h1 + 37.0 * p * p + 49.0;
    Ok(match name {
        "4.3-f" | "5.3-f" | "5.7-f" => {
            let l = c("lambda")?;
            (0, Box::new(move |p| l * p.powi(3)))
        }
        "4.3-g" => {
            let m = c("mu")?;
            (1, Box::new(move |p| m / p))
        }
        "4.3-h" => {
            let x = c("xi")?;
            (2, Box::new(move |_| x))
        }
        "4.4-h" => {
            let h0 = c("h0")?;
            (2, Box::new(move |_| h0))
        }
        "4.6-f" => {
            let l = c("lambda")?;
            (0, Box::new(move |p| l * p * (1.0 + p * p)))
        }
        "4.6-g" | "4.11-g" => {
            let l = c("lambda")?;
            (1, Box::new(move |p| -l * p))
        }
        "4.11-f" => {
            let l = c("lambda")?;
            (0, Box::new(move |p| l * p * (1.0 + p * p)))
        }
        "5.3-g" => {
            let m = c("mu")?;
            (1, Box::new(move |p| m * p.powi(3)))
        }
        "5.3-h" => {
            let x = c("xi")?;
            (2, Box::new(move |p| x / (p * p)))
        }
        "5.6-g" => {
            let (f0, l) = (c("f0")?, c("lambda")?);
            (1, Box::new(move |p| l * p * ((1.0 + f0 * f0) * p * p + f0 * f0) / (f0 * f0)))
        }
        "5.6-h" => {
            let l = c("lambda")?;
            (2, Box::new(move |p| -l * p))
        }
        "5.7-g" => {
            let l = c("lambda")?;
            (1, Box::new(move |p| -l * p.powi(3)))
        }
        "5.9" => {
            let (m, x) = (c("mu")?, c("xi")?);
            (0, Box::new(move |p| p.powi(3) * (x - m / (p * p))))
        }
        "5.10" => {
            let m = c("mu")?;
            let r = c("rho")?;
            (1, Box::new(move |p| p.powi(3) * (r - m / (p * p))))
        }
        "5.13" => {
            let k = 3.0 * c("H0")? / c("h0")?;
            (1, Box::new(move |p| k * p.powi(3)))
        }
        "6.7-g" => {
            let (f0, l) = (c("f0")?, c("lambda")?);
            (1, Box::new(move |p| l * (f0 - p).powi(2)))
        }
        "6.7-h" => {
            let (f0, l) = (c("f0")?, c("lambda")?);
            (2, Box::new(move |p| -l * quad(p, f0) / 2.0))
        }
        "6.8-f" => {
            let (h0, l) = (c("h0")?, c("lambda")?);
            (0, Box::new(move |p| l * quad(h0, p)))
        }
        "6.8-g" => {
            let (h0, l) = (c("h0")?, c("lambda")?);
            (1, Box::new(move |p| -l * quad(h0, p)))
        }
        "6.10" => {
            let (f0, m) = (c("f0")?, c("mutilde")?);
            (1, Box::new(move |p| m * (f0 - p).powi(3)))
        }
        _ => {
            return Err(Error::Config(format!(
                "equation {name} does not determine a single curve"
            )))
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub equation: String,
    pub slot: usize,
    pub interval: (f64, f64),
    pub steps: usize,
    /// Largest `|y_i - curve(t_i)|` over the trajectory.
    pub max_abs_err: f64,
}

/// Integrates the separation ODE `name` from the curve's value and slope at
/// the start of its interval and compares with the curve at every node.
pub fn reconstruct(spec: &FamilySpec, name: &str, steps: usize) -> Result<Reconstruction> {
    let (slot, accel) = separation_ode(name, &spec.params)?;
    let curve = spec
        .curves
        .get(slot)
        .ok_or_else(|| Error::Config(format!("family has no curve in slot {slot}")))?;
    let (t0, t1) = curve
        .interval()
        .ok_or_else(|| Error::Config("reconstruction needs a curve interval".into()))?;
    let [y0, d0, _, _] = curve.derivatives(t0)?;
    let problem = OdeProblem {
        rhs: |_t: f64, y: &[f64]| vec![y[1], accel(y[1])],
        y0: vec![y0, d0],
        t0,
        t1,
        steps,
    };
    let traj = integrate_rk4(&problem)?;
    let mut max_abs_err: f64 = 0.0;
    for (t, y) in traj.t.iter().zip(&traj.y) {
        max_abs_err = max_abs_err.max((y[0] - curve.value(*t)?).abs());
    }
    Ok(Reconstruction {
        equation: name.into(),
        slot,
        interval: (t0, t1),
        steps,
        max_abs_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quadratics() {
        let p = OdeProblem {
            rhs: |_t: f64, y: &[f64]| vec![y[1], 2.0],
            y0: vec![0.0, 0.0],
            t0: 0.0,
            t1: 1.0,
            steps: 10,
        };
        let tr = integrate_rk4(&p).unwrap();
        assert!((tr.last()[0] - 1.0).abs() < 1e-14);
        assert_eq!(tr.t.len(), 11);
    }

    #[test]
    fn failing_rhs_reports_time() {
        let p = OdeProblem {
            rhs: |t: f64, y: &[f64]| vec![if t > 0.5 { f64::NAN } else { y[0] }],
            y0: vec![1.0],
            t0: 0.0,
            t1: 1.0,
            steps: 4,
        };
        match integrate_rk4(&p) {
            Err(Error::Ode { t, .. }) => assert!(t > 0.5 && t <= 1.0),
            other => panic!("{other:?}"),
        }
        let zero = OdeProblem { steps: 0, ..p };
        assert!(integrate_rk4(&zero).is_err());
    }
}
