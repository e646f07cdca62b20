//! Diffusivity profiles and the cubic bistable reaction.

use std::sync::Arc;

use thiserror::Error;

use crate::grid::{Grid1D, GridError, Region};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoefficientError {
    #[error("epsilon must be in (0,1], got {0}")]
    InvalidEpsilon(f64),
    #[error("delta must be finite and >= 0, got {0}")]
    InvalidDelta(f64),
    #[error("invalid reaction parameter: {0}")]
    InvalidReaction(String),
    #[error("at least 1000 samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("NotBistable: {condition}")]
    NotBistable { condition: String },
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiffusivityMode {
    Sharp,
    Smoothed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FaceAveraging {
    #[default]
    Harmonic,
    Arithmetic,
}

impl FaceAveraging {
    pub fn combine(self, left: f64, right: f64) -> f64 {
        match self {
            FaceAveraging::Harmonic => 2.0 * left * right / (left + right),
            FaceAveraging::Arithmetic => 0.5 * (left + right),
        }
    }
}

/// Quintic smoothstep `6θ⁵ − 15θ⁴ + 10θ³`, clamped to `[0, 1]`.
pub fn smoothstep(theta: f64) -> f64 {
    let t = theta.clamp(0.0, 1.0);
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

/// Piecewise-constant diffusivity (1 inside, ε outside), optionally smoothed
/// over a collar of width δ on the outer side of each interface.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusivityProfile {
    epsilon: f64,
    delta: f64,
    mode: DiffusivityMode,
    grid: Arc<Grid1D>,
}

impl DiffusivityProfile {
    pub fn sharp(grid: Arc<Grid1D>, epsilon: f64) -> Result<Self, CoefficientError> {
        Self::new(grid, epsilon, 0.0)
    }

    pub fn smoothed(grid: Arc<Grid1D>, epsilon: f64, delta: f64) -> Result<Self, CoefficientError> {
        if !(delta > 0.0) {
            return Err(CoefficientError::InvalidDelta(delta));
        }
        Self::new(grid, epsilon, delta)
    }

    /// `delta == 0` gives the sharp profile.
    pub fn new(grid: Arc<Grid1D>, epsilon: f64, delta: f64) -> Result<Self, CoefficientError> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(CoefficientError::InvalidEpsilon(epsilon));
        }
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(CoefficientError::InvalidDelta(delta));
        }
        let mode = if delta > 0.0 {
            DiffusivityMode::Smoothed
        } else {
            DiffusivityMode::Sharp
        };
        Ok(Self {
            epsilon,
            delta,
            mode,
            grid,
        })
    }

    /// Uniform unit diffusivity on `grid` (used for the inner limit problem).
    pub fn unit(grid: Arc<Grid1D>) -> Self {
        Self {
            epsilon: 1.0,
            delta: 0.0,
            mode: DiffusivityMode::Sharp,
            grid,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn mode(&self) -> DiffusivityMode {
        self.mode
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn diffusivity_at(&self, x: f64) -> Result<f64, CoefficientError> {
        let region = self.grid.region_of(x)?;
        Ok(self.value_in(region, x))
    }

    fn value_in(&self, region: Region, x: f64) -> f64 {
        match region {
            Region::Inner | Region::Interface => 1.0,
            Region::Outer => {
                if self.mode == DiffusivityMode::Smoothed {
                    let d = self.grid.distance_to_interface(x);
                    if d <= self.delta {
                        return self.epsilon
                            + (1.0 - self.epsilon) * smoothstep(1.0 - d / self.delta);
                    }
                }
                self.epsilon
            }
        }
    }

    /// Diffusivity sampled at every cell centre.
    pub fn cell_values(&self) -> Vec<f64> {
        let g = &self.grid;
        g.cell_centers()
            .iter()
            .enumerate()
            .map(|(i, &x)| self.value_in(g.cell_region(i), x))
            .collect()
    }

    /// Face diffusivities (`n_cells + 1` entries) from the cell-centre values.
    /// Boundary faces copy their single neighbour.
    pub fn face_diffusivity(&self, method: FaceAveraging) -> Vec<f64> {
        face_values(&self.cell_values(), method)
    }
}

/// Combines adjacent cell values into face values.
pub fn face_values(cells: &[f64], method: FaceAveraging) -> Vec<f64> {
    let n = cells.len();
    let mut faces = Vec::with_capacity(n + 1);
    faces.push(cells[0]);
    faces.extend(cells.windows(2).map(|w| method.combine(w[0], w[1])));
    faces.push(cells[n - 1]);
    faces
}

/// Sup-bounds of the reaction over `[0, M]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionBounds {
    /// `sup |f|`
    pub m_f: f64,
    /// `sup f'`
    pub m_tilde_f: f64,
}

/// `f(u) = s · u (u − α)(1 − u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BistableReaction {
    alpha: f64,
    scale: f64,
    upper_bound: f64,
    bounds: ReactionBounds,
}

const BOUNDS_SAMPLES: usize = 10_000;

impl BistableReaction {
    /// Accepts `α ∈ [0, 1]`, `s ≥ 0` and `M ≥ 1`. Whether the result is
    /// actually bistable is decided by [`BistableReaction::validate_bistable`].
    pub fn new(alpha: f64, scale: f64, upper_bound: f64) -> Result<Self, CoefficientError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(CoefficientError::InvalidReaction(format!(
                "alpha must be in (0,1), got {alpha}"
            )));
        }
        if !(scale >= 0.0) || !scale.is_finite() {
            return Err(CoefficientError::InvalidReaction(format!(
                "scale must be >= 0, got {scale}"
            )));
        }
        if !(upper_bound >= 1.0) || !upper_bound.is_finite() {
            return Err(CoefficientError::InvalidReaction(format!(
                "upper bound M must be >= 1, got {upper_bound}"
            )));
        }
        let mut r = Self {
            alpha,
            scale,
            upper_bound,
            bounds: ReactionBounds {
                m_f: 0.0,
                m_tilde_f: 0.0,
            },
        };
        r.bounds = r.scan_bounds(BOUNDS_SAMPLES);
        Ok(r)
    }

    /// The reaction used in the reference experiment: α = 1/3, s = 1, M = 1.
    pub fn reference() -> Self {
        Self::new(1.0 / 3.0, 1.0, 1.0).expect("reference parameters are valid")
    }

    /// `f ≡ 0` with bound `M`.
    pub fn zero(upper_bound: f64) -> Self {
        Self::new(0.5, 0.0, upper_bound).expect("zero reaction parameters are valid")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    pub fn bounds(&self) -> ReactionBounds {
        self.bounds
    }

    pub fn m_f(&self) -> f64 {
        self.bounds.m_f
    }

    pub fn m_tilde_f(&self) -> f64 {
        self.bounds.m_tilde_f
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        self.scale * u * (u - self.alpha) * (1.0 - u)
    }

    #[inline]
    pub fn deriv(&self, u: f64) -> f64 {
        let a = self.alpha;
        self.scale * (-3.0 * u * u + 2.0 * (1.0 + a) * u - a)
    }

    /// Steady states `0 ≤ α ≤ 1`.
    pub fn steady_states(&self) -> [f64; 3] {
        [0.0, self.alpha, 1.0]
    }

    /// Checks the sign and derivative hypotheses of a bistable nonlinearity on
    /// a dense sample of `[0, M]` and returns the sup-bounds.
    pub fn validate_bistable(&self, samples: usize) -> Result<ReactionBounds, CoefficientError> {
        if samples < 1000 {
            return Err(CoefficientError::TooFewSamples(samples));
        }
        let fail = |c: &str| {
            Err(CoefficientError::NotBistable {
                condition: c.to_string(),
            })
        };
        let a = self.alpha;
        if self.eval(0.0) != 0.0 || self.eval(a) != 0.0 || self.eval(1.0) != 0.0 {
            return fail("f(0) = f(alpha) = f(1) = 0");
        }
        if !(self.deriv(0.0) < 0.0) {
            return fail("f'(0) < 0");
        }
        if !(self.deriv(1.0) < 0.0) {
            return fail("f'(1) < 0");
        }
        if !(self.deriv(a) > 0.0) {
            return fail("f'(alpha) > 0");
        }
        if !(a > 0.0 && a < 1.0) {
            return fail("alpha in (0,1)");
        }
        let m = self.upper_bound;
        for k in 1..=samples {
            let u = m * k as f64 / samples as f64;
            let f = self.eval(u);
            if u < a && !(f < 0.0) {
                return fail("f < 0 on (0, alpha)");
            }
            if u > a && u < 1.0 && !(f > 0.0) {
                return fail("f > 0 on (alpha, 1)");
            }
            if u > 1.0 && !(f < 0.0) {
                return fail("f < 0 on (1, M]");
            }
        }
        Ok(self.scan_bounds(samples))
    }

    fn scan_bounds(&self, samples: usize) -> ReactionBounds {
        let m = self.upper_bound;
        ReactionBounds {
            m_f: sup_on_interval(|u| self.eval(u).abs(), 0.0, m, samples),
            m_tilde_f: sup_on_interval(|u| self.deriv(u), 0.0, m, samples),
        }
    }
}

/// Dense scan of `[lo, hi]` followed by golden-section refinement around the
/// best sample.
fn sup_on_interval(g: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> f64 {
    let h = (hi - lo) / samples as f64;
    let (mut best_k, mut best) = (0usize, g(lo));
    for k in 1..=samples {
        let v = g(lo + h * k as f64);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let mut a = (lo + h * best_k as f64 - h).max(lo);
    let mut b = (lo + h * best_k as f64 + h).min(hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..100 {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    best.max(gc).max(gd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    fn grid() -> Arc<Grid1D> {
        Arc::new(build_grid(4.0, 4000, &[1.0, 3.0]).unwrap())
    }

    #[test]
    fn sharp_values() {
        let p = DiffusivityProfile::sharp(grid(), 0.01).unwrap();
        assert_eq!(p.diffusivity_at(2.0).unwrap(), 1.0);
        assert_eq!(p.diffusivity_at(1.0).unwrap(), 1.0);
        assert_eq!(p.diffusivity_at(0.5).unwrap(), 0.01);
        assert_eq!(p.diffusivity_at(3.5).unwrap(), 0.01);
        assert!(p.diffusivity_at(4.1).is_err());
    }

    #[test]
    fn smoothed_collar_midpoint() {
        let p = DiffusivityProfile::smoothed(grid(), 0.2, 0.1).unwrap();
        assert!((p.diffusivity_at(0.95).unwrap() - 0.6).abs() < 1e-12);
        assert!((p.diffusivity_at(3.05).unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(p.diffusivity_at(0.85).unwrap(), 0.2);
        assert_eq!(p.diffusivity_at(1.5).unwrap(), 1.0);
    }

    #[test]
    fn smoothstep_endpoints() {
        assert_eq!(smoothstep(0.0), 0.0);
        assert_eq!(smoothstep(1.0), 1.0);
        assert_eq!(smoothstep(0.5), 0.5);
    }

    #[test]
    fn invalid_profiles() {
        assert_eq!(
            DiffusivityProfile::sharp(grid(), 0.0).unwrap_err().to_string(),
            "epsilon must be in (0,1], got 0"
        );
        assert!(DiffusivityProfile::sharp(grid(), 1.5).is_err());
        assert!(DiffusivityProfile::smoothed(grid(), 0.5, 0.0).is_err());
        assert!(DiffusivityProfile::new(grid(), 0.5, -1.0).is_err());
    }

    #[test]
    fn face_values_harmonic() {
        let p = DiffusivityProfile::sharp(grid(), 0.01).unwrap();
        let faces = p.face_diffusivity(FaceAveraging::Harmonic);
        assert_eq!(faces.len(), 4001);
        assert!((faces[1000] - 2.0 * 0.01 / 1.01).abs() < 1e-15);
        assert!((faces[1000] - 0.019802).abs() < 1e-6);
        assert_eq!(faces[0], 0.01);
        assert_eq!(faces[4000], 0.01);
        assert_eq!(faces[2000], 1.0);
        let unit = DiffusivityProfile::unit(grid()).face_diffusivity(FaceAveraging::Harmonic);
        assert!(unit.iter().all(|&d| d == 1.0));
    }

    #[test]
    fn reaction_values() {
        let r = BistableReaction::reference();
        assert_eq!(r.eval(0.0), 0.0);
        assert_eq!(r.eval(1.0 / 3.0), 0.0);
        assert_eq!(r.eval(1.0), 0.0);
        assert!((r.eval(0.5) - 1.0 / 24.0).abs() < 1e-15);
        assert!((r.deriv(1.0 / 3.0) - 2.0 / 9.0).abs() < 1e-15);
        assert!(r.deriv(0.0) < 0.0 && r.deriv(1.0) < 0.0);
    }

    #[test]
    fn validate_reference() {
        let b = BistableReaction::reference().validate_bistable(1000).unwrap();
        assert!(b.m_tilde_f > 0.0);
        assert!(b.m_f > 0.0);
    }

    #[test]
    fn logistic_is_not_bistable() {
        let r = BistableReaction::new(0.0, 1.0, 1.0).unwrap();
        match r.validate_bistable(1000) {
            Err(CoefficientError::NotBistable { condition }) => assert_eq!(condition, "f'(0) < 0"),
            other => panic!("unexpected {other:?}"),
        }
        let zero = BistableReaction::zero(1.0);
        assert_eq!(
            zero.validate_bistable(1000),
            Err(CoefficientError::NotBistable {
                condition: "f'(0) < 0".into()
            })
        );
    }

    #[test]
    fn too_few_samples() {
        assert_eq!(
            BistableReaction::reference().validate_bistable(999),
            Err(CoefficientError::TooFewSamples(999))
        );
    }

    #[test]
    fn reaction_parameter_errors() {
        assert!(BistableReaction::new(1.5, 1.0, 1.0).is_err());
        assert!(BistableReaction::new(0.3, -1.0, 1.0).is_err());
        assert!(BistableReaction::new(0.3, 1.0, 0.5).is_err());
    }
}
