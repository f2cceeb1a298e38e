//! Algebraic objects of the two-orientation alignment model: state and grid
//! types, the interaction operator `Q` and its gain form `R`, Maxwellians,
//! linearizations and the hydrodynamic/kinetic projections.

use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Density threshold below which the interaction indicator is treated as false.
pub const DEFAULT_CHI_FLOOR: f64 = 1e-14;

/// Direction of motion of an entity on the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Plus,
    Minus,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Plus, Orientation::Minus];

    pub fn sign(self) -> i8 {
        match self {
            Orientation::Plus => 1,
            Orientation::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.sign())
    }

    pub fn from_sign(j: i64) -> Result<Self> {
        match j {
            1 => Ok(Orientation::Plus),
            -1 => Ok(Orientation::Minus),
            other => Err(Error::param("k", format!("orientation must be +1 or -1, got {other}"))),
        }
    }
}

impl Neg for Orientation {
    type Output = Orientation;

    fn neg(self) -> Orientation {
        match self {
            Orientation::Plus => Orientation::Minus,
            Orientation::Minus => Orientation::Plus,
        }
    }
}

/// Uniform cell-centred grid on the unit torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    n_cells: usize,
}

impl Grid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::param("n_cells", "must be positive"));
        }
        Ok(Grid { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// Centre of cell `i`, `(i + 1/2) dx`.
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.n_cells as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    /// Periodic index: `i` and `i + n_cells` address the same cell.
    pub fn wrap(&self, i: i64) -> usize {
        i.rem_euclid(self.n_cells as i64) as usize
    }

    /// Number of whole cells covered by a displacement `t`, if `t` is a
    /// multiple of `dx`.
    pub fn cells_in(&self, t: f64) -> Result<i64> {
        let cells = t * self.n_cells as f64;
        let rounded = cells.round();
        if !t.is_finite() || (cells - rounded).abs() > 1e-9 * rounded.abs().max(1.0) {
            return Err(Error::IncompatibleShift { t, dx: self.dx() });
        }
        Ok(rounded as i64)
    }
}

fn check_component(values: &[f64], component: &'static str) -> Result<()> {
    for (cell, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { component, cell });
        }
        if v < 0.0 {
            return Err(Error::Negative {
                component,
                cell,
                value: v,
            });
        }
    }
    Ok(())
}

/// Pair of nonnegative densities `f(+1, x_i)`, `f(-1, x_i)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KineticState {
    f_plus: Vec<f64>,
    f_minus: Vec<f64>,
}

impl KineticState {
    pub fn new(f_plus: Vec<f64>, f_minus: Vec<f64>) -> Result<Self> {
        if f_plus.len() != f_minus.len() {
            return Err(Error::LengthMismatch {
                expected: f_plus.len(),
                got: f_minus.len(),
            });
        }
        if f_plus.is_empty() {
            return Err(Error::param("state", "must have at least one cell"));
        }
        check_component(&f_plus, "f_plus")?;
        check_component(&f_minus, "f_minus")?;
        Ok(KineticState { f_plus, f_minus })
    }

    pub(crate) fn from_parts_unchecked(f_plus: Vec<f64>, f_minus: Vec<f64>) -> Self {
        debug_assert_eq!(f_plus.len(), f_minus.len());
        KineticState { f_plus, f_minus }
    }

    pub fn constant(grid: &Grid, plus: f64, minus: f64) -> Result<Self> {
        let n = grid.n_cells();
        KineticState::new(vec![plus; n], vec![minus; n])
    }

    /// Samples `profile(x) -> (f(+1,x), f(-1,x))` at the cell centres.
    pub fn from_fn(grid: &Grid, profile: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let (f_plus, f_minus) = grid.centers().into_iter().map(profile).unzip();
        KineticState::new(f_plus, f_minus)
    }

    pub fn len(&self) -> usize {
        self.f_plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f_plus.is_empty()
    }

    pub fn f_plus(&self) -> &[f64] {
        &self.f_plus
    }

    pub fn f_minus(&self) -> &[f64] {
        &self.f_minus
    }

    pub fn component(&self, j: Orientation) -> &[f64] {
        match j {
            Orientation::Plus => &self.f_plus,
            Orientation::Minus => &self.f_minus,
        }
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.f_plus, self.f_minus)
    }

    /// `Σ_j sup_x |f(j, x)|`.
    pub fn sup_norm(&self) -> f64 {
        let sup = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        sup(&self.f_plus) + sup(&self.f_minus)
    }

    /// Smallest entry over both components.
    pub fn min_value(&self) -> f64 {
        self.f_plus
            .iter()
            .chain(&self.f_minus)
            .fold(f64::INFINITY, |m, &x| m.min(x))
    }

    /// Total density `f(+1) + f(-1)` per cell.
    pub fn density(&self) -> MacroField {
        MacroField::from_vec_unchecked(
            self.f_plus
                .iter()
                .zip(&self.f_minus)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Exchanges the two orientations.
    pub fn swapped(&self) -> KineticState {
        KineticState::from_parts_unchecked(self.f_minus.clone(), self.f_plus.clone())
    }

    /// Mirror image `x -> -x` on the cell-centred torus (cell `i` to `n - 1 - i`).
    pub fn reflected(&self) -> KineticState {
        let rev = |v: &[f64]| v.iter().rev().copied().collect::<Vec<_>>();
        KineticState::from_parts_unchecked(rev(&self.f_plus), rev(&self.f_minus))
    }
}

/// Scaling of the kinetic equation: `(∂t + j∂x) f = Q/ε` or `(ε∂t + j∂x) f = Q/ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    Hyperbolic,
    Parabolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    gamma: f64,
    epsilon: f64,
    scaling: Scaling,
    chi_floor: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, epsilon: f64, scaling: Scaling) -> Result<Self> {
        ModelParams::with_chi_floor(gamma, epsilon, scaling, DEFAULT_CHI_FLOOR)
    }

    pub fn with_chi_floor(gamma: f64, epsilon: f64, scaling: Scaling, chi_floor: f64) -> Result<Self> {
        validate_gamma(gamma)?;
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::param("epsilon", format!("must be positive and finite, got {epsilon}")));
        }
        if !(chi_floor.is_finite() && (0.0..1e-3).contains(&chi_floor)) {
            return Err(Error::param("chi_floor", format!("must lie in [0, 1e-3), got {chi_floor}")));
        }
        Ok(ModelParams {
            gamma,
            epsilon,
            scaling,
            chi_floor,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    pub fn chi_floor(&self) -> f64 {
        self.chi_floor
    }
}

pub(crate) fn validate_gamma(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::param("gamma", format!("must be positive and finite, got {gamma}")));
    }
    if gamma == 1.0 {
        return Err(Error::param(
            "gamma",
            "gamma = 1 decouples the system into free streaming; gamma != 1 is required",
        ));
    }
    Ok(())
}

/// Nonnegative macroscopic density on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroField {
    rho: Vec<f64>,
}

impl MacroField {
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        check_component(&rho, "rho")?;
        Ok(MacroField { rho })
    }

    pub(crate) fn from_vec_unchecked(rho: Vec<f64>) -> Self {
        MacroField { rho }
    }

    pub fn constant(grid: &Grid, value: f64) -> Result<Self> {
        MacroField::new(vec![value; grid.n_cells()])
    }

    pub fn from_fn(grid: &Grid, profile: impl Fn(f64) -> f64) -> Result<Self> {
        MacroField::new(grid.centers().into_iter().map(profile).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.rho
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.rho
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.rho.iter().fold(f64::INFINITY, |m, &x| m.min(x))
    }

    pub fn max(&self) -> f64 {
        self.rho.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
    }
}

/// Which Maxwellian family: isotropic (`η = (1/2, 1/2)`) or aligned along `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumKind {
    Diffusive,
    Aligned(Orientation),
}

impl EquilibriumKind {
    pub const ALL: [EquilibriumKind; 3] = [
        EquilibriumKind::Diffusive,
        EquilibriumKind::Aligned(Orientation::Plus),
        EquilibriumKind::Aligned(Orientation::Minus),
    ];

    /// Weights `(η_{+1}, η_{-1})`.
    pub fn weights(self) -> (f64, f64) {
        match self {
            EquilibriumKind::Diffusive => (0.5, 0.5),
            EquilibriumKind::Aligned(Orientation::Plus) => (1.0, 0.0),
            EquilibriumKind::Aligned(Orientation::Minus) => (0.0, 1.0),
        }
    }
}

/// Raw per-cell pair of values that may take either sign (rates, differences).
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentPair {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

/// Interaction rate `Q[f](+1), Q[f](-1)` for a single cell.
///
/// Returns zeros when the cell's total density is at or below `chi_floor`.
#[inline]
pub fn collision_pair(f_plus: f64, f_minus: f64, gamma: f64, chi_floor: f64) -> (f64, f64) {
    if f_plus + f_minus <= chi_floor {
        return (0.0, 0.0);
    }
    let p = f_plus.powf(gamma);
    let m = f_minus.powf(gamma);
    let q = (f_minus * p - f_plus * m) / (p + m);
    (q, -q)
}

/// Rate of change of the smaller-or-any component `w` of a cell with total
/// mass `m`: `((m - w) w^γ - w (m - w)^γ) / ((m - w)^γ + w^γ)`.
#[inline]
pub(crate) fn exchange_rate(m: f64, w: f64, gamma: f64) -> f64 {
    let other = m - w;
    let wg = w.powf(gamma);
    let og = other.powf(gamma);
    let denom = og + wg;
    if denom <= 0.0 {
        return 0.0;
    }
    (other * wg - w * og) / denom
}

fn check_finite_state(state: &KineticState) -> Result<()> {
    for (cell, (a, b)) in state.f_plus.iter().zip(&state.f_minus).enumerate() {
        if !a.is_finite() {
            return Err(Error::NonFinite {
                component: "f_plus",
                cell,
            });
        }
        if !b.is_finite() {
            return Err(Error::NonFinite {
                component: "f_minus",
                cell,
            });
        }
    }
    Ok(())
}

/// Interaction operator `Q[f]` on every cell.
pub fn collision_q(state: &KineticState, params: &ModelParams) -> Result<ComponentPair> {
    check_finite_state(state)?;
    let (plus, minus) = state
        .f_plus
        .iter()
        .zip(&state.f_minus)
        .map(|(&a, &b)| collision_pair(a, b, params.gamma, params.chi_floor))
        .unzip();
    Ok(ComponentPair { plus, minus })
}

/// Gain form `R[f](j) = f(j)^γ (f(1) + f(-1)) / (f(1)^γ + f(-1)^γ)`; requires
/// strictly positive entries.
pub fn collision_r(state: &KineticState, params: &ModelParams) -> Result<KineticState> {
    check_finite_state(state)?;
    let gamma = params.gamma;
    let mut plus = Vec::with_capacity(state.len());
    let mut minus = Vec::with_capacity(state.len());
    for (cell, (&a, &b)) in state.f_plus.iter().zip(&state.f_minus).enumerate() {
        if a <= 0.0 {
            return Err(Error::NonPositive {
                component: "f_plus",
                cell,
                value: a,
            });
        }
        if b <= 0.0 {
            return Err(Error::NonPositive {
                component: "f_minus",
                cell,
                value: b,
            });
        }
        let pa = a.powf(gamma);
        let pb = b.powf(gamma);
        let scale = (a + b) / (pa + pb);
        plus.push(pa * scale);
        minus.push(pb * scale);
    }
    Ok(KineticState::from_parts_unchecked(plus, minus))
}

/// Local equilibrium `M(j, x) = η_j ϱ(x)`.
pub fn maxwellian(kind: EquilibriumKind, rho: &MacroField) -> Result<KineticState> {
    check_component(&rho.rho, "rho")?;
    let (ep, em) = kind.weights();
    let plus = rho.rho.iter().map(|r| ep * r).collect();
    let minus = rho.rho.iter().map(|r| em * r).collect();
    Ok(KineticState::from_parts_unchecked(plus, minus))
}

/// Linearization of `Q` at the Maxwellian of the given kind applied to
/// `(f(+1), f(-1))`.
pub fn linearize_apply(kind: EquilibriumKind, gamma: f64, pair: (f64, f64)) -> (f64, f64) {
    let (a, b) = pair;
    match kind {
        EquilibriumKind::Diffusive => {
            let c = 0.5 * (1.0 - gamma);
            (c * (b - a), c * (a - b))
        }
        EquilibriumKind::Aligned(Orientation::Plus) => (b, -b),
        EquilibriumKind::Aligned(Orientation::Minus) => (-a, a),
    }
}

/// Target of a spectral projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    /// Null space of the linearization (`P`).
    Hydro,
    /// Complementary invariant subspace (`P⊥ = I - P`).
    Kinetic,
}

pub fn project(kind: EquilibriumKind, pair: (f64, f64), which: Subspace) -> (f64, f64) {
    let (a, b) = pair;
    match (kind, which) {
        (EquilibriumKind::Diffusive, Subspace::Hydro) => {
            let s = 0.5 * (a + b);
            (s, s)
        }
        (EquilibriumKind::Diffusive, Subspace::Kinetic) => (0.5 * (a - b), 0.5 * (b - a)),
        (EquilibriumKind::Aligned(Orientation::Plus), Subspace::Hydro) => (a + b, 0.0),
        (EquilibriumKind::Aligned(Orientation::Plus), Subspace::Kinetic) => (-b, b),
        (EquilibriumKind::Aligned(Orientation::Minus), Subspace::Hydro) => (0.0, a + b),
        (EquilibriumKind::Aligned(Orientation::Minus), Subspace::Kinetic) => (a, -a),
    }
}

/// `Σ_i (f(+1, x_i) + f(-1, x_i)) dx`.
pub fn mass(state: &KineticState, grid: &Grid) -> f64 {
    state
        .f_plus
        .iter()
        .zip(&state.f_minus)
        .map(|(a, b)| a + b)
        .sum::<f64>()
        * grid.dx()
}
