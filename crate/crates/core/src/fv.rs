//! Conservative finite-volume solver for the forward interface problem
//!
//! ```text
//! η ∂u/∂t = ∂/∂y (D/2 ∂u/∂y),   [D ∂u/∂y] = 0 and β⁺u(x_j⁺) = β⁻u(x_j⁻) at interfaces,
//! ```
//!
//! with zero-flux outer boundaries. Interfaces sit on cell edges. Updates
//! are written in delta form, `(M − θΔt K) δ = Δt K uⁿ`, so any field with
//! zero flux on every edge is reproduced bit for bit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{Medium, Side};
use crate::quad::gauss3;

pub const MIN_CELLS_PER_PIECE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ImplicitEuler,
    CrankNicolson,
}

impl Scheme {
    fn theta(self) -> f64 {
        match self {
            Scheme::ImplicitEuler => 1.0,
            Scheme::CrankNicolson => 0.5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::ImplicitEuler => "implicit-euler",
            Scheme::CrankNicolson => "crank-nicolson",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "implicit-euler" | "ie" => Ok(Scheme::ImplicitEuler),
            "crank-nicolson" | "cn" => Ok(Scheme::CrankNicolson),
            other => Err(Error::InvalidArgument(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Flux `D/2 ∂u/∂y` through an edge with one-sided conductances
/// `a = 2δ_L/D⁻`, `b = 2δ_R/D⁺` and trace ratio `r = u⁺/u⁻ = β⁻/β⁺`.
pub fn interface_flux(u_l: f64, u_r: f64, a: f64, b: f64, r: f64) -> f64 {
    (u_r - r * u_l) / (r * a + b)
}

/// Solves a tridiagonal system in place of `rhs` (Thomas algorithm).
/// `sub[i]` couples row `i` to `i−1` (`sub[0]` unused), `sup[i]` row `i` to `i+1`.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64], dt: f64) -> Result<()> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut pivot = diag[0];
    for i in 0..n {
        if i > 0 {
            pivot = diag[i] - sub[i] * c[i - 1];
            rhs[i] -= sub[i] * rhs[i - 1];
        }
        if !pivot.is_finite() || pivot.abs() < 1e-300 {
            return Err(Error::SolverBreakdown { row: i, pivot, dt });
        }
        c[i] = if i + 1 < n { sup[i] / pivot } else { 0.0 };
        rhs[i] /= pivot;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Ok(())
}

/// Interface edge data, kept for trace reconstruction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfaceEdge {
    pub x: f64,
    /// Index of the cell left of the edge.
    pub cell: usize,
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

#[derive(Clone, Debug)]
pub struct FvSystem {
    edges: Vec<f64>,
    centers: Vec<f64>,
    widths: Vec<f64>,
    eta: Vec<f64>,
    /// Per interior edge `e` (between cells `e` and `e+1`): `F = c_e (u_{e+1} − r_e u_e)`.
    c: Vec<f64>,
    r: Vec<f64>,
    interfaces: Vec<InterfaceEdge>,
    dt: f64,
    scheme: Scheme,
    // bands of M − θΔt K
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

/// Splits `n` cells over pieces proportionally to length, at least
/// [`MIN_CELLS_PER_PIECE`] each (largest remainder).
fn allocate_cells(lengths: &[f64], n: usize) -> Result<Vec<usize>> {
    if n < MIN_CELLS_PER_PIECE * lengths.len() {
        return Err(Error::InvalidArgument(format!(
            "{n} cells is fewer than {MIN_CELLS_PER_PIECE} per piece for {} pieces",
            lengths.len()
        )));
    }
    let total: f64 = lengths.iter().sum();
    let raw: Vec<f64> = lengths.iter().map(|l| n as f64 * l / total).collect();
    let mut counts: Vec<usize> = raw.iter().map(|r| (r.floor() as usize).max(MIN_CELLS_PER_PIECE)).collect();
    let mut sum: usize = counts.iter().sum();
    while sum < n {
        let p = (0..counts.len())
            .max_by(|&i, &j| (raw[i] - counts[i] as f64).total_cmp(&(raw[j] - counts[j] as f64)))
            .expect("nonempty");
        counts[p] += 1;
        sum += 1;
    }
    while sum > n {
        let p = (0..counts.len())
            .filter(|&i| counts[i] > MIN_CELLS_PER_PIECE)
            .min_by(|&i, &j| (raw[i] - counts[i] as f64).total_cmp(&(raw[j] - counts[j] as f64)))
            .expect("some piece above the minimum");
        counts[p] -= 1;
        sum -= 1;
    }
    Ok(counts)
}

pub fn assemble_system(medium: &Medium, n_cells: usize, dt: f64, scheme: Scheme) -> Result<FvSystem> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let pieces = medium.pieces();
    let counts = allocate_cells(&pieces.iter().map(|p| p.len()).collect::<Vec<_>>(), n_cells)?;

    let mut edges = vec![pieces[0].left];
    let mut cell_piece = Vec::with_capacity(n_cells);
    for (p, (piece, &n)) in pieces.iter().zip(&counts).enumerate() {
        let w = piece.len() / n as f64;
        for i in 1..n {
            edges.push(piece.left + i as f64 * w);
        }
        edges.push(piece.right);
        cell_piece.extend(std::iter::repeat_n(p, n));
    }

    let n = cell_piece.len();
    let widths: Vec<f64> = edges.windows(2).map(|e| e[1] - e[0]).collect();
    let centers: Vec<f64> = edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect();
    let avg = |i: usize, f: &dyn Fn(f64) -> f64| gauss3(f, edges[i], edges[i + 1]) / widths[i];
    let eta: Vec<f64> = (0..n).map(|i| avg(i, &|x| pieces[cell_piece[i]].eta.eval(x))).collect();
    let d: Vec<f64> = (0..n).map(|i| avg(i, &|x| pieces[cell_piece[i]].d.eval(x))).collect();

    let mut c = Vec::with_capacity(n - 1);
    let mut r = Vec::with_capacity(n - 1);
    let mut interfaces = Vec::new();
    for e in 0..n - 1 {
        let (pl, pr) = (cell_piece[e], cell_piece[e + 1]);
        if pl == pr {
            let (a, b) = (widths[e] / d[e], widths[e + 1] / d[e + 1]);
            c.push(1.0 / (a + b));
            r.push(1.0);
        } else {
            let x = edges[e + 1];
            let j = pl;
            if medium.interfaces()[j].x != x {
                return Err(Error::InvalidArgument(format!("interface {j} not on a cell edge (edge at {x})")));
            }
            let (dm, dp, _, _) = medium.one_sided(j);
            let (a, b) = (widths[e] / dm, widths[e + 1] / dp);
            let rj = 1.0 / medium.beta_ratio(j);
            c.push(1.0 / (rj * a + b));
            r.push(rj);
            interfaces.push(InterfaceEdge { x, cell: e, a, b, r: rj });
        }
    }

    let theta = scheme.theta();
    let mut sub = vec![0.0; n];
    let mut diag: Vec<f64> = (0..n).map(|i| eta[i] * widths[i]).collect();
    let mut sup = vec![0.0; n];
    for e in 0..n - 1 {
        // K[e][e] −= c r, K[e][e+1] += c, K[e+1][e+1] −= c, K[e+1][e] += c r
        diag[e] += theta * dt * c[e] * r[e];
        sup[e] = -theta * dt * c[e];
        diag[e + 1] += theta * dt * c[e];
        sub[e + 1] = -theta * dt * c[e] * r[e];
    }

    Ok(FvSystem { edges, centers, widths, eta, c, r, interfaces, dt, scheme, sub, diag, sup })
}

/// Per-cell concentration `u` at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityField {
    pub u: Vec<f64>,
    pub t: f64,
}

impl DensityField {
    /// `Σ η_i u_i Δx_i`.
    pub fn mass(&self, system: &FvSystem) -> f64 {
        self.u.iter().zip(&system.eta).zip(&system.widths).map(|((u, e), w)| u * e * w).sum()
    }
}

/// One-sided traces at an interface edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfaceTrace {
    pub x: f64,
    pub flux: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    /// `β⁻/β⁺`; the jump condition reads `u_plus = r·u_minus`.
    pub r: f64,
}

impl FvSystem {
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// Cell averages of `η`.
    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn interface_edges(&self) -> &[InterfaceEdge] {
        &self.interfaces
    }

    /// Number of interior edges that use the trace-ratio flux (`r ≠ 1`).
    pub fn jump_edges(&self) -> usize {
        self.r.iter().filter(|&&r| r != 1.0).count()
    }

    /// Index of the cell with `left < x ≤ right`; the first cell for the left end.
    pub fn cell_of(&self, x: f64) -> Result<usize> {
        let (lo, hi) = (self.edges[0], self.edges[self.edges.len() - 1]);
        if !(lo..=hi).contains(&x) {
            return Err(Error::OutOfDomain { x, lo, hi });
        }
        Ok(self.edges.partition_point(|&e| e < x).saturating_sub(1).min(self.len() - 1))
    }

    /// Edge fluxes `D/2 ∂u/∂y`, one per interior edge.
    pub fn fluxes(&self, u: &[f64]) -> Vec<f64> {
        (0..self.c.len()).map(|e| self.c[e] * (u[e + 1] - self.r[e] * u[e])).collect()
    }

    fn apply_operator(&self, u: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for e in 0..self.c.len() {
            let f = self.c[e] * (u[e + 1] - self.r[e] * u[e]);
            out[e] += f;
            out[e + 1] -= f;
        }
    }

    pub fn traces(&self, field: &DensityField) -> Vec<InterfaceTrace> {
        self.interfaces
            .iter()
            .map(|ie| {
                let (ul, ur) = (field.u[ie.cell], field.u[ie.cell + 1]);
                let flux = interface_flux(ul, ur, ie.a, ie.b, ie.r);
                InterfaceTrace { x: ie.x, flux, u_minus: ul + ie.a * flux, u_plus: ur - ie.b * flux, r: ie.r }
            })
            .collect()
    }
}

pub fn advance(system: &FvSystem, field: &DensityField, n_steps: usize) -> Result<DensityField> {
    let n = system.len();
    if field.u.len() != n {
        return Err(Error::InvalidArgument(format!("field has {} cells, system {n}", field.u.len())));
    }
    let mut u = field.u.clone();
    let mut delta = vec![0.0; n];
    for _ in 0..n_steps {
        system.apply_operator(&u, &mut delta);
        delta.iter_mut().for_each(|d| *d *= system.dt);
        solve_tridiagonal(&system.sub, &system.diag, &system.sup, &mut delta, system.dt)?;
        u.iter_mut().zip(&delta).for_each(|(u, d)| *u += d);
    }
    Ok(DensityField { u, t: field.t + n_steps as f64 * system.dt })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Initial {
    /// Unit particle at `x0`: the cell containing it holds mass `η(x0)`.
    Delta(f64),
    /// `(x, u)` samples, linearly interpolated to cell centers, zero outside.
    Tabulated(Vec<(f64, f64)>),
}

/// `η(x0)` with the same one-sided convention as the delta cell.
pub fn eta_at_start(medium: &Medium, x0: f64) -> Result<f64> {
    let side = if x0 <= medium.window().0 { Side::Right } else { Side::Left };
    Ok(medium.coeff_at(x0, side)?.1)
}

pub fn initial_field(system: &FvSystem, medium: &Medium, init: &Initial) -> Result<DensityField> {
    let mut u = vec![0.0; system.len()];
    match init {
        Initial::Delta(x0) => {
            let i = system.cell_of(*x0)?;
            u[i] = eta_at_start(medium, *x0)? / (system.eta[i] * system.widths[i]);
        }
        Initial::Tabulated(table) => {
            if table.windows(2).any(|w| w[1].0 <= w[0].0) {
                return Err(Error::InvalidArgument("tabulated initial data must have increasing x".into()));
            }
            for (ui, &x) in u.iter_mut().zip(&system.centers) {
                let k = table.partition_point(|&(xt, _)| xt <= x);
                *ui = if k == 0 || k == table.len() {
                    if k > 0 && table[k - 1].0 == x { table[k - 1].1 } else { 0.0 }
                } else {
                    let ((x0, u0), (x1, u1)) = (table[k - 1], table[k]);
                    u0 + (u1 - u0) * (x - x0) / (x1 - x0)
                };
            }
        }
    }
    Ok(DensityField { u, t: 0.0 })
}

/// Integrates to time `t`; the step is shrunk to `t/⌈t/dt⌉` so the final
/// time is hit exactly.
pub fn solve_forward(
    medium: &Medium,
    init: &Initial,
    t: f64,
    n_cells: usize,
    dt: f64,
    scheme: Scheme,
) -> Result<(FvSystem, DensityField)> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("final time must be non-negative, got {t}")));
    }
    let steps = ((t / dt) - 1e-9).ceil().max(1.0) as usize;
    let system = assemble_system(medium, n_cells, if t > 0.0 { t / steps as f64 } else { dt }, scheme)?;
    let field = initial_field(&system, medium, init)?;
    let out = if t > 0.0 { advance(&system, &field, steps)? } else { field };
    Ok((system, out))
}

/// `p(t, x0, y) = η(y)/η(x0) · q(t, x0, y)` per cell.
pub fn p_from_q(system: &FvSystem, medium: &Medium, field: &DensityField, x0: f64) -> Result<Vec<f64>> {
    let e0 = eta_at_start(medium, x0)?;
    Ok(field.u.iter().zip(&system.eta).map(|(u, e)| e * u / e0).collect())
}

/// `Σ |v_i − avg_i ρ| Δx_i` with `ρ` averaged over each cell.
pub fn l1_distance(system: &FvSystem, values: &[f64], density: impl Fn(f64) -> f64) -> f64 {
    (0..system.len())
        .map(|i| {
            let (a, b) = (system.edges[i], system.edges[i + 1]);
            let exact = gauss3(&density, a, b) / (b - a);
            (values[i] - exact).abs() * (b - a)
        })
        .sum()
}

/// `Σ p_i f(y_i) Δy_i` at cell centers.
pub fn expectation(system: &FvSystem, p: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    p.iter().zip(&system.centers).zip(&system.widths).map(|((p, &y), w)| p * f(y) * w).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{Interface, MediumSpec, Piece};
    use crate::path::RescaledSkew;

    fn interface_medium(eta_plus: f64, window: f64) -> Medium {
        Medium::single_interface((-window, window), (1.0, 2.0), (1.0, eta_plus), (1.0, 1.0)).unwrap()
    }

    fn beta_jump() -> Medium {
        Medium::new(MediumSpec {
            window: [-1.0, 1.0],
            bounds: [0.2, 5.0],
            interfaces: vec![Interface::with_beta(0.0, 1.0, 2.5)],
            pieces: vec![Piece::constant(-1.0, 0.0, 1.0, 1.0), Piece::constant(0.0, 1.0, 2.0, 3.0)],
        })
        .unwrap()
    }

    #[test]
    fn flux_examples() {
        assert_eq!(interface_flux(1.0, 1.0, 0.1, 0.1, 1.0), 0.0);
        assert_eq!(interface_flux(2.0, 0.8, 0.3, 0.7, 0.4), 0.0);
        let f = interface_flux(1.0, 0.0, 2.0 * 0.05 / 1.0, 2.0 * 0.05 / 2.0, 1.0);
        assert!((f + 20.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let sub = [0.0, -1.0, 0.5, -0.2];
        let diag = [4.0, 3.0, 5.0, 2.0];
        let sup = [1.0, -0.5, 1.0, 0.0];
        let x = [1.0, -2.0, 0.5, 3.0];
        let mut b: Vec<f64> = (0..4)
            .map(|i| {
                diag[i] * x[i] + if i > 0 { sub[i] * x[i - 1] } else { 0.0 } + if i < 3 { sup[i] * x[i + 1] } else { 0.0 }
            })
            .collect();
        solve_tridiagonal(&sub, &diag, &sup, &mut b, 0.1).unwrap();
        for (a, e) in b.iter().zip(x) {
            assert!((a - e).abs() < 1e-14);
        }
        let mut z = vec![1.0, 1.0];
        assert!(matches!(
            solve_tridiagonal(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0], &mut z, 0.1),
            Err(Error::SolverBreakdown { row: 1, .. })
        ));
    }

    #[test]
    fn uniform_stencil() {
        let m = Medium::homogeneous((-1.0, 1.0), 2.0, 4.0).unwrap();
        let s = assemble_system(&m, 20, 1e-3, Scheme::ImplicitEuler).unwrap();
        let dx = 0.1;
        // K/(ηΔx) = D/(2η)/Δx² on the off-diagonal
        let coeff = s.c[5] / (s.eta[5] * dx);
        assert!((coeff - 2.0 / (2.0 * 4.0) / (dx * dx)).abs() < 1e-10);
        assert_eq!(s.jump_edges(), 0);
    }

    #[test]
    fn refinement_keeps_interfaces_on_edges() {
        let m = Medium::single_interface((-1.0, 2.0), (1.0, 2.0), (1.0, 1.0), (1.0, 1.0)).unwrap();
        for n in [9, 18, 36, 101] {
            let s = assemble_system(&m, n, 1e-3, Scheme::ImplicitEuler).unwrap();
            assert_eq!(s.len(), n);
            assert!(s.edges().contains(&0.0));
        }
        assert!(assemble_system(&m, 7, 1e-3, Scheme::ImplicitEuler).is_err());
        let b = beta_jump();
        let s = assemble_system(&b, 40, 1e-3, Scheme::ImplicitEuler).unwrap();
        assert_eq!(s.jump_edges(), 1);
    }

    #[test]
    fn zero_flux_fields_are_fixed_points() {
        let m = Medium::homogeneous((-1.0, 1.0), 1.3, 0.7).unwrap();
        let s = assemble_system(&m, 30, 1e-2, Scheme::ImplicitEuler).unwrap();
        let f = DensityField { u: vec![0.7; 30], t: 0.0 };
        assert_eq!(advance(&s, &f, 50).unwrap().u, f.u);

        let b = beta_jump();
        for scheme in [Scheme::ImplicitEuler, Scheme::CrankNicolson] {
            let s = assemble_system(&b, 40, 1e-2, scheme).unwrap();
            let r = s.interface_edges()[0].r;
            let u: Vec<f64> = s.centers().iter().map(|&x| if x < 0.0 { 1.5 } else { 1.5 * r }).collect();
            let f = DensityField { u: u.clone(), t: 0.0 };
            assert_eq!(advance(&s, &f, 25).unwrap().u, u);
        }
    }

    #[test]
    fn gaussian_matches_heat_kernel() {
        let (d, eta) = (1.5, 0.75);
        let m = Medium::homogeneous((-6.0, 6.0), d, eta).unwrap();
        let (v0, t) = (0.1, 0.4);
        let g = |v: f64, x: f64| (-x * x / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
        let mut errs = Vec::new();
        for n in [200, 400] {
            let s = assemble_system(&m, n, 1e-4, Scheme::CrankNicolson).unwrap();
            let u0: Vec<f64> = (0..n).map(|i| gauss3(|x| g(v0, x), s.edges()[i], s.edges()[i + 1]) / s.widths()[i]).collect();
            let out = advance(&s, &DensityField { u: u0, t: 0.0 }, 4000).unwrap();
            errs.push(l1_distance(&s, &out.u, |x| g(v0 + d / eta * t, x)));
        }
        assert!(errs[0] < 1e-3, "{errs:?}");
        assert!(errs[1] < errs[0] / 3.0, "{errs:?}");
    }

    #[test]
    fn delta_mass_and_probability() {
        let m = interface_medium(3.0, 3.0);
        let (s, f) = solve_forward(&m, &Initial::Delta(-0.5), 0.2, 300, 1e-3, Scheme::ImplicitEuler).unwrap();
        assert!((f.mass(&s) - 1.0).abs() < 1e-10);
        let p = p_from_q(&s, &m, &f, -0.5).unwrap();
        let total: f64 = p.iter().zip(s.widths()).map(|(p, w)| p * w).sum();
        assert!((total - 1.0).abs() < 1e-10);
        // cells right of the interface: p = 3q
        let i = s.cell_of(0.5).unwrap();
        assert!((p[i] - 3.0 * f.u[i]).abs() < 1e-15 * p[i].abs().max(1.0));

        let homog = Medium::homogeneous((-1.0, 1.0), 1.0, 2.0).unwrap();
        let (s, f) = solve_forward(&homog, &Initial::Delta(0.1), 0.1, 100, 1e-3, Scheme::ImplicitEuler).unwrap();
        assert_eq!(p_from_q(&s, &homog, &f, 0.1).unwrap(), f.u);
    }

    #[test]
    fn traces_satisfy_jump_condition() {
        let b = beta_jump();
        let (s, f) = solve_forward(&b, &Initial::Delta(-0.3), 0.1, 200, 1e-3, Scheme::ImplicitEuler).unwrap();
        let tr = s.traces(&f)[0];
        // β⁺u⁺ = β⁻u⁻ with β⁻ = 1, β⁺ = 2.5
        assert!((2.5 * tr.u_plus - tr.u_minus).abs() < 1e-10);
        assert!(tr.flux.is_finite());
    }

    #[test]
    fn skew_density_agreement() {
        let m = interface_medium(1.0, 5.0);
        let (s, f) = solve_forward(&m, &Initial::Delta(0.0), 0.5, 1000, 1e-3, Scheme::ImplicitEuler).unwrap();
        let p = p_from_q(&s, &m, &f, 0.0).unwrap();
        let oracle = RescaledSkew::from_medium(&m).unwrap();
        let err = l1_distance(&s, &p, |y| oracle.density(0.5, 0.0, y));
        assert!(err < 2e-2, "L1 = {err}");
    }

    #[test]
    fn tabulated_initial_data() {
        let m = Medium::homogeneous((0.0, 1.0), 1.0, 1.0).unwrap();
        let s = assemble_system(&m, 10, 1e-3, Scheme::ImplicitEuler).unwrap();
        let f = initial_field(&s, &m, &Initial::Tabulated(vec![(0.0, 0.0), (1.0, 2.0)])).unwrap();
        assert!((f.u[3] - 0.7).abs() < 1e-14);
        assert!(initial_field(&s, &m, &Initial::Tabulated(vec![(1.0, 0.0), (0.0, 2.0)])).is_err());
    }
}
