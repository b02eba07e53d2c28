//! Scale density `s′ = 2φ_j/D`, speed density `m′ = η/φ_j`, the scale
//! function `s(x) = ∫₀ˣ s′`, its inverse, and the quadratic-variation rate
//! `q = D/η = 2/(m′s′)`.
//!
//! `s` is cached at every piece endpoint; evaluating it elsewhere costs one
//! local quadrature (none on constant-coefficient pieces).

use crate::error::{Error, Result};
use crate::media::{Medium, Side};
use crate::quad::adaptive_simpson;

/// Absolute tolerance for the per-piece scale quadrature.
pub const SCALE_QUAD_TOL: f64 = 1e-12;

/// One-sided density values at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Densities {
    pub s_prime: f64,
    pub m_prime: f64,
    pub qv_rate: f64,
}

#[derive(Clone, Debug)]
pub struct ScaleSpeed {
    medium: Medium,
    breaks: Vec<f64>,
    s_breaks: Vec<f64>,
}

impl ScaleSpeed {
    pub fn new(medium: &Medium) -> Self {
        let (lo, hi) = medium.window();
        let mut breaks = vec![lo];
        breaks.extend(medium.interface_positions());
        breaks.push(hi);

        let mut ss = ScaleSpeed { medium: medium.clone(), s_breaks: vec![0.0; breaks.len()], breaks };
        // s(origin) = 0, origin clamped into the window
        let origin = 0f64.clamp(lo, hi);
        let p0 = medium.piece_index(origin, Side::Right).expect("origin inside window");
        ss.s_breaks[p0] = -ss.piece_integral(p0, ss.breaks[p0], origin);
        for p in p0..ss.n_pieces() {
            ss.s_breaks[p + 1] = ss.s_breaks[p] + ss.piece_integral(p, ss.breaks[p], ss.breaks[p + 1]);
        }
        for p in (0..p0).rev() {
            ss.s_breaks[p] = ss.s_breaks[p + 1] - ss.piece_integral(p, ss.breaks[p], ss.breaks[p + 1]);
        }
        ss
    }

    pub fn medium(&self) -> &Medium {
        &self.medium
    }

    fn n_pieces(&self) -> usize {
        self.breaks.len() - 1
    }

    /// `s′` on piece `p`, evaluated with that piece's coefficients (so an
    /// endpoint gives the one-sided limit from inside the piece).
    #[inline]
    pub fn s_prime_in(&self, p: usize, x: f64) -> f64 {
        let piece = &self.medium.pieces()[p];
        2.0 * self.medium.phi().at_position(p) / piece.d.eval(x)
    }

    #[inline]
    pub fn m_prime_in(&self, p: usize, x: f64) -> f64 {
        let piece = &self.medium.pieces()[p];
        piece.eta.eval(x) / self.medium.phi().at_position(p)
    }

    /// `∫_a^b s′` for `a, b` inside piece `p`.
    pub fn piece_integral(&self, p: usize, a: f64, b: f64) -> f64 {
        let piece = &self.medium.pieces()[p];
        if piece.d.is_constant() {
            return self.s_prime_in(p, a) * (b - a);
        }
        adaptive_simpson(|y| self.s_prime_in(p, y), a, b, SCALE_QUAD_TOL)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.medium.window();
        if (lo..=hi).contains(&x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo, hi })
        }
    }

    pub fn densities_at(&self, x: f64, side: Side) -> Result<Densities> {
        let p = self.medium.piece_index(x, side)?;
        let piece = &self.medium.pieces()[p];
        Ok(Densities {
            s_prime: self.s_prime_in(p, x),
            m_prime: self.m_prime_in(p, x),
            qv_rate: piece.d.eval(x) / piece.eta.eval(x),
        })
    }

    /// `s(x)`, anchored so that `s(0) = 0` (or at the window end nearest 0).
    pub fn scale_value(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let p = self.medium.piece_index(x, Side::Right)?;
        Ok(self.scale_in_piece(p, x))
    }

    /// `s(x)` for `x` in the closure of piece `p`.
    pub fn scale_in_piece(&self, p: usize, x: f64) -> f64 {
        if x == self.breaks[p] {
            return self.s_breaks[p];
        }
        if x == self.breaks[p + 1] {
            return self.s_breaks[p + 1];
        }
        self.s_breaks[p] + self.piece_integral(p, self.breaks[p], x)
    }

    /// Scale image `[s(y_min), s(y_max)]`.
    pub fn image(&self) -> (f64, f64) {
        (self.s_breaks[0], *self.s_breaks.last().expect("non-empty"))
    }

    pub fn inverse_scale_value(&self, u: f64) -> Result<f64> {
        let (lo, hi) = self.image();
        if !(lo..=hi).contains(&u) {
            return Err(Error::OutOfImage { u, lo, hi });
        }
        let p = (self.s_breaks.partition_point(|&s| s <= u).max(1) - 1).min(self.n_pieces() - 1);
        let (a, b) = (self.breaks[p], self.breaks[p + 1]);
        let (sa, sb) = (self.s_breaks[p], self.s_breaks[p + 1]);
        if u == sa {
            return Ok(a);
        }
        if u == sb {
            return Ok(b);
        }
        let piece = &self.medium.pieces()[p];
        if piece.d.is_constant() {
            return Ok((a + (u - sa) / self.s_prime_in(p, a)).clamp(a, b));
        }

        // safeguarded Newton on the bracket [l, r]
        let (mut l, mut r) = (a, b);
        let mut x = a + (u - sa) / (sb - sa) * (b - a);
        let target = 1e-13 * (1.0 + u.abs());
        for _ in 0..200 {
            let f = self.scale_in_piece(p, x) - u;
            if f.abs() <= target {
                return Ok(x);
            }
            if f > 0.0 {
                r = x;
            } else {
                l = x;
            }
            let next = x - f / self.s_prime_in(p, x);
            x = if next > l && next < r { next } else { 0.5 * (l + r) };
            if r - l <= f64::EPSILON * (1.0 + x.abs()) {
                break;
            }
        }
        Ok(x)
    }

    /// Speed density of `Y = s(X)`: `m_Y′(u) = m′(x)/s′(x)` at `x = s⁻¹(u)`.
    pub fn speed_density_in_scale(&self, u: f64, side: Side) -> Result<f64> {
        let x = self.inverse_scale_value(u)?;
        let d = self.densities_at(x, side)?;
        Ok(d.m_prime / d.s_prime)
    }

    /// `P_x(hit b before a) = (s(x) − s(a)) / (s(b) − s(a))`.
    pub fn exit_probability(&self, a: f64, x: f64, b: f64) -> Result<f64> {
        let sa = self.scale_value(a)?;
        Ok((self.scale_value(x)? - sa) / (self.scale_value(b)? - sa))
    }

    /// Integrates `f(p, y, s(y) − s(a))` over `[a, b]`, split at piece breaks.
    fn integrate_with_scale<F>(&self, a: f64, b: f64, f: F) -> f64
    where
        F: Fn(usize, f64, f64) -> f64,
    {
        let mut total = 0.0;
        let mut base = 0.0; // s(l) - s(a)
        let mut l = a;
        while l < b {
            let p = self.medium.piece_index(l, Side::Right).expect("inside window");
            let r = self.breaks[p + 1].min(b);
            let piece = &self.medium.pieces()[p];
            let integrand = |y: f64| {
                let ds = if piece.d.is_constant() {
                    self.s_prime_in(p, l) * (y - l)
                } else {
                    self.piece_integral(p, l, y)
                };
                f(p, y, base + ds)
            };
            // coarse pass to set a relative tolerance
            let rough = crate::quad::gauss3(integrand, l, r).abs();
            let tol = (1e-13 * rough).max(1e-300);
            total += adaptive_simpson(integrand, l, r, tol);
            base += self.piece_integral(p, l, r);
            l = r;
        }
        total
    }

    /// Mean exit time of `(a, b)` from `x`: `∫ G(x, y) m′(y) dy` with the
    /// scale Green kernel `G = [s(x∧y) − s(a)][s(b) − s(x∨y)] / (s(b) − s(a))`.
    pub fn mean_exit_time(&self, a: f64, x: f64, b: f64) -> Result<f64> {
        if !(a < x && x < b) {
            return Err(Error::InvalidArgument(format!("need a < x < b, got {a}, {x}, {b}")));
        }
        let sa = self.scale_value(a)?;
        let sb = self.scale_value(b)? - sa;
        let sx = self.scale_value(x)? - sa;
        let left = self.integrate_with_scale(a, x, |p, y, dy| dy * (sb - sx) / sb * self.m_prime_in(p, y));
        let right = self.integrate_with_scale(x, b, |p, y, dy| {
            let sy = sx + dy;
            sx * (sb - sy) / sb * self.m_prime_in(p, y)
        });
        Ok(left + right)
    }

    /// Mean time to reach `target` starting from `start`, with reflection at
    /// `start` (`start` and `target` adjacent ends of the interval).
    pub fn mean_exit_time_reflecting(&self, start: f64, target: f64) -> Result<f64> {
        self.check_domain(start)?;
        self.check_domain(target)?;
        if start < target {
            // ∫ (s(b) − s(y)) m′(y) dy over (a, b), a = start
            let sb = self.scale_value(target)? - self.scale_value(start)?;
            Ok(self.integrate_with_scale(start, target, |p, y, dy| (sb - dy) * self.m_prime_in(p, y)))
        } else if start > target {
            Ok(self.integrate_with_scale(target, start, |p, y, dy| dy * self.m_prime_in(p, y)))
        } else {
            Err(Error::InvalidArgument("start equals target".into()))
        }
    }

    /// Rows for the `tabulate-scale` table: `n` uniform points plus every interface.
    pub fn tabulate(&self, n: usize) -> Vec<ScaleRow> {
        let (lo, hi) = self.medium.window();
        let mut xs: Vec<f64> = (0..n.max(2)).map(|i| lo + (hi - lo) * i as f64 / (n.max(2) - 1) as f64).collect();
        xs.extend(self.medium.interface_positions());
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.into_iter()
            .map(|x| {
                let l = self.densities_at(x, Side::Left).expect("in window");
                let r = self.densities_at(x, Side::Right).expect("in window");
                ScaleRow {
                    x,
                    s_prime_left: l.s_prime,
                    s_prime_right: r.s_prime,
                    m_prime_left: l.m_prime,
                    m_prime_right: r.m_prime,
                    s: self.scale_value(x).expect("in window"),
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleRow {
    pub x: f64,
    pub s_prime_left: f64,
    pub s_prime_right: f64,
    pub m_prime_left: f64,
    pub m_prime_right: f64,
    pub s: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{Cubic, MediumSpec, Piece};

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-14 * (1.0 + b.abs()), "{a} vs {b}");
    }

    fn interface_medium() -> ScaleSpeed {
        ScaleSpeed::new(&Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 1.0), (1.0, 1.0)).unwrap())
    }

    fn linear_d() -> ScaleSpeed {
        let spec = MediumSpec {
            window: [0.0, 1.0],
            bounds: [0.5, 3.0],
            interfaces: vec![],
            pieces: vec![Piece { left: 0.0, right: 1.0, d: Cubic([1.0, 1.0, 0.0, 0.0]), eta: Cubic::constant(1.0) }],
        };
        ScaleSpeed::new(&Medium::new(spec).unwrap())
    }

    #[test]
    fn homogeneous_densities() {
        let ss = ScaleSpeed::new(&Medium::homogeneous((-1.0, 1.0), 2.0, 1.0).unwrap());
        let d = ss.densities_at(0.3, Side::Left).unwrap();
        assert_eq!((d.s_prime, d.m_prime, d.qv_rate), (1.0, 1.0, 2.0));
        assert_eq!(ss.scale_value(0.7).unwrap(), 0.7);
        assert_eq!(ss.inverse_scale_value(-0.4).unwrap(), -0.4);
        assert_eq!(ss.speed_density_in_scale(0.2, Side::Right).unwrap(), 1.0);
    }

    #[test]
    fn densities_at_interface() {
        let ss = interface_medium();
        let l = ss.densities_at(0.0, Side::Left).unwrap();
        let r = ss.densities_at(0.0, Side::Right).unwrap();
        close(l.s_prime, 2.0);
        close(l.m_prime, 1.0);
        close(l.qv_rate, 1.0);
        close(r.s_prime, 1.0);
        close(r.m_prime, 1.0);
        close(r.qv_rate, 2.0);
        close(ss.scale_value(-1.0).unwrap(), -2.0);
        close(ss.scale_value(1.0).unwrap(), 1.0);
        close(ss.inverse_scale_value(-2.0).unwrap(), -1.0);
        close(ss.speed_density_in_scale(-0.5, Side::Left).unwrap(), 0.5);
        close(ss.speed_density_in_scale(0.5, Side::Right).unwrap(), 1.0);
    }

    #[test]
    fn capacity_jump_shows_in_speed_density() {
        let spec = MediumSpec {
            window: [-1.0, 1.0],
            bounds: [0.5, 4.0],
            interfaces: vec![crate::media::Interface::with_lambda(0.0, 0.5)],
            pieces: vec![Piece::constant(-1.0, 0.0, 1.0, 1.0), Piece::constant(0.0, 1.0, 1.0, 3.0)],
        };
        let ss = ScaleSpeed::new(&Medium::new(spec).unwrap());
        let l = ss.densities_at(0.0, Side::Left).unwrap();
        let r = ss.densities_at(0.0, Side::Right).unwrap();
        close(r.m_prime / l.m_prime, 3.0);
    }

    #[test]
    fn linear_diffusivity_scale() {
        let ss = linear_d();
        let s1 = ss.scale_value(1.0).unwrap();
        assert!((s1 - 2.0 * std::f64::consts::LN_2).abs() < 1e-10);
        for x in [0.0, 0.1, 0.3, 0.77, 1.0] {
            let exact = 2.0 * (1.0f64 + x).ln();
            assert!((ss.scale_value(x).unwrap() - exact).abs() <= 1e-10 * (1.0 + x));
            let back = ss.inverse_scale_value(exact).unwrap();
            assert!((back - x).abs() <= 1e-10 * (1.0 + x), "{back} vs {x}");
        }
    }

    #[test]
    fn out_of_domain_and_image() {
        let ss = interface_medium();
        assert!(matches!(ss.scale_value(3.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(ss.densities_at(-4.0, Side::Left), Err(Error::OutOfDomain { .. })));
        assert!(matches!(ss.inverse_scale_value(10.0), Err(Error::OutOfImage { .. })));
        let (lo, hi) = ss.image();
        close(lo, -6.0);
        close(hi, 3.0);
    }

    #[test]
    fn mean_exit_time_closed_forms() {
        // D = η = 1: E τ(−h, h) = h²
        let bm = ScaleSpeed::new(&Medium::homogeneous((-1.0, 1.0), 1.0, 1.0).unwrap());
        let h = 0.1;
        assert!((bm.mean_exit_time(-h, 0.0, h).unwrap() - h * h).abs() < 1e-15);
        // general point: (x − a)(b − x)/q
        let t = bm.mean_exit_time(-0.4, 0.1, 0.6).unwrap();
        assert!((t - 0.5 * 0.5).abs() < 1e-14);
        // constant D, η: h² η / D
        let c = ScaleSpeed::new(&Medium::homogeneous((-1.0, 1.0), 2.0, 3.0).unwrap());
        assert!((c.mean_exit_time(-h, 0.0, h).unwrap() - h * h * 1.5).abs() < 1e-15);
        // reflected BM from 0 to h
        assert!((bm.mean_exit_time_reflecting(0.0, h).unwrap() - h * h).abs() < 1e-15);
        assert!((bm.mean_exit_time_reflecting(h, 0.0).unwrap() - h * h).abs() < 1e-15);
    }

    #[test]
    fn tabulate_includes_interfaces() {
        let rows = interface_medium().tabulate(5);
        let at0 = rows.iter().find(|r| r.x == 0.0).unwrap();
        close(at0.s_prime_left, 2.0);
        close(at0.s_prime_right, 1.0);
        assert_eq!(rows.first().unwrap().x, -3.0);
    }
}
