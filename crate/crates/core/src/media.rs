//! Physical medium: interface positions, piecewise-cubic coefficients `D`
//! and `η`, and per-interface transmission parameters.
//!
//! A [`MediumSpec`] is the raw, possibly invalid, description read from a
//! config document. [`Medium`] is the validated form with every `λ_j`
//! resolved and the `φ_j` sequence computed; everything downstream works
//! with a `Medium`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points per piece used when checking coefficient bounds.
pub const BOUND_SAMPLES: usize = 1024;

/// λ supplied together with β must agree with the β-derived value to this.
pub const LAMBDA_BETA_AGREEMENT: f64 = 1e-10;

/// Which one-sided limit to take at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cubic polynomial `c0 + c1 x + c2 x² + c3 x³` in the absolute coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cubic(pub [f64; 4]);

impl Cubic {
    pub const fn constant(c: f64) -> Self {
        Cubic([c, 0.0, 0.0, 0.0])
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let [c0, c1, c2, c3] = self.0;
        c0 + x * (c1 + x * (c2 + x * c3))
    }

    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        let [_, c1, c2, c3] = self.0;
        c1 + x * (2.0 * c2 + x * 3.0 * c3)
    }

    pub fn is_constant(&self) -> bool {
        self.0[1] == 0.0 && self.0[2] == 0.0 && self.0[3] == 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interface {
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_plus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_minus: Option<f64>,
}

impl Interface {
    pub fn with_lambda(x: f64, lambda: f64) -> Self {
        Interface { x, lambda: Some(lambda), beta_plus: None, beta_minus: None }
    }

    pub fn with_beta(x: f64, beta_minus: f64, beta_plus: f64) -> Self {
        Interface { x, lambda: None, beta_plus: Some(beta_plus), beta_minus: Some(beta_minus) }
    }

    fn beta(&self) -> Option<(f64, f64)> {
        Some((self.beta_minus?, self.beta_plus?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub left: f64,
    pub right: f64,
    #[serde(rename = "D")]
    pub d: Cubic,
    pub eta: Cubic,
}

impl Piece {
    pub fn constant(left: f64, right: f64, d: f64, eta: f64) -> Self {
        Piece { left, right, d: Cubic::constant(d), eta: Cubic::constant(eta) }
    }

    pub fn is_constant(&self) -> bool {
        self.d.is_constant() && self.eta.is_constant()
    }

    pub fn len(&self) -> f64 {
        self.right - self.left
    }
}

/// Raw medium description, as read from the config document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSpec {
    pub window: [f64; 2],
    pub bounds: [f64; 2],
    #[serde(default)]
    pub interfaces: Vec<Interface>,
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaRegime {
    Continuous,
    Discontinuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `y_min < y_max`, both finite.
    Window,
    /// `0 < k < K`.
    Bounds,
    /// Interface positions strictly increasing.
    Ordering,
    /// Interfaces strictly inside the window.
    InsideWindow,
    /// Piece list tiles the window with breakpoints at the interfaces.
    PieceLayout,
    /// `0 < λ < 1`.
    LambdaRange,
    /// `β± > 0`.
    BetaPositive,
    /// Neither λ nor a complete β pair given.
    MissingTransmission,
    /// λ and β both given but inconsistent.
    LambdaBetaMismatch,
    /// `k ≤ D ≤ K` on the sample grid.
    DiffusivityBounds,
    /// `k ≤ η ≤ K` on the sample grid.
    CapacityBounds,
    NonFinite,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::Window => "window must satisfy y_min < y_max",
            Rule::Bounds => "bounds must satisfy 0 < k < K",
            Rule::Ordering => "interface positions must be strictly increasing",
            Rule::InsideWindow => "interfaces must lie strictly inside the window",
            Rule::PieceLayout => "pieces must tile the window with breakpoints at the interfaces",
            Rule::LambdaRange => "transmission parameter lambda must lie in the open interval (0,1)",
            Rule::BetaPositive => "beta_plus and beta_minus must be strictly positive",
            Rule::MissingTransmission => "interface needs lambda or both beta_plus and beta_minus",
            Rule::LambdaBetaMismatch => "lambda disagrees with the value implied by beta",
            Rule::DiffusivityBounds => "D must satisfy k <= D <= K",
            Rule::CapacityBounds => "eta must satisfy k <= eta <= K",
            Rule::NonFinite => "all numbers must be finite",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub rule: Rule,
    pub location: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// `Σ (1 − λ_j)/λ_j` over interfaces whose λ could be resolved.
    pub lambda_decay_sum: f64,
    pub eta_regime: Option<EtaRegime>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for v in &self.violations {
            writeln!(f, "  [{}] {}: {}", v.location, v.rule.describe(), v.detail)?;
        }
        Ok(())
    }
}

/// `λ = D⁺β⁻ / (D⁺β⁻ + D⁻β⁺)`.
pub fn lambda_from_beta(d_minus: f64, d_plus: f64, beta_minus: f64, beta_plus: f64) -> f64 {
    d_plus * beta_minus / (d_plus * beta_minus + d_minus * beta_plus)
}

/// `β⁺/β⁻ = D⁺(1 − λ) / (D⁻ λ)`.
pub fn beta_ratio_from_lambda(d_minus: f64, d_plus: f64, lambda: f64) -> f64 {
    d_plus * (1.0 - lambda) / (d_minus * lambda)
}

impl MediumSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn window(&self) -> (f64, f64) {
        (self.window[0], self.window[1])
    }

    /// Index of the piece holding `x` for the given one-sided limit, assuming
    /// a valid layout. `None` outside the window.
    pub fn piece_index(&self, x: f64, side: Side) -> Option<usize> {
        let (lo, hi) = self.window();
        if !(lo..=hi).contains(&x) || self.pieces.is_empty() {
            return None;
        }
        // pieces[i] spans (interfaces[i-1].x, interfaces[i].x)
        let idx = match side {
            Side::Right => self.interfaces.partition_point(|itf| itf.x <= x),
            Side::Left => self.interfaces.partition_point(|itf| itf.x < x),
        };
        Some(idx.min(self.pieces.len() - 1))
    }

    /// One-sided limits `(D(x±), η(x±))`.
    pub fn coeff_at(&self, x: f64, side: Side) -> Result<(f64, f64)> {
        let (lo, hi) = self.window();
        let p = self.piece_index(x, side).ok_or(Error::OutOfDomain { x, lo, hi })?;
        let piece = &self.pieces[p];
        Ok((piece.d.eval(x), piece.eta.eval(x)))
    }

    fn one_sided_d(&self, j: usize) -> Option<(f64, f64)> {
        let x = self.interfaces.get(j)?.x;
        let l = self.pieces.get(j)?;
        let r = self.pieces.get(j + 1)?;
        Some((l.d.eval(x), r.d.eval(x)))
    }

    /// Fills every `λ_j` from `(β_j⁺, β_j⁻)` and the one-sided diffusivities.
    pub fn derive_lambdas(&self) -> Result<MediumSpec> {
        let mut out = self.clone();
        for (j, itf) in out.interfaces.iter_mut().enumerate() {
            let (bm, bp) = itf.beta().ok_or_else(|| {
                Error::Config(format!("interface {j} at x={} has no beta_plus/beta_minus", itf.x))
            })?;
            let (dm, dp) = self.one_sided_d(j).ok_or_else(|| {
                Error::Config(format!("interface {j}: pieces do not bracket x={}", itf.x))
            })?;
            itf.lambda = Some(lambda_from_beta(dm, dp, bm, bp));
        }
        Ok(out)
    }

    /// Checks every structural and bound invariant; violations are data.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let mut push = |rule: Rule, location: String, detail: String| {
            v.push(Violation { rule, location, detail });
        };

        let (lo, hi) = self.window();
        let (k, big_k) = (self.bounds[0], self.bounds[1]);
        if !(lo.is_finite() && hi.is_finite()) {
            push(Rule::NonFinite, "window".into(), format!("[{lo}, {hi}]"));
        } else if lo >= hi {
            push(Rule::Window, "window".into(), format!("[{lo}, {hi}]"));
        }
        if !(k.is_finite() && big_k.is_finite()) {
            push(Rule::NonFinite, "bounds".into(), format!("[{k}, {big_k}]"));
        } else if !(0.0 < k && k < big_k) {
            push(Rule::Bounds, "bounds".into(), format!("k={k}, K={big_k}"));
        }

        for (j, itf) in self.interfaces.iter().enumerate() {
            let loc = format!("interfaces[{j}]");
            let nums = [Some(itf.x), itf.lambda, itf.beta_plus, itf.beta_minus];
            if nums.iter().flatten().any(|n| !n.is_finite()) {
                push(Rule::NonFinite, loc.clone(), format!("x={}", itf.x));
                continue;
            }
            if j > 0 && self.interfaces[j - 1].x >= itf.x {
                push(
                    Rule::Ordering,
                    loc.clone(),
                    format!("x={} follows x={}", itf.x, self.interfaces[j - 1].x),
                );
            }
            if !(lo < itf.x && itf.x < hi) {
                push(Rule::InsideWindow, loc.clone(), format!("x={} not in ({lo}, {hi})", itf.x));
            }
            if let Some(l) = itf.lambda {
                if !(0.0 < l && l < 1.0) {
                    push(Rule::LambdaRange, loc.clone(), format!("lambda={l}"));
                }
            }
            for (name, b) in [("beta_plus", itf.beta_plus), ("beta_minus", itf.beta_minus)] {
                if let Some(b) = b {
                    if b <= 0.0 {
                        push(Rule::BetaPositive, loc.clone(), format!("{name}={b}"));
                    }
                }
            }
            if itf.lambda.is_none() && itf.beta().is_none() {
                push(Rule::MissingTransmission, loc.clone(), format!("x={}", itf.x));
            }
        }

        let layout_ok = self.check_layout(&mut push);

        let mut decay = 0.0;
        let mut regime = None;
        if layout_ok {
            let mut discontinuous = false;
            for (j, itf) in self.interfaces.iter().enumerate() {
                let loc = format!("interfaces[{j}]");
                let (dm, dp) = self.one_sided_d(j).expect("layout checked");
                let from_beta = itf
                    .beta()
                    .filter(|(bm, bp)| *bm > 0.0 && *bp > 0.0)
                    .map(|(bm, bp)| lambda_from_beta(dm, dp, bm, bp));
                if let (Some(l), Some(lb)) = (itf.lambda, from_beta) {
                    if (l - lb).abs() > LAMBDA_BETA_AGREEMENT {
                        push(
                            Rule::LambdaBetaMismatch,
                            loc.clone(),
                            format!("lambda={l}, beta implies {lb}"),
                        );
                    }
                }
                if let Some(l) = itf.lambda.or(from_beta) {
                    if 0.0 < l && l < 1.0 {
                        decay += (1.0 - l) / l;
                    }
                }
                let em = self.pieces[j].eta.eval(itf.x);
                let ep = self.pieces[j + 1].eta.eval(itf.x);
                if (ep - em).abs() > 1e-12 * em.abs().max(ep.abs()) {
                    discontinuous = true;
                }
            }
            regime = Some(if discontinuous { EtaRegime::Discontinuous } else { EtaRegime::Continuous });

            if 0.0 < k && k < big_k {
                for (i, piece) in self.pieces.iter().enumerate() {
                    let loc = format!("pieces[{i}]");
                    if let Some((x, d)) = first_out_of_bounds(&piece.d, piece, k, big_k) {
                        push(Rule::DiffusivityBounds, loc.clone(), format!("D({x})={d}"));
                    }
                    if let Some((x, e)) = first_out_of_bounds(&piece.eta, piece, k, big_k) {
                        push(Rule::CapacityBounds, loc, format!("eta({x})={e}"));
                    }
                }
            }
        }

        ValidationReport { violations: v, lambda_decay_sum: decay, eta_regime: regime }
    }

    fn check_layout(&self, push: &mut impl FnMut(Rule, String, String)) -> bool {
        let (lo, hi) = self.window();
        let before = self.pieces.len();
        if self.pieces.len() != self.interfaces.len() + 1 {
            push(
                Rule::PieceLayout,
                "pieces".into(),
                format!("{} pieces for {} interfaces", self.pieces.len(), self.interfaces.len()),
            );
            return false;
        }
        let mut ok = before > 0;
        for (i, p) in self.pieces.iter().enumerate() {
            let loc = format!("pieces[{i}]");
            let coeffs = p.d.0.iter().chain(p.eta.0.iter());
            if !p.left.is_finite() || !p.right.is_finite() || coeffs.clone().any(|c| !c.is_finite()) {
                push(Rule::NonFinite, loc, String::new());
                ok = false;
                continue;
            }
            if p.left >= p.right {
                push(Rule::PieceLayout, loc.clone(), format!("left={} >= right={}", p.left, p.right));
                ok = false;
            }
            let want_left = if i == 0 { lo } else { self.interfaces[i - 1].x };
            let want_right = if i + 1 == self.pieces.len() { hi } else { self.interfaces[i].x };
            if p.left != want_left || p.right != want_right {
                push(
                    Rule::PieceLayout,
                    loc,
                    format!(
                        "spans ({}, {}), expected ({want_left}, {want_right})",
                        p.left, p.right
                    ),
                );
                ok = false;
            }
        }
        ok
    }
}

fn first_out_of_bounds(c: &Cubic, piece: &Piece, k: f64, big_k: f64) -> Option<(f64, f64)> {
    let n = BOUND_SAMPLES;
    (0..n).find_map(|i| {
        let x = piece.left + (piece.right - piece.left) * i as f64 / (n - 1) as f64;
        let v = c.eval(x);
        (!(k..=big_k).contains(&v)).then_some((x, v))
    })
}

/// `φ_j` per piece, normalised to 1 on the piece just right of the anchor
/// interface (the interface closest to the origin).
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSequence {
    values: Vec<f64>,
    anchor: usize,
}

impl PhiSequence {
    /// `φ` on the piece at list position `p` (0 = leftmost piece).
    pub fn at_position(&self, p: usize) -> f64 {
        self.values[p]
    }

    /// `φ_j` using the labelling where the piece right of the anchor is `j = 0`.
    pub fn get(&self, j: i64) -> Option<f64> {
        let p = self.anchor as i64 + j;
        usize::try_from(p).ok().and_then(|p| self.values.get(p).copied())
    }

    /// List position of the piece labelled `j = 0`.
    pub fn anchor_position(&self) -> usize {
        self.anchor
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Builds `φ` from resolved `λ_j` and one-sided `D` values; fails if any λ is missing.
pub fn phi_sequence(spec: &MediumSpec) -> Result<PhiSequence> {
    let n = spec.interfaces.len();
    if n == 0 {
        return Ok(PhiSequence { values: vec![1.0], anchor: 0 });
    }
    let mut ratios = Vec::with_capacity(n);
    for (j, itf) in spec.interfaces.iter().enumerate() {
        let lambda = itf
            .lambda
            .ok_or_else(|| Error::Config(format!("interface {j} has no resolved lambda")))?;
        let (dm, dp) = spec
            .one_sided_d(j)
            .ok_or_else(|| Error::Config(format!("interface {j}: pieces do not bracket it")))?;
        ratios.push(beta_ratio_from_lambda(dm, dp, lambda));
    }
    let anchor_itf = spec
        .interfaces
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.x.abs().total_cmp(&b.1.x.abs()))
        .map(|(j, _)| j)
        .expect("non-empty");
    let anchor = anchor_itf + 1;
    let mut values = vec![0.0; n + 1];
    values[anchor] = 1.0;
    for p in anchor + 1..=n {
        values[p] = values[p - 1] * ratios[p - 1];
    }
    for p in (0..anchor).rev() {
        values[p] = values[p + 1] / ratios[p];
    }
    Ok(PhiSequence { values, anchor })
}

/// Validated medium with resolved transmission parameters.
#[derive(Clone, Debug)]
pub struct Medium {
    spec: MediumSpec,
    lambdas: Vec<f64>,
    phi: PhiSequence,
    regime: EtaRegime,
    lambda_decay_sum: f64,
}

impl Medium {
    pub fn new(spec: MediumSpec) -> Result<Self> {
        let report = spec.validate();
        if !report.is_empty() {
            return Err(Error::Invalid(report));
        }
        let mut resolved = spec;
        for j in 0..resolved.interfaces.len() {
            if resolved.interfaces[j].lambda.is_none() {
                let (dm, dp) = resolved.one_sided_d(j).expect("validated layout");
                let (bm, bp) = resolved.interfaces[j].beta().expect("validated transmission");
                resolved.interfaces[j].lambda = Some(lambda_from_beta(dm, dp, bm, bp));
            }
        }
        let lambdas = resolved.interfaces.iter().map(|i| i.lambda.expect("resolved")).collect();
        let phi = phi_sequence(&resolved)?;
        Ok(Medium {
            spec: resolved,
            lambdas,
            phi,
            regime: report.eta_regime.expect("layout valid"),
            lambda_decay_sum: report.lambda_decay_sum,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Medium::new(MediumSpec::from_json_str(text)?)
    }

    /// Single interface at 0 with piecewise-constant coefficients and
    /// cross-sections `A∓` (so `β∓ = 1/A∓`).
    pub fn single_interface(
        window: (f64, f64),
        (d_minus, d_plus): (f64, f64),
        (eta_minus, eta_plus): (f64, f64),
        (a_minus, a_plus): (f64, f64),
    ) -> Result<Self> {
        let all = [d_minus, d_plus, eta_minus, eta_plus];
        let k = all.iter().copied().fold(f64::INFINITY, f64::min) * 0.5;
        let big_k = all.iter().copied().fold(0.0, f64::max) * 2.0;
        Medium::new(MediumSpec {
            window: [window.0, window.1],
            bounds: [k, big_k],
            interfaces: vec![Interface::with_beta(0.0, 1.0 / a_minus, 1.0 / a_plus)],
            pieces: vec![
                Piece::constant(window.0, 0.0, d_minus, eta_minus),
                Piece::constant(0.0, window.1, d_plus, eta_plus),
            ],
        })
    }

    /// Constant `D`, `η` and no interfaces.
    pub fn homogeneous(window: (f64, f64), d: f64, eta: f64) -> Result<Self> {
        let k = d.min(eta) * 0.5;
        let big_k = d.max(eta) * 2.0;
        Medium::new(MediumSpec {
            window: [window.0, window.1],
            bounds: [k, big_k],
            interfaces: vec![],
            pieces: vec![Piece::constant(window.0, window.1, d, eta)],
        })
    }

    pub fn spec(&self) -> &MediumSpec {
        &self.spec
    }

    pub fn window(&self) -> (f64, f64) {
        self.spec.window()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.spec.pieces
    }

    pub fn interfaces(&self) -> &[Interface] {
        &self.spec.interfaces
    }

    pub fn interface_positions(&self) -> Vec<f64> {
        self.spec.interfaces.iter().map(|i| i.x).collect()
    }

    pub fn lambda(&self, j: usize) -> f64 {
        self.lambdas[j]
    }

    pub fn phi(&self) -> &PhiSequence {
        &self.phi
    }

    pub fn eta_regime(&self) -> EtaRegime {
        self.regime
    }

    pub fn lambda_decay_sum(&self) -> f64 {
        self.lambda_decay_sum
    }

    pub fn piece_index(&self, x: f64, side: Side) -> Result<usize> {
        let (lo, hi) = self.window();
        self.spec.piece_index(x, side).ok_or(Error::OutOfDomain { x, lo, hi })
    }

    pub fn coeff_at(&self, x: f64, side: Side) -> Result<(f64, f64)> {
        self.spec.coeff_at(x, side)
    }

    /// `(D(x_j⁻), D(x_j⁺), η(x_j⁻), η(x_j⁺))` at interface `j`.
    pub fn one_sided(&self, j: usize) -> (f64, f64, f64, f64) {
        let x = self.spec.interfaces[j].x;
        let l = &self.spec.pieces[j];
        let r = &self.spec.pieces[j + 1];
        (l.d.eval(x), r.d.eval(x), l.eta.eval(x), r.eta.eval(x))
    }

    /// `β_j⁺/β_j⁻ = φ_j/φ_{j−1}`.
    pub fn beta_ratio(&self, j: usize) -> f64 {
        let (dm, dp, _, _) = self.one_sided(j);
        beta_ratio_from_lambda(dm, dp, self.lambdas[j])
    }

    /// Index of the interface located exactly at `x`, if any.
    pub fn interface_at(&self, x: f64) -> Option<usize> {
        self.spec.interfaces.iter().position(|i| i.x == x)
    }
}
