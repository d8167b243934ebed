//! Numerical certification of stochastic orders between two lifetime laws and
//! TP2/RR2 certification of bivariate kernels.
//!
//! All checks are grid-based: "certified-on-grid" is the strongest claim
//! made, tolerances are relative to local magnitude, and every verdict
//! carries the worst grid pair and margin as a witness. Ratio checks exclude
//! nodes whose denominator underflows 1e-300; the usable window shrinks
//! accordingly and is reported.

use thiserror::Error;

use crate::quadrature::gauss_legendre_on;

/// Denominators below this are excluded from ratio windows.
pub const RATIO_FLOOR: f64 = 1e-300;
/// Lower clamp applied to `x_lo = 0` for ratio-based checks.
pub const RATIO_X_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrderError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("evaluator returned a non-finite value at {x}: {value}")]
    EvaluatorFailure { x: f64, value: f64 },
    #[error("kernel is negative at ({x}, {y}): {value}")]
    NegativeValue { x: f64, y: f64, value: f64 },
    #[error("weight function is negative at {theta}: {value}")]
    NegativeWeight { theta: f64, value: f64 },
}

/// Discretization window for monotonicity claims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_points: usize,
    /// Relative monotonicity slack.
    pub tol: f64,
}

impl GridSpec {
    pub fn new(x_lo: f64, x_hi: f64, n_points: usize, tol: f64) -> Result<Self, OrderError> {
        if x_lo < 0.0 || x_lo.is_nan() || x_hi <= x_lo || x_hi.is_nan() {
            return Err(OrderError::InvalidGrid(format!("window [{x_lo}, {x_hi}]")));
        }
        if n_points < 16 {
            return Err(OrderError::InvalidGrid(format!("{n_points} points (need ≥ 16)")));
        }
        if tol <= 0.0 || tol.is_nan() {
            return Err(OrderError::InvalidGrid(format!("tolerance {tol}")));
        }
        Ok(Self { x_lo, x_hi, n_points, tol })
    }

    /// Equally spaced nodes over the window.
    pub fn nodes(&self) -> Vec<f64> {
        crate::points::linspace(self.x_lo, self.x_hi, self.n_points)
    }

    /// Nodes for ratio checks: a zero left endpoint is clamped up so cdf and
    /// density ratios are not evaluated at the degenerate origin.
    pub fn ratio_nodes(&self) -> Vec<f64> {
        let lo = if self.x_lo == 0.0 { RATIO_X_EPS } else { self.x_lo };
        crate::points::linspace(lo, self.x_hi, self.n_points)
    }

    /// The same window with twice the resolution.
    pub fn refined(&self) -> GridSpec {
        GridSpec { n_points: self.n_points * 2, ..*self }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { x_lo: 0.0, x_hi: 3.0, n_points: 200, tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderRelation {
    St,
    Hr,
    Rhr,
    Lr,
}

impl std::fmt::Display for OrderRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrderRelation::St => write!(f, "st"),
            OrderRelation::Hr => write!(f, "hr"),
            OrderRelation::Rhr => write!(f, "rhr"),
            OrderRelation::Lr => write!(f, "lr"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    CertifiedOnGrid,
    Violated,
    Inconclusive,
}

impl std::fmt::Display for Certification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certification::CertifiedOnGrid => write!(f, "certified"),
            Certification::Violated => write!(f, "violated"),
            Certification::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Worst grid pair and its margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairWitness {
    pub x_left: f64,
    pub x_right: f64,
    pub margin: f64,
}

/// Outcome of an order check.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderVerdict {
    pub order: OrderRelation,
    pub holds: Certification,
    /// Smallest relative margin over the grid (≥ -tol when certified).
    pub worst_margin: f64,
    pub witness: Option<PairWitness>,
    /// Window actually used after denominator-based shrinking.
    pub window: (f64, f64),
    pub nodes_used: usize,
}

impl OrderVerdict {
    fn inconclusive(order: OrderRelation) -> Self {
        OrderVerdict {
            order,
            holds: Certification::Inconclusive,
            worst_margin: f64::NAN,
            witness: None,
            window: (f64::NAN, f64::NAN),
            nodes_used: 0,
        }
    }
}

/// Usual stochastic order `X ≤_st Y`: `F̄_X(t) ≤ F̄_Y(t)` on the grid.
pub fn check_st(
    surv_x: impl Fn(f64) -> f64,
    surv_y: impl Fn(f64) -> f64,
    grid: &GridSpec,
) -> OrderVerdict {
    let nodes = grid.nodes();
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for &x in &nodes {
        let fx = surv_x(x);
        let fy = surv_y(x);
        if !fx.is_finite() || !fy.is_finite() {
            return OrderVerdict::inconclusive(OrderRelation::St);
        }
        let margin = (fy - fx) / fx.abs().max(fy.abs()).max(1e-12);
        if margin < worst {
            worst = margin;
            witness = Some(PairWitness { x_left: x, x_right: x, margin });
        }
    }
    let holds = if worst >= -grid.tol {
        Certification::CertifiedOnGrid
    } else {
        Certification::Violated
    };
    OrderVerdict {
        order: OrderRelation::St,
        holds,
        worst_margin: worst,
        witness,
        window: (grid.x_lo, grid.x_hi),
        nodes_used: nodes.len(),
    }
}

/// Certifies that `num(t)/den(t)` is nondecreasing across consecutive grid
/// nodes, skipping nodes where the denominator underflows.
fn check_ratio_increasing(
    order: OrderRelation,
    num: impl Fn(f64) -> f64,
    den: impl Fn(f64) -> f64,
    nodes: &[f64],
    tol: f64,
) -> OrderVerdict {
    let mut ratios = Vec::with_capacity(nodes.len());
    for &x in nodes {
        let d = den(x);
        let n = num(x);
        if !d.is_finite() || !n.is_finite() {
            return OrderVerdict::inconclusive(order);
        }
        if d.abs() >= RATIO_FLOOR {
            ratios.push((x, n / d));
        }
    }
    if ratios.len() < 2 {
        return OrderVerdict::inconclusive(order);
    }
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for pair in ratios.windows(2) {
        let (x0, r0) = pair[0];
        let (x1, r1) = pair[1];
        let margin = (r1 - r0) / r0.abs().max(r1.abs()).max(1e-12);
        if margin < worst {
            worst = margin;
            witness = Some(PairWitness { x_left: x0, x_right: x1, margin });
        }
    }
    let holds = if worst >= -tol { Certification::CertifiedOnGrid } else { Certification::Violated };
    OrderVerdict {
        order,
        holds,
        worst_margin: worst,
        witness,
        window: (ratios[0].0, ratios[ratios.len() - 1].0),
        nodes_used: ratios.len(),
    }
}

/// Hazard rate order `X ≤_hr Y`: `F̄_Y/F̄_X` nondecreasing on the grid.
pub fn check_hr(
    surv_x: impl Fn(f64) -> f64,
    surv_y: impl Fn(f64) -> f64,
    grid: &GridSpec,
) -> OrderVerdict {
    check_ratio_increasing(OrderRelation::Hr, surv_y, surv_x, &grid.ratio_nodes(), grid.tol)
}

/// Reversed hazard rate order `X ≤_rhr Y`: `F_Y/F_X` nondecreasing.
pub fn check_rhr(
    cdf_x: impl Fn(f64) -> f64,
    cdf_y: impl Fn(f64) -> f64,
    grid: &GridSpec,
) -> OrderVerdict {
    check_ratio_increasing(OrderRelation::Rhr, cdf_y, cdf_x, &grid.ratio_nodes(), grid.tol)
}

/// Likelihood ratio order `X ≤_lr Y`: `f_Y/f_X` nondecreasing.
pub fn check_lr(
    dens_x: impl Fn(f64) -> f64,
    dens_y: impl Fn(f64) -> f64,
    grid: &GridSpec,
) -> OrderVerdict {
    check_ratio_increasing(OrderRelation::Lr, dens_y, dens_x, &grid.ratio_nodes(), grid.tol)
}

/// TP2/RR2 verdict for a bivariate kernel on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tp2Verdict {
    Tp2,
    Rr2,
    /// All adjacent determinants vanish within tolerance.
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tp2Report {
    pub verdict: Tp2Verdict,
    /// Most negative relative determinant (binds the TP2 claim).
    pub min_margin: f64,
    /// Most positive relative determinant (binds the RR2 claim).
    pub max_margin: f64,
    /// Rectangle achieving the extreme margin: (x1, x2, y1, y2).
    pub witness: Option<(f64, f64, f64, f64)>,
}

/// Checks the sign of `κ(x1,y1)κ(x2,y2) - κ(x1,y2)κ(x2,y1)` on all adjacent
/// grid rectangles. Adjacent-cell certification composes to arbitrary
/// rectangles for positive kernels.
pub fn tp2_check(
    kernel: impl Fn(f64, f64) -> f64,
    xs: &[f64],
    ys: &[f64],
    tol: f64,
) -> Result<Tp2Report, OrderError> {
    if xs.len() < 2 || ys.len() < 2 {
        return Err(OrderError::InvalidGrid("need at least a 2×2 grid".into()));
    }
    let mut values = vec![vec![0.0; ys.len()]; xs.len()];
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let v = kernel(x, y);
            if !v.is_finite() {
                return Err(OrderError::EvaluatorFailure { x, value: v });
            }
            if v < 0.0 {
                return Err(OrderError::NegativeValue { x, y, value: v });
            }
            values[i][j] = v;
        }
    }
    let mut min_margin = f64::INFINITY;
    let mut max_margin = f64::NEG_INFINITY;
    let mut witness = None;
    for i in 0..xs.len() - 1 {
        for j in 0..ys.len() - 1 {
            let a = values[i][j];
            let b = values[i + 1][j + 1];
            let c = values[i][j + 1];
            let d = values[i + 1][j];
            let det = a * b - c * d;
            let scale = (a * b).abs().max((c * d).abs()).max(1e-300);
            let margin = det / scale;
            if margin < min_margin {
                min_margin = margin;
                if margin < -tol {
                    witness = Some((xs[i], xs[i + 1], ys[j], ys[j + 1]));
                }
            }
            if margin > max_margin {
                max_margin = margin;
                if margin > tol && witness.is_none() {
                    witness = Some((xs[i], xs[i + 1], ys[j], ys[j + 1]));
                }
            }
        }
    }
    let tp2_ok = min_margin >= -tol;
    let rr2_ok = max_margin <= tol;
    let verdict = match (tp2_ok, rr2_ok) {
        (true, true) => Tp2Verdict::Both,
        (true, false) => Tp2Verdict::Tp2,
        (false, true) => Tp2Verdict::Rr2,
        (false, false) => Tp2Verdict::Neither,
    };
    Ok(Tp2Report { verdict, min_margin, max_margin, witness })
}

/// The four condition rows of the TP2/RR2 preservation rule for integral
/// transforms `s_i(x) = ∫ φ_i(x, θ) w(θ) dθ`: each row combines a direction
/// for `φ₂/φ₁` in x, a direction in θ, and a two-by-two positivity class for
/// one of the kernels, and concludes that `s(x, i)` is TP2 (rows 1–2) or RR2
/// (rows 3–4) in `(x, i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformRow {
    /// ratio increasing in x, increasing in θ, a kernel TP2 ⇒ TP2.
    Row1,
    /// ratio increasing in x, decreasing in θ, a kernel RR2 ⇒ TP2.
    Row2,
    /// ratio decreasing in x, decreasing in θ, a kernel TP2 ⇒ RR2.
    Row3,
    /// ratio decreasing in x, increasing in θ, a kernel RR2 ⇒ RR2.
    Row4,
}

impl TransformRow {
    fn ratio_increasing_in_x(self) -> bool {
        matches!(self, TransformRow::Row1 | TransformRow::Row2)
    }
    fn ratio_increasing_in_theta(self) -> bool {
        matches!(self, TransformRow::Row1 | TransformRow::Row4)
    }
    fn kernel_class(self) -> Tp2Verdict {
        match self {
            TransformRow::Row1 | TransformRow::Row3 => Tp2Verdict::Tp2,
            TransformRow::Row2 | TransformRow::Row4 => Tp2Verdict::Rr2,
        }
    }
    fn conclusion_is_tp2(self) -> bool {
        matches!(self, TransformRow::Row1 | TransformRow::Row2)
    }
}

/// Report of an integral-transform preservation check: the three premises and
/// the conclusion are certified independently.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformCheckReport {
    pub row: TransformRow,
    pub ratio_monotone_in_x: Certification,
    pub ratio_monotone_in_theta: Certification,
    /// Whether φ₁ or φ₂ has the row's positivity class on the grid.
    pub kernel_positivity: Certification,
    pub conclusion: Certification,
    pub conclusion_margin: f64,
}

impl TransformCheckReport {
    pub fn premises_certified(&self) -> bool {
        self.ratio_monotone_in_x == Certification::CertifiedOnGrid
            && self.ratio_monotone_in_theta == Certification::CertifiedOnGrid
            && self.kernel_positivity == Certification::CertifiedOnGrid
    }
}

/// Verifies one row of the preservation rule: premises on the (x, θ) grid,
/// conclusion by quadrature of both kernels against the weight followed by
/// a two-by-two determinant sign check on `s(x, i)`.
#[allow(clippy::too_many_arguments)]
pub fn integral_transform_check(
    phi1: impl Fn(f64, f64) -> f64,
    phi2: impl Fn(f64, f64) -> f64,
    weight: impl Fn(f64) -> f64,
    xs: &[f64],
    theta_window: (f64, f64),
    quad_nodes: usize,
    row: TransformRow,
    tol: f64,
) -> Result<TransformCheckReport, OrderError> {
    if xs.len() < 2 {
        return Err(OrderError::InvalidGrid("need at least two x nodes".into()));
    }
    let theta_grid = crate::points::linspace(theta_window.0, theta_window.1, 24);

    // premise: ratio direction in x for every θ on the grid
    let mut ratio_x = Certification::CertifiedOnGrid;
    for &theta in &theta_grid {
        let verdict = check_ratio_increasing(
            OrderRelation::Lr,
            |x| if row.ratio_increasing_in_x() { phi2(x, theta) } else { phi1(x, theta) },
            |x| if row.ratio_increasing_in_x() { phi1(x, theta) } else { phi2(x, theta) },
            xs,
            tol,
        );
        if verdict.holds != Certification::CertifiedOnGrid {
            ratio_x = verdict.holds;
            break;
        }
    }

    // premise: ratio direction in θ for every x
    let mut ratio_theta = Certification::CertifiedOnGrid;
    for &x in xs {
        let verdict = check_ratio_increasing(
            OrderRelation::Lr,
            |theta| if row.ratio_increasing_in_theta() { phi2(x, theta) } else { phi1(x, theta) },
            |theta| if row.ratio_increasing_in_theta() { phi1(x, theta) } else { phi2(x, theta) },
            &theta_grid,
            tol,
        );
        if verdict.holds != Certification::CertifiedOnGrid {
            ratio_theta = verdict.holds;
            break;
        }
    }

    // premise: one of the kernels is TP2 (resp. RR2) on the grid
    let want = row.kernel_class();
    let mut kernel_positivity = Certification::Violated;
    for report in [
        tp2_check(&phi1, xs, &theta_grid, tol)?,
        tp2_check(&phi2, xs, &theta_grid, tol)?,
    ] {
        if report.verdict == want || report.verdict == Tp2Verdict::Both {
            kernel_positivity = Certification::CertifiedOnGrid;
            break;
        }
    }

    // conclusion: s₂/s₁ monotone in x with the row's direction
    let rule = gauss_legendre_on(quad_nodes, theta_window.0, theta_window.1);
    for &(theta, _) in &rule {
        let w = weight(theta);
        if w < 0.0 {
            return Err(OrderError::NegativeWeight { theta, value: w });
        }
    }
    let s = |phi: &dyn Fn(f64, f64) -> f64, x: f64| -> f64 {
        rule.iter().map(|&(theta, w)| w * weight(theta) * phi(x, theta)).sum()
    };
    let s1: Vec<f64> = xs.iter().map(|&x| s(&phi1, x)).collect();
    let s2: Vec<f64> = xs.iter().map(|&x| s(&phi2, x)).collect();
    let mut worst = f64::INFINITY;
    for i in 0..xs.len() - 1 {
        // TP2 of s(x,i) in (x, i∈{1,2}): s1(x)·s2(x') - s2(x)·s1(x') ≥ 0 for x < x'
        let det = s1[i] * s2[i + 1] - s2[i] * s1[i + 1];
        let scale = (s1[i] * s2[i + 1]).abs().max((s2[i] * s1[i + 1]).abs()).max(1e-300);
        let margin = if row.conclusion_is_tp2() { det / scale } else { -det / scale };
        worst = worst.min(margin);
    }
    let conclusion =
        if worst >= -tol { Certification::CertifiedOnGrid } else { Certification::Violated };

    Ok(TransformCheckReport {
        row,
        ratio_monotone_in_x: ratio_x,
        ratio_monotone_in_theta: ratio_theta,
        kernel_positivity,
        conclusion,
        conclusion_margin: worst,
    })
}
