/// Loss `ℓ_t(y) = ℓ(y − b_t)` of a prediction `y` against feedback `b_t`.
#[derive(Clone, Copy, Debug)]
pub enum LossKind {
    Absolute,
    Squared,
    /// A convex function and its derivative on `[−1, 1]`.
    Custom { value: fn(f64) -> f64, derivative: fn(f64) -> f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct LipschitzLoss {
    pub kind: LossKind,
    /// Bound on `|ℓ′|` over `[−1, 1]`.
    pub lipschitz: f64,
}

impl LipschitzLoss {
    pub fn absolute() -> Self {
        Self { kind: LossKind::Absolute, lipschitz: 1.0 }
    }

    pub fn squared() -> Self {
        Self { kind: LossKind::Squared, lipschitz: 2.0 }
    }

    pub fn custom(value: fn(f64) -> f64, derivative: fn(f64) -> f64, lipschitz: f64) -> Self {
        Self { kind: LossKind::Custom { value, derivative }, lipschitz }
    }

    pub fn value(&self, y: f64, b: f64) -> f64 {
        let u = y - b;
        match self.kind {
            LossKind::Absolute => u.abs(),
            LossKind::Squared => u * u,
            LossKind::Custom { value, .. } => value(u),
        }
    }

    /// Subgradient at `y`; the absolute loss uses `sign(0) = 0`.
    pub fn derivative(&self, y: f64, b: f64) -> f64 {
        let u = y - b;
        match self.kind {
            LossKind::Absolute => {
                if u > 0.0 {
                    1.0
                } else if u < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            LossKind::Squared => 2.0 * u,
            LossKind::Custom { derivative, .. } => derivative(u),
        }
    }
}
