use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Indicator {
    pub label: String,
    pub value: f64,
}

/// Absolute out−in differences of estimators, plus signed entropy changes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub means: Vec<Indicator>,
    pub correlations: Vec<Indicator>,
    pub deltas: Vec<Indicator>,
    /// Central moments of order ≥ 3 (classical distributions only).
    pub moments: Vec<Indicator>,
    /// `S(ρ_out) − S(ρ_in)`.
    pub entropy_density: Option<f64>,
    /// `S(|J_out|/υ) − S(|J_in|/υ)`.
    pub entropy_current: Option<f64>,
    /// `S(w_out) − S(w_in)`.
    pub entropy_classical: Option<f64>,
}

impl ErrorReport {
    /// Every absolute-difference indicator.
    pub fn indicators(&self) -> impl Iterator<Item = &Indicator> {
        self.means.iter().chain(&self.correlations).chain(&self.deltas).chain(&self.moments)
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.indicators().find(|i| i.label == label).map(|i| i.value)
    }

    /// Every entropy change that was computed.
    pub fn entropies(&self) -> impl Iterator<Item = f64> + '_ {
        [self.entropy_density, self.entropy_current, self.entropy_classical].into_iter().flatten()
    }
}
