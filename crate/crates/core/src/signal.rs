//! Converts the scalar class-probability feedback stream into discretized
//! trend/intensity states and composes the textual guidance signal.
//!
//! The numeric path is deliberately tiny: an exponential moving average of
//! past scores, a trend deviation against it, and a margin-based intensity.
//! Both quantities are discretized and mapped through lookup tables of short
//! text fragments; the concatenated fragments are what the agents see.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Default fragments for the trend/intensity lookup tables, shipped as data.
pub const DEFAULT_SIGNAL_TABLES: &str = include_str!("../assets/signal_tables.txt");

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("score {0} outside [0, 1]")]
    ScoreOutOfRange(f64),
    #[error("trend requested before any score was observed")]
    EmaUninitialized,
    #[error("invalid signal config: {0}")]
    InvalidConfig(String),
    #[error("signal table missing entry for key '{0}'")]
    MissingTableEntry(String),
    #[error("signal table line {0} is not 'key = value'")]
    MalformedTableLine(usize),
}

/// A class probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Score(f64);

impl Score {
    pub fn new(value: f64) -> Result<Self, SignalError> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Score(value))
        } else {
            Err(SignalError::ScoreOutOfRange(value))
        }
    }

    /// Clamp into `[0, 1]`; used when ingesting leniently normalized
    /// provider responses.
    pub fn clamped(value: f64) -> Self {
        Score(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Exponential moving average over observed scores.
///
/// The first observation initializes the average directly; afterwards the
/// usual recurrence `smoothed = alpha * score + (1 - alpha) * smoothed`
/// applies. The state is a value, passed and returned; nothing is shared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmaState {
    pub smoothed: f64,
    pub alpha: f64,
    pub initialized: bool,
}

impl EmaState {
    pub fn new(alpha: f64) -> Result<Self, SignalError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(SignalError::InvalidConfig(format!(
                "alpha must be in (0, 1], got {alpha}"
            )));
        }
        Ok(EmaState {
            smoothed: 0.0,
            alpha,
            initialized: false,
        })
    }
}

/// Deviation of the current score from the moving average, in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TrendValue(pub f64);

/// Margin below the high-confidence threshold, in `[0, tau_high]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntensityValue(pub f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrendState {
    Up,
    Down,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntensityState {
    Strong,
    Moderate,
    Micro,
}

/// Tuning knobs for the signal path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalConfig {
    /// Trend tolerance: deviations with `|t| <= epsilon` are flat.
    pub epsilon: f64,
    /// High-confidence threshold for the intensity margin.
    pub tau_high: f64,
    /// EMA smoothing coefficient.
    pub alpha: f64,
    /// Ablation toggle: when false, every intensity classifies as moderate.
    pub intensity_enabled: bool,
}

impl SignalConfig {
    pub fn validate(&self) -> Result<(), SignalError> {
        if !(self.epsilon > 0.0) {
            return Err(SignalError::InvalidConfig(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        if !(self.tau_high > 0.0 && self.tau_high <= 1.0) {
            return Err(SignalError::InvalidConfig(format!(
                "tau_high must be in (0, 1], got {}",
                self.tau_high
            )));
        }
        if self.epsilon >= self.tau_high {
            return Err(SignalError::InvalidConfig(format!(
                "epsilon ({}) must be < tau_high ({})",
                self.epsilon, self.tau_high
            )));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(SignalError::InvalidConfig(format!(
                "alpha must be in (0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

impl Default for SignalConfig {
    fn default() -> Self {
        SignalConfig {
            epsilon: 1e-4,
            tau_high: 1e-2,
            alpha: 0.3,
            intensity_enabled: true,
        }
    }
}

/// Lookup tables mapping each discrete state to a short text fragment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalTables {
    pub trend_up: String,
    pub trend_down: String,
    pub trend_flat: String,
    pub intensity_strong: String,
    pub intensity_moderate: String,
    pub intensity_micro: String,
}

impl SignalTables {
    /// Parse a `key = value` text config. Required keys: `trend.up`,
    /// `trend.down`, `trend.flat`, `intensity.strong`, `intensity.moderate`,
    /// `intensity.micro`. Lines starting with `#` and blank lines are
    /// ignored.
    pub fn parse(text: &str) -> Result<Self, SignalError> {
        let mut entries: HashMap<String, String> = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(SignalError::MalformedTableLine(idx + 1))?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        let take = |key: &str| -> Result<String, SignalError> {
            let value = entries
                .get(key)
                .ok_or_else(|| SignalError::MissingTableEntry(key.to_string()))?;
            if value.is_empty() {
                return Err(SignalError::MissingTableEntry(key.to_string()));
            }
            Ok(value.clone())
        };
        Ok(SignalTables {
            trend_up: take("trend.up")?,
            trend_down: take("trend.down")?,
            trend_flat: take("trend.flat")?,
            intensity_strong: take("intensity.strong")?,
            intensity_moderate: take("intensity.moderate")?,
            intensity_micro: take("intensity.micro")?,
        })
    }

    pub fn trend_fragment(&self, state: TrendState) -> &str {
        match state {
            TrendState::Up => &self.trend_up,
            TrendState::Down => &self.trend_down,
            TrendState::Flat => &self.trend_flat,
        }
    }

    pub fn intensity_fragment(&self, state: IntensityState) -> &str {
        match state {
            IntensityState::Strong => &self.intensity_strong,
            IntensityState::Moderate => &self.intensity_moderate,
            IntensityState::Micro => &self.intensity_micro,
        }
    }
}

impl Default for SignalTables {
    fn default() -> Self {
        SignalTables::parse(DEFAULT_SIGNAL_TABLES).expect("bundled signal tables parse")
    }
}

/// The composed textual guidance signal for one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticSignal {
    pub text: String,
    pub trend_state: TrendState,
    pub intensity_state: IntensityState,
}

/// Fold a new score into the moving average.
pub fn ema_update(state: EmaState, score: Score) -> EmaState {
    let smoothed = if state.initialized {
        state.alpha * score.value() + (1.0 - state.alpha) * state.smoothed
    } else {
        score.value()
    };
    EmaState {
        smoothed,
        alpha: state.alpha,
        initialized: true,
    }
}

/// Deviation of the current score from the average of all prior scores.
///
/// The average must already hold at least one observation; the first step of
/// a run has no history and its trend is defined as zero by the caller.
pub fn compute_trend(score: Score, ema_prev: EmaState) -> Result<TrendValue, SignalError> {
    if !ema_prev.initialized {
        return Err(SignalError::EmaUninitialized);
    }
    Ok(TrendValue(score.value() - ema_prev.smoothed))
}

/// Discretize a trend deviation. `|t| <= epsilon` is flat; the boundary
/// belongs to flat.
pub fn classify_trend(t: TrendValue, cfg: &SignalConfig) -> TrendState {
    if t.0 > cfg.epsilon {
        TrendState::Up
    } else if t.0 < -cfg.epsilon {
        TrendState::Down
    } else {
        TrendState::Flat
    }
}

/// Margin below the high-confidence threshold, clamped at zero.
pub fn compute_intensity(score: Score, cfg: &SignalConfig) -> IntensityValue {
    IntensityValue((cfg.tau_high - score.value()).max(0.0))
}

/// Discretize an intensity margin into edit magnitudes.
///
/// Cut points sit at thirds of `[0, tau_high]`; a value exactly on a cut
/// point maps to the weaker state. With the intensity ablation off the
/// answer is always moderate.
pub fn classify_intensity(i: IntensityValue, cfg: &SignalConfig) -> IntensityState {
    if !cfg.intensity_enabled {
        return IntensityState::Moderate;
    }
    let third = cfg.tau_high / 3.0;
    if i.0 <= third {
        IntensityState::Micro
    } else if i.0 <= 2.0 * third {
        IntensityState::Moderate
    } else {
        IntensityState::Strong
    }
}

/// Concatenate the table fragments for the two states: trend fragment,
/// single space, intensity fragment.
pub fn compose_signal(
    trend: TrendState,
    intensity: IntensityState,
    tables: &SignalTables,
) -> SemanticSignal {
    let text = format!(
        "{} {}",
        tables.trend_fragment(trend),
        tables.intensity_fragment(intensity)
    );
    SemanticSignal {
        text,
        trend_state: trend,
        intensity_state: intensity,
    }
}
