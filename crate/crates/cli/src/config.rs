//! Configuration document: one TOML file with `[model]`, `[checks]`,
//! `[sampling]`, `[tolerances]`, and an optional `[counterexample]`
//! section. Unknown keys are rejected so typos cannot silently disable a
//! check.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use serde::Deserialize;
use wedgenet::counterexample::TwistConfig;
use wedgenet::lattice::GridConfig;
use wedgenet::modularity::{MultiRep, SectorSpec};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub sampling: SamplingConfig,
    /// Per-check tolerance overrides, keyed by `check_name`.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub counterexample: Option<CounterexampleConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// One entry per sector; masses must be pairwise distinct (equal
    /// masses are expressed through `multiplicities`).
    pub masses: Vec<f64>,
    /// Multiplicity per mass; defaults to all ones.
    #[serde(default)]
    pub multiplicities: Option<Vec<usize>>,
    /// Rapidity count (even, ≥ 2).
    pub l: usize,
    /// Rapidity spacing.
    pub delta: f64,
    /// Transverse rotation order.
    pub k: usize,
    /// Transverse charge radius (0 for a scalar grid).
    pub q: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChecksConfig {
    pub axioms: bool,
    pub bw: bool,
    pub duality: bool,
    pub condition_m: bool,
    pub implications: bool,
    pub counterexample: bool,
    pub split: bool,
}

impl Default for ChecksConfig {
    fn default() -> Self {
        ChecksConfig {
            axioms: true,
            bw: true,
            duality: true,
            condition_m: true,
            implications: true,
            counterexample: false,
            split: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    /// Modular-flow times probed by the flow and duality checks.
    pub t_samples: Vec<f64>,
    /// Number of random translated wedges added to the check family.
    pub translation_samples: usize,
    /// Seed for every random draw (translations, sampled offsets).
    pub seed: u64,
    /// Number of points on the Z-curve (including t = 0).
    pub z_points: usize,
    /// Largest Z-curve time.
    pub z_max: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            t_samples: vec![0.3, 0.7, 1.1],
            translation_samples: 2,
            seed: 7,
            z_points: 33,
            z_max: 2.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleConfig {
    /// Companion dimension (≥ 2).
    pub companion_dim: usize,
    /// Companion boost response angle per unit rapidity.
    pub alpha: f64,
    /// Flow times probed by the twisted report.
    pub times: Vec<f64>,
    /// Reduced scalar carrier grid (kept small so the dense membership
    /// decision stays inside the dense cap).
    pub l: usize,
    pub delta: f64,
    pub mass: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        let base = TwistConfig::default();
        CounterexampleConfig {
            companion_dim: base.companion_dim,
            alpha: base.alpha,
            times: base.times,
            l: base.grid.l,
            delta: base.grid.delta,
            mass: base.grid.mass,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read configuration {}", path.display()))?;
        let cfg: ExperimentConfig = toml::from_str(&text)
            .with_context(|| format!("invalid configuration {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.model.masses.is_empty() {
            bail!("model.masses must list at least one mass");
        }
        if let Some(mults) = &self.model.multiplicities {
            if mults.len() != self.model.masses.len() {
                bail!(
                    "model.multiplicities has {} entries for {} masses",
                    mults.len(),
                    self.model.masses.len()
                );
            }
        }
        for (name, &value) in &self.tolerances {
            if !(value.is_finite() && value > 0.0) {
                bail!("tolerances.{name} must be a positive finite number");
            }
        }
        if self.sampling.z_points < 2 {
            bail!("sampling.z_points must be at least 2");
        }
        if !(self.sampling.z_max.is_finite() && self.sampling.z_max > 0.0) {
            bail!("sampling.z_max must be positive");
        }
        // Grid-level validation (evenness, positivity) through the model
        // constructor, so the CLI rejects exactly what the library rejects.
        self.multi_rep().map(|_| ())
    }

    /// The configured direct-sum model.
    pub fn multi_rep(&self) -> anyhow::Result<MultiRep> {
        let default_mults = vec![1usize; self.model.masses.len()];
        let mults = self
            .model
            .multiplicities
            .as_ref()
            .unwrap_or(&default_mults);
        let specs: Vec<SectorSpec> = self
            .model
            .masses
            .iter()
            .zip(mults)
            .map(|(&mass, &multiplicity)| SectorSpec {
                grid: GridConfig {
                    l: self.model.l,
                    delta: self.model.delta,
                    k: self.model.k,
                    q: self.model.q,
                    mass,
                },
                multiplicity,
            })
            .collect();
        MultiRep::new(&specs).map_err(anyhow::Error::from)
    }

    /// The configured twisted-product model parameters.
    pub fn twist_config(&self) -> TwistConfig {
        let ce = self.counterexample.clone().unwrap_or_default();
        TwistConfig {
            grid: GridConfig {
                l: ce.l,
                delta: ce.delta,
                k: 1,
                q: 0.0,
                mass: ce.mass,
            },
            companion_dim: ce.companion_dim,
            alpha: ce.alpha,
            seed: self.sampling.seed,
            times: ce.times,
        }
    }
}
