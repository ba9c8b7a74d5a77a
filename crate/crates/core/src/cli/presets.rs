use serde::Serialize;

use super::config::{FamilyKind, PolicyKind, ProtocolKind, Settings, SheetKind};
use crate::balance::SheetScheme;
use crate::experiment::{ExperimentSpec, NetworkFamily, Policy};

/// Figure presets. Each expands to one or more labeled series sharing the
/// master seed, so series within a preset see the same random networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Fig1,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
        Preset::Fig9,
    ];

    /// Case-insensitive; `fig2b` is accepted as an alias of `fig2`, which
    /// already carries the most-connected-seed series.
    pub fn from_name(name: &str) -> Option<Self> {
        let lower = name.to_ascii_lowercase();
        if lower == "fig2b" {
            return Some(Preset::Fig2);
        }
        Self::ALL.into_iter().find(|p| p.name() == lower)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
        }
    }

    /// Default (nodes, trials per grid point).
    pub fn scale(&self) -> (usize, usize) {
        match self {
            Preset::Fig4 | Preset::Fig5 => (1_000, 1_000),
            Preset::Fig6 | Preset::Fig7 => (1_000, 10_000),
            _ => (10_000, 1_000),
        }
    }

    fn templates(&self) -> (Vec<Template>, Vec<RatioSpec>) {
        use FamilyKind::*;
        use PolicyKind as P;
        use ProtocolKind::*;
        use SheetKind::*;
        let t = Template::new;
        match self {
            Preset::Fig1 => (vec![t("er", Er, Uniform, Random, P::None)], vec![]),
            Preset::Fig2 => (
                vec![
                    t("er-random", Er, Uniform, Random, P::None),
                    t("sf-random", Sf, Uniform, Random, P::None),
                    t("sf-most-connected", Sf, Uniform, MostConnected, P::None),
                ],
                vec![],
            ),
            Preset::Fig3 => (
                vec![
                    t("sf-top-degree", Sf, Uniform, Random, P::TopDegree),
                    t("sf-random-set", Sf, Uniform, Random, P::Random),
                ],
                vec![RatioSpec {
                    numerator: 0,
                    denominator: 1,
                }],
            ),
            Preset::Fig4 => (vec![t("sf-random", Sf, Uniform, Random, P::None)], vec![]),
            Preset::Fig5 => (
                vec![
                    t("er-uniform-random", Er, Uniform, Random, P::None),
                    t("er-powerlaw-random", Er, PowerLaw, Random, P::None),
                    t("er-powerlaw-biggest", Er, PowerLaw, Biggest, P::None),
                ],
                vec![],
            ),
            Preset::Fig6 => (
                vec![
                    t("er-powerlaw-top-assets", Er, PowerLaw, Random, P::TopAssets),
                    t("er-powerlaw-random-set", Er, PowerLaw, Random, P::Random),
                ],
                vec![RatioSpec {
                    numerator: 0,
                    denominator: 1,
                }],
            ),
            Preset::Fig7 => (
                vec![
                    t("sf-powerlaw-most-connected", Sf, PowerLaw, MostConnected, P::None),
                    t("sf-powerlaw-biggest", Sf, PowerLaw, Biggest, P::None),
                ],
                vec![],
            ),
            Preset::Fig8 => (
                vec![
                    t("J=0", ErRewired, Uniform, Random, P::None).coupling(0.0),
                    t("J=-1", ErRewired, Uniform, Random, P::None).coupling(-1.0),
                ],
                vec![],
            ),
            Preset::Fig9 => (
                vec![
                    t("J=0", ErRewired, Uniform, Random, P::None).coupling(0.0),
                    t("J=-1", ErRewired, Uniform, Random, P::None).coupling(-1.0),
                    t("J=+1", ErRewired, Uniform, Random, P::None).coupling(1.0),
                ],
                vec![],
            ),
        }
    }
}

/// Rows of series `numerator` are divided by rows of series `denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RatioSpec {
    pub numerator: usize,
    pub denominator: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    pub spec: ExperimentSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Study {
    pub name: String,
    pub series: Vec<Series>,
    pub ratios: Vec<RatioSpec>,
}

struct Template {
    label: &'static str,
    family: FamilyKind,
    coupling: f64,
    sheets: SheetKind,
    protocol: ProtocolKind,
    policy: PolicyKind,
}

impl Template {
    fn new(
        label: &'static str,
        family: FamilyKind,
        sheets: SheetKind,
        protocol: ProtocolKind,
        policy: PolicyKind,
    ) -> Self {
        Self {
            label,
            family,
            coupling: 0.0,
            sheets,
            protocol,
            policy,
        }
    }

    fn coupling(mut self, j: f64) -> Self {
        self.coupling = j;
        self
    }
}

/// Without a preset the single series is inferred: `--coupling-J` implies a
/// rewired family, otherwise `--gamma` implies scale-free; `--alpha` implies
/// power-law sheets.
fn inferred_template(s: &Settings) -> Template {
    let family = s.family.unwrap_or(if s.coupling_j.is_some() {
        FamilyKind::ErRewired
    } else if s.gamma.is_some() {
        FamilyKind::Sf
    } else {
        FamilyKind::Er
    });
    let sheets = s.sheets.unwrap_or(if s.alpha.is_some() {
        SheetKind::PowerLaw
    } else {
        SheetKind::Uniform
    });
    Template::new(
        "sweep",
        family,
        sheets,
        s.protocol.unwrap_or(ProtocolKind::Random),
        s.policy.unwrap_or(PolicyKind::None),
    )
}

/// Expands resolved settings into the series to run. Scalar settings must
/// already be filled in; structural settings (family, sheets, protocol,
/// policy, coupling) override the preset's choices where given.
pub(crate) fn build_study(preset: Option<Preset>, s: &Settings, grid: Vec<f64>, master_seed: u64) -> Study {
    let (templates, ratios, name) = match preset {
        Some(p) => {
            let (t, r) = p.templates();
            (t, r, p.name().to_string())
        }
        None => (vec![inferred_template(s)], vec![], "sweep".to_string()),
    };
    let scalar = |v: Option<f64>| v.expect("scalar setting resolved before building the study");

    let series = templates
        .into_iter()
        .map(|t| {
            let family = match s.family.unwrap_or(t.family) {
                FamilyKind::Er => NetworkFamily::ErdosRenyi,
                FamilyKind::Sf => NetworkFamily::ScaleFree {
                    gamma: scalar(s.gamma),
                },
                FamilyKind::ErRewired => NetworkFamily::Rewired {
                    coupling: s.coupling_j.unwrap_or(t.coupling),
                    sweeps: s.rewire_sweeps.expect("sweeps resolved"),
                },
            };
            let sheets = match s.sheets.unwrap_or(t.sheets) {
                SheetKind::Uniform => SheetScheme::uniform(),
                SheetKind::PowerLaw => SheetScheme::power_law(scalar(s.alpha)),
            };
            let fraction = scalar(s.policy_fraction);
            let buffer = scalar(s.policy_buffer);
            let policy_kind = s.policy.unwrap_or(t.policy);
            let policy = match (policy_kind, policy_kind.target_mode()) {
                (PolicyKind::None, _) | (_, None) => Policy::None,
                (PolicyKind::Random, _) => Policy::RandomSet { fraction, buffer },
                (_, Some(mode)) => Policy::Targeted { mode, fraction, buffer },
            };
            Series {
                label: t.label.to_string(),
                spec: ExperimentSpec {
                    nodes: s.nodes.expect("nodes resolved"),
                    trials: s.trials.expect("trials resolved"),
                    family,
                    sheets,
                    protocol: s.protocol.unwrap_or(t.protocol).into(),
                    policy,
                    grid: grid.clone(),
                    threshold: scalar(s.threshold),
                    master_seed,
                },
            }
        })
        .collect();

    Study { name, series, ratios }
}
