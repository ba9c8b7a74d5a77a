//! Balance sheets, exposure weights and capital-buffer policies.
//!
//! Total assets split into interbank assets (a fixed fraction, held as claims
//! on the bank's debtors) and illiquid assets (the rest). The capital buffer
//! is a fraction of total assets. Deposits never enter the dynamics with the
//! illiquid asset price fixed at 1 and are not materialized.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::DirectedNetwork;

pub const DEFAULT_INTERBANK_FRACTION: f64 = 0.20;
pub const DEFAULT_BUFFER_FRACTION: f64 = 0.04;
pub const DEFAULT_SIZE_EXPONENT: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum SheetVariant {
    /// Every bank has total assets 1.
    Uniform,
    /// Total assets Pareto distributed with density `∝ A^-alpha`, `A ≥ 1`.
    PowerLaw { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SheetScheme {
    pub variant: SheetVariant,
    pub interbank_fraction: f64,
    pub buffer_fraction: f64,
}

impl SheetScheme {
    pub fn uniform() -> Self {
        Self {
            variant: SheetVariant::Uniform,
            interbank_fraction: DEFAULT_INTERBANK_FRACTION,
            buffer_fraction: DEFAULT_BUFFER_FRACTION,
        }
    }

    pub fn power_law(alpha: f64) -> Self {
        Self {
            variant: SheetVariant::PowerLaw { alpha },
            ..Self::uniform()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (ib, k) = (self.interbank_fraction, self.buffer_fraction);
        if !(k > 0.0 && k < ib && ib <= 1.0) {
            return Err(Error::InvalidScheme(format!(
                "need 0 < buffer ({k}) < interbank ({ib}) <= 1"
            )));
        }
        if let SheetVariant::PowerLaw { alpha } = self.variant {
            if !(alpha > 2.0) {
                return Err(Error::InvalidScheme(format!("size exponent must exceed 2, got {alpha}")));
            }
        }
        Ok(())
    }
}

/// Snapshot of a single bank's sheet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BankSheet {
    pub total_assets: f64,
    pub interbank_assets: f64,
    pub illiquid_assets: f64,
    pub capital: f64,
}

/// Per-bank balance sheets plus per-edge exposures, indexed by the edge ids
/// of the network they were built for.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceSheetSet {
    total_assets: Vec<f64>,
    interbank_assets: Vec<f64>,
    illiquid_assets: Vec<f64>,
    capital: Vec<f64>,
    exposures: Vec<f64>,
}

impl BalanceSheetSet {
    /// Builds sheets from given total assets. Each creditor splits its
    /// interbank assets over its debtors in proportion to the debtors' total
    /// assets; banks without debtors hold everything as illiquid assets.
    pub fn from_total_assets(
        net: &DirectedNetwork,
        scheme: &SheetScheme,
        total_assets: Vec<f64>,
    ) -> Result<Self> {
        scheme.validate()?;
        let n = net.node_count();
        if total_assets.len() != n {
            return Err(Error::SizeMismatch {
                sheets_banks: total_assets.len(),
                sheets_edges: net.edge_count(),
                net_banks: n,
                net_edges: net.edge_count(),
            });
        }
        if let Some(bad) = total_assets.iter().position(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidScheme(format!(
                "bank {bad} has non-positive total assets {}",
                total_assets[bad]
            )));
        }

        let mut interbank_assets = vec![0.0; n];
        let mut illiquid_assets = vec![0.0; n];
        let capital: Vec<f64> = total_assets.iter().map(|a| scheme.buffer_fraction * a).collect();
        let mut exposures = vec![0.0; net.edge_count()];

        for c in 0..n {
            let ids = net.in_edge_ids(c);
            if ids.is_empty() {
                illiquid_assets[c] = total_assets[c];
                continue;
            }
            let ib = scheme.interbank_fraction * total_assets[c];
            interbank_assets[c] = ib;
            illiquid_assets[c] = total_assets[c] - ib;
            let debtor_mass: f64 = ids.iter().map(|&id| total_assets[net.edge(id as usize).0]).sum();
            for &id in ids {
                let debtor = net.edge(id as usize).0;
                exposures[id as usize] = ib * total_assets[debtor] / debtor_mass;
            }
        }

        Ok(Self {
            total_assets,
            interbank_assets,
            illiquid_assets,
            capital,
            exposures,
        })
    }

    pub fn bank_count(&self) -> usize {
        self.total_assets.len()
    }

    pub fn edge_count(&self) -> usize {
        self.exposures.len()
    }

    pub fn bank(&self, i: usize) -> BankSheet {
        BankSheet {
            total_assets: self.total_assets[i],
            interbank_assets: self.interbank_assets[i],
            illiquid_assets: self.illiquid_assets[i],
            capital: self.capital[i],
        }
    }

    pub fn total_assets(&self) -> &[f64] {
        &self.total_assets
    }

    pub fn interbank_assets(&self) -> &[f64] {
        &self.interbank_assets
    }

    pub fn illiquid_assets(&self) -> &[f64] {
        &self.illiquid_assets
    }

    pub fn capital(&self) -> &[f64] {
        &self.capital
    }

    /// Creditor's claim on the debtor of edge `id`.
    pub fn exposure(&self, id: usize) -> f64 {
        self.exposures[id]
    }

    pub fn exposures(&self) -> &[f64] {
        &self.exposures
    }

    /// `L^IB(d) = Σ_c w(d, c)` for every bank.
    pub fn interbank_liabilities(&self, net: &DirectedNetwork) -> Vec<f64> {
        (0..net.node_count())
            .map(|d| net.out_edge_ids(d).map(|id| self.exposures[id]).sum())
            .collect()
    }

    pub fn check_matches(&self, net: &DirectedNetwork) -> Result<()> {
        if self.bank_count() != net.node_count() || self.edge_count() != net.edge_count() {
            return Err(Error::SizeMismatch {
                sheets_banks: self.bank_count(),
                sheets_edges: self.edge_count(),
                net_banks: net.node_count(),
                net_edges: net.edge_count(),
            });
        }
        Ok(())
    }

    /// Multiplies every monetary quantity by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let scale = |v: &[f64]| v.iter().map(|x| x * factor).collect();
        Self {
            total_assets: scale(&self.total_assets),
            interbank_assets: scale(&self.interbank_assets),
            illiquid_assets: scale(&self.illiquid_assets),
            capital: scale(&self.capital),
            exposures: scale(&self.exposures),
        }
    }
}

/// Unit balance sheets with interbank assets split equally over debtors.
pub fn assign_uniform(net: &DirectedNetwork, scheme: &SheetScheme) -> Result<BalanceSheetSet> {
    if scheme.variant != SheetVariant::Uniform {
        return Err(Error::InvalidScheme("assign_uniform needs the uniform variant".into()));
    }
    BalanceSheetSet::from_total_assets(net, scheme, vec![1.0; net.node_count()])
}

/// Pareto-sized balance sheets with exposures proportional to debtor size.
pub fn assign_powerlaw<R: Rng + ?Sized>(
    net: &DirectedNetwork,
    scheme: &SheetScheme,
    rng: &mut R,
) -> Result<BalanceSheetSet> {
    let SheetVariant::PowerLaw { alpha } = scheme.variant else {
        return Err(Error::InvalidScheme("assign_powerlaw needs the power-law variant".into()));
    };
    scheme.validate()?;
    let sizes = (0..net.node_count()).map(|_| sample_pareto(alpha, rng)).collect();
    BalanceSheetSet::from_total_assets(net, scheme, sizes)
}

/// Dispatches on the scheme's variant.
pub fn assign_sheets<R: Rng + ?Sized>(
    net: &DirectedNetwork,
    scheme: &SheetScheme,
    rng: &mut R,
) -> Result<BalanceSheetSet> {
    match scheme.variant {
        SheetVariant::Uniform => assign_uniform(net, scheme),
        SheetVariant::PowerLaw { .. } => assign_powerlaw(net, scheme, rng),
    }
}

/// Inverse-CDF draw from the Pareto law with density `∝ A^-alpha` on `[1, ∞)`.
pub fn sample_pareto<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    (1.0 - u).powf(-1.0 / (alpha - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetMode {
    TopDegree,
    TopAssets,
    Random,
}

/// Picks `ceil(fraction * n)` banks. Top modes rank by total degree or total
/// assets, ties to the lowest index. Returned indices are ascending.
pub fn select_targets<R: Rng + ?Sized>(
    net: &DirectedNetwork,
    sheets: &BalanceSheetSet,
    mode: TargetMode,
    fraction: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidFraction(fraction));
    }
    sheets.check_matches(net)?;
    let n = net.node_count();
    let count = target_count(n, fraction);

    let mut picked = match mode {
        TargetMode::Random => rand::seq::index::sample(rng, n, count).into_vec(),
        TargetMode::TopDegree => {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| net.total_degree(b).cmp(&net.total_degree(a)).then(a.cmp(&b)));
            idx.truncate(count);
            idx
        }
        TargetMode::TopAssets => {
            let ta = sheets.total_assets();
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| ta[b].total_cmp(&ta[a]).then(a.cmp(&b)));
            idx.truncate(count);
            idx
        }
    };
    picked.sort_unstable();
    Ok(picked)
}

fn target_count(n: usize, fraction: f64) -> usize {
    // The slack keeps 0.05 * 100 from rounding up to 6.
    ((fraction * n as f64 - 1e-9).ceil().max(0.0) as usize).min(n)
}

/// Copy of `sheets` with `K(i) = buffer * TA(i)` for every target.
pub fn apply_policy(sheets: &BalanceSheetSet, targets: &[usize], buffer: f64) -> Result<BalanceSheetSet> {
    if !(buffer > 0.0) {
        return Err(Error::InvalidBuffer(buffer));
    }
    let mut out = sheets.clone();
    for &i in targets {
        if i >= out.bank_count() {
            return Err(Error::BankOutOfRange {
                index: i,
                n: out.bank_count(),
            });
        }
        out.capital[i] = buffer * out.total_assets[i];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fan_in(k: usize) -> DirectedNetwork {
        let edges: Vec<_> = (1..=k).map(|d| (d, 0)).collect();
        DirectedNetwork::from_edges(k + 1, &edges).unwrap()
    }

    #[test]
    fn uniform_split_is_equal() {
        let net = fan_in(4);
        let sheets = assign_uniform(&net, &SheetScheme::uniform()).unwrap();
        for id in 0..4 {
            assert!((sheets.exposure(id) - 0.05).abs() < 1e-15);
        }
        let hub = sheets.bank(0);
        assert!((hub.interbank_assets - 0.2).abs() < 1e-15);
        assert!((hub.capital - 0.04).abs() < 1e-15);
    }

    #[test]
    fn bank_without_debtors_holds_only_illiquid_assets() {
        let net = fan_in(4);
        let sheets = assign_uniform(&net, &SheetScheme::uniform()).unwrap();
        let leaf = sheets.bank(1);
        assert_eq!(leaf.interbank_assets, 0.0);
        assert_eq!(leaf.illiquid_assets, 1.0);
        assert!((leaf.capital - 0.04).abs() < 1e-15);
    }

    #[test]
    fn proportional_split_follows_debtor_size() {
        let net = fan_in(2);
        let scheme = SheetScheme::power_law(2.5);
        let sheets = BalanceSheetSet::from_total_assets(&net, &scheme, vec![1.0, 1.0, 3.0]).unwrap();
        assert!((sheets.exposure(0) - 0.05).abs() < 1e-15);
        assert!((sheets.exposure(1) - 0.15).abs() < 1e-15);
    }

    #[test]
    fn constant_sizes_reduce_to_uniform() {
        let net = crate::netgen::gen_erdos_renyi(200, 3.0, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let uniform = assign_uniform(&net, &SheetScheme::uniform()).unwrap();
        let constant =
            BalanceSheetSet::from_total_assets(&net, &SheetScheme::power_law(2.5), vec![1.0; 200]).unwrap();
        assert_eq!(uniform, constant);
    }

    #[test]
    fn liabilities_balance_assets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let net = crate::netgen::gen_erdos_renyi(300, 4.0, &mut rng).unwrap();
        let sheets = assign_powerlaw(&net, &SheetScheme::power_law(2.5), &mut rng).unwrap();
        let assets: f64 = sheets.interbank_assets().iter().sum();
        let liabilities: f64 = sheets.interbank_liabilities(&net).iter().sum();
        assert!((assets - liabilities).abs() < 1e-9 * assets);
    }

    #[test]
    fn wrong_variant_is_rejected() {
        let net = fan_in(2);
        assert!(assign_uniform(&net, &SheetScheme::power_law(2.5)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(assign_powerlaw(&net, &SheetScheme::uniform(), &mut rng).is_err());
        assert!(assign_powerlaw(&net, &SheetScheme::power_law(2.0), &mut rng).is_err());
    }

    #[test]
    fn scheme_bounds() {
        let mut s = SheetScheme::uniform();
        s.buffer_fraction = 0.3;
        assert!(s.validate().is_err());
        s.buffer_fraction = 0.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn pareto_has_heavy_tail() {
        // Largest / median over 1000 draws: median ~ 2^(2/3) ~ 1.59, max of
        // 1000 Pareto(1.5) draws ~ 1000^(2/3) ~ 100.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut wins = 0;
        for _ in 0..50 {
            let mut draws: Vec<f64> = (0..1000).map(|_| sample_pareto(2.5, &mut rng)).collect();
            draws.sort_by(f64::total_cmp);
            assert!(draws[0] >= 1.0);
            if draws[999] / draws[500] > 10.0 {
                wins += 1;
            }
        }
        assert!(wins >= 45, "{wins}");
    }

    #[test]
    fn top_degree_targets() {
        // Bank 3 has the highest degree, banks 0 and 1 tie on the next.
        let edges = [(0, 3), (1, 3), (2, 3), (3, 0), (3, 1), (0, 1)];
        let net = DirectedNetwork::from_edges(5, &edges).unwrap();
        let sheets = assign_uniform(&net, &SheetScheme::uniform()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            select_targets(&net, &sheets, TargetMode::TopDegree, 0.4, &mut rng).unwrap(),
            vec![0, 3]
        );
        assert_eq!(
            select_targets(&net, &sheets, TargetMode::TopAssets, 0.4, &mut rng).unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            select_targets(&net, &sheets, TargetMode::Random, 1.0, &mut rng).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        assert!(select_targets(&net, &sheets, TargetMode::Random, 0.0, &mut rng).is_err());
    }

    #[test]
    fn target_count_rounds_up() {
        assert_eq!(target_count(100, 0.05), 5);
        assert_eq!(target_count(101, 0.05), 6);
        assert_eq!(target_count(10, 1.0), 10);
    }

    #[test]
    fn policy_only_touches_targeted_buffers() {
        let net = fan_in(4);
        let sheets = assign_uniform(&net, &SheetScheme::uniform()).unwrap();
        let raised = apply_policy(&sheets, &[3], 0.06).unwrap();
        assert!((raised.bank(3).capital - 0.06).abs() < 1e-15);
        assert!((raised.bank(2).capital - 0.04).abs() < 1e-15);
        assert_eq!(raised.exposures(), sheets.exposures());
        assert_eq!(apply_policy(&sheets, &[], 0.06).unwrap(), sheets);
        assert_eq!(apply_policy(&sheets, &[1], 0.0), Err(Error::InvalidBuffer(0.0)));
        assert!(apply_policy(&sheets, &[9], 0.06).is_err());

        let big = BalanceSheetSet::from_total_assets(&net, &SheetScheme::power_law(2.5), vec![1.0, 1.0, 1.0, 1.0, 4.0])
            .unwrap();
        let raised = apply_policy(&big, &[4], 0.06).unwrap();
        assert!((raised.bank(4).capital - 0.24).abs() < 1e-15);
    }
}
