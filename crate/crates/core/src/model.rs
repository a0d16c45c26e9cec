//! Domain types and closed-form economics: steady-state biomass, fisherman
//! costs and rents, MCS cost, and player utilities.
//!
//! Units follow the scenario presets throughout: biomass in 10^6 metric tons,
//! money in 10^9 USD, effort and quotas in effort units (fishermen).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subgame::SubgameAllocation;

/// Index of a player within a scenario.
pub type PlayerId = usize;

/// Identifies the `index`-th fishery owned by `owner`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FisheryId {
    pub owner: PlayerId,
    pub index: usize,
}

impl FisheryId {
    pub fn new(owner: PlayerId, index: usize) -> Self {
        Self { owner, index }
    }
}

impl fmt::Display for FisheryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.owner, self.index)
    }
}

/// Biology and price parameters of a single fishery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisheryParams {
    pub id: FisheryId,
    /// Carrying capacity, 10^6 metric tons.
    pub z: f64,
    /// Intrinsic growth rate, 1/time.
    pub r: f64,
    /// Catchability, 1/effort-unit.
    pub q: f64,
    /// Ex-vessel price, 10^9 USD per 10^6 metric tons.
    pub p: f64,
}

impl FisheryParams {
    /// Revenue per fisherman at carrying capacity, `p*q*Z`.
    pub fn revenue_at_capacity(&self) -> f64 {
        self.p * self.q * self.z
    }

    /// Decline of per-fisherman revenue per unit of total effort,
    /// `p*q^2*Z/r`. Rent in a fishery is affine in its total effort with
    /// this slope.
    pub fn rent_slope(&self) -> f64 {
        self.p * self.q * self.q * self.z / self.r
    }

    /// Effort level at which the steady-state stock is extinguished, `r/q`.
    pub fn extinction_effort(&self) -> f64 {
        self.r / self.q
    }

    fn validate(&self, path: &str) -> Result<()> {
        for (field, v) in [("Z", self.z), ("r", self.r), ("q", self.q), ("p", self.p)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Invalid {
                    path: format!("{path}.{field}"),
                    message: format!("must be positive and finite, got {v}"),
                });
            }
        }
        Ok(())
    }
}

/// Economics and enforcement parameters of a player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerParams {
    pub name: String,
    /// Combined operating + opportunity cost per quota, 10^9 USD.
    pub c: f64,
    /// Patrol density, craft per 100,000 km^2.
    pub patrol: f64,
    /// Patrol deterrence coefficient, 10^9 USD per patrol unit.
    pub beta: f64,
    /// MCS cost curve constants; cost of level m is `a1 * m^a2`.
    pub a1: f64,
    pub a2: f64,
    pub fisheries: Vec<FisheryParams>,
}

impl PlayerParams {
    fn validate(&self, path: &str) -> Result<()> {
        let checks = [
            ("c", self.c, 0.0),
            ("P", self.patrol, 0.0),
            ("beta", self.beta, 0.0),
            ("a1", self.a1, 0.0),
        ];
        for (field, v, lo) in checks {
            if !(v >= lo) || !v.is_finite() {
                return Err(Error::Invalid {
                    path: format!("{path}.{field}"),
                    message: format!("must be >= {lo} and finite, got {v}"),
                });
            }
        }
        if !(self.a2 > 0.0) || !self.a2.is_finite() {
            return Err(Error::Invalid {
                path: format!("{path}.a2"),
                message: format!("must be > 0 and finite, got {}", self.a2),
            });
        }
        if self.fisheries.is_empty() {
            return Err(Error::Invalid {
                path: format!("{path}.fisheries"),
                message: "every player owns at least one fishery".into(),
            });
        }
        for (j, fishery) in self.fisheries.iter().enumerate() {
            fishery.validate(&format!("{path}.fisheries[{j}]"))?;
        }
        Ok(())
    }
}

/// Numerical tolerances and budgets shared by the solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Rent-equality tolerance used for verification.
    pub rent_tol: f64,
    /// Quota-budget tolerance used for verification.
    pub effort_tol: f64,
    /// Activity threshold: effort below this counts as "not fishing".
    pub activity_eps: f64,
    /// Best-response quota tolerance (effort units).
    pub quota_tol: f64,
    /// Unilateral-deviation tolerance for equilibrium certification.
    pub deviation_tol: f64,
    /// Fictitious-play round limit.
    pub max_rounds: usize,
    /// Subgame event budget.
    pub max_events: usize,
    /// Coarse grid points per quota dimension in multi-fishery search.
    pub grid_points: usize,
    /// Refinement rounds in multi-fishery search (window shrinks 8x each).
    pub refine_rounds: usize,
    /// Nash bargaining sampling budget (objective evaluations).
    pub bargain_budget: usize,
    /// Upper bound for MCS decision variables.
    pub mcs_upper: f64,
    /// Seed for stochastic optimizers.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rent_tol: 1e-9,
            effort_tol: 1e-6,
            activity_eps: 1e-7,
            quota_tol: 0.5,
            deviation_tol: 1e-4,
            max_rounds: 200,
            max_events: 20_000,
            grid_points: 64,
            refine_rounds: 2,
            bargain_budget: 20_000,
            mcs_upper: 150.0,
            seed: 0,
        }
    }
}

/// A full game instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub players: Vec<PlayerParams>,
    /// MCS deterrence coefficient, 10^9 USD per MCS quality unit.
    pub beta_m: f64,
    pub solver: SolverConfig,
}

impl Scenario {
    /// Validates invariants. Single-player scenarios are allowed so that
    /// solvers can isolate one player; parsed scenario files additionally
    /// require at least two players.
    pub fn new(players: Vec<PlayerParams>, beta_m: f64) -> Result<Self> {
        let scenario = Self {
            players,
            beta_m,
            solver: SolverConfig::default(),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        if self.players.is_empty() {
            return Err(Error::Invalid {
                path: "players".into(),
                message: "at least one player required".into(),
            });
        }
        if !(self.beta_m >= 0.0) || !self.beta_m.is_finite() {
            return Err(Error::Invalid {
                path: "beta_m".into(),
                message: format!("must be >= 0 and finite, got {}", self.beta_m),
            });
        }
        for (k, player) in self.players.iter().enumerate() {
            player.validate(&format!("players[{k}]"))?;
            for (j, fishery) in player.fisheries.iter().enumerate() {
                let expect = FisheryId::new(k, j);
                if fishery.id != expect {
                    return Err(Error::Invalid {
                        path: format!("players[{k}].fisheries[{j}].id"),
                        message: format!("expected {expect}, got {}", fishery.id),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn player(&self, k: PlayerId) -> Result<&PlayerParams> {
        self.players.get(k).ok_or(Error::UnknownPlayer(k))
    }

    pub fn fishery(&self, id: FisheryId) -> Result<&FisheryParams> {
        self.players
            .get(id.owner)
            .and_then(|p| p.fisheries.get(id.index))
            .ok_or_else(|| Error::UnknownFishery(id.to_string()))
    }

    /// All fishery ids in (owner, index) order.
    pub fn fishery_ids(&self) -> Vec<FisheryId> {
        self.players
            .iter()
            .enumerate()
            .flat_map(|(k, p)| (0..p.fisheries.len()).map(move |j| FisheryId::new(k, j)))
            .collect()
    }

    pub fn player_index_by_name(&self, name: &str) -> Option<PlayerId> {
        self.players.iter().position(|p| p.name == name)
    }

    /// Scenario containing only player `k`, for isolated-player analysis.
    pub fn isolate_player(&self, k: PlayerId) -> Result<Scenario> {
        let player = self.player(k)?;
        let mut p = player.clone();
        for (j, fishery) in p.fisheries.iter_mut().enumerate() {
            fishery.id = FisheryId::new(0, j);
        }
        let mut s = Scenario::new(vec![p], self.beta_m)?;
        s.solver = self.solver.clone();
        Ok(s)
    }
}

/// First-stage decision: issued quota per fishery, in effort units.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct QuotaProfile {
    entries: Vec<(FisheryId, f64)>,
}

impl QuotaProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (FisheryId, f64)>) -> Self {
        let mut entries: Vec<(FisheryId, f64)> = pairs.into_iter().collect();
        entries.sort_by_key(|(id, _)| *id);
        Self { entries }
    }

    pub fn set(&mut self, id: FisheryId, quota: f64) {
        match self.entries.binary_search_by_key(&id, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1 = quota,
            Err(pos) => self.entries.insert(pos, (id, quota)),
        }
    }

    pub fn get(&self, id: FisheryId) -> f64 {
        self.entries
            .binary_search_by_key(&id, |(i, _)| *i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (FisheryId, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn validate(&self) -> Result<()> {
        for (id, quota) in &self.entries {
            if !(*quota >= 0.0) || !quota.is_finite() {
                return Err(Error::Invalid {
                    path: format!("quotas[{id}]"),
                    message: format!("must be >= 0 and finite, got {quota}"),
                });
            }
        }
        Ok(())
    }
}

/// First-stage decision: MCS quality level per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McsProfile {
    levels: Vec<f64>,
}

impl McsProfile {
    pub fn zeros(n_players: usize) -> Self {
        Self {
            levels: vec![0.0; n_players],
        }
    }

    pub fn from_levels(levels: Vec<f64>) -> Self {
        Self { levels }
    }

    pub fn set(&mut self, k: PlayerId, m: f64) {
        if k >= self.levels.len() {
            self.levels.resize(k + 1, 0.0);
        }
        self.levels[k] = m;
    }

    pub fn get(&self, k: PlayerId) -> f64 {
        self.levels.get(k).copied().unwrap_or(0.0)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn validate(&self) -> Result<()> {
        for (k, m) in self.levels.iter().enumerate() {
            if !(*m >= 0.0) || !m.is_finite() {
                return Err(Error::Invalid {
                    path: format!("mcs[{k}]"),
                    message: format!("must be >= 0 and finite, got {m}"),
                });
            }
        }
        Ok(())
    }
}

/// A class of fishermen: licensed for one fishery, carrying one nationality.
///
/// In the noncooperative game the licensed fishery determines nationality
/// (its owner). Under a bargained agreement the two decouple: a fisherman of
/// nationality `k` may hold a license for another player's fishery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FishermanType {
    pub licensed: FisheryId,
    pub nationality: PlayerId,
}

impl FishermanType {
    /// Noncooperative type for fishery `id`: nationality is the owner.
    pub fn domestic(id: FisheryId) -> Self {
        Self {
            licensed: id,
            nationality: id.owner,
        }
    }
}

/// Steady-state biomass of a fishery under a constant total effort.
///
/// Not clamped at zero: the caller decides whether a negative stock is
/// meaningful. Solvers never construct allocations past `r/q`.
pub fn steady_state_biomass(fishery: &FisheryParams, total_effort: f64) -> f64 {
    fishery.z * (1.0 - fishery.q * total_effort / fishery.r)
}

/// Instantaneous stock growth minus harvest; zero exactly at the steady state.
pub fn growth_rhs(fishery: &FisheryParams, x: f64, total_effort: f64) -> f64 {
    fishery.r * x * (1.0 - x / fishery.z) - x * fishery.q * total_effort
}

/// Cost per unit effort for `ftype` fishing in `fishery`: the bare cost
/// `c_k` at the licensed fishery, and `c_k + beta_k * P_i + beta_m * m_k`
/// anywhere else.
pub fn fisherman_cost(
    fishery: FisheryId,
    ftype: FishermanType,
    mcs: &McsProfile,
    scenario: &Scenario,
) -> Result<f64> {
    scenario.fishery(ftype.licensed)?;
    let nation = scenario.player(ftype.nationality)?;
    let host = scenario.player(fishery.owner)?;
    scenario.fishery(fishery)?;
    if fishery == ftype.licensed {
        Ok(nation.c)
    } else {
        Ok(nation.c + nation.beta * host.patrol + scenario.beta_m * mcs.get(ftype.nationality))
    }
}

/// Rent per unit effort for `ftype` in `fishery` at biomass `x`.
pub fn rent(
    fishery: FisheryId,
    ftype: FishermanType,
    x: f64,
    mcs: &McsProfile,
    scenario: &Scenario,
) -> Result<f64> {
    let params = scenario.fishery(fishery)?;
    let cost = fisherman_cost(fishery, ftype, mcs, scenario)?;
    Ok(params.p * params.q * x - cost)
}

/// MCS program cost `a1 * m^a2`.
pub fn mcs_cost(m: f64, a1: f64, a2: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        a1 * m.powf(a2)
    }
}

/// Player utilities induced by a subgame allocation: effort-weighted rents
/// collected by each player's fishermen, minus that player's MCS spend.
pub fn player_utility(
    scenario: &Scenario,
    allocation: &SubgameAllocation,
    quotas: &QuotaProfile,
    mcs: &McsProfile,
) -> Result<Vec<f64>> {
    allocation.check_consistency(scenario, quotas)?;
    let mut utilities = vec![0.0; scenario.players.len()];
    for ((fishery, ftype), effort) in allocation.efforts() {
        if effort == 0.0 {
            continue;
        }
        let x = allocation.biomass(fishery)?;
        let pi = rent(fishery, ftype, x, mcs, scenario)?;
        utilities[ftype.nationality] += effort * pi;
    }
    for (k, player) in scenario.players.iter().enumerate() {
        utilities[k] -= mcs_cost(mcs.get(k), player.a1, player.a2);
    }
    Ok(utilities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::preset;

    fn fishery(z: f64, r: f64, q: f64, p: f64) -> FisheryParams {
        FisheryParams {
            id: FisheryId::new(0, 0),
            z,
            r,
            q,
            p,
        }
    }

    #[test]
    fn steady_state_examples() {
        let f = fishery(2.0, 0.4, 0.0002, 3.0);
        assert_eq!(steady_state_biomass(&f, 0.0), 2.0);
        assert!((steady_state_biomass(&f, 900.0) - 1.1).abs() < 1e-12);
        assert!(steady_state_biomass(&f, 2000.0).abs() < 1e-12);
    }

    #[test]
    fn steady_state_is_growth_fixed_point() {
        let f = fishery(1.7, 0.35, 0.00015, 2.5);
        for effort in [0.0, 123.0, 900.0, 2000.0] {
            let x = steady_state_biomass(&f, effort);
            assert!(growth_rhs(&f, x, effort).abs() < 1e-12);
        }
        assert!(growth_rhs(&f, f.z, 0.0).abs() < 1e-12);
    }

    #[test]
    fn growth_rhs_half_capacity() {
        let f = fishery(2.0, 0.4, 0.0002, 3.0);
        assert!((growth_rhs(&f, 1.0, 0.0) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn cost_examples_from_first_preset() {
        let s = preset("example1").unwrap();
        let china = s.player_index_by_name("China").unwrap();
        let korea = s.player_index_by_name("South Korea").unwrap();
        let mcs = McsProfile::zeros(3);
        let own = FisheryId::new(china, 0);
        let t = FishermanType::domestic(own);
        // Domestic fishing pays the bare cost regardless of MCS and patrols.
        assert_eq!(fisherman_cost(own, t, &mcs, &s).unwrap(), 120e-6);
        let mut high = McsProfile::zeros(3);
        high.set(china, 140.0);
        assert_eq!(fisherman_cost(own, t, &high, &s).unwrap(), 120e-6);
        // Abroad adds patrol deterrence (and MCS, here zero).
        let abroad = FisheryId::new(korea, 0);
        let c = fisherman_cost(abroad, t, &mcs, &s).unwrap();
        assert!((c - 132e-6).abs() < 1e-18);
    }

    #[test]
    fn rent_examples() {
        let s = preset("example1").unwrap();
        let china = s.player_index_by_name("China").unwrap();
        let japan = s.player_index_by_name("Japan").unwrap();
        let mcs = McsProfile::zeros(3);
        let t = FishermanType::domestic(FisheryId::new(china, 0));
        let home = rent(FisheryId::new(china, 0), t, 0.732, &mcs, &s).unwrap();
        assert!((home - 3.192e-4).abs() < 1e-12);
        let away = rent(FisheryId::new(japan, 0), t, 0.7453, &mcs, &s).unwrap();
        // Equal-rent cross-check against the home fishery.
        assert!((away - home).abs() < 1e-6);
        // Open-access biomass gives zero rent at home.
        let x_oa = 120e-6 / (3.0 * 0.0002);
        let zero = rent(FisheryId::new(china, 0), t, x_oa, &mcs, &s).unwrap();
        assert!(zero.abs() < 1e-18);
    }

    #[test]
    fn rent_unknown_id_errors() {
        let s = preset("example1").unwrap();
        let t = FishermanType::domestic(FisheryId::new(0, 0));
        let bogus = FisheryId::new(7, 0);
        assert!(rent(bogus, t, 1.0, &McsProfile::zeros(3), &s).is_err());
    }

    #[test]
    fn mcs_cost_examples() {
        assert_eq!(mcs_cost(0.0, 3.5e-3, 0.5), 0.0);
        assert!((mcs_cost(100.0, 3.5e-3, 0.5) - 0.035).abs() < 1e-15);
        assert_eq!(mcs_cost(55.0, 0.0, 0.5), 0.0);
    }

    #[test]
    fn mcs_cost_monotone() {
        let mut last = -1.0;
        for i in 0..200 {
            let m = i as f64;
            let c = mcs_cost(m, 3.5e-3, 0.5);
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn biomass_affine_decreasing_in_effort() {
        let f = fishery(2.4, 0.45, 0.00025, 2.0);
        let slope = -f.z * f.q / f.r;
        for e in [0.0, 10.0, 500.0, 1500.0] {
            let lhs = steady_state_biomass(&f, e + 1.0) - steady_state_biomass(&f, e);
            assert!((lhs - slope).abs() < 1e-12);
        }
    }
}
