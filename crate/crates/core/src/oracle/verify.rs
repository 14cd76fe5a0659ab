//! Probabilistic identity testing of the model against the recursion.
//!
//! Two skew-field elements are compared by evaluating both at random
//! invertible matrices over `F_p`. Agreement on every trial makes a false
//! pass unlikely, not impossible; the verdict records seed, prime and
//! dimension so a run can be reproduced.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::comm::comm_cluster;
use super::expr::{seq_xy, ExprGraph, ExprId};
use crate::chebyshev::Params;
use crate::collect::Family;
use crate::dyckpath::DyckPath;
use crate::error::{Error, Result};
use crate::ncalgebra::{ModMatrix, PrimeField, MERSENNE_31};
use crate::weight::{family_sum, x_var_with, XVarOptions};
use crate::NcPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub dim: usize,
    pub prime: u64,
    pub seed: u64,
    /// Resamples per trial before giving up with `OracleDegenerate`.
    pub retries: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { trials: 5, dim: 4, prime: MERSENNE_31, seed: 0, retries: 20 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Matrix,
    Abelian,
    Both,
    Zrec,
}

impl std::str::FromStr for VerifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(VerifyMode::Matrix),
            "abelian" => Ok(VerifyMode::Abelian),
            "both" => Ok(VerifyMode::Both),
            "zrec" => Ok(VerifyMode::Zrec),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub mode: VerifyMode,
    pub pass: bool,
    pub trials: usize,
    pub seed: u64,
    pub dim: usize,
    pub prime: u64,
    /// Trial indices that disagreed.
    pub failed_trials: Vec<usize>,
}

impl Verdict {
    fn exact(mode: VerifyMode, pass: bool, cfg: &VerifyConfig) -> Self {
        Verdict {
            mode,
            pass,
            trials: 0,
            seed: cfg.seed,
            dim: cfg.dim,
            prime: cfg.prime,
            failed_trials: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// Invertible pair for one trial, reproducible from `(seed, trial)`.
/// `accept` may reject a pair (for instance when the oracle side hits a
/// singular intermediate), in which case the trial resamples.
fn sample_trial<T>(
    field: &PrimeField,
    cfg: &VerifyConfig,
    trial: usize,
    mut accept: impl FnMut(&ModMatrix, &ModMatrix) -> Result<T>,
) -> Result<(ModMatrix, ModMatrix, T)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    for _ in 0..=cfg.retries {
        let mx = field.random(cfg.dim, &mut rng);
        let my = field.random(cfg.dim, &mut rng);
        if field.det(&mx) == 0 || field.det(&my) == 0 {
            continue;
        }
        match accept(&mx, &my) {
            Ok(t) => return Ok((mx, my, t)),
            Err(Error::SingularIntermediate | Error::SingularMatrix) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::OracleDegenerate { retries: cfg.retries })
}

/// Compares a polynomial with expression `root` of `graph` on
/// `cfg.trials` random matrix pairs.
pub fn verify_poly_against(
    poly: &NcPoly,
    graph: &ExprGraph,
    root: ExprId,
    cfg: &VerifyConfig,
) -> Result<Verdict> {
    let field = PrimeField::new(cfg.prime)?;
    let mut pairs = Vec::with_capacity(cfg.trials);
    let mut expected = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let (mx, my, v) = sample_trial(&field, cfg, t, |mx, my| graph.eval(root, &field, mx, my))?;
        pairs.push((mx, my));
        expected.push(v);
    }
    let got = poly.eval_matrices_many(&field, &pairs)?;
    let failed_trials: Vec<usize> =
        (0..cfg.trials).filter(|&t| got[t] != expected[t]).collect();
    Ok(Verdict {
        mode: VerifyMode::Matrix,
        pass: failed_trials.is_empty(),
        trials: cfg.trials,
        seed: cfg.seed,
        dim: cfg.dim,
        prime: cfg.prime,
        failed_trials,
    })
}

/// Model sum over `F(D_n)` against `x_{n-1}` from the recursion.
pub fn verify_main(
    params: Params,
    n: u32,
    cfg: &VerifyConfig,
    opts: &XVarOptions,
) -> Result<Verdict> {
    let poly = x_var_with(params, n, opts)?;
    verify_model_poly(&poly, params, n, cfg)
}

/// As [`verify_main`], for an already computed `x_{n-1}`.
pub fn verify_model_poly(poly: &NcPoly, params: Params, n: u32, cfg: &VerifyConfig) -> Result<Verdict> {
    let mut graph = ExprGraph::new();
    let (x, _) = seq_xy(&mut graph, params, n.saturating_sub(1));
    verify_poly_against(poly, &graph, x, cfg)
}

/// Abelianized model sum against the commutative recurrence, exactly.
pub fn verify_abelian(params: Params, n: u32, cfg: &VerifyConfig, opts: &XVarOptions) -> Result<Verdict> {
    let poly = x_var_with(params, n, opts)?;
    let pass = poly.abelianize() == comm_cluster(params, n.saturating_sub(1))?;
    Ok(Verdict::exact(VerifyMode::Abelian, pass, cfg))
}

/// The family sums on consecutive paths satisfy
/// `z(D_{n+1}; r2, r1) = F_{r2}(z(D_n; r1, r2)) + T^{>=1} - T^{>=2}`,
/// where `z` sums over `F~` and the correction sums over `T^{>=u}` on
/// `D_{n+1}(r2, r1)`. Checked by matrix evaluation.
pub fn verify_zrec(params: Params, n: u32, cfg: &VerifyConfig, opts: &XVarOptions) -> Result<Verdict> {
    let swapped = params.shifted(1);
    let prev = DyckPath::build_greedy(params, n)?;
    let next = DyckPath::build_greedy(swapped, n + 1)?;
    let z_prev = family_sum(&prev, Family::FTilde, opts)?;
    let z_next = family_sum(&next, Family::FTilde, opts)?;
    let t1 = family_sum(&next, Family::TGe(1), opts)?;
    let t2 = family_sum(&next, Family::TGe(2), opts)?;

    let mut graph = ExprGraph::new();
    let z = graph.from_poly(&z_prev)?;
    let fz = graph.subst_f(z, params.r2);
    let corr = graph.from_poly(&(&t1 - &t2))?;
    let rhs = graph.sum(vec![fz, corr]);
    let mut v = verify_poly_against(&z_next, &graph, rhs, cfg)?;
    v.mode = VerifyMode::Zrec;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{WeightCase, WeightRules};

    fn p(r1: u32, r2: u32) -> Params {
        Params::new(r1, r2).unwrap()
    }

    #[test]
    fn main_identity_small() {
        let cfg = VerifyConfig { seed: 7, ..VerifyConfig::default() };
        let opts = XVarOptions::default();
        for n in 2..=5 {
            let v = verify_main(p(2, 3), n, &cfg, &opts).unwrap();
            assert!(v.pass, "n = {n}: {v:?}");
            assert_eq!(v.trials, 5);
        }
        assert!(verify_abelian(p(2, 3), 5, &cfg, &opts).unwrap().pass);
    }

    #[test]
    fn corrupted_weight_fails() {
        let cfg = VerifyConfig { seed: 7, ..VerifyConfig::default() };
        let opts = XVarOptions { rules: WeightRules::corrupt(WeightCase::HookEnd), ..XVarOptions::default() };
        let v = verify_main(p(2, 3), 5, &cfg, &opts).unwrap();
        assert!(!v.pass);
        assert_eq!(v.failed_trials.len(), 5);
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = VerifyConfig { seed: 99, trials: 3, ..VerifyConfig::default() };
        let field = PrimeField::new(cfg.prime).unwrap();
        let a = sample_trial(&field, &cfg, 2, |_, _| Ok(())).unwrap();
        let b = sample_trial(&field, &cfg, 2, |_, _| Ok(())).unwrap();
        let c = sample_trial(&field, &cfg, 1, |_, _| Ok(())).unwrap();
        assert_eq!((&a.0, &a.1), (&b.0, &b.1));
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn degenerate_after_retries() {
        let cfg = VerifyConfig { retries: 3, ..VerifyConfig::default() };
        let field = PrimeField::new(cfg.prime).unwrap();
        let r: Result<(ModMatrix, ModMatrix, ())> =
            sample_trial(&field, &cfg, 0, |_, _| Err(Error::SingularIntermediate));
        assert_eq!(r.err(), Some(Error::OracleDegenerate { retries: 3 }));
    }

    #[test]
    fn zrec_small() {
        let cfg = VerifyConfig { seed: 3, ..VerifyConfig::default() };
        let v = verify_zrec(p(2, 3), 4, &cfg, &XVarOptions::default()).unwrap();
        assert!(v.pass);
        assert_eq!(v.mode, VerifyMode::Zrec);
    }

    #[test]
    fn verdict_json() {
        let cfg = VerifyConfig::default();
        let v = Verdict::exact(VerifyMode::Abelian, true, &cfg);
        assert_eq!(
            v.to_json(),
            r#"{"mode":"abelian","pass":true,"trials":0,"seed":0,"dim":4,"prime":2147483647,"failed_trials":[]}"#
        );
    }
}
