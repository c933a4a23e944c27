use anyhow::{bail, Result};
use fwsfm::polytope::verify_membership;
use fwsfm::sfm::{minimize, telescoping_sum, SfmOptions};
use fwsfm::verify::{brute_min, check_submodular, SUBMODULAR_CHECK_LIMIT};
use fwsfm::wolfe::Termination;
use fwsfm::{SetFunction, SubmodularOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self { name, status, detail }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Exhaustive checks of one instance: submodularity, the solver against
/// enumeration, membership of the final iterate in `B_f`, and the
/// telescoping form of the termination certificate.
pub fn verify<F: SetFunction>(
    oracle: &SubmodularOracle<F>,
    n_limit: usize,
    opts: &SfmOptions,
) -> Result<Vec<Check>> {
    let n = oracle.n();
    if n > n_limit {
        bail!("refusing to enumerate: n = {n} exceeds the limit {n_limit}");
    }
    let mut checks = Vec::new();

    checks.push(if n <= SUBMODULAR_CHECK_LIMIT {
        match check_submodular(oracle)? {
            None => Check::new("submodularity", true, format!("all triples hold (n = {n})")),
            Some(v) => Check::new(
                "submodularity",
                false,
                format!(
                    "S = {:?}, T = {:?}, i = {}: f(S+i) - f(S) = {} < f(T+i) - f(T) = {}",
                    v.s,
                    v.t,
                    v.i,
                    v.f_s_i - v.f_s,
                    v.f_t_i - v.f_t
                ),
            ),
        }
    } else {
        Check {
            name: "submodularity",
            status: Status::Skip,
            detail: format!("n = {n} above {SUBMODULAR_CHECK_LIMIT}"),
        }
    });

    let res = minimize(oracle, opts)?;
    let brute = brute_min(oracle)?;
    let eps = res.epsilon_used;
    let slack = 2.0 * n as f64 * eps + 1e-9;
    let exact = oracle.is_integer_valued() && res.is_certified_exact();
    let ok = if exact {
        res.min_value == brute.min_value
    } else {
        res.min_value <= brute.min_value + slack
    };
    checks.push(Check::new(
        "brute-force minimum",
        ok,
        format!(
            "solver {} vs enumeration {} ({} of {} subsets minimal)",
            res.min_value,
            brute.min_value,
            brute.minimizers.len(),
            brute.evaluations
        ),
    ));
    checks.push(Check::new(
        "lower bound",
        res.lower_bound <= brute.min_value + 1e-9,
        format!("Edmonds bound {} vs minimum {}", res.lower_bound, brute.min_value),
    ));

    let scale = oracle.compute_f().max(1.0);
    checks.push(Check::new(
        "membership",
        verify_membership(oracle, &res.x_final, 1e-7 * scale)?,
        format!("x_final in B_f at tolerance {:.1e}", 1e-7 * scale),
    ));

    let t = telescoping_sum(&res.x_final, oracle)?;
    let agrees = (t - res.delta_certificate).abs() <= 1e-7 * scale * scale;
    let certified = res.termination != Termination::Converged || t <= eps * eps + 1e-9;
    checks.push(Check::new(
        "telescoping identity",
        agrees && certified,
        format!(
            "sum {:.3e}, Δ(x) {:.3e}, ε² {:.3e}",
            t,
            res.delta_certificate,
            eps * eps
        ),
    ));
    Ok(checks)
}
