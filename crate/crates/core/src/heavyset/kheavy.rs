use serde::Serialize;

use super::simulate::find_k_witness;
use super::{Certificate, Verdict};
use crate::contfrac::{CFExpansion, Tail};
use crate::error::{Error, Result};
use crate::exactnum::QuadSurd;

/// How much of the expansion the criterion covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionScope {
    /// Every entry of an eventually periodic expansion.
    Certified,
    /// Every entry of a finite expansion.
    Finite,
    /// Only the first `checked` entries were known.
    Partial { checked: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KHeavyCriterion {
    pub holds: bool,
    pub scope: CriterionScope,
}

/// Whether `a_1, a_3, a_5, …` are all divisible by `k`.
pub fn k_heavy_criterion(cf: &CFExpansion, k: u64) -> Result<KHeavyCriterion> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must be at least 2"
        )));
    }
    let (len, scope) = match cf.tail() {
        Tail::Periodic(block) => (
            cf.prefix().len() + 2 * block.len(),
            CriterionScope::Certified,
        ),
        Tail::Finite => (cf.prefix().len(), CriterionScope::Finite),
        Tail::Truncated => {
            let n = cf.prefix().len();
            (n, CriterionScope::Partial { checked: n })
        }
    };
    let holds = (0..len)
        .step_by(2)
        .all(|i| cf.get(i).is_some_and(|a| a % k == 0));
    Ok(KHeavyCriterion { holds, scope })
}

/// Exact sums of `k·χ_{[0,1/k]}({iα}) − 1` for `i = 1..=n`.
pub fn k_heavy_simulate(alpha: &QuadSurd, k: u64, n: u64) -> Result<Verdict> {
    if k < 2 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "need k ≥ 2 and N ≥ 1 (k = {k}, N = {n})"
        )));
    }
    Ok(match find_k_witness(alpha, k, n)? {
        Some(w) => Verdict::NotHeavy(w),
        None => Verdict::Heavy(Certificate::Simulated(n)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::parse_cf;
    use crate::exactnum::parse_surd;

    fn crit(s: &str, k: u64) -> KHeavyCriterion {
        k_heavy_criterion(&parse_cf(s).unwrap(), k).unwrap()
    }

    #[test]
    fn criterion_examples() {
        assert!(crit("[(2)]", 2).holds);
        assert!(!crit("[3;(2)]", 2).holds);
        assert!(crit("[(3,1)]", 3).holds);
        assert_eq!(crit("[(3,1)]", 3).scope, CriterionScope::Certified);
        assert!(!crit("[1;(2)]", 2).holds);
        assert!(!crit("[(2,1,3)]", 2).holds);
    }

    #[test]
    fn truncated_is_partial() {
        let c = crit("[2,5,4;?]", 2);
        assert!(c.holds);
        assert_eq!(c.scope, CriterionScope::Partial { checked: 3 });
    }

    #[test]
    fn simulate_examples() {
        let silver = parse_surd("sqrt(2) - 1").unwrap();
        assert_eq!(
            k_heavy_simulate(&silver, 2, 10_000).unwrap(),
            Verdict::Heavy(Certificate::Simulated(10_000))
        );
        let odd = parse_surd("(2 - sqrt(2))/2").unwrap();
        assert!(matches!(
            k_heavy_simulate(&odd, 2, 1000).unwrap(),
            Verdict::NotHeavy(_)
        ));
        assert_eq!(
            k_heavy_simulate(&QuadSurd::ratio(1, 3), 3, 3).unwrap(),
            Verdict::Heavy(Certificate::Simulated(3))
        );
    }
}
