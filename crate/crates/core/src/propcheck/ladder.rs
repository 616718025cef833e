use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{oracle_count, CheckError};
use crate::encode::eval::holds;
use crate::ground::{groundings, herbrand_base, HerbrandBase};
use crate::logic::{Domain, Formula, PredicateSig, Scalar, WeightedTheory};
use crate::transform::{ladder_step, ElimSite, FreshNamer, LadderStage};

/// Largest Herbrand base enumerated for the case table.
const MAX_TABLE_ATOMS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct LadderRow {
    pub size: usize,
    pub original: BigRational,
    /// Counts after the isolate, split, feature and implication stages.
    pub stages: [BigRational; 4],
}

/// Contribution of the models with the given values of `Sigma(A)` and
/// `S(A)` for one grounding `A`, where `Sigma` is the existential the
/// Skolem predicate stands for.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseRow {
    pub sigma: bool,
    pub skolem: bool,
    /// With `S <-> Sigma` and `w_false(S) = 0`.
    pub feature: BigRational,
    pub feature_expected: BigRational,
    /// With `Sigma -> S` and `w_false(S) = -1`.
    pub implication: BigRational,
    pub implication_expected: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseTable {
    /// The Skolem atom of the grounding, e.g. `Sk0(C1)`.
    pub grounding: String,
    /// Count of the remaining sentences with `Sigma(A)` true, without the
    /// weight of `S(A)`.
    pub gamma_true: BigRational,
    /// The same with `Sigma(A)` false.
    pub gamma_false: BigRational,
    /// Rows in the order TT, TF, FT, FF.
    pub rows: Vec<CaseRow>,
}

impl CaseTable {
    /// Every row matches its expected term and the two rows with
    /// `Sigma(A)` false cancel under the implication.
    pub fn holds(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.feature == r.feature_expected && r.implication == r.implication_expected)
            && (&self.rows[2].implication + &self.rows[3].implication).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LadderReport {
    pub rows: Vec<LadderRow>,
    /// Computed at domain size 1, where the Skolem predicate has a single
    /// grounding. `None` when that base is too large to enumerate.
    pub case_table: Option<CaseTable>,
}

impl LadderReport {
    pub fn passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.stages.iter().all(|c| *c == r.original))
            && self.case_table.as_ref().is_none_or(CaseTable::holds)
    }
}

/// Builds one stage with a namer of its own, so that every stage uses the
/// same fresh names.
fn stage(
    t: &WeightedTheory,
    site: &ElimSite,
    s: LadderStage,
) -> Result<(WeightedTheory, PredicateSig, Option<PredicateSig>), CheckError> {
    let mut namer = FreshNamer::for_theory(t);
    Ok(ladder_step(t, site, s, &mut namer)?)
}

/// Counts the original theory and each staged rewrite of `site` at every
/// size, and reproduces the case table at size 1.
pub fn check_proof_ladder(
    t: &WeightedTheory,
    site: &ElimSite,
    sizes: &[usize],
) -> Result<LadderReport, CheckError> {
    let stages: Vec<WeightedTheory> = LadderStage::ALL
        .iter()
        .map(|&s| stage(t, site, s).map(|r| r.0))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for &n in sizes {
        let d = Domain::with_size(n, &t.constants())?;
        let original = oracle_count(t, &d)?;
        let mut counts = Vec::with_capacity(4);
        for s in &stages {
            counts.push(oracle_count(s, &d)?);
        }
        rows.push(LadderRow {
            size: n,
            original,
            stages: counts.try_into().expect("four stages"),
        });
    }
    Ok(LadderReport {
        rows,
        case_table: case_table(t, site)?,
    })
}

fn world_weight(
    t: &WeightedTheory,
    base: &HerbrandBase,
    truth: &[bool],
    skip: usize,
) -> BigRational {
    let mut w = BigRational::one();
    for (i, a) in base.atoms().iter().enumerate() {
        if i == skip {
            continue;
        }
        let pair = t.weights.get(&a.pred);
        let v = if truth[i] { &pair.pos } else { &pair.neg };
        w *= BigRational::from_weight(v).expect("rational weights");
    }
    let n = base.domain().len();
    for f in &t.scale {
        let e = groundings(f.arity, n).expect("small domain") as u64;
        w *= BigRational::from_weight(&f.weight)
            .expect("rational weights")
            .pow_u64(e);
    }
    w
}

/// Sums world weights over the models of `sentences` selected by `keep`,
/// leaving out the factor of atom `skip`.
fn sum_models(
    t: &WeightedTheory,
    sentences: &[Formula],
    base: &HerbrandBase,
    skip: usize,
    keep: impl Fn(&[bool]) -> bool,
) -> BigRational {
    let d = base.domain();
    let mut total = BigRational::zero();
    let mut truth = vec![false; base.len()];
    for bits in 0u64..1 << base.len() {
        for (i, v) in truth.iter_mut().enumerate() {
            *v = bits >> i & 1 == 1;
        }
        if keep(&truth)
            && sentences
                .iter()
                .all(|s| holds(s, d, base, &truth, &mut Vec::new()))
        {
            total += world_weight(t, base, &truth, skip);
        }
    }
    total
}

fn case_table(t: &WeightedTheory, site: &ElimSite) -> Result<Option<CaseTable>, CheckError> {
    let (feature, _, s_pred) = stage(t, site, LadderStage::Feature)?;
    let (implication, _, _) = stage(t, site, LadderStage::Implication)?;
    let s_pred = s_pred.expect("feature stage adds S");
    let d = Domain::with_size(1, &t.constants())?;
    if d.len() != 1 {
        return Ok(None);
    }
    let base = herbrand_base(&feature, &d)?;
    if base.len() > MAX_TABLE_ATOMS {
        return Ok(None);
    }
    // The feature stage ends with `forall ys (S(ys) <-> Sigma)` followed by
    // the `Z | ~phi` clause; everything else is shared with the implication
    // stage, which ends with the two clauses of `Sigma -> S`.
    let k = feature.sentences.len();
    let mut equiv = &feature.sentences[k - 2];
    for _ in &site.ys {
        equiv = equiv.as_quantifier().expect("ys prefix").2;
    }
    let Formula::Iff(_, sigma) = equiv else {
        unreachable!("feature stage defines S by an equivalence")
    };
    let mut gamma: Vec<Formula> = feature.sentences.clone();
    gamma.remove(k - 2);
    debug_assert_eq!(
        gamma,
        implication.sentences[..implication.sentences.len() - 2]
    );

    let s_atom = base
        .index_of(&s_pred, &vec![0; s_pred.arity()])
        .expect("S in base");
    let env: Vec<(String, usize)> = site.ys.iter().map(|y| (y.clone(), 0)).collect();
    let sigma_at = |truth: &[bool]| holds(sigma, &d, &base, truth, &mut env.clone());

    let gamma_of = |value: bool| {
        sum_models(&feature, &gamma, &base, s_atom, |tr| {
            !tr[s_atom] && sigma_at(tr) == value
        })
    };
    let (gamma_true, gamma_false) = (gamma_of(true), gamma_of(false));
    let w = |th: &WeightedTheory, positive: bool| {
        let pair = th.weights.get(&s_pred);
        BigRational::from_weight(if positive { &pair.pos } else { &pair.neg })
            .expect("rational weights")
    };
    let mut rows = Vec::with_capacity(4);
    for (sigma_v, s_v) in [(true, true), (true, false), (false, true), (false, false)] {
        let term = |th: &WeightedTheory| {
            sum_models(th, &th.sentences, &base, usize::MAX, |tr| {
                tr[s_atom] == s_v && sigma_at(tr) == sigma_v
            })
        };
        let g = if sigma_v { &gamma_true } else { &gamma_false };
        let feature_expected = if sigma_v == s_v {
            w(&feature, s_v) * g
        } else {
            BigRational::zero()
        };
        let implication_expected = if sigma_v && !s_v {
            BigRational::zero()
        } else {
            w(&implication, s_v) * g
        };
        rows.push(CaseRow {
            sigma: sigma_v,
            skolem: s_v,
            feature: term(&feature),
            feature_expected,
            implication: term(&implication),
            implication_expected,
        });
    }
    Ok(Some(CaseTable {
        grounding: base.display(s_atom),
        gamma_true,
        gamma_false,
        rows,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_theory;
    use crate::transform::innermost_site;
    use num_bigint::BigInt;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn boss_ladder_preserves_counts() {
        let t = parse_theory("forall x exists y (WorksFor(x,y) | Boss(x))")
            .unwrap()
            .theory;
        let site = innermost_site(&t, 0).unwrap();
        let r = check_proof_ladder(&t, &site, &[1, 2]).unwrap();
        assert!(r.passed(), "{r:?}");
        // One person: 3 models; two: (2^2 * 2 - 1)^2 = 49.
        assert_eq!(r.rows[0].original, int(3));
        assert_eq!(r.rows[1].original, int(49));
    }

    #[test]
    fn boss_case_table() {
        let t = parse_theory("forall x exists y (WorksFor(x,y) | Boss(x))")
            .unwrap()
            .theory;
        let site = innermost_site(&t, 0).unwrap();
        let table = check_proof_ladder(&t, &site, &[1])
            .unwrap()
            .case_table
            .unwrap();
        assert_eq!(table.grounding, "Sk0(C1)");
        assert!(table.holds());
        // Sigma(C1) = ~Z(C1) | WorksFor(C1,C1) | Boss(C1) with Z(C1) forced
        // true: three worlds satisfy it, one does not.
        assert_eq!(table.gamma_true, int(3));
        assert_eq!(table.gamma_false, int(1));
        let f: Vec<_> = table.rows.iter().map(|r| r.feature.clone()).collect();
        assert_eq!(f, [int(3), int(0), int(0), int(0)]);
        let i: Vec<_> = table.rows.iter().map(|r| r.implication.clone()).collect();
        assert_eq!(i, [int(3), int(0), int(1), int(-1)]);
    }
}
