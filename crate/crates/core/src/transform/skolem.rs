use super::{FreshNamer, TransformError};
use crate::logic::{
    classify_sentence, standardize_apart, Atom, Formula, NormalForm, PredicateSig, Quantifier,
    Term, Weight, WeightedTheory,
};

/// A quantified subformula to eliminate: sentence index, child-index path
/// from the sentence root, the quantifier and its variable, and the free
/// variables `ys` of the subformula in first-occurrence order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElimSite {
    pub sentence: usize,
    pub path: Vec<usize>,
    pub quantifier: Quantifier,
    pub var: String,
    pub ys: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemConfig {
    /// `w_false` of each Skolem predicate.
    pub skolem_false_weight: Weight,
    /// Rewrite a `forall` site to `~exists ~` before eliminating it. When
    /// off, a `forall` site is eliminated as if it were `exists`.
    pub rewrite_forall: bool,
    /// Eliminate `forall ys exists x phi` sentences with the single-clause
    /// shortcut.
    pub use_shortcut: bool,
}

impl Default for SkolemConfig {
    fn default() -> Self {
        SkolemConfig {
            skolem_false_weight: Weight::int(-1),
            rewrite_forall: true,
            use_shortcut: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SkolemStats {
    /// Full eliminations, each adding a Tseitin and a Skolem predicate.
    pub eliminations: usize,
    /// Shortcut eliminations, each adding only a Skolem predicate.
    pub shortcuts: usize,
}

impl SkolemStats {
    pub fn steps(&self) -> usize {
        self.eliminations + self.shortcuts
    }
}

/// Number of `forall` quantifiers leading the sentence.
fn leading_universals(f: &Formula) -> usize {
    let mut n = 0;
    let mut cur = f;
    while let Formula::Forall(_, body) = cur {
        n += 1;
        cur = body;
    }
    n
}

/// Quantifiers of `f` outside its leading `forall` block, as
/// `(path, quantifier, variable)` in document order.
pub fn internal_quantifiers(f: &Formula) -> Vec<(Vec<usize>, Quantifier, String)> {
    fn walk(
        f: &Formula,
        path: &mut Vec<usize>,
        leading: bool,
        out: &mut Vec<(Vec<usize>, Quantifier, String)>,
    ) {
        let still_leading = leading && matches!(f, Formula::Forall(..));
        if let Some((q, v, _)) = f.as_quantifier() {
            if !still_leading {
                out.push((path.clone(), q, v.to_string()));
            }
        }
        for (i, c) in f.children().into_iter().enumerate() {
            path.push(i);
            walk(c, path, still_leading, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(f, &mut Vec::new(), true, &mut out);
    out
}

/// The next site of sentence `i`: the deepest internal quantifier, leftmost
/// among equally deep ones.
pub fn innermost_site(t: &WeightedTheory, i: usize) -> Option<ElimSite> {
    let s = t.sentences.get(i)?;
    let (path, quantifier, var) = internal_quantifiers(s)
        .into_iter()
        .min_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)))?;
    let ys = s
        .at_path(&path)
        .expect("path from walk")
        .free_vars_ordered();
    Some(ElimSite {
        sentence: i,
        path,
        quantifier,
        var,
        ys,
    })
}

fn atom_over(pred: &PredicateSig, vars: &[String]) -> Formula {
    let args = vars.iter().map(|v| Term::var(v)).collect();
    Formula::Atom(Atom::new(pred.clone(), args).expect("arity matches ys"))
}

fn with_x(ys: &[String], x: &str) -> Vec<String> {
    let mut v = ys.to_vec();
    v.push(x.to_string());
    v
}

/// Looks up the site and returns `(x, phi, negated)`: the subformula is
/// `exists x phi`, or `~exists x phi` when a `forall` site was rewritten.
fn resolve(
    t: &WeightedTheory,
    site: &ElimSite,
    rewrite_forall: bool,
) -> Result<(String, Formula, bool), TransformError> {
    let sub = t
        .sentences
        .get(site.sentence)
        .and_then(|s| s.at_path(&site.path))
        .ok_or(TransformError::StaleSite)?;
    match sub.as_quantifier() {
        Some((q, v, body))
            if q == site.quantifier && v == site.var && sub.free_vars_ordered() == site.ys =>
        {
            if q == Quantifier::Forall && rewrite_forall {
                Ok((v.to_string(), Formula::negate(body.clone()), true))
            } else {
                Ok((v.to_string(), body.clone(), false))
            }
        }
        _ => Err(TransformError::StaleSite),
    }
}

/// Replaces the site by `Z(ys)` (or `~Z(ys)` for a rewritten `forall`) and
/// returns the theory with the hole filled, plus `Z`.
fn isolate(
    t: &WeightedTheory,
    site: &ElimSite,
    negated: bool,
    namer: &mut FreshNamer,
) -> (WeightedTheory, Formula) {
    let z = namer.fresh("Z", site.ys.len());
    let z_atom = atom_over(&z, &site.ys);
    let mut out = t.clone();
    let hole = out.sentences[site.sentence]
        .at_path_mut(&site.path)
        .expect("site resolved");
    *hole = if negated {
        Formula::not(z_atom.clone())
    } else {
        z_atom.clone()
    };
    out.weights.set(z, Weight::one(), Weight::one());
    (out, z_atom)
}

/// One elimination step: the site `exists x phi(x, ys)` becomes `Z(ys)` and
///
/// ```text
/// forall ys forall x (Z(ys) | ~phi)
/// forall ys (S(ys) | Z(ys))
/// forall ys forall x (S(ys) | ~phi)
/// ```
///
/// are appended, with `Z` weighted `(1, 1)` and `S` weighted
/// `(1, skolem_false_weight)`.
pub fn eliminate_one(
    t: &WeightedTheory,
    site: &ElimSite,
    namer: &mut FreshNamer,
    config: &SkolemConfig,
) -> Result<WeightedTheory, TransformError> {
    let (x, phi, negated) = resolve(t, site, config.rewrite_forall)?;
    let (mut out, z) = isolate(t, site, negated, namer);
    let s_pred = namer.fresh("Sk", site.ys.len());
    let s = atom_over(&s_pred, &site.ys);
    let not_phi = Formula::negate(phi);
    let yx = with_x(&site.ys, &x);
    out.sentences.extend([
        Formula::forall_many(&yx, Formula::or(z.clone(), not_phi.clone())),
        Formula::forall_many(&site.ys, Formula::or(s.clone(), z)),
        Formula::forall_many(&yx, Formula::or(s, not_phi)),
    ]);
    out.weights
        .set(s_pred, Weight::one(), config.skolem_false_weight.clone());
    Ok(out)
}

/// Whether the site is an `exists` preceded only by the sentence's leading
/// `forall` block.
fn is_shortcut_site(t: &WeightedTheory, site: &ElimSite) -> bool {
    site.quantifier == Quantifier::Exists
        && site.path.len() == leading_universals(&t.sentences[site.sentence])
}

/// Replaces the sentence `forall ys exists x phi` by
/// `forall ys forall x (S(ys) | ~phi)`, with no Tseitin predicate.
fn shortcut(
    t: &WeightedTheory,
    site: &ElimSite,
    namer: &mut FreshNamer,
    config: &SkolemConfig,
) -> Result<WeightedTheory, TransformError> {
    let (x, phi, _) = resolve(t, site, false)?;
    if !is_shortcut_site(t, site) {
        return Err(TransformError::NotShortcutSite);
    }
    let s_pred = namer.fresh("Sk", site.ys.len());
    let s = atom_over(&s_pred, &site.ys);
    let mut out = t.clone();
    out.sentences[site.sentence] =
        Formula::forall_many(&with_x(&site.ys, &x), Formula::or(s, Formula::negate(phi)));
    out.weights
        .set(s_pred, Weight::one(), config.skolem_false_weight.clone());
    Ok(out)
}

/// Skolemizes with the default configuration: the result is in Skolem
/// normal form and has the same weighted model count on every domain.
pub fn skolemize(t: &WeightedTheory) -> WeightedTheory {
    let mut namer = FreshNamer::for_theory(t);
    skolemize_with(t, &SkolemConfig::default(), &mut namer)
        .expect("sites come from the driver")
        .0
}

/// Eliminates every internal quantifier, innermost first. Sentences are
/// processed in order; within a sentence the deepest site goes first,
/// leftmost among equals. Appended sentences never contain sites.
pub fn skolemize_with(
    t: &WeightedTheory,
    config: &SkolemConfig,
    namer: &mut FreshNamer,
) -> Result<(WeightedTheory, SkolemStats), TransformError> {
    let mut cur = standardize_apart(t);
    namer.reserve_theory(&cur);
    let mut stats = SkolemStats::default();
    let original = cur.sentences.len();
    for i in 0..original {
        while let Some(site) = innermost_site(&cur, i) {
            if config.use_shortcut && is_shortcut_site(&cur, &site) {
                cur = shortcut(&cur, &site, namer, config)?;
                stats.shortcuts += 1;
            } else {
                cur = eliminate_one(&cur, &site, namer, config)?;
                stats.eliminations += 1;
            }
        }
    }
    Ok((cur, stats))
}

/// Skolemization for prenex input, taking the shortcut wherever it applies.
/// Rejects theories with a sentence that is not in prenex form.
pub fn skolemize_prenex_shortcut(
    t: &WeightedTheory,
    namer: &mut FreshNamer,
) -> Result<WeightedTheory, TransformError> {
    if let Some(i) = t
        .sentences
        .iter()
        .position(|s| classify_sentence(s) == NormalForm::Arbitrary)
    {
        return Err(TransformError::NotPrenex(i));
    }
    let config = SkolemConfig {
        use_shortcut: true,
        ..SkolemConfig::default()
    };
    skolemize_with(t, &config, namer).map(|(out, _)| out)
}

/// Stages of the correctness argument for one elimination, each a
/// count-preserving theory on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderStage {
    /// `forall ys (Z(ys) <-> exists x phi)`.
    Isolate,
    /// `forall ys exists x (~Z(ys) | phi)` and `forall ys forall x (Z(ys) | ~phi)`.
    Split,
    /// `forall ys (S(ys) <-> exists x (~Z(ys) | phi))` with `w_false(S) = 0`.
    Feature,
    /// The three sentences of [`eliminate_one`] with `w_false(S) = -1`.
    Implication,
}

impl LadderStage {
    pub const ALL: [LadderStage; 4] = [
        LadderStage::Isolate,
        LadderStage::Split,
        LadderStage::Feature,
        LadderStage::Implication,
    ];
}

/// Builds the theory of one ladder stage for `site`. Also returns the new
/// `(Z, S)` predicates (`S` is `None` before the feature stage).
pub fn ladder_step(
    t: &WeightedTheory,
    site: &ElimSite,
    stage: LadderStage,
    namer: &mut FreshNamer,
) -> Result<(WeightedTheory, PredicateSig, Option<PredicateSig>), TransformError> {
    let (x, phi, negated) = resolve(t, site, true)?;
    let (mut out, z) = isolate(t, site, negated, namer);
    let Formula::Atom(z_atom) = &z else {
        unreachable!("isolate returns an atom")
    };
    let z_pred = z_atom.pred().clone();
    let ys = &site.ys;
    let yx = with_x(ys, &x);
    let not_z_or_phi = Formula::or(Formula::not(z.clone()), phi.clone());
    let z_or_not_phi =
        Formula::forall_many(&yx, Formula::or(z.clone(), Formula::negate(phi.clone())));
    let mut s_pred = None;
    match stage {
        LadderStage::Isolate => out.sentences.push(Formula::forall_many(
            ys,
            Formula::iff(z.clone(), Formula::exists(x.clone(), phi.clone())),
        )),
        LadderStage::Split => out.sentences.extend([
            Formula::forall_many(ys, Formula::exists(x.clone(), not_z_or_phi)),
            z_or_not_phi,
        ]),
        LadderStage::Feature => {
            let sp = namer.fresh("Sk", ys.len());
            let s = atom_over(&sp, ys);
            out.sentences.extend([
                Formula::forall_many(
                    ys,
                    Formula::iff(s, Formula::exists(x.clone(), not_z_or_phi)),
                ),
                z_or_not_phi,
            ]);
            out.weights.set(sp.clone(), Weight::one(), Weight::zero());
            s_pred = Some(sp);
        }
        LadderStage::Implication => {
            let sp = namer.fresh("Sk", ys.len());
            let s = atom_over(&sp, ys);
            out.sentences.extend([
                z_or_not_phi,
                Formula::forall_many(ys, Formula::or(s.clone(), z.clone())),
                Formula::forall_many(&yx, Formula::or(s, Formula::negate(phi))),
            ]);
            out.weights.set(sp.clone(), Weight::one(), Weight::int(-1));
            s_pred = Some(sp);
        }
    }
    Ok((out, z_pred, s_pred))
}
