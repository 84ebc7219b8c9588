//! There is no uniform choice function: swapping two variables in a pair of
//! variants of one formula maps the pair to itself, so whichever member a
//! table picks, uniformity forces the two variants to be equivalent.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::choice::{ChoiceError, ChoiceTable, EquivOracle, Mode, OracleError};
use crate::syntax::{Formula, SubstError, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum UniformityError {
    #[error("`{alpha}` must have exactly the free variable `{var}`")]
    FreeVariables { alpha: String, var: String },
    #[error("`{0}` and `{1}` must be distinct variables not occurring in the formula")]
    BadVariables(String, String),
    #[error("`{0}` and `{1}` are equivalent, so there is nothing to refute")]
    Equivalent(String, String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error(transparent)]
    Choice(#[from] ChoiceError),
}

/// One branch: the table picks `chosen` from `{a(v1), a(v2)}`.
#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub chosen: Formula,
    /// `chosen` under the swap `v1 := v2, v2 := v1`.
    pub chosen_swapped: Formula,
    /// The image of the pair under the swap, as an unordered pair.
    pub image: [Formula; 2],
    /// The image is the same unordered pair.
    pub image_is_same_pair: bool,
    /// What the table picks from the image: the same member.
    pub image_choice: Formula,
    /// Uniformity demands `chosen_swapped ~ image_choice`.
    pub demanded: [Formula; 2],
    /// The oracle's verdict on the demand.
    pub demand_holds: bool,
}

impl Branch {
    pub fn is_contradiction(&self) -> bool {
        self.image_is_same_pair && !self.demand_holds
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformityRefutation {
    pub pair: [Formula; 2],
    pub substitution: BTreeMap<String, String>,
    pub oracle: String,
    pub branches: Vec<Branch>,
}

impl UniformityRefutation {
    pub fn refutes(&self) -> bool {
        self.branches.len() == 2 && self.branches.iter().all(Branch::is_contradiction)
    }
}

fn swap(v1: &str, v2: &str) -> BTreeMap<String, Term> {
    [(v1.to_string(), Term::var(v2)), (v2.to_string(), Term::var(v1))].into_iter().collect()
}

/// The variants `alpha(v1)` and `alpha(v2)` of `alpha(var)`.
pub fn variants(alpha: &Formula, var: &str, v1: &str, v2: &str) -> Result<(Formula, Formula), UniformityError> {
    let free = alpha.free_vars();
    if free.len() != 1 || !free.contains(var) {
        return Err(UniformityError::FreeVariables { alpha: alpha.to_string(), var: var.to_string() });
    }
    let text = alpha.to_string();
    if v1 == v2 || [v1, v2].iter().any(|v| *v != var && text.contains(*v)) {
        return Err(UniformityError::BadVariables(v1.into(), v2.into()));
    }
    Ok((alpha.substitute(var, &Term::var(v1))?, alpha.substitute(var, &Term::var(v2))?))
}

/// Whether `f` satisfies the uniformity condition on the pair `{a, b}` and
/// the substitution `sub`: the substituted choice is equivalent to the
/// choice from the substituted pair.
pub fn uniform_on(
    f: &ChoiceTable,
    a: &Formula,
    b: &Formula,
    sub: &BTreeMap<String, Term>,
    oracle: &EquivOracle,
) -> Result<bool, UniformityError> {
    let lhs = f.choose(a, b)?.substitute_all(sub)?;
    let rhs = f.choose(&a.substitute_all(sub)?, &b.substitute_all(sub)?)?;
    Ok(oracle.equivalent(&lhs, &rhs)?)
}

/// Replays the swap argument for both possible choices on
/// `{alpha(v1), alpha(v2)}`.
pub fn refute_uniformity(
    alpha: &Formula,
    var: &str,
    v1: &str,
    v2: &str,
    oracle: &EquivOracle,
) -> Result<UniformityRefutation, UniformityError> {
    let (a1, a2) = variants(alpha, var, v1, v2)?;
    if oracle.equivalent(&a1, &a2)? {
        return Err(UniformityError::Equivalent(a1.to_string(), a2.to_string()));
    }
    let sub = swap(v1, v2);
    let mut branches = Vec::new();
    for pick in [&a1, &a2] {
        let mut f = ChoiceTable::new(Mode::Formula);
        f.insert(&a1, &a2, pick)?;
        let chosen = f.choose(&a1, &a2)?;
        let chosen_swapped = chosen.substitute_all(&sub)?;
        let image = [a1.substitute_all(&sub)?, a2.substitute_all(&sub)?];
        let same = {
            let mut x = [image[0].primitive(), image[1].primitive()];
            let mut y = [a1.primitive(), a2.primitive()];
            x.sort();
            y.sort();
            x == y
        };
        let image_choice = f.choose(&image[0], &image[1])?;
        let demand_holds = oracle.equivalent(&chosen_swapped, &image_choice)?;
        branches.push(Branch {
            chosen,
            chosen_swapped: chosen_swapped.clone(),
            image,
            image_is_same_pair: same,
            image_choice: image_choice.clone(),
            demanded: [chosen_swapped, image_choice],
            demand_holds,
        });
    }
    Ok(UniformityRefutation {
        pair: [a1, a2],
        substitution: sub.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        oracle: oracle.describe(),
        branches,
    })
}
