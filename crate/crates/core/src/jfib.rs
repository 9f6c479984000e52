//! Algebraically J-fibrant objects: objects with a chosen extension along
//! every generator for every attaching map, and maps preserving the choice.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{soa_factorize, Factorization, SoaConfig, SoaError};
use crate::error::Error;
use crate::instance::{Arrow, Hom, HomSearch, Instance};
use crate::lifting::{has_rlp, Choice, Square};
use crate::par::Exec;
use crate::pushout::Presheaf;

/// An extension problem: generator `j: A -> B` and an attaching map `a: A -> X`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtKey {
    pub j: usize,
    pub a: Hom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JFibObject<C> {
    pub carrier: Arc<C>,
    pub gens: Arc<Vec<Arrow<C>>>,
    chooser: BTreeMap<ExtKey, Hom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JfibViolation {
    Missing(ExtKey),
    NotAnExtension(ExtKey),
    NotAnAttachingMap(ExtKey),
}

impl JfibViolation {
    pub fn key(&self) -> &ExtKey {
        match self {
            JfibViolation::Missing(k) | JfibViolation::NotAnExtension(k) | JfibViolation::NotAnAttachingMap(k) => k,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            JfibViolation::Missing(_) => "missing",
            JfibViolation::NotAnExtension(_) => "not_an_extension",
            JfibViolation::NotAnAttachingMap(_) => "not_an_attaching_map",
        }
    }
}

/// Every `(j, a)` in canonical order.
pub fn ext_keys<C: Instance>(x: &C, gens: &[Arrow<C>]) -> Vec<ExtKey> {
    gens.iter()
        .enumerate()
        .flat_map(|(j, g)| HomSearch::new(&*g.dom, x).collect(None).into_iter().map(move |a| ExtKey { j, a }))
        .collect()
}

impl<C: Instance> JFibObject<C> {
    pub fn from_chooser(carrier: Arc<C>, gens: Arc<Vec<Arrow<C>>>, chooser: BTreeMap<ExtKey, Hom>) -> Self {
        JFibObject { carrier, gens, chooser }
    }

    /// Chooses the first (or last) extension for every key.
    pub fn choose(carrier: Arc<C>, gens: Arc<Vec<Arrow<C>>>, choice: Choice) -> Result<Self, ExtKey> {
        let mut chooser = BTreeMap::new();
        for key in ext_keys(&*carrier, &gens) {
            let j = &gens[key.j];
            let search = HomSearch::new(&*j.cod, &*carrier).extending(&j.hom, &key.a);
            let found = match choice {
                Choice::First => search.first(),
                Choice::Last => search.reversed().first(),
            };
            match found {
                Some(e) => {
                    chooser.insert(key, e);
                }
                None => return Err(key),
            }
        }
        Ok(JFibObject { carrier, gens, chooser })
    }

    pub fn chooser(&self) -> &BTreeMap<ExtKey, Hom> {
        &self.chooser
    }

    pub fn get(&self, j: usize, a: &Hom) -> Option<&Hom> {
        self.chooser.get(&ExtKey { j, a: a.clone() })
    }

    pub fn with_entry(&self, key: ExtKey, ext: Hom) -> Self {
        let mut out = self.clone();
        out.chooser.insert(key, ext);
        out
    }
}

/// Totality and the extension equation `j then x(j, a) = a`.
pub fn validate_jfib<C: Instance>(x: &JFibObject<C>) -> Vec<JfibViolation> {
    let keys = ext_keys(&*x.carrier, &x.gens);
    let mut out = Vec::new();
    for key in &keys {
        match x.chooser.get(key) {
            None => out.push(JfibViolation::Missing(key.clone())),
            Some(e) => {
                let j = &x.gens[key.j];
                if !e.is_map(&*j.cod, &*x.carrier) || j.hom.then(e) != key.a {
                    out.push(JfibViolation::NotAnExtension(key.clone()));
                }
            }
        }
    }
    let known: std::collections::BTreeSet<&ExtKey> = keys.iter().collect();
    out.extend(
        x.chooser
            .keys()
            .filter(|k| !known.contains(k))
            .map(|k| JfibViolation::NotAnAttachingMap(k.clone())),
    );
    out.sort_by(|p, q| p.key().cmp(q.key()));
    out
}

/// Why a map fails to preserve chosen extensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismFailure {
    GeneratorMismatch,
    NotAMap(String),
    /// `f ∘ x(j, a) != y(j, f ∘ a)`, or one side is missing.
    Moved(ExtKey),
}

pub fn jfib_morphism_violation<C: Instance>(f: &Hom, x: &JFibObject<C>, y: &JFibObject<C>) -> Option<MorphismFailure> {
    if x.gens != y.gens {
        return Some(MorphismFailure::GeneratorMismatch);
    }
    if let Some(v) = f.map_violation(&*x.carrier, &*y.carrier) {
        return Some(MorphismFailure::NotAMap(v));
    }
    for (key, e) in &x.chooser {
        let pushed = y.get(key.j, &key.a.then(f));
        if pushed != Some(&e.then(f)) {
            return Some(MorphismFailure::Moved(key.clone()));
        }
    }
    None
}

pub fn is_jfib_morphism<C: Instance>(f: &Hom, x: &JFibObject<C>, y: &JFibObject<C>) -> bool {
    jfib_morphism_violation(f, x, y).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtendError<C: Instance> {
    #[error("invalid {which} structure: {} violations", violations.len())]
    InvalidInput { which: &'static str, violations: Vec<JfibViolation> },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("i is not a monomorphism: elements {first} and {second} of sort {sort} have the same image")]
    NotMono { sort: usize, first: usize, second: usize },
    #[error("q is not a J-fibration: a square against generator {generator} has no filler")]
    NotFibration { generator: usize, square: Box<Square<C>> },
    #[error("q after i does not preserve chosen extensions at a key of generator {}", .0.j)]
    NotMorphism(ExtKey),
    #[error("internal inconsistency: no filler for a square over the fibration q")]
    NoFiller(ExtKey),
    #[error("postcondition failed: {0}")]
    Postcondition(&'static str),
}

/// How many keys took each branch of the construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CaseCounts {
    pub through_i: usize,
    pub lifted: usize,
}

/// Preimage of `k: A -> Z` along the mono `i: X -> Z`, if `k` lands in the image.
pub fn factor_through_mono(k: &Hom, i: &Hom, z: &impl Instance) -> Option<Hom> {
    let parts = k
        .parts()
        .iter()
        .enumerate()
        .map(|(s, part)| {
            let mut inv = vec![usize::MAX; z.len(s)];
            for (x, &t) in i.part(s).iter().enumerate() {
                inv[t] = x;
            }
            part.iter()
                .map(|&t| Some(inv[t]).filter(|&x| x != usize::MAX))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Hom::from_parts(parts))
}

/// Extends the structures on `X` and `Y` to `Z` for a mono `i: X -> Z` followed by
/// a J-fibration `q: Z -> Y`, so that both `i` and `q` preserve chosen extensions.
pub fn extend_along<C: Instance>(
    x: &JFibObject<C>,
    y: &JFibObject<C>,
    i: &Arrow<C>,
    q: &Arrow<C>,
    choice: Choice,
    exec: Exec,
) -> Result<(JFibObject<C>, CaseCounts), ExtendError<C>> {
    if x.gens != y.gens {
        return Err(ExtendError::Shape("generator sets differ".into()));
    }
    if *i.dom != *x.carrier || *i.cod != *q.dom || *q.cod != *y.carrier {
        return Err(ExtendError::Shape("i: X -> Z and q: Z -> Y do not match the carriers".into()));
    }
    for (which, obj) in [("X", x), ("Y", y)] {
        let violations = validate_jfib(obj);
        if !violations.is_empty() {
            return Err(ExtendError::InvalidInput { which, violations });
        }
    }
    if let Some((sort, first, second)) = i.hom.injectivity_witness() {
        return Err(ExtendError::NotMono { sort, first, second });
    }
    let rlp = has_rlp(q, &x.gens, exec);
    if let Some((generator, square)) = rlp.witness {
        return Err(ExtendError::NotFibration {
            generator,
            square: Box::new(square),
        });
    }
    match jfib_morphism_violation(&i.hom.then(&q.hom), x, y) {
        Some(MorphismFailure::Moved(key)) => return Err(ExtendError::NotMorphism(key)),
        Some(other) => return Err(ExtendError::Shape(format!("{other:?}"))),
        None => {}
    }

    let z = i.cod.clone();
    let keys = ext_keys(&*z, &x.gens);
    let entries = exec.map(&keys, |key| -> Result<(Hom, bool), ExtendError<C>> {
        let j = &x.gens[key.j];
        if let Some(k0) = factor_through_mono(&key.a, &i.hom, &*z) {
            let e = x.get(key.j, &k0).ok_or_else(|| ExtendError::NoFiller(key.clone()))?;
            return Ok((e.then(&i.hom), true));
        }
        let bottom = y
            .get(key.j, &key.a.then(&q.hom))
            .ok_or_else(|| ExtendError::NoFiller(key.clone()))?
            .clone();
        let sq = Square::new_unchecked(j.clone(), q.clone(), key.a.clone(), bottom);
        sq.filler(choice).map(|d| (d, false)).ok_or_else(|| ExtendError::NoFiller(key.clone()))
    });
    let mut chooser = BTreeMap::new();
    let mut counts = CaseCounts::default();
    for (key, entry) in keys.into_iter().zip(entries) {
        let (e, case1) = entry?;
        if case1 {
            counts.through_i += 1;
        } else {
            counts.lifted += 1;
        }
        chooser.insert(key, e);
    }
    let zs = JFibObject {
        carrier: z,
        gens: x.gens.clone(),
        chooser,
    };
    if !validate_jfib(&zs).is_empty() {
        return Err(ExtendError::Postcondition("the structure on Z is not valid"));
    }
    if !is_jfib_morphism(&i.hom, x, &zs) {
        return Err(ExtendError::Postcondition("i does not preserve chosen extensions"));
    }
    if !is_jfib_morphism(&q.hom, &zs, y) {
        return Err(ExtendError::Postcondition("q does not preserve chosen extensions"));
    }
    Ok((zs, counts))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplacementError {
    #[error(transparent)]
    Soa(#[from] SoaError),
    #[error("the target of the map is not terminal")]
    NotTerminal,
    #[error(transparent)]
    Instance(#[from] Error),
}

/// Runs the small object argument on `X -> 1` and reads the chooser off
/// the recorded fillers.
pub fn free_jfib_replacement<C: Presheaf>(
    to_terminal: &Arrow<C>,
    gens: Arc<Vec<Arrow<C>>>,
    cfg: SoaConfig,
) -> Result<(JFibObject<C>, Factorization<C>), ReplacementError> {
    let fact = soa_factorize(to_terminal, gens.clone(), cfg)?;
    let mut chooser = BTreeMap::new();
    for (p, d) in fact.right.table() {
        let key = ExtKey { j: p.j, a: p.a.clone() };
        if chooser.insert(key, d.clone()).is_some() {
            return Err(ReplacementError::NotTerminal);
        }
    }
    Ok((
        JFibObject {
            carrier: fact.left.cod.clone(),
            gens,
            chooser,
        },
        fact,
    ))
}
