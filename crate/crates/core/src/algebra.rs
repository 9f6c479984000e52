//! Lifting functions (algebra structures against a generating set), their
//! morphisms and vertical composition, and the bounded small object argument.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::error::Error;
use crate::instance::{Arrow, Hom, HomSearch, Instance};
use crate::lifting::{tops, Choice, Square};
use crate::par::Exec;
use crate::pushout::{attach_cells, Attachment, Presheaf};

/// A lifting problem against generator `j` with top `a` and bottom `b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Problem {
    pub j: usize,
    pub a: Hom,
    pub b: Hom,
}

/// A chosen filler for every lifting problem of `carrier` against `gens`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingFunction<C> {
    pub carrier: Arrow<C>,
    pub gens: Arc<Vec<Arrow<C>>>,
    table: BTreeMap<Problem, Hom>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError<C: Instance> {
    #[error("not a J-fibration: the square against generator {generator} has no filler")]
    NotAFibration { generator: usize, square: Box<Square<C>> },
    #[error("more than {limit} lifting problems")]
    TooManyProblems { limit: usize },
    #[error("no table entry for a problem against generator {}", .0.j)]
    MissingEntry(Problem),
    #[error("generator sets differ")]
    GeneratorMismatch,
    #[error("carriers are not composable")]
    NotComposable,
    #[error(transparent)]
    Instance(#[from] Error),
}

/// A defect of a lifting-function table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableViolation {
    Missing(Problem),
    InvalidFiller(Problem),
    NotASquare(Problem),
}

impl TableViolation {
    pub fn problem(&self) -> &Problem {
        match self {
            TableViolation::Missing(p) | TableViolation::InvalidFiller(p) | TableViolation::NotASquare(p) => p,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TableViolation::Missing(_) => "missing",
            TableViolation::InvalidFiller(_) => "invalid_filler",
            TableViolation::NotASquare(_) => "not_a_square",
        }
    }
}

fn bottoms<C: Instance>(j: &Arrow<C>, f: &Arrow<C>, a: &Hom) -> Vec<Hom> {
    let fa = a.then(&f.hom);
    HomSearch::new(&*j.cod, &*f.cod).extending(&j.hom, &fa).collect(None)
}

/// All lifting problems of `f` against `gens`, in canonical order:
/// generator, then top, then bottom.
pub fn problems<C: Instance>(f: &Arrow<C>, gens: &[Arrow<C>], limit: Option<usize>, exec: Exec) -> Result<Vec<Problem>, AlgebraError<C>> {
    let mut out = Vec::new();
    for (g, j) in gens.iter().enumerate() {
        let ts = tops(j, f);
        let per_top = exec.map(&ts, |a| bottoms(j, f, a));
        for (a, bs) in ts.into_iter().zip(per_top) {
            for b in bs {
                out.push(Problem { j: g, a: a.clone(), b });
                if let Some(l) = limit {
                    if out.len() > l {
                        return Err(AlgebraError::TooManyProblems { limit: l });
                    }
                }
            }
        }
    }
    Ok(out)
}

impl<C: Instance> LiftingFunction<C> {
    /// A table taken as given; check it with [`LiftingFunction::verify`].
    pub fn from_table(carrier: Arrow<C>, gens: Arc<Vec<Arrow<C>>>, table: BTreeMap<Problem, Hom>) -> Self {
        LiftingFunction { carrier, gens, table }
    }

    pub fn table(&self) -> &BTreeMap<Problem, Hom> {
        &self.table
    }

    pub fn get(&self, j: usize, a: &Hom, b: &Hom) -> Option<&Hom> {
        self.table.get(&Problem {
            j,
            a: a.clone(),
            b: b.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// A copy with one entry replaced; for building mutation fixtures.
    pub fn with_entry(&self, p: Problem, d: Hom) -> Self {
        let mut out = self.clone();
        out.table.insert(p, d);
        out
    }

    pub fn square(&self, p: &Problem) -> Square<C> {
        Square::new_unchecked(self.gens[p.j].clone(), self.carrier.clone(), p.a.clone(), p.b.clone())
    }

    /// Totality over all problems and validity of each entry.
    pub fn verify(&self, exec: Exec) -> Vec<TableViolation> {
        let all = problems(&self.carrier, &self.gens, None, exec).unwrap_or_default();
        let mut out = Vec::new();
        for p in &all {
            match self.table.get(p) {
                None => out.push(TableViolation::Missing(p.clone())),
                Some(d) if !self.square(p).is_filler(d) => out.push(TableViolation::InvalidFiller(p.clone())),
                Some(_) => {}
            }
        }
        let known: std::collections::BTreeSet<&Problem> = all.iter().collect();
        out.extend(self.table.keys().filter(|p| !known.contains(p)).map(|p| TableViolation::NotASquare(p.clone())));
        out.sort_by(|x, y| x.problem().cmp(y.problem()));
        out
    }

    pub fn is_valid(&self, exec: Exec) -> bool {
        self.verify(exec).is_empty()
    }
}

/// Records the chosen filler of every problem; fails on the first problem without one.
pub fn make_lifting_function<C: Instance>(
    g: &Arrow<C>,
    gens: Arc<Vec<Arrow<C>>>,
    limit: Option<usize>,
    choice: Choice,
    exec: Exec,
) -> Result<LiftingFunction<C>, AlgebraError<C>> {
    let all = problems(g, &gens, limit, exec)?;
    let fillers = exec.map(&all, |p| {
        Square::new_unchecked(gens[p.j].clone(), g.clone(), p.a.clone(), p.b.clone()).filler(choice)
    });
    let mut table = BTreeMap::new();
    for (p, d) in all.into_iter().zip(fillers) {
        match d {
            Some(d) => {
                table.insert(p, d);
            }
            None => {
                let square = Square::new_unchecked(gens[p.j].clone(), g.clone(), p.a, p.b);
                return Err(AlgebraError::NotAFibration {
                    generator: p.j,
                    square: Box::new(square),
                });
            }
        }
    }
    Ok(LiftingFunction {
        carrier: g.clone(),
        gens,
        table,
    })
}

/// The forced structure on an identity: every filler is the bottom.
pub fn identity_structure<C: Instance>(obj: Arc<C>, gens: Arc<Vec<Arrow<C>>>) -> LiftingFunction<C> {
    let carrier = Arrow::identity(obj);
    let table = problems(&carrier, &gens, None, Exec::Sequential)
        .unwrap_or_default()
        .into_iter()
        .map(|p| {
            let d = p.b.clone();
            (p, d)
        })
        .collect();
    LiftingFunction { carrier, gens, table }
}

/// A commuting square `u: X1 -> X2`, `v: Y1 -> Y2` between carriers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSquare {
    pub top: Hom,
    pub bottom: Hom,
}

/// First problem over `φ1` whose chosen filler is not carried to the filler of `φ2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    NotASquare,
    GeneratorMismatch,
    Missing(Problem),
    Moved(Problem),
}

pub fn algebra_morphism_violation<C: Instance>(
    sq: &AlgebraSquare,
    phi1: &LiftingFunction<C>,
    phi2: &LiftingFunction<C>,
) -> Option<MorphismViolation> {
    if phi1.gens != phi2.gens {
        return Some(MorphismViolation::GeneratorMismatch);
    }
    if phi1.carrier.hom.then(&sq.bottom) != sq.top.then(&phi2.carrier.hom) {
        return Some(MorphismViolation::NotASquare);
    }
    for (p, d) in &phi1.table {
        let moved = d.then(&sq.top);
        match phi2.get(p.j, &p.a.then(&sq.top), &p.b.then(&sq.bottom)) {
            None => return Some(MorphismViolation::Missing(p.clone())),
            Some(e) if *e != moved => return Some(MorphismViolation::Moved(p.clone())),
            Some(_) => {}
        }
    }
    None
}

pub fn is_algebra_morphism<C: Instance>(sq: &AlgebraSquare, phi1: &LiftingFunction<C>, phi2: &LiftingFunction<C>) -> bool {
    algebra_morphism_violation(sq, phi1, phi2).is_none()
}

/// Structure on `f then g`: lift along `g` first, then along `f`.
pub fn vertical_compose<C: Instance>(
    phi_f: &LiftingFunction<C>,
    phi_g: &LiftingFunction<C>,
) -> Result<LiftingFunction<C>, AlgebraError<C>> {
    if phi_f.gens != phi_g.gens {
        return Err(AlgebraError::GeneratorMismatch);
    }
    if phi_f.carrier.cod != phi_g.carrier.dom {
        return Err(AlgebraError::NotComposable);
    }
    let carrier = phi_f.carrier.then(&phi_g.carrier);
    let mut table = BTreeMap::new();
    for p in problems(&carrier, &phi_f.gens, None, Exec::Sequential)? {
        let fa = p.a.then(&phi_f.carrier.hom);
        let d = phi_g
            .get(p.j, &fa, &p.b)
            .ok_or_else(|| AlgebraError::MissingEntry(Problem { j: p.j, a: fa.clone(), b: p.b.clone() }))?;
        let e = phi_f
            .get(p.j, &p.a, d)
            .ok_or_else(|| AlgebraError::MissingEntry(Problem { j: p.j, a: p.a.clone(), b: d.clone() }))?
            .clone();
        table.insert(p, e);
    }
    Ok(LiftingFunction {
        carrier,
        gens: phi_f.gens.clone(),
        table,
    })
}

/// How each round of the small object argument treats problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SoaMode {
    /// Attach a cell for every problem without a recorded filler.
    #[default]
    Free,
    /// Record an existing filler when there is one; attach cells only for the rest.
    ReuseExisting,
}

#[derive(Clone, Copy, Debug)]
pub struct SoaConfig {
    pub max_rounds: usize,
    pub mode: SoaMode,
    pub choice: Choice,
    pub exec: Exec,
    /// Cap on problems scanned per round.
    pub problem_limit: Option<usize>,
}

impl Default for SoaConfig {
    fn default() -> Self {
        SoaConfig {
            max_rounds: 5,
            mode: SoaMode::Free,
            choice: Choice::First,
            exec: Exec::default(),
            problem_limit: Some(200_000),
        }
    }
}

/// One attached cell: generator `j` glued along `attach: A -> E` at round `round`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellRecord {
    pub round: usize,
    pub ordinal: usize,
    pub generator: usize,
    pub attach: Hom,
    pub bottom: Hom,
    pub prefix: String,
}

pub fn cell_prefix(round: usize, ordinal: usize) -> String {
    format!("r{round}.{ordinal}.")
}

#[derive(Clone, Debug)]
pub struct Factorization<C> {
    /// `X -> E`
    pub left: Arrow<C>,
    /// The structure on `E -> Y`.
    pub right: LiftingFunction<C>,
    pub cells: Vec<CellRecord>,
    /// Problems attached in each round.
    pub attached_per_round: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SoaError {
    #[error("budget exhausted after {rounds} rounds with {} outstanding problems", .outstanding.last().copied().unwrap_or(0))]
    BudgetExhausted {
        rounds: usize,
        /// Problems without a filler found at the start of each round, including the one that hit the budget.
        outstanding: Vec<usize>,
    },
    #[error("more than {limit} lifting problems in one round")]
    TooManyProblems { limit: usize },
    #[error(transparent)]
    Instance(#[from] Error),
}

/// Factors `f` as a relative cell complex `X -> E` followed by `E -> Y`
/// with recorded fillers, attaching all outstanding problems of a round in one pushout.
pub fn soa_factorize<C: Presheaf>(f: &Arrow<C>, gens: Arc<Vec<Arrow<C>>>, cfg: SoaConfig) -> Result<Factorization<C>, SoaError> {
    let mut e = f.dom.clone();
    let mut l = Hom::identity(&*e);
    let mut r = f.hom.clone();
    let mut table: BTreeMap<Problem, Hom> = BTreeMap::new();
    let mut cells = Vec::new();
    let mut attached = Vec::new();
    let mut outstanding_log = Vec::new();
    let mut round = 0;
    loop {
        let right = Arrow::new_unchecked(e.clone(), f.cod.clone(), r.clone());
        if round >= cfg.max_rounds && cfg.mode == SoaMode::Free {
            // every recorded key is a problem over E, so the rest are outstanding
            let unrecorded = count_problems(&right, &gens) - table.len();
            if unrecorded > 0 {
                outstanding_log.push(unrecorded);
                return Err(SoaError::BudgetExhausted {
                    rounds: round,
                    outstanding: outstanding_log,
                });
            }
        }
        let found = problems(&right, &gens, cfg.problem_limit, cfg.exec).map_err(|err| match err {
            AlgebraError::TooManyProblems { limit } => SoaError::TooManyProblems { limit },
            AlgebraError::Instance(i) => SoaError::Instance(i),
            _ => unreachable!("problem scan has no other failures"),
        })?;
        let fresh: Vec<Problem> = found.into_iter().filter(|p| !table.contains_key(p)).collect();
        let existing: Vec<Option<Hom>> = match cfg.mode {
            SoaMode::Free => vec![None; fresh.len()],
            SoaMode::ReuseExisting => cfg.exec.map(&fresh, |p| {
                Square::new_unchecked(gens[p.j].clone(), right.clone(), p.a.clone(), p.b.clone()).filler(cfg.choice)
            }),
        };
        let mut outstanding = Vec::new();
        for (p, d) in fresh.into_iter().zip(existing) {
            match d {
                Some(d) => {
                    table.insert(p, d);
                }
                None => outstanding.push(p),
            }
        }
        outstanding_log.push(outstanding.len());
        if outstanding.is_empty() {
            return Ok(Factorization {
                left: Arrow::new_unchecked(f.dom.clone(), e.clone(), l),
                right: LiftingFunction {
                    carrier: right,
                    gens,
                    table,
                },
                cells,
                attached_per_round: attached,
            });
        }
        if round >= cfg.max_rounds {
            return Err(SoaError::BudgetExhausted {
                rounds: round,
                outstanding: outstanding_log,
            });
        }
        round += 1;
        let prefixes: Vec<String> = (0..outstanding.len()).map(|k| cell_prefix(round, k)).collect();
        let specs: Vec<Attachment<'_, C>> = outstanding
            .iter()
            .zip(&prefixes)
            .map(|(p, prefix)| Attachment {
                left: &gens[p.j],
                attach: &p.a,
                prefix: prefix.clone(),
            })
            .collect();
        let glued = attach_cells(&*e, &specs)?;
        let new_r = cocone_map(&*glued.object, &glued.from_base, &r, &glued.from_cells, outstanding.iter().map(|p| &p.b));
        table = table
            .into_iter()
            .map(|(p, d)| {
                (
                    Problem {
                        j: p.j,
                        a: p.a.then(&glued.from_base),
                        b: p.b,
                    },
                    d.then(&glued.from_base),
                )
            })
            .collect();
        for (k, (p, cell)) in outstanding.iter().zip(&glued.from_cells).enumerate() {
            table.insert(
                Problem {
                    j: p.j,
                    a: p.a.then(&glued.from_base),
                    b: p.b.clone(),
                },
                cell.clone(),
            );
            cells.push(CellRecord {
                round,
                ordinal: k,
                generator: p.j,
                attach: p.a.clone(),
                bottom: p.b.clone(),
                prefix: prefixes[k].clone(),
            });
        }
        attached.push(outstanding.len());
        l = l.then(&glued.from_base);
        r = new_r;
        e = glued.object;
    }
}

/// Number of lifting problems of `f` against `gens`, counted bottom first
/// without storing them.
pub fn count_problems<C: Instance>(f: &Arrow<C>, gens: &[Arrow<C>]) -> usize {
    let mut n = 0;
    for j in gens {
        HomSearch::new(&*j.cod, &*f.cod).for_each(|b| {
            n += HomSearch::new(&*j.dom, &*f.dom).over(&f.hom, &j.hom.then(b)).count();
            ControlFlow::Continue(())
        });
    }
    n
}

/// The map out of an attachment induced by a map on the base and one per cell.
fn cocone_map<'a, C: Instance>(
    object: &C,
    from_base: &Hom,
    base_map: &Hom,
    from_cells: &[Hom],
    cell_maps: impl Iterator<Item = &'a Hom>,
) -> Hom {
    let mut parts: Vec<Vec<usize>> = (0..object.sorts()).map(|s| vec![usize::MAX; object.len(s)]).collect();
    for (s, part) in from_base.parts().iter().enumerate() {
        for (x, &q) in part.iter().enumerate() {
            parts[s][q] = base_map.image(s, x);
        }
    }
    for (inj, m) in from_cells.iter().zip(cell_maps) {
        for (s, part) in inj.parts().iter().enumerate() {
            for (x, &q) in part.iter().enumerate() {
                parts[s][q] = m.image(s, x);
            }
        }
    }
    Hom::from_parts(parts)
}

/// Rebuilds `E` from `X` by re-attaching the recorded cells round by round.
pub fn replay_cells<C: Presheaf>(x: &Arc<C>, gens: &[Arrow<C>], cells: &[CellRecord]) -> Result<(Arc<C>, Hom), Error> {
    let mut e = x.clone();
    let mut l = Hom::identity(&**x);
    let mut start = 0;
    while start < cells.len() {
        let round = cells[start].round;
        let end = start + cells[start..].iter().take_while(|c| c.round == round).count();
        let specs: Vec<Attachment<'_, C>> = cells[start..end]
            .iter()
            .map(|c| Attachment {
                left: &gens[c.generator],
                attach: &c.attach,
                prefix: c.prefix.clone(),
            })
            .collect();
        let glued = attach_cells(&*e, &specs)?;
        l = l.then(&glued.from_base);
        e = glued.object;
        start = end;
    }
    Ok((e, l))
}

/// Comparison of a candidate algebra with a universal one.
#[derive(Clone, Debug)]
pub struct Candidate<C> {
    pub structure: LiftingFunction<C>,
    /// `X -> E'`
    pub top: Hom,
    /// `Y -> Y'`
    pub bottom: Hom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessVerdict {
    pub exists: bool,
    pub unique: bool,
    /// Mediators found, capped at `cap`.
    pub mediators: usize,
    /// Maps making the squares commute, ignoring fillers.
    pub commuting_maps: usize,
}

/// Mediators `m: E -> E'` with `l then m = top`, `g then bottom = m then g'` that preserve fillers.
pub fn check_free_algebra<C: Instance>(
    left: &Arrow<C>,
    universal: &LiftingFunction<C>,
    candidate: &Candidate<C>,
    cap: usize,
) -> FreenessVerdict {
    let e2 = &candidate.structure.carrier;
    let search = HomSearch::new(&*universal.carrier.dom, &*e2.dom)
        .extending(&left.hom, &candidate.top)
        .over(&e2.hom, &universal.carrier.hom.then(&candidate.bottom));
    let mut commuting = 0;
    let mut good = 0;
    search.for_each(|m| {
        commuting += 1;
        let sq = AlgebraSquare {
            top: m.clone(),
            bottom: candidate.bottom.clone(),
        };
        if is_algebra_morphism(&sq, universal, &candidate.structure) {
            good += 1;
        }
        if good >= cap && commuting >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    FreenessVerdict {
        exists: good > 0,
        unique: good == 1,
        mediators: good,
        commuting_maps: commuting,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;
    use crate::lifting::{codiagonal, has_rlp, j_edge, j_point};
    use crate::ssset::{horn, horns_up_to, pad_arrow, standard_simplex, to_terminal, SemiSimplicialSet};

    fn graph(nodes: &[&str], edges: &[(&str, &str, &str)]) -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(nodes.to_vec(), edges.to_vec()).unwrap())
    }

    fn to_point(x: &Arc<FiniteGraph>) -> Arrow<FiniteGraph> {
        let p = Arc::new(FiniteGraph::point());
        Arrow::new(x.clone(), p, Hom::from_parts(vec![vec![0; x.nodes().len()], vec![]])).unwrap()
    }

    fn to_loop(x: &Arc<FiniteGraph>) -> Arrow<FiniteGraph> {
        let t = Arc::new(FiniteGraph::terminal());
        Arrow::new(x.clone(), t, Hom::from_parts(vec![vec![0; x.nodes().len()], vec![0; x.edges().len()]])).unwrap()
    }

    fn gph_gens() -> Arc<Vec<Arrow<FiniteGraph>>> {
        Arc::new(vec![j_point()])
    }

    #[test]
    fn identity_tables_are_forced() {
        let x = graph(&["a", "b"], &[("e", "a", "b")]);
        let gens = Arc::new(vec![j_point(), j_edge()]);
        let made = make_lifting_function(&Arrow::identity(x.clone()), gens.clone(), None, Choice::First, Exec::Sequential).unwrap();
        assert_eq!(made, identity_structure(x, gens));
        assert!(made.is_valid(Exec::Sequential));
        for (p, d) in made.table() {
            assert_eq!(*d, p.b);
        }
    }

    #[test]
    fn horn_table_on_simplex() {
        let j = Arc::new(vec![pad_arrow(&horn(2, 1).unwrap(), 2)]);
        let d2 = Arc::new(standard_simplex(2).unwrap());
        let phi = make_lifting_function(&to_terminal(&d2), j, None, Choice::First, Exec::Sequential).unwrap();
        // Λ^1[2] -> Δ[2] needs edges 01 and 12 to share vertex 1; only the identity shape does
        assert_eq!(phi.len(), 1);
        assert!(phi.is_valid(Exec::Sequential));
    }

    #[test]
    fn codiagonal_table_is_total() {
        let gens = Arc::new(vec![j_point(), j_edge()]);
        let phi = make_lifting_function(&codiagonal(), gens, None, Choice::First, Exec::Sequential).unwrap();
        assert_eq!(phi.len(), 1);
        assert!(phi.is_valid(Exec::Sequential));
    }

    #[test]
    fn non_fibration_is_reported() {
        let x = graph(&["a"], &[]);
        let err = make_lifting_function(&to_loop(&x), Arc::new(vec![j_edge()]), None, Choice::First, Exec::Sequential).unwrap_err();
        match err {
            AlgebraError::NotAFibration { generator, square } => {
                assert_eq!(generator, 0);
                assert!(square.search().first().is_none());
            }
            other => panic!("{other:?}"),
        }
        let err = make_lifting_function(&to_loop(&graph(&["a", "b"], &[])), gph_gens(), Some(0), Choice::First, Exec::Sequential);
        assert!(matches!(err, Err(AlgebraError::TooManyProblems { limit: 0 })));
    }

    #[test]
    fn verify_reports_mutations() {
        let x = graph(&["a", "b"], &[]);
        let phi = make_lifting_function(&to_point(&x), gph_gens(), None, Choice::First, Exec::Sequential).unwrap();
        let (p, _) = phi.table().iter().next().unwrap();
        let bad = phi.with_entry(p.clone(), Hom::from_parts(vec![vec![7], vec![]]));
        assert_eq!(bad.verify(Exec::Sequential), vec![TableViolation::InvalidFiller(p.clone())]);
        let mut t = phi.table().clone();
        t.clear();
        let empty = LiftingFunction::from_table(phi.carrier.clone(), phi.gens.clone(), t);
        assert_eq!(empty.verify(Exec::Sequential), vec![TableViolation::Missing(p.clone())]);
    }

    #[test]
    fn different_choices_are_not_morphisms() {
        let x = graph(&["a", "b"], &[]);
        let f = to_point(&x);
        let first = make_lifting_function(&f, gph_gens(), None, Choice::First, Exec::Sequential).unwrap();
        let last = make_lifting_function(&f, gph_gens(), None, Choice::Last, Exec::Sequential).unwrap();
        assert_ne!(first, last);
        let id = AlgebraSquare {
            top: Hom::identity(&*x),
            bottom: Hom::identity(&*f.cod),
        };
        assert!(is_algebra_morphism(&id, &first, &first));
        assert!(matches!(algebra_morphism_violation(&id, &first, &last), Some(MorphismViolation::Moved(_))));
    }

    #[test]
    fn vertical_composition_hand_trace() {
        // X = {x0, x1} -> Y = {y0, y1} -> Z = •, J = {∅ -> •}
        let x = graph(&["x0", "x1"], &[]);
        let y = graph(&["y0", "y1"], &[]);
        let f = Arrow::new(x.clone(), y.clone(), Hom::from_parts(vec![vec![1, 0], vec![]])).unwrap();
        let g = to_point(&y);
        let pf = make_lifting_function(&f, gph_gens(), None, Choice::First, Exec::Sequential).unwrap();
        let pg = make_lifting_function(&g, gph_gens(), None, Choice::First, Exec::Sequential).unwrap();
        let composite = vertical_compose(&pf, &pg).unwrap();
        assert!(composite.is_valid(Exec::Sequential));
        // φ_g picks y0; its only lift along f is x1
        assert_eq!(composite.table().values().next().unwrap(), &Hom::from_parts(vec![vec![1], vec![]]));
        let unit_left = vertical_compose(&identity_structure(x.clone(), gph_gens()), &vertical_compose(&pf, &pg).unwrap()).unwrap();
        assert_eq!(unit_left.table(), composite.table());
        let unit_right = vertical_compose(&composite, &identity_structure(g.cod.clone(), gph_gens())).unwrap();
        assert_eq!(unit_right.table(), composite.table());
    }

    #[test]
    fn soa_on_point_terminates_with_one_node() {
        let f = j_point();
        for mode in [SoaMode::Free, SoaMode::ReuseExisting] {
            let cfg = SoaConfig {
                mode,
                ..SoaConfig::default()
            };
            let out = soa_factorize(&f, gph_gens(), cfg).unwrap();
            assert_eq!(out.left.cod.nodes(), &["r1.0.*"]);
            assert_eq!(out.attached_per_round, vec![1]);
            assert_eq!(out.left.hom.then(&out.right.carrier.hom), f.hom);
            assert!(out.right.is_valid(Exec::Sequential));
            let (e, l) = replay_cells(&f.dom, &gph_gens(), &out.cells).unwrap();
            assert_eq!(*e, *out.left.cod);
            assert_eq!(l, out.left.hom);
        }
    }

    #[test]
    fn soa_without_problems_is_identity() {
        let x = graph(&["a"], &[]);
        let f = to_point(&x);
        let out = soa_factorize(&f, Arc::new(vec![j_edge()]), SoaConfig::default()).unwrap();
        assert!(out.cells.is_empty());
        assert!(out.right.is_empty());
        assert_eq!(out.left.hom, Hom::identity(&*x));
    }

    #[test]
    fn soa_zero_budget() {
        let err = soa_factorize(&j_point(), gph_gens(), SoaConfig { max_rounds: 0, ..SoaConfig::default() }).unwrap_err();
        assert_eq!(err, SoaError::BudgetExhausted { rounds: 0, outstanding: vec![1] });
    }

    #[test]
    fn soa_edges_between_pairs() {
        let x = graph(&["a", "b"], &[]);
        let f = to_loop(&x);
        let gens = Arc::new(vec![j_edge()]);
        let out = soa_factorize(&f, gens.clone(), SoaConfig::default()).unwrap();
        // one new edge for each ordered pair of nodes
        assert_eq!(out.left.cod.edges().len(), 4);
        assert!(has_rlp(&out.right.carrier, &gens, Exec::Sequential).holds);
        assert!(out.right.is_valid(Exec::Sequential));
    }

    #[test]
    fn horn_replacement_exhausts_budget() {
        let l = horn(2, 1).unwrap();
        let x: Arc<SemiSimplicialSet> = l.dom.clone();
        let x = Arc::new(x.padded(2));
        let gens = Arc::new(horns_up_to(2, 2).unwrap());
        for (mode, max_rounds) in [(SoaMode::Free, 3), (SoaMode::ReuseExisting, 2)] {
            let cfg = SoaConfig {
                max_rounds,
                mode,
                ..SoaConfig::default()
            };
            match soa_factorize(&to_terminal(&x), gens.clone(), cfg) {
                Err(SoaError::BudgetExhausted { rounds, outstanding }) => {
                    assert_eq!(rounds, max_rounds);
                    assert_eq!(outstanding.len(), max_rounds + 1);
                    assert!(outstanding.windows(2).all(|w| w[0] < w[1]), "{mode:?}: {outstanding:?}");
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn free_algebra_on_point() {
        let f = j_point();
        let out = soa_factorize(&f, gph_gens(), SoaConfig::default()).unwrap();
        let itself = Candidate {
            structure: out.right.clone(),
            top: out.left.hom.clone(),
            bottom: Hom::identity(&*f.cod),
        };
        let v = check_free_algebra(&out.left, &out.right, &itself, 4);
        assert!(v.exists && v.unique);

        // any algebra with points: the mediator follows its chosen node
        let y2 = graph(&["u", "v"], &[]);
        let phi2 = make_lifting_function(&to_point(&y2), gph_gens(), None, Choice::Last, Exec::Sequential).unwrap();
        let cand = Candidate {
            structure: phi2,
            top: Hom::from_parts(vec![vec![], vec![]]),
            bottom: Hom::identity(&*f.cod),
        };
        let v = check_free_algebra(&out.left, &out.right, &cand, 4);
        assert_eq!((v.exists, v.unique, v.mediators, v.commuting_maps), (true, true, 1, 2));
    }

    #[test]
    fn symmetric_candidate_breaks_uniqueness() {
        let e = graph(&["p", "q"], &[]);
        let left = Arrow::new(Arc::new(FiniteGraph::empty()), e.clone(), Hom::from_parts(vec![vec![], vec![]])).unwrap();
        let phi = make_lifting_function(&to_point(&e), gph_gens(), None, Choice::First, Exec::Sequential).unwrap();
        let e2 = graph(&["u", "v"], &[]);
        let phi2 = make_lifting_function(&to_point(&e2), gph_gens(), None, Choice::First, Exec::Sequential).unwrap();
        let cand = Candidate {
            structure: phi2,
            top: Hom::from_parts(vec![vec![], vec![]]),
            bottom: Hom::identity(&FiniteGraph::point()),
        };
        let v = check_free_algebra(&left, &phi, &cand, 8);
        assert!(v.exists);
        assert!(!v.unique);
        assert_eq!(v.mediators, 2);
    }
}
