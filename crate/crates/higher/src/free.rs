//! Comparison of the type-theoretically free groupoid on a graph with the
//! algebraically free one, at desk scale.
//!
//! Dimension-1 terms of `T(graph)` are generated level by level from
//! generators and reflexivities with inverses and `c_l` composites, and
//! deduplicated by kernel normal form. Each term has two readings as a
//! word: structurally, from how it was built, and by reading its normal form
//! back. Groupoid laws instantiated on sampled terms supply the propositional
//! equalities.

use std::collections::HashMap;
use std::rc::Rc;

use mltt_core::stdlib::{corpus, DerivedTerm};
use mltt_core::{Checker, CheckerConfig, KernelError, Telescope, Term, Type};
use mltt_semantics::{Record, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::globular::GlobularSet;
use crate::theory::{build_theory, Theory, TheoryError};
use crate::words::{compose_words, count_reduced_words, invert_word, reduced_words, Letter, Word};

pub const DEFAULT_SEED: u64 = 0x5eed_2008;

#[derive(Clone, Debug)]
pub struct FreeConfig {
    /// Longest reduced word that must be hit.
    pub word_len: usize,
    /// Deepest term generated.
    pub depth: usize,
    /// Terms kept per word.
    pub reps: usize,
    /// Sampled instances per law.
    pub law_samples: usize,
    pub seed: u64,
    pub checker: CheckerConfig,
}

impl Default for FreeConfig {
    fn default() -> Self {
        FreeConfig {
            word_len: 4,
            depth: 6,
            reps: 2,
            law_samples: 24,
            seed: DEFAULT_SEED,
            checker: CheckerConfig::default(),
        }
    }
}

/// How a dimension-1 term was built. `Comp(p, q)` is `p` followed by `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Path {
    Gen(usize),
    Refl(usize),
    Inv(Rc<Path>),
    Comp(Rc<Path>, Rc<Path>),
}

impl Path {
    pub fn depth(&self) -> usize {
        match self {
            Path::Gen(_) | Path::Refl(_) => 1,
            Path::Inv(p) => 1 + p.depth(),
            Path::Comp(p, q) => 1 + p.depth().max(q.depth()),
        }
    }
}

/// The structural word of a path.
pub fn path_word(g: &GlobularSet, p: &Path) -> Word {
    match p {
        Path::Gen(e) => Word::letter(
            g,
            Letter {
                edge: *e,
                inverse: false,
            },
        ),
        Path::Refl(v) => Word::empty(*v),
        Path::Inv(p) => invert_word(&path_word(g, p)),
        Path::Comp(p, q) => compose_words(&path_word(g, q), &path_word(g, p)).expect("composable path"),
    }
}

/// Builds and reads back dimension-1 terms of `T(graph)`.
pub struct Evaluator<'g> {
    g: &'g GlobularSet,
    pub theory: Theory,
    inv: DerivedTerm,
    comp_l: DerivedTerm,
    comp_r: DerivedTerm,
    /// `e`, `assoc`, `unit_l`, `unit_r`, `inv_l`, `inv_r`, `inv_involutive`.
    laws: Vec<DerivedTerm>,
    edges: HashMap<String, usize>,
    vertices: HashMap<String, usize>,
    cfg: CheckerConfig,
}

impl<'g> Evaluator<'g> {
    pub fn new(g: &'g GlobularSet, cfg: CheckerConfig) -> Result<Self, TheoryError> {
        let theory = build_theory(g, cfg)?;
        let x = Type::base(&theory.base);
        let mut items: HashMap<String, DerivedTerm> = corpus(&x, None, false).into_iter().map(|d| (d.name.clone(), d)).collect();
        let mut take = |n: &str| items.remove(n).expect("corpus item");
        let (inv, comp_l, comp_r) = (take("inv"), take("c_l"), take("c_r"));
        let laws = ["e", "assoc", "unit_l", "unit_r", "inv_l", "inv_r", "inv_involutive"].map(&mut take).to_vec();
        let edges = (0..g.count(1)).map(|i| (g.cell(1, i).name.clone(), i)).collect();
        let vertices = (0..g.count(0)).map(|i| (g.cell(0, i).name.clone(), i)).collect();
        Ok(Evaluator {
            g,
            theory,
            inv,
            comp_l,
            comp_r,
            laws,
            edges,
            vertices,
            cfg,
        })
    }

    pub fn checker(&self) -> Checker<'_> {
        Checker::new(&self.theory.signature, self.cfg)
    }

    fn vertex(&self, v: usize) -> Term {
        Term::constant(&self.g.cell(0, v).name)
    }

    /// The kernel term of a path.
    pub fn term(&self, p: &Path) -> Term {
        match p {
            Path::Gen(e) => Term::constant(&self.g.cell(1, *e).name),
            Path::Refl(v) => Term::refl(self.vertex(*v)),
            Path::Inv(q) => {
                let w = path_word(self.g, q);
                self.inv.apply(&[self.vertex(w.src), self.vertex(w.tgt), self.term(q)])
            }
            Path::Comp(p1, p2) => {
                let (w1, w2) = (path_word(self.g, p1), path_word(self.g, p2));
                self.comp_l.apply(&[
                    self.vertex(w1.src),
                    self.vertex(w1.tgt),
                    self.vertex(w2.tgt),
                    self.term(p1),
                    self.term(p2),
                ])
            }
        }
    }

    /// Reads a normal form back as a word: generators are letters,
    /// reflexivities are empty, and stuck inverses and composites are
    /// recognized by rebuilding them from their parts.
    pub fn read_back(&self, nf: &Term) -> Option<Word> {
        match nf {
            Term::Const(n) => self.edges.get(&**n).map(|&e| {
                Word::letter(
                    self.g,
                    Letter {
                        edge: e,
                        inverse: false,
                    },
                )
            }),
            Term::Refl(a) => match &**a {
                Term::Const(n) => self.vertices.get(&**n).map(|&v| Word::empty(v)),
                _ => None,
            },
            Term::J { left, right, path, .. } => {
                let cand = self.inv.apply(&[(**left).clone(), (**right).clone(), (**path).clone()]);
                (cand == *nf).then(|| self.read_back(path).map(|w| invert_word(&w)))?
            }
            Term::App(f, q) => match &**f {
                Term::App(j, z) => {
                    let Term::J { left, right, path, .. } = &**j else { return None };
                    let args = [(**left).clone(), (**right).clone(), (**z).clone(), (**path).clone(), (**q).clone()];
                    if self.comp_l.apply(&args) != *nf {
                        return None;
                    }
                    compose_words(&self.read_back(q)?, &self.read_back(path)?).ok()
                }
                Term::J { left, right, path, .. } => {
                    // c_r x y z p q eliminates q and is applied to p
                    let p = q;
                    let wp = self.read_back(p)?;
                    let args = [self.vertex(wp.src), (**left).clone(), (**right).clone(), (**p).clone(), (**path).clone()];
                    if self.comp_r.apply(&args) != *nf {
                        return None;
                    }
                    compose_words(&self.read_back(path)?, &wp).ok()
                }
                _ => None,
            },
            _ => None,
        }
    }

    pub fn normalize(&self, t: &Term) -> Result<Term, KernelError> {
        self.checker().normalize_term(t)
    }
}

/// One generated term.
#[derive(Clone, Debug)]
pub struct Generated {
    pub path: Rc<Path>,
    pub word: Word,
    pub nf: Term,
}

#[derive(Clone, Debug, Default)]
pub struct FreeReport {
    pub graph: String,
    pub word_len: usize,
    pub depth: usize,
    /// Reduced words of length at most `word_len`.
    pub words: usize,
    pub hit: usize,
    pub missing: Vec<String>,
    /// Terms kept, one normal form each.
    pub terms: usize,
    pub law_instances: usize,
    pub soundness: Vec<String>,
    pub injectivity: Vec<String>,
    pub functoriality: Vec<String>,
    pub nf_consistency: Vec<String>,
    pub kernel: Vec<String>,
}

impl FreeReport {
    pub fn surjective(&self) -> bool {
        self.hit == self.words
    }

    pub fn passed(&self) -> bool {
        self.surjective()
            && self.soundness.is_empty()
            && self.injectivity.is_empty()
            && self.functoriality.is_empty()
            && self.nf_consistency.is_empty()
            && self.kernel.is_empty()
    }

    pub fn to_report(&self) -> Report {
        let id = format!("L{}_D{}", self.word_len, self.depth);
        let mut r = Report::new();
        let mut rec = |check: &str, fails: &[String]| {
            let mut x = Record::new(check, &id, &self.graph, fails.is_empty());
            if let Some(f) = fails.first() {
                x = x.with_detail(format!("{} failures, first: {f}", fails.len()));
            }
            r.push(x);
        };
        rec("surjectivity", &self.missing);
        rec("soundness", &self.soundness);
        rec("injectivity", &self.injectivity);
        rec("functoriality", &self.functoriality);
        rec("nf_consistency", &self.nf_consistency);
        rec("law_kernel", &self.kernel);
        r
    }
}

/// Estimated number of terms a run keeps: reduced words × representatives
/// × depth.
pub fn estimate_cells(g: &GlobularSet, word_len: usize, depth: usize, reps: usize) -> u128 {
    count_reduced_words(g, word_len)
        .saturating_mul(reps as u128)
        .saturating_mul(depth as u128)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Runs the comparison on a graph named `name`.
pub fn compare_free(name: &str, g: &GlobularSet, cfg: &FreeConfig) -> Result<FreeReport, TheoryError> {
    let ev = Evaluator::new(g, cfg.checker)?;
    let mut rep = FreeReport {
        graph: name.to_owned(),
        word_len: cfg.word_len,
        depth: cfg.depth,
        ..FreeReport::default()
    };
    let (terms, by_nf) = generate(&ev, g, cfg, &mut rep);
    rep.terms = terms.len();

    for t in &terms {
        match ev.read_back(&t.nf) {
            Some(w) if w == t.word => {}
            other => rep.functoriality.push(format!(
                "{} reads back as {}",
                t.word.display(g),
                other.map_or("nothing".into(), |w| w.display(g))
            )),
        }
    }

    let all = reduced_words(g, cfg.word_len);
    rep.words = all.len();
    let hit: std::collections::HashSet<&Word> = terms.iter().map(|t| &t.word).collect();
    for w in &all {
        if hit.contains(w) {
            rep.hit += 1;
        } else {
            rep.missing.push(w.display(g));
        }
    }

    laws(&ev, g, cfg, &terms, by_nf, &mut rep);
    Ok(rep)
}

/// Level-wise generation, keeping at most `reps` terms per word and one
/// term per normal form.
fn generate(ev: &Evaluator<'_>, g: &GlobularSet, cfg: &FreeConfig, rep: &mut FreeReport) -> (Vec<Generated>, HashMap<Term, usize>) {
    let mut terms: Vec<Generated> = Vec::new();
    let mut by_nf: HashMap<Term, usize> = HashMap::new();
    let mut per_word: HashMap<Word, usize> = HashMap::new();
    let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); g.count(0)];
    let mut consider = |path: Path, word: Word, terms: &mut Vec<Generated>, by_src: &mut Vec<Vec<usize>>, rep: &mut FreeReport| {
        if word.len() > cfg.word_len || per_word.get(&word).copied().unwrap_or(0) >= cfg.reps {
            return;
        }
        let nf = match ev.normalize(&ev.term(&path)) {
            Ok(nf) => nf,
            Err(e) => {
                rep.kernel.push(format!("normalizing {}: {e}", word.display(g)));
                return;
            }
        };
        if let Some(&k) = by_nf.get(&nf) {
            if terms[k].word != word {
                rep.nf_consistency.push(format!(
                    "{} and {} share a normal form",
                    terms[k].word.display(g),
                    word.display(g)
                ));
            }
            return;
        }
        *per_word.entry(word.clone()).or_default() += 1;
        by_nf.insert(nf.clone(), terms.len());
        by_src[word.src].push(terms.len());
        terms.push(Generated {
            path: Rc::new(path),
            word,
            nf,
        });
    };
    for e in 0..g.count(1) {
        let p = Path::Gen(e);
        let w = path_word(g, &p);
        consider(p, w, &mut terms, &mut by_src, rep);
    }
    for v in 0..g.count(0) {
        consider(Path::Refl(v), Word::empty(v), &mut terms, &mut by_src, rep);
    }
    let mut level_start = 0;
    for depth in 2..=cfg.depth {
        let level_end = terms.len();
        if level_start == level_end {
            break;
        }
        // inverses of the previous level
        for k in level_start..level_end {
            let t = terms[k].clone();
            consider(Path::Inv(t.path.clone()), invert_word(&t.word), &mut terms, &mut by_src, rep);
        }
        // composites with at least one factor from the previous level
        for k1 in 0..level_end {
            let (p1, w1) = (terms[k1].path.clone(), terms[k1].word.clone());
            let seconds: Vec<usize> = by_src[w1.tgt].iter().copied().filter(|&k| k < level_end).collect();
            for k2 in seconds {
                if k1 < level_start && k2 < level_start {
                    continue;
                }
                let w2 = &terms[k2].word;
                // cheap length test before composing
                let overlap = w1.letters.iter().rev().zip(&w2.letters).take_while(|(a, b)| **b == a.inv()).count();
                if w1.len() + w2.len() - 2 * overlap > cfg.word_len {
                    continue;
                }
                let w = compose_words(w2, &w1).expect("composable");
                let p = Path::Comp(p1.clone(), terms[k2].path.clone());
                consider(p, w, &mut terms, &mut by_src, rep);
            }
        }
        level_start = level_end;
        let _ = depth;
    }
    (terms, by_nf)
}

/// Instantiates each law on sampled terms, checks the instances, compares
/// the words of the two sides and closes the relation they generate.
fn laws(ev: &Evaluator<'_>, g: &GlobularSet, cfg: &FreeConfig, terms: &[Generated], mut by_nf: HashMap<Term, usize>, rep: &mut FreeReport) {
    if terms.is_empty() {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ck = ev.checker();
    let empty = Telescope::new();
    let v = |i: usize| Term::constant(&g.cell(0, i).name);
    let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); g.count(0)];
    for (k, t) in terms.iter().enumerate() {
        by_src[t.word.src].push(k);
    }
    let mut nodes: Vec<Option<Word>> = terms.iter().map(|t| Some(t.word.clone())).collect();
    let mut uf = UnionFind((0..terms.len()).collect());
    let pick_from = |rng: &mut ChaCha8Rng, src: usize| -> Option<usize> {
        let c = &by_src[src];
        (!c.is_empty()).then(|| c[rng.gen_range(0..c.len())])
    };
    for (li, law) in ev.laws.iter().enumerate() {
        for _ in 0..cfg.law_samples {
            let f = rng.gen_range(0..terms.len());
            let wf = &terms[f].word;
            // e and assoc take further composable factors
            let args = match law.name.as_str() {
                "e" => {
                    let Some(q) = pick_from(&mut rng, wf.tgt) else { continue };
                    let wq = &terms[q].word;
                    vec![v(wf.src), v(wf.tgt), v(wq.tgt), terms[f].nf.clone(), terms[q].nf.clone()]
                }
                "assoc" => {
                    let Some(h2) = pick_from(&mut rng, wf.tgt) else { continue };
                    let w2 = &terms[h2].word;
                    let Some(h3) = pick_from(&mut rng, w2.tgt) else { continue };
                    let w3 = &terms[h3].word;
                    vec![
                        v(wf.src),
                        v(wf.tgt),
                        v(w2.tgt),
                        v(w3.tgt),
                        terms[f].nf.clone(),
                        terms[h2].nf.clone(),
                        terms[h3].nf.clone(),
                    ]
                }
                _ => vec![v(wf.src), v(wf.tgt), terms[f].nf.clone()],
            };
            rep.law_instances += 1;
            let label = format!("{}#{li}", law.name);
            let term = law.apply(&args);
            let statement = law.statement_at(&args);
            if let Err(e) = ck.check_type(&empty, &term, &statement) {
                rep.kernel.push(format!("{label}: {e}"));
                continue;
            }
            let Type::Id { left, right, .. } = &statement else {
                rep.kernel.push(format!("{label}: statement is not an identity type"));
                continue;
            };
            let mut side = |t: &Term, rep: &mut FreeReport| -> Option<usize> {
                let nf = match ck.normalize_term(t) {
                    Ok(nf) => nf,
                    Err(e) => {
                        rep.kernel.push(format!("{label}: {e}"));
                        return None;
                    }
                };
                Some(*by_nf.entry(nf.clone()).or_insert_with(|| {
                    nodes.push(ev.read_back(&nf));
                    uf.0.push(uf.0.len());
                    nodes.len() - 1
                }))
            };
            let (Some(a), Some(b)) = (side(left, rep), side(right, rep)) else { continue };
            match (&nodes[a], &nodes[b]) {
                (Some(wa), Some(wb)) if wa == wb => {}
                (wa, wb) => rep.soundness.push(format!(
                    "{label}: sides read as {} and {}",
                    wa.as_ref().map_or("nothing".into(), |w| w.display(g)),
                    wb.as_ref().map_or("nothing".into(), |w| w.display(g))
                )),
            }
            uf.union(a, b);
        }
    }
    let mut class_word: HashMap<usize, Option<Word>> = HashMap::new();
    for (k, node) in nodes.iter().enumerate() {
        let r = uf.find(k);
        match class_word.get(&r) {
            None => {
                class_word.insert(r, node.clone());
            }
            Some(w) if w == node => {}
            Some(w) => rep.injectivity.push(format!(
                "related terms read as {} and {}",
                w.as_ref().map_or("nothing".into(), |w| w.display(g)),
                node.as_ref().map_or("nothing".into(), |w| w.display(g))
            )),
        }
    }
}
