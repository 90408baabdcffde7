//! Reduced words over a graph: the algebraically free groupoid.

use std::fmt;

use thiserror::Error;

use crate::globular::GlobularSet;

/// An edge traversed forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub edge: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter {
            edge: self.edge,
            inverse: !self.inverse,
        }
    }

    pub fn src(self, g: &GlobularSet) -> usize {
        if self.inverse {
            g.tgt(1, self.edge)
        } else {
            g.src(1, self.edge)
        }
    }

    pub fn tgt(self, g: &GlobularSet) -> usize {
        self.inv().src(g)
    }
}

/// A path of letters from `src` to `tgt`, in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub src: usize,
    pub tgt: usize,
    pub letters: Vec<Letter>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("letters do not form a path at position {0}")]
    Broken(usize),
    #[error("cannot compose: the first word ends at {0}, the second starts at {1}")]
    Endpoints(usize, usize),
}

impl Word {
    pub fn empty(at: usize) -> Word {
        Word {
            src: at,
            tgt: at,
            letters: Vec::new(),
        }
    }

    pub fn letter(g: &GlobularSet, l: Letter) -> Word {
        Word {
            src: l.src(g),
            tgt: l.tgt(g),
            letters: vec![l],
        }
    }

    /// Checks that consecutive letters meet.
    pub fn new(g: &GlobularSet, src: usize, letters: Vec<Letter>) -> Result<Word, WordError> {
        let mut at = src;
        for (i, l) in letters.iter().enumerate() {
            if l.src(g) != at {
                return Err(WordError::Broken(i));
            }
            at = l.tgt(g);
        }
        Ok(Word { src, tgt: at, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[1] != w[0].inv())
    }

    pub fn display(&self, g: &GlobularSet) -> String {
        if self.letters.is_empty() {
            return format!("1_{}", g.cell(0, self.src).name);
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                let n = &g.cell(1, l.edge).name;
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect();
        parts.join(".")
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}{}", self.edge, if self.inverse { "^-1" } else { "" })
    }
}

/// Cancels adjacent inverse letters until none remain.
pub fn reduce_word(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word {
        src: w.src,
        tgt: w.tgt,
        letters: out,
    }
}

/// `w2 ∘ w1`: first `w1`, then `w2`, reduced.
pub fn compose_words(w2: &Word, w1: &Word) -> Result<Word, WordError> {
    if w1.tgt != w2.src {
        return Err(WordError::Endpoints(w1.tgt, w2.src));
    }
    let mut letters = w1.letters.clone();
    letters.extend_from_slice(&w2.letters);
    Ok(reduce_word(&Word {
        src: w1.src,
        tgt: w2.tgt,
        letters,
    }))
}

pub fn invert_word(w: &Word) -> Word {
    reduce_word(&Word {
        src: w.tgt,
        tgt: w.src,
        letters: w.letters.iter().rev().map(|l| l.inv()).collect(),
    })
}

/// Every reduced word of length at most `max_len`, shortest first.
pub fn reduced_words(g: &GlobularSet, max_len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = (0..g.count(0)).map(Word::empty).collect();
    let mut frontier = out.clone();
    let letters: Vec<Letter> = (0..g.count(1))
        .flat_map(|e| [false, true].map(|inverse| Letter { edge: e, inverse }))
        .collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if l.src(g) != w.tgt || w.letters.last() == Some(&l.inv()) {
                    continue;
                }
                let mut nw = w.clone();
                nw.letters.push(l);
                nw.tgt = l.tgt(g);
                next.push(nw);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Number of reduced words of length at most `max_len`, without listing
/// them; saturates instead of overflowing.
pub fn count_reduced_words(g: &GlobularSet, max_len: usize) -> u128 {
    let letters: Vec<Letter> = (0..g.count(1))
        .flat_map(|e| [false, true].map(|inverse| Letter { edge: e, inverse }))
        .collect();
    // words ending in each letter
    let mut ending: Vec<u128> = letters.iter().map(|_| 1).collect();
    let mut total = g.count(0) as u128;
    for len in 1..=max_len {
        if len > 1 {
            let mut next = vec![0u128; letters.len()];
            for (j, l) in letters.iter().enumerate() {
                for (i, k) in letters.iter().enumerate() {
                    if k.tgt(g) == l.src(g) && *l != k.inv() {
                        next[j] = next[j].saturating_add(ending[i]);
                    }
                }
            }
            ending = next;
        }
        total = ending.iter().fold(total, |a, &b| a.saturating_add(b));
    }
    total
}
