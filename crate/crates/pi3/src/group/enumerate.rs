//! Coset enumeration over the trivial subgroup.
//!
//! HLT-style enumeration: every relator is scanned from every coset, gaps are
//! filled with new cosets, and coincidences are merged through a union-find
//! with a pending queue.  Table reads resolve through the union-find lazily,
//! so stale entries created by merges are harmless.
//!
//! The live-coset cap makes the procedure total: presentations of infinite
//! (or merely too large) groups fail with a resource error instead of
//! diverging.

use super::presentation::{Letter, Presentation, Word};
use super::FiniteGroup;
use thiserror::Error;

/// Hard bound on the order of a group we will build full tables for.
/// Multiplication tables are quadratic in the order.
pub const MAX_TABLE_ORDER: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("coset limit exceeded: more than {max} live cosets (group may be infinite or too large)")]
    CosetLimit { max: usize },
    #[error("group order {order} exceeds the supported bound {max} for full multiplication tables")]
    OrderTooLarge { order: usize, max: usize },
}

struct Enumerator<'a> {
    pres: &'a Presentation,
    cols: usize,
    table: Vec<Vec<Option<u32>>>,
    parent: Vec<u32>,
    live: usize,
    max_live: usize,
    pending: Vec<u32>,
}

fn col_of(l: Letter) -> usize {
    2 * l.gen + usize::from(l.inv)
}

fn inv_col(c: usize) -> usize {
    c ^ 1
}

impl<'a> Enumerator<'a> {
    fn new(pres: &'a Presentation, max_live: usize) -> Self {
        Enumerator {
            pres,
            cols: 2 * pres.gen_count(),
            table: vec![vec![None; 2 * pres.gen_count()]],
            parent: vec![0],
            live: 1,
            max_live,
            pending: Vec::new(),
        }
    }

    fn rep(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = x;
        while self.parent[c as usize] != c {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn define(&mut self, from: u32, col: usize) -> Result<u32, EnumerationError> {
        if self.live >= self.max_live {
            return Err(EnumerationError::CosetLimit { max: self.max_live });
        }
        let n = self.table.len() as u32;
        self.table.push(vec![None; self.cols]);
        self.parent.push(n);
        self.live += 1;
        self.table[from as usize][col] = Some(n);
        self.table[n as usize][inv_col(col)] = Some(from);
        Ok(n)
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        // Keep the smaller index for a deterministic final numbering.
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.parent[kill as usize] = keep;
        self.live -= 1;
        self.pending.push(kill);
    }

    fn process_coincidences(&mut self) {
        while let Some(dead) = self.pending.pop() {
            for c in 0..self.cols {
                let Some(d) = self.table[dead as usize][c].take() else { continue };
                let d = self.rep(d);
                let keep = self.rep(dead);
                // Move the edge dead --c--> d onto the surviving row.
                match self.table[keep as usize][c] {
                    Some(e) => {
                        let e = self.rep(e);
                        if e != d {
                            self.merge(e, d);
                        }
                    }
                    None => self.table[keep as usize][c] = Some(d),
                }
                // And keep its mirror consistent.
                let keep = self.rep(dead);
                let d = self.rep(d);
                match self.table[d as usize][inv_col(c)] {
                    Some(e) => {
                        let e = self.rep(e);
                        if e != keep {
                            self.merge(e, keep);
                        }
                    }
                    None => self.table[d as usize][inv_col(c)] = Some(keep),
                }
            }
        }
    }

    /// Traces relator `w` from `alpha`, defining cosets to close the gap.
    fn scan_and_fill(&mut self, alpha: u32, w: &Word) -> Result<(), EnumerationError> {
        if w.is_empty() {
            return Ok(());
        }
        let r = w.len();
        loop {
            let a = self.rep(alpha);
            let mut f = a;
            let mut fi = 0;
            while fi < r {
                match self.table[f as usize][col_of(w.0[fi])] {
                    Some(n) => {
                        f = self.rep(n);
                        fi += 1;
                    }
                    None => break,
                }
            }
            if fi == r {
                if f != a {
                    self.merge(f, a);
                    self.process_coincidences();
                }
                return Ok(());
            }
            let mut b = a;
            let mut bj = r;
            while bj > fi {
                match self.table[b as usize][inv_col(col_of(w.0[bj - 1]))] {
                    Some(n) => {
                        b = self.rep(n);
                        bj -= 1;
                    }
                    None => break,
                }
            }
            if bj == fi {
                self.merge(f, b);
                self.process_coincidences();
                return Ok(());
            }
            if bj == fi + 1 {
                self.table[f as usize][col_of(w.0[fi])] = Some(b);
                self.table[b as usize][inv_col(col_of(w.0[fi]))] = Some(f);
                return Ok(());
            }
            self.define(f, col_of(w.0[fi]))?;
        }
    }

    fn run(mut self) -> Result<CosetTable, EnumerationError> {
        let mut alpha: u32 = 0;
        while (alpha as usize) < self.table.len() {
            if self.rep(alpha) != alpha {
                alpha += 1;
                continue;
            }
            for ri in 0..self.pres.relators.len() {
                let w = self.pres.relators[ri].clone();
                self.scan_and_fill(alpha, &w)?;
                if self.rep(alpha) != alpha {
                    break;
                }
            }
            if self.rep(alpha) == alpha {
                for c in 0..self.cols {
                    if self.table[alpha as usize][c].is_none() {
                        self.define(alpha, c)?;
                    }
                }
            }
            alpha += 1;
        }
        // Resolve every entry so the table is rep-closed.
        let total = self.table.len();
        let mut rows = Vec::with_capacity(self.live);
        let mut index = vec![u32::MAX; total];
        for i in 0..total as u32 {
            if self.rep(i) == i {
                index[i as usize] = rows.len() as u32;
                rows.push(i);
            }
        }
        let mut compact = vec![vec![0u32; self.cols]; rows.len()];
        for (ci, &orig) in rows.iter().enumerate() {
            for c in 0..self.cols {
                let e = self.table[orig as usize][c].expect("closed table has no holes");
                let e = self.rep(e);
                compact[ci][c] = index[e as usize];
            }
        }
        Ok(CosetTable { rows: compact })
    }
}

/// Closed coset table on live cosets, numbered in merge order (not yet BFS).
struct CosetTable {
    rows: Vec<Vec<u32>>,
}

/// Runs coset enumeration and assembles the resulting finite group: BFS
/// element numbering from the identity, full multiplication and inverse
/// tables, and one representative word per element.
pub fn enumerate_group(
    pres: &Presentation,
    max_cosets: usize,
) -> Result<FiniteGroup, EnumerationError> {
    let ct = Enumerator::new(pres, max_cosets.max(1)).run()?;
    let n = ct.rows.len();
    if n > MAX_TABLE_ORDER {
        return Err(EnumerationError::OrderTooLarge { order: n, max: MAX_TABLE_ORDER });
    }
    let m = pres.gen_count();

    // BFS from the identity coset, applying generators in declaration order.
    let mut bfs_of = vec![u32::MAX; n];
    let mut coset_of = Vec::with_capacity(n);
    let mut parent: Vec<(u32, usize)> = Vec::with_capacity(n);
    bfs_of[0] = 0;
    coset_of.push(0u32);
    parent.push((0, usize::MAX));
    let mut head = 0;
    while head < coset_of.len() {
        let c = coset_of[head];
        for j in 0..m {
            let t = ct.rows[c as usize][2 * j];
            if bfs_of[t as usize] == u32::MAX {
                bfs_of[t as usize] = coset_of.len() as u32;
                coset_of.push(t);
                parent.push((bfs_of[c as usize], j));
            }
        }
        head += 1;
    }
    assert_eq!(coset_of.len(), n, "coset graph must be generator-connected");

    let mut words: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let (p, j) = parent[i];
        if j == usize::MAX {
            words.push(Vec::new());
        } else {
            let mut w = words[p as usize].clone();
            w.push(j);
            words.push(w);
        }
    }

    // mult[a][b] = a * b, filled along the BFS so each entry is one table step.
    let mut mult = vec![0u32; n * n];
    for a in 0..n {
        mult[a * n] = a as u32;
    }
    for b in 1..n {
        let (pb, j) = parent[b];
        for a in 0..n {
            let prev = mult[a * n + pb as usize];
            let coset = ct.rows[coset_of[prev as usize] as usize][2 * j];
            mult[a * n + b] = bfs_of[coset as usize];
        }
    }

    let gen_images: Vec<usize> =
        (0..m).map(|j| bfs_of[ct.rows[0][2 * j] as usize] as usize).collect();

    let group = FiniteGroup::from_parts(pres.generators.clone(), mult, gen_images, words);
    group.validate().expect("enumerated group must satisfy the group axioms");
    for rel in &pres.relators {
        assert_eq!(group.eval_word(rel), group.id(), "relator must evaluate to the identity");
    }
    Ok(group)
}
