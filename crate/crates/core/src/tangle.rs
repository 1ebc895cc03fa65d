//! Braid words, their closures, and compilation of a colored braid into a
//! morphism by applying one crossing slice at a time.
//!
//! Text grammar: `["<k>:"] (<nonzero signed int> whitespace)*`. The integer
//! `n` stands for `σ_|n|` when positive and `σ_|n|^{-1}` when negative. Without
//! the `k:` prefix the strand count is `1 + max |n|`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qscalar::{RootContext, Scalar};
use crate::ribbon::{braiding, braiding_inv, Morphism, ObjectSignature};
use crate::uqsl2::{typical_module, CMatrix, HighestWeight};

/// Largest state space `N^k` the engine will propagate.
pub const MAX_STATES: u128 = 1_000_000;

/// Largest dense morphism (`N^k × N^k` entries) that [`compile`] will materialize.
pub const MAX_DENSE_ENTRIES: u128 = 1 << 24;

/// `σ_index` or its inverse; `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BraidGenerator {
    pub index: usize,
    pub positive: bool,
}

impl BraidGenerator {
    pub fn sign(&self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            index: self.index,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for BraidGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign() * self.index as i64)
    }
}

/// A braid on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    word: Vec<BraidGenerator>,
}

impl BraidWord {
    pub fn new(strands: usize, word: Vec<BraidGenerator>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Parse("a braid needs at least one strand".into()));
        }
        if let Some(g) = word.iter().find(|g| g.index == 0 || g.index >= strands) {
            return Err(Error::Parse(format!(
                "generator {g} out of range for {strands} strands"
            )));
        }
        Ok(Self { strands, word })
    }

    /// Build from signed integers, e.g. `[1, -2]`.
    pub fn from_signed(strands: usize, word: &[i64]) -> Result<Self> {
        let gens = word
            .iter()
            .map(|&n| {
                if n == 0 {
                    Err(Error::Parse("generator 0 is not allowed".into()))
                } else {
                    Ok(BraidGenerator {
                        index: n.unsigned_abs() as usize,
                        positive: n > 0,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, gens)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn word(&self) -> &[BraidGenerator] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Concatenation `self · other` (self applied first, bottom to top).
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        BraidWord::new(self.strands.max(other.strands), word)
    }

    /// The same word on more strands; extra strands are unbraided.
    pub fn with_strands(&self, strands: usize) -> Result<BraidWord> {
        BraidWord::new(strands, self.word.clone())
    }

    /// `perm[s]` is the top position reached by the strand entering at bottom position `s`.
    pub fn permutation(&self) -> Vec<usize> {
        // occupant[p] = bottom position of the strand currently at position p
        let mut occupant: Vec<usize> = (0..self.strands).collect();
        for g in &self.word {
            occupant.swap(g.index - 1, g.index);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &s) in occupant.iter().enumerate() {
            perm[s] = pos;
        }
        perm
    }

    /// Cycles of the closure permutation, each listed from its smallest strand
    /// and ordered by that strand.
    pub fn closure_components(&self) -> Vec<Vec<usize>> {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = Vec::new();
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                cycle.push(s);
                s = perm[s];
            }
            cycles.push(cycle);
        }
        cycles
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_braid(text)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for g in &self.word {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

/// Parse the braid text grammar.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let (declared, body) = match text.split_once(':') {
        Some((head, body)) => {
            let head = head.trim();
            let k: usize = head
                .parse()
                .map_err(|_| Error::Parse(format!("invalid strand count {head:?}")))?;
            if k == 0 {
                return Err(Error::Parse("strand count must be positive".into()));
            }
            (Some(k), body)
        }
        None => (None, text),
    };
    let mut word = Vec::new();
    for tok in body.split_whitespace() {
        let n: i64 = tok
            .parse()
            .map_err(|_| Error::Parse(format!("invalid generator token {tok:?}")))?;
        if n == 0 {
            return Err(Error::Parse("generator 0 is not allowed".into()));
        }
        let index = usize::try_from(n.unsigned_abs())
            .map_err(|_| Error::Parse(format!("generator {n} is too large")))?;
        word.push(BraidGenerator {
            index,
            positive: n > 0,
        });
    }
    let strands = match declared {
        Some(k) => {
            if let Some(g) = word.iter().find(|g| g.index >= k) {
                return Err(Error::Parse(format!(
                    "generator {g} needs more than the declared {k} strands"
                )));
            }
            k
        }
        None => word
            .iter()
            .map(|g| g.index)
            .max()
            .map_or(Some(1), |m| m.checked_add(1))
            .ok_or_else(|| Error::Parse("generator index overflows".into()))?,
    };
    BraidWord::new(strands, word)
}

/// A braid closure with one color per component and blackboard framing.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredLink {
    braid: BraidWord,
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
    colors: Vec<HighestWeight>,
    framing: Vec<i64>,
}

impl ColoredLink {
    /// `colors[c]` colors component `c`, components being ordered by their smallest strand.
    pub fn new(braid: BraidWord, colors: Vec<HighestWeight>) -> Result<Self> {
        let components = braid.closure_components();
        if colors.len() != components.len() {
            return Err(Error::Parse(format!(
                "closure of {braid} has {} component(s) but {} color(s) were given",
                components.len(),
                colors.len()
            )));
        }
        let mut component_of = vec![0; braid.strands()];
        for (c, cycle) in components.iter().enumerate() {
            for &s in cycle {
                component_of[s] = c;
            }
        }
        let mut link = Self {
            braid,
            components,
            component_of,
            colors,
            framing: Vec::new(),
        };
        link.framing = writhe_per_component(&link);
        Ok(link)
    }

    /// Colors given per bottom position; they must be constant on components.
    pub fn from_strand_colors(braid: BraidWord, strand_colors: &[HighestWeight]) -> Result<Self> {
        if strand_colors.len() != braid.strands() {
            return Err(Error::Parse(format!(
                "{} strand color(s) for {} strands",
                strand_colors.len(),
                braid.strands()
            )));
        }
        let comps = braid.closure_components();
        let mut colors = Vec::with_capacity(comps.len());
        for cycle in &comps {
            let c = strand_colors[cycle[0]];
            if cycle.iter().any(|&s| strand_colors[s] != c) {
                return Err(Error::Parse(format!(
                    "strands {cycle:?} form one component but carry different colors"
                )));
            }
            colors.push(c);
        }
        Self::new(braid, colors)
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, strand: usize) -> usize {
        self.component_of[strand]
    }

    pub fn colors(&self) -> &[HighestWeight] {
        &self.colors
    }

    /// Blackboard writhe of each component.
    pub fn framing(&self) -> &[i64] {
        &self.framing
    }

    /// Color carried by the strand at bottom position `s`.
    pub fn strand_color(&self, s: usize) -> HighestWeight {
        self.colors[self.component_of[s]]
    }

    pub fn strand_colors(&self) -> Vec<HighestWeight> {
        (0..self.braid.strands())
            .map(|s| self.strand_color(s))
            .collect()
    }

    /// The closure of the cyclically rotated word `w[at..] w[..at]`, which is
    /// the same framed link. Colors are carried along: bottom position `p` of
    /// the rotated braid is the point at height `at` and position `p` of this one.
    pub fn rotated(&self, at: usize) -> Result<ColoredLink> {
        let word = self.braid.word();
        if at > word.len() {
            return Err(Error::Range {
                what: "rotation point",
                index: at,
                bound: word.len() + 1,
            });
        }
        let mut occupant: Vec<usize> = (0..self.braid.strands()).collect();
        for g in &word[..at] {
            occupant.swap(g.index - 1, g.index);
        }
        let colors: Vec<HighestWeight> = occupant.iter().map(|&s| self.strand_color(s)).collect();
        let mut rotated = word[at..].to_vec();
        rotated.extend_from_slice(&word[..at]);
        ColoredLink::from_strand_colors(BraidWord::new(self.braid.strands(), rotated)?, &colors)
    }

    /// Disjoint union with an unknot of the given color placed on a new rightmost strand.
    pub fn with_split_unknot(&self, color: HighestWeight) -> Result<ColoredLink> {
        let braid = self.braid.with_strands(self.braid.strands() + 1)?;
        let mut colors = self.strand_colors();
        colors.push(color);
        ColoredLink::from_strand_colors(braid, &colors)
    }
}

/// Signed count of the crossings between two strands of the same component.
pub fn writhe_per_component(link: &ColoredLink) -> Vec<i64> {
    let mut writhe = vec![0i64; link.components.len()];
    let mut occupant: Vec<usize> = (0..link.braid.strands()).collect();
    for g in link.braid.word() {
        let (a, b) = (occupant[g.index - 1], occupant[g.index]);
        let (ca, cb) = (link.component_of[a], link.component_of[b]);
        if ca == cb {
            writhe[ca] += g.sign();
        }
        occupant.swap(g.index - 1, g.index);
    }
    writhe
}

/// One crossing: a two-strand matrix acting at positions `pos, pos + 1`.
#[derive(Debug, Clone)]
pub struct Slice {
    pub pos: usize,
    pub matrix: CMatrix,
}

/// A colored braid prepared for column-by-column propagation.
#[derive(Debug, Clone)]
pub struct CompiledBraid {
    n: usize,
    strands: usize,
    states: usize,
    slices: Vec<Slice>,
    bottom: Vec<HighestWeight>,
    top: Vec<HighestWeight>,
}

impl CompiledBraid {
    /// Prepare the slices of `braid` with the given bottom colors.
    pub fn new(ctx: &RootContext, braid: &BraidWord, bottom: &[HighestWeight]) -> Result<Self> {
        let n = ctx.n();
        let strands = braid.strands();
        if bottom.len() != strands {
            return Err(Error::SignatureMismatch(format!(
                "{} colors for a braid on {strands} strands",
                bottom.len()
            )));
        }
        let states = (n as u128)
            .checked_pow(strands as u32)
            .filter(|&s| s <= MAX_STATES)
            .ok_or(Error::Resource {
                states: (n as u128).saturating_pow(strands as u32),
                limit: MAX_STATES,
            })? as usize;

        let mut cache: Vec<(HighestWeight, HighestWeight, bool, CMatrix)> = Vec::new();
        let mut colors = bottom.to_vec();
        let mut slices = Vec::with_capacity(braid.len());
        for g in braid.word() {
            let pos = g.index - 1;
            let (a, b) = (colors[pos], colors[pos + 1]);
            let cached = cache
                .iter()
                .find(|(x, y, s, _)| *x == a && *y == b && *s == g.positive)
                .map(|entry| entry.3.clone());
            let matrix = match cached {
                Some(m) => m,
                None => {
                    let va = typical_module(ctx, a)?;
                    let vb = typical_module(ctx, b)?;
                    // σ^{+1}: c_{A,B}; σ^{-1}: c_{B,A}^{-1}, both A⊗B -> B⊗A
                    let m = if g.positive {
                        braiding(ctx, &va, &vb).into_matrix()
                    } else {
                        braiding_inv(ctx, &vb, &va)?.into_matrix()
                    };
                    cache.push((a, b, g.positive, m.clone()));
                    m
                }
            };
            slices.push(Slice { pos, matrix });
            colors.swap(pos, pos + 1);
        }
        for &c in bottom {
            c.ensure_typical(ctx)?;
        }
        Ok(Self {
            n,
            strands,
            states,
            slices,
            bottom: bottom.to_vec(),
            top: colors,
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn bottom_colors(&self) -> &[HighestWeight] {
        &self.bottom
    }

    pub fn top_colors(&self) -> &[HighestWeight] {
        &self.top
    }

    /// Apply every slice in order to the state vector `v` (length `N^k`).
    pub fn propagate(&self, v: &mut [Scalar]) {
        debug_assert_eq!(v.len(), self.states);
        let n = self.n;
        let pair = n * n;
        let mut gathered = vec![Scalar::new(0.0, 0.0); pair];
        for slice in &self.slices {
            let low = n.pow((self.strands - slice.pos - 2) as u32);
            let block = pair * low;
            let outer = self.states / block;
            for o in 0..outer {
                for c in 0..low {
                    let base = o * block + c;
                    let mut nonzero = false;
                    for (s, g) in gathered.iter_mut().enumerate() {
                        *g = v[base + s * low];
                        nonzero |= g.re != 0.0 || g.im != 0.0;
                    }
                    if !nonzero {
                        continue;
                    }
                    for r in 0..pair {
                        let mut acc = Scalar::new(0.0, 0.0);
                        for (s, g) in gathered.iter().enumerate() {
                            acc += slice.matrix[(r, s)] * g;
                        }
                        v[base + r * low] = acc;
                    }
                }
            }
        }
    }

    /// Image of the basis vector `e_col`.
    pub fn column(&self, col: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::new(0.0, 0.0); self.states];
        v[col] = Scalar::new(1.0, 0.0);
        self.propagate(&mut v);
        v
    }

    /// Materialize the full matrix, one column per task.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let entries = (self.states as u128) * (self.states as u128);
        if entries > MAX_DENSE_ENTRIES {
            return Err(Error::Resource {
                states: entries,
                limit: MAX_DENSE_ENTRIES,
            });
        }
        let mut m = CMatrix::zeros(self.states, self.states);
        m.as_mut_slice()
            .par_chunks_mut(self.states)
            .enumerate()
            .for_each(|(col, chunk)| {
                chunk[col] = Scalar::new(1.0, 0.0);
                self.propagate(chunk);
            });
        Ok(m)
    }
}

/// The morphism `V_{c(1)} ⊗ ... ⊗ V_{c(k)} -> (permuted colors)` of the colored braid.
pub fn compile(ctx: &RootContext, link: &ColoredLink) -> Result<Morphism> {
    let compiled = CompiledBraid::new(ctx, link.braid(), &link.strand_colors())?;
    let matrix = compiled.to_matrix()?;
    Morphism::new(
        ctx,
        ObjectSignature(compiled.bottom_colors().to_vec()),
        ObjectSignature(compiled.top_colors().to_vec()),
        matrix,
    )
}
