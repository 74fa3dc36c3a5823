//! Alphabets, transition matrices, admissible words and graph structure.
//!
//! A [`SftModel`] is the combinatorial substrate: an ordered alphabet and a
//! 0/1 transition matrix, entry `(i,j) = 1` meaning the transition `i -> j`
//! is allowed. The one-sided shift space consists of all infinite symbol
//! sequences whose consecutive pairs are allowed.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph;

/// Alphabet plus 0/1 transition matrix.
///
/// Construction checks shape only (square, binary entries, nonempty,
/// distinct labels); irreducibility and aperiodicity are reported by
/// [`validate`] and required by the consumers that need them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SftModel {
    symbols: Vec<String>,
    size: usize,
    matrix: Vec<u8>,
}

impl SftModel {
    pub fn new(symbols: Vec<String>, rows: Vec<Vec<u8>>) -> Result<Self> {
        let size = symbols.len();
        if size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if !seen.insert(s.clone()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        if rows.len() != size {
            return Err(Error::NonSquareMatrix {
                rows: rows.len(),
                row: 0,
                len: size,
            });
        }
        let mut matrix = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::NonSquareMatrix {
                    rows: size,
                    row: i,
                    len: row.len(),
                });
            }
            for (j, &e) in row.iter().enumerate() {
                if e > 1 {
                    return Err(Error::NonBinaryEntry { row: i, col: j });
                }
                matrix.push(e);
            }
        }
        Ok(SftModel {
            symbols,
            size,
            matrix,
        })
    }

    /// Model with the conventional 1-based labels `"1".."l"`.
    pub fn from_matrix(rows: Vec<Vec<u8>>) -> Result<Self> {
        let labels = (1..=rows.len()).map(|i| i.to_string()).collect();
        SftModel::new(labels, rows)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> &[String] {
        &self.symbols
    }

    pub fn label(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == label)
    }

    #[inline]
    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.matrix[i * self.size + j] == 1
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&j| self.allows(i, j))
    }

    pub fn word_admissible(&self, word: &[usize]) -> bool {
        !word.is_empty()
            && word.iter().all(|&s| s < self.size)
            && word.windows(2).all(|w| self.allows(w[0], w[1]))
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|i| self.successors(i).collect())
            .collect()
    }

    /// All admissible words of length `n` in lexicographic order.
    /// `n = 0` yields the empty enumeration.
    pub fn admissible_words(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut stack = Vec::with_capacity(n);
        for s in 0..self.size {
            stack.push(s);
            self.extend_words(n, &mut stack, &mut out);
            stack.pop();
        }
        out
    }

    fn extend_words(&self, n: usize, stack: &mut Vec<usize>, out: &mut Vec<Word>) {
        if stack.len() == n {
            out.push(Word(stack.clone()));
            return;
        }
        let last = *stack.last().unwrap();
        for next in 0..self.size {
            if self.allows(last, next) {
                stack.push(next);
                self.extend_words(n, stack, out);
                stack.pop();
            }
        }
    }

    /// Number of admissible `n`-words, computed as the sum of the entries
    /// of the (n-1)-th matrix power (in f64, for budget estimates).
    pub fn count_admissible(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let mut counts = vec![1.0f64; self.size];
        for _ in 1..n {
            let mut next = vec![0.0f64; self.size];
            for (i, ni) in next.iter_mut().enumerate() {
                for (j, cj) in counts.iter().enumerate() {
                    if self.allows(i, j) {
                        *ni += cj;
                    }
                }
            }
            counts = next;
        }
        counts.iter().sum()
    }

    pub fn is_irreducible(&self) -> bool {
        if self.size == 1 {
            return self.allows(0, 0);
        }
        graph::is_strongly_connected(&self.adjacency())
    }
}

/// Admissible finite word of symbol indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(model: &SftModel, symbols: Vec<usize>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        if !model.word_admissible(&symbols) {
            return Err(Error::InadmissibleWord(symbols));
        }
        Ok(Word(symbols))
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self, model: &SftModel) -> Vec<String> {
        self.0.iter().map(|&s| model.label(s).to_string()).collect()
    }
}

impl std::ops::Deref for Word {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Partition of the symbols of an irreducible model into cyclically moving
/// classes: every allowed transition advances the class by one mod the
/// period. Class 0 contains the lowest-index symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub period: usize,
    /// Class index per symbol.
    pub class_of: Vec<usize>,
    /// Symbols per class.
    pub classes: Vec<Vec<usize>>,
}

/// Structural report for a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub irreducible: bool,
    pub aperiodic: bool,
    /// Period of the transition graph when irreducible.
    pub period: Option<usize>,
    pub components: usize,
    /// Symbols with no outgoing transition.
    pub dead_rows: Vec<usize>,
    /// Symbols with no incoming transition.
    pub dead_cols: Vec<usize>,
}

/// Reports irreducibility (strong connectivity), aperiodicity and stranded
/// symbols.
pub fn validate(model: &SftModel) -> Diagnostics {
    let n = model.size();
    let adj = model.adjacency();
    let dead_rows: Vec<usize> = (0..n).filter(|&i| adj[i].is_empty()).collect();
    let dead_cols: Vec<usize> = (0..n)
        .filter(|&j| (0..n).all(|i| !model.allows(i, j)))
        .collect();
    let irreducible = model.is_irreducible();
    let (period, aperiodic) = if irreducible {
        let (m, _) = graph::pattern_period(&adj);
        (Some(m), m == 1)
    } else {
        (None, false)
    };
    Diagnostics {
        irreducible,
        aperiodic,
        period,
        components: graph::scc_count(&adj),
        dead_rows,
        dead_cols,
    }
}

/// Cyclic decomposition of an irreducible model: the period is the gcd of
/// all cycle lengths, classes are BFS distances mod the period from the
/// lowest-index symbol.
pub fn period(model: &SftModel) -> Result<CyclicDecomposition> {
    if !model.is_irreducible() {
        return Err(Error::Reducible);
    }
    let (m, class_of) = graph::pattern_period(&model.adjacency());
    let mut classes = vec![Vec::new(); m];
    for (sym, &c) in class_of.iter().enumerate() {
        classes[c].push(sym);
    }
    Ok(CyclicDecomposition {
        period: m,
        class_of,
        classes,
    })
}

/// Sub-model on a proper nonempty subset of the symbols. Labels are kept;
/// the caller checks irreducibility of the result where needed.
pub fn restrict(model: &SftModel, delta: &[usize]) -> Result<SftModel> {
    if delta.is_empty() {
        return Err(Error::EmptyDelta);
    }
    let mut sorted: Vec<usize> = delta.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&bad) = sorted.iter().find(|&&s| s >= model.size()) {
        return Err(Error::UnknownSymbol(format!("#{bad}")));
    }
    if sorted.len() == model.size() {
        return Err(Error::FullDelta);
    }
    let labels = sorted.iter().map(|&s| model.label(s).to_string()).collect();
    let rows = sorted
        .iter()
        .map(|&i| {
            sorted
                .iter()
                .map(|&j| u8::from(model.allows(i, j)))
                .collect()
        })
        .collect();
    SftModel::new(labels, rows)
}

/// Resolve label names to symbol indices.
pub fn resolve_labels(model: &SftModel, labels: &[String]) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|l| {
            model
                .index_of(l)
                .ok_or_else(|| Error::UnknownSymbol(l.clone()))
        })
        .collect()
}

/// A model recoded to blocks of `m` symbols: the new alphabet is the set of
/// admissible m-words, and a block transition is allowed exactly when the
/// last symbol of the source block may precede the first symbol of the
/// target block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockModel {
    pub base: SftModel,
    pub block_len: usize,
    /// Block-level model; symbol i corresponds to `words[i]` in the base.
    pub model: SftModel,
    words: Vec<Vec<usize>>,
}

impl BlockModel {
    /// Base word spelled by one block symbol.
    pub fn word_of(&self, block_symbol: usize) -> &[usize] {
        &self.words[block_symbol]
    }

    /// Base word spelled by a block word.
    pub fn expand(&self, block_word: &[usize]) -> Vec<usize> {
        block_word
            .iter()
            .flat_map(|&b| self.words[b].iter().copied())
            .collect()
    }

    /// Block symbol spelling the given base word, if admissible.
    pub fn block_of(&self, base_word: &[usize]) -> Option<usize> {
        self.words.iter().position(|w| w == base_word)
    }
}

/// Recode to blocks of length `m`; `m = 1` returns a model identical to
/// the input.
pub fn block_recode(model: &SftModel, m: usize) -> Result<BlockModel> {
    if m == 0 {
        return Err(Error::InvalidBlockLength);
    }
    let words: Vec<Vec<usize>> = model
        .admissible_words(m)
        .into_iter()
        .map(|w| w.symbols().to_vec())
        .collect();
    let mut labels: Vec<String> = words
        .iter()
        .map(|w| {
            w.iter()
                .map(|&s| model.label(s))
                .collect::<Vec<_>>()
                .join("")
        })
        .collect();
    // joined labels are display-only; fall back to a separator on collision
    let distinct: HashSet<&String> = labels.iter().collect();
    if distinct.len() != labels.len() {
        labels = words
            .iter()
            .map(|w| {
                w.iter()
                    .map(|&s| model.label(s))
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .collect();
    }
    let rows = words
        .iter()
        .map(|u| {
            words
                .iter()
                .map(|v| u8::from(model.allows(*u.last().unwrap(), v[0])))
                .collect()
        })
        .collect();
    let block = SftModel::new(labels, rows)?;
    Ok(BlockModel {
        base: model.clone(),
        block_len: m,
        model: block,
        words,
    })
}
