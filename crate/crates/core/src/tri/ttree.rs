use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trees::PlaneTree;

/// Vertex type of a four-type tree. Types 1 and 2 sit at even depth and
/// carry labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TType {
    One,
    Two,
    Three,
    Four,
}

impl TType {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_white(self) -> bool {
        matches!(self, TType::One | TType::Two)
    }
}

/// Which family a tree belongs to, decided by the root type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    One,
    Two,
}

impl RootType {
    fn ttype(self) -> TType {
        match self {
            RootType::One => TType::One,
            RootType::Two => TType::Two,
        }
    }
}

/// Unlabeled four-type tree satisfying the structural rules.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TTree {
    tree: PlaneTree,
    types: Vec<TType>,
}

impl TTree {
    pub fn new(tree: PlaneTree, types: Vec<TType>) -> Result<Self> {
        if types.len() != tree.len() {
            return Err(Error::InvalidParameter("type vector has wrong length".into()));
        }
        let bad = |v: usize, why: &str| Err(Error::InvalidParameter(format!("vertex {v}: {why}")));
        for v in 0..tree.len() {
            let kids: Vec<TType> = tree.children(v).map(|c| types[c]).collect();
            match types[v] {
                TType::One => {
                    if kids.iter().any(|&t| t != TType::Three) {
                        return bad(v, "children of a type-1 vertex must have type 3");
                    }
                }
                TType::Two => {
                    let want = if v == 0 { 2 } else { 1 };
                    if kids.len() != want || kids.iter().any(|&t| t != TType::Four) {
                        return bad(v, "type-2 vertex has the wrong children");
                    }
                }
                TType::Three => {
                    if kids != [TType::Two] {
                        return bad(v, "type-3 vertex needs exactly one type-2 child");
                    }
                }
                TType::Four => {
                    if kids != [TType::One] && kids != [TType::Two, TType::Two] {
                        return bad(v, "type-4 vertex needs one type-1 or two type-2 children");
                    }
                }
            }
            if v == 0 && !types[0].is_white() {
                return bad(0, "root must have type 1 or 2");
            }
        }
        Ok(TTree { tree, types })
    }

    /// Builds a tree from its preorder word of types and child counts.
    pub fn from_word(word: &[(TType, u32)]) -> Result<Self> {
        let counts: Vec<u32> = word.iter().map(|w| w.1).collect();
        let tree = PlaneTree::from_child_counts(&counts)?;
        TTree::new(tree, word.iter().map(|w| w.0).collect())
    }

    pub fn tree(&self) -> &PlaneTree {
        &self.tree
    }

    pub fn types(&self) -> &[TType] {
        &self.types
    }

    pub fn ttype(&self, v: usize) -> TType {
        self.types[v]
    }

    pub fn root_type(&self) -> RootType {
        if self.types[0] == TType::One {
            RootType::One
        } else {
            RootType::Two
        }
    }

    /// Vertex counts per type.
    pub fn type_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for t in &self.types {
            c[t.index()] += 1;
        }
        c
    }

    /// Number of map vertices of the associated triangulation
    /// (type-1 vertices plus the pointed vertex).
    pub fn n(&self) -> usize {
        self.type_counts()[0] + 1
    }

    /// Type-4 vertices with a single child.
    pub fn single_fours(&self) -> usize {
        (0..self.tree.len()).filter(|&v| self.types[v] == TType::Four && self.tree.child_count(v) == 1).count()
    }

    /// Number of free binary choices in an admissible labeling.
    pub fn label_degrees_of_freedom(&self) -> usize {
        self.type_counts()[2] + self.single_fours()
    }

    pub fn word(&self) -> Vec<(TType, u32)> {
        self.types.iter().zip(self.tree.child_counts()).map(|(&t, &k)| (t, k)).collect()
    }
}

/// Four-type tree with an admissible labeling of its type-1 and type-2
/// vertices (other entries are 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledTTree {
    shape: TTree,
    labels: Vec<i32>,
}

impl LabeledTTree {
    pub fn new(shape: TTree, labels: Vec<i32>) -> Result<Self> {
        check_tlabels(&shape, &labels)?;
        let labels =
            labels.into_iter().zip(shape.types.iter()).map(|(l, t)| if t.is_white() { l } else { 0 }).collect();
        Ok(LabeledTTree { shape, labels })
    }

    pub fn shape(&self) -> &TTree {
        &self.shape
    }

    pub fn tree(&self) -> &PlaneTree {
        &self.shape.tree
    }

    pub fn ttype(&self, v: usize) -> TType {
        self.shape.types[v]
    }

    pub fn label(&self, v: usize) -> i32 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }
}

fn check_tlabels(shape: &TTree, labels: &[i32]) -> Result<()> {
    let tree = &shape.tree;
    if labels.len() != tree.len() {
        return Err(Error::InvalidParameter("label vector has wrong length".into()));
    }
    if labels[0] != 0 {
        return Err(Error::InvalidParameter("root label must be 0".into()));
    }
    for v in (0..tree.len()).filter(|&v| !shape.types[v].is_white()) {
        let parent = tree.parent(v).expect("odd-depth vertex has a parent");
        let mut prev = parent;
        for w in tree.children(v).chain(std::iter::once(parent)) {
            let d = labels[w] as i64 - labels[prev] as i64;
            let floor = if shape.types[w] == TType::Two { 0 } else { -1 };
            if d < floor {
                return Err(Error::InvalidParameter(format!("label step {d} into vertex {w} around vertex {v}")));
            }
            prev = w;
        }
    }
    Ok(())
}

/// Uniform admissible labeling of a shape: a fair bit at every type-3
/// vertex and every single-child type-4 vertex.
pub fn sample_admissible_tlabels<R: Rng + ?Sized>(shape: TTree, rng: &mut R) -> LabeledTTree {
    let tree = &shape.tree;
    let mut labels = vec![0i32; tree.len()];
    for v in 1..tree.len() {
        let t = shape.types[v];
        if !t.is_white() {
            continue;
        }
        let mid = tree.parent(v).expect("non-root");
        let gp = tree.parent(mid).expect("white non-root has a grandparent");
        labels[v] = match (t, shape.types[mid]) {
            (TType::Two, TType::Three) => labels[gp] + i32::from(rng.gen::<bool>()),
            (TType::Two, _) => labels[gp],
            _ => labels[gp] - i32::from(rng.gen::<bool>()),
        };
    }
    LabeledTTree { shape, labels }
}

/// Offspring parameters of the critical four-type Galton–Watson tree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GwParams {
    /// Geometric parameter: a type-1 vertex has k children with
    /// probability (1−β)β^k.
    pub beta: f64,
    /// Probability that a type-4 vertex has a single type-1 child.
    pub alpha: f64,
}

impl GwParams {
    /// The unique pair making the tree critical and its conditioned law
    /// uniform on labeled trees.
    pub fn critical() -> Self {
        let s3 = 3f64.sqrt();
        GwParams { beta: 1.0 - s3 / 3.0, alpha: 0.5 + s3 / 6.0 }
    }
}

/// Options for [`sample_conditioned_ttree`].
#[derive(Clone, Copy, Debug)]
pub struct TSamplerOptions {
    pub max_attempts: u64,
    /// Accept type-1 counts in `n−1 ..= n−1+window`.
    pub window: usize,
}

impl Default for TSamplerOptions {
    fn default() -> Self {
        TSamplerOptions { max_attempts: u64::MAX, window: 0 }
    }
}

/// An accepted conditioned tree with the number of draws it took.
#[derive(Clone, Debug)]
pub struct Conditioned {
    pub shape: TTree,
    pub attempts: u64,
}

/// Galton–Watson four-type tree conditioned by rejection on having
/// `n − 1` type-1 vertices.
///
/// Each accepted shape has probability proportional to its number of
/// admissible labelings, so labeling it uniformly yields a uniform labeled
/// tree.
pub fn sample_conditioned_ttree<R: Rng + ?Sized>(
    n: usize,
    root: RootType,
    rng: &mut R,
    opts: TSamplerOptions,
) -> Result<Conditioned> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 3")));
    }
    let gw = GwParams::critical();
    let geom = Geometric::new(1.0 - gw.beta).expect("valid success probability");
    let lo = n - 1;
    let hi = lo + opts.window;
    let mut word: Vec<(TType, u32)> = Vec::new();
    let mut pending: Vec<TType> = Vec::new();
    for attempt in 1..=opts.max_attempts {
        word.clear();
        pending.clear();
        pending.push(root.ttype());
        let mut ones = 0usize;
        let mut ok = true;
        let mut first = true;
        while let Some(t) = pending.pop() {
            // every pending vertex still produces at least one type-1 vertex
            if ones + pending.len() + 1 > hi {
                ok = false;
                break;
            }
            match t {
                TType::One => {
                    ones += 1;
                    let k = geom.sample(rng).min((hi + 1) as u64) as u32;
                    word.push((t, k));
                    pending.extend(std::iter::repeat_n(TType::Three, k as usize));
                }
                TType::Two => {
                    let k = if first { 2 } else { 1 };
                    word.push((t, k));
                    pending.extend(std::iter::repeat_n(TType::Four, k as usize));
                }
                TType::Three => {
                    word.push((t, 1));
                    pending.push(TType::Two);
                }
                TType::Four => {
                    if rng.gen::<f64>() < gw.alpha {
                        word.push((t, 1));
                        pending.push(TType::One);
                    } else {
                        word.push((t, 2));
                        pending.extend([TType::Two, TType::Two]);
                    }
                }
            }
            first = false;
        }
        if ok && ones >= lo && ones <= hi {
            return Ok(Conditioned { shape: TTree::from_word(&word)?, attempts: attempt });
        }
    }
    Err(Error::RejectionBudget { attempts: opts.max_attempts, rate: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    fn smallest_positive() -> TTree {
        use TType::*;
        TTree::from_word(&[(One, 1), (Three, 1), (Two, 1), (Four, 1), (One, 0)]).unwrap()
    }

    #[test]
    fn structural_rules_are_enforced() {
        use TType::*;
        assert!(TTree::from_word(&[(One, 1), (Two, 1), (Four, 1), (One, 0)]).is_err());
        assert!(TTree::from_word(&[(Two, 1), (Four, 1), (One, 0)]).is_err());
        assert!(TTree::from_word(&[(Three, 1), (Two, 1), (Four, 1), (One, 0)]).is_err());
        let t = smallest_positive();
        assert_eq!(t.n(), 3);
        assert_eq!(t.label_degrees_of_freedom(), 2);
    }

    #[test]
    fn labeling_rules() {
        let t = smallest_positive();
        assert!(LabeledTTree::new(t.clone(), vec![0, 0, 1, 0, 0]).is_ok());
        assert!(LabeledTTree::new(t.clone(), vec![0, 0, 1, 0, 2]).is_err());
        assert!(LabeledTTree::new(t.clone(), vec![0, 0, -1, 0, -2]).is_err());
        assert!(LabeledTTree::new(t, vec![1, 0, 1, 0, 1]).is_err());
    }

    #[test]
    fn sampled_labels_are_admissible() {
        let mut rng = from_seed(3);
        for _ in 0..50 {
            let c = sample_conditioned_ttree(20, RootType::One, &mut rng, TSamplerOptions::default()).unwrap();
            assert_eq!(c.shape.n(), 20);
            let l = sample_admissible_tlabels(c.shape, &mut rng);
            LabeledTTree::new(l.shape.clone(), l.labels.clone()).unwrap();
        }
    }

    #[test]
    fn window_accepts_larger_counts() {
        let mut rng = from_seed(4);
        let opts = TSamplerOptions { max_attempts: u64::MAX, window: 5 };
        for _ in 0..20 {
            let c = sample_conditioned_ttree(30, RootType::Two, &mut rng, opts).unwrap();
            assert!((30..=35).contains(&c.shape.n()));
            assert_eq!(c.shape.root_type(), RootType::Two);
        }
    }
}
