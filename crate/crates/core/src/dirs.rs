//! Direction sets: unit tangent or normal directions with multiplicities,
//! duality tags, and tolerance-based matching.
//!
//! Directions are stored as floating unit vectors identified up to sign, with
//! the deterministic representative whose first nonvanishing coordinate is
//! positive. Matching is multiplicity-aware: two sets agree when their
//! direction multisets pair up bijectively within an angular tolerance.

/// Angular tolerance used by the verification suites when comparing
/// independently computed direction sets.
pub const DIR_MATCH_TOL: f64 = 1e-8;

/// How a direction arises: dual to an ordinary degenerate normal, dual to the
/// flat umbilic, or untagged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirTag {
    AK,
    DK,
    Plain,
}

impl std::fmt::Display for DirTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DirTag::AK => "A_K",
            DirTag::DK => "D_K",
            DirTag::Plain => "PLAIN",
        };
        f.write_str(s)
    }
}

/// One direction with its root multiplicity and optional dual normal.
#[derive(Clone, Debug)]
pub struct DirEntry {
    pub dir: Vec<f64>,
    pub multiplicity: usize,
    pub tag: DirTag,
    pub dual_normal: Option<Vec<f64>>,
}

impl DirEntry {
    pub fn plain(dir: Vec<f64>, multiplicity: usize) -> Self {
        DirEntry {
            dir: canonical_unit(&dir),
            multiplicity,
            tag: DirTag::Plain,
            dual_normal: None,
        }
    }

    pub fn tagged(dir: Vec<f64>, multiplicity: usize, tag: DirTag) -> Self {
        DirEntry {
            dir: canonical_unit(&dir),
            multiplicity,
            tag,
            dual_normal: None,
        }
    }

    pub fn with_dual(dir: Vec<f64>, multiplicity: usize, tag: DirTag, dual: Vec<f64>) -> Self {
        DirEntry {
            dir: canonical_unit(&dir),
            multiplicity,
            tag,
            dual_normal: Some(canonical_unit(&dual)),
        }
    }
}

/// A finite (or flagged-infinite) set of directions.
#[derive(Clone, Debug, Default)]
pub struct DirectionSet {
    pub entries: Vec<DirEntry>,
    /// Set when every direction qualifies (inflection-type degeneracies).
    pub infinite: bool,
}

impl DirectionSet {
    pub fn finite(mut entries: Vec<DirEntry>) -> Self {
        sort_entries(&mut entries);
        DirectionSet {
            entries,
            infinite: false,
        }
    }

    pub fn infinite() -> Self {
        DirectionSet {
            entries: vec![],
            infinite: true,
        }
    }

    /// Number of distinct directions (multiplicity ignored).
    pub fn count(&self) -> usize {
        self.entries.len()
    }

    /// Total root count, multiplicities included.
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Multiplicity-aware comparison: both sets expand each direction by its
    /// multiplicity and every copy must pair with a copy of the other set
    /// within `tol` of angular distance. Infinite flags must agree.
    pub fn matches(&self, other: &DirectionSet, tol: f64) -> bool {
        if self.infinite != other.infinite {
            return false;
        }
        if self.infinite {
            return true;
        }
        let a = expand(&self.entries);
        let b = expand(&other.entries);
        if a.len() != b.len() {
            return false;
        }
        // Sets are tiny (at most a handful of roots): exhaustive bipartite
        // search is exact and cheap.
        fn assign(a: &[&[f64]], b: &[&[f64]], used: &mut [bool], i: usize, tol: f64) -> bool {
            if i == a.len() {
                return true;
            }
            for j in 0..b.len() {
                if !used[j] && angular_distance(a[i], b[j]) <= tol {
                    used[j] = true;
                    if assign(a, b, used, i + 1, tol) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        let mut used = vec![false; b.len()];
        assign(&a, &b, &mut used, 0, tol)
    }

    /// True when some entry lies within `tol` of the given direction.
    pub fn contains_dir(&self, dir: &[f64], tol: f64) -> bool {
        let d = canonical_unit(dir);
        self.entries
            .iter()
            .any(|e| angular_distance(&e.dir, &d) <= tol)
    }
}

fn expand(entries: &[DirEntry]) -> Vec<&[f64]> {
    let mut out = Vec::new();
    for e in entries {
        for _ in 0..e.multiplicity.max(1) {
            out.push(e.dir.as_slice());
        }
    }
    out
}

fn sort_entries(entries: &mut [DirEntry]) {
    entries.sort_by(|a, b| {
        a.dir
            .iter()
            .zip(&b.dir)
            .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
            .find(|o| *o != std::cmp::Ordering::Equal)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// Unit representative with positive first nonvanishing coordinate.
pub fn canonical_unit(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm > 0.0, "cannot orient a zero direction");
    let mut u: Vec<f64> = v.iter().map(|x| x / norm).collect();
    if let Some(first) = u.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            for x in &mut u {
                *x = -*x;
            }
        }
    }
    u
}

/// Angle between the lines spanned by two directions, in [0, pi/2].
/// Computed through the chord length rather than acos of the dot product,
/// which would lose half the working precision near zero angle.
pub fn angular_distance(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let sign = if dot < 0.0 { -1.0 } else { 1.0 };
    let chord_sq: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x / na - sign * y / nb;
            d * d
        })
        .sum();
    let half = (chord_sq.sqrt() / 2.0).clamp(0.0, 1.0);
    2.0 * half.asin()
}
