//! Root systems of types A–D and G2, their Weyl groups, Levi subsets and
//! minimal coset representatives.
//!
//! Torus coordinates are `z_i = ⟨λ, α_i∨⟩`, so weights are written in the
//! fundamental-weight basis and a coroot `γ∨ = Σ c_i α_i∨` acts as the
//! integer linear form `z ↦ c·z`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::linalg::{self, dot_i, imat_mul, imat_vec, q_inverse, qmat_mul, to_q, transpose, IMat, QMat};

/// Largest Weyl group enumerated.
pub const WEYL_SIZE_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    G2,
}

impl FromStr for RootType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(RootType::A),
            "B" => Ok(RootType::B),
            "C" => Ok(RootType::C),
            "D" => Ok(RootType::D),
            "G2" | "G" => Ok(RootType::G2),
            other => Err(Error::Unsupported(format!("root system type {other:?}"))),
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootType::A => "A",
            RootType::B => "B",
            RootType::C => "C",
            RootType::D => "D",
            RootType::G2 => "G",
        };
        write!(f, "{s}")
    }
}

/// Length class of a root; in simply-laced systems every root is `Short`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootLength {
    Short,
    Long,
}

impl RootLength {
    pub fn label(self) -> &'static str {
        match self {
            RootLength::Short => "short",
            RootLength::Long => "long",
        }
    }
}

/// An element of the Weyl group acting on torus coordinates `z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    /// Integer matrix with `z ↦ matrix · z`.
    pub matrix: IMat,
    pub inverse: IMat,
    /// Reduced word in simple reflections (applied right to left).
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Image of a coordinate vector.
    pub fn act(&self, z: &[Rational]) -> Vec<Rational> {
        self.matrix.iter().map(|r| linalg::dot_iq(r, z)).collect()
    }

    pub fn act_int(&self, z: &[i64]) -> Vec<i64> {
        imat_vec(&self.matrix, z)
    }

    /// Linear form `m'` with `m'·(w z) = m·z`, i.e. `m' = w^{-T} m`.
    pub fn act_form(&self, m: &[i64]) -> Vec<i64> {
        let n = m.len();
        (0..n).map(|j| (0..n).map(|i| m[i] * self.inverse[i][j]).sum()).collect()
    }

    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            "e".into()
        } else {
            self.word.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join("")
        }
    }
}

/// A subset of the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeviSubset {
    pub simple: BTreeSet<usize>,
}

impl LeviSubset {
    pub fn new(simple: impl IntoIterator<Item = usize>) -> Self {
        LeviSubset { simple: simple.into_iter().collect() }
    }

    pub fn empty() -> Self {
        Self::new([])
    }

    pub fn full(rank: usize) -> Self {
        Self::new(0..rank)
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub root_type: RootType,
    pub rank: usize,
    /// `C_ij = ⟨α_i, α_j∨⟩`.
    pub cartan: IMat,
    /// Positive roots in simple-root coordinates, ordered by height.
    pub positive_roots: Vec<Vec<i64>>,
    /// Positive coroots in simple-coroot coordinates (linear forms on `z`).
    pub coroots: Vec<Vec<i64>>,
    pub lengths: Vec<RootLength>,
    /// Squared lengths of the simple roots for the invariant form.
    pub simple_sq: Vec<i64>,
    /// Invariant inner product on fundamental-weight coordinates.
    pub gram: QMat,
    weight_index: HashMap<Vec<i64>, (usize, bool)>,
    weyl: OnceLock<std::result::Result<Vec<WeylElement>, Error>>,
}

fn cartan_and_lengths(t: RootType, n: usize) -> Result<(IMat, Vec<i64>)> {
    let ok = match t {
        RootType::A => n >= 1,
        RootType::B | RootType::C => n >= 2,
        RootType::D => n >= 4,
        RootType::G2 => n == 2,
    };
    if !ok || n > 8 {
        return Err(Error::Unsupported(format!("type {t} with rank {n}")));
    }
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut sq = vec![2i64; n];
    match t {
        RootType::A => {
            for i in 0..n - 1 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        }
        RootType::B => {
            for i in 0..n - 1 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
                sq[i] = 4;
            }
            c[n - 2][n - 1] = -2;
        }
        RootType::C => {
            for i in 0..n - 1 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            sq[n - 1] = 4;
            c[n - 1][n - 2] = -2;
        }
        RootType::D => {
            for i in 0..n - 2 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
        }
        RootType::G2 => {
            sq = vec![2, 6];
            c[0][1] = -1;
            c[1][0] = -3;
        }
    }
    Ok((c, sq))
}

impl RootSystem {
    /// Builds the root system of the given type and rank.
    pub fn build(t: RootType, rank: usize) -> Result<Self> {
        let (cartan, simple_sq) = cartan_and_lengths(t, rank)?;
        let n = rank;
        // positive roots by closure along simple-root strings
        let mut roots: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let mut set: BTreeSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut k = 0;
        while k < roots.len() {
            let b = roots[k].clone();
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| b[j] * cartan[j][i]).sum();
                let mut p = 0;
                let mut down = b.clone();
                loop {
                    down[i] -= 1;
                    if set.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = b.clone();
                    up[i] += 1;
                    if set.insert(up.clone()) {
                        roots.push(up);
                    }
                }
            }
            k += 1;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
        let sym: IMat = (0..n).map(|i| (0..n).map(|j| cartan[i][j] * simple_sq[j] / 2).collect()).collect();
        let sq_of = |r: &[i64]| -> i64 { (0..n).map(|i| (0..n).map(|j| r[i] * sym[i][j] * r[j]).sum::<i64>()).sum() };
        let max_sq = simple_sq.iter().copied().max().unwrap();
        let simply_laced = simple_sq.iter().all(|&s| s == max_sq);
        let mut coroots = Vec::new();
        let mut lengths = Vec::new();
        for r in &roots {
            let s = sq_of(r);
            coroots.push((0..n).map(|i| r[i] * simple_sq[i] / s).collect());
            lengths.push(if simply_laced || s < max_sq { RootLength::Short } else { RootLength::Long });
        }
        let cinv = q_inverse(&to_q(&cartan)).expect("Cartan matrix is invertible");
        let b = to_q(&sym);
        let gram = qmat_mul(&qmat_mul(&cinv, &b), &transpose(&cinv, n));
        let mut rs = RootSystem {
            root_type: t,
            rank: n,
            cartan,
            positive_roots: roots,
            coroots,
            lengths,
            simple_sq,
            gram,
            weight_index: HashMap::new(),
            weyl: OnceLock::new(),
        };
        for i in 0..rs.positive_roots.len() {
            let w = rs.root_weight(i);
            let neg: Vec<i64> = w.iter().map(|x| -x).collect();
            rs.weight_index.insert(w, (i, true));
            rs.weight_index.insert(neg, (i, false));
        }
        Ok(rs)
    }

    pub fn label(&self) -> String {
        match self.root_type {
            RootType::G2 => "G2".into(),
            t => format!("{t}{}", self.rank),
        }
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    /// Positive root `i` in fundamental-weight coordinates.
    pub fn root_weight(&self, i: usize) -> Vec<i64> {
        let r = &self.positive_roots[i];
        (0..self.rank).map(|j| (0..self.rank).map(|k| r[k] * self.cartan[k][j]).sum()).collect()
    }

    /// Looks up a root given in fundamental-weight coordinates; returns the
    /// positive root index and whether the root itself is positive.
    pub fn find_root(&self, weight: &[i64]) -> Option<(usize, bool)> {
        self.weight_index.get(weight).copied()
    }

    /// Index of the positive root with the given coroot form, up to sign.
    pub fn find_coroot(&self, form: &[i64]) -> Option<(usize, bool)> {
        let neg: Vec<i64> = form.iter().map(|x| -x).collect();
        self.coroots.iter().enumerate().find_map(|(i, c)| {
            if c.as_slice() == form {
                Some((i, true))
            } else if *c == neg {
                Some((i, false))
            } else {
                None
            }
        })
    }

    /// `⟨γ, δ∨⟩` for positive roots `γ`, `δ`.
    pub fn pairing(&self, g: usize, d: usize) -> i64 {
        dot_i(&self.root_weight(g), &self.coroots[d])
    }

    /// Invariant inner product of two weight-coordinate vectors.
    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let ga = linalg::qmat_vec(&self.gram, b);
        linalg::dot_q(a, &ga)
    }

    pub fn simple_reflection(&self, i: usize) -> IMat {
        let n = self.rank;
        (0..n).map(|j| (0..n).map(|k| i64::from(j == k) - if k == i { self.cartan[i][j] } else { 0 }).collect()).collect()
    }

    /// All elements of `W`, identity first, in breadth-first order of length.
    pub fn weyl_group(&self) -> Result<&[WeylElement]> {
        self.weyl
            .get_or_init(|| {
                let n = self.rank;
                let gens: Vec<IMat> = (0..n).map(|i| self.simple_reflection(i)).collect();
                let id = linalg::identity(n);
                let mut seen: HashMap<IMat, usize> = HashMap::new();
                let mut out = vec![WeylElement { matrix: id.clone(), inverse: id.clone(), word: vec![] }];
                seen.insert(id, 0);
                let mut queue = VecDeque::from([0usize]);
                while let Some(k) = queue.pop_front() {
                    for (i, g) in gens.iter().enumerate() {
                        let m = imat_mul(g, &out[k].matrix, n, n);
                        if seen.contains_key(&m) {
                            continue;
                        }
                        if out.len() >= WEYL_SIZE_CAP {
                            return Err(Error::SizeCap(format!("Weyl group of {} exceeds {WEYL_SIZE_CAP}", self.label())));
                        }
                        let inverse = imat_mul(&out[k].inverse, g, n, n);
                        let mut word = vec![i];
                        word.extend(&out[k].word);
                        seen.insert(m.clone(), out.len());
                        queue.push_back(out.len());
                        out.push(WeylElement { matrix: m, inverse, word });
                    }
                }
                Ok(out)
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    /// Number of positive roots sent to negative roots by `w`.
    pub fn inversions(&self, w: &WeylElement) -> usize {
        (0..self.num_positive())
            .filter(|&i| {
                let img = w.act_int(&self.root_weight(i));
                !self.find_root(&img).expect("w permutes roots").1
            })
            .count()
    }

    /// Image of positive root `i` under `w`, as (positive index, sign).
    pub fn act_root(&self, w: &WeylElement, i: usize) -> (usize, bool) {
        self.find_root(&w.act_int(&self.root_weight(i))).expect("w permutes roots")
    }

    /// Positive roots of the Levi subsystem spanned by `omega`.
    pub fn levi_roots(&self, omega: &LeviSubset) -> Vec<usize> {
        (0..self.num_positive())
            .filter(|&i| self.positive_roots[i].iter().enumerate().all(|(j, c)| *c == 0 || omega.simple.contains(&j)))
            .collect()
    }

    /// Elements of the parabolic subgroup `W_Ω`.
    pub fn levi_weyl(&self, omega: &LeviSubset) -> Result<Vec<&WeylElement>> {
        Ok(self.weyl_group()?.iter().filter(|w| w.word.iter().all(|i| omega.simple.contains(i))).collect())
    }

    /// One minimal-length representative for each left coset `w W_Ω`.
    pub fn minimal_coset_reps(&self, omega: &LeviSubset) -> Result<Vec<&WeylElement>> {
        Ok(self.weyl_group()?.iter().filter(|w| omega.simple.iter().all(|&i| self.act_root(w, i).1)).collect())
    }

    /// Number of chambers cut out in `{z : z_i = 0, i ∈ Ω}` by the coroot
    /// forms of the roots outside the Levi subsystem.
    pub fn levi_chamber_count(&self, omega: &LeviSubset) -> usize {
        let free: Vec<usize> = (0..self.rank).filter(|i| !omega.simple.contains(i)).collect();
        let levi: BTreeSet<usize> = self.levi_roots(omega).into_iter().collect();
        let mut forms: Vec<Vec<Rational>> = Vec::new();
        for i in 0..self.num_positive() {
            if levi.contains(&i) {
                continue;
            }
            let f: Vec<i64> = free.iter().map(|&j| self.coroots[i][j]).collect();
            let p = linalg::primitive(&f.iter().map(|x| int(*x)).collect::<Vec<_>>());
            let mut p = p;
            linalg::orient(&mut p);
            let q: Vec<Rational> = p.iter().map(|x| int(*x)).collect();
            if !forms.contains(&q) && p.iter().any(|x| *x != 0) {
                forms.push(q);
            }
        }
        count_chambers(&forms, free.len())
    }

    /// Order of `W(M_Ω) = Norm(Σ_Ω) / W_Ω`.
    pub fn levi_normalizer_quotient(&self, omega: &LeviSubset) -> Result<usize> {
        let roots: BTreeSet<usize> = self.levi_roots(omega).into_iter().collect();
        let stab = self.weyl_group()?.iter().filter(|w| roots.iter().all(|&i| roots.contains(&self.act_root(w, i).0))).count();
        let wl = self.levi_weyl(omega)?.len();
        if stab % wl != 0 {
            return Err(Error::Divisibility(format!("stabilizer {stab} by W_Omega {wl}")));
        }
        Ok(stab / wl)
    }

    /// Predicted number of standard Levi subsets conjugate to `M_Ω`, from
    /// `chambers / |W(M_Ω)|`.
    pub fn orbit_count_check(&self, omega: &LeviSubset, chambers: usize) -> Result<usize> {
        let w = self.levi_normalizer_quotient(omega)?;
        if !chambers.is_multiple_of(w) {
            return Err(Error::Divisibility(format!("{chambers} chambers by |W(M)| = {w}")));
        }
        Ok(chambers / w)
    }

    /// Direct enumeration of subsets `Ω'` with `Σ_{Ω'}` conjugate to `Σ_Ω`.
    pub fn conjugate_standard_levis(&self, omega: &LeviSubset) -> Result<Vec<LeviSubset>> {
        let roots: BTreeSet<usize> = self.levi_roots(omega).into_iter().collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << self.rank) {
            let other = LeviSubset::new((0..self.rank).filter(|i| mask & (1 << i) != 0));
            if other.simple.len() != omega.simple.len() {
                continue;
            }
            let target: BTreeSet<usize> = self.levi_roots(&other).into_iter().collect();
            let hit = self.weyl_group()?.iter().any(|w| {
                let img: BTreeSet<usize> = roots.iter().map(|&i| self.act_root(w, i).0).collect();
                img == target
            });
            if hit {
                out.push(other);
            }
        }
        Ok(out)
    }
}

/// Number of open cones cut out of `R^dim` by the given central hyperplanes.
pub fn count_chambers(forms: &[Vec<Rational>], dim: usize) -> usize {
    enumerate_sign_vectors(forms, dim).len()
}

/// Sign vectors (with interior witnesses) of the chambers of a central
/// arrangement, built incrementally hyperplane by hyperplane.
pub fn enumerate_sign_vectors(forms: &[Vec<Rational>], dim: usize) -> Vec<(Vec<bool>, Vec<Rational>)> {
    let mut cur: Vec<Vec<bool>> = vec![vec![]];
    for _ in forms {
        let mut next = Vec::new();
        for s in &cur {
            for sign in [true, false] {
                let mut t = s.clone();
                t.push(sign);
                let rows: Vec<Vec<Rational>> = t
                    .iter()
                    .enumerate()
                    .map(|(i, &pos)| if pos { forms[i].clone() } else { forms[i].iter().map(|x| -x).collect() })
                    .collect();
                if linalg::strict_interior(&rows, dim).is_some() {
                    next.push(t);
                }
            }
        }
        cur = next;
    }
    cur.into_iter()
        .map(|s| {
            let rows: Vec<Vec<Rational>> =
                s.iter().enumerate().map(|(i, &pos)| if pos { forms[i].clone() } else { forms[i].iter().map(|x| -x).collect() }).collect();
            let w = linalg::strict_interior(&rows, dim).expect("feasible");
            (s, w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g2_coroot_table() {
        let g = RootSystem::build(RootType::G2, 2).unwrap();
        assert_eq!(g.num_positive(), 6);
        let forms: BTreeSet<Vec<i64>> = g.coroots.iter().cloned().collect();
        let expect: BTreeSet<Vec<i64>> = [[1, 0], [0, 1], [1, 1], [1, 2], [1, 3], [2, 3]].iter().map(|v| v.to_vec()).collect();
        assert_eq!(forms, expect);
        // (α+β)∨ = α∨ + 3β∨ and (3α+2β)∨ = α∨ + 2β∨
        let idx = |r: [i64; 2]| g.positive_roots.iter().position(|x| x == &r.to_vec()).unwrap();
        assert_eq!(g.coroots[idx([1, 1])], vec![1, 3]);
        assert_eq!(g.coroots[idx([3, 2])], vec![1, 2]);
        assert_eq!(g.lengths[idx([1, 0])], RootLength::Short);
        assert_eq!(g.lengths[idx([0, 1])], RootLength::Long);
    }

    #[test]
    fn weyl_group_orders() {
        for (t, n, order, pos) in [
            (RootType::A, 1, 2, 1),
            (RootType::A, 2, 6, 3),
            (RootType::A, 3, 24, 6),
            (RootType::B, 2, 8, 4),
            (RootType::C, 3, 48, 9),
            (RootType::D, 4, 192, 12),
            (RootType::G2, 2, 12, 6),
        ] {
            let r = RootSystem::build(t, n).unwrap();
            assert_eq!(r.weyl_group().unwrap().len(), order, "{t}{n}");
            assert_eq!(r.num_positive(), pos, "{t}{n}");
        }
    }

    #[test]
    fn g2_reflections_of_simple_roots() {
        let g = RootSystem::build(RootType::G2, 2).unwrap();
        let w = g.weyl_group().unwrap();
        let sa = w.iter().find(|x| x.word == vec![0]).unwrap();
        let sb = w.iter().find(|x| x.word == vec![1]).unwrap();
        let idx = |r: [i64; 2]| g.positive_roots.iter().position(|x| x == &r.to_vec()).unwrap();
        assert_eq!(g.act_root(sa, idx([0, 1])), (idx([3, 1]), true));
        assert_eq!(g.act_root(sb, idx([1, 0])), (idx([1, 1]), true));
    }

    #[test]
    fn unsupported_types() {
        assert!(RootSystem::build(RootType::G2, 3).is_err());
        assert!(RootSystem::build(RootType::D, 3).is_err());
        assert!("E".parse::<RootType>().is_err());
    }

    #[test]
    fn coset_representatives_and_orbit_counts() {
        let g = RootSystem::build(RootType::G2, 2).unwrap();
        assert_eq!(g.minimal_coset_reps(&LeviSubset::new([0])).unwrap().len(), 6);
        assert_eq!(g.minimal_coset_reps(&LeviSubset::full(2)).unwrap().len(), 1);
        assert_eq!(g.minimal_coset_reps(&LeviSubset::empty()).unwrap().len(), 12);
        for om in [LeviSubset::empty(), LeviSubset::new([0]), LeviSubset::new([1]), LeviSubset::full(2)] {
            let pred = g.orbit_count_check(&om, g.levi_chamber_count(&om)).unwrap();
            assert_eq!(pred, g.conjugate_standard_levis(&om).unwrap().len());
        }
        let a1 = RootSystem::build(RootType::A, 1).unwrap();
        let full = LeviSubset::full(1);
        assert_eq!(a1.orbit_count_check(&full, a1.levi_chamber_count(&full)).unwrap(), 1);
    }
}
