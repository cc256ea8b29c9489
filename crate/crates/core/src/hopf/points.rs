use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{HopfAlgebra, HopfError};
use crate::dga::StructConst;
use crate::exactlin::{kernel_basis, rank, Rat, SparseMatrix, SparseVec, Subspace};

/// Largest integer whose divisors are enumerated when searching rational eigenvalues.
const DIVISOR_LIMIT: u64 = 1 << 40;

/// An algebra map `H → T`, recorded as one character of `H` per primitive
/// idempotent of `T`, and as a matrix (columns are images of the basis of `H`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub characters: Vec<usize>,
    pub image: SparseMatrix,
}

/// The group `Hom(H, T)` under convolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPoints {
    /// The ℚ-valued characters of `H`, as values on its basis.
    pub characters: Vec<Vec<Rat>>,
    pub points: Vec<Point>,
    /// `law[i][j]` is the index of the convolution of points `i` and `j`.
    pub law: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl GroupPoints {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The ℚ-valued characters of the commutative algebra on `n` basis vectors
/// with product `mul` and unit `unit`, as joint left eigenvectors of the
/// multiplication operators.
fn algebra_characters(n: usize, unit: &SparseVec, mul: &(dyn Fn(usize, usize) -> SparseVec + Sync)) -> Result<Vec<Vec<Rat>>, HopfError> {
    // transposed multiplication operators: column j of ops[x] is row j of L_x
    let ops: Vec<SparseMatrix> =
        (0..n).into_par_iter().map(|x| SparseMatrix::from_columns(n, (0..n).map(|j| mul(x, j)).collect()).transpose()).collect();
    let mut spaces: Vec<Vec<SparseVec>> = vec![(0..n).map(SparseVec::unit).collect()];
    for op in &ops {
        let mut next = Vec::new();
        for v in spaces {
            next.extend(split(op, &v)?);
        }
        spaces = next;
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
    }
    let mut chars = Vec::new();
    for s in spaces {
        if s.len() != 1 {
            return Err(HopfError::Unsupported("the algebra is not reduced: a joint eigenspace has dimension above one".into()));
        }
        let c = &s[0];
        let at_unit = c.dot(unit);
        if at_unit.is_zero() {
            return Err(HopfError::Unsupported("a joint eigenvector vanishes on the unit".into()));
        }
        chars.push(c.scale(&at_unit.recip()).to_dense(n));
    }
    chars.sort_by(|a, b| b.cmp(a));
    Ok(chars)
}

/// Splits the invariant subspace spanned by `v` into the eigenspaces of `op`
/// with rational eigenvalues.
fn split(op: &SparseMatrix, v: &[SparseVec]) -> Result<Vec<Vec<SparseVec>>, HopfError> {
    let k = v.len();
    let sub = Subspace::span(op.nrows(), v.to_vec());
    let coords = |x: &SparseVec| sub.coordinates(x);
    let basis = sub.basis().to_vec();
    let m: Vec<Vec<Rat>> = {
        let cols: Vec<Vec<Rat>> = basis.iter().map(|b| coords(&op.mul_vec(b))).collect();
        (0..k).map(|r| (0..k).map(|c| cols[c][r].clone()).collect()).collect()
    };
    let is_scalar = (0..k).all(|r| (0..k).all(|c| (r == c && m[r][c] == m[0][0]) || (r != c && m[r][c].is_zero())));
    if is_scalar {
        return Ok(vec![basis]);
    }
    let mut out = Vec::new();
    for lambda in rational_roots(&char_poly(&m))? {
        let shifted: Vec<Vec<Rat>> =
            (0..k).map(|r| (0..k).map(|c| if r == c { &m[r][c] - &lambda } else { m[r][c].clone() }).collect()).collect();
        let ker = kernel_basis(&SparseMatrix::from_dense(&shifted));
        out.push(ker.iter().map(|y| y.iter().fold(SparseVec::new(), |acc, (i, c)| acc.axpy(c, &basis[i]))).collect());
    }
    Ok(out)
}

/// Characteristic polynomial `det(tI - M)`, lowest coefficient first, by Faddeev–LeVerrier.
fn char_poly(m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.len();
    let mut c = vec![Rat::zero(); n + 1];
    c[n] = Rat::one();
    let mut mk: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        // M_k = M (M_{k-1} + c_{n-k+1} I)
        let mut inner = mk.clone();
        for (i, row) in inner.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = (0..n)
            .map(|i| (0..n).map(|j| (0..n).filter(|&l| !m[i][l].is_zero()).map(|l| &m[i][l] * &inner[l][j]).sum()).collect())
            .collect();
        let trace: Rat = (0..n).map(|i| mk[i][i].clone()).sum();
        c[n - k] = -(&trace / &Rat::from_int(k as i64));
    }
    c
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, HopfError> {
    let n =
        n.abs().to_u64().filter(|&v| v <= DIVISOR_LIMIT).ok_or_else(|| {
            HopfError::Unsupported(format!("eigenvalue search needs the divisors of {n}, above the limit {DIVISOR_LIMIT}"))
        })?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

/// Distinct rational roots of a polynomial with rational coefficients.
fn rational_roots(p: &[Rat]) -> Result<Vec<Rat>, HopfError> {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
    let mut ints: Vec<BigInt> = p.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    while ints.last().is_some_and(|c| c.is_zero()) {
        ints.pop();
    }
    let mut roots = Vec::new();
    let zeros = ints.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push(Rat::zero());
        ints.drain(..zeros);
    }
    if ints.len() <= 1 {
        return Ok(roots);
    }
    let eval = |x: &Rat| ints.iter().rev().fold(Rat::zero(), |acc, c| &(&acc * x) + &Rat::from(c.clone()));
    let (ps, qs) = (divisors(&ints[0])?, divisors(ints.last().expect("nonempty"))?);
    for p in &ps {
        for q in &qs {
            if !p.gcd(q).is_one() {
                continue;
            }
            for s in [p.clone(), -p.clone()] {
                let x = Rat::from_bigint(s, q.clone());
                if eval(&x).is_zero() && !roots.contains(&x) {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

/// The ℚ-valued characters of `h`.
pub fn characters(h: &HopfAlgebra) -> Result<Vec<Vec<Rat>>, HopfError> {
    if let Some(b) = h.bound() {
        if (0..h.dim()).any(|i| (0..h.dim()).any(|j| h.product(i, j).is_none())) {
            return Err(HopfError::Truncated(b));
        }
    }
    algebra_characters(h.dim(), h.unit(), &|i, j| h.product(i, j).cloned().expect("full multiplication"))
}

/// Dimension of the cotangent space `I/I²` at the identity, from the
/// products that are known.
fn cotangent_dimension(h: &HopfAlgebra) -> usize {
    let n = h.dim();
    let counit = SparseVec::from_dense(h.counit());
    let ideal = kernel_basis(&SparseMatrix::from_rows(n, &[counit]));
    let mut squares = Vec::new();
    for a in &ideal {
        for b in &ideal {
            if let Some(p) = h.mul(a, b) {
                squares.push(p);
            }
        }
    }
    ideal.len() - rank(&SparseMatrix::from_columns(n, squares))
}

/// All algebra maps `h → target` with the convolution group law.
///
/// `h` must be finite and reduced (its cotangent space at the identity must
/// vanish); `target` must be concentrated in degree 0 with zero differential
/// and isomorphic to a product of copies of ℚ.
pub fn group_points(h: &HopfAlgebra, target: &StructConst) -> Result<GroupPoints, HopfError> {
    let dimension = cotangent_dimension(h);
    if dimension > 0 {
        return Err(HopfError::InfiniteVariety { dimension });
    }
    let chars = characters(h)?;

    let m = target.dim();
    if target.basis().iter().any(|b| b.degree != 0) || !target.differential().is_zero() {
        return Err(HopfError::NotSplit("the target must sit in degree 0 with zero differential".into()));
    }
    for i in 0..m {
        for j in i..m {
            if target.product(i, j) != target.product(j, i) {
                return Err(HopfError::NotSplit(format!("the target is not commutative at ({i}, {j})")));
            }
        }
    }
    let tchars = algebra_characters(m, &SparseVec::unit(target.unit_index()), &|i, j| target.product(i, j).clone())
        .map_err(|e| HopfError::NotSplit(e.to_string()))?;
    if tchars.len() != m {
        return Err(HopfError::NotSplit(format!("{} rational characters for dimension {m}", tchars.len())));
    }
    // primitive idempotents: the dual basis to the characters of the target
    let psi = SparseMatrix::from_dense(&tchars);
    let idempotents: Vec<SparseVec> = (0..m)
        .map(|k| crate::exactlin::solve(&psi, &SparseVec::unit(k)).ok_or_else(|| HopfError::NotSplit("characters are dependent".into())))
        .collect::<Result<_, _>>()?;

    let c = chars.len();
    let index_of = |v: &[Rat]| chars.iter().position(|x| x.as_slice() == v);
    let convolve = |a: &[Rat], b: &[Rat]| -> Vec<Rat> {
        (0..h.dim()).map(|k| h.coproduct(k).iter().map(|(&(i, j), x)| &(x * &a[i]) * &b[j]).sum()).collect()
    };
    let bad = |what: String| HopfError::NotAGroup(what);
    let mut char_law = vec![vec![0; c]; c];
    for i in 0..c {
        for j in 0..c {
            char_law[i][j] = index_of(&convolve(&chars[i], &chars[j]))
                .ok_or_else(|| bad(format!("the convolution of characters {i} and {j} is not a character")))?;
        }
    }
    let char_identity = index_of(h.counit()).ok_or_else(|| bad("the counit is not a character".into()))?;
    let char_inverse = (0..c)
        .map(|i| {
            let s: Vec<Rat> = (0..h.dim()).map(|k| h.antipode().column(k).iter().map(|(j, x)| x * &chars[i][j]).sum()).collect();
            index_of(&s).ok_or_else(|| bad(format!("character {i} composed with the antipode is not a character")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    // points are m-tuples of characters, enumerated in lexicographic order
    let total = c
        .checked_pow(m as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| HopfError::Unsupported(format!("{c}^{m} points are too many to tabulate")))?;
    let tuple = |mut k: usize| -> Vec<usize> {
        let mut t = vec![0; m];
        for slot in t.iter_mut().rev() {
            *slot = k % c;
            k /= c;
        }
        t
    };
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &x| acc * c + x);
    let points: Vec<Point> = (0..total)
        .into_par_iter()
        .map(|k| {
            let t = tuple(k);
            let cols = (0..h.dim())
                .map(|x| t.iter().zip(&idempotents).fold(SparseVec::new(), |acc, (&ch, e)| acc.axpy(&chars[ch][x], e)))
                .collect();
            Point { characters: t, image: SparseMatrix::from_columns(m, cols) }
        })
        .collect();
    let law: Vec<Vec<usize>> = points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|q| encode(&p.characters.iter().zip(&q.characters).map(|(&a, &b)| char_law[a][b]).collect::<Vec<_>>()))
                .collect()
        })
        .collect();
    let identity = encode(&vec![char_identity; m]);
    let inverse: Vec<usize> = points.iter().map(|p| encode(&p.characters.iter().map(|&a| char_inverse[a]).collect::<Vec<_>>())).collect();

    for a in 0..total {
        if law[identity][a] != a || law[a][identity] != a {
            return Err(bad(format!("point {identity} is not a two-sided identity at {a}")));
        }
        if law[a][inverse[a]] != identity || law[inverse[a]][a] != identity {
            return Err(bad(format!("point {} is not inverse to {a}", inverse[a])));
        }
    }
    if let Some((a, b, cc)) = (0..total)
        .into_par_iter()
        .flat_map_iter(|a| (0..total).flat_map(move |b| (0..total).map(move |cc| (a, b, cc))))
        .find_any(|&(a, b, cc)| law[law[a][b]][cc] != law[a][law[b][cc]])
    {
        return Err(bad(format!("convolution is not associative at ({a}, {b}, {cc})")));
    }
    Ok(GroupPoints { characters: chars, points, law, identity, inverse })
}
