//! Systematic encoding for labeled parity-check matrices: Gauss-Jordan
//! elimination over GF(q) with column pivoting, preferring pivots in the
//! rightmost columns so the information positions stay at the front of the
//! codeword whenever the trailing square block is invertible.

use super::{CodeError, LabeledParityCheck};
use crate::gf::{Field, FieldElement};

/// Encoder for c = [u | p] layouts: information symbols are placed at
/// `info_cols` (in order) and each parity position gets a dense linear
/// combination of the information word.
#[derive(Debug, Clone)]
pub struct SystematicEncoder {
    field: Field,
    n_c: usize,
    info_cols: Vec<usize>,
    parity_cols: Vec<usize>,
    /// One row per parity position: parity[r] = sum_j rows[r][j] * u[j].
    rows: Vec<Vec<FieldElement>>,
}

impl SystematicEncoder {
    pub fn k(&self) -> usize {
        self.info_cols.len()
    }

    pub fn n_c(&self) -> usize {
        self.n_c
    }

    /// Codeword positions holding the information word, ascending.
    pub fn info_cols(&self) -> &[usize] {
        &self.info_cols
    }

    /// Codeword positions holding parity, ascending.
    pub fn parity_cols(&self) -> &[usize] {
        &self.parity_cols
    }

    /// True when the information word occupies positions 0..k in order, the
    /// layout the shaping chain requires.
    pub fn is_prefix_layout(&self) -> bool {
        self.info_cols.iter().enumerate().all(|(i, &c)| i == c)
    }

    /// Dense parity part P (k x (n_c - k)): parity[j] = sum_i u[i] P[i][j].
    pub fn parity_matrix(&self) -> Vec<Vec<FieldElement>> {
        let k = self.k();
        let mut p = vec![vec![FieldElement::ZERO; self.parity_cols.len()]; k];
        for (r, row) in self.rows.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                p[i][r] = v;
            }
        }
        p
    }

    pub fn encode(&self, u: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if u.len() != self.k() {
            return Err(CodeError::InfoLengthMismatch { expected: self.k(), got: u.len() });
        }
        let mut c = vec![FieldElement::ZERO; self.n_c];
        for (i, &col) in self.info_cols.iter().enumerate() {
            c[col] = u[i];
        }
        for (r, &col) in self.parity_cols.iter().enumerate() {
            let mut acc = FieldElement::ZERO;
            for (j, &coef) in self.rows[r].iter().enumerate() {
                if !coef.is_zero() && !u[j].is_zero() {
                    acc = self.field.add(acc, self.field.mul(coef, u[j]));
                }
            }
            c[col] = acc;
        }
        Ok(c)
    }
}

/// Systematic form of a full-row-rank parity-check matrix. Pivots are
/// searched from the last column backwards, so when the trailing
/// m_c x m_c block is invertible the information positions are exactly
/// 0..k in order (identity permutation).
pub fn systematic_form(h: &LabeledParityCheck) -> Result<SystematicEncoder, CodeError> {
    let field = h.field().clone();
    let (m_c, n_c) = (h.m_c(), h.n_c());
    let mut mat = vec![vec![FieldElement::ZERO; n_c]; m_c];
    for (r, row) in h.rows().iter().enumerate() {
        for &(c, l) in row {
            mat[r][c] = l;
        }
    }

    let mut pivot_col_of_row = vec![usize::MAX; m_c];
    let mut is_pivot_col = vec![false; n_c];
    for step in 0..m_c {
        // rightmost non-pivot column with a nonzero entry in an unused row
        let mut found = None;
        'cols: for col in (0..n_c).rev() {
            if is_pivot_col[col] {
                continue;
            }
            for row in step..m_c {
                if !mat[row][col].is_zero() {
                    found = Some((row, col));
                    break 'cols;
                }
            }
        }
        let (prow, pcol) = match found {
            Some(x) => x,
            None => return Err(CodeError::RankDeficient { rank: step, rows: m_c }),
        };
        mat.swap(step, prow);
        is_pivot_col[pcol] = true;
        pivot_col_of_row[step] = pcol;
        // normalize pivot row
        let inv = field.inv(mat[step][pcol]).unwrap();
        for v in mat[step].iter_mut() {
            *v = field.mul(*v, inv);
        }
        // eliminate the pivot column everywhere else
        for row in 0..m_c {
            if row == step || mat[row][pcol].is_zero() {
                continue;
            }
            let factor = mat[row][pcol];
            let (head, tail) = mat.split_at_mut(step.max(row));
            let (src, dst) = if row > step {
                (&head[step], &mut tail[0])
            } else {
                (&tail[0], &mut head[row])
            };
            for (d, &s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d = field.add(*d, field.mul(factor, s));
                }
            }
        }
    }

    let info_cols: Vec<usize> = (0..n_c).filter(|&c| !is_pivot_col[c]).collect();
    let info_index: std::collections::HashMap<usize, usize> =
        info_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    // order parity rows by ascending pivot column
    let mut order: Vec<usize> = (0..m_c).collect();
    order.sort_by_key(|&r| pivot_col_of_row[r]);
    let parity_cols: Vec<usize> = order.iter().map(|&r| pivot_col_of_row[r]).collect();
    let rows: Vec<Vec<FieldElement>> = order
        .iter()
        .map(|&r| {
            // c[pivot] = sum over info columns of mat[r][col] * c[col]
            // (characteristic 2: moving terms across keeps coefficients)
            let mut coeffs = vec![FieldElement::ZERO; info_cols.len()];
            for (col, &v) in mat[r].iter().enumerate() {
                if !v.is_zero() && !is_pivot_col[col] {
                    coeffs[info_index[&col]] = v;
                }
            }
            coeffs
        })
        .collect();

    Ok(SystematicEncoder { field, n_c, info_cols, parity_cols, rows })
}

/// Encode an information word with a systematic encoder.
pub fn encode(u: &[FieldElement], enc: &SystematicEncoder) -> Result<Vec<FieldElement>, CodeError> {
    enc.encode(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_code, Lifting};
    use crate::gf::Field;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn syndrome_is_zero(h: &LabeledParityCheck, c: &[FieldElement]) -> bool {
        let f = h.field();
        h.rows().iter().all(|row| {
            let mut acc = FieldElement::ZERO;
            for &(col, l) in row {
                acc = f.add(acc, f.mul(l, c[col]));
            }
            acc.is_zero()
        })
    }

    #[test]
    fn identity_tail_gives_prefix_layout() {
        // H = [A | I] over GF(4)
        let f = Field::new(2).unwrap();
        let e = |v: usize| f.element(v).unwrap();
        let h = LabeledParityCheck::from_rows(
            f.clone(),
            4,
            3,
            vec![vec![(0, e(2)), (1, e(1)), (2, e(1))], vec![(0, e(3)), (1, e(2)), (3, e(1))]],
            None,
        );
        let enc = systematic_form(&h).unwrap();
        assert!(enc.is_prefix_layout());
        assert_eq!(enc.info_cols(), &[0, 1]);
        assert_eq!(enc.parity_cols(), &[2, 3]);
        // P read directly from A
        let p = enc.parity_matrix();
        assert_eq!(p[0][0], e(2));
        assert_eq!(p[1][0], e(1));
        assert_eq!(p[0][1], e(3));
        assert_eq!(p[1][1], e(2));
    }

    #[test]
    fn encode_zero_gives_zero() {
        let field = Field::new(6).unwrap();
        let h = build_code(4, 8, &field, 5).unwrap();
        let enc = systematic_form(&h).unwrap();
        let c = enc.encode(&vec![FieldElement::ZERO; enc.k()]).unwrap();
        assert!(c.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn exhaustive_gf4_codewords_satisfy_syndrome() {
        // random full-rank 4x8 GF(4) matrix: all 4^4 information words
        let f = Field::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = loop {
            let rows: Vec<Vec<(usize, FieldElement)>> = (0..4)
                .map(|_| {
                    let mut cols: Vec<usize> = (0..8).collect();
                    // keep 4 random columns per row
                    for _ in 0..4 {
                        cols.remove(rng.gen_range(0..cols.len()));
                    }
                    cols.iter().map(|&c| (c, f.element(rng.gen_range(1..4)).unwrap())).collect()
                })
                .collect();
            let cand = LabeledParityCheck::from_rows(f.clone(), 8, 4, rows, None);
            if systematic_form(&cand).is_ok() {
                break cand;
            }
        };
        let enc = systematic_form(&h).unwrap();
        assert_eq!(enc.k(), 4);
        for w in 0..256usize {
            let u: Vec<FieldElement> =
                (0..4).map(|i| f.element((w >> (2 * i)) & 3).unwrap()).collect();
            let c = enc.encode(&u).unwrap();
            assert!(syndrome_is_zero(&h, &c));
            // systematic symbols hold u
            for (i, &col) in enc.info_cols().iter().enumerate() {
                assert_eq!(c[col], u[i]);
            }
        }
    }

    #[test]
    fn encode_is_linear() {
        let field = Field::new(6).unwrap();
        let h = build_code(8, 24, &field, 1).unwrap();
        let enc = systematic_form(&h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rand_u = |rng: &mut ChaCha8Rng| -> Vec<FieldElement> {
            (0..enc.k()).map(|_| field.element(rng.gen_range(0..64)).unwrap()).collect()
        };
        for _ in 0..20 {
            let u1 = rand_u(&mut rng);
            let u2 = rand_u(&mut rng);
            let sum: Vec<FieldElement> =
                u1.iter().zip(&u2).map(|(&a, &b)| field.add(a, b)).collect();
            let c1 = enc.encode(&u1).unwrap();
            let c2 = enc.encode(&u2).unwrap();
            let cs = enc.encode(&sum).unwrap();
            for i in 0..cs.len() {
                assert_eq!(cs[i], field.add(c1[i], c2[i]));
            }
        }
    }

    #[test]
    fn mode1_code_full_rank_prefix_and_random_codewords() {
        let field = Field::new(6).unwrap();
        let h = build_code(8, 24, &field, 1).unwrap();
        let enc = systematic_form(&h).unwrap();
        assert_eq!(enc.k(), 72);
        assert!(enc.is_prefix_layout());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let u: Vec<FieldElement> =
                (0..72).map(|_| field.element(rng.gen_range(0..64)).unwrap()).collect();
            let c = enc.encode(&u).unwrap();
            assert!(syndrome_is_zero(&h, &c));
        }
    }

    #[test]
    fn rank_deficient_reported() {
        // duplicate rows over GF(4)
        let f = Field::new(2).unwrap();
        let e = |v: usize| f.element(v).unwrap();
        let h = LabeledParityCheck::from_rows(
            f.clone(),
            4,
            2,
            vec![vec![(0, e(1)), (1, e(2))], vec![(0, e(1)), (1, e(2))]],
            None,
        );
        assert_eq!(
            systematic_form(&h).unwrap_err(),
            CodeError::RankDeficient { rank: 1, rows: 2 }
        );
    }

    #[test]
    fn lifted_structure_matches_shift_table() {
        let lifting = Lifting { circulant: 4, shifts: vec![(0, 1), (2, 3)] };
        let s = lifting.expand();
        assert_eq!(s.m_c, 4);
        assert_eq!(s.n_c, 8);
        // column 0 (block 0, v=0): rows 0 and 1
        assert!(s.rows[0].contains(&0) && s.rows[1].contains(&0));
        // column 4 (block 1, v=0): rows 2 and 3
        assert!(s.rows[2].contains(&4) && s.rows[3].contains(&4));
    }
}
