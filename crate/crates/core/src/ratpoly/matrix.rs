use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;

/// Dense row-major rational matrix.
pub type Matrix = Vec<Vec<Rational>>;

/// Exact determinant. Rows are scaled to integers and the product of the
/// scale factors is divided out after fraction-free elimination.
pub fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            scale *= &l;
            row.iter().map(|c| c.numer() * (&l / c.denom())).collect()
        })
        .collect();
    Rational::new(determinant_int(rows), scale)
}

/// Bareiss fraction-free elimination; every division is exact.
pub fn determinant_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rational::{rat, rat_int};

    fn ints(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect()
    }

    // Leibniz expansion; exponential but independent of elimination.
    fn leibniz(m: &Matrix) -> Rational {
        fn rec(m: &Matrix, row: usize, used: &mut Vec<bool>, sign: i64) -> Rational {
            let n = m.len();
            if row == n {
                return rat_int(sign);
            }
            let mut acc = rat_int(0);
            let mut inversions_before = 0;
            for col in 0..n {
                if used[col] {
                    continue;
                }
                // sign flips once per unused column to the left
                let s = if inversions_before % 2 == 0 { sign } else { -sign };
                if !m[row][col].is_zero() {
                    used[col] = true;
                    acc += &m[row][col] * rec(m, row + 1, used, s);
                    used[col] = false;
                }
                inversions_before += 1;
            }
            acc
        }
        rec(m, 0, &mut vec![false; m.len()], 1)
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&ints(&[&[2, 0], &[0, 3]])), rat_int(6));
        assert_eq!(determinant(&ints(&[&[0, 1], &[1, 0]])), rat_int(-1));
        assert_eq!(determinant(&ints(&[&[1, 2], &[2, 4]])), rat_int(0));
        let m = vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 4), rat(1, 5)],
        ];
        assert_eq!(determinant(&m), rat(1, 10) - rat(1, 12));
    }

    #[test]
    fn matches_leibniz_with_zero_pivots() {
        let m = ints(&[
            &[0, 2, -1, 3, 0],
            &[0, 0, 4, 1, 2],
            &[5, -2, 0, 0, 1],
            &[1, 1, 1, 0, -3],
            &[2, 0, -4, 7, 0],
        ]);
        assert_eq!(determinant(&m), leibniz(&m));
    }
}
