"""Small dense exact linear algebra over a FieldSpec (lists of lists)."""

from __future__ import annotations

from .exactnum import FieldSpec

__all__ = ["matrix_inverse", "matrix_mul", "matrix_rank", "identity_matrix"]


def identity_matrix(n: int, field: FieldSpec):
    return [[field.one() if i == j else field.zero() for j in range(n)] for i in range(n)]


def matrix_mul(a, b, field: FieldSpec):
    n, m = len(a), len(b[0]) if b else 0
    k = len(b)
    out = [[field.zero() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for t in range(k):
            ait = a[i][t]
            if ait.is_zero():
                continue
            row_b = b[t]
            row_o = out[i]
            for j in range(m):
                if not row_b[j].is_zero():
                    row_o[j] = row_o[j] + ait * row_b[j]
    return out


def matrix_inverse(rows, field: FieldSpec):
    n = len(rows)
    if n == 0:
        return []
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    aug = [[rows[i][j] for j in range(n)] + [field.one() if i == j else field.zero()
                                             for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = aug[col][col].inv()
        aug[col] = [x * scale for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def matrix_rank(rows, field: FieldSpec) -> int:
    if not rows:
        return 0
    mat = [list(r) for r in rows]
    n, m = len(mat), len(mat[0])
    rank = 0
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, n) if not mat[r][col].is_zero()), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        scale = mat[row][col].inv()
        mat[row] = [x * scale for x in mat[row]]
        for r in range(n):
            if r != row and not mat[r][col].is_zero():
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[row])]
        rank += 1
        row += 1
        if row == n:
            break
    return rank
