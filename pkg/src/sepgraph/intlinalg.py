"""Smith normal form over the integers with exact Python ints."""

from __future__ import annotations


def smith_diagonal(matrix) -> list[int]:
    """Nonzero diagonal entries d1 | d2 | ... of the Smith normal form."""
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        pivot = _smallest_nonzero(a, t, rows, cols)
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                # divisibility: fold any offending entry into row t
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            pivot = _smallest_nonzero(a, t, rows, cols, line_only=True)
            pi, pj = pivot
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _smallest_nonzero(a, t, rows, cols, line_only=False):
    best = None
    if line_only:
        cells = [(i, t) for i in range(t, rows)] + [(t, j) for j in range(t, cols)]
    else:
        cells = ((i, j) for i in range(t, rows) for j in range(t, cols))
    for i, j in cells:
        x = a[i][j]
        if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
            best = (i, j)
    return best


def cokernel(matrix, ncols: int) -> tuple[int, list[int]]:
    """Structure of Z^ncols modulo the row span: (free rank, torsion factors > 1)."""
    diag = smith_diagonal(matrix) if matrix else []
    return ncols - len(diag), [d for d in diag if d > 1]
