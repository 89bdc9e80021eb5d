"""Pure-Python reference kernel for canonical row echelon form.

The compiled module ``equitor._core`` implements exactly the same pivoting
rules with machine integers; both must return identical results.
"""


def echelon(a, transform=True):
    """Row Hermite normal form of an integer matrix.

    Returns ``(h, u, pivots)`` with ``u * a == h``.  ``u`` is unimodular (or
    ``None`` when ``transform`` is false) and ``pivots`` lists the pivot
    column of each nonzero row of ``h``.  Pivots are positive and the entries
    above a pivot lie in ``[0, pivot)``.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    h = [list(row) for row in a]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if transform else None
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            p = -1
            best = 0
            for i in range(r, m):
                x = h[i][c]
                if x:
                    ax = -x if x < 0 else x
                    if p < 0 or ax < best:
                        p, best = i, ax
            if p < 0:
                break
            if p != r:
                h[p], h[r] = h[r], h[p]
                if transform:
                    u[p], u[r] = u[r], u[p]
            prow = h[r]
            pv = prow[c]
            clean = True
            for i in range(r + 1, m):
                x = h[i][c]
                if x:
                    q = x // pv
                    row = h[i]
                    for j in range(c, n):
                        if prow[j]:
                            row[j] -= q * prow[j]
                    if transform:
                        urow, up = u[i], u[r]
                        for j in range(m):
                            if up[j]:
                                urow[j] -= q * up[j]
                    if row[c]:
                        clean = False
            if clean:
                break
        if p < 0 and h[r][c] == 0:
            continue
        prow = h[r]
        if prow[c] < 0:
            for j in range(c, n):
                prow[j] = -prow[j]
            if transform:
                u[r] = [-x for x in u[r]]
        pv = prow[c]
        for i in range(r):
            x = h[i][c]
            q = x // pv
            if q:
                row = h[i]
                for j in range(c, n):
                    if prow[j]:
                        row[j] -= q * prow[j]
                if transform:
                    urow, up = u[i], u[r]
                    for j in range(m):
                        if up[j]:
                            urow[j] -= q * up[j]
        pivots.append(c)
        r += 1
    return h, u, pivots
