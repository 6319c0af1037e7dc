"""Exact g-factors of the evolution series.

``g(n, l; k)`` is the coefficient of ``(-1)^l tau^(n-k+2l) / (n-k+2l)!`` in the
amplitude gamma_{n,k}(tau). Three evaluators are provided:

* :func:`g_recursive` -- the two-dimensional recursion
  ``g[l][n] = g[l][n-1] + beta_n * g[l-1][n+1]`` (production path),
* :func:`g_nested_sum` -- the l-fold nested sum, unmemoized (reference),
* :func:`g_hessenberg` -- iterated products with the lower-Hessenberg matrix B
  applied to ``T e_k``.

All arithmetic is exact (int or Fraction).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cache, lru_cache

from .model import LadderModel


@dataclass(frozen=True)
class GFactorTable:
    """Dense table of g-factors for one starting index ``k``.

    ``rows[l][n]`` holds g^{(l)}_{n,k} for 0 <= n <= N, 0 <= l <= max_l; the
    zero region (l < k - n) is stored explicitly.
    """

    k: int
    max_l: int
    rows: tuple

    def __getitem__(self, key):
        n, l = key
        return self.rows[l][n]

    @property
    def N(self) -> int:
        return len(self.rows[0]) - 1

    def column(self, l: int) -> tuple:
        """All g^{(l)}_{n,k}, n = 0..N (the vector B^l T e_k)."""
        return self.rows[l]

    def items(self):
        for l, row in enumerate(self.rows):
            for n, g in enumerate(row):
                yield (n, l), g

    def as_dict(self) -> dict:
        return dict(self.items())


def _check_k(model: LadderModel, k: int):
    if not 0 <= k <= model.N:
        raise IndexError(f"k={k} outside 0..{model.N}")


def _initial_row(N: int, k: int) -> list:
    return [1 if n >= k else 0 for n in range(N + 1)]


def _next_row(betas, prev: list) -> list:
    # g[l][-1] = 0; prev[N+1] never needed since beta_N = 0
    N = len(prev) - 1
    row = [0] * (N + 1)
    acc = 0
    for n in range(N + 1):
        if n < N:
            acc = acc + betas[n] * prev[n + 1]
        row[n] = acc
    return row


class _RowStore:
    """Growable list of recursion rows for one (model, k); shared by the evolution code."""

    def __init__(self, model: LadderModel, k: int):
        self.betas = model.betas
        self.rows = [_initial_row(model.N, k)]

    def upto(self, max_l: int) -> list:
        while len(self.rows) <= max_l:
            self.rows.append(_next_row(self.betas, self.rows[-1]))
        return self.rows


@lru_cache(maxsize=512)
def _row_store(model: LadderModel, k: int) -> _RowStore:
    return _RowStore(model, k)


def cached_rows(model: LadderModel, k: int, max_l: int) -> list:
    """Rows 0..max_l of the recursion for (model, k), reused across calls."""
    _check_k(model, k)
    return _row_store(model, k).upto(max_l)


def g_recursive(model: LadderModel, k: int, max_l: int) -> GFactorTable:
    """g-factor table from the two-dimensional recursion."""
    _check_k(model, k)
    if max_l < 0:
        raise ValueError("max_l must be non-negative")
    rows = [_initial_row(model.N, k)]
    for _ in range(max_l):
        rows.append(_next_row(model.betas, rows[-1]))
    return GFactorTable(k, max_l, tuple(tuple(r) for r in rows))


def g_nested_sum(model: LadderModel, n: int, k: int, l: int):
    """Direct evaluation of the l-fold nested sum.

    s_1 runs over [k-l, n], s_j over [k-l+j-1, s_{j-1}+1]; each level contributes
    beta_{s_j} (beta_p = 0 outside 0..N). Inner sums are shared between outer
    indices through a per-call cache, nothing else is reused.
    """
    if l < 0 or n < 0:
        return 0
    if l == 0:
        return 1 if n >= k else 0

    @cache
    def level(j: int, upper: int):
        total = 0
        for s in range(max(k - l + j - 1, 0), upper + 1):
            b = model.beta(s)
            if b == 0:
                continue
            total += b if j == l else b * level(j + 1, s + 1)
        return total

    return level(1, n)


def hessenberg_matrix(model: LadderModel) -> list:
    """B[n][s+1] = beta_s for s <= n (lower Hessenberg, exact entries)."""
    N = model.N
    B = [[0] * (N + 1) for _ in range(N + 1)]
    for n in range(N + 1):
        for s in range(min(n, N - 1) + 1):
            B[n][s + 1] = model.betas[s]
    return B


def g_hessenberg(model: LadderModel, k: int, max_l: int) -> GFactorTable:
    """g^{(l)}_{n,k} = <e_n| B^l T |e_k> via repeated exact matrix-vector products."""
    _check_k(model, k)
    if max_l < 0:
        raise ValueError("max_l must be non-negative")
    B = hessenberg_matrix(model)
    v = _initial_row(model.N, k)  # T|e_k>
    rows = [tuple(v)]
    for _ in range(max_l):
        v = [sum(b * x for b, x in zip(Brow, v) if b) for Brow in B]
        rows.append(tuple(v))
    return GFactorTable(k, max_l, tuple(rows))


def a_power_bound(m: int, k: int) -> int:
    """L_{m,k} = min(m, floor((k+m)/2))."""
    return min(m, (k + m) // 2)


def expand_A_power(model: LadderModel, m: int, k: int, keep_overflow: bool = False) -> dict:
    """Coefficients c_j of (A + A^dag)^m (A^dag)^k |0> = sum_j c_j (A^dag)^j |0>.

    c_{k+m-2l} = g^{(l)}_{k+m-2l,k} for 0 <= l <= L_{m,k}. Indices j > N multiply
    (A^dag)^j|0>, which vanishes because the chain passes beta_N = 0; they are
    dropped unless ``keep_overflow`` is set (their values then come from the
    nested sum with beta_p = 0 beyond N).
    """
    _check_k(model, k)
    if m < 0:
        raise ValueError("m must be non-negative")
    L = a_power_bound(m, k)
    rows = cached_rows(model, k, L)
    out = {}
    for l in range(L + 1):
        j = k + m - 2 * l
        if j <= model.N:
            c = rows[l][j]
        elif keep_overflow:
            c = g_nested_sum(model, j, k, l)
        else:
            continue
        if c:
            out[j] = c
    return out
