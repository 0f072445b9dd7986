"""Exact linear algebra over Z/p (p prime) with numpy integer arrays.

Modulus 1 is accepted and stands for the zero ring: every space is trivial.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def check_modulus(p: int) -> None:
    if p != 1 and not is_prime(p):
        raise ValueError(f"linear algebra needs a prime modulus, got {p}")


def as_matrix(M, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    A = np.asarray(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if rows is None else A.reshape(rows, -1)
    if A.size == 0 and rows is not None and cols is not None:
        A = np.zeros((rows, cols), dtype=np.int64)
    return A


def rref(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p and the pivot columns."""
    check_modulus(p)
    A = np.array(M, dtype=np.int64) % max(p, 1)
    if p == 1:
        return np.zeros_like(A), []
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        mask = np.nonzero(col)[0]
        if mask.size:
            A[mask] = (A[mask] - np.outer(col[mask], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _rank_gf2(A: np.ndarray) -> int:
    # rows as Python ints, xor elimination keyed by leading bit
    piv: dict[int, int] = {}
    packed = np.packbits(A.astype(bool), axis=1)
    for row in packed:
        v = int.from_bytes(row.tobytes(), "big")
        while v:
            top = v.bit_length() - 1
            w = piv.get(top)
            if w is None:
                piv[top] = v
                break
            v ^= w
    return len(piv)


def _rank_sparse(A: np.ndarray, p: int) -> int:
    piv: dict[int, dict] = {}
    for r in range(A.shape[0]):
        nz = np.nonzero(A[r])[0]
        row = {int(c): int(A[r, c]) for c in nz}
        while row:
            c = min(row)
            prow = piv.get(c)
            if prow is None:
                inv = pow(row[c], -1, p)
                piv[c] = {k: v * inv % p for k, v in row.items()}
                break
            f = row[c]
            for k, v in prow.items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(piv)


def rank(M: np.ndarray, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0 or p == 1:
        return 0
    check_modulus(p)
    if M.shape[0] * M.shape[1] < 40000:
        return len(rref(M, p)[1])
    A = np.asarray(M, dtype=np.int64) % p
    # coboundary matrices are very sparse; eliminate on whichever side is shorter
    if A.shape[0] > A.shape[1]:
        A = A.T
    return _rank_gf2(A) if p == 2 else _rank_sparse(A, p)


def kernel(M: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel as the columns of the returned matrix."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if p == 1:
        return np.zeros((cols, 0), dtype=np.int64)
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(M, p)
    free = [c for c in range(cols) if c not in set(piv)]
    K = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, pc in enumerate(piv):
            K[pc, j] = (-R[i, f]) % p
    return K


def kernel_dim(M: np.ndarray, p: int) -> int:
    M = np.asarray(M)
    if p == 1:
        return 0
    return M.shape[1] - rank(M, p)


def solve(M: np.ndarray, b, p: int) -> np.ndarray | None:
    """Some x with M x = b (mod p), or None."""
    M = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    cols = M.shape[1]
    if p == 1:
        return np.zeros(cols, dtype=np.int64)
    if M.shape[0] == 0:
        return np.zeros(cols, dtype=np.int64) if b.size == 0 else None
    aug = np.concatenate([M, b.reshape(-1, 1)], axis=1)
    R, piv = rref(aug, p)
    if cols in piv:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, cols]
    return x % p


def in_column_space(M: np.ndarray, b, p: int) -> bool:
    return solve(M, b, p) is not None


def complement_basis(Z: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Columns of Z extending a basis of span(B) to one of span(Z) (span(B) <= span(Z)).
    The returned columns represent a basis of span(Z)/span(B)."""
    if p == 1:
        return np.zeros((Z.shape[0], 0), dtype=np.int64)
    chosen = []
    base = B.copy() if B.size else np.zeros((Z.shape[0], 0), dtype=np.int64)
    r = rank(base.T, p) if base.size else 0
    for j in range(Z.shape[1]):
        trial = np.concatenate([base, Z[:, j:j + 1]], axis=1)
        rt = rank(trial.T, p)
        if rt > r:
            base, r = trial, rt
            chosen.append(j)
    return Z[:, chosen] if chosen else np.zeros((Z.shape[0], 0), dtype=np.int64)


def span_elements(basis: np.ndarray, p: int, limit: int = 1 << 16):
    """All F_p-combinations of the basis columns (at most ``limit``)."""
    n, k = basis.shape
    if p == 1 or k == 0:
        yield np.zeros(n, dtype=np.int64)
        return
    if p ** k > limit:
        raise ValueError(f"span has {p}^{k} elements, above the enumeration limit {limit}")
    from itertools import product

    for coeffs in product(range(p), repeat=k):
        yield (basis @ np.array(coeffs, dtype=np.int64)) % p


def reduce_mod_span(v: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Canonical representative of v + span(B): reduce against an RREF of B^T."""
    v = np.asarray(v, dtype=np.int64) % max(p, 1)
    if p == 1:
        return np.zeros_like(v)
    if B.size == 0:
        return v
    R, piv = rref(B.T, p)
    v = v.copy()
    for i, c in enumerate(piv):
        if v[c]:
            v = (v - v[c] * R[i]) % p
    return v
