"""Canonical basis of the centre Z and the window congruence.

Z is elementary abelian, spanned by squares c_l^2 (p = 2 only) and
commutators z_{m,n} = [c_m, c_n] with m > n >= 1.  A window of size W keeps
exactly the basis elements all of whose c-indices are <= W; the discarded
complement is a normal subgroup invariant under conjugation by x and H, so
projecting to the window commutes with every group operation.

Basis elements are ordered weight-major (weight 2l for a square, m+n for a
commutator), then by kind and indices.  Ordinals are dense 0-based positions
in that order; all linear algebra runs on ordinals.
"""

from __future__ import annotations

from functools import lru_cache

CSQ = "c2"
COM = "z"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def csq(l: int) -> tuple:
    """Basis symbol for c_l^2 (only exists for p = 2)."""
    if l < 1:
        raise ValueError(f"square index must be positive, got {l}")
    return (CSQ, l)


def com(m: int, n: int) -> tuple:
    """Basis symbol for z_{m,n}; requires the canonical orientation m > n >= 1."""
    if not m > n >= 1:
        raise ValueError(f"commutator symbol needs m > n >= 1, got ({m}, {n})")
    return (COM, m, n)


def canon_z(m: int, n: int) -> tuple[tuple | None, int]:
    """Canonical form of z_{m,n} = [c_m, c_n] for arbitrary m, n >= 1.

    Returns (symbol, sign): z_{m,n} with m < n is the inverse of z_{n,m},
    and z_{m,m} is the identity (symbol None).
    """
    if m < 1 or n < 1:
        raise ValueError(f"generator indices must be positive, got ({m}, {n})")
    if m == n:
        return None, 1
    if m > n:
        return (COM, m, n), 1
    return (COM, n, m), -1


def weight(sym: tuple) -> int:
    if sym[0] == CSQ:
        return 2 * sym[1]
    return sym[1] + sym[2]


def _sort_key(sym: tuple) -> tuple:
    if sym[0] == CSQ:
        return (2 * sym[1], 0, sym[1], 0)
    return (sym[1] + sym[2], 1, sym[1], sym[2])


def enumerate_window(p: int, w: int) -> list[tuple]:
    """All in-window basis symbols in ordinal (weight-major) order."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if w < 2:
        raise ValueError(f"window must be at least 2, got {w}")
    syms: list[tuple] = []
    if p == 2:
        syms.extend((CSQ, l) for l in range(1, w + 1))
    syms.extend((COM, m, n) for m in range(2, w + 1) for n in range(1, m))
    syms.sort(key=_sort_key)
    return syms


class ZWindow:
    """Ordinal layout of the Z basis inside one window."""

    def __init__(self, p: int, w: int):
        self.p = p
        self.w = w
        self.basis = enumerate_window(p, w)
        self.dim = len(self.basis)
        self._ord = {sym: i for i, sym in enumerate(self.basis)}
        self.weights = [weight(sym) for sym in self.basis]

    def __repr__(self) -> str:
        return f"ZWindow(p={self.p}, w={self.w}, dim={self.dim})"

    def ord_csq(self, l: int) -> int | None:
        """Ordinal of c_l^2, or None if out of window."""
        if self.p != 2:
            raise ValueError("square basis symbols only exist for p = 2")
        return self._ord.get((CSQ, l))

    def ord_com(self, m: int, n: int) -> int | None:
        """Ordinal of the canonical z_{m,n} (m > n), or None if out of window."""
        return self._ord.get((COM, m, n))

    def decode(self, ordinal: int) -> tuple:
        return self.basis[ordinal]

    def add_csq(self, vec: dict[int, int], l: int, coeff: int) -> None:
        """Accumulate coeff * c_l^2 into vec, dropping out-of-window terms."""
        o = self._ord.get((CSQ, l))
        if o is None:
            return
        c = (vec.get(o, 0) + coeff) % self.p
        if c:
            vec[o] = c
        else:
            vec.pop(o, None)

    def add_z(self, vec: dict[int, int], m: int, n: int, coeff: int) -> None:
        """Accumulate coeff * z_{m,n} (any orientation) into vec, windowed."""
        if m == n:
            return
        if m < n:
            m, n = n, m
            coeff = -coeff
        o = self._ord.get((COM, m, n))
        if o is None:
            return
        c = (vec.get(o, 0) + coeff) % self.p
        if c:
            vec[o] = c
        else:
            vec.pop(o, None)


@lru_cache(maxsize=32)
def window(p: int, w: int) -> ZWindow:
    """Shared ZWindow instances; layouts are immutable once built."""
    return ZWindow(p, w)


def project_window(factors, p: int, w: int) -> dict[int, int]:
    """Project a formal Z word onto a window.

    ``factors`` is an iterable of (symbol, exponent) pairs where symbol is
    ("c2", l) or ("z", m, n) with any orientation of (m, n).  Every factor is
    canonicalized, out-of-window symbols are dropped, and coefficients are
    accumulated mod p.
    """
    zw = window(p, w)
    vec: dict[int, int] = {}
    for sym, exp in factors:
        if sym[0] == CSQ:
            if p != 2:
                raise ValueError("square symbols only exist for p = 2")
            zw.add_csq(vec, sym[1], exp)
        elif sym[0] == COM:
            zw.add_z(vec, sym[1], sym[2], exp)
        else:
            raise ValueError(f"unknown symbol kind {sym[0]!r}")
    return vec
