"""Exact linear algebra over GF(p) on sparse vectors with opaque ordinals.

Vectors are dicts {ordinal: nonzero coefficient mod p}.  Subgroups of the
elementary abelian Z are echelon spans; pivots sit at the lowest ordinal of
each row, which aligns pivots with weight under the weight-major layout.

Two engines share one interface:

* ``EchelonSpan`` - the small, fully reduced (RREF) immutable-style span
  with pure ``span_insert``; rows never mutate after construction.
* ``EchelonBuilder`` - the mutable fast engine used by the density
  computations.  For p = 2 rows are packed int bitsets (XOR reduction);
  for odd p rows are dicts.  Unit basis vectors get a dedicated fast lane
  (bitmask strip / set strip) because filtration levels are mostly spanned
  by unit vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .zbasis import is_prime


@dataclass(frozen=True)
class FieldP:
    """The prime field GF(p)."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")


class FieldMismatch(ValueError):
    pass


def vec_clean(p: int, v: dict[int, int]) -> dict[int, int]:
    """Normalize coefficients mod p and drop zeros."""
    return {o: c % p for o, c in v.items() if c % p}


def vec_add(p: int, a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    """Componentwise sum mod p, zero entries dropped."""
    out = dict(a)
    for o, c in b.items():
        s = (out.get(o, 0) + c) % p
        if s:
            out[o] = s
        else:
            out.pop(o, None)
    return out


def vec_scale(p: int, a: dict[int, int], c: int) -> dict[int, int]:
    c %= p
    if c == 0:
        return {}
    if c == 1:
        return dict(a)
    return {o: (x * c) % p for o, x in a.items()}


def vec_neg(p: int, a: dict[int, int]) -> dict[int, int]:
    return {o: (-x) % p for o, x in a.items()}


def _bits_of(v: dict[int, int]) -> int:
    b = 0
    for o, c in v.items():
        if c & 1:
            b |= 1 << o
    return b


def _dict_of_bits(b: int) -> dict[int, int]:
    out = {}
    while b:
        low = b & -b
        out[low.bit_length() - 1] = 1
        b ^= low
    return out


class EchelonBuilder:
    """Mutable echelon accumulator (upper-triangular, not back-reduced).

    Rank and membership agree with full RREF; only the row shapes differ.
    """

    def __init__(self, p: int):
        self.p = p
        self.units: set[int] = set()
        if p == 2:
            self._unitmask = 0
            self._rows: dict[int, int] = {}
        else:
            self._rows_d: dict[int, dict[int, int]] = {}

    @property
    def dim(self) -> int:
        if self.p == 2:
            return len(self.units) + len(self._rows)
        return len(self.units) + len(self._rows_d)

    def add_unit(self, ordinal: int) -> None:
        if self.p == 2:
            if not (self._unitmask >> ordinal) & 1:
                self.units.add(ordinal)
                self._unitmask |= 1 << ordinal
                # a general row pivoted here is now redundant
                self._rows.pop(ordinal, None)
        else:
            if ordinal not in self.units:
                self.units.add(ordinal)
                self._rows_d.pop(ordinal, None)

    def add_units(self, ordinals) -> None:
        for o in ordinals:
            self.add_unit(o)

    def insert(self, vec: dict[int, int]) -> bool:
        """Insert a vector; returns True if the rank grew."""
        if self.p == 2:
            r = self._reduce_bits(_bits_of(vec))
            if not r:
                return False
            self._rows[(r & -r).bit_length() - 1] = r
            return True
        r = self._reduce_dict(vec)
        if not r:
            return False
        lead = min(r)
        inv = pow(r[lead], self.p - 2, self.p)
        self._rows_d[lead] = {o: (c * inv) % self.p for o, c in r.items()}
        return True

    def insert_all(self, vecs) -> int:
        added = 0
        for v in vecs:
            if self.insert(v):
                added += 1
        return added

    def reduce(self, vec: dict[int, int]) -> dict[int, int]:
        """Residue of vec after reduction; empty iff vec is in the span."""
        if self.p == 2:
            return _dict_of_bits(self._reduce_bits(_bits_of(vec)))
        return self._reduce_dict(vec)

    def contains(self, vec: dict[int, int]) -> bool:
        if self.p == 2:
            return not self._reduce_bits(_bits_of(vec))
        return not self._reduce_dict(vec)

    def clone(self) -> "EchelonBuilder":
        """Cheap structural-sharing copy (rows are never mutated in place)."""
        c = EchelonBuilder.__new__(EchelonBuilder)
        c.p = self.p
        c.units = set(self.units)
        if self.p == 2:
            c._unitmask = self._unitmask
            c._rows = dict(self._rows)
        else:
            c._rows_d = dict(self._rows_d)
        return c

    def extended_dim(self, vecs) -> int:
        """dim(span(vecs) + self) without mutating self."""
        overlay = self.clone()
        return overlay.dim + overlay.insert_all(vecs)

    # internal reduction kernels

    def _reduce_bits(self, v: int) -> int:
        v &= ~self._unitmask
        rows = self._rows
        while v:
            pivot = (v & -v).bit_length() - 1
            row = rows.get(pivot)
            if row is None:
                return v
            v ^= row
        return 0

    def _reduce_dict(self, vec: dict[int, int]) -> dict[int, int]:
        p = self.p
        v = {o: c % p for o, c in vec.items() if c % p and o not in self.units}
        rows = self._rows_d
        while v:
            lead = min(v)
            row = rows.get(lead)
            if row is None:
                return v
            c = v[lead]
            for o, rc in row.items():
                s = (v.get(o, 0) - c * rc) % p
                if s:
                    v[o] = s
                else:
                    v.pop(o, None)
        return {}


class EchelonSpan:
    """Reduced row-echelon span of a subgroup of Z (immutable style).

    Rows are dict vectors with leading coefficient 1, pivot ordinals strictly
    increasing, and no row has a nonzero entry in another row's pivot column.
    """

    def __init__(self, p: int, rows: list[dict[int, int]] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.rows: list[dict[int, int]] = rows or []
        self.pivots: dict[int, int] = {min(r): i for i, r in enumerate(self.rows)}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict[int, int]) -> dict[int, int]:
        p = self.p
        v = vec_clean(p, vec)
        changed = True
        while changed and v:
            changed = False
            for o in sorted(v):
                i = self.pivots.get(o)
                if i is not None:
                    c = v[o]
                    for po, pc in self.rows[i].items():
                        s = (v.get(po, 0) - c * pc) % p
                        if s:
                            v[po] = s
                        else:
                            v.pop(po, None)
                    changed = True
                    break
        return v

    def contains(self, vec: dict[int, int]) -> bool:
        return not self.reduce(vec)


def span_insert(s: EchelonSpan, v: dict[int, int]) -> tuple[EchelonSpan, dict[int, int]]:
    """Extend a span by one vector; returns (new span, residue of v).

    The residue is empty iff v was already in the span.  The input span is
    untouched; rows are shared where unchanged.
    """
    p = s.p
    residue = s.reduce(v)
    if not residue:
        return s, residue
    lead = min(residue)
    inv = pow(residue[lead], p - 2, p)
    new_row = {o: (c * inv) % p for o, c in residue.items()}
    rows = []
    for r in s.rows:
        c = r.get(lead, 0)
        if c:
            rr = dict(r)
            for o, rc in new_row.items():
                sdiff = (rr.get(o, 0) - c * rc) % p
                if sdiff:
                    rr[o] = sdiff
                else:
                    rr.pop(o, None)
            rows.append(rr)
        else:
            rows.append(r)
    rows.append(new_row)
    rows.sort(key=min)
    return EchelonSpan(p, rows), residue


def span_of(p: int, vecs) -> EchelonSpan:
    s = EchelonSpan(p)
    for v in vecs:
        s, _ = span_insert(s, v)
    return s


def quotient_dim(p: int, vecs, span) -> int:
    """dim(span(vecs) + span) - dim(span); span is an EchelonSpan or builder."""
    if isinstance(span, EchelonBuilder):
        if span.p != p:
            raise FieldMismatch(f"builder over GF({span.p}), vectors over GF({p})")
        return span.extended_dim(vecs) - span.dim
    if isinstance(span, EchelonSpan):
        if span.p != p:
            raise FieldMismatch(f"span over GF({span.p}), vectors over GF({p})")
        s = span
        added = 0
        for v in vecs:
            s, residue = span_insert(s, v)
            if residue:
                added += 1
        return added
    raise TypeError(f"unsupported span type {type(span)!r}")
