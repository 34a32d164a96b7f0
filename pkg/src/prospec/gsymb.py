"""Exact symbolic arithmetic in the group G = <x, y> inside a window.

Normal form: every element is x^e * (product of c_i^{a_i}, indices ascending)
* (vector in Z), where c_1 = y, c_{i+1} = [c_i, x], and Z is spanned by the
squares c_l^2 (p = 2) and the commutators z_{m,n} = [c_m, c_n].

Collection rules, all derived from the commutator convention
[a, b] = a^{-1} b^{-1} a b (see docs/collection.md):

* c_i^x = c_i * c_{i+1};
* c_j c_i = c_i c_j z_{j,i} for j > i, with z_{j,i} central in H;
* for p = 2, c_i^2 is the central square basis element and H^2 <= Z;
* for odd p, c_i^p = 1 and Z is spanned by the z_{m,n} alone;
* conjugation by x acts on Z basis vectors by
  z_{m,n}^x = z_{m,n} z_{m+1,n} z_{m,n+1} z_{m+1,n+1} and (p = 2)
  (c_l^2)^x = c_l^2 c_{l+1}^2 z_{l+1,l}, and by the same shapes with step
  t = p^j in place of 1 for conjugation by x^{p^j}.

Everything is computed modulo the normal subgroup generated by all basis
symbols with a c-index exceeding the window size W; that subgroup is
invariant under conjugation, so projection commutes with every operation
and intermediate overflow is silently projected away.
"""

from __future__ import annotations

from .zbasis import ZWindow, window


class WindowOverflow(ValueError):
    """A defining index of the requested element exceeds the window."""


def _merge_z(p: int, *vecs) -> dict[int, int]:
    out: dict[int, int] = {}
    for v in vecs:
        for o, c in v.items():
            s = (out.get(o, 0) + c) % p
            if s:
                out[o] = s
            else:
                out.pop(o, None)
    return out


def _neg_z(p: int, v: dict[int, int]) -> dict[int, int]:
    return {o: (-c) % p for o, c in v.items()}


class GroupContext:
    """Shared window context: prime, window size, ordinal layout, memo tables."""

    def __init__(self, p: int, w: int):
        self.zw: ZWindow = window(p, w)
        self.p = p
        self.w = w
        # conjugation tables: (j, sign) -> {i: (hpart, zpart)} for c_i^(x^(±p^j))
        self._cc: dict[tuple[int, int], dict[int, tuple[dict, dict]]] = {}

    def __repr__(self) -> str:
        return f"GroupContext(p={self.p}, w={self.w})"

    # element constructors

    def identity(self) -> "GElement":
        return GElement(self, 0, {}, {})

    def x(self, e: int = 1) -> "GElement":
        return GElement(self, e, {}, {})

    def y(self) -> "GElement":
        return self.c(1)

    def c(self, i: int) -> "GElement":
        if i < 1:
            raise ValueError(f"c index must be positive, got {i}")
        if i > self.w:
            return self.identity()
        return GElement(self, 0, {i: 1}, {})

    def z(self, m: int, n: int) -> "GElement":
        vec: dict[int, int] = {}
        self.zw.add_z(vec, m, n, 1)
        return GElement(self, 0, {}, vec)

    def csq(self, l: int) -> "GElement":
        vec: dict[int, int] = {}
        self.zw.add_csq(vec, l, 1)
        return GElement(self, 0, {}, vec)

    def from_parts(self, xexp: int, h: dict[int, int], z: dict[int, int]) -> "GElement":
        hh = {i: c % self.p for i, c in h.items() if 1 <= i <= self.w and c % self.p}
        zz = {o: c % self.p for o, c in z.items() if c % self.p}
        return GElement(self, xexp, hh, zz)

    def z_unit(self, m: int, n: int) -> dict[int, int]:
        vec: dict[int, int] = {}
        self.zw.add_z(vec, m, n, 1)
        return vec

    # H-layer collection kernels

    def _hmul(self, h1: dict[int, int], h2: dict[int, int]) -> tuple[dict, dict]:
        """Concatenate two canonical c-words; returns (word, Z correction)."""
        p = self.p
        zw = self.zw
        zd: dict[int, int] = {}
        if h1 and h2:
            items1 = list(h1.items())
            for j, b in h2.items():
                for i, a in items1:
                    if i > j:
                        zw.add_z(zd, i, j, a * b)
        out = dict(h1)
        for j, b in h2.items():
            e = out.get(j, 0) + b
            if p == 2 and e >= 2:
                zw.add_csq(zd, j, e // 2)
            e %= p
            if e:
                out[j] = e
            else:
                out.pop(j, None)
        return out, zd

    def _hz_pow(self, h: dict[int, int], z: dict[int, int], e: int) -> tuple[dict, dict]:
        """Integer power of an element of H (closed form; H has class 2)."""
        p = self.p
        zw = self.zw
        if e == 0:
            return {}, {}
        out: dict[int, int] = {}
        zd: dict[int, int] = {o: (c * e) % p for o, c in z.items() if (c * e) % p}
        c2 = e * (e - 1) // 2
        items = list(h.items())
        for a_idx in range(len(items)):
            i, ai = items[a_idx]
            for b_idx in range(a_idx + 1, len(items)):
                j, aj = items[b_idx]
                if i > j:
                    zw.add_z(zd, i, j, c2 * ai * aj)
                else:
                    zw.add_z(zd, j, i, c2 * ai * aj)
        for i, ai in items:
            ee = e * ai
            if p == 2:
                if ee & 1:
                    out[i] = 1
                zw.add_csq(zd, i, (ee % 4) // 2)
            else:
                r = ee % p
                if r:
                    out[i] = r
        return out, zd

    # Z-layer conjugation

    def _z_shift_terms(self, vec: dict[int, int], t: int) -> dict[int, int]:
        """[v, x^t] for v in Z, i.e. v^(x^t) - v, for t = p^j."""
        zw = self.zw
        p = self.p
        out: dict[int, int] = {}
        basis = zw.basis
        for o, c in vec.items():
            sym = basis[o]
            if sym[0] == "c2":
                l = sym[1]
                zw.add_csq(out, l + t, c)
                zw.add_z(out, l + t, l, c)
            else:
                m, n = sym[1], sym[2]
                zw.add_z(out, m + t, n, c)
                zw.add_z(out, m, n + t, c)
                zw.add_z(out, m + t, n + t, c)
        return out

    def conj_z_pj(self, vec: dict[int, int], j: int, sign: int) -> dict[int, int]:
        """Conjugate a Z vector by x^(p^j) (sign=1) or x^(-p^j) (sign=-1)."""
        t = self.p ** j
        if sign > 0:
            return _merge_z(self.p, vec, self._z_shift_terms(vec, t))
        # Neumann series: (1 + N)^(-1) = sum (-N)^k, N strictly raises weight
        acc = dict(vec)
        term = vec
        s = 1
        while term:
            term = self._z_shift_terms(term, t)
            s = -s
            acc = _merge_z(self.p, acc, term if s > 0 else _neg_z(self.p, term))
        return acc

    def conj_z(self, vec: dict[int, int], e: int) -> dict[int, int]:
        """Conjugate a Z vector by x^e for any integer e."""
        if e == 0 or not vec:
            return dict(vec)
        sign = 1 if e > 0 else -1
        e = abs(e)
        out = vec
        j = 0
        while e:
            d = e % self.p
            for _ in range(d):
                out = self.conj_z_pj(out, j, sign)
            e //= self.p
            j += 1
        return dict(out) if out is vec else out

    def bracket_z_xpow(self, vec: dict[int, int], e: int) -> dict[int, int]:
        """[v, x^e] for v in Z."""
        return _merge_z(self.p, _neg_z(self.p, vec), self.conj_z(vec, e))

    def bracket_z_x_iter(self, vec: dict[int, int], r: int) -> dict[int, int]:
        """[v, x, x, ..., x] with r brackets, for v in Z."""
        out = vec
        for _ in range(r):
            out = self._z_shift_terms(out, 1)
        return dict(out) if out is vec else out

    # c-generator conjugation tables

    def _cc_entry(self, j: int, sign: int, i: int) -> tuple[dict, dict]:
        """Normal form of c_i^(x^(±p^j)) as (c-word, Z vector)."""
        if i > self.w:
            return {}, {}
        key = (j, sign)
        tab = self._cc.get(key)
        if tab is None:
            tab = {}
            self._cc[key] = tab
        hit = tab.get(i)
        if hit is not None:
            return hit
        p = self.p
        t = p ** j
        if sign > 0:
            if j == 0:
                h = {i: 1}
                if i + 1 <= self.w:
                    h[i + 1] = 1
                entry = (h, {})
            else:
                h, z = self._cc_entry(j - 1, 1, i)
                for _ in range(p - 1):
                    h, z = self._conj_parts_pj(h, z, j - 1, 1)
                entry = (h, z)
            # the c-part of c_i^(x^(p^j)) is exactly c_i c_{i+p^j} (windowed)
            assert set(entry[0]) <= {i, i + t}, (i, t, entry[0])
        else:
            # from c_i = A * B * C with A = c_i^(x^(-t)), B = c_{i+t}^(x^(-t)),
            # C = zeta^(x^(-t)) where c_i^(x^t) = c_i c_{i+t} zeta
            _, zeta = self._cc_entry(j, 1, i)
            bh, bz = self._cc_entry(j, -1, i + t) if i + t <= self.w else ({}, {})
            bih, biz = self._hz_pow(bh, bz, -1)
            cvec = self.conj_z_pj(zeta, j, -1)
            h, zd = self._hmul({i: 1}, bih)
            z = _merge_z(p, zd, biz, _neg_z(p, cvec))
            entry = (h, z)
        tab[i] = entry
        return entry

    def _conj_parts_pj(self, h: dict, z: dict, j: int, sign: int) -> tuple[dict, dict]:
        zout = self.conj_z_pj(z, j, sign)
        if not h:
            return {}, zout
        acc_h: dict[int, int] = {}
        acc_z = zout
        for i in sorted(h):
            a = h[i]
            ch, cz = self._cc_entry(j, sign, i)
            if a != 1:
                ch, cz = self._hz_pow(ch, cz, a)
            acc_h, zd = self._hmul(acc_h, ch)
            acc_z = _merge_z(self.p, acc_z, cz, zd)
        return acc_h, acc_z

    def conj_parts(self, h: dict, z: dict, e: int) -> tuple[dict, dict]:
        """Conjugate an element of H*Z (given as parts) by x^e."""
        if e == 0 or (not h and not z):
            return dict(h), dict(z)
        sign = 1 if e > 0 else -1
        e = abs(e)
        j = 0
        while e:
            d = e % self.p
            for _ in range(d):
                h, z = self._conj_parts_pj(h, z, j, sign)
            e //= self.p
            j += 1
        return dict(h), dict(z)


class GElement:
    """Immutable element of G in canonical form x^e * c-word * Z vector."""

    __slots__ = ("ctx", "xexp", "h", "z")

    def __init__(self, ctx: GroupContext, xexp: int, h: dict[int, int], z: dict[int, int]):
        self.ctx = ctx
        self.xexp = xexp
        self.h = h
        self.z = z

    def is_identity(self) -> bool:
        return self.xexp == 0 and not self.h and not self.z

    def in_h(self) -> bool:
        return self.xexp == 0

    def in_z(self) -> bool:
        return self.xexp == 0 and not self.h

    def depth(self) -> int | None:
        """Largest j with self in gamma_j(G)Z, for elements of H (None on Z)."""
        if self.xexp != 0:
            raise ValueError("depth is defined for elements of H")
        return min(self.h) if self.h else None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GElement)
            and self.ctx is other.ctx
            and self.xexp == other.xexp
            and self.h == other.h
            and self.z == other.z
        )

    def __hash__(self):
        return hash((self.xexp, tuple(sorted(self.h.items())), tuple(sorted(self.z.items()))))

    def __mul__(self, other: "GElement") -> "GElement":
        return mul(self, other)

    def __pow__(self, e: int) -> "GElement":
        return power(self, e)

    def __repr__(self) -> str:
        parts = []
        if self.xexp:
            parts.append(f"x^{self.xexp}" if self.xexp != 1 else "x")
        for i in sorted(self.h):
            a = self.h[i]
            parts.append(f"c{i}" if a == 1 else f"c{i}^{a}")
        zw = self.ctx.zw
        for o in sorted(self.z):
            sym = zw.decode(o)
            c = self.z[o]
            txt = f"c{sym[1]}^2" if sym[0] == "c2" else f"z({sym[1]},{sym[2]})"
            parts.append(txt if c == 1 else f"{txt}^{c}")
        return " * ".join(parts) if parts else "1"


def mul(a: GElement, b: GElement) -> GElement:
    if a.ctx is not b.ctx:
        raise ValueError("elements from different contexts")
    ctx = a.ctx
    h1, z1 = ctx.conj_parts(a.h, a.z, b.xexp)
    h, zd = ctx._hmul(h1, b.h)
    z = _merge_z(ctx.p, z1, b.z, zd)
    return GElement(ctx, a.xexp + b.xexp, h, z)


def inverse(a: GElement) -> GElement:
    ctx = a.ctx
    h1, z1 = ctx._hz_pow(a.h, a.z, -1)
    h, z = ctx.conj_parts(h1, z1, -a.xexp)
    return GElement(ctx, -a.xexp, h, z)


def power(a: GElement, e: int) -> GElement:
    ctx = a.ctx
    if e == 0:
        return ctx.identity()
    if a.xexp == 0:
        h, z = ctx._hz_pow(a.h, a.z, e)
        return GElement(ctx, 0, h, z)
    base = a if e > 0 else inverse(a)
    e = abs(e)
    result = ctx.identity()
    while True:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if not e:
            return result
        base = mul(base, base)


def commutator(a: GElement, b: GElement) -> GElement:
    """[a, b] = a^{-1} b^{-1} a b."""
    ctx = a.ctx
    if a.in_z():
        return GElement(ctx, 0, {}, ctx.bracket_z_xpow(a.z, b.xexp))
    if b.in_z():
        v = ctx.bracket_z_xpow(b.z, a.xexp)
        return GElement(ctx, 0, {}, _neg_z(ctx.p, v))
    if a.in_h() and b.in_h():
        zd: dict[int, int] = {}
        zw = ctx.zw
        for i, ai in a.h.items():
            for j, bj in b.h.items():
                if i != j:
                    zw.add_z(zd, i, j, ai * bj)
        return GElement(ctx, 0, {}, zd)
    return mul(mul(mul(inverse(a), inverse(b)), a), b)


def conjugate(g: GElement, w: GElement) -> GElement:
    """g^w = w^{-1} g w."""
    ctx = g.ctx
    if g.in_z():
        return GElement(ctx, 0, {}, ctx.conj_z(g.z, w.xexp))
    return mul(inverse(w), mul(g, w))


def left_normed(v: GElement, w: GElement, r: int) -> GElement:
    """[v, w, w, ..., w] with w repeated r >= 1 times."""
    if r < 1:
        raise ValueError(f"need at least one bracket, got r={r}")
    out = v
    for _ in range(r):
        out = commutator(out, w)
    return out


def w_ijk(ctx: GroupContext, i: int, j: int, k: int, tilde: bool = False) -> GElement:
    """The staircase product of left-normed brackets of z_{i+1+s, j+s} with x.

    Plain form: factors [z_{i+1+s, j+s}, x, (q-2-s times)] for s = 0..q-2 with
    q = p^k.  Tilde form (odd p): s runs to q - r - 1 with r = p^{k-1} and the
    bracket count is q - r - 1 - s.
    """
    p = ctx.p
    if i < 1 or j < 1 or k < 1:
        raise ValueError("indices must be positive")
    q = p ** k
    if tilde:
        if p == 2:
            raise ValueError("tilde elements exist for odd p only")
        r = p ** (k - 1)
        if i < r or j < r:
            raise ValueError(f"tilde staircase needs i, j >= {r}")
        steps = q - r - 1
    else:
        steps = q - 2
    if max(i, j) + steps + 1 > ctx.w:
        raise WindowOverflow(
            f"staircase for (i={i}, j={j}, k={k}) needs index {max(i, j) + steps + 1} > window {ctx.w}"
        )
    acc: dict[int, int] = {}
    for s in range(steps + 1):
        vec = ctx.z_unit(i + 1 + s, j + s)
        vec = ctx.bracket_z_x_iter(vec, steps - s)
        acc = _merge_z(p, acc, vec)
    return GElement(ctx, 0, {}, acc)


def d_k(h: GElement, k: int) -> dict[int, int]:
    """Z part of (x h)^{p^k} relative to x^{p^k} [h, x, ..., x] (p^k - 1 brackets)."""
    ctx = h.ctx
    if h.xexp != 0:
        raise ValueError("d_k is defined for elements of H")
    q = ctx.p ** k
    lead = left_normed(h, ctx.x(), q - 1) if not h.is_identity() else ctx.identity()
    t2 = mul(ctx.x(q), lead)
    t1 = power(mul(ctx.x(), h), q)
    d = mul(inverse(t2), t1)
    if d.xexp != 0 or d.h:
        raise RuntimeError(f"power decomposition left a non-central part: {d!r}")
    return d.z


def tilde_w(ctx: GroupContext, i: int, j: int, k: int) -> GElement:
    return w_ijk(ctx, i, j, k, tilde=True)


def tilde_d(h: GElement, k: int) -> dict[int, int]:
    """Z part of (x^{p^{k-1}} h)^p relative to x^{p^k} [h, x, ..., x] (odd p)."""
    ctx = h.ctx
    p = ctx.p
    if p == 2:
        raise ValueError("tilde elements exist for odd p only")
    if h.xexp != 0:
        raise ValueError("tilde_d is defined on elements of H")
    r = p ** (k - 1)
    q = p ** k
    if h.h and min(h.h) < r:
        raise ValueError(f"element must sit in the weight-{r} lower-central term")
    if h.z and min(ctx.zw.weights[o] for o in h.z) < r:
        raise ValueError(f"element must sit in the weight-{r} lower-central term")
    lead = left_normed(h, ctx.x(), q - r) if not h.is_identity() else ctx.identity()
    t2 = mul(ctx.x(q), lead)
    t1 = power(mul(ctx.x(r), h), p)
    d = mul(inverse(t2), t1)
    if d.xexp != 0 or d.h:
        raise RuntimeError(f"power decomposition left a non-central part: {d!r}")
    return d.z
