"""Exact character theory over a prime field.

Character tables are computed by simultaneous diagonalization of the class
multiplication matrices over F_p (the classical class-matrix approach):
common eigenspaces are split by deterministic-seeded random linear
combinations, eigenvalues are extracted from characteristic polynomials by
equal-degree splitting, and rows are normalized so the value at the identity
is the (integer) degree.  The prime is chosen large enough that every
multiplicity and structure constant occurring downstream lifts uniquely from
F_p to the integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    EigenbasisFailure,
    ElementNotInGroup,
    GroupMismatch,
    InvalidPrime,
    NotASubgroup,
    NotInSpan,
)
from .permgrp import Group, Subgroup

_SEARCH_CAP = 1 << 62
_SPLIT_SEED = 0x5EED0


@dataclass(frozen=True)
class ModularContext:
    """Prime field data shared by every group in a scenario.

    p = 1 (mod e) for the lcm e of the groups' exponents, so F_p contains all
    needed roots of unity, and p exceeds max(order)**3 so every nonnegative
    integer produced by the calculus lifts uniquely.  `primitive_root`
    generates F_p* and is only used for the human-readable cyclotomic lift.
    """

    p: int
    primitive_root: int
    exponent_lcm: int
    bound: int

    def root_of_unity(self, e: int) -> int:
        if (self.p - 1) % e != 0:
            raise ValueError(f"F_{self.p} has no {e}-th roots of unity")
        return pow(self.primitive_root, (self.p - 1) // e, self.p)


class ClassFunction:
    """A function on conjugacy classes of a group, valued in F_p."""

    __slots__ = ("group", "values")

    def __init__(self, group: Group, values):
        self.group = group
        self.values = tuple(int(v) for v in values)
        if len(self.values) != group.num_classes:
            raise ValueError(
                f"expected {group.num_classes} class values, got {len(self.values)}"
            )

    @property
    def degree(self) -> int:
        return self.values[0]

    def value_at(self, element_index: int) -> int:
        return self.values[self.group.class_of[element_index]]

    def __eq__(self, other):
        return (
            isinstance(other, ClassFunction)
            and _same_group(self.group, other.group)
            and self.values == other.values
        )

    def __hash__(self):
        return hash((id(self.group), self.values))

    def __repr__(self):
        return f"ClassFunction{self.values}"


class VirtualCharacter:
    """Integer coordinates in the irreducible basis; may be negative."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: Group, coeffs):
        self.group = group
        self.coeffs = tuple(int(c) for c in coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, VirtualCharacter)
            and _same_group(self.group, other.group)
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"VirtualCharacter{self.coeffs}"


class CharacterTable:
    """All irreducible characters of a group mod p.

    Rows are sorted by (degree, value vector); the first row is always the
    trivial character.  Row and column orthogonality are verified before an
    instance is handed out.
    """

    __slots__ = ("group", "p", "rows", "degrees", "_row_index")

    def __init__(self, group: Group, p: int, rows):
        self.group = group
        self.p = p
        self.rows = tuple(rows)
        self.degrees = tuple(r.values[0] for r in self.rows)
        self._row_index = {r.values: i for i, r in enumerate(self.rows)}

    @property
    def size(self) -> int:
        return len(self.rows)

    def row_index(self, cf: ClassFunction) -> int:
        try:
            return self._row_index[cf.values]
        except KeyError:
            raise NotInSpan("values do not match any irreducible row") from None


def _same_group(a: Group, b: Group) -> bool:
    return a is b or a.elements == b.elements


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factorize(n: int):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = _factorize(p - 1)
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
        g += 1


def make_context(groups, prime_override: int | None = None) -> ModularContext:
    """Smallest prime p > max(order)**3 with p = 1 (mod lcm of exponents)."""
    groups = list(groups)
    lcm = 1
    bound = 1
    for g in groups:
        lcm = math.lcm(lcm, g.exponent())
        bound = max(bound, g.order**3)
    if prime_override is not None:
        p = int(prime_override)
        if not (_is_prime(p) and p > bound and (p - 1) % lcm == 0):
            raise InvalidPrime(
                f"prime override {p} must be prime, exceed {bound}, "
                f"and be 1 mod {lcm}"
            )
    else:
        p = bound + 1 + ((-bound) % lcm)  # first candidate = 1 mod lcm above bound
        while not _is_prime(p):
            p += lcm
            if p > _SEARCH_CAP:
                raise EigenbasisFailure("prime search exceeded 2**62")
    return ModularContext(p=p, primitive_root=_primitive_root(p), exponent_lcm=lcm, bound=bound)


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p (coefficient lists, ascending degree)


def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmulmod(a, b, f, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return _prem(out, f, p)


def _prem(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c == 0:
            continue
        for j in range(df + 1):
            a[i - df + j] = (a[i - df + j] - c * f[j]) % p
        a[i] = 0
    return _ptrim(a[:df])


def _ppowmod(base, e, f, p):
    result = [1]
    b = _prem(base, f, p)
    while e > 0:
        if e & 1:
            result = _pmulmod(result, b, f, p)
        b = _pmulmod(b, b, f, p)
        e >>= 1
    return result


def _pmonic(f, p):
    f = _ptrim(list(f))
    if not f:
        return f
    inv = pow(f[-1], p - 2, p)
    return [(c * inv) % p for c in f]


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _prem(_pmonic(a, p), _pmonic(b, p), p)
        b = _ptrim(b)
    return _pmonic(a, p)


def _distinct_roots(f, p, rng):
    """All roots in F_p of f (which is assumed to split over F_p), via
    gcd with x^p - x and equal-degree splitting."""
    f = _pmonic(f, p)
    if len(f) <= 1:
        return []
    if p <= 4096:
        return sorted(
            r for r in range(p) if _peval(f, r, p) == 0
        )
    xp = _ppowmod([0, 1], p, f, p)
    sub = list(xp)
    if len(sub) < 2:
        sub += [0] * (2 - len(sub))
    sub[1] = (sub[1] - 1) % p
    g = _pgcd(sub, f, p)

    roots = []

    def split(h):
        h = _pmonic(h, p)
        if len(h) <= 1:
            return
        if len(h) == 2:
            roots.append((-h[0]) % p)
            return
        while True:
            a = int(rng.integers(0, p))
            t = _ppowmod([a, 1], (p - 1) // 2, h, p)
            t = list(t)
            if not t:
                t = [0]
            t[0] = (t[0] - 1) % p
            d = _pgcd(t, h, p)
            if 0 < len(d) - 1 < len(h) - 1:
                q = _pquo(h, d, p)
                split(d)
                split(q)
                return

    split(g)
    return sorted(roots)


def _pquo(a, b, p):
    a = list(a)
    b = _pmonic(b, p)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _ptrim(q)


def _peval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _char_poly(m, p):
    """Monic characteristic polynomial of m over F_p (Faddeev-LeVerrier)."""
    k = m.shape[0]
    big = m.dtype == object
    ident = np.eye(k, dtype=object if big else np.int64)
    coeffs = [0] * (k + 1)
    coeffs[k] = 1
    mk = m.copy()
    for i in range(1, k + 1):
        tr = int(np.trace(mk)) % p
        c = (-tr * pow(i, p - 2, p)) % p
        coeffs[k - i] = c
        if i < k:
            mk = _kernels.matmul_mod(m, (mk + c * ident) % p, p)
    return coeffs


def _solve_in_basis(basis, image, p):
    """X with basis @ X = image (columns of basis independent, image in span)."""
    k, s = basis.shape
    aug = np.concatenate([basis, image], axis=1)
    r, piv = _kernels.rref_mod(aug, p)
    if len(piv) != s or any(int(c) != i for i, c in enumerate(piv)):
        raise EigenbasisFailure("subspace basis lost rank during splitting")
    if k > s and np.any(r[s:, s:] != 0):
        raise EigenbasisFailure("image left the invariant subspace")
    return r[:s, s:].copy()


def _common_eigenbasis(mats, k, p, rng):
    """Split F_p^k into the common one-dimensional eigenspaces of the
    commuting matrices `mats` using random linear combinations."""
    big = p >= _kernels.INT64_SAFE_P
    dtype = object if big else np.int64
    spaces = [np.eye(k, dtype=dtype)]
    for _ in range(64):
        if all(s.shape[1] == 1 for s in spaces):
            break
        combo = np.zeros((k, k), dtype=dtype)
        for m in mats:
            r = int(rng.integers(1, p))
            combo = (combo + r * m.astype(dtype)) % p
        nxt = []
        for s in spaces:
            if s.shape[1] == 1:
                nxt.append(s)
                continue
            x = _solve_in_basis(s, _kernels.matmul_mod(combo, s, p), p)
            f = _char_poly(x, p)
            for lam in _distinct_roots(f, p, rng):
                shifted = x.copy()
                for i in range(x.shape[0]):
                    shifted[i, i] = (shifted[i, i] - lam) % p
                null = _kernels.nullspace_mod(shifted, p)
                if null.shape[1] > 0:
                    nxt.append(_kernels.matmul_mod(s, null, p))
        if sum(s.shape[1] for s in nxt) != k:
            raise EigenbasisFailure("eigenspace dimensions do not add up")
        spaces = nxt
    if not all(s.shape[1] == 1 for s in spaces):
        raise EigenbasisFailure("could not separate all eigenspaces")
    return [s[:, 0] for s in spaces]


def character_table(G: Group, ctx: ModularContext) -> CharacterTable:
    """All irreducible characters of G over F_p, cached on the group."""
    cached = G._char_tables.get(ctx.p)
    if cached is not None:
        return cached
    p = ctx.p
    if G.order % p == 0 or G.order >= p:
        raise InvalidPrime(f"p={p} is unusable for a group of order {G.order}")
    k = G.num_classes
    reps = G.class_reps
    sizes = G.class_sizes
    inv_class = G.inverse_class
    mats = [
        _kernels.class_matrix(G.mult, G.inv, G.class_of, G.classes[i], reps)
        for i in range(1, k)
    ]
    rng = np.random.default_rng((_SPLIT_SEED, G.order, k))
    vectors = _common_eigenbasis(mats, k, p, rng) if k > 1 else [np.array([1])]

    order_inv = pow(G.order, p - 2, p)
    rows = []
    for u in vectors:
        u0 = int(u[0]) % p
        if u0 == 0:
            raise EigenbasisFailure("eigenvector vanishes at the identity class")
        scale = pow(u0, p - 2, p)
        omega = [(int(v) * scale) % p for v in u]
        s = 0
        for j in range(k):
            s = (s + omega[j] * omega[int(inv_class[j])] * pow(int(sizes[j]), p - 2, p)) % p
        d_sq = (G.order * pow(s, p - 2, p)) % p
        degree = None
        for d in range(1, G.order + 1):
            if G.order % d == 0 and (d * d) % p == d_sq:
                degree = d
                break
        if degree is None:
            raise EigenbasisFailure("no divisor of |G| squares to the degree value")
        values = [
            (degree * omega[j] * pow(int(sizes[j]), p - 2, p)) % p for j in range(k)
        ]
        rows.append(tuple(values))
    rows.sort(key=lambda v: (v[0], v))
    cfs = [ClassFunction(G, v) for v in rows]

    if sum(v[0] ** 2 for v in rows) != G.order:
        raise EigenbasisFailure("degree squares do not sum to the group order")
    for i, a in enumerate(cfs):
        for j, b in enumerate(cfs):
            ip = _inner_raw(a, b, p)
            if ip != (1 if i == j else 0):
                raise EigenbasisFailure("row orthogonality failed")
    if rows[0] != tuple([1] * k):
        raise EigenbasisFailure("first row is not the trivial character")

    table = CharacterTable(G, p, cfs)
    G._char_tables[p] = table
    return table


def _inner_raw(a: ClassFunction, b: ClassFunction, p: int) -> int:
    G = a.group
    sizes = G.class_sizes
    inv_class = G.inverse_class
    acc = 0
    for j in range(G.num_classes):
        acc = (acc + int(sizes[j]) * a.values[j] * b.values[int(inv_class[j])]) % p
    return (acc * pow(G.order, p - 2, p)) % p


def inner_product(a: ClassFunction, b: ClassFunction, p: int, lift: str = "nonneg") -> int:
    """(1/|G|) sum_g a(g) b(g^-1) in F_p, lifted to an integer.

    lift="nonneg" gives the representative in [0, p); lift="symmetric" the one
    in (-p/2, p/2), which is what virtual-character arithmetic needs.
    """
    if not _same_group(a.group, b.group):
        raise GroupMismatch("class functions live on different groups")
    v = _inner_raw(a, b, p)
    if lift == "symmetric" and v > p // 2:
        v -= p
    return v


def restrict(chi: ClassFunction, K: Subgroup) -> ClassFunction:
    """Restriction of chi to the subgroup K of chi.group."""
    if K.parent is not chi.group:
        raise NotASubgroup("K is not a subgroup of the character's group")
    Kgrp = K.group()
    H = chi.group
    vals = [
        chi.values[int(H.class_of[int(K.members[int(r)])])] for r in Kgrp.class_reps
    ]
    return ClassFunction(Kgrp, vals)


def induce(chi: ClassFunction, H: Group, p: int) -> ClassFunction:
    """Frobenius induction of chi from its group K up to H (K <= H):
    (Ind chi)(h) = (1/|K|) sum over x in H with x^-1 h x in K of chi(x^-1 h x).
    """
    Kgrp = chi.group
    emb = _embed_indices(Kgrp, H)
    in_sub = np.zeros(H.order, dtype=bool)
    in_sub[emb] = True
    values = np.zeros(H.order, dtype=np.int64 if p < _kernels.INT64_SAFE_P else object)
    for i, e in enumerate(emb):
        values[e] = chi.values[int(Kgrp.class_of[i])]
    sums = _kernels.induced_sums(H.mult, H.inv, H.class_reps, values, in_sub, p)
    scale = pow(Kgrp.order, p - 2, p)
    return ClassFunction(H, [(int(s) * scale) % p for s in sums])


def conjugate_cf(chi: ClassFunction, ambient: Group, x: int) -> ClassFunction:
    """Transport chi along conjugation by x: the result lives on xHx^-1 and
    has values (x chi)(y) = chi(x^-1 y x)."""
    if not 0 <= x < ambient.order:
        raise ElementNotInGroup(f"index {x}")
    Hgrp = chi.group
    emb = _embed_indices(Hgrp, ambient)
    conj_members = np.sort(ambient.mult[ambient.mult[x, emb], ambient.inv[x]])
    mask = np.zeros(ambient.order, dtype=bool)
    mask[conj_members] = True
    target = Subgroup(ambient, mask, None, _verified=True).group()
    pos = {int(e): i for i, e in enumerate(emb)}
    temb = _embed_indices(target, ambient)
    vals = []
    for r in target.class_reps:
        y = int(temb[int(r)])
        pre = int(ambient.mult[ambient.mult[ambient.inv[x], y], x])
        vals.append(chi.values[int(Hgrp.class_of[pos[pre]])])
    return ClassFunction(target, vals)


def decompose(f: ClassFunction, table: CharacterTable) -> VirtualCharacter:
    """Coordinates of f in the irreducible basis (symmetric lifts); verifies
    the reconstruction reproduces f exactly in F_p."""
    if not _same_group(f.group, table.group):
        raise GroupMismatch("class function and table groups differ")
    p = table.p
    coeffs = [inner_product(f, chi, p, lift="symmetric") for chi in table.rows]
    k = f.group.num_classes
    recon = [0] * k
    for c, chi in zip(coeffs, table.rows):
        for j in range(k):
            recon[j] = (recon[j] + c * chi.values[j]) % p
    if tuple(recon) != f.values:
        raise NotInSpan("reconstruction mismatch: not a class function of this group")
    return VirtualCharacter(f.group, coeffs)


def pointwise_product(a: ClassFunction, b: ClassFunction, p: int) -> ClassFunction:
    if not _same_group(a.group, b.group):
        raise GroupMismatch("class functions live on different groups")
    return ClassFunction(a.group, [(x * y) % p for x, y in zip(a.values, b.values)])


def _embed_indices(sub: Group, sup: Group) -> np.ndarray:
    """Index of each element of `sub` inside `sup`; NotASubgroup if absent."""
    out = np.empty(sub.order, dtype=np.int32)
    for i, e in enumerate(sub.elements):
        j = sup.index.get(e.images)
        if j is None:
            raise NotASubgroup("element set does not embed")
        out[i] = j
    return out


def cyclotomic_lift(table: CharacterTable, ctx: ModularContext):
    """Human-readable rows: each value rendered as a nonnegative-integer
    combination of e-th roots of unity z{e}, extracted from power-map values.
    Display only; all computation stays in F_p."""
    G = table.group
    p = ctx.p
    out = []
    for chi in table.rows:
        row = []
        for j, rep in enumerate(G.class_reps):
            e = G.element_order(int(rep))
            if e == 1:
                row.append(str(chi.values[j]))
                continue
            omega = ctx.root_of_unity(e)
            # chi(rep^t) for t = 0..e-1 via the power map
            powers = []
            cur = 0
            for _ in range(e):
                powers.append(chi.values[int(G.class_of[cur])])
                cur = int(G.mult[cur, int(rep)])
            einv = pow(e, p - 2, p)
            terms = []
            for c in range(e):
                acc = 0
                for t in range(e):
                    acc = (acc + powers[t] * pow(omega, (-c * t) % (p - 1), p)) % p
                mult = (acc * einv) % p
                if mult:
                    if c == 0:
                        terms.append(str(mult))
                    else:
                        pw = f"z{e}" + (f"^{c}" if c > 1 else "")
                        terms.append(pw if mult == 1 else f"{mult}*{pw}")
            row.append(" + ".join(terms) if terms else "0")
        out.append(row)
    return out
