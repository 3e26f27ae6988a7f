"""Graded free modules over P = Q(i)[d0..d{n-1}] and Groebner bases of submodules.

Module monomials are encoded as single integers whose comparison realizes the
module order (block, shifted degree, degree, degrevlex, position).  The key is
linear in the exponent vector, so multiplying a term by a monomial u amounts to
adding ``delta(u)`` to its key; this keeps the inner reduction loop cheap.
"""

import heapq
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass

from gmpy2 import mpq

from .errors import BudgetExceeded
from .ring import Polynomial, coerce

DEFAULT_BUDGET = 10**6
_budget = ContextVar("dofcount_gb_budget", default=DEFAULT_BUDGET)


@contextmanager
def budget_scope(n):
    """Set the S-pair reduction cap for Groebner computations in this context."""
    token = _budget.set(int(n))
    try:
        yield
    finally:
        _budget.reset(token)


def current_budget():
    return _budget.get()


class GradedFreeModule:
    """P^rank with basis e_i of degree generator_degrees[i]."""

    __slots__ = ("nvars", "generator_degrees")

    def __init__(self, nvars, generator_degrees):
        self.nvars = nvars
        self.generator_degrees = tuple(int(g) for g in generator_degrees)

    @classmethod
    def standard(cls, nvars, rank):
        return cls(nvars, (0,) * rank)

    @property
    def rank(self):
        return len(self.generator_degrees)

    def __eq__(self, o):
        return (
            isinstance(o, GradedFreeModule)
            and self.nvars == o.nvars
            and self.generator_degrees == o.generator_degrees
        )

    def __hash__(self):
        return hash((self.nvars, self.generator_degrees))

    def __repr__(self):
        return f"GradedFreeModule(d={self.nvars}, degrees={list(self.generator_degrees)})"

    def dual(self):
        return GradedFreeModule(self.nvars, [-g for g in self.generator_degrees])

    def zero(self):
        return VectorElement(self, {})

    def basis(self, i):
        return VectorElement(self, {i: Polynomial.one(self.nvars)})

    def element(self, entries):
        """Element from a list of Polynomials (or scalars) or a dict index -> Polynomial."""
        if isinstance(entries, dict):
            items = entries.items()
        else:
            if len(entries) != self.rank:
                raise ValueError(f"expected {self.rank} entries, got {len(entries)}")
            items = enumerate(entries)
        comps = {}
        for i, p in items:
            if not isinstance(p, Polynomial):
                p = Polynomial.constant(self.nvars, p)
            if p:
                comps[i] = p
        return VectorElement(self, comps)

    def q_poly(self):
        """Sum over generators of z^degree."""
        from .ring import LaurentPolynomial

        return LaurentPolynomial.from_exponents(self.generator_degrees)


class VectorElement:
    __slots__ = ("parent", "components")

    def __init__(self, parent, components):
        self.parent = parent
        comps = {}
        for i, p in components.items():
            if not 0 <= i < parent.rank:
                raise ValueError(f"component {i} out of range for rank {parent.rank}")
            if p.nvars != parent.nvars:
                raise ValueError("dimension mismatch")
            if p:
                comps[i] = p
        self.components = comps

    def __getitem__(self, i):
        return self.components.get(i) or Polynomial.zero(self.parent.nvars)

    def entries(self):
        return [self[i] for i in range(self.parent.rank)]

    def is_zero(self):
        return not self.components

    def __bool__(self):
        return bool(self.components)

    def _same(self, o):
        if o.parent.rank != self.parent.rank or o.parent.nvars != self.parent.nvars:
            raise ValueError("module mismatch")

    def __add__(self, o):
        self._same(o)
        c = dict(self.components)
        for i, p in o.components.items():
            c[i] = c[i] + p if i in c else p
        return VectorElement(self.parent, c)

    def __neg__(self):
        return VectorElement(self.parent, {i: -p for i, p in self.components.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, f):
        """Multiply by a polynomial or scalar."""
        return VectorElement(self.parent, {i: p * f for i, p in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, o):
        if not isinstance(o, VectorElement):
            return NotImplemented
        return self.parent.rank == o.parent.rank and self.components == o.components

    def __hash__(self):
        return hash(frozenset(self.components.items()))

    def shifted_degrees(self):
        g = self.parent.generator_degrees
        return {sum(e) + g[i] for i, p in self.components.items() for e in p.terms}

    @property
    def shifted_degree(self):
        """Top shifted degree (None for the zero vector)."""
        s = self.shifted_degrees()
        return max(s) if s else None

    def is_homogeneous(self):
        return len(self.shifted_degrees()) <= 1

    def top_form(self):
        if not self.components:
            raise ValueError("top_form of the zero vector")
        top = self.shifted_degree
        g = self.parent.generator_degrees
        return VectorElement(self.parent, {i: p.homogeneous_part(top - g[i]) for i, p in self.components.items()})

    def with_parent(self, parent):
        return VectorElement(parent, self.components)

    def to_str(self, names=None):
        if not self.components:
            return "0"
        return "[" + ", ".join(self[i].to_str(names) for i in range(self.parent.rank)) + "]"

    def __repr__(self):
        return f"VectorElement({self.to_str()})"


@dataclass(frozen=True)
class ModuleOrder:
    """Shifted degree, then degrevlex, then ascending position (lower index is larger)."""

    kind: str = "degrevlex-over-position"

    def __post_init__(self):
        if self.kind != "degrevlex-over-position":
            raise ValueError(f"unsupported module order {self.kind!r}")

    def key(self, module, comp, exps):
        return _Encoder(module.nvars, module.generator_degrees).encode(comp, exps)


DEFAULT_ORDER = ModuleOrder()

_B = 1 << 16
_OFF = 1 << 15


class _Encoder:
    def __init__(self, nvars, main_degrees, track_degrees=()):
        d = nvars
        self.d = d
        self.n_main = len(main_degrees)
        self.degrees = list(main_degrees) + list(track_degrees)
        self.W = [_B**k for k in range(d + 4)]
        self.threshold = self.W[d + 3]  # keys >= threshold live in the main block
        self._dec = {}

    def encode(self, comp, exps):
        d, W = self.d, self.W
        m = sum(exps)
        key = (1 if comp < self.n_main else 0) * W[d + 3]
        key += (m + self.degrees[comp] + _OFF) * W[d + 2] + m * W[d + 1]
        for k in range(d):
            key += (_B - 1 - exps[k]) * W[k + 1]
        return key + (_B - 1 - comp)

    def delta(self, u):
        d, W = self.d, self.W
        m = sum(u)
        return m * (W[d + 2] + W[d + 1]) - sum(u[k] * W[k + 1] for k in range(d))

    def decode(self, key):
        r = self._dec.get(key)
        if r is None:
            comp = _B - 1 - key % _B
            q = key // _B
            exps = []
            for _ in range(self.d):
                exps.append(_B - 1 - q % _B)
                q //= _B
            r = (comp, tuple(exps))
            self._dec[key] = r
        return r

    def from_vector(self, v, offset=0):
        out = {}
        for i, p in v.components.items():
            for e, c in p.terms.items():
                out[self.encode(i + offset, e)] = c
        return out

    def to_components(self, vec, lo, hi):
        """Split an encoded vector into Polynomials for components lo..hi-1 (renumbered from 0)."""
        comps = {}
        for k, c in vec.items():
            comp, exps = self.decode(k)
            if lo <= comp < hi:
                comps.setdefault(comp - lo, {})[exps] = c
        return {i: Polynomial(self.d, t, _trusted=True) for i, t in comps.items()}


class _Elem:
    __slots__ = ("terms", "lead", "comp", "exps", "index")

    def __init__(self, terms, enc):
        lead = max(terms)
        c = terms[lead]
        if c != 1:
            inv = 1 / c
            terms = {k: v * inv for k, v in terms.items()}
        self.terms = terms
        self.lead = lead
        self.comp, self.exps = enc.decode(lead)
        self.index = -1


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _find_divisor(by_comp, comp, exps):
    for g in by_comp.get(comp, ()):
        if _divides(g.exps, exps):
            return g
    return None


def _subtract(vec, g, delta, c):
    for k, gc in g.terms.items():
        nk = k + delta
        v = vec.get(nk, 0) - c * gc
        if v:
            vec[nk] = v
        else:
            vec.pop(nk, None)


def _top_reduce(vec, enc, by_comp):
    thr = enc.threshold
    while vec:
        lk = max(vec)
        if lk < thr:
            return
        comp, exps = enc.decode(lk)
        g = _find_divisor(by_comp, comp, exps)
        if g is None:
            return
        _subtract(vec, g, lk - g.lead, vec[lk])


def _full_reduce(vec, enc, by_comp):
    thr = enc.threshold
    done = {}
    while vec:
        lk = max(vec)
        if lk < thr:
            done.update(vec)
            break
        comp, exps = enc.decode(lk)
        g = _find_divisor(by_comp, comp, exps)
        if g is None:
            done[lk] = vec.pop(lk)
        else:
            _subtract(vec, g, lk - g.lead, vec[lk])
    return done


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _buchberger(enc, vecs):
    """Complete encoded vectors to a Groebner basis.

    Returns (basis, syz): basis elements have leads in the main block; syz are
    encoded vectors whose main part reduced to zero (their tracking parts are
    Schreyer syzygies when the inputs carry tracking unit vectors).
    """
    budget = current_budget()
    steps = 0
    basis = []
    by_comp = {}
    syz = []
    heap = []
    seq = 0
    live = {}  # (i, j) -> lcm exps
    for v in vecs:
        if v:
            heapq.heappush(heap, (max(v), seq, 0, v))
            seq += 1

    while heap:
        _, _, kind, data = heapq.heappop(heap)
        if kind == 1:
            if data not in live:
                continue
            i, j = data
            L = live.pop(data)
            gi, gj = basis[i], basis[j]
            ui = tuple(a - b for a, b in zip(L, gi.exps))
            uj = tuple(a - b for a, b in zip(L, gj.exps))
            di, dj = enc.delta(ui), enc.delta(uj)
            vec = {k + di: c for k, c in gi.terms.items()}
            _subtract(vec, gj, dj, mpq(1))
        else:
            vec = dict(data)
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"Groebner step budget of {budget} S-pair reductions exceeded")
        _top_reduce(vec, enc, by_comp)
        if not vec:
            continue
        if max(vec) < enc.threshold:
            syz.append(vec)
            continue
        g = _Elem(vec, enc)
        t = len(basis)
        # chain criterion on existing pairs
        for (i, j), L in list(live.items()):
            if basis[i].comp != g.comp or not _divides(g.exps, L):
                continue
            if _lcm(basis[i].exps, g.exps) != L and _lcm(basis[j].exps, g.exps) != L:
                del live[(i, j)]
        cands = []
        for h in by_comp.get(g.comp, ()):
            L = _lcm(h.exps, g.exps)
            cands.append((sum(L), h.index, L))
        g.index = t
        basis.append(g)
        kept = []
        for _, i, L in sorted(cands):
            if any(_divides(K, L) for K in kept):
                continue
            kept.append(L)
            live[(i, t)] = L
            heapq.heappush(heap, (enc.encode(g.comp, L), seq, 1, (i, t)))
            seq += 1
        by_comp.setdefault(g.comp, []).append(g)
    return basis, syz


def _interreduce(basis, enc):
    """Minimal, tail-reduced, monic basis (sorted by ascending lead)."""
    kept = []
    for g in sorted(basis, key=lambda g: g.lead):
        if any(h.comp == g.comp and _divides(h.exps, g.exps) for h in kept):
            continue
        kept.append(g)
    by_comp = {}
    for g in kept:
        by_comp.setdefault(g.comp, []).append(g)
    out = []
    for g in kept:
        tail = dict(g.terms)
        lc = tail.pop(g.lead)
        red = _full_reduce(tail, enc, by_comp)
        red[g.lead] = lc
        out.append(_Elem(red, enc))
    return out


class GroebnerBasis:
    """Reduced monic Groebner basis of a submodule of a graded free module."""

    def __init__(self, module, order, elements, cofactors, _elems, _enc):
        self.module = module
        self.order = order
        self.elements = elements
        self.cofactors = cofactors
        self._elems = _elems
        self._enc = _enc
        self._by_comp = {}
        for g in _elems:
            self._by_comp.setdefault(g.comp, []).append(g)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def leading_monomials(self):
        return [(g.comp, g.exps) for g in self._elems]

    def normal_form(self, v):
        if v.parent.rank != self.module.rank or v.parent.nvars != self.module.nvars:
            raise ValueError("module mismatch")
        enc = self._enc
        vec = enc.from_vector(v)
        red = _full_reduce(vec, enc, self._by_comp)
        return VectorElement(self.module, enc.to_components(red, 0, self.module.rank))

    def contains(self, v):
        enc = self._enc
        vec = enc.from_vector(v)
        _top_reduce(vec, enc, self._by_comp)
        return not vec


def _module_of(gens, module):
    if module is not None:
        return module
    if not gens:
        raise ValueError("cannot infer the ambient module of an empty generator list")
    return gens[0].parent


def groebner(gens, order=DEFAULT_ORDER, module=None, cofactors=False):
    """Reduced Groebner basis of span(gens); optionally with cofactors in terms of gens."""
    F = _module_of(gens, module)
    for g in gens:
        if g.parent.rank != F.rank or g.parent.nvars != F.nvars:
            raise ValueError("generators live in different modules")
    s = len(gens)
    if cofactors:
        S = GradedFreeModule(F.nvars, [g.shifted_degree or 0 for g in gens])
        enc = _Encoder(F.nvars, F.generator_degrees, S.generator_degrees)
        vecs = []
        for i, g in enumerate(gens):
            v = enc.from_vector(g)
            v[enc.encode(F.rank + i, (0,) * F.nvars)] = mpq(1)
            vecs.append(v)
    else:
        enc = _Encoder(F.nvars, F.generator_degrees)
        vecs = [enc.from_vector(g) for g in gens]
    basis, _ = _buchberger(enc, vecs)
    red = _interreduce(basis, enc)
    elements = [VectorElement(F, enc.to_components(g.terms, 0, F.rank)) for g in red]
    cof = None
    if cofactors:
        cof = [VectorElement(S, enc.to_components(g.terms, F.rank, F.rank + s)) for g in red]
        # normal forms use an encoder without the tracking block
        enc = _Encoder(F.nvars, F.generator_degrees)
        red = [_Elem(enc.from_vector(e), enc) for e in elements]
    return GroebnerBasis(F, order, elements, cof, red, enc)


def normal_form(v, G):
    return G.normal_form(v)


def syzygies(gens, module=None, source=None):
    """Generators of the relations among gens (Schreyer construction).

    Returns vectors in the free module ``source`` (default: rank len(gens) with
    generator degrees equal to the top shifted degrees of gens).
    """
    F = _module_of(gens, module)
    s = len(gens)
    if source is None:
        source = GradedFreeModule(F.nvars, [g.shifted_degree if g else 0 for g in gens])
    if source.rank != s:
        raise ValueError("source rank must equal the number of generators")
    enc = _Encoder(F.nvars, F.generator_degrees, source.generator_degrees)
    vecs = []
    for i, g in enumerate(gens):
        v = enc.from_vector(g)
        v[enc.encode(F.rank + i, (0,) * F.nvars)] = mpq(1)
        vecs.append(v)
    _, syz = _buchberger(enc, vecs)
    out = []
    for vec in syz:
        lead = max(vec)
        c = vec[lead]
        comps = enc.to_components({k: v / c for k, v in vec.items()}, F.rank, F.rank + s)
        out.append(VectorElement(source, comps))
    return out


def columns(M, module):
    """Columns of a matrix (list of rows) as elements of module (rank = #rows)."""
    if len(M) != module.rank:
        raise ValueError("row count does not match the target rank")
    ncols = len(M[0]) if M else 0
    return [module.element({r: M[r][j] for r in range(len(M))}) for j in range(ncols)]


def rows(M, module):
    """Rows of a matrix as elements of module (rank = #columns)."""
    out = []
    for row in M:
        if len(row) != module.rank:
            raise ValueError("column count does not match the module rank")
        out.append(module.element(list(row)))
    return out


def kernel_of_map(M, source, target):
    """Generators of {v in source : M v = 0}; M has target.rank rows, source.rank columns."""
    if len(M) != target.rank or any(len(r) != source.rank for r in M):
        raise ValueError(f"matrix shape does not match {target.rank}x{source.rank}")
    if source.rank == 0:
        return []
    return syzygies(columns(M, target), module=target, source=source)


def top_form_submodule(gens, module=None):
    F = _module_of(gens, module)
    G = groebner(gens, module=F)
    return [g.top_form() for g in G.elements]


def submodule_equal(A, B, module=None):
    F = module or (A[0].parent if A else (B[0].parent if B else None))
    if F is None:
        return True
    GA = groebner(A, module=F)
    if not all(GA.contains(b) for b in B):
        return False
    GB = groebner(B, module=F)
    return all(GB.contains(a) for a in A)


def submodule_contains(A, B, module=None):
    """True iff span(B) is contained in span(A)."""
    F = module or (A[0].parent if A else (B[0].parent if B else None))
    if F is None:
        return True
    GA = groebner(A, module=F)
    return all(GA.contains(b) for b in B)


# ---- matrix helpers (matrices are lists of rows of Polynomial) ----


def zero_matrix(nvars, nrows, ncols):
    z = Polynomial.zero(nvars)
    return [[z] * ncols for _ in range(nrows)]


def mat_mul(A, B, nvars):
    n = len(A)
    k = len(B)
    m = len(B[0]) if B else 0
    if A and len(A[0]) != k:
        raise ValueError("shape mismatch in matrix product")
    out = zero_matrix(nvars, n, m)
    for i in range(n):
        for j in range(m):
            acc = Polynomial.zero(nvars)
            for t in range(k):
                if A[i][t] and B[t][j]:
                    acc = acc + A[i][t] * B[t][j]
            out[i][j] = acc
    return out


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def is_zero_matrix(A):
    return all(not p for row in A for p in row)


def matrix_from_columns(cols, nrows, nvars):
    out = zero_matrix(nvars, nrows, len(cols))
    for j, v in enumerate(cols):
        for i, p in v.components.items():
            out[i][j] = p
    return out


def coerce_scalar(c):
    return coerce(c)
