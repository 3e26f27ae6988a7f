"""Free resolutions, minimization, and the two-sided complex of a homogeneous system."""

from dataclasses import dataclass, field

from .errors import InternalError, InvalidSystem
from .freemod import (
    GradedFreeModule,
    groebner,
    is_zero_matrix,
    kernel_of_map,
    mat_mul,
    matrix_from_columns,
    transpose,
)
from .ring import LaurentPolynomial, Polynomial


@dataclass
class FreeResolution:
    """terms[k] = F_k; differentials[k-1] = d_k : F_k -> F_{k-1} (rank F_{k-1} x rank F_k)."""

    terms: list
    differentials: list
    minimal: bool = False
    complete: bool = True

    @property
    def length(self):
        return len(self.terms) - 1

    def degrees(self, k):
        return list(self.terms[k].generator_degrees) if k < len(self.terms) else []

    def check_complex(self):
        """d_{k-1} d_k == 0 for every k."""
        nv = self.terms[0].nvars
        for k in range(1, len(self.differentials)):
            if not is_zero_matrix(mat_mul(self.differentials[k - 1], self.differentials[k], nv)):
                return False
        return True

    def is_graded(self):
        for k, D in enumerate(self.differentials, start=1):
            src, tgt = self.terms[k], self.terms[k - 1]
            for i, row in enumerate(D):
                for j, p in enumerate(row):
                    if p and not (
                        p.is_homogeneous() and p.degree == src.generator_degrees[j] - tgt.generator_degrees[i]
                    ):
                        return False
        return True

    def betti(self):
        return BettiTable.from_terms({k: F.generator_degrees for k, F in enumerate(self.terms)})


@dataclass
class BettiTable:
    entries: dict = field(default_factory=dict)  # (i, j) -> b_ij

    @classmethod
    def from_terms(cls, degs_by_index):
        e = {}
        for i, degs in degs_by_index.items():
            for j in degs:
                e[(i, j)] = e.get((i, j), 0) + 1
        return cls(e)

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def indices(self):
        return sorted({i for i, _ in self.entries})

    def degrees_at(self, i):
        return sorted(j for (a, j), b in self.entries.items() if a == i for _ in range(b))

    def to_rows(self):
        return [[i, j, b] for (i, j), b in sorted(self.entries.items())]

    def __str__(self):
        lines = []
        for i in self.indices():
            parts = [f"{b}@{j}" for (a, j), b in sorted(self.entries.items()) if a == i]
            lines.append(f"{i:>3}: " + " ".join(parts))
        return "\n".join(lines)


def _is_unit(p):
    return bool(p) and p.degree == 0


def minimal_generators(gens, module):
    """Minimal generating subset of a homogeneous submodule (by degree, then position)."""
    cand = sorted((g for g in gens if g), key=lambda g: g.shifted_degree)
    kept = []
    G = None
    for g in cand:
        if G is not None and G.contains(g):
            continue
        kept.append(g)
        G = groebner(kept, module=module)
    return kept


def resolve(presentation, F0, F1, max_length=None, trim=True):
    """Resolve coker(presentation : F1 -> F0) by iterated syzygies."""
    d = F0.nvars
    if max_length is None:
        max_length = d
    if max_length > d:
        raise ValueError("max_length may not exceed the number of variables")
    if len(presentation) != F0.rank or any(len(r) != F1.rank for r in presentation):
        raise ValueError("presentation shape does not match the modules")
    terms = [F0, F1]
    diffs = [[list(r) for r in presentation]]
    complete = True
    while True:
        k = len(terms) - 1
        src, tgt = terms[k], terms[k - 1]
        if src.rank == 0:
            break
        K = kernel_of_map(diffs[-1], src, tgt)
        K = [v for v in K if v]
        if trim and K and all(v.is_homogeneous() for v in K):
            K = minimal_generators(K, src)
        if not K:
            break
        if k + 1 > max_length:
            complete = False
            break
        Fn = GradedFreeModule(d, [v.shifted_degree for v in K])
        terms.append(Fn)
        diffs.append(matrix_from_columns(K, src.rank, d))
    if terms[-1].rank == 0 and len(terms) > 1:
        terms.pop()
        diffs.pop()
    res = FreeResolution(terms, diffs, complete=complete)
    res.minimal = _has_no_units(res)
    return res


def _has_no_units(res):
    return not any(_is_unit(p) for D in res.differentials for row in D for p in row)


def minimize(res, keep_presentation=False):
    """Prune unit entries (graded case).  keep_presentation protects d_1 and d_2."""
    if not res.is_graded():
        raise ValueError("minimize requires a graded resolution")
    terms = [F.generator_degrees for F in res.terms]
    terms = [list(t) for t in terms]
    diffs = [[list(r) for r in D] for D in res.differentials]
    nv = res.terms[0].nvars
    first = 3 if keep_presentation else 1
    changed = True
    while changed:
        changed = False
        for k in range(first, len(diffs) + 1):
            D = diffs[k - 1]
            hit = None
            for r, row in enumerate(D):
                for c, p in enumerate(row):
                    if _is_unit(p):
                        hit = (r, c)
                        break
                if hit:
                    break
            if not hit:
                continue
            r, c = hit
            u = D[r][c].constant_term()
            new = []
            for i, row in enumerate(D):
                if i == r:
                    continue
                f = D[i][c]
                nr = []
                for j, p in enumerate(row):
                    if j == c:
                        continue
                    if f and D[r][j]:
                        p = p - (f * D[r][j]).scale(1 / u)
                    nr.append(p)
                new.append(nr)
            diffs[k - 1] = new
            if k - 2 >= 0:
                diffs[k - 2] = [[p for j, p in enumerate(row) if j != r] for row in diffs[k - 2]]
            if k < len(diffs):
                diffs[k] = [row for i, row in enumerate(diffs[k]) if i != c]
            del terms[k][c]
            del terms[k - 1][r]
            changed = True
            break
    while len(terms) > 1 and not terms[-1]:
        terms.pop()
        diffs.pop()
    # differentials with a vanishing source or target still record shapes correctly
    for k in range(len(diffs)):
        if not diffs[k] and terms[k + 1]:
            diffs[k] = []
    mods = [GradedFreeModule(nv, t) for t in terms]
    out = FreeResolution(mods, diffs, complete=res.complete)
    out.minimal = _has_no_units(out)
    return out


@dataclass
class TwoSidedComplex:
    v_part: FreeResolution
    w_part: FreeResolution
    betti: BettiTable
    qf: LaurentPolynomial
    system: object = None

    def junction_map(self):
        """(F_2^W)* <- F_0^V: the transpose of the W-side d_2 (gauge generators as rows)."""
        if len(self.w_part.differentials) < 2:
            return []
        return transpose(self.w_part.differentials[1])

    def check_junction(self):
        """T* followed by R* vanishes: R^T T^T == 0."""
        J = self.junction_map()
        if not J:
            return True
        d1 = self.v_part.differentials[0]
        return is_zero_matrix(mat_mul(J, d1, self.v_part.terms[0].nvars))


def q_of(degs, sign=1):
    return LaurentPolynomial.from_exponents(degs, sign)


def two_sided_complex(sys, minimal=True):
    """Resolve V = coker T* (grading theta, k) and W = coker T (grading -k, -theta), glue along T."""
    from .system import is_homogeneous

    if not is_homogeneous(sys):
        raise InvalidSystem("two_sided_complex needs a homogeneous system (pass its symbol)")
    d = sys.dimension
    k = sys.equation_orders()
    th = sys.theta
    Tt = [[sys.matrix[a][i] for a in range(sys.n)] for i in range(sys.m)]
    v = resolve(Tt, GradedFreeModule(d, th), GradedFreeModule(d, k), max_length=d)
    w = resolve([list(r) for r in sys.matrix], GradedFreeModule(d, [-x for x in k]), GradedFreeModule(d, [-t for t in th]), max_length=d)
    if not (v.complete and w.complete):
        raise InternalError("resolution longer than the number of variables")
    if minimal:
        v = minimize(v, keep_presentation=True)
        w = minimize(w, keep_presentation=True)
    degs = {}
    qf = LaurentPolynomial()
    for i, F in enumerate(v.terms):
        degs[i] = list(F.generator_degrees)
        qf = qf + q_of(F.generator_degrees, (-1) ** i)
    for kk in range(2, len(w.terms)):
        dual = [-g for g in w.terms[kk].generator_degrees]
        degs[1 - kk] = dual
        qf = qf - q_of(dual, (-1) ** kk)
    return TwoSidedComplex(v, w, BettiTable.from_terms(degs), qf, system=sys)


def betti_orders(cx):
    v, w = cx.v_part, cx.w_part
    if not (v.minimal or _units_only_in_presentation(v)) or not (w.minimal or _units_only_in_presentation(w)):
        raise ValueError("betti_orders needs minimized resolutions")
    ident = [sorted(v.terms[k].generator_degrees) for k in range(2, len(v.terms))]
    sym = [sorted(w.terms[k].generator_degrees) for k in range(2, len(w.terms))]
    return ident, sym


def _units_only_in_presentation(res):
    return not any(_is_unit(p) for D in res.differentials[2:] for row in D for p in row)

