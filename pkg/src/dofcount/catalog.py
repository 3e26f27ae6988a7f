"""Standard physical systems, written out in components with signature (+,-,...,-).

Indices: d_mu are the derivative symbols; a raised index picks up eta^{mu mu}.
"""

from itertools import combinations

from .ring import Polynomial, coerce
from .system import DiffSystem


def _eta(mu):
    return 1 if mu == 0 else -1


def _d(d, mu):
    return Polynomial.var(d, mu)


def box(d):
    return sum((_d(d, mu) * _d(d, mu) * _eta(mu) for mu in range(d)), Polynomial.zero(d))


def maxwell_strength():
    """d_nu F^{mu nu} = 0 and d_[l F_mn] = 0 for the six components F^{mu nu}, mu < nu."""
    d = 4
    pairs = list(combinations(range(d), 2))
    idx = {p: i for i, p in enumerate(pairs)}
    names = [f"F{a}{b}" for a, b in pairs]
    zero = Polynomial.zero(d)

    def upper(mu, nu):
        """F^{mu nu} as (sign, field index)."""
        return (1, idx[(mu, nu)]) if mu < nu else (-1, idx[(nu, mu)])

    def lower(mu, nu):
        s, i = upper(mu, nu)
        return s * _eta(mu) * _eta(nu), i

    rows, eqn = [], []
    for mu in range(d):
        row = [zero] * 6
        for nu in range(d):
            if nu == mu:
                continue
            s, i = upper(mu, nu)
            row[i] = row[i] + _d(d, nu) * s
        rows.append(row)
        eqn.append(f"div{mu}")
    for lam, mu, nu in combinations(range(d), 3):
        row = [zero] * 6
        for a, b, c in ((lam, mu, nu), (mu, nu, lam), (nu, lam, mu)):
            s, i = lower(b, c)
            row[i] = row[i] + _d(d, a) * s
        rows.append(row)
        eqn.append(f"bianchi{lam}{mu}{nu}")
    return DiffSystem(d, names, rows, equation_names=eqn)


def maxwell_potential(d=4):
    """T_nu = box A_nu - d_nu d^mu A_mu."""
    B = box(d)
    rows = []
    for nu in range(d):
        row = []
        for mu in range(d):
            p = _d(d, nu) * _d(d, mu) * (-_eta(mu))
            if mu == nu:
                p = p + B
            row.append(p)
        rows.append(row)
    return DiffSystem(d, [f"A{mu}" for mu in range(d)], rows, equation_names=[f"T{nu}" for nu in range(d)])


def proca_raw(d=4, m=1):
    """P_mu = (box - m^2) A_mu - d_mu d^nu A_nu."""
    m2 = coerce(m) ** 2
    B = box(d) - Polynomial.constant(d, m2)
    rows = []
    for mu in range(d):
        row = []
        for nu in range(d):
            p = _d(d, mu) * _d(d, nu) * (-_eta(nu))
            if mu == nu:
                p = p + B
            row.append(p)
        rows.append(row)
    return DiffSystem(
        d, [f"A{mu}" for mu in range(d)], rows, equation_names=[f"P{mu}" for mu in range(d)], parameters={"m": m}
    )


def proca_kg(d=4, m=1):
    """(box - m^2) A_mu = 0 for every mu, plus d^mu A_mu = 0."""
    m2 = coerce(m) ** 2
    B = box(d) - Polynomial.constant(d, m2)
    zero = Polynomial.zero(d)
    rows = []
    for mu in range(d):
        row = [zero] * d
        row[mu] = B
        rows.append(row)
    rows.append([_d(d, mu) * _eta(mu) for mu in range(d)])
    return DiffSystem(
        d,
        [f"A{mu}" for mu in range(d)],
        rows,
        equation_names=[f"KG{mu}" for mu in range(d)] + ["div"],
        parameters={"m": m},
    )


SPIN2_FIELDS = ["S01", "S02", "S03", "S12", "S13", "S23", "S11", "S22", "S33"]


def massive_spin2(m=1):
    """Traceless symmetric S^{mu nu} with S00 = S11 + S22 + S33 eliminated.

    Nine equations (box + m^2) S = 0, one per independent component, and four
    transversality equations d_nu S^{mu nu} = 0.
    """
    d = 4
    m2 = coerce(m) ** 2
    B = box(d) + Polynomial.constant(d, m2)
    zero = Polynomial.zero(d)
    idx = {name: i for i, name in enumerate(SPIN2_FIELDS)}

    def comp(mu, nu):
        """S^{mu nu} as a list of (field index, coefficient)."""
        a, b = min(mu, nu), max(mu, nu)
        if a == b == 0:
            return [(idx["S11"], 1), (idx["S22"], 1), (idx["S33"], 1)]
        return [(idx[f"S{a}{b}"], 1)]

    rows, eqn = [], []
    for name in SPIN2_FIELDS:
        row = [zero] * 9
        row[idx[name]] = B
        rows.append(row)
        eqn.append(f"KG_{name}")
    for mu in range(d):
        row = [zero] * 9
        for nu in range(d):
            for i, c in comp(mu, nu):
                row[i] = row[i] + _d(d, nu) * c
        rows.append(row)
        eqn.append(f"div{mu}")
    return DiffSystem(d, SPIN2_FIELDS, rows, equation_names=eqn, parameters={"m": m})


def koszul_pair():
    """One equation d0 u + d1 v = 0 in d = 2."""
    return DiffSystem(2, ["u", "v"], [[_d(2, 0), _d(2, 1)]], equation_names=["E"])


def trivial(d=4, fields=1):
    """phi = 0 for each field: no solutions at all."""
    zero, one = Polynomial.zero(d), Polynomial.one(d)
    rows = [[one if i == j else zero for j in range(fields)] for i in range(fields)]
    return DiffSystem(d, [f"phi{i}" for i in range(fields)], rows)


CATALOG = {
    "maxwell": maxwell_strength,
    "maxwell_potential": maxwell_potential,
    "proca_raw": proca_raw,
    "proca_kg": proca_kg,
    "spin2": massive_spin2,
    "koszul": koszul_pair,
}
