"""Linear constant-coefficient PDE systems T(d) phi = 0 and their classification."""

from dataclasses import dataclass

from .errors import InvalidSystem
from .freemod import (
    GradedFreeModule,
    groebner,
    rows,
    submodule_equal,
    syzygies,
    top_form_submodule,
)
from .ring import NEG_INF, Polynomial, coerce, default_names


@dataclass(frozen=True)
class FieldDecl:
    name: str
    order: int = 0


class DiffSystem:
    """n equations in m fields: matrix[a][i] is the operator acting on field i in equation a.

    Equation orders are k_a = max_i(deg T_ai + theta_i) unless given explicitly
    (explicit orders may only exceed the computed ones).
    """

    def __init__(
        self,
        dimension,
        fields,
        matrix,
        equation_names=None,
        parameters=None,
        equation_orders=None,
        allow_zero_rows=False,
        variable_names=None,
    ):
        if dimension < 1:
            raise InvalidSystem("dimension must be at least 1")
        self.dimension = d = int(dimension)
        self.fields = tuple(f if isinstance(f, FieldDecl) else FieldDecl(str(f)) for f in fields)
        if len({f.name for f in self.fields}) != len(self.fields):
            raise InvalidSystem("field names must be unique")
        m = len(self.fields)
        if m < 1:
            raise InvalidSystem("a system needs at least one field")
        mat = []
        for r in matrix:
            if len(r) != m:
                raise InvalidSystem(f"row of length {len(r)} but {m} fields")
            row = []
            for p in r:
                if not isinstance(p, Polynomial):
                    p = Polynomial.constant(d, coerce(p))
                if p.nvars != d:
                    raise InvalidSystem("matrix entry has the wrong number of variables")
                row.append(p)
            mat.append(tuple(row))
        if not mat:
            raise InvalidSystem("a system needs at least one equation")
        self.matrix = tuple(mat)
        n = len(mat)
        self.equation_names = tuple(equation_names) if equation_names else tuple(f"E{a}" for a in range(n))
        if len(self.equation_names) != n:
            raise InvalidSystem("one name per equation required")
        self.parameters = dict(parameters or {})
        self.allow_zero_rows = allow_zero_rows
        self.variable_names = tuple(variable_names) if variable_names else tuple(default_names(d))
        computed = []
        for a, row in enumerate(mat):
            degs = [p.degree + f.order for p, f in zip(row, self.fields) if p]
            if not degs:
                if not allow_zero_rows:
                    raise InvalidSystem(
                        f"equation {self.equation_names[a]!r} is identically zero; delete it or allow zero rows"
                    )
                computed.append(None)
            else:
                computed.append(max(degs))
        if equation_orders is not None:
            equation_orders = [int(k) for k in equation_orders]
            if len(equation_orders) != n:
                raise InvalidSystem("one order per equation required")
            for k, c in zip(equation_orders, computed):
                if c is not None and k < c:
                    raise InvalidSystem("explicit equation order below the order of its terms")
            self.explicit_orders = True
            self._orders = tuple(equation_orders)
        else:
            self.explicit_orders = False
            self._orders = tuple(0 if c is None else c for c in computed)

    @property
    def n(self):
        return len(self.matrix)

    @property
    def m(self):
        return len(self.fields)

    @property
    def theta(self):
        return tuple(f.order for f in self.fields)

    @property
    def field_names(self):
        return tuple(f.name for f in self.fields)

    def equation_orders(self):
        return list(self._orders)

    def field_module(self):
        return GradedFreeModule(self.dimension, self.theta)

    def equation_module(self):
        return GradedFreeModule(self.dimension, self._orders)

    def row_vectors(self):
        return rows(self.matrix, self.field_module())

    def has_zero_rows(self):
        return any(not any(row) for row in self.matrix)

    def with_matrix(self, matrix, equation_names=None, **kw):
        return DiffSystem(
            self.dimension,
            self.fields,
            matrix,
            equation_names=equation_names,
            parameters=self.parameters,
            variable_names=self.variable_names,
            **kw,
        )

    def __eq__(self, o):
        return (
            isinstance(o, DiffSystem)
            and self.dimension == o.dimension
            and self.fields == o.fields
            and self.matrix == o.matrix
            and self._orders == o._orders
        )

    def __hash__(self):
        return hash((self.dimension, self.fields, self.matrix))

    def __repr__(self):
        return f"DiffSystem(d={self.dimension}, m={self.m}, n={self.n})"


def equation_orders(sys):
    return sys.equation_orders()


def is_homogeneous(sys):
    k = sys.equation_orders()
    for a, row in enumerate(sys.matrix):
        for p, f in zip(row, sys.fields):
            if p and not (p.is_homogeneous() and p.degree == k[a] - f.order):
                return False
    return True


def symbol(sys):
    k = sys.equation_orders()
    mat = [
        [p.homogeneous_part(k[a] - f.order) for p, f in zip(row, sys.fields)]
        for a, row in enumerate(sys.matrix)
    ]
    return DiffSystem(
        sys.dimension,
        sys.fields,
        mat,
        equation_names=sys.equation_names,
        parameters=sys.parameters,
        equation_orders=k,
        allow_zero_rows=True,
        variable_names=sys.variable_names,
    )


def conjugate(sys, field_orders=None, equation_orders=None, dual_grading=True):
    """Hermitian conjugate system: transpose with d -> -d and conjugated coefficients.

    By default fields get orders -k_a and equations the explicit orders -theta_i.
    With dual_grading=False the equation orders are recomputed from the terms.
    """
    k = sys.equation_orders()
    mat = [[sys.matrix[a][i].hermitian_conjugate() for a in range(sys.n)] for i in range(sys.m)]
    forders = field_orders if field_orders is not None else [-x for x in k]
    fields = [FieldDecl(name, o) for name, o in zip(sys.equation_names, forders)]
    if equation_orders is None and dual_grading:
        equation_orders = [-t for t in sys.theta]
    return DiffSystem(
        sys.dimension,
        fields,
        mat,
        equation_names=sys.field_names,
        parameters=sys.parameters,
        equation_orders=equation_orders,
        allow_zero_rows=True,
        variable_names=sys.variable_names,
    )


def is_lagrangian(sys):
    if sys.n != sys.m:
        return False
    return all(
        sys.matrix[a][i] == sys.matrix[i][a].hermitian_conjugate() for a in range(sys.n) for i in range(sys.m)
    )


def is_weakly_involutive(sys):
    """lt(Row T) == Row(lt T) in the field module graded by theta."""
    F = sys.field_module()
    lt_rows = top_form_submodule(sys.row_vectors(), module=F)
    sym_rows = [v for v in symbol(sys).row_vectors() if v]
    return submodule_equal(lt_rows, sym_rows, module=F)


def symbols_compatible(sys):
    """symbol(conjugate) == conjugate(symbol) with the conjugate's orders recomputed."""
    lhs = symbol(conjugate(sys, dual_grading=False))
    rhs = conjugate(symbol(sys), dual_grading=False)
    return lhs.matrix == rhs.matrix


def is_doubly_weakly_involutive(sys):
    if not is_weakly_involutive(sys):
        return False
    if not is_weakly_involutive(conjugate(sys)):
        return False
    return symbols_compatible(sys)


def system_from_rows(sys, vectors, prefix="G"):
    mat = [[v[i] for i in range(sys.m)] for v in vectors]
    return sys.with_matrix(mat, equation_names=[f"{prefix}{a}" for a in range(len(mat))])


def groebner_completion(sys):
    """Equivalent system whose rows form the reduced Groebner basis of the row module."""
    G = groebner(sys.row_vectors(), module=sys.field_module())
    if not G.elements:
        raise InvalidSystem("the row module is zero")
    return system_from_rows(sys, G.elements)


def symbol_kernel_check(sys):
    """lt(relations among the rows) == relations among the symbol rows (graded by k_a)."""
    E = sys.equation_module()
    rel = syzygies(sys.row_vectors(), module=sys.field_module(), source=E)
    sym_rel = syzygies(symbol(sys).row_vectors(), module=sys.field_module(), source=E)
    lt_rel = top_form_submodule(rel, module=E) if rel else []
    return submodule_equal(lt_rel, sym_rel, module=E)

