"""Cubic surfaces over finite fields: points, lines, traces, and Frobenius data.

A surface is a nonzero quaternary cubic form, 20 coefficients in graded-lex
monomial order with x > y > z > w.  Point counting and line enumeration are
vectorized over integer-encoded field elements (discrete-log tables for
multiplication, coordinate tables for addition), which keeps fields up to a
few thousand elements at interactive speed.

Lines are canonical 2x4 reduced row-echelon matrices; a line lies on the
surface when all four coefficients of the restricted binary cubic vanish (an
exact polynomial identity, so small fields are never a soundness issue).
Smoothness is certified operationally: a singular point over a small extension
refutes it, and exactly 27 lines over some extension whose intersection graph
matches the degree-3 incidence graph certifies it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache

import numpy as np

from .gf import Element, FieldSpec, embed, field
from .incidence import find_isomorphism, incidence_graph
from .lattice import DegreeContext
from .permgroup import fixed_points_of_power

#: degree-3 monomials in x, y, z, w: graded lex, x > y > z > w
MONOMIALS: tuple[tuple[int, int, int, int], ...] = tuple(
    sorted(
        (e for e in itertools.product(range(4), repeat=4) if sum(e) == 3),
        reverse=True,
    )
)

LINE_ENUMERATION_FIELD_CAP = 2**16
TABLE_FIELD_CAP = 2**16

#: permissive default work budgets; drivers usually pass something smaller
DEFAULT_POINT_BUDGET = 10**9
DEFAULT_LINE_BUDGET = 10**8


class NotSmoothOrBadReduction(RuntimeError):
    """Counting data inconsistent with a smooth cubic surface."""


class BudgetExceeded(RuntimeError):
    """The operation would overrun the configured work budget."""


def _monomial_factors(e: tuple[int, int, int, int]) -> tuple[int, int, int]:
    """The three variable indices whose product is the monomial."""
    out = []
    for v, mult in enumerate(e):
        out.extend([v] * mult)
    return tuple(out)


_FACTORS = tuple(_monomial_factors(e) for e in MONOMIALS)


# -- vectorized field arithmetic ---------------------------------------------


def _primitive_element(fs: FieldSpec) -> Element:
    n = fs.order - 1
    primes = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    for enc in range(2, fs.order):
        g = fs.from_int(enc)
        if all(fs.pow(g, n // ell) != fs.one() for ell in primes):
            return g
    return fs.from_int(1)  # GF(2): the only unit


class _Tables:
    """Branch-free vectorized arithmetic on integer-encoded field elements."""

    def __init__(self, fs: FieldSpec):
        if fs.order > TABLE_FIELD_CAP:
            raise BudgetExceeded(f"no arithmetic tables above order {TABLE_FIELD_CAP}")
        self.fs = fs
        q = fs.order
        self.q = q
        gen = _primitive_element(fs)
        # LOG[0] = 2(q-1) so that any product with zero lands in the zero pad
        exp = np.zeros(4 * (q - 1) + 1, dtype=np.int64)
        log = np.full(q, 2 * (q - 1), dtype=np.int64)
        e = fs.one()
        for t in range(q - 1):
            enc = fs.to_int(e)
            exp[t] = enc
            exp[t + (q - 1)] = enc
            log[enc] = t
            e = fs.mul(e, gen)
        self.EXP = exp
        self.LOG = log
        if fs.p == 2:
            self.COORDS = None
            self.PPOW = None
        else:
            self.COORDS = np.array([fs.from_int(n) for n in range(q)], dtype=np.int64)
            self.PPOW = np.array([fs.p**i for i in range(fs.k)], dtype=np.int64)
        self.NEG = np.array([fs.to_int(fs.neg(fs.from_int(n))) for n in range(q)], dtype=np.int64)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.EXP[self.LOG[a] + self.LOG[b]]

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.COORDS is None:
            return np.bitwise_xor(a, b)
        return ((self.COORDS[a] + self.COORDS[b]) % self.fs.p) @ self.PPOW

    def pow(self, a: np.ndarray, e: int) -> np.ndarray:
        if e == 0:
            return np.ones_like(a)
        out = a
        for _ in range(e - 1):
            out = self.mul(out, a)
        return out


@lru_cache(maxsize=None)
def tables(fs: FieldSpec) -> _Tables:
    return _Tables(fs)


# -- the surface --------------------------------------------------------------


@dataclass(frozen=True)
class CubicForm:
    """Nonzero cubic form; coeffs follow MONOMIALS order."""

    field: FieldSpec
    coeffs: tuple[Element, ...]

    def __post_init__(self):
        if len(self.coeffs) != 20:
            raise ValueError("a quaternary cubic has exactly 20 coefficients")
        if all(self.field.is_zero(c) for c in self.coeffs):
            raise ValueError("the zero form does not define a surface")

    @staticmethod
    def from_ints(fs: FieldSpec, encodings: list[int]) -> "CubicForm":
        return CubicForm(fs, tuple(fs.from_int(n) for n in encodings))

    @staticmethod
    def fermat(fs: FieldSpec) -> "CubicForm":
        """x^3 + y^3 + z^3 + w^3."""
        one = fs.one()
        cube_positions = [MONOMIALS.index(e) for e in [(3, 0, 0, 0), (0, 3, 0, 0), (0, 0, 3, 0), (0, 0, 0, 3)]]
        coeffs = [fs.zero()] * 20
        for pos in cube_positions:
            coeffs[pos] = one
        return CubicForm(fs, tuple(coeffs))

    def coefficient_encodings(self) -> list[int]:
        return [self.field.to_int(c) for c in self.coeffs]

    def evaluate(self, point: tuple[Element, Element, Element, Element]) -> Element:
        fs = self.field
        acc = fs.zero()
        for c, factors in zip(self.coeffs, _FACTORS):
            if fs.is_zero(c):
                continue
            term = c
            for v in factors:
                term = fs.mul(term, point[v])
            acc = fs.add(acc, term)
        return acc

    def extend(self, m: int) -> "CubicForm":
        """The same form with coefficients embedded into GF(q^m)."""
        if m == 1:
            return self
        fs = self.field
        big = field(fs.p, fs.k * m)
        lift = embed(fs, big)
        return CubicForm(big, tuple(lift(c) for c in self.coeffs))

    def gradient(self) -> list[list[tuple[Element, tuple[int, int, int, int]]]]:
        """Per variable, the nonzero terms of the partial derivative."""
        fs = self.field
        out = []
        for v in range(4):
            terms = []
            for c, e in zip(self.coeffs, MONOMIALS):
                if e[v] == 0 or fs.is_zero(c):
                    continue
                scaled = fs.mul(c, fs.scalar(e[v]))
                if fs.is_zero(scaled):
                    continue
                lowered = tuple(x - 1 if i == v else x for i, x in enumerate(e))
                terms.append((scaled, lowered))
            out.append(terms)
        return out


def _eval_terms_batch(
    tab: _Tables,
    terms: list[tuple[int, tuple[int, ...]]],
    coords: list[np.ndarray],
) -> np.ndarray:
    """Evaluate sum of c * prod coords[v]^e_v on encoded coordinate arrays."""
    shape = np.broadcast_shapes(*(c.shape for c in coords))
    acc = np.zeros(shape, dtype=np.int64)
    powers: dict[tuple[int, int], np.ndarray] = {}
    for enc, e in terms:
        if enc == 0:
            continue
        term = np.full(shape, enc, dtype=np.int64)
        for v, mult in enumerate(e):
            if mult == 0:
                continue
            key = (v, mult)
            if key not in powers:
                powers[key] = tab.pow(coords[v], mult)
            term = tab.mul(term, np.broadcast_to(powers[key], shape))
        acc = tab.add(acc, term)
    return acc


def _form_terms(form: CubicForm) -> list[tuple[int, tuple[int, ...]]]:
    fs = form.field
    return [
        (fs.to_int(c), e)
        for c, e in zip(form.coeffs, MONOMIALS)
        if not fs.is_zero(c)
    ]


def _strata(q: int, zw: tuple[np.ndarray, np.ndarray]):
    """The four affine strata of P^3 as (X, Y, Z, W) encoded-coordinate arrays;
    the first stratum is yielded in q chunks of size q^2."""
    z, w = zw
    one = np.int64(1)
    zero = np.int64(0)
    for y_enc in range(q):
        yield (one, np.int64(y_enc), z, w)
    yield (zero, one, z, w)
    line = np.arange(q, dtype=np.int64)
    yield (zero, zero, one, line)
    yield (zero, zero, zero, one)


def _zw_grid(q: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.arange(q, dtype=np.int64)
    z, w = np.meshgrid(rng, rng, indexing="ij")
    return z.ravel(), w.ravel()


def count_points(form: CubicForm, budget: int = DEFAULT_POINT_BUDGET) -> int:
    """|{P in P^3(F_q) : F(P) = 0}| by iterating the four affine strata."""
    q = form.field.order
    if q**3 > budget:
        raise BudgetExceeded(f"point count over order-{q} field exceeds budget {budget}")
    tab = tables(form.field)
    terms = _form_terms(form)
    zw = _zw_grid(q)
    total = 0
    for coords in _strata(q, zw):
        values = _eval_terms_batch(tab, terms, [np.atleast_1d(np.asarray(c)) for c in coords])
        total += int((values == 0).sum())
    return total


def singular_point(
    form: CubicForm, budget: int = DEFAULT_POINT_BUDGET, max_extension: int = 3
) -> tuple[int, tuple[int, int, int, int]] | None:
    """A point of the surface over GF(q^m), m <= max_extension, where all four
    partials vanish; returns (m, point encodings) or None if none found within
    budget."""
    q = form.field.order
    for m in range(1, max_extension + 1):
        if q ** (3 * m) > budget:
            break
        ext = form.extend(m)
        tab = tables(ext.field)
        terms = _form_terms(ext)
        grads = [
            [(ext.field.to_int(c), e) for c, e in terms_v]
            for terms_v in ext.gradient()
        ]
        zw = _zw_grid(ext.field.order)
        for coords in _strata(ext.field.order, zw):
            arrays = [np.atleast_1d(np.asarray(c)) for c in coords]
            values = _eval_terms_batch(tab, terms, arrays)
            on_surface = np.nonzero(values == 0)[0]
            if len(on_surface) == 0:
                continue
            shape = np.broadcast_shapes(*(a.shape for a in arrays))
            pts = [np.broadcast_to(a, shape)[on_surface] for a in arrays]
            singular = np.ones(len(on_surface), dtype=bool)
            for g_terms in grads:
                singular &= _eval_terms_batch(tab, g_terms, pts) == 0
                if not singular.any():
                    break
            if singular.any():
                i = int(np.nonzero(singular)[0][0])
                return m, tuple(int(p[i]) for p in pts)
    return None


# -- lines ---------------------------------------------------------------


@dataclass(frozen=True)
class LineInP3:
    """A line as its canonical RREF 2x4 matrix (integer-encoded entries)."""

    field: FieldSpec
    pivots: tuple[int, int]
    row1: tuple[int, int, int, int]
    row2: tuple[int, int, int, int]

    def meets(self, other: "LineInP3") -> bool:
        """Two distinct lines in P^3 meet iff the stacked 4x4 matrix is singular."""
        fs = self.field
        rows = [
            [fs.from_int(x) for x in r]
            for r in (self.row1, self.row2, other.row1, other.row2)
        ]
        # Gaussian elimination rank
        rank = 0
        for col in range(4):
            pivot = None
            for r in range(rank, 4):
                if not fs.is_zero(rows[r][col]):
                    pivot = r
                    break
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = fs.inv(rows[rank][col])
            rows[rank] = [fs.mul(x, inv) for x in rows[rank]]
            for r in range(4):
                if r != rank and not fs.is_zero(rows[r][col]):
                    c = rows[r][col]
                    rows[r] = [fs.sub(x, fs.mul(c, y)) for x, y in zip(rows[r], rows[rank])]
            rank += 1
        return rank < 4


def _pattern_free_columns(i: int, j: int) -> tuple[list[int], list[int]]:
    free1 = [k for k in range(4) if k > i and k != j]
    free2 = [k for k in range(4) if k > j]
    return free1, free2


def _row_grid(q: int, pivot: int, free: list[int]) -> list[np.ndarray]:
    """Coordinate arrays (length q^len(free)) for all rows of one RREF shape."""
    size = q ** len(free)
    coords: list[np.ndarray] = [np.zeros(size, dtype=np.int64) for _ in range(4)]
    coords[pivot] = np.ones(size, dtype=np.int64)
    if free:
        mesh = np.meshgrid(*([np.arange(q, dtype=np.int64)] * len(free)), indexing="ij")
        for col, arr in zip(free, mesh):
            coords[col] = arr.ravel()
    return coords


def lines_on_surface(
    form: CubicForm, budget: int = DEFAULT_LINE_BUDGET
) -> list[LineInP3]:
    """All lines of P^3(F_q) contained in the surface.

    Iterates the six RREF pivot patterns; a line is kept when the four
    coefficients of the restricted binary cubic all vanish.  Pair processing
    is staged: rows killing the pure-cube coefficients are intersected first.
    """
    fs = form.field
    q = fs.order
    if q > LINE_ENUMERATION_FIELD_CAP:
        raise BudgetExceeded(f"line enumeration capped at field order {LINE_ENUMERATION_FIELD_CAP}")
    if (q**2 + 1) * (q**2 + q + 1) > budget:
        raise BudgetExceeded(f"line enumeration over order-{q} field exceeds budget {budget}")
    tab = tables(fs)
    terms = _form_terms(form)
    out: list[LineInP3] = []
    for i, j in itertools.combinations(range(4), 2):
        free1, free2 = _pattern_free_columns(i, j)
        grid1 = _row_grid(q, i, free1)
        grid2 = _row_grid(q, j, free2)
        vals1 = _eval_terms_batch(tab, terms, grid1)
        vals2 = _eval_terms_batch(tab, terms, grid2)
        rows1 = np.nonzero(vals1 == 0)[0]
        rows2 = np.nonzero(vals2 == 0)[0]
        if len(rows1) == 0 or len(rows2) == 0:
            continue
        a = [c[rows1] for c in grid1]  # surviving r1 coordinates
        b = [c[rows2] for c in grid2]
        # all pairs, chunked over r1 survivors
        chunk = max(1, (1 << 22) // max(1, len(rows2)))
        n2 = len(rows2)
        for lo in range(0, len(rows1), chunk):
            hi = min(lo + chunk, len(rows1))
            A = [np.repeat(c[lo:hi], n2) for c in a]
            B = [np.tile(c, hi - lo) for c in b]
            c1 = np.zeros(len(A[0]), dtype=np.int64)
            c2 = np.zeros(len(A[0]), dtype=np.int64)
            for enc, e in terms:
                f0, f1, f2 = _monomial_factors(e)
                coeff = np.int64(enc)
                # one factor from row2
                t1 = tab.mul(B[f0], tab.mul(A[f1], A[f2]))
                t1 = tab.add(t1, tab.mul(A[f0], tab.mul(B[f1], A[f2])))
                t1 = tab.add(t1, tab.mul(A[f0], tab.mul(A[f1], B[f2])))
                c1 = tab.add(c1, tab.mul(np.broadcast_to(coeff, t1.shape), t1))
                # two factors from row2
                t2 = tab.mul(A[f0], tab.mul(B[f1], B[f2]))
                t2 = tab.add(t2, tab.mul(B[f0], tab.mul(A[f1], B[f2])))
                t2 = tab.add(t2, tab.mul(B[f0], tab.mul(B[f1], A[f2])))
                c2 = tab.add(c2, tab.mul(np.broadcast_to(coeff, t2.shape), t2))
            good = np.nonzero((c1 == 0) & (c2 == 0))[0]
            for idx in good:
                out.append(
                    LineInP3(
                        fs,
                        (i, j),
                        tuple(int(A[v][idx]) for v in range(4)),
                        tuple(int(B[v][idx]) for v in range(4)),
                    )
                )
    return out


def line_intersection_labels(lines: list[LineInP3]) -> np.ndarray:
    """Pairwise meeting matrix (1 meets / 0 skew), diagonal -1."""
    n = len(lines)
    labels = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            v = 1 if lines[a].meets(lines[b]) else 0
            labels[a, b] = labels[b, a] = v
    return labels


# -- traces and certificates ---------------------------------------------


@dataclass(frozen=True)
class TraceSequence:
    """t_j = (#X(F_{q^j}) - q^{2j} - 1) / q^j for j = 1..m."""

    base_order: int
    values: tuple[int, ...]


def trace_sequence(
    form: CubicForm, m_max: int, budget: int = DEFAULT_POINT_BUDGET
) -> TraceSequence:
    q = form.field.order
    values = []
    for m in range(1, m_max + 1):
        if q ** (3 * m) > budget:
            break
        count = count_points(form.extend(m), budget=budget)
        qm = q**m
        num = count - qm * qm - 1
        if num % qm != 0:
            raise NotSmoothOrBadReduction(
                f"point count {count} over GF({q}^{m}) violates the Weil shape"
            )
        t = num // qm
        if abs(t) > 7:
            raise NotSmoothOrBadReduction(f"trace t_{m} = {t} out of [-7, 7]")
        values.append(t)
    return TraceSequence(q, tuple(values))


SMOOTH_CERTIFIED = "smooth_certified"
NOT_SMOOTH = "not_smooth"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class SmoothnessVerdict:
    status: str
    reason: str
    line_counts: dict[int, int] = dataclass_field(default_factory=dict)
    splitting_extension: int | None = None
    witness: tuple | None = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "line_counts": {str(k): v for k, v in sorted(self.line_counts.items())},
            "splitting_extension": self.splitting_extension,
            "witness": list(self.witness) if self.witness else None,
        }


def smoothness_certificate(
    form: CubicForm,
    point_budget: int = DEFAULT_POINT_BUDGET,
    line_budget: int = DEFAULT_LINE_BUDGET,
    max_line_field: int = LINE_ENUMERATION_FIELD_CAP,
) -> SmoothnessVerdict:
    """Operational certificate: NOT_SMOOTH on a singular point over GF(q^m)
    (m <= 3) or a wrong line configuration; SMOOTH_CERTIFIED on exactly 27
    lines over some extension with the degree-3 incidence graph; otherwise
    UNDETERMINED."""
    q = form.field.order
    hit = singular_point(form, budget=point_budget)
    if hit is not None:
        return SmoothnessVerdict(
            NOT_SMOOTH, f"singular point over extension {hit[0]}", witness=hit
        )
    counts: dict[int, int] = {}
    m = 1
    while q ** (4 * m) <= line_budget and q**m <= max_line_field:
        lines = lines_on_surface(form.extend(m), budget=line_budget)
        counts[m] = len(lines)
        if len(lines) > 27:
            return SmoothnessVerdict(
                NOT_SMOOTH, f"{len(lines)} lines over extension {m}", line_counts=counts
            )
        if len(lines) == 27:
            labels = line_intersection_labels(lines)
            iso = find_isomorphism(labels, incidence_graph(DegreeContext(3)))
            if iso is None:
                return SmoothnessVerdict(
                    NOT_SMOOTH,
                    "27 lines with a wrong incidence graph",
                    line_counts=counts,
                )
            return SmoothnessVerdict(
                SMOOTH_CERTIFIED,
                f"27 lines over extension {m} with the expected incidences",
                line_counts=counts,
                splitting_extension=m,
            )
        m += 1
    return SmoothnessVerdict(UNDETERMINED, "line budget exhausted before 27 lines", line_counts=counts)


@dataclass(frozen=True)
class FrobeniusEvidence:
    """Conjugacy classes consistent with the counting evidence of one surface."""

    class_ids: tuple[int, ...]
    line_counts: dict[int, int]
    traces: tuple[int, ...]

    @property
    def pinned(self) -> bool:
        return len(self.class_ids) == 1

    def to_json(self) -> dict:
        return {
            "class_ids": list(self.class_ids),
            "line_counts": {str(k): v for k, v in sorted(self.line_counts.items())},
            "traces": list(self.traces),
        }


def _matching_classes(class_table, counts: dict[int, int], traces: dict[int, int]):
    out = []
    for row in class_table.rows:
        if any(fixed_points_of_power(row.cycle_type, m) != c for m, c in counts.items()):
            continue
        if any(1 + row.lattice_traces[m - 1] != t for m, t in traces.items()):
            continue
        out.append(row.class_id)
    return out


def frobenius_class(
    form: CubicForm,
    class_table,
    point_budget: int = DEFAULT_POINT_BUDGET,
    line_budget: int = DEFAULT_LINE_BUDGET,
    verdict: SmoothnessVerdict | None = None,
    max_depth: int = 12,
    max_line_field: int = 512,
) -> FrobeniusEvidence:
    """Every conjugacy class consistent with the rational-line counts over the
    extensions and traces within budget; raises when no class fits.

    Evidence is gathered adaptively, shallow extensions first, and stops as
    soon as a single class remains: the ambiguity set always contains the true
    class of a smooth reduction, so early singletons are exact."""
    if verdict is not None and verdict.status == NOT_SMOOTH:
        raise NotSmoothOrBadReduction("surface is certified non-smooth")
    q = form.field.order
    counts = dict(verdict.line_counts) if verdict is not None else {}
    traces: dict[int, int] = {}
    candidates = _matching_classes(class_table, counts, traces)
    for m in range(1, max_depth + 1):
        if len(candidates) == 1:
            break
        progressed = False
        if m not in counts and q ** (4 * m) <= line_budget and q**m <= min(
            max_line_field, LINE_ENUMERATION_FIELD_CAP
        ):
            counts[m] = len(lines_on_surface(form.extend(m), budget=line_budget))
            progressed = True
        if q ** (3 * m) <= point_budget:
            count = count_points(form.extend(m), budget=point_budget)
            qm = q**m
            num = count - qm * qm - 1
            if num % qm != 0 or abs(num // qm) > 7:
                raise NotSmoothOrBadReduction(
                    f"point count {count} over GF({q}^{m}) violates the Weil shape"
                )
            traces[m] = num // qm
            progressed = True
        if progressed:
            candidates = _matching_classes(class_table, counts, traces)
            if not candidates:
                raise NotSmoothOrBadReduction("no conjugacy class matches the evidence")
    if not candidates:
        raise NotSmoothOrBadReduction("no conjugacy class matches the evidence")
    trace_tuple = tuple(traces[m] for m in sorted(traces))
    return FrobeniusEvidence(tuple(candidates), counts, trace_tuple)


def splitting_degree(evidence: FrobeniusEvidence, class_table) -> int | tuple[int, ...]:
    """The order of the Frobenius class when pinned, else the order set."""
    orders = sorted({class_table.rows[c].element_order for c in evidence.class_ids})
    return orders[0] if len(orders) == 1 else tuple(orders)
