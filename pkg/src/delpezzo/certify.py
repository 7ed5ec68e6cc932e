"""Conclusions from Frobenius cycle-type evidence on the 27 lines.

Everything here is derived at build time from the in-repo group engine, never
shipped as opaque constants: the 25-class table of the 27-line symmetry group
(cycle types, element orders, characteristic polynomials and traces on the
rank-6 orthogonal complement of the canonical class, fixed-line counts, class
sizes), the cycle-type sets of the classical stabilizer subgroups, and the
certificates built on them.

Soundness of the exclusion logic: if the Galois image stabilizes some double
six, it lies in a conjugate of the double-six stabilizer, so every Frobenius
element has a cycle type from that subgroup's set (cycle types are conjugation
invariant, and transitivity on double sixes is verified elsewhere, so one
representative subgroup suffices).  A place whose whole ambiguity set avoids
the set therefore rules the stabilization out.  Triviality of the first
cohomology follows when both the double-six and the componentwise triple-nine
stabilizations are excluded; the 5-part vanishes unconditionally.  An
independent oracle computes the cohomology of any single incidence-preserving
permutation exactly on the rank-7 lattice via integer Smith normal form.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .incidence import double_sixes, incidence_graph, triple_nines, tritangent_triangles, weyl_image
from .lattice import DegreeContext, exceptional_classes
from .permgroup import Permutation, cycle_type, fixed_points_of_power

TRACE_DEPTH = 12  # covers every element order in the group


# -- integer linear algebra ---------------------------------------------------


def charpoly(a: np.ndarray) -> tuple[int, ...]:
    """Monic characteristic polynomial of an integer matrix, leading term
    first, by the Faddeev-LeVerrier recursion (exact integer divisions)."""
    n = a.shape[0]
    a = a.astype(object)
    b = np.eye(n, dtype=object)
    coeffs = [1]
    for k in range(1, n + 1):
        ab = a @ b
        c = -sum(ab[i, i] for i in range(n))
        assert c % k == 0
        c //= k
        coeffs.append(int(c))
        b = ab + c * np.eye(n, dtype=object)
    return tuple(coeffs)


def smith_normal_form(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """U, D, V with U @ mat @ V = D diagonal, U and V unimodular, and the
    diagonal entries nonnegative with each dividing the next."""
    d = mat.astype(object).copy()
    m, n = d.shape
    u = np.eye(m, dtype=object)
    v = np.eye(n, dtype=object)

    def swap_rows(i, j):
        d[[i, j], :] = d[[j, i], :]
        u[[i, j], :] = u[[j, i], :]

    def swap_cols(i, j):
        d[:, [i, j]] = d[:, [j, i]]
        v[:, [i, j]] = v[:, [j, i]]

    def add_row(src, dst, c):
        d[dst, :] += c * d[src, :]
        u[dst, :] += c * u[src, :]

    def add_col(src, dst, c):
        d[:, dst] += c * d[:, src]
        v[:, dst] += c * v[:, src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero magnitude in the remaining block
        block = [(abs(d[i, j]), i, j) for i in range(t, m) for j in range(t, n) if d[i, j] != 0]
        if not block:
            break
        _, pi, pj = min(block)
        swap_rows(t, pi)
        swap_cols(t, pj)
        dirty = False
        for i in range(t + 1, m):
            if d[i, t] != 0:
                q = d[i, t] // d[t, t]
                add_row(t, i, -q)
                dirty = dirty or d[i, t] != 0
        for j in range(t + 1, n):
            if d[t, j] != 0:
                q = d[t, j] // d[t, t]
                add_col(t, j, -q)
                dirty = dirty or d[t, j] != 0
        if dirty:
            continue
        # divisibility: fold any non-multiple into the pivot row and retry
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i, j] % d[t, t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        if d[t, t] < 0:
            d[t, :] *= -1
            u[t, :] *= -1
        t += 1
    return u, d, v


def kernel_basis(mat: np.ndarray) -> np.ndarray:
    """Integer basis (columns) of the kernel lattice of an integer matrix."""
    _, d, v = smith_normal_form(mat)
    m, n = d.shape
    cols = [j for j in range(n) if j >= m or d[j, j] == 0]
    return v[:, cols]


def solve_integer(b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Integer solution Y of B @ Y = C for full-column-rank B (entries small);
    solved over the rationals, rounded, and verified exactly."""
    if b.shape[1] == 0:
        if np.any(c):
            raise ValueError("inconsistent system")
        return np.zeros((0, c.shape[1]), dtype=object)
    y, *_ = np.linalg.lstsq(b.astype(np.float64), c.astype(np.float64), rcond=None)
    y = np.rint(y).astype(np.int64).astype(object)
    if not np.array_equal(b.astype(object) @ y, c.astype(object)):
        raise ValueError("no integer solution")
    return y


# -- the lattice lift of line permutations ------------------------------------


@lru_cache(maxsize=None)
def _lift_data():
    ctx = DegreeContext(3)
    classes = exceptional_classes(ctx)
    vecs = np.array(classes, dtype=np.int64)  # 27 x 7, rows are class vectors
    basis_vectors = [
        (0, 1, 0, 0, 0, 0, 0),
        (0, 0, 1, 0, 0, 0, 0),
        (0, 0, 0, 1, 0, 0, 0),
        (0, 0, 0, 0, 1, 0, 0),
        (0, 0, 0, 0, 0, 1, 0),
        (0, 0, 0, 0, 0, 0, 1),
        (1, -1, -1, 0, 0, 0, 0),
    ]
    basis_idx = [classes.index(v) for v in basis_vectors]
    vb = vecs[basis_idx].T  # 7 x 7, unimodular
    vb_inv = np.rint(np.linalg.inv(vb)).astype(np.int64)
    assert np.array_equal(vb @ vb_inv, np.eye(7, dtype=np.int64))
    # the root-lattice basis: simple roots as columns
    from .lattice import simple_roots

    rt = np.array(simple_roots(ctx), dtype=np.int64).T  # 7 x 6
    return vecs, basis_idx, vb_inv, rt


def lattice_matrix(perm: Permutation) -> np.ndarray:
    """The 7x7 integer matrix of the lattice map induced by a permutation of
    the 27 classes (columns act on coordinate vectors)."""
    vecs, basis_idx, vb_inv, _ = _lift_data()
    images = vecs[[perm[b] for b in basis_idx]].T
    return images @ vb_inv


def root_lattice_matrix(perm: Permutation) -> np.ndarray:
    """The induced 6x6 matrix on the orthogonal complement of the canonical
    class, written in the simple-root basis."""
    _, _, _, rt = _lift_data()
    m = lattice_matrix(perm)
    return solve_integer(rt.astype(object), (m @ rt).astype(object)).astype(np.int64)


# -- class table ---------------------------------------------------------------


@dataclass(frozen=True)
class ClassRow:
    class_id: int
    representative: Permutation
    cycle_type: tuple[int, ...]
    element_order: int
    class_size: int
    char_poly: tuple[int, ...]  # on the rank-6 root lattice, leading term first
    lattice_traces: tuple[int, ...]  # trace of the rank-6 power m = 1..TRACE_DEPTH
    fixed_lines: tuple[int, ...]  # fixed points of the m-th power, m = 1..TRACE_DEPTH

    def to_json(self) -> dict:
        return {
            "class_id": self.class_id,
            "representative": list(self.representative),
            "cycle_type": list(self.cycle_type),
            "element_order": self.element_order,
            "class_size": self.class_size,
            "char_poly": list(self.char_poly),
            "lattice_traces": list(self.lattice_traces),
            "fixed_lines": list(self.fixed_lines),
        }


@dataclass(frozen=True)
class SubgroupCycleSet:
    name: str
    order: int
    cycle_types: frozenset[tuple[int, ...]]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "cycle_types": sorted(list(t) for t in self.cycle_types),
        }


@dataclass(frozen=True)
class ClassTable:
    rows: tuple[ClassRow, ...]
    subgroups: dict[str, SubgroupCycleSet]
    cycle_types_separate_classes: bool
    char_polys_separate_classes: bool
    content_hash: str

    def row_by_cycle_type(self, ct: tuple[int, ...]) -> list[ClassRow]:
        return [r for r in self.rows if r.cycle_type == ct]

    def all_cycle_types(self) -> frozenset[tuple[int, ...]]:
        return frozenset(r.cycle_type for r in self.rows)

    def element_orders(self) -> frozenset[int]:
        return frozenset(r.element_order for r in self.rows)


SUBGROUP_NAMES = (
    "LineStab",
    "DoubleSixStab",
    "TritangentStab",
    "TripleNineComponentwiseStab",
    "TripleNineSetStab",
    "EvenSubgroup",
)


def _element_array(group) -> np.ndarray:
    return np.array(list(group.elements()), dtype=np.int64)


def _determinants(elements: np.ndarray) -> np.ndarray:
    """Batched determinant signs of the rank-7 lattice lifts."""
    vecs, basis_idx, vb_inv, _ = _lift_data()
    images = vecs[elements[:, basis_idx]]  # (N, 7, 7) rows are image vectors
    mats = np.swapaxes(images, 1, 2).astype(np.float64) @ vb_inv.astype(np.float64)
    return np.rint(np.linalg.det(mats)).astype(np.int64)


@lru_cache(maxsize=None)
def build_class_table() -> ClassTable:
    """Derive the full 25-row class table and the stabilizer cycle-type sets
    from scratch; everything is content-hashed for report provenance."""
    ctx = DegreeContext(3)
    graph = incidence_graph(ctx)
    w = weyl_image(ctx)
    assert w.order == 51840

    classes = w.conjugacy_classes()
    reps_sorted = sorted(
        classes, key=lambda c: (math.lcm(*cycle_type(c[0])), cycle_type(c[0]), c[0])
    )
    rows = []
    for class_id, (rep, size) in enumerate(reps_sorted):
        ct = cycle_type(rep)
        a6 = root_lattice_matrix(rep)
        traces = []
        power = np.eye(6, dtype=np.int64)
        for _ in range(TRACE_DEPTH):
            power = power @ a6
            traces.append(int(power.trace()))
        rows.append(
            ClassRow(
                class_id=class_id,
                representative=rep,
                cycle_type=ct,
                element_order=math.lcm(*ct),
                class_size=size,
                char_poly=charpoly(a6),
                lattice_traces=tuple(traces),
                fixed_lines=tuple(fixed_points_of_power(ct, m) for m in range(1, TRACE_DEPTH + 1)),
            )
        )
    assert sum(r.class_size for r in rows) == 51840
    assert len(rows) == 25

    elements = _element_array(w)
    all_types = [cycle_type(tuple(int(x) for x in row)) for row in elements]

    ds0 = double_sixes(graph)[0]
    ds_set = np.zeros(27, dtype=bool)
    for x in ds0.line_set:
        ds_set[x] = True
    tri0 = tritangent_triangles(graph)[0]
    tri_set = np.zeros(27, dtype=bool)
    for x in tri0:
        tri_set[x] = True
    tn0 = triple_nines(graph)[0]
    part_id = np.zeros(27, dtype=np.int64)
    for pid, part in enumerate(tn0.parts):
        for x in part:
            part_id[x] = pid

    line_mask = elements[:, 0] == 0
    # image of the marked set stays inside the marked set
    ds_mask = (ds_set[elements] & ds_set[None, :]).sum(axis=1) == 12
    tri_mask = (tri_set[elements] & tri_set[None, :]).sum(axis=1) == 3
    comp_mask = (part_id[elements] == part_id[None, :]).all(axis=1)
    set_mask = np.ones(len(elements), dtype=bool)
    for pid in range(3):
        src = part_id[None, :] == pid
        mx = np.max(np.where(src, part_id[elements], -1), axis=1)
        mn = np.min(np.where(src, part_id[elements], 99), axis=1)
        set_mask &= mx == mn
    even_mask = _determinants(elements) == 1

    masks = {
        "LineStab": line_mask,
        "DoubleSixStab": ds_mask,
        "TritangentStab": tri_mask,
        "TripleNineComponentwiseStab": comp_mask,
        "TripleNineSetStab": set_mask,
        "EvenSubgroup": even_mask,
    }
    subgroups = {}
    for name in SUBGROUP_NAMES:
        mask = masks[name]
        types = frozenset(all_types[i] for i in np.nonzero(mask)[0])
        subgroups[name] = SubgroupCycleSet(name, int(mask.sum()), types)

    types_by_class = [r.cycle_type for r in rows]
    polys_by_class = [r.char_poly for r in rows]
    payload = {
        "rows": [r.to_json() for r in rows],
        "subgroups": [subgroups[n].to_json() for n in SUBGROUP_NAMES],
    }
    digest = hashlib.sha256(
        json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
    return ClassTable(
        rows=tuple(rows),
        subgroups=subgroups,
        cycle_types_separate_classes=len(set(types_by_class)) == 25,
        char_polys_separate_classes=len(set(polys_by_class)) == 25,
        content_hash=digest,
    )


# -- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class PlaceEvidence:
    place: str
    class_ids: tuple[int, ...]

    def __post_init__(self):
        if not self.class_ids:
            raise ValueError("an ambiguity set must be nonempty")


@dataclass(frozen=True)
class CycleTypeObservation:
    places: tuple[PlaceEvidence, ...]


NO_STABLE_DOUBLE_SIX = "NoStableDoubleSix"
NO_STABLE_TRIPLE_NINE = "NoStableTripleNine"
H1_TRIVIAL = "H1Trivial"
NOT_IN_LISTED_SUBGROUPS = "NotInListedSubgroups"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Certificate:
    kind: str
    witnesses: dict[str, str]  # excluded subgroup -> witnessing place
    table_hash: str

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "witnesses": dict(sorted(self.witnesses.items())),
            "table_hash": self.table_hash,
        }


def _excluding_place(
    obs: CycleTypeObservation, table: ClassTable, subgroup: str
) -> str | None:
    """A place whose entire ambiguity set has cycle types outside the
    subgroup's set, or None (conservative semantics)."""
    allowed = table.subgroups[subgroup].cycle_types
    for pe in obs.places:
        if all(table.rows[c].cycle_type not in allowed for c in pe.class_ids):
            return pe.place
    return None


def h1_certificate(obs: CycleTypeObservation, table: ClassTable | None = None) -> Certificate:
    """Triviality of the first cohomology from place evidence: excluding a
    stable double six kills the 2-part, excluding a componentwise-stable
    triple nine kills the 3-part, and the 5-part is never present."""
    table = table or build_class_table()
    ds = _excluding_place(obs, table, "DoubleSixStab")
    tn = _excluding_place(obs, table, "TripleNineComponentwiseStab")
    if ds and tn:
        return Certificate(
            H1_TRIVIAL,
            {"DoubleSixStab": ds, "TripleNineComponentwiseStab": tn},
            table.content_hash,
        )
    if ds:
        return Certificate(NO_STABLE_DOUBLE_SIX, {"DoubleSixStab": ds}, table.content_hash)
    if tn:
        return Certificate(
            NO_STABLE_TRIPLE_NINE,
            {"TripleNineComponentwiseStab": tn},
            table.content_hash,
        )
    return Certificate(INCONCLUSIVE, {}, table.content_hash)


def subgroup_exclusion_certificate(
    obs: CycleTypeObservation,
    table: ClassTable | None = None,
    names: tuple[str, ...] = SUBGROUP_NAMES,
) -> Certificate:
    """NotInListedSubgroups when every listed subgroup is excluded by some
    place; the claim is exactly non-containment in the listed subgroups."""
    table = table or build_class_table()
    witnesses = {}
    for name in names:
        place = _excluding_place(obs, table, name)
        if place is None:
            return Certificate(INCONCLUSIVE, witnesses, table.content_hash)
        witnesses[name] = place
    return Certificate(NOT_IN_LISTED_SUBGROUPS, witnesses, table.content_hash)


# -- independent cyclic cohomology oracle ---------------------------------------


def h1_cyclic_oracle(sigma: Permutation) -> tuple[int, ...]:
    """Elementary divisors (> 1) of ker(norm)/im(sigma - 1) for the cyclic
    group generated by an incidence-preserving permutation of the 27 classes,
    acting on the rank-7 lattice; () means trivial cohomology."""
    graph = incidence_graph(DegreeContext(3))
    g = np.asarray(sigma)
    if not np.array_equal(graph.labels[np.ix_(g, g)], graph.labels):
        raise ValueError("permutation does not preserve the incidence labels")
    m = lattice_matrix(sigma).astype(object)
    order = math.lcm(*cycle_type(sigma))
    norm = np.zeros((7, 7), dtype=object)
    power = np.eye(7, dtype=object)
    for _ in range(order):
        norm += power
        power = power @ m
    kb = kernel_basis(norm)
    if kb.shape[1] == 0:
        return ()
    y = solve_integer(kb, m - np.eye(7, dtype=object))
    _, d, _ = smith_normal_form(y)
    k = kb.shape[1]
    divisors = [int(d[i, i]) for i in range(min(d.shape))]
    assert all(x != 0 for x in divisors[:k]), "cohomology of a finite action is finite"
    return tuple(sorted(x for x in divisors if x > 1))


def oracle_cross_validation(table: ClassTable | None = None) -> list[dict]:
    """Per class representative: the oracle's invariants, and whether the
    forced stabilizations (a stable double six for a 2-part, a componentwise
    stable triple nine for a 3-part) actually occur."""
    table = table or build_class_table()
    graph = incidence_graph(DegreeContext(3))
    ds_sets = [d.line_set for d in double_sixes(graph)]
    tn_parts = [t.as_sets for t in triple_nines(graph)]
    out = []
    for row in table.rows:
        invs = h1_cyclic_oracle(row.representative)
        h1_order = math.prod(invs) if invs else 1
        g = row.representative
        stabilizes_ds = any(all(g[x] in s for x in s) for s in ds_sets)
        stabilizes_tn = any(
            all(all(g[x] in part for x in part) for part in parts) for parts in tn_parts
        )
        out.append(
            {
                "class_id": row.class_id,
                "cycle_type": list(row.cycle_type),
                "h1_invariants": list(invs),
                "h1_order": h1_order,
                "order_only_2_3": _only_2_3(h1_order),
                "stabilizes_double_six": stabilizes_ds,
                "stabilizes_triple_nine_componentwise": stabilizes_tn,
                "two_part_implies_double_six": (h1_order % 2 != 0) or stabilizes_ds,
                "three_part_implies_triple_nine": (h1_order % 3 != 0) or stabilizes_tn,
            }
        )
    return out


def _only_2_3(n: int) -> bool:
    for p in (2, 3):
        while n % p == 0:
            n //= p
    return n == 1
