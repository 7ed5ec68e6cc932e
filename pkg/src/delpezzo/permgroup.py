"""Permutation groups via a base and strong generating set.

Permutations on 0..n-1 are plain tuples of images.  `compose(p, q)` applies
p first and q second.  The Schreier-Sims construction is the deterministic
incremental variant: generators are sifted down the stabilizer chain and the
residue is installed at the level where sifting fails, after which the new
Schreier generators of that level are processed.  Orders are exact Python
integers, so no overflow reasoning is ever needed.

Groups here act on at most 240 points with order at most |W(E8)| ~ 7e8,
well inside deterministic reach; full element enumeration is capped.
"""

from __future__ import annotations

import math
from collections import deque
from random import Random
from typing import Iterable, Iterator

Permutation = tuple[int, ...]
CycleType = tuple[int, ...]

DEFAULT_ENUMERATION_CAP = 10**7


class CapacityError(RuntimeError):
    """Raised when full enumeration would exceed the configured cap."""


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply p, then q."""
    return tuple(map(q.__getitem__, p))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def validate_permutation(p: Iterable[int], n: int) -> Permutation:
    p = tuple(p)
    if len(p) != n or sorted(p) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {p!r}")
    return p


def cycle_type(p: Permutation) -> CycleType:
    """Cycle lengths of p, sorted descending (fixed points included as 1s)."""
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        parts.append(length)
    parts.sort(reverse=True)
    return tuple(parts)


def fixed_points_of_power(ct: CycleType, m: int) -> int:
    """Number of fixed points of g^m given the cycle type of g."""
    return sum(c for c in ct if m % c == 0)


def order_of(p: Permutation) -> int:
    return math.lcm(*cycle_type(p))


class _Level:
    """One level of the stabilizer chain: a base point, the strong generators
    assigned here, and the transversal u_x with u_x[point] = x."""

    __slots__ = ("point", "gens", "transversal")

    def __init__(self, point: int):
        self.point = point
        self.gens: list[Permutation] = []
        self.transversal: dict[int, Permutation] = {point: None}  # None = identity

    def rep(self, x: int, n: int) -> Permutation:
        u = self.transversal[x]
        return identity(n) if u is None else u


class PermutationGroup:
    """Immutable permutation group with an exact stabilizer chain.

    Build with `PermutationGroup(n, generators)`; all queries (order,
    membership, orbits, stabilizers, enumeration, sampling) are pure.
    """

    def __init__(
        self,
        degree: int,
        generators: Iterable[Iterable[int]],
        base_prefix: Iterable[int] = (),
    ):
        self.degree = degree
        self.generators = [validate_permutation(g, degree) for g in generators]
        self._levels: list[_Level] = []
        for b in base_prefix:
            if not 0 <= b < degree:
                raise ValueError(f"base point {b} out of range")
            self._levels.append(_Level(b))
        self._id = identity(degree)
        for g in self.generators:
            self._add(g, 0)
        self.base = tuple(lvl.point for lvl in self._levels)
        self.order = math.prod(len(lvl.transversal) for lvl in self._levels)

    @property
    def strong_generators(self) -> list[Permutation]:
        """All strong generators, deepest level first (no duplicates)."""
        seen: dict[Permutation, None] = {}
        for lvl in reversed(self._levels):
            for g in lvl.gens:
                seen.setdefault(g)
        return list(seen)

    # -- construction ------------------------------------------------------

    def _sift(self, g: Permutation, start: int) -> tuple[Permutation, int]:
        """Strip g through levels >= start; returns (residue, failure level)."""
        for i in range(start, len(self._levels)):
            lvl = self._levels[i]
            x = g[lvl.point]
            if x == lvl.point:
                continue
            if x not in lvl.transversal:
                return g, i
            u = lvl.transversal[x]
            if u is not None:
                g = compose(g, inverse(u))
        return g, len(self._levels)

    def _add(self, g: Permutation, start: int) -> None:
        """Sift g (which fixes base[:start]) and, if it is not yet a member,
        install the residue as a strong generator at levels start..failure."""
        g, j = self._sift(g, start)
        if g == self._id:
            return
        if j == len(self._levels):
            b = next(x for x in range(self.degree) if g[x] != x)
            self._levels.append(_Level(b))
        for k in range(start, j + 1):
            self._levels[k].gens.append(g)
        for k in range(start, j + 1):
            self._grow_level(k, g)

    def _grow_level(self, j: int, new_gen: Permutation) -> None:
        """Extend orbit/transversal at level j after new_gen was installed and
        sift the resulting new Schreier generators one level down."""
        lvl = self._levels[j]
        n = self.degree
        pairs: deque[tuple[int, Permutation]] = deque()
        # new generator applied to the whole existing orbit
        old_orbit = sorted(lvl.transversal)
        for x in old_orbit:
            pairs.append((x, new_gen))
        frontier = deque()
        while pairs:
            x, s = pairs.popleft()
            y = s[x]
            u_x = lvl.rep(x, n)
            if y in lvl.transversal:
                # Schreier generator u_x s u_y^{-1} fixes the base point
                schreier = compose(compose(u_x, s), inverse(lvl.rep(y, n)))
                if schreier != self._id:
                    self._add(schreier, j + 1)
            else:
                lvl.transversal[y] = compose(u_x, s)
                for s2 in lvl.gens:
                    pairs.append((y, s2))

    # -- queries -----------------------------------------------------------

    def contains(self, p: Iterable[int]) -> bool:
        p = validate_permutation(p, self.degree)
        residue, _ = self._sift(p, 0)
        return residue == self._id

    def orbit(self, point: int) -> frozenset[int]:
        if not 0 <= point < self.degree:
            raise ValueError(f"point {point} out of range")
        seen = {point}
        queue = deque([point])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def is_transitive(self) -> bool:
        return self.degree > 0 and len(self.orbit(0)) == self.degree

    def stabilizer_of_point(self, point: int) -> "PermutationGroup":
        """The full stabilizer of `point`, with its own stabilizer chain."""
        if not 0 <= point < self.degree:
            raise ValueError(f"point {point} out of range")
        rebased = PermutationGroup(self.degree, self.generators, base_prefix=(point,))
        gens = [g for lvl in rebased._levels[1:] for g in lvl.gens]
        return PermutationGroup(self.degree, gens, base_prefix=rebased.base[1:])

    def elements(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Permutation]:
        """Every element exactly once, as products of transversal words along
        the base, in deterministic order."""
        if self.order > cap:
            raise CapacityError(
                f"group order {self.order} exceeds enumeration cap {cap}"
            )
        n = self.degree

        def walk(i: int, right: Permutation) -> Iterator[Permutation]:
            if i == len(self._levels):
                yield right
                return
            lvl = self._levels[i]
            for x in sorted(lvl.transversal):
                u = lvl.transversal[x]
                yield from walk(i + 1, right if u is None else compose(u, right))

        return walk(0, identity(n))

    def cycle_type_census(self, cap: int = DEFAULT_ENUMERATION_CAP) -> frozenset[CycleType]:
        """The exact set of cycle types occurring in the group."""
        return frozenset(cycle_type(g) for g in self.elements(cap))

    def uniform_random_element(self, rng: Random | int) -> Permutation:
        """Uniform over the group: independent uniform transversal picks."""
        if isinstance(rng, int):
            rng = Random(rng)
        g = identity(self.degree)
        for lvl in self._levels:
            keys = sorted(lvl.transversal)
            u = lvl.transversal[keys[rng.randrange(len(keys))]]
            if u is not None:
                g = compose(u, g)
        return g

    def conjugacy_classes(
        self, cap: int = DEFAULT_ENUMERATION_CAP
    ) -> list[tuple[Permutation, int]]:
        """(representative, class size) pairs from the orbit partition of the
        full element list under conjugation by the generators; representatives
        are the lexicographically least class members, classes sorted by
        representative."""
        todo = set(self.elements(cap))
        inv_gens = [(g, inverse(g)) for g in self.generators]
        classes: list[tuple[Permutation, int]] = []
        while todo:
            x = min(todo)
            block = {x}
            queue = deque([x])
            while queue:
                y = queue.popleft()
                for g, gi in inv_gens:
                    z = compose(compose(gi, y), g)
                    if z not in block:
                        block.add(z)
                        queue.append(z)
            todo -= block
            classes.append((min(block), len(block)))
        classes.sort(key=lambda c: c[0])
        return classes

    def __repr__(self) -> str:
        return f"PermutationGroup(degree={self.degree}, order={self.order})"
