from collections import Counter

import numpy as np
import pytest

from delpezzo.lattice import DegreeContext
from delpezzo.incidence import (
    apply_to_double_six,
    apply_to_triple_nine,
    automorphism_group,
    double_sixes,
    find_isomorphism,
    incidence_graph,
    orbit_of_structures,
    triple_nines,
    trihedral_nines,
    tritangent_triangles,
    weyl_image,
)

AUT_ORDERS = {2: 2903040, 3: 51840, 4: 1920, 5: 120, 6: 12, 7: 2}
WEYL_ORDERS = {1: 696729600, **AUT_ORDERS}


def graph(d):
    return incidence_graph(DegreeContext(d))


def test_degree7_graph_is_a_path():
    g = graph(7)
    assert g.n == 3
    # H-E1-E2 (vertex 2) is the middle vertex
    assert g.label(0, 2) == 1 and g.label(1, 2) == 1 and g.label(0, 1) == 0
    assert all(g.label(i, i) == -1 for i in range(3))


def test_degree5_graph_is_petersen_shaped():
    g = graph(5)
    degrees = {int((g.labels[i] == 1).sum()) for i in range(g.n)}
    assert g.n == 10
    assert degrees == {3}
    assert int((g.labels == 1).sum()) // 2 == 15


def test_degree3_each_line_meets_ten():
    g = graph(3)
    assert {int((g.labels[i] == 1).sum()) for i in range(27)} == {10}


@pytest.mark.parametrize("d", range(2, 8))
def test_automorphism_orders_match_weyl(d):
    assert automorphism_group(graph(d)).order == AUT_ORDERS[d]


@pytest.mark.parametrize("d", range(1, 8))
def test_weyl_image_orders(d):
    assert weyl_image(DegreeContext(d)).order == WEYL_ORDERS[d]


@pytest.mark.parametrize("d", range(1, 7))
def test_weyl_image_transitive_below_degree_seven(d):
    assert weyl_image(DegreeContext(d)).is_transitive()


def test_degree7_orbits_split():
    w = weyl_image(DegreeContext(7))
    assert not w.is_transitive()
    orbits = {frozenset(w.orbit(i)) for i in range(3)}
    assert {len(o) for o in orbits} == {1, 2}


@pytest.mark.parametrize("d", range(2, 8))
def test_weyl_generators_are_automorphisms(d):
    g = graph(d)
    aut = automorphism_group(g)
    for gen in weyl_image(DegreeContext(d)).generators:
        assert aut.contains(gen)


def test_graph_self_isomorphism_and_negative():
    g = graph(5)
    iso = find_isomorphism(g, g)
    assert iso is not None
    scrambled = g.labels.copy()
    scrambled[0, 1] = scrambled[1, 0] = 1 - scrambled[0, 1]
    assert find_isomorphism(scrambled, g.labels) is None


def test_find_isomorphism_on_relabeled_graph():
    rng = np.random.default_rng(11)
    g = graph(4)
    perm = rng.permutation(g.n)
    shuffled = g.labels[np.ix_(perm, perm)]
    iso = find_isomorphism(shuffled, g)
    assert iso is not None
    assert np.array_equal(g.labels[np.ix_(iso, iso)], shuffled)


def test_tritangent_triangles():
    tri = tritangent_triangles(graph(3))
    assert len(tri) == 45
    per_line = Counter(x for t in tri for x in t)
    assert set(per_line.values()) == {5}
    # members are pairwise meeting
    g = graph(3)
    for a, b, c in tri:
        assert g.label(a, b) == g.label(a, c) == g.label(b, c) == 1


def test_tritangent_rejects_disjoint_triples():
    g = graph(3)
    tri = set(tritangent_triangles(g))
    # any pairwise-disjoint triple is certainly not tritangent
    found = None
    for a in range(27):
        for b in range(a + 1, 27):
            if g.label(a, b) != 0:
                continue
            for c in range(b + 1, 27):
                if g.label(a, c) == 0 and g.label(b, c) == 0:
                    found = (a, b, c)
                    break
            if found:
                break
        if found:
            break
    assert found is not None and found not in tri


def test_double_sixes():
    g = graph(3)
    ds = double_sixes(g)
    assert len(ds) == 36
    for d in ds[:6]:
        rows = (d.first, d.second)
        for row in rows:
            for i in range(6):
                for j in range(i + 1, 6):
                    assert g.label(row[i], row[j]) == 0
        for i in range(6):
            for j in range(6):
                expected = 0 if i == j else 1
                assert g.label(d.first[i], d.second[j]) == expected


def test_trihedral_nines_and_triple_nines():
    g = graph(3)
    nines = trihedral_nines(g)
    assert len(nines) == 120
    tns = triple_nines(g)
    assert len(tns) == 40
    for tn in tns[:5]:
        all_lines = sorted(x for part in tn.parts for x in part)
        assert all_lines == list(range(27))
        for part in tn.parts:
            assert frozenset(part) in set(nines)


def test_aut_transitive_on_double_sixes_and_triple_nines():
    g = graph(3)
    w = weyl_image(DegreeContext(3))
    ds_orbits = orbit_of_structures(w, list(double_sixes(g)), apply_to_double_six)
    assert len(set(ds_orbits.values())) == 1
    tn_orbits = orbit_of_structures(w, list(triple_nines(g)), apply_to_triple_nine)
    assert len(set(tn_orbits.values())) == 1


def test_schlafli_enumerations_require_degree_three():
    with pytest.raises(ValueError):
        tritangent_triangles(graph(4))
    with pytest.raises(ValueError):
        double_sixes(graph(2))


def test_degree7_middle_vertex_stabilizer_is_everything():
    aut = automorphism_group(graph(7))
    assert aut.stabilizer_of_point(2).order == 2  # swapping the two end vertices


def test_enumeration_caps_on_the_biggest_groups():
    from itertools import islice

    from delpezzo.permgroup import CapacityError

    w8 = weyl_image(DegreeContext(1))
    with pytest.raises(CapacityError):
        list(w8.elements())  # 696729600 over the default cap
    w7 = weyl_image(DegreeContext(2))
    first = list(islice(w7.elements(), 1000))  # admitted by the default cap
    assert len(set(first)) == 1000
    assert all(w7.contains(g) for g in first[:10])
