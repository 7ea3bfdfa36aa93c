import pytest

from chevlat import relroots, rootsys
from chevlat.relroots import RelativeDatum, build_relative, fold, sigma_set
from chevlat.rootsys import RootSystemType, build_root_system


def sys_of(family, rank):
    return build_root_system(RootSystemType(family, rank))


def closed_group(rank, gens):
    out = {tuple(range(rank))} | set(gens)
    while True:
        new = {rootsys.perm_compose(a, b) for a in out for b in out}
        if new <= out:
            return tuple(sorted(out))
        out |= new


REV3 = (2, 1, 0)


def test_a2_single_node():
    rel = build_relative(RelativeDatum(sys_of("A", 2), frozenset({0}), ()))
    assert rel.rel_roots == {(1,), (-1,)}
    assert rel.fiber((1,)) == {(1, 0), (1, 1)}
    assert relroots.relative_simple_roots(rel) == {(1,)}


def test_a3_bc1():
    rel = build_relative(RelativeDatum(sys_of("A", 3), frozenset({0, 2}), (REV3,)))
    assert rel.rel_roots == {(1,), (2,), (-1,), (-2,)}
    assert rel.fiber((1,)) == {(1, 0, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1)}
    assert rel.fiber((2,)) == {(1, 1, 1)}
    assert relroots.relative_simple_roots(rel) == {(1,)}


def test_identity_projection():
    c2 = sys_of("C", 2)
    rel = build_relative(RelativeDatum(c2, frozenset({0, 1}), ()))
    assert rel.rel_roots == c2.roots
    assert all(len(rel.fiber(a)) == 1 for a in rel.rel_roots)
    assert relroots.relative_simple_roots(rel) == {(1, 0), (0, 1)}


def test_projection_is_linear_and_gamma_invariant():
    rel = build_relative(RelativeDatum(sys_of("A", 3), frozenset({0, 2}), (REV3,)))
    base = rel.datum.base
    for mu in base.roots:
        for nu in base.roots:
            s = tuple(x + y for x, y in zip(mu, nu))
            assert rel.project(s) == tuple(
                x + y for x, y in zip(rel.project(mu), rel.project(nu))
            )
        for p in rel.datum.gamma:
            assert rel.project(rootsys.perm_on_root(p, mu)) == rel.project(mu)


def test_fibers_partition_roots():
    rel = build_relative(RelativeDatum(sys_of("D", 4), frozenset({0, 2, 3}), ()))
    base = rel.datum.base
    covered = set()
    for a in rel.rel_roots:
        assert not (rel.fiber(a) & covered)
        covered |= rel.fiber(a)
    zero_fiber = {mu for mu in base.roots if not any(rel.project(mu))}
    assert covered | zero_fiber == base.roots


def test_j_not_invariant_rejected():
    with pytest.raises(ValueError):
        RelativeDatum(sys_of("A", 3), frozenset({0}), (REV3,))


def test_gamma_not_a_group_rejected():
    bad = (1, 0, 2)  # swaps the A3 ends? no: it swaps nodes 0,1, not a diagram symmetry
    with pytest.raises(ValueError):
        RelativeDatum(sys_of("A", 3), frozenset({0, 1, 2}), (bad,))


def test_fiber_additivity_bc1():
    rel = build_relative(RelativeDatum(sys_of("A", 3), frozenset({0, 2}), (REV3,)))
    assert relroots.check_fiber_additivity(rel, (1,), (1,))


def test_fiber_additivity_singleton_fibers():
    rel = build_relative(RelativeDatum(sys_of("A", 2), frozenset({0, 1}), ()))
    assert relroots.check_fiber_additivity(rel, (1, 0), (0, 1))


def test_fiber_additivity_vacuous_rank_one():
    rel = build_relative(RelativeDatum(sys_of("A", 2), frozenset({0}), ()))
    with pytest.raises(ValueError):
        relroots.check_fiber_additivity(rel, (1,), (1,))  # (2,) is not a root here


def test_adjacent_simple_c3():
    rel = build_relative(RelativeDatum(sys_of("C", 3), frozenset({0, 1}), ()))
    simples = relroots.relative_simple_roots(rel)
    for a in simples:
        for b in simples:
            if a != b and tuple(x + y for x, y in zip(a, b)) in rel.rel_roots:
                assert relroots.check_adjacent_simple(rel, a, b)


def test_adjacent_simple_a4_reversal_bc2():
    # folding A4 by the reversal gives BC2, where a+2b is a genuine case
    rev = (3, 2, 1, 0)
    rel = build_relative(RelativeDatum(sys_of("A", 4), frozenset({0, 1, 2, 3}), (rev,)))
    assert (0, 2) in rel.rel_roots and (1, 2) in rel.rel_roots  # 2b and a+2b
    simples = sorted(relroots.relative_simple_roots(rel))
    assert len(simples) == 2
    found = False
    for a in simples:
        for b in simples:
            if a != b and tuple(x + y for x, y in zip(a, b)) in rel.rel_roots:
                assert relroots.check_adjacent_simple(rel, a, b)
                found = True
    assert found


def test_adjacent_simple_vacuous_in_rank_one():
    rev = (3, 2, 1, 0)
    rel = build_relative(RelativeDatum(sys_of("A", 4), frozenset({0, 3}), (rev,)))
    assert relroots.relative_simple_roots(rel) == {(1,)}


def test_sigma_a2_by_hand():
    a2 = sys_of("A", 2)
    rel = build_relative(RelativeDatum(a2, frozenset({0, 1}), ()))
    # oracle: pairing of each of the six roots against alpha_1, by hand
    assert sigma_set(rel, (1, 0)) == {(1, 0), (1, 1), (0, -1)}
    assert sigma_set(rel, (0, 1)) == {(0, 1), (1, 1), (-1, 0)}


def test_sigma_bc1():
    rel = build_relative(RelativeDatum(sys_of("A", 3), frozenset({0, 2}), (REV3,)))
    assert sigma_set(rel, (1,)) == {(1,), (2,)}


def test_sigma_forms_agree_simply_laced():
    for datum in relroots.sweep_data(4):
        if not datum.base.is_simply_laced():
            continue
        rel = build_relative(datum)
        for b in relroots.relative_simple_roots(rel):
            assert sigma_set(rel, b, "all") == sigma_set(rel, b, "some")


def test_sigma_properties_hold_rank4():
    for datum in relroots.sweep_data(4):
        rel = build_relative(datum)
        for b in relroots.relative_simple_roots(rel):
            props = relroots.sigma_properties(rel, b)
            assert all(props.values()), (datum.base.rtype, sorted(datum.J), b, props)


def test_sigma_rejects_non_simple():
    rel = build_relative(RelativeDatum(sys_of("A", 2), frozenset({0, 1}), ()))
    with pytest.raises(ValueError):
        sigma_set(rel, (1, 1))


@pytest.mark.parametrize(
    "base,target,gen",
    [
        (("A", 3), ("C", 2), (2, 1, 0)),
        (("A", 5), ("C", 3), (4, 3, 2, 1, 0)),
        (("A", 7), ("C", 4), (6, 5, 4, 3, 2, 1, 0)),
        (("D", 4), ("G", 2), (2, 1, 3, 0)),
        (("D", 5), ("B", 4), (0, 1, 2, 4, 3)),
        (("D", 6), ("B", 5), (0, 1, 2, 3, 5, 4)),
        (("E", 6), ("F", 4), (5, 1, 4, 3, 2, 0)),
    ],
)
def test_foldings(base, target, gen):
    bsys = sys_of(*base)
    gamma = closed_group(bsys.rank, [gen])
    rel = fold(bsys, gamma)
    tsys = sys_of(*target)
    perm = relroots.match_coordinates(rel.rel_roots, tsys)
    assert perm is not None
    assert len(rel.rel_roots) == len(tsys.roots)


def test_fold_trivial_gamma_is_identity():
    a2 = sys_of("A", 2)
    rel = fold(a2, ())
    assert rel.rel_roots == a2.roots


def test_fold_rejects_multiply_laced():
    with pytest.raises(ValueError):
        fold(sys_of("C", 2), ())


def test_unfold_consistency():
    for family, rank in [("B", 2), ("B", 3), ("C", 2), ("C", 3), ("F", 4), ("G", 2)]:
        sys = sys_of(family, rank)
        cover, gamma, perm = relroots.unfold(sys)
        rel = fold(cover, gamma)
        mapped = {rootsys.perm_on_root(perm, v) for v in rel.rel_roots}
        assert mapped == sys.roots


def test_sweep_counts_zero_failures_rank4():
    totals = {}
    for datum in relroots.sweep_data(4):
        rel = build_relative(datum)
        for k, v in relroots.check_datum(rel).items():
            totals[k] = totals.get(k, 0) + v
    assert totals["adjacent_failed"] == 0
    assert totals["fiber_failed"] == 0
    assert totals["sigma_failed"] == 0
    assert totals["sigma_forms_failed"] == 0
    assert totals["gamma_invariance_failed"] == 0
    assert totals["fiber_checked"] > 1000
