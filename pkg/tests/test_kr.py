import dataclasses

import pytest

from graphlim import (CommaObject, GraphMap, LiftInstance, PreconditionError,
                      Rung, SquareTower, build_comma_prefix, compose,
                      constant_base, discrete_graph, enumerate_quotients,
                      extend_isomorphism, is_quotient, lift, new_graph,
                      verify_tower)


def _x(comma_build):
    return comma_build.sequence.levels[0]


def _g0(comma_build):
    return enumerate_quotients(comma_build.sequence.levels[2],
                               _x(comma_build))[0]


def _instance(comma_build, y, f_assign, b_assign):
    f = GraphMap(y, _x(comma_build), f_assign)
    b = CommaObject(comma_build.base, 0,
                    GraphMap(comma_build.base.levels[0], y, b_assign))
    return LiftInstance(f, 2, _g0(comma_build), b, comma_build)


def _check_equations(inst, res):
    seq = inst.eta.sequence
    u = seq.bond_composite(inst.g_level, res.level)
    assert compose(inst.f, res.map).assign == compose(inst.g, u).assign
    assert compose(res.map, inst.eta.psis[res.level]).assign == inst.b.psi.assign
    assert is_quotient(res.map)


def test_lift_nonadjacent_fiber_case(comma_build):
    inst = _instance(comma_build, discrete_graph(3), (0, 0, 1), (0, 0))
    res = lift(inst)
    assert res.level == 3
    assert res.cases == (1,)
    _check_equations(inst, res)
    level, mapping = res  # tuple-style access
    assert level == res.level and mapping is res.map


def test_lift_adjacent_fiber_case(comma_build):
    inst = _instance(comma_build, new_graph(3, [(0, 1)]), (0, 0, 1), (0, 0))
    res = lift(inst)
    assert res.level == 6
    assert res.cases == (2,)
    _check_equations(inst, res)
    # the merged pair is an edge of Y; the lift must witness it strictly,
    # which only an escaping cylinder deep enough can do
    assert (0, 1) in inst.f.dom.edge_set


def test_lift_isomorphism_fast_path(comma_build):
    x = _x(comma_build)
    g0 = _g0(comma_build)
    iso = GraphMap(x, x, (1, 0))
    b_assign = tuple(iso.assign.index(g0.assign[comma_build.psis[2].assign[k]])
                     for k in range(2))
    inst = LiftInstance(iso, 2, g0,
                        CommaObject(comma_build.base, 0,
                                    GraphMap(comma_build.base.levels[0], x,
                                             b_assign)),
                        comma_build)
    res = lift(inst)
    assert res.level == 2 and res.cases == ()
    _check_equations(inst, res)


def test_lift_general_quotient_stages_single_merges(comma_build):
    inst = _instance(comma_build, new_graph(4, [(0, 1)]), (0, 0, 1, 1), (0, 0))
    res = lift(inst)
    assert res.level == 7
    assert res.cases == (1, 2)
    _check_equations(inst, res)


def test_lift_sweeps_every_compatible_prescription(comma_build):
    y = new_graph(3, [(0, 1)])
    f = GraphMap(y, _x(comma_build), (0, 0, 1))
    g0 = _g0(comma_build)
    psi2 = comma_build.psis[2]
    want = tuple(g0.assign[psi2.assign[k]] for k in range(2))
    count = 0
    for b0 in range(y.n):
        for b1 in range(y.n):
            if (f.assign[b0], f.assign[b1]) != want:
                continue
            inst = LiftInstance(
                f, 2, g0,
                CommaObject(comma_build.base, 0,
                            GraphMap(comma_build.base.levels[0], y, (b0, b1))),
                comma_build)
            _check_equations(inst, lift(inst))
            count += 1
    # g0 sends both embedded classes into f's two-point fiber: 2 x 2 combos
    assert count == 4


def test_lift_instance_preconditions(comma_build, plain_build):
    x = _x(comma_build)
    y = discrete_graph(3)
    f = GraphMap(y, x, (0, 0, 1))
    g0 = _g0(comma_build)
    b = CommaObject(comma_build.base, 0,
                    GraphMap(comma_build.base.levels[0], y, (0, 0)))
    with pytest.raises(PreconditionError):
        LiftInstance(f, 2, g0, b, plain_build)  # not a comma build
    with pytest.raises(PreconditionError):
        LiftInstance(f, 3, g0, b, comma_build)  # g not on stated level
    bad_b = CommaObject(comma_build.base, 0,
                        GraphMap(comma_build.base.levels[0], y, (2, 2)))
    with pytest.raises(PreconditionError):
        LiftInstance(f, 2, g0, bad_b, comma_build)  # g != f∘b on the base
    deep_b = CommaObject(comma_build.base, 1,
                         GraphMap(comma_build.base.levels[1], y, (0, 0)))
    with pytest.raises(PreconditionError):
        LiftInstance(f, 2, g0, deep_b, comma_build)  # presented too deep
    not_quot = GraphMap(y, x, (0, 0, 0))
    with pytest.raises(PreconditionError):
        LiftInstance(not_quot, 2, g0, b, comma_build)


# -- towers ---------------------------------------------------------------

@pytest.fixture(scope="module")
def tower(comma_build):
    other = build_comma_prefix(constant_base(discrete_graph(2), 8))
    h = GraphMap(comma_build.base.levels[0], other.base.levels[0], (1, 0))
    return extend_isomorphism(comma_build, other, h)


def test_tower_frozen_shape(tower):
    assert tower.height == 3
    assert [(r.src_side, r.src_level, r.dst_level) for r in tower.rungs] == [
        ("right", 0, 0), ("left", 1, 0), ("right", 5, 1)]
    assert tower.rungs[0].map.assign == (1, 0)
    assert tower.rungs[1].map.assign == (1, 0, 1)
    assert tower.first_unmet is not None
    assert "rung 4" in tower.first_unmet


def test_tower_rungs_compose_to_bonds(tower):
    seqs = {"left": tower.left.sequence, "right": tower.right.sequence}
    prev = None
    for rung in tower.rungs:
        assert is_quotient(rung.map)
        if prev is not None:
            u = seqs[rung.src_side].bond_composite(prev.dst_level,
                                                   rung.src_level)
            assert compose(prev.map, rung.map).assign == u.assign
        prev = rung


def test_tower_rungs_extend_the_boundary(tower):
    from graphlim import inverse_of_isomorphism
    hinv = inverse_of_isomorphism(tower.boundary)
    for rung in tower.rungs:
        if rung.src_side == "right":
            src_psi = tower.right.psis[rung.src_level]
            dst_psi = tower.left.psis[rung.dst_level]
            bmap = hinv
        else:
            src_psi = tower.left.psis[rung.src_level]
            dst_psi = tower.right.psis[rung.dst_level]
            bmap = tower.boundary
        for k in range(2):
            assert (rung.map.assign[src_psi.assign[k]]
                    == dst_psi.assign[bmap.assign[k]])


def test_verify_tower_passes_and_audits_round_trip(tower):
    audit = verify_tower(tower)
    assert audit.passed
    assert audit.failures == ()
    assert audit.warnings == ()


def test_verify_tower_vacuous_on_empty(tower):
    empty = SquareTower(left=tower.left, right=tower.right,
                        boundary=tower.boundary, rungs=())
    audit = verify_tower(empty)
    assert audit.passed
    assert any("vacuous" in w for w in audit.warnings)


def _corrupt(tower, idx, **changes):
    rungs = list(tower.rungs)
    rungs[idx] = dataclasses.replace(rungs[idx], **changes)
    return dataclasses.replace(tower, rungs=tuple(rungs))


def test_verify_tower_flags_a_noncommuting_rung(tower):
    r3 = tower.rungs[2]
    psi = tower.right.psis[r3.src_level]
    bad = list(r3.map.assign)
    victim = next(w for w in range(len(bad)) if w not in psi.assign)
    bad[victim] = (bad[victim] + 1) % r3.map.cod.n
    audit = verify_tower(_corrupt(
        tower, 2, map=GraphMap(r3.map.dom, r3.map.cod, tuple(bad))))
    assert not audit.passed
    assert any("rung 3" in f for f in audit.failures)


def test_verify_tower_flags_a_broken_boundary(tower):
    r3 = tower.rungs[2]
    psi = tower.right.psis[r3.src_level]
    bad = list(r3.map.assign)
    bad[psi.assign[0]] = (bad[psi.assign[0]] + 1) % r3.map.cod.n
    audit = verify_tower(_corrupt(
        tower, 2, map=GraphMap(r3.map.dom, r3.map.cod, tuple(bad))))
    assert not audit.passed
    assert any("boundary" in f for f in audit.failures)


def test_verify_tower_never_raises_on_nonsense_levels(tower):
    audit = verify_tower(_corrupt(tower, 2, src_level=99))
    assert not audit.passed
    assert any("out of range" in f for f in audit.failures)


def test_extend_preconditions(comma_build, plain_build):
    base0 = comma_build.base.levels[0]
    h = GraphMap(base0, base0, (1, 0))
    with pytest.raises(PreconditionError):
        extend_isomorphism(plain_build, comma_build, h)
    not_iso = GraphMap(base0, base0, (0, 0))
    with pytest.raises(PreconditionError):
        extend_isomorphism(comma_build, comma_build, not_iso)
