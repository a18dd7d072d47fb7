"""Spatial systems, their operators, and the decomposition detector."""

import numpy as np
import pytest

import lpcuntz as lp
from lpcuntz.measure import rn_derivative
from lpcuntz.sampling import (
    random_composable_pair,
    random_semispatial_system,
    random_spatial_system,
)
from lpcuntz.spatial import (
    Rejection,
    indicator_operator,
    matrix_from_json,
    matrix_to_json,
    system_from_json,
    system_to_json,
)


def phase_example():
    dom = lp.FiniteMeasureSpace(["x"], [1.0])
    cod = lp.FiniteMeasureSpace(["y1", "y2"], [1.0, 1.0])
    S = lp.SetTransformation(dom, cod, {"x": {"y1", "y2"}})
    return lp.SpatialSystem(dom, cod, ["x"], ["y1", "y2"], S, {"y1": 1.0, "y2": -1.0})


def test_system_validation():
    dom = lp.FiniteMeasureSpace(["x"], [1.0])
    cod = lp.FiniteMeasureSpace(["y"], [1.0])
    S = lp.SetTransformation(dom, cod, {"x": {"y"}})
    with pytest.raises(ValueError):  # phase off the unit circle
        lp.SpatialSystem(dom, cod, ["x"], ["y"], S, {"y": 2.0})
    with pytest.raises(ValueError):  # phase on the wrong atoms
        lp.SpatialSystem(dom, cod, ["x"], ["y"], S, {"z": 1.0})


def test_materialize_examples():
    sys = phase_example()
    assert not sys.spatial
    for p in (1.0, 1.5, 2.0, 3.0):
        A = lp.materialize(sys, p)
        expected = 2.0 ** (-1.0 / p)
        assert np.allclose(A.entries[:, 0], [expected, -expected])
    space = lp.FiniteMeasureSpace(["a", "b"], [1.0, 1.0])
    ident = lp.identity_system(space)
    assert np.allclose(lp.materialize(ident, 1.7).entries, np.eye(2))
    # singleton block with weights 1 -> 4 gives the ratio (1/4)^(1/p)
    dom = lp.FiniteMeasureSpace(["x"], [1.0])
    cod = lp.FiniteMeasureSpace(["y"], [4.0])
    S = lp.SetTransformation(dom, cod, {"x": {"y"}})
    sys2 = lp.SpatialSystem(dom, cod, ["x"], ["y"], S, {"y": 1j})
    A = lp.materialize(sys2, 3.0)
    assert A.entries[0, 0] == pytest.approx(1j * 0.25 ** (1 / 3.0))


def test_materialized_isometry_on_domain():
    rng = np.random.default_rng(0)
    for _ in range(25):
        sys = random_semispatial_system(rng)
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        A = lp.materialize(sys, p)
        E_idx = [sys.domain.index(x) for x in sys.E]
        for _ in range(8):
            xi = np.zeros(len(sys.domain), dtype=complex)
            vals = rng.standard_normal(len(E_idx)) + 1j * rng.standard_normal(len(E_idx))
            xi[E_idx] = vals
            assert lp.vector_norm(sys.codomain, A.apply(xi), p) == pytest.approx(
                lp.vector_norm(sys.domain, xi, p), abs=1e-10
            )
        est = lp.power_estimate(A, restarts=6, seed=3).estimate
        assert est <= 1.0 + 1e-8


def test_range_support():
    rng = np.random.default_rng(1)
    for _ in range(20):
        sys = random_spatial_system(rng)
        A = lp.materialize(sys, 1.5)
        rows = np.nonzero(np.abs(A.entries).max(axis=1) > 1e-14)[0]
        assert {sys.codomain.atoms[r] for r in rows} == set(sys.F)


def test_reverse_laws():
    rng = np.random.default_rng(2)
    for _ in range(30):
        sys = random_spatial_system(rng)
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        s = lp.materialize(sys, p)
        t = lp.materialize(lp.reverse(sys), p)
        me = indicator_operator(sys.domain, sys.E, p).entries
        mf = indicator_operator(sys.codomain, sys.F, p).entries
        assert np.abs(t.entries @ s.entries - me).max() < 1e-12
        assert np.abs(s.entries @ t.entries - mf).max() < 1e-12
        # involution
        back = lp.reverse(lp.reverse(sys))
        assert back == sys


def test_reverse_requires_spatial():
    with pytest.raises(ValueError):
        lp.reverse(phase_example())


def test_reverse_is_adjoint_at_p2():
    rng = np.random.default_rng(3)
    for _ in range(10):
        sys = random_spatial_system(rng)
        s = lp.materialize(sys, 2.0)
        t = lp.materialize(lp.reverse(sys), 2.0)
        # adjoint with respect to the weighted inner products
        adj = (
            np.diag(1.0 / sys.domain.weights)
            @ s.entries.conj().T
            @ np.diag(sys.codomain.weights)
        )
        assert np.abs(t.entries - adj).max() < 1e-12


def test_compose_systems():
    rng = np.random.default_rng(4)
    for _ in range(40):
        v, s = random_composable_pair(rng)
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        vs = lp.compose_systems(v, s)
        lhs = lp.materialize(vs, p).entries
        rhs = lp.materialize(v, p).entries @ lp.materialize(s, p).entries
        assert np.abs(lhs - rhs).max() < 1e-12
        # reverse of the composite
        rev = lp.compose_systems(lp.reverse(s), lp.reverse(v))
        assert np.abs(
            lp.materialize(rev, p).entries
            - lp.materialize(lp.reverse(vs), p).entries
        ).max() < 1e-12


def test_compose_identity():
    rng = np.random.default_rng(5)
    sys = random_spatial_system(rng)
    ident = lp.identity_system(sys.codomain)
    assert lp.compose_systems(ident, sys) == sys


def test_tensor_systems():
    rng = np.random.default_rng(6)
    for _ in range(25):
        s = random_spatial_system(rng, max_atoms=4)
        v = random_spatial_system(rng, max_atoms=4)
        p = float(rng.choice([1.0, 1.5, 3.0]))
        tens = lp.tensor_systems(s, v)
        lhs = lp.materialize(tens, p).entries
        rhs = np.kron(lp.materialize(s, p).entries, lp.materialize(v, p).entries)
        assert np.abs(lhs - rhs).max() < 1e-12
    # tensoring with a one-point identity relabels
    s = random_spatial_system(rng)
    point = lp.FiniteMeasureSpace(["pt"], [1.0])
    tens = lp.tensor_systems(s, lp.identity_system(point))
    assert np.abs(
        lp.materialize(tens, 2.0).entries - lp.materialize(s, 2.0).entries
    ).max() < 1e-14


def test_dual_systems():
    rng = np.random.default_rng(7)
    for _ in range(30):
        sys = random_spatial_system(rng)
        p = float(rng.choice([1.5, 2.0, 3.0]))
        dsys, q = lp.dual(sys, p)
        assert q == pytest.approx(p / (p - 1.0))
        D = lp.materialize(dsys, q).entries
        adj = lp.pairing_adjoint(lp.materialize(sys, p)).entries
        assert np.abs(D - adj).max() < 1e-12
        # pairing identity on random vectors
        A = lp.materialize(sys, p)
        for _ in range(5):
            xi = rng.standard_normal(len(sys.domain)) + 1j * rng.standard_normal(len(sys.domain))
            eta = rng.standard_normal(len(sys.codomain)) + 1j * rng.standard_normal(len(sys.codomain))
            lhs = np.sum(sys.codomain.weights * A.apply(xi) * eta)
            rhs = np.sum(sys.domain.weights * xi * (D @ eta))
            assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))
    with pytest.raises(ValueError):
        lp.dual(random_spatial_system(rng), 1.0)


def test_dual_p2_real_phase_is_reverse():
    rng = np.random.default_rng(8)
    sys = random_spatial_system(rng)
    real_g = {y: 1.0 for y in sys.F}
    sys = lp.SpatialSystem(sys.domain, sys.codomain, sys.E, sys.F, sys.transform, real_g)
    dsys, q = lp.dual(sys, 2.0)
    assert q == 2.0
    assert np.abs(
        lp.materialize(dsys, 2.0).entries
        - lp.materialize(lp.reverse(sys), 2.0).entries
    ).max() < 1e-14


# -- detector -----------------------------------------------------------------


def test_detect_round_trip():
    rng = np.random.default_rng(9)
    for i in range(120):
        sys = (
            random_spatial_system(rng, max_atoms=8)
            if i % 2
            else random_semispatial_system(rng, max_atoms=8)
        )
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        A = lp.materialize(sys, p)
        res = lp.detect(A)
        assert res.accepted
        assert set(res.system.E) == set(sys.E)
        assert set(res.system.F) == set(sys.F)
        assert all(res.system.block(x) == sys.block(x) for x in sys.E)
        assert res.spatial == sys.spatial
        h = rn_derivative(sys.transform)
        for y in sys.F:
            assert abs(res.system.g[y] - sys.g[y]) < 1e-10
            assert abs(res.h[y] - h(y).real) < 1e-10


def test_detect_rejections():
    sq = lp.FiniteMeasureSpace(["a", "b"], [1.0, 1.0])
    c = 2.0 ** -0.5
    rot = lp.OperatorMatrix(sq, sq, 3.0, np.array([[c, -c], [c, c]]))
    res = lp.detect(rot)
    assert isinstance(res, Rejection)
    assert res.reason == "overlapping column supports"
    # block-constancy violation: disjoint supports but wrong moduli
    bad = lp.OperatorMatrix(sq, sq, 3.0, np.diag([1.0, 0.5]))
    res = lp.detect(bad)
    assert isinstance(res, Rejection) and res.reason == "block-constancy failure"
    assert "row" in res.witness
    # an isometry with non-constant column moduli is not semispatial
    dom = lp.FiniteMeasureSpace(["x"], [1.0])
    cod = lp.FiniteMeasureSpace(["y1", "y2"], [1.0, 1.0])
    t = 0.3
    col = np.array([[t ** (1 / 3.0)], [(1 - t) ** (1 / 3.0)]])
    iso = lp.OperatorMatrix(dom, cod, 3.0, col)
    assert isinstance(lp.detect(iso), Rejection)


def test_detect_phase_example():
    sys = phase_example()
    res = lp.detect(lp.materialize(sys, 3.0))
    assert res.accepted and not res.spatial


def test_detect_zero_columns_define_E():
    dom = lp.FiniteMeasureSpace(["x1", "x2"], [1.0, 1.0])
    cod = lp.FiniteMeasureSpace(["y"], [1.0])
    A = lp.OperatorMatrix(dom, cod, 1.5, np.array([[1.0, 0.0]]))
    res = lp.detect(A)
    assert res.accepted and res.system.E == ("x1",) and res.system.F == ("y",)


def test_classify_idempotent():
    space = lp.FiniteMeasureSpace(["a", "b", "c"], [1.0, 2.0, 3.0])
    ident = lp.OperatorMatrix(space, space, 2.0, np.eye(3))
    assert lp.classify_idempotent(ident) == ("a", "b", "c")
    zero = lp.OperatorMatrix(space, space, 2.0, np.zeros((3, 3)))
    assert lp.classify_idempotent(zero) == ()
    diag = lp.OperatorMatrix(space, space, 2.0, np.diag([1.0, 0.0, 1.0]))
    assert lp.classify_idempotent(diag) == ("a", "c")
    off = lp.OperatorMatrix(space, space, 2.0, np.array([[1, 0.5, 0], [0, 0, 0], [0, 0, 1]]))
    res = lp.classify_idempotent(off)
    assert isinstance(res, Rejection) and res.reason == "off-diagonal entry"
    half = lp.OperatorMatrix(space, space, 2.0, np.diag([0.5, 0, 0]))
    assert isinstance(lp.classify_idempotent(half), Rejection)


def test_homotopy_rigidity_witness():
    # two bijective spatial isometries with distinct transformations are
    # at distance >= 2^(1/p), certified by a normalized indicator
    rng = np.random.default_rng(10)
    hits = 0
    for _ in range(40):
        n = int(rng.integers(2, 6))
        dom = lp.FiniteMeasureSpace([f"x{i}" for i in range(n)], rng.uniform(0.5, 2, n))
        cod = lp.FiniteMeasureSpace([f"y{i}" for i in range(n)], rng.uniform(0.5, 2, n))
        perms = []
        for _ in range(2):
            perm = rng.permutation(n)
            S = lp.SetTransformation(
                dom, cod, {dom.atoms[i]: {cod.atoms[perm[i]]} for i in range(n)}
            )
            sys = lp.SpatialSystem(
                dom, cod, dom.atoms, cod.atoms, S,
                {y: 1.0 for y in cod.atoms},
            )
            perms.append((perm, sys))
        (p0, sys0), (p1, sys1) = perms
        diff = [i for i in range(n) if p0[i] != p1[i]]
        if not diff:
            continue
        hits += 1
        p = float(rng.choice([1.0, 1.5, 3.0]))
        x = diff[0]
        xi = np.zeros(n)
        xi[x] = dom.weights[x] ** (-1.0 / p)
        v0 = lp.materialize(sys0, p).apply(xi)
        v1 = lp.materialize(sys1, p).apply(xi)
        gap = lp.vector_norm(cod, v0 - v1, p)
        assert gap == pytest.approx(2.0 ** (1.0 / p), abs=1e-10)
        assert gap >= 1.0
    assert hits > 10


def test_detect_round_trip_exhaustive_small():
    # every combinatorial shape of a spatial system on <= 4 atoms
    import itertools

    dom = lp.FiniteMeasureSpace(["x0", "x1", "x2", "x3"], [1.0, 0.5, 2.0, 1.25])
    cod = lp.FiniteMeasureSpace(["y0", "y1", "y2", "y3"], [0.75, 1.0, 1.5, 2.0])
    phases = [1.0, -1.0, 1j]
    count = 0
    for k in range(1, 5):
        for E in itertools.combinations(dom.atoms, k):
            for F in itertools.combinations(cod.atoms, k):
                for perm in itertools.permutations(range(k)):
                    blocks = {E[i]: {F[perm[i]]} for i in range(k)}
                    S = lp.SetTransformation(
                        dom.subspace(E), cod.subspace(F), blocks
                    )
                    g = {F[i]: phases[i % 3] for i in range(k)}
                    sys = lp.SpatialSystem(dom, cod, E, F, S, g)
                    p = (1.0, 1.5, 3.0)[count % 3]
                    res = lp.detect(lp.materialize(sys, p))
                    assert res.accepted and res.spatial
                    assert res.system == sys
                    count += 1
    # sum over k of C(4,k)^2 * k! = 16 + 72 + 96 + 24
    assert count == 208


def test_dual_identity_is_identity():
    space = lp.FiniteMeasureSpace(["a", "b"], [1.0, 3.0])
    dsys, q = lp.dual(lp.identity_system(space), 3.0)
    assert np.abs(lp.materialize(dsys, q).entries - np.eye(2)).max() == 0


def test_json_round_trips():
    rng = np.random.default_rng(11)
    sys = random_semispatial_system(rng)
    data = system_to_json(sys)
    back = system_from_json(data)
    assert system_to_json(back) == data
    A = lp.materialize(sys, 1.5)
    mdata = matrix_to_json(A, p_text="1.5")
    B = matrix_from_json(mdata)
    assert matrix_to_json(B, p_text="1.5") == mdata
    assert np.abs(A.entries - B.entries).max() == 0.0
