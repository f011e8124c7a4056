import json
import threading

import pytest

from conftest import variables
from varsmooth.charts import Chart
from varsmooth.errors import ContractError
from varsmooth.driver import (Config, Observer, Verdict, projective_smoothness,
                              run_parallel, smoothness_test)
from varsmooth.fields import QQ, GF
from varsmooth.groebner import (Ideal, clear_caches, krull_dimension,
                                radical_membership)
from varsmooth.limits import Limits
from varsmooth.poly import Polynomial
from varsmooth.ring import Ring


def _r2():
    ring = Ring(QQ, ("x", "y"))
    return (ring,) + tuple(variables(ring))


def circle_ideal():
    ring, x, y = _r2()
    return Ideal(ring, [x * x + y * y - 1])


def cusp_ideal():
    ring, x, y = _r2()
    return Ideal(ring, [y * y - x * x * x])


def two_points_ideal():
    ring, x, y = _r2()
    one = Polynomial.constant(ring, 1)
    return Ideal(ring, [x * (y + one), y * (x + one)])


def x2_cone_ideal():
    ring = Ring(QQ, ("x1", "x2", "x3", "x4", "y1", "y2"))
    x1, x2, x3, x4, y1, y2 = variables(ring)
    return Ideal(ring, [x1 * x3 - y1 * y2, x2 * x4 - y1 * y2])


MODES = ("hironaka", "hybrid", "jacobian")


@pytest.mark.parametrize("mode", MODES)
def test_verdicts_all_modes(mode):
    assert smoothness_test(circle_ideal(), Config(mode=mode)).status == \
        "smooth"
    v = smoothness_test(cusp_ideal(), Config(mode=mode))
    assert v.status == "singular"
    assert v.witness is not None
    assert smoothness_test(two_points_ideal(),
                           Config(mode=mode)).status == "smooth"
    assert smoothness_test(x2_cone_ideal(),
                           Config(mode=mode)).status == "singular"


def test_config_validation():
    with pytest.raises(ContractError):
        Config(mode="newton")
    with pytest.raises(ContractError):
        Config(descent_depth=-1)
    with pytest.raises(ContractError):
        Config(to_codim=-2)
    with pytest.raises(ContractError):
        Config(jobs=0)


def test_trivial_ideals():
    ring, x, y = _r2()
    assert smoothness_test(Ideal(ring, []), Config()).status == "smooth"
    two = Polynomial.constant(ring, 2)
    assert smoothness_test(Ideal(ring, [two]), Config()).status == "smooth"


def test_disjoint_point_and_line_smooth():
    # reducible but smooth: the line x = 0 plus the isolated point (1, 0)
    ring, x, y = _r2()
    ideal = Ideal(ring, [x * (x - 1), x * y])
    for mode in MODES:
        assert smoothness_test(ideal, Config(mode=mode)).status == "smooth"


@pytest.mark.parametrize("jobs", [2, 8])
def test_determinism_across_jobs_and_schedules(jobs):
    for ideal, expected in ((cusp_ideal(), "singular"),
                            (two_points_ideal(), "smooth")):
        base = smoothness_test(ideal, Config(mode="hironaka", jobs=1,
                                             combinations=False))
        alt = smoothness_test(ideal, Config(mode="hironaka", jobs=jobs,
                                            combinations=False),
                              _schedule_seed=jobs * 17)
        assert base.status == expected
        assert alt.status == base.status
        assert alt.witness == base.witness
        assert alt.stats == base.stats
        r1 = json.dumps(base.as_report(), sort_keys=True)
        r2 = json.dumps(alt.as_report(), sort_keys=True)
        assert r1 == r2


def test_projective_determinism_and_witness():
    ring = Ring(QQ, ("X", "Y", "Z"))
    X, Y, Z = variables(ring)
    nodal = Ideal(ring, [Y * Y * Z - X * X * (X + Z)])
    base = projective_smoothness(nodal, Config(mode="hironaka", jobs=1))
    assert base.status == "singular"
    for jobs, seed in ((2, 5), (8, 23)):
        v = projective_smoothness(nodal, Config(mode="hironaka", jobs=jobs),
                                  _schedule_seed=seed)
        assert v.witness == base.witness
        assert v.stats == base.stats


def test_no_engine_starts_after_commit():
    clear_caches()

    class Probe(Observer):
        def __init__(self):
            self.events = []
            self.lock = threading.Lock()

        def on_gb_start(self, path):
            with self.lock:
                self.events.append("gb")

        def on_commit(self, path):
            with self.lock:
                self.events.append("commit")

    probe = Probe()
    v = smoothness_test(cusp_ideal(), Config(mode="hironaka", jobs=4),
                        observer=probe, _schedule_seed=11)
    assert v.status == "singular"
    assert probe.events.count("commit") == 1
    tail = probe.events[probe.events.index("commit") + 1:]
    assert "gb" not in tail, tail


def test_hybrid_all_depths_agree():
    for ideal, expected in ((circle_ideal(), "smooth"),
                            (cusp_ideal(), "singular"),
                            (two_points_ideal(), "smooth"),
                            (x2_cone_ideal(), "singular")):
        codim = ideal.ring.nvars - krull_dimension(ideal)
        for depth in range(codim + 1):
            v = smoothness_test(ideal, Config(mode="hybrid",
                                              descent_depth=depth))
            assert v.status == expected, (depth, v.status)


def test_to_codim_equivalent_to_depth():
    ideal = two_points_ideal()
    codim = 2
    for c in range(codim + 1):
        a = smoothness_test(ideal, Config(mode="hybrid", to_codim=c))
        b = smoothness_test(ideal, Config(mode="hybrid",
                                          descent_depth=codim - c))
        assert a.status == b.status == "smooth"
        assert a.stats == b.stats


def test_max_depth_bounded_by_codimension():
    for ideal in (circle_ideal(), two_points_ideal(), x2_cone_ideal()):
        codim = ideal.ring.nvars - krull_dimension(ideal)
        v = smoothness_test(ideal, Config(mode="hironaka",
                                          combinations=False))
        assert v.stats["max_depth"] <= codim


def test_indeterminate_on_tiny_limits():
    clear_caches()
    v = smoothness_test(x2_cone_ideal(),
                        Config(mode="jacobian", limits=Limits(max_basis=2)))
    assert v.status == "indeterminate"
    assert "limit" in v.reason
    clear_caches()
    w = smoothness_test(x2_cone_ideal(),
                        Config(mode="hironaka", limits=Limits(time_s=0.0)))
    assert w.status == "indeterminate"


def test_witness_contents():
    v = smoothness_test(cusp_ideal(), Config(mode="hironaka"))
    w = v.witness
    assert w.kind == "delta"
    assert w.depth == 0
    assert w.path == (0,)
    d = w.as_dict()
    assert d["kind"] == "delta"
    assert isinstance(d["ambient"], str) and isinstance(d["variety"], str)
    vj = smoothness_test(cusp_ideal(), Config(mode="jacobian"))
    assert vj.witness.kind == "criterion"
    vh = smoothness_test(cusp_ideal(), Config(mode="hybrid",
                                              descent_depth=0))
    assert vh.witness.kind in ("delta", "jacobian")


def test_report_shape():
    v = smoothness_test(circle_ideal(), Config())
    rep = v.as_report()
    assert set(rep) == {"status", "mode", "witness", "stats", "reason"}
    assert rep["status"] == "smooth" and rep["witness"] is None
    rep_t = v.as_report(include_timing=True)
    assert "timing" in rep_t
    assert rep_t["timing"]["sim_parallel_s"] <= \
        rep_t["timing"]["sequential_s"] + 1e-9
    assert isinstance(Verdict.__slots__ if hasattr(Verdict, "__slots__")
                      else rep, (tuple, dict))


def test_observer_cover_reports_verifiable_covers():
    from varsmooth.groebner import Ideal as Id

    class Covers(Observer):
        def __init__(self):
            self.rows = []
            self.lock = threading.Lock()

        def on_cover(self, path, chart, enum):
            with self.lock:
                self.rows.append((chart, enum))

    probe = Covers()
    v = smoothness_test(two_points_ideal(),
                        Config(mode="hironaka", combinations=False),
                        observer=probe)
    assert v.status == "smooth"
    assert probe.rows
    for chart, enum in probe.rows:
        assert enum.cover_complete
        total = Id(chart.ring, list(chart.ambient.generators)
                   + list(enum.determinants))
        assert radical_membership(chart.localizer, total)


def test_run_parallel_multiple_roots():
    c1 = Chart.root(circle_ideal())
    c2 = Chart.root(cusp_ideal())
    v = run_parallel([c1, c2], Config(mode="hironaka"))
    assert v.status == "singular"
    assert v.witness.path[0] == 1  # second root hosts the failure
    v2 = run_parallel([c1], Config(mode="hironaka"))
    assert v2.status == "smooth"


def test_projective_requires_two_variables():
    r1 = Ring(QQ, ("x",))
    with pytest.raises(ContractError):
        projective_smoothness(Ideal(r1, [Polynomial.variable(r1, 0)]),
                              Config())


def test_projective_smooth_curves():
    r4 = Ring(QQ, ("a", "b", "c", "d"))
    a, b, c, d = variables(r4)
    tw = Ideal(r4, [a * c - b * b, b * d - c * c, a * d - b * c])
    for mode in ("hironaka", "jacobian"):
        assert projective_smoothness(tw, Config(mode=mode)).status == \
            "smooth"
    r3 = Ring(QQ, ("X", "Y", "Z"))
    X, Y, Z = variables(r3)
    conic = Ideal(r3, [X * X + Y * Y - Z * Z])
    assert projective_smoothness(conic, Config()).status == "smooth"


def test_finite_field_variety():
    ring = Ring(GF(32003), ("x", "y"))
    x, y = variables(ring)
    cusp = Ideal(ring, [y * y - x * x * x])
    circ = Ideal(ring, [x * x + y * y - 1])
    for mode in MODES:
        assert smoothness_test(cusp, Config(mode=mode)).status == "singular"
        assert smoothness_test(circ, Config(mode=mode)).status == "smooth"


def test_seed_changes_combination_draws_not_verdict():
    ideal = two_points_ideal()
    verdicts = set()
    for seed in range(4):
        v = smoothness_test(ideal, Config(mode="hironaka", seed=seed))
        verdicts.add(v.status)
    assert verdicts == {"smooth"}
