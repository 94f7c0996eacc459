"""Exit criteria. Each test records one PASS/FAIL line, printed after the run."""

import json
import math
import time

import numpy as np
import pytest

from monogamy_qkd.adversary import (
    EveStrategy,
    bound_gaps,
    build_counterexample,
    concavity_bound_check,
    minimize_conditional_entropy,
    search_binary_counterexamples,
    verify_concavity_bound,
)
from monogamy_qkd.cli import run_cli
from monogamy_qkd.figures import figure_svg, sample_figure, svg_marker_x
from monogamy_qkd.monogamy import MonogamyModel, eve_guess_from_beta
from monogamy_qkd.security import check_condition, critical_beta, tsirelson


@pytest.fixture
def record(request):
    lines = request.config._acceptance_lines

    def _record(label, ok, detail):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return _record


def _critical_via_cli(capsys, theory):
    start = time.perf_counter()
    code = run_cli(["critical", "--theory", theory, "--json"])
    elapsed = time.perf_counter() - start
    return code, json.loads(capsys.readouterr().out), elapsed


def test_criterion_1_quantum_critical_value(capsys, record):
    code, doc, elapsed = _critical_via_cli(capsys, "qm")
    ok = code == 0 and doc["status"] == "root" and abs(doc["beta_star"] - 0.841) <= 2e-3 and elapsed < 1.0
    assert record("1 quantum critical value", ok, f"beta*={doc['beta_star']:.6f} (|d|<=2e-3 vs 0.841), {elapsed:.3f}s")


def test_criterion_2_nosignalling_critical_value(capsys, record):
    code, doc, elapsed = _critical_via_cli(capsys, "ns")
    ok = code == 0 and doc["status"] == "root" and abs(doc["beta_star"] - 0.881) <= 2e-3 and elapsed < 1.0
    assert record("2 no-signalling critical value", ok, f"beta*={doc['beta_star']:.6f} (|d|<=2e-3 vs 0.881), {elapsed:.3f}s")


def test_criterion_3_ordering(record):
    qm = critical_beta(MonogamyModel.quantum()).beta_star
    ns = critical_beta(MonogamyModel.nosignalling()).beta_star
    t = tsirelson()
    ok = qm < t < ns and round(t, 3) == 0.854 and t == (2 + math.sqrt(2)) / 4
    assert record("3 ordering", ok, f"{qm:.6f} < {t:.6f} (~{round(t, 3)}) < {ns:.6f}")


def test_criterion_4_nosignalling_attainability(record):
    r = check_condition(1.0, MonogamyModel.nosignalling())
    ok = r.secure and r.lhs_bits == 0.0 and abs(r.rhs_bits - 1.0) <= 1e-15
    assert record("4 NS attainability at beta=1", ok, f"lhs={r.lhs_bits}, rhs={r.rhs_bits}, secure={r.secure}")


def test_criterion_5_concavity_bound_suite(record):
    start = time.perf_counter()
    summary = verify_concavity_bound(100_000, 8)

    rng = np.random.default_rng(summary.seed + 1)
    tight_flags_ok = True
    for k in range(1, 9):
        w = rng.dirichlet(np.ones(k), size=1000)
        two_point = rng.choice([0.0, 0.5, 1.0], size=(1000, k))
        generic = rng.random((1000, k))
        tight_flags_ok &= bool(np.all(np.abs(bound_gaps(w, two_point)) <= 1e-9))
        tight_flags_ok &= bool(np.all(np.abs(bound_gaps(w, generic)) > 1e-9))
    # scalar path agrees on a handful of each
    tight_flags_ok &= concavity_bound_check(EveStrategy((0.3, 0.7), (0.5, 0.0))).tight
    tight_flags_ok &= not concavity_bound_check(EveStrategy((0.3, 0.7), (0.6, 0.0))).tight
    elapsed = time.perf_counter() - start

    ok = summary.violations == 0 and summary.samples == 100_000 and tight_flags_ok and elapsed < 10.0
    assert record(
        "5 concavity bound suite",
        ok,
        f"{summary.samples} strategies (k=1..{summary.max_alphabet}, seed {summary.seed}), "
        f"violations={summary.violations}, min gap={summary.min_gap:.3e}, equality detection ok={tight_flags_ok}, {elapsed:.2f}s",
    )


def test_criterion_6_oracle_equivalence(record):
    start = time.perf_counter()
    worst, support_ok = 0.0, True
    resolution = 1.0 / (2 * 200)
    for pe in (0.6, 0.775, 0.9):
        for k in (2, 3, 4):
            res = minimize_conditional_entropy(pe, k, 200)
            worst = max(worst, abs(res.min_value - 2 * (1 - pe)))
            for w, g in zip(res.argmin.weights, res.argmin.guess_conditionals):
                if w > 0:
                    support_ok &= min(abs(g - 0.5), abs(g - 1.0)) <= resolution
    elapsed = time.perf_counter() - start
    ok = worst <= 0.02 and support_ok and elapsed < 60.0
    assert record("6 oracle equivalence", ok, f"max |min - 2(1-pe)|={worst:.2e} (<=0.02), support ok={support_ok}, {elapsed:.1f}s")


def test_criterion_7_counterexample_family(record):
    margins = []
    for pb in (0.55, 0.65, 0.75, 0.85, 0.95, 0.99):
        ce = build_counterexample(pb)
        margins.append(min(ce.p_b - ce.p_e, ce.i_ae - ce.i_ab))
    ok = min(margins) > 0
    assert record("7a counterexample family (non-binary Eve)", ok, f"smallest strict margin {min(margins):.3e}")


def test_criterion_7_binary_alphabet_has_no_counterexample(record):
    res = search_binary_counterexamples(100)
    detail = f"{res.strategies_checked} binary strategies x {res.p_b_values} p_b values, counterexamples={res.count}"
    if res.examples:
        ex = res.examples[0]
        detail += (
            f"; e.g. weights={tuple(round(x, 3) for x in ex.strategy.weights)}, "
            f"conditionals={tuple(round(x, 3) for x in ex.strategy.conditionals)}, p_b={ex.p_b:.3f}: "
            f"P_E={ex.p_e:.4f}, I(A:E)={ex.i_ae:.4f} > I(A:B)={ex.i_ab:.4f}"
        )
    uniform = search_binary_counterexamples(100, uniform_alice=True)
    detail += f"; with uniform Alice marginal only: {uniform.count} of {uniform.strategies_checked}"
    assert record("7b binary-alphabet Eve: no counterexample", res.count == 0, detail)


def test_criterion_8_substitution_identity(record):
    worst, checked = 0.0, 0
    for model in (MonogamyModel.quantum(), MonogamyModel.nosignalling()):
        for b in np.linspace(0.5, model.domain_upper, 10_000):
            f = model.evaluate(b)
            if not 0.5 <= f <= 0.75:
                continue
            worst = max(worst, abs(2 * (1 - eve_guess_from_beta(f)) - (3 - 4 * f)))
            checked += 1
    assert record("8 pointwise <=> monogamy condition", worst <= 1e-12, f"{checked} grid points, max deviation {worst:.1e}")


def test_criterion_9_figure_geometry(record):
    data = sample_figure(201)
    px, py = data.point_p
    qm, ns = data.intersections["qm"], data.intersections["ns"]
    svg = figure_svg(data)
    x_p, x_qm, x_ns = (svg_marker_x(svg, g) for g in ("marker-p", "marker-qm", "marker-ns"))
    ok = (
        abs(px - 0.85355) <= 1e-4
        and abs(py - 0.59979) <= 1e-4
        and qm.beta < px < ns.beta
        and qm.before_p and not ns.before_p
        and x_qm < x_p < x_ns
    )
    assert record(
        "9 figure geometry",
        ok,
        f"P=({px:.5f}, {py:.5f}), qm at {qm.beta:.4f} (left), ns at {ns.beta:.4f} (right); svg x {x_qm:.1f} < {x_p:.1f} < {x_ns:.1f}",
    )
