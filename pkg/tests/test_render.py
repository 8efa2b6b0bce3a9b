"""Rendering: executable fidelity of the Python styles, term-order
invariance of the LaTeX styles, prompt assembly and answer programs."""

import math
import sys
import types

import numpy as np
import pytest

from optforge.bench import KnowledgeEntry
from optforge.optimizers.grids import GRIDS, enumerate_configs
from optforge.problems.constraints import EPS_EQ, constraint_values
from optforge.problems.instance import evaluate, evaluate_batch
from optforge.problems.synthesis import synthesize_instance
from optforge.render import (DegenerateEntryError, PY_STYLES, TEX_STYLES,
                             WritingStyle, emit_answer, normalize_terms,
                             render_constraints, render_objective,
                             render_prompt, split_signed_terms)
from optforge.render.answers import ANSWER_TEMPLATES
from optforge.render.tex_code import join_signed_terms, permute_terms, tex_num


def _sweep(n, constrained_every=3):
    """Deterministic mix of paradigms/dimensions for fidelity checks."""
    out = []
    for i in range(n):
        d = 2 + (i * 5) % 9
        k = 1 + i % 3
        out.append(synthesize_instance(
            d=d, k=min(k, d), constrained=(i % constrained_every == 0),
            seed=1000 + i, fe_budget=500))
    return out


def _exec_block(text):
    ns = {}
    exec(compile(text, "<rendered>", "exec"), ns)
    return ns


# ---------------------------------------------------------------------------
# python styles evaluate to the true objective


@pytest.mark.parametrize("style", PY_STYLES, ids=lambda s: s.value)
def test_python_objective_matches_engine(style):
    rng = np.random.default_rng(0)
    for inst in _sweep(9):
        ns = _exec_block(render_objective(inst, style))
        xs = rng.uniform(inst.bounds[:, 0], inst.bounds[:, 1], (5, inst.d))
        f_true, _ = evaluate_batch(inst, xs)
        for x, want in zip(xs, f_true):
            got = float(ns["objective"](list(map(float, x))))
            assert got == pytest.approx(want, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("style", PY_STYLES, ids=lambda s: s.value)
def test_python_constraints_match_engine(style):
    rng = np.random.default_rng(1)
    checked = 0
    for inst in _sweep(9, constrained_every=1):
        text = render_constraints(inst, style)
        assert text != ""
        ns = _exec_block(text)
        xs = rng.uniform(inst.bounds[:, 0], inst.bounds[:, 1], (3, inst.d))
        for x in xs:
            ev = evaluate(inst, x)
            n_g = n_h = 0
            for spec in inst.constraints:
                want = float(constraint_values(spec, x[None])[0])
                if spec.is_equality:
                    n_h += 1
                    got = float(ns[f"h{n_h}"](list(map(float, x))))
                    assert want == ev.h[n_h - 1]
                else:
                    n_g += 1
                    got = float(ns[f"g{n_g}"](list(map(float, x))))
                    assert want == ev.g[n_g - 1]
                assert got == pytest.approx(want, rel=1e-9, abs=1e-9)
                checked += 1
    assert checked > 0


def test_python_constraints_empty_for_unconstrained():
    inst = synthesize_instance(d=3, k=1, constrained=False, seed=2)
    for style in PY_STYLES:
        assert render_constraints(inst, style) == ""


def test_python_styles_differ_textually():
    inst = synthesize_instance(d=4, k=2, constrained=False, seed=3)
    texts = {s: render_objective(inst, s) for s in PY_STYLES}
    assert len(set(texts.values())) == 3
    assert "import math" in texts[WritingStyle.PY_LOOP]
    assert "import numpy as np" in texts[WritingStyle.PY_VECTOR]
    assert "def objective(x):" in texts[WritingStyle.PY_MODULAR]


# ---------------------------------------------------------------------------
# latex styles


def _expr_norm(line):
    """Key for one display line: head symbol plus order-normalized rhs."""
    for tail in (r" \le 0", " = 0"):
        if line.endswith(tail):
            line = line[: -len(tail)]
            break
    head, sep, expr = line.partition(" = ")
    assert sep, f"unexpected differing line: {line!r}"
    return head, normalize_terms(expr)


def _assert_same_up_to_term_order(a_text, b_text):
    a_lines, b_lines = a_text.splitlines(), b_text.splitlines()
    assert len(a_lines) == len(b_lines)
    for la, lb in zip(a_lines, b_lines):
        if la != lb:
            assert _expr_norm(la) == _expr_norm(lb)


def test_tex_commuted_is_reordering_of_canonical():
    for i in range(12):
        inst = synthesize_instance(d=2 + i % 7, k=1 + i % 3,
                                   constrained=(i % 4 == 0), seed=300 + i)
        canonical = render_objective(inst, WritingStyle.TEX_CANONICAL)
        commuted = render_objective(inst, WritingStyle.TEX_COMMUTED,
                                    seed=17 + i)
        _assert_same_up_to_term_order(canonical, commuted)


def test_tex_commuted_actually_commutes_something():
    hits = 0
    for i in range(20):
        inst = synthesize_instance(d=5, k=2, constrained=False, seed=600 + i)
        a = render_objective(inst, WritingStyle.TEX_CANONICAL)
        b = render_objective(inst, WritingStyle.TEX_COMMUTED, seed=i)
        if a != b:
            hits += 1
    # single-term bodies cannot move, but most multi-component sums can
    assert hits >= 10


def test_tex_commuted_deterministic_in_seed():
    inst = synthesize_instance(d=6, k=3, constrained=False, seed=44)
    a = render_objective(inst, WritingStyle.TEX_COMMUTED, seed=5)
    b = render_objective(inst, WritingStyle.TEX_COMMUTED, seed=5)
    assert a == b


def test_tex_factored_same_components_other_constants():
    diffs = 0
    for seed in range(10):
        inst = synthesize_instance(d=4, k=2, constrained=False,
                                   seed=200 + seed)
        canonical = render_objective(inst, WritingStyle.TEX_CANONICAL)
        factored = render_objective(inst, WritingStyle.TEX_FACTORED)
        assert "\\text{where}" in canonical
        assert "\\text{where}" in factored
        assert "z^{(1)}" in factored and "z^{(2)}" in factored
        if factored != canonical:
            diffs += 1
    # most basics have a genuinely different factored form
    assert diffs >= 5


def test_tex_constraints_cover_all_specs():
    for seed in range(30):
        inst = synthesize_instance(d=4, k=1, constrained=True, seed=seed)
        text = render_constraints(inst, WritingStyle.TEX_CANONICAL)
        n_g = sum(0 if c.is_equality else 1 for c in inst.constraints)
        n_h = sum(1 if c.is_equality else 0 for c in inst.constraints)
        for j in range(1, n_g + 1):
            assert f"g_{{{j}}}" in text
        for j in range(1, n_h + 1):
            assert f"h_{{{j}}}" in text
        assert f"g_{{{n_g + 1}}}" not in text
        assert f"h_{{{n_h + 1}}}" not in text


def test_tex_constraint_commuted_normalizes_back():
    for seed in range(20):
        inst = synthesize_instance(d=3, k=1, constrained=True, seed=seed)
        a = render_constraints(inst, WritingStyle.TEX_CANONICAL)
        b = render_constraints(inst, WritingStyle.TEX_COMMUTED, seed=seed)
        _assert_same_up_to_term_order(a, b)


# ---------------------------------------------------------------------------
# term machinery units


def test_split_terms_top_level_only():
    assert split_signed_terms("a + b - c") == [(1, "a"), (1, "b"), (-1, "c")]
    assert split_signed_terms("e^{a+b} - c") == [(1, "e^{a+b}"), (-1, "c")]
    assert split_signed_terms("-x + y") == [(-1, "x"), (1, "y")]
    assert split_signed_terms("(a - b) + c") == [(1, "(a - b)"), (1, "c")]


def test_split_respects_bracket_like_delimiters():
    s = r"\lvert a - b \rvert + c"
    assert split_signed_terms(s) == [(1, r"\lvert a - b \rvert"), (1, "c")]


def test_join_round_trips_split():
    for s in ("a + b - c", "-u + v", "x", r"e^{-a} - 2 + \cos(t)"):
        terms = split_signed_terms(s)
        assert split_signed_terms(join_signed_terms(terms)) == terms


def test_normalize_is_idempotent_and_order_free():
    a = "b + a - c"
    b = "a - c + b"
    na, nb = normalize_terms(a), normalize_terms(b)
    assert na == nb
    assert normalize_terms(na) == na


def test_normalize_keeps_subscript_expressions_verbatim():
    s = "x_{i+1} + a"
    out = normalize_terms(s)
    assert "x_{i+1}" in out


def test_tex_num_forms():
    assert tex_num(3.0) == "3.0"
    assert tex_num(-2.5) == "-2.5"
    assert tex_num(1e-05) == r"1 \times 10^{-5}"
    assert tex_num(2.5e17) == r"2.5 \times 10^{17}"


def test_permute_terms_is_a_permutation():
    s = "a + b - c + d"
    rng = np.random.default_rng(3)
    out = permute_terms(s, rng)
    assert sorted(split_signed_terms(out)) == sorted(split_signed_terms(s))


# ---------------------------------------------------------------------------
# prompt assembly


def _first_constrained(seed0=0):
    for seed in range(seed0, seed0 + 50):
        inst = synthesize_instance(d=3, k=1, constrained=True, seed=seed)
        if inst.constraints:
            return inst
    raise AssertionError("no constrained instance found")


@pytest.mark.parametrize("style", list(WritingStyle), ids=lambda s: s.value)
def test_prompt_sections_in_order(style):
    inst = synthesize_instance(d=3, k=2, constrained=False, seed=5,
                               fe_budget=1234)
    doc = render_prompt(inst, style)
    text = doc.text
    anchors = [
        "You are an expert in numerical optimization.",
        "Minimize the objective function defined in the following block.",
        "```",
        "The search space is 3-dimensional",
        "You may use at most 1234 objective function evaluations.",
        "Reply with a single complete Python program",
    ]
    pos = -1
    for anchor in anchors:
        nxt = text.find(anchor)
        assert nxt > pos, f"missing or misplaced: {anchor}"
        pos = nxt
    tag = "python" if style in PY_STYLES else "latex"
    assert f"```{tag}\n" in text
    assert text.endswith("\n")
    assert doc.style == style.value
    assert doc.instance_id == inst.id
    assert doc.fe_budget == 1234


def test_prompt_constrained_includes_tolerance_and_second_fence():
    inst = _first_constrained()
    doc = render_prompt(inst, WritingStyle.PY_VECTOR)
    assert "must satisfy the following constraints" in doc.text
    assert f"|h(x)| <= {EPS_EQ!r}" in doc.text
    assert doc.text.count("```python\n") == 2


def test_prompt_unconstrained_has_single_fence():
    inst = synthesize_instance(d=4, k=1, constrained=False, seed=8)
    doc = render_prompt(inst, WritingStyle.PY_LOOP)
    assert doc.text.count("```python\n") == 1
    assert "constraint" not in doc.text.lower()


def test_prompt_bounds_are_plain_floats():
    inst = synthesize_instance(d=3, k=1, constrained=False, seed=9)
    doc = render_prompt(inst, WritingStyle.PY_LOOP)
    assert "np.float64" not in doc.text


def test_prompt_deterministic():
    inst = synthesize_instance(d=5, k=2, constrained=False, seed=10)
    for style in WritingStyle:
        assert render_prompt(inst, style).text == render_prompt(inst, style).text


def test_prompt_rejects_unknown_style():
    inst = synthesize_instance(d=3, k=1, constrained=False, seed=11)
    with pytest.raises(ValueError):
        render_prompt(inst, "markdown")


# ---------------------------------------------------------------------------
# answer programs


def _entry(optimizer, config, degenerate=False):
    return KnowledgeEntry(instance_id="deadbeef0123", best_optimizer=optimizer,
                          best_config=config, best_config_index=0,
                          f_star=0.0, mean_eval=1.0, degenerate=degenerate)


@pytest.mark.parametrize("optimizer", sorted(ANSWER_TEMPLATES))
def test_answer_compiles_for_grid_config(optimizer):
    _, config = enumerate_configs(optimizer, cap=1)[0]
    doc = emit_answer(_entry(optimizer, config))
    compile(doc.code_text, "<answer>", "exec")
    assert doc.optimizer == optimizer
    assert doc.config == config
    assert doc.line_count == len(doc.code_text.splitlines())
    assert "from opt_runtime import load_problem, submit" in doc.code_text
    for value in config.values():
        assert repr(value) in doc.code_text


def test_answer_templates_cover_pool():
    assert set(ANSWER_TEMPLATES) == set(GRIDS)


def test_answer_degenerate_entry_raises():
    with pytest.raises(DegenerateEntryError):
        emit_answer(_entry("random_search", {}, degenerate=True))


def test_answer_unknown_optimizer_raises():
    with pytest.raises(KeyError):
        emit_answer(_entry("gradient_descent", {}))


class _FakeProblem:
    def __init__(self, d, budget):
        self.dim = d
        self.lower = np.full(d, -5.0)
        self.upper = np.full(d, 5.0)
        self.budget = budget
        self.n_evals = 0
        self.seen = []

    def evaluate(self, xs):
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        self.n_evals += len(xs)
        fs = np.sum((xs - 1.0) ** 2, axis=1)
        self.seen.extend(float(v) for v in fs)
        return fs


def _run_answer(code_text, d=3, budget=256):
    problem = _FakeProblem(d, budget)
    calls = []
    runtime = types.ModuleType("opt_runtime")
    runtime.load_problem = lambda: problem
    runtime.submit = lambda x, f: calls.append((np.asarray(x, float), float(f)))
    sys.modules["opt_runtime"] = runtime
    try:
        exec(compile(code_text, "<answer>", "exec"), {"__name__": "__main__"})
    finally:
        del sys.modules["opt_runtime"]
    return problem, calls


def test_random_search_answer_runs_to_budget():
    doc = emit_answer(_entry("random_search", {}))
    problem, calls = _run_answer(doc.code_text, budget=200)
    assert problem.n_evals == 200
    assert len(calls) == 1
    x, f = calls[0]
    assert f == min(problem.seen)
    assert np.all(x >= problem.lower) and np.all(x <= problem.upper)


def test_de_answer_improves_and_respects_budget():
    config = {"NP": 10, "F": 0.5, "Cr": 0.9, "mutation": "best1",
              "bound": "clip"}
    doc = emit_answer(_entry("vanilla_de", config))
    problem, calls = _run_answer(doc.code_text, budget=400)
    assert problem.n_evals <= 400
    assert len(calls) == 1
    _, f = calls[0]
    assert f == min(problem.seen)
    assert f < np.median(problem.seen[:10])


def test_annealing_answer_runs():
    config = {"initial_temp": 100.0, "final_temp": 0.1, "sigma": 0.3,
              "schedule": "exponential"}
    grid = GRIDS["simulated_annealing"]
    config = {k: v for k, v in config.items() if k in grid}
    # fill any grid fields the shorthand above missed
    for name, values in grid.items():
        config.setdefault(name, values[0])
    doc = emit_answer(_entry("simulated_annealing", config))
    problem, calls = _run_answer(doc.code_text, budget=150)
    assert problem.n_evals <= 150
    assert len(calls) == 1
    assert math.isfinite(calls[0][1])
