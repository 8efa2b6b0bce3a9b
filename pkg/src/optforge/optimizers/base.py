"""Shared optimizer infrastructure: budget tracking, constraint
handling, the run protocol and the optimizer registry.

Optimizers receive an :class:`ObjectiveTracker` and simply loop until
it raises :class:`BudgetExhausted`; the tracker records every
evaluation, maintains the running best under the feasibility rule and
freezes the initial-sample objective ``f0`` used later for descent
normalization.

Comparison rule for constrained problems (also used unconstrained,
where every violation is 0): feasible beats infeasible, then smaller
violation, then smaller objective.
"""

from dataclasses import dataclass, field

import numpy as np

from ..problems.instance import evaluate_batch

__all__ = [
    "PENALTY_COEFF",
    "BudgetExhausted",
    "ObjectiveTracker",
    "RunResult",
    "register",
    "get_optimizer",
    "optimizer_ids",
    "run",
    "rule_key",
    "rule_argmin",
    "rule_le",
    "uniform_init",
    "BoxMap",
]

PENALTY_COEFF = 1.0e6


class BudgetExhausted(Exception):
    """Raised by the tracker once the evaluation budget is spent."""


def rule_key(f, violation):
    """Sort key implementing the feasibility rule (smaller is better)."""
    return (0 if violation <= 0.0 else 1, violation, f)


def rule_argmin(f, violation):
    """Index of the feasibility-rule best within a batch."""
    f = np.asarray(f)
    violation = np.asarray(violation)
    feas = violation <= 0.0
    if feas.any():
        idx = np.flatnonzero(feas)
        return int(idx[np.argmin(f[idx])])
    return int(np.lexsort((f, violation))[0])


def rule_le(f_a, v_a, f_b, v_b):
    """Vectorized feasibility-rule comparison: a better-or-equal b."""
    fa, va = np.asarray(f_a), np.asarray(v_a)
    fb, vb = np.asarray(f_b), np.asarray(v_b)
    ia = (va > 0.0).astype(int)
    ib = (vb > 0.0).astype(int)
    return (ia < ib) | (
        (ia == ib) & ((va < vb) | ((va == vb) & (fa <= fb)))
    )


class ObjectiveTracker:
    """Budget-limited evaluation proxy around one problem instance.

    All evaluations go through :meth:`batch`.  When a batch does not fit
    in the remaining budget, the fitting prefix is evaluated (and
    recorded) before :class:`BudgetExhausted` is raised; callers that
    need the truncated values can read them from ``last_partial``.

    ``f0``/``f0_violation`` freeze the rule-best point among the first
    ``n_init`` evaluations -- the optimizer's own initial sample --
    which anchors descent scoring.
    """

    def __init__(self, instance, fe_budget, n_init):
        if n_init < 1:
            raise ValueError("n_init must be >= 1")
        self.instance = instance
        self.fe_budget = int(fe_budget)
        self.n_init = int(n_init)
        self.fe_used = 0
        self.best_f = np.inf
        self.best_x = None
        self.best_violation = np.inf
        self.f0 = None
        self.f0_violation = None
        self._init_best = None  # rule-best (f, viol) within the first n_init evals
        self.trace = []  # (fe_used_at_improvement, f, violation)
        self.last_partial = None

    @property
    def remaining(self):
        return self.fe_budget - self.fe_used

    def _record(self, x, f, viol, fe_before):
        # f0 anchor: rule-best over exactly the first n_init evaluations,
        # even when a batch straddles that boundary
        if self.f0 is None:
            k = min(len(f), self.n_init - fe_before)
            if k > 0:
                j = rule_argmin(f[:k], viol[:k])
                cand = (float(f[j]), float(viol[j]))
                if (self._init_best is None
                        or rule_key(*cand) < rule_key(*self._init_best)):
                    self._init_best = cand
            if self.fe_used >= self.n_init:
                self.f0, self.f0_violation = self._init_best

        i = rule_argmin(f, viol)
        key = rule_key(float(f[i]), float(viol[i]))
        if self.best_x is None or key < rule_key(self.best_f, self.best_violation):
            self.best_f = float(f[i])
            self.best_x = np.array(x[i])
            self.best_violation = float(viol[i])
            self.trace.append((fe_before + i + 1, self.best_f, self.best_violation))

    def batch(self, x):
        """Evaluate up to ``remaining`` rows of ``x``.

        Returns ``(f, violation)`` arrays of length ``len(x)``, or
        raises :class:`BudgetExhausted` (after recording the prefix
        that still fit).
        """
        if self.remaining <= 0:
            raise BudgetExhausted
        x = np.asarray(x, dtype=float)
        n = x.shape[0]
        take = min(n, self.remaining)
        fe_before = self.fe_used
        f, viol = evaluate_batch(self.instance, x[:take])
        self.fe_used += take
        self._record(x[:take], f, viol, fe_before)
        if take < n:
            self.last_partial = (f, viol)
            raise BudgetExhausted
        return f, viol

    def __call__(self, x):
        """Single-point evaluation; returns the raw objective."""
        f, _ = self.batch(np.asarray(x, dtype=float)[None])
        return float(f[0])

    def penalized(self, x):
        """Single-point evaluation as ``f + 1e6 * violation`` (for
        optimizers without native constraint support)."""
        f, viol = self.batch(np.asarray(x, dtype=float)[None])
        return float(f[0] + PENALTY_COEFF * viol[0])

    def penalized_batch(self, x):
        f, viol = self.batch(x)
        return f + PENALTY_COEFF * viol


@dataclass
class RunResult:
    """Outcome of one optimizer run on one instance."""

    optimizer: str
    config: dict
    seed: int
    status: str  # "ok" | "failed"
    best_f: float = None
    best_x: list = None
    best_violation: float = None
    f0: float = None
    f0_violation: float = None
    fe_used: int = 0
    trace: list = field(default_factory=list)
    message: str = ""


_REGISTRY = {}


def register(name, n_init):
    """Register an optimizer under a string id.

    ``n_init`` maps a config dict to the size of the optimizer's
    initial sample (how many evaluations fix ``f0``).
    """

    def deco(fn):
        if name in _REGISTRY:
            raise ValueError(f"duplicate optimizer id {name!r}")
        _REGISTRY[name] = (fn, n_init)
        return fn

    return deco


def get_optimizer(name):
    if name not in _REGISTRY:
        raise KeyError(f"unknown optimizer {name!r}")
    return _REGISTRY[name][0]


def optimizer_ids():
    return tuple(_REGISTRY)


def uniform_init(rng, bounds, n):
    """n points uniform in the box."""
    return rng.uniform(bounds[:, 0], bounds[:, 1], size=(n, bounds.shape[0]))


class BoxMap:
    """Affine map between the unit cube and an instance's box, for
    optimizers that operate in normalized coordinates."""

    def __init__(self, bounds):
        self.lo = bounds[:, 0]
        self.width = bounds[:, 1] - bounds[:, 0]

    def to_real(self, u):
        return self.lo + np.asarray(u) * self.width


def run(optimizer, config, instance, fe_budget, seed):
    """Execute one run and package the outcome.

    Any exception out of the optimizer (other than budget exhaustion)
    marks the run ``failed``; a budget smaller than the optimizer's
    initial sample fails upfront without spending evaluations.
    """
    from .grids import validate_config  # local import to avoid a cycle

    fn, n_init_of = _REGISTRY[optimizer] if optimizer in _REGISTRY else (None, None)
    if fn is None:
        raise KeyError(f"unknown optimizer {optimizer!r}")
    validate_config(optimizer, config)

    n_init = int(n_init_of(config))
    if fe_budget < n_init:
        return RunResult(
            optimizer=optimizer, config=dict(config), seed=seed,
            status="failed", fe_used=0,
            message=f"budget {fe_budget} < initial sample {n_init}",
        )

    tracker = ObjectiveTracker(instance, fe_budget, n_init)
    rng = np.random.Generator(np.random.PCG64(seed))
    status, message = "ok", ""
    try:
        fn(tracker, instance, config, rng)
    except BudgetExhausted:
        pass
    except Exception as exc:  # noqa: BLE001 -- any optimizer crash = failed run
        status, message = "failed", f"{type(exc).__name__}: {exc}"

    if tracker.f0 is None and tracker._init_best is not None:
        # run ended before the declared initial sample completed
        tracker.f0, tracker.f0_violation = tracker._init_best
    if tracker.best_x is None:
        status = status if status == "failed" else "failed"
        message = message or "no evaluations recorded"
        return RunResult(optimizer=optimizer, config=dict(config), seed=seed,
                         status="failed", fe_used=tracker.fe_used,
                         message=message)
    return RunResult(
        optimizer=optimizer, config=dict(config), seed=seed, status=status,
        best_f=tracker.best_f, best_x=tracker.best_x.tolist(),
        best_violation=tracker.best_violation, f0=tracker.f0,
        f0_violation=tracker.f0_violation, fe_used=tracker.fe_used,
        trace=list(tracker.trace), message=message,
    )
