"""Closed-form bound evaluators and the width/weight recursion schedule.

The schedule shrinks a (width t, row-weight s) state through R_A "bulk"
steps with fixed multipliers (x_b, y_b), one step with a specially
chosen weight multiplier y_1, and one final (x_b, x_b) step, landing on
the target state (beta*k, beta*k).  Certification re-evaluates every
constraint the construction relies on: the multipliers stay admissible,
every intermediate state keeps s(1-y) above k^a and t >= s, the per-step
additive cost A_j at most doubles across bulk steps and never exceeds
its initial value at the end, and applying floors to every step drifts
the final state by at most 1/(1-y_b).

Widths along the schedule overflow double precision for large k, so all
state arithmetic is carried in log2 space; integer/rational quantities
(binomials, the floored replay) are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadConstants,
    DenominatorNonpositive,
    MissingTableEntry,
    PreconditionViolated,
    ResourceLimit,
)

_LN2 = math.log(2.0)
_MILESTONE_NOTE = (
    "milestone exponents are evaluated with the bulk multipliers; "
    "fractional exponents like R_A/2 are taken as reals"
)


def _as_fraction(value, name: str) -> Fraction:
    """Exact rational view of a constant; floats are read at their
    decimal repr so e.g. 0.1 means 1/10."""
    if isinstance(value, float):
        if not math.isfinite(value):
            raise BadConstants(f"{name} must be finite, got {value!r}")
        return Fraction(str(value))
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise BadConstants(f"{name} is not a rational constant: {value!r}") from exc


def _pow_ka(k, a) -> Fraction:
    """k**a as an exact rational when a is integral, else the exact
    value of the double-precision power."""
    if isinstance(a, int) or (isinstance(a, float) and a.is_integer()):
        return _as_fraction(k, "k") ** int(a)
    return Fraction(float(k) ** float(a))


def _is_integral(a) -> bool:
    return isinstance(a, int) or (isinstance(a, float) and a.is_integer())


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def marcus_tardos_bound(k: int) -> int:
    """Linear coefficient 2*k^4*binom(k^2, k), exact."""
    if k < 1:
        raise PreconditionViolated(f"need k >= 1, got {k}")
    return 2 * k ** 4 * math.comb(k * k, k)


def lemma21_bound(k: int, a, t: int, s: int) -> Fraction:
    """Row-count bound k^a*t/(s - k^a) for hosts with s ones per row,
    valid once s clears k^a."""
    if k < 1:
        raise PreconditionViolated(f"need k >= 1, got {k}")
    if not 1 <= s <= t:
        raise PreconditionViolated(f"need 1 <= s <= t, got s={s}, t={t}")
    ka = _pow_ka(k, a)
    s_f = _as_fraction(s, "s")
    if s_f <= ka:
        raise PreconditionViolated(f"need s > k^a, got s={s}, k^a={float(ka):g}")
    return ka * _as_fraction(t, "t") / (s_f - ka)


def lemma22_rhs(k: int, a, c: int, t: int, s: int, x, y, f_sub: int) -> Fraction:
    """One recursion step: binom(c, floor(xc)) * f_sub plus the
    second-term ratio, with the caller supplying the shrunken-instance
    value f_sub."""
    if c < 2:
        raise BadConstants(f"need c >= 2, got {c}")
    if not 1 <= s <= t:
        raise PreconditionViolated(f"need 1 <= s <= t, got s={s}, t={t}")
    if f_sub < 0:
        raise PreconditionViolated(f"need f_sub >= 0, got {f_sub}")
    xf = _as_fraction(x, "x")
    yf = _as_fraction(y, "y")
    if not 0 < xf < 1:
        raise BadConstants(f"need 0 < x < 1, got {x}")
    if not 0 < yf < 1:
        raise BadConstants(f"need 0 < y < 1, got {y}")
    if xf <= Fraction(1, c):
        raise BadConstants(f"need x > 1/c, got x={x}, c={c}")
    fxc = int(xf * c)  # floor; >= 1 because x > 1/c
    ka = _pow_ka(k, a)
    denom = _as_fraction(s, "s") * (1 - yf * Fraction(c - 1, fxc)) * c - ka * c
    if denom <= 0:
        raise DenominatorNonpositive(
            f"s(1 - y(c-1)/floor(xc))c - k^a c = {float(denom):g} <= 0"
        )
    return math.comb(c, fxc) * Fraction(f_sub) + ka * _as_fraction(t, "t") / denom


def theorem24_alpha(a, c: int) -> float:
    """Exponent alpha = 2a + 8c^2 + 32ac^2 ln c in the k^alpha * n
    extremal bound."""
    if not a > 0:
        raise PreconditionViolated(f"need a > 0, got {a}")
    if c < 2:
        raise PreconditionViolated(f"need c >= 2, got {c}")
    return 2.0 * a + 8.0 * c * c + 32.0 * a * c * c * math.log(c)


def theorem12_exponent(a, c: int) -> float:
    """Growth-rate exponent, exactly twice :func:`theorem24_alpha`."""
    return 2.0 * theorem24_alpha(a, c)


def fox_rhs(ex_table, t: int, s: int, f_val: int, g_val: int, n: int) -> int:
    """Right side ex(s-1)*ex(n) + ex(t)*(f+g)*n of the blow-up
    inequality, from caller-supplied exact table values."""
    out = {}
    for key in (s - 1, t, n):
        if key not in ex_table:
            raise MissingTableEntry(f"ex table is missing an entry for n={key}")
        out[key] = ex_table[key]
    return out[s - 1] * out[n] + out[t] * (f_val + g_val) * n


def cibulka_note(c_val) -> dict:
    """Annotation for the quadratic growth-rate/extremal-constant
    relation; asymptotic only, never a certified bound."""
    return {"relation": "L = O(c^2)", "square": c_val * c_val, "certified": False}


# ---------------------------------------------------------------------------
# schedule
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundParams:
    """Pattern size k, hypothesis exponent a, block count c."""

    k: int
    a: float
    c: int

    def __post_init__(self):
        if self.k < 2:
            raise BadConstants(f"need k >= 2, got {self.k}")
        if self.c < 2:
            raise BadConstants(f"need c >= 2, got {self.c}")
        if not self.a > 0:
            raise BadConstants(f"need a > 0, got {self.a}")


@dataclass(frozen=True)
class ScheduleState:
    """One (width, row-weight) state, held in log2."""

    index: int
    log2_t: float
    log2_s: float

    @property
    def t(self) -> float:
        return 2.0 ** self.log2_t if self.log2_t < 1024 else math.inf

    @property
    def s(self) -> float:
        return 2.0 ** self.log2_s if self.log2_s < 1024 else math.inf

    def to_jsonable(self) -> dict:
        return {
            "i": self.index,
            "log2_t": self.log2_t,
            "log2_s": self.log2_s,
            "t": self.t if math.isfinite(self.t) else None,
            "s": self.s if math.isfinite(self.s) else None,
        }


@dataclass(frozen=True)
class Schedule:
    params: BoundParams
    beta: float
    log2_beta_k: float
    x_bulk: float
    y_bulk: float
    y_penultimate: float
    bulk_steps: int
    states: tuple[ScheduleState, ...]
    milestones: tuple[ScheduleState, ScheduleState, ScheduleState]
    floors_applied: bool
    floor_drift_t: float | None
    floor_drift_s: float | None

    def to_jsonable(self) -> dict:
        return {
            "params": {"k": self.params.k, "a": self.params.a, "c": self.params.c},
            "beta": self.beta,
            "x_b": self.x_bulk,
            "y_b": self.y_bulk,
            "y_1": self.y_penultimate,
            "R_A": self.bulk_steps,
            "log2_beta_k": self.log2_beta_k,
            "floors_applied": self.floors_applied,
            "floor_drift_t": self.floor_drift_t,
            "floor_drift_s": self.floor_drift_s,
            "milestone_note": _MILESTONE_NOTE,
            "milestones": {
                "bulk_end": self.milestones[0].to_jsonable(),
                "penultimate": self.milestones[1].to_jsonable(),
                "final": self.milestones[2].to_jsonable(),
            },
            "states": [st.to_jsonable() for st in self.states],
        }


def _bulk_constants(params: BoundParams):
    c = params.c
    x_frac = Fraction(c - 1, c)
    y_frac = Fraction(16 * c * c - 8 * c - 1, 16 * c * c)
    return x_frac, y_frac


def build_schedule(params: BoundParams, *, apply_floors: bool = False) -> Schedule:
    """Assemble the full recursion schedule for the given constants.

    States are ideal (floor-free) by default.  With ``apply_floors`` the
    reported states come from the exact floored replay instead and the
    drift fields record how far the final state fell below the target;
    this needs integral a.
    """
    k, a, c = params.k, params.a, params.c
    x_frac, y_frac = _bulk_constants(params)
    x_b, y_b = float(x_frac), float(y_frac)
    l2x = math.log2(x_frac.numerator) - math.log2(x_frac.denominator)
    l2y = math.log2(y_frac.numerator) - math.log2(y_frac.denominator)
    l2k = math.log2(k)
    log2_beta_k = math.log2(2 * c) + a * l2k
    beta = 2.0 ** (math.log2(2 * c) + (a - 1.0) * l2k)

    # step count: contraction ratio of sqrt(t)/s must close the gap
    denom = math.log(y_b) - 0.5 * math.log(x_b)
    if denom <= 0:
        raise BadConstants("bulk multipliers cannot close the weight gap")
    q = 1.0 + (math.log(c) + 0.5 * log2_beta_k * _LN2) / denom
    bulk_steps = math.ceil(q)

    lt0 = log2_beta_k - (bulk_steps + 2) * l2x
    ls0 = lt0 / 2.0
    ls_bulk_end = ls0 + bulk_steps * l2y
    l2y1 = log2_beta_k - l2x - ls_bulk_end
    y_penultimate = 2.0 ** l2y1

    def ideal_state(i: int) -> ScheduleState:
        lt = lt0 + i * l2x
        if i <= bulk_steps:
            ls = ls0 + i * l2y
        elif i == bulk_steps + 1:
            ls = ls_bulk_end + l2y1
        else:
            ls = ls_bulk_end + l2y1 + l2x
        return ScheduleState(i, lt, ls)

    milestones = (
        ScheduleState(
            bulk_steps,
            log2_beta_k - 2 * l2x,
            0.5 * log2_beta_k - (bulk_steps / 2.0 + 1.0) * l2x + bulk_steps * l2y,
        ),
        ScheduleState(bulk_steps + 1, log2_beta_k - l2x, log2_beta_k - l2x),
        ScheduleState(bulk_steps + 2, log2_beta_k, log2_beta_k),
    )

    drift_t = drift_s = None
    if apply_floors:
        t_fl, s_fl, states = _floored_replay(params, bulk_steps, collect=True)
        beta_k_exact = _beta_k_int(params)
        drift_t = float(beta_k_exact - t_fl)
        drift_s = float(beta_k_exact - s_fl)
    else:
        states = tuple(ideal_state(i) for i in range(bulk_steps + 3))

    return Schedule(
        params=params,
        beta=beta,
        log2_beta_k=log2_beta_k,
        x_bulk=x_b,
        y_bulk=y_b,
        y_penultimate=y_penultimate,
        bulk_steps=bulk_steps,
        states=states,
        milestones=milestones,
        floors_applied=apply_floors,
        floor_drift_t=drift_t,
        floor_drift_s=drift_s,
    )


def _beta_k_int(params: BoundParams) -> int:
    if not _is_integral(params.a) or not _is_integral(params.k):
        raise PreconditionViolated(
            "exact floored replay needs integral k and hypothesis exponent"
        )
    return 2 * params.c * int(params.k) ** int(params.a)


def _floor_sqrt_fraction(f: Fraction) -> int:
    # floor(sqrt(p/q)) = isqrt(floor(p/q)): (m+1)^2 > floor(p/q) implies
    # (m+1)^2 >= floor(p/q)+1 > p/q
    return math.isqrt(f.numerator // f.denominator)


def _floored_replay(params: BoundParams, bulk_steps: int, *, collect: bool = False):
    """Exact integer trajectory with every t and s floored, starting
    from floor(t_0) and floor(sqrt(t_0)); returns (t_final, s_final)
    as integers, plus the state list when requested."""
    x_frac, y_frac = _bulk_constants(params)
    beta_k = _beta_k_int(params)
    t0 = Fraction(beta_k) * (1 / x_frac) ** (bulk_steps + 2)

    t = t0.numerator // t0.denominator
    s = math.isqrt(t)
    states = [ScheduleState(0, _log2_int(t), _log2_int(s))]
    for i in range(1, bulk_steps + 1):
        t = t * x_frac.numerator // x_frac.denominator
        s = s * y_frac.numerator // y_frac.denominator
        if collect:
            states.append(ScheduleState(i, _log2_int(t), _log2_int(s)))
    # penultimate step: y_1 = sqrt(beta k x^R) / y^R, applied exactly
    t = t * x_frac.numerator // x_frac.denominator
    w = Fraction(s) / y_frac ** bulk_steps
    s = _floor_sqrt_fraction(w * w * beta_k * x_frac ** bulk_steps)
    states.append(ScheduleState(bulk_steps + 1, _log2_int(t), _log2_int(s)))
    t = t * x_frac.numerator // x_frac.denominator
    s = s * x_frac.numerator // x_frac.denominator
    states.append(ScheduleState(bulk_steps + 2, _log2_int(t), _log2_int(s)))
    if collect:
        return t, s, tuple(states)
    return t, s


def _log2_int(v: int) -> float:
    return math.log2(v) if v > 0 else -math.inf


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertCheck:
    """One named constraint; holds iff lhs relates to rhs as the check's
    comparison demands (documented per check in certify_schedule)."""

    name: str
    holds: bool
    lhs: float
    rhs: float

    def to_jsonable(self) -> dict:
        return {"name": self.name, "holds": self.holds, "lhs": self.lhs, "rhs": self.rhs}


@dataclass(frozen=True)
class CertReport:
    checks: tuple[CertCheck, ...]

    def __post_init__(self):
        names = [c.name for c in self.checks]
        if len(set(names)) != len(names):
            raise PreconditionViolated("duplicate check names in report")

    @property
    def all_pass(self) -> bool:
        return all(c.holds for c in self.checks)

    def by_name(self, name: str) -> CertCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_jsonable(self) -> dict:
        return {
            "all_pass": self.all_pass,
            "checks": [c.to_jsonable() for c in self.checks],
        }


def certify_schedule(
    schedule: Schedule, params: BoundParams, *, tol: float = 1e-9
) -> CertReport:
    """Numerically verify every constraint the schedule construction
    needs.  Failures are report entries, never exceptions: small k
    legitimately fails.

    Checks (lhs vs rhs):
      multiplier admissibility: 1/c < x_b; y_1 < 1; y_1 equals its
        closed form sqrt(beta k) * x_b^(R_A/2) / y_b^R_A;
      per-step state constraints (log2 scale): k^a below min_j
        s_j(1-y_j); max_j (log2 s_j - log2 t_j) <= 0;
      step costs: bulk ratio A_(j+1)/A_j <= 2; A_R_A and A_(R_A+1)
        within A_0;
      milestones (log2 scale): bulk-end, penultimate, and final states
        match their closed forms; final state hits the target;
      floors (integral a only): floored final t and s stay at or below
        the target and the s shortfall is at most 1/(1-y_b).
    """
    k, a, c = params.k, params.a, params.c
    R = schedule.bulk_steps
    x_b, y_b, y_1 = schedule.x_bulk, schedule.y_bulk, schedule.y_penultimate
    l2k = math.log2(k)
    lbk = schedule.log2_beta_k
    l2x = math.log2(x_b)

    ideal = schedule.states if not schedule.floors_applied else None
    if ideal is None:
        ideal = build_schedule(params).states

    checks: list[CertCheck] = []

    def add(name, holds, lhs, rhs):
        checks.append(CertCheck(name, bool(holds), float(lhs), float(rhs)))

    # x_b = 1 - 1/c touches 1/c exactly at c = 2; the floor the
    # constraint protects is still >= 1 there, so tolerance applies
    add("x_b_above_inverse_c", 1.0 / c <= x_b + tol, 1.0 / c, x_b)
    add("y_penultimate_below_one", y_1 < 1.0, y_1, 1.0)

    y1_closed = 2.0 ** (0.5 * lbk + (R / 2.0) * l2x - R * math.log2(y_b))
    add(
        "y_penultimate_closed_form",
        abs(y_1 - y1_closed) <= tol * max(y_1, y1_closed),
        y_1,
        y1_closed,
    )

    # per-step y value: bulk steps use y_b, then y_1, then x_b
    step_y = [y_b] * R + [y_1, x_b]
    la = a * l2k

    min_weight_margin = math.inf
    max_shape_margin = -math.inf
    log_costs = []
    for i, y_i in enumerate(step_y):
        st = ideal[i]
        lw = st.log2_s + math.log2(1.0 - y_i)
        min_weight_margin = min(min_weight_margin, lw)
        max_shape_margin = max(max_shape_margin, st.log2_s - st.log2_t)
        # cost A_i = k^a t_i / (s_i (1-y_i) c - k^a c), in log2
        l_big = lw + math.log2(c)
        l_small = la + math.log2(c)
        if l_small >= l_big:
            log_costs.append(math.inf)
        else:
            l_den = l_big + math.log1p(-(2.0 ** (l_small - l_big))) / _LN2
            log_costs.append(la + st.log2_t - l_den)
    max_shape_margin = max(
        max_shape_margin, ideal[R + 2].log2_s - ideal[R + 2].log2_t
    )

    add(
        "row_weight_exceeds_hypothesis_log2",
        la < min_weight_margin,
        la,
        min_weight_margin,
    )
    add("width_at_least_weight_log2", max_shape_margin <= tol, max_shape_margin, 0.0)

    if any(math.isinf(lc) for lc in log_costs):
        add("bulk_cost_ratio_at_most_two", False, math.inf, 2.0)
        add("penultimate_cost_within_initial", False, math.inf, 1.0)
        add("final_cost_within_initial", False, math.inf, 1.0)
    else:
        bulk_ratio = max(
            (2.0 ** (log_costs[j + 1] - log_costs[j]) for j in range(R - 1)),
            default=0.0,
        )
        add("bulk_cost_ratio_at_most_two", bulk_ratio <= 2.0 + tol, bulk_ratio, 2.0)
        pen_ratio = 2.0 ** (log_costs[R] - log_costs[0])
        add("penultimate_cost_within_initial", pen_ratio <= 1.0 + tol, pen_ratio, 1.0)
        last_ratio = 2.0 ** (log_costs[R + 1] - log_costs[0])
        add("final_cost_within_initial", last_ratio <= 1.0 + tol, last_ratio, 1.0)

    scale = max(1.0, abs(lbk))
    for label, state, target in (
        ("bulk_end", ideal[R], schedule.milestones[0]),
        ("penultimate", ideal[R + 1], schedule.milestones[1]),
        ("final", ideal[R + 2], schedule.milestones[2]),
    ):
        add(
            f"milestone_{label}_t_log2",
            abs(state.log2_t - target.log2_t) <= tol * scale,
            state.log2_t,
            target.log2_t,
        )
        add(
            f"milestone_{label}_s_log2",
            abs(state.log2_s - target.log2_s) <= tol * scale,
            state.log2_s,
            target.log2_s,
        )
    add(
        "final_state_hits_target_log2",
        abs(ideal[R + 2].log2_t - lbk) <= tol * scale
        and abs(ideal[R + 2].log2_s - lbk) <= tol * scale,
        ideal[R + 2].log2_t,
        lbk,
    )

    if _is_integral(a) and _is_integral(params.k):
        t_fl, s_fl = _floored_replay(params, R)
        beta_k = _beta_k_int(params)
        envelope = 16.0 * c * c / (8.0 * c + 1.0)  # 1/(1-y_b)
        add(
            "floored_final_width_le_target",
            t_fl <= beta_k,
            t_fl / beta_k,
            1.0,
        )
        add(
            "floored_final_weight_le_target",
            s_fl <= beta_k,
            s_fl / beta_k,
            1.0,
        )
        drift = float(beta_k - s_fl)
        add(
            "floored_final_weight_drift_le_envelope",
            drift <= envelope + tol,
            drift,
            envelope,
        )

    return CertReport(tuple(checks))


def crude_fpts_bound(schedule: Schedule, params: BoundParams) -> float:
    """log2 of the unrolled-recursion bound
    c^(R+2)*k*binom(beta k, m) + (2c)^(R+2)*k^a*t_0/(s_0(1-y_b)c - k^a c)
    with m = ceil(1/(1-y_b)); the linear value overflows floats."""
    k, a, c = params.k, params.a, params.c
    R = schedule.bulk_steps
    y_b = schedule.y_bulk
    lbk = schedule.log2_beta_k
    l2k = math.log2(k)
    st0 = schedule.states[0] if not schedule.floors_applied else None
    if st0 is None:
        st0 = build_schedule(params).states[0]
    lt0, ls0 = st0.log2_t, st0.log2_s

    m = (16 * c * c + 8 * c) // (8 * c + 1)  # ceil(1/(1-y_b)) exactly
    if _is_integral(a) and _is_integral(params.k):
        beta_k = _beta_k_int(params)
        l_binom = sum(math.log2(beta_k - i) for i in range(m)) - math.log2(
            math.factorial(m)
        )
    else:
        l_binom = sum(
            _log2_sub(lbk, i) for i in range(m)
        ) - math.log2(math.factorial(m))
    term1 = (R + 2) * math.log2(c) + l2k + l_binom

    l_s0_term = ls0 + math.log2((1.0 - y_b) * c)
    l_ka_c = a * l2k + math.log2(c)
    if l_ka_c >= l_s0_term:
        raise DenominatorNonpositive(
            "s_0(1-y_b)c - k^a c <= 0; the schedule start is too small"
        )
    l_den = l_s0_term + math.log1p(-(2.0 ** (l_ka_c - l_s0_term))) / _LN2
    term2 = (R + 2) * math.log2(2 * c) + a * l2k + lt0 - l_den

    hi, lo = max(term1, term2), min(term1, term2)
    return hi + math.log1p(2.0 ** (lo - hi)) / _LN2


def _log2_sub(log2_value: float, delta: int) -> float:
    """log2(2**log2_value - delta) for delta tiny against the value."""
    if log2_value > 100:
        return log2_value + math.log1p(-delta * 2.0 ** (-log2_value)) / _LN2
    return math.log2(2.0 ** log2_value - delta)
