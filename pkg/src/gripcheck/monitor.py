"""Evaluate requirements over traces: per-trial outcomes, then verdicts."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .model import (
    INFLATION,
    Kind,
    Requirement,
    SignalBound,
    SpecificationDoc,
)
from .stats import clopper_pearson_lower
from .trace import EventKind, Trace, TraceEvent
from .units import DIMENSIONLESS, Quantity

DEFAULT_N_MIN = 100
TOUCH_TOLERANCE_M = 1e-9
TIME_TOLERANCE_S = 1e-9
SECONDS_PER_HOUR = 3600.0
ORIENTATION_SELECTOR = "orientation"


class MonitorError(ValueError):
    pass


class UnsupportedKind(MonitorError):
    pass


class MissingSignal(MonitorError):
    pass


class DegenerateData(MonitorError):
    pass


class MixedRequirementIds(MonitorError):
    pass


class Outcome(str, enum.Enum):
    SATISFIED = "Satisfied"
    VIOLATED = "Violated"
    NOT_APPLICABLE = "NotApplicable"


class Status(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    BY_DESIGN = "ByDesign"
    NEEDS_HUMAN_REVIEW = "NeedsHumanReview"
    INSUFFICIENT_DATA = "InsufficientData"


@dataclass(frozen=True)
class Evidence:
    t: float
    message: str
    event_index: Optional[int] = None


@dataclass(frozen=True)
class TrialResult:
    requirement_id: str
    trial_id: int
    outcome: Outcome
    evidence: tuple[Evidence, ...] = ()
    stratum: Optional[float] = None


@dataclass(frozen=True)
class Verdict:
    status: Status
    n_applicable: int = 0
    n_satisfied: int = 0
    point_estimate: Optional[float] = None
    ci_lower_95: Optional[float] = None
    detail: str = ""


# -- column view of a trace ----------------------------------------------------

_VECTOR_SIGNALS = {"velocity": "vel", "acceleration": "acc", "item_velocity": "item_vel"}
_SCALAR_SIGNALS = {"pressure": "pressure", "flow": "flow", "grip_force": "force",
                   "fingertip_displacement": "disp"}
MONITORED_SIGNALS = frozenset(_VECTOR_SIGNALS) | frozenset(_SCALAR_SIGNALS) | {"curvature"}


class TraceView:
    """Numpy columns over a trace's samples, plus the event positions the checks need."""

    def __init__(self, trace: Trace, name: Optional[str] = None):
        self.name = name
        self.meta = trace.trial_meta
        self.n_events = len(trace.events)
        self.t_end = trace.t_end
        idx, t, phase, rows = [], [], [], []
        current = None
        self.events: dict[int, TraceEvent] = {}
        self.first_event: dict[EventKind, int] = {}
        self.event_positions: dict[EventKind, list[int]] = {}
        for i, e in enumerate(trace.events):
            k = e.kind
            if k is EventKind.SAMPLE:
                idx.append(i)
                t.append(e.t)
                phase.append(current)
                rows.append(e.payload)
                continue
            self.events[i] = e
            self.first_event.setdefault(k, i)
            self.event_positions.setdefault(k, []).append(i)
            if k is EventKind.PHASE_START:
                current = e.payload["phase"]
            elif k is EventKind.PHASE_END:
                current = None
        self.index = np.asarray(idx, dtype=np.int64)
        self.t = np.asarray(t, dtype=float)
        self.phase = np.asarray(phase, dtype=object)
        n = len(rows)
        self.pressure = np.fromiter((s.pressure_pa for s in rows), float, n)
        self.flow = np.fromiter((s.flow_m3s for s in rows), float, n)
        self.force = np.fromiter((s.grip_force_n for s in rows), float, n)
        self.disp = np.fromiter((s.fingertip_displacement_m for s in rows), float, n)
        self.curvature = _matrix([s.curvature_per_m for s in rows])
        self.vel = np.asarray([s.gripper_velocity_mps for s in rows], dtype=float).reshape(n, 3)
        self.acc = np.asarray([s.gripper_acceleration_mps2 for s in rows], dtype=float).reshape(n, 3)
        self.item_pos = np.asarray([s.item_position_m for s in rows], dtype=float).reshape(n, 3)
        self.item_vel = np.asarray([s.item_velocity_mps for s in rows], dtype=float).reshape(n, 3)
        n_parts = len(self.meta.body_parts)
        self.bodies = np.asarray([s.gripper_body_positions_m for s in rows], dtype=float).reshape(n, n_parts, 3)

    def __len__(self) -> int:
        return len(self.t)

    def first(self, kind: EventKind) -> Optional[int]:
        return self.first_event.get(kind)

    def positions(self, kind: EventKind) -> list[int]:
        return self.event_positions.get(kind, [])

    def event(self, i: int) -> TraceEvent:
        return self.events[i]

    def values(self, signal: str) -> np.ndarray:
        """(n, m) matrix of a signal; every column is checked."""
        if signal in _SCALAR_SIGNALS:
            return getattr(self, _SCALAR_SIGNALS[signal])[:, None]
        if signal in _VECTOR_SIGNALS:
            return np.linalg.norm(getattr(self, _VECTOR_SIGNALS[signal]), axis=1)[:, None]
        if signal == "curvature":
            return self.curvature
        raise MissingSignal(f"signal {signal!r} is not recorded in traces")

    def phase_mask(self, phases: Sequence[str]) -> np.ndarray:
        if not phases:
            return np.ones(len(self), dtype=bool)
        mask = np.zeros(len(self), dtype=bool)
        for ph in phases:
            mask |= (self.flow > 0) if ph == INFLATION else (self.phase == ph)
        return mask

    def before(self, event_index: Optional[int]) -> np.ndarray:
        if event_index is None:
            return np.ones(len(self), dtype=bool)
        return self.index < event_index


def as_view(trace) -> TraceView:
    return trace if isinstance(trace, TraceView) else TraceView(trace)


def _matrix(rows: list) -> np.ndarray:
    width = max((len(r) for r in rows), default=1)
    if any(len(r) != width for r in rows):
        rows = [tuple(r) + (math.nan,) * (width - len(r)) for r in rows]
    return np.asarray(rows, dtype=float).reshape(len(rows), width)


# -- helpers -------------------------------------------------------------------

def item_matches(req: Requirement, meta) -> bool:
    app = req.applicability
    item = meta.item
    selectors = [s for s in app.items if s != ORIENTATION_SELECTOR]
    if selectors:
        keys = {item.item_class.value, item.shape.value, item.name}
        if item.profile:
            keys.add(f"{item.item_class.value}/{item.profile}")
        if not keys.intersection(selectors):
            return False
    if app.width_max is not None:
        ratio = meta.size_ratio
        if ratio is None or ratio > app.width_max.value:
            return False
    return True


def stratified(req: Requirement) -> bool:
    return ORIENTATION_SELECTOR in req.applicability.items


def _si(q: Optional[Quantity], reference: float) -> Optional[float]:
    if q is None:
        return None
    return q.value * reference if q.unit == DIMENSIONLESS else q.value


def band(b: SignalBound, reference: float = 1.0) -> tuple[float, float]:
    """Accepted [lo, hi] for a bound; ``within`` widens it by a relative tolerance."""
    lo = _si(b.lo, reference)
    hi = _si(b.hi, reference)
    lo = -math.inf if lo is None else lo
    hi = math.inf if hi is None else hi
    if b.tolerance is not None:
        tol = b.tolerance.value
        if math.isfinite(lo):
            lo -= tol * abs(lo)
        if math.isfinite(hi):
            hi += tol * abs(hi)
    return lo, hi


def _fmt(x: float) -> str:
    return f"{x:.6g}"


class _Trial:
    """Per-trial result builder."""

    def __init__(self, req: Requirement, view: TraceView):
        self.req = req
        self.view = view
        meta = view.meta
        self.trial_id = meta.trial_id
        self.stratum = meta.orientation_rad if stratified(req) else None

    def result(self, outcome: Outcome, *evidence: Evidence) -> TrialResult:
        return TrialResult(self.req.id, self.trial_id, outcome, tuple(evidence), self.stratum)

    def na(self, why: str) -> TrialResult:
        return self.result(Outcome.NOT_APPLICABLE, Evidence(self.view.t_end, why))

    def ok(self) -> TrialResult:
        return self.result(Outcome.SATISFIED)

    def bad(self, t: float, message: str, event_index: Optional[int]) -> TrialResult:
        return self.result(Outcome.VIOLATED, Evidence(t, message, event_index))

    def bad_sample(self, pos: int, message: str) -> TrialResult:
        v = self.view
        return self.bad(float(v.t[pos]), message, int(v.index[pos]))


def _first_out_of_band(view: TraceView, mask: np.ndarray, b: SignalBound,
                       reference: float = 1.0) -> Optional[tuple[int, float, tuple[float, float]]]:
    values = view.values(b.signal)
    lo, hi = band(b, reference)
    bad = mask & np.any((values < lo) | (values > hi) | np.isnan(values), axis=1)
    if not bad.any():
        return None
    pos = int(np.argmax(bad))
    row = values[pos]
    worst = row[np.argmax(np.maximum(lo - row, row - hi))]
    return pos, float(worst), (lo, hi)


# -- per-kind checks -----------------------------------------------------------

def _check_bounds(tr: _Trial) -> TrialResult:
    """Range and threshold: every applicable sample within every bound."""
    req, view = tr.req, tr.view
    mask = view.phase_mask(req.applicability.phases)
    if not mask.any():
        return tr.na("no samples in the applicable phases")
    earliest = None
    for b in req.params.bounds:
        if not b.bounded:
            continue
        reference = float(np.nanmax(np.abs(view.values(b.signal)))) if _relative(b) else 1.0
        hit = _first_out_of_band(view, mask, b, reference)
        if hit is not None and (earliest is None or hit[0] < earliest[0]):
            pos, value, (lo, hi) = hit
            earliest = (pos, f"{b.signal} = {_fmt(value)} outside [{_fmt(lo)}, {_fmt(hi)}]")
    if req.statistical and req.kind is Kind.THRESHOLD:
        # a statistical envelope is also broken by losing the item inside it
        for i in view.positions(EventKind.ITEM_DROPPED):
            ph = view.event(i).payload.get("phase")
            if not req.applicability.phases or ph in req.applicability.phases:
                before = view.index < i
                pos = int(np.count_nonzero(before))
                if earliest is None or pos <= earliest[0]:
                    return tr.bad(view.event(i).t, f"item dropped during {ph}", i)
    if earliest is not None:
        return tr.bad_sample(*earliest)
    return tr.ok()


def _relative(b: SignalBound) -> bool:
    return any(q is not None and q.unit == DIMENSIONLESS for q in (b.lo, b.hi))


def _check_event_response(tr: _Trial) -> TrialResult:
    req, view = tr.req, tr.view
    p = req.params
    trigger = EventKind(p.trigger)
    triggers = view.positions(trigger)
    if not triggers:
        return tr.na(f"no {p.trigger} event")
    window = p.window.value
    checked = 0
    for i in triggers:
        t0 = view.event(i).t
        after = view.index > i
        inwin = after & (view.t <= t0 + window + TIME_TOLERANCE_S)
        if not inwin.any() or view.t[inwin][-1] < t0 + window - TIME_TOLERANCE_S:
            continue  # trace ends before the response window closes
        checked += 1
        for b in p.bounds:
            if not b.bounded:
                continue
            values = view.values(b.signal)
            prior = view.index < i
            # the state at the trigger is the last sample before it
            start = values[np.flatnonzero(prior)[-1]] if prior.any() else values[int(np.argmax(after))]
            last = values[np.flatnonzero(inwin)[-1]]
            if trigger is EventKind.PUMP_ON:
                response = values[inwin].max(axis=0) - start
                lo, hi = band(b)
                worst = float(response.min())
                if worst <= 0 or worst < lo or float(response.max()) > hi:
                    return tr.bad(t0 + window, f"{b.signal} rose by {_fmt(worst)} within "
                                  f"{_fmt(window)} s of {p.trigger}", i)
            else:
                peak = float(np.nanmax(values[prior])) if prior.any() else 0.0
                lo, hi = band(b, peak)
                if np.any((last < lo) | (last > hi)):
                    return tr.bad(t0 + window, f"{b.signal} = {_fmt(float(last.max()))} {_fmt(window)} s "
                                  f"after {p.trigger}, limit {_fmt(hi)}", i)
    if not checked:
        return tr.na(f"trace ends inside every {p.trigger} response window")
    return tr.ok()


def _check_hold(tr: _Trial) -> TrialResult:
    view = tr.view
    grasp = view.first(EventKind.GRASP_ESTABLISHED)
    if grasp is None:
        return tr.bad(view.t_end, "item never grasped", None)
    t_grasp = view.event(grasp).t
    duration = tr.req.params.duration.value
    drop = view.first(EventKind.ITEM_DROPPED)
    if drop is not None:
        held = view.event(drop).t - t_grasp
        if held < duration - TIME_TOLERANCE_S:
            return tr.bad(view.event(drop).t, f"item dropped after {_fmt(held)} s of hold", drop)
    return tr.ok()


def outcome_happened(view: TraceView, outcome: str) -> tuple[bool, Optional[int]]:
    kind = {"placed": EventKind.ITEM_PLACED, "grasped": EventKind.GRASP_ESTABLISHED,
            "undamaged": EventKind.ITEM_DAMAGED, "dropped": EventKind.ITEM_DROPPED,
            "damaged": EventKind.ITEM_DAMAGED}[outcome]
    i = view.first(kind)
    return i is not None, i


# Outcomes counted as success when they happen; the rest succeed when they do not.
POSITIVE_OUTCOMES = frozenset({"placed", "grasped"})


def _check_success(tr: _Trial) -> TrialResult:
    req, view = tr.req, tr.view
    mask = view.phase_mask(req.applicability.phases)
    for b in req.params.bounds:
        if b.bounded and _first_out_of_band(view, mask, b) is not None:
            return tr.na(f"{b.signal} outside its operating condition")
    outcome = req.params.outcome
    happened, i = outcome_happened(view, outcome)
    if outcome in POSITIVE_OUTCOMES:
        if happened:
            return tr.ok()
        return tr.bad(view.t_end, f"trial ended without {outcome}", None)
    if happened:
        return tr.bad(view.event(i).t, f"item {outcome.replace('un', '')}", i)
    return tr.ok()


def _check_trend_trial(tr: _Trial) -> TrialResult:
    view = tr.view
    hours = view.meta.operating_hours
    if window_of(tr.req, hours) is None:
        return tr.na(f"{_fmt(hours)} h is outside both trend windows")
    happened, i = outcome_happened(view, tr.req.params.outcome)
    if happened:
        return tr.bad(view.event(i).t, f"item {tr.req.params.outcome}", i)
    return tr.ok()


def window_of(req: Requirement, hours: float) -> Optional[int]:
    for w, (lo, hi) in enumerate(req.params.windows):
        if lo.value / SECONDS_PER_HOUR <= hours <= hi.value / SECONDS_PER_HOUR:
            return w
    return None


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    max_rel_residual: float
    n: int


def fit_proportionality(trace, signal: str = "curvature") -> LinearFit:
    """Least-squares line of ``signal`` against pressure over the free inflation.

    Uses samples with flow > 0 taken before the first contact. Raises
    :class:`DegenerateData` with fewer than two distinct pressures.
    """
    view = as_view(trace)
    mask = (view.flow > 0) & view.before(view.first(EventKind.CONTACT_MADE))
    p = view.pressure[mask]
    y = view.values(signal)[mask]
    if len(np.unique(p)) < 2:
        raise DegenerateData("fewer than two distinct pressures before contact")
    x = np.repeat(p, y.shape[1])
    y = y.reshape(-1)
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    scale = float(np.max(np.abs(y)))
    resid = np.abs(y - (slope * x + intercept))
    rel = float(resid.max() / scale) if scale > 0 else float(resid.max())
    return LinearFit(float(slope), float(intercept), rel, int(mask.sum()))


def full_inflation_pressure(view: TraceView) -> float:
    for i in view.positions(EventKind.PUMP_ON):
        p = view.event(i).payload.get("commanded_pressure_pa")
        if isinstance(p, (int, float)) and not isinstance(p, bool):
            return float(p)
    return float(view.pressure.max()) if len(view) else 0.0


def _check_proportionality(tr: _Trial) -> TrialResult:
    req, view = tr.req, tr.view
    results = []
    for b in req.params.bounds:
        try:
            fit = fit_proportionality(view, b.signal)
        except DegenerateData as e:
            return tr.na(str(e))
        t = float(view.t[-1])
        if b.bounded:
            p_full = full_inflation_pressure(view)
            predicted = fit.slope * p_full + fit.intercept
            lo, hi = band(b)
            if not lo <= predicted <= hi:
                results.append((t, f"fitted {b.signal} {_fmt(predicted)} at {_fmt(p_full)} Pa "
                                   f"outside [{_fmt(lo)}, {_fmt(hi)}]"))
        elif b.tolerance is not None and fit.max_rel_residual > b.tolerance.value:
            results.append((t, f"{b.signal} departs from a line by {_fmt(fit.max_rel_residual)} "
                               f"(limit {_fmt(b.tolerance.value)})"))
    if results:
        return tr.bad(results[0][0], results[0][1], None)
    return tr.ok()


def _distances(view: TraceView) -> np.ndarray:
    """(n, parts) distance from each body point to the item's bounding sphere."""
    r = view.meta.item.width_m / 2.0
    return np.linalg.norm(view.bodies - view.item_pos[:, None, :], axis=2) - r


def _check_no_collision(tr: _Trial) -> TrialResult:
    view = tr.view
    contact = view.first(EventKind.CONTACT_MADE)
    for b in tr.req.params.bounds:
        if b.signal == "collision":
            hits = view.positions(EventKind.COLLISION)
            if hits:
                i = hits[0]
                return tr.bad(view.event(i).t, f"collision at {view.event(i).payload.get('part')}", i)
        elif b.signal == "contact_part":
            for i in sorted(view.positions(EventKind.CONTACT_MADE) + view.positions(EventKind.COLLISION)):
                e = view.event(i)
                part = str(e.payload.get("part", ""))
                if e.kind is EventKind.COLLISION or not part.startswith("finger"):
                    return tr.bad(e.t, f"{e.kind.value} at non-finger part {part!r}"
                                  if not part.startswith("finger") else f"collision at {part}", i)
        elif b.signal == "body_position":
            if not len(view):
                return tr.na("no samples")
            d = _distances(view)
            fingers = np.array([p.startswith("finger") for p in view.meta.body_parts])
            touching = d <= TOUCH_TOLERANCE_M
            pre = view.before(contact)[:, None]
            bad = touching & (~fingers[None, :] | pre)
            rows = np.flatnonzero(bad.any(axis=1))
            if len(rows):
                pos = int(rows[0])
                part = view.meta.body_parts[int(np.argmax(bad[pos]))]
                return tr.bad_sample(pos, f"{part} reaches the item (distance {_fmt(float(d[pos].min()))} m)")
        else:
            if b.signal not in MONITORED_SIGNALS:
                raise MissingSignal(f"{tr.req.id}: signal {b.signal!r} is not recorded in traces")
            mask = view.before(contact)
            if not mask.any():
                return tr.na("no samples before contact")
            hit = _first_out_of_band(view, mask, b)
            if hit is not None:
                pos, value, (lo, hi) = hit
                return tr.bad_sample(pos, f"{b.signal} = {_fmt(value)} before contact, "
                                          f"outside [{_fmt(lo)}, {_fmt(hi)}]")
    return tr.ok()


_CHECKS = {
    Kind.RANGE: _check_bounds,
    Kind.THRESHOLD: _check_bounds,
    Kind.EVENT_RESPONSE: _check_event_response,
    Kind.HOLD_DURATION: _check_hold,
    Kind.SUCCESS_RATE: _check_success,
    Kind.TREND: _check_trend_trial,
    Kind.PROPORTIONALITY: _check_proportionality,
    Kind.NO_COLLISION: _check_no_collision,
}

_NON_SIGNAL = frozenset({"collision", "contact_part", "body_position", "placed", "grasped",
                         "undamaged", "dropped", "damaged"})


def check_trial(req: Requirement, trace) -> TrialResult:
    """Outcome of one requirement on one trace (a :class:`Trace` or :class:`TraceView`)."""
    view = as_view(trace)
    tr = _Trial(req, view)
    if req.kind is Kind.MANUAL:
        return tr.na("manual requirement")
    check = _CHECKS.get(req.kind)
    if check is None:
        raise UnsupportedKind(f"{req.id}: no monitor for kind {req.kind.value}")
    for b in req.params.bounds:
        if b.signal not in MONITORED_SIGNALS and b.signal not in _NON_SIGNAL:
            raise MissingSignal(f"{req.id}: signal {b.signal!r} is not recorded in traces")
    if not item_matches(req, view.meta):
        return tr.na(f"item {view.meta.item.name} outside the requirement's item scope")
    return check(tr)


# -- verdicts ------------------------------------------------------------------

def _same_id(req: Requirement, results: Iterable[TrialResult]) -> list[TrialResult]:
    results = list(results)
    other = {r.requirement_id for r in results} - {req.id}
    if other:
        raise MixedRequirementIds(f"results for {sorted(other)} passed with {req.id}")
    return results


def aggregate(req: Requirement, results: Iterable[TrialResult], n_min: int = DEFAULT_N_MIN,
              by_design_declared: bool = False) -> Verdict:
    """Fold per-trial outcomes into a verdict.

    Statistical requirements (those with a fraction) pass when at least
    ``n_min`` trials apply and the success rate reaches the fraction; stratified
    ones need that in every stratum. The others pass when nothing is violated.
    """
    results = _same_id(req, results)
    if req.kind is Kind.MANUAL:
        return Verdict(Status.NEEDS_HUMAN_REVIEW, detail="requires human review")
    if req.kind is Kind.TREND:
        raise UnsupportedKind(f"{req.id}: trend requirements are aggregated with check_trend")
    applicable = [r for r in results if r.outcome is not Outcome.NOT_APPLICABLE]
    n = len(applicable)
    k = sum(r.outcome is Outcome.SATISFIED for r in applicable)
    if n == 0:
        return Verdict(Status.INSUFFICIENT_DATA, detail="no applicable trials")
    estimate = k / n
    lower = clopper_pearson_lower(k, n)
    if not req.statistical:
        if k < n:
            return Verdict(Status.FAIL, n, k, estimate, lower, f"{n - k} of {n} trials violated")
        if req.by_design and by_design_declared:
            return Verdict(Status.BY_DESIGN, n, k, estimate, lower,
                           "guaranteed by construction; no violation observed")
        return Verdict(Status.PASS, n, k, estimate, lower, f"all {n} trials satisfied")
    bound = req.params.fraction.value
    strata: dict = {}
    if stratified(req):
        for r in applicable:
            strata.setdefault(r.stratum, []).append(r)
    else:
        strata[None] = applicable
    notes = []
    status = Status.PASS
    for key in sorted(strata, key=lambda s: (s is None, s)):
        group = strata[key]
        gn = len(group)
        gk = sum(r.outcome is Outcome.SATISFIED for r in group)
        label = "" if key is None else f"orientation {_fmt(key)} rad: "
        if gn < n_min:
            if status is Status.PASS:
                status = Status.INSUFFICIENT_DATA
            notes.append(f"{label}{gn} < {n_min} trials")
        elif gk / gn < bound:
            status = Status.FAIL
            notes.append(f"{label}{gk}/{gn} = {_fmt(gk / gn)} < {_fmt(bound)}")
        else:
            notes.append(f"{label}{gk}/{gn} = {_fmt(gk / gn)} >= {_fmt(bound)}")
    return Verdict(status, n, k, estimate, lower, "; ".join(notes))


@dataclass(frozen=True)
class TrendSummary:
    baseline_n: int
    baseline_events: int
    final_n: int
    final_events: int

    @property
    def baseline_rate(self) -> float:
        return self.baseline_events / self.baseline_n if self.baseline_n else math.nan

    @property
    def final_rate(self) -> float:
        return self.final_events / self.final_n if self.final_n else math.nan

    @property
    def increase(self) -> float:
        return self.final_rate - self.baseline_rate


def check_trend(req: Requirement, traces: Sequence, n_min: int = DEFAULT_N_MIN,
                results: Optional[Sequence[TrialResult]] = None) -> tuple[Verdict, TrendSummary]:
    """Compare the outcome rate in the final hour window with the baseline window.

    The bound is an absolute increase in rate. Each window needs ``n_min / 2`` trials.
    """
    if req.kind is not Kind.TREND:
        raise UnsupportedKind(f"{req.id} is not a trend requirement")
    counts = [[0, 0], [0, 0]]
    if results is None:
        results = [check_trial(req, t) for t in traces]
    for trace, res in zip(traces, _same_id(req, results)):
        if res.outcome is Outcome.NOT_APPLICABLE:
            continue
        meta = trace.trial_meta if isinstance(trace, Trace) else trace.meta
        w = window_of(req, meta.operating_hours)
        counts[w][0] += 1
        counts[w][1] += res.outcome is Outcome.VIOLATED
    summary = TrendSummary(counts[0][0], counts[0][1], counts[1][0], counts[1][1])
    limit = next(_si(b.hi, 1.0) for b in req.params.bounds if b.hi is not None)
    need = math.ceil(n_min / 2)
    if summary.baseline_n < need or summary.final_n < need:
        return Verdict(Status.INSUFFICIENT_DATA, summary.baseline_n + summary.final_n,
                       detail=f"windows hold {summary.baseline_n} and {summary.final_n} trials, "
                              f"need {need} each"), summary
    inc = summary.increase
    detail = (f"{req.params.outcome} rate {_fmt(summary.baseline_rate)} -> {_fmt(summary.final_rate)}, "
              f"increase {_fmt(inc)} (limit {_fmt(limit)})")
    n = summary.baseline_n + summary.final_n
    k = n - summary.baseline_events - summary.final_events
    status = Status.PASS if inc <= limit + 1e-12 else Status.FAIL
    return Verdict(status, n, k, inc, None, detail), summary


@dataclass(frozen=True)
class RequirementResult:
    requirement: Requirement
    verdict: Verdict
    trials: tuple[TrialResult, ...] = field(default=(), repr=False)


def evaluate(doc: SpecificationDoc, traces: Iterable, n_min: int = DEFAULT_N_MIN) -> list[RequirementResult]:
    """Evaluate every requirement of ``doc`` over ``traces`` (in document order).

    ``traces`` may mix :class:`Trace` and :class:`TraceView`; each trace is
    reduced to a view as it is consumed, so generators keep memory bounded.
    """
    views = [as_view(t) for t in traces]
    pinned = bool(views) and all(v.meta.item_velocity_pinned for v in views)
    out = []
    for req in doc.requirements:
        results = tuple(check_trial(req, v) for v in views)
        if req.kind is Kind.TREND:
            verdict, _ = check_trend(req, views, n_min, results)
        else:
            verdict = aggregate(req, results, n_min, by_design_declared=pinned)
        out.append(RequirementResult(req, verdict, results))
    return out
