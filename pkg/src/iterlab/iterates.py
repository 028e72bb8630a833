"""Iterate norm tables, weighted semi-norms, and class-membership checks.

For a system P = (P_1, ..., P_N) and a test function u, the table holds
log ||P^beta u||_{L2(K)} for every iterate index beta with |beta| <= B_max,
built shell by shell so each entry reuses its predecessor through the
semigroup law.  The weighted semi-norm at level lam discounts shell l by
lam * phi*(l m / lam); its supremum over beta is certified finite only
through a plateau criterion (the trailing shells of the discounted
sequence must be strictly decreasing), so membership verdicts are always
one of member / non-member / inconclusive, never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .functions import Box, TestFunction, apply_operator, l2_norm_on_box
from .growth import GrowthFit, SamplingPlan, estimate_gamma
from .polynomials import OperatorSystem, multi_indices
from .weights import WeightFunction, rescale_weight

NEG_INF = float("-inf")

BEURLING_LADDER = (0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
ROUMIEU_LADDER = tuple(1.0 / l for l in range(1, 9))


def default_b_max(system_size: int) -> int:
    """Table depth keeping desk-scale runtime: 30 for N=1, 15 for N=2, ..."""
    return max(4, 30 // system_size)


@dataclass(frozen=True)
class NormTable:
    """log L2(K) norms of all iterates P^beta u with |beta| <= b_max."""

    entries: dict[tuple[int, ...], float]
    system_order: int
    system_size: int
    b_max: int
    box: Box
    function: dict = field(default_factory=dict)

    def shell_maxima(self) -> list[float]:
        out = []
        for total in range(self.b_max + 1):
            vals = [self.entries[b] for b in multi_indices(self.system_size, total)]
            out.append(max(vals))
        return out

    def to_csv(self) -> str:
        header = ",".join(f"beta_{j + 1}" for j in range(self.system_size))
        lines = [header + ",log_norm"]
        for beta in sorted(self.entries):
            lines.append(",".join(str(k) for k in beta) + "," +
                         repr(self.entries[beta]))
        return "\n".join(lines) + "\n"


def iterate_norm_table(system: OperatorSystem, u: TestFunction, box: Box,
                       b_max: int | None = None, check: bool = False) -> NormTable:
    """All iterate norms up to total order b_max, reusing previous shells."""
    if b_max is None:
        b_max = default_b_max(system.size)
    if b_max < 1:
        raise ValueError("b_max must be at least 1")
    N = system.size
    entries: dict[tuple[int, ...], float] = {}
    prev = {(0,) * N: u}
    entries[(0,) * N] = l2_norm_on_box(u, box, check)
    for total in range(1, b_max + 1):
        cur: dict[tuple[int, ...], TestFunction] = {}
        for beta in multi_indices(N, total):
            j = next(i for i, k in enumerate(beta) if k > 0)
            pred = tuple(k - (1 if i == j else 0) for i, k in enumerate(beta))
            f = apply_operator(system.polys[j], prev[pred])
            cur[beta] = f
            entries[beta] = l2_norm_on_box(f, box, check)
        prev = cur
    return NormTable(entries=entries, system_order=system.order, system_size=N,
                     b_max=b_max, box=box, function=u.describe())


# ---------------------------------------------------------------------------
# discounted sups


def _discounted_shells(table: NormTable, w: WeightFunction, lam: float) -> list[float]:
    m = table.system_order
    shells = table.shell_maxima()
    return [s if s == NEG_INF else s - lam * w.conjugate(total * m / lam)
            for total, s in enumerate(shells)]


def _tail(values: list[float]) -> list[float]:
    k = max(2, math.ceil(0.2 * len(values)))
    return values[-k - 1:]


def _tail_status(disc: list[float]) -> str:
    """'finite' when the trailing discounted shells strictly decrease,
    'infinite' when they strictly increase with real growth, else 'unsettled'."""
    if all(v == NEG_INF for v in disc):
        return "finite"
    tail = _tail(disc)
    if any(v == NEG_INF for v in tail):
        finite_tail = [v for v in tail if v != NEG_INF]
        return "finite" if finite_tail and finite_tail[-1] <= max(disc) else "unsettled"
    diffs = [b - a for a, b in zip(tail, tail[1:])]
    if all(d < 0 for d in diffs):
        return "finite"
    if all(d > 0 for d in diffs) and (tail[-1] - tail[0]) > 1.0:
        return "infinite"
    return "unsettled"


@dataclass(frozen=True)
class SeminormResult:
    """sup_beta of log||P^beta u|| - lam phi*(|beta| m / lam), log domain."""

    log_value: float
    lam: float
    argmax_total: int
    plateau: bool
    status: str             # "finite" | "infinite" | "unsettled"
    hint: str = ""

    def as_dict(self) -> dict:
        return {"log_value": self.log_value, "lam": self.lam,
                "argmax_total": self.argmax_total, "plateau": self.plateau,
                "status": self.status, "hint": self.hint}


def seminorm(table: NormTable, w: WeightFunction, lam: float) -> SeminormResult:
    if lam <= 0:
        raise ValueError("lam must be positive")
    disc = _discounted_shells(table, w, lam)
    status = _tail_status(disc)
    best = max(disc)
    arg = disc.index(best)
    plateau = status == "finite"
    hint = "" if plateau else \
        f"discounted shells not decreasing by b_max={table.b_max}; raise b_max"
    return SeminormResult(log_value=best, lam=lam, argmax_total=arg,
                          plateau=plateau, status=status, hint=hint)


def seminorm_of(system: OperatorSystem, u: TestFunction, box: Box, lam: float,
                w: WeightFunction, b_max: int | None = None) -> SeminormResult:
    return seminorm(iterate_norm_table(system, u, box, b_max), w, lam)


# ---------------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class MembershipReport:
    """Ladder-of-lam verdict for one (function, system, weight, mode) triple.

    mode 'beurling' demands a finite discounted sup at every ladder level;
    'roumieu' at one level.  boundary_lam is the largest level that looked
    finite (the empirical boundary of membership).
    """

    verdict: str                    # "member" | "non_member" | "inconclusive"
    mode: str
    per_lam: dict[float, str]
    boundary_lam: float | None
    detail: str = ""

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "mode": self.mode,
                "per_lam": {repr(k): v for k, v in sorted(self.per_lam.items())},
                "boundary_lam": self.boundary_lam, "detail": self.detail}


def classify_membership(table: NormTable, w: WeightFunction, m: int,
                        mode: str = "beurling") -> MembershipReport:
    mode = mode.lower()
    if mode not in ("beurling", "roumieu"):
        raise ValueError("mode must be 'beurling' or 'roumieu'")
    if m != table.system_order:
        raise ValueError("order m must match the table's system order")
    ladder = BEURLING_LADDER if mode == "beurling" else ROUMIEU_LADDER
    per_lam: dict[float, str] = {}
    for lam in ladder:
        per_lam[lam] = _tail_status(_discounted_shells(table, w, lam))
    statuses = list(per_lam.values())
    finite_lams = [lam for lam, s in per_lam.items() if s == "finite"]
    boundary = max(finite_lams) if finite_lams else None
    if mode == "beurling":
        if all(s == "finite" for s in statuses):
            verdict = "member"
        elif any(s == "infinite" for s in statuses):
            verdict = "non_member"
        else:
            verdict = "inconclusive"
    else:
        if any(s == "finite" for s in statuses):
            verdict = "member"
        elif all(s == "infinite" for s in statuses):
            verdict = "non_member"
        else:
            verdict = "inconclusive"
    detail = "" if verdict != "inconclusive" else \
        "no plateau at some ladder levels; raise b_max"
    return MembershipReport(verdict=verdict, mode=mode, per_lam=per_lam,
                            boundary_lam=boundary, detail=detail)


# ---------------------------------------------------------------------------
# end-to-end inclusion verification


@dataclass(frozen=True)
class InclusionReport:
    """Membership-preservation check between two iterate classes.

    Every test function placed in the source class by the classifier must
    land in the target class built from the rescaled weight; a member that
    fails to is flagged (numerical artifact diagnostics, not a refutation).
    """

    s: float
    h: float
    mode: str
    source_weight: dict
    target_weight: dict
    rows: tuple
    violations: int
    s_warning: str | None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {"s": self.s, "h": self.h, "mode": self.mode,
                "source_weight": self.source_weight,
                "target_weight": self.target_weight,
                "rows": list(self.rows), "violations": self.violations,
                "s_warning": self.s_warning, "ok": self.ok}


def verify_inclusion(source: OperatorSystem, target: OperatorSystem,
                     w: WeightFunction, s: float, h: float,
                     testset, box: Box, mode: str = "beurling",
                     b_max_source: int | None = None,
                     b_max_target: int | None = None,
                     gamma_source: GrowthFit | None = None,
                     plan: SamplingPlan | None = None) -> InclusionReport:
    """Check that membership in the source iterate class carries over to the
    target class with weight omega(t^(r/(s m h))), for s >= gamma/m and the
    weakness exponent h of the target under the source."""
    if s <= 0 or h <= 0:
        raise ValueError("s and h must be positive")
    m = source.order
    r = target.order
    if gamma_source is None:
        gamma_source = estimate_gamma(source, plan)
    if gamma_source.infinite:
        s_warning = "source system has no finite derivative-decay exponent"
    elif s < gamma_source.exponent / m - 1e-9:
        s_warning = (f"s={s} below estimated gamma/m="
                     f"{gamma_source.exponent / m:.4f}; inclusion not implied")
    else:
        s_warning = None
    w_source = rescale_weight(w, 1.0 / s)
    w_target = rescale_weight(w, r / (s * m * h))
    rows = []
    violations = 0
    for u in testset:
        table_s = iterate_norm_table(source, u, box, b_max_source)
        table_t = iterate_norm_table(target, u, box, b_max_target)
        verdict_s = classify_membership(table_s, w_source, m, mode)
        verdict_t = classify_membership(table_t, w_target, r, mode)
        flagged = verdict_s.verdict == "member" and verdict_t.verdict != "member"
        if flagged:
            violations += 1
        rows.append({
            "function": u.describe(),
            "source_verdict": verdict_s.verdict,
            "target_verdict": verdict_t.verdict,
            "source_boundary_lam": verdict_s.boundary_lam,
            "target_boundary_lam": verdict_t.boundary_lam,
            "flagged": flagged,
        })
    return InclusionReport(s=s, h=h, mode=mode.lower(),
                           source_weight=w_source.describe(),
                           target_weight=w_target.describe(),
                           rows=tuple(rows), violations=violations,
                           s_warning=s_warning)
