"""Parameter arithmetic and the end-to-end counterexample check.

Points are parametrized by ``(s, delta)``: ``r = C(s+1, 2) + delta`` and
``gamma = r + s + 2``.  The Gale dual configuration lives in ``P^s``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt

from . import exactfield as ef
from .betti import BettiTable, betti_table, betti_via_duality
from .bgg import build_F_mu_direct, max_irredundant_quotient_generation
from .points import (GaleUndefinedError, GenerationError, build_mu, gale_transform,
                     hilbert_function, ideal_piece, is_lgp, quotient_module_presentation,
                     random_config)

CONFIRMED = "CONFIRMED"
NOT_CONFIRMED = "NOT_CONFIRMED"


class ParameterError(ValueError):
    pass


def hilbert_numerator(r: int, gamma: int) -> list[int]:
    """b_0..b_{r+2} with Σ b_j t^j / (1-t)^{r+1} = 1 + (r+1)t + γ t^2/(1-t)."""
    if gamma < r + 1:
        raise ParameterError(f"need gamma >= r + 1, got r={r}, gamma={gamma}")
    b = [0] * (r + 3)
    for k in range(r + 2):
        c = (-1) ** k * comb(r + 1, k)
        b[k] += c
        b[k + 1] += (r + 1) * c
    for k in range(r + 1):
        b[k + 2] += gamma * (-1) ** k * comb(r, k)
    return b


def expected_betti(r: int, gamma: int) -> BettiTable:
    """Betti table predicted for general points with Hilbert function (1, r+1, γ, γ, ...)."""
    b = hilbert_numerator(r, gamma)
    table = BettiTable(r)
    table.set(0, 0, 1, "expected")
    for j in range(2, r + 3):
        signed = (-1) ** j * b[j]
        table.set(j - 2, j, max(signed, 0), "expected")
        table.set(j - 1, j, max(-signed, 0), "expected")
    return table


def delta_bound(s: int) -> int:
    return comb(s, 2) - (1 if s <= 4 else 2)


@dataclass(frozen=True)
class MrcParameters:
    s: int
    delta: int

    def __post_init__(self):
        if self.s < 3:
            raise ParameterError(f"s must be at least 3, got {self.s}")
        if self.delta < 0:
            raise ParameterError(f"delta must be nonnegative, got {self.delta}")
        if self.delta > delta_bound(self.s):
            raise ParameterError(
                f"delta={self.delta} exceeds C(s,2) - {1 if self.s <= 4 else 2} = "
                f"{delta_bound(self.s)} for s={self.s}")

    @property
    def r(self) -> int:
        return comb(self.s + 1, 2) + self.delta

    @property
    def gamma(self) -> int:
        return self.r + self.s + 2

    @property
    def entry(self) -> tuple[int, int]:
        """The Betti position (r-s, r-s+2) where the conjecture fails."""
        return self.r - self.s, self.r - self.s + 2


def params_from_s_delta(s: int, delta: int) -> MrcParameters:
    return MrcParameters(s, delta)


def gamma_range(r: int) -> list[int]:
    """Integers γ with r+2+√(r+2) <= γ <= r+(3+√(8r+1))/2, plus 13 (r=8) and 21 (r=15)."""
    if r < 6 or r == 9:
        raise ParameterError(f"r={r} is outside the theorem (needs r >= 6, r != 9)")
    out = []
    for gamma in range(r + 2, r + 3 + isqrt(8 * r + 1)):
        lo = gamma - r - 2
        hi = 2 * (gamma - r) - 3
        if lo * lo >= r + 2 and (hi <= 0 or hi * hi <= 8 * r + 1):
            out.append(gamma)
    special = {8: 13, 15: 21}
    if r in special:
        out.append(special[r])
    return sorted(set(out))


def gamma_range_by_parameters(r: int) -> list[int]:
    """Same set, enumerated from the (s, delta) parametrization."""
    out = []
    s = 3
    while comb(s + 1, 2) <= r:
        delta = r - comb(s + 1, 2)
        if delta <= delta_bound(s):
            out.append(r + s + 2)
        s += 1
    return sorted(out)


def _defect_formula(s: int, delta: int) -> Fraction:
    r = comb(s + 1, 2) + delta
    return Fraction(2 * delta + 4 - s * s + s, s * s - s + 2 * delta + 4) * comb(r, s)


def defect_values(s: int, delta: int) -> tuple[int, int]:
    """(lower_bound, expected) without range checks on delta."""
    value = _defect_formula(s, delta)
    if value.denominator != 1:
        raise ArithmeticError(f"closed formula is not integral at s={s}, delta={delta}: {value}")
    return comb(s + delta, delta), max(int(value), 0)


def predicted_defect(s: int, delta: int) -> tuple[int, int]:
    MrcParameters(s, delta)
    return defect_values(s, delta)


@dataclass(frozen=True)
class ScanRow:
    s: int
    delta: int
    lower_bound: int
    expected: int

    @property
    def strict(self) -> bool:
        return self.lower_bound > self.expected

    @property
    def in_theorem(self) -> bool:
        return self.delta <= delta_bound(self.s)


def scan(s_max: int, delta_max=None) -> list[ScanRow]:
    """All (s, delta) with 3 <= s <= s_max and delta up to ``delta_max(s)``.

    The default reaches 2 s^2, well past the point where the expected value
    overtakes the lower bound.
    """
    delta_max = delta_max or (lambda s: 2 * s * s)
    rows = []
    for s in range(3, s_max + 1):
        for delta in range(0, delta_max(s) + 1):
            rows.append(ScanRow(s, delta, *defect_values(s, delta)))
    return rows


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    params: MrcParameters
    prime: int
    seed: int
    retries: int = 0
    hf: list[int] = field(default_factory=list)
    expected: int = 0
    lower_bound: int = 0
    computed: int = 0
    verdict: str = NOT_CONFIRMED
    millis: int = 0
    table: BettiTable | None = None

    def to_text(self, diagram: bool = True) -> str:
        pr = self.params
        lines = [
            f"s={pr.s}", f"delta={pr.delta}", f"r={pr.r}", f"gamma={pr.gamma}",
            f"prime={self.prime}", f"seed={self.seed}", f"retries={self.retries}",
            "hf=" + ",".join(str(h) for h in self.hf),
            f"expected={self.expected}", f"lower_bound={self.lower_bound}",
            f"computed={self.computed}", f"verdict={self.verdict}", f"millis={self.millis}",
        ]
        text = "\n".join(lines) + "\n"
        if diagram and self.table is not None:
            text += self.table.diagram()
        return text


class GenericityFailure(Exception):
    """An open condition failed for one random draw."""


def _draw(params: MrcParameters, p: int, seed: int, check):
    s, r, gamma = params.s, params.r, params.gamma
    gp = random_config(s, gamma, p, seed)
    if not gp.distinct() or not is_lgp(gp, check):
        raise GenericityFailure("Γ' is not in linearly general position")
    if ideal_piece(gp, 2).shape[1]:
        raise GenericityFailure("Γ' lies on a quadric")
    try:
        g = gale_transform(gp)
    except GaleUndefinedError as exc:
        raise GenericityFailure(str(exc)) from exc
    hf = [hilbert_function(g, d) for d in range(4)]
    if hf != [1, r + 1, gamma, gamma]:
        raise GenericityFailure(f"Γ has Hilbert function {hf}, not (1, {r + 1}, {gamma}, {gamma})")
    if not is_lgp(g, check):
        raise GenericityFailure("Γ is not in linearly general position")
    return gp, g, hf


def verify_counterexample(s: int, delta: int, p: int = ef.DEFAULT_PRIME, seed: int = 1, *,
                          check=None, full_table: bool = False,
                          retries: int = 16) -> VerificationReport:
    """Build general Γ via Gale duality and compare β_{r-s,r-s+2} with the prediction."""
    start = time.perf_counter()
    ef.check_prime(p)
    params = MrcParameters(s, delta)
    r, gamma = params.r, params.gamma
    lower, _ = predicted_defect(s, delta)
    i, j = params.entry
    expected = expected_betti(r, gamma)[(i, j)]
    failure = None
    for attempt, sd in enumerate(ef.derived_seeds(seed, retries)):
        try:
            gp, g, hf = _draw(params, p, sd, check)
            mu = build_mu(gp).tensor
            Fq = max_irredundant_quotient_generation(build_F_mu_direct(mu))
            if Fq.ranks[s] != lower:
                raise GenericityFailure(f"rank F'_s = {Fq.ranks[s]}, expected {lower}")
        except GenericityFailure as exc:
            failure = exc
            continue
        computed = betti_via_duality(g, i, j)
        report = VerificationReport(params, p, seed, attempt, hf, expected, lower, computed)
        report.verdict = CONFIRMED if computed >= lower > expected else NOT_CONFIRMED
        if full_table and r <= 8:
            M = quotient_module_presentation(g, (0, r + 2))
            report.table = betti_table(M, r + 1, r + 1)
        report.millis = int((time.perf_counter() - start) * 1000)
        return report
    raise GenerationError(f"all {retries} seeds from {seed} failed; last: {failure}")


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class CurveArithmetic:
    g: int
    d: int
    lower_bound_a: int
    alt_difference: int
    en_bound: int | None
    mrc_fails: bool | None
    mechanism: str | None

    def to_text(self) -> str:
        def show(x):
            if x is None:
                return "withheld"
            return str(x).lower() if isinstance(x, bool) else str(x)

        return (f"g={self.g} d={self.d} lower_bound={self.lower_bound_a} "
                f"alt_difference={self.alt_difference} en_bound={show(self.en_bound)} "
                f"mrc_fails={show(self.mrc_fails)} mechanism={show(self.mechanism)}\n")


def curve_arithmetic(g: int, d: int) -> CurveArithmetic:
    """Bounds for a general curve of genus g embedded by degree d."""
    if g < 2:
        raise ParameterError(f"genus must be at least 2, got g={g}")
    if d < 2 * g + 2:
        raise ParameterError(f"degree must be at least 2g+2={2 * g + 2}, got d={d}")
    lower = comb(d - 2 * g + 1, g - 1)
    alt = Fraction(d - g * g + g, d - 2 * g + 2) * comb(d - g - 1, g - 1)
    if alt.denominator != 1:
        raise ArithmeticError(f"difference not integral at g={g}, d={d}: {alt}")
    en = d - 2 * g + 1 if g >= 4 else None
    if 3 * g - 2 <= d <= g * g - g:
        fails, mech = True, "linear-strand"
    elif g >= 4 and d >= g * g - g + 1:
        fails, mech = True, "Eagon-Northcott"
    else:
        fails, mech = None, None
    return CurveArithmetic(g, d, lower, int(alt), en, fails, mech)
