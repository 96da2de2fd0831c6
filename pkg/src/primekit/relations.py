"""Certificate constructions: sums of small-prime products that force primality.

All three shapes share one engine: build R as a signed combination of terms
such that, for every prime C in the basis, exactly one term survives mod C
and that term is provably nonzero. Then any natural R in the window
(largest basis prime, next_prime**2 - 1] has no factor small enough to
exist, so it is prime. Acceptance is a value, never an error: parameters
that land outside the window (or break a divisibility constraint) come
back as rejected certificates with a reason.

Shapes:
  relation1            R = +-K * (product of all basis primes)
                           +- (product of powers of primes above the root)
  relation1-factorial  same with K * product replaced by k1 * floor(sqrt(a))!
  relation2            R = +-P1*k1 +- P2*k2 +- P1*P2*k3 over a two-set split
  relation3            R = sum over i of +-(product omitting prime i)*k_i,
                           plus +-(full product)*k_last
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product as iter_product
from math import factorial, isqrt, prod

from .errors import InvariantViolation, ResourceLimitError, ValidationError
from .oracle import PROVEN_COMPOSITE, OracleVerdict, PrimeBasis, is_prime, large_primes

RELATION1 = "relation1"
RELATION1_FACTORIAL = "relation1-factorial"
RELATION2 = "relation2"
RELATION3 = "relation3"
EXCLUSION_SIEVE = "exclusion-sieve"
BIG_SEARCH = "big-search"

CONSTRUCTIONS = (RELATION1, RELATION1_FACTORIAL, RELATION2, RELATION3)

DEFAULT_CANDIDATE_CAP = 2_000_000


class Parity(enum.Enum):
    """Sign selector: only (-1)**b matters, so store the parity of b."""

    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        return 1 if self is Parity.EVEN else -1

    @classmethod
    def from_int(cls, b: int) -> "Parity":
        if b < 0:
            raise ValidationError(f"parity exponent must be >= 0, got {b}")
        return cls.EVEN if b % 2 == 0 else cls.ODD

    @classmethod
    def parse(cls, text: str) -> "Parity":
        t = text.strip().lower()
        if t in ("even", "odd"):
            return cls(t)
        try:
            return cls.from_int(int(t))
        except ValueError:
            raise ValidationError(f"cannot read parity from {text!r}") from None

    def flipped(self) -> "Parity":
        return Parity.ODD if self is Parity.EVEN else Parity.EVEN


def _normalize_exponents(large_exponents) -> tuple[tuple[int, int], ...]:
    items = []
    for index, exponent in dict(large_exponents).items():
        if index < 1:
            raise ValidationError(f"large-prime indices start at 1, got {index}")
        if exponent < 0:
            raise ValidationError(f"exponents must be >= 0, got {exponent}")
        if exponent:
            items.append((int(index), int(exponent)))
    return tuple(sorted(items))


@dataclass(frozen=True)
class Relation1Params:
    """K times the full basis product, plus or minus a product of powers of
    the primes above the root (index 1 = next_prime)."""

    basis: PrimeBasis
    sign_small: Parity
    sign_large: Parity
    multiplier: int
    large_exponents: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.multiplier < 1:
            raise ValidationError(f"multiplier must be >= 1, got {self.multiplier}")
        object.__setattr__(self, "large_exponents", _normalize_exponents(self.large_exponents))

    def exponent_map(self) -> dict[int, int]:
        return dict(self.large_exponents)

    def to_json_dict(self) -> dict:
        return {
            "bound": str(self.basis.bound),
            "basis": [str(p) for p in self.basis.small_primes],
            "b1": self.sign_small.value,
            "b2": self.sign_large.value,
            "k": str(self.multiplier),
            "m": {str(i): e for i, e in self.large_exponents},
        }


@dataclass(frozen=True)
class Relation1FactorialParams:
    """Same window and large part as relation1, but the small part is
    k1 * d! with d = floor(sqrt(bound)); d! covers every basis prime."""

    basis: PrimeBasis
    sign_small: Parity
    sign_large: Parity
    k1: int
    large_exponents: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.k1 < 1:
            raise ValidationError(f"k1 must be >= 1, got {self.k1}")
        object.__setattr__(self, "large_exponents", _normalize_exponents(self.large_exponents))

    @property
    def d(self) -> int:
        return isqrt(self.basis.bound)

    def to_json_dict(self) -> dict:
        return {
            "bound": str(self.basis.bound),
            "d": self.d,
            "b1": self.sign_small.value,
            "b2": self.sign_large.value,
            "k1": str(self.k1),
            "m": {str(i): e for i, e in self.large_exponents},
        }


@dataclass(frozen=True)
class Relation2Params:
    """Two-set split of the basis: R = +-P1*k1 +- P2*k2 +- P1*P2*k3.

    k1 must avoid every prime in group2 and k2 every prime in group1;
    those checks live in eval_relation2 and reject rather than raise.
    """

    basis: PrimeBasis
    group1: tuple[int, ...]
    group2: tuple[int, ...]
    sign1: Parity
    sign2: Parity
    sign3: Parity
    k1: int
    k2: int
    k3: int = 0

    def __post_init__(self) -> None:
        g1, g2 = tuple(sorted(self.group1)), tuple(sorted(self.group2))
        object.__setattr__(self, "group1", g1)
        object.__setattr__(self, "group2", g2)
        if not g1 or not g2:
            raise ValidationError("both groups must be nonempty")
        if set(g1) & set(g2):
            raise ValidationError("groups must be disjoint")
        if set(g1) | set(g2) != set(self.basis.small_primes):
            raise ValidationError("groups must cover exactly the basis primes")
        if self.k1 < 1 or self.k2 < 1:
            raise ValidationError("k1 and k2 must be >= 1")
        if self.k3 < 0:
            raise ValidationError("k3 must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "bound": str(self.basis.bound),
            "s1": [str(p) for p in self.group1],
            "s2": [str(p) for p in self.group2],
            "b1": self.sign1.value,
            "b2": self.sign2.value,
            "b3": self.sign3.value,
            "k1": str(self.k1),
            "k2": str(self.k2),
            "k3": str(self.k3),
        }


@dataclass(frozen=True)
class Relation3Params:
    """One term per basis prime, each omitting exactly that prime, plus an
    optional full-product term. multipliers[i] pairs with signs[i]; the
    last entries belong to the full-product term and its k may be 0."""

    basis: PrimeBasis
    signs: tuple[Parity, ...]
    multipliers: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.basis.small_primes)
        if len(self.signs) != n + 1 or len(self.multipliers) != n + 1:
            raise ValidationError(
                f"need {n + 1} signs and multipliers for a {n}-prime basis"
            )
        if any(k < 1 for k in self.multipliers[:-1]):
            raise ValidationError("per-prime multipliers must be >= 1")
        if self.multipliers[-1] < 0:
            raise ValidationError("the full-product multiplier must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "bound": str(self.basis.bound),
            "basis": [str(p) for p in self.basis.small_primes],
            "b": [s.value for s in self.signs],
            "k": [str(k) for k in self.multipliers],
        }


@dataclass(frozen=True)
class CandidateCertificate:
    """Outcome of one construction: the computed value, whether it lies in
    the certifying window, and the independent oracle's verdict."""

    value: int
    construction: str
    params: object
    window: tuple[int, int]
    accepted: bool
    verdict: OracleVerdict
    signed_value: int
    reason: str | None = None

    def to_json_dict(self) -> dict:
        out = {
            "value": str(self.value),
            "construction": self.construction,
            "params": _params_jsonable(self.params),
            "window": {"low": str(self.window[0]), "high": str(self.window[1])},
            "accepted": self.accepted,
            "verdict": self.verdict.to_json_dict(),
        }
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def _params_jsonable(params) -> dict:
    if hasattr(params, "to_json_dict"):
        return params.to_json_dict()
    if isinstance(params, dict):
        return params
    raise TypeError(f"cannot serialize params of type {type(params)!r}")


def certificate_window(basis: PrimeBasis) -> tuple[int, int]:
    """(low, high]: coprimality to the basis proves primality inside it."""
    return basis.largest, basis.next_prime ** 2 - 1


def _judge(
    value: int, construction: str, params, window, reason_override=None, certified: bool = True
) -> CandidateCertificate:
    low, high = window
    reason = reason_override
    if reason is None:
        if value <= 0:
            reason = "not a natural number"
        elif value <= low:
            reason = f"at or below window low {low}"
        elif value > high:
            reason = f"above window high {high}"
    accepted = reason is None
    verdict = is_prime(abs(value))
    if certified and accepted and verdict.status == PROVEN_COMPOSITE:
        # the construction guarantees primality here; a refutation means the
        # implementation is wrong and must not pass silently
        raise InvariantViolation(
            f"{construction} accepted {value} inside {window} but it is composite"
            + (f" (factor {verdict.witness})" if verdict.witness else "")
        )
    return CandidateCertificate(
        value=abs(value),
        construction=construction,
        params=params,
        window=window,
        accepted=accepted,
        verdict=verdict,
        signed_value=value,
        reason=reason,
    )


def _extended_window(basis: PrimeBasis, exponents: tuple[tuple[int, int], ...], multiplier: int) -> tuple[int, int]:
    """Window for the relation1 family.

    The high end starts at next_prime**2 - 1 and walks up one prime at a
    time while the candidate stays provably coprime to that prime: its
    exponent must be nonzero (with the dense prefix descending) and the
    multiplier must not be divisible by it. Without the multiplier check
    the extension is unsound: basis {2}, K=3, exponents {1: 1} gives
    R = 2*3 + 3 = 9 inside the extended window.
    """
    low = basis.largest
    dense: list[int] = []
    if exponents:
        top = max(i for i, _ in exponents)
        emap = dict(exponents)
        dense = [emap.get(i, 0) for i in range(1, top + 1)]
    descending = all(dense[i] >= dense[i + 1] for i in range(len(dense) - 1))
    first_zero = len(dense) + 1 if descending else 1
    larges = large_primes(basis, first_zero)
    effective = 1
    for i in range(1, first_zero):
        if multiplier % larges[i - 1] == 0:
            break
        effective += 1
    return low, larges[effective - 1] ** 2 - 1


def _power_product(basis: PrimeBasis, exponents: tuple[tuple[int, int], ...]) -> int:
    if not exponents:
        return 1
    top = max(i for i, _ in exponents)
    larges = large_primes(basis, top)
    return prod(larges[i - 1] ** e for i, e in exponents)


def eval_relation1(params: Relation1Params) -> CandidateCertificate:
    small = prod(params.basis.small_primes)
    power = _power_product(params.basis, params.large_exponents)
    value = params.sign_small.sign * params.multiplier * small + params.sign_large.sign * power
    window = _extended_window(params.basis, params.large_exponents, params.multiplier)
    return _judge(value, RELATION1, params, window)


def eval_relation1_factorial(params: Relation1FactorialParams) -> CandidateCertificate:
    power = _power_product(params.basis, params.large_exponents)
    value = params.sign_small.sign * params.k1 * factorial(params.d) + params.sign_large.sign * power
    window = _extended_window(params.basis, params.large_exponents, params.k1)
    return _judge(value, RELATION1_FACTORIAL, params, window)


def _relation2_constraint_reason(params: Relation2Params) -> str | None:
    for p in params.group2:
        if params.k1 % p == 0:
            return f"constraint violation: k1 divisible by {p}"
    for p in params.group1:
        if params.k2 % p == 0:
            return f"constraint violation: k2 divisible by {p}"
    return None


def eval_relation2(params: Relation2Params, check_constraints: bool = True) -> CandidateCertificate:
    p1, p2 = prod(params.group1), prod(params.group2)
    value = (
        params.sign1.sign * p1 * params.k1
        + params.sign2.sign * p2 * params.k2
        + params.sign3.sign * p1 * p2 * params.k3
    )
    reason = _relation2_constraint_reason(params) if check_constraints else None
    return _judge(
        value, RELATION2, params, certificate_window(params.basis), reason,
        certified=check_constraints,
    )


def _relation3_constraint_reason(params: Relation3Params) -> str | None:
    for prime, k in zip(params.basis.small_primes, params.multipliers):
        if k % prime == 0:
            return f"constraint violation: multiplier for {prime} divisible by {prime}"
    return None


def eval_relation3(params: Relation3Params, check_constraints: bool = True) -> CandidateCertificate:
    primes = params.basis.small_primes
    full = prod(primes)
    value = 0
    for i, prime in enumerate(primes):
        value += params.signs[i].sign * (full // prime) * params.multipliers[i]
    value += params.signs[-1].sign * full * params.multipliers[-1]
    reason = _relation3_constraint_reason(params) if check_constraints else None
    return _judge(
        value, RELATION3, params, certificate_window(params.basis), reason,
        certified=check_constraints,
    )


def default_partition(basis: PrimeBasis) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Deterministic two-set split used when the caller does not supply one:
    alternate primes between the groups."""
    if len(basis.small_primes) < 2:
        raise ValidationError("relation2 needs at least two basis primes")
    return basis.small_primes[0::2], basis.small_primes[1::2]


def _coprime_multipliers(budget: int, primes: tuple[int, ...]) -> list[int]:
    return [k for k in range(1, budget + 1) if all(k % p for p in primes)]


def enumeration_grid_size(
    construction: str,
    basis: PrimeBasis,
    budget: int,
    exponent_slots: int = 2,
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None = None,
) -> int:
    """Exact number of parameter tuples enumerate_certified would evaluate."""
    if budget < 0:
        raise ValidationError("budget must be >= 0")
    if budget == 0:
        return 0
    if construction in (RELATION1, RELATION1_FACTORIAL):
        return 4 * budget * (budget + 1) ** exponent_slots
    if construction == RELATION2:
        group1, group2 = partition or default_partition(basis)
        k1s = len(_coprime_multipliers(budget, group2))
        k2s = len(_coprime_multipliers(budget, group1))
        return 8 * k1s * k2s * (budget + 1)
    if construction == RELATION3:
        size = 2 * (budget + 1)
        for prime in basis.small_primes:
            size *= 2 * len(_coprime_multipliers(budget, (prime,)))
        return size
    raise ValidationError(f"unknown construction {construction!r}")


def enumerate_certified(
    construction: str,
    basis: PrimeBasis,
    budget: int,
    exponent_slots: int = 2,
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None = None,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
    verbose: bool = False,
) -> list[CandidateCertificate]:
    """Evaluate the full bounded parameter grid and keep what is accepted.

    Signs range over both parities, multipliers over [1, budget] (the
    optional trailing multiplier over [0, budget]), exponents over
    [0, budget]; multipliers with a forbidden divisor are skipped since
    they can only reject. Returns accepted certificates deduplicated by
    value in ascending order, or the full accepted multiset in grid order
    when verbose is set.
    """
    size = enumeration_grid_size(construction, basis, budget, exponent_slots, partition)
    if size > candidate_cap:
        raise ResourceLimitError(
            f"{construction} grid has {size} candidates, over the cap of {candidate_cap}"
        )
    if size == 0:
        return []

    if construction in (RELATION1, RELATION1_FACTORIAL):
        certs = _enumerate_relation1(construction, basis, budget, exponent_slots)
    elif construction == RELATION2:
        certs = _enumerate_relation2(basis, budget, partition)
    else:
        certs = _enumerate_relation3(basis, budget)

    if verbose:
        return certs
    best: dict[int, CandidateCertificate] = {}
    for cert in certs:
        best.setdefault(cert.value, cert)
    return [best[v] for v in sorted(best)]


_PARITIES = (Parity.EVEN, Parity.ODD)


def _enumerate_relation1(
    construction: str, basis: PrimeBasis, budget: int, exponent_slots: int
) -> list[CandidateCertificate]:
    if construction == RELATION1_FACTORIAL:
        lead = factorial(isqrt(basis.bound))
    else:
        lead = prod(basis.small_primes)
    larges = large_primes(basis, exponent_slots + 1)
    squares = [p * p - 1 for p in larges]
    low = basis.largest
    out = []
    for exps in iter_product(range(budget + 1), repeat=exponent_slots):
        dense = list(exps)
        while dense and dense[-1] == 0:
            dense.pop()
        power = prod(p ** e for p, e in zip(larges, exps))
        descending = all(dense[i] >= dense[i + 1] for i in range(len(dense) - 1))
        first_zero = len(dense) + 1 if descending else 1
        exponents = tuple((i + 1, e) for i, e in enumerate(exps) if e)
        for sign_small, sign_large in iter_product(_PARITIES, _PARITIES):
            for k in range(1, budget + 1):
                effective = 1
                for i in range(1, first_zero):
                    if k % larges[i - 1] == 0:
                        break
                    effective += 1
                value = sign_small.sign * k * lead + sign_large.sign * power
                if low < value <= squares[effective - 1]:
                    if construction == RELATION1_FACTORIAL:
                        params: object = Relation1FactorialParams(
                            basis, sign_small, sign_large, k, exponents
                        )
                        cert = eval_relation1_factorial(params)
                    else:
                        params = Relation1Params(basis, sign_small, sign_large, k, exponents)
                        cert = eval_relation1(params)
                    if cert.accepted:
                        out.append(cert)
    return out


def _enumerate_relation2(
    basis: PrimeBasis,
    budget: int,
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None,
) -> list[CandidateCertificate]:
    group1, group2 = partition or default_partition(basis)
    p1, p2 = prod(group1), prod(group2)
    k1s = _coprime_multipliers(budget, group2)
    k2s = _coprime_multipliers(budget, group1)
    low, high = certificate_window(basis)
    out = []
    for s1, s2, s3 in iter_product(_PARITIES, _PARITIES, _PARITIES):
        for k1 in k1s:
            t1 = s1.sign * p1 * k1
            for k2 in k2s:
                t12 = t1 + s2.sign * p2 * k2
                for k3 in range(budget + 1):
                    value = t12 + s3.sign * p1 * p2 * k3
                    if low < value <= high:
                        params = Relation2Params(
                            basis, group1, group2, s1, s2, s3, k1, k2, k3
                        )
                        cert = eval_relation2(params)
                        if cert.accepted:
                            out.append(cert)
    return out


def _enumerate_relation3(basis: PrimeBasis, budget: int) -> list[CandidateCertificate]:
    primes = basis.small_primes
    full = prod(primes)
    low, high = certificate_window(basis)
    slots = []
    for prime in primes:
        term = full // prime
        slots.append(
            [
                (sign.sign * term * k, sign, k)
                for sign in _PARITIES
                for k in _coprime_multipliers(budget, (prime,))
            ]
        )
    slots.append(
        [(sign.sign * full * k, sign, k) for sign in _PARITIES for k in range(budget + 1)]
    )

    out = []
    chosen: list[tuple[int, Parity, int]] = []

    def descend(depth: int, partial: int) -> None:
        if depth == len(slots):
            if low < partial <= high:
                signs = tuple(c[1] for c in chosen)
                ks = tuple(c[2] for c in chosen)
                cert = eval_relation3(Relation3Params(basis, signs, ks))
                if cert.accepted:
                    out.append(cert)
            return
        for option in slots[depth]:
            chosen.append(option)
            descend(depth + 1, partial + option[0])
            chosen.pop()

    descend(0, 0)
    return out


def find_relation1_params(
    basis: PrimeBasis, target: int, budget: int, exponent_slots: int = 2
) -> Relation1Params | None:
    """Bounded search for parameters whose accepted relation1 value equals
    `target`; None when the grid holds no such tuple."""
    larges = large_primes(basis, exponent_slots)
    lead = prod(basis.small_primes)
    for exps in iter_product(range(budget + 1), repeat=exponent_slots):
        power = prod(p ** e for p, e in zip(larges, exps))
        exponents = tuple((i + 1, e) for i, e in enumerate(exps) if e)
        for sign_small, sign_large in iter_product(_PARITIES, _PARITIES):
            for k in range(1, budget + 1):
                if sign_small.sign * k * lead + sign_large.sign * power != target:
                    continue
                params = Relation1Params(basis, sign_small, sign_large, k, exponents)
                if eval_relation1(params).accepted:
                    return params
    return None
