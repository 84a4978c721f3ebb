"""Entombed's 16-bit pseudo-random number generator, bug included.

The game keeps a 16-bit word (high byte and low byte in two zero-page
cells) and advances it with what was evidently intended to be the linear
congruential generator

    next = (5 * state + 1) mod 65536

The 6502 routine computes ``5 * state`` as ``4 * state + state`` using
shifts and byte-wide adds, then finishes with a 16-bit increment. The
increment uses ``INC`` on the low byte, and ``INC`` does not touch the
carry flag, so the +1 never carries into the high byte. Instead the
``ADC #$00`` that was supposed to propagate that carry picks up a stale
carry left over from the multiply. :func:`buggy_step` reproduces the
shipped behaviour exactly; :func:`correct_step` is the generator the code
was aiming for.

All arithmetic here is explicitly modular (mod 256 per byte, mod 65536
per word); nothing relies on native integer width. Every function is
pure, so the module is safe to use from any number of threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List

WORD_COUNT = 0x10000


def _check_word(value: int, name: str = "state") -> None:
    if not 0 <= value <= 0xFFFF:
        raise ValueError(f"{name} must be a 16-bit value, got {value!r}")


def correct_step(state: int) -> int:
    """Advance the intended generator: (5 * state + 1) mod 65536."""
    _check_word(state)
    return (5 * state + 1) & 0xFFFF


def buggy_step(state: int) -> int:
    """Advance the generator the way the shipped routine actually does.

    The low byte is always ``(5 * state + 1) mod 256``: the final increment
    wraps inside the byte and its carry is lost. The high byte of
    ``5 * state`` is correct, but where the increment's carry should have
    been added, the routine adds the carry still sitting in the flag from
    the high-byte addition of the multiply. That stale carry is nonzero
    only when ``5 * state`` overflows 16 bits, and even then it reflects
    the shifted-and-truncated operands rather than the true sum, so about
    half of all steps come out one high-byte unit away from the correct
    generator.
    """
    _check_word(state)
    product = 5 * state
    high = (product >> 8) & 0xFF
    if product > 0xFFFF:
        low_in = state & 0xFF
        # Carry out of the low-byte add (4*low + low), bytes wrapped like
        # the accumulator does.
        carry_low = (((low_in << 2) & 0xFF) + low_in) >> 8
        # High byte after the two shift-rotates, i.e. of 4*state mod 2^16.
        high_shifted = ((state << 2) >> 8) & 0xFF
        stale = (((high_shifted + carry_low) & 0xFF) + (state >> 8)) >> 8
        high = (high + stale) & 0xFF
    low = ((product & 0xFF) + 1) & 0xFF
    return (high << 8) | low


def canonical_seed(b: int) -> int:
    """Build a seed the way the game does: one byte duplicated into both halves."""
    if not 0 <= b <= 0xFF:
        raise ValueError(f"seed byte must be in [0, 255], got {b!r}")
    return (b << 8) | b


@dataclass(frozen=True)
class StepComparison:
    """One state's buggy-vs-correct step, with the structure of the mismatch."""

    state: int
    buggy: int
    correct: int
    equal: bool
    low_bytes_equal: bool
    high_delta_mod256: int


@dataclass
class AgreementReport:
    """Exhaustive comparison of the two step functions over all 65536 states."""

    fraction_equal: float
    mismatches: List[StepComparison]

    @property
    def mismatch_count(self) -> int:
        return len(self.mismatches)


def compare_all_steps() -> AgreementReport:
    """Compare buggy_step against correct_step for every 16-bit state.

    Deterministic: identical output on every run. The mismatch list keeps
    one :class:`StepComparison` per disagreeing state, in state order.
    """
    mismatches = []
    equal_count = 0
    for state in range(WORD_COUNT):
        b = buggy_step(state)
        c = correct_step(state)
        if b == c:
            equal_count += 1
        else:
            mismatches.append(
                StepComparison(
                    state=state,
                    buggy=b,
                    correct=c,
                    equal=False,
                    low_bytes_equal=(b & 0xFF) == (c & 0xFF),
                    high_delta_mod256=((b >> 8) - (c >> 8)) & 0xFF,
                )
            )
    return AgreementReport(fraction_equal=equal_count / WORD_COUNT, mismatches=mismatches)


@dataclass(frozen=True)
class OrbitStats:
    """What one seed's forward orbit looks like after a fixed number of steps.

    ``distinct_values`` counts the seed itself as visited, so for an orbit
    that closes into a cycle it equals tail length plus cycle length.
    ``distinct_generated`` counts only values the generator produced, which
    is the same number minus one whenever the orbit never comes back to the
    seed.
    """

    seed: int
    steps: int
    distinct_values: int
    returns_to_seed: bool

    @property
    def distinct_generated(self) -> int:
        return self.distinct_values - (0 if self.returns_to_seed else 1)


def orbit_survey(seed: int, steps: int, step: Callable[[int], int] = buggy_step) -> OrbitStats:
    """Walk ``steps`` applications of ``step`` from ``seed`` and size the orbit.

    The walk stops early at the first revisited value: the map is
    deterministic, so no new values can appear after that and whether the
    seed recurs is already decided. The reported numbers are exactly those
    of the full walk.
    """
    _check_word(seed, "seed")
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps!r}")
    seen = {seed}
    value = seed
    for i in range(1, steps + 1):
        value = step(value)
        if value in seen:
            return OrbitStats(
                seed=seed,
                steps=steps,
                distinct_values=i,
                returns_to_seed=value == seed,
            )
        seen.add(value)
    return OrbitStats(seed=seed, steps=steps, distinct_values=len(seen), returns_to_seed=False)


def canonical_seed_survey(
    steps: int = WORD_COUNT, step: Callable[[int], int] = buggy_step
) -> List[OrbitStats]:
    """Run :func:`orbit_survey` from each of the 256 canonical seeds."""
    return [orbit_survey(canonical_seed(b), steps, step) for b in range(256)]


def max_distinct_over_canonical_seeds(
    steps: int = WORD_COUNT, step: Callable[[int], int] = buggy_step
) -> tuple[int, int]:
    """Largest number of distinct values any canonical seed's orbit produces.

    Counts values emitted by the generator over ``steps`` draws (the seed
    itself only counts if the orbit revisits it). Returns the maximum and
    the first seed achieving it.
    """
    best_count = -1
    best_seed = 0
    for stats in canonical_seed_survey(steps, step):
        if stats.distinct_generated > best_count:
            best_count = stats.distinct_generated
            best_seed = stats.seed
    return best_count, best_seed
