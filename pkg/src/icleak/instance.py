"""Index coding instances and adversary splits.

Message indices are 0-based inside the library.  The JSON document format
and every user-facing rendering use 1-based labels.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .gf import PrimeField


class InstanceError(ValueError):
    """Raised for malformed or inconsistent instance documents."""


@dataclass(frozen=True)
class Instance:
    n: int
    wants: tuple[frozenset[int], ...]
    has: tuple[frozenset[int], ...]
    field: PrimeField = field(default_factory=lambda: PrimeField(2))

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InstanceError("n: must be non-negative")
        if len(self.wants) != len(self.has):
            raise InstanceError("receivers: wants/has length mismatch")
        for i, (w, a) in enumerate(zip(self.wants, self.has)):
            for j in w | a:
                if not 0 <= j < self.n:
                    raise InstanceError(f"receivers[{i}]: message {j + 1} outside [1, {self.n}]")
            if w & a:
                raise InstanceError(
                    f"receivers[{i}]: wants and has overlap on {sorted(x + 1 for x in w & a)}"
                )

    @classmethod
    def build(cls, n: int, wants: Iterable[Iterable[int]], has: Iterable[Iterable[int]],
              q: int = 2) -> "Instance":
        """Convenience constructor taking 1-based message labels."""
        w = tuple(frozenset(j - 1 for j in s) for s in wants)
        a = tuple(frozenset(j - 1 for j in s) for s in has)
        return cls(n, w, a, PrimeField(q))

    @property
    def m(self) -> int:
        return len(self.wants)

    @property
    def q(self) -> int:
        return self.field.q

    def receivers(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        return list(zip(self.wants, self.has))

    def with_q(self, q: int) -> "Instance":
        return Instance(self.n, self.wants, self.has, PrimeField(q))


@dataclass(frozen=True)
class AdversarySplit:
    known: frozenset[int]
    sensitive: frozenset[int]
    nonsensitive: frozenset[int]

    def __post_init__(self) -> None:
        if not self.sensitive:
            raise InstanceError("adversary.sensitive: must be nonempty")
        k, s, u = self.known, self.sensitive, self.nonsensitive
        if k & s or k & u or s & u:
            raise InstanceError("adversary: knows/sensitive/nonsensitive must be disjoint")

    @classmethod
    def build(cls, known: Iterable[int], sensitive: Iterable[int],
              nonsensitive: Iterable[int]) -> "AdversarySplit":
        return cls(frozenset(j - 1 for j in known), frozenset(j - 1 for j in sensitive),
                   frozenset(j - 1 for j in nonsensitive))

    @property
    def k(self) -> int:
        return len(self.known)

    @property
    def s(self) -> int:
        return len(self.sensitive)

    @property
    def u(self) -> int:
        return len(self.nonsensitive)

    def check_partition(self, n: int) -> None:
        union = self.known | self.sensitive | self.nonsensitive
        if union != frozenset(range(n)):
            missing = sorted(x + 1 for x in set(range(n)) - union)
            extra = sorted(x + 1 for x in union - set(range(n)))
            raise InstanceError(
                f"adversary: K, S, U must partition [1, {n}] (missing {missing}, out of range {extra})"
            )

    def columns(self) -> tuple[list[int], list[int], list[int]]:
        """Sorted 0-based column lists (K, S, U)."""
        return sorted(self.known), sorted(self.sensitive), sorted(self.nonsensitive)


# --- JSON documents ---------------------------------------------------------

_TOP_KEYS = {"q", "n", "receivers", "adversary"}
_RECEIVER_KEYS = {"wants", "has"}
_ADVERSARY_KEYS = {"knows", "sensitive", "nonsensitive"}


def _index_list(value: Any, where: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool)
                                              for x in value):
        raise InstanceError(f"{where}: expected a list of integers")
    if len(set(value)) != len(value):
        raise InstanceError(f"{where}: duplicate indices")
    return value


def _check_keys(obj: Any, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise InstanceError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise InstanceError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise InstanceError(f"{where}: missing keys {sorted(missing)}")


def instance_from_dict(doc: Any) -> tuple[Instance, AdversarySplit | None]:
    _check_keys(doc, _TOP_KEYS, {"q", "n", "receivers"}, "document")
    q, n = doc["q"], doc["n"]
    if not isinstance(q, int) or isinstance(q, bool):
        raise InstanceError("q: expected an integer")
    try:
        fld = PrimeField(q)
    except ValueError as exc:
        raise InstanceError(f"q: {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InstanceError("n: expected a non-negative integer")
    if not isinstance(doc["receivers"], list):
        raise InstanceError("receivers: expected a list")
    wants, has = [], []
    for i, rec in enumerate(doc["receivers"]):
        where = f"receivers[{i}]"
        _check_keys(rec, _RECEIVER_KEYS, _RECEIVER_KEYS, where)
        w = _index_list(rec["wants"], f"{where}.wants")
        a = _index_list(rec["has"], f"{where}.has")
        wants.append(frozenset(x - 1 for x in w))
        has.append(frozenset(x - 1 for x in a))
    inst = Instance(n, tuple(wants), tuple(has), fld)

    split = None
    if "adversary" in doc:
        adv = doc["adversary"]
        _check_keys(adv, _ADVERSARY_KEYS, _ADVERSARY_KEYS, "adversary")
        parts = {}
        for key in ("knows", "sensitive", "nonsensitive"):
            vals = _index_list(adv[key], f"adversary.{key}")
            for x in vals:
                if not 1 <= x <= n:
                    raise InstanceError(f"adversary.{key}: message {x} outside [1, {n}]")
            parts[key] = frozenset(x - 1 for x in vals)
        split = AdversarySplit(parts["knows"], parts["sensitive"], parts["nonsensitive"])
        split.check_partition(n)
    return inst, split


def parse_instance(text: str) -> tuple[Instance, AdversarySplit | None]:
    """Parse an instance JSON document.

    The ``adversary`` block is optional so that purely graph-level commands can
    share the format; every leakage computation requires it.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"document: invalid JSON ({exc})") from None
    return instance_from_dict(doc)


def instance_to_dict(inst: Instance, split: AdversarySplit | None = None) -> dict:
    doc: dict[str, Any] = {
        "q": inst.q,
        "n": inst.n,
        "receivers": [{"wants": sorted(x + 1 for x in w), "has": sorted(x + 1 for x in a)}
                      for w, a in inst.receivers()],
    }
    if split is not None:
        doc["adversary"] = {
            "knows": sorted(x + 1 for x in split.known),
            "sensitive": sorted(x + 1 for x in split.sensitive),
            "nonsensitive": sorted(x + 1 for x in split.nonsensitive),
        }
    return doc


# --- transforms -------------------------------------------------------------

def normalize_singleton_wants(inst: Instance) -> Instance:
    """Split every multi-message receiver into one receiver per wanted message."""
    wants, has = [], []
    for w, a in inst.receivers():
        if len(w) <= 1:
            wants.append(w)
            has.append(a)
        else:
            for j in sorted(w):
                wants.append(frozenset({j}))
                has.append(a)
    return Instance(inst.n, tuple(wants), tuple(has), inst.field)


def induce_subproblem(inst: Instance, subset: Iterable[int]) -> tuple[Instance, list[int]]:
    """Restrict ``inst`` to the messages in ``subset`` (0-based).

    Returns the subproblem and ``index_map`` where ``index_map[new] = old``.
    """
    subset = set(subset)
    for j in subset:
        if not 0 <= j < inst.n:
            raise InstanceError(f"subset: message {j + 1} outside [1, {inst.n}]")
    index_map = sorted(subset)
    new = {old: k for k, old in enumerate(index_map)}
    wants = tuple(frozenset(new[j] for j in w if j in new) for w in inst.wants)
    has = tuple(frozenset(new[j] for j in a if j in new) for a in inst.has)
    return Instance(len(index_map), wants, has, inst.field), index_map


def extend_with_adversary_receiver(inst: Instance, split: AdversarySplit) -> Instance:
    """Append a receiver that holds K and S and wants U."""
    split.check_partition(inst.n)
    return Instance(inst.n, inst.wants + (split.nonsensitive,),
                    inst.has + (split.known | split.sensitive,), inst.field)


def disjoint_union(a: Instance, b: Instance) -> Instance:
    """Place ``b``'s messages after ``a``'s; receivers are concatenated."""
    if a.q != b.q:
        raise InstanceError("disjoint_union: field mismatch")
    shift = a.n
    wants = a.wants + tuple(frozenset(j + shift for j in w) for w in b.wants)
    has = a.has + tuple(frozenset(j + shift for j in h) for h in b.has)
    return Instance(a.n + b.n, wants, has, a.field)


def random_instance(rng: random.Random, n: int, m: int, q: int = 2,
                    p_side: float = 0.4, p_multi: float = 0.15,
                    p_empty: float = 0.05) -> Instance:
    """Seeded random instance for tests and benchmarks."""
    wants, has = [], []
    for _ in range(m):
        if n == 0 or rng.random() < p_empty:
            w: set[int] = set()
        else:
            w = {rng.randrange(n)}
            while rng.random() < p_multi and len(w) < n:
                w.add(rng.randrange(n))
        a = {j for j in range(n) if j not in w and rng.random() < p_side}
        wants.append(frozenset(w))
        has.append(frozenset(a))
    return Instance(n, tuple(wants), tuple(has), PrimeField(q))


def random_split(rng: random.Random, n: int) -> AdversarySplit:
    """Random K/S/U partition of [n] with S nonempty (n >= 1)."""
    labels = [rng.randrange(3) for _ in range(n)]
    if 1 not in labels:
        labels[rng.randrange(n)] = 1
    parts: list[set[int]] = [set(), set(), set()]
    for j, lab in enumerate(labels):
        parts[lab].add(j)
    return AdversarySplit(frozenset(parts[0]), frozenset(parts[1]), frozenset(parts[2]))


def format_set(s: Iterable[int]) -> str:
    return "{" + ",".join(str(x + 1) for x in sorted(s)) + "}"


def sequence_labels(seq: Sequence[int]) -> list[int]:
    return [x + 1 for x in seq]
