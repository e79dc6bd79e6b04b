# Copyright 2025 The crysgroups Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Holonomy groups: cyclic of composite order, C_p x C_p and A_4.

Words evaluate left to right as written. A_4 is modelled by permutations of
{1, 2, 3, 4} with a = (1 2)(3 4) and b = (1 2 3); the product g*h applies g
first, so ab = (1 3 4).
"""

from __future__ import annotations

import itertools
import logging
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import gcd, lcm, prod
from typing import Iterator, Sequence

from sympy import isprime
from sympy.combinatorics import Permutation

from crysgroups.entities.bundle import GroupSpec
from crysgroups.shared_libraries.errors import ParameterError

logger = logging.getLogger(__name__)

Word = Sequence[tuple[str, int]]


@dataclass(frozen=True)
class GroupElement:
    """Canonical normal form: exponents for the abelian families, the tuple
    of 0-based images for A_4."""

    family: str
    key: tuple[int, ...]


@dataclass(frozen=True)
class Relation:
    """Defining relation lhs = rhs between positive words."""

    name: str
    lhs: tuple[tuple[str, int], ...]
    rhs: tuple[tuple[str, int], ...] = ()


class HolonomyGroup:
    """One of the three supported finite groups, with normal forms."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.family = spec.family
        if self.family == "cyclic":
            self.factors = tuple((int(p), int(n)) for p, n in spec.factors)
            self.moduli = tuple(p**n for p, n in self.factors)
            self.order = prod(self.moduli)
            s = len(self.factors)
            self.generator_names = ("a",) if s == 1 else tuple(
                f"a{i + 1}" for i in range(s)
            )
        elif self.family == "bicyclic":
            self.factors = ()
            self.p = int(spec.p)
            self.order = self.p**2
            self.generator_names = ("a", "b")
        else:
            self.factors = ()
            self.order = 12
            self.generator_names = ("a", "b")

    def __repr__(self) -> str:
        if self.family == "cyclic":
            body = ",".join(f"{p}^{n}" for p, n in self.factors)
        elif self.family == "bicyclic":
            body = f"C{self.p}xC{self.p}"
        else:
            body = "A4"
        return f"HolonomyGroup<{self.family}:{body}>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HolonomyGroup):
            return NotImplemented
        return self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec.model_dump_json())

    # Generators and relations.

    @cached_property
    def generators(self) -> dict[str, GroupElement]:
        if self.family == "cyclic":
            s = len(self.factors)
            return {
                name: GroupElement(
                    "cyclic", tuple(1 if k == i else 0 for k in range(s))
                )
                for i, name in enumerate(self.generator_names)
            }
        if self.family == "bicyclic":
            return {
                "a": GroupElement("bicyclic", (1, 0)),
                "b": GroupElement("bicyclic", (0, 1)),
            }
        return {
            "a": _perm_element(Permutation([[0, 1], [2, 3]], size=4)),
            "b": _perm_element(Permutation([[0, 1, 2]], size=4)),
        }

    def full_generator(self) -> GroupElement:
        """For the cyclic family, the generator a = a_1 ... a_s."""
        if self.family != "cyclic":
            raise ParameterError(
                f"{self.family} group is not cyclic", "cyclic group"
            )
        return GroupElement("cyclic", (1,) * len(self.factors))

    @cached_property
    def relations(self) -> tuple[Relation, ...]:
        names = self.generator_names
        if self.family == "cyclic":
            rels = [
                Relation(f"{g}^{m}", ((g, m),))
                for g, m in zip(names, self.moduli)
            ]
            rels += [
                Relation(f"{g}*{h}={h}*{g}", ((g, 1), (h, 1)), ((h, 1), (g, 1)))
                for g, h in itertools.combinations(names, 2)
            ]
            return tuple(rels)
        if self.family == "bicyclic":
            p = self.p
            return (
                Relation(f"a^{p}", (("a", p),)),
                Relation(f"b^{p}", (("b", p),)),
                Relation("a*b=b*a", (("a", 1), ("b", 1)), (("b", 1), ("a", 1))),
            )
        return (
            Relation("a^2", (("a", 2),)),
            Relation("b^3", (("b", 3),)),
            Relation("(a*b)^3", (("a", 1), ("b", 1)) * 3),
        )

    # Arithmetic.

    def identity(self) -> GroupElement:
        if self.family == "cyclic":
            return GroupElement("cyclic", (0,) * len(self.factors))
        if self.family == "bicyclic":
            return GroupElement("bicyclic", (0, 0))
        return GroupElement("alternating", (0, 1, 2, 3))

    def _check(self, g: GroupElement) -> None:
        if g.family != self.family:
            raise ParameterError(
                f"element {g} does not belong to {self!r}", "same group"
            )

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        self._check(g)
        self._check(h)
        if self.family == "cyclic":
            return GroupElement(
                "cyclic",
                tuple((x + y) % m for x, y, m in zip(g.key, h.key, self.moduli)),
            )
        if self.family == "bicyclic":
            p = self.p
            return GroupElement(
                "bicyclic", ((g.key[0] + h.key[0]) % p, (g.key[1] + h.key[1]) % p)
            )
        return _perm_element(Permutation(list(g.key)) * Permutation(list(h.key)))

    def inverse(self, g: GroupElement) -> GroupElement:
        self._check(g)
        if self.family == "cyclic":
            return GroupElement(
                "cyclic", tuple((-x) % m for x, m in zip(g.key, self.moduli))
            )
        if self.family == "bicyclic":
            return GroupElement(
                "bicyclic", tuple((-x) % self.p for x in g.key)
            )
        return _perm_element(~Permutation(list(g.key)))

    def power(self, g: GroupElement, k: int) -> GroupElement:
        if k < 0:
            g, k = self.inverse(g), -k
        result = self.identity()
        base = g
        while k:
            if k & 1:
                result = self.multiply(result, base)
            k >>= 1
            if k:
                base = self.multiply(base, base)
        return result

    def order_of(self, g: GroupElement) -> int:
        self._check(g)
        if self.family == "cyclic":
            return lcm(
                *(m // gcd(x, m) for x, m in zip(g.key, self.moduli))
            )
        if self.family == "bicyclic":
            return 1 if g.key == (0, 0) else self.p
        return int(Permutation(list(g.key)).order())

    def elements(self) -> list[GroupElement]:
        """All elements in a deterministic order, identity first."""
        return list(self._elements)

    @cached_property
    def _elements(self) -> tuple[GroupElement, ...]:
        if self.family == "cyclic":
            return tuple(
                GroupElement("cyclic", key)
                for key in itertools.product(*(range(m) for m in self.moduli))
            )
        if self.family == "bicyclic":
            return tuple(
                GroupElement("bicyclic", key)
                for key in itertools.product(range(self.p), repeat=2)
            )
        return tuple(self.shortest_words)

    @cached_property
    def shortest_words(self) -> dict[GroupElement, tuple[str, ...]]:
        """Breadth-first shortest word for every element, by right
        multiplication with generators in name order."""
        words = {self.identity(): ()}
        queue = deque([self.identity()])
        while queue:
            g = queue.popleft()
            for name in self.generator_names:
                h = self.multiply(g, self.generators[name])
                if h not in words:
                    words[h] = words[g] + (name,)
                    queue.append(h)
        if len(words) != self.order:
            raise ParameterError(
                f"generators reach {len(words)} of {self.order} elements",
                "generators generate the group",
            )
        return words

    def evaluate_word(self, word: Word) -> GroupElement:
        """Normal form of a word given as (generator, exponent) pairs."""
        result = self.identity()
        for name, exponent in word:
            if name not in self.generators:
                raise ParameterError(
                    f"unknown generator {name!r} for {self!r}",
                    f"generators are {', '.join(self.generator_names)}",
                )
            result = self.multiply(
                result, self.power(self.generators[name], exponent)
            )
        return result

    def word_of(self, g: GroupElement) -> tuple[tuple[str, int], ...]:
        """A word evaluating to g: exponent normal form for abelian groups."""
        self._check(g)
        if self.family == "alternating":
            return tuple((name, 1) for name in self.shortest_words[g])
        return tuple(
            (name, e) for name, e in zip(self.generator_names, g.key) if e
        )

    # Text forms.

    def format_element(self, g: GroupElement) -> str:
        self._check(g)
        if self.family == "alternating":
            cycles = Permutation(list(g.key)).cyclic_form
            if not cycles:
                return "1"
            return "".join(
                "(" + " ".join(str(v + 1) for v in cycle) + ")"
                for cycle in cycles
            )
        parts = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(self.generator_names, g.key)
            if e
        ]
        return "*".join(parts) if parts else "1"

    def parse_element(self, text: str) -> GroupElement:
        """Parses "a^3*b^2", "a1^3*a2", "(1 2)(3 4)" or "1"."""
        text = text.strip()
        if text in ("1", "e", ""):
            return self.identity()
        if self.family == "alternating" and text.startswith("("):
            cycles = [
                [int(v) - 1 for v in body.split()]
                for body in re.findall(r"\(([^)]*)\)", text)
            ]
            perm = Permutation(cycles, size=4)
            g = _perm_element(perm)
            if g not in self.shortest_words:
                raise ParameterError(f"{text} is not in A4", "even permutation")
            return g
        word = []
        for factor in text.split("*"):
            name, _, exponent = factor.strip().partition("^")
            word.append((name.strip(), int(exponent) if exponent else 1))
        return self.evaluate_word(word)


def _perm_element(perm: Permutation) -> GroupElement:
    return GroupElement("alternating", tuple(perm.array_form))


def build_group(spec: GroupSpec) -> HolonomyGroup:
    """Validates a group spec and returns the group.

    Raises:
        ParameterError: non-prime or repeated primes, exponents below 1, or,
            in strict mode, n_1 < 3 or n_i < 2 for a later factor.
    """
    if spec.family == "cyclic":
        if not spec.factors:
            raise ParameterError("no cyclic factors given", "s >= 1")
        primes = [p for p, _ in spec.factors]
        for p, n in spec.factors:
            if not isprime(p):
                raise ParameterError(f"{p} is not prime", "p_i prime")
            if n < 1:
                raise ParameterError(f"exponent {n} < 1", "n_i >= 1")
        if len(set(primes)) != len(primes):
            raise ParameterError(
                f"repeated prime in {primes}", "p_i pairwise distinct"
            )
        if spec.strict:
            if spec.factors[0][1] < 3:
                raise ParameterError(
                    f"first factor {spec.factors[0][0]}^{spec.factors[0][1]}"
                    " violates n_1 >= 3 required",
                    "composite cyclic holonomy: n_1 >= 3 required",
                )
            for p, n in spec.factors[1:]:
                if n < 2:
                    raise ParameterError(
                        f"factor {p}^{n} violates n_i >= 2 required for i >= 2",
                        "composite cyclic holonomy: "
                        "n_i >= 2 required for i >= 2",
                    )
    elif spec.family == "bicyclic":
        if spec.p is None or not isprime(spec.p):
            raise ParameterError(f"{spec.p} is not prime", "p prime")
    group = HolonomyGroup(spec)
    logger.debug("built %r of order %i", group, group.order)
    return group


def prime_order_elements(group: HolonomyGroup) -> list[tuple[GroupElement, int]]:
    """All elements of prime order, each tagged with that prime."""
    return [
        (g, q)
        for g in group.elements()
        for q in [group.order_of(g)]
        if isprime(q)
    ]


def cyclic_subgroup_key(group: HolonomyGroup, g: GroupElement) -> frozenset:
    """Identifies the cyclic subgroup generated by g."""
    return frozenset(group.power(g, k) for k in range(group.order_of(g)))


def iter_subgroup_generators(
    group: HolonomyGroup,
) -> Iterator[tuple[GroupElement, int]]:
    """One generator per distinct prime-order cyclic subgroup."""
    seen = set()
    for g, q in prime_order_elements(group):
        key = cyclic_subgroup_key(group, g)
        if key not in seen:
            seen.add(key)
            yield g, q
