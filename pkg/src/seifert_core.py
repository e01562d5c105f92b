"""Seifert indices, Fuchsian signatures and the presentations they carry.

Indices follow the Jankins-Neumann sign convention: the index
(g; b; (a1, b1), ..., (an, bn)) has fundamental group

    < a_i, b_i, q_j, h | h central, q_j^{a_j} = h^{b_j},
                          q_1 ... q_n [a_1, b_1] ... [a_g, b_g] = h^{-b} >

No conversion to other sign conventions is attempted.
"""

import functools
import logging
import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from sympy.combinatorics.free_groups import free_group

from src.errors import IndexSyntaxError, InvalidBranchIndex, InvalidGenus

logger = logging.getLogger(__name__)

# A word is a sequence of (generator name, exponent) letters
Letter = Tuple[str, int]
Word = Tuple[Letter, ...]


@dataclass(frozen=True)
class FuchsianSignature:
    """Base orbifold data (g; a1, ..., an) of a cocompact Fuchsian group."""

    genus: int
    branch_indices: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'genus', int(self.genus))
        object.__setattr__(self, 'branch_indices', tuple(int(a) for a in self.branch_indices))
        if self.genus < 0:
            raise InvalidGenus(f"Genus must be non-negative, got {self.genus}")
        for alpha in self.branch_indices:
            if alpha < 2:
                raise InvalidBranchIndex(f"Branch index must be at least 2, got {alpha}")

    @property
    def n(self) -> int:
        """Number of cone points."""
        return len(self.branch_indices)

    def to_dict(self) -> dict:
        return {"genus": self.genus, "alpha": list(self.branch_indices)}


@dataclass(frozen=True)
class SeifertIndex:
    """
    Seifert index (g; b; (a1, b1), ..., (an, bn)) of a closed oriented Seifert manifold.

    Construction only coerces types; call validate() before use.
    """

    genus: int
    b: int
    pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'pairs', tuple((int(a), int(beta)) for a, beta in self.pairs))

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def alphas(self) -> Tuple[int, ...]:
        return tuple(alpha for alpha, _ in self.pairs)

    @property
    def betas(self) -> Tuple[int, ...]:
        return tuple(beta for _, beta in self.pairs)

    @property
    def is_normalized(self) -> bool:
        return all(0 <= beta < alpha for alpha, beta in self.pairs)

    def signature(self) -> FuchsianSignature:
        """Drop the local invariants and keep the base orbifold."""
        return FuchsianSignature(self.genus, self.alphas)

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "b": self.b,
            "pairs": [[alpha, beta] for alpha, beta in self.pairs],
        }


@dataclass(frozen=True)
class Presentation:
    """Finite group presentation: generator names and relator words."""

    generators: Tuple[str, ...]
    relators: Tuple[Word, ...]
    annotations: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        unknown = {name for word in self.relators for name, _ in word} - set(self.generators)
        if unknown:
            raise ValueError(f"Relators use undeclared generators: {sorted(unknown)}")

    def without(self, name: str) -> 'Presentation':
        """
        Kill a generator: delete it from the generators and from every relator.

        Relators are freely reduced afterwards and empty ones dropped.
        """
        generators = tuple(g for g in self.generators if g != name)
        relators = []
        for word in self.relators:
            reduced = reduce_word(tuple(letter for letter in word if letter[0] != name))
            if reduced:
                relators.append(reduced)
        return Presentation(generators, tuple(relators), ())

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [format_word(word) for word in self.relators],
            "annotations": list(self.annotations),
        }


def reduce_word(word: Word) -> Word:
    """Freely reduce a word, merging adjacent powers of the same generator."""
    names = sorted({name for name, _ in word})
    if not names:
        return ()
    _, *generators = free_group(", ".join(names))
    letters = dict(zip(names, generators))
    element = functools.reduce(operator.mul, (letters[name] ** exponent for name, exponent in word))
    return tuple((str(symbol), int(exponent)) for symbol, exponent in element.array_form)


def format_word(word: Word) -> str:
    """Render a word as e.g. 'q1^2 h^-1'; the empty word is '1'."""
    if not word:
        return "1"
    return " ".join(name if exponent == 1 else f"{name}^{exponent}" for name, exponent in word)


def validate(raw: SeifertIndex) -> SeifertIndex:
    """
    Check an index for admissible genus and branch indices.

    Args:
        raw: Index as constructed from user input

    Returns:
        The same index (not necessarily normalized)

    Raises:
        InvalidGenus: If the genus is negative
        InvalidBranchIndex: If some alpha_j < 2
    """
    if raw.genus < 0:
        raise InvalidGenus(f"Genus must be non-negative, got {raw.genus}")
    for alpha, beta in raw.pairs:
        # alpha = 1 would be a regular fiber; it is not folded into b
        if alpha < 2:
            raise InvalidBranchIndex(f"Branch index must be at least 2, got ({alpha}, {beta})")
    return raw


def normalize(index: SeifertIndex) -> SeifertIndex:
    """Reduce every beta_j into [0, alpha_j), moving the quotients into b."""
    b = index.b + sum(beta // alpha for alpha, beta in index.pairs)
    pairs = tuple((alpha, beta % alpha) for alpha, beta in index.pairs)
    return SeifertIndex(index.genus, b, pairs)


def orientation_reverse(index: SeifertIndex) -> SeifertIndex:
    """Normalized index of the manifold with the fiber orientation reversed."""
    reversed_index = SeifertIndex(
        index.genus,
        -index.b,
        tuple((alpha, -beta) for alpha, beta in index.pairs),
    )
    return normalize(reversed_index)


def reversal_shifts(index: SeifertIndex) -> Tuple[int, ...]:
    """
    Shifts s_j of the fiber-reversal move on a normalized index.

    orientation_reverse(index) has beta'_j = s_j * alpha_j - beta_j and
    b' = -b - sum(s_j), where s_j = 1 when beta_j > 0 and 0 otherwise.
    """
    return tuple(1 if beta > 0 else 0 for _, beta in index.pairs)


def reversal_isomorphism(index: SeifertIndex) -> Dict[str, Word]:
    """
    Generator images of pi_1(M) -> pi_1(M') for the fiber-reversal homeomorphism.

    M' is orientation_reverse(index); its generators reuse the names of M.
    h -> h^-1, q_j -> q_j h^-s_j, surface generators are fixed.
    """
    shifts = reversal_shifts(index)
    images: Dict[str, Word] = {}
    for i in range(1, index.genus + 1):
        images[f"a{i}"] = ((f"a{i}", 1),)
        images[f"b{i}"] = ((f"b{i}", 1),)
    for j, s in enumerate(shifts, start=1):
        images[f"q{j}"] = reduce_word(((f"q{j}", 1), ("h", -s)))
    images["h"] = (("h", -1),)
    return images


def orbifold_euler_characteristic(sig: FuchsianSignature) -> Fraction:
    """Exact Euler characteristic 2 - 2g - sum (a_j - 1)/a_j of the base orbifold."""
    return 2 - 2 * sig.genus - sum((Fraction(alpha - 1, alpha) for alpha in sig.branch_indices), Fraction(0))


def unit_tangent_bundle(sig: FuchsianSignature) -> SeifertIndex:
    """Index (g; 2g - 2; (a_j, a_j - 1)) of the unit tangent bundle of the orbifold."""
    return SeifertIndex(
        sig.genus,
        2 * sig.genus - 2,
        tuple((alpha, alpha - 1) for alpha in sig.branch_indices),
    )


def _surface_generators(genus: int) -> List[str]:
    names = []
    for i in range(1, genus + 1):
        names.extend([f"a{i}", f"b{i}"])
    return names


def _long_relator(genus: int, n: int) -> Word:
    """q_1 ... q_n [a_1, b_1] ... [a_g, b_g], commutators as a b a^-1 b^-1."""
    letters: List[Letter] = [(f"q{j}", 1) for j in range(1, n + 1)]
    for i in range(1, genus + 1):
        letters.extend([(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)])
    return tuple(letters)


def fuchsian_presentation(sig: FuchsianSignature) -> Presentation:
    """Presentation of Gamma(g; a_1, ..., a_n)."""
    generators = _surface_generators(sig.genus) + [f"q{j}" for j in range(1, sig.n + 1)]
    relators = [((f"q{j}", alpha),) for j, alpha in enumerate(sig.branch_indices, start=1)]
    long_relator = reduce_word(_long_relator(sig.genus, sig.n))
    if long_relator:
        relators.append(long_relator)
    return Presentation(tuple(generators), tuple(relators), ())


def pi1_presentation(index: SeifertIndex) -> Presentation:
    """
    Presentation of pi_1(M) for a normalized index.

    Relators come in the order: q_j^{a_j} h^{-b_j}, the long relator
    q_1 ... q_n prod [a_i, b_i] h^{b}, then the commutators [h, x] for
    every generator x other than h. Letters with exponent 0 are omitted.
    """
    fuchsian = fuchsian_presentation(index.signature())
    generators = fuchsian.generators + ("h",)

    relators = [
        reduce_word(((f"q{j}", alpha), ("h", -beta)))
        for j, (alpha, beta) in enumerate(index.pairs, start=1)
    ]
    long_relator = reduce_word(_long_relator(index.genus, index.n) + (("h", index.b),))
    if long_relator:
        relators.append(long_relator)
    for name in fuchsian.generators:
        relators.append((("h", 1), (name, 1), ("h", -1), (name, -1)))

    annotations = ("h is central", f"q1 ... q{index.n} prod [a_i, b_i] = h^{-index.b}")
    logger.debug("pi_1 presentation: %d generators, %d relators", len(generators), len(relators))
    return Presentation(generators, tuple(relators), annotations)


INDEX_PATTERN = re.compile(
    r'^\s*(?P<genus>[+-]?\d+)\s*;\s*(?P<b>[+-]?\d+)\s*(?:;(?P<pairs>.*))?$'
)
PAIR_PATTERN = re.compile(r'^\s*(?P<alpha>[+-]?\d+)\s*/\s*(?P<beta>[+-]?\d+)\s*$')


def parse_index(text: str) -> SeifertIndex:
    """
    Parse and validate an index written as 'g; b; a1/b1, a2/b2, ...'.

    The pair list may be empty ('2; 2' or '2; 2;'). Betas are not normalized.

    Raises:
        IndexSyntaxError: If the text does not match the grammar
        InvalidGenus, InvalidBranchIndex: From validate()
    """
    match = INDEX_PATTERN.match(text)
    if not match:
        raise IndexSyntaxError(f"Malformed index '{text}' (expected 'g; b; a1/b1, a2/b2, ...')")

    pairs = []
    pairs_text = (match.group('pairs') or '').strip()
    if pairs_text:
        for chunk in pairs_text.split(','):
            pair_match = PAIR_PATTERN.match(chunk)
            if not pair_match:
                raise IndexSyntaxError(f"Malformed fiber '{chunk.strip()}' in '{text}' (expected alpha/beta)")
            pairs.append((int(pair_match.group('alpha')), int(pair_match.group('beta'))))

    return validate(SeifertIndex(int(match.group('genus')), int(match.group('b')), tuple(pairs)))


def format_index(index: SeifertIndex) -> str:
    """Canonical text form; inverse of parse_index."""
    pairs = ", ".join(f"{alpha}/{beta}" for alpha, beta in index.pairs)
    if not pairs:
        return f"{index.genus}; {index.b};"
    return f"{index.genus}; {index.b}; {pairs}"
