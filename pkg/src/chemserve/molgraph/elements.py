"""Embedded element table.

A closed world of 12 elements plus hydrogen keeps valence handling
decidable: every supported atom has a known list of default valences used
to derive implicit hydrogen counts. Weights are IUPAC standard atomic
weights (conventional values).
"""

from dataclasses import dataclass

from chemserve.errors import UnsupportedElement


@dataclass(frozen=True)
class Element:
    atomic_number: int
    symbol: str
    standard_atomic_weight: float
    default_valences: tuple[int, ...]


_TABLE = (
    Element(1, "H", 1.008, (1,)),
    Element(5, "B", 10.81, (3,)),
    Element(6, "C", 12.011, (4,)),
    Element(7, "N", 14.007, (3, 5)),
    Element(8, "O", 15.999, (2,)),
    Element(9, "F", 18.998, (1,)),
    Element(14, "Si", 28.085, (4,)),
    Element(15, "P", 30.974, (3, 5)),
    Element(16, "S", 32.06, (2, 4, 6)),
    Element(17, "Cl", 35.45, (1,)),
    Element(35, "Br", 79.904, (1,)),
    Element(53, "I", 126.904, (1,)),
)

BY_SYMBOL = {e.symbol: e for e in _TABLE}
BY_NUMBER = {e.atomic_number: e for e in _TABLE}

HYDROGEN = BY_SYMBOL["H"]

# Elements writable without brackets in SMILES.
ORGANIC_SUBSET = frozenset("B C N O P S F Cl Br I".split())
# Lowercase aromatic symbols accepted in SMILES.
AROMATIC_SYMBOLS = frozenset("b c n o s p".split())
# Pnictogens get their valences raised by a positive formal charge.
GROUP_15 = frozenset({7, 15})


def element(symbol: str) -> Element:
    """Look up an element by case-sensitive symbol."""
    try:
        return BY_SYMBOL[symbol]
    except KeyError:
        raise UnsupportedElement(f"unsupported element: {symbol!r}") from None


def adjusted_valences(elem: Element, formal_charge: int) -> tuple[int, ...]:
    """Default valences corrected for formal charge.

    Cations on group-15 elements gain one bonding slot per unit charge
    (N+ binds 4); anions lose one per unit charge (O- binds 1). Cations on
    other elements keep their neutral valences.
    """
    if not elem.default_valences:
        raise UnsupportedElement(f"no valence model for {elem.symbol}")
    if formal_charge > 0 and elem.atomic_number in GROUP_15:
        return tuple(v + formal_charge for v in elem.default_valences)
    if formal_charge < 0:
        return tuple(max(0, v + formal_charge) for v in elem.default_valences)
    return elem.default_valences
