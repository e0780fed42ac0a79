"""Named almost simple groups: orders and closed-form a(G) evaluators.

A family descriptor names a socle type with its parameters, plus the index
``gamma`` of the largest subgroup avoiding graph automorphisms.  The order
used for a(G) is ``gamma * |T|`` unless an explicit order is supplied.

Every evaluator returns a list of :class:`Derivation` objects; the caller
keeps the smallest.  Values are exact :class:`RootExpr` numbers of the form
``r / sqrt(|G|)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd, prod

from sympy import isprime, perfect_power

from .base import base_to_exponent, strong_set_profile
from .errors import DomainError, InputError
from .rootexpr import RootExpr

# Constants of the uniform and optimal exponent theorems.
UNIFORM_C = RootExpr(0, [(Fraction(6935, 18), 9690)])
OPTIMAL_C = RootExpr(0, [(Fraction(863441, 2880), 9690)])
ALPHA = RootExpr(0, [(Fraction(171, 2), 9690)])
BETA = RootExpr.sqrt(42) * Fraction(49, 42)

J3_ORDER = 50232960
J3_DEGREE = 6156
J3_MALLE_INDEX = 3040
# Degree-6156 exponent obtained from the strong-set profile and index 3040.
J3_DEGREE_EXPONENT = Fraction(863441, 246240)


def alpha_sharpness_identity() -> bool:
    """n(J3)^2 * 4 * 9690 == 171^2 * |J3|, checked in integers."""
    return J3_DEGREE**2 * 4 * 9690 == 171**2 * J3_ORDER


# -- orders ----------------------------------------------------------------------


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise DomainError(f"q = {q} is not a prime power")
    if isprime(q):
        return q, 1
    pp = perfect_power(q)
    if not pp or not isprime(pp[0]):
        raise DomainError(f"q = {q} is not a prime power")
    return int(pp[0]), int(pp[1])


def order_psl(m: int, q: int) -> int:
    return q ** (m * (m - 1) // 2) * prod(q**i - 1 for i in range(2, m + 1)) // gcd(m, q - 1)


def order_psp(m: int, q: int) -> int:
    return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1)) // gcd(2, q - 1)


def order_psu(m: int, q: int) -> int:
    return q ** (m * (m - 1) // 2) * prod(q**i - (-1) ** i for i in range(2, m + 1)) // gcd(m, q + 1)


def order_pomega_plus(m: int, q: int) -> int:
    return q ** (m * (m - 1)) * (q**m - 1) * prod(q ** (2 * i) - 1 for i in range(1, m)) // gcd(4, q**m - 1)


def order_pomega_minus(m: int, q: int) -> int:
    return q ** (m * (m - 1)) * (q**m + 1) * prod(q ** (2 * i) - 1 for i in range(1, m)) // gcd(4, q**m + 1)


def order_pomega_odd(m: int, q: int) -> int:
    return order_psp(m, q)


_EXCEPTIONAL_ORDERS = {
    "G2": lambda q: q**6 * (q**6 - 1) * (q**2 - 1),
    "F4": lambda q: q**24 * (q**12 - 1) * (q**8 - 1) * (q**6 - 1) * (q**2 - 1),
    "E6": lambda q: q**36 * prod(q**i - 1 for i in (12, 9, 8, 6, 5, 2)) // gcd(3, q - 1),
    "E7": lambda q: q**63 * prod(q**i - 1 for i in (2, 6, 8, 10, 12, 14, 18)) // gcd(2, q - 1),
    "E8": lambda q: q**120 * prod(q**i - 1 for i in (2, 8, 12, 14, 18, 20, 24, 30)),
    "2E6": lambda q: q**36 * (q**12 - 1) * (q**9 + 1) * (q**8 - 1) * (q**6 - 1) * (q**5 + 1) * (q**2 - 1) // gcd(3, q + 1),
    "3D4": lambda q: q**12 * (q**8 + q**4 + 1) * (q**6 - 1) * (q**2 - 1),
    "2B2": lambda q: q**2 * (q**2 + 1) * (q - 1),
    "2G2": lambda q: q**3 * (q**3 + 1) * (q - 1),
    "2F4": lambda q: q**12 * (q**6 + 1) * (q**4 - 1) * (q**3 + 1) * (q - 1),
}

# Degree of the action used for each exceptional type, and its base size.
_EXCEPTIONAL_ACTIONS = {
    "G2": (lambda q: (q**6 - 1) // (q - 1), 4),
    "F4": (lambda q: (q**12 - 1) * (q**4 + 1) // (q - 1), 5),
    "E6": (lambda q: (q**9 - 1) * (q**8 + q**4 + 1) // (q - 1), 6),
    "E7": (lambda q: (q**14 - 1) * (q**9 + 1) * (q**5 + 1) // (q - 1), 5),
    "E8": (lambda q: (q**30 - 1) * (q**12 + 1) * (q**10 + 1) * (q**6 + 1) // (q - 1), 4),
    "2E6": (lambda q: (q**12 - 1) * (q**6 - q**3 + 1) * (q**4 + 1) // (q - 1), 4),
    "3D4": (lambda q: (q**8 + q**4 + 1) * (q + 1), 4),
    "2B2": (lambda q: q**2 + 1, 3),
    "2G2": (lambda q: q**3 + 1, 3),
    "2F4": (lambda q: (q**6 + 1) * (q**3 + 1) * (q + 1), 3),
}

TITS_ORDER = 17971200
TITS_DEGREE = 1755


@dataclass(frozen=True)
class Sporadic:
    order: int
    degree: int
    kind: str  # "schmidt", "base" or "strong"
    b: int = 0
    blocks: int = 1  # d in the Schmidt wreath form, gamma in the base-gamma form


# Simple orders and the actions used for each sporadic almost simple group.
# Base sizes are the minimal bases of the minimal-degree primitive action.
SPORADICS: dict[str, Sporadic] = {
    "M11": Sporadic(7920, 11, "schmidt"),
    "M12": Sporadic(95040, 12, "schmidt"),
    "M12.2": Sporadic(2 * 95040, 24, "schmidt", blocks=2),
    "M22": Sporadic(443520, 22, "schmidt"),
    "M22.2": Sporadic(2 * 443520, 22, "schmidt"),
    "M23": Sporadic(10200960, 23, "schmidt"),
    "M24": Sporadic(244823040, 24, "schmidt"),
    "J1": Sporadic(175560, 266, "strong", 3),
    "J2": Sporadic(604800, 100, "base", 4),
    "J2.2": Sporadic(2 * 604800, 100, "base", 4),
    "J3": Sporadic(J3_ORDER, J3_DEGREE, "strong", 3),
    "J3.2": Sporadic(2 * J3_ORDER, J3_DEGREE, "strong", 3),
    "HS": Sporadic(44352000, 100, "base", 5),
    "HS.2": Sporadic(2 * 44352000, 100, "base", 5),
    "McL": Sporadic(898128000, 275, "base", 5),
    "McL.2": Sporadic(2 * 898128000, 275, "base", 5),
    "Co3": Sporadic(495766656000, 276, "base", 6),
    "Co2": Sporadic(42305421312000, 2300, "base", 6),
    "He": Sporadic(4030387200, 2058, "base", 4),
    "He.2": Sporadic(2 * 4030387200, 2058, "base", 4),
    "Suz": Sporadic(448345497600, 1782, "base", 4),
    "Suz.2": Sporadic(2 * 448345497600, 1782, "base", 4),
    "Fi22": Sporadic(64561751654400, 3510, "base", 5),
    "Fi22.2": Sporadic(2 * 64561751654400, 3510, "base", 6),
    "Ru": Sporadic(145926144000, 4060, "base", 4),
    "Fi23": Sporadic(4089470473293004800, 31671, "base", 5),
    "J4": Sporadic(86775571046077562880, 173067389, "base", 3),
    "Ly": Sporadic(51765179004000000, 8835156, "base", 3),
    "Co1": Sporadic(4157776806543360000, 98280, "base", 5),
    "HN": Sporadic(273030912000000, 1140000, "base", 3),
    "HN.2": Sporadic(2 * 273030912000000, 1140000, "base", 3),
    "ON": Sporadic(460815505920, 122760, "base", 3),
    "ON.2": Sporadic(2 * 460815505920, 245520, "base", 3, blocks=2),
    "Th": Sporadic(90745943887872000, 143127000, "strong", 3),
    "Fi24'": Sporadic(1255205709190661721292800, 306936, "base", 5),
    "Fi24": Sporadic(2 * 1255205709190661721292800, 306936, "base", 5),
    "B": Sporadic(4154781481226426191177580544000000, 13571955000, "base", 4),
    "M": Sporadic(808017424794512875886459904961710757005754368000000000, 97239461142009186000, "base", 3),
}


# -- descriptors -------------------------------------------------------------------

CLASSICAL = ("PSL", "PSp", "PSU", "POmega+", "POmega-", "POmega")
EXCEPTIONAL = tuple(_EXCEPTIONAL_ORDERS)
_ALIASES = {"Sz": "2B2", "R": "2G2", "Ree": "2G2", "O'N": "ON", "O'N.2": "ON.2", "A": "Alt"}


@dataclass(frozen=True)
class FamilyDescriptor:
    """An almost simple group named by socle type and parameters.

    ``family`` is one of ``Alt``, ``Alt6exotic``, a classical or exceptional
    type, ``Tits``, or a sporadic name.  ``gamma`` is the graph-automorphism
    index and ``order`` overrides the default order ``gamma * |T|``.
    """

    family: str
    m: int | None = None
    q: int | None = None
    gamma: int = 1
    order: int | None = None

    def __post_init__(self):
        if self.gamma < 1:
            raise InputError("gamma must be positive")

    @property
    def simple_order(self) -> int:
        return simple_order(self)

    @property
    def group_order(self) -> int:
        if self.order is not None:
            return self.order
        if self.family in SPORADICS:
            return SPORADICS[self.family].order
        if self.family == "Alt6exotic":
            return 720
        return self.gamma * self.simple_order

    def __str__(self):
        parts = ["family", self.family]
        parts += [str(x) for x in (self.m, self.q) if x is not None]
        if self.gamma != 1:
            parts.append(f"gamma={self.gamma}")
        if self.order is not None:
            parts.append(f"order={self.order}")
        return ":".join(parts)


_ARITY = {"Alt": 1, "Alt6exotic": 0, "Tits": 0, **{f: 2 for f in CLASSICAL}, **{f: 1 for f in EXCEPTIONAL}}


def parse_family(text: str) -> FamilyDescriptor:
    """Parse ``family:<name>[:<m>][:<q>][:gamma=g][:order=N]`` (leading ``family:`` optional)."""
    parts = [p for p in text.strip().split(":") if p]
    if parts and parts[0].lower() == "family":
        parts = parts[1:]
    if not parts:
        raise InputError("empty family descriptor")
    name = _ALIASES.get(parts[0], parts[0])
    opts = {}
    nums = []
    for p in parts[1:]:
        if "=" in p:
            key, _, val = p.partition("=")
            if key not in ("gamma", "order"):
                raise InputError(f"unknown family option {key!r}")
            try:
                opts[key] = int(val)
            except ValueError:
                raise InputError(f"bad value in {p!r}") from None
        else:
            try:
                nums.append(int(p))
            except ValueError:
                raise InputError(f"bad parameter {p!r} in {text!r}") from None
    if name in SPORADICS:
        arity = 0
    elif name in _ARITY:
        arity = _ARITY[name]
    else:
        raise InputError(f"unrecognized family {parts[0]!r}")
    if len(nums) != arity:
        raise InputError(f"{name} takes {arity} numeric parameter(s), got {len(nums)}")
    m = q = None
    if name == "Alt":
        (m,) = nums
    elif arity == 2:
        m, q = nums
    elif arity == 1:
        (q,) = nums
    desc = FamilyDescriptor(name, m, q, opts.get("gamma", 1), opts.get("order"))
    simple_order(desc)  # validates parameters
    return desc


def simple_order(desc: FamilyDescriptor) -> int:
    f, m, q = desc.family, desc.m, desc.q
    if f == "Alt":
        if m is None or m < 5:
            raise DomainError("alternating socle needs n >= 5")
        return factorial(m) // 2
    if f == "Alt6exotic":
        return 360
    if f == "Tits":
        return TITS_ORDER
    if f in SPORADICS:
        sp = SPORADICS[f]
        return sp.order // (2 if f.endswith(".2") else 1)
    if q is None:
        raise InputError(f"{f} needs q")
    p, _ = _prime_power(q)
    if f in CLASSICAL:
        if m is None or m < 2:
            raise DomainError(f"{f} needs m >= 2")
        return {
            "PSL": order_psl,
            "PSp": order_psp,
            "PSU": order_psu,
            "POmega+": order_pomega_plus,
            "POmega-": order_pomega_minus,
            "POmega": order_pomega_odd,
        }[f](m, q)
    if f == "2B2" and (p != 2 or _prime_power(q)[1] % 2 == 0):
        raise DomainError("2B2(q) needs q = 2^(2r+1)")
    if f == "2G2" and (p != 3 or _prime_power(q)[1] % 2 == 0):
        raise DomainError("2G2(q) needs q = 3^(2r+1)")
    if f == "2F4" and (p != 2 or _prime_power(q)[1] % 2 == 0):
        raise DomainError("2F4(q) needs q = 2^(2r+1)")
    return _EXCEPTIONAL_ORDERS[f](q)


# -- a(G) evaluators ------------------------------------------------------------------


@dataclass(frozen=True)
class Derivation:
    """One admissible value of a(G) with the ingredients that produced it."""

    rule: str
    a: RootExpr
    degree: int
    params: dict = field(default_factory=dict, compare=False)

    @property
    def exponent_factor(self) -> RootExpr:
        return self.a


def profile_a(profile: list[int], order: int, gamma: int = 1) -> RootExpr:
    """gamma * sum(deg - 1/2) / sqrt|G| for an independent invariant set."""
    total = sum(Fraction(d) - Fraction(1, 2) for d in profile)
    return RootExpr(total * gamma) * RootExpr.inv_sqrt(order)


def strong_profile_a(n: int, order: int, gamma: int = 1) -> RootExpr:
    """Closed form of :func:`profile_a` for the strong 4-set profile (9n/2 + 38)."""
    return RootExpr(Fraction(9 * n + 76, 2) * gamma) * RootExpr.inv_sqrt(order)


def schmidt_a(n0: int, order: int, blocks: int = 1) -> RootExpr:
    """d * n0 (n0 + 2) / (4 sqrt|G|) for a primitive action inside S_n0 wr S_d."""
    return RootExpr(Fraction(blocks * n0 * (n0 + 2), 4)) * RootExpr.inv_sqrt(order)


def _base(n: int, b: int, order: int, gamma: int = 1) -> Derivation:
    a, w = base_to_exponent(n, b, order, gamma)
    return Derivation("base", a, n * gamma, {"b": b, "n0": n, "gamma": gamma, "w": w})


def _closed(rule: str, numerator: Fraction | int, order: int, degree: int, **params) -> Derivation:
    return Derivation(rule, RootExpr(Fraction(numerator)) * RootExpr.inv_sqrt(order), degree, params)


def derivations(desc: FamilyDescriptor) -> list[Derivation]:
    """Every closed-form a(G) the family admits; the smallest is the certified value."""
    f, m, q, g = desc.family, desc.m, desc.q, desc.gamma
    G = desc.group_order
    out: list[Derivation] = []
    if f == "Alt":
        if g != 1:
            raise DomainError("alternating socles have no graph automorphism")
        out.append(Derivation("schmidt", schmidt_a(m, G), m, {"n0": m}))
    elif f == "Alt6exotic":
        out.append(Derivation("schmidt", schmidt_a(10, G), 10, {"n0": 10}))
    elif f == "PSL":
        if g not in (1, 2) or (g == 2 and m < 3):
            raise DomainError("PSL graph index is 1, or 2 when m >= 3")
        n0 = (q**m - 1) // (q - 1)
        out.append(_closed("linear", (10 * m + 9) * (q**m - 1) * g / Fraction(2 * (q - 1)), G, g * n0, n0=n0))
        if m == 2 and g == 1 and (q >= 81 or (q >= 23 and isprime(q))):
            out.append(_closed("linear-rank-one", Fraction(11 * q + 125, 2), G, n0, n0=n0))
        if m == 2 and q == 13 and g == 1 and desc.order in (None, simple_order(desc)):
            prof = [1, 2, 3, 3] + [4] * 4 + [5] * 6
            out.append(Derivation("profile", profile_a(prof, G), 14, {"profile": prof}))
    elif f == "PSp":
        if g not in (1, 2) or (g == 2 and (m != 2 or q % 2)):
            raise DomainError("PSp graph index 2 only for m = 2 and even q")
        n0 = (q ** (2 * m) - 1) // (q - 1)
        out.append(_closed("symplectic", (14 * m + 9) * (q ** (2 * m) - 1) * g / Fraction(2 * (q - 1)), G, g * n0, n0=n0))
        if m == 2 and q == 5 and g == 1:
            prof = list(range(1, 19)) + [19] * (n0 - 18)
            out.append(Derivation("profile", profile_a(prof, G), n0, {"profile": "1..18, 19^" + str(n0 - 18)}))
        if m == 3 and q == 2 and g == 1:
            out.append(Derivation("schmidt", schmidt_a(63, G), 63, {"n0": 63}))
    elif f == "PSU":
        if g != 1:
            raise DomainError("unitary socles are evaluated with gamma = 1")
        if m == 3:
            n = q**3 + 1
            out.append(_closed("unitary-3", 41 * n / Fraction(2), G, n))
            if 5 < q <= 17:
                out.append(_base(n, 3, G))
        elif m == 4:
            n = (q**3 + 1) * (q + 1)
            out.append(_closed("unitary-4", 49 * n / Fraction(2), G, n))
        elif m % 2:
            n = (q**m + 1) * (q ** (m - 1) - 1) // (q * q - 1)
            out.append(_closed("unitary-odd", (7 * m + 22) * Fraction((q**m + 1) * (q ** (m - 1) - 1), 2 * (q * q - 1)), G, n))
        else:
            n = (q**m - 1) * (q ** (m - 1) + 1) // (q * q - 1)
            out.append(_closed("unitary-even", (7 * m + 17) * Fraction((q**m - 1) * (q ** (m - 1) + 1), 2 * (q * q - 1)), G, n))
    elif f == "POmega+":
        if m < 4 or g not in (1, 2, 3) or (g == 3 and m != 4):
            raise DomainError("POmega+ needs m >= 4; gamma 3 only when m = 4")
        n0 = (q**m - 1) * (q ** (m - 1) + 1) // (q - 1)
        out.append(_closed("orthogonal-plus", (14 * m + 17) * Fraction((q**m - 1) * (q ** (m - 1) + 1) * g, 2 * (q - 1)), G, g * n0, n0=n0))
    elif f == "POmega-":
        if m < 4 or g != 1:
            raise DomainError("POmega- needs m >= 4 and gamma = 1")
        n = (q**m + 1) * (q ** (m - 1) - 1) // (q - 1)
        out.append(_closed("orthogonal-minus", (14 * m + 29) * Fraction((q**m - 1) * (q ** (m - 1) + 1), 2 * (q - 1)), G, n))
    elif f == "POmega":
        if m < 3 or q % 2 == 0 or g != 1:
            raise DomainError("POmega(2m+1) needs m >= 3, odd q and gamma = 1")
        n = (q ** (2 * m) - 1) // (q - 1)
        out.append(_closed("orthogonal-odd", (14 * m + 31) * Fraction(q ** (2 * m) - 1, 2 * (q - 1)), G, n))
    elif f in _EXCEPTIONAL_ACTIONS:
        degree, b = _EXCEPTIONAL_ACTIONS[f]
        if f == "G2" and q == 3:
            b = 3
        if g != 1 and not ((f == "G2" and q % 3 == 0) or (f == "F4" and q % 2 == 0) or f == "E6"):
            raise DomainError(f"{f}({q}) has no graph automorphism of index {g}")
        out.append(_base(degree(q), b, G, g))
    elif f == "Tits":
        out.append(Derivation("strong-profile", strong_profile_a(TITS_DEGREE, G), TITS_DEGREE, {"b": 3}))
    elif f in SPORADICS:
        sp = SPORADICS[f]
        if sp.kind == "schmidt":
            n0 = sp.degree // sp.blocks
            out.append(Derivation("schmidt", schmidt_a(n0, G, sp.blocks), sp.degree, {"n0": n0, "d": sp.blocks}))
        elif sp.kind == "base":
            out.append(_base(sp.degree // sp.blocks, sp.b, G, sp.blocks))
        else:
            out.append(Derivation("strong-profile", strong_profile_a(sp.degree, G), sp.degree, {"b": 3}))
    else:
        raise InputError(f"unrecognized family {f!r}")
    return out


def best_derivation(desc: FamilyDescriptor) -> Derivation:
    return min(derivations(desc), key=lambda d: d.a)


def family_a(desc: FamilyDescriptor) -> RootExpr:
    return best_derivation(desc).a


def j3_uniform_a() -> RootExpr:
    """a(J3) from the strong-set profile in degree 6156; equals the uniform constant."""
    return profile_a(strong_set_profile(J3_DEGREE, 3), J3_ORDER)


def j3_optimal_exponent() -> Fraction:
    """Passage of the degree-6156 exponent through n/|G|."""
    return J3_DEGREE_EXPONENT * Fraction(J3_DEGREE, J3_ORDER)


def wreath_exponent(c: RootExpr, r: int, g0_order: int, group_order: int) -> RootExpr:
    """c r sqrt|G0| / |G| + r (r + 2) / (4 |G|) for a socle T^r with r >= 2."""
    if r < 2:
        raise DomainError("the wreath combination needs r >= 2")
    return c * r * RootExpr.sqrt(g0_order) / group_order + Fraction(r * (r + 2), 4 * group_order)



def sporadic_names() -> list[str]:
    return sorted(SPORADICS)
