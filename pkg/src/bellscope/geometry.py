"""The correlation polytope of linear parity functions, and queries on it.

A correlator vector lists p(XOR_j m_j = 1 | x) for every input word x.
Deterministic local strategies only ever produce linear parity maps, so
the reachable region for local models is the convex hull of the
2^(k+1) linear-function vertices.  Membership is decided by LP with a
reconstruction (inside) or a separating-hyperplane certificate (outside).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .boolfn import BooleanFunction, enumerate_linear
from .jsonnum import Number, from_jsonable, is_exact, to_jsonable
from .simplex import solve_feasibility, solve_max

MEMBERSHIP_MAX_ARITY = 12
EXACT_MAX_ARITY = 6
_ENTRY_TOL = 1e-9


@dataclass(frozen=True)
class CorrelatorVector:
    """Entries indexed by the packed input word x (bit j-1 = x_j)."""

    k: int
    entries: tuple[Number, ...]

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("negative arity")
        if len(self.entries) != 1 << self.k:
            raise ValueError("expected 2^k entries")
        cleaned = []
        for e in self.entries:
            if is_exact(e):
                if not 0 <= e <= 1:
                    raise ValueError(f"entry {e} outside [0, 1]")
                cleaned.append(e)
            else:
                if not -_ENTRY_TOL <= e <= 1 + _ENTRY_TOL:
                    raise ValueError(f"entry {e} outside [0, 1]")
                cleaned.append(min(max(e, 0.0), 1.0))
        object.__setattr__(self, "entries", tuple(cleaned))

    @property
    def is_exact(self) -> bool:
        return all(is_exact(e) for e in self.entries)


@dataclass(frozen=True)
class Certificate:
    """Hyperplane with c . v <= bound on every vertex but c . p = bound
    + violation on the queried point; scaled so max |c_i| = 1."""

    coefficients: tuple[Number, ...]
    bound: Number
    violation: Number


@dataclass(frozen=True)
class MembershipResult:
    status: str  # "inside" | "outside"
    weights: tuple[Number, ...] | None
    certificate: Certificate | None

    @property
    def inside(self) -> bool:
        return self.status == "inside"


def vertex(f: BooleanFunction) -> CorrelatorVector:
    """The deterministic correlator of parity map f (a hypercube corner)."""
    return CorrelatorVector(f.arity, f.values())


def membership(p: CorrelatorVector, *, exact: bool | None = None) -> MembershipResult:
    """Decide whether p is a mixture of linear-function vertices.

    With exact=True (or by default for exact entries at k <= 6) the LP
    pivots on rationals and the answer carries no rounding; the float
    path classifies within 1e-9.  Vertex columns follow the
    enumerate_linear ordering, and Bland's lowest-index rule fixes the
    certificate, so results are reproducible.
    """
    if p.k > MEMBERSHIP_MAX_ARITY:
        raise ValueError(f"arity {p.k} exceeds the dense-LP limit {MEMBERSHIP_MAX_ARITY}")
    if exact is None:
        exact = p.is_exact and p.k <= EXACT_MAX_ARITY
    if exact and p.k > EXACT_MAX_ARITY:
        raise ValueError(f"exact mode supports arity <= {EXACT_MAX_ARITY}")
    if exact and not p.is_exact:
        raise ValueError("exact mode needs exact entries")

    size = 1 << p.k
    vertices = enumerate_linear(p.k) if p.k >= 1 else _unit_vertices()
    rows = [[(v.table >> x) & 1 for v in vertices] for x in range(size)]
    rows.append([1] * len(vertices))
    rhs = list(p.entries) + [1]

    result = solve_feasibility(rows, rhs, exact=exact)
    if result.feasible:
        return MembershipResult("inside", tuple(result.solution), None)

    dual = result.dual
    coeffs = dual[:size]
    beta = -dual[size]
    scale = max(abs(c) for c in coeffs)
    if scale == 0:
        raise RuntimeError("degenerate certificate")
    coeffs = [c / scale for c in coeffs]
    beta = beta / scale
    violation = sum(c * e for c, e in zip(coeffs, p.entries)) - beta
    return MembershipResult("outside", None, Certificate(tuple(coeffs), beta, violation))


def _unit_vertices() -> tuple[BooleanFunction, ...]:
    return (BooleanFunction(0, 0), BooleanFunction(0, 1))


def violation_magnitude(p: CorrelatorVector, *, exact: bool | None = None) -> Number:
    """Certificate violation for outside points, a typed zero inside."""
    result = membership(p, exact=exact)
    if result.inside:
        return Fraction(0) if p.is_exact else 0.0
    return result.certificate.violation


def agreement(p: CorrelatorVector, f: BooleanFunction) -> Number:
    """Average probability that the parity sample matches f across inputs."""
    if f.arity != p.k:
        raise ValueError("arity mismatch")
    size = 1 << p.k
    total = sum(e if f(x) else (1 - e) for x, e in enumerate(p.entries))
    if is_exact(total):
        return Fraction(total, size)
    return total / size


def success_bound(f: BooleanFunction) -> Fraction:
    """Best agreement with f over all linear parity maps, by enumeration."""
    if f.arity > MEMBERSHIP_MAX_ARITY:
        raise ValueError(f"arity {f.arity} exceeds the dense limit {MEMBERSHIP_MAX_ARITY}")
    size = 1 << f.arity
    best = max(size - (f.table ^ g.table).bit_count() for g in enumerate_linear(f.arity))
    return Fraction(best, size)


def success_bound_lp(f: BooleanFunction) -> Fraction:
    """Same bound as an exact LP over the polytope; the optimum of the
    agreement functional is attained at a vertex, so the two paths must
    agree exactly."""
    if f.arity > EXACT_MAX_ARITY:
        raise ValueError(f"exact LP supports arity <= {EXACT_MAX_ARITY}")
    size = 1 << f.arity
    vertices = enumerate_linear(f.arity)
    gamma = [Fraction(size - (f.table ^ g.table).bit_count(), size) for g in vertices]
    result = solve_max([[1] * len(vertices)], [1], gamma, exact=True)
    if not result.feasible:
        raise RuntimeError("convexity row infeasible; solver defect")
    return Fraction(result.objective)


def vector_to_json(p: CorrelatorVector) -> list:
    return [to_jsonable(e) for e in p.entries]


def vector_from_json(data) -> CorrelatorVector:
    if isinstance(data, dict):
        if data.get("format", 1) != 1:
            raise ValueError("unsupported format version")
        data = data.get("entries")
    if not isinstance(data, list) or not data:
        raise ValueError("correlator JSON must be a nonempty array of entries")
    size = len(data)
    k = size.bit_length() - 1
    if 1 << k != size:
        raise ValueError(f"entry count {size} is not a power of two")
    return CorrelatorVector(k, tuple(from_jsonable(v) for v in data))


def membership_to_json(result: MembershipResult) -> dict:
    out: dict = {"format": 1, "status": result.status}
    if result.weights is not None:
        out["weights"] = [to_jsonable(w) for w in result.weights]
    if result.certificate is not None:
        cert = result.certificate
        out["certificate"] = {
            "coefficients": [to_jsonable(c) for c in cert.coefficients],
            "bound": to_jsonable(cert.bound),
            "violation": to_jsonable(cert.violation),
        }
    return out


def membership_from_json(data: dict) -> MembershipResult:
    if data.get("format", 1) != 1:
        raise ValueError("unsupported format version")
    status = data["status"]
    weights = tuple(from_jsonable(w) for w in data["weights"]) if "weights" in data else None
    certificate = None
    if "certificate" in data:
        c = data["certificate"]
        certificate = Certificate(
            tuple(from_jsonable(v) for v in c["coefficients"]),
            from_jsonable(c["bound"]),
            from_jsonable(c["violation"]),
        )
    return MembershipResult(status, weights, certificate)
