"""Conjugating block maps by substitutions until the tables repeat.

For a map ``f : X_tau -> X_rho`` the sequence ``Phi_0 = f``,
``Phi_{i+1} = rho^-1 ∘ Phi_i ∘ tau`` (with ``rho^-1`` the almost inverse
built from a recognizer) has bounded in-radius, so its canonical tables
eventually cycle. A cycle element ``g`` then relates to ``f`` by a shift
power.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dill import (
    BlockRule,
    DillTable,
    InvariantReport,
    almost_equivalent,
    almost_inverse,
    canonicalize,
    compose,
    from_substitution,
    invariants,
    shift_rule,
)
from .errors import EigenvalueMismatch, PreconditionError
from .spectra import dominant_eigenvalue, eigenvalues_match
from .substitution import Substitution, is_aperiodic_heuristic, is_primitive


def alpha_bound(a: float, b: float) -> float:
    """Least eventual upper bound of ``x_{i+1} <= a x_i + b``, i.e. ``b / (1 - a)``."""
    if not 0 <= a < 1:
        raise ValueError(f"need 0 <= a < 1, got {a}")
    return b / (1 - a)


def conjugate_step(rho_inv: DillTable, phi: DillTable, tau: DillTable) -> DillTable:
    """Canonical table of ``rho_inv ∘ phi ∘ tau``."""
    return canonicalize(compose(rho_inv, compose(phi, tau)))


@dataclass
class Trajectory:
    tau: Substitution
    rho: Substitution
    rho_inv: DillTable
    steps: list[tuple[DillTable, InvariantReport]] = field(default_factory=list)
    cycle: tuple[int, int] | None = None
    D_ceiling: float | None = None
    I_ceiling: float | None = None

    @property
    def tables(self) -> list[DillTable]:
        return [t for t, _ in self.steps]

    def cycle_tables(self) -> list[DillTable]:
        if self.cycle is None:
            return []
        entry, period = self.cycle
        return self.tables[entry:entry + period]

    def report(self) -> str:
        lines = []
        for i, (t, r) in enumerate(self.steps):
            lines.append(f"{i}  I={t.in_radius} O={t.out_radius} Z={r.Z_estimate:.6g} "
                         f"D={r.D_observed:.4g} hash={t.fingerprint()}")
        if self.cycle is not None:
            lines.append(f"cycle: entry={self.cycle[0]} period={self.cycle[1]}")
        elif len(self.steps) > 1:
            lines.append("timeout")
        return "\n".join(lines) + "\n"


def _check_pair(tau: Substitution, rho: Substitution, tol: float):
    for s in (tau, rho):
        if not is_primitive(s):
            raise PreconditionError(f"{s} is not primitive")
        if not is_aperiodic_heuristic(s):
            raise PreconditionError(f"{s} has a periodic-looking fixed point")
    ok, how = eigenvalues_match(tau.matrix, rho.matrix, tol)
    if not ok:
        lt = dominant_eigenvalue(tau.matrix, tol)
        lr = dominant_eigenvalue(rho.matrix, tol)
        raise EigenvalueMismatch(f"dominant eigenvalues differ: {lt} vs {lr}")


def trajectory(f: BlockRule | DillTable, tau: Substitution, rho: Substitution, max_steps: int = 40,
               horizon: int = 2000, tol: float = 1e-9, rho_inv: DillTable | None = None) -> Trajectory:
    """Iterate ``Phi -> rho^-1 ∘ Phi ∘ tau`` until a table repeats or ``max_steps`` is reached."""
    _check_pair(tau, rho, tol)
    phi = canonicalize(f.as_dill() if isinstance(f, BlockRule) else f)
    if phi.domain != tau or phi.target != rho:
        raise PreconditionError("map must go from the subshift of tau to the subshift of rho")
    rho_inv = rho_inv if rho_inv is not None else almost_inverse(rho)
    tau_table = from_substitution(tau)
    t = Trajectory(tau, rho, rho_inv)

    tau_rep = invariants(tau_table, horizon)
    inv_rep = invariants(rho_inv, horizon)
    lam = tau_rep.Z_estimate
    t.D_ceiling = alpha_bound(1 / lam, tau_rep.D_observed / lam + inv_rep.D_observed)
    t.I_ceiling = alpha_bound(
        1 / lam, (4 * tau_rep.D_observed + 2 * t.D_ceiling + rho_inv.in_radius) / lam + 2)

    seen: dict[str, list[int]] = {}
    for i in range(max_steps + 1):
        key = phi.fingerprint()
        for j in seen.get(key, ()):
            if t.steps[j][0] == phi:
                t.cycle = (j, i - j)
                return t
        seen.setdefault(key, []).append(i)
        t.steps.append((phi, invariants(phi, horizon)))
        if i < max_steps:
            phi = conjugate_step(rho_inv, phi, tau_table)
    return t


@dataclass(frozen=True)
class Representative:
    g: DillTable
    k: int
    direction: str  # "left": f = sigma^k ∘ g; "right": g = sigma^k ∘ f

    def __str__(self):
        rel = "f = sigma^k ∘ g" if self.direction == "left" else "g = sigma^k ∘ f"
        return f"k={self.k} direction={self.direction} ({rel}) g.hash={self.g.fingerprint()}"


def _shifted(d: DillTable, k: int) -> DillTable:
    if k == 0:
        return canonicalize(d)
    return canonicalize(compose(shift_rule(d.target, k).as_dill(), d))


def reduce_to_representative(t: Trajectory, prefix_len: int = 1024, shift_bound: int = 32) -> Representative:
    """A cycle element ``g`` and shift ``k`` with ``f = sigma^k ∘ g`` or ``g = sigma^k ∘ f``."""
    if t.cycle is None:
        raise PreconditionError("trajectory has no cycle")
    f = t.steps[0][0]
    best = None
    for g in t.cycle_tables():
        if g.domain != f.domain or g.target != f.target:
            continue
        ij = almost_equivalent(f, g, prefix_len, shift_bound)
        if ij is None:
            continue
        i, j = ij
        rep = Representative(g, j - i, "left") if i <= j else Representative(g, i - j, "right")
        if rep.direction == "left":
            ok = _shifted(g, rep.k) == canonicalize(f)
        else:
            ok = _shifted(f, rep.k) == canonicalize(g)
        if ok and (best is None or rep.k < best.k):
            best = rep
    if best is None:
        raise PreconditionError(
            f"no cycle element is a shift of the input within shift bound {shift_bound}; raise it")
    return best
