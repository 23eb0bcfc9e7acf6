"""Fields over a finite base: one fibre algebra per base point, one gauge
group for the whole bundle, and a stitched invariant separating field state.

Fibres are independent (local product-bundle triviality); stitching imposes
no inter-fibre constraint.  Each fibre is seeded with a full-rank blend of
the maximally mixed state and a seeded random state, group-averaged, then
checked for invariance and full rank, retrying with a more mixed seed when
a check fails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import groups as G
from .states import (
    DensityState,
    haar_average,
    invariance_residual,
    is_separating,
    maximally_mixed,
    random_density,
    repair_psd,
)
from .wigner import WignerProblem, cesaro_fixed_point


class UnknownBasePoint(KeyError):
    pass


class FieldAssignmentError(RuntimeError):
    """A fibre failed its invariance or separating check after all retries."""

    def __init__(self, label: str, message: str):
        super().__init__(f"base point {label!r}: {message}")
        self.label = label


@dataclass(frozen=True)
class BundleSpec:
    """Ordered base points with a fibre representation of one common group."""

    points: tuple[str, ...]
    reps: dict

    def __post_init__(self):
        points = tuple(str(p) for p in self.points)
        if len(points) != len(set(points)):
            raise ValueError("base-point labels must be unique")
        if set(self.reps) != set(points):
            raise ValueError("reps must be keyed exactly by the base-point labels")
        group = self.reps[points[0]].group
        for label in points:
            if self.reps[label].group != group:
                raise ValueError(
                    f"fibre at {label!r} uses a different group; one gauge group per bundle"
                )
        object.__setattr__(self, "points", points)

    @property
    def group(self) -> G.GroupDescriptor:
        return self.reps[self.points[0]].group

    def dim(self, label: str) -> int:
        return self.reps[label].dim


@dataclass(frozen=True)
class FieldState:
    """One density state per base point."""

    points: tuple[str, ...]
    states: dict

    def __post_init__(self):
        if set(self.states) != set(self.points):
            raise ValueError("states must be keyed exactly by the base-point labels")
        for label, s in self.states.items():
            if not isinstance(s, DensityState):
                raise ValueError(f"component at {label!r} is not a DensityState")

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "points": list(self.points),
            "states": {label: self.states[label].to_json() for label in self.points},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FieldState":
        try:
            points = tuple(str(p) for p in doc["points"])
            states = {label: DensityState.from_json(doc["states"][label]) for label in points}
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed field document: {exc}") from exc
        return cls(points, states)


def restrict(field: FieldState, x: str) -> DensityState:
    """The component state at base point x."""
    try:
        return field.states[x]
    except KeyError:
        raise UnknownBasePoint(f"no base point {x!r} in this field") from None


def _point_seed(seed: int, index: int, salt: int) -> int:
    return (seed * 1_000_003 + index * 8191 + salt) % 2**63


def _blend_seed_state(d: int, blend: float, rng: np.random.Generator) -> DensityState:
    mixed = maximally_mixed(d).rho
    noisy = random_density(d, rng).rho
    out, _ = repair_psd(blend * mixed + (1.0 - blend) * noisy)
    return DensityState(d, out)


def _average_one(rep: G.UnitaryRep, seed_state: DensityState, method: str, gen_seed: int,
                 mc_count: int, cesaro_generators: int) -> DensityState:
    if method == "auto":
        method = {"finite": "finite_exact", "u1": "quadrature", "su2": "quadrature",
                  "su3": "cesaro"}[rep.group.kind]
    if method == "cesaro":
        elements = tuple(G.haar_sample(rep, gen_seed, cesaro_generators))
        return cesaro_fixed_point(WignerProblem(rep, elements), seed_state, tol=1e-11)
    return haar_average(rep, seed_state, method=method, seed=gen_seed, count=mc_count).state


def assign_invariant_field(
    spec: BundleSpec,
    method: str = "auto",
    seed: int = 0,
    invariance_tol: float = 1e-7,
    separating_tol: float = 1e-10,
    probes: int = 50,
    mc_count: int = 4096,
    cesaro_generators: int = 3,
) -> FieldState:
    """Assign every base point an invariant, separating (full-rank) state.

    Deterministic for fixed (spec, seed): all randomness flows through
    counter streams keyed by the point index.
    """
    states = {}
    for idx, label in enumerate(spec.points):
        rep = spec.reps[label]
        rng = G.philox_stream(seed, idx)
        gen_seed = _point_seed(seed, idx, 1)
        probe_seed = _point_seed(seed, idx, 2)
        last = ""
        for blend in (0.5, 0.8, 1.0):
            candidate = _blend_seed_state(rep.dim, blend, rng)
            try:
                state = _average_one(rep, candidate, method, gen_seed, mc_count, cesaro_generators)
            except Exception as exc:
                last = f"averaging failed: {exc}"
                continue
            residual = invariance_residual(rep, state, probes=probes, seed=probe_seed)
            sep = is_separating(state, separating_tol)
            if residual <= invariance_tol and sep.separating:
                states[label] = state
                break
            last = (
                f"invariance residual {residual:.3e} (tol {invariance_tol:.1e}), "
                f"min eigenvalue {sep.min_eigenvalue:.3e}"
            )
        else:
            raise FieldAssignmentError(label, last or "no attempt succeeded")
    return FieldState(spec.points, states)


def bundle_spec_from_json(doc: dict) -> BundleSpec:
    """Parse {"points": [{"label": ..., "rep": <rep config>}]}."""
    try:
        entries = list(doc["points"])
        labels = [str(e["label"]) for e in entries]
        reps = {str(e["label"]): G.rep_from_config(e["rep"]) for e in entries}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed bundle spec: {exc}") from exc
    return BundleSpec(tuple(labels), reps)


def bundle_spec_to_json(spec: BundleSpec) -> dict:
    points = []
    for label in spec.points:
        config = spec.reps[label].meta.get("config")
        if config is None:
            raise ValueError(
                f"rep at {label!r} carries no config block; build the bundle spec "
                "from JSON or attach rep.meta['config']"
            )
        points.append({"label": label, "rep": config})
    return {"schema_version": 1, "points": points}
