from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    unitary: float = 1e-9   # max-entry defect allowed in local / block unitarity
    num: float = 1e-9       # generic numeric tolerance (isometry, sums)
    eig: float = 1e-8       # unit-modulus classification for bound states
    compare: float = 1e-9   # interferometer dark-port threshold
    sing: float = 1e-10     # smallest admissible singular value / pivot

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"tolerance {f.name} must be positive")

    def override(self, pairs):
        """Return a copy with ``KEY=VALUE`` strings (or a mapping) applied."""
        if isinstance(pairs, dict):
            items = pairs.items()
        else:
            items = (p.split("=", 1) for p in pairs)
        known = {f.name for f in fields(self)}
        updates = {}
        for key, value in items:
            key = key.strip().removeprefix("eps_")
            if key not in known:
                raise KeyError(f"unknown tolerance {key!r}; expected one of {sorted(known)}")
            updates[key] = float(value)
        return replace(self, **updates)


DEFAULT = Tolerances()
