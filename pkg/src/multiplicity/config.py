"""Numerical tolerances shared by every stage of the pipeline."""
from dataclasses import dataclass, fields, replace

# Euler characteristic of the only surface implemented.
CHI_SPHERE = 2

# Half-width of the square each chart is sampled over; the disk of this
# radius is what a chart "sees".
CHART_RADIUS = 1.25


@dataclass(frozen=True)
class Tolerances:
    trace_tol: float = 1e-8        # |f| bound for refined curve vertices
    kernel_tol: float = 1e-9       # ||z|-|w|| bound for kernel detection
    grad_floor: float = 1e-4       # min |grad f| on the curve for a Generic verdict
    newton_eps: float = 1e-10      # |grad f| / (1 + |zv|^2 + |zw|^2) at critical points
    fiber_tol: float = 1e-6        # max fiber defect accepted on the curve
    max_step: float = 0.02         # max chart distance between curve vertices
    chord_tol: float = 2e-6        # max chord sag before a segment is split
    index_radius: float = 1e-3     # circle radius for gradient / zero indices
    index_samples: int = 256       # samples on that circle
    winding_residual: float = 0.05 # max distance of a winding sum to an integer

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"tolerance {f.name} must be strictly positive")

    def updated(self, **changes):
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_TOLERANCES = Tolerances()
