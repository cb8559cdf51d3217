from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class RunConfig:
    """Resource limits; echoed into every output document."""

    primality_rounds: int = 64
    dirichlet_max_steps: int = 10**6
    naive_max_k: int = 25
    mitm_max_k: int = 42
    period_limit: int = 10**7
    materialize_limit: int = 10**6

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{f.name} must be a positive integer, got {value!r}")

    def to_dict(self):
        return asdict(self)
