"""Exception types. The CLI maps these onto its exit-code contract."""


class InstanceFormatError(ValueError):
    """A serialized instance does not match the schema."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class TwoStageInfeasible(Exception):
    """Some scenario admits no feasible second-stage solution."""

    def __init__(self, scenario: int, message: str | None = None):
        super().__init__(message or f"two-stage infeasible: scenario {scenario} has no feasible y")
        self.scenario = scenario


class UncoverableScenarios(Exception):
    """Greedy stopped because no policy covers any remaining scenario."""

    def __init__(self, remaining):
        super().__init__(f"uncoverable scenarios: {sorted(remaining)}")
        self.remaining = remaining


class GuardExceeded(Exception):
    """Instance too large for an exhaustive routine."""
