"""Exception types shared across the package."""


class QuadratureError(RuntimeError):
    """A numerical integral failed its convergence check."""


class FitError(ValueError):
    """The sinusoid fit could not be carried out."""


class NoFringeError(FitError):
    """Fitted fringe amplitude is too small for the phase to mean anything."""


class ConfigError(ValueError):
    """Scenario configuration failed validation.

    ``diagnostics`` is a list of dicts with ``field``, ``message``, ``line`` and
    ``column`` (1-based, ``None`` when the location is unknown).
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = []
        for d in self.diagnostics:
            loc = f"{d.get('line')}:{d.get('column')}" if d.get("line") else "?"
            lines.append(f"[{loc}] {d.get('field')}: {d.get('message')}")
        super().__init__("; ".join(lines) or "invalid configuration")
