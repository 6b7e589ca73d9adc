"""Named parameter grids, one per reference plot (``fig2`` ... ``fig9c``).

Every preset starts from :class:`SystemParams` defaults (omega_nu/2pi = 30 THz,
E_l = 3.8, gamma_nu = 0.005, g_a = g_m = 3.3e-6, |Delta_B| = 0.3,
kappa_a = kappa_m = 0.0166, J = 0.2, N = 1e7, T = 210 K, Delta_a = -1,
Delta_m = 1) and runs both Barnett branches.
"""

from __future__ import annotations

from .errors import InvalidParameterError
from .model import SystemParams
from .sweep import Axis, SweepSpec

CANONICAL = SystemParams()

_DETUNING_A = Axis("delta_a", -2.0, 0.0, 401)


def _spec(name, *axes, **base_changes) -> SweepSpec:
    return SweepSpec(base=CANONICAL.replace(**base_changes), axes=axes, name=name)


_BUILDERS = {
    "fig2": lambda: _spec(
        "fig2", Axis("delta_a", -2.0, 0.0, 101), Axis("delta_m", -1.0, 1.0, 101)
    ),
    "fig3": lambda: _spec("fig3", _DETUNING_A),
    "fig4": lambda: _spec("fig4", _DETUNING_A),
    "fig5": lambda: _spec("fig5", _DETUNING_A),
    "fig6": lambda: _spec("fig6", Axis("n_molecules", 1e4, 1e8, 61, "log")),
    "fig7": lambda: _spec("fig7", Axis("temperature", 10.0, 7000.0, 200)),
    # the contrast only saturates at blue cavity detuning, so span both signs
    "fig9a": lambda: _spec("fig9a", Axis("delta_a", -2.0, 2.0, 401)),
    "fig9b": lambda: _spec("fig9b", Axis("delta_m", -1.0, 2.0, 301)),
    "fig9c": lambda: _spec("fig9c", Axis("temperature", 10.0, 7000.0, 200)),
}

PRESET_NAMES = tuple(_BUILDERS)

#: Measures quoted in each preset's one-line summary.
HEADLINES = {
    "fig2": ("e_am", "e_aB", "e_mB", "r_min"),
    "fig3": ("e_am", "e_aB", "e_mB", "r_min"),
    "fig4": ("d_am", "d_aB", "d_mB"),
    "fig5": ("g_B_to_a", "g_B_to_m", "g_a_to_m", "g_m_to_a"),
    "fig6": ("e_am", "e_aB", "e_mB", "r_min"),
    "fig7": ("e_am", "e_aB", "e_mB", "r_min"),
    "fig9a": ("contrast_e_am", "contrast_e_aB", "contrast_e_mB", "contrast_r_min"),
    "fig9b": ("contrast_e_am", "contrast_e_aB", "contrast_e_mB", "contrast_r_min"),
    "fig9c": ("contrast_e_am", "contrast_e_aB", "contrast_e_mB", "contrast_r_min"),
}


def preset(name: str) -> SweepSpec:
    """Return the :class:`SweepSpec` for a figure preset such as ``"fig3"``."""
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise InvalidParameterError(
            "preset", f"unknown preset {name!r}; valid names: {', '.join(PRESET_NAMES)}"
        ) from None
