"""Default tolerances for every verification check, in one place."""

TOLERANCES = {
    "closed_forms": 1e-10,  # relative, 40-digit work
    "oracle": 1e-6,  # relative to max(1, |H_n|)
    "recursion": 1e-8,
    "symmetry": 1e-10,  # relative to max(1, |H_n|)
    "diagonal_richardson": 1e-6,
    "h1_diagonal": 1e-10,
    "lax_wkernel": 1e-8,
    "higher_flow": 1e-8,
    "kdv_flow": 1e-10,
    "u_squared_integral": 1e-8,
    "bilinear": 1e-8,
    "wave_equation": 1e-8,
    "smoothness": 1e-9,
}

DEFAULT_PRECISION = 30
MAX_ORDER = 12


def tolerance(name: str, overrides=None) -> float:
    if overrides and name in overrides:
        return float(overrides[name])
    return TOLERANCES[name]
