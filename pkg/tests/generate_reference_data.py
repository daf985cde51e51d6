"""Regenerate the frozen oracle tables under tests/data/.

The tables are committed so the test suite never depends on this script at
runtime, but anyone can rebuild them:

    python3 tests/generate_reference_data.py

Two tables are produced:

* airy_reference.json: Ai, Ai', Bi, Bi' on a fixed grid, evaluated with
  mpmath at 50 significant digits and rounded to float64. This is the
  extended-precision series oracle the accuracy tests compare against.
* cfu_quadrature.json: brute-force values of the canonical cubic oscillatory
  integral I(lam, xi) = int w(t) exp(i lam (t^3/3 - xi t)) dt over the window
  |t| <= 8 sqrt(xi) + 20 lam^(-1/3) with a raised-cosine taper on the outer
  20% of the window, trapezoid rule with 2^22 panels. The exact full-line
  value is 2 pi lam^(-1/3) Ai(-lam^(2/3) xi); the observed deviation of the
  windowed integral from it is recorded alongside each entry.
"""

import json
from pathlib import Path

import mpmath
import numpy as np

DATA_DIR = Path(__file__).parent / "data"

AIRY_GRID = [round(-10.0 + 0.25 * j, 2) for j in range(61)]

CFU_CASES = [(lam, xi) for lam in (10.0, 100.0) for xi in (0.0, 0.25, 1.0, 2.25, 4.0)]
CFU_PANELS = 2 ** 22
TAPER_FRACTION = 0.2


def airy_table():
    mpmath.mp.dps = 50
    rows = []
    for z in AIRY_GRID:
        ai = mpmath.airyai(z)
        aip = mpmath.airyai(z, 1)
        bi = mpmath.airybi(z)
        bip = mpmath.airybi(z, 1)
        rows.append(
            {
                "z": z,
                "ai": float(ai),
                "aip": float(aip),
                "bi": float(bi),
                "bip": float(bip),
            }
        )
    return rows


def windowed_cubic_integral(lam, xi):
    """Trapezoid quadrature of the tapered cubic-phase integral."""
    window = 8.0 * np.sqrt(xi) + 20.0 * lam ** (-1.0 / 3.0)
    t = np.linspace(-window, window, CFU_PANELS + 1)
    weight = np.ones_like(t)
    flat = (1.0 - TAPER_FRACTION) * window
    ramp = np.abs(t) > flat
    weight[ramp] = 0.5 * (
        1.0 + np.cos(np.pi * (np.abs(t[ramp]) - flat) / (TAPER_FRACTION * window))
    )
    phase = lam * (t ** 3 / 3.0 - xi * t)
    integrand = weight * np.exp(1j * phase)
    value = np.trapezoid(integrand, t)
    return window, value


def cfu_table():
    mpmath.mp.dps = 30
    rows = []
    for lam, xi in CFU_CASES:
        window, value = windowed_cubic_integral(lam, xi)
        exact = 2.0 * np.pi * lam ** (-1.0 / 3.0) * float(
            mpmath.airyai(-(lam ** (2.0 / 3.0)) * xi)
        )
        rel_dev = abs(value - exact) / abs(exact)
        rows.append(
            {
                "lambda": lam,
                "xi": xi,
                "window": window,
                "taper_fraction": TAPER_FRACTION,
                "panels": CFU_PANELS,
                "re": float(value.real),
                "im": float(value.imag),
                "full_line_exact": exact,
                "rel_dev_from_exact": float(rel_dev),
            }
        )
        print(
            f"lam={lam:6.1f} xi={xi:5.2f} window={window:7.3f} "
            f"I={value:.12e} exact={exact:+.12e} reldev={rel_dev:.3e}"
        )
    return rows


def main():
    DATA_DIR.mkdir(exist_ok=True)
    airy = airy_table()
    (DATA_DIR / "airy_reference.json").write_text(json.dumps(airy, indent=1))
    print(f"wrote {len(airy)} airy rows")
    cfu = cfu_table()
    (DATA_DIR / "cfu_quadrature.json").write_text(json.dumps(cfu, indent=1))
    print(f"wrote {len(cfu)} cfu rows")


if __name__ == "__main__":
    main()
