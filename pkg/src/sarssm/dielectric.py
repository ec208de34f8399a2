"""Soil dielectric model and vertical wavenumber.

Volumetric soil moisture is mapped to complex relative permittivity with the
empirical polynomial fits of Hallikainen et al. (1985), banded in frequency,
and from there to the complex vertical wavenumber of a plane wave entering a
uniform lossy soil layer.

Sign convention: time factor e^{+jwt}, permittivity eps' - j*eps'' with
eps'' >= 0, so the principal square root puts the wavenumber in the fourth
quadrant (Re k > 0, Im k <= 0, a downward-decaying wave).  The inversion
relies on this branch; do not change it casually.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import (
    ConfigError,
    FrequencyOutsideCalibration,
    NonPhysicalPermittivity,
    OutOfRangeMoisture,
)

SPEED_OF_LIGHT = 299792458.0  # m/s
VACUUM_PERMEABILITY = 4.0e-7 * np.pi  # H/m, fixed; soils are non-magnetic here

_COEFF_FILE = "hallikainen1985.csv"
_coeff_cache: dict[str, np.ndarray] | None = None


@dataclass(frozen=True)
class SoilTexture:
    """Sand and clay mass fractions in percent by weight."""

    sand_pct: float
    clay_pct: float

    def __post_init__(self):
        if not (0.0 <= self.sand_pct <= 100.0 and 0.0 <= self.clay_pct <= 100.0):
            raise ConfigError("sand_pct and clay_pct must lie in [0, 100]")
        if self.sand_pct + self.clay_pct > 100.0:
            raise ConfigError("sand_pct + clay_pct must not exceed 100")


@dataclass(frozen=True)
class RadarConfig:
    """Carrier frequency and wavenumber options of the sensor."""

    frequency_hz: float = 5.405e9
    wavenumber_scale: float = 1.0

    def __post_init__(self):
        if self.frequency_hz <= 0:
            raise ConfigError("frequency_hz must be positive")


def _load_coefficients() -> dict[str, np.ndarray]:
    """Read the banded polynomial table once; returns arrays keyed by part.

    Each part maps to an array of shape (n_freq, 10): frequency in GHz
    followed by a0,a1,a2,b0,b1,b2,c0,c1,c2.
    """
    global _coeff_cache
    if _coeff_cache is None:
        rows = {"real": [], "imag": []}
        data = resources.files("sarssm.data").joinpath(_COEFF_FILE)
        with data.open("r", encoding="utf-8") as fh:
            for rec in csv.DictReader(fh):
                rows[rec["part"]].append(
                    [float(rec["frequency_ghz"])]
                    + [float(rec[k]) for k in ("a0", "a1", "a2", "b0", "b1", "b2", "c0", "c1", "c2")]
                )
        _coeff_cache = {part: np.array(sorted(vals), dtype=float) for part, vals in rows.items()}
    return _coeff_cache


def calibration_span_hz() -> tuple[float, float]:
    """Frequency interval covered by the coefficient table, in Hz."""
    table = _load_coefficients()["real"]
    return table[0, 0] * 1e9, table[-1, 0] * 1e9


def moisture_polynomial(texture: SoilTexture, frequency_hz: float) -> tuple[np.ndarray, np.ndarray]:
    """Collapse the table to per-part quadratic coefficients in moisture.

    For a fixed texture and frequency the permittivity is a plain quadratic
    eps = A + B*mv + C*mv^2 per part; this resolves (A, B, C) once, with
    linear interpolation between the two bracketing table frequencies.
    Returns (real_coeffs, imag_coeffs), each shaped (3,).
    """
    lo_hz, hi_hz = calibration_span_hz()
    if not (lo_hz <= frequency_hz <= hi_hz):
        raise FrequencyOutsideCalibration(
            f"frequency {frequency_hz:.4g} Hz outside [{lo_hz:.4g}, {hi_hz:.4g}] Hz"
        )
    f_ghz = frequency_hz / 1e9
    out = []
    for part in ("real", "imag"):
        table = _load_coefficients()[part]
        freqs = table[:, 0]
        idx = int(np.searchsorted(freqs, f_ghz, side="right")) - 1
        idx = min(max(idx, 0), len(freqs) - 2)
        f0, f1 = freqs[idx], freqs[idx + 1]
        w = (f_ghz - f0) / (f1 - f0)
        coeffs = (1.0 - w) * table[idx, 1:] + w * table[idx + 1, 1:]
        s, c = texture.sand_pct, texture.clay_pct
        a = coeffs[0] + coeffs[1] * s + coeffs[2] * c
        b = coeffs[3] + coeffs[4] * s + coeffs[5] * c
        cc = coeffs[6] + coeffs[7] * s + coeffs[8] * c
        out.append(np.array([a, b, cc]))
    return out[0], out[1]


def hallikainen_permittivity(mv, texture: SoilTexture, frequency_hz: float = 5.405e9):
    """Complex relative permittivity eps' - j*eps'' of moist soil.

    Parameters
    ----------
    mv : float or ndarray
        Volumetric soil moisture, m^3/m^3, in [0, 0.5].
    texture : SoilTexture
        Sand/clay percentages entering the polynomial regressors.
    frequency_hz : float
        Radar frequency; must lie within the table's calibration span.

    Returns
    -------
    complex or ndarray of complex
        Relative permittivity under the eps' - j*eps'' convention. The loss
        factor is clamped at zero: the fits can dip marginally negative at
        very low moisture, which the wave model does not admit.
    """
    mv_arr = np.asarray(mv, dtype=float)
    if np.any(mv_arr < 0.0) or np.any(mv_arr > 0.5):
        raise OutOfRangeMoisture(f"moisture outside [0, 0.5]")
    re_c, im_c = moisture_polynomial(texture, frequency_hz)
    eps_re = re_c[0] + re_c[1] * mv_arr + re_c[2] * mv_arr**2
    eps_im = np.maximum(im_c[0] + im_c[1] * mv_arr + im_c[2] * mv_arr**2, 0.0)
    eps = eps_re - 1j * eps_im
    return eps if mv_arr.ndim else complex(eps)


def wavenumber(eps_r, frequency_hz: float, scale: float = 1.0):
    """Complex vertical wavenumber k = (w/c)*sqrt(eps_r), rad/m.

    The principal branch gives Re k > 0; with eps'' >= 0 the imaginary part
    is <= 0 (decaying wave).  `scale` is a constant multiplicative factor on
    k (default 1.0) left available for sensitivity calibration.
    """
    eps_arr = np.asarray(eps_r, dtype=complex)
    if np.any(eps_arr.real <= 0.0):
        raise NonPhysicalPermittivity("eps' must be positive")
    k = scale * (2.0 * np.pi * frequency_hz / SPEED_OF_LIGHT) * np.sqrt(eps_arr)
    return k if eps_arr.ndim else complex(k)


def moisture_to_wavenumber(mv, texture: SoilTexture, radar: RadarConfig):
    """Compose the permittivity model and the wavenumber map."""
    eps = hallikainen_permittivity(mv, texture, radar.frequency_hz)
    return wavenumber(eps, radar.frequency_hz, radar.wavenumber_scale)
