import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import fft

DEFAULT_VOICES = 12
DEFAULT_OMEGA0 = 6.0


@dataclass(frozen=True)
class ScaleGrid:
    """
    Dyadic scale grid s_j = s0 * 2^(j/voices_per_octave), j = 0..num_scales-1 (scales in days).
    """
    s0: float
    voices_per_octave: int
    num_scales: int
    dt: float = 1.0

    @property
    def scales(self) -> np.ndarray:
        return self.s0 * 2.0 ** (np.arange(self.num_scales) / self.voices_per_octave)

    @property
    def log_scales(self) -> np.ndarray:
        return math.log2(self.s0) + np.arange(self.num_scales) / self.voices_per_octave

    @property
    def dj(self) -> float:
        return 1.0 / self.voices_per_octave


@dataclass(frozen=True)
class MorletParams:
    """
    Parameters of the Morlet wavelet.
    """
    omega0: float = DEFAULT_OMEGA0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError("omega0 must be positive, supplied: %s" % str(self.omega0))


@dataclass
class CwtField:
    """
    Complex CWT coefficients, shape (n_times, num_scales), plus the cone of influence (max trustworthy scale per time).
    """
    coefficients: np.ndarray
    grid: ScaleGrid
    n_times: int
    coi: np.ndarray


def make_scale_grid(n: int, dt: float = 1.0, voices: int = DEFAULT_VOICES, s0: Optional[float] = None,
                    s_max: Optional[float] = None) -> ScaleGrid:
    """
    Creates the dyadic scale grid spanning [s0, s_max]. Defaults: s0 = 2*dt, s_max = n*dt/3.

    :param n: the length of the series
    :type n: int
    :param dt: the sampling interval (days)
    :type dt: float
    :param voices: the number of scales per octave
    :type voices: int
    :param s0: the smallest scale, uses 2*dt if None
    :type s0: float
    :param s_max: the largest scale, uses n*dt/3 if None
    :type s_max: float
    :return: the grid
    :rtype: ScaleGrid
    """
    if s0 is None:
        s0 = 2.0 * dt
    if s_max is None:
        s_max = n * dt / 3.0
    if voices < 1:
        raise ValueError("At least one voice per octave required, supplied: %d" % voices)
    if s0 < 2.0 * dt * (1.0 - 1e-12):
        raise ValueError("Smallest scale must be at least 2*dt=%g, supplied: %g" % (2.0 * dt, s0))
    if s_max > n * dt / 2.0 * (1.0 + 1e-12):
        raise ValueError("Largest scale must not exceed n*dt/2=%g, supplied: %g" % (n * dt / 2.0, s_max))
    if s_max < s0:
        raise ValueError("Empty scale grid: s_max=%g < s0=%g" % (s_max, s0))
    num = int(math.floor(voices * math.log2(s_max / s0) + 1e-9)) + 1
    return ScaleGrid(s0=float(s0), voices_per_octave=int(voices), num_scales=num, dt=float(dt))


def fourier_factor(params: MorletParams) -> float:
    """
    Returns the factor that turns a Morlet scale into its Fourier period: 4*pi/(omega0 + sqrt(2 + omega0^2)).

    :param params: the wavelet parameters
    :type params: MorletParams
    :return: the factor
    :rtype: float
    """
    return 4.0 * math.pi / (params.omega0 + math.sqrt(2.0 + params.omega0 ** 2))


def period_to_scale(period: float, params: MorletParams) -> float:
    """
    Converts a Fourier period into the Morlet scale with peak response.

    :param period: the period (days)
    :type period: float
    :param params: the wavelet parameters
    :type params: MorletParams
    :return: the scale (days)
    :rtype: float
    """
    return period / fourier_factor(params)


def morlet_fourier(angular_frequency, scale, params: MorletParams = MorletParams(), dt: float = 1.0):
    """
    Fourier transform of the scaled, L2-normalized Morlet wavelet:
    pi^(-1/4) * sqrt(2*pi*s/dt) * exp(-(s*w - w0)^2/2) for w > 0, 0 otherwise.

    :param angular_frequency: the angular frequency (scalar or array)
    :param scale: the scale (scalar or array, broadcast against the frequencies)
    :param params: the wavelet parameters
    :type params: MorletParams
    :param dt: the sampling interval
    :type dt: float
    :return: the (real, nonnegative) transform values
    """
    w = np.asarray(angular_frequency, dtype=float)
    s = np.asarray(scale, dtype=float)
    norm = math.pi ** -0.25 * np.sqrt(2.0 * math.pi * s / dt)
    result = norm * np.exp(-0.5 * (s * w - params.omega0) ** 2)
    return np.where(w > 0, result, 0.0)


def cone_of_influence(n: int, dt: float = 1.0) -> np.ndarray:
    """
    Largest trustworthy scale per time, using the Morlet e-folding time sqrt(2)*s:
    coi(u) = min(u, (n-1)*dt - u) / sqrt(2).

    :param n: the length of the series
    :type n: int
    :param dt: the sampling interval
    :type dt: float
    :return: the bound per time step
    :rtype: np.ndarray
    """
    if n < 2:
        raise ValueError("At least 2 time steps required for cone of influence, supplied: %d" % n)
    u = np.arange(n) * dt
    return np.minimum(u, (n - 1) * dt - u) / math.sqrt(2.0)


def cwt(series, grid: ScaleGrid, params: MorletParams = MorletParams()) -> CwtField:
    """
    Computes the continuous wavelet transform of the series in the frequency domain:
    the de-meaned series is zero-padded to the next power of two, multiplied with the
    daughter wavelets in Fourier space and transformed back.

    :param series: the real-valued series
    :param grid: the scales to compute
    :type grid: ScaleGrid
    :param params: the wavelet parameters
    :type params: MorletParams
    :return: the coefficients
    :rtype: CwtField
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise ValueError("Expected 1-dimensional series, got shape: %s" % str(x.shape))
    n = len(x)
    if n < 8:
        raise ValueError("At least 8 observations required for the transform, supplied: %d" % n)
    if not np.all(np.isfinite(x)):
        raise ValueError("Series contains non-finite values!")

    padded = 1 << int(math.ceil(math.log2(n)))
    x_ft = fft.fft(x - x.mean(), n=padded)
    omega = 2.0 * math.pi * fft.fftfreq(padded, d=grid.dt)
    daughters = morlet_fourier(omega[:, None], grid.scales[None, :], params=params, dt=grid.dt)
    coefficients = fft.ifft(x_ft[:, None] * daughters, axis=0)[:n, :]
    return CwtField(coefficients=coefficients, grid=grid, n_times=n, coi=cone_of_influence(n, grid.dt))


def power(field: CwtField) -> np.ndarray:
    """
    Returns the wavelet power |W|^2.

    :param field: the transform
    :type field: CwtField
    :return: the power, shape (n_times, num_scales)
    :rtype: np.ndarray
    """
    return np.abs(field.coefficients) ** 2


def dump_power(field: CwtField, path: str, delimiter: str = ","):
    """
    Writes |W|^2 as delimited matrix (rows: time steps, columns: scales) for debugging.

    :param field: the transform
    :type field: CwtField
    :param path: the file to write to
    :type path: str
    :param delimiter: the column delimiter
    :type delimiter: str
    """
    header = delimiter.join(["%.6g" % s for s in field.grid.scales])
    np.savetxt(path, power(field), delimiter=delimiter, fmt="%.10g", header=header, comments="")


def scale_to_period(scale: float, params: MorletParams) -> float:
    """
    Converts a Morlet scale into the equivalent Fourier period.

    :param scale: the scale (days)
    :type scale: float
    :param params: the wavelet parameters
    :type params: MorletParams
    :return: the period (days)
    :rtype: float
    """
    return scale * fourier_factor(params)
