import datetime
import functools
import json
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Sequence, Dict, Any

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy import fft, ndimage

from ._cwt import ScaleGrid, MorletParams, CwtField, cwt, make_scale_grid
from ._errors import DataError
from ._ingest import ReturnPanel, write_matrix

COI_INCLUDE = "include"
COI_EXCLUDE = "exclude"
COI_POLICIES = [
    COI_INCLUDE,
    COI_EXCLUDE,
]

POWER_FLOOR = 1e-300
""" smoothed power at or below this counts as zero power. """

CLAMP_TOLERANCE = 1e-6

BAND_MATRIX_SCHEMA = "wcnet.band_matrix/1"

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class SmoothingParams:
    """
    Widths of the coherence smoothing operator: Gaussian in time with std time_factor*s
    (truncated at truncate std), boxcar in scale that is scale_width octaves wide.
    """
    time_factor: float = 1.0
    truncate: float = 4.0
    scale_width: float = 0.6


@dataclass(frozen=True)
class FrequencyBand:
    """
    Scale interval in days, s_hi=None means unbounded (capped at the largest grid scale).
    """
    label: str
    s_lo: float
    s_hi: Optional[float] = None


@dataclass(frozen=True)
class TimeWindow:
    """
    Calendar interval [start, end] (inclusive).
    """
    label: str
    start: datetime.date
    end: datetime.date


@dataclass
class CoherenceField:
    """
    Squared coherence, phase difference and oriented coherences of a pair, shape (n_times, num_scales).
    """
    r2: np.ndarray
    phase: np.ndarray
    r2_xy_oriented: np.ndarray
    r2_yx_oriented: np.ndarray
    grid: ScaleGrid
    coi: np.ndarray
    n_degenerate: int = 0


@dataclass
class BandMatrix:
    """
    Band/window averaged coherences: mean_r2 is symmetric, mean_oriented[x][y] is the mean of R2 x->y.
    """
    band: FrequencyBand
    window: TimeWindow
    assets: List[str]
    mean_r2: np.ndarray
    mean_oriented: np.ndarray


@functools.lru_cache(maxsize=16)
def _time_kernels(n: int, scales: Tuple[float, ...], dt: float, time_factor: float, truncate: float):
    """
    Pre-computes the Fourier transforms of the truncated Gaussian time kernels (one per scale)
    and the normalization (kernel mass inside the series) per cell.

    :return: tuple of padded length, kernel transforms, normalization
    :rtype: tuple
    """
    sigma = np.maximum(time_factor * np.asarray(scales) / dt, 1e-12)
    half = np.minimum(np.ceil(truncate * sigma).astype(int), n - 1)
    length = fft.next_fast_len(n + int(half.max()), real=True)
    kernels = np.zeros((length, len(scales)))
    for j in range(len(scales)):
        m = np.arange(-half[j], half[j] + 1)
        kernels[m % length, j] = np.exp(-0.5 * (m / sigma[j]) ** 2)
    kernels_ft = fft.rfft(kernels, axis=0)
    ones_ft = fft.rfft(np.ones(n), n=length)
    norm = fft.irfft(ones_ft[:, None] * kernels_ft, n=length, axis=0)[:n, :]
    return length, kernels_ft, norm


def _scale_window(scale_width: float, dj: float) -> np.ndarray:
    """
    Symmetric boxcar spanning scale_width octaves on a grid with spacing dj octaves;
    the outermost taps carry the fractional remainder.

    :param scale_width: the width in octaves
    :type scale_width: float
    :param dj: the grid spacing in octaves
    :type dj: float
    :return: the window weights (odd length, unnormalized)
    :rtype: np.ndarray
    """
    half = scale_width / dj / 2.0
    reach = int(math.ceil(half))
    k = np.abs(np.arange(-reach, reach + 1))
    weights = np.clip(half + 0.5 - k, 0.0, 1.0)
    if weights.sum() <= 0:
        return np.ones(1)
    return weights


def _smooth_real(field: np.ndarray, grid: ScaleGrid, params: SmoothingParams) -> np.ndarray:
    n = field.shape[0]
    length, kernels_ft, norm = _time_kernels(n, tuple(grid.scales.tolist()), grid.dt,
                                             params.time_factor, params.truncate)
    field_ft = fft.rfft(field, n=length, axis=0)
    result = fft.irfft(field_ft * kernels_ft, n=length, axis=0)[:n, :] / norm
    window = _scale_window(params.scale_width, grid.dj)
    if len(window) > 1:
        scale_norm = ndimage.convolve1d(np.ones(field.shape[1]), window, mode="constant", cval=0.0)
        result = ndimage.convolve1d(result, window, axis=1, mode="constant", cval=0.0) / scale_norm[None, :]
    return result


def smooth(field: np.ndarray, grid: ScaleGrid, params: SmoothingParams = SmoothingParams()) -> np.ndarray:
    """
    Applies the time smoothing (truncated Gaussian per scale, renormalized to unit mass
    over the part of the support inside the series) followed by the scale smoothing
    (boxcar in log-scale, renormalized at the grid edges). Complex fields get their
    real and imaginary parts smoothed separately.

    :param field: the field to smooth, shape (n_times, num_scales)
    :type field: np.ndarray
    :param grid: the scale grid of the field
    :type grid: ScaleGrid
    :param params: the kernel widths
    :type params: SmoothingParams
    :return: the smoothed field
    :rtype: np.ndarray
    """
    field = np.asarray(field)
    if (field.ndim != 2) or (field.shape[1] != grid.num_scales):
        raise ValueError("Field shape %s does not match grid with %d scales" % (str(field.shape), grid.num_scales))
    if np.iscomplexobj(field):
        return _smooth_real(field.real, grid, params) + 1j * _smooth_real(field.imag, grid, params)
    return _smooth_real(field.astype(float), grid, params)


def _check_compatible(wx: CwtField, wy: CwtField):
    if wx.grid != wy.grid:
        raise ValueError("Scale grids differ: %s != %s" % (str(wx.grid), str(wy.grid)))
    if wx.n_times != wy.n_times:
        raise ValueError("Series lengths differ: %d != %d" % (wx.n_times, wy.n_times))


def cross_wavelet(wx: CwtField, wy: CwtField) -> np.ndarray:
    """
    Computes the cross-wavelet transform W_x * conj(W_y).

    :param wx: the transform of x
    :type wx: CwtField
    :param wy: the transform of y
    :type wy: CwtField
    :return: the complex cross transform
    :rtype: np.ndarray
    """
    _check_compatible(wx, wy)
    return wx.coefficients * np.conj(wy.coefficients)


def _power(field: CwtField) -> np.ndarray:
    # same arithmetic as the real part of W * conj(W)
    return field.coefficients.real ** 2 + field.coefficients.imag ** 2


def oriented_coherences(r2: np.ndarray, phase: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Applies the phase penalty: for phase >= 0, x->y keeps r2 and y->x becomes r2*|cos(phase)|,
    for phase < 0 the roles swap. |phase| = pi/2 zeroes the penalized direction exactly.

    :param r2: the squared coherence
    :type r2: np.ndarray
    :param phase: the phase difference
    :type phase: np.ndarray
    :return: tuple of R2 x->y, R2 y->x
    :rtype: tuple
    """
    r2 = np.asarray(r2, dtype=float)
    phase = np.asarray(phase, dtype=float)
    cos_abs = np.abs(np.cos(phase))
    cos_abs = np.where(np.abs(phase) == HALF_PI, 0.0, cos_abs)
    penalized = r2 * cos_abs
    leading = phase >= 0
    return np.where(leading, r2, penalized), np.where(leading, penalized, r2)


def coherence_pair(wx: CwtField, wy: CwtField, smoothing: SmoothingParams = SmoothingParams(),
                   logger: logging.Logger = None) -> CoherenceField:
    """
    Computes the squared wavelet coherence |S(W_xy/s)|^2 / (S(|W_x|^2/s) S(|W_y|^2/s)),
    the phase difference (angle of S(W_xy/s)) and the oriented coherences.

    :param wx: the transform of x
    :type wx: CwtField
    :param wy: the transform of y
    :type wy: CwtField
    :param smoothing: the smoothing operator widths
    :type smoothing: SmoothingParams
    :param logger: the optional logger for reporting zero-power cells
    :type logger: logging.Logger
    :return: the coherence field
    :rtype: CoherenceField
    """
    _check_compatible(wx, wy)
    grid = wx.grid
    inv_s = 1.0 / grid.scales[None, :]
    cross = cross_wavelet(wx, wy) * inv_s
    s_re = _smooth_real(cross.real, grid, smoothing)
    s_im = _smooth_real(cross.imag, grid, smoothing)
    s_xx = _smooth_real(_power(wx) * inv_s, grid, smoothing)
    s_yy = _smooth_real(_power(wy) * inv_s, grid, smoothing)

    valid = (s_xx > POWER_FLOOR) & (s_yy > POWER_FLOOR)
    n_degenerate = int(np.count_nonzero(~valid))
    if (n_degenerate > 0) and (logger is not None):
        logger.warning("Zero smoothed power in %d cells, coherence set to 0 there" % n_degenerate)
    denominator = np.where(valid, s_xx * s_yy, 1.0)
    r2 = np.where(valid, (s_re ** 2 + s_im ** 2) / denominator, 0.0)
    overshoot = float(np.max(r2)) - 1.0 if r2.size > 0 else 0.0
    if (overshoot > CLAMP_TOLERANCE) and (logger is not None):
        logger.warning("Coherence exceeds 1 by %g before clamping" % overshoot)
    r2 = np.clip(r2, 0.0, 1.0)

    phase = np.arctan2(s_im, s_re)
    phase = np.where(phase <= -math.pi, math.pi, phase)
    xy, yx = oriented_coherences(r2, phase)
    return CoherenceField(r2=r2, phase=phase, r2_xy_oriented=xy, r2_yx_oriented=yx,
                          grid=grid, coi=wx.coi, n_degenerate=n_degenerate)


def band_indices(grid: ScaleGrid, band: FrequencyBand) -> np.ndarray:
    """
    Returns the indices of the grid scales inside the band.

    :param grid: the scale grid
    :type grid: ScaleGrid
    :param band: the band
    :type band: FrequencyBand
    :return: the scale indices
    :rtype: np.ndarray
    """
    scales = grid.scales
    s_hi = scales[-1] if band.s_hi is None else min(band.s_hi, scales[-1])
    if (band.s_hi is not None) and (band.s_lo >= band.s_hi):
        raise ValueError("Band '%s' has s_lo >= s_hi: %g >= %g" % (band.label, band.s_lo, band.s_hi))
    result = np.nonzero((scales >= band.s_lo * (1.0 - 1e-9)) & (scales <= s_hi * (1.0 + 1e-9)))[0]
    if len(result) == 0:
        raise ValueError("Band '%s' does not intersect the scale grid [%g, %g]" % (band.label, scales[0], scales[-1]))
    return result


def _trapezoid_weights(num: int, step: float) -> np.ndarray:
    if num == 1:
        return np.ones(1)
    result = np.full(num, step)
    result[0] = result[-1] = step / 2.0
    return result


def band_average(field: np.ndarray, grid: ScaleGrid, band: FrequencyBand, window: Optional[Tuple[int, int]] = None,
                 coi_policy: str = COI_INCLUDE, coi: Optional[np.ndarray] = None) -> float:
    """
    Trapezoidal average of the field over the time window and the band, integrating over
    log-scale k = log2(s). With the exclude policy, cells with s > coi(u) get zero weight
    and the normalizing area shrinks accordingly.

    :param field: the real field, shape (n_times, num_scales)
    :type field: np.ndarray
    :param grid: the scale grid
    :type grid: ScaleGrid
    :param band: the band to average over
    :type band: FrequencyBand
    :param window: the first and last time index (inclusive), all times if None
    :type window: tuple
    :param coi_policy: include|exclude
    :type coi_policy: str
    :param coi: the cone of influence, required for the exclude policy
    :type coi: np.ndarray
    :return: the average
    :rtype: float
    """
    n = field.shape[0]
    if window is None:
        window = (0, n - 1)
    t0, t1 = max(0, int(window[0])), min(n - 1, int(window[1]))
    if t0 > t1:
        raise ValueError("Window %s does not intersect the sample of length %d" % (str(window), n))
    cols = band_indices(grid, band)
    weights = _trapezoid_weights(t1 - t0 + 1, grid.dt)[:, None] * _trapezoid_weights(len(cols), grid.dj)[None, :]
    if coi_policy == COI_EXCLUDE:
        if coi is None:
            raise ValueError("Cone of influence required for policy '%s'" % COI_EXCLUDE)
        weights = weights * (grid.scales[cols][None, :] <= coi[t0:t1 + 1][:, None])
    elif coi_policy != COI_INCLUDE:
        raise ValueError("Unknown cone of influence policy: %s" % coi_policy)
    total = float(weights.sum())
    if total <= 0:
        raise ValueError("No cells left for band '%s' after excluding the cone of influence" % band.label)
    return float(np.sum(weights * field[t0:t1 + 1, :][:, cols]) / total)


def window_indices(dates: Sequence[datetime.date], window: TimeWindow) -> Tuple[int, int]:
    """
    Maps the calendar window onto the first and last index of the dates falling into it.

    :param dates: the sorted dates
    :param window: the window
    :type window: TimeWindow
    :return: the inclusive index range
    :rtype: tuple
    """
    inside = [i for i, d in enumerate(dates) if window.start <= d <= window.end]
    if len(inside) == 0:
        raise DataError("Window '%s' (%s - %s) contains no observations" % (window.label, window.start, window.end))
    return inside[0], inside[-1]


def full_window(panel: ReturnPanel, label: str = "full") -> TimeWindow:
    """
    Returns the window spanning the complete panel.

    :param panel: the panel
    :type panel: ReturnPanel
    :param label: the label for the window
    :type label: str
    :return: the window
    :rtype: TimeWindow
    """
    dates = panel.dates
    return TimeWindow(label=label, start=dates[0], end=dates[-1])


def pair_band_averages(wx: CwtField, wy: CwtField, bands: Sequence[FrequencyBand],
                       windows: Sequence[Tuple[int, int]], coi_policy: str = COI_INCLUDE,
                       smoothing: SmoothingParams = SmoothingParams()) -> np.ndarray:
    """
    Computes the coherence of the pair and averages r2 and both oriented fields for every window/band.

    :return: array of shape (num_windows, num_bands, 3) with mean r2, mean x->y, mean y->x
    :rtype: np.ndarray
    """
    field = coherence_pair(wx, wy, smoothing=smoothing)
    result = np.zeros((len(windows), len(bands), 3))
    for w, window in enumerate(windows):
        for b, band in enumerate(bands):
            for f, values in enumerate([field.r2, field.r2_xy_oriented, field.r2_yx_oriented]):
                result[w, b, f] = band_average(values, field.grid, band, window=window,
                                               coi_policy=coi_policy, coi=field.coi)
    return result


def transform_panel(panel: ReturnPanel, grid: ScaleGrid, params: MorletParams = MorletParams(),
                    n_jobs: int = 1) -> List[CwtField]:
    """
    Transforms every asset of the panel once.

    :param panel: the panel
    :type panel: ReturnPanel
    :param grid: the scale grid
    :type grid: ScaleGrid
    :param params: the wavelet parameters
    :type params: MorletParams
    :param n_jobs: the number of parallel workers
    :type n_jobs: int
    :return: the transforms in asset order
    :rtype: list
    """
    values = panel.values
    return Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(cwt)(values[:, i], grid, params) for i in range(values.shape[1]))


def band_matrices(panel: ReturnPanel, bands: Sequence[FrequencyBand], grid: Optional[ScaleGrid] = None,
                  params: MorletParams = MorletParams(), smoothing: SmoothingParams = SmoothingParams(),
                  windows: Optional[Sequence[TimeWindow]] = None, coi_policy: str = COI_INCLUDE,
                  n_jobs: int = 1, logger: logging.Logger = None) -> List[BandMatrix]:
    """
    Computes the band matrices for every window and band. Each asset is transformed once,
    the pairs are processed independently.

    :param panel: the panel with at least 2 assets
    :type panel: ReturnPanel
    :param bands: the frequency bands
    :type bands: list
    :param grid: the scale grid, default grid for the panel length if None
    :type grid: ScaleGrid
    :param params: the wavelet parameters
    :type params: MorletParams
    :param smoothing: the smoothing operator widths
    :type smoothing: SmoothingParams
    :param windows: the time windows, the complete panel if None
    :type windows: list
    :param coi_policy: include|exclude
    :type coi_policy: str
    :param n_jobs: the number of parallel workers
    :type n_jobs: int
    :param logger: the optional logger
    :type logger: logging.Logger
    :return: the matrices, ordered by window then band
    :rtype: list
    """
    num = panel.num_assets
    if num < 2:
        raise ValueError("At least 2 assets required, found: %d" % num)
    if grid is None:
        grid = make_scale_grid(len(panel), dt=panel.dt)
    if windows is None:
        windows = [full_window(panel)]
    dates = panel.dates
    index_windows = [window_indices(dates, w) for w in windows]

    if logger is not None:
        logger.info("Transforming %d series of length %d on %d scales" % (num, len(panel), grid.num_scales))
    fields = transform_panel(panel, grid, params=params, n_jobs=n_jobs)

    pairs = [(i, j) for i in range(num) for j in range(i + 1, num)]
    if logger is not None:
        logger.info("Computing coherence for %d pairs" % len(pairs))
    averages = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(pair_band_averages)(fields[i], fields[j], bands, index_windows, coi_policy, smoothing)
        for i, j in pairs)

    result = []
    for w, window in enumerate(windows):
        for b, band in enumerate(bands):
            mean_r2 = np.eye(num)
            mean_oriented = np.eye(num)
            for (i, j), avg in zip(pairs, averages):
                mean_r2[i, j] = mean_r2[j, i] = avg[w, b, 0]
                mean_oriented[i, j] = avg[w, b, 1]
                mean_oriented[j, i] = avg[w, b, 2]
            result.append(BandMatrix(band=band, window=window, assets=list(panel.assets),
                                     mean_r2=mean_r2, mean_oriented=mean_oriented))
    return result


def band_to_dict(band: FrequencyBand) -> Dict[str, Any]:
    return {"label": band.label, "s_lo": band.s_lo, "s_hi": band.s_hi}


def band_from_dict(d: Dict[str, Any]) -> FrequencyBand:
    return FrequencyBand(label=str(d["label"]), s_lo=float(d["s_lo"]),
                         s_hi=None if d.get("s_hi") is None else float(d["s_hi"]))


def window_to_dict(window: TimeWindow) -> Dict[str, Any]:
    return {"label": window.label, "start": window.start.isoformat(), "end": window.end.isoformat()}


def window_from_dict(d: Dict[str, Any]) -> TimeWindow:
    return TimeWindow(label=str(d["label"]), start=datetime.date.fromisoformat(str(d["start"])),
                      end=datetime.date.fromisoformat(str(d["end"])))


def band_matrix_to_json(matrix: BandMatrix) -> str:
    """
    Turns the band matrix into the structured report consumed by the network stage.

    :param matrix: the matrix to convert
    :type matrix: BandMatrix
    :return: the JSON string
    :rtype: str
    """
    d = {
        "schema": BAND_MATRIX_SCHEMA,
        "band": band_to_dict(matrix.band),
        "window": window_to_dict(matrix.window),
        "assets": list(matrix.assets),
        "mean_r2": matrix.mean_r2.tolist(),
        "mean_oriented": matrix.mean_oriented.tolist(),
    }
    return json.dumps(d, indent=2, sort_keys=True)


def band_matrix_from_json(s: str) -> BandMatrix:
    """
    Parses a band matrix report.

    :param s: the JSON string
    :type s: str
    :return: the band matrix
    :rtype: BandMatrix
    """
    d = json.loads(s)
    if d.get("schema") != BAND_MATRIX_SCHEMA:
        raise ValueError("Unsupported band matrix schema: %s" % str(d.get("schema")))
    return BandMatrix(band=band_from_dict(d["band"]), window=window_from_dict(d["window"]),
                      assets=[str(x) for x in d["assets"]],
                      mean_r2=np.array(d["mean_r2"], dtype=float),
                      mean_oriented=np.array(d["mean_oriented"], dtype=float))


def write_band_matrix(matrix: BandMatrix, path_r2: str, path_oriented: str, delimiter: str = ","):
    """
    Writes the symmetric and the directed matrix as delimited text with asset headers.

    :param matrix: the matrix to write
    :type matrix: BandMatrix
    :param path_r2: the file for the mean coherence
    :type path_r2: str
    :param path_oriented: the file for the mean oriented coherence (row -> column)
    :type path_oriented: str
    :param delimiter: the column delimiter
    :type delimiter: str
    """
    write_matrix(pd.DataFrame(matrix.mean_r2, index=matrix.assets, columns=matrix.assets), path_r2, delimiter=delimiter)
    write_matrix(pd.DataFrame(matrix.mean_oriented, index=matrix.assets, columns=matrix.assets), path_oriented, delimiter=delimiter)
