import csv
import datetime
from dataclasses import dataclass
from typing import List, Union

import numpy as np
import pandas as pd
from scipy import stats

from ._errors import DataError

DEFAULT_DATE_FORMAT = "%Y-%m-%d"
DEFAULT_DELIMITER = ","
MIN_STATS_OBSERVATIONS = 8

STATS_COLUMNS = ["mean", "std", "skewness", "kurtosis", "jarque_bera"]


@dataclass
class PriceTable:
    """
    Date-indexed matrix of closing prices (rows: dates, columns: assets). Missing cells are NaN.
    """
    frame: pd.DataFrame

    @property
    def dates(self) -> List[datetime.date]:
        return [x.date() for x in self.frame.index]

    @property
    def assets(self) -> List[str]:
        return [str(x) for x in self.frame.columns]

    @property
    def values(self) -> np.ndarray:
        return self.frame.to_numpy(dtype=float)

    def __len__(self):
        return len(self.frame)


@dataclass
class ReturnPanel:
    """
    Date-indexed matrix of (scaled) log-returns.
    """
    frame: pd.DataFrame
    dt: float = 1.0
    scale: float = 1.0

    @property
    def dates(self) -> List[datetime.date]:
        return [x.date() for x in self.frame.index]

    @property
    def assets(self) -> List[str]:
        return [str(x) for x in self.frame.columns]

    @property
    def values(self) -> np.ndarray:
        return self.frame.to_numpy(dtype=float)

    @property
    def num_assets(self) -> int:
        return self.frame.shape[1]

    def __len__(self):
        return len(self.frame)


@dataclass
class StatsTable:
    """
    Per-asset descriptive statistics, columns: mean, std, skewness, kurtosis (raw), jarque_bera.
    Undefined values (zero variance) are NaN.
    """
    frame: pd.DataFrame


def _read_header(path: str, delimiter: str) -> List[str]:
    """
    Reads the header row of the delimited file.

    :param path: the file to read
    :type path: str
    :param delimiter: the column delimiter
    :type delimiter: str
    :return: the column names
    :rtype: list
    """
    with open(path, "r", newline="") as fp:
        reader = csv.reader(fp, delimiter=delimiter)
        for row in reader:
            return [x.strip() for x in row]
    return []


def load_price_table(path: str, date_column: str = "Date", date_format: str = DEFAULT_DATE_FORMAT,
                     delimiter: str = DEFAULT_DELIMITER) -> PriceTable:
    """
    Loads a delimited file with a header row, one date column and one column per asset.
    Non-numeric cells are kept as missing values (NaN).

    :param path: the file to load
    :type path: str
    :param date_column: the name of the column with the dates
    :type date_column: str
    :param date_format: the strptime format of the dates
    :type date_format: str
    :param delimiter: the column delimiter
    :type delimiter: str
    :return: the price table, sorted by date
    :rtype: PriceTable
    """
    try:
        header = _read_header(path, delimiter)
    except OSError as e:
        raise DataError("Failed to read price file '%s': %s" % (path, str(e)))
    if date_column not in header:
        raise DataError("Date column '%s' not found in: %s" % (date_column, path))
    assets = [x for x in header if x != date_column]
    if len(assets) == 0:
        raise DataError("No asset columns found in: %s" % path)
    if len(set(assets)) != len(assets):
        dups = sorted(set([x for x in assets if assets.count(x) > 1]))
        raise DataError("Duplicate asset columns in '%s': %s" % (path, ", ".join(dups)))

    try:
        df = pd.read_csv(path, sep=delimiter, dtype=str, skipinitialspace=True, keep_default_na=False)
    except Exception as e:
        raise DataError("Failed to read price file '%s': %s" % (path, str(e)))
    df.columns = [str(x).strip() for x in df.columns]

    try:
        dates = pd.to_datetime(df[date_column].str.strip(), format=date_format)
    except (ValueError, TypeError) as e:
        raise DataError("Failed to parse dates in column '%s': %s" % (date_column, str(e)))

    values = df[assets].apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce"))
    values.index = pd.DatetimeIndex(dates, name=date_column)
    values = values.sort_index(kind="mergesort")
    if values.index.has_duplicates:
        dups = values.index[values.index.duplicated()]
        raise DataError("Duplicate dates in '%s': %s" % (path, ", ".join([str(x.date()) for x in dups[:5]])))
    if len(values) < 2:
        raise DataError("At least 2 rows required, found %d in: %s" % (len(values), path))
    return PriceTable(frame=values.astype(float))


def align_and_clean(table: PriceTable) -> PriceTable:
    """
    Drops all rows (dates) that have a missing, non-finite or non-positive price for any asset.

    :param table: the table to clean
    :type table: PriceTable
    :return: the cleaned table
    :rtype: PriceTable
    """
    values = table.frame.to_numpy(dtype=float)
    keep = np.all(np.isfinite(values) & (values > 0), axis=1)
    result = table.frame.loc[keep]
    if len(result) < 2:
        raise DataError("Fewer than 2 complete rows left after cleaning: %d" % len(result))
    return PriceTable(frame=result.copy())


def log_returns(table: PriceTable, scale: float = 1.0, dt: float = 1.0) -> ReturnPanel:
    """
    Computes scale * ln(P[t+1]/P[t]); the date of each return is the later of the two dates.

    :param table: the clean price table
    :type table: PriceTable
    :param scale: the factor to multiply the returns with
    :type scale: float
    :param dt: the sampling interval in days
    :type dt: float
    :return: the return panel
    :rtype: ReturnPanel
    """
    if scale <= 0:
        raise ValueError("Return scale must be positive, supplied: %s" % str(scale))
    values = table.frame.to_numpy(dtype=float)
    returns = scale * np.diff(np.log(values), axis=0)
    if not np.all(np.isfinite(returns)):
        raise DataError("Non-finite returns encountered, clean the price table first!")
    frame = pd.DataFrame(returns, index=table.frame.index[1:], columns=table.frame.columns)
    return ReturnPanel(frame=frame, dt=dt, scale=scale)


def _to_timestamp(d: Union[str, datetime.date]) -> pd.Timestamp:
    return pd.Timestamp(d)


def slice_period(panel: ReturnPanel, start: Union[str, datetime.date], end: Union[str, datetime.date]) -> ReturnPanel:
    """
    Returns the rows with start <= date <= end.

    :param panel: the panel to slice
    :type panel: ReturnPanel
    :param start: the first date (inclusive)
    :param end: the last date (inclusive)
    :return: the sub-period panel
    :rtype: ReturnPanel
    """
    start = _to_timestamp(start)
    end = _to_timestamp(end)
    if start > end:
        raise ValueError("Start date is after end date: %s > %s" % (str(start.date()), str(end.date())))
    index = panel.frame.index
    mask = (index >= start) & (index <= end)
    if not np.any(mask):
        raise DataError("No observations between %s and %s" % (str(start.date()), str(end.date())))
    return ReturnPanel(frame=panel.frame.loc[mask].copy(), dt=panel.dt, scale=panel.scale)


def descriptive_stats(panel: ReturnPanel) -> StatsTable:
    """
    Computes mean, sample std, skewness (m3/m2^1.5), raw kurtosis (m4/m2^2) and
    the Jarque-Bera statistic n/6*(S^2 + (K-3)^2/4) per asset.

    :param panel: the returns
    :type panel: ReturnPanel
    :return: the statistics
    :rtype: StatsTable
    """
    values = panel.values
    n = values.shape[0]
    if n < MIN_STATS_OBSERVATIONS:
        raise DataError("At least %d observations required for statistics, got: %d" % (MIN_STATS_OBSERVATIONS, n))
    rows = []
    for i in range(values.shape[1]):
        x = values[:, i]
        mean = float(np.mean(x))
        std = float(np.std(x, ddof=1))
        m2 = float(np.mean((x - mean) ** 2))
        if m2 <= 0:
            skew = kurt = jb = np.nan
            std = 0.0
        else:
            skew = float(stats.skew(x, bias=True))
            kurt = float(stats.kurtosis(x, fisher=False, bias=True))
            jb = n / 6.0 * (skew ** 2 + (kurt - 3.0) ** 2 / 4.0)
        rows.append([mean, std, skew, kurt, jb])
    frame = pd.DataFrame(rows, index=pd.Index(panel.assets, name="asset"), columns=STATS_COLUMNS)
    return StatsTable(frame=frame)


def pearson_matrix(panel: ReturnPanel) -> pd.DataFrame:
    """
    Computes the Pearson correlation matrix. Entries involving a zero-variance asset are NaN,
    the diagonal is always 1.

    :param panel: the returns
    :type panel: ReturnPanel
    :return: the symmetric asset x asset matrix
    :rtype: pd.DataFrame
    """
    values = panel.values
    if values.shape[0] < 2:
        raise DataError("At least 2 observations required for correlations, got: %d" % values.shape[0])
    centered = values - values.mean(axis=0)
    norms = np.sqrt(np.sum(centered ** 2, axis=0))
    valid = norms > 0
    safe = np.where(valid, norms, 1.0)
    z = centered / safe
    corr = np.clip(z.T @ z, -1.0, 1.0)
    corr = (corr + corr.T) / 2.0
    invalid = ~(valid[:, None] & valid[None, :])
    corr[invalid] = np.nan
    np.fill_diagonal(corr, 1.0)
    return pd.DataFrame(corr, index=panel.assets, columns=panel.assets)


def write_stats(table: StatsTable, path: str, delimiter: str = DEFAULT_DELIMITER):
    """
    Writes the statistics as delimited text.

    :param table: the statistics to write
    :type table: StatsTable
    :param path: the output file
    :type path: str
    :param delimiter: the column delimiter
    :type delimiter: str
    """
    table.frame.to_csv(path, sep=delimiter, float_format="%.10g", na_rep="NA", lineterminator="\n")


def write_matrix(matrix: pd.DataFrame, path: str, delimiter: str = DEFAULT_DELIMITER):
    """
    Writes an asset x asset matrix with row/column headers as delimited text.

    :param matrix: the matrix to write
    :type matrix: pd.DataFrame
    :param path: the output file
    :type path: str
    :param delimiter: the column delimiter
    :type delimiter: str
    """
    matrix.to_csv(path, sep=delimiter, float_format="%.10g", na_rep="NA", index_label="asset", lineterminator="\n")


def read_asset_names(path: str, date_column: str = "Date", delimiter: str = DEFAULT_DELIMITER) -> List[str]:
    """
    Returns the asset names from the header of the price file without loading the data.

    :param path: the file to inspect
    :type path: str
    :param date_column: the name of the date column
    :type date_column: str
    :param delimiter: the column delimiter
    :type delimiter: str
    :return: the asset names
    :rtype: list
    """
    try:
        header = _read_header(path, delimiter)
    except OSError as e:
        raise DataError("Failed to read price file '%s': %s" % (path, str(e)))
    return [x for x in header if x != date_column]


def stats_to_frame(table: StatsTable, pearson: pd.DataFrame = None) -> pd.DataFrame:
    """
    Returns the statistics as frame, optionally with the Pearson correlations appended as columns.

    :param table: the statistics
    :type table: StatsTable
    :param pearson: the optional correlation matrix
    :type pearson: pd.DataFrame
    :return: the combined frame
    :rtype: pd.DataFrame
    """
    result = table.frame.copy()
    if pearson is not None:
        result = result.join(pearson.add_prefix("corr_"))
    return result
