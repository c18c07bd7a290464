import os

import numpy as np
import pandas as pd
import pytest

from wcnet.api import ReturnPanel


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the long Monte Carlo checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo check, only runs with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def business_days(n: int, start: str = "2019-01-01") -> pd.DatetimeIndex:
    return pd.bdate_range(start=start, periods=n)


def returns_to_prices(returns: np.ndarray, start_price: float = 100.0) -> np.ndarray:
    """
    Turns the (n, m) log-returns into (n+1, m) prices.
    """
    log_prices = np.vstack([np.zeros((1, returns.shape[1])), np.cumsum(returns, axis=0)])
    return start_price * np.exp(log_prices)


def write_prices(path: str, prices: np.ndarray, assets, start: str = "2019-01-01", date_column: str = "Date"):
    frame = pd.DataFrame(prices, columns=list(assets))
    frame.insert(0, date_column, [d.strftime("%Y-%m-%d") for d in business_days(len(prices), start=start)])
    frame.to_csv(path, index=False, float_format="%.8f")
    return path


def band_limited(rng: np.random.Generator, n: int, period_lo: float, period_hi: float) -> np.ndarray:
    """
    Unit-variance noise that only contains periods between period_lo and period_hi.
    """
    spectrum = np.fft.rfft(rng.normal(size=n))
    freqs = np.fft.rfftfreq(n)
    mask = (freqs >= 1.0 / period_hi) & (freqs <= 1.0 / period_lo)
    result = np.fft.irfft(spectrum * mask, n=n)
    return result / result.std()


def make_panel(values: np.ndarray, assets=None, start: str = "2019-01-01") -> ReturnPanel:
    if assets is None:
        assets = ["A%02d" % i for i in range(values.shape[1])]
    frame = pd.DataFrame(values, index=business_days(values.shape[0], start=start), columns=assets)
    return ReturnPanel(frame=frame)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def prices_csv(tmp_path):
    """
    400 business days of prices for 4 assets: two pairs driven by common factors.
    """
    rng = np.random.default_rng(1)
    n = 399
    f1 = band_limited(rng, n, 6, 18)
    f2 = band_limited(rng, n, 6, 18)
    returns = 0.01 * np.column_stack([
        f1 + 0.4 * rng.normal(size=n),
        f1 + 0.4 * rng.normal(size=n),
        f2 + 0.4 * rng.normal(size=n),
        f2 + 0.4 * rng.normal(size=n),
    ])
    path = os.path.join(str(tmp_path), "prices.csv")
    return write_prices(path, returns_to_prices(returns), ["Gold", "Silver", "S&P 500", "Euro Stoxx"])
