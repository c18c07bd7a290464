from ._prices_csv import PricesCsvReader
