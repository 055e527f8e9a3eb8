import pytest

from bcesim.config import paper_default


def parse_csv(text):
    """CSV text -> list of dicts; numeric cells become floats, NA stays 'NA'."""
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        row = {}
        for name, cell in zip(header, cells):
            if name == "swept_param" or cell == "NA":
                row[name] = cell
            else:
                row[name] = float(cell)
        rows.append(row)
    return rows


@pytest.fixture
def quick_cfg():
    """Short-horizon config for tests that only need a real trace."""
    return paper_default().replace(horizon=200.0, warmup=20.0, replications=2)
