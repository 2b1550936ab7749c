from typing import NamedTuple


class CellSeeds(NamedTuple):
    env: int
    noise: int
    init: int


def derive_seeds(seed: int, cell_index: int = 0) -> CellSeeds:
    """Environment seed = seed*1000 + cell; noise = that + 1; parameter init = that + 2"""
    base = int(seed) * 1000 + int(cell_index)
    return CellSeeds(base, base + 1, base + 2)
