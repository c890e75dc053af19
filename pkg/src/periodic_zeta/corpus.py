"""Voltage graphs shipped with the package."""

from importlib import resources

from .graph import VoltageGraph, load_graph

# stabilizer_z2 is deliberately excluded: its census fails at length 4.
CORPUS = (
    "example",
    "example_shifted",
    "path",
    "square_grid",
    "square_grid_doubled",
    "honeycomb",
    "ladder",
    "twisted_z13",
)


def data_path(name: str):
    return resources.files(__package__).joinpath("data", f"{name}.json")


def load(name: str) -> VoltageGraph:
    with resources.as_file(data_path(name)) as p:
        return load_graph(p)


def load_corpus() -> dict:
    return {name: load(name) for name in CORPUS}
