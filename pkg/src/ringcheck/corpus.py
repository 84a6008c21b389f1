"""The shipped example algorithms, specs and the example DKR tuple file."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

FILES = ("franklin.rda", "dkr.rda", "phi1.rvs", "phi2.rvs", "phi3.rvs", "fig4.tuples")

# (algorithm file, spec file) -> expected verdict for every round bound
EXPECTED = {
    ("franklin.rda", "phi1.rvs"): "holds",
    ("franklin.rda", "phi2.rvs"): "holds",
    ("dkr.rda", "phi1.rvs"): "violated",
    ("dkr.rda", "phi2.rvs"): "holds",
}


def text(name: str) -> str:
    return resources.files("ringcheck").joinpath("corpus_data").joinpath(name).read_text("utf-8")


def write_corpus(out_dir) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in FILES:
        path = out / name
        path.write_text(text(name), encoding="utf-8")
        written.append(path)
    return written


def algorithm(name: str):
    from .dsl import parse_algorithm
    return parse_algorithm(text(name if "." in name else f"{name}.rda"))


def spec(name: str):
    from .specparse import parse_spec
    return parse_spec(text(name if "." in name else f"{name}.rvs"))


def parse_tuples(text_: str, algo) -> list:
    """One line per round, transition names separated by blanks or commas."""
    rows = []
    for raw in text_.splitlines():
        line = raw.split("#", 1)[0].replace(",", " ").split()
        if line:
            rows.append([algo.transition(name) for name in line])
    return rows


def example_tuples(algo=None) -> list:
    algo = algo or algorithm("dkr")
    return parse_tuples(text("fig4.tuples"), algo)


EXAMPLE_PIDS = (4, 8, 3, 1, 6, 5, 7)
