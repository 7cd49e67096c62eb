"""Bundled selection bases: the movie application and the small running example."""
import os
from dataclasses import dataclass
from pathlib import Path

from ..errors import UnknownVariant
from ..selection.base import SelectionBase, load_base

VARIANTS = {
    "original": ("manifest.txt", "table1.txt"),
    "extended": ("manifest-extended.txt", "table2.txt"),
    "reduced": ("manifest-reduced.txt", "table3.txt"),
}

ABBREVIATIONS = {
    "RM": "s_RandomMovies", "RMN": "s_RandomMoviesNew", "RP": "s_RandomPersons",
    "EM": "s_EachMovie", "HC": "s_Hitchcock", "KG": "s_KellyGrant", "H60": "s_Horror60",
}


def corpus_dir() -> Path:
    """Fixture root; ``SELEKTA_CORPUS`` overrides the bundled copy."""
    env = os.environ.get("SELEKTA_CORPUS")
    return Path(env) if env else Path(__file__).parent


@dataclass
class Expectation:
    candidates: tuple
    best: tuple


@dataclass
class Corpus:
    variant: str
    base: SelectionBase
    queries: dict        # name -> XML-QL text
    expected: dict       # name -> Expectation (source constants)
    root: Path


def _sources(field):
    return tuple(ABBREVIATIONS.get(s, s) for s in field.split(","))


def read_expectations(path):
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, cands, best = line.split()
        out[name] = Expectation(_sources(cands), _sources(best))
    return out


def load_corpus(variant="original") -> Corpus:
    if variant not in VARIANTS:
        raise UnknownVariant(f"unknown corpus variant {variant!r}; "
                             f"choose from {', '.join(sorted(VARIANTS))}")
    manifest, table = VARIANTS[variant]
    root = corpus_dir() / "movie"
    qdir = root / "queries"
    queries = {p.stem: p.read_text(encoding="utf-8") for p in sorted(qdir.glob("*.xmlql"))}
    return Corpus(variant, load_base(root / manifest), queries,
                  read_expectations(root / "expected" / table), root)


def load_running(modified=False):
    """The three-source running example: (base, query text)."""
    root = corpus_dir() / "running"
    base = load_base(root / ("manifest-modified.txt" if modified else "manifest.txt"))
    return base, (root / "query.xmlql").read_text(encoding="utf-8")
