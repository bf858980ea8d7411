"""Example presentations shipped with the package."""

from importlib import resources

from .monoid import parse_spec

__all__ = ["bundled_names", "bundled_text", "load_bundled"]


def _root():
    return resources.files("factorlab") / "data" / "specs"


def bundled_names():
    return sorted(p.name[:-5] for p in _root().iterdir() if p.name.endswith(".json"))


def bundled_text(name):
    if name.endswith(".json"):
        name = name[:-5]
    if name not in bundled_names():
        raise KeyError(name)
    return (_root() / f"{name}.json").read_text(encoding="utf-8")


def load_bundled(name):
    return parse_spec(bundled_text(name))
