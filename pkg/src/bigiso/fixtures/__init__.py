"""Bundled structure documents for the worked examples and regressions."""

from __future__ import annotations

import importlib.resources as resources


def list_fixtures() -> list:
    names = []
    for entry in resources.files(__name__).iterdir():
        if entry.name.endswith(".bis"):
            names.append(entry.name[: -len(".bis")])
    return sorted(names)


def fixture_path(name: str) -> str:
    if not name.endswith(".bis"):
        name = name + ".bis"
    path = resources.files(__name__) / name
    if not path.is_file():
        known = ", ".join(list_fixtures())
        raise FileNotFoundError(f"no fixture {name!r}; bundled fixtures: {known}")
    return str(path)


def fixture_text(name: str) -> str:
    with open(fixture_path(name), "r", encoding="utf-8") as fh:
        return fh.read()
