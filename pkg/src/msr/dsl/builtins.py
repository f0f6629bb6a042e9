"""Scenario fixtures shipped with the package."""

from __future__ import annotations

from importlib import resources

from ..errors import MsrError


def builtin_names() -> list[str]:
    root = resources.files(__package__) / "fixtures"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".msr"))


def builtin_source(name: str) -> str:
    names = builtin_names()
    if name not in names:
        raise MsrError(f"unknown builtin {name!r}; available: {', '.join(names)}")
    return (resources.files(__package__) / "fixtures" / f"{name}.msr").read_text(encoding="utf-8")
