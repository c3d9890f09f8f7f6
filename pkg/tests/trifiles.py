"""Shared access to the shipped triangulation files."""

from __future__ import annotations

from pathlib import Path

from statesum3d.complexes import parse_triangulation

DATA = Path(__file__).resolve().parents[1] / "src" / "statesum3d" / "data"


def shipped_names():
    return sorted(p.stem for p in (DATA / "triangulations").glob("*.tri"))


def load_tri(name: str):
    return parse_triangulation((DATA / "triangulations" / f"{name}.tri").read_text())


def load_skeleton(name: str):
    from statesum3d.complexes import parse_skeleton
    return parse_skeleton((DATA / "skeletons" / f"{name}.skel").read_text())
