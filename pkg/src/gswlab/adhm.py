"""ADHM data, the hyperKahler moment maps and the group actions on them.

Data are complex matrices ``B1, B2`` (n x n), ``C`` (n x r) and ``D``
(r x n).  The level ``mu = i`` is read as ``mu_R = (i zeta / 2) Id``,
``mu_C = 0`` with a configurable zeta > 0.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NonUnitScalar, NotOnSlice, ParseError, ShapeMismatch

LEVEL_TOL = 1e-9
UNIT_TOL = 1e-12
BLOCKS = ("B1", "B2", "C", "D")


def _dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


@dataclass(frozen=True, eq=False)
class ADHMData:
    B1: np.ndarray
    B2: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        mats = {k: np.array(getattr(self, k), dtype=np.complex128) for k in BLOCKS}
        n = mats["B1"].shape[0] if mats["B1"].ndim == 2 else -1
        r = mats["C"].shape[1] if mats["C"].ndim == 2 else -1
        expected = {"B1": (n, n), "B2": (n, n), "C": (n, r), "D": (r, n)}
        for k, m in mats.items():
            if m.shape != expected[k]:
                raise ShapeMismatch(f"{k} has shape {m.shape}, expected {expected[k]}")
            if not np.all(np.isfinite(m)):
                raise ShapeMismatch(f"{k} has non-finite entries")
            m.setflags(write=False)
            object.__setattr__(self, k, m)

    @property
    def n(self):
        return self.B1.shape[0]

    @property
    def r(self):
        return self.C.shape[1]

    @classmethod
    def zeros(cls, r, n):
        return cls(np.zeros((n, n)), np.zeros((n, n)), np.zeros((n, r)), np.zeros((r, n)))

    @classmethod
    def random(cls, rng, r, n):
        def m(shape):
            return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

        return cls(m((n, n)), m((n, n)), m((n, r)), m((r, n)))

    def blocks(self):
        return tuple(getattr(self, k) for k in BLOCKS)


def adhm_moment(d):
    """``mu_R = (i/2)([B1,B1^+] + [B2,B2^+] + C C^+ - D^+ D)`` and ``mu_C = [B1,B2] + C D``."""
    B1, B2, C, D = d.blocks()
    muR = 0.5j * (B1 @ _dagger(B1) - _dagger(B1) @ B1 + B2 @ _dagger(B2) - _dagger(B2) @ B2 + C @ _dagger(C) - _dagger(D) @ D)
    muC = B1 @ B2 - B2 @ B1 + C @ D
    return muR, muC


@dataclass(frozen=True)
class LevelReport:
    level: str
    zeta: float
    defect: float
    member: bool


def level_set_check(d, level="zero", zeta=1.0, tol=LEVEL_TOL):
    """Membership in ``mu = 0`` or ``mu_R = (i zeta/2) Id, mu_C = 0``; Frobenius defects."""
    muR, muC = adhm_moment(d)
    if level == "zero":
        target = np.zeros_like(muR)
    elif level == "i":
        if not zeta > 0:
            raise ValueError("the i-level needs zeta > 0")
        target = 0.5j * zeta * np.eye(d.n)
    else:
        raise ValueError(f"unknown level {level!r}; use 'zero' or 'i'")
    defect = float(np.linalg.norm(muR - target) + np.linalg.norm(muC))
    return LevelReport(level, float(zeta), defect, defect <= tol)


def unitary_action(g, d):
    """``(g^-1 B1 g, g^-1 B2 g, g^-1 C, D g)`` for unitary g."""
    gi = _dagger(g)
    return ADHMData(gi @ d.B1 @ g, gi @ d.B2 @ g, gi @ d.C, d.D @ g)


def _check_unit(z):
    z = complex(z)
    if abs(abs(z) - 1.0) > UNIT_TOL:
        raise NonUnitScalar(f"|z| = {abs(z)} is not 1")
    return z


def s1_action(z, p, d):
    """``(B1, z^p B2, C, z^p D)``."""
    zp = _check_unit(z) ** int(p)
    return ADHMData(d.B1, zp * d.B2, d.C, zp * d.D)


def on_slice(d, tol=0.0):
    return np.abs(d.B1).max(initial=0.0) <= tol and np.abs(d.B2).max(initial=0.0) <= tol


def tgr_slice_check(d, zeta=1.0, tol=LEVEL_TOL):
    """True iff B1 = B2 = 0, C has rank n and d lies on the i-level."""
    if not on_slice(d, tol):
        return False
    if d.n == 0 or np.linalg.matrix_rank(d.C, tol=max(tol, 1e-12)) < d.n:
        return False
    return level_set_check(d, "i", zeta, tol).member


def conjugation_c(d, tol=0.0):
    """Entrywise complex conjugation of (C, D) on the slice B1 = B2 = 0."""
    if not on_slice(d, tol):
        raise NotOnSlice("conjugation is defined on the slice B1 = B2 = 0")
    return ADHMData(d.B1, d.B2, np.conj(d.C), np.conj(d.D))


def slice_example(zeta=1.0):
    """r = 2, n = 1 datum on the i-level: C = (sqrt(zeta), 0), all else zero."""
    return ADHMData(np.zeros((1, 1)), np.zeros((1, 1)), np.array([[np.sqrt(zeta), 0.0]]), np.zeros((2, 1)))


# --- files --------------------------------------------------------------------


def to_json(d):
    def enc(m):
        return [[[float(x.real), float(x.imag)] for x in row] for row in m]

    return json.dumps({"r": d.r, "n": d.n, **{k: enc(getattr(d, k)) for k in BLOCKS}}, indent=1)


def from_json(text, source="<json>"):
    try:
        obj = json.loads(text)
        r, n = int(obj["r"]), int(obj["n"])
        mats = {k: np.array(obj[k], dtype=np.float64) for k in BLOCKS}
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"{source}: {exc}") from None
    shapes = {"B1": (n, n, 2), "B2": (n, n, 2), "C": (n, r, 2), "D": (r, n, 2)}
    for k, m in mats.items():
        if m.shape != shapes[k] and not (m.size == 0 and 0 in shapes[k]):
            raise ParseError(f"{source}: block {k} has shape {m.shape[:2]}, header says {shapes[k][:2]}")
    return ADHMData(*(mats[k].reshape(shapes[k])[..., 0] + 1j * mats[k].reshape(shapes[k])[..., 1] for k in BLOCKS))


def to_csv(d):
    """Line 1 ``r,n``; line 2 the values; line 3 ``block,row,col,re,im``; then every entry row-major."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "n"])
    w.writerow([d.r, d.n])
    w.writerow(["block", "row", "col", "re", "im"])
    for k in BLOCKS:
        m = getattr(d, k)
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                w.writerow([k, i, j, repr(float(m[i, j].real)), repr(float(m[i, j].imag))])
    return buf.getvalue()


def from_csv(text, source="<csv>"):
    """Parse the CSV layout of :func:`to_csv`; entries not listed are zero."""
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) < 3 or [c.strip() for c in rows[0]] != ["r", "n"]:
        raise ParseError(f"{source}:1: expected header 'r,n'")
    try:
        r, n = (int(c) for c in rows[1])
    except ValueError:
        raise ParseError(f"{source}:2: expected two integers 'r,n'") from None
    if r < 0 or n < 0:
        raise ParseError(f"{source}:2: r and n must be non-negative")
    if [c.strip() for c in rows[2]] != ["block", "row", "col", "re", "im"]:
        raise ParseError(f"{source}:3: expected header 'block,row,col,re,im'")
    shapes = {"B1": (n, n), "B2": (n, n), "C": (n, r), "D": (r, n)}
    mats = {k: np.zeros(s, dtype=np.complex128) for k, s in shapes.items()}
    seen = set()
    for lineno, row in enumerate(rows[3:], start=4):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 5:
            raise ParseError(f"{source}:{lineno}: expected 5 fields, got {len(row)}")
        k = row[0].strip()
        if k not in mats:
            raise ParseError(f"{source}:{lineno}: unknown block {k!r}")
        try:
            i, j = int(row[1]), int(row[2])
            val = complex(float(row[3]), float(row[4]))
        except ValueError:
            raise ParseError(f"{source}:{lineno}: malformed number") from None
        if not (0 <= i < shapes[k][0] and 0 <= j < shapes[k][1]):
            raise ParseError(f"{source}:{lineno}: index ({i}, {j}) outside {k} of shape {shapes[k]}")
        if (k, i, j) in seen:
            raise ParseError(f"{source}:{lineno}: duplicate entry {k}[{i},{j}]")
        seen.add((k, i, j))
        mats[k][i, j] = val
    return ADHMData(*(mats[k] for k in BLOCKS))


def load_adhm(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    if path.suffix == ".json":
        return from_json(text, str(path))
    return from_csv(text, str(path))


def save_adhm(path, d):
    path = Path(path)
    path.write_text(to_json(d) if path.suffix == ".json" else to_csv(d), encoding="utf-8")
