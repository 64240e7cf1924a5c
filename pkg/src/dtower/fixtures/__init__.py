"""Bundled data corpus: printed operators and polynomials plus golden values.

Every payload is a plain-text file under data/; load() parses it and
checks pinned degree / leading-coefficient / constant-term metadata so a
corrupted file breaks the build instead of silently skewing results.
The directory can be overridden with the DTOWER_FIXTURE_DIR environment
variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

from ..diffop import parse_operator, parse_ratfunc

# (degree, leading coefficient, constant term) pins for the polynomials
_POLY_PINS = {
    "p10": (10, 145212480, -1453000612770),
    "p12": (12, 474360768, -484333537590),
    "p21": (21, 33738662956400640, -216750973486226203339484400),
    "p22": (22, 206649310607953920, 703736926903331829024300),
    "p28": (28, 222000402253116211200,
            -17095610140484667152552076876139296000),
    "p43": (43, 697115132002046172480720076800000,
            -3137634679643321707303313577336229275827023029827551200000),
}

# names referenced by the published analysis but whose coefficients were
# never printed; recorded so nothing can silently depend on them
NOT_PRINTED = ("p70", "q70", "p81", "p93", "p123", "p164")

_OPERATORS = {
    "E2": ("e2_theta.txt", 7),
    "3F2": ("f3f2_theta.txt", 3),
}


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str  # "operator" | "polynomial" | "trivariate" | "not-printed"
    text: str
    payload: object
    source: str = "published dataset"


def _read(fname: str) -> str:
    override = os.environ.get("DTOWER_FIXTURE_DIR")
    if override:
        with open(os.path.join(override, fname)) as fh:
            return fh.read()
    return resources.files(__package__).joinpath("data", fname).read_text()


def available():
    return sorted(list(_POLY_PINS) + list(_OPERATORS) + ["generic"]
                  + list(NOT_PRINTED))


def load(name: str) -> Fixture:
    if name in _OPERATORS:
        fname, order = _OPERATORS[name]
        text = _read(fname).strip()
        op = parse_operator(text)
        if op.order != order:
            raise ValueError(f"fixture {name}: expected order {order}, got {op.order}")
        return Fixture(name, "operator", text, op)
    if name in _POLY_PINS:
        text = _read(f"{name}.txt").strip()
        rf = parse_ratfunc(text)
        if rf.den.degree != 0:
            raise ValueError(f"fixture {name}: not a polynomial")
        poly = rf.num / rf.den[0]
        deg, lead, const = _POLY_PINS[name]
        if poly.degree != deg or poly.lc() != lead or poly[0] != const:
            raise ValueError(f"fixture {name}: pinned metadata mismatch")
        return Fixture(name, "polynomial", text, poly)
    if name == "generic":
        from ..diagonal import TrivariateRational
        lines = [ln for ln in _read("generic_trivariate.txt").splitlines()
                 if ln.strip()]
        num_text, den_text = lines[0], lines[1]
        R = TrivariateRational.parse(num_text.replace("^", "**"),
                                     den_text.replace("^", "**"))
        return Fixture(name, "trivariate", f"{num_text}\n{den_text}", R)
    if name in NOT_PRINTED:
        return Fixture(name, "not-printed", "", None)
    raise KeyError(f"unknown fixture {name!r}; known: {', '.join(available())}")
