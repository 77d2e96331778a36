"""Case catalog: dual graphs of the 15 configurations, glue classes, and printed reference values.

Case files live in ``k3pencils/data`` and use a small line-oriented format::

    # comment
    [META]
    key: value
    [VERTICES]
    L1
    [EDGES]
    L1 L2
    [GLUE]
    L / 3 = L1:1 L2:-1 ...
    [WITNESS]
    W1 / 3 = N1:1 N2:-1 ...

GLUE classes are adjoined to the lattice; WITNESS classes are only tested
for membership in the dual of the glued lattice.
Lines inside a section may come in any order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .fixgeom import node_resolution_type
from .lattice import (
    CurveConfig,
    IntLattice,
    check_divisible_class,
    dynkin_type,
    extend_by_glue,
    gram_from_config,
    search_divisible_classes,
)

DEGREES = (6, 8, 12)
SPECIAL_INDICES = (1, 2, 3, 4)
SECTIONS = ("META", "VERTICES", "EDGES", "GLUE", "WITNESS")


class CatalogError(ValueError):
    """Malformed or inconsistent catalog data."""


def default_catalog_dir() -> Path:
    return Path(str(resources.files("k3pencils") / "data"))


@dataclass(frozen=True)
class GlueClass:
    name: str
    divisor: int
    coefficients: tuple[tuple[str, int], ...]

    def vector(self, labels) -> tuple[int, ...]:
        coeffs = dict(self.coefficients)
        unknown = set(coeffs) - set(labels)
        if unknown:
            raise CatalogError(f"glue class {self.name} uses unknown curves {sorted(unknown)}")
        return tuple(coeffs.get(lab, 0) for lab in labels)


@dataclass
class PencilCase:
    n: int
    special_index: int | None
    config: CurveConfig
    glue: list[GlueClass]
    meta: dict[str, str] = field(default_factory=dict)
    witnesses: list[GlueClass] = field(default_factory=list)

    @property
    def case_id(self) -> str:
        return f"{self.n},{self.special_index if self.special_index else 'generic'}"

    @property
    def is_special(self) -> bool:
        return self.special_index is not None

    @property
    def lambda_(self) -> Fraction | None:
        return Fraction(self.meta["lambda"]) if "lambda" in self.meta else None

    @property
    def node_group(self) -> str | None:
        return self.meta.get("node_group")

    @property
    def ns(self) -> int | None:
        return int(self.meta["ns"]) if "ns" in self.meta else None

    @property
    def swallowed(self) -> list[str]:
        return self.meta.get("swallowed", "").split()

    @property
    def new_vertex(self) -> str | None:
        return self.meta.get("new_vertex")

    @property
    def dynkin(self) -> str | None:
        return self.meta.get("dynkin")

    @property
    def expected_determinant(self) -> int:
        return int(self.meta["expected_determinant"])

    def lattice(self) -> IntLattice:
        return gram_from_config(self.config)

    def glue_vectors(self) -> list[tuple[tuple[int, ...], int]]:
        return [(g.vector(self.config.labels), g.divisor) for g in self.glue]

    def glued_lattice(self) -> IntLattice:
        base = self.lattice()
        vs = [tuple(Fraction(x, p) for x in c) for c, p in self.glue_vectors()]
        return extend_by_glue(base, vs)

    def witness_vectors(self) -> list[tuple[str, tuple[Fraction, ...]]]:
        return [
            (w.name, tuple(Fraction(x, w.divisor) for x in w.vector(self.config.labels))) for w in self.witnesses
        ]

    def special_component(self) -> CurveConfig:
        if not self.is_special:
            raise CatalogError("generic cases have no node component")
        comp = next(c for c in self.config.components() if self.new_vertex in c)
        return self.config.restrict(comp)


_GLUE_RE = re.compile(r"^(?P<name>\S+)\s*/\s*(?P<p>\d+)\s*=\s*(?P<body>.+)$")


def parse_case_text(text: str, source: str = "<text>") -> PencilCase:
    sections: dict[str, list[str]] = {s: [] for s in SECTIONS}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().upper()
            if current not in sections:
                raise CatalogError(f"{source}:{lineno}: unknown section {current}")
            continue
        if current is None:
            raise CatalogError(f"{source}:{lineno}: content before the first section")
        sections[current].append(line)

    meta = {}
    for line in sections["META"]:
        key, sep, value = line.partition(":")
        if not sep:
            raise CatalogError(f"{source}: META line without ':': {line!r}")
        meta[key.strip()] = value.strip()
    try:
        n = int(meta["n"])
        case = meta["case"]
    except KeyError as exc:
        raise CatalogError(f"{source}: META lacks {exc}") from None
    if n not in DEGREES:
        raise CatalogError(f"{source}: degree {n} not supported")
    special = None if case == "generic" else int(case)

    edges = []
    for line in sections["EDGES"]:
        parts = line.split()
        if len(parts) != 2:
            raise CatalogError(f"{source}: edge line must name two curves: {line!r}")
        edges.append((parts[0], parts[1]))
    config = CurveConfig(sections["VERTICES"], edges)

    glue = [_parse_class(line, source) for line in sections["GLUE"]]
    witnesses = [_parse_class(line, source) for line in sections["WITNESS"]]
    return PencilCase(n, special, config, glue, meta, witnesses)


def _parse_class(line: str, source: str) -> GlueClass:
    m = _GLUE_RE.match(line)
    if not m:
        raise CatalogError(f"{source}: malformed class line {line!r}")
    coeffs = []
    for item in m["body"].split():
        lab, sep, c = item.partition(":")
        if not sep:
            raise CatalogError(f"{source}: coefficient without ':' in {line!r}")
        coeffs.append((lab, int(c)))
    return GlueClass(m["name"], int(m["p"]), tuple(coeffs))


def parse_case_id(case_id: str) -> tuple[int, int | None]:
    try:
        n_str, idx = (x.strip() for x in case_id.split(","))
        n = int(n_str)
    except ValueError:
        raise CatalogError(f"unknown case id {case_id!r}") from None
    if n not in DEGREES:
        raise CatalogError(f"unknown case id {case_id!r}")
    if idx == "generic":
        return n, None
    if idx.isdigit() and int(idx) in SPECIAL_INDICES:
        return n, int(idx)
    raise CatalogError(f"unknown case id {case_id!r}")


def all_case_ids() -> list[str]:
    out = []
    for n in DEGREES:
        out.append(f"{n},generic")
        out += [f"{n},{i}" for i in SPECIAL_INDICES]
    return out


@lru_cache(maxsize=None)
def load_case(case_id: str, catalog_dir: str | None = None) -> PencilCase:
    n, idx = parse_case_id(case_id)
    root = Path(catalog_dir) if catalog_dir else default_catalog_dir()
    path = root / f"case_{n}_{idx if idx else 'generic'}.txt"
    if not path.exists():
        raise CatalogError(f"catalog file {path} is missing")
    case = parse_case_text(path.read_text(encoding="utf-8"), str(path))
    if case.n != n or case.special_index != idx:
        raise CatalogError(f"{path}: META does not match the file name")
    return case


def generic_config(n: int, catalog_dir: str | None = None) -> CurveConfig:
    case = load_case(f"{n},generic", catalog_dir)
    if len(case.config) != 19:
        raise CatalogError(f"generic degree-{n} graph has {len(case.config)} curves, not 19")
    return case.config


def curve_sources(n: int, catalog_dir: str | None = None) -> dict[str, str]:
    """Curve label -> fix-line type it resolves, for curves coming from off-quadric lines."""
    raw = load_case(f"{n},generic", catalog_dir).meta.get("sources", "")
    out = {}
    for item in raw.split():
        lab, sep, kind = item.partition(":")
        if not sep:
            raise CatalogError(f"malformed source entry {item!r}")
        out[lab] = kind
    return out


def special_config(n: int, i: int, catalog_dir: str | None = None) -> CurveConfig:
    """The 20-curve graph, validated against the generic graph and the node group."""
    case = load_case(f"{n},{i}", catalog_dir)
    validate_special(case, load_case(f"{n},generic", catalog_dir))
    return case.config


def validate_special(case: PencilCase, generic: PencilCase) -> None:
    cfg = case.config
    if len(cfg) != 20:
        raise CatalogError(f"case {case.case_id} has {len(cfg)} curves, not 20")
    new = case.new_vertex
    if new is None or set(cfg.labels) != set(generic.config.labels) | {new}:
        raise CatalogError(f"case {case.case_id} must add exactly one new curve to the generic labels")
    swallowed = set(case.swallowed)
    if not swallowed <= set(generic.config.labels):
        raise CatalogError(f"case {case.case_id} swallows unknown curves")
    untouched = lambda edges: {e for e in edges if not (e & (swallowed | {new}))}  # noqa: E731
    if untouched(cfg.edges) != untouched(generic.config.edges):
        raise CatalogError(f"case {case.case_id} changes edges away from the swallowed curves")
    comp = case.special_component()
    if set(comp.labels) != swallowed | {new}:
        raise CatalogError(f"case {case.case_id}: node component is not the swallowed curves plus {new}")
    drawn = dynkin_type(comp)
    expected = node_resolution_type(case.node_group)
    if drawn != expected or drawn != case.dynkin:
        raise CatalogError(f"case {case.case_id}: component is {drawn}, node group demands {expected}")


def glue_classes(case: PencilCase) -> list[tuple[tuple[int, ...], int]]:
    """Glue vectors of the case, each checked against the divisibility conditions."""
    lat = case.lattice()
    out = []
    for g, (vec, p) in zip(case.glue, case.glue_vectors()):
        check = check_divisible_class(vec, p, lat)
        if not check.ok:
            raise CatalogError(f"case {case.case_id}: glue class {g.name} fails: {'; '.join(check.reasons)}")
        out.append((vec, p))
    return out


def search_glue_classes(case: PencilCase, p: int) -> list[tuple[int, ...]]:
    """Provenance oracle: every {0, +-1} class of the right support with c/p integral and even."""
    return search_divisible_classes(case.lattice(), p)


# --------------------------------------------------------------------------
# printed reference values
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpectedEntry:
    key: str
    value: str
    table: str


class ExpectedTable:
    """Read-only map from keys such as ``group_order.6`` to printed values."""

    def __init__(self, entries: dict[str, ExpectedEntry]):
        self._entries = dict(entries)

    def __getitem__(self, key: str) -> str:
        return self._entries[key].value

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def table(self, key: str) -> str:
        return self._entries[key].table

    def keys(self):
        return self._entries.keys()

    def int(self, key: str) -> int:
        return int(self[key])

    def mapping(self, key: str) -> list[tuple[str, str]]:
        """Parse 'a:b c:d' into [(a, b), (c, d)]."""
        return [tuple(item.split(":", 1)) for item in self[key].split()]

    def rows(self, key: str) -> list[list[str]]:
        return [part.split() for part in self[key].split(";")]


def parse_expected_text(text: str) -> ExpectedTable:
    entries = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 3:
            raise CatalogError(f"expected-value line needs three fields: {line!r}")
        key, value, table = parts
        if key in entries:
            raise CatalogError(f"duplicate expected key {key}")
        entries[key] = ExpectedEntry(key, value, table)
    return ExpectedTable(entries)


@lru_cache(maxsize=None)
def expected_table(catalog_dir: str | None = None) -> ExpectedTable:
    root = Path(catalog_dir) if catalog_dir else default_catalog_dir()
    path = root / "expected.txt"
    if not path.exists():
        raise CatalogError(f"expected-value table {path} is missing")
    return parse_expected_text(path.read_text(encoding="utf-8"))


def parse_factored(text: str) -> int:
    """Evaluate '2^3*3^2*5' or '-2^3' style products."""
    text = text.strip().replace("−", "-")
    sign = -1 if text.startswith("-") else 1
    value = 1
    for part in text.lstrip("-").split("*"):
        base, _, exp = part.partition("^")
        value *= int(base) ** (int(exp) if exp else 1)
    return sign * value


def parse_ratio(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(parse_factored(num), parse_factored(den) if den else 1)


def lambdas(n: int, catalog_dir: str | None = None) -> list[Fraction]:
    """The four singular parameters, read from the special case files."""
    return [load_case(f"{n},{i}", catalog_dir).lambda_ for i in SPECIAL_INDICES]
