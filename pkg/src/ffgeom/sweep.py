"""Experiment sweeps: JSON configs, deterministic per-cell seeding, optional
thread parallelism, and CSV/JSON emission.

Reproducibility contract: an identical config produces byte-identical output
regardless of thread count. Cells are seeded from (global seed, cell index)
with a splitmix-style derivation, computed independently, and merged in cell
order. Cell runtimes are only measured when the config opts in (timing: true),
because measured times would break the byte-determinism guarantee.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path

from . import constructions, counting
from .field import PrimeField, is_prime
from .varieties import enum_paraboloid, on_paraboloid, random_subset

# Threshold exponent alpha(d) = (d^2 - 1) / (2d) probed by the sweeps; 4/3
# at d = 3. The planar non-degenerate triangle bound kicks in at 5/4.
def threshold_exponent(d: int) -> float:
    return (d * d - 1) / (2 * d)


# Default primes for product-ratio sweeps: ratios stabilize by here while
# cells stay seconds-scale. All are 3 mod 4.
DEFAULT_RATIO_SWEEP_PRIMES = (23, 31, 43, 47, 59, 67, 71, 79, 83, 103)


MASK64 = (1 << 64) - 1


def derive_seed(global_seed: int, index: int) -> int:
    """Stable splitmix64 derivation of a per-cell seed."""
    x = (global_seed + 0x9E3779B97F4A7C15 * (index + 1)) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Family:
    kind: str
    alpha: float | None = None
    construction: str | None = None
    k: int | None = None
    k_rule: str | None = None
    num_lines: int | None = None
    points_per_line: int | None = None

    def label(self) -> str:
        if self.kind == "random_paraboloid_subset":
            return f"random_paraboloid_subset(alpha={self.alpha:.9g})"
        if self.kind == "construction":
            kspec = self.k if self.k is not None else self.k_rule
            return f"construction({self.construction},k={kspec})"
        return f"lines(L={self.num_lines},M={self.points_per_line})"


@dataclass(frozen=True)
class SweepConfig:
    primes: tuple[int, ...]
    dims: tuple[int, ...]
    families: tuple[Family, ...]
    trials: int
    seed: int = 0
    threads: int = 1
    out: str | None = None
    format: str = "csv"
    cap: int | None = None
    timing: bool = False


_FAMILY_KEYS = {
    "random_paraboloid_subset": {"kind", "alpha"},
    "construction": {"kind", "construction", "k", "k_rule"},
    "lines": {"kind", "lines", "per_line"},
}

_CONFIG_KEYS = {
    "primes",
    "dims",
    "families",
    "trials",
    "seed",
    "threads",
    "out",
    "format",
    "cap",
    "timing",
}


def _parse_alpha(value) -> float:
    if isinstance(value, str):
        num, _, den = value.partition("/")
        return float(num) / float(den) if den else float(num)
    return float(value)


def parse_family(doc: dict, max_dim: int) -> Family:
    if "kind" not in doc:
        raise ConfigError("family missing 'kind'")
    kind = doc["kind"]
    if kind not in _FAMILY_KEYS:
        raise ConfigError(f"unknown family kind {kind!r}")
    unknown = set(doc) - _FAMILY_KEYS[kind]
    if unknown:
        raise ConfigError(f"unknown family key(s) {sorted(unknown)} for kind {kind!r}")
    if kind == "random_paraboloid_subset":
        if "alpha" not in doc:
            raise ConfigError("random_paraboloid_subset needs 'alpha'")
        alpha = _parse_alpha(doc["alpha"])
        if not 0 < alpha <= max_dim - 1:
            raise ConfigError(f"alpha {alpha} outside (0, d-1] for the largest requested d")
        return Family(kind, alpha=alpha)
    if kind == "construction":
        name = doc.get("construction")
        if name not in {"even2mod4", "even0mod4", "odd3mod4"}:
            raise ConfigError(f"unknown construction {name!r}")
        if ("k" in doc) == ("k_rule" in doc):
            raise ConfigError("construction family needs exactly one of 'k' or 'k_rule'")
        if "k_rule" in doc and doc["k_rule"] not in {"max_leq_sqrt", "max_proper"}:
            raise ConfigError(f"unknown k_rule {doc['k_rule']!r}")
        return Family(kind, construction=name, k=doc.get("k"), k_rule=doc.get("k_rule"))
    if doc.get("lines") is None or doc.get("per_line") is None:
        raise ConfigError("lines family needs 'lines' and 'per_line'")
    return Family(kind, num_lines=int(doc["lines"]), points_per_line=int(doc["per_line"]))


def parse_config(source) -> SweepConfig:
    """Parse a config from a path, JSON text, or a dict. Unknown keys are
    errors, never silently ignored."""
    if isinstance(source, dict):
        doc = source
    else:
        text = Path(source).read_text(encoding="utf-8") if not str(source).lstrip().startswith("{") else str(source)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"malformed config: {e}") from e
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
    for key in ("primes", "dims", "families"):
        if key not in doc or not doc[key]:
            raise ConfigError(f"config needs a non-empty '{key}'")
    primes = tuple(int(p) for p in doc["primes"])
    for p in primes:
        if p == 2 or not is_prime(p):
            raise ConfigError(f"prime list contains {p}, which is not an odd prime")
    dims = tuple(int(d) for d in doc["dims"])
    if any(d < 2 for d in dims):
        raise ConfigError("dims must all be >= 2")
    trials = int(doc.get("trials", 1))
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    families = tuple(parse_family(f, max(dims)) for f in doc["families"])
    return SweepConfig(
        primes=primes,
        dims=dims,
        families=families,
        trials=trials,
        seed=int(doc.get("seed", 0)),
        threads=int(doc.get("threads", 1)),
        out=doc.get("out"),
        format=doc.get("format", "csv"),
        cap=doc.get("cap"),
        timing=bool(doc.get("timing", False)),
    )


CSV_COLUMNS = [
    "p",
    "d",
    "family",
    "trial",
    "set_size",
    "prod_size",
    "prod_ratio",
    "D",
    "D_star",
    "M",
    "t_nde",
    "t_de",
    "t_star",
    "degenerate_pairs",
    "runtime_ms",
    "seed",
    "error",
]


@dataclass(frozen=True)
class SweepRow:
    p: int
    d: int
    family: str
    trial: int
    set_size: int = 0
    prod_size: int = 0
    prod_ratio: float = 0.0
    D: int = 0
    D_star: int = 0
    M: int = 0
    t_nde: int = 0
    t_de: int = 0
    t_star: int = 0
    degenerate_pairs: int = 0
    runtime_ms: float = 0.0
    seed: int = 0
    error: str = ""

    def as_record(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "family": self.family,
            "trial": self.trial,
            "set_size": self.set_size,
            "prod_size": self.prod_size,
            "prod_ratio": float(f"{self.prod_ratio:.9g}"),
            "D": self.D,
            "D_star": self.D_star,
            "M": self.M,
            "t_nde": self.t_nde,
            "t_de": self.t_de,
            "t_star": self.t_star,
            "degenerate_pairs": self.degenerate_pairs,
            "runtime_ms": float(f"{self.runtime_ms:.9g}"),
            "seed": self.seed,
            "error": self.error,
        }


@lru_cache(maxsize=8)
def _paraboloid(p: int, d: int, cap: int | None):
    return enum_paraboloid(PrimeField(p), d, cap)


def _resolve_k(family: Family, p: int) -> int:
    if family.k is not None:
        if (p - 1) % family.k:
            raise ValueError(f"k={family.k} does not divide p-1={p - 1}")
        return family.k
    divisors = [k for k in range(1, p) if (p - 1) % k == 0]
    if family.k_rule == "max_leq_sqrt":
        return max(k for k in divisors if k * k <= p - 1)
    return max(k for k in divisors if k < p - 1)  # max_proper


def build_cell_set(field: PrimeField, d: int, family: Family, seed: int, cap: int | None):
    p = field.p
    if family.kind == "random_paraboloid_subset":
        P = _paraboloid(p, d, cap)
        size = min(math.ceil(p**family.alpha), len(P))
        return random_subset(P, size, seed)
    if family.kind == "construction":
        k = _resolve_k(family, p)
        builders = {
            "even2mod4": constructions.construct_even_2mod4,
            "even0mod4": constructions.construct_even_0mod4,
            "odd3mod4": constructions.construct_odd_3mod4,
        }
        return builders[family.construction](field, d, k, seed)
    if d != 2:
        raise ValueError("lines family applies only to d = 2 cells")
    return constructions.isotropic_lines_set(field, family.num_lines, family.points_per_line, seed)


def run_cell(p: int, d: int, family: Family, trial: int, seed: int, cap, timing: bool) -> SweepRow:
    row = SweepRow(p=p, d=d, family=family.label(), trial=trial, seed=seed)
    t0 = time.perf_counter() if timing else 0.0
    try:
        field = PrimeField(p)
        E = build_cell_set(field, d, family, seed, cap)
        prod = counting.product_set(E)
        tri = counting.isosceles_counts(E)
        d_star = counting.count_D_star(E, allow_ambient_base=not on_paraboloid(E))
        row = replace(
            row,
            set_size=len(E),
            prod_size=len(prod),
            prod_ratio=len(prod) / p,
            D=counting.count_D(E),
            D_star=d_star,
            M=counting.count_M(E),
            t_nde=tri.t_nde,
            t_de=tri.t_de,
            t_star=tri.t_star,
            degenerate_pairs=tri.degenerate_pairs,
        )
    except Exception as e:  # failures are recorded in-row, never abort a sweep
        row = replace(row, error=f"{type(e).__name__}: {e}")
    if timing:
        row = replace(row, runtime_ms=(time.perf_counter() - t0) * 1e3)
    return row


def iter_cells(config: SweepConfig):
    index = 0
    for p in config.primes:
        for d in config.dims:
            for family in config.families:
                for trial in range(config.trials):
                    yield index, p, d, family, trial
                    index += 1


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    cells = list(iter_cells(config))
    args = [
        (p, d, fam, trial, derive_seed(config.seed, idx), config.cap, config.timing)
        for idx, p, d, fam, trial in cells
    ]
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            rows = list(pool.map(lambda a: run_cell(*a), args))
    else:
        rows = [run_cell(*a) for a in args]
    return rows


def rows_to_csv_bytes(rows: list[SweepRow]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        rec = row.as_record()
        writer.writerow(
            [
                f"{rec[c]:.9g}" if isinstance(rec[c], float) else str(rec[c])
                for c in CSV_COLUMNS
            ]
        )
    return buf.getvalue().encode("utf-8")


def rows_to_json_bytes(rows: list[SweepRow]) -> bytes:
    return (json.dumps([r.as_record() for r in rows], indent=2) + "\n").encode("utf-8")


def emit_rows(rows: list[SweepRow], fmt: str, out=None) -> bytes:
    """Serialize rows; write to the given path when one is provided."""
    if fmt == "csv":
        payload = rows_to_csv_bytes(rows)
    elif fmt == "json":
        payload = rows_to_json_bytes(rows)
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
    if out:
        Path(out).write_bytes(payload)
    return payload


def parse_csv_rows(payload: bytes) -> list[dict]:
    reader = csv.DictReader(io.StringIO(payload.decode("utf-8")))
    return list(reader)


# -- planar non-degenerate triangle bound ----------------------------------


@dataclass(frozen=True)
class PlanarTriangleReport:
    """T*(X) against min(p^(2/3)|X|^(5/3) + p^(1/4)|X|^2, |X|^(7/3))."""

    p: int
    size: int
    t_star: int
    excess: float
    bound_branch_a: float
    bound_branch_b: float
    constant: float

    @property
    def min_bound(self) -> float:
        return min(self.bound_branch_a, self.bound_branch_b)

    @property
    def ratio(self) -> float:
        return max(self.excess, 0.0) / self.min_bound

    @property
    def ok(self) -> bool:
        return self.ratio <= self.constant


def planar_triangle_check(X, constant: float = 100.0) -> PlanarTriangleReport:
    """Check the planar non-degenerate isosceles triangle bound for X in
    F_p^2 with p = 3 mod 4 and |X| <= p^(4/3)."""
    p = X.field.p
    if X.dim != 2:
        raise ValueError("planar check needs a subset of F_p^2")
    if p % 4 != 3:
        raise ValueError("planar check requires p = 3 mod 4")
    n = len(X)
    if n**3 > p**4:
        raise ValueError(f"|X| = {n} violates the hypothesis |X| <= p^(4/3)")
    t_star = counting.isosceles_counts(X).t_star
    return PlanarTriangleReport(
        p=p,
        size=n,
        t_star=t_star,
        excess=t_star - n**3 / p,
        bound_branch_a=p ** (2 / 3) * n ** (5 / 3) + p**0.25 * n**2,
        bound_branch_b=n ** (7 / 3),
        constant=constant,
    )


def planar_triangle_sweep(
    primes, exponent: float = 1.25, trials: int = 1, seed: int = 0, constant: float = 100.0
) -> list[PlanarTriangleReport]:
    """Random subsets of F_p^2 of size ceil(p^exponent) across a prime list."""
    from .varieties import PointSet

    reports = []
    for idx, p in enumerate(primes):
        field = PrimeField(p)
        grid = PointSet.build(
            field, 2, ((a, b) for a in range(p) for b in range(p))
        )
        for trial in range(trials):
            size = min(math.ceil(p**exponent), len(grid))
            X = random_subset(grid, size, derive_seed(seed, idx * 1000 + trial))
            reports.append(planar_triangle_check(X, constant))
    return reports
