"""Deterministic graph families for corpora and benchmarks."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..graph_core import Graph


class BadSpec(ValueError):
    pass


FAMILIES = {
    # family: (required params, minimum values)
    "path": {"n": 1},
    "cycle": {"n": 3},
    "complete": {"n": 1},
    "star": {"leaves": 0},
    "caterpillar": {"spine": 1, "legs_per": 0},
    "spider": {"legs": 0, "len": 1},
    "random_tree": {"n": 1},
    "random_connected": {"n": 1, "p_percent": 0},
    "grid": {"rows": 1, "cols": 1},
}


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: dict = field(default_factory=dict)
    rng_seed: int = 0

    def label(self) -> str:
        ps = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family}({ps})#{self.rng_seed}"

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(sorted(self.params.items())), "rng_seed": self.rng_seed}


def _check(spec: GeneratorSpec) -> dict:
    if spec.family not in FAMILIES:
        raise BadSpec(f"unknown family {spec.family!r}; choose from {sorted(FAMILIES)}")
    need = FAMILIES[spec.family]
    params = dict(spec.params)
    if spec.family == "random_connected":
        params.setdefault("p_percent", 40)
    for name, low in need.items():
        if name not in params:
            raise BadSpec(f"{spec.family} needs parameter {name!r}")
        if not isinstance(params[name], int) or params[name] < low:
            raise BadSpec(f"{spec.family}: {name} must be an integer >= {low}")
    extra = set(params) - set(need)
    if extra:
        raise BadSpec(f"{spec.family}: unexpected parameters {sorted(extra)}")
    if spec.family == "random_connected" and params["p_percent"] > 100:
        raise BadSpec("p_percent must be within 0..100")
    return params


def generate_with_info(spec: GeneratorSpec) -> tuple[Graph, dict]:
    p = _check(spec)
    rng = random.Random(spec.rng_seed)
    fam = spec.family
    info: dict = {}
    if fam == "path":
        g = Graph.from_edges(p["n"], [(i, i + 1) for i in range(p["n"] - 1)])
    elif fam == "cycle":
        n = p["n"]
        g = Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])
    elif fam == "complete":
        n = p["n"]
        g = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    elif fam == "star":
        g = Graph.from_edges(p["leaves"] + 1, [(0, i) for i in range(1, p["leaves"] + 1)])
    elif fam == "caterpillar":
        spine, legs = p["spine"], p["legs_per"]
        edges = [(i, i + 1) for i in range(spine - 1)]
        nxt = spine
        for i in range(spine):
            for _ in range(legs):
                edges.append((i, nxt))
                nxt += 1
        g = Graph.from_edges(nxt, edges)
    elif fam == "spider":
        edges, nxt = [], 1
        for _ in range(p["legs"]):
            prev = 0
            for _ in range(p["len"]):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
        g = Graph.from_edges(nxt, edges)
    elif fam == "random_tree":
        g = Graph.from_edges(p["n"], [(rng.randrange(i), i) for i in range(1, p["n"])])
    elif fam == "random_connected":
        n, prob = p["n"], p["p_percent"] / 100
        if n > 1 and prob == 0:
            raise BadSpec("p_percent=0 can never give a connected graph")
        retries = 0
        while True:
            edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < prob]
            g = Graph.from_edges(n, edges)
            if g.is_connected():
                break
            retries += 1
        info["retries"] = retries
    else:  # grid
        r, c = p["rows"], p["cols"]
        edges = []
        for i in range(r):
            for j in range(c):
                v = i * c + j
                if j + 1 < c:
                    edges.append((v, v + 1))
                if i + 1 < r:
                    edges.append((v, v + c))
        g = Graph.from_edges(r * c, edges)
    return g, info


def generate(spec: GeneratorSpec) -> Graph:
    return generate_with_info(spec)[0]


def parse_params(text: str) -> dict:
    """``"spine=4,legs_per=1"`` -> ``{"spine": 4, "legs_per": 1}``."""
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        if "=" not in item:
            raise BadSpec(f"parameter {item!r} is not key=value")
        key, val = item.split("=", 1)
        try:
            out[key.strip()] = int(val)
        except ValueError as exc:
            raise BadSpec(f"parameter {key!r} must be an integer") from exc
    return out


def default_corpus(max_n: int = 8, seeds: int = 3) -> list[GeneratorSpec]:
    """Every family at every size that fits in ``max_n`` vertices."""
    specs: list[GeneratorSpec] = []
    for n in range(1, max_n + 1):
        specs.append(GeneratorSpec("path", {"n": n}))
        specs.append(GeneratorSpec("complete", {"n": n}))
        if n >= 3:
            specs.append(GeneratorSpec("cycle", {"n": n}))
        specs.append(GeneratorSpec("star", {"leaves": n - 1}))
        for s in range(seeds):
            specs.append(GeneratorSpec("random_tree", {"n": n}, s))
            specs.append(GeneratorSpec("random_connected", {"n": n, "p_percent": 45}, s))
    for spine in range(1, max_n + 1):
        for legs in range(0, max_n):
            if spine * (legs + 1) <= max_n:
                specs.append(GeneratorSpec("caterpillar", {"spine": spine, "legs_per": legs}))
    for legs in range(1, max_n):
        for length in range(1, max_n):
            if legs * length + 1 <= max_n:
                specs.append(GeneratorSpec("spider", {"legs": legs, "len": length}))
    for rows in range(1, max_n + 1):
        for cols in range(rows, max_n + 1):
            if rows * cols <= max_n:
                specs.append(GeneratorSpec("grid", {"rows": rows, "cols": cols}))
    return specs
