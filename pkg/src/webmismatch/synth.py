"""Seeded generators for synthetic clickstream/hyperlink networks with known structure."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import numpy as np

from .core import ConfigurationError, DirectedGraph, DualGraph, WebsiteRecord, build_graph

WEIGHT_LAWS = ("lognormal", "uniform", "unit")
DEFAULT_LANGUAGES = ("en", "zh", "ja", "ru", "ko", "pl", "de", "fr", "es", "pt")


@dataclass(frozen=True)
class WeightLaw:
    kind: str = "lognormal"
    mu: float = 0.0
    sigma: float = 0.5
    lo: float = 1.0
    hi: float = 10.0

    def __post_init__(self):
        if self.kind not in WEIGHT_LAWS:
            raise ConfigurationError(f"weight law must be one of {WEIGHT_LAWS}, got {self.kind!r}")
        if self.kind == "lognormal" and self.sigma < 0:
            raise ConfigurationError("lognormal sigma must be >= 0")
        if self.kind == "uniform" and not 0 < self.lo <= self.hi:
            raise ConfigurationError("uniform weights need 0 < lo <= hi")

    @classmethod
    def from_json(cls, obj) -> "WeightLaw":
        if obj is None:
            return cls()
        if isinstance(obj, str):
            return cls(kind=obj)
        return cls(**obj)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "unit":
            return np.ones(size)
        if self.kind == "uniform":
            return rng.uniform(self.lo, self.hi, size)
        return rng.lognormal(self.mu, self.sigma, size)


@dataclass(frozen=True)
class PlantedPartitionSpec:
    """Block structure for :func:`generate_planted_digraph`.

    ``p_in`` may be one probability for every block or one per block.
    """

    block_sizes: tuple
    p_in: Union[float, tuple] = 0.5
    p_out: float = 0.01
    weight_law: WeightLaw = WeightLaw()
    hub_per_block: bool = False
    hub_factor: float = 10.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(int(b) for b in self.block_sizes))
        if not self.block_sizes or any(b < 1 for b in self.block_sizes):
            raise ConfigurationError(f"block sizes must be positive, got {self.block_sizes}")
        p_in = self.p_in
        if isinstance(p_in, (list, tuple)):
            p_in = tuple(float(p) for p in p_in)
            if len(p_in) != len(self.block_sizes):
                raise ConfigurationError("p_in needs one probability per block")
        else:
            p_in = float(p_in)
        object.__setattr__(self, "p_in", p_in)
        for p in self.block_p_in:
            if not 0 < p <= 1:
                raise ConfigurationError(f"p_in must lie in (0, 1], got {p}")
        if not 0 <= self.p_out < 1:
            raise ConfigurationError(f"p_out must lie in [0, 1), got {self.p_out}")
        if isinstance(self.weight_law, (dict, str)) or self.weight_law is None:
            object.__setattr__(self, "weight_law", WeightLaw.from_json(self.weight_law))
        if self.hub_factor <= 1:
            raise ConfigurationError("hub_factor must exceed 1 for hubs to dominate")

    @property
    def node_count(self) -> int:
        return sum(self.block_sizes)

    @property
    def block_p_in(self) -> tuple:
        if isinstance(self.p_in, tuple):
            return self.p_in
        return (self.p_in,) * len(self.block_sizes)


@dataclass(frozen=True)
class PlantedGraph:
    graph: DirectedGraph
    labels: tuple
    hubs: tuple = ()


def block_labels(block_sizes: Sequence[int]) -> tuple:
    return tuple(b for b, size in enumerate(block_sizes) for _ in range(size))


def generate_planted_digraph(spec: PlantedPartitionSpec) -> PlantedGraph:
    """Directed planted-partition graph.

    Each ordered pair inside a block is an edge with that block's ``p_in``,
    and each cross-block pair with ``p_out``. With ``hub_per_block`` the first
    node of every block is linked to and from all block members with weights
    at least ``hub_factor`` times the largest non-hub weight in the graph.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.node_count
    labels = np.array(block_labels(spec.block_sizes))
    prob = np.full((n, n), spec.p_out)
    starts = np.concatenate([[0], np.cumsum(spec.block_sizes)[:-1]])
    for b, (start, size) in enumerate(zip(starts, spec.block_sizes)):
        prob[start:start + size, start:start + size] = spec.block_p_in[b]
    adj = rng.random((n, n)) < prob
    np.fill_diagonal(adj, False)
    hubs = tuple(int(s) for s in starts) if spec.hub_per_block else ()
    for h, size in zip(hubs, spec.block_sizes):
        adj[h, h + 1:h + size] = False
        adj[h + 1:h + size, h] = False
    src, dst = np.nonzero(adj)
    weights = spec.weight_law.draw(rng, len(src))
    records = list(zip(src.tolist(), dst.tolist(), weights.tolist()))
    if hubs:
        base = spec.hub_factor * (float(weights.max()) if len(weights) else 1.0)
        for h, size in zip(hubs, spec.block_sizes):
            members = range(h + 1, h + size)
            boost = rng.uniform(1.0, 2.0, 2 * (size - 1)) * base
            for i, m in enumerate(members):
                records.append((h, m, float(boost[2 * i])))
                records.append((m, h, float(boost[2 * i + 1])))
    graph = build_graph(n, records, weighted=True)
    return PlantedGraph(graph, tuple(labels.tolist()), hubs)


def generate_flat_overlay(node_count: int, density_target: float, seed: int = 0) -> DirectedGraph:
    """Unweighted uniform random digraph with expected density ``density_target``."""
    if not 0 < density_target < 1:
        raise ConfigurationError(f"density_target must lie in (0, 1), got {density_target}")
    rng = np.random.default_rng(seed)
    adj = rng.random((node_count, node_count)) < density_target
    np.fill_diagonal(adj, False)
    src, dst = np.nonzero(adj)
    return build_graph(node_count, zip(src.tolist(), dst.tolist()), weighted=False)


def _pair(index: np.ndarray, n: int):
    # map 0..n(n-1)-1 onto ordered pairs with s != t
    s = index // (n - 1)
    r = index % (n - 1)
    t = r + (r >= s)
    return s, t


def sample_pairs(node_count: int, count: int, rng: np.random.Generator) -> list:
    """``count`` distinct ordered pairs (no self-pairs), sampled uniformly."""
    total = node_count * (node_count - 1)
    if count > total:
        raise ConfigurationError(f"cannot place {count} edges among {total} ordered pairs")
    idx = rng.choice(total, size=count, replace=False)
    s, t = _pair(idx, node_count)
    return list(zip(s.tolist(), t.tolist()))


def synthetic_registry(node_count: int, labels: Optional[Sequence[int]] = None, hubs: Sequence[int] = (),
                       languages: Sequence[str] = DEFAULT_LANGUAGES, flip_fraction: float = 0.0,
                       seed: int = 0) -> List[WebsiteRecord]:
    """Website records for synthetic nodes.

    Block ``b`` gets ``languages[b]``. Hubs receive twice the largest traffic
    of their block. ``round(flip_fraction * N)`` non-hub nodes get a different
    tag, never flipping half or more of a block so block majorities survive.
    """
    rng = np.random.default_rng(seed)
    labels = list(labels) if labels is not None else [0] * node_count
    nblocks = max(labels) + 1 if labels else 0
    if nblocks > len(languages):
        raise ConfigurationError(f"{nblocks} blocks but only {len(languages)} language tags")
    traffic = rng.lognormal(12.0, 1.5, node_count)
    for h in hubs:
        block = [v for v in range(node_count) if labels[v] == labels[h]]
        traffic[h] = 2.0 * max(traffic[v] for v in block)
    langs = [languages[b] for b in labels]
    target = int(round(flip_fraction * node_count))
    if target:
        sizes = np.bincount(labels, minlength=nblocks)
        flipped = np.zeros(nblocks, dtype=int)
        hubset = set(hubs)
        done = 0
        for v in rng.permutation(node_count).tolist():
            if done == target:
                break
            b = labels[v]
            if v in hubset or 2 * (flipped[b] + 1) >= sizes[b]:
                continue
            langs[v] = languages[(b + 1) % len(languages)] if len(languages) > 1 else langs[v] + "-x"
            flipped[b] += 1
            done += 1
        if done < target:
            raise ConfigurationError(f"could only flip {done} of {target} tags without breaking majorities")
    return [WebsiteRecord(f"site{v:04d}.b{labels[v]}", float(traffic[v]), langs[v]) for v in range(node_count)]


def generate_overlap_fixture(node_count: int, hyperlink_count: int, clickstream_count: int,
                             shared_count: int, seed: int = 0, weight_law: WeightLaw = WeightLaw()) -> DualGraph:
    """Dual graph with exact hyperlink, clickstream and shared directed-edge counts."""
    if shared_count > min(hyperlink_count, clickstream_count):
        raise ConfigurationError("shared edges cannot outnumber either edge set")
    rng = np.random.default_rng(seed)
    pairs = sample_pairs(node_count, hyperlink_count + clickstream_count - shared_count, rng)
    shared = pairs[:shared_count]
    h_only = pairs[shared_count:hyperlink_count]
    c_only = pairs[hyperlink_count:]
    clicks = shared + c_only
    weights = weight_law.draw(rng, len(clicks)).tolist()
    hyper = build_graph(node_count, shared + h_only, weighted=False)
    click = build_graph(node_count, [(s, t, w) for (s, t), w in zip(clicks, weights)], weighted=True)
    return DualGraph(synthetic_registry(node_count, seed=seed), click, hyper)


def _integer_parts(total: int, parts: int, rng) -> list:
    # positive integers summing exactly to total
    cuts = np.sort(rng.choice(np.arange(1, total), size=parts - 1, replace=False))
    return np.diff(np.concatenate([[0], cuts, [total]])).astype(int).tolist()


def generate_coverage_fixture(node_count: int, clickstream_count: int, covered_fraction: Fraction,
                              seed: int = 0, extra_hyperlinks: int = 0) -> DualGraph:
    """Dual graph whose hyperlinks carry exactly ``covered_fraction`` of clickstream weight.

    Weights are integers so the covered and total sums are exact.
    """
    frac = Fraction(covered_fraction)
    if not 0 < frac < 1:
        raise ConfigurationError("covered_fraction must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    covered_edges = max(1, clickstream_count // 3)
    pairs = sample_pairs(node_count, clickstream_count + extra_hyperlinks, rng)
    covered, uncovered, extra = (pairs[:covered_edges], pairs[covered_edges:clickstream_count],
                                 pairs[clickstream_count:])
    scale = 10 * clickstream_count
    cw = _integer_parts(frac.numerator * scale, len(covered), rng)
    uw = _integer_parts((frac.denominator - frac.numerator) * scale, len(uncovered), rng)
    click = build_graph(node_count, [(s, t, float(w)) for (s, t), w in zip(covered + uncovered, cw + uw)], True)
    hyper = build_graph(node_count, covered + extra, False)
    return DualGraph(synthetic_registry(node_count, seed=seed), click, hyper)


def generate_share_fixture(node_count: int, hub_nodes: Sequence[int], share: Fraction, edge_count: int,
                           seed: int = 0) -> DirectedGraph:
    """Weighted digraph where edges touching ``hub_nodes`` carry exactly ``share`` of the weight."""
    frac = Fraction(share)
    if not 0 < frac < 1:
        raise ConfigurationError("share must lie strictly between 0 and 1")
    hubs = set(hub_nodes)
    rng = np.random.default_rng(seed)
    pairs = sample_pairs(node_count, edge_count, rng)
    incident = [p for p in pairs if p[0] in hubs or p[1] in hubs]
    other = [p for p in pairs if not (p[0] in hubs or p[1] in hubs)]
    if not incident or not other:
        raise ConfigurationError("fixture needs edges both touching and avoiding the hub set")
    scale = 10 * edge_count
    iw = _integer_parts(frac.numerator * scale, len(incident), rng)
    ow = _integer_parts((frac.denominator - frac.numerator) * scale, len(other), rng)
    return build_graph(node_count, [(s, t, float(w)) for (s, t), w in zip(incident + other, iw + ow)], True)


@dataclass(frozen=True)
class SynthResult:
    dual: DualGraph
    truth: tuple
    hubs: tuple
    spec: PlantedPartitionSpec


def generate_dual(config: dict, seed: Optional[int] = None) -> SynthResult:
    """Build a dual network from a JSON-style configuration.

    Keys: ``clickstream`` (planted-partition fields), optional ``hyperlink``
    with ``density`` and ``shared_fraction`` (share of clickstream edges
    copied into the hyperlink graph), ``languages``, ``flip_fraction`` and
    ``seed``. An explicit ``seed`` argument overrides the config's.
    """
    if seed is None:
        seed = int(config.get("seed", 0))
    click_seed, hyper_seed, share_seed, reg_seed = np.random.SeedSequence(seed).generate_state(4).tolist()
    c = dict(config.get("clickstream", {}))
    if "block_sizes" not in c:
        raise ConfigurationError("synth config needs clickstream.block_sizes")
    c.setdefault("hub_per_block", True)
    c["seed"] = click_seed
    spec = PlantedPartitionSpec(**c)
    planted = generate_planted_digraph(spec)
    n = spec.node_count

    h = config.get("hyperlink", {})
    overlay = generate_flat_overlay(n, float(h.get("density", 0.017)), hyper_seed)
    shared_fraction = float(h.get("shared_fraction", 0.2))
    if not 0 <= shared_fraction <= 1:
        raise ConfigurationError("hyperlink.shared_fraction must lie in [0, 1]")
    rng = np.random.default_rng(share_seed)
    click_edges = list(planted.graph.edge_set())
    click_edges.sort()
    pick = rng.random(len(click_edges)) < shared_fraction
    links = list(overlay.edge_set()) + [e for e, keep in zip(click_edges, pick) if keep]
    hyper = build_graph(n, sorted(links), weighted=False)

    languages = config.get("languages", DEFAULT_LANGUAGES)
    registry = synthetic_registry(n, planted.labels, planted.hubs, languages,
                                  float(config.get("flip_fraction", 0.0)), reg_seed)
    return SynthResult(DualGraph(registry, planted.graph, hyper), planted.labels, planted.hubs, spec)


def load_synth_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
