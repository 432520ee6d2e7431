"""Registry of finite graphs that generate linear constraints on kappa.

Two graph kinds feed the witness function:

* vertex_sum ("M-type"): contributes sum_v J0(t |x_v|); its constraint bound
  is alpha(G) + |E(G)| gamma delta.
* subgraph ("T-type"): contributes sum_v J0(t |x_v|) - sum_e J0(t |x-y|),
  where every edge has unit length; bound alpha(G) + |E| gamma delta with the
  unit-distance mass subtracted explicitly.

CT pairs carry two vertex clouds (all-pairs term minus vertex term) and their
own constant c_ct; their vertex data comes from user-supplied files, none is
built in.

Everything is loaded from a JSON schema (documented in the README), validated
geometrically (edges unit within 1e-9) and combinatorially (declared alpha
re-derived by brute force for graphs with at most 20 vertices).  The shipped
registry contains the Moser spindle, hub vertex at the origin, as both kinds.

Profiles are exposed as (radius, coefficient) term lists so callers can group
equal radii before Bessel evaluation; every profile value is a finite sum of
J0 terms with evaluation error <= n_terms * J0_ABS_ERROR.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .bessel import J0_ABS_ERROR, j0_values
from .errors import AlphaMismatchError, GeometryError, SchemaError
from .torus import Spectrum

__all__ = [
    "ConstraintGraph",
    "CTPair",
    "Registry",
    "load_registry",
    "builtin_registry",
    "m_profile",
    "t_profile",
    "ct_profile",
    "profile_terms",
    "ct_profile_terms",
    "constraint_rhs_check",
    "CheckResult",
    "UNIT_EDGE_TOL",
]

UNIT_EDGE_TOL = 1e-9
ALPHA_BRUTE_FORCE_LIMIT = 20

KIND_ALIASES = {
    "vertex_sum": "vertex_sum",
    "m": "vertex_sum",
    "subgraph": "subgraph",
    "t": "subgraph",
}


@dataclass(frozen=True)
class ConstraintGraph:
    name: str
    kind: str  # "vertex_sum" | "subgraph"
    vertices: np.ndarray  # (n, 2)
    edges: tuple
    alpha: int

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def vertex_radii(self) -> np.ndarray:
        return np.hypot(self.vertices[:, 0], self.vertices[:, 1])

    @property
    def max_radius(self) -> float:
        r = float(self.vertex_radii.max(initial=0.0))
        for a, b in self.edges:
            r = max(r, float(np.hypot(*(self.vertices[a] - self.vertices[b]))))
        return r


@dataclass(frozen=True)
class CTPair:
    name: str
    theta: float
    g1: np.ndarray  # (n1, 2)
    g2: np.ndarray  # (n2, 2)
    c_ct: float


@dataclass(frozen=True)
class Registry:
    graphs: tuple  # ConstraintGraph, file order
    ct_pairs: tuple
    registry_hash: str

    @property
    def m_graphs(self):
        return [g for g in self.graphs if g.kind == "vertex_sum"]

    @property
    def t_graphs(self):
        return [g for g in self.graphs if g.kind == "subgraph"]

    @property
    def max_radius(self) -> float:
        r = 1.96
        for g in self.graphs:
            r = max(r, g.max_radius)
        for p in self.ct_pairs:
            if len(p.g1):
                diffs = p.g1[:, None, :] - p.g1[None, :, :]
                r = max(r, float(np.hypot(diffs[..., 0], diffs[..., 1]).max()))
            if len(p.g2):
                r = max(r, float(np.hypot(p.g2[:, 0], p.g2[:, 1]).max()))
        return r


def _brute_force_alpha(n, edges) -> int:
    adj = [0] * n
    for a, b in edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    best = 0

    def rec(cand, size):
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if cand == 0:
            best = max(best, size)
            return
        v = (cand & -cand).bit_length() - 1
        b = 1 << v
        rec(cand & ~(adj[v] | b), size + 1)
        rec(cand & ~b, size)

    rec((1 << n) - 1, 0)
    return best


def _parse_points(raw, where):
    pts = []
    for item in raw:
        if len(item) != 2:
            raise SchemaError(f"{where}: vertex entries must be [x, y]")
        try:
            # decimal strings preferred; plain numbers accepted
            pts.append((float(item[0]), float(item[1])))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{where}: unparseable coordinate {item!r}") from exc
    arr = np.array(pts, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"{where}: non-finite coordinate")
    return arr


def _validate_graph(entry, idx) -> ConstraintGraph:
    where = f"graphs[{idx}]"
    for key in ("name", "kind", "vertices", "edges", "alpha"):
        if key not in entry:
            raise SchemaError(f"{where} missing field {key!r}")
    kind = KIND_ALIASES.get(str(entry["kind"]).lower())
    if kind is None:
        raise SchemaError(f"{where}: unknown kind {entry['kind']!r}")
    verts = _parse_points(entry["vertices"], where)
    n = len(verts)
    edges = []
    for e in entry["edges"]:
        a, b = int(e[0]), int(e[1])
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise SchemaError(f"{where}: bad edge {e!r}")
        d = float(np.hypot(*(verts[a] - verts[b])))
        if abs(d - 1.0) > UNIT_EDGE_TOL:
            raise GeometryError(
                f"{where}: edge ({a},{b}) has length {d!r}, not unit"
            )
        edges.append((a, b))
    alpha = int(entry["alpha"])
    if alpha < 1:
        raise SchemaError(f"{where}: alpha must be >= 1")
    if n <= ALPHA_BRUTE_FORCE_LIMIT:
        true_alpha = _brute_force_alpha(n, edges)
        if true_alpha != alpha:
            raise AlphaMismatchError(
                f"{where}: declared alpha {alpha}, brute force finds {true_alpha}"
            )
    verts.setflags(write=False)
    return ConstraintGraph(str(entry["name"]), kind, verts, tuple(edges), alpha)


def _validate_ct(entry, idx) -> CTPair:
    where = f"ct_pairs[{idx}]"
    for key in ("theta", "g1", "g2", "c_ct"):
        if key not in entry:
            raise SchemaError(f"{where} missing field {key!r}")
    g1 = _parse_points(entry["g1"], where)
    g2 = _parse_points(entry["g2"], where)
    c_ct = float(entry["c_ct"])
    if not (c_ct >= 0.0 and math.isfinite(c_ct)):
        raise SchemaError(f"{where}: c_ct must be finite and >= 0")
    g1.setflags(write=False)
    g2.setflags(write=False)
    return CTPair(str(entry.get("name", f"ct_{idx}")), float(entry["theta"]), g1, g2, c_ct)


def _registry_from_doc(doc, source: str) -> Registry:
    if not isinstance(doc, dict):
        raise SchemaError(f"{source}: top level must be an object")
    if "schema_version" not in doc:
        raise SchemaError(f"{source}: schema_version field required")
    graphs = tuple(
        _validate_graph(e, i) for i, e in enumerate(doc.get("graphs", []))
    )
    cts = tuple(_validate_ct(e, i) for i, e in enumerate(doc.get("ct_pairs", [])))
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode()).hexdigest()
    return Registry(graphs, cts, digest)


def load_registry(path) -> Registry:
    """Load and validate a registry file; empty files give empty registries."""
    text = Path(path).read_text()
    if not text.strip():
        return Registry((), (), hashlib.sha256(b"").hexdigest())
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    return _registry_from_doc(doc, str(path))


def builtin_registry() -> Registry:
    """The shipped Moser-spindle registry (hub vertex at the origin)."""
    text = resources.files("udsets.data").joinpath("moser_spindle.json").read_text()
    return _registry_from_doc(json.loads(text), "builtin:moser_spindle")


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def _grouped(radii, coeffs):
    """Collapse radii equal to 12 decimals (far below UNIT_EDGE_TOL).

    The quantization moves each radius by < 5e-13, shifting J0(r t) by at
    most 0.3e-12 t; callers absorb that in their evaluation-error margins.
    """
    out = {}
    for r, c in zip(radii, coeffs):
        key = round(float(r), 12)
        out[key] = out.get(key, 0.0) + float(c)
    items = sorted(out.items())
    return np.array([r for r, _ in items]), np.array([c for _, c in items])


def profile_terms(g: ConstraintGraph):
    """(radii, coefficients) of the graph's profile sum_i c_i J0(r_i t)."""
    radii = list(g.vertex_radii)
    coeffs = [1.0] * g.n_vertices
    if g.kind == "subgraph":
        for a, b in g.edges:
            radii.append(float(np.hypot(*(g.vertices[a] - g.vertices[b]))))
            coeffs.append(-1.0)
    return _grouped(radii, coeffs)


def ct_profile_terms(p: CTPair):
    """(radii, coefficients) of the CT profile: G1 pair sum minus G2 vertex sum."""
    radii = []
    coeffs = []
    n1 = len(p.g1)
    for i in range(n1):
        for j in range(i + 1, n1):
            radii.append(float(np.hypot(*(p.g1[i] - p.g1[j]))))
            coeffs.append(1.0)
    for v in p.g2:
        radii.append(float(np.hypot(v[0], v[1])))
        coeffs.append(-1.0)
    if not radii:
        return np.array([]), np.array([])
    return _grouped(radii, coeffs)


def _eval_terms(radii, coeffs, t):
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    tt = t[None] if scalar else t
    acc = np.zeros_like(tt)
    for r, c in zip(radii, coeffs):
        acc = acc + c * j0_values(r * tt)
    return float(acc[0]) if scalar else acc


def m_profile(g: ConstraintGraph, t):
    if g.kind != "vertex_sum":
        raise SchemaError("m_profile requires a vertex_sum graph")
    return _eval_terms(*profile_terms(g), t)


def t_profile(g: ConstraintGraph, t):
    if g.kind != "subgraph":
        raise SchemaError("t_profile requires a subgraph graph")
    return _eval_terms(*profile_terms(g), t)


def ct_profile(p: CTPair, t):
    radii, coeffs = ct_profile_terms(p)
    if len(radii) == 0:
        t = np.asarray(t, dtype=float)
        return 0.0 if t.ndim == 0 else np.zeros_like(t)
    return _eval_terms(radii, coeffs, t)


def graph_profile(g: ConstraintGraph, t):
    return _eval_terms(*profile_terms(g), t)


# ---------------------------------------------------------------------------
# constraint audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    lhs: float
    rhs: float
    rigor: float
    ok: bool


def constraint_rhs_check(S: Spectrum, g: ConstraintGraph) -> CheckResult:
    """The graph constraint sum_t kappa(t) profile_G(t) <= rhs.

    For subgraph profiles (edge mass subtracted) the bound is alpha(G) delta
    unconditionally.  Vertex-sum profiles drop the subtraction, so the edge
    mass |E| f(1) is added back on the right; it vanishes for 1-avoiding sets.
    """
    from .torus import pair_correlation  # local import avoids cycle at load

    radii, coeffs = profile_terms(g)
    ts = S.frequency(S.ms)
    vals = np.zeros_like(ts)
    for r, c in zip(radii, coeffs):
        vals += c * j0_values(r * ts)
    lhs = float(vals @ S.kappas)
    profile_sup = float(np.abs(coeffs).sum())
    rigor = (
        S.tail_mass * profile_sup
        + J0_ABS_ERROR * len(radii) * float(S.kappas.sum())
        + 1e-10
    )
    rhs = g.alpha * S.density
    if g.kind == "vertex_sum" and g.n_edges:
        f1 = pair_correlation(S, 1.0)
        rhs += g.n_edges * max(f1.value, 0.0)
        rigor += g.n_edges * f1.rigor_bound
    return CheckResult(g.name, lhs, rhs, rigor, bool(lhs <= rhs + rigor))
