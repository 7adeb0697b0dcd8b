"""Scene files: a single JSON document declaring soft objects and the tasks to run on them.

See ``docs/scene-format.md`` for the format.  Parsing either yields a
:class:`Scene` or raises :class:`SceneError` carrying every diagnostic that
was found, each tagged with a field path such as ``tasks[2].vectors``.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..convex import BallRegion, SubspaceRegion, intersect_regions
from ..core import ParameterSet, SoftInputError, SoftReal, SoftSet, SoftVector, SoftVectorSpace, SetKind
from ..norm import BallKind, BallSpec, NormDescriptor, NormFamily
from ..seq import Combined, Generated, Tabulated

SCHEMA_VERSION = 1

OBJECT_TYPES = ("soft_real", "soft_vector", "soft_set", "norm_family", "sequence", "region")

# task kind -> fields that name declared objects (list-valued fields end in [])
TASK_REFS = {
    "norm_axioms": ("norm", "space?"),
    "metric_axioms": ("norm",),
    "independence": ("vectors[]",),
    "independence_constant": ("norm", "vectors[]"),
    "equivalence": ("norm", "other"),
    "riesz": ("norm", "space", "eps~"),
    "convergence": ("sequence", "norm", "candidate?"),
    "cauchy": ("sequence", "norm"),
    "limit": ("sequence", "norm"),
    "convexity": ("region",),
    "set_algebra": ("left", "right?", "universe?"),
    "subspace_check": ("sub", "space"),
}

# object type expected behind each reference field
REF_TYPES = {
    "norm": "norm_family", "other": "norm_family", "space": "soft_set", "vectors": "soft_vector",
    "eps": "soft_real", "sequence": "sequence", "candidate": "soft_vector", "region": "region",
    "left": "soft_set", "right": "soft_set", "universe": "soft_set", "sub": "soft_set",
}


class SceneError(SoftInputError):
    """Invalid scene; ``diagnostics`` lists ``(path, message)`` pairs."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"{p}: {m}" if p else m for p, m in self.diagnostics))


class _Bad(Exception):
    def __init__(self, path, msg):
        super().__init__(msg)
        self.path, self.msg = path, msg


@dataclass
class Scene:
    params: ParameterSet
    dim: int
    objects: dict = field(default_factory=dict)   # name -> built object
    decls: dict = field(default_factory=dict)     # name -> normal-form declaration
    kinds: dict = field(default_factory=dict)     # name -> object type
    tasks: list = field(default_factory=list)     # validated task records

    def normal_form(self):
        return {
            "schema": SCHEMA_VERSION,
            "parameters": list(self.params.labels),
            "dimension": self.dim,
            "objects": {name: self.decls[name] for name in self.decls},
            "tasks": [dict(t) for t in self.tasks],
        }

    def __eq__(self, other):
        return isinstance(other, Scene) and self.normal_form() == other.normal_form()


def dump_scene(scene):
    """Normal-form JSON text; parsing it gives back an equal scene."""
    return json.dumps(scene.normal_form(), indent=2, sort_keys=False) + "\n"


# -- parsing entry points -------------------------------------------------------


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise _Bad("", f"duplicate key {k!r}: object names and fields must be unique")
        out[k] = v
    return out


def parse_scene_text(text, source="<scene>"):
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as e:
        raise SceneError([(f"{source}:{e.lineno}:{e.colno}", e.msg)]) from None
    except _Bad as e:
        raise SceneError([(source, e.msg)]) from None
    return scene_from_dict(doc)


def parse_scene(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise SceneError([(str(path), f"cannot read scene: {e}")]) from None
    return parse_scene_text(text, str(path))


def scene_from_dict(doc):
    if not isinstance(doc, dict):
        raise SceneError([("", "scene must be a JSON object")])
    diags = []
    schema = doc.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        diags.append(("schema", f"unsupported schema version {schema!r}"))
    unknown = set(doc) - {"schema", "parameters", "dimension", "objects", "tasks"}
    for key in sorted(unknown):
        diags.append((key, "unknown top-level field"))
    try:
        params = ParameterSet(_req(doc, "parameters", "", list))
    except SoftInputError as e:
        raise SceneError(diags + [("parameters", str(e))]) from None
    except _Bad as e:
        raise SceneError(diags + [(e.path, e.msg)]) from None
    dim = doc.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SceneError(diags + [("dimension", "must be a positive integer")])
    scene = Scene(params, dim)
    objects = doc.get("objects", {})
    if not isinstance(objects, dict):
        diags.append(("objects", "must be a JSON object"))
        objects = {}
    for name, decl in objects.items():
        path = f"objects.{name}"
        try:
            obj, nf, kind = _build_object(scene, name, decl, path)
        except _Bad as e:
            diags.append((e.path, e.msg))
            continue
        except SoftInputError as e:
            diags.append((path, str(e)))
            continue
        scene.objects[name], scene.decls[name], scene.kinds[name] = obj, nf, kind
    tasks = doc.get("tasks", [])
    if not isinstance(tasks, list):
        diags.append(("tasks", "must be a JSON array"))
        tasks = []
    for i, task in enumerate(tasks):
        try:
            scene.tasks.append(_check_task(scene, i, task))
        except _Bad as e:
            diags.append((e.path, e.msg))
    if diags:
        raise SceneError(diags)
    return scene


# -- helpers ------------------------------------------------------------------------


def _req(d, key, path, typ=None):
    if not isinstance(d, dict) or key not in d:
        raise _Bad(f"{path}.{key}".lstrip("."), "missing required field")
    v = d[key]
    if typ is not None and not isinstance(v, typ):
        raise _Bad(f"{path}.{key}".lstrip("."), f"expected {typ.__name__}")
    return v


def _num(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        if v in ("inf", "-inf"):
            return float(v)
        raise _Bad(path, f"expected a number, got {v!r}")
    return float(v)


def _vec(v, n, path):
    if not isinstance(v, list) or len(v) != n:
        raise _Bad(path, f"expected a vector of length {n} (dimension clash)")
    return [_num(x, f"{path}[{i}]") for i, x in enumerate(v)]


def _per_label(spec, params, path, conv):
    """``{"values": {label: v}}``, ``{"values": [v, ...]}`` or ``{"constant": v}``."""
    if not isinstance(spec, dict):
        raise _Bad(path, "expected an object with 'values' or 'constant'")
    if "constant" in spec:
        v = conv(spec["constant"], f"{path}.constant")
        return [v for _ in params]
    vals = _req(spec, "values", path)
    if isinstance(vals, dict):
        extra = [k for k in vals if k not in params]
        if extra:
            raise _Bad(f"{path}.values", f"unknown parameters {extra}")
        missing = [lab for lab in params if lab not in vals]
        if missing:
            raise _Bad(f"{path}.values", f"missing parameters {missing}")
        return [conv(vals[lab], f"{path}.values.{lab}") for lab in params]
    if isinstance(vals, list) and len(vals) == len(params):
        return [conv(v, f"{path}.values[{i}]") for i, v in enumerate(vals)]
    raise _Bad(f"{path}.values", f"expected one value per parameter ({len(params)})")


def _ref(scene, name, want, path):
    if not isinstance(name, str):
        raise _Bad(path, f"expected an object name, got {name!r}")
    if name not in scene.objects:
        raise _Bad(path, f"undeclared object {name!r}")
    if want is not None and scene.kinds[name] != want:
        raise _Bad(path, f"object {name!r} is a {scene.kinds[name]}, expected {want}")
    return scene.objects[name]


def _sub_params(scene, decl, path):
    labels = decl.get("parameters")
    if labels is None:
        return scene.params
    if not isinstance(labels, list) or not labels:
        raise _Bad(f"{path}.parameters", "expected a non-empty list of labels")
    bad = [lab for lab in labels if lab not in scene.params]
    if bad:
        raise _Bad(f"{path}.parameters", f"labels {bad} are not scene parameters")
    return ParameterSet(labels)


def _descriptor(spec, path):
    if isinstance(spec, str):
        table = {"P1": 1, "P2": 2, "PInf": "inf"}
        if spec not in table:
            raise _Bad(path, f"unknown norm shorthand {spec!r}")
        spec = {"p": table[spec]}
    if not isinstance(spec, dict):
        raise _Bad(path, "expected a norm descriptor")
    p = spec.get("p")
    if p not in (1, 2, "inf"):
        raise _Bad(f"{path}.p", "p must be 1, 2 or \"inf\"")
    w = spec.get("weights")
    try:
        return NormDescriptor(p, None if w is None else tuple(_num(x, f"{path}.weights") for x in w))
    except SoftInputError as e:
        raise _Bad(path, str(e)) from None


def _descriptor_nf(d):
    out = {"p": "inf" if math.isinf(d.p) else int(d.p)}
    if d.weights is not None:
        out["weights"] = list(d.weights)
    return out


# -- object builders ------------------------------------------------------------------


def _build_object(scene, name, decl, path):
    if name in scene.objects:
        raise _Bad(path, f"duplicate object name {name!r}")
    if not isinstance(decl, dict):
        raise _Bad(path, "declaration must be a JSON object")
    kind = decl.get("type")
    if kind not in OBJECT_TYPES:
        raise _Bad(f"{path}.type", f"unknown object type {kind!r}")
    builder = {
        "soft_real": _build_real, "soft_vector": _build_vector, "soft_set": _build_set,
        "norm_family": _build_norm, "sequence": _build_sequence, "region": _build_region,
    }[kind]
    obj, nf = builder(scene, decl, path)
    return obj, dict(type=kind, **nf), kind


def _build_real(scene, decl, path):
    vals = _per_label(decl, scene.params, path, _num)
    r = SoftReal(scene.params, vals)
    return r, {"values": r.to_dict()}


def _build_vector(scene, decl, path):
    n = decl.get("dimension", scene.dim)
    vals = _per_label(decl, scene.params, path, lambda v, p: _vec(v, n, p))
    x = SoftVector(scene.params, np.array(vals, dtype=float).reshape(len(scene.params), n))
    out = {"values": x.to_dict()}
    if n != scene.dim:
        out["dimension"] = n
    return x, out


def _build_set(scene, decl, path):
    params = _sub_params(scene, decl, path)
    n = scene.dim
    kind = decl.get("kind")
    if kind == "finite":
        members = _req(decl, "members", path, dict)
        rows = {}
        for lab, vecs in members.items():
            if lab not in params:
                raise _Bad(f"{path}.members.{lab}", "unknown parameter")
            if not isinstance(vecs, list):
                raise _Bad(f"{path}.members.{lab}", "expected a list of vectors")
            rows[lab] = [_vec(v, n, f"{path}.members.{lab}[{i}]") for i, v in enumerate(vecs)]
        s = SoftSet.finite(params, n, rows)
        nf = {"kind": "finite", "members": {lab: p.tolist() for lab, p in zip(params, s.payload)}}
    elif kind == "subspace":
        bases = _req(decl, "bases", path)
        if isinstance(bases, dict) and "constant" in bases:
            cols = [bases["constant"]] * len(params)
            labs = list(params)
        elif isinstance(bases, dict):
            extra = [k for k in bases if k not in params]
            if extra:
                raise _Bad(f"{path}.bases", f"unknown parameters {extra}")
            labs = list(params)
            cols = [bases.get(lab, []) for lab in labs]
        else:
            raise _Bad(f"{path}.bases", "expected {label: [column, ...]} or {\"constant\": [column, ...]}")
        mats = []
        for lab, c in zip(labs, cols):
            if not isinstance(c, list):
                raise _Bad(f"{path}.bases.{lab}", "expected a list of columns")
            vs = [_vec(v, n, f"{path}.bases.{lab}[{i}]") for i, v in enumerate(c)]
            mats.append(np.array(vs, dtype=float).reshape(-1, n).T)
        s = SoftVectorSpace.from_bases(params, n, mats)
        nf = {"kind": "subspace", "bases": {lab: b.T.tolist() for lab, b in zip(params, s.payload)}}
    else:
        raise _Bad(f"{path}.kind", "soft_set kind must be \"finite\" or \"subspace\"")
    if params != scene.params:
        nf["parameters"] = list(params.labels)
    return s, nf


def _build_norm(scene, decl, path):
    if "constant" in decl:
        descs = [_descriptor(decl["constant"], f"{path}.constant")] * len(scene.params)
    else:
        norms = _req(decl, "norms", path, dict)
        missing = [lab for lab in scene.params if lab not in norms]
        extra = [lab for lab in norms if lab not in scene.params]
        if missing or extra:
            raise _Bad(f"{path}.norms", f"need exactly one norm per parameter (missing {missing}, unknown {extra})")
        descs = [_descriptor(norms[lab], f"{path}.norms.{lab}") for lab in scene.params]
    fam = NormFamily(scene.params, descs)
    try:
        fam.check_dim(scene.dim)
    except SoftInputError as e:
        raise _Bad(path, f"{e} (dimension clash)") from None
    return fam, {"norms": {lab: _descriptor_nf(d) for lab, d in zip(scene.params, descs)}}


def _build_sequence(scene, decl, path):
    form = decl.get("form")
    n = decl.get("dimension", scene.dim)
    if not isinstance(n, int) or n < 1:
        raise _Bad(f"{path}.dimension", "must be a positive integer")
    if form == "generated":
        coef, nf = {}, {"form": "generated"}
        for term in Generated.TERMS:
            if term in decl:
                vals = _per_label(decl[term], scene.params, f"{path}.{term}", lambda v, p: _vec(v, n, p))
                coef[term] = np.array(vals, dtype=float)
                nf[term] = {"values": {lab: list(map(float, row)) for lab, row in zip(scene.params, coef[term])}}
        seq = Generated(scene.params, n, **coef)
    elif form == "tabulated":
        terms = _req(decl, "terms", path, list)
        if not terms:
            raise _Bad(f"{path}.terms", "need at least one term")
        arr = [_per_label({"values": t}, scene.params, f"{path}.terms[{i}]", lambda v, p: _vec(v, n, p))
               for i, t in enumerate(terms)]
        seq = Tabulated(scene.params, np.array(arr, dtype=float))
        nf = {"form": "tabulated",
              "terms": [{lab: list(map(float, row)) for lab, row in zip(scene.params, t)} for t in seq.terms]}
    elif form == "combine":
        op = decl.get("op")
        if op not in ("add", "scalar_mul"):
            raise _Bad(f"{path}.op", "op must be \"add\" or \"scalar_mul\"")
        left = _ref(scene, decl.get("left"), "sequence", f"{path}.left")
        right = _ref(scene, decl.get("right"), "sequence", f"{path}.right")
        try:
            seq = Combined(op, left, right)
        except SoftInputError as e:
            raise _Bad(path, str(e)) from None
        nf = {"form": "combine", "op": op, "left": decl["left"], "right": decl["right"]}
        n = seq.dim
    else:
        raise _Bad(f"{path}.form", "sequence form must be generated, tabulated or combine")
    if n != scene.dim:
        nf["dimension"] = n
    return seq, nf


def _build_region(scene, decl, path):
    shape = decl.get("shape")
    if shape == "ball":
        fam = _ref(scene, decl.get("norm"), "norm_family", f"{path}.norm")
        centre = _ref(scene, decl.get("center"), "soft_vector", f"{path}.center")
        radius = decl.get("radius")
        if isinstance(radius, str):
            r = _ref(scene, radius, "soft_real", f"{path}.radius")
        else:
            r = SoftReal.constant(scene.params, _num(radius, f"{path}.radius"))
        kind = decl.get("ball", "closed")
        if kind not in ("open", "closed", "sphere"):
            raise _Bad(f"{path}.ball", "ball must be open, closed or sphere")
        try:
            reg = BallRegion(fam, BallSpec(centre, r, BallKind(kind)))
        except SoftInputError as e:
            raise _Bad(path, str(e)) from None
        nf = {"shape": "ball", "norm": decl["norm"], "center": decl["center"],
              "radius": radius if isinstance(radius, str) else float(radius), "ball": kind}
    elif shape == "subspace":
        space = _ref(scene, decl.get("space"), "soft_set", f"{path}.space")
        if space.kind is not SetKind.SUBSPACE:
            raise _Bad(f"{path}.space", "region needs a subspace soft set")
        reg = SubspaceRegion(space)
        nf = {"shape": "subspace", "space": decl["space"]}
    elif shape == "intersection":
        names = _req(decl, "regions", path, list)
        regs = [_ref(scene, nm, "region", f"{path}.regions[{i}]") for i, nm in enumerate(names)]
        try:
            reg = intersect_regions(regs)
        except SoftInputError as e:
            raise _Bad(path, str(e)) from None
        nf = {"shape": "intersection", "regions": list(names)}
    else:
        raise _Bad(f"{path}.shape", "region shape must be ball, subspace or intersection")
    return reg, nf


# -- tasks ----------------------------------------------------------------------------


def _check_task(scene, i, task):
    path = f"tasks[{i}]"
    if not isinstance(task, dict):
        raise _Bad(path, "task must be a JSON object")
    kind = task.get("kind")
    if kind not in TASK_REFS:
        raise _Bad(f"{path}.kind", f"unknown task kind {kind!r}")
    for spec in TASK_REFS[kind]:
        key = spec.rstrip("[]?~")
        optional = spec.endswith("?") or spec.endswith("~")
        if key not in task:
            if optional:
                continue
            raise _Bad(f"{path}.{key}", "missing required field")
        val = task[key]
        if spec.endswith("~") and not isinstance(val, str):
            continue  # literal number allowed
        want = REF_TYPES[key]
        if spec.endswith("[]"):
            if not isinstance(val, list) or not val:
                raise _Bad(f"{path}.{key}", "expected a non-empty list of object names")
            for j, nm in enumerate(val):
                _ref(scene, nm, want, f"{path}.{key}[{j}]")
        else:
            _ref(scene, val, want, f"{path}.{key}")
    return dict(task)
