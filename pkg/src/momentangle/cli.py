"""Command-line interface: JSON complexes in, JSON (or text) reports out.

Exit codes: 0 ok, 1 negative verdict, 2 usage or parse error, 3 cap exceeded.
"""
from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass

import click

from . import __version__
from .complex import CapExceeded, Complex, ComplexError, bits, popcount, to_mask
from .constructions import (
    PolytopeBoundary,
    PuzzleMoveSpec,
    barycentric_subdivision,
    catalog,
    construct_ep,
    dual_complex,
    puzzle_move,
    xi1,
    xi2,
)
from .hochster import DEFAULT_SWEEP_CAP, bigraded_betti
from .linalg import Field
from .properties import DEFAULT_SCC_CAP, PreconditionError, props_report
from .ring import BHRing, compare_fingerprints, fingerprint
from .taylor import tor_dims_via_taylor
from .toric import (
    CharMatrix,
    CharMatrixError,
    hirzebruch_family,
    quotient_ring_ranks,
    validate_characteristic,
    weak_equivalence,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
CHECKSUM_NAMES = ("T4", "O6", "I12", "C8", "D20", "tetrahedron")


@dataclass(frozen=True)
class RunConfig:
    field: str = "gf2"
    sweep_cap: int = DEFAULT_SWEEP_CAP
    scc_cap: int = DEFAULT_SCC_CAP
    threads: int = 1
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        for name in ("sweep_cap", "scc_cap", "threads"):
            if getattr(self, name) <= 0:
                raise click.UsageError(f"{name} must be positive")


def _as_complex(obj) -> Complex:
    """Face lattices of simple polytopes become their dual simplicial spheres."""
    return dual_complex(obj) if isinstance(obj, PolytopeBoundary) else obj


def catalog_checksums() -> dict[str, str]:
    out = {}
    for name in CHECKSUM_NAMES:
        obj = catalog(name)
        if isinstance(obj, PolytopeBoundary):
            data = {"n_vertices": obj.n_vertices, "faces": [list(f) for f in obj.faces]}
        else:
            data = obj.to_json()
        blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
        out[name] = hashlib.sha256(blob.encode()).hexdigest()[:16]
    return out


def _print_version(ctx, _param, value):
    if not value or ctx.resilient_parsing:
        return
    sums = ", ".join(f"{k}={v}" for k, v in catalog_checksums().items())
    click.echo(f"momentangle {__version__} (catalog: {sums})")
    ctx.exit()


def _emit(cfg: RunConfig, payload: dict, text: str | None = None):
    if cfg.format == "text" and text is not None:
        click.echo("config: " + json.dumps(asdict(cfg), sort_keys=True))
        click.echo(text)
    else:
        click.echo(json.dumps({"config": asdict(cfg), **payload}, sort_keys=True, indent=2))


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_complex(path: str | None, stdin: bool) -> Complex:
    if stdin or path == "-":
        raw = sys.stdin.read()
    elif path is None:
        raise click.UsageError("give --in FILE or --stdin")
    else:
        with open(path) as fh:
            raw = fh.read()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        _fail(EXIT_USAGE, f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}")
    if isinstance(data, dict) and "complex" in data and "facets" not in data:
        data = data["complex"]
    try:
        return Complex.from_json(data)
    except ComplexError as e:
        _fail(EXIT_USAGE, str(e))


def _labels(text: str) -> list[int]:
    try:
        return [int(t) - 1 for t in text.split(",") if t.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated vertex labels, got {text!r}") from None


def _run(fn):
    """Map library errors onto exit codes."""
    try:
        return fn()
    except CapExceeded as e:
        _fail(EXIT_CAP, f"cap exceeded: {e}")
    except (ComplexError, CharMatrixError, PreconditionError, ValueError) as e:
        _fail(EXIT_USAGE, str(e))


common_in = [
    click.option("--in", "path", type=click.Path(allow_dash=True), help="JSON complex file ('-' for stdin)."),
    click.option("--stdin", is_flag=True, help="Read the JSON complex from standard input."),
]


def with_input(f):
    for opt in reversed(common_in):
        f = opt(f)
    return f


@click.group()
@click.option("--version", is_flag=True, expose_value=False, is_eager=True, callback=_print_version)
@click.option("--field", type=click.Choice(["gf2", "gf3", "q"], case_sensitive=False), default="gf2", show_default=True)
@click.option("--sweep-cap", type=int, default=DEFAULT_SWEEP_CAP, show_default=True, help="Max m for subset sweeps.")
@click.option("--scc-cap", type=int, default=DEFAULT_SCC_CAP, show_default=True, help="Path budget per SCC triple.")
@click.option("--threads", type=int, default=1, show_default=True, help="Recorded only; computations are sequential.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def main(ctx, field, sweep_cap, scc_cap, threads, fmt, seed):
    """Face rings, moment-angle cohomology and rigidity invariants."""
    ctx.obj = RunConfig(field.lower(), sweep_cap, scc_cap, threads, fmt, seed)


@main.command()
@with_input
@click.option("--oracle", type=click.Choice(["hochster", "taylor", "both"]), default="hochster", show_default=True)
@click.option("--multigraded", is_flag=True)
@click.pass_obj
def betti(cfg: RunConfig, path, stdin, oracle, multigraded):
    """Bigraded Betti numbers of the face ring."""
    K = _read_complex(path, stdin)
    field = Field.parse(cfg.field)
    tables = {}
    if oracle in ("hochster", "both"):
        tables["hochster"] = _run(lambda: bigraded_betti(K, field, multigraded, cfg.sweep_cap))
    if oracle in ("taylor", "both"):
        tables["taylor"] = _run(lambda: tor_dims_via_taylor(K, field, multigraded))
    payload = {name: t.to_json() for name, t in tables.items()}
    code = EXIT_OK
    if oracle == "both":
        a, b = tables["hochster"], tables["taylor"]
        diff = a.differences(b)
        if multigraded and a.multigraded != b.multigraded:
            diff = diff or [("multigraded", None, None, None)]
        payload["agree"] = not diff
        payload["mismatches"] = [list(d) for d in diff]
        if diff:
            code = EXIT_NEGATIVE
    text = "\n\n".join(f"[{name}]\n{t.to_text()}" for name, t in tables.items())
    if oracle == "both":
        text += "\n\nagree: " + str(payload["agree"]).lower()
    _emit(cfg, payload, text)
    sys.exit(code)


@main.command()
@with_input
@click.pass_obj
def props(cfg: RunConfig, path, stdin):
    """Flagness, suspension, Gorenstein*, NSC, SCC and class Q report."""
    K = _read_complex(path, stdin)
    report = _run(lambda: props_report(K, cfg.field, cfg.scc_cap))
    _emit(cfg, {"props": report}, "\n".join(f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in report.items()))


@main.command()
@click.argument("kind", type=click.Choice(["catalog", "barycentric", "ep", "xi1", "xi2", "puzzle"]))
@with_input
@click.option("--name", help="Catalog name (for 'catalog').")
@click.option("--polytope", help="Catalog name of the 2-sphere for 'ep'.")
@click.option("--lattice", help="Face lattice for xi1/xi2: c8, d20 or tetrahedron.")
@click.option("--circuit", help="Induced 4-circuit a,x,b,y for 'puzzle'.")
@click.option("--swap", help="Opposite pair of the circuit to swap for 'puzzle'.")
@click.pass_obj
def construct(cfg: RunConfig, kind, path, stdin, name, polytope, lattice, circuit, swap):
    """Build a complex and print it as JSON."""

    def build():
        if kind == "catalog":
            if not name:
                raise click.UsageError("catalog needs --name")
            return _as_complex(catalog(name))
        if kind in ("xi1", "xi2"):
            G = catalog(lattice or "")
            if not isinstance(G, PolytopeBoundary):
                raise ComplexError(f"{lattice!r} is not a face lattice")
            return (xi1 if kind == "xi1" else xi2)(G)
        if kind == "ep" and polytope:
            return construct_ep(_as_complex(catalog(polytope)))
        K = _read_complex(path, stdin)
        if kind == "barycentric":
            return barycentric_subdivision(K)[0]
        if kind == "ep":
            return construct_ep(K)
        if not circuit or not swap:
            raise click.UsageError("puzzle needs --circuit and --swap")
        cyc, pair = _labels(circuit), _labels(swap)
        if len(cyc) != 4 or len(pair) != 2:
            raise click.UsageError("--circuit takes four labels and --swap two")
        a, x, b, y = cyc
        if sorted(pair) == sorted((a, b)):
            spec = PuzzleMoveSpec(K, (a, b), (x, y), {a: b, b: a})
        elif sorted(pair) == sorted((x, y)):
            spec = PuzzleMoveSpec(K, (x, y), (a, b), {x: y, y: x})
        else:
            raise click.UsageError("--swap must be an opposite pair of the circuit")
        return puzzle_move(spec)

    K = _run(build)
    click.echo(json.dumps(K.to_json(), sort_keys=True))


def _parse_class(ring: BHRing, text: str):
    """'1,3' is the missing-pair class; '1,2,4:d:i' is basis element i of H̃^d(K_J)."""
    parts = text.split(":")
    J = to_mask(_labels(parts[0]))
    if len(parts) == 1:
        if popcount(J) != 2 or ring.K.is_face(J):
            raise click.BadParameter(f"{text!r} is not a two-element missing face")
        return ring.missing_pair_class(J)
    if len(parts) != 3:
        raise click.BadParameter(f"cannot parse class {text!r}")
    return ring.gen(J, int(parts[1]), int(parts[2]))


def _element_json(x) -> list[dict]:
    out = []
    for (J, d), v in sorted(x.terms.items(), key=lambda t: (popcount(t[0][0]), bits(t[0][0]), t[0][1])):
        coords = [int(c) if getattr(c, "denominator", 1) == 1 else str(c) for c in v]
        out.append({"J": [i + 1 for i in bits(J)], "d": d, "degree": popcount(J) + d + 1, "coords": coords})
    return out


@main.command()
@with_input
@click.option("--left", "-a", "left", required=True, help="Class: missing pair '1,3' or 'J:d:i'.")
@click.option("--right", "-b", "right", required=True, help="Class: missing pair '2,4' or 'J:d:i'.")
@click.option("--star", is_flag=True, help="Use the ⋆-product computing the real moment-angle ring.")
@click.pass_obj
def product(cfg: RunConfig, path, stdin, left, right, star):
    """Product of two classes in the Baskakov-Hochster ring."""
    K = _read_complex(path, stdin)

    def go():
        R = BHRing(K, cfg.field, cfg.sweep_cap)
        a, b = _parse_class(R, left), _parse_class(R, right)
        c = R.star(a, b) if star else R.multiply(a, b)
        return {"left": _element_json(a), "right": _element_json(b), "product": _element_json(c), "zero": c.is_zero()}

    out = _run(go)
    _emit(cfg, out, json.dumps(out, sort_keys=True))


@main.command(name="fingerprint")
@with_input
@click.pass_obj
def fingerprint_cmd(cfg: RunConfig, path, stdin):
    """Ring invariants that any bigraded isomorphism preserves."""
    K = _read_complex(path, stdin)
    fp = _run(lambda: fingerprint(K, cfg.field))
    _emit(cfg, {"fingerprint": fp.to_json()}, json.dumps(fp.to_json(), sort_keys=True))


@main.command()
@click.option("--a", "path_a", required=True, type=click.Path())
@click.option("--b", "path_b", required=True, type=click.Path())
@click.option("--graded-only", is_flag=True, help="Ignore the bigraded table; compare total-degree data only.")
@click.pass_obj
def compare(cfg: RunConfig, path_a, path_b, graded_only):
    """Compare fingerprints; exit 1 when they differ."""
    K, L = _read_complex(path_a, False), _read_complex(path_b, False)
    res = _run(lambda: compare_fingerprints(K, L, cfg.field, graded_only=graded_only))
    text = "equal" if res.equal else f"differ at {res.first_difference}"
    _emit(cfg, {"compare": res.to_json()}, text)
    sys.exit(EXIT_OK if res.equal else EXIT_NEGATIVE)


@main.group()
def toric():
    """Characteristic matrices over a simplicial sphere."""


def _read_matrix(path: str | None, hirzebruch: int | None, complex_path: str | None) -> CharMatrix:
    if hirzebruch is not None:
        return hirzebruch_family(hirzebruch)
    if path is None:
        raise click.UsageError("give --matrix FILE or --hirzebruch K")
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            _fail(EXIT_USAGE, f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}")
    if "complex" in data:
        K = Complex.from_json(data["complex"])
    elif complex_path:
        K = _read_complex(complex_path, False)
    else:
        raise click.UsageError("the matrix JSON has no 'complex'; pass --in")
    L = CharMatrix.from_json(K, data)
    if data.get("n", L.n) != L.n:
        raise CharMatrixError("n does not match the column length")
    return L


matrix_opts = [
    click.option("--matrix", "matrix", type=click.Path(), help="CharMatrix JSON."),
    click.option("--hirzebruch", type=int, help="Use the 6-column family over the cube dual."),
    click.option("--in", "path", type=click.Path(), help="Complex JSON when the matrix omits it."),
]


def with_matrix(f):
    for opt in reversed(matrix_opts):
        f = opt(f)
    return f


@toric.command()
@with_matrix
@click.option("--strict", is_flag=True, help="Also check every lower-dimensional face.")
@click.pass_obj
def validate(cfg: RunConfig, matrix, hirzebruch, path, strict):
    """Check the ±1 minor condition; exit 1 when it fails."""
    L = _run(lambda: _read_matrix(matrix, hirzebruch, path))
    v = _run(lambda: validate_characteristic(L, strict))
    _emit(cfg, {"validation": v.to_json()}, json.dumps(v.to_json(), sort_keys=True))
    sys.exit(EXIT_OK if v.valid else EXIT_NEGATIVE)


@toric.command()
@with_matrix
@click.pass_obj
def ranks(cfg: RunConfig, matrix, hirzebruch, path):
    """Ranks of the quotient of the face ring by the linear system of the matrix."""
    L = _run(lambda: _read_matrix(matrix, hirzebruch, path))
    r = _run(lambda: quotient_ring_ranks(L))
    _emit(cfg, {"ranks": list(r)}, " ".join(map(str, r)))


@toric.command()
@click.option("--matrix", "matrices", multiple=True, type=click.Path(), help="Two CharMatrix JSON files.")
@click.option("--hirzebruch", "ks", multiple=True, type=int, help="Two family parameters.")
@click.option("--in", "path", type=click.Path())
@click.pass_obj
def equiv(cfg: RunConfig, matrices, ks, path):
    """Weak equivalence Λ = A·Λ'·B; exit 1 when inequivalent."""
    Ls = [_run(lambda m=m: _read_matrix(m, None, path)) for m in matrices] + [hirzebruch_family(k) for k in ks]
    if len(Ls) != 2:
        raise click.UsageError("give exactly two matrices")
    ok, wit = _run(lambda: weak_equivalence(Ls[0], Ls[1]))
    payload = {"equivalent": ok, "witness": wit.to_json() if wit else None}
    _emit(cfg, payload, json.dumps(payload, sort_keys=True))
    sys.exit(EXIT_OK if ok else EXIT_NEGATIVE)


if __name__ == "__main__":
    main()
