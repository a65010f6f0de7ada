"""CLI interface for dglm."""

from collections.abc import Callable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Annotated, Any, Optional

import typer
from rich.console import Console
from rich.markup import escape

from dglm import __version__
from dglm.config import DEFAULT_MAX_DEGREE, GAUGE_CANDIDATE_LIMIT, HARD_MAX_DEGREE
from dglm.core.actions_semidirect import (
    ComparisonReport,
    RelativeModel,
    build_relative_model,
    canonical_action,
    check_outer_axioms,
    cone_homotopy_check,
    induced_hom_action,
    s_pi_star,
    zeta,
)
from dglm.core.ce_convolution import (
    Coderivation,
    build_ce,
    build_convolution,
    check_coderivation,
    check_coalgebra,
    indecomposables_comparison,
    tau_from_inclusion,
    universal_twisting,
)
from dglm.core.derivations import build_der, build_rel_der, build_vanishing_der, restriction_ses
from dglm.core.dglie import ConnectedCover, check_d_squared, check_dg_lie
from dglm.core.exactlin import HomologyReport, cycles, homology
from dglm.core.gla_free import FreeGradedLie, LieMorphism
from dglm.core.mc_gauge import (
    GroupElement,
    MCElement,
    check_action_property,
    check_orbit_symmetry,
    gauge_act,
    gauge_orbits,
    is_mc,
    mc_solutions,
)
from dglm.errors import DegreeRangeExceeded, DglmError, NotMaurerCartan, UnknownSuite
from dglm.models import ModelFile, ModelSpec, cp_inclusion, cp_model, disk_pairs, sphere_model
from dglm.models.builtin import boundary_model
from dglm.models.parser import format_model_file, parse_model_file
from dglm.report import Check, OutputFormat, Report, render_machine, render_table, render_text
from dglm.utils.file_io import read_model_input
from dglm.utils.logging import configure_logging

console = Console()


class HomologyOf(str, Enum):
    lie = "lie"
    der = "der"
    ce = "ce"


class ExampleKind(str, Enum):
    cp = "cp"
    sphere = "sphere"
    disk = "disk"
    boundary = "boundary"


ModelOption = Annotated[
    Optional[str],
    typer.Option(
        "--model", "-m",
        help="Model file, builtin:<name> (cp:k, cp:k:n, sphere:n, disk:1, disk:2, boundary) or - for stdin.",
    ),
]
NameOption = Annotated[
    Optional[str],
    typer.Option("--name", help="Model to use when the file holds several."),
]
MapOption = Annotated[
    Optional[str],
    typer.Option("--map", help="Map to use when the file holds several."),
]
MaxDegreeOption = Annotated[
    int,
    typer.Option(
        "--max-degree", "-N",
        help=f"Truncation degree of the model (above {HARD_MAX_DEGREE} needs --force).",
        min=1,
    ),
]
ForceOption = Annotated[
    bool,
    typer.Option("--force", help=f"Allow --max-degree above {HARD_MAX_DEGREE}."),
]
ReportOption = Annotated[
    Optional[Path],
    typer.Option("--report", "-r", help="Also write the report to this file."),
]
FormatOption = Annotated[
    OutputFormat,
    typer.Option("--format", "-f", help="Report format: table, machine."),
]


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        console.print(f"dglm version {__version__}")
        raise typer.Exit()


@contextmanager
def handle_errors() -> Iterator[None]:
    """Turn library errors into an ``Error:`` line and their exit code."""
    try:
        yield
    except DglmError as e:
        console.print(f"[red]Error:[/] {escape(str(e))}")
        witness = getattr(e, "witness", None)
        if witness is not None:
            console.print(f"  Witness: {escape(str(witness))}")
        raise typer.Exit(e.exit_code) from None


def check_cutoff(max_degree: int, force: bool) -> int:
    if max_degree > HARD_MAX_DEGREE and not force:
        raise DegreeRangeExceeded("--max-degree (pass --force to go higher)", max_degree, 1, HARD_MAX_DEGREE)
    return max_degree


def emit(report: Report, fmt: OutputFormat, path: Optional[Path]) -> None:
    """Print ``report``, optionally save it, and exit 1 when a check failed."""
    if not report.complete:
        report.notes.append("checks marked ? were cut short or not run: they neither pass nor fail")
    if fmt is OutputFormat.machine:
        print(render_machine(report), end="")
    else:
        console.print(render_table(report))
    if path is not None:
        try:
            path.write_text(render_text(report, fmt), encoding="utf-8")
        except OSError as e:
            console.print(f"[red]Error:[/] cannot write {path}: {e.strerror}")
            raise typer.Exit(2) from None
    if not report.ok:
        raise typer.Exit(1)


def pick_model(models: ModelFile, name: Optional[str]) -> ModelSpec:
    """The named model, the only model, or the target of the only map."""
    if name is None and len(models.models) > 1 and models.maps:
        return models.model(models.map().target)
    return models.model(name)


def command_line(*parts: Any) -> str:
    """The invocation as text; an option whose value is None or empty is left out."""
    words = ["dglm"]
    for p in parts:
        if p in (None, ""):
            if len(words) > 1 and words[-1].startswith("--"):
                words.pop()
            continue
        words.append(str(p))
    return " ".join(words)


# --------------------------------------------------------------------------- #
# homology
# --------------------------------------------------------------------------- #


def homology_cmd(
    model: ModelOption = None,
    name: NameOption = None,
    of: Annotated[
        HomologyOf,
        typer.Option("--of", help="Complex: lie (the model), der (its derivations), ce (its reduced CE coalgebra)."),
    ] = HomologyOf.lie,
    max_degree: MaxDegreeOption = DEFAULT_MAX_DEGREE,
    force: ForceOption = False,
    report: ReportOption = None,
    fmt: FormatOption = OutputFormat.table,
) -> None:
    """
    Exact homology of a model, its derivations or its CE coalgebra.

    Examples:\n
        dglm homology -m builtin:cp:2                 H(L_CP2)\n
        dglm homology -m builtin:sphere:4 --of ce     H(C̄ L(u))\n
        dglm homology -m model.txt --of der -N 8      H(Der L)
    """
    with handle_errors():
        cutoff = check_cutoff(max_degree, force)
        models, source, _ = read_model_input(model)
        spec = pick_model(models, name)
        L = spec.build(cutoff)
        if of is HomologyOf.lie:
            complex_ = L.chain_complex
        elif of is HomologyOf.der:
            complex_ = build_der(L).chain_complex
        else:
            complex_ = build_ce(L).chain_complex
        rep = Report(
            command_line("homology", "--model", source, "--of", of.value, "--max-degree", cutoff),
            [spec.name],
        )
        rep.add_column("dim", {n: complex_.dim(n) for n in range(complex_.lo, complex_.hi + 1)})
        rep.add_homology(homology(complex_, complex_.lo, complex_.hi, strict=False))
        rep.notes.append(f"{complex_.name}: homology is known where both neighbouring degrees are")
    emit(rep, fmt, report)


# --------------------------------------------------------------------------- #
# baut-rel
# --------------------------------------------------------------------------- #


def _agreement(first: HomologyReport, second: HomologyReport) -> Check:
    a, b = first.dims(), second.dims()
    common = [n for n in sorted(set(a) & set(b)) if a[n] is not None and b[n] is not None]
    if not common:
        return Check("pipelines agree", None, "no degree is valid in both pipelines")
    bad = [n for n in common if a[n] != b[n]]
    witness = f"degree {bad[0]}: {a[bad[0]]} vs {b[bad[0]]}" if bad else None
    return Check(f"pipelines agree on {common[0]}..{common[-1]}", not bad, witness)


def _degree_readings(rep: Report, h: HomologyReport, i: LieMorphism, free: list[str]) -> None:
    degrees = sorted(h.degrees)
    rep.add_column("pi_degree", {n: n + 1 for n in degrees})
    if len(free) == 1:
        shift = i.target.gen_degree[free[0]]
        rep.add_column("shifted_degree", {n: n + shift for n in degrees})
        rep.notes.append(
            f"shifted_degree = n + |{free[0]}|: Der({i.target.name}‖{i.source.name}) "
            f"read as a shifted copy of {i.target.name}"
        )


def _relative_pipelines(rep: Report, i: LieMorphism) -> None:
    free = i.complement()
    rel = ConnectedCover(build_rel_der(i), 1)
    h = homology(rel.chain_complex, 1, rel.hi - 1)
    rep.add_homology(h)
    _degree_readings(rep, h, i, free)
    model = build_relative_model(i)
    h_model = model.homology(1)
    rep.add_homology(h_model, "dim_H_model")
    rep.checks.append(Check.of("twist identity", model.twist_check))
    _add_comparison(rep, zeta(model))
    rep.checks.append(_agreement(h, h_model))
    rep.notes.append(
        f"dual model {model.algebra.name}: word cutoff {model.conv.coalgebra.hi}, "
        f"degrees [{model.lo}, {model.hi}]"
    )


def _vanishing_pipeline(rep: Report, i: LieMorphism) -> None:
    elements = [i(i.source.generator(g)) for g in i.source.generators.names]
    cover = ConnectedCover(build_vanishing_der(i.target, elements), 1)
    h = homology(cover.chain_complex, 1, cover.hi - 1)
    rep.add_homology(h)
    _degree_readings(rep, h, i, [])
    kind = "a free extension" if i.is_free_extension else "not a free extension"
    rep.notes.append(f"vanishing-derivations mode: {i.name} is {kind}; no dual pipeline")


def baut_rel(
    model: ModelOption = None,
    map_name: MapOption = None,
    vanishing: Annotated[
        bool,
        typer.Option(
            "--vanishing",
            help="Use derivations killing the image of the map; allowed for maps that are not free.",
        ),
    ] = False,
    max_degree: MaxDegreeOption = DEFAULT_MAX_DEGREE,
    force: ForceOption = False,
    report: ReportOption = None,
    fmt: FormatOption = OutputFormat.table,
) -> None:
    """
    Homology of the positive relative derivations of a map L_A -> L_X.

    Also builds the twisted semidirect model and compares both pipelines.

    Examples:\n
        dglm baut-rel -m builtin:cp:1:2\n
        dglm baut-rel -m builtin:disk:1\n
        dglm baut-rel -m builtin:disk:2 --vanishing
    """
    with handle_errors():
        cutoff = check_cutoff(max_degree, force)
        models, source, _ = read_model_input(model)
        i = models.build_map(cutoff, map_name)
        rep = Report(
            command_line(
                "baut-rel", "--model", source, "--map", map_name,
                "--vanishing" if vanishing else None, "--max-degree", cutoff,
            ),
            [i.source.name, i.target.name],
        )
        if vanishing:
            _vanishing_pipeline(rep, i)
        else:
            _relative_pipelines(rep, i)
    emit(rep, fmt, report)


# --------------------------------------------------------------------------- #
# verify
# --------------------------------------------------------------------------- #


@dataclass
class SuiteInputs:
    """Lazily built algebra shared by the suites of one ``verify`` run."""

    models: ModelFile
    name: Optional[str]
    map_name: Optional[str]
    cutoff: int
    limit: Optional[int] = None
    _cache: dict[str, Any] = field(default_factory=dict, init=False, repr=False)

    def lie(self) -> FreeGradedLie:
        if "lie" not in self._cache:
            self._cache["lie"] = pick_model(self.models, self.name).build(self.cutoff)
        return self._cache["lie"]

    def inclusion(self) -> LieMorphism:
        if "map" not in self._cache:
            self._cache["map"] = self.models.build_map(self.cutoff, self.map_name)
        return self._cache["map"]

    def relative_model(self) -> RelativeModel:
        if "model" not in self._cache:
            self._cache["model"] = build_relative_model(self.inclusion())
        return self._cache["model"]

    @property
    def has_map(self) -> bool:
        return bool(self.models.maps)


def _add_comparison(rep: Report, comparison: ComparisonReport) -> None:
    name = comparison.name
    rep.checks.append(Check(f"{name} chain map", True))
    if comparison.brackets is not None:
        rep.checks.append(Check.of(f"{name} brackets", comparison.brackets))
    iso = comparison.induced.iso
    bad = [n for n in sorted(iso) if not iso[n]]
    rep.checks.append(
        Check(
            f"{name} quasi-isomorphism on {comparison.lo}..{comparison.hi}",
            not bad,
            f"H({name}) is not an isomorphism in degree {bad[0]}" if bad else None,
        )
    )
    rep.add_column(f"{name}_iso", {n: "yes" if ok else "no" for n, ok in iso.items()})
    rep.lo = comparison.lo if rep.lo is None else max(rep.lo, comparison.lo)
    rep.hi = comparison.hi if rep.hi is None else min(rep.hi, comparison.hi)


def _disclose(rep: Report, lo: int, hi: int) -> None:
    rep.lo, rep.hi = lo, hi


def suite_dsquare(rep: Report, inputs: SuiteInputs) -> None:
    L = inputs.lie()
    der = build_der(L)
    _disclose(rep, der.lo, L.hi)
    rep.checks.append(Check.of(L.name, check_d_squared(L)))
    rep.checks.append(Check.of(der.name, check_d_squared(der)))


def suite_jacobi(rep: Report, inputs: SuiteInputs) -> None:
    L = inputs.lie()
    der = build_der(L)
    _disclose(rep, der.lo, L.hi)
    rep.add_checks(L.name, check_dg_lie(L, limit=inputs.limit))
    rep.add_checks(der.name, check_dg_lie(der, limit=inputs.limit))


def suite_ce(rep: Report, inputs: SuiteInputs) -> None:
    L = inputs.lie()
    ce = build_ce(L)
    _disclose(rep, ce.lo, ce.hi)
    rep.add_checks(ce.name, check_coalgebra(ce, limit=inputs.limit))
    for g in L.generators.names[:1]:
        x = L.generator(g)
        theta = Coderivation(ce, lambda a, x=x: L.bracket(x, a), x.degree)
        rep.add_checks(f"ad_{g}", check_coderivation(theta, limit=inputs.limit))
    induced = indecomposables_comparison(L, 2, L.hi)
    bad = [n for n in sorted(induced.iso) if not induced.iso[n]]
    rep.checks.append(
        Check(
            f"H(C̄) ≅ H(Q) shifted, on 2..{L.hi}",
            not bad,
            f"not an isomorphism in degree {bad[0]}" if bad else None,
        )
    )
    rep.add_homology(homology(ce.chain_complex, 2, L.hi), "dim_H(C̄)")


def suite_mc(rep: Report, inputs: SuiteInputs) -> None:
    if inputs.has_map:
        tau = tau_from_inclusion(inputs.inclusion())
    else:
        tau = universal_twisting(inputs.lie())
    conv = tau.algebra
    _disclose(rep, conv.lo, conv.hi)
    check = is_mc(conv, tau.element)
    rep.checks.append(Check(f"{tau.name} is Maurer–Cartan in {conv.name}", check.ok, None if check else str(check.residual)))
    rep.notes.append(f"words of C̄ up to degree {conv.coalgebra.hi}")


def suite_outer_axioms(rep: Report, inputs: SuiteInputs) -> None:
    X = inputs.inclusion().target if inputs.has_map else inputs.lie()
    der = build_der(X)
    action = canonical_action(der)
    _disclose(rep, action.g.lo, action.g.hi)
    rep.add_checks(f"{action.g.name} on {X.name}", check_outer_axioms(action, limit=inputs.limit))
    if inputs.has_map:
        i = inputs.inclusion()
        conv = build_convolution(i.source, X)
        hom_action = induced_hom_action(action, conv, verify=False)
        rep.add_checks(f"{action.g.name} on {conv.name}", check_outer_axioms(hom_action, limit=inputs.limit))


def suite_zeta(rep: Report, inputs: SuiteInputs) -> None:
    _add_comparison(rep, zeta(inputs.relative_model()))


def suite_spi(rep: Report, inputs: SuiteInputs) -> None:
    _add_comparison(rep, s_pi_star(inputs.relative_model()))


def suite_ses(rep: Report, inputs: SuiteInputs) -> None:
    ses = restriction_ses(inputs.inclusion())
    degrees = {d.degree: d for d in ses.degrees}
    rep.add_column("relative", {n: d.dim_relative for n, d in degrees.items()})
    rep.add_column("full", {n: d.dim_full for n, d in degrees.items()})
    rep.add_column("restricted", {n: d.dim_restricted for n, d in degrees.items()})
    if degrees:
        _disclose(rep, min(degrees), max(degrees))
    rep.checks.append(Check("0 -> Der(X‖A) -> Der(X) -> Der_i(A, X) -> 0", ses.ok, str(ses.witness) if ses.witness else None))


def suite_cone_homotopy(rep: Report, inputs: SuiteInputs) -> None:
    model = inputs.relative_model()
    _disclose(rep, max(model.lo, 1), model.hi - 1)
    rep.checks.append(Check.of("dH + Hd = Ψ - Φ", cone_homotopy_check(model)))


def suite_gauge(rep: Report, inputs: SuiteInputs) -> None:
    if inputs.has_map:
        i = inputs.inclusion()
        g = build_convolution(i.source, i.target)
    else:
        L = inputs.lie()
        g = build_convolution(L, L)
    _disclose(rep, g.lo, g.hi)
    zero = MCElement(g, g.zero(-1))
    points = mc_solutions(g) if 3 ** g.dim(-1) <= GAUGE_CANDIDATE_LIMIT else [zero]
    group = [GroupElement(g, g.from_vector(0, z)) for z in cycles(g.chain_complex, 0)][:4]
    rep.notes.append(f"{len(points)} Maurer–Cartan points, {len(group)} degree 0 cycles in {g.name}")

    witness = None
    for x in group:
        for a in points[:8]:
            try:
                gauge_act(x, a)
            except NotMaurerCartan as e:
                witness = witness or str(e)
    rep.checks.append(Check("exp(x).a is Maurer–Cartan", witness is None, witness))
    moved = next((x for x in group if gauge_act(x, zero).element), None)
    rep.checks.append(Check("exp(x).0 = 0", moved is None, None if moved is None else str(moved.element)))
    failed = next(
        (
            v
            for x in group[:3]
            for y in group[:3]
            for a in points[:4]
            if not (v := check_action_property(x, y, a))
        ),
        None,
    )
    name = "exp(x*y).a = exp(x).(exp(y).a)"
    rep.checks.append(Check.of(name, failed) if failed is not None else Check(name, True))
    orbits = gauge_orbits(points, group)
    rep.checks.append(Check.of("orbit symmetry", check_orbit_symmetry(orbits, group)))
    rep.notes.append(f"{len(orbits.orbits)} gauge orbits among the points")


SUITES: dict[str, Callable[[Report, SuiteInputs], None]] = {
    "dsquare": suite_dsquare,
    "jacobi": suite_jacobi,
    "ce": suite_ce,
    "mc": suite_mc,
    "outer-axioms": suite_outer_axioms,
    "zeta": suite_zeta,
    "spi": suite_spi,
    "ses": suite_ses,
    "cone-homotopy": suite_cone_homotopy,
    "gauge": suite_gauge,
}


def verify(
    suite: Annotated[str, typer.Argument(help=f"Suite: {', '.join(SUITES)}.")],
    model: ModelOption = None,
    name: NameOption = None,
    map_name: MapOption = None,
    max_degree: MaxDegreeOption = DEFAULT_MAX_DEGREE,
    force: ForceOption = False,
    report: ReportOption = None,
    fmt: FormatOption = OutputFormat.table,
    sample: Annotated[
        Optional[int],
        typer.Option(
            "--sample", help="Check at most this many cases per degree combination; a cut-short check reports ?.", min=1
        ),
    ] = None,
) -> None:
    """
    Run an exact verification suite; exits 1 when any check fails.

    Examples:\n
        dglm verify mc -m builtin:cp:2\n
        dglm verify zeta -m builtin:disk:1\n
        dglm verify outer-axioms -m builtin:cp:1:2 -N 6
    """
    with handle_errors():
        run = SUITES.get(suite)
        if run is None:
            raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        cutoff = check_cutoff(max_degree, force)
        models, source, _ = read_model_input(model)
        rep = Report(
            command_line(
                "verify", suite, "--model", source, "--name", name, "--map", map_name,
                "--max-degree", cutoff, "--sample", sample,
            ),
            [m.name for m in models.models],
        )
        run(rep, SuiteInputs(models, name, map_name, cutoff, sample))
    emit(rep, fmt, report)


# --------------------------------------------------------------------------- #
# example, parse-check
# --------------------------------------------------------------------------- #


def example(
    kind: Annotated[ExampleKind, typer.Argument(help="Model family: cp, sphere, disk, boundary.")],
    k: Annotated[int, typer.Option("--k", "-k", help="CP^k (cp).", min=1)] = 2,
    n: Annotated[
        Optional[int],
        typer.Option("--n", "-n", help="CP^k ⊂ CP^n (cp) or the sphere S^(n-1) (sphere, default 4)."),
    ] = None,
    pair: Annotated[int, typer.Option("--pair", help="Disk pair 1 (free) or 2 (not free).", min=1, max=2)] = 1,
) -> None:
    """
    Print a built-in model as model-file text.

    Examples:\n
        dglm example cp -k 2\n
        dglm example cp -k 1 -n 2 > cp1_cp2.model\n
        dglm example disk --pair 2
    """
    with handle_errors():
        if kind is ExampleKind.cp:
            models = cp_inclusion(k, n) if n is not None else ModelFile((cp_model(k),))
        elif kind is ExampleKind.sphere:
            models = ModelFile((sphere_model(4 if n is None else n),))
        elif kind is ExampleKind.disk:
            models = disk_pairs()[pair - 1].file
        else:
            models = boundary_model()
    print(format_model_file(models), end="")


def parse_check(
    model: ModelOption = None,
    max_degree: MaxDegreeOption = DEFAULT_MAX_DEGREE,
    force: ForceOption = False,
    report: ReportOption = None,
    fmt: FormatOption = OutputFormat.table,
) -> None:
    """
    Parse a model file, check it prints back to itself, and build every model and map.

    Examples:\n
        dglm parse-check -m models.txt\n
        dglm example boundary | dglm parse-check -m -
    """
    with handle_errors():
        cutoff = check_cutoff(max_degree, force)
        models, source, _ = read_model_input(model)
        rep = Report(command_line("parse-check", "--model", source, "--max-degree", cutoff), [m.name for m in models.models])
        again = parse_model_file(format_model_file(models))
        rep.checks.append(Check("parse(print(file)) = file", again == models, None if again == models else format_model_file(again)))
        for spec in models.models:
            L = spec.build(cutoff)
            rep.checks.append(Check(f"{spec.name}: d² = 0", True))
            _disclose(rep, L.lo, L.hi)
        for mp in models.maps:
            i = models.build_map(cutoff, mp.name)
            rep.checks.append(Check(f"map {mp.name}: chain map", True))
            kind = "free extension" if i.is_free_extension else "not a free extension"
            rep.notes.append(f"map {mp.name}: {mp.source} -> {mp.target} is a {kind}")
    emit(rep, fmt, report)


# Create the Typer app
app = typer.Typer(
    name="dglm",
    help="Exact dg Lie models: derivations, convolution algebras and relative homotopy automorphisms.",
    add_completion=True,
    no_args_is_help=True,
)


@app.callback()
def main_cli(
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Log construction steps."),
    ] = False,
    version: Annotated[
        Optional[bool],
        typer.Option(
            "--version", "-V",
            help="Show version and exit.",
            callback=version_callback,
            is_eager=True,
        ),
    ] = None,
) -> None:
    """Exact dg Lie models for relative homotopy automorphisms."""
    configure_logging(verbose)


# Register the commands
app.command("homology")(homology_cmd)
app.command("baut-rel")(baut_rel)
app.command("verify")(verify)
app.command("example")(example)
app.command("parse-check")(parse_check)


if __name__ == "__main__":
    app()
