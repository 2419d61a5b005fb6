"""``freeprob``: exact tables for the free unitary Brownian motion.

Usage::

    freeprob moments --order 3 --t 1
    freeprob star-cumulants --order 4 --format json
    freeprob jacobi-r --order 5 --variant corrected
    freeprob schur --depth 2 --t 1 --t 1/2
    freeprob verify --order 6

Exit codes: 0 ok, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import json
import sys

import click

from . import fubm, jacobi, ncpart, schur
from .emit import TableDoc, parse_t, to_csv, to_json, to_pretty
from .limits import check_range
from .tables import CoeffTable, Finding

__all__ = ["cli", "main"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _TValue(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        try:
            return parse_t(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


def _common(default_order):
    def deco(fn):
        fn = click.option("--format", "fmt", type=click.Choice(["pretty", "json", "csv"]), default="pretty")(fn)
        fn = click.option("--precision", type=int, default=53, show_default=True, help="bits, >= 53")(fn)
        fn = click.option("--t", "ts", type=_TValue(), multiple=True, help="evaluation time (repeatable)")(fn)
        fn = click.option("--order", type=int, default=default_order, show_default=True)(fn)
        return fn

    return deco


def _emit(tables: list[CoeffTable], ts, precision, fmt):
    if precision < 53:
        raise click.BadParameter("must be at least 53", param_hint="--precision")
    docs = [TableDoc.build(t, ts, precision) for t in tables]
    text = {"json": to_json, "csv": to_csv, "pretty": to_pretty}[fmt](docs)
    click.echo(text.rstrip("\n"))


def _guard(name, value, lo, hi):
    try:
        check_range(name, value, lo, hi)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint=f"--{name}") from exc


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Exact moments, cumulants, R/S-transform and Schur coefficients."""


@cli.command()
@_common(6)
def moments(order, ts, precision, fmt):
    """phi(u_t^k) for k = 1..order."""
    _guard("order", order, 1, 30)
    vals = [fubm.moment_fubm(k) for k in range(1, order + 1)]
    _emit([CoeffTable.from_values("phi(u_t^k)", vals)], ts, precision, fmt)


@cli.command("free-cumulants")
@_common(6)
def free_cumulants(order, ts, precision, fmt):
    """kappa_n(u_t), closed form, checked by Mobius inversion for n <= 8."""
    _guard("order", order, 1, 30)
    vals = [fubm.free_cumulant_fubm(n) for n in range(1, order + 1)]
    n_check = min(order, 8)
    ok = all(ncpart.free_cumulant(fubm.moment_fubm, n) == vals[n - 1] for n in range(1, n_check + 1))
    finding = Finding(f"Mobius inversion agrees (n<={n_check})", ok)
    table = CoeffTable.from_values("kappa_n(u_t)", vals).with_errata(finding)
    _emit([table], ts, precision, fmt)


@cli.command("star-cumulants")
@_common(4)
def star_cumulants(order, ts, precision, fmt):
    """g_1..g_N, h_0..h_N and a_1..a_N."""
    _guard("order", order, 1, 5)
    a = fubm.a_table(order)
    a = a.with_errata(*fubm.g_derivative_check(order))
    _emit([fubm.g_table(order), fubm.h_table(order), a], ts, precision, fmt)


@cli.command("jacobi-r")
@_common(5)
@click.option("--variant", type=click.Choice(["all", *jacobi.B_VARIANTS]), default="all")
def jacobi_r(order, ts, precision, fmt, variant):
    """b_n of 1/(1+R_t): reversion oracle plus closed-form variants."""
    _guard("order", order, 1, 8)
    variants = jacobi.B_VARIANTS if variant == "all" else (variant,)
    cmps = [jacobi.b_table(order, v) for v in variants]
    oracle = CoeffTable(
        "b", cmps[0].oracle.entries, cmps[0].oracle.order, "oracle", tuple(c.finding() for c in cmps)
    )
    closed = [
        CoeffTable(f"b[{c.variant}]", c.closed.entries, c.closed.order, "closed-form") for c in cmps
    ]
    _emit([oracle, *closed], ts, precision, fmt)


@cli.command("jacobi-s")
@_common(4)
@click.option("--variant", type=click.Choice(["all", *jacobi.C_VARIANTS]), default="all")
def jacobi_s(order, ts, precision, fmt, variant):
    """c_n of (M_t - 1)^{-1} and the S-transform coefficients."""
    _guard("order", order, 1, 8)
    variants = jacobi.C_VARIANTS if variant == "all" else (variant,)
    cmps = [jacobi.c_table(order, v) for v in variants]
    oracle = CoeffTable(
        "c", cmps[0].oracle.entries, cmps[0].oracle.order, "oracle", tuple(c.finding() for c in cmps)
    )
    s = jacobi.s_transform(order - 1).with_errata(
        jacobi.r_of_zs_check(order), jacobi.s_functional_check(order)
    )
    _emit([oracle, s], ts, precision, fmt)


@cli.command("schur")
@_common(3)
@click.option("--depth", type=int, default=2, show_default=True, help="last Verblunsky index")
def schur_cmd(order, ts, precision, fmt, depth):
    """f_0 and f_1 coefficients and gamma_0..gamma_depth."""
    _guard("order", order, 0, 8)
    _guard("depth", depth, 0, 5)
    f0 = schur.f0_series(order, "oracle")
    f1 = schur.f1_series(order, "oracle")
    tables = [
        CoeffTable.from_values("f0", f0.coeffs, start=0, provenance="oracle").with_errata(
            Finding("closed form agrees", f0 == schur.f0_series(order))
        ),
        CoeffTable.from_values("f1", f1.coeffs, start=0, provenance="oracle").with_errata(
            *schur.f1_check(order)
        ),
        schur.verblunsky_table(depth),
    ]
    _emit(tables, ts, precision, fmt)


@cli.command()
@click.option("--order", type=int, default=8, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["pretty", "json", "csv"]), default="pretty")
@click.option("--only", default=None, help="run checks whose name contains this text")
def verify(order, fmt, only):
    """Run the identity suite; exit 1 if any check fails."""
    from .verify import run_suite

    _guard("order", order, 2, 8)
    select = (lambda c: only.lower() in c.name.lower()) if only else None
    results = run_suite(order, select)
    if fmt == "json":
        click.echo(json.dumps([r.to_dict() for r in results], indent=2))
    elif fmt == "csv":
        click.echo("check,kind,passed,findings,failing")
        for r in results:
            click.echo(f'"{r.name}",{r.kind},{r.passed},{len(r.findings)},{len(r.failures())}')
    else:
        for r in results:
            click.echo(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  [{r.kind}, {len(r.findings)} findings]")
            for f in r.failures():
                tag = "erratum" if r.passed else "diff"
                click.echo(f"      {tag}: {f.name}")
                for k, v in f.data.items():
                    click.echo(f"          {k}: {v}")
        n_ok = sum(r.passed for r in results)
        click.echo(f"{n_ok}/{len(results)} checks passed")
    click.get_current_context().exit(EXIT_OK if all(r.passed for r in results) else EXIT_FAIL)


def _json_mode(argv) -> bool:
    return "--format=json" in argv or any(
        a == "--format" and b == "json" for a, b in zip(argv, argv[1:])
    )


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        rv = cli.main(args=argv, prog_name="freeprob", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        if _json_mode(argv):
            click.echo(json.dumps({"error": {"type": type(exc).__name__, "message": exc.format_message()}}))
        else:
            exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
