"""Command line interface: `miracells <command> ...` or `python3 -m miracells`."""
from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from . import bimodule, cache, laurent_hecke, microlab, mrsk, rbperm, verify
from .ffield import DEFAULT_P
from .rbperm import ColoredPermutation


# ---------------------------------------------------------------- plumbing

def parse_tw(text: str) -> ColoredPermutation:
    text = text.strip()
    try:
        if text.startswith("{"):
            return rbperm.from_json(json.loads(text))
        return rbperm.from_text(text)
    except json.JSONDecodeError as exc:
        raise click.BadParameter(f"JSON error at column {exc.colno}: {exc.msg}") from None
    except (ValueError, KeyError) as exc:
        raise click.BadParameter(str(exc)) from None


def parse_partition(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise click.BadParameter(f"not a partition: {text!r}") from None


def parse_tableau(text: str) -> tuple[tuple[int, ...], ...]:
    """Rows separated by "/", entries by spaces: "1 3/2"."""
    try:
        return tuple(tuple(int(x) for x in row.split()) for row in text.split("/") if row.strip())
    except ValueError:
        raise click.BadParameter(f"not a tableau: {text!r}") from None


def tw_text(tw: ColoredPermutation) -> str:
    return rbperm.to_text(tw)


def element_json(elem: dict, basis: str) -> dict:
    return {
        "basis": basis,
        "terms": {tw_text(k): c.to_json() for k, c in sorted(elem.items(), key=lambda kv: rbperm.sort_key(kv[0]))},
    }


def element_text(elem: dict, basis: str) -> str:
    if not elem:
        return "0"
    parts = [f"({c}) {basis}[{tw_text(k)}]" for k, c in sorted(elem.items(), key=lambda kv: rbperm.sort_key(kv[0]))]
    return "\n".join(parts)


def emit(ctx: click.Context, data, text: str | None = None, rows: list[dict] | None = None) -> None:
    fmt = ctx.obj["format"]
    if fmt == "json":
        click.echo(json.dumps(data, sort_keys=True, indent=2))
    elif fmt == "text":
        click.echo(text if text is not None else json.dumps(data, sort_keys=True, indent=2))
    else:
        rows = rows if rows is not None else (data if isinstance(data, list) else [data])
        buf = io.StringIO()
        keys = sorted({k for r in rows for k in r})
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: v if isinstance(v, (str, int)) else json.dumps(v, sort_keys=True) for k, v in r.items()})
        click.echo(buf.getvalue(), nl=False)


def opt(ctx: click.Context, name: str, value):
    return ctx.obj[name] if value is None else value


def common(f):
    f = click.option("--n", "n", type=int, default=None, help="Size N (overrides the global flag).")(f)
    f = click.option("--seed", type=int, default=None)(f)
    f = click.option("--p", "p", type=int, default=None, help="Prime for finite-field work.")(f)
    return f


def kl_table(ctx: click.Context, n: int) -> dict:
    return cache.kl_table(n, ctx.obj["cache_dir"])


# ---------------------------------------------------------------- commands

@click.group()
@click.option("--n", "n", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--p", "p", type=int, default=DEFAULT_P, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json", show_default=True)
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None, help="Overridden by $MIRACELLS_CACHE.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.pass_context
def main(ctx, n, seed, p, fmt, cache_dir, threads):
    """Mirabolic RSK, the Hecke bimodule on colored permutations, and finite-field checks."""
    ctx.obj = {"n": n, "seed": seed, "p": p, "format": fmt, "cache_dir": cache_dir, "threads": threads}


@main.command("enumerate")
@common
@click.pass_context
def cmd_enumerate(ctx, n, seed, p):
    """List RB_N with lengths."""
    n = opt(ctx, "n", n)
    rows = [{"tw": tw_text(tw), "length": rbperm.length(tw)} for tw in rbperm.enumerate_rb(n)]
    emit(ctx, rows, "\n".join(f"{r['tw']}\t{r['length']}" for r in rows))


@main.command("rsk")
@click.argument("tw")
@click.option("--trace", is_flag=True, help="Print the insertion states.")
@click.pass_context
def cmd_rsk(ctx, tw, trace):
    """Mirabolic RSK of TW ("w=2 1 3; b=2" or JSON)."""
    tw = parse_tw(tw)
    out = mrsk.mirabolic_rsk(tw)
    data = out.to_json()
    lines = [
        f"nu = {out.nu}", f"theta = {out.theta}", f"nu' = {out.nu_prime}",
        f"T1 = {'/'.join(' '.join(map(str, r)) for r in out.t1)}",
        f"T2 = {'/'.join(' '.join(map(str, r)) for r in out.t2)}",
    ]
    if trace:
        rendered = mrsk.render_trace(mrsk.mirabolic_rsk_trace(tw), tw.n)
        data = {"output": data, "trace": rendered}
        lines = rendered + lines
    emit(ctx, data, "\n".join(lines))


@main.command("inverse-rsk")
@click.option("--nu", required=True)
@click.option("--theta", required=True)
@click.option("--nu-prime", required=True)
@click.option("--t1", required=True, help='Rows separated by "/".')
@click.option("--t2", required=True)
@click.pass_context
def cmd_inverse_rsk(ctx, nu, theta, nu_prime, t1, t2):
    """Recover the colored permutation from (nu, theta, nu') and two tableaux."""
    triple = (parse_partition(nu), parse_partition(theta), parse_partition(nu_prime))
    try:
        tw = mrsk.inverse_rsk(triple, parse_tableau(t1), parse_tableau(t2))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    emit(ctx, rbperm.to_json(tw), tw_text(tw))


@main.command("cells")
@common
@click.option("--kind", type=click.Choice(["micro", "kl", "classical"]), default="kl", show_default=True)
@click.option("--side", type=click.Choice(["bimodule", "two_sided", "left", "right"]), default="bimodule", show_default=True)
@click.pass_context
def cmd_cells(ctx, n, seed, p, kind, side):
    """Cells of RB_N (or S_N for --kind classical), one per line."""
    n = opt(ctx, "n", n)
    if kind == "classical":
        cells = laurent_hecke.classical_cells_rsk(n, "two_sided" if side == "bimodule" else side)
        data = [[" ".join(map(str, w)) for w in c] for c in cells]
    elif kind == "micro":
        cells = mrsk.microlocal_cells(n, "two_sided" if side == "bimodule" else side)
        data = [[tw_text(tw) for tw in c] for c in cells]
    else:
        kl_table(ctx, n)
        cells = bimodule.kl_cells(n, "bimodule" if side == "two_sided" else side)
        data = [[tw_text(tw) for tw in c] for c in cells]
    emit(ctx, data, "\n".join(" | ".join(c) for c in data), [{"cell": k, "members": c} for k, c in enumerate(data)])


@main.command("kl-basis")
@common
@click.option("--tw", "tw_arg", default=None, help="Only this element.")
@click.option("--classical", is_flag=True, help="Symmetric group table instead.")
@click.pass_context
def cmd_kl_basis(ctx, n, seed, p, tw_arg, classical):
    """KL basis of the bimodule in the H basis (or of the Hecke algebra with --classical)."""
    if classical:
        n = opt(ctx, "n", n)
        table = laurent_hecke.kl_basis_classical(n)
        data = {laurent_hecke.perm_text(w): laurent_hecke.element_to_json(e, "H", laurent_hecke.perm_text) for w, e in table.items()}
        emit(ctx, data, None, [{"w": k, "expansion": v["terms"]} for k, v in data.items()])
        return
    if tw_arg is not None:
        tw = parse_tw(tw_arg)
        exp = kl_table(ctx, tw.n)[tw]
        emit(ctx, element_json(exp, "H"), element_text(exp, "H"))
        return
    n = opt(ctx, "n", n)
    table = kl_table(ctx, n)
    items = sorted(table.items(), key=lambda kv: rbperm.sort_key(kv[0]))
    data = {tw_text(tw): element_json(e, "H") for tw, e in items}
    emit(ctx, data, "\n\n".join(f"KL[{tw_text(tw)}] =\n{element_text(e, 'H')}" for tw, e in items),
         [{"tw": k, "expansion": v["terms"]} for k, v in data.items()])


@main.command("w-graph")
@common
@click.pass_context
def cmd_w_graph(ctx, n, seed, p):
    """Edges with nonzero mu and the left/right tau-invariants."""
    n = opt(ctx, "n", n)
    kl_table(ctx, n)
    data = bimodule.w_graph_json(n)
    text = "\n".join(f"{v['tw']}: {' '.join(v['labels'])}" for v in data["vertices"])
    text += "\n" + "\n".join(f"{e['a']} -- {e['b']} (mu={e['mu']})" for e in data["edges"])
    emit(ctx, data, text, data["edges"])


@main.command("mult")
@click.argument("tw")
@click.option("--i", "i", type=int, required=True, help="Generator index.")
@click.option("--side", type=click.Choice(["right", "left"]), default="right", show_default=True)
@click.option("--basis", type=click.Choice(["T", "H", "KL"]), default="T", show_default=True)
@click.pass_context
def cmd_mult(ctx, tw, i, side, basis):
    """Multiply a basis element by the generator s_i (T_s, KL_s, or KL_s on KL_tw)."""
    tw = parse_tw(tw)
    if not 1 <= i < tw.n:
        raise click.BadParameter(f"generator index must be in 1..{tw.n - 1}")
    one = {tw: laurent_hecke.ONE}
    if basis == "T":
        out = bimodule.act_T(one, i, side)
    elif basis == "H":
        out = bimodule.act_KLgen(one, i, side)
    else:
        kl_table(ctx, tw.n)
        out = bimodule.kl_product_gen(tw, i, side)
    emit(ctx, element_json(out, basis), element_text(out, basis))


@main.command("sample")
@common
@click.option("--tw", "tw_arg", required=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.pass_context
def cmd_sample(ctx, n, seed, p, tw_arg, trials):
    """Conormal samples and the dominance-maximal triple of Jordan types."""
    tw = parse_tw(tw_arg)
    seed, p = opt(ctx, "seed", seed), opt(ctx, "p", p)
    rng = np.random.default_rng(seed)
    samples, triples = [], []
    for _ in range(trials):
        s = microlab.sample_conormal(tw, p, rng)
        t = microlab.sample_triple(s)
        triples.append(t)
        samples.append({
            "u1": s["u1"].tolist(), "u2": s["u2"].tolist(), "v": s["v"].tolist(), "v_star": s["v_star"].tolist(),
            "types": [list(x) for x in t],
        })
    best = microlab.generic_maximum(triples)
    expected = mrsk.mirabolic_rsk(tw).triple
    data = {"tw": tw_text(tw), "p": p, "seed": seed, "samples": samples,
            "generic": [list(x) for x in best], "rsk": [list(x) for x in expected], "match": best == expected}
    emit(ctx, data, f"generic {best}\nrsk     {expected}\nmatch   {best == expected}",
         [{"trial": k, "types": s["types"]} for k, s in enumerate(samples)])


@main.command("fourier")
@click.argument("tw")
@click.pass_context
def cmd_fourier(ctx, tw):
    """Fourier transform of TW and its effect on the mirabolic RSK data."""
    tw = parse_tw(tw)
    ftw = rbperm.fourier(tw)
    out, fout = mrsk.mirabolic_rsk(tw), mrsk.mirabolic_rsk(ftw)
    data = {"tw": tw_text(tw), "fourier": tw_text(ftw), "rsk": out.to_json(), "rsk_of_fourier": fout.to_json(),
            "theta_star": list(mrsk.theta_star(tw))}
    emit(ctx, data, f"F({tw_text(tw)}) = {tw_text(ftw)}\ntheta* = {mrsk.theta_star(tw)}")


@main.command("asymptotic")
@click.option("--nu", required=True)
@click.option("--theta", required=True)
@click.pass_context
def cmd_asymptotic(ctx, nu, theta):
    """Degree bound and regular-bimodule comparison for the diagonal cell (nu, theta, nu)."""
    nu, theta = parse_partition(nu), parse_partition(theta)
    kl_table(ctx, sum(nu))
    try:
        rep = bimodule.asymptotic_bimodule(nu, theta)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    emit(ctx, rep, None, rep["conventions"])


@main.command("verify")
@click.argument("suite", type=click.Choice(["all", *verify.SUITES]))
@common
@click.option("--timings", is_flag=True, help="Include wall-clock seconds (not deterministic).")
@click.pass_context
def cmd_verify(ctx, suite, n, seed, p, timings):
    """Run a verification suite; exit status 1 iff an invariant check fails."""
    n, seed, p = opt(ctx, "n", n), opt(ctx, "seed", seed), opt(ctx, "p", p)
    if ctx.obj["cache_dir"] or cache.resolve_dir():
        for m in range(1, min(n, 4) + 1):
            kl_table(ctx, m)
    suites = verify.SUITES if suite == "all" else (suite,)
    threads = max(1, ctx.obj["threads"])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        reports = list(pool.map(lambda s: verify.run_suite(s, n, seed, p), suites))
    merged = verify.Report(suite, n, seed, p, [c for r in reports for c in r.checks])
    data = merged.to_json(timings)
    lines = [f"{c['status'].upper():5} [{c['kind']}] {c['suite']}: {c['name']}  {c['detail']}" for c in data["checks"]]
    lines.append("OK" if merged.ok else "FAILED")
    emit(ctx, data, "\n".join(lines), data["checks"])
    sys.exit(0 if merged.ok else 1)


@main.command("report")
@common
@click.pass_context
def cmd_report(ctx, n, seed, p):
    """Conjecture statuses with witnesses (never affects the exit status)."""
    n = opt(ctx, "n", n)
    kl_table(ctx, n)
    data = verify.conjecture_report(n)
    lines = [f"KL cells = microlocal cells ({side}): {v['status']}" for side, v in data["kl_cells_equal_microlocal_cells"].items()]
    for d in data["degree_bound"]:
        lines.append(
            f"degree bound {d['triple']}: max degree {d['max_degree']}, "
            f"a = {d['a_complement']} {d['status_complement']}, a = n(nu) = {d['a_n_nu']} {d['status_n_nu']}"
        )
    for r in data["regular_bimodule"]:
        good = [f"{c['bimodule_labels']}/{c['ring_labels']}" for c in r["conventions"] if c["left"] and c["right"]]
        lines.append(f"regular bimodule {r['triple']}: {r['status']} ({', '.join(good) or 'no convention'})")
    rows = [{"conjecture": "degree_bound", **d} for d in data["degree_bound"]]
    emit(ctx, data, "\n".join(lines), rows)


if __name__ == "__main__":
    main()
