"""Command-line client for the valuation service.

All subcommands build a JSON request and POST it to the service; with
no --server given the app runs in-process through an ASGI transport,
so CLI behavior and remote behavior are byte-identical.

Generator tokens for --body: cube, simplex, cross_polytope, random
(random derives its point seed from --seed; when several random bodies
appear in one command, the k-th one uses seed + k).  A token naming an
existing file is read as body JSON: {"dim": n, "vertices": [[...]]}.
"""

from __future__ import annotations

import asyncio
import json
import os
import sys

import click
import httpx

from .reporting import format_table, report_from_json_dict

GENERATORS = ("cube", "simplex", "cross_polytope", "random")
IDENTITIES = ("cauchy", "theorem21", "corollary22", "lemma31",
              "eq41", "tv17", "all")


def _post(path: str, payload: dict, server: str | None) -> dict:
    if server:
        resp = httpx.post(server.rstrip("/") + path, json=payload,
                          timeout=None)
    else:
        from .service import app

        async def _call():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://valuation-lab",
                                         timeout=None) as client:
                return await client.post(path, json=payload)

        resp = asyncio.run(_call())
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise click.ClickException(f"{path} -> {resp.status_code}: {detail}")
    return resp.json()


def _body_payload(token: str, dim: int, seed: int, random_index: int = 0) -> dict:
    if os.path.exists(token):
        with open(token) as fh:
            data = json.load(fh)
        try:
            return {"vertices": data["vertices"], "dim": data["dim"]}
        except (KeyError, TypeError):
            raise click.ClickException(
                f"{token}: body JSON needs 'dim' and 'vertices' keys")
    if token in GENERATORS:
        body = {"name": token, "dim": dim}
        if token == "random":
            body["seed"] = seed + random_index
        return body
    raise click.ClickException(
        f"unknown body {token!r}: not a file and not one of {GENERATORS}")


def _bodies_payload(tokens, dim, seed):
    out = []
    n_random = 0
    for token in tokens:
        out.append(_body_payload(token, dim, seed, n_random))
        if token == "random":
            n_random += 1
    return out


def _write_out(out_path: str | None, data) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
        click.echo(f"wrote {out_path}")


@click.group()
def main():
    """Exact polytope valuations verified by spherical quadrature."""


@main.command()
@click.option("--identity", type=click.Choice(IDENTITIES), required=True,
              help="Which identity to verify; 'all' runs the full family.")
@click.option("--body", "bodies", multiple=True,
              help="Generator name or body JSON file; repeatable "
                   "(corollary22 takes n bodies). Default: cube.")
@click.option("--dim", default=3, show_default=True, type=click.IntRange(2, 5))
@click.option("--samples", default=None, type=int,
              help="Quadrature sample count (default: 2e5).")
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--method", type=click.Choice(["mc", "grid"]), default=None,
              help="Quadrature rule (default: grid for dim 2, else mc).")
@click.option("--tol", default=None, type=float,
              help="Relative tolerance override.")
@click.option("--directions", default=20, show_default=True,
              help="Direction count for tv17.")
@click.option("--out", default=None, type=click.Path(dir_okay=False),
              help="Write the report JSON array here.")
@click.option("--server", default=None, metavar="URL",
              help="Remote service URL (default: run in-process).")
def verify(identity, bodies, dim, samples, seed, method, tol, directions,
           out, server):
    """Check one identity (or all) and exit nonzero on any failure."""
    payload = {
        "identity": identity,
        "dim": dim,
        "sampler": {"method": method, "samples": samples, "seed": seed},
        "tol": tol,
        "tv17_directions": directions,
    }
    body_specs = _bodies_payload(bodies, dim, seed)
    if identity == "corollary22":
        if body_specs:
            payload["bodies"] = body_specs
    elif body_specs:
        payload["body"] = body_specs[0]
    data = _post("/verify", payload, server)
    reports = [report_from_json_dict(d) for d in data["reports"]]
    click.echo(format_table(reports))
    _write_out(out, data["reports"])
    if not data["all_passed"]:
        sys.exit(1)
    click.echo("all passed")


@main.command()
@click.option("--functional",
              type=click.Choice(["volume", "z", "q1", "upsilon", "xi",
                                 "cone_volume", "psi2"]),
              required=True)
@click.option("--rank", default=1, show_default=True,
              type=click.IntRange(0, 4), help="Rank for upsilon/xi.")
@click.option("--body", default="cube", show_default=True,
              help="Generator name or body JSON file.")
@click.option("--dim", default=3, show_default=True, type=click.IntRange(2, 5))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--server", default=None, metavar="URL")
def compute(functional, rank, body, dim, seed, out, server):
    """Evaluate one exact functional and print the tensor JSON."""
    payload = {
        "functional": functional,
        "rank": rank,
        "body": _body_payload(body, dim, seed),
    }
    data = _post("/compute", payload, server)
    click.echo(json.dumps(data, indent=2))
    _write_out(out, data)


@main.command()
@click.option("--functional",
              type=click.Choice(["q1", "upsilon1", "moment_z", "shadow_area",
                                 "moment_with_ball"]),
              required=True)
@click.option("--bodies", "bodies", multiple=True, required=True,
              help="Body JSON files or generator names; one per "
                   "polarization slot (repeat the flag).")
@click.option("--dim", default=3, show_default=True, type=click.IntRange(2, 5),
              help="Dimension for generator tokens.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--direction", default=None,
              help="Comma-separated unit vector (shadow_area only).")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--server", default=None, metavar="URL")
def mixed(functional, bodies, dim, seed, direction, out, server):
    """Polarized (fully mixed) functionals over several bodies."""
    payload = {
        "functional": functional,
        "bodies": _bodies_payload(bodies, dim, seed),
    }
    if direction is not None:
        try:
            payload["direction"] = [float(x) for x in direction.split(",")]
        except ValueError:
            raise click.ClickException(
                "--direction must be comma-separated numbers")
    data = _post("/mixed", payload, server)
    click.echo(json.dumps(data, indent=2))
    _write_out(out, data)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
