"""Command-line front end: table computation, on-disk caching and JSON reports."""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .rootdata import RootDataError, build_root_datum, canonical_word

log = logging.getLogger("qboson")

SCHEMA = 1
CONVENTION = "Kac; E^d reverse order; F^d forward order on the F side; Delta(E)=E(x)1+K(x)E"
CACHE_ENV = "QBOSON_CACHE_DIR"


@dataclass
class RunConfig:
    cartan_type: str
    rank: int
    word: tuple = ()
    max_height: int | None = None
    seed: int = 0
    samples: int = 5
    cache_dir: str | None = None
    out: str | None = None
    fmt: str = "json"
    extra: dict = field(default_factory=dict)

    @property
    def label(self):
        return f"{self.cartan_type}{self.rank}"

    @property
    def datum(self):
        return build_root_datum(self.cartan_type, self.rank)


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _hash(obj):
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def cache_header(config, kind):
    return {
        "kind": kind,
        "type": config.cartan_type,
        "rank": config.rank,
        "word": list(config.word),
        "convention": CONVENTION,
        "engine_version": __version__,
    }


def _cache_path(config, kind):
    key = _hash(cache_header(config, kind))[:16]
    word = "".join(map(str, config.word))
    return Path(config.cache_dir) / f"{kind}-{config.label}-{word}-{key}.json"


def load_cache(config, kind):
    """Payload or None; any mismatch or corruption warns and returns None."""
    if not config.cache_dir:
        return None
    path = _cache_path(config, kind)
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        header, payload = data["header"], data["payload"]
        want = cache_header(config, kind)
        if any(header.get(k) != v for k, v in want.items()):
            raise ValueError("header mismatch")
        if header.get("content_hash") != _hash(payload):
            raise ValueError("content hash mismatch")
    except (ValueError, KeyError, TypeError) as exc:
        warnings.warn(f"ignoring cache entry {path.name}: {exc}; recomputing")
        return None
    return payload


def save_cache(config, kind, payload):
    if not config.cache_dir:
        return
    path = _cache_path(config, kind)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = dict(cache_header(config, kind), content_hash=_hash(payload))
    tmp = path.with_suffix(".tmp")
    tmp.write_text(_dumps({"header": header, "payload": payload}))
    tmp.replace(path)


def cached(config, kind, compute):
    payload = load_cache(config, kind)
    if payload is None:
        payload = compute()
        save_cache(config, kind, payload)
    return payload


# serialization

def ls_table_payload(basis, side):
    from .pbw import ls_relation
    from .qscalar import in_integral_form

    out = {}
    for i in range(1, basis.N + 1):
        for j in range(i + 1, basis.N + 1):
            rel = ls_relation(basis, i, j, side)
            out[f"{i},{j}"] = [
                {"d": list(d), "c": c.to_string(),
                 "valuation": in_integral_form(c).one_minus_q_valuation,
                 "laurent": c.denominator_is_unit()}
                for d, c in sorted(rel.coeffs.items())
            ]
    return out


def kashiwara_payload(basis, max_height):
    from .boson import kashiwara_matrix

    out = []
    for mu in basis.weights_up_to(max_height):
        for k in range(basis.N):
            d = tuple(int(j == k) for j in range(basis.N))
            M = kashiwara_matrix(basis, d, mu)
            if M.entries:
                out.append({
                    "k": k + 1, "mu": list(mu),
                    "entries": [{"f": list(f), "e": list(e), "c": c.to_string()}
                                for (f, e), c in sorted(M.entries.items())],
                })
    return out


def operator_payload(op):
    return [{"d": list(d), "c": c.to_string()} for d, c in sorted(op.coeffs.items())]


def _basis(config):
    from .pbw import PBWBasis
    return PBWBasis(config.datum, config.word)


def _poisson_payload(config):
    from .poisson import hayashi_structure
    pi = hayashi_structure(_basis(config))
    return dict(pi.to_json(), jacobi=True)


def _poisson_from_payload(payload, N):
    from .poisson import PoissonStructure, parse_poly
    return PoissonStructure(N, {(p["i"], p["j"]): parse_poly(p["bracket"], N) for p in payload["pairs"]})


def _height(config):
    D = config.datum
    if config.max_height is not None:
        return config.max_height
    return sum(D.highest_root) + 2


# commands

def cmd_roots(config):
    from .rootdata import positive_roots_from_word
    D = config.datum
    roots = positive_roots_from_word(D, config.word)
    return 0, {
        "cartan_matrix": [list(r) for r in D.cartan_matrix],
        "roots": [list(r) for r in roots],
        "N": D.N,
        "minus_w0_fixed_dim": D.minus_w0_fixed_dim,
    }


def cmd_pbw(config):
    from .pbw import _unit
    B = _basis(config)
    B.check_diagonals(max_total=2)
    rows = []
    for k in range(B.N):
        rows.append({
            "k": k + 1, "root": list(B.roots[k]),
            "E": str(B.e_vectors[k]), "F": str(B.f_vectors[k]),
            "diagonal": B.closed_diagonal(_unit(B.N, k)).to_string(),
        })
    return 0, {"root_vectors": rows}


def cmd_ls(config):
    payload = cached(config, "ls", lambda: {s: ls_table_payload(_basis(config), s) for s in ("E", "F")})
    return 0, {"ls": payload}


def cmd_kashiwara(config):
    h = _height(config)
    payload = cached(config, f"kashiwara-h{h}", lambda: kashiwara_payload(_basis(config), h))
    return 0, {"max_height": h, "matrices": payload}


def cmd_poisson(config):
    payload = cached(config, "poisson", lambda: _poisson_payload(config))
    return 0, payload


def cmd_casimir(config):
    from .boson import centrality_check, quantum_casimir
    from .poisson import casimir_check, casimir_psi, casimir_psi_prime, hayashi_structure
    if config.cartan_type != "A":
        log.error("Casimir functions are implemented in type A only")
        return 2, {"error": "type A only"}
    if tuple(config.word) != tuple(canonical_word(config.datum)):
        log.error("Casimir functions use the canonical word")
        return 2, {"error": "canonical word only"}
    n = config.rank
    B = _basis(config)
    pi = hayashi_structure(B)
    psi = casimir_psi(n)
    report = {"psi": psi.to_string(), "psi_casimir": casimir_check(psi, pi)}
    if n == 3:
        report["psi_prime"] = casimir_psi_prime().to_string()
        report["psi_prime_casimir"] = casimir_check(casimir_psi_prime(), pi)
    if n <= config.extra.get("max_quantum_rank", 3):
        Psi = quantum_casimir(B)
        report["Psi"] = operator_payload(Psi)
        report["Psi_central"] = all(centrality_check(B, Psi).values())
    ok = all(v for k, v in report.items() if isinstance(v, bool))
    return (0 if ok else 1), report


def expected_rank(datum):
    if datum.cartan_type == "A":
        return datum.rank ** 2 // 2
    return datum.N - datum.minus_w0_fixed_dim


def cmd_rank(config):
    from .poisson import generic_rank
    payload = cached(config, "poisson", lambda: _poisson_payload(config))
    pi = _poisson_from_payload(payload, config.datum.N)
    r = generic_rank(pi, samples=config.samples, seed=config.seed)
    return 0, {"rank": r, "samples": config.samples, "seed": config.seed,
               "N": config.datum.N, "minus_w0_fixed_dim": config.datum.minus_w0_fixed_dim}


def cmd_verify(config):
    results = run_checks(config)
    width = max(len(k) for k in results)
    for k, v in results.items():
        status = "n/a" if v is None else ("PASS" if v else "FAIL")
        print(f"{k:<{width}}  {status}", file=sys.stderr)
    ok = all(v is not False for v in results.values())
    return (0 if ok else 1), {"checks": {k: v for k, v in results.items()}, "ok": ok}


def run_checks(config):
    """{claim: True / False / None (not applicable)} for the configured type."""
    from .boson import (BraidMoveUnsupported, braid_move_identities, centrality_check,
                        commutator_structure, kashiwara_defining_check, kashiwara_matrix,
                        quantum_casimir)
    from .pbw import PBWBasis, ls_relation
    from .poisson import (casimir_check, casimir_psi, casimir_psi_prime, closed_form_type_a,
                          g2_table, generic_rank, hayashi_structure, is_poisson,
                          kirillov_kostant, lie_derivative, pencil_checks,
                          reduced_word_independence_check, vector_field)
    from .rootdata import apply_braid_move, BraidMoveError, type_a_interval

    D = config.datum
    B = PBWBasis(D, config.word)
    H = _height(config)
    canonical = tuple(config.word) == tuple(canonical_word(D))
    is_a = D.cartan_type == "A"
    res = {}

    def pairs():
        return [(i, j) for i in range(1, B.N + 1) for j in range(i + 1, B.N + 1)]

    rels = [ls_relation(B, i, j, s, strict=False) for i, j in pairs() for s in "EF"]
    res["LS-support"] = all(r.support_ok for r in rels)
    res["LS-divisibility"] = all(r.valuation_ok for r in rels)

    ok = True
    for mu in B.weights_up_to(H):
        exps = B.exponents(mu)
        for d in exps:
            M = kashiwara_matrix(B, d, mu)
            zero = (0,) * B.N
            for e in exps:
                if M.entries.get((zero, e), 0) != (1 if d == e else 0):
                    ok = False
    res["fund-comp"] = ok

    structs = [commutator_structure(B, i, j, strict=False) for i, j in pairs()]
    res["com-rel"] = all(cs.ok for cs in structs)

    pi = hayashi_structure(B, check_jacobi=False)
    res["Jacobi"] = is_poisson(pi)
    if is_a and canonical:
        res["bracket-table"] = pi == closed_form_type_a(D.rank)
    elif D.label == "G2" and tuple(config.word) == (1, 2, 1, 2, 1, 2):
        res["bracket-table"] = pi == g2_table()
    else:
        res["bracket-table"] = None

    two_def = True
    for mu in B.weights_up_to(min(H, 5)):
        for e in B.exponents(mu):
            for a in range(1, D.rank + 1):
                two_def = two_def and kashiwara_defining_check(B, a, e)[1]
    res["two-def-agree"] = two_def

    if is_a and canonical:
        n = D.rank
        cas = casimir_check(casimir_psi(n), pi)
        if n == 3:
            cas = cas and casimir_check(casimir_psi_prime(), pi)
        res["Casimirs"] = cas
        res["Psi-centrality"] = all(centrality_check(B, quantum_casimir(B)).values()) if n <= 3 else None
        deformed = True
        for k in range(1, B.N + 1):
            X = vector_field(B, k)
            L = lie_derivative(X, pi)
            rep = pencil_checks(pi, L, X)
            deformed = deformed and all(rep.values())
        res["deformed-bivectors"] = deformed
        kk = kirillov_kostant(n)
        res["KK-compatibility"] = pencil_checks(pi, kk)["compatible"] and is_poisson(pi - kk.scale(2))
    else:
        for key in ("Casimirs", "Psi-centrality", "deformed-bivectors", "KK-compatibility"):
            res[key] = None

    res["rank"] = generic_rank(pi, config.samples, config.seed) == expected_rank(D)

    indep = None
    for p in range(len(config.word) - 1):
        try:
            w2 = apply_braid_move(D, config.word, p)
            A2 = PBWBasis(D, w2)
            ids = braid_move_identities(B, A2, p)
        except (BraidMoveError, BraidMoveUnsupported):
            continue
        indep = all(ids.values()) and reduced_word_independence_check(D, config.word, w2)
        break
    res["word-independence"] = indep
    return res


COMMANDS = {
    "roots": cmd_roots, "pbw": cmd_pbw, "ls": cmd_ls, "kashiwara": cmd_kashiwara,
    "poisson": cmd_poisson, "casimir": cmd_casimir, "rank": cmd_rank, "verify": cmd_verify,
}


def build_parser():
    p = argparse.ArgumentParser(prog="qboson", description=__doc__)
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--type", required=True, help="Cartan type, e.g. A or A3")
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--word", default=None, help="reduced word for w0, comma separated (default canonical)")
    p.add_argument("--max-height", type=int, default=None,
                   help="height cutoff for exhaustive checks (default: highest root + 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--cache-dir", default=None, help=f"cache directory (default: ${CACHE_ENV})")
    p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    p.add_argument("--format", default="json", choices=["json"])
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def make_config(args):
    D = build_root_datum(args.type, args.rank)
    if args.word:
        try:
            word = tuple(int(x) for x in args.word.replace(" ", "").split(","))
        except ValueError:
            raise RootDataError(f"cannot parse word {args.word!r}")
        from .rootdata import positive_roots_from_word
        positive_roots_from_word(D, word)
    else:
        word = tuple(canonical_word(D))
    if args.samples < 1:
        raise ValueError("--samples must be >= 1")
    return RunConfig(
        cartan_type=D.cartan_type, rank=D.rank, word=word, max_height=args.max_height,
        seed=args.seed, samples=args.samples,
        cache_dir=args.cache_dir or os.environ.get(CACHE_ENV), out=args.out, fmt=args.format,
    )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        config = make_config(args)
    except (RootDataError, ValueError) as exc:
        parser.error(str(exc))
    status, body = COMMANDS[args.command](config)
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "type": config.label,
        "word": list(config.word),
        "engine_version": __version__,
        "result": body,
    }
    text = _dumps(report)
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
