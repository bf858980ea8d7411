"""Command-line front end: ``python -m factorlab <command> --input SPEC``."""

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time

from . import __version__
from .classes import (TransferError, beta_transfer, class_table, essential_prime_set,
                      essential_report, reduced_class_semigroup)
from .corpus import bundled_names, bundled_text
from .factorization import LengthOracle, NotInMonoidError, factorizations
from .invariants import (aap_decompose, delta_H_lower, elasticity_via_H0,
                         structure_theorem_report, unions_profile)
from .monoid import SCHEMA_VERSION, SpecError, enumerate_atoms, parse_spec, serialize_spec

EXIT_OK, EXIT_INPUT, EXIT_TRUNCATED = 0, 2, 3

COMMANDS = ("atoms", "factorize", "lengths", "delta", "elasticity", "unions", "aap",
            "class-table", "essential", "transfer", "report")


class InputError(Exception):
    pass


class Result:
    """Payload of one command: a JSON-able dict plus optional text and
    CSV renderings.  ``truncated`` selects exit status 3."""

    def __init__(self, data, text=None, rows=None, truncated=False):
        self.data = data
        self.text = text
        self.rows = rows
        self.truncated = truncated

    def render(self, fmt):
        if fmt == "json":
            return json.dumps(self.data, indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            if self.rows is None:
                raise InputError("this command has no tabular output; use --format json or text")
            if isinstance(self.rows, str):
                return self.rows
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(self.rows)
            return buf.getvalue()
        return self.text if self.text is not None else json.dumps(self.data, indent=2, sort_keys=True) + "\n"


def _k_range(text):
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if not 1 <= lo <= hi:
        raise argparse.ArgumentTypeError("need 1 <= A <= B")
    return lo, hi


def _int_list(text):
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _budget(text):
    try:
        return int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="factorlab", description=__doc__)
    p.add_argument("--version", action="version", version=f"factorlab {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="spec JSON file, or the name of a bundled spec")
    p.add_argument("--out", help="write the result here (plus <out>.manifest.json)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--box", type=int, default=12)
    p.add_argument("--probe", type=int, default=12)
    p.add_argument("--k", type=_k_range, default=(1, 20), help="range A..B")
    p.add_argument("--budget", type=_budget, default=10**6, help="element budget")
    p.add_argument("--power-bound", type=int, default=64)
    p.add_argument("--d", type=int, default=None, help="progression difference for aap")
    p.add_argument("--set", type=_int_list, default=None, help="integers for aap, e.g. 3,5,7,8")
    p.add_argument("--element", type=_int_list, default=None, help="exponent vector, e.g. 3,3")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--method", choices=("auto", "hilbert", "lp"), default="auto",
                   help="elasticity route")
    return p


def read_input(name):
    """Return (text, spec).  Files take precedence over bundled names."""
    if name is None:
        raise InputError("--input is required for this command")
    if os.path.exists(name):
        try:
            with open(name, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {name}: {exc.strerror}") from exc
    else:
        try:
            text = bundled_text(os.path.basename(name))
        except KeyError:
            raise InputError(f"no such file or bundled spec: {name} "
                             f"(bundled: {', '.join(bundled_names())})") from None
    return text, parse_spec(text)


def _vec(x):
    return "(" + ",".join(map(str, x)) + ")"


def _atoms(spec, args):
    return enumerate_atoms(spec, args.box)


def _element(spec, args):
    if args.element is None:
        raise InputError("--element is required for this command")
    x = tuple(args.element)
    if len(x) != spec.dim:
        raise InputError(f"--element has {len(x)} coordinates, spec has {spec.dim}")
    if any(v < 0 for v in x):
        raise InputError("--element must be nonnegative")
    return x


def _atom_header(spec, atoms):
    return {"primes": list(spec.primes), "atoms": [list(a) for a in atoms],
            "complete": atoms.complete, "search_box": list(atoms.search_box)}


def cmd_atoms(spec, args):
    atoms = _atoms(spec, args)
    text = [f"{len(atoms)} atoms over primes {', '.join(spec.primes)} "
            f"({'complete' if atoms.complete else 'incomplete'} at box {list(atoms.search_box)})"]
    text += [f"  {_vec(a)}" for a in atoms]
    rows = [list(spec.primes)] + [list(a) for a in atoms]
    return Result(_atom_header(spec, atoms), "\n".join(text) + "\n", rows)


def cmd_factorize(spec, args):
    atoms = _atoms(spec, args)
    x = _element(spec, args)
    if any(v > b for v, b in zip(x, atoms.search_box)):
        raise InputError("--element lies outside --box, so atoms may be missing; raise --box")
    zs = factorizations(atoms, x)
    if not zs:
        raise InputError(f"{_vec(x)} is not in the monoid")
    data = _atom_header(spec, atoms)
    data.update({"element": list(x), "factorizations": [
        {"multiplicities": list(z.multiplicities), "length": z.length} for z in zs]})
    text = [f"{len(zs)} factorizations of {_vec(x)}"]
    for z in zs:
        word = " * ".join(_vec(a) if c == 1 else f"{_vec(a)}^{c}"
                          for a, c in zip(atoms, z.multiplicities) if c)
        text.append(f"  length {z.length}: {word}")
    rows = [[_vec(a) for a in atoms] + ["length"]] + [list(z.multiplicities) + [z.length] for z in zs]
    return Result(data, "\n".join(text) + "\n", rows)


def cmd_lengths(spec, args):
    atoms = _atoms(spec, args)
    x = _element(spec, args)
    if any(v > b for v, b in zip(x, atoms.search_box)):
        raise InputError("--element lies outside --box, so atoms may be missing; raise --box")
    try:
        L = LengthOracle(atoms)(x)
    except NotInMonoidError as exc:
        raise InputError(str(exc)) from None
    data = {"element": list(x), "lengths": list(L.values), "delta": sorted(L.delta),
            "rho": str(L.rho), "exact": L.exact}
    text = (f"L{_vec(x)} = {{{', '.join(map(str, L.values))}}}\n"
            f"delta = {{{', '.join(map(str, sorted(L.delta)))}}}\nrho = {L.rho}\n")
    return Result(data, text, [["length"]] + [[v] for v in L.values])


def cmd_delta(spec, args):
    atoms = _atoms(spec, args)
    d = delta_H_lower(atoms, args.budget, max_atoms=args.k[1], workers=args.workers)
    data = {"delta_lower": sorted(d), "max_atoms": args.k[1], "budget": args.budget,
            "note": "subset of the set of distances; equality is not claimed"}
    text = (f"Delta(H) contains {{{', '.join(map(str, sorted(d)))}}} "
            f"(products of up to {args.k[1]} atoms, lower bound)\n")
    return Result(data, text, [["distance"]] + [[v] for v in sorted(d)])


def cmd_elasticity(spec, args):
    atoms = _atoms(spec, args)
    cert = elasticity_via_H0(atoms, method=args.method)
    short, long_ = cert.witness_pair
    data = {"value": str(cert.value), "exact": cert.exact, "method": cert.method,
            "basis_size": cert.basis_size, "structure": cert.structure,
            "witness": {"element": list(short.target),
                        "short": list(short.multiplicities), "long": list(long_.multiplicities)},
            "atoms": [list(a) for a in atoms]}

    def word(z):
        return " * ".join(_vec(a) if c == 1 else f"{_vec(a)}^{c}"
                          for a, c in zip(atoms, z.multiplicities) if c)
    text = (f"{cert.value}\n"
            f"witness: {word(short)} = {word(long_)} = {_vec(short.target)}"
            f"  (lengths {short.length} and {long_.length})\n"
            f"{'exact' if cert.exact else 'lower bound'}, {cert.method}, {cert.structure}\n")
    return Result(data, text)


def cmd_unions(spec, args):
    atoms = _atoms(spec, args)
    prof = unions_profile(atoms, args.k[1], args.budget, workers=args.workers)
    ks = [k for k in prof.ks() if k >= args.k[0]]
    data = {"k_range": list(args.k), "exact": prof.exact, "truncated_at": prof.truncated_at,
            "unions": {str(k): list(prof.unions[k].values) for k in ks}}
    text = [f"U_{k} = {_compact(prof.unions[k].values)}" for k in ks]
    if prof.truncated_at is not None:
        text.append(f"budget exhausted: truncated at k={prof.truncated_at}")
    rows = [["k", "lambda_k", "rho_k", "size_U_k"]] + [
        [k, prof.lambda_k[k], prof.rho_k[k], len(prof.unions[k])] for k in ks]
    return Result(data, "\n".join(text) + "\n", rows, prof.truncated_at is not None)


def _compact(vals):
    """Integer set written with runs collapsed, e.g. {2..5, 7}."""
    parts = []
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] == vals[j] + 1:
            j += 1
        parts.append(str(vals[i]) if i == j else f"{vals[i]}..{vals[j]}")
        i = j + 1
    return "{" + ", ".join(parts) + "}"


def cmd_aap(spec, args):
    if args.set is None:
        raise InputError("--set is required for aap")
    if not args.set:
        raise InputError("--set is empty")
    if args.d is not None and args.d < 1:
        raise InputError("--d must be positive")
    dec = aap_decompose(args.set, args.d)
    if dec is None:
        data = {"set": sorted(set(args.set)), "d": args.d, "decomposition": None}
        return Result(data, f"no decomposition with difference {args.d}: "
                            "elements are not congruent modulo d\n")
    data = {"set": sorted(set(args.set)), "decomposition": dec.as_dict()}
    text = (f"y = {dec.y}, d = {dec.d}, M = {dec.M}\n"
            f"L' = {{{', '.join(map(str, dec.L_minus))}}}\n"
            f"L* = {{{', '.join(map(str, dec.L_star))}}}\n"
            f"L'' = {{{', '.join(map(str, dec.L_plus))}}}\n")
    rows = [["y", "d", "M"], [dec.y, dec.d, dec.M]]
    return Result(data, text, rows)


def cmd_class_table(spec, args):
    table = reduced_class_semigroup(class_table(spec, args.box, args.probe))
    return Result(table.as_dict(), table.to_text(), table.to_csv())


def cmd_essential(spec, args):
    atoms = _atoms(spec, args)
    rep = essential_report(spec, atoms, args.box)
    E = essential_prime_set(spec, args.power_bound)
    data = {"essential": rep.as_dict(), "E": E.as_dict()}
    d = rep.as_dict()

    def sets(ss):
        return ", ".join("{" + ",".join(s) + "}" for s in ss)
    text = [f"supports          {sets(d['supports'])}",
            f"minimal essential {sets(d['minimal_essential'])}",
            f"simple            {rep.simple}"]
    if rep.witness is not None:
        text.append(f"witness           support {{{','.join(d['witness']['support'])}}} "
                    f"from {_vec(rep.witness[1])}")
    text.append(f"E                 {{{','.join(E.primes)}}} ({'exact' if E.exact else 'bounded scan'})")
    return Result(data, "\n".join(text) + "\n")


def cmd_transfer(spec, args):
    table = class_table(spec, args.box, args.probe)
    try:
        tr = beta_transfer(spec, table)
    except TransferError as exc:
        raise InputError(str(exc)) from None
    data = tr.as_dict()
    text = [("identity transfer" if tr.identity else "merged primes: " + ", ".join(
        f"{k} -> {v}" for k, v in sorted(tr.merge.items())))]
    text.append("image spec: " + json.dumps(serialize_spec(tr.spec), sort_keys=True))
    return Result(data, "\n".join(text) + "\n")


def cmd_report(spec, args):
    atoms = _atoms(spec, args)
    simple = essential_report(spec, atoms, args.box).simple
    rep = structure_theorem_report(atoms, args.k[0], args.k[1], args.budget,
                                   simple=simple, workers=args.workers)
    return Result(rep.as_dict(), rep.to_text(), rep.to_csv(), rep.truncated_at is not None)


HANDLERS = {
    "atoms": cmd_atoms, "factorize": cmd_factorize, "lengths": cmd_lengths,
    "delta": cmd_delta, "elasticity": cmd_elasticity, "unions": cmd_unions, "aap": cmd_aap,
    "class-table": cmd_class_table, "essential": cmd_essential, "transfer": cmd_transfer,
    "report": cmd_report,
}


def _manifest(args, text, payload, seconds):
    bounds = {"box": args.box, "probe": args.probe, "k": list(args.k), "budget": args.budget,
              "power_bound": args.power_bound, "d": args.d, "set": args.set,
              "element": args.element, "workers": args.workers, "method": args.method}
    return {
        "input": args.input,
        "input_sha256": None if text is None else hashlib.sha256(text.encode()).hexdigest(),
        "schema": SCHEMA_VERSION,
        "operation": args.command,
        "format": args.format,
        "bounds": bounds,
        "tool_version": __version__,
        "result_sha256": hashlib.sha256(payload.encode()).hexdigest(),
        "wall_time_s": round(seconds, 6),
    }


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter()
    text = None
    try:
        spec = None
        if args.command != "aap" or args.input is not None:
            text, spec = read_input(args.input)
        if args.workers < 1:
            raise InputError("--workers must be >= 1")
        result = HANDLERS[args.command](spec, args)
        payload = result.render(args.format)
    except SpecError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except (InputError, ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    seconds = time.perf_counter() - start
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
        with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
            json.dump(_manifest(args, text, payload, seconds), fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        stdout.write(payload)
    if result.truncated:
        print("warning: budget exhausted, result truncated", file=stderr)
        return EXIT_TRUNCATED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
