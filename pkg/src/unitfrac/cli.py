"""Command-line front end.

Exit codes: 0 ok, 1 verification failed, 2 bad input, 3 resource cap hit.
"""

import argparse
import json
import sys
import warnings

from .config import RunConfig
from .construction import CompactSequence, Partition, construct, materialize
from .covering import ResidueSystem, classify, find_split, reciprocal_sum, zhang_subset
from .errors import (
    CertificateFailure,
    FormatError,
    NotACoverWarning,
    PartitionError,
    SearchExhausted,
    TooLarge,
)
from .verification import brute_force_verify, certificate_verify, subset_sum_counts

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

_DEFAULTS = RunConfig()


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _global_options():
    parent = argparse.ArgumentParser(add_help=False)
    g = parent.add_argument_group("limits")
    sup = argparse.SUPPRESS
    g.add_argument("--rounds", type=_positive, default=sup,
                   help=f"Miller-Rabin rounds above 2^64 (default {_DEFAULTS.primality_rounds})")
    g.add_argument("--max-steps", type=_positive, default=sup,
                   help=f"cap on the prime-search lift count a (default {_DEFAULTS.dirichlet_max_steps})")
    g.add_argument("--max-k", type=_positive, default=sup,
                   help=f"largest k for meet-in-the-middle enumeration (default {_DEFAULTS.mitm_max_k})")
    g.add_argument("--naive-max-k", type=_positive, default=sup,
                   help=f"largest k for naive enumeration (default {_DEFAULTS.naive_max_k})")
    g.add_argument("--period-limit", type=_positive, default=sup,
                   help=f"largest period scanned for covers (default {_DEFAULTS.period_limit})")
    return parent


def build_parser():
    common = _global_options()
    parser = argparse.ArgumentParser(
        prog="unitfrac",
        description="Unit-fraction sequences with prescribed integral partial sums.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build the sequence for a partition")
    p.add_argument("-m", type=_positive, required=True)
    p.add_argument("-p", "--parts", required=True, help="comma-separated parts, e.g. 1,1")
    p.add_argument("-o", "--output")

    p = sub.add_parser("verify", parents=[common], help="check a sequence document")
    p.add_argument("input")
    p.add_argument("--mode", choices=("certificate", "brute"), default="certificate")
    p.add_argument("-o", "--output")

    p = sub.add_parser("materialize", parents=[common], help="expand a sequence into its denominators")
    p.add_argument("input")
    p.add_argument("--limit", type=_positive, default=_DEFAULTS.materialize_limit)
    p.add_argument("-o", "--output")

    p = sub.add_parser("cover", parents=[common], help="residue-class system tools")
    p.add_argument("action", choices=("check", "zhang", "split"))
    p.add_argument("input")
    p.add_argument("-o", "--output")
    return parser


def _config(args):
    return RunConfig(
        primality_rounds=getattr(args, "rounds", _DEFAULTS.primality_rounds),
        dirichlet_max_steps=getattr(args, "max_steps", _DEFAULTS.dirichlet_max_steps),
        naive_max_k=getattr(args, "naive_max_k", _DEFAULTS.naive_max_k),
        mitm_max_k=getattr(args, "max_k", _DEFAULTS.mitm_max_k),
        period_limit=getattr(args, "period_limit", _DEFAULTS.period_limit),
        materialize_limit=getattr(args, "limit", _DEFAULTS.materialize_limit),
    )


def _emit(doc, output=None):
    text = json.dumps(doc, indent=2) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(exc, code):
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _parse_parts(text):
    try:
        parts = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise PartitionError(f"parts must be comma-separated integers, got {text!r}") from exc
    if not parts or any(x < 1 for x in parts):
        raise PartitionError(f"parts must be positive integers, got {text!r}")
    return parts


def cmd_construct(args, config):
    try:
        parts = _parse_parts(args.parts)
        if parts != sorted(parts):
            print(f"warning: parts {parts} sorted to {sorted(parts)}", file=sys.stderr)
        partition = Partition.from_parts(parts, m=args.m)
    except PartitionError as exc:
        return _error(exc, EXIT_INPUT)
    try:
        seq = construct(partition, config.primality_rounds, config.dirichlet_max_steps)
    except SearchExhausted as exc:
        return _error(exc, EXIT_RESOURCE)
    _emit(seq.to_dict(config), args.output)
    largest = max(den for den, _ in seq.entries)
    summary = f"e={partition.e} k={seq.k} largest denominator: {len(str(largest))} digits"
    print(summary, file=sys.stdout if args.output else sys.stderr)
    return EXIT_OK


def cmd_verify(args, config):
    try:
        seq = CompactSequence.from_dict(_load_json(args.input))
    except FormatError as exc:
        return _error(exc, EXIT_INPUT)

    if args.mode == "certificate":
        try:
            report = certificate_verify(seq, config.primality_rounds)
        except CertificateFailure as exc:
            _emit({
                "mode": "certificate",
                "verified": False,
                "failed": exc.condition,
                "block": exc.block,
                "checks": [c.to_dict() for c in exc.checks],
                "config": config.to_dict(),
            }, args.output)
            return EXIT_FAILED
        doc = report.to_dict(config)
        doc["verified"] = True
        _emit(doc, args.output)
        return EXIT_OK

    try:
        denominators = materialize(seq, config.mitm_max_k)
    except TooLarge as exc:
        return _error(exc, EXIT_RESOURCE)
    method = "naive" if len(denominators) <= config.naive_max_k else "mitm"
    report = brute_force_verify(denominators, config.mitm_max_k, method=method)
    verified = True
    if seq.partition is not None:
        verified = report.value_counts == dict(subset_sum_counts(seq.partition.parts))
    doc = report.to_dict(config)
    doc["verified"] = verified
    _emit(doc, args.output)
    return EXIT_OK if verified else EXIT_FAILED


def cmd_materialize(args, config):
    try:
        seq = CompactSequence.from_dict(_load_json(args.input))
    except FormatError as exc:
        return _error(exc, EXIT_INPUT)
    try:
        dens = materialize(seq, config.materialize_limit)
    except TooLarge as exc:
        return _error(exc, EXIT_RESOURCE)
    _emit({"k": str(len(dens)), "denominators": [str(d) for d in dens], "config": config.to_dict()},
          args.output)
    return EXIT_OK


def cmd_cover(args, config):
    try:
        system = ResidueSystem.from_dict(_load_json(args.input))
    except FormatError as exc:
        return _error(exc, EXIT_INPUT)
    try:
        if args.action == "check":
            doc = classify(system, config.period_limit).to_dict()
            doc["reciprocal_sum"] = str(reciprocal_sum(system))
            code = EXIT_OK
        elif args.action == "zhang":
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", NotACoverWarning)
                subset = zhang_subset(system, config.naive_max_k, config.period_limit)
            is_cover = not any(issubclass(w.category, NotACoverWarning) for w in caught)
            if not is_cover:
                print("warning: system is not a cover", file=sys.stderr)
            doc = {"cover": is_cover, "subset": None, "moduli": None, "sum": None}
            if subset is not None:
                moduli = [system.classes[i][1] for i in subset]
                doc.update(subset=list(subset), moduli=moduli,
                           sum=str(reciprocal_sum(system.subsystem(subset))))
            code = EXIT_FAILED if subset is None and is_cover else EXIT_OK
        else:
            chosen = find_split(system, config.naive_max_k, config.period_limit)
            doc = {"experimental": True, "split": None if chosen is None else list(chosen)}
            code = EXIT_OK
    except TooLarge as exc:
        return _error(exc, EXIT_RESOURCE)
    except ValueError as exc:
        return _error(exc, EXIT_INPUT)
    doc["config"] = config.to_dict()
    _emit(doc, args.output)
    return code


_COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "materialize": cmd_materialize,
    "cover": cmd_cover,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args, _config(args))


if __name__ == "__main__":
    sys.exit(main())
