"""Command-line surface for the biphoton toolkit.

Results go to stdout as single-line JSON with sorted keys and fixed float
formatting, so identical invocations produce byte-identical output;
diagnostics go to stderr.  Sweeps emit CSV.  Exit codes: 0 on success, 2 for
input errors (bad flags, malformed JSON, impossible states), 3 for I/O
failures, 4 for contract mismatches between otherwise well-formed inputs
(wrong basis pairing, inconsistent records).

The simulate subcommand copies any JSON lines arriving on stdin through to
stdout before appending its own record, so record pairs for reconstruction
can be built by piping:

    biphoton simulate --amplitudes '[0.6,0,0.8]' \
      | biphoton simulate --amplitudes '[0.6,0,0.8]' --basis rotated45 \
      | biphoton reconstruct
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import jsonio, measurement, qutrit, ququart, reconstruct

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IO = 3
EXIT_CONTRACT = 4

SEED_ENV = "BIPHOTON_SEED"


class InputError(Exception):
    """Bad user input; maps to exit code 2."""


class ContractError(Exception):
    """Well-formed inputs that do not fit together; maps to exit code 4."""


def _emit_json(payload):
    sys.stdout.write(jsonio.dumps(payload) + "\n")


def _amplitude_list(state):
    return [jsonio.complex_to_json(c) for c in state.amplitudes]


# ---------------------------------------------------------------------------
# state construction from flags
# ---------------------------------------------------------------------------

_QUTRIT_FAMILIES = ("non_entangled", "max_entangled")
_QUQUART_FAMILIES = ("psi_phi", "psi_phi_prime")


def _add_state_args(p):
    p.add_argument("--kind", choices=("qutrit", "ququart"),
                   help="state kind; inferred from the amplitude count or family when omitted")
    p.add_argument("--amplitudes",
                   help="JSON list of amplitudes: numbers, [re, im] pairs or {re, im} objects")
    p.add_argument("--family",
                   choices=_QUTRIT_FAMILIES + _QUQUART_FAMILIES,
                   help="named state family instead of explicit amplitudes")
    p.add_argument("--param", action="append",
                   help="family parameters, comma separated or repeated; missing ones default to 0")


def _family_params(args, count):
    vals = []
    for chunk in args.param or []:
        for tok in chunk.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                vals.append(float(tok))
            except ValueError:
                raise InputError(f"cannot read {tok!r} as a number")
    if len(vals) > count:
        raise InputError(
            f"family {args.family!r} takes at most {count} parameter(s), got {len(vals)}"
        )
    return vals + [0.0] * (count - len(vals))


def _build_state(args):
    """Resolve the state flags to ("qutrit"|"ququart", state)."""
    if args.amplitudes and args.family:
        raise InputError("give either --amplitudes or --family, not both")
    if args.family:
        if args.family in _QUTRIT_FAMILIES:
            kind = "qutrit"
            phi, phi1, phi3 = _family_params(args, 3)
            maker = getattr(qutrit, args.family + "_family")
            state = maker(phi, phi1, phi3)
        else:
            kind = "ququart"
            (phi,) = _family_params(args, 1)
            if args.family == "psi_phi":
                state, _, _ = ququart.family_psi_phi(phi)
            else:
                state = ququart.family_psi_phi_prime(phi)
    elif args.amplitudes:
        try:
            raw = json.loads(args.amplitudes)
        except json.JSONDecodeError as e:
            raise InputError(f"malformed JSON in --amplitudes: {e}")
        if not isinstance(raw, list) or len(raw) not in (3, 4):
            raise InputError("--amplitudes must be a JSON list of 3 or 4 entries")
        try:
            amps = [jsonio.complex_from_json(x) for x in raw]
        except ValueError as e:
            raise InputError(str(e))
        kind = "qutrit" if len(amps) == 3 else "ququart"
        try:
            if kind == "qutrit":
                state = qutrit.make_qutrit(*amps)
            else:
                state = ququart.make_ququart(*amps)
        except qutrit.ZeroState as e:
            raise InputError(str(e))
    else:
        raise InputError("a state is required: give --amplitudes or --family")
    if args.kind and args.kind != kind:
        raise InputError(f"--kind {args.kind} does not match the given {kind} state")
    return kind, state


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{SEED_ENV}={env!r} is not an integer")
    return 0


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _schmidt_payload(dec):
    return {
        "lambdas": [float(v) for v in dec.lambdas],
        "modes": [
            [jsonio.complex_to_json(z) for z in dec.modes_first[:, k]]
            for k in range(dec.num_terms)
        ],
    }


def cmd_quantify(args):
    kind, state = _build_state(args)
    if kind == "qutrit":
        rep = qutrit.quantify(state)
        pol = qutrit.polarization(state)
        payload = {
            "schema": "report/1",
            "kind": kind,
            "amplitudes": _amplitude_list(state),
            "entanglement": {
                "schmidt_k": rep.schmidt_k,
                "concurrence": rep.concurrence,
                "entropy": rep.entropy,
                "lambda_plus": rep.lambda_plus,
                "lambda_minus": rep.lambda_minus,
            },
            "polarization": {
                "xi": list(pol.xi),
                "degree_p": pol.degree_p,
            },
            "schmidt": _schmidt_payload(qutrit.schmidt_decompose(state)),
        }
    else:
        rep = ququart.quantify(state)
        payload = {
            "schema": "report/1",
            "kind": kind,
            "amplitudes": _amplitude_list(state),
            "entanglement": {
                "schmidt_k": rep.schmidt_k,
                "i_concurrence": rep.i_concurrence,
                "entropy": rep.entropy,
                "lambdas": list(rep.lambdas),
            },
            "schmidt": _schmidt_payload(ququart.schmidt_decompose(state)),
        }
    if args.dump_density:
        if kind == "qutrit":
            rho = qutrit.density_matrix(state)
        else:
            rho = ququart.density_matrix(state)
        payload["density_matrix"] = rho.tolist()
    _emit_json(payload)
    return EXIT_OK


def cmd_compare_2qubit(args):
    kind, state = _build_state(args)
    if kind != "ququart":
        raise InputError("compare-2qubit needs a ququart state")
    rep = ququart.quantify(state)
    two = ququart.two_qubit_model(state)
    payload = {
        "schema": "compare/1",
        "kind": kind,
        "amplitudes": _amplitude_list(state),
        "two_qudit": {
            "schmidt_k": rep.schmidt_k,
            "i_concurrence": rep.i_concurrence,
        },
        "two_qubit_model": {
            "schmidt_k": two.schmidt_k,
            "concurrence": two.concurrence,
        },
        "ratio": rep.schmidt_k / two.schmidt_k,
    }
    _emit_json(payload)
    return EXIT_OK


def _config_from_args(args, seed):
    try:
        return measurement.ExperimentConfig(
            total_pairs=args.pairs,
            detector_efficiency=args.eta,
            basis=args.basis,
            noise=args.noise,
            seed=seed,
        )
    except ValueError as e:
        raise InputError(str(e))


def _passthrough_stdin():
    # echo piped-in records so simulate stages can be chained; a tty or
    # unreadable stdin simply means there is nothing to pass along
    try:
        if sys.stdin is None or sys.stdin.isatty():
            return
        for line in sys.stdin:
            stripped = line.rstrip("\n")
            if stripped.strip():
                sys.stdout.write(stripped + "\n")
    except (AttributeError, ValueError, OSError):
        return


def cmd_simulate(args):
    kind, state = _build_state(args)
    cfg = _config_from_args(args, _resolve_seed(args))
    if cfg.noise == "sampled":
        if kind == "qutrit":
            rec = measurement.sample_coincidences(state, cfg)
        else:
            rec = measurement.sample_coincidences_ququart(state, cfg)
    else:
        if kind == "qutrit":
            rec = measurement.expected_coincidences(state, cfg)
        else:
            rec = measurement.expected_coincidences_ququart(state, cfg)
    _passthrough_stdin()
    _emit_json(rec.to_dict())
    return EXIT_OK


def _read_records(args):
    lines = []
    if args.records:
        for path in args.records:
            with open(path, "r") as fh:
                lines.extend(fh.read().splitlines())
    else:
        lines = [ln.rstrip("\n") for ln in sys.stdin]
    recs = []
    for ln in lines:
        if not ln.strip():
            continue
        try:
            doc = json.loads(ln)
        except json.JSONDecodeError as e:
            raise InputError(f"malformed JSON record: {e}")
        try:
            recs.append(measurement.CoincidenceRecord.from_dict(doc))
        except ValueError as e:
            raise InputError(str(e))
    return recs


def cmd_reconstruct(args):
    recs = _read_records(args)
    if len(recs) != 2:
        raise ContractError(
            f"reconstruction needs exactly one natural and one rotated45 "
            f"record, got {len(recs)} record(s)"
        )
    kinds = {r.kind for r in recs}
    if len(kinds) != 1:
        raise ContractError("the two records describe different state kinds")
    bases = sorted(r.basis for r in recs)
    if bases != ["natural", "rotated45"]:
        raise ContractError(
            f"need one natural and one rotated45 record, got bases {bases}"
        )
    try:
        ests = [reconstruct.magnitudes_from_record(r) for r in recs]
        est = reconstruct.merge_estimates(*ests)
    except (reconstruct.IncompleteRecord, reconstruct.MalformedRecord) as e:
        raise InputError(str(e))
    solver = (
        reconstruct.qutrit_phases if est.kind == "qutrit"
        else reconstruct.ququart_phases
    )
    try:
        result = solver(est)
    except reconstruct.PhaseUnobservable as e:
        result = e.result
        print(f"warning: {e}", file=sys.stderr)
    except reconstruct.Inconsistent as e:
        raise ContractError(str(e))
    _emit_json(result.to_dict())
    return EXIT_OK


def _sweep_rows(family, grid_n):
    if grid_n < 2:
        raise InputError("--grid must be at least 2")
    rows = []
    if family == "fig1":
        header = ("c_plus", "K", "C", "S_r")
        for c_plus in np.linspace(-1.0, 1.0, grid_n):
            c2 = math.sqrt(max(0.0, 1.0 - c_plus * c_plus))
            state = qutrit.from_bell(
                qutrit.BellCoefficients(c_plus=float(c_plus), c_minus=0.0, c2=c2)
            )
            rep = qutrit.quantify(state)
            rows.append((float(c_plus), rep.schmidt_k, rep.concurrence, rep.entropy))
    elif family in ("fig4", "fig5"):
        header = ("phi", "K", "C_I", "S_r")
        for phi in np.linspace(0.0, math.pi, grid_n):
            if family == "fig4":
                state, _, _ = ququart.family_psi_phi(float(phi))
            else:
                state = ququart.family_psi_phi_prime(float(phi))
            rep = ququart.quantify(state)
            rows.append((float(phi), rep.schmidt_k, rep.i_concurrence, rep.entropy))
    else:
        raise InputError(f"unknown sweep family {family!r}")
    return header, rows


def cmd_sweep(args):
    header, rows = _sweep_rows(args.family, args.grid)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(jsonio.csv_cell(x) for x in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as e:
            print(f"error: cannot write {args.out}: {e}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and entry points
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="biphoton",
        description="Biphoton qutrit/ququart entanglement toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantify", help="entanglement and polarization report")
    _add_state_args(p)
    p.add_argument("--dump-density", action="store_true",
                   help="include the full two-photon density matrix "
                        "(4x4 for qutrits, 16x16 for ququarts)")
    p.set_defaults(func=cmd_quantify)

    p = sub.add_parser("sweep", help="CSV sweep of a named figure family")
    p.add_argument("--family", required=True, choices=("fig1", "fig4", "fig5"))
    p.add_argument("--grid", type=int, default=100, help="number of grid points")
    p.add_argument("--out", help="CSV output path (stdout when omitted)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="coincidence record for a state")
    _add_state_args(p)
    p.add_argument("--basis", choices=measurement.BASES, default="natural")
    p.add_argument("--eta", type=float, default=1.0,
                   help="detector/collection efficiency in (0, 1]")
    p.add_argument("--pairs", type=int, default=1_000_000,
                   help="number of generated pairs")
    p.add_argument("--noise", choices=measurement.NOISE_MODES, default="ideal")
    p.add_argument("--seed", type=int,
                   help=f"sampling seed (falls back to ${SEED_ENV}, then 0)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct",
                       help="recover a state from a natural + rotated45 record pair")
    p.add_argument("records", nargs="*",
                   help="files holding one JSON record per line (stdin when omitted)")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("compare-2qubit",
                       help="two-qudit vs frequency-blind two-qubit quantifiers")
    _add_state_args(p)
    p.set_defaults(func=cmd_compare_2qubit)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code if e.code is not None else 0
        return code if isinstance(code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ContractError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONTRACT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


def console_main():
    sys.exit(main())
