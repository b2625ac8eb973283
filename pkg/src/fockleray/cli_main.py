"""
Command line front end: dimension tables, necklaces, bases, projections of fields read
from JSON, and the verification suite.

Exit codes: 0 success, 1 some check did not pass, 2 bad arguments or bad input. Results
go to stdout (or --out), logs and diagnostics go to stderr.
"""

import argparse
import dataclasses
import json
import logging
import math
import sys
from typing import Any, Dict, List, Literal, Optional, Sequence, TextIO, Tuple, cast

import pandas as pd

from fockleray.bases import (
    dim_report,
    dimension_table,
    divfree_basis,
    omega_set,
    zeta_basis,
)
from fockleray.config import DEFAULT_SEED
from fockleray.fock import VectorField
from fockleray.linalg import format_scalar
from fockleray.projections import cyclic_gradient_basis, leray, project_cyclic
from fockleray.shared import (
    MalformedInputError,
    UnsupportedModeError,
    dumps_deterministic,
)
from fockleray.verify import CHECKS, plan_suite, run_suite
from fockleray.words import enumerate_orbit_reps, orbit_of

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


@dataclasses.dataclass(frozen=True)
class CliConfig:
    command: str
    n: int
    format: str = "json"
    # None means the default for the command, which is float for the ζ-basis and exact
    # everywhere else
    mode: Optional[str] = None
    degree: Optional[int] = None
    max_degree: Optional[int] = None
    kind: Optional[str] = None
    normalize: bool = False
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    seed: int = DEFAULT_SEED
    trials: Optional[int] = None
    checks: Sequence[str] = ()
    all_checks: bool = False
    workers: Optional[int] = None
    verbose: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        return cls(
            command=args.command,
            n=args.n,
            format=args.format,
            mode=args.mode,
            degree=getattr(args, "degree", None),
            max_degree=getattr(args, "max_degree", None),
            kind=getattr(args, "kind", None),
            normalize=getattr(args, "normalize", False),
            input_path=getattr(args, "input_path", None),
            output_path=args.out,
            seed=getattr(args, "seed", DEFAULT_SEED),
            trials=getattr(args, "trials", None),
            checks=tuple(getattr(args, "check", None) or ()),
            all_checks=getattr(args, "all", False),
            workers=getattr(args, "workers", None),
            verbose=args.verbose,
        )

    @property
    def exact(self) -> bool:
        return self.mode != "float"


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="alphabet size")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--mode", choices=["exact", "float"])
    parser.add_argument("--out", help="write to this file instead of stdout")
    parser.add_argument("--verbose", action="store_true")


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockleray",
        description="Cyclic gradients, free divergence-free fields and the free Leray "
        "projection on the full Fock space",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    dims = subparsers.add_parser("dims", help="dimension table for k = 0..max-degree")
    _add_common_arguments(dims)
    dims.add_argument("--max-degree", type=int, required=True)

    necklaces = subparsers.add_parser(
        "necklaces", help="orbit representatives of words of length --degree"
    )
    _add_common_arguments(necklaces)
    necklaces.add_argument("--degree", type=int, required=True)

    basis = subparsers.add_parser("basis", help="basis vectors of degree --degree")
    _add_common_arguments(basis)
    basis.add_argument("--degree", type=int, required=True)
    basis.add_argument(
        "--kind", choices=["gradient", "divfree", "zeta", "omega"], required=True
    )
    basis.add_argument(
        "--normalize",
        action="store_true",
        help="also emit unit-norm float versions of the vectors",
    )

    project = subparsers.add_parser("project", help="project a field read from JSON")
    _add_common_arguments(project)
    project.add_argument("--in", dest="input_path", required=True)
    project.add_argument("--kind", choices=["cyclic", "leray"], required=True)

    verify = subparsers.add_parser("verify", help="run the verification suite")
    _add_common_arguments(verify)
    verify.add_argument("--max-degree", type=int, required=True)
    which = verify.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true")
    which.add_argument("--check", action="append", choices=list(CHECKS))
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--trials", type=int)
    verify.add_argument("--workers", type=int)

    return parser


def _to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator="\n")


def _field_rows(field: VectorField, **extra: Any) -> List[Dict[str, Any]]:
    return [
        {
            **extra,
            "word": ".".join(str(letter) for letter in letters),
            "dir": j,
            "value": format_scalar(value),
        }
        for (letters, j), value in field.sorted_items()
    ]


def _normalized(field: VectorField) -> VectorField:
    return field.to_float() / math.sqrt(abs(complex(field.norm_squared())))


def _dims(config: CliConfig) -> str:
    assert config.max_degree is not None
    table = dimension_table(config.n, config.max_degree)
    if config.format == "csv":
        return _to_csv(table)
    # rebuilt from the reports so that the JSON only holds python ints
    return dumps_deterministic(
        [dim_report(config.n, k).as_row() for k in range(config.max_degree + 1)]
    )


def _necklaces(config: CliConfig) -> str:
    assert config.degree is not None
    orbits = [orbit_of(rep) for rep in enumerate_orbit_reps(config.n, config.degree)]
    if config.format == "csv":
        return _to_csv(
            pd.DataFrame.from_records(
                [
                    {
                        "representative": ".".join(
                            str(letter) for letter in orbit.representative.letters
                        ),
                        "size": orbit.size,
                        "stabilizer_order": orbit.stabilizer_order,
                    }
                    for orbit in orbits
                ],
                columns=["representative", "size", "stabilizer_order"],
            )
        )
    return dumps_deterministic(
        {
            "n": config.n,
            "k": config.degree,
            "count": len(orbits),
            "orbits": [
                {
                    "word": list(orbit.representative.letters),
                    "size": orbit.size,
                    "stabilizer_order": orbit.stabilizer_order,
                }
                for orbit in orbits
            ],
        }
    )


def _basis(config: CliConfig) -> str:
    assert config.degree is not None
    n, k = config.n, config.degree

    if config.kind == "omega":
        words = omega_set(n, k)
        if config.format == "csv":
            return _to_csv(
                pd.DataFrame(
                    {"word": [".".join(map(str, w.letters)) for w in words]},
                    columns=["word"],
                )
            )
        return dumps_deterministic(
            {"n": n, "k": k, "kind": "omega", "words": [list(w.letters) for w in words]}
        )

    squared_norms: List[Optional[int]]
    if config.kind == "gradient":
        elements = cyclic_gradient_basis(n, k)
        vectors = [element.vector for element in elements]
        squared_norms = [element.squared_norm for element in elements]
    elif config.kind == "divfree":
        vectors = divfree_basis(n, k)
        squared_norms = [None] * len(vectors)
    else:
        # an explicit --mode exact makes zeta_basis raise UnsupportedModeError
        zeta_mode = "float" if config.mode is None else config.mode
        vectors = zeta_basis(n, k, cast(Literal["exact", "float"], zeta_mode))
        squared_norms = [None] * len(vectors)

    mode = "float" if config.kind == "zeta" else ("exact" if config.exact else "float")
    if mode == "float":
        vectors = [v.to_float() for v in vectors]

    if config.format == "csv":
        rows = []
        for index, v in enumerate(vectors):
            rows.extend(_field_rows(v, index=index, normalized=False))
            if config.normalize:
                rows.extend(_field_rows(_normalized(v), index=index, normalized=True))
        return _to_csv(
            pd.DataFrame.from_records(
                rows, columns=["index", "normalized", "word", "dir", "value"]
            )
        )

    entries = []
    for v, squared_norm in zip(vectors, squared_norms):
        entry: Dict[str, Any] = {"field": v.to_json_dict()}
        if squared_norm is not None:
            entry["squared_norm"] = squared_norm
        if config.normalize:
            entry["normalized"] = _normalized(v).to_json_dict()
        entries.append(entry)
    return dumps_deterministic(
        {
            "n": n,
            "k": k,
            "kind": config.kind,
            "mode": mode,
            "count": len(entries),
            "vectors": entries,
        }
    )


def _project(config: CliConfig) -> str:
    assert config.input_path is not None
    with open(config.input_path, "r", encoding="utf-8") as f:
        data = json.load(f)
    field = VectorField.from_json_dict(data)
    if field.n != config.n:
        raise MalformedInputError(
            f"The input field has n = {field.n} but --n {config.n} was given"
        )
    if config.mode == "float":
        field = field.to_float()
    elif config.mode == "exact" and not field.is_exact:
        raise UnsupportedModeError(
            "--mode exact needs num/den coefficients, the input field has re/im ones"
        )

    result = project_cyclic(field) if config.kind == "cyclic" else leray(field)
    if config.format == "csv":
        return _to_csv(
            pd.DataFrame.from_records(
                _field_rows(result), columns=["word", "dir", "value"]
            )
        )
    return dumps_deterministic(result.to_json_dict())


def _verify(config: CliConfig) -> Tuple[str, bool]:
    assert config.max_degree is not None
    plan = plan_suite(
        config.n,
        config.max_degree,
        config.seed,
        None if config.all_checks else config.checks,
        config.trials,
    )
    reports = run_suite(plan, config.workers)
    passed = all(report.passed for report in reports)

    if config.format == "csv":
        output = _to_csv(
            pd.DataFrame.from_records(
                [
                    {
                        "name": report.name,
                        "params": json.dumps(report.params, sort_keys=True),
                        "passed": report.passed,
                        "mode": report.mode,
                    }
                    for report in reports
                ],
                columns=["name", "params", "passed", "mode"],
            )
        )
    else:
        output = dumps_deterministic(
            {
                "passed": passed,
                "reports": [report.to_json_dict() for report in reports],
            }
        )
    return output, passed


def _write(output: str, path: Optional[str], stdout: TextIO) -> None:
    if path is None:
        stdout.write(output)
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(output)


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Runs one command and returns the exit code"""
    if stdout is None:
        stdout = sys.stdout

    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed the usage message
        return EXIT_USAGE if e.code else EXIT_OK

    config = CliConfig.from_args(args)
    if config.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    logging.debug(f"Running with {config}")

    passed = True
    try:
        if config.command == "dims":
            output = _dims(config)
        elif config.command == "necklaces":
            output = _necklaces(config)
        elif config.command == "basis":
            output = _basis(config)
        elif config.command == "project":
            output = _project(config)
        elif config.command == "verify":
            output, passed = _verify(config)
        else:
            raise ValueError(f"Unexpected command {config.command}")
        _write(output, config.output_path, stdout)
    except (MalformedInputError, UnsupportedModeError, ValueError, OSError) as e:
        print(f"fockleray {config.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if not passed:
        logging.warning("Some checks did not pass")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def command_line_main() -> None:
    logging.basicConfig(level=logging.INFO)
    sys.exit(main())


if __name__ == "__main__":
    command_line_main()
