# Copyright 2025 The crysgroups Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Command line front end: build bundles, verify them, render reports and
run the oracle cross-checks.

Exit codes: 0 when every verdict is favourable, 1 when a check fails and 2
for invalid parameters.
"""

import argparse
import json
import logging
import os
import sys
from typing import Sequence

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError
from tabulate import tabulate

from crysgroups.config import Config
from crysgroups.entities import (
    BundlePayload,
    BundleSpec,
    Certificate,
    CertificateReport,
    CommandSpec,
)
from crysgroups.shared_libraries.errors import (
    CertificationRefused,
    CocycleError,
    ComputationError,
    OracleMismatchError,
    ParameterError,
)
from crysgroups.shared_libraries.log import setup_logging
from crysgroups.tools.cohomology import (
    certify_torsionfree,
    oracle_agreement,
    small_cyclic_modules,
)
from crysgroups.tools.crys import CHECKS, CrysGroup, build_crys, run_checks
from crysgroups.tools.endo import certify_indecomposable

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def parse_factors(text: str) -> list[tuple[int, int]]:
    """Parses "p^n,q^m"; a bare prime means exponent 1."""
    factors = []
    for part in text.split(","):
        base, _, exponent = part.strip().partition("^")
        try:
            factors.append((int(base), int(exponent) if exponent else 1))
        except ValueError as exc:
            raise ParameterError(
                f"cannot parse factor {part!r}", "factors written as p^n,q^m"
            ) from exc
    return factors


def _add_family_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--family",
        required=True,
        choices=["cyclic", "bicyclic", "alternating"],
        help="cyclic: composite cyclic holonomy; bicyclic: C_p x C_p; "
        "alternating: A_4",
    )
    parser.add_argument(
        "--factors",
        action="store",
        dest="factors",
        help="prime power factors of the cyclic group, e.g. 2^3,3^2",
    )
    parser.add_argument("--m", type=int, default=1, help="multiplicity m")
    parser.add_argument("--p", type=int, help="prime of C_p x C_p")
    parser.add_argument(
        "--n", type=int, default=None, help="tail length (bicyclic, alternating)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crysgroups",
        description="Build and certify torsionfree indecomposable "
        "crystallographic groups",
    )
    parser.add_argument(
        "--log-level", dest="log_level", default=None, help="logging level"
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    build = verbs.add_parser("build", help="write a bundle JSON")
    _add_family_arguments(build)
    build.add_argument("--seed", type=int, default=0)
    build.add_argument("--out", default="bundle.json", help="output path")
    build.add_argument(
        "--certify",
        action="store_true",
        help="run the full check suite and embed the certificates",
    )

    verify = verbs.add_parser("verify", help="certify a bundle")
    verify.add_argument("source", help="bundle JSON")
    verify.add_argument(
        "--checks",
        default=",".join(CHECKS),
        help=f"comma separated subset of {','.join(CHECKS)}",
    )
    verify.add_argument(
        "--oracle",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="force oracle cross-checks on or off",
    )
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--out", default=None, help="certificate JSON path")

    report = verbs.add_parser("report", help="render certificates as tables")
    report.add_argument("source", help="bundle or certificate JSON")

    oracle = verbs.add_parser("oracle", help="run the cross-check suites")
    _add_family_arguments(oracle)
    oracle.add_argument("--trials", type=int, default=None)
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--out", default=None, help="certificate JSON path")
    return parser


def _bundle_spec(args: argparse.Namespace) -> BundleSpec:
    if args.family == "cyclic":
        if not args.factors:
            raise ParameterError("--factors is required", "factors given")
        return BundleSpec(
            family="cyclic", factors=parse_factors(args.factors), m=args.m
        )
    if args.family == "bicyclic":
        if args.p is None:
            raise ParameterError("--p is required", "p given")
        return BundleSpec(
            family="bicyclic", p=args.p, n=0 if args.n is None else args.n
        )
    return BundleSpec(family="alternating", n=1 if args.n is None else args.n)


def command_from_args(args: argparse.Namespace, config: Config) -> CommandSpec:
    """Validates parsed arguments before any computation."""
    if args.verb in ("build", "oracle"):
        trials = getattr(args, "trials", None)
        return CommandSpec(
            verb=args.verb,
            bundle=_bundle_spec(args),
            out=args.out,
            seed=args.seed,
            certify=getattr(args, "certify", False),
            trials=trials or config.oracle_settings.random_cocycle_trials,
        )
    if args.verb == "verify":
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise ParameterError(
                f"unknown checks {unknown}", f"checks from {','.join(CHECKS)}"
            )
        return CommandSpec(
            verb="verify",
            source=args.source,
            checks=checks,
            oracle=args.oracle,
            out=args.out,
            seed=args.seed if args.seed is not None else 0,
        )
    return CommandSpec(verb="report", source=args.source)


def render_certificates(certificates: Sequence[Certificate]) -> str:
    rows = [
        [
            cert.kind.value,
            cert.verdict,
            "yes" if cert.passed else "NO",
            "yes" if cert.checked_against_oracle else "",
            cert.basis,
        ]
        for cert in certificates
    ]
    return tabulate(
        rows,
        headers=["check", "verdict", "passed", "oracle", "basis"],
        tablefmt="github",
    )


def _write(config: Config, path: str, text: str) -> str:
    target = config.resolve(path)
    directory = os.path.dirname(target)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(target, "w", encoding="utf-8") as handle:
        handle.write(text)
    logger.info("wrote %s", target)
    return target


def _read_json(config: Config, path: str) -> dict:
    with open(config.resolve(path), encoding="utf-8") as handle:
        return json.load(handle)


def _build(spec: CommandSpec, config: Config) -> int:
    crys = build_crys(spec.bundle, seed=spec.seed)
    status = EXIT_OK
    if spec.certify:
        certificates = run_checks(crys, CHECKS, config)
        print(render_certificates(certificates))
        status = EXIT_OK if all(c.passed for c in certificates) else EXIT_FAILED
    target = _write(config, spec.out, crys.to_payload().to_json())
    print(
        f"wrote {target}: {spec.bundle.family} bundle of dimension "
        f"{crys.dimension}, non_split={crys.non_split}"
    )
    return status


def _verify(spec: CommandSpec, config: Config) -> int:
    payload = BundlePayload.model_validate(_read_json(config, spec.source))
    crys = CrysGroup.from_payload(payload)
    certificates = run_checks(crys, spec.checks, config, spec.oracle)
    report = CertificateReport(
        bundle=spec.source,
        seed=spec.seed or payload.seed,
        checks=spec.checks,
        certificates=certificates,
    )
    out = spec.out or os.path.splitext(spec.source)[0] + ".certificates.json"
    _write(config, out, report.to_json())
    print(render_certificates(certificates))
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _report(spec: CommandSpec, config: Config) -> int:
    data = _read_json(config, spec.source)
    if "representation" in data:
        certificates = BundlePayload.model_validate(data).certificates
    else:
        certificates = CertificateReport.model_validate(data).certificates
    if not certificates:
        print(f"{spec.source}: no certificates")
        return EXIT_OK
    print(render_certificates(certificates))
    return EXIT_OK if all(c.passed for c in certificates) else EXIT_FAILED


def _oracle(spec: CommandSpec, config: Config) -> int:
    crys = build_crys(spec.bundle, seed=spec.seed, mark_split=False)
    rows, failed, certificates = [], False, []

    try:
        cert = certify_torsionfree(crys.cocycle, oracle=True)
        certificates.append(cert)
        rows.append(["torsion search vs coboundary", "agree", ""])
    except OracleMismatchError as exc:
        rows.append(["torsion search vs coboundary", "MISMATCH", str(exc)])
        failed = True

    rng = np.random.default_rng(spec.seed)
    compared, mismatches = oracle_agreement(
        small_cyclic_modules(), spec.trials, rng
    )
    rows.append(
        [
            f"{spec.trials} random cyclic cocycles",
            "agree" if not mismatches else "MISMATCH",
            f"{compared} comparisons, {len(mismatches)} mismatches",
        ]
    )
    failed = failed or bool(mismatches)

    if crys.dimension <= config.oracle_settings.max_degree:
        prime = (
            spec.bundle.factors[0][0]
            if spec.bundle.family == "cyclic"
            else spec.bundle.p or 2
        )
        try:
            cert = certify_indecomposable(
                crys.rep, prime, config.search_settings, oracle=True
            )
            certificates.append(cert)
            detail = (
                "enumerated"
                if cert.checked_against_oracle
                else "above enumeration limit"
            )
            rows.append(["locality vs idempotent enumeration", "agree", detail])
        except OracleMismatchError as exc:
            rows.append(
                ["locality vs idempotent enumeration", "MISMATCH", str(exc)]
            )
            failed = True
    else:
        rows.append(
            ["locality vs idempotent enumeration", "skipped", "degree too large"]
        )

    print(tabulate(rows, headers=["suite", "result", "detail"], tablefmt="github"))
    if spec.out:
        report = CertificateReport(
            bundle=spec.bundle.model_dump_json(),
            seed=spec.seed,
            checks=["oracle"],
            certificates=certificates,
        )
        _write(config, spec.out, report.to_json())
    return EXIT_FAILED if failed else EXIT_OK


_VERBS = {
    "build": _build,
    "verify": _verify,
    "report": _report,
    "oracle": _oracle,
}


def run_command(spec: CommandSpec, config: Config | None = None) -> int:
    """Executes a validated command and returns its exit code."""
    config = config or Config()
    try:
        return _VERBS[spec.verb](spec, config)
    except ParameterError as exc:
        print(f"invalid parameters: {exc.hypothesis} ({exc})", file=sys.stderr)
        return EXIT_INVALID
    except (
        CertificationRefused,
        CocycleError,
        ComputationError,
        OracleMismatchError,
    ) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    config = Config()
    args = build_parser().parse_args(argv)
    setup_logging(
        args.log_level or config.LOG_LEVEL,
        config.resolve("logs") if config.LOG_TO_FILE else None,
    )
    try:
        spec = command_from_args(args, config)
    except ParameterError as exc:
        print(f"invalid parameters: {exc.hypothesis} ({exc})", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    logger.debug("running %s", spec.model_dump())
    return run_command(spec, config)


if __name__ == "__main__":
    sys.exit(main())
