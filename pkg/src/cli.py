"""Command-line interface for the Cremona prime-order oracle.

Usage:
    cremona-oracle oracle --field Q --ell 7
    cremona-oracle --json oracle --field F17 --ell 13
    cremona-oracle weyl orbit --r 7
    cremona-oracle birmap order --map "x*z, x*(z-y), z*(x-y)"
    cremona-oracle selftest
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from src.models.cremona import (
    BinaryFormGram,
    automorph_group,
    create_knowledge_base,
    cremona_has_order,
    cyclotomic_character_generator,
    cyclotomic_invariants,
    enumerate_descent_cases,
    explicit_rank2_basis,
    geiser_pairs,
    hexagon_fan,
    load_limits,
    minimal_order_action,
    minkowski_report,
    minus_one_classes,
    order7_conjugacy_certificate,
    order7_invariants,
    parse_field,
    parse_map,
    pgl_bound,
    projective_order,
    quadrangle_fan,
    run_selftest,
    torus_bound,
    weyl_group_order,
    weyl_orbit,
)
from src.models.cremona.knowledge_base import CremonaKnowledgeBase, Limits
from src.models.cremona.selftest import summary_rows
from src.models.cremona.weyl_lattice import (
    STATED_RANK2_GRAM,
    sigma_fixed_geiser_pairs,
    sum_of_exceptional,
)
from src.utils.exceptions import (
    CapExceededError,
    CremonaOracleError,
    InvalidParameterError,
    SelfCheckError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_INTERNAL = 2

CommandResult = Tuple[Any, List[str]]
Handler = Callable[[argparse.Namespace, CremonaKnowledgeBase, Limits], CommandResult]

_GLOBAL_OPTIONS = {"json", "verbose", "limits", "kb_dir", "handler", "command_path"}

# Plain-text rendering of result keys whose value is None.
_NONE_TEXT = {"order": "exceeds max_k ({max_k})"}


class SelftestFailed(CremonaOracleError):
    """At least one acceptance check failed."""


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected integers a,b,...: {text}") from e


def _fan(name: str) -> Any:
    return hexagon_fan() if name == "hexagon" else quadrangle_fan()


# -- Handlers --


def _invariants(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    field = parse_field(args.field)
    invariants = cyclotomic_invariants(field, args.ell, limits)
    result = invariants.model_dump(mode="json")
    result["cyclotomic_character"] = cyclotomic_character_generator(
        field, args.ell, limits
    )
    return result, []


def _bounds(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    if args.kind == "minkowski":
        report = minkowski_report(args.n, args.ell)
    elif args.kind == "pgl":
        report = pgl_bound(args.n, parse_field(args.field), args.ell, limits)
    else:
        report = torus_bound(args.n, parse_field(args.field), args.ell, limits)
    citations = [report.certificate.split(":")[0]] if report.certificate else []
    return report, citations


def _oracle(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    report = cremona_has_order(parse_field(args.field), args.ell, kb, limits)
    return report, report.citations


def _dp6_cases(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    cases = enumerate_descent_cases(_fan(args.fan), kb, limits)
    rows = [
        {
            "label": c.label,
            "group": c.group,
            "order": c.order,
            "cyclic": c.cyclic,
            "picard_rank": c.picard_rank,
            "anisotropic": c.anisotropic,
        }
        for c in cases
    ]
    return rows, []


def _dp6_minimal(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    verdict = minimal_order_action(
        _fan(args.fan), parse_field(args.field), args.ell, kb, limits
    )
    tag = "dp6-minimal-action" if args.fan == "hexagon" else "dp8-quadrangle"
    return verdict, [tag]


def _weyl_orbit(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    start = args.start or sum_of_exceptional(args.r, min(7, args.r))
    orbit = weyl_orbit(start, args.r, limits)
    return {
        "r": args.r,
        "start": list(start),
        "orbit_size": len(orbit),
        "weyl_group_order": weyl_group_order(args.r, limits),
    }, []


def _weyl_classes(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    classes = minus_one_classes(args.r)
    result: Dict[str, Any] = {"r": args.r, "count": len(classes)}
    if args.list:
        result["classes"] = [list(c) for c in classes]
    return result, []


def _weyl_pairs(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    pairs = geiser_pairs(limits)
    return {
        "pairs": len(pairs),
        "pairs_mod_7": len(pairs) % 7,
        "sigma_fixed_pairs": sigma_fixed_geiser_pairs(limits),
    }, []


def _weyl_invariants(
    args: argparse.Namespace, kb: Any, limits: Limits
) -> CommandResult:
    result = order7_invariants(args.r).model_dump(mode="json")
    if args.r == 8:
        result["explicit_basis"] = explicit_rank2_basis().model_dump(mode="json")
    return result, []


def _weyl_automorphs(
    args: argparse.Namespace, kb: Any, limits: Limits
) -> CommandResult:
    gram = STATED_RANK2_GRAM
    if args.gram:
        if len(args.gram) != 3:
            raise InvalidParameterError(f"--gram needs a,b,c, got {args.gram}")
        a, b, c = args.gram
        gram = BinaryFormGram(matrix=((a, b), (b, c)))
    return automorph_group(gram), []


def _birmap_order(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    f = parse_map(args.map, limits)
    order = projective_order(f, args.max_k, args.modulus, limits)
    return {
        "map": list(f.to_text()),
        "degree": f.degree,
        "order": order,
        "max_k": args.max_k or limits.projective_order_max_k,
        "modulus": args.modulus,
    }, ["dp5-quadratic-map"] if order == 5 else []


def _conjugacy7(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    certificate = order7_conjugacy_certificate(parse_field(args.field), kb, limits)
    return certificate, certificate.citations


def _selftest(args: argparse.Namespace, kb: Any, limits: Limits) -> CommandResult:
    report = run_selftest(kb, limits)
    return report, []


# -- Parser --


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cremona-oracle",
        description="Prime orders of elements of the plane Cremona group Cr2(k)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Fields:
  Q, F<q> (q a prime power), Q(zeta<n>)

Exit Codes:
  0 = Success
  1 = Usage, domain or configuration error (bad field, l = char, ...)
  2 = Computational cap exceeded, failed self-check or failed selftest
        """,
    )
    parser.add_argument("--json", action="store_true", help="Output as JSON")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--limits", type=Path, help="Override configs/limits.yaml")
    parser.add_argument("--kb-dir", type=Path, help="Override configs/cremona_kb/")
    commands = parser.add_subparsers(dest="command", required=True)

    # Output flags are also accepted after the subcommand.
    output_flags = argparse.ArgumentParser(add_help=False)
    for flag in ("--json", "--verbose"):
        output_flags.add_argument(flag, action="store_true", default=argparse.SUPPRESS)

    def leaf(
        group: Any, name: str, handler: Handler, path: str, help_text: str
    ) -> argparse.ArgumentParser:
        sub = group.add_parser(name, help=help_text, parents=[output_flags])
        sub.set_defaults(handler=handler, command_path=path)
        return sub

    def field_ell(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--field", required=True, help="Field descriptor")
        sub.add_argument("--ell", type=int, required=True, help="The prime l")

    field_ell(leaf(commands, "invariants", _invariants, "invariants", "t_l and m_l"))

    bounds = commands.add_parser("bounds", help="Minkowski and Serre bounds")
    bound_kinds = bounds.add_subparsers(dest="kind", required=True)
    minkowski = leaf(bound_kinds, "minkowski", _bounds, "bounds minkowski", "GL_n(Q)")
    minkowski.add_argument("--n", type=int, required=True)
    minkowski.add_argument("--ell", type=int, required=True)
    pgl = leaf(bound_kinds, "pgl", _bounds, "bounds pgl", "PGL_{n+1}(k)")
    pgl.add_argument("--n", type=int, required=True)
    field_ell(pgl)
    torus = leaf(bound_kinds, "torus", _bounds, "bounds torus", "k-tori")
    torus.add_argument("--dim", dest="n", type=int, required=True)
    field_ell(torus)

    field_ell(leaf(commands, "oracle", _oracle, "oracle", "Decide Cr2(k) order l"))

    dp6 = commands.add_parser("dp6", help="Toric Del Pezzo descent")
    dp6_commands = dp6.add_subparsers(dest="action", required=True)
    cases = leaf(dp6_commands, "cases", _dp6_cases, "dp6 cases", "Descent cases")
    minimal = leaf(
        dp6_commands, "minimal", _dp6_minimal, "dp6 minimal", "Minimal action"
    )
    for sub in (cases, minimal):
        sub.add_argument(
            "--fan", choices=("hexagon", "quadrangle"), default="hexagon"
        )
    field_ell(minimal)

    weyl = commands.add_parser("weyl", help="Picard lattices and Weyl groups")
    weyl_commands = weyl.add_subparsers(dest="action", required=True)
    orbit = leaf(weyl_commands, "orbit", _weyl_orbit, "weyl orbit", "W(E_r) orbit")
    orbit.add_argument("--r", type=int, default=7, choices=range(3, 9))
    orbit.add_argument("--start", type=_int_list, help="Class as a0,b1,...,br")
    classes = leaf(
        weyl_commands, "classes", _weyl_classes, "weyl classes", "(-1)-classes"
    )
    classes.add_argument("--r", type=int, default=7, choices=range(3, 9))
    classes.add_argument("--list", action="store_true", help="List the classes")
    leaf(weyl_commands, "pairs", _weyl_pairs, "weyl pairs", "Geiser pairs")
    invariants = leaf(
        weyl_commands, "invariants", _weyl_invariants, "weyl invariants", "Order 7"
    )
    invariants.add_argument("--r", type=int, default=8, choices=(7, 8))
    automorphs = leaf(
        weyl_commands, "automorphs", _weyl_automorphs, "weyl automorphs", "Forms"
    )
    automorphs.add_argument("--gram", type=_int_list, help="a,b,c for [[a,b],[b,c]]")

    birmap = commands.add_parser("birmap", help="Plane Cremona maps")
    birmap_commands = birmap.add_subparsers(dest="action", required=True)
    order = leaf(
        birmap_commands, "order", _birmap_order, "birmap order", "Projective order"
    )
    order.add_argument("--map", required=True, help='e.g. "x*z, x*(z-y), z*(x-y)"')
    order.add_argument("--max-k", dest="max_k", type=int)
    order.add_argument("--modulus", type=int, help="Test over F_p")

    conjugacy = leaf(
        commands, "conjugacy7", _conjugacy7, "conjugacy7", "Order-7 conjugacy"
    )
    conjugacy.add_argument("--field", required=True, help="Field descriptor")

    leaf(commands, "selftest", _selftest, "selftest", "Run the acceptance suite")
    return parser


# -- Output --


def _jsonable(result: Any) -> Any:
    if isinstance(result, BaseModel):
        return result.model_dump(mode="json")
    if isinstance(result, list):
        return [_jsonable(item) for item in result]
    return result


def render_json(
    command: str, inputs: Dict[str, Any], result: Any, citations: List[str]
) -> str:
    payload = {
        "command": command,
        "inputs": inputs,
        "result": _jsonable(result),
        "citations": citations,
    }
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def _render_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def _render_table(rows: List[Dict[str, Any]]) -> List[str]:
    if not rows:
        return ["(empty)"]
    headers = list(rows[0])
    cells = [[_render_value(row[h]) for h in headers] for row in rows]
    widths = [
        max(len(h), *(len(r[i]) for r in cells)) for i, h in enumerate(headers)
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in cells]
    return lines


def render_text(
    result: Any, citations: List[str], kb: CremonaKnowledgeBase
) -> str:
    if hasattr(result, "checks"):
        lines = _render_table(summary_rows(result))
    else:
        data = _jsonable(result)
        if isinstance(data, list):
            lines = _render_table(data)
        else:
            lines = []
            for key, value in data.items():
                if value is None and key in _NONE_TEXT:
                    lines.append(f"{key}: {_NONE_TEXT[key].format(**data)}")
                elif value not in (None, [], {}):
                    lines.append(f"{key}: {_render_value(value)}")
    for tag in citations:
        statement = kb.cite(tag) if kb.has_citation(tag) else ""
        lines.append(f"[{tag}] {statement}".rstrip())
    return "\n".join(lines)


# -- Entry point --


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed usage; bad input is a domain error
        return EXIT_OK if e.code in (0, None) else EXIT_DOMAIN_ERROR
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    inputs = {
        key: list(value) if isinstance(value, tuple) else value
        for key, value in vars(args).items()
        if key not in _GLOBAL_OPTIONS and key not in ("command", "kind", "action")
    }

    try:
        kb = create_knowledge_base(args.kb_dir)
        limits = load_limits(args.limits) if args.limits else load_limits()
        result, citations = args.handler(args, kb, limits)
        if hasattr(result, "checks") and not result.passed:
            failed = ", ".join(str(c.number) for c in result.failures)
            raise SelftestFailed(f"selftest checks failed: {failed}")
    except SelftestFailed as e:
        output = (
            render_json(args.command_path, inputs, result, citations)
            if args.json
            else render_text(result, citations, kb)
        )
        print(output)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (CapExceededError, SelfCheckError) as e:
        _report_error(args, e)
        return EXIT_INTERNAL
    except CremonaOracleError as e:
        _report_error(args, e)
        return EXIT_DOMAIN_ERROR

    if args.json:
        print(render_json(args.command_path, inputs, result, citations))
    else:
        print(render_text(result, citations, kb))
    return EXIT_OK


def _report_error(args: argparse.Namespace, error: Exception) -> None:
    logger.debug("Command %s failed", args.command_path, exc_info=True)
    if args.json:
        print(
            json.dumps(
                {"command": args.command_path, "error": str(error)}, sort_keys=True
            )
        )
    else:
        print(f"error: {error}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
