import argparse
import logging
import sys
from pathlib import Path

# Import our custom modules
from components.chromatic_solver import ChromaticSolver
from components.coloring_builder import u3_hero_coloring
from components.containment_checker import contains_subtournament, is_hero, is_minimal_nonhero, survey_max_chromatic
from components.family_generator import FamilySpec, generate
from components.forest_analyzer import build_incomparable_map, find_forest_ordering, forest_two_coloring, is_forest_ordering, valid_forest_cuts
from components.isomorphism import canonical_form, canonical_representative, enumerate_tournaments
from components.structure_analyzer import is_prime, member_A, member_AF, member_D
from components.tournament_file import read_tournament, serialize, write_tournament
from components.verification_harness import SUITES, VerificationHarness
from utils.errors import ConsistencyError, HeroixError, PreconditionError, UndecidedError
from utils.settings_manager import SettingsManager, get_settings

logger = logging.getLogger("heroix")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNDECIDED = 3


def _yes(flag):
    return "yes" if flag else "no"


def _format_coloring(coloring):
    return " ".join(str(c) for c in coloring.assign)


def _load_pattern(token):
    """A family token such as d3 or u:3, or a tournament file path."""
    if token == "-" or Path(token).is_file():
        return read_tournament(token)[0]
    return generate(FamilySpec.parse(token))


def command_gen(args, out):
    spec = FamilySpec.parse(args.family, args.param)
    T = generate(spec)
    comments = [spec.label]
    if args.out:
        write_tournament(args.out, T, comments=comments)
    else:
        out.write(serialize(T, comments=comments))
    return EXIT_OK


def command_chi(args, out):
    T, _ = read_tournament(args.file)
    solver = ChromaticSolver(T)
    if T.n > get_settings().chromatic_max_n:
        lower, upper, _ = solver.bounds()
        out.write(f"{lower}..{upper}\n")
        logger.warning("✗ %d vertices exceed the exact engine; bounds only", T.n)
        return EXIT_UNDECIDED
    k, _ = solver.chromatic_number()
    out.write(f"{k}\n")
    return EXIT_OK


def command_color(args, out):
    T, _ = read_tournament(args.file)
    if args.alg == "exact":
        _, coloring = ChromaticSolver(T).chromatic_number()
    elif args.alg == "forest":
        ordering = find_forest_ordering(T)
        if ordering is None:
            raise PreconditionError("not a forest tournament")
        coloring = forest_two_coloring(T, ordering)
    else:
        if args.n is None:
            raise PreconditionError("--alg u3hero needs --n")
        coloring = u3_hero_coloring(T, args.n)
    out.write(f"{coloring.k}\n{_format_coloring(coloring)}\n")
    return EXIT_OK


def command_contains(args, out):
    host, _ = read_tournament(args.host)
    pattern = _load_pattern(args.pattern)
    embedding = contains_subtournament(host, pattern)
    if embedding is None:
        out.write("no\n")
    else:
        out.write("yes " + " ".join(str(v) for v in embedding.map) + "\n")
    return EXIT_OK


def command_hero(args, out):
    T, _ = read_tournament(args.file)
    certificate = is_hero(T)
    if certificate.is_hero:
        out.write("hero\n")
    else:
        image = " ".join(str(v) for v in certificate.embedding.map)
        out.write(f"not a hero: contains {certificate.obstruction} at {image}\n")
    out.write("\n".join(certificate.derivation.render()) + "\n")
    return EXIT_OK


def command_forest(args, out):
    T, _ = read_tournament(args.file)
    found = find_forest_ordering(T)
    if found is None:
        out.write("not a forest tournament\n")
    else:
        out.write("forest " + " ".join(str(v) for v in found.seq) + "\n")
        cuts = valid_forest_cuts(T, found)
        if cuts:
            out.write("cuts " + " ".join(str(c) for c in cuts) + "\n")
    return EXIT_OK


def command_classify(args, out):
    T, _ = read_tournament(args.file)
    components = " | ".join(" ".join(str(v) for v in c) for c in T.strong_components())
    af = member_AF(T)
    lines = [
        f"vertices: {T.n}",
        f"canonical: {canonical_form(T)}",
        f"canonical rows: {'/'.join(canonical_representative(T).rows())}",
        f"strong components: {components}",
        f"prime: {_yes(is_prime(T))}",
        f"member_D: {_yes(member_D(T).member)}",
        f"member_A: {_yes(member_A(T).member)}",
        f"member_AF: {_yes(af.member)}" + (f" (case {af.case})" if af.member else ""),
        f"hero: {_yes(is_hero(T).is_hero)}",
        f"minimal non-hero: {_yes(is_minimal_nonhero(T))}",
    ]
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def command_incomparable(args, out):
    T, ordering = read_tournament(args.file)
    if not is_forest_ordering(T, ordering):
        ordering = find_forest_ordering(T)
        if ordering is None:
            raise PreconditionError("not a forest tournament")
    mapping = build_incomparable_map(T, ordering, args.r)
    out.write(" ".join(str(x) for x in mapping.phi) + "\n")
    return EXIT_OK


def command_enumerate(args, out):
    classes = enumerate_tournaments(args.n)
    blocks = [serialize(T, comments=[f"class {i + 1}/{len(classes)} {canonical_form(T)}"]) for i, T in enumerate(classes)]
    out.write("\n".join(blocks))
    return EXIT_OK


def command_survey(args, out):
    forbidden = [_load_pattern(token.strip()) for token in args.forbid.split(",") if token.strip()]
    frame = survey_max_chromatic(forbidden, args.max_n)
    out.write(frame.to_string(index=False) + "\n")
    return EXIT_OK


def command_verify(args, out):
    report = VerificationHarness(budget_sec=args.budget, long=args.long).run(args.suite)
    out.write(report.render() + "\n")
    return report.exit_status


def build_parser():
    parser = argparse.ArgumentParser(prog="heroix", description="Tournament colouring toolkit")
    parser.add_argument("--verbose", action="store_true", help="log progress at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a family member")
    p.add_argument("family")
    p.add_argument("param", nargs="?")
    p.add_argument("--out")
    p.set_defaults(handler=command_gen)

    p = sub.add_parser("chi", help="exact chromatic number")
    p.add_argument("file")
    p.set_defaults(handler=command_chi)

    p = sub.add_parser("color", help="colour a tournament")
    p.add_argument("file")
    p.add_argument("--alg", choices=("exact", "forest", "u3hero"), default="exact")
    p.add_argument("--n", type=int)
    p.set_defaults(handler=command_color)

    p = sub.add_parser("contains", help="look for PATTERN inside HOST")
    p.add_argument("host")
    p.add_argument("pattern")
    p.set_defaults(handler=command_contains)

    for name, handler, help_text in (
        ("hero", command_hero, "hero verdict with derivation"),
        ("forest", command_forest, "find a forest ordering"),
        ("classify", command_classify, "structural summary"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        p.set_defaults(handler=handler)

    p = sub.add_parser("incomparable", help="r-incomparable map of a forest tournament")
    p.add_argument("file")
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(handler=command_incomparable)

    p = sub.add_parser("enumerate", help="one tournament per isomorphism class")
    p.add_argument("n", type=int)
    p.set_defaults(handler=command_enumerate)

    p = sub.add_parser("survey", help="largest χ among tournaments avoiding the given ones")
    p.add_argument("--forbid", required=True)
    p.add_argument("--max-n", dest="max_n", type=int, required=True)
    p.set_defaults(handler=command_survey)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--long", action="store_true")
    p.add_argument("--budget", type=float)
    p.set_defaults(handler=command_verify)
    return parser


def run(argv, stream=None):
    """
    Run one command.

    Args:
        argv (list of str): Arguments without the program name
        stream (file-like, optional): Command output, default stdout

    Returns:
        int: Exit code
    """
    out = stream if stream is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    SettingsManager().configure_logging(verbose=args.verbose)
    try:
        return args.handler(args, out)
    except UndecidedError as e:
        print(f"heroix: undecided: {e}", file=sys.stderr)
        return EXIT_UNDECIDED
    except ConsistencyError as e:
        print(f"heroix: internal inconsistency: {e}", file=sys.stderr)
        return EXIT_FAIL
    except HeroixError as e:
        print(f"heroix: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
